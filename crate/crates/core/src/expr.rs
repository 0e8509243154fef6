//! Measure values on the right of `=`: exact numbers, univariate linear
//! forms like `2x + 5`, or opaque symbolic text.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Exact rational used for every numeric measure.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprValue {
    Number(Rational),
    Linear {
        coefficient: Rational,
        variable: String,
        constant: Rational,
    },
    Symbolic(String),
}

#[derive(Debug, Clone)]
pub struct Expr {
    raw: String,
    value: ExprValue,
}

impl Expr {
    pub fn parse(text: &str) -> Expr {
        let raw = text.split_whitespace().collect::<Vec<_>>().join(" ");
        let stripped: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let value = parse_linear(&stripped).unwrap_or(ExprValue::Symbolic(stripped));
        Expr { raw, value }
    }

    pub fn number(value: Rational) -> Expr {
        let value = ExprValue::Number(value);
        Expr {
            raw: render_value(&value),
            value,
        }
    }

    pub fn integer(n: i64) -> Expr {
        Expr::number(Rational::from_integer(BigInt::from(n)))
    }

    /// Whitespace-normalized source text.
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn value(&self) -> &ExprValue {
        &self.value
    }

    pub fn as_number(&self) -> Option<&Rational> {
        match &self.value {
            ExprValue::Number(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_integer(&self, n: i64) -> bool {
        self.as_number()
            .is_some_and(|v| *v == Rational::from_integer(BigInt::from(n)))
    }

    /// Canonical text: equal for equal values.
    pub fn canonical(&self) -> String {
        render_value(&self.value)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Expr {}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

fn render_value(value: &ExprValue) -> String {
    match value {
        ExprValue::Number(n) => render_rational(n),
        ExprValue::Linear {
            coefficient,
            variable,
            constant,
        } => {
            let mut out = if coefficient.is_one() {
                String::new()
            } else if *coefficient == -Rational::one() {
                "-".to_string()
            } else {
                render_rational(coefficient)
            };
            out.push_str(variable);
            if constant.is_positive() {
                out.push_str(" + ");
                out.push_str(&render_rational(constant));
            } else if constant.is_negative() {
                out.push_str(" - ");
                out.push_str(&render_rational(&-constant.clone()));
            }
            out
        }
        ExprValue::Symbolic(s) => s.clone(),
    }
}

/// Terminating decimals render as decimals, everything else as `p/q`.
pub fn render_rational(value: &Rational) -> String {
    let denom = value.denom().clone();
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), denom);
    }
    let places = twos.max(fives) as usize;
    if places == 0 {
        return value.numer().to_string();
    }
    let scaled = value * Rational::from_integer(BigInt::from(10).pow(places as u32));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

fn parse_number(s: &[u8], i: &mut usize) -> Option<Rational> {
    let start = *i;
    while *i < s.len() && s[*i].is_ascii_digit() {
        *i += 1;
    }
    if *i == start {
        return None;
    }
    let int_part = std::str::from_utf8(&s[start..*i]).ok()?;
    let mut numer: BigInt = int_part.parse().ok()?;
    let mut denom = BigInt::one();
    if *i + 1 < s.len() && s[*i] == b'.' && s[*i + 1].is_ascii_digit() {
        *i += 1;
        let frac_start = *i;
        while *i < s.len() && s[*i].is_ascii_digit() {
            *i += 1;
        }
        let frac = std::str::from_utf8(&s[frac_start..*i]).ok()?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        numer = numer * &scale + frac.parse::<BigInt>().ok()?;
        denom = scale;
    }
    Some(Rational::new(numer, denom))
}

fn parse_linear(s: &str) -> Option<ExprValue> {
    let b = s.as_bytes();
    if b.is_empty() {
        return None;
    }
    let mut i = 0;
    let mut coefficient = Rational::zero();
    let mut constant = Rational::zero();
    let mut variable: Option<String> = None;
    let mut first = true;
    while i < b.len() {
        let mut sign = Rational::one();
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if !first {
            return None;
        }
        first = false;
        let mut factor = parse_number(b, &mut i);
        if let Some(f) = &factor {
            if i < b.len() && b[i] == b'/' {
                i += 1;
                let d = parse_number(b, &mut i)?;
                if d.is_zero() {
                    return None;
                }
                factor = Some(f / d);
            }
        }
        let var_start = i;
        while i < b.len() && b[i].is_ascii_lowercase() {
            i += 1;
        }
        let var = &s[var_start..i];
        match (factor, var.is_empty()) {
            (None, true) => return None,
            (Some(f), true) => constant += sign * f,
            (f, false) => {
                match &variable {
                    Some(v) if v != var => return None,
                    _ => variable = Some(var.to_string()),
                }
                coefficient += sign * f.unwrap_or_else(Rational::one);
            }
        }
    }
    Some(match variable {
        Some(variable) if !coefficient.is_zero() => ExprValue::Linear {
            coefficient,
            variable,
            constant,
        },
        _ => ExprValue::Number(constant),
    })
}
