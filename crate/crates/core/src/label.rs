//! Point labels such as `A`, `B'`, `A_{1}` and the splitting of
//! concatenated runs like `A_{1}B_{1}C_{1}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LabelError;

/// Digit subscript of a label. Ordered numerically-by-length so that
/// `A_2 < A_10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subscript(String);

impl Subscript {
    pub fn new(digits: impl Into<String>) -> Result<Self, LabelError> {
        let digits = digits.into();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LabelError::BadSubscript(digits));
        }
        Ok(Subscript(digits))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Ord for Subscript {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Subscript {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point vertex symbol: uppercase letter, optional primes, optional
/// digit subscript.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointLabel {
    base: char,
    primes: u8,
    subscript: Option<Subscript>,
}

impl PointLabel {
    pub fn new(base: char, primes: u8, subscript: Option<Subscript>) -> Result<Self, LabelError> {
        if !base.is_ascii_uppercase() {
            return Err(LabelError::BadBase(base));
        }
        Ok(PointLabel {
            base,
            primes,
            subscript,
        })
    }

    /// Plain single-letter label.
    pub fn letter(base: char) -> Self {
        assert!(base.is_ascii_uppercase(), "label base must be A-Z");
        PointLabel {
            base,
            primes: 0,
            subscript: None,
        }
    }

    pub fn with_subscript(base: char, digits: &str) -> Self {
        let mut label = Self::letter(base);
        label.subscript = Some(Subscript::new(digits).expect("digit subscript"));
        label
    }

    pub fn base(&self) -> char {
        self.base
    }

    pub fn primes(&self) -> u8 {
        self.primes
    }

    pub fn subscript(&self) -> Option<&str> {
        self.subscript.as_ref().map(Subscript::as_str)
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for _ in 0..self.primes {
            f.write_str("'")?;
        }
        if let Some(sub) = &self.subscript {
            write!(f, "_{{{}}}", sub.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for PointLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut labels = split_point_run(s)?;
        if labels.len() != 1 {
            return Err(LabelError::NotSingle(s.to_string()));
        }
        Ok(labels.pop().unwrap())
    }
}

impl Serialize for PointLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Split a concatenation of labels, greedily left to right: an uppercase
/// letter, then primes, then an optional `_d`, `_{d}` subscript.
pub fn split_point_run(run: &str) -> Result<Vec<PointLabel>, LabelError> {
    let bytes = run.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (label, next) = read_label(run, i)?;
        out.push(label);
        i = next;
    }
    if out.is_empty() {
        return Err(LabelError::Malformed {
            run: run.to_string(),
            offset: 0,
        });
    }
    Ok(out)
}

fn read_label(run: &str, start: usize) -> Result<(PointLabel, usize), LabelError> {
    let bytes = run.as_bytes();
    let malformed = |offset| LabelError::Malformed {
        run: run.to_string(),
        offset,
    };
    let base = bytes[start];
    if !base.is_ascii_uppercase() {
        return Err(malformed(start));
    }
    let mut i = start + 1;
    let mut primes = 0u8;
    while i < bytes.len() && bytes[i] == b'\'' {
        primes = primes.checked_add(1).ok_or_else(|| malformed(i))?;
        i += 1;
    }
    let mut subscript = None;
    if i < bytes.len() && bytes[i] == b'_' {
        i += 1;
        let braced = i < bytes.len() && bytes[i] == b'{';
        if braced {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(malformed(i));
        }
        let digits = &run[digits_start..i];
        if braced {
            if i >= bytes.len() || bytes[i] != b'}' {
                return Err(malformed(i));
            }
            i += 1;
        }
        subscript = Some(Subscript(digits.to_string()));
    }
    Ok((
        PointLabel {
            base: base as char,
            primes,
            subscript,
        },
        i,
    ))
}

/// Concatenated rendering of a label sequence (`A_{1}BC`).
pub fn join_run(labels: &[PointLabel]) -> String {
    labels.iter().map(ToString::to_string).collect()
}
