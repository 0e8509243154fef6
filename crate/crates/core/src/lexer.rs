//! Line-oriented lexer for the formal language.
//!
//! Everything after an `=` up to the end of the line (or the next tag) is
//! captured as one raw expression token; measure values are free-form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LexError;
use crate::label::split_point_run;

/// Document sections, shared by tags and headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Points,
    Lines,
    Circles,
    Planes,
    Solids,
    Semantics,
}

impl Section {
    pub const ALL: [Section; 6] = [
        Section::Points,
        Section::Lines,
        Section::Circles,
        Section::Planes,
        Section::Solids,
        Section::Semantics,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Section::Points => "points",
            Section::Lines => "lines",
            Section::Circles => "circles",
            Section::Planes => "planes",
            Section::Solids => "solids",
            Section::Semantics => "semantics",
        }
    }

    pub fn from_tag(name: &str) -> Option<Section> {
        Section::ALL.into_iter().find(|s| s.tag() == name)
    }

    pub fn header(self) -> &'static str {
        match self {
            Section::Points => "Points",
            Section::Lines => "Lines",
            Section::Circles => "Circles",
            Section::Planes => "Planes",
            Section::Solids => "Solids",
            Section::Semantics => "Semantics",
        }
    }

    fn from_header(name: &str) -> Option<Section> {
        let lower = name.trim().to_ascii_lowercase();
        Some(match lower.as_str() {
            "points" => Section::Points,
            "lines" => Section::Lines,
            "circles" => Section::Circles,
            "planes" => Section::Planes,
            "solids" | "solid" | "structure" | "solid structure" => Section::Solids,
            "semantics" | "semantic clauses" | "semantic relations" | "relations" => Section::Semantics,
            _ => return None,
        })
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Point,
    Line,
    Lineson,
    Lieson,
    Plane,
    Solid,
    M,
    On,
    To,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "point" => Keyword::Point,
            "line" => Keyword::Line,
            "lineson" => Keyword::Lineson,
            "lieson" => Keyword::Lieson,
            "plane" => Keyword::Plane,
            "solid" => Keyword::Solid,
            "m" => Keyword::M,
            "on" => Keyword::On,
            "to" => Keyword::To,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Point => "point",
            Keyword::Line => "line",
            Keyword::Lineson => "lineson",
            Keyword::Lieson => "lieson",
            Keyword::Plane => "plane",
            Keyword::Solid => "solid",
            Keyword::M => "m",
            Keyword::On => "on",
            Keyword::To => "to",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Kw(Keyword),
    /// Backslash command without the backslash (`odot`, `angle`, ...).
    Cmd(String),
    /// A lowercase word, a capitalized word, or a single point label.
    Ident(String),
    /// Two or more concatenated point labels.
    PointRun(String),
    Number(String),
    Eq,
    Dash,
    LBracket,
    RBracket,
    Comma,
    /// Raw right-hand side following `=`.
    Expr(String),
    TagOpen(String),
    TagClose(String),
    Header(Section),
    Newline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub errors: Vec<LexError>,
}

/// Tokenize the whole text, failing on the first illegal character.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let lexed = lex(text);
    match lexed.errors.into_iter().next() {
        Some(err) => Err(err),
        None => Ok(lexed.tokens),
    }
}

/// Tokenize, collecting every illegal character instead of stopping.
pub fn lex(text: &str) -> Lexed {
    let mut out = Lexed::default();
    let mut prev_len = 0;
    for (idx, line) in text.split('\n').enumerate() {
        if idx > 0 {
            out.tokens.push(Token {
                kind: TokenKind::Newline,
                line: idx,
                column: prev_len + 1,
            });
        }
        let line = line.strip_suffix('\r').unwrap_or(line);
        lex_line(line, idx + 1, &mut out);
        prev_len = line.chars().count();
    }
    out
}

fn lex_line(line: &str, line_no: usize, out: &mut Lexed) {
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    if let Some((section, rest_at)) = header_prefix(&chars) {
        out.tokens.push(Token {
            kind: TokenKind::Header(section),
            line: line_no,
            column: first_non_space(&chars) + 1,
        });
        i = rest_at;
    }

    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let push = |out: &mut Lexed, kind| {
            out.tokens.push(Token {
                kind,
                line: line_no,
                column,
            })
        };
        match c {
            c if c.is_whitespace() => i += 1,
            '$' => i += 1,
            '[' => {
                push(out, TokenKind::LBracket);
                i += 1;
            }
            ']' => {
                push(out, TokenKind::RBracket);
                i += 1;
            }
            ',' => {
                push(out, TokenKind::Comma);
                i += 1;
            }
            '-' => {
                push(out, TokenKind::Dash);
                i += 1;
            }
            '=' => {
                push(out, TokenKind::Eq);
                i += 1;
                let start = i;
                while i < chars.len() && tag_at(&chars, i).is_none() {
                    i += 1;
                }
                let raw: String = chars[start..i].iter().collect();
                out.tokens.push(Token {
                    kind: TokenKind::Expr(raw.trim().to_string()),
                    line: line_no,
                    column: start + 1,
                });
            }
            '<' => match tag_at(&chars, i) {
                Some((closing, name, end)) => {
                    let kind = if closing {
                        TokenKind::TagClose(name)
                    } else {
                        TokenKind::TagOpen(name)
                    };
                    push(out, kind);
                    i = end;
                }
                None => {
                    out.errors.push(LexError {
                        ch: c,
                        line: line_no,
                        column,
                    });
                    i += 1;
                }
            },
            '\\' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if j == start {
                    out.errors.push(LexError {
                        ch: c,
                        line: line_no,
                        column,
                    });
                    i += 1;
                } else {
                    push(out, TokenKind::Cmd(chars[start..j].iter().collect()));
                    i = j;
                }
            }
            c if c.is_ascii_uppercase() => {
                let mut j = i + 1;
                while j < chars.len() && is_label_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let kind = if word.chars().any(|c| c.is_ascii_lowercase()) {
                    TokenKind::Ident(word)
                } else {
                    match split_point_run(&word) {
                        Ok(labels) if labels.len() == 1 => TokenKind::Ident(word),
                        _ => TokenKind::PointRun(word),
                    }
                };
                push(out, kind);
                i = j;
            }
            c if c.is_ascii_lowercase() => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_lowercase() || chars[j].is_ascii_digit()) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let kind = match Keyword::from_word(&word) {
                    Some(kw) => TokenKind::Kw(kw),
                    None => TokenKind::Ident(word),
                };
                push(out, kind);
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                push(out, TokenKind::Number(chars[i..j].iter().collect()));
                i = j;
            }
            _ => {
                out.errors.push(LexError {
                    ch: c,
                    line: line_no,
                    column,
                });
                i += 1;
            }
        }
    }
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '{' | '}')
}

fn first_non_space(chars: &[char]) -> usize {
    chars.iter().position(|c| !c.is_whitespace()).unwrap_or(0)
}

/// Recognizes `Points:`, `**Points:**`, `**Points**:` at line start and
/// returns the section and the index where the rest of the line begins.
fn header_prefix(chars: &[char]) -> Option<(Section, usize)> {
    let mut i = first_non_space(chars);
    let starts_bold = chars[i..].starts_with(&['*', '*']);
    if starts_bold {
        i += 2;
    }
    let name_start = i;
    while i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == ' ') {
        i += 1;
    }
    let name: String = chars[name_start..i].iter().collect();
    if chars[i..].starts_with(&['*', '*', ':']) {
        i += 3;
    } else if chars.get(i) == Some(&':') {
        i += 1;
        if chars[i..].starts_with(&['*', '*']) {
            i += 2;
        }
    } else {
        return None;
    }
    Section::from_header(&name).map(|s| (s, i))
}

/// Matches `<name>` or `</name>` at `at`; returns (closing, name, end).
fn tag_at(chars: &[char], at: usize) -> Option<(bool, String, usize)> {
    if chars.get(at) != Some(&'<') {
        return None;
    }
    let mut i = at + 1;
    let closing = chars.get(i) == Some(&'/');
    if closing {
        i += 1;
    }
    let start = i;
    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
        i += 1;
    }
    if i == start || chars.get(i) != Some(&'>') {
        return None;
    }
    Some((closing, chars[start..i].iter().collect(), i + 1))
}
