//! Hand-rolled lexer. Comments run from `--` to end of line.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    // keywords
    Nil,
    End,
    Nat,
    Qubit,
    And,
    Or,
    Not,
    // punctuation
    Define,    // :=
    Colon,     // :
    Dot,       // .
    Comma,     // ,
    Bang,      // !
    Question,  // ?
    Par,       // ||
    Plus,      // +
    Minus,     // -
    Star,      // *
    Slash,     // /
    Backslash, // \
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow, // ->
    Eq,    // =
    Lt,    // <
    Semi,  // ;
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Float(x) => write!(f, "`{x}`"),
            Tok::Nil => write!(f, "`nil`"),
            Tok::End => write!(f, "`end`"),
            Tok::Nat => write!(f, "`Nat`"),
            Tok::Qubit => write!(f, "`Qubit`"),
            Tok::And => write!(f, "`and`"),
            Tok::Or => write!(f, "`or`"),
            Tok::Not => write!(f, "`not`"),
            Tok::Define => write!(f, "`:=`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Question => write!(f, "`?`"),
            Tok::Par => write!(f, "`||`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Backslash => write!(f, "`\\`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("syntax error at {pos}: {msg}")]
pub struct LexError {
    pub pos: Pos,
    pub msg: String,
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, LexError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! pos {
        () => {
            Pos { line, col }
        };
    }
    while i < chars.len() {
        let ch = chars[i];
        let here = pos!();
        match ch {
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            '-' if i + 1 < chars.len() && chars[i + 1] == '-' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if i + 1 < chars.len() && chars[i + 1] == '>' => {
                out.push((Tok::Arrow, here));
                i += 2;
                col += 2;
            }
            '-' => {
                out.push((Tok::Minus, here));
                i += 1;
                col += 1;
            }
            ':' if i + 1 < chars.len() && chars[i + 1] == '=' => {
                out.push((Tok::Define, here));
                i += 2;
                col += 2;
            }
            ':' => {
                out.push((Tok::Colon, here));
                i += 1;
                col += 1;
            }
            '|' if i + 1 < chars.len() && chars[i + 1] == '|' => {
                out.push((Tok::Par, here));
                i += 2;
                col += 2;
            }
            '|' => {
                return Err(LexError {
                    pos: here,
                    msg: "single `|` (parallel composition is `||`)".into(),
                })
            }
            '.' => {
                out.push((Tok::Dot, here));
                i += 1;
                col += 1;
            }
            ',' => {
                out.push((Tok::Comma, here));
                i += 1;
                col += 1;
            }
            '!' => {
                out.push((Tok::Bang, here));
                i += 1;
                col += 1;
            }
            '?' => {
                out.push((Tok::Question, here));
                i += 1;
                col += 1;
            }
            '+' => {
                out.push((Tok::Plus, here));
                i += 1;
                col += 1;
            }
            '*' => {
                out.push((Tok::Star, here));
                i += 1;
                col += 1;
            }
            '/' => {
                out.push((Tok::Slash, here));
                i += 1;
                col += 1;
            }
            '\\' => {
                out.push((Tok::Backslash, here));
                i += 1;
                col += 1;
            }
            '{' => {
                out.push((Tok::LBrace, here));
                i += 1;
                col += 1;
            }
            '}' => {
                out.push((Tok::RBrace, here));
                i += 1;
                col += 1;
            }
            '[' => {
                out.push((Tok::LBracket, here));
                i += 1;
                col += 1;
            }
            ']' => {
                out.push((Tok::RBracket, here));
                i += 1;
                col += 1;
            }
            '(' => {
                out.push((Tok::LParen, here));
                i += 1;
                col += 1;
            }
            ')' => {
                out.push((Tok::RParen, here));
                i += 1;
                col += 1;
            }
            '=' => {
                out.push((Tok::Eq, here));
                i += 1;
                col += 1;
            }
            '<' => {
                out.push((Tok::Lt, here));
                i += 1;
                col += 1;
            }
            ';' => {
                out.push((Tok::Semi, here));
                i += 1;
                col += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // a dot makes a float only when a digit follows it, so that
                // `g!0.nil` lexes as an integer prefix
                let mut is_float = false;
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    is_float = true;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                if is_float {
                    let v: f64 = text.parse().map_err(|_| LexError {
                        pos: here,
                        msg: format!("bad number `{text}`"),
                    })?;
                    out.push((Tok::Float(v), here));
                } else {
                    let v: i64 = text.parse().map_err(|_| LexError {
                        pos: here,
                        msg: format!("integer literal `{text}` out of range"),
                    })?;
                    out.push((Tok::Int(v), here));
                }
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match text.as_str() {
                    "nil" => Tok::Nil,
                    "end" => Tok::End,
                    "Nat" => Tok::Nat,
                    "Qubit" => Tok::Qubit,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    _ => Tok::Ident(text),
                };
                out.push((tok, here));
            }
            other => {
                return Err(LexError {
                    pos: here,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, pos!()));
    Ok(out)
}
