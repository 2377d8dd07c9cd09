//! Finite presentation text format and parser.
//!
//! ```text
//! gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1
//! ```
//!
//! A relator is a word in the generators; `u = v` is accepted as sugar for
//! the relator `u*v^-1`.  Words multiply left to right with `*`, and a term
//! may carry an integer exponent (`x^-3`).  Generator names match
//! `[A-Za-z][A-Za-z0-9_]*`.

use std::fmt;
use thiserror::Error;

/// Single letter of a word: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

/// Word in the free group on the presentation's generators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| Letter { gen: l.gen, inv: !l.inv }).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .map(|l| {
                if l.inv {
                    format!("{}^-1", self.names[l.gen])
                } else {
                    self.names[l.gen].clone()
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Parsed presentation: generator names plus relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Number of generators.
    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    /// Number of relators.
    pub fn rel_count(&self) -> usize {
        self.relators.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Colon,
    Semi,
    Comma,
    Star,
    Caret,
    Eq,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let (line, col) = (self.line, self.col);
            let b = self.src[self.pos];
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                b':' => {
                    self.bump();
                    out.push((Tok::Colon, line, col));
                }
                b';' => {
                    self.bump();
                    out.push((Tok::Semi, line, col));
                }
                b',' => {
                    self.bump();
                    out.push((Tok::Comma, line, col));
                }
                b'*' => {
                    self.bump();
                    out.push((Tok::Star, line, col));
                }
                b'^' => {
                    self.bump();
                    out.push((Tok::Caret, line, col));
                }
                b'=' => {
                    self.bump();
                    out.push((Tok::Eq, line, col));
                }
                b'-' | b'0'..=b'9' => {
                    let mut s = String::new();
                    if self.src[self.pos] == b'-' {
                        s.push(self.bump() as char);
                        if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                            return Err(ParseError {
                                line,
                                col,
                                message: "expected digits after '-'".into(),
                            });
                        }
                    }
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        s.push(self.bump() as char);
                    }
                    let v: i64 = s.parse().map_err(|_| ParseError {
                        line,
                        col,
                        message: format!("integer '{s}' out of range"),
                    })?;
                    out.push((Tok::Int(v), line, col));
                }
                b'A'..=b'Z' | b'a'..=b'z' => {
                    let mut s = String::new();
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        s.push(self.bump() as char);
                    }
                    out.push((Tok::Ident(s), line, col));
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("unexpected character '{}'", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end: (usize, usize),
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.at).map(|t| (t.1, t.2)).unwrap_or(self.end)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{kw}'"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn term(&mut self, gens: &[String]) -> Result<Vec<Letter>, ParseError> {
        let pos = self.here();
        let name = self.ident("generator name")?;
        let gen = gens.iter().position(|g| *g == name).ok_or(ParseError {
            line: pos.0,
            col: pos.1,
            message: format!("unknown generator '{name}'"),
        })?;
        let mut exp: i64 = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.next() {
                Some(Tok::Int(v)) => exp = v,
                _ => return Err(self.err("expected integer exponent after '^'")),
            }
        }
        let inv = exp < 0;
        let count = exp.unsigned_abs() as usize;
        Ok(vec![Letter { gen, inv }; count])
    }

    fn word(&mut self, gens: &[String]) -> Result<Word, ParseError> {
        let mut letters = self.term(gens)?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            letters.extend(self.term(gens)?);
        }
        Ok(Word(letters))
    }

    fn relation(&mut self, gens: &[String]) -> Result<Word, ParseError> {
        let lhs = self.word(gens)?;
        if self.peek() == Some(&Tok::Eq) {
            self.at += 1;
            let rhs = self.word(gens)?;
            Ok(lhs.concat(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }
}

/// Parses a presentation from text.  `#` starts a comment running to end of
/// line.
pub fn parse_presentation(src: &str) -> Result<Presentation, ParseError> {
    let end_line = src.lines().count().max(1);
    let end_col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { toks, at: 0, end: (end_line, end_col) };

    p.expect_keyword("gens")?;
    p.expect(&Tok::Colon, "':' after 'gens'")?;
    let mut generators = vec![p.ident("generator name")?];
    while p.peek() == Some(&Tok::Comma) {
        p.at += 1;
        generators.push(p.ident("generator name")?);
    }
    for (i, g) in generators.iter().enumerate() {
        if generators[..i].contains(g) {
            return Err(p.err(format!("duplicate generator '{g}'")));
        }
    }
    p.expect(&Tok::Semi, "';' between generator and relator lists")?;
    p.expect_keyword("rels")?;
    p.expect(&Tok::Colon, "':' after 'rels'")?;
    let mut relators = vec![p.relation(&generators)?];
    while p.peek() == Some(&Tok::Comma) {
        p.at += 1;
        relators.push(p.relation(&generators)?);
    }
    if p.at != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(Presentation { generators, relators })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_generator_presentation() {
        let p = parse_presentation("gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1").unwrap();
        assert_eq!(p.generators, vec!["x", "y"]);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(
            p.relators[0].0,
            vec![
                Letter { gen: 0, inv: false },
                Letter { gen: 0, inv: false },
                Letter { gen: 1, inv: true },
                Letter { gen: 1, inv: true },
            ]
        );
    }

    #[test]
    fn equation_desugars_to_relator() {
        let p = parse_presentation("gens: x, y ; rels: x^2 = y^2").unwrap();
        assert_eq!(
            p.relators[0].0,
            vec![
                Letter { gen: 0, inv: false },
                Letter { gen: 0, inv: false },
                Letter { gen: 1, inv: true },
                Letter { gen: 1, inv: true },
            ]
        );
    }

    #[test]
    fn reports_position_of_unknown_generator() {
        let err = parse_presentation("gens: x ; rels: x*z").unwrap_err();
        assert_eq!((err.line, err.col), (1, 19));
        assert!(err.message.contains("unknown generator 'z'"));
    }

    #[test]
    fn reports_missing_sections() {
        assert!(parse_presentation("rels: x").is_err());
        assert!(parse_presentation("gens: x").is_err());
        assert!(parse_presentation("gens: x ; rels:").is_err());
        assert!(parse_presentation("").is_err());
    }

    #[test]
    fn rejects_dangling_exponent_and_trailing_junk() {
        let err = parse_presentation("gens: x ; rels: x^").unwrap_err();
        assert!(err.message.contains("exponent"));
        assert!(parse_presentation("gens: x ; rels: x^3 y").is_err());
        assert!(parse_presentation("gens: x, x ; rels: x").is_err());
    }

    #[test]
    fn comments_and_newlines_are_ignored() {
        let p = parse_presentation("# quaternion group\ngens: x, y ;\nrels: x^2*y^-2, # half\n x*y*x*y^-1").unwrap();
        assert_eq!(p.rel_count(), 2);
    }

    #[test]
    fn exponent_zero_gives_empty_contribution() {
        let p = parse_presentation("gens: x ; rels: x^0").unwrap();
        assert!(p.relators[0].is_empty());
    }

    #[test]
    fn word_display_roundtrips_names() {
        let p = parse_presentation("gens: x, y ; rels: x*y^-2").unwrap();
        assert_eq!(p.relators[0].display(&p.generators).to_string(), "x*y^-1*y^-1");
    }
}
