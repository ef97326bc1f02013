//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := impl ("<->" impl)?
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "K[" id "]" unary | "Khat[" id "]" unary
//!          | "B[" id "|" formula "]" unary | "Bplus[" id "]" unary
//!          | "Gt[" id "]" unary | "GtDia[" id "]" unary
//!          | "[!" formula "]" unary | "[up" formula "]" unary | atom
//! atom    := "true" | "false" | id | "(" formula ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::Formula;

/// A syntax error at a 1-based character position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at position {}: expected {}, found {}",
            self.position,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Iff,
    Bang,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '!' => Some(Tok::Bang),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            i += 2;
        } else if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            out.push((Tok::Iff, pos));
            i += 3;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            return Err(ParseError {
                position: pos,
                expected: vec!["a formula token"],
                found: format!("`{c}`"),
            });
        }
    }
    out.push((Tok::Eof, chars.len() + 1));
    Ok(out)
}

const UNARY_START: &[&str] = &[
    "`~`", "`K[`", "`Khat[`", "`B[`", "`Bplus[`", "`Gt[`", "`GtDia[`", "`[!`", "`[up`", "`true`", "`false`",
    "identifier", "`(`",
];

const MODAL_WORDS: &[&str] = &["K", "Khat", "B", "Bplus", "Gt", "GtDia"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, position) = &self.toks[self.pos];
        ParseError { position: *position, expected, found: tok.to_string() }
    }

    fn expect(&mut self, tok: Tok, label: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![label]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(vec!["identifier"])),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                match self.peek().clone() {
                    Tok::Bang => {
                        self.bump();
                        let pre = self.formula()?;
                        self.expect(Tok::RBracket, "`]`")?;
                        Ok(Formula::announce(pre, self.unary()?))
                    }
                    Tok::Ident(s) if s == "up" => {
                        self.bump();
                        let pre = self.formula()?;
                        self.expect(Tok::RBracket, "`]`")?;
                        Ok(Formula::upgrade(pre, self.unary()?))
                    }
                    _ => Err(self.error(vec!["`!`", "`up`"])),
                }
            }
            Tok::Ident(word)
                if MODAL_WORDS.contains(&word.as_str()) && *self.peek_at(1) == Tok::LBracket =>
            {
                self.bump();
                self.bump();
                let agent = self.ident()?;
                if word == "B" {
                    self.expect(Tok::Bar, "`|`")?;
                    let condition = self.formula()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    return Ok(Formula::cond(agent, condition, self.unary()?));
                }
                self.expect(Tok::RBracket, "`]`")?;
                let body = self.unary()?;
                Ok(match word.as_str() {
                    "K" => Formula::know(agent, body),
                    "Khat" => Formula::khat(agent, body),
                    "Bplus" => Formula::safe(agent, body),
                    "Gt" => Formula::gt(agent, body),
                    "GtDia" => Formula::gt_dia(agent, body),
                    _ => unreachable!("modal word list"),
                })
            }
            Tok::Ident(word) => {
                self.bump();
                Ok(match word.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::Bot,
                    _ => Formula::Atom(word),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error(UNARY_START.to_vec())),
        }
    }
}

/// Parses the concrete syntax into a formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(vec!["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}
