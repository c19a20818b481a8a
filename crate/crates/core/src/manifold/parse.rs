//! Recursive-descent parser for the manifold DSL.
//!
//! ```text
//! expr    := bundle | sum | plumb
//! bundle  := "bundle" "(" INT "," INT ")"
//! sum     := "sum" "(" expr ("," expr)+ ")"
//! plumb   := "plumb" "{" piece+ edge* "}"
//! piece   := "piece" IDENT "(" INT "," INT ")" ";"
//! edge    := "edge" IDENT "." INT "-" IDENT "." INT "[" INT INT INT INT "]" ";"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{GluingEdge, GluingMatrix, ManifoldError, ManifoldExpr, Piece, Plumbing, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "integer {s}"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars
                .peek()
                .filter(|c| c.is_ascii_alphanumeric() || **c == '_')
            {
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(s), pos));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push((Tok::Int(s), pos));
        } else if "(){}[],;.-".contains(c) {
            chars.next();
            col += 1;
            out.push((Tok::Punct(c), pos));
        } else {
            return Err(ParseError {
                line,
                col,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.cursor].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.cursor].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.cursor].0.clone();
        if t != Tok::Eof {
            self.cursor += 1;
        }
        t
    }

    fn error_at(&self, pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_at(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek()),
        )
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok((s, pos)),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let negative = *self.peek() == Tok::Punct('-');
        if negative {
            self.bump();
        }
        let digits = match self.peek() {
            Tok::Int(_) => match self.bump() {
                Tok::Int(s) => s,
                _ => unreachable!(),
            },
            _ => return Err(self.unexpected("integer")),
        };
        let text = if negative {
            format!("-{digits}")
        } else {
            digits
        };
        text.parse()
            .map_err(|_| self.error_at(pos, format!("integer {text} out of range")))
    }

    fn nonneg(&mut self, what: &str) -> Result<u32, ParseError> {
        let pos = self.pos();
        let v = self.int()?;
        u32::try_from(v).map_err(|_| {
            self.error_at(
                pos,
                format!("{what} must be a nonnegative integer, got {v}"),
            )
        })
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Ident(s) if s == "bundle" => self.bundle(),
            Tok::Ident(s) if s == "sum" => self.sum(),
            Tok::Ident(s) if s == "plumb" => self.plumb(),
            _ => Err(self.error_at(
                pos,
                format!("expected `bundle`, `sum` or `plumb`, found {}", self.peek()),
            )),
        }
    }

    fn bundle(&mut self) -> Result<ManifoldExpr, ParseError> {
        self.keyword("bundle")?;
        self.punct('(')?;
        let genus = self.nonneg("genus")?;
        self.punct(',')?;
        let euler = self.int()?;
        self.punct(')')?;
        Ok(ManifoldExpr::Bundle { genus, euler })
    }

    fn sum(&mut self) -> Result<ManifoldExpr, ParseError> {
        let pos = self.pos();
        self.keyword("sum")?;
        self.punct('(')?;
        let mut parts = vec![self.expr()?];
        while *self.peek() == Tok::Punct(',') {
            self.bump();
            parts.push(self.expr()?);
        }
        self.punct(')')?;
        if parts.len() < 2 {
            return Err(self.error_at(pos, "a sum needs at least two parts"));
        }
        Ok(ManifoldExpr::Sum { parts })
    }

    fn plumb(&mut self) -> Result<ManifoldExpr, ParseError> {
        let start = self.pos();
        self.keyword("plumb")?;
        self.punct('{')?;
        let mut pieces = Vec::new();
        let mut piece_pos = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        while matches!(self.peek(), Tok::Ident(s) if s == "piece") {
            let kw = self.pos();
            self.bump();
            let (name, pos) = self.ident()?;
            self.punct('(')?;
            let genus = self.nonneg("genus")?;
            self.punct(',')?;
            let bpos = self.pos();
            let boundary_count = self.nonneg("boundary count")?;
            if boundary_count == 0 {
                return Err(self.error_at(bpos, "boundary count must be at least 1"));
            }
            self.punct(')')?;
            self.punct(';')?;
            if index.insert(name.clone(), pieces.len()).is_some() {
                return Err(self.error_at(pos, format!("piece `{name}` is declared twice")));
            }
            pieces.push(Piece {
                name,
                genus,
                boundary_count,
            });
            piece_pos.push(kw);
        }
        if pieces.is_empty() {
            return Err(self.unexpected("`piece`"));
        }
        let mut edges = Vec::new();
        let mut edge_pos = Vec::new();
        while matches!(self.peek(), Tok::Ident(s) if s == "edge") {
            edge_pos.push(self.pos());
            self.bump();
            let from = self.slot(&index)?;
            self.punct('-')?;
            let to = self.slot(&index)?;
            self.punct('[')?;
            let mut m = [0i64; 4];
            for x in &mut m {
                *x = self.int()?;
            }
            self.punct(']')?;
            self.punct(';')?;
            edges.push(GluingEdge {
                from,
                to,
                matrix: GluingMatrix::from_row_major(m),
            });
        }
        let close = self.pos();
        self.punct('}')?;
        Plumbing::new(pieces, edges)
            .map(ManifoldExpr::Plumbed)
            .map_err(|e| {
                let pos = match &e {
                    ManifoldError::BoundaryOutOfRange { edge, .. }
                    | ManifoldError::DuplicateSlot { edge, .. }
                    | ManifoldError::BadGluing { edge, .. } => edge_pos[*edge],
                    ManifoldError::UnmatchedSlot { piece, .. } => piece_pos[index[piece]],
                    ManifoldError::Disconnected => start,
                    _ => close,
                };
                self.error_at(pos, e.to_string())
            })
    }

    fn slot(&mut self, index: &HashMap<String, usize>) -> Result<Slot, ParseError> {
        let (name, pos) = self.ident()?;
        let piece = *index
            .get(&name)
            .ok_or_else(|| self.error_at(pos, format!("unknown piece `{name}`")))?;
        self.punct('.')?;
        let boundary = self.nonneg("boundary index")?;
        Ok(Slot { piece, boundary })
    }
}

/// Parses one manifold expression; the whole input must be consumed.
pub fn parse(text: &str) -> Result<ManifoldExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        cursor: 0,
    };
    let expr = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(expr)
}
