//! Recursive-descent parser for terms and identity lines.
//!
//! Precedence from loosest to tightest: `v`, `^`, `o`/`->`, postfix `'`.
//! `o` and `->` do not chain; nesting them needs parentheses.

use std::fmt;

use thiserror::Error;

use super::Identity;
use super::{builtin, QuasiIdentity, RelKind, Relation, Statement, StatementBody, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error)]
#[error("line {line}: {error}")]
pub struct StatementFileError {
    pub line: usize,
    pub error: ParseError,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Join,
    Meet,
    Prime,
    Odot,
    Arrow,
    LParen,
    RParen,
    Comma,
    Eq,
    Le,
    And,
    Implies,
    Colon,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::One => f.write_str("`1`"),
            Tok::Join => f.write_str("`v`"),
            Tok::Meet => f.write_str("`^`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::Odot => f.write_str("`o`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::And => f.write_str("`&`"),
            Tok::Implies => f.write_str("`=>`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '^' | '∧' => Tok::Meet,
            '∨' => Tok::Join,
            '\'' | '′' => Tok::Prime,
            '⊙' => Tok::Odot,
            '→' => Tok::Arrow,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '&' => Tok::And,
            ':' => Tok::Colon,
            '≈' => Tok::Eq,
            '≤' => Tok::Le,
            '⇒' => Tok::Implies,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '<' if next == Some('=') => {
                i += 1;
                Tok::Le
            }
            '=' if next == Some('>') => {
                i += 1;
                Tok::Implies
            }
            '=' => Tok::Eq,
            '0' | '1' if !next.is_some_and(|n| n.is_ascii_alphanumeric() || n == '_') => {
                if c == '0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            _ if c.is_alphabetic() || c == '_' => {
                while chars
                    .get(i + 1)
                    .is_some_and(|n| n.is_alphanumeric() || *n == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "v" => Tok::Join,
                    "o" => Tok::Odot,
                    _ => Tok::Ident(word),
                }
            }
            _ => {
                return Err(ParseError {
                    pos: start,
                    expected: "a term".into(),
                    found: format!("`{c}`"),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (pos, tok) = &self.toks[self.at];
        ParseError {
            pos: *pos,
            expected: expected.to_owned(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.to_string()))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Join {
            self.bump();
            lhs = Term::join(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.sasaki()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            lhs = Term::meet(lhs, self.sasaki()?);
        }
        Ok(lhs)
    }

    fn sasaki(&mut self) -> Result<Term, ParseError> {
        let lhs = self.postfix()?;
        let make: fn(Term, Term) -> Term = match self.peek() {
            Tok::Odot => Term::odot,
            Tok::Arrow => Term::arrow,
            _ => return Ok(lhs),
        };
        self.bump();
        let t = make(lhs, self.postfix()?);
        if matches!(self.peek(), Tok::Odot | Tok::Arrow) {
            return Err(self.error("parentheses around a nested `o` or `->`"));
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Prime {
            self.bump();
            t = Term::comp(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen => {
                let start = self.at;
                self.bump();
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                let got = args.len();
                match builtin(&name, args) {
                    Some(Ok(t)) => Ok(t),
                    Some(Err(arity)) => {
                        self.at = start;
                        Err(self
                            .error(&format!("`{name}` applied to {arity} arguments, not {got}")))
                    }
                    None => {
                        self.at = start;
                        Err(self.error("a built-in term name"))
                    }
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn relation(&mut self) -> Result<Relation, ParseError> {
        let lhs = self.term()?;
        let kind = match self.peek() {
            Tok::Eq => RelKind::Eq,
            Tok::Le => RelKind::Le,
            _ => return Err(self.error("`=` or `<=`")),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Relation { lhs, rhs, kind })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let label = match (self.peek().clone(), self.peek2()) {
            (Tok::Ident(name), Tok::Colon) => {
                self.bump();
                self.bump();
                Some(name)
            }
            _ => None,
        };
        let mut rels = vec![self.relation()?];
        while *self.peek() == Tok::And {
            self.bump();
            rels.push(self.relation()?);
        }
        let body = if *self.peek() == Tok::Implies {
            self.bump();
            let conclusion = self.relation()?;
            StatementBody::Quasi(QuasiIdentity {
                premises: rels,
                conclusion,
            })
        } else if rels.len() > 1 {
            return Err(self.error("`=>` after the premises"));
        } else {
            let rel = rels.pop().expect("one relation");
            match rel.kind {
                RelKind::Eq => StatementBody::Identity(Identity::new(rel.lhs, rel.rhs)),
                RelKind::Le => StatementBody::Quasi(QuasiIdentity {
                    premises: Vec::new(),
                    conclusion: rel,
                }),
            }
        };
        self.expect(Tok::End)?;
        Ok(Statement { label, body })
    }
}

/// Parses a single term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect(Tok::End)?;
    Ok(t)
}

/// Parses `lhs = rhs`, `lhs <= rhs`, or `p1 & p2 => concl`, with an optional
/// `name:` prefix.
pub fn parse_statement(text: &str) -> Result<Statement, ParseError> {
    Parser::new(text)?.statement()
}

/// Parses an identities file. Blank lines and lines starting with `#` are
/// skipped; line numbers are 1-based.
pub fn parse_statements(text: &str) -> Result<Vec<(usize, Statement)>, StatementFileError> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
        .map(|(line, s)| {
            parse_statement(s)
                .map(|st| (line, st))
                .map_err(|error| StatementFileError { line, error })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dangling_join_errors_at_end() {
        let e = parse_term("x v").unwrap_err();
        assert_eq!(e.pos, 3);
        assert_eq!(e.found, "end of input");
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_term("x v y ^ z").unwrap(),
            parse_term("x v (y ^ z)").unwrap()
        );
        assert_eq!(
            parse_term("x ^ y'").unwrap(),
            parse_term("x ^ (y')").unwrap()
        );
        assert_eq!(
            parse_term("x o y ^ z").unwrap(),
            parse_term("(x o y) ^ z").unwrap()
        );
        assert_eq!(
            parse_term("x o y'").unwrap(),
            parse_term("x o (y')").unwrap()
        );
        assert_eq!(
            parse_term("x''").unwrap(),
            Term::comp(Term::comp(Term::var("x")))
        );
    }

    #[test]
    fn sasaki_does_not_chain() {
        assert!(parse_term("x o y o z").is_err());
        assert!(parse_term("x -> y -> z").is_err());
        assert!(parse_term("(x o y) -> z").is_ok());
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(
            parse_term("(x ∨ y′) ∧ y").unwrap(),
            parse_term("(x v y') ^ y").unwrap()
        );
        assert_eq!(parse_term("x ⊙ y").unwrap(), parse_term("x o y").unwrap());
        assert_eq!(parse_term("x → y").unwrap(), parse_term("x -> y").unwrap());
    }

    #[test]
    fn identifiers() {
        assert_eq!(parse_term("x1 v y_2").unwrap().vars().len(), 2);
        assert!(parse_term("10").is_err());
        assert!(parse_term("x $ y").is_err());
        // `vx` is a variable, not a join
        assert_eq!(parse_term("vx").unwrap(), Term::var("vx"));
    }

    #[test]
    fn calls() {
        assert!(parse_term("nope(x)").is_err());
        let e = parse_term("t1(x)").unwrap_err();
        assert!(e.expected.contains("2 arguments"));
    }

    #[test]
    fn statements() {
        let s = parse_statement("x' <= y => y = x' v (y ^ x)").unwrap();
        let StatementBody::Quasi(q) = &s.body else {
            panic!()
        };
        assert_eq!(q.premises.len(), 1);
        assert_eq!(q.conclusion.kind, RelKind::Eq);

        let s = parse_statement("b: x v y' = y' v ((x v y') ^ y)").unwrap();
        assert_eq!(s.label.as_deref(), Some("b"));
        assert!(matches!(s.body, StatementBody::Identity(_)));

        let s = parse_statement("x <= x v y").unwrap();
        assert!(matches!(s.body, StatementBody::Quasi(ref q) if q.premises.is_empty()));

        assert!(parse_statement("x <= y & y <= z").is_err());
        assert!(parse_statement("x = y = z").is_err());
    }

    #[test]
    fn statement_file_reports_line() {
        let text = "# comment\n\nx = x\nx v = y\n";
        let e = parse_statements(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert_eq!(parse_statements("x = x\n\ny <= 1\n").unwrap().len(), 2);
    }
}
