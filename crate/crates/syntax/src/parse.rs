use thiserror::Error;

use crate::formula::{Formula, Group};

/// Declared vocabulary and agent set of a session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
}

impl Signature {
    pub fn new<A, B>(atoms: A, agents: B) -> Signature
    where
        A: IntoIterator,
        A::Item: Into<String>,
        B: IntoIterator,
        B::Item: Into<String>,
    {
        Signature {
            atoms: atoms.into_iter().map(Into::into).collect(),
            agents: agents.into_iter().map(Into::into).collect(),
        }
    }

    pub fn has_atom(&self, name: &str) -> bool {
        self.atoms.iter().any(|a| a == name)
    }

    pub fn has_agent(&self, name: &str) -> bool {
        self.agents.iter().any(|a| a == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared atom '{name}' at {pos}")]
    UndeclaredAtom { name: String, pos: usize },
    #[error("undeclared agent '{name}' at {pos}")]
    UndeclaredAgent { name: String, pos: usize },
    #[error("empty agent group at {pos}")]
    EmptyGroup { pos: usize },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "Syntax",
            ParseError::UndeclaredAtom { .. } => "UndeclaredAtom",
            ParseError::UndeclaredAgent { .. } => "UndeclaredAgent",
            ParseError::EmptyGroup { .. } => "EmptyGroup",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Tok::Arrow, i));
                    i += 2;
                    continue;
                }
                return Err(ParseError::Syntax { pos: i, msg: "expected '->'".into() });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{}'", text[i..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => {
                if !self.sig.has_agent(&name) {
                    return Err(ParseError::UndeclaredAgent { name, pos });
                }
                Ok(name)
            }
            _ => Err(ParseError::Syntax { pos, msg: "expected agent name".into() }),
        }
    }

    fn group(&mut self) -> Result<Group, ParseError> {
        let pos = self.pos();
        self.expect(Tok::LBrace, "'{'")?;
        let mut members = Vec::new();
        if *self.peek() != Tok::RBrace {
            members.push(self.agent()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                members.push(self.agent()?);
            }
        }
        self.expect(Tok::RBrace, "'}'")?;
        Group::new(members).ok_or(ParseError::EmptyGroup { pos })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implies()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let modal = matches!(name.as_str(), "K" | "M" | "O" | "E" | "C") && *self.peek2() == Tok::LBrack;
                self.bump();
                if modal {
                    self.bump();
                    let f = match name.as_str() {
                        "K" | "M" | "O" => {
                            let a = self.agent()?;
                            self.expect(Tok::RBrack, "']'")?;
                            let body = self.unary()?;
                            match name.as_str() {
                                "K" => Formula::k(&a, body),
                                "M" => Formula::m(&a, body),
                                _ => Formula::o(&a, body),
                            }
                        }
                        _ => {
                            let g = self.group()?;
                            self.expect(Tok::RBrack, "']'")?;
                            let body = self.unary()?;
                            if name == "E" {
                                Formula::e(g, body)
                            } else {
                                Formula::c(g, body)
                            }
                        }
                    };
                    return Ok(f);
                }
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => {
                        if !self.sig.has_atom(&name) {
                            return Err(ParseError::UndeclaredAtom { name, pos });
                        }
                        Ok(Formula::Atom(name))
                    }
                }
            }
            _ => Err(ParseError::Syntax { pos, msg: "expected a formula".into() }),
        }
    }
}

/// Parses `text` against the declared atoms and agents of `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig };
    let f = p.implies()?;
    if *p.peek() != Tok::Eof {
        return Err(ParseError::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["p", "q", "r"], ["a", "b"])
    }

    #[test]
    fn precedence() {
        let f = parse("K[a] p & ~q", &sig()).unwrap();
        assert_eq!(f, Formula::and(Formula::k("a", Formula::atom("p")), Formula::not(Formula::atom("q"))));
        let g = parse("p -> q -> r", &sig()).unwrap();
        assert_eq!(g.to_string(), "(p -> (q -> r))");
        let h = parse("p | q & r", &sig()).unwrap();
        assert_eq!(h.to_string(), "(p | (q & r))");
        let i = parse("~p & q", &sig()).unwrap();
        assert_eq!(i.to_string(), "(~p & q)");
    }

    #[test]
    fn operators() {
        assert_eq!(parse("O[a] p", &sig()).unwrap(), Formula::o("a", Formula::atom("p")));
        assert_eq!(parse("C[{b, a}] p", &sig()).unwrap().to_string(), "C[{a,b}] p");
        assert_eq!(parse("E[{a}] (p | q)", &sig()).unwrap().to_string(), "E[{a}] (p | q)");
        assert_eq!(parse("true & false", &sig()).unwrap(), Formula::and(Formula::True, Formula::False));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("C[{}] p", &sig()), Err(ParseError::EmptyGroup { .. })));
        assert!(matches!(parse("K[z] p", &sig()), Err(ParseError::UndeclaredAgent { .. })));
        assert!(matches!(parse("p & s", &sig()), Err(ParseError::UndeclaredAtom { pos: 4, .. })));
        assert!(matches!(parse("p &", &sig()), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(p", &sig()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("p q", &sig()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("p - q", &sig()), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn operator_letters_as_atoms() {
        let s = Signature::new(["K"], ["a"]);
        assert_eq!(parse("K & K[a] K", &s).unwrap().to_string(), "(K & K[a] K)");
    }
}
