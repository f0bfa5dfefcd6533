//! Recursive-descent parser for the Walnut-flavoured predicate syntax.
//!
//! ```text
//! formula  := implies
//! implies  := or ( "=>" implies )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | ("E" | "A") var ("," var)* formula | primary
//! primary  := "(" formula ")" | atom
//! atom     := SEQ "[" term "]" ("=" | "!=") "@" digit
//!           | term ("=" | "!=" | "<" | "<=" | ">" | ">=") term
//! term     := (var | number) ( "+" (var | number) )*
//! ```
//!
//! Variables start with a lowercase letter, sequence names with an uppercase
//! one. A quantifier extends as far to the right as possible, and may be
//! written glued to its variable (`Ei`).

use thiserror::Error;

use super::ast::{CmpOp, Formula, Term, TermPart};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Seq(String),
    Exists,
    Forall,
    Num(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    At,
    Cmp(CmpOp),
    Plus,
    And,
    Or,
    Not,
    Implies,
    Comma,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |position, message: String| ParseError { position, message };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let quant = match &word[..1] {
                "E" => Some(Tok::Exists),
                "A" => Some(Tok::Forall),
                _ => None,
            };
            match quant {
                Some(q) if word.len() == 1 => toks.push((q, start)),
                Some(q) if word.as_bytes()[1].is_ascii_lowercase() => {
                    toks.push((q, start));
                    toks.push((Tok::Var(word[1..].to_string()), start + 1));
                }
                _ if c.is_ascii_uppercase() => toks.push((Tok::Seq(word.to_string()), start)),
                _ => toks.push((Tok::Var(word.to_string()), start)),
            }
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| err(start, format!("number {} is too large", &text[start..i])))?;
            toks.push((Tok::Num(n), start));
            continue;
        }
        let two = text.get(i..i + 2).unwrap_or("");
        let (tok, len) = match two {
            "=>" => (Tok::Implies, 2),
            "<=" => (Tok::Cmp(CmpOp::Le), 2),
            ">=" => (Tok::Cmp(CmpOp::Ge), 2),
            "!=" => (Tok::Cmp(CmpOp::Ne), 2),
            _ => match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                '@' => (Tok::At, 1),
                '=' => (Tok::Cmp(CmpOp::Eq), 1),
                '<' => (Tok::Cmp(CmpOp::Lt), 1),
                '>' => (Tok::Cmp(CmpOp::Gt), 1),
                '+' => (Tok::Plus, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '~' => (Tok::Not, 1),
                ',' => (Tok::Comma, 1),
                _ => return Err(err(start, format!("unexpected character {c:?}"))),
            },
        };
        toks.push((tok, start));
        i += len;
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::negate(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.quantified(),
            _ => self.primary(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let exists = self.bump() == Tok::Exists;
        let mut vars = Vec::new();
        loop {
            let pos = self.pos();
            match self.bump() {
                Tok::Var(v) => {
                    if self.bound.contains(&v) || vars.contains(&v) {
                        return Err(ParseError {
                            position: pos,
                            message: format!("variable {v} is already bound by an enclosing quantifier"),
                        });
                    }
                    vars.push(v);
                }
                t => {
                    return Err(ParseError {
                        position: pos,
                        message: format!("expected a variable after quantifier, found {}", describe(&t)),
                    })
                }
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.bound.extend(vars.iter().cloned());
        let body = self.formula();
        self.bound.truncate(self.bound.len() - vars.len());
        let mut body = body?;
        for v in vars.into_iter().rev() {
            body = if exists {
                Formula::Exists(v, Box::new(body))
            } else {
                Formula::Forall(v, Box::new(body))
            };
        }
        Ok(body)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Seq(seq) => {
                self.bump();
                self.expect(Tok::LBracket, "`[` after sequence name")?;
                let index = self.term()?;
                self.expect(Tok::RBracket, "`]`")?;
                let negate = match self.bump() {
                    Tok::Cmp(CmpOp::Eq) => false,
                    Tok::Cmp(CmpOp::Ne) => true,
                    _ => {
                        self.at -= 1;
                        return self.fail("expected `=@letter` after sequence index");
                    }
                };
                self.expect(Tok::At, "`@`")?;
                let pos = self.pos();
                let letter = match self.bump() {
                    Tok::Num(n) if n <= 9 => n as u8,
                    _ => {
                        return Err(ParseError {
                            position: pos,
                            message: "expected a single digit letter after `@`".into(),
                        })
                    }
                };
                let atom = Formula::SeqAtom { seq, index, letter };
                Ok(if negate { Formula::negate(atom) } else { atom })
            }
            Tok::Var(_) | Tok::Num(_) => {
                let lhs = self.term()?;
                let op = match self.bump() {
                    Tok::Cmp(op) => op,
                    _ => {
                        self.at -= 1;
                        return self.fail("expected a comparison operator");
                    }
                };
                let rhs = self.term()?;
                Ok(Formula::Compare(lhs, op, rhs))
            }
            t => self.fail(format!("expected a formula, found {}", describe(&t))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.term_part()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            parts.push(self.term_part()?);
        }
        Ok(Term { parts })
    }

    fn term_part(&mut self) -> Result<TermPart, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(TermPart::Var(v))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(TermPart::Const(n))
            }
            t => self.fail(format!("expected a variable or number, found {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(v) => format!("variable `{v}`"),
        Tok::Seq(s) => format!("sequence `{s}`"),
        Tok::Num(n) => format!("number {n}"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

/// Parses a predicate. Unknown sequence names are reported by the compiler.
pub fn parse_predicate(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        bound: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    pub const SAME_FIRST_LAST: &str = "Ei (VTM[i]=@0 & VTM[i+k]=@0)|(VTM[i]=@2 & VTM[i+k]=@2)";

    fn set(vs: &[&str]) -> BTreeSet<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn same_first_last_formula() {
        let f = parse_predicate(SAME_FIRST_LAST).unwrap();
        assert_eq!(f.free_variables(), set(&["k"]));
        assert_eq!(f.bound_variables(), set(&["i"]));
        assert!(matches!(f, Formula::Exists(ref v, _) if v == "i"));
        assert_eq!(f.sequences(), set(&["VTM"]));
    }

    #[test]
    fn closed_formulas() {
        let f = parse_predicate("Ei i=i").unwrap();
        assert!(f.is_closed());
        let g = parse_predicate("Ai Ej j=i+1").unwrap();
        assert!(g.is_closed());
        assert_eq!(g.bound_variables(), set(&["i", "j"]));
    }

    #[test]
    fn precedence() {
        let f = parse_predicate("a=0 | b=0 & c=0 => ~d<1").unwrap();
        let expected = Formula::Implies(
            Box::new(Formula::Or(
                Box::new(Formula::Compare(Term::var("a"), CmpOp::Eq, Term::constant(0))),
                Box::new(Formula::And(
                    Box::new(Formula::Compare(Term::var("b"), CmpOp::Eq, Term::constant(0))),
                    Box::new(Formula::Compare(Term::var("c"), CmpOp::Eq, Term::constant(0))),
                )),
            )),
            Box::new(Formula::negate(Formula::Compare(
                Term::var("d"),
                CmpOp::Lt,
                Term::constant(1),
            ))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifier_lists_and_spacing() {
        let a = parse_predicate("E i,j i<j").unwrap();
        let b = parse_predicate("Ei Ej i<j").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            SAME_FIRST_LAST,
            "Ai Ej j=i+1",
            "Ax (x<y => VTM[x+2+y]!=@1)",
            "~(a>=b) | a+b>c",
        ] {
            let f = parse_predicate(text).unwrap();
            assert_eq!(parse_predicate(&f.to_string()).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_predicate("Ei (i=0").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_predicate("VTM[i]=0").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_predicate("i # 0").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_predicate("Ei Ei i=0").is_err());
        assert!(parse_predicate("VTM[i]=@12").is_err());
        assert!(parse_predicate("").is_err());
        assert!(parse_predicate("i=0 j=0").is_err());
    }
}
