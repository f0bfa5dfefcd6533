use std::collections::BTreeSet;
use std::fmt;

use crate::word::Letter;

/// One summand of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermPart {
    Var(String),
    Const(u64),
}

/// A sum of variables and natural constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub parts: Vec<TermPart>,
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term {
            parts: vec![TermPart::Var(name.to_string())],
        }
    }

    pub fn constant(c: u64) -> Self {
        Term {
            parts: vec![TermPart::Const(c)],
        }
    }

    fn variables(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            TermPart::Var(v) => Some(v.as_str()),
            TermPart::Const(_) => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Parse tree of a first-order predicate over automatic sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Compare(Term, CmpOp, Term),
    /// `SEQ[index] = @letter`
    SeqAtom {
        seq: String,
        index: Term,
        letter: Letter,
    },
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn bound_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Exists(v, _) | Formula::Forall(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Sequence names used in atoms.
    pub fn sequences(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::SeqAtom { seq, .. } = f {
                out.insert(seq.clone());
            }
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) | Formula::Not(b) => b.walk(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Formula::Compare(..) | Formula::SeqAtom { .. } => {}
        }
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |t: &Term, bound: &Vec<&str>| {
            for v in t.variables() {
                if !bound.contains(&v) {
                    out.insert(v.to_string());
                }
            }
        };
        match self {
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                bound.push(v);
                b.collect_free(bound, out);
                bound.pop();
            }
            Formula::Not(b) => b.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Compare(l, _, r) => {
                note(l, bound);
                note(r, bound);
            }
            Formula::SeqAtom { index, .. } => note(index, bound),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match p {
                TermPart::Var(v) => f.write_str(v)?,
                TermPart::Const(c) => write!(f, "{c}")?,
            }
        }
        Ok(())
    }
}

/// Fully parenthesized; the output parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Exists(v, b) => write!(f, "(E {v} {b})"),
            Formula::Forall(v, b) => write!(f, "(A {v} {b})"),
            Formula::Not(b) => write!(f, "~{b}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Compare(l, op, r) => write!(f, "{l}{}{r}", op.symbol()),
            Formula::SeqAtom { seq, index, letter } => write!(f, "{seq}[{index}]=@{letter}"),
        }
    }
}
