//! Lattice terms over `∨`, `∧`, `′`, the constants and the Sasaki operations.

mod check;
mod parser;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice};

pub use check::{check_identity, check_quasi, check_statement, Compiled, Counterexample, Outcome};
pub use parser::{parse_statement, parse_statements, parse_term, ParseError, StatementFileError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Comp(Box<Term>),
    /// `x ⊙ y = (x ∨ y′) ∧ y`
    SasakiProd(Box<Term>, Box<Term>),
    /// `x → y = x′ ∨ (x ∧ y)`
    SasakiRes(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn comp(a: Term) -> Term {
        Term::Comp(Box::new(a))
    }

    pub fn odot(a: Term, b: Term) -> Term {
        Term::SasakiProd(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Term, b: Term) -> Term {
        Term::SasakiRes(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Comp(a) => a.collect_vars(out),
            Term::Join(a, b)
            | Term::Meet(a, b)
            | Term::SasakiProd(a, b)
            | Term::SasakiRes(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces the Sasaki nodes by their definitions.
    pub fn expand(&self) -> Term {
        match self {
            Term::Var(_) | Term::Zero | Term::One => self.clone(),
            Term::Join(a, b) => Term::join(a.expand(), b.expand()),
            Term::Meet(a, b) => Term::meet(a.expand(), b.expand()),
            Term::Comp(a) => Term::comp(a.expand()),
            Term::SasakiProd(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Term::meet(Term::join(a, Term::comp(b.clone())), b)
            }
            Term::SasakiRes(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Term::join(Term::comp(a.clone()), Term::meet(a, b))
            }
        }
    }

    pub fn is_sugar_free(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero | Term::One => true,
            Term::Comp(a) => a.is_sugar_free(),
            Term::Join(a, b) | Term::Meet(a, b) => a.is_sugar_free() && b.is_sugar_free(),
            Term::SasakiProd(..) | Term::SasakiRes(..) => false,
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, map: &HashMap<&str, Term>) -> Term {
        let go = |t: &Term| Box::new(t.substitute(map));
        match self {
            Term::Var(v) => map.get(v.as_str()).cloned().unwrap_or_else(|| self.clone()),
            Term::Zero | Term::One => self.clone(),
            Term::Join(a, b) => Term::Join(go(a), go(b)),
            Term::Meet(a, b) => Term::Meet(go(a), go(b)),
            Term::Comp(a) => Term::Comp(go(a)),
            Term::SasakiProd(a, b) => Term::SasakiProd(go(a), go(b)),
            Term::SasakiRes(a, b) => Term::SasakiRes(go(a), go(b)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Join(..) => 0,
            Term::Meet(..) => 1,
            Term::SasakiProd(..) | Term::SasakiRes(..) => 2,
            Term::Comp(_) => 3,
            Term::Var(_) | Term::Zero | Term::One => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Join(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" v ")?;
                b.fmt_at(f, 1)
            }
            Term::Meet(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(" ^ ")?;
                b.fmt_at(f, 2)
            }
            Term::SasakiProd(a, b) | Term::SasakiRes(a, b) => {
                a.fmt_at(f, 3)?;
                f.write_str(if matches!(self, Term::SasakiProd(..)) {
                    " o "
                } else {
                    " -> "
                })?;
                b.fmt_at(f, 3)
            }
            Term::Comp(a) => {
                a.fmt_at(f, 3)?;
                f.write_str("'")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Values for the variables of a term.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<String, Elem>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, value: Elem) -> Self {
        self.0.insert(var.to_owned(), value);
        self
    }

    pub fn insert(&mut self, var: &str, value: Elem) {
        self.0.insert(var.to_owned(), value);
    }

    pub fn get(&self, var: &str) -> Option<Elem> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Elem)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// `x=c, y=a` using the lattice's labels.
    pub fn describe(&self, l: &FiniteLattice) -> String {
        self.iter()
            .map(|(k, v)| format!("{k}={}", l.label(v)))
            .join(", ")
    }
}

impl FromIterator<(String, Elem)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, Elem)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
}

/// Direct recursive evaluation; Sasaki nodes are computed from their
/// definitions on the spot rather than by expansion.
pub fn eval(t: &Term, l: &FiniteLattice, a: &Assignment) -> Result<Elem, EvalError> {
    Ok(match t {
        Term::Var(v) => a
            .get(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.clone()))?,
        Term::Zero => l.bottom(),
        Term::One => l.top(),
        Term::Join(x, y) => l.join(eval(x, l, a)?, eval(y, l, a)?),
        Term::Meet(x, y) => l.meet(eval(x, l, a)?, eval(y, l, a)?),
        Term::Comp(x) => l.unary(eval(x, l, a)?),
        Term::SasakiProd(x, y) => {
            let (x, y) = (eval(x, l, a)?, eval(y, l, a)?);
            l.meet(l.join(x, l.unary(y)), y)
        }
        Term::SasakiRes(x, y) => {
            let (x, y) = (eval(x, l, a)?, eval(y, l, a)?);
            l.join(l.unary(x), l.meet(x, y))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelKind {
    Eq,
    Le,
}

/// `lhs = rhs` or `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Term,
    pub rhs: Term,
    pub kind: RelKind,
}

impl Relation {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Relation {
            lhs,
            rhs,
            kind: RelKind::Eq,
        }
    }

    pub fn le(lhs: Term, rhs: Term) -> Self {
        Relation {
            lhs,
            rhs,
            kind: RelKind::Le,
        }
    }

    pub fn holds_for(&self, l: &FiniteLattice, lhs: Elem, rhs: Elem) -> bool {
        match self.kind {
            RelKind::Eq => lhs == rhs,
            RelKind::Le => l.leq(lhs, rhs),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            RelKind::Eq => "=",
            RelKind::Le => "<=",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

/// An equation `lhs ≈ rhs`, universally quantified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Horn clause: a conjunction of relations implies one relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Relation>,
    pub conclusion: Relation,
}

impl QuasiIdentity {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = BTreeSet::new();
        for r in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            v.extend(r.lhs.vars());
            v.extend(r.rhs.vars());
        }
        v
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            write!(f, "{} => ", self.premises.iter().join(" & "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// One line of an identities file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub label: Option<String>,
    pub body: StatementBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementBody {
    Identity(Identity),
    Quasi(QuasiIdentity),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        match &self.body {
            StatementBody::Identity(i) => write!(f, "{i}"),
            StatementBody::Quasi(q) => write!(f, "{q}"),
        }
    }
}

/// Named terms usable in call syntax, e.g. `p(x, x, z)`.
///
/// `t1` and `u` are the same binary term `(x ∧ y) ∨ (x ∨ y)′`; `t` and `tBig`
/// both name the long ternary term. `reg1`/`reg2` are the two ternary
/// witnesses for regularity built from `u`.
pub const BUILTINS: &[(&str, &[&str], &str)] = &[
    ("odot", &["x", "y"], "x o y"),
    ("arrow", &["x", "y"], "x -> y"),
    ("t1", &["x", "y"], "(x ^ y) v (x v y)'"),
    ("u", &["x", "y"], "(x ^ y) v (x v y)'"),
    ("t", &["x", "y", "z"], TERNARY_T),
    ("tBig", &["x", "y", "z"], TERNARY_T),
    (
        "p",
        &["x", "y", "z"],
        "(x ^ ((z ^ y) v y')) v (z ^ ((x ^ y) v y'))",
    ),
    ("m", &["x", "y", "z"], "(x v y) ^ (y v z) ^ (z v x)"),
    ("reg1", &["x", "y", "z"], "((x ^ y) v (x v y)') ^ z"),
    ("reg2", &["x", "y", "z"], "((x ^ y) v (x v y)')' v z"),
];

const TERNARY_T: &str =
    "((((((x v y) ^ z)' v x) ^ (x v y))' v x) ^ (((x v y) ^ z)' v y)) ^ (x v y)";

/// Looks up a built-in by name and instantiates it with `args`.
pub fn builtin(name: &str, args: Vec<Term>) -> Option<Result<Term, usize>> {
    let &(_, params, body) = BUILTINS.iter().find(|(n, _, _)| *n == name)?;
    if params.len() != args.len() {
        return Some(Err(params.len()));
    }
    let body = parse_term(body).expect("built-in terms parse");
    let map: HashMap<&str, Term> = params.iter().copied().zip(args).collect();
    Some(Ok(body.substitute(&map)))
}

/// A built-in applied to its own parameter names.
pub fn builtin_term(name: &str) -> Option<Term> {
    let &(_, params, _) = BUILTINS.iter().find(|(n, _, _)| *n == name)?;
    builtin(name, params.iter().map(|p| Term::var(p)).collect()).and_then(Result::ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn grammar_exercise() {
        let t = parse_term("(x v y') ^ y").unwrap();
        assert_eq!(
            t,
            Term::meet(Term::join(v("x"), Term::comp(v("y"))), v("y"))
        );
    }

    #[test]
    fn odot_expands_to_definition() {
        let t = parse_term("x o y").unwrap();
        assert_eq!(t, Term::odot(v("x"), v("y")));
        assert_eq!(t.expand(), parse_term("(x v y') ^ y").unwrap());
        assert!(t.expand().is_sugar_free());
        assert!(!t.is_sugar_free());
    }

    #[test]
    fn eval_m3_odot() {
        let l = catalog::m3_paper();
        let (a, b) = (l.index_of("a").unwrap(), l.index_of("b").unwrap());
        let t = parse_term("x o y").unwrap();
        let asg = Assignment::new().with("x", a).with("y", b);
        assert_eq!(eval(&t, &l, &asg), Ok(b));
    }

    #[test]
    fn eval_zero_arrow() {
        let t = parse_term("0 -> y").unwrap();
        for l in [
            catalog::m3_paper(),
            catalog::fig2(catalog::Fig2Variant::First),
        ] {
            for y in l.elements() {
                assert_eq!(eval(&t, &l, &Assignment::new().with("y", y)), Ok(l.top()));
            }
        }
    }

    #[test]
    fn eval_fig2_odot() {
        let l = catalog::fig2(catalog::Fig2Variant::First);
        let idx = |s| l.index_of(s).unwrap();
        let t = parse_term("x o y").unwrap();
        let asg = Assignment::new().with("x", idx("e")).with("y", idx("f"));
        assert_eq!(eval(&t, &l, &asg), Ok(idx("a")));
    }

    #[test]
    fn eval_unbound() {
        let l = catalog::m3_paper();
        let t = parse_term("x v z").unwrap();
        assert_eq!(
            eval(&t, &l, &Assignment::new().with("x", 0)),
            Err(EvalError::UnboundVariable("z".into()))
        );
    }

    #[test]
    fn registry_is_structurally_exact() {
        let x = || v("x");
        let y = || v("y");
        let z = || v("z");
        let t1 = Term::join(Term::meet(x(), y()), Term::comp(Term::join(x(), y())));
        assert_eq!(builtin_term("t1").unwrap(), t1);
        assert_eq!(builtin_term("u").unwrap(), t1);
        assert_eq!(builtin_term("odot").unwrap(), Term::odot(x(), y()));
        assert_eq!(builtin_term("arrow").unwrap(), Term::arrow(x(), y()));

        let p = Term::join(
            Term::meet(x(), Term::join(Term::meet(z(), y()), Term::comp(y()))),
            Term::meet(z(), Term::join(Term::meet(x(), y()), Term::comp(y()))),
        );
        assert_eq!(builtin_term("p").unwrap(), p);

        let m = Term::meet(
            Term::meet(Term::join(x(), y()), Term::join(y(), z())),
            Term::join(z(), x()),
        );
        assert_eq!(builtin_term("m").unwrap(), m);

        // ((((x∨y)∧z)′∨x)∧(x∨y))′∨x) ∧ (((x∨y)∧z)′∨y) ∧ (x∨y)
        let xy = || Term::join(x(), y());
        let a = || Term::comp(Term::meet(xy(), z()));
        let first = Term::join(Term::comp(Term::meet(Term::join(a(), x()), xy())), x());
        let second = Term::join(a(), y());
        let t = Term::meet(Term::meet(first, second), xy());
        assert_eq!(builtin_term("t").unwrap(), t);
        assert_eq!(builtin_term("tBig").unwrap(), t);

        let u = t1.clone();
        assert_eq!(builtin_term("reg1").unwrap(), Term::meet(u.clone(), z()));
        assert_eq!(
            builtin_term("reg2").unwrap(),
            Term::join(Term::comp(u), z())
        );
    }

    #[test]
    fn builtin_call_substitutes_simultaneously() {
        let t = parse_term("t1(y, x)").unwrap();
        assert_eq!(t, parse_term("(y ^ x) v (y v x)'").unwrap());
        let t = parse_term("p(x, x, z)").unwrap();
        assert_eq!(t.vars().into_iter().collect::<Vec<_>>(), vec!["x", "z"]);
    }
}
