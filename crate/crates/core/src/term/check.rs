//! Exhaustive model checking of identities and quasi-identities.
//!
//! Assignments are enumerated in lexicographic order of element indices,
//! with variables sorted by name and the first variable most significant.
//! Large spaces are scanned in parallel, but the reported counterexample is
//! always the first one in that order.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{Assignment, Identity, QuasiIdentity, Relation, Statement, StatementBody, Term};
use crate::lattice::{Elem, FiniteLattice};

const PARALLEL_THRESHOLD: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Var(usize),
    Zero,
    One,
    Join(usize, usize),
    Meet(usize, usize),
    Comp(usize),
}

/// A sugar-free term flattened into straight-line code with shared
/// subterms computed once.
#[derive(Debug, Clone)]
pub struct Compiled {
    vars: Vec<String>,
    ops: Vec<Op>,
    roots: Vec<usize>,
}

impl Compiled {
    /// Compiles several terms over a common, explicitly ordered variable list.
    ///
    /// Panics if a term mentions a variable missing from `vars`.
    pub fn new(terms: &[&Term], vars: &[String]) -> Self {
        let mut c = Compiled {
            vars: vars.to_vec(),
            ops: Vec::new(),
            roots: Vec::new(),
        };
        let mut memo = HashMap::new();
        for t in terms {
            let r = c.emit(&t.expand(), &mut memo);
            c.roots.push(r);
        }
        c
    }

    fn emit(&mut self, t: &Term, memo: &mut HashMap<Op, usize>) -> usize {
        let op = match t {
            Term::Var(v) => Op::Var(
                self.vars
                    .iter()
                    .position(|w| w == v)
                    .unwrap_or_else(|| panic!("variable `{v}` not in compile scope")),
            ),
            Term::Zero => Op::Zero,
            Term::One => Op::One,
            Term::Join(a, b) => Op::Join(self.emit(a, memo), self.emit(b, memo)),
            Term::Meet(a, b) => Op::Meet(self.emit(a, memo), self.emit(b, memo)),
            Term::Comp(a) => Op::Comp(self.emit(a, memo)),
            Term::SasakiProd(..) | Term::SasakiRes(..) => unreachable!("expanded"),
        };
        *memo.entry(op).or_insert_with(|| {
            self.ops.push(op);
            self.ops.len() - 1
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Evaluates every op into `buf`; `buf[root(i)]` is then the value of term `i`.
    pub fn run(&self, l: &FiniteLattice, values: &[Elem], buf: &mut Vec<Elem>) {
        buf.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => values[i],
                Op::Zero => l.bottom(),
                Op::One => l.top(),
                Op::Join(a, b) => l.join(buf[a], buf[b]),
                Op::Meet(a, b) => l.meet(buf[a], buf[b]),
                Op::Comp(a) => l.unary(buf[a]),
            };
            buf.push(v);
        }
    }

    pub fn root(&self, i: usize) -> usize {
        self.roots[i]
    }

    /// Value of the first term.
    pub fn eval(&self, l: &FiniteLattice, values: &[Elem]) -> Elem {
        let mut buf = Vec::with_capacity(self.ops.len());
        self.run(l, values, &mut buf);
        buf[self.roots[0]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Assignment,
    /// Values of the two sides of the failing conclusion.
    pub lhs: Elem,
    pub rhs: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds { checked: u64 },
    Fails(Counterexample),
}

impl Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Outcome::Holds { .. } => None,
            Outcome::Fails(c) => Some(c),
        }
    }
}

fn digits(mut code: u64, n: usize, k: usize, out: &mut [Elem]) {
    for slot in out[..k].iter_mut().rev() {
        *slot = (code % n as u64) as Elem;
        code /= n as u64;
    }
}

/// Scans all `n^k` assignments for the first one where `fails` is true.
fn first_failure<F>(l: &FiniteLattice, k: usize, fails: F) -> (u64, Option<Vec<Elem>>)
where
    F: Fn(&[Elem], &mut Vec<Elem>) -> bool + Sync,
{
    let n = l.size();
    let total = (n as u64)
        .checked_pow(k as u32)
        .expect("assignment space overflows u64");
    let probe = |code: u64, vals: &mut Vec<Elem>, buf: &mut Vec<Elem>| {
        digits(code, n, k, vals);
        fails(vals, buf)
    };
    let hit = if total >= PARALLEL_THRESHOLD {
        (0..total)
            .into_par_iter()
            .map_init(
                || (vec![0; k], Vec::new()),
                |(vals, buf), code| (code, probe(code, vals, buf)),
            )
            .find_first(|&(_, bad)| bad)
            .map(|(code, _)| code)
    } else {
        let (mut vals, mut buf) = (vec![0; k], Vec::new());
        (0..total).find(|&code| probe(code, &mut vals, &mut buf))
    };
    (
        total,
        hit.map(|code| {
            let mut vals = vec![0; k];
            digits(code, n, k, &mut vals);
            vals
        }),
    )
}

fn assignment(vars: &[String], vals: &[Elem]) -> Assignment {
    vars.iter().cloned().zip(vals.iter().copied()).collect()
}

/// Checks `lhs ≈ rhs` over every assignment.
pub fn check_identity(l: &FiniteLattice, id: &Identity) -> Outcome {
    let vars: Vec<String> = id.vars().into_iter().collect();
    let prog = Compiled::new(&[&id.lhs, &id.rhs], &vars);
    let (lr, rr) = (prog.root(0), prog.root(1));
    let (total, hit) = first_failure(l, vars.len(), |vals, buf| {
        prog.run(l, vals, buf);
        buf[lr] != buf[rr]
    });
    match hit {
        None => Outcome::Holds { checked: total },
        Some(vals) => {
            let mut buf = Vec::new();
            prog.run(l, &vals, &mut buf);
            Outcome::Fails(Counterexample {
                assignment: assignment(&vars, &vals),
                lhs: buf[lr],
                rhs: buf[rr],
            })
        }
    }
}

/// Checks a Horn clause: reports the first assignment satisfying every
/// premise but not the conclusion.
pub fn check_quasi(l: &FiniteLattice, q: &QuasiIdentity) -> Outcome {
    let vars: Vec<String> = q.vars().into_iter().collect();
    let rels: Vec<&Relation> = q
        .premises
        .iter()
        .chain(std::iter::once(&q.conclusion))
        .collect();
    let terms: Vec<&Term> = rels.iter().flat_map(|r| [&r.lhs, &r.rhs]).collect();
    let prog = Compiled::new(&terms, &vars);
    let sides = |buf: &[Elem], i: usize| (buf[prog.root(2 * i)], buf[prog.root(2 * i + 1)]);
    let satisfied = |buf: &[Elem], i: usize| {
        let (a, b) = sides(buf, i);
        rels[i].holds_for(l, a, b)
    };
    let last = rels.len() - 1;
    let (total, hit) = first_failure(l, vars.len(), |vals, buf| {
        prog.run(l, vals, buf);
        (0..last).all(|i| satisfied(buf, i)) && !satisfied(buf, last)
    });
    match hit {
        None => Outcome::Holds { checked: total },
        Some(vals) => {
            let mut buf = Vec::new();
            prog.run(l, &vals, &mut buf);
            let (lhs, rhs) = sides(&buf, last);
            Outcome::Fails(Counterexample {
                assignment: assignment(&vars, &vals),
                lhs,
                rhs,
            })
        }
    }
}

pub fn check_statement(l: &FiniteLattice, s: &Statement) -> Outcome {
    match &s.body {
        StatementBody::Identity(id) => check_identity(l, id),
        StatementBody::Quasi(q) => check_quasi(l, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::term::{eval, parse_statement, parse_term};

    fn identity(text: &str) -> Identity {
        match parse_statement(text).unwrap().body {
            StatementBody::Identity(i) => i,
            _ => panic!("not an identity"),
        }
    }

    fn quasi(text: &str) -> QuasiIdentity {
        match parse_statement(text).unwrap().body {
            StatementBody::Quasi(q) => q,
            _ => panic!("not a quasi-identity"),
        }
    }

    #[test]
    fn m3_satisfies_b() {
        let l = catalog::m3_paper();
        let out = check_identity(&l, &identity("x v y' = y' v ((x v y') ^ y)"));
        assert_eq!(out, Outcome::Holds { checked: 25 });
    }

    #[test]
    fn x_equals_y_fails() {
        for l in [catalog::m3_paper(), catalog::chain2()] {
            let out = check_identity(&l, &identity("x = y"));
            let ce = out.counterexample().unwrap();
            assert_eq!(ce.assignment, Assignment::new().with("x", 0).with("y", 1));
        }
    }

    #[test]
    fn n5_identity_e_first_counterexample() {
        let l = catalog::n5();
        let idx = |s| l.index_of(s).unwrap();
        let out = check_identity(&l, &identity("x ^ y = x ^ ((x ^ y) v x')"));
        let ce = out.counterexample().unwrap();
        assert_eq!(
            ce.assignment,
            Assignment::new().with("x", idx("c")).with("y", idx("a"))
        );
        assert_eq!((ce.lhs, ce.rhs), (idx("a"), idx("c")));
    }

    #[test]
    fn m3_condition_c_holds() {
        let l = catalog::m3_paper();
        assert!(check_quasi(&l, &quasi("x' <= y => y = x' v (y ^ x)")).holds());
    }

    #[test]
    fn n5_condition_f_counterexample() {
        let l = catalog::n5();
        let idx = |s| l.index_of(s).unwrap();
        let out = check_quasi(&l, &quasi("x <= y => x = (y' v x) ^ y"));
        let ce = out.counterexample().unwrap();
        assert_eq!(
            ce.assignment,
            Assignment::new().with("x", idx("a")).with("y", idx("c"))
        );
        assert_eq!((ce.lhs, ce.rhs), (idx("a"), idx("c")));
    }

    #[test]
    fn vacuous_premise() {
        for l in [catalog::m3_paper(), catalog::n5(), catalog::chain2()] {
            assert!(check_quasi(&l, &quasi("1 <= 0 => x = y")).holds());
        }
    }

    #[test]
    fn parallel_scan_returns_sequential_first() {
        // 10^5 assignments crosses the parallel threshold
        let l = catalog::fig2(catalog::Fig2Variant::First);
        let id = identity("a ^ b ^ c ^ d ^ e = 0");
        let out = check_identity(&l, &id);
        let vars: Vec<String> = id.vars().into_iter().collect();
        let mut seq = None;
        'outer: for code in 0..10u64.pow(5) {
            let mut vals = vec![0; 5];
            digits(code, 10, 5, &mut vals);
            let a = assignment(&vars, &vals);
            if eval(&id.lhs, &l, &a).unwrap() != eval(&id.rhs, &l, &a).unwrap() {
                seq = Some(a);
                break 'outer;
            }
        }
        assert_eq!(out.counterexample().map(|c| c.assignment.clone()), seq);
    }

    #[test]
    fn compiled_shares_subterms() {
        let t = parse_term("t(x, y, z)").unwrap();
        let vars = vec!["x".to_string(), "y".into(), "z".into()];
        let c = Compiled::new(&[&t], &vars);
        // x, y, z, x∨y, (x∨y)∧z, its complement, ... : far fewer ops than nodes
        assert!(c.ops.len() < 16, "{}", c.ops.len());
    }
}
