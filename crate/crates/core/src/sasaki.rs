//! Sasaki operations, the adjointness condition and membership in the
//! variety they define.
//!
//! For a bounded lattice with unary `′`:
//!
//! ```text
//! x ⊙ y = (x ∨ y′) ∧ y        x → y = x′ ∨ (x ∧ y)
//! ```
//!
//! They form an adjoint pair when `x ⊙ y ≤ z ⇔ x ≤ y → z` for all `x, y, z`.
//! On complemented lattices the two halves of that equivalence are each
//! captured by an identity, (b) and (e) below, and the class of lattices
//! satisfying both is a variety.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice};
use crate::term::{check_statement, parse_statement, Outcome, Statement};

#[inline]
pub fn sasaki_product(l: &FiniteLattice, x: Elem, y: Elem) -> Elem {
    l.meet(l.join(x, l.unary(y)), y)
}

#[inline]
pub fn sasaki_residual(l: &FiniteLattice, x: Elem, y: Elem) -> Elem {
    l.join(l.unary(x), l.meet(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `x ⊙ y ≤ z` but `x ≰ y → z`.
    ForwardFails,
    /// `x ≤ y → z` but `x ⊙ y ≰ z`.
    BackwardFails,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ForwardFails => "=>-fails",
            Direction::BackwardFails => "<=-fails",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjointWitness {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjointReport {
    pub witness: Option<AdjointWitness>,
    /// Number of triples examined, up to and including the witness.
    pub triples_checked: u64,
}

impl AdjointReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Where the adjunction breaks at `(x, y, z)`, if it does.
pub fn adjoint_failure(l: &FiniteLattice, x: Elem, y: Elem, z: Elem) -> Option<Direction> {
    let left = l.leq(sasaki_product(l, x, y), z);
    let right = l.leq(x, sasaki_residual(l, y, z));
    match (left, right) {
        (true, false) => Some(Direction::ForwardFails),
        (false, true) => Some(Direction::BackwardFails),
        _ => None,
    }
}

/// Scans all triples in lexicographic order and stops at the first failure.
/// The unary map need not be a complementation.
pub fn check_adjoint(l: &FiniteLattice) -> AdjointReport {
    let mut checked = 0;
    for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                checked += 1;
                if let Some(direction) = adjoint_failure(l, x, y, z) {
                    return AdjointReport {
                        witness: Some(AdjointWitness { x, y, z, direction }),
                        triples_checked: checked,
                    };
                }
            }
        }
    }
    AdjointReport {
        witness: None,
        triples_checked: checked,
    }
}

/// The six conditions `(a)`–`(f)`; `(a)`, `(c)`, `(d)`, `(f)` are Horn
/// clauses and `(b)`, `(e)` identities.
pub const THEOREM1_CONDITIONS: [(char, &str); 6] = [
    ('a', "x o y <= z => x <= y -> z"),
    ('b', "x v y' = y' v ((x v y') ^ y)"),
    ('c', "x' <= y => y = x' v (y ^ x)"),
    ('d', "x <= y -> z => x o y <= z"),
    ('e', "x ^ y = x ^ ((x ^ y) v x')"),
    ('f', "x <= y => x = (y' v x) ^ y"),
];

pub fn condition(name: char) -> &'static Statement {
    static PARSED: OnceLock<Vec<Statement>> = OnceLock::new();
    let all = PARSED.get_or_init(|| {
        THEOREM1_CONDITIONS
            .iter()
            .map(|(_, text)| parse_statement(text).expect("condition parses"))
            .collect()
    });
    let i = THEOREM1_CONDITIONS
        .iter()
        .position(|(c, _)| *c == name)
        .unwrap_or_else(|| panic!("no condition ({name})"));
    &all[i]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SasakiError {
    #[error("unary map is not a complementation at element {0}")]
    NotComplemented(Elem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub name: char,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Report {
    pub verdicts: Vec<ConditionVerdict>,
}

impl Theorem1Report {
    pub fn holds(&self, name: char) -> bool {
        self.verdicts
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.outcome.holds())
            .unwrap_or_else(|| panic!("no condition ({name})"))
    }

    pub fn abc_agree(&self) -> bool {
        self.holds('a') == self.holds('b') && self.holds('b') == self.holds('c')
    }

    pub fn def_agree(&self) -> bool {
        self.holds('d') == self.holds('e') && self.holds('e') == self.holds('f')
    }
}

/// Checks every condition independently on a complemented lattice.
pub fn check_theorem1(l: &FiniteLattice) -> Result<Theorem1Report, SasakiError> {
    if let Some(x) = l.elements().find(|&x| !l.is_complement_of(x, l.unary(x))) {
        return Err(SasakiError::NotComplemented(x));
    }
    let verdicts = THEOREM1_CONDITIONS
        .iter()
        .map(|&(name, _)| ConditionVerdict {
            name,
            outcome: check_statement(l, condition(name)),
        })
        .collect();
    Ok(Theorem1Report { verdicts })
}

/// Evidence behind a membership decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    /// First element whose image is not a complement of it.
    pub not_complemented: Option<Elem>,
    pub identity_b: Outcome,
    pub identity_e: Outcome,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.not_complemented.is_none() && self.identity_b.holds() && self.identity_e.holds()
    }
}

pub fn membership(l: &FiniteLattice) -> Membership {
    Membership {
        not_complemented: l.elements().find(|&x| !l.is_complement_of(x, l.unary(x))),
        identity_b: check_statement(l, condition('b')),
        identity_e: check_statement(l, condition('e')),
    }
}

/// Complemented and satisfies identities (b) and (e).
pub fn is_member_of_v(l: &FiniteLattice) -> bool {
    l.is_complemented()
        && check_statement(l, condition('b')).holds()
        && check_statement(l, condition('e')).holds()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma1Verdict {
    /// Adjointness fails, so there is nothing to confirm.
    Vacuous(AdjointWitness),
    /// Adjointness holds and the unary map is a complementation.
    Confirmed,
    /// Adjointness holds but some element is not complemented by its image.
    Violation(Elem),
}

/// Adjointness forces the unary map to be a complementation.
pub fn check_lemma1(l: &FiniteLattice) -> Lemma1Verdict {
    match check_adjoint(l).witness {
        Some(w) => Lemma1Verdict::Vacuous(w),
        None => match l.elements().find(|&x| !l.is_complement_of(x, l.unary(x))) {
            None => Lemma1Verdict::Confirmed,
            Some(x) => Lemma1Verdict::Violation(x),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Fig2Variant};

    #[test]
    fn product_with_top() {
        for l in [
            catalog::m3_paper(),
            catalog::n5(),
            catalog::fig2(Fig2Variant::First),
        ] {
            for a in l.elements() {
                assert_eq!(sasaki_product(&l, l.top(), a), a);
                assert_eq!(l.meet(l.unary(a), a), sasaki_product(&l, l.bottom(), a));
                assert_eq!(sasaki_residual(&l, l.bottom(), a), l.top());
            }
        }
    }

    #[test]
    fn worked_values() {
        let m3 = catalog::m3_paper();
        let i = |l: &FiniteLattice, s| l.index_of(s).unwrap();
        assert_eq!(sasaki_product(&m3, i(&m3, "a"), i(&m3, "b")), i(&m3, "b"));
        assert_eq!(sasaki_residual(&m3, i(&m3, "a"), i(&m3, "b")), i(&m3, "b"));
        let f = catalog::fig2(Fig2Variant::First);
        assert_eq!(sasaki_product(&f, i(&f, "e"), i(&f, "f")), i(&f, "a"));
        assert_eq!(sasaki_residual(&f, i(&f, "f"), i(&f, "a")), i(&f, "e"));
    }

    #[test]
    fn fixtures_adjoint() {
        let r = check_adjoint(&catalog::m3_paper());
        assert!(r.holds());
        assert_eq!(r.triples_checked, 125);
        let r = check_adjoint(&catalog::fig2(Fig2Variant::First));
        assert!(r.holds());
        assert_eq!(r.triples_checked, 1000);
    }

    #[test]
    fn n5_backward_witness_at_a_c() {
        let l = catalog::n5();
        assert!(!check_adjoint(&l).holds());
        let (a, c) = (l.index_of("a").unwrap(), l.index_of("c").unwrap());
        // x = c′ ∨ a = 1 ≤ c → a, but 1 ⊙ c = c ≰ a
        let x = l.join(l.unary(c), a);
        assert_eq!(adjoint_failure(&l, x, c, a), Some(Direction::BackwardFails));
    }

    #[test]
    fn conditions_on_m3_and_n5() {
        let r = check_theorem1(&catalog::m3_paper()).unwrap();
        assert!(r.verdicts.iter().all(|v| v.outcome.holds()));
        let l = catalog::n5();
        let r = check_theorem1(&l).unwrap();
        assert!(!r.holds('d') && !r.holds('e') && !r.holds('f'));
        assert!(r.abc_agree() && r.def_agree());
        let idx = |s| l.index_of(s).unwrap();
        let ce = |n| {
            r.verdicts
                .iter()
                .find(|v| v.name == n)
                .unwrap()
                .outcome
                .counterexample()
                .unwrap()
                .assignment
                .clone()
        };
        assert_eq!(ce('e').get("x"), Some(idx("c")));
        assert_eq!(ce('e').get("y"), Some(idx("a")));
        assert_eq!(ce('f').get("x"), Some(idx("a")));
        assert_eq!(ce('f').get("y"), Some(idx("c")));
    }

    #[test]
    fn conditions_require_complement() {
        let l = catalog::m3_paper().with_unary(vec![0; 5]).unwrap();
        assert_eq!(check_theorem1(&l), Err(SasakiError::NotComplemented(0)));
    }

    #[test]
    fn membership_examples() {
        assert!(is_member_of_v(&catalog::m3_paper()));
        assert!(is_member_of_v(&catalog::fig2(Fig2Variant::First)));
        assert!(is_member_of_v(&catalog::fig2(Fig2Variant::Second)));
        let n5 = catalog::n5();
        for c in n5.all_complementations() {
            assert!(!is_member_of_v(&n5.with_unary(c).unwrap()));
        }
        let m = membership(&n5);
        assert!(!m.is_member() && !m.identity_e.holds());
    }

    #[test]
    fn adjointness_forces_complement_cases() {
        let l = catalog::m3_paper().with_unary(vec![0; 5]).unwrap();
        assert!(matches!(check_lemma1(&l), Lemma1Verdict::Vacuous(_)));
        assert_eq!(check_lemma1(&catalog::chain2()), Lemma1Verdict::Confirmed);
    }

    #[test]
    fn conditions_parse() {
        for (c, _) in THEOREM1_CONDITIONS {
            let _ = condition(c);
        }
    }
}
