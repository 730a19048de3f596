//! Ideals in the sense of ideal terms: subsets containing `1` that are closed
//! under every term `t(x̄, ȳ)` with `t(x̄, 1, …, 1) ≈ 1`.
//!
//! Note the naming: these sets contain the top element and are closed
//! upwards, so order-theoretically they are filters. On members of the
//! variety they are exactly the classes `[1]Θ` of congruences, and four
//! terms suffice to test closure:
//!
//! ```text
//! t1(t(x1,x2,y1) ∨ t(x3,x4,y2), x2 ∨ x4)
//! t1(t(x1,x2,y1) ∧ t(x3,x4,y2), x2 ∧ x4)
//! t1(t(x1,x2,y)′, x2′)
//! 1
//! ```
//!
//! with `t1(x,y) = (x ∧ y) ∨ (x ∨ y)′` and `t` the ternary built-in `t`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::congruence::{all_congruences, is_congruence, Congruence};
use crate::lattice::{Elem, FiniteLattice};
use crate::sasaki;
use crate::term::{
    builtin_term, check_identity, parse_statements, parse_term, Compiled, Identity, Outcome,
    StatementBody, Term,
};

/// Subset enumeration is used up to this carrier size; above it ideals are
/// read off congruence kernels.
pub const SUBSET_ENUMERATION_LIMIT: usize = 12;

/// A subset of the carrier, sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdealSet(Vec<Elem>);

impl IdealSet {
    pub fn from_elems(elems: impl IntoIterator<Item = Elem>) -> Self {
        let set: BTreeSet<Elem> = elems.into_iter().collect();
        IdealSet(set.into_iter().collect())
    }

    fn from_mask(mask: &[bool]) -> Self {
        IdealSet(
            mask.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.0 {
            m[x] = true;
        }
        m
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn labels(&self, l: &FiniteLattice) -> Vec<String> {
        self.0.iter().map(|&x| l.label(x).to_owned()).collect()
    }

    pub fn describe(&self, l: &FiniteLattice) -> String {
        l.format_set(self.0.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("lattice is not in the variety")]
    NotInV,
    #[error("{0:?} is not an ideal")]
    NotAnIdeal(IdealSet),
    #[error("internal violation: {0}")]
    InternalViolation(String),
}

/// One basis term with its free (`x`) and ideal (`y`) variables.
#[derive(Debug, Clone)]
pub struct BasisTerm {
    pub term: Term,
    pub x_vars: Vec<String>,
    pub y_vars: Vec<String>,
}

pub const BASIS_TEXT: [&str; 4] = [
    "t1(t(x1, x2, y1) v t(x3, x4, y2), x2 v x4)",
    "t1(t(x1, x2, y1) ^ t(x3, x4, y2), x2 ^ x4)",
    "t1(t(x1, x2, y)', x2')",
    "1",
];

/// The four basis terms as syntax trees.
pub fn ideal_basis() -> Vec<BasisTerm> {
    BASIS_TEXT
        .iter()
        .map(|text| {
            let term = parse_term(text).expect("basis term parses");
            let (y_vars, x_vars) = term.vars().into_iter().partition(|v| v.starts_with('y'));
            BasisTerm {
                term,
                x_vars,
                y_vars,
            }
        })
        .collect()
}

/// `B(x̄, 1, …, 1) ≈ 1` for each basis term `B`.
pub fn check_ideal_term_law(l: &FiniteLattice) -> Vec<(Identity, Outcome)> {
    ideal_basis()
        .into_iter()
        .map(|b| {
            let ones = b.y_vars.iter().map(|y| (y.as_str(), Term::One)).collect();
            let id = Identity::new(b.term.substitute(&ones), Term::One);
            let out = check_identity(l, &id);
            (id, out)
        })
        .collect()
}

/// Cached values of `t(x1, x2, y)` and `t1(x, y)` for one lattice.
#[derive(Debug, Clone)]
pub struct IdealTables {
    n: usize,
    t: Vec<Elem>,
    t1: Vec<Elem>,
}

impl IdealTables {
    pub fn new(l: &FiniteLattice) -> Self {
        let n = l.size();
        let xyz = ["x".to_string(), "y".into(), "z".into()];
        let t_term = builtin_term("t").expect("t is built in");
        let t1_term = builtin_term("t1").expect("t1 is built in");
        let t_prog = Compiled::new(&[&t_term], &xyz);
        let t1_prog = Compiled::new(&[&t1_term], &xyz[..2]);
        let mut t = Vec::with_capacity(n * n * n);
        for x1 in 0..n {
            for x2 in 0..n {
                for y in 0..n {
                    t.push(t_prog.eval(l, &[x1, x2, y]));
                }
            }
        }
        let mut t1 = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                t1.push(t1_prog.eval(l, &[x, y]));
            }
        }
        IdealTables { n, t, t1 }
    }

    #[inline]
    pub fn t(&self, x1: Elem, x2: Elem, y: Elem) -> Elem {
        self.t[(x1 * self.n + x2) * self.n + y]
    }

    #[inline]
    pub fn t1(&self, x: Elem, y: Elem) -> Elem {
        self.t1[x * self.n + y]
    }

    /// Every value the basis terms take with `x`-arguments in `L` and
    /// `y`-arguments in the set `members`.
    fn images(&self, l: &FiniteLattice, members: &[bool]) -> Vec<bool> {
        let n = self.n;
        let mut out = vec![false; n];
        out[l.top()] = true;
        // reach[x2] = { t(x1, x2, y) : x1 ∈ L, y ∈ S }
        let reach: Vec<Vec<Elem>> = (0..n)
            .map(|x2| {
                let mut seen = vec![false; n];
                for x1 in 0..n {
                    for y in (0..n).filter(|&y| members[y]) {
                        seen[self.t(x1, x2, y)] = true;
                    }
                }
                (0..n).filter(|&v| seen[v]).collect()
            })
            .collect();
        for x2 in 0..n {
            for &a in &reach[x2] {
                out[self.t1(l.unary(a), l.unary(x2))] = true;
            }
            for x4 in 0..n {
                let (j, m) = (l.join(x2, x4), l.meet(x2, x4));
                for &a in &reach[x2] {
                    for &b in &reach[x4] {
                        out[self.t1(l.join(a, b), j)] = true;
                        out[self.t1(l.meet(a, b), m)] = true;
                    }
                }
            }
        }
        out
    }

    fn is_closed(&self, l: &FiniteLattice, members: &[bool]) -> bool {
        members[l.top()]
            && self
                .images(l, members)
                .iter()
                .zip(members)
                .all(|(&img, &m)| !img || m)
    }

    fn close(&self, l: &FiniteLattice, mut members: Vec<bool>) -> Vec<bool> {
        members[l.top()] = true;
        loop {
            let img = self.images(l, &members);
            let mut grew = false;
            for (m, i) in members.iter_mut().zip(img) {
                if i && !*m {
                    *m = true;
                    grew = true;
                }
            }
            if !grew {
                return members;
            }
        }
    }
}

fn require_v(l: &FiniteLattice) -> Result<(), IdealError> {
    if sasaki::is_member_of_v(l) {
        Ok(())
    } else {
        Err(IdealError::NotInV)
    }
}

/// Contains `1` and is closed under the basis.
pub fn is_ideal(l: &FiniteLattice, s: &IdealSet) -> Result<bool, IdealError> {
    require_v(l)?;
    Ok(IdealTables::new(l).is_closed(l, &s.mask(l.size())))
}

/// The least ideal containing `s`.
pub fn ideal_closure(l: &FiniteLattice, s: &IdealSet) -> Result<IdealSet, IdealError> {
    require_v(l)?;
    let tables = IdealTables::new(l);
    Ok(IdealSet::from_mask(&tables.close(l, s.mask(l.size()))))
}

fn sort_ideals(mut v: Vec<IdealSet>) -> Vec<IdealSet> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

/// Ideals found by testing every subset that contains `1`.
pub fn ideals_by_subsets(l: &FiniteLattice) -> Result<Vec<IdealSet>, IdealError> {
    require_v(l)?;
    let tables = IdealTables::new(l);
    let n = l.size();
    let others: Vec<Elem> = l.elements().filter(|&x| x != l.top()).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << others.len()) {
        let mut members = vec![false; n];
        members[l.top()] = true;
        for (k, &x) in others.iter().enumerate() {
            members[x] = bits >> k & 1 == 1;
        }
        if tables.is_closed(l, &members) {
            out.push(IdealSet::from_mask(&members));
        }
    }
    Ok(sort_ideals(out))
}

/// Ideals read off as the kernels `[1]Θ` of all congruences, each verified
/// to be closed under the basis.
pub fn ideals_by_kernels(l: &FiniteLattice) -> Result<Vec<IdealSet>, IdealError> {
    require_v(l)?;
    let tables = IdealTables::new(l);
    let kernels: BTreeSet<IdealSet> = all_congruences(l)
        .iter()
        .map(|c| IdealSet(c.class_of(l.top())))
        .collect();
    for k in &kernels {
        if !tables.is_closed(l, &k.mask(l.size())) {
            return Err(IdealError::InternalViolation(format!(
                "kernel {} is not closed under the ideal basis",
                k.describe(l)
            )));
        }
    }
    Ok(sort_ideals(kernels.into_iter().collect()))
}

/// All ideals, sorted by size and then lexicographically.
pub fn all_ideals(l: &FiniteLattice) -> Result<Vec<IdealSet>, IdealError> {
    if l.size() <= SUBSET_ENUMERATION_LIMIT {
        ideals_by_subsets(l)
    } else {
        ideals_by_kernels(l)
    }
}

/// `Θ_I = {(x, y) : t1(x, y) ∈ I}`, checked to be a congruence with kernel `I`.
pub fn theta_of_ideal(l: &FiniteLattice, ideal: &IdealSet) -> Result<Congruence, IdealError> {
    require_v(l)?;
    let n = l.size();
    let tables = IdealTables::new(l);
    let members = ideal.mask(n);
    if !tables.is_closed(l, &members) {
        return Err(IdealError::NotAnIdeal(ideal.clone()));
    }
    let related = |x: Elem, y: Elem| members[tables.t1(x, y)];
    let violation = |msg: &str| {
        Err(IdealError::InternalViolation(format!(
            "Θ_{}: {msg}",
            ideal.describe(l)
        )))
    };

    let mut blocks: Vec<Vec<Elem>> = Vec::new();
    for x in 0..n {
        match blocks.iter_mut().find(|b| related(b[0], x)) {
            Some(b) => b.push(x),
            None => blocks.push(vec![x]),
        }
    }
    let theta = match Congruence::from_blocks(n, &blocks) {
        Ok(t) => t,
        Err(e) => return violation(&e.to_string()),
    };
    if (0..n).any(|x| (0..n).any(|y| theta.related(x, y) != related(x, y))) {
        return violation("relation is not an equivalence");
    }
    if !is_congruence(l, &theta) {
        return violation("relation is not compatible with the operations");
    }
    if theta.class_of(l.top()) != ideal.elems() {
        return violation("kernel differs from the ideal");
    }
    Ok(theta)
}

/// Result of comparing ideals with congruence kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coincidence {
    pub ideals: Vec<IdealSet>,
    pub kernels: Vec<IdealSet>,
    /// Ideals that are not kernels.
    pub ideals_only: Vec<IdealSet>,
    /// Kernels that are not ideals.
    pub kernels_only: Vec<IdealSet>,
    /// Two distinct congruences with the same kernel.
    pub shared_kernel: Option<(Congruence, Congruence)>,
}

impl Coincidence {
    pub fn holds(&self) -> bool {
        self.ideals_only.is_empty() && self.kernels_only.is_empty() && self.shared_kernel.is_none()
    }
}

/// Compares ideals from subset enumeration with the kernels of `Con L`, and
/// checks that no two congruences share a kernel.
pub fn verify_kernel_coincidence(l: &FiniteLattice) -> Result<Coincidence, IdealError> {
    let ideals = all_ideals(l)?;
    let con = all_congruences(l);
    let mut by_kernel: Vec<(IdealSet, &Congruence)> = con
        .iter()
        .map(|c| (IdealSet(c.class_of(l.top())), c))
        .collect();
    by_kernel.sort_by(|a, b| a.0.cmp(&b.0));
    let shared_kernel = by_kernel
        .windows(2)
        .find(|w| w[0].0 == w[1].0)
        .map(|w| (w[0].1.clone(), w[1].1.clone()));
    let kernels = sort_ideals(
        by_kernel
            .iter()
            .map(|(k, _)| k.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    );
    let ideals_only = ideals
        .iter()
        .filter(|i| !kernels.contains(i))
        .cloned()
        .collect();
    let kernels_only = kernels
        .iter()
        .filter(|k| !ideals.contains(k))
        .cloned()
        .collect();
    Ok(Coincidence {
        ideals,
        kernels,
        ideals_only,
        kernels_only,
        shared_kernel,
    })
}

/// The identities (i)–(viii) satisfied by the binary `t1` and ternary `t`.
pub const IDEAL_TERM_IDENTITIES: &str = "\
id_i: x v (x ^ y)' = 1
id_ii: y v (x ^ y)' = 1
id_iii: x = (x v y) ^ (x v (x v y)')
id_iv: y = (x v y) ^ (y v (x v y)')
id_v: (x v y) ^ t1(x, y) = x ^ y
id_vi: t1(x, x) = 1
id_vii: t(x, y, t1(x, y)) = x
id_viii: t(x, y, 1) = y
";

pub fn ideal_term_identities() -> Vec<(String, Identity)> {
    parse_statements(IDEAL_TERM_IDENTITIES)
        .expect("ideal-term identities parse")
        .into_iter()
        .map(|(_, s)| match s.body {
            StatementBody::Identity(id) => (s.label.expect("labelled"), id),
            StatementBody::Quasi(_) => unreachable!("all are identities"),
        })
        .collect()
}

pub fn verify_lemma_lem1(l: &FiniteLattice) -> Result<Vec<(String, Outcome)>, IdealError> {
    require_v(l)?;
    Ok(ideal_term_identities()
        .into_iter()
        .map(|(name, id)| {
            let out = check_identity(l, &id);
            (name, out)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Fig2Variant};

    fn set(l: &FiniteLattice, labels: &[&str]) -> IdealSet {
        IdealSet::from_elems(labels.iter().map(|s| l.index_of(s).unwrap()))
    }

    /// Direct evaluation of the basis terms over all x- and y-tuples.
    fn is_ideal_oracle(l: &FiniteLattice, s: &IdealSet) -> bool {
        if !s.contains(l.top()) {
            return false;
        }
        ideal_basis().iter().all(|b| {
            let vars: Vec<String> = b.x_vars.iter().chain(&b.y_vars).cloned().collect();
            let prog = Compiled::new(&[&b.term], &vars);
            let (nx, ny) = (b.x_vars.len(), b.y_vars.len());
            let n = l.size();
            let k = s.len();
            (0..n.pow(nx as u32)).all(|xc| {
                (0..k.pow(ny as u32)).all(|yc| {
                    let mut vals = Vec::with_capacity(nx + ny);
                    let mut c = xc;
                    for _ in 0..nx {
                        vals.push(c % n);
                        c /= n;
                    }
                    let mut c = yc;
                    for _ in 0..ny {
                        vals.push(s.elems()[c % k]);
                        c /= k;
                    }
                    s.contains(prog.eval(l, &vals))
                })
            })
        })
    }

    #[test]
    fn fast_closure_test_matches_oracle() {
        for l in [
            catalog::m3_paper(),
            catalog::boolean4(),
            catalog::make_m_n(4, &[1, 0, 3, 2]).unwrap(),
        ] {
            let n = l.size();
            for bits in 0u32..(1 << n) {
                let s = IdealSet::from_elems((0..n).filter(|&i| bits >> i & 1 == 1));
                assert_eq!(
                    is_ideal(&l, &s).unwrap(),
                    is_ideal_oracle(&l, &s),
                    "{:?}",
                    s
                );
            }
        }
    }

    #[test]
    fn fig2_sets() {
        let l = catalog::fig2(Fig2Variant::First);
        assert!(is_ideal(&l, &set(&l, &["d", "f", "g", "h", "1"])).unwrap());
        assert!(!is_ideal(&l, &set(&l, &["e", "1"])).unwrap());
        let l2 = catalog::fig2(Fig2Variant::Second);
        assert!(is_ideal(&l2, &set(&l2, &["e", "1"])).unwrap());
    }

    #[test]
    fn closures() {
        let l = catalog::fig2(Fig2Variant::First);
        assert_eq!(
            ideal_closure(&l, &set(&l, &["d"])).unwrap(),
            set(&l, &["d", "f", "g", "h", "1"])
        );
        assert_eq!(
            ideal_closure(&l, &IdealSet::from_elems([])).unwrap(),
            set(&l, &["1"])
        );
        let l2 = catalog::fig2(Fig2Variant::Second);
        assert_eq!(
            ideal_closure(&l2, &set(&l2, &["e"])).unwrap(),
            set(&l2, &["e", "1"])
        );
    }

    #[test]
    fn ideal_lists() {
        let l = catalog::fig2(Fig2Variant::First);
        assert_eq!(
            all_ideals(&l).unwrap(),
            vec![
                set(&l, &["1"]),
                set(&l, &["d", "f", "g", "h", "1"]),
                IdealSet::from_elems(l.elements())
            ]
        );
        let l2 = catalog::fig2(Fig2Variant::Second);
        assert_eq!(
            all_ideals(&l2).unwrap(),
            vec![
                set(&l2, &["1"]),
                set(&l2, &["e", "1"]),
                set(&l2, &["d", "f", "g", "h", "1"]),
                IdealSet::from_elems(l2.elements())
            ]
        );
        let m3 = catalog::m3_paper();
        assert_eq!(all_ideals(&m3).unwrap().len(), 2);
    }

    #[test]
    fn thetas() {
        let l = catalog::fig2(Fig2Variant::First);
        let i = set(&l, &["d", "f", "g", "h", "1"]);
        let theta = theta_of_ideal(&l, &i).unwrap();
        assert_eq!(theta.describe(&l), "{0,a,b,c,e},{d,f,g,h,1}");

        let l2 = catalog::fig2(Fig2Variant::Second);
        let theta = theta_of_ideal(&l2, &set(&l2, &["e", "1"])).unwrap();
        assert_eq!(theta.describe(&l2), "{0,d},{a,f},{b,g},{c,h},{e,1}");

        let top_only = theta_of_ideal(&l2, &set(&l2, &["1"])).unwrap();
        assert!(top_only.is_discrete());

        assert_eq!(
            theta_of_ideal(&l, &set(&l, &["e", "1"])),
            Err(IdealError::NotAnIdeal(set(&l, &["e", "1"])))
        );
    }

    #[test]
    fn not_in_v() {
        let n5 = catalog::n5();
        assert_eq!(all_ideals(&n5), Err(IdealError::NotInV));
        assert_eq!(verify_lemma_lem1(&n5), Err(IdealError::NotInV));
    }

    #[test]
    fn ideal_term_identities_on_fixtures() {
        for l in [catalog::m3_paper(), catalog::fig2(Fig2Variant::First)] {
            let v = verify_lemma_lem1(&l).unwrap();
            assert_eq!(v.len(), 8);
            assert!(v.iter().all(|(_, o)| o.holds()), "{v:?}");
        }
    }

    #[test]
    fn coincidence_fixtures() {
        let c = verify_kernel_coincidence(&catalog::fig2(Fig2Variant::First)).unwrap();
        assert!(c.holds());
        assert_eq!(c.kernels.len(), 3);
        let c = verify_kernel_coincidence(&catalog::fig2(Fig2Variant::Second)).unwrap();
        assert!(c.holds());
        assert_eq!(c.ideals.len(), 4);
    }

    #[test]
    fn kernel_route_agrees_with_subsets() {
        for l in catalog::variety_corpus(6).unwrap() {
            assert_eq!(
                ideals_by_subsets(&l).unwrap(),
                ideals_by_kernels(&l).unwrap()
            );
        }
    }

    #[test]
    fn closure_is_intersection_of_ideals_above() {
        let l = catalog::fig2(Fig2Variant::Second);
        let ideals = all_ideals(&l).unwrap();
        for x in l.elements() {
            for y in l.elements() {
                let s = IdealSet::from_elems([x, y]);
                let meet = ideals
                    .iter()
                    .filter(|i| s.elems().iter().all(|&e| i.contains(e)))
                    .fold(IdealSet::from_elems(l.elements()), |acc, i| {
                        IdealSet::from_elems(acc.elems().iter().copied().filter(|&e| i.contains(e)))
                    });
                assert_eq!(ideal_closure(&l, &s).unwrap(), meet);
            }
        }
    }
}
