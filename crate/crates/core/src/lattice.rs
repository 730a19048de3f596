//! Finite bounded lattices carrying a total unary operation.
//!
//! Elements are contiguous indices `0..n`; labels exist only for I/O. The
//! unary map is whatever the caller supplies. Whether it is actually a
//! complementation is a property to be checked, not an invariant of the type.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a carrier element.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("empty carrier")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cover `{0}` < `{0}` is reflexive")]
    ReflexiveCover(String),
    #[error("covers contain a cycle through `{0}`")]
    Cyclic(String),
    #[error("no least or no greatest element")]
    NoBounds,
    #[error("`{x}` and `{y}` have no unique {kind}; candidates: {candidates:?}")]
    NotALattice {
        x: String,
        y: String,
        kind: BoundKind,
        candidates: Vec<String>,
    },
    #[error("unary map is not defined on `{0}`")]
    PartialUnary(String),
    #[error("unary map has {got} entries for a carrier of {expected}")]
    UnaryLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Join,
    Meet,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Join => f.write_str("least upper bound"),
            BoundKind::Meet => f.write_str("greatest lower bound"),
        }
    }
}

/// A finite bounded lattice `(L, ∨, ∧, ′, 0, 1)` stored as dense tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    unary: Vec<Elem>,
}

impl FiniteLattice {
    /// Builds a lattice from a Hasse diagram given as label pairs `(lower, upper)`.
    ///
    /// The pairs need not be reduced: the order is the reflexive-transitive
    /// closure of whatever is given.
    pub fn build_from_covers<S: AsRef<str>>(
        labels: &[S],
        covers: &[(S, S)],
        unary: &[(S, S)],
    ) -> Result<Self, BuildError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = label_index(&labels)?;
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| BuildError::UnknownLabel(s.to_owned()))
        };

        let mut pairs = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            if lo == hi {
                return Err(BuildError::ReflexiveCover(labels[lo].clone()));
            }
            pairs.push((lo, hi));
        }

        let mut map = vec![None; labels.len()];
        for (from, to) in unary {
            map[lookup(from.as_ref())?] = Some(lookup(to.as_ref())?);
        }
        let unary = map
            .iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| BuildError::PartialUnary(labels[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(lo, hi) in &pairs {
            leq[lo * n + hi] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(labels, leq, unary)
    }

    /// Builds a lattice from a full order relation given as a row-major `n × n`
    /// matrix. The relation must already be reflexive and transitive.
    pub fn from_order(
        labels: Vec<String>,
        leq: Vec<bool>,
        unary: Vec<Elem>,
    ) -> Result<Self, BuildError> {
        let n = labels.len();
        if n == 0 {
            return Err(BuildError::Empty);
        }
        label_index(&labels)?;
        assert_eq!(leq.len(), n * n, "order matrix has wrong size");
        if unary.len() != n {
            return Err(BuildError::UnaryLength {
                expected: n,
                got: unary.len(),
            });
        }
        if let Some(&bad) = unary.iter().find(|&&u| u >= n) {
            return Err(BuildError::UnknownLabel(bad.to_string()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(BuildError::Cyclic(labels[i].clone()));
                }
            }
        }

        let le = |a: Elem, b: Elem| leq[a * n + b];
        let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x)));
        let top = (0..n).find(|&t| (0..n).all(|x| le(x, t)));
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(BuildError::NoBounds);
        };

        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let uppers: Vec<Elem> = (0..n).filter(|&u| le(x, u) && le(y, u)).collect();
                let j = extremum(&uppers, le).ok_or_else(|| {
                    let minimal = uppers
                        .iter()
                        .filter(|&&u| !uppers.iter().any(|&v| v != u && le(v, u)))
                        .map(|&u| labels[u].clone())
                        .collect();
                    BuildError::NotALattice {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        kind: BoundKind::Join,
                        candidates: minimal,
                    }
                })?;
                let lowers: Vec<Elem> = (0..n).filter(|&l| le(l, x) && le(l, y)).collect();
                let m = extremum(&lowers, |a, b| le(b, a)).ok_or_else(|| {
                    let maximal = lowers
                        .iter()
                        .filter(|&&l| !lowers.iter().any(|&v| v != l && le(l, v)))
                        .map(|&l| labels[l].clone())
                        .collect();
                    BuildError::NotALattice {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        kind: BoundKind::Meet,
                        candidates: maximal,
                    }
                })?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }

        Ok(FiniteLattice {
            labels,
            leq,
            join,
            meet,
            bottom,
            top,
            unary,
        })
    }

    /// Same lattice, different unary operation.
    pub fn with_unary(&self, unary: Vec<Elem>) -> Result<Self, BuildError> {
        let n = self.size();
        if unary.len() != n {
            return Err(BuildError::UnaryLength {
                expected: n,
                got: unary.len(),
            });
        }
        if let Some(&bad) = unary.iter().find(|&&u| u >= n) {
            return Err(BuildError::UnknownLabel(bad.to_string()));
        }
        Ok(FiniteLattice {
            unary,
            ..self.clone()
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x * self.size() + y]
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.size() + y]
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.size() + y]
    }

    #[inline]
    pub fn unary(&self, x: Elem) -> Elem {
        self.unary[x]
    }

    pub fn unary_map(&self) -> &[Elem] {
        &self.unary
    }

    /// The covering pairs `(x, y)` with `x ≺ y`, in lexicographic order.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.size();
        let lt = |a: Elem, b: Elem| a != b && self.leq(a, b);
        (0..n)
            .cartesian_product(0..n)
            .filter(|&(x, y)| lt(x, y) && !(0..n).any(|z| lt(x, z) && lt(z, y)))
            .collect()
    }

    /// True iff `x ∧ x′ = 0` and `x ∨ x′ = 1` for every `x`.
    pub fn is_complemented(&self) -> bool {
        self.elements()
            .all(|x| self.is_complement_of(x, self.unary(x)))
    }

    pub fn is_complement_of(&self, x: Elem, c: Elem) -> bool {
        self.meet(x, c) == self.bottom && self.join(x, c) == self.top
    }

    /// Every total map `c` with `x ∧ c(x) = 0` and `x ∨ c(x) = 1`.
    ///
    /// Empty when some element has no complement at all.
    pub fn all_complementations(&self) -> Vec<Vec<Elem>> {
        let choices: Vec<Vec<Elem>> = self
            .elements()
            .map(|x| {
                self.elements()
                    .filter(|&c| self.is_complement_of(x, c))
                    .collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        choices.into_iter().multi_cartesian_product().collect()
    }

    /// Componentwise product. Element `(i, j)` gets index `i * n2 + j` and the
    /// label `(li,lj)`.
    pub fn direct_product(&self, other: &FiniteLattice) -> FiniteLattice {
        let (n1, n2) = (self.size(), other.size());
        let n = n1 * n2;
        let pair = |k: Elem| (k / n2, k % n2);
        let mk = |i: Elem, j: Elem| i * n2 + j;
        let labels = (0..n)
            .map(|k| {
                let (i, j) = pair(k);
                format!("({},{})", self.labels[i], other.labels[j])
            })
            .collect();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            let (i1, j1) = pair(a);
            for b in 0..n {
                let (i2, j2) = pair(b);
                leq[a * n + b] = self.leq(i1, i2) && other.leq(j1, j2);
                join[a * n + b] = mk(self.join(i1, i2), other.join(j1, j2));
                meet[a * n + b] = mk(self.meet(i1, i2), other.meet(j1, j2));
            }
        }
        let unary = (0..n)
            .map(|k| {
                let (i, j) = pair(k);
                mk(self.unary(i), other.unary(j))
            })
            .collect();
        FiniteLattice {
            labels,
            leq,
            join,
            meet,
            bottom: mk(self.bottom, other.bottom),
            top: mk(self.top, other.top),
            unary,
        }
    }

    /// Returns the lattice relabelled by `perm`: old element `x` becomes
    /// `perm[x]`, keeping its label.
    pub fn permuted(&self, perm: &[Elem]) -> FiniteLattice {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut unary = vec![0; n];
        for x in 0..n {
            labels[perm[x]] = self.labels[x].clone();
            unary[perm[x]] = perm[self.unary(x)];
            for y in 0..n {
                let (px, py) = (perm[x], perm[y]);
                leq[px * n + py] = self.leq(x, y);
                join[px * n + py] = perm[self.join(x, y)];
                meet[px * n + py] = perm[self.meet(x, y)];
            }
        }
        FiniteLattice {
            labels,
            leq,
            join,
            meet,
            bottom: perm[self.bottom],
            top: perm[self.top],
            unary,
        }
    }

    /// Parses the lattice interchange format.
    pub fn from_json(text: &str) -> Result<Self, LatticeFileError> {
        let file: LatticeFile = serde_json::from_str(text)?;
        Ok(file.build()?)
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            labels: self.labels.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(x, y)| [self.labels[x].clone(), self.labels[y].clone()])
                .collect(),
            unary: self
                .elements()
                .map(|x| (self.labels[x].clone(), self.labels[self.unary(x)].clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("lattice file serializes")
    }

    /// Renders a set of elements as `{a,b,c}` in index order.
    pub fn format_set(&self, elems: impl IntoIterator<Item = Elem>) -> String {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        v.sort_unstable();
        format!("{{{}}}", v.iter().map(|&x| self.label(x)).join(","))
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<&str, Elem>, BuildError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(BuildError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// The element of `set` below every other one under `below`, if there is one.
fn extremum(set: &[Elem], below: impl Fn(Elem, Elem) -> bool) -> Option<Elem> {
    set.iter()
        .copied()
        .find(|&c| set.iter().all(|&o| below(c, o)))
}

/// On-disk form: `{ "labels": [...], "covers": [["0","a"], ...], "unary": {"0":"1", ...} }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub labels: Vec<String>,
    pub covers: Vec<[String; 2]>,
    pub unary: IndexMap<String, String>,
}

impl LatticeFile {
    pub fn build(&self) -> Result<FiniteLattice, BuildError> {
        let covers: Vec<(&str, &str)> = self
            .covers
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let unary: Vec<(&str, &str)> = self
            .unary
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let labels: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        FiniteLattice::build_from_covers(&labels, &covers, &unary)
    }
}

#[derive(Debug, Error)]
pub enum LatticeFileError {
    #[error("malformed lattice file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Boolean properties of a lattice and its unary map, decided exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassifierFlags {
    pub is_lattice: bool,
    pub is_complemented: bool,
    pub is_modular: bool,
    pub is_distributive: bool,
    pub unary_is_involution: bool,
    pub unary_is_antitone: bool,
    pub is_ortholattice: bool,
    pub is_orthomodular: bool,
}

/// Flags plus the first witness (in index order) for each failed property.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Classification {
    pub flags: ClassifierFlags,
    /// `x` whose image under `′` has no complement relation with `x`.
    pub not_complemented: Option<Elem>,
    /// `(x, y, z)` with `x ≤ z` and `x ∨ (y ∧ z) ≠ (x ∨ y) ∧ z`.
    pub not_modular: Option<(Elem, Elem, Elem)>,
    /// `(x, y, z)` with `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    pub not_distributive: Option<(Elem, Elem, Elem)>,
    /// `x` with `x′′ ≠ x`.
    pub not_involution: Option<Elem>,
    /// `(x, y)` with `x ≤ y` but `y′ ≰ x′`.
    pub not_antitone: Option<(Elem, Elem)>,
    /// `(x, y)` with `x ≤ y` but `y ≠ x ∨ (y ∧ x′)`.
    pub not_orthomodular: Option<(Elem, Elem)>,
}

/// Decides every classifier flag by direct checks over pairs and triples.
pub fn classify(l: &FiniteLattice) -> Classification {
    let el = || l.elements();
    let pairs = || el().cartesian_product(el());
    let triples = || {
        el().cartesian_product(el())
            .cartesian_product(el())
            .map(|((x, y), z)| (x, y, z))
    };

    let lattice_laws = pairs().all(|(x, y)| {
        l.join(x, y) == l.join(y, x)
            && l.meet(x, y) == l.meet(y, x)
            && l.meet(x, l.join(x, y)) == x
            && l.join(x, l.meet(x, y)) == x
            && (l.leq(x, y) == (l.join(x, y) == y))
            && (l.leq(x, y) == (l.meet(x, y) == x))
    }) && el().all(|x| l.join(x, x) == x && l.meet(x, x) == x)
        && triples().all(|(x, y, z)| {
            l.join(l.join(x, y), z) == l.join(x, l.join(y, z))
                && l.meet(l.meet(x, y), z) == l.meet(x, l.meet(y, z))
        });

    let not_complemented = el().find(|&x| !l.is_complement_of(x, l.unary(x)));
    let not_modular = triples()
        .find(|&(x, y, z)| l.leq(x, z) && l.join(x, l.meet(y, z)) != l.meet(l.join(x, y), z));
    let not_distributive =
        triples().find(|&(x, y, z)| l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)));
    let u = |x| l.unary(x);
    let not_involution = el().find(|&x| u(u(x)) != x);
    let not_antitone = pairs().find(|&(x, y)| l.leq(x, y) && !l.leq(u(y), u(x)));
    let not_orthomodular = pairs().find(|&(x, y)| l.leq(x, y) && y != l.join(x, l.meet(y, u(x))));

    let is_complemented = not_complemented.is_none();
    let is_ortholattice = is_complemented && not_involution.is_none() && not_antitone.is_none();
    let flags = ClassifierFlags {
        is_lattice: lattice_laws,
        is_complemented,
        is_modular: not_modular.is_none(),
        is_distributive: not_distributive.is_none(),
        unary_is_involution: not_involution.is_none(),
        unary_is_antitone: not_antitone.is_none(),
        is_ortholattice,
        is_orthomodular: is_ortholattice && not_orthomodular.is_none(),
    };
    Classification {
        flags,
        not_complemented,
        not_modular,
        not_distributive,
        not_involution,
        not_antitone,
        not_orthomodular,
    }
}
