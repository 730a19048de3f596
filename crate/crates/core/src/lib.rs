//! Finite bounded lattices with a unary operation: Sasaki adjointness,
//! variety membership, congruence lattices and ideals described by terms.
//!
//! ```
//! use allab::{catalog, sasaki};
//!
//! let m3 = catalog::m3_paper();
//! assert!(sasaki::check_adjoint(&m3).holds());
//! assert!(sasaki::is_member_of_v(&m3));
//! ```

pub mod catalog;
pub mod cli;
pub mod congruence;
pub mod ideal;
pub mod lattice;
pub mod report;
pub mod sasaki;
pub mod term;

pub use congruence::Congruence;
pub use lattice::{BuildError, Elem, FiniteLattice, LatticeFile};
pub use term::{parse_statement, parse_term, Assignment, Outcome, Statement, Term};
