//! Exact-arithmetic engine for invariant Hermitian structures on adjoint
//! orbits of compact semisimple groups: root-system combinatorics, Chevalley
//! and Weyl structure constants, invariant-form calculus at the identity
//! coset, and exhaustive rank-based verification that the vanishing of
//! dd^J(omega) forces the Kahler condition, including its generalized-Kahler
//! consequence (bi-Kahler with closed b-field).

pub mod calculus;
pub mod driver;
pub mod chevalley;
pub mod exact;
pub mod linalg;
pub mod orbit;
pub mod rootsys;
pub mod verify;

pub use exact::{Q, SignSqrt};
pub use rootsys::{build_root_system, Root, RootSystem, RootSystemSpec};
