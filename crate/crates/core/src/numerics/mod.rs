//! Dense matrix/vector arithmetic, a deterministic seeded PRNG, and a direct
//! linear solver. Everything is double precision: the inhibition-matrix
//! recursion accumulates rounding, and single precision visibly breaks its
//! symmetry.

pub mod mat;
pub mod prng;
pub mod solve;

pub use mat::Mat;
pub use prng::Prng;
pub use solve::solve_linear;
