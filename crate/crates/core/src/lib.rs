//! Online pseudoinverse learning (OLP) for random-projection networks.
//!
//! The crate implements the recursive least-squares family of updates that
//! computes the regularized pseudoinverse solution of a linear readout one
//! sample at a time, in constant memory, together with the random-projection
//! ("extreme learning machine") hidden layer it is usually paired with.
//!
//! The pieces fit together like this:
//!
//! * [`numerics`] — dense row-major matrices, a seeded PRNG, and a pivoting
//!   direct solver used by the verification oracle.
//! * [`olp`] — the learner itself: state `(W, θ)`, the gain computation, and
//!   the static and adaptive (forgetting) update rules.
//! * [`elm`] — the frozen random layer, sigmoid activations, forward pass,
//!   and the closed-form batch solver that serves as the ground-truth oracle
//!   for the recursion.
//! * [`datasets`] — MNIST IDX ingestion with the 24×24 reduction, and the
//!   Mackey-Glass delay-differential generator with tap/horizon embedding.
//! * [`cli`] — experiment harness: digit classification curves, chaotic
//!   time-series prediction, oracle verification, and memory benchmarks.

pub mod cli;
pub mod datasets;
pub mod elm;
pub mod error;
pub mod numerics;
pub mod olp;

pub use error::{Error, Result};
pub use numerics::mat::Mat;
pub use numerics::prng::Prng;
pub use olp::{Mode, OlpState};
