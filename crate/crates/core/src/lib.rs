//! Twisted Kloosterman sums over finite fields, three ways:
//!
//! * [`classical`] — brute-force evaluation of Kloosterman sums, Gauss sums,
//!   Salié sums, the multiplicative Fourier transform and its convolution
//!   theorem. Every sum is a direct O(q) enumeration; this module is the
//!   ground truth everything else is checked against.
//! * [`qsim`] — an exact-dimension state-vector simulator for the
//!   character-sum pipelines: Gauss-sum phase kickback, the Gauss-sum vector
//!   state, and Kloosterman-vector state preparation via a rotation on the
//!   Fourier side.
//! * [`estimation`] — a single-sum estimator that reads the amplitude
//!   κ(a) = Kl(a,χ)/√N_χ off the simulated state with amplitude estimation,
//!   recovering the complex value from three probability readings at the
//!   cube roots of unity, with a (δ,ε) accuracy contract.
//!
//! [`field`] and [`characters`] supply the underlying GF(p^r) arithmetic and
//! the additive/multiplicative characters; [`stats`] checks the computed sums
//! against the Sato–Tate equidistribution laws.

pub mod characters;
pub mod classical;
pub mod error;
pub mod estimation;
pub mod field;
pub mod qsim;
pub mod stats;

pub use characters::{AddChar, MultChar};
pub use error::{Error, Result};
pub use field::{FieldElement, FiniteField};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Table of the n-th roots of unity: entry k is exp(2πik/n).
pub fn unit_roots(n: usize) -> Vec<C64> {
    let step = std::f64::consts::TAU / n as f64;
    (0..n)
        .map(|k| C64::from_polar(1.0, step * k as f64))
        .collect()
}
