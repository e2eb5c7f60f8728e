//! Decoherence-free subspace (DFS) design for qubit sensor networks that
//! estimate plane-wave signals under correlated wave noise.
//!
//! The crate is organised bottom-up:
//!
//! - [`wavefield`]: waves, sensors, sign strings and field matrices.
//! - [`control`]: per-sensor control sequences, Fourier transforms and the
//!   coupling strengths `g_z` they induce.
//! - [`dfsbuild`]: orthogonalization-based DFS construction, sensor placement,
//!   affine DFS enumeration and approximate DFS / SNR.
//! - [`metrology`]: quantum and classical Fisher information for states
//!   inside (or twirled onto) DFS blocks.
//! - [`bounds`]: separable-strategy bounds and their randomized oracles.
//!
//! Conventions used throughout: a local signal `cos(k·x − ωt + φ)` is stored
//! as the phasor `e^{i(k·x+φ)}` against the carrier `e^{−iωt}`, and the basis
//! state `|0⟩` carries the sign `z = +1`.

pub mod bounds;
pub mod control;
pub mod dfsbuild;
mod error;
pub mod metrology;
pub mod optim;
pub mod quadrature;
pub mod wavefield;

pub use error::{Error, Result};
pub use num_complex::Complex64;
