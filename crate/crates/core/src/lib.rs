//! q-digamma machinery for a nonlinear moment iteration and its limiting density.
//!
//! * [`qkernel`]: q-Pochhammer, `Gamma_q`, `psi_q`, `gamma_q`, `c_q`, q-harmonic numbers.
//! * [`transforms`]: the Bernstein transform `f_q` of the Jackson measure, the
//!   Mellin transform of `nu_q`, the step kernel `h_q` and the Fourier symbol.
//! * [`iteration`]: the operator `T` on `[0,1]^N`, its fixed point and orbits.
//! * [`density`]: exact piecewise evaluation of the density `tau_q`.
//! * [`verify`]: independent quadrature, Fourier-inversion and brute-force oracles.
//! * [`cli`]: the command surface behind the `qharmonic` binary.

pub mod error;
pub mod qkernel;
pub mod transforms;
pub mod iteration;
pub mod density;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
pub use qkernel::{Certified, QParam, TruncationBudget};
