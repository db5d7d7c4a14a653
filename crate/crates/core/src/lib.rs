//! Exact construction of the canonical intertwining kernels for the
//! Heisenberg representation over `F_p` (`p` odd), the canonical model of
//! the Weil representation built from them, and the identities they satisfy.
//!
//! All values live in `Q(ζ_p)` and every check is an exact equality.
//! See the guide in `book/` for a walk through the constructions.

pub mod coherence;
pub mod cyclotomic;
pub mod error;
pub mod fp;
pub mod heisenberg;
pub mod kernels;
pub mod operator;
pub mod report;
pub mod suite;
pub mod symplectic;
pub mod weil;

pub use cyclotomic::{conjugate, cyc_arith, gauss_sum, psi, sigma, ArithOp, CycNum, Rat};
pub use error::{Error, Result};
pub use fp::{FpMatrix, FpScalar, FpVector};
pub use heisenberg::{EquivariantFunction, HElement, Transversal};
pub use kernels::{KernelEntry, KernelSystem};
pub use operator::{CycMatrix, WeilOperator};
pub use symplectic::{Lagrangian, OrientedLagrangian, SpElement, SymplecticSpace};
