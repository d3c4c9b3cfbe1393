//! Finite-volume IMEX solver for a five-component tumour invasion model:
//! two cancer cell phenotypes (proliferating c1 and migrating c2), the
//! extracellular matrix density v, bound integrins y and a haptotactic
//! sensitivity kappa driven by the integrin state at a delayed time.
//!
//! The migrating component advects up the matrix gradient (central-upwind
//! fluxes with an MC limiter) and diffuses with a solution-dependent
//! coefficient; stiff integrin kinetics and diffusion advance implicitly
//! inside an additive Runge-Kutta scheme while transport and the remaining
//! reactions stay explicit.

pub mod delay;
pub mod error;
pub mod grid;
pub mod harness;
pub mod imex;
pub mod krylov;
pub mod model;
pub mod spatial;
pub mod tableau;
pub mod timestep;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use model::{ModelParams, StateField};
