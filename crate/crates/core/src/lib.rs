//! Randomized approximation of the identity between finite mixed-norm
//! sequence spaces `L_p^{N1}(L_u^{N2}) -> L_q^{N1}(L_v^{N2})` from point
//! evaluations.
//!
//! - [`mixed_norm`]: exponents, matrices and normalized mixed norms.
//! - [`information`]: counted query access and reproducible random streams.
//! - [`algorithms`]: adaptive row-selection algorithms and non-adaptive competitors.
//! - [`hard_instances`]: input distributions that are hard for budget-`n`
//!   algorithms and exact small-instance lower-bound values.
//! - [`harness`]: Monte Carlo error studies, rate fits, the adaptivity-gap
//!   experiment and report output.

pub mod algorithms;
pub mod error;
pub mod hard_instances;
pub mod harness;
pub mod information;
pub mod mixed_norm;

pub use error::{Error, Result};
pub use information::{substream, InfoOracle, Information, RandomStream};
pub use mixed_norm::{embedding_norm, mixed_norm, Exponent, Matrix, SpacePair};
