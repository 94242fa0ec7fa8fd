//! Baker-type bivariate distributions built from order statistics and copulas.
//!
//! The crate covers the classical Baker mixtures `H±`, the weight-matrix
//! generalisation `H_r`, the Type I mixtures `K±` (order statistics of a
//! dependent sample), the Type II mixtures `G±` (a kernel copula coupling the
//! order-statistic marginals) and the extreme order-statistic copulas that can
//! serve as Type II kernels.
//!
//! Pearson correlations are computed from the Hoeffding covariance identity on
//! a tensor Gauss-Legendre rule, and can be cross-checked by Monte Carlo.
//!
//! ```
//! use bakerlab::constructions::{type2, Pairing};
//! use bakerlab::copulas::Copula;
//! use bakerlab::correlation::{pearson_rho, QuadratureSettings};
//! use bakerlab::marginals::Marginal;
//!
//! let dist = type2(2, Copula::fgm(1.0)?, Pairing::Plus, Marginal::Uniform01, Marginal::Uniform01)?;
//! let rho = pearson_rho(&dist, &QuadratureSettings::default())?;
//! assert!((rho.rho - 0.5467).abs() < 5e-4);
//! # Ok::<(), bakerlab::Error>(())
//! ```

pub mod cli;
pub mod constructions;
pub mod copulas;
pub mod correlation;
mod error;
pub mod marginals;
pub mod orderstat;
pub mod quadrature;
pub mod reference;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
