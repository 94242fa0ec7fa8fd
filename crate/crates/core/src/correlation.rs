//! Pearson correlation of a [`BivariateCdf`] through the Hoeffding covariance
//! identity
//!
//! ```text
//! Cov(X, Y) = ∬ [H(x, y) - F_X(x) F_Y(y)] dx dy
//!           = ∬_{[0,1]^2} [H(Q_X(u), Q_Y(v)) - uv] Q_X'(u) Q_Y'(v) du dv.
//! ```
//!
//! The unit square is split along its diagonal and each triangle is mapped to
//! the square (`v = u t` below the diagonal, `u = v t` above), then integrated
//! with a tensor Gauss-Legendre rule. Many constructions have a kink on `u = v`
//! (anything built on `min(u, v)`), and the split keeps it on the boundary
//! where it costs no accuracy. Variances come from the marginals.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{baker, type1, type2, BivariateCdf, Pairing};
use crate::copulas::Copula;
use crate::error::{domain, Error, Result};
use crate::marginals::Marginal;
use crate::quadrature::GaussLegendre;
use crate::specfun::harmonic;

/// Tensor-rule refinement policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSettings {
    pub nodes_per_axis: usize,
    /// Maximum number of node doublings after the first estimate.
    pub refinement_limit: usize,
    pub tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            nodes_per_axis: 128,
            refinement_limit: 3,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureSettings {
    pub fn new(nodes_per_axis: usize, refinement_limit: usize, tolerance: f64) -> Result<Self> {
        let s = Self {
            nodes_per_axis,
            refinement_limit,
            tolerance,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 16 || !self.nodes_per_axis.is_power_of_two() {
            return domain(format!(
                "nodes_per_axis must be a power of two >= 16, got {}",
                self.nodes_per_axis
            ));
        }
        if self.refinement_limit == 0 {
            return domain("refinement_limit must be at least 1");
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return domain(format!("tolerance must be positive, got {}", self.tolerance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub rho: f64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
    pub settings: QuadratureSettings,
}

/// Covariance integral on a `nodes x nodes` rule per triangle.
fn covariance_estimate(dist: &BivariateCdf, rule: &GaussLegendre) -> f64 {
    let (mx, my) = dist.marginals();
    let integrand =
        |u: f64, v: f64| (dist.cdf_at_levels(u, v) - u * v) * mx.quantile_derivative(u) * my.quantile_derivative(v);
    rule.integrate_2d(|a, t| a * (integrand(a, a * t) + integrand(a * t, a)))
}

/// Pearson correlation by doubling the rule until two successive estimates
/// agree within `settings.tolerance`.
pub fn pearson_rho(dist: &BivariateCdf, settings: &QuadratureSettings) -> Result<CorrelationResult> {
    settings.validate()?;
    let (mx, my) = dist.marginals();
    let (_, var_x) = mx.moments()?;
    let (_, var_y) = my.moments()?;
    if !(var_x > 0.0 && var_y > 0.0 && var_x.is_finite() && var_y.is_finite()) {
        return domain("marginal variances must be finite and positive");
    }
    let scale = (var_x * var_y).sqrt();

    let mut nodes = settings.nodes_per_axis;
    let mut previous = covariance_estimate(dist, &GaussLegendre::new(nodes)) / scale;
    let mut last = previous;
    for _ in 0..settings.refinement_limit {
        nodes *= 2;
        let estimate = covariance_estimate(dist, &GaussLegendre::new(nodes)) / scale;
        previous = last;
        last = estimate;
        let diff = (last - previous).abs();
        if diff < settings.tolerance {
            if last.abs() > 1.0 + 1e-9 {
                return Err(Error::Invariant(format!("correlation {last} outside [-1, 1]")));
            }
            return Ok(CorrelationResult {
                rho: last,
                abs_error_estimate: diff,
                nodes_used: nodes,
                settings: *settings,
            });
        }
    }
    Err(Error::QuadratureNonConvergence { previous, last })
}

/// `1 - H_n / n`, the correlation of `H+` with two Exponential(1) marginals.
pub fn baker_exponential_rho_closed(n: usize) -> f64 {
    1.0 - harmonic(n) / n as f64
}

/// The six construction families of the correlation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gplus,
    Gminus,
    Kplus,
    Kminus,
    Hplus,
    Hminus,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Gplus,
        Family::Gminus,
        Family::Kplus,
        Family::Kminus,
        Family::Hplus,
        Family::Hminus,
    ];

    pub fn pairing(self) -> Pairing {
        match self {
            Family::Gplus | Family::Kplus | Family::Hplus => Pairing::Plus,
            Family::Gminus | Family::Kminus | Family::Hminus => Pairing::Minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Gplus => "gplus",
            Family::Gminus => "gminus",
            Family::Kplus => "kplus",
            Family::Kminus => "kminus",
            Family::Hplus => "hplus",
            Family::Hminus => "hminus",
        }
    }

    /// The FGM kernel used for this family in the tables: `FGM(alpha)` for
    /// the `+` families and `FGM(-alpha)` for the `-` families.
    pub fn table_kernel(self, alpha: f64) -> Result<Copula> {
        match self.pairing() {
            Pairing::Plus => Copula::fgm(alpha),
            Pairing::Minus => Copula::fgm(-alpha),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "gplus" => Ok(Family::Gplus),
            "gminus" => Ok(Family::Gminus),
            "kplus" => Ok(Family::Kplus),
            "kminus" => Ok(Family::Kminus),
            "hplus" => Ok(Family::Hplus),
            "hminus" => Ok(Family::Hminus),
            _ => domain(format!("unknown family '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MarginalPair {
    #[serde(rename = "unif-unif")]
    UnifUnif,
    #[serde(rename = "unif-exp")]
    UnifExp,
    #[serde(rename = "exp-exp")]
    ExpExp,
}

impl MarginalPair {
    pub fn marginals(self) -> (Marginal, Marginal) {
        match self {
            MarginalPair::UnifUnif => (Marginal::Uniform01, Marginal::Uniform01),
            MarginalPair::UnifExp => (Marginal::Uniform01, Marginal::ExponentialRate1),
            MarginalPair::ExpExp => (Marginal::ExponentialRate1, Marginal::ExponentialRate1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MarginalPair::UnifUnif => "unif-unif",
            MarginalPair::UnifExp => "unif-exp",
            MarginalPair::ExpExp => "exp-exp",
        }
    }
}

impl fmt::Display for MarginalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarginalPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "unif-unif" | "uniform-uniform" => Ok(MarginalPair::UnifUnif),
            "unif-exp" | "uniform-exponential" => Ok(MarginalPair::UnifExp),
            "exp-exp" | "exponential-exponential" => Ok(MarginalPair::ExpExp),
            _ => domain(format!("unknown marginal pair '{s}'")),
        }
    }
}

/// Builds `family` with an explicit kernel (ignored for `H±`).
pub fn build_family(family: Family, n: usize, kernel: Copula, marginals: MarginalPair) -> Result<BivariateCdf> {
    let (mx, my) = marginals.marginals();
    let pairing = family.pairing();
    match family {
        Family::Gplus | Family::Gminus => type2(n, kernel, pairing, mx, my),
        Family::Kplus | Family::Kminus => type1(n, kernel, pairing, mx, my),
        Family::Hplus | Family::Hminus => baker(n, pairing, mx, my),
    }
}

fn check_table_args(n: usize, alpha: f64) -> Result<()> {
    if !(1..=20).contains(&n) {
        return domain(format!("table rows need 1 <= n <= 20, got {n}"));
    }
    if !(-1.0..=1.0).contains(&alpha) {
        return domain(format!("alpha must lie in [-1, 1], got {alpha}"));
    }
    Ok(())
}

/// One table cell with its quadrature diagnostics.
pub fn table_cell(
    n: usize,
    family: Family,
    alpha: f64,
    marginals: MarginalPair,
    settings: &QuadratureSettings,
) -> Result<TableCell> {
    check_table_args(n, alpha)?;
    let dist = build_family(family, n, family.table_kernel(alpha)?, marginals)?;
    let r = pearson_rho(&dist, settings)?;
    Ok(TableCell {
        n,
        family,
        alpha,
        marginals,
        rho: r.rho,
        err_est: r.abs_error_estimate,
        nodes: r.nodes_used,
    })
}

/// Correlation of `family` at `n` with the table's FGM kernel convention.
pub fn table_row(n: usize, family: Family, alpha: f64, marginals: MarginalPair) -> Result<f64> {
    Ok(table_cell(n, family, alpha, marginals, &QuadratureSettings::default())?.rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub family: Family,
    pub alpha: f64,
    pub marginals: MarginalPair,
    pub rho: f64,
    pub err_est: f64,
    pub nodes: usize,
}

/// All `families x ns` cells, family-major, computed in parallel.
pub fn correlation_table(
    families: &[Family],
    ns: &[usize],
    alpha: f64,
    marginals: MarginalPair,
    settings: &QuadratureSettings,
) -> Result<Vec<TableCell>> {
    let jobs: Vec<(Family, usize)> = families.iter().flat_map(|&f| ns.iter().map(move |&n| (f, n))).collect();
    jobs.par_iter()
        .map(|&(family, n)| table_cell(n, family, alpha, marginals, settings))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSeries {
    pub family: Family,
    pub alpha: f64,
    pub marginals: MarginalPair,
    pub points: Vec<(usize, f64)>,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
}

/// Correlation as a function of `n`. Monotonicity is judged with a `1e-9` slack.
pub fn convergence_series(
    family: Family,
    alpha: f64,
    marginals: MarginalPair,
    n_list: &[usize],
    settings: &QuadratureSettings,
) -> Result<ConvergenceSeries> {
    if n_list.is_empty() {
        return domain("n list is empty");
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n list must be strictly ascending");
    }
    let cells = correlation_table(&[family], n_list, alpha, marginals, settings)?;
    let points: Vec<(usize, f64)> = cells.iter().map(|c| (c.n, c.rho)).collect();
    let nondecreasing = points.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9);
    let nonincreasing = points.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9);
    Ok(ConvergenceSeries {
        family,
        alpha,
        marginals,
        points,
        nondecreasing,
        nonincreasing,
    })
}
