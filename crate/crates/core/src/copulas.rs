//! Copulas: the base families, the copulas of extreme order statistics, and
//! grid-based axiom checks.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::marginals::Marginal;

/// Tolerance used by the axiom and dependence checks.
pub const AXIOM_TOLERANCE: f64 = 1e-12;

/// Anything that can be evaluated on the unit square.
pub trait UnitSquareFn {
    fn eval(&self, u: f64, v: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64> UnitSquareFn for F {
    fn eval(&self, u: f64, v: f64) -> f64 {
        self(u, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DependenceClass {
    #[serde(rename = "PQD")]
    Pqd,
    #[serde(rename = "NQD")]
    Nqd,
    #[serde(rename = "neither")]
    Neither,
}

impl fmt::Display for DependenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DependenceClass::Pqd => "PQD",
            DependenceClass::Nqd => "NQD",
            DependenceClass::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Copula {
    /// Independence, `uv`.
    Product,
    /// Farlie-Gumbel-Morgenstern, `uv(1 + alpha(1-u)(1-v))`.
    Fgm { alpha: f64 },
    /// Gumbel's bivariate logistic copula, `uv / (u + v - uv)`.
    GumbelLogistic,
    /// `min(u, v)`.
    FrechetUpper,
    /// `max(u + v - 1, 0)`.
    FrechetLower,
    /// Copula of a pair of extreme order statistics.
    OrderStatExtreme(OrderStatCopula),
}

/// Which pair of extremes an [`OrderStatCopula`] couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeVariant {
    /// `(X_{n:n}, Y_{n:n})`
    MaxMax,
    /// `(X_{1:n}, Y_{1:n})`
    MinMin,
}

/// Joint law of the underlying pairs whose extremes are coupled.
#[derive(Debug, Clone, PartialEq)]
pub enum OsKernel {
    Fgm {
        alpha: f64,
    },
    GumbelLogistic,
    /// `F(x, y) = C(F_X(x), F_Y(y))`, evaluated by composing through the
    /// marginal quantiles instead of a closed form.
    GeneralNumeric {
        underlying: Box<Copula>,
        marg_x: Marginal,
        marg_y: Marginal,
    },
}

/// The copula `C_{n,n:n}` or `C_{1,n:n}` of extreme order statistics from `n`
/// pairs with joint law given by the kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatCopula {
    variant: ExtremeVariant,
    n: usize,
    kernel: OsKernel,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&alpha) {
        return domain(format!("FGM alpha must lie in [-1, 1], got {alpha}"));
    }
    Ok(())
}

fn check_unit(u: f64, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
        return domain(format!("({u}, {v}) outside the unit square"));
    }
    Ok(())
}

/// `t^(1/n)` via `exp(ln(t)/n)`.
fn root(t: f64, n: usize) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (t.ln() / n as f64).exp()
    }
}

/// `(1 - t)^(1/n)`
fn survival_root(t: f64, n: usize) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        ((-t).ln_1p() / n as f64).exp()
    }
}

fn fgm(alpha: f64, u: f64, v: f64) -> f64 {
    u * v * (1.0 + alpha * (1.0 - u) * (1.0 - v))
}

fn gumbel_logistic(u: f64, v: f64) -> f64 {
    let denom = u + v - u * v;
    if denom <= 0.0 {
        0.0
    } else {
        u * v / denom
    }
}

impl OrderStatCopula {
    pub fn new(variant: ExtremeVariant, n: usize, kernel: OsKernel) -> Result<Self> {
        if n == 0 {
            return domain("order-statistic copula needs n >= 1");
        }
        match &kernel {
            OsKernel::Fgm { alpha } => check_alpha(*alpha)?,
            OsKernel::GumbelLogistic => {}
            OsKernel::GeneralNumeric { underlying, .. } => {
                if matches!(**underlying, Copula::OrderStatExtreme(_)) {
                    return Err(Error::Unsupported("nested order-statistic kernels".into()));
                }
            }
        }
        Ok(Self { variant, n, kernel })
    }

    pub fn variant(&self) -> ExtremeVariant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> &OsKernel {
        &self.kernel
    }

    fn eval(&self, t: f64, s: f64) -> f64 {
        match self.variant {
            ExtremeVariant::MaxMax => maxmax(&self.kernel, self.n, t, s),
            ExtremeVariant::MinMin => minmin(&self.kernel, self.n, t, s),
        }
    }
}

/// Underlying joint CDF evaluated at marginal levels `(p, q)`, through the
/// quantiles for the numeric kernel.
fn kernel_joint_at_levels(kernel: &OsKernel, p: f64, q: f64) -> f64 {
    match kernel {
        OsKernel::Fgm { alpha } => fgm(*alpha, p, q),
        OsKernel::GumbelLogistic => gumbel_logistic(p, q),
        OsKernel::GeneralNumeric {
            underlying,
            marg_x,
            marg_y,
        } => {
            let x = marg_x.quantile_unchecked(p);
            let y = marg_y.quantile_unchecked(q);
            underlying.eval(marg_x.cdf(x), marg_y.cdf(y))
        }
    }
}

fn maxmax(kernel: &OsKernel, n: usize, t: f64, s: f64) -> f64 {
    if t <= 0.0 || s <= 0.0 {
        return 0.0;
    }
    let (rt, rs) = (root(t, n), root(s, n));
    match kernel {
        OsKernel::Fgm { alpha } => t * s * (1.0 + alpha * (1.0 - rt) * (1.0 - rs)).powi(n as i32),
        OsKernel::GumbelLogistic => t * s / (rt + rs - rt * rs).powi(n as i32),
        OsKernel::GeneralNumeric { .. } => kernel_joint_at_levels(kernel, rt, rs).powi(n as i32),
    }
}

fn minmin(kernel: &OsKernel, n: usize, t: f64, s: f64) -> f64 {
    if t <= 0.0 || s <= 0.0 {
        return 0.0;
    }
    let (a, b) = (survival_root(t, n), survival_root(s, n));
    // 1 - (1-t)^(1/n), kept accurate for small t
    let one_minus = |t: f64| {
        if t >= 1.0 {
            1.0
        } else {
            -((-t).ln_1p() / n as f64).exp_m1()
        }
    };
    let (p, q) = (one_minus(t), one_minus(s));
    let joint = match kernel {
        OsKernel::Fgm { alpha } => p * q * (1.0 + alpha * a * b),
        OsKernel::GumbelLogistic => gumbel_logistic(p, q),
        OsKernel::GeneralNumeric { .. } => kernel_joint_at_levels(kernel, p, q),
    };
    // joint survival probability of one underlying pair
    let survival = (a + b - 1.0 + joint).max(0.0);
    t + s - 1.0 + survival.powi(n as i32)
}

/// `C_{n,n:n}(t, s)`.
pub fn os_copula_maxmax(kernel: &OsKernel, n: usize, t: f64, s: f64) -> Result<f64> {
    check_unit(t, s)?;
    if n == 0 {
        return domain("n must be at least 1");
    }
    Ok(maxmax(kernel, n, t, s))
}

/// `C_{1,n:n}(t, s)`.
pub fn os_copula_minmin(kernel: &OsKernel, n: usize, t: f64, s: f64) -> Result<f64> {
    check_unit(t, s)?;
    if n == 0 {
        return domain("n must be at least 1");
    }
    Ok(minmin(kernel, n, t, s))
}

impl Copula {
    pub fn fgm(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Copula::Fgm { alpha })
    }

    pub fn order_stat(variant: ExtremeVariant, n: usize, kernel: OsKernel) -> Result<Self> {
        Ok(Copula::OrderStatExtreme(OrderStatCopula::new(variant, n, kernel)?))
    }

    /// `C(u, v)` with a domain check.
    pub fn value(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(self.eval(u, v))
    }

    /// The dependence class implied by the family and its parameter.
    pub fn declared_class(&self) -> DependenceClass {
        let by_sign = |alpha: f64| {
            if alpha >= 0.0 {
                DependenceClass::Pqd
            } else {
                DependenceClass::Nqd
            }
        };
        match self {
            Copula::Product | Copula::GumbelLogistic | Copula::FrechetUpper => DependenceClass::Pqd,
            Copula::FrechetLower => DependenceClass::Nqd,
            Copula::Fgm { alpha } => by_sign(*alpha),
            Copula::OrderStatExtreme(os) => match &os.kernel {
                OsKernel::Fgm { alpha } => by_sign(*alpha),
                OsKernel::GumbelLogistic => DependenceClass::Pqd,
                OsKernel::GeneralNumeric { underlying, .. } => underlying.declared_class(),
            },
        }
    }

    /// Solves `dC/du(u, v) = w` for `v`, i.e. inverts the conditional law of
    /// `V` given `U = u`.
    pub fn conditional_quantile(&self, u: f64, w: f64) -> Result<f64> {
        check_unit(u, w)?;
        match self {
            Copula::Product => Ok(w),
            Copula::Fgm { alpha } => {
                // dC/du = v (1 + A (1 - v)) with A = alpha (1 - 2u)
                let a = alpha * (1.0 - 2.0 * u);
                let disc = ((1.0 + a) * (1.0 + a) - 4.0 * a * w).max(0.0);
                Ok((2.0 * w / ((1.0 + a) + disc.sqrt())).clamp(0.0, 1.0))
            }
            Copula::GumbelLogistic => {
                // dC/du = (v / (u + v - uv))^2
                let r = w.sqrt();
                let denom = 1.0 - r * (1.0 - u);
                if denom <= 0.0 {
                    Ok(1.0)
                } else {
                    Ok((r * u / denom).clamp(0.0, 1.0))
                }
            }
            Copula::FrechetUpper => Ok(u),
            Copula::FrechetLower => Ok(1.0 - u),
            Copula::OrderStatExtreme(os) => match os.kernel {
                OsKernel::GeneralNumeric { .. } => Err(Error::Unsupported(
                    "conditional sampling from an order-statistic copula with a numeric kernel".into(),
                )),
                _ => Ok(numeric_conditional_quantile(self, u, w)),
            },
        }
    }

    pub fn supports_conditional_sampling(&self) -> bool {
        !matches!(
            self,
            Copula::OrderStatExtreme(OrderStatCopula {
                kernel: OsKernel::GeneralNumeric { .. },
                ..
            })
        )
    }

    pub fn label(&self) -> String {
        match self {
            Copula::Product => "product".into(),
            Copula::Fgm { alpha } => format!("fgm({alpha})"),
            Copula::GumbelLogistic => "gumbel".into(),
            Copula::FrechetUpper => "frechet-upper".into(),
            Copula::FrechetLower => "frechet-lower".into(),
            Copula::OrderStatExtreme(os) => {
                let v = match os.variant {
                    ExtremeVariant::MaxMax => "osmax",
                    ExtremeVariant::MinMin => "osmin",
                };
                let k = match &os.kernel {
                    OsKernel::Fgm { alpha } => format!("fgm({alpha})"),
                    OsKernel::GumbelLogistic => "gumbel".into(),
                    OsKernel::GeneralNumeric { underlying, .. } => format!("numeric {}", underlying.label()),
                };
                format!("{v}[n={}, {k}]", os.n)
            }
        }
    }
}

impl UnitSquareFn for Copula {
    fn eval(&self, u: f64, v: f64) -> f64 {
        match self {
            Copula::Product => u * v,
            Copula::Fgm { alpha } => fgm(*alpha, u, v),
            Copula::GumbelLogistic => gumbel_logistic(u, v),
            Copula::FrechetUpper => u.min(v),
            Copula::FrechetLower => (u + v - 1.0).max(0.0),
            Copula::OrderStatExtreme(os) => os.eval(u, v),
        }
    }
}

/// Bisection on `v` for `dC/du(u, v) = w`, with the partial derivative taken by
/// central differences (one-sided at the edges).
fn numeric_conditional_quantile(c: &Copula, u: f64, w: f64) -> f64 {
    const H: f64 = 1e-7;
    let partial = |v: f64| {
        let (lo, hi) = ((u - H).max(0.0), (u + H).min(1.0));
        (c.eval(hi, v) - c.eval(lo, v)) / (hi - lo)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if partial(mid) < w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of a grid check of the copula axioms.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub grid_size: usize,
    /// Largest deviation from `C(u,0) = C(0,v) = 0`, `C(u,1) = u`, `C(1,v) = v`.
    pub max_boundary_violation: f64,
    /// Smallest C-volume over the grid cells.
    pub min_rectangle_volume: f64,
    /// Largest excursion outside `[max(u+v-1,0), min(u,v)]`.
    pub max_frechet_violation: f64,
    pub classification: DependenceClass,
}

impl ValidationReport {
    pub fn boundary_ok(&self) -> bool {
        self.max_boundary_violation <= AXIOM_TOLERANCE
    }

    pub fn two_increasing_ok(&self) -> bool {
        self.min_rectangle_volume >= -AXIOM_TOLERANCE
    }

    pub fn frechet_ok(&self) -> bool {
        self.max_frechet_violation <= AXIOM_TOLERANCE
    }

    /// Boundary conditions and 2-increasingness both hold on the grid.
    pub fn is_copula(&self) -> bool {
        self.boundary_ok() && self.two_increasing_ok()
    }
}

/// Checks the copula axioms of `c` on the `(grid_size + 1)^2` lattice
/// `{0, 1/g, ..., 1}^2` and classifies its quadrant dependence.
///
/// Every grid rectangle is a union of lattice cells, so a nonnegative minimum
/// cell volume covers all of them.
pub fn validate_copula<C: UnitSquareFn + ?Sized>(c: &C, grid_size: usize) -> Result<ValidationReport> {
    if grid_size < 8 {
        return domain(format!("validation grid must be at least 8, got {grid_size}"));
    }
    let g = grid_size;
    let pts: Vec<f64> = (0..=g).map(|i| i as f64 / g as f64).collect();
    let values: Vec<Vec<f64>> = pts
        .iter()
        .map(|&u| pts.iter().map(|&v| c.eval(u, v)).collect())
        .collect();

    let mut boundary: f64 = 0.0;
    for (i, &t) in pts.iter().enumerate() {
        boundary = boundary
            .max(values[i][0].abs())
            .max(values[0][i].abs())
            .max((values[i][g] - t).abs())
            .max((values[g][i] - t).abs());
    }

    let mut min_volume = f64::INFINITY;
    for i in 0..g {
        for j in 0..g {
            let vol = values[i + 1][j + 1] - values[i + 1][j] - values[i][j + 1] + values[i][j];
            min_volume = min_volume.min(vol);
        }
    }

    let mut frechet: f64 = 0.0;
    let mut pqd = true;
    let mut nqd = true;
    for (i, &u) in pts.iter().enumerate() {
        for (j, &v) in pts.iter().enumerate() {
            let c = values[i][j];
            let lower = (u + v - 1.0).max(0.0);
            let upper = u.min(v);
            frechet = frechet.max(lower - c).max(c - upper);
            let prod = u * v;
            pqd &= c >= prod - AXIOM_TOLERANCE;
            nqd &= c <= prod + AXIOM_TOLERANCE;
        }
    }
    let classification = if pqd {
        DependenceClass::Pqd
    } else if nqd {
        DependenceClass::Nqd
    } else {
        DependenceClass::Neither
    };

    Ok(ValidationReport {
        grid_size,
        max_boundary_violation: boundary,
        min_rectangle_volume: min_volume,
        max_frechet_violation: frechet.max(0.0),
        classification,
    })
}

/// `max |C(u,v) - uv|` over the `(grid_size + 1)^2` lattice.
pub fn sup_distance_to_product<C: UnitSquareFn + ?Sized>(c: &C, grid_size: usize) -> Result<f64> {
    if grid_size < 8 {
        return domain(format!("grid must be at least 8, got {grid_size}"));
    }
    let g = grid_size as f64;
    let mut sup: f64 = 0.0;
    for i in 0..=grid_size {
        for j in 0..=grid_size {
            let (u, v) = (i as f64 / g, j as f64 / g);
            sup = sup.max((c.eval(u, v) - u * v).abs());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fgm_kernel(alpha: f64) -> OsKernel {
        OsKernel::Fgm { alpha }
    }

    #[test]
    fn copula_values() {
        assert_eq!(Copula::fgm(0.0).unwrap().value(0.5, 0.5).unwrap(), 0.25);
        assert_eq!(Copula::fgm(1.0).unwrap().value(0.5, 0.5).unwrap(), 0.3125);
        assert!((Copula::GumbelLogistic.value(0.5, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(Copula::FrechetUpper.value(0.3, 0.7).unwrap(), 0.3);
        assert!((Copula::FrechetLower.value(0.3, 0.9).unwrap() - 0.2).abs() < 1e-15);
        assert!(Copula::Product.value(1.2, 0.5).is_err());
        assert!(Copula::fgm(1.5).is_err());
    }

    #[test]
    fn printed_logistic_form_is_not_a_copula() {
        // uv / (1 + u - uv) fails C(1, v) = v, which is why the symmetric form is used.
        let printed = |u: f64, v: f64| u * v / (1.0 + u - u * v);
        let report = validate_copula(&printed, 16).unwrap();
        assert!(!report.boundary_ok());
    }

    #[test]
    fn maxmax_examples() {
        let k = fgm_kernel(1.0);
        for &(t, s) in &[(0.2, 0.9), (0.5, 0.5), (0.99, 0.01)] {
            let want = Copula::fgm(1.0).unwrap().value(t, s).unwrap();
            assert!((os_copula_maxmax(&k, 1, t, s).unwrap() - want).abs() < 1e-15);
        }
        // oracle: F^2(F_X^{-1}(t^{1/2}), F_Y^{-1}(s^{1/2})) with uniform marginals
        let r = 0.25f64.sqrt();
        let oracle = (r * r * (1.0 + (1.0 - r) * (1.0 - r))).powi(2);
        let got = os_copula_maxmax(&k, 2, 0.25, 0.25).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.09765625).abs() < 1e-15);
        for t in [0.0, 0.3, 1.0] {
            let g = os_copula_maxmax(&OsKernel::GumbelLogistic, 2, t, 1.0).unwrap();
            assert!((g - t).abs() < 1e-15);
        }
        assert!(os_copula_maxmax(&k, 2, 1.1, 0.5).is_err());
    }

    #[test]
    fn minmin_examples() {
        let k = fgm_kernel(1.0);
        for &(t, s) in &[(0.2, 0.9), (0.5, 0.5)] {
            let want = Copula::fgm(1.0).unwrap().value(t, s).unwrap();
            assert!((os_copula_minmin(&k, 1, t, s).unwrap() - want).abs() < 1e-14);
        }
        for kernel in [fgm_kernel(-0.7), OsKernel::GumbelLogistic] {
            for t in [0.0, 0.4, 1.0] {
                assert!((os_copula_minmin(&kernel, 3, t, 1.0).unwrap() - t).abs() < 1e-14);
            }
        }
        // oracle: P{X_{1:2} <= x, Y_{1:2} <= y} by direct evaluation with uniform
        // marginals, at the levels where both minima have CDF 0.5.
        let x = 1.0 - 0.5f64.sqrt();
        let joint = x * x * (1.0 + (1.0 - x) * (1.0 - x));
        let survival = 1.0 - 2.0 * x + joint;
        let oracle = 2.0 * (1.0 - (1.0 - x).powi(2)) - 1.0 + survival.powi(2);
        let got = os_copula_minmin(&k, 2, 0.5, 0.5).unwrap();
        assert!((got - oracle).abs() < 1e-14, "{got} vs {oracle}");
    }

    #[test]
    fn numeric_kernel_matches_closed_forms() {
        let kernels = [
            (Copula::fgm(0.8).unwrap(), fgm_kernel(0.8)),
            (Copula::fgm(-1.0).unwrap(), fgm_kernel(-1.0)),
            (Copula::GumbelLogistic, OsKernel::GumbelLogistic),
        ];
        for (base, closed) in kernels {
            for marg in [Marginal::Uniform01, Marginal::ExponentialRate1] {
                let numeric = OsKernel::GeneralNumeric {
                    underlying: Box::new(base.clone()),
                    marg_x: marg.clone(),
                    marg_y: Marginal::Uniform01,
                };
                for n in [1, 2, 3, 5] {
                    for i in 0..=64 {
                        for j in 0..=64 {
                            let (t, s) = (i as f64 / 64.0, j as f64 / 64.0);
                            let a = os_copula_maxmax(&closed, n, t, s).unwrap();
                            let b = os_copula_maxmax(&numeric, n, t, s).unwrap();
                            assert!((a - b).abs() < 1e-10, "max n={n} ({t},{s}) {a} {b}");
                            let a = os_copula_minmin(&closed, n, t, s).unwrap();
                            let b = os_copula_minmin(&numeric, n, t, s).unwrap();
                            assert!((a - b).abs() < 1e-10, "min n={n} ({t},{s}) {a} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conditional_quantile_examples() {
        assert_eq!(Copula::Product.conditional_quantile(0.3, 0.8).unwrap(), 0.8);
        assert_eq!(Copula::FrechetUpper.conditional_quantile(0.3, 0.123).unwrap(), 0.3);
        assert!((Copula::FrechetLower.conditional_quantile(0.3, 0.9).unwrap() - 0.7).abs() < 1e-15);
    }

    fn fd_partial(c: &Copula, u: f64, v: f64) -> f64 {
        let h = 1e-6;
        (c.eval(u + h, v) - c.eval(u - h, v)) / (2.0 * h)
    }

    /// Bisection on the finite-difference partial derivative.
    fn fd_root(c: &Copula, u: f64, w: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if fd_partial(c, u, mid) < w {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn conditional_quantile_round_trip() {
        let copulas = [
            Copula::fgm(1.0).unwrap(),
            Copula::fgm(-0.6).unwrap(),
            Copula::GumbelLogistic,
            Copula::order_stat(ExtremeVariant::MaxMax, 2, fgm_kernel(1.0)).unwrap(),
        ];
        for c in &copulas {
            for &u in &[0.05, 0.3, 0.5, 0.77, 0.95] {
                for &w in &[0.01, 0.2, 0.5, 0.8, 0.99] {
                    let v = c.conditional_quantile(u, w).unwrap();
                    let residual = fd_partial(c, u, v) - w;
                    assert!(residual.abs() < 1e-6, "{} u={u} w={w} residual={residual}", c.label());
                }
            }
        }
        // the closed FGM form against an independent numeric root
        let c = Copula::fgm(1.0).unwrap();
        for &u in &[0.1, 0.4, 0.9] {
            for &w in &[0.15, 0.5, 0.85] {
                let v = c.conditional_quantile(u, w).unwrap();
                assert!((v - fd_root(&c, u, w)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn conditional_quantile_numeric_kernel_unsupported() {
        let c = Copula::order_stat(
            ExtremeVariant::MaxMax,
            2,
            OsKernel::GeneralNumeric {
                underlying: Box::new(Copula::Product),
                marg_x: Marginal::Uniform01,
                marg_y: Marginal::Uniform01,
            },
        )
        .unwrap();
        assert!(matches!(c.conditional_quantile(0.5, 0.5), Err(Error::Unsupported(_))));
        assert!(!c.supports_conditional_sampling());
    }

    #[test]
    fn validation_examples() {
        let r = validate_copula(&Copula::fgm(1.0).unwrap(), 64).unwrap();
        assert!(r.is_copula() && r.frechet_ok());
        assert_eq!(r.classification, DependenceClass::Pqd);
        let r = validate_copula(&Copula::fgm(-1.0).unwrap(), 64).unwrap();
        assert!(r.is_copula());
        assert_eq!(r.classification, DependenceClass::Nqd);
        let not_copula = |u: f64, v: f64| u * v * v;
        let r = validate_copula(&not_copula, 32).unwrap();
        assert!(!r.boundary_ok());
        assert!(!r.is_copula());
        assert!(validate_copula(&Copula::Product, 4).is_err());
    }

    #[test]
    fn non_two_increasing_detected() {
        // satisfies the boundary conditions but has negative mass near the centre
        let bad = |u: f64, v: f64| u * v * (1.0 + 3.0 * (1.0 - u) * (1.0 - v));
        let r = validate_copula(&bad, 32).unwrap();
        assert!(r.boundary_ok());
        assert!(!r.two_increasing_ok());
    }

    #[test]
    fn sup_distance_examples() {
        assert_eq!(sup_distance_to_product(&Copula::Product, 8).unwrap(), 0.0);
        assert_eq!(sup_distance_to_product(&Copula::FrechetUpper, 8).unwrap(), 0.25);
        let mut last = f64::INFINITY;
        for n in [1, 2, 5, 20, 100] {
            let c = Copula::order_stat(ExtremeVariant::MaxMax, n, fgm_kernel(1.0)).unwrap();
            let d = sup_distance_to_product(&c, 64).unwrap();
            assert!(d < last, "n={n}: {d} !< {last}");
            last = d;
        }
    }

    #[test]
    fn declared_classes_hold_on_grid() {
        let copulas = [
            Copula::Product,
            Copula::fgm(0.5).unwrap(),
            Copula::fgm(-0.5).unwrap(),
            Copula::GumbelLogistic,
            Copula::FrechetUpper,
            Copula::FrechetLower,
            Copula::order_stat(ExtremeVariant::MaxMax, 3, fgm_kernel(1.0)).unwrap(),
            Copula::order_stat(ExtremeVariant::MaxMax, 3, fgm_kernel(-1.0)).unwrap(),
            Copula::order_stat(ExtremeVariant::MinMin, 3, fgm_kernel(1.0)).unwrap(),
            Copula::order_stat(ExtremeVariant::MinMin, 3, fgm_kernel(-1.0)).unwrap(),
            Copula::order_stat(ExtremeVariant::MaxMax, 4, OsKernel::GumbelLogistic).unwrap(),
        ];
        for c in &copulas {
            let r = validate_copula(c, 64).unwrap();
            assert_eq!(r.classification, c.declared_class(), "{}", c.label());
        }
    }
}
