//! Baker-type bivariate distributions.
//!
//! Every construction here is a mixture over ranks `k = 1..n` of joint laws
//! whose margins are the order-statistic CDFs `F^{k:n}`; averaging the margins
//! over `k` gives back `F_X` and `F_Y`.
//!
//! | family  | component for rank `k`                                  |
//! |---------|----------------------------------------------------------|
//! | `H±`    | `F_X^{k:n}(x) F_Y^{k':n}(y)`                             |
//! | `H_r`   | `sum_l r_kl F_X^{k:n}(x) F_Y^{l:n}(y)`                   |
//! | `K±`    | `P{X_{k:n} <= x, Y_{k':n} <= y}` for a dependent sample  |
//! | `G±`    | `C(F_X^{k:n}(x), F_Y^{k':n}(y))`                         |
//!
//! where `k' = k` for the `+` families and `k' = n - k + 1` for `-`.

use std::fmt;
use std::sync::Arc;

use crate::copulas::{Copula, ExtremeVariant, OsKernel, UnitSquareFn};
use crate::error::{domain, Result};
use crate::marginals::{os_cdf_at, Marginal};
use crate::orderstat::{CellProbs, CountTails, MultinomialTable};
use crate::specfun::BetaParams;

/// How ranks are paired across the two coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// Same rank on both sides.
    Plus,
    /// Rank `k` paired with `n - k + 1`.
    Minus,
}

impl Pairing {
    pub fn partner(self, k: usize, n: usize) -> usize {
        match self {
            Pairing::Plus => k,
            Pairing::Minus => n + 1 - k,
        }
    }

    fn sign(self) -> char {
        match self {
            Pairing::Plus => '+',
            Pairing::Minus => '-',
        }
    }
}

/// Mixing weights `r_kl` of the generalised Baker distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    /// `entries` is row-major `n x n`; rows and columns must each sum to `1/n`.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return domain(format!(
                "weight matrix needs n >= 1 and n*n entries, got n={n}, {} entries",
                entries.len()
            ));
        }
        if entries.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return domain("weight matrix entries must be finite and nonnegative");
        }
        let target = 1.0 / n as f64;
        for k in 0..n {
            let row: f64 = entries[k * n..(k + 1) * n].iter().sum();
            let col: f64 = (0..n).map(|l| entries[l * n + k]).sum();
            if (row - target).abs() > 1e-12 || (col - target).abs() > 1e-12 {
                return domain(format!("row/column {} sums to {row}/{col}, expected {target}", k + 1));
            }
        }
        Ok(Self { n, entries })
    }

    /// `r_kl = delta_kl / n`, which reproduces `H+`.
    pub fn diagonal(n: usize) -> Result<Self> {
        Self::from_fn(n, |k, l| if k == l { 1.0 / n as f64 } else { 0.0 })
    }

    /// `r_kl = delta_{k, n-l+1} / n`, which reproduces `H-`.
    pub fn anti_diagonal(n: usize) -> Result<Self> {
        Self::from_fn(n, |k, l| if k + l == n + 1 { 1.0 / n as f64 } else { 0.0 })
    }

    /// `r_kl = 1/n^2`, which gives independence.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| 1.0 / (n * n) as f64)
    }

    /// Builds from a function of 1-based `(k, l)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let entries = (1..=n)
            .flat_map(|k| (1..=n).map(move |l| (k, l)))
            .map(|(k, l)| f(k, l))
            .collect();
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `r_kl` for 1-based ranks.
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[(k - 1) * self.n + (l - 1)]
    }
}

type CustomFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Evaluator {
    Copula(Copula),
    Baker {
        n: usize,
        pairing: Pairing,
        betas: Vec<BetaParams>,
    },
    Weighted {
        weights: WeightMatrix,
        betas: Vec<BetaParams>,
    },
    Type1 {
        n: usize,
        pairing: Pairing,
        kernel: Copula,
        table: MultinomialTable,
    },
    Type2 {
        n: usize,
        pairing: Pairing,
        kernel: Copula,
        betas: Vec<BetaParams>,
    },
    Custom(CustomFn),
}

/// A bivariate CDF with declared marginals, evaluated lazily.
#[derive(Clone)]
pub struct BivariateCdf {
    evaluator: Evaluator,
    marg_x: Marginal,
    marg_y: Marginal,
    label: String,
}

impl fmt::Debug for BivariateCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateCdf")
            .field("label", &self.label)
            .field("marg_x", &self.marg_x)
            .field("marg_y", &self.marg_y)
            .finish_non_exhaustive()
    }
}

fn order_stat_betas(n: usize) -> Result<Vec<BetaParams>> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    (1..=n).map(|k| BetaParams::order_statistic(k, n)).collect()
}

impl BivariateCdf {
    /// `C(F_X(x), F_Y(y))`.
    pub fn from_copula(copula: Copula, marg_x: Marginal, marg_y: Marginal) -> Self {
        let label = copula.label();
        Self {
            evaluator: Evaluator::Copula(copula),
            marg_x,
            marg_y,
            label,
        }
    }

    /// Wraps an arbitrary joint CDF of `(x, y)`. The caller vouches for the marginals.
    pub fn custom<F>(label: impl Into<String>, marg_x: Marginal, marg_y: Marginal, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            evaluator: Evaluator::Custom(Arc::new(f)),
            marg_x,
            marg_y,
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn marginals(&self) -> (&Marginal, &Marginal) {
        (&self.marg_x, &self.marg_y)
    }

    /// `H(x, y)`.
    pub fn cdf(&self, x: f64, y: f64) -> f64 {
        match &self.evaluator {
            Evaluator::Custom(f) => f(x, y),
            _ => self.cdf_at_levels(self.marg_x.cdf(x), self.marg_y.cdf(y)),
        }
    }

    /// The joint CDF as a function of the marginal levels `u = F_X(x)`, `v = F_Y(y)`.
    pub(crate) fn cdf_at_levels(&self, u: f64, v: f64) -> f64 {
        match &self.evaluator {
            Evaluator::Copula(c) => c.eval(u, v),
            Evaluator::Baker { n, pairing, betas } => {
                let sum: f64 = (1..=*n)
                    .map(|k| os_cdf_at(betas[k - 1], u) * os_cdf_at(betas[pairing.partner(k, *n) - 1], v))
                    .sum();
                sum / *n as f64
            }
            Evaluator::Weighted { weights, betas } => {
                let n = weights.n();
                let fy: Vec<f64> = betas.iter().map(|&b| os_cdf_at(b, v)).collect();
                let mut total = 0.0;
                for k in 1..=n {
                    let fx = os_cdf_at(betas[k - 1], u);
                    let row: f64 = (1..=n).map(|l| weights.get(k, l) * fy[l - 1]).sum();
                    total += fx * row;
                }
                total
            }
            Evaluator::Type1 {
                n,
                pairing,
                kernel,
                table,
            } => {
                let c = kernel.eval(u, v);
                let cells = CellProbs {
                    p11: c.max(0.0),
                    p12: (u - c).max(0.0),
                    p21: (v - c).max(0.0),
                    p22: (1.0 - u - v + c).max(0.0),
                };
                let tails = CountTails::new(&cells, table);
                let sum: f64 = (1..=*n).map(|r| tails.joint(r, pairing.partner(r, *n))).sum();
                sum / *n as f64
            }
            Evaluator::Type2 {
                n,
                pairing,
                kernel,
                betas,
            } => {
                let sum: f64 = (1..=*n)
                    .map(|k| {
                        let a = os_cdf_at(betas[k - 1], u);
                        let b = os_cdf_at(betas[pairing.partner(k, *n) - 1], v);
                        kernel.eval(a, b)
                    })
                    .sum();
                sum / *n as f64
            }
            Evaluator::Custom(f) => f(self.marg_x.quantile_unchecked(u), self.marg_y.quantile_unchecked(v)),
        }
    }

    /// `(u, v) -> H(Q_X(u), Q_Y(v))`, the construction seen on the unit square.
    pub fn on_unit_square(&self) -> UnitSquareView<'_> {
        UnitSquareView(self)
    }
}

/// See [`BivariateCdf::on_unit_square`].
#[derive(Debug, Clone, Copy)]
pub struct UnitSquareView<'a>(&'a BivariateCdf);

impl UnitSquareFn for UnitSquareView<'_> {
    fn eval(&self, u: f64, v: f64) -> f64 {
        let d = self.0;
        d.cdf(d.marg_x.quantile_unchecked(u), d.marg_y.quantile_unchecked(v))
    }
}

/// Baker's mixture of independent order-statistic pairs, `H+` or `H-`.
pub fn baker(n: usize, pairing: Pairing, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    Ok(BivariateCdf {
        evaluator: Evaluator::Baker {
            n,
            pairing,
            betas: order_stat_betas(n)?,
        },
        marg_x,
        marg_y,
        label: format!("H{}(n={n})", pairing.sign()),
    })
}

pub fn baker_plus(n: usize, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    baker(n, Pairing::Plus, marg_x, marg_y)
}

pub fn baker_minus(n: usize, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    baker(n, Pairing::Minus, marg_x, marg_y)
}

/// `H_r(x, y) = sum_k sum_l r_kl F_X^{k:n}(x) F_Y^{l:n}(y)`.
pub fn baker_weighted(weights: WeightMatrix, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    let n = weights.n();
    Ok(BivariateCdf {
        evaluator: Evaluator::Weighted {
            betas: order_stat_betas(n)?,
            weights,
        },
        marg_x,
        marg_y,
        label: format!("H_r(n={n})"),
    })
}

/// Type I: Baker mixing of the componentwise order statistics of `n` pairs
/// drawn from `kernel(F_X, F_Y)`.
pub fn type1(n: usize, kernel: Copula, pairing: Pairing, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let label = format!("K{}(n={n}, {})", pairing.sign(), kernel.label());
    Ok(BivariateCdf {
        evaluator: Evaluator::Type1 {
            n,
            pairing,
            kernel,
            table: MultinomialTable::new(n),
        },
        marg_x,
        marg_y,
        label,
    })
}

pub fn type1_plus(n: usize, kernel: Copula, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    type1(n, kernel, Pairing::Plus, marg_x, marg_y)
}

pub fn type1_minus(n: usize, kernel: Copula, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    type1(n, kernel, Pairing::Minus, marg_x, marg_y)
}

/// Type II: the kernel copula applied to the order-statistic marginals.
pub fn type2(n: usize, kernel: Copula, pairing: Pairing, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    let label = format!("G{}(n={n}, {})", pairing.sign(), kernel.label());
    Ok(BivariateCdf {
        evaluator: Evaluator::Type2 {
            n,
            pairing,
            kernel,
            betas: order_stat_betas(n)?,
        },
        marg_x,
        marg_y,
        label,
    })
}

pub fn type2_plus(n: usize, kernel: Copula, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    type2(n, kernel, Pairing::Plus, marg_x, marg_y)
}

pub fn type2_minus(n: usize, kernel: Copula, marg_x: Marginal, marg_y: Marginal) -> Result<BivariateCdf> {
    type2(n, kernel, Pairing::Minus, marg_x, marg_y)
}

/// Type II `+` mixture whose kernel is the FGM extreme-order-statistic copula
/// with the same `n`: `C_{n,n:n}` for [`ExtremeVariant::MaxMax`] and
/// `C_{1,n:n}` for [`ExtremeVariant::MinMin`].
pub fn type2_oskernel(
    n: usize,
    variant: ExtremeVariant,
    alpha: f64,
    marg_x: Marginal,
    marg_y: Marginal,
) -> Result<BivariateCdf> {
    let kernel = Copula::order_stat(variant, n, OsKernel::Fgm { alpha })?;
    let mut dist = type2(n, kernel, Pairing::Plus, marg_x, marg_y)?;
    let accent = match variant {
        ExtremeVariant::MaxMax => "check",
        ExtremeVariant::MinMin => "hat",
    };
    dist.label = format!("G{accent}+(n={n}, fgm({alpha}))");
    Ok(dist)
}
