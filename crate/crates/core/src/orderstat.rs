//! Joint distribution of bivariate order statistics `(X_{r:n}, Y_{s:n})` from a
//! sample of `n` pairs with joint CDF `C(F_X(x), F_Y(y))`.
//!
//! Three evaluation routes are provided: the direct multinomial triple sum,
//! the equal-rank rearrangement that isolates the `k = i` and `k = j` terms,
//! and a fast path for the comonotone kernel `min(u, v)`.

use crate::copulas::{Copula, UnitSquareFn};
use crate::error::{domain, Error, Result};
use crate::marginals::{os_cdf_at, Marginal};
use crate::specfun::{binomial, BetaParams, MultinomIndex};

/// Slack allowed on cell probabilities before they count as negative.
pub const CELL_SLACK: f64 = 1e-14;

/// Identifies `P{X_{r:n} <= x, Y_{s:n} <= y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatJointSpec {
    n: usize,
    r: usize,
    s: usize,
    kernel: Copula,
    marg_x: Marginal,
    marg_y: Marginal,
}

impl OrderStatJointSpec {
    pub fn new(n: usize, r: usize, s: usize, kernel: Copula, marg_x: Marginal, marg_y: Marginal) -> Result<Self> {
        if n == 0 || r == 0 || s == 0 || r > n || s > n {
            return domain(format!("ranks must satisfy 1 <= r, s <= n, got n={n}, r={r}, s={s}"));
        }
        Ok(Self {
            n,
            r,
            s,
            kernel,
            marg_x,
            marg_y,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn kernel(&self) -> &Copula {
        &self.kernel
    }

    pub fn marginals(&self) -> (&Marginal, &Marginal) {
        (&self.marg_x, &self.marg_y)
    }

    fn cells(&self, x: f64, y: f64) -> Result<CellProbs> {
        cell_probs(&self.kernel, &self.marg_x, &self.marg_y, x, y)
    }
}

/// Probabilities of the four quadrants cut out by `(x, y)` for one pair:
/// `p11 = P{X<=x, Y<=y}`, `p12 = P{X<=x, Y>y}`, `p21 = P{X>x, Y<=y}`,
/// `p22 = P{X>x, Y>y}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbs {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

impl CellProbs {
    /// Builds the cells from marginal levels `u = F_X(x)`, `v = F_Y(y)` and the
    /// joint value `c = C(u, v)`.
    pub fn from_levels(u: f64, v: f64, c: f64) -> Result<Self> {
        let raw = [c, u - c, v - c, 1.0 - u - v + c];
        let mut cells = [0.0; 4];
        for (dst, &p) in cells.iter_mut().zip(&raw) {
            if p < -CELL_SLACK || p.is_nan() {
                return Err(Error::Invariant(format!(
                    "negative cell probability {p} at levels ({u}, {v}) with joint {c}"
                )));
            }
            *dst = p.max(0.0);
        }
        let total: f64 = cells.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("cell probabilities sum to {total}")));
        }
        Ok(Self {
            p11: cells[0],
            p12: cells[1],
            p21: cells[2],
            p22: cells[3],
        })
    }

    /// Joint survival probability `P{X > x, Y > y}`.
    pub fn survival(&self) -> f64 {
        self.p22
    }
}

/// Cell probabilities at `(x, y)` for a pair with joint CDF `C(F_X(x), F_Y(y))`.
pub fn cell_probs(kernel: &Copula, marg_x: &Marginal, marg_y: &Marginal, x: f64, y: f64) -> Result<CellProbs> {
    let u = marg_x.cdf(x);
    let v = marg_y.cdf(y);
    CellProbs::from_levels(u, v, kernel.eval(u, v))
}

/// `base^0..=base^n`, with `0^0 = 1`.
fn powers(base: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= base;
    }
    out
}

/// Tabulated `c(n,k;i,j)` for one `n`, indexed by the four cell counts.
#[derive(Debug, Clone)]
pub struct MultinomialTable {
    n: usize,
    ln_fact: Vec<f64>,
    exact: Option<Vec<u64>>,
}

impl MultinomialTable {
    pub fn new(n: usize) -> Self {
        let ln_fact = (0..=n).map(crate::specfun::ln_factorial).collect();
        let exact = (n <= crate::specfun::EXACT_FACTORIAL_MAX).then(|| {
            (0..=n as u64)
                .scan(1u64, |acc, k| {
                    if k > 0 {
                        *acc *= k;
                    }
                    Some(*acc)
                })
                .collect()
        });
        Self { n, ln_fact, exact }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c(n,k;i,j)`; the caller guarantees `k` lies in its admissible range.
    #[inline]
    pub fn coeff(&self, k: usize, i: usize, j: usize) -> f64 {
        let d = self.n + k - i - j;
        match &self.exact {
            Some(f) => (f[self.n] / (f[k] * f[i - k] * f[j - k] * f[d])) as f64,
            None => {
                (self.ln_fact[self.n] - self.ln_fact[k] - self.ln_fact[i - k] - self.ln_fact[j - k] - self.ln_fact[d])
                    .exp()
            }
        }
    }
}

/// One term of the multinomial triple sum.
#[inline]
fn term(table: &MultinomialTable, pw: &[Vec<f64>; 4], k: usize, i: usize, j: usize) -> f64 {
    let n = table.n();
    table.coeff(k, i, j) * pw[0][k] * pw[1][i - k] * pw[2][j - k] * pw[3][n + k - i - j]
}

fn cell_powers(cells: &CellProbs, n: usize) -> [Vec<f64>; 4] {
    [
        powers(cells.p11, n),
        powers(cells.p12, n),
        powers(cells.p21, n),
        powers(cells.p22, n),
    ]
}

/// `sum_{i>=r} sum_{j>=s} sum_k c(n,k;i,j) p11^k p12^(i-k) p21^(j-k) p22^(n-i-j+k)`.
pub fn joint_from_cells(cells: &CellProbs, n: usize, r: usize, s: usize) -> f64 {
    let table = MultinomialTable::new(n);
    let pw = cell_powers(cells, n);
    let mut total = 0.0;
    for i in r..=n {
        for j in s..=n {
            let (lo, hi) = MultinomIndex::k_range(n, i, j);
            // largest p11 exponent first
            for k in (lo..=hi).rev() {
                total += term(&table, &pw, k, i, j);
            }
        }
    }
    total.clamp(0.0, 1.0)
}

/// `P{X_{r:n} <= x, Y_{s:n} <= y}` by the multinomial triple sum.
pub fn joint_cdf_direct(spec: &OrderStatJointSpec, x: f64, y: f64) -> Result<f64> {
    let cells = spec.cells(x, y)?;
    Ok(joint_from_cells(&cells, spec.n, spec.r, spec.s))
}

/// The four pieces of the equal-rank rearrangement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Terms {
    /// `sum_{i>=r} C(n,i) C^i [v - C + Cbar]^(n-i)`
    pub row_term: f64,
    /// `sum_{j>=r} C(n,j) C^j [u - C + Cbar]^(n-j)`
    pub column_term: f64,
    /// `sum_{i>=r} C(n,i) C^i Cbar^(n-i)`, counted twice by the first two.
    pub diagonal_term: f64,
    /// The triple sum restricted to `k != i` and `k != j`.
    pub residual: f64,
}

impl Lemma1Terms {
    pub fn total(&self) -> f64 {
        self.row_term + self.column_term - self.diagonal_term + self.residual
    }
}

/// Evaluates the pieces of the equal-rank rearrangement at `(x, y)`.
pub fn lemma1_terms(spec: &OrderStatJointSpec, x: f64, y: f64) -> Result<Lemma1Terms> {
    if spec.r != spec.s {
        return domain(format!(
            "the equal-rank representation needs r = s, got r={}, s={}",
            spec.r, spec.s
        ));
    }
    let (n, r) = (spec.n, spec.r);
    let u = spec.marg_x.cdf(x);
    let v = spec.marg_y.cdf(y);
    let cells = spec.cells(x, y)?;
    let c = cells.p11;
    let c_bar = cells.p22;
    let row_bracket = (v - c + c_bar).max(0.0);
    let col_bracket = (u - c + c_bar).max(0.0);

    let mut row_term = 0.0;
    let mut column_term = 0.0;
    let mut diagonal_term = 0.0;
    for i in r..=n {
        let b = binomial(n, i) * c.powi(i as i32);
        row_term += b * row_bracket.powi((n - i) as i32);
        // exponent n - j on the column bracket (j plays the role of i here)
        column_term += b * col_bracket.powi((n - i) as i32);
        diagonal_term += b * c_bar.powi((n - i) as i32);
    }

    let table = MultinomialTable::new(n);
    let pw = cell_powers(&cells, n);
    let mut residual = 0.0;
    for i in r..=n {
        for j in r..=n {
            let (lo, hi) = MultinomIndex::k_range(n, i, j);
            for k in (lo..=hi).rev() {
                if k != i && k != j {
                    residual += term(&table, &pw, k, i, j);
                }
            }
        }
    }
    Ok(Lemma1Terms {
        row_term,
        column_term,
        diagonal_term,
        residual,
    })
}

/// `P{X_{r:n} <= x, Y_{r:n} <= y}` via the equal-rank rearrangement.
pub fn joint_cdf_lemma1(spec: &OrderStatJointSpec, x: f64, y: f64) -> Result<f64> {
    Ok(lemma1_terms(spec, x, y)?.total().clamp(0.0, 1.0))
}

/// Joint CDF for the comonotone kernel `min(u, v)`: the smaller of the two
/// order-statistic marginal CDFs.
pub fn joint_cdf_frechet_upper(
    r: usize,
    n: usize,
    marg_x: &Marginal,
    marg_y: &Marginal,
    x: f64,
    y: f64,
) -> Result<f64> {
    let beta = BetaParams::order_statistic(r, n)?;
    let u = marg_x.cdf(x);
    let v = marg_y.cdf(y);
    Ok(if u <= v { os_cdf_at(beta, u) } else { os_cdf_at(beta, v) })
}

/// Joint pmf of the counts `(#{X_i <= x}, #{Y_i <= y})` for one `(x, y)`,
/// with its upper-right tail sums.
///
/// The Type I mixtures sum the tail `P{N_x >= r, N_y >= s}` over many rank
/// pairs; tabulating it once per point shares the triple sum across ranks.
#[derive(Debug, Clone)]
pub struct CountTails {
    n: usize,
    /// `tail[i * (n + 2) + j] = P{N_x >= i, N_y >= j}`, with a zero border at `n + 1`.
    tail: Vec<f64>,
}

impl CountTails {
    pub fn new(cells: &CellProbs, table: &MultinomialTable) -> Self {
        let n = table.n();
        let pw = cell_powers(cells, n);
        let w = n + 2;
        let mut tail = vec![0.0; w * w];
        for i in (0..=n).rev() {
            for j in (0..=n).rev() {
                let (lo, hi) = MultinomIndex::k_range(n, i, j);
                let mut pmf = 0.0;
                for k in (lo..=hi).rev() {
                    pmf += term(table, &pw, k, i, j);
                }
                tail[i * w + j] = pmf + tail[(i + 1) * w + j] + tail[i * w + j + 1] - tail[(i + 1) * w + j + 1];
            }
        }
        Self { n, tail }
    }

    /// `P{X_{r:n} <= x, Y_{s:n} <= y}`.
    pub fn joint(&self, r: usize, s: usize) -> f64 {
        self.tail[r * (self.n + 2) + s].clamp(0.0, 1.0)
    }
}
