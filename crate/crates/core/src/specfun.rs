//! Special functions: the regularized incomplete beta function, its inverse,
//! and the four-cell multinomial coefficient `c(n,k;i,j)`.

use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// Largest `n` for which factorials are kept as exact integers.
pub const EXACT_FACTORIAL_MAX: usize = 20;

const LN_FACTORIAL_TABLE_LEN: usize = 1024;
const CF_MAX_ITER: usize = 300;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const INV_MAX_ITER: usize = 200;
const INV_TOLERANCE: f64 = 1e-12;

/// Shape parameters of a Beta(a, b) law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return domain(format!("beta parameters must be positive, got a={a}, b={b}"));
        }
        Ok(Self { a, b })
    }

    /// Parameters of the `k`-th order statistic of `n` uniforms: Beta(k, n-k+1).
    pub fn order_statistic(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return domain(format!("rank {k} out of range 1..={n}"));
        }
        Self::new(k as f64, (n - k + 1) as f64)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// ln B(a, b).
    pub fn ln_beta(&self) -> f64 {
        ln_gamma_fast(self.a) + ln_gamma_fast(self.b) - ln_gamma_fast(self.a + self.b)
    }

    /// Beta(a, b) density at `p`.
    pub fn density(&self, p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            // Endpoint limits are only needed by the Newton step, which never lands there.
            return 0.0;
        }
        ((self.a - 1.0) * p.ln() + (self.b - 1.0) * (-p).ln_1p() - self.ln_beta()).exp()
    }
}

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE_LEN {
            acc += (k as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// ln(k!), tabulated for small `k`.
pub fn ln_factorial(k: usize) -> f64 {
    match ln_factorial_table().get(k) {
        Some(&v) => v,
        None => ln_gamma(k as f64 + 1.0),
    }
}

/// ln Γ(x) with integer arguments served from the factorial table.
fn ln_gamma_fast(x: f64) -> f64 {
    if x.fract() == 0.0 && x >= 1.0 && (x as usize) < LN_FACTORIAL_TABLE_LEN {
        ln_factorial(x as usize - 1)
    } else {
        ln_gamma(x)
    }
}

fn exact_factorial(k: usize) -> u64 {
    debug_assert!(k <= EXACT_FACTORIAL_MAX);
    (1..=k as u64).product()
}

/// Regularized incomplete beta function `I_{a,b}(p)`.
pub fn inc_beta(params: BetaParams, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("incomplete beta argument {p} outside [0, 1]"));
    }
    Ok(inc_beta_unchecked(params, p))
}

pub(crate) fn inc_beta_unchecked(params: BetaParams, p: f64) -> f64 {
    let BetaParams { a, b } = params;
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    // Exact shortcuts: I_{a,1}(p) = p^a and I_{1,b}(p) = 1 - (1-p)^b.
    if b == 1.0 {
        return p.powf(a);
    }
    if a == 1.0 {
        return -((b * (-p).ln_1p()).exp_m1());
    }
    let ln_front = a * p.ln() + b * (-p).ln_1p() - params.ln_beta();
    if p > a / (a + b) {
        1.0 - (ln_front.exp() / b) * beta_continued_fraction(b, a, 1.0 - p)
    } else {
        (ln_front.exp() / a) * beta_continued_fraction(a, b, p)
    }
}

/// Continued fraction for the incomplete beta, modified Lentz evaluation.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Inverse of `p -> I_{a,b}(p)`.
///
/// Bisection on `[0, 1]` with Newton steps taken whenever they stay inside the
/// current bracket. Returns once the step has stalled at machine precision and
/// `|I(p) - q| <= 1e-12`.
pub fn inv_inc_beta(params: BetaParams, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return domain(format!("incomplete beta level {q} outside [0, 1]"));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let BetaParams { a, b } = params;
    // Closed forms for the shapes that order statistics of extremes produce.
    if b == 1.0 {
        return Ok(q.powf(1.0 / a));
    }
    if a == 1.0 {
        return Ok(-(((-q).ln_1p() / b).exp_m1()));
    }

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut p = a / (a + b);
    let mut last_residual = f64::INFINITY;
    for _ in 0..INV_MAX_ITER {
        let residual = inc_beta_unchecked(params, p) - q;
        last_residual = residual;
        if residual == 0.0 {
            return Ok(p);
        }
        if residual > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let density = params.density(p);
        let newton = if density > 0.0 {
            p - residual / density
        } else {
            f64::NAN
        };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let stalled =
            (next - p).abs() <= 4.0 * f64::EPSILON * p.max(f64::MIN_POSITIVE) || hi - lo <= 4.0 * f64::EPSILON * hi;
        p = next;
        if stalled && residual.abs() <= INV_TOLERANCE {
            return Ok(p);
        }
    }
    if last_residual.abs() <= INV_TOLERANCE {
        return Ok(p);
    }
    Err(Error::Convergence {
        what: "inverse incomplete beta",
        iterations: INV_MAX_ITER,
    })
}

/// Index `(n, k, i, j)` of the multinomial coefficient `c(n,k;i,j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultinomIndex {
    pub n: usize,
    pub k: usize,
    pub i: usize,
    pub j: usize,
}

impl MultinomIndex {
    pub fn new(n: usize, k: usize, i: usize, j: usize) -> Result<Self> {
        if n == 0 || i > n || j > n {
            return domain(format!("need 0 <= i, j <= n with n >= 1, got n={n}, i={i}, j={j}"));
        }
        let (lo, hi) = Self::k_range(n, i, j);
        if k < lo || k > hi {
            return domain(format!("k={k} outside [{lo}, {hi}] for n={n}, i={i}, j={j}"));
        }
        Ok(Self { n, k, i, j })
    }

    /// Admissible `k` range `[max(0, i+j-n), min(i, j)]`.
    pub fn k_range(n: usize, i: usize, j: usize) -> (usize, usize) {
        ((i + j).saturating_sub(n), i.min(j))
    }

    /// Cell counts `(k, i-k, j-k, n-i-j+k)`.
    pub fn cells(&self) -> [usize; 4] {
        [
            self.k,
            self.i - self.k,
            self.j - self.k,
            self.n + self.k - self.i - self.j,
        ]
    }
}

/// Value of `c(n,k;i,j)`, exact when `n` is small enough.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multinom {
    Exact(u64),
    Log(f64),
}

impl Multinom {
    pub fn value(self) -> f64 {
        match self {
            Multinom::Exact(v) => v as f64,
            Multinom::Log(l) => l.exp(),
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Multinom::Exact(v) => (v as f64).ln(),
            Multinom::Log(l) => l,
        }
    }
}

/// `c(n,k;i,j) = n! / (k! (i-k)! (j-k)! (n-i-j+k)!)`.
pub fn multinom_coeff(idx: MultinomIndex) -> Multinom {
    let cells = idx.cells();
    if idx.n <= EXACT_FACTORIAL_MAX {
        let denom: u64 = cells.iter().map(|&c| exact_factorial(c)).product();
        Multinom::Exact(exact_factorial(idx.n) / denom)
    } else {
        let ln = ln_factorial(idx.n) - cells.iter().map(|&c| ln_factorial(c)).sum::<f64>();
        Multinom::Log(ln)
    }
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_FACTORIAL_MAX {
        (exact_factorial(n) / (exact_factorial(k) * exact_factorial(n - k))) as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
    }
}

/// Harmonic number `1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}
