//! Univariate marginals and the order-statistic marginals `F^{k:n}`.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::error::{domain, Result};
use crate::specfun::{inc_beta_unchecked, BetaParams};

/// Value returned by the Exponential(1) quantile at `u = 1`.
///
/// Open quadrature rules never evaluate there; samplers and grid validation may.
pub const EXPONENTIAL_QUANTILE_CAP: f64 = 40.0;

/// Fewest grid points a quantile table needs before its moments are trusted.
pub const MIN_TABLE_POINTS_FOR_MOMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Marginal {
    Uniform01,
    ExponentialRate1,
    QuantileTable(QuantileTable),
}

/// A continuous marginal given by a piecewise-linear quantile function.
///
/// Below the first value the CDF is 0 and above the last it is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileTable {
    probs: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct TableRow {
    p: f64,
    value: f64,
}

impl QuantileTable {
    pub fn new(probs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if probs.len() != values.len() {
            return domain("quantile table columns differ in length");
        }
        if probs.len() < 2 {
            return domain("quantile table needs at least two points");
        }
        if probs.iter().chain(&values).any(|v| !v.is_finite()) {
            return domain("quantile table entries must be finite");
        }
        if probs[0] < 0.0 || probs[probs.len() - 1] > 1.0 {
            return domain("quantile table probabilities must lie in [0, 1]");
        }
        let increasing = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&probs) || !increasing(&values) {
            return domain("quantile table columns must be strictly increasing");
        }
        Ok(Self { probs, values })
    }

    /// Reads a `p,value` CSV with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "value" {
            return domain(format!(
                "expected header `p,value`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ));
        }
        let mut probs = Vec::new();
        let mut values = Vec::new();
        for row in rdr.deserialize() {
            let row: TableRow = row?;
            probs.push(row.p);
            values.push(row.value);
        }
        Self::new(probs, values)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn cdf(&self, x: f64) -> f64 {
        let last = self.values.len() - 1;
        if x < self.values[0] {
            return 0.0;
        }
        if x >= self.values[last] {
            return 1.0;
        }
        let idx = self.values.partition_point(|&v| v <= x) - 1;
        let (x0, x1) = (self.values[idx], self.values[idx + 1]);
        let (p0, p1) = (self.probs[idx], self.probs[idx + 1]);
        p0 + (p1 - p0) * (x - x0) / (x1 - x0)
    }

    fn segment(&self, u: f64) -> Option<usize> {
        let last = self.probs.len() - 1;
        if u < self.probs[0] || u > self.probs[last] {
            return None;
        }
        let idx = self.probs.partition_point(|&p| p <= u);
        Some(idx.clamp(1, last) - 1)
    }

    fn quantile(&self, u: f64) -> f64 {
        let last = self.probs.len() - 1;
        if u <= self.probs[0] {
            return self.values[0];
        }
        if u >= self.probs[last] {
            return self.values[last];
        }
        let idx = self.segment(u).expect("u is inside the table");
        let (x0, x1) = (self.values[idx], self.values[idx + 1]);
        let (p0, p1) = (self.probs[idx], self.probs[idx + 1]);
        x0 + (x1 - x0) * (u - p0) / (p1 - p0)
    }

    fn quantile_derivative(&self, u: f64) -> f64 {
        match self.segment(u) {
            Some(idx) => (self.values[idx + 1] - self.values[idx]) / (self.probs[idx + 1] - self.probs[idx]),
            None => 0.0,
        }
    }

    /// First two moments of the piecewise-linear quantile function, with flat
    /// extensions to `u = 0` and `u = 1`. The mean is the trapezoid sum; the
    /// second moment is integrated exactly on each segment so that it matches
    /// the law used by the CDF and quantile.
    fn moments(&self) -> Result<(f64, f64)> {
        if self.len() < MIN_TABLE_POINTS_FOR_MOMENTS {
            return domain(format!(
                "quantile table has {} points; moments need at least {MIN_TABLE_POINTS_FOR_MOMENTS}",
                self.len()
            ));
        }
        let mut knots: Vec<(f64, f64)> = Vec::with_capacity(self.len() + 2);
        if self.probs[0] > 0.0 {
            knots.push((0.0, self.values[0]));
        }
        knots.extend(self.probs.iter().copied().zip(self.values.iter().copied()));
        if self.probs[self.len() - 1] < 1.0 {
            knots.push((1.0, self.values[self.len() - 1]));
        }
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for w in knots.windows(2) {
            let ((p0, x0), (p1, x1)) = (w[0], w[1]);
            let h = p1 - p0;
            m1 += 0.5 * h * (x0 + x1);
            m2 += h * (x0 * x0 + x0 * x1 + x1 * x1) / 3.0;
        }
        Ok((m1, m2 - m1 * m1))
    }
}

impl Marginal {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Marginal::Uniform01 => x.clamp(0.0, 1.0),
            Marginal::ExponentialRate1 => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Marginal::QuantileTable(t) => t.cdf(x),
        }
    }

    /// Generalized inverse of the CDF.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return domain(format!("quantile level {u} outside [0, 1]"));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        match self {
            Marginal::Uniform01 => u,
            Marginal::ExponentialRate1 => {
                if u >= 1.0 {
                    EXPONENTIAL_QUANTILE_CAP
                } else {
                    -(-u).ln_1p()
                }
            }
            Marginal::QuantileTable(t) => t.quantile(u),
        }
    }

    /// dQ/du, used as the Jacobian of the probability-integral substitution.
    pub fn quantile_derivative(&self, u: f64) -> f64 {
        match self {
            Marginal::Uniform01 => 1.0,
            Marginal::ExponentialRate1 => 1.0 / (1.0 - u),
            Marginal::QuantileTable(t) => t.quantile_derivative(u),
        }
    }

    /// `(mean, variance)`.
    pub fn moments(&self) -> Result<(f64, f64)> {
        match self {
            Marginal::Uniform01 => Ok((0.5, 1.0 / 12.0)),
            Marginal::ExponentialRate1 => Ok((1.0, 1.0)),
            Marginal::QuantileTable(t) => t.moments(),
        }
    }

    /// Upper end of the support; the CDF there is 1.
    pub fn support_max(&self) -> f64 {
        match self {
            Marginal::Uniform01 => 1.0,
            Marginal::ExponentialRate1 => f64::INFINITY,
            Marginal::QuantileTable(t) => t.values[t.values.len() - 1],
        }
    }

    /// Lower end of the support; the CDF there is 0.
    pub fn support_min(&self) -> f64 {
        match self {
            Marginal::Uniform01 | Marginal::ExponentialRate1 => 0.0,
            Marginal::QuantileTable(t) => t.values[0],
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Marginal::Uniform01 => "unif",
            Marginal::ExponentialRate1 => "exp",
            Marginal::QuantileTable(_) => "table",
        }
    }
}

/// The `k`-th of `n` order statistics of a marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatMarginal {
    base: Marginal,
    k: usize,
    beta: BetaParams,
}

impl OrderStatMarginal {
    pub fn new(base: Marginal, k: usize, n: usize) -> Result<Self> {
        let beta = BetaParams::order_statistic(k, n)?;
        Ok(Self { base, k, beta })
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &Marginal {
        &self.base
    }

    /// `F^{k:n}(x) = I_{k, n-k+1}(F(x))`.
    pub fn cdf(&self, x: f64) -> f64 {
        os_cdf_at(self.beta, self.base.cdf(x))
    }
}

/// `I_{k, n-k+1}(p)` for an already transformed level `p = F(x)`.
pub(crate) fn os_cdf_at(beta: BetaParams, p: f64) -> f64 {
    inc_beta_unchecked(beta, p)
}

/// Convenience wrapper around [`OrderStatMarginal::cdf`].
pub fn os_cdf(base: &Marginal, k: usize, n: usize, x: f64) -> Result<f64> {
    Ok(OrderStatMarginal::new(base.clone(), k, n)?.cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::binomial;

    fn binomial_tail(k: usize, n: usize, t: f64) -> f64 {
        (k..=n)
            .map(|i| binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
            .sum()
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(Marginal::Uniform01.cdf(0.3), 0.3);
        assert!((Marginal::ExponentialRate1.cdf(2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(Marginal::Uniform01.cdf(-1.0), 0.0);
        assert_eq!(Marginal::Uniform01.cdf(3.0), 1.0);
        assert_eq!(Marginal::ExponentialRate1.cdf(-2.0), 0.0);
        assert_eq!(Marginal::ExponentialRate1.cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(Marginal::Uniform01.quantile(0.42).unwrap(), 0.42);
        assert!((Marginal::ExponentialRate1.quantile(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(Marginal::ExponentialRate1.quantile(0.0).unwrap(), 0.0);
        assert_eq!(
            Marginal::ExponentialRate1.quantile(1.0).unwrap(),
            EXPONENTIAL_QUANTILE_CAP
        );
        assert!(Marginal::Uniform01.quantile(1.5).is_err());
        assert!(Marginal::ExponentialRate1.quantile(-0.1).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let table = QuantileTable::new(vec![0.0, 0.25, 0.5, 1.0], vec![-1.0, 0.0, 2.0, 3.0]).unwrap();
        let cases = [
            (Marginal::Uniform01, vec![0.01, 0.3, 0.99]),
            (Marginal::ExponentialRate1, vec![0.001, 0.7, 5.0, 20.0]),
            (Marginal::QuantileTable(table), vec![-0.5, 0.1, 1.7, 2.9]),
        ];
        for (m, xs) in cases {
            for x in xs {
                let back = m.quantile(m.cdf(x)).unwrap();
                // F(x) = 1 - e^{-x} carries an absolute error of ~1e-16, so Q amplifies it by e^x
                let tol = 1e-10 * m.quantile_derivative(m.cdf(x)).max(1.0);
                assert!((back - x).abs() < tol, "{m:?} x={x} back={back}");
            }
        }
    }

    #[test]
    fn os_cdf_examples() {
        let u = Marginal::Uniform01;
        assert!((os_cdf(&u, 2, 2, 0.5).unwrap() - binomial_tail(2, 2, 0.5)).abs() < 1e-15);
        assert!((os_cdf(&u, 2, 2, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((os_cdf(&u, 1, 1, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!((os_cdf(&u, 1, 2, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(os_cdf(&u, 0, 2, 0.5).is_err());
        assert!(os_cdf(&u, 3, 2, 0.5).is_err());
    }

    #[test]
    fn os_cdf_matches_binomial_sum() {
        let u = Marginal::Uniform01;
        for n in 1..=10 {
            for k in 1..=n {
                let os = OrderStatMarginal::new(u.clone(), k, n).unwrap();
                for step in 0..100 {
                    let x = (step as f64 + 0.5) / 100.0;
                    assert!((os.cdf(x) - binomial_tail(k, n, x)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn baker_margin_identity() {
        for m in [Marginal::Uniform01, Marginal::ExponentialRate1] {
            for n in [1usize, 2, 5, 13, 20] {
                for step in 0..50 {
                    let x = step as f64 / 20.0;
                    let avg: f64 = (1..=n).map(|k| os_cdf(&m, k, n, x).unwrap()).sum::<f64>() / n as f64;
                    assert!((avg - m.cdf(x)).abs() < 1e-12, "{m:?} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn moments_examples() {
        assert_eq!(Marginal::Uniform01.moments().unwrap(), (0.5, 1.0 / 12.0));
        assert_eq!(Marginal::ExponentialRate1.moments().unwrap(), (1.0, 1.0));
        let probs: Vec<f64> = (0..1024).map(|i| i as f64 / 1023.0).collect();
        let table = QuantileTable::new(probs.clone(), probs).unwrap();
        let (mean, var) = Marginal::QuantileTable(table).moments().unwrap();
        assert!((mean - 0.5).abs() < 1e-4);
        assert!((var - 1.0 / 12.0).abs() < 1e-4);
    }

    #[test]
    fn coarse_table_moments_rejected() {
        let probs: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
        let table = QuantileTable::new(probs.clone(), probs).unwrap();
        assert!(Marginal::QuantileTable(table).moments().is_err());
    }

    #[test]
    fn table_validation() {
        assert!(QuantileTable::new(vec![0.0, 0.5, 0.5], vec![0.0, 1.0, 2.0]).is_err());
        assert!(QuantileTable::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 1.0]).is_err());
        assert!(QuantileTable::new(vec![0.0, 1.5], vec![0.0, 1.0]).is_err());
        assert!(QuantileTable::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn table_from_csv() {
        let text = "p,value\n0.0,1.0\n0.5,2.0\n1.0,4.0\n";
        let t = QuantileTable::from_csv_reader(text.as_bytes()).unwrap();
        let m = Marginal::QuantileTable(t);
        assert_eq!(m.cdf(3.0), 0.75);
        assert_eq!(m.quantile(0.25).unwrap(), 1.5);
        assert_eq!(m.quantile_derivative(0.75), 4.0);

        assert!(QuantileTable::from_csv_reader("q,value\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(QuantileTable::from_csv_reader("p,value\n0,1\n1,oops\n".as_bytes()).is_err());
    }
}
