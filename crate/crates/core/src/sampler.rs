//! Monte Carlo draws from Type I and Type II constructions.
//!
//! Draws are produced in fixed-size chunks. Chunk `c` uses a ChaCha8 stream
//! seeded with the configured seed and stream number `c`, and chunks are
//! concatenated in order, so the output depends only on `(seed, sample_size)`
//! and not on the thread count.

use std::io::Write;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::Pairing;
use crate::copulas::Copula;
use crate::correlation::Family;
use crate::error::{domain, Error, Result};
use crate::marginals::Marginal;
use crate::specfun::{inv_inc_beta, BetaParams};

pub const CHUNK_SIZE: usize = 8192;

/// Minimum number of pairs accepted by [`mc_correlation`].
pub const MIN_MC_SAMPLE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub sample_size: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, sample_size: usize) -> Result<Self> {
        if sample_size == 0 {
            return domain("sample_size must be at least 1");
        }
        Ok(Self { seed, sample_size })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub rho_hat: f64,
    pub std_error: f64,
    pub sample_size: usize,
}

fn chunked<F>(cfg: &SamplerConfig, draw: F) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(f64, f64)> + Sync,
{
    if cfg.sample_size == 0 {
        return domain("sample_size must be at least 1");
    }
    let chunks = cfg.sample_size.div_ceil(CHUNK_SIZE);
    let parts: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let len = CHUNK_SIZE.min(cfg.sample_size - c * CHUNK_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

fn check_kernel(n: usize, kernel: &Copula) -> Result<()> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if !kernel.supports_conditional_sampling() {
        return Err(Error::Unsupported(format!(
            "conditional sampling from {}",
            kernel.label()
        )));
    }
    Ok(())
}

/// Draws from the Type II mixture `G±` by picking a rank uniformly, drawing a
/// kernel pair `(u, v)` and pushing each level through the order-statistic
/// quantile `I^{-1}_{k, n-k+1}`.
pub fn sample_type2(
    n: usize,
    kernel: &Copula,
    pairing: Pairing,
    marg_x: &Marginal,
    marg_y: &Marginal,
    cfg: &SamplerConfig,
) -> Result<Vec<(f64, f64)>> {
    check_kernel(n, kernel)?;
    let betas: Vec<BetaParams> = (1..=n)
        .map(|k| BetaParams::order_statistic(k, n))
        .collect::<Result<_>>()?;
    chunked(cfg, |rng| {
        let k = rng.gen_range(1..=n);
        let u: f64 = rng.sample(Open01);
        let w: f64 = rng.sample(Open01);
        let v = kernel.conditional_quantile(u, w)?;
        let p = inv_inc_beta(betas[k - 1], u)?;
        let q = inv_inc_beta(betas[pairing.partner(k, n) - 1], v)?;
        Ok((marg_x.quantile_unchecked(p), marg_y.quantile_unchecked(q)))
    })
}

/// Draws from the Type I mixture `K±` by sorting each coordinate of `n`
/// kernel pairs and keeping a uniformly chosen rank.
pub fn sample_type1(
    n: usize,
    kernel: &Copula,
    pairing: Pairing,
    marg_x: &Marginal,
    marg_y: &Marginal,
    cfg: &SamplerConfig,
) -> Result<Vec<(f64, f64)>> {
    check_kernel(n, kernel)?;
    chunked(cfg, |rng| {
        let mut us = Vec::with_capacity(n);
        let mut vs = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.sample(Open01);
            let w: f64 = rng.sample(Open01);
            us.push(u);
            vs.push(kernel.conditional_quantile(u, w)?);
        }
        us.sort_by(f64::total_cmp);
        vs.sort_by(f64::total_cmp);
        let r = rng.gen_range(1..=n);
        let x = marg_x.quantile_unchecked(us[r - 1]);
        let y = marg_y.quantile_unchecked(vs[pairing.partner(r, n) - 1]);
        Ok((x, y))
    })
}

/// Samples any table family. `H±` is drawn as Type II with the product kernel.
pub fn sample_family(
    family: Family,
    n: usize,
    kernel: &Copula,
    marg_x: &Marginal,
    marg_y: &Marginal,
    cfg: &SamplerConfig,
) -> Result<Vec<(f64, f64)>> {
    let pairing = family.pairing();
    match family {
        Family::Gplus | Family::Gminus => sample_type2(n, kernel, pairing, marg_x, marg_y, cfg),
        Family::Kplus | Family::Kminus => sample_type1(n, kernel, pairing, marg_x, marg_y, cfg),
        Family::Hplus | Family::Hminus => sample_type2(n, &Copula::Product, pairing, marg_x, marg_y, cfg),
    }
}

/// Sample Pearson correlation with the first-order standard error `(1 - r^2) / sqrt(N)`.
pub fn mc_correlation(pairs: &[(f64, f64)]) -> Result<McEstimate> {
    let n = pairs.len();
    if n < MIN_MC_SAMPLE {
        return domain(format!("need at least {MIN_MC_SAMPLE} pairs, got {n}"));
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx.is_nan() || syy.is_nan() || sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateSample("a coordinate has zero variance".into()));
    }
    let rho_hat = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(McEstimate {
        rho_hat,
        std_error: (1.0 - rho_hat * rho_hat) / nf.sqrt(),
        sample_size: n,
    })
}

/// Writes `# seed=<seed>` followed by an `x,y` CSV.
pub fn write_samples_csv<W: Write>(out: W, seed: u64, pairs: &[(f64, f64)]) -> Result<()> {
    let mut out = out;
    writeln!(out, "# seed={seed}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y"])?;
    for &(x, y) in pairs {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{baker, type1, type2};
    use crate::correlation::{pearson_rho, QuadratureSettings};

    const U: Marginal = Marginal::Uniform01;
    const E: Marginal = Marginal::ExponentialRate1;

    fn cfg(seed: u64, size: usize) -> SamplerConfig {
        SamplerConfig::new(seed, size).unwrap()
    }

    /// Two-sided KS statistic of `xs` against `cdf`.
    fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn deterministic_across_runs_and_chunk_boundaries() {
        let k = Copula::fgm(0.8).unwrap();
        let a = sample_type2(3, &k, Pairing::Plus, &U, &E, &cfg(11, 20_000)).unwrap();
        let b = sample_type2(3, &k, Pairing::Plus, &U, &E, &cfg(11, 20_000)).unwrap();
        assert_eq!(a, b);
        let short = sample_type2(3, &k, Pairing::Plus, &U, &E, &cfg(11, 9_000)).unwrap();
        assert_eq!(&a[..9_000], &short[..]);
        let other = sample_type2(3, &k, Pairing::Plus, &U, &E, &cfg(12, 20_000)).unwrap();
        assert_ne!(a, other);
        let t1a = sample_type1(3, &k, Pairing::Minus, &U, &U, &cfg(5, 1000)).unwrap();
        let t1b = sample_type1(3, &k, Pairing::Minus, &U, &U, &cfg(5, 1000)).unwrap();
        assert_eq!(t1a, t1b);
    }

    #[test]
    fn comonotone_kernel_lands_on_diagonal() {
        for n in [1usize, 4, 9] {
            let pairs = sample_type2(n, &Copula::FrechetUpper, Pairing::Plus, &U, &U, &cfg(3, 5000)).unwrap();
            assert!(pairs.iter().all(|&(x, y)| x == y));
        }
    }

    #[test]
    fn margins_are_uniform() {
        let critical = 1.628 / (100_000f64).sqrt();
        for (seed, pairing) in [(1u64, Pairing::Plus), (2, Pairing::Minus)] {
            let pairs = sample_type2(5, &Copula::fgm(1.0).unwrap(), pairing, &U, &U, &cfg(seed, 100_000)).unwrap();
            let dx = ks_statistic(pairs.iter().map(|p| p.0).collect(), |x| x);
            let dy = ks_statistic(pairs.iter().map(|p| p.1).collect(), |y| y);
            assert!(dx < critical && dy < critical, "{dx} {dy} vs {critical}");
        }
        let pairs = sample_type1(4, &Copula::GumbelLogistic, Pairing::Plus, &U, &E, &cfg(9, 100_000)).unwrap();
        let dx = ks_statistic(pairs.iter().map(|p| p.0).collect(), |x| x);
        let dy = ks_statistic(pairs.iter().map(|p| p.1).collect(), |y| E.cdf(y));
        assert!(dx < critical && dy < critical, "{dx} {dy} vs {critical}");
    }

    fn agrees(pairs: &[(f64, f64)], want: f64) {
        let est = mc_correlation(pairs).unwrap();
        assert!(
            (est.rho_hat - want).abs() <= 3.0 * est.std_error,
            "rho_hat {} vs {want} (se {})",
            est.rho_hat,
            est.std_error
        );
    }

    #[test]
    fn type2_matches_quadrature() {
        let s = QuadratureSettings::default();
        let want = pearson_rho(&baker(3, Pairing::Plus, U, U).unwrap(), &s).unwrap().rho;
        agrees(
            &sample_type2(3, &Copula::Product, Pairing::Plus, &U, &U, &cfg(21, 200_000)).unwrap(),
            want,
        );
        agrees(
            &sample_type2(2, &Copula::fgm(1.0).unwrap(), Pairing::Plus, &U, &U, &cfg(22, 200_000)).unwrap(),
            0.5467,
        );
        let gumbel = type2(3, Copula::GumbelLogistic, Pairing::Minus, U, E).unwrap();
        let want = pearson_rho(&gumbel, &s).unwrap().rho;
        agrees(
            &sample_type2(3, &Copula::GumbelLogistic, Pairing::Minus, &U, &E, &cfg(23, 200_000)).unwrap(),
            want,
        );
    }

    #[test]
    fn type1_matches_quadrature() {
        let fgm = Copula::fgm(1.0).unwrap();
        agrees(
            &sample_type1(2, &fgm, Pairing::Plus, &U, &U, &cfg(31, 200_000)).unwrap(),
            0.5133,
        );
        agrees(
            &sample_type1(4, &Copula::Product, Pairing::Plus, &U, &U, &cfg(32, 200_000)).unwrap(),
            0.6000,
        );
        let k = type1(3, Copula::fgm(-1.0).unwrap(), Pairing::Minus, U, E).unwrap();
        let want = pearson_rho(&k, &QuadratureSettings::default()).unwrap().rho;
        agrees(
            &sample_type1(
                3,
                &Copula::fgm(-1.0).unwrap(),
                Pairing::Minus,
                &U,
                &E,
                &cfg(33, 200_000),
            )
            .unwrap(),
            want,
        );
    }

    #[test]
    fn type1_with_one_draw_is_the_kernel() {
        let fgm = Copula::fgm(0.9).unwrap();
        let pairs = sample_type1(1, &fgm, Pairing::Plus, &U, &U, &cfg(4, 200_000)).unwrap();
        agrees(&pairs, 0.3);
    }

    #[test]
    fn independence_rarely_rejected() {
        let mut within = 0;
        for seed in 0..200u64 {
            let pairs = sample_type2(1, &Copula::Product, Pairing::Plus, &U, &U, &cfg(seed, 2000)).unwrap();
            let est = mc_correlation(&pairs).unwrap();
            if est.rho_hat.abs() <= 3.0 * est.std_error {
                within += 1;
            }
        }
        assert!(within >= 198, "{within}/200");
    }

    #[test]
    fn mc_correlation_examples() {
        let pairs: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, i as f64)).collect();
        let est = mc_correlation(&pairs).unwrap();
        assert!((est.rho_hat - 1.0).abs() < 1e-12 && est.std_error.abs() < 1e-6);
        assert!(mc_correlation(&pairs[..29]).is_err());
        let flat: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, 2.0)).collect();
        assert!(matches!(mc_correlation(&flat), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn config_and_kernel_checks() {
        assert!(SamplerConfig::new(1, 0).is_err());
        let numeric = Copula::order_stat(
            crate::copulas::ExtremeVariant::MinMin,
            2,
            crate::copulas::OsKernel::GeneralNumeric {
                underlying: Box::new(Copula::Product),
                marg_x: U,
                marg_y: U,
            },
        )
        .unwrap();
        assert!(matches!(
            sample_type2(2, &numeric, Pairing::Plus, &U, &U, &cfg(1, 10)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, 7, &[(0.5, 0.25), (1.0, 2.0)]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# seed=7\nx,y\n0.5,0.25\n1,2\n");
    }
}
