use proptest::prelude::*;

use bakerlab::constructions::{baker, baker_weighted, type1, type2, Pairing, WeightMatrix};
use bakerlab::copulas::{Copula, ExtremeVariant, OsKernel, UnitSquareFn};
use bakerlab::marginals::{os_cdf, Marginal};
use bakerlab::sampler::{mc_correlation, sample_type2, SamplerConfig};
use bakerlab::specfun::{inc_beta, inv_inc_beta, multinom_coeff, BetaParams, MultinomIndex};

const U: Marginal = Marginal::Uniform01;
const E: Marginal = Marginal::ExponentialRate1;

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn alpha() -> impl Strategy<Value = f64> {
    -1.0..=1.0f64
}

fn copula() -> impl Strategy<Value = Copula> {
    prop_oneof![
        Just(Copula::Product),
        alpha().prop_map(|a| Copula::fgm(a).unwrap()),
        Just(Copula::GumbelLogistic),
        Just(Copula::FrechetUpper),
        Just(Copula::FrechetLower),
        (1usize..8, alpha()).prop_map(|(n, a)| Copula::order_stat(
            ExtremeVariant::MaxMax,
            n,
            OsKernel::Fgm { alpha: a }
        )
        .unwrap()),
        (1usize..8, alpha()).prop_map(|(n, a)| Copula::order_stat(
            ExtremeVariant::MinMin,
            n,
            OsKernel::Fgm { alpha: a }
        )
        .unwrap()),
        (1usize..8).prop_map(|n| Copula::order_stat(ExtremeVariant::MaxMax, n, OsKernel::GumbelLogistic).unwrap()),
        (1usize..8).prop_map(|n| Copula::order_stat(ExtremeVariant::MinMin, n, OsKernel::GumbelLogistic).unwrap()),
    ]
}

fn samplable_copula() -> impl Strategy<Value = Copula> {
    prop_oneof![
        Just(Copula::Product),
        alpha().prop_map(|a| Copula::fgm(a).unwrap()),
        Just(Copula::GumbelLogistic),
    ]
}

fn pairing() -> impl Strategy<Value = Pairing> {
    prop_oneof![Just(Pairing::Plus), Just(Pairing::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inc_beta_is_a_cdf(a in 0.2..30.0f64, b in 0.2..30.0f64, p in unit(), q in unit()) {
        let params = BetaParams::new(a, b).unwrap();
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let (flo, fhi) = (inc_beta(params, lo).unwrap(), inc_beta(params, hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&flo) && (0.0..=1.0).contains(&fhi));
        prop_assert!(flo <= fhi + 1e-14);
    }

    #[test]
    fn inc_beta_symmetry(a in 0.2..30.0f64, b in 0.2..30.0f64, p in unit()) {
        let ab = inc_beta(BetaParams::new(a, b).unwrap(), p).unwrap();
        let ba = inc_beta(BetaParams::new(b, a).unwrap(), 1.0 - p).unwrap();
        prop_assert!((ab + ba - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_inc_beta_round_trip(k in 1usize..40, extra in 0usize..40, q in 1e-9..(1.0 - 1e-9f64)) {
        let n = k + extra;
        let params = BetaParams::order_statistic(k, n).unwrap();
        let p = inv_inc_beta(params, q).unwrap();
        prop_assert!((inc_beta(params, p).unwrap() - q).abs() < 1e-9);
    }

    #[test]
    fn multinomial_totality(n in 1usize..25, w in prop::array::uniform4(0.01..1.0f64)) {
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let mut total = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let (lo, hi) = MultinomIndex::k_range(n, i, j);
                for k in lo..=hi {
                    let idx = MultinomIndex::new(n, k, i, j).unwrap();
                    let c = idx.cells();
                    let mut term = multinom_coeff(idx).value();
                    for (pi, ci) in p.iter().zip(c) {
                        term *= pi.powi(ci as i32);
                    }
                    total += term;
                }
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_statistic_cdfs_average_to_parent(n in 1usize..30, x in 0.0..8.0f64) {
        let avg: f64 = (1..=n).map(|k| os_cdf(&E, k, n, x).unwrap()).sum::<f64>() / n as f64;
        prop_assert!((avg - E.cdf(x)).abs() < 1e-12);
    }

    #[test]
    fn copulas_within_frechet_bounds(c in copula(), u in unit(), v in unit()) {
        let x = c.eval(u, v);
        prop_assert!(x >= (u + v - 1.0).max(0.0) - 1e-12);
        prop_assert!(x <= u.min(v) + 1e-12);
    }

    #[test]
    fn copulas_are_two_increasing(c in copula(), a in unit(), b in unit(), p in unit(), q in unit()) {
        let (u1, u2) = if a <= b { (a, b) } else { (b, a) };
        let (v1, v2) = if p <= q { (p, q) } else { (q, p) };
        let vol = c.eval(u2, v2) - c.eval(u2, v1) - c.eval(u1, v2) + c.eval(u1, v1);
        prop_assert!(vol >= -1e-12, "{} volume {vol}", c.label());
    }

    #[test]
    fn conditional_quantile_inverts_partial_derivative(c in samplable_copula(), u in 0.01..0.99f64, w in 0.01..0.99f64) {
        let v = c.conditional_quantile(u, w).unwrap();
        let h = 1e-6;
        let partial = (c.eval(u + h, v) - c.eval(u - h, v)) / (2.0 * h);
        prop_assert!((partial - w).abs() < 1e-5, "{}: {partial} vs {w}", c.label());
    }

    #[test]
    fn type2_product_kernel_is_baker(n in 1usize..12, pr in pairing(), x in unit(), y in 0.0..6.0f64) {
        let g = type2(n, Copula::Product, pr, U, E).unwrap();
        let h = baker(n, pr, U, E).unwrap();
        prop_assert!((g.cdf(x, y) - h.cdf(x, y)).abs() < 1e-14);
    }

    #[test]
    fn type1_product_kernel_is_baker(n in 1usize..7, pr in pairing(), x in unit(), y in 0.0..6.0f64) {
        let k = type1(n, Copula::Product, pr, U, E).unwrap();
        let h = baker(n, pr, U, E).unwrap();
        prop_assert!((k.cdf(x, y) - h.cdf(x, y)).abs() < 1e-10);
    }

    #[test]
    fn constructions_recover_margins(n in 1usize..9, c in samplable_copula(), pr in pairing(), x in unit(), y in 0.0..6.0f64) {
        for d in [type1(n, c.clone(), pr, U, E).unwrap(), type2(n, c.clone(), pr, U, E).unwrap()] {
            prop_assert!((d.cdf(x, f64::INFINITY) - x).abs() < 1e-10, "{}", d.label());
            prop_assert!((d.cdf(1.0, y) - E.cdf(y)).abs() < 1e-10, "{}", d.label());
            prop_assert!(d.cdf(x, y) >= 0.0 && d.cdf(x, y) <= x.min(E.cdf(y)) + 1e-12);
        }
    }

    #[test]
    fn weighted_mixtures_recover_margins(perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), lambda in unit(), x in unit(), y in unit()) {
        // a convex combination of a permutation matrix and the uniform matrix, scaled by 1/n
        let n = perm.len();
        let w = WeightMatrix::from_fn(n, |k, l| {
            let p = if perm[k - 1] == l - 1 { 1.0 } else { 0.0 };
            (lambda * p + (1.0 - lambda) / n as f64) / n as f64
        }).unwrap();
        let h = baker_weighted(w, U, U).unwrap();
        prop_assert!((h.cdf(x, 1.0) - x).abs() < 1e-12);
        prop_assert!((h.cdf(1.0, y) - y).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), n in 1usize..6, c in samplable_copula(), pr in pairing()) {
        let cfg = SamplerConfig::new(seed, 300).unwrap();
        let a = sample_type2(n, &c, pr, &U, &E, &cfg).unwrap();
        let b = sample_type2(n, &c, pr, &U, &E, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sample_correlation_is_affine_invariant(seed in any::<u64>(), scale in 0.1..10.0f64, shift in -5.0..5.0f64) {
        let cfg = SamplerConfig::new(seed, 500).unwrap();
        let pairs = sample_type2(3, &Copula::fgm(0.5).unwrap(), Pairing::Plus, &U, &U, &cfg).unwrap();
        let moved: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (scale * x + shift, y - shift)).collect();
        let a = mc_correlation(&pairs).unwrap();
        let b = mc_correlation(&moved).unwrap();
        prop_assert!((a.rho_hat - b.rho_hat).abs() < 1e-10);
        prop_assert!(a.std_error >= 0.0);
    }
}
