//! Seeded Monte Carlo draws from Type I and Type II mixtures, checked against
//! the quadrature correlation, and a CSV export of the first draws.

use bakerlab::constructions::{type1, type2, Pairing};
use bakerlab::copulas::Copula;
use bakerlab::correlation::{pearson_rho, QuadratureSettings};
use bakerlab::marginals::Marginal;
use bakerlab::sampler::{mc_correlation, sample_type1, sample_type2, write_samples_csv, SamplerConfig};

fn main() -> bakerlab::Result<()> {
    let (u, e) = (Marginal::Uniform01, Marginal::ExponentialRate1);
    let cfg = SamplerConfig::new(2024, 400_000)?;
    let settings = QuadratureSettings::default();
    let kernel = Copula::fgm(1.0)?;

    for n in [2, 6] {
        let quad = pearson_rho(
            &type2(n, kernel.clone(), Pairing::Plus, u.clone(), e.clone())?,
            &settings,
        )?
        .rho;
        let est = mc_correlation(&sample_type2(n, &kernel, Pairing::Plus, &u, &e, &cfg)?)?;
        println!(
            "G+ n={n}: quadrature {quad:.5}, Monte Carlo {:.5} +- {:.5} (z = {:+.2})",
            est.rho_hat,
            est.std_error,
            (est.rho_hat - quad) / est.std_error
        );

        let quad = pearson_rho(
            &type1(n, kernel.clone(), Pairing::Plus, u.clone(), e.clone())?,
            &settings,
        )?
        .rho;
        let est = mc_correlation(&sample_type1(n, &kernel, Pairing::Plus, &u, &e, &cfg)?)?;
        println!(
            "K+ n={n}: quadrature {quad:.5}, Monte Carlo {:.5} +- {:.5} (z = {:+.2})",
            est.rho_hat,
            est.std_error,
            (est.rho_hat - quad) / est.std_error
        );
    }

    let few = sample_type2(
        3,
        &Copula::GumbelLogistic,
        Pairing::Minus,
        &u,
        &e,
        &SamplerConfig::new(1, 5)?,
    )?;
    write_samples_csv(std::io::stdout(), 1, &few)?;
    Ok(())
}
