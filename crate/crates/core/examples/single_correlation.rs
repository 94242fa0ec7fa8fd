//! Correlation of one Type II construction, with the quadrature diagnostics.

use bakerlab::constructions::{type2, Pairing};
use bakerlab::copulas::Copula;
use bakerlab::correlation::{pearson_rho, QuadratureSettings};
use bakerlab::marginals::Marginal;

fn main() -> bakerlab::Result<()> {
    let settings = QuadratureSettings::default();
    for kernel in [Copula::fgm(1.0)?, Copula::GumbelLogistic, Copula::FrechetUpper] {
        for n in [1, 2, 5, 10] {
            let dist = type2(
                n,
                kernel.clone(),
                Pairing::Plus,
                Marginal::Uniform01,
                Marginal::ExponentialRate1,
            )?;
            let r = pearson_rho(&dist, &settings)?;
            println!(
                "{:<32} rho = {:.6}  (error estimate {:.1e}, {} nodes per axis)",
                dist.label(),
                r.rho,
                r.abs_error_estimate,
                r.nodes_used
            );
        }
    }
    Ok(())
}
