//! The weight-matrix family `H_r` interpolates between independence and the
//! equal-rank mixture `H+`.

use bakerlab::constructions::{baker_weighted, WeightMatrix};
use bakerlab::correlation::{pearson_rho, QuadratureSettings};
use bakerlab::marginals::Marginal;

fn main() -> bakerlab::Result<()> {
    let n = 6;
    let u = Marginal::Uniform01;
    for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let w = WeightMatrix::from_fn(n, |k, l| {
            let diag = if k == l { 1.0 } else { 0.0 };
            (lambda * diag + (1.0 - lambda) / n as f64) / n as f64
        })?;
        let h = baker_weighted(w, u.clone(), u.clone())?;
        let r = pearson_rho(&h, &QuadratureSettings::default())?;
        println!("lambda = {lambda:.2}: rho = {:.6}", r.rho);
    }
    let anti = baker_weighted(WeightMatrix::anti_diagonal(n)?, u.clone(), u)?;
    println!(
        "anti-diagonal: rho = {:.6}",
        pearson_rho(&anti, &QuadratureSettings::default())?.rho
    );
    Ok(())
}
