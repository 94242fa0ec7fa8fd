//! Marginals given as a quantile table (here a discretised Beta(2, 5)) plug
//! into every construction.

use bakerlab::constructions::{baker_plus, type2_plus};
use bakerlab::copulas::Copula;
use bakerlab::correlation::{pearson_rho, QuadratureSettings};
use bakerlab::marginals::{Marginal, QuantileTable};
use bakerlab::specfun::{inv_inc_beta, BetaParams};

fn main() -> bakerlab::Result<()> {
    let beta = BetaParams::new(2.0, 5.0)?;
    let mut csv = String::from("p,value\n");
    for i in 0..=256 {
        let p = i as f64 / 256.0;
        csv.push_str(&format!("{p},{}\n", inv_inc_beta(beta, p)?));
    }
    let table = QuantileTable::from_csv_reader(csv.as_bytes())?;
    let m = Marginal::QuantileTable(table);
    let (mean, var) = m.moments()?;
    println!(
        "tabulated marginal: mean {mean:.5} (exact {:.5}), variance {var:.6} (exact {:.6})",
        2.0 / 7.0,
        10.0 / 392.0
    );

    let settings = QuadratureSettings::new(128, 3, 1e-5)?;
    for n in [2, 5] {
        let h = baker_plus(n, m.clone(), Marginal::Uniform01)?;
        let g = type2_plus(n, Copula::fgm(1.0)?, m.clone(), Marginal::Uniform01)?;
        println!(
            "n={n}: H+ rho {:.5}, G+ rho {:.5}",
            pearson_rho(&h, &settings)?.rho,
            pearson_rho(&g, &settings)?.rho
        );
    }
    Ok(())
}
