//! Copulas of the componentwise maxima and minima of an FGM sample: axiom
//! checks, the drift towards independence, and their use as Type II kernels.

use bakerlab::constructions::type2_oskernel;
use bakerlab::copulas::{sup_distance_to_product, validate_copula, Copula, ExtremeVariant, OsKernel, UnitSquareFn};
use bakerlab::correlation::{pearson_rho, QuadratureSettings};
use bakerlab::marginals::Marginal;

fn main() -> bakerlab::Result<()> {
    for variant in [ExtremeVariant::MaxMax, ExtremeVariant::MinMin] {
        for n in [1, 2, 5, 20, 100] {
            let c = Copula::order_stat(variant, n, OsKernel::Fgm { alpha: 1.0 })?;
            let report = validate_copula(&c, 128)?;
            println!(
                "{:<24} C(0.5, 0.5) = {:.6}  sup|C - uv| = {:.5}  copula: {}  {}",
                c.label(),
                c.eval(0.5, 0.5),
                sup_distance_to_product(&c, 64)?,
                report.is_copula(),
                report.classification
            );
        }
    }

    let settings = QuadratureSettings::default();
    for variant in [ExtremeVariant::MaxMax, ExtremeVariant::MinMin] {
        let d = type2_oskernel(2, variant, 1.0, Marginal::Uniform01, Marginal::Uniform01)?;
        println!("{}: rho = {:.6}", d.label(), pearson_rho(&d, &settings)?.rho);
    }
    Ok(())
}
