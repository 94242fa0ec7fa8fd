//! Grid checks of the copula axioms for the built-in copulas, including the
//! numerically composed minimum copula over a non-uniform parent.

use bakerlab::copulas::{validate_copula, Copula, ExtremeVariant, OsKernel, UnitSquareFn};
use bakerlab::marginals::Marginal;

fn main() -> bakerlab::Result<()> {
    let numeric = Copula::order_stat(
        ExtremeVariant::MinMin,
        3,
        OsKernel::GeneralNumeric {
            underlying: Box::new(Copula::GumbelLogistic),
            marg_x: Marginal::Uniform01,
            marg_y: Marginal::ExponentialRate1,
        },
    )?;
    let copulas = [
        Copula::Product,
        Copula::fgm(0.7)?,
        Copula::fgm(-1.0)?,
        Copula::GumbelLogistic,
        Copula::FrechetUpper,
        Copula::FrechetLower,
        Copula::order_stat(ExtremeVariant::MaxMax, 3, OsKernel::GumbelLogistic)?,
        numeric,
    ];
    println!(
        "{:<34} {:>10} {:>12} {:>10} {:>8}",
        "copula", "boundary", "min volume", "frechet", "class"
    );
    for c in &copulas {
        let r = validate_copula(c, 256)?;
        println!(
            "{:<34} {:>10.1e} {:>12.1e} {:>10.1e} {:>8}",
            c.label(),
            r.max_boundary_violation,
            r.min_rectangle_volume,
            r.max_frechet_violation,
            r.classification
        );
    }

    // a function that is not a copula: C(1, v) != v
    let broken = |u: f64, v: f64| u * v / (1.0 + u - u * v);
    let r = validate_copula(&broken, 64)?;
    println!(
        "uv/(1+u-uv): boundary violation {:.3}, copula: {}",
        r.max_boundary_violation,
        r.is_copula()
    );
    println!("gumbel at (0.5, 0.5): {}", Copula::GumbelLogistic.eval(0.5, 0.5));
    Ok(())
}
