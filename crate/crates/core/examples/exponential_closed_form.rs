//! With two Exponential(1) marginals the correlation of `H+` is
//! `1 - H_n / n`; quadrature reproduces it.

use bakerlab::constructions::baker_plus;
use bakerlab::correlation::{baker_exponential_rho_closed, pearson_rho, QuadratureSettings};
use bakerlab::marginals::Marginal;

fn main() -> bakerlab::Result<()> {
    let e = Marginal::ExponentialRate1;
    println!("{:>4} {:>12} {:>12} {:>10}", "n", "quadrature", "closed form", "diff");
    for n in [1, 2, 3, 5, 10, 20, 50] {
        let q = pearson_rho(&baker_plus(n, e.clone(), e.clone())?, &QuadratureSettings::default())?.rho;
        let c = baker_exponential_rho_closed(n);
        println!("{n:>4} {q:>12.8} {c:>12.8} {:>10.1e}", (q - c).abs());
    }
    Ok(())
}
