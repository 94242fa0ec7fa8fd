//! Under the comonotone kernel both mixtures collapse back to `min(u, v)`,
//! and the joint law of two equal-rank order statistics has a one-term form.

use bakerlab::constructions::{type1_plus, type2_plus};
use bakerlab::copulas::Copula;
use bakerlab::marginals::Marginal;
use bakerlab::orderstat::{joint_cdf_direct, joint_cdf_frechet_upper, OrderStatJointSpec};

fn main() -> bakerlab::Result<()> {
    let u = Marginal::Uniform01;
    for n in [2, 5, 12] {
        let k = type1_plus(n, Copula::FrechetUpper, u.clone(), u.clone())?;
        let g = type2_plus(n, Copula::FrechetUpper, u.clone(), u.clone())?;
        let mut worst: f64 = 0.0;
        for i in 0..=64 {
            for j in 0..=64 {
                let (x, y) = (i as f64 / 64.0, j as f64 / 64.0);
                worst = worst
                    .max((k.cdf(x, y) - x.min(y)).abs())
                    .max((g.cdf(x, y) - x.min(y)).abs());
            }
        }
        println!("n = {n:>2}: max |mixture - min(u, v)| = {worst:.1e}");
    }

    let e = Marginal::ExponentialRate1;
    let (n, r) = (6, 3);
    let spec = OrderStatJointSpec::new(n, r, r, Copula::FrechetUpper, u.clone(), e.clone())?;
    for (x, y) in [(0.2, 0.5), (0.5, 0.5), (0.8, 2.0)] {
        println!(
            "P(X_3:6 <= {x}, Y_3:6 <= {y}): triple sum {:.12}, closed form {:.12}",
            joint_cdf_direct(&spec, x, y)?,
            joint_cdf_frechet_upper(r, n, &u, &e, x, y)?
        );
    }
    Ok(())
}
