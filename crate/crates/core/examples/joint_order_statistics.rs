//! Joint CDF of `(X_{r:n}, Y_{s:n})` for a dependent sample, computed from the
//! multinomial triple sum and, for `r = s`, from its row/column/diagonal split.

use bakerlab::copulas::Copula;
use bakerlab::marginals::Marginal;
use bakerlab::orderstat::{cell_probs, joint_cdf_direct, lemma1_terms, OrderStatJointSpec};

fn main() -> bakerlab::Result<()> {
    let kernel = Copula::fgm(0.8)?;
    let (mx, my) = (Marginal::Uniform01, Marginal::ExponentialRate1);
    let (x, y) = (0.6, 1.2);
    let cells = cell_probs(&kernel, &mx, &my, x, y)?;
    println!("cell probabilities at ({x}, {y}): {cells:?}");

    let n = 5;
    println!("P(X_r:5 <= {x}, Y_s:5 <= {y})");
    for r in 1..=n {
        let row: Vec<String> = (1..=n)
            .map(|s| {
                let spec = OrderStatJointSpec::new(n, r, s, kernel.clone(), mx.clone(), my.clone())?;
                Ok(format!("{:.5}", joint_cdf_direct(&spec, x, y)?))
            })
            .collect::<bakerlab::Result<_>>()?;
        println!("  r = {r}: {}", row.join("  "));
    }

    let spec = OrderStatJointSpec::new(n, 3, 3, kernel, mx, my)?;
    let t = lemma1_terms(&spec, x, y)?;
    println!(
        "r = s = 3 split: row {:.6} + column {:.6} + diagonal {:.6} + residual {:.6} = {:.6}",
        t.row_term,
        t.column_term,
        t.diagonal_term,
        t.residual,
        t.total()
    );
    Ok(())
}
