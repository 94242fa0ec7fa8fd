//! Recomputes both reference correlation tables and compares each cell with
//! the published value.

use bakerlab::correlation::{correlation_table, MarginalPair, QuadratureSettings};
use bakerlab::reference::{published_rho, TABLE_FAMILIES, TABLE_N};

fn main() -> bakerlab::Result<()> {
    let settings = QuadratureSettings::default();
    for mp in [MarginalPair::UnifUnif, MarginalPair::UnifExp] {
        println!("marginals {mp}");
        print!("{:>8}", "n");
        for n in TABLE_N {
            print!("{n:>9}");
        }
        println!();
        let cells = correlation_table(&TABLE_FAMILIES, &TABLE_N, 1.0, mp, &settings)?;
        let mut worst: f64 = 0.0;
        for row in cells.chunks(TABLE_N.len()) {
            print!("{:>8}", row[0].family);
            for c in row {
                print!("{:>9.4}", c.rho);
                let want = published_rho(c.family, c.n, 1.0, mp).expect("published cell");
                worst = worst.max((c.rho - want).abs());
            }
            println!();
        }
        println!("largest deviation from the published values: {worst:.2e}\n");
    }
    Ok(())
}
