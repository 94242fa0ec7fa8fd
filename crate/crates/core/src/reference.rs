//! Published correlation tables for the six Baker-type families with an
//! FGM(1) kernel.

use crate::correlation::{Family, MarginalPair};

/// Sample sizes heading the table columns.
pub const TABLE_N: [usize; 8] = [2, 4, 6, 8, 10, 12, 15, 20];

/// Row order of the tables.
pub const TABLE_FAMILIES: [Family; 6] = [
    Family::Gplus,
    Family::Kplus,
    Family::Hplus,
    Family::Gminus,
    Family::Kminus,
    Family::Hminus,
];

/// Uniform x Uniform marginals.
pub const UNIFORM_UNIFORM: [[f64; 8]; 6] = [
    [0.5467, 0.7258, 0.8039, 0.8475, 0.8753, 0.8945, 0.9144, 0.9348],
    [0.5133, 0.6915, 0.7761, 0.8247, 0.8561, 0.8779, 0.9006, 0.9241],
    [0.3333, 0.6000, 0.7143, 0.7778, 0.8182, 0.8462, 0.8750, 0.9048],
    [-0.5467, -0.7258, -0.8039, -0.8475, -0.8753, -0.8945, -0.9144, -0.9348],
    [-0.5133, -0.6915, -0.7761, -0.8247, -0.8561, -0.8779, -0.9006, -0.9241],
    [-0.3333, -0.6000, -0.7143, -0.7778, -0.8182, -0.8462, -0.8750, -0.9048],
];

/// Uniform x Exponential(1) marginals.
pub const UNIFORM_EXPONENTIAL: [[f64; 8]; 6] = [
    [0.4811, 0.6343, 0.7001, 0.7367, 0.7600, 0.7762, 0.7929, 0.8102],
    [0.4426, 0.5951, 0.6682, 0.7105, 0.7379, 0.7572, 0.7772, 0.7980],
    [0.2886, 0.5196, 0.6185, 0.6735, 0.7085, 0.7327, 0.7577, 0.7835],
    [-0.4811, -0.6343, -0.7001, -0.7367, -0.7600, -0.7762, -0.7929, -0.8102],
    [-0.4426, -0.5951, -0.6682, -0.7105, -0.7379, -0.7572, -0.7772, -0.7980],
    [-0.2886, -0.5196, -0.6185, -0.6735, -0.7085, -0.7327, -0.7577, -0.7835],
];

/// Allowed deviation from a published entry.
pub const PUBLISHED_TOLERANCE: f64 = 5e-4;

/// Published value for a cell, if the tables carry one. Only `alpha = 1` is tabulated.
pub fn published_rho(family: Family, n: usize, alpha: f64, marginals: MarginalPair) -> Option<f64> {
    if alpha != 1.0 {
        return None;
    }
    let table = match marginals {
        MarginalPair::UnifUnif => &UNIFORM_UNIFORM,
        MarginalPair::UnifExp => &UNIFORM_EXPONENTIAL,
        MarginalPair::ExpExp => return None,
    };
    let row = TABLE_FAMILIES.iter().position(|&f| f == family)?;
    let col = TABLE_N.iter().position(|&m| m == n)?;
    Some(table[row][col])
}
