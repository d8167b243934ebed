//! Deterministic point sets used by the grid checkers: linear grids, and a
//! Halton low-discrepancy sequence for interior points of the unit cube.

const PRIMES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

/// Radical-inverse of `i` in the given base.
fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = f64::from(base);
    let mut inv = 1.0 / b;
    let mut x = 0.0;
    while i > 0 {
        x += (i % u64::from(base)) as f64 * inv;
        i /= u64::from(base);
        inv /= b;
    }
    x
}

/// First `count` points of the `dim`-dimensional Halton sequence, mapped to
/// the cube `[lo, hi]^dim`. The leading index is offset so the degenerate
/// origin point is skipped.
///
/// Panics if `dim` exceeds the supported 20 dimensions (the component cap).
pub fn halton_cube(dim: usize, count: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    assert!(dim >= 1 && dim <= PRIMES.len(), "unsupported dimension {dim}");
    (0..count)
        .map(|i| {
            (0..dim)
                .map(|d| lo + (hi - lo) * radical_inverse(i as u64 + 1, PRIMES[d]))
                .collect()
        })
        .collect()
}
