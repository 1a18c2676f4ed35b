//! Turning a pair of presented maps into a complex of presentations.
//!
//! When `ψ ∘ φ = 0` on modules, the product `g0 · f0` can still be nonzero:
//! an entry pairing a column bar `[a, b)` with a row bar `[c, d)` where
//! `c < d ≤ a < b` is a map that vanishes on modules but not on free parts.
//! Each such column `j` gets a zero-length pair `[a, a)` added to the middle
//! presentation: a row of `f0` with a unit at `j` and a column of `g0` equal
//! to minus column `j` of the product. The new middle summand is
//! `𝕀_{[a,a)} = 0`, so modules and barcodes are unchanged.

use crate::error::{Error, Result};
use crate::graded::{compose, AnnotatedMatrix};
use crate::interval::{Death, Interval};

pub fn complexify_pair(
    f0: &AnnotatedMatrix,
    g0: &AnnotatedMatrix,
) -> Result<(AnnotatedMatrix, AnnotatedMatrix)> {
    f0.validate()?;
    g0.validate()?;
    let h = compose(g0, f0)?;
    let k = f0.field();
    let mut f = f0.clone();
    let mut g = g0.clone();
    for j in 0..h.cols() {
        let col = h.column(j);
        if col.is_empty() {
            continue;
        }
        let a = f0.col_ann()[j];
        for &(r, _) in col {
            let c = g0.row_ann()[r];
            if !repairable(c, a) {
                return Err(Error::NotRepairable {
                    row: r,
                    col: j,
                    row_bar: c.to_string(),
                    col_bar: a.to_string(),
                });
            }
        }
        let pair = Interval::finite(a.birth, a.birth);
        f.push_row(pair, &[(j, 1)]);
        g.push_col(pair, col.iter().map(|&(r, v)| (r, k.neg(v))).collect());
    }
    debug_assert!(compose(&g, &f).map(|z| z.is_zero()).unwrap_or(false));
    Ok((f, g))
}

/// `c < d ≤ a < b` for row bar `[c, d)` and column bar `[a, b)`.
fn repairable(row: Interval, col: Interval) -> bool {
    match row.death {
        Death::Finite(d) => row.birth < d && d <= col.birth && Death::Finite(col.birth) < col.death,
        Death::Infinite => false,
    }
}
