//! Homology of a complex of presentations.
//!
//! For `P → Q → R` presented by `f0` and `g0`, the kernel of `ψ` is the
//! kernel of `(g0 | -r)`, where `r` lists the relations of `R`. Its image in
//! the relations-and-generators space is cut out by the stacked matrix
//!
//! ```text
//! [ f0  -q  ]   rows: generators of Q, then relations of R
//! [ 0   -g1 ]   cols: generators of P, then relations of Q
//! ```
//!
//! Reducing `(g0 | -r)` with columns sorted by degree marks which of its
//! columns are kernel generators. Each zero column `j` gives a kernel basis
//! vector with coefficient 1 at `j` and 0 at every other zero column, so
//! deleting the rows of the stacked matrix that belong to nonzero columns
//! expresses it in the kernel basis without touching the kept rows. A second
//! reduction of that matrix yields the barcode.

use crate::complexify::complexify_pair;
use crate::error::{Error, Result};
use crate::graded::{compose, AnnotatedMatrix};
use crate::interval::{Bar, Barcode, Death, Interval};
use crate::matrix::{reduce_columns, SparseCol};

/// Barcode of `ker ψ / im φ`, labelled with `degree`.
pub fn pres_hom(
    f0: &AnnotatedMatrix,
    g0: &AnnotatedMatrix,
    degree: usize,
    keep_empty: bool,
) -> Result<Barcode> {
    f0.validate()?;
    g0.validate()?;
    let h = compose(g0, f0)?;
    if let Some((row, col, _)) = h.nonzeros().next() {
        return Err(Error::NonzeroComposite { row, col });
    }
    let k = f0.field();
    let mid = g0.col_ann();

    // Columns of (g0 | -r): middle generators, then relations of R. The same
    // list indexes the rows of the stacked matrix.
    let mut items: Vec<(usize, SparseCol)> = mid
        .iter()
        .enumerate()
        .map(|(j, a)| (a.birth, g0.column(j).to_vec()))
        .collect();
    let mut relation_item = vec![None; g0.rows()];
    for (l, a) in g0.row_ann().iter().enumerate() {
        if let Death::Finite(d) = a.death {
            relation_item[l] = Some(items.len());
            items.push((d, vec![(l, k.neg(1))]));
        }
    }

    // Columns of the stacked matrix, rows indexed by `items`.
    let mut stacked: Vec<(usize, SparseCol)> = f0
        .col_ann()
        .iter()
        .enumerate()
        .map(|(j, a)| (a.birth, f0.column(j).to_vec()))
        .collect();
    for (j, a) in mid.iter().enumerate() {
        if let Death::Finite(d) = a.death {
            let mut col = vec![(j, k.neg(1))];
            for &(l, v) in g0.column(j) {
                if let Some(item) = relation_item[l] {
                    col.push((item, k.neg(v)));
                }
            }
            col.sort_unstable();
            stacked.push((d, col));
        }
    }

    let order = stable_order(&items);
    let mut kernel_cols: Vec<SparseCol> = order.iter().map(|&i| items[i].1.clone()).collect();
    let red = reduce_columns(k, &mut kernel_cols, |_, _, _| {});

    let mut new_row = vec![None; items.len()];
    let mut row_deg = Vec::new();
    for (pos, &item) in order.iter().enumerate() {
        if red.pivot[pos].is_none() {
            new_row[item] = Some(row_deg.len());
            row_deg.push(items[item].0);
        }
    }

    let col_order = stable_order(&stacked);
    let mut image: Vec<SparseCol> = col_order
        .iter()
        .map(|&c| {
            let mut col: SparseCol = stacked[c]
                .1
                .iter()
                .filter_map(|&(r, v)| new_row[r].map(|nr| (nr, v)))
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    let red = reduce_columns(k, &mut image, |_, _, _| {});

    let bars = row_deg.iter().enumerate().map(|(r, &birth)| {
        let death = match red.pivot_col.get(&r) {
            Some(&c) => Death::Finite(stacked[col_order[c]].0),
            None => Death::Infinite,
        };
        Bar {
            degree,
            interval: Interval::new(birth, death).expect("pivot columns come no earlier than their rows"),
        }
    });
    Ok(Barcode::new(bars).filtered(keep_empty))
}

/// [`complexify_pair`] followed by [`pres_hom`].
pub fn homology_of_pair(
    f0: &AnnotatedMatrix,
    g0: &AnnotatedMatrix,
    degree: usize,
    keep_empty: bool,
) -> Result<Barcode> {
    let (f, g) = complexify_pair(f0, g0)?;
    pres_hom(&f, &g, degree, keep_empty)
}

/// The classical persistence algorithm, seen as [`pres_hom`] on free
/// presentations. Rejects any finite death.
pub fn persistence_algorithm(f0: &AnnotatedMatrix, g0: &AnnotatedMatrix, degree: usize) -> Result<Barcode> {
    let sides: [(&'static str, &[Interval]); 4] = [
        ("column of the outgoing boundary", f0.col_ann()),
        ("row of the outgoing boundary", f0.row_ann()),
        ("column of the incoming boundary", g0.col_ann()),
        ("row of the incoming boundary", g0.row_ann()),
    ];
    for (side, anns) in sides {
        if let Some(index) = anns.iter().position(|a| a.death.is_finite()) {
            return Err(Error::NotFree { side, index });
        }
    }
    pres_hom(f0, g0, degree, false)
}

/// Indices sorted by degree, ties by index.
fn stable_order<T>(items: &[(usize, T)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| items[i].0);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::interval::Interval as I;
    use crate::matrix::DenseMatrix;

    fn worked_pair() -> (AnnotatedMatrix, AnnotatedMatrix) {
        let k = Field::Z2;
        let mid = vec![I::finite(0, 5), I::finite(0, 5), I::finite(1, 6)];
        let f0 = AnnotatedMatrix::from_dense(
            k,
            mid.clone(),
            vec![I::finite(2, 6), I::finite(1, 5), I::finite(1, 7)],
            &DenseMatrix::from_vecs(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
        )
        .unwrap();
        let g0 = AnnotatedMatrix::from_dense(k, vec![I::finite(0, 3)], mid, &DenseMatrix::from_vecs(&[vec![1, 1, 1]]))
            .unwrap();
        (f0, g0)
    }

    #[test]
    fn worked_instance() {
        let (f0, g0) = worked_pair();
        let with = pres_hom(&f0, &g0, 1, true).unwrap();
        assert_eq!(
            with,
            Barcode::from_intervals(1, [I::finite(0, 1), I::finite(1, 1), I::finite(3, 5)])
        );
        let without = pres_hom(&f0, &g0, 1, false).unwrap();
        assert_eq!(without, Barcode::from_intervals(1, [I::finite(0, 1), I::finite(3, 5)]));
    }

    #[test]
    fn zero_maps_give_the_middle_module() {
        let k = Field::new(3).unwrap();
        let mid = vec![I::infinite(0); 3];
        let f0 = AnnotatedMatrix::zero(k, mid.clone(), vec![]);
        let g0 = AnnotatedMatrix::zero(k, vec![], mid);
        let b = pres_hom(&f0, &g0, 0, false).unwrap();
        assert_eq!(b, Barcode::from_intervals(0, [I::infinite(0); 3]));
    }

    #[test]
    fn filtered_triangle() {
        // Vertices born 0,1,2, edges 3,4,5, face 6.
        let k = Field::Z2;
        let verts = vec![I::infinite(0), I::infinite(1), I::infinite(2)];
        let edges = vec![I::infinite(3), I::infinite(4), I::infinite(5)];
        let d1 = AnnotatedMatrix::from_dense(
            k,
            verts,
            edges.clone(),
            &DenseMatrix::from_vecs(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]),
        )
        .unwrap();
        let d2 = AnnotatedMatrix::from_dense(k, edges, vec![I::infinite(6)], &DenseMatrix::from_vecs(&[vec![1], vec![1], vec![1]]))
            .unwrap();
        let b = persistence_algorithm(&d2, &d1, 1).unwrap();
        assert_eq!(b, Barcode::from_intervals(1, [I::finite(5, 6)]));
        let circle = AnnotatedMatrix::zero(k, d2.row_ann().to_vec(), vec![]);
        let b = persistence_algorithm(&circle, &d1, 1).unwrap();
        assert_eq!(b, Barcode::from_intervals(1, [I::infinite(5)]));
    }

    #[test]
    fn free_entry_point_rejects_relations() {
        let (f0, g0) = worked_pair();
        assert!(matches!(persistence_algorithm(&f0, &g0, 1), Err(Error::NotFree { .. })));
    }

    #[test]
    fn empty_complex() {
        let k = Field::Z2;
        let e = AnnotatedMatrix::zero(k, vec![], vec![]);
        assert!(persistence_algorithm(&e, &e, 0).unwrap().is_empty());
    }

    #[test]
    fn non_complex_rejected() {
        let k = Field::Z2;
        let one = |r: I, c: I| AnnotatedMatrix::from_dense(k, vec![r], vec![c], &DenseMatrix::from_vecs(&[vec![1]])).unwrap();
        let f0 = one(I::finite(0, 2), I::finite(1, 2));
        let g0 = one(I::finite(0, 1), I::finite(0, 2));
        assert!(matches!(pres_hom(&f0, &g0, 0, false), Err(Error::NonzeroComposite { .. })));
        let b = homology_of_pair(&f0, &g0, 0, false).unwrap();
        // I[1,2) → I[0,2) → I[0,1): kernel [1,2), image [1,2).
        assert!(b.is_empty());
    }
}
