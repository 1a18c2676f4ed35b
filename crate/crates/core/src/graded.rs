//! Annotated matrices: compressed canonical presentations of morphisms of
//! persistence modules, together with raw pointwise module data and the
//! conversions between the two.
//!
//! A row or column annotated `[b, d)` stands for a generator of degree `b`
//! which, when `d` is finite, is killed by a relation of degree `d`. An entry
//! `λ` at `(k, j)` means generator `j` maps to `λ t^{b_j - b_k}` times
//! generator `k`, so the power of `t` never has to be stored.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::{Barcode, Death, Interval};
use crate::matrix::{DenseMatrix, SparseCol};

/// Which generators of a presented morphism to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Columns: the presented source module.
    Domain,
    /// Rows: the presented target module.
    Codomain,
}

/// A field matrix whose rows and columns carry interval annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedMatrix {
    field: Field,
    n_rows: usize,
    cols: Vec<SparseCol>,
    row_ann: Vec<Interval>,
    col_ann: Vec<Interval>,
}

impl AnnotatedMatrix {
    /// Builds a matrix from sparse columns. Checks shape and residues only;
    /// the annotation rules are checked by [`AnnotatedMatrix::validate`].
    pub fn new(
        field: Field,
        row_ann: Vec<Interval>,
        col_ann: Vec<Interval>,
        cols: Vec<SparseCol>,
    ) -> Result<Self> {
        if cols.len() != col_ann.len() {
            return Err(Error::shape("annotated matrix columns", col_ann.len(), cols.len()));
        }
        let n_rows = row_ann.len();
        for (j, col) in cols.iter().enumerate() {
            let mut prev = None;
            for &(r, v) in col {
                if r >= n_rows || prev.is_some_and(|p| p >= r) || v == 0 {
                    return Err(Error::shape(
                        format!("sparse column {j}"),
                        format!("sorted nonzero entries in rows < {n_rows}"),
                        format!("{col:?}"),
                    ));
                }
                field.residue(v as u64, || format!("entry ({r}, {j})"))?;
                prev = Some(r);
            }
        }
        Ok(AnnotatedMatrix {
            field,
            n_rows,
            cols,
            row_ann,
            col_ann,
        })
    }

    pub fn from_dense(
        field: Field,
        row_ann: Vec<Interval>,
        col_ann: Vec<Interval>,
        entries: &DenseMatrix,
    ) -> Result<Self> {
        if entries.shape() != (row_ann.len(), col_ann.len()) {
            return Err(Error::shape(
                "annotated matrix",
                format!("{}x{}", row_ann.len(), col_ann.len()),
                format!("{}x{}", entries.rows(), entries.cols()),
            ));
        }
        entries.check_residues(field, "annotated matrix")?;
        AnnotatedMatrix::new(field, row_ann, col_ann, entries.sparse_columns())
    }

    pub fn zero(field: Field, row_ann: Vec<Interval>, col_ann: Vec<Interval>) -> Self {
        let cols = vec![Vec::new(); col_ann.len()];
        AnnotatedMatrix {
            field,
            n_rows: row_ann.len(),
            cols,
            row_ann,
            col_ann,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_ann(&self) -> &[Interval] {
        &self.row_ann
    }

    pub fn col_ann(&self) -> &[Interval] {
        &self.col_ann
    }

    pub fn column(&self, j: usize) -> &[(usize, u32)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseCol] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map_or(0, |i| self.cols[c][i].1)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_sparse_columns(self.n_rows, &self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    /// Checks the birth rule and the death rule for every nonzero entry.
    pub fn validate(&self) -> Result<()> {
        self.validate_births()?;
        for (r, c, _) in self.nonzeros() {
            if self.row_ann[r].death > self.col_ann[c].death {
                return Err(self.entry_error(r, c, "death"));
            }
        }
        Ok(())
    }

    /// Checks only the birth rule, the part `compose` always preserves.
    pub fn validate_births(&self) -> Result<()> {
        for (r, c, _) in self.nonzeros() {
            if self.row_ann[r].birth > self.col_ann[c].birth {
                return Err(self.entry_error(r, c, "birth"));
            }
        }
        Ok(())
    }

    fn entry_error(&self, r: usize, c: usize, rule: &'static str) -> Error {
        Error::InvalidEntry {
            row: r,
            col: c,
            rule,
            row_bar: self.row_ann[r].to_string(),
            col_bar: self.col_ann[c].to_string(),
        }
    }

    /// Appends a row with the given annotation and entries `(col, value)`.
    pub(crate) fn push_row(&mut self, ann: Interval, entries: &[(usize, u32)]) {
        let r = self.n_rows;
        self.n_rows += 1;
        self.row_ann.push(ann);
        for &(c, v) in entries {
            if v != 0 {
                self.cols[c].push((r, v));
            }
        }
    }

    pub(crate) fn push_col(&mut self, ann: Interval, col: SparseCol) {
        self.col_ann.push(ann);
        self.cols.push(col);
    }

    /// The entry matrix with the t-power of each entry made explicit.
    pub fn as_degree_matrix(&self) -> DegreeMatrix {
        DegreeMatrix {
            row_deg: self.row_ann.iter().map(|a| a.birth).collect(),
            col_deg: self.col_ann.iter().map(|a| a.birth).collect(),
            entries: self.cols.clone(),
        }
    }
}

/// `g ∘ f` for presented morphisms sharing their middle generators.
///
/// The product is a plain field product and obeys both annotation rules
/// whenever `g` and `f` do. It can still be nonzero at an entry pairing a
/// column bar `[a, b)` with a row bar `[c, d)` where `d ≤ a`: the presented
/// modules compose to zero there while the free parts do not.
/// [`crate::complexify::complexify_pair`] removes exactly those entries.
pub fn compose(g: &AnnotatedMatrix, f: &AnnotatedMatrix) -> Result<AnnotatedMatrix> {
    if g.field != f.field {
        return Err(Error::FieldMismatch {
            left: g.field.p(),
            right: f.field.p(),
        });
    }
    if g.cols() != f.rows() {
        return Err(Error::shape("compose", format!("{} middle generators", g.cols()), f.rows()));
    }
    if let Some(i) = (0..g.cols()).find(|&i| g.col_ann[i] != f.row_ann[i]) {
        return Err(Error::AnnotationMismatch {
            index: i,
            left: g.col_ann[i].to_string(),
            right: f.row_ann[i].to_string(),
        });
    }
    let k = f.field;
    let mut acc = vec![0u32; g.rows()];
    let mut touched = Vec::new();
    let cols = f
        .cols
        .iter()
        .map(|fcol| {
            for &(t, a) in fcol {
                for &(r, b) in &g.cols[t] {
                    if acc[r] == 0 {
                        touched.push(r);
                    }
                    acc[r] = k.add(acc[r], k.mul(a, b));
                }
            }
            touched.sort_unstable();
            let out: SparseCol = touched
                .drain(..)
                .filter_map(|r| {
                    let v = std::mem::take(&mut acc[r]);
                    (v != 0).then_some((r, v))
                })
                .collect();
            out
        })
        .collect();
    Ok(AnnotatedMatrix {
        field: k,
        n_rows: g.rows(),
        cols,
        row_ann: g.row_ann.clone(),
        col_ann: f.col_ann.clone(),
    })
}

/// The barcode of the presented source (`Domain`) or target (`Codomain`).
pub fn barcode_of_presentation(f: &AnnotatedMatrix, side: Side, keep_empty: bool) -> Barcode {
    let anns = match side {
        Side::Domain => &f.col_ann,
        Side::Codomain => &f.row_ann,
    };
    Barcode::from_intervals(0, anns.iter().copied()).filtered(keep_empty)
}

/// A persistence module `V_0 → V_1 → … → V_m` given by matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceModule {
    /// `dims[i] = dim V_i` for `i = 0..=m`.
    pub dims: Vec<usize>,
    /// `maps[i]: V_i → V_{i+1}`, shape `dims[i+1] x dims[i]`.
    pub maps: Vec<DenseMatrix>,
}

impl PersistenceModule {
    pub fn new(dims: Vec<usize>, maps: Vec<DenseMatrix>) -> Result<Self> {
        let module = PersistenceModule { dims, maps };
        module.check_shapes("module")?;
        Ok(module)
    }

    pub fn zero(m: usize) -> Self {
        PersistenceModule {
            dims: vec![0; m + 1],
            maps: vec![DenseMatrix::zeros(0, 0); m],
        }
    }

    /// Stabilization index.
    pub fn m(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn check_shapes(&self, name: &str) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::shape(format!("{name} dimensions"), "at least one index", 0));
        }
        if self.maps.len() != self.m() {
            return Err(Error::shape(format!("{name} structure maps"), self.m(), self.maps.len()));
        }
        for (i, a) in self.maps.iter().enumerate() {
            let want = (self.dims[i + 1], self.dims[i]);
            if a.shape() != want {
                return Err(Error::shape(
                    format!("{name} structure map {i}"),
                    format!("{}x{}", want.0, want.1),
                    format!("{}x{}", a.rows(), a.cols()),
                ));
            }
        }
        Ok(())
    }

    pub fn check_residues(&self, k: Field, name: &str) -> Result<()> {
        for (i, a) in self.maps.iter().enumerate() {
            a.check_residues(k, &format!("{name} structure map {i}"))?;
        }
        Ok(())
    }
}

/// Checks shapes and the naturality squares `B_i C_i = C_{i+1} A_i`.
pub(crate) fn check_morphism(
    k: Field,
    source: &PersistenceModule,
    target: &PersistenceModule,
    maps: &[DenseMatrix],
    name: &str,
) -> Result<()> {
    if source.m() != target.m() {
        return Err(Error::shape(format!("{name} stabilization index"), source.m(), target.m()));
    }
    if maps.len() != source.dims.len() {
        return Err(Error::shape(format!("{name} components"), source.dims.len(), maps.len()));
    }
    for (i, c) in maps.iter().enumerate() {
        let want = (target.dims[i], source.dims[i]);
        if c.shape() != want {
            return Err(Error::shape(
                format!("{name} component {i}"),
                format!("{}x{}", want.0, want.1),
                format!("{}x{}", c.rows(), c.cols()),
            ));
        }
        c.check_residues(k, &format!("{name} component {i}"))?;
    }
    for i in 0..source.m() {
        let left = target.maps[i].mul(k, &maps[i]);
        let right = maps[i + 1].mul(k, &source.maps[i]);
        if left != right {
            return Err(Error::NotCommutative {
                index: i,
                what: name.to_string(),
            });
        }
    }
    Ok(())
}

/// A morphism of persistence modules `M → N` given pointwise.
///
/// `source.maps` are the matrices `A_i`, `target.maps` the `B_i`, and
/// `maps` the components `C_i: M_i → N_i` for `i = 0..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawModuleMorphism {
    pub field: Field,
    pub source: PersistenceModule,
    pub target: PersistenceModule,
    pub maps: Vec<DenseMatrix>,
}

impl RawModuleMorphism {
    pub fn new(
        field: Field,
        source: PersistenceModule,
        target: PersistenceModule,
        maps: Vec<DenseMatrix>,
    ) -> Result<Self> {
        let raw = RawModuleMorphism {
            field,
            source,
            target,
            maps,
        };
        raw.validate()?;
        Ok(raw)
    }

    pub fn m(&self) -> usize {
        self.source.m()
    }

    pub fn validate(&self) -> Result<()> {
        self.source.check_shapes("source")?;
        self.target.check_shapes("target")?;
        self.source.check_residues(self.field, "source")?;
        self.target.check_residues(self.field, "target")?;
        check_morphism(self.field, &self.source, &self.target, &self.maps, "morphism")
    }
}

/// Expands a presented morphism into pointwise matrices over `0..=horizon`.
///
/// `M(i)` has one basis vector per column active at `i` (`birth ≤ i < death`),
/// in column order; structure maps keep surviving generators and drop dying
/// ones, and `φ(i)` is `f` restricted to the active rows and columns.
pub fn reconstruct_pointwise(f: &AnnotatedMatrix, horizon: usize) -> Result<RawModuleMorphism> {
    f.validate()?;
    let too_late = f
        .row_ann
        .iter()
        .chain(&f.col_ann)
        .find(|a| a.birth > horizon || a.death.finite().is_some_and(|d| d > horizon));
    if let Some(a) = too_late {
        return Err(Error::shape("reconstruction horizon", format!("at least the endpoints of {a}"), horizon));
    }
    let active = |anns: &[Interval], i: usize| -> Vec<usize> {
        (0..anns.len()).filter(|&g| anns[g].contains(i)).collect()
    };
    let col_active: Vec<Vec<usize>> = (0..=horizon).map(|i| active(&f.col_ann, i)).collect();
    let row_active: Vec<Vec<usize>> = (0..=horizon).map(|i| active(&f.row_ann, i)).collect();
    let module = |act: &[Vec<usize>]| -> PersistenceModule {
        let maps = (0..horizon)
            .map(|i| {
                let mut a = DenseMatrix::zeros(act[i + 1].len(), act[i].len());
                for (c, g) in act[i].iter().enumerate() {
                    if let Ok(r) = act[i + 1].binary_search(g) {
                        a.set(r, c, 1);
                    }
                }
                a
            })
            .collect();
        PersistenceModule {
            dims: act.iter().map(Vec::len).collect(),
            maps,
        }
    };
    let maps = (0..=horizon)
        .map(|i| {
            let mut c = DenseMatrix::zeros(row_active[i].len(), col_active[i].len());
            for (cj, &j) in col_active[i].iter().enumerate() {
                for (rk, &k) in row_active[i].iter().enumerate() {
                    c.set(rk, cj, f.get(k, j));
                }
            }
            c
        })
        .collect();
    Ok(RawModuleMorphism {
        field: f.field,
        source: module(&col_active),
        target: module(&row_active),
        maps,
    })
}

/// A matrix between free graded modules: entry `(r, c)` with coefficient
/// `λ` stands for `λ t^{col_deg[c] - row_deg[r]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMatrix {
    pub row_deg: Vec<usize>,
    pub col_deg: Vec<usize>,
    pub entries: Vec<SparseCol>,
}

impl DegreeMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.row_deg.len(), self.col_deg.len())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_sparse_columns(self.row_deg.len(), &self.entries)
    }
}

/// The relation-side data of a canonical presented morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrices {
    /// `P_1 → P_0`: one column per finite-death column of `f`.
    pub p: DegreeMatrix,
    /// `Q_1 → Q_0`: one column per finite-death row of `f`.
    pub q: DegreeMatrix,
    /// `P_1 → Q_1`, the unique lift of `f_0`.
    pub f1: DegreeMatrix,
}

pub fn derive_relation_matrices(f: &AnnotatedMatrix) -> Result<RelationMatrices> {
    f.validate()?;
    let finite = |anns: &[Interval]| -> Vec<usize> {
        (0..anns.len()).filter(|&i| anns[i].death.is_finite()).collect()
    };
    let death = |a: &Interval| match a.death {
        Death::Finite(d) => d,
        Death::Infinite => unreachable!("only finite deaths carry relations"),
    };
    let rel_cols = finite(&f.col_ann);
    let rel_rows = finite(&f.row_ann);
    let diagonal = |anns: &[Interval], rels: &[usize]| DegreeMatrix {
        row_deg: anns.iter().map(|a| a.birth).collect(),
        col_deg: rels.iter().map(|&g| death(&anns[g])).collect(),
        entries: rels.iter().map(|&g| vec![(g, 1)]).collect(),
    };
    let mut row_pos = vec![None; f.rows()];
    for (i, &r) in rel_rows.iter().enumerate() {
        row_pos[r] = Some(i);
    }
    let f1 = DegreeMatrix {
        row_deg: rel_rows.iter().map(|&r| death(&f.row_ann[r])).collect(),
        col_deg: rel_cols.iter().map(|&c| death(&f.col_ann[c])).collect(),
        entries: rel_cols
            .iter()
            .map(|&c| {
                f.cols[c]
                    .iter()
                    .filter_map(|&(r, v)| row_pos[r].map(|i| (i, v)))
                    .collect()
            })
            .collect(),
    };
    Ok(RelationMatrices {
        p: diagonal(&f.col_ann, &rel_cols),
        q: diagonal(&f.row_ann, &rel_rows),
        f1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval as I;

    fn example_2_5() -> AnnotatedMatrix {
        AnnotatedMatrix::from_dense(
            Field::Z2,
            vec![I::infinite(0), I::finite(0, 1), I::finite(0, 1), I::infinite(1), I::infinite(1)],
            vec![
                I::finite(0, 2),
                I::finite(0, 2),
                I::finite(0, 1),
                I::infinite(1),
                I::infinite(2),
                I::infinite(2),
            ],
            &DenseMatrix::from_vecs(&[
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 1, 1, 0, 0, 0],
                vec![1, 1, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 0, 0, 0, 1, 0],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn example_matrix_is_valid() {
        example_2_5().validate().unwrap();
    }

    #[test]
    fn barcodes_of_example_matrix() {
        let f = example_2_5();
        let dom = barcode_of_presentation(&f, Side::Domain, false);
        assert_eq!(
            dom,
            Barcode::from_intervals(
                0,
                [I::finite(0, 2), I::finite(0, 2), I::finite(0, 1), I::infinite(1), I::infinite(2), I::infinite(2)]
            )
        );
        let cod = barcode_of_presentation(&f, Side::Codomain, false);
        assert_eq!(
            cod,
            Barcode::from_intervals(
                0,
                [I::infinite(0), I::finite(0, 1), I::finite(0, 1), I::infinite(1), I::infinite(1)]
            )
        );
    }

    #[test]
    fn relation_matrices_of_example() {
        let rel = derive_relation_matrices(&example_2_5()).unwrap();
        assert_eq!(rel.p.shape(), (6, 3));
        assert_eq!(rel.q.shape(), (5, 2));
        assert_eq!(rel.f1.to_dense(), DenseMatrix::from_vecs(&[vec![0, 1, 1], vec![1, 1, 1]]));
        assert_eq!(rel.f1.row_deg, vec![1, 1]);
        assert_eq!(rel.f1.col_deg, vec![2, 2, 1]);
        assert_eq!(rel.p.col_deg, vec![2, 2, 1]);
    }

    #[test]
    fn free_matrix_has_no_relations() {
        let f = AnnotatedMatrix::from_dense(
            Field::Z2,
            vec![I::infinite(0)],
            vec![I::infinite(1)],
            &DenseMatrix::from_vecs(&[vec![1]]),
        )
        .unwrap();
        let rel = derive_relation_matrices(&f).unwrap();
        assert_eq!(rel.p.shape(), (1, 0));
        assert_eq!(rel.q.shape(), (1, 0));
        assert_eq!(rel.f1.shape(), (0, 0));
    }

    #[test]
    fn compose_of_disjoint_bars_is_nonzero_but_valid() {
        let k = Field::Z2;
        let g = AnnotatedMatrix::from_dense(k, vec![I::finite(0, 1)], vec![I::finite(0, 2)], &DenseMatrix::from_vecs(&[vec![1]])).unwrap();
        let f = AnnotatedMatrix::from_dense(k, vec![I::finite(0, 2)], vec![I::finite(1, 2)], &DenseMatrix::from_vecs(&[vec![1]])).unwrap();
        let h = compose(&g, &f).unwrap();
        assert_eq!(h.to_dense(), DenseMatrix::from_vecs(&[vec![1]]));
        assert_eq!(h.row_ann(), &[I::finite(0, 1)]);
        assert_eq!(h.col_ann(), &[I::finite(1, 2)]);
        // Both annotation rules survive composition; the defect is that the
        // entry presents the zero map between disjoint bars.
        h.validate().unwrap();
        assert!(!h.is_zero());
    }

    #[test]
    fn compose_names_first_mismatch() {
        let k = Field::Z2;
        let g = AnnotatedMatrix::zero(k, vec![], vec![I::infinite(0), I::infinite(1)]);
        let f = AnnotatedMatrix::zero(k, vec![I::infinite(0), I::infinite(2)], vec![]);
        assert!(matches!(compose(&g, &f), Err(Error::AnnotationMismatch { index: 1, .. })));
    }

    #[test]
    fn reconstruction_of_example_has_expected_dims() {
        let raw = reconstruct_pointwise(&example_2_5(), 2).unwrap();
        assert_eq!(raw.source.dims, vec![3, 3, 3]);
        assert_eq!(raw.target.dims, vec![3, 3, 3]);
        raw.validate().unwrap();
    }

    #[test]
    fn constant_reconstruction() {
        let k = Field::Z2;
        let f = AnnotatedMatrix::from_dense(
            k,
            vec![I::infinite(0); 2],
            vec![I::infinite(0); 2],
            &DenseMatrix::from_vecs(&[vec![1, 1], vec![0, 1]]),
        )
        .unwrap();
        let raw = reconstruct_pointwise(&f, 3).unwrap();
        for a in raw.source.maps.iter().chain(&raw.target.maps) {
            assert_eq!(a, &DenseMatrix::identity(2));
        }
    }
}
