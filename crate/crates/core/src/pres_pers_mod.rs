//! From pointwise matrices to canonical presentations.
//!
//! The algorithm walks the indices left to right. At index `i` every module
//! in the chain has a basis made of its currently alive generators. Moving
//! to `i + 1`, the structure matrix (expressed in that basis) is column
//! reduced; columns that vanish are generators dying at `i + 1`, the
//! reduced columns become the surviving part of the next basis, and rows
//! without a pivot contribute new generators born at `i + 1`. Column
//! operations are basis changes, so they are mirrored onto the presented
//! morphisms as column operations (where the module is the source) and as
//! row operations (where it is the target).
//!
//! Only a module's own structure maps drive its reductions. Two runs that
//! share a module therefore produce the same generators for it, which is
//! what lets [`crate::sheaf`] glue presentations computed independently.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{check_morphism, AnnotatedMatrix, PersistenceModule, RawModuleMorphism};
use crate::interval::{Death, Interval};
use crate::matrix::{reduce_columns, BiSparse, DenseMatrix, SparseCol};

/// A three-term complex `L → M → N` of persistence modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawComplex {
    pub field: Field,
    pub l: PersistenceModule,
    pub m: PersistenceModule,
    pub n: PersistenceModule,
    /// `f[i]: L_i → M_i`.
    pub f: Vec<DenseMatrix>,
    /// `g[i]: M_i → N_i`.
    pub g: Vec<DenseMatrix>,
}

impl RawComplex {
    pub fn new(
        field: Field,
        l: PersistenceModule,
        m: PersistenceModule,
        n: PersistenceModule,
        f: Vec<DenseMatrix>,
        g: Vec<DenseMatrix>,
    ) -> Result<Self> {
        let raw = RawComplex { field, l, m, n, f, g };
        raw.validate()?;
        Ok(raw)
    }

    pub fn stabilization(&self) -> usize {
        self.m.m()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, module) in [("L", &self.l), ("M", &self.m), ("N", &self.n)] {
            module.check_shapes(name)?;
            module.check_residues(self.field, name)?;
        }
        check_morphism(self.field, &self.l, &self.m, &self.f, "f")?;
        check_morphism(self.field, &self.m, &self.n, &self.g, "g")?;
        for i in 0..self.f.len() {
            if !self.g[i].mul(self.field, &self.f[i]).is_zero() {
                return Err(Error::NotComplex { index: i });
            }
        }
        Ok(())
    }

    /// The morphism `L → M`.
    pub fn first(&self) -> RawModuleMorphism {
        RawModuleMorphism {
            field: self.field,
            source: self.l.clone(),
            target: self.m.clone(),
            maps: self.f.clone(),
        }
    }

    /// The morphism `M → N`.
    pub fn second(&self) -> RawModuleMorphism {
        RawModuleMorphism {
            field: self.field,
            source: self.m.clone(),
            target: self.n.clone(),
            maps: self.g.clone(),
        }
    }
}

/// Canonical presentation of a morphism of persistence modules.
pub fn pres_pers_mod(raw: &RawModuleMorphism) -> Result<AnnotatedMatrix> {
    raw.validate()?;
    let out = present_chain(raw.field, &[&raw.source, &raw.target], &[&raw.maps]);
    Ok(out.morphisms.into_iter().next().expect("one connecting map"))
}

/// Canonical presentations of both maps of a complex, sharing the
/// presentation of the middle module.
pub fn pres_complex(raw: &RawComplex) -> Result<(AnnotatedMatrix, AnnotatedMatrix)> {
    raw.validate()?;
    let out = present_chain(raw.field, &[&raw.l, &raw.m, &raw.n], &[&raw.f, &raw.g]);
    let mut it = out.morphisms.into_iter();
    let f0 = it.next().expect("first map");
    let g0 = it.next().expect("second map");
    Ok((f0, g0))
}

/// Barcode annotations of a single module, one per canonical generator.
pub fn present_module(field: Field, module: &PersistenceModule) -> Result<Vec<Interval>> {
    module.check_shapes("module")?;
    module.check_residues(field, "module")?;
    Ok(present_chain(field, &[module], &[]).generators.remove(0))
}

pub(crate) struct ChainPresentation {
    /// Generator annotations per module.
    pub generators: Vec<Vec<Interval>>,
    /// Presented connecting maps; entry `k` maps module `k` to `k + 1`.
    pub morphisms: Vec<AnnotatedMatrix>,
}

struct ModuleState<'a> {
    module: &'a PersistenceModule,
    anns: Vec<Interval>,
    /// Alive generators at the current index, in generator order.
    alive: Vec<usize>,
    /// Structure map out of the current index in the current basis.
    structure: Vec<SparseCol>,
    /// Current basis vectors (raw coordinates), aligned with `alive`.
    basis: Basis,
}

/// Change of basis produced at an index: generator `alive[j]` is the raw
/// vector `vectors[j]`. Surviving generators carry their reduced column,
/// whose lowest entry sits in a row no other vector uses; new generators
/// are unit vectors of the remaining rows.
#[derive(Default)]
struct Basis {
    dim: usize,
    vectors: Vec<SparseCol>,
    /// `(pivot row, position in vectors)` for the reduced columns.
    pivots: Vec<(usize, usize)>,
    /// `(row, position)` for the unit vectors.
    units: Vec<(usize, usize)>,
}

impl Basis {
    fn standard(dim: usize) -> Self {
        Basis {
            dim,
            vectors: (0..dim).map(|r| vec![(r, 1)]).collect(),
            pivots: Vec::new(),
            units: (0..dim).map(|r| (r, r)).collect(),
        }
    }

    /// Coordinates of a raw vector in this basis, as `(position, value)`.
    fn coordinates(&self, k: Field, x: &[(usize, u32)]) -> Vec<(usize, u32)> {
        let mut acc = vec![0u32; self.dim];
        for &(r, v) in x {
            acc[r] = v;
        }
        let mut out = Vec::new();
        for &(rho, pos) in self.pivots.iter().rev() {
            let xr = acc[rho];
            if xr == 0 {
                continue;
            }
            let v = &self.vectors[pos];
            let lambda = v.last().expect("reduced column is nonzero").1;
            let c = k.div(xr, lambda);
            for &(r, w) in v {
                acc[r] = k.sub(acc[r], k.mul(c, w));
            }
            out.push((pos, c));
        }
        for &(r, pos) in &self.units {
            if acc[r] != 0 {
                out.push((pos, acc[r]));
            }
        }
        out.sort_unstable();
        out
    }

    /// `A · B` where `A`'s columns are given sparsely.
    fn pull_back(&self, k: Field, a: &[SparseCol], rows: usize) -> Vec<SparseCol> {
        let mut acc = vec![0u32; rows];
        let mut touched = BTreeSet::new();
        self.vectors
            .iter()
            .map(|v| {
                for &(r, c) in v {
                    for &(row, w) in &a[r] {
                        acc[row] = k.add(acc[row], k.mul(c, w));
                        touched.insert(row);
                    }
                }
                let col: SparseCol = std::mem::take(&mut touched)
                    .into_iter()
                    .filter_map(|row| {
                        let v = std::mem::take(&mut acc[row]);
                        (v != 0).then_some((row, v))
                    })
                    .collect();
                col
            })
            .collect()
    }
}

/// Runs the index sweep over a chain `V^0 → V^1 → … → V^{K-1}`.
/// `connecting[k][i]` is the matrix `V^k_i → V^{k+1}_i`. Inputs must be
/// validated by the caller.
pub(crate) fn present_chain(
    k: Field,
    modules: &[&PersistenceModule],
    connecting: &[&[DenseMatrix]],
) -> ChainPresentation {
    assert_eq!(connecting.len() + 1, modules.len().max(1));
    let m = modules[0].m();
    let conn_cols: Vec<Vec<Vec<SparseCol>>> = connecting
        .iter()
        .map(|maps| maps.iter().map(DenseMatrix::sparse_columns).collect())
        .collect();
    let structure_cols: Vec<Vec<Vec<SparseCol>>> = modules
        .iter()
        .map(|md| md.maps.iter().map(DenseMatrix::sparse_columns).collect())
        .collect();

    let mut states: Vec<ModuleState> = modules
        .iter()
        .enumerate()
        .map(|(idx, md)| {
            let d0 = md.dims[0];
            ModuleState {
                module: md,
                anns: vec![Interval::infinite(0); d0],
                alive: (0..d0).collect(),
                structure: if m > 0 { structure_cols[idx][0].clone() } else { Vec::new() },
                basis: Basis::standard(d0),
            }
        })
        .collect();
    let mut morphisms: Vec<BiSparse> = (0..connecting.len()).map(|_| BiSparse::new(k)).collect();
    for (c, f) in morphisms.iter_mut().enumerate() {
        for _ in 0..states[c + 1].anns.len() {
            f.push_row();
        }
    }
    let new_gens: Vec<Vec<usize>> = states.iter().map(|s| s.alive.clone()).collect();
    append_columns(k, &mut morphisms, &states, &conn_cols, 0, &new_gens);

    for i in 0..m {
        // Reduce each module's structure map, mirroring the basis changes.
        let mut reductions = Vec::with_capacity(states.len());
        for idx in 0..states.len() {
            let state = &mut states[idx];
            let alive = state.alive.clone();
            let (before, after) = morphisms.split_at_mut(idx);
            let mut as_source = after.first_mut();
            let mut as_target = before.last_mut();
            let red = reduce_columns(k, &mut state.structure, |t, s, mu| {
                let (gt, gs) = (alive[t], alive[s]);
                if let Some(f) = as_source.as_deref_mut() {
                    f.col_axpy(gt, mu, gs);
                }
                if let Some(f) = as_target.as_deref_mut() {
                    f.row_axpy(gs, k.neg(mu), gt);
                }
            });
            reductions.push(red);
        }

        // Deaths, surviving basis vectors and newborn generators.
        let mut born = Vec::with_capacity(states.len());
        for (idx, state) in states.iter_mut().enumerate() {
            let red = &reductions[idx];
            let dim_next = state.module.dims[i + 1];
            let mut basis = Basis {
                dim: dim_next,
                ..Basis::default()
            };
            let mut alive = Vec::new();
            for (pos, &gen) in state.alive.iter().enumerate() {
                match red.pivot[pos] {
                    None => state.anns[gen].death = Death::Finite(i + 1),
                    Some(rho) => {
                        basis.pivots.push((rho, basis.vectors.len()));
                        basis.vectors.push(std::mem::take(&mut state.structure[pos]));
                        alive.push(gen);
                    }
                }
            }
            basis.pivots.sort_unstable();
            let mut fresh = Vec::new();
            for r in newborn_rows(dim_next, &basis.pivots) {
                let gen = state.anns.len();
                state.anns.push(Interval::infinite(i + 1));
                basis.units.push((r, basis.vectors.len()));
                basis.vectors.push(vec![(r, 1)]);
                alive.push(gen);
                fresh.push(gen);
            }
            state.structure = if i + 1 < m {
                basis.pull_back(k, &structure_cols[idx][i + 1], state.module.dims[i + 2])
            } else {
                Vec::new()
            };
            state.alive = alive;
            state.basis = basis;
            born.push(fresh);
        }
        for (c, f) in morphisms.iter_mut().enumerate() {
            for _ in 0..born[c + 1].len() {
                f.push_row();
            }
        }
        append_columns(k, &mut morphisms, &states, &conn_cols, i + 1, &born);
    }

    let generators: Vec<Vec<Interval>> = states.iter().map(|s| s.anns.clone()).collect();
    let morphisms = morphisms
        .into_iter()
        .enumerate()
        .map(|(c, f)| {
            let out = AnnotatedMatrix::new(k, generators[c + 1].clone(), generators[c].clone(), f.columns())
                .expect("presentation has consistent shape");
            debug_assert!(out.validate().is_ok(), "presentation violates annotation rules");
            out
        })
        .collect();
    ChainPresentation {
        generators,
        morphisms,
    }
}

/// Rows without a pivot, in the order in which their generators are created.
///
/// The next basis is indexed by rows: a survivor sits at its pivot row and
/// every other row holds a newborn. Survivors are then brought to the front
/// one at a time, in generator order, each by swapping it with the slot it
/// should occupy. Whatever remains behind them is the newborn order. The
/// pivot list is `(row, survivor index)` with survivor indices in generator
/// order.
fn newborn_rows(dim: usize, pivots: &[(usize, usize)]) -> Vec<usize> {
    #[derive(Clone, Copy)]
    enum Slot {
        Survivor(usize),
        Newborn(usize),
    }
    let mut slots: Vec<Slot> = (0..dim).map(Slot::Newborn).collect();
    let mut slot_of = vec![0; pivots.len()];
    for &(row, s) in pivots {
        slots[row] = Slot::Survivor(s);
        slot_of[s] = row;
    }
    for t in 0..pivots.len() {
        let from = slot_of[t];
        slots.swap(t, from);
        if let Slot::Survivor(s) = slots[from] {
            slot_of[s] = from;
        }
    }
    slots[pivots.len()..]
        .iter()
        .map(|slot| match *slot {
            Slot::Newborn(r) => r,
            Slot::Survivor(_) => unreachable!("survivors occupy the leading slots"),
        })
        .collect()
}

/// Adds the columns of generators born at index `i` to each presented map.
fn append_columns(
    k: Field,
    morphisms: &mut [BiSparse],
    states: &[ModuleState],
    conn_cols: &[Vec<Vec<SparseCol>>],
    i: usize,
    born: &[Vec<usize>],
) {
    for (c, f) in morphisms.iter_mut().enumerate() {
        let (src, dst) = (&states[c], &states[c + 1]);
        let map = &conn_cols[c][i];
        for &gen in &born[c] {
            let pos = src.alive.binary_search(&gen).expect("newborn is alive");
            let image = image_of(k, &src.basis.vectors[pos], map, dst.basis.dim);
            let coords = dst.basis.coordinates(k, &image);
            let col = f.push_col(coords.into_iter().map(|(p, v)| (dst.alive[p], v)));
            debug_assert_eq!(col, gen);
        }
    }
}

fn image_of(k: Field, v: &[(usize, u32)], map: &[SparseCol], rows: usize) -> SparseCol {
    let mut acc = vec![0u32; rows];
    for &(r, c) in v {
        for &(row, w) in &map[r] {
            acc[row] = k.add(acc[row], k.mul(c, w));
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|&(_, v)| v != 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval as I;

    fn mat(rows: &[Vec<u32>]) -> DenseMatrix {
        DenseMatrix::from_vecs(rows)
    }

    fn worked_example() -> RawModuleMorphism {
        let source = PersistenceModule::new(
            vec![3, 3, 3],
            vec![
                mat(&[vec![0, 1, 0], vec![1, 1, 1], vec![1, 1, 1]]),
                mat(&[vec![0, 1, 1], vec![0, 0, 0], vec![0, 1, 1]]),
            ],
        )
        .unwrap();
        let target = PersistenceModule::new(
            vec![3, 3, 3],
            vec![
                mat(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 0]]),
                mat(&[vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]),
            ],
        )
        .unwrap();
        RawModuleMorphism::new(
            Field::Z2,
            source,
            target,
            vec![
                mat(&[vec![0, 1, 1], vec![0, 1, 1], vec![1, 0, 0]]),
                mat(&[vec![0, 0, 0], vec![0, 1, 1], vec![0, 0, 0]]),
                mat(&[vec![1, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_final_matrix() {
        let f = pres_pers_mod(&worked_example()).unwrap();
        assert_eq!(
            f.to_dense(),
            mat(&[
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 1, 1, 0, 0, 0],
                vec![1, 1, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 0, 0, 0, 1, 0],
            ])
        );
        assert_eq!(
            f.col_ann(),
            &[I::finite(0, 2), I::finite(0, 2), I::finite(0, 1), I::infinite(1), I::infinite(2), I::infinite(2)]
        );
        assert_eq!(
            f.row_ann(),
            &[I::infinite(0), I::finite(0, 1), I::finite(0, 1), I::infinite(1), I::infinite(1)]
        );
    }

    #[test]
    fn identity_input_gives_identity() {
        let id = || DenseMatrix::identity(2);
        let module = PersistenceModule::new(vec![2, 2, 2], vec![id(), id()]).unwrap();
        let raw = RawModuleMorphism::new(Field::Z2, module.clone(), module, vec![id(), id(), id()]).unwrap();
        let f = pres_pers_mod(&raw).unwrap();
        assert_eq!(f.to_dense(), id());
        assert!(f.col_ann().iter().chain(f.row_ann()).all(|a| *a == I::infinite(0)));
    }

    #[test]
    fn single_module_barcode() {
        let module = PersistenceModule::new(
            vec![1, 2, 1],
            vec![mat(&[vec![1], vec![0]]), mat(&[vec![0, 1]])],
        )
        .unwrap();
        let anns = present_module(Field::Z2, &module).unwrap();
        assert_eq!(anns, vec![I::finite(0, 2), I::infinite(1)]);
    }

    #[test]
    fn rejects_noncommuting_input() {
        let mut raw = worked_example();
        raw.maps[1].set(0, 0, 1);
        assert!(matches!(pres_pers_mod(&raw), Err(Error::NotCommutative { index: 0, .. })));
    }

    #[test]
    fn zero_second_map_keeps_target_annotations() {
        let one = PersistenceModule::new(vec![1, 1], vec![DenseMatrix::identity(1)]).unwrap();
        let zero = || vec![DenseMatrix::zeros(1, 1), DenseMatrix::zeros(1, 1)];
        let raw = RawComplex::new(
            Field::Z2,
            one.clone(),
            one.clone(),
            one,
            vec![DenseMatrix::identity(1), DenseMatrix::identity(1)],
            zero(),
        )
        .unwrap();
        let (f0, g0) = pres_complex(&raw).unwrap();
        assert!(g0.is_zero());
        assert_eq!(g0.row_ann(), &[I::infinite(0)]);
        assert_eq!(f0.row_ann(), g0.col_ann());
    }
}
