//! Cohomology of persistent sheaves over a simplicial complex.
//!
//! The cochain modules `C^k = ⊕_{dim σ = k} F(σ)` with coboundary blocks
//! `[σ:τ] F(σ ≤ τ)` form a complex of persistence modules, which goes through
//! the presentation pipeline. The local route presents each stalk module and
//! each restriction morphism on its own (in parallel) and glues the blocks.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{AnnotatedMatrix, PersistenceModule};
use crate::interval::{Barcode, Interval};
use crate::matrix::DenseMatrix;
use crate::pres_hom::homology_of_pair;
use crate::pres_pers_mod::{pres_complex, present_chain, RawComplex};
use crate::simplicial::SimplicialComplex;

/// A persistent sheaf on a simplicial complex, stabilizing at index `m`.
///
/// Unset stalks are zero. An unset restriction or step matrix is the
/// identity when its shape is square and zero otherwise.
#[derive(Clone, Debug)]
pub struct SheafInstance {
    pub field: Field,
    complex: SimplicialComplex,
    m: usize,
    stalks: Vec<Vec<usize>>,
    restrictions: HashMap<(usize, usize, usize), DenseMatrix>,
    steps: HashMap<(usize, usize), DenseMatrix>,
}

pub(crate) fn label(s: &[u32]) -> String {
    s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn default_map(rows: usize, cols: usize) -> DenseMatrix {
    if rows == cols {
        DenseMatrix::identity(rows)
    } else {
        DenseMatrix::zeros(rows, cols)
    }
}

impl SheafInstance {
    pub fn new(field: Field, complex: SimplicialComplex, m: usize) -> Self {
        let stalks = vec![vec![0; m + 1]; complex.len()];
        SheafInstance {
            field,
            complex,
            m,
            stalks,
            restrictions: HashMap::new(),
            steps: HashMap::new(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn find(&self, s: &[u32]) -> Result<usize> {
        self.complex
            .index_of(s)
            .ok_or_else(|| Error::sheaf(format!("{} is not a simplex of the complex", label(s))))
    }

    pub fn set_stalk(&mut self, simplex: &[u32], dims: Vec<usize>) -> Result<()> {
        let s = self.find(simplex)?;
        if dims.len() != self.m + 1 {
            return Err(Error::sheaf(format!(
                "stalk of {} lists {} dimensions, expected {}",
                label(simplex),
                dims.len(),
                self.m + 1
            )));
        }
        self.stalks[s] = dims;
        Ok(())
    }

    /// Sets `F_i(σ ≤ τ)` for a codimension-1 pair.
    pub fn set_restriction(&mut self, sigma: &[u32], tau: &[u32], i: usize, map: DenseMatrix) -> Result<()> {
        let (s, t) = (self.find(sigma)?, self.find(tau)?);
        if self.complex.incidence(s, t).is_none() {
            return Err(Error::sheaf(format!("{} is not a facet of {}", label(sigma), label(tau))));
        }
        if i > self.m {
            return Err(Error::sheaf(format!("restriction {} <= {} at index {i} beyond m = {}", label(sigma), label(tau), self.m)));
        }
        self.restrictions.insert((s, t, i), map);
        Ok(())
    }

    /// Sets the step `φ_i(σ): F_i(σ) → F_{i+1}(σ)`.
    pub fn set_step(&mut self, simplex: &[u32], i: usize, map: DenseMatrix) -> Result<()> {
        let s = self.find(simplex)?;
        if i >= self.m {
            return Err(Error::sheaf(format!("step of {} at index {i}, but steps stop at m - 1 = {}", label(simplex), self.m as isize - 1)));
        }
        self.steps.insert((s, i), map);
        Ok(())
    }

    pub fn stalk_dim(&self, s: usize, i: usize) -> usize {
        self.stalks[s][i]
    }

    pub fn restriction(&self, s: usize, t: usize, i: usize) -> DenseMatrix {
        self.restrictions
            .get(&(s, t, i))
            .cloned()
            .unwrap_or_else(|| default_map(self.stalks[t][i], self.stalks[s][i]))
    }

    pub fn step(&self, s: usize, i: usize) -> DenseMatrix {
        self.steps
            .get(&(s, i))
            .cloned()
            .unwrap_or_else(|| default_map(self.stalks[s][i + 1], self.stalks[s][i]))
    }

    /// The persistence module `F(σ)`.
    pub fn module(&self, s: usize) -> PersistenceModule {
        PersistenceModule {
            dims: self.stalks[s].clone(),
            maps: (0..self.m).map(|i| self.step(s, i)).collect(),
        }
    }

    /// Input size `Σ_i Σ_σ dim F_i(σ)`.
    pub fn size(&self) -> usize {
        self.stalks.iter().flatten().sum()
    }

    /// Checks shapes, residues, naturality of the steps and commutativity
    /// of every codimension-2 square.
    pub fn validate(&self) -> Result<()> {
        let k = self.field;
        let name = |s: usize| label(self.complex.simplex(s));
        for s in 0..self.complex.len() {
            for i in 0..self.m {
                let st = self.step(s, i);
                if st.shape() != (self.stalks[s][i + 1], self.stalks[s][i]) {
                    return Err(Error::sheaf(format!(
                        "step of {} at index {i} is {}x{}, stalks need {}x{}",
                        name(s),
                        st.rows(),
                        st.cols(),
                        self.stalks[s][i + 1],
                        self.stalks[s][i]
                    )));
                }
                st.check_residues(k, &format!("step of {} at index {i}", name(s)))?;
            }
        }
        let pairs = self.complex.facet_pairs();
        for &(s, t, _) in &pairs {
            for i in 0..=self.m {
                let r = self.restriction(s, t, i);
                if r.shape() != (self.stalks[t][i], self.stalks[s][i]) {
                    return Err(Error::sheaf(format!(
                        "restriction {} <= {} at index {i} is {}x{}, stalks need {}x{}",
                        name(s),
                        name(t),
                        r.rows(),
                        r.cols(),
                        self.stalks[t][i],
                        self.stalks[s][i]
                    )));
                }
                r.check_residues(k, &format!("restriction {} <= {} at index {i}", name(s), name(t)))?;
                if i < self.m {
                    let lhs = self.restriction(s, t, i + 1).mul(k, &self.step(s, i));
                    let rhs = self.step(t, i).mul(k, &r);
                    if lhs != rhs {
                        return Err(Error::sheaf(format!(
                            "steps are not natural for {0} <= {1} at index {i}: step of {0} at index {i}, step of {1} at index {i}",
                            name(s),
                            name(t)
                        )));
                    }
                }
            }
        }
        for (t, tau) in self.complex.simplices().iter().enumerate() {
            if tau.len() < 3 {
                continue;
            }
            for a in 0..tau.len() {
                for b in a + 1..tau.len() {
                    let drop = |x: &[usize]| -> usize {
                        let s: Vec<u32> = tau.iter().enumerate().filter(|(j, _)| !x.contains(j)).map(|(_, &v)| v).collect();
                        self.complex.index_of(&s).expect("closed under faces")
                    };
                    let (sa, sb, rho) = (drop(&[a]), drop(&[b]), drop(&[a, b]));
                    for i in 0..=self.m {
                        let via_a = self.restriction(sa, t, i).mul(k, &self.restriction(rho, sa, i));
                        let via_b = self.restriction(sb, t, i).mul(k, &self.restriction(rho, sb, i));
                        if via_a != via_b {
                            return Err(Error::sheaf(format!(
                                "restrictions from {} to {} depend on the path at index {i}",
                                name(rho),
                                name(t)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Block offsets of the `k`-cochains at index `i`.
    fn offsets(&self, cells: &[usize], i: usize) -> (Vec<usize>, usize) {
        let mut off = Vec::with_capacity(cells.len());
        let mut total = 0;
        for &c in cells {
            off.push(total);
            total += self.stalks[c][i];
        }
        (off, total)
    }

    fn cochain_module(&self, k: isize) -> PersistenceModule {
        let cells = self.complex.of_dim(k);
        let dims: Vec<usize> = (0..=self.m).map(|i| self.offsets(&cells, i).1).collect();
        let maps = (0..self.m)
            .map(|i| {
                let (src, _) = self.offsets(&cells, i);
                let (dst, _) = self.offsets(&cells, i + 1);
                let mut a = DenseMatrix::zeros(dims[i + 1], dims[i]);
                for (x, &c) in cells.iter().enumerate() {
                    paste(&mut a, dst[x], src[x], &self.step(c, i), 1, self.field);
                }
                a
            })
            .collect();
        PersistenceModule { dims, maps }
    }

    fn coboundary(&self, k: isize, i: usize) -> DenseMatrix {
        let src = self.complex.of_dim(k);
        let dst = self.complex.of_dim(k + 1);
        let (so, sd) = self.offsets(&src, i);
        let (to, td) = self.offsets(&dst, i);
        let mut d = DenseMatrix::zeros(td, sd);
        if src.is_empty() || dst.is_empty() {
            return d;
        }
        let spos: HashMap<usize, usize> = src.iter().enumerate().map(|(x, &c)| (c, x)).collect();
        let tpos: HashMap<usize, usize> = dst.iter().enumerate().map(|(x, &c)| (c, x)).collect();
        for (s, t, j) in self.complex.facet_pairs() {
            if let (Some(&x), Some(&y)) = (spos.get(&s), tpos.get(&t)) {
                let sign = if j % 2 == 0 { 1 } else { self.field.neg(1) };
                paste(&mut d, to[y], so[x], &self.restriction(s, t, i), sign, self.field);
            }
        }
        d
    }
}

fn paste(into: &mut DenseMatrix, r0: usize, c0: usize, block: &DenseMatrix, scale: u32, k: Field) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            into.set(r0 + r, c0 + c, k.mul(scale, block.get(r, c)));
        }
    }
}

/// The complex `C^{k-1} → C^k → C^{k+1}` written out index by index.
pub fn build_cochain_raw(sheaf: &SheafInstance, k: usize) -> Result<RawComplex> {
    sheaf.validate()?;
    let k = k as isize;
    let maps = |d: isize| (0..=sheaf.m).map(|i| sheaf.coboundary(d, i)).collect::<Vec<_>>();
    RawComplex::new(
        sheaf.field,
        sheaf.cochain_module(k - 1),
        sheaf.cochain_module(k),
        sheaf.cochain_module(k + 1),
        maps(k - 1),
        maps(k),
    )
}

/// Barcode of `H^k`, presenting the whole cochain complex at once.
pub fn persistent_sheaf_cohomology(sheaf: &SheafInstance, k: usize, keep_empty: bool) -> Result<Barcode> {
    let raw = build_cochain_raw(sheaf, k)?;
    let (f0, g0) = pres_complex(&raw)?;
    homology_of_pair(&f0, &g0, k, keep_empty)
}

/// Presentations of every stalk module and every restriction morphism.
#[derive(Clone, Debug)]
pub struct LocalPresentations {
    /// Generator annotations per simplex, in complex order.
    pub generators: Vec<Vec<Interval>>,
    /// `(σ, τ, j, matrix)` for each facet pair; the matrix has the
    /// generators of `τ` as rows and those of `σ` as columns.
    pub relations: Vec<(usize, usize, usize, AnnotatedMatrix)>,
}

impl LocalPresentations {
    /// Total number of generators, the size of the assembled input.
    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    fn block(&self, cells: &[usize]) -> (Vec<usize>, Vec<Interval>) {
        let mut off = Vec::with_capacity(cells.len());
        let mut anns = Vec::new();
        for &c in cells {
            off.push(anns.len());
            anns.extend_from_slice(&self.generators[c]);
        }
        (off, anns)
    }

    fn coboundary(&self, sheaf: &SheafInstance, k: isize) -> Result<AnnotatedMatrix> {
        let src = sheaf.complex.of_dim(k);
        let dst = sheaf.complex.of_dim(k + 1);
        let (so, sa) = self.block(&src);
        let (to, ta) = self.block(&dst);
        let spos: HashMap<usize, usize> = src.iter().enumerate().map(|(x, &c)| (c, x)).collect();
        let tpos: HashMap<usize, usize> = dst.iter().enumerate().map(|(x, &c)| (c, x)).collect();
        let mut cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); sa.len()];
        let kf = sheaf.field;
        for (s, t, j, m) in &self.relations {
            if let (Some(&x), Some(&y)) = (spos.get(s), tpos.get(t)) {
                let sign = if j % 2 == 0 { 1 } else { kf.neg(1) };
                for (c, col) in m.columns().iter().enumerate() {
                    for &(r, v) in col {
                        cols[so[x] + c].push((to[y] + r, kf.mul(sign, v)));
                    }
                }
            }
        }
        for col in &mut cols {
            col.sort_unstable();
        }
        AnnotatedMatrix::new(kf, ta, sa, cols)
    }

    /// The presented pair `(δ^{k-1}, δ^k)` glued from the local pieces.
    pub fn assemble(&self, sheaf: &SheafInstance, k: usize) -> Result<(AnnotatedMatrix, AnnotatedMatrix)> {
        let k = k as isize;
        Ok((self.coboundary(sheaf, k - 1)?, self.coboundary(sheaf, k)?))
    }
}

/// Presents each stalk module and each restriction morphism independently,
/// using a pool of `threads` workers (0 picks the default width).
pub fn local_presentations(sheaf: &SheafInstance, threads: usize) -> Result<LocalPresentations> {
    sheaf.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::sheaf(format!("cannot start worker pool: {e}")))?;
    let k = sheaf.field;
    let modules: Vec<PersistenceModule> = (0..sheaf.complex.len()).map(|s| sheaf.module(s)).collect();
    let pairs = sheaf.complex.facet_pairs();
    pool.install(|| {
        let generators: Vec<Vec<Interval>> = modules
            .par_iter()
            .map(|module| present_chain(k, &[module], &[]).generators.remove(0))
            .collect();
        let relations: Vec<(usize, usize, usize, AnnotatedMatrix)> = pairs
            .par_iter()
            .map(|&(s, t, j)| {
                let maps: Vec<DenseMatrix> = (0..=sheaf.m).map(|i| sheaf.restriction(s, t, i)).collect();
                let out = present_chain(k, &[&modules[s], &modules[t]], &[&maps]);
                (s, t, j, out.morphisms.into_iter().next().expect("one connecting map"))
            })
            .collect();
        Ok(LocalPresentations { generators, relations })
    })
}

/// Barcode of `H^k` through the local route.
pub fn local_sheaf_cohomology(sheaf: &SheafInstance, k: usize, threads: usize, keep_empty: bool) -> Result<Barcode> {
    let local = local_presentations(sheaf, threads)?;
    let (f0, g0) = local.assemble(sheaf, k)?;
    homology_of_pair(&f0, &g0, k, keep_empty)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::interval::Interval as I;

    /// Interval stalks on a triangle, restrictions identity on overlaps.
    pub(crate) fn triangle_sheaf() -> SheafInstance {
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1, 2]]).unwrap();
        let mut s = SheafInstance::new(Field::Z2, complex, 7);
        let bars: [(&[u32], I); 7] = [
            (&[0], I::finite(2, 6)),
            (&[1], I::finite(1, 5)),
            (&[2], I::finite(1, 7)),
            (&[0, 1], I::finite(0, 5)),
            (&[1, 2], I::finite(0, 5)),
            (&[0, 2], I::finite(1, 6)),
            (&[0, 1, 2], I::finite(0, 3)),
        ];
        for (simplex, bar) in bars {
            s.set_stalk(simplex, (0..=7).map(|i| bar.contains(i) as usize).collect()).unwrap();
        }
        s
    }

    #[test]
    fn triangle_sheaf_cohomology() {
        let s = triangle_sheaf();
        let expect = Barcode::from_intervals(1, [I::finite(0, 1), I::finite(3, 5)]);
        assert_eq!(persistent_sheaf_cohomology(&s, 1, false).unwrap(), expect);
        assert_eq!(local_sheaf_cohomology(&s, 1, 2, false).unwrap(), expect);
    }

    #[test]
    fn triangle_local_barcodes() {
        let s = triangle_sheaf();
        let local = local_presentations(&s, 1).unwrap();
        let expect = [
            I::finite(2, 6),
            I::finite(1, 5),
            I::finite(1, 7),
            I::finite(0, 5),
            I::finite(1, 6),
            I::finite(0, 5),
            I::finite(0, 3),
        ];
        for (s, bar) in expect.iter().enumerate() {
            assert_eq!(local.generators[s], vec![*bar]);
        }
    }

    #[test]
    fn triangle_coboundary_supports() {
        let s = triangle_sheaf();
        let local = local_presentations(&s, 1).unwrap();
        let (d0, d1) = local.assemble(&s, 1).unwrap();
        // Edges in complex order 01, 02, 12.
        assert_eq!(
            d0.to_dense(),
            DenseMatrix::from_vecs(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]])
        );
        assert_eq!(d1.to_dense(), DenseMatrix::from_vecs(&[vec![1, 1, 1]]));
    }

    #[test]
    fn constant_sheaf_on_a_circle() {
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let mut s = SheafInstance::new(Field::new(3).unwrap(), complex.clone(), 0);
        for simplex in complex.simplices() {
            s.set_stalk(simplex, vec![1]).unwrap();
        }
        let raw = build_cochain_raw(&s, 1).unwrap();
        assert_eq!(raw.f[0].rows(), 3);
        for k in 0..=1 {
            let b = persistent_sheaf_cohomology(&s, k, false).unwrap();
            assert_eq!(b, Barcode::from_intervals(k, [I::infinite(0)]));
        }
    }

    #[test]
    fn zero_sheaf_is_empty() {
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1, 2]]).unwrap();
        let s = SheafInstance::new(Field::Z2, complex, 3);
        for k in 0..3 {
            assert!(persistent_sheaf_cohomology(&s, k, false).unwrap().is_empty());
            assert!(local_sheaf_cohomology(&s, k, 1, false).unwrap().is_empty());
        }
    }

    #[test]
    fn non_natural_step_is_reported() {
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1]]).unwrap();
        let mut s = SheafInstance::new(Field::Z2, complex.clone(), 1);
        for simplex in complex.simplices() {
            s.set_stalk(simplex, vec![1, 1]).unwrap();
        }
        s.set_step(&[0], 0, DenseMatrix::zeros(1, 1)).unwrap();
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("0 <= 0,1 at index 0"), "{err}");
    }
}
