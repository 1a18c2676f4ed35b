//! Seeded instance generators for property tests and benchmarks.
//!
//! Morphisms and complexes are built from interval summands with random
//! legal coefficients and then conjugated by random invertible matrices at
//! every index, so the structure matrices look generic.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::Field;
use crate::graded::{reconstruct_pointwise, AnnotatedMatrix, PersistenceModule, RawModuleMorphism};
use crate::interval::{Death, Interval};
use crate::linalg::{kernel, random_invertible};
use crate::matrix::DenseMatrix;
use crate::pres_pers_mod::RawComplex;
use crate::cosheaf_tower::CosheafData;
use crate::poset::{FinitePoset, PosetSheafInstance};
use crate::sheaf::SheafInstance;
use crate::simplicial::SimplicialComplex;
use crate::tower::{Event, TowerScript};

pub fn random_matrix<R: Rng>(k: Field, rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            a.set(r, c, rng.gen_range(0..k.p()));
        }
    }
    a
}

/// A module with arbitrary random structure matrices.
pub fn random_module<R: Rng>(k: Field, m: usize, max_dim: usize, rng: &mut R) -> PersistenceModule {
    let dims: Vec<usize> = (0..=m).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps = (0..m)
        .map(|i| {
            let mut a = random_matrix(k, dims[i + 1], dims[i], rng);
            // Thin out so that ranks vary.
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    if rng.gen_bool(0.4) {
                        a.set(r, c, 0);
                    }
                }
            }
            a
        })
        .collect();
    PersistenceModule { dims, maps }
}

/// Intervals with endpoints in `0..=m`; about a third are infinite.
pub fn random_intervals<R: Rng>(count: usize, m: usize, rng: &mut R) -> Vec<Interval> {
    (0..count)
        .map(|_| {
            let b = rng.gen_range(0..=m);
            if b == m || rng.gen_bool(0.35) {
                Interval::infinite(b)
            } else {
                Interval::finite(b, rng.gen_range(b + 1..=m))
            }
        })
        .collect()
}

/// A valid annotated matrix with random entries wherever both rules allow.
pub fn random_annotated<R: Rng>(
    k: Field,
    row_ann: Vec<Interval>,
    col_ann: Vec<Interval>,
    density: f64,
    rng: &mut R,
) -> AnnotatedMatrix {
    let mut a = DenseMatrix::zeros(row_ann.len(), col_ann.len());
    for (r, ra) in row_ann.iter().enumerate() {
        for (c, ca) in col_ann.iter().enumerate() {
            if ra.birth <= ca.birth && ra.death <= ca.death && rng.gen_bool(density) {
                a.set(r, c, rng.gen_range(1..k.p()));
            }
        }
    }
    AnnotatedMatrix::from_dense(k, row_ann, col_ann, &a).expect("generated entries are legal")
}

/// A complex of presentations with `n` generators in each of the three
/// positions and `g0 · f0 = 0` exactly.
///
/// Each middle generator is hit by `f0` or seen by `g0`, never both; the
/// middle is then twisted by a random unit upper-triangular automorphism so
/// that the supports overlap.
pub fn random_presented_complex<R: Rng>(k: Field, n: usize, m: usize, rng: &mut R) -> (AnnotatedMatrix, AnnotatedMatrix) {
    let mut mid = random_intervals(n, m, rng);
    mid.sort();
    let hit: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let f_ann = random_intervals(n, m, rng);
    let g_ann = random_intervals(n, m, rng);
    let mut f = random_annotated(k, mid.clone(), f_ann.clone(), 0.2, rng).to_dense();
    let mut g = random_annotated(k, g_ann.clone(), mid.clone(), 0.2, rng).to_dense();
    for (j, &h) in hit.iter().enumerate() {
        if h {
            (0..g.rows()).for_each(|r| g.set(r, j, 0));
        } else {
            (0..f.cols()).for_each(|c| f.set(j, c, 0));
        }
    }
    let mut t = DenseMatrix::identity(n);
    for r in 0..n {
        for c in r + 1..n {
            if mid[r].birth <= mid[c].birth && mid[r].death <= mid[c].death && rng.gen_bool(0.05) {
                t.set(r, c, rng.gen_range(1..k.p()));
            }
        }
    }
    let t_inv = crate::linalg::inverse(k, &t).expect("unit triangular");
    let f0 = AnnotatedMatrix::from_dense(k, mid.clone(), f_ann, &t.mul(k, &f)).expect("automorphism keeps entries legal");
    let g0 = AnnotatedMatrix::from_dense(k, g_ann, mid, &g.mul(k, &t_inv)).expect("automorphism keeps entries legal");
    (f0, g0)
}

/// Random invertible matrices `P_i` and inverses for each index.
fn basis_changes<R: Rng>(k: Field, dims: &[usize], rng: &mut R) -> Vec<(DenseMatrix, DenseMatrix)> {
    dims.iter().map(|&d| random_invertible(k, d, rng)).collect()
}

fn conjugate_module(k: Field, module: &PersistenceModule, p: &[(DenseMatrix, DenseMatrix)]) -> PersistenceModule {
    PersistenceModule {
        dims: module.dims.clone(),
        maps: module
            .maps
            .iter()
            .enumerate()
            .map(|(i, a)| p[i + 1].0.mul(k, a).mul(k, &p[i].1))
            .collect(),
    }
}

fn conjugate_maps(
    k: Field,
    maps: &[DenseMatrix],
    src: &[(DenseMatrix, DenseMatrix)],
    dst: &[(DenseMatrix, DenseMatrix)],
) -> Vec<DenseMatrix> {
    maps.iter()
        .enumerate()
        .map(|(i, c)| dst[i].0.mul(k, c).mul(k, &src[i].1))
        .collect()
}

/// A random commuting morphism with at most `max_gens` bars per module.
pub fn random_morphism<R: Rng>(k: Field, m: usize, max_gens: usize, rng: &mut R) -> RawModuleMorphism {
    let rows = random_intervals(rng.gen_range(0..=max_gens), m, rng);
    let cols = random_intervals(rng.gen_range(0..=max_gens), m, rng);
    let density = rng.gen_range(0.2..0.9);
    let f = random_annotated(k, rows, cols, density, rng);
    let raw = reconstruct_pointwise(&f, m).expect("endpoints within horizon");
    let ps = basis_changes(k, &raw.source.dims, rng);
    let qs = basis_changes(k, &raw.target.dims, rng);
    RawModuleMorphism {
        field: k,
        source: conjugate_module(k, &raw.source, &ps),
        target: conjugate_module(k, &raw.target, &qs),
        maps: conjugate_maps(k, &raw.maps, &ps, &qs),
    }
}

/// A random complex `L → M → N` with at most `max_gens` bars per module.
///
/// `M → N` comes from [`random_morphism`]; each summand `𝕀_{[a,b)}` of `L`
/// is sent to a random element of `ker(g_a)` that the structure maps kill
/// by index `b`.
pub fn random_complex<R: Rng>(k: Field, m: usize, max_gens: usize, rng: &mut R) -> RawComplex {
    let second = random_morphism(k, m, max_gens, rng);
    let mid = &second.source;
    let summands = random_intervals(rng.gen_range(0..=max_gens), m, rng);
    let transport = |x: &[u32], from: usize, to: usize| -> Vec<u32> {
        let mut v = x.to_vec();
        for t in from..to {
            v = mid.maps[t].mul_vec(k, &v);
        }
        v
    };
    let seeds: Vec<Vec<u32>> = summands
        .iter()
        .map(|s| {
            let a = s.birth;
            let dim = mid.dims[a];
            let mut constraints = second.maps[a].to_vecs();
            if let Death::Finite(b) = s.death {
                let mut p = DenseMatrix::identity(dim);
                for t in a..b {
                    p = mid.maps[t].mul(k, &p);
                }
                constraints.extend(p.to_vecs());
            }
            let stacked = DenseMatrix::from_rows(constraints.len(), dim, constraints).expect("rectangular");
            let basis = kernel(k, &stacked);
            let mut x = vec![0u32; dim];
            for v in &basis {
                let c = rng.gen_range(0..k.p());
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi = k.add(*xi, k.mul(c, *vi));
                }
            }
            x
        })
        .collect();
    let active = |i: usize| -> Vec<usize> { (0..summands.len()).filter(|&s| summands[s].contains(i)).collect() };
    let act: Vec<Vec<usize>> = (0..=m).map(active).collect();
    let l = PersistenceModule {
        dims: act.iter().map(Vec::len).collect(),
        maps: (0..m)
            .map(|i| {
                let mut a = DenseMatrix::zeros(act[i + 1].len(), act[i].len());
                for (c, s) in act[i].iter().enumerate() {
                    if let Ok(r) = act[i + 1].binary_search(s) {
                        a.set(r, c, 1);
                    }
                }
                a
            })
            .collect(),
    };
    let f: Vec<DenseMatrix> = (0..=m)
        .map(|i| {
            let mut c = DenseMatrix::zeros(mid.dims[i], act[i].len());
            for (col, &s) in act[i].iter().enumerate() {
                let v = transport(&seeds[s], summands[s].birth, i);
                for (r, &x) in v.iter().enumerate() {
                    c.set(r, col, x);
                }
            }
            c
        })
        .collect();
    let ls = basis_changes(k, &l.dims, rng);
    let identity: Vec<(DenseMatrix, DenseMatrix)> = mid
        .dims
        .iter()
        .map(|&d| (DenseMatrix::identity(d), DenseMatrix::identity(d)))
        .collect();
    RawComplex {
        field: k,
        l: conjugate_module(k, &l, &ls),
        m: second.source.clone(),
        n: second.target.clone(),
        f: conjugate_maps(k, &f, &ls, &identity),
        g: second.maps.clone(),
    }
}

/// A random simplex-wise filtration: `(time, sorted vertices)` in order,
/// faces first, at most `max_simplices` simplices of dimension ≤ `max_dim`.
pub fn random_filtration<R: Rng>(max_simplices: usize, max_dim: usize, rng: &mut R) -> Vec<(usize, Vec<u32>)> {
    let n_vertices = rng.gen_range(1..=8u32);
    let mut candidates: Vec<Vec<u32>> = (0..n_vertices).map(|v| vec![v]).collect();
    if max_dim >= 1 {
        for a in 0..n_vertices {
            for b in a + 1..n_vertices {
                if rng.gen_bool(0.5) {
                    candidates.push(vec![a, b]);
                }
            }
        }
    }
    if max_dim >= 2 {
        let edges: std::collections::HashSet<Vec<u32>> = candidates.iter().filter(|s| s.len() == 2).cloned().collect();
        for a in 0..n_vertices {
            for b in a + 1..n_vertices {
                for c in b + 1..n_vertices {
                    let all = [vec![a, b], vec![a, c], vec![b, c]].iter().all(|e| edges.contains(e));
                    if all && rng.gen_bool(0.6) {
                        candidates.push(vec![a, b, c]);
                    }
                }
            }
        }
    }
    let mut placed: std::collections::HashSet<Vec<u32>> = Default::default();
    let mut order = Vec::new();
    while order.len() < max_simplices {
        let mut ready: Vec<&Vec<u32>> = candidates
            .iter()
            .filter(|s| !placed.contains(*s))
            .filter(|s| {
                s.len() == 1
                    || (0..s.len()).all(|j| {
                        let mut f = (*s).clone();
                        f.remove(j);
                        placed.contains(&f)
                    })
            })
            .collect();
        if ready.is_empty() {
            break;
        }
        ready.shuffle(rng);
        let s = ready[0].clone();
        placed.insert(s.clone());
        order.push((order.len(), s));
    }
    order
}

/// A random valid tower with the given numbers of inclusions and collapses.
///
/// Dead vertex labels are sometimes reused, so a label can name different
/// vertices at different times.
pub fn random_tower<R: Rng>(k: Field, inclusions: usize, collapses: usize, max_dim: usize, rng: &mut R) -> TowerScript {
    let mut alive: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut dead_labels: Vec<u32> = Vec::new();
    let mut next_label = 0u32;
    let mut events = Vec::with_capacity(inclusions + collapses);
    let (mut inc_left, mut col_left) = (inclusions, collapses);
    while inc_left + col_left > 0 {
        let vertices: Vec<u32> = alive.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
        let collapse = col_left > 0 && vertices.len() >= 2 && (inc_left == 0 || rng.gen_range(0..inc_left + col_left) < col_left);
        let time = events.len();
        if collapse {
            let from = *vertices.choose(rng).unwrap();
            let to = *vertices.iter().filter(|&&v| v != from).collect::<Vec<_>>().choose(rng).unwrap();
            alive = alive
                .iter()
                .map(|s| crate::tower::image_simplex(s.iter().map(|&v| if v == from { *to } else { v })))
                .collect();
            dead_labels.push(from);
            events.push(Event::Collapse { time, from, to: *to });
            col_left -= 1;
            continue;
        }
        if inc_left == 0 {
            break;
        }
        let mut simplex = None;
        if !vertices.is_empty() && rng.gen_bool(0.75) {
            for _ in 0..8 {
                let base: Vec<&Vec<u32>> = alive.iter().filter(|s| s.len() <= max_dim).collect();
                let s = base.choose(rng).unwrap();
                let v = *vertices.choose(rng).unwrap();
                if s.contains(&v) {
                    continue;
                }
                let mut t = (*s).clone();
                t.push(v);
                t.sort_unstable();
                let faces_alive = (0..t.len()).all(|j| {
                    let mut f = t.clone();
                    f.remove(j);
                    alive.contains(&f)
                });
                if faces_alive && !alive.contains(&t) {
                    simplex = Some(t);
                    break;
                }
            }
        }
        let simplex = simplex.unwrap_or_else(|| {
            if !dead_labels.is_empty() && rng.gen_bool(0.3) {
                let i = rng.gen_range(0..dead_labels.len());
                vec![dead_labels.swap_remove(i)]
            } else {
                next_label += 1;
                vec![next_label - 1]
            }
        });
        alive.insert(simplex.clone());
        events.push(Event::Include { time, simplex });
        inc_left -= 1;
    }
    TowerScript::new(k, events).expect("generated times are consecutive")
}

/// A functorial random cosheaf on `complex`.
///
/// Every vertex gets a random coordinate subset `T_v` of `𝕜^width`; the
/// stalk of a simplex is the quotient by the coordinates common to all its
/// vertices, conjugated by a random invertible matrix. Extension maps are
/// the induced quotient maps.
pub fn random_cosheaf<R: Rng>(k: Field, complex: &BTreeSet<Vec<u32>>, width: usize, rng: &mut R) -> CosheafData {
    let vertices: BTreeSet<u32> = complex.iter().flatten().copied().collect();
    let drop: HashMap<u32, Vec<bool>> = vertices
        .iter()
        .map(|&v| (v, (0..width).map(|_| rng.gen_bool(0.3)).collect()))
        .collect();
    let kept = |s: &[u32]| -> Vec<usize> { (0..width).filter(|&j| !s.iter().all(|v| drop[v][j])).collect() };
    let frames: HashMap<Vec<u32>, (DenseMatrix, DenseMatrix)> =
        complex.iter().map(|s| (s.clone(), random_invertible(k, kept(s).len(), rng))).collect();
    let mut f = CosheafData::constant(0);
    for s in complex {
        f.set_stalk(s.clone(), kept(s).len());
    }
    for tau in complex.iter().filter(|s| s.len() > 1) {
        for j in 0..tau.len() {
            let mut sigma = tau.clone();
            sigma.remove(j);
            let (ks, kt) = (kept(&sigma), kept(tau));
            let mut proj = DenseMatrix::zeros(ks.len(), kt.len());
            for (r, c) in ks.iter().enumerate() {
                let col = kt.binary_search(c).expect("a face keeps a subset of coordinates");
                proj.set(r, col, 1);
            }
            let map = frames[&sigma].0.mul(k, &proj).mul(k, &frames[tau].1);
            f.set_ext(sigma, tau.clone(), map);
        }
    }
    f
}

/// Per cell and coordinate, a lifetime `[b, d)` with `d = m + 1` meaning the
/// coordinate never dies. Each cell takes the minima over its down-set, so
/// lifetimes shrink going up and identity-on-overlap maps are natural.
pub(crate) fn coordinate_lifetimes<R: Rng>(
    downsets: &[Vec<usize>],
    width: usize,
    m: usize,
    rng: &mut R,
) -> Vec<Vec<(usize, usize)>> {
    let raw: Vec<Vec<(usize, usize)>> = downsets
        .iter()
        .map(|_| {
            (0..width)
                .map(|_| {
                    let b = rng.gen_range(0..=m);
                    let d = if rng.gen_bool(0.3) { m + 1 } else { rng.gen_range(b + 1..=m + 1) };
                    (b, d)
                })
                .collect()
        })
        .collect();
    downsets
        .iter()
        .map(|down| {
            (0..width)
                .map(|j| {
                    let b = down.iter().map(|&x| raw[x][j].0).min().unwrap_or(0);
                    let d = down.iter().map(|&x| raw[x][j].1).min().unwrap_or(0);
                    (b, d)
                })
                .collect()
        })
        .collect()
}

/// Coordinates alive at index `i`.
pub(crate) fn alive(lifetimes: &[(usize, usize)], i: usize) -> Vec<usize> {
    (0..lifetimes.len()).filter(|&j| lifetimes[j].0 <= i && i < lifetimes[j].1).collect()
}

/// The matrix sending coordinate `j` of `src` to coordinate `j` of `dst`.
pub(crate) fn partial_identity(src: &[usize], dst: &[usize]) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(dst.len(), src.len());
    for (c, j) in src.iter().enumerate() {
        if let Ok(r) = dst.binary_search(j) {
            a.set(r, c, 1);
        }
    }
    a
}

/// A random sheaf on `complex` built from `width` coordinates, written in
/// random bases at every simplex and index.
pub fn random_sheaf<R: Rng>(k: Field, complex: SimplicialComplex, m: usize, width: usize, rng: &mut R) -> SheafInstance {
    let downsets: Vec<Vec<usize>> = complex
        .simplices()
        .iter()
        .map(|s| {
            (1u32..1 << s.len())
                .map(|mask| {
                    let face: Vec<u32> = s.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &v)| v).collect();
                    complex.index_of(&face).expect("closed under faces")
                })
                .collect()
        })
        .collect();
    let life = coordinate_lifetimes(&downsets, width, m, rng);
    let alive: Vec<Vec<Vec<usize>>> = life.iter().map(|l| (0..=m).map(|i| alive(l, i)).collect()).collect();
    let frames: Vec<Vec<(DenseMatrix, DenseMatrix)>> = alive
        .iter()
        .map(|per| per.iter().map(|a| random_invertible(k, a.len(), rng)).collect())
        .collect();
    let mut sheaf = SheafInstance::new(k, complex.clone(), m);
    for (s, simplex) in complex.simplices().iter().enumerate() {
        sheaf.set_stalk(simplex, alive[s].iter().map(Vec::len).collect()).expect("simplex of the complex");
        for i in 0..m {
            let step = frames[s][i + 1].0.mul(k, &partial_identity(&alive[s][i], &alive[s][i + 1])).mul(k, &frames[s][i].1);
            sheaf.set_step(simplex, i, step).expect("index below m");
        }
    }
    for (s, t, _) in complex.facet_pairs() {
        for i in 0..=m {
            let r = frames[t][i].0.mul(k, &partial_identity(&alive[s][i], &alive[t][i])).mul(k, &frames[s][i].1);
            sheaf
                .set_restriction(complex.simplex(s), complex.simplex(t), i, r)
                .expect("facet pair");
        }
    }
    sheaf
}

/// An Erdős–Rényi graph on `vertices` vertices with edge probability `p`,
/// carrying a [`random_sheaf`].
pub fn er_graph_sheaf<R: Rng>(k: Field, vertices: u32, p: f64, m: usize, width: usize, rng: &mut R) -> SheafInstance {
    let mut maximal: Vec<Vec<u32>> = (0..vertices).map(|v| vec![v]).collect();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(p) {
                maximal.push(vec![u, v]);
            }
        }
    }
    let complex = SimplicialComplex::from_maximal(&maximal).expect("valid simplices");
    random_sheaf(k, complex, m, width, rng)
}

/// A zigzag poset on `n ≥ 1` elements with random arrow directions. The
/// element indices are shuffled along the path.
pub fn random_zigzag<R: Rng>(n: usize, rng: &mut R) -> FinitePoset {
    let mut slot: Vec<usize> = (0..n).collect();
    slot.shuffle(rng);
    let relations: Vec<(usize, usize)> = (1..n)
        .map(|j| if rng.gen_bool(0.5) { (slot[j - 1], slot[j]) } else { (slot[j], slot[j - 1]) })
        .collect();
    FinitePoset::new((0..n).map(|x| format!("x{x}")).collect(), &relations).expect("a path is acyclic")
}

/// A random poset on `n` elements: each pair `i < j` is related with
/// probability `p`.
pub fn random_poset<R: Rng>(n: usize, p: f64, rng: &mut R) -> FinitePoset {
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                relations.push((i, j));
            }
        }
    }
    FinitePoset::new((0..n).map(|x| format!("x{x}")).collect(), &relations).expect("relations go up")
}

/// A random persistent sheaf on `poset` from `width` coordinates, written
/// in random bases at every element and index.
pub fn random_poset_sheaf<R: Rng>(k: Field, poset: FinitePoset, m: usize, width: usize, rng: &mut R) -> PosetSheafInstance {
    let n = poset.len();
    let downsets: Vec<Vec<usize>> = (0..n).map(|y| (0..n).filter(|&x| poset.leq(x, y)).collect()).collect();
    let life = coordinate_lifetimes(&downsets, width, m, rng);
    let alive: Vec<Vec<Vec<usize>>> = life.iter().map(|l| (0..=m).map(|i| alive(l, i)).collect()).collect();
    let frames: Vec<Vec<(DenseMatrix, DenseMatrix)>> = alive
        .iter()
        .map(|per| per.iter().map(|a| random_invertible(k, a.len(), rng)).collect())
        .collect();
    let covers = poset.covers();
    let mut sheaf = PosetSheafInstance::new(k, poset, m);
    for x in 0..n {
        sheaf.set_stalk(x, alive[x].iter().map(Vec::len).collect()).expect("m + 1 dimensions");
        for i in 0..m {
            let step = frames[x][i + 1].0.mul(k, &partial_identity(&alive[x][i], &alive[x][i + 1])).mul(k, &frames[x][i].1);
            sheaf.set_step(x, i, step).expect("index below m");
        }
    }
    for (x, y) in covers {
        for i in 0..=m {
            let r = frames[y][i].0.mul(k, &partial_identity(&alive[x][i], &alive[y][i])).mul(k, &frames[x][i].1);
            sheaf.set_restriction(x, y, i, r).expect("cover relation");
        }
    }
    sheaf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3, 5] {
            let k = Field::new(p).unwrap();
            for _ in 0..20 {
                let m = rng.gen_range(0..5);
                random_morphism(k, m, 5, &mut rng).validate().unwrap();
                random_complex(k, m, 5, &mut rng).validate().unwrap();
            }
        }
    }

    #[test]
    fn filtrations_put_faces_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = random_filtration(40, 2, &mut rng);
            assert!(f.len() <= 40);
            for (i, (_, s)) in f.iter().enumerate() {
                for j in 0..s.len() {
                    if s.len() > 1 {
                        let mut face = s.clone();
                        face.remove(j);
                        assert!(f[..i].iter().any(|(_, t)| *t == face));
                    }
                }
            }
        }
    }

    #[test]
    fn random_sheaves_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        for p in [2, 3] {
            let s = random_sheaf(Field::new(p).unwrap(), complex.clone(), 4, 3, &mut rng);
            s.validate().unwrap();
        }
        er_graph_sheaf(Field::Z2, 6, 0.5, 5, 2, &mut rng).validate().unwrap();
    }

    #[test]
    fn random_poset_sheaves_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..8 {
            let z = random_zigzag(n, &mut rng);
            assert!(z.is_zigzag());
            random_poset_sheaf(Field::new(3).unwrap(), z, 3, 2, &mut rng).validate().unwrap();
            let p = random_poset(n, 0.4, &mut rng);
            random_poset_sheaf(Field::Z2, p, 2, 2, &mut rng).validate().unwrap();
        }
    }

    #[test]
    fn presented_complexes_match_pointwise_homology() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for p in [2, 3, 5] {
            let k = Field::new(p).unwrap();
            for n in [0, 1, 4, 9] {
                let m = 5;
                let (f0, g0) = random_presented_complex(k, n, m, &mut rng);
                let f = reconstruct_pointwise(&f0, m).unwrap();
                let g = reconstruct_pointwise(&g0, m).unwrap();
                let raw = RawComplex::new(k, f.source, f.target, g.target, f.maps, g.maps).unwrap();
                let expected = crate::oracle::pointwise_homology_barcode(&raw, 1).unwrap();
                let got = crate::pres_hom::pres_hom(&f0, &g0, 1, false).unwrap();
                assert_eq!(got, expected.without_empty());
            }
        }
    }
}
