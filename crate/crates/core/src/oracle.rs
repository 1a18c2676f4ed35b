//! Brute-force reference computations.
//!
//! Everything here works index by index with dense Gaussian elimination and
//! shares no code with the presentation algorithms beyond field arithmetic.

use std::collections::BTreeSet;

use crate::cosheaf_tower::CosheafData;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::PersistenceModule;
use crate::interval::{Bar, Barcode, Death, Interval};
use crate::linalg::{extend_basis, from_columns, kernel, rank, solve};
use crate::matrix::DenseMatrix;
use crate::poset::PosetSheafInstance;
use crate::pres_pers_mod::RawComplex;
use crate::tower::{Event, TowerScript};

/// Barcode of a pointwise module from the ranks of its composite maps.
///
/// With `r(i, j)` the rank of `V_i → V_j` (and `r(-1, ·) = 0`), the bar
/// `[i, j)` has multiplicity `r(i,j-1) - r(i,j) - r(i-1,j-1) + r(i-1,j)`
/// and `[i, ∞)` has multiplicity `r(i,m) - r(i-1,m)`.
pub fn pointwise_barcode(k: Field, module: &PersistenceModule, degree: usize) -> Result<Barcode> {
    module.check_shapes("module")?;
    let m = module.m();
    let ranks = rank_table(k, module);
    let r = |i: isize, j: usize| -> i64 {
        if i < 0 {
            0
        } else {
            ranks[i as usize][j] as i64
        }
    };
    let mut bars = Vec::new();
    let mut push = |mult: i64, interval: Interval| {
        assert!(mult >= 0, "negative multiplicity for {interval}");
        for _ in 0..mult {
            bars.push(Bar { degree, interval });
        }
    };
    for i in 0..=m {
        let ii = i as isize;
        for j in i + 1..=m {
            let mult = r(ii, j - 1) - r(ii, j) - r(ii - 1, j - 1) + r(ii - 1, j);
            push(mult, Interval::finite(i, j));
        }
        push(r(ii, m) - r(ii - 1, m), Interval::infinite(i));
    }
    Ok(Barcode::new(bars))
}

/// `ranks[i][j]` for `i ≤ j`; entries with `j < i` are unused.
fn rank_table(k: Field, module: &PersistenceModule) -> Vec<Vec<usize>> {
    let m = module.m();
    (0..=m)
        .map(|i| {
            let mut row = vec![0; m + 1];
            let mut p = DenseMatrix::identity(module.dims[i]);
            row[i] = module.dims[i];
            for j in i + 1..=m {
                p = module.maps[j - 1].mul(k, &p);
                row[j] = rank(k, &p);
            }
            row
        })
        .collect()
}

/// Rank of the composite `V_i → V_j`.
pub fn composite_rank(k: Field, module: &PersistenceModule, i: usize, j: usize) -> usize {
    let mut p = DenseMatrix::identity(module.dims[i]);
    for t in i..j {
        p = module.maps[t].mul(k, &p);
    }
    rank(k, &p)
}

/// The homology module `ker g / im f` of a raw complex, index by index.
pub fn pointwise_homology(raw: &RawComplex) -> Result<PersistenceModule> {
    raw.validate()?;
    let k = raw.field;
    let m = raw.stabilization();
    let mut images = Vec::with_capacity(m + 1);
    let mut reps = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let dim = raw.m.dims[i];
        let columns: Vec<Vec<u32>> = (0..raw.f[i].cols()).map(|c| raw.f[i].column(c)).collect();
        let image = extend_basis(k, dim, &[], &columns);
        let cycles = kernel(k, &raw.g[i]);
        let rep = extend_basis(k, dim, &image, &cycles);
        images.push(image);
        reps.push(rep);
    }
    let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(m);
    for i in 0..m {
        let dim = raw.m.dims[i + 1];
        let mut basis = images[i + 1].clone();
        basis.extend(reps[i + 1].iter().cloned());
        let lift_to = from_columns(dim, &basis);
        let offset = images[i + 1].len();
        let mut map = DenseMatrix::zeros(dims[i + 1], dims[i]);
        for (c, v) in reps[i].iter().enumerate() {
            let w = raw.m.maps[i].mul_vec(k, v);
            let coords = solve(k, &lift_to, &w).ok_or(Error::NotComplex { index: i })?;
            for r in 0..dims[i + 1] {
                map.set(r, c, coords[offset + r]);
            }
        }
        maps.push(map);
    }
    PersistenceModule::new(dims, maps)
}

/// Barcode of `ker g / im f`, computed pointwise.
pub fn pointwise_homology_barcode(raw: &RawComplex, degree: usize) -> Result<Barcode> {
    let h = pointwise_homology(raw)?;
    pointwise_barcode(raw.field, &h, degree)
}

/// Barcode of `lim F`, the degree-0 cohomology of a sheaf on a poset.
///
/// At each index the limit is the space of families `(s_x)` with
/// `F(x ≤ y) s_x = s_y` for every related pair, found as a kernel.
pub fn poset_limit_barcode(sheaf: &PosetSheafInstance) -> Result<Barcode> {
    sheaf.validate()?;
    let k = sheaf.field;
    let p = sheaf.poset();
    let m = sheaf.m();
    let n = p.len();
    let offsets = |i: usize| -> (Vec<usize>, usize) {
        let mut off = Vec::with_capacity(n);
        let mut total = 0;
        for x in 0..n {
            off.push(total);
            total += sheaf.stalk_dims(x)[i];
        }
        (off, total)
    };
    let mut bases = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let (off, total) = offsets(i);
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || !p.leq(x, y) {
                    continue;
                }
                let r = sheaf.restriction(x, y, i)?;
                for a in 0..r.rows() {
                    let mut row = vec![0; total];
                    for b in 0..r.cols() {
                        row[off[x] + b] = r.get(a, b);
                    }
                    row[off[y] + a] = k.sub(row[off[y] + a], 1);
                    rows.push(row);
                }
            }
        }
        let constraints = if rows.is_empty() {
            DenseMatrix::zeros(0, total)
        } else {
            DenseMatrix::from_vecs(&rows)
        };
        bases.push(kernel(k, &constraints));
    }
    let mut maps = Vec::with_capacity(m);
    for i in 0..m {
        let (src_off, _) = offsets(i);
        let (dst_off, dst_total) = offsets(i + 1);
        let target = from_columns(dst_total, &bases[i + 1]);
        let mut map = DenseMatrix::zeros(bases[i + 1].len(), bases[i].len());
        for (c, v) in bases[i].iter().enumerate() {
            let mut w = vec![0; dst_total];
            for x in 0..n {
                let d = sheaf.stalk_dims(x)[i];
                let image = sheaf.step(x, i).mul_vec(k, &v[src_off[x]..src_off[x] + d]);
                w[dst_off[x]..dst_off[x] + image.len()].copy_from_slice(&image);
            }
            let coords = solve(k, &target, &w).ok_or(Error::NotCommutative {
                index: i,
                what: "steps of a limit family".into(),
            })?;
            for (r, x) in coords.into_iter().enumerate() {
                map.set(r, c, x);
            }
        }
        maps.push(map);
    }
    let module = PersistenceModule::new(bases.iter().map(Vec::len).collect(), maps)?;
    pointwise_barcode(k, &module, 0)
}

/// Textbook persistence of a simplex-wise filtration.
///
/// `simplices` lists `(time, sorted vertices)` in filtration order, every
/// face before its cofaces. Returns the barcode in `degree`.
pub fn classical_persistence(k: Field, simplices: &[(usize, Vec<u32>)], degree: usize) -> Barcode {
    use std::collections::HashMap;
    let index: HashMap<&[u32], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, (_, s))| (s.as_slice(), i))
        .collect();
    let mut cols: Vec<Vec<(usize, u32)>> = simplices
        .iter()
        .map(|(_, s)| {
            let mut col: Vec<(usize, u32)> = if s.len() < 2 {
                Vec::new()
            } else {
                (0..s.len())
                    .map(|j| {
                        let mut face = s.clone();
                        face.remove(j);
                        let sign = if j % 2 == 0 { 1 } else { k.neg(1) };
                        (index[face.as_slice()], sign)
                    })
                    .collect()
            };
            col.sort_unstable();
            col
        })
        .collect();
    let red = crate::matrix::reduce_columns(k, &mut cols, |_, _, _| {});
    let dim = |i: usize| simplices[i].1.len() - 1;
    let mut bars = Vec::new();
    for (i, (t, _)) in simplices.iter().enumerate() {
        if dim(i) != degree || red.pivot[i].is_some() {
            continue;
        }
        let death = match red.pivot_col.get(&i) {
            Some(&j) => Death::Finite(simplices[j].0),
            None => Death::Infinite,
        };
        bars.push(Bar {
            degree,
            interval: Interval::new(*t, death).expect("filtration order"),
        });
    }
    Barcode::new(bars)
}

/// The chain complex `C_{k+1} → C_k → C_{k-1}` of a tower, written out
/// index by index with explicit chain maps.
///
/// With a cosheaf, a simplex alive at time `i` carries the stalk of its image
/// in the final complex; chain maps are signed identities on stalks.
pub fn tower_chain_complex(script: &TowerScript, cosheaf: Option<&CosheafData>, k: usize) -> Result<RawComplex> {
    let field = script.field;
    let steps = script.events.len();
    // Complexes after each event, and the vertex map into the next one.
    let mut complexes: Vec<BTreeSet<Vec<u32>>> = Vec::with_capacity(steps);
    let mut current: BTreeSet<Vec<u32>> = BTreeSet::new();
    for e in &script.events {
        match e {
            Event::Include { simplex, .. } => {
                current.insert(simplex.clone());
            }
            Event::Collapse { from, to, .. } => {
                current = current.iter().map(|s| collapse_image(s, *from, *to).0).collect();
            }
        }
        complexes.push(current.clone());
    }
    let final_image = |s: &[u32], after: usize| -> Vec<u32> {
        let mut s = s.to_vec();
        for e in &script.events[after + 1..] {
            if let Event::Collapse { from, to, .. } = e {
                s = collapse_image(&s, *from, *to).0;
            }
        }
        s
    };
    let stalk = |s: &[u32], i: usize| cosheaf.map_or(1, |c| c.stalk(&final_image(s, i)));

    struct Chains {
        cells: Vec<Vec<u32>>,
        offset: Vec<usize>,
        dim: usize,
    }
    let chains = |d: isize, i: usize| -> Chains {
        let cells: Vec<Vec<u32>> = if d < 0 {
            Vec::new()
        } else {
            complexes[i].iter().filter(|s| s.len() == d as usize + 1).cloned().collect()
        };
        let mut offset = Vec::with_capacity(cells.len());
        let mut dim = 0;
        for c in &cells {
            offset.push(dim);
            dim += stalk(c, i);
        }
        Chains { cells, offset, dim }
    };
    let boundary = |d: isize, i: usize| -> Result<DenseMatrix> {
        let (src, dst) = (chains(d, i), chains(d - 1, i));
        let mut m = DenseMatrix::zeros(dst.dim, src.dim);
        if d <= 0 {
            return Ok(m);
        }
        for (c, sigma) in src.cells.iter().enumerate() {
            for j in 0..sigma.len() {
                let mut face = sigma.clone();
                face.remove(j);
                let r = dst.cells.binary_search(&face).expect("faces are present");
                let block = match cosheaf {
                    Some(cs) => cs.restriction(field, &final_image(&face, i), &final_image(sigma, i))?,
                    None => DenseMatrix::identity(1),
                };
                let sign = if j % 2 == 0 { 1 } else { field.neg(1) };
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        m.set(dst.offset[r] + a, src.offset[c] + b, field.mul(sign, block.get(a, b)));
                    }
                }
            }
        }
        Ok(m)
    };
    let chain_map = |d: isize, i: usize| -> DenseMatrix {
        let (src, dst) = (chains(d, i), chains(d, i + 1));
        let mut m = DenseMatrix::zeros(dst.dim, src.dim);
        for (c, sigma) in src.cells.iter().enumerate() {
            let (image, sign) = match &script.events[i + 1] {
                Event::Include { .. } => (sigma.clone(), Some(1)),
                Event::Collapse { from, to, .. } => collapse_image(sigma, *from, *to),
            };
            let Some(sign) = sign.filter(|_| image.len() == sigma.len()) else {
                continue;
            };
            let r = dst.cells.binary_search(&image).expect("image is present");
            for a in 0..stalk(sigma, i) {
                m.set(dst.offset[r] + a, src.offset[c] + a, if sign == 1 { 1 } else { field.neg(1) });
            }
        }
        m
    };
    let module = |d: isize| -> PersistenceModule {
        if steps == 0 {
            return PersistenceModule::zero(0);
        }
        PersistenceModule {
            dims: (0..steps).map(|i| chains(d, i).dim).collect(),
            maps: (0..steps - 1).map(|i| chain_map(d, i)).collect(),
        }
    };
    let kk = k as isize;
    let maps = |d: isize| -> Result<Vec<DenseMatrix>> {
        if steps == 0 {
            return Ok(vec![DenseMatrix::zeros(0, 0)]);
        }
        (0..steps).map(|i| boundary(d, i)).collect()
    };
    RawComplex::new(field, module(kk + 1), module(kk), module(kk - 1), maps(kk + 1)?, maps(kk)?)
}

/// Image of a simplex under the collapse `from → to`, with the orientation
/// sign (`None` when the simplex degenerates).
fn collapse_image(s: &[u32], from: u32, to: u32) -> (Vec<u32>, Option<i8>) {
    if s.binary_search(&from).is_err() {
        return (s.to_vec(), Some(1));
    }
    let mut mapped: Vec<u32> = s.iter().map(|&v| if v == from { to } else { v }).collect();
    // Sort by bubble passes, counting transpositions.
    let mut swaps = 0;
    for i in 0..mapped.len() {
        for j in 0..mapped.len() - 1 - i {
            if mapped[j] > mapped[j + 1] {
                mapped.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    let before = mapped.len();
    mapped.dedup();
    if mapped.len() < before {
        (mapped, None)
    } else {
        (mapped, Some(if swaps % 2 == 0 { 1 } else { -1 }))
    }
}

/// Barcode of a tower (optionally with a cosheaf) in the given degrees,
/// computed pointwise.
pub fn tower_pointwise_barcode(script: &TowerScript, cosheaf: Option<&CosheafData>, degrees: &[usize]) -> Result<Barcode> {
    let mut out = Barcode::default();
    for &k in degrees {
        out = out.merge(pointwise_homology_barcode(&tower_chain_complex(script, cosheaf, k)?, k)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval as I;

    fn mat(rows: &[Vec<u32>]) -> DenseMatrix {
        DenseMatrix::from_vecs(rows)
    }

    #[test]
    fn example_module_barcode() {
        let module = PersistenceModule::new(
            vec![3, 3, 3],
            vec![
                mat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]),
                mat(&[vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]]),
            ],
        )
        .unwrap();
        let b = pointwise_barcode(Field::Z2, &module, 0).unwrap();
        assert_eq!(
            b,
            Barcode::from_intervals(
                0,
                [I::finite(0, 2), I::finite(0, 2), I::finite(0, 1), I::infinite(1), I::infinite(2), I::infinite(2)]
            )
        );
    }

    #[test]
    fn zero_module_is_empty() {
        let b = pointwise_barcode(Field::Z2, &PersistenceModule::zero(3), 0).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn classical_triangle() {
        let k = Field::Z2;
        let f: Vec<(usize, Vec<u32>)> = vec![
            (0, vec![0]),
            (1, vec![1]),
            (2, vec![2]),
            (3, vec![0, 1]),
            (4, vec![1, 2]),
            (5, vec![0, 2]),
            (6, vec![0, 1, 2]),
        ];
        assert_eq!(classical_persistence(k, &f, 1), Barcode::from_intervals(1, [I::finite(5, 6)]));
        assert_eq!(
            classical_persistence(k, &f, 0),
            Barcode::from_intervals(0, [I::infinite(0), I::finite(1, 3), I::finite(2, 4)])
        );
    }

    #[test]
    fn zero_maps_homology_is_middle() {
        let k = Field::new(3).unwrap();
        let mid = PersistenceModule::new(vec![2, 1], vec![mat(&[vec![1, 2]])]).unwrap();
        let zero = PersistenceModule::zero(1);
        let raw = RawComplex::new(
            k,
            zero.clone(),
            mid.clone(),
            zero,
            vec![DenseMatrix::zeros(2, 0), DenseMatrix::zeros(1, 0)],
            vec![DenseMatrix::zeros(0, 2), DenseMatrix::zeros(0, 1)],
        )
        .unwrap();
        assert_eq!(
            pointwise_homology_barcode(&raw, 0).unwrap(),
            pointwise_barcode(k, &mid, 0).unwrap()
        );
    }
}
