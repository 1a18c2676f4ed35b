//! Dense Gaussian elimination over a prime field.

use crate::field::Field;
use crate::matrix::DenseMatrix;

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(k: Field, a: &DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let (x, y) = (m.get(r, j), m.get(p, j));
                m.set(r, j, y);
                m.set(p, j, x);
            }
        }
        let inv = k.inv(m.get(r, c));
        for j in 0..cols {
            let v = k.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            let f = m.get(i, c);
            if i != r && f != 0 {
                for j in 0..cols {
                    let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(k: Field, a: &DenseMatrix) -> usize {
    rref(k, a).1.len()
}

/// Basis of the null space, one vector per free column.
pub fn kernel(k: Field, a: &DenseMatrix) -> Vec<Vec<u32>> {
    let (r, pivots) = rref(k, a);
    let cols = a.cols();
    let mut is_pivot = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = k.neg(r.get(row, free));
            }
            v
        })
        .collect()
}

/// Some `x` with `a x = b`, if one exists.
pub fn solve(k: Field, a: &DenseMatrix, b: &[u32]) -> Option<Vec<u32>> {
    let (rows, cols) = a.shape();
    assert_eq!(rows, b.len());
    let mut aug = DenseMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, cols, b[i]);
    }
    let (r, pivots) = rref(k, &aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, cols);
    }
    Some(x)
}

/// Matrix whose columns are the given vectors of length `len`.
pub fn from_columns(len: usize, vectors: &[Vec<u32>]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(len, vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        assert_eq!(v.len(), len);
        for (r, &x) in v.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

/// Greedily picks vectors from `candidates` that are independent modulo
/// the span of `base`; returns the picked vectors.
pub fn extend_basis(k: Field, len: usize, base: &[Vec<u32>], candidates: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut current: Vec<Vec<u32>> = base.to_vec();
    let mut r = rank(k, &from_columns(len, &current));
    let mut picked = Vec::new();
    for v in candidates {
        current.push(v.clone());
        let r2 = rank(k, &from_columns(len, &current));
        if r2 > r {
            r = r2;
            picked.push(v.clone());
        } else {
            current.pop();
        }
    }
    picked
}

/// A random invertible `n x n` matrix together with its inverse.
pub fn random_invertible<R: rand::Rng>(k: Field, n: usize, rng: &mut R) -> (DenseMatrix, DenseMatrix) {
    loop {
        let mut m = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen_range(0..k.p()));
            }
        }
        if rank(k, &m) == n {
            let inv = inverse(k, &m).expect("full rank");
            return (m, inv);
        }
    }
}

pub fn inverse(k: Field, a: &DenseMatrix) -> Option<DenseMatrix> {
    let n = a.rows();
    if a.cols() != n {
        return None;
    }
    let mut aug = DenseMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n + i, 1);
    }
    let (r, pivots) = rref(k, &aug);
    if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
        return None;
    }
    let mut inv = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.get(i, n + j));
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn rank_and_kernel_agree() {
        let k = Field::new(3).unwrap();
        let a = DenseMatrix::from_vecs(&[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 0, 1, 1]]);
        let r = rank(k, &a);
        let ker = kernel(k, &a);
        assert_eq!(r + ker.len(), 4);
        for v in ker {
            assert!(a.mul_vec(k, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_finds_preimages_only_in_image() {
        let k = Field::Z2;
        let a = DenseMatrix::from_vecs(&[vec![1, 1], vec![1, 1]]);
        assert!(solve(k, &a, &[1, 0]).is_none());
        let x = solve(k, &a, &[1, 1]).unwrap();
        assert_eq!(a.mul_vec(k, &x), vec![1, 1]);
    }

    #[test]
    fn random_inverse_is_inverse() {
        let k = Field::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 0..5 {
            let (m, inv) = random_invertible(k, n, &mut rng);
            assert_eq!(m.mul(k, &inv), DenseMatrix::identity(n));
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        let k = Field::Z2;
        assert!(inverse(k, &DenseMatrix::from_vecs(&[vec![1, 1], vec![1, 1]])).is_none());
    }
}
