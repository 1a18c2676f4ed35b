//! Finite abstract simplicial complexes with a fixed simplex order.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Simplices are strictly increasing vertex lists, stored by dimension and
/// then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SimplicialComplex {
    /// The closure of the given simplices under taking faces.
    pub fn from_maximal(maximal: &[Vec<u32>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::sheaf(format!("simplex {s:?} is empty or repeats a vertex")));
            }
            if s.len() > 24 {
                return Err(Error::sheaf(format!("simplex {s:?} has too many vertices")));
            }
            for mask in 1u32..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        Ok(Self::from_closed(all))
    }

    pub(crate) fn from_closed(all: BTreeSet<Vec<u32>>) -> Self {
        let mut simplices: Vec<Vec<u32>> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        SimplicialComplex { simplices, index }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Vec<u32>] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &[u32] {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Indices of the `k`-simplices, in order. Negative `k` gives none.
    pub fn of_dim(&self, k: isize) -> Vec<usize> {
        if k < 0 {
            return Vec::new();
        }
        (0..self.len()).filter(|&i| self.simplices[i].len() == k as usize + 1).collect()
    }

    /// Every codimension-1 pair `(σ, τ, j)` with `σ` equal to `τ` minus its
    /// `j`-th vertex, ordered by `τ` and then `j`.
    pub fn facet_pairs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (t, tau) in self.simplices.iter().enumerate() {
            if tau.len() < 2 {
                continue;
            }
            for j in 0..tau.len() {
                let mut sigma = tau.clone();
                sigma.remove(j);
                out.push((self.index[&sigma], t, j));
            }
        }
        out
    }

    /// `(-1)^j`, or `None` if `sigma` is not a facet of `tau`.
    pub fn incidence(&self, sigma: usize, tau: usize) -> Option<(usize, bool)> {
        let (s, t) = (&self.simplices[sigma], &self.simplices[tau]);
        if s.len() + 1 != t.len() {
            return None;
        }
        let j = (0..t.len()).find(|&j| t.iter().enumerate().filter(|&(x, _)| x != j).map(|(_, v)| v).eq(s.iter()))?;
        Some((j, j % 2 == 1))
    }

    /// Euler characteristic.
    pub fn euler(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_closure() {
        let k = SimplicialComplex::from_maximal(&[vec![2, 0, 1]]).unwrap();
        assert_eq!(k.len(), 7);
        assert_eq!(k.of_dim(1).len(), 3);
        assert_eq!(k.euler(), 1);
        let t = k.index_of(&[0, 1, 2]).unwrap();
        let e = k.index_of(&[0, 2]).unwrap();
        assert_eq!(k.incidence(e, t), Some((1, true)));
        assert_eq!(k.facet_pairs().len(), 9);
    }

    #[test]
    fn rejects_repeated_vertices() {
        assert!(SimplicialComplex::from_maximal(&[vec![1, 1]]).is_err());
    }
}
