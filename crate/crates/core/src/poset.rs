//! Persistent sheaves on finite posets.
//!
//! Cohomology is computed on the order complex, whose simplices are the
//! chains of the poset, after pulling the sheaf back along the projection
//! that sends a chain to its maximum. Zigzag posets take a shortcut through
//! their alternating subposet, which is the face poset of a path graph.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::Barcode;
use crate::matrix::DenseMatrix;
use crate::sheaf::{persistent_sheaf_cohomology, SheafInstance};
use crate::simplicial::SimplicialComplex;

/// Default bound on the number of chains in an order complex.
pub const DEFAULT_CHAIN_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    /// Hasse diagram: `covers_up[x]` lists the elements covering `x`.
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    /// A linear extension and its inverse.
    topo: Vec<usize>,
    rank_of: Vec<usize>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds the poset generated by `relations` (pairs `lo < hi`). The
    /// relations need not be covers; the Hasse diagram is recomputed.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::poset(format!("element {l} is listed twice")));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(lo, hi) in relations {
            if lo >= n || hi >= n {
                return Err(Error::poset(format!("relation {lo} < {hi} names a missing element")));
            }
            if lo == hi {
                return Err(Error::poset(format!("relation {} < {} is reflexive", labels[lo], labels[hi])));
            }
            succ[lo].push(hi);
            indeg[hi] += 1;
        }
        let mut topo = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = ready.pop() {
            topo.push(x);
            for &y in succ[x].iter().rev() {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if topo.len() != n {
            let x = (0..n).find(|&x| indeg[x] > 0).expect("some element is on a cycle");
            return Err(Error::poset(format!("relations through {} form a cycle", labels[x])));
        }
        let mut rank_of = vec![0; n];
        for (r, &x) in topo.iter().enumerate() {
            rank_of[x] = r;
        }
        let mut leq = vec![vec![false; n]; n];
        for &x in topo.iter().rev() {
            leq[x][x] = true;
            for &y in &succ[x] {
                let above = leq[y].clone();
                for (dst, src) in leq[x].iter_mut().zip(above) {
                    *dst |= src;
                }
            }
        }
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                    covers_up[x].push(y);
                    covers_down[y].push(x);
                }
            }
        }
        Ok(FinitePoset {
            labels,
            covers_up,
            covers_down,
            topo,
            rank_of,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|x| self.covers_up[x].iter().map(move |&y| (x, y))).collect()
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.covers_up[x].contains(&y)
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        self.covers_down[x].is_empty()
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        self.covers_up[x].is_empty()
    }

    /// Number of non-empty chains, saturating at `u128::MAX`.
    pub fn chain_count(&self) -> u128 {
        let mut ending = vec![0u128; self.len()];
        let mut total = 0u128;
        for &x in &self.topo {
            let below: u128 = (0..self.len())
                .filter(|&y| y != x && self.leq[y][x])
                .fold(0u128, |acc, y| acc.saturating_add(ending[y]));
            ending[x] = below.saturating_add(1);
            total = total.saturating_add(ending[x]);
        }
        total
    }

    /// The elements in path order if the Hasse diagram is a path, starting
    /// from the end with the smaller element index.
    pub fn zigzag_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        let nbrs: Vec<Vec<usize>> = (0..n)
            .map(|x| self.covers_up[x].iter().chain(&self.covers_down[x]).copied().collect())
            .collect();
        if nbrs.iter().any(|v| v.len() > 2) || nbrs.iter().map(Vec::len).sum::<usize>() != 2 * (n - 1) {
            return None;
        }
        let start = (0..n).find(|&x| nbrs[x].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = nbrs[cur].iter().find(|&&y| y != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_zigzag(&self) -> bool {
        self.zigzag_order().is_some()
    }
}

/// The order complex with vertices numbered along a linear extension, so
/// each chain is a sorted vertex list whose last vertex is its maximum.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    pub complex: SimplicialComplex,
    /// Poset element of each vertex.
    pub vertex_element: Vec<usize>,
    /// Poset element of each simplex: the maximum of the chain.
    pub projection: Vec<usize>,
}

pub fn order_complex(poset: &FinitePoset, limit: u128) -> Result<OrderComplex> {
    let count = poset.chain_count();
    if count > limit {
        return Err(Error::SizeGuard {
            count,
            limit,
            hint: if poset.is_zigzag() {
                "; the poset is a zigzag, use the alternating route"
            } else {
                ""
            },
        });
    }
    let mut chains: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = poset.topo.iter().map(|&x| vec![x]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().expect("non-empty chain");
        for &y in &poset.topo[poset.rank_of[top] + 1..] {
            if poset.leq[top][y] {
                let mut longer = chain.clone();
                longer.push(y);
                stack.push(longer);
            }
        }
        chains.insert(chain.iter().map(|&x| poset.rank_of[x] as u32).collect());
    }
    let complex = SimplicialComplex::from_closed(chains);
    let vertex_element = poset.topo.clone();
    let projection = complex
        .simplices()
        .iter()
        .map(|s| vertex_element[*s.last().expect("non-empty") as usize])
        .collect();
    Ok(OrderComplex {
        complex,
        vertex_element,
        projection,
    })
}

/// A persistent sheaf on a finite poset, with restrictions given on cover
/// relations. Defaults match [`SheafInstance`].
#[derive(Clone, Debug)]
pub struct PosetSheafInstance {
    pub field: Field,
    poset: FinitePoset,
    m: usize,
    stalks: Vec<Vec<usize>>,
    restrictions: HashMap<(usize, usize, usize), DenseMatrix>,
    steps: HashMap<(usize, usize), DenseMatrix>,
}

fn default_map(rows: usize, cols: usize) -> DenseMatrix {
    if rows == cols {
        DenseMatrix::identity(rows)
    } else {
        DenseMatrix::zeros(rows, cols)
    }
}

impl PosetSheafInstance {
    pub fn new(field: Field, poset: FinitePoset, m: usize) -> Self {
        let stalks = vec![vec![0; m + 1]; poset.len()];
        PosetSheafInstance {
            field,
            poset,
            m,
            stalks,
            restrictions: HashMap::new(),
            steps: HashMap::new(),
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set_stalk(&mut self, x: usize, dims: Vec<usize>) -> Result<()> {
        if dims.len() != self.m + 1 {
            return Err(Error::poset(format!(
                "stalk of {} lists {} dimensions, expected {}",
                self.poset.label(x),
                dims.len(),
                self.m + 1
            )));
        }
        self.stalks[x] = dims;
        Ok(())
    }

    pub fn set_restriction(&mut self, lo: usize, hi: usize, i: usize, map: DenseMatrix) -> Result<()> {
        if !self.poset.is_cover(lo, hi) {
            return Err(Error::poset(format!(
                "{} < {} is not a cover relation",
                self.poset.label(lo),
                self.poset.label(hi)
            )));
        }
        if i > self.m {
            return Err(Error::poset(format!("restriction index {i} beyond m = {}", self.m)));
        }
        self.restrictions.insert((lo, hi, i), map);
        Ok(())
    }

    pub fn set_step(&mut self, x: usize, i: usize, map: DenseMatrix) -> Result<()> {
        if i >= self.m {
            return Err(Error::poset(format!("step of {} at index {i}, but m = {}", self.poset.label(x), self.m)));
        }
        self.steps.insert((x, i), map);
        Ok(())
    }

    pub fn stalk_dims(&self, x: usize) -> &[usize] {
        &self.stalks[x]
    }

    fn cover_map(&self, lo: usize, hi: usize, i: usize) -> DenseMatrix {
        self.restrictions
            .get(&(lo, hi, i))
            .cloned()
            .unwrap_or_else(|| default_map(self.stalks[hi][i], self.stalks[lo][i]))
    }

    pub fn step(&self, x: usize, i: usize) -> DenseMatrix {
        self.steps
            .get(&(x, i))
            .cloned()
            .unwrap_or_else(|| default_map(self.stalks[x][i + 1], self.stalks[x][i]))
    }

    /// `F_i(x ≤ y)`, composed along one chain of covers.
    pub fn restriction(&self, x: usize, y: usize, i: usize) -> Result<DenseMatrix> {
        if !self.poset.leq(x, y) {
            return Err(Error::poset(format!("{} is not below {}", self.poset.label(x), self.poset.label(y))));
        }
        let mut map = DenseMatrix::identity(self.stalks[x][i]);
        let mut cur = x;
        while cur != y {
            let next = *self.poset.covers_up[cur]
                .iter()
                .find(|&&z| self.poset.leq(z, y))
                .expect("a cover on the way to y");
            map = self.cover_map(cur, next, i).mul(self.field, &map);
            cur = next;
        }
        Ok(map)
    }

    /// Checks shapes, residues, naturality of steps along covers and that
    /// composed restrictions do not depend on the chosen path.
    pub fn validate(&self) -> Result<()> {
        let k = self.field;
        let p = &self.poset;
        for x in 0..p.len() {
            for i in 0..self.m {
                let st = self.step(x, i);
                if st.shape() != (self.stalks[x][i + 1], self.stalks[x][i]) {
                    return Err(Error::poset(format!(
                        "step of {} at index {i} is {}x{}, stalks need {}x{}",
                        p.label(x),
                        st.rows(),
                        st.cols(),
                        self.stalks[x][i + 1],
                        self.stalks[x][i]
                    )));
                }
                st.check_residues(k, &format!("step of {} at index {i}", p.label(x)))?;
            }
        }
        for (lo, hi) in p.covers() {
            for i in 0..=self.m {
                let r = self.cover_map(lo, hi, i);
                if r.shape() != (self.stalks[hi][i], self.stalks[lo][i]) {
                    return Err(Error::poset(format!(
                        "restriction {} <= {} at index {i} is {}x{}, stalks need {}x{}",
                        p.label(lo),
                        p.label(hi),
                        r.rows(),
                        r.cols(),
                        self.stalks[hi][i],
                        self.stalks[lo][i]
                    )));
                }
                r.check_residues(k, &format!("restriction {} <= {} at index {i}", p.label(lo), p.label(hi)))?;
                if i < self.m && self.cover_map(lo, hi, i + 1).mul(k, &self.step(lo, i)) != self.step(hi, i).mul(k, &r) {
                    return Err(Error::poset(format!(
                        "steps are not natural for {0} <= {1} at index {i}: step of {0} at index {i}, step of {1} at index {i}",
                        p.label(lo),
                        p.label(hi)
                    )));
                }
            }
        }
        for x in 0..p.len() {
            for i in 0..=self.m {
                let mut from_x: HashMap<usize, DenseMatrix> = HashMap::new();
                from_x.insert(x, DenseMatrix::identity(self.stalks[x][i]));
                for &y in &p.topo[p.rank_of[x] + 1..] {
                    if !p.leq(x, y) {
                        continue;
                    }
                    let mut found: Option<DenseMatrix> = None;
                    for &z in &p.covers_down[y] {
                        let Some(mz) = from_x.get(&z) else { continue };
                        let via = self.cover_map(z, y, i).mul(k, mz);
                        match &found {
                            None => found = Some(via),
                            Some(prev) if *prev != via => {
                                return Err(Error::poset(format!(
                                    "restrictions from {} to {} depend on the path at index {i}",
                                    p.label(x),
                                    p.label(y)
                                )))
                            }
                            Some(_) => {}
                        }
                    }
                    from_x.insert(y, found.expect("y lies above x through some cover"));
                }
            }
        }
        Ok(())
    }
}

/// `f*F` on the order complex: a chain carries the data of its maximum.
pub fn pullback_to_order_complex(sheaf: &PosetSheafInstance, limit: u128) -> Result<SheafInstance> {
    sheaf.validate()?;
    let oc = order_complex(&sheaf.poset, limit)?;
    let mut out = SheafInstance::new(sheaf.field, oc.complex.clone(), sheaf.m);
    for (s, simplex) in oc.complex.simplices().iter().enumerate() {
        let x = oc.projection[s];
        out.set_stalk(simplex, sheaf.stalks[x].clone())?;
        for i in 0..sheaf.m {
            if sheaf.steps.contains_key(&(x, i)) {
                out.set_step(simplex, i, sheaf.step(x, i))?;
            }
        }
    }
    for (s, t, _) in oc.complex.facet_pairs() {
        let (x, y) = (oc.projection[s], oc.projection[t]);
        if x == y {
            continue;
        }
        for i in 0..=sheaf.m {
            out.set_restriction(oc.complex.simplex(s), oc.complex.simplex(t), i, sheaf.restriction(x, y, i)?)?;
        }
    }
    Ok(out)
}

/// The alternating subposet of a zigzag: its elements in path order and
/// the inclusion into `X` as element indices.
///
/// The scan takes the leftmost minimal element, then alternately the next
/// maximal and the next minimal element, and stops at the last minimal one.
pub fn alternating_subposet(poset: &FinitePoset) -> Result<(FinitePoset, Vec<usize>)> {
    let order = poset
        .zigzag_order()
        .ok_or_else(|| Error::poset("the Hasse diagram is not a path"))?;
    let mut picked = Vec::new();
    let mut want_min = true;
    let mut last_min = 0;
    for &x in &order {
        if want_min && poset.is_minimal(x) {
            picked.push(x);
            last_min = picked.len();
            want_min = false;
        } else if !want_min && poset.is_maximal(x) {
            picked.push(x);
            want_min = true;
        }
    }
    picked.truncate(last_min);
    let labels = picked.iter().map(|&x| poset.label(x).to_string()).collect();
    let relations: Vec<(usize, usize)> = (1..picked.len())
        .map(|j| if j % 2 == 1 { (j - 1, j) } else { (j, j - 1) })
        .collect();
    Ok((FinitePoset::new(labels, &relations)?, picked))
}

/// `ι*F` on the alternating subposet, written as a sheaf on a path graph:
/// the minima become vertices and the maxima become edges.
pub fn alternating_path_sheaf(sheaf: &PosetSheafInstance) -> Result<SheafInstance> {
    sheaf.validate()?;
    let (_, picked) = alternating_subposet(&sheaf.poset)?;
    let vertices = picked.len().div_ceil(2) as u32;
    let mut maximal: Vec<Vec<u32>> = (0..vertices).map(|v| vec![v]).collect();
    maximal.extend((1..vertices).map(|v| vec![v - 1, v]));
    let complex = SimplicialComplex::from_maximal(&maximal)?;
    let cell = |j: usize| -> Vec<u32> {
        if j.is_multiple_of(2) {
            vec![j as u32 / 2]
        } else {
            vec![j as u32 / 2, j as u32 / 2 + 1]
        }
    };
    let mut out = SheafInstance::new(sheaf.field, complex, sheaf.m);
    for (j, &x) in picked.iter().enumerate() {
        out.set_stalk(&cell(j), sheaf.stalks[x].clone())?;
        for i in 0..sheaf.m {
            out.set_step(&cell(j), i, sheaf.step(x, i))?;
        }
        if j % 2 == 1 {
            for nb in [j - 1, j + 1] {
                for i in 0..=sheaf.m {
                    out.set_restriction(&cell(nb), &cell(j), i, sheaf.restriction(picked[nb], x, i)?)?;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// The alternating subposet for zigzags, the order complex otherwise.
    Auto,
    OrderComplex,
    Alternating,
}

pub fn poset_cohomology(sheaf: &PosetSheafInstance, k: usize, route: Route, limit: u128, keep_empty: bool) -> Result<Barcode> {
    let zigzag = sheaf.poset.is_zigzag();
    let flat = match route {
        Route::Alternating => alternating_path_sheaf(sheaf)?,
        Route::Auto if zigzag => alternating_path_sheaf(sheaf)?,
        _ => pullback_to_order_complex(sheaf, limit)?,
    };
    persistent_sheaf_cohomology(&flat, k, keep_empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval as I;

    fn poset(labels: &[&str], rel: &[(usize, usize)]) -> FinitePoset {
        FinitePoset::new(labels.iter().map(|s| s.to_string()).collect(), rel).unwrap()
    }

    #[test]
    fn two_chain_order_complex() {
        let p = poset(&["x0", "x1"], &[(0, 1)]);
        let oc = order_complex(&p, DEFAULT_CHAIN_LIMIT).unwrap();
        assert_eq!(oc.complex.simplices(), &[vec![0], vec![1], vec![0, 1]]);
        assert_eq!(oc.projection, vec![0, 1, 1]);
    }

    #[test]
    fn antichain_and_v_poset() {
        let a = poset(&["a", "b", "c", "d"], &[]);
        let oc = order_complex(&a, DEFAULT_CHAIN_LIMIT).unwrap();
        assert_eq!((oc.complex.len(), oc.complex.dim()), (4, Some(0)));
        let v = poset(&["a", "b", "c"], &[(0, 2), (1, 2)]);
        let oc = order_complex(&v, DEFAULT_CHAIN_LIMIT).unwrap();
        assert_eq!(oc.complex.of_dim(1).len(), 2);
        assert_eq!(oc.complex.euler(), 1);
        assert!(v.is_zigzag());
    }

    #[test]
    fn transitive_relations_are_not_covers() {
        let p = poset(&["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.chain_count(), 7);
        assert!(FinitePoset::new(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn guard_mentions_the_zigzag_route() {
        let p = poset(&["a", "b", "c"], &[(0, 1), (1, 2)]);
        let err = order_complex(&p, 3).unwrap_err();
        assert!(err.to_string().contains("alternating"), "{err}");
    }

    #[test]
    fn alternating_scan() {
        // x0 < x1 < x2 > x3 < x4 > x5
        let p = poset(&["x0", "x1", "x2", "x3", "x4", "x5"], &[(0, 1), (1, 2), (3, 2), (3, 4), (5, 4)]);
        let (sub, picked) = alternating_subposet(&p).unwrap();
        assert_eq!(picked, vec![0, 2, 3, 4, 5]);
        assert!(sub.leq(0, 1) && sub.leq(2, 1) && sub.leq(2, 3) && sub.leq(4, 3));
        let chain = poset(&["x0", "x1", "x2"], &[(0, 1), (1, 2)]);
        assert_eq!(alternating_subposet(&chain).unwrap().1, vec![0]);
        let vee = poset(&["a", "b", "c"], &[(0, 1), (2, 1)]);
        assert_eq!(alternating_subposet(&vee).unwrap().1, vec![0, 1, 2]);
    }

    #[test]
    fn constant_sheaf_on_v_poset() {
        let v = poset(&["a", "b", "c"], &[(0, 2), (1, 2)]);
        let mut s = PosetSheafInstance::new(Field::Z2, v, 0);
        for x in 0..3 {
            s.set_stalk(x, vec![1]).unwrap();
        }
        for route in [Route::OrderComplex, Route::Alternating] {
            let h0 = poset_cohomology(&s, 0, route, DEFAULT_CHAIN_LIMIT, false).unwrap();
            assert_eq!(h0, Barcode::from_intervals(0, [I::infinite(0)]));
            assert!(poset_cohomology(&s, 1, route, DEFAULT_CHAIN_LIMIT, false).unwrap().is_empty());
        }
    }

    #[test]
    fn chain_limit_is_the_minimum_stalk() {
        let c = poset(&["x0", "x1", "x2"], &[(0, 1), (1, 2)]);
        let mut s = PosetSheafInstance::new(Field::Z2, c, 4);
        s.set_stalk(0, vec![0, 1, 1, 1, 0]).unwrap();
        s.set_stalk(1, vec![1, 1, 1, 0, 0]).unwrap();
        s.set_stalk(2, vec![1, 1, 0, 0, 0]).unwrap();
        let h0 = poset_cohomology(&s, 0, Route::OrderComplex, DEFAULT_CHAIN_LIMIT, false).unwrap();
        // Restrictions are identities where both stalks are non-zero.
        assert_eq!(h0, Barcode::from_intervals(0, [I::finite(1, 4)]));
    }

    #[test]
    fn path_dependent_restrictions_are_rejected() {
        // a < b, a < c, b < d, c < d with F(a -> b) = 0.
        let p = poset(&["a", "b", "c", "d"], &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let mut s = PosetSheafInstance::new(Field::Z2, p, 0);
        for x in 0..4 {
            s.set_stalk(x, vec![1]).unwrap();
        }
        s.set_restriction(0, 1, 0, DenseMatrix::zeros(1, 1)).unwrap();
        let err = s.validate().unwrap_err();
        assert!(err.to_string().contains("from a to d"), "{err}");
    }
}
