//! Persistent homology of simplicial towers.
//!
//! A tower is a stream of elementary inclusions and elementary vertex
//! collapses. The engine keeps one sparse boundary matrix per dimension whose
//! columns and rows are the generators of the chain modules, so it never
//! builds the chain maps of the tower. Every generator carries the time it
//! was included and, once its chain vanishes, the time of that collapse.
//!
//! Each alive simplex label owns a block of generators together with a sign
//! `s`. The block's image at the current time is `s` times the oriented
//! simplex (tensored with the stalk basis in the cosheaf case). A collapse
//! either kills a block, merges two blocks by one column addition and one
//! row addition per generator, or just renames a block.

use std::collections::{BTreeMap, HashMap};

use crate::cosheaf_tower::CosheafData;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::AnnotatedMatrix;
use crate::interval::{Barcode, Death, Interval};
use crate::matrix::BiSparse;
use crate::pres_hom::homology_of_pair;

/// One elementary step of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// Adds the simplex spanned by the sorted vertex list.
    Include { time: usize, simplex: Vec<u32> },
    /// Identifies vertex `from` with vertex `to`; `from` disappears.
    Collapse { time: usize, from: u32, to: u32 },
}

impl Event {
    pub fn time(&self) -> usize {
        match self {
            Event::Include { time, .. } | Event::Collapse { time, .. } => *time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerScript {
    pub field: Field,
    pub events: Vec<Event>,
}

impl TowerScript {
    /// Checks that times run `0, 1, 2, ...` and that every simplex is a
    /// strictly increasing vertex list.
    pub fn new(field: Field, events: Vec<Event>) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            if e.time() != i {
                return Err(Error::tower(e.time(), format!("expected time {i}")));
            }
            if let Event::Include { simplex, .. } = e {
                if simplex.is_empty() {
                    return Err(Error::tower(i, "empty simplex"));
                }
                if simplex.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::tower(i, "simplex vertices must be distinct and sorted"));
                }
            }
        }
        Ok(TowerScript { field, events })
    }

    /// A filtration in the given order, one inclusion per time step.
    pub fn from_filtration(field: Field, simplices: &[(usize, Vec<u32>)]) -> Result<Self> {
        let events = simplices
            .iter()
            .enumerate()
            .map(|(time, (_, s))| {
                let mut simplex = s.clone();
                simplex.sort_unstable();
                Event::Include { time, simplex }
            })
            .collect();
        TowerScript::new(field, events)
    }

    pub fn n_inclusions(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Include { .. })).count()
    }

    pub fn max_simplex_dim(&self) -> Option<usize> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Include { simplex, .. } => Some(simplex.len() - 1),
                Event::Collapse { .. } => None,
            })
            .max()
    }
}

/// Per-dimension boundary presentations produced by the engine.
#[derive(Clone, Debug)]
pub struct TowerPresentation {
    /// `boundaries[k]` presents `∂_k : C_k → C_{k-1}`; `boundaries[0]` has
    /// no rows and the last entry has no columns.
    pub boundaries: Vec<AnnotatedMatrix>,
    /// Entry updates spent on column and row additions.
    pub ops: u64,
}

impl TowerPresentation {
    pub fn max_dim(&self) -> usize {
        self.boundaries.len() - 2
    }

    pub fn boundary(&self, k: usize) -> Option<&AnnotatedMatrix> {
        self.boundaries.get(k)
    }

    /// Barcode of `H_k`, available for `k ≤ max_dim`.
    pub fn homology(&self, k: usize, keep_empty: bool) -> Result<Barcode> {
        if k > self.max_dim() {
            return Err(Error::shape("tower homology degree", format!("at most {}", self.max_dim()), k));
        }
        homology_of_pair(&self.boundaries[k + 1], &self.boundaries[k], k, keep_empty)
    }
}

/// Runs the tower engine keeping simplices of dimension `≤ max_dim`.
/// Larger simplices are an error.
pub fn tower_presentations(script: &TowerScript, max_dim: usize) -> Result<TowerPresentation> {
    run(script, max_dim, true, None)
}

/// Persistent homology in each of `degrees`.
///
/// Simplices of dimension above `max(degrees) + 1` cannot change these
/// groups and are skipped.
pub fn tower_homology(script: &TowerScript, degrees: &[usize], keep_empty: bool) -> Result<Barcode> {
    let Some(&top) = degrees.iter().max() else {
        return Ok(Barcode::default());
    };
    let pres = run(script, top + 1, false, None)?;
    let mut out = Barcode::default();
    for &k in degrees {
        out = out.merge(pres.homology(k, keep_empty)?);
    }
    Ok(out)
}

pub(crate) fn run(
    script: &TowerScript,
    max_dim: usize,
    strict: bool,
    cosheaf: Option<&CosheafData>,
) -> Result<TowerPresentation> {
    let finals = match cosheaf {
        Some(_) => Some(final_vertex_images(script)?),
        None => None,
    };
    let mut engine = Engine::new(script.field, max_dim, strict, cosheaf);
    for (i, event) in script.events.iter().enumerate() {
        match event {
            Event::Include { time, simplex } => {
                let fin = finals.as_ref().map(|f| f[i].as_slice());
                engine.include(*time, simplex, fin)?;
            }
            Event::Collapse { time, from, to } => engine.collapse(*time, *from, *to)?,
        }
    }
    engine.finish()
}

/// For each inclusion, the label each of its vertices carries at the end of
/// the tower. Collapse events get an empty list.
pub(crate) fn final_vertex_images(script: &TowerScript) -> Result<Vec<Vec<u32>>> {
    let mut alive: HashMap<u32, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut label: Vec<u32> = Vec::new();
    let mut instances: Vec<Vec<usize>> = Vec::with_capacity(script.events.len());
    for event in &script.events {
        match event {
            Event::Include { time, simplex } => {
                if simplex.len() == 1 && !alive.contains_key(&simplex[0]) {
                    let id = parent.len();
                    parent.push(id);
                    label.push(simplex[0]);
                    alive.insert(simplex[0], id);
                }
                let ids = simplex
                    .iter()
                    .map(|v| alive.get(v).copied().ok_or_else(|| Error::tower(*time, format!("vertex {v} is not alive"))))
                    .collect::<Result<Vec<_>>>()?;
                instances.push(ids);
            }
            Event::Collapse { time, from, to } => {
                let (Some(&b), Some(&a)) = (alive.get(from), alive.get(to)) else {
                    return Err(Error::tower(*time, format!("collapse {from} -> {to} needs two alive vertices")));
                };
                if a == b {
                    return Err(Error::tower(*time, "collapse of a vertex onto itself"));
                }
                parent[b] = a;
                alive.remove(from);
                instances.push(Vec::new());
            }
        }
    }
    let root = |mut i: usize| {
        while parent[i] != i {
            i = parent[i];
        }
        i
    };
    Ok(instances
        .into_iter()
        .map(|ids| ids.into_iter().map(|i| label[root(i)]).collect())
        .collect())
}

/// Sorted, deduplicated image of a vertex list.
pub(crate) fn image_simplex(vertices: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut s: Vec<u32> = vertices.into_iter().collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// What a collapse `b → a` does to one simplex containing `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Fate {
    /// The simplex also contains `a` and maps to a lower-dimensional one.
    Degenerate,
    /// Maps to `target` with orientation sign `(-1)^odd`.
    Moves { target: Vec<u32>, odd: bool },
}

pub(crate) fn fate(simplex: &[u32], from: u32, to: u32) -> Fate {
    if simplex.binary_search(&to).is_ok() {
        return Fate::Degenerate;
    }
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let between = simplex.iter().filter(|&&v| lo < v && v < hi).count();
    let target = image_simplex(simplex.iter().map(|&v| if v == from { to } else { v }));
    Fate::Moves {
        target,
        odd: between % 2 == 1,
    }
}

#[derive(Clone, Debug)]
struct Cell {
    gens: Vec<usize>,
    sign: u32,
    birth: usize,
}

struct Engine<'a> {
    k: Field,
    max_dim: usize,
    strict: bool,
    cosheaf: Option<&'a CosheafData>,
    /// `bd[d]`: rows are generators of dimension `d - 1`, columns of `d`.
    bd: Vec<BiSparse>,
    births: Vec<Vec<usize>>,
    deaths: Vec<Vec<Death>>,
    live: Vec<BTreeMap<Vec<u32>, Cell>>,
}

impl<'a> Engine<'a> {
    fn new(k: Field, max_dim: usize, strict: bool, cosheaf: Option<&'a CosheafData>) -> Self {
        Engine {
            k,
            max_dim,
            strict,
            cosheaf,
            bd: (0..max_dim + 2).map(|_| BiSparse::new(k)).collect(),
            births: vec![Vec::new(); max_dim + 1],
            deaths: vec![Vec::new(); max_dim + 1],
            live: vec![BTreeMap::new(); max_dim + 1],
        }
    }

    fn include(&mut self, time: usize, simplex: &[u32], fin: Option<&[u32]>) -> Result<()> {
        let d = simplex.len() - 1;
        if d > self.max_dim {
            if self.strict {
                return Err(Error::tower(time, format!("simplex of dimension {d} above the maximum {}", self.max_dim)));
            }
            return Ok(());
        }
        if self.live[d].contains_key(simplex) {
            return Err(Error::tower(time, format!("simplex {simplex:?} is already alive")));
        }
        let faces: Vec<Vec<u32>> = if d == 0 {
            Vec::new()
        } else {
            (0..=d)
                .map(|j| {
                    let mut f = simplex.to_vec();
                    f.remove(j);
                    f
                })
                .collect()
        };
        for f in &faces {
            if !self.live[d - 1].contains_key(f) {
                return Err(Error::tower(time, format!("face {f:?} of {simplex:?} is not alive")));
            }
        }

        let (block, blocks): (usize, Vec<crate::matrix::DenseMatrix>) = match (self.cosheaf, fin) {
            (Some(cs), Some(fin)) => {
                let image = image_simplex(fin.iter().copied());
                let block = cs.stalk(&image);
                let blocks = (0..faces.len())
                    .map(|j| {
                        let face_image = image_simplex(fin.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v));
                        cs.restriction(self.k, &face_image, &image)
                    })
                    .collect::<Result<Vec<_>>>()?;
                (block, blocks)
            }
            _ => (1, vec![crate::matrix::DenseMatrix::identity(1); faces.len()]),
        };

        let mut gens = Vec::with_capacity(block);
        for c in 0..block {
            let mut entries = Vec::new();
            for (j, (face, ext)) in faces.iter().zip(&blocks).enumerate() {
                let cell = &self.live[d - 1][face];
                let orient = if j % 2 == 0 { 1 } else { self.k.neg(1) };
                let coeff = self.k.mul(orient, self.k.inv(cell.sign));
                for (r, &g) in cell.gens.iter().enumerate() {
                    let v = self.k.mul(coeff, ext.get(r, c));
                    if v != 0 {
                        entries.push((g, v));
                    }
                }
            }
            let g = self.bd[d].push_col(entries);
            let row = self.bd[d + 1].push_row();
            debug_assert_eq!(g, row);
            self.births[d].push(time);
            self.deaths[d].push(Death::Infinite);
            gens.push(g);
        }
        self.live[d].insert(
            simplex.to_vec(),
            Cell {
                gens,
                sign: 1,
                birth: time,
            },
        );
        Ok(())
    }

    fn collapse(&mut self, time: usize, from: u32, to: u32) -> Result<()> {
        if from == to || !self.live[0].contains_key(&vec![from]) || !self.live[0].contains_key(&vec![to]) {
            return Err(Error::tower(time, format!("collapse {from} -> {to} needs two distinct alive vertices")));
        }
        for d in 0..=self.max_dim {
            let affected: Vec<Vec<u32>> = self.live[d]
                .keys()
                .filter(|s| s.binary_search(&from).is_ok())
                .cloned()
                .collect();
            let cells: Vec<(Vec<u32>, Cell)> = affected
                .into_iter()
                .map(|s| {
                    let c = self.live[d].remove(&s).expect("listed as alive");
                    (s, c)
                })
                .collect();
            for (simplex, cell) in cells {
                match fate(&simplex, from, to) {
                    Fate::Degenerate => {
                        for &g in &cell.gens {
                            self.deaths[d][g] = Death::Finite(time);
                        }
                    }
                    Fate::Moves { target, odd } => {
                        let eps = if odd { self.k.neg(1) } else { 1 };
                        let alpha = self.k.mul(cell.sign, eps);
                        match self.live[d].remove(&target) {
                            Some(other) => {
                                let survivor = self.merge(d, time, (cell, alpha), (other.clone(), other.sign));
                                self.live[d].insert(target, survivor);
                            }
                            None => {
                                self.live[d].insert(target, Cell { sign: alpha, ..cell });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Two blocks now map to multiples `α_x`, `α_y` of the same simplex.
    /// The later block becomes `later - (α_l/α_e) earlier`, which vanishes.
    fn merge(&mut self, d: usize, time: usize, x: (Cell, u32), y: (Cell, u32)) -> Cell {
        let ((early, ae), (late, al)) = if x.0.birth < y.0.birth { (x, y) } else { (y, x) };
        assert_eq!(early.gens.len(), late.gens.len(), "merged blocks have different stalks");
        let mu = self.k.div(al, ae);
        for (&e, &l) in early.gens.iter().zip(&late.gens) {
            self.bd[d].col_axpy(l, self.k.neg(mu), e);
            self.bd[d + 1].row_axpy(e, mu, l);
            self.deaths[d][l] = Death::Finite(time);
        }
        Cell { sign: ae, ..early }
    }

    fn annotations(&self, d: usize) -> Vec<Interval> {
        self.births[d]
            .iter()
            .zip(&self.deaths[d])
            .map(|(&b, &death)| Interval::new(b, death).expect("deaths follow births"))
            .collect()
    }

    fn snapshot(&self) -> Result<Vec<AnnotatedMatrix>> {
        (0..=self.max_dim + 1)
            .map(|d| {
                let rows = if d == 0 { Vec::new() } else { self.annotations(d - 1) };
                let cols = if d <= self.max_dim { self.annotations(d) } else { Vec::new() };
                AnnotatedMatrix::new(self.k, rows, cols, self.bd[d].columns())
            })
            .collect()
    }

    fn finish(self) -> Result<TowerPresentation> {
        let boundaries = self.snapshot()?;
        Ok(TowerPresentation {
            boundaries,
            ops: self.bd.iter().map(BiSparse::ops).sum(),
        })
    }
}

/// Steps through a script and hands the presentation after every event to
/// `inspect`. Used to check invariants along the way.
pub fn tower_presentations_each(
    script: &TowerScript,
    max_dim: usize,
    mut inspect: impl FnMut(usize, &[AnnotatedMatrix]) -> Result<()>,
) -> Result<()> {
    let mut engine = Engine::new(script.field, max_dim, true, None);
    for event in &script.events {
        match event {
            Event::Include { time, simplex } => engine.include(*time, simplex, None)?,
            Event::Collapse { time, from, to } => engine.collapse(*time, *from, *to)?,
        }
        inspect(event.time(), &engine.snapshot()?)?;
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::interval::Interval as I;
    use crate::matrix::DenseMatrix;

    /// The twelve-step tower on vertices u, v, w, z = 0, 1, 2, 3.
    pub(crate) fn four_vertex_tower() -> TowerScript {
        let (u, v, w, z) = (0, 1, 2, 3);
        let inc = |time, s: &[u32]| Event::Include {
            time,
            simplex: s.to_vec(),
        };
        TowerScript::new(
            Field::Z2,
            vec![
                inc(0, &[u]),
                inc(1, &[v]),
                inc(2, &[w]),
                inc(3, &[z]),
                inc(4, &[u, v]),
                inc(5, &[v, w]),
                inc(6, &[w, z]),
                inc(7, &[u, z]),
                inc(8, &[u, w]),
                Event::Collapse { time: 9, from: z, to: w },
                Event::Collapse { time: 10, from: w, to: v },
                Event::Collapse { time: 11, from: v, to: u },
            ],
        )
        .unwrap()
    }

    #[test]
    fn four_vertex_tower_final_matrix() {
        let pres = tower_presentations(&four_vertex_tower(), 1).unwrap();
        let d1 = pres.boundary(1).unwrap();
        assert_eq!(
            d1.col_ann(),
            &[I::finite(4, 11), I::finite(5, 10), I::finite(6, 9), I::finite(7, 10), I::finite(8, 9)]
        );
        assert_eq!(
            d1.row_ann(),
            &[I::infinite(0), I::finite(1, 11), I::finite(2, 10), I::finite(3, 9)]
        );
        let expected = DenseMatrix::from_vecs(&[
            vec![0, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 0, 1, 0],
            vec![0, 0, 1, 1, 1],
        ]);
        assert_eq!(d1.to_dense(), expected);
        d1.validate().unwrap();
    }

    #[test]
    fn four_vertex_tower_homology() {
        let b = tower_homology(&four_vertex_tower(), &[0, 1], false).unwrap();
        // The square u-v-w-z closes at 7 and the diagonal uw adds a second
        // cycle at 8. At 9 the square becomes the triangle u-v-w, which
        // survives until w collapses at 10.
        let bar = |degree, interval| crate::interval::Bar { degree, interval };
        assert_eq!(
            b,
            Barcode::new([
                bar(0, I::infinite(0)),
                bar(0, I::finite(1, 4)),
                bar(0, I::finite(2, 5)),
                bar(0, I::finite(3, 6)),
                bar(1, I::finite(7, 10)),
                bar(1, I::finite(8, 9)),
            ])
        );
    }

    #[test]
    fn rejects_malformed_events() {
        let k = Field::Z2;
        let bad_face = TowerScript::new(k, vec![Event::Include { time: 0, simplex: vec![0, 1] }]).unwrap();
        assert!(matches!(tower_presentations(&bad_face, 1), Err(Error::Tower { time: 0, .. })));
        let dead = TowerScript::new(
            k,
            vec![
                Event::Include { time: 0, simplex: vec![0] },
                Event::Collapse { time: 1, from: 0, to: 5 },
            ],
        )
        .unwrap();
        assert!(matches!(tower_presentations(&dead, 0), Err(Error::Tower { time: 1, .. })));
        assert!(TowerScript::new(k, vec![Event::Include { time: 1, simplex: vec![0] }]).is_err());
        let tall = TowerScript::from_filtration(k, &[(0, vec![0]), (1, vec![1]), (2, vec![0, 1])]).unwrap();
        assert!(matches!(tower_presentations(&tall, 0), Err(Error::Tower { time: 2, .. })));
    }

    #[test]
    fn empty_script() {
        let s = TowerScript::new(Field::Z2, vec![]).unwrap();
        assert!(tower_homology(&s, &[0, 1], false).unwrap().is_empty());
    }

    #[test]
    fn orientation_signs_over_z3() {
        // Triangle 0,1,2 then collapse 2 -> 0: edge 12 merges into 01 with
        // a sign flip, 02 degenerates, and the triangle dies.
        let k = Field::new(3).unwrap();
        let mut events: Vec<Event> = [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
            .into_iter()
            .enumerate()
            .map(|(time, simplex)| Event::Include { time, simplex })
            .collect();
        events.push(Event::Collapse { time: 7, from: 2, to: 0 });
        let s = TowerScript::new(k, events).unwrap();
        let pres = tower_presentations(&s, 2).unwrap();
        for b in &pres.boundaries {
            b.validate().unwrap();
        }
        let h = tower_homology(&s, &[0, 1, 2], false).unwrap();
        let expect = Barcode::new([
            crate::interval::Bar { degree: 0, interval: I::infinite(0) },
            crate::interval::Bar { degree: 0, interval: I::finite(1, 3) },
            crate::interval::Bar { degree: 0, interval: I::finite(2, 4) },
            crate::interval::Bar { degree: 1, interval: I::finite(5, 6) },
        ]);
        assert_eq!(h, expect);
    }

    #[test]
    fn fate_signs() {
        assert_eq!(fate(&[1, 3], 3, 0), Fate::Moves { target: vec![0, 1], odd: true });
        assert_eq!(fate(&[1, 3, 5], 3, 4), Fate::Moves { target: vec![1, 4, 5], odd: false });
        assert_eq!(fate(&[0, 3], 3, 0), Fate::Degenerate);
    }
}
