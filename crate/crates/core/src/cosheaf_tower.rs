//! Persistent cosheaf homology over simplicial towers.
//!
//! A cosheaf `F` on the final complex `K_m` is pulled back along the tower,
//! so a simplex alive at time `i` carries the stalk of its image in `K_m`
//! and the tower's chain maps are identities on stalks. The engine of
//! [`crate::tower`] runs unchanged with one block of generators per simplex.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::Barcode;
use crate::matrix::DenseMatrix;
use crate::tower::{final_vertex_images, image_simplex, run, Event, TowerPresentation, TowerScript};

/// Stalks and extension maps of a cosheaf on the final complex.
///
/// Simplices without an explicit stalk get `default_stalk`. A missing
/// extension map between stalks of equal dimension is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosheafData {
    pub default_stalk: usize,
    stalks: BTreeMap<Vec<u32>, usize>,
    ext: BTreeMap<(Vec<u32>, Vec<u32>), DenseMatrix>,
}

impl Default for CosheafData {
    fn default() -> Self {
        CosheafData::constant(1)
    }
}

fn name(s: &[u32]) -> String {
    s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl CosheafData {
    /// The constant cosheaf with stalk `𝕜^d`.
    pub fn constant(d: usize) -> Self {
        CosheafData {
            default_stalk: d,
            stalks: BTreeMap::new(),
            ext: BTreeMap::new(),
        }
    }

    pub fn set_stalk(&mut self, simplex: Vec<u32>, dim: usize) {
        self.stalks.insert(simplex, dim);
    }

    /// Sets the map `F(cofacet) → F(face)`, of shape
    /// `stalk(face) × stalk(cofacet)`.
    pub fn set_ext(&mut self, face: Vec<u32>, cofacet: Vec<u32>, map: DenseMatrix) {
        self.ext.insert((face, cofacet), map);
    }

    /// Explicitly set stalks.
    pub fn stalks(&self) -> impl Iterator<Item = (&[u32], usize)> {
        self.stalks.iter().map(|(s, &d)| (s.as_slice(), d))
    }

    /// Explicitly set extension maps, keyed by `(face, cofacet)`.
    pub fn extensions(&self) -> impl Iterator<Item = (&[u32], &[u32], &DenseMatrix)> {
        self.ext.iter().map(|((f, c), m)| (f.as_slice(), c.as_slice(), m))
    }

    pub fn stalk(&self, simplex: &[u32]) -> usize {
        self.stalks.get(simplex).copied().unwrap_or(self.default_stalk)
    }

    fn ext_step(&self, face: &[u32], cofacet: &[u32]) -> Result<DenseMatrix> {
        let (r, c) = (self.stalk(face), self.stalk(cofacet));
        match self.ext.get(&(face.to_vec(), cofacet.to_vec())) {
            Some(m) if m.shape() == (r, c) => Ok(m.clone()),
            Some(m) => Err(Error::Cosheaf {
                reason: format!(
                    "extension {} <= {} has shape {}x{}, stalks need {r}x{c}",
                    name(face),
                    name(cofacet),
                    m.rows(),
                    m.cols()
                ),
            }),
            None if r == c => Ok(DenseMatrix::identity(r)),
            None => Err(Error::Cosheaf {
                reason: format!(
                    "missing extension {} <= {} between stalks of dimension {r} and {c}",
                    name(face),
                    name(cofacet)
                ),
            }),
        }
    }

    /// `F(face ≤ coface)` for any face, composed along the chain that drops
    /// the extra vertices of `coface` in increasing order.
    pub fn restriction(&self, k: Field, face: &[u32], coface: &[u32]) -> Result<DenseMatrix> {
        if face.iter().any(|v| coface.binary_search(v).is_err()) {
            return Err(Error::Cosheaf {
                reason: format!("{} is not a face of {}", name(face), name(coface)),
            });
        }
        let mut current = coface.to_vec();
        let mut map = DenseMatrix::identity(self.stalk(coface));
        for &v in coface.iter().filter(|v| face.binary_search(v).is_err()) {
            let next: Vec<u32> = current.iter().copied().filter(|&x| x != v).collect();
            map = self.ext_step(&next, &current)?.mul(k, &map);
            current = next;
        }
        Ok(map)
    }

    /// Checks the data against the final complex: keys are simplices of it,
    /// extension shapes match the stalks, and the two paths through every
    /// codimension-2 square agree.
    pub fn validate(&self, k: Field, complex: &BTreeSet<Vec<u32>>) -> Result<()> {
        let missing = |s: &[u32]| Error::Cosheaf {
            reason: format!("{} is not a simplex of the final complex", name(s)),
        };
        if let Some(s) = self.stalks.keys().find(|s| !complex.contains(*s)) {
            return Err(missing(s));
        }
        for ((face, cofacet), m) in &self.ext {
            for s in [face, cofacet] {
                if !complex.contains(s) {
                    return Err(missing(s));
                }
            }
            if face.len() + 1 != cofacet.len() || face.iter().any(|v| cofacet.binary_search(v).is_err()) {
                return Err(Error::Cosheaf {
                    reason: format!("{} is not a facet of {}", name(face), name(cofacet)),
                });
            }
            m.check_residues(k, &format!("extension {} <= {}", name(face), name(cofacet)))?;
        }
        for tau in complex {
            for i in 0..tau.len() {
                let mut sigma = tau.clone();
                sigma.remove(i);
                if !sigma.is_empty() {
                    self.ext_step(&sigma, tau)?;
                }
            }
            for i in 0..tau.len() {
                for j in i + 1..tau.len() {
                    if tau.len() < 3 {
                        continue;
                    }
                    let drop = |x: usize| -> Vec<u32> { tau.iter().enumerate().filter(|&(t, _)| t != x).map(|(_, &v)| v).collect() };
                    let (a, b) = (drop(i), drop(j));
                    let rho: Vec<u32> = tau.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &v)| v).collect();
                    let via_a = self.ext_step(&rho, &a)?.mul(k, &self.ext_step(&a, tau)?);
                    let via_b = self.ext_step(&rho, &b)?.mul(k, &self.ext_step(&b, tau)?);
                    if via_a != via_b {
                        return Err(Error::Cosheaf {
                            reason: format!("extensions from {} to {} depend on the path", name(tau), name(&rho)),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The final complex `K_m`: images of every included simplex.
pub fn final_complex(script: &TowerScript) -> Result<BTreeSet<Vec<u32>>> {
    let finals = final_vertex_images(script)?;
    Ok(script
        .events
        .iter()
        .zip(finals)
        .filter(|(e, _)| matches!(e, Event::Include { .. }))
        .map(|(_, fin)| image_simplex(fin))
        .collect())
}

/// Block presentations of the cosheaf chain complex, one matrix per
/// dimension up to the largest included simplex.
pub fn cosheaf_tower_presentations(script: &TowerScript, cosheaf: &CosheafData) -> Result<TowerPresentation> {
    cosheaf.validate(script.field, &final_complex(script)?)?;
    run(script, script.max_simplex_dim().unwrap_or(0), true, Some(cosheaf))
}

/// Persistent cosheaf homology in each of `degrees`.
pub fn cosheaf_tower_homology(
    script: &TowerScript,
    cosheaf: &CosheafData,
    degrees: &[usize],
    keep_empty: bool,
) -> Result<Barcode> {
    let Some(&top) = degrees.iter().max() else {
        return Ok(Barcode::default());
    };
    cosheaf.validate(script.field, &final_complex(script)?)?;
    let pres = run(script, top + 1, false, Some(cosheaf))?;
    let mut out = Barcode::default();
    for &k in degrees {
        out = out.merge(pres.homology(k, keep_empty)?);
    }
    Ok(out)
}
