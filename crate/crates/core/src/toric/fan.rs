use std::collections::{BTreeMap, HashSet};

use super::linalg::{det, unimodular_inverse};
use super::polytope::LatticePolytope;
use crate::error::{Error, Result};

/// Complete regular simplicial fan.
///
/// Rays are indexed `0..p` here and correspond to `mu_1..mu_p`; relation
/// vectors carry an extra leading slot for the origin `mu_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    /// per cone: rows `u_j` with `<u_j, ray(cone[k])> = delta_jk`
    duals: Vec<Vec<Vec<i64>>>,
}

/// Codimension-one cone shared by two maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub common: Vec<usize>,
    pub cones: (usize, usize),
    /// the rays of the two cones off the wall
    pub off_rays: (usize, usize),
}

impl FanData {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        for r in &rays {
            if r.len() != dim {
                return Err(Error::InvalidFan(format!("ray {r:?} is not in Z^{dim}")));
            }
        }
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        let mut duals = Vec::with_capacity(cones.len());
        for c in &cones {
            if c.len() != dim || c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {c:?} is not a set of {dim} rays")));
            }
            let m: Vec<Vec<i64>> = (0..dim).map(|row| c.iter().map(|&i| rays[i][row]).collect()).collect();
            let d = det(&m);
            if d.abs() != 1 {
                return Err(Error::InvalidFan(format!("cone {c:?} is not regular (determinant {d})")));
            }
            duals.push(unimodular_inverse(&m).expect("unimodular"));
        }
        let fan = Self { dim, rays, cones, duals };
        for (face, count) in fan.codim_one_counts() {
            if count != 2 {
                return Err(Error::InvalidFan(format!(
                    "codimension-one cone {face:?} lies in {count} maximal cones; the fan is not complete"
                )));
            }
        }
        for i in 0..fan.rays.len() {
            if !fan.cones.iter().any(|c| c.contains(&i)) {
                return Err(Error::InvalidFan(format!("ray {i} lies in no maximal cone")));
            }
        }
        Ok(fan)
    }

    fn codim_one_counts(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.cones {
            for skip in 0..c.len() {
                let face: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
                *counts.entry(face).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Dual basis of maximal cone `c`, row `j` pairing to one with `cones[c][j]`.
    pub fn dual_basis(&self, c: usize) -> &[Vec<i64>] {
        &self.duals[c]
    }

    /// Picard rank `p - d`.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - self.dim
    }

    /// Index of the first maximal cone containing all given rays.
    pub fn cone_containing(&self, rays: &[usize]) -> Option<usize> {
        self.cones.iter().position(|c| rays.iter().all(|r| c.contains(r)))
    }

    pub fn is_face(&self, rays: &[usize]) -> bool {
        self.cone_containing(rays).is_some()
    }

    /// All faces (including the empty face) as sorted ray sets, grouped by size.
    pub fn faces_by_dim(&self) -> Vec<Vec<Vec<usize>>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = vec![Vec::new(); self.dim + 1];
        for c in &self.cones {
            for mask in 0u32..(1 << c.len()) {
                let face: Vec<usize> =
                    c.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &i)| i).collect();
                if seen.insert(face.clone()) {
                    out[face.len()].push(face);
                }
            }
        }
        for v in out.iter_mut() {
            v.sort();
        }
        out
    }

    pub fn walls(&self) -> Vec<Wall> {
        let mut out = Vec::new();
        for (a, ca) in self.cones.iter().enumerate() {
            for (b, cb) in self.cones.iter().enumerate().skip(a + 1) {
                let common: Vec<usize> = ca.iter().filter(|i| cb.contains(i)).copied().collect();
                if common.len() + 1 != self.dim {
                    continue;
                }
                let off_a = *ca.iter().find(|i| !common.contains(i)).unwrap();
                let off_b = *cb.iter().find(|i| !common.contains(i)).unwrap();
                out.push(Wall { common, cones: (a, b), off_rays: (off_a, off_b) });
            }
        }
        out
    }

    /// Coordinates of `v` in the ray basis of maximal cone `c`.
    pub fn coordinates_in_cone(&self, c: usize, v: &[i64]) -> Vec<i64> {
        self.duals[c].iter().map(|u| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Face fan of a polytope: rays are the vertices, maximal cones the facets.
///
/// `ray_order[i]` selects the vertex used as ray `i`.
pub fn fan_from_polytope(p: &LatticePolytope, ray_order: Option<&[usize]>) -> Result<FanData> {
    let n = p.vertices().len();
    let order: Vec<usize> = match ray_order {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::Precondition(format!("ray_order {o:?} is not a permutation of 0..{n}")));
            }
            o.to_vec()
        }
        None => (0..n).collect(),
    };
    let mut position = vec![0; n];
    for (ray, &vertex) in order.iter().enumerate() {
        position[vertex] = ray;
    }
    let rays: Vec<Vec<i64>> = order.iter().map(|&v| p.vertices()[v].clone()).collect();
    let mut cones = Vec::new();
    for f in p.facets() {
        if f.vertices.len() != p.dim() {
            return Err(Error::NonSimplicialFacet(f.vertices));
        }
        cones.push(f.vertices.iter().map(|&v| position[v]).collect());
    }
    FanData::new(p.dim(), rays, cones)
}
