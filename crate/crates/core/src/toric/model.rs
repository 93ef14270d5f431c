use std::collections::BTreeMap;

use super::cohomology::{CohClass, CohomologyRing};
use super::fan::{fan_from_polytope, FanData};
use super::lattice::{mori_basis, MoriBasis};
use super::polytope::{validate_fano, LatticePolytope, ValidationReport};
use crate::error::{Error, Result};
use crate::exactnum::{BigRat, TransScalar};
use crate::gammaseq::ChernVector;

/// Everything derived from one smooth Fano polytope: fan, Mori basis,
/// cohomology ring, the classes `J_k` and the Chern classes of the
/// anticanonical hypersurface `V`.
#[derive(Debug)]
pub struct ToricModel {
    polytope: LatticePolytope,
    validation: ValidationReport,
    mori: MoriBasis,
    ring: CohomologyRing,
    j: Vec<CohClass>,
    chern: ChernVector<CohClass>,
}

impl ToricModel {
    pub fn from_polytope(
        polytope: LatticePolytope,
        ray_order: Option<&[usize]>,
        mori_override: Option<&[Vec<i64>]>,
    ) -> Result<Self> {
        let validation = validate_fano(&polytope);
        if !validation.passed() {
            return Err(Error::NotSmoothFano(validation.failed_ids().join(", ")));
        }
        let fan = fan_from_polytope(&polytope, ray_order)?;
        Self::from_fan(polytope, validation, fan, mori_override)
    }

    fn from_fan(
        polytope: LatticePolytope,
        validation: ValidationReport,
        fan: FanData,
        mori_override: Option<&[Vec<i64>]>,
    ) -> Result<Self> {
        let mori = mori_basis(&fan, mori_override)?;
        let ring = CohomologyRing::new(fan)?;
        let j = ring.j_classes(&mori)?;
        let chern = ring.chern_class_hypersurface()?;
        Ok(Self { polytope, validation, mori, ring, j, chern })
    }

    /// The reflexive simplex whose fan is that of `P^d`.
    pub fn projective_space(d: usize) -> Result<Self> {
        let mut v: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        v.push(vec![-1; d]);
        Self::from_polytope(LatticePolytope::new(d, v)?, None, None)
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.validation
    }

    pub fn fan(&self) -> &FanData {
        self.ring.fan()
    }

    pub fn mori(&self) -> &MoriBasis {
        &self.mori
    }

    pub fn ring(&self) -> &CohomologyRing {
        &self.ring
    }

    /// Dimension `d` of the toric variety.
    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Dimension `d - 1` of the Calabi-Yau hypersurface.
    pub fn cy_dim(&self) -> usize {
        self.ring.dim() - 1
    }

    /// Picard rank `r`.
    pub fn rank(&self) -> usize {
        self.mori.rank()
    }

    pub fn j_classes(&self) -> &[CohClass] {
        &self.j
    }

    pub fn chern(&self) -> &ChernVector<CohClass> {
        &self.chern
    }

    /// `J_{i_1} ... J_{i_k}` for 1-based indices.
    pub fn j_monomial(&self, indices: &[usize]) -> Result<CohClass> {
        let mut out = self.ring.one();
        for &i in indices {
            if i == 0 || i > self.rank() {
                return Err(Error::IndexOutOfRange { index: i, limit: self.rank() });
            }
            out = out.try_mul(&self.j[i - 1])?;
        }
        Ok(out)
    }

    /// `int_V J_{i_1} ... J_{i_{d-1}}`, the normalized coupling at the
    /// maximal degeneracy point (1-based indices).
    pub fn coupling(&self, indices: &[usize]) -> Result<BigRat> {
        if indices.len() != self.cy_dim() {
            return Err(Error::DegreeMismatch { expected: self.cy_dim(), found: indices.len() });
        }
        let v = self.ring.integrate_over_v(&self.j_monomial(indices)?)?;
        rational(&v)
    }

    /// `int_X J_{i_1} ... J_{i_d}` on the ambient variety (1-based indices).
    pub fn ambient_coupling(&self, indices: &[usize]) -> Result<BigRat> {
        if indices.len() != self.dim() {
            return Err(Error::DegreeMismatch { expected: self.dim(), found: indices.len() });
        }
        rational(&self.ring.intersection_number(&self.j_monomial(indices)?)?)
    }

    /// All couplings keyed by sorted 1-based index tuples such as `"1,1,2"`.
    pub fn coupling_tensor(&self) -> Result<BTreeMap<String, BigRat>> {
        let mut out = BTreeMap::new();
        for idx in sorted_tuples(self.rank(), self.cy_dim()) {
            let key = idx.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            out.insert(key, self.coupling(&idx)?);
        }
        Ok(out)
    }
}

fn rational(v: &TransScalar) -> Result<BigRat> {
    v.as_rational().ok_or_else(|| Error::Precondition(format!("intersection number {v} is not rational")))
}

/// Nondecreasing tuples of length `len` over `1..=r`.
pub fn sorted_tuples(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, r: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..=r {
            cur.push(i);
            rec(i, r, len, cur, out);
            cur.pop();
        }
    }
    rec(1, r, len, &mut cur, &mut out);
    out
}

/// All tuples of length `len` over `1..=r`, in lexicographic order.
pub fn all_tuples(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=r).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}
