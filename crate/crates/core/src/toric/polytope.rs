use std::collections::BTreeMap;

use serde::Serialize;

use super::linalg::{det, dot, gcd_all, rank, to_rat_matrix};
use crate::error::{Error, Result};
use crate::gammaseq::combinations;

/// Full-dimensional lattice polytope given by its vertices in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

/// A facet with primitive outer normal: `<normal, v> = offset` on the facet
/// and `<normal, x> <= offset` on the polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub vertices: Vec<usize>,
}

impl LatticePolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("polytope dimension must be positive".into()));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::Precondition(format!("vertex {v:?} is not in Z^{dim}")));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::Precondition(format!("vertex {v:?} is repeated")));
            }
        }
        if vertices.len() <= dim {
            return Err(Error::Precondition(format!(
                "{} vertices cannot span a {dim}-dimensional polytope",
                vertices.len()
            )));
        }
        let diffs: Vec<Vec<i64>> =
            vertices[1..].iter().map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect()).collect();
        if rank(&to_rat_matrix(&diffs)) != dim {
            return Err(Error::Precondition("polytope is not full-dimensional".into()));
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Facets by brute force over affinely independent `d`-subsets of vertices.
    pub fn facets(&self) -> Vec<Facet> {
        let d = self.dim;
        let mut found: BTreeMap<Vec<i64>, Facet> = BTreeMap::new();
        for subset in combinations(self.vertices.len(), d) {
            let base = &self.vertices[subset[0]];
            let rows: Vec<Vec<i64>> =
                subset[1..].iter().map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let mut normal: Vec<i64> = (0..d)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    (sign * det(&minor)) as i64
                })
                .collect();
            let g = gcd_all(&normal);
            if g == 0 {
                continue;
            }
            for x in normal.iter_mut() {
                *x /= g;
            }
            let offset = dot(&normal, base);
            let values: Vec<i64> = self.vertices.iter().map(|v| dot(&normal, v)).collect();
            let (below, above) =
                values.iter().fold((false, false), |(lo, hi), &x| (lo || x < offset, hi || x > offset));
            let (normal, offset) = match (below, above) {
                (true, true) => continue,
                (false, true) => (normal.iter().map(|x| -x).collect::<Vec<_>>(), -offset),
                _ => (normal, offset),
            };
            found.entry(normal.clone()).or_insert_with(|| Facet {
                vertices: (0..self.vertices.len()).filter(|&i| dot(&normal, &self.vertices[i]) == offset).collect(),
                normal,
                offset,
            });
        }
        let mut facets: Vec<Facet> = found.into_values().collect();
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        facets
    }

    /// Lattice points strictly inside, by a bounding-box scan.
    pub fn interior_points(&self, facets: &[Facet]) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.dim).map(|j| self.vertices.iter().map(|v| v[j]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|j| self.vertices.iter().map(|v| v[j]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if facets.iter().all(|f| dot(&f.normal, &x) < f.offset) {
                out.push(x.clone());
            }
            let mut j = 0;
            loop {
                if j == self.dim {
                    return out;
                }
                if x[j] < hi[j] {
                    x[j] += 1;
                    break;
                }
                x[j] = lo[j];
                j += 1;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dimension: usize,
    pub conditions: Vec<ConditionCheck>,
    /// How facet equations are normalized in the witnesses.
    pub convention: String,
    pub interior_points: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }
}

/// Checks the smooth reflexive conditions (a)-(d) and reports per condition.
pub fn validate_fano(p: &LatticePolytope) -> ValidationReport {
    let facets = p.facets();
    let interior = p.interior_points(&facets);
    let d = p.dim();

    let a = ConditionCheck {
        id: "a".into(),
        description: "vertices are lattice points".into(),
        passed: true,
        witnesses: vec![],
    };

    let origin = vec![0; d];
    let b_ok = interior.len() == 1 && interior[0] == origin;
    let b = ConditionCheck {
        id: "b".into(),
        description: "the origin is the only interior lattice point".into(),
        passed: b_ok,
        witnesses: if b_ok {
            vec![]
        } else if interior.contains(&origin) {
            interior.iter().filter(|x| **x != origin).map(|x| format!("{x:?}")).collect()
        } else {
            vec!["origin is not interior".into()]
        },
    };

    let mut c_bad = Vec::new();
    let mut d_bad = Vec::new();
    for f in &facets {
        if f.vertices.len() != d {
            c_bad.push(format!("facet {:?} has {} vertices", f.vertices, f.vertices.len()));
        } else {
            let m: Vec<Vec<i64>> = f.vertices.iter().map(|&i| p.vertices()[i].clone()).collect();
            let det = det(&m);
            if det.abs() != 1 {
                c_bad.push(format!("facet {:?} has determinant {det}", f.vertices));
            }
        }
        if f.offset != 1 {
            d_bad.push(format!("facet {:?} lies on <{:?}, x> = {}", f.vertices, f.normal, f.offset));
        }
    }
    let c = ConditionCheck {
        id: "c".into(),
        description: "each facet's vertices form a basis of the lattice".into(),
        passed: c_bad.is_empty(),
        witnesses: c_bad,
    };
    let dd = ConditionCheck {
        id: "d".into(),
        description: "each facet lies at lattice distance one from the origin".into(),
        passed: d_bad.is_empty(),
        witnesses: d_bad,
    };
    ValidationReport {
        dimension: d,
        conditions: vec![a, b, c, dd],
        convention: "outer primitive normal u with <u, v> = 1 on the facet (equivalently l = -u takes the value -1)"
            .into(),
        interior_points: interior,
        facets,
    }
}
