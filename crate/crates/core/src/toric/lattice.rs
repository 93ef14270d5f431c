use serde::Serialize;

use super::fan::FanData;
use super::linalg::{det, hnf_rows, integer_kernel, rat_to_i64, solve_in_span, to_rat_matrix};
use crate::error::{Error, Result};
use crate::gammaseq::combinations;

/// Z-basis of the lattice of relations `sum_i l_i (1, mu_i) = 0`, with `mu_0 = 0`.
///
/// Vectors have length `p + 1`, slot 0 belonging to the origin. The basis is
/// put in Hermite form with pivots searched over `l_1..l_p` first, so it is
/// deterministic for a given fan.
pub fn relation_lattice(fan: &FanData) -> Vec<Vec<i64>> {
    let p = fan.num_rays();
    let d = fan.dim();
    let mut a = vec![vec![1i64; p + 1]];
    for row in 0..d {
        let mut r = vec![0i64];
        r.extend(fan.rays().iter().map(|mu| mu[row]));
        a.push(r);
    }
    let kernel = integer_kernel(&a);
    let mut order: Vec<usize> = (1..=p).collect();
    order.push(0);
    hnf_rows(&kernel, &order)
}

/// Primitive relation of every wall, deduplicated and sorted in descending
/// lexicographic order of `(l_1, ..., l_p)`.
///
/// For a wall between cones `sigma` and `sigma'`, the off-wall ray `mu_b` of
/// `sigma'` is written in the basis of `sigma`; the relation has `l_b = 1`
/// and is positive on both off-wall rays.
pub fn wall_relations(fan: &FanData) -> Vec<Vec<i64>> {
    let p = fan.num_rays();
    let mut out: Vec<Vec<i64>> = Vec::new();
    for w in fan.walls() {
        let (ca, _) = w.cones;
        let b = w.off_rays.1;
        let x = fan.coordinates_in_cone(ca, fan.ray(b));
        let mut l = vec![0i64; p + 1];
        l[b + 1] = 1;
        for (&i, xi) in fan.cones()[ca].iter().zip(&x) {
            l[i + 1] -= xi;
        }
        l[0] = -l[1..].iter().sum::<i64>();
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out.sort_by(|a, b| b[1..].cmp(&a[1..]));
    out
}

/// Basis `l^(1)..l^(r)` of the relation lattice generating the Mori cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoriBasis {
    vectors: Vec<Vec<i64>>,
    lattice: Vec<Vec<i64>>,
    walls: Vec<Vec<i64>>,
}

impl MoriBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Number of rays `p`; each vector has `p + 1` entries.
    pub fn num_rays(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len() - 1)
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// `l^(k)` for `0 <= k < r`.
    pub fn vector(&self, k: usize) -> &[i64] {
        &self.vectors[k]
    }

    pub fn relation_lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn wall_relations(&self) -> &[Vec<i64>] {
        &self.walls
    }

    /// Entry `l_i^(k)` as a linear form in `rho_1..rho_r`, for slot `i` in `0..=p`.
    pub fn slot_form(&self, i: usize) -> Vec<i64> {
        self.vectors.iter().map(|l| l[i]).collect()
    }

    /// The relation `sum_k m_k l^(k)`.
    pub fn combine(&self, m: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.num_rays() + 1];
        for (l, &mk) in self.vectors.iter().zip(m) {
            for (o, x) in out.iter_mut().zip(l) {
                *o += mk * x;
            }
        }
        out
    }

    /// Integer coordinates of `l` in this basis, `None` if `l` is not in its span.
    pub fn coordinates(&self, l: &[i64]) -> Option<Vec<i64>> {
        coordinates_in(&self.vectors, l)
    }
}

fn coordinates_in(basis: &[Vec<i64>], l: &[i64]) -> Option<Vec<i64>> {
    let cols = to_rat_matrix(basis);
    let target = &to_rat_matrix(&[l.to_vec()])[0];
    solve_in_span(&cols, target)?.iter().map(rat_to_i64).collect()
}

fn check_candidate(basis: &[Vec<i64>], lattice: &[Vec<i64>], walls: &[Vec<i64>]) -> std::result::Result<(), String> {
    let r = lattice.len();
    if basis.len() != r {
        return Err(format!("{} vectors given, the relation lattice has rank {r}", basis.len()));
    }
    let mut coords = Vec::with_capacity(r);
    for l in basis {
        match coordinates_in(lattice, l) {
            Some(c) => coords.push(c),
            None => return Err(format!("{l:?} is not a relation among the rays")),
        }
    }
    if det(&coords).abs() != 1 {
        return Err(format!("{basis:?} spans a sublattice of index {}", det(&coords).abs()));
    }
    for l in basis {
        if l[0] > 0 {
            return Err(format!("{l:?} has positive origin entry"));
        }
    }
    for w in walls {
        match coordinates_in(basis, w) {
            Some(c) if c.iter().all(|&x| x >= 0) => {}
            Some(c) => return Err(format!("wall relation {w:?} has coordinates {c:?}")),
            None => return Err(format!("wall relation {w:?} is outside the span")),
        }
    }
    Ok(())
}

/// Chooses the first `r`-subset of wall relations (in [`wall_relations`]
/// order) that is a Z-basis of the relation lattice and writes every wall
/// relation with nonnegative coordinates. An override is validated the same way.
pub fn mori_basis(fan: &FanData, override_basis: Option<&[Vec<i64>]>) -> Result<MoriBasis> {
    let lattice = relation_lattice(fan);
    let walls = wall_relations(fan);
    let r = lattice.len();
    if let Some(given) = override_basis {
        let p = fan.num_rays();
        if let Some(bad) = given.iter().find(|l| l.len() != p + 1) {
            return Err(Error::MoriBasis(format!("override vector {bad:?} does not have {} entries", p + 1)));
        }
        check_candidate(given, &lattice, &walls).map_err(Error::MoriBasis)?;
        return Ok(MoriBasis { vectors: given.to_vec(), lattice, walls });
    }
    if r == 0 {
        return Err(Error::MoriBasis("the relation lattice is trivial".into()));
    }
    let mut last = String::from("no wall relations");
    for subset in combinations(walls.len(), r) {
        let basis: Vec<Vec<i64>> = subset.iter().map(|&i| walls[i].clone()).collect();
        match check_candidate(&basis, &lattice, &walls) {
            Ok(()) => return Ok(MoriBasis { vectors: basis, lattice, walls }),
            Err(e) => last = e,
        }
    }
    Err(Error::MoriBasis(format!("no subset of the {} wall relations qualifies (last: {last})", walls.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{fan_from_polytope, LatticePolytope};

    fn fan(dim: usize, v: Vec<Vec<i64>>) -> FanData {
        fan_from_polytope(&LatticePolytope::new(dim, v).unwrap(), None).unwrap()
    }

    fn p2xp2() -> FanData {
        fan(
            4,
            vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![-1, -1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, -1, -1],
            ],
        )
    }

    #[test]
    fn p4_relations() {
        let mut v: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        v.push(vec![-1; 4]);
        let f = fan(4, v);
        assert_eq!(relation_lattice(&f), vec![vec![-5, 1, 1, 1, 1, 1]]);
        let mb = mori_basis(&f, None).unwrap();
        assert_eq!(mb.vectors(), &[vec![-5, 1, 1, 1, 1, 1]]);
    }

    #[test]
    fn p1xp1_relations() {
        let f = fan(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]);
        let lat = relation_lattice(&f);
        assert_eq!(lat, vec![vec![-2, 1, 1, 0, 0], vec![-2, 0, 0, 1, 1]]);
        assert_eq!(mori_basis(&f, None).unwrap().vectors(), lat.as_slice());
    }

    #[test]
    fn p2xp2_relations() {
        let f = p2xp2();
        let expected = vec![vec![-3, 1, 1, 1, 0, 0, 0], vec![-3, 0, 0, 0, 1, 1, 1]];
        assert_eq!(relation_lattice(&f), expected);
        assert_eq!(mori_basis(&f, None).unwrap().vectors(), expected.as_slice());
    }

    #[test]
    fn blowup_picks_extremal_classes() {
        let f = fan(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1], vec![1, 1, 1]]);
        let mb = mori_basis(&f, None).unwrap();
        assert_eq!(mb.vectors(), &[vec![-2, 1, 1, 1, 0, -1], vec![-2, 0, 0, 0, 1, 1]]);
        assert_eq!(mb.wall_relations().len(), 3);
        assert_eq!(mb.coordinates(&[-4, 1, 1, 1, 1, 0]), Some(vec![1, 1]));
    }

    #[test]
    fn override_is_validated() {
        let f = fan(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]);
        let swapped = vec![vec![-2, 0, 0, 1, 1], vec![-2, 1, 1, 0, 0]];
        assert_eq!(mori_basis(&f, Some(&swapped)).unwrap().vectors(), swapped.as_slice());
        let bad = vec![vec![-4, 1, 1, 1, 1], vec![-2, 1, 1, 0, 0]];
        assert!(matches!(mori_basis(&f, Some(&bad)), Err(Error::MoriBasis(_))));
        let not_relation = vec![vec![-2, 1, 0, 1, 0], vec![-2, 1, 1, 0, 0]];
        assert!(mori_basis(&f, Some(&not_relation)).is_err());
    }
}
