use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::fan::FanData;
use super::lattice::MoriBasis;
use super::linalg::{inverse, rank, to_rat_matrix};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, BigRat, TransScalar};
use crate::gammaseq::{ChernVector, ClassAlgebra};
use crate::series::{Exponents, TruncSeries};

/// Cohomology class of the toric variety as a polynomial in `D_1..D_p`.
///
/// The polynomial is not automatically in normal form; use
/// [`CohomologyRing::reduce`] before comparing classes.
#[derive(Clone, Debug, PartialEq)]
pub struct CohClass(TruncSeries<TransScalar>);

impl CohClass {
    pub fn from_series(s: TruncSeries<TransScalar>) -> Self {
        Self(s)
    }

    pub fn series(&self) -> &TruncSeries<TransScalar> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree_part(&self, j: u32) -> Self {
        Self(self.0.homogeneous(j))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&other.0)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_sub(&other.0)?))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_mul(&other.0)?))
    }

    pub fn scale(&self, s: &TransScalar) -> Self {
        Self(self.0.mul_scalar(s))
    }

    pub fn pow(&self, n: u32) -> Self {
        Self(self.0.pow(n))
    }

    /// Maximum total degree among the terms, `None` for the zero class.
    pub fn max_degree(&self) -> Option<u32> {
        self.0.terms().map(|(e, _)| e.degree()).max()
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponents, &TransScalar)> = self.0.terms().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0 .0.cmp(&a.0 .0)));
        for (k, (e, c)) in terms.iter().enumerate() {
            let negative = c.len() == 1 && c.terms().all(|(_, q)| q < &BigRat::zero());
            let flipped;
            let c = if negative && k > 0 {
                write!(f, " - ")?;
                flipped = -*c;
                &flipped
            } else {
                if k > 0 {
                    write!(f, " + ")?;
                }
                *c
            };
            let mono: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("D{}", i + 1) } else { format!("D{}^{a}", i + 1) })
                    .collect();
            let coeff = if c.len() > 1 { format!("({c})") } else { c.to_string() };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl ClassAlgebra for CohClass {
    fn zero_like(&self) -> Self {
        Self(self.0.zero_like())
    }
    fn one_like(&self) -> Self {
        Self(self.0.one_like())
    }
    fn add(&self, other: &Self) -> Self {
        Self(ClassAlgebra::add(&self.0, &other.0))
    }
    fn sub(&self, other: &Self) -> Self {
        Self(ClassAlgebra::sub(&self.0, &other.0))
    }
    fn mul(&self, other: &Self) -> Self {
        Self(ClassAlgebra::mul(&self.0, &other.0))
    }
    fn scale(&self, s: &TransScalar) -> Self {
        Self(self.0.mul_scalar(s))
    }
}

/// Per-degree data for the normal form: a monomial basis of `H^{2j}` and
/// test monomials of complementary degree with an invertible pairing.
#[derive(Debug)]
struct DegreeBasis {
    basis: Vec<Vec<u32>>,
    tests: Vec<Vec<u32>>,
    /// inverse of the pairing matrix `M[b][t]`
    inv_pairing: Vec<Vec<BigRat>>,
}

/// `H^*(X)` of a smooth complete toric variety, with intersection numbers.
///
/// Intersections of degree-`d` monomials are computed recursively: a
/// repeated divisor `D_i` is traded via a linear relation `<u, mu> = 0` with
/// `u` dual to ray `i` in a cone containing the support, which strictly
/// grows the support and so terminates within `d` steps.
#[derive(Debug)]
pub struct CohomologyRing {
    fan: FanData,
    eliminated: Vec<usize>,
    degrees: Vec<DegreeBasis>,
    memo: Mutex<HashMap<Vec<u32>, BigRat>>,
}

impl CohomologyRing {
    pub fn new(fan: FanData) -> Result<Self> {
        let eliminated = fan.cones()[0].clone();
        let mut ring = Self { fan, eliminated, degrees: Vec::new(), memo: Mutex::new(HashMap::new()) };
        let d = ring.dim();
        let betti = ring.betti_numbers();
        let faces = ring.fan.faces_by_dim();
        for j in 0..=d {
            let tests_all: Vec<Vec<u32>> = faces[d - j].iter().map(|f| ring.square_free(f)).collect();
            let mut candidates = ring.face_monomials(j as u32);
            candidates.sort_by_key(|a| {
                let mass: u32 = ring.eliminated.iter().map(|&i| a[i]).sum();
                (mass, std::cmp::Reverse(a.clone()))
            });
            let mut chosen = Vec::new();
            let mut rows: Vec<Vec<BigRat>> = Vec::new();
            for c in candidates {
                if chosen.len() == betti[j] {
                    break;
                }
                let row: Vec<BigRat> = tests_all.iter().map(|t| ring.intersect(&add_exps(&c, t))).collect();
                rows.push(row);
                if rank(&rows) == rows.len() {
                    chosen.push(c);
                } else {
                    rows.pop();
                }
            }
            if chosen.len() != betti[j] {
                return Err(Error::InvalidFan(format!(
                    "degree {j}: found {} independent classes, expected {}",
                    chosen.len(),
                    betti[j]
                )));
            }
            // columns: greedy independent subset of the test monomials
            let mut tests = Vec::new();
            let mut cols: Vec<Vec<BigRat>> = Vec::new();
            for (t, test) in tests_all.iter().enumerate() {
                if tests.len() == chosen.len() {
                    break;
                }
                cols.push(rows.iter().map(|r| r[t].clone()).collect());
                if rank(&cols) == cols.len() {
                    tests.push(test.clone());
                } else {
                    cols.pop();
                }
            }
            // cols[t][b] is the transpose of the pairing matrix
            let pairing: Vec<Vec<BigRat>> =
                (0..chosen.len()).map(|b| cols.iter().map(|c| c[b].clone()).collect()).collect();
            let inv_pairing = inverse(&pairing)
                .ok_or_else(|| Error::InvalidFan(format!("degenerate intersection pairing in degree {j}")))?;
            ring.degrees.push(DegreeBasis { basis: chosen, tests, inv_pairing });
        }
        Ok(ring)
    }

    pub fn fan(&self) -> &FanData {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn num_divisors(&self) -> usize {
        self.fan.num_rays()
    }

    /// `dim H^{2j}` from the h-vector of the fan.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let d = self.dim();
        let f: Vec<usize> = self.fan.faces_by_dim().iter().map(Vec::len).collect();
        (0..=d)
            .map(|j| {
                let mut h = BigInt::zero();
                for (i, &fi) in f.iter().enumerate().take(j + 1) {
                    let term = binomial((d - i) as u64, (j - i) as u64) * BigInt::from(fi);
                    if (j - i) % 2 == 0 {
                        h += term;
                    } else {
                        h -= term;
                    }
                }
                usize::try_from(h).expect("h-vector entries of a smooth complete fan are nonnegative")
            })
            .collect()
    }

    fn square_free(&self, face: &[usize]) -> Vec<u32> {
        let mut e = vec![0u32; self.num_divisors()];
        for &i in face {
            e[i] = 1;
        }
        e
    }

    /// Monomials of degree `j` whose support is a cone of the fan.
    fn face_monomials(&self, j: u32) -> Vec<Vec<u32>> {
        let p = self.num_divisors();
        let mut out = Vec::new();
        let mut cur = vec![0u32; p];
        fn rec(ring: &CohomologyRing, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == cur.len() {
                if left == 0 {
                    let support: Vec<usize> = (0..cur.len()).filter(|&k| cur[k] > 0).collect();
                    if ring.fan.is_face(&support) {
                        out.push(cur.clone());
                    }
                }
                return;
            }
            for a in (0..=left).rev() {
                cur[i] = a;
                rec(ring, i + 1, left - a, cur, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, j, &mut cur, &mut out);
        out
    }

    pub fn zero(&self) -> CohClass {
        CohClass(TruncSeries::zero(self.num_divisors(), self.dim() as u32))
    }

    pub fn one(&self) -> CohClass {
        CohClass(TruncSeries::one(self.num_divisors(), self.dim() as u32))
    }

    /// `D_{i+1}` for `i` in `0..p`.
    pub fn divisor(&self, i: usize) -> CohClass {
        CohClass(TruncSeries::var(self.num_divisors(), self.dim() as u32, i))
    }

    /// The anticanonical class `D_1 + ... + D_p`, dual to the hypersurface.
    pub fn anticanonical(&self) -> CohClass {
        let mut s = TruncSeries::zero(self.num_divisors(), self.dim() as u32);
        for i in 0..self.num_divisors() {
            s.add_term(Exponents::unit(self.num_divisors(), i), TransScalar::one());
        }
        CohClass(s)
    }

    pub fn monomial(&self, exps: &[u32], coeff: TransScalar) -> CohClass {
        let mut s = TruncSeries::zero(self.num_divisors(), self.dim() as u32);
        s.add_term(Exponents(exps.to_vec()), coeff);
        CohClass(s)
    }

    /// Linear class `sum_i w_i D_i`.
    pub fn linear(&self, weights: &[BigRat]) -> CohClass {
        let mut s = TruncSeries::zero(self.num_divisors(), self.dim() as u32);
        for (i, w) in weights.iter().enumerate() {
            s.add_term(Exponents::unit(self.num_divisors(), i), TransScalar::from_rational(w.clone()));
        }
        CohClass(s)
    }

    /// Intersection number of a degree-`d` monomial.
    pub fn intersect(&self, a: &[u32]) -> BigRat {
        debug_assert_eq!(a.iter().sum::<u32>() as usize, self.dim());
        if let Some(v) = self.memo.lock().expect("memo lock").get(a) {
            return v.clone();
        }
        let support: Vec<usize> = (0..a.len()).filter(|&k| a[k] > 0).collect();
        let value = match self.fan.cone_containing(&support) {
            None => BigRat::zero(),
            Some(_) if a.iter().all(|&x| x <= 1) => BigRat::one(),
            Some(c) => {
                let i = (0..a.len()).find(|&k| a[k] >= 2).expect("a repeated divisor");
                let cone = &self.fan.cones()[c];
                let pos = cone.iter().position(|&k| k == i).expect("ray in cone");
                let u = &self.fan.dual_basis(c)[pos];
                let mut acc = BigRat::zero();
                for k in 0..a.len() {
                    if cone.contains(&k) {
                        continue;
                    }
                    let w: i64 = u.iter().zip(self.fan.ray(k)).map(|(x, y)| x * y).sum();
                    if w == 0 {
                        continue;
                    }
                    let mut b = a.to_vec();
                    b[i] -= 1;
                    b[k] += 1;
                    acc -= BigRat::from_integer(BigInt::from(w)) * self.intersect(&b);
                }
                acc
            }
        };
        self.memo.lock().expect("memo lock").insert(a.to_vec(), value.clone());
        value
    }

    /// `int_X alpha` for a class of pure degree `d` (the zero class gives 0).
    pub fn intersection_number(&self, alpha: &CohClass) -> Result<TransScalar> {
        let d = self.dim() as u32;
        let mut acc = TransScalar::zero();
        for (e, c) in alpha.0.terms() {
            if e.degree() != d {
                return Err(Error::DegreeMismatch { expected: d as usize, found: e.degree() as usize });
            }
            acc += &c.scale(&self.intersect(&e.0));
        }
        Ok(acc)
    }

    /// Degree-`d` part of `alpha` integrated over `X`; lower degrees are ignored.
    pub fn integrate(&self, alpha: &CohClass) -> TransScalar {
        self.intersection_number(&alpha.degree_part(self.dim() as u32)).expect("pure degree")
    }

    /// `int_V alpha = int_X alpha * (D_1 + ... + D_p)` for `alpha` of pure degree `d - 1`.
    pub fn integrate_over_v(&self, alpha: &CohClass) -> Result<TransScalar> {
        let d = self.dim() as u32;
        if let Some((e, _)) = alpha.0.terms().find(|(e, _)| e.degree() + 1 != d) {
            return Err(Error::DegreeMismatch { expected: d as usize - 1, found: e.degree() as usize });
        }
        self.intersection_number(&alpha.try_mul(&self.anticanonical())?)
    }

    /// Canonical normal form: each graded piece is rewritten in a fixed
    /// monomial basis of `H^{2j}` using the intersection pairing.
    pub fn reduce(&self, alpha: &CohClass) -> CohClass {
        let mut out = self.zero();
        for (j, db) in self.degrees.iter().enumerate() {
            let part = alpha.degree_part(j as u32);
            if part.is_zero() {
                continue;
            }
            let values: Vec<TransScalar> = db
                .tests
                .iter()
                .map(|t| {
                    let mut acc = TransScalar::zero();
                    for (e, c) in part.0.terms() {
                        let v = self.intersect(&add_exps(&e.0, t));
                        if !v.is_zero() {
                            acc += &c.scale(&v);
                        }
                    }
                    acc
                })
                .collect();
            for (b, mono) in db.basis.iter().enumerate() {
                let mut coeff = TransScalar::zero();
                for (t, v) in values.iter().enumerate() {
                    let m = &db.inv_pairing[t][b];
                    if !m.is_zero() {
                        coeff += &v.scale(m);
                    }
                }
                out.0.add_term(Exponents(mono.clone()), coeff);
            }
        }
        out
    }

    pub fn equivalent(&self, a: &CohClass, b: &CohClass) -> Result<bool> {
        Ok(self.reduce(&a.try_sub(b)?).is_zero())
    }

    /// The `p x r` matrix `l_i^(k)` expressing `D_i = sum_k l_i^(k) J_k`.
    pub fn divisors_in_j_basis(&self, mb: &MoriBasis) -> Vec<Vec<i64>> {
        (1..=self.num_divisors()).map(|i| mb.slot_form(i)).collect()
    }

    /// Classes `J_1..J_r` dual to the Mori basis, as combinations of divisors.
    pub fn j_classes(&self, mb: &MoriBasis) -> Result<Vec<CohClass>> {
        let l = self.divisors_in_j_basis(mb);
        let r = mb.rank();
        let p = self.num_divisors();
        for rows in crate::gammaseq::combinations(p, r) {
            let sub: Vec<Vec<i64>> = rows.iter().map(|&i| l[i].clone()).collect();
            let Some(inv) = inverse(&to_rat_matrix(&sub)) else { continue };
            // sum_i W[k][i] l_i^(k') = delta with W supported on `rows`
            let classes: Vec<CohClass> = (0..r)
                .map(|k| {
                    let mut w = vec![BigRat::zero(); p];
                    for (col, &i) in rows.iter().enumerate() {
                        w[i] = inv[k][col].clone();
                    }
                    self.reduce(&self.linear(&w))
                })
                .collect();
            for (i, li) in l.iter().enumerate() {
                let mut re = self.zero();
                for (k, &x) in li.iter().enumerate() {
                    re = re.try_add(&classes[k].scale(&TransScalar::from_int(x)))?;
                }
                if !self.equivalent(&re, &self.divisor(i))? {
                    return Err(Error::MoriBasis(format!(
                        "D{} is not recovered from the J basis; the Mori vectors do not describe H^2",
                        i + 1
                    )));
                }
            }
            return Ok(classes);
        }
        Err(Error::MoriBasis("the divisor matrix has rank below r".into()))
    }

    /// Total Chern class of the anticanonical hypersurface,
    /// `prod (1 + D_i) / (1 + sum D_i)`, as reduced `c_1..c_d`.
    pub fn chern_class_hypersurface(&self) -> Result<ChernVector<CohClass>> {
        let d = self.dim() as u32;
        let mut total = self.one();
        for i in 0..self.num_divisors() {
            total = total.try_mul(&self.one().try_add(&self.divisor(i))?)?;
        }
        let minus_h = self.anticanonical().scale(&TransScalar::from_int(-1));
        let mut geometric = self.one();
        let mut power = self.one();
        for _ in 0..d {
            power = power.try_mul(&minus_h)?;
            geometric = geometric.try_add(&power)?;
        }
        let c = total.try_mul(&geometric)?;
        let classes: Vec<CohClass> = (1..=d).map(|j| self.reduce(&c.degree_part(j))).collect();
        if !classes[0].is_zero() {
            return Err(Error::NotCalabiYau(classes[0].to_string()));
        }
        ChernVector::new(classes)
    }
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::toric::{fan_from_polytope, mori_basis, LatticePolytope};

    fn simplex_ring(d: usize) -> CohomologyRing {
        let mut v: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        v.push(vec![-1; d]);
        CohomologyRing::new(fan_from_polytope(&LatticePolytope::new(d, v).unwrap(), None).unwrap()).unwrap()
    }

    fn p1xp1() -> CohomologyRing {
        let p = LatticePolytope::new(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        CohomologyRing::new(fan_from_polytope(&p, None).unwrap()).unwrap()
    }

    #[test]
    fn projective_space_point_class() {
        let ring = simplex_ring(4);
        assert_eq!(ring.betti_numbers(), vec![1; 5]);
        for i in 0..5 {
            assert_eq!(
                ring.intersect(&{
                    let mut a = vec![0; 5];
                    a[i] = 4;
                    a
                }),
                int(1)
            );
        }
        assert_eq!(ring.intersect(&[1, 1, 1, 1, 0]), int(1));
        assert_eq!(ring.intersect(&[2, 0, 1, 0, 1]), int(1));
    }

    #[test]
    fn p2_relations() {
        let ring = simplex_ring(2);
        let d1 = ring.divisor(0);
        let d2 = ring.divisor(1);
        let d3 = ring.divisor(2);
        assert!(ring.equivalent(&d1, &d2).unwrap());
        let triple = d1.try_mul(&d2).unwrap().try_mul(&d3).unwrap();
        assert!(triple.is_zero());
        assert_eq!(ring.reduce(&d1.pow(2)), ring.reduce(&d2.try_mul(&d3).unwrap()));
    }

    #[test]
    fn p1xp1_intersections() {
        let ring = p1xp1();
        assert_eq!(ring.betti_numbers(), vec![1, 2, 1]);
        assert_eq!(ring.intersect(&[1, 0, 1, 0]), int(1));
        assert_eq!(ring.intersect(&[2, 0, 0, 0]), int(0));
        assert_eq!(ring.intersect(&[1, 1, 0, 0]), int(0));
        assert!(ring.reduce(&ring.divisor(0).try_mul(&ring.divisor(1)).unwrap()).is_zero());
    }

    #[test]
    fn quintic_chern_classes() {
        let ring = simplex_ring(4);
        let c = ring.chern_class_hypersurface().unwrap();
        let h = ring.divisor(4);
        assert_eq!(c.c(2), &ring.reduce(&h.pow(2).scale(&TransScalar::from_int(10))));
        assert_eq!(c.c(3), &ring.reduce(&h.pow(3).scale(&TransScalar::from_int(-40))));
        let mb = mori_basis(ring.fan(), None).unwrap();
        let j = ring.j_classes(&mb).unwrap();
        assert_eq!(ring.integrate_over_v(&j[0].pow(3)).unwrap(), TransScalar::from_int(5));
        assert_eq!(ring.integrate_over_v(&c.c(2).try_mul(&j[0]).unwrap()).unwrap(), TransScalar::from_int(50));
        assert_eq!(ring.integrate_over_v(c.c(3)).unwrap(), TransScalar::from_int(-200));
        assert!(ring.integrate_over_v(&j[0]).is_err());
    }

    #[test]
    fn sextic_chern_classes() {
        let ring = simplex_ring(5);
        let c = ring.chern_class_hypersurface().unwrap();
        let h = ring.divisor(0);
        for (k, v) in [(2, 15), (3, -70), (4, 435)] {
            assert_eq!(c.c(k), &ring.reduce(&h.pow(k as u32).scale(&TransScalar::from_int(v))));
        }
        assert_eq!(ring.integrate_over_v(c.c(4)).unwrap(), TransScalar::from_int(2610));
        assert_eq!(ring.integrate_over_v(&c.c(2).pow(2)).unwrap(), TransScalar::from_int(1350));
    }

    #[test]
    fn p1xp1_j_basis() {
        let ring = p1xp1();
        let mb = mori_basis(ring.fan(), None).unwrap();
        assert_eq!(ring.divisors_in_j_basis(&mb), vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
        let j = ring.j_classes(&mb).unwrap();
        assert!(ring.equivalent(&j[0], &ring.divisor(0)).unwrap());
        assert!(ring.equivalent(&j[1], &ring.divisor(3)).unwrap());
        assert_eq!(ring.integrate(&j[0].try_mul(&j[1]).unwrap()), TransScalar::from_int(1));
    }

    #[test]
    fn nonzero_degree_one_class_survives() {
        let ring = p1xp1();
        let x = ring.divisor(0).try_sub(&ring.divisor(2)).unwrap();
        assert!(!ring.reduce(&x).is_zero());
        assert!(ring.intersection_number(&ring.divisor(0)).is_err());
    }
}
