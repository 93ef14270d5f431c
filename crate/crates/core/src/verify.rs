//! Checks that put both sides of the Gamma-class identity next to each
//! other: the theorem for every degree and trailing J-monomial, its
//! dimension-3 and dimension-4 corollaries, the three-way agreement of
//! Gamma series as cohomology classes, the projective-space example and the
//! Grassmannian coefficient ratio.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, BigRat, TransScalar};
use crate::gammaseq::{apply_mult_seq, gamma_mult_seq, log_gamma_series, MultSeqPolynomial};
use crate::periods::{
    derivative_at_origin, gamma_coeff_series, gamma_ratio_at_integer, gkz_box_check, period_coefficient,
    period_coefficient_from_relation, period_series, u_operator_check, GammaCoeffSeries,
};
use crate::series::{Exponents, LinForm, TruncSeries};
use crate::toric::{all_tuples, fan_from_polytope, mori_basis, sorted_tuples, CohClass, LatticePolytope, ToricModel};

/// How the theorem's indices are read; printed in every report header.
pub const INTERPRETATION: &str = "X is the d-dimensional toric variety, V its anticanonical hypersurface of \
dimension n = d - 1, r the Picard rank. For 2 <= k <= n and trailing indices i_1..i_{n-k} in 1..r: \
int_V Q_k(c(V)) J_i1..J_i(n-k) = sum over all (j_1..j_k) in {1..r}^k of (1/k!) d^k c(0)/d rho_j1..d rho_jk \
* K_{j_1..j_k i_1..i_(n-k)}, with K = int_V J..J. Ambient entries use int_X, 2 <= k <= d and K = int_X J..J. \
Indices are 1-based.";

/// Digits used for the numeric residual column.
pub const RESIDUAL_DIGITS: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub exact_match: bool,
    /// `lhs - rhs` evaluated at [`RESIDUAL_DIGITS`] digits, when both sides are scalars
    pub residual: Option<String>,
    pub lhs_numeric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn scalar(id: impl Into<String>, lhs: &TransScalar, rhs: &TransScalar, digits: u32) -> Result<Self> {
        let diff = lhs - rhs;
        Ok(Self {
            id: id.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            exact_match: diff.is_zero(),
            residual: Some(diff.eval(RESIDUAL_DIGITS)?.to_string()),
            lhs_numeric: Some(lhs.eval(digits)?.to_string()),
            detail: None,
        })
    }

    pub fn flag(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            lhs: passed.to_string(),
            rhs: "true".into(),
            exact_match: passed,
            residual: None,
            lhs_numeric: None,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub interpretation: String,
    pub order: u32,
    pub entries: Vec<CheckEntry>,
    pub all_exact: bool,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, order: u32, entries: Vec<CheckEntry>) -> Self {
        let all_exact = entries.iter().all(|e| e.exact_match);
        Self { subject: subject.into(), interpretation: INTERPRETATION.into(), order, entries, all_exact }
    }

    pub fn failures(&self) -> Vec<&CheckEntry> {
        self.entries.iter().filter(|e| !e.exact_match).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "subject: {}", self.subject);
        let _ = writeln!(out, "order:   {}", self.order);
        let _ = writeln!(out, "reading: {}", self.interpretation);
        let rows: Vec<[String; 4]> = self
            .entries
            .iter()
            .map(|e| {
                [
                    e.id.clone(),
                    if e.exact_match { "ok".into() } else { "MISMATCH".into() },
                    e.lhs.clone(),
                    e.rhs.clone(),
                ]
            })
            .collect();
        let header = ["check".to_string(), "status".into(), "lhs".into(), "rhs".into()];
        let mut widths = header.clone().map(|h| h.len());
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len()).min(60);
            }
        }
        for r in std::iter::once(&header).chain(rows.iter()) {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        let _ = writeln!(
            out,
            "{} checks, {} exact, {} mismatched",
            self.entries.len(),
            self.entries.len() - self.failures().len(),
            self.failures().len()
        );
        out
    }
}

/// Shared state for the checks on one model: the Gamma-coefficient series,
/// Gamma-sequence polynomials and memoized couplings.
pub struct Verifier<'a> {
    model: &'a ToricModel,
    gamma: GammaCoeffSeries,
    order: u32,
    digits: u32,
    polys: Vec<MultSeqPolynomial>,
    couplings: HashMap<Vec<usize>, BigRat>,
    ambient: HashMap<Vec<usize>, BigRat>,
}

impl<'a> Verifier<'a> {
    /// `order` must be at least `d`; the default used elsewhere is `d + 2`.
    pub fn new(model: &'a ToricModel, order: u32, digits: u32) -> Result<Self> {
        let d = model.dim();
        if (order as usize) < d {
            return Err(Error::InsufficientOrder(format!("verification needs order >= {d}, got {order}")));
        }
        let gamma = gamma_coeff_series(model.mori(), order)?;
        let polys = (1..=d).map(gamma_mult_seq).collect::<Result<Vec<_>>>()?;
        Ok(Self { model, gamma, order, digits, polys, couplings: HashMap::new(), ambient: HashMap::new() })
    }

    pub fn gamma_series(&self) -> &GammaCoeffSeries {
        &self.gamma
    }

    fn coupling(&mut self, idx: &[usize], ambient: bool) -> Result<BigRat> {
        let mut key = idx.to_vec();
        key.sort_unstable();
        let cache = if ambient { &mut self.ambient } else { &mut self.couplings };
        if let Some(v) = cache.get(&key) {
            return Ok(v.clone());
        }
        let v = if ambient { self.model.ambient_coupling(&key)? } else { self.model.coupling(&key)? };
        let cache = if ambient { &mut self.ambient } else { &mut self.couplings };
        cache.insert(key, v.clone());
        Ok(v)
    }

    /// `sum_{j in [1..r]^k} (1/k!) d^k c(0) / d rho_j * K_{j, trailing}`.
    pub fn theorem_rhs(&mut self, k: usize, trailing: &[usize], ambient: bool) -> Result<TransScalar> {
        let r = self.model.rank();
        let mut acc = TransScalar::zero();
        for js in all_tuples(r, k) {
            let deriv = derivative_at_origin(&self.gamma, &js)?;
            if deriv.is_zero() {
                continue;
            }
            let mut idx = js.clone();
            idx.extend_from_slice(trailing);
            let kk = self.coupling(&idx, ambient)?;
            if !kk.is_zero() {
                acc += &deriv.scale(&kk);
            }
        }
        Ok(acc.scale(&BigRat::new(BigInt::one(), factorial(k as u64))))
    }

    fn q_class(&self, k: usize) -> Result<CohClass> {
        apply_mult_seq(&self.polys[k - 1], self.model.chern())
    }

    fn check_range(&self, k: usize, trailing: &[usize], top: usize) -> Result<()> {
        if k < 2 || k > top {
            return Err(Error::Precondition(format!("degree k = {k} outside 2..={top}")));
        }
        if trailing.len() != top - k {
            return Err(Error::DegreeMismatch { expected: top - k, found: trailing.len() });
        }
        if let Some(&bad) = trailing.iter().find(|&&i| i == 0 || i > self.model.rank()) {
            return Err(Error::IndexOutOfRange { index: bad, limit: self.model.rank() });
        }
        Ok(())
    }

    /// The identity integrated over `V`.
    pub fn check_theorem(&mut self, k: usize, trailing: &[usize]) -> Result<CheckEntry> {
        self.check_range(k, trailing, self.model.cy_dim())?;
        let ring = self.model.ring();
        let class = self.q_class(k)?.try_mul(&self.model.j_monomial(trailing)?)?;
        let lhs = ring.integrate_over_v(&ring.reduce(&class).degree_part(self.model.cy_dim() as u32))?;
        let rhs = self.theorem_rhs(k, trailing, false)?;
        CheckEntry::scalar(format!("theorem.V.k{k}{}", suffix(trailing)), &lhs, &rhs, self.digits)
    }

    /// The same identity with `int_X` and ambient couplings.
    pub fn check_theorem_ambient(&mut self, k: usize, trailing: &[usize]) -> Result<CheckEntry> {
        self.check_range(k, trailing, self.model.dim())?;
        let ring = self.model.ring();
        let class = self.q_class(k)?.try_mul(&self.model.j_monomial(trailing)?)?;
        let lhs = ring.integrate(&class);
        let rhs = self.theorem_rhs(k, trailing, true)?;
        CheckEntry::scalar(format!("theorem.X.k{k}{}", suffix(trailing)), &lhs, &rhs, self.digits)
    }

    /// `int_V c_k J.. = s_k^{-1} * rhs` for `k = 2, 3` with `s_k = zeta(k)`.
    pub fn check_corollaries(&mut self) -> Result<Vec<CheckEntry>> {
        let n = self.model.cy_dim();
        let r = self.model.rank();
        let mut out = Vec::new();
        for k in 2..=n.min(3) {
            let s_k = self.polys[k - 1].leading_coefficient();
            for trailing in sorted_tuples(r, n - k) {
                let class = self.model.chern().c(k).try_mul(&self.model.j_monomial(&trailing)?)?;
                let lhs = self.model.ring().integrate_over_v(&class)?;
                let rhs = self.theorem_rhs(k, &trailing, false)?.checked_div(&s_k)?;
                out.push(CheckEntry::scalar(format!("corollary.c{k}{}", suffix(&trailing)), &lhs, &rhs, self.digits)?);
            }
        }
        Ok(out)
    }

    pub fn check_all_theorem(&mut self) -> Result<Vec<CheckEntry>> {
        let n = self.model.cy_dim();
        let d = self.model.dim();
        let r = self.model.rank();
        let mut out = Vec::new();
        for k in 2..=n {
            for t in sorted_tuples(r, n - k) {
                out.push(self.check_theorem(k, &t)?);
            }
        }
        for k in 2..=d {
            for t in sorted_tuples(r, d - k) {
                out.push(self.check_theorem_ambient(k, &t)?);
            }
        }
        Ok(out)
    }

    /// Degree-by-degree comparison of three cohomology classes:
    /// (i) `Q_j(c(V))`, (ii) the degree-`j` part of
    /// `Gamma(1 + sum D_i) / prod Gamma(1 + D_i)`, (iii) the Gamma-coefficient
    /// series with `rho_k -> J_k`.
    pub fn check_three_way(&self) -> Result<Vec<CheckEntry>> {
        let ring = self.model.ring();
        let d = self.model.dim();
        let p = ring.num_divisors();
        let lg = log_gamma_series(d as u32);
        let mut log = lg.compose_linform(&LinForm(vec![1; p]), p)?;
        for i in 0..p {
            let mut e = vec![0i64; p];
            e[i] = 1;
            log = log.try_sub(&lg.compose_linform(&LinForm(e), p)?)?;
        }
        let divisor_side = CohClass::from_series(log.exp()?);

        let j = self.model.j_classes();
        let mut mori_side = ring.zero();
        for (e, c) in self.gamma.series().terms() {
            if e.degree() as usize > d {
                continue;
            }
            let mut term = ring.one().scale(c);
            for (k, &a) in e.0.iter().enumerate() {
                if a > 0 {
                    term = term.try_mul(&j[k].pow(a))?;
                }
            }
            mori_side = mori_side.try_add(&term)?;
        }

        let mut out = Vec::new();
        for deg in 1..=d {
            let a = ring.reduce(&self.q_class(deg)?);
            let b = ring.reduce(&divisor_side.degree_part(deg as u32));
            let c = ring.reduce(&mori_side.degree_part(deg as u32));
            out.push(CheckEntry {
                id: format!("three_way.deg{deg}"),
                lhs: a.to_string(),
                rhs: c.to_string(),
                exact_match: a == b && b == c,
                residual: None,
                lhs_numeric: None,
                detail: Some(format!("divisor expansion: {b}")),
            });
        }
        Ok(out)
    }

    /// Box-operator annihilation for each Mori vector, plus the torus operators.
    pub fn check_gkz(&self) -> Result<Vec<CheckEntry>> {
        let ps = period_series(self.model.mori(), self.order);
        let mut out = Vec::new();
        for (k, l) in self.model.mori().vectors().iter().enumerate() {
            match gkz_box_check(&ps, l) {
                Ok(rep) => out.push(CheckEntry::flag(
                    format!("gkz.box.l{}", k + 1),
                    rep.annihilated,
                    format!(
                        "certified through |m| <= {}, {} terms, {} nonzero residues",
                        rep.certified_order,
                        rep.certified_terms,
                        rep.residues.len()
                    ),
                )),
                Err(Error::InsufficientOrder(msg)) => {
                    out.push(CheckEntry::flag(format!("gkz.box.l{}", k + 1), true, format!("skipped: {msg}")))
                }
                Err(e) => return Err(e),
            }
        }
        out.push(CheckEntry::flag(
            "gkz.torus",
            u_operator_check(&ps, self.model.fan()),
            "Euler-type operators annihilate every term",
        ));
        Ok(out)
    }

    /// Period coefficients against the relation-lattice expansion and the
    /// Gamma ratio at integer points, for `|m| <= order`.
    pub fn check_period_bridge(&self) -> Result<Vec<CheckEntry>> {
        let mb = self.model.mori();
        let mut bad = Vec::new();
        let mut count = 0;
        for m in crate::periods::exponent_vectors(mb.rank(), self.order) {
            let c = period_coefficient(mb, &m);
            let alt = period_coefficient_from_relation(mb, &m);
            let mi: Vec<i64> = m.iter().map(|&x| i64::from(x)).collect();
            let g = gamma_ratio_at_integer(mb, &mi)?;
            count += 1;
            if c != alt || c != g {
                bad.push(format!("m={m:?}: {c} / {alt} / {g}"));
            }
        }
        Ok(vec![CheckEntry::flag(
            "period.bridge",
            bad.is_empty(),
            if bad.is_empty() { format!("{count} coefficients agree") } else { bad.join("; ") },
        )])
    }

    pub fn run_all(&mut self, subject: &str, expected: Option<&Expected>) -> Result<VerificationReport> {
        let mut entries = self.check_all_theorem()?;
        entries.extend(self.check_corollaries()?);
        entries.extend(self.check_three_way()?);
        entries.extend(self.check_gkz()?);
        entries.extend(self.check_period_bridge()?);
        if let Some(exp) = expected {
            entries.extend(self.check_goldens(exp)?);
        }
        Ok(VerificationReport::new(subject, self.order, entries))
    }

    /// Compares stored exact values with freshly computed ones.
    pub fn check_goldens(&mut self, exp: &Expected) -> Result<Vec<CheckEntry>> {
        let mut out = Vec::new();
        for (key, want) in &exp.integrals {
            let got = integral_by_key(self.model, key)?;
            let want: TransScalar = want.parse()?;
            out.push(CheckEntry::scalar(format!("golden.integral.{key}"), &got, &want, self.digits)?);
        }
        for (key, want) in &exp.couplings {
            let idx = parse_index_key(key)?;
            let got = TransScalar::from_rational(self.coupling(&idx, false)?);
            let want: TransScalar = want.parse()?;
            out.push(CheckEntry::scalar(format!("golden.coupling.{key}"), &got, &want, self.digits)?);
        }
        for (key, want) in &exp.period {
            let m = parse_exponent_key(key, self.model.rank())?;
            let got = TransScalar::from_rational(period_coefficient(self.model.mori(), &m));
            let want: TransScalar = want.parse()?;
            out.push(CheckEntry::scalar(format!("golden.period.{key}"), &got, &want, self.digits)?);
        }
        for (key, want) in &exp.gamma {
            let m = parse_exponent_key(key, self.model.rank())?;
            let total: u32 = m.iter().sum();
            if total > self.order {
                return Err(Error::InsufficientOrder(format!("golden gamma.{key} needs order {total}")));
            }
            let got = self.gamma.series().coeff(&m);
            let want: TransScalar = want.parse()?;
            out.push(CheckEntry::scalar(format!("golden.gamma.{key}"), &got, &want, self.digits)?);
        }
        Ok(out)
    }
}

fn suffix(trailing: &[usize]) -> String {
    if trailing.is_empty() {
        String::new()
    } else {
        format!(".J{}", trailing.iter().map(usize::to_string).collect::<Vec<_>>().join(""))
    }
}

/// Stored exact values for a fixture; all values are strings in the
/// `TransScalar` syntax.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// `int_V` of a product such as `c2*J1` or `J1^2*J2`
    #[serde(default)]
    pub integrals: BTreeMap<String, String>,
    /// couplings keyed by sorted index tuples such as `1,1,2`
    #[serde(default)]
    pub couplings: BTreeMap<String, String>,
    /// period coefficients keyed by exponent vectors such as `1` or `1,2`
    #[serde(default)]
    pub period: BTreeMap<String, String>,
    /// Gamma-coefficient series coefficients keyed like `period`
    #[serde(default)]
    pub gamma: BTreeMap<String, String>,
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        self.integrals.is_empty() && self.couplings.is_empty() && self.period.is_empty() && self.gamma.is_empty()
    }
}

/// Evaluates `int_V` of a product of `c<k>` and `J<k>` factors with optional `^e`.
pub fn integral_by_key(model: &ToricModel, key: &str) -> Result<TransScalar> {
    let ring = model.ring();
    let mut class = ring.one();
    for factor in key.split('*').map(str::trim) {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?),
            None => (factor, 1),
        };
        let idx: usize = base
            .get(1..)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad factor {factor:?} in {key:?}")))?;
        let f = match base.as_bytes().first() {
            Some(b'c') if (1..=model.dim()).contains(&idx) => model.chern().c(idx).clone(),
            Some(b'J') => model.j_monomial(&[idx])?,
            _ => return Err(Error::Parse(format!("bad factor {factor:?} in {key:?}"))),
        };
        class = class.try_mul(&f.pow(exp))?;
    }
    let n = model.cy_dim() as u32;
    if let Some(deg) = class.series().terms().map(|(e, _)| e.degree()).find(|&g| g != n) {
        return Err(Error::DegreeMismatch { expected: n as usize, found: deg as usize });
    }
    model.ring().integrate_over_v(&class)
}

fn parse_index_key(key: &str) -> Result<Vec<usize>> {
    key.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index tuple {key:?}"))))
        .collect()
}

fn parse_exponent_key(key: &str, r: usize) -> Result<Vec<u32>> {
    let m: Vec<u32> = key
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent tuple {key:?}"))))
        .collect::<Result<_>>()?;
    if m.len() != r {
        return Err(Error::Parse(format!("exponent tuple {key:?} needs {r} entries")));
    }
    Ok(m)
}

/// Computes the golden values stored with a fixture.
pub fn compute_expected(model: &ToricModel, order: u32) -> Result<Expected> {
    let mut exp = Expected::default();
    let n = model.cy_dim();
    let r = model.rank();
    for k in 2..=n {
        for t in sorted_tuples(r, n - k) {
            let mut key = format!("c{k}");
            for i in &t {
                key.push_str(&format!("*J{i}"));
            }
            exp.integrals.insert(key.clone(), integral_by_key(model, &key)?.to_string());
        }
    }
    if n >= 4 {
        exp.integrals.insert("c2^2".into(), integral_by_key(model, "c2^2")?.to_string());
    }
    for (key, v) in model.coupling_tensor()? {
        exp.couplings.insert(key, v.to_string());
    }
    let g = gamma_coeff_series(model.mori(), order)?;
    for m in crate::periods::exponent_vectors(r, order) {
        if m.iter().sum::<u32>() == 0 {
            continue;
        }
        let key = m.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        exp.period.insert(key.clone(), period_coefficient(model.mori(), &m).to_string());
        if m.iter().sum::<u32>() <= 3 {
            exp.gamma.insert(key, g.series().coeff(&m).to_string());
        }
    }
    Ok(exp)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdRow {
    pub m: u32,
    pub factorial_ratio: String,
    pub gamma_ratio: String,
    pub period_coefficient: String,
    pub agree: bool,
}

/// For `P^d` and `m = 0..=n`: `((d+1)m)! / (m!)^{d+1}` against the Gamma
/// ratio at `h = m` and the period coefficient of the `P^d` fan.
pub fn check_pd_example(d: usize, n: u32) -> Result<Vec<PdRow>> {
    if d < 3 {
        return Err(Error::Precondition(format!("dimension {d} < 3")));
    }
    if n > 12 {
        return Err(Error::Precondition(format!("order {n} > 12")));
    }
    let mut v: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    v.push(vec![-1; d]);
    let mb = mori_basis(&fan_from_polytope(&LatticePolytope::new(d, v)?, None)?, None)?;
    let ps = period_series(&mb, n);
    let mut rows = Vec::new();
    for m in 0..=n {
        let mm = u64::from(m);
        let direct = BigRat::new(factorial((d as u64 + 1) * mm), num_traits::pow(factorial(mm), d + 1));
        let g = gamma_ratio_at_integer(&mb, &[i64::from(m)])?;
        let pc = ps.coefficient(&[m]);
        rows.push(PdRow {
            m,
            agree: direct == g && g == pc,
            factorial_ratio: direct.to_string(),
            gamma_ratio: g.to_string(),
            period_coefficient: pc.to_string(),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannianRow {
    pub m: u32,
    pub coefficient_113: String,
    pub coefficient_122: String,
    pub ratio: String,
    pub squared_candidate: String,
    pub printed_candidate: String,
    pub matches_squared: bool,
    pub matches_printed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannianReport {
    pub rows: Vec<GrassmannianRow>,
    /// `Gamma(3h+1) Gamma(h+1) / Gamma(2h+1)^2`
    pub squared_candidate_matches: bool,
    /// `Gamma(3h+1) Gamma(h+1) / Gamma(2h+1)`
    pub printed_candidate_matches: bool,
    pub matched: String,
}

impl GrassmannianReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>3}  {:>28}  {:>28}  {:>14}  sq  printed", "m", "(1,1,3)", "(1,2,2)", "ratio");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>3}  {:>28}  {:>28}  {:>14}  {:<2}  {}",
                r.m,
                r.coefficient_113,
                r.coefficient_122,
                r.ratio,
                if r.matches_squared { "ok" } else { "no" },
                if r.matches_printed { "ok" } else { "no" }
            );
        }
        let _ = writeln!(out, "matched candidate: {}", self.matched);
        out
    }
}

fn grassmannian_inner_sum(m: u64) -> BigRat {
    let mut s = BigInt::zero();
    for r in 0..=m {
        for t in 0..=m {
            let b = binomial(m, t);
            s += binomial(m, r) * binomial(t, r) * &b * &b;
        }
    }
    BigRat::new(s, num_traits::pow(factorial(m), 5))
}

/// Exact coefficients of the two Grassmannian series for `m <= n` and their ratio.
pub fn grassmannian_ratio_check(n: u32) -> Result<GrassmannianReport> {
    if n > 25 {
        return Err(Error::Precondition(format!("order {n} > 25")));
    }
    let mut rows = Vec::new();
    for m in 0..=n {
        let mm = u64::from(m);
        let inner = grassmannian_inner_sum(mm);
        let fm = factorial(mm);
        let f2m = factorial(2 * mm);
        let f3m = factorial(3 * mm);
        let a = BigRat::from_integer(&f3m * &fm * &fm) * &inner;
        let b = BigRat::from_integer(&fm * &f2m * &f2m) * &inner;
        let ratio = &a / &b;
        let squared = BigRat::new(&f3m * &fm, &f2m * &f2m);
        let printed = BigRat::new(&f3m * &fm, f2m.clone());
        rows.push(GrassmannianRow {
            m,
            coefficient_113: a.to_string(),
            coefficient_122: b.to_string(),
            matches_squared: ratio == squared,
            matches_printed: ratio == printed,
            ratio: ratio.to_string(),
            squared_candidate: squared.to_string(),
            printed_candidate: printed.to_string(),
        });
    }
    let sq = rows.iter().all(|r| r.matches_squared);
    let pr = rows.iter().all(|r| r.matches_printed);
    let matched = match (sq, pr) {
        (true, true) => "both candidates",
        (true, false) => "Gamma(3h+1)Gamma(h+1)/Gamma(2h+1)^2",
        (false, true) => "Gamma(3h+1)Gamma(h+1)/Gamma(2h+1)",
        (false, false) => "neither candidate",
    };
    Ok(GrassmannianReport {
        rows,
        squared_candidate_matches: sq,
        printed_candidate_matches: pr,
        matched: matched.into(),
    })
}

/// Replaces one term of a Chern class; used for negative controls.
pub fn perturb_class(class: &CohClass, exps: &[u32], delta: i64) -> CohClass {
    let mut s: TruncSeries<TransScalar> = class.series().clone();
    s.add_term(Exponents(exps.to_vec()), TransScalar::from_int(delta));
    CohClass::from_series(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_theorem_entries() {
        let m = ToricModel::projective_space(4).unwrap();
        let mut v = Verifier::new(&m, 6, 15).unwrap();
        let e2 = v.check_theorem(2, &[1]).unwrap();
        assert!(e2.exact_match, "{e2:?}");
        assert_eq!(e2.lhs, "50*zeta2");
        let e3 = v.check_theorem(3, &[]).unwrap();
        assert!(e3.exact_match);
        assert_eq!(e3.rhs, "-200*zeta3");
        assert!(v.check_theorem(4, &[]).is_err());
        assert!(v.check_theorem(2, &[]).is_err());
        assert!(v.check_theorem(2, &[2]).is_err());
    }

    #[test]
    fn quintic_three_way_and_corollaries() {
        let m = ToricModel::projective_space(4).unwrap();
        let v = Verifier::new(&m, 6, 15).unwrap();
        let tw = v.check_three_way().unwrap();
        assert_eq!(tw.len(), 4);
        assert!(tw.iter().all(|e| e.exact_match), "{tw:?}");
        assert_eq!(tw[0].lhs, "0");
        let mut v = v;
        assert!(v.check_corollaries().unwrap().iter().all(|e| e.exact_match));
    }

    #[test]
    fn pd_rows() {
        let rows = check_pd_example(4, 3).unwrap();
        assert!(rows.iter().all(|r| r.agree));
        assert_eq!(rows[0].factorial_ratio, "1");
        assert_eq!(rows[1].factorial_ratio, "120");
        assert_eq!(check_pd_example(5, 2).unwrap()[2].factorial_ratio, "7484400");
        assert!(check_pd_example(2, 3).is_err());
        assert!(check_pd_example(4, 13).is_err());
    }

    #[test]
    fn grassmannian_small() {
        let rep = grassmannian_ratio_check(3).unwrap();
        assert_eq!(rep.rows[0].ratio, "1");
        assert_eq!(rep.rows[1].ratio, "3/2");
        assert_eq!(rep.rows[2].ratio, "5/2");
        assert!(rep.squared_candidate_matches);
        assert!(!rep.printed_candidate_matches);
        assert!(grassmannian_ratio_check(26).is_err());
    }

    #[test]
    fn integral_keys() {
        let m = ToricModel::projective_space(4).unwrap();
        assert_eq!(integral_by_key(&m, "c2*J1").unwrap(), TransScalar::from_int(50));
        assert_eq!(integral_by_key(&m, "J1^3").unwrap(), TransScalar::from_int(5));
        assert_eq!(integral_by_key(&m, "c3").unwrap(), TransScalar::from_int(-200));
        assert!(integral_by_key(&m, "c2").is_err());
        assert!(integral_by_key(&m, "x2*J1").is_err());
        let exp = compute_expected(&m, 3).unwrap();
        assert_eq!(exp.period["3"], "168168000");
        assert_eq!(exp.gamma["2"], "10*zeta2");
        assert_eq!(exp.couplings["1,1,1"], "5");
    }
}
