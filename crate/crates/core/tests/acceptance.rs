//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact equality in `Q[gamma, zeta(2), zeta(3), ...]` or
//! in the rationals; no floating-point tolerance is involved anywhere.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::fixture;
use gamma_mirror::exactnum::{factorial, int, BigRat, TransScalar};
use gamma_mirror::gammaseq::{gamma_seq_calabi_yau, inverse_gamma_series, s_sequence};
use gamma_mirror::input::PolytopeInput;
use gamma_mirror::periods::{
    derivative_at_origin, exponent_vectors, gamma_coeff_series, gamma_ratio_at_integer, gkz_box_check,
    period_coefficient, period_series,
};
use gamma_mirror::verify::{grassmannian_ratio_check, integral_by_key, Verifier};

/// Allowed absolute difference for every comparison below.
const TOLERANCE: u32 = 0;
const DIGITS: u32 = 30;

type Outcome = Result<String, String>;
/// id, name, time budget in seconds, check
type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn ts(s: &str) -> TransScalar {
    s.parse().unwrap_or_else(|e| panic!("bad literal {s}: {e}"))
}

fn expect_eq(what: &str, got: &TransScalar, want: &TransScalar) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

fn err(e: gamma_mirror::Error) -> String {
    e.to_string()
}

fn gamma_table() -> Outcome {
    let s = s_sequence(&inverse_gamma_series(6), 6).map_err(err)?;
    expect_eq("s_1", &s[1], &TransScalar::gamma())?;
    for (i, si) in s.iter().enumerate().skip(2) {
        expect_eq(&format!("s_{i}"), si, &TransScalar::zeta(i as u32))?;
    }
    let q2 = gamma_seq_calabi_yau(2).map_err(err)?;
    let q3 = gamma_seq_calabi_yau(3).map_err(err)?;
    let q4 = gamma_seq_calabi_yau(4).map_err(err)?;
    expect_eq("Q2 c2", &q2.coefficient(&[0, 1]), &ts("zeta2"))?;
    expect_eq("Q3 c3", &q3.coefficient(&[0, 0, 1]), &ts("zeta3"))?;
    expect_eq("Q4 c2^2", &q4.coefficient(&[0, 2, 0, 0]), &ts("1/2*zeta2^2 - 1/2*zeta4"))?;
    expect_eq("Q4 c4", &q4.coefficient(&[0, 0, 0, 1]), &ts("zeta4"))?;
    let count = |q: &gamma_mirror::gammaseq::MultSeqPolynomial| q.terms().count();
    if (count(&q2), count(&q3), count(&q4)) != (1, 1, 2) {
        return Err("unexpected extra terms in Q2..Q4".into());
    }
    Ok("s_1..s_6 and Q2, Q3, Q4 exact".into())
}

fn quintic() -> Outcome {
    let m = fixture("p4_quintic.toml");
    let j3 = TransScalar::from_rational(m.coupling(&[1, 1, 1]).map_err(err)?);
    expect_eq("int J^3", &j3, &ts("5"))?;
    let c2j = integral_by_key(&m, "c2*J1").map_err(err)?;
    expect_eq("int c2 J", &c2j, &ts("50"))?;
    let c3 = integral_by_key(&m, "c3").map_err(err)?;
    expect_eq("int c3", &c3, &ts("-200"))?;

    let g = gamma_coeff_series(m.mori(), 5).map_err(err)?;
    let d2 = derivative_at_origin(&g, &[1, 1]).map_err(err)?;
    let d3 = derivative_at_origin(&g, &[1, 1, 1]).map_err(err)?;
    expect_eq("d^2 c(0)", &d2, &ts("20*zeta2"))?;
    expect_eq("d^3 c(0)", &d3, &ts("-240*zeta3"))?;
    expect_eq("corollary c2", &(&c2j * &ts("zeta2")), &(&d2 * &ts("5/2")))?;
    expect_eq("corollary c3", &(&c3 * &ts("zeta3")), &(&d3 * &ts("5/6")))?;

    let mut v = Verifier::new(&m, 6, DIGITS).map_err(err)?;
    for e in v.check_corollaries().map_err(err)? {
        if !e.exact_match {
            return Err(format!("{}: {} vs {}", e.id, e.lhs, e.rhs));
        }
    }
    let ps = period_series(m.mori(), 6);
    for k in 0..=6u64 {
        let want = BigRat::new(factorial(5 * k), num_traits::pow(factorial(k), 5));
        if ps.coefficient(&[k as u32]) != want {
            return Err(format!("period m={k}"));
        }
    }
    Ok("J^3=5, c2J=50, c3=-200, corollaries, (5m)!/(m!)^5 for m<=6".into())
}

fn sextic() -> Outcome {
    let m = fixture("p5_sextic.toml");
    let input = PolytopeInput::read(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/p5_sextic.toml"))
        .map_err(err)?;
    // hand-expanded from (1+h)^6/(1+6h) against int_V h^4 = 6
    for (key, want) in [("c2^2", "1350"), ("c4", "2610"), ("c2*J1*J1", "90"), ("c3*J1", "-420")] {
        let got = integral_by_key(&m, key).map_err(err)?;
        expect_eq(key, &got, &ts(want))?;
        match input.expected.integrals.get(key) {
            Some(pinned) if ts(pinned) == got => {}
            other => return Err(format!("golden {key} is {other:?}")),
        }
    }
    let mut v = Verifier::new(&m, 6, DIGITS).map_err(err)?;
    let mut entries = vec![v.check_theorem(2, &[1, 1]).map_err(err)?, v.check_theorem(3, &[1]).map_err(err)?];
    let k4 = v.check_theorem(4, &[]).map_err(err)?;
    entries.push(k4.clone());
    entries.extend(v.check_corollaries().map_err(err)?);
    if let Some(bad) = entries.iter().find(|e| !e.exact_match) {
        return Err(format!("{}: {} vs {}", bad.id, bad.lhs, bad.rhs));
    }
    expect_eq("k=4 value", &ts(&k4.lhs), &ts("675*zeta2^2 + 1935*zeta4"))?;
    Ok(format!("{} identities exact, k=4 gives {}", entries.len(), k4.lhs))
}

fn bicubic() -> Outcome {
    let m = fixture("p2xp2_bicubic.toml");
    for (idx, want) in [([1, 1, 1], 0), ([1, 1, 2], 3), ([1, 2, 2], 3), ([2, 2, 2], 0)] {
        let got = m.coupling(&idx).map_err(err)?;
        if got != int(want) {
            return Err(format!("K{idx:?} = {got}, want {want}"));
        }
    }
    let mut v = Verifier::new(&m, 6, DIGITS).map_err(err)?;
    let entries = v.check_all_theorem().map_err(err)?;
    if let Some(bad) = entries.iter().find(|e| !e.exact_match) {
        return Err(format!("{}: {} vs {}", bad.id, bad.lhs, bad.rhs));
    }
    for k in 2..=4 {
        if !entries.iter().any(|e| e.id.starts_with(&format!("theorem.X.k{k}"))) {
            return Err(format!("no check for k={k}"));
        }
    }
    Ok(format!("{} identities exact over k=2..4 and all trailing monomials", entries.len()))
}

const FIXTURES: &[&str] = &[
    "p4_quintic.toml",
    "p5_sextic.toml",
    "p2xp2_bicubic.toml",
    "p1x4.toml",
    "blowup_p3.toml",
    "p1xp1.json",
    "p2_cubic.toml",
];

fn three_way() -> Outcome {
    let mut degrees = 0;
    for name in FIXTURES {
        let m = fixture(name);
        let v = Verifier::new(&m, m.dim() as u32, DIGITS).map_err(err)?;
        let entries = v.check_three_way().map_err(err)?;
        if entries.len() != m.dim() {
            return Err(format!("{name}: {} degrees checked", entries.len()));
        }
        if let Some(bad) = entries.iter().find(|e| !e.exact_match) {
            return Err(format!("{name} {}: {} vs {}", bad.id, bad.lhs, bad.rhs));
        }
        degrees += entries.len();
    }
    Ok(format!("{} fixtures, {degrees} degrees", FIXTURES.len()))
}

fn gkz() -> Outcome {
    let m = fixture("p4_quintic.toml");
    let ps = period_series(m.mori(), 10);
    let l = m.mori().vector(0).to_vec();
    let rep = gkz_box_check(&ps, &l).map_err(err)?;
    if !rep.annihilated || !rep.residues.is_empty() {
        return Err(format!("residues {:?}", rep.residues));
    }
    let mutated = ps.with_coefficient(&[3], period_coefficient(m.mori(), &[3]) + int(1));
    let bad = gkz_box_check(&mutated, &l).map_err(err)?;
    if bad.annihilated {
        return Err("mutated coefficient not detected".into());
    }
    Ok(format!(
        "certified through |m| <= {}, mutation caught with {} residues",
        rep.certified_order,
        bad.residues.len()
    ))
}

fn bridge() -> Outcome {
    let mut n = 0;
    for (name, order) in [("p4_quintic.toml", 6), ("p2xp2_bicubic.toml", 3)] {
        let m = fixture(name);
        for e in exponent_vectors(m.rank(), order) {
            let ei: Vec<i64> = e.iter().map(|&x| i64::from(x)).collect();
            let g = gamma_ratio_at_integer(m.mori(), &ei).map_err(err)?;
            if g != period_coefficient(m.mori(), &e) {
                return Err(format!("{name} m={e:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} integer points agree"))
}

fn grassmannian() -> Outcome {
    let rep = grassmannian_ratio_check(20).map_err(err)?;
    if rep.rows.len() != 21 || !rep.squared_candidate_matches {
        return Err(format!("matched: {}", rep.matched));
    }
    Ok(format!("m <= 20, matched {}", rep.matched))
}

fn properties() -> Outcome {
    let mut parts = Vec::new();
    for (name, suite) in common::SUITES {
        let cases = suite().map_err(|e| format!("{name}: {e}"))?;
        if cases < 200 {
            return Err(format!("{name}: only {cases} cases"));
        }
        parts.push(format!("{name} x{cases}"));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "gamma sequence table", Some(1), gamma_table),
        (2, "quintic threefold", Some(5), quintic),
        (3, "sextic fourfold", Some(10), sextic),
        (4, "bicubic in P2xP2", Some(30), bicubic),
        (5, "three-way agreement", None, three_way),
        (6, "GKZ box operator", None, gkz),
        (7, "integer substitution bridge", None, bridge),
        (8, "Grassmannian ratio", Some(5), grassmannian),
        (9, "property suites", None, properties),
    ];
    println!("tolerance: {TOLERANCE} (exact equality)");
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > Duration::from_secs(b));
        let budget_text = budget.map_or(String::new(), |b| format!(" / {b} s"));
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over time budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {id} [{tag}] {name} ({:.3} s{budget_text}): {detail}", elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
