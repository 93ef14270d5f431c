//! Command-line front end. [`run`] does all the work and returns the text
//! and exit code, so the binary is a thin wrapper and tests can call it
//! directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gammaseq::{gamma_mult_seq, gamma_seq_calabi_yau, inverse_gamma_series, s_sequence, MultSeqPolynomial};
use crate::input::{detect_format, PolytopeInput};
use crate::periods::{gamma_coeff_series, gkz_box_check, period_series, u_operator_check};
use crate::toric::{relation_lattice, sorted_tuples, validate_fano};
use crate::verify::{compute_expected, grassmannian_ratio_check, Verifier};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "gamma-mirror",
    version,
    about = "Gamma-class identities for Calabi-Yau hypersurfaces in smooth toric Fano varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Truncation order of the series (default: d + 2, or 10 for grassmannian)
    #[arg(long, global = true)]
    pub order: Option<u32>,

    /// Significant digits for numeric values
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(10..=100))]
    pub digits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a polytope and print its fan, lattices and intersection data
    Inspect { path: PathBuf },
    /// Gamma-sequence polynomials, standalone or applied to a hypersurface
    Gamma {
        path: Option<PathBuf>,
        /// Print Q_1..Q_D in formal Chern symbols
        #[arg(long, value_name = "D", conflicts_with = "path")]
        standalone: Option<usize>,
        /// Specialize to c_1 = 0
        #[arg(long)]
        cy: bool,
    },
    /// Period series and Gamma-coefficient series
    Period { path: PathBuf },
    /// Run every check on a fixture; exit 0 iff all are exact
    Verify {
        path: PathBuf,
        /// Rewrite the fixture's expected values (refused when CI is set)
        #[arg(long)]
        regen_goldens: bool,
    },
    /// Coefficient ratio of the two Grassmannian series up to --order
    Grassmannian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), exit_code: 0 }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, exit_code: e.exit_code() }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), exit_code: exit_code_for(&e) },
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Inspect { path } => cmd_inspect(path, cli),
        Command::Gamma { path, standalone, cy } => cmd_gamma(path.as_deref(), *standalone, *cy, cli),
        Command::Period { path } => cmd_period(path, cli),
        Command::Verify { path, regen_goldens } => cmd_verify(path, *regen_goldens, cli),
        Command::Grassmannian => cmd_grassmannian(cli),
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn subject(input: &PolytopeInput, path: &Path) -> String {
    input.name.clone().unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_inspect(path: &Path, cli: &Cli) -> Result<Outcome> {
    let input = PolytopeInput::read(path)?;
    let polytope = input.polytope()?;
    let report = validate_fano(&polytope);
    if !report.passed() {
        let stdout = match cli.format {
            Format::Json => json_text(&json!({ "subject": subject(&input, path), "validation": report })),
            Format::Table => {
                let mut s = format!("subject: {}\nvalidation FAILED\n", subject(&input, path));
                for c in &report.conditions {
                    let _ = writeln!(s, "  ({}) {:<5} {}", c.id, if c.passed { "ok" } else { "FAIL" }, c.description);
                    for w in &c.witnesses {
                        let _ = writeln!(s, "        {w}");
                    }
                }
                s
            }
        };
        let failed = report.failed_ids().join(", ");
        return Ok(Outcome { stdout, stderr: format!("validation failed: conditions {failed}\n"), exit_code: 1 });
    }
    let model = input.model()?;
    let ring = model.ring();
    let chern: Vec<String> = strings(model.chern().classes());
    let j: Vec<String> = strings(model.j_classes());
    let couplings: serde_json::Map<String, Value> =
        model.coupling_tensor()?.into_iter().map(|(k, v)| (k, Value::String(v.to_string()))).collect();
    let mut ambient = serde_json::Map::new();
    for idx in sorted_tuples(model.rank(), model.dim()) {
        let key = idx.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        ambient.insert(key, Value::String(model.ambient_coupling(&idx)?.to_string()));
    }
    let stdout = match cli.format {
        Format::Json => json_text(&json!({
            "subject": subject(&input, path),
            "validation": report,
            "rays": model.fan().rays(),
            "cones": model.fan().cones(),
            "relation_lattice": relation_lattice(model.fan()),
            "wall_relations": model.mori().wall_relations(),
            "mori_basis": model.mori().vectors(),
            "divisors_in_j_basis": ring.divisors_in_j_basis(model.mori()),
            "j_classes": j,
            "betti_numbers": ring.betti_numbers(),
            "chern_classes": chern,
            "couplings": couplings,
            "ambient_intersections": ambient,
        })),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "subject:     {}", subject(&input, path));
            let _ = writeln!(s, "validation:  passed ({})", report.convention);
            let _ = writeln!(s, "dimension:   {} (hypersurface {})", model.dim(), model.cy_dim());
            for (i, r) in model.fan().rays().iter().enumerate() {
                let _ = writeln!(s, "ray {:<3}     {:?}", i + 1, r);
            }
            let _ = writeln!(s, "cones:       {}", model.fan().cones().len());
            for (k, l) in model.mori().vectors().iter().enumerate() {
                let _ = writeln!(s, "l^({})        {:?}", k + 1, l);
            }
            let _ = writeln!(s, "betti:       {:?}", ring.betti_numbers());
            for (k, c) in chern.iter().enumerate() {
                let _ = writeln!(s, "c{}(V)       {}", k + 1, c);
            }
            for (k, v) in &couplings {
                let _ =
                    writeln!(s, "K[{k}]{}{}", " ".repeat(10usize.saturating_sub(k.len())), v.as_str().unwrap_or(""));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn poly_lines(polys: &[MultSeqPolynomial]) -> Vec<String> {
    polys.iter().map(|q| format!("Q_{} = {}", q.degree(), q)).collect()
}

pub fn cmd_gamma(path: Option<&Path>, standalone: Option<usize>, cy: bool, cli: &Cli) -> Result<Outcome> {
    match (path, standalone) {
        (None, Some(d)) => {
            if d == 0 {
                return Err(Error::Precondition("--standalone needs D >= 1".into()));
            }
            let start = if cy { 2 } else { 1 };
            let polys: Vec<MultSeqPolynomial> = (start..=d)
                .map(|k| if cy { gamma_seq_calabi_yau(k) } else { gamma_mult_seq(k) })
                .collect::<Result<_>>()?;
            let s = s_sequence(&inverse_gamma_series(d as u32), d as u32)?;
            let stdout = match cli.format {
                Format::Json => json_text(&json!({
                    "dimension": d,
                    "calabi_yau": cy,
                    "s_sequence": strings(&s),
                    "polynomials": polys.iter().map(MultSeqPolynomial::to_json).collect::<Vec<_>>(),
                    "display": poly_lines(&polys),
                })),
                Format::Table => {
                    let mut out = String::new();
                    for (i, si) in s.iter().enumerate().skip(1) {
                        let _ = writeln!(out, "s_{i} = {si}");
                    }
                    for l in poly_lines(&polys) {
                        let _ = writeln!(out, "{l}");
                    }
                    out
                }
            };
            Ok(Outcome::ok(stdout))
        }
        (Some(path), None) => {
            let input = PolytopeInput::read(path)?;
            let model = input.model()?;
            let n = model.cy_dim();
            let polys: Vec<MultSeqPolynomial> = (1..=n).map(gamma_mult_seq).collect::<Result<_>>()?;
            let mut integrals = Vec::new();
            for k in 2..=n {
                let q = crate::gammaseq::apply_mult_seq(&polys[k - 1], model.chern())?;
                for t in sorted_tuples(model.rank(), n - k) {
                    let class = q.try_mul(&model.j_monomial(&t)?)?;
                    let v = model.ring().integrate_over_v(&model.ring().reduce(&class).degree_part(n as u32))?;
                    let mut key = format!("Q{k}");
                    for i in &t {
                        let _ = write!(key, "*J{i}");
                    }
                    integrals.push((key, v.to_string(), v.eval(cli.digits)?.to_string()));
                }
            }
            let shown: Vec<MultSeqPolynomial> =
                if cy { polys.iter().skip(1).map(MultSeqPolynomial::without_c1).collect() } else { polys.clone() };
            let stdout = match cli.format {
                Format::Json => json_text(&json!({
                    "subject": subject(&input, path),
                    "polynomials": shown.iter().map(MultSeqPolynomial::to_json).collect::<Vec<_>>(),
                    "display": poly_lines(&shown),
                    "integrals_over_v": integrals.iter().map(|(k, v, x)| json!({"class": k, "exact": v, "numeric": x})).collect::<Vec<_>>(),
                })),
                Format::Table => {
                    let mut out = String::new();
                    for l in poly_lines(&shown) {
                        let _ = writeln!(out, "{l}");
                    }
                    for (k, v, x) in &integrals {
                        let _ = writeln!(out, "int_V {k:<12} = {v:<24} ~ {x}");
                    }
                    out
                }
            };
            Ok(Outcome::ok(stdout))
        }
        _ => Err(Error::Precondition("gamma needs either a polytope file or --standalone D".into())),
    }
}

pub fn cmd_period(path: &Path, cli: &Cli) -> Result<Outcome> {
    let input = PolytopeInput::read(path)?;
    let model = input.model()?;
    let order = cli.order.unwrap_or(model.dim() as u32 + 2);
    let ps = period_series(model.mori(), order);
    let g = gamma_coeff_series(model.mori(), order)?;
    let mut boxes = Vec::new();
    let mut warnings = String::new();
    for l in model.mori().vectors() {
        match gkz_box_check(&ps, l) {
            Ok(rep) => boxes.push(serde_json::to_value(&rep).expect("json")),
            Err(Error::InsufficientOrder(msg)) => {
                let _ = writeln!(warnings, "warning: insufficient order: {msg}");
                boxes.push(json!({"relation": l, "insufficient_order": msg}));
            }
            Err(e) => return Err(e),
        }
    }
    let torus = u_operator_check(&ps, model.fan());
    let stdout = match cli.format {
        Format::Json => json_text(&json!({
            "subject": subject(&input, path),
            "order": order,
            "mori_basis": model.mori().vectors(),
            "period_series": ps.series().to_json(),
            "gamma_coeff_series": g.series().to_json(),
            "box_checks": boxes,
            "torus_operators_annihilate": torus,
        })),
        Format::Table => {
            let mut out = format!("subject: {}\norder:   {order}\n", subject(&input, path));
            let _ = writeln!(out, "period coefficients (a_0 * Pi):");
            for (e, c) in ps.series().terms() {
                let _ = writeln!(out, "  x^{:?}  {}", e.0, c);
            }
            let _ = writeln!(out, "gamma coefficient series:");
            for (e, c) in g.series().terms() {
                let _ = writeln!(out, "  rho^{:?}  {}", e.0, c);
            }
            for b in &boxes {
                let _ = writeln!(out, "box check: {b}");
            }
            let _ = writeln!(out, "torus operators annihilate: {torus}");
            out
        }
    };
    Ok(Outcome { stdout, stderr: warnings, exit_code: 0 })
}

pub fn cmd_verify(path: &Path, regen: bool, cli: &Cli) -> Result<Outcome> {
    let input = PolytopeInput::read(path)?;
    let model = input.model()?;
    let order = cli.order.unwrap_or(model.dim() as u32 + 2);
    if regen {
        if std::env::var_os("CI").is_some() {
            return Ok(Outcome {
                stdout: String::new(),
                stderr: "refusing to regenerate goldens under CI\n".into(),
                exit_code: 1,
            });
        }
        let mut updated = input.clone();
        updated.expected = compute_expected(&model, order)?;
        let text = std::fs::read_to_string(path)?;
        std::fs::write(path, updated.to_text(detect_format(path, &text))?)?;
        return Ok(Outcome::ok(format!("rewrote expected values in {}\n", path.display())));
    }
    let mut v = Verifier::new(&model, order, cli.digits)?;
    let expected = (!input.expected.is_empty()).then_some(&input.expected);
    let report = v.run_all(&subject(&input, path), expected)?;
    let stdout = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Table => report.to_table(),
    };
    let stderr = report.failures().iter().map(|e| format!("mismatch: {}: {} != {}\n", e.id, e.lhs, e.rhs)).collect();
    Ok(Outcome { stdout, stderr, exit_code: if report.all_exact { 0 } else { 1 } })
}

pub fn cmd_grassmannian(cli: &Cli) -> Result<Outcome> {
    let n = cli.order.unwrap_or(10);
    let rep = grassmannian_ratio_check(n)?;
    let stdout = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("json") + "\n",
        Format::Table => rep.to_table(),
    };
    let ok = rep.squared_candidate_matches;
    Ok(Outcome { stdout, stderr: String::new(), exit_code: if ok { 0 } else { 1 } })
}
