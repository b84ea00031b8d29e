//! Command-line driver: `verify` runs over parsed elements, and the
//! self-check suite.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::hecke::{BernsteinElement, HeckeAlgebra};
use crate::lattice::Coweight;
use crate::plancherel::{self, residue_checks, spectral_terms, verify, Plancherel, TermKind, VerifyReport};
use crate::reps::{f_value, f_value_along, one_dim_catalog};
use crate::root_data::Config;
use crate::weights::{d_function, Character};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "affine-hecke", version, about = "Check Plancherel formulas of rank one and two affine Hecke algebras")]
pub struct Args {
    /// Configuration tag: A1Q, A1P, BC1Q, A2Q, A2P, C2Q, C2P, G2Q or BC2Q.
    #[arg(long = "type")]
    pub type_tag: Option<String>,
    /// Parameters in the order of the configuration, e.g. `2.0,3.0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Vec<f64>,
    /// Element expression; repeatable.
    #[arg(long = "element")]
    pub elements: Vec<String>,
    /// Grid nodes per torus direction.
    #[arg(long, default_value_t = plancherel::DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV report path, one row per spectral term.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Run the self-check suite instead of `verify`.
    #[arg(long)]
    pub suite: bool,
    /// Pass threshold on `rel_err`.
    #[arg(long, default_value_t = 1e-5)]
    pub tolerance: f64,
}

/// A validated run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub config: Option<Config>,
    pub params: Vec<f64>,
    pub elements: Vec<String>,
    pub resolution: usize,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub suite: bool,
    pub tolerance: f64,
}

impl RunConfig {
    pub fn from_args(a: Args) -> std::result::Result<RunConfig, String> {
        let config = match &a.type_tag {
            Some(t) => Some(Config::from_str(t).map_err(|e| e.to_string())?),
            None => None,
        };
        if !a.suite && config.is_none() {
            return Err("--type is required unless --suite is given".into());
        }
        if let Some(cfg) = config {
            if !(a.suite && a.q.is_empty()) {
                crate::params::Params::new(cfg, &a.q).map_err(|e| e.to_string())?;
            }
        } else if !a.q.is_empty() {
            return Err("--q needs --type".into());
        }
        if a.resolution < 8 {
            return Err(format!("--resolution {} is below 8", a.resolution));
        }
        if a.tolerance.is_nan() || a.tolerance <= 0.0 {
            return Err("--tolerance must be positive".into());
        }
        Ok(RunConfig {
            config,
            params: a.q,
            elements: a.elements,
            resolution: a.resolution,
            out: a.out,
            csv: a.csv,
            suite: a.suite,
            tolerance: a.tolerance,
        })
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if cfg.suite {
        let report = run_suite(&cfg);
        print!("{}", report.table());
        if let Some(path) = &cfg.out {
            let json = serde_json::to_string_pretty(&report).expect("serializable");
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_RUNTIME;
            }
        }
        return if report.passed() { EXIT_OK } else { EXIT_FAILED };
    }
    run_verify(&cfg)
}

// ---- verify ----

/// Runs `verify` for every element and writes the reports.
pub fn run_verify(cfg: &RunConfig) -> i32 {
    let config = cfg.config.expect("checked in from_args");
    let alg = match HeckeAlgebra::new(config, &cfg.params) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut elements = Vec::new();
    for src in &cfg.elements {
        match parse_element(src, alg.rank()) {
            Ok(e) => elements.push((src.clone(), e.eval(&alg))),
            Err(e) => {
                eprintln!("error: element {src:?}: {e}");
                return EXIT_USAGE;
            }
        }
    }
    let reports = match verify_all(&alg, cfg.resolution, &elements) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let json = serde_json::to_string_pretty(&reports).expect("serializable") + "\n";
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(json.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_RUNTIME;
    }
    if let Some(path) = &cfg.csv {
        if let Err(e) = write_csv(path, &reports) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_RUNTIME;
        }
    }
    for r in &reports {
        let mark = if r.rel_err < cfg.tolerance { "ok" } else { "FAIL" };
        eprintln!("{mark:>4}  {}  rel_err {:.3e}", r.element_src, r.rel_err);
    }
    if reports.iter().all(|r| r.rel_err < cfg.tolerance) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn verify_all(alg: &HeckeAlgebra, resolution: usize, elements: &[(String, BernsteinElement)]) -> Result<Vec<VerifyReport>> {
    if elements.is_empty() {
        return Ok(Vec::new());
    }
    let mut pl = Plancherel::new(alg, resolution)?;
    elements.iter().map(|(src, h)| verify(&mut pl, h, src)).collect()
}

fn params_label(r: &VerifyReport) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub fn write_csv(path: &PathBuf, reports: &[VerifyReport]) -> std::result::Result<(), Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["type", "params", "element", "term_label", "value_re", "value_im"])?;
    for r in reports {
        let params = params_label(r);
        for t in &r.breakdown {
            w.write_record([
                r.config.as_str(),
                params.as_str(),
                r.element_src.as_str(),
                t.label.as_str(),
                &t.value.re.to_string(),
                &t.value.im.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

// ---- suite ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub check: String,
    #[serde(rename = "type")]
    pub config: String,
    pub params: Vec<f64>,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: &'static str,
    pub resolution: usize,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<18} {:<5} {:<22} {:<7} detail\n", "check", "type", "params", "status");
        for r in &self.rows {
            let p: Vec<String> = r.params.iter().map(|v| format!("{v}")).collect();
            let st = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            s += &format!("{:<18} {:<5} {:<22} {:<7} {}\n", r.check, r.config, p.join(","), st, r.detail);
        }
        let n = |s: Status| self.rows.iter().filter(|r| r.status == s).count();
        s += &format!(
            "{} passed, {} failed, {} skipped\n",
            n(Status::Pass),
            n(Status::Fail),
            n(Status::Skipped)
        );
        s
    }
}

/// Parameter points used when the suite runs without `--type`: one or more
/// per regime.
pub fn default_points(cfg: Config) -> Vec<Vec<f64>> {
    let v = |x: &[&[f64]]| x.iter().map(|p| p.to_vec()).collect();
    match cfg {
        Config::A1Q | Config::A1P | Config::A2Q | Config::A2P => v(&[&[2.0], &[5.0]]),
        Config::BC1Q => v(&[&[2.0, 3.0], &[3.0, 2.0], &[2.0, 2.0]]),
        Config::C2Q | Config::C2P => v(&[&[2.0, 3.0], &[5.0, 2.0], &[9.0, 2.0]]),
        Config::G2Q => v(&[&[2.0, 3.0], &[7.0, 3.0], &[11.0, 3.0], &[2.0, 2.0], &[8.0, 2.0]]),
        Config::BC2Q => v(&[&[2.0, 3.0, 8.0], &[2.0, 20.0, 8.0], &[8.0, 3.0, 2.0], &[8.0, 1.5, 2.0]]),
    }
}

struct Rows {
    rows: Vec<SuiteRow>,
}

impl Rows {
    fn push(&mut self, check: &str, cfg: Config, params: &[f64], outcome: Result<(bool, String)>) {
        let (status, detail) = match outcome {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e @ Error::BoundaryParameters(_)) => (Status::Skipped, e.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.rows.push(SuiteRow { check: check.into(), config: cfg.tag().into(), params: params.to_vec(), status, detail });
    }
}

/// Elements `T_w x^λ` with `ℓ(w) ≤ max_len`, `‖λ‖∞ ≤ reach`.
pub fn test_elements(alg: &HeckeAlgebra, max_len: usize, reach: i32) -> Vec<BernsteinElement> {
    let d = &alg.datum;
    let r2 = if alg.rank() == 2 { reach } else { 0 };
    let mut out = Vec::new();
    for w in (0..d.order()).filter(|&w| d.length(w) <= max_len) {
        for a in -reach..=reach {
            for b in -r2..=r2 {
                out.push(BernsteinElement::t_x(w, Coweight([a, b])));
            }
        }
    }
    out
}

fn check_identity(alg: &HeckeAlgebra, resolution: usize, tol: f64) -> Result<(bool, String)> {
    let mut pl = Plancherel::new(alg, resolution)?;
    let mut worst: f64 = 0.0;
    let elements = test_elements(alg, 2, 1);
    for h in &elements {
        let lhs = alg.trace_bernstein(h);
        worst = worst.max((pl.rhs(h)?.total - lhs).norm());
    }
    Ok((worst < tol, format!("{} elements, max |RHS - Tr| {worst:.2e} (tol {tol:.0e})", elements.len())))
}

fn check_convergence(alg: &HeckeAlgebra, resolution: usize, tol: f64) -> Result<(bool, String)> {
    let h = BernsteinElement::t_x(alg.datum.simple(1), Coweight([1, 0]));
    let mut a = Plancherel::new(alg, resolution)?;
    let mut b = Plancherel::new(alg, 2 * resolution)?;
    let diff = (a.rhs(&h)?.total - b.rhs(&h)?.total).norm();
    Ok((diff < tol, format!("|RHS_N - RHS_2N| {diff:.2e} at N = {resolution} (tol {tol:.0e})")))
}

fn check_residues(alg: &HeckeAlgebra) -> Result<(bool, String)> {
    let checks = residue_checks(alg)?;
    let worst = checks.iter().map(|c| c.rel_err()).fold(0.0, f64::max);
    Ok((worst < 1e-8, format!("{} constants, max rel err {worst:.2e}", checks.len())))
}

fn check_modules(alg: &HeckeAlgebra) -> Result<(bool, String)> {
    let terms = spectral_terms(alg)?;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for t in &terms {
        if let TermKind::Discrete(rep) = &t.kind {
            worst = worst.max(rep.check_relations(alg).max());
            n += 1;
        }
        if t.mass < 0.0 {
            return Ok((false, format!("negative mass on {}", t.label)));
        }
    }
    Ok((worst < 1e-9, format!("{n} discrete modules, max relation defect {worst:.2e}")))
}

fn check_tau(alg: &HeckeAlgebra) -> Result<(bool, String)> {
    let d = &alg.datum;
    let mut worst: f64 = 0.0;
    for i in 1..=d.rank {
        let t = alg.tau_i(i);
        worst = worst.max(alg.bernstein_mult(&t, &t).distance(&alg.tau_square_rhs(i)));
    }
    if d.rank == 2 {
        let m = d.coxeter[0][1] as usize;
        let w1: Vec<usize> = (0..m).map(|k| 1 + k % 2).collect();
        let w2: Vec<usize> = (0..m).map(|k| 2 - k % 2).collect();
        worst = worst.max(alg.tau_word(&w1).distance(&alg.tau_word(&w2)));
    }
    Ok((worst < 1e-10, format!("max defect {worst:.2e}")))
}

/// `f_t(T_w) d(t)` against the closed forms for `Ã2`, with `g_t(T_2) = Q(1 − t^{−α1∨})(1 − t^{−α1∨−α2∨})`.
pub fn a2_g_values(alg: &HeckeAlgebra, t: &Character) -> Result<Vec<(String, Complex64, Complex64)>> {
    let d = &alg.datum;
    let q = alg.params.free[0];
    let qq = Complex64::new(q.sqrt() - 1.0 / q.sqrt(), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (a1, a2, a12) = (t.pow(Coweight([-1, 0])), t.pow(Coweight([0, -1])), t.pow(Coweight([-1, -1])));
    let want = [
        (vec![1], qq * (one - a2) * (one - a12)),
        (vec![2], qq * (one - a1) * (one - a12)),
        (vec![1, 2], qq * qq * (one - a12)),
        (vec![2, 1], qq * qq * (one - a12)),
        (vec![1, 2, 1], qq * qq * qq + qq * (one - a1) * (one - a2)),
    ];
    let dt = d_function(d, t);
    let mut out = Vec::new();
    for (word, w) in want {
        let got = f_value(alg, t, &BernsteinElement::t(d.index_of_word(&word)))? * dt;
        let name = word.iter().map(|i| format!("T{i}")).collect::<String>();
        out.push((name, got, w));
    }
    Ok(out)
}

fn check_g_values(alg: &HeckeAlgebra, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut v = [Complex64::new(0.0, 0.0); 2];
        for z in &mut v {
            *z = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.1..3.1));
        }
        for (_, got, want) in a2_g_values(alg, &Character::new(&v))? {
            worst = worst.max((got - want).norm() / want.norm().max(1e-300));
        }
    }
    Ok((worst < 1e-9, format!("20 random t, max rel err {worst:.2e}")))
}

/// Directions used to probe `f_t` at a non-regular `t`.
pub const PROBE_DIRECTIONS: [[f64; 2]; 3] = [[1.0, 0.3], [1.0, 3.0], [1.0, 0.0]];

/// `G̃2` with `q1 = q2 = q` at `t = (q, q⁻¹)`, a non-regular character fixed by
/// the reflection in `3α1 + α2`.
#[derive(Clone, Debug)]
pub struct NegativeControl {
    pub q: f64,
    /// `χ⁴(T1T2T1)`.
    pub chi4: Complex64,
    /// Limits of `f_u(T1T2T1)` as `u → t` along [`PROBE_DIRECTIONS`].
    pub directional: Vec<Complex64>,
    /// `f_t(T1T2T1)` at the regular point `(q1, q2) = (q(1 + 1e-3), q)`, `t = (q1, q2⁻¹)`.
    pub regular_f: Complex64,
    pub regular_chi4: Complex64,
}

pub fn negative_control(q: f64) -> Result<NegativeControl> {
    let alg = HeckeAlgebra::new(Config::G2Q, &[q, q])?;
    let d = &alg.datum;
    let h = BernsteinElement::t(d.index_of_word(&[1, 2, 1]));
    let t = Character::real(&[q, 1.0 / q]);
    let directional = PROBE_DIRECTIONS.iter().map(|&dir| f_value_along(&alg, &t, &h, dir)).collect::<Result<_>>()?;
    let chi4 = one_dim_catalog(&alg)["pi4"].char_value(d, &h);
    let q1 = q * (1.0 + 1e-3);
    let reg = HeckeAlgebra::new(Config::G2Q, &[q1, q])?;
    let regular_f = f_value(&reg, &Character::real(&[q1, 1.0 / q]), &h)?;
    let regular_chi4 = one_dim_catalog(&reg)["pi4"].char_value(d, &h);
    Ok(NegativeControl { q, chi4, directional, regular_f, regular_chi4 })
}

impl NegativeControl {
    /// Spread of the directional limits; zero iff `f_t(T1T2T1)` is defined.
    pub fn spread(&self) -> f64 {
        let d = &self.directional;
        d.iter().flat_map(|a| d.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max)
    }
}

/// Regular characters satisfy `f_t = χ⁴`; at the non-regular point this
/// breaks and `f_t(T1T2T1)` has no limit.
fn check_negative_control(alg: &HeckeAlgebra) -> Result<(bool, String)> {
    let nc = negative_control(alg.params.q(1))?;
    let r = nc.q.sqrt();
    let ok = (nc.chi4 + r).norm() < 1e-12
        && (nc.regular_f - nc.regular_chi4).norm() < 1e-8
        && nc.spread() > 1e-2
        && nc.directional.iter().all(|f| (f - nc.chi4).norm() > 1e-2);
    let dirs: Vec<String> = nc.directional.iter().map(|f| format!("{:.4}", f.re)).collect();
    Ok((ok, format!("chi4 = {:.4}, directional limits of f = [{}]", nc.chi4.re, dirs.join(", "))))
}

/// The fixture regressions and property batteries, for one configuration
/// (at `cfg.params`, or the default points) or for all of them.
pub fn run_suite(cfg: &RunConfig) -> SuiteReport {
    let n = cfg.resolution;
    let relaxed = n < 128;
    let id_tol = if relaxed { 1e-3 } else { 1e-6 };
    let conv_tol = if relaxed { 1e-3 } else { 1e-8 };
    let mut rows = Rows { rows: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let configs: Vec<Config> = cfg.config.map_or(Config::ALL.to_vec(), |c| vec![c]);
    for config in configs {
        let points = if cfg.config.is_some() && !cfg.params.is_empty() {
            vec![cfg.params.clone()]
        } else {
            default_points(config)
        };
        for p in &points {
            let alg = match HeckeAlgebra::new(config, p) {
                Ok(a) => a,
                Err(e) => {
                    rows.push("parameters", config, p, Err(e));
                    continue;
                }
            };
            rows.push("plancherel", config, p, check_identity(&alg, n, id_tol));
            rows.push("convergence", config, p, check_convergence(&alg, n, conv_tol));
            rows.push("residues", config, p, check_residues(&alg));
            rows.push("modules", config, p, check_modules(&alg));
            if config == Config::G2Q && (p[0] - p[1]).abs() < 1e-12 {
                rows.push("negative-control", config, p, check_negative_control(&alg));
            }
        }
        let alg = HeckeAlgebra::new(config, &points[0]).expect("validated above");
        rows.push("tau", config, &points[0], check_tau(&alg));
        if config == Config::A2Q {
            rows.push("g-values", config, &points[0], check_g_values(&alg, &mut rng));
        }
    }
    SuiteReport { schema_version: plancherel::SCHEMA_VERSION, resolution: n, rows: rows.rows }
}
