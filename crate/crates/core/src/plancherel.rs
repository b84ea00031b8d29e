//! The Plancherel measure of each configuration, and the numerical check
//! `Tr(h) = Σ mass · ∫ χ(h)` against the canonical trace.
//!
//! Continuous terms are integrated through their Fourier moments: the
//! character of an induced module is a Laurent polynomial in the torus
//! coordinate, so `∫ χ(h) dμ` is a finite combination of the moments
//! `∫ t^μ / (c(t)c(t⁻¹))`, computed once per configuration on a uniform grid.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{BernsteinElement, HeckeAlgebra};
use crate::laurent::Laurent;
use crate::lattice::Coweight;
use crate::reps::{
    calibrated_module, g2_pi7_plus, omega, one_dim_catalog, InducedData, Representation, SymbolicModule,
};
use crate::root_data::{Config, RootClass};
use crate::weights::{c_function, n_set, Character, EPS_ZERO};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Default number of grid nodes per torus direction.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Relative half-width of the band around a regime boundary.
pub const EPS_REGIME: f64 = 1e-6;

/// Grid offsets (fractions of a cell), tried in turn when a node lands on
/// a singularity of the density.
const OFFSETS: [f64; 3] = [0.207_106_781_186_547_5, 0.366_025_403_784_438_6, 0.118_033_988_749_894_9];

const NODE_EPS: f64 = 1e-9;

/// Target aliasing decay `e^{-ALIAS_DECAY}` when choosing the node count.
const ALIAS_DECAY: f64 = 30.0;
const MAX_NODES_2D: usize = 2048;
const MAX_NODES_1D: usize = 1 << 20;

const RESIDUE_NODES: usize = 512;

pub fn sigma1(x: f64) -> f64 {
    1.0 + x
}

pub fn sigma2(x: f64) -> f64 {
    1.0 + x + x * x
}

// ---- factored c-functions ----

/// `1 − coef · t^{−exp}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Factor {
    pub coef: Complex64,
    pub exp: [i32; 2],
}

impl Factor {
    pub fn new(coef: Complex64, exp: [i32; 2]) -> Factor {
        Factor { coef, exp }
    }

    pub fn eval(&self, t: &Character) -> Complex64 {
        c(1.0) - self.coef * t.pow(Coweight([-self.exp[0], -self.exp[1]]))
    }
}

/// A c-function `Π num / Π den` of factors `1 − a t^{−e}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactorProduct {
    pub num: Vec<Factor>,
    pub den: Vec<Factor>,
}

impl FactorProduct {
    /// One-variable product from `(coef, k)` pairs meaning `1 − coef s^{−k}`.
    pub fn in_s(num: &[(Complex64, i32)], den: &[(Complex64, i32)]) -> FactorProduct {
        let f = |v: &[(Complex64, i32)]| v.iter().map(|&(a, k)| Factor::new(a, [k, 0])).collect();
        FactorProduct { num: f(num), den: f(den) }
    }

    pub fn eval(&self, t: &Character) -> Complex64 {
        let n: Complex64 = self.num.iter().map(|f| f.eval(t)).product();
        let d: Complex64 = self.den.iter().map(|f| f.eval(t)).product();
        n / d
    }

    /// `1/(c(t)c(t⁻¹))`, which is `1/|c(t)|²` on the unit torus.
    pub fn density(&self, t: &Character) -> Result<Complex64> {
        let ti = t.inverse();
        let mut top = c(1.0);
        for f in &self.den {
            top *= f.eval(t) * f.eval(&ti);
        }
        let mut bot = c(1.0);
        for f in &self.num {
            let (a, b) = (f.eval(t), f.eval(&ti));
            if a.norm() < NODE_EPS || b.norm() < NODE_EPS {
                return Err(Error::SingularNode);
            }
            bot *= a * b;
        }
        Ok(top / bot)
    }

    /// Distance in `log|t|` per unit of exponent from the unit torus to the
    /// nearest pole of the density. Unimodular factors are removable (they
    /// cancel against the denominator) and are skipped.
    pub fn pole_margin(&self) -> f64 {
        self.num
            .iter()
            .filter_map(|f| {
                let l = f.coef.norm().ln().abs();
                let n = (f.exp[0].abs() + f.exp[1].abs()) as f64;
                (l > 1e-12 && n > 0.0).then_some(l / n)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Zeros of `c(z)c(1/z)` in one variable, together with `z = 0`.
    pub fn singularities_1d(&self) -> Vec<Complex64> {
        let mut out = vec![c(0.0)];
        for f in &self.num {
            let k = f.exp[0];
            if k == 0 {
                continue;
            }
            // z^k = a from c(z), z^k = 1/a from c(1/z)
            for a in [f.coef, f.coef.inv()] {
                let a = if k > 0 { a } else { a.inv() };
                let m = k.unsigned_abs() as usize;
                let r = a.powf(1.0 / m as f64);
                for j in 0..m {
                    out.push(r * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64));
                }
            }
        }
        out
    }
}

/// `c(t)` of the configuration as a factor product over `R0+`.
pub fn principal_c(alg: &HeckeAlgebra) -> FactorProduct {
    let d = &alg.datum;
    let p = &alg.params;
    let mut out = FactorProduct::default();
    for (k, root) in d.positive_roots.iter().enumerate() {
        let e = root.coroot.0;
        match root.class {
            RootClass::R2 => {
                let (q0, qn) = p.r2_pair(d, k);
                let h = root.half_coroot.expect("R2 roots carry a half coroot").0;
                out.num.push(Factor::new(c((q0 * qn).powf(-0.5)), h));
                out.num.push(Factor::new(c(-(q0 / qn).sqrt()), h));
            }
            _ => out.num.push(Factor::new(c(1.0 / p.q_root(d, k)), e)),
        }
        out.den.push(Factor::new(c(1.0), e));
    }
    out
}

/// Sanity check of [`principal_c`] against the root-by-root definition.
pub fn principal_c_matches(alg: &HeckeAlgebra, t: &Character) -> Result<f64> {
    let a = principal_c(alg).eval(t);
    let b = c_function(&alg.datum, &alg.params, t)?;
    Ok((a - b).norm() / b.norm().max(1.0))
}

// ---- constants ----

/// The scalar constants appearing as discrete masses.
pub fn constants(alg: &HeckeAlgebra) -> BTreeMap<&'static str, f64> {
    let p = &alg.params;
    let mut out = BTreeMap::new();
    match alg.datum.config {
        Config::A1Q | Config::A1P => {
            let q = p.free[0];
            out.insert("A", (q - 1.0) / (q + 1.0));
        }
        Config::BC1Q => {
            let (q0, q1) = (p.free[0], p.free[1]);
            let den = (q0 + 1.0) * (q1 + 1.0);
            out.insert("A", (q0 * q1 - 1.0) / den);
            out.insert("B", (q0 - q1).abs() / den);
        }
        Config::A2Q | Config::A2P => {
            let q = p.free[0];
            out.insert("A", (q - 1.0).powi(3) / (q.powi(3) - 1.0));
        }
        Config::C2Q | Config::C2P => {
            let (q1, q2) = (p.q(1), p.q(2));
            out.insert(
                "A",
                (q1 * q2 - 1.0) * (q1 * q2 * q2 - 1.0) / (sigma1(q1) * sigma1(q2).powi(2) * sigma1(q1 * q2)),
            );
            // half the displayed value; both the residue of c_1 at −q1^{−1/2}
            // and the trace identity itself require it
            out.insert("B", q2 * (q1 - 1.0).powi(2) / (sigma1(q2).powi(2) * sigma1(q1 / q2) * sigma1(q1 * q2)));
            out.insert(
                "C",
                (q1 / q2 - 1.0) * (1.0 - q1 / (q2 * q2)) / (sigma1(q1) * sigma1(1.0 / q2).powi(2) * sigma1(q1 / q2)),
            );
        }
        Config::G2Q => {
            let (q1, q2) = (p.q(1), p.q(2));
            out.insert(
                "A",
                (q1 * q2 * q2 - 1.0) * (q1 * q1 * q2.powi(3) - 1.0)
                    / (sigma1(q1) * sigma1(q2) * sigma2(q2) * sigma2(q1 * q2)),
            );
            for (name, sign) in [("B+", 1.0), ("B-", -1.0)] {
                out.insert(
                    name,
                    q1 * (q1 - 1.0) * (q2 - 1.0)
                        / (2.0
                            * sigma1(q1)
                            * sigma1(q2)
                            * sigma2(sign * (q1 / q2).sqrt())
                            * sigma2(sign * (q1 * q2).sqrt())),
                );
            }
            out.insert(
                "C",
                q2 * (q1 - 1.0) * (q1.powi(3) - 1.0) / (sigma2(q2) * sigma2(q1 / q2) * sigma2(q1 * q2)),
            );
            out.insert(
                "D",
                (1.0 - q1 / (q2 * q2)) * (q1 * q1 / q2.powi(3) - 1.0)
                    / (sigma1(q1) * sigma1(1.0 / q2) * sigma2(1.0 / q2) * sigma2(q1 / q2)),
            );
        }
        Config::BC2Q => {
            let (q0, q1, q2) = (p.q(0), p.q(1), p.q(2));
            let c1 = |q0: f64, q1: f64, q2: f64| {
                (q0 * q1 * q2 - 1.0) * (q0 * q1 * q1 * q2 - 1.0)
                    / (sigma1(q0) * sigma1(q1) * sigma1(q2) * sigma1(q0 * q1) * sigma1(q1 * q2))
            };
            out.insert("C1", c1(q0, q1, q2));
            out.insert("C2", -c1(1.0 / q0, q1, 1.0 / q2));
            out.insert(
                "C3",
                (q2 - q0) * (q0 * q2 - 1.0)
                    / (sigma1(q0 / q1) * sigma1(q2 / q1) * sigma1(q0 * q1) * sigma1(q1 * q2)),
            );
            out.insert("C4", c1(1.0 / q0, q1, q2));
            out.insert("C5", -c1(q0, q1, 1.0 / q2));
            out.insert("C6", (q1 - 1.0) / (2.0 * q1 * q2 * q2 * (q1 + 1.0)));
            out.insert("C7", (q0 * q2 - 1.0) / (2.0 * q1 * q1 * q2 * (q0 + 1.0) * (q2 + 1.0)));
            out.insert("C8", (q2 - q0).abs() / (2.0 * q1 * q1 * q2 * (q0 + 1.0) * (q2 + 1.0)));
        }
    }
    out
}

// ---- spectral terms ----

#[derive(Clone, Debug)]
pub enum TermKind {
    /// The unitary principal series over the compact torus.
    Principal,
    /// A one-parameter family induced from a parabolic `ℋ_i`.
    Family(InducedData),
    Discrete(Box<Representation>),
}

#[derive(Clone, Debug)]
pub struct SpectralTerm {
    pub label: String,
    pub mass: f64,
    /// `c` whose `1/(c c̄)` is the density of a continuous term.
    pub density: Option<FactorProduct>,
    pub kind: TermKind,
}

impl SpectralTerm {
    fn discrete(label: &str, mass: f64, rep: Representation) -> SpectralTerm {
        SpectralTerm { label: label.to_string(), mass, density: None, kind: TermKind::Discrete(Box::new(rep)) }
    }

    fn family(alg: &HeckeAlgebra, label: &str, mass: f64, data: InducedData, c: FactorProduct) -> Result<SpectralTerm> {
        data.validate(alg)?;
        Ok(SpectralTerm { label: label.to_string(), mass, density: Some(c), kind: TermKind::Family(data) })
    }

    /// Dimension of the integration torus (0 for discrete terms).
    pub fn torus_dim(&self, rank: usize) -> usize {
        match self.kind {
            TermKind::Principal => rank,
            TermKind::Family(_) => 1,
            TermKind::Discrete(_) => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Below,
    On,
    Above,
}

fn side(a: f64, b: f64) -> Side {
    if (a - b).abs() <= EPS_REGIME * a.abs().max(b.abs()) {
        Side::On
    } else if a < b {
        Side::Below
    } else {
        Side::Above
    }
}

/// Position of `x` relative to `lo < hi`: `Some(0|1|2)` strictly inside a
/// regime, `None` on a boundary.
fn band(x: f64, lo: f64, hi: f64) -> Option<usize> {
    match (side(x, lo), side(x, hi)) {
        (Side::Below, _) => Some(0),
        (Side::Above, Side::Below) => Some(1),
        (_, Side::Above) => Some(2),
        _ => None,
    }
}

fn boundary(cfg: Config, what: &str) -> Error {
    Error::BoundaryParameters(format!("{cfg}: {what}"))
}

fn root_named(alg: &HeckeAlgebra, name: &str) -> usize {
    alg.datum.positive_roots.iter().position(|r| r.name == name).expect("root table entry")
}

/// Principal-series mass `1/(|W0| q_{w0})`.
pub fn principal_mass(alg: &HeckeAlgebra) -> f64 {
    let d = &alg.datum;
    1.0 / (d.order() as f64 * alg.params.q_weyl(d, d.w0()))
}

/// A discrete module whose construction fails at these parameters sits on
/// a wall the formulas do not cover.
fn refuse(alg: &HeckeAlgebra, label: &str) -> impl Fn(Error) -> Error {
    let cfg = alg.datum.config;
    let label = label.to_string();
    move |e| boundary(cfg, &format!("{label} cannot be built here ({e})"))
}

fn calibrated(alg: &HeckeAlgebra, t: [Complex64; 2], j: &[&str], label: &str) -> Result<Representation> {
    let j: Vec<usize> = j.iter().map(|n| root_named(alg, n)).collect();
    let full = format!("{}:{label}", alg.datum.config.tag());
    calibrated_module(alg, &Character::new(&t), &j, &full).map_err(refuse(alg, label))
}

/// `M_{N(t)}(t)`, the module supported on `F_{N(t)}(t)`.
fn calibrated_full(alg: &HeckeAlgebra, t: [Complex64; 2], label: &str) -> Result<Representation> {
    let t = Character::new(&t);
    let j = n_set(&alg.datum, &alg.params, &t);
    let full = format!("{}:{label}", alg.datum.config.tag());
    calibrated_module(alg, &t, &j, &full).map_err(refuse(alg, label))
}

/// The spectral decomposition of the trace: principal series, induced
/// families and discrete series with their masses.
pub fn spectral_terms(alg: &HeckeAlgebra) -> Result<Vec<SpectralTerm>> {
    let cfg = alg.datum.config;
    let p = &alg.params;
    let k = constants(alg);
    let cat = one_dim_catalog(alg);
    let one = |name: &str| cat[name].clone();
    let mut out = vec![SpectralTerm {
        label: "principal".into(),
        mass: principal_mass(alg),
        density: Some(principal_c(alg)),
        kind: TermKind::Principal,
    }];
    let fam = |node: usize, eps: Complex64, coef: [Complex64; 2], s_exp: [i32; 2]| InducedData { node, eps, coef, s_exp };
    match cfg {
        Config::A1Q => out.push(SpectralTerm::discrete("pi", k["A"], one("pi"))),
        Config::A1P => {
            out.push(SpectralTerm::discrete("pi1", k["A"] / 2.0, one("pi1")));
            out.push(SpectralTerm::discrete("pi2", k["A"] / 2.0, one("pi2")));
        }
        Config::BC1Q => {
            let (q0, q1) = (p.free[0], p.free[1]);
            out.push(SpectralTerm::discrete("pi1", k["A"], one("pi1")));
            match side(q0, q1) {
                Side::Below => out.push(SpectralTerm::discrete("pi2", k["B"], one("pi2"))),
                Side::Above => out.push(SpectralTerm::discrete("pi3", k["B"], one("pi3"))),
                Side::On => {}
            }
        }
        Config::A2Q | Config::A2P => {
            let q = p.free[0];
            let mass = (q - 1.0).powi(2) / (q * q * (q * q - 1.0));
            let (data, kk) = if cfg == Config::A2Q {
                (fam(1, c(-q.powf(-0.5)), [c(1.0 / q), c(q.sqrt())], [0, 1]), 1)
            } else {
                (fam(1, c(-q.powf(-0.5)), [c(q.powf(-0.5)), c(1.0)], [1, 2]), 3)
            };
            let c1 = FactorProduct::in_s(&[(c(q.powf(-1.5)), kk)], &[(c(q.sqrt()), kk)]);
            out.push(SpectralTerm::family(alg, "pi1", mass, data, c1)?);
            if cfg == Config::A2Q {
                out.push(SpectralTerm::discrete("pi2", k["A"], one("pi2")));
            } else {
                for n in ["pi2", "pi3", "pi4"] {
                    out.push(SpectralTerm::discrete(n, k["A"] / 3.0, one(n)));
                }
            }
        }
        Config::C2Q | Config::C2P => {
            let (q1, q2) = (p.q(1), p.q(2));
            let (r1, r2) = (q1.sqrt(), q2.sqrt());
            let c1 = FactorProduct::in_s(
                &[(c(-1.0 / r1), 1), (c(1.0 / (r1 * q2)), 1), (c(r1 / q2), 1)],
                &[(c(1.0), 2), (c(r1), 1)],
            );
            let k2 = if cfg == Config::C2Q { 1 } else { 2 };
            let c2 = FactorProduct::in_s(&[(c(1.0 / (q1 * q2)), k2), (c(q2 / q1), k2)], &[(c(1.0), k2), (c(q2), k2)]);
            let (m1, m2) = (c(-1.0 / r1), c(-1.0 / r2));
            let cc = k["C"].abs();
            if cfg == Config::C2Q {
                let mass1 = (q1 - 1.0) / (2.0 * q1 * q2 * q2 * (q1 + 1.0));
                let mass2 = (q2 - 1.0) / (2.0 * q1 * q1 * q2 * (q2 + 1.0));
                out.push(SpectralTerm::family(alg, "pi1", mass1, fam(1, m1, [c(1.0 / q1), c(r1)], [0, 1]), c1)?);
                out.push(SpectralTerm::family(alg, "pi2", mass2, fam(2, m2, [c(q2), c(1.0 / q2)], [1, 0]), c2)?);
                out.push(SpectralTerm::discrete("pi3", k["A"], one("pi3")));
                out.push(SpectralTerm::discrete("pi4", k["B"], one("pi4")));
                out.push(SpectralTerm::discrete("pi5", k["B"], one("pi5")));
                match band(q1, q2, q2 * q2) {
                    Some(0) => out.push(SpectralTerm::discrete("pi6", cc, one("pi6"))),
                    Some(1) => {
                        let rep = calibrated(alg, [c(1.0 / q1), c(q2)], &["a2"], "pi8")?;
                        out.push(SpectralTerm::discrete("pi8", cc, rep));
                    }
                    Some(2) => out.push(SpectralTerm::discrete("pi7", cc, one("pi7"))),
                    // the remaining mass vanishes on the walls
                    _ => {}
                }
            } else {
                let mass1 = (q1 - 1.0).powi(2) / (4.0 * q1 * q2 * q2 * (q1 * q1 - 1.0));
                let mass2 = (q2 - 1.0).powi(2) / (2.0 * q1 * q1 * q2 * (q2 * q2 - 1.0));
                for (tag, sign) in [("+", 1.0), ("-", -1.0)] {
                    let data = fam(1, m1, [c(1.0 / r1), c(sign)], [1, 1]);
                    out.push(SpectralTerm::family(alg, &format!("pi1{tag}"), mass1, data, c1.clone())?);
                }
                out.push(SpectralTerm::family(alg, "pi2", mass2, fam(2, m2, [c(1.0), c(1.0 / r2)], [2, 1]), c2)?);
                out.push(SpectralTerm::discrete("pi3+", k["A"] / 2.0, one("pi3+")));
                out.push(SpectralTerm::discrete("pi3-", k["A"] / 2.0, one("pi3-")));
                let pi6 = calibrated(alg, [c(-1.0 / q1), c(1.0 / r1)], &[], "pi6")?;
                out.push(SpectralTerm::discrete("pi6", k["B"], pi6));
                let regime = band(q1, q2, q2 * q2);
                for (tag, sign) in [("+", 1.0), ("-", -1.0)] {
                    match regime {
                        Some(0) => out.push(SpectralTerm::discrete(&format!("pi4{tag}"), cc / 2.0, one(&format!("pi4{tag}")))),
                        Some(1) => {
                            let name = format!("pi7{tag}");
                            let rep = calibrated(alg, [c(q2 / q1), c(sign * q2 / r1)], &["a2"], &name)?;
                            out.push(SpectralTerm::discrete(&name, cc / 2.0, rep));
                        }
                        Some(2) => out.push(SpectralTerm::discrete(&format!("pi5{tag}"), cc / 2.0, one(&format!("pi5{tag}")))),
                        _ => {}
                    }
                }
            }
        }
        Config::G2Q => {
            let (q1, q2) = (p.q(1), p.q(2));
            let (r1, r2) = (q1.sqrt(), q2.sqrt());
            let w = omega(1);
            let c1 = FactorProduct::in_s(
                &[(w / r1, 1), (w.inv() / r1, 1), (c(1.0 / q2), 2), (c(1.0 / (r1 * q2)), 1), (c(r1 / q2), 1)],
                &[(c(1.0), 2), (c(1.0 / r1), 1), (c(r1), 3)],
            );
            let q2h = q2 * r2;
            let c2 = FactorProduct::in_s(
                &[(c(1.0 / q1), 2), (c(1.0 / (q1 * q2h)), 1), (c(q2h / q1), 1)],
                &[(c(1.0), 2), (c(q2h), 1), (c(r2), 1)],
            );
            let mass1 = (q1 - 1.0).powi(2) / (2.0 * q1 * q2.powi(3) * (q1 * q1 - 1.0));
            let mass2 = (q2 - 1.0).powi(2) / (2.0 * q1.powi(3) * q2 * q2 * (q2 * q2 - 1.0));
            out.push(SpectralTerm::family(alg, "pi1", mass1, fam(1, c(-1.0 / r1), [c(1.0 / q1), c(r1)], [0, 1]), c1)?);
            out.push(SpectralTerm::family(alg, "pi2", mass2, fam(2, c(-1.0 / r2), [c(q2h), c(1.0 / q2)], [1, 0]), c2)?);
            out.push(SpectralTerm::discrete("pi3", k["A"], one("pi3")));
            // π⁷₊ has exact fixtures on the walls q1 = q2 and q1 = q2³, but
            // its generic matrices are ill-conditioned just beside them.
            for wall in [q2, q2.powi(3)] {
                if side(q1, wall) == Side::On && (q1 - wall).abs() > EPS_ZERO * q1 {
                    return Err(boundary(cfg, "q1 is within the regime band of a π⁷₊ wall but not on it"));
                }
            }
            out.push(SpectralTerm::discrete("pi7+", k["B+"], g2_pi7_plus(alg)?));
            let pi7m = calibrated_full(alg, [c(q1), c(-(q2 / q1).sqrt())], "pi7-")?;
            out.push(SpectralTerm::discrete("pi7-", k["B-"], pi7m));
            let pi8 = calibrated_full(alg, [c(q1), w], "pi8")?;
            out.push(SpectralTerm::discrete("pi8", k["C"], pi8));
            let dd = k["D"].abs();
            match band(q1, q2h, q2 * q2) {
                Some(0) => out.push(SpectralTerm::discrete("pi4", dd, one("pi4"))),
                Some(1) => {
                    let rep = calibrated(alg, [c(1.0 / q1), c(q2)], &["a2"], "pi6")?;
                    out.push(SpectralTerm::discrete("pi6", dd, rep));
                }
                Some(2) => out.push(SpectralTerm::discrete("pi5", dd, one("pi5"))),
                _ => {}
            }
        }
        Config::BC2Q => {
            let (q0, q1, q2) = (p.q(0), p.q(1), p.q(2));
            let r1 = q1.sqrt();
            let (a, b) = ((q0 * q2).sqrt(), (q2 / q0).sqrt());
            let h = |x: f64| x.sqrt();
            let c1 = FactorProduct::in_s(
                &[
                    (c(1.0 / (h(q0) * r1 * h(q2))), 1),
                    (c(-h(q0) / (r1 * h(q2))), 1),
                    (c(r1 / (h(q0) * h(q2))), 1),
                    (c(-h(q0) * r1 / h(q2)), 1),
                ],
                &[(c(1.0), 2), (c(q1), 2)],
            );
            let c2 = FactorProduct::in_s(
                &[(c(-h(q0) / h(q2)), 1), (c(1.0 / (q1 * a)), 1), (c(a / q1), 1)],
                &[(c(1.0), 2), (c(a), 1)],
            );
            let c3 = FactorProduct::in_s(
                &[(c(-1.0 / a), 1), (c(1.0 / (q1 * b)), 1), (c(b / q1), 1)],
                &[(c(1.0), 2), (c(b), 1)],
            );
            let m1 = c(-1.0 / r1);
            let m2 = c(-1.0 / h(q2));
            let q0_vs_q2 = side(q0, q2);
            if q0_vs_q2 == Side::On {
                return Err(boundary(cfg, "q0 = q2"));
            }
            let abs = |n: &str| k[n].abs();
            out.push(SpectralTerm::family(alg, "pi1", k["C6"], fam(1, m1, [c(1.0 / q1), c(r1)], [0, 1]), c1)?);
            out.push(SpectralTerm::family(alg, "pi2", k["C7"], fam(2, m2, [c(a), c(1.0 / a)], [1, 0]), c2)?);
            if q0_vs_q2 == Side::Below {
                let data = fam(2, m2, [c(b), c(-1.0 / b)], [1, 0]);
                out.push(SpectralTerm::family(alg, "pi3", k["C8"], data, c3)?);
            } else {
                let data = fam(2, c(h(q2)), [c(1.0 / b), c(-b)], [1, 0]);
                out.push(SpectralTerm::family(alg, "pi4", k["C8"], data, c3)?);
            }
            out.push(SpectralTerm::discrete("pi5", k["C1"], one("pi5")));
            match band(q1, a, q0 * q2).ok_or_else(|| boundary(cfg, "q1 on a wall of √(q0q2), q0q2"))? {
                0 => out.push(SpectralTerm::discrete("pi7", abs("C2"), one("pi7"))),
                1 => {
                    let rep = calibrated(alg, [c(1.0 / q1), c(a)], &["a2"], "pi12")?;
                    out.push(SpectralTerm::discrete("pi12", abs("C2"), rep));
                }
                _ => out.push(SpectralTerm::discrete("pi9", abs("C2"), one("pi9"))),
            }
            if q0_vs_q2 == Side::Below {
                let rep = calibrated(alg, [c(-q0), c(1.0 / a)], &[], "pi15")?;
                out.push(SpectralTerm::discrete("pi15", abs("C3"), rep));
                out.push(SpectralTerm::discrete("pi6", abs("C4"), one("pi6")));
                match band(q1, b, b * b).ok_or_else(|| boundary(cfg, "q1 on a wall of √(q2/q0), q2/q0"))? {
                    0 => out.push(SpectralTerm::discrete("pi8", abs("C5"), one("pi8"))),
                    1 => {
                        let rep = calibrated(alg, [c(1.0 / q1), c(-b)], &["a2"], "pi13")?;
                        out.push(SpectralTerm::discrete("pi13", abs("C5"), rep));
                    }
                    _ => out.push(SpectralTerm::discrete("pi10", abs("C5"), one("pi10"))),
                }
            } else {
                let rep = calibrated(alg, [c(-q2), c(1.0 / a)], &[], "pi16")?;
                out.push(SpectralTerm::discrete("pi16", abs("C3"), rep));
                out.push(SpectralTerm::discrete("pi10", abs("C5"), one("pi10")));
                match band(q1, 1.0 / b, 1.0 / (b * b)).ok_or_else(|| boundary(cfg, "q1 on a wall of √(q0/q2), q0/q2"))? {
                    0 => out.push(SpectralTerm::discrete("pi11", abs("C4"), one("pi11"))),
                    1 => {
                        let rep = calibrated(alg, [c(1.0 / q1), c(-1.0 / b)], &["a2"], "pi14")?;
                        out.push(SpectralTerm::discrete("pi14", abs("C4"), rep));
                    }
                    _ => out.push(SpectralTerm::discrete("pi6", abs("C4"), one("pi6"))),
                }
            }
        }
    }
    Ok(out)
}

// ---- quadrature ----

/// Pairwise (cascade) summation.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Moments `∫ t^μ / (c(t)c(t⁻¹))` over the unit torus (normalized Haar
/// measure), for `‖μ‖∞ ≤ k`.
#[derive(Clone, Debug)]
pub struct Moments {
    pub rank: usize,
    pub k: i32,
    pub nodes: usize,
    pub offset: f64,
    values: Vec<Complex64>,
}

impl Moments {
    /// Node count needed for aliasing below `e^{-30}`, at least `resolution`.
    pub fn node_count(density: &FactorProduct, rank: usize, resolution: usize, k: i32) -> usize {
        let margin = density.pole_margin();
        let cap = if rank == 1 { MAX_NODES_1D } else { MAX_NODES_2D };
        let need = if margin.is_finite() { (ALIAS_DECAY / margin).ceil() as usize + 2 * k as usize } else { 0 };
        need.max(resolution).div_ceil(8).saturating_mul(8).min(cap.max(resolution))
    }

    pub fn compute(density: &FactorProduct, rank: usize, resolution: usize, k: i32) -> Result<Moments> {
        let nodes = Self::node_count(density, rank, resolution, k);
        for &offset in &OFFSETS {
            match Self::on_grid(density, rank, nodes, offset, k) {
                Err(Error::SingularNode) => continue,
                r => return r,
            }
        }
        Err(Error::SingularNode)
    }

    fn on_grid(density: &FactorProduct, rank: usize, n: usize, offset: f64, k: i32) -> Result<Moments> {
        let w = (2 * k + 1) as usize;
        let theta: Vec<f64> = (0..n).map(|j| 2.0 * PI * (j as f64 + offset) / n as f64).collect();
        let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        // phase[j * w + (m + k)] = e^{i m θ_j}
        let phase: Vec<Complex64> = theta
            .iter()
            .flat_map(|&t| (-k..=k).map(move |m| Complex64::from_polar(1.0, m as f64 * t)))
            .collect();
        let mut buf = vec![c(0.0); n];
        let values = if rank == 1 {
            let rho: Vec<Complex64> = z.iter().map(|&s| density.density(&Character::new(&[s]))).collect::<Result<_>>()?;
            (0..w)
                .map(|m| {
                    for j in 0..n {
                        buf[j] = phase[j * w + m] * rho[j];
                    }
                    pairwise_sum(&buf) / n as f64
                })
                .collect()
        } else {
            // s[j2 * w + m1] = Σ_i e^{i m1 θ_i} ρ(θ_i, θ_j2)
            let mut s = vec![c(0.0); n * w];
            let mut rho = vec![c(0.0); n];
            for j2 in 0..n {
                for i in 0..n {
                    rho[i] = density.density(&Character::new(&[z[i], z[j2]]))?;
                }
                for m1 in 0..w {
                    for i in 0..n {
                        buf[i] = phase[i * w + m1] * rho[i];
                    }
                    s[j2 * w + m1] = pairwise_sum(&buf);
                }
            }
            let norm = (n * n) as f64;
            let mut values = vec![c(0.0); w * w];
            for m1 in 0..w {
                for m2 in 0..w {
                    for j2 in 0..n {
                        buf[j2] = phase[j2 * w + m2] * s[j2 * w + m1];
                    }
                    values[m1 * w + m2] = pairwise_sum(&buf) / norm;
                }
            }
            values
        };
        Ok(Moments { rank, k, nodes: n, offset, values })
    }

    pub fn covers(&self, p: &Laurent) -> bool {
        p.terms.keys().all(|e| e.0[0].abs() <= self.k && e.0[1].abs() <= self.k)
    }

    pub fn get(&self, e: Coweight) -> Complex64 {
        let w = (2 * self.k + 1) as usize;
        let i = (e.0[0] + self.k) as usize;
        if self.rank == 1 {
            self.values[i]
        } else {
            self.values[i * w + (e.0[1] + self.k) as usize]
        }
    }

    /// `∫ p(t) dμ` for a Laurent polynomial inside the moment box.
    pub fn integrate(&self, p: &Laurent) -> Complex64 {
        let v: Vec<Complex64> = p.terms.iter().map(|(&e, &a)| a * self.get(e)).collect();
        pairwise_sum(&v)
    }
}

fn reach(p: &Laurent) -> i32 {
    p.terms.keys().map(|e| e.0[0].abs().max(e.0[1].abs())).max().unwrap_or(0)
}

// ---- characters as polynomials ----

/// The character of `M(t)` (`node = None`) or of the module induced from
/// `ℋ_i`, as `(A, B)` with `χ(h) = A(u) + ε B(u)`.
pub fn character_polys(alg: &HeckeAlgebra, h: &BernsteinElement, node: Option<usize>) -> (Laurent, Laurent) {
    let d = &alg.datum;
    let mut a = Laurent::zero();
    let mut b = Laurent::zero();
    for v in 0..d.order() {
        if let Some(i) = node {
            if !d.right_ascent(v, i) {
                continue;
            }
        }
        let prod = alg.bern_right_mul_tw(h, v);
        for (&w, p) in &prod.terms {
            if w == v {
                a.add_scaled(p, c(1.0));
            } else if let Some(i) = node {
                if !d.right_ascent(w, i) && d.mul(w, d.simple(i)) == v {
                    b.add_scaled(p, c(1.0));
                }
            }
        }
    }
    a.prune(1e-14);
    b.prune(1e-14);
    (a, b)
}

/// Substitutes `x^{e_k} ↦ coef_k s^{s_exp_k}` into `A + ε B`, giving a
/// Laurent polynomial in `s` (exponents `[k, 0]`).
pub fn family_poly(data: &InducedData, a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::zero();
    for (p, scale) in [(a, c(1.0)), (b, data.eps)] {
        for (e, &v) in &p.terms {
            let coef = data.coef[0].powi(e.0[0]) * data.coef[1].powi(e.0[1]);
            let k = data.s_exp[0] * e.0[0] + data.s_exp[1] * e.0[1];
            out.add_term(Coweight([k, 0]), scale * v * coef);
        }
    }
    out
}

// ---- the right-hand side ----

/// Serializes a complex number as `{"re": …, "im": …}`.
pub fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct TermValue {
    pub label: String,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
}

#[derive(Clone, Debug)]
pub struct Rhs {
    pub total: Complex64,
    pub breakdown: Vec<TermValue>,
}

impl Rhs {
    fn from_parts(breakdown: Vec<TermValue>) -> Rhs {
        let v: Vec<Complex64> = breakdown.iter().map(|t| t.value).collect();
        Rhs { total: pairwise_sum(&v), breakdown }
    }
}

/// Spectral terms of one algebra with cached moments.
pub struct Plancherel<'a> {
    pub alg: &'a HeckeAlgebra,
    pub terms: Vec<SpectralTerm>,
    pub resolution: usize,
    moments: Vec<Option<Moments>>,
}

const BASE_REACH: i32 = 8;

impl<'a> Plancherel<'a> {
    pub fn new(alg: &'a HeckeAlgebra, resolution: usize) -> Result<Plancherel<'a>> {
        if resolution < 8 {
            return Err(Error::InvalidParameters(format!("resolution {resolution} is below 8")));
        }
        let terms = spectral_terms(alg)?;
        let moments = vec![None; terms.len()];
        Ok(Plancherel { alg, terms, resolution, moments })
    }

    /// Node count actually used for term `idx`, if its moments exist.
    pub fn nodes_used(&self, idx: usize) -> Option<usize> {
        self.moments[idx].as_ref().map(|m| m.nodes)
    }

    fn integrate(&mut self, idx: usize, p: &Laurent) -> Result<Complex64> {
        let stale = self.moments[idx].as_ref().is_none_or(|m| !m.covers(p));
        if stale {
            let old = self.moments[idx].as_ref().map_or(0, |m| m.k);
            let k = reach(p).max(BASE_REACH).max(2 * old);
            let term = &self.terms[idx];
            let density = term.density.as_ref().expect("continuous term");
            let rank = term.torus_dim(self.alg.rank());
            self.moments[idx] = Some(Moments::compute(density, rank, self.resolution, k)?);
        }
        Ok(self.moments[idx].as_ref().expect("just computed").integrate(p))
    }

    /// `Σ mass · ∫ χ(h)` with one entry per spectral term.
    pub fn rhs(&mut self, h: &BernsteinElement) -> Result<Rhs> {
        let mut polys: HashMap<Option<usize>, (Laurent, Laurent)> = HashMap::new();
        let mut breakdown = Vec::with_capacity(self.terms.len());
        for idx in 0..self.terms.len() {
            let (label, mass) = (self.terms[idx].label.clone(), self.terms[idx].mass);
            let value = match self.terms[idx].kind.clone() {
                TermKind::Principal => {
                    let (a, _) = polys.entry(None).or_insert_with(|| character_polys(self.alg, h, None)).clone();
                    self.integrate(idx, &a)?
                }
                TermKind::Family(data) => {
                    let (a, b) = polys
                        .entry(Some(data.node))
                        .or_insert_with(|| character_polys(self.alg, h, Some(data.node)))
                        .clone();
                    self.integrate(idx, &family_poly(&data, &a, &b))?
                }
                TermKind::Discrete(rep) => rep.char_value(&self.alg.datum, h),
            };
            breakdown.push(TermValue { label, value: value * mass });
        }
        Ok(Rhs::from_parts(breakdown))
    }
}

/// The right-hand side with every continuous term integrated by building
/// its representation at each grid node. Slow; meant for cross-checks.
pub fn rhs_pointwise(alg: &HeckeAlgebra, terms: &[SpectralTerm], h: &BernsteinElement, nodes: usize) -> Result<Rhs> {
    let d = &alg.datum;
    let theta = |j: usize| 2.0 * PI * (j as f64 + OFFSETS[0]) / nodes as f64;
    let mut breakdown = Vec::new();
    for term in terms {
        let value = match &term.kind {
            TermKind::Discrete(rep) => rep.char_value(d, h),
            TermKind::Principal => {
                let sym = SymbolicModule::principal(alg);
                let density = term.density.as_ref().expect("continuous term");
                let mut v = Vec::new();
                if alg.rank() == 1 {
                    for j in 0..nodes {
                        let t = Character::new(&[Complex64::from_polar(1.0, theta(j))]);
                        v.push(sym.evaluate("M", &t, c(0.0)).char_value(d, h) * density.density(&t)?);
                    }
                } else {
                    for j1 in 0..nodes {
                        for j2 in 0..nodes {
                            let t = Character::new(&[
                                Complex64::from_polar(1.0, theta(j1)),
                                Complex64::from_polar(1.0, theta(j2)),
                            ]);
                            v.push(sym.evaluate("M", &t, c(0.0)).char_value(d, h) * density.density(&t)?);
                        }
                    }
                }
                pairwise_sum(&v) / v.len() as f64
            }
            TermKind::Family(data) => {
                let sym = SymbolicModule::induced(alg, data.node);
                let density = term.density.as_ref().expect("continuous term");
                let mut v = Vec::new();
                for j in 0..nodes {
                    let s = Complex64::from_polar(1.0, theta(j));
                    let rep = sym.evaluate("Ind", &data.character(s, alg.rank()), data.eps);
                    v.push(rep.char_value(d, h) * density.density(&Character::new(&[s]))?);
                }
                pairwise_sum(&v) / nodes as f64
            }
        };
        breakdown.push(TermValue { label: term.label.clone(), value: value * term.mass });
    }
    Ok(Rhs::from_parts(breakdown))
}

// ---- verification report ----

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    #[serde(rename = "type")]
    pub config: String,
    pub params: BTreeMap<String, f64>,
    pub element_src: String,
    pub resolution: usize,
    #[serde(serialize_with = "ser_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub rhs: Complex64,
    pub breakdown: Vec<TermValue>,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Named free parameters of an algebra.
pub fn param_map(alg: &HeckeAlgebra) -> BTreeMap<String, f64> {
    let cfg = alg.datum.config;
    cfg.param_names().iter().map(|n| n.to_string()).zip(alg.params.free.iter().copied()).collect()
}

/// Compares `Tr(h)` with the spectral side. `rel_err` is relative to
/// `max(|Tr(h)|, 1)`.
pub fn verify(pl: &mut Plancherel<'_>, h: &BernsteinElement, element_src: &str) -> Result<VerifyReport> {
    let lhs = pl.alg.trace_bernstein(h);
    let rhs = pl.rhs(h)?;
    let abs_err = (lhs - rhs.total).norm();
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: pl.alg.datum.config.tag().to_string(),
        params: param_map(pl.alg),
        element_src: element_src.to_string(),
        resolution: pl.resolution,
        lhs,
        rhs: rhs.total,
        breakdown: rhs.breakdown,
        abs_err,
        rel_err: abs_err / lhs.norm().max(1.0),
    })
}

// ---- residues ----

/// `Res_{z=p} f` as the mean of `f(z)(z − p)` over a circle of the given radius.
pub fn residue_numeric(f: impl Fn(Complex64) -> Result<Complex64>, p: Complex64, radius: f64, nodes: usize) -> Result<Complex64> {
    let mut v = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let dz = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / nodes as f64);
        v.push(f(p + dz)? * dz);
    }
    Ok(pairwise_sum(&v) / nodes as f64)
}

/// `−P Σ_p Res_{z=p} 1/(c(z)c(1/z)z)` for a one-variable `c`.
pub fn residue_mass(c1: &FactorProduct, prefactor: f64, poles: &[Complex64]) -> Result<Complex64> {
    let sing = c1.singularities_1d();
    let mut total = c(0.0);
    for &p in poles {
        let gap = sing.iter().map(|&z| (z - p).norm()).filter(|&r| r > 1e-9).fold(f64::INFINITY, f64::min);
        let f = |z: Complex64| Ok(c1.density(&Character::new(&[z]))? / z);
        total += residue_numeric(f, p, 0.4 * gap, RESIDUE_NODES)?;
    }
    Ok(-prefactor * total)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueCheck {
    pub label: String,
    /// The closed-form mass.
    pub constant: f64,
    /// The same mass recovered from residues of the family density.
    #[serde(serialize_with = "ser_complex")]
    pub residue: Complex64,
}

impl ResidueCheck {
    pub fn rel_err(&self) -> f64 {
        (self.residue - c(self.constant)).norm() / self.constant.abs().max(1e-300)
    }
}

fn family_density(terms: &[SpectralTerm], label: &str) -> FactorProduct {
    terms.iter().find(|t| t.label == label).and_then(|t| t.density.clone()).expect("family term present")
}

/// Every discrete mass that arises as a residue of a continuous density,
/// paired with its closed form.
pub fn residue_checks(alg: &HeckeAlgebra) -> Result<Vec<ResidueCheck>> {
    let cfg = alg.datum.config;
    let p = &alg.params;
    let k = constants(alg);
    let terms = spectral_terms(alg)?;
    let mut out = Vec::new();
    let mut push = |label: &str, constant: f64, residue: Complex64| {
        out.push(ResidueCheck { label: label.to_string(), constant, residue })
    };
    match cfg {
        Config::A1Q | Config::A1P | Config::BC1Q => {
            let cc = principal_c(alg);
            let q1 = p.q(1);
            match cfg {
                Config::A1Q => push("A", k["A"], residue_mass(&cc, 1.0 / q1, &[c(1.0 / q1)])?),
                Config::A1P => {
                    let r = q1.powf(-0.5);
                    push("A", k["A"], residue_mass(&cc, 1.0 / q1, &[c(r), c(-r)])?);
                }
                _ => {
                    let q0 = p.q(0);
                    push("A", k["A"], residue_mass(&cc, 1.0 / q1, &[c((q0 * q1).powf(-0.5))])?);
                    if side(q0, q1) != Side::On {
                        let pole = -(q0.min(q1) / q0.max(q1)).sqrt();
                        push("B", k["B"], residue_mass(&cc, 1.0 / q1, &[c(pole)])?);
                    }
                }
            }
        }
        Config::A2Q | Config::A2P => {
            let q = p.free[0];
            let pref = (q - 1.0).powi(2) / (q * q * (q * q - 1.0));
            let c1 = family_density(&terms, "pi1");
            let poles: Vec<Complex64> = if cfg == Config::A2Q {
                vec![c(q.powf(-1.5))]
            } else {
                (0..3).map(|j| c(q.powf(-0.5)) * omega(j)).collect()
            };
            push("A", k["A"], residue_mass(&c1, pref, &poles)?);
        }
        Config::C2Q | Config::C2P => {
            // the constants are lattice independent; use the C2Q densities
            let (q1, q2) = (p.q(1), p.q(2));
            let q_alg = HeckeAlgebra::new(Config::C2Q, &p.free)?;
            let qt = spectral_terms(&q_alg)?;
            let (c1, c2) = (family_density(&qt, "pi1"), family_density(&qt, "pi2"));
            let p1 = (q2 - 1.0).powi(2) / (q1 * q1 * q2 * (q2 * q2 - 1.0));
            let p2 = (q1 - 1.0).powi(2) / (q1 * q2 * q2 * (q1 * q1 - 1.0));
            push("A", k["A"], residue_mass(&c2, p1, &[c(1.0 / (q1 * q2))])?);
            push("2B", 2.0 * k["B"], residue_mass(&c1, p2, &[c(-q1.powf(-0.5))])?);
            // C vanishes on both walls, where the pole leaves or merges
            match band(q1, q2, q2 * q2) {
                Some(0) => push("-C", -k["C"], residue_mass(&c2, p1, &[c(q1 / q2)])?),
                Some(_) => push("C", k["C"], residue_mass(&c2, p1, &[c(q2 / q1)])?),
                None => {}
            }
        }
        Config::G2Q => {
            let (q1, q2) = (p.q(1), p.q(2));
            let (c1, c2) = (family_density(&terms, "pi1"), family_density(&terms, "pi2"));
            let pa = (q2 - 1.0).powi(2) / (q1.powi(3) * q2 * q2 * (q2 * q2 - 1.0));
            let pc = (q1 - 1.0).powi(2) / (q1 * q2.powi(3) * (q1 * q1 - 1.0));
            let r1 = q1.sqrt();
            push("A", k["A"], residue_mass(&c2, pa, &[c(1.0 / (q1 * q2.powf(1.5)))])?);
            push("B-", k["B-"], residue_mass(&c2, pa, &[c(-1.0 / r1)])?);
            push("C", k["C"], residue_mass(&c1, pc, &[omega(1) / r1])?);
            let d_pole = side(q1, q2.powf(1.5)) == Side::Below;
            match (side(q1, q2), side(q1, q2.powi(3))) {
                // the |D| pole q1 q2^{−3/2} lands on q1^{−1/2}: one combined residue
                (Side::On, _) => {
                    push("B+ + |D|", k["B+"] + k["D"].abs(), residue_mass(&c2, pa, &[c(1.0 / r1)])?);
                }
                // a double pole; the mass is not the bare residue of the density
                (_, Side::On) => {}
                _ => {
                    push("B+", k["B+"], residue_mass(&c2, pa, &[c(1.0 / r1)])?);
                    if d_pole {
                        push("|D|", k["D"].abs(), residue_mass(&c2, pa, &[c(q1 / q2.powf(1.5))])?);
                    }
                }
            }
        }
        Config::BC2Q => {
            let (q0, q1, q2) = (p.q(0), p.q(1), p.q(2));
            let c2 = family_density(&terms, "pi2");
            let pref = 2.0 * k["C7"];
            let a = (q0 * q2).sqrt();
            push("C1", k["C1"], residue_mass(&c2, pref, &[c(1.0 / (q1 * a))])?);
            if q1 < a {
                push("|C2|", k["C2"].abs(), residue_mass(&c2, pref, &[c(q1 / a)])?);
            }
            let c3_label = if q0 < q2 { "pi3" } else { "pi4" };
            let c3 = family_density(&terms, c3_label);
            let p3 = 2.0 * k["C8"];
            if q0 < q2 {
                push("|C3|", k["C3"].abs(), residue_mass(&c2, pref, &[c(-(q0 / q2).sqrt())])?);
                let b = (q2 / q0).sqrt();
                push("|C4|", k["C4"].abs(), residue_mass(&c3, p3, &[c(1.0 / (q1 * b))])?);
            } else {
                push("|C3|", k["C3"].abs(), residue_mass(&c2, pref, &[c(-(q2 / q0).sqrt())])?);
                let b = (q2 / q0).sqrt();
                push("|C5|", k["C5"].abs(), residue_mass(&c3, p3, &[c(b / q1)])?);
            }
        }
    }
    Ok(out)
}

// ---- the lattice-sum oracle for f_t ----

/// `G_t(h) = Σ_{‖μ‖∞ ≤ cutoff} t^{−μ} Tr(x^μ h)`, a truncation of the
/// generating series whose sum is `f_t(h) / (q_{w0} c(t) c(t⁻¹))`.
pub fn g_series(alg: &HeckeAlgebra, t: &Character, h: &BernsteinElement, cutoff: i32) -> Complex64 {
    let rank = alg.rank() as i32;
    let range2 = if rank == 2 { cutoff } else { 0 };
    let mut v = Vec::new();
    for m1 in -cutoff..=cutoff {
        for m2 in -range2..=range2 {
            let mu = Coweight([m1, m2]);
            // Tr(x^μ h) = Tr(h x^μ)
            let hx = alg.bern_right_mul_poly(h, &Laurent::x(mu));
            v.push(t.pow(-mu) * alg.trace_bernstein(&hx));
        }
    }
    pairwise_sum(&v)
}
