//! Characters of `L`, the local factors `a, b, c, d, n`, and the
//! combinatorics of weights used by calibrated modules.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::lattice::Coweight;
use crate::params::Params;
use crate::root_data::{Config, RootClass, RootDatum, TypeTag};

/// Tolerance for "equals zero" and "equals one" tests on characters.
pub const EPS_ZERO: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A point of `Hom(L, ℂ×)`, stored by its values on the lattice basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Character {
    pub values: [Complex64; 2],
    pub rank: usize,
}

impl Character {
    pub fn new(values: &[Complex64]) -> Character {
        let mut v = [c(1.0); 2];
        v[..values.len()].copy_from_slice(values);
        Character { values: v, rank: values.len() }
    }

    pub fn real(values: &[f64]) -> Character {
        Character::new(&values.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    /// `t^λ`.
    pub fn pow(&self, e: Coweight) -> Complex64 {
        let mut out = c(1.0);
        for k in 0..2 {
            if e.0[k] != 0 {
                out *= self.values[k].powi(e.0[k]);
            }
        }
        out
    }

    pub fn inverse(&self) -> Character {
        let mut out = *self;
        for k in 0..self.rank {
            out.values[k] = self.values[k].inv();
        }
        out
    }

    /// `wt` with `(wt)^λ = t^{w⁻¹λ}`.
    pub fn act(&self, datum: &RootDatum, w: usize) -> Character {
        let m = datum.matrix(datum.inverse(w));
        let mut out = *self;
        for k in 0..self.rank {
            out.values[k] = self.pow(Coweight([m[0][k], m[1][k]]));
        }
        out
    }

    pub fn approx_eq(&self, other: &Character, eps: f64) -> bool {
        (0..self.rank).all(|k| near(self.values[k], other.values[k], eps))
    }
}

/// Relative closeness of two complex numbers.
pub fn near(a: Complex64, b: Complex64, eps: f64) -> bool {
    (a - b).norm() <= eps * (1.0f64).max(a.norm()).max(b.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    A,
    B,
    C,
    D,
    N,
}

/// `a_α(x)` as a Laurent polynomial.
pub fn a_poly(datum: &RootDatum, params: &Params, k: usize) -> Laurent {
    let root = &datum.positive_roots[k];
    match root.class {
        RootClass::R2 => {
            let (q0, qn) = params.r2_pair(datum, k);
            let mut p = Laurent::constant(c(1.0 - 1.0 / qn));
            let coef = (q0.sqrt() - 1.0 / q0.sqrt()) / qn.sqrt();
            p.add_term(-root.half_coroot.unwrap(), c(coef));
            p
        }
        _ => Laurent::constant(c(1.0 - 1.0 / params.q_root(datum, k))),
    }
}

/// `n_α(x)` as a Laurent polynomial.
pub fn n_poly(datum: &RootDatum, params: &Params, k: usize) -> Laurent {
    let root = &datum.positive_roots[k];
    match root.class {
        RootClass::R2 => {
            let (q0, qn) = params.r2_pair(datum, k);
            let h = -root.half_coroot.unwrap();
            let mut f1 = Laurent::one();
            f1.add_term(h, c(-1.0 / (q0 * qn).sqrt()));
            let mut f2 = Laurent::one();
            f2.add_term(h, c((q0 / qn).sqrt()));
            &f1 * &f2
        }
        _ => {
            let mut p = Laurent::one();
            p.add_term(-root.coroot, c(-1.0 / params.q_root(datum, k)));
            p
        }
    }
}

/// `d_α(x) = 1 − x^{−α∨}`.
pub fn d_poly(datum: &RootDatum, k: usize) -> Laurent {
    let mut p = Laurent::one();
    p.add_term(-datum.positive_roots[k].coroot, c(-1.0));
    p
}

/// Evaluates `kind_α(t)`, or `kind_{−α}(t)` when `positive` is false.
pub fn local_factor(
    datum: &RootDatum,
    params: &Params,
    kind: FactorKind,
    k: usize,
    positive: bool,
    t: &Character,
) -> Result<Complex64> {
    let t = if positive { *t } else { t.inverse() };
    let d = d_poly(datum, k).eval(&t);
    let value = match kind {
        FactorKind::A => a_poly(datum, params, k).eval(&t),
        FactorKind::N => n_poly(datum, params, k).eval(&t),
        FactorKind::D => d,
        FactorKind::B | FactorKind::C => {
            if d_vanishes(datum, k, &t) {
                return Err(Error::PoleAtCharacter(format!(
                    "d of root {} vanishes",
                    datum.positive_roots[k].name
                )));
            }
            let num = if kind == FactorKind::B {
                a_poly(datum, params, k).eval(&t)
            } else {
                n_poly(datum, params, k).eval(&t)
            };
            num / d
        }
    };
    Ok(value)
}

/// `c(t) = Π c_α(t)` over `R0+`.
pub fn c_function(datum: &RootDatum, params: &Params, t: &Character) -> Result<Complex64> {
    let mut out = c(1.0);
    for k in 0..datum.positive_roots.len() {
        out *= local_factor(datum, params, FactorKind::C, k, true, t)?;
    }
    Ok(out)
}

/// `d(t) = Π d_α(t)` over `R0+`.
pub fn d_function(datum: &RootDatum, t: &Character) -> Complex64 {
    (0..datum.positive_roots.len()).map(|k| d_poly(datum, k).eval(t)).product()
}

fn d_vanishes(datum: &RootDatum, k: usize, t: &Character) -> bool {
    near(t.pow(datum.positive_roots[k].coroot), c(1.0), EPS_ZERO)
}

/// Whether `n_α(t) = 0`, tested factor by factor.
fn n_vanishes(datum: &RootDatum, params: &Params, k: usize, t: &Character) -> bool {
    let root = &datum.positive_roots[k];
    match root.class {
        RootClass::R2 => {
            let (q0, qn) = params.r2_pair(datum, k);
            let y = t.pow(-root.half_coroot.unwrap());
            near(y, c((q0 * qn).sqrt()), EPS_ZERO) || near(y, c(-(qn / q0).sqrt()), EPS_ZERO)
        }
        _ => near(t.pow(-root.coroot), c(params.q_root(datum, k)), EPS_ZERO),
    }
}

/// `N(t) = {α ∈ R0+ : n_α(t) n_{−α}(t) = 0}`.
pub fn n_set(datum: &RootDatum, params: &Params, t: &Character) -> Vec<usize> {
    let ti = t.inverse();
    (0..datum.positive_roots.len())
        .filter(|&k| n_vanishes(datum, params, k, t) || n_vanishes(datum, params, k, &ti))
        .collect()
}

/// `D(t) = {α ∈ R0+ : d_α(t) = 0}`.
pub fn d_set(datum: &RootDatum, t: &Character) -> Vec<usize> {
    (0..datum.positive_roots.len()).filter(|&k| d_vanishes(datum, k, t)).collect()
}

pub fn is_regular(datum: &RootDatum, t: &Character) -> bool {
    d_set(datum, t).is_empty()
}

/// `F_J(t)`, in enumeration order of `W0`.
pub fn f_j_set(datum: &RootDatum, params: &Params, t: &Character, j: &[usize]) -> Result<Vec<usize>> {
    let n: BTreeSet<usize> = n_set(datum, params, t).into_iter().collect();
    let d: BTreeSet<usize> = d_set(datum, t).into_iter().collect();
    let j: BTreeSet<usize> = j.iter().copied().collect();
    if !j.is_subset(&n) {
        return Err(Error::JNotSubsetOfN);
    }
    Ok((0..datum.order())
        .filter(|&w| {
            let inv: BTreeSet<usize> = datum.inversion_set(datum.inverse(w)).into_iter().collect();
            inv.intersection(&n).copied().collect::<BTreeSet<_>>() == j && inv.is_disjoint(&d)
        })
        .collect())
}

/// Distinct points of the orbit `W0 t`, each with the first `w` reaching it.
pub fn orbit(datum: &RootDatum, t: &Character) -> Vec<(usize, Character)> {
    let mut out: Vec<(usize, Character)> = Vec::new();
    for w in 0..datum.order() {
        let wt = t.act(datum, w);
        if !out.iter().any(|(_, u)| u.approx_eq(&wt, EPS_ZERO)) {
            out.push((w, wt));
        }
    }
    out
}

/// Connected components of the calibration graph, as lists of orbit points.
pub fn calibration_components(datum: &RootDatum, params: &Params, t: &Character) -> Vec<Vec<Character>> {
    let pts = orbit(datum, t);
    let find = |u: &Character| pts.iter().position(|(_, p)| p.approx_eq(u, EPS_ZERO)).unwrap();
    let mut comp: Vec<usize> = (0..pts.len()).collect();
    fn root(comp: &mut [usize], mut a: usize) -> usize {
        while comp[a] != a {
            comp[a] = comp[comp[a]];
            a = comp[a];
        }
        a
    }
    for (a, (_, p)) in pts.iter().enumerate() {
        let n = n_set(datum, params, p);
        for i in 1..=datum.rank {
            if n.contains(&(i - 1)) {
                continue;
            }
            let b = find(&p.act(datum, datum.simple(i)));
            let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
            if ra != rb {
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Character>)> = Vec::new();
    for a in 0..pts.len() {
        let r = root(&mut comp, a);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, v)) => v.push(pts[a].1),
            None => groups.push((r, vec![pts[a].1])),
        }
    }
    groups.into_iter().map(|(_, v)| v).collect()
}

/// Which clause of the calibratability definition applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calibratable {
    Regular,
    Exceptional(&'static str),
    No,
}

fn pair_regular(datum: &RootDatum, t: &Character) -> bool {
    (0..datum.order()).all(|w| {
        let wt = t.act(datum, w);
        (0..datum.rank).all(|i| !d_vanishes(datum, i, &wt))
    })
}

/// Exceptional patterns `(t^{α_i∨}, t^{α_j∨})`, or `(t^{α_i∨}, t^{α_j∨/2})` for BC2.
fn exceptional_patterns(datum: &RootDatum, params: &Params) -> Vec<(&'static str, [Complex64; 2])> {
    let mut out = Vec::new();
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-6 * a.max(b);
    match datum.config.type_tag() {
        TypeTag::C2 => {
            let (qi, qj) = (params.q(1), params.q(2));
            if same(qi, qj) {
                out.push(("2a", [c(qi), c(1.0 / qi)]));
                out.push(("2a", [c(1.0 / qi), c(qi)]));
            }
            if same(qi, qj * qj) {
                out.push(("2b", [c(qj.powi(-2)), c(qj)]));
                out.push(("2b", [c(qj.powi(2)), c(qj)]));
            }
        }
        TypeTag::G2 => {
            let (qi, qj) = (params.q(1), params.q(2));
            if same(qi, qj) {
                for p in [(-1, 1), (1, -1), (2, -1), (-2, 1)] {
                    out.push(("3a", [c(qi.powi(p.0)), c(qi.powi(p.1))]));
                }
            }
            if same(qi, qj.powi(3)) {
                for p in [(3, -1), (-3, 1), (-3, 2), (3, -2)] {
                    out.push(("3b", [c(qj.powi(p.0)), c(qj.powi(p.1))]));
                }
            }
        }
        TypeTag::BC2 => {
            let (q0, qi, qj) = (params.q(0), params.q(1), params.q(2));
            if same(qi, q0 * qj) {
                out.push(("4a", [c(q0 * qj), c(1.0 / (q0 * qj).sqrt())]));
                out.push(("4a", [c(1.0 / (q0 * qj)), c((q0 * qj).sqrt())]));
            }
            if same(qi, q0 / qj) || same(qi, qj / q0) {
                out.push(("4b", [c(qj / q0), c(-(q0 / qj).sqrt())]));
                out.push(("4b", [c(q0 / qj), c(-(qj / q0).sqrt())]));
            }
            if same(qi, (q0 * qj).sqrt()) {
                out.push(("4c", [c(1.0 / qi), c(qi)]));
                out.push(("4c", [c(qi), c(1.0 / qi)]));
            }
            if same(qi, (qj / q0).sqrt()) || same(qi, (q0 / qj).sqrt()) {
                out.push(("4d", [c(1.0 / qi), c(-qi)]));
                out.push(("4d", [c(qi), c(-1.0 / qi)]));
            }
        }
        _ => {}
    }
    out
}

/// `(1, 2)`-calibratability of `t`; rank-one weights are trivially calibratable.
///
/// Exceptional patterns are matched up to the action of `W0` and inversion.
pub fn is_calibratable(datum: &RootDatum, params: &Params, t: &Character) -> Calibratable {
    if datum.rank == 1 || pair_regular(datum, t) {
        return Calibratable::Regular;
    }
    let bc = datum.config == Config::BC2Q;
    let coords = |u: &Character| -> [Complex64; 2] {
        let a1 = u.pow(datum.positive_roots[0].coroot);
        let a2 = if bc {
            u.pow(datum.positive_roots[1].half_coroot.unwrap())
        } else {
            u.pow(datum.positive_roots[1].coroot)
        };
        [a1, a2]
    };
    let pats = exceptional_patterns(datum, params);
    for w in 0..datum.order() {
        for u in [t.act(datum, w), t.act(datum, w).inverse()] {
            let v = coords(&u);
            for (tag, p) in &pats {
                if near(v[0], p[0], EPS_ZERO) && near(v[1], p[1], EPS_ZERO) {
                    return Calibratable::Exceptional(tag);
                }
            }
        }
    }
    Calibratable::No
}

/// Kato's irreducibility criterion for the principal series `M(t)`.
pub fn kato_irreducible(datum: &RootDatum, params: &Params, t: &Character) -> bool {
    if !n_set(datum, params, t).is_empty() {
        return false;
    }
    let stab: BTreeSet<usize> = (0..datum.order())
        .filter(|&w| t.act(datum, w).approx_eq(t, EPS_ZERO))
        .collect();
    let mut gens: BTreeSet<usize> = BTreeSet::new();
    for k in d_set(datum, t) {
        let s = datum.reflection_of(k);
        for w in 0..datum.order() {
            gens.insert(datum.mul(datum.mul(w, s), datum.inverse(w)));
        }
    }
    let mut closure: BTreeSet<usize> = BTreeSet::from([0]);
    loop {
        let mut added = false;
        for a in closure.clone() {
            for &g in &gens {
                added |= closure.insert(datum.mul(a, g));
            }
        }
        if !added {
            break;
        }
    }
    stab == closure
}
