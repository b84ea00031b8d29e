//! Finite-dimensional representations, their characters, and `f_t`.
//!
//! A [`Representation`] stores the matrices of `T_1, …, T_n` and of the
//! lattice basis monomials `x^{e_k}` (with inverses). Everything else is
//! obtained by multiplying these.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{BernsteinElement, HeckeAlgebra};
use crate::laurent::Laurent;
use crate::lattice::Coweight;
use crate::root_data::{Config, RootClass, RootDatum, TypeTag};
use crate::weights::{
    d_poly, f_j_set, is_calibratable, is_regular, local_factor, n_poly, near, Calibratable, Character,
    FactorKind, EPS_ZERO,
};

pub type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{2πi k/3}`.
pub fn omega(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)
}

fn basis_vector(k: usize) -> Coweight {
    let mut v = [0; 2];
    v[k] = 1;
    Coweight(v)
}

/// A module given by generator matrices.
#[derive(Clone, Debug)]
pub struct Representation {
    pub label: String,
    pub config: Config,
    pub dim: usize,
    /// `π(T_i)` at index `i − 1`.
    pub t: Vec<CMat>,
    /// `π(x^{e_k})`.
    pub x: Vec<CMat>,
    pub x_inv: Vec<CMat>,
    /// Weight of each basis vector when the lattice acts diagonally.
    pub weights: Option<Vec<Character>>,
}

/// Maximum violation per defining relation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub entries: Vec<(String, f64)>,
}

impl RelationReport {
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

#[derive(Serialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Serialize)]
pub struct RepresentationJson {
    pub label: String,
    pub dimension: usize,
    pub matrices: BTreeMap<String, MatrixJson>,
}

fn matrix_json(m: &CMat) -> MatrixJson {
    let rows = |f: fn(&Complex64) -> f64| {
        (0..m.nrows()).map(|r| (0..m.ncols()).map(|s| f(&m[(r, s)])).collect()).collect()
    };
    MatrixJson { re: rows(|z| z.re), im: rows(|z| z.im) }
}

fn rel_norm(m: &CMat, scale: f64) -> f64 {
    m.norm() / scale.max(1.0)
}

impl Representation {
    /// Builds a module from `T` and lattice matrices; lattice inverses are computed.
    pub fn from_parts(label: &str, config: Config, t: Vec<CMat>, x: Vec<CMat>) -> Result<Representation> {
        let x_inv = x
            .iter()
            .map(|m| m.clone().try_inverse().ok_or_else(|| Error::Internal("singular lattice matrix".into())))
            .collect::<Result<Vec<_>>>()?;
        let dim = t[0].nrows();
        Ok(Representation { label: label.to_string(), config, dim, t, x, x_inv, weights: None })
    }

    /// A module where `x^λ` acts by `diag(w_k^λ)`.
    pub fn diagonal(label: &str, config: Config, t: Vec<CMat>, weights: Vec<Character>) -> Representation {
        let rank = config.rank();
        let dim = weights.len();
        let x = (0..rank)
            .map(|k| CMat::from_diagonal(&weights.iter().map(|w| w.values[k]).collect::<Vec<_>>().into()))
            .collect::<Vec<_>>();
        let x_inv = (0..rank)
            .map(|k| CMat::from_diagonal(&weights.iter().map(|w| w.values[k].inv()).collect::<Vec<_>>().into()))
            .collect();
        Representation { label: label.to_string(), config, dim, t, x, x_inv, weights: Some(weights) }
    }

    pub fn one_dim(label: &str, config: Config, t_vals: &[Complex64], x_vals: &[Complex64]) -> Representation {
        let t = t_vals.iter().map(|&v| CMat::from_element(1, 1, v)).collect();
        Representation::diagonal(label, config, t, vec![Character::new(x_vals)])
    }

    /// `π(x^λ)`.
    pub fn x_pow(&self, e: Coweight) -> CMat {
        if let Some(w) = &self.weights {
            return CMat::from_diagonal(&w.iter().map(|u| u.pow(e)).collect::<Vec<_>>().into());
        }
        let mut out = CMat::identity(self.dim, self.dim);
        for k in 0..self.x.len() {
            let m = if e.0[k] >= 0 { &self.x[k] } else { &self.x_inv[k] };
            for _ in 0..e.0[k].abs() {
                out = &out * m;
            }
        }
        out
    }

    /// `π(T_w)` for `w ∈ W0`, multiplied along the stored reduced word.
    pub fn t_weyl(&self, datum: &RootDatum, w: usize) -> CMat {
        self.t_word(&datum.weyl[w].word)
    }

    pub fn t_word(&self, word: &[usize]) -> CMat {
        let mut out = CMat::identity(self.dim, self.dim);
        for &i in word {
            out = &out * &self.t[i - 1];
        }
        out
    }

    /// `π(p(x))` for a Laurent polynomial.
    pub fn poly(&self, p: &Laurent) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (&e, &coef) in &p.terms {
            out += self.x_pow(e) * coef;
        }
        out
    }

    /// `π(h)`.
    pub fn act(&self, datum: &RootDatum, h: &BernsteinElement) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (&w, p) in &h.terms {
            out += self.t_weyl(datum, w) * self.poly(p);
        }
        out
    }

    /// `χ(h) = tr π(h)`.
    pub fn char_value(&self, datum: &RootDatum, h: &BernsteinElement) -> Complex64 {
        self.evaluator(datum).char_value(h)
    }

    /// Caches `π(T_w)` for all `w ∈ W0`.
    pub fn evaluator(&self, datum: &RootDatum) -> RepEval<'_> {
        RepEval { rep: self, tw: (0..datum.order()).map(|w| self.t_weyl(datum, w)).collect() }
    }

    /// Checks the quadratic, braid, lattice and Bernstein relations.
    pub fn check_relations(&self, alg: &HeckeAlgebra) -> RelationReport {
        let d = &alg.datum;
        let n = d.rank;
        let id = CMat::identity(self.dim, self.dim);
        let mut rep = RelationReport::default();
        for i in 1..=n {
            let t = &self.t[i - 1];
            let r = t * t - &id - t * c(alg.qdiff(i));
            rep.entries.push((format!("quadratic T{i}"), rel_norm(&r, t.norm().powi(2))));
        }
        if n == 2 {
            let m = d.coxeter[0][1] as usize;
            let w1: Vec<usize> = (0..m).map(|k| 1 + k % 2).collect();
            let w2: Vec<usize> = (0..m).map(|k| 2 - k % 2).collect();
            let (a, b) = (self.t_word(&w1), self.t_word(&w2));
            rep.entries.push(("braid".into(), rel_norm(&(&a - &b), a.norm())));
            let comm = &self.x[0] * &self.x[1] - &self.x[1] * &self.x[0];
            rep.entries.push(("lattice commute".into(), rel_norm(&comm, self.x[0].norm() * self.x[1].norm())));
        }
        for k in 0..n {
            let r = &self.x[k] * &self.x_inv[k] - &id;
            rep.entries.push((format!("lattice inverse {k}"), r.norm()));
        }
        for i in 1..=n {
            let si = d.simple(i);
            let a = crate::weights::a_poly(d, &alg.params, i - 1).scale(c(alg.params.sqrt_q(i)));
            for k in 0..n {
                let e = basis_vector(k);
                let lhs = &self.t[i - 1] * self.x_pow(e) - self.x_pow(d.act(si, e)) * &self.t[i - 1];
                let rhs = self.poly(&(&a * &alg.divided_difference(i, &Laurent::x(e))));
                let scale = self.t[i - 1].norm() * self.x[k].norm();
                rep.entries.push((format!("bernstein T{i} x{k}"), rel_norm(&(lhs - rhs), scale)));
            }
        }
        rep
    }

    pub fn to_json(&self) -> RepresentationJson {
        let mut matrices = BTreeMap::new();
        for (i, m) in self.t.iter().enumerate() {
            matrices.insert(format!("T_{}", i + 1), matrix_json(m));
        }
        for (k, m) in self.x.iter().enumerate() {
            matrices.insert(format!("x_{}", k + 1), matrix_json(m));
        }
        RepresentationJson { label: self.label.clone(), dimension: self.dim, matrices }
    }

    /// Conjugates every generator matrix: `M ↦ P⁻¹ M P`.
    pub fn conjugate(&self, p: &CMat) -> Result<Representation> {
        let pinv = p.clone().try_inverse().ok_or_else(|| Error::Internal("singular conjugator".into()))?;
        let f = |m: &CMat| &pinv * m * p;
        Ok(Representation {
            label: self.label.clone(),
            config: self.config,
            dim: self.dim,
            t: self.t.iter().map(f).collect(),
            x: self.x.iter().map(f).collect(),
            x_inv: self.x_inv.iter().map(f).collect(),
            weights: None,
        })
    }
}

/// A representation with `π(T_w)` precomputed for `w ∈ W0`.
pub struct RepEval<'a> {
    pub rep: &'a Representation,
    pub tw: Vec<CMat>,
}

impl RepEval<'_> {
    /// `tr π(T_w x^λ)`.
    pub fn monomial(&self, w: usize, e: Coweight) -> Complex64 {
        match &self.rep.weights {
            Some(ws) => (0..self.rep.dim).map(|k| self.tw[w][(k, k)] * ws[k].pow(e)).sum(),
            None => (&self.tw[w] * self.rep.x_pow(e)).trace(),
        }
    }

    pub fn char_value(&self, h: &BernsteinElement) -> Complex64 {
        h.monomials().map(|(w, e, coef)| coef * self.monomial(w, e)).sum()
    }
}

// ---- symbolic modules over the lattice ----

#[derive(Clone, Debug)]
struct SymEntry {
    row: usize,
    col: usize,
    /// Entry is `a(u) + ε b(u)`.
    a: Laurent,
    b: Laurent,
}

/// `ℋ ⊗_{ℋ'} ℂu` with `ℋ'` the lattice part or the parabolic `ℋ_i`, with
/// matrix entries kept as Laurent polynomials in `x`.
#[derive(Clone, Debug)]
pub struct SymbolicModule {
    pub config: Config,
    pub node: Option<usize>,
    /// `W0` indices of the basis `T_w ⊗ u`.
    pub basis: Vec<usize>,
    /// `T_1..T_n`, then `x^{e_k}`, `x^{−e_k}` interleaved.
    gens: Vec<Vec<SymEntry>>,
}

impl SymbolicModule {
    pub fn principal(alg: &HeckeAlgebra) -> SymbolicModule {
        Self::build(alg, None)
    }

    pub fn induced(alg: &HeckeAlgebra, node: usize) -> SymbolicModule {
        Self::build(alg, Some(node))
    }

    fn build(alg: &HeckeAlgebra, node: Option<usize>) -> SymbolicModule {
        let d = &alg.datum;
        let basis: Vec<usize> =
            (0..d.order()).filter(|&w| node.is_none_or(|i| d.right_ascent(w, i))).collect();
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut gens_elems: Vec<BernsteinElement> = (1..=d.rank).map(|i| BernsteinElement::t(d.simple(i))).collect();
        for k in 0..d.rank {
            gens_elems.push(BernsteinElement::x(basis_vector(k)));
            gens_elems.push(BernsteinElement::x(-basis_vector(k)));
        }
        let gens = gens_elems
            .iter()
            .map(|g| {
                let mut entries: BTreeMap<(usize, usize), (Laurent, Laurent)> = BTreeMap::new();
                for (col, &w) in basis.iter().enumerate() {
                    let prod = alg.bernstein_mult(g, &BernsteinElement::t(w));
                    for (&v, p) in &prod.terms {
                        let (row, folded) = match node {
                            Some(i) if !d.right_ascent(v, i) => (pos[&d.mul(v, d.simple(i))], true),
                            _ => (pos[&v], false),
                        };
                        let e = entries.entry((row, col)).or_default();
                        if folded {
                            e.1.add_scaled(p, c(1.0));
                        } else {
                            e.0.add_scaled(p, c(1.0));
                        }
                    }
                }
                entries.into_iter().map(|((row, col), (a, b))| SymEntry { row, col, a, b }).collect()
            })
            .collect();
        SymbolicModule { config: d.config, node, basis, gens }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn eval_gen(&self, g: usize, u: &Character, eps: Complex64) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for e in &self.gens[g] {
            m[(e.row, e.col)] += e.a.eval(u) + eps * e.b.eval(u);
        }
        m
    }

    /// Specializes at the character `u` (and `T_i ↦ ε` on the parabolic).
    pub fn evaluate(&self, label: &str, u: &Character, eps: Complex64) -> Representation {
        let rank = self.config.rank();
        let t = (0..rank).map(|i| self.eval_gen(i, u, eps)).collect();
        let x = (0..rank).map(|k| self.eval_gen(rank + 2 * k, u, eps)).collect();
        let x_inv = (0..rank).map(|k| self.eval_gen(rank + 2 * k + 1, u, eps)).collect();
        Representation { label: label.to_string(), config: self.config, dim: self.dim(), t, x, x_inv, weights: None }
    }
}

/// `M(t)` in the basis `T_w ⊗ v_t`.
pub fn principal_series(alg: &HeckeAlgebra, t: &Character) -> Representation {
    let label = format!("{}:M(t)", alg.datum.config.tag());
    SymbolicModule::principal(alg).evaluate(&label, t, c(0.0))
}

/// One-dimensional data `u_s` of a parabolic subalgebra `ℋ_i`, depending on
/// a torus coordinate `s`: `T_i ↦ ε`, `x^{e_k} ↦ coef_k s^{s_exp_k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InducedData {
    pub node: usize,
    pub eps: Complex64,
    pub coef: [Complex64; 2],
    pub s_exp: [i32; 2],
}

impl InducedData {
    pub fn character(&self, s: Complex64, rank: usize) -> Character {
        let v: Vec<Complex64> = (0..rank).map(|k| self.coef[k] * s.powi(self.s_exp[k])).collect();
        Character::new(&v)
    }

    /// Checks the quadratic and Bernstein relations of `ℋ_i` on `u_s`.
    pub fn validate(&self, alg: &HeckeAlgebra) -> Result<()> {
        let d = &alg.datum;
        let i = self.node;
        if i == 0 || i > d.rank {
            return Err(Error::InvalidOneDimCharacter(format!("node {i} out of range")));
        }
        let sq = alg.params.sqrt_q(i);
        if !near(self.eps, c(sq), 1e-12) && !near(self.eps, c(-1.0 / sq), 1e-12) {
            return Err(Error::InvalidOneDimCharacter(format!("T{i} eigenvalue {}", self.eps)));
        }
        let a = crate::weights::a_poly(d, &alg.params, i - 1).scale(c(sq));
        for s in [Complex64::new(0.8, 0.6), Complex64::new(1.3, -0.4)] {
            let u = self.character(s, d.rank);
            for k in 0..d.rank {
                let e = basis_vector(k);
                let lhs = self.eps * u.pow(e) - u.pow(d.act(d.simple(i), e)) * self.eps;
                let rhs = (&a * &alg.divided_difference(i, &Laurent::x(e))).eval(&u);
                if !near(lhs, rhs, 1e-10) {
                    return Err(Error::InvalidOneDimCharacter(format!(
                        "Bernstein relation fails for x^e{k}: {lhs} vs {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Ind_{ℋ_i}^{ℋ}(ℂu_s)` at one value of `s`.
pub fn induced_parabolic(alg: &HeckeAlgebra, data: &InducedData, s: Complex64) -> Result<Representation> {
    data.validate(alg)?;
    let sym = SymbolicModule::induced(alg, data.node);
    let label = format!("{}:Ind{}", alg.datum.config.tag(), data.node);
    Ok(sym.evaluate(&label, &data.character(s, alg.rank()), data.eps))
}

// ---- τ-basis and f_t ----

fn pole(e: Error) -> Error {
    match e {
        Error::PoleAtCharacter(m) => Error::DenominatorVanishes(m),
        other => other,
    }
}

/// `M(t)` in the basis `τ_w ⊗ v_t`; requires regular `t`.
pub fn principal_series_tau(alg: &HeckeAlgebra, t: &Character) -> Result<Representation> {
    let d = &alg.datum;
    if !is_regular(d, t) {
        return Err(Error::IrregularCharacter);
    }
    let n = d.order();
    let weights: Vec<Character> = (0..n).map(|w| t.act(d, w)).collect();
    let mut mats = Vec::new();
    for i in 1..=d.rank {
        let mut m = CMat::zeros(n, n);
        let npoly = n_poly(d, &alg.params, i - 1);
        for w in 0..n {
            m[(w, w)] = local_factor(d, &alg.params, FactorKind::B, i - 1, true, &weights[w]).map_err(pole)?
                * alg.params.sqrt_q(i);
            let v = d.mul(d.simple(i), w);
            let u = weights[v];
            let dv = d_poly(d, i - 1).eval(&u);
            if dv.norm() < EPS_ZERO {
                return Err(Error::DenominatorVanishes(format!("d_{i} at s_{i}w t")));
            }
            let kappa = if d.left_ascent(i, w) {
                c(1.0)
            } else {
                npoly.eval(&u) * npoly.eval(&u.inverse()) * alg.params.q(i)
            };
            m[(v, w)] = kappa / dv;
        }
        mats.push(m);
    }
    Ok(Representation::diagonal(&format!("{}:M(t)tau", d.config.tag()), d.config, mats, weights))
}

/// `f_t(h)`, the `(1,1)` entry of `π(h)` in the τ-basis.
pub fn f_value(alg: &HeckeAlgebra, t: &Character, h: &BernsteinElement) -> Result<Complex64> {
    let rep = principal_series_tau(alg, t)?;
    let mut out = c(0.0);
    for (&w, p) in &h.terms {
        out += rep.t_weyl(&alg.datum, w)[(0, 0)] * p.eval(t);
    }
    Ok(out)
}

/// Limit of `f_u(h)` as `u → t` along `u = t·exp(ε·dir)`, by Richardson
/// extrapolation from two step sizes. At a non-regular `t` the value can
/// depend on `dir`.
pub fn f_value_along(alg: &HeckeAlgebra, t: &Character, h: &BernsteinElement, dir: [f64; 2]) -> Result<Complex64> {
    const STEP: f64 = 1e-5;
    let at = |e: f64| {
        let mut u = *t;
        for k in 0..t.rank {
            u.values[k] *= (e * dir[k]).exp();
        }
        f_value(alg, &u, h)
    };
    Ok(at(STEP / 2.0)? * 2.0 - at(STEP)?)
}

// ---- calibrated modules ----

/// `(b_i(u), c_i(u))` with the half-powers of the parameters given as complex numbers.
fn local_bc(datum: &RootDatum, sq: &[Complex64], i: usize, u: &Character) -> Result<(Complex64, Complex64)> {
    let root = &datum.positive_roots[i - 1];
    let d = c(1.0) - u.pow(-root.coroot);
    if d.norm() < EPS_ZERO {
        return Err(Error::DenominatorVanishes(format!("d_{i}")));
    }
    let sqi = sq[root.param];
    let (a, n) = match root.class {
        RootClass::R2 => {
            let s0 = sq[0];
            let y = u.pow(-root.half_coroot.unwrap());
            let a = c(1.0) - (sqi * sqi).inv() + (s0 - s0.inv()) / sqi * y;
            let n = (c(1.0) - y / (s0 * sqi)) * (c(1.0) + s0 / sqi * y);
            (a, n)
        }
        _ => {
            let q = sqi * sqi;
            (c(1.0) - q.inv(), c(1.0) - u.pow(-root.coroot) / q)
        }
    };
    Ok((a / d, n / d))
}

/// The calibrated action on `{e_w : w ∈ f}` with explicit parameter half-powers.
fn calibrated_core(
    datum: &RootDatum,
    sq: &[Complex64],
    t: &Character,
    f: &[usize],
    label: &str,
) -> Result<Representation> {
    let pos: HashMap<usize, usize> = f.iter().enumerate().map(|(k, &w)| (w, k)).collect();
    let weights: Vec<Character> = f.iter().map(|&w| t.act(datum, w)).collect();
    let n = f.len();
    let mut mats = Vec::new();
    for i in 1..=datum.rank {
        let sqi = sq[datum.positive_roots[i - 1].param];
        let mut m = CMat::zeros(n, n);
        for (col, &w) in f.iter().enumerate() {
            let (b, cc) = local_bc(datum, sq, i, &weights[col])?;
            m[(col, col)] = sqi * b;
            if let Some(&row) = pos.get(&datum.mul(datum.simple(i), w)) {
                m[(row, col)] = sqi * cc;
            }
        }
        mats.push(m);
    }
    Ok(Representation::diagonal(label, datum.config, mats, weights))
}

/// `M_J(t)` with basis `e_w`, `w ∈ F_J(t)`.
pub fn calibrated_module(alg: &HeckeAlgebra, t: &Character, j: &[usize], label: &str) -> Result<Representation> {
    let d = &alg.datum;
    let f = f_j_set(d, &alg.params, t, j)?;
    calibrated_on(alg, t, &f, label)
}

/// The calibrated action on a prescribed support `f`, after the same checks.
pub fn calibrated_on(alg: &HeckeAlgebra, t: &Character, f: &[usize], label: &str) -> Result<Representation> {
    let d = &alg.datum;
    if f.is_empty() {
        return Err(Error::EmptyF);
    }
    for &w in f {
        if is_calibratable(d, &alg.params, &t.act(d, w)) == Calibratable::No {
            return Err(Error::NotCalibratable(format!("weight {} of {label}", d.format_word(w))));
        }
    }
    let sq: Vec<Complex64> = alg.params.node.iter().map(|q| c(q.sqrt())).collect();
    calibrated_core(d, &sq, t, f, label)
}

// ---- one-dimensional catalogs ----

/// The one-dimensional representations named in the Plancherel formulas,
/// as `(T_1, …, T_n; x^{e_1}, …)`.
pub fn one_dim_catalog(alg: &HeckeAlgebra) -> BTreeMap<String, Representation> {
    let cfg = alg.datum.config;
    let p = &alg.params;
    let mut out = BTreeMap::new();
    let mut put = |name: &str, t: &[Complex64], x: &[Complex64]| {
        let label = format!("{}:{name}", cfg.tag());
        out.insert(name.to_string(), Representation::one_dim(&label, cfg, t, x));
    };
    let r = |v: f64| c(v);
    match cfg {
        Config::A1Q => {
            let q = p.free[0];
            put("pi", &[r(-q.powf(-0.5))], &[r(1.0 / q)]);
        }
        Config::A1P => {
            let q = p.free[0];
            put("pi1", &[r(-q.powf(-0.5))], &[r(q.powf(-0.5))]);
            put("pi2", &[r(-q.powf(-0.5))], &[r(-q.powf(-0.5))]);
        }
        Config::BC1Q => {
            let (q0, q1) = (p.free[0], p.free[1]);
            put("pi1", &[r(-q1.powf(-0.5))], &[r((q0 * q1).powf(-0.5))]);
            put("pi2", &[r(-q1.powf(-0.5))], &[r(-(q0 / q1).sqrt())]);
            put("pi3", &[r(q1.sqrt())], &[r(-(q1 / q0).sqrt())]);
        }
        Config::A2Q => {
            let q = p.free[0];
            let m = r(-q.powf(-0.5));
            put("pi2", &[m, m], &[r(1.0 / q), r(1.0 / q)]);
        }
        Config::A2P => {
            let q = p.free[0];
            let m = r(-q.powf(-0.5));
            put("pi2", &[m, m], &[r(1.0 / q), r(1.0 / q)]);
            put("pi3", &[m, m], &[omega(1) / q, omega(-1) / q]);
            put("pi4", &[m, m], &[omega(-1) / q, omega(1) / q]);
        }
        Config::C2Q | Config::G2Q => {
            let (q1, q2) = (p.q(1), p.q(2));
            let (m1, p1) = (r(-q1.powf(-0.5)), r(q1.sqrt()));
            let (m2, p2) = (r(-q2.powf(-0.5)), r(q2.sqrt()));
            put("pi3", &[m1, m2], &[r(1.0 / q1), r(1.0 / q2)]);
            if cfg == Config::C2Q {
                put("pi4", &[m1, m2], &[r(1.0 / q1), r(-1.0)]);
                put("pi5", &[m1, p2], &[r(1.0 / q1), r(-1.0)]);
                put("pi6", &[p1, m2], &[r(q1), r(1.0 / q2)]);
                put("pi7", &[m1, p2], &[r(1.0 / q1), r(q2)]);
            } else {
                put("pi4", &[p1, m2], &[r(q1), r(1.0 / q2)]);
                put("pi5", &[m1, p2], &[r(1.0 / q1), r(q2)]);
            }
        }
        Config::C2P => {
            let (q1, q2) = (p.q(1), p.q(2));
            let (m1, p1) = (r(-q1.powf(-0.5)), r(q1.sqrt()));
            let (m2, p2) = (r(-q2.powf(-0.5)), r(q2.sqrt()));
            for (sign, tag) in [(1.0, "+"), (-1.0, "-")] {
                put(&format!("pi3{tag}"), &[m1, m2], &[r(1.0 / (q1 * q2)), r(sign * q1.powf(-0.5) / q2)]);
                put(&format!("pi4{tag}"), &[p1, m2], &[r(q1 / q2), r(sign * q1.sqrt() / q2)]);
                put(&format!("pi5{tag}"), &[m1, p2], &[r(q2 / q1), r(sign * q1.powf(-0.5) * q2)]);
            }
        }
        Config::BC2Q => {
            let (q0, q1, q2) = (p.q(0), p.q(1), p.q(2));
            let (m1, p1) = (r(-q1.powf(-0.5)), r(q1.sqrt()));
            let (m2, p2) = (r(-q2.powf(-0.5)), r(q2.sqrt()));
            let a = (q0 * q2).sqrt();
            let b = (q2 / q0).sqrt();
            put("pi5", &[m1, m2], &[r(1.0 / q1), r(1.0 / a)]);
            put("pi6", &[m1, m2], &[r(1.0 / q1), r(-1.0 / b)]);
            put("pi7", &[p1, m2], &[r(q1), r(1.0 / a)]);
            put("pi8", &[p1, m2], &[r(q1), r(-1.0 / b)]);
            put("pi9", &[m1, p2], &[r(1.0 / q1), r(a)]);
            put("pi10", &[m1, p2], &[r(1.0 / q1), r(-b)]);
            put("pi11", &[p1, p2], &[r(q1), r(-b)]);
        }
    }
    out
}

/// The one-dimensional partner with `T_n` flipped, for `π(x^{α_n∨}) = −1` in type C.
pub fn companion_one_dim(alg: &HeckeAlgebra, rep: &Representation) -> Result<Representation> {
    let d = &alg.datum;
    if d.config.type_tag() != TypeTag::C2 || rep.dim != 1 {
        return Err(Error::NotApplicable("companion needs a 1-dimensional C2 representation".into()));
    }
    let n = d.rank;
    let v = rep.x_pow(d.positive_roots[n - 1].coroot)[(0, 0)];
    if !near(v, c(-1.0), 1e-9) {
        return Err(Error::NotApplicable(format!("x^(a{n}v) acts by {v}, not -1")));
    }
    let sq = alg.params.sqrt_q(n);
    let cur = rep.t[n - 1][(0, 0)];
    let flipped = if near(cur, c(sq), 1e-9) { c(-1.0 / sq) } else { c(sq) };
    let mut out = rep.clone();
    out.t[n - 1] = CMat::from_element(1, 1, flipped);
    out.label = format!("{}'", rep.label);
    Ok(out)
}

// ---- G2 π⁷₊ and its specializations ----

const G2_F7: [&[usize]; 3] = [&[2, 1, 2, 1], &[1, 2, 1, 2, 1], &[2, 1, 2, 1, 2, 1]];

fn g2_support(datum: &RootDatum) -> Vec<usize> {
    G2_F7.iter().map(|w| datum.index_of_word(w)).collect()
}

/// `π⁷₊` at half-powers `(r1, r2)` of `(q1, q2)`, on the fixed support,
/// with `e_{w3}` rescaled so the matrices agree with the displayed basis.
fn g2_pi7_raw(datum: &RootDatum, r1: Complex64, r2: Complex64, rescale: bool) -> Result<Representation> {
    let t = Character::new(&[r1 * r1, r2 / r1]);
    let rep = calibrated_core(datum, &[r2, r1, r2], &t, &g2_support(datum), "G2Q:pi7+")?;
    if !rescale {
        return Ok(rep);
    }
    let rho = (c(1.0) - r1 / (r2 * r2 * r2)) / (c(1.0) - (r1 * r2).inv());
    let d = CMat::from_diagonal(&vec![c(1.0), c(1.0), rho].into());
    let mut out = rep.conjugate(&d)?;
    out.weights = rep.weights;
    Ok(out)
}

/// Averages the conjugated module over a circle `r1 = r1(z)` around the
/// degenerate point; the conjugated entries are analytic there.
fn g2_pi7_limit(
    datum: &RootDatum,
    r1_of: impl Fn(Complex64) -> Complex64,
    r2: Complex64,
    conj: impl Fn(Complex64, Complex64) -> CMat,
) -> Result<Representation> {
    const K: usize = 64;
    const RADIUS: f64 = 0.05;
    let mut acc: Option<Representation> = None;
    for j in 0..K {
        let z = Complex64::from_polar(RADIUS, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / K as f64);
        let r1 = r1_of(z);
        // M ↦ P M P⁻¹
        let p = conj(r1, r2).try_inverse().ok_or_else(|| Error::Internal("singular conjugator".into()))?;
        let rep = g2_pi7_raw(datum, r1, r2, true)?.conjugate(&p)?;
        acc = Some(match acc {
            None => rep,
            Some(mut a) => {
                for (m, n) in a.t.iter_mut().chain(a.x.iter_mut()).chain(a.x_inv.iter_mut()).zip(
                    rep.t.iter().chain(rep.x.iter()).chain(rep.x_inv.iter()),
                ) {
                    *m += n;
                }
                a
            }
        });
    }
    let mut out = acc.expect("K > 0");
    for m in out.t.iter_mut().chain(out.x.iter_mut()).chain(out.x_inv.iter_mut()) {
        *m /= c(K as f64);
    }
    Ok(out)
}

/// Conjugator used at `q1 = q2`.
pub fn g2_conjugator_a(r1: Complex64, r2: Complex64) -> CMat {
    let z = c(0.0);
    let o = c(1.0);
    CMat::from_row_slice(3, 3, &[o, z, z, z, o, -r1 / r2, z, -o, o])
}

/// Conjugator used at `q1 = q2³`.
pub fn g2_conjugator_b(r1: Complex64, r2: Complex64) -> CMat {
    let z = c(0.0);
    let o = c(1.0);
    let k = r1 / (r2 * r2 * r2);
    CMat::from_row_slice(3, 3, &[o, -k, z, -o, o, z, z, z, o - k])
}

/// `π⁷₊` for G2: calibrated generically, conjugated and specialized at
/// `q1 = q2` and `q1 = q2³`.
pub fn g2_pi7_plus(alg: &HeckeAlgebra) -> Result<Representation> {
    let d = &alg.datum;
    if d.config != Config::G2Q {
        return Err(Error::NotApplicable("π⁷₊ is a G2 module".into()));
    }
    let (q1, q2) = (alg.params.q(1), alg.params.q(2));
    let (r1, r2) = (c(q1.sqrt()), c(q2.sqrt()));
    if (q1 - q2).abs() <= EPS_ZERO * q1 {
        return g2_pi7_limit(d, |z| r2 * (c(1.0) + z), r2, g2_conjugator_a);
    }
    if (q1 - q2.powi(3)).abs() <= EPS_ZERO * q1 {
        return g2_pi7_limit(d, |z| r2 * r2 * r2 * (c(1.0) + z), r2, g2_conjugator_b);
    }
    let t = Character::new(&[c(q1), r2 / r1]);
    // validates calibratability and support; the matrices are then rebased
    let weights = calibrated_on(alg, &t, &g2_support(d), "G2Q:pi7+")?.weights;
    let mut rep = g2_pi7_raw(d, r1, r2, true)?;
    rep.weights = weights;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(cfg: Config, q: &[f64]) -> HeckeAlgebra {
        HeckeAlgebra::new(cfg, q).unwrap()
    }

    fn generic_t(rank: usize) -> Character {
        let v = [Complex64::from_polar(1.3, 0.7), Complex64::from_polar(0.8, -1.9)];
        Character::new(&v[..rank])
    }

    #[test]
    fn principal_series_dimension_and_relations() {
        for cfg in Config::ALL {
            let a = alg(cfg, &vec![2.5; cfg.param_names().len()]);
            let rep = principal_series(&a, &generic_t(a.rank()));
            assert_eq!(rep.dim, a.datum.order());
            assert!(rep.check_relations(&a).max() < 1e-9, "{cfg}: {:?}", rep.check_relations(&a));
            let one = BernsteinElement::one();
            assert!((rep.char_value(&a.datum, &one) - c(rep.dim as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn tau_basis_relations_and_trace_match() {
        for cfg in Config::ALL {
            let a = alg(cfg, &vec![3.0; cfg.param_names().len()]);
            let t = generic_t(a.rank());
            let tau = principal_series_tau(&a, &t).unwrap();
            assert!(tau.check_relations(&a).max() < 1e-9, "{cfg}");
            let ps = principal_series(&a, &t);
            for w in 0..a.datum.order().min(4) {
                let h = BernsteinElement::t_x(w, Coweight([1, 0]));
                let diff = tau.char_value(&a.datum, &h) - ps.char_value(&a.datum, &h);
                assert!(diff.norm() < 1e-9, "{cfg} w={w}");
            }
        }
    }

    #[test]
    fn tau_diagonal_vanishes() {
        let a = alg(Config::C2Q, &[2.0, 3.0]);
        let t = generic_t(2);
        let rep = principal_series_tau(&a, &t).unwrap();
        for w in 1..a.datum.order() {
            let m = rep.act(&a.datum, &a.tau(w));
            for k in 0..rep.dim {
                assert!(m[(k, k)].norm() < 1e-10);
            }
        }
    }

    #[test]
    fn a1_f_of_t1() {
        let q: f64 = 3.0;
        let a = alg(Config::A1Q, &[q]);
        let t = Character::new(&[Complex64::new(0.4, 1.1)]);
        let f = f_value(&a, &t, &BernsteinElement::t(1)).unwrap();
        let expect = c(q.sqrt() - 1.0 / q.sqrt()) / (c(1.0) - t.values[0].inv());
        assert!((f - expect).norm() < 1e-12);
    }

    #[test]
    fn local_bc_matches_weights() {
        for cfg in [Config::BC1Q, Config::BC2Q, Config::G2Q] {
            let a = alg(cfg, &vec![2.0, 3.5, 1.7][..cfg.param_names().len()]);
            let sq: Vec<Complex64> = a.params.node.iter().map(|q| c(q.sqrt())).collect();
            let t = generic_t(a.rank());
            for i in 1..=a.rank() {
                let (b, cc) = local_bc(&a.datum, &sq, i, &t).unwrap();
                let b0 = local_factor(&a.datum, &a.params, FactorKind::B, i - 1, true, &t).unwrap();
                let c0 = local_factor(&a.datum, &a.params, FactorKind::C, i - 1, true, &t).unwrap();
                assert!((b - b0).norm() < 1e-12 && (cc - c0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn catalogs_satisfy_relations() {
        let pts: [(Config, &[f64]); 9] = [
            (Config::A1Q, &[2.0]),
            (Config::A1P, &[2.0]),
            (Config::BC1Q, &[2.0, 3.0]),
            (Config::A2Q, &[2.0]),
            (Config::A2P, &[2.0]),
            (Config::C2Q, &[2.0, 3.0]),
            (Config::C2P, &[2.0, 3.0]),
            (Config::G2Q, &[2.0, 3.0]),
            (Config::BC2Q, &[1.5, 2.0, 3.0]),
        ];
        for (cfg, q) in pts {
            let a = alg(cfg, q);
            for (name, rep) in one_dim_catalog(&a) {
                assert!(rep.check_relations(&a).max() < 1e-12, "{cfg} {name}");
            }
        }
    }

    #[test]
    fn companion_is_involutive() {
        let a = alg(Config::C2Q, &[2.0, 3.0]);
        let cat = one_dim_catalog(&a);
        let p5 = companion_one_dim(&a, &cat["pi4"]).unwrap();
        assert!((p5.t[1][(0, 0)] - cat["pi5"].t[1][(0, 0)]).norm() < 1e-12);
        let back = companion_one_dim(&a, &p5).unwrap();
        assert!((back.t[1][(0, 0)] - cat["pi4"].t[1][(0, 0)]).norm() < 1e-12);
        assert!(companion_one_dim(&a, &cat["pi3"]).is_err());
    }

    #[test]
    fn induced_rejects_bad_character() {
        let a = alg(Config::A2Q, &[2.0]);
        let bad = InducedData { node: 1, eps: c(0.3), coef: [c(0.5), c(1.0)], s_exp: [0, 1] };
        assert!(matches!(induced_parabolic(&a, &bad, c(1.0)), Err(Error::InvalidOneDimCharacter(_))));
    }
}
