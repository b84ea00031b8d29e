//! The affine Hecke algebra with numeric parameters.
//!
//! Elements live either in the Coxeter basis `{T_w : w ∈ W_L}` or in the
//! Bernstein normal form `Σ T_w p_w(x)` with `w ∈ W0`. The two are separate
//! types, so mixing bases is a type error rather than a runtime one.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::BuildHasherDefault;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::Serialize;

use crate::affine_weyl::{
    awe_inverse, awe_length, awe_mult, generator, is_left_descent, is_right_descent, reduced_word,
    AffineWeylElement,
};
use crate::error::Result;
use crate::laurent::Laurent;
use crate::lattice::Coweight;
use crate::params::Params;
use crate::root_data::{Config, RootDatum};
use crate::weights::{a_poly, d_poly, n_poly};

/// Coefficients below this fraction of the largest one are dropped.
pub const PRUNE: f64 = 1e-13;

type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Element of the Coxeter basis.
#[derive(Clone, Debug, Default)]
pub struct CoxeterElement {
    pub terms: DetMap<AffineWeylElement, Complex64>,
}

impl CoxeterElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: AffineWeylElement) -> Self {
        Self::term(w, one())
    }

    pub fn term(w: AffineWeylElement, c: Complex64) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: AffineWeylElement, c: Complex64) {
        *self.terms.entry(w).or_default() += c;
    }

    pub fn add_scaled(&mut self, other: &CoxeterElement, s: Complex64) {
        for (&w, &c) in &other.terms {
            self.add_term(w, c * s);
        }
    }

    pub fn coeff(&self, w: &AffineWeylElement) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn prune(&mut self) {
        let cut = self.max_abs() * PRUNE;
        self.terms.retain(|_, c| c.norm() > cut);
    }

    /// Terms in key order.
    pub fn sorted(&self) -> Vec<(&AffineWeylElement, &Complex64)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum coefficient difference, relative to the larger element.
    pub fn distance(&self, other: &CoxeterElement) -> f64 {
        let mut worst: f64 = 0.0;
        for (w, c) in &self.terms {
            worst = worst.max((c - other.coeff(w)).norm());
        }
        for (w, c) in &other.terms {
            worst = worst.max((c - self.coeff(w)).norm());
        }
        worst / self.max_abs().max(other.max_abs()).max(1.0)
    }
}

/// Element `Σ_w T_w p_w(x)` of the Bernstein basis, `w ∈ W0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BernsteinElement {
    pub terms: BTreeMap<usize, Laurent>,
}

impl BernsteinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::from_poly(Laurent::constant(c))
    }

    pub fn one() -> Self {
        Self::scalar(one())
    }

    pub fn from_poly(p: Laurent) -> Self {
        Self::t_poly(0, p)
    }

    /// `x^λ`.
    pub fn x(e: Coweight) -> Self {
        Self::from_poly(Laurent::x(e))
    }

    /// `T_w` for `w ∈ W0`.
    pub fn t(w: usize) -> Self {
        Self::t_poly(w, Laurent::one())
    }

    /// `T_w x^λ`.
    pub fn t_x(w: usize, e: Coweight) -> Self {
        Self::t_poly(w, Laurent::x(e))
    }

    pub fn t_poly(w: usize, p: Laurent) -> Self {
        let mut out = Self::zero();
        out.add_t_poly(w, &p, one());
        out
    }

    pub fn add_t_poly(&mut self, w: usize, p: &Laurent, s: Complex64) {
        let entry = self.terms.entry(w).or_default();
        entry.add_scaled(p, s);
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &BernsteinElement, s: Complex64) {
        for (&w, p) in &other.terms {
            self.add_t_poly(w, p, s);
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -one());
        out
    }

    /// Polynomial coefficient of `T_w`.
    pub fn poly(&self, w: usize) -> Laurent {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn prune(&mut self) {
        let cut = self.max_abs() * PRUNE;
        for p in self.terms.values_mut() {
            p.terms.retain(|_, c| c.norm() > cut);
        }
        self.terms.retain(|_, p| !p.is_zero());
    }

    /// Iterates `(w, λ, c)` for the terms `c T_w x^λ`.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, Coweight, Complex64)> + '_ {
        self.terms
            .iter()
            .flat_map(|(&w, p)| p.terms.iter().map(move |(&e, &c)| (w, e, c)))
    }

    /// Maximum coefficient difference, relative to the larger element.
    pub fn distance(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.max_abs() / self.max_abs().max(other.max_abs()).max(1.0)
    }
}

#[derive(Serialize)]
struct TermJson {
    key: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
pub struct ElementJson {
    basis: &'static str,
    terms: Vec<TermJson>,
}

/// The algebra `ℋ_L` for one configuration and parameter choice.
pub struct HeckeAlgebra {
    pub datum: RootDatum,
    pub params: Params,
    x_cache: Mutex<HashMap<Coweight, Arc<CoxeterElement>>>,
}

impl HeckeAlgebra {
    pub fn new(config: Config, free: &[f64]) -> Result<HeckeAlgebra> {
        let params = Params::new(config, free)?;
        Ok(HeckeAlgebra::with_params(params))
    }

    pub fn with_params(params: Params) -> HeckeAlgebra {
        HeckeAlgebra { datum: params.config.datum(), params, x_cache: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// `q_i^{1/2} − q_i^{−1/2}` for the node `i`.
    pub fn qdiff(&self, i: usize) -> f64 {
        self.params.qdiff(i)
    }

    // ---- Coxeter engine ----

    /// `T_i · Y`.
    pub fn left_mul_generator(&self, i: usize, y: &CoxeterElement) -> CoxeterElement {
        let d = &self.datum;
        let s = generator(d, i);
        let qd = Complex64::new(self.qdiff(i), 0.0);
        let mut out = CoxeterElement::zero();
        for (&w, &c) in &y.terms {
            out.add_term(awe_mult(d, s, w), c);
            if is_left_descent(d, w, i) {
                out.add_term(w, qd * c);
            }
        }
        out
    }

    /// `Y · T_i`.
    pub fn right_mul_generator(&self, y: &CoxeterElement, i: usize) -> CoxeterElement {
        let d = &self.datum;
        let s = generator(d, i);
        let qd = Complex64::new(self.qdiff(i), 0.0);
        let mut out = CoxeterElement::zero();
        for (&w, &c) in &y.terms {
            out.add_term(awe_mult(d, w, s), c);
            if is_right_descent(d, w, i) {
                out.add_term(w, qd * c);
            }
        }
        out
    }

    /// `Y · T_i⁻¹` with `T_i⁻¹ = T_i − (q_i^{1/2} − q_i^{−1/2})`.
    pub fn right_mul_generator_inverse(&self, y: &CoxeterElement, i: usize) -> CoxeterElement {
        let d = &self.datum;
        let s = generator(d, i);
        let qd = Complex64::new(self.qdiff(i), 0.0);
        let mut out = CoxeterElement::zero();
        for (&w, &c) in &y.terms {
            out.add_term(awe_mult(d, w, s), c);
            if !is_right_descent(d, w, i) {
                out.add_term(w, -qd * c);
            }
        }
        out
    }

    /// `T_a · Y`.
    pub fn left_mul_basis(&self, a: AffineWeylElement, y: &CoxeterElement) -> CoxeterElement {
        let (word, omega) = reduced_word(&self.datum, a).expect("reduced word");
        let mut cur = CoxeterElement::zero();
        for (&w, &c) in &y.terms {
            cur.add_term(awe_mult(&self.datum, omega, w), c);
        }
        for &i in word.iter().rev() {
            cur = self.left_mul_generator(i, &cur);
        }
        cur
    }

    pub fn coxeter_mult(&self, a: &CoxeterElement, b: &CoxeterElement) -> CoxeterElement {
        let mut out = CoxeterElement::zero();
        for (w, c) in a.sorted() {
            out.add_scaled(&self.left_mul_basis(*w, b), *c);
        }
        out.prune();
        out
    }

    /// `(Σ c_w T_w)* = Σ c̄_w T_{w⁻¹}`.
    pub fn star(&self, h: &CoxeterElement) -> CoxeterElement {
        let mut out = CoxeterElement::zero();
        for (&w, &c) in &h.terms {
            out.add_term(awe_inverse(&self.datum, w), c.conj());
        }
        out
    }

    pub fn trace(&self, h: &CoxeterElement) -> Complex64 {
        h.coeff(&AffineWeylElement::IDENTITY)
    }

    /// `q_w` along a reduced word; length-zero parts contribute 1.
    pub fn q_of(&self, w: AffineWeylElement) -> f64 {
        let (word, _) = reduced_word(&self.datum, w).expect("reduced word");
        word.iter().map(|&i| self.params.q(i)).product()
    }

    pub fn length(&self, w: AffineWeylElement) -> usize {
        awe_length(&self.datum, w)
    }

    // ---- Bernstein engine ----

    /// `(p − s_i p)/(1 − x^{−α_i∨})` as a Laurent polynomial.
    pub fn divided_difference(&self, i: usize, p: &Laurent) -> Laurent {
        let root = &self.datum.positive_roots[i - 1];
        let cv = root.coroot;
        let mut out = Laurent::zero();
        for (&e, &c) in &p.terms {
            let k = e.pair(root.functional);
            if k > 0 {
                for j in 0..k {
                    out.add_term(e - j * cv, c);
                }
            } else if k < 0 {
                for j in 1..=-k {
                    out.add_term(e + j * cv, -c);
                }
            }
        }
        out
    }

    /// `s_i p`.
    pub fn reflect_poly(&self, i: usize, p: &Laurent) -> Laurent {
        p.map_exponents(&self.datum.simple_reflections[i - 1])
    }

    /// `h · T_i` in normal form.
    pub fn bern_right_mul_t(&self, h: &BernsteinElement, i: usize) -> BernsteinElement {
        let d = &self.datum;
        let si = d.simple(i);
        let sq = self.params.sqrt_q(i);
        let qd = Complex64::new(self.qdiff(i), 0.0);
        let corr_factor = a_poly(d, &self.params, i - 1).scale(Complex64::new(sq, 0.0));
        let mut out = BernsteinElement::zero();
        for (&w, p) in &h.terms {
            // p T_i = T_i (s_i p) + q^{1/2} a_i(x) (p − s_i p)/(1 − x^{−α∨})
            let sp = self.reflect_poly(i, p);
            let ws = d.mul(w, si);
            out.add_t_poly(ws, &sp, one());
            if !d.right_ascent(w, i) {
                out.add_t_poly(w, &sp, qd);
            }
            let dd = self.divided_difference(i, p);
            if !dd.is_zero() {
                out.add_t_poly(w, &(&corr_factor * &dd), one());
            }
        }
        out
    }

    /// `T_i · h` in normal form.
    pub fn bern_left_mul_t(&self, i: usize, h: &BernsteinElement) -> BernsteinElement {
        let d = &self.datum;
        let si = d.simple(i);
        let qd = Complex64::new(self.qdiff(i), 0.0);
        let mut out = BernsteinElement::zero();
        for (&w, p) in &h.terms {
            out.add_t_poly(d.mul(si, w), p, one());
            if !d.left_ascent(i, w) {
                out.add_t_poly(w, p, qd);
            }
        }
        out
    }

    /// `h · T_v` for `v ∈ W0`.
    pub fn bern_right_mul_tw(&self, h: &BernsteinElement, v: usize) -> BernsteinElement {
        let mut cur = h.clone();
        for &i in &self.datum.weyl[v].word {
            cur = self.bern_right_mul_t(&cur, i);
        }
        cur
    }

    /// `h · p(x)`.
    pub fn bern_right_mul_poly(&self, h: &BernsteinElement, p: &Laurent) -> BernsteinElement {
        let mut out = BernsteinElement::zero();
        for (&w, r) in &h.terms {
            out.add_t_poly(w, &(r * p), one());
        }
        out
    }

    pub fn bernstein_mult(&self, a: &BernsteinElement, b: &BernsteinElement) -> BernsteinElement {
        let mut out = BernsteinElement::zero();
        for (&v, r) in &b.terms {
            let av = self.bern_right_mul_tw(a, v);
            out.add_scaled(&self.bern_right_mul_poly(&av, r), one());
        }
        out.prune();
        out
    }

    /// `T_i⁻¹` as a Bernstein element.
    pub fn bern_t_inverse(&self, i: usize) -> BernsteinElement {
        let mut out = BernsteinElement::t(self.datum.simple(i));
        out.add_t_poly(0, &Laurent::one(), Complex64::new(-self.qdiff(i), 0.0));
        out
    }

    /// `T_0 = x^{φ∨} T_{s_φ}⁻¹`.
    pub fn bern_t0(&self) -> BernsteinElement {
        let sphi = self.datum.s_phi();
        let mut cur = BernsteinElement::x(self.datum.highest_coroot());
        for &i in self.datum.weyl[sphi].word.iter().rev() {
            cur = self.bernstein_mult(&cur, &self.bern_t_inverse(i));
        }
        cur
    }

    /// `T_i` for a node `i ∈ 0..=n`.
    pub fn bern_generator(&self, i: usize) -> BernsteinElement {
        if i == 0 {
            self.bern_t0()
        } else {
            BernsteinElement::t(self.datum.simple(i))
        }
    }

    /// `τ_i = (1 − x^{−α_i∨}) T_i − q_i^{1/2} a_i(x)`.
    pub fn tau_i(&self, i: usize) -> BernsteinElement {
        let d = d_poly(&self.datum, i - 1);
        let mut out = self.bern_right_mul_t(&BernsteinElement::from_poly(d), i);
        let sq = Complex64::new(self.params.sqrt_q(i), 0.0);
        out.add_t_poly(0, &a_poly(&self.datum, &self.params, i - 1), -sq);
        out
    }

    /// `τ_w` along the stored reduced word, or along `word` if given.
    pub fn tau(&self, w: usize) -> BernsteinElement {
        self.tau_word(&self.datum.weyl[w].word)
    }

    pub fn tau_word(&self, word: &[usize]) -> BernsteinElement {
        word.iter()
            .fold(BernsteinElement::one(), |acc, &i| self.bernstein_mult(&acc, &self.tau_i(i)))
    }

    /// `q_i n_i(x) n_i(x⁻¹)`.
    pub fn tau_square_rhs(&self, i: usize) -> BernsteinElement {
        let n = n_poly(&self.datum, &self.params, i - 1);
        let ninv = n.map_exponents(&[[-1, 0], [0, -1]]);
        BernsteinElement::from_poly((&n * &ninv).scale(Complex64::new(self.params.q(i), 0.0)))
    }

    // ---- basis change and trace ----

    /// A split `λ = μ − ν` with `μ, ν ∈ L ∩ P+`, minimizing `ℓ(t_ν)`.
    pub fn dominant_split(&self, lam: Coweight) -> (Coweight, Coweight) {
        let d = &self.datum;
        if d.is_dominant(lam) {
            return (lam, Coweight::ZERO);
        }
        let mut bound = 4 * (lam.linf() + 2);
        let mut best: Option<(usize, Coweight)> = None;
        while best.is_none() {
            for a in -bound..=bound {
                for b in -bound..=bound {
                    if d.rank == 1 && b != 0 {
                        continue;
                    }
                    let nu = Coweight([a, b]);
                    if !d.is_dominant(nu) || !d.is_dominant(lam + nu) {
                        continue;
                    }
                    let l = awe_length(d, AffineWeylElement::new(nu, 0));
                    if best.is_none_or(|(bl, bn)| (l, nu) < (bl, bn)) {
                        best = Some((l, nu));
                    }
                }
            }
            bound *= 2;
        }
        let nu = best.expect("a dominant split exists").1;
        (lam + nu, nu)
    }

    /// Coxeter expansion of `x^λ = T_{t_μ} T_{t_ν}⁻¹`, cached.
    pub fn x_coxeter(&self, lam: Coweight) -> Arc<CoxeterElement> {
        if let Some(hit) = self.x_cache.lock().unwrap().get(&lam) {
            return hit.clone();
        }
        let (mu, nu) = self.dominant_split(lam);
        let mut cur = CoxeterElement::basis(AffineWeylElement::new(mu, 0));
        if !nu.is_zero() {
            let (word, omega) = reduced_word(&self.datum, AffineWeylElement::new(nu, 0)).expect("reduced word");
            let oi = awe_inverse(&self.datum, omega);
            let mut next = CoxeterElement::zero();
            for (&w, &c) in &cur.terms {
                next.add_term(awe_mult(&self.datum, w, oi), c);
            }
            cur = next;
            for &i in word.iter().rev() {
                cur = self.right_mul_generator_inverse(&cur, i);
            }
            cur.prune();
        }
        let arc = Arc::new(cur);
        self.x_cache.lock().unwrap().insert(lam, arc.clone());
        arc
    }

    pub fn bernstein_to_coxeter(&self, h: &BernsteinElement) -> CoxeterElement {
        let mut out = CoxeterElement::zero();
        for (w, e, c) in h.monomials() {
            let x = self.x_coxeter(e);
            let mut cur = (*x).clone();
            for &i in self.datum.weyl[w].word.iter().rev() {
                cur = self.left_mul_generator(i, &cur);
            }
            out.add_scaled(&cur, c);
        }
        out.prune();
        out
    }

    /// `Tr(h)` via `Tr(T_w x^λ) = [x^λ]_{T_{w⁻¹}}`.
    pub fn trace_bernstein(&self, h: &BernsteinElement) -> Complex64 {
        let mut out = Complex64::new(0.0, 0.0);
        for (w, e, c) in h.monomials() {
            let key = AffineWeylElement::new(Coweight::ZERO, self.datum.inverse(w));
            out += c * self.x_coxeter(e).coeff(&key);
        }
        out
    }

    pub fn coxeter_json(&self, h: &CoxeterElement) -> ElementJson {
        ElementJson {
            basis: "coxeter",
            terms: h
                .sorted()
                .into_iter()
                .map(|(w, c)| TermJson { key: format!("{w:?}"), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn bernstein_json(&self, h: &BernsteinElement) -> ElementJson {
        ElementJson {
            basis: "bernstein",
            terms: h
                .monomials()
                .map(|(w, e, c)| TermJson {
                    key: format!("T[{}]x{:?}", self.datum.format_word(w), e),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}
