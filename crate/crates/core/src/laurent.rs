//! Laurent polynomials in `x^λ`, `λ ∈ L`, with complex coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::lattice::{mat_apply, Coweight, Mat2};
use crate::weights::Character;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent {
    pub terms: BTreeMap<Coweight, Complex64>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn one() -> Laurent {
        Laurent::monomial(Coweight::ZERO, Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Laurent {
        Laurent::monomial(Coweight::ZERO, c)
    }

    pub fn monomial(e: Coweight, c: Complex64) -> Laurent {
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    pub fn x(e: Coweight) -> Laurent {
        Laurent::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Coweight, c: Complex64) {
        let entry = self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, other: &Laurent, s: Complex64) {
        for (&e, &c) in &other.terms {
            self.add_term(e, c * s);
        }
    }

    pub fn scale(&self, s: Complex64) -> Laurent {
        let mut out = Laurent::zero();
        out.add_scaled(self, s);
        out
    }

    /// Multiplies by `x^e`.
    pub fn shift(&self, e: Coweight) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&k, &c)| (k + e, c)).collect() }
    }

    /// Applies a lattice automorphism to every exponent.
    pub fn map_exponents(&self, m: &Mat2) -> Laurent {
        let mut out = Laurent::zero();
        for (&e, &c) in &self.terms {
            out.add_term(mat_apply(m, e), c);
        }
        out
    }

    pub fn eval(&self, t: &Character) -> Complex64 {
        self.terms.iter().map(|(&e, &c)| c * t.pow(e)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients below `rel` times the largest one.
    pub fn prune(&mut self, rel: f64) {
        let cut = self.max_abs() * rel;
        self.terms.retain(|_, c| c.norm() >= cut && c.norm() > 0.0);
    }

    /// Coefficient of `x^e`.
    pub fn coeff(&self, e: Coweight) -> Complex64 {
        self.terms.get(&e).copied().unwrap_or_default()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_scaled(o, Complex64::new(1.0, 0.0));
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_scaled(o, Complex64::new(-1.0, 0.0));
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &o.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}
