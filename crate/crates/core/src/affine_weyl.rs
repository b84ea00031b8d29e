//! The extended affine Weyl group `W_L = L ⋊ W0`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Coweight;
use crate::root_data::RootDatum;

/// The map `x ↦ u·x + λ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElement {
    pub translation: Coweight,
    pub finite: usize,
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}*w{}", self.translation, self.finite)
    }
}

impl Serialize for AffineWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self:?}"))
    }
}

/// An affine root `x ↦ ⟨x, β⟩ + level`, `β` a wall root or its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub functional: [i32; 2],
    pub level: i32,
}

impl AffineWeylElement {
    pub const IDENTITY: AffineWeylElement = AffineWeylElement { translation: Coweight::ZERO, finite: 0 };

    pub fn new(translation: Coweight, finite: usize) -> Self {
        AffineWeylElement { translation, finite }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

pub fn translation(v: Coweight) -> AffineWeylElement {
    AffineWeylElement::new(v, 0)
}

pub fn is_dominant(datum: &RootDatum, v: Coweight) -> bool {
    datum.is_dominant(v)
}

/// `(λ, u)(μ, v) = (λ + uμ, uv)`.
pub fn awe_mult(datum: &RootDatum, a: AffineWeylElement, b: AffineWeylElement) -> AffineWeylElement {
    AffineWeylElement::new(a.translation + datum.act(a.finite, b.translation), datum.mul(a.finite, b.finite))
}

/// `(λ, u)⁻¹ = (−u⁻¹λ, u⁻¹)`.
pub fn awe_inverse(datum: &RootDatum, a: AffineWeylElement) -> AffineWeylElement {
    let ui = datum.inverse(a.finite);
    AffineWeylElement::new(-datum.act(ui, a.translation), ui)
}

/// The generator `s_i`, with `s_0 = t_{φ∨} s_φ`.
pub fn generator(datum: &RootDatum, i: usize) -> AffineWeylElement {
    if i == 0 {
        AffineWeylElement::new(datum.highest_coroot(), datum.s_phi())
    } else {
        AffineWeylElement::new(Coweight::ZERO, datum.simple(i))
    }
}

/// `a_i = (α_i, 0)` for `i ≥ 1` and `a_0 = (−φ, 1)`, using wall roots.
pub fn simple_affine_root(datum: &RootDatum, i: usize) -> AffineRoot {
    if i == 0 {
        let f = datum.highest_functional();
        AffineRoot { functional: [-f[0], -f[1]], level: 1 }
    } else {
        AffineRoot { functional: datum.wall_roots[i - 1].functional, level: 0 }
    }
}

/// `(λ, u)·(β, k) = (uβ, k − ⟨λ, uβ⟩)`.
pub fn act_root(datum: &RootDatum, a: AffineWeylElement, r: AffineRoot) -> AffineRoot {
    let f = datum.act_functional(a.finite, r.functional);
    AffineRoot { functional: f, level: r.level - a.translation.pair(f) }
}

pub fn is_positive_root(datum: &RootDatum, r: AffineRoot) -> bool {
    r.level > 0 || (r.level == 0 && datum.functional_positive(r.functional))
}

/// Whether `ℓ(s_i a) < ℓ(a)`.
pub fn is_left_descent(datum: &RootDatum, a: AffineWeylElement, i: usize) -> bool {
    let r = act_root(datum, awe_inverse(datum, a), simple_affine_root(datum, i));
    !is_positive_root(datum, r)
}

/// Whether `ℓ(a s_i) < ℓ(a)`.
pub fn is_right_descent(datum: &RootDatum, a: AffineWeylElement, i: usize) -> bool {
    !is_positive_root(datum, act_root(datum, a, simple_affine_root(datum, i)))
}

pub fn left_descents(datum: &RootDatum, a: AffineWeylElement) -> Vec<usize> {
    (0..=datum.rank).filter(|&i| is_left_descent(datum, a, i)).collect()
}

/// Length as the number of affine hyperplanes separating the fundamental
/// alcove from its image.
pub fn awe_length(datum: &RootDatum, a: AffineWeylElement) -> usize {
    let ui = datum.inverse(a.finite);
    datum
        .wall_roots
        .iter()
        .map(|w| {
            let k = a.translation.pair(w.functional);
            let neg = !datum.functional_positive(datum.act_functional(ui, w.functional));
            (k - i32::from(neg)).unsigned_abs() as usize
        })
        .sum()
}

/// Reduced word `a = s_{i_1} ⋯ s_{i_ℓ} ω` with `ω` of length zero.
///
/// Descents are stripped from the left, smallest index first.
pub fn reduced_word(datum: &RootDatum, a: AffineWeylElement) -> Result<(Vec<usize>, AffineWeylElement)> {
    let cap = 10 * (1 + a.translation.l1() as usize) * datum.positive_roots.len();
    let mut word = Vec::new();
    let mut cur = a;
    loop {
        match (0..=datum.rank).find(|&i| is_left_descent(datum, cur, i)) {
            None => return Ok((word, cur)),
            Some(i) => {
                word.push(i);
                cur = awe_mult(datum, generator(datum, i), cur);
            }
        }
        if word.len() > cap {
            return Err(Error::Internal(format!("reduced word of {a:?} did not terminate")));
        }
    }
}

/// Multiplies out a word of generators followed by `omega`.
pub fn from_word(datum: &RootDatum, word: &[usize], omega: AffineWeylElement) -> AffineWeylElement {
    word.iter()
        .rev()
        .fold(omega, |acc, &i| awe_mult(datum, generator(datum, i), acc))
}

/// The node permutation `σ` with `ω s_i ω⁻¹ = s_{σ(i)}`.
pub fn conjugation_permutation(datum: &RootDatum, omega: AffineWeylElement) -> Result<Vec<usize>> {
    let oi = awe_inverse(datum, omega);
    (0..=datum.rank)
        .map(|i| {
            let c = awe_mult(datum, awe_mult(datum, omega, generator(datum, i)), oi);
            (0..=datum.rank)
                .find(|&j| generator(datum, j) == c)
                .ok_or_else(|| Error::Internal(format!("conjugate of s{i} is not simple")))
        })
        .collect()
}
