//! Integer vectors in the chosen basis of the lattice `L`.
//!
//! Rank-one configurations only use slot 0; slot 1 is always zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Element of `L` in lattice coordinates.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coweight(pub [i32; 2]);

/// Integer 2x2 matrix acting on lattice coordinates (column vectors).
pub type Mat2 = [[i32; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

impl Coweight {
    pub const ZERO: Coweight = Coweight([0, 0]);

    pub fn new(a: i32, b: i32) -> Self {
        Coweight([a, b])
    }

    /// Pairing with an integer covector.
    pub fn pair(self, f: [i32; 2]) -> i32 {
        self.0[0] * f[0] + self.0[1] * f[1]
    }

    pub fn is_zero(self) -> bool {
        self.0 == [0, 0]
    }

    pub fn l1(self) -> i32 {
        self.0[0].abs() + self.0[1].abs()
    }

    pub fn linf(self) -> i32 {
        self.0[0].abs().max(self.0[1].abs())
    }
}

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0[0], self.0[1])
    }
}

impl Add for Coweight {
    type Output = Coweight;
    fn add(self, o: Coweight) -> Coweight {
        Coweight([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl AddAssign for Coweight {
    fn add_assign(&mut self, o: Coweight) {
        *self = *self + o;
    }
}

impl Sub for Coweight {
    type Output = Coweight;
    fn sub(self, o: Coweight) -> Coweight {
        Coweight([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        Coweight([-self.0[0], -self.0[1]])
    }
}

impl Mul<Coweight> for i32 {
    type Output = Coweight;
    fn mul(self, v: Coweight) -> Coweight {
        Coweight([self * v.0[0], self * v.0[1]])
    }
}

pub fn mat_apply(m: &Mat2, v: Coweight) -> Coweight {
    Coweight([
        m[0][0] * v.0[0] + m[0][1] * v.0[1],
        m[1][0] * v.0[0] + m[1][1] * v.0[1],
    ])
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// Row vector `f` times matrix `m`.
pub fn covector_apply(f: [i32; 2], m: &Mat2) -> [i32; 2] {
    [
        f[0] * m[0][0] + f[1] * m[1][0],
        f[0] * m[0][1] + f[1] * m[1][1],
    ]
}

/// Reflection `λ ↦ λ − ⟨λ, f⟩ c`.
pub fn reflection(f: [i32; 2], c: Coweight) -> Mat2 {
    let mut m = IDENTITY;
    for r in 0..2 {
        for k in 0..2 {
            m[r][k] -= c.0[r] * f[k];
        }
    }
    m
}
