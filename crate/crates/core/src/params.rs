use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_data::{Config, RootClass, RootDatum, TypeTag};

/// Numeric parameters `q_0, …, q_n`, all greater than one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Params {
    pub config: Config,
    /// The free parameters named in [`Config::param_names`].
    pub free: Vec<f64>,
    /// Parameter per affine node `0..=n`.
    pub node: Vec<f64>,
}

impl Params {
    pub fn new(config: Config, free: &[f64]) -> Result<Params> {
        let names = config.param_names();
        if free.len() != names.len() {
            return Err(Error::InvalidParameters(format!(
                "{config} takes {} parameter(s) ({}), got {}",
                names.len(),
                names.join(","),
                free.len()
            )));
        }
        for (n, &q) in names.iter().zip(free) {
            if !q.is_finite() || q <= 1.0 {
                return Err(Error::InvalidParameters(format!("{n} = {q} must be > 1")));
            }
        }
        // The affine node inherits the parameter of the highest root for
        // reduced types; BC types carry a separate q0.
        let node = match config.type_tag() {
            TypeTag::A1 => vec![free[0], free[0]],
            TypeTag::A2 => vec![free[0]; 3],
            TypeTag::BC1 | TypeTag::BC2 => free.to_vec(),
            TypeTag::C2 | TypeTag::G2 => vec![free[1], free[0], free[1]],
        };
        Ok(Params { config, free: free.to_vec(), node })
    }

    pub fn q(&self, i: usize) -> f64 {
        self.node[i]
    }

    pub fn sqrt_q(&self, i: usize) -> f64 {
        self.node[i].sqrt()
    }

    /// `q_i^{1/2} − q_i^{−1/2}`.
    pub fn qdiff(&self, i: usize) -> f64 {
        let s = self.sqrt_q(i);
        s - 1.0 / s
    }

    /// `q_α` for a root of `R0+`.
    pub fn q_root(&self, datum: &RootDatum, k: usize) -> f64 {
        self.node[datum.positive_roots[k].param]
    }

    /// `q_w` for `w` in `W0`.
    pub fn q_weyl(&self, datum: &RootDatum, w: usize) -> f64 {
        datum.weyl[w].word.iter().map(|&i| self.node[i]).product()
    }

    /// The node values `(q0, q_n)` used by R2-class factors.
    pub fn r2_pair(&self, datum: &RootDatum, k: usize) -> (f64, f64) {
        debug_assert_eq!(datum.positive_roots[k].class, RootClass::R2);
        (self.node[0], self.node[datum.positive_roots[k].param])
    }
}
