//! Root data for the nine supported (root system, lattice) configurations
//! and the finite Weyl group acting on the lattice.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{covector_apply, mat_apply, mat_mul, reflection, Coweight, Mat2, IDENTITY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    A1,
    BC1,
    A2,
    C2,
    G2,
    BC2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeTag {
    Q,
    P,
}

/// One of the nine supported configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Config {
    A1Q,
    A1P,
    BC1Q,
    A2Q,
    A2P,
    C2Q,
    C2P,
    G2Q,
    BC2Q,
}

impl Config {
    pub const ALL: [Config; 9] = [
        Config::A1Q,
        Config::A1P,
        Config::BC1Q,
        Config::A2Q,
        Config::A2P,
        Config::C2Q,
        Config::C2P,
        Config::G2Q,
        Config::BC2Q,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Config::A1Q => "A1Q",
            Config::A1P => "A1P",
            Config::BC1Q => "BC1Q",
            Config::A2Q => "A2Q",
            Config::A2P => "A2P",
            Config::C2Q => "C2Q",
            Config::C2P => "C2P",
            Config::G2Q => "G2Q",
            Config::BC2Q => "BC2Q",
        }
    }

    pub fn type_tag(self) -> TypeTag {
        match self {
            Config::A1Q | Config::A1P => TypeTag::A1,
            Config::BC1Q => TypeTag::BC1,
            Config::A2Q | Config::A2P => TypeTag::A2,
            Config::C2Q | Config::C2P => TypeTag::C2,
            Config::G2Q => TypeTag::G2,
            Config::BC2Q => TypeTag::BC2,
        }
    }

    pub fn lattice_tag(self) -> LatticeTag {
        match self {
            Config::A1P | Config::A2P | Config::C2P => LatticeTag::P,
            _ => LatticeTag::Q,
        }
    }

    pub fn from_tags(t: TypeTag, l: LatticeTag) -> Result<Config> {
        Ok(match (t, l) {
            (TypeTag::A1, LatticeTag::Q) => Config::A1Q,
            (TypeTag::A1, LatticeTag::P) => Config::A1P,
            (TypeTag::BC1, LatticeTag::Q) => Config::BC1Q,
            (TypeTag::A2, LatticeTag::Q) => Config::A2Q,
            (TypeTag::A2, LatticeTag::P) => Config::A2P,
            (TypeTag::C2, LatticeTag::Q) => Config::C2Q,
            (TypeTag::C2, LatticeTag::P) => Config::C2P,
            (TypeTag::G2, LatticeTag::Q) => Config::G2Q,
            (TypeTag::BC2, LatticeTag::Q) => Config::BC2Q,
            _ => {
                return Err(Error::UnsupportedConfiguration(format!("{t:?} with lattice {l:?}")))
            }
        })
    }

    pub fn rank(self) -> usize {
        match self.type_tag() {
            TypeTag::A1 | TypeTag::BC1 => 1,
            _ => 2,
        }
    }

    /// Names of the free parameters, in the order they are given on the command line.
    pub fn param_names(self) -> &'static [&'static str] {
        match self.type_tag() {
            TypeTag::A1 | TypeTag::A2 => &["q"],
            TypeTag::BC1 => &["q0", "q1"],
            TypeTag::C2 | TypeTag::G2 => &["q1", "q2"],
            TypeTag::BC2 => &["q0", "q1", "q2"],
        }
    }

    pub fn datum(self) -> RootDatum {
        RootDatum::build(self)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Config {
    type Err = Error;
    fn from_str(s: &str) -> Result<Config> {
        Config::ALL
            .iter()
            .copied()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::UnsupportedConfiguration(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootClass {
    R1,
    R2,
    R3,
}

/// A positive root.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub name: &'static str,
    /// `λ ↦ ⟨λ, α⟩` on lattice coordinates.
    pub functional: [i32; 2],
    pub coroot: Coweight,
    /// `α∨/2` for roots of class R2.
    pub half_coroot: Option<Coweight>,
    pub class: RootClass,
    /// Parameter slot in `0..=n`.
    pub param: usize,
}

/// Root of the reduced system `R1 ∪ R3` that cuts out the alcoves.
#[derive(Clone, Debug, PartialEq)]
pub struct WallRoot {
    pub functional: [i32; 2],
    pub coroot: Coweight,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylElement {
    pub index: usize,
    /// Generator indices in `1..=n`.
    pub word: Vec<usize>,
    pub matrix: Mat2,
    pub length: usize,
}

/// Static data for one configuration.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub config: Config,
    pub rank: usize,
    pub basis_labels: Vec<&'static str>,
    /// `R0+`, simple roots first.
    pub positive_roots: Vec<Root>,
    /// The class R3 roots `2α`, for BC types only.
    pub r3_roots: Vec<Root>,
    pub wall_roots: Vec<WallRoot>,
    /// Index of `φ` in `wall_roots`.
    pub highest_wall: usize,
    pub coxeter: [[u32; 2]; 2],
    pub simple_reflections: Vec<Mat2>,
    pub weyl: Vec<WeylElement>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    simple_index: Vec<usize>,
    by_matrix: HashMap<Mat2, usize>,
    by_functional: HashMap<[i32; 2], (usize, bool)>,
    rho_check: Coweight,
}

type RootSpec = (&'static str, [i32; 2], [i32; 2], RootClass, usize);

fn table(config: Config) -> (Vec<&'static str>, Vec<RootSpec>, [i32; 2], [i32; 2], u32) {
    use RootClass::*;
    // (labels, roots, φ functional, φ∨, m12)
    match config {
        Config::A1Q => (vec!["a1v"], vec![("a1", [2, 0], [1, 0], R1, 1)], [2, 0], [1, 0], 1),
        Config::A1P => (vec!["w1"], vec![("a1", [1, 0], [2, 0], R1, 1)], [1, 0], [2, 0], 1),
        Config::BC1Q => (vec!["a1v/2"], vec![("a1", [1, 0], [2, 0], R2, 1)], [2, 0], [1, 0], 1),
        Config::A2Q => (
            vec!["a1v", "a2v"],
            vec![
                ("a1", [2, -1], [1, 0], R1, 1),
                ("a2", [-1, 2], [0, 1], R1, 2),
                ("a1+a2", [1, 1], [1, 1], R1, 1),
            ],
            [1, 1],
            [1, 1],
            3,
        ),
        Config::A2P => (
            vec!["w1", "w2"],
            vec![
                ("a1", [1, 0], [2, -1], R1, 1),
                ("a2", [0, 1], [-1, 2], R1, 2),
                ("a1+a2", [1, 1], [1, 1], R1, 1),
            ],
            [1, 1],
            [1, 1],
            3,
        ),
        Config::C2Q => (
            vec!["a1v", "a2v"],
            vec![
                ("a1", [2, -1], [1, 0], R1, 1),
                ("a2", [-2, 2], [0, 1], R1, 2),
                ("a1+a2", [0, 1], [1, 2], R1, 1),
                ("2a1+a2", [2, 0], [1, 1], R1, 2),
            ],
            [2, 0],
            [1, 1],
            4,
        ),
        Config::C2P => (
            vec!["w1", "w2"],
            vec![
                ("a1", [1, 0], [2, -2], R1, 1),
                ("a2", [0, 1], [-1, 2], R1, 2),
                ("a1+a2", [1, 1], [0, 2], R1, 1),
                ("2a1+a2", [2, 1], [1, 0], R1, 2),
            ],
            [2, 1],
            [1, 0],
            4,
        ),
        Config::G2Q => (
            vec!["a1v", "a2v"],
            vec![
                ("a1", [2, -1], [1, 0], R1, 1),
                ("a2", [-3, 2], [0, 1], R1, 2),
                ("a1+a2", [-1, 1], [1, 3], R1, 1),
                ("2a1+a2", [1, 0], [2, 3], R1, 1),
                ("3a1+a2", [3, -1], [1, 1], R1, 2),
                ("3a1+2a2", [0, 1], [1, 2], R1, 2),
            ],
            [0, 1],
            [1, 2],
            6,
        ),
        Config::BC2Q => (
            vec!["a1v", "a2v/2"],
            vec![
                ("a1", [2, -1], [1, 0], R1, 1),
                ("a2", [-1, 1], [0, 2], R2, 2),
                ("a1+a2", [1, 0], [2, 2], R2, 2),
                ("a1+2a2", [0, 1], [1, 2], R1, 1),
            ],
            [2, 0],
            [1, 1],
            4,
        ),
    }
}

/// Builds the datum for a `(type, lattice)` pair.
pub fn build_root_datum(t: TypeTag, l: LatticeTag) -> Result<RootDatum> {
    Ok(RootDatum::build(Config::from_tags(t, l)?))
}

impl RootDatum {
    pub fn build(config: Config) -> RootDatum {
        let rank = config.rank();
        let (basis_labels, specs, phi_f, phi_c, m12) = table(config);
        let positive_roots: Vec<Root> = specs
            .iter()
            .map(|&(name, f, c, class, param)| {
                let coroot = Coweight(c);
                let half_coroot = (class == RootClass::R2).then(|| Coweight([c[0] / 2, c[1] / 2]));
                Root { name, functional: f, coroot, half_coroot, class, param }
            })
            .collect();
        let r3_roots: Vec<Root> = positive_roots
            .iter()
            .filter(|r| r.class == RootClass::R2)
            .map(|r| Root {
                name: "2*",
                functional: [2 * r.functional[0], 2 * r.functional[1]],
                coroot: r.half_coroot.unwrap(),
                half_coroot: None,
                class: RootClass::R3,
                param: r.param,
            })
            .collect();
        let wall_roots: Vec<WallRoot> = positive_roots
            .iter()
            .map(|r| match r.class {
                RootClass::R2 => WallRoot {
                    functional: [2 * r.functional[0], 2 * r.functional[1]],
                    coroot: r.half_coroot.unwrap(),
                },
                _ => WallRoot { functional: r.functional, coroot: r.coroot },
            })
            .collect();
        let highest_wall = wall_roots
            .iter()
            .position(|w| w.functional == phi_f && w.coroot == Coweight(phi_c))
            .expect("highest root present in table");
        let simple_reflections: Vec<Mat2> = positive_roots[..rank]
            .iter()
            .map(|r| reflection(r.functional, r.coroot))
            .collect();
        let mut coxeter = [[1u32, m12], [m12, 1]];
        if rank == 1 {
            coxeter = [[1, 1], [1, 1]];
        }

        let mut rho_check = Coweight::ZERO;
        for w in &wall_roots {
            rho_check += w.coroot;
        }

        // Breadth-first enumeration; within a layer words are sorted lexicographically.
        let mut weyl: Vec<WeylElement> = vec![WeylElement { index: 0, word: vec![], matrix: IDENTITY, length: 0 }];
        let mut by_matrix: HashMap<Mat2, usize> = HashMap::new();
        by_matrix.insert(IDENTITY, 0);
        let mut layer = vec![0usize];
        let mut len = 0;
        while !layer.is_empty() {
            len += 1;
            let mut cands: Vec<(Vec<usize>, Mat2)> = Vec::new();
            for &e in &layer {
                for i in 0..rank {
                    let m = mat_mul(&weyl[e].matrix, &simple_reflections[i]);
                    if by_matrix.contains_key(&m) {
                        continue;
                    }
                    let mut word = weyl[e].word.clone();
                    word.push(i + 1);
                    cands.push((word, m));
                }
            }
            cands.sort();
            layer = Vec::new();
            for (word, m) in cands {
                if by_matrix.contains_key(&m) {
                    continue;
                }
                let index = weyl.len();
                by_matrix.insert(m, index);
                weyl.push(WeylElement { index, word, matrix: m, length: len });
                layer.push(index);
            }
        }
        let n = weyl.len();
        let mut mult = vec![vec![0; n]; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                let m = mat_mul(&weyl[a].matrix, &weyl[b].matrix);
                mult[a][b] = by_matrix[&m];
                if mult[a][b] == 0 {
                    inv[a] = b;
                }
            }
        }
        let simple_index = simple_reflections.iter().map(|m| by_matrix[m]).collect();
        let mut by_functional = HashMap::new();
        for (k, r) in positive_roots.iter().enumerate() {
            by_functional.insert(r.functional, (k, true));
            by_functional.insert([-r.functional[0], -r.functional[1]], (k, false));
        }
        RootDatum {
            config,
            rank,
            basis_labels,
            positive_roots,
            r3_roots,
            wall_roots,
            highest_wall,
            coxeter,
            simple_reflections,
            weyl,
            mult,
            inv,
            simple_index,
            by_matrix,
            by_functional,
            rho_check,
        }
    }

    pub fn order(&self) -> usize {
        self.weyl.len()
    }

    /// Index of the longest element.
    pub fn w0(&self) -> usize {
        self.weyl.len() - 1
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Index of `s_i` for `i` in `1..=n`.
    pub fn simple(&self, i: usize) -> usize {
        self.simple_index[i - 1]
    }

    pub fn matrix(&self, w: usize) -> &Mat2 {
        &self.weyl[w].matrix
    }

    pub fn length(&self, w: usize) -> usize {
        self.weyl[w].length
    }

    pub fn index_of_matrix(&self, m: &Mat2) -> Option<usize> {
        self.by_matrix.get(m).copied()
    }

    pub fn index_of_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &i| self.mul(acc, self.simple(i)))
    }

    pub fn act(&self, w: usize, v: Coweight) -> Coweight {
        mat_apply(self.matrix(w), v)
    }

    /// Functional of `wα` given the functional of `α`.
    pub fn act_functional(&self, w: usize, f: [i32; 2]) -> [i32; 2] {
        covector_apply(f, self.matrix(self.inverse(w)))
    }

    /// Looks up a root of `R0` by functional: `(index in R0+, is_positive)`.
    pub fn root_of_functional(&self, f: [i32; 2]) -> Option<(usize, bool)> {
        self.by_functional.get(&f).copied()
    }

    /// Whether a functional is positive on the dominant chamber.
    pub fn functional_positive(&self, f: [i32; 2]) -> bool {
        self.rho_check.pair(f) > 0
    }

    /// `⟨λ, α_i⟩` for simple roots, i.e. coordinates in the fundamental coweights.
    pub fn omega_coords(&self, v: Coweight) -> [i32; 2] {
        let mut out = [0; 2];
        for i in 0..self.rank {
            out[i] = v.pair(self.positive_roots[i].functional);
        }
        out
    }

    pub fn is_dominant(&self, v: Coweight) -> bool {
        self.omega_coords(v).iter().all(|&c| c >= 0)
    }

    /// `R(w) = {α ∈ R0+ : w⁻¹α < 0}`.
    pub fn inversion_set(&self, w: usize) -> Vec<usize> {
        let winv = self.inverse(w);
        (0..self.positive_roots.len())
            .filter(|&k| {
                let f = self.act_functional(winv, self.positive_roots[k].functional);
                !self.root_of_functional(f).expect("root image is a root").1
            })
            .collect()
    }

    /// `R(w)` from the running product `{α_{i1}, s_{i1}α_{i2}, …}` along a word.
    pub fn inversion_set_from_word(&self, word: &[usize]) -> Vec<usize> {
        let mut prefix = 0;
        let mut out = Vec::new();
        for &i in word {
            let f = self.act_functional(prefix, self.positive_roots[i - 1].functional);
            out.push(self.root_of_functional(f).expect("root image is a root").0);
            prefix = self.mul(prefix, self.simple(i));
        }
        out.sort_unstable();
        out
    }

    /// Whether `ℓ(s_i w) > ℓ(w)`.
    pub fn left_ascent(&self, i: usize, w: usize) -> bool {
        self.length(self.mul(self.simple(i), w)) > self.length(w)
    }

    /// Whether `ℓ(w s_i) > ℓ(w)`.
    pub fn right_ascent(&self, w: usize, i: usize) -> bool {
        self.length(self.mul(w, self.simple(i))) > self.length(w)
    }

    /// Reflection `s_α` for a root of `R0+` as a group element.
    pub fn reflection_of(&self, k: usize) -> usize {
        let r = &self.positive_roots[k];
        self.by_matrix[&reflection(r.functional, r.coroot)]
    }

    pub fn highest_coroot(&self) -> Coweight {
        self.wall_roots[self.highest_wall].coroot
    }

    pub fn highest_functional(&self) -> [i32; 2] {
        self.wall_roots[self.highest_wall].functional
    }

    /// `s_φ` as a group element.
    pub fn s_phi(&self) -> usize {
        let w = &self.wall_roots[self.highest_wall];
        self.by_matrix[&reflection(w.functional, w.coroot)]
    }

    /// Positive roots of `R0` paired with their parameter, including the R3 roots.
    pub fn all_positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.positive_roots.iter().chain(self.r3_roots.iter())
    }

    pub fn format_word(&self, w: usize) -> String {
        if self.weyl[w].word.is_empty() {
            return "1".to_string();
        }
        self.weyl[w].word.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join("")
    }
}
