//! The spectral side against the canonical trace.

use affine_hecke::cli::{default_points, test_elements};
use affine_hecke::plancherel::*;
use affine_hecke::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn worst_error(alg: &HeckeAlgebra, resolution: usize, elements: &[BernsteinElement]) -> f64 {
    let mut pl = Plancherel::new(alg, resolution).unwrap();
    elements
        .iter()
        .map(|h| (pl.rhs(h).unwrap().total - alg.trace_bernstein(h)).norm() / alg.trace_bernstein(h).norm().max(1.0))
        .fold(0.0, f64::max)
}

#[test]
fn identity_holds_in_every_regime() {
    for cfg in Config::ALL {
        for p in default_points(cfg) {
            let alg = match HeckeAlgebra::new(cfg, &p) {
                Ok(a) => a,
                Err(e) => panic!("{cfg} {p:?}: {e}"),
            };
            let err = match Plancherel::new(&alg, 128) {
                Err(Error::BoundaryParameters(_)) => continue,
                Err(e) => panic!("{cfg} {p:?}: {e}"),
                Ok(_) => worst_error(&alg, 128, &test_elements(&alg, 2, 1)),
            };
            assert!(err < 1e-9, "{cfg} {p:?}: {err:.2e}");
        }
    }
}

#[test]
fn identity_holds_for_sums_with_complex_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &default_points(cfg)[0]).unwrap();
        let basis = test_elements(&alg, 3, 2);
        let mut pl = Plancherel::new(&alg, 128).unwrap();
        for _ in 0..5 {
            let mut h = BernsteinElement::zero();
            for _ in 0..4 {
                let b = &basis[rng.gen_range(0..basis.len())];
                h.add_scaled(b, Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            }
            let lhs = alg.trace_bernstein(&h);
            let rhs = pl.rhs(&h).unwrap().total;
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "{cfg}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn unit_has_trace_one_and_the_masses_sum_accordingly() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &default_points(cfg)[0]).unwrap();
        let mut pl = Plancherel::new(&alg, 128).unwrap();
        let r = pl.rhs(&BernsteinElement::one()).unwrap();
        assert!((r.total - c(1.0)).norm() < 1e-10, "{cfg}: {}", r.total);
        for t in &r.breakdown {
            assert!(t.value.im.abs() < 1e-10 && t.value.re > -1e-12, "{cfg} {}: {}", t.label, t.value);
        }
    }
}

#[test]
fn moment_engine_agrees_with_pointwise_integration() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &default_points(cfg)[0]).unwrap();
        let mut pl = Plancherel::new(&alg, 256).unwrap();
        let nodes = if alg.rank() == 1 { 512 } else { 96 };
        for h in test_elements(&alg, 1, 1).iter().take(6) {
            let fast = pl.rhs(h).unwrap();
            let slow = rhs_pointwise(&alg, &pl.terms, h, nodes).unwrap();
            for (a, b) in fast.breakdown.iter().zip(&slow.breakdown) {
                assert_eq!(a.label, b.label);
                assert!((a.value - b.value).norm() < 1e-8, "{cfg} {}: {} vs {}", a.label, a.value, b.value);
            }
        }
    }
}

#[test]
fn spectral_side_converges_in_the_resolution() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &default_points(cfg)[0]).unwrap();
        let h = BernsteinElement::t_x(alg.datum.simple(1), Coweight([1, 0]));
        let a = Plancherel::new(&alg, 64).unwrap().rhs(&h).unwrap().total;
        let b = Plancherel::new(&alg, 128).unwrap().rhs(&h).unwrap().total;
        assert!((a - b).norm() < 1e-10, "{cfg}: {a} vs {b}");
    }
}

#[test]
fn resolution_below_eight_is_rejected() {
    let alg = HeckeAlgebra::new(Config::A1Q, &[2.0]).unwrap();
    assert!(matches!(Plancherel::new(&alg, 4), Err(Error::InvalidParameters(_))));
}

#[test]
fn discrete_masses_are_residues_of_the_densities() {
    for cfg in Config::ALL {
        for p in default_points(cfg) {
            let alg = HeckeAlgebra::new(cfg, &p).unwrap();
            let checks = match residue_checks(&alg) {
                Err(Error::BoundaryParameters(_)) => continue,
                r => r.unwrap(),
            };
            for ch in checks {
                assert!(ch.rel_err() < 1e-8, "{cfg} {p:?} {}: {} vs {}", ch.label, ch.constant, ch.residue);
            }
        }
    }
}

#[test]
fn principal_density_is_real_and_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &default_points(cfg)[0]).unwrap();
        let cc = principal_c(&alg);
        for _ in 0..200 {
            let v: Vec<Complex64> = (0..alg.rank()).map(|_| Complex64::from_polar(1.0, rng.gen_range(-3.1..3.1))).collect();
            let t = Character::new(&v);
            assert!(principal_c_matches(&alg, &t).unwrap() < 1e-12, "{cfg}");
            let rho = cc.density(&t).unwrap();
            assert!(rho.im.abs() < 1e-10 * rho.norm().max(1.0) && rho.re >= 0.0, "{cfg}: {rho}");
        }
    }
}

#[test]
fn moments_of_a_single_factor() {
    // ∮ dz/2πiz 1/|1 − a/z|² = 1/(1 − a²), and the m-th moment is a^|m| times that
    for a in [0.3, -0.7, 0.9] {
        let fp = FactorProduct::in_s(&[(c(a), 1)], &[]);
        let m = Moments::compute(&fp, 1, 64, 4).unwrap();
        let base = 1.0 / (1.0 - a * a);
        for k in -4i32..=4 {
            let want = base * f64::powi(a, k.abs());
            assert!((m.get(Coweight([k, 0])) - c(want)).norm() < 1e-12, "a={a} k={k}");
        }
    }
}

#[test]
fn c2_mass_vanishes_continuously_at_equal_parameters() {
    for q2 in [2.0, 3.0, 5.0] {
        let at = constants(&HeckeAlgebra::new(Config::C2Q, &[q2, q2]).unwrap())["C"];
        assert!(at.abs() < 1e-15);
        for s in [1.0 - 1e-3, 1.0 + 1e-3] {
            let alg = HeckeAlgebra::new(Config::C2Q, &[q2 * s, q2]).unwrap();
            let k = constants(&alg)["C"];
            assert!(k.abs() < 1e-3, "q2={q2} s={s}: {k}");
            // the identity still holds at the nearby points
            let err = worst_error(&alg, 128, &test_elements(&alg, 2, 1));
            assert!(err < 1e-8, "q2={q2} s={s}: {err:.2e}");
        }
    }
}

#[test]
fn boundary_parameters_are_refused() {
    // BC2 at q0 = q2 sits on the wall between its two branches
    let alg = HeckeAlgebra::new(Config::BC2Q, &[2.0, 3.0, 2.0]).unwrap();
    assert!(matches!(Plancherel::new(&alg, 64), Err(Error::BoundaryParameters(_))));
    // G2 beside, but not on, the wall q1 = q2³
    let q2: f64 = 3.0;
    let alg = HeckeAlgebra::new(Config::G2Q, &[q2.powi(3) * (1.0 + 0.1 * EPS_REGIME), q2]).unwrap();
    assert!(matches!(Plancherel::new(&alg, 64), Err(Error::BoundaryParameters(_))));
}

#[test]
fn report_fields_are_consistent() {
    let alg = HeckeAlgebra::new(Config::C2P, &[2.0, 3.0]).unwrap();
    let mut pl = Plancherel::new(&alg, 64).unwrap();
    let h = BernsteinElement::t_x(alg.datum.w0(), Coweight([1, -1]));
    let r = verify(&mut pl, &h, "x").unwrap();
    assert_eq!(r.config, "C2P");
    assert_eq!(r.params.len(), 2);
    assert!((r.abs_err - (r.lhs - r.rhs).norm()).abs() < 1e-15);
    assert!((r.rel_err - r.abs_err / r.lhs.norm().max(1.0)).abs() < 1e-15);
    let sum: Complex64 = r.breakdown.iter().map(|t| t.value).sum();
    assert!((sum - r.rhs).norm() < 1e-12);
}
