//! The two multiplication engines, their relations, and the trace axioms.

use affine_hecke::affine_weyl::{awe_inverse, generator, translation, AffineWeylElement};
use affine_hecke::laurent::Laurent;
use affine_hecke::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn points(cfg: Config) -> Vec<f64> {
    match cfg.param_names().len() {
        1 => vec![2.5],
        2 => vec![2.0, 3.0],
        _ => vec![2.0, 3.0, 5.0],
    }
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_bernstein(alg: &HeckeAlgebra, rng: &mut ChaCha8Rng, terms: usize, reach: i32) -> BernsteinElement {
    let d = &alg.datum;
    let r2 = if d.rank == 2 { reach } else { 0 };
    let mut out = BernsteinElement::zero();
    for _ in 0..terms {
        let w = rng.gen_range(0..d.order());
        let e = Coweight([rng.gen_range(-reach..=reach), rng.gen_range(-r2..=r2)]);
        out.add_t_poly(w, &Laurent::x(e), random_coeff(rng));
    }
    out
}

fn random_coxeter(alg: &HeckeAlgebra, rng: &mut ChaCha8Rng, terms: usize, reach: i32) -> CoxeterElement {
    let d = &alg.datum;
    let r2 = if d.rank == 2 { reach } else { 0 };
    let mut out = CoxeterElement::zero();
    for _ in 0..terms {
        let a = AffineWeylElement::new(
            Coweight([rng.gen_range(-reach..=reach), rng.gen_range(-r2..=r2)]),
            rng.gen_range(0..d.order()),
        );
        out.add_term(a, random_coeff(rng));
    }
    out
}

#[test]
fn quadratic_relation_in_both_engines() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        for i in 0..=alg.rank() {
            let t = alg.bern_generator(i);
            let mut want = BernsteinElement::one();
            want.add_scaled(&t, c(alg.qdiff(i)));
            assert!(alg.bernstein_mult(&t, &t).distance(&want) < TOL, "{cfg} Bernstein T{i}");

            let tc = CoxeterElement::basis(generator(&alg.datum, i));
            let mut want = CoxeterElement::basis(AffineWeylElement::IDENTITY);
            want.add_scaled(&tc, c(alg.qdiff(i)));
            assert!(alg.coxeter_mult(&tc, &tc).distance(&want) < TOL, "{cfg} Coxeter T{i}");
        }
    }
}

#[test]
fn braid_relations_including_affine_node() {
    for cfg in [Config::A2Q, Config::C2Q, Config::C2P, Config::G2Q, Config::BC2Q] {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let d = &alg.datum;
        for i in 0..=2 {
            for j in (i + 1)..=2 {
                // order of s_i s_j in the affine Weyl group
                let (si, sj) = (generator(d, i), generator(d, j));
                let mut m = 1;
                let mut p = affine_weyl::awe_mult(d, si, sj);
                while !p.is_identity() && m < 7 {
                    p = affine_weyl::awe_mult(d, p, affine_weyl::awe_mult(d, si, sj));
                    m += 1;
                }
                if m >= 7 {
                    continue;
                }
                let word = |a: usize, b: usize| {
                    (0..m).fold(BernsteinElement::one(), |acc, k| {
                        alg.bernstein_mult(&acc, &alg.bern_generator(if k % 2 == 0 { a } else { b }))
                    })
                };
                assert!(word(i, j).distance(&word(j, i)) < TOL, "{cfg}: braid ({i},{j}) of order {m}");
            }
        }
    }
}

/// `T x = x⁻¹ T + (correction)`, checked by moving `x⁻¹` to the right of `T`.
fn check_rank_one(alg: &HeckeAlgebra, correction: &Laurent) {
    let t = BernsteinElement::t(1);
    let mut rhs = alg.bernstein_mult(&BernsteinElement::x(Coweight([-1, 0])), &t);
    rhs.add_t_poly(0, correction, c(1.0));
    let lhs = BernsteinElement::t_x(1, Coweight([1, 0]));
    assert!(lhs.distance(&rhs) < TOL, "{}", alg.datum.config);
}

#[test]
fn rank_one_bernstein_relations() {
    let q: f64 = 3.0;
    let qd = q.sqrt() - 1.0 / q.sqrt();
    let x = |k: i32| Laurent::x(Coweight([k, 0]));

    let a1q = HeckeAlgebra::new(Config::A1Q, &[q]).unwrap();
    check_rank_one(&a1q, &(&x(0) + &x(1)).scale(c(qd)));

    let a1p = HeckeAlgebra::new(Config::A1P, &[q]).unwrap();
    check_rank_one(&a1p, &x(1).scale(c(qd)));

    let (q0, q1): (f64, f64) = (5.0, 3.0);
    let bc1 = HeckeAlgebra::new(Config::BC1Q, &[q0, q1]).unwrap();
    assert_eq!(bc1.params.q(1), q1, "parameter order is (q0, q1)");
    let mut corr = x(1).scale(c(q1.sqrt() - 1.0 / q1.sqrt()));
    corr.add_term(Coweight([0, 0]), c(q0.sqrt() - 1.0 / q0.sqrt()));
    check_rank_one(&bc1, &corr);
}

#[test]
fn engines_agree_on_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        for case in 0..100 {
            let a = random_bernstein(&alg, &mut rng, 3, 2);
            let b = random_bernstein(&alg, &mut rng, 3, 2);
            let via_bernstein = alg.bernstein_to_coxeter(&alg.bernstein_mult(&a, &b));
            let via_coxeter = alg.coxeter_mult(&alg.bernstein_to_coxeter(&a), &alg.bernstein_to_coxeter(&b));
            let scale = 1.0 + via_coxeter.max_abs();
            assert!(via_bernstein.distance(&via_coxeter) < TOL * scale, "{cfg} case {case}");
        }
    }
}

#[test]
fn lattice_part_is_commutative_and_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let r2 = if alg.rank() == 2 { 2 } else { 0 };
        for _ in 0..20 {
            let l = Coweight([rng.gen_range(-2..=2), rng.gen_range(-r2..=r2)]);
            let m = Coweight([rng.gen_range(-2..=2), rng.gen_range(-r2..=r2)]);
            let prod = alg.coxeter_mult(&alg.x_coxeter(l), &alg.x_coxeter(m));
            assert!(prod.distance(&alg.x_coxeter(l + m)) < TOL, "{cfg}");
        }
    }
}

#[test]
fn dominant_monomials_are_translations() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let d = &alg.datum;
        let r2 = if d.rank == 2 { 3 } else { 0 };
        for a in 0..=3 {
            for b in 0..=r2 {
                let l = Coweight([a, b]);
                if !d.is_dominant(l) {
                    continue;
                }
                let t = translation(l);
                let want = CoxeterElement::basis(t);
                assert!(alg.x_coxeter(l).distance(&want) < TOL, "{cfg} {l:?}");
            }
        }
    }
}

#[test]
fn trace_orthogonality() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let d = &alg.datum;
        for _ in 0..100 {
            let u = random_coxeter(&alg, &mut rng, 1, 2).sorted()[0].0.to_owned();
            let v = if rng.gen_bool(0.5) { u } else { random_coxeter(&alg, &mut rng, 1, 2).sorted()[0].0.to_owned() };
            let tv_star = alg.star(&CoxeterElement::basis(v));
            assert_eq!(tv_star.sorted()[0].0, &awe_inverse(d, v));
            let tr = alg.trace(&alg.coxeter_mult(&CoxeterElement::basis(u), &tv_star));
            let want = if u == v { 1.0 } else { 0.0 };
            assert!((tr - c(want)).norm() < TOL, "{cfg}: Tr(T_u T_v*) for {u:?}, {v:?}");
        }
    }
}

#[test]
fn trace_is_symmetric_and_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        for _ in 0..100 {
            let a = random_coxeter(&alg, &mut rng, 3, 2);
            let b = random_coxeter(&alg, &mut rng, 3, 2);
            let ab = alg.trace(&alg.coxeter_mult(&a, &b));
            let ba = alg.trace(&alg.coxeter_mult(&b, &a));
            assert!((ab - ba).norm() < TOL * (1.0 + ab.norm()), "{cfg}: Tr(ab) = Tr(ba)");
            let aa = alg.trace(&alg.coxeter_mult(&a, &alg.star(&a)));
            let norm2: f64 = a.sorted().iter().map(|(_, z)| z.norm_sqr()).sum();
            assert!((aa - c(norm2)).norm() < TOL * (1.0 + norm2), "{cfg}: Tr(aa*) = Σ|c_w|²");
        }
    }
}

#[test]
fn symmetric_polynomials_are_central() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let d = &alg.datum;
        for _ in 0..100 {
            let r2 = if d.rank == 2 { 2 } else { 0 };
            let l = Coweight([rng.gen_range(-2..=2), rng.gen_range(-r2..=r2)]);
            let mut z = Laurent::zero();
            for w in 0..d.order() {
                z.add_term(d.act(w, l), c(1.0));
            }
            let z = BernsteinElement::from_poly(z);
            let h = random_bernstein(&alg, &mut rng, 2, 1);
            let zh = alg.bernstein_mult(&z, &h);
            let hz = alg.bernstein_mult(&h, &z);
            assert!(zh.distance(&hz) < TOL * (1.0 + zh.max_abs()), "{cfg}");
            let (tzh, thz) = (alg.trace_bernstein(&zh), alg.trace_bernstein(&hz));
            assert!((tzh - thz).norm() < TOL * (1.0 + tzh.norm()), "{cfg}");
        }
    }
}

#[test]
fn bernstein_trace_matches_coxeter_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        for _ in 0..100 {
            let h = random_bernstein(&alg, &mut rng, 4, 2);
            let a = alg.trace_bernstein(&h);
            let b = alg.trace(&alg.bernstein_to_coxeter(&h));
            assert!((a - b).norm() < TOL * (1.0 + a.norm()), "{cfg}");
        }
    }
}

#[test]
fn trace_of_finite_basis_is_delta() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        for w in 0..alg.datum.order() {
            let tr = alg.trace_bernstein(&BernsteinElement::t(w));
            assert!((tr - c(if w == 0 { 1.0 } else { 0.0 })).norm() < TOL, "{cfg}");
        }
    }
}

#[test]
fn tau_identities() {
    for cfg in Config::ALL {
        let alg = HeckeAlgebra::new(cfg, &points(cfg)).unwrap();
        let d = &alg.datum;
        for i in 1..=d.rank {
            let t = alg.tau_i(i);
            let sq = alg.bernstein_mult(&t, &t);
            assert!(sq.distance(&alg.tau_square_rhs(i)) < 1e-10, "{cfg}: τ_{i}²");
            // τ_i x^λ = x^{s_i λ} τ_i
            for l in [Coweight([1, 0]), Coweight([0, 1]), Coweight([2, -1])] {
                let l = if d.rank == 1 { Coweight([l.0[0], 0]) } else { l };
                let lhs = alg.bernstein_mult(&t, &BernsteinElement::x(l));
                let rhs = alg.bernstein_mult(&BernsteinElement::x(d.act(d.simple(i), l)), &t);
                assert!(lhs.distance(&rhs) < 1e-10, "{cfg}: τ_{i} intertwines");
            }
        }
        if d.rank == 2 {
            let m = d.coxeter[0][1] as usize;
            let a: Vec<usize> = (0..m).map(|k| 1 + k % 2).collect();
            let b: Vec<usize> = (0..m).map(|k| 2 - k % 2).collect();
            assert!(alg.tau_word(&a).distance(&alg.tau_word(&b)) < 1e-10, "{cfg}: τ braid");
        }
    }
}
