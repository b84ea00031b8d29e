//! Explicit calibrated modules compared entrywise with hand-computed matrices.
//! Each check panics on mismatch.

use affine_hecke::reps::{calibrated_module, g2_pi7_plus, one_dim_catalog, CMat, Representation};
use affine_hecke::*;
use num_complex::Complex64;

const TOL: f64 = 1e-10;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn mat(rows: &[&[f64]], scale: f64) -> CMat {
    let n = rows.len();
    CMat::from_fn(n, n, |i, j| c(rows[i][j] * scale))
}

fn diag(v: &[f64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| c(x))))
}

fn assert_close(what: &str, got: &CMat, want: &CMat) {
    let err = (got - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err < TOL, "{what}: max entry error {err:e}\ngot {got}\nwant {want}");
}

fn x_of(rep: &Representation, e: [i32; 2]) -> CMat {
    rep.x_pow(Coweight(e))
}

pub fn c2p_two_dimensional_module_at_sign_character() {
    for (q1, q2) in [(2.0, 3.0), (4.0, 2.0)] {
        let alg = HeckeAlgebra::new(Config::C2P, &[q1, q2]).unwrap();
        let t = Character::new(&[c(-1.0 / q1), c(q1.powf(-0.5))]);
        let rep = calibrated_module(&alg, &t, &[], "m").unwrap();
        assert_eq!(rep.dim, 2);
        let i2 = diag(&[1.0, 1.0]);
        assert_close("T1", &rep.t[0], &(&i2 * c(-q1.powf(-0.5))));
        let a = 1.0 - 1.0 / q2;
        let b = 1.0 + 1.0 / q2;
        assert_close("T2", &rep.t[1], &mat(&[&[a, b], &[b, a]], q2.sqrt() / 2.0));
        assert_close("x^w1", &rep.x[0], &(&i2 * c(-1.0 / q1)));
        assert_close("x^w2", &rep.x[1], &diag(&[q1.powf(-0.5), -q1.powf(-0.5)]));
        // α1∨ = 2ω1 − 2ω2, α2∨ = −ω1 + 2ω2
        assert_close("x^a1v", &x_of(&rep, [2, -2]), &(&i2 * c(1.0 / q1)));
        assert_close("x^a2v", &x_of(&rep, [-1, 2]), &(&i2 * c(-1.0)));
        assert!(rep.check_relations(&alg).max() < 1e-12);
    }
}

pub fn c2p_sign_module_restricts_to_two_one_dimensionals() {
    let (q1, q2) = (2.0, 3.0);
    let p = HeckeAlgebra::new(Config::C2P, &[q1, q2]).unwrap();
    let q = HeckeAlgebra::new(Config::C2Q, &[q1, q2]).unwrap();
    let t = Character::new(&[c(-1.0 / q1), c(q1.powf(-0.5))]);
    let rep = calibrated_module(&p, &t, &[], "m").unwrap();
    let cat = one_dim_catalog(&q);
    let (r4, r5) = (&cat["pi4"], &cat["pi5"]);
    for w in 0..q.datum.order() {
        for (a, b) in [(0, 0), (1, 0), (0, 1), (-1, 2), (2, -1)] {
            let hq = BernsteinElement::t_x(w, Coweight([a, b]));
            let hp = BernsteinElement::t_x(w, Coweight([2 * a - b, -2 * a + 2 * b]));
            let lhs = rep.char_value(&p.datum, &hp);
            let rhs = r4.char_value(&q.datum, &hq) + r5.char_value(&q.datum, &hq);
            assert!((lhs - rhs).norm() < 1e-10, "w={w} λ=({a},{b}): {lhs} vs {rhs}");
        }
    }
}

fn c2_three_dim(q1: f64, q2: f64) -> (CMat, CMat, CMat, CMat) {
    let t1 = mat(
        &[
            &[(1.0 - 1.0 / q1) / (1.0 - q1 / (q2 * q2)), (1.0 - q2 * q2 / (q1 * q1)) / (1.0 - q2 * q2 / q1), 0.0],
            &[(1.0 - 1.0 / (q2 * q2)) / (1.0 - q1 / (q2 * q2)), (1.0 - 1.0 / q1) / (1.0 - q2 * q2 / q1), 0.0],
            &[0.0, 0.0, -1.0 / q1],
        ],
        q1.sqrt(),
    );
    let t2 = mat(
        &[
            &[-1.0 / q2, 0.0, 0.0],
            &[0.0, (1.0 - 1.0 / q2) / (1.0 - q1 / q2), (1.0 - 1.0 / q1) / (1.0 - q2 / q1)],
            &[0.0, (1.0 - q1 / (q2 * q2)) / (1.0 - q1 / q2), (1.0 - 1.0 / q2) / (1.0 - q2 / q1)],
        ],
        q2.sqrt(),
    );
    let xa1 = diag(&[q2 * q2 / q1, q1 / (q2 * q2), 1.0 / q1]);
    let xa2 = diag(&[1.0 / q2, q2 / q1, q1 / q2]);
    (t1, t2, xa1, xa2)
}

pub fn c2q_three_dimensional_module() {
    // (4, 2) sits on q1 = q2², where this character is not regular
    for (q1, q2) in [(2.0, 3.0), (5.0, 2.0)] {
        let alg = HeckeAlgebra::new(Config::C2Q, &[q1, q2]).unwrap();
        let t = Character::new(&[c(1.0 / q1), c(q2)]);
        let a2 = alg.datum.positive_roots.iter().position(|r| r.name == "a2").unwrap();
        let rep = calibrated_module(&alg, &t, &[a2], "m").unwrap();
        let (t1, t2, xa1, xa2) = c2_three_dim(q1, q2);
        assert_close("T1", &rep.t[0], &t1);
        assert_close("T2", &rep.t[1], &t2);
        assert_close("x^a1v", &rep.x[0], &xa1);
        assert_close("x^a2v", &rep.x[1], &xa2);
        assert!((rep.t[1][(0, 0)] - c(-q2.powf(-0.5))).norm() < TOL);
    }
}

pub fn c2p_three_dimensional_module_both_lifts() {
    for (q1, q2) in [(2.0, 3.0), (5.0, 2.0)] {
        let alg = HeckeAlgebra::new(Config::C2P, &[q1, q2]).unwrap();
        for sign in [1.0, -1.0] {
            let t = Character::new(&[c(q2 / q1), c(sign * q2 / q1.sqrt())]);
            let a2 = alg.datum.positive_roots.iter().position(|r| r.name == "a2").unwrap();
            let rep = calibrated_module(&alg, &t, &[a2], "m").unwrap();
            let (t1, t2, xa1, xa2) = c2_three_dim(q1, q2);
            assert_close("T1", &rep.t[0], &t1);
            assert_close("T2", &rep.t[1], &t2);
            assert_close("x^w1", &rep.x[0], &diag(&[q2 / q1, 1.0 / q2, 1.0 / q2]));
            let s = sign / q1.sqrt();
            assert_close("x^w2", &rep.x[1], &diag(&[s, s, sign * q1.sqrt() / q2]));
            assert_close("x^a1v", &x_of(&rep, [2, -2]), &xa1);
            assert_close("x^a2v", &x_of(&rep, [-1, 2]), &xa2);
        }
    }
}

pub fn g2_three_dimensional_module_generic() {
    for (q1, q2) in [(2.0f64, 3.0f64), (4.0, 2.0)] {
        let alg = HeckeAlgebra::new(Config::G2Q, &[q1, q2]).unwrap();
        let rep = g2_pi7_plus(&alg).unwrap();
        let (r1, r2) = (q1.sqrt(), q2.sqrt());
        let t1 = mat(
            &[
                &[(1.0 - 1.0 / q1) / (1.0 - r1 / r2.powi(3)), (1.0 - r2.powi(3) / r1.powi(3)) / (1.0 - r2.powi(3) / r1), 0.0],
                &[(1.0 - 1.0 / (r1 * r2.powi(3))) / (1.0 - r1 / r2.powi(3)), (1.0 - 1.0 / q1) / (1.0 - r2.powi(3) / r1), 0.0],
                &[0.0, 0.0, -1.0 / q1],
            ],
            r1,
        );
        let t2 = mat(
            &[
                &[-1.0 / q2, 0.0, 0.0],
                &[0.0, (1.0 - 1.0 / q2) / (1.0 - r1 / r2), (1.0 - r1 / r2.powi(3)) / (1.0 - r2 / r1)],
                &[0.0, (1.0 - 1.0 / (r1 * r2)) / (1.0 - r1 / r2), (1.0 - 1.0 / q2) / (1.0 - r2 / r1)],
            ],
            r2,
        );
        assert_close("T1", &rep.t[0], &t1);
        assert_close("T2", &rep.t[1], &t2);
        assert_close("x^a1v", &rep.x[0], &diag(&[r2.powi(3) / r1, r1 / r2.powi(3), 1.0 / q1]));
        assert_close("x^a2v", &rep.x[1], &diag(&[1.0 / q2, r2 / r1, r1 / r2]));
        assert!(rep.check_relations(&alg).max() < 1e-12);
    }
}

pub fn g2_equal_parameter_specialization() {
    for q in [2.0f64, 3.0, 5.0] {
        let alg = HeckeAlgebra::new(Config::G2Q, &[q, q]).unwrap();
        let rep = g2_pi7_plus(&alg).unwrap();
        let t1 = mat(
            &[
                &[1.0, 3.0 / (q - 1.0), 3.0 / (q - 1.0)],
                &[(q + 1.0) / q, (2.0 * q + 1.0) / (q * (q - 1.0)), 3.0 / (q - 1.0)],
                &[-(q + 1.0) / q, -3.0 / (q - 1.0), -(4.0 * q - 1.0) / (q * (q - 1.0))],
            ],
            q.sqrt(),
        );
        let t2 = mat(&[&[-1.0 / q, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, -2.0 / q, -1.0 / q]], q.sqrt());
        let xa1 = mat(&[&[q, 0.0, 0.0], &[0.0, -2.0 / q, -3.0 / q], &[0.0, 3.0 / q, 4.0 / q]], 1.0);
        let xa2 = mat(&[&[1.0 / q, 0.0, 0.0], &[0.0, 3.0, 2.0], &[0.0, -2.0, -1.0]], 1.0);
        assert_close("T1", &rep.t[0], &t1);
        assert_close("T2", &rep.t[1], &t2);
        assert_close("x^a1v", &rep.x[0], &xa1);
        assert_close("x^a2v", &rep.x[1], &xa2);
        assert!(rep.check_relations(&alg).max() < 1e-10);
    }
}

pub fn g2_cubic_specialization_is_a_module() {
    for q in [2.0f64, 3.0] {
        let alg = HeckeAlgebra::new(Config::G2Q, &[q.powi(3), q]).unwrap();
        let rep = g2_pi7_plus(&alg).unwrap();
        assert_eq!(rep.dim, 3);
        assert!(rep.check_relations(&alg).max() < 1e-9);
    }
}

pub fn g2_trace_continuous_into_equal_parameters() {
    let q = 2.0;
    let at = |q1: f64| {
        let alg = HeckeAlgebra::new(Config::G2Q, &[q1, q]).unwrap();
        g2_pi7_plus(&alg).unwrap().x[0].trace()
    };
    let fixture = at(q);
    for e in [1e-6, -1e-6] {
        assert!((at(q * (1.0 + e)) - fixture).norm() < 1e-4);
    }
}
