use affine_hecke::expr::{parse_element, Expr};
use affine_hecke::plancherel::{principal_c, FactorProduct, Moments};
use affine_hecke::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> impl Strategy<Value = Config> {
    prop::sample::select(Config::ALL.to_vec())
}

/// Free parameters in `[1.2, 9]`, which stay off every special wall with
/// probability one.
fn params(cfg: Config) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.2f64..9.0, cfg.param_names().len())
}

fn literal() -> impl Strategy<Value = Expr> {
    (0u32..100_000, any::<bool>()).prop_map(|(n, imag)| {
        let v = n as f64 / 100.0;
        Expr::Num(if imag { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) })
    })
}

fn expr(rank: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        literal(),
        (0..=rank).prop_map(Expr::Gen),
        prop::collection::vec(-3i32..=3, rank).prop_map(Expr::Mono),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner, 0u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
        ]
    })
}

fn unit_torus(rank: usize) -> impl Strategy<Value = Character> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, rank)
        .prop_map(|th| Character::new(&th.iter().map(|&t| Complex64::from_polar(1.0, t)).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn printing_then_parsing_is_the_identity((rank, e) in (1usize..=2).prop_flat_map(|r| (Just(r), expr(r)))) {
        let printed = e.to_string();
        prop_assert_eq!(parse_element(&printed, rank), Ok(e), "{}", printed);
    }

    #[test]
    fn generators_satisfy_the_quadratic_relation((cfg, p) in config().prop_flat_map(|c| (Just(c), params(c))), i in 0usize..=2) {
        let alg = HeckeAlgebra::new(cfg, &p).unwrap();
        let i = i.min(alg.rank());
        let q = alg.params.q(i);
        let t = alg.bern_generator(i);
        let mut rhs = BernsteinElement::one();
        rhs.add_scaled(&t, Complex64::new(q.sqrt() - 1.0 / q.sqrt(), 0.0));
        prop_assert!(alg.bernstein_mult(&t, &t).distance(&rhs) < 1e-10 * q);
    }

    #[test]
    fn principal_density_is_nonnegative_on_the_torus(
        (cfg, p, t) in config().prop_flat_map(|c| (Just(c), params(c), unit_torus(c.datum().rank)))
    ) {
        let alg = HeckeAlgebra::new(cfg, &p).unwrap();
        if let Ok(rho) = principal_c(&alg).density(&t) {
            prop_assert!(rho.re >= 0.0 && rho.im.abs() <= 1e-10 * rho.norm().max(1.0), "{}", rho);
        }
    }

    #[test]
    fn moments_of_a_two_factor_density(a in -0.9f64..0.9, b in -0.9f64..0.9) {
        // 1/|(1 − a/z)(1 − b/z)|² has zeroth moment (1 + ab)/((1 − ab)(1 − a²)(1 − b²))
        let fp = FactorProduct::in_s(&[(Complex64::new(a, 0.0), 1), (Complex64::new(b, 0.0), 1)], &[]);
        let m = Moments::compute(&fp, 1, 64, 2).unwrap();
        let want = (1.0 + a * b) / ((1.0 - a * b) * (1.0 - a * a) * (1.0 - b * b));
        prop_assert!((m.get(Coweight([0, 0])) - Complex64::new(want, 0.0)).norm() < 1e-10 * want);
        // the density is real and even, so the moments are symmetric
        prop_assert!((m.get(Coweight([1, 0])) - m.get(Coweight([-1, 0]))).norm() < 1e-12 * want);
    }

    #[test]
    fn trace_is_linear_and_symmetric(
        (cfg, p) in config().prop_flat_map(|c| (Just(c), params(c))),
        src in prop::sample::select(vec!["T1*x[1,0] - 2*T0", "(T1 + 0.5i)^2*x[-1,1]", "T0*T1*T0 + x[0,1]"]),
        other in prop::sample::select(vec!["T1 - 3", "x[1,1]*T0", "T1*T0*x[0,-1]"]),
    ) {
        let alg = HeckeAlgebra::new(cfg, &p).unwrap();
        let adapt = |s: &str| if alg.rank() == 1 { s.replace(",0]", "]").replace(",1]", "]").replace(",-1]", "]") } else { s.to_string() };
        let a = parse_element(&adapt(src), alg.rank()).unwrap().eval(&alg);
        let b = parse_element(&adapt(other), alg.rank()).unwrap().eval(&alg);
        let ab = alg.trace_bernstein(&alg.bernstein_mult(&a, &b));
        let ba = alg.trace_bernstein(&alg.bernstein_mult(&b, &a));
        prop_assert!((ab - ba).norm() < 1e-9 * ab.norm().max(1.0), "{} vs {}", ab, ba);
        let z = Complex64::new(0.3, -1.1);
        let lin = alg.trace_bernstein(&a.add(&b.scale(z)));
        let want = alg.trace_bernstein(&a) + z * alg.trace_bernstein(&b);
        prop_assert!((lin - want).norm() < 1e-9 * want.norm().max(1.0));
    }
}
