use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rug::{Float, Integer, Rational};
use stark_sic::fixtures;
use stark_sic::lfun::zeta_derivative_table;
use stark_sic::num::working_bits;
use stark_sic::quadfield::*;
use stark_sic::rayclass::build_ray_class_group;
use stark_sic::recognition::*;

#[test]
fn random_reals_are_not_recognized() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let digits = 60;
    let prec = working_bits(digits);
    let h = Integer::from(10_000);
    for _ in 0..200 {
        let s: String = (0..digits).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect();
        let x = Float::with_val(prec, Float::parse(format!("0.{s}")).unwrap());
        for m in [3u64, 6, 7] {
            let r = recognize_quad(&x, m, &h, digits);
            assert!(!r.ok(), "spurious {:?} for 0.{s}", r.value);
        }
    }
}

#[test]
fn precondition_on_height_is_enforced() {
    let x = Float::with_val(200, 2).sqrt();
    let r = recognize_quad(&x, 2, &Integer::from(1_000_000_000_000u64), 50);
    assert!(!r.ok());
    assert!(r.note.contains("too low"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_quadratics_are_recovered(a in -400i64..400, b in -400i64..400, c in 1i64..60, mi in 0usize..4) {
        let m = [3u64, 6, 7, 30][mi];
        let v = QuadRational::new(Rational::from((a, c)), Rational::from((b, c)), m);
        let digits = 60;
        let x = v.rho1(working_bits(digits));
        let r = recognize_quad(&x, m, &Integer::from(100_000), digits);
        prop_assert_eq!(r.value, Some(v));
    }

    #[test]
    fn bounded_recognition_recovers_integral_elements(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let m = 7u64;
        let v = QuadRational::new(a, b, m);
        let prec = 256;
        let x = v.rho1(prec) + Float::with_val(prec, 1e-40);
        let bound = v.rho2(prec).abs() + 1u32;
        let r = recognize_bounded(&x, m, &Integer::from(1), &bound, &Float::with_val(prec, 1e-35));
        prop_assert_eq!(r.value, Some(v));
    }

    #[test]
    fn fraction_string_roundtrip(p in -10_000i64..10_000, q in -10_000i64..10_000, r in 1i64..500, s in 1i64..500, mi in 0usize..3) {
        let m = [3u64, 6, 7][mi];
        let v = QuadRational::new(Rational::from((p, r)), Rational::from((q, s)), m);
        prop_assert_eq!(parse_quad(&v.to_fraction_string(), m).unwrap(), v.clone());
        prop_assert_eq!(parse_quad(&v.to_string(), m).unwrap(), v);
    }

    #[test]
    fn polynomial_text_roundtrip(cs in proptest::collection::vec((-500i64..500, -500i64..500, 1i64..30), 1..12)) {
        let m = 6;
        let coeffs = cs.iter().map(|&(a, b, c)| QuadRational::new(Rational::from((a, c)), Rational::from((b, c)), m)).collect();
        let p = RecognizedPolynomial { d: 11, m, role: Role::H, coeffs };
        prop_assert_eq!(RecognizedPolynomial::from_text(&p.to_text()).unwrap(), p);
    }
}

#[test]
fn parse_accepts_rescaled_roots() {
    // √12 = 2√3
    assert_eq!(parse_quad("1 + sqrt(12)", 3).unwrap(), QuadRational::new(1, 2, 3));
    assert_eq!(parse_quad("-3/2*sqrt(3)", 3).unwrap(), QuadRational::new(0, Rational::from((-3, 2)), 3));
    assert!(parse_quad("1 + sqrt(5)", 3).is_err());
    assert!(parse_quad("1/0", 3).is_err());
}

#[test]
fn malformed_polynomial_files_are_rejected() {
    assert!(RecognizedPolynomial::from_text("# d=5\n1\n").is_err());
    assert!(RecognizedPolynomial::from_text("# d=5\n# role=f\n# degree=3\n1\n2\n").is_err());
    assert!(RecognizedPolynomial::from_text("# d=5\n# role=f\n").is_err());
}

fn f_for(d: u64, digits: u32) -> RecognizedPolynomial {
    let ctx = make_field(d).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let t = zeta_derivative_table(&ctx, &g, digits, None).unwrap();
    build_f(&ctx, &t.alpha, digits).unwrap()
}

fn check_f_shape(f: &RecognizedPolynomial) {
    assert!(f.is_palindromic());
    assert_eq!(f.coeffs[0], QuadRational::one(f.m));
    let v = f.eval_exact(&QuadRational::one(f.m));
    assert!(v.scale(&Rational::from((1, f.d))).is_integral());
}

#[test]
fn f5_exact() {
    let f = f_for(5, 50);
    assert_eq!(f, fixtures::polynomial("f5").unwrap());
    check_f_shape(&f);
}

#[test]
fn f11_exact() {
    let f = f_for(11, 60);
    assert_eq!(f, fixtures::polynomial("f11").unwrap());
    check_f_shape(&f);
}

#[test]
fn f_fails_honestly_at_low_precision() {
    let ctx = make_field(11).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let t = zeta_derivative_table(&ctx, &g, 30, None).unwrap();
    assert!(build_f(&ctx, &t.alpha, 30).is_err());
}

#[test]
fn power_sums_of_g5_match_roots() {
    let g = fixtures::polynomial("g5").unwrap();
    let prec = 300;
    let roots = stark_sic::poly::aberth(&g.numeric_cx(1, prec), prec).unwrap().roots;
    let ps = power_sums(&g, 12);
    assert_eq!(ps[0], QuadRational::from_int(8, 3));
    for (i, p) in ps.iter().enumerate() {
        let k = i as u64;
        let mut s = stark_sic::num::Cx::zero(prec);
        for r in &roots {
            s = &s + &r.pow_u(k);
        }
        let diff = Float::with_val(prec, &s.re - &p.rho1(prec)).abs();
        assert!(diff < 1e-60, "p_{k}: {diff}");
        assert!(s.im.clone().abs() < 1e-60);
    }
}

#[test]
fn exact_solver_handles_quadratic_entries() {
    let m = 3;
    let q = |a: i64, b: i64| QuadRational::new(a, b, m);
    let a = vec![vec![q(1, 1), q(2, 0)], vec![q(0, 1), q(1, -1)]];
    let x = vec![q(3, -1), q(1, 2)];
    let b: Vec<QuadRational> = a
        .iter()
        .map(|row| row.iter().zip(&x).fold(QuadRational::zero(m), |acc, (c, v)| &acc + &(c * v)))
        .collect();
    assert_eq!(solve_exact(a, b).unwrap(), x);
}
