use rug::{Float, Rational};
use stark_sic::fixtures;
use stark_sic::lfun::*;
use stark_sic::num::{pow10, working_bits};
use stark_sic::poly::aberth;
use stark_sic::quadfield::*;
use stark_sic::rayclass::*;
use stark_sic::special::e1;
use std::cmp::Ordering;

#[test]
fn e1_matches_mpfr_eint() {
    for prec in [64u32, 200, 700] {
        for x in [1e-6, 0.01, 0.5, 1.0, 3.7, 10.0, 25.0, 60.0, 140.0, 400.0] {
            let xf = Float::with_val(prec, x);
            let ours = e1(&xf);
            // Ei(−x) = −E1(x)
            let oracle = -Float::with_val(prec + 32, -Float::with_val(prec + 32, x)).eint();
            let rel = (Float::with_val(prec + 32, &ours - &oracle) / &oracle).abs();
            assert!(rel < Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)), "x={x} prec={prec} rel={rel}");
        }
    }
}

/// Per-class ideal counts from generators in a fundamental domain for ⟨−1, ε₀⟩.
fn element_class_counts(ctx: &FieldContext, g: &RayClassGroup, xmax: u64) -> Vec<Vec<u32>> {
    let m = ctx.radicand;
    let ratio = if ctx.discriminant == m { 1 } else { 2 };
    let eps = &ctx.fundamental_unit;
    let eps2 = eps.pow(2);
    let bound = ((xmax as f64).sqrt() * (eps.rho1(64).to_f64() + 1.0)).ceil() as i64 + 2;
    let ybound = (bound as f64 / (ctx.discriminant as f64).sqrt()).ceil() as i64 + 1;
    let mut counts = vec![vec![0u32; xmax as usize + 1]; g.order];
    for x in 0..=bound {
        for y in 0..=ybound {
            if x == 0 && y == 0 {
                continue;
            }
            let a = QuadRational::new(Rational::from((x, 2)), Rational::from((y * ratio, 2)), m);
            if !a.is_integral() {
                continue;
            }
            let n = Rational::from(a.norm().abs_ref());
            if n > xmax {
                continue;
            }
            let s = if a.sign_rho2() == Ordering::Greater { 1 } else { -1 };
            let lhs = &(&eps2 * &a.conj()).scale(&Rational::from(s)) - &a;
            if lhs.sign_rho1() != Ordering::Greater {
                continue;
            }
            let n = n.numer().to_u64().unwrap();
            if n % ctx.d == 0 {
                continue;
            }
            let k = g.class_of_element(ctx, &a).unwrap();
            counts[k][n as usize] += 1;
        }
    }
    counts
}

#[test]
fn class_counts_match_element_oracle() {
    for (d, x) in [(5u64, 400u64), (11, 300), (17, 200)] {
        let ctx = make_field(d).unwrap();
        let g = build_ray_class_group(&ctx).unwrap();
        let ours = class_counts(&ctx, &g, x).unwrap();
        let oracle = element_class_counts(&ctx, &g, x);
        for k in 0..g.order {
            assert_eq!(ours.counts[k], oracle[k], "d={d} class {k}");
        }
    }
}

fn table(d: u64, digits: u32) -> ZetaTable {
    let ctx = make_field(d).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    zeta_derivative_table(&ctx, &g, digits, None).unwrap()
}

#[test]
fn root_numbers_unit_and_l0_vanishes() {
    for (d, p) in [(5u64, 50u32), (11, 40)] {
        let t = table(d, p);
        let prec = t.prec();
        let tol = pow10(prec, 5 - p as i32);
        for lv in &t.lvalues {
            assert!(lv.w_norm_delta < tol, "d={d} χ_{} ||W|-1| = {}", lv.j, lv.w_norm_delta);
            assert!(lv.l_at_zero < tol, "d={d} χ_{} |L(0)| = {}", lv.j, lv.l_at_zero);
        }
        assert!(t.antisymmetry_error() < tol);
        assert!(t.max_imag < tol);
        assert_eq!(t.lvalues.len(), t.zprime.len() / 2);
    }
}

#[test]
fn zprime_stable_under_precision_and_bound() {
    let ctx = make_field(5).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let a = zeta_derivative_table(&ctx, &g, 40, None).unwrap();
    let b = zeta_derivative_table(&ctx, &g, 60, None).unwrap();
    let c = zeta_derivative_table(&ctx, &g, 40, Some(a.x + 500)).unwrap();
    let tol = pow10(working_bits(40), -37);
    for k in 0..a.zprime.len() {
        assert!(Float::with_val(200, &a.zprime[k] - &b.zprime[k]).abs() < tol);
        assert!(Float::with_val(200, &a.zprime[k] - &c.zprime[k]).abs() < tol);
    }
}

#[test]
fn alphas_are_roots_of_published_f5() {
    let t = table(5, 50);
    let f = fixtures::polynomial("f5").unwrap();
    let prec = t.prec();
    let roots = aberth(&f.numeric_cx(1, prec), prec).unwrap().roots;
    assert_eq!(roots.len(), t.alpha.len());
    let tol = pow10(prec, -40);
    for a in &t.alpha {
        let best = roots
            .iter()
            .map(|r| Float::with_val(prec, &r.re - a).hypot(&r.im))
            .min_by(|x, y| x.partial_cmp(y).unwrap())
            .unwrap();
        assert!(best < tol, "α = {a} off by {best}");
    }
}

#[test]
fn cache_roundtrip() {
    let ctx = make_field(5).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let dir = std::env::temp_dir().join(format!("stark-sic-cache-{}", std::process::id()));
    let (t1, hit1) = zeta_table_cached(&ctx, &g, 35, None, Some(&dir)).unwrap();
    let (t2, hit2) = zeta_table_cached(&ctx, &g, 35, None, Some(&dir)).unwrap();
    assert!(!hit1 && hit2);
    assert_eq!(t1.zprime, t2.zprime);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn even_characters_are_refused() {
    let ctx = make_field(5).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    assert!(lprime_at_zero(&ctx, &g, 0, 30, None).is_err());
    let odd = g.odd_characters()[0];
    let lv = lprime_at_zero(&ctx, &g, odd, 30, None).unwrap();
    assert!(lv.valid(30));
}
