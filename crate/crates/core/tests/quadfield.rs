use proptest::prelude::*;
use rug::{Integer, Rational};
use stark_sic::quadfield::*;
use std::cmp::Ordering;

/// Smallest unit > 1 by scanning (X + Y√D)/2 with X² − DY² = ±4.
fn brute_unit(disc: u64, m: u64) -> QuadRational {
    let ratio = if disc == m { 1 } else { 2 };
    for y in 1u64.. {
        let dy2 = Integer::from(disc) * y * y;
        for s in [-4i64, 4] {
            let x2 = Integer::from(&dy2 + s);
            if x2 > 0 && x2.is_perfect_square() {
                let x = x2.sqrt();
                let u = QuadRational::new(Rational::from((x, Integer::from(2))), Rational::from((y as i64 * ratio, 2)), m);
                if u.is_integral() {
                    return u;
                }
            }
        }
    }
    unreachable!()
}

/// Ideal counts by norm from elements in a fundamental domain for ⟨−1, ε₀⟩.
fn element_counts(ctx: &FieldContext, xmax: u64) -> Vec<u64> {
    let disc = ctx.discriminant;
    let m = ctx.radicand;
    let ratio = if disc == m { 1 } else { 2 };
    let eps = &ctx.fundamental_unit;
    let eps2 = eps.pow(2);
    let bound = ((xmax as f64).sqrt() * (eps.rho1(64).to_f64() + 1.0)).ceil() as i64 + 2;
    let ybound = (bound as f64 / (disc as f64).sqrt()).ceil() as i64 + 1;
    let mut counts = vec![0u64; xmax as usize + 1];
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
            counts[n.numer().to_usize().unwrap()] += 1;
        }
    }
    counts
}

#[test]
fn field_examples() {
    let c5 = make_field(5).unwrap();
    assert_eq!(c5.delta, 12);
    assert_eq!(c5.radicand, 3);
    assert_eq!(c5.zauner_unit, QuadRational::new(2, 1, 3));
    assert_eq!(c5.class_number, 1);
    assert_eq!(c5.zauner_power, 1);

    let c11 = make_field(11).unwrap();
    assert_eq!(c11.delta, 96);
    assert_eq!(c11.zauner_unit, QuadRational::new(5, 2, 6));
    assert_eq!(c11.fundamental_unit, c11.zauner_unit);

    let c17 = make_field(17).unwrap();
    assert_eq!(c17.radicand, 7);
    assert_eq!(c17.zauner_unit, QuadRational::new(8, 3, 7));
    assert_eq!(c17.zauner_power, 1);
    assert_eq!(c17.class_number, 1);

    let c23 = make_field(23).unwrap();
    assert_eq!(c23.delta, 480);
    assert_eq!(c23.radicand, 30);
    assert_eq!(c23.zauner_unit, QuadRational::new(11, 2, 30));
    assert_eq!(c23.class_number, 2);
}

#[test]
fn relaxed_d15() {
    let c = make_field_relaxed(15).unwrap();
    assert_eq!(c.radicand, 3);
    assert_eq!(c.zauner_unit, QuadRational::new(2, 1, 3).pow(2));
    assert_eq!(c.zauner_power, 2);
    assert!(make_field(15).is_err());
}

#[test]
fn invalid_dimensions() {
    assert!(make_field(7).is_err()); // 7 ≡ 1 mod 3
    assert!(make_field(9).is_err());
    assert!(make_field(3).is_err());
}

#[test]
fn fundamental_units_match_pell_search() {
    for d in [5u64, 11, 17, 23, 29, 41] {
        let c = make_field(d).unwrap();
        assert_eq!(c.fundamental_unit, brute_unit(c.discriminant, c.radicand), "d={d}");
        assert_eq!(Rational::from(c.fundamental_unit.norm().abs_ref()), 1);
        assert_eq!(c.fundamental_unit.sign_rho1(), Ordering::Greater);
    }
    for m in [2u64, 5, 13, 19, 21, 31, 46, 61, 94] {
        let disc = field_discriminant(m);
        assert_eq!(fundamental_unit(disc, m), brute_unit(disc, m), "m={m}");
    }
}

#[test]
fn congruent_unit_is_cube() {
    for d in [5u64, 11, 17, 23, 29, 41] {
        let c = make_field(d).unwrap();
        let eta = minimal_congruent_unit(&c).unwrap();
        assert_eq!(eta, c.zauner_unit.pow(3), "d={d}");
        assert_eq!(&eta * &eta.inv().unwrap(), QuadRational::one(c.radicand));
    }
    let c5 = make_field(5).unwrap();
    assert_eq!(minimal_congruent_unit(&c5).unwrap(), QuadRational::new(26, 15, 3));
}

#[test]
fn prime_ideals_d5() {
    let c = make_field(5).unwrap();
    assert!(enumerate_prime_ideals(&c, 1).unwrap().is_empty());
    let ps = enumerate_prime_ideals(&c, 11).unwrap();
    let norms: Vec<u64> = ps.iter().map(|p| p.ideal.norm).collect();
    assert!(norms.contains(&2));
    assert_eq!(norms.iter().filter(|&&n| n == 11).count(), 2);
    assert!(!norms.contains(&25));
    assert_eq!(splitting_of(&c, 5), Splitting::Inert);
    assert_eq!(splitting_of(&c, 2), Splitting::Ramified);
    let ps = enumerate_prime_ideals(&c, 30).unwrap();
    assert!(ps.iter().any(|p| p.p == 5 && p.ideal.norm == 25));
    for p in &ps {
        assert_eq!(Rational::from(p.ideal.generator.norm().abs_ref()), p.ideal.norm);
    }
}

#[test]
fn ideal_counts_match_element_oracle() {
    for (d, x) in [(5u64, 500u64), (11, 1000), (17, 500)] {
        let c = make_field(d).unwrap();
        let ideals = enumerate_ideals(&c, x).unwrap();
        let oracle = element_counts(&c, x);
        for n in 1..=x {
            let got = ideals.get(&n).map_or(0, |v| v.len() as u64);
            assert_eq!(got, oracle[n as usize], "d={d} n={n}");
        }
        assert_eq!(ideals[&1].len(), 1);
        for (n, v) in &ideals {
            for (i, a) in v.iter().enumerate() {
                assert_eq!(Rational::from(a.generator.norm().abs_ref()), *n);
                for b in &v[i + 1..] {
                    assert!(!a.same_ideal(b));
                }
            }
        }
    }
}

#[test]
fn class_number_two_rejected_for_ideals() {
    let c = make_field(23).unwrap();
    assert!(enumerate_prime_ideals(&c, 100).is_err());
}

#[test]
fn associates_are_same_ideal() {
    let c = make_field(11).unwrap();
    let g = QuadRational::new(2, 1, 6);
    let a = PrincipalIdeal { generator: g.clone(), norm: 2 };
    let b = PrincipalIdeal { generator: &(&g * &c.fundamental_unit.pow(3)) * &QuadRational::from_int(-1, 6), norm: 2 };
    assert!(a.same_ideal(&b));
}

fn quad() -> impl Strategy<Value = QuadRational> {
    (-50i64..50, 1i64..6, -50i64..50, 1i64..6).prop_map(|(a, b, c, e)| QuadRational::new((a, b), (c, e), 7))
}

proptest! {
    #[test]
    fn norm_multiplicative(x in quad(), y in quad()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn embeddings_multiplicative(x in quad(), y in quad()) {
        let prec = 200;
        let xy = &x * &y;
        for w in [1u8, 2] {
            let lhs = xy.rho(w, prec);
            let rhs = x.rho(w, prec) * y.rho(w, prec);
            let err = rug::Float::with_val(prec, &lhs - &rhs).abs();
            prop_assert!(err < 1e-50);
        }
        let n = x.rho1(prec) * x.rho2(prec) - rug::Float::with_val(prec, &x.norm());
        prop_assert!(n.abs() < 1e-50);
    }

    #[test]
    fn exact_sign_agrees_with_float(x in quad()) {
        let f = x.rho1(128);
        let s = x.sign_rho1();
        if f.is_zero() { prop_assert_eq!(s, Ordering::Equal); }
        else { prop_assert_eq!(s, f.cmp0().unwrap()); }
    }
}
