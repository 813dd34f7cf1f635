use rug::{Integer, Rational};
use stark_sic::quadfield::*;
use stark_sic::rayclass::*;
use std::cmp::Ordering;
use std::collections::HashSet;

fn modd(r: &Rational, d: u64) -> i64 {
    // odd d, so denominators 1 or 2 are invertible
    let num = Integer::from(r.numer() % d) as Integer;
    let den = Integer::from(r.denom() % d);
    let inv = den.invert(&Integer::from(d)).unwrap();
    let v = (num * inv) % d;
    v.to_i64().unwrap().rem_euclid(d as i64)
}

/// h · 2 · |(O/d)^×| / |⟨−1, ε⟩ in (O/d)^× × {±1}|, all by enumeration.
fn oracle_order(ctx: &FieldContext) -> u64 {
    let d = ctx.d as i64;
    let m = ctx.radicand as i64;
    let mut units = 0u64;
    for x in 0..d {
        for y in 0..d {
            if (x * x - m * y * y).rem_euclid(d) != 0 {
                units += 1;
            }
        }
    }
    let e = &ctx.fundamental_unit;
    let eps = (modd(e.p(), ctx.d), modd(e.q(), ctx.d), e.sign_rho2() == Ordering::Greater);
    let mul = |a: (i64, i64, bool), b: (i64, i64, bool)| {
        ((a.0 * b.0 + m * a.1 * b.1).rem_euclid(d), (a.0 * b.1 + a.1 * b.0).rem_euclid(d), a.2 == b.2)
    };
    let mut seen = HashSet::new();
    let mut frontier = vec![(1i64, 0i64, true)];
    while let Some(u) = frontier.pop() {
        if seen.insert(u) {
            frontier.push(mul(u, eps));
            frontier.push(mul(u, (d - 1, 0, false)));
        }
    }
    ctx.class_number * 2 * units / seen.len() as u64
}

#[test]
fn group_structure_matches_published() {
    for (d, inv) in [(5u64, vec![8u64]), (11, vec![40]), (17, vec![96]), (23, vec![2, 176])] {
        let ctx = make_field(d).unwrap();
        let g = build_ray_class_group(&ctx).unwrap();
        assert_eq!(g.invariants, inv, "d={d}");
    }
}

#[test]
fn order_matches_enumeration() {
    for d in [5u64, 11, 17, 23] {
        let ctx = make_field(d).unwrap();
        let g = build_ray_class_group(&ctx).unwrap();
        let total: u64 = g.invariants.iter().product();
        assert_eq!(total, oracle_order(&ctx), "d={d}");
        assert_eq!(g.order as u64 * ctx.class_number, total, "d={d}");
        if ctx.class_number == 1 {
            assert_eq!(ray_class_order(&ctx, false, true).unwrap() as u64, total, "d={d}");
        }
    }
    // groups with larger class number are rejected, not mis-sized
    assert!(build_ray_class_group(&make_field(29).unwrap()).is_err());
}

#[test]
fn smith_form_of_cyclic_product() {
    assert_eq!(smith_2x2(176, 0), vec![2, 176]);
    assert_eq!(smith_2x2(4, 1), vec![8]);
}

#[test]
fn fibers_partition_units() {
    for d in [5u64, 11, 17] {
        let ctx = make_field(d).unwrap();
        let g = build_ray_class_group(&ctx).unwrap();
        let mut total = 0;
        for k in 0..g.order {
            let f = g.fiber(k);
            assert!(!f.is_empty());
            assert_eq!(g.class_rep(k), f[0]);
            for &(m, n) in &f {
                assert_eq!(g.amn_class(m as i64, n as i64).unwrap(), k);
            }
            total += f.len();
        }
        assert_eq!(total, g.fq.units().len());
        assert_eq!(g.r_index * 2, g.order);
    }
}

#[test]
fn r_class_negates_rho2_sign() {
    for d in [5u64, 11, 17] {
        let ctx = make_field(d).unwrap();
        let g = build_ray_class_group(&ctx).unwrap();
        for k in 0..g.order {
            let e = g.class_rep(k);
            assert_eq!(g.class_of_residue(e, false).unwrap(), (k + g.r_index) % g.order);
        }
    }
}

#[test]
fn class_of_element_uses_residue_and_sign() {
    let ctx = make_field(5).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    // units ≡ 1 mod d with ρ₂ > 0 are trivial
    let eta = minimal_congruent_unit(&ctx).unwrap();
    assert_eq!(g.class_of_element(&ctx, &eta).unwrap(), 0);
    assert_eq!(g.class_of_element(&ctx, &QuadRational::from_int(1, 3)).unwrap(), 0);
    // (−1) = (1) as ideals
    assert_eq!(g.class_of_element(&ctx, &QuadRational::from_int(-1, 3)).unwrap(), 0);
    // ≡ 1 mod 5 but negative at ρ₂
    assert_eq!(g.class_of_element(&ctx, &QuadRational::new(1, 5, 3)).unwrap(), g.r_index);
    assert!(g.class_of_element(&ctx, &QuadRational::from_int(5, 3)).is_err());
}

#[test]
fn characters_are_homomorphisms() {
    let ctx = make_field(11).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let odd = g.odd_characters();
    assert_eq!(odd.len(), g.order / 2);
    for j in 0..g.order {
        let c = g.character(j);
        for a in 0..g.order {
            for b in 0..g.order {
                assert_eq!((c.exponent(a) + c.exponent(b)) % g.order, c.exponent((a + b) % g.order));
            }
        }
        assert_eq!(c.value_at_r() == -1, odd.contains(&j));
    }
}

#[test]
fn galois_permutation_is_a_single_cycle() {
    let ctx = make_field(5).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let p = g.galois_permutation();
    let mut k = 0;
    for step in 1..=g.order {
        k = p[k];
        assert_eq!(k == 0, step == g.order);
    }
}
