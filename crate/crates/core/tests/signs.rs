use stark_sic::fixtures;
use stark_sic::lfun::zeta_derivative_table;
use stark_sic::quadfield::make_field;
use stark_sic::rayclass::build_ray_class_group;
use stark_sic::signs::*;

fn run(d: u64, digits: u32, strategy: SignStrategy) -> SignAssignment {
    let ctx = make_field(d).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let t = zeta_derivative_table(&ctx, &g, digits, None).unwrap();
    resolve_signs(&ctx, &g, &t.alpha, &strategy, digits).unwrap()
}

fn check_pairing(s: &SignAssignment) {
    let r = s.signs.len() / 2;
    for k in 0..r {
        assert_eq!(s.signs[k + r], s.kappa * s.signs[k]);
    }
}

#[test]
fn bruteforce_d5_gives_published_g5() {
    let s = run(5, 50, SignStrategy::Bruteforce);
    // up to the global sign, which the real-embedding test fixes
    assert_eq!(s.g, fixtures::polynomial("g5").unwrap());
    assert!(s.admissible >= 1);
    assert!(s.real_lambda.is_some());
    check_pairing(&s);
}

#[test]
fn known_g_d11() {
    let g11 = fixtures::polynomial("g11").unwrap();
    let s = run(11, 60, SignStrategy::KnownG(g11.clone()));
    assert_eq!(s.g, g11);
    check_pairing(&s);
}

#[test]
fn search_d11_agrees_with_known_g() {
    let s = run(11, 60, SignStrategy::Search);
    assert_eq!(s.g, fixtures::polynomial("g11").unwrap());
    check_pairing(&s);
}

#[test]
fn known_g_rejects_wrong_polynomial() {
    // g5 has the wrong degree and field for d = 11
    let ctx = make_field(11).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let t = zeta_derivative_table(&ctx, &g, 40, None).unwrap();
    let wrong = fixtures::polynomial("g5").unwrap();
    assert!(resolve_signs(&ctx, &g, &t.alpha, &SignStrategy::KnownG(wrong), 40).is_err());
}

#[test]
fn bruteforce_refuses_large_orbits() {
    let ctx = make_field(17).unwrap();
    let g = build_ray_class_group(&ctx).unwrap();
    let alphas = vec![rug::Float::with_val(64, 2); g.order];
    assert!(resolve_signs(&ctx, &g, &alphas, &SignStrategy::Bruteforce, 40).is_err());
}
