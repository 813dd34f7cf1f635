use rand::{Rng, SeedableRng};
use rug::Float;
use stark_sic::fixtures;
use stark_sic::linalg::BigComplexMatrix;
use stark_sic::num::{pow10, Cx};
use stark_sic::pipeline::{run_all, Line, RunConfig};
use stark_sic::poly::aberth;
use stark_sic::sic::*;

const PREC: u32 = 160;

fn all_d(d: u64) -> Vec<BigComplexMatrix> {
    let mut out = Vec::new();
    for m in 0..d as i64 {
        for n in 0..d as i64 {
            out.push(displacement(d, m, n, PREC));
        }
    }
    out
}

fn small(x: &Cx) -> bool {
    x.abs() < 1e-40
}

fn is_scalar(m: &BigComplexMatrix, c: &Cx) -> bool {
    let id = BigComplexMatrix::identity(m.rows, m.prec).scale(c);
    m.sub(&id).max_abs() < 1e-40
}

#[test]
fn displacements_are_trace_orthogonal() {
    let d = 5;
    let ds = all_d(d);
    for (i, a) in ds.iter().enumerate() {
        for (j, b) in ds.iter().enumerate() {
            let t = a.adjoint().mul(b).trace();
            if i == j {
                assert!(small(&(&t - &Cx::from_f64(PREC, d as f64, 0.0))), "({i},{j})");
            } else {
                assert!(small(&t), "({i},{j}) trace {:?}", t.to_c64());
            }
        }
    }
}

#[test]
fn displacements_are_unitary() {
    for d in [5u64, 11] {
        for a in all_d(d) {
            assert!(is_scalar(&a.mul(&a.adjoint()), &Cx::one(PREC)));
            assert!(is_scalar(&a.adjoint().mul(&a), &Cx::one(PREC)));
        }
    }
}

#[test]
fn displacements_commute_up_to_symplectic_phase() {
    let d = 5i64;
    for p in [(1i64, 0i64), (0, 1), (2, 3), (4, 4)] {
        for q in [(1i64, 2i64), (3, 0), (2, 2)] {
            let a = displacement(d as u64, p.0, p.1, PREC);
            let b = displacement(d as u64, q.0, q.1, PREC);
            let e = (p.1 * q.0 - p.0 * q.1).rem_euclid(d);
            let w = Cx::root_of_unity(PREC, e, d as u64);
            assert!(a.mul(&b).sub(&b.mul(&a).scale(&w)).max_abs() < 1e-40, "p={p:?} q={q:?}");
            // D_{-p} = D_p^†
            assert_eq!(displacement(d as u64, -p.0, -p.1, PREC).sub(&a.adjoint()).max_abs() < 1e-40, true);
        }
    }
}

#[test]
fn overlap_matches_matrix_form() {
    let v = random_vector(7, 3);
    let d = 7u64;
    let w: Vec<Cx> = (0..d).map(|k| Cx::root_of_unity(PREC, k as i64, d)).collect();
    for m in 0..d {
        for n in 0..d {
            let dv = displacement(d, m as i64, n as i64, PREC).mul_vec(&v);
            let mut s = Cx::zero(PREC);
            for (a, b) in v.iter().zip(&dv) {
                s.add_mul(&a.conj(), b);
            }
            assert!(small(&(&s - &overlap(&v, m, n, &w))));
        }
    }
}

fn random_vector(d: usize, seed: u64) -> Vec<Cx> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let raw: Vec<(f64, f64)> = (0..d).map(|_| (rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let n: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    raw.iter().map(|(a, b)| Cx::from_f64(PREC, a / n, b / n)).collect()
}

#[test]
fn random_vectors_are_invalid() {
    for seed in 0..100 {
        let v = random_vector(5, seed);
        let c = verify_sic(&v, 21);
        assert!(!c.valid);
        assert!(c.e_max > 1e-3, "seed {seed}: e_max {}", c.e_max);
    }
}

#[test]
fn published_fiducials_verify() {
    for name in ["v5", "v11"] {
        let (v, digits) = fixtures::fiducial(name).unwrap();
        let c = verify_sic(&v, digits);
        assert!(c.valid, "{name}");
        assert!(c.e_max < 1e-17, "{name}: {}", c.e_max);
        let d = v.len() as f64;
        assert!((c.gram_max - d).abs() < 1e-9 && (c.gram_min - d / (d + 1.0)).abs() < 1e-9);
    }
}

#[test]
fn truncation_lowers_claimed_precision() {
    let (v, _) = fixtures::fiducial("v5").unwrap();
    let text = format_fiducial(&v, 12);
    let (w, digits) = parse_fiducial(&text).unwrap();
    assert!((12..=14).contains(&digits), "digits {digits}");
    let c = verify_sic(&w, digits);
    assert!(c.valid);
    assert!(c.e_max > 1e-16, "a 12-digit vector cannot be accurate to {}", c.e_max);
    let mut bad = w.clone();
    bad[1] = &bad[1] + &Cx::from_f64(bad[1].prec(), 0.05, 0.0);
    assert!(!verify_sic(&bad, digits).valid);
    // the same vector cannot claim more digits than it carries
    assert!(!verify_sic(&w, 40).valid);
}

#[test]
fn fiducial_text_roundtrip() {
    let (v, digits) = fixtures::fiducial("v11").unwrap();
    let (w, d2) = parse_fiducial(&format_fiducial(&v, digits as usize)).unwrap();
    assert_eq!(d2, digits);
    assert!(aligned_distance(&v, &w) < 1e-19);
    assert!(parse_fiducial("1.0 + garbage").is_err());
}

#[test]
fn parse_complex_forms() {
    for (s, re, im) in [("0.5", 0.5, 0.0), ("-0.25 - 0.5i", -0.25, -0.5), ("1e-3+2e-3 i", 1e-3, 2e-3), ("0.125i", 0.0, 0.125)] {
        let (z, _) = parse_complex(s, 100).unwrap_or_else(|| panic!("{s}"));
        let (a, b) = z.to_c64();
        assert!((a - re).abs() < 1e-15 && (b - im).abs() < 1e-15, "{s}");
    }
}

#[test]
fn gtilde_roots_have_sic_modulus() {
    for (name, digits) in [("g5", 50i32), ("g11", 60)] {
        let g = fixtures::polynomial(name).unwrap().conj();
        let prec = stark_sic::num::working_bits(digits as u32);
        let roots = aberth(&g.numeric_cx(1, prec), prec).unwrap().roots;
        let target = Float::with_val(prec, g.d + 1).sqrt().recip();
        let tol = pow10(prec, 10 - digits);
        for r in roots {
            assert!(Float::with_val(prec, r.abs() - &target).abs() < tol, "{name}");
        }
    }
}

#[test]
fn pipeline_d5_end_to_end() {
    let mut lines = Vec::new();
    let mut sink = |l: Line| lines.push(l);
    let rep = run_all(&RunConfig::new(5), &mut sink).unwrap();
    let cert = &rep.fiducial.cert;
    assert!(cert.valid);
    assert!(cert.e_max < 1e-40);
    let r = rep.fiducial.reference.as_ref().unwrap();
    assert!(r.digits >= 19.0, "matching digits {}", r.digits);
    let independent = verify_sic(&cert.v, cert.digits);
    assert!(independent.valid && independent.e_max < 1e-40);
    let stages: Vec<&str> = lines.iter().map(|l| l.stage.as_str()).collect();
    for s in ["field", "group", "zeta", "f", "g", "gtilde", "h", "htilde", "orbit", "lambda_search", "certificate", "reference"] {
        assert!(stages.contains(&s), "missing stage {s}");
    }
}
