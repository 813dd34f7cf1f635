//! Displacement operators, the overlap matrix M and its conjugate, λ-search
//! and SIC certification.

use crate::error::{Error, Result};
use crate::linalg::BigComplexMatrix;
use crate::num::{bits_for_digits, fmt_float, parse_float, pow10, working_bits, Cx};
use crate::poly::{aberth, eval_cx};
use crate::rayclass::RayClassGroup;
use crate::recognition::RecognizedPolynomial;
use rayon::prelude::*;
use rug::Float;
use serde_json::json;

/// ω^k for k = 0..d−1, ω = e^{2πi/d}.
fn omega_table(d: u64, prec: u32) -> Vec<Cx> {
    (0..d).map(|k| Cx::root_of_unity(prec, k as i64, d)).collect()
}

/// D_{m,n} = τ^{mn} X^m Z^n with τ = −e^{πi/d} = ω^{(d+1)/2}.
/// Entry (j, k) is ω^{h·mn + nk} when j ≡ k + m.
pub fn displacement(d: u64, m: i64, n: i64, prec: u32) -> BigComplexMatrix {
    let w = omega_table(d, prec);
    let h = (d + 1) / 2;
    let du = d as i64;
    let (m, n) = (m.rem_euclid(du) as u64, n.rem_euclid(du) as u64);
    let mut out = BigComplexMatrix::zeros(d as usize, d as usize, prec);
    for k in 0..d {
        let j = (k + m) % d;
        let e = (h * m % d * n + n * k) % d;
        out[(j as usize, k as usize)] = w[e as usize].clone();
    }
    out
}

/// ⟨v, D_{m,n} v⟩ = Σ_k conj(v_{k+m}) ω^{h·mn + nk} v_k.
pub fn overlap(v: &[Cx], m: u64, n: u64, w: &[Cx]) -> Cx {
    let d = v.len() as u64;
    let h = (d + 1) / 2;
    let prec = v[0].prec();
    let mut acc = Cx::zero(prec);
    for k in 0..d {
        let e = (h * m % d * n + n * k) % d;
        let t = &v[((k + m) % d) as usize].conj() * &w[e as usize];
        acc.add_mul(&t, &v[k as usize]);
    }
    acc
}

/// Spread per-class values over (m, n) pairs; index m·d + n, (0,0) ↦ 1.
pub fn overlap_table(group: &RayClassGroup, class_values: &[Cx]) -> Result<Vec<Cx>> {
    let d = group.d;
    let prec = class_values[0].prec();
    let mut out = Vec::with_capacity((d * d) as usize);
    for m in 0..d as i64 {
        for n in 0..d as i64 {
            if m == 0 && n == 0 {
                out.push(Cx::one(prec));
            } else {
                let k = group.amn_class(m, n)?;
                out.push(class_values[k].clone());
            }
        }
    }
    Ok(out)
}

/// (1/d) Σ ν_{m,n} D_{−m,−λn}. With λ = 1 this is M itself.
pub fn build_projector(d: u64, overlaps: &[Cx], lambda: u64, prec: u32) -> BigComplexMatrix {
    let w = omega_table(d, prec);
    let h = (d + 1) / 2;
    let inv_d = Float::with_val(prec, d).recip();
    BigComplexMatrix::from_fn(d as usize, d as usize, prec, |j, k| {
        let (j, k) = (j as u64, k as u64);
        let m = (k + d - j) % d;
        let mut acc = Cx::zero(prec);
        for n in 0..d {
            let ln = lambda * n % d;
            // D_{−m,−λn}(j,k) = ω^{h·m·λn − λn·k}
            let e = (h * m % d * ln % d + d * d - ln * k % d) % d;
            acc.add_mul(&overlaps[(m * d + n) as usize], &w[e as usize]);
        }
        acc.scale(&inv_d)
    })
}

/// Diagnostics of a candidate projector.
#[derive(Clone, Debug)]
pub struct ProjectorTest {
    pub lambda: u64,
    pub hermitian: Float,
    pub idempotent: Float,
    pub minors: Float,
    pub second_singular: Float,
    pub trace_err: Float,
}

impl ProjectorTest {
    pub fn is_projector(&self, digits: u32, need_hermitian: bool) -> bool {
        let tol = pow10(self.idempotent.prec(), 10 - digits as i32);
        self.idempotent < tol
            && self.minors < tol
            && self.second_singular < tol
            && self.trace_err < tol
            && (!need_hermitian || self.hermitian < tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lambda": self.lambda,
            "hermitian_err": fmt_float(&self.hermitian, 6),
            "idempotency_err": fmt_float(&self.idempotent, 6),
            "minor_max": fmt_float(&self.minors, 6),
            "second_singular": fmt_float(&self.second_singular, 6),
        })
    }
}

/// Max |M_ij M_kl − M_il M_kj| over all 2×2 minors.
pub fn max_minor(m: &BigComplexMatrix) -> Float {
    let n = m.rows;
    let mut worst = Float::new(m.prec);
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    let a = &m[(i, j)] * &m[(k, l)];
                    let b = &m[(i, l)] * &m[(k, j)];
                    let e = (&a - &b).abs();
                    if e > worst {
                        worst = e;
                    }
                }
            }
        }
    }
    worst
}

fn vec_norm(v: &[Cx]) -> Float {
    let prec = v[0].prec();
    let mut s = Float::new(prec);
    for x in v {
        s += x.norm_sqr();
    }
    s.sqrt()
}

/// Second eigenvalue of M†M (the squared second singular value) by power
/// iteration deflated by the dominant eigenvector.
pub fn second_singular_value(m: &BigComplexMatrix) -> Float {
    let prec = m.prec;
    let a = m.adjoint().mul(m);
    let n = a.rows;
    let power = |defl: Option<&(Vec<Cx>, Float)>| -> (Vec<Cx>, Float) {
        let mut v: Vec<Cx> = (0..n).map(|i| Cx::from_f64(prec, 1.0 + 0.37 * i as f64, 0.11 * (i as f64) - 0.2)).collect();
        let mut lam = Float::new(prec);
        for _ in 0..60 {
            let mut w = a.mul_vec(&v);
            if let Some((u, s)) = defl {
                let mut dotp = Cx::zero(prec);
                for (ui, vi) in u.iter().zip(&v) {
                    dotp.add_mul(&ui.conj(), vi);
                }
                let c = dotp.scale(s);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi = &*wi - &(&c * ui);
                }
            }
            let nrm = vec_norm(&w);
            if nrm.is_zero() {
                return (v, Float::new(prec));
            }
            lam = nrm.clone();
            let inv = nrm.recip();
            v = w.iter().map(|x| x.scale(&inv)).collect();
        }
        (v, lam)
    };
    let top = power(None);
    power(Some(&top)).1
}

pub fn test_projector(m: &BigComplexMatrix, lambda: u64) -> ProjectorTest {
    let prec = m.prec;
    let idem = m.mul(m).sub(m).max_abs();
    let tr = (&m.trace() - &Cx::one(prec)).abs();
    ProjectorTest {
        lambda,
        hermitian: m.hermitian_defect(),
        idempotent: idem,
        minors: max_minor(m),
        second_singular: second_singular_value(m),
        trace_err: tr,
    }
}

/// Normalized dominant column with the first nonzero entry real positive.
pub fn extract_fiducial(m: &BigComplexMatrix, digits: u32) -> Vec<Cx> {
    let d = m.rows;
    let j = (0..d).max_by(|&a, &b| m[(a, a)].abs().partial_cmp(&m[(b, b)].abs()).unwrap()).unwrap();
    let col = m.column(j);
    let nrm = vec_norm(&col).recip();
    let v: Vec<Cx> = col.iter().map(|x| x.scale(&nrm)).collect();
    normalize_phase(&v, digits)
}

/// Scale to unit norm and rotate so the first non-negligible entry is real positive.
pub fn normalize_phase(v: &[Cx], digits: u32) -> Vec<Cx> {
    let prec = v[0].prec();
    let nrm = vec_norm(v).recip();
    let v: Vec<Cx> = v.iter().map(|x| x.scale(&nrm)).collect();
    let tiny = pow10(prec, -(digits as i32) / 2);
    let Some(first) = v.iter().find(|x| x.abs() > tiny) else {
        return v;
    };
    let ph = first.scale(&first.abs().recip()).conj();
    v.iter().map(|x| x * &ph).collect()
}

#[derive(Clone, Debug)]
pub struct FiducialCertificate {
    pub d: u64,
    pub v: Vec<Cx>,
    pub lambda: Option<u64>,
    pub e_max: Float,
    pub norm_err: Float,
    pub idempotency_err: Option<Float>,
    pub digits: u32,
    pub valid: bool,
    /// extreme eigenvalues of the projector Gram matrix (f64)
    pub gram_min: f64,
    pub gram_max: f64,
    /// all λ values whose σ(M) passed
    pub valid_lambdas: Vec<u64>,
    pub note: String,
}

impl FiducialCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let sig = self.digits as usize;
        json!({
            "d": self.d,
            "valid": self.valid,
            "lambda": self.lambda,
            "valid_lambdas": self.valid_lambdas,
            "precision": self.digits,
            "e_max": fmt_float(&self.e_max, 6),
            "norm_err": fmt_float(&self.norm_err, 6),
            "idempotency_err": self.idempotency_err.as_ref().map(|x| fmt_float(x, 6)),
            "gram_eig_min": format!("{:.12e}", self.gram_min),
            "gram_eig_max": format!("{:.12e}", self.gram_max),
            "v": self.v.iter().map(|x| [fmt_float(&x.re, sig), fmt_float(&x.im, sig)]).collect::<Vec<_>>(),
            "note": self.note,
        })
    }
}

/// Overlaps, e_max and the Gram spectrum of the d² projectors.
/// The Gram matrix |⟨v,D_{p−q}v⟩|² is a convolution on (Z/d)², so its
/// eigenvalues are the 2-D DFT of |overlap|²; a SIC gives d and d/(d+1).
pub fn verify_sic(v: &[Cx], digits: u32) -> FiducialCertificate {
    let d = v.len() as u64;
    let prec = v[0].prec();
    let w = omega_table(d, prec);
    let mut nrm2 = Float::new(prec);
    for x in v {
        nrm2 += x.norm_sqr();
    }
    let norm_err = Float::with_val(prec, &nrm2 - 1u32).abs();
    let target = Float::with_val(prec, d + 1).recip();
    let mut e_max = Float::new(prec);
    let mut sq = vec![0f64; (d * d) as usize];
    for m in 0..d {
        for n in 0..d {
            let o = overlap(v, m, n, &w);
            let a = o.norm_sqr() / Float::with_val(prec, nrm2.square_ref());
            sq[(m * d + n) as usize] = a.to_f64();
            if m == 0 && n == 0 {
                continue;
            }
            let e = Float::with_val(prec, &a - &target).abs();
            if e > e_max {
                e_max = e;
            }
        }
    }
    let (gmin, gmax) = gram_spectrum(d, &sq);
    // low-precision input still has to be a SIC to three digits
    let tol = pow10(prec, (10 - digits as i32).min(-3));
    let valid = e_max < tol && norm_err < tol;
    FiducialCertificate {
        d,
        v: v.to_vec(),
        lambda: None,
        e_max,
        norm_err,
        idempotency_err: None,
        digits,
        valid,
        gram_min: gmin,
        gram_max: gmax,
        valid_lambdas: vec![],
        note: String::new(),
    }
}

fn gram_spectrum(d: u64, sq: &[f64]) -> (f64, f64) {
    let tau = std::f64::consts::TAU;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for a in 0..d {
        for b in 0..d {
            let mut re = 0.0;
            for m in 0..d {
                for n in 0..d {
                    let th = tau * ((a * m + b * n) % d) as f64 / d as f64;
                    re += sq[(m * d + n) as usize] * th.cos();
                }
            }
            lo = lo.min(re);
            hi = hi.max(re);
        }
    }
    (lo, hi)
}

/// Roots of g̃ under ρ₁ ordered as the h̃-orbit from the canonical start.
#[derive(Clone, Debug)]
pub struct ConjugateOrbit {
    /// r_k for class exponent k
    pub values: Vec<Cx>,
    /// max distance from h̃(r_{k−1}) to the snapped root
    pub snap_err: Float,
    /// max ||r_k| − 1/√(d+1)|
    pub modulus_err: Float,
}

pub fn conjugate_orbit(gt: &RecognizedPolynomial, ht: &RecognizedPolynomial, digits: u32) -> Result<ConjugateOrbit> {
    let n = gt.degree();
    let base = working_bits(digits);
    // extra bits for cancellation when evaluating h̃ near |x| = 1/√(d+1)
    let hmax = ht.numeric(1, 64).iter().map(|c| c.to_f64().abs()).fold(1.0f64, f64::max);
    let prec = base + hmax.log2().max(0.0).ceil() as u32 + 32;
    let gc = gt.numeric_cx(1, prec);
    let hc = ht.numeric_cx(1, prec);
    let roots = aberth(&gc, prec)?.roots;
    let start = (0..n)
        .max_by(|&a, &b| {
            let ra = &roots[a];
            let rb = &roots[b];
            ra.re.partial_cmp(&rb.re).unwrap().then(ra.im.partial_cmp(&rb.im).unwrap())
        })
        .unwrap();
    let mut used = vec![false; n];
    let mut order = vec![start];
    used[start] = true;
    let mut snap = Float::new(prec);
    for _ in 1..n {
        let prev = &roots[*order.last().unwrap()];
        let img = eval_cx(&hc, prev);
        let (best, dist) = (0..n)
            .map(|i| (i, (&roots[i] - &img).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if used[best] {
            return Err(Error::Recognition("h̃ orbit revisits a root before exhausting g̃".into()));
        }
        used[best] = true;
        if dist > snap {
            snap = dist.clone();
        }
        order.push(best);
    }
    let back = eval_cx(&hc, &roots[*order.last().unwrap()]);
    let close = (&roots[start] - &back).abs();
    if close > snap {
        snap = close;
    }
    if snap > pow10(prec, 10 - digits as i32) {
        return Err(Error::Recognition(format!("h̃ orbit mismatch {}", fmt_float(&snap, 4))));
    }
    let target = Float::with_val(prec, gt.d + 1).sqrt().recip();
    let mut modulus_err = Float::new(prec);
    for r in &roots {
        let e = Float::with_val(prec, r.abs() - &target).abs();
        if e > modulus_err {
            modulus_err = e;
        }
    }
    let wp = bits_for_digits(digits + crate::num::GUARD_DIGITS);
    let values = order.iter().map(|&i| roots[i].with_prec(wp)).collect();
    Ok(ConjugateOrbit { values, snap_err: snap, modulus_err })
}

/// Rotate the orbit start by `shift` classes.
pub fn shift_values(values: &[Cx], shift: usize) -> Vec<Cx> {
    let n = values.len();
    (0..n).map(|k| values[(k + shift) % n].clone()).collect()
}

#[derive(Clone, Debug)]
pub struct LambdaOutcome {
    pub test: ProjectorTest,
    pub passed: bool,
}

/// Build σ(M) for every λ ∈ (Z/d)^× (or the given list) and test it.
pub fn lambda_search(
    group: &RayClassGroup,
    class_values: &[Cx],
    lambdas: &[u64],
    digits: u32,
    need_hermitian: bool,
) -> Result<Vec<(LambdaOutcome, BigComplexMatrix)>> {
    let d = group.d;
    let prec = class_values[0].prec();
    let table = overlap_table(group, class_values)?;
    Ok(lambdas
        .par_iter()
        .map(|&l| {
            let m = build_projector(d, &table, l, prec);
            let test = test_projector(&m, l);
            let passed = test.is_projector(digits, need_hermitian);
            (LambdaOutcome { test, passed }, m)
        })
        .collect())
}

pub fn all_lambdas(d: u64) -> Vec<u64> {
    (1..d).collect()
}

/// λ-search on the conjugate overlaps and extraction of the fiducial.
pub fn lambda_search_and_extract(
    group: &RayClassGroup,
    class_values: &[Cx],
    lambdas: &[u64],
    digits: u32,
) -> Result<(FiducialCertificate, Vec<LambdaOutcome>)> {
    let res = lambda_search(group, class_values, lambdas, digits, true)?;
    let outcomes: Vec<LambdaOutcome> = res.iter().map(|(o, _)| o.clone()).collect();
    let valid_lambdas: Vec<u64> = outcomes.iter().filter(|o| o.passed).map(|o| o.test.lambda).collect();
    let Some((o, m)) = res.into_iter().find(|(o, _)| o.passed) else {
        let diag: Vec<String> = outcomes
            .iter()
            .map(|o| format!("λ={} idem={} herm={}", o.test.lambda, fmt_float(&o.test.idempotent, 3), fmt_float(&o.test.hermitian, 3)))
            .collect();
        return Err(Error::Sic(format!("no λ gives a rank-1 Hermitian projector: {}", diag.join("; "))));
    };
    let v = extract_fiducial(&m, digits);
    let prec = m.prec;
    // ‖vv† − σ(M)‖
    let outer = BigComplexMatrix::from_fn(m.rows, m.cols, prec, |i, j| &v[i] * &v[j].conj());
    let rec = outer.sub(&m).max_abs();
    let mut cert = verify_sic(&v, digits);
    cert.lambda = Some(o.test.lambda);
    cert.idempotency_err = Some(o.test.idempotent.clone());
    cert.valid_lambdas = valid_lambdas;
    if rec > pow10(prec, 10 - digits as i32) {
        cert.valid = false;
        cert.note = format!("extracted vector does not reproduce σ(M): {}", fmt_float(&rec, 4));
    }
    Ok((cert, outcomes))
}

/// λ for which the real-embedding M is a rank-1 idempotent, if any.
pub fn real_projector_lambda(group: &RayClassGroup, nus: &[Float], digits: u32) -> Result<Option<ProjectorTest>> {
    let vals: Vec<Cx> = nus.iter().map(|x| Cx::real(x.clone())).collect();
    let res = lambda_search(group, &vals, &all_lambdas(group.d), digits, false)?;
    Ok(res.into_iter().map(|(o, _)| o).find(|o| o.passed).map(|o| o.test))
}

/// Parse one complex entry: "a", "a + b i", "a - bi", "bi", "a+b*i", "a + i b".
pub fn parse_complex(s: &str, prec: u32) -> Option<(Cx, u32)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace('*', "").replace('I', "i").replace('j', "i");
    let mut split = None;
    for (i, ch) in t.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !t[..i].ends_with(['e', 'E']) {
            split = Some(i);
        }
    }
    // decimal places carried, counting the exponent; exact zeros carry no limit
    let digits_of = |x: &str| -> u32 {
        let (mant, exp) = match x.find(['e', 'E']) {
            Some(i) => (&x[..i], x[i + 1..].parse::<i64>().unwrap_or(0)),
            None => (x, 0),
        };
        if !mant.chars().any(|c| ('1'..='9').contains(&c)) {
            return u32::MAX;
        }
        let places = mant.split_once('.').map_or(0, |(_, f)| f.chars().filter(|c| c.is_ascii_digit()).count() as i64);
        (places - exp).max(0) as u32
    };
    let (re_s, im_s) = match split {
        Some(i) => (&t[..i], Some(&t[i..])),
        None if t.contains('i') => ("0", Some(t.as_str())),
        None => (t.as_str(), None),
    };
    let re = parse_float(prec, re_s)?;
    let mut dig = digits_of(re_s);
    let im = match im_s {
        None => Float::new(prec),
        Some(x) => {
            let body = x.replace('i', "");
            let body = match body.as_str() {
                "" | "+" => "1".to_string(),
                "-" => "-1".to_string(),
                b => b.to_string(),
            };
            dig = dig.min(digits_of(&body));
            parse_float(prec, &body)?
        }
    };
    Some((Cx { re, im }, dig))
}

/// Fiducial text: one complex entry per line, '#' comments.
/// Returns the vector and the smallest number of significant digits seen.
pub fn parse_fiducial(text: &str) -> Result<(Vec<Cx>, u32)> {
    let prec = bits_for_digits(200);
    let mut v = Vec::new();
    let mut dig = u32::MAX;
    for line in text.lines() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (c, dd) = parse_complex(l, prec).ok_or_else(|| Error::Format(format!("cannot parse fiducial entry '{l}'")))?;
        dig = dig.min(dd);
        v.push(c);
    }
    if v.is_empty() {
        return Err(Error::Format("empty fiducial".into()));
    }
    Ok((v, if dig == u32::MAX { 30 } else { dig }))
}

pub fn format_fiducial(v: &[Cx], digits: usize) -> String {
    let mut s = String::new();
    for x in v {
        let im = fmt_float(&x.im, digits);
        let (sign, mag) = match im.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", im),
        };
        s.push_str(&format!("{} {} {}i\n", fmt_float(&x.re, digits), sign, mag));
    }
    s
}

/// Largest entrywise |a − b| after rotating `b` so that the phases of
/// the first entries agree.
pub fn aligned_distance(a: &[Cx], b: &[Cx]) -> Float {
    let prec = a[0].prec().min(b[0].prec());
    let b0 = &b[0];
    let a0 = &a[0];
    let mut worst = Float::new(prec);
    if b0.abs().is_zero() || a0.abs().is_zero() {
        return Float::with_val(prec, f64::INFINITY);
    }
    let rot = (a0 * &b0.conj()).scale(&(a0.abs() * b0.abs()).recip());
    for (x, y) in a.iter().zip(b) {
        let e = (&x.with_prec(prec) - &(y * &rot).with_prec(prec)).abs();
        if e > worst {
            worst = e;
        }
    }
    worst
}

/// How a computed Galois orbit element relates to a reference fiducial.
#[derive(Clone, Debug)]
pub struct ReferenceMatch {
    /// orbit start moved by this many classes
    pub shift: usize,
    pub lambda: u64,
    pub conjugated: bool,
    pub distance: Float,
    /// −log10 of the entrywise distance after phase alignment
    pub digits: f64,
}

impl ReferenceMatch {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "orbit_shift": self.shift,
            "lambda": self.lambda,
            "complex_conjugate": self.conjugated,
            "distance": fmt_float(&self.distance, 6),
            "matching_digits": format!("{:.1}", self.digits),
        })
    }
}

/// Search orbit shifts, λ and complex conjugation for the element of the
/// computed fiducial family closest to `reference`.
pub fn match_reference(group: &RayClassGroup, class_values: &[Cx], reference: &[Cx], digits: u32) -> Result<Option<ReferenceMatch>> {
    let d = group.d;
    if reference.len() as u64 != d {
        return Err(Error::Config(format!("reference has {} entries, expected {d}", reference.len())));
    }
    let prec = class_values[0].prec();
    let tol = pow10(prec, 10 - digits as i32);
    let n = class_values.len();
    let cands: Vec<(usize, u64)> = (0..n).flat_map(|s| (1..d).map(move |l| (s, l))).collect();
    let found: Vec<ReferenceMatch> = cands
        .par_iter()
        .filter_map(|&(shift, lambda)| {
            let vals = shift_values(class_values, shift);
            let table = overlap_table(group, &vals).ok()?;
            let m = build_projector(d, &table, lambda, prec);
            if m.mul(&m).sub(&m).max_abs() > tol {
                return None;
            }
            let v = extract_fiducial(&m, digits);
            let mut best: Option<ReferenceMatch> = None;
            for conjugated in [false, true] {
                let w: Vec<Cx> = v.iter().map(|x| if conjugated { x.conj() } else { x.clone() }).collect();
                let dist = aligned_distance(reference, &w);
                let dg = -crate::num::log10_abs(&dist);
                if best.as_ref().map_or(true, |b| dist < b.distance) {
                    best = Some(ReferenceMatch { shift, lambda, conjugated, distance: dist, digits: dg });
                }
            }
            best
        })
        .collect();
    Ok(found.into_iter().min_by(|a, b| a.distance.partial_cmp(&b.distance).unwrap()))
}
