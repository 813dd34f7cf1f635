//! Choosing the signs of ν_A = ±√(α_A/(d+1)).

use crate::error::{Error, Result};
use crate::lattice::lll_reduce;
use crate::num::{fmt_float, round_int, working_bits, Cx};
use crate::poly::aberth;
use crate::quadfield::FieldContext;
use crate::rayclass::RayClassGroup;
use crate::recognition::{apply_signs, build_g, nu_magnitudes, table_rel_err, try_build_g, RecognizedPolynomial};
use crate::sic::real_projector_lambda;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde_json::json;

#[derive(Clone, Debug)]
pub enum SignStrategy {
    Bruteforce,
    KnownG(RecognizedPolynomial),
    Search,
}

impl SignStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            SignStrategy::Bruteforce => "bruteforce",
            SignStrategy::KnownG(_) => "known_g",
            SignStrategy::Search => "search",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SignAssignment {
    /// s_k for class exponent k
    pub signs: Vec<i8>,
    /// ν_k·ν_{k+R} = κ/(d+1)
    pub kappa: i8,
    pub strategy: String,
    /// sign vectors (up to global sign) whose g recognized
    pub admissible: usize,
    /// λ at which the real-embedding M is a rank-1 idempotent
    pub real_lambda: Option<u64>,
    pub nus: Vec<Float>,
    pub g: RecognizedPolynomial,
}

impl SignAssignment {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "strategy": self.strategy,
            "signs": self.signs,
            "kappa": self.kappa,
            "admissible": self.admissible,
            "real_lambda": self.real_lambda,
        })
    }
}

fn kappa_of(signs: &[i8], r: usize) -> Result<i8> {
    let k = signs[0] * signs[r];
    if (0..r).all(|i| signs[i] * signs[i + r] == k) {
        Ok(k)
    } else {
        Err(Error::Signs("sign vector violates the ν_{−m,−n} pairing".into()))
    }
}

/// Decide between s and −s with the M² = M test.
fn pick_global(group: &RayClassGroup, mu: &[Float], signs: Vec<i8>, digits: u32) -> Result<(Vec<i8>, Option<u64>)> {
    let neg: Vec<i8> = signs.iter().map(|s| -s).collect();
    let a = real_projector_lambda(group, &apply_signs(mu, &signs), digits)?;
    let b = real_projector_lambda(group, &apply_signs(mu, &neg), digits)?;
    match (a, b) {
        (Some(t), None) => Ok((signs, Some(t.lambda))),
        (None, Some(t)) => Ok((neg, Some(t.lambda))),
        (Some(t), Some(_)) => Ok((signs, Some(t.lambda))),
        (None, None) => Err(Error::Signs("neither global sign gives an idempotent M".into())),
    }
}

pub fn resolve_signs(
    ctx: &FieldContext,
    group: &RayClassGroup,
    alphas: &[Float],
    strategy: &SignStrategy,
    digits: u32,
) -> Result<SignAssignment> {
    let n = alphas.len();
    let r = group.r_index;
    let mu = nu_magnitudes(ctx.d, alphas);
    match strategy {
        SignStrategy::Bruteforce => {
            if n > 24 {
                return Err(Error::Config(format!(
                    "bruteforce over 2^{} sign vectors is infeasible; use known_g:PATH or search",
                    n - 1
                )));
            }
            let mut found = Vec::new();
            for mask in 0u64..(1u64 << (n - 1)) {
                let signs: Vec<i8> = (0..n).map(|k| if k > 0 && (mask >> (k - 1)) & 1 == 1 { -1 } else { 1 }).collect();
                if try_build_g(ctx, &apply_signs(&mu, &signs), digits).is_ok() {
                    found.push(signs);
                }
            }
            if found.is_empty() {
                return Err(Error::Signs("no sign vector gives a g over K".into()));
            }
            let admissible = found.len();
            let mut last_err = None;
            for s in found {
                let kappa = match kappa_of(&s, r) {
                    Ok(k) => k,
                    Err(e) => {
                        last_err = Some(e);
                        continue;
                    }
                };
                match pick_global(group, &mu, s, digits) {
                    Ok((signs, lam)) => {
                        let nus = apply_signs(&mu, &signs);
                        let g = build_g(ctx, &nus, digits)?;
                        return Ok(SignAssignment { signs, kappa, strategy: "bruteforce".into(), admissible, real_lambda: lam, nus, g });
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            Err(last_err.unwrap())
        }
        SignStrategy::KnownG(g) => {
            if g.d != ctx.d || g.degree() != n {
                return Err(Error::Config(format!("supplied g has d={} degree={}, expected d={} degree={n}", g.d, g.degree(), ctx.d)));
            }
            let prec = working_bits(digits);
            let roots = aberth(&g.numeric_cx(1, prec), prec)?.roots;
            let d1 = Float::with_val(prec, ctx.d + 1);
            let mut signs = vec![0i8; n];
            for root in &roots {
                if root.im.clone().abs() > Float::with_val(prec, &root.re * 1e-10).abs() + 1e-30 {
                    return Err(Error::Signs("supplied g has non-real roots under ρ₁".into()));
                }
                let sq = Float::with_val(prec, root.re.square_ref()) * &d1;
                let (k, _) = alphas
                    .iter()
                    .enumerate()
                    .map(|(k, a)| (k, Float::with_val(prec, &sq - a).abs()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                if signs[k] != 0 {
                    return Err(Error::Signs("roots of the supplied g do not match the α values one to one".into()));
                }
                signs[k] = if root.re.is_sign_negative() { -1 } else { 1 };
            }
            let kappa = kappa_of(&signs, r)?;
            let nus = apply_signs(&mu, &signs);
            let rebuilt = build_g(ctx, &nus, digits)?;
            let lead = g.leading().clone();
            let rl = rebuilt.leading().clone();
            let same = g.coeffs.iter().zip(&rebuilt.coeffs).all(|(a, b)| &(a * &rl) == &(b * &lead));
            if !same {
                return Err(Error::Signs("g rebuilt from the computed ν differs from the supplied g".into()));
            }
            let real_lambda = real_projector_lambda(group, &nus, digits)?.map(|t| t.lambda);
            Ok(SignAssignment { signs, kappa, strategy: "known_g".into(), admissible: 1, real_lambda, nus, g: rebuilt })
        }
        SignStrategy::Search => {
            let mut last = None;
            for kappa in [1i8, -1] {
                match knapsack(ctx, &mu, r, kappa, digits) {
                    Ok(Some(half)) => {
                        let mut signs = vec![0i8; n];
                        for k in 0..r {
                            signs[k] = half[k];
                            signs[k + r] = kappa * half[k];
                        }
                        let (signs, lam) = match pick_global(group, &mu, signs, digits) {
                            Ok(x) => x,
                            Err(e) => {
                                last = Some(e);
                                continue;
                            }
                        };
                        let nus = apply_signs(&mu, &signs);
                        let g = build_g(ctx, &nus, digits)?;
                        return Ok(SignAssignment { signs, kappa, strategy: "search".into(), admissible: 1, real_lambda: lam, nus, g });
                    }
                    Ok(None) => {}
                    Err(e) => last = Some(e),
                }
            }
            Err(last.unwrap_or_else(|| Error::Signs("lattice search found no admissible sign vector; try known_g:PATH".into())))
        }
    }
}

/// Lattice search for s ∈ {±1}^R such that the scaled odd power sums
/// (d+1)^{(j+1)/2} Σ_k s_k (μ_k^j + κ/((d+1)μ_k)^j) lie in O_K with
/// conjugates bounded by N√(d+1).
fn knapsack(ctx: &FieldContext, mu: &[Float], r: usize, kappa: i8, digits: u32) -> Result<Option<Vec<i8>>> {
    let prec = working_bits(digits);
    let n = mu.len();
    let m = ctx.radicand;
    let d1 = Float::with_val(prec, ctx.d + 1);
    let sm = Float::with_val(prec, m).sqrt();
    let rel = table_rel_err(digits);
    let bound = Float::with_val(prec, n as u32) * Float::with_val(prec, d1.sqrt_ref());
    let twice = if m % 4 == 1 { 2u32 } else { 1 };
    // columns per exponent: entries C_{k,j}, error scale and bits of constraint
    let mut cols: Vec<(Vec<Float>, Float)> = Vec::new();
    let mut bits = 0.0;
    let need = (r as f64 + 4.0) * 8.0 + 60.0;
    let mut j = 1u32;
    while bits < need && j < 4 * n as u32 + 1 {
        let scale = Float::with_val(prec, d1.clone().pow((j + 1) / 2)) * twice;
        let mut c = Vec::with_capacity(r);
        let mut amax = Float::with_val(prec, 1);
        for k in 0..r {
            let a = Float::with_val(prec, mu[k].clone().pow(j));
            let b = Float::with_val(prec, Float::with_val(prec, &d1 * &mu[k]).pow(j)).recip();
            let v = if kappa == 1 { a + b } else { a - b } * &scale;
            let av = Float::with_val(prec, v.abs_ref());
            if av > amax {
                amax = av;
            }
            c.push(v);
        }
        let err = Float::with_val(prec, &amax * &rel) * (n as u32 * j);
        let gain = (Float::with_val(prec, &sm * 2u32) / (Float::with_val(prec, &err * &bound) * twice)).log2().to_f64();
        if gain > 4.0 {
            bits += gain;
            cols.push((c, err));
        }
        j += 2;
    }
    if bits < need {
        return Err(Error::Signs(format!("precision too low for the sign search ({bits:.0} of {need:.0} bits)")));
    }
    let jn = cols.len();
    let dim = r + 2 * jn;
    let big = Float::with_val(prec, Float::i_exp(1, 16));
    let z = || Integer::new();
    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(dim);
    let conv = |v: Float| round_int(&Float::with_val(prec, v * &big));
    for k in 0..r {
        let mut row = vec![z(); r + 2 * jn];
        row[k] = conv(Float::with_val(prec, 1));
        for (jj, (c, err)) in cols.iter().enumerate() {
            row[r + 2 * jj] = conv(Float::with_val(prec, &c[k] / err));
        }
        basis.push(row);
    }
    for (jj, (_, err)) in cols.iter().enumerate() {
        let w1 = Float::with_val(prec, err.clone().recip());
        let w2 = Float::with_val(prec, bound.clone().recip()) / twice;
        let mut ra = vec![z(); r + 2 * jn];
        ra[r + 2 * jj] = conv(-w1.clone());
        ra[r + 2 * jj + 1] = conv(w2.clone());
        let mut rb = vec![z(); r + 2 * jn];
        rb[r + 2 * jj] = conv(-Float::with_val(prec, &w1 * &sm));
        rb[r + 2 * jj + 1] = conv(-Float::with_val(prec, &w2 * &sm));
        basis.push(ra);
        basis.push(rb);
    }
    lll_reduce(&mut basis, 0.99);
    let unit = conv(Float::with_val(prec, 1));
    for row in &basis {
        if row[..r].iter().all(|x| *x == unit || Integer::from(-x) == unit) {
            let s: Vec<i8> = row[..r].iter().map(|x| if *x == unit { 1 } else { -1 }).collect();
            let s: Vec<i8> = if s[0] < 0 { s.iter().map(|x| -x).collect() } else { s };
            let mut full = vec![0i8; n];
            for k in 0..r {
                full[k] = s[k];
                full[k + r] = kappa * s[k];
            }
            if try_build_g(ctx, &apply_signs(mu, &full), digits).is_ok() {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Numeric ν values as complex numbers (real embedding).
pub fn nus_cx(nus: &[Float]) -> Vec<Cx> {
    nus.iter().map(|x| Cx::real(x.clone())).collect()
}

pub fn describe(s: &SignAssignment) -> String {
    format!(
        "signs {:?} κ={} via {} ({} admissible)",
        s.signs,
        s.kappa,
        s.strategy,
        s.admissible
    ) + &s.nus.first().map(|x| format!(" ν₀={}", fmt_float(x, 12))).unwrap_or_default()
}
