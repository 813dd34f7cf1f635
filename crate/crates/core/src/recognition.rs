//! Algebraic recognition of Stark units and the polynomials f, g, g̃, h, h̃.

use crate::error::{Error, Result};
use crate::lattice::lll_reduce;
use crate::linalg::BigComplexMatrix;
use crate::num::{binomial, fmt_float, log10_abs, pow10, round_int, working_bits, Cx, GUARD_DIGITS};
use crate::poly::{eval_abs_real, eval_real, expand_abs, expand_real};
use crate::quadfield::{squarefree_part, FieldContext, QuadRational};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::fmt;

#[derive(Clone, Debug)]
pub struct RecognizedQuad {
    /// p + q√m, or None on failure
    pub value: Option<QuadRational>,
    pub residual: Float,
    pub note: String,
}

impl RecognizedQuad {
    fn fail(prec: u32, note: impl Into<String>) -> Self {
        RecognizedQuad { value: None, residual: Float::with_val(prec, f64::INFINITY), note: note.into() }
    }

    pub fn ok(&self) -> bool {
        self.value.is_some()
    }
}

/// Integer relation c0 + c1√m + c2·x = 0 via LLL on (1, √m, x) scaled by
/// 10^{P−10}. Accepts when all |cᵢ| ≤ H and |x − (p + q√m)| < 10^{10−P}.
/// Needs P ≥ 3·log10 H + 20 so that chance relations among random reals
/// exceed the height bound.
pub fn recognize_quad(x: &Float, m: u64, height_bound: &Integer, digits: u32) -> RecognizedQuad {
    let prec = x.prec().max(working_bits(digits));
    let logh = log10_abs(&Float::with_val(64, height_bound));
    if (digits as f64) < 3.0 * logh + 20.0 {
        return RecognizedQuad::fail(prec, format!("precision {digits} too low for height 10^{logh:.1}"));
    }
    let c = pow10(prec, digits as i32 - 10);
    let sm = Float::with_val(prec, m).sqrt();
    let col = |v: &Float| round_int(&Float::with_val(prec, v * &c));
    let z = Integer::new;
    let mut basis = vec![
        vec![Integer::from(1), z(), z(), col(&Float::with_val(prec, 1))],
        vec![z(), Integer::from(1), z(), col(&sm)],
        vec![z(), z(), Integer::from(1), col(x)],
    ];
    lll_reduce(&mut basis, 0.99);
    let tol = pow10(prec, 10 - digits as i32);
    let mut best: Option<RecognizedQuad> = None;
    for v in &basis {
        if v[2] == 0 || v[..3].iter().any(|ci| Integer::from(ci.abs_ref()) > *height_bound) {
            continue;
        }
        let p = Rational::from((Integer::from(-&v[0]), v[2].clone()));
        let q = Rational::from((Integer::from(-&v[1]), v[2].clone()));
        let val = QuadRational::new(p, q, m);
        let res = Float::with_val(prec, x - &val.rho1(prec)).abs();
        if res < tol && best.as_ref().map_or(true, |b| res < b.residual) {
            best = Some(RecognizedQuad { value: Some(val), residual: res, note: String::new() });
        }
    }
    best.unwrap_or_else(|| RecognizedQuad::fail(prec, "no relation within height bound"))
}

/// Recognize c = (a + b√m)/D from x ≈ ρ₁(c) with absolute error `err`,
/// given |ρ₂(c)| ≤ B. Kannan embedding of the closest-vector problem.
pub fn recognize_bounded(x: &Float, m: u64, den: &Integer, conj_bound: &Float, err: &Float) -> RecognizedQuad {
    let prec = x.prec();
    let dd = if m % 4 == 1 { Integer::from(den * 2u32) } else { den.clone() };
    let dfl = Float::with_val(prec, &dd);
    let err = Float::with_val(prec, err).max(&Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)));
    let w1 = Float::with_val(prec, &dfl * &err).recip();
    let bb = Float::with_val(prec, conj_bound).max(&Float::with_val(prec, 1e-6));
    let w2 = Float::with_val(prec, &dfl * &bb).recip();
    let sm = Float::with_val(prec, m).sqrt();
    let det = Float::with_val(prec, &w1 * &w2) * &sm * 2u32;
    if det < 1e8 {
        return RecognizedQuad::fail(prec, format!("insufficient precision: lattice determinant 10^{:.1}", log10_abs(&det)));
    }
    let sc = Float::with_val(prec, Float::i_exp(1, 20)) * Float::with_val(prec, &dfl * &bb).max(&Float::with_val(prec, 1));
    let r = |v: Float| round_int(&Float::with_val(prec, v * &sc));
    let z = Integer::new;
    let target = Float::with_val(prec, &w1 * &dfl) * x;
    let mut basis = vec![
        vec![r(w1.clone()), r(w2.clone()), z(), Integer::from(1), z(), z()],
        vec![r(Float::with_val(prec, &w1 * &sm)), r(-Float::with_val(prec, &w2 * &sm)), z(), z(), Integer::from(1), z()],
        vec![r(-target), z(), r(Float::with_val(prec, 1)), z(), z(), Integer::from(1)],
    ];
    lll_reduce(&mut basis, 0.99);
    let slack_res = Float::with_val(prec, &err * &dfl) * 8u32;
    let slack_conj = Float::with_val(prec, &bb * &dfl) * 1.000001;
    let mut best: Option<RecognizedQuad> = None;
    for v in &basis {
        let t = &v[5];
        if *t != 1 && *t != -1 {
            continue;
        }
        let (a, b) = if *t == 1 { (v[3].clone(), v[4].clone()) } else { (Integer::from(-&v[3]), Integer::from(-&v[4])) };
        let val = QuadRational::new(Rational::from((a, dd.clone())), Rational::from((b, dd.clone())), m);
        let scaled = val.scale(&Rational::from(&dd));
        let res = Float::with_val(prec, Float::with_val(prec, x * &dfl) - scaled.rho1(prec)).abs();
        let conj = scaled.rho2(prec).abs();
        if m % 4 == 1 && !val.scale(&Rational::from(den)).is_integral() {
            continue;
        }
        if res <= slack_res && conj <= slack_conj {
            let r = Float::with_val(prec, &res / &dfl);
            if best.as_ref().map_or(true, |bq| r < bq.residual) {
                best = Some(RecognizedQuad { value: Some(val), residual: r, note: String::new() });
            }
        }
    }
    best.unwrap_or_else(|| RecognizedQuad::fail(prec, "no lattice vector within residual and conjugate bounds"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    F,
    G,
    GTilde,
    H,
    HTilde,
}

impl Role {
    pub fn tag(&self) -> &'static str {
        match self {
            Role::F => "f",
            Role::G => "g",
            Role::GTilde => "gtilde",
            Role::H => "h",
            Role::HTilde => "htilde",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        Some(match s.trim() {
            "f" => Role::F,
            "g" => Role::G,
            "gtilde" | "g~" | "g_conj" => Role::GTilde,
            "h" => Role::H,
            "htilde" | "h~" | "h_conj" => Role::HTilde,
            _ => return None,
        })
    }

    fn conj(&self) -> Role {
        match self {
            Role::F => Role::F,
            Role::G => Role::GTilde,
            Role::GTilde => Role::G,
            Role::H => Role::HTilde,
            Role::HTilde => Role::H,
        }
    }
}

/// Polynomial over K with exact coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct RecognizedPolynomial {
    pub d: u64,
    pub m: u64,
    pub role: Role,
    pub coeffs: Vec<QuadRational>,
}

impl RecognizedPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &QuadRational {
        self.coeffs.last().unwrap()
    }

    /// Coefficient-wise √m ↦ −√m.
    pub fn conj(&self) -> Self {
        RecognizedPolynomial { d: self.d, m: self.m, role: self.role.conj(), coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// x^N f(1/x) = f(x)
    pub fn is_palindromic(&self) -> bool {
        let n = self.degree();
        (0..=n).all(|i| self.coeffs[i] == self.coeffs[n - i])
    }

    /// coef[x^{N−k}] = base^{N/2−k}·coef[x^k], i.e. roots closed under x ↦ 1/(base·x).
    pub fn is_scaled_palindromic(&self, base: u64) -> bool {
        let n = self.degree();
        if n % 2 == 1 {
            return false;
        }
        (0..=n / 2).all(|k| {
            let f = Rational::from(Integer::from(base).pow((n / 2 - k) as u32));
            self.coeffs[n - k] == self.coeffs[k].scale(&f)
        })
    }

    pub fn numeric(&self, which: u8, prec: u32) -> Vec<Float> {
        self.coeffs.iter().map(|c| c.rho(which, prec)).collect()
    }

    pub fn numeric_cx(&self, which: u8, prec: u32) -> Vec<Cx> {
        self.numeric(which, prec).into_iter().map(Cx::real).collect()
    }

    pub fn eval_exact(&self, x: &QuadRational) -> QuadRational {
        let mut acc = QuadRational::zero(self.m);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# stark-sic polynomial\n# d={}\n# degree={}\n# role={}\n# radicand={}\n",
            self.d,
            self.degree(),
            self.role.tag(),
            self.m
        );
        for c in self.coeffs.iter().rev() {
            s.push_str(&c.to_fraction_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut d = None;
        let mut role = None;
        let mut degree = None;
        let mut m = None;
        let mut lines = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                if let Some((k, v)) = h.trim().split_once('=') {
                    let v = v.trim();
                    match k.trim() {
                        "d" => d = v.parse::<u64>().ok(),
                        "degree" => degree = v.parse::<usize>().ok(),
                        "role" => role = Role::parse(v),
                        "radicand" => m = v.parse::<u64>().ok(),
                        _ => {}
                    }
                }
                continue;
            }
            lines.push(line.to_string());
        }
        let d = d.ok_or_else(|| Error::Format("missing d= header".into()))?;
        let m = m.unwrap_or_else(|| squarefree_part((d + 1) * (d - 3)).1);
        let role = role.ok_or_else(|| Error::Format("missing role= header".into()))?;
        let mut coeffs = lines.iter().map(|l| parse_quad(l, m)).collect::<Result<Vec<_>>>()?;
        coeffs.reverse();
        if let Some(n) = degree {
            if n + 1 != coeffs.len() {
                return Err(Error::Format(format!("degree {n} but {} coefficients", coeffs.len())));
            }
        }
        if coeffs.is_empty() {
            return Err(Error::Format("no coefficients".into()));
        }
        Ok(RecognizedPolynomial { d, m, role, coeffs })
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for RecognizedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for i in (0..=n).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*x^{i}")?;
            }
        }
        Ok(())
    }
}

/// Parse "p/r + q/r * sqrt(n)" and looser variants; √n is rewritten in
/// terms of √m when n = t²m.
pub fn parse_quad(s: &str, m: u64) -> Result<QuadRational> {
    let bad = || Error::Format(format!("cannot parse coefficient '{s}'"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // split into signed terms
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for (i, ch) in t.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && i > 0 && depth == 0 && !cur.ends_with('*') && !cur.ends_with('/') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut p = Rational::new();
    let mut q = Rational::new();
    for term in terms.into_iter().filter(|x| !x.is_empty() && x != "+") {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, term.trim_start_matches('+').to_string()),
        };
        let (coef_str, root) = if let Some(idx) = body.find("sqrt(") {
            let inner = body[idx + 5..].trim_end_matches(')');
            let n: u64 = inner.parse().map_err(|_| bad())?;
            let c = body[..idx].trim_end_matches('*');
            (c.to_string(), Some(n))
        } else {
            (body.clone(), None)
        };
        let mut c = if coef_str.is_empty() {
            Rational::from(1)
        } else if let Some((a, b)) = coef_str.split_once('/') {
            let a: Integer = a.parse().map_err(|_| bad())?;
            let b: Integer = b.parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Rational::from((a, b))
        } else {
            Rational::from(coef_str.parse::<Integer>().map_err(|_| bad())?)
        };
        if neg {
            c = -c;
        }
        match root {
            None => p += c,
            Some(n) => {
                if n % m != 0 {
                    return Err(bad());
                }
                let r = n / m;
                let tt = (r as f64).sqrt().round() as u64;
                if tt * tt != r {
                    return Err(bad());
                }
                q += c * tt;
            }
        }
    }
    Ok(QuadRational::new(p, q, m))
}

/// Relative error model for quantities derived from the zeta table.
pub fn table_rel_err(digits: u32) -> Float {
    pow10(working_bits(digits), -((digits + GUARD_DIGITS) as i32 - 6))
}

/// Recognize ascending numeric coefficients given per-coefficient
/// denominators, conjugate bounds and absolute error estimates.
fn recognize_coeffs(
    vals: &[Float],
    m: u64,
    dens: &[Integer],
    bounds: &[Float],
    errs: &[Float],
) -> std::result::Result<Vec<QuadRational>, (usize, String)> {
    let mut out = Vec::with_capacity(vals.len());
    for i in 0..vals.len() {
        let r = recognize_bounded(&vals[i], m, &dens[i], &bounds[i], &errs[i]);
        match r.value {
            Some(v) => out.push(v),
            None => return Err((i, r.note)),
        }
    }
    Ok(out)
}

/// f(x) = Π_A (x − α_A), expanded in class order and recognized over K.
pub fn build_f(ctx: &FieldContext, alphas: &[Float], digits: u32) -> Result<RecognizedPolynomial> {
    let prec = working_bits(digits);
    let n = alphas.len();
    let vals = expand_real(alphas, prec);
    let absv = expand_abs(alphas, prec);
    let rel = table_rel_err(digits) * n as u32;
    let errs: Vec<Float> = absv.iter().map(|a| Float::with_val(prec, a.clone().max(&Float::with_val(prec, 1)) * &rel)).collect();
    let bounds: Vec<Float> = (0..=n).map(|i| Float::with_val(prec, &binomial(n as u64, i as u64))).collect();
    let dens = vec![Integer::from(1); n + 1];
    let coeffs = recognize_coeffs(&vals, ctx.radicand, &dens, &bounds, &errs).map_err(|(i, note)| {
        Error::Recognition(format!("f_{}: coefficient of x^{i} not recognized ({note}); retry with higher precision", ctx.d))
    })?;
    let f = RecognizedPolynomial { d: ctx.d, m: ctx.radicand, role: Role::F, coeffs };
    check_roundtrip(&f, alphas, digits)?;
    Ok(f)
}

/// Residual |p(r)| / Σ|cᵢ||r|^i below 10^{15−P} for every numeric root.
pub fn check_roundtrip(p: &RecognizedPolynomial, roots: &[Float], digits: u32) -> Result<Float> {
    let prec = working_bits(digits);
    let c = p.numeric(1, prec);
    let tol = pow10(prec, 15 - digits as i32);
    let mut worst = Float::new(prec);
    for r in roots {
        let v = eval_real(&c, r).abs() / eval_abs_real(&c, r);
        if v > worst {
            worst = v;
        }
    }
    if worst > tol {
        return Err(Error::Recognition(format!("{} round-trip residual {} too large", p.role.tag(), fmt_float(&worst, 5))));
    }
    Ok(worst)
}

/// Numeric coefficients of (d+1)^{N/2} Π (x − ν) with conjugate bounds.
fn g_numeric(d: u64, nus: &[Float], prec: u32) -> (Vec<Float>, Vec<Float>, Vec<Float>) {
    let n = nus.len();
    let scale = Float::with_val(prec, d + 1).pow(n as u32 / 2);
    let vals: Vec<Float> = expand_real(nus, prec).into_iter().map(|v| v * &scale).collect();
    let absv: Vec<Float> = expand_abs(nus, prec).into_iter().map(|v| v * &scale).collect();
    let sq = Float::with_val(prec, d + 1).sqrt();
    // coefficient of x^i is ±(d+1)^{N/2} e_{N−i}; conjugates have modulus (d+1)^{-1/2}
    let bounds = (0..=n)
        .map(|i| {
            let k = (n - i) as i32;
            Float::with_val(prec, &binomial(n as u64, (n - i) as u64)) * &scale / Float::with_val(prec, sq.clone().pow(k))
        })
        .collect();
    (vals, absv, bounds)
}

/// Try to recognize g from signed ν; None if any coefficient fails.
pub fn try_build_g(ctx: &FieldContext, nus: &[Float], digits: u32) -> std::result::Result<RecognizedPolynomial, (usize, String)> {
    let prec = working_bits(digits);
    let n = nus.len();
    let (vals, absv, bounds) = g_numeric(ctx.d, nus, prec);
    let rel = table_rel_err(digits) * n as u32;
    let errs: Vec<Float> = absv.iter().map(|a| Float::with_val(prec, a.clone().max(&Float::with_val(prec, 1)) * &rel)).collect();
    let dens = vec![Integer::from(1); n + 1];
    // cheap high-degree coefficients first so wrong sign vectors fail fast
    let order: Vec<usize> = (0..=n).rev().collect();
    let mut coeffs = vec![QuadRational::zero(ctx.radicand); n + 1];
    for i in order {
        let r = recognize_bounded(&vals[i], ctx.radicand, &dens[i], &bounds[i], &errs[i]);
        match r.value {
            Some(v) => coeffs[i] = v,
            None => return Err((i, r.note)),
        }
    }
    Ok(RecognizedPolynomial { d: ctx.d, m: ctx.radicand, role: Role::G, coeffs })
}

pub fn build_g(ctx: &FieldContext, nus: &[Float], digits: u32) -> Result<RecognizedPolynomial> {
    let g = try_build_g(ctx, nus, digits).map_err(|(i, note)| {
        Error::Recognition(format!("g_{}: coefficient of x^{i} not recognized ({note})", ctx.d))
    })?;
    check_roundtrip(&g, nus, digits)?;
    Ok(g)
}

pub fn conjugate_poly(p: &RecognizedPolynomial) -> RecognizedPolynomial {
    p.conj()
}

/// ν magnitudes √(α/(d+1)).
pub fn nu_magnitudes(d: u64, alphas: &[Float]) -> Vec<Float> {
    alphas.iter().map(|a| Float::with_val(a.prec(), a / (d + 1) as u32).sqrt()).collect()
}

pub fn apply_signs(mu: &[Float], signs: &[i8]) -> Vec<Float> {
    mu.iter().zip(signs).map(|(x, &s)| if s < 0 { -x.clone() } else { x.clone() }).collect()
}

/// Power sums p_0..p_{count−1} of the roots of `poly`, exactly (Newton).
pub fn power_sums(poly: &RecognizedPolynomial, count: usize) -> Vec<QuadRational> {
    let n = poly.degree();
    let m = poly.m;
    let lead = poly.leading().clone();
    let a: Vec<QuadRational> = poly.coeffs.iter().map(|c| c / &lead).collect();
    let mut p = vec![QuadRational::from_int(n as i64, m)];
    for k in 1..count {
        let mut s = QuadRational::zero(m);
        for i in 1..=k.min(n) {
            if i == k {
                s = &s + &a[n - k].scale(&Rational::from(k as i64));
            } else {
                s = &s + &(&a[n - i] * &p[k - i]);
            }
        }
        p.push(-&s);
    }
    p
}

/// Solve A x = b exactly over K by Gaussian elimination.
pub fn solve_exact(mut a: Vec<Vec<QuadRational>>, mut b: Vec<QuadRational>) -> Option<Vec<QuadRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(piv, col);
        b.swap(piv, col);
        let inv = a[col][col].inv()?;
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] * &inv;
            for j in col..n {
                let t = &f * &a[col][j];
                a[i][j] = &a[i][j] - &t;
            }
            let t = &f * &b[col];
            b[i] = &b[i] - &t;
        }
    }
    let m = b[0].radicand();
    let mut x = vec![QuadRational::zero(m); n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            let t = &a[i][j] * &x[j];
            s = &s - &t;
        }
        x[i] = &s / &a[i][i];
    }
    Some(x)
}

#[derive(Clone, Debug)]
pub struct HDiagnostics {
    /// max relative |h(ν_k) − ν_{k+1}|
    pub orbit_residual: Float,
    /// max relative residual of the numeric Vandermonde solve
    pub vandermonde_residual: Float,
    /// max |c_numeric − ρ₁(c_exact)| / max|c|
    pub vandermonde_agreement: Float,
}

/// h with h(ν_k) = ν_{k+1} for the Galois orbit ordered by class exponent.
/// Traces s_i = Σ ν_{k+1} ν_k^i are recognized over K and the Hankel system
/// Σ_l c_l p_{i+l} = s_i is solved exactly.
pub fn solve_h(ctx: &FieldContext, g: &RecognizedPolynomial, nus: &[Float], digits: u32) -> Result<(RecognizedPolynomial, HDiagnostics)> {
    let prec = working_bits(digits);
    let n = nus.len();
    let d1 = ctx.d + 1;
    let sq = Float::with_val(prec, d1).sqrt();
    let rel = table_rel_err(digits) * (n * n) as u32;
    let mut svals = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = Float::new(prec);
        let mut sa = Float::new(prec);
        for k in 0..n {
            let t = Float::with_val(prec, &nus[(k + 1) % n] * Float::with_val(prec, (&nus[k]).pow(i as u32)));
            sa += Float::with_val(prec, t.abs_ref());
            s += t;
        }
        let den = Integer::from(d1).pow(((i + 2) / 2) as u32);
        let bound = Float::with_val(prec, n as u32) / Float::with_val(prec, sq.clone().pow((i + 1) as u32));
        let err = Float::with_val(prec, sa.max(&Float::with_val(prec, 1)) * &rel);
        let r = recognize_bounded(&s, ctx.radicand, &den, &bound, &err);
        svals.push(r.value.ok_or_else(|| {
            Error::Recognition(format!("h_{}: trace s_{i} not recognized ({}); retry with higher precision", ctx.d, r.note))
        })?);
    }
    let ps = power_sums(g, 2 * n - 1);
    let hankel: Vec<Vec<QuadRational>> = (0..n).map(|i| (0..n).map(|l| ps[i + l].clone()).collect()).collect();
    let c = solve_exact(hankel, svals).ok_or_else(|| Error::Recognition("Hankel system singular".into()))?;
    let h = RecognizedPolynomial { d: ctx.d, m: ctx.radicand, role: Role::H, coeffs: c };
    // numeric validation
    let hc = h.numeric(1, prec);
    let mut orbit = Float::new(prec);
    for k in 0..n {
        let v = Float::with_val(prec, eval_real(&hc, &nus[k]) - &nus[(k + 1) % n]).abs() / eval_abs_real(&hc, &nus[k]);
        if v > orbit {
            orbit = v;
        }
    }
    if orbit > pow10(prec, 15 - digits as i32) {
        return Err(Error::Recognition(format!("h orbit residual {}", fmt_float(&orbit, 5))));
    }
    let (vres, vagree) = vandermonde_check(nus, &hc, prec);
    Ok((h, HDiagnostics { orbit_residual: orbit, vandermonde_residual: vres, vandermonde_agreement: vagree }))
}

/// Numeric Vandermonde solve V c = (ν_{k+1}) for comparison with exact h.
fn vandermonde_check(nus: &[Float], exact: &[Float], prec: u32) -> (Float, Float) {
    let n = nus.len();
    let wp = prec * 2;
    let v = BigComplexMatrix::from_fn(n, n, wp, |k, i| Cx::real(Float::with_val(wp, (&nus[k]).pow(i as u32))));
    let rhs: Vec<Cx> = (0..n).map(|k| Cx::real(Float::with_val(wp, &nus[(k + 1) % n]))).collect();
    let Some(c) = v.solve(&rhs) else {
        return (Float::with_val(prec, f64::INFINITY), Float::with_val(prec, f64::INFINITY));
    };
    let back = v.mul_vec(&c);
    let mut res = Float::new(prec);
    for (a, b) in back.iter().zip(&rhs) {
        let e = Float::with_val(prec, (a - b).abs() / b.abs().max(&Float::with_val(wp, 1e-300)));
        if e > res {
            res = e;
        }
    }
    let mut diff = Float::new(prec);
    let mut maxc = Float::with_val(prec, 1e-300);
    for (a, b) in c.iter().zip(exact) {
        let e = Float::with_val(prec, &a.re - b).abs();
        if e > diff {
            diff = e;
        }
        let ab = Float::with_val(prec, b.abs_ref());
        if ab > maxc {
            maxc = ab;
        }
    }
    (res, diff / maxc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        let m = 3;
        assert_eq!(parse_quad("8/1 + 5/1 * sqrt(3)", m).unwrap(), QuadRational::new(8, 5, 3));
        assert_eq!(parse_quad("-8 - 5*sqrt(3)", m).unwrap(), QuadRational::new(-8, -5, 3));
        assert_eq!(parse_quad("2/4 - 3/4 * sqrt(3)", m).unwrap(), QuadRational::new((1, 2), (-3, 4), 3));
        assert_eq!(parse_quad("1 + sqrt(12)", m).unwrap(), QuadRational::new(1, 2, 3));
        assert_eq!(parse_quad("18", m).unwrap(), QuadRational::new(18, 0, 3));
        assert!(parse_quad("1 + sqrt(5)", m).is_err());
    }

    #[test]
    fn newton_power_sums() {
        // (x − 1)(x − 2)(x − 3): p_k = 1 + 2^k + 3^k
        let c = [-6i64, 11, -6, 1].iter().map(|&v| QuadRational::from_int(v, 3)).collect();
        let p = RecognizedPolynomial { d: 5, m: 3, role: Role::F, coeffs: c };
        let ps = power_sums(&p, 7);
        for (k, v) in ps.iter().enumerate() {
            let want = 1 + 2i64.pow(k as u32) + 3i64.pow(k as u32);
            assert_eq!(*v, QuadRational::from_int(want, 3), "k={k}");
        }
    }
}
