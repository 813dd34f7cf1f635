//! Hecke L-functions of ray class characters at s = 0 and the differenced
//! zeta derivatives Z_A'(0).
//!
//! For χ with χ(R) = −1 the completed function Λ(s) = A^s Γ(s) L(s, χ),
//! A = √Q/(2π), satisfies Λ(s) = W·Λ̄(1 − s) and has a trivial zero of L at
//! s = 0, so Λ(0) = L'(0). Splitting the Mellin integral at t gives
//!
//!   Λ(0) = Σ a_n E1(nt/A) + W Σ ā_n (A/n) e^{−n/(At)}  =: S(t) + W·T(t).
//!
//! A simple pole of Λ at 0 or 1 (i.e. L(0) ≠ 0 or a wrong conductor) adds
//! terms a·ln t and b/t, so fitting S + W·T = V + a ln t + b/t over four
//! splits gives W, L'(0) = V, and an estimate |a| of |L(0)|.

use crate::error::{Error, Result};
use crate::linalg::BigComplexMatrix;
use crate::num::{fmt_float, parse_float, pi, pow10, working_bits, Cx, GUARD_DIGITS};
use crate::quadfield::{enumerate_prime_ideals, FieldContext};
use crate::rayclass::RayClassGroup;
use crate::special::e1;
use rayon::prelude::*;
use rug::{Float, Rational};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Splits used to solve for (W, V, a, b) and to validate.
const SOLVE_SPLITS: [(i64, i64); 4] = [(3, 4), (9, 10), (11, 10), (13, 10)];
const CHECK_SPLITS: [(i64, i64); 2] = [(1, 1), (6, 5)];
const T_MIN: f64 = 0.75;
const T_MAX: f64 = 1.3;

/// a_n(A) for n ≤ X, ideals coprime to d.
#[derive(Clone, Debug)]
pub struct DirichletCoeffs {
    pub x: u64,
    pub classes: usize,
    /// counts[k][n]
    pub counts: Vec<Vec<u32>>,
}

impl DirichletCoeffs {
    pub fn get(&self, k: usize, n: u64) -> u32 {
        self.counts[k][n as usize]
    }

    pub fn total(&self, n: u64) -> u64 {
        self.counts.iter().map(|c| c[n as usize] as u64).sum()
    }
}

pub fn class_counts(ctx: &FieldContext, g: &RayClassGroup, x: u64) -> Result<DirichletCoeffs> {
    let primes = enumerate_prime_ideals(ctx, x)?;
    let n = g.order;
    let mut ideals: Vec<(u64, usize)> = vec![(1, 0)];
    for pr in primes.iter().filter(|p| p.p != ctx.d) {
        let k = g.class_of_element(ctx, &pr.ideal.generator)?;
        let mut extra = Vec::new();
        for &(nb, kb) in &ideals {
            let (mut nn, mut kk) = (nb, kb);
            loop {
                nn = match nn.checked_mul(pr.ideal.norm) {
                    Some(v) if v <= x => v,
                    _ => break,
                };
                kk = (kk + k) % n;
                extra.push((nn, kk));
            }
        }
        ideals.extend(extra);
    }
    let mut counts = vec![vec![0u32; x as usize + 1]; n];
    for (nn, k) in ideals {
        counts[k][nn as usize] += 1;
    }
    Ok(DirichletCoeffs { x, classes: n, counts })
}

/// Coefficient bound making both smoothed tails negligible at `digits`.
pub fn default_bound(conductor: u64, digits: u32) -> u64 {
    let a = (conductor as f64).sqrt() / (2.0 * std::f64::consts::PI);
    let pw = (digits + GUARD_DIGITS) as f64;
    let l = pw * std::f64::consts::LN_10 + 3.0 * (1.0 + a * pw).ln() + 10.0;
    (a * (1.0 / T_MIN).max(T_MAX) * l).ceil() as u64
}

#[derive(Clone, Debug)]
pub struct LFunctionSpec {
    pub j: usize,
    pub conductor: u64,
    /// Γ_R shifts {0, 1}: even at ρ₁, odd at ρ₂.
    pub gamma_shifts: [u32; 2],
    pub digits: u32,
}

/// Per-class kernel sums S_k(t), T_k(t) for each split.
#[derive(Clone, Debug)]
pub struct KernelSums {
    pub conductor: u64,
    pub splits: Vec<Float>,
    pub s: Vec<Vec<Float>>,
    pub t: Vec<Vec<Float>>,
}

pub fn kernel_sums(coeffs: &DirichletCoeffs, conductor: u64, digits: u32) -> KernelSums {
    let prec = working_bits(digits);
    let a = Float::with_val(prec, conductor).sqrt() / (pi(prec) * 2u32);
    let splits: Vec<Float> = SOLVE_SPLITS
        .iter()
        .chain(CHECK_SPLITS.iter())
        .map(|&(p, q)| Float::with_val(prec, Rational::from((p, q))))
        .collect();
    let ns: Vec<u64> = (1..=coeffs.x).filter(|&n| coeffs.total(n) > 0).collect();
    let rows: Vec<(Vec<Float>, Vec<Float>)> = splits
        .par_iter()
        .map(|t| {
            let mut s = vec![Float::new(prec); coeffs.classes];
            let mut tt = vec![Float::new(prec); coeffs.classes];
            let at = Float::with_val(prec, &a * t);
            for &n in &ns {
                let nf = Float::with_val(prec, n);
                let x = Float::with_val(prec, &nf * t) / &a;
                let ev = e1(&x);
                let y = Float::with_val(prec, &nf / &at);
                let ex = Float::with_val(prec, (-y).exp_ref()) * &a / &nf;
                for k in 0..coeffs.classes {
                    let c = coeffs.counts[k][n as usize];
                    if c > 0 {
                        s[k] += Float::with_val(prec, &ev * c);
                        tt[k] += Float::with_val(prec, &ex * c);
                    }
                }
            }
            (s, tt)
        })
        .collect();
    let (s, t) = rows.into_iter().unzip();
    KernelSums { conductor, splits, s, t }
}

#[derive(Clone, Debug)]
pub struct LValue {
    pub j: usize,
    pub conductor: u64,
    pub w: Cx,
    /// ||W| − 1| before renormalisation.
    pub w_norm_delta: Float,
    pub lprime: Cx,
    /// |L(0, χ)| estimated from the pole term at s = 0.
    pub l_at_zero: Float,
    /// pole term at s = 1
    pub pole_at_one: Float,
    /// max FE residual over the validation splits.
    pub fe_residual: Float,
}

impl LValue {
    pub fn valid(&self, digits: u32) -> bool {
        let p = self.lprime.prec();
        let tol = pow10(p, 5 - digits as i32);
        let tol3 = pow10(p, 3 - digits as i32);
        self.l_at_zero < tol && self.pole_at_one < tol && self.w_norm_delta < tol && self.fe_residual < tol3
    }
}

fn char_sums(ks: &KernelSums, n: usize, j: usize, roots: &[Cx]) -> (Vec<Cx>, Vec<Cx>) {
    let prec = roots[0].prec();
    let mut ss = Vec::new();
    let mut ts = Vec::new();
    for (srow, trow) in ks.s.iter().zip(&ks.t) {
        let mut s = Cx::zero(prec);
        let mut t = Cx::zero(prec);
        for k in 0..n {
            let e = (j * k) % n;
            let z = &roots[e];
            let zc = &roots[(n - e) % n];
            s = &s + &z.scale(&srow[k]);
            t = &t + &zc.scale(&trow[k]);
        }
        ss.push(s);
        ts.push(t);
    }
    (ss, ts)
}

/// Solve the four-split system and validate on the remaining splits.
pub fn fit_character(ks: &KernelSums, n: usize, j: usize, digits: u32) -> LValue {
    let prec = working_bits(digits);
    let roots: Vec<Cx> = (0..n).map(|e| Cx::root_of_unity(prec, e as i64, n as u64)).collect();
    let (ss, ts) = char_sums(ks, n, j, &roots);
    let m = SOLVE_SPLITS.len();
    let mat = BigComplexMatrix::from_fn(m, 4, prec, |i, c| match c {
        0 => ts[i].clone(),
        1 => Cx::from_f64(prec, -1.0, 0.0),
        2 => Cx::real(-Float::with_val(prec, ks.splits[i].ln_ref())),
        _ => Cx::real(-Float::with_val(prec, ks.splits[i].recip_ref())),
    });
    let rhs: Vec<Cx> = ss[..m].iter().map(|s| -s).collect();
    let sol = mat.solve(&rhs).expect("split system singular");
    let (w, v, a, b) = (sol[0].clone(), sol[1].clone(), sol[2].abs(), sol[3].abs());
    let mut res = Float::new(prec);
    for i in m..ks.splits.len() {
        let r = (&(&ss[i] + &(&w * &ts[i])) - &v).abs();
        if r > res {
            res = r;
        }
    }
    let wabs = w.abs();
    let delta = Float::with_val(prec, &wabs - 1u32).abs();
    let wn = w.scale(&wabs.recip());
    LValue { j, conductor: ks.conductor, w: wn, w_norm_delta: delta, lprime: v, l_at_zero: a, pole_at_one: b, fe_residual: res }
}

/// Root number W of χ_j, solved from the smoothed sums.
pub fn solve_root_number(ks: &KernelSums, g: &RayClassGroup, j: usize, digits: u32) -> Result<(Cx, Float)> {
    let lv = fit_character(ks, g.order, j, digits);
    if !lv.valid(digits) {
        return Err(Error::LFunction(format!("root number validation failed for χ_{j}: residual {}", fmt_float(&lv.fe_residual, 6))));
    }
    Ok((lv.w, lv.w_norm_delta))
}

/// Conductor candidates: (d)∞₂ first, then (1)∞₂.
pub fn conductor_candidates(ctx: &FieldContext) -> Vec<u64> {
    vec![ctx.discriminant * ctx.d * ctx.d, ctx.discriminant]
}

/// L'(0, χ_j) for an odd character, trying conductor candidates in order.
pub fn lprime_at_zero(ctx: &FieldContext, g: &RayClassGroup, j: usize, digits: u32, x: Option<u64>) -> Result<LValue> {
    if g.character(j).value_at_r() != -1 {
        return Err(Error::LFunction(format!("χ_{j}(R) = +1 does not contribute")));
    }
    let mut last = None;
    for q in conductor_candidates(ctx) {
        let bound = x.unwrap_or_else(|| default_bound(q, digits));
        let coeffs = class_counts(ctx, g, bound)?;
        let ks = kernel_sums(&coeffs, q, digits);
        let lv = fit_character(&ks, g.order, j, digits);
        if lv.valid(digits) {
            return Ok(lv);
        }
        last = Some(lv);
    }
    let lv = last.unwrap();
    Err(Error::LFunction(format!(
        "functional equation fails for χ_{j}: residual {}, |L(0)| {}",
        fmt_float(&lv.fe_residual, 6),
        fmt_float(&lv.l_at_zero, 6)
    )))
}

#[derive(Clone, Debug)]
pub struct ZetaTable {
    pub d: u64,
    pub digits: u32,
    pub x: u64,
    pub conductor: u64,
    /// Z_A'(0) by class exponent
    pub zprime: Vec<Float>,
    pub alpha: Vec<Float>,
    pub lvalues: Vec<LValue>,
    pub max_imag: Float,
    pub r_index: usize,
}

impl ZetaTable {
    pub fn prec(&self) -> u32 {
        working_bits(self.digits)
    }

    /// max_A |Z_{RA}'(0) + Z_A'(0)|
    pub fn antisymmetry_error(&self) -> Float {
        let n = self.zprime.len();
        let mut m = Float::new(self.prec());
        for k in 0..n {
            let e = Float::with_val(self.prec(), &self.zprime[k] + &self.zprime[(k + self.r_index) % n]).abs();
            if e > m {
                m = e;
            }
        }
        m
    }

    pub fn max_l_at_zero(&self) -> Float {
        self.lvalues.iter().map(|l| l.l_at_zero.clone()).fold(Float::new(self.prec()), |a, b| if b > a { b } else { a })
    }

    pub fn to_json(&self, sig: usize) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "precision": self.digits,
            "x": self.x,
            "conductor": self.conductor,
            "zprime": self.zprime.iter().map(|z| fmt_float(z, sig)).collect::<Vec<_>>(),
            "alpha": self.alpha.iter().map(|z| fmt_float(z, sig)).collect::<Vec<_>>(),
            "characters": self.lvalues.iter().map(|l| l.j).collect::<Vec<_>>(),
            "root_numbers": self.lvalues.iter().map(|l| [fmt_float(&l.w.re, sig), fmt_float(&l.w.im, sig)]).collect::<Vec<_>>(),
            "max_imag": fmt_float(&self.max_imag, 6),
            "antisymmetry_err": fmt_float(&self.antisymmetry_error(), 6),
            "max_abs_l0": fmt_float(&self.max_l_at_zero(), 6),
        })
    }
}

/// Z_A'(0) = (2/N) Σ_{χ(R)=−1} χ̄(A) L'(0, χ) for every class.
pub fn zeta_derivative_table(ctx: &FieldContext, g: &RayClassGroup, digits: u32, x: Option<u64>) -> Result<ZetaTable> {
    let prec = working_bits(digits);
    let n = g.order;
    let odd = g.odd_characters();
    let mut chosen = None;
    let mut failure = String::new();
    for q in conductor_candidates(ctx) {
        let bound = x.unwrap_or_else(|| default_bound(q, digits));
        let coeffs = class_counts(ctx, g, bound)?;
        let ks = kernel_sums(&coeffs, q, digits);
        let lvs: Vec<LValue> = odd.par_iter().map(|&j| fit_character(&ks, n, j, digits)).collect();
        if let Some(bad) = lvs.iter().find(|l| !l.valid(digits)) {
            failure = format!(
                "χ_{} fails at conductor {q}: FE residual {}, |L(0)| {}, ||W|-1| {}",
                bad.j,
                fmt_float(&bad.fe_residual, 5),
                fmt_float(&bad.l_at_zero, 5),
                fmt_float(&bad.w_norm_delta, 5)
            );
            continue;
        }
        chosen = Some((q, bound, lvs));
        break;
    }
    let (q, bound, lvs) = chosen.ok_or_else(|| Error::LFunction(failure))?;
    let roots: Vec<Cx> = (0..n).map(|e| Cx::root_of_unity(prec, e as i64, n as u64)).collect();
    let two_over_n = Float::with_val(prec, 2) / n as u32;
    let mut zprime = Vec::with_capacity(n);
    let mut max_imag = Float::new(prec);
    for k in 0..n {
        let mut z = Cx::zero(prec);
        for lv in &lvs {
            let e = (lv.j * k) % n;
            z.add_mul(&roots[(n - e) % n], &lv.lprime);
        }
        let z = z.scale(&two_over_n);
        let im = z.im.clone().abs();
        if im > max_imag {
            max_imag = im;
        }
        zprime.push(z.re);
    }
    if max_imag > pow10(prec, 5 - digits as i32) {
        return Err(Error::LFunction(format!("assembled Z'(0) has imaginary part {}", fmt_float(&max_imag, 5))));
    }
    let alpha = zprime.iter().map(|z| Float::with_val(prec, z.exp_ref())).collect();
    Ok(ZetaTable { d: ctx.d, digits, x: bound, conductor: q, zprime, alpha, lvalues: lvs, max_imag, r_index: g.r_index })
}

pub fn cache_path(dir: &Path, d: u64, digits: u32) -> PathBuf {
    dir.join(format!("zeta_d{d}_p{digits}.txt"))
}

fn sha_hex(s: &str) -> String {
    let h = Sha256::digest(s.as_bytes());
    h.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn save_table(t: &ZetaTable, path: &Path) -> Result<()> {
    // enough decimal digits to round-trip every bit
    let sig = (t.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let mut body = String::new();
    body.push_str("# stark-sic zeta table\n");
    body.push_str(&format!("# d={}\n# precision={}\n# x={}\n# conductor={}\n# r_index={}\n# classes={}\n", t.d, t.digits, t.x, t.conductor, t.r_index, t.zprime.len()));
    for (k, z) in t.zprime.iter().enumerate() {
        body.push_str(&format!("z {k} {}\n", fmt_float(z, sig)));
    }
    for l in &t.lvalues {
        body.push_str(&format!(
            "l {} {} {} {} {} {} {} {} {}\n",
            l.j,
            fmt_float(&l.w.re, sig),
            fmt_float(&l.w.im, sig),
            fmt_float(&l.lprime.re, sig),
            fmt_float(&l.lprime.im, sig),
            fmt_float(&l.w_norm_delta, 6),
            fmt_float(&l.l_at_zero, 6),
            fmt_float(&l.pole_at_one, 6),
            fmt_float(&l.fe_residual, 6)
        ));
    }
    body.push_str(&format!("i {}\n", fmt_float(&t.max_imag, 6)));
    let sum = sha_hex(&body);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, format!("{body}# sha256={sum}\n"))?;
    Ok(())
}

/// Load a cached table; Ok(None) when absent or keyed differently.
pub fn load_table(path: &Path, d: u64, digits: u32, x: Option<u64>) -> Result<Option<ZetaTable>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let idx = text.rfind("# sha256=").ok_or_else(|| Error::Cache("missing checksum".into()))?;
    let (body, tail) = text.split_at(idx);
    let want = tail.trim_start_matches("# sha256=").trim();
    if sha_hex(body) != want {
        return Err(Error::Cache(format!("checksum mismatch in {}", path.display())));
    }
    let prec = working_bits(digits);
    let bad = || Error::Cache(format!("malformed cache file {}", path.display()));
    let mut hdr = std::collections::HashMap::new();
    let mut zprime = Vec::new();
    let mut lvalues = Vec::new();
    let mut max_imag = Float::new(prec);
    for line in body.lines() {
        if let Some(h) = line.strip_prefix("# ") {
            if let Some((k, v)) = h.split_once('=') {
                hdr.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let pf = |s: &str| parse_float(prec, s).ok_or_else(bad);
        match f.first().copied() {
            Some("z") if f.len() == 3 => zprime.push(pf(f[2])?),
            Some("l") if f.len() == 10 => {
                lvalues.push(LValue {
                    j: f[1].parse().map_err(|_| bad())?,
                    conductor: 0,
                    w: Cx::new(pf(f[2])?, pf(f[3])?),
                    lprime: Cx::new(pf(f[4])?, pf(f[5])?),
                    w_norm_delta: pf(f[6])?,
                    l_at_zero: pf(f[7])?,
                    pole_at_one: pf(f[8])?,
                    fe_residual: pf(f[9])?,
                });
            }
            Some("i") if f.len() == 2 => max_imag = pf(f[1])?,
            _ => return Err(bad()),
        }
    }
    let get = |k: &str| -> Result<u64> { hdr.get(k).and_then(|v| v.parse().ok()).ok_or_else(bad) };
    if get("d")? != d || get("precision")? != digits as u64 {
        return Ok(None);
    }
    let fx = get("x")?;
    if let Some(x) = x {
        if x != fx {
            return Ok(None);
        }
    }
    let conductor = get("conductor")?;
    for l in &mut lvalues {
        l.conductor = conductor;
    }
    if zprime.len() as u64 != get("classes")? {
        return Err(bad());
    }
    let alpha = zprime.iter().map(|z| Float::with_val(prec, z.exp_ref())).collect();
    Ok(Some(ZetaTable { d, digits, x: fx, conductor, zprime, alpha, lvalues, max_imag, r_index: get("r_index")? as usize }))
}

/// Table from cache when the key matches, else computed and stored.
pub fn zeta_table_cached(
    ctx: &FieldContext,
    g: &RayClassGroup,
    digits: u32,
    x: Option<u64>,
    cache_dir: Option<&Path>,
) -> Result<(ZetaTable, bool)> {
    if let Some(dir) = cache_dir {
        let p = cache_path(dir, ctx.d, digits);
        if let Some(t) = load_table(&p, ctx.d, digits, x)? {
            return Ok((t, true));
        }
    }
    let t = zeta_derivative_table(ctx, g, digits, x)?;
    if let Some(dir) = cache_dir {
        save_table(&t, &cache_path(dir, ctx.d, digits))?;
    }
    Ok((t, false))
}
