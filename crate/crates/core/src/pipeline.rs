//! Stage orchestration: field → group → zeta → f → signs/g → h → fiducial.

use crate::error::{Error, Result};
use crate::fixtures;
use crate::lfun::{zeta_table_cached, ZetaTable};
use crate::num::{fmt_float, working_bits};
use crate::quadfield::{make_field, FieldContext, QuadRational};
use crate::rayclass::{build_ray_class_group, RayClassGroup};
use crate::recognition::{build_f, solve_h, HDiagnostics, RecognizedPolynomial};
use crate::sic::{
    all_lambdas, conjugate_orbit, format_fiducial, lambda_search_and_extract, match_reference, verify_sic, ConjugateOrbit,
    FiducialCertificate, LambdaOutcome, ReferenceMatch,
};
use crate::signs::{resolve_signs, SignAssignment, SignStrategy};
use rug::{Integer, Rational};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const MIN_DIGITS: u32 = 30;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub d: u64,
    pub digits: u32,
    pub coeff_bound: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    /// None picks bruteforce for degree ≤ 16 and the lattice search above.
    pub sign_strategy: Option<SignStrategy>,
    pub lambda: Option<u64>,
    pub out: Option<PathBuf>,
    /// ceiling for automatic precision escalation
    pub max_digits: u32,
}

impl RunConfig {
    pub fn new(d: u64) -> Self {
        RunConfig { d, digits: 50, coeff_bound: None, cache_dir: None, sign_strategy: None, lambda: None, out: None, max_digits: 400 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS {
            return Err(Error::Config(format!("precision must be at least {MIN_DIGITS} digits, got {}", self.digits)));
        }
        if let Some(l) = self.lambda {
            if l == 0 || l >= self.d || self.d % l == 0 {
                return Err(Error::Config(format!("λ = {l} is not a unit mod {}", self.d)));
            }
        }
        Ok(())
    }
}

/// "bruteforce", "search", or "known_g:PATH" (PATH may name a bundled fixture).
pub fn parse_sign_strategy(s: &str) -> Result<SignStrategy> {
    match s {
        "bruteforce" => Ok(SignStrategy::Bruteforce),
        "search" => Ok(SignStrategy::Search),
        _ => {
            let Some(path) = s.strip_prefix("known_g:") else {
                return Err(Error::Config(format!("unknown sign strategy '{s}'")));
            };
            let p = Path::new(path);
            let g = if p.exists() {
                RecognizedPolynomial::read(p)
            } else if let Some(text) = fixtures::text(path) {
                RecognizedPolynomial::from_text(text)
            } else {
                return Err(Error::Config(format!("cannot read g polynomial '{path}'")));
            }
            .map_err(|e| Error::Config(format!("bad g polynomial '{path}': {e}")))?;
            Ok(SignStrategy::KnownG(g))
        }
    }
}

/// One JSON line: numeric payload in `result`, timing kept apart.
#[derive(Clone, Debug)]
pub struct Line {
    pub stage: String,
    pub result: Value,
    pub wall_ms: u128,
}

impl Line {
    pub fn render(&self) -> String {
        json!({ "stage": self.stage, "result": self.result, "wall_ms": self.wall_ms }).to_string()
    }
}

pub type Sink<'a> = &'a mut dyn FnMut(Line);

fn emit(sink: &mut dyn FnMut(Line), stage: &str, result: Value, t0: Instant) {
    sink(Line { stage: stage.to_string(), result, wall_ms: t0.elapsed().as_millis() });
}

pub fn stage_field(cfg: &RunConfig, sink: Sink) -> Result<FieldContext> {
    let t0 = Instant::now();
    let ctx = make_field(cfg.d)?;
    emit(sink, "field", ctx.to_json(), t0);
    Ok(ctx)
}

pub fn stage_group(ctx: &FieldContext, sink: Sink) -> Result<RayClassGroup> {
    let t0 = Instant::now();
    let g = build_ray_class_group(ctx)?;
    emit(sink, "group", g.to_json(), t0);
    Ok(g)
}

pub fn stage_zeta(cfg: &RunConfig, ctx: &FieldContext, g: &RayClassGroup, digits: u32, sink: Sink) -> Result<ZetaTable> {
    let t0 = Instant::now();
    let (t, hit) = zeta_table_cached(ctx, g, digits, cfg.coeff_bound, cfg.cache_dir.as_deref())?;
    let mut v = t.to_json(digits as usize);
    v["cache_hit"] = json!(hit);
    emit(sink, "zeta", v, t0);
    Ok(t)
}

fn poly_json(p: &RecognizedPolynomial) -> Value {
    json!({
        "role": p.role.tag(),
        "degree": p.degree(),
        "radicand": p.m,
        "coefficients": p.coeffs.iter().rev().map(|c| c.to_fraction_string()).collect::<Vec<_>>(),
    })
}

/// f(1)/d is an algebraic integer.
pub fn f_at_one_divisible(f: &RecognizedPolynomial) -> bool {
    let one = QuadRational::from_int(1, f.m);
    let v = f.eval_exact(&one);
    v.scale(&Rational::from((Integer::from(1), Integer::from(f.d)))).is_integral()
}

#[derive(Clone, Debug)]
pub struct Recognized {
    pub digits: u32,
    pub table: ZetaTable,
    pub f: RecognizedPolynomial,
    pub signs: SignAssignment,
    pub g: RecognizedPolynomial,
    pub gt: RecognizedPolynomial,
    pub h: RecognizedPolynomial,
    pub ht: RecognizedPolynomial,
    pub hdiag: HDiagnostics,
}

fn escalatable(e: &Error) -> bool {
    matches!(e, Error::Recognition(_) | Error::Signs(_))
}

fn next_digits(p: u32) -> u32 {
    (p + 10).max((p as f64 * 1.4).ceil() as u32)
}

fn default_strategy(n: usize) -> SignStrategy {
    if n <= 16 {
        SignStrategy::Bruteforce
    } else {
        SignStrategy::Search
    }
}

/// f, signs, g, g̃, h, h̃ at `digits`, without escalation.
pub fn recognize_at(cfg: &RunConfig, ctx: &FieldContext, group: &RayClassGroup, digits: u32, sink: Sink) -> Result<Recognized> {
    let table = stage_zeta(cfg, ctx, group, digits, sink)?;
    let t0 = Instant::now();
    let f = build_f(ctx, &table.alpha, digits)?;
    let mut fj = poly_json(&f);
    fj["palindromic"] = json!(f.is_palindromic());
    fj["constant_term_one"] = json!(f.coeffs[0] == QuadRational::one(f.m));
    fj["f1_divisible_by_d"] = json!(f_at_one_divisible(&f));
    emit(sink, "f", fj, t0);

    let t0 = Instant::now();
    let strategy = cfg.sign_strategy.clone().unwrap_or_else(|| default_strategy(table.alpha.len()));
    let signs = resolve_signs(ctx, group, &table.alpha, &strategy, digits)?;
    let g = signs.g.clone();
    let mut gj = poly_json(&g);
    gj["signs"] = signs.to_json();
    gj["scaled_palindromic"] = json!(g.is_scaled_palindromic(ctx.d + 1));
    emit(sink, "g", gj, t0);

    let t0 = Instant::now();
    let gt = g.conj();
    emit(sink, "gtilde", poly_json(&gt), t0);

    let t0 = Instant::now();
    let (h, hdiag) = solve_h(ctx, &g, &signs.nus, digits)?;
    let ht = h.conj();
    let mut hj = poly_json(&h);
    hj["orbit_residual"] = json!(fmt_float(&hdiag.orbit_residual, 6));
    hj["vandermonde_residual"] = json!(fmt_float(&hdiag.vandermonde_residual, 6));
    hj["vandermonde_agreement"] = json!(fmt_float(&hdiag.vandermonde_agreement, 6));
    emit(sink, "h", hj, t0);
    let t0 = Instant::now();
    emit(sink, "htilde", poly_json(&ht), t0);
    Ok(Recognized { digits, table, f, signs, g, gt, h, ht, hdiag })
}

/// Recognition with automatic precision escalation on recognition failures.
pub fn recognize(cfg: &RunConfig, ctx: &FieldContext, group: &RayClassGroup, sink: Sink) -> Result<Recognized> {
    let mut digits = cfg.digits;
    loop {
        match recognize_at(cfg, ctx, group, digits, sink) {
            Ok(r) => return Ok(r),
            Err(e) if escalatable(&e) && digits < cfg.max_digits => {
                let next = next_digits(digits).min(cfg.max_digits);
                let t0 = Instant::now();
                emit(sink, "escalate", json!({ "from": digits, "to": next, "reason": e.to_string() }), t0);
                digits = next;
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiducialResult {
    pub orbit: ConjugateOrbit,
    pub cert: FiducialCertificate,
    pub outcomes: Vec<LambdaOutcome>,
    pub reference: Option<ReferenceMatch>,
}

pub fn stage_fiducial(cfg: &RunConfig, group: &RayClassGroup, rec: &Recognized, sink: Sink) -> Result<FiducialResult> {
    let digits = rec.digits;
    let t0 = Instant::now();
    let orbit = conjugate_orbit(&rec.gt, &rec.ht, digits)?;
    emit(
        sink,
        "orbit",
        json!({
            "roots": orbit.values.len(),
            "snap_err": fmt_float(&orbit.snap_err, 6),
            "modulus_err": fmt_float(&orbit.modulus_err, 6),
        }),
        t0,
    );
    let t0 = Instant::now();
    let lambdas = match cfg.lambda {
        Some(l) => vec![l],
        None => all_lambdas(group.d),
    };
    let (cert, outcomes) = lambda_search_and_extract(group, &orbit.values, &lambdas, digits)?;
    emit(sink, "lambda_search", json!(outcomes.iter().map(|o| { let mut v = o.test.to_json(); v["passed"] = json!(o.passed); v }).collect::<Vec<_>>()), t0);
    let t0 = Instant::now();
    emit(sink, "certificate", cert.to_json(), t0);
    let mut reference = None;
    if let Some((rv, rd)) = fixtures::reference_fiducial(group.d) {
        let t0 = Instant::now();
        let prec = working_bits(digits);
        let rv: Vec<_> = rv.iter().map(|x| x.with_prec(prec)).collect();
        reference = match_reference(group, &orbit.values, &rv, digits)?;
        if let Some(m) = &reference {
            let mut v = m.to_json();
            v["reference_digits"] = json!(rd);
            emit(sink, "reference", v, t0);
        }
    }
    Ok(FiducialResult { orbit, cert, outcomes, reference })
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub ctx: FieldContext,
    pub group: RayClassGroup,
    pub recognized: Recognized,
    pub fiducial: FiducialResult,
}

fn write_artifacts(dir: &Path, rec: &Recognized, fid: &FiducialResult) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let d = rec.f.d;
    for (name, p) in [("f", &rec.f), ("g", &rec.g), ("gt", &rec.gt), ("h", &rec.h), ("ht", &rec.ht)] {
        std::fs::write(dir.join(format!("{name}{d}.txt")), p.to_text())?;
    }
    let body = format!("# stark-sic fiducial\n# d={d}\n{}", format_fiducial(&fid.cert.v, rec.digits as usize));
    std::fs::write(dir.join(format!("v{d}.txt")), body)?;
    std::fs::write(dir.join(format!("certificate{d}.json")), serde_json::to_string_pretty(&fid.cert.to_json()).unwrap())?;
    Ok(())
}

/// Every stage in order.
pub fn run_all(cfg: &RunConfig, sink: Sink) -> Result<PipelineReport> {
    cfg.validate()?;
    let ctx = stage_field(cfg, sink)?;
    let group = stage_group(&ctx, sink)?;
    let recognized = recognize(cfg, &ctx, &group, sink)?;
    let fiducial = stage_fiducial(cfg, &group, &recognized, sink)?;
    if let Some(dir) = &cfg.out {
        write_artifacts(dir, &recognized, &fiducial)?;
    }
    Ok(PipelineReport { ctx, group, recognized, fiducial })
}

/// Verify an external fiducial; precision is inferred from its digits.
pub fn run_verify(d: u64, text: &str, sink: Sink) -> Result<FiducialCertificate> {
    let t0 = Instant::now();
    let (v, digits) = crate::sic::parse_fiducial(text)?;
    if v.len() as u64 != d {
        return Err(Error::Config(format!("fiducial has {} entries but d = {d}", v.len())));
    }
    let cert = verify_sic(&v, digits);
    emit(sink, "verify", cert.to_json(), t0);
    Ok(cert)
}
