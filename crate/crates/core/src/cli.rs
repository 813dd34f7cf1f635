//! Command-line front end. Output is one JSON object per line.

use crate::error::Error;
use crate::fixtures;
use crate::pipeline::{
    parse_sign_strategy, recognize, run_all, run_verify, stage_field, stage_group, stage_zeta, Line, RunConfig,
};
use crate::sic::verify_sic;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_STAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stark-sic", version, about = "SIC-POVM fiducials from Stark units")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Quadratic field data for dimension d
    Field(Common),
    /// Ray class group structure
    Group(Common),
    /// Derivatives Z_A'(0) of the partial zeta functions
    Zeta(Common),
    /// Recognize f, g, g̃, h, h̃ over K
    Recognize(Common),
    /// Full pipeline ending in a certified fiducial
    Fiducial(Common),
    /// Certify an external fiducial vector
    Verify(VerifyArgs),
    /// Every stage in order
    All(Common),
    /// Check the bundled reference data
    Fixtures(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    d: Option<u64>,
    /// decimal digits
    #[arg(long, default_value_t = 50)]
    precision: u32,
    /// Dirichlet coefficient bound X
    #[arg(long)]
    coeff_bound: Option<u64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// bruteforce | known_g:PATH | search
    #[arg(long)]
    sign_strategy: Option<String>,
    #[arg(long)]
    lambda: Option<u64>,
    /// directory for polynomial, fiducial and certificate files
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// precision ceiling for automatic escalation
    #[arg(long, default_value_t = 400)]
    max_precision: u32,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    fiducial: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Field(_) | Error::Unsupported(_) | Error::Format(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_STAGE,
    }
}

fn config(c: &Common) -> Result<RunConfig, Error> {
    let d = c.d.ok_or_else(|| Error::Config("--d is required".into()))?;
    let mut cfg = RunConfig::new(d);
    cfg.digits = c.precision;
    cfg.coeff_bound = c.coeff_bound;
    cfg.cache_dir = c.cache_dir.clone();
    cfg.lambda = c.lambda;
    cfg.out = c.out.clone();
    cfg.max_digits = c.max_precision.max(c.precision);
    if let Some(s) = &c.sign_strategy {
        cfg.sign_strategy = Some(parse_sign_strategy(s)?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_cmd(cmd: &Cmd, sink: &mut dyn FnMut(Line)) -> Result<i32, Error> {
    match cmd {
        Cmd::Field(c) => {
            let cfg = config(c)?;
            stage_field(&cfg, sink)?;
            Ok(EXIT_VALID)
        }
        Cmd::Group(c) => {
            let cfg = config(c)?;
            let ctx = crate::quadfield::make_field(cfg.d)?;
            stage_group(&ctx, sink)?;
            Ok(EXIT_VALID)
        }
        Cmd::Zeta(c) => {
            let cfg = config(c)?;
            let ctx = stage_field(&cfg, sink)?;
            let g = stage_group(&ctx, sink)?;
            stage_zeta(&cfg, &ctx, &g, cfg.digits, sink)?;
            Ok(EXIT_VALID)
        }
        Cmd::Recognize(c) => {
            let cfg = config(c)?;
            let ctx = stage_field(&cfg, sink)?;
            let g = stage_group(&ctx, sink)?;
            let rec = recognize(&cfg, &ctx, &g, sink)?;
            if let Some(dir) = &cfg.out {
                std::fs::create_dir_all(dir)?;
                for p in [&rec.f, &rec.g, &rec.gt, &rec.h, &rec.ht] {
                    std::fs::write(dir.join(format!("{}{}.txt", p.role.tag(), cfg.d)), p.to_text())?;
                }
            }
            Ok(EXIT_VALID)
        }
        Cmd::Fiducial(c) | Cmd::All(c) => {
            let cfg = config(c)?;
            let rep = run_all(&cfg, sink)?;
            Ok(if rep.fiducial.cert.valid { EXIT_VALID } else { EXIT_INVALID })
        }
        Cmd::Verify(v) => {
            let text = std::fs::read_to_string(&v.fiducial)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", v.fiducial.display())))?;
            let cert = run_verify(v.d, &text, sink)?;
            Ok(if cert.valid { EXIT_VALID } else { EXIT_INVALID })
        }
        Cmd::Fixtures(_) => {
            let mut ok = true;
            for name in fixtures::NAMES {
                let t0 = std::time::Instant::now();
                let result = if name.starts_with('v') {
                    let (v, digits) = fixtures::fiducial(name)?;
                    let cert = verify_sic(&v, digits);
                    ok &= cert.valid;
                    json!({ "name": name, "d": v.len(), "digits": digits, "valid": cert.valid, "e_max": crate::num::fmt_float(&cert.e_max, 6) })
                } else {
                    let p = fixtures::polynomial(name)?;
                    json!({ "name": name, "d": p.d, "role": p.role.tag(), "degree": p.degree(), "palindromic": p.is_palindromic(), "scaled_palindromic": p.is_scaled_palindromic(p.d + 1) })
                };
                sink(Line { stage: "fixture".into(), result, wall_ms: t0.elapsed().as_millis() });
            }
            Ok(if ok { EXIT_VALID } else { EXIT_INVALID })
        }
    }
}

fn threads_of(cmd: &Cmd) -> Option<usize> {
    match cmd {
        Cmd::Verify(v) => v.threads,
        Cmd::Field(c) | Cmd::Group(c) | Cmd::Zeta(c) | Cmd::Recognize(c) | Cmd::Fiducial(c) | Cmd::All(c) | Cmd::Fixtures(c) => c.threads,
    }
}

/// Parse `args` (including the program name), run, write JSON lines to
/// `out` and return the exit code.
pub fn run<I, S>(args: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_VALID };
            let _ = e.print();
            return code;
        }
    };
    let mut sink = |l: Line| {
        let _ = writeln!(out, "{}", l.render());
        let _ = out.flush();
    };
    let res = match threads_of(&cli.cmd) {
        Some(0) => Err(Error::Config("--threads must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_cmd(&cli.cmd, &mut sink)),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => run_cmd(&cli.cmd, &mut sink),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let line = json!({ "stage": "error", "result": { "kind": if code == EXIT_CONFIG { "config" } else { "stage" }, "message": e.to_string() }, "wall_ms": 0 });
            let _ = writeln!(out, "{line}");
            code
        }
    }
}
