//! Numeric polynomials: expansion from roots, evaluation, Aberth roots.
//! Coefficient vectors are ascending (index i holds the x^i coefficient).

use crate::error::{Error, Result};
use crate::num::{pi, Cx};
use rug::ops::Pow;
use rug::Float;

/// Ascending coefficients of Π (x − r), expanded in the given order.
pub fn expand_real(roots: &[Float], prec: u32) -> Vec<Float> {
    let mut c = vec![Float::with_val(prec, 1)];
    for r in roots {
        let mut next = vec![Float::new(prec); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= Float::with_val(prec, a * r);
        }
        c = next;
    }
    c
}

/// Same expansion with |r| in place of r: bounds |e_k| for error estimates.
pub fn expand_abs(roots: &[Float], prec: u32) -> Vec<Float> {
    let rs: Vec<Float> = roots.iter().map(|r| -Float::with_val(prec, r.abs_ref())).collect();
    expand_real(&rs, prec).into_iter().map(|x| x.abs()).collect()
}

pub fn expand_cx(roots: &[Cx], prec: u32) -> Vec<Cx> {
    let mut c = vec![Cx::one(prec)];
    for r in roots {
        let mut next = vec![Cx::zero(prec); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + a;
            next[i] = &next[i] - &(a * r);
        }
        c = next;
    }
    c
}

pub fn eval_real(c: &[Float], x: &Float) -> Float {
    let prec = x.prec();
    let mut acc = Float::new(prec);
    for a in c.iter().rev() {
        acc *= x;
        acc += a;
    }
    acc
}

/// Σ |c_i| |x|^i, the natural scale for a residual.
pub fn eval_abs_real(c: &[Float], x: &Float) -> Float {
    let prec = x.prec();
    let ax = Float::with_val(prec, x.abs_ref());
    let mut acc = Float::new(prec);
    for a in c.iter().rev() {
        acc *= &ax;
        acc += Float::with_val(prec, a.abs_ref());
    }
    acc
}

pub fn eval_cx(c: &[Cx], x: &Cx) -> Cx {
    let mut acc = Cx::zero(x.prec());
    for a in c.iter().rev() {
        acc = &(&acc * x) + a;
    }
    acc
}

/// p(x) and p'(x) together.
pub fn eval_cx_deriv(c: &[Cx], x: &Cx) -> (Cx, Cx) {
    let prec = x.prec();
    let mut p = Cx::zero(prec);
    let mut dp = Cx::zero(prec);
    for a in c.iter().rev() {
        dp = &(&dp * x) + &p;
        p = &(&p * x) + a;
    }
    (p, dp)
}

#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Cx>,
    /// |p(z)/p'(z)| per root after the final iteration.
    pub newton_radius: Vec<Float>,
}

/// All roots of a polynomial with simple roots by Aberth–Ehrlich iteration,
/// first at a reduced precision and then polished at `prec`.
pub fn aberth(coeffs: &[Cx], prec: u32) -> Result<Roots> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Roots { roots: vec![], newton_radius: vec![] });
    }
    if coeffs[n].is_zero() {
        return Err(Error::Internal("leading coefficient is zero".into()));
    }
    let low = prec.min(256).max(128);
    let cl: Vec<Cx> = coeffs.iter().map(|c| c.with_prec(low)).collect();
    let r0 = {
        let a0 = cl[0].abs();
        let an = cl[n].abs();
        let q = if a0.is_zero() { Float::with_val(low, 1) } else { a0 / an };
        q.pow(1.0 / n as f64)
    };
    let tau = pi(low) * 2u32;
    let mut z: Vec<Cx> = (0..n)
        .map(|k| {
            let th = Float::with_val(low, &tau * (k as f64 + 0.25)) / n as u32 + 0.4;
            Cx::cis(&th).scale(&r0)
        })
        .collect();
    iterate(&cl, &mut z, low, 4000, low as i32 / 2)?;
    let mut z: Vec<Cx> = z.iter().map(|x| x.with_prec(prec)).collect();
    let radius = iterate(coeffs, &mut z, prec, 400, prec as i32 / 3)?;
    Ok(Roots { roots: z, newton_radius: radius })
}

/// Runs until the relative step is below 2^{12−prec}, or until it stalls
/// below 2^{−stall_bits} (ill-conditioned roots cannot get further).
fn iterate(c: &[Cx], z: &mut [Cx], prec: u32, max_iter: usize, stall_bits: i32) -> Result<Vec<Float>> {
    let n = z.len();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 12));
    let stall = Float::with_val(prec, Float::i_exp(1, -stall_bits));
    let mut best = Float::with_val(prec, f64::INFINITY);
    let mut flat = 0;
    for _ in 0..max_iter {
        let mut worst = Float::new(prec);
        let mut radius = Vec::with_capacity(n);
        for k in 0..n {
            let (p, dp) = eval_cx_deriv(c, &z[k]);
            if p.is_zero() {
                radius.push(Float::new(prec));
                continue;
            }
            let w = p.div(&dp);
            let mut s = Cx::zero(prec);
            for j in 0..n {
                if j != k {
                    s = &s + &(&z[k] - &z[j]).inv();
                }
            }
            let denom = &Cx::one(prec) - &(&w * &s);
            let step = w.div(&denom);
            let rel = step.abs() / z[k].abs().max(&Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 2))));
            if rel > worst {
                worst = rel;
            }
            radius.push(w.abs());
            z[k] = &z[k] - &step;
        }
        if worst < tol {
            return Ok(radius);
        }
        if worst < Float::with_val(prec, &best / 4u32) {
            best = worst;
            flat = 0;
        } else {
            flat += 1;
            if flat >= 6 && best < stall {
                return Ok(radius);
            }
        }
    }
    Err(Error::Internal("Aberth iteration did not converge".into()))
}
