//! Exponential integral E1 for positive real arguments.

use rug::float::Constant;
use rug::Float;

/// E1(x) = ∫_x^∞ e^{-t}/t dt for x > 0, at the precision of `x`.
pub fn e1(x: &Float) -> Float {
    assert!(x.is_sign_positive() && !x.is_zero(), "E1 needs x > 0");
    let prec = x.prec();
    let threshold = (prec as f64 / 10.0).max(4.0);
    if x.to_f64() >= threshold {
        e1_cf(x, prec)
    } else {
        e1_series(x, prec)
    }
}

/// −γ − ln x − Σ (−x)^k/(k·k!), with extra bits for the cancellation.
fn e1_series(x: &Float, prec: u32) -> Float {
    // terms grow to ~e^x while the result is ~e^{-x}
    let extra = (2.0 * x.to_f64() / std::f64::consts::LN_2).ceil() as u32 + 24;
    let wp = prec + extra;
    let xw = Float::with_val(wp, x);
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut sum = Float::new(wp);
    let mut pw = Float::with_val(wp, 1); // (−x)^k / k!
    let mut k = 1u32;
    loop {
        pw *= &xw;
        pw /= k;
        pw = -pw;
        let term = Float::with_val(wp, &pw / k);
        sum += &term;
        if term.abs() < eps && k as f64 > x.to_f64() {
            break;
        }
        k += 1;
    }
    let gamma = Float::with_val(wp, Constant::Euler);
    let lnx = Float::with_val(wp, xw.ln_ref());
    let r = -gamma - lnx - sum;
    Float::with_val(prec, r)
}

/// e^{−x} / (x+1 − 1²/(x+3 − 2²/(x+5 − …))) by modified Lentz.
fn e1_cf(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let xw = Float::with_val(wp, x);
    let tiny = Float::with_val(wp, Float::i_exp(1, -(4 * wp as i32)));
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32 - 4)));
    let mut f = Float::with_val(wp, &xw + 1u32);
    let mut c = f.clone();
    let mut dd = Float::new(wp);
    let mut k = 1u64;
    loop {
        let a = -Float::with_val(wp, k * k);
        let b = Float::with_val(wp, &xw + (2 * k + 1) as u32);
        dd = Float::with_val(wp, &a * &dd) + &b;
        if dd.clone().abs() < tiny {
            dd = tiny.clone();
        }
        dd = dd.recip();
        c = Float::with_val(wp, &a / &c) + &b;
        if c.clone().abs() < tiny {
            c = tiny.clone();
        }
        let delta = Float::with_val(wp, &c * &dd);
        f *= &delta;
        if (delta - 1u32).abs() < eps {
            break;
        }
        k += 1;
        assert!(k < 1_000_000, "E1 continued fraction did not converge");
    }
    let r = Float::with_val(wp, (-xw).exp_ref()) / f;
    Float::with_val(prec, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mpfr_e1(x: &Float) -> Float {
        // MPFR's eint at a negative argument is −E1(|x|).
        let wp = x.prec() + 64;
        let neg = Float::with_val(wp, -x);
        let r = -neg.eint();
        Float::with_val(x.prec(), r)
    }

    #[test]
    fn agrees_with_mpfr_eint() {
        for prec in [128u32, 256, 400] {
            for v in [0.001, 0.3, 1.0, 2.5, 7.0, 12.0, 25.0, 39.9, 40.1, 55.0, 120.0, 300.0] {
                let x = Float::with_val(prec, v);
                let a = e1(&x);
                let b = mpfr_e1(&x);
                let rel = Float::with_val(prec, &a - &b).abs() / b.abs();
                assert!(rel < Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)), "x={v} prec={prec} rel={rel}");
            }
        }
    }
}
