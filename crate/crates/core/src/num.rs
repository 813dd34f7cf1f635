//! Precision bookkeeping and a minimal complex type over MPFR floats.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::ops::{Add, Mul, Neg, Sub};

/// Guard digits carried on top of the requested precision.
pub const GUARD_DIGITS: u32 = 15;

/// Binary precision sufficient for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// Binary precision used internally for a run at `digits` decimal digits.
pub fn working_bits(digits: u32) -> u32 {
    bits_for_digits(digits + GUARD_DIGITS)
}

pub fn fl(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn from_int(prec: u32, v: &Integer) -> Float {
    Float::with_val(prec, v)
}

pub fn from_rat(prec: u32, v: &Rational) -> Float {
    Float::with_val(prec, v)
}

/// 10^e as a float.
pub fn pow10(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 10).pow(e)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Parse a decimal string at the given precision.
pub fn parse_float(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s.trim()).ok().map(|p| Float::with_val(prec, p))
}

/// Scientific decimal rendering with `digits` significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

/// log10 |x|, or -inf for zero.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

/// Round a float to the nearest integer.
pub fn round_int(x: &Float) -> Integer {
    x.to_integer().expect("finite value")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Cx::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        Cx::new(re, Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx::new(fl(prec, re), fl(prec, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// exp(i·theta)
    pub fn cis(theta: &Float) -> Self {
        let prec = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        Cx::new(c, s)
    }

    /// e(num/den) = exp(2πi·num/den), with the fraction reduced first so
    /// that exact quarter turns come out exact.
    pub fn root_of_unity(prec: u32, num: i64, den: u64) -> Self {
        let den_i = den as i64;
        let mut k = num.rem_euclid(den_i);
        let g = gcd_u64(k as u64, den);
        let (mut k2, d2) = if k == 0 { (0, 1) } else { ((k as u64 / g) as i64, den / g) };
        match d2 {
            1 => return Cx::one(prec),
            2 => return Cx::from_f64(prec, -1.0, 0.0),
            4 => {
                return if k2 == 1 {
                    Cx::from_f64(prec, 0.0, 1.0)
                } else {
                    Cx::from_f64(prec, 0.0, -1.0)
                }
            }
            _ => {}
        }
        // Map into (-1/2, 1/2] for accuracy.
        if 2 * k2 > d2 as i64 {
            k2 -= d2 as i64;
        }
        k = k2;
        let theta = pi(prec + 16) * Float::with_val(prec + 16, 2 * k) / Float::with_val(prec + 16, d2);
        let z = Cx::cis(&theta);
        Cx::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im))
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut r = Float::with_val(p, self.re.square_ref());
        r += Float::with_val(p, self.im.square_ref());
        r
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn mul_i(&self) -> Self {
        Cx::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone())
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re / &n), Float::with_val(p, -&self.im) / n)
    }

    pub fn div(&self, o: &Cx) -> Self {
        self * &o.inv()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// self += a*b
    pub fn add_mul(&mut self, a: &Cx, b: &Cx) {
        let p = self.prec();
        let t1 = Float::with_val(p, &a.re * &b.re);
        let t2 = Float::with_val(p, &a.im * &b.im);
        let t3 = Float::with_val(p, &a.re * &b.im);
        let t4 = Float::with_val(p, &a.im * &b.re);
        self.re += t1;
        self.re -= t2;
        self.im += t3;
        self.im += t4;
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cx::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cx::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl<'a> Add<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl<'a> Sub<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl<'a> Mul<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        Cx::new(re, im)
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(Float::with_val(self.re.prec(), -&self.re), Float::with_val(self.im.prec(), -&self.im))
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Primes up to `x` by a plain sieve.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return vec![];
    }
    let n = x as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn binomial(n: u64, k: u64) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}
