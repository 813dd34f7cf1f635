//! Exact arithmetic in real quadratic fields K = Q(√m), units, class numbers
//! and principal ideals of small norm.

use crate::error::{Error, Result};
use crate::num::{is_prime_u64, primes_up_to};
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// p + q·√m with rational p, q and squarefree radicand m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRational {
    p: Rational,
    q: Rational,
    m: u64,
}

impl QuadRational {
    pub fn new(p: impl Into<Rational>, q: impl Into<Rational>, m: u64) -> Self {
        QuadRational { p: p.into(), q: q.into(), m }
    }

    pub fn from_int(n: i64, m: u64) -> Self {
        QuadRational::new(n, 0, m)
    }

    pub fn zero(m: u64) -> Self {
        QuadRational::new(0, 0, m)
    }

    pub fn one(m: u64) -> Self {
        QuadRational::new(1, 0, m)
    }

    /// √m itself.
    pub fn sqrt_m(m: u64) -> Self {
        QuadRational::new(0, 1, m)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    pub fn norm(&self) -> Rational {
        Rational::from(self.p.square_ref()) - Rational::from(self.q.square_ref()) * self.m
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.p * 2u32)
    }

    /// Galois conjugate √m ↦ −√m.
    pub fn conj(&self) -> Self {
        QuadRational::new(self.p.clone(), Rational::from(-&self.q), self.m)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadRational::new(c.p / &n, c.q / n, self.m))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadRational::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadRational::new(Rational::from(&self.p * r), Rational::from(&self.q * r), self.m)
    }

    /// Membership in the maximal order.
    pub fn is_integral(&self) -> bool {
        if self.m % 4 == 1 {
            let tp = Rational::from(&self.p * 2u32);
            let tq = Rational::from(&self.q * 2u32);
            if *tp.denom() != 1 || *tq.denom() != 1 {
                return false;
            }
            let a = tp.numer().clone();
            let b = tq.numer().clone();
            Integer::from(a - b).is_even()
        } else {
            *self.p.denom() == 1 && *self.q.denom() == 1
        }
    }

    /// Sign of ρ₁ (which = 1) or ρ₂ (which = 2), decided exactly.
    pub fn sign_at(&self, which: u8) -> Ordering {
        let q = if which == 1 { self.q.clone() } else { Rational::from(-&self.q) };
        sign_p_plus_q_sqrt(&self.p, &q, self.m)
    }

    pub fn sign_rho1(&self) -> Ordering {
        self.sign_at(1)
    }

    pub fn sign_rho2(&self) -> Ordering {
        self.sign_at(2)
    }

    /// Real embedding value; which = 1 sends √m to +√m.
    pub fn rho(&self, which: u8, prec: u32) -> Float {
        let s = Float::with_val(prec, self.m).sqrt();
        let qs = Float::with_val(prec, &self.q) * s;
        let p = Float::with_val(prec, &self.p);
        if which == 1 {
            p + qs
        } else {
            p - qs
        }
    }

    pub fn rho1(&self, prec: u32) -> Float {
        self.rho(1, prec)
    }

    pub fn rho2(&self, prec: u32) -> Float {
        self.rho(2, prec)
    }

    /// Exact comparison under ρ₁.
    pub fn cmp_rho1(&self, other: &Self) -> Ordering {
        (self - other).sign_rho1()
    }

    /// Residue (a, b) with self ≡ a + b√m mod n, for denominators prime to n.
    pub fn residue_mod(&self, n: u64) -> Option<(u64, u64)> {
        Some((rat_mod(&self.p, n)?, rat_mod(&self.q, n)?))
    }

    /// True when (self − 1)/n lies in the maximal order.
    pub fn congruent_one_mod(&self, n: u64) -> bool {
        let t = self - &QuadRational::one(self.m);
        t.scale(&Rational::from((1, n))).is_integral()
    }

    /// Coordinates with respect to √(s²m): value = p + q'·√(s²m), q' = q/s.
    pub fn delta_coords(&self, s: u64) -> (Rational, Rational) {
        (self.p.clone(), Rational::from(&self.q / s))
    }

    /// Render as "p/r + q/r * sqrt(m)" with a common denominator r.
    pub fn to_fraction_string(&self) -> String {
        let r = Integer::from(self.p.denom().lcm_ref(self.q.denom()));
        let pn = Integer::from(self.p.numer() * Integer::from(&r / self.p.denom()));
        let qn = Integer::from(self.q.numer() * Integer::from(&r / self.q.denom()));
        if qn < 0 {
            format!("{}/{} - {}/{} * sqrt({})", pn, r, Integer::from(-qn), r, self.m)
        } else {
            format!("{}/{} + {}/{} * sqrt({})", pn, r, qn, r, self.m)
        }
    }
}

fn rat_mod(x: &Rational, n: u64) -> Option<u64> {
    let nn = Integer::from(n);
    let num = Integer::from(x.numer().mod_u(n as u32));
    let den = Integer::from(x.denom().mod_u(n as u32));
    let inv = den.invert(&nn).ok()?;
    let r = Integer::from(num * inv) % &nn;
    Some(r.to_u64().unwrap())
}

/// Exact sign of p + q√m.
fn sign_p_plus_q_sqrt(p: &Rational, q: &Rational, m: u64) -> Ordering {
    let sp = p.cmp0();
    let sq = q.cmp0();
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // opposite signs: compare p² with q²m
    let p2 = Rational::from(p.square_ref());
    let q2m = Rational::from(q.square_ref()) * m;
    match p2.cmp(&q2m) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "{}", self.p)
        } else if self.p == 0 {
            write!(f, "{}*sqrt({})", self.q, self.m)
        } else if self.q < 0 {
            write!(f, "{} - {}*sqrt({})", self.p, Rational::from(-&self.q), self.m)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.m)
        }
    }
}

macro_rules! check_m {
    ($a:expr, $b:expr) => {
        assert_eq!($a.m, $b.m, "mixing elements of different fields")
    };
}

impl<'a> Add<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn add(self, o: &QuadRational) -> QuadRational {
        check_m!(self, o);
        QuadRational::new(Rational::from(&self.p + &o.p), Rational::from(&self.q + &o.q), self.m)
    }
}

impl<'a> Sub<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn sub(self, o: &QuadRational) -> QuadRational {
        check_m!(self, o);
        QuadRational::new(Rational::from(&self.p - &o.p), Rational::from(&self.q - &o.q), self.m)
    }
}

impl<'a> Mul<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn mul(self, o: &QuadRational) -> QuadRational {
        check_m!(self, o);
        let p = Rational::from(&self.p * &o.p) + Rational::from(&self.q * &o.q) * self.m;
        let q = Rational::from(&self.p * &o.q) + Rational::from(&self.q * &o.p);
        QuadRational::new(p, q, self.m)
    }
}

impl<'a> Div<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn div(self, o: &QuadRational) -> QuadRational {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        QuadRational::new(Rational::from(-&self.p), Rational::from(-&self.q), self.m)
    }
}

impl Add for QuadRational {
    type Output = QuadRational;
    fn add(self, o: QuadRational) -> QuadRational {
        &self + &o
    }
}

impl Sub for QuadRational {
    type Output = QuadRational;
    fn sub(self, o: QuadRational) -> QuadRational {
        &self - &o
    }
}

impl Mul for QuadRational {
    type Output = QuadRational;
    fn mul(self, o: QuadRational) -> QuadRational {
        &self * &o
    }
}

/// Squarefree decomposition n = s²·m.
pub fn squarefree_part(n: u64) -> (u64, u64) {
    let mut m = n;
    let mut s = 1u64;
    let mut f = 2u64;
    while f * f <= m {
        while m % (f * f) == 0 {
            m /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, m)
}

/// Fundamental discriminant of Q(√m) for squarefree m.
pub fn field_discriminant(m: u64) -> u64 {
    if m % 4 == 1 {
        m
    } else {
        4 * m
    }
}

/// Fundamental unit ε₀ > 1 of the maximal order of discriminant `disc`,
/// from the period of the continued fraction of the reduced quadratic
/// irrational (b + √disc)/2. The radicand m is disc or disc/4.
pub fn fundamental_unit(disc: u64, m: u64) -> QuadRational {
    let dd = Integer::from(disc);
    let r = Integer::from(dd.sqrt_ref());
    let mut b = r.clone();
    if Integer::from(&b - disc).is_odd() {
        b -= 1;
    }
    let (p0, q0) = (b.clone(), Integer::from(2));
    let (mut pp, mut qq) = (p0.clone(), q0.clone());
    // convergent denominators q_{i-1}, q_{i-2}
    let (mut c1, mut c2) = (Integer::from(0), Integer::from(1));
    loop {
        let a = Integer::from(&pp + &r) / &qq;
        let c = Integer::from(&a * &c1) + &c2;
        c2 = std::mem::replace(&mut c1, c);
        let np = Integer::from(&a * &qq) - &pp;
        let nq = (Integer::from(&dd - Integer::from(np.square_ref()))) / &qq;
        pp = np;
        qq = nq;
        if pp == p0 && qq == q0 {
            break;
        }
    }
    // ε₀ = c1·ω + c2 with ω = (b + √disc)/2
    let ratio = if disc == m { 1 } else { 2 };
    let p = Rational::from((Integer::from(&c1 * &b), Integer::from(2))) + Rational::from(c2);
    let q = Rational::from((Integer::from(&c1 * ratio), Integer::from(2)));
    QuadRational::new(p, q, m)
}

/// Narrow class number h⁺ by counting cycles of reduced indefinite forms.
pub fn narrow_class_number(disc: u64) -> u64 {
    let d = Integer::from(disc);
    let r = Integer::from(d.sqrt_ref()); // floor √D, D non-square
    let mut forms: Vec<(Integer, Integer, Integer)> = Vec::new();
    let mut b = Integer::from(1);
    if Integer::from(&b - disc).is_odd() {
        b = Integer::from(2);
    }
    while b <= r {
        let num = Integer::from(b.square_ref()) - &d; // = 4ac < 0
        // √D − b < 2|a| < √D + b
        let mut a_abs = Integer::from(1);
        loop {
            let two_a = Integer::from(&a_abs * 2u32);
            let lhs = Integer::from(&two_a - &b);
            // 2|a| − b < √D
            let upper_ok = lhs <= 0 || Integer::from(lhs.square_ref()) < d;
            if !upper_ok {
                break;
            }
            // √D < 2|a| + b
            let sum = Integer::from(&two_a + &b);
            let lower_ok = Integer::from(sum.square_ref()) > d;
            if lower_ok {
                let four_a = Integer::from(&a_abs * 4u32);
                if num.is_divisible(&four_a) {
                    let c_abs = Integer::from(&num / &four_a); // negative
                    forms.push((a_abs.clone(), b.clone(), c_abs.clone()));
                    forms.push((Integer::from(-&a_abs), b.clone(), Integer::from(-c_abs)));
                }
            }
            a_abs += 1;
        }
        b += 2;
    }
    let mut seen = vec![false; forms.len()];
    let index = |f: &(Integer, Integer, Integer), forms: &Vec<(Integer, Integer, Integer)>| {
        forms.iter().position(|g| g == f).expect("rho of reduced form is reduced")
    };
    let mut cycles = 0;
    for i in 0..forms.len() {
        if seen[i] {
            continue;
        }
        cycles += 1;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            let next = rho_form(&forms[j], &d, &r);
            j = index(&next, &forms);
        }
    }
    cycles
}

/// Reduction operator ρ(a,b,c) = (c, b', (b'² − D)/4c) with b' ≡ −b mod 2|c|
/// and √D − 2|c| < b' < √D.
fn rho_form(f: &(Integer, Integer, Integer), d: &Integer, r: &Integer) -> (Integer, Integer, Integer) {
    let c = &f.2;
    let two_c = Integer::from(c.abs_ref()) * 2u32;
    // largest b' ≤ floor√D with b' ≡ −b mod 2|c|
    let target = Integer::from(-&f.1);
    let diff = Integer::from(r - &target);
    let k = diff.div_rem_floor(two_c.clone()).0;
    let bp = Integer::from(&target + Integer::from(&k * &two_c));
    let cp = Integer::from(Integer::from(bp.square_ref()) - d) / Integer::from(c * 4u32);
    (c.clone(), bp, cp)
}

#[derive(Clone, Debug)]
pub struct FieldContext {
    pub d: u64,
    /// Δ = (d+1)(d−3)
    pub delta: u64,
    /// squarefree m with Δ = s²m
    pub radicand: u64,
    pub delta_scale: u64,
    /// discriminant of the maximal order
    pub discriminant: u64,
    pub fundamental_unit: QuadRational,
    pub zauner_unit: QuadRational,
    pub zauner_power: u32,
    pub class_number: u64,
    pub narrow_class_number: u64,
    pub zauner_cube_congruent: bool,
}

/// Validated constructor for odd primes d ≡ 2 mod 3.
pub fn make_field(d: u64) -> Result<FieldContext> {
    if d < 5 || !is_prime_u64(d) {
        return Err(Error::Config(format!("d = {d} is not an odd prime ≥ 5")));
    }
    if d % 3 != 2 {
        return Err(Error::Config(format!("d = {d} is not ≡ 2 mod 3")));
    }
    let ctx = build_field(d)?;
    if !ctx.zauner_cube_congruent {
        return Err(Error::Field(format!("ε³ ≢ 1 mod {d}")));
    }
    Ok(ctx)
}

/// Constructor without the primality and congruence checks (used for d = 15).
pub fn make_field_relaxed(d: u64) -> Result<FieldContext> {
    if d < 5 || d % 2 == 0 {
        return Err(Error::Config(format!("d = {d} must be odd and ≥ 5")));
    }
    build_field(d)
}

fn build_field(d: u64) -> Result<FieldContext> {
    let delta = (d + 1) * (d - 3);
    let (s, m) = squarefree_part(delta);
    assert!(m > 1, "Δ is a perfect square");
    let disc = field_discriminant(m);
    let eps0 = fundamental_unit(disc, m);
    let eps = QuadRational::new(
        Rational::from(((d - 1) as i64, 2)),
        Rational::from((s as i64, 2)),
        m,
    );
    if !eps.is_integral() || eps.norm() != 1 || eps.sign_rho1() != Ordering::Greater {
        return Err(Error::Field("Zauner unit is not a totally positive unit".into()));
    }
    let mut k = 1u32;
    let mut pw = eps0.clone();
    loop {
        match pw.cmp_rho1(&eps) {
            Ordering::Equal => break,
            Ordering::Greater => return Err(Error::Field("ε is not a power of ε₀".into())),
            Ordering::Less => {
                pw = &pw * &eps0;
                k += 1;
            }
        }
    }
    let hplus = narrow_class_number(disc);
    let h = if eps0.norm() == -1 { hplus } else { hplus / 2 };
    let cube = eps.pow(3);
    Ok(FieldContext {
        d,
        delta,
        radicand: m,
        delta_scale: s,
        discriminant: disc,
        fundamental_unit: eps0,
        zauner_unit: eps,
        zauner_power: k,
        class_number: h,
        narrow_class_number: hplus,
        zauner_cube_congruent: cube.congruent_one_mod(d),
    })
}

impl FieldContext {
    pub fn m(&self) -> u64 {
        self.radicand
    }

    /// ρ₁(√Δ) > 0.
    pub fn sqrt_delta_rho1(&self, prec: u32) -> Float {
        Float::with_val(prec, self.delta).sqrt()
    }

    pub fn sqrt_radicand(&self, prec: u32) -> Float {
        Float::with_val(prec, self.radicand).sqrt()
    }

    /// √Δ as an element.
    pub fn sqrt_delta(&self) -> QuadRational {
        QuadRational::new(0, self.delta_scale as i64, self.radicand)
    }

    /// a + b√Δ
    pub fn from_delta_coords(&self, a: impl Into<Rational>, b: impl Into<Rational>) -> QuadRational {
        let b: Rational = b.into();
        QuadRational::new(a, b * self.delta_scale, self.radicand)
    }

    pub fn elem(&self, p: impl Into<Rational>, q: impl Into<Rational>) -> QuadRational {
        QuadRational::new(p, q, self.radicand)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "delta": self.delta,
            "radicand": self.radicand,
            "discriminant": self.discriminant,
            "fundamental_unit": self.fundamental_unit.to_string(),
            "fundamental_unit_norm": self.fundamental_unit.norm().to_string(),
            "zauner_unit": self.zauner_unit.to_string(),
            "zauner_power": self.zauner_power,
            "class_number": self.class_number,
            "narrow_class_number": self.narrow_class_number,
            "zauner_cube_congruent": self.zauner_cube_congruent,
        })
    }
}

/// Smallest unit η > 1 with η ≡ 1 mod d, found by scanning ε₀^j.
/// Errors when the scan exceeds 3k steps or the result differs from ε³.
pub fn minimal_congruent_unit(ctx: &FieldContext) -> Result<QuadRational> {
    let limit = 3 * ctx.zauner_power;
    let mut pw = QuadRational::one(ctx.radicand);
    for _ in 1..=limit {
        pw = &pw * &ctx.fundamental_unit;
        if pw.congruent_one_mod(ctx.d) {
            let cube = ctx.zauner_unit.pow(3);
            if pw != cube {
                return Err(Error::Field(format!("minimal congruent unit {pw} differs from ε³ = {cube}")));
            }
            return Ok(pw);
        }
    }
    Err(Error::Field(format!("no unit ≡ 1 mod {} among ε₀^j, j ≤ {limit}", ctx.d)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalIdeal {
    pub generator: QuadRational,
    pub norm: u64,
}

impl PrincipalIdeal {
    /// Same ideal iff the generator quotient is integral (hence a unit).
    pub fn same_ideal(&self, other: &PrincipalIdeal) -> bool {
        self.norm == other.norm && (&self.generator / &other.generator).is_integral()
    }
}

#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub splitting: Splitting,
    pub ideal: PrincipalIdeal,
}

pub fn splitting_of(ctx: &FieldContext, p: u64) -> Splitting {
    let disc = Integer::from(ctx.discriminant);
    if ctx.discriminant % p == 0 {
        return Splitting::Ramified;
    }
    match disc.kronecker(&Integer::from(p)) {
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// Element of norm ±p with ρ₁ in [√p, √p·ε₀), which exists in every
/// principal ideal of norm p; None if the ideals over p are not principal.
pub fn find_norm_generator(ctx: &FieldContext, p: u64) -> Option<QuadRational> {
    let disc = ctx.discriminant;
    let ratio = if disc == ctx.radicand { 1i64 } else { 2 };
    let eps = ctx.fundamental_unit.rho1(64).to_f64();
    let ymax = ((p as f64).sqrt() * (eps + 1.0) / (disc as f64).sqrt()).ceil() as u64 + 1;
    let four_p = Integer::from(4u64 * p);
    for y in 0..=ymax {
        let dy2 = Integer::from(disc) * Integer::from(y) * Integer::from(y);
        for sign in [1i32, -1] {
            let x2 = if sign > 0 { Integer::from(&dy2 + &four_p) } else { Integer::from(&dy2 - &four_p) };
            if x2 < 0 || !x2.is_perfect_square() {
                continue;
            }
            let x = x2.sqrt();
            let g = QuadRational::new(
                Rational::from((x, Integer::from(2))),
                Rational::from((y as i64 * ratio, 2)),
                ctx.radicand,
            );
            if g.is_integral() {
                return Some(g);
            }
        }
    }
    None
}

fn require_h1(ctx: &FieldContext) -> Result<()> {
    if ctx.class_number != 1 {
        return Err(Error::Unsupported(format!(
            "ideal enumeration needs class number 1 (d = {} has {})",
            ctx.d, ctx.class_number
        )));
    }
    Ok(())
}

/// Every prime ideal of norm ≤ x, once each, in order of the rational prime.
pub fn enumerate_prime_ideals(ctx: &FieldContext, x: u64) -> Result<Vec<PrimeIdeal>> {
    require_h1(ctx)?;
    let mut out = Vec::new();
    for p in primes_up_to(x) {
        let kind = splitting_of(ctx, p);
        match kind {
            Splitting::Inert => {
                if p.checked_mul(p).map_or(false, |n| n <= x) {
                    out.push(PrimeIdeal {
                        p,
                        splitting: kind,
                        ideal: PrincipalIdeal { generator: QuadRational::from_int(p as i64, ctx.radicand), norm: p * p },
                    });
                }
            }
            Splitting::Ramified | Splitting::Split => {
                let g = find_norm_generator(ctx, p).ok_or_else(|| {
                    Error::Internal(format!("no generator of norm ±{p}: class number assumption violated"))
                })?;
                let first = PrincipalIdeal { generator: g.clone(), norm: p };
                if kind == Splitting::Split {
                    let second = PrincipalIdeal { generator: g.conj(), norm: p };
                    if first.same_ideal(&second) {
                        return Err(Error::Internal(format!("split prime {p} gave conjugate-equal ideals")));
                    }
                    out.push(PrimeIdeal { p, splitting: kind, ideal: first });
                    out.push(PrimeIdeal { p, splitting: kind, ideal: second });
                } else {
                    out.push(PrimeIdeal { p, splitting: kind, ideal: first });
                }
            }
        }
    }
    Ok(out)
}

/// All integral ideals of norm ≤ x, grouped by norm.
pub fn enumerate_ideals(ctx: &FieldContext, x: u64) -> Result<BTreeMap<u64, Vec<PrincipalIdeal>>> {
    let primes = enumerate_prime_ideals(ctx, x)?;
    let mut ideals = vec![PrincipalIdeal { generator: QuadRational::one(ctx.radicand), norm: 1 }];
    if x == 0 {
        ideals.clear();
    }
    for pr in &primes {
        let mut extra = Vec::new();
        for base in &ideals {
            let mut n = base.norm;
            let mut g = base.generator.clone();
            loop {
                n = match n.checked_mul(pr.ideal.norm) {
                    Some(v) if v <= x => v,
                    _ => break,
                };
                g = &g * &pr.ideal.generator;
                extra.push(PrincipalIdeal { generator: g.clone(), norm: n });
            }
        }
        ideals.extend(extra);
    }
    let mut map: BTreeMap<u64, Vec<PrincipalIdeal>> = BTreeMap::new();
    for i in ideals {
        map.entry(i.norm).or_default().push(i);
    }
    Ok(map)
}
