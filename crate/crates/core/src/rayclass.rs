//! The ray class group Cl_(d)∞₂ of K for an inert prime d.
//!
//! With class number one, Cl_(d)∞₂ ≅ (O_K/d)^× × {±1} modulo the image of
//! ⟨−1, ε₀⟩. Folding the sign into the residue via (β, s) ↦ s·β identifies
//! the quotient with F^×/⟨ε̂₀⟩, F = F_{d²}, ε̂₀ = sign(ρ₂ ε₀)·ε₀ mod d.
//! Elements of F are pairs (x, y) meaning x + y√Δ.

use crate::error::{Error, Result};
use crate::num::Cx;
use crate::quadfield::{find_norm_generator, splitting_of, FieldContext, QuadRational, Splitting};
use crate::num::primes_up_to;
use rug::Integer;
use std::cmp::Ordering;

/// Arithmetic in F_d[√Δ] for d inert in K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq {
    pub d: u64,
    pub delta: u64,
}

pub type Elt = (u64, u64);

impl Fq {
    pub fn new(d: u64, delta: u64) -> Self {
        Fq { d, delta: delta % d }
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        let d = self.d;
        let x = (a.0 * b.0 + (a.1 * b.1) % d * self.delta) % d;
        let y = (a.0 * b.1 + a.1 * b.0) % d;
        (x, y)
    }

    pub fn neg(&self, a: Elt) -> Elt {
        ((self.d - a.0) % self.d, (self.d - a.1) % self.d)
    }

    pub fn pow(&self, a: Elt, mut e: u64) -> Elt {
        let mut base = a;
        let mut acc = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: Elt) -> bool {
        a == (0, 0)
    }

    pub fn index(&self, a: Elt) -> usize {
        (a.0 * self.d + a.1) as usize
    }

    /// All nonzero elements in lexicographic order.
    pub fn units(&self) -> Vec<Elt> {
        let mut v = Vec::with_capacity((self.d * self.d - 1) as usize);
        for x in 0..self.d {
            for y in 0..self.d {
                if (x, y) != (0, 0) {
                    v.push((x, y));
                }
            }
        }
        v
    }

    pub fn order(&self, a: Elt) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != (1, 0) {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Residue of β in √Δ coordinates, or None when a denominator meets d.
pub fn residue_delta(ctx: &FieldContext, beta: &QuadRational) -> Option<Elt> {
    let d = ctx.d;
    let (a, b) = beta.residue_mod(d)?;
    // b√m = b·s⁻¹·√Δ
    let sinv = Integer::from(ctx.delta_scale).invert(&Integer::from(d)).ok()?.to_u64()?;
    Some((a, (b * sinv) % d))
}

#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub d: u64,
    pub fq: Fq,
    /// Order of the principal part (the full group when h = 1).
    pub order: usize,
    /// Invariant factors of the whole group.
    pub invariants: Vec<u64>,
    pub generator: Elt,
    /// ε̂₀ in F, and the size of the subgroup it generates.
    pub unit_image: Elt,
    pub unit_orbit: usize,
    pub r_index: usize,
    pub class_number: u64,
    dlog: Vec<usize>,
    reps: Vec<Elt>,
}

pub fn build_ray_class_group(ctx: &FieldContext) -> Result<RayClassGroup> {
    let d = ctx.d;
    let fq = Fq::new(d, ctx.delta);
    let eps0 = &ctx.fundamental_unit;
    let mut u = residue_delta(ctx, eps0).ok_or_else(|| Error::Group("ε₀ not invertible mod d".into()))?;
    if eps0.sign_rho2() == Ordering::Less {
        u = fq.neg(u);
    }
    let units = fq.units();
    // quick inertness check: every nonzero element invertible
    if units.iter().any(|&a| fq.mul(a, a) == (0, 0)) || splitting_of(ctx, d) != Splitting::Inert {
        return Err(Error::Group(format!("{d} is not inert in K")));
    }
    let mut orbit_u = vec![(1u64, 0u64)];
    loop {
        let nx = fq.mul(*orbit_u.last().unwrap(), u);
        if nx == (1, 0) {
            break;
        }
        orbit_u.push(nx);
    }
    let q = orbit_u.len();
    let total = units.len();
    if total % q != 0 {
        return Err(Error::Internal("unit orbit does not divide group order".into()));
    }
    let n = total / q;
    let in_sub = |x: Elt| orbit_u.contains(&x);
    let coset_order = |a: Elt| -> usize {
        let mut k = 1;
        let mut x = a;
        while !in_sub(x) {
            x = fq.mul(x, a);
            k += 1;
        }
        k
    };
    let generator = *units
        .iter()
        .find(|&&a| coset_order(a) == n)
        .ok_or_else(|| Error::Group("principal part is not cyclic".into()))?;
    let canon = |a: Elt| -> Elt { orbit_u.iter().map(|&w| fq.mul(a, w)).min().unwrap() };
    let mut dlog = vec![usize::MAX; (d * d) as usize];
    let mut reps = Vec::with_capacity(n);
    let mut cur = (1u64, 0u64);
    for k in 0..n {
        reps.push(canon(cur));
        for &w in &orbit_u {
            let e = fq.mul(cur, w);
            if dlog[fq.index(e)] != usize::MAX {
                return Err(Error::Internal("generator powers collide".into()));
            }
            dlog[fq.index(e)] = k;
        }
        cur = fq.mul(cur, generator);
    }
    let r_index = dlog[fq.index((d - 1, 0))];
    if r_index == 0 || (2 * r_index) % n != 0 {
        return Err(Error::Group(format!("class R has exponent {r_index}, expected order 2")));
    }
    let invariants = if ctx.class_number == 1 {
        vec![n as u64]
    } else if ctx.class_number == 2 {
        let h_exp = class_of_square_of_nonprincipal(ctx, &fq, u, &dlog)?;
        smith_2x2(n as u64, h_exp)
    } else {
        return Err(Error::Unsupported(format!("class number {}", ctx.class_number)));
    };
    Ok(RayClassGroup {
        d,
        fq,
        order: n,
        invariants,
        generator,
        unit_image: u,
        unit_orbit: q,
        r_index,
        class_number: ctx.class_number,
        dlog,
        reps,
    })
}

/// For h = 2: pick a non-principal prime 𝔭 of smallest norm and return the
/// principal-part exponent of a generator of 𝔭².
fn class_of_square_of_nonprincipal(ctx: &FieldContext, fq: &Fq, _u: Elt, dlog: &[usize]) -> Result<u64> {
    for p in primes_up_to(10_000) {
        if p == ctx.d {
            continue;
        }
        let kind = splitting_of(ctx, p);
        if kind == Splitting::Inert || find_norm_generator(ctx, p).is_some() {
            continue;
        }
        let beta = match kind {
            Splitting::Ramified => QuadRational::from_int(p as i64, ctx.radicand),
            _ => find_norm_generator(ctx, p * p)
                .into_iter()
                .find(|b| !b.scale(&rug::Rational::from((1, p))).is_integral())
                .ok_or_else(|| Error::Group(format!("no generator for the square of a prime over {p}")))?,
        };
        let mut r = residue_delta(ctx, &beta).ok_or_else(|| Error::Internal("residue".into()))?;
        if beta.sign_rho2() == Ordering::Less {
            r = fq.neg(r);
        }
        return Ok(dlog[fq.index(r)] as u64);
    }
    Err(Error::Group("no non-principal prime found".into()))
}

/// Invariant factors of Z² / ⟨(n, 0), (−h, 2)⟩.
pub fn smith_2x2(n: u64, h: u64) -> Vec<u64> {
    let g = crate::num::gcd_u64(crate::num::gcd_u64(n, h % n), 2);
    let det = 2 * n;
    let mut v = vec![g, det / g];
    v.retain(|&x| x != 1);
    v
}

impl RayClassGroup {
    pub fn is_cyclic(&self) -> bool {
        self.invariants.len() == 1
    }

    /// Exponent of the class of the pair (x + y√Δ mod d, sign at ρ₂).
    pub fn class_of_residue(&self, e: Elt, positive_at_rho2: bool) -> Result<usize> {
        let e = (e.0 % self.d, e.1 % self.d);
        if self.fq.is_zero(e) {
            return Err(Error::Group("residue not coprime to d".into()));
        }
        let e = if positive_at_rho2 { e } else { self.fq.neg(e) };
        Ok(self.dlog[self.fq.index(e)])
    }

    pub fn class_of_element(&self, ctx: &FieldContext, beta: &QuadRational) -> Result<usize> {
        let r = residue_delta(ctx, beta).ok_or_else(|| Error::Group("β has a denominator divisible by d".into()))?;
        match beta.sign_rho2() {
            Ordering::Equal => Err(Error::Group("β = 0".into())),
            s => self.class_of_residue(r, s == Ordering::Greater),
        }
    }

    /// Exponent of A_{m,n}: α ≡ m + n√Δ mod d, ρ₂(α) > 0.
    pub fn amn_class(&self, m: i64, n: i64) -> Result<usize> {
        let d = self.d as i64;
        let e = (m.rem_euclid(d) as u64, n.rem_euclid(d) as u64);
        if e == (0, 0) {
            return Err(Error::Group("(m, n) = (0, 0) has no class".into()));
        }
        self.class_of_residue(e, true)
    }

    pub fn r_class(&self) -> usize {
        self.r_index
    }

    /// Canonical (lexicographically smallest) representative of class k.
    pub fn class_rep(&self, k: usize) -> Elt {
        self.reps[k % self.order]
    }

    /// Lexicographically smallest element of the ε-orbit of (m, n).
    pub fn fiber_rep(&self, m: u64, n: u64) -> Elt {
        let k = self.dlog[self.fq.index((m % self.d, n % self.d))];
        self.reps[k]
    }

    /// All pairs (m, n) in class k, lexicographic.
    pub fn fiber(&self, k: usize) -> Vec<Elt> {
        self.fq.units().into_iter().filter(|&e| self.dlog[self.fq.index(e)] == k).collect()
    }

    /// π(k) = k + 1 on exponents.
    pub fn galois_permutation(&self) -> Vec<usize> {
        (0..self.order).map(|k| (k + 1) % self.order).collect()
    }

    /// π on pairs: multiply by γ and take the fiber representative.
    pub fn galois_on_pair(&self, e: Elt) -> Elt {
        let x = self.fq.mul(e, self.generator);
        self.fiber_rep(x.0, x.1)
    }

    pub fn character(&self, j: usize) -> Character {
        Character { j: j % self.order, n: self.order, r_index: self.r_index }
    }

    /// Characters with χ(R) = −1, in increasing j.
    pub fn odd_characters(&self) -> Vec<usize> {
        (0..self.order).filter(|&j| self.character(j).value_at_r() == -1).collect()
    }

    pub fn table_json_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (m, n) in self.fq.units() {
            let k = self.dlog[self.fq.index((m, n))];
            out.push(
                serde_json::json!({"m": m, "n": n, "class": k, "fiber_rep": [self.reps[k].0, self.reps[k].1]})
                    .to_string(),
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "principal_part_order": self.order,
            "invariants": self.invariants,
            "cyclic": self.is_cyclic(),
            "generator": [self.generator.0, self.generator.1],
            "r_index": self.r_index,
            "unit_image_order": self.unit_orbit,
            "class_number": self.class_number,
        })
    }
}

/// Order of the ray class group for modulus (d)·(chosen infinite places),
/// computed by exhausting the unit image. Class number one only.
pub fn ray_class_order(ctx: &FieldContext, inf1: bool, inf2: bool) -> Result<usize> {
    let fq = Fq::new(ctx.d, ctx.delta);
    let eps0 = &ctx.fundamental_unit;
    let e = residue_delta(ctx, eps0).ok_or_else(|| Error::Group("ε₀ mod d".into()))?;
    let s1 = eps0.sign_rho1() == Ordering::Greater;
    let s2 = eps0.sign_rho2() == Ordering::Greater;
    let gens = [((ctx.d - 1, 0), false, false), (e, s1, s2)];
    // elements (residue, sign1, sign2) with unused signs pinned to true
    let norm = |(r, a, b): (Elt, bool, bool)| (r, a || !inf1, b || !inf2);
    let mut sub = vec![norm(((1, 0), true, true))];
    let mut frontier = sub.clone();
    while let Some(x) = frontier.pop() {
        for &(g, ga, gb) in &gens {
            let y = norm((fq.mul(x.0, g), x.1 == ga, x.2 == gb));
            if !sub.contains(&y) {
                sub.push(y);
                frontier.push(y);
            }
        }
    }
    let signs = (if inf1 { 2 } else { 1 }) * (if inf2 { 2 } else { 1 });
    let total = ((ctx.d * ctx.d - 1) as usize) * signs;
    Ok(total * ctx.class_number as usize / sub.len())
}

#[derive(Clone, Copy, Debug)]
pub struct Character {
    pub j: usize,
    pub n: usize,
    r_index: usize,
}

impl Character {
    /// χ(γ^k) = e(jk/N) as the exponent jk mod N.
    pub fn exponent(&self, k: usize) -> usize {
        (self.j * k) % self.n
    }

    pub fn value(&self, k: usize, prec: u32) -> Cx {
        Cx::root_of_unity(prec, self.exponent(k) as i64, self.n as u64)
    }

    /// χ(R) ∈ {±1}, exactly.
    pub fn value_at_r(&self) -> i32 {
        match self.exponent(self.r_index) {
            0 => 1,
            e if 2 * e == self.n => -1,
            _ => unreachable!("R has order 2"),
        }
    }

    pub fn conj(&self) -> Character {
        Character { j: (self.n - self.j) % self.n, n: self.n, r_index: self.r_index }
    }
}
