//! LLL reduction of integer lattice bases.

use rug::{Float, Integer};

fn dot(prec: u32, a: &[Float], b: &[Float]) -> Float {
    let mut s = Float::new(prec);
    for (x, y) in a.iter().zip(b) {
        s += Float::with_val(prec, x * y);
    }
    s
}

fn max_bits(basis: &[Vec<Integer>]) -> u32 {
    basis.iter().flat_map(|r| r.iter()).map(|x| x.significant_bits()).max().unwrap_or(1)
}

struct Gs {
    prec: u32,
    bstar: Vec<Vec<Float>>,
    mu: Vec<Vec<Float>>,
    norm: Vec<Float>,
}

impl Gs {
    fn row(&mut self, basis: &[Vec<Integer>], i: usize) {
        let p = self.prec;
        let bi: Vec<Float> = basis[i].iter().map(|x| Float::with_val(p, x)).collect();
        let mut v = bi.clone();
        for j in 0..i {
            let m = if self.norm[j].is_zero() {
                Float::new(p)
            } else {
                dot(p, &bi, &self.bstar[j]) / &self.norm[j]
            };
            for (c, b) in v.iter_mut().zip(&self.bstar[j]) {
                *c -= Float::with_val(p, &m * b);
            }
            self.mu[i][j] = m;
        }
        self.norm[i] = dot(p, &v, &v);
        self.bstar[i] = v;
    }
}

/// In-place LLL with parameter δ (e.g. 0.99). Rows are basis vectors.
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta: f64) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dim = basis[0].len();
    let prec = (2 * max_bits(basis) + 4 * n as u32 + 96).max(128);
    let mut gs = Gs {
        prec,
        bstar: vec![vec![Float::new(prec); dim]; n],
        mu: vec![vec![Float::new(prec); n]; n],
        norm: vec![Float::new(prec); n],
    };
    let half = Float::with_val(prec, 0.51);
    gs.row(basis, 0);
    let mut valid = 1;
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        assert!(guard < 50_000_000, "LLL iteration limit");
        if valid <= k {
            gs.row(basis, k);
            valid = k + 1;
        }
        // size reduction, repeated until stable under recomputation
        loop {
            let mut changed = false;
            for j in (0..k).rev() {
                if Float::with_val(prec, gs.mu[k][j].abs_ref()) <= half {
                    continue;
                }
                let r = gs.mu[k][j].clone().round().to_integer().unwrap();
                if r == 0 {
                    continue;
                }
                changed = true;
                let (head, tail) = basis.split_at_mut(k);
                for (c, b) in tail[0].iter_mut().zip(&head[j]) {
                    *c -= Integer::from(&r * b);
                }
                let rf = Float::with_val(prec, &r);
                for i in 0..j {
                    let t = Float::with_val(prec, &rf * &gs.mu[j][i]);
                    gs.mu[k][i] -= t;
                }
                gs.mu[k][j] -= &rf;
            }
            if !changed {
                break;
            }
            gs.row(basis, k);
        }
        let m2 = Float::with_val(prec, gs.mu[k][k - 1].square_ref());
        let lhs = &gs.norm[k];
        let rhs = Float::with_val(prec, Float::with_val(prec, delta) - m2) * &gs.norm[k - 1];
        if *lhs < rhs {
            basis.swap(k, k - 1);
            gs.row(basis, k - 1);
            valid = k;
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
}

/// Squared Euclidean norm of an integer vector.
pub fn norm2(v: &[Integer]) -> Integer {
    v.iter().map(|x| Integer::from(x.square_ref())).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_small_relation() {
        // relation 3·a − 2·b + c = 0 hidden in scaled reals
        let prec = 256;
        let a = Float::with_val(prec, 2).sqrt();
        let b = Float::with_val(prec, 5).sqrt();
        let c = Float::with_val(prec, &b * 2u32) - Float::with_val(prec, &a * 3u32);
        let s = Float::with_val(prec, Float::i_exp(1, 120));
        let col = |x: &Float| Float::with_val(prec, x * &s).round().to_integer().unwrap();
        let mut basis = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(0), col(&a)],
            vec![Integer::from(0), Integer::from(1), Integer::from(0), col(&b)],
            vec![Integer::from(0), Integer::from(0), Integer::from(1), col(&c)],
        ];
        lll_reduce(&mut basis, 0.99);
        let v = &basis[0];
        let sgn = if v[0] < 0 { -1 } else { 1 };
        assert_eq!(
            v[..3].iter().map(|x| x.to_i64().unwrap() * sgn).collect::<Vec<_>>(),
            vec![3, -2, 1]
        );
    }

    #[test]
    fn reduced_basis_is_lll() {
        let mut basis: Vec<Vec<Integer>> = vec![
            vec![1, 1, 1],
            vec![-1, 0, 2],
            vec![3, 5, 6],
        ]
        .into_iter()
        .map(|r| r.into_iter().map(Integer::from).collect())
        .collect();
        lll_reduce(&mut basis, 0.75);
        // known reduced basis up to sign/order has all norms ≤ 5
        assert!(basis.iter().all(|r| norm2(r) <= 5));
    }
}
