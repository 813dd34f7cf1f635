//! Dense complex matrices at arbitrary precision.

use crate::num::Cx;
use rug::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub prec: u32,
    data: Vec<Cx>,
}

impl BigComplexMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        BigComplexMatrix { rows, cols, prec, data: vec![Cx::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = Cx::one(prec);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, prec: u32, mut f: impl FnMut(usize, usize) -> Cx) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BigComplexMatrix { rows, cols, prec, data }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols, self.prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cx]) -> Vec<Cx> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Cx::zero(self.prec);
                for (k, x) in v.iter().enumerate() {
                    acc.add_mul(&self[(i, k)], x);
                }
                acc
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.prec, |i, j| self[(j, i)].conj())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| &self[(i, j)] - &o[(i, j)])
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| &self[(i, j)] + &o[(i, j)])
    }

    pub fn scale(&self, s: &Cx) -> Self {
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| &self[(i, j)] * s)
    }

    pub fn trace(&self) -> Cx {
        let mut t = Cx::zero(self.prec);
        for i in 0..self.rows.min(self.cols) {
            t = &t + &self[(i, i)];
        }
        t
    }

    /// max |entry|
    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for x in &self.data {
            let a = x.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// max |M − M†|
    pub fn hermitian_defect(&self) -> Float {
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn column(&self, j: usize) -> Vec<Cx> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Solve A x = b by Gaussian elimination with partial pivoting.
    /// Returns None for an exactly singular pivot.
    pub fn solve(&self, b: &[Cx]) -> Option<Vec<Cx>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut x: Vec<Cx> = b.to_vec();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[(i, col)].norm_sqr().partial_cmp(&a[(j, col)].norm_sqr()).unwrap())?;
            if a[(piv, col)].is_zero() {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                x.swap(piv, col);
            }
            let inv = a[(col, col)].inv();
            for i in col + 1..n {
                let f = &a[(i, col)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let t = &f * &a[(col, j)];
                    a[(i, j)] = &a[(i, j)] - &t;
                }
                let t = &f * &x[col];
                x[i] = &x[i] - &t;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i].clone();
            for j in i + 1..n {
                let t = &a[(i, j)] * &x[j];
                s = &s - &t;
            }
            x[i] = &s * &a[(i, i)].inv();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for BigComplexMatrix {
    type Output = Cx;
    fn index(&self, (i, j): (usize, usize)) -> &Cx {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for BigComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::pow10;

    #[test]
    fn solve_small_system() {
        let p = 200;
        let a = BigComplexMatrix::from_fn(3, 3, p, |i, j| Cx::from_f64(p, (i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 }, (i as f64) - (j as f64)));
        let x: Vec<Cx> = (0..3).map(|i| Cx::from_f64(p, i as f64 + 1.0, -0.5)).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < pow10(p, -50));
        }
    }
}
