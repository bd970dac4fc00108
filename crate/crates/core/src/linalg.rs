//! Small dense helpers: the state space is at most a few hundred dimensions,
//! so plain slices and a row-major square matrix are enough.

use crate::real::Real;

#[inline]
pub fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

#[inline]
pub fn norm_sq<T: Real>(x: &[T]) -> T {
    dot(x, x)
}

#[inline]
pub fn norm<T: Real>(x: &[T]) -> T {
    norm_sq(x).sqrt()
}

pub fn sub<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

pub fn distance<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        .sqrt()
}

/// `|x|^p` with the convention `0^0 = 1`.
#[inline]
pub fn pow_norm<T: Real>(x: T, p: u32) -> T {
    if p == 0 {
        T::one()
    } else {
        x.powi(p as i32)
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, T::one())
    }

    pub fn scaled_identity(n: usize, s: T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    /// `self += s * u v^T`
    pub fn add_outer(&mut self, s: T, u: &[T], v: &[T]) {
        for (row, &ui) in self.data.chunks_mut(self.n).zip(u) {
            for (x, &vj) in row.iter_mut().zip(v) {
                *x = *x + s * ui * vj;
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// Operator (spectral) norm of a symmetric matrix by power iteration,
    /// stopping after `max_iter` iterations or when the estimate changes by
    /// less than `rel_tol` relatively.
    pub fn symmetric_operator_norm(&self, start: &[T], max_iter: usize, rel_tol: f64) -> T {
        let n = self.n;
        if n == 0 {
            return T::zero();
        }
        if n == 1 {
            return self.data[0].abs();
        }
        let mut v: Vec<T> = start.to_vec();
        let mut len = norm(&v);
        if len == T::zero() {
            v = vec![T::one(); n];
            len = norm(&v);
        }
        v.iter_mut().for_each(|x| *x = *x / len);
        let mut estimate = T::zero();
        let tol = T::of(rel_tol);
        for _ in 0..max_iter {
            // Iterate on A^2 so that eigenvalues of opposite sign and equal
            // magnitude do not cause oscillation.
            let w = self.mul_vec(&v);
            let next = norm(&w);
            if next == T::zero() {
                return T::zero();
            }
            let converged = (next - estimate).abs() <= tol * next;
            estimate = next;
            let aw = self.mul_vec(&w);
            let aw_len = norm(&aw);
            if aw_len == T::zero() {
                break;
            }
            v = aw.into_iter().map(|x| x / aw_len).collect();
            if converged {
                break;
            }
        }
        estimate
    }
}
