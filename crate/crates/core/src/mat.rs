//! Minimal dense square matrix used by the transfer-operator kernels.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Mat<S> {
    n: usize,
    a: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            a: vec![S::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.a[i * self.n + j] = v;
    }

    /// y = A x
    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.n);
        let mut y = vec![S::zero(); self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            let mut acc = S::zero();
            for (aij, xj) in row.iter().zip(x) {
                acc = acc + *aij * *xj;
            }
            *yi = acc;
        }
        y
    }

    /// y = A^T x
    pub fn tr_matvec(&self, x: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.n);
        let mut y = vec![S::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if *xi != S::zero() {
                let row = &self.a[i * self.n..(i + 1) * self.n];
                for (yj, aij) in y.iter_mut().zip(row) {
                    *yj = *yj + *aij * *xi;
                }
            }
        }
        y
    }

    pub fn matmul(&self, rhs: &Mat<S>) -> Mat<S> {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = Mat::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let aik = self.get(i, k);
                if aik != S::zero() {
                    for j in 0..self.n {
                        let v = out.get(i, j) + aik * rhs.get(k, j);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Mat<S> {
        assert!(e >= 1, "matrix power needs a positive exponent");
        let mut out = self.clone();
        for _ in 1..e {
            out = out.matmul(self);
        }
        out
    }

    /// Adjacency lists of the nonzero pattern.
    pub fn pattern(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| self.get(i, j) != S::zero())
                    .collect()
            })
            .collect()
    }

    /// Submatrix on the given index set (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> Mat<S> {
        let mut out = Mat::zeros(idx.len());
        for (i, &oi) in idx.iter().enumerate() {
            for (j, &oj) in idx.iter().enumerate() {
                out.set(i, j, self.get(oi, oj));
            }
        }
        out
    }
}

pub(crate) fn sup_norm<S: Scalar>(x: &[S]) -> S {
    x.iter().fold(S::zero(), |m, v| m.max(v.abs()))
}

pub(crate) fn sup_diff<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |m, (a, b)| m.max((*a - *b).abs()))
}

pub(crate) fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).map(|(a, b)| *a * *b).sum()
}
