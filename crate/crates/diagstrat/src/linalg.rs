//! Exact dense linear algebra over the ground field: Gaussian elimination,
//! rank, kernels and small solvers. Desk-scale dimensions only.

use crate::field::FieldElement;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, char_p: u64) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::zero_of(char_p); rows * cols],
        }
    }

    pub fn identity(n: usize, char_p: u64) -> Self {
        let mut m = Matrix::zero(n, n, char_p);
        for i in 0..n {
            *m.at_mut(i, i) = FieldElement::one_of(char_p);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>, cols: usize, char_p: u64) -> Self {
        let mut m = Matrix::zero(rows.len(), cols, char_p);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, x) in r.into_iter().enumerate() {
                *m.at_mut(i, j) = x;
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Matrix {
        let cp = self.char_p();
        let mut t = Matrix::zero(self.cols, self.rows, cp);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let cp = self.char_p();
        let mut out = Matrix::zero(self.rows, other.cols, cp);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = out.data[i].clone() - other.data[i].clone();
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = x.clone() * c.clone();
        }
        out
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, self.char_p());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols);
        let mut t = FieldElement::zero_of(self.char_p());
        for i in 0..self.rows {
            t = t + self.at(i, i).clone();
        }
        t
    }

    fn char_p(&self) -> u64 {
        self.data.first().map(|x| x.characteristic()).unwrap_or(0)
    }

    /// Row-reduce in place; returns pivot column indices.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = self.at(r, c).inv().unwrap();
            for j in c..self.cols {
                let x = self.at(r, j).clone();
                *self.at_mut(r, j) = x * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let x = self.at(i, j).clone() - f.clone() * self.at(r, j).clone();
                    *self.at_mut(i, j) = x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel {x : Mx = 0}, as rows.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let cp = self.char_p();
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![FieldElement::zero_of(cp); self.cols];
            v[free] = FieldElement::one_of(cp);
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -(m.at(ri, free).clone());
            }
            basis.push(v);
        }
        basis
    }

    /// Solve Mx = b exactly; None when inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows);
        let cp = self.char_p().max(b.first().map(|x| x.characteristic()).unwrap_or(0));
        let mut aug = Matrix::zero(self.rows, self.cols + 1, cp);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElement::zero_of(cp); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(ri, self.cols).clone();
        }
        Some(x)
    }

    /// dim ker (M - λ)^rows, the generalized eigenspace dimension.
    pub fn generalized_eigenspace_dim(&self, lambda: &FieldElement) -> usize {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 0;
        }
        let shifted = self.sub(&Matrix::identity(n, self.char_p()).scale(lambda));
        let p = shifted.pow(n);
        n - p.rank()
    }
}

/// Rank of a set of vectors given as rows.
pub fn rank_of_rows(rows: &[Vec<FieldElement>], cols: usize, char_p: u64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows.to_vec(), cols, char_p).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_integer(0, n)
    }

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(
            vec![
                vec![q(1), q(2), q(3)],
                vec![q(2), q(4), q(6)],
                vec![q(1), q(0), q(1)],
            ],
            3,
            0,
        );
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for row in 0..3 {
            let mut s = q(0);
            for j in 0..3 {
                s = s + m.at(row, j).clone() * k[0][j].clone();
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(0), q(3)]], 2, 0);
        let x = m.solve(&[q(4), q(9)]).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        let sing = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(1)]], 2, 0);
        assert!(sing.solve(&[q(0), q(1)]).is_none());
    }

    #[test]
    fn generalized_eigenspace() {
        // Jordan block J_2(5) ⊕ [7]
        let m = Matrix::from_rows(
            vec![
                vec![q(5), q(1), q(0)],
                vec![q(0), q(5), q(0)],
                vec![q(0), q(0), q(7)],
            ],
            3,
            0,
        );
        assert_eq!(m.generalized_eigenspace_dim(&q(5)), 2);
        assert_eq!(m.generalized_eigenspace_dim(&q(7)), 1);
        assert_eq!(m.generalized_eigenspace_dim(&q(3)), 0);
    }
}
