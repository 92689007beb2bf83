//! Dense matrices of symbolic scalars, with Gauss-Jordan inversion over the
//! rational-function field.

use crate::error::ExprError;
use crate::expr::Expr;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExprMat {
    n: usize,
    m: usize,
    data: Vec<Expr>,
}

impl ExprMat {
    pub fn zeros(n: usize, m: usize) -> Self {
        ExprMat {
            n,
            m,
            data: vec![Expr::zero(); n * m],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = ExprMat::zeros(n, n);
        for i in 0..n {
            *out.at_mut(i, i) = Expr::one();
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<Self, String> {
        let n = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err("ragged matrix rows".into());
        }
        Ok(ExprMat {
            n,
            m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn at(&self, i: usize, j: usize) -> &Expr {
        &self.data[i * self.m + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Expr {
        &mut self.data[i * self.m + j]
    }

    pub fn mul(&self, other: &ExprMat) -> ExprMat {
        assert_eq!(self.m, other.n);
        let mut out = ExprMat::zeros(self.n, other.m);
        for i in 0..self.n {
            for j in 0..other.m {
                let mut acc = Expr::zero();
                for k in 0..self.m {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> ExprMat {
        let mut out = ExprMat::zeros(self.m, self.n);
        for i in 0..self.n {
            for j in 0..self.m {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn sub(&self, other: &ExprMat) -> ExprMat {
        assert_eq!((self.n, self.m), (other.n, other.m));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.sub(b);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    /// Applies the matrix to a column vector of components.
    pub fn apply(&self, v: &[Expr]) -> Vec<Expr> {
        assert_eq!(self.m, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Expr::zero();
                for j in 0..self.m {
                    acc = acc.add(&self.at(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse over the field of expressions. Fails with
    /// `DivisionByZero` when the matrix is singular as a symbolic matrix.
    pub fn inverse(&self) -> Result<ExprMat, ExprError> {
        assert_eq!(self.n, self.m);
        let n = self.n;
        let mut a = self.clone();
        let mut inv = ExprMat::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or(ExprError::DivisionByZero)?;
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(pivot_row * n + j, col * n + j);
                    inv.data.swap(pivot_row * n + j, col * n + j);
                }
            }
            let pivot = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j).div(&pivot)?;
                *inv.at_mut(col, j) = inv.at(col, j).div(&pivot)?;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let na = a.at(r, j).sub(&factor.mul(a.at(col, j)));
                    *a.at_mut(r, j) = na;
                    let ni = inv.at(r, j).sub(&factor.mul(inv.at(col, j)));
                    *inv.at_mut(r, j) = ni;
                }
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn inverse_of_kt_frame() {
        // Rows are the frame fields of the 3-d example chart.
        let m = ExprMat::from_rows(vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("-2*x2*x3"), e("2*x1/x3^3"), e("-1/x3^2")],
            vec![e("0"), e("1/x3"), e("0")],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExprMat::identity(3));
        assert_eq!(inv.mul(&m), ExprMat::identity(3));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = ExprMat::from_rows(vec![
            vec![e("x1"), e("x1")],
            vec![e("1"), e("1")],
        ])
        .unwrap();
        assert!(m.inverse().is_err());
    }
}
