//! Riemann curvature in frame components, with the sign convention
//! `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`
//! and `(0,4)` storage `R_{abcd} = g(R(e_a,e_b) e_c, e_d)`.

use std::collections::BTreeMap;

use crate::chart::{FramedChart, StructureCoefficients};
use crate::connection::ConnectionCoefficients;
use crate::error::{EvalError, GeomError};
use crate::expr::Expr;
use crate::poly::Symbol;
use crate::rat::Rat;

/// Dense (0,4) tensor of symbolic entries over frame indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<Expr>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 {
            dim,
            data: vec![Expr::zero(); dim * dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &Expr {
        &self.data[((a * self.dim + b) * self.dim + c) * self.dim + d]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: Expr) {
        self.data[((a * self.dim + b) * self.dim + c) * self.dim + d] = v;
    }

    pub fn add(&self, other: &Tensor4) -> Tensor4 {
        assert_eq!(self.dim, other.dim);
        Tensor4 {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Tensor4) -> Tensor4 {
        assert_eq!(self.dim, other.dim);
        Tensor4 {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> Tensor4 {
        Tensor4 {
            dim: self.dim,
            data: self.data.iter().map(|x| x.mul(f)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    /// First index (a,b,c,d) at which the entry is nonzero, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.dim;
        self.data.iter().position(|x| !x.is_zero()).map(|idx| {
            let d = idx % n;
            let c = (idx / n) % n;
            let b = (idx / (n * n)) % n;
            let a = idx / (n * n * n);
            (a, b, c, d)
        })
    }

    /// Multilinear evaluation on four vectors in frame components.
    pub fn apply(&self, x: &[Expr], y: &[Expr], z: &[Expr], w: &[Expr]) -> Expr {
        let n = self.dim;
        let mut acc = Expr::zero();
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                for c in 0..n {
                    if z[c].is_zero() {
                        continue;
                    }
                    for d in 0..n {
                        if w[d].is_zero() || self.get(a, b, c, d).is_zero() {
                            continue;
                        }
                        acc = acc.add(
                            &x[a]
                                .mul(&y[b])
                                .mul(&z[c])
                                .mul(&w[d])
                                .mul(self.get(a, b, c, d)),
                        );
                    }
                }
            }
        }
        acc
    }

    /// Evaluates every entry at a rational point.
    pub fn eval(&self, point: &BTreeMap<Symbol, Rat>) -> Result<Vec<Rat>, EvalError> {
        self.data.iter().map(|e| e.eval(point)).collect()
    }

    pub fn entries(&self) -> &[Expr] {
        &self.data
    }
}

/// Full curvature tensor of the chart:
/// `R(e_i,e_j)e_k = e_i(G_jk) - e_j(G_ik) + G_jk^m G_im - G_ik^m G_jm - c_ij^m G_mk`,
/// lowered with the orthonormal metric.
pub fn curvature(
    chart: &FramedChart,
    gamma: &ConnectionCoefficients,
    c: &StructureCoefficients,
) -> Result<Tensor4, GeomError> {
    let n = chart.dim();
    let mut r = Tensor4::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = chart
                        .frame_derivative(i, gamma.get(j, k, l))?
                        .sub(&chart.frame_derivative(j, gamma.get(i, k, l))?);
                    for m in 0..n {
                        if !gamma.get(j, k, m).is_zero() && !gamma.get(i, m, l).is_zero() {
                            acc = acc.add(&gamma.get(j, k, m).mul(gamma.get(i, m, l)));
                        }
                        if !gamma.get(i, k, m).is_zero() && !gamma.get(j, m, l).is_zero() {
                            acc = acc.sub(&gamma.get(i, k, m).mul(gamma.get(j, m, l)));
                        }
                        if !c.get(i, j, m).is_zero() && !gamma.get(m, k, l).is_zero() {
                            acc = acc.sub(&c.get(i, j, m).mul(gamma.get(m, k, l)));
                        }
                    }
                    r.set(i, j, k, l, acc.clone());
                    r.set(j, i, k, l, acc.neg());
                }
            }
        }
    }
    Ok(r)
}

/// Sectional curvature of the plane spanned by two distinct frame legs.
pub fn sectional_curvature(r: &Tensor4, a: usize, b: usize) -> Result<Expr, GeomError> {
    if a == b {
        return Err(GeomError::Structure(
            "sectional curvature needs two distinct frame legs".into(),
        ));
    }
    Ok(r.get(a, b, b, a).clone())
}

/// Residuals of the four algebraic curvature symmetries and the first
/// Bianchi identity; every entry must be exactly zero.
pub struct CurvatureChecks {
    pub antisym_ab: Vec<Expr>,
    pub antisym_cd: Vec<Expr>,
    pub pair_symmetry: Vec<Expr>,
    pub bianchi_first: Vec<Expr>,
}

pub fn curvature_residuals(r: &Tensor4) -> CurvatureChecks {
    let n = r.dim();
    let mut antisym_ab = Vec::new();
    let mut antisym_cd = Vec::new();
    let mut pair_symmetry = Vec::new();
    let mut bianchi_first = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    antisym_ab.push(r.get(a, b, c, d).add(r.get(b, a, c, d)));
                    antisym_cd.push(r.get(a, b, c, d).add(r.get(a, b, d, c)));
                    pair_symmetry.push(r.get(a, b, c, d).sub(r.get(c, d, a, b)));
                    bianchi_first.push(
                        r.get(a, b, c, d)
                            .add(r.get(b, c, a, d))
                            .add(r.get(c, a, b, d)),
                    );
                }
            }
        }
    }
    CurvatureChecks {
        antisym_ab,
        antisym_cd,
        pair_symmetry,
        bianchi_first,
    }
}
