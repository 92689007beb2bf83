//! Charts with orthonormal frames. The metric is by convention the one
//! making the frame orthonormal; there is no separate metric object. A chart
//! either carries coordinate vector fields (frame matrix over coordinates) or
//! is seeded directly with constant structure coefficients.

use std::collections::BTreeMap;

use crate::error::GeomError;
use crate::expr::Expr;
use crate::matrix::ExprMat;
use crate::poly::Symbol;
use crate::rat::Rat;

/// Structure coefficients `c_{ij}^k` with `[e_i, e_j] = sum_k c_{ij}^k e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureCoefficients {
    dim: usize,
    c: Vec<Expr>, // [i][j][k]
}

impl StructureCoefficients {
    pub fn zeros(dim: usize) -> Self {
        StructureCoefficients {
            dim,
            c: vec![Expr::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Expr) {
        self.c[(i * self.dim + j) * self.dim + k] = v;
    }

    /// Residuals of `c_{ij}^k + c_{ji}^k`; all must be zero.
    pub fn antisymmetry_residuals(&self) -> Vec<Expr> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push(self.get(i, j, k).add(self.get(j, i, k)));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
enum FrameSource {
    Coordinates {
        coords: Vec<Symbol>,
        frame: ExprMat,
        frame_inv: ExprMat,
    },
    Brackets(StructureCoefficients),
}

#[derive(Clone, Debug)]
pub struct FramedChart {
    dim: usize,
    source: FrameSource,
    /// Expressions declared nonvanishing on the chart domain (e.g. `x3`).
    domain: Vec<Expr>,
}

impl FramedChart {
    /// Coordinate chart: row `i` of `frame` gives `e_i = sum_j E_ij d/dx_j`.
    pub fn from_frame(
        coords: Vec<Symbol>,
        frame: ExprMat,
        domain: Vec<Expr>,
    ) -> Result<Self, GeomError> {
        let dim = coords.len();
        if dim < 3 || dim.is_multiple_of(2) {
            return Err(GeomError::BadDimension(format!(
                "chart dimension must be odd and at least 3, got {dim}"
            )));
        }
        if frame.rows() != dim || frame.cols() != dim {
            return Err(GeomError::BadDimension(format!(
                "frame matrix must be {dim}x{dim}"
            )));
        }
        let frame_inv = frame.inverse().map_err(|_| GeomError::SingularFrame)?;
        Ok(FramedChart {
            dim,
            source: FrameSource::Coordinates {
                coords,
                frame,
                frame_inv,
            },
            domain,
        })
    }

    /// Bracket-seeded chart: constant structure coefficients given directly.
    /// Antisymmetry and the Jacobi identity are verified exactly.
    pub fn from_structure_constants(
        dim: usize,
        c: StructureCoefficients,
    ) -> Result<Self, GeomError> {
        if dim < 3 || dim.is_multiple_of(2) {
            return Err(GeomError::BadDimension(format!(
                "chart dimension must be odd and at least 3, got {dim}"
            )));
        }
        if c.dim() != dim {
            return Err(GeomError::BadDimension(
                "structure coefficient dimension mismatch".into(),
            ));
        }
        let chart = FramedChart {
            dim,
            source: FrameSource::Brackets(c),
            domain: Vec::new(),
        };
        let c = chart.structure_coefficients()?;
        for r in c.antisymmetry_residuals() {
            if !r.is_zero() {
                return Err(GeomError::Structure(format!(
                    "seeded brackets are not antisymmetric: residual {r}"
                )));
            }
        }
        for r in jacobi_residuals(&chart, &c)? {
            if !r.is_zero() {
                return Err(GeomError::Structure(format!(
                    "seeded brackets violate the Jacobi identity: residual {r}"
                )));
            }
        }
        Ok(chart)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain_constraints(&self) -> &[Expr] {
        &self.domain
    }

    pub fn coordinates(&self) -> &[Symbol] {
        match &self.source {
            FrameSource::Coordinates { coords, .. } => coords,
            FrameSource::Brackets(_) => &[],
        }
    }

    pub fn frame_matrix(&self) -> Option<&ExprMat> {
        match &self.source {
            FrameSource::Coordinates { frame, .. } => Some(frame),
            FrameSource::Brackets(_) => None,
        }
    }

    /// Directional derivative `e_i(f)` of a scalar along a frame field.
    pub fn frame_derivative(&self, i: usize, f: &Expr) -> Result<Expr, GeomError> {
        match &self.source {
            FrameSource::Coordinates { coords, frame, .. } => {
                let mut acc = Expr::zero();
                for (j, x) in coords.iter().enumerate() {
                    let df = f.diff(x);
                    if !df.is_zero() {
                        acc = acc.add(&frame.at(i, j).mul(&df));
                    }
                }
                Ok(acc)
            }
            FrameSource::Brackets(_) => {
                if f.variables().is_empty() {
                    Ok(Expr::zero())
                } else {
                    Err(GeomError::NoCoordinates)
                }
            }
        }
    }

    /// Derivative of a scalar along a vector field given in frame components.
    pub fn vector_derivative(&self, u: &[Expr], f: &Expr) -> Result<Expr, GeomError> {
        let mut acc = Expr::zero();
        for (i, ui) in u.iter().enumerate() {
            if !ui.is_zero() {
                acc = acc.add(&ui.mul(&self.frame_derivative(i, f)?));
            }
        }
        Ok(acc)
    }

    /// Structure coefficients of the frame. For a coordinate chart these are
    /// computed by expanding `[e_i, e_j]` in coordinates and re-expressing in
    /// the frame; for a bracket-seeded chart they are the seeded constants.
    pub fn structure_coefficients(&self) -> Result<StructureCoefficients, GeomError> {
        match &self.source {
            FrameSource::Brackets(c) => Ok(c.clone()),
            FrameSource::Coordinates {
                coords,
                frame,
                frame_inv,
            } => {
                let n = self.dim;
                let mut c = StructureCoefficients::zeros(n);
                for i in 0..n {
                    for j in (i + 1)..n {
                        // coordinate components of [e_i, e_j]
                        let mut w = vec![Expr::zero(); n];
                        for (m, wm) in w.iter_mut().enumerate() {
                            let mut acc = Expr::zero();
                            for (l, x_l) in coords.iter().enumerate() {
                                let d_jm = frame.at(j, m).diff(x_l);
                                let d_im = frame.at(i, m).diff(x_l);
                                acc = acc
                                    .add(&frame.at(i, l).mul(&d_jm))
                                    .sub(&frame.at(j, l).mul(&d_im));
                            }
                            *wm = acc;
                        }
                        // frame components: c_k = sum_m w_m (E^-1)_{mk}
                        for k in 0..n {
                            let mut acc = Expr::zero();
                            for (m, wm) in w.iter().enumerate() {
                                acc = acc.add(&wm.mul(frame_inv.at(m, k)));
                            }
                            c.set(i, j, k, acc.clone());
                            c.set(j, i, k, acc.neg());
                        }
                    }
                }
                Ok(c)
            }
        }
    }

    /// Chart sample point: a full rational coordinate assignment.
    pub fn check_point(&self, point: &BTreeMap<Symbol, Rat>) -> Result<(), GeomError> {
        for constraint in &self.domain {
            let v = constraint.eval(point).map_err(GeomError::Eval)?;
            if v == Rat::from_integer(0.into()) {
                return Err(GeomError::Eval(crate::error::EvalError::Domain(format!(
                    "domain constraint {constraint} vanishes at the point"
                ))));
            }
        }
        Ok(())
    }
}

/// Computes all structure coefficients of a chart.
pub fn brackets(chart: &FramedChart) -> Result<StructureCoefficients, GeomError> {
    chart.structure_coefficients()
}

/// Bracket of two vector fields given in frame components:
/// `[U,V]^k = U(v^k) - V(u^k) + sum_{ij} u^i v^j c_{ij}^k`.
pub fn bracket_fields(
    chart: &FramedChart,
    c: &StructureCoefficients,
    u: &[Expr],
    v: &[Expr],
) -> Result<Vec<Expr>, GeomError> {
    let n = chart.dim();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = chart
            .vector_derivative(u, &v[k])?
            .sub(&chart.vector_derivative(v, &u[k])?);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || c.get(i, j, k).is_zero() {
                    continue;
                }
                acc = acc.add(&ui.mul(vj).mul(c.get(i, j, k)));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Jacobi identity residuals, including the derivative terms that appear when
/// the structure coefficients are functions:
/// `sum_cyc ( e_i(c_jk^m) + sum_l c_jk^l c_il^m )`.
pub fn jacobi_residuals(
    chart: &FramedChart,
    c: &StructureCoefficients,
) -> Result<Vec<Expr>, GeomError> {
    let n = chart.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for m in 0..n {
                    let mut acc = Expr::zero();
                    for (a, b, d) in [(i, j, k), (j, k, i), (k, i, j)] {
                        acc = acc.add(&chart.frame_derivative(a, c.get(b, d, m))?);
                        for l in 0..n {
                            acc = acc.add(&c.get(b, d, l).mul(c.get(a, l, m)));
                        }
                    }
                    out.push(acc);
                }
            }
        }
    }
    Ok(out)
}
