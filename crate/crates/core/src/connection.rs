//! Levi-Civita connection of an orthonormal frame via the Koszul formula.

use crate::chart::{FramedChart, StructureCoefficients};
use crate::error::GeomError;
use crate::expr::Expr;
use crate::rat::rat;

/// Connection coefficients `Gamma_{ij}^k` with `nabla_{e_i} e_j = sum_k Gamma_{ij}^k e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionCoefficients {
    dim: usize,
    gamma: Vec<Expr>, // [i][j][k]
}

impl ConnectionCoefficients {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// Metric compatibility in an orthonormal frame: `Gamma_{ij}^k + Gamma_{ik}^j = 0`.
    pub fn metric_residuals(&self) -> Vec<Expr> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push(self.get(i, j, k).add(self.get(i, k, j)));
                }
            }
        }
        out
    }

    /// Torsion-freeness: `Gamma_{ij}^k - Gamma_{ji}^k = c_{ij}^k`.
    pub fn torsion_residuals(&self, c: &StructureCoefficients) -> Vec<Expr> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push(
                        self.get(i, j, k)
                            .sub(self.get(j, i, k))
                            .sub(c.get(i, j, k)),
                    );
                }
            }
        }
        out
    }
}

/// Koszul formula specialized to an orthonormal frame:
/// `Gamma_{ij}^k = (c_{ij}^k - c_{jk}^i + c_{ki}^j) / 2`.
pub fn koszul_connection(c: &StructureCoefficients) -> ConnectionCoefficients {
    let n = c.dim();
    let half = Expr::rational(rat(1, 2));
    let mut gamma = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let g = c
                    .get(i, j, k)
                    .sub(c.get(j, k, i))
                    .add(c.get(k, i, j))
                    .mul(&half);
                gamma.push(g);
            }
        }
    }
    ConnectionCoefficients { dim: n, gamma }
}

/// Covariant derivative of a vector field (frame components) along `e_i`:
/// `(nabla_{e_i} V)^k = e_i(V^k) + sum_j V^j Gamma_{ij}^k`.
pub fn covariant_derivative(
    chart: &FramedChart,
    gamma: &ConnectionCoefficients,
    i: usize,
    v: &[Expr],
) -> Result<Vec<Expr>, GeomError> {
    let n = chart.dim();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = chart.frame_derivative(i, &v[k])?;
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !gamma.get(i, j, k).is_zero() {
                acc = acc.add(&vj.mul(gamma.get(i, j, k)));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::brackets;
    use crate::matrix::ExprMat;
    use crate::parse::parse_expr;
    use crate::poly::Symbol;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn kt_chart() -> FramedChart {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let frame = ExprMat::from_rows(vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("-2*x2*x3"), e("2*x1/x3^3"), e("-1/x3^2")],
            vec![e("0"), e("1/x3"), e("0")],
        ])
        .unwrap();
        FramedChart::from_frame(coords, frame, vec![e("x3")]).unwrap()
    }

    #[test]
    fn kt_connection_table() {
        let chart = kt_chart();
        let c = brackets(&chart).unwrap();
        let g = koszul_connection(&c);
        // nabla_{e1} e2 = (-1 + 1/x3^2) e3
        assert_eq!(g.get(0, 1, 2), &e("-1 + 1/x3^2"));
        // nabla_{e1} e3 = (1 - 1/x3^2) e2
        assert_eq!(g.get(0, 2, 1), &e("1 - 1/x3^2"));
        // nabla_{e2} e3 = (1 + 1/x3^2) e1
        assert_eq!(g.get(1, 2, 0), &e("1 + 1/x3^2"));
        // nabla_{e2} e1 = -(1 + 1/x3^2) e3
        assert_eq!(g.get(1, 0, 2), &e("-(1 + 1/x3^2)"));
        // nabla_{e3} e1 = (1 - 1/x3^2) e2
        assert_eq!(g.get(2, 0, 1), &e("1 - 1/x3^2"));
        // nabla_{e3} e2 = (-1 + 1/x3^2) e1 - (1/x3^3) e3
        assert_eq!(g.get(2, 1, 0), &e("-1 + 1/x3^2"));
        assert_eq!(g.get(2, 1, 2), &e("-1/x3^3"));
        // nabla_{e2} e2 = 0
        for k in 0..3 {
            assert!(g.get(1, 1, k).is_zero());
        }
        // nabla_{e3} e3 = (1/x3^3) e2
        assert_eq!(g.get(2, 2, 1), &e("1/x3^3"));
        assert!(g.get(2, 2, 0).is_zero());
        assert!(g.get(2, 2, 2).is_zero());

        for r in g.metric_residuals() {
            assert!(r.is_zero());
        }
        for r in g.torsion_residuals(&c) {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn abelian_frame_is_flat() {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let chart =
            FramedChart::from_frame(coords, ExprMat::identity(3), vec![]).unwrap();
        let c = brackets(&chart).unwrap();
        let g = koszul_connection(&c);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(g.get(i, j, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn epsilon_brackets_give_epsilon_connection() {
        use crate::chart::StructureCoefficients;
        let mut c = StructureCoefficients::zeros(3);
        let eps = [(0usize, 1usize, 2usize, 1i64), (1, 2, 0, 1), (2, 0, 1, 1)];
        for (i, j, k, s) in eps {
            c.set(i, j, k, Expr::int(2 * s));
            c.set(j, i, k, Expr::int(-2 * s));
        }
        let chart = FramedChart::from_structure_constants(3, c).unwrap();
        let c = brackets(&chart).unwrap();
        let g = koszul_connection(&c);
        for (i, j, k, s) in eps {
            assert_eq!(g.get(i, j, k), &Expr::int(s));
            assert_eq!(g.get(j, i, k), &Expr::int(-s));
        }
        for r in g.metric_residuals() {
            assert!(r.is_zero());
        }
    }
}
