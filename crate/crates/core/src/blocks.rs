//! The six building-block (0,4) tensors R1..R6 of an almost contact metric
//! structure, and the auxiliary P tensor. Labels follow the convention where
//! R4 is linear in h, R5 is quadratic in h and R6 carries the eta terms of h.

use crate::acm::AcmStructure;
use crate::curvature::Tensor4;
use crate::expr::Expr;

pub struct BlockTensors {
    pub r: [Tensor4; 6],
}

impl BlockTensors {
    pub fn dim(&self) -> usize {
        self.r[0].dim()
    }

    /// `sum_i f_i R_i` for symbolic coefficients.
    pub fn combine(&self, f: &[Expr; 6]) -> Tensor4 {
        let mut acc = Tensor4::zeros(self.dim());
        for (fi, ri) in f.iter().zip(self.r.iter()) {
            if !fi.is_zero() {
                acc = acc.add(&ri.scale(fi));
            }
        }
        acc
    }
}

fn delta(i: usize, j: usize) -> Expr {
    if i == j {
        Expr::one()
    } else {
        Expr::zero()
    }
}

/// Builds R1..R6 in frame components from (g, phi, xi, eta, h).
pub fn build_blocks(s: &AcmStructure) -> BlockTensors {
    let n = s.dim();
    let phi = s.phi();
    let h = s.h();
    let phi_h = phi.mul(h);
    let eta = |i: usize| s.eta(i).clone();

    let mut r1 = Tensor4::zeros(n);
    let mut r2 = Tensor4::zeros(n);
    let mut r3 = Tensor4::zeros(n);
    let mut r4 = Tensor4::zeros(n);
    let mut r5 = Tensor4::zeros(n);
    let mut r6 = Tensor4::zeros(n);

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    // R1(X,Y)Z = g(Y,Z)X - g(X,Z)Y
                    r1.set(
                        a,
                        b,
                        c,
                        d,
                        delta(b, c).mul(&delta(a, d)).sub(&delta(a, c).mul(&delta(b, d))),
                    );
                    // R2(X,Y)Z = g(X,phiZ)phiY - g(Y,phiZ)phiX + 2g(X,phiY)phiZ
                    let v = phi
                        .at(a, c)
                        .mul(phi.at(d, b))
                        .sub(&phi.at(b, c).mul(phi.at(d, a)))
                        .add(&phi.at(a, b).mul(phi.at(d, c)).mul(&Expr::int(2)));
                    r2.set(a, b, c, d, v);
                    // R3(X,Y)Z = eta(X)eta(Z)Y - eta(Y)eta(Z)X
                    //          + g(X,Z)eta(Y)xi - g(Y,Z)eta(X)xi
                    let v = eta(a)
                        .mul(&eta(c))
                        .mul(&delta(b, d))
                        .sub(&eta(b).mul(&eta(c)).mul(&delta(a, d)))
                        .add(&delta(a, c).mul(&eta(b)).mul(&eta(d)))
                        .sub(&delta(b, c).mul(&eta(a)).mul(&eta(d)));
                    r3.set(a, b, c, d, v);
                    // R4(X,Y)Z = g(Y,Z)hX - g(X,Z)hY + g(hY,Z)X - g(hX,Z)Y
                    let v = delta(b, c)
                        .mul(h.at(d, a))
                        .sub(&delta(a, c).mul(h.at(d, b)))
                        .add(&h.at(c, b).mul(&delta(a, d)))
                        .sub(&h.at(c, a).mul(&delta(b, d)));
                    r4.set(a, b, c, d, v);
                    // R5(X,Y)Z = g(hY,Z)hX - g(hX,Z)hY + g(phi hX,Z)phi hY - g(phi hY,Z)phi hX
                    let v = h
                        .at(c, b)
                        .mul(h.at(d, a))
                        .sub(&h.at(c, a).mul(h.at(d, b)))
                        .add(&phi_h.at(c, a).mul(phi_h.at(d, b)))
                        .sub(&phi_h.at(c, b).mul(phi_h.at(d, a)));
                    r5.set(a, b, c, d, v);
                    // R6(X,Y)Z = eta(X)eta(Z)hY - eta(Y)eta(Z)hX
                    //          + g(hX,Z)eta(Y)xi - g(hY,Z)eta(X)xi
                    let v = eta(a)
                        .mul(&eta(c))
                        .mul(h.at(d, b))
                        .sub(&eta(b).mul(&eta(c)).mul(h.at(d, a)))
                        .add(&h.at(c, a).mul(&eta(b)).mul(&eta(d)))
                        .sub(&h.at(c, b).mul(&eta(a)).mul(&eta(d)));
                    r6.set(a, b, c, d, v);
                }
            }
        }
    }
    BlockTensors {
        r: [r1, r2, r3, r4, r5, r6],
    }
}

/// `P(X,Y,Z,W) = g(X,phiZ)g(Y,W) - g(X,phiW)g(Y,Z) - g(Y,phiZ)g(X,W) + g(Y,phiW)g(X,Z)`.
pub fn p_tensor(s: &AcmStructure) -> Tensor4 {
    let n = s.dim();
    let phi = s.phi();
    let mut p = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = phi
                        .at(a, c)
                        .mul(&delta(b, d))
                        .sub(&phi.at(a, d).mul(&delta(b, c)))
                        .sub(&phi.at(b, c).mul(&delta(a, d)))
                        .add(&phi.at(b, d).mul(&delta(a, c)));
                    p.set(a, b, c, d, v);
                }
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acm::AcmStructure;
    use crate::chart::{FramedChart, StructureCoefficients};
    use crate::matrix::ExprMat;
    use crate::parse::parse_expr;
    use crate::poly::Symbol;
    use crate::rat::rat;
    use std::sync::Arc;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn standard_phi() -> ExprMat {
        ExprMat::from_rows(vec![
            vec![e("0"), e("0"), e("0")],
            vec![e("0"), e("0"), e("-1")],
            vec![e("0"), e("1"), e("0")],
        ])
        .unwrap()
    }

    fn kt_structure_fixture() -> AcmStructure {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let frame = ExprMat::from_rows(vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("-2*x2*x3"), e("2*x1/x3^3"), e("-1/x3^2")],
            vec![e("0"), e("1/x3"), e("0")],
        ])
        .unwrap();
        let chart =
            Arc::new(FramedChart::from_frame(coords, frame, vec![e("x3")]).unwrap());
        AcmStructure::new(chart, standard_phi(), vec![e("1"), e("0"), e("0")]).unwrap()
    }

    fn sasakian_structure() -> AcmStructure {
        let mut c = StructureCoefficients::zeros(3);
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            c.set(i, j, k, Expr::int(2));
            c.set(j, i, k, Expr::int(-2));
        }
        let chart = Arc::new(FramedChart::from_structure_constants(3, c).unwrap());
        AcmStructure::new(chart, standard_phi(), vec![e("1"), e("0"), e("0")]).unwrap()
    }

    #[test]
    fn r1_on_orthonormal_legs() {
        let b = build_blocks(&kt_structure_fixture());
        for a in 0..3 {
            for c in 0..3 {
                if a != c {
                    assert!(b.r[0].get(a, c, c, a).is_one());
                }
            }
        }
    }

    #[test]
    fn blocks_antisymmetric_in_first_pair() {
        let b = build_blocks(&kt_structure_fixture());
        for t in &b.r {
            for x in 0..3 {
                for y in 0..3 {
                    for z in 0..3 {
                        for w in 0..3 {
                            assert!(t.get(x, y, z, w).add(t.get(y, x, z, w)).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn h_zero_kills_r4_r5_r6() {
        let b = build_blocks(&sasakian_structure());
        assert!(b.r[3].is_zero());
        assert!(b.r[4].is_zero());
        assert!(b.r[5].is_zero());
        assert!(!b.r[0].is_zero());
        assert!(!b.r[1].is_zero());
        assert!(!b.r[2].is_zero());
    }

    #[test]
    fn three_dimensional_contact_kernel_identities() {
        // -R1 + (1/3) R2 - R3 = 0, R4 + R6 = 0, R5 = 0 on 3-d contact
        // metric structures.
        for s in [kt_structure_fixture(), sasakian_structure()] {
            let b = build_blocks(&s);
            let combo = b.r[0]
                .scale(&Expr::int(-1))
                .add(&b.r[1].scale(&Expr::rational(rat(1, 3))))
                .sub(&b.r[2]);
            assert!(combo.is_zero());
            assert!(b.r[3].add(&b.r[5]).is_zero());
            assert!(b.r[4].is_zero());
        }
    }
}
