//! Almost contact metric structures (phi, xi, eta, g) on a framed chart,
//! the derived tensor h, and the structure-class predicates.

use std::sync::Arc;

use crate::chart::{bracket_fields, brackets, FramedChart, StructureCoefficients};
use crate::connection::{covariant_derivative, koszul_connection, ConnectionCoefficients};
use crate::error::GeomError;
use crate::expr::Expr;
use crate::matrix::ExprMat;

/// Convention used for the exterior derivative of a 1-form on vector fields.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DetaConvention {
    /// `d eta(X,Y) = (X(eta Y) - Y(eta X) - eta([X,Y])) / 2`
    Half,
    /// `d eta(X,Y) = X(eta Y) - Y(eta X) - eta([X,Y])`
    Plain,
}

impl DetaConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            DetaConvention::Half => "half",
            DetaConvention::Plain => "plain",
        }
    }
}

/// Structure tensors in frame components. `phi` acts by columns:
/// `phi(e_j) = sum_k phi_{kj} e_k`. `eta` is always derived from `xi`
/// through the orthonormal metric, so `eta(e_i) = xi^i`.
#[derive(Clone, Debug)]
pub struct AcmStructure {
    chart: Arc<FramedChart>,
    phi: ExprMat,
    xi: Vec<Expr>,
    c: StructureCoefficients,
    gamma: ConnectionCoefficients,
    h: ExprMat,
}

impl AcmStructure {
    pub fn new(
        chart: Arc<FramedChart>,
        phi: ExprMat,
        xi: Vec<Expr>,
    ) -> Result<Self, GeomError> {
        let n = chart.dim();
        if phi.rows() != n || phi.cols() != n || xi.len() != n {
            return Err(GeomError::BadDimension(
                "structure tensor shape does not match the chart dimension".into(),
            ));
        }
        let c = brackets(&chart)?;
        let gamma = koszul_connection(&c);
        let mut s = AcmStructure {
            chart,
            phi,
            xi,
            c,
            gamma,
            h: ExprMat::zeros(n, n),
        };
        s.validate_almost_contact()?;
        s.h = s.lie_derivative_h()?;
        Ok(s)
    }

    pub fn chart(&self) -> &Arc<FramedChart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn phi(&self) -> &ExprMat {
        &self.phi
    }

    pub fn xi(&self) -> &[Expr] {
        &self.xi
    }

    /// `eta(e_i)`, equal to the xi components in an orthonormal frame.
    pub fn eta(&self, i: usize) -> &Expr {
        &self.xi[i]
    }

    pub fn h(&self) -> &ExprMat {
        &self.h
    }

    pub fn structure_coefficients(&self) -> &StructureCoefficients {
        &self.c
    }

    pub fn connection(&self) -> &ConnectionCoefficients {
        &self.gamma
    }

    pub fn phi_apply(&self, v: &[Expr]) -> Vec<Expr> {
        self.phi.apply(v)
    }

    pub fn h_apply(&self, v: &[Expr]) -> Vec<Expr> {
        self.h.apply(v)
    }

    fn validate_almost_contact(&self) -> Result<(), GeomError> {
        let n = self.dim();
        // eta(xi) = 1
        let mut eta_xi = Expr::zero();
        for i in 0..n {
            eta_xi = eta_xi.add(&self.xi[i].mul(&self.xi[i]));
        }
        if !eta_xi.sub(&Expr::one()).is_zero() {
            return Err(GeomError::Structure(format!(
                "eta(xi) = {eta_xi}, expected 1 (xi must be a unit field)"
            )));
        }
        // phi xi = 0
        for (k, comp) in self.phi.apply(&self.xi).iter().enumerate() {
            if !comp.is_zero() {
                return Err(GeomError::Structure(format!(
                    "phi(xi) has nonzero component {comp} on leg {k}"
                )));
            }
        }
        // eta o phi = 0: sum_k xi^k phi_{kj} = 0 for all j
        for j in 0..n {
            let mut acc = Expr::zero();
            for k in 0..n {
                acc = acc.add(&self.xi[k].mul(self.phi.at(k, j)));
            }
            if !acc.is_zero() {
                return Err(GeomError::Structure(format!(
                    "eta(phi e_{j}) = {acc}, expected 0"
                )));
            }
        }
        // phi^2 = -I + xi (x) eta
        let phi2 = self.phi.mul(&self.phi);
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    self.xi[i].mul(&self.xi[j]).sub(&Expr::one())
                } else {
                    self.xi[i].mul(&self.xi[j])
                };
                if !phi2.at(i, j).sub(&expect).is_zero() {
                    return Err(GeomError::Structure(format!(
                        "phi^2 != -I + xi (x) eta at entry ({i},{j})"
                    )));
                }
            }
        }
        // compatibility: phi^T phi = I - xi xi^T
        let ptp = self.phi.transpose().mul(&self.phi);
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    Expr::one().sub(&self.xi[i].mul(&self.xi[j]))
                } else {
                    self.xi[i].mul(&self.xi[j]).neg()
                };
                if !ptp.at(i, j).sub(&expect).is_zero() {
                    return Err(GeomError::Structure(format!(
                        "g(phi X, phi Y) != g(X,Y) - eta(X)eta(Y) at entry ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `2hX = [xi, phi X] - phi [xi, X]` evaluated on frame legs.
    fn lie_derivative_h(&self) -> Result<ExprMat, GeomError> {
        let n = self.dim();
        let half = Expr::rational(crate::rat::rat(1, 2));
        let mut h = ExprMat::zeros(n, n);
        for j in 0..n {
            let e_j: Vec<Expr> = (0..n)
                .map(|k| if k == j { Expr::one() } else { Expr::zero() })
                .collect();
            let phi_ej: Vec<Expr> = (0..n).map(|k| self.phi.at(k, j).clone()).collect();
            let term1 = bracket_fields(&self.chart, &self.c, &self.xi, &phi_ej)?;
            let term2 = self.phi.apply(&bracket_fields(
                &self.chart,
                &self.c,
                &self.xi,
                &e_j,
            )?);
            for k in 0..n {
                h.at_mut(k, j).clone_from(&term1[k].sub(&term2[k]).mul(&half));
            }
        }
        Ok(h)
    }

    /// `nabla_{e_i} xi` in frame components.
    pub fn nabla_xi(&self, i: usize) -> Result<Vec<Expr>, GeomError> {
        covariant_derivative(&self.chart, &self.gamma, i, &self.xi)
    }

    /// `(nabla_{e_i} phi) e_j` in frame components.
    pub fn nabla_phi(&self, i: usize, j: usize) -> Result<Vec<Expr>, GeomError> {
        let n = self.dim();
        let phi_ej: Vec<Expr> = (0..n).map(|k| self.phi.at(k, j).clone()).collect();
        let d_phi_ej = covariant_derivative(&self.chart, &self.gamma, i, &phi_ej)?;
        // phi(nabla_{e_i} e_j) with nabla_{e_i} e_j = Gamma_{ij}^k e_k
        let nabla_ej: Vec<Expr> = (0..n).map(|k| self.gamma.get(i, j, k).clone()).collect();
        let phi_nabla = self.phi.apply(&nabla_ej);
        Ok((0..n).map(|k| d_phi_ej[k].sub(&phi_nabla[k])).collect())
    }
}

/// Result of the contact metric test: residuals of `d eta - Phi` on all frame
/// pairs under the convention that makes the structure contact metric, if any.
#[derive(Clone, Debug)]
pub struct ContactCheck {
    pub is_contact_metric: bool,
    /// Convention under which the check passed (tried `Half` first).
    pub convention: Option<DetaConvention>,
    /// Residuals under the `Half` convention, row-major over (i,j).
    pub residuals_half: Vec<Expr>,
}

/// Checks `d eta(e_i,e_j) = g(e_i, phi e_j)` for all frame pairs, detecting
/// which exterior-derivative convention makes the structure contact metric.
pub fn is_contact_metric(s: &AcmStructure) -> Result<ContactCheck, GeomError> {
    let residuals_half = deta_residuals(s, DetaConvention::Half)?;
    if residuals_half.iter().all(Expr::is_zero) {
        return Ok(ContactCheck {
            is_contact_metric: true,
            convention: Some(DetaConvention::Half),
            residuals_half,
        });
    }
    let residuals_plain = deta_residuals(s, DetaConvention::Plain)?;
    if residuals_plain.iter().all(Expr::is_zero) {
        return Ok(ContactCheck {
            is_contact_metric: true,
            convention: Some(DetaConvention::Plain),
            residuals_half,
        });
    }
    Ok(ContactCheck {
        is_contact_metric: false,
        convention: None,
        residuals_half,
    })
}

fn deta_residuals(
    s: &AcmStructure,
    convention: DetaConvention,
) -> Result<Vec<Expr>, GeomError> {
    let n = s.dim();
    let chart = s.chart();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // d eta(e_i, e_j) with eta(e_k) = xi^k
            let mut deta = chart
                .frame_derivative(i, s.eta(j))?
                .sub(&chart.frame_derivative(j, s.eta(i))?);
            for k in 0..n {
                if !s.structure_coefficients().get(i, j, k).is_zero() {
                    deta = deta.sub(&s.structure_coefficients().get(i, j, k).mul(s.eta(k)));
                }
            }
            if convention == DetaConvention::Half {
                deta = deta.mul(&Expr::rational(crate::rat::rat(1, 2)));
            }
            // Phi(e_i, e_j) = g(e_i, phi e_j) = phi_{ij}
            out.push(deta.sub(s.phi().at(i, j)));
        }
    }
    Ok(out)
}

/// `nabla_X xi = -phi X` on all frame legs.
pub fn is_k_contact(s: &AcmStructure) -> Result<(bool, Vec<Expr>), GeomError> {
    let n = s.dim();
    let mut residuals = Vec::new();
    for i in 0..n {
        let nxi = s.nabla_xi(i)?;
        for k in 0..n {
            residuals.push(nxi[k].add(s.phi().at(k, i)));
        }
    }
    Ok((residuals.iter().all(Expr::is_zero), residuals))
}

/// `(nabla_X phi) Y = g(X,Y) xi - eta(Y) X` on all frame legs. Sasakian
/// implies K-contact; the cross-check is the caller's to assert.
pub fn is_sasakian(s: &AcmStructure) -> Result<(bool, Vec<Expr>), GeomError> {
    let n = s.dim();
    let mut residuals = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let np = s.nabla_phi(i, j)?;
            for k in 0..n {
                let mut expect = Expr::zero();
                if i == j {
                    expect = expect.add(&s.xi()[k]);
                }
                if k == i {
                    expect = expect.sub(s.eta(j));
                }
                residuals.push(np[k].sub(&expect));
            }
        }
    }
    Ok((residuals.iter().all(Expr::is_zero), residuals))
}

/// Outcome of the trans-Sasakian test together with the implied identities.
#[derive(Clone, Debug)]
pub struct TransSasakianCheck {
    pub holds: bool,
    /// When the defining equation holds, these implied identities are also
    /// verified; a violation is an internal-consistency failure.
    pub nabla_xi_phi_zero: Option<bool>,
    pub nabla_xi_xi_zero: Option<bool>,
    pub h_zero: Option<bool>,
}

/// `(nabla_X phi)Y = alpha (g(X,Y) xi - eta(Y) X) + beta (g(phi X, Y) xi - eta(Y) phi X)`.
pub fn is_trans_sasakian(
    s: &AcmStructure,
    alpha: &Expr,
    beta: &Expr,
) -> Result<TransSasakianCheck, GeomError> {
    let n = s.dim();
    let mut holds = true;
    for i in 0..n {
        for j in 0..n {
            let np = s.nabla_phi(i, j)?;
            for k in 0..n {
                let mut expect = Expr::zero();
                if i == j {
                    expect = expect.add(&alpha.mul(&s.xi()[k]));
                }
                if k == i {
                    expect = expect.sub(&alpha.mul(s.eta(j)));
                }
                // g(phi e_i, e_j) = phi_{ji}
                expect = expect.add(&beta.mul(s.phi().at(j, i)).mul(&s.xi()[k]));
                expect = expect.sub(&beta.mul(s.eta(j)).mul(s.phi().at(k, i)));
                if !np[k].sub(&expect).is_zero() {
                    holds = false;
                }
            }
        }
    }
    if !holds {
        return Ok(TransSasakianCheck {
            holds,
            nabla_xi_phi_zero: None,
            nabla_xi_xi_zero: None,
            h_zero: None,
        });
    }
    // nabla_xi phi = 0 (contract direction with xi components)
    let mut nabla_xi_phi_zero = true;
    for j in 0..n {
        for k in 0..n {
            let mut acc = Expr::zero();
            for i in 0..n {
                if !s.xi()[i].is_zero() {
                    acc = acc.add(&s.xi()[i].mul(&s.nabla_phi(i, j)?[k]));
                }
            }
            if !acc.is_zero() {
                nabla_xi_phi_zero = false;
            }
        }
    }
    // nabla_xi xi = 0
    let mut nabla_xi_xi_zero = true;
    for k in 0..n {
        let mut acc = Expr::zero();
        for i in 0..n {
            if !s.xi()[i].is_zero() {
                acc = acc.add(&s.xi()[i].mul(&s.nabla_xi(i)?[k]));
            }
        }
        if !acc.is_zero() {
            nabla_xi_xi_zero = false;
        }
    }
    let h_zero = s.h().is_zero();
    Ok(TransSasakianCheck {
        holds,
        nabla_xi_phi_zero: Some(nabla_xi_phi_zero),
        nabla_xi_xi_zero: Some(nabla_xi_xi_zero),
        h_zero: Some(h_zero),
    })
}

/// Residuals of the contact metric h-relations:
/// `h xi = 0`, `nabla_X xi = -phi X - phi h X`, `h phi = -phi h`,
/// `tr h = 0`, `eta o h = 0`.
pub struct HRelations {
    pub h_xi: Vec<Expr>,
    pub nabla_xi: Vec<Expr>,
    pub h_phi_anticommute: Vec<Expr>,
    pub trace_h: Expr,
    pub eta_h: Vec<Expr>,
}

impl HRelations {
    pub fn all_zero(&self) -> bool {
        self.h_xi.iter().all(Expr::is_zero)
            && self.nabla_xi.iter().all(Expr::is_zero)
            && self.h_phi_anticommute.iter().all(Expr::is_zero)
            && self.trace_h.is_zero()
            && self.eta_h.iter().all(Expr::is_zero)
    }
}

pub fn h_relations(s: &AcmStructure) -> Result<HRelations, GeomError> {
    let n = s.dim();
    let h_xi = s.h_apply(s.xi());
    let mut nabla_xi = Vec::new();
    for i in 0..n {
        let e_i: Vec<Expr> = (0..n)
            .map(|k| if k == i { Expr::one() } else { Expr::zero() })
            .collect();
        let hx = s.h_apply(&e_i);
        let phi_hx = s.phi_apply(&hx);
        let nxi = s.nabla_xi(i)?;
        for k in 0..n {
            // nabla_{e_i} xi + phi e_i + phi h e_i = 0
            nabla_xi.push(nxi[k].add(s.phi().at(k, i)).add(&phi_hx[k]));
        }
    }
    let hp = s.h().mul(s.phi());
    let ph = s.phi().mul(s.h());
    let mut h_phi_anticommute = Vec::new();
    for i in 0..n {
        for j in 0..n {
            h_phi_anticommute.push(hp.at(i, j).add(ph.at(i, j)));
        }
    }
    let mut trace_h = Expr::zero();
    for i in 0..n {
        trace_h = trace_h.add(s.h().at(i, i));
    }
    let mut eta_h = Vec::new();
    for j in 0..n {
        let mut acc = Expr::zero();
        for k in 0..n {
            acc = acc.add(&s.xi()[k].mul(s.h().at(k, j)));
        }
        eta_h.push(acc);
    }
    Ok(HRelations {
        h_xi,
        nabla_xi,
        h_phi_anticommute,
        trace_h,
        eta_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExprMat;
    use crate::parse::parse_expr;
    use crate::poly::Symbol;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    /// phi e1 = 0, phi e2 = e3, phi e3 = -e2 in column convention.
    fn standard_phi() -> ExprMat {
        ExprMat::from_rows(vec![
            vec![e("0"), e("0"), e("0")],
            vec![e("0"), e("0"), e("-1")],
            vec![e("0"), e("1"), e("0")],
        ])
        .unwrap()
    }

    fn xi_e1() -> Vec<Expr> {
        vec![e("1"), e("0"), e("0")]
    }

    pub fn kt_structure_fixture() -> AcmStructure {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let frame = ExprMat::from_rows(vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("-2*x2*x3"), e("2*x1/x3^3"), e("-1/x3^2")],
            vec![e("0"), e("1/x3"), e("0")],
        ])
        .unwrap();
        let chart =
            Arc::new(FramedChart::from_frame(coords, frame, vec![e("x3")]).unwrap());
        AcmStructure::new(chart, standard_phi(), xi_e1()).unwrap()
    }

    fn round_sphere_structure() -> AcmStructure {
        let mut c = StructureCoefficients::zeros(3);
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            c.set(i, j, k, Expr::int(2));
            c.set(j, i, k, Expr::int(-2));
        }
        let chart = Arc::new(FramedChart::from_structure_constants(3, c).unwrap());
        AcmStructure::new(chart, standard_phi(), xi_e1()).unwrap()
    }

    fn flat_structure() -> AcmStructure {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let chart = Arc::new(
            FramedChart::from_frame(coords, ExprMat::identity(3), vec![]).unwrap(),
        );
        AcmStructure::new(chart, standard_phi(), xi_e1()).unwrap()
    }

    #[test]
    fn kt_h_operator() {
        let s = kt_structure_fixture();
        // h e1 = 0, h e2 = (1/x3^2) e2, h e3 = -(1/x3^2) e3
        for k in 0..3 {
            assert!(s.h().at(k, 0).is_zero());
        }
        assert_eq!(s.h().at(1, 1), &e("1/x3^2"));
        assert_eq!(s.h().at(2, 2), &e("-1/x3^2"));
        assert!(s.h().at(2, 1).is_zero());
        assert!(s.h().at(1, 2).is_zero());
        let rel = h_relations(&s).unwrap();
        assert!(rel.all_zero());
    }

    #[test]
    fn kt_structure_is_contact_metric_not_k_contact() {
        let s = kt_structure_fixture();
        let check = is_contact_metric(&s).unwrap();
        assert!(check.is_contact_metric);
        assert_eq!(check.convention, Some(DetaConvention::Half));
        let (kc, _) = is_k_contact(&s).unwrap();
        assert!(!kc);
        let (sas, _) = is_sasakian(&s).unwrap();
        assert!(!sas);
        let ts = is_trans_sasakian(&s, &Expr::one(), &Expr::zero()).unwrap();
        assert!(!ts.holds);
    }

    #[test]
    fn round_sphere_is_sasakian() {
        let s = round_sphere_structure();
        assert!(s.h().is_zero());
        let check = is_contact_metric(&s).unwrap();
        assert!(check.is_contact_metric);
        let (kc, _) = is_k_contact(&s).unwrap();
        assert!(kc);
        let (sas, _) = is_sasakian(&s).unwrap();
        assert!(sas);
        let ts = is_trans_sasakian(&s, &Expr::one(), &Expr::zero()).unwrap();
        assert!(ts.holds);
        assert_eq!(ts.h_zero, Some(true));
        assert_eq!(ts.nabla_xi_phi_zero, Some(true));
        assert_eq!(ts.nabla_xi_xi_zero, Some(true));
    }

    #[test]
    fn flat_chart_is_not_contact_but_is_cosymplectic_like() {
        let s = flat_structure();
        let check = is_contact_metric(&s).unwrap();
        assert!(!check.is_contact_metric);
        assert!(s.h().is_zero());
        // alpha = beta = 0: parallel phi
        let ts = is_trans_sasakian(&s, &Expr::zero(), &Expr::zero()).unwrap();
        assert!(ts.holds);
        assert_eq!(ts.h_zero, Some(true));
    }

    #[test]
    fn invalid_structures_rejected() {
        let coords = vec![Symbol::new("x1"), Symbol::new("x2"), Symbol::new("x3")];
        let chart = Arc::new(
            FramedChart::from_frame(coords, ExprMat::identity(3), vec![]).unwrap(),
        );
        // xi not unit
        let bad_xi = vec![e("2"), e("0"), e("0")];
        assert!(AcmStructure::new(chart.clone(), standard_phi(), bad_xi).is_err());
        // phi with wrong square
        let bad_phi = ExprMat::from_rows(vec![
            vec![e("0"), e("0"), e("0")],
            vec![e("0"), e("0"), e("1")],
            vec![e("0"), e("1"), e("0")],
        ])
        .unwrap();
        assert!(AcmStructure::new(chart, bad_phi, xi_e1()).is_err());
    }
}
