//! D_a-homothetic deformations, the (kappa, mu) parameter algebra, the
//! dimension >= 5 rigidity system, the sectional-curvature construction
//! quadratic, and the 3-dimensional Lie-group classification labels.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::acm::AcmStructure;
use crate::chart::{FramedChart, StructureCoefficients};
use crate::error::GeomError;
use crate::expr::Expr;
use crate::matrix::ExprMat;
use crate::quadext::{QuadError, QuadExt};
use crate::rat::{rat, rat_int, rat_sqrt_exact, rat_to_string, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DeformError {
    NonPositiveScale(String),
    MuEqualsTwo,
    KappaNotBelowOne(String),
    F6OutOfRange(String),
    Quad(QuadError),
    Inconsistent(String),
}

impl fmt::Display for DeformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformError::NonPositiveScale(a) => {
                write!(f, "deformation parameter must be positive, got {a}")
            }
            DeformError::MuEqualsTwo => write!(f, "mu = 2 leaves no valid scale"),
            DeformError::KappaNotBelowOne(k) => {
                write!(f, "kappa must be below 1, got {k}")
            }
            DeformError::F6OutOfRange(v) => write!(
                f,
                "f6 must be greater than -1 (else kappa = -f6 >= 1), got {v}"
            ),
            DeformError::Quad(e) => write!(f, "{e}"),
            DeformError::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl std::error::Error for DeformError {}

impl From<QuadError> for DeformError {
    fn from(e: QuadError) -> Self {
        DeformError::Quad(e)
    }
}

/// Closed-form transformation of the parameters under a D_a deformation:
/// `kappa' = (kappa + a^2 - 1)/a^2`, `mu' = (mu + 2a - 2)/a`.
pub fn deform_km(kappa: &Rat, mu: &Rat, a: &Rat) -> Result<(Rat, Rat), DeformError> {
    if !a.is_positive() {
        return Err(DeformError::NonPositiveScale(rat_to_string(a)));
    }
    let a2 = a.clone() * a;
    let kappa_bar = (kappa.clone() + &a2 - Rat::one()) / &a2;
    let mu_bar = (mu.clone() + a.clone() * rat_int(2) - rat_int(2)) / a;
    Ok((kappa_bar, mu_bar))
}

/// Same transformation over a quadratic extension, for surd-valued inputs.
pub fn deform_km_quad(
    kappa: &QuadExt,
    mu: &QuadExt,
    a: &QuadExt,
) -> Result<(QuadExt, QuadExt), DeformError> {
    if a.sign() <= 0 {
        return Err(DeformError::NonPositiveScale(a.to_string()));
    }
    let one = QuadExt::from_int(1);
    let two = QuadExt::from_int(2);
    let a2 = a.mul(a)?;
    let kappa_bar = kappa.add(&a2)?.sub(&one)?.div(&a2)?;
    let mu_bar = mu.add(&two.mul(a)?)?.sub(&two)?.div(a)?;
    Ok((kappa_bar, mu_bar))
}

/// Tensor-level D_a deformation. Builds the orthonormal frame of the
/// deformed metric `g' = a g + a(a-1) eta (x) eta`, which is
/// `e_i' = e_i / sqrt(a)` orthogonal to xi and `xi' = xi / a`. Returns
/// `None` when `sqrt(a)` is irrational (parameter algebra still applies).
/// Requires xi to be a frame leg (up to sign).
pub fn d_homothetic(
    s: &AcmStructure,
    a: &Rat,
) -> Result<Option<AcmStructure>, GeomError> {
    if !a.is_positive() {
        return Err(GeomError::Structure(format!(
            "deformation parameter must be positive, got {}",
            rat_to_string(a)
        )));
    }
    let Some(sqrt_a) = rat_sqrt_exact(a) else {
        return Ok(None);
    };
    let n = s.dim();
    // xi must be +-1 on exactly one leg
    let mut xi_leg = None;
    for (i, c) in s.xi().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let is_unit = c.sub(&Expr::one()).is_zero() || c.add(&Expr::one()).is_zero();
        if !is_unit || xi_leg.is_some() {
            return Err(GeomError::Unsupported(
                "tensor-level deformation needs xi aligned with a frame leg".into(),
            ));
        }
        xi_leg = Some(i);
    }
    let xi_leg = xi_leg.ok_or_else(|| GeomError::Structure("xi is zero".into()))?;

    let scale =
        |i: usize| -> Rat { if i == xi_leg { Rat::one() / a } else { Rat::one() / &sqrt_a } };

    let chart = s.chart();
    let new_chart = if let Some(frame) = chart.frame_matrix() {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let factor = Expr::rational(scale(i));
            rows.push((0..n).map(|j| frame.at(i, j).mul(&factor)).collect());
        }
        FramedChart::from_frame(
            chart.coordinates().to_vec(),
            ExprMat::from_rows(rows).expect("square"),
            chart.domain_constraints().to_vec(),
        )?
    } else {
        let c = s.structure_coefficients();
        let mut new_c = StructureCoefficients::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c.get(i, j, k).is_zero() {
                        continue;
                    }
                    let factor = scale(i) * scale(j) / scale(k);
                    new_c.set(i, j, k, c.get(i, j, k).mul(&Expr::rational(factor)));
                }
            }
        }
        FramedChart::from_structure_constants(n, new_c)?
    };
    // phi is unchanged as an operator and its frame components survive the
    // uniform scaling away from the xi leg; xi components are unchanged.
    let deformed = AcmStructure::new(
        Arc::new(new_chart),
        s.phi().clone(),
        s.xi().to_vec(),
    )?;
    Ok(Some(deformed))
}

/// `a = (kappa - 1)/(mu - 2)`, the scale for which `mu' = kappa' + 1` and the
/// phi-sectional curvature becomes the constant `c' = -(kappa' + mu')`.
pub fn choose_a(kappa: &Rat, mu: &Rat) -> Result<Rat, DeformError> {
    if kappa >= &Rat::one() {
        return Err(DeformError::KappaNotBelowOne(rat_to_string(kappa)));
    }
    if mu == &rat_int(2) {
        return Err(DeformError::MuEqualsTwo);
    }
    let a = (kappa.clone() - Rat::one()) / (mu.clone() - rat_int(2));
    if !a.is_positive() {
        return Err(DeformError::NonPositiveScale(rat_to_string(&a)));
    }
    let (kb, mb) = deform_km(kappa, mu, &a)?;
    if mb != kb.clone() + Rat::one() {
        return Err(DeformError::Inconsistent(format!(
            "mu' = {} but kappa' + 1 = {}",
            rat_to_string(&mb),
            rat_to_string(&(kb + Rat::one()))
        )));
    }
    Ok(a)
}

/// Both roots of `(3 - f6) cs^2 + (10 + 2 f6) cs + (3 - f6) = 0`, with the
/// positive-branch root flagged valid (`cs > -1`, `cs != 1`). For `f6 = 3`
/// the equation degenerates and the unique solution is `cs = 0`.
pub struct CsRoots {
    pub roots: Vec<QuadExt>,
    pub valid: QuadExt,
}

pub fn solve_cs(f6: &Rat) -> Result<CsRoots, DeformError> {
    if f6 <= &rat_int(-1) {
        return Err(DeformError::F6OutOfRange(rat_to_string(f6)));
    }
    if f6 == &rat_int(3) {
        let zero = QuadExt::from_int(0);
        return Ok(CsRoots {
            roots: vec![zero.clone()],
            valid: zero,
        });
    }
    // cs = (-5 - f6 +- 4 sqrt(f6 + 1)) / (3 - f6)
    let disc = QuadExt::sqrt_of(&(f6.clone() + Rat::one()))?;
    let four = QuadExt::from_int(4);
    let lead = QuadExt::from_rat(rat_int(-5) - f6);
    let den = QuadExt::from_rat(rat_int(3) - f6);
    let plus = lead.add(&four.mul(&disc)?)?.div(&den)?;
    let minus = lead.sub(&four.mul(&disc)?)?.div(&den)?;
    // the positive-branch root is greater than -1 and never equals 1
    if plus.cmp_rat(&rat_int(-1)) <= 0 {
        return Err(DeformError::Inconsistent(format!(
            "positive-branch root {plus} is not greater than -1"
        )));
    }
    if plus.cmp_rat(&Rat::one()) == 0 {
        return Err(DeformError::Inconsistent(
            "positive-branch root equals 1".into(),
        ));
    }
    Ok(CsRoots {
        roots: vec![plus.clone(), minus],
        valid: plus,
    })
}

/// Full construction pipeline: from the base sectional curvature `cs`, the
/// source parameters `kappa = cs(2 - cs)`, `mu = -2 cs`, the scale from
/// `choose_a`, and the deformed parameters, which must equal
/// `(-f6, 1 - f6)` exactly.
pub struct ConstructionOutcome {
    pub cs: QuadExt,
    pub kappa: QuadExt,
    pub mu: QuadExt,
    pub a: QuadExt,
    pub kappa_bar: Rat,
    pub mu_bar: Rat,
    pub c_bar: Rat,
}

pub fn construct_from_f6(f6: &Rat) -> Result<ConstructionOutcome, DeformError> {
    let roots = solve_cs(f6)?;
    let cs = roots.valid;
    let two = QuadExt::from_int(2);
    let one = QuadExt::from_int(1);
    let kappa = cs.mul(&two.sub(&cs)?)?;
    let mu = cs.mul(&two)?.neg();
    // a = (kappa - 1)/(mu - 2) > 0
    let a = kappa.sub(&one)?.div(&mu.sub(&two)?)?;
    if a.sign() <= 0 {
        return Err(DeformError::Inconsistent(format!(
            "construction scale a = {a} is not positive"
        )));
    }
    let (kb, mb) = deform_km_quad(&kappa, &mu, &a)?;
    let kappa_bar = kb
        .as_rational()
        .ok_or_else(|| {
            DeformError::Inconsistent(format!("deformed kappa {kb} is not rational"))
        })?
        .clone();
    let mu_bar = mb
        .as_rational()
        .ok_or_else(|| {
            DeformError::Inconsistent(format!("deformed mu {mb} is not rational"))
        })?
        .clone();
    if kappa_bar != -f6.clone() || mu_bar != Rat::one() - f6 {
        return Err(DeformError::Inconsistent(format!(
            "construction landed on ({}, {}) instead of ({}, {})",
            rat_to_string(&kappa_bar),
            rat_to_string(&mu_bar),
            rat_to_string(&-f6.clone()),
            rat_to_string(&(Rat::one() - f6)),
        )));
    }
    let c_bar = f6.clone() * rat_int(2) - Rat::one();
    Ok(ConstructionOutcome {
        cs,
        kappa,
        mu,
        a,
        kappa_bar,
        mu_bar,
        c_bar,
    })
}

/// The rigid coefficient tuple of dimension >= 5:
/// `f1 = (f6+1)/2, f2 = (f6-1)/2, f3 = (3 f6+1)/2, f4 = 1, f5 = 1/2`,
/// verified against all six scalar constraint equations, together with
/// `kappa = -f6`, `mu = 1 - f6` and the phi-sectional constant `c = 2 f6 - 1`.
pub struct Dim5System {
    pub f: [Rat; 6],
    pub kappa: Rat,
    pub mu: Rat,
    pub c: Rat,
}

pub fn dim5_system(f6: &Rat) -> Result<Dim5System, DeformError> {
    if f6 <= &rat_int(-1) {
        return Err(DeformError::F6OutOfRange(rat_to_string(f6)));
    }
    let half = rat(1, 2);
    let f = [
        (f6.clone() + Rat::one()) * &half,
        (f6.clone() - Rat::one()) * &half,
        (f6.clone() * rat_int(3) + Rat::one()) * &half,
        Rat::one(),
        half,
        f6.clone(),
    ];
    let residuals = dim5_residuals_rat(&f)?;
    for (i, r) in residuals.iter().enumerate() {
        if !r.is_zero() {
            return Err(DeformError::Inconsistent(format!(
                "constraint {} has residual {}",
                i + 1,
                r
            )));
        }
    }
    Ok(Dim5System {
        kappa: -f6.clone(),
        mu: Rat::one() - f6,
        c: f6.clone() * rat_int(2) - Rat::one(),
        f,
    })
}

/// The six scalar constraints of the dimension >= 5 rigidity system, for
/// rational coefficients (the square root lives in a quadratic extension).
pub fn dim5_residuals_rat(f: &[Rat; 6]) -> Result<Vec<QuadExt>, DeformError> {
    let lam2 = Rat::one() - &f[0] + &f[2]; // 1 - f1 + f3
    if lam2.is_negative() {
        return Err(DeformError::Inconsistent(
            "1 - f1 + f3 is negative; no real eigenvalue".into(),
        ));
    }
    let lam = QuadExt::sqrt_of(&lam2)?;
    let q = |r: &Rat| QuadExt::from_rat(r.clone());
    let e1 = f[0].clone() - &f[1] - &f[2] - &f[3] + &f[5] + f[4].clone() * &lam2;
    let e2 = f[0].clone() + &f[1] - &f[2] + f[4].clone() * &lam2;
    let e3 = f[1].clone() * rat_int(2) + &f[3] - &f[5];
    let e4 = f[0].clone() * rat_int(2) + f[1].clone() * rat_int(3) - &f[2] + &f[3] - &f[5];
    let base5 = f[4].clone() * &lam2 + &f[0] + &f[3] - &f[5] - rat_int(2);
    let surd = q(&((f[3].clone() - Rat::one()) * rat_int(2))).mul(&lam)?;
    let e5 = q(&base5).add(&surd)?;
    let e6 = q(&base5).sub(&surd)?;
    Ok(vec![q(&e1), q(&e2), q(&e3), q(&e4), e5, e6])
}

/// The same six constraints with a symbolic `f6`; every residual must
/// normalize to exactly zero.
pub fn dim5_residuals_symbolic() -> Result<Vec<Expr>, GeomError> {
    let f6 = Expr::symbol("f6");
    let half = Expr::rational(rat(1, 2));
    let one = Expr::one();
    let f1 = f6.add(&one).mul(&half);
    let f2 = f6.sub(&one).mul(&half);
    let f3 = f6.mul(&Expr::int(3)).add(&one).mul(&half);
    let f4 = one.clone();
    let f5 = half.clone();
    let lam2 = one.sub(&f1).add(&f3);
    let lam = lam2.sqrt()?;
    let e1 = f1
        .sub(&f2)
        .sub(&f3)
        .sub(&f4)
        .add(&f6)
        .add(&f5.mul(&lam2));
    let e2 = f1.add(&f2).sub(&f3).add(&f5.mul(&lam2));
    let e3 = f2.mul(&Expr::int(2)).add(&f4).sub(&f6);
    let e4 = f1
        .mul(&Expr::int(2))
        .add(&f2.mul(&Expr::int(3)))
        .sub(&f3)
        .add(&f4)
        .sub(&f6);
    let base5 = f5.mul(&lam2).add(&f1).add(&f4).sub(&f6).sub(&Expr::int(2));
    let surd = f4.sub(&one).mul(&Expr::int(2)).mul(&lam);
    let e5 = base5.add(&surd);
    let e6 = base5.sub(&surd);
    Ok(vec![e1, e2, e3, e4, e5, e6])
}

/// Lie-group labels of the 3-dimensional classification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassLabel {
    Su2OrSo3,
    Sl2rOrO12,
    E2,
    E11,
    Unclassified,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Su2OrSo3 => "SU2_or_SO3",
            ClassLabel::Sl2rOrO12 => "SL2R_or_O12",
            ClassLabel::E2 => "E2",
            ClassLabel::E11 => "E11",
            ClassLabel::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// Classification of 3-dimensional constant (kappa, mu) structures by the
/// exact signs of `1 - lambda - mu/2` and `1 + lambda - mu/2` with
/// `lambda = sqrt(1 - kappa)`. Boundary cases whose side condition fails
/// are reported as `Unclassified`.
pub fn classify_3d(kappa: &Rat, mu: &Rat) -> Result<ClassLabel, DeformError> {
    if kappa >= &Rat::one() {
        return Err(DeformError::KappaNotBelowOne(rat_to_string(kappa)));
    }
    let lambda = QuadExt::sqrt_of(&(Rat::one() - kappa))?;
    let half_mu = QuadExt::from_rat(mu.clone() * rat(1, 2));
    let one = QuadExt::from_int(1);
    let a = one.sub(&lambda)?.sub(&half_mu)?;
    let b = one.add(&lambda)?.sub(&half_mu)?;
    Ok(classify_from_signs(a.sign(), b.sign(), mu))
}

/// Label from the exact signs of `1 - lambda - mu/2` and `1 + lambda - mu/2`.
/// A boundary whose side condition on mu fails, or a double boundary, is
/// `Unclassified`.
pub fn classify_from_signs(sign_a: i32, sign_b: i32, mu: &Rat) -> ClassLabel {
    match (sign_a, sign_b) {
        (1, 1) => ClassLabel::Su2OrSo3,
        (-1, 1) | (-1, -1) => ClassLabel::Sl2rOrO12,
        (0, 0) => ClassLabel::Unclassified,
        (0, _) => {
            if mu < &rat_int(2) {
                ClassLabel::E2
            } else {
                ClassLabel::Unclassified
            }
        }
        (_, 0) => {
            if mu > &rat_int(2) {
                ClassLabel::E11
            } else {
                ClassLabel::Unclassified
            }
        }
        _ => ClassLabel::Unclassified,
    }
}
