//! Principal characters `(gamma, beta, beta~)` and the necessary conditions on them.

use serde::{Deserialize, Serialize};

use crate::complex::{real, serde_reim, Complex};
use crate::moebius::{beta, elliptic_order, gamma, MoebiusMap};

/// `(gamma(f,g), beta(f), beta(g))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCharacter {
    #[serde(with = "serde_reim")]
    pub gamma: Complex,
    #[serde(with = "serde_reim")]
    pub beta: Complex,
    #[serde(with = "serde_reim")]
    pub beta_tilde: Complex,
}

impl PrincipalCharacter {
    pub const fn new(gamma: Complex, beta: Complex, beta_tilde: Complex) -> Self {
        PrincipalCharacter {
            gamma,
            beta,
            beta_tilde,
        }
    }

    pub fn from_real(gamma: f64, beta: f64, beta_tilde: f64) -> Self {
        PrincipalCharacter::new(real(gamma), real(beta), real(beta_tilde))
    }

    /// Same group datum with the generators exchanged.
    pub fn swapped(&self) -> Self {
        PrincipalCharacter::new(self.gamma, self.beta_tilde, self.beta)
    }

    pub fn max_distance(&self, other: &PrincipalCharacter) -> f64 {
        (self.gamma - other.gamma)
            .norm()
            .max((self.beta - other.beta).norm())
            .max((self.beta_tilde - other.beta_tilde).norm())
    }

    /// Componentwise match within `tol`, allowing the generator swap.
    pub fn matches(&self, other: &PrincipalCharacter, tol: f64) -> bool {
        self.max_distance(other) < tol || self.swapped().max_distance(other) < tol
    }

    pub fn is_finite(&self) -> bool {
        [self.gamma, self.beta, self.beta_tilde]
            .into_iter()
            .all(crate::complex::is_finite)
    }
}

/// A point `(gamma, beta)` of the two-dimensional slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    #[serde(with = "serde_reim")]
    pub gamma: Complex,
    #[serde(with = "serde_reim")]
    pub beta: Complex,
}

impl SlicePoint {
    pub const fn new(gamma: Complex, beta: Complex) -> Self {
        SlicePoint { gamma, beta }
    }

    pub fn with_beta_tilde(&self, beta_tilde: Complex) -> PrincipalCharacter {
        PrincipalCharacter::new(self.gamma, self.beta, beta_tilde)
    }
}

pub fn character_of(f: &MoebiusMap, g: &MoebiusMap) -> PrincipalCharacter {
    PrincipalCharacter::new(gamma(f, g), beta(f), beta(g))
}

pub fn project(ch: &PrincipalCharacter) -> SlicePoint {
    SlicePoint::new(ch.gamma, ch.beta)
}

/// Characters `(gamma, beta, -4)` and `(beta - gamma, beta, -4)` of the two order-two extensions.
pub fn zext_characters(pt: &SlicePoint) -> (PrincipalCharacter, PrincipalCharacter) {
    let minus4 = real(-4.0);
    (
        PrincipalCharacter::new(pt.gamma, pt.beta, minus4),
        PrincipalCharacter::new(pt.beta - pt.gamma, pt.beta, minus4),
    )
}

/// Character `(gamma(gamma - beta), beta, beta)` of `<f, g f g^-1>`.
pub fn subgroup_character(pt: &SlicePoint) -> PrincipalCharacter {
    PrincipalCharacter::new(pt.gamma * (pt.gamma - pt.beta), pt.beta, pt.beta)
}

/// Outcome of a scalar inequality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub value: f64,
    pub margin: f64,
}

// |e^{2 pi i/3}| rounds below 1; boundary points must still pass
const BOUNDARY_SLACK: f64 = 8.0 * f64::EPSILON;

pub const JORGENSEN_BOUND: f64 = 1.0;
pub const CAO_BOUND: f64 = 0.198;

fn check(value: f64, bound: f64) -> Check {
    let margin = value - bound;
    Check {
        passed: margin >= -BOUNDARY_SLACK * bound.max(1.0),
        value,
        margin,
    }
}

/// `|gamma| + |beta| >= 1`.
pub fn jorgensen_ok(pt: &SlicePoint) -> Check {
    check(pt.gamma.norm() + pt.beta.norm(), JORGENSEN_BOUND)
}

/// `|gamma (gamma - beta)| >= 0.198`, the bound for two generators of equal trace.
pub fn cao_ok(pt: &SlicePoint) -> Check {
    check((pt.gamma * (pt.gamma - pt.beta)).norm(), CAO_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DihedralKind {
    /// Finite dihedral group `D_p`.
    Dihedral { p: u32 },
    InfiniteDihedral,
    /// Generators share a fixed point on the sphere: a group of Euclidean similarities.
    Euclidean,
    /// Rotation of irrational angle (or of order beyond `p_max`): elementary but not discrete.
    IndiscreteRotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DihedralCase {
    /// `gamma = beta` with an order-two second generator.
    GammaEqualsBeta,
    /// Both generators of order two.
    TwoInvolutions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralDiagnosis {
    pub kind: DihedralKind,
    pub case: DihedralCase,
}

fn rotation_kind(rot: Complex, tol: f64, p_max: u32) -> DihedralKind {
    if rot.norm() < tol {
        return DihedralKind::Euclidean;
    }
    match elliptic_order(rot, p_max, tol) {
        Ok(Some((_, p))) => DihedralKind::Dihedral { p },
        Ok(None) => DihedralKind::IndiscreteRotation,
        Err(_) => DihedralKind::InfiniteDihedral,
    }
}

/// Recognizes the dihedral characters: `(beta, beta, -4)` and `(gamma, -4, -4)` up to generator swap.
pub fn dihedral_check(ch: &PrincipalCharacter, tol: f64, p_max: u32) -> Option<DihedralDiagnosis> {
    let near = |x: Complex, y: Complex| (x - y).norm() < tol;
    let minus4 = real(-4.0);

    if near(ch.beta, minus4) && near(ch.beta_tilde, minus4) {
        // beta(fg) = gamma when both generators are involutions
        return Some(DihedralDiagnosis {
            kind: rotation_kind(ch.gamma, tol, p_max),
            case: DihedralCase::TwoInvolutions,
        });
    }
    for c in [*ch, ch.swapped()] {
        if near(c.beta_tilde, minus4) && near(c.gamma, c.beta) {
            return Some(DihedralDiagnosis {
                kind: rotation_kind(c.beta, tol, p_max),
                case: DihedralCase::GammaEqualsBeta,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn character_of_identity_is_origin() {
        let id = MoebiusMap::identity();
        assert_eq!(character_of(&id, &id), PrincipalCharacter::new(ZERO, ZERO, ZERO));
    }

    #[test]
    fn character_of_parabolic_normal_form() {
        let gm = Complex::new(0.4, 1.3);
        let c = crate::complex::principal_sqrt(gm);
        let f = MoebiusMap::translation(ONE);
        let g = MoebiusMap::from_unimodular(crate::complex::I, ZERO, c, -crate::complex::I);
        let ch = character_of(&f, &g);
        assert!((ch.gamma - gm).norm() < 1e-14);
        assert_eq!(ch.beta, ZERO);
        assert!((ch.beta_tilde + 4.0).norm() < 1e-15);
    }

    #[test]
    fn project_drops_beta_tilde() {
        assert_eq!(project(&PrincipalCharacter::from_real(0.0, 0.0, 0.0)), SlicePoint::new(ZERO, ZERO));
        assert_eq!(
            project(&PrincipalCharacter::from_real(-2.0, -3.0, -4.0)),
            SlicePoint::new(real(-2.0), real(-3.0))
        );
    }

    #[test]
    fn zext_examples() {
        let (a, b) = zext_characters(&SlicePoint::new(real(-2.0), real(-3.0)));
        assert_eq!(a, PrincipalCharacter::from_real(-2.0, -3.0, -4.0));
        assert_eq!(b, PrincipalCharacter::from_real(-1.0, -3.0, -4.0));
        let g = Complex::new(0.3, 2.0);
        let (a, b) = zext_characters(&SlicePoint::new(g, ZERO));
        assert_eq!((a.gamma, b.gamma), (g, -g));
        let bt = Complex::new(1.5, -0.5);
        let (a, b) = zext_characters(&SlicePoint::new(bt, bt));
        assert_eq!((a.gamma, b.gamma), (bt, ZERO));
    }

    #[test]
    fn subgroup_character_examples() {
        let s = subgroup_character(&SlicePoint::new(real(-2.0), real(-3.0)));
        assert_eq!(s, PrincipalCharacter::from_real(-2.0, -3.0, -3.0));
        let b = Complex::new(0.2, 0.9);
        assert_eq!(subgroup_character(&SlicePoint::new(b, b)).gamma, ZERO);
    }

    #[test]
    fn jorgensen_examples() {
        let c = jorgensen_ok(&SlicePoint::new(real(0.3), real(0.2)));
        assert!(!c.passed);
        assert!((c.margin + 0.5).abs() < 1e-15);
        let c = jorgensen_ok(&SlicePoint::new(real(-2.0), real(-3.0)));
        assert!(c.passed && c.margin == 4.0);
        let w = Complex::from_polar(1.0, 2.0 * PI / 3.0);
        let c = jorgensen_ok(&SlicePoint::new(w, ZERO));
        assert!(c.passed);
        assert!(c.margin.abs() < 1e-15);
    }

    #[test]
    fn cao_examples() {
        assert!(cao_ok(&SlicePoint::new(real(-2.0), real(-3.0))).passed);
        assert_eq!(cao_ok(&SlicePoint::new(real(-2.0), real(-3.0))).value, 2.0);
        let b = Complex::new(-1.0, 0.4);
        assert!(!cao_ok(&SlicePoint::new(b, b)).passed);
        let c = cao_ok(&SlicePoint::new(real(0.1), ZERO));
        assert!(!c.passed);
        assert!((c.value - 0.01).abs() < 1e-15);
    }

    #[test]
    fn dihedral_examples() {
        let d = |g, b, bt| dihedral_check(&PrincipalCharacter::from_real(g, b, bt), 1e-9, 200);
        assert_eq!(d(-3.0, -3.0, -4.0).unwrap().kind, DihedralKind::Dihedral { p: 3 });
        assert_eq!(d(-2.0, -2.0, -4.0).unwrap().kind, DihedralKind::Dihedral { p: 4 });
        assert_eq!(d(2.25, 2.25, -4.0).unwrap().kind, DihedralKind::InfiniteDihedral);
        assert_eq!(d(2.25, -4.0, 2.25).unwrap().kind, DihedralKind::InfiniteDihedral);
        assert_eq!(d(0.0, 0.0, -4.0).unwrap().kind, DihedralKind::Euclidean);
        assert_eq!(d(-1.0, -2.0, -4.0), None);

        let two = d(-4.0 * (2.0 * PI / 7.0).sin().powi(2), -4.0, -4.0).unwrap();
        assert_eq!(two.case, DihedralCase::TwoInvolutions);
        assert_eq!(two.kind, DihedralKind::Dihedral { p: 7 });
        assert_eq!(d(0.0, -4.0, -4.0).unwrap().kind, DihedralKind::Euclidean);
        assert_eq!(d(3.0, -4.0, -4.0).unwrap().kind, DihedralKind::InfiniteDihedral);
        assert_eq!(d(-1.0f64.sin().powi(2), -4.0, -4.0).unwrap().kind, DihedralKind::IndiscreteRotation);
    }

    #[test]
    fn matches_is_swap_symmetric() {
        let a = PrincipalCharacter::from_real(-1.0, -2.0, -3.0);
        assert!(a.matches(&a.swapped(), 1e-12));
        assert!(!a.matches(&PrincipalCharacter::from_real(-1.0, -2.0, -2.0), 1e-9));
    }

    #[test]
    fn json_roundtrip() {
        let ch = PrincipalCharacter::new(Complex::new(0.1, -0.2), Complex::new(1.0 / 3.0, 0.0), real(-4.0));
        let s = serde_json::to_string(&ch).unwrap();
        assert!(s.starts_with(r#"{"gamma":{"re":0.1,"im":-0.2}"#));
        assert_eq!(serde_json::from_str::<PrincipalCharacter>(&s).unwrap(), ch);
    }
}
