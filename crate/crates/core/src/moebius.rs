//! Unit-determinant 2x2 complex matrices and the quantities read off them.
//!
//! Everything is computed on SL(2,C) lifts. Exported quantities (beta, gamma,
//! classification, fixed points) do not depend on the sign of the lift.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::PrincipalCharacter;
use crate::complex::{principal_sqrt, real, serde_reim, Complex, ONE, ZERO};
use crate::error::{Error, Result};

const SINGULAR_DET: f64 = 1e-14;

/// A Moebius transformation `z -> (az+b)/(cz+d)` stored as a matrix with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

/// Divides `raw` by the principal square root of its determinant.
pub fn normalize(raw: [[Complex; 2]; 2]) -> Result<MoebiusMap> {
    let [[a, b], [c, d]] = raw;
    if ![a, b, c, d].into_iter().all(crate::complex::is_finite) {
        return Err(Error::NonFinite);
    }
    let det = a * d - b * c;
    if det.norm().is_nan() || det.norm() <= SINGULAR_DET {
        return Err(Error::SingularMatrix { det: det.norm() });
    }
    let s = principal_sqrt(det);
    Ok(MoebiusMap {
        a: a / s,
        b: b / s,
        c: c / s,
        d: d / s,
    })
}

impl MoebiusMap {
    /// Normalizing constructor; see [`normalize`].
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        normalize([[a, b], [c, d]])
    }

    /// Wraps entries the caller knows to have unit determinant (up to rounding).
    pub const fn from_unimodular(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub const fn identity() -> Self {
        MoebiusMap {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn diagonal(lambda: Complex) -> Self {
        MoebiusMap::from_unimodular(lambda, ZERO, ZERO, lambda.inv())
    }

    pub fn translation(t: Complex) -> Self {
        MoebiusMap::from_unimodular(ONE, t, ZERO, ONE)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex {
        self.a + self.d
    }

    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Adjugate, which is the inverse for a unit-determinant matrix.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `h f h^-1` where `self` is `f`.
    pub fn conjugate_by(&self, h: &MoebiusMap) -> MoebiusMap {
        h.compose(self).compose(&h.inverse())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_entry_distance(&self, other: &MoebiusMap) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise distance minimized over the sign of the lift of `other`.
    pub fn projective_distance(&self, other: &MoebiusMap) -> f64 {
        self.max_entry_distance(other)
            .min(self.max_entry_distance(&-*other))
    }

    pub fn is_projective_identity(&self, tol: f64) -> bool {
        self.b.norm() < tol && self.c.norm() < tol && (self.a - self.d).norm() < tol
    }

    /// Image of a point of the Riemann sphere.
    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                if self.c == ZERO {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        self.compose(&rhs)
    }
}

impl Neg for MoebiusMap {
    type Output = MoebiusMap;

    fn neg(self) -> MoebiusMap {
        MoebiusMap {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_reim::array4::serialize(&self.entries(), s)
    }
}

impl<'de> Deserialize<'de> for MoebiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, d_] = serde_reim::array4::deserialize(d)?;
        let m = MoebiusMap::from_unimodular(a, b, c, d_);
        if (m.det() - ONE).norm() > 1e-10 {
            return Err(serde::de::Error::custom("matrix determinant is not 1"));
        }
        Ok(m)
    }
}

/// `f g f^-1 g^-1`.
pub fn commutator(f: &MoebiusMap, g: &MoebiusMap) -> MoebiusMap {
    f.compose(g).compose(&f.inverse()).compose(&g.inverse())
}

/// `tr^2(f) - 4`.
pub fn beta(f: &MoebiusMap) -> Complex {
    let t = f.trace();
    t * t - 4.0
}

/// `tr[f,g] - 2`.
pub fn gamma(f: &MoebiusMap, g: &MoebiusMap) -> Complex {
    commutator(f, g).trace() - 2.0
}

/// The commutator parameter through the Fricke trace identity, without forming `[f,g]`.
pub fn fricke_gamma(f: &MoebiusMap, g: &MoebiusMap) -> Complex {
    let fg = f.compose(g);
    let (tf, tg, tfg) = (f.trace(), g.trace(), fg.trace());
    beta(f) + beta(g) + beta(&fg) - tf * tg * tfg + 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ElementClass {
    Identity,
    Parabolic,
    EllipticRational { k: u32, p: u32 },
    EllipticIrrationalAngle,
    Loxodromic,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementClass::Identity => write!(f, "identity"),
            ElementClass::Parabolic => write!(f, "parabolic"),
            ElementClass::EllipticRational { k, p } => write!(f, "elliptic of order {p} (k = {k})"),
            ElementClass::EllipticIrrationalAngle => write!(f, "elliptic, no order up to p_max"),
            ElementClass::Loxodromic => write!(f, "loxodromic"),
        }
    }
}

/// Conjugacy type from beta. Loxodromic is everything outside `[-4, 0]`.
pub fn classify(f: &MoebiusMap, tol: f64, p_max: u32) -> ElementClass {
    if f.is_projective_identity(tol) {
        return ElementClass::Identity;
    }
    let b = beta(f);
    if b.norm() < tol {
        return ElementClass::Parabolic;
    }
    if in_elliptic_range(b, tol) {
        return match elliptic_order(b, p_max, tol) {
            Ok(Some((k, p))) => ElementClass::EllipticRational { k, p },
            _ => ElementClass::EllipticIrrationalAngle,
        };
    }
    ElementClass::Loxodromic
}

fn in_elliptic_range(b: Complex, tol: f64) -> bool {
    b.im.abs() < tol && b.re >= -4.0 - tol && b.re < 0.0
}

/// Finds the rotation `(k, p)` with `beta = -4 sin^2(k pi / p)`, `k/p <= 1/2`, smallest `p <= p_max`.
///
/// Candidates are the continued-fraction convergents of `asin(sqrt(-beta/4)) / pi`;
/// each is re-verified against `-4 sin^2(k pi / p)` before being accepted.
pub fn elliptic_order(betaval: Complex, p_max: u32, tol: f64) -> Result<Option<(u32, u32)>> {
    if !in_elliptic_range(betaval, tol) {
        return Err(Error::NotElliptic {
            re: betaval.re,
            im: betaval.im,
        });
    }
    let s = (-betaval.re / 4.0).clamp(0.0, 1.0);
    let x = s.sqrt().asin() / PI;

    // convergents h/k of x
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > (p_max as f64) * 2.0 + 2.0 {
            // remaining convergents all have denominators beyond p_max
            break;
        }
        let a = a as u64;
        let (h_next, k_next) = (a * h + h_prev, a * k + k_prev);
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if k > p_max as u64 {
            break;
        }
        if k >= 2 && h >= 1 {
            let (kk, pp) = (h as u32, k as u32);
            let candidate = -4.0 * (kk as f64 * PI / pp as f64).sin().powi(2);
            if (betaval - real(candidate)).norm() < tol {
                return Ok(Some((kk, pp)));
            }
        }
        let frac = r - r.floor();
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    Ok(None)
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpherePoint {
    Finite(#[serde(with = "serde_reim")] Complex),
    Infinity,
}

impl SpherePoint {
    /// Chordal distance, bounded by 2.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

/// Roots of `c z^2 + (d - a) z - b = 0` on the sphere: one point when parabolic, else two.
pub fn fixed_points(f: &MoebiusMap, tol: f64) -> Result<Vec<SpherePoint>> {
    if f.is_projective_identity(tol) {
        return Err(Error::IsIdentity);
    }
    let MoebiusMap { a, b, c, d } = *f;
    let parabolic = beta(f).norm() < tol;
    if c == ZERO {
        if parabolic {
            return Ok(vec![SpherePoint::Infinity]);
        }
        return Ok(vec![SpherePoint::Finite(b / (d - a)), SpherePoint::Infinity]);
    }
    let lin = d - a;
    if parabolic {
        return Ok(vec![SpherePoint::Finite(-lin / (2.0 * c))]);
    }
    let root = principal_sqrt(lin * lin + 4.0 * b * c);
    let plus = lin + root;
    let minus = lin - root;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    // q != 0 here since the map is not parabolic
    Ok(vec![SpherePoint::Finite(q / c), SpherePoint::Finite(-b / q)])
}

/// True iff no fixed point of `f` is within chordal distance `tol` of a fixed point of `h`.
pub fn fix_disjoint(f: &MoebiusMap, h: &MoebiusMap, tol: f64) -> Result<bool> {
    let pf = fixed_points(f, tol)?;
    let ph = fixed_points(h, tol)?;
    Ok(pf
        .iter()
        .all(|x| ph.iter().all(|y| x.chordal_distance(y) >= tol)))
}

/// Complex hyperbolic distance `delta + i theta` between the axes of the two generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisDistance {
    pub delta: f64,
    pub theta: f64,
}

impl AxisDistance {
    pub fn as_complex(&self) -> Complex {
        Complex::new(self.delta, self.theta)
    }

    pub fn sinh_squared(&self) -> Complex {
        let s = self.as_complex().sinh();
        s * s
    }
}

/// Solves `sinh^2(delta + i theta) = 4 gamma / (beta beta~)` with `delta >= 0`, `theta in (-pi/2, pi/2]`.
pub fn complex_distance(ch: &PrincipalCharacter, tol: f64) -> Result<AxisDistance> {
    if ch.beta.norm() <= tol || ch.beta_tilde.norm() <= tol {
        return Err(Error::ParabolicGenerator);
    }
    let w = 4.0 * ch.gamma / (ch.beta * ch.beta_tilde);
    let mut u = principal_sqrt(w).asinh();
    // sinh^2 is invariant under u -> -u and u -> u + i pi
    if u.re < 0.0 || (u.re == 0.0 && u.im < 0.0) {
        u = -u;
    }
    if u.im <= -PI / 2.0 {
        u += Complex::new(0.0, PI);
    } else if u.im > PI / 2.0 {
        u -= Complex::new(0.0, PI);
    }
    Ok(AxisDistance {
        delta: u.re.max(0.0),
        theta: u.im,
    })
}
