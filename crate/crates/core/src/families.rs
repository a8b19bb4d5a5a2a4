//! Matrix normal forms for characters `(gamma, beta, -4)` and the
//! `(p, 0)` Dehn surgery family on the figure-eight knot complement.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{character_of, PrincipalCharacter, SlicePoint};
use crate::complex::{principal_sqrt, real, serde_reim, Complex, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::moebius::{beta, fixed_points, gamma, MoebiusMap, SpherePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `f = diag(lambda, 1/lambda)`, `g = [[a, 1], [-(1+a^2), -a]]`.
    Diagonal,
    /// `f = [[1, 1], [0, 1]]`, `g = [[i, 0], [sqrt(gamma), -i]]`.
    Parabolic,
}

/// Which square roots were taken. All roots are principal; the only free choice is
/// between `lambda` and `-1/lambda`, the two solutions of `lambda^2 - sqrt(beta) lambda - 1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchNotes {
    pub branch: Branch,
    pub lambda_flipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizedPair {
    pub f: MoebiusMap,
    pub g: MoebiusMap,
    /// Diagonal entry of `f`; zero on the parabolic branch.
    #[serde(with = "serde_reim")]
    pub lambda: Complex,
    /// Involution parameter: `a` on the diagonal branch, `sqrt(gamma)` on the parabolic one.
    #[serde(with = "serde_reim")]
    pub a: Complex,
    pub branch_notes: BranchNotes,
    /// `gamma = 0` or `gamma = beta`: the realized group is elementary.
    pub elementary: bool,
}

/// Root of `lambda^2 - sqrt(beta) lambda - 1 = 0` with `|lambda| >= 1`, ties broken by
/// nonnegative imaginary part and then nonnegative real part.
fn choose_lambda(b: Complex) -> (Complex, bool) {
    let lam = (principal_sqrt(b) + principal_sqrt(b + 4.0)) / 2.0;
    let alt = -lam.inv();
    const EPS: f64 = 1e-12;
    let prefer_alt = if (lam.norm() - alt.norm()).abs() > EPS {
        alt.norm() > lam.norm()
    } else if (lam.im - alt.im).abs() > EPS {
        alt.im > lam.im
    } else {
        alt.re > lam.re
    };
    if prefer_alt {
        (alt, true)
    } else {
        (lam, false)
    }
}

/// A matrix pair with character `(gamma, beta, -4)`.
pub fn realize(pt: &SlicePoint, tol: f64) -> RealizedPair {
    let SlicePoint { gamma: g, beta: b } = *pt;
    let elementary = g.norm() < tol || (g - b).norm() < tol;
    if b.norm() <= tol {
        let c = principal_sqrt(g);
        return RealizedPair {
            f: MoebiusMap::translation(ONE),
            g: MoebiusMap::from_unimodular(I, ZERO, c, -I),
            lambda: ZERO,
            a: c,
            branch_notes: BranchNotes {
                branch: Branch::Parabolic,
                lambda_flipped: false,
            },
            elementary,
        };
    }
    let (lambda, flipped) = choose_lambda(b);
    let l2 = lambda * lambda;
    let m = (l2 - 1.0) * (l2 - 1.0);
    let a = principal_sqrt((g * l2 - m) / m);
    RealizedPair {
        f: MoebiusMap::diagonal(lambda),
        g: MoebiusMap::from_unimodular(a, ONE, -(ONE + a * a), -a),
        lambda,
        a,
        branch_notes: BranchNotes {
            branch: Branch::Diagonal,
            lambda_flipped: flipped,
        },
        elementary,
    }
}

/// `(1 + a^2)(lambda^2 - 1)^2 / lambda^2`, the commutator parameter of the diagonal normal form.
pub fn gamma_normal_form(lambda: Complex, a: Complex) -> Result<Complex> {
    if lambda.norm() < 1e-300 || (lambda - 1.0).norm() == 0.0 || (lambda + 1.0).norm() == 0.0 {
        return Err(Error::DegenerateLambda);
    }
    let l2 = lambda * lambda;
    Ok((ONE + a * a) * (l2 - 1.0) * (l2 - 1.0) / l2)
}

/// `c (c + 2i (lambda^2 - 1) / lambda)` for `f = [[lambda, 1], [0, 1/lambda]]`, `g = [[i, 0], [c, -i]]`.
pub fn parabolic_gamma_form(lambda: Complex, c: Complex) -> Result<Complex> {
    if lambda == ZERO {
        return Err(Error::DegenerateLambda);
    }
    Ok(c * (c + 2.0 * I * (lambda * lambda - 1.0) / lambda))
}

/// `(1 + i sqrt 3) / 2`.
pub fn figure_eight_parameter() -> Complex {
    Complex::new(0.5, 3f64.sqrt() / 2.0)
}

/// Parabolic generators of the figure-eight knot group.
pub fn figure_eight_generators() -> (MoebiusMap, MoebiusMap) {
    (
        MoebiusMap::translation(ONE),
        MoebiusMap::from_unimodular(ONE, ZERO, figure_eight_parameter(), ONE),
    )
}

/// Projective distance between `h f h^-1 f h` and `f h f^-1 h f`.
pub fn relator_residual(f: &MoebiusMap, h: &MoebiusMap) -> f64 {
    let (fi, hi) = (f.inverse(), h.inverse());
    let lhs = *h * *f * hi * *f * *h;
    let rhs = *f * *h * fi * *h * *f;
    lhs.projective_distance(&rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DehnFamilyPoint {
    pub p: u32,
    #[serde(with = "serde_reim")]
    pub a_p: Complex,
    pub f_p: MoebiusMap,
    pub h_p: MoebiusMap,
    #[serde(with = "serde_reim")]
    pub beta_p: Complex,
    /// From the closed form `a_p (a_p - 2 + 2 cos(2 pi / p))`.
    #[serde(with = "serde_reim")]
    pub gamma_p: Complex,
    pub relator_residual: f64,
    /// `p < 7`, outside the hyperbolic Dehn surgery range.
    pub small_p: bool,
}

impl DehnFamilyPoint {
    pub fn gamma_gap(&self) -> f64 {
        (self.gamma_p - dehn_gamma_limit()).norm()
    }
}

fn dehn_a(p: u32) -> Complex {
    let c2 = (2.0 * PI / p as f64).cos();
    let c4 = (4.0 * PI / p as f64).cos();
    (3.0 - 2.0 * c2 - principal_sqrt(real(-1.0 - 4.0 * c2 + 2.0 * c4))) / 2.0
}

/// The `(p, 0)` surgery group generated by two elliptics of order `p`.
pub fn dehn_surgery_point(p: u32) -> Result<DehnFamilyPoint> {
    if p < 2 {
        return Err(Error::InvalidRotation { k: 1, order: p });
    }
    let a_p = dehn_a(p);
    let rot = Complex::from_polar(1.0, PI / p as f64);
    let f_p = MoebiusMap::from_unimodular(rot, ONE, ZERO, rot.conj());
    let h_p = MoebiusMap::from_unimodular(rot, ZERO, a_p, rot.conj());
    let gamma_p = a_p * (a_p - 2.0 + 2.0 * (2.0 * PI / p as f64).cos());
    Ok(DehnFamilyPoint {
        p,
        a_p,
        f_p,
        h_p,
        beta_p: beta(&f_p),
        gamma_p,
        relator_residual: relator_residual(&f_p, &h_p),
        small_p: p < 7,
    })
}

/// Limit of `gamma_p` as `p -> infinity` for the principal branch of `a_p`.
///
/// The principal root sends `a_p` to `(1 - i sqrt 3)/2`, the conjugate of the
/// figure-eight parameter, so the limit is `(-1 - i sqrt 3)/2`.
pub fn dehn_gamma_limit() -> Complex {
    let a = (ONE - principal_sqrt(real(-3.0))) / 2.0;
    a * a
}

/// Points `p_min..=p_max`, computed in parallel and returned in order of `p`.
pub fn dehn_sweep(p_min: u32, p_max: u32) -> Result<Vec<DehnFamilyPoint>> {
    (p_min..=p_max).into_par_iter().map(dehn_surgery_point).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPair {
    pub f: MoebiusMap,
    pub g: MoebiusMap,
    /// `X` with `f' = X f X^-1`, `g' = X g X^-1`.
    pub conjugator: MoebiusMap,
}

/// Conjugates so `f` becomes `[[1,1],[0,1]]` (parabolic) or `diag(lambda, 1/lambda)` with `|lambda| >= 1`.
pub fn canonicalize_pair(f: &MoebiusMap, g: &MoebiusMap, tol: f64) -> Result<CanonicalPair> {
    let pts = fixed_points(f, tol)?;
    // fix the lift so a parabolic f has trace +2
    let f = if f.trace().re < 0.0 { -*f } else { *f };
    let conjugator = match pts.as_slice() {
        [z0] => {
            let to_inf = match *z0 {
                SpherePoint::Infinity => MoebiusMap::identity(),
                SpherePoint::Finite(z) => MoebiusMap::from_unimodular(ZERO, ONE, -ONE, z),
            };
            let t = f.conjugate_by(&to_inf).b;
            let s = principal_sqrt(t).inv();
            MoebiusMap::diagonal(s) * to_inf
        }
        [z1, z2] => {
            let x = sending_to_zero_and_infinity(*z1, *z2)?;
            let lam = f.conjugate_by(&x).a;
            let keep = if (lam.norm() - 1.0).abs() > 1e-12 {
                lam.norm() > 1.0
            } else if lam.im.abs() > 1e-12 {
                lam.im > 0.0
            } else {
                lam.re >= 0.0
            };
            if keep {
                x
            } else {
                MoebiusMap::from_unimodular(ZERO, ONE, -ONE, ZERO) * x
            }
        }
        _ => unreachable!("fixed_points returns one or two points"),
    };
    Ok(CanonicalPair {
        f: f.conjugate_by(&conjugator),
        g: g.conjugate_by(&conjugator),
        conjugator,
    })
}

/// Unit-determinant map with `z1 -> 0`, `z2 -> infinity`.
fn sending_to_zero_and_infinity(z1: SpherePoint, z2: SpherePoint) -> Result<MoebiusMap> {
    match (z1, z2) {
        (SpherePoint::Finite(a), SpherePoint::Infinity) => Ok(MoebiusMap::translation(-a)),
        (SpherePoint::Infinity, SpherePoint::Finite(b)) => Ok(MoebiusMap::from_unimodular(ZERO, ONE, -ONE, b)),
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => MoebiusMap::new(ONE, -a, ONE, -b),
        (SpherePoint::Infinity, SpherePoint::Infinity) => Err(Error::IsIdentity),
    }
}

/// `character_of` for a realized pair, as a convenience for roundtrip checks.
pub fn realized_character(r: &RealizedPair) -> PrincipalCharacter {
    character_of(&r.f, &r.g)
}

/// `gamma` of `f` with the Dehn partner, from matrices.
pub fn dehn_matrix_gamma(pt: &DehnFamilyPoint) -> Complex {
    gamma(&pt.f_p, &pt.h_p)
}
