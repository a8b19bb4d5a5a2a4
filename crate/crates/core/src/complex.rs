//! Complex scalars and the conventions shared by every module.
//!
//! All square roots are principal: the branch cut lies on the negative real
//! axis, the root has nonnegative real part, and a negative real input maps
//! to `+i * sqrt(|x|)` regardless of the sign of its zero imaginary part.

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Principal square root with `-0.0` imaginary parts folded to `+0.0`.
#[inline]
pub fn principal_sqrt(z: Complex) -> Complex {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex::new(z.re, im).sqrt()
}

#[inline]
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, `a+i`, and `j` in place of `i`).
pub fn parse_complex(s: &str) -> Result<Complex> {
    let cleaned: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    if cleaned.is_empty() {
        return Err(bad());
    }
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let coeff = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => num(t),
        }
    };

    let Some(body) = cleaned.strip_suffix(['i', 'j']) else {
        return Ok(real(num(&cleaned)?));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex::new(num(&body[..k])?, coeff(&body[k..])?)),
        None => Ok(Complex::new(0.0, coeff(body)?)),
    }
}

/// Renders `z` as `a+bi` with 17 significant digits per component.
pub fn format_complex(z: Complex) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Serde adapter writing complex numbers as `{"re": .., "im": ..}`.
pub mod serde_reim {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    impl From<Complex> for ReIm {
        fn from(z: Complex) -> Self {
            ReIm { re: z.re, im: z.im }
        }
    }

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        ReIm::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex::new(v.re, v.im))
    }

    pub mod seq {
        use super::{Complex, ReIm};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(zs: &[Complex], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<ReIm> = zs.iter().copied().map(ReIm::from).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex>, D::Error> {
            let v = Vec::<ReIm>::deserialize(d)?;
            Ok(v.into_iter().map(|r| Complex::new(r.re, r.im)).collect())
        }
    }

    pub mod array4 {
        use super::{Complex, ReIm};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(zs: &[Complex; 4], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<ReIm> = zs.iter().copied().map(ReIm::from).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex; 4], D::Error> {
            let v = Vec::<ReIm>::deserialize(d)?;
            if v.len() != 4 {
                return Err(serde::de::Error::invalid_length(v.len(), &"4 matrix entries"));
            }
            let mut out = [Complex::new(0.0, 0.0); 4];
            for (slot, r) in out.iter_mut().zip(v) {
                *slot = Complex::new(r.re, r.im);
            }
            Ok(out)
        }
    }
}
