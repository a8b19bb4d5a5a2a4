//! The polynomial semigroup generated by `p(z) = z(z - beta)` and `q(z) = z(1 + beta - z)^2`
//! acting on the commutator parameter of the slice `(gamma, beta, -4)`.
//!
//! `p` is the identity `gamma(f, g f g^-1) = gamma (gamma - beta)` and `q` is
//! `gamma(f, g f g^-1 f g) = gamma (1 + beta - gamma)^2`. Every word in `{P, Q}`
//! is treated as a trace identity of some group element, so an orbit of any word
//! that accumulates at 0 without landing on it is evidence against discreteness.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::PrincipalCharacter;
use crate::complex::{serde_reim, Complex, ZERO};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::filter::{discreteness_filter_with, Verdict};
use crate::tables::ExceptionalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    P,
    Q,
}

impl Letter {
    pub fn apply(self, beta: Complex, z: Complex) -> Complex {
        match self {
            Letter::P => p_apply(beta, z),
            Letter::Q => q_apply(beta, z),
        }
    }

    /// Derivative at the fixed point 0: `-beta` for `p`, `(1 + beta)^2` for `q`.
    pub fn multiplier_at_zero(self, beta: Complex) -> Complex {
        match self {
            Letter::P => -beta,
            Letter::Q => (1.0 + beta) * (1.0 + beta),
        }
    }

    /// Rounding-error scale of one application at `z`; results at or below it are numerically zero.
    fn zero_floor(self, bn: f64, zn: f64) -> f64 {
        const SLACK: f64 = 64.0 * f64::EPSILON;
        match self {
            Letter::P => SLACK * zn * (zn + bn),
            Letter::Q => SLACK * zn * (1.0 + bn + zn).powi(2),
        }
    }
}

pub fn p_apply(beta: Complex, z: Complex) -> Complex {
    z * (z - beta)
}

pub fn q_apply(beta: Complex, z: Complex) -> Complex {
    let w = 1.0 + beta - z;
    z * w * w
}

/// A word over `{P, Q}`, applied left to right and repeated cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// False when the word is a power `u^k`, `k > 1`, of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        !(1..n).any(|d| n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]))
    }

    /// Multiplier of the full word at 0. Orbits can only converge to 0 when its modulus is below 1.
    pub fn multiplier_at_zero(&self, beta: Complex) -> Complex {
        self.0.iter().map(|l| l.multiplier_at_zero(beta)).product()
    }

    /// All words of length `n` in lexicographic order (`P < Q`).
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        (0u64..1 << n).map(move |bits| {
            Word(
                (0..n)
                    .map(|i| {
                        if bits >> (n - 1 - i) & 1 == 0 {
                            Letter::P
                        } else {
                            Letter::Q
                        }
                    })
                    .collect(),
            )
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::P => "P",
                Letter::Q => "Q",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let letters = s
            .chars()
            .map(|c| match c {
                'P' | 'p' => Ok(Letter::P),
                'Q' | 'q' => Ok(Letter::Q),
                _ => Err(Error::Parse(format!("word letters must be P or Q, got {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitOutcome {
    ConvergedToZero,
    /// Landed on zero up to the rounding error of the last step.
    HitZeroExactly,
    Escaped,
    Cyclic,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    #[serde(with = "serde_reim")]
    pub beta: Complex,
    pub word: Word,
    /// `values[0]` is the starting gamma; `values[n+1]` is letter `n mod len` applied to `values[n]`.
    #[serde(with = "serde_reim::seq")]
    pub values: Vec<Complex>,
    pub outcome: OrbitOutcome,
}

/// Orbit limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    pub max_iter: usize,
    pub escape: f64,
    pub zero_eps: f64,
    pub cycle_window: usize,
}

/// Radius `max(2, |beta| + 2)` beyond which `|p(z)| >= 2|z|`.
pub fn escape_threshold(beta: Complex) -> f64 {
    (beta.norm() + 2.0).max(2.0)
}

impl OrbitParams {
    pub fn from_config(beta: Complex, config: &Config) -> Self {
        OrbitParams {
            max_iter: config.max_iter,
            escape: escape_threshold(beta),
            zero_eps: config.zero_eps,
            cycle_window: config.cycle_window,
        }
    }
}

const CONVERGENCE_TAIL: usize = 5;
const CYCLE_RADIUS: f64 = 1e-12;

/// Iterates `word` cyclically from `gamma0` until one of the stopping rules fires.
pub fn iterate(beta: Complex, gamma0: Complex, word: &Word, params: &OrbitParams) -> OrbitRecord {
    let mut values = Vec::with_capacity(64);
    values.push(gamma0);
    let (outcome, _, _) = run_orbit(beta, gamma0, word, params, |z| values.push(z));
    OrbitRecord {
        beta,
        word: word.clone(),
        values,
        outcome,
    }
}

/// Stopping rules shared by [`iterate`] and the search. `visit` sees every value after the first.
/// Returns the outcome, the last value and the number of letters applied.
fn run_orbit(
    beta: Complex,
    gamma0: Complex,
    word: &Word,
    params: &OrbitParams,
    mut visit: impl FnMut(Complex),
) -> (OrbitOutcome, Complex, usize) {
    assert!(!word.is_empty(), "iterate needs a non-empty word");
    if gamma0 == ZERO {
        return (OrbitOutcome::HitZeroExactly, gamma0, 0);
    }
    let len = word.len();
    let passes = (params.cycle_window / len).max(1);
    // values at the start of the most recent passes, newest last
    let mut history: VecDeque<Complex> = VecDeque::with_capacity(passes + 1);
    history.push_back(gamma0);
    // near a repelling 0 a small value is a transit, not convergence
    let attracting = word.multiplier_at_zero(beta).norm() < 1.0;
    let bn = beta.norm();
    let mut descending = 1usize;
    let (mut z, mut zn) = (gamma0, gamma0.norm());
    for n in 0..params.max_iter {
        let letter = word.0[n % len];
        let next = letter.apply(beta, z);
        visit(next);
        let steps = n + 1;
        let m = next.norm_sqr().sqrt();

        if !m.is_finite() || m > params.escape {
            return (OrbitOutcome::Escaped, next, steps);
        }
        if m <= letter.zero_floor(bn, zn) {
            return (OrbitOutcome::HitZeroExactly, next, steps);
        }
        descending = if m < zn { descending + 1 } else { 1 };
        (z, zn) = (next, m);
        if attracting && m < params.zero_eps && descending >= CONVERGENCE_TAIL {
            return (OrbitOutcome::ConvergedToZero, next, steps);
        }
        // a true cycle revisits a value at the same position in the word,
        // so comparing at the start of each pass finds it within one pass
        if steps % len == 0 {
            if history.iter().any(|h| (h - next).norm_sqr() < CYCLE_RADIUS * CYCLE_RADIUS) {
                return (OrbitOutcome::Cyclic, next, steps);
            }
            if history.len() == passes {
                history.pop_front();
            }
            history.push_back(next);
        }
    }
    (OrbitOutcome::MaxIterations, z, params.max_iter)
}

/// Evidence that the commutator traces accumulate at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub word: Word,
    #[serde(with = "serde_reim")]
    pub final_value: Complex,
    pub steps: usize,
}

pub fn orbit_verdict(rec: &OrbitRecord) -> Option<Certificate> {
    (rec.outcome == OrbitOutcome::ConvergedToZero).then(|| Certificate {
        word: rec.word.clone(),
        final_value: *rec.values.last().expect("orbit has a start value"),
        steps: rec.values.len() - 1,
    })
}

/// Breadth-first search over words up to `max_depth`; first certificate in (length, lexicographic) order.
///
/// Proper powers are skipped: they generate the same orbit as their root.
pub fn semigroup_search(
    beta: Complex,
    gamma0: Complex,
    max_depth: usize,
    params: &OrbitParams,
) -> Option<Certificate> {
    (1..=max_depth)
        .flat_map(Word::all_of_length)
        .filter(Word::is_primitive)
        .find_map(|word| match run_orbit(beta, gamma0, &word, params, |_| {}) {
            (OrbitOutcome::ConvergedToZero, final_value, steps) => Some(Certificate {
                word,
                final_value,
                steps,
            }),
            _ => None,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PixelClass {
    NotKleinianJorgensen,
    OrbitCertificate,
    Exceptional,
    Inconclusive,
}

impl PixelClass {
    /// Gray level used in PGM output.
    pub fn gray(self) -> u8 {
        match self {
            PixelClass::NotKleinianJorgensen => 0,
            PixelClass::OrbitCertificate => 85,
            PixelClass::Exceptional => 170,
            PixelClass::Inconclusive => 255,
        }
    }

    pub fn from_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::NotKleinian(_) => PixelClass::NotKleinianJorgensen,
            Verdict::LikelyNotDiscrete(_) => PixelClass::OrbitCertificate,
            Verdict::ElementaryMatch(_) => PixelClass::Exceptional,
            Verdict::Inconclusive => PixelClass::Inconclusive,
        }
    }
}

impl fmt::Display for PixelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let w = Window {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        let ok = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite())
            && re_max > re_min
            && im_max > im_min;
        if !ok {
            return Err(Error::InvalidConfig(format!("degenerate window {w:?}")));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Raster {
    #[serde(with = "serde_reim")]
    pub beta: Complex,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    /// Row-major, row 0 at the top (largest imaginary part).
    pub cells: Vec<PixelClass>,
}

impl Raster {
    /// Center of pixel `(x, y)`.
    pub fn pixel_center(&self, x: usize, y: usize) -> Complex {
        pixel_center(&self.window, self.width, self.height, x, y)
    }

    pub fn get(&self, x: usize, y: usize) -> PixelClass {
        self.cells[y * self.width + x]
    }
}

fn pixel_center(w: &Window, width: usize, height: usize, x: usize, y: usize) -> Complex {
    let dx = (w.re_max - w.re_min) / width as f64;
    let dy = (w.im_max - w.im_min) / height as f64;
    Complex::new(
        w.re_min + (x as f64 + 0.5) * dx,
        w.im_max - (y as f64 + 0.5) * dy,
    )
}

/// Classifies each pixel center `gamma` of the slice `(gamma, beta, -4)`.
///
/// Pixels are independent and collected by index, so the result does not
/// depend on `config.threads`.
pub fn scan_slice(
    beta: Complex,
    window: Window,
    width: usize,
    height: usize,
    config: &Config,
) -> Result<Raster> {
    config.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidConfig("raster size must be at least 1x1".into()));
    }
    let window = Window::new(window.re_min, window.re_max, window.im_min, window.im_max)?;
    let set = ExceptionalSet::shared(config.p_max);
    let classify = |i: usize| {
        let gamma = pixel_center(&window, width, height, i % width, i / width);
        let ch = PrincipalCharacter::new(gamma, beta, Complex::new(-4.0, 0.0));
        PixelClass::from_verdict(&discreteness_filter_with(&ch, config, &set).verdict)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let cells = pool.install(|| (0..width * height).into_par_iter().map(classify).collect());
    Ok(Raster {
        beta,
        window,
        width,
        height,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::real;
    use proptest::prelude::*;

    fn params(beta: Complex) -> OrbitParams {
        OrbitParams::from_config(beta, &Config::default())
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_apply(ZERO, real(2.0)), real(4.0));
        let b = Complex::new(0.3, -1.2);
        assert_eq!(p_apply(b, b), ZERO);
        assert_eq!(p_apply(real(-3.0), real(-2.0)), real(-2.0));
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_apply(real(1.7), ZERO), ZERO);
        let b = Complex::new(0.3, -1.2);
        assert_eq!(q_apply(b, 1.0 + b), ZERO);
        assert_eq!(q_apply(ZERO, real(2.0)), real(2.0));
    }

    #[test]
    fn iterate_examples() {
        let r = iterate(ZERO, real(2.0), &word("P"), &params(ZERO));
        assert_eq!(r.outcome, OrbitOutcome::Escaped);
        assert_eq!(r.values, vec![real(2.0), real(4.0)]);

        let r = iterate(ZERO, real(0.5), &word("P"), &params(ZERO));
        assert_eq!(r.outcome, OrbitOutcome::ConvergedToZero);
        assert_eq!(&r.values[..4], &[real(0.5), real(0.25), real(0.0625), real(0.00390625)]);

        let r = iterate(real(-3.0), real(-2.0), &word("P"), &params(real(-3.0)));
        assert_eq!(r.outcome, OrbitOutcome::Cyclic);
        assert!(r.values.iter().all(|&v| v == real(-2.0)));

        let b = Complex::new(0.4, 0.2);
        let r = iterate(b, b, &word("P"), &params(b));
        assert_eq!(r.outcome, OrbitOutcome::HitZeroExactly);
        assert_eq!(r.values, vec![b, ZERO]);
    }

    #[test]
    fn iterate_respects_max_iter() {
        // |z| = 1 rotates forever under squaring
        let z = Complex::from_polar(1.0, 1.0);
        let p = OrbitParams { max_iter: 50, ..params(ZERO) };
        let r = iterate(ZERO, z, &word("P"), &p);
        assert_eq!(r.outcome, OrbitOutcome::MaxIterations);
        assert_eq!(r.values.len(), 51);
    }

    #[test]
    fn values_follow_the_word() {
        let b = Complex::new(-0.5, 0.3);
        let w = word("PQQ");
        let r = iterate(b, Complex::new(0.9, 0.8), &w, &params(b));
        for (n, pair) in r.values.windows(2).enumerate() {
            assert_eq!(pair[1], w.0[n % 3].apply(b, pair[0]));
        }
    }

    #[test]
    fn cancellation_to_zero_is_not_convergence() {
        // 1 + beta - gamma cancels to rounding noise; q then contracts by (1+beta)^2 < 1
        let r5 = 5f64.sqrt();
        let (g, b) = (real((r5 - 3.0) / 2.0), real((r5 - 5.0) / 2.0));
        let r = iterate(b, g, &word("Q"), &params(b));
        assert_eq!(r.outcome, OrbitOutcome::HitZeroExactly);
        assert!(orbit_verdict(&r).is_none());
    }

    #[test]
    fn repelling_zero_is_never_convergence() {
        // beta = -4: p is conjugate to x^2 - 2 on the real segment and 0 repels with multiplier 4
        let b = real(-4.0);
        assert!((word("P").multiplier_at_zero(b) - real(4.0)).norm() < 1e-15);
        let r = iterate(b, real(-4.0 + 1e-9), &word("P"), &params(b));
        assert_ne!(r.outcome, OrbitOutcome::ConvergedToZero);
        assert!(r.values.iter().any(|v| v.norm() < 1e-6));
        assert!(semigroup_search(b, real((5f64.sqrt() - 3.0) / 2.0), 8, &params(b)).is_none());
    }

    #[test]
    fn verdict_only_for_convergence() {
        let conv = iterate(ZERO, real(0.5), &word("P"), &params(ZERO));
        let cert = orbit_verdict(&conv).unwrap();
        assert_eq!(cert.word, word("P"));
        assert!(cert.final_value.norm() < 1e-6);
        let esc = iterate(ZERO, real(2.0), &word("P"), &params(ZERO));
        assert!(orbit_verdict(&esc).is_none());
        let hit = iterate(real(0.4), real(0.4), &word("P"), &params(real(0.4)));
        assert!(orbit_verdict(&hit).is_none());
    }

    #[test]
    fn search_examples() {
        let c = semigroup_search(ZERO, real(0.5), 8, &params(ZERO)).unwrap();
        assert_eq!(c.word, word("P"));
        assert!(semigroup_search(real(-3.0), real(-2.0), 8, &params(real(-3.0))).is_none());
        let w = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(semigroup_search(ZERO, w, 8, &params(ZERO)).is_none());
    }

    #[test]
    fn search_prefers_short_words() {
        // P escapes from 1.2; Q maps it inside the unit disk where P contracts
        let z = real(1.2);
        let c = semigroup_search(ZERO, z, 8, &params(ZERO)).unwrap();
        assert!(c.word.len() >= 2);
        for n in 1..c.word.len() {
            for w in Word::all_of_length(n) {
                assert!(orbit_verdict(&iterate(ZERO, z, &w, &params(ZERO))).is_none());
            }
        }
    }

    #[test]
    fn words_enumerate_lexicographically() {
        let ws: Vec<String> = Word::all_of_length(2).map(|w| w.to_string()).collect();
        assert_eq!(ws, ["PP", "PQ", "QP", "QQ"]);
        assert!("PXQ".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!(word("PQP").is_primitive());
        assert!(!word("PQPQ").is_primitive());
        assert!(!word("PPP").is_primitive());
        assert!(word("Q").is_primitive());
    }

    #[test]
    fn orbit_record_json_roundtrip() {
        let r = iterate(ZERO, Complex::new(0.5, 0.1), &word("PQ"), &params(ZERO));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains(r#""word":"PQ""#));
        assert_eq!(serde_json::from_str::<OrbitRecord>(&s).unwrap(), r);
    }

    #[test]
    fn scan_examples() {
        let cfg = Config { threads: 2, ..Config::default() };
        let r = scan_slice(ZERO, Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 4, 4, &cfg).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                if r.pixel_center(x, y).norm() < 1.0 {
                    assert_eq!(r.get(x, y), PixelClass::NotKleinianJorgensen);
                }
            }
        }
        // a single pixel centered at gamma = -2 on the beta = -3 slice
        let r = scan_slice(real(-3.0), Window::new(-2.5, -1.5, -0.5, 0.5).unwrap(), 1, 1, &cfg).unwrap();
        assert_eq!(r.pixel_center(0, 0), real(-2.0));
        assert_eq!(r.cells, vec![PixelClass::Exceptional]);
        // gamma = 2 + 2i escapes under every short word
        let r = scan_slice(ZERO, Window::new(1.5, 2.5, 1.5, 2.5).unwrap(), 1, 1, &cfg).unwrap();
        assert_eq!(r.cells, vec![PixelClass::Inconclusive]);
    }

    #[test]
    fn scan_rejects_degenerate_input() {
        let cfg = Config::default();
        assert!(Window::new(1.0, 1.0, 0.0, 1.0).is_err());
        let w = Window::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(scan_slice(ZERO, w, 0, 3, &cfg).is_err());
    }

    proptest! {
        #[test]
        fn escape_bound(re in -50.0f64..50.0, im in -50.0f64..50.0, r in 0.0f64..10.0, t in 0.0f64..6.3) {
            let beta = Complex::new(re, im) / 10.0;
            let z = Complex::from_polar(escape_threshold(beta) + r, t);
            prop_assert!(p_apply(beta, z).norm() >= 2.0 * z.norm() * (1.0 - 1e-15));
        }
    }
}
