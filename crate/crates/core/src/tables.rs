//! Principal characters of the two-generator elementary discrete groups with `gamma != 0`.
//!
//! Rows of the three finite tables are stored as the data they are generated
//! from (orders, rotation numbers, `sin^2` of the axis angle) alongside the
//! closed-form character printed for them, so that each row can be checked
//! against `gamma = -beta beta~ sin^2(theta) / 4`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::characters::PrincipalCharacter;
use crate::config::DEFAULT_P_MAX;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupName {
    A4,
    S4,
    A5,
    Dihedral(u32),
    Euclidean,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::A4 => write!(f, "A4"),
            GroupName::S4 => write!(f, "S4"),
            GroupName::A5 => write!(f, "A5"),
            GroupName::Dihedral(p) => write!(f, "D{p}"),
            GroupName::Euclidean => write!(f, "Euclidean"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    /// Generators of orders `p` and 2.
    One,
    /// Orders `p` and 3.
    Two,
    /// Orders (4,4) and (5,5).
    Three,
    DihedralFamily,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::One => write!(f, "1"),
            TableId::Two => write!(f, "2"),
            TableId::Three => write!(f, "3"),
            TableId::DihedralFamily => write!(f, "dihedral-family"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalEntry {
    pub character: PrincipalCharacter,
    pub group_name: GroupName,
    /// Orders of `(f, g)`.
    pub orders: (u32, u32),
    /// Rotation numbers `(k_f, k_g)` with `beta = -4 sin^2(k pi / order)`.
    pub rotations: (u32, u32),
    pub sin2_theta: f64,
    pub table_id: TableId,
}

impl fmt::Display for ExceptionalEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.character;
        write!(
            f,
            "({},{},{}) {}",
            c.gamma.re, c.beta.re, c.beta_tilde.re, self.group_name
        )
    }
}

/// One printed row: generating data plus the closed-form character.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub table_id: TableId,
    pub group_name: GroupName,
    pub order_g: u32,
    pub order_f: u32,
    pub k_f: u32,
    pub k_g: u32,
    pub sin2_theta: f64,
    pub printed: PrincipalCharacter,
}

/// The 13 + 7 + 4 rows of the finite tables.
pub fn table_rows() -> Vec<TableRow> {
    use GroupName::*;
    use TableId::*;
    let r5 = 5f64.sqrt();
    let g_a = (r5 - 3.0) / 2.0; // (sqrt5 - 3)/2
    let g_b = -(3.0 + r5) / 2.0; // -(3 + sqrt5)/2
    let b5 = (r5 - 5.0) / 2.0; // -4 sin^2(pi/5)
    let b5k2 = -(5.0 + r5) / 2.0; // -4 sin^2(2pi/5)

    #[allow(clippy::too_many_arguments)]
    fn row(
        table_id: TableId,
        group_name: GroupName,
        order_g: u32,
        order_f: u32,
        k_f: u32,
        k_g: u32,
        sin2_theta: f64,
        printed: (f64, f64, f64),
    ) -> TableRow {
        TableRow {
            table_id,
            group_name,
            order_g,
            order_f,
            k_f,
            k_g,
            sin2_theta,
            printed: PrincipalCharacter::from_real(printed.0, printed.1, printed.2),
        }
    }

    vec![
        row(One, A4, 2, 3, 1, 1, 2.0 / 3.0, (-2.0, -3.0, -4.0)),
        row(One, S4, 2, 3, 1, 1, 1.0 / 3.0, (-1.0, -3.0, -4.0)),
        row(One, A5, 2, 3, 1, 1, (3.0 - r5) / 6.0, (g_a, -3.0, -4.0)),
        row(One, A5, 2, 3, 1, 1, (3.0 + r5) / 6.0, (g_b, -3.0, -4.0)),
        row(One, Dihedral(3), 2, 3, 1, 1, 1.0, (-3.0, -3.0, -4.0)),
        row(One, S4, 2, 4, 1, 1, 0.5, (-1.0, -2.0, -4.0)),
        row(One, Dihedral(4), 2, 4, 1, 1, 1.0, (-2.0, -2.0, -4.0)),
        row(One, A5, 2, 5, 1, 1, (5.0 - r5) / 10.0, (g_a, b5, -4.0)),
        row(One, A5, 2, 5, 2, 1, (5.0 - r5) / 10.0, (-1.0, b5k2, -4.0)),
        row(One, A5, 2, 5, 1, 1, (5.0 + r5) / 10.0, (-1.0, b5, -4.0)),
        row(One, A5, 2, 5, 2, 1, (5.0 + r5) / 10.0, (g_b, b5k2, -4.0)),
        row(One, Dihedral(5), 2, 5, 1, 1, 1.0, (b5, b5, -4.0)),
        row(One, Dihedral(5), 2, 5, 2, 1, 1.0, (b5k2, b5k2, -4.0)),
        row(Two, A5, 3, 3, 1, 1, 4.0 / 9.0, (-1.0, -3.0, -3.0)),
        row(Two, A4, 3, 3, 1, 1, 8.0 / 9.0, (-2.0, -3.0, -3.0)),
        row(Two, S4, 3, 4, 1, 1, 2.0 / 3.0, (-1.0, -2.0, -3.0)),
        row(Two, A5, 3, 5, 1, 1, (10.0 - 2.0 * r5) / 15.0, (g_a, b5, -3.0)),
        row(Two, A5, 3, 5, 2, 1, (10.0 - 2.0 * r5) / 15.0, (-1.0, b5k2, -3.0)),
        row(Two, A5, 3, 5, 1, 1, (10.0 + 2.0 * r5) / 15.0, (-1.0, b5, -3.0)),
        row(Two, A5, 3, 5, 2, 1, (10.0 + 2.0 * r5) / 15.0, (g_b, b5k2, -3.0)),
        row(Three, S4, 4, 4, 1, 1, 1.0, (-1.0, -2.0, -2.0)),
        row(Three, A5, 5, 5, 1, 1, 0.8, (g_a, b5, b5)),
        row(Three, A5, 5, 5, 2, 1, 0.8, (-1.0, b5k2, b5)),
        row(Three, A5, 5, 5, 2, 2, 0.8, (g_b, b5k2, b5k2)),
    ]
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn rotation_beta(k: u32, order: u32) -> Result<f64> {
    if order < 2 || k == 0 || k >= order || gcd(k, order) != 1 {
        return Err(Error::InvalidRotation { k, order });
    }
    Ok(-4.0 * (k as f64 * PI / order as f64).sin().powi(2))
}

/// Character of elliptics of orders `order_f`, `order_g` whose axes meet at angle `theta`.
///
/// Arguments follow the tables' headings: the fixed order (the `g` generator,
/// in the third slot) comes first, the row order `p` (the `f` generator) second.
pub fn regenerate_table_entry(
    order_g: u32,
    order_f: u32,
    sin2_theta: f64,
    k_f: u32,
    k_g: u32,
) -> Result<PrincipalCharacter> {
    if !(0.0..=1.0).contains(&sin2_theta) {
        return Err(Error::InvalidSin2(sin2_theta));
    }
    let b = rotation_beta(k_f, order_f)?;
    let bt = rotation_beta(k_g, order_g)?;
    Ok(PrincipalCharacter::from_real(-b * bt * sin2_theta / 4.0, b, bt))
}

/// All exceptional characters: table rows (as printed) followed by both dihedral families up to `p_max`.
pub fn exceptional_tables(p_max: u32) -> Vec<ExceptionalEntry> {
    let mut out: Vec<ExceptionalEntry> = table_rows()
        .into_iter()
        .map(|r| ExceptionalEntry {
            character: r.printed,
            group_name: r.group_name,
            orders: (r.order_f, r.order_g),
            rotations: (r.k_f, r.k_g),
            sin2_theta: r.sin2_theta,
            table_id: r.table_id,
        })
        .collect();

    // two involutions whose axes meet at angle k pi / p
    for p in 2..=p_max {
        for k in (1..=p / 2).filter(|&k| gcd(k, p) == 1) {
            let s2 = (k as f64 * PI / p as f64).sin().powi(2);
            out.push(ExceptionalEntry {
                character: PrincipalCharacter::from_real(-4.0 * s2, -4.0, -4.0),
                group_name: GroupName::Dihedral(p),
                orders: (2, 2),
                rotations: (1, 1),
                sin2_theta: s2,
                table_id: TableId::DihedralFamily,
            });
        }
    }
    // order p and an involution with perpendicular axes
    for p in 3..=p_max {
        let b = -4.0 * (PI / p as f64).sin().powi(2);
        out.push(ExceptionalEntry {
            character: PrincipalCharacter::from_real(b, b, -4.0),
            group_name: GroupName::Dihedral(p),
            orders: (p, 2),
            rotations: (1, 1),
            sin2_theta: 1.0,
            table_id: TableId::DihedralFamily,
        });
    }
    out
}

/// Exceptional entries indexed by `Re gamma` for fast matching.
#[derive(Debug, Clone)]
pub struct ExceptionalSet {
    entries: Vec<ExceptionalEntry>,
    by_gamma: Vec<(f64, usize)>,
}

impl ExceptionalSet {
    pub fn new(p_max: u32) -> Self {
        let entries = exceptional_tables(p_max);
        let mut by_gamma: Vec<(f64, usize)> = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.character.gamma.re, i))
            .collect();
        by_gamma.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        ExceptionalSet { entries, by_gamma }
    }

    /// Process-wide cached set for `p_max`.
    pub fn shared(p_max: u32) -> Arc<ExceptionalSet> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ExceptionalSet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(p_max)
            .or_insert_with(|| Arc::new(ExceptionalSet::new(p_max)))
            .clone()
    }

    pub fn entries(&self) -> &[ExceptionalEntry] {
        &self.entries
    }

    /// First entry (in table order) matching `ch` within `tol`, either generator order.
    pub fn find(&self, ch: &PrincipalCharacter, tol: f64) -> Option<&ExceptionalEntry> {
        if !ch.is_finite() {
            return None;
        }
        let lo = self.by_gamma.partition_point(|&(g, _)| g < ch.gamma.re - tol);
        self.by_gamma[lo..]
            .iter()
            .take_while(|&&(g, _)| g <= ch.gamma.re + tol)
            .map(|&(_, i)| i)
            .filter(|&i| self.entries[i].character.matches(ch, tol))
            .min()
            .map(|i| &self.entries[i])
    }
}

/// Matches against the exceptional set with the default `p_max`.
pub fn match_exceptional(ch: &PrincipalCharacter, tol: f64) -> Option<ExceptionalEntry> {
    ExceptionalSet::shared(DEFAULT_P_MAX).find(ch, tol).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{real, Complex};

    #[test]
    fn table_sizes() {
        let rows = table_rows();
        let count = |t| rows.iter().filter(|r| r.table_id == t).count();
        assert_eq!((count(TableId::One), count(TableId::Two), count(TableId::Three)), (13, 7, 4));
    }

    #[test]
    fn rows_regenerate() {
        for r in table_rows() {
            let regen = regenerate_table_entry(r.order_g, r.order_f, r.sin2_theta, r.k_f, r.k_g).unwrap();
            assert!(regen.max_distance(&r.printed) < 1e-12, "{r:?} vs {regen:?}");
        }
    }

    #[test]
    fn regenerate_examples() {
        let c = regenerate_table_entry(2, 3, 2.0 / 3.0, 1, 1).unwrap();
        assert!(c.max_distance(&PrincipalCharacter::from_real(-2.0, -3.0, -4.0)) < 1e-12);
        let c = regenerate_table_entry(2, 4, 0.5, 1, 1).unwrap();
        assert!(c.max_distance(&PrincipalCharacter::from_real(-1.0, -2.0, -4.0)) < 1e-12);
        let c = regenerate_table_entry(3, 3, 8.0 / 9.0, 1, 1).unwrap();
        assert!(c.max_distance(&PrincipalCharacter::from_real(-2.0, -3.0, -3.0)) < 1e-12);
    }

    #[test]
    fn regenerate_rejects_bad_rotations() {
        assert_eq!(regenerate_table_entry(2, 4, 0.5, 2, 1).unwrap_err(), Error::InvalidRotation { k: 2, order: 4 });
        assert!(regenerate_table_entry(1, 3, 0.5, 1, 1).is_err());
        assert!(regenerate_table_entry(2, 3, 0.5, 0, 1).is_err());
        assert!(regenerate_table_entry(2, 3, 0.5, 3, 1).is_err());
        assert_eq!(regenerate_table_entry(2, 3, 1.5, 1, 1).unwrap_err(), Error::InvalidSin2(1.5));
    }

    #[test]
    fn contains_named_rows() {
        let all = exceptional_tables(200);
        let has = |g, b, bt, name| {
            all.iter().any(|e| {
                e.group_name == name && e.character.max_distance(&PrincipalCharacter::from_real(g, b, bt)) < 1e-12
            })
        };
        assert!(has(-2.0, -3.0, -4.0, GroupName::A4));
        assert!(has(-1.0, -2.0, -2.0, GroupName::S4));
        assert!(has(-4.0, -4.0, -4.0, GroupName::Dihedral(2)));
    }

    #[test]
    fn angle_identity_holds_for_every_entry() {
        for e in exceptional_tables(60) {
            let c = e.character;
            let want = -c.beta * c.beta_tilde * e.sin2_theta / 4.0;
            assert!((c.gamma - want).norm() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn match_examples() {
        let m = |g, b, bt| match_exceptional(&PrincipalCharacter::from_real(g, b, bt), 1e-9);
        assert_eq!(m(-2.0, -3.0, -4.0).unwrap().group_name, GroupName::A4);
        assert_eq!(m(-4.0, -3.0, -2.0), None);
        let d3 = m(-3.0, -4.0, -3.0).unwrap();
        assert_eq!(d3.group_name, GroupName::Dihedral(3));
        assert_eq!(d3.table_id, TableId::One);
        assert_eq!(m(-3.0, -3.0, -4.0).unwrap(), d3);
    }

    #[test]
    fn match_is_idempotent_and_symmetric() {
        let set = ExceptionalSet::new(40);
        for e in set.entries() {
            let hit = set.find(&e.character, 1e-9).unwrap();
            assert_eq!(set.find(&hit.character, 1e-9).unwrap(), hit);
            assert_eq!(set.find(&e.character.swapped(), 1e-9).unwrap(), hit);
        }
    }

    #[test]
    fn match_rejects_complex_and_nonfinite() {
        let ch = PrincipalCharacter::new(Complex::new(-2.0, 1e-3), real(-3.0), real(-4.0));
        assert_eq!(match_exceptional(&ch, 1e-9), None);
        let ch = PrincipalCharacter::new(Complex::new(f64::NAN, 0.0), real(-3.0), real(-4.0));
        assert_eq!(match_exceptional(&ch, 1e-9), None);
    }

    #[test]
    fn display_row() {
        let e = match_exceptional(&PrincipalCharacter::from_real(-2.0, -3.0, -4.0), 1e-9).unwrap();
        assert_eq!(e.to_string(), "(-2,-3,-4) A4");
    }
}
