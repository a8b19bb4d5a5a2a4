use std::fmt::Debug;

use moduli_core::characters::{dihedral_check, PrincipalCharacter, SlicePoint};
use moduli_core::complex::{real, Complex};
use moduli_core::config::Config;
use moduli_core::dynamics::{iterate, scan_slice, OrbitParams, Window};
use moduli_core::families::{canonicalize_pair, dehn_surgery_point, figure_eight_generators, realize};
use moduli_core::filter::discreteness_filter;
use moduli_core::moebius::{classify, complex_distance, MoebiusMap};
use moduli_core::tables::exceptional_tables;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn check<T: Serialize + DeserializeOwned + PartialEq + Debug>(x: &T) -> String {
    let s = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, x, "{s}");
    s
}

#[test]
fn matrices_are_row_major_arrays() {
    let m = MoebiusMap::new(real(2.0), Complex::new(0.5, -1.0), real(0.0), real(0.5)).unwrap();
    let s = check(&m);
    assert!(s.starts_with(r#"[{"re":2.0,"im":0.0},{"re":0.5,"im":-1.0}"#), "{s}");
    // determinant is validated on the way in
    assert!(serde_json::from_str::<MoebiusMap>(
        r#"[{"re":2,"im":0},{"re":0,"im":0},{"re":0,"im":0},{"re":2,"im":0}]"#
    )
    .is_err());
}

#[test]
fn library_values_roundtrip() {
    let cfg = Config::default();
    let ch = PrincipalCharacter::new(Complex::new(0.1 + 1e-17, 1.0 / 3.0), real(-3.0), Complex::new(2.5, -0.25));
    check(&ch);
    check(&cfg);
    for e in exceptional_tables(20) {
        check(&e);
        check(&discreteness_filter(&e.character, &cfg));
    }
    for (g, b) in [(0.3, 0.2), (0.05, 1.0), (1.15, 0.01)] {
        check(&discreteness_filter(&PrincipalCharacter::from_real(g, b, -4.0), &cfg));
    }
    check(&dihedral_check(&PrincipalCharacter::from_real(2.25, 2.25, -4.0), 1e-9, 200));
    let (f, g) = figure_eight_generators();
    check(&classify(&f, 1e-9, 200));
    check(&classify(&g.conjugate_by(&f), 1e-9, 200));
    check(&canonicalize_pair(&g, &f, 1e-9).unwrap());
    check(&complex_distance(&ch, 1e-9).unwrap());
    let pt = SlicePoint::new(Complex::new(1.5, -2.0), Complex::new(-0.3, 0.7));
    check(&pt);
    check(&realize(&pt, 1e-9));
    check(&dehn_surgery_point(11).unwrap());
    let word = "QPP".parse().unwrap();
    check(&iterate(pt.beta, pt.gamma, &word, &OrbitParams::from_config(pt.beta, &cfg)));
    let small = Config { threads: 1, ..cfg };
    check(&scan_slice(real(0.0), Window::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 3, 2, &small).unwrap());
}
