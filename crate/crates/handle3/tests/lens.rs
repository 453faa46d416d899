use handle3::lens::{
    admits_seifert_over_rp2, core_isotopy_criterion, diffeotopy_group, hyperelliptic_realizable, is_homeomorphic,
    normalize, torus_knot_is_core, GeneratorTag, GroupKind, LensError,
};
use handle3::ManifoldForm;
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn all_lens(max_p: u64) -> Vec<ManifoldForm> {
    (2..=max_p)
        .flat_map(|p| (1..p).filter(move |&q| gcd(p, q) == 1).map(move |q| ManifoldForm::Lens { p, q }))
        .collect()
}

/// The classical orbit `{±q, ±q^-1} mod p`, with the inverse found by search.
fn orbit(p: u64, q: u64) -> Vec<u64> {
    let inv = (1..p).find(|x| (q * x) % p == 1).unwrap();
    let mut v = vec![q, p - q, inv, p - inv];
    v.sort();
    v.dedup();
    v
}

#[test]
fn normalize_picks_orbit_minimum() {
    for m in all_lens(60) {
        let ManifoldForm::Lens { p, q } = m else { unreachable!() };
        let n = normalize(p as i64, q as i64).unwrap();
        assert_eq!(n, ManifoldForm::Lens { p, q: orbit(p, q)[0] });
        assert_eq!(n.normalized(), n);
        assert_eq!(normalize(-(p as i64), q as i64 + 3 * p as i64).unwrap(), n);
    }
}

#[test]
fn homeomorphism_is_an_equivalence_relation() {
    let ms = all_lens(60);
    for a in &ms {
        assert!(is_homeomorphic(a, a));
    }
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            let ab = is_homeomorphic(a, b);
            assert_eq!(ab, is_homeomorphic(b, a));
            let (ManifoldForm::Lens { p: p1, q: q1 }, ManifoldForm::Lens { p: p2, q: q2 }) = (a, b) else {
                unreachable!()
            };
            assert_eq!(ab, p1 == p2 && orbit(*p1, *q1).contains(q2), "{a} {b}");
        }
    }
    // Transitivity on a smaller range is covered by the orbit characterization
    // above; spot-check it directly anyway.
    let small = all_lens(20);
    for a in &small {
        for b in &small {
            for c in &small {
                if is_homeomorphic(a, b) && is_homeomorphic(b, c) {
                    assert!(is_homeomorphic(a, c));
                }
            }
        }
    }
    assert!(is_homeomorphic(&ManifoldForm::lens(7, 2).unwrap(), &ManifoldForm::lens(7, 3).unwrap()));
    assert!(!is_homeomorphic(&ManifoldForm::lens(7, 1).unwrap(), &ManifoldForm::lens(7, 2).unwrap()));
}

#[test]
fn core_criterion_is_q_plus_minus_one() {
    assert!(core_isotopy_criterion(&ManifoldForm::Sphere3));
    for m in all_lens(60) {
        let ManifoldForm::Lens { p, q } = m else { unreachable!() };
        assert_eq!(core_isotopy_criterion(&m), q == 1 || q == p - 1, "{m}");
    }
}

#[test]
fn diffeotopy_clauses_partition_lens_spaces() {
    assert_eq!(diffeotopy_group(&ManifoldForm::Sphere3), Err(LensError::SphereNotCovered));
    for m in all_lens(60) {
        let ManifoldForm::Lens { p, q } = m else { unreachable!() };
        let plus_one = q == 1 || q == p - 1;
        let sq = (q * q) % p;
        let clauses = [p == 2, p > 2 && plus_one, !plus_one && sq == 1, !plus_one && sq == p - 1];
        assert!(clauses.iter().filter(|c| **c).count() <= 1, "{m}: overlapping clauses");
        let g = diffeotopy_group(&m).unwrap();
        let want = match clauses.iter().position(|c| *c) {
            Some(0) => (GroupKind::Z2, GeneratorTag::SigmaMinus),
            Some(1) => (GroupKind::Z2, GeneratorTag::Tau),
            Some(2) => (GroupKind::Z2xZ2, GeneratorTag::TauAndSigmaPlus),
            Some(3) => (GroupKind::Z4, GeneratorTag::SigmaMinusOrder4),
            _ => (GroupKind::Z2, GeneratorTag::Tau),
        };
        assert_eq!((g.group, g.generator_tag), want, "{m}");
        // Homeomorphic forms get the same group.
        assert_eq!(diffeotopy_group(&m.normalized()).unwrap().group, g.group);
    }
}

#[test]
fn diffeotopy_examples() {
    let g = |p, q| diffeotopy_group(&ManifoldForm::lens(p, q).unwrap()).unwrap().group;
    assert_eq!(g(2, 1), GroupKind::Z2);
    assert_eq!(g(5, 2), GroupKind::Z4);
    assert_eq!(g(8, 3), GroupKind::Z2xZ2);
    assert_eq!(g(7, 2), GroupKind::Z2);
}

#[test]
fn involution_and_rp2_facts() {
    assert!(hyperelliptic_realizable(&ManifoldForm::Sphere3));
    for m in all_lens(60) {
        let sigma_minus_p2 = diffeotopy_group(&m).unwrap().generator_tag == GeneratorTag::SigmaMinus;
        assert_eq!(hyperelliptic_realizable(&m), sigma_minus_p2, "{m}");
        assert_eq!(admits_seifert_over_rp2(&m), is_homeomorphic(&m, &ManifoldForm::Lens { p: 4, q: 1 }));
    }
    assert!(!admits_seifert_over_rp2(&ManifoldForm::Sphere3));
}

#[test]
fn torus_knot_cores() {
    assert!(torus_knot_is_core(1, 5));
    assert!(torus_knot_is_core(-1, 0));
    assert!(!torus_knot_is_core(2, 3));
}

#[test]
fn manifold_json_forms() {
    let m: ManifoldForm = serde_json::from_str(r#"{"kind":"lens","p":7,"q":2}"#).unwrap();
    assert_eq!(m, ManifoldForm::Lens { p: 7, q: 2 });
    let s: ManifoldForm = serde_json::from_str(r#"{"kind":"sphere3"}"#).unwrap();
    assert_eq!(s, ManifoldForm::Sphere3);
    assert!(serde_json::from_str::<ManifoldForm>(r#"{"kind":"lens","p":6,"q":4}"#).is_err());
    assert!(serde_json::from_str::<ManifoldForm>(r#"{"kind":"lens","p":5,"q":5}"#).is_err());
}

#[test]
fn normalize_errors() {
    assert_eq!(normalize(0, 1), Err(LensError::ZeroP));
    assert!(matches!(normalize(6, 4), Err(LensError::NotCoprime { gcd: 2, .. })));
    assert_eq!(normalize(1, 0).unwrap(), ManifoldForm::Sphere3);
    assert_eq!(normalize(-1, 7).unwrap(), ManifoldForm::Sphere3);
}

proptest! {
    #[test]
    fn normalize_is_invariant_under_orbit_moves(p in 2i64..200, q in 1i64..200, k in -5i64..5) {
        prop_assume!(gcd(p as u64, q.rem_euclid(p) as u64) == 1);
        let n = normalize(p, q).unwrap();
        prop_assert_eq!(normalize(p, q + k * p).unwrap(), n);
        prop_assert_eq!(normalize(p, -q).unwrap(), n);
        prop_assert_eq!(normalize(-p, q).unwrap(), n);
        let qr = q.rem_euclid(p);
        let inv = (1..p).find(|x| (qr * x) % p == 1).unwrap();
        prop_assert_eq!(normalize(p, inv).unwrap(), n);
    }
}
