use std::collections::BTreeMap;

use handle3::decomp::{
    enumerate_profiles, euler_lemma_expected, match_case, reduce_along_disk, reference_profile, validate, CaseId,
    Decomposition, Pair, ViolationKind,
};
use handle3::fixtures;
use handle3::lens::is_homeomorphic;
use handle3::surfaces::{total_euler_char, SurfacePiece};
use handle3::ManifoldForm;
use proptest::prelude::*;

fn targets() -> Vec<ManifoldForm> {
    let mut v = vec![ManifoldForm::Sphere3];
    for (p, q) in [(2, 1), (3, 1), (4, 1), (4, 3), (5, 2), (7, 2), (8, 3), (12, 5)] {
        v.push(ManifoldForm::lens(p, q).unwrap());
    }
    v
}

/// Case lists as published, per genera triple.
fn published(m: &ManifoldForm, genera: [u32; 3]) -> Vec<u32> {
    match genera {
        [0, 0, 0] if m.is_sphere() => vec![1],
        [0, 0, 0] => vec![],
        [0, 0, 1] => vec![1],
        [0, 1, 1] => vec![1, 2],
        [1, 1, 1] if m.order() == 4 => vec![1, 2, 3, 4, 5, 6],
        [1, 1, 1] => vec![1, 2, 3, 4, 5],
        _ => unreachable!(),
    }
}

#[test]
fn enumeration_reproduces_case_lists() {
    for m in targets() {
        for genera in [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]] {
            let e = enumerate_profiles(&m, genera, 4).unwrap();
            let got: Vec<u32> = e.cases.iter().map(|c| c.case.expect("no unmatched survivors").case).collect();
            assert_eq!(got, published(&m, genera), "{m} {genera:?}");
        }
    }
}

#[test]
fn enumeration_is_stable_in_max_loci() {
    for m in [ManifoldForm::Sphere3, ManifoldForm::lens(4, 1).unwrap(), ManifoldForm::lens(7, 2).unwrap()] {
        for genera in [[0, 0, 1], [0, 1, 1], [1, 1, 1]] {
            let base = enumerate_profiles(&m, genera, 4).unwrap().cases;
            for b in 5..=8 {
                assert_eq!(enumerate_profiles(&m, genera, b).unwrap().cases, base, "{m} {genera:?} b={b}");
            }
        }
    }
}

#[test]
fn enumerated_b_and_euler_agree() {
    for m in targets() {
        for genera in [[0, 0, 1], [0, 1, 1], [1, 1, 1]] {
            for c in enumerate_profiles(&m, genera, 6).unwrap().cases {
                // chi(dH_i) = chi(F_ij) + chi(F_ik); circles contribute nothing.
                for h in 1..=3 {
                    let [a, b] = Pair::touching(h);
                    let chi = total_euler_char(c.profile.get(a)) + total_euler_char(c.profile.get(b));
                    assert_eq!(chi, 2 - 2 * genera[h - 1] as i64);
                }
                for pair in Pair::ALL {
                    let circles: u32 = c.profile.get(pair).iter().map(|p| p.boundary_count).sum();
                    assert_eq!(circles, c.b, "every locus bounds each patch once");
                }
                let (prof, b) = reference_profile(c.case.unwrap());
                assert_eq!(b, c.b);
                assert_eq!(match_case(genera, &prof), c.case);
            }
        }
    }
}

#[test]
fn euler_lemma_solves_the_boundary_system() {
    for g1 in 0..2 {
        for g2 in 0..2 {
            for g3 in 0..2 {
                let [x12, x13, x23] = euler_lemma_expected([g1, g2, g3]);
                assert_eq!(x12 + x13, 2 - 2 * g1 as i64);
                assert_eq!(x12 + x23, 2 - 2 * g2 as i64);
                assert_eq!(x13 + x23, 2 - 2 * g3 as i64);
            }
        }
    }
}

#[test]
fn every_fixture_validates_and_round_trips() {
    for (name, d) in fixtures::all() {
        assert!(validate(&d).is_valid(), "{name}: {:?}", validate(&d));
        let json = serde_json::to_string(&d).unwrap();
        let back = Decomposition::from_json_str(&json).unwrap();
        assert_eq!(back, d);
        let env = format!(r#"{{"schema":"handle3/1","status":"ok","data":{{"decomposition":{json}}}}}"#);
        assert_eq!(Decomposition::from_json_str(&env).unwrap(), d);
    }
}

#[test]
fn canonical_key_ignores_locus_names_and_order() {
    for (name, d) in fixtures::all() {
        let mut shuffled = d.clone();
        shuffled.loci.reverse();
        let renamed = shuffled.renumber_loci();
        assert_eq!(renamed.canonical_key(), d.canonical_key(), "{name}");
        for pair in Pair::ALL {
            let mut e = d.clone();
            e.patches.get_mut(pair).reverse();
            e.incidence.get_mut(pair).reverse();
            assert_eq!(e.canonical_key(), d.canonical_key(), "{name}");
        }
    }
}

#[test]
fn relabeling_handlebodies_keeps_validity() {
    for (name, d) in fixtures::all() {
        for perm in [[2, 1, 3], [3, 2, 1], [2, 3, 1]] {
            let r = d.relabel_handlebodies(perm);
            assert!(validate(&r).is_valid(), "{name} {perm:?}");
            assert_eq!(match_case(r.genera, &r.patches), match_case(d.genera, &d.patches));
        }
    }
}

#[test]
fn reduce_lowers_genus_and_keeps_manifold() {
    let mut reduced = 0;
    for (name, d) in fixtures::all() {
        for pair in Pair::ALL {
            for (i, piece) in d.patch(pair).iter().enumerate() {
                if !piece.is_disk() {
                    continue;
                }
                let Ok((out, summand)) = reduce_along_disk(&d, pair, i) else { continue };
                assert!(validate(&out).is_valid(), "{name}: {:?}", validate(&out));
                assert_eq!(out.genus(pair.opposite()), 0);
                assert_eq!(out.b() + 1, d.b());
                // One summand is always S3.
                let kept = if out.manifold.is_sphere() { summand } else { out.manifold };
                assert!(is_homeomorphic(&kept, &d.manifold), "{name}");
                reduced += 1;
            }
        }
    }
    assert!(reduced > 5, "only {reduced} reductions");
}

#[test]
fn reduce_rejects_bad_targets() {
    let d = fixtures::type001(ManifoldForm::Sphere3);
    assert!(reduce_along_disk(&d, Pair::F13, 0).is_err());
    assert!(reduce_along_disk(&d, Pair::F12, 7).is_err());
    let t = fixtures::type000();
    assert!(reduce_along_disk(&t, Pair::F12, 0).is_err());
}

#[test]
fn case_ids_validate() {
    assert!(CaseId::new([1, 1, 1], 6).is_ok());
    assert!(CaseId::new([1, 1, 1], 7).is_err());
    assert!(CaseId::new([0, 1, 1], 3).is_err());
    assert_eq!(CaseId::all().len(), 10);
}

#[derive(Debug, Clone)]
enum Mutation {
    DropLocus,
    DuplicateLocus,
    BumpGenus(usize),
    GrowPiece(usize),
    SwapCircleToGhost(usize),
}

fn mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        Just(Mutation::DropLocus),
        Just(Mutation::DuplicateLocus),
        (0usize..3).prop_map(Mutation::BumpGenus),
        (0usize..3).prop_map(Mutation::GrowPiece),
        (0usize..3).prop_map(Mutation::SwapCircleToGhost),
    ]
}

fn apply(d: &Decomposition, m: &Mutation) -> (Decomposition, ViolationKind) {
    let mut e = d.clone();
    let kind = match m {
        Mutation::DropLocus => {
            e.loci.pop();
            ViolationKind::LocusIncidence
        }
        Mutation::DuplicateLocus => {
            let l = e.loci[0].clone();
            e.loci.push(l);
            ViolationKind::DuplicateLocus
        }
        Mutation::BumpGenus(h) => {
            e.genera[*h] = 1 - e.genera[*h];
            ViolationKind::EulerLemma
        }
        Mutation::GrowPiece(k) => {
            let pair = Pair::ALL[*k];
            let p = e.patches.get_mut(pair)[0];
            e.patches.get_mut(pair)[0] = SurfacePiece::new(p.genus, p.boundary_count + 1);
            ViolationKind::IncidenceShape
        }
        Mutation::SwapCircleToGhost(k) => {
            let pair = Pair::ALL[*k];
            e.incidence.get_mut(pair)[0][0] = 999;
            ViolationKind::LocusIncidence
        }
    };
    (e, kind)
}

proptest! {
    #[test]
    fn mutations_are_detected(idx in 0usize..64, m in mutation()) {
        let all = fixtures::all();
        let (name, d) = &all[idx % all.len()];
        let (bad, kind) = apply(d, &m);
        let report = validate(&bad);
        prop_assert!(!report.is_valid(), "{} {:?} went undetected", name, m);
        prop_assert!(report.has(kind), "{} {:?}: {:?}", name, m, report);
    }
}

#[test]
fn validate_reports_are_serializable() {
    let d = fixtures::type001(ManifoldForm::Sphere3);
    let (bad, _) = apply(&d, &Mutation::DropLocus);
    let json = serde_json::to_value(validate(&bad)).unwrap();
    let kinds: BTreeMap<String, usize> =
        json["violations"].as_array().unwrap().iter().fold(BTreeMap::new(), |mut m, v| {
            *m.entry(v["kind"].as_str().unwrap().to_string()).or_default() += 1;
            m
        });
    assert!(kinds.contains_key("locus_incidence"));
}
