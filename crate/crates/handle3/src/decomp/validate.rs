use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{euler_lemma_expected, Decomposition, Pair};
use crate::surfaces::total_euler_char;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    ClosedPiece,
    IncidenceShape,
    DuplicateLocus,
    LocusCount,
    LocusIncidence,
    EulerLemma,
    GluingIdentity,
    HandlebodyBoundary,
    CurveClass,
    SphereBundleDisk,
    NotAdmissible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { kind, detail: detail.into() });
    }
}

/// Every violated invariant of `d`. An empty report means valid.
pub fn validate(d: &Decomposition) -> ValidationReport {
    let mut r = ValidationReport::default();
    let b = d.b();

    let mut seen = BTreeSet::new();
    for l in &d.loci {
        if !seen.insert(l.id) {
            r.push(ViolationKind::DuplicateLocus, format!("locus id {} appears twice", l.id));
        }
    }

    let mut incidence_ok = true;
    for pair in Pair::ALL {
        let pieces = d.patch(pair);
        let inc = d.incidence.get(pair);
        for (i, p) in pieces.iter().enumerate() {
            if p.boundary_count == 0 {
                r.push(ViolationKind::ClosedPiece, format!("{pair} component {i} has no boundary"));
            }
        }
        if inc.len() != pieces.len() || pieces.iter().zip(inc).any(|(p, c)| p.boundary_count as usize != c.len()) {
            r.push(ViolationKind::IncidenceShape, format!("{pair} incidence does not match its pieces"));
            incidence_ok = false;
        }
        let circles: usize = pieces.iter().map(|p| p.boundary_count as usize).sum();
        if circles != b {
            r.push(ViolationKind::LocusCount, format!("{pair} has {circles} boundary circles but there are {b} loci"));
        }
        for l in &d.loci {
            let n = inc.iter().flatten().filter(|&&x| x == l.id).count();
            if n != 1 {
                incidence_ok = false;
                r.push(ViolationKind::LocusIncidence, format!("locus {} lies on {n} circles of {pair}", l.id));
            }
        }
        for &x in inc.iter().flatten() {
            if !seen.contains(&x) {
                incidence_ok = false;
                r.push(ViolationKind::LocusIncidence, format!("{pair} references unknown locus {x}"));
            }
        }
    }

    let expected = euler_lemma_expected(d.genera);
    for pair in Pair::ALL {
        let chi = total_euler_char(d.patch(pair));
        if chi != expected[pair.index()] {
            r.push(ViolationKind::EulerLemma, format!("chi({pair}) = {chi}, expected {}", expected[pair.index()]));
        }
    }
    for h in 1..=3 {
        let [a, c] = Pair::touching(h);
        let chi = total_euler_char(d.patch(a)) + total_euler_char(d.patch(c));
        let want = 2 - 2 * d.genus(h) as i64;
        if chi != want {
            r.push(
                ViolationKind::GluingIdentity,
                format!("chi({a}) + chi({c}) = {chi}, expected {want} for handlebody {h}"),
            );
        }
    }

    if !incidence_ok || r.has(ViolationKind::DuplicateLocus) {
        return r;
    }

    for h in 1..=3 {
        let g = d.genus(h);
        let graph = d.boundary_graph(h).expect("incidence checked");
        if !graph.is_connected() {
            r.push(ViolationKind::HandlebodyBoundary, format!("boundary of handlebody {h} is disconnected"));
            continue;
        }
        if graph.surface_genus() != g as i64 {
            r.push(
                ViolationKind::HandlebodyBoundary,
                format!("boundary of handlebody {h} has genus {}, expected {g}", graph.surface_genus()),
            );
            continue;
        }
        for l in &d.loci {
            let c = l.classes[h - 1];
            let bridge = graph.is_bridge(l.id);
            let bad = match g {
                0 => c.essential || c.meridian.is_some_and(|m| m != 0),
                1 => c.essential == bridge || (!c.essential && c.meridian.is_some_and(|m| m % 2 != 0)),
                _ => !bridge && !c.essential,
            };
            if bad {
                r.push(
                    ViolationKind::CurveClass,
                    format!("locus {} has class {:?} on handlebody {h} (genus {g}, separating: {bridge})", l.id, c),
                );
            }
        }
    }

    for pair in Pair::ALL {
        let pieces = d.patch(pair);
        if pieces.len() < 2 {
            continue;
        }
        let k = pair.opposite();
        for (i, p) in pieces.iter().enumerate() {
            if !p.is_disk() {
                continue;
            }
            let ell = d.incidence.get(pair)[i][0];
            if d.class(ell, k).is_some_and(|c| !c.essential) {
                r.push(
                    ViolationKind::SphereBundleDisk,
                    format!("disk {i} of {pair} bounds locus {ell}, inessential on handlebody {k}: S2 x S1 summand"),
                );
            }
        }
    }

    if !d.manifold.is_sphere() && d.genera == [0, 0, 0] {
        r.push(ViolationKind::NotAdmissible, "a lens space has no decomposition into three balls");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lens::ManifoldForm;
    use crate::surfaces::SurfacePiece;

    #[test]
    fn fixtures_validate() {
        for (name, d) in fixtures::all() {
            let r = validate(&d);
            assert!(r.is_valid(), "{name}: {:?}", r.violations);
        }
    }

    #[test]
    fn extra_annulus_breaks_locus_count() {
        let mut d = fixtures::type001(ManifoldForm::Sphere3);
        d.patches.f23.push(SurfacePiece::ANNULUS);
        d.incidence.f23.push(vec![1, 2]);
        let r = validate(&d);
        assert!(r.has(ViolationKind::LocusCount));
        assert!(r.has(ViolationKind::LocusIncidence));
    }

    #[test]
    fn inessential_disk_boundary_flagged() {
        let mut d = fixtures::type001(ManifoldForm::Sphere3);
        for l in &mut d.loci {
            l.classes[2].essential = false;
        }
        let r = validate(&d);
        assert!(r.has(ViolationKind::SphereBundleDisk));
    }

    #[test]
    fn lens_three_balls_not_admissible() {
        let mut d = fixtures::type000();
        d.manifold = ManifoldForm::lens(3, 1).unwrap();
        assert!(validate(&d).has(ViolationKind::NotAdmissible));
    }
}
