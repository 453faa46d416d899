//! Decompositions for every case of the characterization theorems, built by
//! stabilizing the three-ball decomposition of S3 or the genus-(0,0,1)
//! decomposition of a lens space.

use serde::{Deserialize, Serialize};

use crate::decomp::{BranchedLocus, CaseId, CurveClass, Decomposition, PerPair};
use crate::lens::ManifoldForm;
use crate::moves::stabilize_type1;
use crate::surfaces::{ArcDescriptor, ArcOutcome, SurfacePiece};

const D: SurfacePiece = SurfacePiece::DISK;
const A: SurfacePiece = SurfacePiece::ANNULUS;

fn separate(circle: u32, genus: u32, circles: Vec<u32>) -> ArcDescriptor {
    ArcDescriptor::looped(0, circle, ArcOutcome::SeparatePiece { genus, circles })
}

fn stab(d: &Decomposition, i: usize, arc: ArcDescriptor, loci: [u32; 2]) -> Decomposition {
    stabilize_type1(d, i, &arc, loci).expect("fixture stabilization")
}

/// S3 as three balls meeting in three disks along one circle.
pub fn type000() -> Decomposition {
    Decomposition {
        manifold: ManifoldForm::Sphere3,
        genera: [0, 0, 0],
        patches: PerPair { f12: vec![D], f13: vec![D], f23: vec![D] },
        loci: vec![BranchedLocus { id: 1, classes: [CurveClass::TRIVIAL; 3] }],
        incidence: PerPair { f12: vec![vec![1]], f13: vec![vec![1]], f23: vec![vec![1]] },
    }
}

/// `F12 = D1 + D2`, `F13 = F23 = A`. Both loci cross the meridian of `H3`
/// `p` times (once for S3).
pub fn type001(m: ManifoldForm) -> Decomposition {
    let p = m.order() as u32;
    let h3 = CurveClass::new(true, p);
    Decomposition {
        manifold: m,
        genera: [0, 0, 1],
        patches: PerPair { f12: vec![D, D], f13: vec![A], f23: vec![A] },
        loci: (1..=2).map(|id| BranchedLocus { id, classes: [CurveClass::TRIVIAL, CurveClass::TRIVIAL, h3] }).collect(),
        incidence: PerPair { f12: vec![vec![1], vec![2]], f13: vec![vec![1, 2]], f23: vec![vec![1, 2]] },
    }
}

/// One locus: `F12 = F13 = D`, `F23 = T*`.
pub fn type011_case1(m: ManifoldForm) -> Decomposition {
    stab(&type001(m), 2, ArcDescriptor::spanning(0, 0, 1), [1, 2])
}

/// Three loci: `F12 = F13 = D + A`, `F23 = P`.
pub fn type011_case2(m: ManifoldForm) -> Decomposition {
    stab(&type001(m), 2, separate(0, 0, vec![]), [1, 1])
}

/// Two loci on three annuli. Tags follow a Seifert fibration with `H1` and
/// `H2` neighborhoods of regular fibres.
pub fn type111_case1(m: ManifoldForm) -> Decomposition {
    let p = m.order() as u32;
    let one = CurveClass::new(true, 1);
    let h3 = CurveClass::new(true, p);
    Decomposition {
        manifold: m,
        genera: [1, 1, 1],
        patches: PerPair { f12: vec![A], f13: vec![A], f23: vec![A] },
        loci: (1..=2).map(|id| BranchedLocus { id, classes: [one, one, h3] }).collect(),
        incidence: PerPair { f12: vec![vec![1, 2]], f13: vec![vec![1, 2]], f23: vec![vec![1, 2]] },
    }
}

/// `F12 = D + T*`, `F13 = F23 = A`.
pub fn type111_case2(m: ManifoldForm) -> Decomposition {
    let d = stab(&type011_case1(m), 1, separate(0, 1, vec![]), [1, 1]);
    d.relabel_handlebodies([3, 2, 1])
}

/// `F12 = D + P`, `F13 = F23 = A1 + A2`.
pub fn type111_case3(m: ManifoldForm) -> Decomposition {
    let base = type011_case2(m);
    // F23 is a pants with circles (2, 1, 3); split off the annulus (2, 1).
    let d = stab(&base, 1, separate(0, 0, vec![1]), [2, 2]);
    normalize_distinguished(d)
}

/// `F12 = A1 + A2`, `F13 = F23 = D + P`.
pub fn type111_case4(m: ManifoldForm) -> Decomposition {
    let base = type011_case2(m);
    stab(&base, 1, separate(0, 0, vec![]), [2, 2])
}

/// `F12 = F13 = F23 = D + P`.
pub fn type111_case5(m: ManifoldForm) -> Decomposition {
    let base = type011_case2(m);
    stab(&base, 1, separate(2, 0, vec![]), [3, 3])
}

/// The L(4,1) decomposition into three annulus pairs with four loci, each
/// essential on every boundary torus.
pub fn type111_case6() -> Decomposition {
    let m = ManifoldForm::lens(4, 1).expect("valid");
    let c = CurveClass::new(true, 1);
    Decomposition {
        manifold: m,
        genera: [1, 1, 1],
        patches: PerPair { f12: vec![A, A], f13: vec![A, A], f23: vec![A, A] },
        loci: (1..=4).map(|id| BranchedLocus { id, classes: [c; 3] }).collect(),
        incidence: PerPair {
            f12: vec![vec![1, 2], vec![3, 4]],
            f13: vec![vec![2, 3], vec![4, 1]],
            f23: vec![vec![1, 3], vec![2, 4]],
        },
    }
}

/// Relabel handlebodies so that `F12` carries the patch that differs from
/// the other two.
fn normalize_distinguished(d: Decomposition) -> Decomposition {
    let sorted = |v: &[SurfacePiece]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    for perm in [[1, 2, 3], [1, 3, 2], [3, 2, 1], [2, 1, 3], [2, 3, 1], [3, 1, 2]] {
        let r = d.relabel_handlebodies(perm);
        if sorted(&r.patches.f13) == sorted(&r.patches.f23) {
            return r;
        }
    }
    d
}

/// Fixture for a case, if the manifold admits it.
pub fn for_case(m: ManifoldForm, case: CaseId) -> Option<Decomposition> {
    let lens = !m.is_sphere();
    Some(match (case.genera, case.case) {
        ([0, 0, 0], 1) if !lens => type000(),
        ([0, 0, 1], 1) => type001(m),
        ([0, 1, 1], 1) => type011_case1(m),
        ([0, 1, 1], 2) => type011_case2(m),
        ([1, 1, 1], 1) => type111_case1(m),
        ([1, 1, 1], 2) => type111_case2(m),
        ([1, 1, 1], 3) => type111_case3(m),
        ([1, 1, 1], 4) => type111_case4(m),
        ([1, 1, 1], 5) => type111_case5(m),
        ([1, 1, 1], 6) if m.normalized() == type111_case6().manifold => {
            let mut d = type111_case6();
            d.manifold = m;
            d
        }
        _ => return None,
    })
}

/// Every fixture for S3, L(2,1), L(5,2), L(7,2) and L(4,1), named.
pub fn all() -> Vec<(String, Decomposition)> {
    let manifolds = [
        ManifoldForm::Sphere3,
        ManifoldForm::Lens { p: 2, q: 1 },
        ManifoldForm::Lens { p: 4, q: 1 },
        ManifoldForm::Lens { p: 5, q: 2 },
        ManifoldForm::Lens { p: 7, q: 2 },
    ];
    let mut out = Vec::new();
    for m in manifolds {
        for case in CaseId::all() {
            if let Some(d) = for_case(m, case) {
                out.push((format!("{m} {case}"), d));
            }
        }
    }
    out
}

/// A hand-drawn decomposition stored as JSON, with the
/// case and embedding pattern it is drawn for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureFixture {
    pub name: String,
    pub claimed_case: CaseId,
    pub claimed_pattern: Option<String>,
    pub decomposition: Decomposition,
}

const FIGURES: &[&str] = &[
    include_str!("../fixtures/figures/s3_001_two_loops.json"),
    include_str!("../fixtures/figures/s3_011_one_loop.json"),
    include_str!("../fixtures/figures/s3_011_three_loops.json"),
    include_str!("../fixtures/figures/disk_annulus_in_solid_torus.json"),
    include_str!("../fixtures/figures/two_annuli_dp_dp.json"),
    include_str!("../fixtures/figures/two_annuli_dp_aa.json"),
    include_str!("../fixtures/figures/punctured_torus_in_ball.json"),
    include_str!("../fixtures/figures/disk_pants_dpaa.json"),
    include_str!("../fixtures/figures/disk_pants_four_annuli.json"),
    include_str!("../fixtures/figures/disk_pants_cross.json"),
];

pub fn figures() -> Vec<FigureFixture> {
    FIGURES.iter().map(|s| serde_json::from_str(s).expect("embedded figure fixture")).collect()
}
