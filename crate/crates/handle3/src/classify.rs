//! Heegaard roles, embedding-class lemmas and isotopy-class counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::decomp::CaseId;
use crate::decomp::{Decomposition, Pair};
use crate::lens::{admits_seifert_over_rp2, core_isotopy_criterion, hyperelliptic_realizable, ManifoldForm};
use crate::surfaces::SurfacePiece;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown embedding pattern {0:?}")]
    UnknownPattern(String),
    #[error("pattern {tag} needs pieces {expected}, got {found}")]
    PatternMismatch { tag: PatternTag, expected: String, found: String },
    #[error("{case} has no isotopy classification")]
    UnclassifiedCase { case: CaseId },
    #[error("{case} does not occur for {manifold}")]
    NotRealized { case: CaseId, manifold: ManifoldForm },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PatternTag {
    AnnInBall,
    DiskAnn,
    #[serde(rename = "TWO_ANN_DP2")]
    TwoAnnDp2,
    #[serde(rename = "TWO_ANN_DPAA")]
    TwoAnnDpaa,
    PantsInBall,
    TInBall,
    #[serde(rename = "DP_DPAA")]
    DpDpaa,
    #[serde(rename = "DP_4A")]
    Dp4a,
    DpCross,
}

impl PatternTag {
    pub const ALL: [PatternTag; 9] = [
        PatternTag::AnnInBall,
        PatternTag::DiskAnn,
        PatternTag::TwoAnnDp2,
        PatternTag::TwoAnnDpaa,
        PatternTag::PantsInBall,
        PatternTag::TInBall,
        PatternTag::DpDpaa,
        PatternTag::Dp4a,
        PatternTag::DpCross,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternTag::AnnInBall => "ANN_IN_BALL",
            PatternTag::DiskAnn => "DISK_ANN",
            PatternTag::TwoAnnDp2 => "TWO_ANN_DP2",
            PatternTag::TwoAnnDpaa => "TWO_ANN_DPAA",
            PatternTag::PantsInBall => "PANTS_IN_BALL",
            PatternTag::TInBall => "T_IN_BALL",
            PatternTag::DpDpaa => "DP_DPAA",
            PatternTag::Dp4a => "DP_4A",
            PatternTag::DpCross => "DP_CROSS",
        }
    }

    pub fn container(self) -> Container {
        match self {
            PatternTag::AnnInBall | PatternTag::PantsInBall | PatternTag::TInBall => Container::Ball,
            _ => Container::SolidTorus,
        }
    }

    /// The embedded surface, sorted.
    pub fn pieces(self) -> Vec<SurfacePiece> {
        use SurfacePiece as S;
        match self {
            PatternTag::AnnInBall => vec![S::ANNULUS],
            PatternTag::DiskAnn => vec![S::DISK, S::ANNULUS],
            PatternTag::TwoAnnDp2 | PatternTag::TwoAnnDpaa => vec![S::ANNULUS, S::ANNULUS],
            PatternTag::PantsInBall => vec![S::PANTS],
            PatternTag::TInBall => vec![S::PUNCTURED_TORUS],
            PatternTag::DpDpaa | PatternTag::Dp4a | PatternTag::DpCross => vec![S::DISK, S::PANTS],
        }
    }

    /// The pieces the surface cuts the container boundary into, sorted.
    pub fn regions(self) -> Vec<SurfacePiece> {
        use SurfacePiece as S;
        let (d, a, p) = (S::DISK, S::ANNULUS, S::PANTS);
        let mut v = match self {
            PatternTag::AnnInBall => vec![d, d, a],
            PatternTag::DiskAnn => vec![d, a, p],
            PatternTag::TwoAnnDp2 => vec![d, d, p, p],
            PatternTag::TwoAnnDpaa => vec![d, p, a, a],
            PatternTag::PantsInBall => vec![d, d, a, a],
            PatternTag::TInBall => vec![d],
            PatternTag::DpDpaa => vec![d, p, a, a],
            PatternTag::Dp4a => vec![a, a, a, a],
            PatternTag::DpCross => vec![d, p, d, p],
        };
        v.sort();
        v
    }
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternTag {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        PatternTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ClassifyError::UnknownPattern(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Container {
    Ball,
    SolidTorus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingPattern {
    pub container: Container,
    pub pieces: Vec<SurfacePiece>,
    pub boundary_pattern: PatternTag,
}

impl EmbeddingPattern {
    pub fn of(tag: PatternTag) -> Self {
        EmbeddingPattern { container: tag.container(), pieces: tag.pieces(), boundary_pattern: tag }
    }
}

fn names(pieces: &[SurfacePiece]) -> String {
    crate::surfaces::multiset_name(pieces)
}

/// Number of isotopy classes of the embedding and whether the hyperelliptic
/// involution of the solid torus exchanges them.
pub fn embedding_class_count(p: &EmbeddingPattern) -> Result<(u32, bool), ClassifyError> {
    let tag = p.boundary_pattern;
    let mut pieces = p.pieces.clone();
    pieces.sort();
    if pieces != tag.pieces() || p.container != tag.container() {
        return Err(ClassifyError::PatternMismatch {
            tag,
            expected: format!("{} in {:?}", names(&tag.pieces()), tag.container()),
            found: format!("{} in {:?}", names(&pieces), p.container),
        });
    }
    Ok(match tag {
        PatternTag::DiskAnn | PatternTag::TwoAnnDp2 | PatternTag::TwoAnnDpaa | PatternTag::DpDpaa => (2, true),
        _ => (1, false),
    })
}

/// Patterns realized inside a decomposition: for every patch `F_ij`, the
/// pattern it cuts into the complement of `H_k`, keyed by `k`.
pub fn detect_patterns(d: &Decomposition) -> Vec<(usize, PatternTag)> {
    let mut out = Vec::new();
    for pair in Pair::ALL {
        let k = pair.opposite();
        let mut pieces = d.patch(pair).to_vec();
        pieces.sort();
        let [a, b] = Pair::touching(k);
        let mut regions: Vec<SurfacePiece> = d.patch(a).iter().chain(d.patch(b)).copied().collect();
        regions.sort();
        let container = match d.genus(k) {
            0 => Container::Ball,
            1 => Container::SolidTorus,
            _ => continue,
        };
        let t_in_ball = pieces == [SurfacePiece::DISK, SurfacePiece::PUNCTURED_TORUS];
        for tag in PatternTag::ALL {
            let hit = if tag == PatternTag::TInBall {
                (container == Container::Ball && pieces == tag.pieces()) || t_in_ball
            } else {
                container == tag.container() && pieces == tag.pieces() && regions == tag.regions()
            };
            if hit {
                out.push((k, tag));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleKind {
    /// Every listed boundary is a Heegaard surface.
    All,
    /// Both listed boundaries are Heegaard surfaces.
    Both,
    /// Exactly one of the listed boundaries is a Heegaard surface.
    ExactlyOne,
    /// At most two of the listed boundaries are Heegaard surfaces.
    AtMostTwo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleReport {
    pub kind: RoleKind,
    pub handlebodies: Vec<usize>,
}

fn check_case(c: CaseId) -> Result<CaseId, ClassifyError> {
    CaseId::new(c.genera, c.case).map_err(|_| ClassifyError::UnclassifiedCase { case: c })
}

/// Which handlebody boundaries are genus-one Heegaard surfaces.
pub fn heegaard_roles(m: &ManifoldForm, c: CaseId) -> Result<RoleReport, ClassifyError> {
    let c = check_case(c)?;
    let unclassified = || ClassifyError::UnclassifiedCase { case: c };
    let report = |kind, hs: &[usize]| RoleReport { kind, handlebodies: hs.to_vec() };
    match (c.genera, c.case) {
        ([0, 0, 0], _) | ([1, 1, 1], 1) | ([1, 1, 1], 6) => Err(unclassified()),
        ([0, 0, 1], _) => Ok(report(RoleKind::All, &[3])),
        (g, _) if m.is_sphere() => {
            let tori: Vec<usize> = (1..=3).filter(|&h| g[h - 1] == 1).collect();
            Ok(report(RoleKind::All, &tori))
        }
        ([0, 1, 1], 1) => Ok(report(RoleKind::Both, &[2, 3])),
        ([0, 1, 1], 2) => Ok(report(RoleKind::ExactlyOne, &[2, 3])),
        ([1, 1, 1], 2) => Ok(report(RoleKind::AtMostTwo, &[1, 2, 3])),
        ([1, 1, 1], _) => Ok(report(RoleKind::ExactlyOne, &[1, 2, 3])),
        _ => Err(unclassified()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Theorem,
    Derived,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorem" => Ok(Backend::Theorem),
            "derived" => Ok(Backend::Derived),
            other => Err(format!("unknown backend {other:?}; expected theorem or derived")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub count: u32,
    pub backend: Backend,
    pub discrepancy_flag: bool,
}

/// Cases with an isotopy classification.
pub fn classified_cases() -> Vec<CaseId> {
    let mut v = vec![CaseId { genera: [0, 0, 1], case: 1 }];
    v.extend((1..=2).map(|case| CaseId { genera: [0, 1, 1], case }));
    v.extend((2..=5).map(|case| CaseId { genera: [1, 1, 1], case }));
    v
}

fn theorem_count(m: &ManifoldForm, c: CaseId) -> Result<u32, ClassifyError> {
    let crit = core_isotopy_criterion(m);
    let easy = m.is_sphere() || m.order() == 2;
    let pick = |yes: u32, no: u32| if crit { yes } else { no };
    let n = match (c.genera, c.case) {
        ([0, 0, 1], 1) => pick(1, 2),
        ([0, 1, 1], 1) => 1,
        ([0, 1, 1], 2) if easy => 1,
        ([0, 1, 1], 2) => pick(2, 4),
        ([1, 1, 1], 2..=5) if m.is_sphere() => 1,
        ([1, 1, 1], 2) if m.order() == 2 => 2,
        ([1, 1, 1], 3) if m.order() == 2 => 2,
        ([1, 1, 1], 4) if m.order() == 2 => 2,
        ([1, 1, 1], 5) if m.order() == 2 => 1,
        ([1, 1, 1], 2) => pick(2, 4),
        ([1, 1, 1], 3) => pick(3, 6),
        ([1, 1, 1], 4) => pick(4, 8),
        ([1, 1, 1], 5) => pick(1, 2),
        _ => return Err(ClassifyError::UnclassifiedCase { case: c }),
    };
    Ok(n)
}

/// Base class count of one Heegaard-role subcase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubcaseBase {
    /// The configuration is determined by uniqueness of the splitting.
    Unique,
    Pattern(PatternTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subcase {
    /// The handlebody whose boundary is the Heegaard surface.
    pub role: usize,
    pub base: SubcaseBase,
    /// Whether exchanging the two sides of the splitting gives new classes
    /// when the cores are not isotopic.
    pub side_swap: bool,
}

/// Subcases summed by the derived backend.
pub fn subcases(m: &ManifoldForm, c: CaseId) -> Result<Vec<Subcase>, ClassifyError> {
    use PatternTag as P;
    use SubcaseBase::{Pattern, Unique};
    let s = |role, base, side_swap| Subcase { role, base, side_swap };
    let sphere = m.is_sphere();
    Ok(match (c.genera, c.case) {
        ([0, 0, 1], 1) => vec![s(3, Unique, true)],
        ([0, 1, 1], 1) => vec![s(2, Unique, false)],
        ([0, 1, 1], 2) => vec![s(2, Pattern(P::DiskAnn), true)],
        ([1, 1, 1], 2) if sphere => vec![s(1, Unique, false)],
        ([1, 1, 1], 3) if sphere => vec![s(3, Pattern(P::Dp4a), true)],
        ([1, 1, 1], 4) if sphere => vec![s(3, Pattern(P::DpDpaa), true)],
        ([1, 1, 1], 5) if sphere => vec![s(3, Pattern(P::DpCross), true)],
        ([1, 1, 1], 2) => vec![s(1, Unique, false), s(3, Pattern(P::Dp4a), true)],
        ([1, 1, 1], 3) => vec![s(1, Pattern(P::TwoAnnDpaa), true), s(3, Pattern(P::Dp4a), true)],
        ([1, 1, 1], 4) => vec![s(2, Pattern(P::DpDpaa), true), s(3, Pattern(P::TwoAnnDp2), true)],
        ([1, 1, 1], 5) => vec![s(3, Pattern(P::DpCross), true)],
        _ => return Err(ClassifyError::UnclassifiedCase { case: c }),
    })
}

fn derived_count(m: &ManifoldForm, c: CaseId) -> Result<u32, ClassifyError> {
    let crit = core_isotopy_criterion(m);
    let mut total = 0;
    for sc in subcases(m, c)? {
        let mut n = match sc.base {
            SubcaseBase::Unique => 1,
            SubcaseBase::Pattern(tag) => {
                let (count, swap) = embedding_class_count(&EmbeddingPattern::of(tag))?;
                if swap && hyperelliptic_realizable(m) {
                    count / 2
                } else {
                    count
                }
            }
        };
        if sc.side_swap && !crit {
            n *= 2;
        }
        total += n;
    }
    Ok(total)
}

pub fn isotopy_class_count(m: &ManifoldForm, c: CaseId, backend: Backend) -> Result<ClassCount, ClassifyError> {
    let c = check_case(c)?;
    let t = theorem_count(m, c)?;
    let d = derived_count(m, c)?;
    Ok(ClassCount { count: if backend == Backend::Theorem { t } else { d }, backend, discrepancy_flag: t != d })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub case: CaseId,
    pub theorem: u32,
    pub derived: u32,
}

/// Every classified case where the two backends disagree for `m`.
pub fn consistency_report(m: &ManifoldForm) -> Vec<Disagreement> {
    classified_cases()
        .into_iter()
        .filter_map(|c| {
            let t = theorem_count(m, c).ok()?;
            let d = derived_count(m, c).ok()?;
            (t != d).then_some(Disagreement { case: c, theorem: t, derived: d })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseSpace {
    S2,
    Rp2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseOption {
    pub base: BaseSpace,
    pub max_singular_fibres: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertFacts {
    pub bases: Vec<BaseOption>,
    pub case6_exists: bool,
}

pub fn seifert_case_facts(m: &ManifoldForm) -> SeifertFacts {
    let mut bases = vec![BaseOption { base: BaseSpace::S2, max_singular_fibres: 2 }];
    let rp2 = admits_seifert_over_rp2(m);
    if rp2 {
        bases.push(BaseOption { base: BaseSpace::Rp2, max_singular_fibres: 0 });
    }
    SeifertFacts { bases, case6_exists: rp2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(p: u64, q: u64) -> ManifoldForm {
        ManifoldForm::lens(p, q).unwrap()
    }

    fn case(g: [u32; 3], n: u32) -> CaseId {
        CaseId { genera: g, case: n }
    }

    #[test]
    fn lemma_table() {
        assert_eq!(embedding_class_count(&EmbeddingPattern::of(PatternTag::Dp4a)).unwrap(), (1, false));
        assert_eq!(embedding_class_count(&EmbeddingPattern::of(PatternTag::DpDpaa)).unwrap(), (2, true));
        assert_eq!(embedding_class_count(&EmbeddingPattern::of(PatternTag::TInBall)).unwrap(), (1, false));
        let swaps: Vec<_> = PatternTag::ALL
            .into_iter()
            .filter(|t| embedding_class_count(&EmbeddingPattern::of(*t)).unwrap().1)
            .collect();
        assert_eq!(swaps, vec![PatternTag::DiskAnn, PatternTag::TwoAnnDp2, PatternTag::TwoAnnDpaa, PatternTag::DpDpaa]);
        let bad = EmbeddingPattern { pieces: vec![SurfacePiece::ANNULUS], ..EmbeddingPattern::of(PatternTag::Dp4a) };
        assert!(matches!(embedding_class_count(&bad), Err(ClassifyError::PatternMismatch { .. })));
        assert!(matches!("NOPE".parse::<PatternTag>(), Err(ClassifyError::UnknownPattern(_))));
    }

    #[test]
    fn count_examples() {
        let n = |m, c| isotopy_class_count(&m, c, Backend::Theorem).unwrap().count;
        assert_eq!(n(l(5, 2), case([1, 1, 1], 4)), 8);
        assert_eq!(n(l(5, 4), case([1, 1, 1], 3)), 3);
        assert_eq!(n(ManifoldForm::Sphere3, case([0, 0, 1], 1)), 1);
        assert!(matches!(
            isotopy_class_count(&l(5, 2), case([1, 1, 1], 6), Backend::Theorem),
            Err(ClassifyError::UnclassifiedCase { .. })
        ));
    }

    #[test]
    fn roles() {
        let r = heegaard_roles(&ManifoldForm::Sphere3, case([0, 1, 1], 2)).unwrap();
        assert_eq!((r.kind, r.handlebodies), (RoleKind::All, vec![2, 3]));
        let r = heegaard_roles(&l(5, 2), case([1, 1, 1], 4)).unwrap();
        assert_eq!(r.kind, RoleKind::ExactlyOne);
        assert!(heegaard_roles(&l(5, 2), case([1, 1, 1], 6)).is_err());
    }

    #[test]
    fn audit_examples() {
        let r = consistency_report(&l(7, 2));
        assert_eq!(r, vec![Disagreement { case: case([1, 1, 1], 2), theorem: 4, derived: 3 }]);
        assert!(consistency_report(&ManifoldForm::Sphere3).is_empty());
        assert!(consistency_report(&l(2, 1)).is_empty());
    }

    #[test]
    fn seifert() {
        let f = seifert_case_facts(&l(4, 1));
        assert!(f.case6_exists);
        assert_eq!(f.bases[1], BaseOption { base: BaseSpace::Rp2, max_singular_fibres: 0 });
        assert!(!seifert_case_facts(&l(5, 1)).case6_exists);
        assert_eq!(seifert_case_facts(&ManifoldForm::Sphere3).bases.len(), 1);
    }
}
