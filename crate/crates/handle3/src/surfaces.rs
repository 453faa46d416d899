//! Compact orientable surface pieces and the arc-cut / band-attach calculus.
//!
//! A piece is recorded only by `(genus, boundary)`. Boundary circles are
//! numbered `0..boundary` inside a piece. After any surgery the surviving
//! circles keep their relative order and freshly created circles go last.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfacePiece {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_count: u32,
}

impl SurfacePiece {
    pub const DISK: SurfacePiece = SurfacePiece::new(0, 1);
    pub const ANNULUS: SurfacePiece = SurfacePiece::new(0, 2);
    pub const PANTS: SurfacePiece = SurfacePiece::new(0, 3);
    pub const PUNCTURED_TORUS: SurfacePiece = SurfacePiece::new(1, 1);

    pub const fn new(genus: u32, boundary_count: u32) -> Self {
        SurfacePiece { genus, boundary_count }
    }

    pub fn euler_char(&self) -> i64 {
        euler_char(*self)
    }

    pub fn is_disk(&self) -> bool {
        *self == Self::DISK
    }

    pub fn is_annulus(&self) -> bool {
        *self == Self::ANNULUS
    }
}

impl fmt::Display for SurfacePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_name(*self))
    }
}

pub fn euler_char(piece: SurfacePiece) -> i64 {
    2 - 2 * piece.genus as i64 - piece.boundary_count as i64
}

pub fn total_euler_char(pieces: &[SurfacePiece]) -> i64 {
    pieces.iter().map(|p| p.euler_char()).sum()
}

pub fn canonical_name(piece: SurfacePiece) -> String {
    match (piece.genus, piece.boundary_count) {
        (0, 1) => "D".into(),
        (0, 2) => "A".into(),
        (0, 3) => "P".into(),
        (1, 1) => "T*".into(),
        (g, c) => format!("S({g},{c})"),
    }
}

/// Multiset canonical order: lexicographic by (genus, boundary).
pub fn canonical_multiset(pieces: &[SurfacePiece]) -> Vec<SurfacePiece> {
    let mut out = pieces.to_vec();
    out.sort();
    out
}

pub fn multiset_name(pieces: &[SurfacePiece]) -> String {
    let names: Vec<String> = canonical_multiset(pieces).iter().map(|p| canonical_name(*p)).collect();
    if names.is_empty() {
        "()".into()
    } else {
        names.join("+")
    }
}

/// What happens when both ends of an arc sit on the same boundary circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcOutcome {
    /// Non-separating arc through a handle: `(g-1, c+1)`, one piece.
    #[serde(alias = "reduce_genus")]
    SplitBoundary,
    /// Separating arc. The first piece gets `genus` and the listed other
    /// circles plus one half of the cut circle; the second piece gets the rest.
    SeparatePiece { genus: u32, circles: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcDescriptor {
    pub piece: usize,
    pub endpoints: (u32, u32),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<ArcOutcome>,
}

impl ArcDescriptor {
    pub fn spanning(piece: usize, a: u32, b: u32) -> Self {
        ArcDescriptor { piece, endpoints: (a, b), outcome: None }
    }

    pub fn looped(piece: usize, circle: u32, outcome: ArcOutcome) -> Self {
        ArcDescriptor { piece, endpoints: (circle, circle), outcome: Some(outcome) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandFoot {
    pub piece: usize,
    pub circle: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandDescriptor {
    pub targets: Vec<BandFoot>,
    #[serde(default)]
    pub twisted: bool,
}

impl BandDescriptor {
    pub fn on_circle(piece: usize, circle: u32) -> Self {
        BandDescriptor { targets: vec![BandFoot { piece, circle }], twisted: false }
    }

    pub fn joining(a: BandFoot, b: BandFoot) -> Self {
        BandDescriptor { targets: vec![a, b], twisted: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("illegal arc: {0}")]
    IllegalArc(String),
    #[error("inconsistent outcome: {0}")]
    InconsistentOutcome(String),
    #[error("illegal band: {0}")]
    IllegalBand(String),
    #[error("twisted bands are not allowed")]
    TwistedBand,
}

/// A piece together with a label for each of its boundary circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeled<T> {
    pub piece: SurfacePiece,
    pub circles: Vec<T>,
}

impl<T: Clone> Labeled<T> {
    pub fn new(piece: SurfacePiece, circles: Vec<T>) -> Self {
        Labeled { piece, circles }
    }
}

fn indexed(piece: SurfacePiece) -> Labeled<u32> {
    Labeled::new(piece, (0..piece.boundary_count).collect())
}

fn check_circle(piece: SurfacePiece, c: u32, what: &str) -> Result<(), SurgeryError> {
    if c >= piece.boundary_count {
        return Err(SurgeryError::IllegalArc(format!(
            "{what} {c} is not a boundary circle of {}",
            canonical_name(piece)
        )));
    }
    Ok(())
}

/// Cut a labeled piece along an arc. `fresh.0` labels the merged circle when
/// the endpoints differ; otherwise the two halves of the cut circle get
/// `fresh.0` and `fresh.1`.
pub fn cut_labeled<T: Clone + PartialEq>(
    p: &Labeled<T>,
    arc: &ArcDescriptor,
    fresh: (T, T),
) -> Result<Vec<Labeled<T>>, SurgeryError> {
    let piece = p.piece;
    if p.circles.len() != piece.boundary_count as usize {
        return Err(SurgeryError::IllegalArc("circle labels do not match the piece".into()));
    }
    let (a, b) = arc.endpoints;
    check_circle(piece, a, "endpoint")?;
    check_circle(piece, b, "endpoint")?;
    let g = piece.genus;
    let c = piece.boundary_count;

    if a != b {
        let mut circles: Vec<T> = p
            .circles
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u32 != a && *i as u32 != b)
            .map(|(_, l)| l.clone())
            .collect();
        circles.push(fresh.0);
        return Ok(vec![Labeled::new(SurfacePiece::new(g, c - 1), circles)]);
    }

    let rest: Vec<(u32, T)> =
        p.circles.iter().enumerate().filter(|(i, _)| *i as u32 != a).map(|(i, l)| (i as u32, l.clone())).collect();
    match &arc.outcome {
        None => Err(SurgeryError::InconsistentOutcome("endpoints on one circle need an outcome selector".into())),
        Some(ArcOutcome::SplitBoundary) => {
            if g == 0 {
                return Err(SurgeryError::InconsistentOutcome(
                    "a non-separating arc on one circle needs genus >= 1".into(),
                ));
            }
            let mut circles: Vec<T> = rest.into_iter().map(|(_, l)| l).collect();
            circles.push(fresh.0);
            circles.push(fresh.1);
            Ok(vec![Labeled::new(SurfacePiece::new(g - 1, c + 1), circles)])
        }
        Some(ArcOutcome::SeparatePiece { genus, circles }) => {
            if *genus > g {
                return Err(SurgeryError::InconsistentOutcome(format!("split genus {genus} exceeds piece genus {g}")));
            }
            let mut seen = Vec::new();
            for &k in circles {
                check_circle(piece, k, "split circle")?;
                if k == a || seen.contains(&k) {
                    return Err(SurgeryError::InconsistentOutcome(format!(
                        "split circle {k} is the cut circle or repeated"
                    )));
                }
                seen.push(k);
            }
            let mut first: Vec<T> = Vec::new();
            let mut second: Vec<T> = Vec::new();
            for (i, l) in rest {
                if circles.contains(&i) {
                    first.push(l);
                } else {
                    second.push(l);
                }
            }
            first.push(fresh.0);
            second.push(fresh.1);
            let p1 = SurfacePiece::new(*genus, first.len() as u32);
            let p2 = SurfacePiece::new(g - genus, second.len() as u32);
            Ok(vec![Labeled::new(p1, first), Labeled::new(p2, second)])
        }
    }
}

/// Attach an untwisted band to a labeled multiset. Untouched pieces keep their
/// order; the modified piece is appended at the end.
pub fn band_labeled<T: Clone + PartialEq>(
    pieces: &[Labeled<T>],
    band: &BandDescriptor,
    fresh: (T, T),
) -> Result<Vec<Labeled<T>>, SurgeryError> {
    if band.twisted {
        return Err(SurgeryError::TwistedBand);
    }
    let feet = &band.targets;
    if feet.is_empty() || feet.len() > 2 {
        return Err(SurgeryError::IllegalBand(format!("a band has one or two feet, got {}", feet.len())));
    }
    for f in feet {
        let p = pieces.get(f.piece).ok_or_else(|| SurgeryError::IllegalBand(format!("no piece {}", f.piece)))?;
        if f.circle >= p.piece.boundary_count {
            return Err(SurgeryError::IllegalBand(format!("piece {} has no circle {}", f.piece, f.circle)));
        }
    }
    let same_circle = feet.len() == 1 || feet[0] == feet[1];
    let mut out: Vec<Labeled<T>> = Vec::with_capacity(pieces.len());

    if same_circle {
        let f = feet[0];
        for (i, p) in pieces.iter().enumerate() {
            if i != f.piece {
                out.push(p.clone());
            }
        }
        let p = &pieces[f.piece];
        let mut circles: Vec<T> = drop_circles(&p.circles, &[f.circle]);
        circles.push(fresh.0);
        circles.push(fresh.1);
        out.push(Labeled::new(SurfacePiece::new(p.piece.genus, p.piece.boundary_count + 1), circles));
        return Ok(out);
    }

    let (f0, f1) = (feet[0], feet[1]);
    if f0.piece == f1.piece {
        for (i, p) in pieces.iter().enumerate() {
            if i != f0.piece {
                out.push(p.clone());
            }
        }
        let p = &pieces[f0.piece];
        let mut circles = drop_circles(&p.circles, &[f0.circle, f1.circle]);
        circles.push(fresh.0);
        out.push(Labeled::new(SurfacePiece::new(p.piece.genus + 1, p.piece.boundary_count - 1), circles));
        return Ok(out);
    }

    for (i, p) in pieces.iter().enumerate() {
        if i != f0.piece && i != f1.piece {
            out.push(p.clone());
        }
    }
    let (p0, p1) = (&pieces[f0.piece], &pieces[f1.piece]);
    let mut circles = drop_circles(&p0.circles, &[f0.circle]);
    circles.extend(drop_circles(&p1.circles, &[f1.circle]));
    circles.push(fresh.0);
    out.push(Labeled::new(
        SurfacePiece::new(p0.piece.genus + p1.piece.genus, p0.piece.boundary_count + p1.piece.boundary_count - 1),
        circles,
    ));
    Ok(out)
}

fn drop_circles<T: Clone>(circles: &[T], skip: &[u32]) -> Vec<T> {
    circles.iter().enumerate().filter(|(i, _)| !skip.contains(&(*i as u32))).map(|(_, l)| l.clone()).collect()
}

pub fn cut_along_arc(piece: SurfacePiece, arc: &ArcDescriptor) -> Result<Vec<SurfacePiece>, SurgeryError> {
    let c = piece.boundary_count;
    let out = cut_labeled(&indexed(piece), arc, (c, c + 1))?;
    Ok(out.into_iter().map(|l| l.piece).collect())
}

pub fn attach_band(pieces: &[SurfacePiece], band: &BandDescriptor) -> Result<Vec<SurfacePiece>, SurgeryError> {
    let labeled: Vec<Labeled<u32>> = pieces.iter().map(|p| indexed(*p)).collect();
    let out = band_labeled(&labeled, band, (u32::MAX - 1, u32::MAX))?;
    Ok(out.into_iter().map(|l| l.piece).collect())
}

/// The band that undoes `arc` on `piece`, stated against the circle numbering
/// of the cut result (a single piece, or the two pieces of a separating cut).
pub fn inverse_of_cut(piece: SurfacePiece, arc: &ArcDescriptor) -> Result<BandDescriptor, SurgeryError> {
    let out = cut_along_arc(piece, arc)?;
    let (a, b) = arc.endpoints;
    if a != b {
        let last = out[0].boundary_count - 1;
        return Ok(BandDescriptor::on_circle(0, last));
    }
    match out.as_slice() {
        [one] => {
            let c = one.boundary_count;
            Ok(BandDescriptor::joining(BandFoot { piece: 0, circle: c - 2 }, BandFoot { piece: 0, circle: c - 1 }))
        }
        [first, second] => Ok(BandDescriptor::joining(
            BandFoot { piece: 0, circle: first.boundary_count - 1 },
            BandFoot { piece: 1, circle: second.boundary_count - 1 },
        )),
        _ => unreachable!("a cut yields one or two pieces"),
    }
}

/// The arc that undoes `band`, stated against the circle numbering of the
/// banded multiset (the modified piece is always last).
pub fn inverse_of_band(pieces: &[SurfacePiece], band: &BandDescriptor) -> Result<ArcDescriptor, SurgeryError> {
    let out = attach_band(pieces, band)?;
    let idx = out.len() - 1;
    let new = out[idx];
    let feet = &band.targets;
    let same_circle = feet.len() == 1 || feet[0] == feet[1];
    if same_circle {
        let c = new.boundary_count;
        return Ok(ArcDescriptor::spanning(idx, c - 2, c - 1));
    }
    let last = new.boundary_count - 1;
    if feet[0].piece == feet[1].piece {
        return Ok(ArcDescriptor::looped(idx, last, ArcOutcome::SplitBoundary));
    }
    let p0 = pieces[feet[0].piece];
    let keep: Vec<u32> = (0..p0.boundary_count - 1).collect();
    Ok(ArcDescriptor::looped(idx, last, ArcOutcome::SeparatePiece { genus: p0.genus, circles: keep }))
}

/// Every legal arc on `piece`, including every separating split.
pub fn legal_arcs(piece: SurfacePiece) -> Vec<ArcDescriptor> {
    let c = piece.boundary_count;
    let mut arcs = Vec::new();
    for a in 0..c {
        for b in (a + 1)..c {
            arcs.push(ArcDescriptor::spanning(0, a, b));
        }
    }
    for a in 0..c {
        if piece.genus >= 1 {
            arcs.push(ArcDescriptor::looped(0, a, ArcOutcome::SplitBoundary));
        }
        let others: Vec<u32> = (0..c).filter(|&k| k != a).collect();
        for mask in 0u32..(1 << others.len()) {
            let chosen: Vec<u32> =
                others.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, k)| *k).collect();
            for genus in 0..=piece.genus {
                arcs.push(ArcDescriptor::looped(0, a, ArcOutcome::SeparatePiece { genus, circles: chosen.clone() }));
            }
        }
    }
    arcs
}

/// Every legal untwisted band on a multiset.
pub fn legal_bands(pieces: &[SurfacePiece]) -> Vec<BandDescriptor> {
    let feet: Vec<BandFoot> = pieces
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..p.boundary_count).map(move |c| BandFoot { piece: i, circle: c }))
        .collect();
    let mut bands = Vec::new();
    for (i, a) in feet.iter().enumerate() {
        bands.push(BandDescriptor::on_circle(a.piece, a.circle));
        for b in &feet[i + 1..] {
            bands.push(BandDescriptor::joining(*a, *b));
        }
    }
    bands
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: SurfacePiece = SurfacePiece::DISK;
    const A: SurfacePiece = SurfacePiece::ANNULUS;
    const P: SurfacePiece = SurfacePiece::PANTS;
    const T: SurfacePiece = SurfacePiece::PUNCTURED_TORUS;

    #[test]
    fn euler_and_names() {
        assert_eq!(euler_char(D), 1);
        assert_eq!(euler_char(P), -1);
        assert_eq!(euler_char(T), -1);
        assert_eq!(canonical_name(A), "A");
        assert_eq!(canonical_name(T), "T*");
        assert_eq!(canonical_name(SurfacePiece::new(2, 5)), "S(2,5)");
    }

    #[test]
    fn cut_examples() {
        let split = ArcDescriptor::looped(0, 0, ArcOutcome::SeparatePiece { genus: 0, circles: vec![] });
        assert_eq!(cut_along_arc(D, &split).unwrap(), vec![D, D]);
        assert_eq!(cut_along_arc(A, &ArcDescriptor::spanning(0, 0, 1)).unwrap(), vec![D]);
        let through = ArcDescriptor::looped(0, 0, ArcOutcome::SplitBoundary);
        assert_eq!(cut_along_arc(T, &through).unwrap(), vec![A]);
    }

    #[test]
    fn cut_rejects_bad_selectors() {
        let through = ArcDescriptor::looped(0, 0, ArcOutcome::SplitBoundary);
        assert!(matches!(cut_along_arc(D, &through), Err(SurgeryError::InconsistentOutcome(_))));
        assert!(matches!(cut_along_arc(A, &ArcDescriptor::spanning(0, 0, 2)), Err(SurgeryError::IllegalArc(_))));
        let bare = ArcDescriptor { piece: 0, endpoints: (0, 0), outcome: None };
        assert!(matches!(cut_along_arc(A, &bare), Err(SurgeryError::InconsistentOutcome(_))));
    }

    #[test]
    fn band_examples() {
        assert_eq!(attach_band(&[D], &BandDescriptor::on_circle(0, 0)).unwrap(), vec![A]);
        let across = BandDescriptor::joining(BandFoot { piece: 0, circle: 0 }, BandFoot { piece: 0, circle: 1 });
        assert_eq!(attach_band(&[A], &across).unwrap(), vec![T]);
        let two = BandDescriptor::joining(BandFoot { piece: 0, circle: 0 }, BandFoot { piece: 1, circle: 0 });
        assert_eq!(attach_band(&[D, D], &two).unwrap(), vec![D]);
    }

    #[test]
    fn twisted_band_rejected() {
        let mut b = BandDescriptor::on_circle(0, 0);
        b.twisted = true;
        assert_eq!(attach_band(&[D], &b), Err(SurgeryError::TwistedBand));
    }

    #[test]
    fn serde_shape() {
        let v = serde_json::to_value(A).unwrap();
        assert_eq!(v, serde_json::json!({"genus": 0, "boundary": 2}));
        let o: ArcOutcome = serde_json::from_str("\"reduce_genus\"").unwrap();
        assert_eq!(o, ArcOutcome::SplitBoundary);
    }
}
