//! Type-0 and type-1 stabilizations, type-1 destabilization and greedy
//! stable reduction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{validate, CurveClass, Decomposition, LocusId, Pair, Violation};
use crate::surfaces::{
    band_labeled, cut_labeled, legal_arcs, ArcDescriptor, BandDescriptor, BandFoot, Labeled, SurfacePiece, SurgeryError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{pair} has no component {index}")]
    UnknownComponent { pair: Pair, index: usize },
    #[error("a type-0 stabilization names one or two distinct components, got {0}")]
    BadComponents(usize),
    #[error("handlebody index {0} is not in 1..=3")]
    BadHandlebody(usize),
    #[error("illegal arc: {0}")]
    IllegalArc(#[from] SurgeryError),
    #[error("arc endpoints sit on loci {found:?}, not {expected:?}")]
    LocusMismatch { expected: [LocusId; 2], found: [LocusId; 2] },
    #[error("witness does not match any destabilization of the current decomposition")]
    StaleWitness,
    #[error("move produced an invalid decomposition: {0:?}")]
    InvalidResult(Vec<Violation>),
}

/// Certificate for a type-1 destabilization of `handlebody`: a meridian disk
/// whose boundary meets the loci in two points, plus the surgery realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub handlebody: usize,
    /// The loci met by the disk boundary; equal when one locus is met twice.
    pub loci: [LocusId; 2],
    /// Arcs cut from the two patches on the boundary of `handlebody`, in
    /// `Pair::touching` order.
    pub cuts: [ArcDescriptor; 2],
    /// Band returned to the opposite patch.
    pub band: BandDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Candidates {
    pub witnesses: Vec<Witness>,
    /// Genus-1 handlebodies whose meridian tags are partly unknown, so the
    /// absence of a witness cannot be certified.
    pub indeterminate: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveRecord {
    Type0 {
        pair: Pair,
        components: Vec<usize>,
    },
    Type1 {
        handlebody: usize,
        arc: ArcDescriptor,
        loci: [LocusId; 2],
    },
    #[serde(rename = "type1_destab")]
    Type1Destab {
        witness: Witness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveScript {
    pub moves: Vec<MoveRecord>,
}

impl MoveScript {
    /// Accepts `{"moves": [...]}` or a bare array of records.
    pub fn from_json_str(s: &str) -> Result<MoveScript, serde_json::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Wrapped(MoveScript),
            Bare(Vec<MoveRecord>),
        }
        Ok(match serde_json::from_str(s)? {
            Raw::Wrapped(m) => m,
            Raw::Bare(moves) => MoveScript { moves },
        })
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    }
}

fn check_handlebody(i: usize) -> Result<(), MoveError> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(MoveError::BadHandlebody(i))
    }
}

fn finish(d: Decomposition) -> Result<Decomposition, MoveError> {
    let r = validate(&d);
    if r.is_valid() {
        Ok(d)
    } else {
        Err(MoveError::InvalidResult(r.violations))
    }
}

#[derive(Debug, Clone, Copy)]
enum LocusChange {
    Split { old: LocusId, new: LocusId },
    Merge { kept: LocusId, removed: LocusId },
}

/// Recompute curve classes after a type-1 move or its inverse. `changed` is
/// the handlebody that gained or lost the handle.
fn retag(before: &Decomposition, after: &mut Decomposition, changed: usize, change: LocusChange) {
    let graphs: Vec<_> = (1..=3).map(|h| after.boundary_graph(h)).collect();
    for h in 1..=3 {
        let g = after.genus(h);
        let graph = graphs[h - 1].as_ref();
        let bridge = |id: LocusId| graph.is_some_and(|gr| gr.is_bridge(id));
        let old = |id: LocusId| before.class(id, h).and_then(|c| c.meridian);
        let ids: Vec<LocusId> = after.loci.iter().map(|l| l.id).collect();
        for id in ids {
            let essential = g >= 1 && !bridge(id);
            let meridian = if g == 0 {
                Some(0)
            } else if g >= 2 {
                None
            } else if h == changed {
                match change {
                    LocusChange::Split { old: o, new: n } if id == o || id == n => Some(1),
                    LocusChange::Merge { kept, .. } if id == kept => Some(2),
                    _ => Some(0),
                }
            } else {
                match change {
                    LocusChange::Merge { kept, removed } if id == kept => {
                        old(kept).zip(old(removed)).map(|(a, b)| a + b)
                    }
                    LocusChange::Split { old: o, new: n } if id == o || id == n => {
                        let m = old(o);
                        let e_old = !bridge(o);
                        let e_new = !bridge(n);
                        match (e_old, e_new) {
                            (true, true) => m.and_then(|m| (m % 2 == 0).then_some(m / 2)),
                            (true, false) => {
                                if id == o {
                                    m
                                } else {
                                    Some(0)
                                }
                            }
                            (false, true) => {
                                if id == n {
                                    m
                                } else {
                                    Some(0)
                                }
                            }
                            (false, false) => {
                                if id == o {
                                    m
                                } else {
                                    Some(0)
                                }
                            }
                        }
                    }
                    _ => old(id),
                }
            };
            let l = after.locus_mut(id).expect("listed id");
            l.classes[h - 1] = CurveClass { essential, meridian };
        }
    }
}

/// Push a boundary-parallel arc of `H_i` across `F_ij` into `H_j`, either
/// tubing one component or joining two.
pub fn stabilize_type0(d: &Decomposition, pair: Pair, components: &[usize]) -> Result<Decomposition, MoveError> {
    let mut pieces = d.labeled(pair);
    for &c in components {
        if c >= pieces.len() {
            return Err(MoveError::UnknownComponent { pair, index: c });
        }
    }
    match components {
        [c] => {
            let p = &mut pieces[*c];
            p.piece = SurfacePiece::new(p.piece.genus + 1, p.piece.boundary_count);
        }
        [a, b] if a != b => {
            let (pa, pb) = (pieces[*a].clone(), pieces[*b].clone());
            let mut circles = pa.circles.clone();
            circles.extend(pb.circles.iter().copied());
            let merged = Labeled::new(
                SurfacePiece::new(pa.piece.genus + pb.piece.genus, pa.piece.boundary_count + pb.piece.boundary_count),
                circles,
            );
            pieces = pieces.into_iter().enumerate().filter(|(i, _)| i != a && i != b).map(|(_, p)| p).collect();
            pieces.push(merged);
        }
        _ => return Err(MoveError::BadComponents(components.len())),
    }
    let mut out = d.clone();
    out.set_labeled(pair, pieces);
    let (i, j) = pair.handlebodies();
    out.genera[i - 1] += 1;
    out.genera[j - 1] += 1;
    let graphs: Vec<_> = (1..=3).map(|h| out.boundary_graph(h)).collect();
    for h in [i, j] {
        let g = out.genus(h);
        let graph = graphs[h - 1].as_ref();
        for l in &mut out.loci {
            let essential = !graph.is_some_and(|gr| gr.is_bridge(l.id));
            l.classes[h - 1] = CurveClass { essential, meridian: (g == 1).then_some(0) };
        }
    }
    finish(out)
}

/// Add a neighborhood of an arc on `F_jk` to `H_i`.
pub fn stabilize_type1(
    d: &Decomposition,
    i: usize,
    arc: &ArcDescriptor,
    loci: [LocusId; 2],
) -> Result<Decomposition, MoveError> {
    check_handlebody(i)?;
    let (j, k) = others(i);
    let f_jk = Pair::of(j, k).expect("distinct");
    let f_ij = Pair::of(i, j).expect("distinct");
    let f_ik = Pair::of(i, k).expect("distinct");
    let jk = d.labeled(f_jk);
    let piece = jk.get(arc.piece).ok_or(SurgeryError::IllegalArc(format!("{f_jk} has no component {}", arc.piece)))?;
    let (ea, eb) = arc.endpoints;
    let at = |c: u32| piece.circles.get(c as usize).copied();
    let (Some(la), Some(lb)) = (at(ea), at(eb)) else {
        return Err(SurgeryError::IllegalArc(format!("endpoints ({ea},{eb}) are not circles of the component")).into());
    };
    if [la, lb] != loci && [lb, la] != loci {
        return Err(MoveError::LocusMismatch { expected: loci, found: [la, lb] });
    }

    let mut out = d.clone();
    let change = if la == lb {
        let new = d.max_locus_id() + 1;
        let mut cut = cut_labeled(piece, arc, (la, new))?;
        let mut rest: Vec<_> = jk.iter().enumerate().filter(|(x, _)| *x != arc.piece).map(|(_, p)| p.clone()).collect();
        rest.append(&mut cut);
        out.set_labeled(f_jk, rest);
        for pair in [f_ij, f_ik] {
            let (pi, ci) = d.locate(pair, la).ok_or(MoveError::LocusMismatch { expected: loci, found: [la, lb] })?;
            let banded = band_labeled(&d.labeled(pair), &BandDescriptor::on_circle(pi, ci), (la, new))?;
            out.set_labeled(pair, banded);
        }
        let mut added = d.locus(la).expect("incident locus").clone();
        added.id = new;
        out.loci.push(added);
        LocusChange::Split { old: la, new }
    } else {
        let (kept, removed) = (la.min(lb), la.max(lb));
        let mut cut = cut_labeled(piece, arc, (kept, kept))?;
        let mut rest: Vec<_> = jk.iter().enumerate().filter(|(x, _)| *x != arc.piece).map(|(_, p)| p.clone()).collect();
        rest.append(&mut cut);
        out.set_labeled(f_jk, rest);
        for pair in [f_ij, f_ik] {
            let foot = |l: LocusId| {
                d.locate(pair, l)
                    .map(|(piece, circle)| BandFoot { piece, circle })
                    .ok_or(MoveError::LocusMismatch { expected: loci, found: [la, lb] })
            };
            let band = BandDescriptor::joining(foot(la)?, foot(lb)?);
            out.set_labeled(pair, band_labeled(&d.labeled(pair), &band, (kept, kept))?);
        }
        out.loci.retain(|l| l.id != removed);
        LocusChange::Merge { kept, removed }
    };
    out.genera[i - 1] += 1;
    retag(d, &mut out, i, change);
    finish(out)
}

fn remove_piece<T: Clone>(pieces: &[Labeled<T>], idx: usize) -> Vec<Labeled<T>> {
    pieces.iter().enumerate().filter(|(x, _)| *x != idx).map(|(_, p)| p.clone()).collect()
}

/// Apply the surgery described by a witness without checking that it is
/// currently offered.
fn apply_witness(d: &Decomposition, w: &Witness) -> Result<Decomposition, MoveError> {
    let i = w.handlebody;
    check_handlebody(i)?;
    let (j, k) = others(i);
    let f_jk = Pair::of(j, k).expect("distinct");
    let sides = Pair::touching(i);
    let [a, b] = w.loci;
    let mut out = d.clone();
    let change = if a == b {
        let new = d.max_locus_id() + 1;
        for (pair, arc) in sides.iter().zip(&w.cuts) {
            let pieces = d.labeled(*pair);
            let piece = pieces.get(arc.piece).ok_or(MoveError::StaleWitness)?;
            let mut rest = remove_piece(&pieces, arc.piece);
            rest.extend(cut_labeled(piece, arc, (a, new))?);
            out.set_labeled(*pair, rest);
        }
        out.set_labeled(f_jk, band_labeled(&d.labeled(f_jk), &w.band, (a, new))?);
        let mut added = d.locus(a).ok_or(MoveError::StaleWitness)?.clone();
        added.id = new;
        out.loci.push(added);
        LocusChange::Split { old: a, new }
    } else {
        let (kept, removed) = (a.min(b), a.max(b));
        for (pair, arc) in sides.iter().zip(&w.cuts) {
            let pieces = d.labeled(*pair);
            let piece = pieces.get(arc.piece).ok_or(MoveError::StaleWitness)?;
            let mut rest = remove_piece(&pieces, arc.piece);
            rest.extend(cut_labeled(piece, arc, (kept, kept))?);
            out.set_labeled(*pair, rest);
        }
        out.set_labeled(f_jk, band_labeled(&d.labeled(f_jk), &w.band, (kept, kept))?);
        out.loci.retain(|l| l.id != removed);
        LocusChange::Merge { kept, removed }
    };
    out.genera[i - 1] -= 1;
    retag(d, &mut out, i, change);
    finish(out)
}

/// Arcs cutting the circle of locus `l` on `pair` back into two circles,
/// in deterministic order.
fn splitting_arcs(d: &Decomposition, pair: Pair, l: LocusId) -> Vec<ArcDescriptor> {
    let Some((pi, ci)) = d.locate(pair, l) else { return Vec::new() };
    let piece = d.patch(pair)[pi];
    legal_arcs(piece)
        .into_iter()
        .filter(|a| a.endpoints == (ci, ci))
        .map(|mut a| {
            a.piece = pi;
            a
        })
        .collect()
}

fn witnesses_for(d: &Decomposition, i: usize) -> Vec<Witness> {
    let (j, k) = others(i);
    let f_jk = Pair::of(j, k).expect("distinct");
    let sides = Pair::touching(i);
    let tags: Vec<(LocusId, u32)> =
        d.loci.iter().filter_map(|l| l.classes[i - 1].meridian.filter(|&m| m > 0).map(|m| (l.id, m))).collect();
    let mut out = Vec::new();
    match tags.as_slice() {
        [(a, 1), (b, 1)] => {
            let (a, b) = ((*a).min(*b), (*a).max(*b));
            let mut cuts = Vec::new();
            for pair in sides {
                match (d.locate(pair, a), d.locate(pair, b)) {
                    (Some((pa, ca)), Some((pb, cb))) if pa == pb => cuts.push(ArcDescriptor::spanning(pa, ca, cb)),
                    _ => return out,
                }
            }
            let (Some((pa, ca)), Some((pb, cb))) = (d.locate(f_jk, a), d.locate(f_jk, b)) else { return out };
            let band = BandDescriptor::joining(BandFoot { piece: pa, circle: ca }, BandFoot { piece: pb, circle: cb });
            let w = Witness { handlebody: i, loci: [a, b], cuts: [cuts[0].clone(), cuts[1].clone()], band };
            if apply_witness(d, &w).is_ok() {
                out.push(w);
            }
        }
        [(a, 2)] => {
            let Some((pj, cj)) = d.locate(f_jk, *a) else { return out };
            let band = BandDescriptor::on_circle(pj, cj);
            'search: for c0 in splitting_arcs(d, sides[0], *a) {
                for c1 in splitting_arcs(d, sides[1], *a) {
                    let w = Witness { handlebody: i, loci: [*a, *a], cuts: [c0.clone(), c1], band: band.clone() };
                    if apply_witness(d, &w).is_ok() {
                        out.push(w);
                        break 'search;
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Destabilizing disks certified by the meridian tags: for each genus-1
/// handlebody whose loci meet its meridian exactly twice in total.
pub fn destabilization_candidates(d: &Decomposition) -> Candidates {
    let mut c = Candidates::default();
    for i in 1..=3 {
        if d.genus(i) != 1 {
            continue;
        }
        if d.loci.iter().any(|l| l.classes[i - 1].meridian.is_none()) {
            c.indeterminate.push(i);
            continue;
        }
        let total: u32 = d.loci.iter().filter_map(|l| l.classes[i - 1].meridian).sum();
        if total == 2 {
            c.witnesses.extend(witnesses_for(d, i));
        }
    }
    c
}

pub fn destabilize_type1(d: &Decomposition, w: &Witness) -> Result<Decomposition, MoveError> {
    if !destabilization_candidates(d).witnesses.contains(w) {
        return Err(MoveError::StaleWitness);
    }
    apply_witness(d, w)
}

pub fn apply_move(d: &Decomposition, m: &MoveRecord) -> Result<Decomposition, MoveError> {
    match m {
        MoveRecord::Type0 { pair, components } => stabilize_type0(d, *pair, components),
        MoveRecord::Type1 { handlebody, arc, loci } => stabilize_type1(d, *handlebody, arc, *loci),
        MoveRecord::Type1Destab { witness } => destabilize_type1(d, witness),
    }
}

/// Apply every record in order, returning each intermediate state.
pub fn apply_script(d: &Decomposition, script: &MoveScript) -> Result<Vec<Decomposition>, (usize, MoveError)> {
    let mut states = vec![d.clone()];
    for (n, m) in script.moves.iter().enumerate() {
        let next = apply_move(states.last().expect("non-empty"), m).map_err(|e| (n, e))?;
        states.push(next);
    }
    Ok(states)
}

/// Destabilize greedily, lowest handlebody then lowest loci first, until no
/// witness remains.
pub fn stable_reduce(d: &Decomposition) -> (Decomposition, MoveScript) {
    let mut cur = d.clone();
    let mut script = MoveScript::default();
    let bound: u32 = d.genera.iter().sum();
    for _ in 0..bound {
        let mut ws = destabilization_candidates(&cur).witnesses;
        ws.sort_by_key(|w| (w.handlebody, w.loci));
        let Some(w) = ws.into_iter().next() else { break };
        match apply_witness(&cur, &w) {
            Ok(next) => {
                cur = next;
                script.moves.push(MoveRecord::Type1Destab { witness: w });
            }
            Err(_) => break,
        }
    }
    (cur, script)
}
