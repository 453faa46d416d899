//! Handlebody decompositions: data model, validity checks, admissibility,
//! disk reduction and the profile enumerator.

mod enumerate;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lens::ManifoldForm;
use crate::surfaces::{Labeled, SurfacePiece};

pub use enumerate::{
    canonical_profile, enumerate_profiles, match_case, reference_profile, sorting_permutation, Enumeration, Profile,
    ProfileCase, PruneRule, Rejection, MAX_LOCI_LIMIT,
};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

pub type LocusId = u32;

/// One of the three patch surfaces F12, F13, F23.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    F12,
    F13,
    F23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::F12, Pair::F13, Pair::F23];

    /// Build from two distinct handlebody indices in 1..=3.
    pub fn of(i: usize, j: usize) -> Option<Pair> {
        match (i.min(j), i.max(j)) {
            (1, 2) => Some(Pair::F12),
            (1, 3) => Some(Pair::F13),
            (2, 3) => Some(Pair::F23),
            _ => None,
        }
    }

    pub fn handlebodies(self) -> (usize, usize) {
        match self {
            Pair::F12 => (1, 2),
            Pair::F13 => (1, 3),
            Pair::F23 => (2, 3),
        }
    }

    /// The handlebody not touching this patch.
    pub fn opposite(self) -> usize {
        6 - self.handlebodies().0 - self.handlebodies().1
    }

    pub fn contains(self, h: usize) -> bool {
        let (i, j) = self.handlebodies();
        h == i || h == j
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two patches making up the boundary of handlebody `h`.
    pub fn touching(h: usize) -> [Pair; 2] {
        match h {
            1 => [Pair::F12, Pair::F13],
            2 => [Pair::F12, Pair::F23],
            3 => [Pair::F13, Pair::F23],
            _ => panic!("handlebody index {h} out of range"),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.handlebodies();
        write!(f, "F{i}{j}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct PerPair<T> {
    pub f12: T,
    pub f13: T,
    pub f23: T,
}

impl<T> PerPair<T> {
    pub fn get(&self, pair: Pair) -> &T {
        match pair {
            Pair::F12 => &self.f12,
            Pair::F13 => &self.f13,
            Pair::F23 => &self.f23,
        }
    }

    pub fn get_mut(&mut self, pair: Pair) -> &mut T {
        match pair {
            Pair::F12 => &mut self.f12,
            Pair::F13 => &mut self.f13,
            Pair::F23 => &mut self.f23,
        }
    }

    pub fn from_fn(mut f: impl FnMut(Pair) -> T) -> Self {
        PerPair { f12: f(Pair::F12), f13: f(Pair::F13), f23: f(Pair::F23) }
    }
}

/// Class of a branched locus on one handlebody boundary. `meridian` counts
/// intersections with a meridian disk boundary; `None` means unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    pub essential: bool,
    pub meridian: Option<u32>,
}

impl CurveClass {
    pub const TRIVIAL: CurveClass = CurveClass { essential: false, meridian: Some(0) };

    pub const fn new(essential: bool, meridian: u32) -> Self {
        CurveClass { essential, meridian: Some(meridian) }
    }

    pub const fn unknown(essential: bool) -> Self {
        CurveClass { essential, meridian: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchedLocus {
    pub id: LocusId,
    /// Indexed by handlebody 1, 2, 3.
    pub classes: [CurveClass; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub manifold: ManifoldForm,
    pub genera: [u32; 3],
    pub patches: PerPair<Vec<SurfacePiece>>,
    pub loci: Vec<BranchedLocus>,
    /// For each patch piece, the locus id of each of its boundary circles.
    pub incidence: PerPair<Vec<Vec<LocusId>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("genera component {0} is out of range (only 0 and 1 are classified)")]
    OutOfRange(u32),
    #[error("max_loci must be at least 1")]
    BadMaxLoci,
    #[error("component {index} of {pair} is not a disk")]
    NotADisk { pair: Pair, index: usize },
    #[error("{pair} has no component {index}")]
    UnknownComponent { pair: Pair, index: usize },
    #[error("handlebody {handlebody} has genus {genus}, expected 1")]
    WrongGenus { handlebody: usize, genus: u32 },
    #[error("locus {locus} is not essential on handlebody {handlebody}")]
    NotEssential { locus: LocusId, handlebody: usize },
    #[error("locus {locus} meets the meridian of handlebody {handlebody} {tag} times, which caps to S2 x S1 or a foreign summand")]
    BadMeridian { locus: LocusId, handlebody: usize, tag: u32 },
    #[error("meridian tag of locus {locus} on handlebody {handlebody} is unknown")]
    UnknownTag { locus: LocusId, handlebody: usize },
    #[error("reduction leaves a closed piece or no loci")]
    Degenerate,
    #[error("malformed decomposition: {0}")]
    Malformed(String),
    #[error("cannot parse decomposition JSON: {0}")]
    Parse(String),
}

impl Decomposition {
    pub fn b(&self) -> usize {
        self.loci.len()
    }

    pub fn genus(&self, h: usize) -> u32 {
        self.genera[h - 1]
    }

    pub fn patch(&self, pair: Pair) -> &[SurfacePiece] {
        self.patches.get(pair)
    }

    pub fn locus(&self, id: LocusId) -> Option<&BranchedLocus> {
        self.loci.iter().find(|l| l.id == id)
    }

    pub fn locus_mut(&mut self, id: LocusId) -> Option<&mut BranchedLocus> {
        self.loci.iter_mut().find(|l| l.id == id)
    }

    pub fn class(&self, id: LocusId, h: usize) -> Option<CurveClass> {
        self.locus(id).map(|l| l.classes[h - 1])
    }

    pub fn max_locus_id(&self) -> LocusId {
        self.loci.iter().map(|l| l.id).max().unwrap_or(0)
    }

    /// The pieces of a patch with their circle labels.
    pub fn labeled(&self, pair: Pair) -> Vec<Labeled<LocusId>> {
        self.patch(pair).iter().zip(self.incidence.get(pair)).map(|(p, c)| Labeled::new(*p, c.clone())).collect()
    }

    pub fn set_labeled(&mut self, pair: Pair, pieces: Vec<Labeled<LocusId>>) {
        *self.patches.get_mut(pair) = pieces.iter().map(|l| l.piece).collect();
        *self.incidence.get_mut(pair) = pieces.into_iter().map(|l| l.circles).collect();
    }

    /// `(piece, circle)` where locus `id` sits on patch `pair`.
    pub fn locate(&self, pair: Pair, id: LocusId) -> Option<(usize, u32)> {
        self.incidence
            .get(pair)
            .iter()
            .enumerate()
            .find_map(|(pi, circles)| circles.iter().position(|&l| l == id).map(|c| (pi, c as u32)))
    }

    /// Graph of the closed surface bounding handlebody `h`: pieces of its two
    /// patches as vertices, loci as edges. Requires consistent incidence.
    pub fn boundary_graph(&self, h: usize) -> Option<BoundaryGraph> {
        let [a, b] = Pair::touching(h);
        let na = self.patch(a).len();
        let nb = self.patch(b).len();
        let mut edges = Vec::with_capacity(self.b());
        for l in &self.loci {
            let (pa, _) = self.locate(a, l.id)?;
            let (pb, _) = self.locate(b, l.id)?;
            edges.push((l.id, pa, na + pb));
        }
        let genus_sum: u32 = self.patch(a).iter().chain(self.patch(b)).map(|p| p.genus).sum();
        Some(BoundaryGraph { vertices: na + nb, edges, genus_sum })
    }

    /// Permute handlebody labels: old handlebody `h` becomes `perm[h-1]`.
    pub fn relabel_handlebodies(&self, perm: [usize; 3]) -> Decomposition {
        let mut genera = [0; 3];
        for h in 0..3 {
            genera[perm[h] - 1] = self.genera[h];
        }
        let mut patches = PerPair::<Vec<SurfacePiece>>::default();
        let mut incidence = PerPair::<Vec<Vec<LocusId>>>::default();
        for pair in Pair::ALL {
            let (i, j) = pair.handlebodies();
            let target = Pair::of(perm[i - 1], perm[j - 1]).expect("permutation");
            *patches.get_mut(target) = self.patch(pair).to_vec();
            *incidence.get_mut(target) = self.incidence.get(pair).clone();
        }
        let loci = self
            .loci
            .iter()
            .map(|l| {
                let mut classes = [CurveClass::TRIVIAL; 3];
                for h in 0..3 {
                    classes[perm[h] - 1] = l.classes[h];
                }
                BranchedLocus { id: l.id, classes }
            })
            .collect();
        Decomposition { manifold: self.manifold, genera, patches, loci, incidence }
    }

    /// Rename loci to `1..=b` in their current order.
    pub fn renumber_loci(&self) -> Decomposition {
        let map: BTreeMap<LocusId, LocusId> =
            self.loci.iter().enumerate().map(|(i, l)| (l.id, i as LocusId + 1)).collect();
        self.rename_loci(&map)
    }

    fn rename_loci(&self, map: &BTreeMap<LocusId, LocusId>) -> Decomposition {
        let mut out = self.clone();
        for l in &mut out.loci {
            l.id = map[&l.id];
        }
        for pair in Pair::ALL {
            for circles in out.incidence.get_mut(pair) {
                for c in circles.iter_mut() {
                    *c = *map.get(c).unwrap_or(c);
                }
            }
        }
        out
    }

    /// Key identifying the decomposition up to renaming loci, reordering
    /// pieces and renumbering circles within a piece.
    pub fn canonical_key(&self) -> CanonicalKey {
        let ids: Vec<LocusId> = self.loci.iter().map(|l| l.id).collect();
        let mut best: Option<CanonicalKey> = None;
        for perm in (1..=ids.len() as LocusId).permutations(ids.len()) {
            let map: BTreeMap<LocusId, LocusId> = ids.iter().copied().zip(perm).collect();
            let key = self.key_under(&map);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap_or_else(|| self.key_under(&BTreeMap::new()))
    }

    fn key_under(&self, map: &BTreeMap<LocusId, LocusId>) -> CanonicalKey {
        let patches = PerPair::from_fn(|pair| {
            let mut pieces: Vec<(SurfacePiece, Vec<LocusId>)> = self
                .labeled(pair)
                .into_iter()
                .map(|l| {
                    let mut c: Vec<LocusId> = l.circles.iter().map(|x| *map.get(x).unwrap_or(x)).collect();
                    c.sort();
                    (l.piece, c)
                })
                .collect();
            pieces.sort();
            pieces
        });
        let mut classes: Vec<(LocusId, [CurveClass; 3])> =
            self.loci.iter().map(|l| (*map.get(&l.id).unwrap_or(&l.id), l.classes)).collect();
        classes.sort();
        CanonicalKey { manifold: self.manifold.normalized(), genera: self.genera, patches, classes }
    }

    /// Parse a bare decomposition, or a CLI envelope carrying one under
    /// `data.decomposition`.
    pub fn from_json_str(s: &str) -> Result<Decomposition, DecompError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| DecompError::Parse(e.to_string()))?;
        let inner = v.pointer("/data/decomposition").cloned().unwrap_or(v);
        serde_json::from_value(inner).map_err(|e| DecompError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalKey {
    manifold: ManifoldForm,
    genera: [u32; 3],
    patches: PerPair<Vec<(SurfacePiece, Vec<LocusId>)>>,
    classes: Vec<(LocusId, [CurveClass; 3])>,
}

#[derive(Debug, Clone)]
pub struct BoundaryGraph {
    pub vertices: usize,
    /// `(locus, vertex, vertex)`.
    pub edges: Vec<(LocusId, usize, usize)>,
    pub genus_sum: u32,
}

impl BoundaryGraph {
    fn components_without(&self, skip: Option<LocusId>) -> usize {
        let mut uf = UnionFind::<usize>::new(self.vertices);
        for &(id, a, b) in &self.edges {
            if Some(id) != skip {
                uf.union(a, b);
            }
        }
        (0..self.vertices).map(|v| uf.find(v)).unique().count()
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(None) == 1
    }

    /// Genus of the closed surface, assuming it is connected.
    pub fn surface_genus(&self) -> i64 {
        self.genus_sum as i64 + self.edges.len() as i64 - self.vertices as i64 + 1
    }

    /// A locus separates the closed surface iff its edge is a bridge.
    pub fn is_bridge(&self, id: LocusId) -> bool {
        self.components_without(Some(id)) > self.components_without(None)
    }
}

/// Expected `(chi12, chi13, chi23)` from the genera.
pub fn euler_lemma_expected(genera: [u32; 3]) -> [i64; 3] {
    let chi = |g: u32| 2 - 2 * g as i64;
    let [c1, c2, c3] = [chi(genera[0]), chi(genera[1]), chi(genera[2])];
    [(c1 + c2 - c3) / 2, (c1 + c3 - c2) / 2, (c2 + c3 - c1) / 2]
}

pub fn check_genera(genera: [u32; 3]) -> Result<(), DecompError> {
    match genera.iter().find(|&&g| g >= 2) {
        Some(&g) => Err(DecompError::OutOfRange(g)),
        None => Ok(()),
    }
}

/// Whether `m` has a decomposition with these genera.
pub fn admits_decomposition(m: &ManifoldForm, genera: [u32; 3]) -> Result<bool, DecompError> {
    check_genera(genera)?;
    Ok(m.is_sphere() || genera != [0, 0, 0])
}

/// Transfer the 2-handle `N(D)` of a disk of `pair` whose boundary is
/// essential on the genus-one handlebody opposite to it. Returns the reduced
/// decomposition (opposite handlebody becomes a ball) and the capped summand.
pub fn reduce_along_disk(
    d: &Decomposition,
    pair: Pair,
    disk: usize,
) -> Result<(Decomposition, ManifoldForm), DecompError> {
    let piece = *d.patch(pair).get(disk).ok_or(DecompError::UnknownComponent { pair, index: disk })?;
    if !piece.is_disk() {
        return Err(DecompError::NotADisk { pair, index: disk });
    }
    let k = pair.opposite();
    if d.genus(k) != 1 {
        return Err(DecompError::WrongGenus { handlebody: k, genus: d.genus(k) });
    }
    let ell = *d.incidence.get(pair)[disk]
        .first()
        .ok_or_else(|| DecompError::Malformed("disk without a boundary circle".into()))?;
    let class = d.class(ell, k).ok_or_else(|| DecompError::Malformed(format!("no locus {ell}")))?;
    if !class.essential {
        return Err(DecompError::NotEssential { locus: ell, handlebody: k });
    }
    let tag = class.meridian.ok_or(DecompError::UnknownTag { locus: ell, handlebody: k })?;
    let (manifold, summand) = match tag {
        1 => (d.manifold, ManifoldForm::Sphere3),
        t if t >= 2 && t as u64 == d.manifold.order() => (ManifoldForm::Sphere3, d.manifold),
        t => return Err(DecompError::BadMeridian { locus: ell, handlebody: k, tag: t }),
    };
    if d.b() < 2 {
        return Err(DecompError::Degenerate);
    }

    let mut out = d.clone();
    let mut own = d.labeled(pair);
    own.remove(disk);
    out.set_labeled(pair, own);
    for other in Pair::touching(k) {
        let mut pieces = d.labeled(other);
        let (pi, ci) =
            d.locate(other, ell).ok_or_else(|| DecompError::Malformed(format!("locus {ell} missing from {other}")))?;
        let p = &mut pieces[pi];
        if p.piece.boundary_count < 2 {
            return Err(DecompError::Degenerate);
        }
        p.circles.remove(ci as usize);
        p.piece = SurfacePiece::new(p.piece.genus, p.piece.boundary_count - 1);
        out.set_labeled(other, pieces);
    }
    out.loci.retain(|l| l.id != ell);
    out.genera[k - 1] = 0;
    out.manifold = manifold;
    for l in &mut out.loci {
        l.classes[k - 1] = CurveClass::TRIVIAL;
    }
    refresh_essential(&mut out);
    Ok((out, summand))
}

/// Recompute the `essential` flags of genus-0 and genus-1 boundaries from the
/// boundary graphs. Genus-0 tags are reset to trivial.
pub(crate) fn refresh_essential(d: &mut Decomposition) {
    for h in 1..=3 {
        let g = d.genus(h);
        if g >= 2 {
            continue;
        }
        let Some(graph) = d.boundary_graph(h) else { continue };
        for l in &mut d.loci {
            let c = &mut l.classes[h - 1];
            if g == 0 {
                *c = CurveClass::TRIVIAL;
            } else {
                c.essential = !graph.is_bridge(l.id);
            }
        }
    }
}

/// A theorem case: the genera triple in non-decreasing order and the case
/// number within that theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseId {
    pub genera: [u32; 3],
    pub case: u32,
}

impl CaseId {
    pub fn new(genera: [u32; 3], case: u32) -> Result<CaseId, DecompError> {
        let max = match genera {
            [0, 0, 0] | [0, 0, 1] => 1,
            [0, 1, 1] => 2,
            [1, 1, 1] => 6,
            _ => return Err(DecompError::Malformed(format!("no case table for genera {genera:?}"))),
        };
        if case == 0 || case > max {
            return Err(DecompError::Malformed(format!("case {case} is outside 1..={max} for genera {genera:?}")));
        }
        Ok(CaseId { genera, case })
    }

    /// Every case with a profile in the characterization theorems.
    pub fn all() -> Vec<CaseId> {
        let mut out = vec![CaseId { genera: [0, 0, 0], case: 1 }, CaseId { genera: [0, 0, 1], case: 1 }];
        out.extend((1..=2).map(|case| CaseId { genera: [0, 1, 1], case }));
        out.extend((1..=6).map(|case| CaseId { genera: [1, 1, 1], case }));
        out
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.genera;
        write!(f, "({a},{b},{c}) case {}", self.case)
    }
}
