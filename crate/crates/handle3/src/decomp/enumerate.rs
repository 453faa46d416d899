//! Profile-level sieve: every triple of patch multisets allowed by the Euler
//! bookkeeping, filtered by named pruning rules.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{check_genera, euler_lemma_expected, CaseId, DecompError, Pair, PerPair};
use crate::lens::{admits_seifert_over_rp2, ManifoldForm};
use crate::surfaces::{total_euler_char, SurfacePiece};

pub type Profile = PerPair<Vec<SurfacePiece>>;

/// Largest `max_loci` accepted; the classified cases need at most 4.
pub const MAX_LOCI_LIMIT: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PruneRule {
    #[serde(rename = "gth_admissibility")]
    GthAdmissibility,
    #[serde(rename = "at_most_one_disk")]
    AtMostOneDisk,
    #[serde(rename = "no_disk_in_F23_for_011")]
    NoDiskInF23For011,
    #[serde(rename = "at_most_two_annuli")]
    AtMostTwoAnnuli,
    #[serde(rename = "inessential_disk_prune")]
    InessentialDiskPrune,
    #[serde(rename = "meridional_disk_bound")]
    MeridionalDiskBound,
    #[serde(rename = "rp2_fibration_only")]
    Rp2FibrationOnly,
}

impl PruneRule {
    pub fn name(self) -> &'static str {
        match self {
            PruneRule::GthAdmissibility => "gth_admissibility",
            PruneRule::AtMostOneDisk => "at_most_one_disk",
            PruneRule::NoDiskInF23For011 => "no_disk_in_F23_for_011",
            PruneRule::AtMostTwoAnnuli => "at_most_two_annuli",
            PruneRule::InessentialDiskPrune => "inessential_disk_prune",
            PruneRule::MeridionalDiskBound => "meridional_disk_bound",
            PruneRule::Rp2FibrationOnly => "rp2_fibration_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCase {
    pub profile: Profile,
    pub b: u32,
    /// Matching theorem case, `None` when unmatched.
    pub case: Option<CaseId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub profile: Profile,
    pub b: u32,
    pub rule: PruneRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub manifold: ManifoldForm,
    pub genera: [u32; 3],
    pub max_loci: u32,
    pub cases: Vec<ProfileCase>,
    pub rejected: Vec<Rejection>,
}

fn boundary(pieces: &[SurfacePiece]) -> u32 {
    pieces.iter().map(|p| p.boundary_count).sum()
}

fn genus(pieces: &[SurfacePiece]) -> u32 {
    pieces.iter().map(|p| p.genus).sum()
}

fn permute(profile: &Profile, perm: [usize; 3]) -> Profile {
    let mut out = Profile::default();
    for pair in Pair::ALL {
        let (i, j) = pair.handlebodies();
        *out.get_mut(Pair::of(perm[i - 1], perm[j - 1]).expect("permutation")) = profile.get(pair).clone();
    }
    out
}

const PERMS: [[usize; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

/// Representative of a profile over relabelings of handlebodies that keep the
/// genera fixed. Prefers `F13 == F23`, then the smallest `(F12, F13, F23)`.
pub fn canonical_profile(genera: [u32; 3], profile: &Profile) -> Profile {
    let mut best: Option<(bool, Profile)> = None;
    for perm in PERMS {
        if (0..3).any(|h| genera[h] != genera[perm[h] - 1]) {
            continue;
        }
        let mut p = permute(profile, perm);
        for pair in Pair::ALL {
            p.get_mut(pair).sort();
        }
        let key = (p.f13 != p.f23, p);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("identity permutation").1
}

/// Profiles of the characterization theorems, keyed by case.
pub fn reference_profile(case: CaseId) -> (Profile, u32) {
    use SurfacePiece as S;
    let (d, a, p, t) = (S::DISK, S::ANNULUS, S::PANTS, S::PUNCTURED_TORUS);
    let mk = |f12: Vec<S>, f13: Vec<S>, f23: Vec<S>| Profile { f12, f13, f23 };
    let (profile, b) = match (case.genera, case.case) {
        ([0, 0, 0], 1) => (mk(vec![d], vec![d], vec![d]), 1),
        ([0, 0, 1], 1) => (mk(vec![d, d], vec![a], vec![a]), 2),
        ([0, 1, 1], 1) => (mk(vec![d], vec![d], vec![t]), 1),
        ([0, 1, 1], 2) => (mk(vec![d, a], vec![d, a], vec![p]), 3),
        ([1, 1, 1], 1) => (mk(vec![a], vec![a], vec![a]), 2),
        ([1, 1, 1], 2) => (mk(vec![d, t], vec![a], vec![a]), 2),
        ([1, 1, 1], 3) => (mk(vec![d, p], vec![a, a], vec![a, a]), 4),
        ([1, 1, 1], 4) => (mk(vec![a, a], vec![d, p], vec![d, p]), 4),
        ([1, 1, 1], 5) => (mk(vec![d, p], vec![d, p], vec![d, p]), 4),
        ([1, 1, 1], 6) => (mk(vec![a, a], vec![a, a], vec![a, a]), 4),
        _ => panic!("no profile for {case}"),
    };
    (canonical_profile(case.genera, &profile), b)
}

/// Permutation sending handlebody `h` to position `perm[h-1]` so that the
/// genera become non-decreasing.
pub fn sorting_permutation(genera: [u32; 3]) -> [usize; 3] {
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&h| (genera[h], h));
    let mut perm = [0; 3];
    for (pos, &h) in order.iter().enumerate() {
        perm[h] = pos + 1;
    }
    perm
}

/// The theorem case a profile realizes, if any.
pub fn match_case(genera: [u32; 3], profile: &Profile) -> Option<CaseId> {
    let perm = sorting_permutation(genera);
    let mut sorted = [0; 3];
    for h in 0..3 {
        sorted[perm[h] - 1] = genera[h];
    }
    let canon = canonical_profile(sorted, &permute(profile, perm));
    CaseId::all().into_iter().filter(|c| c.genera == sorted).find(|c| reference_profile(*c).0 == canon)
}

/// Sorted multisets of pieces of genus at most `max_genus` with `boundary`
/// circles in total and Euler characteristic `chi`.
fn patch_candidates(boundary_total: u32, chi: i64, max_genus: u32) -> Vec<Vec<SurfacePiece>> {
    let mut kinds = Vec::new();
    for g in 0..=max_genus.min(1) {
        for c in 1..=boundary_total {
            kinds.push(SurfacePiece::new(g, c));
        }
    }
    kinds.sort();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(&kinds, 0, boundary_total, chi, max_genus, &mut cur, &mut out);
    out
}

fn fill(
    kinds: &[SurfacePiece],
    start: usize,
    remaining: u32,
    chi: i64,
    genus_left: u32,
    cur: &mut Vec<SurfacePiece>,
    out: &mut Vec<Vec<SurfacePiece>>,
) {
    if remaining == 0 {
        if total_euler_char(cur) == chi {
            out.push(cur.clone());
        }
        return;
    }
    // Each remaining piece has chi at most 1 and uses at least one circle.
    if total_euler_char(cur) + (remaining as i64) < chi {
        return;
    }
    for (idx, k) in kinds.iter().enumerate().skip(start) {
        if k.boundary_count > remaining || k.genus > genus_left {
            continue;
        }
        cur.push(*k);
        fill(kinds, idx, remaining - k.boundary_count, chi, genus_left - k.genus, cur, out);
        cur.pop();
    }
}

struct Sieve {
    lens: bool,
    rp2: bool,
    max_loci: u32,
    cache: HashMap<[u32; 3], BTreeSet<(Profile, u32)>>,
}

impl Sieve {
    fn run(&mut self, genera: [u32; 3]) -> (Vec<(Profile, u32)>, Vec<Rejection>) {
        let expected = euler_lemma_expected(genera);
        let mut survivors = BTreeSet::new();
        let mut rejected = Vec::new();
        for b in 1..=self.max_loci {
            let lists = PerPair::from_fn(|pair| {
                let (i, j) = pair.handlebodies();
                let cap = genera[i - 1].min(genera[j - 1]);
                patch_candidates(b, expected[pair.index()], cap)
            });
            for f12 in &lists.f12 {
                for f13 in &lists.f13 {
                    if genus(f12) + genus(f13) > genera[0] {
                        continue;
                    }
                    for f23 in &lists.f23 {
                        if genus(f12) + genus(f23) > genera[1] || genus(f13) + genus(f23) > genera[2] {
                            continue;
                        }
                        let profile = Profile { f12: f12.clone(), f13: f13.clone(), f23: f23.clone() };
                        let canon = canonical_profile(genera, &profile);
                        match self.first_rule(genera, &profile) {
                            None => {
                                survivors.insert((canon, b));
                            }
                            Some(rule) => rejected.push(Rejection { profile: canon, b, rule }),
                        }
                    }
                }
            }
        }
        rejected.sort_by(|x, y| (x.b, &x.profile, x.rule).cmp(&(y.b, &y.profile, y.rule)));
        rejected.dedup();
        (survivors.into_iter().collect(), rejected)
    }

    fn survivors(&mut self, genera: [u32; 3]) -> BTreeSet<(Profile, u32)> {
        if let Some(s) = self.cache.get(&genera) {
            return s.clone();
        }
        // Reduction targets are checked against the weakest target, S3.
        let mut inner = Sieve { lens: false, rp2: false, max_loci: self.max_loci, cache: HashMap::new() };
        std::mem::swap(&mut inner.cache, &mut self.cache);
        let s: BTreeSet<_> = inner.run(genera).0.into_iter().collect();
        std::mem::swap(&mut inner.cache, &mut self.cache);
        self.cache.insert(genera, s.clone());
        s
    }

    fn first_rule(&mut self, genera: [u32; 3], p: &Profile) -> Option<PruneRule> {
        let sum: u32 = genera.iter().sum();
        let disks = |pieces: &[SurfacePiece]| pieces.iter().filter(|x| x.is_disk()).count();
        let annuli = |pieces: &[SurfacePiece]| pieces.iter().filter(|x| x.is_annulus()).count();

        if self.lens && genera == [0, 0, 0] {
            return Some(PruneRule::GthAdmissibility);
        }
        if sum >= 2 && Pair::ALL.iter().any(|&pair| disks(p.get(pair)) >= 2) {
            return Some(PruneRule::AtMostOneDisk);
        }
        if sum == 2 {
            let between_tori = Pair::ALL.into_iter().find(|pair| genera[pair.opposite() - 1] == 0).expect("one ball");
            if disks(p.get(between_tori)) > 0 {
                return Some(PruneRule::NoDiskInF23For011);
            }
        }
        if genera == [1, 1, 1] && Pair::ALL.iter().any(|&pair| disks(p.get(pair)) == 0 && annuli(p.get(pair)) >= 3) {
            return Some(PruneRule::AtMostTwoAnnuli);
        }
        for pair in Pair::ALL {
            let pieces = p.get(pair);
            if pieces.len() >= 2 && disks(pieces) > 0 && genera[pair.opposite() - 1] == 0 {
                return Some(PruneRule::InessentialDiskPrune);
            }
        }
        if let Some(rule) = self.disk_reduction_rule(genera, p) {
            return Some(rule);
        }
        let all_aa = Pair::ALL.iter().all(|&pair| p.get(pair) == &[SurfacePiece::ANNULUS; 2]);
        if genera == [1, 1, 1] && all_aa && !self.rp2 {
            return Some(PruneRule::Rp2FibrationOnly);
        }
        None
    }

    /// A disk of F_ij facing a solid torus H_k either bounds an inessential
    /// locus on the torus (only possible when F_ij is that disk alone) or an
    /// essential one, in which case the 2-handle transfer must land on a
    /// surviving profile with H_k a ball.
    fn disk_reduction_rule(&mut self, genera: [u32; 3], p: &Profile) -> Option<PruneRule> {
        for pair in Pair::ALL {
            let k = pair.opposite();
            if genera[k - 1] != 1 {
                continue;
            }
            let pieces = p.get(pair);
            let Some(disk) = pieces.iter().position(|x| x.is_disk()) else { continue };
            let [side_a, side_b] = Pair::touching(k);
            let mut inessential_ok = false;
            let mut essential_possible = false;
            let mut essential_ok = false;
            for (ia, a) in p.get(side_a).iter().enumerate() {
                for (ib, bb) in p.get(side_b).iter().enumerate() {
                    if a.boundary_count == 1 || bb.boundary_count == 1 {
                        inessential_ok |= pieces.len() == 1;
                        continue;
                    }
                    inessential_ok |= pieces.len() == 1;
                    essential_possible = true;
                    if essential_ok {
                        continue;
                    }
                    let b_total = boundary(pieces);
                    if b_total < 2 {
                        continue;
                    }
                    let mut reduced = p.clone();
                    reduced.get_mut(pair).remove(disk);
                    let ra = &mut reduced.get_mut(side_a)[ia];
                    *ra = SurfacePiece::new(ra.genus, ra.boundary_count - 1);
                    let rb = &mut reduced.get_mut(side_b)[ib];
                    *rb = SurfacePiece::new(rb.genus, rb.boundary_count - 1);
                    let mut rg = genera;
                    rg[k - 1] = 0;
                    let canon = canonical_profile(rg, &reduced);
                    if self.survivors(rg).contains(&(canon, b_total - 1)) {
                        essential_ok = true;
                    }
                }
            }
            if !(inessential_ok || essential_ok) {
                return Some(if essential_possible {
                    PruneRule::MeridionalDiskBound
                } else {
                    PruneRule::InessentialDiskPrune
                });
            }
        }
        None
    }
}

/// All profiles with piece genus at most 1 and at most `max_loci` loci that
/// survive the pruning rules for target `m`.
pub fn enumerate_profiles(m: &ManifoldForm, genera: [u32; 3], max_loci: u32) -> Result<Enumeration, DecompError> {
    check_genera(genera)?;
    if max_loci == 0 || max_loci > MAX_LOCI_LIMIT {
        return Err(DecompError::BadMaxLoci);
    }
    let mut sieve = Sieve { lens: !m.is_sphere(), rp2: admits_seifert_over_rp2(m), max_loci, cache: HashMap::new() };
    let (survivors, rejected) = sieve.run(genera);
    let mut cases: Vec<ProfileCase> = survivors
        .into_iter()
        .map(|(profile, b)| ProfileCase { case: match_case(genera, &profile), profile, b })
        .collect();
    cases.sort_by(|x, y| (x.case.is_none(), x.case, x.b, &x.profile).cmp(&(y.case.is_none(), y.case, y.b, &y.profile)));
    Ok(Enumeration { manifold: *m, genera, max_loci, cases, rejected })
}
