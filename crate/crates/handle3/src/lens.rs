//! Lens space arithmetic.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("p = 0 describes S2 x S1, which is out of scope")]
    ZeroP,
    #[error("gcd({p}, {q}) = {gcd} is not 1")]
    NotCoprime { p: i64, q: i64, gcd: i64 },
    #[error("invalid lens space L({p},{q}): need 0 < q < p, p >= 2 and gcd 1")]
    InvalidForm { p: u64, q: u64 },
    #[error("the diffeotopy table covers lens spaces only, not the 3-sphere")]
    SphereNotCovered,
}

/// The target 3-manifold. `Lens` values always satisfy `0 < q < p`,
/// `gcd(p, q) = 1` and `p >= 2`, but are not necessarily normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawForm")]
pub enum ManifoldForm {
    Sphere3,
    Lens { p: u64, q: u64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawForm {
    Sphere3,
    Lens { p: u64, q: u64 },
}

impl TryFrom<RawForm> for ManifoldForm {
    type Error = LensError;

    fn try_from(raw: RawForm) -> Result<Self, LensError> {
        match raw {
            RawForm::Sphere3 => Ok(ManifoldForm::Sphere3),
            RawForm::Lens { p, q } => ManifoldForm::lens(p, q),
        }
    }
}

impl ManifoldForm {
    /// Checked constructor; does not normalize.
    pub fn lens(p: u64, q: u64) -> Result<Self, LensError> {
        if p < 2 || q == 0 || q >= p || p.gcd(&q) != 1 {
            return Err(LensError::InvalidForm { p, q });
        }
        Ok(ManifoldForm::Lens { p, q })
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, ManifoldForm::Sphere3)
    }

    /// `p` of the lens space, 1 for the 3-sphere.
    pub fn order(&self) -> u64 {
        match self {
            ManifoldForm::Sphere3 => 1,
            ManifoldForm::Lens { p, .. } => *p,
        }
    }

    pub fn normalized(&self) -> ManifoldForm {
        match *self {
            ManifoldForm::Sphere3 => ManifoldForm::Sphere3,
            ManifoldForm::Lens { p, q } => normalize(p as i64, q as i64).expect("valid lens form"),
        }
    }
}

impl fmt::Display for ManifoldForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldForm::Sphere3 => write!(f, "S3"),
            ManifoldForm::Lens { p, q } => write!(f, "L({p},{q})"),
        }
    }
}

fn modinv(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd.abs(), 1);
    e.x.rem_euclid(m)
}

/// Canonical representative of L(p, q) up to orientation-free homeomorphism.
pub fn normalize(p: i64, q: i64) -> Result<ManifoldForm, LensError> {
    if p == 0 {
        return Err(LensError::ZeroP);
    }
    let pa = p.abs();
    if pa == 1 {
        return Ok(ManifoldForm::Sphere3);
    }
    let r = q.rem_euclid(pa);
    let g = pa.gcd(&r);
    if g != 1 {
        return Err(LensError::NotCoprime { p, q, gcd: g });
    }
    let inv = modinv(r, pa);
    let best = [r, pa - r, inv, pa - inv].into_iter().min().expect("non-empty");
    Ok(ManifoldForm::Lens { p: pa as u64, q: best as u64 })
}

pub fn is_homeomorphic(a: &ManifoldForm, b: &ManifoldForm) -> bool {
    a.normalized() == b.normalized()
}

/// Whether the torus knot T(p, q) on a Heegaard torus is a core of a solid torus.
pub fn torus_knot_is_core(p: i64, _q: i64) -> bool {
    p.abs() == 1
}

/// `(p-1) q = ±1 mod p`, vacuously true for the 3-sphere.
pub fn core_isotopy_criterion(m: &ManifoldForm) -> bool {
    match *m {
        ManifoldForm::Sphere3 => true,
        ManifoldForm::Lens { p, q } => {
            let r = ((p - 1) * q) % p;
            r == 1 || r == p - 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Z2,
    Z2xZ2,
    Z4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorTag {
    SigmaMinus,
    Tau,
    TauAndSigmaPlus,
    SigmaMinusOrder4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffeotopyGroup {
    pub group: GroupKind,
    pub generator_tag: GeneratorTag,
}

pub fn diffeotopy_group(m: &ManifoldForm) -> Result<DiffeotopyGroup, LensError> {
    let (p, q) = match *m {
        ManifoldForm::Sphere3 => return Err(LensError::SphereNotCovered),
        ManifoldForm::Lens { p, q } => (p, q),
    };
    let (group, generator_tag) = if p == 2 {
        (GroupKind::Z2, GeneratorTag::SigmaMinus)
    } else if q % p == 1 || q % p == p - 1 {
        (GroupKind::Z2, GeneratorTag::Tau)
    } else if (q * q) % p == 1 {
        (GroupKind::Z2xZ2, GeneratorTag::TauAndSigmaPlus)
    } else if (q * q) % p == p - 1 {
        (GroupKind::Z4, GeneratorTag::SigmaMinusOrder4)
    } else {
        (GroupKind::Z2, GeneratorTag::Tau)
    };
    Ok(DiffeotopyGroup { group, generator_tag })
}

/// Whether the hyperelliptic involution of the Heegaard torus extends over `m`.
pub fn hyperelliptic_realizable(m: &ManifoldForm) -> bool {
    m.is_sphere() || m.order() == 2
}

pub fn admits_seifert_over_rp2(m: &ManifoldForm) -> bool {
    m.order() == 4
}
