//! Elements of the localized GKLO rings, tagged with the localization they
//! live in.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::poly::{Factor, Var};
use crate::Frac;

/// Which denominators are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    /// Differences `w[i,r] - w[i,s]` at one vertex, no negative `u` powers.
    ZastavaLoc,
    /// Differences `w[i,r] - w[i,s]` at one vertex.
    SliceLoc,
    /// As `SliceLoc`, and the variables `w[i,r]` themselves.
    SliceLocLoc,
    /// Differences of any two `w` variables, no negative `u` powers.
    DefectLoc,
    /// Any `w` variable and any difference of two `w` variables.
    FullLoc,
}

impl RingTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RingTag::ZastavaLoc => "zastava_loc",
            RingTag::SliceLoc => "slice_loc",
            RingTag::SliceLocLoc => "slice_loc_loc",
            RingTag::DefectLoc => "defect_loc",
            RingTag::FullLoc => "full_loc",
        }
    }

    fn allows_factor(&self, f: &Factor) -> bool {
        match (*self, *f) {
            (_, Factor::Var(x)) => {
                matches!(self, RingTag::SliceLocLoc | RingTag::FullLoc) && x.is_w()
            }
            (RingTag::ZastavaLoc | RingTag::SliceLoc | RingTag::SliceLocLoc, Factor::Diff(x, y)) => {
                same_vertex_w(x, y)
            }
            (RingTag::DefectLoc | RingTag::FullLoc, Factor::Diff(x, y)) => x.is_w() && y.is_w(),
        }
    }

    fn u_nonnegative(&self) -> bool {
        matches!(self, RingTag::ZastavaLoc | RingTag::DefectLoc)
    }

    fn rank(&self) -> (u8, u8) {
        // (position in the slice chain, position in the defect chain)
        match self {
            RingTag::ZastavaLoc => (0, 0),
            RingTag::SliceLoc => (1, 9),
            RingTag::SliceLocLoc => (2, 9),
            RingTag::DefectLoc => (9, 1),
            RingTag::FullLoc => (9, 9),
        }
    }

    /// Whether every element admissible for `self` is admissible for `other`.
    pub fn le(&self, other: &RingTag) -> bool {
        if self == other || *other == RingTag::FullLoc {
            return true;
        }
        let (a, b) = (self.rank(), other.rank());
        (a.0 <= b.0 && b.0 < 9) || (a.1 <= b.1 && b.1 < 9)
    }

    /// Smallest tag containing both.
    pub fn join(&self, other: &RingTag) -> RingTag {
        if self.le(other) {
            *other
        } else if other.le(self) {
            *self
        } else {
            RingTag::FullLoc
        }
    }

    /// Whether `value` is admissible.
    pub fn admits(&self, value: &Frac) -> Result<(), RingError> {
        if self.u_nonnegative() && value.has_negative_u() {
            return Err(RingError::NegativeU(*self));
        }
        if value.den().is_one() {
            return Ok(());
        }
        let factors = value
            .den_factors()
            .ok_or_else(|| RingError::Denominator(*self, value.den().to_string()))?;
        if let Some((f, _)) = factors.iter().find(|(f, _)| !self.allows_factor(f)) {
            return Err(RingError::Denominator(*self, f.to_string()));
        }
        Ok(())
    }
}

fn same_vertex_w(x: Var, y: Var) -> bool {
    match (x, y) {
        (Var::W { vertex: a, .. }, Var::W { vertex: b, .. }) => a == b,
        _ => false,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{} does not admit the denominator factor {1}", .0.as_str())]
    Denominator(RingTag, String),
    #[error("{} does not admit negative powers of u", .0.as_str())]
    NegativeU(RingTag),
}

/// A rational function together with the localized ring it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkloElement {
    value: Frac,
    tag: RingTag,
}

impl GkloElement {
    pub fn new(value: Frac, tag: RingTag) -> Result<Self, RingError> {
        tag.admits(&value)?;
        Ok(Self { value, tag })
    }

    /// The smallest tag among `candidates` (tried in order) admitting `value`.
    pub fn with_first_admissible(value: Frac, candidates: &[RingTag]) -> Result<Self, RingError> {
        let mut last = None;
        for &t in candidates {
            match t.admits(&value) {
                Ok(()) => return Ok(Self { value, tag: t }),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one candidate tag"))
    }

    pub fn zero(tag: RingTag) -> Self {
        Self {
            value: Frac::zero(),
            tag,
        }
    }

    pub fn value(&self) -> &Frac {
        &self.value
    }

    pub fn into_value(self) -> Frac {
        self.value
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Same value viewed in a larger ring.
    pub fn widen(&self, tag: RingTag) -> Result<Self, RingError> {
        Self::new(self.value.clone(), tag)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, self.value.add(&other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, self.value.sub(&other.value))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, self.value.mul(&other.value))
    }

    pub fn neg(&self) -> Self {
        Self {
            value: self.value.neg(),
            tag: self.tag,
        }
    }

    fn combine(&self, other: &Self, value: Frac) -> Self {
        let tag = self.tag.join(&other.tag);
        debug_assert!(tag.admits(&value).is_ok());
        Self { value, tag }
    }
}

impl fmt::Display for GkloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(s: &str) -> Frac {
        s.parse().unwrap()
    }

    #[test]
    fn admissibility() {
        let e = fr("(u[0,1] - u[0,2])/(w[0,1] - w[0,2])");
        assert!(GkloElement::new(e.clone(), RingTag::ZastavaLoc).is_ok());
        let cross = fr("u[0,1]/(w[0,1] - w[1,1])");
        assert!(GkloElement::new(cross.clone(), RingTag::SliceLoc).is_err());
        assert!(GkloElement::new(cross, RingTag::DefectLoc).is_ok());
        let inv = fr("w[0,1]^2*u[0,1]^-1");
        assert_eq!(
            GkloElement::new(inv.clone(), RingTag::ZastavaLoc),
            Err(RingError::NegativeU(RingTag::ZastavaLoc))
        );
        assert!(GkloElement::new(inv, RingTag::SliceLoc).is_ok());
        let wden = fr("u[0,1]/w[0,1]");
        assert!(GkloElement::new(wden.clone(), RingTag::SliceLoc).is_err());
        assert!(GkloElement::new(wden, RingTag::SliceLocLoc).is_ok());
        assert!(GkloElement::new(fr("1/(w[0,1] + w[0,2])"), RingTag::FullLoc).is_err());
    }

    #[test]
    fn tag_lattice() {
        use RingTag::*;
        assert!(ZastavaLoc.le(&SliceLocLoc));
        assert!(ZastavaLoc.le(&DefectLoc));
        assert!(!SliceLoc.le(&DefectLoc));
        assert_eq!(SliceLoc.join(&DefectLoc), FullLoc);
        assert_eq!(ZastavaLoc.join(&SliceLoc), SliceLoc);
        assert_eq!(SliceLocLoc.join(&ZastavaLoc), SliceLocLoc);
    }

    #[test]
    fn operations_keep_admissibility() {
        let a = GkloElement::new(fr("u[0,1]/(w[0,1] - w[0,2])"), RingTag::ZastavaLoc).unwrap();
        let b = GkloElement::new(fr("u[0,2]^-1*w[0,2]"), RingTag::SliceLoc).unwrap();
        let s = a.add(&b);
        assert_eq!(s.tag(), RingTag::SliceLoc);
        assert!(RingTag::SliceLoc.admits(s.value()).is_ok());
        let p = a.mul(&a);
        assert_eq!(p.tag(), RingTag::ZastavaLoc);
        assert!(!p.value().has_negative_u());
    }
}
