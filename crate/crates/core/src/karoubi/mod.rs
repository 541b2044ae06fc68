//! Idempotents and their splittings in the category of finite posets.
//!
//! An idempotent `f` on `A` splits through its set of fixed points, which by
//! idempotence is also its image. The fixed-point subposet is the equalizer
//! of `f` and `id_A`.

mod audit;
mod certificate;

use std::sync::Arc;

pub use audit::{audit_cube_idempotents, AuditMode, AuditReport, MAX_EXHAUSTIVE_DIM, MAX_SAMPLED_DIM};
pub use certificate::{
    down_set_lattice, hom_functor_preserves, retract_certificate, simplex_retract, two_step_certificate,
    verify_sort_split, DownSetLattice, RetractCertificate, SortSplit, MAX_CERTIFIED_SIZE,
};

use crate::error::{Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;
use crate::retract::Retract;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idempotent(MonotoneMap);

impl Idempotent {
    pub fn new(map: MonotoneMap) -> Result<Idempotent> {
        if map.is_idempotent() {
            Ok(Idempotent(map))
        } else {
            Err(Error::NotIdempotent)
        }
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.0
    }

    pub fn carrier(&self) -> &Arc<Poset> {
        self.0.dom()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.0.dom().size()).filter(|&a| self.0.apply(a) == a).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Splitting {
    pub idem: Idempotent,
    pub mid: Arc<Poset>,
    pub retraction: MonotoneMap,
    pub section: MonotoneMap,
}

impl Splitting {
    /// Checks `r ∘ s = id` and `s ∘ r = f`.
    pub fn check(&self) -> Result<()> {
        let rs = self.retraction.compose(&self.section)?;
        if !rs.is_identity() {
            return Err(Error::InvariantViolation("r ∘ s is not the identity".into()));
        }
        let sr = self.section.compose(&self.retraction)?;
        if sr != *self.idem.map() {
            return Err(Error::InvariantViolation("s ∘ r differs from the idempotent".into()));
        }
        Ok(())
    }

    pub fn as_retract(&self) -> Retract {
        Retract {
            outer: self.idem.carrier().clone(),
            inner: self.mid.clone(),
            section: self.section.clone(),
            retraction: self.retraction.clone(),
        }
    }
}

pub fn split_idempotent(f: &Idempotent) -> Splitting {
    let carrier = f.carrier().clone();
    let fixed = f.fixed_points();
    let mut position = vec![usize::MAX; carrier.size()];
    for (i, &a) in fixed.iter().enumerate() {
        position[a] = i;
    }
    let mid = Arc::new(carrier.induced(&fixed));
    let retraction_image = (0..carrier.size()).map(|a| position[f.map().apply(a)]).collect();
    let retraction = MonotoneMap::new_unchecked(carrier.clone(), mid.clone(), retraction_image);
    let section = MonotoneMap::new_unchecked(mid.clone(), carrier, fixed);
    let s = Splitting {
        idem: f.clone(),
        mid,
        retraction,
        section,
    };
    debug_assert!(s.check().is_ok());
    s
}
