//! Retract diagrams of posets and the transfer of limits along them.

use std::sync::Arc;

use crate::bits::iter_ones;
use crate::error::{Error, Result};
use crate::map::{same_poset, MonotoneMap};
use crate::poset::Poset;

/// `inner` as a retract of `outer`: `retraction ∘ section = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retract {
    pub outer: Arc<Poset>,
    pub inner: Arc<Poset>,
    pub section: MonotoneMap,
    pub retraction: MonotoneMap,
}

impl Retract {
    pub fn new(section: MonotoneMap, retraction: MonotoneMap) -> Result<Retract> {
        if !same_poset(section.cod(), retraction.dom()) || !same_poset(section.dom(), retraction.cod()) {
            return Err(Error::DomainMismatch(
                "section and retraction do not form a cycle".into(),
            ));
        }
        if !retraction.compose(&section)?.is_identity() {
            return Err(Error::InvariantViolation(
                "retraction ∘ section is not the identity".into(),
            ));
        }
        Ok(Retract {
            outer: section.cod().clone(),
            inner: section.dom().clone(),
            section,
            retraction,
        })
    }

    /// The idempotent `section ∘ retraction` on `outer`.
    pub fn idempotent(&self) -> MonotoneMap {
        self.section
            .compose(&self.retraction)
            .expect("retract maps are composable")
    }

    /// Transfer of terminal objects: `r(1_outer)` is terminal in `inner`.
    pub fn transferred_terminal(&self) -> Option<usize> {
        self.outer.terminal().map(|t| self.retraction.apply(t))
    }
}

/// The subposet of common lower bounds of `targets`, with its inclusion into `base`.
pub fn lower_bounds_poset(base: &Arc<Poset>, targets: &[usize]) -> (Poset, MonotoneMap) {
    let elements: Vec<usize> = iter_ones(&base.lower_bound_bits(targets)).collect();
    let sub = Arc::new(base.induced(&elements));
    let inclusion = MonotoneMap::new_unchecked(sub.clone(), base.clone(), elements);
    ((*sub).clone(), inclusion)
}

/// Infimum of `targets` in `ret.inner`, computed as `r(inf s(targets))` in `ret.outer`
/// and then checked to be the greatest lower bound in `inner`.
pub fn limit_via_retract(ret: &Retract, targets: &[usize]) -> Result<usize> {
    if let Some(&index) = targets.iter().find(|&&t| t >= ret.inner.size()) {
        return Err(Error::Index {
            index,
            size: ret.inner.size(),
        });
    }
    let lifted: Vec<usize> = targets.iter().map(|&t| ret.section.apply(t)).collect();
    let inf = ret.outer.meet_of(&lifted).ok_or(Error::NotComplete)?;
    let candidate = ret.retraction.apply(inf);
    let (cones, inclusion) = lower_bounds_poset(&ret.inner, targets);
    let verified = cones.terminal().map(|t| inclusion.apply(t)).filter(|&t| t == candidate);
    verified.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "r(inf) = {candidate} is not terminal among the lower bounds of {targets:?}"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `[2]` as the sorted vectors `{00, 01, 11}` of `[1]^2`.
    fn sort_retract() -> Retract {
        let cube = Arc::new(Poset::interval_power(2));
        let mid = Arc::new(Poset::chain(2));
        let s = MonotoneMap::new(mid.clone(), cube.clone(), vec![0b00, 0b10, 0b11]).unwrap();
        let r = MonotoneMap::new(cube, mid, vec![0, 1, 1, 2]).unwrap();
        Retract::new(s, r).unwrap()
    }

    #[test]
    fn lower_bounds_examples() {
        let sq = Arc::new(Poset::interval_power(2));
        let (lb, inc) = lower_bounds_poset(&sq, &[0b10, 0b01]);
        assert_eq!(lb.size(), 1);
        assert_eq!(inc.image(), &[0]);
        let (all, _) = lower_bounds_poset(&sq, &[3]);
        assert_eq!(all, *sq);
        let anti = Arc::new(Poset::antichain(2));
        assert_eq!(lower_bounds_poset(&anti, &[0, 1]).0.size(), 0);
    }

    #[test]
    fn limit_examples() {
        let ret = sort_retract();
        assert_eq!(limit_via_retract(&ret, &[1, 2]), Ok(1));
        assert_eq!(limit_via_retract(&ret, &[2]), Ok(2));
        assert_eq!(limit_via_retract(&ret, &[0, 1, 2]), Ok(0));
        assert_eq!(limit_via_retract(&ret, &[]), Ok(2));
        assert_eq!(ret.transferred_terminal(), Some(2));
        assert!(ret.idempotent().is_idempotent());
    }

    #[test]
    fn rejects_non_retracts() {
        let cube = Arc::new(Poset::interval_power(2));
        let mid = Arc::new(Poset::chain(2));
        let s = MonotoneMap::new(mid.clone(), cube.clone(), vec![0b00, 0b10, 0b11]).unwrap();
        let r = MonotoneMap::new(cube, mid, vec![0, 1, 0, 2]).unwrap();
        assert!(matches!(Retract::new(s, r), Err(Error::InvariantViolation(_))));
    }
}
