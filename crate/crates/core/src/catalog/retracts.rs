//! All retracts of small posets, one per idempotent.

use std::sync::Arc;

use rayon::prelude::*;

use super::canonical::canonical_labeling;
use super::maps::endomorphisms;
use super::posets::posets_of_size;
use crate::error::{bound, Result};
use crate::karoubi::{split_idempotent, Idempotent};
use crate::map::MonotoneMap;
use crate::retract::Retract;

pub const DEFAULT_RETRACT_BOUND: usize = 5;

/// Retracts `(A, B, r, s)` for every `A` of size at most `max_outer` (up to
/// isomorphism) and every idempotent on `A`. `B` is the canonical
/// representative of the idempotent's image, so each retract is listed once
/// up to automorphisms of `B`. Order: by size of `A`, canonical key of `A`,
/// then the enumeration order of endomorphisms.
pub fn enumerate_retracts(max_outer: usize) -> Result<Vec<Retract>> {
    bound("retract outer size", max_outer, DEFAULT_RETRACT_BOUND)?;
    enumerate_retracts_unbounded(max_outer)
}

pub fn enumerate_retracts_unbounded(max_outer: usize) -> Result<Vec<Retract>> {
    let outers: Vec<_> = (0..=max_outer)
        .flat_map(|n| posets_of_size(n).iter().cloned().collect::<Vec<_>>())
        .collect();
    let per_outer: Vec<Vec<Retract>> = outers
        .par_iter()
        .map(|a| {
            let a = Arc::new(a.poset.clone());
            endomorphisms(&a)
                .into_iter()
                .filter(MonotoneMap::is_idempotent)
                .map(|f| canonical_retract(&Idempotent::new(f).expect("filtered")))
                .collect()
        })
        .collect();
    Ok(per_outer.concat())
}

/// The splitting of `f`, with the middle object relabeled canonically.
pub fn canonical_retract(f: &Idempotent) -> Retract {
    let split = split_idempotent(f);
    let lab = canonical_labeling(&split.mid);
    let inner = Arc::new(split.mid.relabel(&lab.order));
    let mut new_index = vec![0; lab.order.len()];
    for (new, &old) in lab.order.iter().enumerate() {
        new_index[old] = new;
    }
    let section_image = lab.order.iter().map(|&old| split.section.apply(old)).collect();
    let retraction_image = (0..f.carrier().size())
        .map(|a| new_index[split.retraction.apply(a)])
        .collect();
    Retract::new(
        MonotoneMap::new_unchecked(inner.clone(), f.carrier().clone(), section_image),
        MonotoneMap::new_unchecked(f.carrier().clone(), inner, retraction_image),
    )
    .expect("relabeled splitting is a retract")
}
