//! Posets and lattices up to isomorphism.
//!
//! Every poset on `n` elements has a maximal element whose removal leaves a
//! poset on `n - 1` elements, so extending each class representative of size
//! `n - 1` by a new maximal element above each of its down-sets reaches every
//! class of size `n`. Duplicates are removed by canonical key.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::canonical::{canonicalize, CanonicalPoset};
use super::maps::enumerate_monotone_maps;
use crate::bits::BitMatrix;
use crate::error::{bound, Result};
use crate::poset::Poset;

pub const DEFAULT_POSET_BOUND: usize = 7;

fn cache() -> &'static Mutex<Vec<Arc<Vec<CanonicalPoset>>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<Vec<CanonicalPoset>>>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(vec![Arc::new(vec![CanonicalPoset {
            canonical_key: vec![0],
            poset: Poset::empty(),
        }])])
    })
}

/// `p` with one new maximal element `p.size()` above exactly `down`.
fn extend_by_top(p: &Poset, down: &[bool]) -> Poset {
    let n = p.size();
    let mut m = BitMatrix::new(n + 1);
    for i in 0..n {
        for j in 0..n {
            if p.leq(i, j) {
                m.set(i, j);
            }
        }
        if down[i] {
            m.set(i, n);
        }
    }
    m.set(n, n);
    Poset::from_closed(m)
}

fn next_level(prev: &[CanonicalPoset]) -> Vec<CanonicalPoset> {
    let found: Vec<Vec<CanonicalPoset>> = prev
        .par_iter()
        .map(|rep| {
            let p = Arc::new(rep.poset.clone());
            let arrow = Arc::new(Poset::chain(1));
            // a monotone map to [1] is the indicator of an up-set; its zero set is a down-set
            enumerate_monotone_maps(&p, &arrow)
                .map(|f| {
                    let down: Vec<bool> = f.image().iter().map(|&v| v == 0).collect();
                    canonicalize(&extend_by_top(&p, &down))
                })
                .collect()
        })
        .collect();
    let mut classes = BTreeMap::new();
    for c in found.into_iter().flatten() {
        classes.entry(c.canonical_key.clone()).or_insert(c);
    }
    classes.into_values().collect()
}

/// One canonical representative per isomorphism class, sorted by key, with no size limit.
pub fn posets_of_size(n: usize) -> Arc<Vec<CanonicalPoset>> {
    let mut levels = cache().lock().expect("poset cache");
    while levels.len() <= n {
        let next = next_level(levels.last().expect("level 0 present"));
        levels.push(Arc::new(next));
    }
    levels[n].clone()
}

pub fn enumerate_posets(n: usize) -> Result<Vec<CanonicalPoset>> {
    enumerate_posets_bounded(n, DEFAULT_POSET_BOUND)
}

pub fn enumerate_posets_bounded(n: usize, limit: usize) -> Result<Vec<CanonicalPoset>> {
    bound("poset size", n, limit)?;
    Ok(posets_of_size(n).to_vec())
}

/// Bounded lattices (complete finite posets) of size `n`, up to isomorphism.
pub fn enumerate_lattices(n: usize) -> Result<Vec<CanonicalPoset>> {
    Ok(enumerate_posets(n)?
        .into_iter()
        .filter(|c| c.poset.is_complete())
        .collect())
}
