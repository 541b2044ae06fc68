//! Backtracking enumeration and counting of monotone maps.
//!
//! Domain elements are assigned along a fixed linear extension. The candidate
//! set for an element is the intersection of the codomain up-sets of the
//! images of its lower covers, all of which are already assigned. Candidates
//! are tried in ascending codomain index, so the output is lexicographic in
//! the linear extension.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bits::{full_row, iter_ones};
use crate::map::MonotoneMap;
use crate::poset::Poset;

#[derive(Clone, Debug)]
pub struct MapSearch {
    dom: Arc<Poset>,
    cod: Arc<Poset>,
    /// `order[pos]` is the domain element assigned at depth `pos`.
    order: Vec<usize>,
    /// Positions of the lower covers of `order[pos]`.
    preds: Vec<Vec<usize>>,
    full: Vec<u64>,
}

/// Prefix splitting stops once there are this many subtrees per worker.
const SUBTREES_PER_WORKER: usize = 8;

impl MapSearch {
    pub fn new(dom: Arc<Poset>, cod: Arc<Poset>) -> MapSearch {
        let order = dom.linear_extension();
        let mut position = vec![0; dom.size()];
        for (pos, &x) in order.iter().enumerate() {
            position[x] = pos;
        }
        let preds = order
            .iter()
            .map(|&x| {
                let mut p: Vec<usize> = dom.lower_covers(x).into_iter().map(|y| position[y]).collect();
                p.sort_unstable();
                p
            })
            .collect();
        let full = full_row(cod.size());
        MapSearch {
            dom,
            cod,
            order,
            preds,
            full,
        }
    }

    pub fn dom(&self) -> &Arc<Poset> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Poset> {
        &self.cod
    }

    fn depth(&self) -> usize {
        self.order.len()
    }

    fn candidates(&self, pos: usize, assigned: &[usize], out: &mut Vec<u64>) {
        out.clear();
        out.extend_from_slice(&self.full);
        for &p in &self.preds[pos] {
            for (o, u) in out.iter_mut().zip(self.cod.up_row(assigned[p])) {
                *o &= u;
            }
        }
    }

    fn build(&self, assigned: &[usize]) -> MonotoneMap {
        let mut image = vec![0; self.depth()];
        for (pos, &x) in self.order.iter().enumerate() {
            image[x] = assigned[pos];
        }
        MonotoneMap::new_unchecked(self.dom.clone(), self.cod.clone(), image)
    }

    fn count_from(&self, assigned: &mut Vec<usize>, scratch: &mut Vec<Vec<u64>>) -> u64 {
        let pos = assigned.len();
        if pos == self.depth() {
            return 1;
        }
        let mut cands = std::mem::take(&mut scratch[pos]);
        self.candidates(pos, assigned, &mut cands);
        let total = if pos + 1 == self.depth() {
            cands.iter().map(|w| w.count_ones() as u64).sum()
        } else {
            let mut acc = 0;
            for c in iter_ones(&cands) {
                assigned.push(c);
                acc += self.count_from(assigned, scratch);
                assigned.pop();
            }
            acc
        };
        scratch[pos] = cands;
        total
    }

    /// Valid partial assignments in lexicographic order, deep enough to give
    /// every worker several subtrees.
    fn prefixes(&self, workers: usize) -> Vec<Vec<usize>> {
        let target = workers.max(1) * SUBTREES_PER_WORKER;
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        let mut cands = Vec::new();
        while level.len() < target && level.first().is_some_and(|p| p.len() + 1 < self.depth()) {
            let mut next = Vec::new();
            for prefix in &level {
                self.candidates(prefix.len(), prefix, &mut cands);
                for c in iter_ones(&cands) {
                    let mut p = prefix.clone();
                    p.push(c);
                    next.push(p);
                }
            }
            if next.is_empty() {
                return next;
            }
            level = next;
        }
        level
    }

    /// Number of monotone maps, without materializing them.
    pub fn count(&self) -> u64 {
        let prefixes = self.prefixes(rayon::current_num_threads());
        prefixes
            .into_par_iter()
            .map(|mut prefix| {
                let mut scratch = vec![Vec::new(); self.depth()];
                self.count_from(&mut prefix, &mut scratch)
            })
            .sum()
    }

    /// [`count`](Self::count) on a dedicated pool of `workers` threads.
    pub fn count_with_workers(&self, workers: usize) -> u64 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("thread pool");
        pool.install(|| self.count())
    }

    /// All maps in enumeration order, computed in parallel over subtrees.
    pub fn collect(&self) -> Vec<MonotoneMap> {
        let prefixes = self.prefixes(rayon::current_num_threads());
        let chunks: Vec<Vec<MonotoneMap>> = prefixes
            .into_par_iter()
            .map(|prefix| {
                let mut it = MonotoneMaps::from_prefix(self.clone(), prefix);
                let mut out = Vec::new();
                while let Some(m) = it.next_image() {
                    out.push(self.build(m));
                }
                out
            })
            .collect();
        chunks.concat()
    }

    pub fn iter(&self) -> MonotoneMaps {
        MonotoneMaps::from_prefix(self.clone(), Vec::new())
    }
}

/// Streaming enumeration; yields every monotone map exactly once.
pub struct MonotoneMaps {
    search: MapSearch,
    base: usize,
    assigned: Vec<usize>,
    cands: Vec<Vec<u64>>,
    started: bool,
    done: bool,
}

impl MonotoneMaps {
    fn from_prefix(search: MapSearch, prefix: Vec<usize>) -> MonotoneMaps {
        let depth = search.depth();
        let base = prefix.len();
        let mut assigned = prefix;
        assigned.resize(depth, 0);
        MonotoneMaps {
            search,
            base,
            assigned,
            cands: vec![Vec::new(); depth + 1],
            started: false,
            done: false,
        }
    }

    fn next_image(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        let n = self.search.depth();
        let mut pos;
        if !self.started {
            self.started = true;
            if self.base == n {
                self.done = true;
                return Some(&self.assigned);
            }
            let mut c = std::mem::take(&mut self.cands[self.base]);
            self.search.candidates(self.base, &self.assigned, &mut c);
            self.cands[self.base] = c;
            pos = self.base;
        } else {
            pos = n - 1;
        }
        loop {
            let next = pop_lowest(&mut self.cands[pos]);
            match next {
                None => {
                    if pos == self.base {
                        self.done = true;
                        return None;
                    }
                    pos -= 1;
                }
                Some(c) => {
                    self.assigned[pos] = c;
                    if pos + 1 == n {
                        return Some(&self.assigned);
                    }
                    pos += 1;
                    let mut cs = std::mem::take(&mut self.cands[pos]);
                    self.search.candidates(pos, &self.assigned, &mut cs);
                    self.cands[pos] = cs;
                }
            }
        }
    }
}

fn pop_lowest(words: &mut [u64]) -> Option<usize> {
    for (wi, w) in words.iter_mut().enumerate() {
        if *w != 0 {
            let b = w.trailing_zeros() as usize;
            *w &= *w - 1;
            return Some(wi * 64 + b);
        }
    }
    None
}

impl Iterator for MonotoneMaps {
    type Item = MonotoneMap;

    fn next(&mut self) -> Option<MonotoneMap> {
        let image = self.next_image()?.to_vec();
        Some(self.search.build(&image))
    }
}

pub fn enumerate_monotone_maps(dom: &Arc<Poset>, cod: &Arc<Poset>) -> MonotoneMaps {
    MapSearch::new(dom.clone(), cod.clone()).iter()
}

/// Materialized, parallel form of [`enumerate_monotone_maps`]; same order.
pub fn monotone_maps(dom: &Arc<Poset>, cod: &Arc<Poset>) -> Vec<MonotoneMap> {
    MapSearch::new(dom.clone(), cod.clone()).collect()
}

pub fn count_monotone_maps(dom: &Poset, cod: &Poset) -> u64 {
    MapSearch::new(Arc::new(dom.clone()), Arc::new(cod.clone())).count()
}

pub fn endomorphisms(p: &Arc<Poset>) -> Vec<MonotoneMap> {
    monotone_maps(p, p)
}
