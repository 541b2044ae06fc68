//! Pointwise left Kan extension along the inclusion of simplices into posets.
//!
//! `(i_! X)(M)` is the colimit of `X` pulled back to the comma category `M ↓ i`,
//! whose objects are maps `M -> [k]`. The colimit of a set-valued presheaf is
//! the set of connected components of its category of elements, and since
//! every map in `Δ` is a composite of cofaces and codegeneracies, those
//! generators already connect everything that is connected.

use std::borrow::Cow;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::simplicial::{skeletal_extension, skeletal_extension_map};
use super::{first_occurrence_labels, Presheaf, PresheafMap, SiteKind};
use crate::catalog::monotone_maps;
use crate::error::{bound, Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

/// Largest working truncation; the stability check also uses the next level.
pub const MAX_KAN_DEPTH: usize = 6;

/// An element of the category of elements: a map `M -> [level]` and a cell of `X[level]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KanElement {
    pub level: usize,
    pub map: Vec<usize>,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KanValue {
    pub components: usize,
    pub depth: usize,
    /// The first element of each component, in component order.
    pub representatives: Vec<KanElement>,
}

struct Levels {
    maps: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Levels {
    fn new(m: &Arc<Poset>, top: usize) -> Levels {
        let maps: Vec<Vec<Vec<usize>>> = (0..=top)
            .map(|k| {
                let mut level: Vec<Vec<usize>> = monotone_maps(m, &Arc::new(Poset::chain(k)))
                    .into_iter()
                    .map(MonotoneMap::into_image)
                    .collect();
                level.sort_unstable();
                level
            })
            .collect();
        let index = maps
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, h)| (h.clone(), i)).collect())
            .collect();
        Levels { maps, index }
    }
}

/// Cofaces `[k-1] -> [k]` and codegeneracies `[k] -> [k-1]` with both ends at most `top`.
fn generators(top: usize) -> Vec<(usize, usize, Vec<usize>)> {
    let mut gens = Vec::new();
    for k in 1..=top {
        for i in 0..=k {
            gens.push((k - 1, k, (0..k).map(|j| j + usize::from(j >= i)).collect()));
        }
        for i in 0..k {
            gens.push((k, k - 1, (0..=k).map(|j| j - usize::from(j > i)).collect()));
        }
    }
    gens
}

struct Evaluation {
    value: KanValue,
    /// Component of every element at levels up to the depth.
    labels: Vec<usize>,
    offsets: Vec<usize>,
}

fn prepare(x: &Presheaf, needed: usize) -> Result<Cow<'_, Presheaf>> {
    if x.site().kind() != SiteKind::Delta {
        return Err(Error::SiteMismatch(
            "left Kan extension needs a presheaf on a simplex truncation".into(),
        ));
    }
    if x.site().dim() >= needed {
        Ok(Cow::Borrowed(x))
    } else {
        Ok(Cow::Owned(skeletal_extension(x, needed)?))
    }
}

fn check_arguments(m: &Poset, depth: usize) -> Result<()> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    bound("Kan extension depth", depth, MAX_KAN_DEPTH)?;
    bound("Kan extension argument size", m.size(), 8)
}

fn evaluate(x: &Presheaf, depth: usize, levels: &Levels) -> Result<Evaluation> {
    let top = depth + 1;
    let site = x.site();
    let mut offsets = Vec::with_capacity(top + 2);
    let mut acc = 0;
    for k in 0..=top {
        offsets.push(acc);
        acc += levels.maps[k].len() * x.cells(k);
    }
    offsets.push(acc);
    let total = acc;
    let prefix = offsets[top];
    let mut uf = UnionFind::new(total);
    let gens = generators(top);
    let (low, high): (Vec<_>, Vec<_>) = gens.iter().partition(|(k1, k2, _)| *k1.max(k2) <= depth);
    let add = |uf: &mut UnionFind<usize>, (k1, k2, u): &(usize, usize, Vec<usize>)| {
        let (k1, k2) = (*k1, *k2);
        let h = site.hom(k1, k2).index_of(u).expect("generator is monotone");
        let act = x.action(k1, k2, h);
        let (c1, c2) = (x.cells(k1), x.cells(k2));
        for (h1, map) in levels.maps[k1].iter().enumerate() {
            let composite: Vec<usize> = map.iter().map(|&t| u[t]).collect();
            let h2 = levels.index[k2][&composite];
            for (y, &z) in act.iter().enumerate() {
                uf.union(offsets[k1] + h1 * c1 + z, offsets[k2] + h2 * c2 + y);
            }
        }
    };
    for g in &low {
        add(&mut uf, g);
    }
    let (count, labels) = first_occurrence_labels(&uf, prefix);
    for g in &high {
        add(&mut uf, g);
    }
    let prefix_roots: HashSet<usize> = (0..prefix).map(|e| uf.find(e)).collect();
    let all_roots: HashSet<usize> = (0..total).map(|e| uf.find(e)).collect();
    if prefix_roots.len() != count || all_roots.len() != count {
        return Err(Error::TruncationUnstable {
            depth,
            next: top,
            at_depth: count,
            at_next: all_roots.len(),
        });
    }
    let mut representatives: Vec<Option<KanElement>> = vec![None; count];
    for k in 0..=depth {
        let c = x.cells(k);
        for e in offsets[k]..offsets[k + 1] {
            let slot = &mut representatives[labels[e]];
            if slot.is_none() {
                let local = e - offsets[k];
                *slot = Some(KanElement {
                    level: k,
                    map: levels.maps[k][local / c].clone(),
                    cell: local % c,
                });
            }
        }
    }
    Ok(Evaluation {
        value: KanValue {
            components: count,
            depth,
            representatives: representatives
                .into_iter()
                .map(|r| r.expect("every component has an element"))
                .collect(),
        },
        labels,
        offsets,
    })
}

/// `(i_! X)(M)` computed over maps `M -> [k]` with `k <= depth`, and checked
/// to agree with the computation at `depth + 1`. A presheaf given on a lower
/// truncation is first extended by degenerate cells.
pub fn left_kan(x: &Presheaf, m: &Arc<Poset>, depth: usize) -> Result<KanValue> {
    check_arguments(m, depth)?;
    let x = prepare(x, depth + 1)?;
    let levels = Levels::new(m, depth + 1);
    Ok(evaluate(&x, depth, &levels)?.value)
}

/// The map `(i_! X)(M) -> (i_! Y)(M)` induced by `f: X -> Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KanMap {
    pub source: KanValue,
    pub target: KanValue,
    /// Image of each source component.
    pub map: Vec<usize>,
}

impl KanMap {
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.components];
        self.map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let hit: HashSet<usize> = self.map.iter().copied().collect();
        hit.len() == self.target.components
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }
}

pub fn left_kan_map(f: &PresheafMap, m: &Arc<Poset>, depth: usize) -> Result<KanMap> {
    check_arguments(m, depth)?;
    if f.source().site().kind() != SiteKind::Delta {
        return Err(Error::SiteMismatch(
            "left Kan extension needs a presheaf on a simplex truncation".into(),
        ));
    }
    let needed = depth + 1;
    let f: Cow<PresheafMap> = if f.source().site().dim() >= needed {
        Cow::Borrowed(f)
    } else {
        Cow::Owned(skeletal_extension_map(f, needed)?)
    };
    let levels = Levels::new(m, needed);
    let src = evaluate(f.source(), depth, &levels)?;
    let tgt = evaluate(f.target(), depth, &levels)?;
    let map = src
        .value
        .representatives
        .iter()
        .map(|e| {
            let h = levels.index[e.level][&e.map];
            let y = f.component(e.level)[e.cell];
            tgt.labels[tgt.offsets[e.level] + h * f.target().cells(e.level) + y]
        })
        .collect();
    Ok(KanMap {
        source: src.value,
        target: tgt.value,
        map,
    })
}
