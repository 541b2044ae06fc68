//! Finite full subcategories of `Poset`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::monotone_maps;
use crate::error::{bound, Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

pub const MAX_SITE_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    /// Chains `[0], …, [d]`.
    Delta,
    /// Cubes `[1]^0, …, [1]^d`.
    #[serde(rename = "box")]
    Cube,
    Custom,
}

/// The monotone maps between two site objects, sorted by image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSet {
    maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl HomSet {
    fn new(dom: &Arc<Poset>, cod: &Arc<Poset>) -> HomSet {
        let mut maps: Vec<Vec<usize>> = monotone_maps(dom, cod)
            .into_iter()
            .map(MonotoneMap::into_image)
            .collect();
        maps.sort_unstable();
        let index = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        HomSet { maps, index }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.maps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.maps.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, image: &[usize]) -> Option<usize> {
        self.index.get(image).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSite {
    kind: SiteKind,
    objects: Vec<Arc<Poset>>,
    /// `homs[a * n + b]` holds the maps from object `a` to object `b`.
    homs: Vec<HomSet>,
}

impl PosetSite {
    fn build(kind: SiteKind, objects: Vec<Arc<Poset>>) -> PosetSite {
        let homs = objects
            .iter()
            .flat_map(|a| objects.iter().map(move |b| HomSet::new(a, b)))
            .collect();
        PosetSite { kind, objects, homs }
    }

    /// The truncation `Δ≤d`.
    pub fn delta(d: usize) -> Result<PosetSite> {
        bound("simplicial truncation", d, MAX_SITE_DIM)?;
        Ok(Self::build(
            SiteKind::Delta,
            (0..=d).map(|k| Arc::new(Poset::chain(k))).collect(),
        ))
    }

    /// The truncation `□≤d`.
    pub fn cubes(d: usize) -> Result<PosetSite> {
        bound("cube truncation", d, 3)?;
        Ok(Self::build(
            SiteKind::Cube,
            (0..=d).map(|k| Arc::new(Poset::interval_power(k))).collect(),
        ))
    }

    /// The full subcategory on `objects`, which must be pairwise distinct.
    pub fn custom(objects: Vec<Poset>) -> Result<PosetSite> {
        for (i, a) in objects.iter().enumerate() {
            if objects[..i].contains(a) {
                return Err(Error::SiteMismatch(format!("object {i} is listed twice")));
            }
            bound("custom site object size", a.size(), 8)?;
        }
        Ok(Self::build(
            SiteKind::Custom,
            objects.into_iter().map(Arc::new).collect(),
        ))
    }

    pub fn kind(&self) -> SiteKind {
        self.kind
    }

    /// Index of the last object.
    pub fn dim(&self) -> usize {
        self.objects.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, a: usize) -> &Arc<Poset> {
        &self.objects[a]
    }

    pub fn objects(&self) -> &[Arc<Poset>] {
        &self.objects
    }

    pub fn find_object(&self, p: &Poset) -> Option<usize> {
        self.objects.iter().position(|o| **o == *p)
    }

    pub fn hom(&self, a: usize, b: usize) -> &HomSet {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn hom_map(&self, a: usize, b: usize, h: usize) -> MonotoneMap {
        MonotoneMap::new_unchecked(
            self.objects[a].clone(),
            self.objects[b].clone(),
            self.hom(a, b).get(h).to_vec(),
        )
    }

    pub fn identity(&self, a: usize) -> usize {
        let id: Vec<usize> = (0..self.objects[a].size()).collect();
        self.hom(a, a).index_of(&id).expect("identity is monotone")
    }

    /// Index of `g ∘ f` for `f: a -> b` and `g: b -> c`.
    pub fn compose(&self, (a, b, f): (usize, usize, usize), (c, g): (usize, usize)) -> usize {
        let f = self.hom(a, b).get(f);
        let g = self.hom(b, c).get(g);
        let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
        self.hom(a, c)
            .index_of(&gf)
            .expect("full subcategory is closed under composition")
    }

    /// Checks that every composite of listed maps is listed and that identities are present.
    pub fn check_closed(&self) -> Result<()> {
        let n = self.objects.len();
        for a in 0..n {
            let id: Vec<usize> = (0..self.objects[a].size()).collect();
            if self.hom(a, a).index_of(&id).is_none() {
                return Err(Error::InvariantViolation(format!("identity of object {a} missing")));
            }
            for b in 0..n {
                for c in 0..n {
                    for f in self.hom(a, b).iter() {
                        for g in self.hom(b, c).iter() {
                            let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                            if self.hom(a, c).index_of(&gf).is_none() {
                                return Err(Error::InvariantViolation(format!(
                                    "composite {a} -> {b} -> {c} missing"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Position of each object of `self` among the objects of `larger`.
    pub fn embedding_into(&self, larger: &PosetSite) -> Result<Vec<usize>> {
        self.objects
            .iter()
            .map(|o| {
                larger
                    .find_object(o)
                    .ok_or_else(|| Error::SiteMismatch(format!("object {o:?} is not in the larger site")))
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct SiteJson {
    pub kind: SiteKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<Poset>>,
}

impl PosetSite {
    pub(crate) fn to_json(&self) -> SiteJson {
        SiteJson {
            kind: self.kind,
            dim: self.dim(),
            objects: (self.kind == SiteKind::Custom).then(|| self.objects.iter().map(|o| (**o).clone()).collect()),
        }
    }

    pub(crate) fn from_json(json: SiteJson) -> Result<PosetSite> {
        match json.kind {
            SiteKind::Delta => PosetSite::delta(json.dim),
            SiteKind::Cube => PosetSite::cubes(json.dim),
            SiteKind::Custom => {
                let objects = json
                    .objects
                    .ok_or_else(|| Error::Parse("custom site needs an object list".into()))?;
                PosetSite::custom(objects)
            }
        }
    }
}
