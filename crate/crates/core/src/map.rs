use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// An order-preserving function between finite posets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    dom: Arc<Poset>,
    cod: Arc<Poset>,
    image: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: Arc<Poset>, cod: Arc<Poset>, image: Vec<usize>) -> Result<MonotoneMap> {
        if image.len() != dom.size() {
            return Err(Error::DomainMismatch(format!(
                "image has {} entries for a domain of size {}",
                image.len(),
                dom.size()
            )));
        }
        if let Some(&index) = image.iter().find(|&&y| y >= cod.size()) {
            return Err(Error::Index {
                index,
                size: cod.size(),
            });
        }
        for (i, j) in dom.covers() {
            if !cod.leq(image[i], image[j]) {
                return Err(Error::NotMonotone(i, j));
            }
        }
        Ok(MonotoneMap { dom, cod, image })
    }

    /// Caller guarantees monotonicity.
    pub(crate) fn new_unchecked(dom: Arc<Poset>, cod: Arc<Poset>, image: Vec<usize>) -> MonotoneMap {
        debug_assert_eq!(image.len(), dom.size());
        MonotoneMap { dom, cod, image }
    }

    pub fn identity(p: Arc<Poset>) -> MonotoneMap {
        let image = (0..p.size()).collect();
        MonotoneMap {
            dom: p.clone(),
            cod: p,
            image,
        }
    }

    pub fn constant(dom: Arc<Poset>, cod: Arc<Poset>, value: usize) -> Result<MonotoneMap> {
        let image = vec![value; dom.size()];
        MonotoneMap::new(dom, cod, image)
    }

    pub fn dom(&self) -> &Arc<Poset> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Poset> {
        &self.cod
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &MonotoneMap) -> Result<MonotoneMap> {
        if !same_poset(&f.cod, &self.dom) {
            return Err(Error::DomainMismatch(
                "codomain of the first map differs from the domain of the second".into(),
            ));
        }
        Ok(MonotoneMap {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            image: f.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    pub fn is_endo(&self) -> bool {
        same_poset(&self.dom, &self.cod)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_endo() && self.image.iter().all(|&y| self.image[y] == y)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.image.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.image {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Order-embedding: `x <= y` iff `f x <= f y`.
    pub fn is_order_embedding(&self) -> bool {
        let n = self.dom.size();
        (0..n).all(|x| (0..n).all(|y| self.dom.leq(x, y) == self.cod.leq(self.image[x], self.image[y])))
    }

    /// Sorted list of the distinct values taken.
    pub fn range(&self) -> Vec<usize> {
        let mut r = self.image.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

pub(crate) fn same_poset(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Free-function form of [`MonotoneMap::compose`]: `g ∘ f`.
pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    g.compose(f)
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonotoneMap({:?})", self.image)
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    dom: Poset,
    cod: Poset,
    image: Vec<usize>,
}

impl Serialize for MonotoneMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson {
            dom: (*self.dom).clone(),
            cod: (*self.cod).clone(),
            image: self.image.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonotoneMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        MonotoneMap::new(Arc::new(raw.dom), Arc::new(raw.cod), raw.image).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> Arc<Poset> {
        Arc::new(Poset::chain(1))
    }

    #[test]
    fn monotonicity_is_checked() {
        assert_eq!(
            MonotoneMap::new(arrow(), arrow(), vec![1, 0]),
            Err(Error::NotMonotone(0, 1))
        );
        assert!(MonotoneMap::new(arrow(), arrow(), vec![0]).is_err());
        assert!(MonotoneMap::new(arrow(), arrow(), vec![0, 2]).is_err());
    }

    #[test]
    fn composition_examples() {
        let id = MonotoneMap::identity(arrow());
        let c0 = MonotoneMap::constant(arrow(), arrow(), 0).unwrap();
        let c1 = MonotoneMap::constant(arrow(), arrow(), 1).unwrap();
        assert_eq!(id.compose(&c1).unwrap(), c1);
        assert_eq!(c0.compose(&c1).unwrap(), c0);
        assert!(c0.is_idempotent() && id.is_identity() && !c0.is_injective());
        let point = Arc::new(Poset::singleton());
        let p = MonotoneMap::constant(point.clone(), arrow(), 1).unwrap();
        assert!(matches!(p.compose(&c0), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn json_shape() {
        let f = MonotoneMap::constant(arrow(), arrow(), 1).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"dom":{"size":2,"relation":[[0,1]]},"cod":{"size":2,"relation":[[0,1]]},"image":[1,1]}"#
        );
        let bad = s.replace("[1,1]", "[1,0]");
        assert!(serde_json::from_str::<MonotoneMap>(&bad).is_err());
        assert_eq!(serde_json::from_str::<MonotoneMap>(&s).unwrap(), f);
    }
}
