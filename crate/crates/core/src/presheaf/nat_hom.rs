//! Maps between complete posets recovered from their restrictions to cubes.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{count_natural_transformations, representable, PosetSite};
use crate::catalog::{count_monotone_maps, enumerate_monotone_maps};
use crate::error::{bound, Error, Result};
use crate::karoubi::{retract_certificate, MAX_CERTIFIED_SIZE};
use crate::map::MonotoneMap;
use crate::poset::Poset;

/// Above this many cube maps, the factorization route is used.
const CUBE_HOM_BUDGET: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NatHomRoute {
    /// `r2 ∘ g ∘ s` over all `g: [1]^n -> [1]^n2`.
    CubeHoms,
    /// `r2 ∘ h` over all `h: L -> [1]^n2`; every such `h` is `(h ∘ r) ∘ s`.
    Factorization,
}

#[derive(Clone, Debug)]
pub struct NatHom {
    /// Sorted by image.
    pub maps: Vec<MonotoneMap>,
    pub route: NatHomRoute,
    pub cube_dims: (usize, usize),
}

/// The maps `L -> L2` obtained by transporting cube maps along the retract
/// certificates of `L` and `L2`, checked against direct enumeration.
pub fn nat_hom_via_retract(l: &Arc<Poset>, l2: &Arc<Poset>, d: usize) -> Result<NatHom> {
    bound("cube truncation", d, MAX_CERTIFIED_SIZE)?;
    let c1 = retract_certificate(l)?;
    let c2 = retract_certificate(l2)?;
    bound("certificate cube dimension", c1.cube_dim, d)?;
    bound("certificate cube dimension", c2.cube_dim, d)?;
    let (s, r2) = (&c1.section, &c2.retraction);
    let cube1 = s.cod().clone();
    let cube2 = r2.dom().clone();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    // maps into a cube are tuples of maps into [1]
    let cube_homs = count_monotone_maps(&cube1, &Poset::chain(1)).checked_pow(c2.cube_dim as u32);
    let route = if cube_homs.is_some_and(|c| c <= CUBE_HOM_BUDGET) {
        for g in enumerate_monotone_maps(&cube1, &cube2) {
            found.insert(s.image().iter().map(|&x| r2.apply(g.apply(x))).collect());
        }
        NatHomRoute::CubeHoms
    } else {
        for h in enumerate_monotone_maps(l, &cube2) {
            found.insert(h.image().iter().map(|&x| r2.apply(x)).collect());
        }
        NatHomRoute::Factorization
    };
    let direct: BTreeSet<Vec<usize>> = enumerate_monotone_maps(l, l2).map(MonotoneMap::into_image).collect();
    if found != direct {
        return Err(Error::InvariantViolation(format!(
            "retract transport gives {} maps, direct enumeration {}",
            found.len(),
            direct.len()
        )));
    }
    let maps = found
        .into_iter()
        .map(|image| MonotoneMap::new(l.clone(), l2.clone(), image))
        .collect::<Result<_>>()?;
    Ok(NatHom {
        maps,
        route,
        cube_dims: (c1.cube_dim, c2.cube_dim),
    })
}

/// `|Nat(y(L)|□≤d, y(L2)|□≤d)|`, by exhaustive search over natural transformations.
pub fn restricted_yoneda_count(l: &Poset, l2: &Poset, d: usize) -> Result<usize> {
    bound("cube truncation", d, 2)?;
    let site = Arc::new(PosetSite::cubes(d)?);
    count_natural_transformations(&representable(&site, l), &representable(&site, l2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let point = Arc::new(Poset::singleton());
        assert_eq!(nat_hom_via_retract(&point, &point, 1).unwrap().maps.len(), 1);
        let c2 = Arc::new(Poset::chain(2));
        let arrow = Arc::new(Poset::chain(1));
        let nh = nat_hom_via_retract(&c2, &arrow, 3).unwrap();
        assert_eq!(nh.maps.len(), 4);
        assert_eq!(nh.route, NatHomRoute::CubeHoms);
        let diamond = Arc::new(Poset::interval_power(2));
        let nh = nat_hom_via_retract(&diamond, &arrow, 4).unwrap();
        assert_eq!(nh.maps.len(), 6);
    }

    #[test]
    fn large_cubes_use_factorization() {
        let diamond = Arc::new(Poset::interval_power(2));
        let nh = nat_hom_via_retract(&diamond, &diamond, 4).unwrap();
        assert_eq!(nh.route, NatHomRoute::Factorization);
        assert_eq!(nh.maps.len(), 36);
    }

    #[test]
    fn truncation_bound() {
        let diamond = Arc::new(Poset::interval_power(2));
        assert!(matches!(
            nat_hom_via_retract(&diamond, &diamond, 3),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn restricted_representables_see_all_maps() {
        let arrow = Poset::chain(1);
        let c2 = Poset::chain(2);
        assert_eq!(restricted_yoneda_count(&c2, &arrow, 2).unwrap(), 4);
        assert_eq!(restricted_yoneda_count(&arrow, &c2, 2).unwrap(), 6);
    }
}
