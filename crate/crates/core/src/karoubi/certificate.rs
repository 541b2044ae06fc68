//! Explicit retracts: bounded lattices inside cubes, and chains inside cubes.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{find_isomorphism, monotone_maps};
use crate::cube::sort_endomorphism;
use crate::error::{bound, Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;
use crate::retract::Retract;

use super::{split_idempotent, Idempotent};

/// Largest lattice accepted by [`retract_certificate`]; the cube has `2^size` vertices.
pub const MAX_CERTIFIED_SIZE: usize = 12;

/// A complete poset `C` as a retract of `[1]^|C|`.
///
/// The section sends `c` to the indicator vector of `↓c`; the retraction
/// sends a vector to the join of its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractCertificate {
    pub lattice: Arc<Poset>,
    pub cube_dim: usize,
    pub section: MonotoneMap,
    pub retraction: MonotoneMap,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    lattice: &'a Poset,
    cube_dim: usize,
    section: &'a [usize],
    retraction: &'a [usize],
}

impl Serialize for RetractCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            lattice: &self.lattice,
            cube_dim: self.cube_dim,
            section: self.section.image(),
            retraction: self.retraction.image(),
        }
        .serialize(s)
    }
}

fn down_mask(c: &Poset, x: usize) -> usize {
    c.down_set(x).into_iter().map(|y| 1usize << y).sum()
}

fn support(x: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| x >> i & 1 == 1).collect()
}

impl RetractCertificate {
    /// Verifies monotonicity of both maps, the explicit formulas, and `r ∘ s = id`.
    pub fn check(&self) -> Result<()> {
        let c = &self.lattice;
        let n = self.cube_dim;
        let cube = Arc::new(Poset::interval_power(n));
        let s = MonotoneMap::new(c.clone(), cube.clone(), self.section.image().to_vec())?;
        let r = MonotoneMap::new(cube, c.clone(), self.retraction.image().to_vec())?;
        for x in 0..c.size() {
            if s.apply(x) != down_mask(c, x) {
                return Err(Error::InvariantViolation(format!("section at {x} is not ↓{x}")));
            }
        }
        for x in 0..1usize << n {
            if c.join_of(&support(x, n)) != Some(r.apply(x)) {
                return Err(Error::InvariantViolation(format!("retraction at {x:#b} is not a join")));
            }
        }
        if !r.compose(&s)?.is_identity() {
            return Err(Error::InvariantViolation("r ∘ s is not the identity".into()));
        }
        Ok(())
    }

    pub fn as_retract(&self) -> Retract {
        Retract {
            outer: self.section.cod().clone(),
            inner: self.lattice.clone(),
            section: self.section.clone(),
            retraction: self.retraction.clone(),
        }
    }
}

pub fn retract_certificate(c: &Arc<Poset>) -> Result<RetractCertificate> {
    if !c.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = c.size();
    bound("lattice size", n, MAX_CERTIFIED_SIZE)?;
    let cube = Arc::new(Poset::interval_power(n));
    let section_image = (0..n).map(|x| down_mask(c, x)).collect();
    let retraction_image = (0..1usize << n)
        .map(|x| c.join_of(&support(x, n)).expect("complete"))
        .collect();
    let cert = RetractCertificate {
        lattice: c.clone(),
        cube_dim: n,
        section: MonotoneMap::new(c.clone(), cube.clone(), section_image)?,
        retraction: MonotoneMap::new(cube, c.clone(), retraction_image)?,
    };
    cert.check()?;
    Ok(cert)
}

/// Down-sets of `C` ordered by inclusion, i.e. antitone maps `C -> [1]`.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    pub poset: Arc<Poset>,
    /// `masks[i]` is the `i`-th down-set as a bit-mask over `C`; ascending.
    pub masks: Vec<usize>,
}

pub fn down_set_lattice(c: &Poset) -> DownSetLattice {
    let n = c.size();
    assert!(n <= MAX_CERTIFIED_SIZE);
    let masks: Vec<usize> = (0..1usize << n)
        .filter(|&m| (0..n).all(|x| m >> x & 1 == 0 || down_mask(c, x) & !m == 0))
        .collect();
    let poset = Poset::from_leq_fn(masks.len(), |i, j| masks[i] & !masks[j] == 0);
    DownSetLattice {
        poset: Arc::new(poset),
        masks,
    }
}

/// The certificate assembled from two retracts: `C` inside its down-set
/// lattice (principal down-sets, joins), and the down-set lattice inside
/// `[1]^|C|` (indicator vectors, down-closure of the support).
pub fn two_step_certificate(c: &Arc<Poset>) -> Result<(Retract, Retract, RetractCertificate)> {
    if !c.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = c.size();
    bound("lattice size", n, MAX_CERTIFIED_SIZE)?;
    let downs = down_set_lattice(c);
    let index_of = |mask: usize| downs.masks.binary_search(&mask).expect("down-set");
    let yoneda = MonotoneMap::new(
        c.clone(),
        downs.poset.clone(),
        (0..n).map(|x| index_of(down_mask(c, x))).collect(),
    )?;
    let joins = MonotoneMap::new(
        downs.poset.clone(),
        c.clone(),
        downs
            .masks
            .iter()
            .map(|&m| c.join_of(&support(m, n)).expect("complete"))
            .collect(),
    )?;
    let first = Retract::new(yoneda, joins)?;

    let cube = Arc::new(Poset::interval_power(n));
    let restrict = MonotoneMap::new(downs.poset.clone(), cube.clone(), downs.masks.clone())?;
    let closure = MonotoneMap::new(
        cube,
        downs.poset.clone(),
        (0..1usize << n)
            .map(|x| index_of(support(x, n).into_iter().fold(0, |acc, y| acc | down_mask(c, y))))
            .collect(),
    )?;
    let second = Retract::new(restrict, closure)?;

    let composite = RetractCertificate {
        lattice: c.clone(),
        cube_dim: n,
        section: second.section.compose(&first.section)?,
        retraction: first.retraction.compose(&second.retraction)?,
    };
    Ok((first, second, composite))
}

/// `[n]` as a retract of `[1]^n`: `k` goes to the vector whose top `k`
/// coordinates are 1, and a vector goes to its coordinate sum.
pub fn simplex_retract(n: usize) -> Retract {
    assert!(n <= MAX_CERTIFIED_SIZE);
    let chain = Arc::new(Poset::chain(n));
    let cube = Arc::new(Poset::interval_power(n));
    let section = (0..=n).map(|k| ((1usize << k) - 1) << (n - k)).collect();
    let retraction = (0..1usize << n).map(|x| x.count_ones() as usize).collect();
    Retract::new(
        MonotoneMap::new(chain.clone(), cube.clone(), section).expect("section is monotone"),
        MonotoneMap::new(cube, chain, retraction).expect("sum is monotone"),
    )
    .expect("coordinate sum inverts the section")
}

/// Outcome of splitting the sorting idempotent on `[1]^m`.
#[derive(Clone, Debug)]
pub struct SortSplit {
    pub holds: bool,
    pub fixed_points: usize,
    /// Order-isomorphism from the chain `[m]` to the fixed-point poset.
    pub iso: Option<MonotoneMap>,
}

pub fn verify_sort_split(m: usize) -> Result<SortSplit> {
    bound("sort dimension", m, 10)?;
    let sort = Idempotent::new(sort_endomorphism(m).to_monotone_map())?;
    let split = split_idempotent(&sort);
    let chain = Arc::new(Poset::chain(m));
    let iso = find_isomorphism(&chain, &split.mid);
    let holds = iso.as_ref().is_some_and(|iso| {
        let simplex = simplex_retract(m);
        // the split retract, transported along the iso, is the simplex retract
        let section = split.section.compose(iso).expect("composable");
        let back = (0..=m).map(|k| iso.apply(k)).collect::<Vec<_>>();
        let retraction_matches = (0..1usize << m).all(|x| {
            let k = simplex.retraction.apply(x);
            back[k] == split.retraction.apply(x)
        });
        section.image() == simplex.section.image() && retraction_matches && split.check().is_ok()
    });
    Ok(SortSplit {
        holds,
        fixed_points: split.mid.size(),
        iso,
    })
}

/// Applies `Poset(q, -)` to a retract and checks that it stays a retract of hom-sets.
pub fn hom_functor_preserves(ret: &Retract, q: &Arc<Poset>) -> Result<bool> {
    let inner_homs = monotone_maps(q, &ret.inner);
    let outer_homs = monotone_maps(q, &ret.outer);
    let mut pushed = HashSet::new();
    for h in &inner_homs {
        let sh = ret.section.compose(h)?;
        if ret.retraction.compose(&sh)? != *h {
            return Ok(false);
        }
        pushed.insert(sh.into_image());
    }
    let injective = pushed.len() == inner_homs.len();
    let pulled: HashSet<Vec<usize>> = outer_homs
        .iter()
        .map(|g| ret.retraction.compose(g).map(MonotoneMap::into_image))
        .collect::<Result<_>>()?;
    let expected: HashSet<Vec<usize>> = inner_homs.into_iter().map(MonotoneMap::into_image).collect();
    Ok(injective && pulled == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_certificate() {
        let cert = retract_certificate(&Arc::new(Poset::singleton())).unwrap();
        assert_eq!(cert.cube_dim, 1);
        assert_eq!(cert.section.image(), &[1]);
        assert_eq!(cert.retraction.image(), &[0, 0]);
    }

    #[test]
    fn arrow_certificate() {
        let cert = retract_certificate(&Arc::new(Poset::chain(1))).unwrap();
        assert_eq!(cert.section.image(), &[0b01, 0b11]);
        assert!(cert.retraction.compose(&cert.section).unwrap().is_identity());
    }

    #[test]
    fn diamond_certificate() {
        let cert = retract_certificate(&Arc::new(Poset::interval_power(2))).unwrap();
        assert_eq!(cert.cube_dim, 4);
        cert.check().unwrap();
    }

    #[test]
    fn rejects_incomplete() {
        assert_eq!(retract_certificate(&Arc::new(Poset::empty())), Err(Error::NotComplete));
        assert_eq!(
            retract_certificate(&Arc::new(Poset::antichain(2))),
            Err(Error::NotComplete)
        );
    }

    #[test]
    fn simplex_examples() {
        let r = simplex_retract(2);
        assert_eq!(r.section.apply(1), 0b10);
        assert_eq!(r.retraction.apply(0b01), 1);
        for k in 0..=2 {
            assert_eq!(r.retraction.apply(r.section.apply(k)), k);
        }
        let r0 = simplex_retract(0);
        assert_eq!((r0.inner.size(), r0.outer.size()), (1, 1));
    }

    #[test]
    fn sort_split_small() {
        let s1 = verify_sort_split(1).unwrap();
        assert!(s1.holds && s1.fixed_points == 2);
        let s3 = verify_sort_split(3).unwrap();
        assert!(s3.holds && s3.fixed_points == 4);
    }

    #[test]
    fn two_step_matches_one_step() {
        for c in [Poset::singleton(), Poset::chain(2), Poset::interval_power(2)] {
            let c = Arc::new(c);
            let (_, _, composite) = two_step_certificate(&c).unwrap();
            assert_eq!(composite, retract_certificate(&c).unwrap());
        }
    }

    #[test]
    fn hom_functors_preserve_the_diamond_retract() {
        let cert = retract_certificate(&Arc::new(Poset::interval_power(2))).unwrap();
        for q in [Poset::singleton(), Poset::chain(1), Poset::antichain(2)] {
            assert!(hom_functor_preserves(&cert.as_retract(), &Arc::new(q)).unwrap());
        }
    }
}
