//! The cube category with connections.
//!
//! A morphism `[1]^m -> [1]^n` is an `n`-tuple of monotone Boolean functions
//! in `m` variables. Each function is stored as the antichain of its minimal
//! true points (an irredundant monotone DNF): a mask `S` in the family means
//! the conjunction of the variables in `S`. The empty family is constant
//! false and `{∅}` is constant true. Families are kept sorted ascending, so
//! structural equality is equality of maps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

/// Largest cube dimension accepted by the canonical form.
pub const MAX_CUBE_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCube")]
pub struct CubeMorphism {
    dom: usize,
    cod: usize,
    components: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct RawCube {
    dom: usize,
    cod: usize,
    components: Vec<Vec<u32>>,
}

impl TryFrom<RawCube> for CubeMorphism {
    type Error = Error;

    fn try_from(raw: RawCube) -> Result<Self> {
        CubeMorphism::new(raw.dom, raw.cod, raw.components)
    }
}

/// Reduces a family of masks to its minimal elements, sorted ascending.
pub fn minimize(mut family: Vec<u32>) -> Vec<u32> {
    family.sort_by_key(|&s| (s.count_ones(), s));
    family.dedup();
    let mut kept: Vec<u32> = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|&k| k & !s == 0) {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

fn is_antichain(family: &[u32]) -> bool {
    family.iter().all(|&a| family.iter().all(|&b| a == b || a & b != a))
}

#[inline]
fn eval_family(family: &[u32], x: u32) -> bool {
    family.iter().any(|&s| s & !x == 0)
}

fn check_dim(what: &'static str, d: usize) -> Result<()> {
    crate::error::bound(what, d, MAX_CUBE_DIM)
}

fn cube_dim_of(p: &Poset) -> Result<usize> {
    let size = p.size();
    if size.is_power_of_two() {
        let d = size.trailing_zeros() as usize;
        if d <= MAX_CUBE_DIM && *p == Poset::interval_power(d) {
            return Ok(d);
        }
    }
    Err(Error::Shape(format!("poset of size {size} is not an interval power")))
}

/// Minimal true points of a monotone truth table on `m` variables.
fn minimal_points(m: usize, truth: impl Fn(u32) -> bool) -> Vec<u32> {
    (0..1u32 << m)
        .filter(|&x| truth(x) && (0..m).all(|i| x >> i & 1 == 0 || !truth(x & !(1 << i))))
        .collect()
}

impl CubeMorphism {
    /// Strict constructor: each family must already be a sorted antichain over `dom` variables.
    pub fn new(dom: usize, cod: usize, components: Vec<Vec<u32>>) -> Result<CubeMorphism> {
        check_dim("cube dimension", dom)?;
        check_dim("cube dimension", cod)?;
        if components.len() != cod {
            return Err(Error::Shape(format!(
                "{} components for codomain dimension {cod}",
                components.len()
            )));
        }
        for family in &components {
            if family.iter().any(|&s| s >> dom != 0) {
                return Err(Error::Shape(format!("mask outside {dom} variables")));
            }
            if !family.windows(2).all(|w| w[0] < w[1]) || !is_antichain(family) {
                return Err(Error::Shape(format!("family {family:?} is not a sorted antichain")));
            }
        }
        Ok(CubeMorphism { dom, cod, components })
    }

    /// Minimizes arbitrary families (interpreted as DNFs) into canonical form.
    pub fn from_families(dom: usize, families: Vec<Vec<u32>>) -> Result<CubeMorphism> {
        let cod = families.len();
        CubeMorphism::new(dom, cod, families.into_iter().map(minimize).collect())
    }

    pub fn identity(n: usize) -> CubeMorphism {
        CubeMorphism {
            dom: n,
            cod: n,
            components: (0..n).map(|i| vec![1 << i]).collect(),
        }
    }

    pub fn dom_dim(&self) -> usize {
        self.dom
    }

    pub fn cod_dim(&self) -> usize {
        self.cod
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    /// Image of the vertex `x` of `[1]^dom`, as a bit-vector.
    pub fn evaluate(&self, x: u32) -> u32 {
        self.components
            .iter()
            .enumerate()
            .fold(0, |acc, (k, fam)| acc | (eval_family(fam, x) as u32) << k)
    }

    pub fn from_monotone_map(f: &MonotoneMap) -> Result<CubeMorphism> {
        let m = cube_dim_of(f.dom())?;
        let n = cube_dim_of(f.cod())?;
        let components = (0..n)
            .map(|k| minimal_points(m, |x| f.apply(x as usize) >> k & 1 == 1))
            .collect();
        Ok(CubeMorphism {
            dom: m,
            cod: n,
            components,
        })
    }

    pub fn to_monotone_map(&self) -> MonotoneMap {
        let dom = Arc::new(Poset::interval_power(self.dom));
        let cod = Arc::new(Poset::interval_power(self.cod));
        let image = (0..1u32 << self.dom).map(|x| self.evaluate(x) as usize).collect();
        MonotoneMap::new_unchecked(dom, cod, image)
    }

    /// `self ∘ f` by substituting DNFs and re-minimizing.
    pub fn compose(&self, f: &CubeMorphism) -> Result<CubeMorphism> {
        if f.cod != self.dom {
            return Err(Error::DomainMismatch(format!(
                "cannot compose [1]^{} -> [1]^{} after [1]^{} -> [1]^{}",
                self.dom, self.cod, f.dom, f.cod
            )));
        }
        let components = self
            .components
            .iter()
            .map(|fam| {
                let mut out = Vec::new();
                for &term in fam {
                    // conjunction of f's components at the variables of `term`
                    let mut product = vec![0u32];
                    for i in (0..self.dom).filter(|i| term >> i & 1 == 1) {
                        let factor = &f.components[i];
                        let mut next = Vec::with_capacity(product.len() * factor.len());
                        for &a in &product {
                            for &b in factor {
                                next.push(a | b);
                            }
                        }
                        product = minimize(next);
                        if product.is_empty() {
                            break;
                        }
                    }
                    out.extend(product);
                }
                minimize(out)
            })
            .collect();
        Ok(CubeMorphism {
            dom: f.dom,
            cod: self.cod,
            components,
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.dom == self.cod && self.compose(self).as_ref() == Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionKind {
    Meet,
    Join,
}

/// Structural generators of the cube category, parameterized by the cube dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `[1]^(n-1) -> [1]^n`, inserting the constant `value` at slot `index`.
    Face { index: usize, value: bool },
    /// `[1]^n -> [1]^(n-1)`, dropping slot `index`.
    Degeneracy { index: usize },
    /// `[1]^(n+1) -> [1]^n`, merging slots `index` and `index + 1`.
    Connection { index: usize, kind: ConnectionKind },
    /// `[1]^n -> [1]^n`, output coordinate `j` reads input coordinate `perm[j]`.
    Symmetry(Vec<usize>),
    /// `[1] -> [1]^n`, repeating the coordinate.
    Diagonal,
}

fn projection(i: usize) -> Vec<u32> {
    vec![1 << i]
}

pub fn structural_generator(generator: &Generator, n: usize) -> Result<CubeMorphism> {
    let out_of_range = |index: usize, size: usize| Err(Error::Index { index, size });
    let (dom, cod, components): (usize, usize, Vec<Vec<u32>>) = match generator {
        Generator::Face { index, value } => {
            if *index >= n {
                return out_of_range(*index, n);
            }
            let comps = (0..n)
                .map(|j| match j.cmp(index) {
                    std::cmp::Ordering::Less => projection(j),
                    std::cmp::Ordering::Equal => {
                        if *value {
                            vec![0]
                        } else {
                            vec![]
                        }
                    }
                    std::cmp::Ordering::Greater => projection(j - 1),
                })
                .collect();
            (n - 1, n, comps)
        }
        Generator::Degeneracy { index } => {
            if *index >= n {
                return out_of_range(*index, n);
            }
            let comps = (0..n - 1)
                .map(|j| if j < *index { projection(j) } else { projection(j + 1) })
                .collect();
            (n, n - 1, comps)
        }
        Generator::Connection { index, kind } => {
            if *index >= n {
                return out_of_range(*index, n);
            }
            let merged = match kind {
                ConnectionKind::Meet => vec![0b11 << index],
                ConnectionKind::Join => vec![1 << index, 1 << (index + 1)],
            };
            let comps = (0..n)
                .map(|j| match j.cmp(index) {
                    std::cmp::Ordering::Less => projection(j),
                    std::cmp::Ordering::Equal => merged.clone(),
                    std::cmp::Ordering::Greater => projection(j + 1),
                })
                .collect();
            (n + 1, n, comps)
        }
        Generator::Symmetry(perm) => {
            let mut seen = vec![false; n];
            if perm.len() != n {
                return Err(Error::Shape(format!("permutation of length {} on [1]^{n}", perm.len())));
            }
            for &p in perm {
                if p >= n || std::mem::replace(&mut seen[p], true) {
                    return out_of_range(p, n);
                }
            }
            (n, n, perm.iter().map(|&p| projection(p)).collect())
        }
        Generator::Diagonal => (1, n, vec![projection(0); n]),
    };
    CubeMorphism::new(dom, cod, components)
}

/// The endomorphism of `[1]^m` sorting coordinates ascending; component `k`
/// holds iff at least `m - k` coordinates are 1.
pub fn sort_endomorphism(m: usize) -> CubeMorphism {
    assert!(m <= MAX_CUBE_DIM);
    let components = (0..m)
        .map(|k| {
            let need = (m - k) as u32;
            (0..1u32 << m).filter(|s| s.count_ones() == need).collect()
        })
        .collect();
    CubeMorphism {
        dom: m,
        cod: m,
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let id = MonotoneMap::identity(Arc::new(Poset::interval_power(2)));
        let c = CubeMorphism::from_monotone_map(&id).unwrap();
        assert_eq!(c.components(), &[vec![0b01], vec![0b10]]);
        assert_eq!(c, CubeMorphism::identity(2));

        let sq = Arc::new(Poset::interval_power(2));
        let arrow = Arc::new(Poset::interval_power(1));
        let min = MonotoneMap::new(sq.clone(), arrow.clone(), vec![0, 0, 0, 1]).unwrap();
        assert_eq!(
            CubeMorphism::from_monotone_map(&min).unwrap().components(),
            &[vec![0b11]]
        );

        for m in 0..4 {
            let one = MonotoneMap::constant(Arc::new(Poset::interval_power(m)), arrow.clone(), 1).unwrap();
            assert_eq!(CubeMorphism::from_monotone_map(&one).unwrap().components(), &[vec![0]]);
        }
    }

    #[test]
    fn shape_errors() {
        let chain = Arc::new(Poset::chain(2));
        let f = MonotoneMap::identity(chain);
        assert!(matches!(CubeMorphism::from_monotone_map(&f), Err(Error::Shape(_))));
        assert!(CubeMorphism::new(1, 1, vec![vec![0, 1]]).is_err());
        assert!(CubeMorphism::new(1, 1, vec![vec![2]]).is_err());
        assert!(CubeMorphism::new(2, 1, vec![vec![2, 1]]).is_err());
    }

    #[test]
    fn generators() {
        let point_at_one = structural_generator(&Generator::Face { index: 0, value: true }, 1).unwrap();
        assert_eq!((point_at_one.dom_dim(), point_at_one.components()), (0, &[vec![0]][..]));
        let meet = structural_generator(
            &Generator::Connection {
                index: 0,
                kind: ConnectionKind::Meet,
            },
            1,
        )
        .unwrap();
        assert_eq!(meet.components(), &[vec![0b11]]);
        let join = structural_generator(
            &Generator::Connection {
                index: 0,
                kind: ConnectionKind::Join,
            },
            1,
        )
        .unwrap();
        assert_eq!(join.components(), &[vec![0b01, 0b10]]);
        let diag = structural_generator(&Generator::Diagonal, 3).unwrap();
        assert_eq!(diag.evaluate(1), 0b111);
        let swap = structural_generator(&Generator::Symmetry(vec![1, 0]), 2).unwrap();
        assert_eq!(swap.evaluate(0b01), 0b10);
        assert!(structural_generator(&Generator::Symmetry(vec![0, 0]), 2).is_err());
        assert!(structural_generator(&Generator::Degeneracy { index: 3 }, 3).is_err());
    }

    #[test]
    fn degeneracy_after_face_is_identity() {
        for n in 1..=3 {
            for index in 0..n {
                for value in [false, true] {
                    let face = structural_generator(&Generator::Face { index, value }, n).unwrap();
                    let degen = structural_generator(&Generator::Degeneracy { index }, n).unwrap();
                    assert_eq!(degen.compose(&face).unwrap(), CubeMorphism::identity(n - 1));
                }
            }
        }
    }

    #[test]
    fn sort_examples() {
        let s2 = sort_endomorphism(2);
        assert_eq!(s2.evaluate(0b01), 0b10);
        assert_eq!(s2.evaluate(0b00), 0b00);
        assert_eq!(s2.evaluate(0b11), 0b11);
        for m in 0..=4 {
            let s = sort_endomorphism(m);
            assert!(s.is_idempotent());
        }
    }

    #[test]
    fn json_is_canonical() {
        let s = serde_json::to_string(&sort_endomorphism(2)).unwrap();
        assert_eq!(s, r#"{"dom":2,"cod":2,"components":[[3],[1,2]]}"#);
        let back: CubeMorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sort_endomorphism(2));
        assert!(serde_json::from_str::<CubeMorphism>(r#"{"dom":2,"cod":1,"components":[[1,3]]}"#).is_err());
    }
}
