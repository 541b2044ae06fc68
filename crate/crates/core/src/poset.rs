//! Finite posets on dense indices `0..size`, stored as packed `leq` rows.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{full_row, iter_ones, BitMatrix};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    up: BitMatrix,
    down: BitMatrix,
}

/// Meet and join tables of a bounded lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeStructure {
    pub base: Poset,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

impl Poset {
    /// Closes `pairs` reflexively and transitively; fails if the closure is not antisymmetric.
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut m = BitMatrix::identity(size);
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= size {
                    return Err(Error::Index { index, size });
                }
            }
            m.set(i, j);
        }
        m.transitive_closure();
        for i in 0..size {
            for j in iter_ones(m.row(i)) {
                if j != i && m.get(j, i) {
                    return Err(Error::Cycle(i, j));
                }
            }
        }
        Ok(Poset::from_closed(m))
    }

    /// `m` must already be a partial order.
    pub(crate) fn from_closed(m: BitMatrix) -> Poset {
        let p = Poset {
            down: m.transpose(),
            up: m,
        };
        debug_assert!(p.check_laws().is_ok());
        p
    }

    pub(crate) fn from_leq_fn(size: usize, leq: impl Fn(usize, usize) -> bool) -> Poset {
        let mut m = BitMatrix::new(size);
        for i in 0..size {
            for j in 0..size {
                if leq(i, j) {
                    m.set(i, j);
                }
            }
        }
        Poset::from_closed(m)
    }

    pub fn empty() -> Poset {
        Poset::antichain(0)
    }

    pub fn singleton() -> Poset {
        Poset::antichain(1)
    }

    /// The chain `[n] = {0 < 1 < ... < n}` with `n + 1` elements.
    pub fn chain(n: usize) -> Poset {
        Poset::from_leq_fn(n + 1, |i, j| i <= j)
    }

    pub fn antichain(size: usize) -> Poset {
        Poset::from_closed(BitMatrix::identity(size))
    }

    /// `[1]^n`; element `x` is the bit-vector whose `i`-th coordinate is bit `i` of `x`.
    pub fn interval_power(n: usize) -> Poset {
        assert!(n <= 14, "interval power too large");
        Poset::from_leq_fn(1 << n, |x, y| x & !y == 0)
    }

    /// Componentwise order; the pair `(p, q)` has index `p + |P| * q`.
    pub fn product(p: &Poset, q: &Poset) -> Poset {
        let a = p.size();
        Poset::from_leq_fn(a * q.size(), |x, y| p.leq(x % a, y % a) && q.leq(x / a, y / a))
    }

    pub fn opposite(&self) -> Poset {
        Poset {
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// The induced subposet on `elements` (in the given order).
    pub fn induced(&self, elements: &[usize]) -> Poset {
        Poset::from_leq_fn(elements.len(), |i, j| self.leq(elements[i], elements[j]))
    }

    /// Reindexes along `order`, where `order[new] = old`.
    pub fn relabel(&self, order: &[usize]) -> Poset {
        assert_eq!(order.len(), self.size());
        self.induced(order)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.up.size()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up.get(i, j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `{ y : i <= y }` as packed bits.
    #[inline]
    pub fn up_row(&self, i: usize) -> &[u64] {
        self.up.row(i)
    }

    /// `{ y : y <= i }` as packed bits.
    #[inline]
    pub fn down_row(&self, i: usize) -> &[u64] {
        self.down.row(i)
    }

    pub fn up_set(&self, i: usize) -> Vec<usize> {
        iter_ones(self.up_row(i)).collect()
    }

    pub fn down_set(&self, i: usize) -> Vec<usize> {
        iter_ones(self.down_row(i)).collect()
    }

    pub fn check_laws(&self) -> Result<()> {
        let n = self.size();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::InvariantViolation(format!("not reflexive at {i}")));
            }
            for j in iter_ones(self.up_row(i)) {
                if j != i && self.leq(j, i) {
                    return Err(Error::Cycle(i, j));
                }
                for k in iter_ones(self.up_row(j)) {
                    if !self.leq(i, k) {
                        return Err(Error::InvariantViolation(format!(
                            "not transitive at {i} <= {j} <= {k}"
                        )));
                    }
                }
                if !self.down.get(j, i) {
                    return Err(Error::InvariantViolation("down rows out of sync".into()));
                }
            }
        }
        Ok(())
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size() {
            for y in iter_ones(self.up_row(x)) {
                if y == x {
                    continue;
                }
                let between = self
                    .up_row(x)
                    .iter()
                    .zip(self.down_row(y))
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>();
                if between == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Strict lower covers of `y`.
    pub fn lower_covers(&self, y: usize) -> Vec<usize> {
        self.down_set(y)
            .into_iter()
            .filter(|&x| x != y && self.is_cover(x, y))
            .collect()
    }

    fn is_cover(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y) && !(0..self.size()).any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
    }

    /// Elements sorted by (size of down-set, index); strictly smaller elements come first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&i| (self.down.row_count(i), i));
        order
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.size()];
        for x in self.linear_extension() {
            h[x] = iter_ones(self.down_row(x))
                .filter(|&y| y != x)
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// The element `g` of `set` with `set ⊆ ↓g`, if any.
    fn greatest_in(&self, set: &[u64]) -> Option<usize> {
        iter_ones(set).find(|&g| set.iter().zip(self.down_row(g)).all(|(s, d)| s & !d == 0))
    }

    fn least_in(&self, set: &[u64]) -> Option<usize> {
        iter_ones(set).find(|&g| set.iter().zip(self.up_row(g)).all(|(s, u)| s & !u == 0))
    }

    pub fn terminal(&self) -> Option<usize> {
        self.greatest_in(&full_row(self.size()))
    }

    pub fn initial(&self) -> Option<usize> {
        self.least_in(&full_row(self.size()))
    }

    /// Packed set of common lower bounds of `targets`.
    pub fn lower_bound_bits(&self, targets: &[usize]) -> Vec<u64> {
        let mut acc = full_row(self.size());
        for &t in targets {
            for (a, d) in acc.iter_mut().zip(self.down_row(t)) {
                *a &= d;
            }
        }
        acc
    }

    pub fn upper_bound_bits(&self, targets: &[usize]) -> Vec<u64> {
        let mut acc = full_row(self.size());
        for &t in targets {
            for (a, u) in acc.iter_mut().zip(self.up_row(t)) {
                *a &= u;
            }
        }
        acc
    }

    /// Infimum of an arbitrary subset (the empty infimum is the top).
    pub fn meet_of(&self, targets: &[usize]) -> Option<usize> {
        self.greatest_in(&self.lower_bound_bits(targets))
    }

    pub fn join_of(&self, targets: &[usize]) -> Option<usize> {
        self.least_in(&self.upper_bound_bits(targets))
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet_of(&[a, b])
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join_of(&[a, b])
    }

    /// Nonempty with all binary meets and joins; for finite posets this is completeness.
    pub fn is_complete(&self) -> bool {
        let n = self.size();
        n > 0 && (0..n).all(|a| (a + 1..n).all(|b| self.meet(a, b).is_some() && self.join(a, b).is_some()))
    }

    pub fn lattice_structure(&self) -> Option<LatticeStructure> {
        if !self.is_complete() {
            return None;
        }
        let n = self.size();
        let table = |f: &dyn Fn(usize, usize) -> Option<usize>| -> Vec<Vec<usize>> {
            (0..n)
                .map(|a| (0..n).map(|b| f(a, b).expect("complete")).collect())
                .collect()
        };
        Some(LatticeStructure {
            base: self.clone(),
            meet: table(&|a, b| self.meet(a, b)),
            join: table(&|a, b| self.join(a, b)),
            bottom: self.initial()?,
            top: self.terminal()?,
        })
    }

    /// Pairs of the full order relation, sorted.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .flat_map(|i| iter_ones(self.up_row(i)).map(move |j| (i, j)))
            .collect()
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({}; {:?})", self.size(), self.covers())
    }
}

/// Orders by size, then by the sorted relation; used only for deterministic sorting.
impl PartialOrd for Poset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.size(), self.relation()).cmp(&(other.size(), other.relation()))
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    size: usize,
    relation: Vec<[usize; 2]>,
}

impl Serialize for Poset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson {
            size: self.size(),
            relation: self.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PosetJson::deserialize(d)?;
        let pairs: Vec<(usize, usize)> = raw.relation.iter().map(|p| (p[0], p[1])).collect();
        Poset::from_relation(raw.size, &pairs).map_err(serde::de::Error::custom)
    }
}
