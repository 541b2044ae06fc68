//! Canonical labelings of finite posets by individualization and refinement.
//!
//! The initial partition groups elements by (height, down-degree, up-degree)
//! and is ordered by height first, so every canonical labeling is a linear
//! extension. Cells are refined by counting strict neighbours in every cell
//! until stable; the search then individualizes each element of the first
//! non-singleton cell in turn. Among all leaves the lexicographically least
//! relation matrix wins.

use std::sync::Arc;

use crate::map::MonotoneMap;
use crate::poset::Poset;

/// A poset in canonical labeling together with its key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPoset {
    pub canonical_key: Vec<u8>,
    pub poset: Poset,
}

impl CanonicalPoset {
    pub fn key_hex(&self) -> String {
        hex_key(&self.canonical_key)
    }
}

pub fn hex_key(key: &[u8]) -> String {
    key.iter().map(|b| format!("{b:02x}")).collect()
}

/// `order[new] = old` and the key of the relabeled poset.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub order: Vec<usize>,
    pub key: Vec<u8>,
}

type Partition = Vec<Vec<usize>>;

fn refine(p: &Poset, mut cells: Partition) -> Partition {
    let n = p.size();
    loop {
        let mut cell_of = vec![0; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        let signature = |v: usize| -> Vec<(u32, u32)> {
            let mut sig = vec![(0u32, 0u32); cells.len()];
            for w in 0..n {
                if w != v {
                    if p.leq(w, v) {
                        sig[cell_of[w]].0 += 1;
                    }
                    if p.leq(v, w) {
                        sig[cell_of[w]].1 += 1;
                    }
                }
            }
            sig
        };
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut tagged: Vec<(Vec<(u32, u32)>, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            tagged.sort();
            let mut start = 0;
            for i in 1..=tagged.len() {
                if i == tagged.len() || tagged[i].0 != tagged[start].0 {
                    next.push(tagged[start..i].iter().map(|t| t.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn key_of(p: &Poset, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut key = vec![n as u8];
    let mut byte = 0u8;
    let mut bits = 0;
    for i in 0..n {
        for j in i + 1..n {
            byte = byte << 1 | p.leq(order[i], order[j]) as u8;
            bits += 1;
            if bits == 8 {
                key.push(byte);
                byte = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        key.push(byte << (8 - bits));
    }
    key
}

fn search(p: &Poset, cells: Partition, best: &mut Option<Labeling>) {
    let cells = refine(p, cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.into_iter().flatten().collect();
        let key = key_of(p, &order);
        if best.as_ref().is_none_or(|b| key < b.key) {
            *best = Some(Labeling { order, key });
        }
        return;
    };
    for &v in &cells[target] {
        let mut next = cells.clone();
        let rest: Vec<usize> = cells[target].iter().copied().filter(|&w| w != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        search(p, next, best);
    }
}

pub fn canonical_labeling(p: &Poset) -> Labeling {
    let n = p.size();
    assert!(n < 256, "canonical keys support posets with fewer than 256 elements");
    let heights = p.heights();
    let mut tagged: Vec<((usize, usize, usize), usize)> = (0..n)
        .map(|v| ((heights[v], p.down_set(v).len(), p.up_set(v).len()), v))
        .collect();
    tagged.sort();
    let mut cells: Partition = Vec::new();
    for (i, (tag, v)) in tagged.iter().enumerate() {
        if i > 0 && tagged[i - 1].0 == *tag {
            cells.last_mut().expect("nonempty").push(*v);
        } else {
            cells.push(vec![*v]);
        }
    }
    let mut best = None;
    search(p, cells, &mut best);
    best.unwrap_or(Labeling {
        order: Vec::new(),
        key: vec![0],
    })
}

pub fn canonicalize(p: &Poset) -> CanonicalPoset {
    let lab = canonical_labeling(p);
    CanonicalPoset {
        poset: p.relabel(&lab.order),
        canonical_key: lab.key,
    }
}

pub fn canonical_key(p: &Poset) -> Vec<u8> {
    canonical_labeling(p).key
}

/// An order-isomorphism `p -> q`, if one exists.
pub fn find_isomorphism(p: &Arc<Poset>, q: &Arc<Poset>) -> Option<MonotoneMap> {
    if p.size() != q.size() {
        return None;
    }
    let lp = canonical_labeling(p);
    let lq = canonical_labeling(q);
    if lp.key != lq.key {
        return None;
    }
    let mut image = vec![0; p.size()];
    for (new, &old) in lp.order.iter().enumerate() {
        image[old] = lq.order[new];
    }
    let iso = MonotoneMap::new_unchecked(p.clone(), q.clone(), image);
    debug_assert!(iso.is_order_embedding() && iso.is_surjective());
    Some(iso)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labeling_is_a_linear_extension() {
        let p = Poset::from_relation(5, &[(4, 0), (0, 2), (3, 2), (1, 3)]).unwrap();
        let c = canonicalize(&p);
        for i in 0..5 {
            for j in 0..i {
                assert!(!c.poset.lt(i, j));
            }
        }
    }

    #[test]
    fn iso_examples() {
        let cube1 = Arc::new(Poset::interval_power(1));
        let arrow = Arc::new(Poset::chain(1));
        let iso = find_isomorphism(&cube1, &arrow).unwrap();
        assert_eq!(iso.image(), &[0, 1]);

        let sq = Poset::interval_power(2);
        let sorted = Arc::new(sq.induced(&[0b00, 0b10, 0b11]));
        let chain = Arc::new(Poset::chain(2));
        let iso = find_isomorphism(&chain, &sorted).unwrap();
        assert_eq!(iso.image(), &[0, 1, 2]);

        assert!(find_isomorphism(&chain, &Arc::new(Poset::antichain(3))).is_none());
    }

    #[test]
    fn keys_separate_chain_and_antichain() {
        assert_ne!(canonical_key(&Poset::chain(1)), canonical_key(&Poset::antichain(2)));
        assert_eq!(canonical_key(&Poset::empty()), vec![0]);
    }
}
