//! Square bit matrices with one packed row per element.

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in iter_ones(self.row(i)) {
                t.set(j, i);
            }
        }
        t
    }

    /// Warshall's algorithm on packed rows.
    pub fn transitive_closure(&mut self) {
        let w = self.words;
        for k in 0..self.n {
            let row_k: Vec<u64> = self.row(k).to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    let row_i = &mut self.data[i * w..(i + 1) * w];
                    for (a, b) in row_i.iter_mut().zip(&row_k) {
                        *a |= *b;
                    }
                }
            }
        }
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Indices of set bits, ascending.
pub fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

pub(crate) fn full_row(n: usize) -> Vec<u64> {
    let mut v = vec![0u64; words_for(n)];
    for (wi, w) in v.iter_mut().enumerate() {
        let lo = wi * 64;
        if n >= lo + 64 {
            *w = u64::MAX;
        } else if n > lo {
            *w = (1u64 << (n - lo)) - 1;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_chain_relation() {
        let mut m = BitMatrix::identity(70);
        for i in 0..69 {
            m.set(i, i + 1);
        }
        m.transitive_closure();
        assert!(m.get(0, 69));
        assert!(!m.get(69, 0));
        assert_eq!(m.row_count(0), 70);
        assert_eq!(iter_ones(m.row(68)).collect::<Vec<_>>(), vec![68, 69]);
    }

    #[test]
    fn full_rows() {
        assert_eq!(full_row(0), vec![0]);
        assert_eq!(full_row(3), vec![7]);
        assert_eq!(full_row(64), vec![u64::MAX]);
        assert_eq!(full_row(65), vec![u64::MAX, 1]);
    }
}
