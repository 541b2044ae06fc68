//! Natural transformations by backtracking with naturality pruning.

use std::sync::Arc;

use rayon::prelude::*;

use super::{closure, same_site, Presheaf, PresheafMap};
use crate::error::{Error, Result};

/// Searches stop with an error after this many solutions.
pub const NAT_LIMIT: usize = 1 << 20;

const UNSET: usize = usize::MAX;

struct Search<'a> {
    x: &'a Presheaf,
    y: &'a Presheaf,
    /// Cells in assignment order: larger objects first, and within an object
    /// cells generating larger sub-presheaves first.
    order: Vec<(usize, usize)>,
    bijective: bool,
}

struct State {
    alpha: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(x: &'a Presheaf, y: &'a Presheaf, bijective: bool) -> Search<'a> {
        let n = x.site().len();
        let mut order = Vec::new();
        for a in (0..n).rev() {
            let mut cells: Vec<(usize, usize)> = (0..x.cells(a))
                .map(|c| {
                    let mut seed: Vec<Vec<bool>> = (0..n).map(|b| vec![false; x.cells(b)]).collect();
                    seed[a][c] = true;
                    let size = closure(x, &seed).iter().flatten().filter(|&&k| k).count();
                    (usize::MAX - size, c)
                })
                .collect();
            cells.sort_unstable();
            order.extend(cells.into_iter().map(|(_, c)| (a, c)));
        }
        Search { x, y, order, bijective }
    }

    fn fresh(&self) -> State {
        let n = self.x.site().len();
        State {
            alpha: (0..n).map(|a| vec![UNSET; self.x.cells(a)]).collect(),
            used: (0..n).map(|a| vec![false; self.y.cells(a)]).collect(),
            trail: Vec::new(),
        }
    }

    /// Sets `alpha[a][c] = v` and everything it forces; false on a conflict.
    fn assign(&self, st: &mut State, a: usize, c: usize, v: usize) -> bool {
        let site = self.x.site();
        let mut queue = vec![(a, c, v)];
        while let Some((a, c, v)) = queue.pop() {
            match st.alpha[a][c] {
                UNSET => {}
                w if w == v => continue,
                _ => return false,
            }
            if self.bijective && st.used[a][v] {
                return false;
            }
            st.alpha[a][c] = v;
            st.used[a][v] = true;
            st.trail.push((a, c));
            for b in 0..site.len() {
                for h in 0..site.hom(b, a).len() {
                    queue.push((b, self.x.act((b, a, h), c), self.y.act((b, a, h), v)));
                }
            }
        }
        true
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let (a, c) = st.trail.pop().expect("nonempty trail");
            st.used[a][st.alpha[a][c]] = false;
            st.alpha[a][c] = UNSET;
        }
    }

    fn next_open(&self, st: &State, mut pos: usize) -> usize {
        while pos < self.order.len() && st.alpha[self.order[pos].0][self.order[pos].1] != UNSET {
            pos += 1;
        }
        pos
    }

    /// Depth-first search from `pos`; `visit` returns false to stop early.
    fn run(&self, pos: usize, st: &mut State, visit: &mut dyn FnMut(&State) -> Result<bool>) -> Result<bool> {
        let pos = self.next_open(st, pos);
        if pos == self.order.len() {
            return visit(st);
        }
        let (a, c) = self.order[pos];
        for v in 0..self.y.cells(a) {
            let mark = st.trail.len();
            if self.assign(st, a, c, v) && !self.run(pos + 1, st, visit)? {
                self.undo(st, mark);
                return Ok(false);
            }
            self.undo(st, mark);
        }
        Ok(true)
    }

    fn all(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let collect = |st: &mut State, pos: usize| -> Result<Vec<Vec<Vec<usize>>>> {
            let mut out = Vec::new();
            self.run(pos, st, &mut |st| {
                if out.len() >= NAT_LIMIT {
                    return Err(Error::BoundExceeded {
                        what: "natural transformations",
                        value: out.len() + 1,
                        limit: NAT_LIMIT,
                    });
                }
                out.push(st.alpha.clone());
                Ok(true)
            })?;
            Ok(out)
        };
        let Some(&(a, c)) = self.order.first() else {
            return collect(&mut self.fresh(), 0);
        };
        let branches: Vec<Result<Vec<Vec<Vec<usize>>>>> = (0..self.y.cells(a))
            .into_par_iter()
            .map(|v| {
                let mut st = self.fresh();
                if self.assign(&mut st, a, c, v) {
                    collect(&mut st, 1)
                } else {
                    Ok(Vec::new())
                }
            })
            .collect();
        let mut all = Vec::new();
        for b in branches {
            all.extend(b?);
            if all.len() > NAT_LIMIT {
                return Err(Error::BoundExceeded {
                    what: "natural transformations",
                    value: all.len(),
                    limit: NAT_LIMIT,
                });
            }
        }
        Ok(all)
    }

    fn first(&self) -> Option<Vec<Vec<usize>>> {
        let mut found = None;
        let mut st = self.fresh();
        self.run(0, &mut st, &mut |st| {
            found = Some(st.alpha.clone());
            Ok(false)
        })
        .expect("visitor never fails");
        found
    }
}

fn check_sites(x: &Presheaf, y: &Presheaf) -> Result<()> {
    if same_site(x.site(), y.site()) {
        Ok(())
    } else {
        Err(Error::SiteMismatch("presheaves on different sites".into()))
    }
}

/// All natural transformations `x -> y`, in a deterministic order.
pub fn natural_transformations(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Vec<PresheafMap>> {
    check_sites(x, y)?;
    Ok(Search::new(x, y, false)
        .all()?
        .into_iter()
        .map(|c| PresheafMap::new_unchecked(x.clone(), y.clone(), c))
        .collect())
}

pub fn count_natural_transformations(x: &Presheaf, y: &Presheaf) -> Result<usize> {
    check_sites(x, y)?;
    Ok(Search::new(x, y, false).all()?.len())
}

/// A natural isomorphism, i.e. a levelwise bijection commuting with the actions.
pub fn find_presheaf_isomorphism(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Option<PresheafMap>> {
    check_sites(x, y)?;
    if x.cell_counts() != y.cell_counts() {
        return Ok(None);
    }
    Ok(Search::new(x, y, true)
        .first()
        .map(|c| PresheafMap::new_unchecked(x.clone(), y.clone(), c)))
}
