//! Finite presheaves over sites of posets.
//!
//! A presheaf assigns a finite set of cells, labeled `0..n`, to each site
//! object, and to each map `h: a -> b` a function from the cells at `b` to
//! the cells at `a`.

mod kan;
mod nat;
mod nat_hom;
mod simplicial;
mod site;

use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::monotone_maps;
use crate::error::{Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

pub use kan::{left_kan, left_kan_map, KanElement, KanMap, KanValue, MAX_KAN_DEPTH};
pub use nat::{count_natural_transformations, find_presheaf_isomorphism, natural_transformations, NAT_LIMIT};
pub use nat_hom::{nat_hom_via_retract, restricted_yoneda_count, NatHom, NatHomRoute};
pub use simplicial::{
    classical_horn, contracting_homotopy, face_inclusion, face_union, horn, horn_pushout, skeletal_extension,
    skeletal_extension_map, triangulate, HornSquare, MAX_HORN_DIM,
};
pub use site::{HomSet, PosetSite, SiteKind, MAX_SITE_DIM};

pub(crate) fn same_site(a: &Arc<PosetSite>, b: &Arc<PosetSite>) -> bool {
    Arc::ptr_eq(a, b) || (a.kind() == b.kind() && a.objects() == b.objects())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    site: Arc<PosetSite>,
    cells: Vec<usize>,
    /// `actions[a * n + b][h][y]` is the restriction of cell `y` at `b` along the `h`-th map `a -> b`.
    actions: Vec<Vec<Vec<usize>>>,
}

impl Presheaf {
    /// Validates shapes and functoriality.
    pub fn new(site: Arc<PosetSite>, cells: Vec<usize>, actions: Vec<Vec<Vec<usize>>>) -> Result<Presheaf> {
        let x = Presheaf { site, cells, actions };
        x.check_shape()?;
        x.check_functoriality()?;
        Ok(x)
    }

    pub(crate) fn new_unchecked(site: Arc<PosetSite>, cells: Vec<usize>, actions: Vec<Vec<Vec<usize>>>) -> Presheaf {
        let x = Presheaf { site, cells, actions };
        debug_assert!(x.check_shape().is_ok());
        x
    }

    /// Builds the actions from a function `(a, b, h, y) -> cell at a`.
    pub(crate) fn from_fn(
        site: Arc<PosetSite>,
        cells: Vec<usize>,
        act: impl Fn(usize, usize, usize, usize) -> usize,
    ) -> Presheaf {
        let n = site.len();
        let actions = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                (0..site.hom(a, b).len())
                    .map(|h| (0..cells[b]).map(|y| act(a, b, h, y)).collect())
                    .collect()
            })
            .collect();
        Presheaf::new_unchecked(site, cells, actions)
    }

    /// Every object gets `count` cells and every map acts as the identity.
    pub fn constant(site: Arc<PosetSite>, count: usize) -> Presheaf {
        let cells = vec![count; site.len()];
        Presheaf::from_fn(site, cells, |_, _, _, y| y)
    }

    pub fn empty(site: Arc<PosetSite>) -> Presheaf {
        Presheaf::constant(site, 0)
    }

    pub fn site(&self) -> &Arc<PosetSite> {
        &self.site
    }

    pub fn cells(&self, a: usize) -> usize {
        self.cells[a]
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cells
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().sum()
    }

    /// Restriction along the `h`-th map `a -> b`, as a table indexed by cells at `b`.
    pub fn action(&self, a: usize, b: usize, h: usize) -> &[usize] {
        &self.actions[a * self.site.len() + b][h]
    }

    #[inline]
    pub fn act(&self, (a, b, h): (usize, usize, usize), y: usize) -> usize {
        self.actions[a * self.site.len() + b][h][y]
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.site.len();
        if self.cells.len() != n || self.actions.len() != n * n {
            return Err(Error::Shape(format!(
                "presheaf data does not match a site with {n} objects"
            )));
        }
        for a in 0..n {
            for b in 0..n {
                let tables = &self.actions[a * n + b];
                if tables.len() != self.site.hom(a, b).len() {
                    return Err(Error::Shape(format!("wrong number of actions for {a} -> {b}")));
                }
                for t in tables {
                    if t.len() != self.cells[b] || t.iter().any(|&x| x >= self.cells[a]) {
                        return Err(Error::Shape(format!("malformed action table for {a} -> {b}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Identities act trivially and `X(g ∘ f) = X(f) ∘ X(g)`, over every composable pair.
    pub fn check_functoriality(&self) -> Result<()> {
        let site = &self.site;
        let n = site.len();
        for a in 0..n {
            let id = site.identity(a);
            if self.action(a, a, id).iter().enumerate().any(|(i, &x)| i != x) {
                return Err(Error::InvariantViolation(format!("identity of {a} acts nontrivially")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in 0..site.hom(a, b).len() {
                        let xf = self.action(a, b, f);
                        for g in 0..site.hom(b, c).len() {
                            let xg = self.action(b, c, g);
                            let gf = site.compose((a, b, f), (c, g));
                            let xgf = self.action(a, c, gf);
                            if (0..self.cells[c]).any(|z| xgf[z] != xf[xg[z]]) {
                                return Err(Error::InvariantViolation(format!(
                                    "composite {a} -> {b} -> {c} does not act functorially"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The maps from each site object into `p`, sorted by image; cell labels index these lists.
pub fn representable_cells(site: &PosetSite, p: &Poset) -> Vec<Vec<Vec<usize>>> {
    let p = Arc::new(p.clone());
    site.objects()
        .iter()
        .map(|a| {
            let mut maps: Vec<Vec<usize>> = monotone_maps(a, &p).into_iter().map(MonotoneMap::into_image).collect();
            maps.sort_unstable();
            maps
        })
        .collect()
}

/// `y(p)` restricted to the site: cells at `a` are the maps `a -> p`, acting by precomposition.
pub fn representable(site: &Arc<PosetSite>, p: &Poset) -> Presheaf {
    let cells = representable_cells(site, p);
    let index: Vec<std::collections::HashMap<&[usize], usize>> = cells
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect())
        .collect();
    let counts = cells.iter().map(Vec::len).collect();
    Presheaf::from_fn(site.clone(), counts, |a, b, h, y| {
        let h = site.hom(a, b).get(h);
        let x = &cells[b][y];
        let composite: Vec<usize> = h.iter().map(|&i| x[i]).collect();
        index[a][composite.as_slice()]
    })
}

/// Precomposition with the inclusion of a full subsite.
pub fn restrict(x: &Presheaf, subsite: &Arc<PosetSite>) -> Result<Presheaf> {
    let emb = subsite.embedding_into(x.site())?;
    let big = x.site();
    let mut hom_index = Vec::new();
    for a in 0..subsite.len() {
        for b in 0..subsite.len() {
            let table: Vec<usize> = subsite
                .hom(a, b)
                .iter()
                .map(|h| big.hom(emb[a], emb[b]).index_of(h).expect("same posets, same maps"))
                .collect();
            hom_index.push(table);
        }
    }
    let cells = emb.iter().map(|&e| x.cells(e)).collect();
    let n = subsite.len();
    Ok(Presheaf::from_fn(subsite.clone(), cells, |a, b, h, y| {
        x.act((emb[a], emb[b], hom_index[a * n + b][h]), y)
    }))
}

pub fn coproduct(x: &Presheaf, y: &Presheaf) -> Result<Presheaf> {
    if !same_site(x.site(), y.site()) {
        return Err(Error::SiteMismatch("coproduct of presheaves on different sites".into()));
    }
    let cells = x.cells.iter().zip(&y.cells).map(|(p, q)| p + q).collect();
    Ok(Presheaf::from_fn(x.site.clone(), cells, |a, b, h, c| {
        if c < x.cells[b] {
            x.act((a, b, h), c)
        } else {
            x.cells[a] + y.act((a, b, h), c - x.cells[b])
        }
    }))
}

/// Connected components of the category of elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: usize,
    /// `labels[a][x]` is the component of cell `x` at object `a`, numbered by first occurrence.
    pub labels: Vec<Vec<usize>>,
}

pub(crate) fn first_occurrence_labels(uf: &UnionFind<usize>, total: usize) -> (usize, Vec<usize>) {
    let mut label_of_root = std::collections::HashMap::new();
    let labels = (0..total)
        .map(|e| {
            let next = label_of_root.len();
            *label_of_root.entry(uf.find(e)).or_insert(next)
        })
        .collect();
    (label_of_root.len(), labels)
}

pub fn colim(x: &Presheaf) -> Components {
    let n = x.site.len();
    let offsets: Vec<usize> = x
        .cells
        .iter()
        .scan(0, |acc, &c| {
            let o = *acc;
            *acc += c;
            Some(o)
        })
        .collect();
    let total = x.total_cells();
    let mut uf = UnionFind::new(total);
    for a in 0..n {
        for b in 0..n {
            for h in 0..x.site.hom(a, b).len() {
                for (y, &z) in x.action(a, b, h).iter().enumerate() {
                    uf.union(offsets[b] + y, offsets[a] + z);
                }
            }
        }
    }
    let (count, flat) = first_occurrence_labels(&uf, total);
    let labels = (0..n)
        .map(|a| flat[offsets[a]..offsets[a] + x.cells[a]].to_vec())
        .collect();
    Components { count, labels }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMap {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    /// Validates shapes and naturality.
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Result<PresheafMap> {
        if !same_site(source.site(), target.site()) {
            return Err(Error::SiteMismatch("source and target live on different sites".into()));
        }
        let n = source.site.len();
        if components.len() != n
            || (0..n)
                .any(|a| components[a].len() != source.cells[a] || components[a].iter().any(|&y| y >= target.cells[a]))
        {
            return Err(Error::Shape("components do not match the cell counts".into()));
        }
        let f = PresheafMap {
            source,
            target,
            components,
        };
        f.check_naturality()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<Vec<usize>>,
    ) -> PresheafMap {
        let f = PresheafMap {
            source,
            target,
            components,
        };
        debug_assert!(f.check_naturality().is_ok());
        f
    }

    pub fn identity(x: Arc<Presheaf>) -> PresheafMap {
        let components = x.cells.iter().map(|&c| (0..c).collect()).collect();
        PresheafMap {
            source: x.clone(),
            target: x,
            components,
        }
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn component(&self, a: usize) -> &[usize] {
        &self.components[a]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn check_naturality(&self) -> Result<()> {
        let site = self.source.site();
        let n = site.len();
        for a in 0..n {
            for b in 0..n {
                for h in 0..site.hom(a, b).len() {
                    for y in 0..self.source.cells[b] {
                        let lhs = self.target.act((a, b, h), self.components[b][y]);
                        let rhs = self.components[a][self.source.act((a, b, h), y)];
                        if lhs != rhs {
                            return Err(Error::InvariantViolation(format!(
                                "not natural along a map {a} -> {b} at cell {y}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &PresheafMap) -> Result<PresheafMap> {
        if !same_site(f.target.site(), self.source.site()) || f.target.cells != self.source.cells {
            return Err(Error::DomainMismatch("presheaf maps are not composable".into()));
        }
        let components = f
            .components
            .iter()
            .zip(&self.components)
            .map(|(fa, ga)| fa.iter().map(|&y| ga[y]).collect())
            .collect();
        Ok(PresheafMap::new_unchecked(
            f.source.clone(),
            self.target.clone(),
            components,
        ))
    }

    /// Every component is injective.
    pub fn is_mono(&self) -> bool {
        self.components.iter().zip(&self.target.cells).all(|(comp, &size)| {
            let mut seen = vec![false; size];
            comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Cells of the target hit by the map.
    pub fn image(&self) -> Vec<Vec<bool>> {
        self.components
            .iter()
            .zip(&self.target.cells)
            .map(|(comp, &size)| {
                let mut hit = vec![false; size];
                for &y in comp {
                    hit[y] = true;
                }
                hit
            })
            .collect()
    }
}

pub fn is_mono(f: &PresheafMap) -> bool {
    f.is_mono()
}

/// The smallest sub-presheaf containing the marked cells.
pub fn closure(x: &Presheaf, seeds: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = x.site.len();
    let mut keep = seeds.to_vec();
    let mut stack: Vec<(usize, usize)> = (0..n)
        .flat_map(|b| {
            (0..x.cells[b])
                .filter(|&y| seeds[b][y])
                .map(move |y| (b, y))
                .collect::<Vec<_>>()
        })
        .collect();
    while let Some((b, y)) = stack.pop() {
        for a in 0..n {
            for h in 0..x.site.hom(a, b).len() {
                let z = x.act((a, b, h), y);
                if !keep[a][z] {
                    keep[a][z] = true;
                    stack.push((a, z));
                }
            }
        }
    }
    keep
}

/// The inclusion of the marked cells, which must be closed under the action.
/// Kept cells are relabeled in increasing order.
pub fn subpresheaf(x: &Arc<Presheaf>, keep: &[Vec<bool>]) -> Result<PresheafMap> {
    let n = x.site.len();
    if keep.len() != n || (0..n).any(|a| keep[a].len() != x.cells[a]) {
        return Err(Error::Shape("marking does not match the cell counts".into()));
    }
    if closure(x, keep) != keep {
        return Err(Error::InvariantViolation(
            "marked cells are not closed under restriction".into(),
        ));
    }
    let inclusion: Vec<Vec<usize>> = keep
        .iter()
        .map(|k| k.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
        .collect();
    let mut relabel: Vec<Vec<usize>> = x.cells.iter().map(|&c| vec![usize::MAX; c]).collect();
    for (a, inc) in inclusion.iter().enumerate() {
        for (new, &old) in inc.iter().enumerate() {
            relabel[a][old] = new;
        }
    }
    let cells = inclusion.iter().map(Vec::len).collect();
    let sub = Presheaf::from_fn(x.site.clone(), cells, |a, b, h, y| {
        relabel[a][x.act((a, b, h), inclusion[b][y])]
    });
    Ok(PresheafMap::new_unchecked(Arc::new(sub), x.clone(), inclusion))
}

/// `y(f): y(p) -> y(q)` for `f: p -> q`, by postcomposition.
pub fn representable_map(site: &Arc<PosetSite>, f: &MonotoneMap) -> PresheafMap {
    let source_cells = representable_cells(site, f.dom());
    let target_cells = representable_cells(site, f.cod());
    let components = source_cells
        .iter()
        .zip(&target_cells)
        .map(|(src, tgt)| {
            src.iter()
                .map(|x| {
                    let fx: Vec<usize> = x.iter().map(|&i| f.apply(i)).collect();
                    tgt.binary_search(&fx).expect("postcomposite is monotone")
                })
                .collect()
        })
        .collect();
    PresheafMap::new_unchecked(
        Arc::new(representable(site, f.dom())),
        Arc::new(representable(site, f.cod())),
        components,
    )
}

/// A levelwise pushout of `f: A -> B` and `g: A -> C` with its cocone.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Arc<Presheaf>,
    pub left: PresheafMap,
    pub right: PresheafMap,
}

pub fn pushout(f: &PresheafMap, g: &PresheafMap) -> Result<Pushout> {
    if !same_site(f.source.site(), g.source.site()) || f.source.cells != g.source.cells {
        return Err(Error::SiteMismatch("pushout of maps with different sources".into()));
    }
    if *f.source != *g.source {
        return Err(Error::SiteMismatch("pushout of maps with different sources".into()));
    }
    let (b, c) = (&f.target, &g.target);
    let n = f.source.site.len();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut cells = Vec::with_capacity(n);
    for a in 0..n {
        let nb = b.cells[a];
        let mut uf = UnionFind::new(nb + c.cells[a]);
        for x in 0..f.source.cells[a] {
            uf.union(f.components[a][x], nb + g.components[a][x]);
        }
        let (count, labels) = first_occurrence_labels(&uf, nb + c.cells[a]);
        cells.push(count);
        left.push(labels[..nb].to_vec());
        right.push(labels[nb..].to_vec());
    }
    // a representative in B or C for every pushout cell
    let reps: Vec<Vec<(bool, usize)>> = (0..n)
        .map(|a| {
            let mut r = vec![(false, usize::MAX); cells[a]];
            for (y, &l) in left[a].iter().enumerate().rev() {
                r[l] = (true, y);
            }
            for (y, &l) in right[a].iter().enumerate() {
                if r[l].1 == usize::MAX {
                    r[l] = (false, y);
                }
            }
            r
        })
        .collect();
    let object = Presheaf::from_fn(f.source.site.clone(), cells, |a, bb, h, p| match reps[bb][p] {
        (true, y) => left[a][b.act((a, bb, h), y)],
        (false, y) => right[a][c.act((a, bb, h), y)],
    });
    let object = Arc::new(object);
    let left = PresheafMap::new(b.clone(), object.clone(), left)?;
    let right = PresheafMap::new(c.clone(), object.clone(), right)?;
    for a in 0..n {
        for x in 0..f.source.cells[a] {
            if left.components[a][f.components[a][x]] != right.components[a][g.components[a][x]] {
                return Err(Error::InvariantViolation("pushout cocone does not commute".into()));
            }
        }
    }
    object.check_functoriality()?;
    Ok(Pushout { object, left, right })
}

#[derive(Serialize, Deserialize)]
struct PresheafJson {
    site: site::SiteJson,
    cells: Vec<usize>,
    /// Keyed by `"a->b"`; one table per map, in the site's hom order.
    actions: BTreeMap<String, Vec<Vec<usize>>>,
}

impl Serialize for Presheaf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.site.len();
        let actions = (0..n * n)
            .map(|ab| (format!("{}->{}", ab / n, ab % n), self.actions[ab].clone()))
            .collect();
        PresheafJson {
            site: self.site.to_json(),
            cells: self.cells.clone(),
            actions,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presheaf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Presheaf, D::Error> {
        use serde::de::Error as _;
        let json = PresheafJson::deserialize(d)?;
        let site = Arc::new(PosetSite::from_json(json.site).map_err(D::Error::custom)?);
        let n = site.len();
        let mut actions = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let key = format!("{a}->{b}");
                let tables = json.actions.get(&key).cloned().unwrap_or_default();
                actions.push(tables);
            }
        }
        Presheaf::new(site, json.cells, actions).map_err(D::Error::custom)
    }
}
