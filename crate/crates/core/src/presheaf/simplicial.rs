//! Simplicial presheaves: triangulated cubes, horns, skeletal extension.

use std::collections::HashMap;
use std::sync::Arc;

use super::{pushout, representable, representable_cells, representable_map, restrict, subpresheaf};
use super::{PosetSite, Presheaf, PresheafMap, Pushout, SiteKind};
use crate::error::{bound, Error, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

pub const MAX_HORN_DIM: usize = 4;

/// The triangulated `n`-cube on `Δ≤d`: `[m] ↦ Poset([m], [1]^n)`.
pub fn triangulate(n: usize, d: usize) -> Result<Presheaf> {
    bound("cube dimension", n, 4)?;
    bound("simplicial truncation", d, 4)?;
    let site = Arc::new(PosetSite::delta(d)?);
    Ok(representable(&site, &Poset::interval_power(n)))
}

fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|j| j + usize::from(j >= i)).collect()
}

/// The union of the listed faces of `Δ^n` on `Δ≤d`, with its inclusion.
/// Any set of faces is allowed, including none (the empty presheaf).
pub fn face_union(n: usize, faces: &[usize], d: usize) -> Result<PresheafMap> {
    if let Some(&i) = faces.iter().find(|&&i| i > n) {
        return Err(Error::BadIndexSet(format!("face {i} of a {n}-simplex")));
    }
    let site = Arc::new(PosetSite::delta(d)?);
    let cells = representable_cells(&site, &Poset::chain(n));
    let simplex = Arc::new(representable(&site, &Poset::chain(n)));
    let keep: Vec<Vec<bool>> = cells
        .iter()
        .map(|level| level.iter().map(|x| faces.iter().any(|i| !x.contains(i))).collect())
        .collect();
    subpresheaf(&simplex, &keep)
}

fn check_index_set(n: usize, faces: &[usize]) -> Result<Vec<usize>> {
    bound("horn dimension", n, MAX_HORN_DIM)?;
    let mut sorted = faces.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != faces.len() {
        return Err(Error::BadIndexSet(format!("repeated face in {faces:?}")));
    }
    if sorted.is_empty() {
        return Err(Error::BadIndexSet("no faces given".into()));
    }
    if let Some(&i) = sorted.iter().find(|&&i| i > n) {
        return Err(Error::BadIndexSet(format!("face {i} of a {n}-simplex")));
    }
    if sorted.len() == n + 1 {
        return Err(Error::BadIndexSet(format!("all faces of the {n}-simplex")));
    }
    Ok(sorted)
}

/// The horn `Λ^n_{[n] \ I}`: the union of the faces `i ∈ I` of `Δ^n`.
/// A map `[m] -> [n]` lies in the `i`-th face iff it misses `i`.
pub fn horn(n: usize, faces: &[usize], d: usize) -> Result<PresheafMap> {
    let faces = check_index_set(n, faces)?;
    face_union(n, &faces, d)
}

/// The classical horn `Λ^n_k`, all faces but the `k`-th.
pub fn classical_horn(n: usize, k: usize, d: usize) -> Result<PresheafMap> {
    let faces: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
    horn(n, &faces, d)
}

/// `Δ^{n-1} -> Δ^n`, the `i`-th face.
pub fn face_inclusion(n: usize, i: usize, d: usize) -> Result<PresheafMap> {
    if n == 0 || i > n {
        return Err(Error::BadIndexSet(format!("face {i} of a {n}-simplex")));
    }
    let site = Arc::new(PosetSite::delta(d)?);
    let map = MonotoneMap::new(Arc::new(Poset::chain(n - 1)), Arc::new(Poset::chain(n)), coface(n, i))?;
    Ok(representable_map(&site, &map))
}

/// A horn square for `I` and a chosen face `i ∈ I`:
///
/// ```text
/// Λ(d_i^{-1}(I \ {i}))  --->  Λ(I \ {i})
///        |                        |
///     Δ^{n-1}   ---- d_i --->   Δ^n
/// ```
///
/// where `Λ(J)` is the union of the faces in `J`. The pushout of the span is
/// compared with the horn `Λ(I)` inside `Δ^n`.
#[derive(Clone, Debug)]
pub struct HornSquare {
    pub faces: Vec<usize>,
    pub chosen: usize,
    pub pushout: Pushout,
    /// The induced map from the pushout into `Δ^n`.
    pub comparison: PresheafMap,
    /// The comparison is injective with image exactly `Λ(I)`.
    pub is_pushout: bool,
}

pub fn horn_pushout(n: usize, faces: &[usize], chosen: usize, d: usize) -> Result<HornSquare> {
    let faces = check_index_set(n, faces)?;
    if !faces.contains(&chosen) {
        return Err(Error::BadIndexSet(format!("chosen face {chosen} is not in {faces:?}")));
    }
    let rest: Vec<usize> = faces.iter().copied().filter(|&j| j != chosen).collect();
    let pulled: Vec<usize> = rest.iter().map(|&j| if j < chosen { j } else { j - 1 }).collect();
    let small = face_union(n - 1, &pulled, d)?;
    let big = face_union(n, &rest, d)?;
    let face = face_inclusion(n, chosen, d)?;

    // A -> Λ(I \ {i}) through d_i
    let via_face = face.compose(&small)?;
    let big_inc = big.components();
    let top_components: Vec<Vec<usize>> = via_face
        .components()
        .iter()
        .zip(big_inc)
        .map(|(comp, inc)| {
            comp.iter()
                .map(|y| inc.binary_search(y).expect("lands in the smaller horn"))
                .collect()
        })
        .collect();
    let top = PresheafMap::new(small.source().clone(), big.source().clone(), top_components)?;
    let square = pushout(&small, &top)?;

    let target = face.target().clone();
    let n_obj = target.site().len();
    let mut comparison: Vec<Vec<usize>> = (0..n_obj).map(|a| vec![usize::MAX; square.object.cells(a)]).collect();
    for a in 0..n_obj {
        let assign = |comparison: &mut Vec<Vec<usize>>, p: usize, v: usize| -> Result<()> {
            match comparison[a][p] {
                usize::MAX => {
                    comparison[a][p] = v;
                    Ok(())
                }
                w if w == v => Ok(()),
                _ => Err(Error::InvariantViolation("horn square does not commute".into())),
            }
        };
        for (y, &p) in square.left.component(a).iter().enumerate() {
            assign(&mut comparison, p, face.component(a)[y])?;
        }
        for (t, &p) in square.right.component(a).iter().enumerate() {
            assign(&mut comparison, p, big_inc[a][t])?;
        }
    }
    let comparison = PresheafMap::new(square.object.clone(), target, comparison)?;
    let expected = face_union(n, &faces, d)?.image();
    let is_pushout = comparison.is_mono() && comparison.image() == expected;
    Ok(HornSquare {
        faces,
        chosen,
        pushout: square,
        comparison,
        is_pushout,
    })
}

/// The homotopy `[1] × [n] -> [n]`, `(0, k) ↦ 0`, `(1, k) ↦ k`.
/// The element `(a, k)` of the product has index `a + 2k`.
pub fn contracting_homotopy(n: usize) -> MonotoneMap {
    let dom = Arc::new(Poset::product(&Poset::chain(1), &Poset::chain(n)));
    let image = (0..2 * (n + 1)).map(|e| (e % 2) * (e / 2)).collect();
    MonotoneMap::new(dom, Arc::new(Poset::chain(n)), image).expect("homotopy is monotone")
}

/// Eilenberg–Zilber data of a presheaf on `Δ≤d`.
struct Normal {
    /// `ez[k][y] = (j, z, τ)`: `y = X(τ)(z)` with `z` nondegenerate at `j` and `τ: [k] -> [j]` surjective.
    ez: Vec<Vec<(usize, usize, usize)>>,
    nondegenerate: Vec<Vec<usize>>,
}

fn surjections(site: &PosetSite, k: usize, j: usize) -> Vec<usize> {
    (0..site.hom(k, j).len())
        .filter(|&t| {
            let img = site.hom(k, j).get(t);
            img.first() == Some(&0) && img.windows(2).all(|w| w[1] <= w[0] + 1) && img.last() == Some(&j)
        })
        .collect()
}

fn normalize(x: &Presheaf) -> Normal {
    let site = x.site();
    let d = site.dim();
    let mut nondegenerate = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut degenerate = vec![false; x.cells(k)];
        if k > 0 {
            for i in 0..k {
                let s: Vec<usize> = (0..=k).map(|t| t - usize::from(t > i)).collect();
                let h = site.hom(k, k - 1).index_of(&s).expect("codegeneracy");
                for &y in x.action(k, k - 1, h) {
                    degenerate[y] = true;
                }
            }
        }
        nondegenerate.push((0..x.cells(k)).filter(|&y| !degenerate[y]).collect::<Vec<_>>());
    }
    let ez = (0..=d)
        .map(|k| {
            let mut table = vec![(usize::MAX, 0, 0); x.cells(k)];
            for j in 0..=k {
                for tau in surjections(site, k, j) {
                    for &z in &nondegenerate[j] {
                        let y = x.act((k, j, tau), z);
                        if table[y].0 == usize::MAX {
                            table[y] = (j, z, tau);
                        }
                    }
                }
            }
            debug_assert!(table.iter().all(|t| t.0 != usize::MAX));
            table
        })
        .collect();
    Normal { ez, nondegenerate }
}

/// A presheaf on `Δ≤d` extended to `Δ≤depth` by adding only degenerate cells.
/// `(j, z, σ)`: the degeneracy `σ: [k] -> [j]` applied to the cell `z` of `X[j]`.
type Degenerate = (usize, usize, Vec<usize>);

struct Skeletal {
    presheaf: Presheaf,
    normal: Normal,
    base_dim: usize,
    /// Cells above the base: `(j, z, σ)` with `σ: [k] -> [j]` surjective, as an image.
    index: Vec<HashMap<Degenerate, usize>>,
}

impl Skeletal {
    fn key_of(&self, k: usize, j2: usize, z: usize, sigma: Vec<usize>) -> usize {
        self.index[k][&(j2, z, sigma)]
    }
}

fn mono_epi(v: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut im = v.to_vec();
    im.sort_unstable();
    im.dedup();
    let epi = v.iter().map(|y| im.binary_search(y).expect("in image")).collect();
    (im, epi)
}

fn build_skeletal(x: &Presheaf, depth: usize) -> Result<Skeletal> {
    if x.site().kind() != SiteKind::Delta {
        return Err(Error::SiteMismatch(
            "skeletal extension needs a simplicial presheaf".into(),
        ));
    }
    let d = x.site().dim();
    let site = Arc::new(PosetSite::delta(depth)?);
    let normal = normalize(x);
    let mut index: Vec<HashMap<Degenerate, usize>> = Vec::new();
    let mut keys: Vec<Vec<Degenerate>> = Vec::new();
    for k in 0..=depth {
        let mut level = Vec::new();
        if k > d {
            for j in 0..=d {
                for sigma in surjections(&site, k, j) {
                    for &z in &normal.nondegenerate[j] {
                        level.push((j, z, site.hom(k, j).get(sigma).to_vec()));
                    }
                }
            }
            level.sort();
        }
        index.push(level.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect());
        keys.push(level);
    }
    let cells: Vec<usize> = (0..=depth)
        .map(|k| if k <= d { x.cells(k) } else { keys[k].len() })
        .collect();
    let xsite = x.site();
    let presheaf = Presheaf::from_fn(site.clone(), cells, |kp, k, u, c| {
        let u = site.hom(kp, k).get(u);
        let (j, y, v): (usize, usize, Vec<usize>) = if k <= d {
            (k, c, u.to_vec())
        } else {
            let (j, z, sigma) = &keys[k][c];
            (*j, *z, u.iter().map(|&t| sigma[t]).collect())
        };
        if kp <= d {
            return x.act((kp, j, xsite.hom(kp, j).index_of(&v).expect("monotone")), y);
        }
        let (im, epi) = mono_epi(&v);
        let jp = im.len() - 1;
        let delta = xsite.hom(jp, j).index_of(&im).expect("injective part");
        let yp = x.act((jp, j, delta), y);
        let (j2, z, tau) = normal.ez[jp][yp];
        let tau = xsite.hom(jp, j2).get(tau);
        let sigma: Vec<usize> = epi.iter().map(|&t| tau[t]).collect();
        index[kp][&(j2, z, sigma)]
    });
    Ok(Skeletal {
        presheaf,
        normal,
        base_dim: d,
        index,
    })
}

/// Extends a presheaf on `Δ≤d` to `Δ≤depth`, `depth >= d`, freely by degenerate
/// cells (the left Kan extension along `Δ≤d -> Δ≤depth`). Cells at levels up to
/// `d` keep their labels. For `depth < d` this is restriction.
pub fn skeletal_extension(x: &Presheaf, depth: usize) -> Result<Presheaf> {
    if x.site().kind() != SiteKind::Delta {
        return Err(Error::SiteMismatch(
            "skeletal extension needs a simplicial presheaf".into(),
        ));
    }
    let d = x.site().dim();
    if depth < d {
        return restrict(x, &Arc::new(PosetSite::delta(depth)?));
    }
    if depth == d {
        return Ok(x.clone());
    }
    Ok(build_skeletal(x, depth)?.presheaf)
}

/// The extension of a map, compatible with [`skeletal_extension`] on both ends.
pub fn skeletal_extension_map(f: &PresheafMap, depth: usize) -> Result<PresheafMap> {
    let x = f.source();
    let d = x.site().dim();
    if x.site().kind() != SiteKind::Delta {
        return Err(Error::SiteMismatch(
            "skeletal extension needs a simplicial presheaf".into(),
        ));
    }
    if depth <= d {
        let sx = Arc::new(skeletal_extension(x, depth)?);
        let sy = Arc::new(skeletal_extension(f.target(), depth)?);
        let comps = f.components()[..=depth].to_vec();
        return PresheafMap::new(sx, sy, comps);
    }
    let sx = build_skeletal(x, depth)?;
    let sy = build_skeletal(f.target(), depth)?;
    let ysite = f.target().site();
    let mut comps: Vec<Vec<usize>> = f.components().to_vec();
    for k in (sx.base_dim + 1)..=depth {
        let mut keys: Vec<(&Degenerate, &usize)> = sx.index[k].iter().collect();
        keys.sort_by_key(|(_, &i)| i);
        let comp = keys
            .into_iter()
            .map(|((j, z, sigma), _)| {
                let w = f.component(*j)[*z];
                let (j2, z2, tau) = sy.normal.ez[*j][w];
                let tau = ysite.hom(*j, j2).get(tau);
                sy.key_of(k, j2, z2, sigma.iter().map(|&t| tau[t]).collect())
            })
            .collect();
        comps.push(comp);
    }
    PresheafMap::new(Arc::new(sx.presheaf), Arc::new(sy.presheaf), comps)
}
