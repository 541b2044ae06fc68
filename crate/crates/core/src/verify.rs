//! The verification suite: every audit at configurable bounds, with a
//! deterministic report.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    canonicalize, count_monotone_maps, enumerate_lattices, enumerate_posets, enumerate_retracts_unbounded,
    monotone_maps, MapSearch,
};
use crate::error::{bound, Result};
use crate::karoubi::{
    audit_cube_idempotents, hom_functor_preserves, retract_certificate, simplex_retract, two_step_certificate,
    verify_sort_split, AuditMode,
};
use crate::map::MonotoneMap;
use crate::poset::Poset;
use crate::presheaf::{
    horn_pushout, left_kan, left_kan_map, nat_hom_via_retract, representable, representable_cells,
    restricted_yoneda_count, triangulate, PosetSite,
};
use crate::retract::limit_via_retract;

/// Known numbers of posets on `n` unlabeled elements.
pub const POSET_COUNTS: [usize; 8] = [1, 1, 2, 5, 16, 63, 318, 2045];

/// Keep at most this many failure messages per check.
const MAX_FAILURES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteBounds {
    pub max_poset: usize,
    pub max_dim: usize,
    pub max_simplex: usize,
    pub max_lattice: usize,
    pub deep: bool,
    pub seed: u64,
    pub samples: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            max_poset: 5,
            max_dim: 2,
            max_simplex: 3,
            max_lattice: 6,
            deep: false,
            seed: 0,
            samples: 100_000,
            timings: false,
        }
    }
}

impl SuiteBounds {
    pub fn validate(&self) -> Result<()> {
        bound("max-poset", self.max_poset, 6)?;
        bound("max-dim", self.max_dim, 3)?;
        bound("max-simplex", self.max_simplex, 4)?;
        bound("max-lattice", self.max_lattice, 7)?;
        bound("samples", self.samples, 10_000_000)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub bounds: BTreeMap<String, usize>,
    pub passed: bool,
    pub counts: BTreeMap<String, u64>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub passed: bool,
    pub bounds: SuiteBounds,
    /// Sorted by name.
    pub records: Vec<CheckRecord>,
}

#[derive(Default)]
struct Check {
    bounds: BTreeMap<String, usize>,
    counts: BTreeMap<String, u64>,
    failures: Vec<String>,
    failure_count: u64,
}

impl Check {
    fn bound(&mut self, key: &str, value: usize) {
        self.bounds.insert(key.into(), value);
    }

    fn count(&mut self, key: &str, value: u64) {
        *self.counts.entry(key.into()).or_default() += value;
    }

    fn fail(&mut self, message: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(message);
        }
    }

    fn expect(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.fail(message());
        }
    }

    fn result<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: {e}", context()));
                None
            }
        }
    }
}

fn naive_meet(p: &Poset, a: usize, b: usize) -> Option<usize> {
    let lower: Vec<usize> = (0..p.size()).filter(|&x| p.leq(x, a) && p.leq(x, b)).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&x| p.leq(x, m)))
}

fn naive_join(p: &Poset, a: usize, b: usize) -> Option<usize> {
    let upper: Vec<usize> = (0..p.size()).filter(|&x| p.leq(a, x) && p.leq(b, x)).collect();
    upper.iter().copied().find(|&m| upper.iter().all(|&x| p.leq(m, x)))
}

/// Monotone Boolean functions on `n` variables by filtering all truth tables.
pub fn naive_dedekind(n: usize) -> u64 {
    assert!(n <= 4);
    let points = 1u32 << n;
    (0..1u64 << points)
        .filter(|&table| {
            (0..points).all(|x| (0..n).all(|i| x >> i & 1 == 1 || table >> x & 1 <= table >> (x | 1 << i) & 1))
        })
        .count() as u64
}

fn poset_laws(b: &SuiteBounds, c: &mut Check) {
    c.bound("max_poset", b.max_poset);
    for n in 0..=b.max_poset {
        let Some(posets) = c.result(enumerate_posets(n), || format!("enumerate_posets({n})")) else {
            continue;
        };
        c.expect(posets.len() == POSET_COUNTS[n], || {
            format!("{} posets of size {n}, expected {}", posets.len(), POSET_COUNTS[n])
        });
        c.count("posets", posets.len() as u64);
        let mut lattices = 0;
        for cp in &posets {
            let p = &cp.poset;
            if let Err(e) = p.check_laws() {
                c.fail(format!("{p:?}: {e}"));
            }
            c.expect(canonicalize(p).canonical_key == cp.canonical_key, || {
                format!("{p:?}: key not stable")
            });
            let mut all_meets = n > 0;
            for x in 0..n {
                for y in 0..n {
                    let (m, j) = (naive_meet(p, x, y), naive_join(p, x, y));
                    c.expect(p.meet(x, y) == m && p.join(x, y) == j, || {
                        format!("{p:?}: meet/join at {x},{y}")
                    });
                    all_meets &= m.is_some() && j.is_some();
                }
            }
            c.expect(all_meets == p.is_complete(), || {
                format!("{p:?}: completeness disagrees")
            });
            lattices += usize::from(all_meets);
        }
        let listed = enumerate_lattices(n).map(|l| l.len()).unwrap_or(usize::MAX);
        c.expect(listed == lattices, || {
            format!("{listed} lattices of size {n}, filter finds {lattices}")
        });
        c.count("lattices", lattices as u64);
    }
    let arrow = Arc::new(Poset::chain(1));
    for n in 1..=4 {
        let search = MapSearch::new(Arc::new(Poset::interval_power(n)), arrow.clone());
        let (one, many) = (search.count_with_workers(1), search.count_with_workers(4));
        c.expect(one == many, || format!("dimension {n}: worker counts differ"));
        let expected = [0, 3, 6, 20, 168][n];
        c.expect(one == expected, || format!("dimension {n}: {one} monotone functions"));
        if n <= 3 {
            c.expect(naive_dedekind(n) == one, || {
                format!("dimension {n}: truth-table filter disagrees")
            });
        }
    }
}

fn retract_transfer(b: &SuiteBounds, c: &mut Check) {
    let size = b.max_poset.min(5);
    c.bound("max_outer", size);
    let Some(retracts) = c.result(enumerate_retracts_unbounded(size), || "enumerate_retracts".into()) else {
        return;
    };
    c.count("retracts", retracts.len() as u64);
    let outcomes: Vec<Vec<String>> = retracts
        .par_iter()
        .map(|ret| {
            let mut bad = Vec::new();
            if let Some(t) = ret.outer.terminal() {
                if ret.inner.terminal() != Some(ret.retraction.apply(t)) {
                    bad.push(format!(
                        "terminal not transferred: {:?} onto {:?}",
                        ret.outer, ret.inner
                    ));
                }
            }
            if ret.outer.is_complete() {
                if !ret.inner.is_complete() {
                    bad.push(format!(
                        "completeness not transferred: {:?} onto {:?}",
                        ret.outer, ret.inner
                    ));
                }
                let k = ret.inner.size();
                let mut targets: Vec<Vec<usize>> = vec![vec![]];
                targets.extend((0..k).map(|x| vec![x]));
                targets.extend((0..k).flat_map(|x| (x + 1..k).map(move |y| vec![x, y])));
                for t in targets {
                    match limit_via_retract(ret, &t) {
                        Ok(v) if Some(v) == ret.inner.meet_of(&t) => {}
                        Ok(v) => bad.push(format!("limit of {t:?} is {v}")),
                        Err(e) => bad.push(format!("limit of {t:?}: {e}")),
                    }
                }
            }
            bad
        })
        .collect();
    let complete = retracts.iter().filter(|r| r.outer.is_complete()).count();
    c.count("complete_outer", complete as u64);
    for m in outcomes.into_iter().flatten() {
        c.fail(m);
    }
}

fn cube_idempotents(b: &SuiteBounds, c: &mut Check) {
    let top = if b.deep { b.max_dim.max(3) } else { b.max_dim };
    c.bound("max_dim", top);
    for n in 0..=top {
        if let Some(r) = c.result(audit_cube_idempotents(n, AuditMode::Exhaustive), || {
            format!("audit dim {n}")
        }) {
            c.count(&format!("dim{n}_endos"), r.endos);
            c.count(&format!("dim{n}_idempotents"), r.idempotents);
            for v in r.violations {
                c.fail(format!("dim {n}: {v}"));
            }
        }
    }
    if b.deep {
        c.bound("sampled_dim", 4);
        c.bound("samples", b.samples);
        let mode = AuditMode::Sampled {
            samples: b.samples,
            seed: b.seed,
        };
        if let Some(r) = c.result(audit_cube_idempotents(4, mode), || "sampled audit dim 4".into()) {
            c.count("dim4_sampled", r.checked);
            c.count("dim4_split_classes", r.split_classes.len() as u64);
            for v in r.violations {
                c.fail(format!("dim 4: {v}"));
            }
        }
    }
}

fn lattice_certificates(b: &SuiteBounds, c: &mut Check) {
    c.bound("max_lattice", b.max_lattice);
    let probes: Vec<Arc<Poset>> = [Poset::singleton(), Poset::chain(1), Poset::antichain(2)]
        .into_iter()
        .map(Arc::new)
        .collect();
    for n in 1..=b.max_lattice {
        let lattices = match enumerate_lattices(n) {
            Ok(l) => l,
            Err(e) => {
                c.fail(format!("enumerate_lattices({n}): {e}"));
                continue;
            }
        };
        for l in lattices {
            let l = Arc::new(l.poset);
            c.count("lattices", 1);
            let Some(cert) = c.result(retract_certificate(&l), || format!("certificate for {l:?}")) else {
                continue;
            };
            c.expect(cert.check().is_ok(), || format!("{l:?}: certificate check"));
            if n <= 4 {
                let two = two_step_certificate(&l).map(|(_, _, composite)| composite == cert);
                c.expect(two == Ok(true), || format!("{l:?}: two-step certificate differs"));
                for q in &probes {
                    let ok = hom_functor_preserves(&cert.as_retract(), q);
                    c.expect(ok == Ok(true), || format!("{l:?}: hom functor from {q:?}"));
                }
            }
        }
    }
}

fn simplex_retracts(_: &SuiteBounds, c: &mut Check) {
    c.bound("max_n", 6);
    for n in 0..=6 {
        let r = simplex_retract(n);
        for k in 0..=n {
            c.expect(r.retraction.apply(r.section.apply(k)) == k, || {
                format!("n = {n}: r(s({k})) != {k}")
            });
        }
        c.count("checked", n as u64 + 1);
    }
}

fn sort_splits(_: &SuiteBounds, c: &mut Check) {
    c.bound("max_m", 5);
    for m in 0..=5 {
        if let Some(s) = c.result(verify_sort_split(m), || format!("sort split {m}")) {
            c.expect(s.holds && s.fixed_points == m + 1, || {
                format!("m = {m}: mid is not [m]")
            });
            c.count("checked", 1);
        }
    }
}

fn triangulation(_: &SuiteBounds, c: &mut Check) {
    c.bound("max_n", 4);
    c.bound("trunc", 4);
    for n in 0..=4 {
        let Some(t) = c.result(triangulate(n, 4), || format!("triangulate({n}, 4)")) else {
            continue;
        };
        for m in 0..=4 {
            let expected = (m + 2usize).pow(n as u32);
            c.expect(t.cells(m) == expected, || {
                format!("n = {n}, m = {m}: {} cells", t.cells(m))
            });
            if n <= 3 && m <= 3 {
                // all functions [m] -> 2^n, filtered for monotonicity
                let brute = (0..(1usize << n).pow(m as u32 + 1))
                    .filter(|&code| {
                        let digit = |i: usize| code / (1usize << n).pow(i as u32) % (1 << n);
                        (0..m).all(|i| digit(i) & !digit(i + 1) == 0)
                    })
                    .count();
                c.expect(brute == expected, || format!("n = {n}, m = {m}: brute force {brute}"));
            }
            c.count("levels", 1);
        }
    }
}

fn complete_posets(max: usize) -> Vec<Arc<Poset>> {
    (1..=max)
        .flat_map(|n| enumerate_lattices(n).unwrap_or_default())
        .map(|c| Arc::new(c.poset))
        .collect()
}

fn kan_oracle(b: &SuiteBounds, c: &mut Check) {
    c.bound("max_poset", b.max_poset);
    c.bound("max_simplex", b.max_simplex);
    let ms = complete_posets(b.max_poset);
    let cases: Vec<(usize, Arc<Poset>)> = (0..=b.max_simplex)
        .flat_map(|m| ms.iter().map(move |p| (m, p.clone())))
        .collect();
    let outcomes: Vec<std::result::Result<(), String>> = cases
        .par_iter()
        .map(|(m, p)| {
            let site = Arc::new(PosetSite::delta(m + 2).map_err(|e| e.to_string())?);
            let y = representable(&site, &Poset::chain(*m));
            let v = left_kan(&y, p, m + 1).map_err(|e| format!("[{m}] at {p:?}: {e}"))?;
            let expected = count_monotone_maps(p, &Poset::chain(*m));
            if v.components as u64 == expected {
                Ok(())
            } else {
                Err(format!(
                    "[{m}] at {p:?}: {} components, expected {expected}",
                    v.components
                ))
            }
        })
        .collect();
    c.count("cases", cases.len() as u64);
    for o in outcomes {
        if let Err(e) = o {
            c.fail(e);
        }
    }
}

fn index_sets(n: usize) -> Vec<Vec<usize>> {
    (1..(1usize << (n + 1)) - 1)
        .map(|mask| (0..=n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Injectivity of `i_!` on a horn inclusion at `m`, and its image against the union of faces.
pub fn horn_mono_case(n: usize, faces: &[usize], m: &Arc<Poset>) -> std::result::Result<(), String> {
    let depth = n + 1;
    let inc = crate::presheaf::horn(n, faces, depth + 1).map_err(|e| e.to_string())?;
    let k = left_kan_map(&inc, m, depth).map_err(|e| format!("{faces:?} at {m:?}: {e}"))?;
    if !k.is_injective() {
        return Err(format!("{faces:?} at {m:?}: induced map is not injective"));
    }
    let site = PosetSite::delta(depth + 1).map_err(|e| e.to_string())?;
    let cells = representable_cells(&site, &Poset::chain(n));
    let as_map =
        |e: &crate::presheaf::KanElement| -> Vec<usize> { e.map.iter().map(|&t| cells[e.level][e.cell][t]).collect() };
    let all: BTreeSet<Vec<usize>> = k.target.representatives.iter().map(as_map).collect();
    let direct: BTreeSet<Vec<usize>> = monotone_maps(m, &Arc::new(Poset::chain(n)))
        .into_iter()
        .map(MonotoneMap::into_image)
        .collect();
    if all != direct {
        return Err(format!(
            "{faces:?} at {m:?}: components of the simplex are not Poset(M, [n])"
        ));
    }
    let image: BTreeSet<Vec<usize>> = k
        .image()
        .into_iter()
        .map(|t| as_map(&k.target.representatives[t]))
        .collect();
    let oracle: BTreeSet<Vec<usize>> = direct
        .into_iter()
        .filter(|g| faces.iter().any(|i| !g.contains(i)))
        .collect();
    if image != oracle {
        return Err(format!("{faces:?} at {m:?}: image differs from the union of faces"));
    }
    Ok(())
}

fn mono_preservation(b: &SuiteBounds, c: &mut Check) {
    c.bound("max_poset", b.max_poset);
    c.bound("max_horn", b.max_simplex);
    let ms = complete_posets(b.max_poset);
    let cases: Vec<(usize, Vec<usize>, Arc<Poset>)> = (1..=b.max_simplex)
        .flat_map(|n| index_sets(n).into_iter().map(move |i| (n, i)))
        .flat_map(|(n, i)| ms.iter().map(move |p| (n, i.clone(), p.clone())))
        .collect();
    let outcomes: Vec<std::result::Result<(), String>> = cases
        .par_iter()
        .map(|(n, faces, p)| horn_mono_case(*n, faces, p))
        .collect();
    c.count("cases", cases.len() as u64);
    for o in outcomes {
        if let Err(e) = o {
            c.fail(e);
        }
    }
    // the classical horn Λ²₀ at [1]: five of six maps
    let arrow = Arc::new(Poset::chain(1));
    let spot = crate::presheaf::classical_horn(2, 0, 3).and_then(|h| left_kan_map(&h, &arrow, 2));
    let ok = spot.is_ok_and(|k| k.source.components == 5 && k.target.components == 6 && k.is_injective());
    c.expect(ok, || "classical horn spot check".into());
}

fn horn_pushouts(b: &SuiteBounds, c: &mut Check) {
    let top = b.max_simplex.min(3);
    c.bound("max_n", top);
    for n in 2..=top {
        for faces in index_sets(n) {
            for &i in &faces {
                let sq = horn_pushout(n, &faces, i, n + 1);
                let ok = sq
                    .as_ref()
                    .is_ok_and(|s| s.is_pushout && s.pushout.object.check_functoriality().is_ok());
                c.expect(ok, || format!("n = {n}, I = {faces:?}, i = {i}: {:?}", sq.err()));
                c.count("squares", 1);
            }
        }
    }
}

fn contracting_homotopies(_: &SuiteBounds, c: &mut Check) {
    c.bound("max_n", 5);
    for n in 0..=5 {
        let h = crate::presheaf::contracting_homotopy(n);
        c.expect((0..=n).all(|k| h.apply(2 * k) == 0), || {
            format!("n = {n}: H(0, -) is not constant")
        });
        c.expect((0..=n).all(|k| h.apply(2 * k + 1) == k), || {
            format!("n = {n}: H(1, -) is not the identity")
        });
        c.count("checked", 1);
    }
}

fn nat_hom(_: &SuiteBounds, c: &mut Check) {
    c.bound("max_lattice", 4);
    let ls = complete_posets(4);
    let pairs: Vec<(Arc<Poset>, Arc<Poset>)> = ls
        .iter()
        .flat_map(|l| ls.iter().map(move |l2| (l.clone(), l2.clone())))
        .collect();
    let outcomes: Vec<std::result::Result<(), String>> = pairs
        .par_iter()
        .map(|(l, l2)| {
            let nh = nat_hom_via_retract(l, l2, 4).map_err(|e| format!("{l:?} -> {l2:?}: {e}"))?;
            let direct = count_monotone_maps(l, l2) as usize;
            if nh.maps.len() != direct {
                return Err(format!("{l:?} -> {l2:?}: {} maps, expected {direct}", nh.maps.len()));
            }
            if l.size() <= 3 && l2.size() <= 3 {
                let nat = restricted_yoneda_count(l, l2, 2).map_err(|e| e.to_string())?;
                if nat != direct {
                    return Err(format!("{l:?} -> {l2:?}: {nat} natural transformations on cubes"));
                }
            }
            Ok(())
        })
        .collect();
    c.count("pairs", pairs.len() as u64);
    for o in outcomes {
        if let Err(e) = o {
            c.fail(e);
        }
    }
}

type CheckFn = fn(&SuiteBounds, &mut Check);

/// The checks in execution order.
const CHECKS: [(&str, CheckFn); 12] = [
    ("poset-laws", poset_laws),
    ("retract-transfer", retract_transfer),
    ("cube-idempotents", cube_idempotents),
    ("lattice-certificates", lattice_certificates),
    ("simplex-retracts", simplex_retracts),
    ("sort-splits", sort_splits),
    ("triangulation", triangulation),
    ("kan-oracle", kan_oracle),
    ("mono-preservation", mono_preservation),
    ("horn-pushouts", horn_pushouts),
    ("contracting-homotopies", contracting_homotopies),
    ("nat-hom", nat_hom),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_verify_all(bounds: &SuiteBounds) -> Result<VerificationReport> {
    bounds.validate()?;
    let mut records: Vec<CheckRecord> = CHECKS
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let mut c = Check::default();
            f(bounds, &mut c);
            if c.failure_count > 0 {
                c.count("failures", c.failure_count);
            }
            CheckRecord {
                name: name.to_string(),
                bounds: c.bounds,
                passed: c.failure_count == 0,
                counts: c.counts,
                failures: c.failures,
                elapsed_ms: bounds.timings.then(|| start.elapsed().as_millis() as u64),
            }
        })
        .collect();
    records.sort_by(|a, b| a.name.cmp(&b.name));
    let names: HashSet<&str> = records.iter().map(|r| r.name.as_str()).collect();
    debug_assert_eq!(names.len(), CHECKS.len());
    Ok(VerificationReport {
        suite: "verify-all".into(),
        passed: records.iter().all(|r| r.passed),
        bounds: bounds.clone(),
        records,
    })
}
