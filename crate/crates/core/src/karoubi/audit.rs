//! Audit that idempotents on cubes split through complete posets.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{canonical_key, hex_key, monotone_maps};
use crate::error::{bound, Result};
use crate::map::MonotoneMap;
use crate::poset::Poset;

use super::{split_idempotent, Idempotent};

pub const MAX_EXHAUSTIVE_DIM: usize = 3;
pub const MAX_SAMPLED_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Exhaustive,
    /// Endomorphisms drawn with independent uniform components; each sample
    /// is replaced by its idempotent power before splitting.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub endos: u64,
    pub idempotents: u64,
    pub violations: Vec<String>,
    /// Split isomorphism classes (hex canonical key) with multiplicity.
    pub split_classes: BTreeMap<String, u64>,
    pub dim: usize,
    pub mode: &'static str,
    /// Idempotents actually split and checked.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Splits `f`, checks the splitting equations and completeness of the middle object.
fn audit_one(f: MonotoneMap) -> std::result::Result<Poset, String> {
    let image = f.image().to_vec();
    let idem = Idempotent::new(f).map_err(|e| format!("{image:?}: {e}"))?;
    let split = split_idempotent(&idem);
    split.check().map_err(|e| format!("{image:?}: {e}"))?;
    if !split.mid.is_complete() {
        return Err(format!("{image:?}: splits through an incomplete poset"));
    }
    Ok((*split.mid).clone())
}

fn histogram(mids: Vec<Poset>) -> BTreeMap<String, u64> {
    let mut by_poset: HashMap<Poset, u64> = HashMap::new();
    for m in mids {
        *by_poset.entry(m).or_default() += 1;
    }
    let keyed: Vec<(String, u64)> = by_poset
        .into_par_iter()
        .map(|(p, n)| (hex_key(&canonical_key(&p)), n))
        .collect();
    let mut out = BTreeMap::new();
    for (k, n) in keyed {
        *out.entry(k).or_default() += n;
    }
    out
}

fn gather(results: Vec<std::result::Result<Poset, String>>) -> (Vec<Poset>, Vec<String>) {
    let mut mids = Vec::new();
    let mut violations = Vec::new();
    for r in results {
        match r {
            Ok(m) => mids.push(m),
            Err(v) => violations.push(v),
        }
    }
    (mids, violations)
}

/// The idempotent among the powers of an endomorphism of a finite set.
fn idempotent_power(g: &[usize]) -> Vec<usize> {
    let mut powers: Vec<Vec<usize>> = vec![g.to_vec()];
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::from([(g.to_vec(), 1)]);
    loop {
        let last = powers.last().expect("nonempty");
        let next: Vec<usize> = last.iter().map(|&x| g[x]).collect();
        let k = powers.len() + 1;
        if let Some(&first) = seen.get(&next) {
            let period = k - first;
            let e = first.div_ceil(period) * period;
            return powers[e - 1].clone();
        }
        seen.insert(next.clone(), k);
        powers.push(next);
    }
}

pub fn audit_cube_idempotents(n: usize, mode: AuditMode) -> Result<AuditReport> {
    let start = Instant::now();
    let cube = Arc::new(Poset::interval_power(n));
    let mut report = match mode {
        AuditMode::Exhaustive => {
            bound("exhaustive audit dimension", n, MAX_EXHAUSTIVE_DIM)?;
            let endos = monotone_maps(&cube, &cube);
            let total = endos.len() as u64;
            let results: Vec<_> = endos
                .into_par_iter()
                .filter(MonotoneMap::is_idempotent)
                .map(audit_one)
                .collect();
            let idempotents = results.len() as u64;
            let (mids, violations) = gather(results);
            AuditReport {
                endos: total,
                idempotents,
                violations,
                split_classes: histogram(mids),
                dim: n,
                mode: "exhaustive",
                checked: idempotents,
                seed: None,
                wall_ms: None,
            }
        }
        AuditMode::Sampled { samples, seed } => {
            bound("sampled audit dimension", n, MAX_SAMPLED_DIM)?;
            let arrow = Arc::new(Poset::chain(1));
            let functions: Vec<Vec<usize>> = monotone_maps(&cube, &arrow)
                .into_iter()
                .map(MonotoneMap::into_image)
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<Vec<usize>> = (0..samples)
                .map(|_| (0..n).map(|_| rng.gen_range(0..functions.len())).collect())
                .collect();
            let outcomes: Vec<(bool, std::result::Result<Poset, String>)> = picks
                .into_par_iter()
                .map(|pick| {
                    let g: Vec<usize> = (0..cube.size())
                        .map(|x| pick.iter().enumerate().map(|(k, &f)| functions[f][x] << k).sum())
                        .collect();
                    let raw_idempotent = g.iter().all(|&y| g[y] == y);
                    let e = idempotent_power(&g);
                    let map = MonotoneMap::new(cube.clone(), cube.clone(), e).map_err(|e| e.to_string());
                    (raw_idempotent, map.and_then(audit_one))
                })
                .collect();
            let idempotents = outcomes.iter().filter(|o| o.0).count() as u64;
            let (mids, violations) = gather(outcomes.into_iter().map(|o| o.1).collect());
            AuditReport {
                endos: samples as u64,
                idempotents,
                violations,
                split_classes: histogram(mids),
                dim: n,
                mode: "sampled",
                checked: samples as u64,
                seed: Some(seed),
                wall_ms: None,
            }
        }
    };
    report.wall_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_zero_and_one() {
        let r0 = audit_cube_idempotents(0, AuditMode::Exhaustive).unwrap();
        assert_eq!((r0.endos, r0.idempotents), (1, 1));
        assert_eq!(r0.split_classes.values().sum::<u64>(), 1);
        let r1 = audit_cube_idempotents(1, AuditMode::Exhaustive).unwrap();
        assert_eq!((r1.endos, r1.idempotents), (3, 3));
        assert!(r1.passed());
        // two constants through the point, the identity through [1]
        assert_eq!(r1.split_classes.values().copied().collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn dimension_two() {
        let r = audit_cube_idempotents(2, AuditMode::Exhaustive).unwrap();
        assert_eq!(r.endos, 36);
        assert!(r.passed());
        assert_eq!(r.split_classes.values().sum::<u64>(), r.idempotents);
    }

    #[test]
    fn idempotent_power_of_rotation_and_tail() {
        // 0 -> 1 -> 2 -> 1: index 1, period 2
        let e = idempotent_power(&[1, 2, 1]);
        assert!(e.iter().all(|&y| e[y] == y));
        assert_eq!(e, vec![2, 1, 2]);
    }

    #[test]
    fn bounds() {
        assert!(audit_cube_idempotents(4, AuditMode::Exhaustive).is_err());
        assert!(audit_cube_idempotents(5, AuditMode::Sampled { samples: 1, seed: 0 }).is_err());
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let mode = AuditMode::Sampled { samples: 200, seed: 7 };
        let mut a = audit_cube_idempotents(3, mode).unwrap();
        let mut b = audit_cube_idempotents(3, mode).unwrap();
        a.wall_ms = None;
        b.wall_ms = None;
        assert_eq!(a, b);
        assert!(a.passed());
    }
}
