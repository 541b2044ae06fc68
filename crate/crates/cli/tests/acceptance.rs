//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use posetcat::catalog::{enumerate_lattices, enumerate_posets, enumerate_retracts_unbounded, monotone_maps, MapSearch};
use posetcat::karoubi::{audit_cube_idempotents, retract_certificate, simplex_retract, verify_sort_split, AuditMode};
use posetcat::presheaf::{
    classical_horn, horn_pushout, left_kan, left_kan_map, nat_hom_via_retract, representable, triangulate, PosetSite,
};
use posetcat::verify::horn_mono_case;
use posetcat::Poset;

const SECOND: Duration = Duration::from_secs(1);

/// Every function `dom -> cod` as an image vector.
fn all_functions(dom: usize, cod: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (cod as u64).pow(dom as u32);
    (0..total).map(move |mut code| {
        (0..dom)
            .map(|_| {
                let d = (code % cod as u64) as usize;
                code /= cod as u64;
                d
            })
            .collect()
    })
}

fn is_monotone(p: &Poset, q: &Poset, f: &[usize]) -> bool {
    (0..p.size()).all(|x| (0..p.size()).all(|y| !p.leq(x, y) || q.leq(f[x], f[y])))
}

fn brute_count(p: &Poset, q: &Poset) -> u64 {
    if q.size() == 0 {
        return u64::from(p.size() == 0);
    }
    all_functions(p.size(), q.size())
        .filter(|f| is_monotone(p, q, f))
        .count() as u64
}

/// Meets and joins of every subset, by scanning bounds.
fn naive_complete(p: &Poset) -> bool {
    let n = p.size();
    if n == 0 {
        return false;
    }
    (0..1u32 << n).all(|s| {
        let members: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
        let lower: Vec<usize> = (0..n).filter(|&x| members.iter().all(|&m| p.leq(x, m))).collect();
        let upper: Vec<usize> = (0..n).filter(|&x| members.iter().all(|&m| p.leq(m, x))).collect();
        lower.iter().any(|&g| lower.iter().all(|&x| p.leq(x, g)))
            && upper.iter().any(|&l| upper.iter().all(|&x| p.leq(l, x)))
    })
}

fn naive_terminal(p: &Poset) -> Option<usize> {
    (0..p.size()).find(|&t| (0..p.size()).all(|x| p.leq(x, t)))
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn within(start: Instant, limit: Duration, outcome: Outcome) -> Outcome {
    let took = start.elapsed();
    if outcome.ok && took > limit {
        return fail(format!("{} but took {took:.2?} (limit {limit:?})", outcome.detail));
    }
    Outcome {
        ok: outcome.ok,
        detail: format!("{} [{took:.2?}]", outcome.detail),
    }
}

fn splitting_direction() -> Outcome {
    let start = Instant::now();
    let expected = [(1, 1), (3, 3), (36, 23)];
    for n in 0..=2 {
        let r = audit_cube_idempotents(n, AuditMode::Exhaustive).unwrap();
        let cube = Poset::interval_power(n);
        let idems: Vec<Vec<usize>> = all_functions(cube.size(), cube.size())
            .filter(|f| is_monotone(&cube, &cube, f) && f.iter().all(|&y| f[y] == y))
            .collect();
        if (r.endos, r.idempotents) != expected[n] || r.idempotents != idems.len() as u64 || !r.violations.is_empty() {
            return fail(format!(
                "dim {n}: {} endos, {} idempotents, {:?}",
                r.endos, r.idempotents, r.violations
            ));
        }
        for f in &idems {
            let fixed: Vec<usize> = (0..cube.size()).filter(|&x| f[x] == x).collect();
            if !naive_complete(&cube.induced(&fixed)) {
                return fail(format!("dim {n}: fixed points of {f:?} are not complete"));
            }
        }
    }
    let small = start.elapsed();
    if small > SECOND {
        return fail(format!("dimensions 0..=2 took {small:.2?}"));
    }
    let deep = Instant::now();
    let r = audit_cube_idempotents(3, AuditMode::Exhaustive).unwrap();
    let cube = Arc::new(Poset::interval_power(3));
    let mut idempotents = 0;
    for f in monotone_maps(&cube, &cube) {
        let f = f.into_image();
        if f.iter().all(|&y| f[y] == y) {
            idempotents += 1;
            let fixed: Vec<usize> = (0..8).filter(|&x| f[x] == x).collect();
            if !naive_complete(&cube.induced(&fixed)) {
                return fail(format!("dim 3: fixed points of {f:?} are not complete"));
            }
        }
    }
    let outcome = if r.endos == 8000 && r.idempotents == idempotents && r.violations.is_empty() {
        pass(format!(
            "dims 0..=2 exhaustive in {small:.2?}; dim 3 exhaustive: {} endos, {} idempotents, 0 violations",
            r.endos, r.idempotents
        ))
    } else {
        fail(format!(
            "dim 3: {} endos, {} idempotents, {:?}",
            r.endos, r.idempotents, r.violations
        ))
    };
    within(deep, Duration::from_secs(600), outcome)
}

fn retract_direction() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in 1..=6 {
        let filtered: Vec<Poset> = enumerate_posets(n)
            .unwrap()
            .into_iter()
            .map(|c| c.poset)
            .filter(naive_complete)
            .collect();
        let listed = enumerate_lattices(n).unwrap();
        if filtered.len() != listed.len() || filtered.len() != [0, 1, 1, 1, 2, 5, 15][n] {
            return fail(format!(
                "size {n}: {} lattices listed, filter finds {}",
                listed.len(),
                filtered.len()
            ));
        }
        for l in listed {
            let l = Arc::new(l.poset);
            let cert = retract_certificate(&l).unwrap();
            let cube = Poset::interval_power(cert.cube_dim);
            let (s, r) = (cert.section.image(), cert.retraction.image());
            let ok = cert.cube_dim == n
                && is_monotone(&l, &cube, s)
                && is_monotone(&cube, &l, r)
                && (0..n).all(|x| r[s[x]] == x);
            if !ok {
                return fail(format!("certificate for {l:?}"));
            }
            total += 1;
        }
    }
    within(
        start,
        Duration::from_secs(60),
        pass(format!("{total} lattices of size <= 6 certified")),
    )
}

fn transfer_along_retracts() -> Outcome {
    let retracts = enumerate_retracts_unbounded(5).unwrap();
    let mut expected = 0;
    for n in 0..=5 {
        for c in enumerate_posets(n).unwrap() {
            let p = &c.poset;
            expected += all_functions(n, n)
                .filter(|f| f.iter().all(|&y| f[y] == y) && is_monotone(p, p, f))
                .count();
        }
    }
    if retracts.len() != expected {
        return fail(format!(
            "{} retracts enumerated, {expected} idempotents exist",
            retracts.len()
        ));
    }
    let mut terminal = 0;
    let mut complete = 0;
    for ret in &retracts {
        let (a, b) = (&ret.outer, &ret.inner);
        if !(0..b.size()).all(|x| ret.retraction.apply(ret.section.apply(x)) == x) {
            return fail(format!("not a retract: {ret:?}"));
        }
        if let Some(t) = naive_terminal(a) {
            terminal += 1;
            if naive_terminal(b) != Some(ret.retraction.apply(t)) {
                return fail(format!("terminal transfer fails for {ret:?}"));
            }
        }
        if naive_complete(a) {
            complete += 1;
            if !naive_complete(b) {
                return fail(format!("completeness transfer fails for {ret:?}"));
            }
        }
    }
    pass(format!(
        "{} retracts with |A| <= 5: {terminal} terminal transfers, {complete} completeness transfers",
        retracts.len()
    ))
}

fn chain_retracts() -> Outcome {
    for n in 0..=6 {
        let r = simplex_retract(n);
        if !(0..=n).all(|k| r.retraction.apply(r.section.apply(k)) == k) {
            return fail(format!("simplex retract n = {n}"));
        }
    }
    for m in 0..=5 {
        let s = verify_sort_split(m).unwrap();
        let iso_ok = s
            .iso
            .as_ref()
            .is_some_and(|iso| iso.is_order_embedding() && iso.is_surjective());
        if !s.holds || !iso_ok || s.fixed_points != m + 1 {
            return fail(format!("sort split m = {m}"));
        }
    }
    pass("simplex retracts n <= 6, sort splits m <= 5")
}

fn triangulation_counts() -> Outcome {
    for n in 0..=4 {
        let t = triangulate(n, 4).unwrap();
        let cube = Poset::interval_power(n);
        for m in 0..=4 {
            let closed = (m + 2usize).pow(n as u32);
            if t.cells(m) != closed {
                return fail(format!("n = {n}, m = {m}: {} cells", t.cells(m)));
            }
            if n <= 3 && m <= 3 && brute_count(&Poset::chain(m), &cube) != closed as u64 {
                return fail(format!("n = {n}, m = {m}: brute force disagrees"));
            }
        }
    }
    pass("(m+2)^n for n, m <= 4; brute force at n, m <= 3")
}

fn complete_posets(max: usize) -> Vec<Arc<Poset>> {
    (1..=max)
        .flat_map(|n| enumerate_lattices(n).unwrap())
        .map(|c| Arc::new(c.poset))
        .collect()
}

fn kan_oracle() -> Outcome {
    let ms = complete_posets(5);
    let mut cases = 0;
    for m in 0..=3 {
        let site = Arc::new(PosetSite::delta(m + 2).unwrap());
        let y = representable(&site, &Poset::chain(m));
        for p in &ms {
            let v = match left_kan(&y, p, m + 1) {
                Ok(v) => v,
                Err(e) => return fail(format!("[{m}] at {p:?}: {e}")),
            };
            if v.components as u64 != brute_count(p, &Poset::chain(m)) {
                return fail(format!("[{m}] at {p:?}: {} components", v.components));
            }
            cases += 1;
        }
    }
    pass(format!("{cases} cases, stable from D = m+1 to m+2"))
}

fn mono_preservation() -> Outcome {
    let ms = complete_posets(5);
    let mut cases = 0;
    for n in 1..=3usize {
        for mask in 1..(1usize << (n + 1)) - 1 {
            let faces: Vec<usize> = (0..=n).filter(|i| mask >> i & 1 == 1).collect();
            for p in &ms {
                if let Err(e) = horn_mono_case(n, &faces, p) {
                    return fail(e);
                }
                cases += 1;
            }
        }
    }
    let arrow = Arc::new(Poset::chain(1));
    let k = left_kan_map(&classical_horn(2, 0, 3).unwrap(), &arrow, 2).unwrap();
    if (k.source.components, k.target.components) != (5, 6) || !k.is_injective() {
        return fail("spot check at [1]");
    }
    pass(format!(
        "{cases} horn cases injective with union-of-faces image; 5 into 6 at [1]"
    ))
}

fn horn_squares() -> Outcome {
    let mut squares = 0;
    for n in 2..=3usize {
        for mask in 1..(1usize << (n + 1)) - 1 {
            let faces: Vec<usize> = (0..=n).filter(|i| mask >> i & 1 == 1).collect();
            for &i in &faces {
                match horn_pushout(n, &faces, i, n + 1) {
                    Ok(sq) if sq.is_pushout => squares += 1,
                    Ok(_) => return fail(format!("n = {n}, I = {faces:?}, i = {i}: not a pushout")),
                    Err(e) => return fail(format!("n = {n}, I = {faces:?}, i = {i}: {e}")),
                }
            }
        }
    }
    pass(format!("{squares} squares are levelwise pushouts"))
}

fn hom_equivalence() -> Outcome {
    let ls = complete_posets(4);
    for l in &ls {
        for l2 in &ls {
            let nh = match nat_hom_via_retract(l, l2, 4) {
                Ok(nh) => nh,
                Err(e) => return fail(format!("{l:?} -> {l2:?}: {e}")),
            };
            let got: BTreeSet<Vec<usize>> = nh.maps.iter().map(|f| f.image().to_vec()).collect();
            let direct: BTreeSet<Vec<usize>> = all_functions(l.size(), l2.size())
                .filter(|f| is_monotone(l, l2, f))
                .collect();
            if got != direct || nh.maps.len() != direct.len() {
                return fail(format!(
                    "{l:?} -> {l2:?}: {} maps, direct {}",
                    nh.maps.len(),
                    direct.len()
                ));
            }
        }
    }
    pass(format!(
        "{} lattice pairs agree with direct enumeration",
        ls.len() * ls.len()
    ))
}

fn dedekind() -> Outcome {
    let arrow = Arc::new(Poset::chain(1));
    let mut counts = Vec::new();
    for n in 1..=4 {
        let search = MapSearch::new(Arc::new(Poset::interval_power(n)), arrow.clone());
        let (one, many) = (search.count_with_workers(1), search.count_with_workers(3));
        if one != many {
            return fail(format!("n = {n}: {one} with one worker, {many} with three"));
        }
        if n <= 3 {
            let points = 1u32 << n;
            let naive = (0..1u64 << points)
                .filter(|&t| {
                    (0..points).all(|x| (0..n).all(|i| x >> i & 1 == 1 || t >> x & 1 <= t >> (x | 1 << i) & 1))
                })
                .count() as u64;
            if naive != one {
                return fail(format!("n = {n}: truth tables give {naive}, enumerator {one}"));
            }
        }
        counts.push(one);
    }
    if counts == [3, 6, 20, 168] {
        pass(format!("{counts:?}"))
    } else {
        fail(format!("{counts:?}"))
    }
}

fn verify_all() -> Outcome {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_posetcat"))
            .args(["verify-all", "--max-poset", "5", "--max-dim", "2", "--max-simplex", "3"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let took = start.elapsed();
    let second = run();
    if first.status.code() != Some(0) {
        return fail(format!(
            "exit {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout {
        return fail("reports differ between runs");
    }
    if took > Duration::from_secs(300) {
        return fail(format!("took {took:.2?}"));
    }
    pass(format!(
        "exit 0 in {took:.2?}; identical {}-byte reports",
        first.stdout.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("splitting direction", splitting_direction),
        ("retract direction", retract_direction),
        ("transfer along retracts", transfer_along_retracts),
        ("chain retracts", chain_retracts),
        ("triangulation", triangulation_counts),
        ("kan oracle", kan_oracle),
        ("mono preservation", mono_preservation),
        ("horn pushouts", horn_squares),
        ("hom equivalence", hom_equivalence),
        ("enumeration cross-checks", dedekind),
        ("verify-all", verify_all),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| fail("panicked"));
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!("criterion {:2} {status} {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
