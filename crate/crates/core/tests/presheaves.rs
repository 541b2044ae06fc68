use std::sync::Arc;

use posetcat::catalog::{count_monotone_maps, enumerate_lattices};
use posetcat::presheaf::{
    closure, colim, count_natural_transformations, face_inclusion, face_union, horn, left_kan_map, pushout,
    representable, subpresheaf, PosetSite, Presheaf, PresheafMap,
};
use posetcat::Poset;
use proptest::prelude::*;

fn poset(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |pairs| {
            let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|(i, j)| i < j).collect();
            Poset::from_relation(n, &pairs).unwrap()
        })
    })
}

fn lattice(max: usize) -> impl Strategy<Value = Arc<Poset>> {
    let all: Vec<Arc<Poset>> = (1..=max)
        .flat_map(|n| enumerate_lattices(n).unwrap())
        .map(|c| Arc::new(c.poset))
        .collect();
    prop::sample::select(all)
}

fn delta(d: usize) -> Arc<PosetSite> {
    Arc::new(PosetSite::delta(d).unwrap())
}

proptest! {
    #[test]
    fn yoneda(p in poset(5), k in 0usize..3) {
        let site = delta(2);
        let x = representable(&site, &p);
        let yk = representable(&site, &Poset::chain(k));
        prop_assert_eq!(count_natural_transformations(&yk, &x).unwrap(), x.cells(k));
        prop_assert_eq!(x.cells(k) as u64, count_monotone_maps(&Poset::chain(k), &p));
    }

    #[test]
    fn nerves_are_fully_faithful(p in poset(4), q in poset(4)) {
        let site = delta(2);
        let (x, y) = (representable(&site, &p), representable(&site, &q));
        prop_assert_eq!(count_natural_transformations(&x, &y).unwrap() as u64, count_monotone_maps(&p, &q));
    }

    #[test]
    fn components_of_a_nerve(p in poset(6)) {
        let x = representable(&delta(2), &p);
                let mut uf: Vec<usize> = (0..p.size()).collect();
        fn find(uf: &mut [usize], mut a: usize) -> usize {
            while uf[a] != a {
                uf[a] = uf[uf[a]];
                a = uf[a];
            }
            a
        }
        for (a, b) in p.relation() {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
        let roots = (0..p.size()).filter(|&a| find(&mut uf, a) == a).count();
        prop_assert_eq!(colim(&x).count, roots);
    }

    #[test]
    fn kan_extension_preserves_random_monos(
        n in 1usize..3,
        seeds in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
        m in lattice(4),
    ) {
        let depth = n + 1;
        let simplex = Arc::new(representable(&delta(depth + 1), &Poset::chain(n)));
        let mut marks: Vec<Vec<bool>> = (0..simplex.site().len()).map(|a| vec![false; simplex.cells(a)]).collect();
        for s in &seeds {
            let level = s.index(n + 1);
            marks[level][s.index(simplex.cells(level))] = true;
        }
        let keep = closure(&simplex, &marks);
        let inc = subpresheaf(&simplex, &keep).unwrap();
        let k = left_kan_map(&inc, &m, depth).unwrap();
        prop_assert!(k.is_injective());
    }

    #[test]
    fn json_round_trip(p in poset(4), d in 0usize..3) {
        let x = representable(&delta(d), &p);
        let text = serde_json::to_string(&x).unwrap();
        let back: Presheaf = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }
}

/// The square with `Λ(d_i^{-1}(I))` in the corner: the face `d_i` already lies
/// in `Λ(I)`, so gluing in `Δ^{n-1}` duplicates its interior.
fn uncorrected_square(n: usize, faces: &[usize], i: usize) -> (bool, bool) {
    let d = n + 1;
    let pulled: Vec<usize> = (0..n).filter(|&j| faces.contains(&(j + usize::from(j >= i)))).collect();
    let small = face_union(n - 1, &pulled, d).unwrap();
    let big = face_union(n, faces, d).unwrap();
    let face = face_inclusion(n, i, d).unwrap();
    let via = face.compose(&small).unwrap();
    let into_big: Vec<Vec<usize>> = via
        .components()
        .iter()
        .zip(big.components())
        .map(|(c, inc)| c.iter().map(|y| inc.binary_search(y).unwrap()).collect())
        .collect();
    let top = PresheafMap::new(small.source().clone(), big.source().clone(), into_big).unwrap();
    let square = pushout(&small, &top).unwrap();
    let target = face.target();
    let counts_match = (0..target.site().len()).all(|a| square.object.cells(a) == target.cells(a));
    let horn_cells: usize = big.source().total_cells();
    (counts_match, square.object.total_cells() > horn_cells)
}

#[test]
fn uncorrected_square_is_not_a_pushout() {
    for n in 2..=3usize {
        for mask in 1..(1usize << (n + 1)) - 1 {
            let faces: Vec<usize> = (0..=n).filter(|i| mask >> i & 1 == 1).collect();
            if faces.len() < 2 {
                continue;
            }
            for &i in &faces {
                let (iso_counts, overshoots) = uncorrected_square(n, &faces, i);
                assert!(!iso_counts, "n = {n}, I = {faces:?}, i = {i}");
                assert!(overshoots, "n = {n}, I = {faces:?}, i = {i}");
            }
        }
    }
}

#[test]
fn horns_are_subobjects_of_the_simplex() {
    for n in 1..=3 {
        for k in 0..=n {
            let all_but_k: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
            let h = horn(n, &all_but_k, n + 1).unwrap();
            assert!(h.is_mono());
            // maps [n] -> [n] missing some i != k
            let monotone = (0..(n + 1).pow(n as u32 + 1)).filter_map(|code| {
                let f: Vec<usize> = (0..=n).map(|x| code / (n + 1).pow(x as u32) % (n + 1)).collect();
                f.windows(2).all(|w| w[0] <= w[1]).then_some(f)
            });
            let in_horn = monotone.filter(|f| all_but_k.iter().any(|i| !f.contains(i))).count();
            assert_eq!(h.source().cells(n), in_horn);
        }
    }
}
