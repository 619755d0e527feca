//! Property tests for the structural invariants.

use std::sync::{Arc, OnceLock};

use gerbe_core::classify::{enumerate_classes, enumerate_cocycles, equivalent, SearchOptions};
use gerbe_core::cocycle::{
    apply_coboundary, change_structure, inverse, product, pullback, pullback_coboundary, verify, Coboundary, Cocycle,
    Level, Morphism, Slot, Structure,
};
use gerbe_core::crossed::{
    cm_verify, gray_compose, tcm_induced_quotient_cm, two_group_compose_horizontal, two_group_compose_vertical, GrayKind,
};
use gerbe_core::group::{embedding, hom_verify, quotient, verify_group, GroupAction, action_verify};
use gerbe_core::io::{parse, serialize, Document};
use gerbe_core::lifting::NormalContext;
use gerbe_core::nerve::{nerve_map_verify, nerve_verify};
use gerbe_core::{corpus, CrossedModule, FiniteGroup, Nerve, NerveMap};
use proptest::prelude::*;

fn groups() -> &'static [(&'static str, Arc<FiniteGroup>)] {
    static G: OnceLock<Vec<(&'static str, Arc<FiniteGroup>)>> = OnceLock::new();
    G.get_or_init(corpus::small_groups)
}

fn triangle() -> Arc<Nerve> {
    Arc::new(Nerve::simplex_boundary(1).unwrap())
}

fn tetrahedron() -> Arc<Nerve> {
    Arc::new(Nerve::simplex_boundary(2).unwrap())
}

fn hexagon() -> Arc<Nerve> {
    Arc::new(Nerve::circle(6).unwrap())
}

/// All cocycles of one shape, enumerated once.
struct Pool {
    name: &'static str,
    cocycles: Vec<Cocycle>,
}

fn pool(level: Level, s: Structure, nerve: Arc<Nerve>, name: &'static str) -> Pool {
    let cocycles = enumerate_cocycles(level, &s, &nerve, &SearchOptions::default()).unwrap();
    assert!(!cocycles.is_empty());
    Pool { name, cocycles }
}

fn a3s3() -> Arc<CrossedModule> {
    corpus::crossed_module("a3-in-s3").unwrap()
}

/// Shapes with products, used for product and pullback properties.
fn product_pools() -> &'static [Pool] {
    static P: OnceLock<Vec<Pool>> = OnceLock::new();
    P.get_or_init(|| {
        let s3 = corpus::s3();
        let all: Vec<usize> = s3.elements().collect();
        let conj = Structure::Crossed(Arc::new(CrossedModule::conjugation(&s3, &all).unwrap()));
        let z2z4 = Structure::Crossed(corpus::crossed_module("z2-in-z4").unwrap());
        let chain = Structure::TwoCrossed(corpus::two_crossed_module("chain-z2-z4-z2").unwrap());
        let a3s3z4 = Structure::TwoCrossed(corpus::two_crossed_module("a3-s3-z4").unwrap());
        vec![
            pool(Level::Bundle1, Structure::Crossed(a3s3()), triangle(), "bundle1 a3-in-s3 triangle"),
            pool(Level::Bundle1, Structure::Crossed(a3s3()), tetrahedron(), "bundle1 a3-in-s3 tetrahedron"),
            pool(Level::Bundle1, conj, triangle(), "bundle1 s3-conj triangle"),
            pool(Level::Gerbe2, z2z4.clone(), triangle(), "gerbe2 z2-in-z4 triangle"),
            pool(Level::Gerbe2, z2z4, tetrahedron(), "gerbe2 z2-in-z4 tetrahedron"),
            pool(Level::TcmGerbe2, chain, triangle(), "tcm-gerbe2 chain triangle"),
            pool(Level::TcmGerbe2, a3s3z4, triangle(), "tcm-gerbe2 a3-s3-z4 triangle"),
        ]
    })
}

/// Shapes without products, used for coboundary properties only.
fn coboundary_pools() -> &'static [Pool] {
    static P: OnceLock<Vec<Pool>> = OnceLock::new();
    P.get_or_init(|| {
        vec![
            pool(Level::Gerbe2, Structure::Crossed(a3s3()), triangle(), "gerbe2 a3-in-s3 triangle"),
            pool(
                Level::Gerbe2,
                Structure::Crossed(Arc::new(CrossedModule::top(&corpus::s3()))),
                tetrahedron(),
                "gerbe2 1-to-s3 tetrahedron",
            ),
        ]
    })
}

fn all_pools() -> impl Iterator<Item = &'static Pool> {
    product_pools().iter().chain(coboundary_pools())
}

fn pick(p: &Pool, i: usize) -> &Cocycle {
    &p.cocycles[i % p.cocycles.len()]
}

fn witness(c: &Cocycle, seeds: &[usize]) -> Coboundary {
    let s = c.structure();
    let mut it = seeds.iter().cycle();
    Coboundary::from_fn(c.level(), s.clone(), c.nerve().clone(), |k, _| {
        let slot: Slot = c.level().witness_components()[k].slot;
        it.next().unwrap() % s.group(slot).order()
    })
    .unwrap()
}

/// Any vertex map into a triangle or tetrahedron boundary from a nerve of
/// dimension at most 1 is simplicial.
fn map_into(source: Arc<Nerve>, target: Arc<Nerve>, images: &[usize]) -> NerveMap {
    let k = target.index_count();
    let map = (0..source.index_count()).map(|i| images[i % images.len()] % k).collect();
    NerveMap::new(source, target, map).unwrap()
}

fn random_nerve(n: usize, maximal: &[Vec<usize>]) -> Nerve {
    let mut simplices: Vec<Vec<usize>> = maximal
        .iter()
        .map(|s| {
            let mut s: Vec<usize> = s.iter().map(|&x| x % n).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    simplices.extend((0..n).map(|i| vec![i]));
    Nerve::from_maximal(n, &simplices).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_products_are_groups(i in 0usize..14, j in 0usize..14) {
        let (g, h) = (&groups()[i].1, &groups()[j].1);
        prop_assume!(g.order() * h.order() <= 64);
        let p = FiniteGroup::direct_product(g, h);
        prop_assert!(verify_group(&p.table_rows()).unwrap().is_valid());
    }

    #[test]
    fn quotient_kills_the_kernel(i in 0usize..14, k in 0usize..16) {
        let g = &groups()[i].1;
        let normals = g.normal_subgroups();
        let n = &normals[k % normals.len()];
        let (_, emb) = embedding(g, n).unwrap();
        let (q, pi) = quotient(g, n).unwrap();
        let composite = emb.then(&pi).unwrap();
        prop_assert!(hom_verify(&emb).is_valid());
        prop_assert!(hom_verify(&pi).is_valid());
        prop_assert!(hom_verify(&composite).is_valid());
        prop_assert!(composite.map.iter().all(|&x| x == q.identity()));
        prop_assert_eq!(q.order() * n.len(), g.order());
    }

    #[test]
    fn conjugation_on_normal_subgroups_is_an_action(i in 0usize..14, k in 0usize..16) {
        let g = &groups()[i].1;
        let normals = g.normal_subgroups();
        let (_, emb) = embedding(g, &normals[k % normals.len()]).unwrap();
        let act = GroupAction::conjugation_on(g, &emb).unwrap();
        prop_assert!(action_verify(&act).is_valid());
    }

    #[test]
    fn interchange_law(k in 0usize..7, x in proptest::collection::vec(0usize..64, 6)) {
        let c = &corpus::crossed_modules()[k].tcm;
        let (m, l) = (c.m(), c.l());
        let a = (x[0] % m.order(), x[1] % l.order());
        let b = (m.mul(c.bd(a.1), a.0), x[2] % l.order());
        let cc = (x[3] % m.order(), x[4] % l.order());
        let d = (m.mul(c.bd(cc.1), cc.0), x[5] % l.order());
        let lhs = two_group_compose_horizontal(
            c,
            two_group_compose_vertical(c, a, b).unwrap(),
            two_group_compose_vertical(c, cc, d).unwrap(),
        );
        let rhs = two_group_compose_vertical(
            c,
            two_group_compose_horizontal(c, a, cc),
            two_group_compose_horizontal(c, b, d),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gray_horizontal_is_associative(k in 0usize..11, x in proptest::collection::vec(0usize..64, 9)) {
        let t = &corpus::two_crossed_modules()[k].tcm;
        let triple = |o: usize| (x[o] % t.n().order(), x[o + 1] % t.m().order(), x[o + 2] % t.l().order());
        let (p, q, r) = (triple(0), triple(3), triple(6));
        let h = |a, b| gray_compose(t, GrayKind::Horizontal, a, b).unwrap();
        prop_assert_eq!(h(h(p, q), r), h(p, h(q, r)));
    }

    #[test]
    fn random_nerves_are_closed(
        n in 1usize..7,
        maximal in proptest::collection::vec(proptest::collection::vec(0usize..7, 1..5), 0..5),
    ) {
        let nerve = random_nerve(n, &maximal);
        prop_assert!(nerve_verify(&nerve).is_valid());
        for arity in 1..=3 {
            let mut direct = 0;
            let mut t = vec![0; arity];
            loop {
                let mut support = t.clone();
                support.sort_unstable();
                support.dedup();
                if nerve.simplices().any(|s| *s == support) {
                    direct += 1;
                }
                let Some(p) = (0..arity).rev().find(|&p| t[p] + 1 < n) else { break };
                t[p] += 1;
                for q in t.iter_mut().skip(p + 1) {
                    *q = 0;
                }
            }
            prop_assert_eq!(nerve.tuples(arity).len(), direct);
        }
    }

    #[test]
    fn composition_of_valid_nerve_maps_is_valid(
        maximal in proptest::collection::vec(proptest::collection::vec(0usize..5, 1..4), 1..4),
        f in proptest::collection::vec(0usize..5, 5),
        g in proptest::collection::vec(0usize..5, 5),
    ) {
        let a = Arc::new(random_nerve(5, &maximal));
        let b = Arc::new(random_nerve(5, &[vec![0, 1, 2], vec![2, 3], vec![3, 4, 0]]));
        let c = Arc::new(Nerve::full_simplex(3));
        let f = NerveMap::new(a, b.clone(), f).unwrap();
        let g = NerveMap::new(b, c, g.iter().map(|&x| x % 4).collect()).unwrap();
        prop_assume!(nerve_map_verify(&f).is_valid() && nerve_map_verify(&g).is_valid());
        prop_assert!(nerve_map_verify(&f.then(&g).unwrap()).is_valid());
    }

    #[test]
    fn product_closure_and_associativity(k in 0usize..7, i in any::<usize>(), j in any::<usize>(), l in any::<usize>()) {
        let p = &product_pools()[k];
        let (a, b, c) = (pick(p, i), pick(p, j), pick(p, l));
        let ab = product(a, b).unwrap();
        prop_assert!(verify(&ab).is_valid(), "{}", p.name);
        prop_assert!(verify(&inverse(a).unwrap()).is_valid(), "{}", p.name);
        if a.level() == Level::Bundle1 {
            let left = product(&ab, c).unwrap();
            let right = product(a, &product(b, c).unwrap()).unwrap();
            prop_assert_eq!(left, right, "{}", p.name);
        }
    }

    #[test]
    fn coboundary_closure_and_witness_exactness(
        k in 0usize..9,
        i in any::<usize>(),
        seeds in proptest::collection::vec(0usize..1000, 1..40),
    ) {
        let p = all_pools().nth(k).unwrap();
        let c = pick(p, i);
        let w = witness(c, &seeds);
        let d = apply_coboundary(c, &w).unwrap();
        prop_assert!(verify(&d).is_valid(), "{}", p.name);
        let found = equivalent(c, &d).unwrap().expect("a witness exists");
        prop_assert_eq!(apply_coboundary(c, &found).unwrap(), d, "{}", p.name);
    }

    #[test]
    fn pullback_commutes_with_product_and_coboundaries(
        k in 0usize..7,
        i in any::<usize>(),
        j in any::<usize>(),
        images in proptest::collection::vec(0usize..4, 6),
        seeds in proptest::collection::vec(0usize..1000, 1..40),
    ) {
        let p = &product_pools()[k];
        let (a, b) = (pick(p, i), pick(p, j));
        let source = if a.nerve().index_count() == 3 { hexagon() } else { triangle() };
        let f = map_into(source, a.nerve().clone(), &images);
        prop_assert_eq!(
            pullback(&product(a, b).unwrap(), &f).unwrap(),
            product(&pullback(a, &f).unwrap(), &pullback(b, &f).unwrap()).unwrap()
        );
        let w = witness(a, &seeds);
        prop_assert_eq!(
            pullback(&apply_coboundary(a, &w).unwrap(), &f).unwrap(),
            apply_coboundary(&pullback(a, &f).unwrap(), &pullback_coboundary(&w, &f).unwrap()).unwrap()
        );
    }

    #[test]
    fn change_structure_commutes_with_bundle_products(k in 0usize..2, i in any::<usize>(), j in any::<usize>()) {
        let p = &product_pools()[k];
        let f = Morphism::Crossed(NormalContext::new(a3s3()).unwrap().collapse());
        let (a, b) = (pick(p, i), pick(p, j));
        prop_assert_eq!(
            change_structure(&product(a, b).unwrap(), &f).unwrap(),
            product(&change_structure(a, &f).unwrap(), &change_structure(b, &f).unwrap()).unwrap()
        );
    }

    #[test]
    fn documents_roundtrip(k in 0usize..9, i in any::<usize>(), g in 0usize..14) {
        let c = pick(all_pools().nth(k).unwrap(), i).clone();
        let docs = [
            Document::Cocycle(c.clone()),
            Document::Nerve(c.nerve().clone()),
            Document::Group(groups()[g].1.clone()),
        ];
        for d in docs {
            let text = serialize(&d);
            prop_assert_eq!(serialize(&parse(&text).unwrap()), text);
        }
        let Document::Cocycle(back) = parse(&serialize(&Document::Cocycle(c.clone()))).unwrap() else {
            panic!("kind changed");
        };
        prop_assert_eq!(back, c);
    }
}

#[test]
fn induced_quotient_crossed_modules_are_valid() {
    for t in corpus::two_crossed_modules() {
        let c = tcm_induced_quotient_cm(&t.tcm).unwrap();
        assert!(cm_verify(&c).is_valid(), "{}", t.name);
    }
}

#[test]
fn class_tables_are_consistent() {
    for p in all_pools().filter(|p| p.cocycles[0].nerve().index_count() == 3) {
        let c = &p.cocycles[0];
        let table = enumerate_classes(c.level(), c.structure(), c.nerve(), &SearchOptions::default()).unwrap();
        assert_eq!(table.total(), p.cocycles.len(), "{}", p.name);
        for (x, a) in table.representatives.iter().enumerate() {
            for b in &table.representatives[x + 1..] {
                assert!(equivalent(a, b).unwrap().is_none(), "{}", p.name);
            }
        }
        if let Some(rows) = &table.product_table {
            assert!(verify_group(rows).unwrap().is_valid(), "{}", p.name);
        }
    }
}
