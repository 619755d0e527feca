//! Workloads shared by the benchmarks.

use std::sync::Arc;

use gerbe_core::classify::SearchOptions;
use gerbe_core::cocycle::{bundle_data, Cocycle, Level, Structure};
use gerbe_core::{corpus, CrossedModule, FiniteGroup, Nerve, TwoCrossedModule};

/// One enumeration workload: level, structure and nerve.
pub struct Workload {
    pub name: &'static str,
    pub level: Level,
    pub structure: Structure,
    pub nerve: Arc<Nerve>,
}

fn sphere(k: usize) -> Arc<Nerve> {
    Arc::new(Nerve::simplex_boundary(k).expect("sphere"))
}

/// Class-enumeration workloads, smallest first.
pub fn workloads() -> Vec<Workload> {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    vec![
        Workload {
            name: "bundle1/a3-in-s3/triangle",
            level: Level::Bundle1,
            structure: Structure::Crossed(corpus::crossed_module("a3-in-s3").expect("corpus")),
            nerve: sphere(1),
        },
        Workload {
            name: "gerbe2/1-to-s3/triangle",
            level: Level::Gerbe2,
            structure: Structure::Crossed(Arc::new(CrossedModule::top(&corpus::s3()))),
            nerve: sphere(1),
        },
        Workload {
            name: "gerbe2/z2-to-1/tetrahedron",
            level: Level::Gerbe2,
            structure: Structure::Crossed(Arc::new(CrossedModule::abelian(&z2))),
            nerve: sphere(2),
        },
        Workload {
            name: "two-gerbe3/z2/sphere-3",
            level: Level::TwoGerbe3,
            structure: Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&z2))),
            nerve: sphere(3),
        },
    ]
}

/// The nontrivial Z₂-bundle on the triangle and the trivial one.
pub fn mobius_pair() -> (Cocycle, Cocycle) {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let mobius = bundle_data(&z2, sphere(1), |i, j| usize::from((i, j) == (0, 1))).expect("mobius");
    let trivial = bundle_data(&z2, sphere(1), |_, _| 0).expect("trivial");
    (mobius, trivial)
}

pub fn options(workers: usize) -> SearchOptions {
    SearchOptions {
        workers,
        ..SearchOptions::default()
    }
}
