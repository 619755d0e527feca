//! Standard small groups, crossed modules and 2-crossed modules used by the
//! tests, the benchmarks and the command-line examples.

use std::sync::Arc;

use crate::crossed::{CrossedModule, TwoCrossedModule};
use crate::error::{invariant, Result};
use crate::group::{FiniteGroup, GroupAction, GroupHom};
use crate::nerve::Nerve;

/// A structure with a short stable name.
#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: &'static str,
    pub tcm: Arc<T>,
}

fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(g)
}

/// The groups of order at most 8, up to isomorphism.
pub fn small_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    let z = |n| arc(FiniteGroup::cyclic(n));
    let z2 = FiniteGroup::cyclic(2);
    let z4 = FiniteGroup::cyclic(4);
    vec![
        ("z1", z(1)),
        ("z2", z(2)),
        ("z3", z(3)),
        ("z4", z(4)),
        ("z2xz2", arc(FiniteGroup::direct_product(&z2, &z2))),
        ("z5", z(5)),
        ("z6", z(6)),
        ("s3", arc(FiniteGroup::symmetric(3))),
        ("z7", z(7)),
        ("z8", z(8)),
        ("z2xz4", arc(FiniteGroup::direct_product(&z2, &z4))),
        (
            "z2xz2xz2",
            arc(FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2)),
        ),
        ("d4", arc(FiniteGroup::dihedral(4))),
        ("q8", arc(FiniteGroup::quaternion())),
    ]
}

pub fn s3() -> Arc<FiniteGroup> {
    arc(FiniteGroup::symmetric(3))
}

/// Even permutations of the symmetric group on three letters.
pub fn a3_elements(s3: &FiniteGroup) -> Vec<usize> {
    ["e", "(123)", "(132)"]
        .iter()
        .map(|l| s3.by_label(l).expect("label"))
        .collect()
}

/// Sign of a permutation in `symmetric(3)`, as an element of Z₂.
pub fn sign(s3: &FiniteGroup, x: usize) -> usize {
    usize::from(!a3_elements(s3).contains(&x))
}

/// `A₃ ↪ S₃` with conjugation.
pub fn a3_in_s3() -> CrossedModule {
    let g = s3();
    CrossedModule::conjugation(&g, &a3_elements(&g)).expect("normal")
}

/// `Z₂ ↪ Z₄` with the trivial action.
pub fn z2_in_z4() -> CrossedModule {
    let (z2, z4) = (arc(FiniteGroup::cyclic(2)), arc(FiniteGroup::cyclic(4)));
    let d1 = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).expect("shape");
    CrossedModule::new(d1, GroupAction::trivial(&z4, &z2)).expect("shape")
}

/// `Z₄ → Z₄`, `l ↦ 2l`, trivial action. Kernel and cokernel are both Z₂.
pub fn z4_doubling() -> CrossedModule {
    let z4 = arc(FiniteGroup::cyclic(4));
    let d1 = GroupHom::new(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).expect("shape");
    CrossedModule::new(d1, GroupAction::trivial(&z4, &z4)).expect("shape")
}

/// `Z₂ → Z₂`, the constant map, trivial action.
pub fn z2_zero_map() -> CrossedModule {
    let z2 = arc(FiniteGroup::cyclic(2));
    let d1 = GroupHom::trivial(&z2, &z2);
    CrossedModule::new(d1, GroupAction::trivial(&z2, &z2)).expect("shape")
}

/// `Z₂ →(1↦2) Z₄ →(mod 2) Z₂`, trivial actions and lifting.
pub fn chain_z2_z4_z2() -> TwoCrossedModule {
    let (z2, z4) = (arc(FiniteGroup::cyclic(2)), arc(FiniteGroup::cyclic(4)));
    let d1 = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).expect("shape");
    let d2 = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).expect("shape");
    TwoCrossedModule::new(
        d1,
        d2,
        GroupAction::trivial(&z2, &z4),
        GroupAction::trivial(&z2, &z2),
        vec![vec![0; 4]; 4],
    )
    .expect("shape")
}

/// Builds a 2-crossed module with injective `d1` whose lifting is forced by
/// axiom (ii): `{a,b} = ∂1⁻¹(a b a⁻¹ (^(∂2 a) b)⁻¹)`.
pub fn with_forced_lifting(
    d1: GroupHom,
    d2: GroupHom,
    act_nm: GroupAction,
    act_nl: GroupAction,
) -> Result<TwoCrossedModule> {
    let m = d1.target.clone();
    let mut peiffer = vec![vec![0; m.order()]; m.order()];
    for a in m.elements() {
        for b in m.elements() {
            let v = m.mul(m.conj(a, b), m.inv(act_nm.apply(d2.apply(a), b)));
            let pre = d1.preimages(v);
            if pre.len() != 1 {
                return Err(invariant("Peiffer defect has no unique preimage", &[a, b]));
            }
            peiffer[a][b] = pre[0];
        }
    }
    TwoCrossedModule::new(d1, d2, act_nm, act_nl, peiffer)
}

/// `n ↦ conj(g)` for odd `n`, identity otherwise, as an action of a cyclic
/// group on a group containing `g` with `g² = e`.
fn parity_conjugation(n: &Arc<FiniteGroup>, space: &Arc<FiniteGroup>, g: usize) -> GroupAction {
    GroupAction::from_fn(n, space, |k, x| if k % 2 == 1 { space.conj(g, x) } else { x })
}

/// The 2-crossed modules used across the test-suite. All are valid.
pub fn two_crossed_modules() -> Vec<Named<TwoCrossedModule>> {
    let z = |n| arc(FiniteGroup::cyclic(n));
    let s3 = s3();
    let a3 = a3_in_s3();
    let a3_l = a3.l().clone();
    let t12 = s3.by_label("(12)").expect("label");
    let t12_in_a3 = |k: usize, x: usize| -> usize {
        // conjugation by (12) restricted to A₃
        if k % 2 == 1 {
            let img = s3.conj(t12, a3.d1().apply(x));
            a3.d1().preimages(img)[0]
        } else {
            x
        }
    };
    let sign_map: Vec<usize> = s3.elements().map(|x| sign(&s3, x)).collect();

    let mut out = Vec::new();
    let mut push = |name, t: TwoCrossedModule| out.push(Named { name, tcm: Arc::new(t) });

    push("chain-z2-z4-z2", chain_z2_z4_z2());
    push("abelian-z2", TwoCrossedModule::abelian(&z(2)));
    push("abelian-z3", TwoCrossedModule::abelian(&z(3)));
    push("top-a3-s3", TwoCrossedModule::from_crossed(&a3));
    let s3_self = CrossedModule::conjugation(&s3, &s3.elements().collect::<Vec<_>>()).expect("normal");
    push("top-s3-s3", TwoCrossedModule::from_crossed(&s3_self));

    for (name, twisted) in [("a3-s3-z2", false), ("a3-s3-z2-twisted", true)] {
        let n = z(2);
        let d2 = GroupHom::new(s3.clone(), n.clone(), sign_map.clone()).expect("shape");
        let (nm, nl) = if twisted {
            (
                parity_conjugation(&n, &s3, t12),
                GroupAction::from_fn(&n, &a3_l, t12_in_a3),
            )
        } else {
            (GroupAction::trivial(&n, &s3), GroupAction::trivial(&n, &a3_l))
        };
        push(name, with_forced_lifting(a3.d1().clone(), d2, nm, nl).expect("lifting"));
    }
    {
        let n = z(4);
        let d2 = GroupHom::new(s3.clone(), n.clone(), sign_map.iter().map(|s| 2 * s).collect()).expect("shape");
        let nm = parity_conjugation(&n, &s3, t12);
        let nl = GroupAction::from_fn(&n, &a3_l, t12_in_a3);
        push("a3-s3-z4", with_forced_lifting(a3.d1().clone(), d2, nm, nl).expect("lifting"));
    }
    // S₃ → S₃×Z₂ → Z₂ and → Z₄ with nonabelian L.
    let m = arc(FiniteGroup::direct_product(&s3, &FiniteGroup::cyclic(2)));
    let d1 = GroupHom::new(s3.clone(), m.clone(), s3.elements().map(|s| s * 2).collect()).expect("shape");
    let t12m = t12 * 2;
    for (name, twisted) in [("s3-s3xz2-z2", false), ("s3-s3xz2-z2-twisted", true)] {
        let n = z(2);
        let d2 = GroupHom::new(m.clone(), n.clone(), m.elements().map(|x| x % 2).collect()).expect("shape");
        let (nm, nl) = if twisted {
            (parity_conjugation(&n, &m, t12m), parity_conjugation(&n, &s3, t12))
        } else {
            (GroupAction::trivial(&n, &m), GroupAction::trivial(&n, &s3))
        };
        push(name, with_forced_lifting(d1.clone(), d2, nm, nl).expect("lifting"));
    }
    {
        let n = z(4);
        let d2 = GroupHom::new(m.clone(), n.clone(), m.elements().map(|x| 2 * (x % 2)).collect()).expect("shape");
        let nm = parity_conjugation(&n, &m, t12m);
        let nl = parity_conjugation(&n, &s3, t12);
        push("s3-s3xz2-z4", with_forced_lifting(d1, d2, nm, nl).expect("lifting"));
    }
    out
}

/// Looks a corpus 2-crossed module up by name.
pub fn two_crossed_module(name: &str) -> Option<Arc<TwoCrossedModule>> {
    two_crossed_modules().into_iter().find(|t| t.name == name).map(|t| t.tcm)
}

/// Named crossed modules referred to by the command line and the tests.
pub fn crossed_modules() -> Vec<Named<CrossedModule>> {
    let z = |n| arc(FiniteGroup::cyclic(n));
    let mut out = Vec::new();
    let mut push = |name, c: CrossedModule| out.push(Named { name, tcm: Arc::new(c) });
    push("z2-to-1", CrossedModule::abelian(&z(2)));
    push("1-to-z2", CrossedModule::top(&z(2)));
    push("1-to-s3", CrossedModule::top(&s3()));
    push("a3-in-s3", a3_in_s3());
    push("z2-in-z4", z2_in_z4());
    push("z4-doubling", z4_doubling());
    push("z2-zero-map", z2_zero_map());
    out
}

pub fn crossed_module(name: &str) -> Option<Arc<CrossedModule>> {
    crossed_modules().into_iter().find(|t| t.name == name).map(|t| t.tcm)
}

/// Names accepted wherever a nerve is expected.
pub const NERVE_NAMES: [&str; 6] = ["point", "triangle", "tetrahedron", "sphere-3", "sphere-4", "hexagon"];

/// A nerve by name: one of [`NERVE_NAMES`], `circle-N`, `sphere-K` or
/// `simplex-D`.
pub fn named_nerve(name: &str) -> Option<Nerve> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    match name {
        "point" => Some(Nerve::point()),
        "triangle" => Nerve::simplex_boundary(1).ok(),
        "tetrahedron" => Nerve::simplex_boundary(2).ok(),
        "hexagon" => Nerve::circle(6).ok(),
        _ => {
            if let Some(n) = num("circle-") {
                Nerve::circle(n).ok()
            } else if let Some(k) = num("sphere-") {
                Nerve::simplex_boundary(k).ok()
            } else {
                num("simplex-").filter(|&d| d <= 4).map(Nerve::full_simplex)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed::{cm_verify, tcm_verify};

    #[test]
    fn every_corpus_structure_is_valid() {
        for t in two_crossed_modules() {
            let r = tcm_verify(&t.tcm);
            assert!(r.is_valid(), "{}: {r}", t.name);
        }
        for c in crossed_modules() {
            assert!(cm_verify(&c.tcm).is_valid(), "{}", c.name);
        }
    }

    #[test]
    fn small_group_orders() {
        let orders: Vec<usize> = small_groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
    }
}
