//! The golden document set: the corpus structures, nerves, cocycles and
//! contexts used by the command-line examples and the end-to-end tests,
//! including deliberately invalid documents for the negative paths.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::classify::{enumerate_classes, SearchOptions};
use crate::cocycle::{bundle_data, constant_bundle, constant_cocycle, function_data, Cocycle, Level, Morphism, Structure};
use crate::corpus::{self, named_nerve};
use crate::crossed::{CrossedModule, CrossedModuleMorphism, TwoCrossedModule};
use crate::error::Result;
use crate::group::{FiniteGroup, GroupHom};
use crate::io::{to_value, Document};
use crate::lifting::{Context, ExtensionContext, NormalContext, TwistContext};
use crate::nerve::{Nerve, NerveMap};

fn nerve(name: &str) -> Arc<Nerve> {
    Arc::new(named_nerve(name).expect("corpus nerve"))
}

fn cm(name: &str) -> Arc<CrossedModule> {
    corpus::crossed_module(name).expect("corpus crossed module")
}

fn tcm(name: &str) -> Arc<TwoCrossedModule> {
    corpus::two_crossed_module(name).expect("corpus 2-crossed module")
}

fn top(g: &Arc<FiniteGroup>) -> Structure {
    Structure::Crossed(Arc::new(CrossedModule::top(g)))
}

/// File name and document value of every golden document, in a fixed
/// order.
pub fn golden_documents() -> Result<Vec<(String, Value)>> {
    let mut out: Vec<(String, Value)> = Vec::new();
    let mut push = |name: &str, d: Document| out.push((format!("{name}.json"), to_value(&d)));

    let z2 = Arc::new(FiniteGroup::cyclic(2));
    push("group-z2", Document::Group(z2.clone()));
    push("group-s3", Document::Group(corpus::s3()));
    for c in corpus::crossed_modules() {
        push(&format!("cm-{}", c.name), Document::CrossedModule(c.tcm));
    }
    let s3 = corpus::s3();
    let all: Vec<usize> = s3.elements().collect();
    push("cm-s3-conj", Document::CrossedModule(Arc::new(CrossedModule::conjugation(&s3, &all)?)));
    for t in corpus::two_crossed_modules() {
        push(&format!("tcm-{}", t.name), Document::TwoCrossedModule(t.tcm));
    }
    for name in ["point", "triangle", "tetrahedron", "sphere-3", "hexagon"] {
        push(&format!("nerve-{name}"), Document::Nerve(nerve(name)));
    }

    let tri = nerve("triangle");
    let mobius = bundle_data(&z2, tri.clone(), |i, j| usize::from((i, j) == (0, 1)))?;
    push("mobius", Document::Cocycle(mobius.clone()));
    push("even", Document::Cocycle(bundle_data(&z2, tri.clone(), |i, j| usize::from(j == i + 1))?));
    push("trivial", Document::Cocycle(Cocycle::trivial(Level::Gerbe2, top(&z2), tri.clone())?));
    let a3s3 = cm("a3-in-s3");
    let t12 = s3.by_label("(12)").expect("label");
    let c123 = s3.by_label("(123)").expect("label");
    push("bundle-a3s3-12", Document::Cocycle(constant_bundle(&a3s3, tri.clone(), t12)?));
    push("bundle-a3s3-123", Document::Cocycle(constant_bundle(&a3s3, tri.clone(), c123)?));
    push("tcm-gerbe-a3-s3-z4", Document::Cocycle(constant_cocycle(&tcm("a3-s3-z4"), tri.clone(), 1)?));

    let normal = NormalContext::new(a3s3.clone())?;
    push("context-normal-a3-in-s3", Document::Context(Context::Normal(normal.clone())));
    let z2z4 = NormalContext::new(cm("z2-in-z4"))?;
    push("context-normal-z2-in-z4", Document::Context(Context::Normal(z2z4)));
    let chain = ExtensionContext::new(tcm("chain-z2-z4-z2"))?;
    push("context-extension-chain-z2-z4-z2", Document::Context(Context::Extension(chain)));
    let ext = ExtensionContext::new(tcm("a3-s3-z4"))?;
    push("context-extension-a3-s3-z4", Document::Context(Context::Extension(ext.clone())));
    for name in ["z4-doubling", "z2-zero-map"] {
        let t = TwistContext::new(cm(name))?;
        push(&format!("context-twist-{name}"), Document::Context(Context::Twist(t)));
    }

    push("function-z2", Document::Cocycle(function_data(&normal.g, tri.clone(), &[1, 1, 1])?));
    push("gn-bundle-a3-s3-z4", Document::Cocycle(constant_bundle(&ext.gn, tri.clone(), 1)?));
    let f = [0, 1, 0, 1, 1];
    let q = bundle_data(&ext.q, nerve("sphere-3"), |i, j| (f[i] + f[j]) % 2)?;
    push("q-sphere-3", Document::Cocycle(q));

    let abelian = Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&z2)));
    let table = enumerate_classes(Level::TwoGerbe3, &abelian, &nerve("sphere-3"), &SearchOptions::default())?;
    let generator = table
        .representatives
        .iter()
        .find(|c| c.components()[2].iter().any(|&x| x != 0))
        .expect("nontrivial class");
    let o = crate::cocycle::AbelianObstruction::new(z2.clone(), nerve("sphere-3"), generator.components()[2].clone())?;
    push("obstruction-generator", Document::Obstruction(o));

    push("morphism-collapse-a3-in-s3", Document::Morphism(Morphism::Crossed(normal.collapse())));
    let hexagon = nerve("hexagon");
    push(
        "map-hexagon-triangle",
        Document::NerveMap(NerveMap::new(hexagon, tri.clone(), (0..6).map(|i| i % 3).collect())?),
    );

    // Negative documents.
    let mut broken = to_value(&Document::Cocycle(mobius));
    broken["payload"]["components"]["m"]["1,0"] = json!(0);
    out.push(("mobius-broken.json".into(), broken));
    let mut bad_group = to_value(&Document::Group(z2.clone()));
    bad_group["payload"]["table"] = json!([[0, 1], [1, 1]]);
    out.push(("group-bad.json".into(), bad_group));
    let mut bad_cm = to_value(&Document::CrossedModule(a3s3.clone()));
    bad_cm["payload"]["act"] = json!((0..6).map(|_| vec![0, 1, 2]).collect::<Vec<_>>());
    out.push(("cm-bad-action.json".into(), bad_cm));
    let squashed = CrossedModuleMorphism {
        source: a3s3.clone(),
        target: a3s3.clone(),
        lam: GroupHom::trivial(a3s3.l(), a3s3.l()),
        kap: GroupHom::identity(a3s3.m()),
    };
    out.push(("morphism-bad.json".into(), to_value(&Document::Morphism(Morphism::Crossed(squashed)))));
    let mut not_hom = to_value(&Document::Morphism(Morphism::Crossed(normal.collapse())));
    not_hom["payload"]["kap"] = json!([0, 1, 0, 0, 0, 0]);
    out.push(("morphism-not-hom.json".into(), not_hom));
    let hex = to_value(&Document::Nerve(nerve("hexagon")));
    out.push((
        "map-bad.json".into(),
        json!({
            "kind": "nerve-map",
            "version": crate::io::VERSION,
            "payload": {
                "source": to_value(&Document::Nerve(tri)),
                "target": hex,
                "vertexMap": [0, 1, 2],
            },
        }),
    ));
    Ok(out)
}
