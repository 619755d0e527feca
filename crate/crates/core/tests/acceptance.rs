//! The ten acceptance criteria, one pass/fail line each.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gerbe_core::classify::{class_of, enumerate_classes, enumerate_cocycles, equivalent, partition, ClassTable, Mode, SearchOptions};
use gerbe_core::cocycle::{
    apply_coboundary, inverse, product, product_supported, verify_obstruction, AbelianObstruction,
    Coboundary, Cocycle, Formulas, Level, Slot, Structure,
};
use gerbe_core::crossed::{cm_verify, tcm_derived_action, tcm_verify};
use gerbe_core::group::{action_verify, verify_group, GroupAction};
use gerbe_core::io::{serialize, Document};
use gerbe_core::lifting::{
    compute_obstruction, greatest_section, lift_bundle_to_gerbe, lift_bundle_to_two_gerbe,
    lift_function_to_bundle, lift_through_twist, lift_to_tcm_gerbe, obstruction_is_trivial, torsor_check,
    ExtensionContext, NormalContext, TwistContext,
};
use gerbe_core::{corpus, CrossedModule, Error, FiniteGroup, Nerve, Result, TwoCrossedModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limit per criterion.
const TIME_LIMIT: Duration = Duration::from_secs(60);
/// Criterion 3 includes the 3-sphere enumeration, allowed minutes.
const CLASS_COUNT_TIME_LIMIT: Duration = Duration::from_secs(600);
/// Expected class counts; all comparisons are exact.
const H1_CIRCLE: usize = 2;
const H2_SPHERE: usize = 2;
const H3_SPHERE: usize = 2;
const S3_CONJUGACY_CLASSES: usize = 3;
/// Inputs per closure batch, and seeded partners or witnesses per input.
const MAX_CLOSURE_INPUTS: usize = 1500;
const PARTNERS: usize = 4;
const WITNESSES: usize = 4;
const SEED: u64 = 0x5eed;
/// Search budgets for closure inputs: full mode first, then normalized.
/// 2-crossed modules checked on the triangle only: each has between 0.7
/// and 1.5 million `TcmGerbe2` cocycles on the tetrahedron.
const TETRAHEDRON_EXCLUDED: &str = "s3-s3xz2";
const FULL_BUDGET: u64 = 3_000_000;
const NORMALIZED_BUDGET: u64 = 1_000_000_000_000;

fn sphere(k: usize) -> Arc<Nerve> {
    Arc::new(Nerve::simplex_boundary(k).unwrap())
}

fn triangle() -> Arc<Nerve> {
    sphere(1)
}

fn tetrahedron() -> Arc<Nerve> {
    sphere(2)
}

fn hexagon() -> Arc<Nerve> {
    Arc::new(Nerve::circle(6).unwrap())
}

fn crossed(c: CrossedModule) -> Structure {
    Structure::Crossed(Arc::new(c))
}

fn top(g: &Arc<FiniteGroup>) -> Structure {
    crossed(CrossedModule::top(g))
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

// ------------------------------------------------------------------ oracles

/// Dimension of simplicial cohomology over the two-element field, from
/// ranks of coboundary matrices on increasing simplices.
fn f2_cohomology_dim(nerve: &Nerve, k: usize) -> usize {
    let simplices = |d: usize| -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = nerve.simplices().filter(|s| s.len() == d + 1).cloned().collect();
        v.sort();
        v
    };
    let rank = |d: usize| -> usize {
        let (rows, cols) = (simplices(d + 1), simplices(d));
        let mut m: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| c.iter().all(|x| r.contains(x))).collect())
            .collect();
        gf2_rank(&mut m)
    };
    let n = simplices(k).len();
    let below = if k == 0 { 0 } else { rank(k - 1) };
    n - rank(k) - below
}

fn gf2_rank(m: &mut [Vec<bool>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of conjugacy classes, by direct orbit count.
fn conjugacy_classes(g: &FiniteGroup) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for x in g.elements() {
        if seen.insert(x) {
            count += 1;
            for h in g.elements() {
                seen.insert(g.mul(g.mul(h, x), g.inv(h)));
            }
        }
    }
    count
}

/// Cocycles in full mode when affordable, otherwise normalized, thinned
/// evenly to a fixed number.
fn closure_inputs(level: Level, s: &Structure, nerve: &Arc<Nerve>) -> Result<Vec<Cocycle>> {
    let full = SearchOptions {
        mode: Some(Mode::Full),
        budget: FULL_BUDGET,
        ..opts()
    };
    let all = match enumerate_cocycles(level, s, nerve, &full) {
        Err(Error::Budget { .. }) => enumerate_cocycles(
            level,
            s,
            nerve,
            &SearchOptions {
                mode: Some(Mode::Normalized),
                budget: NORMALIZED_BUDGET,
                ..opts()
            },
        )?,
        r => r?,
    };
    let step = all.len().div_ceil(MAX_CLOSURE_INPUTS).max(1);
    Ok(all.into_iter().step_by(step).collect())
}

fn random_witness(c: &Cocycle, rng: &mut ChaCha8Rng) -> Result<Coboundary> {
    let s = c.structure();
    Coboundary::from_fn(c.level(), s.clone(), c.nerve().clone(), |k, _| {
        let slot: Slot = c.level().witness_components()[k].slot;
        rng.gen_range(0..s.group(slot).order())
    })
}

// ---------------------------------------------------------------- criteria

type Verdict = Result<(bool, String)>;

fn c1_axiom_suite() -> Verdict {
    let (mut pairs, mut valid, mut mutations, mut detected) = (0, 0, 0, 0);
    for (_, g) in corpus::small_groups() {
        let table = g.table_rows();
        for a in g.elements() {
            for b in g.elements() {
                for v in g.elements().filter(|&v| v != table[a][b]) {
                    let mut t = table.clone();
                    t[a][b] = v;
                    mutations += 1;
                    if !verify_group(&t)?.is_valid() {
                        detected += 1;
                    }
                }
            }
        }
        for n in g.normal_subgroups() {
            let elems: Vec<usize> = g.elements().filter(|&x| n.contains(x)).collect();
            let c = CrossedModule::conjugation(&g, &elems)?;
            pairs += 1;
            if cm_verify(&c).is_valid() {
                valid += 1;
            }
            let rows = c.action().rows();
            for x in 0..rows.len() {
                for y in 0..rows[x].len() {
                    for v in c.l().elements().filter(|&v| v != rows[x][y]) {
                        let mut r = rows.clone();
                        r[x][y] = v;
                        mutations += 1;
                        match GroupAction::new(c.m().clone(), c.l().clone(), r)
                            .and_then(|act| CrossedModule::new(c.d1().clone(), act))
                        {
                            Ok(m) if cm_verify(&m).is_valid() => {}
                            _ => detected += 1,
                        }
                    }
                }
            }
        }
    }
    Ok((
        valid == pairs && detected == mutations,
        format!("{valid}/{pairs} conjugation crossed modules valid, {detected}/{mutations} single-entry mutations detected"),
    ))
}

fn c2_conduche() -> Verdict {
    let (mut total, mut ok) = (0, 0);
    for t in corpus::two_crossed_modules() {
        if !tcm_verify(&t.tcm).is_valid() {
            continue;
        }
        total += 1;
        let act = tcm_derived_action(&t.tcm)?;
        if action_verify(&act).is_valid() && cm_verify(&CrossedModule::new(t.tcm.d1().clone(), act)?).is_valid() {
            ok += 1;
        }
    }
    Ok((ok == total && total > 0, format!("{ok}/{total} derived crossed modules valid")))
}

fn c3_class_counts() -> Verdict {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let cases: [(Level, Structure, Arc<Nerve>, usize, usize); 3] = [
        (Level::Bundle1, crossed(CrossedModule::abelian(&z2)), triangle(), 1, H1_CIRCLE),
        (Level::Gerbe2, crossed(CrossedModule::abelian(&z2)), tetrahedron(), 2, H2_SPHERE),
        (
            Level::TwoGerbe3,
            Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&z2))),
            sphere(3),
            3,
            H3_SPHERE,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (level, s, nerve, k, expected) in cases {
        let oracle = 1usize << f2_cohomology_dim(&nerve, k);
        let got = enumerate_classes(level, &s, &nerve, &opts())?.len();
        ok &= got == oracle && oracle == expected;
        parts.push(format!("{level} {got} (oracle {oracle})"));
    }
    Ok((ok, parts.join(", ")))
}

fn c4_nonabelian_count() -> Verdict {
    let s3 = corpus::s3();
    let oracle = conjugacy_classes(&s3);
    let got = enumerate_classes(Level::Gerbe2, &top(&s3), &triangle(), &opts())?.len();
    Ok((
        got == oracle && oracle == S3_CONJUGACY_CLASSES,
        format!("gerbe2 over 1 -> S3 on the triangle: {got} classes (orbit count {oracle})"),
    ))
}

fn group_of_classes(table: &ClassTable, all: &[Cocycle]) -> Result<(bool, String)> {
    let Some(prod) = &table.product_table else {
        return Ok((false, "no product table".into()));
    };
    let group_ok = verify_group(prod)?.is_valid();
    let trivial = Cocycle::trivial(table.level, table.structure.clone(), table.nerve.clone())?;
    let e = class_of(&trivial, table)?;
    let identity_ok = (0..prod.len()).all(|x| prod[e][x] == x && prod[x][e] == x);
    let mut inverse_ok = true;
    for c in all {
        let k = class_of(c, table)?;
        let ki = class_of(&inverse(c)?, table)?;
        inverse_ok &= prod[k][ki] == e;
    }
    Ok((
        group_ok && identity_ok && inverse_ok,
        format!("{} classes, {} inverses", table.len(), all.len()),
    ))
}

fn c5_group_of_classes() -> Verdict {
    let chain = Structure::TwoCrossed(corpus::two_crossed_module("chain-z2-z4-z2").unwrap());
    let cases = [
        (Level::Bundle1, crossed(corpus::a3_in_s3())),
        (Level::TcmGerbe2, chain),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (level, s) in cases {
        let table = enumerate_classes(level, &s, &triangle(), &opts())?;
        let all = enumerate_cocycles(level, &s, &triangle(), &opts())?;
        let (pass, detail) = group_of_classes(&table, &all)?;
        ok &= pass;
        parts.push(format!("{level}: {detail}"));
    }
    Ok((ok, parts.join(", ")))
}

fn c6_closure() -> Verdict {
    let s3 = corpus::s3();
    let all: Vec<usize> = s3.elements().collect();
    let mut cases: Vec<(Level, Structure)> = vec![
        (Level::Bundle1, crossed(corpus::a3_in_s3())),
        (Level::Bundle1, crossed(CrossedModule::conjugation(&s3, &all)?)),
        (Level::Gerbe2, crossed(corpus::a3_in_s3())),
        (Level::Gerbe2, crossed(corpus::z2_in_z4())),
        (Level::Gerbe2, top(&s3)),
    ];
    let mut large = Vec::new();
    for t in corpus::two_crossed_modules() {
        let s = Structure::TwoCrossed(t.tcm);
        if t.name.starts_with(TETRAHEDRON_EXCLUDED) {
            large.push((Level::TcmGerbe2, s));
        } else {
            cases.push((Level::TcmGerbe2, s));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut checked, mut failures) = (0usize, Vec::new());
    let on_triangle: Vec<_> = cases.iter().chain(&large).collect();
    let on_tetrahedron: Vec<_> = cases.iter().collect();
    for (nerve, cases) in [(triangle(), on_triangle), (tetrahedron(), on_tetrahedron)] {
        for (level, s) in cases {
            let level = *level;
            let inputs = closure_inputs(level, s, &nerve)?;
            for (i, c) in inputs.iter().enumerate() {
                if product_supported(level, s) {
                    for _ in 0..PARTNERS {
                        let d = &inputs[rng.gen_range(0..inputs.len())];
                        checked += 1;
                        if let Err(e) = product(c, d) {
                            failures.push(format!("{level} product #{i}: {e}"));
                        }
                    }
                }
                for _ in 0..WITNESSES {
                    let w = random_witness(c, &mut rng)?;
                    checked += 1;
                    if let Err(e) = apply_coboundary(c, &w) {
                        failures.push(format!("{level} coboundary #{i}: {e}"));
                    }
                }
            }
        }
    }
    let f = Formulas::ADOPTED;
    Ok((
        failures.is_empty(),
        format!(
            "{}/{checked} outputs valid; readings bundle product {:?}, bundle coboundary {:?}, tcm product {:?}, tcm inverse {:?}{}",
            checked - failures.len(),
            f.bundle_product,
            f.bundle_coboundary,
            f.tcm_product,
            f.tcm_inverse,
            failures.first().map(|x| format!("; first failure {x}")).unwrap_or_default()
        ),
    ))
}

/// Lifts every input, checks the roundtrip, and checks that inputs in one
/// class have equivalent lifts.
fn roundtrip(
    inputs: &[Cocycle],
    lift: impl Fn(&Cocycle) -> Result<Cocycle>,
    descend: impl Fn(&Cocycle) -> Result<Cocycle>,
    equivalent_lifts: impl Fn(&Cocycle, &Cocycle) -> Result<bool>,
) -> Result<(usize, bool, bool)> {
    let lifts = inputs.iter().map(&lift).collect::<Result<Vec<_>>>()?;
    let mut identity = true;
    for (c, l) in inputs.iter().zip(&lifts) {
        identity &= descend(l)? == *c;
    }
    let (reps, class) = partition(inputs, &opts())?;
    let mut respects = true;
    for (i, l) in lifts.iter().enumerate() {
        respects &= equivalent_lifts(&lifts[reps[class[i]]], l)?;
    }
    Ok((inputs.len(), identity, respects))
}

fn c7_lifting() -> Verdict {
    let eq = |a: &Cocycle, b: &Cocycle| Ok(equivalent(a, b)?.is_some());
    let mut parts = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, r: (usize, bool, bool)| {
        ok &= r.1 && r.2 && r.0 > 0;
        parts.push(format!("{name} {} inputs", r.0));
    };
    for name in ["a3-in-s3", "z2-in-z4"] {
        let ctx = NormalContext::new(corpus::crossed_module(name).unwrap())?;
        for nerve in [triangle(), tetrahedron()] {
            let functions = enumerate_cocycles(Level::Bundle1, &top(&ctx.g), &nerve, &opts())?;
            record(
                "bundle1",
                roundtrip(&functions, |c| lift_function_to_bundle(&ctx, c), |c| ctx.descend(c), eq)?,
            );
        }
        let bundles = enumerate_cocycles(Level::Gerbe2, &top(&ctx.g), &triangle(), &opts())?;
        record(
            "gerbe2",
            roundtrip(&bundles, |c| lift_bundle_to_gerbe(&ctx, c), |c| ctx.descend(c), eq)?,
        );
    }
    for name in ["chain-z2-z4-z2", "a3-s3-z4"] {
        let ctx = ExtensionContext::new(corpus::two_crossed_module(name).unwrap())?;
        let s = Structure::Crossed(ctx.gn.clone());
        let inputs = enumerate_cocycles(Level::Bundle1, &s, &triangle(), &opts())?;
        record(
            "tcm-gerbe2",
            roundtrip(&inputs, |c| lift_to_tcm_gerbe(&ctx, c), |c| ctx.descend_tcm_gerbe(c), eq)?,
        );
    }
    let ctx = ExtensionContext::new(corpus::two_crossed_module("a3-s3-z4").unwrap())?;
    for nerve in [triangle(), sphere(3)] {
        let inputs = enumerate_cocycles(Level::Gerbe2, &top(&ctx.q), &nerve, &opts())?;
        let shadow_eq = |a: &Cocycle, b: &Cocycle| Ok(equivalent(&ctx.shadow(a)?, &ctx.shadow(b)?)?.is_some());
        record(
            "two-gerbe3",
            roundtrip(&inputs, |c| lift_bundle_to_two_gerbe(&ctx, c), |c| ctx.descend_two_gerbe(c), shadow_eq)?,
        );
    }
    for name in ["z4-doubling", "z2-zero-map"] {
        let ctx = TwistContext::new(corpus::crossed_module(name).unwrap())?;
        let inputs = enumerate_cocycles(Level::Gerbe2, &top(&ctx.q), &tetrahedron(), &opts())?;
        let lift = |c: &Cocycle| -> Result<Cocycle> {
            lift_through_twist(&ctx, c)?.map_err(|_| Error::Invariant {
                what: "obstruction nontrivial on a sphere".into(),
                witness: Vec::new(),
            })
        };
        record("twist", roundtrip(&inputs, lift, |c| ctx.descend(c), eq)?);
    }
    Ok((ok, parts.join(", ")))
}

fn c8_obstructions() -> Verdict {
    let (mut computed, mut line3, mut section, mut torsor) = (0, true, true, true);
    let mut torsor_detail = String::new();
    for name in ["z4-doubling", "z2-zero-map"] {
        let ctx = TwistContext::new(corpus::crossed_module(name).unwrap())?;
        let alt = ctx
            .clone()
            .with_sections(greatest_section(&ctx.pi2), greatest_section(ctx.cm.d1()))?;
        for nerve in [tetrahedron(), sphere(3)] {
            for q in enumerate_cocycles(Level::Gerbe2, &top(&ctx.q), &nerve, &opts())? {
                let a = compute_obstruction(&ctx, &q)?.obstruction;
                let b = compute_obstruction(&alt, &q)?.obstruction;
                computed += 2;
                line3 &= verify_obstruction(&a).is_valid() && verify_obstruction(&b).is_valid();
                let g = a.group().clone();
                let diff: Vec<usize> = a.values().iter().zip(b.values()).map(|(&x, &y)| g.mul(x, g.inv(y))).collect();
                let diff = AbelianObstruction::new(g, nerve.clone(), diff)?;
                section &= obstruction_is_trivial(&diff)?.is_some();
            }
        }
    }
    let ctx = TwistContext::new(corpus::crossed_module("z4-doubling").unwrap())?;
    let qs = enumerate_cocycles(Level::Gerbe2, &top(&ctx.q), &tetrahedron(), &opts())?;
    let mut checked = 0;
    for q in qs.iter().step_by(qs.len().div_ceil(4).max(1)) {
        let r = torsor_check(&ctx, q, &opts())?;
        torsor &= r.holds() && r.group_order == H2_SPHERE && r.lift_classes == r.group_order;
        torsor_detail = format!("{} lifts in {} classes, class group order {}", r.lifts, r.lift_classes, r.group_order);
        checked += 1;
    }
    Ok((
        line3 && section && torsor,
        format!("{computed} obstructions satisfy the cocycle relation: {line3}; section changes are coboundaries: {section}; torsor on {checked} bundles ({torsor_detail}): {torsor}"),
    ))
}

fn c9_refinement() -> Verdict {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let cases = [
        (Level::Bundle1, crossed(CrossedModule::abelian(&z2))),
        (Level::Bundle1, crossed(corpus::a3_in_s3())),
        (Level::Gerbe2, top(&z2)),
        (Level::Gerbe2, top(&corpus::s3())),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (level, s) in cases {
        let a = enumerate_classes(level, &s, &triangle(), &opts())?.len();
        let b = enumerate_classes(level, &s, &hexagon(), &opts())?.len();
        ok &= a == b;
        parts.push(format!("{level} {a}/{b}"));
    }
    Ok((ok, format!("triangle/hexagon class counts {}", parts.join(", "))))
}

fn c10_determinism() -> Verdict {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let cases = [
        (Level::Bundle1, crossed(corpus::a3_in_s3()), triangle()),
        (Level::Gerbe2, top(&corpus::s3()), triangle()),
        (Level::Gerbe2, crossed(CrossedModule::abelian(&z2)), tetrahedron()),
        (
            Level::TcmGerbe2,
            Structure::TwoCrossed(corpus::two_crossed_module("chain-z2-z4-z2").unwrap()),
            triangle(),
        ),
    ];
    let mut ok = true;
    for (level, s, nerve) in &cases {
        let texts: Vec<String> = [1, 4, 1, 4]
            .into_iter()
            .map(|workers| {
                let o = SearchOptions { workers, ..opts() };
                Ok(serialize(&Document::ClassTable(enumerate_classes(*level, s, nerve, &o)?)))
            })
            .collect::<Result<_>>()?;
        ok &= texts.windows(2).all(|w| w[0] == w[1]);
    }
    Ok((ok, format!("{} class tables byte-identical over workers 1,4,1,4", cases.len())))
}

type Criterion = (&'static str, fn() -> Verdict, Duration);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", c1_axiom_suite, TIME_LIMIT),
        ("conduche property", c2_conduche, TIME_LIMIT),
        ("class counts vs F2 oracle", c3_class_counts, CLASS_COUNT_TIME_LIMIT),
        ("nonabelian count", c4_nonabelian_count, TIME_LIMIT),
        ("group of classes", c5_group_of_classes, TIME_LIMIT),
        ("closure", c6_closure, TIME_LIMIT),
        ("lifting roundtrips", c7_lifting, TIME_LIMIT),
        ("obstruction suite", c8_obstructions, TIME_LIMIT),
        ("refinement invariance", c9_refinement, TIME_LIMIT),
        ("determinism", c10_determinism, TIME_LIMIT),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let pass = pass && elapsed <= limit;
        let line = format!(
            "criterion {:>2} {}: {name}: {detail} [{:.1}s, limit {}s]\n",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        // Bypasses test output capture.
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
