//! Adjudication of formula readings by the closure oracle: a reading is
//! acceptable when products, inverses and coboundary actions of valid data
//! are again valid.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{enumerate_cocycles, Mode, SearchOptions};
use crate::cocycle::{
    apply_coboundary_with, inverse_with, product_with, Coboundary, Cocycle, Formulas, Level, Slot, Structure, Variant,
};
use crate::corpus;
use crate::crossed::{select_peiffer_form, CrossedModule, PeifferForm};
use crate::error::{Error, Result};
use crate::nerve::Nerve;

/// Outcome of running one reading over a batch of inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub checked: usize,
    /// First failure: input description and the violated relation.
    pub failure: Option<String>,
}

impl Closure {
    pub fn closes(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "closes ({} checks)", self.checked),
            Some(w) => write!(f, "fails ({w})"),
        }
    }
}

/// Verdict on one formula.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub formula: &'static str,
    pub printed: Closure,
    /// `None` when no correction was needed.
    pub corrected: Option<Closure>,
    pub selected: Variant,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: printed {}", self.formula, self.printed)?;
        if let Some(c) = &self.corrected {
            write!(f, "; corrected {c}")?;
        }
        let sel = match self.selected {
            Variant::Printed => "printed",
            Variant::Corrected => "corrected",
        };
        write!(f, "; selected {sel}")
    }
}

/// Full adjudication: the axiom (v) reading and one verdict per formula.
#[derive(Clone, Debug)]
pub struct Adjudication {
    pub peiffer_forms: Vec<PeifferForm>,
    pub verdicts: Vec<Verdict>,
}

impl Adjudication {
    /// The formula readings selected by the oracle.
    pub fn formulas(&self) -> Formulas {
        let pick = |name: &str| {
            self.verdicts
                .iter()
                .find(|v| v.formula == name)
                .map_or(Variant::Corrected, |v| v.selected)
        };
        Formulas {
            bundle_product: pick("bundle1 product"),
            bundle_coboundary: pick("bundle1 coboundary"),
            tcm_product: pick("tcm-gerbe2 product"),
            tcm_inverse: pick("tcm-gerbe2 inverse"),
        }
    }
}

impl fmt::Display for Adjudication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.peiffer_forms {
            writeln!(f, "axiom v: {p}")?;
        }
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn first_failure<T: Sync>(items: &[T], run: impl Fn(&T) -> Result<Cocycle> + Sync) -> Result<Closure> {
    let outcomes: Vec<Option<String>> = items
        .par_iter()
        .map(|x| match run(x) {
            Ok(_) => Ok(None),
            Err(Error::Invariant { what, witness }) => Ok(Some(format!("{what} at {witness:?}"))),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(Closure {
        checked: items.len(),
        failure: outcomes.into_iter().flatten().next(),
    })
}

fn verdict(formula: &'static str, printed: Closure, corrected: impl FnOnce() -> Result<Closure>) -> Result<Verdict> {
    if printed.closes() {
        return Ok(Verdict {
            formula,
            printed,
            corrected: None,
            selected: Variant::Printed,
        });
    }
    let c = corrected()?;
    if !c.closes() {
        return Err(Error::Invariant {
            what: format!("no reading of the {formula} closes: {}", c.failure.unwrap_or_default()),
            witness: Vec::new(),
        });
    }
    Ok(Verdict {
        formula,
        printed,
        corrected: Some(c),
        selected: Variant::Corrected,
    })
}

fn with(base: Formulas, edit: impl FnOnce(&mut Formulas)) -> Formulas {
    let mut f = base;
    edit(&mut f);
    f
}

/// Every ordered pair when there are few, otherwise each cocycle with a
/// fixed number of seeded partners.
fn pairs(cs: &[Cocycle], seed: u64) -> Vec<(&Cocycle, &Cocycle)> {
    if cs.len() * cs.len() <= MAX_PAIRS {
        return cs.iter().flat_map(|a| cs.iter().map(move |b| (a, b))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cs.iter()
        .flat_map(|a| {
            (0..PARTNERS)
                .map(|_| (a, &cs[rng.gen_range(0..cs.len())]))
                .collect::<Vec<_>>()
        })
        .collect()
}

const MAX_PAIRS: usize = 250_000;
const PARTNERS: usize = 16;
const MAX_INPUTS: usize = 4000;
const FULL_MODE_BUDGET: u64 = 2_000_000;

/// Cocycles in full mode when affordable, otherwise normalized; thinned
/// evenly to at most [`MAX_INPUTS`].
fn inputs(level: Level, s: &Structure, nerve: &Arc<Nerve>, opts: &SearchOptions) -> Result<Vec<Cocycle>> {
    let full = SearchOptions {
        mode: Some(Mode::Full),
        budget: FULL_MODE_BUDGET.min(opts.budget),
        ..*opts
    };
    let all = match enumerate_cocycles(level, s, nerve, &full) {
        Err(Error::Budget { .. }) => enumerate_cocycles(
            level,
            s,
            nerve,
            &SearchOptions {
                mode: Some(Mode::Normalized),
                ..*opts
            },
        )?,
        r => r?,
    };
    let step = all.len().div_ceil(MAX_INPUTS).max(1);
    Ok(all.into_iter().step_by(step).collect())
}

/// Inputs for the crossed-module level: `A₃ ↪ S₃` and `S₃ → S₃` on the
/// triangle.
fn bundle_inputs(opts: &SearchOptions) -> Result<Vec<Vec<Cocycle>>> {
    let s3 = corpus::s3();
    let all: Vec<usize> = s3.elements().collect();
    let nerve = Arc::new(Nerve::simplex_boundary(1)?);
    [corpus::a3_in_s3(), CrossedModule::conjugation(&s3, &all)?]
        .into_iter()
        .map(|c| inputs(Level::Bundle1, &Structure::Crossed(Arc::new(c)), &nerve, opts))
        .collect()
}

/// Every corpus 2-crossed module's `TcmGerbe2` cocycles on a filled
/// triangle. On the triangle boundary the two readings agree.
fn tcm_inputs(opts: &SearchOptions) -> Result<Vec<Vec<Cocycle>>> {
    let nerve = Arc::new(Nerve::full_simplex(2));
    corpus::two_crossed_modules()
        .into_iter()
        .map(|t| inputs(Level::TcmGerbe2, &Structure::TwoCrossed(t.tcm), &nerve, opts))
        .collect()
}

/// Random witnesses for each cocycle, from a fixed seed.
fn witnesses(c: &Cocycle, count: usize, seed: u64) -> Result<Vec<Coboundary>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = c.structure();
    (0..count)
        .map(|_| {
            Coboundary::from_fn(c.level(), s.clone(), c.nerve().clone(), |k, _| {
                let slot: Slot = c.level().witness_components()[k].slot;
                rng.gen_range(0..s.group(slot).order())
            })
        })
        .collect()
}

fn closure_of_products(sets: &[Vec<Cocycle>], f: Formulas) -> Result<Closure> {
    let all: Vec<(&Cocycle, &Cocycle)> = sets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| pairs(s, i as u64))
        .collect();
    first_failure(&all, |(a, b)| product_with(a, b, &f))
}

fn closure_of_inverses(sets: &[Vec<Cocycle>], f: Formulas) -> Result<Closure> {
    let all: Vec<&Cocycle> = sets.iter().flatten().collect();
    first_failure(&all, |a| inverse_with(a, &f))
}

fn closure_of_coboundaries(inputs: &[(Cocycle, Coboundary)], f: Formulas) -> Result<Closure> {
    first_failure(inputs, |(c, w)| apply_coboundary_with(c, w, &f))
}

/// Runs the closure oracle over the corpus and selects each reading:
/// the printed one when it closes, otherwise its index correction.
pub fn adjudicate(opts: &SearchOptions) -> Result<Adjudication> {
    let tcms: Vec<_> = corpus::two_crossed_modules()
        .into_iter()
        .map(|t| t.tcm.as_ref().clone())
        .collect();
    let peiffer_forms = select_peiffer_form(&tcms);

    let bundles = bundle_inputs(opts)?;
    let tcm = tcm_inputs(opts)?;
    let base = Formulas::ADOPTED;
    let mut verdicts = Vec::new();

    let printed = with(base, |f| f.bundle_product = Variant::Printed);
    verdicts.push(verdict("bundle1 product", closure_of_products(&bundles, printed)?, || {
        closure_of_products(&bundles, base)
    })?);

    let mut cob: Vec<(Cocycle, Coboundary)> = Vec::new();
    for (i, c) in bundles.iter().flatten().enumerate() {
        for w in witnesses(c, 8, i as u64)? {
            cob.push((c.clone(), w));
        }
    }
    let printed = with(base, |f| f.bundle_coboundary = Variant::Printed);
    verdicts.push(verdict("bundle1 coboundary", closure_of_coboundaries(&cob, printed)?, || {
        closure_of_coboundaries(&cob, base)
    })?);

    let printed = with(base, |f| f.tcm_product = Variant::Printed);
    verdicts.push(verdict("tcm-gerbe2 product", closure_of_products(&tcm, printed)?, || {
        closure_of_products(&tcm, base)
    })?);

    let printed = with(base, |f| f.tcm_inverse = Variant::Printed);
    verdicts.push(verdict("tcm-gerbe2 inverse", closure_of_inverses(&tcm, printed)?, || {
        closure_of_inverses(&tcm, base)
    })?);

    let mut cob: Vec<(Cocycle, Coboundary)> = Vec::new();
    for (i, c) in tcm.iter().flatten().enumerate() {
        for w in witnesses(c, 4, i as u64)? {
            cob.push((c.clone(), w));
        }
    }
    verdicts.push(verdict("tcm-gerbe2 coboundary", closure_of_coboundaries(&cob, base)?, || {
        unreachable!("no alternative reading")
    })?);

    let nerve = Arc::new(Nerve::simplex_boundary(2)?);
    let s = Structure::Crossed(Arc::new(corpus::a3_in_s3()));
    let trivial = Cocycle::trivial(Level::Gerbe2, s, nerve)?;
    let cob: Vec<(Cocycle, Coboundary)> = witnesses(&trivial, 64, 99)?
        .into_iter()
        .map(|w| (trivial.clone(), w))
        .collect();
    verdicts.push(verdict("gerbe2 coboundary", closure_of_coboundaries(&cob, base)?, || {
        unreachable!("no alternative reading")
    })?);

    Ok(Adjudication {
        peiffer_forms,
        verdicts,
    })
}
