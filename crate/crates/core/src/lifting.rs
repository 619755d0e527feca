//! Lifting constructions along exact sequences, and the abelian obstruction
//! to lifting a quotient bundle through a crossed module.
//!
//! Every "choose a lift" step goes through a section fixed once per context:
//! the least preimage of each element, with `e ↦ e`. Sections can be
//! replaced; class-level results do not depend on the choice.

use std::sync::Arc;

use crate::classify::{enumerate_classes, enumerate_cocycles, partition, EquivalenceSearch, Mode, SearchOptions};
use crate::cocycle::{
    change_structure, collapse_l, collapse_to_quotient, tcm_gerbe_as_bundle, two_gerbe_as_gerbe, verify,
    verify_obstruction, AbelianObstruction, Cocycle, Level, Morphism, Structure,
};
use crate::corpus::with_forced_lifting;
use crate::crossed::{tcm_induced_quotient_cm, tcm_verify, CrossedModule, CrossedModuleMorphism, TwoCrossedModule};
use crate::error::{invariant, structural, Error, Result};
use crate::group::{embedding, image, kernel, quotient, FiniteGroup, GroupAction, GroupHom};
use crate::nerve::Nerve;
use crate::search::budget_from_env;

const NONE: usize = usize::MAX;

/// Least preimage of every element of the target, `NONE` outside the
/// image, and `e ↦ e`.
pub fn least_section(h: &GroupHom) -> Vec<usize> {
    let mut s = vec![NONE; h.target.order()];
    for x in h.source.elements() {
        let y = h.apply(x);
        if s[y] == NONE {
            s[y] = x;
        }
    }
    s[h.target.identity()] = h.source.identity();
    s
}

/// Greatest preimage of every element, `e ↦ e`. An alternative to
/// [`least_section`] for section-independence checks.
pub fn greatest_section(h: &GroupHom) -> Vec<usize> {
    let mut s = vec![NONE; h.target.order()];
    for x in h.source.elements() {
        s[h.apply(x)] = x;
    }
    s[h.target.identity()] = h.source.identity();
    s
}

/// Checks that `s` is a right inverse of `h` on its image, with `e ↦ e`.
fn check_section(h: &GroupHom, s: &[usize], what: &str) -> Result<()> {
    if s.len() != h.target.order() {
        return Err(structural(format!("{what}: one entry per element expected")));
    }
    let im = image(h);
    for (y, &x) in s.iter().enumerate() {
        let ok = if im.contains(y) {
            x < h.source.order() && h.apply(x) == y
        } else {
            x == NONE
        };
        if !ok {
            return Err(invariant(format!("{what} is not a section"), &[y]));
        }
    }
    if s[h.target.identity()] != h.source.identity() {
        return Err(invariant(format!("{what} does not fix the identity"), &[]));
    }
    Ok(())
}

/// Inverse of an injective hom on its image, `NONE` elsewhere.
fn inverse_on_image(h: &GroupHom, what: &str) -> Result<Vec<usize>> {
    let mut inv = vec![NONE; h.target.order()];
    for x in h.source.elements() {
        let y = h.apply(x);
        if inv[y] != NONE {
            return Err(invariant(format!("{what} is not injective"), &[inv[y], x]));
        }
        inv[y] = x;
    }
    Ok(inv)
}

fn pick(table: &[usize], v: usize, what: &str, t: &[usize]) -> Result<usize> {
    match table[v] {
        NONE => Err(invariant(what, t)),
        x => Ok(x),
    }
}

/// Builds cocycle components from a fallible function of `(component, tuple)`.
fn try_build(
    level: Level,
    s: Structure,
    nerve: &Arc<Nerve>,
    f: impl Fn(usize, &[usize]) -> Result<usize>,
) -> Result<Cocycle> {
    let comps = level
        .components()
        .iter()
        .enumerate()
        .map(|(c, spec)| nerve.tuples(spec.arity).list.iter().map(|t| f(c, t)).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let out = Cocycle::new(level, s, nerve.clone(), comps)?;
    let r = verify(&out);
    match r.violations.first() {
        None => Ok(out),
        Some(v) => Err(invariant(format!("lifted cocycle fails {}", v.axiom), &v.witness)),
    }
}

/// Checks that `c` is a valid cocycle at `level` over `1 → g`.
fn expect_top(c: &Cocycle, level: Level, g: &Arc<FiniteGroup>) -> Result<()> {
    let ok = matches!(c.structure(), Structure::Crossed(cm) if cm.l().is_trivial() && **cm.m() == **g);
    if c.level() != level || !ok {
        return Err(structural(format!("expected a {level} cocycle over 1 → G with |G| = {}", g.order())));
    }
    not_liftable_unless_valid(c)
}

fn not_liftable_unless_valid(c: &Cocycle) -> Result<()> {
    let r = verify(c);
    match r.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::NotLiftable {
            what: format!("input fails {}", v.axiom),
            witness: v.witness.clone(),
        }),
    }
}

/// A crossed module `L → M` with injective boundary, and `G = M/∂1(L)`.
#[derive(Clone, Debug)]
pub struct NormalContext {
    pub cm: Arc<CrossedModule>,
    pub g: Arc<FiniteGroup>,
    pub pi: GroupHom,
    pub section: Vec<usize>,
    d1_inv: Vec<usize>,
}

impl NormalContext {
    pub fn new(cm: Arc<CrossedModule>) -> Result<Self> {
        let d1_inv = inverse_on_image(cm.d1(), "boundary map")?;
        let (g, pi) = quotient(cm.m(), &image(cm.d1()))?;
        let section = least_section(&pi);
        Ok(Self {
            cm,
            g,
            pi,
            section,
            d1_inv,
        })
    }

    /// Replaces the section of `π: M → G`.
    pub fn with_section(mut self, section: Vec<usize>) -> Result<Self> {
        check_section(&self.pi, &section, "section of the projection")?;
        self.section = section;
        Ok(self)
    }

    /// `(L → M) → (1 → G)`.
    pub fn collapse(&self) -> CrossedModuleMorphism {
        collapse_to_quotient(&self.cm, &self.pi)
    }

    /// Maps a cocycle over `L → M` down to `1 → G`.
    pub fn descend(&self, c: &Cocycle) -> Result<Cocycle> {
        change_structure(c, &Morphism::Crossed(self.collapse()))
    }
}

/// Lifts a locally constant `G`-valued function (a `Bundle1` cocycle over
/// `1 → G`) to a `Bundle1` cocycle over `L → M`.
pub fn lift_function_to_bundle(ctx: &NormalContext, g: &Cocycle) -> Result<Cocycle> {
    expect_top(g, Level::Bundle1, &ctx.g)?;
    let m = ctx.cm.m();
    let mi = |i: usize| ctx.section[g.get(0, &[i])];
    try_build(Level::Bundle1, Structure::Crossed(ctx.cm.clone()), g.nerve(), |c, t| match c {
        0 => Ok(mi(t[0])),
        _ => pick(
            &ctx.d1_inv,
            m.mul(mi(t[0]), m.inv(mi(t[1]))),
            "m_i m_j⁻¹ outside the image of the boundary",
            t,
        ),
    })
}

/// Lifts a `G`-bundle (a `Gerbe2` cocycle over `1 → G`) to a `Gerbe2`
/// cocycle over `L → M`.
pub fn lift_bundle_to_gerbe(ctx: &NormalContext, g: &Cocycle) -> Result<Cocycle> {
    expect_top(g, Level::Gerbe2, &ctx.g)?;
    let m = ctx.cm.m();
    let mij = |i: usize, j: usize| ctx.section[g.get(0, &[i, j])];
    try_build(Level::Gerbe2, Structure::Crossed(ctx.cm.clone()), g.nerve(), |c, t| match c {
        0 => Ok(mij(t[0], t[1])),
        _ => {
            let (i, j, k) = (t[0], t[1], t[2]);
            let v = m.prod(&[mij(i, j), mij(j, k), m.inv(mij(i, k))]);
            pick(&ctx.d1_inv, v, "m_ij m_jk m_ik⁻¹ outside the image of the boundary", t)
        }
    })
}

/// A 2-crossed module `L → M → N` with `ker ∂1 = 1` and `ker ∂2 = im ∂1`,
/// with `G = M/∂1(L)` and `Q = N/∂2(M)`.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    pub tcm: Arc<TwoCrossedModule>,
    pub g: Arc<FiniteGroup>,
    pub q: Arc<FiniteGroup>,
    pub pi1: GroupHom,
    pub pi2: GroupHom,
    /// The crossed module `G → N` with the induced boundary `∂2′`.
    pub gn: Arc<CrossedModule>,
    pub section_pi1: Vec<usize>,
    pub section_pi2: Vec<usize>,
    /// Preimages under `∂2` of elements of its image, `NONE` elsewhere.
    pub section_d2: Vec<usize>,
    d1_inv: Vec<usize>,
}

impl ExtensionContext {
    pub fn new(tcm: Arc<TwoCrossedModule>) -> Result<Self> {
        let d1_inv = inverse_on_image(tcm.d1(), "∂1")?;
        let (k2, i1) = (kernel(tcm.d2()), image(tcm.d1()));
        if k2 != i1 {
            let w: Vec<usize> = k2.elements.iter().copied().filter(|x| !i1.contains(*x)).collect();
            return Err(invariant("ker ∂2 differs from im ∂1", &w));
        }
        let (g, pi1) = quotient(tcm.m(), &i1)?;
        let gn = Arc::new(tcm_induced_quotient_cm(&tcm)?);
        if **gn.l() != *g {
            return Err(invariant("induced crossed module is not over M/∂1(L)", &[]));
        }
        for x in tcm.m().elements() {
            if gn.bd(pi1.apply(x)) != tcm.d2().apply(x) {
                return Err(invariant("∂2′π1 differs from ∂2", &[x]));
            }
        }
        let (q, pi2) = quotient(tcm.n(), &image(tcm.d2()))?;
        let ctx = Self {
            section_pi1: least_section(&pi1),
            section_pi2: least_section(&pi2),
            section_d2: least_section(tcm.d2()),
            tcm,
            g,
            q,
            pi1,
            pi2,
            gn,
            d1_inv,
        };
        Ok(ctx)
    }

    /// Replaces the sections of `π1`, `π2` and `∂2`.
    pub fn with_sections(mut self, pi1: Vec<usize>, pi2: Vec<usize>, d2: Vec<usize>) -> Result<Self> {
        check_section(&self.pi1, &pi1, "section of π1")?;
        check_section(&self.pi2, &pi2, "section of π2")?;
        check_section(self.tcm.d2(), &d2, "section of ∂2")?;
        self.section_pi1 = pi1;
        self.section_pi2 = pi2;
        self.section_d2 = d2;
        Ok(self)
    }

    /// `(L → M → N) → (1 → G → N)`.
    pub fn collapse(&self) -> Morphism {
        Morphism::TwoCrossed(collapse_l(&self.tcm, &self.gn, &self.pi1))
    }

    /// Maps a `TcmGerbe2` cocycle down to a `Bundle1` cocycle over `G → N`.
    pub fn descend_tcm_gerbe(&self, c: &Cocycle) -> Result<Cocycle> {
        tcm_gerbe_as_bundle(&change_structure(c, &self.collapse())?)
    }

    /// Maps a `TwoGerbe3` cocycle down to a `Gerbe2` cocycle over `G → N`.
    pub fn shadow(&self, c: &Cocycle) -> Result<Cocycle> {
        two_gerbe_as_gerbe(&change_structure(c, &self.collapse())?)
    }

    /// Maps a `TwoGerbe3` cocycle down to a `Gerbe2` cocycle over `1 → Q`.
    pub fn descend_two_gerbe(&self, c: &Cocycle) -> Result<Cocycle> {
        let shadow = self.shadow(c)?;
        let Structure::Crossed(gn) = shadow.structure() else {
            unreachable!()
        };
        change_structure(&shadow, &Morphism::Crossed(collapse_to_quotient(gn, &self.pi2)))
    }
}

/// Lifts a `Bundle1` cocycle over `G → N` to a `TcmGerbe2` cocycle over
/// `L → M → N`.
pub fn lift_to_tcm_gerbe(ctx: &ExtensionContext, p: &Cocycle) -> Result<Cocycle> {
    if p.level() != Level::Bundle1 || *p.structure() != Structure::Crossed(ctx.gn.clone()) {
        return Err(structural("expected a bundle1 cocycle over G → N"));
    }
    not_liftable_unless_valid(p)?;
    let m = ctx.tcm.m();
    let mij = |i: usize, j: usize| ctx.section_pi1[p.get(1, &[i, j])];
    try_build(Level::TcmGerbe2, Structure::TwoCrossed(ctx.tcm.clone()), p.nerve(), |c, t| match c {
        0 => Ok(p.get(0, t)),
        1 => Ok(mij(t[0], t[1])),
        _ => {
            let (i, j, k) = (t[0], t[1], t[2]);
            let v = m.prod(&[mij(i, j), mij(j, k), m.inv(mij(i, k))]);
            pick(&ctx.d1_inv, v, "m_ij m_jk m_ik⁻¹ outside the image of ∂1", t)
        }
    })
}

/// Lifts a `Q`-bundle (a `Gerbe2` cocycle over `1 → Q`) to a `TwoGerbe3`
/// cocycle over `L → M → N`.
pub fn lift_bundle_to_two_gerbe(ctx: &ExtensionContext, q: &Cocycle) -> Result<Cocycle> {
    expect_top(q, Level::Gerbe2, &ctx.q)?;
    let t2 = &ctx.tcm;
    let (m, n) = (t2.m(), t2.n());
    let nij = |i: usize, j: usize| ctx.section_pi2[q.get(0, &[i, j])];
    let mijk = |i: usize, j: usize, k: usize| -> Result<usize> {
        let v = n.prod(&[nij(i, j), nij(j, k), n.inv(nij(i, k))]);
        pick(&ctx.section_d2, v, "n_ij n_jk n_ik⁻¹ outside the image of ∂2", &[i, j, k])
    };
    try_build(Level::TwoGerbe3, Structure::TwoCrossed(t2.clone()), q.nerve(), |c, t| match c {
        0 => Ok(nij(t[0], t[1])),
        1 => mijk(t[0], t[1], t[2]),
        _ => {
            let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
            let acted = t2.nm(nij(i, j), mijk(j, k, p)?);
            let v = m.prod(&[mijk(i, j, k)?, mijk(i, k, p)?, m.inv(mijk(i, j, p)?), m.inv(acted)]);
            pick(&ctx.d1_inv, v, "m-relation defect outside the image of ∂1", t)
        }
    })
}

/// A crossed module `δ: L → M` with `A = ker δ` abelian, central and fixed
/// by `M`, seen as the 2-crossed module `A → L → M`.
#[derive(Clone, Debug)]
pub struct TwistContext {
    pub cm: Arc<CrossedModule>,
    pub a: Arc<FiniteGroup>,
    /// `∂: A → L`.
    pub inclusion: GroupHom,
    pub tcm: Arc<TwoCrossedModule>,
    /// `G = L/A`.
    pub g: Arc<FiniteGroup>,
    pub pi1: GroupHom,
    /// `Q = M/δ(L)`.
    pub q: Arc<FiniteGroup>,
    pub pi2: GroupHom,
    pub section_pi2: Vec<usize>,
    /// Preimages under `δ` of elements of its image, `NONE` elsewhere.
    pub section_delta: Vec<usize>,
    incl_inv: Vec<usize>,
}

impl TwistContext {
    pub fn new(cm: Arc<CrossedModule>) -> Result<Self> {
        let (l, m) = (cm.l(), cm.m());
        let k = kernel(cm.d1());
        let (a, inclusion) = embedding(l, &k)?;
        if !a.is_abelian() {
            return Err(invariant("ker δ is not abelian", &k.elements));
        }
        for &x in &k.elements {
            if let Some(y) = l.elements().find(|&y| l.mul(x, y) != l.mul(y, x)) {
                return Err(invariant("ker δ is not central", &[x, y]));
            }
            if let Some(g) = m.elements().find(|&g| cm.act(g, x) != x) {
                return Err(invariant("M acts nontrivially on ker δ", &[g, x]));
            }
        }
        let act_a = GroupAction::trivial(m, &a);
        let tcm = with_forced_lifting(inclusion.clone(), cm.d1().clone(), cm.action().clone(), act_a)?;
        let r = tcm_verify(&tcm);
        if let Some(v) = r.violations.first() {
            return Err(invariant(format!("A → L → M fails {}", v.axiom), &v.witness));
        }
        let (g, pi1) = quotient(l, &k)?;
        let (q, pi2) = quotient(m, &image(cm.d1()))?;
        let incl_inv = inverse_on_image(&inclusion, "inclusion of ker δ")?;
        Ok(Self {
            section_pi2: least_section(&pi2),
            section_delta: least_section(cm.d1()),
            cm,
            a,
            inclusion,
            tcm: Arc::new(tcm),
            g,
            pi1,
            q,
            pi2,
            incl_inv,
        })
    }

    /// Replaces the sections of `π2` and `δ`.
    pub fn with_sections(mut self, pi2: Vec<usize>, delta: Vec<usize>) -> Result<Self> {
        check_section(&self.pi2, &pi2, "section of π2")?;
        check_section(self.cm.d1(), &delta, "section of δ")?;
        self.section_pi2 = pi2;
        self.section_delta = delta;
        Ok(self)
    }

    /// `(L → M) → (1 → Q)`.
    pub fn collapse(&self) -> CrossedModuleMorphism {
        collapse_to_quotient(&self.cm, &self.pi2)
    }

    /// Maps a `Gerbe2` cocycle over `L → M` down to `1 → Q`.
    pub fn descend(&self, c: &Cocycle) -> Result<Cocycle> {
        change_structure(c, &Morphism::Crossed(self.collapse()))
    }
}

/// Any of the lifting contexts.
#[derive(Clone, Debug)]
pub enum Context {
    Normal(NormalContext),
    Extension(ExtensionContext),
    Twist(TwistContext),
}

impl Context {
    pub fn kind(&self) -> &'static str {
        match self {
            Context::Normal(_) => "normal",
            Context::Extension(_) => "extension",
            Context::Twist(_) => "twist",
        }
    }
}

/// Lift data for a `Q`-bundle together with its obstruction.
#[derive(Clone, Debug)]
pub struct Obstruction {
    /// `(m_ij, l_ijk, a_ijkl)` as a `TwoGerbe3` cocycle over `A → L → M`.
    pub lift: Cocycle,
    pub obstruction: AbelianObstruction,
}

/// Chooses `m_ij` and `l_ijk` through the context sections and computes
/// the defect `a_ijkl` of the `l`-relation.
pub fn compute_obstruction(ctx: &TwistContext, q: &Cocycle) -> Result<Obstruction> {
    expect_top(q, Level::Gerbe2, &ctx.q)?;
    let (l, m) = (ctx.cm.l(), ctx.cm.m());
    let mij = |i: usize, j: usize| ctx.section_pi2[q.get(0, &[i, j])];
    let lijk = |i: usize, j: usize, k: usize| -> Result<usize> {
        let v = m.prod(&[mij(i, j), mij(j, k), m.inv(mij(i, k))]);
        pick(&ctx.section_delta, v, "m_ij m_jk m_ik⁻¹ outside the image of δ", &[i, j, k])
    };
    let lift = try_build(Level::TwoGerbe3, Structure::TwoCrossed(ctx.tcm.clone()), q.nerve(), |c, t| match c {
        0 => Ok(mij(t[0], t[1])),
        1 => lijk(t[0], t[1], t[2]),
        _ => {
            let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
            let acted = ctx.cm.act(mij(i, j), lijk(j, k, p)?);
            let v = l.prod(&[lijk(i, j, k)?, lijk(i, k, p)?, l.inv(l.mul(acted, lijk(i, j, p)?))]);
            pick(&ctx.incl_inv, v, "l-relation defect outside ker δ", t)
        }
    })?;
    let obstruction = AbelianObstruction::new(ctx.a.clone(), q.nerve().clone(), lift.components()[2].clone())?;
    let r = verify_obstruction(&obstruction);
    if let Some(v) = r.violations.first() {
        return Err(invariant(format!("obstruction fails {}", v.axiom), &v.witness));
    }
    Ok(Obstruction { lift, obstruction })
}

/// `ã` with `a_ijkl = ã_ijk ã_ikl ã_jkl⁻¹ ã_ijl⁻¹`, if the class of `o` is
/// trivial. Values are listed in the order of the nerve's 3-tuples.
pub fn obstruction_is_trivial(o: &AbelianObstruction) -> Result<Option<Vec<usize>>> {
    obstruction_is_trivial_with(o, budget_from_env())
}

pub fn obstruction_is_trivial_with(o: &AbelianObstruction, budget: u64) -> Result<Option<Vec<usize>>> {
    let source = o.as_two_gerbe();
    let target = Cocycle::trivial(source.level(), source.structure().clone(), source.nerve().clone())?;
    let Some(w) = EquivalenceSearch::new(&source, budget)?.find(&target)? else {
        return Ok(None);
    };
    let b = w.components()[0].clone();
    let (a, nerve) = (o.group(), o.nerve());
    let at = |t: &[usize]| b[nerve.position(t).expect("tuple supported")];
    for t in &nerve.tuples(4).list {
        let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
        let v = a.prod(&[at(&[i, j, k]), at(&[i, k, p]), a.inv(at(&[j, k, p])), a.inv(at(&[i, j, p]))]);
        if v != o.get(t) {
            return Err(invariant("trivializing data does not bound the obstruction", t));
        }
    }
    Ok(Some(b))
}

/// The gerbe `(m_ij, l_ijk ∂(ã_ijk)⁻¹)` over `L → M` obtained by twisting
/// the lift data with trivializing data `ã`.
pub fn twisted_gerbe(ctx: &TwistContext, o: &Obstruction, a_tilde: &[usize]) -> Result<Cocycle> {
    let nerve = o.lift.nerve();
    if a_tilde.len() != nerve.tuples(3).len() {
        return Err(structural("one value per 3-tuple expected"));
    }
    let l = ctx.cm.l();
    try_build(Level::Gerbe2, Structure::Crossed(ctx.cm.clone()), nerve, |c, t| match c {
        0 => Ok(o.lift.get(0, t)),
        _ => {
            let at = a_tilde[nerve.position(t).expect("tuple supported")];
            Ok(l.mul(o.lift.get(1, t), l.inv(ctx.inclusion.apply(at))))
        }
    })
}

/// Lifts a `Q`-bundle to a gerbe over `L → M`, or returns the nontrivial
/// obstruction.
pub fn lift_through_twist(ctx: &TwistContext, q: &Cocycle) -> Result<std::result::Result<Cocycle, Obstruction>> {
    let o = compute_obstruction(ctx, q)?;
    match obstruction_is_trivial(&o.obstruction)? {
        Some(b) => Ok(Ok(twisted_gerbe(ctx, &o, &b)?)),
        None => Ok(Err(o)),
    }
}

/// `(m_ij, l_ijk ∂(α_ijk))` for an `A`-valued gerbe `α` over `A → 1`.
pub fn twist_by(ctx: &TwistContext, c: &Cocycle, alpha: &Cocycle) -> Result<Cocycle> {
    if c.level() != Level::Gerbe2 || alpha.level() != Level::Gerbe2 || c.nerve() != alpha.nerve() {
        return Err(structural("twisting needs gerbe2 cocycles on one nerve"));
    }
    let l = ctx.cm.l();
    try_build(Level::Gerbe2, Structure::Crossed(ctx.cm.clone()), c.nerve(), |k, t| match k {
        0 => Ok(c.get(0, t)),
        _ => Ok(l.mul(c.get(1, t), ctx.inclusion.apply(alpha.get(1, t)))),
    })
}

/// Outcome of the torsor check for one `Q`-bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorReport {
    /// Normalized gerbes over `L → M` mapping exactly onto `q`.
    pub lifts: usize,
    pub lift_classes: usize,
    /// Order of the class group of `A`-valued gerbes.
    pub group_order: usize,
    /// `orbit[r][k]`: class of lift class `r` twisted by group class `k`.
    pub orbit: Vec<Vec<usize>>,
    /// Twisting is independent of the representative of a lift class.
    pub well_defined: bool,
    pub free: bool,
    pub transitive: bool,
}

impl TorsorReport {
    pub fn holds(&self) -> bool {
        self.lifts > 0 && self.well_defined && self.free && self.transitive
    }
}

/// Enumerates the normalized lifts of `q`, splits them into classes and
/// checks that the class group of `A`-valued gerbes acts freely and
/// transitively on them.
pub fn torsor_check(ctx: &TwistContext, q: &Cocycle, opts: &SearchOptions) -> Result<TorsorReport> {
    expect_top(q, Level::Gerbe2, &ctx.q)?;
    let nerve = q.nerve();
    let opts = SearchOptions {
        mode: Some(Mode::Normalized),
        ..*opts
    };
    let s = Structure::Crossed(ctx.cm.clone());
    let mut lifts = Vec::new();
    for c in enumerate_cocycles(Level::Gerbe2, &s, nerve, &opts)? {
        if ctx.descend(&c)?.components() == q.components() {
            lifts.push(c);
        }
    }
    let (reps, class_of) = partition(&lifts, &opts)?;
    let abelian = Structure::Crossed(Arc::new(CrossedModule::abelian(&ctx.a)));
    let group = enumerate_classes(Level::Gerbe2, &abelian, nerve, &opts)?;
    let searches = reps
        .iter()
        .map(|&i| EquivalenceSearch::new(&lifts[i], opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let locate = |c: &Cocycle| -> Result<usize> {
        for (k, s) in searches.iter().enumerate() {
            if s.find(c)?.is_some() {
                return Ok(k);
            }
        }
        Err(invariant("twisted lift matches no lift class", &[]))
    };
    let orbit = reps
        .iter()
        .map(|&i| group.representatives.iter().map(|alpha| locate(&twist_by(ctx, &lifts[i], alpha)?)).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let mut well_defined = true;
    for (i, c) in lifts.iter().enumerate() {
        for (k, alpha) in group.representatives.iter().enumerate() {
            if locate(&twist_by(ctx, c, alpha)?)? != orbit[class_of[i]][k] {
                well_defined = false;
            }
        }
    }
    let free = orbit.iter().all(|row| {
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == row.len()
    });
    let transitive = orbit.first().is_some_and(|row| {
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == reps.len()
    });
    Ok(TorsorReport {
        lifts: lifts.len(),
        lift_classes: reps.len(),
        group_order: group.len(),
        orbit,
        well_defined,
        free,
        transitive,
    })
}
