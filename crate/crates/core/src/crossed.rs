//! Crossed modules, 2-crossed modules, their morphisms, and the 2-group and
//! Gray compositions.

use std::fmt;
use std::sync::Arc;

use crate::error::{invariant, structural, Error, Result};
use crate::group::{action_verify, hom_verify, image, is_normal, quotient, FiniteGroup, GroupAction, GroupHom};
use crate::report::ValidationReport;

/// `∂1: L → M` with an action of `M` on `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    l: Arc<FiniteGroup>,
    m: Arc<FiniteGroup>,
    d1: GroupHom,
    act: GroupAction,
}

impl CrossedModule {
    /// Assembles a crossed module after checking that the pieces fit
    /// together. Axioms are checked by [`cm_verify`].
    pub fn new(d1: GroupHom, act: GroupAction) -> Result<Self> {
        if *act.actor != *d1.target || *act.space != *d1.source {
            return Err(structural("action must be of the target of d1 on its source"));
        }
        Ok(Self {
            l: d1.source.clone(),
            m: d1.target.clone(),
            d1,
            act,
        })
    }

    /// `N ↪ G` with the conjugation action, for a normal subgroup given by
    /// its elements.
    pub fn conjugation(g: &Arc<FiniteGroup>, normal: &[usize]) -> Result<Self> {
        let sub = crate::group::Subgroup::from_elements(normal.to_vec());
        let (_, emb) = crate::group::embedding(g, &sub)?;
        let act = GroupAction::conjugation_on(g, &emb)?;
        Self::new(emb, act)
    }

    /// `A → 1`.
    pub fn abelian(a: &Arc<FiniteGroup>) -> Self {
        let one = Arc::new(FiniteGroup::trivial());
        Self::new(GroupHom::trivial(a, &one), GroupAction::trivial(&one, a)).expect("shape")
    }

    /// `1 → G`: the crossed module whose cocycles are plain `G`-cocycles.
    pub fn top(g: &Arc<FiniteGroup>) -> Self {
        let one = Arc::new(FiniteGroup::trivial());
        Self::new(GroupHom::trivial(&one, g), GroupAction::trivial(g, &one)).expect("shape")
    }

    pub fn l(&self) -> &Arc<FiniteGroup> {
        &self.l
    }

    pub fn m(&self) -> &Arc<FiniteGroup> {
        &self.m
    }

    pub fn d1(&self) -> &GroupHom {
        &self.d1
    }

    pub fn action(&self) -> &GroupAction {
        &self.act
    }

    #[inline]
    pub fn act(&self, m: usize, l: usize) -> usize {
        self.act.apply(m, l)
    }

    #[inline]
    pub fn bd(&self, l: usize) -> usize {
        self.d1.apply(l)
    }
}

/// Checks the Peiffer condition and equivariance, along with the
/// constituent homomorphism and action.
pub fn cm_verify(c: &CrossedModule) -> ValidationReport {
    let (l, m) = (&c.l, &c.m);
    let mut r = ValidationReport::new("crossed module");
    r.absorb("d1", hom_verify(&c.d1));
    r.absorb("action", action_verify(&c.act));
    'p: for a in l.elements() {
        for b in l.elements() {
            if !r.check(c.act(c.bd(a), b) == l.conj(a, b), "peiffer", &[a, b]) {
                break 'p;
            }
        }
    }
    'e: for x in m.elements() {
        for a in l.elements() {
            if !r.check(c.bd(c.act(x, a)) == m.conj(x, c.bd(a)), "equivariance", &[x, a]) {
                break 'e;
            }
        }
    }
    r
}

/// A pair of homomorphisms `λ: L → L′`, `κ: M → M′`.
#[derive(Clone, Debug)]
pub struct CrossedModuleMorphism {
    pub source: Arc<CrossedModule>,
    pub target: Arc<CrossedModule>,
    pub lam: GroupHom,
    pub kap: GroupHom,
}

impl CrossedModuleMorphism {
    pub fn new(
        source: Arc<CrossedModule>,
        target: Arc<CrossedModule>,
        lam: Vec<usize>,
        kap: Vec<usize>,
    ) -> Result<Self> {
        let lam = GroupHom::new(source.l.clone(), target.l.clone(), lam)?;
        let kap = GroupHom::new(source.m.clone(), target.m.clone(), kap)?;
        Ok(Self { source, target, lam, kap })
    }

    pub fn identity(c: &Arc<CrossedModule>) -> Self {
        Self {
            source: c.clone(),
            target: c.clone(),
            lam: GroupHom::identity(&c.l),
            kap: GroupHom::identity(&c.m),
        }
    }
}

/// Checks that the square commutes and the actions are compatible.
/// Constituent maps that are not homomorphisms are a structural error.
pub fn cm_morphism_verify(f: &CrossedModuleMorphism) -> Result<ValidationReport> {
    for (name, h) in [("lambda", &f.lam), ("kappa", &f.kap)] {
        if let Some(v) = hom_verify(h).violations.first() {
            return Err(structural(format!(
                "{name} is not a homomorphism ({} at {:?})",
                v.axiom, v.witness
            )));
        }
    }
    let (s, t) = (&f.source, &f.target);
    let mut r = ValidationReport::new("crossed module morphism");
    for a in s.l.elements() {
        if !r.check(f.kap.apply(s.bd(a)) == t.bd(f.lam.apply(a)), "commutes", &[a]) {
            break;
        }
    }
    'a: for x in s.m.elements() {
        for a in s.l.elements() {
            let lhs = f.lam.apply(s.act(x, a));
            let rhs = t.act(f.kap.apply(x), f.lam.apply(a));
            if !r.check(lhs == rhs, "action", &[x, a]) {
                break 'a;
            }
        }
    }
    Ok(r)
}

/// Vertical composition `(m, l₁)·(∂1(l₁)m, l₂) = (m, l₁l₂)` in the strict
/// 2-group of a crossed module.
pub fn two_group_compose_vertical(
    c: &CrossedModule,
    p: (usize, usize),
    q: (usize, usize),
) -> Result<(usize, usize)> {
    let expected = c.m.mul(c.bd(p.1), p.0);
    if q.0 != expected {
        return Err(Error::Composability(format!(
            "second arrow starts at {} but the first ends at {}",
            c.m.label(q.0),
            c.m.label(expected)
        )));
    }
    Ok((p.0, c.l.mul(p.1, q.1)))
}

/// Horizontal composition `(m₁, l₁)·(m₂, l₂) = (m₁m₂, l₁·^(m₁)l₂)`.
pub fn two_group_compose_horizontal(c: &CrossedModule, p: (usize, usize), q: (usize, usize)) -> (usize, usize) {
    (c.m.mul(p.0, q.0), c.l.mul(p.1, c.act(p.0, q.1)))
}

/// The two candidate readings of axiom (v).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeifferForm {
    /// `{m₁, m₂m₃} = {m₁,m₃}·^(m₁m₂m₁⁻¹){m₁,m₃}`.
    Printed,
    /// `{m₁, m₂m₃} = {m₁,m₂}·^(m₁m₂m₁⁻¹){m₁,m₃}`.
    Standard,
}

impl PeifferForm {
    pub const ALL: [PeifferForm; 2] = [PeifferForm::Printed, PeifferForm::Standard];

    /// The reading in force for [`tcm_verify`]; see [`select_peiffer_form`].
    pub const SELECTED: PeifferForm = PeifferForm::Standard;
}

impl fmt::Display for PeifferForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeifferForm::Printed => write!(f, "printed {{m1,m2m3}} = {{m1,m3}}.^(m1m2m1^-1){{m1,m3}}"),
            PeifferForm::Standard => write!(f, "standard {{m1,m2m3}} = {{m1,m2}}.^(m1m2m1^-1){{m1,m3}}"),
        }
    }
}

/// `L → M → N` with actions of `N` on `M` and `L` and a Peiffer lifting.
#[derive(Clone, Debug)]
pub struct TwoCrossedModule {
    l: Arc<FiniteGroup>,
    m: Arc<FiniteGroup>,
    n: Arc<FiniteGroup>,
    d1: GroupHom,
    d2: GroupHom,
    act_nm: GroupAction,
    act_nl: GroupAction,
    peiffer: Vec<usize>,
    derived: GroupAction,
}

impl PartialEq for TwoCrossedModule {
    fn eq(&self, o: &Self) -> bool {
        self.d1 == o.d1
            && self.d2 == o.d2
            && self.act_nm == o.act_nm
            && self.act_nl == o.act_nl
            && self.peiffer == o.peiffer
    }
}

impl Eq for TwoCrossedModule {}

impl TwoCrossedModule {
    /// Assembles a 2-crossed module after shape checks. `peiffer[m₁][m₂]`
    /// is `{m₁, m₂}`.
    pub fn new(
        d1: GroupHom,
        d2: GroupHom,
        act_nm: GroupAction,
        act_nl: GroupAction,
        peiffer: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if *d1.target != *d2.source {
            return Err(structural("d1 must land in the source of d2"));
        }
        let (l, m, n) = (d1.source.clone(), d1.target.clone(), d2.target.clone());
        if *act_nm.actor != *n || *act_nm.space != *m {
            return Err(structural("actNM must be an action of N on M"));
        }
        if *act_nl.actor != *n || *act_nl.space != *l {
            return Err(structural("actNL must be an action of N on L"));
        }
        if peiffer.len() != m.order() || peiffer.iter().any(|r| r.len() != m.order()) {
            return Err(structural(format!("peiffer table must be {0}×{0}", m.order())));
        }
        if peiffer.iter().flatten().any(|&x| x >= l.order()) {
            return Err(structural("peiffer table entry out of range"));
        }
        let peiffer: Vec<usize> = peiffer.into_iter().flatten().collect();
        let mo = m.order();
        let derived = GroupAction::from_fn(&m, &l, |x, a| {
            l.mul(a, peiffer[m.inv(d1.apply(a)) * mo + x])
        });
        Ok(Self {
            l,
            m,
            n,
            d1,
            d2,
            act_nm,
            act_nl,
            peiffer,
            derived,
        })
    }

    /// `1 → G → N` from a crossed module `G → N`, with trivial lifting.
    pub fn from_crossed(c: &CrossedModule) -> Self {
        let one = Arc::new(FiniteGroup::trivial());
        let d1 = GroupHom::trivial(&one, &c.l);
        let act_nl = GroupAction::trivial(&c.m, &one);
        let peiffer = vec![vec![0; c.l.order()]; c.l.order()];
        Self::new(d1, c.d1.clone(), c.act.clone(), act_nl, peiffer).expect("shape")
    }

    /// `A → 1 → 1`.
    pub fn abelian(a: &Arc<FiniteGroup>) -> Self {
        let one = Arc::new(FiniteGroup::trivial());
        Self::new(
            GroupHom::trivial(a, &one),
            GroupHom::identity(&one),
            GroupAction::trivial(&one, &one),
            GroupAction::trivial(&one, a),
            vec![vec![a.identity()]],
        )
        .expect("shape")
    }

    pub fn l(&self) -> &Arc<FiniteGroup> {
        &self.l
    }
    pub fn m(&self) -> &Arc<FiniteGroup> {
        &self.m
    }
    pub fn n(&self) -> &Arc<FiniteGroup> {
        &self.n
    }
    pub fn d1(&self) -> &GroupHom {
        &self.d1
    }
    pub fn d2(&self) -> &GroupHom {
        &self.d2
    }
    pub fn act_nm(&self) -> &GroupAction {
        &self.act_nm
    }
    pub fn act_nl(&self) -> &GroupAction {
        &self.act_nl
    }

    pub fn peiffer_rows(&self) -> Vec<Vec<usize>> {
        self.peiffer.chunks(self.m.order()).map(|r| r.to_vec()).collect()
    }

    /// `{m₁, m₂}`.
    #[inline]
    pub fn lift(&self, m1: usize, m2: usize) -> usize {
        self.peiffer[m1 * self.m.order() + m2]
    }

    /// `ⁿm`.
    #[inline]
    pub fn nm(&self, n: usize, m: usize) -> usize {
        self.act_nm.apply(n, m)
    }

    /// `ⁿl`.
    #[inline]
    pub fn nl(&self, n: usize, l: usize) -> usize {
        self.act_nl.apply(n, l)
    }

    /// `ᵐl := l·{∂1(l)⁻¹, m}`.
    #[inline]
    pub fn ml(&self, m: usize, l: usize) -> usize {
        self.derived.apply(m, l)
    }

    /// `L → M` with the derived action, unchecked.
    pub fn underlying_cm(&self) -> CrossedModule {
        CrossedModule::new(self.d1.clone(), self.derived.clone()).expect("shape")
    }

    /// Whether `M` and `N` are both trivial, the only case with a
    /// 3-cocycle equivalence.
    pub fn is_abelian_two_gerbe(&self) -> bool {
        self.m.is_trivial() && self.n.is_trivial()
    }
}

/// Checks every 2-crossed module axiom under the selected reading of (v).
pub fn tcm_verify(t: &TwoCrossedModule) -> ValidationReport {
    let mut r = tcm_verify_with(t, PeifferForm::SELECTED);
    r.note(format!("axiom (v) form: {}", PeifferForm::SELECTED));
    r
}

/// Checks every 2-crossed module axiom, reading (v) as `form`.
pub fn tcm_verify_with(t: &TwoCrossedModule, form: PeifferForm) -> ValidationReport {
    let (l, m, n) = (&t.l, &t.m, &t.n);
    let mut r = ValidationReport::new("2-crossed module");
    r.absorb("d1", hom_verify(&t.d1));
    r.absorb("d2", hom_verify(&t.d2));
    r.absorb("actNM", action_verify(&t.act_nm));
    r.absorb("actNL", action_verify(&t.act_nl));
    if !r.is_valid() {
        return r;
    }
    let d1 = |a| t.d1.apply(a);
    let d2 = |x| t.d2.apply(x);

    'eq: for g in n.elements() {
        for a in l.elements() {
            if !r.check(d1(t.nl(g, a)) == t.nm(g, d1(a)), "d1-equivariance", &[g, a]) {
                break 'eq;
            }
        }
    }
    'eq2: for g in n.elements() {
        for x in m.elements() {
            if !r.check(d2(t.nm(g, x)) == n.conj(g, d2(x)), "d2-equivariance", &[g, x]) {
                break 'eq2;
            }
        }
    }
    for a in l.elements() {
        if !r.check(d2(d1(a)) == n.identity(), "complex", &[a]) {
            break;
        }
    }
    'ii: for x in m.elements() {
        for y in m.elements() {
            let rhs = m.mul(d1(t.lift(x, y)), t.nm(d2(x), y));
            if !r.check(m.conj(x, y) == rhs, "ii", &[x, y]) {
                break 'ii;
            }
        }
    }
    'iii: for a in l.elements() {
        for b in l.elements() {
            let lhs = l.prod(&[a, b, l.inv(a), l.inv(b)]);
            if !r.check(lhs == t.lift(d1(a), d1(b)), "iii", &[a, b]) {
                break 'iii;
            }
        }
    }
    'iv: for x in m.elements() {
        for y in m.elements() {
            for z in m.elements() {
                let lhs = t.lift(m.mul(x, y), z);
                let rhs = l.mul(t.lift(x, m.conj(y, z)), t.nl(d2(x), t.lift(y, z)));
                if !r.check(lhs == rhs, "iv", &[x, y, z]) {
                    break 'iv;
                }
            }
        }
    }
    'v: for x in m.elements() {
        for y in m.elements() {
            for z in m.elements() {
                let lhs = t.lift(x, m.mul(y, z));
                let first = match form {
                    PeifferForm::Printed => t.lift(x, z),
                    PeifferForm::Standard => t.lift(x, y),
                };
                let rhs = l.mul(first, t.ml(m.conj(x, y), t.lift(x, z)));
                if !r.check(lhs == rhs, "v", &[x, y, z]) {
                    break 'v;
                }
            }
        }
    }
    'vi: for a in l.elements() {
        for x in m.elements() {
            let lhs = l.mul(t.lift(d1(a), x), t.lift(x, d1(a)));
            let rhs = l.mul(a, t.nl(d2(x), l.inv(a)));
            if !r.check(lhs == rhs, "vi", &[a, x]) {
                break 'vi;
            }
        }
    }
    'le: for g in n.elements() {
        for x in m.elements() {
            for y in m.elements() {
                let lhs = t.nl(g, t.lift(x, y));
                let rhs = t.lift(t.nm(g, x), t.nm(g, y));
                if !r.check(lhs == rhs, "lifting-equivariance", &[g, x, y]) {
                    break 'le;
                }
            }
        }
    }
    r
}

/// Chooses the reading of axiom (v) that every corpus structure satisfying
/// the remaining axioms also satisfies. Returns the surviving forms.
pub fn select_peiffer_form(corpus: &[TwoCrossedModule]) -> Vec<PeifferForm> {
    let others_hold = |t: &TwoCrossedModule| {
        let r = tcm_verify_with(t, PeifferForm::Standard);
        r.violations.iter().all(|v| v.axiom == "v")
    };
    PeifferForm::ALL
        .into_iter()
        .filter(|&form| {
            corpus
                .iter()
                .filter(|t| others_hold(t))
                .all(|t| !tcm_verify_with(t, form).violates("v"))
        })
        .collect()
}

/// The derived action of `M` on `L`, checked to make `L → M` a crossed
/// module.
pub fn tcm_derived_action(t: &TwoCrossedModule) -> Result<GroupAction> {
    let cm = t.underlying_cm();
    let r = cm_verify(&cm);
    match r.violations.first() {
        None => Ok(t.derived.clone()),
        Some(v) => Err(Error::Invariant {
            what: format!("derived action fails {}", v.axiom),
            witness: v.witness.clone(),
        }),
    }
}

/// `⟨m₁, m₂⟩ := ∂1({m₁,m₂})·^(∂2(m₁))m₂`, checked against `m₁m₂m₁⁻¹`.
pub fn peiffer_commutator(t: &TwoCrossedModule, m1: usize, m2: usize) -> Result<usize> {
    let v = t.m.mul(t.d1.apply(t.lift(m1, m2)), t.nm(t.d2.apply(m1), m2));
    if v != t.m.conj(m1, m2) {
        return Err(invariant("Peiffer commutator differs from conjugate", &[m1, m2]));
    }
    Ok(v)
}

/// The crossed module `M/∂1(L) → N` with induced boundary and action.
pub fn tcm_induced_quotient_cm(t: &TwoCrossedModule) -> Result<CrossedModule> {
    let im = image(&t.d1);
    if !is_normal(&t.m, &im.elements) {
        return Err(Error::NotNormal("image of d1 in M".into()));
    }
    let (g, pi) = quotient(&t.m, &im)?;
    let mut d2p = vec![usize::MAX; g.order()];
    for x in t.m.elements() {
        let c = pi.apply(x);
        let v = t.d2.apply(x);
        if d2p[c] == usize::MAX {
            d2p[c] = v;
        } else if d2p[c] != v {
            return Err(invariant("induced d2 not well defined on cosets", &[x]));
        }
    }
    let mut act = vec![vec![usize::MAX; g.order()]; t.n.order()];
    for nn in t.n.elements() {
        for x in t.m.elements() {
            let (c, v) = (pi.apply(x), pi.apply(t.nm(nn, x)));
            if act[nn][c] == usize::MAX {
                act[nn][c] = v;
            } else if act[nn][c] != v {
                return Err(invariant("induced action not well defined on cosets", &[nn, x]));
            }
        }
    }
    let d2p = GroupHom::new(g.clone(), t.n.clone(), d2p)?;
    let act = GroupAction::new(t.n.clone(), g, act)?;
    let cm = CrossedModule::new(d2p, act)?;
    let r = cm_verify(&cm);
    match r.violations.first() {
        None => Ok(cm),
        Some(v) => Err(Error::Invariant {
            what: format!("induced crossed module fails {}", v.axiom),
            witness: v.witness.clone(),
        }),
    }
}

/// The three compositions of the Gray 3-groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrayKind {
    Vertical1,
    Vertical2,
    Horizontal,
}

/// Composes triples `(n, m, l)`.
pub fn gray_compose(
    t: &TwoCrossedModule,
    kind: GrayKind,
    p: (usize, usize, usize),
    q: (usize, usize, usize),
) -> Result<(usize, usize, usize)> {
    let (l, m, n) = (&t.l, &t.m, &t.n);
    match kind {
        GrayKind::Vertical1 => {
            let want = m.mul(t.d1.apply(p.2), p.1);
            if q.0 != p.0 || q.1 != want {
                return Err(Error::Composability(format!(
                    "expected ({}, {}, _), got ({}, {}, _)",
                    p.0, want, q.0, q.1
                )));
            }
            Ok((p.0, p.1, l.mul(p.2, q.2)))
        }
        GrayKind::Vertical2 => {
            let want = n.mul(t.d2.apply(p.1), p.0);
            if q.0 != want {
                return Err(Error::Composability(format!(
                    "expected ({want}, _, _), got ({}, _, _)",
                    q.0
                )));
            }
            Ok((p.0, m.mul(p.1, q.1), l.mul(p.2, t.ml(p.1, q.2))))
        }
        GrayKind::Horizontal => Ok((
            n.mul(p.0, q.0),
            m.mul(p.1, t.nm(p.0, q.1)),
            l.mul(p.2, t.ml(p.1, t.nl(p.0, q.2))),
        )),
    }
}

/// A triple of homomorphisms `λ, μ, ν` between 2-crossed modules.
#[derive(Clone, Debug)]
pub struct TwoCrossedModuleMorphism {
    pub source: Arc<TwoCrossedModule>,
    pub target: Arc<TwoCrossedModule>,
    pub lam: GroupHom,
    pub mu: GroupHom,
    pub nu: GroupHom,
}

impl TwoCrossedModuleMorphism {
    pub fn new(
        source: Arc<TwoCrossedModule>,
        target: Arc<TwoCrossedModule>,
        lam: Vec<usize>,
        mu: Vec<usize>,
        nu: Vec<usize>,
    ) -> Result<Self> {
        let lam = GroupHom::new(source.l.clone(), target.l.clone(), lam)?;
        let mu = GroupHom::new(source.m.clone(), target.m.clone(), mu)?;
        let nu = GroupHom::new(source.n.clone(), target.n.clone(), nu)?;
        Ok(Self { source, target, lam, mu, nu })
    }

    pub fn identity(t: &Arc<TwoCrossedModule>) -> Self {
        Self {
            source: t.clone(),
            target: t.clone(),
            lam: GroupHom::identity(&t.l),
            mu: GroupHom::identity(&t.m),
            nu: GroupHom::identity(&t.n),
        }
    }
}

/// Checks commuting squares, action compatibility and compatibility with
/// the Peiffer liftings.
pub fn tcm_morphism_verify(f: &TwoCrossedModuleMorphism) -> Result<ValidationReport> {
    for (name, h) in [("lambda", &f.lam), ("mu", &f.mu), ("nu", &f.nu)] {
        if let Some(v) = hom_verify(h).violations.first() {
            return Err(structural(format!(
                "{name} is not a homomorphism ({} at {:?})",
                v.axiom, v.witness
            )));
        }
    }
    let (s, t) = (&f.source, &f.target);
    let mut r = ValidationReport::new("2-crossed module morphism");
    for a in s.l.elements() {
        if !r.check(f.mu.apply(s.d1.apply(a)) == t.d1.apply(f.lam.apply(a)), "d1-commutes", &[a]) {
            break;
        }
    }
    for x in s.m.elements() {
        if !r.check(f.nu.apply(s.d2.apply(x)) == t.d2.apply(f.mu.apply(x)), "d2-commutes", &[x]) {
            break;
        }
    }
    'nm: for g in s.n.elements() {
        for x in s.m.elements() {
            let ok = f.mu.apply(s.nm(g, x)) == t.nm(f.nu.apply(g), f.mu.apply(x));
            if !r.check(ok, "actNM", &[g, x]) {
                break 'nm;
            }
        }
    }
    'nl: for g in s.n.elements() {
        for a in s.l.elements() {
            let ok = f.lam.apply(s.nl(g, a)) == t.nl(f.nu.apply(g), f.lam.apply(a));
            if !r.check(ok, "actNL", &[g, a]) {
                break 'nl;
            }
        }
    }
    'pf: for x in s.m.elements() {
        for y in s.m.elements() {
            let ok = f.lam.apply(s.lift(x, y)) == t.lift(f.mu.apply(x), f.mu.apply(y));
            if !r.check(ok, "peiffer", &[x, y]) {
                break 'pf;
            }
        }
    }
    Ok(r)
}

/// The morphism `(L → M) → (1 → N)` given by `L → 1` and `∂2`, where the
/// source carries the derived action.
pub fn collapse_morphism(t: &TwoCrossedModule) -> CrossedModuleMorphism {
    let src = Arc::new(t.underlying_cm());
    let n_top = CrossedModule::top(&t.n);
    let one = n_top.l.clone();
    let tgt = Arc::new(n_top);
    CrossedModuleMorphism {
        lam: GroupHom::trivial(&t.l, &one),
        kap: t.d2.clone(),
        source: src,
        target: tgt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn conjugation_and_degenerate_crossed_modules() {
        assert!(cm_verify(&corpus::a3_in_s3()).is_valid());
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        assert!(cm_verify(&CrossedModule::abelian(&z2)).is_valid());
    }

    #[test]
    fn nonabelian_kernel_fails_peiffer() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let c = CrossedModule::abelian(&s3);
        let r = cm_verify(&c);
        assert!(r.violates("peiffer"));
        let w = &r.violation("peiffer").unwrap().witness;
        assert_ne!(s3.mul(w[0], w[1]), s3.mul(w[1], w[0]));
    }

    #[test]
    fn morphisms() {
        let c = Arc::new(corpus::a3_in_s3());
        assert!(cm_morphism_verify(&CrossedModuleMorphism::identity(&c)).unwrap().is_valid());
        for t in corpus::two_crossed_modules() {
            let f = collapse_morphism(&t.tcm);
            assert!(cm_morphism_verify(&f).unwrap().is_valid(), "{}", t.name);
        }
        let bad = CrossedModuleMorphism::new(c.clone(), c.clone(), c.l().elements().collect(), vec![0, 1, 2, 3, 5, 4]);
        let bad = bad.unwrap();
        assert!(matches!(cm_morphism_verify(&bad), Err(Error::Structural(_))));
    }

    #[test]
    fn two_group_compositions() {
        let c = corpus::a3_in_s3();
        let (m, l) = (c.m(), c.l());
        for x in m.elements() {
            let e = l.identity();
            assert_eq!(two_group_compose_vertical(&c, (x, e), (x, e)).unwrap(), (x, e));
        }
        for a in l.elements() {
            for b in l.elements() {
                let p = two_group_compose_horizontal(&c, (m.identity(), a), (m.identity(), b));
                assert_eq!(p, (m.identity(), l.mul(a, b)));
            }
        }
        let t12 = m.by_label("(12)").unwrap();
        let t13 = m.by_label("(13)").unwrap();
        let c123 = l.by_label("(123)").unwrap();
        let c132 = l.by_label("(132)").unwrap();
        let (pm, pl) = two_group_compose_horizontal(&c, (t12, c123), (t13, c132));
        assert_eq!(pm, m.mul(t12, t13));
        // (12) conjugates (132) to (123), so l = (123)(123) = (132).
        assert_eq!(pl, c132);
        assert!(two_group_compose_vertical(&c, (t12, c123), (t12, c123)).is_err());
    }

    #[test]
    fn chain_and_abelian_two_crossed_modules() {
        let chain = corpus::chain_z2_z4_z2();
        assert!(tcm_verify(&chain).is_valid());
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        assert!(tcm_verify(&TwoCrossedModule::abelian(&z2)).is_valid());
        let act = tcm_derived_action(&chain).unwrap();
        assert!(act.is_trivial());
    }

    #[test]
    fn mutated_lifting_is_detected() {
        let chain = corpus::chain_z2_z4_z2();
        let mut rows = chain.peiffer_rows();
        rows[1][3] ^= 1;
        let t = TwoCrossedModule::new(
            chain.d1().clone(),
            chain.d2().clone(),
            chain.act_nm().clone(),
            chain.act_nl().clone(),
            rows,
        )
        .unwrap();
        let r = tcm_verify(&t);
        assert!(!r.is_valid());
    }

    #[test]
    fn induced_quotients() {
        let chain = corpus::chain_z2_z4_z2();
        let q = tcm_induced_quotient_cm(&chain).unwrap();
        assert_eq!(q.l().order(), 2);
        assert_eq!(q.d1().map, vec![0, 1]);
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let q = tcm_induced_quotient_cm(&TwoCrossedModule::abelian(&z2)).unwrap();
        assert_eq!((q.l().order(), q.m().order()), (1, 1));
        let top = TwoCrossedModule::from_crossed(&corpus::a3_in_s3());
        let q = tcm_induced_quotient_cm(&top).unwrap();
        assert_eq!((q.l().order(), q.m().order()), (3, 6));
        assert!(cm_verify(&q).is_valid());
    }

    #[test]
    fn gray_compositions_on_chain() {
        let t = corpus::chain_z2_z4_z2();
        assert_eq!(gray_compose(&t, GrayKind::Vertical1, (1, 2, 0), (1, 2, 0)).unwrap(), (1, 2, 0));
        assert_eq!(gray_compose(&t, GrayKind::Horizontal, (0, 0, 1), (0, 0, 1)).unwrap(), (0, 0, 0));
        assert_eq!(gray_compose(&t, GrayKind::Horizontal, (1, 1, 1), (1, 3, 1)).unwrap(), (0, 0, 0));
        assert!(gray_compose(&t, GrayKind::Vertical2, (0, 1, 0), (0, 0, 0)).is_err());
    }

    #[test]
    fn peiffer_commutator_is_conjugation() {
        for t in corpus::two_crossed_modules() {
            let m = t.tcm.m();
            for x in m.elements() {
                for y in m.elements() {
                    assert_eq!(peiffer_commutator(&t.tcm, x, y).unwrap(), m.conj(x, y));
                }
                assert_eq!(peiffer_commutator(&t.tcm, x, m.identity()).unwrap(), m.identity());
            }
        }
    }

    #[test]
    fn printed_axiom_v_is_rejected_by_the_corpus() {
        let corpus: Vec<_> = corpus::two_crossed_modules().into_iter().map(|t| (*t.tcm).clone()).collect();
        assert_eq!(select_peiffer_form(&corpus), vec![PeifferForm::Standard]);
    }
}
