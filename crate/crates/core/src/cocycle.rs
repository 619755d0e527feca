//! Cocycle data at the four levels, with relation checks, products,
//! inverses, coboundary actions, change of structure and pullback.
//!
//! All levels share one representation: a list of components, each a dense
//! array indexed by the nerve tuples of the component's arity.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use crate::crossed::{CrossedModule, CrossedModuleMorphism, TwoCrossedModule, TwoCrossedModuleMorphism};
use crate::error::{invariant, structural, Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::nerve::{Nerve, NerveMap};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// `(m_i, l_ij)` over a crossed module.
    Bundle1,
    /// `(m_ij, l_ijk)` over a crossed module.
    Gerbe2,
    /// `(n_i, m_ij, l_ijk)` over a 2-crossed module.
    TcmGerbe2,
    /// `(n_ij, m_ijk, l_ijkl)` over a 2-crossed module.
    TwoGerbe3,
}

/// Which group of the structure a component takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    L,
    M,
    N,
}

/// Name, arity and value group of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: &'static str,
    pub arity: usize,
    pub slot: Slot,
}

const fn comp(name: &'static str, arity: usize, slot: Slot) -> Component {
    Component { name, arity, slot }
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Bundle1, Level::Gerbe2, Level::TcmGerbe2, Level::TwoGerbe3];

    pub fn name(self) -> &'static str {
        match self {
            Level::Bundle1 => "bundle1",
            Level::Gerbe2 => "gerbe2",
            Level::TcmGerbe2 => "tcm-gerbe2",
            Level::TwoGerbe3 => "two-gerbe3",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.name() == s)
    }

    pub fn needs_two_crossed(self) -> bool {
        matches!(self, Level::TcmGerbe2 | Level::TwoGerbe3)
    }

    pub fn components(self) -> &'static [Component] {
        use Slot::*;
        match self {
            Level::Bundle1 => {
                const C: &[Component] = &[comp("m", 1, M), comp("l", 2, L)];
                C
            },
            Level::Gerbe2 => {
                const C: &[Component] = &[comp("m", 2, M), comp("l", 3, L)];
                C
            },
            Level::TcmGerbe2 => {
                const C: &[Component] = &[comp("n", 1, N), comp("m", 2, M), comp("l", 3, L)];
                C
            },
            Level::TwoGerbe3 => {
                const C: &[Component] = &[comp("n", 2, N), comp("m", 3, M), comp("l", 4, L)];
                C
            },
        }
    }

    /// Components of the coboundary (stable isomorphism) data.
    pub fn witness_components(self) -> &'static [Component] {
        use Slot::*;
        match self {
            Level::Bundle1 => {
                const C: &[Component] = &[comp("l", 1, L)];
                C
            },
            Level::Gerbe2 | Level::TcmGerbe2 => {
                const C: &[Component] = &[comp("m", 1, M), comp("l", 2, L)];
                C
            },
            Level::TwoGerbe3 => {
                const C: &[Component] = &[comp("b", 3, L)];
                C
            },
        }
    }

    /// Names and arities of the defining relations, in checking order.
    pub fn relations(self) -> &'static [(&'static str, usize)] {
        match self {
            Level::Bundle1 => &[("boundary", 2), ("cocycle", 3)],
            Level::Gerbe2 => &[("m-relation", 3), ("l-relation", 4)],
            Level::TcmGerbe2 => &[("n-relation", 2), ("m-relation", 3), ("l-relation", 4)],
            Level::TwoGerbe3 => &[("n-relation", 3), ("m-relation", 4), ("l-relation", 5)],
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The coefficient structure of a cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Crossed(Arc<CrossedModule>),
    TwoCrossed(Arc<TwoCrossedModule>),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Crossed(_) => "crossed-module",
            Structure::TwoCrossed(_) => "two-crossed-module",
        }
    }

    fn same(&self, o: &Structure) -> bool {
        match (self, o) {
            (Structure::Crossed(a), Structure::Crossed(b)) => Arc::ptr_eq(a, b) || a == b,
            (Structure::TwoCrossed(a), Structure::TwoCrossed(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }

    pub fn group(&self, slot: Slot) -> &Arc<FiniteGroup> {
        match (self, slot) {
            (Structure::Crossed(c), Slot::L) => c.l(),
            (Structure::Crossed(c), Slot::M) => c.m(),
            (Structure::TwoCrossed(t), Slot::L) => t.l(),
            (Structure::TwoCrossed(t), Slot::M) => t.m(),
            (Structure::TwoCrossed(t), Slot::N) => t.n(),
            (Structure::Crossed(_), Slot::N) => panic!("crossed modules have no N"),
        }
    }

    fn check_level(&self, level: Level) -> Result<()> {
        if level.needs_two_crossed() != matches!(self, Structure::TwoCrossed(_)) {
            return Err(structural(format!("level {level} does not take a {}", self.kind())));
        }
        Ok(())
    }

    /// Whether products at the `Gerbe2` level are available: `L` and `M`
    /// abelian and the action trivial.
    fn gerbe_product_defined(&self) -> bool {
        match self {
            Structure::Crossed(c) => c.l().is_abelian() && c.m().is_abelian() && c.action().is_trivial(),
            Structure::TwoCrossed(_) => false,
        }
    }
}

/// Lookup of a component value at a tuple.
pub(crate) type Get<'a> = &'a dyn Fn(usize, &[usize]) -> usize;

/// The structure maps, uniform over crossed and 2-crossed modules.
pub(crate) struct Alg<'a> {
    s: &'a Structure,
    l: &'a FiniteGroup,
    m: &'a FiniteGroup,
}

impl<'a> Alg<'a> {
    pub(crate) fn new(s: &'a Structure) -> Self {
        Alg {
            s,
            l: s.group(Slot::L),
            m: s.group(Slot::M),
        }
    }

    fn n(&self) -> &FiniteGroup {
        self.s.group(Slot::N)
    }

    #[inline]
    fn d1(&self, a: usize) -> usize {
        match self.s {
            Structure::Crossed(c) => c.bd(a),
            Structure::TwoCrossed(t) => t.d1().apply(a),
        }
    }

    #[inline]
    fn d2(&self, x: usize) -> usize {
        match self.s {
            Structure::TwoCrossed(t) => t.d2().apply(x),
            Structure::Crossed(_) => unreachable!(),
        }
    }

    /// `ᵐl`: the crossed-module action, or the derived one.
    #[inline]
    fn ml(&self, x: usize, a: usize) -> usize {
        match self.s {
            Structure::Crossed(c) => c.act(x, a),
            Structure::TwoCrossed(t) => t.ml(x, a),
        }
    }

    #[inline]
    fn nm(&self, g: usize, x: usize) -> usize {
        match self.s {
            Structure::TwoCrossed(t) => t.nm(g, x),
            Structure::Crossed(_) => unreachable!(),
        }
    }

    #[inline]
    fn nl(&self, g: usize, a: usize) -> usize {
        match self.s {
            Structure::TwoCrossed(t) => t.nl(g, a),
            Structure::Crossed(_) => unreachable!(),
        }
    }

    #[inline]
    fn lift(&self, x: usize, y: usize) -> usize {
        match self.s {
            Structure::TwoCrossed(t) => t.lift(x, y),
            Structure::Crossed(_) => unreachable!(),
        }
    }

    fn group(&self, slot: Slot) -> &FiniteGroup {
        self.s.group(slot)
    }

    /// Evaluates relation `rel` of `level` at the tuple `t`.
    pub(crate) fn relation_holds(&self, level: Level, rel: usize, t: &[usize], g: Get) -> bool {
        let (l, m) = (self.l, self.m);
        match (level, rel) {
            (Level::Bundle1, 0) => {
                let (i, j) = (t[0], t[1]);
                self.d1(g(1, &[i, j])) == m.mul(g(0, &[i]), m.inv(g(0, &[j])))
            }
            (Level::Bundle1, 1) => {
                let (i, j, k) = (t[0], t[1], t[2]);
                l.mul(g(1, &[i, j]), g(1, &[j, k])) == g(1, &[i, k])
            }
            (Level::TcmGerbe2, 0) => {
                let (i, j) = (t[0], t[1]);
                g(0, &[i]) == self.n().mul(self.d2(g(1, &[i, j])), g(0, &[j]))
            }
            (Level::Gerbe2, 0) | (Level::TcmGerbe2, 1) => {
                let o = usize::from(level == Level::TcmGerbe2);
                let (i, j, k) = (t[0], t[1], t[2]);
                m.mul(g(o, &[i, j]), g(o, &[j, k])) == m.mul(self.d1(g(o + 1, &[i, j, k])), g(o, &[i, k]))
            }
            (Level::Gerbe2, 1) | (Level::TcmGerbe2, 2) => {
                let o = usize::from(level == Level::TcmGerbe2);
                let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
                let lhs = l.mul(g(o + 1, &[i, j, k]), g(o + 1, &[i, k, p]));
                let rhs = l.mul(self.ml(g(o, &[i, j]), g(o + 1, &[j, k, p])), g(o + 1, &[i, j, p]));
                lhs == rhs
            }
            (Level::TwoGerbe3, 0) => {
                let n = self.n();
                let (i, j, k) = (t[0], t[1], t[2]);
                n.mul(g(0, &[i, j]), g(0, &[j, k])) == n.mul(self.d2(g(1, &[i, j, k])), g(0, &[i, k]))
            }
            (Level::TwoGerbe3, 1) => {
                let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
                let lhs = m.mul(g(1, &[i, j, k]), g(1, &[i, k, p]));
                let rhs = m.prod(&[
                    self.d1(g(2, &[i, j, k, p])),
                    self.nm(g(0, &[i, j]), g(1, &[j, k, p])),
                    g(1, &[i, j, p]),
                ]);
                lhs == rhs
            }
            (Level::TwoGerbe3, 2) => {
                let n = self.n();
                let (i, j, k, p, q) = (t[0], t[1], t[2], t[3], t[4]);
                let n_ij = g(0, &[i, j]);
                let n_jk = g(0, &[j, k]);
                let n_ik = g(0, &[i, k]);
                let m_ijk = g(1, &[i, j, k]);
                let m_jkp = g(1, &[j, k, p]);
                let m_kpq = g(1, &[k, p, q]);
                let lhs = l.prod(&[
                    g(2, &[i, j, k, p]),
                    self.ml(self.nm(n_ij, m_jkp), g(2, &[i, j, p, q])),
                    self.nl(n_ij, g(2, &[j, k, p, q])),
                ]);
                let rhs = l.prod(&[
                    self.ml(m_ijk, g(2, &[i, k, p, q])),
                    self.lift(m_ijk, self.nm(n_ik, m_kpq)),
                    self.ml(self.nm(n.mul(n_ij, n_jk), m_kpq), g(2, &[i, j, k, q])),
                ]);
                lhs == rhs
            }
            _ => unreachable!("no relation {rel} at level {level}"),
        }
    }

    /// Component `c` of the product `a·b` at tuple `t`.
    pub(crate) fn product_at(&self, level: Level, f: &Formulas, c: usize, t: &[usize], a: Get, b: Get) -> usize {
        let (l, m) = (self.l, self.m);
        match (level, c) {
            (Level::Bundle1, 0) => m.mul(a(0, t), b(0, t)),
            (Level::Bundle1, 1) => {
                let x = match f.bundle_product {
                    Variant::Printed => a(0, &t[..1]),
                    Variant::Corrected => a(0, &t[1..]),
                };
                l.mul(a(1, t), self.ml(x, b(1, t)))
            }
            (Level::TcmGerbe2, 0) => self.n().mul(a(0, t), b(0, t)),
            (Level::TcmGerbe2, 1) => m.mul(a(1, t), self.nm(a(0, &t[1..]), b(1, t))),
            (Level::TcmGerbe2, 2) => {
                let (i, j, k) = (t[0], t[1], t[2]);
                let m_ik = a(1, &[i, k]);
                let mid = self.ml(m_ik, self.lift(m.inv(a(1, &[j, k])), self.nm(a(0, &[j]), b(1, &[i, j]))));
                let last = match f.tcm_product {
                    Variant::Printed => self.nl(a(0, &[i]), b(2, t)),
                    Variant::Corrected => self.ml(m_ik, self.nl(a(0, &[k]), b(2, t))),
                };
                l.prod(&[a(2, t), mid, last])
            }
            (Level::Gerbe2 | Level::TwoGerbe3, _) => {
                let g = self.group(level.components()[c].slot);
                g.mul(a(c, t), b(c, t))
            }
            _ => unreachable!(),
        }
    }

    /// Component `c` of the inverse at tuple `t`.
    pub(crate) fn inverse_at(&self, level: Level, f: &Formulas, c: usize, t: &[usize], a: Get) -> usize {
        let (l, m) = (self.l, self.m);
        match (level, c) {
            (Level::Bundle1, 0) => m.inv(a(0, t)),
            (Level::Bundle1, 1) => self.ml(m.inv(a(0, &t[1..])), l.inv(a(1, t))),
            (Level::TcmGerbe2, 0) => self.n().inv(a(0, t)),
            (Level::TcmGerbe2, 1) => self.nm(self.n().inv(a(0, &t[1..])), m.inv(a(1, t))),
            (Level::TcmGerbe2, 2) => {
                let n = self.n();
                let (i, j, k) = (t[0], t[1], t[2]);
                let nk_inv = n.inv(a(0, &[k]));
                let first = self.nl(nk_inv, l.inv(self.lift(m.inv(a(1, &[j, k])), m.inv(a(1, &[i, j])))));
                let last = match f.tcm_inverse {
                    Variant::Printed => self.nl(n.inv(a(0, &[i])), l.inv(a(2, t))),
                    Variant::Corrected => self.nl(nk_inv, self.ml(m.inv(a(1, &[i, k])), l.inv(a(2, t)))),
                };
                l.mul(first, last)
            }
            (Level::Gerbe2 | Level::TwoGerbe3, _) => self.group(level.components()[c].slot).inv(a(c, t)),
            _ => unreachable!(),
        }
    }

    /// Component `c` of the cocycle obtained by acting with witness `w` on
    /// `x`, at tuple `t`.
    pub(crate) fn coboundary_at(&self, level: Level, f: &Formulas, c: usize, t: &[usize], x: Get, w: Get) -> usize {
        let (l, m) = (self.l, self.m);
        match (level, c) {
            (Level::Bundle1, 0) => m.mul(self.d1(w(0, t)), x(0, t)),
            (Level::Bundle1, 1) => {
                let last = match f.bundle_coboundary {
                    Variant::Printed => w(0, &t[..1]),
                    Variant::Corrected => w(0, &t[1..]),
                };
                l.prod(&[w(0, &t[..1]), x(1, t), l.inv(last)])
            }
            (Level::TcmGerbe2, 0) => self.n().mul(self.d2(w(0, t)), x(0, t)),
            (Level::Gerbe2, 0) | (Level::TcmGerbe2, 1) => {
                let o = c;
                let (i, j) = (t[0], t[1]);
                m.prod(&[w(0, &[i]), self.d1(w(1, t)), x(o, t), m.inv(w(0, &[j]))])
            }
            (Level::Gerbe2, 1) | (Level::TcmGerbe2, 2) => {
                let o = c - 1;
                let (i, j, k) = (t[0], t[1], t[2]);
                let inner = l.prod(&[
                    w(1, &[i, j]),
                    self.ml(x(o, &[i, j]), w(1, &[j, k])),
                    x(o + 1, t),
                    l.inv(w(1, &[i, k])),
                ]);
                self.ml(w(0, &[i]), inner)
            }
            (Level::TwoGerbe3, 0 | 1) => x(c, t),
            (Level::TwoGerbe3, 2) => {
                let (i, j, k, p) = (t[0], t[1], t[2], t[3]);
                l.prod(&[
                    x(2, t),
                    w(0, &[j, k, p]),
                    l.inv(w(0, &[i, k, p])),
                    w(0, &[i, j, p]),
                    l.inv(w(0, &[i, j, k])),
                ])
            }
            _ => unreachable!(),
        }
    }
}

/// Collects the `(component, tuple)` pairs a formula reads, by evaluating it
/// once on identity data. Formulas never branch on values, so the trace is
/// exact.
pub(crate) fn trace_reads(
    s: &Structure,
    comps: &[Component],
    eval: impl FnOnce(Get),
) -> Vec<(usize, Vec<usize>)> {
    let seen = RefCell::new(Vec::new());
    let get = |c: usize, t: &[usize]| {
        let mut seen = seen.borrow_mut();
        if !seen.iter().any(|(c2, t2): &(usize, Vec<usize>)| *c2 == c && t2 == t) {
            seen.push((c, t.to_vec()));
        }
        s.group(comps[c].slot).identity()
    };
    eval(&get);
    seen.into_inner()
}

/// Printed formula or its index correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Printed,
    Corrected,
}

/// The formula readings that are open to adjudication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Formulas {
    /// `l̄_ij = l_ij·^(m_i)l̃_ij` as printed, `^(m_j)` corrected.
    pub bundle_product: Variant,
    /// `l′_ij = l_i l_ij l_i⁻¹` as printed, `l_j⁻¹` corrected.
    pub bundle_coboundary: Variant,
    /// Last factor of `l̄_ijk`: `^(n_i)l̃_ijk` printed, `^(m_ik)(^(n_k)l̃_ijk)` corrected.
    pub tcm_product: Variant,
    /// Last factor of the inverse `l`: `^(n_i⁻¹)l_ijk⁻¹` printed,
    /// `^(n_k⁻¹)(^(m_ik⁻¹)l_ijk⁻¹)` corrected.
    pub tcm_inverse: Variant,
}

impl Formulas {
    pub const PRINTED: Formulas = Formulas {
        bundle_product: Variant::Printed,
        bundle_coboundary: Variant::Printed,
        tcm_product: Variant::Printed,
        tcm_inverse: Variant::Printed,
    };

    /// The readings that pass the closure oracle; see
    /// [`crate::formulas::adjudicate`].
    pub const ADOPTED: Formulas = Formulas {
        bundle_product: Variant::Corrected,
        bundle_coboundary: Variant::Corrected,
        tcm_product: Variant::Corrected,
        tcm_inverse: Variant::Corrected,
    };
}

/// Cocycle data at one of the four levels.
#[derive(Clone, Debug)]
pub struct Cocycle {
    level: Level,
    structure: Structure,
    nerve: Arc<Nerve>,
    comps: Vec<Vec<usize>>,
}

impl PartialEq for Cocycle {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.comps == o.comps && self.structure.same(&o.structure) && *self.nerve == *o.nerve
    }
}

impl Eq for Cocycle {}

/// Coboundary (stable isomorphism) data, shaped by
/// [`Level::witness_components`].
#[derive(Clone, Debug)]
pub struct Coboundary {
    level: Level,
    structure: Structure,
    nerve: Arc<Nerve>,
    comps: Vec<Vec<usize>>,
}

impl PartialEq for Coboundary {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.comps == o.comps && self.structure.same(&o.structure) && *self.nerve == *o.nerve
    }
}

impl Eq for Coboundary {}

fn check_shape(s: &Structure, nerve: &Nerve, comps: &[Component], data: &[Vec<usize>]) -> Result<()> {
    if data.len() != comps.len() {
        return Err(structural(format!("expected {} components, got {}", comps.len(), data.len())));
    }
    for (c, d) in comps.iter().zip(data) {
        let want = nerve.tuples(c.arity).len();
        if d.len() != want {
            return Err(structural(format!(
                "component {} has {} entries, nerve has {want} tuples of arity {}",
                c.name,
                d.len(),
                c.arity
            )));
        }
        let order = s.group(c.slot).order();
        if let Some(p) = d.iter().position(|&x| x >= order) {
            let t = &nerve.tuples(c.arity).list[p];
            return Err(structural(format!(
                "component {} at {t:?} is {} but the group has order {order}",
                c.name, d[p]
            )));
        }
    }
    Ok(())
}

fn build(
    nerve: &Nerve,
    comps: &[Component],
    mut f: impl FnMut(usize, &[usize]) -> usize,
) -> Vec<Vec<usize>> {
    comps
        .iter()
        .enumerate()
        .map(|(c, spec)| nerve.tuples(spec.arity).list.iter().map(|t| f(c, t)).collect())
        .collect()
}

fn getter<'a>(nerve: &'a Nerve, comps: &'a [Vec<usize>]) -> impl Fn(usize, &[usize]) -> usize + 'a {
    move |c, t| comps[c][nerve.position(t).expect("tuple supported")]
}

impl Cocycle {
    /// Wraps raw component arrays, checking level/structure agreement and
    /// that every entry is present and in range.
    pub fn new(level: Level, structure: Structure, nerve: Arc<Nerve>, comps: Vec<Vec<usize>>) -> Result<Self> {
        structure.check_level(level)?;
        check_shape(&structure, &nerve, level.components(), &comps)?;
        Ok(Self {
            level,
            structure,
            nerve,
            comps,
        })
    }

    /// Builds the components from a function of `(component, tuple)`.
    pub fn from_fn(
        level: Level,
        structure: Structure,
        nerve: Arc<Nerve>,
        f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        structure.check_level(level)?;
        let comps = build(&nerve, level.components(), f);
        Self::new(level, structure, nerve, comps)
    }

    /// All components identically `e`.
    pub fn trivial(level: Level, structure: Structure, nerve: Arc<Nerve>) -> Result<Self> {
        structure.check_level(level)?;
        let ids: Vec<usize> = level.components().iter().map(|c| structure.group(c.slot).identity()).collect();
        Self::from_fn(level, structure, nerve, |c, _| ids[c])
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    /// Value of component `c` at tuple `t`.
    pub fn get(&self, c: usize, t: &[usize]) -> usize {
        let pos = self.nerve.position(t).expect("tuple supported");
        self.comps[c][pos]
    }

    /// Index of the component with the given name.
    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.level.components().iter().position(|c| c.name == name)
    }

    /// Whether every entry on a tuple with a repeated index is `e`.
    pub fn is_normalized(&self) -> bool {
        self.level.components().iter().enumerate().all(|(c, spec)| {
            let e = self.structure.group(spec.slot).identity();
            self.nerve
                .tuples(spec.arity)
                .list
                .iter()
                .zip(&self.comps[c])
                .all(|(t, &v)| !has_repeat(t) || v == e)
        })
    }

    /// Lexicographic comparison key: components in order, each in tuple
    /// order.
    pub fn sort_key(&self) -> &[Vec<usize>] {
        &self.comps
    }
}

pub(crate) fn has_repeat(t: &[usize]) -> bool {
    (1..t.len()).any(|a| t[..a].contains(&t[a]))
}

impl Coboundary {
    pub fn new(level: Level, structure: Structure, nerve: Arc<Nerve>, comps: Vec<Vec<usize>>) -> Result<Self> {
        structure.check_level(level)?;
        check_shape(&structure, &nerve, level.witness_components(), &comps)?;
        Ok(Self {
            level,
            structure,
            nerve,
            comps,
        })
    }

    pub fn from_fn(
        level: Level,
        structure: Structure,
        nerve: Arc<Nerve>,
        f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        structure.check_level(level)?;
        let comps = build(&nerve, level.witness_components(), f);
        Self::new(level, structure, nerve, comps)
    }

    /// Identity witness data.
    pub fn identity(level: Level, structure: Structure, nerve: Arc<Nerve>) -> Result<Self> {
        structure.check_level(level)?;
        let ids: Vec<usize> = level
            .witness_components()
            .iter()
            .map(|c| structure.group(c.slot).identity())
            .collect();
        Self::from_fn(level, structure, nerve, |c, _| ids[c])
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    pub fn get(&self, c: usize, t: &[usize]) -> usize {
        self.comps[c][self.nerve.position(t).expect("tuple supported")]
    }
}

fn subject(level: Level) -> String {
    format!("{level} cocycle")
}

/// Checks every defining relation on every tuple of the matching arity.
pub fn verify(c: &Cocycle) -> ValidationReport {
    let alg = Alg::new(&c.structure);
    let get = getter(&c.nerve, &c.comps);
    let mut r = ValidationReport::new(subject(c.level));
    for (rel, &(name, arity)) in c.level.relations().iter().enumerate() {
        for t in &c.nerve.tuples(arity).list {
            if !alg.relation_holds(c.level, rel, t, &get) {
                r.fail(name, t);
                break;
            }
        }
    }
    r
}

fn assert_valid(c: Cocycle, what: &str) -> Result<Cocycle> {
    let r = verify(&c);
    match r.violations.first() {
        None => Ok(c),
        Some(v) => Err(invariant(format!("{what} fails {}", v.axiom), &v.witness)),
    }
}

fn same_shape(a: &Cocycle, b: &Cocycle) -> Result<()> {
    if a.level != b.level {
        return Err(structural(format!("levels differ: {} vs {}", a.level, b.level)));
    }
    if !a.structure.same(&b.structure) {
        return Err(structural("structures differ"));
    }
    if *a.nerve != *b.nerve {
        return Err(structural("nerves differ"));
    }
    Ok(())
}

/// Whether `product` and `inverse` are available at this level and
/// structure.
pub fn product_supported(level: Level, s: &Structure) -> bool {
    match level {
        Level::Bundle1 | Level::TcmGerbe2 => true,
        Level::Gerbe2 => s.gerbe_product_defined(),
        Level::TwoGerbe3 => matches!(s, Structure::TwoCrossed(t) if t.is_abelian_two_gerbe()),
    }
}

fn require_product(level: Level, s: &Structure) -> Result<()> {
    if product_supported(level, s) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "products at level {level} are only defined for abelian coefficients"
        )))
    }
}

pub fn product(a: &Cocycle, b: &Cocycle) -> Result<Cocycle> {
    product_with(a, b, &Formulas::ADOPTED)
}

/// Product under the given formula readings; the result is re-verified.
pub fn product_with(a: &Cocycle, b: &Cocycle, f: &Formulas) -> Result<Cocycle> {
    same_shape(a, b)?;
    require_product(a.level, &a.structure)?;
    let alg = Alg::new(&a.structure);
    let (ga, gb) = (getter(&a.nerve, &a.comps), getter(&b.nerve, &b.comps));
    let comps = build(&a.nerve, a.level.components(), |c, t| {
        alg.product_at(a.level, f, c, t, &ga, &gb)
    });
    assert_valid(
        Cocycle {
            comps,
            ..a.clone()
        },
        "product",
    )
}

pub fn inverse(a: &Cocycle) -> Result<Cocycle> {
    inverse_with(a, &Formulas::ADOPTED)
}

pub fn inverse_with(a: &Cocycle, f: &Formulas) -> Result<Cocycle> {
    require_product(a.level, &a.structure)?;
    let alg = Alg::new(&a.structure);
    let ga = getter(&a.nerve, &a.comps);
    let comps = build(&a.nerve, a.level.components(), |c, t| {
        alg.inverse_at(a.level, f, c, t, &ga)
    });
    assert_valid(
        Cocycle {
            comps,
            ..a.clone()
        },
        "inverse",
    )
}

pub fn apply_coboundary(c: &Cocycle, w: &Coboundary) -> Result<Cocycle> {
    apply_coboundary_with(c, w, &Formulas::ADOPTED)
}

/// Acts on `c` with the stable-isomorphism data `w`; the result is
/// re-verified.
pub fn apply_coboundary_with(c: &Cocycle, w: &Coboundary, f: &Formulas) -> Result<Cocycle> {
    if c.level != w.level || !c.structure.same(&w.structure) || *c.nerve != *w.nerve {
        return Err(structural("coboundary does not match the cocycle"));
    }
    require_coboundary(c.level, &c.structure)?;
    let out = apply_coboundary_unchecked(c, w, f);
    assert_valid(out, "coboundary action")
}

pub(crate) fn require_coboundary(level: Level, s: &Structure) -> Result<()> {
    if level == Level::TwoGerbe3 && !matches!(s, Structure::TwoCrossed(t) if t.is_abelian_two_gerbe()) {
        return Err(Error::Unsupported(
            "stable isomorphisms of 3-cocycles are only implemented for A → 1 → 1".into(),
        ));
    }
    Ok(())
}

pub(crate) fn apply_coboundary_unchecked(c: &Cocycle, w: &Coboundary, f: &Formulas) -> Cocycle {
    let alg = Alg::new(&c.structure);
    let (gc, gw) = (getter(&c.nerve, &c.comps), getter(&w.nerve, &w.comps));
    let comps = build(&c.nerve, c.level.components(), |k, t| {
        alg.coboundary_at(c.level, f, k, t, &gc, &gw)
    });
    Cocycle {
        comps,
        ..c.clone()
    }
}

/// A morphism of coefficient structures.
#[derive(Clone, Debug)]
pub enum Morphism {
    Crossed(CrossedModuleMorphism),
    TwoCrossed(TwoCrossedModuleMorphism),
}

impl Morphism {
    fn source(&self) -> Structure {
        match self {
            Morphism::Crossed(f) => Structure::Crossed(f.source.clone()),
            Morphism::TwoCrossed(f) => Structure::TwoCrossed(f.source.clone()),
        }
    }

    fn target(&self) -> Structure {
        match self {
            Morphism::Crossed(f) => Structure::Crossed(f.target.clone()),
            Morphism::TwoCrossed(f) => Structure::TwoCrossed(f.target.clone()),
        }
    }

    fn map(&self, slot: Slot) -> &GroupHom {
        match (self, slot) {
            (Morphism::Crossed(f), Slot::L) => &f.lam,
            (Morphism::Crossed(f), Slot::M) => &f.kap,
            (Morphism::TwoCrossed(f), Slot::L) => &f.lam,
            (Morphism::TwoCrossed(f), Slot::M) => &f.mu,
            (Morphism::TwoCrossed(f), Slot::N) => &f.nu,
            (Morphism::Crossed(_), Slot::N) => unreachable!(),
        }
    }
}

/// Applies the morphism's homomorphisms componentwise.
pub fn change_structure(c: &Cocycle, f: &Morphism) -> Result<Cocycle> {
    if !c.structure.same(&f.source()) {
        return Err(structural("morphism source differs from the cocycle's structure"));
    }
    let comps = c
        .level
        .components()
        .iter()
        .zip(&c.comps)
        .map(|(spec, d)| d.iter().map(|&x| f.map(spec.slot).apply(x)).collect())
        .collect();
    let out = Cocycle::new(c.level, f.target(), c.nerve.clone(), comps)?;
    assert_valid(out, "changed cocycle")
}

/// Pulls back along a nerve map into the cocycle's nerve.
pub fn pullback(c: &Cocycle, f: &NerveMap) -> Result<Cocycle> {
    if *f.target != *c.nerve {
        return Err(structural("nerve map does not land in the cocycle's nerve"));
    }
    let src = f.source.clone();
    let comps = build(&src, c.level.components(), |k, t| c.get(k, &f.apply(t)));
    let out = Cocycle::new(c.level, c.structure.clone(), src, comps)?;
    assert_valid(out, "pullback")
}

/// Pulls back coboundary data along a nerve map.
pub fn pullback_coboundary(w: &Coboundary, f: &NerveMap) -> Result<Coboundary> {
    if *f.target != *w.nerve {
        return Err(structural("nerve map does not land in the coboundary's nerve"));
    }
    let src = f.source.clone();
    let comps = build(&src, w.level.witness_components(), |k, t| w.get(k, &f.apply(t)));
    Coboundary::new(w.level, w.structure.clone(), src, comps)
}

/// The `TcmGerbe2` cocycle with `n_i = value`, `m = e`, `l = e`.
pub fn constant_cocycle(t: &Arc<TwoCrossedModule>, nerve: Arc<Nerve>, value: usize) -> Result<Cocycle> {
    if value >= t.n().order() {
        return Err(structural(format!("{value} is not an element of N")));
    }
    let (em, el) = (t.m().identity(), t.l().identity());
    Cocycle::from_fn(Level::TcmGerbe2, Structure::TwoCrossed(t.clone()), nerve, |c, _| {
        [value, em, el][c]
    })
}

/// The `Bundle1` cocycle with `m_i = value` and `l = e`.
pub fn constant_bundle(c: &Arc<CrossedModule>, nerve: Arc<Nerve>, value: usize) -> Result<Cocycle> {
    let el = c.l().identity();
    let out = Cocycle::from_fn(Level::Bundle1, Structure::Crossed(c.clone()), nerve, |k, _| [value, el][k])?;
    assert_valid(out, "constant cocycle")
}

/// Reads a `TcmGerbe2` cocycle over `1 → G → N` as a `Bundle1` cocycle over
/// `G → N`.
pub fn tcm_gerbe_as_bundle(c: &Cocycle) -> Result<Cocycle> {
    let t = match (&c.structure, c.level) {
        (Structure::TwoCrossed(t), Level::TcmGerbe2) if t.l().is_trivial() => t,
        _ => return Err(structural("expected a tcm-gerbe2 cocycle over 1 → G → N")),
    };
    let cm = CrossedModule::new(t.d2().clone(), t.act_nm().clone())?;
    let out = Cocycle::new(
        Level::Bundle1,
        Structure::Crossed(Arc::new(cm)),
        c.nerve.clone(),
        vec![c.comps[0].clone(), c.comps[1].clone()],
    )?;
    assert_valid(out, "reinterpreted cocycle")
}

/// Reads a `TwoGerbe3` cocycle over `1 → G → N` as a `Gerbe2` cocycle over
/// `G → N`.
pub fn two_gerbe_as_gerbe(c: &Cocycle) -> Result<Cocycle> {
    let t = match (&c.structure, c.level) {
        (Structure::TwoCrossed(t), Level::TwoGerbe3) if t.l().is_trivial() => t,
        _ => return Err(structural("expected a two-gerbe3 cocycle over 1 → G → N")),
    };
    let cm = CrossedModule::new(t.d2().clone(), t.act_nm().clone())?;
    let out = Cocycle::new(
        Level::Gerbe2,
        Structure::Crossed(Arc::new(cm)),
        c.nerve.clone(),
        vec![c.comps[0].clone(), c.comps[1].clone()],
    )?;
    assert_valid(out, "reinterpreted cocycle")
}

/// The abelian 4-cocycle `a_ijkl` with values in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianObstruction {
    group: Arc<FiniteGroup>,
    nerve: Arc<Nerve>,
    a: Vec<usize>,
}

impl AbelianObstruction {
    pub fn new(group: Arc<FiniteGroup>, nerve: Arc<Nerve>, a: Vec<usize>) -> Result<Self> {
        if !group.is_abelian() {
            return Err(structural("obstruction coefficients must be abelian"));
        }
        let two = Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&group)));
        check_shape(&two, &nerve, &Level::TwoGerbe3.components()[2..], std::slice::from_ref(&a))?;
        Ok(Self { group, nerve, a })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn values(&self) -> &[usize] {
        &self.a
    }

    pub fn get(&self, t: &[usize]) -> usize {
        self.a[self.nerve.position(t).expect("tuple supported")]
    }

    /// The same data as a `TwoGerbe3` cocycle over `A → 1 → 1`.
    pub fn as_two_gerbe(&self) -> Cocycle {
        let t = Arc::new(TwoCrossedModule::abelian(&self.group));
        let n2 = self.nerve.tuples(2).len();
        let n3 = self.nerve.tuples(3).len();
        Cocycle {
            level: Level::TwoGerbe3,
            structure: Structure::TwoCrossed(t),
            nerve: self.nerve.clone(),
            comps: vec![vec![0; n2], vec![0; n3], self.a.clone()],
        }
    }
}

/// Checks `a_ijkl·a_ijlm·a_jklm = a_iklm·a_ijkm` on every 5-tuple.
pub fn verify_obstruction(o: &AbelianObstruction) -> ValidationReport {
    let a = &o.group;
    let get = |t: &[usize]| o.get(t);
    let mut r = ValidationReport::new("obstruction");
    for t in &o.nerve.tuples(5).list {
        let (i, j, k, l, m) = (t[0], t[1], t[2], t[3], t[4]);
        let lhs = a.prod(&[get(&[i, j, k, l]), get(&[i, j, l, m]), get(&[j, k, l, m])]);
        let rhs = a.mul(get(&[i, k, l, m]), get(&[i, j, k, m]));
        if !r.check(lhs == rhs, "cocycle", t) {
            break;
        }
    }
    r
}

/// Builds a `Bundle1` cocycle over `1 → G` from vertex values `g_i`.
pub fn function_data(g: &Arc<FiniteGroup>, nerve: Arc<Nerve>, values: &[usize]) -> Result<Cocycle> {
    let top = Structure::Crossed(Arc::new(CrossedModule::top(g)));
    if values.len() != nerve.index_count() {
        return Err(structural("one value per index expected"));
    }
    let out = Cocycle::from_fn(Level::Bundle1, top, nerve, |c, t| if c == 0 { values[t[0]] } else { 0 })?;
    assert_valid(out, "function data")
}

/// Builds a `Gerbe2` cocycle over `1 → G` from edge values `g_ij` on
/// strictly increasing pairs, extended by `g_ii = e`, `g_ji = g_ij⁻¹`.
pub fn bundle_data(g: &Arc<FiniteGroup>, nerve: Arc<Nerve>, edge: impl Fn(usize, usize) -> usize) -> Result<Cocycle> {
    let top = Structure::Crossed(Arc::new(CrossedModule::top(g)));
    let out = Cocycle::from_fn(Level::Gerbe2, top, nerve, |c, t| match c {
        0 if t[0] < t[1] => edge(t[0], t[1]),
        0 if t[0] > t[1] => g.inv(edge(t[1], t[0])),
        _ => g.identity(),
    })?;
    assert_valid(out, "bundle data")
}

/// Crossed-module morphism `(L → M) → (1 → M/∂1 L)` given a projection.
pub fn collapse_to_quotient(c: &Arc<CrossedModule>, pi: &GroupHom) -> CrossedModuleMorphism {
    let top = Arc::new(CrossedModule::top(&pi.target));
    let one = top.l().clone();
    CrossedModuleMorphism {
        source: c.clone(),
        target: top,
        lam: GroupHom::trivial(c.l(), &one),
        kap: pi.clone(),
    }
}

/// `(L → M → N) → (1 → G → N)` given `π₁: M → G`, with `G → N` carrying
/// the induced boundary and action.
pub fn collapse_l(t: &Arc<TwoCrossedModule>, quotient_cm: &CrossedModule, pi1: &GroupHom) -> TwoCrossedModuleMorphism {
    let target = Arc::new(TwoCrossedModule::from_crossed(quotient_cm));
    let one = target.l().clone();
    TwoCrossedModuleMorphism {
        source: t.clone(),
        target,
        lam: GroupHom::trivial(t.l(), &one),
        mu: pi1.clone(),
        nu: GroupHom::identity(t.n()),
    }
}
