//! Equivalence by exhaustive search, enumeration of cocycles and classes,
//! and the group of classes.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cocycle::{
    apply_coboundary_unchecked, has_repeat, inverse, product, product_supported, require_coboundary, trace_reads,
    verify, Alg, Coboundary, Cocycle, Component, Formulas, Level, Structure,
};
use crate::error::{invariant, structural, Result};
use crate::group::verify_group;
use crate::nerve::Nerve;
use crate::search::{budget_from_env, Csp};

/// How cocycle entries on degenerate tuples are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every ordered tuple carries a free entry constrained only by the
    /// relations.
    Full,
    /// Entries on tuples with a repeated index are fixed to `e`. The
    /// relations then force the entries on permuted tuples, so the search
    /// ranges over strictly increasing tuples only.
    Normalized,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Normalized => "normalized",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        [Mode::Full, Mode::Normalized].into_iter().find(|m| m.name() == s)
    }

    /// The mode used when none is requested: normalized for 3-cocycles,
    /// where the full space is out of reach, and full elsewhere.
    pub fn default_for(level: Level) -> Mode {
        match level {
            Level::TwoGerbe3 => Mode::Normalized,
            _ => Mode::Full,
        }
    }
}

/// Search knobs.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Maximum number of explored candidate assignments per search.
    pub budget: u64,
    /// Worker threads for enumeration and class assignment.
    pub workers: usize,
    /// Enumeration mode; `None` picks [`Mode::default_for`].
    pub mode: Option<Mode>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: budget_from_env(),
            workers: 1,
            mode: None,
        }
    }
}

impl SearchOptions {
    pub fn mode_for(&self, level: Level) -> Mode {
        self.mode.unwrap_or(Mode::default_for(level))
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.workers <= 1 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

/// Sort key placing tuples by largest index first, so that constraints
/// close as early as possible.
fn tuple_key(t: &[usize]) -> (usize, bool, usize, Vec<usize>) {
    let increasing = t.windows(2).all(|w| w[0] < w[1]);
    (*t.iter().max().expect("nonempty"), !increasing, t.len(), t.to_vec())
}

/// Variable layout shared by the enumeration and equivalence problems:
/// `var_of[c][p]` is the variable holding component `c` at tuple position
/// `p`, or a fixed value.
#[derive(Clone, Copy, Debug)]
enum Cell {
    Var(usize),
    Fixed(usize),
    /// Alternating extension from the strictly increasing tuple's variable.
    Alt { var: usize, invert: bool },
}

fn layout(
    s: &Structure,
    nerve: &Nerve,
    comps: &[Component],
    mode: Mode,
    alternating: bool,
) -> (Vec<Vec<usize>>, Vec<Vec<Cell>>) {
    let mut order: Vec<(usize, usize)> = Vec::new();
    for (c, spec) in comps.iter().enumerate() {
        for p in 0..nerve.tuples(spec.arity).len() {
            order.push((c, p));
        }
    }
    order.sort_by_key(|&(c, p)| {
        let t = &nerve.tuples(comps[c].arity).list[p];
        (tuple_key(t), c)
    });
    let mut cells: Vec<Vec<Cell>> = comps
        .iter()
        .map(|spec| vec![Cell::Fixed(0); nerve.tuples(spec.arity).len()])
        .collect();
    let mut domains = Vec::new();
    for &(c, p) in &order {
        let spec = comps[c];
        let g = s.group(spec.slot);
        let t = &nerve.tuples(spec.arity).list[p];
        let degenerate = has_repeat(t);
        let increasing = t.windows(2).all(|w| w[0] < w[1]);
        cells[c][p] = if mode == Mode::Normalized && degenerate {
            Cell::Fixed(g.identity())
        } else if alternating && !increasing {
            Cell::Fixed(usize::MAX)
        } else {
            domains.push(g.elements().collect());
            Cell::Var(domains.len() - 1)
        };
    }
    if alternating {
        for (c, spec) in comps.iter().enumerate() {
            let tuples = nerve.tuples(spec.arity);
            for (p, t) in tuples.list.iter().enumerate() {
                if let Cell::Fixed(usize::MAX) = cells[c][p] {
                    let mut sorted = t.clone();
                    let invert = permutation_parity(&mut sorted);
                    let q = tuples.position(&sorted).expect("face");
                    match cells[c][q] {
                        Cell::Var(var) => cells[c][p] = Cell::Alt { var, invert },
                        _ => unreachable!("increasing tuple must carry a variable"),
                    }
                }
            }
        }
    }
    (domains, cells)
}

/// Sorts in place and returns whether the sorting permutation is odd.
fn permutation_parity(t: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 0..t.len() {
        for j in 0..t.len() - 1 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    odd
}

fn read(cells: &[Vec<Cell>], comps: &[Component], s: &Structure, nerve: &Nerve, asg: &[usize], c: usize, t: &[usize]) -> usize {
    match cells[c][nerve.position(t).expect("tuple supported")] {
        Cell::Var(v) => asg[v],
        Cell::Fixed(x) => x,
        Cell::Alt { var, invert } => {
            if invert {
                s.group(comps[c].slot).inv(asg[var])
            } else {
                asg[var]
            }
        }
    }
}

fn vars_of(cells: &[Vec<Cell>], nerve: &Nerve, reads: &[(usize, Vec<usize>)]) -> Vec<usize> {
    reads
        .iter()
        .filter_map(|(c, t)| match cells[*c][nerve.position(t).expect("tuple supported")] {
            Cell::Var(v) | Cell::Alt { var: v, .. } => Some(v),
            Cell::Fixed(_) => None,
        })
        .collect()
}

fn materialize(cells: &[Vec<Cell>], comps: &[Component], s: &Structure, nerve: &Nerve, asg: &[usize]) -> Vec<Vec<usize>> {
    comps
        .iter()
        .enumerate()
        .map(|(c, spec)| {
            nerve
                .tuples(spec.arity)
                .list
                .iter()
                .map(|t| read(cells, comps, s, nerve, asg, c, t))
                .collect()
        })
        .collect()
}

/// The bound checked before enumerating: product of domain sizes over the
/// strictly increasing tuples, the free choices of the search.
fn spanning_bound(s: &Structure, nerve: &Nerve, comps: &[Component]) -> u128 {
    comps.iter().fold(1u128, |acc, spec| {
        let k = nerve
            .tuples(spec.arity)
            .list
            .iter()
            .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
            .count();
        let g = s.group(spec.slot).order() as u128;
        (0..k).fold(acc, |a, _| a.saturating_mul(g))
    })
}

/// Every valid cocycle at the given level, sorted lexicographically.
pub fn enumerate_cocycles(level: Level, s: &Structure, nerve: &Arc<Nerve>, opts: &SearchOptions) -> Result<Vec<Cocycle>> {
    Cocycle::trivial(level, s.clone(), nerve.clone())?;
    let mode = opts.mode_for(level);
    let comps = level.components();
    let bound = spanning_bound(s, nerve, comps);
    if bound > opts.budget as u128 {
        return Err(crate::Error::Budget {
            bound: bound.to_string(),
            limit: opts.budget,
        });
    }
    let (domains, cells) = layout(s, nerve, comps, mode, false);
    let alg = Alg::new(s);
    let mut csp: Csp<'_, ()> = Csp::new();
    for d in domains {
        csp.add_var(d);
    }
    for (rel, &(_, arity)) in level.relations().iter().enumerate() {
        for t in &nerve.tuples(arity).list {
            let reads = trace_reads(s, comps, |g| {
                alg.relation_holds(level, rel, t, g);
            });
            let vars = vars_of(&cells, nerve, &reads);
            let (cells, alg, t) = (&cells, &alg, t.clone());
            csp.add_constraint(&vars, move |asg, _| {
                let get = |c: usize, tt: &[usize]| read(cells, comps, s, nerve, asg, c, tt);
                alg.relation_holds(level, rel, &t, &get)
            });
        }
    }
    let sols = opts.run(|| csp.all_parallel(&(), opts.budget, opts.workers))?;
    let mut out: Vec<Cocycle> = sols
        .iter()
        .map(|a| Cocycle::new(level, s.clone(), nerve.clone(), materialize(&cells, comps, s, nerve, a)))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.sort_key().cmp(b.sort_key()));
    for c in &out {
        let r = verify(c);
        if let Some(v) = r.violations.first() {
            return Err(invariant(format!("enumerated cocycle fails {}", v.axiom), &v.witness));
        }
    }
    Ok(out)
}

/// A reusable search for witnesses `w` with `w·source = target`, the
/// target supplied per query.
pub struct EquivalenceSearch<'a> {
    source: &'a Cocycle,
    cells: Vec<Vec<Cell>>,
    csp: Csp<'a, [Vec<usize>]>,
    budget: u64,
    gauge: bool,
}

/// Result of an equivalence query.
#[derive(Clone, Debug)]
pub struct EquivalenceOutcome {
    pub witness: Option<Coboundary>,
    /// Size of the (gauge-fixed) witness space the search covers.
    pub candidates: u128,
}

impl<'a> EquivalenceSearch<'a> {
    /// Prepares the search from `source`. For `TwoGerbe3` with a normalized
    /// source, witnesses are restricted to alternating data, which loses no
    /// classes between normalized cocycles.
    pub fn new(source: &'a Cocycle, budget: u64) -> Result<Self> {
        Self::build(source, budget, source.level() == Level::TwoGerbe3 && source.is_normalized())
    }

    fn build(source: &'a Cocycle, budget: u64, gauge: bool) -> Result<Self> {
        let (level, s, nerve) = (source.level(), source.structure(), source.nerve());
        require_coboundary(level, s)?;
        let wcomps = level.witness_components();
        let mode = if gauge { Mode::Normalized } else { Mode::Full };
        let (domains, cells) = layout(s, nerve, wcomps, mode, gauge);
        let mut csp: Csp<'a, [Vec<usize>]> = Csp::new();
        for d in domains {
            csp.add_var(d);
        }
        let ccomps = level.components();
        let alg = Arc::new(Alg::new(s));
        let cells_arc = Arc::new(cells.clone());
        let src = source;
        for (k, spec) in ccomps.iter().enumerate() {
            for (p, t) in nerve.tuples(spec.arity).list.iter().enumerate() {
                let x = |c: usize, tt: &[usize]| src.get(c, tt);
                let reads = trace_reads(s, wcomps, |w| {
                    alg.coboundary_at(level, &Formulas::ADOPTED, k, t, &x, w);
                });
                let vars = vars_of(&cells, nerve, &reads);
                let (alg, cells, t) = (alg.clone(), cells_arc.clone(), t.clone());
                csp.add_constraint(&vars, move |asg, target: &[Vec<usize>]| {
                    let x = |c: usize, tt: &[usize]| src.get(c, tt);
                    let w = |c: usize, tt: &[usize]| read(&cells, wcomps, s, nerve, asg, c, tt);
                    alg.coboundary_at(level, &Formulas::ADOPTED, k, &t, &x, &w) == target[k][p]
                });
            }
        }
        Ok(Self {
            source,
            cells,
            csp,
            budget,
            gauge,
        })
    }

    pub fn candidates(&self) -> u128 {
        self.csp.space_size()
    }

    /// Finds a witness carrying the source to `target`, if one exists.
    pub fn find(&self, target: &Cocycle) -> Result<Option<Coboundary>> {
        let s = self.source;
        if target.level() != s.level() || target.nerve() != s.nerve() || target.structure() != s.structure() {
            return Err(structural("cocycles differ in level, structure or nerve"));
        }
        if self.gauge && !target.is_normalized() {
            return Self::build(s, self.budget, false)?.find(target);
        }
        let Some(asg) = self.csp.first(target.components(), self.budget)? else {
            return Ok(None);
        };
        let (level, st, nerve) = (s.level(), s.structure(), s.nerve());
        let comps = materialize(&self.cells, level.witness_components(), st, nerve, &asg);
        let w = Coboundary::new(level, st.clone(), nerve.clone(), comps)?;
        if apply_coboundary_unchecked(s, &w, &Formulas::ADOPTED).components() != target.components() {
            return Err(invariant("witness does not reproduce the target", &[]));
        }
        Ok(Some(w))
    }
}

/// Searches for a witness `w` with `w·c1 = c2` exactly.
pub fn equivalent(c1: &Cocycle, c2: &Cocycle) -> Result<Option<Coboundary>> {
    Ok(equivalent_with(c1, c2, &SearchOptions::default())?.witness)
}

pub fn equivalent_with(c1: &Cocycle, c2: &Cocycle, opts: &SearchOptions) -> Result<EquivalenceOutcome> {
    let search = EquivalenceSearch::new(c1, opts.budget)?;
    let witness = search.find(c2)?;
    Ok(EquivalenceOutcome {
        witness,
        candidates: search.candidates(),
    })
}

/// Classes of cocycles at one level, structure and nerve.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub level: Level,
    pub structure: Structure,
    pub nerve: Arc<Nerve>,
    pub mode: Mode,
    /// Lexicographically least member of each class, in order of discovery.
    pub representatives: Vec<Cocycle>,
    pub class_sizes: Vec<usize>,
    pub product_table: Option<Vec<Vec<usize>>>,
}

impl ClassTable {
    pub fn total(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// One-line summary, e.g. `2 classes (sizes 4,4)`.
    pub fn summary(&self) -> String {
        let sizes: Vec<String> = self.class_sizes.iter().map(|s| s.to_string()).collect();
        let noun = if self.len() == 1 { "class" } else { "classes" };
        format!("{} {noun} (sizes {})", self.len(), sizes.join(","))
    }
}

/// Partitions the enumeration into classes and, where products exist,
/// tabulates the product of classes and certifies it is a group.
pub fn enumerate_classes(level: Level, s: &Structure, nerve: &Arc<Nerve>, opts: &SearchOptions) -> Result<ClassTable> {
    require_coboundary(level, s)?;
    let all = enumerate_cocycles(level, s, nerve, opts)?;
    let (reps, class_of) = partition(&all, opts)?;
    let mut class_sizes = vec![0; reps.len()];
    for &k in &class_of {
        class_sizes[k] += 1;
    }
    let representatives: Vec<Cocycle> = reps.iter().map(|&i| all[i].clone()).collect();
    let mut table = ClassTable {
        level,
        structure: s.clone(),
        nerve: nerve.clone(),
        mode: opts.mode_for(level),
        representatives,
        class_sizes,
        product_table: None,
    };
    if product_supported(level, s) {
        table.product_table = Some(product_table(&table, opts)?);
    }
    Ok(table)
}

/// Splits `all` into equivalence classes, scanning in order: each cocycle
/// joins the first earlier class it matches or opens a new one. Returns the
/// index of each class's first member and the class of every cocycle.
pub fn partition(all: &[Cocycle], opts: &SearchOptions) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut reps: Vec<usize> = Vec::new();
    let mut searches: Vec<EquivalenceSearch> = Vec::new();
    let mut class_of: Vec<usize> = vec![usize::MAX; all.len()];
    let chunk = 256.max(opts.workers * 64);
    let mut start = 0;
    while start < all.len() {
        let end = (start + chunk).min(all.len());
        // Match against the classes known when the chunk starts.
        let matched: Vec<Option<usize>> = opts.run(|| {
            (start..end)
                .into_par_iter()
                .map(|i| first_match(&searches, &all[i]))
                .collect::<Result<Vec<_>>>()
        })?;
        let known = searches.len();
        for (off, m) in matched.into_iter().enumerate() {
            let i = start + off;
            let cls = match m {
                Some(k) => Some(k),
                None => first_match(&searches[known..], &all[i])?.map(|k| k + known),
            };
            class_of[i] = match cls {
                Some(k) => k,
                None => {
                    reps.push(i);
                    searches.push(EquivalenceSearch::new(&all[i], opts.budget)?);
                    searches.len() - 1
                }
            };
        }
        start = end;
    }
    Ok((reps, class_of))
}

fn first_match(searches: &[EquivalenceSearch], c: &Cocycle) -> Result<Option<usize>> {
    for (k, s) in searches.iter().enumerate() {
        if s.find(c)?.is_some() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn product_table(table: &ClassTable, opts: &SearchOptions) -> Result<Vec<Vec<usize>>> {
    let searches: Vec<EquivalenceSearch> = table
        .representatives
        .iter()
        .map(|r| EquivalenceSearch::new(r, opts.budget))
        .collect::<Result<_>>()?;
    let n = table.len();
    let mut out = vec![vec![0; n]; n];
    for (a, ra) in table.representatives.iter().enumerate() {
        for (b, rb) in table.representatives.iter().enumerate() {
            let p = product(ra, rb)?;
            out[a][b] = first_match(&searches, &p)?.ok_or_else(|| invariant("product lies in no class", &[a, b]))?;
        }
    }
    let r = verify_group(&out)?;
    if let Some(v) = r.violations.first() {
        return Err(invariant(format!("class product fails {}", v.axiom), &v.witness));
    }
    let trivial = Cocycle::trivial(table.level, table.structure.clone(), table.nerve.clone())?;
    let e = first_match(&searches, &trivial)?.ok_or_else(|| invariant("trivial cocycle lies in no class", &[]))?;
    if (0..n).any(|a| out[e][a] != a) {
        return Err(invariant("trivial class is not the identity", &[e]));
    }
    for (a, ra) in table.representatives.iter().enumerate() {
        let inv = first_match(&searches, &inverse(ra)?)?.ok_or_else(|| invariant("inverse lies in no class", &[a]))?;
        if out[a][inv] != e {
            return Err(invariant("inverse class is not the table inverse", &[a]));
        }
    }
    Ok(out)
}

/// Index of the class of `c` in `table`.
pub fn class_of(c: &Cocycle, table: &ClassTable) -> Result<usize> {
    let budget = budget_from_env();
    for (k, r) in table.representatives.iter().enumerate() {
        if EquivalenceSearch::new(r, budget)?.find(c)?.is_some() {
            return Ok(k);
        }
    }
    Err(invariant("cocycle matches no representative", &[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{bundle_data, constant_cocycle};
    use crate::corpus;
    use crate::crossed::{CrossedModule, TwoCrossedModule};
    use crate::group::FiniteGroup;
    use crate::Error;

    fn triangle() -> Arc<Nerve> {
        Arc::new(Nerve::simplex_boundary(1).unwrap())
    }

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    fn top(g: &Arc<FiniteGroup>) -> Structure {
        Structure::Crossed(Arc::new(CrossedModule::top(g)))
    }

    #[test]
    fn enumeration_counts() {
        let n = triangle();
        assert_eq!(enumerate_cocycles(Level::Gerbe2, &top(&z2()), &n, &opts()).unwrap().len(), 8);
        let ab = Structure::Crossed(Arc::new(CrossedModule::abelian(&z2())));
        assert_eq!(enumerate_cocycles(Level::Bundle1, &ab, &n, &opts()).unwrap().len(), 8);
        let one = Arc::new(FiniteGroup::trivial());
        let t1 = Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&one)));
        let c1 = top(&one);
        for (level, s) in [
            (Level::Bundle1, &c1),
            (Level::Gerbe2, &c1),
            (Level::TcmGerbe2, &t1),
            (Level::TwoGerbe3, &t1),
        ] {
            let nerve = Arc::new(Nerve::simplex_boundary(3).unwrap());
            assert_eq!(enumerate_cocycles(level, s, &nerve, &opts()).unwrap().len(), 1, "{level}");
        }
    }

    #[test]
    fn enumerated_cocycles_are_sorted_and_distinct() {
        let s = Structure::Crossed(Arc::new(corpus::a3_in_s3()));
        let all = enumerate_cocycles(Level::Bundle1, &s, &triangle(), &opts()).unwrap();
        assert_eq!(all.len(), 54);
        assert!(all.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
    }

    #[test]
    fn z2_bundles_on_circle() {
        let ab = Structure::Crossed(Arc::new(CrossedModule::abelian(&z2())));
        let t = enumerate_classes(Level::Bundle1, &ab, &triangle(), &opts()).unwrap();
        assert_eq!(t.summary(), "2 classes (sizes 4,4)");
        assert_eq!(t.product_table, Some(vec![vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn s3_bundles_on_circle() {
        let t = enumerate_classes(Level::Gerbe2, &top(&corpus::s3()), &triangle(), &opts()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.total(), 216);
        assert!(t.product_table.is_none());
    }

    #[test]
    fn mobius_is_not_trivial() {
        let mobius = bundle_data(&z2(), triangle(), |i, j| usize::from((i, j) == (0, 1))).unwrap();
        let even = bundle_data(&z2(), triangle(), |i, j| usize::from((i, j) != (0, 2))).unwrap();
        let trivial = Cocycle::trivial(Level::Gerbe2, mobius.structure().clone(), triangle()).unwrap();
        let out = equivalent_with(&mobius, &trivial, &opts()).unwrap();
        assert!(out.witness.is_none());
        assert_eq!(out.candidates, 8);
        // holonomy 1·1·0 is trivial
        assert!(equivalent(&even, &trivial).unwrap().is_some());
        let w = equivalent(&mobius, &mobius).unwrap().unwrap();
        assert!(w.components().iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn constants_related_by_boundary_are_equivalent() {
        let t = corpus::two_crossed_module("a3-s3-z4").unwrap();
        let n = t.n();
        let m0 = corpus::s3().by_label("(12)").unwrap();
        for v in n.elements() {
            let a = constant_cocycle(&t, triangle(), v).unwrap();
            let b = constant_cocycle(&t, triangle(), n.mul(t.d2().apply(m0), v)).unwrap();
            let w = equivalent(&a, &b).unwrap().expect("equivalent");
            assert_eq!(crate::cocycle::apply_coboundary(&a, &w).unwrap(), b);
            // 1 and 3 lie outside the image of ∂2 = {0, 2}
            let c = constant_cocycle(&t, Arc::new(Nerve::point()), 1).unwrap();
            let e = constant_cocycle(&t, Arc::new(Nerve::point()), 0).unwrap();
            assert!(equivalent(&c, &e).unwrap().is_none());
        }
    }

    #[test]
    fn bundle_class_group() {
        let s = Structure::Crossed(Arc::new(corpus::a3_in_s3()));
        let t = enumerate_classes(Level::Bundle1, &s, &triangle(), &opts()).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.product_table.is_some());
        let trivial = Cocycle::trivial(Level::Bundle1, s.clone(), triangle()).unwrap();
        let e = class_of(&trivial, &t).unwrap();
        for c in enumerate_cocycles(Level::Bundle1, &s, &triangle(), &opts()).unwrap() {
            let p = product(&c, &inverse(&c).unwrap()).unwrap();
            assert_eq!(class_of(&p, &t).unwrap(), e);
        }
    }

    #[test]
    fn chain_gerbe_classes() {
        let s = Structure::TwoCrossed(Arc::new(corpus::chain_z2_z4_z2()));
        let t = enumerate_classes(Level::TcmGerbe2, &s, &triangle(), &opts()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.product_table, Some(vec![vec![0]]));
    }

    #[test]
    fn workers_do_not_change_results() {
        let s = Structure::Crossed(Arc::new(corpus::a3_in_s3()));
        let one = enumerate_classes(Level::Bundle1, &s, &triangle(), &opts()).unwrap();
        let four = enumerate_classes(
            Level::Bundle1,
            &s,
            &triangle(),
            &SearchOptions {
                workers: 4,
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(one.representatives, four.representatives);
        assert_eq!(one.class_sizes, four.class_sizes);
        assert_eq!(one.product_table, four.product_table);
    }

    #[test]
    fn budget_is_reported() {
        let s = top(&corpus::s3());
        let nerve = Arc::new(Nerve::simplex_boundary(2).unwrap());
        let err = enumerate_cocycles(
            Level::Gerbe2,
            &s,
            &nerve,
            &SearchOptions {
                budget: 1000,
                ..opts()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Budget { limit: 1000, .. }));
    }

    #[test]
    fn nonabelian_three_cocycles_are_unsupported() {
        let s = Structure::TwoCrossed(Arc::new(corpus::chain_z2_z4_z2()));
        let c = Cocycle::trivial(Level::TwoGerbe3, s, triangle()).unwrap();
        assert!(matches!(equivalent(&c, &c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn z2_three_cocycles_on_three_sphere() {
        let s = Structure::TwoCrossed(Arc::new(TwoCrossedModule::abelian(&z2())));
        let nerve = Arc::new(Nerve::simplex_boundary(3).unwrap());
        let t = enumerate_classes(Level::TwoGerbe3, &s, &nerve, &opts()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.total(), 32);
    }
}
