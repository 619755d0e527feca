//! Finite groups by Cayley table, homomorphisms, actions, and the
//! subgroup/quotient machinery.

use std::sync::Arc;

use crate::error::{structural, Error, Result};
use crate::report::ValidationReport;

/// A finite group given by its multiplication table.
///
/// Elements are the indices `0..order`. Labels are optional and only used
/// for reporting.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

/// Checks a raw Cayley table against the group axioms.
///
/// Fails with a structural error when the table is not square or has an
/// out-of-range entry; axiom failures are reported with the first witness.
pub fn verify_group(table: &[Vec<usize>]) -> Result<ValidationReport> {
    let n = table.len();
    if n == 0 {
        return Err(structural("group table is empty"));
    }
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(structural(format!(
                "group table row {a} has length {}, expected {n}",
                row.len()
            )));
        }
        if let Some(b) = row.iter().position(|&x| x >= n) {
            return Err(structural(format!(
                "group table entry [{a}][{b}] = {} out of range",
                row[b]
            )));
        }
    }
    let mut r = ValidationReport::new("group");
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    r.fail("associativity", &[a, b, c]);
                    break 'assoc;
                }
            }
        }
    }
    let two_sided = |e: usize| (0..n).all(|a| table[e][a] == a && table[a][e] == a);
    match (0..n).find(|&e| two_sided(e)) {
        Some(e) => {
            for (a, row) in table.iter().enumerate() {
                if !(0..n).any(|b| row[b] == e && table[b][a] == e) {
                    r.fail("inverse", &[a]);
                    break;
                }
            }
        }
        None => {
            let cand = (0..n).find(|&x| table[x][x] == x).unwrap_or(0);
            let a = (0..n)
                .find(|&a| table[cand][a] != a || table[a][cand] != a)
                .unwrap_or(0);
            r.fail("identity", &[cand, a]);
        }
    }
    Ok(r)
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, rejecting anything that is not a
    /// group.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let report = verify_group(&table)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Invariant {
                what: format!("group axiom {}", v.axiom),
                witness: v.witness.clone(),
            });
        }
        let n = table.len();
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        Ok(Self::from_flat_unchecked(n, flat))
    }

    fn from_flat_unchecked(order: usize, table: Vec<usize>) -> Self {
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] == a))
            .expect("identity");
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a * order + b] == identity)
                    .expect("inverse")
            })
            .collect();
        Self {
            order,
            table,
            identity,
            inverse,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(structural(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z_n with `k` the residue class of `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let table = (0..n * n).map(|x| (x / n + x % n) % n).collect();
        Self::from_flat_unchecked(n, table)
    }

    /// Builds the group generated by closing a set of permutations under
    /// composition. Elements are listed in lexicographic order of their
    /// images, so the identity permutation comes first. `(p∘q)(x) = p(q(x))`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Self {
        let degree = generators.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut frontier = 0;
        while frontier < elems.len() {
            let p = elems[frontier].clone();
            frontier += 1;
            for g in generators {
                let q: Vec<usize> = (0..degree).map(|x| p[g[x]]).collect();
                if !elems.contains(&q) {
                    elems.push(q);
                }
            }
        }
        elems.sort();
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let c: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
                table[a * n + b] = elems.binary_search(&c).expect("closed");
            }
        }
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        let mut g = Self::from_flat_unchecked(n, table);
        g.labels = Some(labels);
        g
    }

    /// The symmetric group on `n` letters.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            gens.push(cycle);
        } else {
            gens.push((0..n.max(1)).collect());
        }
        Self::from_permutations(&gens)
    }

    /// The dihedral group of order `2n` as symmetries of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
        Self::from_permutations(&[rot, refl])
    }

    /// The quaternion group of order 8, as its regular permutation
    /// representation.
    pub fn quaternion() -> Self {
        // Elements 1,i,j,k,-1,-i,-j,-k; sign bit 4.
        let unit = |a: usize, b: usize| -> usize {
            let (sa, ua) = (a / 4, a % 4);
            let (sb, ub) = (b / 4, b % 4);
            let (neg, u) = match (ua, ub) {
                (0, u) | (u, 0) => (false, u),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            };
            let s = (sa + sb + neg as usize) % 2;
            s * 4 + u
        };
        let gens: Vec<Vec<usize>> = [1, 2]
            .iter()
            .map(|&g| (0..8).map(|x| unit(x, g)).collect())
            .collect();
        let mut q = Self::from_permutations(&gens);
        q.labels = None;
        q
    }

    /// The direct product with elements `(a, b)` indexed as `a·|h| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (ng, nh) = (g.order, h.order);
        let n = ng * nh;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let a = g.mul(x / nh, y / nh);
                let b = h.mul(x % nh, y % nh);
                table[x * n + y] = a * nh + b;
            }
        }
        Self::from_flat_unchecked(n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Product of a sequence of elements, left to right.
    pub fn prod(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Element with the given label, if labels are present.
    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// All subgroups, each as a sorted element list, ordered by size then
    /// lexicographically. Brute force; intended for orders ≤ 16.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = vec![vec![self.identity]];
        while let Some(gens) = queue.pop() {
            let s = self.generated(&gens);
            if !seen.insert(s.elements.clone()) {
                continue;
            }
            for a in self.elements() {
                if !s.contains(a) {
                    let mut g2 = s.elements.clone();
                    g2.push(a);
                    queue.push(g2);
                }
            }
            out.push(s);
        }
        out.sort_by(|a, b| {
            (a.len(), &a.elements).cmp(&(b.len(), &b.elements))
        });
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.subgroups()
            .into_iter()
            .filter(|s| is_normal(self, &s.elements))
            .collect()
    }

    /// The subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !elems.contains(&y) {
                    elems.push(y);
                }
            }
        }
        Subgroup::from_elements(elems)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        out.push('(');
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// A subset of a parent group, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    /// Position of `a` inside the subgroup, which is its index in the
    /// materialized group.
    pub fn position(&self, a: usize) -> Option<usize> {
        self.elements.binary_search(&a).ok()
    }

    /// Checks closure under products and inverses and presence of the identity.
    pub fn is_subgroup_of(&self, g: &FiniteGroup) -> bool {
        !self.is_empty()
            && self.elements.iter().all(|&a| a < g.order())
            && self.contains(g.identity())
            && self.elements.iter().all(|&a| {
                self.contains(g.inv(a)) && self.elements.iter().all(|&b| self.contains(g.mul(a, b)))
            })
    }
}

/// Whether `g·s·g⁻¹ ∈ subset` for all `g` and all `s` in the subset.
pub fn is_normal(g: &FiniteGroup, subset: &[usize]) -> bool {
    let s = Subgroup::from_elements(subset.to_vec());
    g.elements()
        .all(|x| s.elements.iter().all(|&y| s.contains(g.conj(x, y))))
}

/// Materializes a subgroup as a group in its own right, with its embedding.
pub fn embedding(g: &Arc<FiniteGroup>, sub: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !sub.is_subgroup_of(g) {
        return Err(structural("subset is not a subgroup"));
    }
    let n = sub.len();
    let mut table = vec![0; n * n];
    for (i, &a) in sub.elements.iter().enumerate() {
        for (j, &b) in sub.elements.iter().enumerate() {
            table[i * n + j] = sub.position(g.mul(a, b)).expect("closed");
        }
    }
    let mut h = FiniteGroup::from_flat_unchecked(n, table);
    if let Some(labels) = g.labels() {
        h.labels = Some(sub.elements.iter().map(|&a| labels[a].clone()).collect());
    }
    let h = Arc::new(h);
    let emb = GroupHom::new(h.clone(), g.clone(), sub.elements.clone())?;
    Ok((h, emb))
}

/// The quotient `g/n` with its projection.
///
/// Cosets are ordered by their least element, so the identity coset comes
/// first whenever the identity is element 0.
pub fn quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !n.is_subgroup_of(g) {
        return Err(structural("subset is not a subgroup"));
    }
    if !is_normal(g, &n.elements) {
        let w = g
            .elements()
            .flat_map(|x| n.elements.iter().map(move |&y| (x, y)))
            .find(|&(x, y)| !n.contains(g.conj(x, y)))
            .expect("witness");
        return Err(Error::NotNormal(format!(
            "conjugating {} by {} leaves the subgroup",
            g.label(w.1),
            g.label(w.0)
        )));
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset_of[a] == usize::MAX {
            let c = reps.len();
            reps.push(a);
            for &k in &n.elements {
                coset_of[g.mul(a, k)] = c;
            }
        }
    }
    let q = reps.len();
    let mut table = vec![0; q * q];
    for a in g.elements() {
        for b in g.elements() {
            let cell = coset_of[a] * q + coset_of[b];
            let c = coset_of[g.mul(a, b)];
            if a == reps[coset_of[a]] && b == reps[coset_of[b]] {
                table[cell] = c;
            } else if table[cell] != c {
                return Err(crate::error::invariant("coset product not well defined", &[a, b]));
            }
        }
    }
    let qg = Arc::new(FiniteGroup::from_flat_unchecked(q, table));
    let proj = GroupHom::new(g.clone(), qg.clone(), coset_of)?;
    Ok((qg, proj))
}

/// A map between groups, checked for shape on construction and for
/// multiplicativity by [`hom_verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub map: Vec<usize>,
}

impl GroupHom {
    /// Shape check only: one image per source element, each in range.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(structural(format!(
                "map has {} entries for a source of order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(a) = map.iter().position(|&x| x >= target.order()) {
            return Err(structural(format!(
                "image of {a} is {} but target has order {}",
                map[a],
                target.order()
            )));
        }
        Ok(Self { source, target, map })
    }

    /// Like [`GroupHom::new`] but rejects maps that are not homomorphisms.
    pub fn checked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        let h = Self::new(source, target, map)?;
        let r = hom_verify(&h);
        match r.violations.first() {
            None => Ok(h),
            Some(v) => Err(Error::Invariant {
                what: format!("homomorphism axiom {}", v.axiom),
                witness: v.witness.clone(),
            }),
        }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            map: g.elements().collect(),
        }
    }

    /// The map sending everything to the identity.
    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            map: vec![target.identity(); source.order()],
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if *self.target != *other.source {
            return Err(structural("composing homomorphisms with mismatched groups"));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).len() == 1
    }

    /// All preimages of `b`, ascending.
    pub fn preimages(&self, b: usize) -> Vec<usize> {
        self.source.elements().filter(|&a| self.map[a] == b).collect()
    }
}

/// Checks that the identity is preserved and products are respected.
pub fn hom_verify(h: &GroupHom) -> ValidationReport {
    let (s, t) = (&h.source, &h.target);
    let mut r = ValidationReport::new("homomorphism");
    r.check(h.map[s.identity()] == t.identity(), "identity", &[s.identity()]);
    'outer: for a in s.elements() {
        for b in s.elements() {
            if !r.check(
                h.map[s.mul(a, b)] == t.mul(h.map[a], h.map[b]),
                "multiplicativity",
                &[a, b],
            ) {
                break 'outer;
            }
        }
    }
    r
}

pub fn kernel(h: &GroupHom) -> Subgroup {
    h.preimages(h.target.identity()).into()
}

pub fn image(h: &GroupHom) -> Subgroup {
    Subgroup::from_elements(h.map.clone())
}

impl From<Vec<usize>> for Subgroup {
    fn from(v: Vec<usize>) -> Self {
        Subgroup::from_elements(v)
    }
}

/// A left action of `actor` on `space`; `act[n][l] = ⁿl`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub actor: Arc<FiniteGroup>,
    pub space: Arc<FiniteGroup>,
    act: Vec<usize>,
}

impl GroupAction {
    pub fn new(actor: Arc<FiniteGroup>, space: Arc<FiniteGroup>, act: Vec<Vec<usize>>) -> Result<Self> {
        if act.len() != actor.order() || act.iter().any(|r| r.len() != space.order()) {
            return Err(structural(format!(
                "action table must be {}×{}",
                actor.order(),
                space.order()
            )));
        }
        if act.iter().flatten().any(|&x| x >= space.order()) {
            return Err(structural("action table entry out of range"));
        }
        Ok(Self {
            actor,
            space,
            act: act.into_iter().flatten().collect(),
        })
    }

    pub fn trivial(actor: &Arc<FiniteGroup>, space: &Arc<FiniteGroup>) -> Self {
        let act = (0..actor.order() * space.order())
            .map(|x| x % space.order())
            .collect();
        Self {
            actor: actor.clone(),
            space: space.clone(),
            act,
        }
    }

    /// Conjugation of a group on itself.
    pub fn conjugation(g: &Arc<FiniteGroup>) -> Self {
        let n = g.order();
        let act = (0..n * n).map(|x| g.conj(x / n, x % n)).collect();
        Self {
            actor: g.clone(),
            space: g.clone(),
            act,
        }
    }

    /// Conjugation of `actor` on a group embedded in it as a normal
    /// subgroup.
    pub fn conjugation_on(actor: &Arc<FiniteGroup>, emb: &GroupHom) -> Result<Self> {
        if *emb.target != **actor {
            return Err(structural("embedding does not land in the acting group"));
        }
        let space = &emb.source;
        let mut act = Vec::with_capacity(actor.order() * space.order());
        for g in actor.elements() {
            for l in space.elements() {
                let c = actor.conj(g, emb.apply(l));
                let pre = emb.preimages(c);
                match pre.first() {
                    Some(&x) => act.push(x),
                    None => {
                        return Err(Error::NotNormal(format!(
                            "conjugating {} by {} leaves the subgroup",
                            actor.label(emb.apply(l)),
                            actor.label(g)
                        )));
                    }
                }
            }
        }
        Ok(Self {
            actor: actor.clone(),
            space: space.clone(),
            act,
        })
    }

    /// Builds an action from a function, without checking the axioms.
    pub fn from_fn(
        actor: &Arc<FiniteGroup>,
        space: &Arc<FiniteGroup>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut act = Vec::with_capacity(actor.order() * space.order());
        for a in actor.elements() {
            for l in space.elements() {
                act.push(f(a, l));
            }
        }
        Self {
            actor: actor.clone(),
            space: space.clone(),
            act,
        }
    }

    #[inline]
    pub fn apply(&self, n: usize, l: usize) -> usize {
        self.act[n * self.space.order() + l]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.space.order()).map(|r| r.to_vec()).collect()
    }

    /// Precomposes the actor with a homomorphism into it.
    pub fn pull_back(&self, h: &GroupHom) -> Result<Self> {
        if *h.target != *self.actor {
            return Err(structural("homomorphism does not land in the actor"));
        }
        Ok(Self::from_fn(&h.source, &self.space, |a, l| self.apply(h.apply(a), l)))
    }

    pub fn is_trivial(&self) -> bool {
        self.actor
            .elements()
            .all(|n| self.space.elements().all(|l| self.apply(n, l) == l))
    }
}

/// Checks that the identity acts trivially, the action is compatible with
/// the actor's product, and each element acts by an automorphism.
pub fn action_verify(a: &GroupAction) -> ValidationReport {
    let (g, s) = (&a.actor, &a.space);
    let mut r = ValidationReport::new("action");
    for l in s.elements() {
        if !r.check(a.apply(g.identity(), l) == l, "identity", &[l]) {
            break;
        }
    }
    'compat: for n1 in g.elements() {
        for n2 in g.elements() {
            for l in s.elements() {
                if !r.check(
                    a.apply(g.mul(n1, n2), l) == a.apply(n1, a.apply(n2, l)),
                    "compatibility",
                    &[n1, n2, l],
                ) {
                    break 'compat;
                }
            }
        }
    }
    'auto: for n in g.elements() {
        for l1 in s.elements() {
            for l2 in s.elements() {
                if !r.check(
                    a.apply(n, s.mul(l1, l2)) == s.mul(a.apply(n, l1), a.apply(n, l2)),
                    "automorphism",
                    &[n, l1, l2],
                ) {
                    break 'auto;
                }
            }
        }
    }
    r
}
