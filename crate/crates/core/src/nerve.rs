//! Finite nerves: abstract simplicial complexes on `0..index_count` with
//! simplices of at most five vertices.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::error::{structural, Result};
use crate::report::ValidationReport;

pub const MAX_SIMPLEX: usize = 5;
pub const MAX_INDEX_COUNT: usize = 16;

/// Ordered tuples (repeats allowed) whose support is a simplex, with a
/// dense reverse lookup.
#[derive(Debug)]
pub struct Tuples {
    pub list: Vec<Vec<usize>>,
    code: Vec<u32>,
    base: usize,
}

impl Tuples {
    /// Position of `t` in the list, if its support is a simplex.
    #[inline]
    pub fn position(&self, t: &[usize]) -> Option<usize> {
        let mut c = 0;
        for &x in t.iter().rev() {
            if x >= self.base {
                return None;
            }
            c = c * self.base + x;
        }
        match self.code.get(c).copied().unwrap_or(u32::MAX) {
            u32::MAX => None,
            p => Some(p as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }
}

#[derive(Debug)]
pub struct Nerve {
    index_count: usize,
    simplices: BTreeSet<Vec<usize>>,
    masks: BTreeSet<u32>,
    tuples: [OnceLock<Tuples>; MAX_SIMPLEX + 1],
}

impl Clone for Nerve {
    fn clone(&self) -> Self {
        Self::raw(self.index_count, self.simplices.iter().cloned().collect())
    }
}

impl PartialEq for Nerve {
    fn eq(&self, o: &Self) -> bool {
        self.index_count == o.index_count && self.simplices == o.simplices
    }
}

impl Eq for Nerve {}

fn mask(s: &[usize]) -> u32 {
    s.iter().fold(0, |m, &x| m | (1 << x))
}

impl Nerve {
    /// Stores the given simplices as they are; see [`nerve_verify`].
    pub fn raw(index_count: usize, simplices: Vec<Vec<usize>>) -> Self {
        let simplices: BTreeSet<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let masks = simplices
            .iter()
            .filter(|s| s.iter().all(|&x| x < 32))
            .map(|s| mask(s))
            .collect();
        Self {
            index_count,
            simplices,
            masks,
            tuples: Default::default(),
        }
    }

    /// The face closure of the given maximal simplices, plus all
    /// singletons.
    pub fn from_maximal(index_count: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        if index_count == 0 || index_count > MAX_INDEX_COUNT {
            return Err(structural(format!(
                "index count {index_count} outside 1..={MAX_INDEX_COUNT}"
            )));
        }
        let mut all = BTreeSet::new();
        for i in 0..index_count {
            all.insert(vec![i]);
        }
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.len() > MAX_SIMPLEX {
                return Err(structural(format!("simplex {s:?} has size outside 1..={MAX_SIMPLEX}")));
            }
            if let Some(&x) = s.iter().find(|&&x| x >= index_count) {
                return Err(structural(format!("simplex vertex {x} out of range")));
            }
            for sub in 1u32..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len()).filter(|b| sub >> b & 1 == 1).map(|b| s[b]).collect();
                all.insert(face);
            }
        }
        Ok(Self::raw(index_count, all.into_iter().collect()))
    }

    pub fn point() -> Self {
        Self::from_maximal(1, &[]).expect("valid")
    }

    /// All nonempty subsets of `0..=d`.
    pub fn full_simplex(d: usize) -> Self {
        Self::from_maximal(d + 1, &[(0..=d).collect()]).expect("valid")
    }

    /// Boundary of the `(k+1)`-simplex: a triangulated `k`-sphere on `k+2`
    /// indices.
    pub fn simplex_boundary(k: usize) -> Result<Self> {
        if !(1..=4).contains(&k) {
            return Err(structural(format!("sphere dimension {k} outside 1..=4")));
        }
        let n = k + 2;
        let maximal: Vec<Vec<usize>> = (0..n).map(|skip| (0..n).filter(|&x| x != skip).collect()).collect();
        Self::from_maximal(n, &maximal)
    }

    /// A circle covered by `n ≥ 3` arcs: edges `{i, i+1 mod n}`.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(structural("a circle needs at least three arcs"));
        }
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_maximal(n, &edges)
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    /// Simplices not contained in a larger one.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x)))
            })
            .cloned()
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.simplices.iter().map(|s| s.len()).max().unwrap_or(1) - 1
    }

    /// Whether the support of `t` is a simplex.
    pub fn supports(&self, t: &[usize]) -> bool {
        t.iter().all(|&x| x < self.index_count) && self.masks.contains(&mask(t))
    }

    /// The ordered tuples of the given arity, lexicographically.
    pub fn tuples(&self, arity: usize) -> &Tuples {
        assert!((1..=MAX_SIMPLEX).contains(&arity), "arity {arity} outside 1..=5");
        self.tuples[arity].get_or_init(|| {
            let v = self.index_count;
            let total = v.pow(arity as u32);
            let mut code = vec![u32::MAX; total];
            let mut list = Vec::new();
            let mut t = vec![0; arity];
            for _ in 0..total {
                if self.supports(&t) {
                    let c = t.iter().rev().fold(0, |c, &x| c * v + x);
                    code[c] = list.len() as u32;
                    list.push(t.clone());
                }
                for k in (0..arity).rev() {
                    t[k] += 1;
                    if t[k] < v {
                        break;
                    }
                    t[k] = 0;
                }
            }
            Tuples { list, code, base: v }
        })
    }

    /// Position of `t` among the tuples of its arity.
    #[inline]
    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.tuples(t.len()).position(t)
    }
}

/// Checks face closure and presence of singletons.
pub fn nerve_verify(n: &Nerve) -> ValidationReport {
    let mut r = ValidationReport::new("nerve");
    for s in &n.simplices {
        if s.is_empty() || s.len() > MAX_SIMPLEX {
            r.fail("size", s);
        }
        if s.iter().any(|&x| x >= n.index_count) {
            r.fail("range", s);
        }
    }
    for i in 0..n.index_count {
        r.check(n.simplices.contains(&vec![i]), "singleton", &[i]);
    }
    'closure: for s in &n.simplices {
        for skip in 0..s.len() {
            if s.len() < 2 {
                break;
            }
            let face: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &x)| x).collect();
            if !n.simplices.contains(&face) {
                r.fail("face-closure", s);
                break 'closure;
            }
        }
    }
    r
}

/// A vertex map between nerves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveMap {
    pub source: Arc<Nerve>,
    pub target: Arc<Nerve>,
    pub vertex_map: Vec<usize>,
}

impl NerveMap {
    pub fn new(source: Arc<Nerve>, target: Arc<Nerve>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.index_count() {
            return Err(structural(format!(
                "vertex map has {} entries for {} source indices",
                vertex_map.len(),
                source.index_count()
            )));
        }
        if let Some(&x) = vertex_map.iter().find(|&&x| x >= target.index_count()) {
            return Err(structural(format!("vertex map image {x} out of range")));
        }
        Ok(Self {
            source,
            target,
            vertex_map,
        })
    }

    pub fn identity(n: &Arc<Nerve>) -> Self {
        Self {
            source: n.clone(),
            target: n.clone(),
            vertex_map: (0..n.index_count()).collect(),
        }
    }

    pub fn apply(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&x| self.vertex_map[x]).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NerveMap) -> Result<NerveMap> {
        if *self.target != *other.source {
            return Err(structural("composing nerve maps with mismatched nerves"));
        }
        let map = self.vertex_map.iter().map(|&x| other.vertex_map[x]).collect();
        NerveMap::new(self.source.clone(), other.target.clone(), map)
    }
}

/// Checks that every source simplex lands inside a target simplex.
pub fn nerve_map_verify(f: &NerveMap) -> ValidationReport {
    let mut r = ValidationReport::new("nerve map");
    for s in f.source.simplices() {
        if !r.check(f.target.supports(&f.apply(s)), "simplex-preservation", s) {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Nerve {
        Nerve::simplex_boundary(1).unwrap()
    }

    #[test]
    fn standard_nerves_are_valid() {
        assert!(nerve_verify(&triangle()).is_valid());
        let s2 = Nerve::simplex_boundary(2).unwrap();
        assert!(nerve_verify(&s2).is_valid());
        assert_eq!(s2.index_count(), 4);
        assert_eq!(s2.simplices().filter(|s| s.len() == 3).count(), 4);
        let s3 = Nerve::simplex_boundary(3).unwrap();
        assert_eq!(s3.index_count(), 5);
        assert_eq!(s3.dimension(), 3);
        assert!(!s3.supports(&[0, 1, 2, 3, 4]));
        assert_eq!(triangle(), Nerve::circle(3).unwrap());
    }

    #[test]
    fn missing_singleton_is_reported() {
        let n = Nerve::raw(3, vec![vec![0], vec![1], vec![0, 1]]);
        let r = nerve_verify(&n);
        assert_eq!(r.violation("singleton").unwrap().witness, vec![2]);
        let open = Nerve::raw(2, vec![vec![0], vec![0, 1]]);
        assert!(nerve_verify(&open).violates("face-closure"));
    }

    #[test]
    fn triangle_tuples() {
        let n = triangle();
        let pairs: Vec<Vec<usize>> = n.tuples(2).list.clone();
        assert_eq!(pairs.len(), 9);
        assert_eq!(pairs[0], vec![0, 0]);
        assert_eq!(pairs[8], vec![2, 2]);
        let triples = n.tuples(3);
        assert!(triples.position(&[0, 1, 0]).is_some());
        assert!(triples.position(&[0, 1, 2]).is_none());
        assert_eq!(n.tuples(1).len(), 3);
        for (i, t) in triples.list.iter().enumerate() {
            assert_eq!(triples.position(t), Some(i));
        }
    }

    #[test]
    fn tuple_count_matches_support_count() {
        // k-tuples with support exactly σ number the surjections onto σ.
        fn surj(k: usize, s: usize) -> usize {
            (0..=s)
                .map(|j| {
                    let binom = (1..=j).fold(1, |b, i| b * (s + 1 - i) / i);
                    let term = binom * (s - j).pow(k as u32);
                    (j, term)
                })
                .fold(0i64, |acc, (j, t)| if j % 2 == 0 { acc + t as i64 } else { acc - t as i64 }) as usize
        }
        for n in [triangle(), Nerve::simplex_boundary(2).unwrap(), Nerve::circle(6).unwrap()] {
            for k in 1..=5 {
                let expected: usize = n.simplices().map(|s| surj(k, s.len())).sum();
                assert_eq!(n.tuples(k).len(), expected);
            }
        }
    }

    #[test]
    fn nerve_maps() {
        let tri = Arc::new(triangle());
        let hex = Arc::new(Nerve::circle(6).unwrap());
        assert!(nerve_map_verify(&NerveMap::identity(&tri)).is_valid());
        let refine = NerveMap::new(hex.clone(), tri.clone(), vec![0, 0, 1, 1, 2, 2]).unwrap();
        assert!(nerve_map_verify(&refine).is_valid());
        let modulo = NerveMap::new(hex.clone(), tri.clone(), (0..6).map(|i| i % 3).collect()).unwrap();
        assert!(nerve_map_verify(&modulo).is_valid());
        let seg = Arc::new(Nerve::from_maximal(3, &[vec![0, 1], vec![1, 2]]).unwrap());
        let bad = NerveMap::new(seg.clone(), seg, vec![0, 2, 2]).unwrap();
        assert!(nerve_map_verify(&bad).violates("simplex-preservation"));
        let composed = refine.then(&NerveMap::identity(&tri)).unwrap();
        assert_eq!(composed.vertex_map, vec![0, 0, 1, 1, 2, 2]);
        assert!(nerve_map_verify(&composed).is_valid());
    }
}
