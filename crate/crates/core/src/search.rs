//! A small finite-domain constraint solver: chronological backtracking with
//! each constraint checked as soon as its last variable is assigned.
//!
//! Variables are searched in creation order, so callers control pruning by
//! the order in which they add variables.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default bound on explored candidate assignments.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "GERBE_MAX_CANDIDATES";

/// The budget in force: the environment override or the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

type Check<'a, C> = Box<dyn Fn(&[usize], &C) -> bool + Send + Sync + 'a>;

/// A constraint problem whose checks may read a per-query context `C`.
pub struct Csp<'a, C: ?Sized> {
    domains: Vec<Vec<usize>>,
    checks: Vec<Vec<Check<'a, C>>>,
    constant: Vec<Check<'a, C>>,
}

struct Counter<'b> {
    nodes: &'b AtomicU64,
    limit: u64,
    bound: u128,
}

impl Counter<'_> {
    #[inline]
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.limit {
            return Err(Error::Budget {
                bound: self.bound.to_string(),
                limit: self.limit,
            });
        }
        Ok(())
    }
}

impl<'a, C: ?Sized + Sync> Csp<'a, C> {
    pub fn new() -> Self {
        Self {
            domains: Vec::new(),
            checks: Vec::new(),
            constant: Vec::new(),
        }
    }

    /// Adds a variable and returns its id.
    pub fn add_var(&mut self, domain: Vec<usize>) -> usize {
        self.domains.push(domain);
        self.checks.push(Vec::new());
        self.domains.len() - 1
    }

    /// Adds a constraint over the given variables. The check receives the
    /// whole assignment; only the listed variables are guaranteed set.
    pub fn add_constraint(&mut self, vars: &[usize], check: impl Fn(&[usize], &C) -> bool + Send + Sync + 'a) {
        match vars.iter().max() {
            Some(&last) => self.checks[last].push(Box::new(check)),
            None => self.constant.push(Box::new(check)),
        }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// Product of all domain sizes, saturating.
    pub fn space_size(&self) -> u128 {
        self.domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    fn dfs(
        &self,
        ctx: &C,
        prefix: &[usize],
        stop_at: usize,
        counter: &Counter,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        if !self.constant.iter().all(|f| f(&[], ctx)) {
            return Ok(false);
        }
        let n = stop_at;
        let mut asg = vec![usize::MAX; self.domains.len()];
        if n == 0 {
            return Ok(!visit(&asg[..0]));
        }
        let mut pos = vec![0usize; n];
        let mut d = 0;
        loop {
            let fixed = d < prefix.len();
            let len = if fixed { 1 } else { self.domains[d].len() };
            if pos[d] < len {
                asg[d] = if fixed { prefix[d] } else { self.domains[d][pos[d]] };
                pos[d] += 1;
                counter.tick()?;
                if self.checks[d].iter().all(|f| f(&asg, ctx)) {
                    if d + 1 == n {
                        if !visit(&asg[..n]) {
                            return Ok(true);
                        }
                    } else {
                        d += 1;
                        pos[d] = 0;
                    }
                }
            } else {
                if d == 0 {
                    return Ok(false);
                }
                d -= 1;
            }
        }
    }

    /// The first solution in search order, if any.
    pub fn first(&self, ctx: &C, limit: u64) -> Result<Option<Vec<usize>>> {
        let nodes = AtomicU64::new(0);
        let counter = Counter {
            nodes: &nodes,
            limit,
            bound: self.space_size(),
        };
        let mut found = None;
        self.dfs(ctx, &[], self.len(), &counter, &mut |a| {
            found = Some(a.to_vec());
            false
        })?;
        Ok(found)
    }

    /// All solutions in search order.
    pub fn all(&self, ctx: &C, limit: u64) -> Result<Vec<Vec<usize>>> {
        let nodes = AtomicU64::new(0);
        let counter = Counter {
            nodes: &nodes,
            limit,
            bound: self.space_size(),
        };
        let mut out = Vec::new();
        self.dfs(ctx, &[], self.len(), &counter, &mut |a| {
            out.push(a.to_vec());
            true
        })?;
        Ok(out)
    }

    /// All solutions in search order, with subtrees below a shallow prefix
    /// explored in parallel. The output does not depend on the number of
    /// threads.
    pub fn all_parallel(&self, ctx: &C, limit: u64, workers: usize) -> Result<Vec<Vec<usize>>> {
        if workers <= 1 || self.is_empty() {
            return self.all(ctx, limit);
        }
        let nodes = AtomicU64::new(0);
        let counter = Counter {
            nodes: &nodes,
            limit,
            bound: self.space_size(),
        };
        // Split at the shallowest depth offering enough independent subtrees.
        let mut depth = 0;
        let mut prefixes = vec![Vec::new()];
        while depth < self.len() && prefixes.len() < 4 * workers {
            depth += 1;
            let mut next = Vec::new();
            self.dfs(ctx, &[], depth, &counter, &mut |a| {
                next.push(a.to_vec());
                true
            })?;
            prefixes = next;
        }
        if depth == self.len() {
            return Ok(prefixes);
        }
        let parts: Vec<Result<Vec<Vec<usize>>>> = prefixes
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                self.dfs(ctx, p, self.len(), &counter, &mut |a| {
                    out.push(a.to_vec());
                    true
                })?;
                Ok(out)
            })
            .collect();
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }
}

impl<C: ?Sized + Sync> Default for Csp<'_, C> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn queens(n: usize) -> Csp<'static, ()> {
        let mut csp = Csp::new();
        for _ in 0..n {
            csp.add_var((0..n).collect());
        }
        for a in 0..n {
            for b in a + 1..n {
                csp.add_constraint(&[a, b], move |x, _| {
                    x[a] != x[b] && x[a].abs_diff(x[b]) != b - a
                });
            }
        }
        csp
    }

    #[test]
    fn counts_queens() {
        assert_eq!(queens(6).all(&(), u64::MAX).unwrap().len(), 4);
        assert_eq!(queens(8).all(&(), u64::MAX).unwrap().len(), 92);
        assert_eq!(queens(3).first(&(), u64::MAX).unwrap(), None);
    }

    #[test]
    fn parallel_matches_sequential() {
        let csp = queens(7);
        let seq = csp.all(&(), u64::MAX).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(csp.all_parallel(&(), u64::MAX, w).unwrap(), seq);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = queens(8).all(&(), 10).unwrap_err();
        assert!(matches!(err, Error::Budget { limit: 10, .. }));
    }

    #[test]
    fn context_is_read_per_query() {
        let mut csp: Csp<'_, usize> = Csp::new();
        let v = csp.add_var(vec![0, 1, 2, 3]);
        csp.add_constraint(&[v], move |x, want| x[v] == *want);
        assert_eq!(csp.first(&2, 100).unwrap(), Some(vec![2]));
        assert_eq!(csp.first(&7, 100).unwrap(), None);
    }
}
