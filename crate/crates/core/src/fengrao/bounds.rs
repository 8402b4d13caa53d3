use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::pair::{BoundKind, CodePairSpec, WeightEntry, WeightProfile};
use super::{BasisContext, FengRaoError};
use crate::monomial::{rank, unrank, DeltaSet};

pub const MAX_SEARCH_WINDOW: usize = 40;
pub const MAX_SEARCH_V: usize = 8;

/// Limits on the exhaustive subset search. `v = 1` and `v = #window` are always
/// searched since they need at most one pass over the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCap {
    pub max_window: usize,
    pub max_v: usize,
}

impl Default for SearchCap {
    fn default() -> Self {
        SearchCap { max_window: MAX_SEARCH_WINDOW, max_v: MAX_SEARCH_V }
    }
}

impl SearchCap {
    pub fn allows(&self, window: usize, v: usize) -> bool {
        v <= 1 || v >= window || (window <= self.max_window && v <= self.max_v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { words: vec![0; len.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Bitset) -> Bitset {
        Bitset { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }
}

/// `min #(A_1 | ... | A_v)` over `v`-subsets of `cands`, exhaustively with pruning.
/// Returns `None` when `v` is zero or exceeds the number of candidates.
pub fn min_union_subset(cands: &[Bitset], v: usize) -> Option<u64> {
    if v == 0 || v > cands.len() {
        return None;
    }
    let mut sorted: Vec<&Bitset> = cands.iter().collect();
    sorted.sort_by_key(|b| b.count());
    if v == 1 {
        return Some(sorted[0].count());
    }
    // the v smallest give a first incumbent
    let seed = sorted[1..v].iter().fold(sorted[0].clone(), |acc, b| acc.union(b)).count();
    let best = AtomicU64::new(seed);
    let last_first = sorted.len() - v;
    (0..=last_first).into_par_iter().for_each(|i| {
        if sorted[i].count() >= best.load(Ordering::Relaxed) {
            return;
        }
        dfs(&sorted, v, i + 1, 1, sorted[i].clone(), &best);
    });
    Some(best.into_inner())
}

fn dfs(sorted: &[&Bitset], v: usize, start: usize, depth: usize, acc: Bitset, best: &AtomicU64) {
    if depth == v {
        best.fetch_min(acc.count(), Ordering::Relaxed);
        return;
    }
    let remaining = v - depth;
    for i in start..=sorted.len() - remaining {
        let incumbent = best.load(Ordering::Relaxed);
        // candidates are sorted, so no later single set can help either
        if sorted[i].count() >= incumbent {
            break;
        }
        let next = acc.union(sorted[i]);
        // the union only grows as more sets are added
        if next.count() >= incumbent {
            continue;
        }
        dfs(sorted, v, i + 1, depth + 1, next, best);
    }
}

fn up_set(delta: &DeltaSet, pos: usize) -> Bitset {
    let bounds = delta.bounds();
    let n = delta.len();
    let m = delta.monomial(pos);
    let mut b = Bitset::new(n);
    for r in 0..n {
        if m.divides(&unrank(bounds, r)) {
            b.insert(r);
        }
    }
    b
}

fn down_set(delta: &DeltaSet, pos: usize) -> Bitset {
    let bounds = delta.bounds();
    let n = delta.len();
    let m = delta.monomial(pos);
    let mut b = Bitset::new(n);
    for r in 0..n {
        if unrank(bounds, r).divides(m) {
            b.insert(r);
        }
    }
    debug_assert!(b.contains(rank(bounds, m)));
    b
}

fn search(window: &[usize], v: usize, cap: SearchCap, make: impl Fn(usize) -> Bitset) -> Result<u64, FengRaoError> {
    if !cap.allows(window.len(), v) {
        return Err(FengRaoError::BoundNotComputed { window: window.len(), v });
    }
    let cands: Vec<Bitset> = window.iter().map(|&p| make(p)).collect();
    Ok(min_union_subset(&cands, v).expect("window holds L1 \\ L2"))
}

/// `min { D(K) : K in {N_u..N_n} & L_1, #K = v }`.
pub fn rghw_bound_primary(pair: &CodePairSpec, v: usize) -> Result<u64, FengRaoError> {
    rghw_bound_primary_capped(pair, v, SearchCap::default())
}

pub fn rghw_bound_primary_capped(pair: &CodePairSpec, v: usize, cap: SearchCap) -> Result<u64, FengRaoError> {
    pair.check_v(v)?;
    search(&pair.primary_window(), v, cap, |p| up_set(pair.delta(), p))
}

/// `min { D_perp(K) : K in {N_1..N_{u_perp}} \ L_2, #K = v }`.
pub fn rghw_bound_dual(pair: &CodePairSpec, v: usize) -> Result<u64, FengRaoError> {
    rghw_bound_dual_capped(pair, v, SearchCap::default())
}

pub fn rghw_bound_dual_capped(pair: &CodePairSpec, v: usize, cap: SearchCap) -> Result<u64, FengRaoError> {
    pair.check_v(v)?;
    search(&pair.dual_window(), v, cap, |p| down_set(pair.delta(), p))
}

/// The primary bound with the unions of `Lambda_i` in place of `D(K)`.
pub fn rghw_bound_primary_lambda(ctx: &BasisContext, pair: &CodePairSpec, v: usize) -> Result<u64, FengRaoError> {
    pair.check_v(v)?;
    let n = ctx.len();
    let mut sets = Vec::new();
    for p in pair.primary_window() {
        let mut b = Bitset::new(n);
        for l in ctx.lambda_set(p)? {
            b.insert(l - 1);
        }
        sets.push(b);
    }
    search_sets(sets, v)
}

/// The dual bound with the unions of `V_l` in place of `D_perp(K)`.
pub fn rghw_bound_dual_v(ctx: &BasisContext, pair: &CodePairSpec, v: usize) -> Result<u64, FengRaoError> {
    pair.check_v(v)?;
    let n = ctx.len();
    let mut sets = Vec::new();
    for l in pair.dual_window() {
        let mut b = Bitset::new(n);
        for i in ctx.v_set(l)? {
            b.insert(i - 1);
        }
        sets.push(b);
    }
    search_sets(sets, v)
}

fn search_sets(sets: Vec<Bitset>, v: usize) -> Result<u64, FengRaoError> {
    if !SearchCap::default().allows(sets.len(), v) {
        return Err(FengRaoError::BoundNotComputed { window: sets.len(), v });
    }
    Ok(min_union_subset(&sets, v).expect("window holds L1 \\ L2"))
}

/// Both bound sequences for `v = 1..ell`; capped entries are left as `None`.
pub fn weight_profile(pair: &CodePairSpec) -> WeightProfile {
    let entry = |v: usize, r: Result<u64, FengRaoError>| WeightEntry {
        v,
        value: r.ok(),
        kind: BoundKind::LowerBound,
    };
    let ell = pair.ell();
    WeightProfile {
        n: pair.n(),
        primary: (1..=ell).map(|v| entry(v, rghw_bound_primary(pair, v))).collect(),
        dual: (1..=ell).map(|v| entry(v, rghw_bound_dual(pair, v))).collect(),
    }
}
