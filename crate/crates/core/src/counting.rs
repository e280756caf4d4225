//! Downset counting and enumeration, stable-matching counts, and the
//! brute-force oracles used to cross-check them.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gale_shapley::{is_stable, propose_optimal, Side};
use crate::instance::{strip_comment, Instance, Matching};
use crate::poset::Poset;
use crate::rotations::{apply_rotation, rotation_poset, RotationPoset};

/// Exact counts are arbitrary-precision naturals.
pub type Count = BigUint;

pub const DEFAULT_MAX_ELEMENTS: usize = 64;
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
pub const BRUTE_FORCE_MAX_N: usize = 8;
pub const SUBSET_ORACLE_MAX_VERTICES: usize = 24;
pub const POSET_ROUTE_MAX_VERTICES: usize = 40;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Bits(words)
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1u64 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }
}

struct DownsetCounter<'a> {
    poset: &'a Poset,
    memo: HashMap<Bits, Count>,
}

impl DownsetCounter<'_> {
    // count(S) = count(S \ up_S(x)) + count(S \ {x}) for the lowest minimal x
    fn count(&mut self, set: &Bits) -> Count {
        if set.is_empty() {
            return Count::one();
        }
        if let Some(c) = self.memo.get(set) {
            return c.clone();
        }
        let x = set
            .iter()
            .find(|&b| !set.iter().any(|a| self.poset.lt(a, b)))
            .expect("finite posets have minimal elements");
        let mut without_up = set.clone();
        for y in set.iter().collect::<Vec<_>>() {
            if y == x || self.poset.lt(x, y) {
                without_up.clear(y);
            }
        }
        let mut without_x = set.clone();
        without_x.clear(x);
        let total = self.count(&without_up) + self.count(&without_x);
        self.memo.insert(set.clone(), total.clone());
        total
    }
}

/// Number of downsets (order ideals) of `poset`, including the empty set.
pub fn count_downsets(poset: &Poset) -> Result<Count> {
    count_downsets_with_limit(poset, DEFAULT_MAX_ELEMENTS)
}

pub fn count_downsets_with_limit(poset: &Poset, max_elements: usize) -> Result<Count> {
    if poset.len() > max_elements {
        return Err(Error::limit(format!(
            "poset has {} elements, bound is {}",
            poset.len(),
            max_elements
        )));
    }
    let mut counter = DownsetCounter {
        poset,
        memo: HashMap::new(),
    };
    Ok(counter.count(&Bits::full(poset.len())))
}

/// Streams every downset as a sorted list of elements.
///
/// Elements are decided in a fixed linear extension; an element may be
/// taken only when everything below it was taken, so every branch ends
/// in a distinct downset.
pub struct Downsets {
    poset: Poset,
    order: Vec<usize>,
    // (depth, taken flags) frames still to explore
    stack: Vec<(usize, Vec<bool>)>,
}

impl Iterator for Downsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while let Some((depth, taken)) = self.stack.pop() {
            if depth == self.order.len() {
                return Some((0..taken.len()).filter(|&i| taken[i]).collect());
            }
            let x = self.order[depth];
            let can_take = (0..taken.len()).all(|a| !self.poset.lt(a, x) || taken[a]);
            if can_take {
                let mut with = taken.clone();
                with[x] = true;
                self.stack.push((depth + 1, with));
            }
            self.stack.push((depth + 1, taken));
        }
        None
    }
}

pub fn enumerate_downsets(poset: &Poset) -> Result<Downsets> {
    enumerate_downsets_with_cap(poset, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_downsets_with_cap(poset: &Poset, cap: u64) -> Result<Downsets> {
    let total = count_downsets(poset)?;
    if total > Count::from(cap) {
        return Err(Error::limit(format!(
            "{} downsets exceed the enumeration cap {}",
            total, cap
        )));
    }
    Ok(downsets(poset))
}

/// All downsets without a cap; the iterator is lazy.
pub fn downsets(poset: &Poset) -> Downsets {
    Downsets {
        poset: poset.clone(),
        order: poset.linear_extension(),
        stack: vec![(0, vec![false; poset.len()])],
    }
}

/// Number of stable matchings, via downsets of the rotation poset.
pub fn count_stable_matchings(instance: &Instance) -> Result<Count> {
    count_downsets(&rotation_poset(instance)?.order)
}

/// Stable matchings in the order their downsets are produced.
pub struct StableMatchings {
    base: Matching,
    poset: RotationPoset,
    downsets: Downsets,
}

impl StableMatchings {
    pub fn rotation_poset(&self) -> &RotationPoset {
        &self.poset
    }
}

impl Iterator for StableMatchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        let downset = self.downsets.next()?;
        // discovery order is a linear extension, and downsets are sorted
        let mut m = self.base.clone();
        for r in downset {
            m = apply_rotation(&m, &self.poset.rotations[r]).expect("rotation exposed");
        }
        Some(m)
    }
}

pub fn enumerate_stable_matchings(instance: &Instance) -> Result<StableMatchings> {
    enumerate_stable_matchings_with_cap(instance, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_stable_matchings_with_cap(
    instance: &Instance,
    cap: u64,
) -> Result<StableMatchings> {
    let poset = rotation_poset(instance)?;
    let downsets = enumerate_downsets_with_cap(&poset.order, cap)?;
    Ok(StableMatchings {
        base: propose_optimal(instance, Side::MenPropose),
        poset,
        downsets,
    })
}

/// Lazily yields every stable matching, man-optimal first, with no cap;
/// callers bound the output themselves.
pub fn stable_matchings(instance: &Instance) -> Result<StableMatchings> {
    let poset = rotation_poset(instance)?;
    Ok(StableMatchings {
        base: propose_optimal(instance, Side::MenPropose),
        downsets: downsets(&poset.order),
        poset,
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every stable matching found by checking all n! perfect matchings.
pub fn brute_force_stable_matchings(instance: &Instance) -> Result<Vec<Matching>> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::limit(format!(
            "brute force needs n <= {}, got {}",
            BRUTE_FORCE_MAX_N, n
        )));
    }
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        let m = Matching::new(perm.clone())?;
        if is_stable(instance, &m) {
            out.push(m);
        }
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

/// A simple bipartite graph with parts `1..=n1` and `1..=n2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n1: usize,
    n2: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Validates ranges, simplicity, and the absence of isolated vertices.
    pub fn new(n1: usize, n2: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u == 0 || u > n1 || v == 0 || v > n2 {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) outside 1..={} x 1..={}",
                    u, v, n1, n2
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::invalid(format!("repeated edge ({}, {})", u, v)));
            }
        }
        let graph = BipartiteGraph { n1, n2, edges };
        let isolated = graph.isolated_vertices();
        if isolated > 0 {
            return Err(Error::invalid(format!(
                "graph has {} isolated vertices; remove them and multiply #IS by 2^{}",
                isolated, isolated
            )));
        }
        Ok(graph)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.n1 + self.n2
    }

    fn isolated_vertices(&self) -> usize {
        let mut d1 = vec![0usize; self.n1];
        let mut d2 = vec![0usize; self.n2];
        for &(u, v) in &self.edges {
            d1[u - 1] += 1;
            d2[v - 1] += 1;
        }
        d1.iter().chain(&d2).filter(|&&d| d == 0).count()
    }

    /// Parses `bis <n1> <n2>` followed by `e <u> <v>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("bad integer {:?}", t)))
            };
            match (header, toks.as_slice()) {
                (None, ["bis", a, b]) => header = Some((num(a)?, num(b)?)),
                (None, _) => {
                    return Err(Error::parse(
                        lineno,
                        format!(
                            "malformed header: expected \"bis <n1> <n2>\", got {:?}",
                            line
                        ),
                    ))
                }
                (Some(_), ["e", u, v]) => edges.push((num(u)?, num(v)?)),
                (Some(_), _) => {
                    return Err(Error::parse(
                        lineno,
                        format!("expected \"e <u> <v>\", got {:?}", line),
                    ))
                }
            }
        }
        let (n1, n2) =
            header.ok_or_else(|| Error::parse(1, "malformed header: missing \"bis\""))?;
        BipartiteGraph::new(n1, n2, edges)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bis {} {}", self.n1, self.n2)?;
        for (u, v) in &self.edges {
            writeln!(f, "e {} {}", u, v)?;
        }
        Ok(())
    }
}

/// The height-one poset with `V1` (elements `0..n1`) below `V2`
/// (elements `n1..n1+n2`), `u < v` iff `uv` is an edge.
pub fn height_one_poset(graph: &BipartiteGraph) -> Poset {
    let rel: Vec<_> = graph
        .edges
        .iter()
        .map(|&(u, v)| (u - 1, graph.n1 + v - 1))
        .collect();
    Poset::from_relations(graph.vertex_count(), &rel).expect("bipartite relation is acyclic")
}

/// #IS through downsets of [`height_one_poset`].
pub fn count_independent_sets_poset(graph: &BipartiteGraph) -> Result<Count> {
    if graph.vertex_count() > POSET_ROUTE_MAX_VERTICES {
        return Err(Error::limit(format!(
            "{} vertices exceed the poset-route bound {}",
            graph.vertex_count(),
            POSET_ROUTE_MAX_VERTICES
        )));
    }
    count_downsets(&height_one_poset(graph))
}

/// #IS by testing every vertex subset.
pub fn count_independent_sets_brute(graph: &BipartiteGraph) -> Result<Count> {
    let v = graph.vertex_count();
    if v > SUBSET_ORACLE_MAX_VERTICES {
        return Err(Error::limit(format!(
            "{} vertices exceed the subset-oracle bound {}",
            v, SUBSET_ORACLE_MAX_VERTICES
        )));
    }
    let edge_masks: Vec<u32> = graph
        .edges
        .iter()
        .map(|&(a, b)| (1u32 << (a - 1)) | (1u32 << (graph.n1 + b - 1)))
        .collect();
    let total: u64 = (0..1u32 << v)
        .into_par_iter()
        .filter(|&s| edge_masks.iter().all(|&e| s & e != e))
        .count() as u64;
    Ok(Count::from(total))
}

/// #IS, computed by both routes when the subset oracle fits and checked
/// for agreement.
pub fn count_independent_sets(graph: &BipartiteGraph) -> Result<Count> {
    if graph.vertex_count() > SUBSET_ORACLE_MAX_VERTICES {
        return count_independent_sets_poset(graph);
    }
    let (a, b) = rayon::join(
        || count_independent_sets_poset(graph),
        || count_independent_sets_brute(graph),
    );
    let (a, b) = (a?, b?);
    if a != b {
        return Err(Error::Inconsistency(format!(
            "independent-set routes disagree: downsets {} vs subsets {}",
            a, b
        )));
    }
    Ok(a)
}
