//! Instances whose stable matchings count the independent sets of a
//! bipartite graph.
//!
//! Edges are labelled `1..=n` in lexicographic `(V1, V2)` order. Each V1
//! vertex yields a cycle `ρ` of its (consecutive) edge labels and each
//! V2 vertex a cycle `σ` of its edge labels. There are `3n` men
//! `A_i, B_i, C_i` and `3n` women `a_i, b_i, c_i`, numbered
//! `A_i = i`, `B_i = n + i`, `C_i = 2n + i` (likewise for women). The
//! rotation poset of the resulting instance is the graph itself with
//! V1 below V2, so its downsets are the independent sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::attribute_models::{
    instance_from_dot_with_bits, instance_from_euclidean, AttributeSpec, Coord, EuclideanSpec,
    DEFAULT_MAX_BITS, DEFAULT_START_BITS,
};
use crate::counting::{count_downsets, count_independent_sets, BipartiteGraph, Count};
use crate::error::{Error, Result};
use crate::gale_shapley::{propose_optimal, Side};
use crate::instance::Instance;
use crate::rotations::{
    find_all_rotations_with_order, hasse_diagram, rotation_poset_from, truncated_lists,
};

pub const LISTS_MAX_EDGES: usize = 20;
pub const GEOMETRIC_MAX_EDGES: usize = 12;

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::invalid(format!(
                    "{:?} is not a permutation of 1..={}",
                    image, n
                )));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    /// Builds the permutation mapping each cycle entry to the next one.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image = vec![0; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || image[x - 1] != 0 {
                    return Err(Error::invalid(format!("bad cycle entry {}", x)));
                }
                image[x - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        for (i, slot) in image.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = i + 1;
            }
        }
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// Cycles including fixed points, each starting at its minimum,
    /// ordered by that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 1..=self.len() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Accepts `3,1,2` or `3 1 2`.
    pub fn parse(text: &str) -> Result<Self> {
        let image = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad permutation entry {:?}", t)))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Writes cycles as `(1,2,3)(4,5)`.
pub fn cycle_notation(cycles: &[Vec<usize>]) -> String {
    cycles
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect()
}

/// Edge labels and the two permutations they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePair {
    pub n: usize,
    /// `edges[i - 1]` is the `(v1, v2)` edge with label `i`.
    pub edges: Vec<(usize, usize)>,
    pub rho: Permutation,
    pub sigma: Permutation,
    /// `rho_cycles[u - 1]` holds the labels at V1 vertex `u`, ascending.
    pub rho_cycles: Vec<Vec<usize>>,
    /// `sigma_cycles[v - 1]` holds the labels at V2 vertex `v`, ascending.
    pub sigma_cycles: Vec<Vec<usize>>,
}

impl CyclePair {
    pub fn rho_reps(&self) -> Vec<usize> {
        self.rho_cycles.iter().map(|c| c[0]).collect()
    }

    pub fn sigma_reps(&self) -> Vec<usize> {
        self.sigma_cycles.iter().map(|c| c[0]).collect()
    }
}

pub fn edge_cycles(graph: &BipartiteGraph) -> Result<CyclePair> {
    let mut edges = graph.edges().to_vec();
    edges.sort_unstable();
    let n = edges.len();
    if n == 0 {
        return Err(Error::invalid("graph has no edges"));
    }
    let mut rho_cycles = vec![Vec::new(); graph.n1()];
    let mut sigma_cycles = vec![Vec::new(); graph.n2()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        rho_cycles[u - 1].push(i + 1);
        sigma_cycles[v - 1].push(i + 1);
    }
    if rho_cycles.iter().chain(&sigma_cycles).any(|c| c.is_empty()) {
        return Err(Error::invalid("graph has an isolated vertex"));
    }
    Ok(CyclePair {
        n,
        rho: Permutation::from_cycles(n, &rho_cycles)?,
        sigma: Permutation::from_cycles(n, &sigma_cycles)?,
        edges,
        rho_cycles,
        sigma_cycles,
    })
}

/// The three families of people on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    A,
    B,
    C,
}

/// 1-based person index of `role_i` in an instance built from `n` edges.
pub fn role_index(role: Role, i: usize, n: usize) -> usize {
    match role {
        Role::A => i,
        Role::B => n + i,
        Role::C => 2 * n + i,
    }
}

pub fn role_of(index: usize, n: usize) -> (Role, usize) {
    match (index - 1) / n {
        0 => (Role::A, index),
        1 => (Role::B, index - n),
        _ => (Role::C, index - 2 * n),
    }
}

/// Name such as `B3` (men) or `b3` (women).
pub fn role_name(index: usize, n: usize, man: bool) -> String {
    let (role, i) = role_of(index, n);
    let letter = match (role, man) {
        (Role::A, true) => "A",
        (Role::B, true) => "B",
        (Role::C, true) => "C",
        (Role::A, false) => "a",
        (Role::B, false) => "b",
        (Role::C, false) => "c",
    };
    format!("{}{}", letter, i)
}

fn complete(prefix: Vec<usize>, size: usize) -> Vec<usize> {
    let used: BTreeSet<usize> = prefix.iter().copied().collect();
    debug_assert_eq!(used.len(), prefix.len());
    let mut list = prefix;
    list.extend((1..=size).filter(|x| !used.contains(x)));
    list
}

/// Preference lists with the prescribed prefixes, completed by the
/// remaining people in ascending index order. `tau` fixes the order of
/// the b-block on B-men's lists: `b_{τ(n)}, ..., b_{τ(1)}`.
pub fn gen_partial_lists(graph: &BipartiteGraph, tau: &Permutation) -> Result<Instance> {
    let cp = edge_cycles(graph)?;
    gen_partial_lists_from(&cp, tau)
}

pub fn gen_partial_lists_from(cp: &CyclePair, tau: &Permutation) -> Result<Instance> {
    let n = cp.n;
    if tau.len() != n {
        return Err(Error::invalid(format!(
            "tau has length {}, expected {}",
            tau.len(),
            n
        )));
    }
    let (a, b, c) = (
        |i| role_index(Role::A, i, n),
        |i| role_index(Role::B, i, n),
        |i| role_index(Role::C, i, n),
    );
    let mut men = vec![Vec::new(); 3 * n];
    let b_block: Vec<usize> = (1..=n).rev().map(|j| b(tau.apply(j))).collect();
    for cycle in &cp.sigma_cycles {
        let p = cycle.len();
        for (m, &x) in cycle.iter().enumerate() {
            men[a(x) - 1] = vec![a(x), b(cp.rho.apply(x))];
            men[c(x) - 1] = vec![c(x), a(cp.sigma.apply(x))];
            let mut list = b_block.clone();
            list.push(a(x));
            if m + 1 == p {
                for &y in cycle[..p - 1].iter().rev() {
                    list.push(c(y));
                    list.push(a(y));
                }
            }
            list.push(c(x));
            men[b(x) - 1] = list;
        }
    }
    let rho_inv = cp.rho.inverse();
    let c_block: Vec<usize> = (1..=n).rev().map(c).collect();
    let mut women = vec![Vec::new(); 3 * n];
    for cycle in &cp.rho_cycles {
        let q = cycle.len();
        for (m, &y) in cycle.iter().enumerate() {
            women[b(y) - 1] = vec![a(rho_inv.apply(y)), b(y)];
            women[c(y) - 1] = vec![b(y), c(y)];
            let mut list = c_block.clone();
            list.push(b(y));
            if m + 1 == q {
                for &z in cycle[..q - 1].iter().rev() {
                    list.push(a(z));
                    list.push(b(z));
                }
            }
            list.push(a(y));
            women[a(y) - 1] = list;
        }
    }
    Instance::new(
        men.into_iter().map(|l| complete(l, 3 * n)).collect(),
        women.into_iter().map(|l| complete(l, 3 * n)).collect(),
    )
}

fn turns(num: BigRational) -> (Coord, Coord) {
    (Coord::cos_turns(num.clone()), Coord::sin_turns(num))
}

/// Three-dimensional dot-product specification. Angles are carried as
/// fractions of a full turn; `ε = 1/n²` turns and `φ = 1/100` turn.
///
/// The planar layout alone leaves exact ties deep in some lists (two
/// people at mirror-image angles from a preference direction). Every
/// position whose height would be zero instead gets the distinct height
/// `η·j`, `j` its global index, and flat preference vectors get height
/// `η`, with `η = 4^-(n+64)`. Any two people then differ in height, so a
/// planar tie becomes a strict comparison, while the list prefixes that
/// carry the reduction are far too well separated to move.
pub fn gen_3attribute(graph: &BipartiteGraph) -> Result<AttributeSpec> {
    let cp = edge_cycles(graph)?;
    let n = cp.n;
    if n < 2 {
        return Err(Error::invalid(
            "the 3-attribute construction needs at least 2 edges",
        ));
    }
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let int = |a: usize| BigRational::from_integer(BigInt::from(a));
    let eps = q(1, (n * n) as i64);
    let phi = q(1, 100);
    let tilted = |angle: BigRational| -> Vec<Coord> {
        let (c, s) = turns(angle);
        vec![
            Coord::sin_turns(phi.clone()).times(c),
            Coord::sin_turns(phi.clone()).times(s),
            Coord::cos_turns(phi.clone()),
        ]
    };
    let flat = |angle: BigRational, z: Coord| -> Vec<Coord> {
        let (c, s) = turns(angle);
        vec![c, s, z]
    };
    let eta = || Coord::pow(4, -(n as i32 + 64));
    let height = |role, i| eta().times(Coord::integer(role_index(role, i, n) as i64));
    let idx = |role, i| role_index(role, i, n) - 1;
    let empty = vec![Vec::new(); 3 * n];
    let (mut women_pos, mut men_pref) = (empty.clone(), empty.clone());
    let (mut men_pos, mut women_pref) = (empty.clone(), empty);

    let l = cp.sigma_cycles.len();
    for (g, cycle) in cp.sigma_cycles.iter().enumerate() {
        let p = cycle.len();
        let base = q(g as i64, l as i64);
        let theta = &eps / int(7 * p - 1);
        let at = |units: BigRational| &base + &theta * units;
        for (m, &x) in cycle.iter().enumerate() {
            let prev = cycle[(m + p - 1) % p];
            let m7 = int(7 * m);
            women_pos[idx(Role::A, x)] = flat(at(&m7 + int(4)), height(Role::A, x));
            women_pos[idx(Role::B, cp.rho.apply(x))] =
                flat(at(&m7 + int(6)), Coord::pow(4, cp.rho.apply(x) as i32));
            women_pos[idx(Role::C, prev)] = flat(at(m7.clone()), height(Role::C, prev));
            men_pref[idx(Role::A, x)] = flat(at(&m7 + q(14, 3)), eta());
            men_pref[idx(Role::B, x)] = tilted(at(&m7 + int(4)));
            men_pref[idx(Role::C, prev)] = flat(at(&m7 + q(8, 5)), eta());
        }
    }
    let k = cp.rho_cycles.len();
    for (g, cycle) in cp.rho_cycles.iter().enumerate() {
        let len = cycle.len();
        let base = q(g as i64, k as i64);
        let omega = &eps / int(7 * len - 1);
        let at = |units: BigRational| &base + &omega * units;
        for (m, &y) in cycle.iter().enumerate() {
            let prev = cycle[(m + len - 1) % len];
            let m7 = int(7 * m);
            men_pos[idx(Role::A, prev)] = flat(at(m7.clone()), height(Role::A, prev));
            men_pos[idx(Role::B, y)] = flat(at(&m7 + int(4)), height(Role::B, y));
            men_pos[idx(Role::C, y)] = flat(at(&m7 + int(6)), Coord::pow(4, y as i32));
            women_pref[idx(Role::A, y)] = tilted(at(&m7 + int(4)));
            women_pref[idx(Role::B, y)] = flat(at(&m7 + q(8, 5)), eta());
            women_pref[idx(Role::C, y)] = flat(at(&m7 + q(14, 3)), eta());
        }
    }
    Ok(AttributeSpec {
        k: 3,
        men_pos,
        men_pref,
        women_pos,
        women_pref,
    })
}

/// Two-dimensional Euclidean specification with exact rational points;
/// `ε = 1/100^n` and the far coordinate is `1000^n`.
///
/// As laid out, some people sit at equal distance from two others (a
/// preference point halfway between neighbours on an axis). Every
/// preference point is therefore shifted by `η·(1, 1/(10(4n+1)))` with
/// `η = ε³`. All nonzero squared-distance gaps of the layout are multiples
/// of `ε`, the shift moves them by less than `ε`, and it separates every
/// pair of distinct positions, so exact ties disappear and nothing else
/// changes order.
pub fn gen_2euclidean(graph: &BipartiteGraph) -> Result<EuclideanSpec<BigRational>> {
    let cp = edge_cycles(graph)?;
    let n = cp.n;
    let int = |a: usize| BigRational::from_integer(BigInt::from(a));
    let tenths = |a: i64| BigRational::new(BigInt::from(a), BigInt::from(10));
    let eps = BigRational::one() / BigRational::from_integer(BigInt::from(100).pow(n as u32));
    let far = BigRational::from_integer(BigInt::from(1000).pow(n as u32));
    let zero = int(0);
    let eta = &eps * &eps * &eps;
    let shift = |x: BigRational, y: BigRational| {
        let slope = BigRational::new(BigInt::one(), BigInt::from(10 * (4 * n + 1)));
        vec![x + &eta, y + &eta * slope]
    };
    let idx = |role, i| role_index(role, i, n) - 1;
    let empty = vec![Vec::new(); 3 * n];
    let (mut women_pos, mut men_pref) = (empty.clone(), empty.clone());
    let (mut men_pos, mut women_pref) = (empty.clone(), empty);

    let mut offset = 0;
    for cycle in &cp.sigma_cycles {
        let p = cycle.len();
        for (h, &x) in cycle.iter().enumerate() {
            let prev = cycle[(h + p - 1) % p];
            let s = int(offset + h + 1);
            let s0 = int(offset + h);
            women_pos[idx(Role::A, x)] = vec![s.clone(), zero.clone()];
            women_pos[idx(Role::B, cp.rho.apply(x))] = vec![zero.clone(), s.clone()];
            women_pos[idx(Role::C, prev)] = vec![&s0 + tenths(3), zero.clone()];
            men_pref[idx(Role::A, x)] = shift(s.clone(), &s - &eps);
            men_pref[idx(Role::B, x)] = shift(s.clone(), far.clone());
            men_pref[idx(Role::C, prev)] = shift(&s0 + tenths(6), zero.clone());
        }
        offset += 2 * p;
    }
    let mut offset = 0;
    for cycle in &cp.rho_cycles {
        let q = cycle.len();
        for (h, &y) in cycle.iter().enumerate() {
            let prev = cycle[(h + q - 1) % q];
            let t = int(offset + h + 1);
            let t0 = int(offset + h);
            men_pos[idx(Role::A, prev)] = vec![&t0 + tenths(3), zero.clone()];
            men_pos[idx(Role::B, y)] = vec![t.clone(), zero.clone()];
            men_pos[idx(Role::C, y)] = vec![zero.clone(), t.clone()];
            women_pref[idx(Role::A, y)] = shift(t.clone(), far.clone());
            women_pref[idx(Role::B, y)] = shift(&t0 + tenths(6), zero.clone());
            women_pref[idx(Role::C, y)] = shift(t.clone(), &t - &eps);
        }
        offset += 2 * q;
    }
    Ok(EuclideanSpec {
        k: 2,
        men_pos,
        men_pref,
        women_pos,
        women_pref,
    })
}

/// Which construction produces the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Lists,
    Attr3,
    Euclid2,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Lists => "lists",
            Model::Attr3 => "attr3",
            Model::Euclid2 => "euclid2",
        })
    }
}

pub fn build_instance(graph: &BipartiteGraph, model: Model) -> Result<Instance> {
    build_instance_with_bits(graph, model, DEFAULT_MAX_BITS)
}

/// As [`build_instance`], with the precision cap for dot-product scores.
pub fn build_instance_with_bits(
    graph: &BipartiteGraph,
    model: Model,
    max_bits: u32,
) -> Result<Instance> {
    match model {
        Model::Lists => gen_partial_lists(graph, &Permutation::identity(graph.edges().len())),
        Model::Attr3 => {
            instance_from_dot_with_bits(&gen_3attribute(graph)?, DEFAULT_START_BITS, max_bits)
        }
        Model::Euclid2 => instance_from_euclidean(&gen_2euclidean(graph)?),
    }
}

/// Reads `τ` off the b-block that opens B-man 1's list.
pub fn read_tau(instance: &Instance, n: usize) -> Option<Permutation> {
    if instance.n() != 3 * n {
        return None;
    }
    let list = instance.man_list(role_index(Role::B, 1, n));
    let mut image = vec![0; n];
    for (pos, &w) in list[..n].iter().enumerate() {
        match role_of(w, n) {
            (Role::B, i) => image[n - 1 - pos] = i,
            _ => return None,
        }
    }
    Permutation::new(image).ok()
}

/// Outcome of checking a generated instance against the expected
/// structure. Failures are recorded, not raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub model: Model,
    pub male_optimal_ok: bool,
    pub female_optimal_ok: bool,
    pub rotation_forms_ok: bool,
    pub poset_isomorphic_ok: bool,
    pub lists_match_ok: bool,
    pub counts_equal: bool,
    pub is_count: Count,
    pub sm_count: Count,
    pub tau: Option<Permutation>,
    pub details: String,
}

impl ReductionReport {
    pub fn all_ok(&self) -> bool {
        self.male_optimal_ok
            && self.female_optimal_ok
            && self.rotation_forms_ok
            && self.poset_isomorphic_ok
            && self.lists_match_ok
            && self.counts_equal
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "pass" } else { "fail" };
        writeln!(f, "model:             {}", self.model)?;
        writeln!(f, "male_optimal:      {}", mark(self.male_optimal_ok))?;
        writeln!(f, "female_optimal:    {}", mark(self.female_optimal_ok))?;
        writeln!(f, "rotation_forms:    {}", mark(self.rotation_forms_ok))?;
        writeln!(f, "poset_isomorphic:  {}", mark(self.poset_isomorphic_ok))?;
        writeln!(f, "truncated_lists:   {}", mark(self.lists_match_ok))?;
        writeln!(f, "counts_equal:      {}", mark(self.counts_equal))?;
        writeln!(f, "is_count:          {}", self.is_count)?;
        writeln!(f, "sm_count:          {}", self.sm_count)?;
        if let Some(tau) = &self.tau {
            writeln!(f, "tau:               {}", tau)?;
        }
        for line in self.details.lines() {
            writeln!(f, "  {}", line)?;
        }
        Ok(())
    }
}

// Vertex of the graph a rotation should correspond to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Vertex {
    Left(usize),
    Right(usize),
}

pub fn verify_reduction(graph: &BipartiteGraph, model: Model) -> Result<ReductionReport> {
    verify_reduction_with_bits(graph, model, DEFAULT_MAX_BITS)
}

pub fn verify_reduction_with_bits(
    graph: &BipartiteGraph,
    model: Model,
    max_bits: u32,
) -> Result<ReductionReport> {
    let edges = graph.edges().len();
    let bound = match model {
        Model::Lists => LISTS_MAX_EDGES,
        _ => GEOMETRIC_MAX_EDGES,
    };
    if edges > bound {
        return Err(Error::limit(format!(
            "{} edges exceed the {} verification bound {}",
            edges, model, bound
        )));
    }
    let cp = edge_cycles(graph)?;
    let instance = build_instance_with_bits(graph, model, max_bits)?;
    verify_instance(graph, &cp, &instance, model)
}

/// Checks an already built instance against the graph's structure.
pub fn verify_instance(
    graph: &BipartiteGraph,
    cp: &CyclePair,
    instance: &Instance,
    model: Model,
) -> Result<ReductionReport> {
    let n = cp.n;
    let mut details = String::new();
    let (a, b, c) = (
        |i| role_index(Role::A, i, n),
        |i| role_index(Role::B, i, n),
        |i| role_index(Role::C, i, n),
    );
    if instance.n() != 3 * n {
        return Err(Error::invalid(format!(
            "instance has {} men, expected {}",
            instance.n(),
            3 * n
        )));
    }

    let male = propose_optimal(instance, Side::MenPropose);
    let male_optimal_ok = (1..=n)
        .all(|i| male.wife(a(i)) == a(i) && male.wife(b(i)) == b(i) && male.wife(c(i)) == c(i));
    if !male_optimal_ok {
        details.push_str("male-optimal matching differs from A_i-a_i, B_i-b_i, C_i-c_i\n");
    }
    let female = propose_optimal(instance, Side::WomenPropose);
    let female_optimal_ok = (1..=n).all(|i| {
        female.wife(a(i)) == b(cp.rho.apply(i))
            && female.wife(b(i)) == c(i)
            && female.wife(c(i)) == a(cp.sigma.apply(i))
    });
    if !female_optimal_ok {
        details.push_str("female-optimal matching differs from the closed form\n");
    }

    let mut expected: BTreeMap<BTreeSet<(usize, usize)>, Vertex> = BTreeMap::new();
    for (u, cycle) in cp.rho_cycles.iter().enumerate() {
        let set = cycle
            .iter()
            .flat_map(|&x| [(b(x), b(x)), (a(x), a(x))])
            .collect();
        expected.insert(set, Vertex::Left(u + 1));
    }
    for (v, cycle) in cp.sigma_cycles.iter().enumerate() {
        let set = cycle
            .iter()
            .flat_map(|&x| [(b(x), a(x)), (c(x), c(x))])
            .collect();
        expected.insert(set, Vertex::Right(v + 1));
    }
    // A_1..A_n, then C_1..C_n, then B_1..B_n
    let order: Vec<usize> = (1..=n)
        .map(a)
        .chain((1..=n).map(c))
        .chain((1..=n).map(b))
        .collect();
    let (rotations, _) = find_all_rotations_with_order(instance, &order)?;
    let mut vertex_of = Vec::new();
    let mut seen = BTreeSet::new();
    for r in &rotations {
        match expected.get(&r.pair_set()) {
            Some(&v) if seen.insert(v) => vertex_of.push(v),
            _ => details.push_str(&format!("unexpected rotation {}\n", r)),
        }
    }
    let rotation_forms_ok = vertex_of.len() == rotations.len() && seen.len() == expected.len();
    if seen.len() != expected.len() {
        details.push_str(&format!(
            "found {} of {} expected rotations\n",
            seen.len(),
            expected.len()
        ));
    }

    let poset = rotation_poset_from(instance, rotations)?;
    let poset_isomorphic_ok = rotation_forms_ok && {
        let hasse: BTreeSet<(Vertex, Vertex)> = hasse_diagram(&poset)
            .into_iter()
            .map(|(x, y)| (vertex_of[x], vertex_of[y]))
            .collect();
        let want: BTreeSet<(Vertex, Vertex)> = graph
            .edges()
            .iter()
            .map(|&(u, v)| (Vertex::Left(u), Vertex::Right(v)))
            .collect();
        let ok = hasse == want && poset.order.height() <= 1;
        if !ok {
            details.push_str("Hasse diagram is not the graph with V1 below V2\n");
        }
        ok
    };

    let tau = read_tau(instance, n);
    let lists_match_ok = match &tau {
        Some(t) => {
            let reference = gen_partial_lists_from(cp, t)?;
            let ok = truncated_lists(instance) == truncated_lists(&reference);
            if !ok {
                details.push_str(&format!(
                    "truncated lists differ from the partial lists with tau = {}\n",
                    t
                ));
            }
            ok
        }
        None => {
            details.push_str("B-man 1's list does not open with all b-women\n");
            false
        }
    };

    let (is_count, sm_count) = rayon::join(
        || count_independent_sets(graph),
        || count_downsets(&poset.order),
    );
    let (is_count, sm_count) = (is_count?, sm_count?);
    let counts_equal = is_count == sm_count;
    Ok(ReductionReport {
        model,
        male_optimal_ok,
        female_optimal_ok,
        rotation_forms_ok,
        poset_isomorphic_ok,
        lists_match_ok,
        counts_equal,
        is_count,
        sm_count,
        tau,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::brute_force_stable_matchings;

    fn single_edge() -> BipartiteGraph {
        BipartiteGraph::new(1, 1, vec![(1, 1)]).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::parse("2,3,1,4").unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.inverse().apply(2), 1);
        assert_eq!(cycle_notation(&p.cycles()), "(1,2,3)(4)");
        assert_eq!(Permutation::from_cycles(4, &[vec![1, 2, 3]]).unwrap(), p);
        assert!(Permutation::parse("1 1").is_err());
        assert_eq!(p.to_string(), "2,3,1,4");
    }

    #[test]
    fn single_edge_cycles_and_lists() {
        let cp = edge_cycles(&single_edge()).unwrap();
        assert_eq!(cp.rho, Permutation::identity(1));
        assert_eq!(cp.sigma, Permutation::identity(1));
        let inst = gen_partial_lists(&single_edge(), &Permutation::identity(1)).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(brute_force_stable_matchings(&inst).unwrap().len(), 3);
        assert!(gen_partial_lists(&single_edge(), &Permutation::identity(2)).is_err());
    }

    #[test]
    fn single_edge_reports_pass() {
        let r = verify_reduction(&single_edge(), Model::Lists).unwrap();
        assert!(r.all_ok(), "{}", r);
        assert_eq!(r.sm_count, Count::from(3u32));
        let r = verify_reduction(&single_edge(), Model::Euclid2).unwrap();
        assert!(r.all_ok(), "{}", r);
        assert!(gen_3attribute(&single_edge()).is_err());
    }

    #[test]
    fn role_numbering() {
        assert_eq!(role_index(Role::C, 2, 5), 12);
        assert_eq!(role_of(12, 5), (Role::C, 2));
        assert_eq!(role_name(7, 5, true), "B2");
        assert_eq!(role_name(1, 5, false), "a1");
    }
}
