//! Independent oracles and generators shared by the integration tests.
//! Nothing here calls the library's own counting or rotation code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stablecount::{BipartiteGraph, Instance, Matching};

pub type Pairs = BTreeSet<(usize, usize)>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    v
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let men = (0..n).map(|_| shuffled(rng, n)).collect();
    let women = (0..n).map(|_| shuffled(rng, n)).collect();
    Instance::new(men, women).unwrap()
}

/// Cyclic lists with many stable matchings, relabelled at random.
pub fn cyclic_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let pm = shuffled(rng, n);
    let pw = shuffled(rng, n);
    let men = (0..n)
        .map(|i| (0..n).map(|k| pw[(i + k) % n]).collect())
        .collect::<Vec<Vec<usize>>>();
    let mut women = vec![Vec::new(); n];
    for j in 0..n {
        women[pw[j] - 1] = (0..n).map(|k| pm[(j + 1 + k) % n]).collect();
    }
    let mut men_by_label = vec![Vec::new(); n];
    for (i, list) in men.into_iter().enumerate() {
        men_by_label[pm[i] - 1] = list;
    }
    Instance::new(men_by_label, women).unwrap()
}

/// Either a uniformly random or a cyclic instance.
pub fn mixed_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    if rng.gen_bool(0.5) {
        random_instance(rng, n)
    } else {
        cyclic_instance(rng, n)
    }
}

fn rank_table(lists: impl Fn(usize) -> Vec<usize>, n: usize) -> Vec<Vec<usize>> {
    (1..=n)
        .map(|p| {
            let mut r = vec![0; n + 1];
            for (pos, q) in lists(p).into_iter().enumerate() {
                r[q] = pos;
            }
            r
        })
        .collect()
}

/// Stable matchings by checking every perfect matching against the
/// definition directly; each matching is a set of (man, woman) pairs.
pub fn oracle_stable_matchings(inst: &Instance) -> BTreeSet<Pairs> {
    let n = inst.n();
    let mr = rank_table(|m| inst.man_list(m), n);
    let wr = rank_table(|w| inst.woman_list(w), n);
    let mut out = BTreeSet::new();
    let mut wife = vec![0usize; n + 1];
    let mut used = vec![false; n + 1];
    fn rec(
        m: usize,
        n: usize,
        wife: &mut Vec<usize>,
        used: &mut Vec<bool>,
        mr: &[Vec<usize>],
        wr: &[Vec<usize>],
        out: &mut BTreeSet<Pairs>,
    ) {
        if m > n {
            let mut husband = vec![0; n + 1];
            for x in 1..=n {
                husband[wife[x]] = x;
            }
            for x in 1..=n {
                for w in 1..=n {
                    if mr[x - 1][w] < mr[x - 1][wife[x]] && wr[w - 1][x] < wr[w - 1][husband[w]] {
                        return;
                    }
                }
            }
            out.insert((1..=n).map(|x| (x, wife[x])).collect());
            return;
        }
        for w in 1..=n {
            if !used[w] {
                used[w] = true;
                wife[m] = w;
                rec(m + 1, n, wife, used, mr, wr, out);
                used[w] = false;
            }
        }
    }
    rec(1, n, &mut wife, &mut used, &mr, &wr, &mut out);
    out
}

/// Direct blocking-pair check.
pub fn oracle_is_stable(inst: &Instance, m: &Matching) -> bool {
    let n = inst.n();
    let mr = rank_table(|x| inst.man_list(x), n);
    let wr = rank_table(|w| inst.woman_list(w), n);
    let wife: Vec<usize> = (1..=n).map(|x| m.wife(x)).collect();
    let mut husband = vec![0; n + 1];
    for x in 1..=n {
        husband[wife[x - 1]] = x;
    }
    (1..=n).all(|x| {
        (1..=n).all(|w| {
            !(mr[x - 1][w] < mr[x - 1][wife[x - 1]] && wr[w - 1][x] < wr[w - 1][husband[w]])
        })
    })
}

pub fn pairs_of(m: &Matching) -> Pairs {
    m.pairs().into_iter().collect()
}

/// #IS by summing `2^(free V2 vertices)` over subsets of V1.
pub fn oracle_independent_sets(n1: usize, n2: usize, edges: &[(usize, usize)]) -> u128 {
    let mut nbr = vec![0u64; n1];
    for &(u, v) in edges {
        nbr[u - 1] |= 1 << (v - 1);
    }
    (0u64..1 << n1)
        .map(|s| {
            let covered = (0..n1)
                .filter(|&u| s >> u & 1 == 1)
                .fold(0u64, |acc, u| acc | nbr[u]);
            1u128 << (n2 - covered.count_ones() as usize)
        })
        .sum()
}

pub fn random_graph(rng: &mut ChaCha8Rng, min_edges: usize, max_edges: usize) -> BipartiteGraph {
    loop {
        let m = rng.gen_range(min_edges..=max_edges);
        let n1 = rng.gen_range(1..=m);
        let n2 = rng.gen_range(1..=m);
        if n1 * n2 < m {
            continue;
        }
        let mut all: Vec<(usize, usize)> = (1..=n1)
            .flat_map(|u| (1..=n2).map(move |v| (u, v)))
            .collect();
        all.shuffle(rng);
        all.truncate(m);
        if let Ok(g) = BipartiteGraph::new(n1, n2, all) {
            return g;
        }
    }
}

/// Edge labels in lexicographic order and the two "next edge at the same
/// vertex" permutations, `rho` (shared V1 end) and `sigma` (shared V2 end).
pub struct Cycles {
    pub edges: Vec<(usize, usize)>,
    pub rho: Vec<usize>,
    pub sigma: Vec<usize>,
}

pub fn oracle_cycles(g: &BipartiteGraph) -> Cycles {
    let mut edges = g.edges().to_vec();
    edges.sort();
    let n = edges.len();
    let next = |same: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
        let mut out = vec![0; n + 1];
        for i in 0..n {
            let group: Vec<usize> = (0..n).filter(|&j| same(i, j)).collect();
            let pos = group.iter().position(|&j| j == i).unwrap();
            out[i + 1] = group[(pos + 1) % group.len()] + 1;
        }
        out
    };
    let rho = next(&|i, j| edges[i].0 == edges[j].0);
    let sigma = next(&|i, j| edges[i].1 == edges[j].1);
    Cycles { edges, rho, sigma }
}

/// Man-optimal and woman-optimal matchings the list construction should
/// produce, with people numbered A, B, C (and a, b, c) in blocks of n.
pub fn expected_extremes(c: &Cycles) -> (Pairs, Pairs) {
    let n = c.edges.len();
    let mut male = Pairs::new();
    let mut female = Pairs::new();
    for i in 1..=n {
        male.insert((i, i));
        male.insert((n + i, n + i));
        male.insert((2 * n + i, 2 * n + i));
        female.insert((i, n + c.rho[i]));
        female.insert((n + i, 2 * n + i));
        female.insert((2 * n + i, c.sigma[i]));
    }
    (male, female)
}

pub fn four_by_five_graph() -> BipartiteGraph {
    BipartiteGraph::new(
        4,
        5,
        vec![
            (1, 1),
            (1, 3),
            (1, 4),
            (2, 1),
            (2, 2),
            (3, 3),
            (4, 4),
            (4, 5),
        ],
    )
    .unwrap()
}

pub fn three_by_four_graph() -> BipartiteGraph {
    BipartiteGraph::new(
        3,
        4,
        vec![
            (1, 1),
            (1, 2),
            (1, 4),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 4),
        ],
    )
    .unwrap()
}
