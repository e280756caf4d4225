//! Suitors, rotations, the rotation poset and truncated preference lists.
//!
//! A rotation is exposed in a stable matching when every listed man's
//! suitor is the next listed woman. Applying it moves each man one step
//! to his suitor. All rotations of an instance are discovered by walking
//! one maximal path of the stable-matching lattice from the man-optimal
//! to the woman-optimal matching; every rotation appears on such a path
//! exactly once.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gale_shapley::{propose_optimal, Side};
use crate::instance::{Instance, Matching};
use crate::poset::Poset;

/// A rotation, stored in canonical form: the cycle is shifted so that
/// the smallest man comes first. Pairs are 1-based `(man, woman)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    cycle: Vec<(usize, usize)>,
}

impl Rotation {
    pub fn new(cycle: Vec<(usize, usize)>) -> Result<Self> {
        if cycle.len() < 2 {
            return Err(Error::invalid("a rotation has at least two pairs"));
        }
        let men: BTreeSet<_> = cycle.iter().map(|p| p.0).collect();
        let women: BTreeSet<_> = cycle.iter().map(|p| p.1).collect();
        if men.len() != cycle.len() || women.len() != cycle.len() {
            return Err(Error::invalid("rotation repeats a man or a woman"));
        }
        let start = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| p.0)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut cycle = cycle;
        cycle.rotate_left(start);
        Ok(Rotation { cycle })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn men(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|p| p.0)
    }

    pub fn women(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|p| p.1)
    }

    pub fn pair_set(&self) -> BTreeSet<(usize, usize)> {
        self.cycle.iter().copied().collect()
    }

    /// The woman man `m` moves to, if `m` is in the rotation.
    pub fn new_partner_of(&self, m: usize) -> Option<usize> {
        let k = self.cycle.len();
        let i = self.cycle.iter().position(|p| p.0 == m)?;
        Some(self.cycle[(i + 1) % k].1)
    }

    /// `(old partner, new partner)` of woman `w`, if `w` is in the rotation.
    fn woman_partners(&self, w: usize) -> Option<(usize, usize)> {
        let k = self.cycle.len();
        let i = self.cycle.iter().position(|p| p.1 == w)?;
        Some((self.cycle[i].0, self.cycle[(i + k - 1) % k].0))
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, w)) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({},{})", m, w)?;
        }
        Ok(())
    }
}

/// Rotations in discovery order plus the precedence order among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationPoset {
    pub rotations: Vec<Rotation>,
    pub order: Poset,
}

impl RotationPoset {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Index pairs `(a, b)` with rotation `a` preceding rotation `b`.
    pub fn precedes(&self) -> BTreeSet<(usize, usize)> {
        self.order.relation()
    }

    /// Rotation list in `rot k: ...` format, 1-based.
    pub fn rotations_text(&self) -> String {
        format_rotations(&self.rotations)
    }
}

pub fn format_rotations(rotations: &[Rotation]) -> String {
    let mut out = String::new();
    for (i, r) in rotations.iter().enumerate() {
        out.push_str(&format!("rot {}: {}\n", i + 1, r));
    }
    out
}

// Rank of each man's woman-optimal partner. Women listed below it are
// never stable partners of his and cannot be suitors.
fn last_ranks0(instance: &Instance) -> Vec<usize> {
    let wopt = propose_optimal(instance, Side::WomenPropose);
    (0..instance.n())
        .map(|m| instance.man_rank0(m, wopt.wives0()[m]))
        .collect()
}

// Suitor of 0-based man m given 0-based wife/husband arrays.
fn suitor0(
    instance: &Instance,
    last: &[usize],
    wife: &[usize],
    husband: &[usize],
    m: usize,
) -> Option<usize> {
    let list = instance.man_prefs0(m);
    let start = instance.man_rank0(m, wife[m]) + 1;
    list.get(start..=last[m])?
        .iter()
        .copied()
        .find(|&w| instance.woman_rank0(w, m) < instance.woman_rank0(w, husband[w]))
}

/// The first woman below `man`'s wife who prefers `man` to her husband.
/// Only women the man can be stably matched with are considered, that is
/// women down to his woman-optimal partner; without that restriction a
/// man could have a suitor in the woman-optimal matching itself.
pub fn suitor(instance: &Instance, matching: &Matching, man: usize) -> Option<usize> {
    let husband = matching.husbands0();
    let last = last_ranks0(instance);
    suitor0(instance, &last, matching.wives0(), &husband, man - 1).map(|w| w + 1)
}

fn exposed_rotation0(
    instance: &Instance,
    last: &[usize],
    wife: &[usize],
    husband: &[usize],
    start: usize,
) -> Result<Rotation> {
    let n = instance.n();
    // seen_at[w] = position of woman w in the sequence
    let mut seen_at: Vec<Option<usize>> = vec![None; n];
    let mut seq: Vec<(usize, usize)> = Vec::new();
    let mut man = start;
    let mut woman = wife[start];
    loop {
        if let Some(t) = seen_at[woman] {
            let cycle = seq[t..].iter().map(|&(m, w)| (m + 1, w + 1)).collect();
            return Rotation::new(cycle);
        }
        seen_at[woman] = Some(seq.len());
        seq.push((man, woman));
        let next = suitor0(instance, last, wife, husband, man).ok_or_else(|| {
            if seq.len() == 1 {
                Error::invalid(format!("man {} has no suitor", man + 1))
            } else {
                Error::Inconsistency(format!(
                    "man {} reached while tracing a rotation has no suitor; matching is not stable",
                    man + 1
                ))
            }
        })?;
        woman = next;
        man = husband[woman];
    }
}

/// Follows spouse/suitor links from `man` until a woman repeats and
/// returns the cycle found.
pub fn exposed_rotation_from(
    instance: &Instance,
    matching: &Matching,
    man: usize,
) -> Result<Rotation> {
    if man == 0 || man > instance.n() {
        return Err(Error::invalid(format!("man {} out of range", man)));
    }
    let husband = matching.husbands0();
    let last = last_ranks0(instance);
    exposed_rotation0(instance, &last, matching.wives0(), &husband, man - 1)
}

/// Moves every man of `rotation` to the next woman of the cycle.
pub fn apply_rotation(matching: &Matching, rotation: &Rotation) -> Result<Matching> {
    let mut wife = matching.wives0().to_vec();
    for &(m, w) in rotation.pairs() {
        if m == 0 || m > wife.len() || wife[m - 1] + 1 != w {
            return Err(Error::invalid(format!(
                "rotation pair ({}, {}) is not in the matching",
                m, w
            )));
        }
    }
    for &(m, _) in rotation.pairs() {
        wife[m - 1] = rotation.new_partner_of(m).expect("member") - 1;
    }
    Ok(Matching::from_wives0(wife))
}

/// Every rotation of the instance together with the lattice path used to
/// find them, scanning men in ascending index order.
pub fn find_all_rotations(instance: &Instance) -> (Vec<Rotation>, Vec<Matching>) {
    let order: Vec<usize> = (1..=instance.n()).collect();
    find_all_rotations_with_order(instance, &order).expect("ascending order is a permutation")
}

/// As [`find_all_rotations`], picking at each step the first man in
/// `order` (1-based) who has a suitor.
pub fn find_all_rotations_with_order(
    instance: &Instance,
    order: &[usize],
) -> Result<(Vec<Rotation>, Vec<Matching>)> {
    let n = instance.n();
    let mut seen = vec![false; n];
    if order.len() != n
        || !order
            .iter()
            .all(|&m| m >= 1 && m <= n && !std::mem::replace(&mut seen[m - 1], true))
    {
        return Err(Error::invalid("man ordering is not a permutation of 1..=n"));
    }
    let last = last_ranks0(instance);
    let mut current = propose_optimal(instance, Side::MenPropose);
    let mut path = vec![current.clone()];
    let mut rotations = Vec::new();
    loop {
        let wife = current.wives0().to_vec();
        let husband = current.husbands0();
        let Some(first) = order
            .iter()
            .map(|&m| m - 1)
            .find(|&m| suitor0(instance, &last, &wife, &husband, m).is_some())
        else {
            break;
        };
        let rotation = exposed_rotation0(instance, &last, &wife, &husband, first)?;
        current = apply_rotation(&current, &rotation)?;
        path.push(current.clone());
        rotations.push(rotation);
    }
    Ok((rotations, path))
}

/// Pairs `(M, w)` that `rotation` eliminates: for each woman of the
/// rotation, every man from her old partner (inclusive) up to her new
/// partner (exclusive) on her list.
pub fn eliminated_pairs(instance: &Instance, rotation: &Rotation) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for w in rotation.women() {
        let (old, new) = rotation.woman_partners(w).expect("member");
        let list = instance.woman_prefs0(w - 1);
        let r_old = instance.woman_rank0(w - 1, old - 1);
        let r_new = instance.woman_rank0(w - 1, new - 1);
        for &m in &list[r_new + 1..=r_old] {
            out.insert((m + 1, w));
        }
    }
    out
}

/// `r` eliminates some `(M, w)` and `r2` moves `M` to a woman he likes
/// strictly less than `w`.
pub fn explicitly_precedes(instance: &Instance, r: &Rotation, r2: &Rotation) -> bool {
    explicitly_precedes_with(instance, &eliminated_pairs(instance, r), r2)
}

fn explicitly_precedes_with(
    instance: &Instance,
    eliminated: &BTreeSet<(usize, usize)>,
    r2: &Rotation,
) -> bool {
    eliminated.iter().any(|&(m, w)| {
        r2.new_partner_of(m)
            .map(|w2| instance.man_rank0(m - 1, w - 1) < instance.man_rank0(m - 1, w2 - 1))
            .unwrap_or(false)
    })
}

/// Rotations in discovery order with precedence = transitive closure of
/// the explicit-precedence relation.
pub fn rotation_poset(instance: &Instance) -> Result<RotationPoset> {
    let (rotations, _) = find_all_rotations(instance);
    rotation_poset_from(instance, rotations)
}

pub fn rotation_poset_from(instance: &Instance, rotations: Vec<Rotation>) -> Result<RotationPoset> {
    let eliminated: Vec<_> = rotations
        .iter()
        .map(|r| eliminated_pairs(instance, r))
        .collect();
    let mut relations = Vec::new();
    for (a, elim) in eliminated.iter().enumerate() {
        for (b, r2) in rotations.iter().enumerate() {
            if a != b && explicitly_precedes_with(instance, elim, r2) {
                relations.push((a, b));
            }
        }
    }
    let order = Poset::from_relations(rotations.len(), &relations)?;
    Ok(RotationPoset { rotations, order })
}

/// Transitive reduction of the precedence relation, as index pairs.
pub fn hasse_diagram(poset: &RotationPoset) -> Vec<(usize, usize)> {
    poset.order.hasse_edges()
}

/// Graphviz rendering of the Hasse diagram; nodes are labelled with the
/// canonical rotation string.
pub fn hasse_dot(poset: &RotationPoset) -> String {
    let mut out = String::from("digraph rotations {\n");
    for (i, r) in poset.rotations.iter().enumerate() {
        out.push_str(&format!("  r{} [label=\"{}\"];\n", i + 1, r));
    }
    for (a, b) in hasse_diagram(poset) {
        out.push_str(&format!("  r{} -> r{};\n", a + 1, b + 1));
    }
    out.push_str("}\n");
    out
}

/// Each person's list clipped to the span between their two extreme
/// stable partners (inclusive), 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedLists {
    pub men: Vec<Vec<usize>>,
    pub women: Vec<Vec<usize>>,
}

pub fn truncated_lists(instance: &Instance) -> TruncatedLists {
    let man_opt = propose_optimal(instance, Side::MenPropose);
    let woman_opt = propose_optimal(instance, Side::WomenPropose);
    let n = instance.n();
    let men = (0..n)
        .map(|m| {
            let lo = instance.man_rank0(m, man_opt.wives0()[m]);
            let hi = instance.man_rank0(m, woman_opt.wives0()[m]);
            instance.man_prefs0(m)[lo..=hi]
                .iter()
                .map(|w| w + 1)
                .collect()
        })
        .collect();
    let h_man = man_opt.husbands0();
    let h_woman = woman_opt.husbands0();
    let women = (0..n)
        .map(|w| {
            let lo = instance.woman_rank0(w, h_woman[w]);
            let hi = instance.woman_rank0(w, h_man[w]);
            instance.woman_prefs0(w)[lo..=hi]
                .iter()
                .map(|m| m + 1)
                .collect()
        })
        .collect();
    TruncatedLists { men, women }
}
