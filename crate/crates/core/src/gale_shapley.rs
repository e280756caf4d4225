//! The proposal algorithm, stability checks, and lattice operations.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::instance::{Instance, Matching};

/// Which side makes proposals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    MenPropose,
    WomenPropose,
}

/// Proposer-optimal stable matching, processing free proposers in
/// ascending index order.
pub fn propose_optimal(instance: &Instance, side: Side) -> Matching {
    let order: Vec<usize> = (1..=instance.n()).collect();
    propose_optimal_with_order(instance, side, &order)
}

/// Same as [`propose_optimal`], with free proposers queued in `order`
/// (1-based). The result does not depend on the order.
pub fn propose_optimal_with_order(instance: &Instance, side: Side, order: &[usize]) -> Matching {
    let n = instance.n();
    debug_assert_eq!(order.len(), n);
    let men = side == Side::MenPropose;
    // proposer p's list and the receiver's rank lookup, both 0-based
    let prop_list = |p: usize| {
        if men {
            instance.man_prefs0(p)
        } else {
            instance.woman_prefs0(p)
        }
    };
    let recv_rank = |r: usize, p: usize| {
        if men {
            instance.woman_rank0(r, p)
        } else {
            instance.man_rank0(r, p)
        }
    };
    let mut next = vec![0usize; n];
    let mut engaged_to: Vec<Option<usize>> = vec![None; n];
    let mut free: VecDeque<usize> = order.iter().map(|&p| p - 1).collect();
    while let Some(p) = free.pop_front() {
        let r = prop_list(p)[next[p]];
        next[p] += 1;
        match engaged_to[r] {
            None => engaged_to[r] = Some(p),
            Some(current) => {
                if recv_rank(r, p) < recv_rank(r, current) {
                    engaged_to[r] = Some(p);
                    free.push_front(current);
                } else {
                    free.push_front(p);
                }
            }
        }
    }
    let mut proposer_partner = vec![0usize; n];
    for (r, p) in engaged_to.iter().enumerate() {
        proposer_partner[p.expect("all receivers engaged")] = r;
    }
    match side {
        Side::MenPropose => Matching::from_wives0(proposer_partner),
        Side::WomenPropose => {
            // proposer_partner[woman] = man; invert
            let mut wife = vec![0usize; n];
            for (w, &m) in proposer_partner.iter().enumerate() {
                wife[m] = w;
            }
            Matching::from_wives0(wife)
        }
    }
}

/// All blocking pairs `(man, woman)` of `matching`, 1-based.
pub fn blocking_pairs(instance: &Instance, matching: &Matching) -> BTreeSet<(usize, usize)> {
    let n = instance.n();
    let wife = matching.wives0();
    let husband = matching.husbands0();
    let mut out = BTreeSet::new();
    for m in 0..n {
        let my_rank = instance.man_rank0(m, wife[m]);
        // only women m ranks above his wife can block
        for &w in &instance.man_prefs0(m)[..my_rank] {
            if instance.woman_rank0(w, m) < instance.woman_rank0(w, husband[w]) {
                out.insert((m + 1, w + 1));
            }
        }
    }
    out
}

pub fn is_stable(instance: &Instance, matching: &Matching) -> bool {
    blocking_pairs(instance, matching).is_empty()
}

/// Returns `(max, min)`: in `max` every woman gets the partner she prefers
/// among her two partners, in `min` the other one.
pub fn lattice_meet_join(
    instance: &Instance,
    m1: &Matching,
    m2: &Matching,
) -> Result<(Matching, Matching)> {
    if m1.n() != instance.n() || m2.n() != instance.n() {
        return Err(Error::invalid("matching size differs from instance size"));
    }
    for (name, m) in [("first", m1), ("second", m2)] {
        let bp = blocking_pairs(instance, m);
        if let Some(&(a, b)) = bp.iter().next() {
            return Err(Error::NotStable(format!(
                "{} matching has blocking pair ({}, {})",
                name, a, b
            )));
        }
    }
    let n = instance.n();
    let h1 = m1.husbands0();
    let h2 = m2.husbands0();
    let mut max_wife = vec![0usize; n];
    let mut min_wife = vec![0usize; n];
    for w in 0..n {
        let (best, worst) = if instance.woman_rank0(w, h1[w]) <= instance.woman_rank0(w, h2[w]) {
            (h1[w], h2[w])
        } else {
            (h2[w], h1[w])
        };
        max_wife[best] = w;
        min_wife[worst] = w;
    }
    Ok((
        Matching::from_wives0(max_wife),
        Matching::from_wives0(min_wife),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> Instance {
        Instance::parse("n 2\nm 1: 1 2\nm 2: 2 1\nw 1: 2 1\nw 2: 1 2\n").unwrap()
    }

    #[test]
    fn single_person_instance() {
        let inst = Instance::parse("n 1\nm 1: 1\nw 1: 1\n").unwrap();
        for side in [Side::MenPropose, Side::WomenPropose] {
            let m = propose_optimal(&inst, side);
            assert_eq!(m.pairs(), vec![(1, 1)]);
            assert!(blocking_pairs(&inst, &m).is_empty());
        }
    }

    #[test]
    fn both_optima_on_two_by_two() {
        let inst = two_by_two();
        let men = propose_optimal(&inst, Side::MenPropose);
        let women = propose_optimal(&inst, Side::WomenPropose);
        assert_eq!(men.pairs(), vec![(1, 1), (2, 2)]);
        assert_eq!(women.pairs(), vec![(1, 2), (2, 1)]);
    }

    // definitional double loop, independent of blocking_pairs' pruning
    fn oracle_blocking(inst: &Instance, m: &Matching) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for man in 1..=inst.n() {
            for woman in 1..=inst.n() {
                let wife = m.wife(man);
                let husband = m.husband(woman);
                if wife == woman {
                    continue;
                }
                let man_wants = inst.rank(crate::PersonId::man(man), woman).unwrap()
                    < inst.rank(crate::PersonId::man(man), wife).unwrap();
                let woman_wants = inst.rank(crate::PersonId::woman(woman), man).unwrap()
                    < inst.rank(crate::PersonId::woman(woman), husband).unwrap();
                if man_wants && woman_wants {
                    out.insert((man, woman));
                }
            }
        }
        out
    }

    #[test]
    fn blocking_pairs_match_double_loop() {
        let inst = two_by_two();
        let m = Matching::new(vec![1, 2]).unwrap();
        assert_eq!(blocking_pairs(&inst, &m), oracle_blocking(&inst, &m));
        // men (1,2)/(2,1), women (2,1)/(1,2): {(1,1),(2,2)} is the male optimum
        assert!(blocking_pairs(&inst, &m).is_empty());
        let inst = Instance::parse("n 2\nm 1: 1 2\nm 2: 1 2\nw 1: 1 2\nw 2: 1 2\n").unwrap();
        let m = Matching::new(vec![2, 1]).unwrap();
        let bp = blocking_pairs(&inst, &m);
        assert_eq!(bp, oracle_blocking(&inst, &m));
        assert_eq!(bp.into_iter().collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn meet_join_idempotent_and_rejects_unstable() {
        let inst = two_by_two();
        let a = propose_optimal(&inst, Side::MenPropose);
        let b = propose_optimal(&inst, Side::WomenPropose);
        let (mx, mn) = lattice_meet_join(&inst, &a, &a).unwrap();
        assert_eq!((mx, mn), (a.clone(), a.clone()));
        let (mx, mn) = lattice_meet_join(&inst, &a, &b).unwrap();
        assert_eq!(mx, b);
        assert_eq!(mn, a);
        let inst = Instance::parse("n 2\nm 1: 1 2\nm 2: 1 2\nw 1: 1 2\nw 2: 1 2\n").unwrap();
        let bad = Matching::new(vec![2, 1]).unwrap();
        let good = propose_optimal(&inst, Side::MenPropose);
        assert!(matches!(
            lattice_meet_join(&inst, &bad, &good),
            Err(Error::NotStable(_))
        ));
    }
}
