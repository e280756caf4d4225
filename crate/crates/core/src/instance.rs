//! Preference-list instances, matchings, and their text formats.
//!
//! All public interfaces speak 1-based indices. Internally lists and rank
//! tables are stored 0-based; the conversion happens at the boundary of
//! every public method.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Which side of the market a person belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Man,
    Woman,
}

/// A person, identified by side and 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PersonId {
    pub side: Gender,
    pub index: usize,
}

impl PersonId {
    pub fn man(index: usize) -> Self {
        PersonId {
            side: Gender::Man,
            index,
        }
    }

    pub fn woman(index: usize) -> Self {
        PersonId {
            side: Gender::Woman,
            index,
        }
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Gender::Man => write!(f, "m{}", self.index),
            Gender::Woman => write!(f, "w{}", self.index),
        }
    }
}

/// A complete stable-marriage instance with strict preference lists.
///
/// Immutable once built. Rank tables are precomputed so that every
/// comparison is O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    men_prefs: Vec<Vec<usize>>,
    women_prefs: Vec<Vec<usize>>,
    men_rank: Vec<Vec<usize>>,
    women_rank: Vec<Vec<usize>>,
}

fn check_permutation(list: &[usize], n: usize) -> std::result::Result<(), String> {
    if list.len() != n {
        return Err(format!("list has {} entries, expected {}", list.len(), n));
    }
    let mut seen = vec![false; n];
    for &x in list {
        if x == 0 || x > n {
            return Err(format!("entry {} out of range 1..={}", x, n));
        }
        if seen[x - 1] {
            return Err(format!("list not a permutation (duplicate entry {})", x));
        }
        seen[x - 1] = true;
    }
    Ok(())
}

fn rank_table(prefs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    prefs
        .iter()
        .map(|list| {
            let mut rank = vec![0; list.len()];
            for (pos, &x) in list.iter().enumerate() {
                rank[x] = pos;
            }
            rank
        })
        .collect()
}

impl Instance {
    /// Builds an instance from 1-based preference lists (most preferred first).
    pub fn new(men_prefs: Vec<Vec<usize>>, women_prefs: Vec<Vec<usize>>) -> Result<Self> {
        let n = men_prefs.len();
        if n == 0 {
            return Err(Error::invalid("instance must have n >= 1"));
        }
        if women_prefs.len() != n {
            return Err(Error::invalid(format!(
                "{} men but {} women",
                n,
                women_prefs.len()
            )));
        }
        for (i, list) in men_prefs.iter().enumerate() {
            check_permutation(list, n)
                .map_err(|e| Error::invalid(format!("man {}: {}", i + 1, e)))?;
        }
        for (j, list) in women_prefs.iter().enumerate() {
            check_permutation(list, n)
                .map_err(|e| Error::invalid(format!("woman {}: {}", j + 1, e)))?;
        }
        let to0 = |v: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            v.into_iter()
                .map(|l| l.into_iter().map(|x| x - 1).collect())
                .collect()
        };
        let men_prefs = to0(men_prefs);
        let women_prefs = to0(women_prefs);
        let men_rank = rank_table(&men_prefs);
        let women_rank = rank_table(&women_prefs);
        Ok(Instance {
            n,
            men_prefs,
            women_prefs,
            men_rank,
            women_rank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Man `m`'s list as 1-based woman indices.
    pub fn man_list(&self, m: usize) -> Vec<usize> {
        self.men_prefs[m - 1].iter().map(|&w| w + 1).collect()
    }

    /// Woman `w`'s list as 1-based man indices.
    pub fn woman_list(&self, w: usize) -> Vec<usize> {
        self.women_prefs[w - 1].iter().map(|&m| m + 1).collect()
    }

    pub fn list(&self, person: PersonId) -> Vec<usize> {
        match person.side {
            Gender::Man => self.man_list(person.index),
            Gender::Woman => self.woman_list(person.index),
        }
    }

    /// 1-based position of `candidate` on `person`'s list.
    pub fn rank(&self, person: PersonId, candidate: usize) -> Result<usize> {
        self.check_index(person.index)?;
        self.check_index(candidate)?;
        let table = match person.side {
            Gender::Man => &self.men_rank,
            Gender::Woman => &self.women_rank,
        };
        Ok(table[person.index - 1][candidate - 1] + 1)
    }

    /// True iff `person` strictly prefers `x` to `y`.
    pub fn prefers(&self, person: PersonId, x: usize, y: usize) -> Result<bool> {
        if x == y {
            return Err(Error::invalid(format!(
                "prefers called with identical candidates {}",
                x
            )));
        }
        Ok(self.rank(person, x)? < self.rank(person, y)?)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::invalid(format!(
                "index {} out of range 1..={}",
                i, self.n
            )))
        } else {
            Ok(())
        }
    }

    // 0-based fast paths used by the algorithms.

    #[inline]
    pub(crate) fn man_rank0(&self, m: usize, w: usize) -> usize {
        self.men_rank[m][w]
    }

    #[inline]
    pub(crate) fn woman_rank0(&self, w: usize, m: usize) -> usize {
        self.women_rank[w][m]
    }

    #[inline]
    pub(crate) fn man_prefs0(&self, m: usize) -> &[usize] {
        &self.men_prefs[m]
    }

    #[inline]
    pub(crate) fn woman_prefs0(&self, w: usize) -> &[usize] {
        &self.women_prefs[w]
    }

    /// Parses the line-oriented instance format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut men: Vec<Option<Vec<usize>>> = Vec::new();
        let mut women: Vec<Option<Vec<usize>>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let Some(size) = n else {
                let mut toks = line.split_whitespace();
                match (toks.next(), toks.next(), toks.next()) {
                    (Some("n"), Some(v), None) => {
                        let v: usize = v.parse().map_err(|_| {
                            Error::parse(lineno, format!("malformed header: bad count {:?}", v))
                        })?;
                        if v == 0 {
                            return Err(Error::parse(lineno, "malformed header: n must be >= 1"));
                        }
                        n = Some(v);
                        men = vec![None; v];
                        women = vec![None; v];
                        continue;
                    }
                    _ => {
                        return Err(Error::parse(
                            lineno,
                            format!("malformed header: expected \"n <N>\", got {:?}", line),
                        ))
                    }
                }
            };
            let (tag, idx, list) = parse_list_line(line, lineno)?;
            let slot = match tag {
                "m" => &mut men,
                "w" => &mut women,
                other => {
                    return Err(Error::parse(
                        lineno,
                        format!("expected 'm' or 'w' line, got {:?}", other),
                    ))
                }
            };
            if idx == 0 || idx > size {
                return Err(Error::parse(
                    lineno,
                    format!("n mismatch: person index {} outside 1..={}", idx, size),
                ));
            }
            if slot[idx - 1].is_some() {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate person line for {} {}", tag, idx),
                ));
            }
            if list.len() != size {
                return Err(Error::parse(
                    lineno,
                    format!(
                        "n mismatch: list has {} entries, expected {}",
                        list.len(),
                        size
                    ),
                ));
            }
            check_permutation(&list, size).map_err(|e| Error::parse(lineno, e))?;
            slot[idx - 1] = Some(list);
        }
        let Some(size) = n else {
            return Err(Error::parse(1, "malformed header: missing \"n <N>\""));
        };
        let collect = |v: Vec<Option<Vec<usize>>>, tag: &str| -> Result<Vec<Vec<usize>>> {
            v.into_iter()
                .enumerate()
                .map(|(i, l)| {
                    l.ok_or_else(|| {
                        Error::invalid(format!("n mismatch: missing line for {} {}", tag, i + 1))
                    })
                })
                .collect()
        };
        let men = collect(men, "m")?;
        let women = collect(women, "w")?;
        debug_assert_eq!(men.len(), size);
        Instance::new(men, women)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for m in 1..=self.n {
            write!(f, "m {}:", m)?;
            for w in self.man_list(m) {
                write!(f, " {}", w)?;
            }
            writeln!(f)?;
        }
        for w in 1..=self.n {
            write!(f, "w {}:", w)?;
            for m in self.woman_list(w) {
                write!(f, " {}", m)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(pos) => raw[..pos].trim(),
        None => raw.trim(),
    }
}

fn parse_list_line(line: &str, lineno: usize) -> Result<(&str, usize, Vec<usize>)> {
    let (head, rest) = line.split_once(':').ok_or_else(|| {
        Error::parse(
            lineno,
            format!("expected \"<m|w> <i>: ...\", got {:?}", line),
        )
    })?;
    let mut head_toks = head.split_whitespace();
    let tag = head_toks
        .next()
        .ok_or_else(|| Error::parse(lineno, "missing person tag"))?;
    let idx = head_toks
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| Error::parse(lineno, "missing or bad person index"))?;
    if head_toks.next().is_some() {
        return Err(Error::parse(lineno, "unexpected token before ':'"));
    }
    let list = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad list entry {:?}", t)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((tag, idx, list))
}

/// A perfect matching, stored as man -> woman (1-based at the interface).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    wife: Vec<usize>,
}

impl Matching {
    /// Builds a matching from `wives[m-1] = w` (1-based women).
    pub fn new(wives: Vec<usize>) -> Result<Self> {
        let n = wives.len();
        check_permutation(&wives, n)
            .map_err(|e| Error::invalid(format!("matching is not a bijection: {}", e)))?;
        Ok(Matching {
            wife: wives.into_iter().map(|w| w - 1).collect(),
        })
    }

    pub(crate) fn from_wives0(wife: Vec<usize>) -> Self {
        debug_assert!(check_permutation(
            &wife.iter().map(|w| w + 1).collect::<Vec<_>>(),
            wife.len()
        )
        .is_ok());
        Matching { wife }
    }

    pub fn n(&self) -> usize {
        self.wife.len()
    }

    /// Partner of man `m`.
    pub fn wife(&self, m: usize) -> usize {
        self.wife[m - 1] + 1
    }

    /// Partner of woman `w`.
    pub fn husband(&self, w: usize) -> usize {
        self.wife
            .iter()
            .position(|&x| x + 1 == w)
            .expect("bijection")
            + 1
    }

    /// Pairs `(man, woman)` sorted by man.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.wife
            .iter()
            .enumerate()
            .map(|(m, &w)| (m + 1, w + 1))
            .collect()
    }

    pub(crate) fn wives0(&self) -> &[usize] {
        &self.wife
    }

    pub(crate) fn husbands0(&self) -> Vec<usize> {
        let mut h = vec![0; self.wife.len()];
        for (m, &w) in self.wife.iter().enumerate() {
            h[w] = m;
        }
        h
    }

    pub fn pair_set(&self) -> BTreeSet<(usize, usize)> {
        self.pairs().into_iter().collect()
    }

    /// Parses the `pair <man> <woman>` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["pair", m, w] => {
                    let m: usize = m
                        .parse()
                        .map_err(|_| Error::parse(lineno + 1, "bad man index"))?;
                    let w: usize = w
                        .parse()
                        .map_err(|_| Error::parse(lineno + 1, "bad woman index"))?;
                    pairs.push((m, w));
                }
                _ => {
                    return Err(Error::parse(
                        lineno + 1,
                        format!("expected \"pair <man> <woman>\", got {:?}", line),
                    ))
                }
            }
        }
        let n = pairs.len();
        let mut wives = vec![0; n];
        for (m, w) in pairs {
            if m == 0 || m > n || wives[m - 1] != 0 {
                return Err(Error::invalid(format!(
                    "bad or repeated man {} in matching",
                    m
                )));
            }
            wives[m - 1] = w;
        }
        Matching::new(wives)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, w) in self.pairs() {
            writeln!(f, "pair {} {}", m, w)?;
        }
        Ok(())
    }
}
