//! Geometric preference models: k-attribute dot products, k-Euclidean
//! distances, and the one-attribute special case.
//!
//! Dot-product coordinates may involve cosines and sines of rational
//! turns, so scores are compared through interval enclosures whose
//! precision doubles until every comparison is certified. Euclidean
//! coordinates are exact scalars and compared directly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::counting::Count;
use crate::error::{Error, Result};
use crate::instance::{strip_comment, Instance};
use crate::interval::{Interval, TrigContext};
use crate::rotations::find_all_rotations;

pub const DEFAULT_START_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Numeric types usable as exact or approximate coordinates.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {
    fn from_rational(r: &BigRational) -> Self;
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a plain decimal such as `-0.25`.
pub fn parse_rational(tok: &str) -> Option<BigRational> {
    let tok = tok.trim();
    if let Some((p, q)) = tok.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int, frac);
    let mut value = BigRational::new(
        BigInt::from_str(&digits).ok()?,
        BigInt::from(10).pow(frac.len() as u32),
    );
    if neg {
        value = -value;
    }
    Some(value)
}

/// One multiplicative factor of a coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// A nonnegative rational.
    Rational(BigRational),
    /// `cos(2π·r)`.
    Cos(BigRational),
    /// `sin(2π·r)`.
    Sin(BigRational),
    /// `base^exp`.
    Pow(BigRational, i32),
}

impl Factor {
    // cos/sin are exact at multiples of a quarter turn
    fn exact(&self) -> Option<BigRational> {
        let quarter_turns = |r: &BigRational| -> Option<i64> {
            let q = r * BigRational::from_integer(BigInt::from(4));
            q.is_integer().then(|| mod4(&q.to_integer()))
        };
        match self {
            Factor::Rational(r) => Some(r.clone()),
            Factor::Pow(b, e) => {
                if b.is_zero() && *e < 0 {
                    None
                } else if *e >= 0 {
                    Some(num_traits::pow(b.clone(), *e as usize))
                } else {
                    Some(num_traits::pow(b.recip(), e.unsigned_abs() as usize))
                }
            }
            Factor::Cos(r) => quarter_turns(r).map(|k| rat([1, 0, -1, 0][k as usize], 1)),
            Factor::Sin(r) => quarter_turns(r).map(|k| rat([0, 1, 0, -1][k as usize], 1)),
        }
    }

    fn eval(&self, ctx: &TrigContext) -> Interval {
        if let Some(v) = self.exact() {
            return Interval::from_rational(&v, ctx.precision());
        }
        match self {
            Factor::Cos(r) => ctx.cos_turns(r),
            Factor::Sin(r) => ctx.sin_turns(r),
            _ => unreachable!("rational factors are exact"),
        }
    }
}

fn mod4(x: &BigInt) -> i64 {
    x.mod_floor(&BigInt::from(4)).to_i64().expect("small")
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Factor::Cos(r) => write!(f, "cos({})", fmt_rational(r)),
            Factor::Sin(r) => write!(f, "sin({})", fmt_rational(r)),
            Factor::Pow(b, e) => write!(f, "pow({},{})", fmt_rational(b), e),
        }
    }
}

/// A coordinate: an optionally negated product of factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coord {
    negative: bool,
    factors: Vec<Factor>,
}

impl Coord {
    pub fn rational(r: BigRational) -> Self {
        Coord {
            negative: r.is_negative(),
            factors: vec![Factor::Rational(r.abs())],
        }
    }

    pub fn integer(i: i64) -> Self {
        Coord::rational(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn cos_turns(r: BigRational) -> Self {
        Coord {
            negative: false,
            factors: vec![Factor::Cos(r)],
        }
    }

    pub fn sin_turns(r: BigRational) -> Self {
        Coord {
            negative: false,
            factors: vec![Factor::Sin(r)],
        }
    }

    pub fn pow(base: i64, exp: i32) -> Self {
        Coord {
            negative: false,
            factors: vec![Factor::Pow(
                BigRational::from_integer(BigInt::from(base)),
                exp,
            )],
        }
    }

    pub fn times(mut self, other: Coord) -> Self {
        self.negative ^= other.negative;
        self.factors.extend(other.factors);
        self
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The exact value when no factor needs an enclosure.
    pub fn exact(&self) -> Option<BigRational> {
        let mut v = BigRational::one();
        for f in &self.factors {
            v *= f.exact()?;
        }
        Some(if self.negative { -v } else { v })
    }

    pub fn eval(&self, ctx: &TrigContext) -> Interval {
        let mut v = Interval::from_rational(&BigRational::one(), ctx.precision());
        for f in &self.factors {
            v = v.mul(&f.eval(ctx));
        }
        if self.negative {
            v.neg()
        } else {
            v
        }
    }

    pub fn parse(tok: &str) -> Option<Coord> {
        let (negative, body) = match tok.strip_prefix('-') {
            Some(rest) if !rest.starts_with(|c: char| c.is_ascii_digit() || c == '.') => {
                (true, rest)
            }
            _ => (false, tok),
        };
        let mut coord = Coord {
            negative,
            factors: Vec::new(),
        };
        for part in body.split('*') {
            let part = part.trim();
            let inner = |name: &str| {
                part.strip_prefix(name)
                    .and_then(|r| r.strip_prefix('('))
                    .and_then(|r| r.strip_suffix(')'))
            };
            if let Some(arg) = inner("cos") {
                coord.factors.push(Factor::Cos(parse_rational(arg)?));
            } else if let Some(arg) = inner("sin") {
                coord.factors.push(Factor::Sin(parse_rational(arg)?));
            } else if let Some(args) = inner("pow") {
                let (b, e) = args.split_once(',')?;
                coord
                    .factors
                    .push(Factor::Pow(parse_rational(b)?, e.trim().parse().ok()?));
            } else {
                let r = parse_rational(part)?;
                coord.negative ^= r.is_negative();
                coord.factors.push(Factor::Rational(r.abs()));
            }
        }
        Some(coord)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", factor)?;
        }
        Ok(())
    }
}

/// k-attribute model: each person has a position vector and a preference
/// vector; a person ranks the other side by descending dot product of
/// their preference vector with the others' positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub k: usize,
    pub men_pos: Vec<Vec<Coord>>,
    pub men_pref: Vec<Vec<Coord>>,
    pub women_pos: Vec<Vec<Coord>>,
    pub women_pref: Vec<Vec<Coord>>,
}

/// k-Euclidean model: a person ranks the other side by ascending
/// distance from their preference point to the others' positions.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanSpec<T = BigRational> {
    pub k: usize,
    pub men_pos: Vec<Vec<T>>,
    pub men_pref: Vec<Vec<T>>,
    pub women_pos: Vec<Vec<T>>,
    pub women_pref: Vec<Vec<T>>,
}

fn check_shape<T>(k: usize, tables: [(&str, &Vec<Vec<T>>); 4]) -> Result<usize> {
    let n = tables[0].1.len();
    if n == 0 {
        return Err(Error::invalid("spec needs n >= 1"));
    }
    if k == 0 {
        return Err(Error::invalid("spec needs k >= 1"));
    }
    for (name, table) in tables {
        if table.len() != n {
            return Err(Error::invalid(format!(
                "{} has {} rows, expected {}",
                name,
                table.len(),
                n
            )));
        }
        if let Some(i) = table.iter().position(|row| row.len() != k) {
            return Err(Error::invalid(format!(
                "{} {} has {} coordinates, expected {}",
                name,
                i + 1,
                table[i].len(),
                k
            )));
        }
    }
    Ok(n)
}

impl AttributeSpec {
    pub fn n(&self) -> usize {
        self.men_pos.len()
    }

    pub fn validate(&self) -> Result<usize> {
        check_shape(
            self.k,
            [
                ("mpos", &self.men_pos),
                ("mpref", &self.men_pref),
                ("wpos", &self.women_pos),
                ("wpref", &self.women_pref),
            ],
        )
    }
}

impl<T: Scalar> EuclideanSpec<T> {
    pub fn n(&self) -> usize {
        self.men_pos.len()
    }

    pub fn validate(&self) -> Result<usize> {
        check_shape(
            self.k,
            [
                ("mpos", &self.men_pos),
                ("mpref", &self.men_pref),
                ("wpos", &self.women_pos),
                ("wpref", &self.women_pref),
            ],
        )
    }

    /// Converts every coordinate to another scalar type.
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> EuclideanSpec<U> {
        let m = |t: &Vec<Vec<T>>| t.iter().map(|r| r.iter().map(&f).collect()).collect();
        EuclideanSpec {
            k: self.k,
            men_pos: m(&self.men_pos),
            men_pref: m(&self.men_pref),
            women_pos: m(&self.women_pos),
            women_pref: m(&self.women_pref),
        }
    }
}

/// A parsed geometric specification file.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometricSpec {
    Dot(AttributeSpec),
    Euclid(EuclideanSpec<BigRational>),
}

struct RawSpec {
    dot: bool,
    k: usize,
    tables: [Vec<Vec<Coord>>; 4],
}

const TAGS: [&str; 4] = ["mpos", "mpref", "wpos", "wpref"];

fn parse_raw(text: &str) -> Result<RawSpec> {
    let mut header: Option<(bool, usize, usize)> = None;
    let mut slots: [Vec<Option<Vec<Coord>>>; 4] = Default::default();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let Some((_, k, n)) = header else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || {
                Error::parse(
                    lineno,
                    format!(
                        "malformed header: expected \"model dot|euclid <k> <n>\", got {:?}",
                        line
                    ),
                )
            };
            match toks.as_slice() {
                ["model", model, k, n] => {
                    let dot = match *model {
                        "dot" => true,
                        "euclid" => false,
                        _ => return Err(bad()),
                    };
                    let k: usize = k.parse().map_err(|_| bad())?;
                    let n: usize = n.parse().map_err(|_| bad())?;
                    if k == 0 || n == 0 {
                        return Err(Error::parse(
                            lineno,
                            "malformed header: k and n must be >= 1",
                        ));
                    }
                    header = Some((dot, k, n));
                    for s in slots.iter_mut() {
                        *s = vec![None; n];
                    }
                    continue;
                }
                _ => return Err(bad()),
            }
        };
        let (head, rest) = line.split_once(':').ok_or_else(|| {
            Error::parse(
                lineno,
                format!("expected \"<tag> <i>: ...\", got {:?}", line),
            )
        })?;
        let mut head_toks = head.split_whitespace();
        let tag = head_toks.next().unwrap_or("");
        let slot = TAGS
            .iter()
            .position(|t| *t == tag)
            .ok_or_else(|| Error::parse(lineno, format!("unknown line tag {:?}", tag)))?;
        let idx: usize = head_toks
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&i| i >= 1 && i <= n)
            .ok_or_else(|| Error::parse(lineno, format!("person index outside 1..={}", n)))?;
        if head_toks.next().is_some() {
            return Err(Error::parse(lineno, "unexpected token before ':'"));
        }
        let coords = rest
            .split_whitespace()
            .map(|t| {
                Coord::parse(t)
                    .ok_or_else(|| Error::parse(lineno, format!("bad coordinate {:?}", t)))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != k {
            return Err(Error::parse(
                lineno,
                format!("expected {} coordinates, got {}", k, coords.len()),
            ));
        }
        if slots[slot][idx - 1].is_some() {
            return Err(Error::parse(
                lineno,
                format!("duplicate line for {} {}", tag, idx),
            ));
        }
        slots[slot][idx - 1] = Some(coords);
    }
    let (dot, k, _) =
        header.ok_or_else(|| Error::parse(1, "malformed header: missing \"model\" line"))?;
    let mut tables: [Vec<Vec<Coord>>; 4] = Default::default();
    for (s, slot) in slots.into_iter().enumerate() {
        tables[s] = slot
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.ok_or_else(|| Error::invalid(format!("missing line for {} {}", TAGS[s], i + 1)))
            })
            .collect::<Result<_>>()?;
    }
    Ok(RawSpec { dot, k, tables })
}

impl GeometricSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw = parse_raw(text)?;
        let [men_pos, men_pref, women_pos, women_pref] = raw.tables;
        if raw.dot {
            return Ok(GeometricSpec::Dot(AttributeSpec {
                k: raw.k,
                men_pos,
                men_pref,
                women_pos,
                women_pref,
            }));
        }
        let exact = |t: Vec<Vec<Coord>>, tag: &str| -> Result<Vec<Vec<BigRational>>> {
            t.into_iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .map(|c| {
                            c.exact().ok_or_else(|| {
                                Error::invalid(format!(
                                    "{} {}: euclid coordinates must be rational, got {}",
                                    tag,
                                    i + 1,
                                    c
                                ))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        Ok(GeometricSpec::Euclid(EuclideanSpec {
            k: raw.k,
            men_pos: exact(men_pos, "mpos")?,
            men_pref: exact(men_pref, "mpref")?,
            women_pos: exact(women_pos, "wpos")?,
            women_pref: exact(women_pref, "wpref")?,
        }))
    }

    /// Builds the induced preference lists.
    pub fn to_instance(&self, max_bits: u32) -> Result<Instance> {
        match self {
            GeometricSpec::Dot(s) => instance_from_dot_with_bits(s, DEFAULT_START_BITS, max_bits),
            GeometricSpec::Euclid(s) => instance_from_euclidean(s),
        }
    }
}

fn write_tables<T>(
    f: &mut fmt::Formatter<'_>,
    tables: [&Vec<Vec<T>>; 4],
    show: impl Fn(&T) -> String,
) -> fmt::Result {
    for (tag, table) in TAGS.iter().zip(tables) {
        for (i, row) in table.iter().enumerate() {
            write!(f, "{} {}:", tag, i + 1)?;
            for c in row {
                write!(f, " {}", show(c))?;
            }
            writeln!(f)?;
        }
    }
    Ok(())
}

impl fmt::Display for AttributeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model dot {} {}", self.k, self.n())?;
        write_tables(
            f,
            [
                &self.men_pos,
                &self.men_pref,
                &self.women_pos,
                &self.women_pref,
            ],
            |c| c.to_string(),
        )
    }
}

impl<T: Scalar> fmt::Display for EuclideanSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model euclid {} {}", self.k, self.n())?;
        write_tables(
            f,
            [
                &self.men_pos,
                &self.men_pref,
                &self.women_pos,
                &self.women_pref,
            ],
            |c| c.to_string(),
        )
    }
}

impl fmt::Display for GeometricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometricSpec::Dot(s) => s.fmt(f),
            GeometricSpec::Euclid(s) => s.fmt(f),
        }
    }
}

fn tie_error(who: &str, i: usize, other: &str, a: usize, b: usize, detail: &str) -> Error {
    Error::TieDetected(format!(
        "{} {} cannot separate {} {} and {} {}{}",
        who,
        i + 1,
        other,
        a + 1,
        other,
        b + 1,
        detail
    ))
}

// Sorts one side's lists by descending dot product, certifying every
// adjacent comparison.
fn rank_by_dot(
    prefs: &[Vec<Coord>],
    positions: &[Vec<Coord>],
    who: &str,
    other: &str,
    start_bits: u32,
    max_bits: u32,
) -> Result<Vec<Vec<usize>>> {
    let n = prefs.len();
    let mut lists: Vec<Option<Vec<usize>>> = vec![None; n];
    let exact_pos: Option<Vec<Vec<BigRational>>> = positions
        .iter()
        .map(|row| row.iter().map(Coord::exact).collect())
        .collect();
    let mut pending = Vec::new();
    for (i, pref) in prefs.iter().enumerate() {
        let exact_pref: Option<Vec<BigRational>> = pref.iter().map(Coord::exact).collect();
        let (Some(pref), Some(pos)) = (exact_pref, exact_pos.as_ref()) else {
            pending.push(i);
            continue;
        };
        let scores: Vec<BigRational> = pos
            .iter()
            .map(|p| p.iter().zip(&pref).map(|(a, b)| a * b).sum())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
        if let Some(w) = order.windows(2).find(|w| scores[w[0]] == scores[w[1]]) {
            return Err(tie_error(who, i, other, w[0], w[1], " (equal scores)"));
        }
        lists[i] = Some(order);
    }
    let mut bits = start_bits.min(max_bits);
    while !pending.is_empty() {
        let ctx = TrigContext::new(bits);
        let eval_row = |row: &Vec<Coord>| row.iter().map(|c| c.eval(&ctx)).collect::<Vec<_>>();
        let pos: Vec<Vec<Interval>> = positions.iter().map(eval_row).collect();
        let mut still = Vec::new();
        for &i in &pending {
            let pref = eval_row(&prefs[i]);
            let scores: Vec<Interval> = pos
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&pref)
                        .map(|(a, b)| a.mul(b))
                        .reduce(|x, y| x.add(&y))
                        .expect("k >= 1")
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| scores[b].mid2().cmp(&scores[a].mid2()));
            match order
                .windows(2)
                .find(|w| !scores[w[0]].certainly_gt(&scores[w[1]]))
            {
                None => lists[i] = Some(order),
                Some(w) if bits >= max_bits => {
                    return Err(tie_error(
                        who,
                        i,
                        other,
                        w[0],
                        w[1],
                        &format!(" at {} bits", bits),
                    ))
                }
                Some(_) => still.push(i),
            }
        }
        pending = still;
        bits = (bits.saturating_mul(2)).min(max_bits);
    }
    Ok(lists
        .into_iter()
        .map(|l| l.expect("ranked").into_iter().map(|x| x + 1).collect())
        .collect())
}

/// Preference lists induced by dot products, with certified comparisons
/// starting at 128 bits and capped at 4096.
pub fn instance_from_dot(spec: &AttributeSpec) -> Result<Instance> {
    instance_from_dot_with_bits(spec, DEFAULT_START_BITS, DEFAULT_MAX_BITS)
}

pub fn instance_from_dot_with_bits(
    spec: &AttributeSpec,
    start_bits: u32,
    max_bits: u32,
) -> Result<Instance> {
    spec.validate()?;
    let men = rank_by_dot(
        &spec.men_pref,
        &spec.women_pos,
        "man",
        "woman",
        start_bits,
        max_bits,
    )?;
    let women = rank_by_dot(
        &spec.women_pref,
        &spec.men_pos,
        "woman",
        "man",
        start_bits,
        max_bits,
    )?;
    Instance::new(men, women)
}

fn dist2<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

fn rank_by_distance<T: Scalar>(
    prefs: &[Vec<T>],
    positions: &[Vec<T>],
    who: &str,
    other: &str,
) -> Result<Vec<Vec<usize>>> {
    let n = prefs.len();
    prefs
        .iter()
        .enumerate()
        .map(|(i, pref)| {
            let d: Vec<T> = positions.iter().map(|p| dist2(pref, p)).collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(Ordering::Equal));
            if let Some(w) = order
                .windows(2)
                .find(|w| d[w[0]].partial_cmp(&d[w[1]]) != Some(Ordering::Less))
            {
                return Err(tie_error(who, i, other, w[0], w[1], " (equal distances)"));
            }
            Ok(order.into_iter().map(|x| x + 1).collect())
        })
        .collect()
}

/// Preference lists induced by squared Euclidean distances.
pub fn instance_from_euclidean<T: Scalar>(spec: &EuclideanSpec<T>) -> Result<Instance> {
    spec.validate()?;
    let men = rank_by_distance(&spec.men_pref, &spec.women_pos, "man", "woman")?;
    let women = rank_by_distance(&spec.women_pref, &spec.men_pos, "woman", "man")?;
    Instance::new(men, women)
}

/// One-attribute model: each person has an attribute and a nonzero
/// preference scalar. A positive preference ranks the other side by
/// descending attribute, a negative one by ascending attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct OneAttributeSpec<T = BigRational> {
    men_attr: Vec<T>,
    men_pref: Vec<T>,
    women_attr: Vec<T>,
    women_pref: Vec<T>,
}

impl<T: Scalar> OneAttributeSpec<T> {
    pub fn new(
        men_attr: Vec<T>,
        men_pref: Vec<T>,
        women_attr: Vec<T>,
        women_pref: Vec<T>,
    ) -> Result<Self> {
        let n = men_attr.len();
        if n == 0 {
            return Err(Error::invalid("spec needs n >= 1"));
        }
        if [men_pref.len(), women_attr.len(), women_pref.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(Error::invalid(
                "attribute and preference vectors differ in length",
            ));
        }
        for (side, prefs) in [("man", &men_pref), ("woman", &women_pref)] {
            if let Some(i) = prefs.iter().position(|p| p.is_zero()) {
                return Err(Error::invalid(format!(
                    "{} {} has zero preference scalar",
                    side,
                    i + 1
                )));
            }
        }
        for (side, attrs) in [("men", &men_attr), ("women", &women_attr)] {
            let mut sorted: Vec<&T> = attrs.iter().collect();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            if sorted
                .windows(2)
                .any(|w| w[0].partial_cmp(w[1]) != Some(Ordering::Less))
            {
                return Err(Error::TieDetected(format!(
                    "{} attributes are not distinct",
                    side
                )));
            }
        }
        Ok(OneAttributeSpec {
            men_attr,
            men_pref,
            women_attr,
            women_pref,
        })
    }

    pub fn n(&self) -> usize {
        self.men_attr.len()
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let lists = |prefs: &[T], attrs: &[T]| -> Vec<Vec<usize>> {
            let mut asc: Vec<usize> = (0..attrs.len()).collect();
            asc.sort_by(|&a, &b| attrs[a].partial_cmp(&attrs[b]).expect("distinct"));
            let asc: Vec<usize> = asc.into_iter().map(|x| x + 1).collect();
            let desc: Vec<usize> = asc.iter().rev().copied().collect();
            prefs
                .iter()
                .map(|p| {
                    if *p > T::zero() {
                        desc.clone()
                    } else {
                        asc.clone()
                    }
                })
                .collect()
        };
        Instance::new(
            lists(&self.men_pref, &self.women_attr),
            lists(&self.women_pref, &self.men_attr),
        )
    }

    /// The equivalent one-dimensional dot-product specification.
    pub fn to_attribute_spec(&self) -> AttributeSpec
    where
        T: Into<BigRational>,
    {
        let col = |v: &[T]| {
            v.iter()
                .map(|x| vec![Coord::rational(x.clone().into())])
                .collect()
        };
        AttributeSpec {
            k: 1,
            men_pos: col(&self.men_attr),
            men_pref: col(&self.men_pref),
            women_pos: col(&self.women_attr),
            women_pref: col(&self.women_pref),
        }
    }
}

impl OneAttributeSpec<BigRational> {
    /// Reads a `k = 1` dot-product spec with rational coordinates.
    pub fn from_attribute_spec(spec: &AttributeSpec) -> Result<Self> {
        spec.validate()?;
        if spec.k != 1 {
            return Err(Error::invalid(format!(
                "one-attribute spec needs k = 1, got {}",
                spec.k
            )));
        }
        let col = |t: &[Vec<Coord>]| -> Result<Vec<BigRational>> {
            t.iter()
                .map(|row| {
                    row[0]
                        .exact()
                        .ok_or_else(|| Error::invalid("one-attribute coordinates must be rational"))
                })
                .collect()
        };
        OneAttributeSpec::new(
            col(&spec.men_pos)?,
            col(&spec.men_pref)?,
            col(&spec.women_pos)?,
            col(&spec.women_pref)?,
        )
    }
}

/// Number of stable matchings of a one-attribute instance: its rotation
/// poset is a chain, so the count is the number of rotations plus one.
pub fn count_1attribute<T: Scalar>(spec: &OneAttributeSpec<T>) -> Result<Count> {
    let instance = spec.to_instance()?;
    let (rotations, _) = find_all_rotations(&instance);
    Ok(Count::from(rotations.len() + 1))
}
