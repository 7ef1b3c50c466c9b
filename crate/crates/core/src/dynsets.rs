//! Return-time sets of concrete dynamical systems and finite-window density
//! and syndeticity measurements.
//!
//! Rotations use exact rational angles; irrational angles enter through
//! rational convergents. Arcs are half-open `[c − r, c + r)` on the circle
//! `ℝ/ℤ`, and orbit points landing exactly on an endpoint are reported.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::{format_rational, parse_rational, ratio, Rational};
use crate::window::SetWindow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DynSystem {
    /// `x ↦ x + θ mod 1` with `θ ∈ [0,1)`.
    Rotation(Rational),
    /// Left shift on a stored 0/1 sequence.
    Shift(Vec<u8>),
    Product(Box<DynSystem>, Box<DynSystem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Circle(Rational),
    /// Position within the stored sequence; `Tⁿ` moves it to `offset + n`.
    Shift(usize),
    Pair(Box<Point>, Box<Point>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `[center − radius, center + radius)` modulo 1.
    Arc { center: Rational, radius: Rational },
    /// Sequences starting with the given word.
    Cylinder(Vec<u8>),
    Pair(Box<Target>, Box<Target>),
}

/// `F_k / F_{k+1}` with `F_1 = F_2 = 1`, the `k`-th convergent of the golden
/// mean conjugate `(√5 − 1)/2`.
pub fn golden_convergent(k: u32) -> Result<Rational> {
    if k == 0 || k > 180 {
        return Err(Error::input("golden convergent index must be in 1..=180"));
    }
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    for _ in 1..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    Ok(Rational::new(a, b))
}

fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Splits `a;b` at the single top-level semicolon inside `(a;b)`.
fn split_pair(text: &str) -> Result<(&str, &str)> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::input(format!("expected (A;B), got {text:?}")))?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => return Ok((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    Err(Error::input(format!("expected (A;B), got {text:?}")))
}

fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::input(format!("symbol {c:?} is not 0 or 1"))),
        })
        .collect()
}

impl DynSystem {
    pub fn rotation(theta: Rational) -> Result<Self> {
        if theta.is_negative() || theta >= Rational::one() {
            return Err(Error::input(format!("rotation angle {} outside [0,1)", format_rational(&theta))));
        }
        Ok(DynSystem::Rotation(theta))
    }

    /// Parses `rot:p/q`, `rot:golden:k`, `shift:file=PATH`, `shift:bits=0101…`
    /// or `prod:(A;B)`. Relative shift files resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::input(format!("system {text:?} needs the form kind:args")))?;
        match kind {
            "rot" => match rest.strip_prefix("golden:") {
                Some(k) => {
                    let k = k.trim().parse().map_err(|_| Error::input(format!("bad convergent index {k:?}")))?;
                    Self::rotation(golden_convergent(k)?)
                }
                None => Self::rotation(parse_rational(rest)?),
            },
            "shift" => {
                let bits = if let Some(path) = rest.strip_prefix("file=") {
                    let path = base.join(path);
                    let raw = std::fs::read_to_string(&path)
                        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
                    parse_bits(&raw)?
                } else if let Some(bits) = rest.strip_prefix("bits=") {
                    parse_bits(bits)?
                } else {
                    return Err(Error::input("shift needs file=PATH or bits=WORD"));
                };
                if bits.is_empty() {
                    return Err(Error::input("shift sequence is empty"));
                }
                Ok(DynSystem::Shift(bits))
            }
            "prod" => {
                let (a, b) = split_pair(rest)?;
                Ok(DynSystem::Product(Box::new(Self::parse(a, base)?), Box::new(Self::parse(b, base)?)))
            }
            _ => Err(Error::input(format!("unknown system kind {kind:?}"))),
        }
    }

    /// The origin: `0` on circles, offset 0 on shifts, pairs of origins.
    pub fn origin(&self) -> Point {
        match self {
            DynSystem::Rotation(_) => Point::Circle(Rational::zero()),
            DynSystem::Shift(_) => Point::Shift(0),
            DynSystem::Product(a, b) => Point::Pair(Box::new(a.origin()), Box::new(b.origin())),
        }
    }
}

impl Point {
    /// Parses a point shaped like `sys`: a rational for rotations, an offset
    /// for shifts, `(x;y)` for products.
    pub fn parse(text: &str, sys: &DynSystem) -> Result<Self> {
        match sys {
            DynSystem::Rotation(_) => Ok(Point::Circle(frac(&parse_rational(text)?))),
            DynSystem::Shift(_) => text
                .trim()
                .parse()
                .map(Point::Shift)
                .map_err(|_| Error::input(format!("shift point must be an offset, got {text:?}"))),
            DynSystem::Product(a, b) => {
                let (x, y) = split_pair(text)?;
                Ok(Point::Pair(Box::new(Point::parse(x, a)?), Box::new(Point::parse(y, b)?)))
            }
        }
    }
}

impl Target {
    pub fn arc(center: Rational, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::input("arc radius must be positive"));
        }
        Ok(Target::Arc { center, radius })
    }

    /// `[a, b)` as an arc.
    pub fn interval(a: Rational, b: Rational) -> Result<Self> {
        if b <= a {
            return Err(Error::input("interval needs a < b"));
        }
        let two = Rational::from_integer(BigInt::from(2));
        Self::arc((&a + &b) / &two, (b - a) / two)
    }

    /// Parses `arc:c,r`, `interval:a,b`, `cyl:101` or `pair:(T1;T2)`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::input(format!("target {text:?} needs the form kind:args")))?;
        let two_rationals = || -> Result<(Rational, Rational)> {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::input(format!("{kind} takes two numbers")))?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        };
        match kind {
            "arc" => {
                let (c, r) = two_rationals()?;
                Self::arc(c, r)
            }
            "interval" => {
                let (a, b) = two_rationals()?;
                Self::interval(a, b)
            }
            "cyl" => {
                let word = parse_bits(rest)?;
                if word.is_empty() {
                    return Err(Error::input("cylinder word must be nonempty"));
                }
                Ok(Target::Cylinder(word))
            }
            "pair" => {
                let (a, b) = split_pair(rest)?;
                Ok(Target::Pair(Box::new(Self::parse(a)?), Box::new(Self::parse(b)?)))
            }
            _ => Err(Error::input(format!("unknown target kind {kind:?}"))),
        }
    }
}

/// Result of an orbit scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitHits {
    /// `{ n ≤ N : Tⁿx ∈ U }` under half-open arc semantics.
    pub set: SetWindow,
    /// Times at which some circle coordinate sits exactly on an arc endpoint.
    /// Left endpoints are counted as hits, right endpoints are not.
    pub boundary_hits: Vec<u64>,
}

/// Per-time membership and boundary flags for `n = 1..=N`.
fn scan(sys: &DynSystem, x: &Point, target: &Target, n: u64) -> Result<(Vec<bool>, Vec<bool>)> {
    let len = n as usize;
    match (sys, x, target) {
        (DynSystem::Rotation(theta), Point::Circle(x0), Target::Arc { center, radius }) => {
            let two_r = radius * BigInt::from(2);
            if two_r >= Rational::one() {
                return Ok((vec![true; len], vec![false; len]));
            }
            let left = frac(&(center - radius));
            // everything in units of 1/den
            let den = [theta.denom(), x0.denom(), left.denom(), two_r.denom()]
                .into_iter()
                .fold(BigInt::one(), |acc, d| acc.lcm(d));
            let scale = |q: &Rational| (q * &den).to_integer();
            let (step, width) = (scale(theta), scale(&two_r));
            // position of T^n x relative to the left endpoint
            let mut pos = (scale(&frac(x0)) - scale(&left)).mod_floor(&den);
            let (mut hits, mut edges) = (vec![false; len], vec![false; len]);
            for i in 0..len {
                pos = (pos + &step).mod_floor(&den);
                hits[i] = pos < width;
                edges[i] = pos.is_zero() || pos == width;
            }
            Ok((hits, edges))
        }
        (DynSystem::Shift(bits), Point::Shift(offset), Target::Cylinder(word)) => {
            let need = offset + len + word.len();
            if bits.len() < need {
                return Err(Error::input(format!(
                    "shift sequence has {} symbols; offset {offset}, horizon {n} and word length {} need {need}",
                    bits.len(),
                    word.len()
                )));
            }
            let hits = (1..=len).map(|i| bits[offset + i..offset + i + word.len()] == word[..]).collect();
            Ok((hits, vec![false; len]))
        }
        (DynSystem::Product(a, b), Point::Pair(xa, xb), Target::Pair(ua, ub)) => {
            let (ha, ea) = scan(a, xa, ua, n)?;
            let (hb, eb) = scan(b, xb, ub, n)?;
            Ok((
                ha.iter().zip(&hb).map(|(p, q)| *p && *q).collect(),
                ea.iter().zip(&eb).map(|(p, q)| *p || *q).collect(),
            ))
        }
        _ => Err(Error::input("system, point and target have mismatched shapes")),
    }
}

/// `{ n ≤ N : Tⁿx ∈ U }`, computed exactly.
pub fn orbit_hits(sys: &DynSystem, x: &Point, target: &Target, n: u64) -> Result<OrbitHits> {
    if n == 0 {
        return Err(Error::input("horizon must be at least 1"));
    }
    if n > crate::window::MAX_HORIZON {
        return Err(Error::input(format!("horizon {n} exceeds the cap {}", crate::window::MAX_HORIZON)));
    }
    let (hits, edges) = scan(sys, x, target, n)?;
    let pick = |flags: &[bool]| flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i as u64 + 1).collect::<Vec<_>>();
    Ok(OrbitHits { set: SetWindow::new(n, pick(&hits))?, boundary_hits: pick(&edges) })
}

/// `{ n ≤ N : Tⁿx ∈ U₁ and Sⁿy ∈ U₂ }`.
pub fn product_return_times(
    a: &DynSystem,
    b: &DynSystem,
    x: &Point,
    y: &Point,
    ua: &Target,
    ub: &Target,
    n: u64,
) -> Result<OrbitHits> {
    orbit_hits(
        &DynSystem::Product(Box::new(a.clone()), Box::new(b.clone())),
        &Point::Pair(Box::new(x.clone()), Box::new(y.clone())),
        &Target::Pair(Box::new(ua.clone()), Box::new(ub.clone())),
        n,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub window: u64,
    pub start: u64,
    pub count: u64,
    #[serde(with = "rational_text")]
    pub estimate: Rational,
}

mod rational_text {
    use super::*;

    pub fn serialize<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Largest share of `S` in a length-`w` window inside `[1..N]`, with the
/// leftmost maximizing start.
pub fn banach_density_estimate(s: &SetWindow, w: u64) -> Result<DensityReport> {
    let n = s.horizon();
    if w == 0 || w > n {
        return Err(Error::input(format!("window length must be in 1..={n}")));
    }
    let inside = |k: u64| u64::from(s.contains(k as i128));
    let mut count: u64 = (1..=w).map(inside).sum();
    let (mut best, mut start) = (count, 1);
    for a in 2..=n - w + 1 {
        count = count + inside(a + w - 1) - inside(a - 1);
        if count > best {
            best = count;
            start = a;
        }
    }
    Ok(DensityReport { window: w, start, count: best, estimate: ratio(best as i64, w as i64) })
}

/// Largest gap between consecutive elements of `{0} ∪ S ∪ {N+1}`.
pub fn syndetic_gap(s: &SetWindow) -> u64 {
    let mut prev = 0;
    let mut gap = 0;
    for &m in s.members().iter().chain(std::iter::once(&(s.horizon() + 1))) {
        gap = gap.max(m - prev);
        prev = m;
    }
    gap
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PwsReport {
    pub holds: bool,
    /// Leftmost `a` with `[a, a+L−1]` covered, when one exists.
    pub witness: Option<u64>,
    /// Length and start of the leftmost longest covered run.
    pub best_length: u64,
    pub best_start: Option<u64>,
}

/// Whether `⋃_{i≤k} (S − i)` covers an interval of length `L` inside
/// `[1..N]`.
pub fn piecewise_syndetic_window(s: &SetWindow, k: u64, l: u64) -> Result<PwsReport> {
    if l == 0 {
        return Err(Error::input("interval length must be at least 1"));
    }
    let n = s.horizon();
    // next member at or after each position
    let mut next = vec![u64::MAX; n as usize + 2];
    for pos in (1..=n).rev() {
        next[pos as usize] = if s.contains(pos as i128) { pos } else { next[pos as usize + 1] };
    }
    let (mut run, mut best, mut best_start, mut witness) = (0u64, 0u64, None, None);
    for pos in 1..=n {
        let covered = next[pos as usize] != u64::MAX && next[pos as usize] - pos <= k;
        run = if covered { run + 1 } else { 0 };
        if run > best {
            best = run;
            best_start = Some(pos + 1 - run);
        }
        if witness.is_none() && run >= l {
            witness = Some(pos + 1 - l);
        }
    }
    Ok(PwsReport { holds: witness.is_some(), witness, best_length: best, best_start })
}

/// A residue class `t + nℤ` removed from the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraussWitness {
    pub t: i64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraussSet {
    pub set: SetWindow,
    pub witnesses: Vec<StraussWitness>,
}

/// `0, 1, −1, 2, −2, …`
fn strauss_shift(j: usize) -> i64 {
    let h = j.div_ceil(2) as i64;
    if j % 2 == 1 {
        h
    } else {
        -h
    }
}

/// `[1..N]` minus the classes `t_j + n_jℤ` with `t_j = 0, 1, −1, 2, …` and
/// `n_j = 2^{j+1}·⌈1/ε⌉`, stopping before the first `n_j > N`.
pub fn strauss_set(eps: &Rational, n: u64) -> Result<StraussSet> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::input(format!("epsilon {} outside (0,1)", format_rational(eps))));
    }
    if n == 0 {
        return Err(Error::input("horizon must be at least 1"));
    }
    let base = eps.recip().ceil().to_integer().to_u64().expect("1/eps fits after range check");
    let mut witnesses = Vec::new();
    for j in 0.. {
        let modulus = match base.checked_mul(1u64.checked_shl(j as u32 + 1).unwrap_or(0)) {
            Some(m) if m > 0 && m <= n => m,
            _ => break,
        };
        witnesses.push(StraussWitness { t: strauss_shift(j), n: modulus });
    }
    let set = SetWindow::from_predicate(n, |x| {
        !witnesses.iter().any(|w| (x as i128 - w.t as i128).rem_euclid(w.n as i128) == 0)
    })?;
    Ok(StraussSet { set, witnesses })
}

/// `S ∩ (t + nℤ) ∩ [1..N] = ∅`.
pub fn strauss_witness_holds(s: &SetWindow, w: &StraussWitness) -> bool {
    let first = (w.t as i128).rem_euclid(w.n as i128);
    let first = if first == 0 { w.n as i128 } else { first };
    (0..)
        .map(|i| first + i * w.n as i128)
        .take_while(|&x| x <= s.horizon() as i128)
        .all(|x| !s.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rational;
    use proptest::prelude::*;

    fn rot(p: i64, q: i64) -> DynSystem {
        DynSystem::rotation(ratio(p, q)).unwrap()
    }

    fn zero() -> Point {
        Point::Circle(rational(0))
    }

    #[test]
    fn rotation_example() {
        let u = Target::interval(rational(0), ratio(1, 5)).unwrap();
        let hits = orbit_hits(&rot(5, 8), &zero(), &u, 16).unwrap();
        assert_eq!(hits.set.members(), &[5, 8, 13, 16]);
        assert_eq!(hits.boundary_hits, vec![8, 16]);
        let u = Target::interval(ratio(1, 2), ratio(3, 5)).unwrap();
        assert!(orbit_hits(&rot(0, 1), &zero(), &u, 10).unwrap().set.is_empty());
    }

    #[test]
    fn right_endpoint_is_excluded_and_flagged() {
        let u = Target::interval(ratio(1, 4), ratio(1, 2)).unwrap();
        let hits = orbit_hits(&rot(1, 4), &zero(), &u, 4).unwrap();
        assert_eq!(hits.set.members(), &[1]);
        assert_eq!(hits.boundary_hits, vec![1, 2]);
    }

    #[test]
    fn arc_wraps_around_zero() {
        let u = Target::arc(rational(0), ratio(1, 10)).unwrap();
        let hits = orbit_hits(&rot(19, 20), &zero(), &u, 3).unwrap();
        assert_eq!(hits.set.members(), &[1, 2]);
    }

    #[test]
    fn shift_example() {
        let sys = DynSystem::Shift(vec![1; 20]);
        let hits = orbit_hits(&sys, &Point::Shift(0), &Target::Cylinder(vec![1]), 10).unwrap();
        assert_eq!(hits.set.members(), &(1..=10).collect::<Vec<_>>()[..]);
        assert!(orbit_hits(&sys, &Point::Shift(0), &Target::Cylinder(vec![1]), 20).is_err());
    }

    #[test]
    fn product_examples() {
        let v = Target::interval(rational(0), ratio(1, 10)).unwrap();
        let hits = product_return_times(&rot(1, 2), &rot(1, 3), &zero(), &zero(), &v, &v, 12).unwrap();
        assert_eq!(hits.set.members(), &[6, 12]);
        let full = Target::arc(rational(0), rational(1)).unwrap();
        let all = product_return_times(&rot(3, 7), &rot(2, 9), &zero(), &zero(), &full, &full, 30).unwrap();
        assert_eq!(all.set.len(), 30);
    }

    #[test]
    fn parsing() {
        let base = Path::new(".");
        let sys = DynSystem::parse("prod:(rot:1/2;prod:(rot:1/3;rot:golden:13))", base).unwrap();
        let DynSystem::Product(_, inner) = &sys else { panic!() };
        let DynSystem::Product(_, g) = inner.as_ref() else { panic!() };
        assert_eq!(**g, DynSystem::Rotation(ratio(233, 377)));
        let pt = Point::parse("(1/2;(0;3/4))", &sys).unwrap();
        assert!(matches!(pt, Point::Pair(..)));
        assert!(DynSystem::parse("rot:3/2", base).is_err());
        assert_eq!(Target::parse("cyl:101").unwrap(), Target::Cylinder(vec![1, 0, 1]));
        assert_eq!(
            Target::parse("interval:0,1/5").unwrap(),
            Target::Arc { center: ratio(1, 10), radius: ratio(1, 10) }
        );
        assert!(Target::parse("arc:0,0").is_err());
        assert!(matches!(Target::parse("pair:(arc:0,1/10;cyl:1)").unwrap(), Target::Pair(..)));
    }

    #[test]
    fn golden_gap_stabilizes() {
        let sys = DynSystem::parse("rot:golden:13", Path::new(".")).unwrap();
        let u = Target::arc(rational(0), ratio(1, 10)).unwrap();
        let small = syndetic_gap(&orbit_hits(&sys, &zero(), &u, 1000).unwrap().set);
        let large = syndetic_gap(&orbit_hits(&sys, &zero(), &u, 10_000).unwrap().set);
        assert_eq!((small, large), (8, 8));
    }

    #[test]
    fn density_examples() {
        let odds = SetWindow::odds(100).unwrap();
        assert_eq!(banach_density_estimate(&odds, 10).unwrap().estimate, ratio(1, 2));
        let squares = SetWindow::from_predicate(10_000, |n| (n as f64).sqrt().round().powi(2) as u64 == n).unwrap();
        let report = banach_density_estimate(&squares, 100).unwrap();
        assert_eq!((report.start, report.count, report.estimate.clone()), (1, 10, ratio(1, 10)));
        let full = SetWindow::full(50).unwrap();
        assert_eq!(banach_density_estimate(&full, 7).unwrap().estimate, rational(1));
        assert!(banach_density_estimate(&full, 51).is_err());
    }

    #[test]
    fn gap_examples() {
        assert_eq!(syndetic_gap(&SetWindow::evens(100).unwrap()), 2);
        assert_eq!(syndetic_gap(&SetWindow::new(100, [50]).unwrap()), 51);
        assert_eq!(syndetic_gap(&SetWindow::new(10, []).unwrap()), 11);
    }

    #[test]
    fn pws_examples() {
        let threes = SetWindow::residue(0, 3, 99).unwrap();
        let r = piecewise_syndetic_window(&threes, 2, 30).unwrap();
        assert_eq!((r.holds, r.witness), (true, Some(1)));
        let r = piecewise_syndetic_window(&SetWindow::odds(99).unwrap(), 0, 2).unwrap();
        assert_eq!((r.holds, r.best_length), (false, 1));
        let squares = SetWindow::from_predicate(10_000, |n| (n as f64).sqrt().round().powi(2) as u64 == n).unwrap();
        let r = piecewise_syndetic_window(&squares, 3, 20).unwrap();
        assert_eq!((r.holds, r.best_length, r.best_start), (false, 4, Some(1)));
    }

    #[test]
    fn strauss_examples() {
        let s = strauss_set(&ratio(1, 2), 8).unwrap();
        assert_eq!(s.set.members(), &[2, 3, 5, 6, 7]);
        assert_eq!(s.witnesses, vec![StraussWitness { t: 0, n: 4 }, StraussWitness { t: 1, n: 8 }]);
        let s = strauss_set(&ratio(1, 4), 100_000).unwrap();
        let t: Vec<i64> = s.witnesses.iter().map(|w| w.t).collect();
        assert_eq!(&t[..4], &[0, 1, -1, 2]);
        assert_eq!(s.witnesses[3].n, 64);
        assert_eq!(s.set.len(), 75_000);
        assert!(strauss_set(&rational(1), 10).is_err());
        assert!(strauss_set(&rational(0), 10).is_err());
    }

    #[test]
    fn strauss_shift_blocks_ip_sets() {
        use crate::ipcore::zero_sum_mod;
        let s = strauss_set(&ratio(1, 3), 5000).unwrap();
        for w in &s.witnesses {
            // any n elements of S − t contain a block whose sum lies in nℤ,
            // hence outside S − t: S − t holds no IP-set
            let shifted: Vec<i128> = s
                .set
                .members()
                .iter()
                .map(|&x| x as i128 - w.t as i128)
                .filter(|&x| x > 0)
                .take(w.n as usize)
                .collect();
            if shifted.len() < w.n as usize {
                continue;
            }
            let block = zero_sum_mod(&shifted, w.n).unwrap().unwrap();
            let sum: i128 = block.iter().map(|&i| shifted[i - 1]).sum();
            assert!(!s.set.contains(sum + w.t as i128));
        }
    }

    proptest! {
        #[test]
        fn rational_orbits_are_periodic(p in 0i64..40, q in 1i64..40, c in 0i64..20, r in 1i64..10) {
            prop_assume!(p < q);
            let u = Target::arc(ratio(c, 20), ratio(r, 40)).unwrap();
            let hits = orbit_hits(&rot(p, q), &zero(), &u, 200).unwrap().set;
            for n in 1..=(200 - q as u64) {
                prop_assert_eq!(hits.contains(n as i128), hits.contains((n + q as u64) as i128));
            }
        }

        #[test]
        fn diagonal_identity(p in 0i64..30, q in 1i64..30, c in 0i64..10, r in 1i64..10, x in 0i64..10) {
            prop_assume!(p < q);
            let sys = rot(p, q);
            let pt = Point::Circle(ratio(x, 10));
            let v = Target::arc(ratio(c, 10), ratio(r, 30)).unwrap();
            let diag = product_return_times(&sys, &sys, &pt, &pt, &v, &v, 100).unwrap();
            prop_assert_eq!(diag, orbit_hits(&sys, &pt, &v, 100).unwrap());
        }

        #[test]
        fn density_monotone(bits in proptest::collection::vec(any::<bool>(), 60), extra in proptest::collection::vec(1u64..=60, 0..20), w in 1u64..=60) {
            let small = SetWindow::from_predicate(60, |n| bits[n as usize - 1]).unwrap();
            let big = SetWindow::new(60, small.members().iter().copied().chain(extra)).unwrap();
            prop_assert!(banach_density_estimate(&small, w).unwrap().estimate <= banach_density_estimate(&big, w).unwrap().estimate);
        }

        #[test]
        fn strauss_guarantees(den in 2i64..40, num in 1i64..40, n in 1u64..5000) {
            prop_assume!(num < den);
            let eps = ratio(num, den);
            let s = strauss_set(&eps, n).unwrap();
            let removed: Rational = s.witnesses.iter().map(|w| ratio(1, w.n as i64)).sum();
            prop_assert!(removed <= eps);
            // each class loses at most one element to rounding
            let lost = n - s.set.len() as u64;
            prop_assert!(ratio(lost as i64, 1) <= eps * rational(n as i64) + rational(s.witnesses.len() as i64));
            for w in &s.witnesses {
                prop_assert!(strauss_witness_holds(&s.set, w));
            }
        }
    }
}
