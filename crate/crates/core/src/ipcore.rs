//! Finite index sets, IP-systems and their finite sums.
//!
//! Index sets are members of 𝓕 restricted to `{1..64}` and stored as a
//! bitmask. An [`IpSpec`] describes a generator sequence `s_1, s_2, …` (scalar
//! or vector valued) and `s_α` is the sum of the terms indexed by `α`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::SetWindow;

/// Largest index an index set may contain.
pub const INDEX_CAP: u32 = 64;

/// A nonempty finite set of indices in `1..=64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteIndexSet(u64);

impl FiniteIndexSet {
    pub fn new(members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut mask = 0u64;
        for k in members {
            if k == 0 || k > INDEX_CAP {
                return Err(Error::input(format!("index {k} outside 1..={INDEX_CAP}")));
            }
            mask |= 1 << (k - 1);
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: u64) -> Result<Self> {
        if mask == 0 {
            Err(Error::input("index set must be nonempty"))
        } else {
            Ok(FiniteIndexSet(mask))
        }
    }

    pub fn singleton(k: u32) -> Result<Self> {
        Self::new([k])
    }

    /// `{lo, lo+1, …, hi}`.
    pub fn interval(lo: u32, hi: u32) -> Result<Self> {
        Self::new(lo..=hi)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn min(self) -> u32 {
        self.0.trailing_zeros() + 1
    }

    pub fn max(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, k: u32) -> bool {
        (1..=INDEX_CAP).contains(&k) && self.0 >> (k - 1) & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        FiniteIndexSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (1..=INDEX_CAP).filter(move |&k| self.contains(k))
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl fmt::Display for FiniteIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for FiniteIndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteIndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        FiniteIndexSet::new(v).map_err(serde::de::Error::custom)
    }
}

/// `max α < min β`.
pub fn alpha_less(a: FiniteIndexSet, b: FiniteIndexSet) -> bool {
    a.max() < b.min()
}

/// Generator rule for `s_1, s_2, …`. Named rules index from 1:
/// `Arith { a, d }` gives `a, a+d, a+2d, …` and `Geom { a, r }` gives
/// `a, a·r, a·r², …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Const(i128),
    Arith { a: i128, d: i128 },
    Geom { a: i128, r: i128 },
    /// Explicit terms; every inner vector has the same width.
    List(Vec<Vec<i128>>),
}

/// An IP-system generator together with its horizon (the number of terms
/// available).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpSpec {
    rule: Rule,
    horizon: u32,
    width: usize,
}

impl IpSpec {
    /// A named scalar rule with the given horizon (at most 64).
    pub fn rule(rule: Rule, horizon: u32) -> Result<Self> {
        if horizon == 0 || horizon > INDEX_CAP {
            return Err(Error::input(format!("horizon must be in 1..={INDEX_CAP}")));
        }
        let width = match &rule {
            Rule::List(_) => return Self::list(match rule {
                Rule::List(v) => v,
                _ => unreachable!(),
            }),
            _ => 1,
        };
        let spec = IpSpec { rule, horizon, width };
        for k in 1..=horizon {
            spec.term_checked(k)?;
        }
        Ok(spec)
    }

    pub fn scalars(values: &[i128]) -> Result<Self> {
        Self::list(values.iter().map(|&v| vec![v]).collect())
    }

    /// Explicit (possibly vector valued) terms; the horizon is their count.
    pub fn list(terms: Vec<Vec<i128>>) -> Result<Self> {
        if terms.is_empty() || terms.len() > INDEX_CAP as usize {
            return Err(Error::input(format!("explicit generator needs 1..={INDEX_CAP} terms")));
        }
        let width = terms[0].len();
        if width == 0 || terms.iter().any(|t| t.len() != width) {
            return Err(Error::input("explicit generator terms must share a nonzero width"));
        }
        Ok(IpSpec { horizon: terms.len() as u32, width, rule: Rule::List(terms) })
    }

    /// Parses `const:k`, `arith:a,d`, `geom:a,r` or `list:v1,v2,…`; named
    /// rules take `horizon` terms.
    pub fn parse(text: &str, horizon: u32) -> Result<Self> {
        let (kind, args) = text
            .split_once(':')
            .ok_or_else(|| Error::input(format!("generator rule {text:?} needs the form kind:args")))?;
        let nums: Vec<i128> = args
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::input(format!("bad number {t:?} in {text:?}"))))
            .collect::<Result<_>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::input(format!("{kind} takes {n} argument(s), got {}", nums.len())))
            }
        };
        match kind {
            "const" => {
                arity(1)?;
                Self::rule(Rule::Const(nums[0]), horizon)
            }
            "arith" => {
                arity(2)?;
                Self::rule(Rule::Arith { a: nums[0], d: nums[1] }, horizon)
            }
            "geom" => {
                arity(2)?;
                Self::rule(Rule::Geom { a: nums[0], r: nums[1] }, horizon)
            }
            "list" => Self::scalars(&nums),
            _ => Err(Error::input(format!("unknown generator rule {kind:?}"))),
        }
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rule_ref(&self) -> &Rule {
        &self.rule
    }

    fn term_checked(&self, k: u32) -> Result<Vec<i128>> {
        if k == 0 || k > self.horizon {
            return Err(Error::input(format!("index {k} beyond the horizon {}", self.horizon)));
        }
        let overflow = || Error::input(format!("term {k} overflows"));
        let n = (k - 1) as i128;
        Ok(match &self.rule {
            Rule::Const(c) => vec![*c],
            Rule::Arith { a, d } => vec![d.checked_mul(n).and_then(|x| x.checked_add(*a)).ok_or_else(overflow)?],
            Rule::Geom { a, r } => vec![r.checked_pow(k - 1).and_then(|x| x.checked_mul(*a)).ok_or_else(overflow)?],
            Rule::List(terms) => terms[(k - 1) as usize].clone(),
        })
    }

    /// The `k`-th generator term (1-based).
    pub fn term(&self, k: u32) -> Result<Vec<i128>> {
        self.term_checked(k)
    }

    pub fn terms(&self) -> Vec<Vec<i128>> {
        (1..=self.horizon).map(|k| self.term_checked(k).expect("validated at construction")).collect()
    }
}

/// `s_α`, coordinate-wise for vector-valued systems.
pub fn ip_term(spec: &IpSpec, alpha: FiniteIndexSet) -> Result<Vec<i128>> {
    if alpha.max() > spec.horizon {
        return Err(Error::input(format!(
            "index {} beyond the horizon {}",
            alpha.max(),
            spec.horizon
        )));
    }
    let mut sum = vec![0i128; spec.width];
    for k in alpha.iter() {
        for (acc, t) in sum.iter_mut().zip(spec.term_checked(k)?) {
            *acc = acc.checked_add(t).ok_or_else(|| Error::input("finite sum overflows"))?;
        }
    }
    Ok(sum)
}

/// Scalar shorthand for [`ip_term`].
pub fn ip_term_scalar(spec: &IpSpec, alpha: FiniteIndexSet) -> Result<i128> {
    if spec.width != 1 {
        return Err(Error::input("scalar term requested from a vector-valued system"));
    }
    Ok(ip_term(spec, alpha)?[0])
}

/// Largest prefix length accepted by [`fs_enumerate`].
pub const FS_CAP: u32 = 20;

/// All finite sums `s_α` with `∅ ≠ α ⊆ {1..k}`.
pub fn fs_sums(spec: &IpSpec, k: u32) -> Result<BTreeSet<i128>> {
    if k == 0 || k > spec.horizon {
        return Err(Error::input(format!("prefix length {k} must be in 1..={}", spec.horizon)));
    }
    if k > FS_CAP {
        return Err(Error::budget(format!("prefix length {k} exceeds the cap {FS_CAP} (2^k - 1 sums)")));
    }
    if spec.width != 1 {
        return Err(Error::input("finite sums are enumerated for scalar systems only"));
    }
    let terms: Vec<i128> = (1..=k).map(|i| spec.term_checked(i).map(|t| t[0])).collect::<Result<_>>()?;
    let mut sums = vec![0i128; 1 << k];
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)]
            .checked_add(terms[low])
            .ok_or_else(|| Error::input("finite sum overflows"))?;
    }
    Ok(sums[1..].iter().copied().collect())
}

/// FS-set of the first `k` terms as a window whose horizon is its largest
/// element. Every sum must be a positive integer.
pub fn fs_enumerate(spec: &IpSpec, k: u32) -> Result<SetWindow> {
    let sums = fs_sums(spec, k)?;
    if let Some(&low) = sums.iter().next() {
        if low < 1 {
            return Err(Error::input(format!("finite sum {low} is not a positive integer")));
        }
    }
    let top = *sums.iter().next_back().expect("k >= 1");
    let horizon = u64::try_from(top).map_err(|_| Error::input("finite sums too large"))?;
    SetWindow::new(horizon, sums.into_iter().map(|v| v as u64))
}

/// Positions `i < j` of the first repeated residue among the prefix sums
/// `P_0 = 0, P_1, …` of `values` modulo `modulus`. The block `i+1..=j` then
/// sums to a multiple of `modulus`.
fn first_repeat(values: impl Iterator<Item = i128>, modulus: i128) -> Option<(usize, usize)> {
    let mut seen = std::collections::HashMap::new();
    seen.insert(0i128, 0usize);
    let mut prefix = 0i128;
    for (j, v) in values.enumerate() {
        prefix = (prefix + v.rem_euclid(modulus)).rem_euclid(modulus);
        if let Some(&i) = seen.get(&prefix) {
            return Some((i, j + 1));
        }
        seen.insert(prefix, j + 1);
    }
    None
}

/// `α_1 < α_2 < … < α_n` with `c | s_{α_i}` for every `i`, read off from
/// coordinate `coord` of the system.
///
/// The index line is cut into consecutive blocks of `c` indices. Within each
/// block the `c + 1` prefix sums `0, s_b, s_b + s_{b+1}, …` take at most `c`
/// residues, so two agree; the indices between them form `α_i`.
pub fn find_divisible_subsequence_at(
    spec: &IpSpec,
    coord: usize,
    c: u64,
    n: u32,
) -> Result<Vec<FiniteIndexSet>> {
    if c == 0 || n == 0 {
        return Err(Error::input("modulus and count must be at least 1"));
    }
    if coord >= spec.width {
        return Err(Error::input(format!("coordinate {coord} out of range for width {}", spec.width)));
    }
    let needed = n as u64 * c;
    if needed > spec.horizon as u64 {
        return Err(Error::input(format!(
            "horizon {} too small: {n} divisible blocks modulo {c} need n·c = {needed} terms",
            spec.horizon
        )));
    }
    let c32 = c as u32;
    let terms = spec.terms();
    (0..n)
        .map(|block| {
            let start = block * c32 + 1;
            let values = (start..start + c32).map(|k| terms[(k - 1) as usize][coord]);
            let (i, j) = first_repeat(values, c as i128).expect("pigeonhole on c + 1 prefix sums");
            FiniteIndexSet::interval(start + i as u32, start + j as u32 - 1)
        })
        .collect()
}

/// Scalar version of [`find_divisible_subsequence_at`].
pub fn find_divisible_subsequence(spec: &IpSpec, c: u64, n: u32) -> Result<Vec<FiniteIndexSet>> {
    if spec.width != 1 {
        return Err(Error::input("use find_divisible_subsequence_at for vector-valued systems"));
    }
    find_divisible_subsequence_at(spec, 0, c, n)
}

/// Indices (1-based, increasing) of a nonempty subfamily of `xs` whose sum is
/// divisible by `n`.
///
/// With at least `n` values a consecutive block always exists (first repeated
/// prefix residue). With fewer, a block is still tried first and the search
/// falls back to all subsets in increasing bitmask order; `None` means no
/// subset works.
pub fn zero_sum_mod(xs: &[i128], n: u64) -> Result<Option<Vec<usize>>> {
    if n == 0 {
        return Err(Error::input("modulus must be at least 1"));
    }
    if xs.is_empty() {
        return Err(Error::input("need at least one value"));
    }
    let m = n as i128;
    if let Some((i, j)) = first_repeat(xs.iter().copied(), m) {
        return Ok(Some((i + 1..=j).collect()));
    }
    debug_assert!(xs.len() < n as usize);
    if xs.len() > 24 {
        return Err(Error::budget("exhaustive subset fallback limited to 24 values"));
    }
    for mask in 1u32..1 << xs.len() {
        let sum: i128 = (0..xs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| xs[i].rem_euclid(m)).sum();
        if sum % m == 0 {
            return Ok(Some((0..xs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect()));
        }
    }
    Ok(None)
}
