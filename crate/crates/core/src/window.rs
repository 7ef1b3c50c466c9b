//! Finite windows `S ∩ [1..N]`, the common substrate of every search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-length bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Bit `i` of the result is bit `i + shift` of `self` (zero past the end).
    pub fn shifted_down(&self, shift: usize) -> Bitset {
        let mut out = Bitset::new(self.len);
        let (ws, bs) = (shift / 64, shift % 64);
        for i in 0..out.words.len() {
            let lo = self.words.get(i + ws).copied().unwrap_or(0);
            let hi = self.words.get(i + ws + 1).copied().unwrap_or(0);
            out.words[i] = if bs == 0 { lo } else { (lo >> bs) | (hi << (64 - bs)) };
        }
        out.clear_tail();
        out
    }

    /// Bit `i + shift` of the result is bit `i` of `self` (truncated at `len`).
    pub fn shifted_up(&self, shift: usize) -> Bitset {
        let mut out = Bitset::new(self.len);
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (0..out.words.len()).rev() {
            if i < ws {
                break;
            }
            let lo = self.words[i - ws];
            let below = if i > ws { self.words[i - ws - 1] } else { 0 };
            out.words[i] = if bs == 0 { lo } else { (lo << bs) | (below >> (64 - bs)) };
        }
        out.clear_tail();
        out
    }

    pub fn and_assign(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// True if every bit of `self` is also set in `other`.
    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn clear_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

/// A finite set `S ∩ [1..N]` together with its horizon `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWindow", into = "RawWindow")]
pub struct SetWindow {
    horizon: u64,
    members: Vec<u64>,
    bits: Bitset,
}

#[derive(Serialize, Deserialize)]
struct RawWindow {
    horizon: u64,
    members: Vec<u64>,
}

impl TryFrom<RawWindow> for SetWindow {
    type Error = Error;

    fn try_from(raw: RawWindow) -> Result<Self> {
        SetWindow::new(raw.horizon, raw.members)
    }
}

impl From<SetWindow> for RawWindow {
    fn from(w: SetWindow) -> Self {
        RawWindow { horizon: w.horizon, members: w.members }
    }
}

/// Windows beyond this horizon are refused; every search keeps a bitset of
/// size `N + 1`.
pub const MAX_HORIZON: u64 = 1 << 26;

impl SetWindow {
    pub fn new(horizon: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if horizon > MAX_HORIZON {
            return Err(Error::input(format!("horizon {horizon} exceeds the cap {MAX_HORIZON}")));
        }
        let mut members: Vec<u64> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&n| n == 0 || n > horizon) {
            return Err(Error::input(format!("member {bad} outside [1..{horizon}]")));
        }
        members.sort_unstable();
        members.dedup();
        let mut bits = Bitset::new(horizon as usize + 1);
        for &n in &members {
            bits.insert(n as usize);
        }
        Ok(SetWindow { horizon, members, bits })
    }

    pub fn from_predicate(horizon: u64, mut keep: impl FnMut(u64) -> bool) -> Result<Self> {
        Self::new(horizon, (1..=horizon).filter(|&n| keep(n)).collect::<Vec<_>>())
    }

    pub fn full(horizon: u64) -> Result<Self> {
        Self::from_predicate(horizon, |_| true)
    }

    pub fn odds(horizon: u64) -> Result<Self> {
        Self::from_predicate(horizon, |n| n % 2 == 1)
    }

    pub fn evens(horizon: u64) -> Result<Self> {
        Self::from_predicate(horizon, |n| n % 2 == 0)
    }

    /// `{ n ≤ N : n ≡ r (mod m) }`.
    pub fn residue(r: u64, m: u64, horizon: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("modulus must be positive"));
        }
        Self::from_predicate(horizon, |n| n % m == r % m)
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership for any integer; values outside `[1..N]` are never members.
    pub fn contains(&self, n: i128) -> bool {
        n >= 1 && n <= self.horizon as i128 && self.bits.contains(n as usize)
    }

    /// Bit `n` set iff `n ∈ S`, over `0..=N`.
    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    pub fn is_subset(&self, other: &SetWindow) -> bool {
        self.members.iter().all(|&n| other.contains(n as i128))
    }

    /// Parses the window file format: first line `N`, then one member per line
    /// (members may also share lines, separated by whitespace).
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(str::split_whitespace);
        let horizon = tokens
            .next()
            .ok_or_else(|| Error::input("empty set window text"))?
            .parse::<u64>()
            .map_err(|_| Error::input("set window header must be the horizon N"))?;
        let members = tokens
            .map(|t| t.parse::<u64>().map_err(|_| Error::input(format!("bad set member {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(horizon, members)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.horizon);
        for n in &self.members {
            out.push_str(&n.to_string());
            out.push('\n');
        }
        out
    }
}
