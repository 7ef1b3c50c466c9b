//! Finite-scale witnesses for the Central Sets Theorem conclusion and the
//! derivation of (m,p,c)-systems from them.
//!
//! A witness of depth `k` for IP-systems `s¹,…,sᵖ` is a choice of
//! `a_1,…,a_k ≥ 1` and `α_1 < … < α_k` such that every subset sum of
//! `a_j + sⁱ_{α_j}` lies in `S`, for every `i`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::deuber::{generate_mpc, verify_mpc, MpcParams, MpcSystem};
use crate::error::{Error, Result};
use crate::ipcore::{alpha_less, find_divisible_subsequence, ip_term, FiniteIndexSet, IpSpec, Rule};
use crate::window::{Bitset, SetWindow};

/// Default node budget for [`cst_search`].
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Largest depth accepted by [`verify_cst_witness`].
pub const VERIFY_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CstWitness {
    pub depth: usize,
    pub a_values: Vec<u64>,
    pub alphas: Vec<FiniteIndexSet>,
    pub system_count: usize,
}

impl CstWitness {
    /// The first `k` levels.
    pub fn truncate(&self, k: usize) -> CstWitness {
        CstWitness {
            depth: k,
            a_values: self.a_values[..k].to_vec(),
            alphas: self.alphas[..k].to_vec(),
            system_count: self.system_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CstOutcome {
    Found(CstWitness),
    /// The whole window was searched and no witness exists inside it.
    ProvenAbsent,
}

impl CstOutcome {
    pub fn witness(&self) -> Option<&CstWitness> {
        match self {
            CstOutcome::Found(w) => Some(w),
            CstOutcome::ProvenAbsent => None,
        }
    }
}

fn common_horizon(specs: &[IpSpec]) -> Result<u32> {
    let first = specs.first().ok_or_else(|| Error::input("need at least one IP-system"))?;
    if specs.iter().any(|s| s.horizon() != first.horizon()) {
        return Err(Error::input("all IP-systems must share a horizon"));
    }
    if specs.iter().any(|s| s.width() != 1) {
        return Err(Error::input("IP-systems must be scalar valued"));
    }
    Ok(first.horizon())
}

/// Index sets starting at a fixed position, one per distinct term vector,
/// each represented by its least bitmask (which also has the least maximum).
struct Class {
    mask: u64,
    terms: Vec<i128>,
}

struct Search<'a> {
    s: &'a SetWindow,
    /// `terms[k][i]` is `sⁱ_{k+1}`.
    terms: Vec<Vec<i128>>,
    horizon: u32,
    depth: usize,
    budget: u64,
    nodes: u64,
    classes: HashMap<u32, std::rc::Rc<Vec<Class>>>,
}

impl Search<'_> {
    fn spend(&mut self, n: u64) -> Result<()> {
        self.nodes += n;
        if self.nodes > self.budget {
            return Err(Error::budget(format!("search exceeded {} nodes", self.budget)));
        }
        Ok(())
    }

    /// Distinct vectors `(s¹_α,…,sᵖ_α)` over `α ⊆ {start..H}`. Vectors that
    /// cannot appear in any witness, and cannot recover by adding indices,
    /// are dropped: `x_i − x_j ≤ N − 1` for any two coordinates and
    /// `x_i ≤ N` with `a ≥ 1`.
    fn classes_from(&mut self, start: u32) -> Result<std::rc::Rc<Vec<Class>>> {
        if let Some(c) = self.classes.get(&start) {
            return Ok(c.clone());
        }
        let p = self.terms.first().map_or(0, Vec::len);
        let tail = &self.terms[(start - 1) as usize..];
        let limit = self.s.horizon() as i128 - 1;
        let nonneg: Vec<usize> = (0..p).filter(|&i| tail.iter().all(|t| t[i] >= 0)).collect();
        let pairs: Vec<(usize, usize)> = (0..p)
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && tail.iter().all(|t| t[i] >= t[j]))
            .collect();
        let hopeless = |v: &[i128]| nonneg.iter().any(|&i| v[i] > limit) || pairs.iter().any(|&(i, j)| v[i] - v[j] > limit);
        let mut seen: HashSet<Vec<i128>> = HashSet::new();
        let mut out: Vec<Class> = Vec::new();
        for k in start..=self.horizon {
            let term = &self.terms[(k - 1) as usize];
            let bit = 1u64 << (k - 1);
            let existing = out.len();
            let mut fresh = Vec::new();
            let singleton = Class { mask: bit, terms: term.clone() };
            fresh.push(singleton);
            for c in &out[..existing] {
                let terms = c
                    .terms
                    .iter()
                    .zip(term)
                    .map(|(x, y)| x.checked_add(*y))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::input("IP-system sums overflow"))?;
                fresh.push(Class { mask: c.mask | bit, terms });
            }
            self.spend(fresh.len() as u64)?;
            fresh.sort_by_key(|c| c.mask);
            for c in fresh {
                if hopeless(&c.terms) || !seen.insert(c.terms.clone()) {
                    continue;
                }
                out.push(c);
            }
        }
        out.sort_by_key(|c| c.mask);
        let out = std::rc::Rc::new(out);
        self.classes.insert(start, out.clone());
        Ok(out)
    }

    /// `v[i]` holds the `y` with `y + t ∈ S` for every subset sum `t`
    /// (including 0) of the coordinates chosen so far for system `i`.
    fn descend(&mut self, level: usize, start: u32, v: &[Bitset], chosen: &mut Vec<(u64, FiniteIndexSet)>) -> Result<bool> {
        if level == self.depth {
            return Ok(true);
        }
        if start > self.horizon {
            return Ok(false);
        }
        let classes = self.classes_from(start)?;
        let mut candidates: Vec<(u64, usize)> = Vec::new();
        for (ci, class) in classes.iter().enumerate() {
            let lead = class.terms[0];
            let mut checked = 0u64;
            for x in v[0].iter() {
                checked += 1;
                let a = x as i128 - lead;
                if a < 1 {
                    continue;
                }
                if class.terms.iter().zip(v).skip(1).all(|(t, vi)| {
                    let y = a + t;
                    y >= 0 && (y as usize) < vi.len() && vi.contains(y as usize)
                }) {
                    candidates.push((a as u64, ci));
                }
            }
            self.spend(checked)?;
        }
        candidates.sort_unstable();
        for (a, ci) in candidates {
            self.spend(1)?;
            let class = &classes[ci];
            let next: Vec<Bitset> = class
                .terms
                .iter()
                .zip(v)
                .map(|(t, vi)| {
                    let mut n = vi.shifted_down((a as i128 + t) as usize);
                    n.and_assign(vi);
                    n
                })
                .collect();
            if level + 1 < self.depth && next.iter().any(Bitset::is_empty) {
                continue;
            }
            let alpha = FiniteIndexSet::from_mask(class.mask)?;
            chosen.push((a, alpha));
            if self.descend(level + 1, alpha.max() + 1, &next, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Backtracking search for a depth-`depth` witness in `s`, trying `a`
/// smallest first and, for equal `a`, index sets in increasing bitmask
/// order. Index sets with equal term vectors are interchangeable except for
/// their maxima, so only the least one is tried.
pub fn cst_search(s: &SetWindow, specs: &[IpSpec], depth: usize, budget: u64) -> Result<CstOutcome> {
    if depth == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    let horizon = common_horizon(specs)?;
    let per_spec: Vec<Vec<Vec<i128>>> = specs.iter().map(IpSpec::terms).collect();
    let terms = (0..horizon as usize).map(|k| per_spec.iter().map(|t| t[k][0]).collect()).collect();
    let mut search = Search { s, terms, horizon, depth, budget, nodes: 0, classes: HashMap::new() };
    let root = vec![s.bits().clone(); specs.len()];
    let mut chosen = Vec::new();
    if search.descend(0, 1, &root, &mut chosen)? {
        Ok(CstOutcome::Found(CstWitness {
            depth,
            a_values: chosen.iter().map(|c| c.0).collect(),
            alphas: chosen.iter().map(|c| c.1).collect(),
            system_count: specs.len(),
        }))
    } else {
        Ok(CstOutcome::ProvenAbsent)
    }
}

/// Checks ordering, then every subset sum of every system against `s`.
pub fn verify_cst_witness(s: &SetWindow, specs: &[IpSpec], w: &CstWitness) -> Result<bool> {
    common_horizon(specs)?;
    if w.a_values.len() != w.depth || w.alphas.len() != w.depth || w.system_count != specs.len() {
        return Err(Error::input("witness depth, values, index sets and system count disagree"));
    }
    if w.alphas.windows(2).any(|p| !alpha_less(p[0], p[1])) || w.a_values.contains(&0) {
        return Ok(false);
    }
    if w.depth > VERIFY_CAP {
        return Err(Error::budget(format!("depth {} exceeds the verification cap {VERIFY_CAP}", w.depth)));
    }
    for spec in specs {
        let xs = w
            .a_values
            .iter()
            .zip(&w.alphas)
            .map(|(&a, &alpha)| Ok(a as i128 + ip_term(spec, alpha)?[0]))
            .collect::<Result<Vec<i128>>>()?;
        let mut sums = vec![0i128; 1 << xs.len()];
        for mask in 1usize..sums.len() {
            sums[mask] = sums[mask & (mask - 1)] + xs[mask.trailing_zeros() as usize];
            if !s.contains(sums[mask]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Generators of an (m,p,c)-system family: for every nonempty `γ` over the
/// tuple indices, the coordinate-wise sum of the tuples in `γ` generates an
/// (m,p,c)-system inside `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpcFamily {
    pub tuples: Vec<Vec<u64>>,
    /// The system generated by the first tuple.
    pub system: MpcSystem,
}

/// IP-system whose `n`-th term is `Σ_j i_j·uʲ_n`.
fn combination_spec(family: &[Vec<i128>], coeffs: &[i128]) -> Result<IpSpec> {
    IpSpec::list(
        family
            .iter()
            .map(|tuple| vec![tuple.iter().zip(coeffs).map(|(u, i)| u * i).sum()])
            .collect(),
    )
}

/// All of `[−p,p]^len` in lexicographic order.
fn coefficient_vectors(len: usize, p: i128) -> Vec<Vec<i128>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                (-p..=p).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect()
    })
}

/// Builds an (m,p,c)-system in `s` level by level.
///
/// Level 0 takes an FS-family `a_n` in `s` (a witness for the all-zero
/// IP-system). Level `r+1` searches a witness for the `(2p+1)^{r+1}`
/// IP-systems `Σ_{j≤r} i_j·uʲ` over the current family `u`; the witness
/// values become the new top coordinate and each `α_n` merges the lower
/// coordinates. Every level groups its witness into blocks whose top
/// coordinate is divisible by `c` and divides that coordinate by `c`, so a
/// final family of `family_size` tuples needs depth `c^{m+1−r}·family_size`
/// at level `r`.
pub fn mpc_from_cst(
    s: &SetWindow,
    params: MpcParams,
    family_size: u32,
    budget: u64,
) -> Result<Option<MpcFamily>> {
    let params = MpcParams::new(params.m, params.p, params.c)?;
    if family_size == 0 {
        return Err(Error::input("family size must be at least 1"));
    }
    let c = params.c;
    let depth_at = |level: usize| -> Result<u32> {
        let scale = c
            .checked_pow((params.m + 1 - level) as u32)
            .and_then(|x| x.checked_mul(family_size as u64))
            .filter(|&d| d <= crate::ipcore::INDEX_CAP as u64)
            .ok_or_else(|| {
                Error::input(format!("level {level} needs depth c^(m+1-level)·F beyond the index cap"))
            })?;
        Ok(scale as u32)
    };
    let mut family: Vec<Vec<i128>> = Vec::new();
    for level in 0..=params.m {
        let depth = depth_at(level)?;
        let specs = if level == 0 {
            vec![IpSpec::rule(Rule::Const(0), depth)?]
        } else {
            coefficient_vectors(level, params.p as i128)
                .iter()
                .map(|coeffs| combination_spec(&family, coeffs))
                .collect::<Result<Vec<_>>>()?
        };
        let witness = match cst_search(s, &specs, depth as usize, budget)? {
            CstOutcome::Found(w) => w,
            CstOutcome::ProvenAbsent => return Ok(None),
        };
        let a_spec = IpSpec::scalars(&witness.a_values.iter().map(|&a| a as i128).collect::<Vec<_>>())?;
        let blocks = find_divisible_subsequence(&a_spec, c, depth / c as u32)?;
        family = blocks
            .iter()
            .map(|beta| {
                let top = ip_term(&a_spec, *beta)?[0] / c as i128;
                let merged = beta.iter().map(|n| witness.alphas[(n - 1) as usize]).fold(0u64, |m, a| m | a.mask());
                let merged = FiniteIndexSet::from_mask(merged)?;
                let mut tuple: Vec<i128> =
                    (0..level).map(|j| merged.iter().map(|n| family[(n - 1) as usize][j]).sum()).collect();
                tuple.push(top);
                Ok(tuple)
            })
            .collect::<Result<Vec<_>>>()?;
    }
    let tuples: Vec<Vec<u64>> = family
        .iter()
        .map(|t| t.iter().map(|&x| u64::try_from(x).map_err(|_| Error::input("family entry out of range"))).collect())
        .collect::<Result<_>>()?;
    let system = generate_mpc(params, &tuples[0])?;
    if !verify_mpc(s, params, &tuples[0])? {
        return Err(Error::input("derived system is not contained in the set"));
    }
    Ok(Some(MpcFamily { tuples, system }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipcore::fs_enumerate;
    use proptest::prelude::*;

    fn fis(v: &[u32]) -> FiniteIndexSet {
        FiniteIndexSet::new(v.iter().copied()).unwrap()
    }

    fn spec(text: &str) -> IpSpec {
        IpSpec::parse(text, 64).unwrap()
    }

    #[test]
    fn search_examples() {
        let full = SetWindow::full(50).unwrap();
        let w = cst_search(&full, &[spec("const:1")], 2, DEFAULT_BUDGET).unwrap();
        let w = w.witness().unwrap();
        assert_eq!((w.a_values.clone(), w.alphas.clone()), (vec![1, 1], vec![fis(&[1]), fis(&[2])]));
        let evens = SetWindow::evens(100).unwrap();
        let w = cst_search(&evens, &[spec("const:2")], 2, DEFAULT_BUDGET).unwrap();
        let w = w.witness().unwrap();
        assert_eq!((w.a_values.clone(), w.alphas.clone()), (vec![2, 2], vec![fis(&[1]), fis(&[2])]));
        let odds = SetWindow::odds(99).unwrap();
        for s in ["const:1", "const:2", "arith:1,1"] {
            assert_eq!(cst_search(&odds, &[spec(s)], 2, DEFAULT_BUDGET).unwrap(), CstOutcome::ProvenAbsent);
        }
    }

    #[test]
    fn budget_is_distinct_from_absence() {
        let odds = SetWindow::odds(999).unwrap();
        assert!(cst_search(&odds, &[spec("const:1")], 2, 100).unwrap_err().is_budget());
    }

    #[test]
    fn verify_examples() {
        let w = CstWitness { depth: 2, a_values: vec![1, 1], alphas: vec![fis(&[1]), fis(&[2])], system_count: 1 };
        assert!(verify_cst_witness(&SetWindow::full(50).unwrap(), &[spec("const:1")], &w).unwrap());
        assert!(!verify_cst_witness(&SetWindow::full(3).unwrap(), &[spec("const:1")], &w).unwrap());
        let same = CstWitness { alphas: vec![fis(&[1]), fis(&[1])], ..w.clone() };
        assert!(!verify_cst_witness(&SetWindow::full(50).unwrap(), &[spec("const:1")], &same).unwrap());
        let deep = CstWitness { depth: 21, a_values: vec![1; 21], alphas: (1..=21).map(|k| fis(&[k])).collect(), system_count: 1 };
        assert!(verify_cst_witness(&SetWindow::full(50).unwrap(), &[spec("const:1")], &deep).unwrap_err().is_budget());
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"depth":2,"a_values":[1,1],"alphas":[[1],[2]],"system_count":1}"#);
    }

    #[test]
    fn mismatched_horizons_rejected() {
        let specs = [IpSpec::parse("const:1", 10).unwrap(), IpSpec::parse("const:1", 11).unwrap()];
        assert!(cst_search(&SetWindow::full(10).unwrap(), &specs, 1, 1000).is_err());
    }

    #[test]
    fn negative_terms() {
        let s = SetWindow::new(30, [10, 20]).unwrap();
        let specs = [spec("const:-5"), spec("const:5")];
        let w = cst_search(&s, &specs, 1, DEFAULT_BUDGET).unwrap();
        let w = w.witness().unwrap();
        assert_eq!((w.a_values.clone(), w.alphas.clone()), (vec![15], vec![fis(&[1])]));
        assert!(verify_cst_witness(&s, &specs, w).unwrap());
    }

    #[test]
    fn mpc_examples() {
        let full = SetWindow::full(200).unwrap();
        let out = mpc_from_cst(&full, MpcParams::new(1, 1, 1).unwrap(), 1, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(out.tuples, vec![vec![1, 2]]);
        assert_eq!(out.system.values, vec![1, 2, 3]);
        let evens = SetWindow::evens(200).unwrap();
        let out = mpc_from_cst(&evens, MpcParams::new(0, 1, 2).unwrap(), 1, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((out.tuples.clone(), out.system.values), (vec![vec![1]], vec![2]));
        let odds = SetWindow::odds(199).unwrap();
        assert_eq!(mpc_from_cst(&odds, MpcParams::new(1, 1, 1).unwrap(), 1, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn mpc_families_with_larger_parameters() {
        let full = SetWindow::full(3000).unwrap();
        for (m, p, c, f) in [(1, 2, 2, 2), (2, 1, 2, 1), (2, 2, 1, 3), (1, 1, 3, 2)] {
            let params = MpcParams::new(m, p, c).unwrap();
            let out = mpc_from_cst(&full, params, f, DEFAULT_BUDGET).unwrap().unwrap();
            assert_eq!(out.tuples.len(), f as usize);
            for mask in 1u32..1 << f {
                let gens: Vec<u64> = (0..=m)
                    .map(|j| (0..f as usize).filter(|&n| mask >> n & 1 == 1).map(|n| out.tuples[n][j]).sum())
                    .collect();
                assert!(verify_mpc(&full, params, &gens).unwrap(), "{m},{p},{c}: {gens:?}");
            }
        }
    }

    #[test]
    fn fs_windows_admit_witnesses() {
        for k in 2..=8u32 {
            let spec = IpSpec::parse("geom:1,2", k).unwrap();
            let s = fs_enumerate(&spec, k).unwrap();
            for depth in 1..k as usize {
                let w = cst_search(&s, std::slice::from_ref(&spec), depth, DEFAULT_BUDGET).unwrap();
                let w = w.witness().unwrap_or_else(|| panic!("k={k} depth={depth}"));
                assert!(verify_cst_witness(&s, std::slice::from_ref(&spec), w).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn witnesses_verify_and_truncate(
            bits in proptest::collection::vec(proptest::bool::weighted(0.7), 80),
            terms in proptest::collection::vec(proptest::collection::vec(-3i128..6, 6), 1..3),
            depth in 1usize..4,
        ) {
            let s = SetWindow::from_predicate(80, |n| bits[n as usize - 1]).unwrap();
            let specs: Vec<IpSpec> = terms.iter().map(|t| IpSpec::scalars(t).unwrap()).collect();
            if let CstOutcome::Found(w) = cst_search(&s, &specs, depth, DEFAULT_BUDGET).unwrap() {
                prop_assert!(verify_cst_witness(&s, &specs, &w).unwrap());
                for k in 1..depth {
                    prop_assert!(verify_cst_witness(&s, &specs, &w.truncate(k)).unwrap());
                }
            }
        }

        #[test]
        fn absence_matches_brute_force(
            bits in proptest::collection::vec(proptest::bool::weighted(0.6), 24),
            terms in proptest::collection::vec(-2i128..4, 4),
        ) {
            let s = SetWindow::from_predicate(24, |n| bits[n as usize - 1]).unwrap();
            let spec = IpSpec::scalars(&terms).unwrap();
            let found = cst_search(&s, std::slice::from_ref(&spec), 2, DEFAULT_BUDGET).unwrap();
            // brute force over a_1, a_2 ≤ 40 and ordered index set pairs
            let mut any = false;
            for m1 in 1u64..16 {
                for m2 in 1u64..16 {
                    let (a1, a2) = (FiniteIndexSet::from_mask(m1).unwrap(), FiniteIndexSet::from_mask(m2).unwrap());
                    if !alpha_less(a1, a2) { continue; }
                    for x in 1..=40u64 {
                        for y in 1..=40u64 {
                            let w = CstWitness { depth: 2, a_values: vec![x, y], alphas: vec![a1, a2], system_count: 1 };
                            if verify_cst_witness(&s, std::slice::from_ref(&spec), &w).unwrap() { any = true; }
                        }
                    }
                }
            }
            prop_assert_eq!(found.witness().is_some(), any);
        }
    }
}
