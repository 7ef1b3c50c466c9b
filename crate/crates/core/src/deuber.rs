//! Deuber (m,p,c)-systems: generation, verification and search.
//!
//! The system generated by `(s⁰,…,sᵐ)` is the set of all entries
//! `c·sᵏ + Σ_{j<k} i_j·sʲ` with `0 ≤ k ≤ m` and `|i_j| ≤ p`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::SetWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpcParams {
    pub m: usize,
    pub p: u64,
    pub c: u64,
}

impl MpcParams {
    pub fn new(m: usize, p: u64, c: u64) -> Result<Self> {
        let params = MpcParams { m, p, c };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 || self.c == 0 {
            return Err(Error::input("(m,p,c) needs p >= 1 and c >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpcSystem {
    pub params: MpcParams,
    pub generators: Vec<u64>,
    /// Sorted distinct entries of the array.
    pub values: Vec<u64>,
}

/// Number of rows `Σ_{k=0..m} (2p+1)^k`; distinct values may be fewer.
pub fn mpc_size(m: usize, p: u64) -> BigUint {
    let base = BigUint::from(2 * p + 1);
    let mut total = BigUint::default();
    let mut power = BigUint::one();
    for _ in 0..=m {
        total += &power;
        power *= &base;
    }
    total
}

/// Closed form `((2p+1)^{m+1} − 1) / (2p)` of [`mpc_size`].
pub fn mpc_size_closed_form(m: usize, p: u64) -> BigUint {
    let base = BigUint::from(2 * p + 1);
    (Pow::pow(base, m as u32 + 1) - BigUint::one()) / BigUint::from(2 * p)
}

/// Expansion refuses arrays with more rows than this.
pub const ROW_CAP: u64 = 10_000_000;

fn check_rows(params: &MpcParams) -> Result<()> {
    if mpc_size(params.m, params.p) > BigUint::from(ROW_CAP) {
        return Err(Error::budget(format!(
            "(m,p)=({},{}) expands to more than {ROW_CAP} rows",
            params.m, params.p
        )));
    }
    Ok(())
}

/// Distinct offsets `Σ_{j<k} i_j·sʲ` for the next level.
fn extend_offsets(offsets: &BTreeSet<i128>, s: u64, p: u64) -> BTreeSet<i128> {
    let (s, p) = (s as i128, p as i128);
    offsets.iter().flat_map(|&o| (-p..=p).map(move |i| o + i * s)).collect()
}

/// Coefficients `(i_0, …, i_{k−1})` in lexicographic order with the least
/// entry below 1 at level `k`.
fn first_bad_row(params: &MpcParams, gens: &[u64], k: usize) -> Option<(Vec<i64>, i128)> {
    let p = params.p as i64;
    let mut coeffs = vec![-p; k];
    loop {
        let value = params.c as i128 * gens[k] as i128
            + coeffs.iter().zip(gens).map(|(&i, &s)| i as i128 * s as i128).sum::<i128>();
        if value < 1 {
            return Some((coeffs, value));
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if coeffs[pos] < p {
                coeffs[pos] += 1;
                coeffs[pos + 1..].iter_mut().for_each(|x| *x = -p);
                break;
            }
        }
    }
}

/// Expands the (m,p,c)-system of `generators`.
pub fn generate_mpc(params: MpcParams, generators: &[u64]) -> Result<MpcSystem> {
    params.validate()?;
    if generators.len() != params.m + 1 {
        return Err(Error::input(format!(
            "(m,p,c) with m={} needs {} generators, got {}",
            params.m,
            params.m + 1,
            generators.len()
        )));
    }
    if generators.contains(&0) {
        return Err(Error::input("generators must be positive"));
    }
    check_rows(&params)?;
    let mut values = BTreeSet::new();
    let mut offsets = BTreeSet::from([0i128]);
    for (k, &s) in generators.iter().enumerate() {
        let base = params.c as i128 * s as i128;
        let low = base + offsets.first().expect("nonempty");
        if low < 1 {
            let (coefficients, value) = first_bad_row(&params, generators, k).expect("some row is below 1");
            return Err(Error::NotExpandable { level: k, coefficients, value });
        }
        let high = base + offsets.last().expect("nonempty");
        if high > u64::MAX as i128 {
            return Err(Error::input("system entries overflow"));
        }
        values.extend(offsets.iter().map(|&o| (base + o) as u64));
        if k < params.m {
            offsets = extend_offsets(&offsets, s, params.p);
        }
    }
    Ok(MpcSystem { params, generators: generators.to_vec(), values: values.into_iter().collect() })
}

/// True iff every entry of the system lies in `s`.
pub fn verify_mpc(s: &SetWindow, params: MpcParams, generators: &[u64]) -> Result<bool> {
    let system = generate_mpc(params, generators)?;
    Ok(system.values.iter().all(|&v| s.contains(v as i128)))
}

struct Search<'a> {
    s: &'a SetWindow,
    params: MpcParams,
    bound: u64,
}

impl Search<'_> {
    /// Values of `sᵏ` at which the level-`k` row lies in the window, in
    /// increasing order.
    fn level_candidates<'b>(&'b self, offsets: &'b BTreeSet<i128>) -> impl Iterator<Item = u64> + 'b {
        let c = self.params.c as i128;
        let lo = *offsets.first().expect("nonempty");
        let hi = *offsets.last().expect("nonempty");
        // c·s + lo ≥ 1 and c·s + hi ≤ N
        let start = (1 - lo).div_euclid(c) + i128::from((1 - lo).rem_euclid(c) != 0);
        let end = (self.s.horizon() as i128 - hi).div_euclid(c);
        let (start, end) = (start.max(1), end.min(self.bound as i128));
        (start..=end.max(start - 1)).map(|s| s as u64).filter(move |&s| {
            let base = c * s as i128;
            offsets.iter().all(|&o| self.s.contains(base + o))
        })
    }

    fn descend(&self, k: usize, offsets: &BTreeSet<i128>, gens: &mut Vec<u64>) -> bool {
        if k > self.params.m {
            return true;
        }
        let candidates: Vec<u64> = self.level_candidates(offsets).collect();
        for s in candidates {
            gens.push(s);
            let next = if k < self.params.m { extend_offsets(offsets, s, self.params.p) } else { BTreeSet::new() };
            if self.descend(k + 1, &next, gens) {
                return true;
            }
            gens.pop();
        }
        false
    }

    fn starting_with(&self, s0: u64) -> Option<Vec<u64>> {
        let mut gens = vec![s0];
        let next = if self.params.m > 0 { extend_offsets(&BTreeSet::from([0]), s0, self.params.p) } else { BTreeSet::new() };
        self.descend(1, &next, &mut gens).then_some(gens)
    }
}

/// Lexicographically least generating tuple with every generator at most
/// `bound` whose system lies in `s`.
///
/// Depth first over `s⁰, s¹, …` in increasing order; level `k` is pruned as
/// soon as one of its rows leaves `s`. The choices of `s⁰` are split across
/// `threads` workers and the first success in order is returned.
pub fn contains_mpc(s: &SetWindow, params: MpcParams, bound: u64, threads: usize) -> Result<Option<Vec<u64>>> {
    params.validate()?;
    if bound == 0 {
        return Err(Error::input("generator bound must be at least 1"));
    }
    check_rows(&params)?;
    let search = Search { s, params, bound };
    let root = BTreeSet::from([0i128]);
    let firsts: Vec<u64> = search.level_candidates(&root).collect();
    if threads <= 1 {
        return Ok(firsts.into_iter().find_map(|s0| search.starting_with(s0)));
    }
    let pool = crate::rado::thread_pool(threads)?;
    Ok(pool.install(|| firsts.par_iter().find_map_first(|&s0| search.starting_with(s0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipcore::{fs_enumerate, IpSpec};
    use proptest::prelude::*;

    fn params(m: usize, p: u64, c: u64) -> MpcParams {
        MpcParams::new(m, p, c).unwrap()
    }

    #[test]
    fn size_examples() {
        assert_eq!(mpc_size(0, 5), BigUint::from(1u32));
        assert_eq!(mpc_size(1, 1), BigUint::from(4u32));
        assert_eq!(mpc_size(2, 1), BigUint::from(13u32));
        for m in 0..6 {
            for p in 1..6 {
                assert_eq!(mpc_size(m, p), mpc_size_closed_form(m, p));
            }
        }
    }

    #[test]
    fn generate_examples() {
        assert_eq!(generate_mpc(params(1, 1, 2), &[1, 3]).unwrap().values, vec![2, 5, 6, 7]);
        assert_eq!(generate_mpc(params(1, 1, 1), &[1, 4]).unwrap().values, vec![1, 3, 4, 5]);
        assert_eq!(generate_mpc(params(1, 2, 1), &[1, 10]).unwrap().values, vec![1, 8, 9, 10, 11, 12]);
        assert!(generate_mpc(params(1, 1, 1), &[1]).is_err());
        assert!(generate_mpc(params(0, 1, 1), &[0]).is_err());
    }

    #[test]
    fn not_expandable_names_row() {
        let err = generate_mpc(params(2, 1, 1), &[3, 2, 9]).unwrap_err();
        assert_eq!(err, Error::NotExpandable { level: 1, coefficients: vec![-1], value: -1 });
        let err = generate_mpc(params(2, 1, 1), &[1, 5, 4]).unwrap_err();
        assert_eq!(err, Error::NotExpandable { level: 2, coefficients: vec![-1, -1], value: -2 });
    }

    #[test]
    fn verify_examples() {
        let s = SetWindow::new(7, [2, 5, 6, 7]).unwrap();
        assert!(verify_mpc(&s, params(1, 1, 2), &[1, 3]).unwrap());
        let s = SetWindow::new(7, [2, 5, 6]).unwrap();
        assert!(!verify_mpc(&s, params(1, 1, 2), &[1, 3]).unwrap());
        let s = SetWindow::full(100).unwrap();
        assert!(verify_mpc(&s, params(2, 1, 1), &[1, 4, 20]).unwrap());
    }

    #[test]
    fn contains_examples() {
        let s = SetWindow::new(7, [2, 5, 6, 7]).unwrap();
        assert_eq!(contains_mpc(&s, params(1, 1, 2), 10, 1).unwrap(), Some(vec![1, 3]));
        let s = SetWindow::full(25).unwrap();
        assert_eq!(contains_mpc(&s, params(1, 1, 1), 25, 1).unwrap(), Some(vec![1, 2]));
        let s = SetWindow::odds(99).unwrap();
        assert_eq!(contains_mpc(&s, params(1, 1, 1), 99, 1).unwrap(), None);
        assert_eq!(contains_mpc(&s, params(1, 1, 1), 99, 4).unwrap(), None);
    }

    #[test]
    fn threads_agree() {
        let s = SetWindow::from_predicate(400, |n| n % 3 != 0 || n % 7 == 0).unwrap();
        for (m, p, c) in [(1, 1, 1), (1, 2, 2), (2, 1, 1), (2, 1, 3)] {
            let one = contains_mpc(&s, params(m, p, c), 200, 1).unwrap();
            let many = contains_mpc(&s, params(m, p, c), 200, 6).unwrap();
            assert_eq!(one, many);
        }
    }

    #[test]
    fn sum_closure_on_fs_window() {
        let spec = IpSpec::parse("geom:1,2", 10).unwrap();
        let s = fs_enumerate(&spec, 10).unwrap();
        let p = params(1, 1, 1);
        let (u, v) = ([1u64, 4], [16u64, 64]);
        assert!(verify_mpc(&s, p, &u).unwrap());
        assert!(verify_mpc(&s, p, &v).unwrap());
        let w: Vec<u64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        assert!(verify_mpc(&s, p, &w).unwrap());
    }

    proptest! {
        #[test]
        fn round_trip(m in 0usize..=2, p in 1u64..=2, c in 1u64..=3, raw in proptest::collection::vec(1u64..=30, 3)) {
            let gens = &raw[..=m];
            let pr = params(m, p, c);
            prop_assume!(generate_mpc(pr, gens).is_ok());
            let system = generate_mpc(pr, gens).unwrap();
            let window = SetWindow::new(*system.values.last().unwrap(), system.values.clone()).unwrap();
            let bound = *gens.iter().max().unwrap();
            let found = contains_mpc(&window, pr, bound, 1).unwrap().expect("the generators themselves qualify");
            prop_assert!(found.as_slice() <= gens);
            prop_assert!(verify_mpc(&window, pr, &found).unwrap());
        }

        #[test]
        fn monotone(gens in proptest::collection::vec(1u64..=20, 2), extra in proptest::collection::vec(1u64..=200, 0..30)) {
            let pr = params(1, 1, 1);
            prop_assume!(generate_mpc(pr, &gens).is_ok());
            let values = generate_mpc(pr, &gens).unwrap().values;
            let small = SetWindow::new(200, values.clone()).unwrap();
            let big = SetWindow::new(200, values.into_iter().chain(extra)).unwrap();
            prop_assert!(verify_mpc(&small, pr, &gens).unwrap());
            prop_assert!(verify_mpc(&big, pr, &gens).unwrap());
        }

        #[test]
        fn schur_embedding(s0 in 1u64..1000, d in 1u64..1000) {
            let gens = [s0, s0 + d];
            let values = generate_mpc(params(1, 1, 1), &gens).unwrap().values;
            let (x, y, z) = (s0, gens[1], gens[1] + s0);
            prop_assert_eq!(x + y, z);
            for v in [x, y, z] {
                prop_assert!(values.binary_search(&v).is_ok());
            }
        }
    }
}
