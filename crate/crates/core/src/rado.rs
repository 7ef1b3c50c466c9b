//! Partition regularity of homogeneous integer systems `A·x = 0`.
//!
//! [`columns_condition`] decides regularity symbolically and returns a
//! checkable [`ColumnsCertificate`]. [`empirical_pr`] is the independent
//! brute-force oracle: it colours `[1..N]` exhaustively and either proves that
//! every colouring contains a monochromatic solution or returns the
//! lexicographically least colouring that avoids one.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::{self, in_column_span, Rational, RationalMatrix};
use crate::window::SetWindow;

/// Blocks `I_1, …, I_l` (0-based column indices) and, for every block after
/// the first, the coefficients expressing its column sum in terms of the
/// columns of all earlier blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnsCertificate {
    pub blocks: Vec<Vec<usize>>,
    /// `coefficients[r - 1]` belongs to `blocks[r]`, keyed by column.
    pub coefficients: Vec<BTreeMap<usize, Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnsVerdict {
    Regular(ColumnsCertificate),
    NotRegular,
    /// The zero matrix: every vector is a solution.
    Degenerate,
}

impl ColumnsVerdict {
    pub fn certificate(&self) -> Option<&ColumnsCertificate> {
        match self {
            ColumnsVerdict::Regular(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_regular(&self) -> bool {
        !matches!(self, ColumnsVerdict::NotRegular)
    }
}

fn require_integral(a: &RationalMatrix) -> Result<()> {
    if a.is_integral() {
        Ok(())
    } else {
        Err(Error::input("the columns condition needs an integer matrix"))
    }
}

/// Smallest nonempty subset of `pool` (by size, then lexicographically)
/// satisfying `accept`.
fn first_subset(
    pool: &[usize],
    mut accept: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    for size in 1..=pool.len() {
        for subset in pool.iter().copied().combinations(size) {
            if accept(&subset)? {
                return Ok(Some(subset));
            }
        }
    }
    Ok(None)
}

/// Decides Rado's columns condition.
///
/// Candidate first blocks are tried by size, then lexicographically, and must
/// have zero column sum. Each later block is the smallest subset of the
/// remaining columns whose sum lies in the span of the columns used so far.
/// Absorbing a block only enlarges that span, so whenever any completion
/// exists the first absorbable block also leads to one; a dead end therefore
/// rejects the current first block without further backtracking.
pub fn columns_condition(a: &RationalMatrix) -> Result<ColumnsVerdict> {
    require_integral(a)?;
    if a.is_zero() {
        return Ok(ColumnsVerdict::Degenerate);
    }
    let all: Vec<usize> = (0..a.cols()).collect();
    for size in 1..=a.cols() {
        for first in all.iter().copied().combinations(size) {
            if !exactq::is_zero_vector(&a.column_sum(&first)) {
                continue;
            }
            if let Some(cert) = complete_from(a, first)? {
                return Ok(ColumnsVerdict::Regular(cert));
            }
        }
    }
    Ok(ColumnsVerdict::NotRegular)
}

fn complete_from(a: &RationalMatrix, first: Vec<usize>) -> Result<Option<ColumnsCertificate>> {
    let mut used = first.clone();
    let mut remaining: Vec<usize> = (0..a.cols()).filter(|j| !first.contains(j)).collect();
    let mut blocks = vec![first];
    let mut coefficients = Vec::new();
    while !remaining.is_empty() {
        used.sort_unstable();
        let mut found_coeffs = None;
        let block = first_subset(&remaining, |subset| {
            let target = a.column_sum(subset);
            found_coeffs = in_column_span(a, &used, &target)?;
            Ok(found_coeffs.is_some())
        })?;
        let Some(block) = block else {
            return Ok(None);
        };
        let coeffs = found_coeffs.expect("accepted block has coefficients");
        coefficients.push(used.iter().copied().zip(coeffs).collect());
        remaining.retain(|j| !block.contains(j));
        used.extend(&block);
        blocks.push(block);
    }
    Ok(Some(ColumnsCertificate { blocks, coefficients }))
}

/// Checks every relation of a certificate exactly. Structural problems
/// (indices out of range, overlapping or missing columns, empty blocks,
/// coefficient keys outside the earlier blocks) are input errors; a
/// well-formed certificate whose relations fail yields `false`.
pub fn verify_certificate(a: &RationalMatrix, cert: &ColumnsCertificate) -> Result<bool> {
    let q = a.cols();
    let mut seen = vec![false; q];
    for block in &cert.blocks {
        if block.is_empty() {
            return Err(Error::input("certificate contains an empty block"));
        }
        for &j in block {
            if j >= q {
                return Err(Error::input(format!("column {} out of range for {q} columns", j + 1)));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::input(format!("column {} appears in two blocks", j + 1)));
            }
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::input(format!("column {} is not covered by the partition", missing + 1)));
    }
    if cert.coefficients.len() + 1 != cert.blocks.len() {
        return Err(Error::input(format!(
            "{} blocks need {} coefficient maps, got {}",
            cert.blocks.len(),
            cert.blocks.len() - 1,
            cert.coefficients.len()
        )));
    }

    if !exactq::is_zero_vector(&a.column_sum(&cert.blocks[0])) {
        return Ok(false);
    }
    let mut earlier: Vec<usize> = cert.blocks[0].clone();
    for (block, coeffs) in cert.blocks[1..].iter().zip(&cert.coefficients) {
        if let Some(&bad) = coeffs.keys().find(|j| !earlier.contains(j)) {
            return Err(Error::input(format!(
                "coefficient for column {} which is not in an earlier block",
                bad + 1
            )));
        }
        let lhs = a.column_sum(block);
        let rhs: Vec<Rational> = (0..a.rows())
            .map(|r| coeffs.iter().map(|(&j, c)| c * a.get(r, j)).sum())
            .collect();
        if lhs != rhs {
            return Ok(false);
        }
        earlier.extend(block);
    }
    Ok(true)
}

/// For a single equation `Σ c_j x_j = 0`: the smallest (by size, then
/// lexicographic) nonempty index set whose coefficients sum to zero.
pub fn single_equation_pr(coeffs: &[i64]) -> Result<Option<Vec<usize>>> {
    if coeffs.is_empty() {
        return Err(Error::input("equation needs at least one coefficient"));
    }
    if let Some(pos) = coeffs.iter().position(|&c| c == 0) {
        return Err(Error::input(format!("coefficient {} is zero", pos + 1)));
    }
    let idx: Vec<usize> = (0..coeffs.len()).collect();
    first_subset(&idx, |s| Ok(s.iter().map(|&j| coeffs[j] as i128).sum::<i128>() == 0))
}

/// Restrictions on which solution vectors count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Reject constant vectors `x_1 = … = x_q`.
    pub nontrivial: bool,
    /// Require pairwise distinct values.
    pub distinct: bool,
}

/// True if the all-ones vector solves `A·x = 0`.
pub fn constant_solves(a: &RationalMatrix) -> bool {
    (0..a.rows()).all(|r| a.row(r).iter().sum::<Rational>().is_zero())
}

/// Nontriviality is switched on exactly when constant vectors are solutions.
pub fn default_options(a: &RationalMatrix) -> SolveOptions {
    SolveOptions { nontrivial: constant_solves(a), distinct: false }
}

/// The solution set of `A·x = 0` parametrized by free variables.
///
/// Elimination runs over the columns from right to left, so every pivot
/// variable is an integer combination of free variables with smaller index:
/// `den_p · x_p = Σ_f coef_f · x_f`. Walking the coordinates left to right
/// then enumerates integer solutions in lexicographic order, and each pivot is
/// determined as soon as it is reached.
/// `(denominator, [(free column, coefficient)])` of one pivot column.
type PivotFormula = (i128, Vec<(usize, i128)>);

#[derive(Debug, Clone)]
struct Kernel {
    q: usize,
    pivot: Vec<Option<PivotFormula>>,
}

impl Kernel {
    fn new(a: &RationalMatrix) -> Result<Self> {
        let q = a.cols();
        let rows: Vec<Vec<Rational>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
        let order: Vec<usize> = (0..q).rev().collect();
        let ech = exactq::reduce(rows, &order);
        let too_big = || Error::input("matrix coefficients too large for the lattice search");
        let mut pivot = vec![None; q];
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            let den = exactq::common_denominator(row);
            let mut terms = Vec::new();
            for (f, v) in row.iter().enumerate() {
                if f == p || v.is_zero() {
                    continue;
                }
                debug_assert!(f < p);
                let scaled: BigInt = -(v * Rational::from_integer(den.clone())).to_integer();
                terms.push((f, exactq::to_i128(&scaled).ok_or_else(too_big)?));
            }
            pivot[p] = Some((exactq::to_i128(&den).ok_or_else(too_big)?, terms));
        }
        Ok(Kernel { q, pivot })
    }

    /// Visits every solution with all coordinates in `values` (ascending,
    /// positive) in lexicographic order. Returns `Err(Budget)` once more than
    /// `budget` search nodes have been expanded.
    fn for_each(
        &self,
        values: &SetWindow,
        opts: SolveOptions,
        budget: u64,
        mut visit: impl FnMut(&[i128]) -> ControlFlow<()>,
    ) -> Result<()> {
        if values.is_empty() {
            return Ok(());
        }
        let lo = *values.members().first().unwrap() as i128;
        let hi = *values.members().last().unwrap() as i128;
        let mut state = Walk { kernel: self, values, opts, lo, hi, budget, nodes: 0, x: vec![0; self.q] };
        match state.step(0, &mut visit)? {
            ControlFlow::Continue(()) | ControlFlow::Break(()) => Ok(()),
        }
    }
}

struct Walk<'a> {
    kernel: &'a Kernel,
    values: &'a SetWindow,
    opts: SolveOptions,
    lo: i128,
    hi: i128,
    budget: u64,
    nodes: u64,
    x: Vec<i128>,
}

impl Walk<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::budget(format!("solution search exceeded {} nodes", self.budget)));
        }
        Ok(())
    }

    fn distinct_ok(&self, i: usize, v: i128) -> bool {
        !self.opts.distinct || !self.x[..i].contains(&v)
    }

    /// Interval test: can every pivot after `i` still land in `[lo, hi]`
    /// given the coordinates fixed so far?
    fn feasible_after(&self, i: usize) -> bool {
        for p in i + 1..self.kernel.q {
            let Some((den, terms)) = &self.kernel.pivot[p] else { continue };
            let (mut min, mut max) = (0i128, 0i128);
            for &(f, c) in terms {
                if f <= i {
                    min += c * self.x[f];
                    max += c * self.x[f];
                } else if c > 0 {
                    min += c * self.lo;
                    max += c * self.hi;
                } else {
                    min += c * self.hi;
                    max += c * self.lo;
                }
            }
            if max < den * self.lo || min > den * self.hi {
                return false;
            }
        }
        true
    }

    fn step(&mut self, i: usize, visit: &mut impl FnMut(&[i128]) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        if i == self.kernel.q {
            if self.opts.nontrivial && self.x.iter().all_equal() {
                return Ok(ControlFlow::Continue(()));
            }
            return Ok(visit(&self.x));
        }
        self.tick()?;
        if let Some((den, terms)) = &self.kernel.pivot[i] {
            let num: i128 = terms.iter().map(|&(f, c)| c * self.x[f]).sum();
            if num % den != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            let v = num / den;
            if !self.values.contains(v) || !self.distinct_ok(i, v) {
                return Ok(ControlFlow::Continue(()));
            }
            self.x[i] = v;
            return self.step(i + 1, visit);
        }
        let candidates = self.values;
        for &v in candidates.members() {
            let v = v as i128;
            if !self.distinct_ok(i, v) {
                continue;
            }
            self.x[i] = v;
            if !self.feasible_after(i) {
                self.tick()?;
                continue;
            }
            if self.step(i + 1, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Node cap used when a caller does not supply one.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// The lexicographically least solution of `A·x = 0` with every coordinate in
/// `cell`, or `None` if the window contains none.
pub fn solve_in_cell(a: &RationalMatrix, cell: &SetWindow, opts: SolveOptions) -> Result<Option<Vec<u64>>> {
    solve_in_cell_budget(a, cell, opts, DEFAULT_BUDGET)
}

pub fn solve_in_cell_budget(
    a: &RationalMatrix,
    cell: &SetWindow,
    opts: SolveOptions,
    budget: u64,
) -> Result<Option<Vec<u64>>> {
    if cell.is_empty() {
        return Err(Error::input("cannot search an empty set"));
    }
    let kernel = Kernel::new(a)?;
    let mut found: Option<Vec<u64>> = None;
    kernel.for_each(cell, opts, budget, |x| {
        found = Some(x.iter().map(|&v| v as u64).collect());
        ControlFlow::Break(())
    })?;
    if let Some(x) = &found {
        debug_assert!(solution_holds(a, x, cell));
    }
    Ok(found)
}

/// Exact post-hoc check of `A·x = 0` with every `x_i` in `cell`.
pub fn solution_holds(a: &RationalMatrix, x: &[u64], cell: &SetWindow) -> bool {
    let xq: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
    x.iter().all(|&v| cell.contains(v as i128))
        && a.mul_vec(&xq).map(|r| exactq::is_zero_vector(&r)).unwrap_or(false)
}

/// Colouring of `[1..N]`: `colors[n - 1]` is the colour of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub horizon: u64,
    pub color_count: u32,
    pub colors: Vec<u32>,
}

impl Coloring {
    pub fn new(color_count: u32, colors: Vec<u32>) -> Result<Self> {
        if color_count == 0 {
            return Err(Error::input("need at least one colour"));
        }
        if let Some(bad) = colors.iter().find(|&&c| c >= color_count) {
            return Err(Error::input(format!("colour {bad} out of range for {color_count} colours")));
        }
        Ok(Coloring { horizon: colors.len() as u64, color_count, colors })
    }

    pub fn color_of(&self, n: u64) -> u32 {
        self.colors[(n - 1) as usize]
    }

    /// Members of each colour class.
    pub fn cells(&self) -> Vec<Vec<u64>> {
        let mut cells = vec![Vec::new(); self.color_count as usize];
        for (i, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(i as u64 + 1);
        }
        cells
    }

    /// The same colouring with colours renamed in order of first appearance.
    pub fn canonical(&self) -> Coloring {
        let mut rename = vec![u32::MAX; self.color_count as usize];
        let mut next = 0;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if rename[c as usize] == u32::MAX {
                    rename[c as usize] = next;
                    next += 1;
                }
                rename[c as usize]
            })
            .collect();
        Coloring { horizon: self.horizon, color_count: self.color_count, colors }
    }

    /// Colouring file: line 1 `N r`, line 2 the `N` colour indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| Error::input("empty colouring file"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::input(format!("bad colouring header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [n, r] = header[..] else {
            return Err(Error::input("colouring header must be \"N r\""));
        };
        let colors: Vec<u32> = lines
            .flat_map(str::split_whitespace)
            .map(|t| t.parse().map_err(|_| Error::input(format!("bad colour {t:?}"))))
            .collect::<Result<_>>()?;
        if colors.len() as u64 != n {
            return Err(Error::input(format!("expected {n} colours, got {}", colors.len())));
        }
        Coloring::new(u32::try_from(r).map_err(|_| Error::input("too many colours"))?, colors)
    }

    pub fn to_text(&self) -> String {
        let colors: Vec<String> = self.colors.iter().map(u32::to_string).collect();
        format!("{} {}\n{}\n", self.horizon, self.color_count, colors.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmpiricalVerdict {
    /// Every colouring of `[1..N]` has a monochromatic solution.
    Forced,
    /// Lexicographically least colouring with no monochromatic solution.
    Witness(Coloring),
    /// Reserved for sampling oracles; the exhaustive search never returns it.
    Inconclusive,
}

/// Distinct value sets of all admissible solutions in `[1..N]`, indexed by
/// their largest element. `None` means some admissible solution is a single
/// value, which every colouring makes monochromatic.
fn solution_edges(a: &RationalMatrix, horizon: u64, opts: SolveOptions, budget: u64) -> Result<Option<Vec<Vec<Vec<u32>>>>> {
    let kernel = Kernel::new(a)?;
    let full = SetWindow::full(horizon)?;
    let mut by_max: Vec<Vec<Vec<u32>>> = vec![Vec::new(); horizon as usize + 1];
    let mut singleton = false;
    kernel.for_each(&full, opts, budget, |x| {
        let mut vals: Vec<u32> = x.iter().map(|&v| v as u32).collect();
        vals.sort_unstable();
        vals.dedup();
        if vals.len() == 1 {
            singleton = true;
            return ControlFlow::Break(());
        }
        let top = *vals.last().unwrap() as usize;
        vals.pop();
        by_max[top].push(vals);
        ControlFlow::Continue(())
    })?;
    if singleton {
        return Ok(None);
    }
    for edges in &mut by_max {
        edges.sort_unstable();
        edges.dedup();
    }
    Ok(Some(by_max))
}

/// Outcome of one colouring subtree together with the nodes it consumed.
enum Subtree {
    Found(Vec<u32>, u64),
    Exhausted(u64),
    OverBudget,
}

struct ColorSearch<'a> {
    edges: &'a [Vec<Vec<u32>>],
    colors: u32,
    horizon: usize,
}

impl ColorSearch<'_> {
    /// Colouring `n` with `c` creates no monochromatic edge whose maximum is `n`.
    fn admissible(&self, assign: &[u32], n: usize, c: u32) -> bool {
        self.edges[n]
            .iter()
            .all(|rest| rest.iter().any(|&v| assign[v as usize] != c))
    }

    /// Colours used so far are `0..used`; new colours appear in order, which
    /// keeps every colour permutation class to its lexicographically least
    /// member (in particular 1 always gets colour 0).
    fn limit(&self, used: u32) -> u32 {
        (used + 1).min(self.colors)
    }

    /// All admissible restricted-growth prefixes of length `depth`, in
    /// lexicographic order, and the nodes spent finding them.
    fn prefixes(&self, depth: usize) -> (Vec<(Vec<u32>, u32)>, u64) {
        let mut out = Vec::new();
        let mut nodes = 0;
        let mut assign = vec![u32::MAX; self.horizon + 1];
        self.collect_prefixes(1, depth, 0, &mut assign, &mut out, &mut nodes);
        (out, nodes)
    }

    fn collect_prefixes(
        &self,
        n: usize,
        depth: usize,
        used: u32,
        assign: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, u32)>,
        nodes: &mut u64,
    ) {
        if n > depth {
            out.push((assign[1..=depth].to_vec(), used));
            return;
        }
        for c in 0..self.limit(used) {
            *nodes += 1;
            if self.admissible(assign, n, c) {
                assign[n] = c;
                self.collect_prefixes(n + 1, depth, used.max(c + 1), assign, out, nodes);
                assign[n] = u32::MAX;
            }
        }
    }

    fn subtree(&self, prefix: &[u32], used: u32, budget: u64) -> Subtree {
        let mut assign = vec![u32::MAX; self.horizon + 1];
        assign[1..=prefix.len()].copy_from_slice(prefix);
        let mut nodes = 0;
        match self.extend(prefix.len() + 1, used, &mut assign, &mut nodes, budget) {
            Err(()) => Subtree::OverBudget,
            Ok(true) => Subtree::Found(assign[1..].to_vec(), nodes),
            Ok(false) => Subtree::Exhausted(nodes),
        }
    }

    fn extend(&self, n: usize, used: u32, assign: &mut Vec<u32>, nodes: &mut u64, budget: u64) -> std::result::Result<bool, ()> {
        if n > self.horizon {
            return Ok(true);
        }
        for c in 0..self.limit(used) {
            *nodes += 1;
            if *nodes > budget {
                return Err(());
            }
            if self.admissible(assign, n, c) {
                assign[n] = c;
                if self.extend(n + 1, used.max(c + 1), assign, nodes, budget)? {
                    return Ok(true);
                }
                assign[n] = u32::MAX;
            }
        }
        Ok(false)
    }
}

/// Depth at which the colouring tree is cut into independent subtrees.
const SPLIT_DEPTH: usize = 10;

/// Exhaustive partition-regularity oracle on `[1..N]` with `r` colours.
///
/// The tree is always cut at a fixed depth and the subtrees are merged in
/// lexicographic order with cumulative node accounting, so the verdict, the
/// witness and the budget outcome do not depend on `threads`.
pub fn empirical_pr(
    a: &RationalMatrix,
    colors: u32,
    horizon: u64,
    opts: SolveOptions,
    budget: u64,
    threads: usize,
) -> Result<EmpiricalVerdict> {
    if colors == 0 {
        return Err(Error::input("need at least one colour"));
    }
    if horizon == 0 {
        return Err(Error::input("horizon must be at least 1"));
    }
    let Some(edges) = solution_edges(a, horizon, opts, budget)? else {
        return Ok(EmpiricalVerdict::Forced);
    };
    let search = ColorSearch { edges: &edges, colors, horizon: horizon as usize };
    let (prefixes, mut spent) = search.prefixes(SPLIT_DEPTH.min(horizon as usize));
    if spent > budget {
        return Err(Error::budget(format!("colouring search exceeded {budget} nodes")));
    }
    let remaining = budget - spent;
    let pool = thread_pool(threads)?;
    let chunk = threads.max(1);
    for group in prefixes.chunks(chunk) {
        let results: Vec<Subtree> = pool.install(|| {
            group.par_iter().map(|(p, used)| search.subtree(p, *used, remaining)).collect()
        });
        for result in results {
            let (found, nodes) = match result {
                Subtree::OverBudget => {
                    return Err(Error::budget(format!("colouring search exceeded {budget} nodes")))
                }
                Subtree::Found(c, n) => (Some(c), n),
                Subtree::Exhausted(n) => (None, n),
            };
            spent += nodes;
            if spent > budget {
                return Err(Error::budget(format!("colouring search exceeded {budget} nodes")));
            }
            if let Some(colors_found) = found {
                return Ok(EmpiricalVerdict::Witness(Coloring::new(colors, colors_found)?));
            }
        }
    }
    Ok(EmpiricalVerdict::Forced)
}

pub(crate) fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::input(format!("cannot start worker threads: {e}")))
}

/// A monochromatic admissible solution under `coloring`, if one exists.
pub fn monochromatic_solution(a: &RationalMatrix, coloring: &Coloring, opts: SolveOptions) -> Result<Option<Vec<u64>>> {
    for cell in coloring.cells() {
        if cell.is_empty() {
            continue;
        }
        let window = SetWindow::new(coloring.horizon, cell)?;
        if let Some(x) = solve_in_cell(a, &window, opts)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Sweep result for a forcing number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingSweep {
    /// Least horizon at which every colouring is forced, if reached.
    pub forced_at: Option<u64>,
    /// Largest horizon below `forced_at` (or the sweep end) with a witness.
    pub witness_at: Option<u64>,
    pub witness: Option<Coloring>,
    pub options: SolveOptions,
}

/// Runs [`empirical_pr`] for `N = 1, 2, …, max` until the first forced horizon.
pub fn forcing_sweep(
    a: &RationalMatrix,
    colors: u32,
    max: u64,
    opts: SolveOptions,
    budget: u64,
    threads: usize,
) -> Result<ForcingSweep> {
    let mut sweep = ForcingSweep { forced_at: None, witness_at: None, witness: None, options: opts };
    for n in 1..=max {
        match empirical_pr(a, colors, n, opts, budget, threads)? {
            EmpiricalVerdict::Forced => {
                sweep.forced_at = Some(n);
                break;
            }
            EmpiricalVerdict::Witness(c) => {
                sweep.witness_at = Some(n);
                sweep.witness = Some(c);
            }
            EmpiricalVerdict::Inconclusive => unreachable!("exhaustive search is never inconclusive"),
        }
    }
    Ok(sweep)
}

/// `x + y = z`.
pub fn schur_matrix() -> RationalMatrix {
    RationalMatrix::from_integer_rows(&[vec![1, 1, -1]]).expect("static matrix")
}

/// `x_i - 2 x_{i+1} + x_{i+2} = 0` for consecutive triples: a `length`-term
/// arithmetic progression.
pub fn progression_matrix(length: usize) -> Result<RationalMatrix> {
    if length < 3 {
        return Err(Error::input("progression length must be at least 3"));
    }
    let rows: Vec<Vec<i64>> = (0..length - 2)
        .map(|i| {
            let mut row = vec![0; length];
            row[i] = 1;
            row[i + 1] = -2;
            row[i + 2] = 1;
            row
        })
        .collect();
    RationalMatrix::from_integer_rows(&rows)
}
