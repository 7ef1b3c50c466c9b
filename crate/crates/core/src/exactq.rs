//! Exact rational arithmetic and desk-scale linear algebra.
//!
//! Everything here works over arbitrary-precision rationals, so a verdict
//! built from many eliminations can never be corrupted by overflow or
//! rounding. Elimination uses a fixed pivot rule (columns left to right,
//! first nonzero row top to bottom) and sets free variables to zero, which
//! makes every solution, and therefore every certificate, reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"7"`, `"-3"` or `"num/den"`.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let token = token.trim();
    let bad = || Error::input(format!("not a rational number: {token:?}"));
    match token.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().map_err(|_| bad())?;
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::input(format!("zero denominator in {token:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = token.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense row-major matrix of rationals with at least one row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input("matrix must have at least one row and one column"));
        }
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("ragged integer rows"));
        }
        let entries = rows.iter().flatten().map(|&v| rational(v)).collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    /// The submatrix formed by `selected` columns, in the given order.
    pub fn select_columns(&self, selected: &[usize]) -> Result<Self> {
        if let Some(&bad) = selected.iter().find(|&&j| j >= self.cols) {
            return Err(Error::input(format!(
                "column index {bad} out of range for {} columns",
                self.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * selected.len());
        for r in 0..self.rows {
            entries.extend(selected.iter().map(|&j| self.get(r, j).clone()));
        }
        Self::new(self.rows, selected.len(), entries)
    }

    /// Sum of the given columns as a vector of length `rows`.
    pub fn column_sum(&self, selected: &[usize]) -> Vec<Rational> {
        (0..self.rows)
            .map(|r| selected.iter().map(|&j| self.get(r, j)).sum())
            .collect()
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::input(format!(
                "vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Parses the shared matrix text format: a `rows cols` header followed by
    /// `rows` lines of `cols` integers or `num/den` rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::input("empty matrix text"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::input(format!("bad matrix header {header:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::input(format!("matrix header must be \"rows cols\", got {header:?}")));
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::input(format!("matrix text ends before row {}", r + 1)))?;
            let row: Vec<Rational> = line.split_whitespace().map(parse_rational).collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(Error::input(format!(
                    "row {} has {} entries, expected {cols}",
                    r + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        if lines.next().is_some() {
            return Err(Error::input("trailing lines after matrix rows"));
        }
        Self::new(rows, cols, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(format_rational).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Reduced row echelon form of a row list together with its pivot columns.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    /// `pivots[i]` is the pivot column of `rows[i]`; rows past `pivots.len()`
    /// are zero on every column in the elimination order.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination visiting columns in `column_order`. For each
/// column the pivot is the first remaining row (top to bottom) with a nonzero
/// entry. Pivot rows are normalized to 1 and cleared above and below.
pub(crate) fn reduce(mut rows: Vec<Vec<Rational>>, column_order: &[usize]) -> Echelon {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in column_order {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].recip();
        for v in rows[next].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    Echelon { rows, pivots }
}

pub fn rank(m: &RationalMatrix) -> usize {
    let order: Vec<usize> = (0..m.cols).collect();
    reduce(m.to_rows(), &order).pivots.len()
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_linear(m: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != m.rows {
        return Err(Error::input(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let augmented: Vec<Vec<Rational>> = m
        .to_rows()
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs.clone());
            row
        })
        .collect();
    let order: Vec<usize> = (0..m.cols).collect();
    let ech = reduce(augmented, &order);
    let rhs = m.cols;
    if ech.rows[ech.pivots.len()..].iter().any(|row| !row[rhs].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[rhs].clone();
    }
    Ok(Some(x))
}

/// Coefficients `c` (indexed like `selected`) with
/// `Σ c_k · column(selected[k]) = target`, or `None` if the target is outside
/// the rational span of those columns.
pub fn in_column_span(
    m: &RationalMatrix,
    selected: &[usize],
    target: &[Rational],
) -> Result<Option<Vec<Rational>>> {
    if selected.is_empty() {
        return Err(Error::input("column selection must be nonempty"));
    }
    let sub = m.select_columns(selected)?;
    solve_linear(&sub, target)
}

/// Least common multiple of the denominators of `v`.
pub(crate) fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| {
        num_integer::Integer::lcm(&acc, q.denom())
    })
}

/// True if every entry of the vector is zero.
pub(crate) fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub(crate) fn to_i128(q: &BigInt) -> Option<i128> {
    num_traits::ToPrimitive::to_i128(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_integer_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ints(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&ints(&[&[1, 1, -1]])), 1);
        assert_eq!(rank(&ints(&[&[1, 1, -1, 0], &[1, 0, 1, -1]])), 2);
        assert_eq!(rank(&ints(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&ints(&[&[0, 0]])), 0);
    }

    #[test]
    fn solve_examples() {
        let id = ints(&[&[1, 0], &[0, 1]]);
        assert_eq!(solve_linear(&id, &qv(&[3, 5])).unwrap(), Some(qv(&[3, 5])));
        let one_row = ints(&[&[1, 1]]);
        assert_eq!(solve_linear(&one_row, &qv(&[0])).unwrap(), Some(qv(&[0, 0])));
        let col = ints(&[&[1], &[1]]);
        assert_eq!(solve_linear(&col, &qv(&[1, 2])).unwrap(), None);
    }

    #[test]
    fn solve_rejects_dimension_mismatch() {
        let id = ints(&[&[1, 0], &[0, 1]]);
        assert!(matches!(solve_linear(&id, &qv(&[1])), Err(Error::Input(_))));
    }

    #[test]
    fn span_examples() {
        let m = ints(&[&[1, 0], &[0, 1]]);
        assert_eq!(in_column_span(&m, &[0, 1], &qv(&[2, 3])).unwrap(), Some(qv(&[2, 3])));
        let m = ints(&[&[1], &[1]]);
        assert_eq!(in_column_span(&m, &[0], &qv(&[1, 2])).unwrap(), None);
        let m = ints(&[&[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(in_column_span(&m, &[0, 1, 2], &qv(&[1, 1])).unwrap(), Some(qv(&[2, 1, 0])));
        assert!(matches!(in_column_span(&m, &[], &qv(&[1, 1])), Err(Error::Input(_))));
        assert!(matches!(in_column_span(&m, &[3], &qv(&[1, 1])), Err(Error::Input(_))));
    }

    #[test]
    fn rational_solutions_stay_exact() {
        let m = ints(&[&[3, 0], &[0, 7]]);
        let x = solve_linear(&m, &qv(&[1, 1])).unwrap().unwrap();
        assert_eq!(x, vec![ratio(1, 3), ratio(1, 7)]);
    }

    #[test]
    fn text_format_round_trip() {
        let text = "2 3\n1 -2 1/2\n0 4 -7/3\n";
        let m = RationalMatrix::parse(text).unwrap();
        assert_eq!(m.get(0, 2), &ratio(1, 2));
        assert_eq!(m.get(1, 2), &ratio(-7, 3));
        assert_eq!(m.to_text(), text);
        assert!(RationalMatrix::parse("2 2\n1 2\n").is_err());
        assert!(RationalMatrix::parse("1 2\n1 2 3\n").is_err());
        assert!(RationalMatrix::parse("1 1\n1/0\n").is_err());
    }

    #[test]
    fn rejects_empty_shapes() {
        assert!(RationalMatrix::new(0, 1, vec![]).is_err());
        assert!(RationalMatrix::new(1, 2, vec![rational(1)]).is_err());
    }
}
