//! Exact rational scalars, dense matrices, and the rank/kernel/solve
//! primitives the rest of the crate is built on. No floating point anywhere:
//! cohomology dimensions are rank decisions and must not depend on tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar. `BigRational` keeps values in canonical form
/// (reduced, positive denominator) through every operation.
pub type Rat = BigRational;

/// `p/q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` into a canonical rational. `"1/0"` is rejected.
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RatParseError::Empty);
    }
    let parse_int = |s: &str| -> Result<BigInt, RatParseError> {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| RatParseError::BadInteger(s.trim().to_string()))
    };
    match text.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(RatParseError::ZeroDenominator(text.to_string()));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"`, the same syntax `parse_rat` accepts.
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Zero vector of length `n`.
pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

/// Standard basis vector `e_i` (0-based) of length `n`.
pub fn basis_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(Rat::is_zero)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected a {expected_rows}x{expected_cols} shape, got {rows}x{cols}")]
pub struct ShapeError {
    pub expected_rows: usize,
    pub expected_cols: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_rat(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from row slices; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n_rows = rows.len();
        Matrix {
            rows: n_rows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from integer literals, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rat) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| c * a).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c) + a * b;
                        out.set(r, c, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<Rat>]) -> Self {
        assert!(
            columns.iter().all(|c| c.len() == dim),
            "column length mismatch"
        );
        Matrix::from_fn(dim, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Row-permuted copy; `perm[r]` is the source row for output row `r`.
    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        assert_eq!(perm.len(), self.rows);
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(perm[r], c).clone())
    }

    /// Reduced row echelon form together with the pivot column indices.
    /// Pivoting is deterministic: first nonzero entry in column order, so
    /// kernel bases are reproducible across runs.
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    m.entries.swap(src * m.cols + c, pivot_row * m.cols + c);
                }
            }
            let inv = m.get(pivot_row, col).recip();
            for c in col..m.cols {
                let scaled = m.get(pivot_row, c) * &inv;
                m.set(pivot_row, c, scaled);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let val = m.get(r, c) - &factor * m.get(pivot_row, c);
                    m.set(r, c, val);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Rank over the rationals, computed by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space: exactly `cols - rank` vectors with
    /// `self * v = 0` for each. One vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(self.cols);
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact solve of `self * x = b`. `None` when the system is inconsistent;
    /// otherwise a particular solution (free variables set to zero) plus the
    /// full kernel basis.
    pub fn solve(&self, b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut augmented = Matrix::zeros(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                augmented.set(r, c, self.get(r, c).clone());
            }
            augmented.set(r, self.cols, rhs.clone());
        }
        let (rref, pivots) = augmented.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column: inconsistent
        }
        let mut particular = zero_vec(self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = rref.get(row, self.cols).clone();
        }
        Some((particular, self.kernel_basis()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rat_parsing_and_formatting() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat(" 7 / -14 ").unwrap(), rat(-1, 2));
        assert_eq!(format_rat(&rat(-2, 3)), "-2/3");
        assert_eq!(format_rat(&rat(4, 2)), "2");
        assert!(matches!(
            parse_rat("1/0"),
            Err(RatParseError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_rat(""), Err(RatParseError::Empty)));
        assert!(matches!(parse_rat("x"), Err(RatParseError::BadInteger(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(Matrix::zeros(3, 3).rank(), 0);
        // Rows proportional; the 2x2 determinant 1*4 - 2*2 vanishes.
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
        assert!(det.is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let zero = Matrix::zeros(3, 3);
        let basis = zero.kernel_basis();
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            assert_eq!(v, &basis_vec(3, i));
        }
        assert!(Matrix::identity(4).kernel_basis().is_empty());

        let row = Matrix::from_i64(&[&[1, 1]]);
        let basis = row.kernel_basis();
        assert_eq!(basis.len(), 1);
        // Proportional to (1, -1).
        let v = &basis[0];
        assert!((&v[0] + &v[1]).is_zero() && !vec_is_zero(v));
        assert!(vec_is_zero(&row.mul_vec(v)));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(3);
        let b = vec![rat_int(2), rat(1, 2), rat_int(-3)];
        let (x, kernel) = id.solve(&b).unwrap();
        assert_eq!(x, b);
        assert!(kernel.is_empty());

        let zero = Matrix::zeros(2, 2);
        assert!(zero.solve(&[rat_int(1), rat_int(0)]).is_none());

        let m = Matrix::from_i64(&[&[1, 1], &[0, 0]]);
        let b = vec![rat_int(2), rat_int(0)];
        let (x, kernel) = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert_eq!(kernel.len(), 1);
        assert!((&kernel[0][0] + &kernel[0][1]).is_zero());
    }

    #[test]
    fn degenerate_shapes() {
        let empty = Matrix::zeros(0, 0);
        assert_eq!(empty.rank(), 0);
        assert!(empty.kernel_basis().is_empty());
        assert_eq!(empty.solve(&[]), Some((vec![], vec![])));

        let no_rows = Matrix::zeros(0, 3);
        assert_eq!(no_rows.rank(), 0);
        assert_eq!(no_rows.kernel_basis().len(), 3);

        let no_cols = Matrix::zeros(3, 0);
        assert_eq!(no_cols.rank(), 0);
        assert!(no_cols.kernel_basis().is_empty());
        assert!(no_cols
            .solve(&[Rat::zero(), Rat::zero(), Rat::zero()])
            .is_some());
        assert!(no_cols
            .solve(&[Rat::one(), Rat::zero(), Rat::zero()])
            .is_none());
    }

    /// Largest `r` such that some `r x r` minor has nonzero determinant.
    /// Independent brute-force oracle for `rank` on small matrices.
    fn rank_by_minors(m: &Matrix) -> usize {
        fn det(m: &Matrix, rows: &[usize], cols: &[usize]) -> Rat {
            if rows.is_empty() {
                return Rat::one();
            }
            let mut total = Rat::zero();
            for (k, &c) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det(m, &rows[1..], &sub_cols);
                let signed = m.get(rows[0], c) * &minor;
                if k % 2 == 0 {
                    total += signed;
                } else {
                    total -= signed;
                }
            }
            total
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
            }
            out
        }
        for r in (1..=m.rows().min(m.cols())).rev() {
            for rows in subsets(m.rows(), r) {
                for cols in subsets(m.cols(), r) {
                    if !det(m, &rows, &cols).is_zero() {
                        return r;
                    }
                }
            }
        }
        0
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |cells| {
                let mut m = Matrix::zeros(r, c);
                for (idx, (p, q)) in cells.into_iter().enumerate() {
                    m.set(idx / c, idx % c, rat(p, q));
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(m in small_matrix()) {
            prop_assert_eq!(m.rank(), rank_by_minors(&m));
        }

        #[test]
        fn rank_plus_nullity_is_cols(m in small_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }

        #[test]
        fn kernel_vectors_annihilate(m in small_matrix()) {
            for v in m.kernel_basis() {
                prop_assert!(vec_is_zero(&m.mul_vec(&v)));
            }
        }

        #[test]
        fn rank_invariant_under_row_permutation(m in small_matrix(), seed in 0u64..1000) {
            // Deterministic pseudo-shuffle of the row order.
            let mut perm: Vec<usize> = (0..m.rows()).collect();
            let mut s = seed.wrapping_add(1);
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s as usize) % (i + 1));
            }
            prop_assert_eq!(m.permute_rows(&perm).rank(), m.rank());
        }

        #[test]
        fn solve_is_exact_when_consistent(m in small_matrix(), rhs_seed in proptest::collection::vec((-3i64..=3, 1i64..=2), 0..=3)) {
            // Build a guaranteed-consistent right-hand side b = m * y.
            let y: Vec<Rat> = (0..m.cols()).map(|i| {
                let (p, q) = rhs_seed.get(i % rhs_seed.len().max(1)).copied().unwrap_or((1, 1));
                rat(p, q)
            }).collect();
            let b = m.mul_vec(&y);
            let (x, kernel) = m.solve(&b).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
            for k in kernel {
                prop_assert!(vec_is_zero(&m.mul_vec(&k)));
            }
        }
    }
}
