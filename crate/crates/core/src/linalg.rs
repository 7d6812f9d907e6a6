//! Exact rational scalars, vectors and dense matrices.
//!
//! Rank and inverse run fraction-free over the integers after each row has
//! been scaled to primitive integer form; scaling a row by a positive
//! rational changes neither the rank nor (after undoing the scaling) the
//! inverse.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub type RatVector = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(values: &[i64]) -> RatVector {
    values.iter().map(|&v| rat(v)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Clears denominators and divides by the gcd of the entries. The sign is
/// preserved; the zero vector maps to itself.
pub fn primitive_integers(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive_int_vector(scaled)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive_int_vector(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

pub fn primitive_normalize(v: &[Rat]) -> RatVector {
    primitive_integers(v)
        .into_iter()
        .map(Rat::from_integer)
        .collect()
}

/// Rank of a list of integer rows via Bareiss elimination. Every
/// intermediate entry is a minor of the input, so the divisions are exact.
pub fn int_rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let v = &pivot_row[col] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<RatVector>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| rat_vec(r)).collect(), cols)
            .expect("rows of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<RatVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.row_iter().map(|row| dot(row, v)).collect())
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.row_iter().map(primitive_integers).collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        int_rank(&self.integer_rows(), self.cols)
    }

    /// Exact inverse by fraction-free Gauss-Jordan elimination on the
    /// row-scaled integer matrix augmented with the scaling factors.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        // Row i of A is s_i times row i of the integer matrix; keep s_i^{-1}
        // on the diagonal of the right block so the result is A^{-1} * det.
        let width = 2 * n;
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut scale: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            let mut full = ints;
            full.resize(width, BigInt::zero());
            full[n + i] = BigInt::one();
            a.push(full);
            scale.push(Rat::from_integer(lcm));
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Err(Error::Singular);
            };
            a.swap(k, p);
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..width {
                    if j == k {
                        continue;
                    }
                    let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot_row[k].clone();
        }
        // Now the left block is det * I (det = prev) and the right block is
        // det times the inverse of the integer matrix with rows permuted
        // back by construction of the augmented identity.
        let det = Rat::from_integer(prev);
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = Rat::from_integer(a[i][n + j].clone()) / &det * &scale[j];
            }
        }
        Ok(inv)
    }

    /// A primitive integer generator of the kernel when it is one-dimensional,
    /// signed so that its first nonzero entry is positive.
    pub fn null_space_1d(&self) -> Result<RatVector> {
        let n = self.cols;
        let rank = self.rank();
        if n == 0 || rank + 1 != n {
            return Err(Error::RankMismatch {
                expected: n.saturating_sub(1),
                found: rank,
            });
        }
        let (reduced, pivots) = self.rref();
        let free = (0..n)
            .find(|c| !pivots.contains(c))
            .expect("exactly one free column");
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -reduced[(r, free)].clone();
        }
        let mut v = primitive_normalize(&v);
        if v.iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
        {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        Ok(v)
    }

    /// Reduced row echelon form over the rationals, with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain rational Gaussian elimination, independent of the Bareiss path.
    fn naive_rank(m: &RatMatrix) -> usize {
        m.rref().1.len()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(2, 2).rank(), 0);
        let m = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(RatMatrix::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            RatMatrix::identity(3).inverse().unwrap(),
            RatMatrix::identity(3)
        );
        let m = RatMatrix::from_i64_rows(&[&[1, 0], &[-1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, RatMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]));
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        let half = RatMatrix::from_i64_rows(&[&[2]]).inverse().unwrap();
        assert_eq!(half[(0, 0)], ratio(1, 2));
    }

    #[test]
    fn inverse_needs_row_swap_and_rationals() {
        let m = RatMatrix::from_rows(
            vec![
                vec![rat(0), ratio(1, 3), rat(2)],
                vec![ratio(-3, 2), rat(0), rat(1)],
                vec![rat(4), rat(5), ratio(7, 5)],
            ],
            3,
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(3));
        assert_eq!(inv.mul(&m).unwrap(), RatMatrix::identity(3));
    }

    #[test]
    fn inverse_singular() {
        let m = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn null_space_examples() {
        let m = RatMatrix::from_i64_rows(&[&[1, -1]]);
        assert_eq!(m.null_space_1d().unwrap(), rat_vec(&[1, 1]));
        let m = RatMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(m.null_space_1d().unwrap(), rat_vec(&[0, 0, 1]));
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[4, 2]]);
        assert_eq!(m.null_space_1d().unwrap(), rat_vec(&[1, -2]));
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[4, 3]]);
        assert!(matches!(m.null_space_1d(), Err(Error::RankMismatch { .. })));
        // no rows at all in one column: the kernel is the whole line
        assert_eq!(
            RatMatrix::zeros(0, 1).null_space_1d().unwrap(),
            rat_vec(&[1])
        );
    }

    #[test]
    fn null_space_rank_deficient_is_rejected() {
        // rank 1 in three columns leaves a two-dimensional kernel
        let m = RatMatrix::from_i64_rows(&[&[2, 1, 0], &[4, 2, 0]]);
        assert_eq!(
            m.null_space_1d(),
            Err(Error::RankMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(
            primitive_normalize(&[ratio(2, 3), ratio(4, 3)]),
            rat_vec(&[1, 2])
        );
        assert_eq!(primitive_normalize(&rat_vec(&[0, 0])), rat_vec(&[0, 0]));
        assert_eq!(primitive_normalize(&rat_vec(&[-2, -4])), rat_vec(&[-1, -2]));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
        prop::collection::vec((-6i64..=6, 1i64..=4), rows * cols).prop_map(move |cells| {
            let data = cells.into_iter().map(|(n, d)| ratio(n, d)).collect();
            RatMatrix::new(rows, cols, data).unwrap()
        })
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(m in (1usize..=5).prop_flat_map(|n| small_matrix(n, n))) {
            match m.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(m.rows()));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(naive_rank(&m) < m.rows());
                }
            }
        }

        #[test]
        fn rank_agrees_with_rref_and_row_operations(
            m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| small_matrix(r, c)),
            scale in prop::collection::vec((1i64..=5, prop::bool::ANY), 5),
        ) {
            let r = m.rank();
            prop_assert_eq!(r, naive_rank(&m));
            let mut rows: Vec<RatVector> = m.row_iter().map(|x| x.to_vec()).collect();
            rows.reverse();
            for (row, (s, neg)) in rows.iter_mut().zip(&scale) {
                let f = if *neg { rat(-*s) } else { rat(*s) };
                for x in row.iter_mut() {
                    *x = &*x * &f;
                }
            }
            let scaled = RatMatrix::from_rows(rows, m.cols()).unwrap();
            prop_assert_eq!(scaled.rank(), r);
        }

        #[test]
        fn primitive_is_idempotent_and_scale_invariant(
            v in prop::collection::vec((-20i64..=20, 1i64..=6), 1..6),
            q in (1i64..=9, 1i64..=9),
        ) {
            let v: RatVector = v.into_iter().map(|(n, d)| ratio(n, d)).collect();
            let p = primitive_normalize(&v);
            prop_assert_eq!(primitive_normalize(&p), p.clone());
            let f = ratio(q.0, q.1);
            let scaled: RatVector = v.iter().map(|x| x * &f).collect();
            prop_assert_eq!(primitive_normalize(&scaled), p);
        }
    }
}
