//! Exact integer matrices over arbitrary-precision integers.
//!
//! Everything here is exact: determinants go through fraction-free (Bareiss)
//! elimination, characteristic polynomials through the division-free
//! Berkowitz recurrence, and lattice quotients through Smith invariants.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polyalg::IntPolynomial;

/// Default cap on the number of rows or columns of any matrix.
pub const DEFAULT_SIZE_LIMIT: usize = 64;

static SIZE_LIMIT: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_LIMIT);

/// Current dimension cap applied by every constructor.
pub fn size_limit() -> usize {
    SIZE_LIMIT.load(Ordering::Relaxed)
}

/// Changes the dimension cap. Matrices already built are unaffected.
pub fn set_size_limit(limit: usize) {
    SIZE_LIMIT.store(limit.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix dimension {dim} exceeds the size limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("cannot parse matrix literal: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    Singular,
    #[error("system has no integer solution")]
    NotIntegral,
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        let limit = size_limit();
        if rows > limit || cols > limit {
            return Err(MatrixError::TooLarge { dim: rows.max(cols), limit });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged or empty input,
    /// so it is meant for literals in code and tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.as_ref().len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.as_ref().len() == c), "ragged matrix literal");
        let data = rows
            .iter()
            .flat_map(|row| row.as_ref().iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix::new(r, c, data).expect("invalid matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        let mut m = IntMatrix::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        Ok(m)
    }

    /// Column vector from a slice of entries.
    pub fn column_vector(entries: &[BigInt]) -> Result<Self, MatrixError> {
        IntMatrix::new(entries.len(), 1, entries.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    acc += self.get(i, t) * rhs.get(t, j);
                }
                data.push(acc);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(
        &self,
        rhs: &IntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<IntMatrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Shape(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != rhs.rows {
            return Err(MatrixError::Shape(format!(
                "cannot place {} rows beside {} rows",
                self.rows, rhs.rows
            )));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + rhs.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        IntMatrix::new(self.rows, self.cols + rhs.cols, data)
    }

    /// `self^k` by repeated squaring; `self^0` is the identity.
    pub fn pow(&self, k: u64) -> Result<IntMatrix, MatrixError> {
        let n = self.require_square()?;
        let mut result = IntMatrix::identity(n)?;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `I + A + ... + A^(k-1)`; the zero matrix when `k = 0`.
    pub fn geometric_sum(&self, k: u64) -> Result<IntMatrix, MatrixError> {
        let n = self.require_square()?;
        let mut sum = IntMatrix::zeros(n, n)?;
        let mut term = IntMatrix::identity(n)?;
        for i in 0..k {
            sum = sum.checked_add(&term)?;
            if i + 1 < k {
                term = term.checked_mul(self)?;
            }
        }
        Ok(sum)
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Result<IntMatrix, MatrixError> {
        let n = self.require_square()?;
        IntMatrix::identity(n)?.checked_sub(self)
    }

    /// Determinant by Bareiss fraction-free elimination. Every division is exact.
    pub fn det(&self) -> Result<BigInt, MatrixError> {
        let n = self.require_square()?;
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// `det(xI - self)` by the Berkowitz recurrence (no divisions at all).
    pub fn charpoly(&self) -> Result<IntPolynomial, MatrixError> {
        let n = self.require_square()?;
        // Coefficients highest degree first for the leading r x r block.
        let mut v: Vec<BigInt> = vec![BigInt::one()];
        for r in 0..n {
            // Toeplitz column: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
            let mut t = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-self.get(r, r));
            let mut w: Vec<BigInt> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rc: BigInt = (0..r).map(|j| self.get(r, j) * &w[j]).sum();
                t.push(-rc);
                w = (0..r)
                    .map(|i| (0..r).map(|j| self.get(i, j) * &w[j]).sum())
                    .collect();
            }
            let next: Vec<BigInt> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r))
                        .filter(|&j| i - j < t.len())
                        .map(|j| &t[i - j] * &v[j])
                        .sum()
                })
                .collect();
            v = next;
        }
        v.reverse();
        Ok(IntPolynomial::new(v))
    }

    /// Smith invariants; see [`SmithForm`].
    pub fn smith_normal_form(&self) -> SmithForm {
        smith_invariants(self)
    }

    /// Unique solution of `self * x = b` for square nonsingular `self`, by
    /// Cramer's rule. Fails when the solution is not integral.
    pub fn solve_integral(&self, b: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        let n = self.require_square()?;
        if b.len() != n {
            return Err(MatrixError::Shape(format!("right-hand side of length {} for {n} rows", b.len())));
        }
        let d = self.det()?;
        if d.is_zero() {
            return Err(MatrixError::Singular);
        }
        let mut x = Vec::with_capacity(n);
        for j in 0..n {
            let mut replaced = self.clone();
            for (i, bi) in b.iter().enumerate() {
                replaced.data[i * n + j] = bi.clone();
            }
            let (q, r) = replaced.det()?.div_rem(&d);
            if !r.is_zero() {
                return Err(MatrixError::NotIntegral);
            }
            x.push(q);
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

// Operator forms panic on shape mismatch, like slice indexing.
impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

/// `L^k`, with `L^0 = I`.
pub fn mat_pow(l: &IntMatrix, k: u64) -> Result<IntMatrix, MatrixError> {
    l.pow(k)
}

pub fn det(a: &IntMatrix) -> Result<BigInt, MatrixError> {
    a.det()
}

pub fn charpoly(a: &IntMatrix) -> Result<IntPolynomial, MatrixError> {
    a.charpoly()
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    a.smith_normal_form()
}

/// Invariant factors of an integer matrix.
///
/// `invariants` holds the nonzero diagonal entries `d1 | d2 | ... | d_rank`
/// of the Smith normal form; trailing zeros are implied by `rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    pub fn product(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

fn smith_invariants(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigInt>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(i, j), &(p, q)| m[i][j].abs().cmp(&m[p][q].abs()));
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                dirty |= !m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for i in t..rows {
                    let v = &q * &m[i][t];
                    m[i][j] -= v;
                }
                dirty |= !m[t][j].is_zero();
            }
            if !dirty {
                break;
            }
        }
        if m[t][t].is_zero() {
            break;
        }
        diag.push(m[t][t].abs());
    }

    // Diagonal to divisibility chain: (a, b) -> (gcd, lcm) preserves the group.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    SmithForm { rank: diag.len(), invariants: diag }
}

/// Index of a sublattice of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(self) -> Option<BigInt> {
        match self {
            LatticeIndex::Finite(v) => Some(v),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(v) => write!(f, "{v}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

/// `[Z^n : span of the columns of a]` where `n = a.rows()`.
pub fn lattice_index(a: &IntMatrix) -> LatticeIndex {
    let snf = a.smith_normal_form();
    if snf.rank < a.rows {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(snf.product())
    }
}

/// Literal format: `rows cols; a11 a12 ...; a21 ...`.
impl FromStr for IntMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(';').map(str::trim);
        let header = parts.next().unwrap_or("");
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| MatrixError::Parse(format!("bad dimension `{t}`"))))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(MatrixError::Parse(format!("header `{header}` must be `rows cols`")));
        };
        let body: Vec<&str> = parts.filter(|p| !p.is_empty()).collect();
        if body.len() != rows {
            return Err(MatrixError::Parse(format!("expected {rows} rows, found {}", body.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in body.iter().enumerate() {
            let before = data.len();
            for tok in row.split_whitespace() {
                let v = tok
                    .parse::<BigInt>()
                    .map_err(|_| MatrixError::Parse(format!("bad entry `{tok}`")))?;
                data.push(v);
            }
            if data.len() - before != cols {
                return Err(MatrixError::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    data.len() - before
                )));
            }
        }
        IntMatrix::new(rows, cols, data)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str(";")?;
            for x in self.row(i) {
                write!(f, " {x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn l1() -> IntMatrix {
        IntMatrix::from_rows(&[[2, 1], [1, 1]])
    }

    #[test]
    fn powers() {
        assert_eq!(l1().pow(2).unwrap(), IntMatrix::from_rows(&[[5, 3], [3, 2]]));
        assert_eq!(l1().pow(0).unwrap(), IntMatrix::identity(2).unwrap());
        let l3 = IntMatrix::from_rows(&[[4, 3], [1, 1]]);
        assert_eq!(l3.pow(1).unwrap(), l3);
        let rect = IntMatrix::from_rows(&[[1, 2, 3]]);
        assert!(matches!(rect.pow(2), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn determinants() {
        assert_eq!(l1().identity_minus().unwrap().det().unwrap(), big(-1));
        assert_eq!(IntMatrix::identity(3).unwrap().det().unwrap(), big(1));
        let a = l1().pow(2).unwrap().identity_minus().unwrap();
        assert_eq!(a, IntMatrix::from_rows(&[[-4, -3], [-3, -1]]));
        assert_eq!(a.det().unwrap(), big(-5));
        // needs a row swap
        let p = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(p.det().unwrap(), big(-1));
        let sing = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(sing.det().unwrap(), big(0));
        assert!(IntMatrix::from_rows(&[[1, 2]]).det().is_err());
    }

    #[test]
    fn characteristic_polynomials() {
        let lm = IntMatrix::from_rows(&[[3, 2, 2], [1, 1, 0], [1, 1, 1]]);
        assert_eq!(lm.charpoly().unwrap(), IntPolynomial::from_i64(&[-1, 3, -5, 1]));
        assert_eq!(
            IntMatrix::identity(2).unwrap().charpoly().unwrap(),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(l1().charpoly().unwrap(), IntPolynomial::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn smith_forms() {
        let a = IntMatrix::from_rows(&[[-4, -4], [-1, 0]]);
        let s = a.smith_normal_form();
        assert_eq!(s.invariants, vec![big(1), big(4)]);
        assert_eq!(s.rank, 2);
        let id = IntMatrix::identity(4).unwrap().smith_normal_form();
        assert_eq!(id.invariants, vec![big(1); 4]);
        let d = IntMatrix::from_rows(&[[2, 0], [0, 0]]).smith_normal_form();
        assert_eq!(d.invariants, vec![big(2)]);
        assert_eq!(d.rank, 1);
        // diag(2, 3) is not in Smith form; (1, 6) is
        let s = IntMatrix::from_rows(&[[2, 0], [0, 3]]).smith_normal_form();
        assert_eq!(s.invariants, vec![big(1), big(6)]);
        let z = IntMatrix::zeros(2, 3).unwrap().smith_normal_form();
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn lattice_indices() {
        assert_eq!(lattice_index(&IntMatrix::from_rows(&[[7]])), LatticeIndex::Finite(big(7)));
        assert_eq!(
            lattice_index(&IntMatrix::identity(3).unwrap()),
            LatticeIndex::Finite(big(1))
        );
        for m in 1..20 {
            let a = IntMatrix::from_rows(&[[-m, -m, 1], [-1, 0, 0]]);
            assert_eq!(lattice_index(&a), LatticeIndex::Finite(big(1)));
        }
        let degenerate = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(lattice_index(&degenerate), LatticeIndex::Infinite);
    }

    #[test]
    fn literal_round_trip() {
        let m: IntMatrix = "2 2; 1 0; 0 1".parse().unwrap();
        assert_eq!(m, IntMatrix::identity(2).unwrap());
        let r: IntMatrix = "2 3; -1 2 123456789012345678901234567890; 0 0 -7".parse().unwrap();
        assert_eq!(r.to_string().parse::<IntMatrix>().unwrap(), r);
        assert!("2 1 1; 1 0 1".parse::<IntMatrix>().is_err());
        assert!("2 2; 1 0".parse::<IntMatrix>().is_err());
        assert!("1 2; 1 x".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn integral_solve() {
        let psi = IntMatrix::from_rows(&[[1, 1], [1, 0]]);
        assert_eq!(psi.solve_integral(&[big(1), big(0)]).unwrap(), vec![big(0), big(1)]);
        let two = IntMatrix::from_rows(&[[2]]);
        assert_eq!(two.solve_integral(&[big(1)]), Err(MatrixError::NotIntegral));
    }

    #[test]
    fn size_cap() {
        assert!(matches!(IntMatrix::zeros(65, 1), Err(MatrixError::TooLarge { .. })));
        assert_eq!(IntMatrix::zeros(0, 1), Err(MatrixError::Empty));
    }

    fn square(max_n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
                IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    fn square_pair(max_n: usize, bound: i64) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
        (1..=max_n).prop_flat_map(move |n| {
            let one = proptest::collection::vec(-bound..=bound, n * n);
            (one.clone(), one).prop_map(move |(a, b)| {
                (
                    IntMatrix::new(n, n, a.into_iter().map(BigInt::from).collect()).unwrap(),
                    IntMatrix::new(n, n, b.into_iter().map(BigInt::from).collect()).unwrap(),
                )
            })
        })
    }

    /// Cofactor expansion, exponential but independent of Bareiss.
    fn cofactor_det(rows: &[Vec<BigInt>]) -> BigInt {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &rows[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    proptest! {
        #[test]
        fn det_multiplicative((a, b) in square_pair(6, 9)) {
            prop_assert_eq!((&a * &b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn det_matches_cofactor_expansion(a in square(5, 20)) {
            let rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
            prop_assert_eq!(a.det().unwrap(), cofactor_det(&rows));
        }

        #[test]
        fn iterate_factorization(l in square(4, 3), k in 1u64..=6) {
            let lhs = l.pow(k).unwrap().identity_minus().unwrap().det().unwrap();
            let rhs = l.identity_minus().unwrap().det().unwrap() * l.geometric_sum(k).unwrap().det().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn smith_product_is_abs_det(a in square(5, 12)) {
            let d = a.det().unwrap();
            let s = a.smith_normal_form();
            for w in s.invariants.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(s.invariants.iter().all(|x| x.is_positive()));
            if !d.is_zero() {
                prop_assert_eq!(s.rank, a.rows());
                prop_assert_eq!(s.product(), d.abs());
            } else {
                prop_assert!(s.rank < a.rows());
            }
        }

        #[test]
        fn charpoly_endpoints(a in square(6, 9)) {
            let p = a.charpoly().unwrap();
            let n = a.rows();
            prop_assert_eq!(p.degree(), Some(n));
            prop_assert!(p.leading().is_one());
            let sign = if n % 2 == 0 { big(1) } else { big(-1) };
            prop_assert_eq!(p.eval(&big(0)), sign * a.det().unwrap());
            prop_assert_eq!(p.eval(&big(1)), a.identity_minus().unwrap().det().unwrap());
        }

        #[test]
        fn charpoly_matches_pointwise_det(a in square(5, 9), t in -6i64..=6) {
            let n = a.rows();
            let shifted = IntMatrix::identity(n).unwrap().scale(&big(t)).checked_sub(&a).unwrap();
            prop_assert_eq!(a.charpoly().unwrap().eval(&big(t)), shifted.det().unwrap());
        }
    }
}
