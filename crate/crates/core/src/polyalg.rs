//! Integer polynomials and root-of-unity detection.
//!
//! An integer matrix `L` satisfies `det(I - L^k) = 0` exactly when some
//! eigenvalue is a k-th root of unity, i.e. when a cyclotomic factor
//! `Phi_d` with `d | k` divides the characteristic polynomial. Only finitely
//! many `d` can occur: `Phi_d` has degree `totient(d)`, and since
//! `totient(d) >= sqrt(d / 2)` for every `d >= 1`, a factor of a degree-`n`
//! polynomial forces `d <= 2 n^2`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmat::{IntMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("cyclotomic index must be positive")]
    ZeroIndex,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Polynomial with integer coefficients, lowest degree first. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::from_i64(&[1])
    }

    /// `c * x^d`.
    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c;
        IntPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        (0..e).fold(IntPolynomial::one(), |acc, _| acc.mul(self))
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPolynomial::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, computed in Z[x].
    pub fn pseudo_rem(&self, b: &IntPolynomial) -> IntPolynomial {
        let db = b.degree().expect("pseudo-remainder by the zero polynomial");
        let lb = b.leading();
        let mut r = self.clone();
        let mut steps = match self.degree() {
            Some(da) if da >= db => da - db + 1,
            _ => return r,
        };
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            let shifted = IntPolynomial::monomial(lr, dr - db).mul(b);
            r = r.scale(&lb).sub(&shifted);
            steps -= 1;
        }
        r.scale(&num_traits::pow(lb, steps))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self` in Z[x].
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = d.degree()?;
        let ld = d.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (c, rem) = r.leading().div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            q[dr - dd] = c.clone();
            r = r.sub(&IntPolynomial::monomial(c, dr - dd).mul(d));
        }
        Some(IntPolynomial::new(q))
    }

    /// True when `self` divides `p` in Z[x].
    pub fn divides(&self, p: &IntPolynomial) -> bool {
        p.div_exact(self).is_some()
    }
}

/// Primitive gcd with positive leading coefficient, by primitive
/// pseudo-remainder sequences.
pub fn poly_gcd(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut a, mut b) = if p.degree() >= q.degree() {
        (p.primitive_part(), q.primitive_part())
    } else {
        (q.primitive_part(), p.primitive_part())
    };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).primitive_part();
        a = b;
        b = r;
    }
    Ok(a)
}

/// The d-th cyclotomic polynomial, as `(x^d - 1) / prod_{e | d, e < d} Phi_e`.
pub fn cyclotomic(d: u64) -> Result<IntPolynomial, PolyError> {
    if d == 0 {
        return Err(PolyError::ZeroIndex);
    }
    let mut table: Vec<IntPolynomial> = vec![IntPolynomial::zero(); d as usize + 1];
    for n in 1..=d as usize {
        if !(d as usize).is_multiple_of(n) {
            continue;
        }
        let mut p = IntPolynomial::monomial(BigInt::one(), n).sub(&IntPolynomial::one());
        for e in 1..n {
            if n % e == 0 {
                p = p.div_exact(&table[e]).expect("cyclotomic factors divide x^n - 1");
            }
        }
        table[n] = p;
    }
    Ok(table.swap_remove(d as usize))
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Every `d` with `Phi_d | charpoly(L)`. Then `det(I - L^k) = 0` iff some
/// returned `d` divides `k`; an empty set means `I - L^k` is nonsingular for
/// every `k >= 1`.
pub fn zero_iterates(l: &IntMatrix) -> Result<BTreeSet<u64>, PolyError> {
    let p = l.charpoly()?;
    let n = l.rows() as u64;
    Ok((1..=2 * n * n)
        .filter(|&d| totient(d) <= n)
        .filter(|&d| cyclotomic(d).map(|phi| phi.divides(&p)).unwrap_or(false))
        .collect())
}

/// True when `det(I - L^k) = 0` according to the cyclotomic factors `ds`.
pub fn vanishes_at(ds: &BTreeSet<u64>, k: u64) -> bool {
    ds.iter().any(|d| k.is_multiple_of(*d))
}

/// Writes `c0 + c1*x + c2*x^2 ...`, skipping zero terms and folding signs.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*x")?,
                _ => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}
