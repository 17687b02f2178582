//! Fixed point invariants of fiber-preserving maps of `B x T^n`.
//!
//! On fundamental groups the map is `phi(u, s) = (u, rho(u) + L s)` with `u`
//! in the base group `Gamma` and `s` in `Z^n`. Iterating gives
//!
//! ```text
//! phi^k(u, s) = (u, (I + L + ... + L^(k-1)) rho(u) + L^k s)
//! ```
//!
//! so `fix(phi^k) = {(u, s) : (I - L^k) s = rho_k(u)}` and its projection to
//! `Gamma` is the kernel of `u -> rho_k(u) mod (I - L^k) Z^n`. The index of
//! that kernel times `|chi(B)|` is the index of the essential fixed point class.
//!
//! Elements of `Gamma` only enter through abelianized exponent vectors; the
//! conjugation machinery (`psi = L - I`, `Gamma'`, `theta`, `h`) is written
//! additively.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmat::{lattice_index, IntMatrix, MatrixError};
use crate::groups::{BaseKind, GroupError, HomToZn, Presentation};
use crate::polyalg::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("iterate k must be positive")]
    ZeroIterate,
    #[error("det(I - L^{k}) = 0: L^{k} has eigenvalue 1, so the Nielsen-zero branch applies")]
    ZeroBranch { k: u64 },
    #[error("det(I - L^{k}) != 0: the Nielsen-zero branch does not apply")]
    NotZeroBranch { k: u64 },
    #[error("Lefschetz number of f^{k} is zero: no essential fixed point class is guaranteed")]
    NoEssentialClass { k: u64 },
    #[error("det(L - I) = 0: fix(L) is nontrivial, so psi = L - I is not injective")]
    FixedSubgroupNontrivial,
    #[error("element is not in Gamma' (rho(u) is not in (L - I) Z^n)")]
    NotInGammaPrime,
    #[error("Euler characteristic of the base is unknown; supply it explicitly")]
    MissingEulerCharacteristic,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl FixError {
    /// Violated mathematical precondition, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            FixError::ZeroIterate
                | FixError::ZeroBranch { .. }
                | FixError::NotZeroBranch { .. }
                | FixError::NoEssentialClass { .. }
                | FixError::FixedSubgroupNontrivial
                | FixError::NotInGammaPrime
                | FixError::MissingEulerCharacteristic
        )
    }
}

fn check_k(k: u64) -> Result<(), FixError> {
    if k == 0 {
        Err(FixError::ZeroIterate)
    } else {
        Ok(())
    }
}

/// Lefschetz number of the torus map induced by `L^k`: `det(I - L^k)`.
pub fn torus_lefschetz(l: &IntMatrix, k: u64) -> Result<BigInt, FixError> {
    check_k(k)?;
    Ok(l.pow(k)?.identity_minus()?.det()?)
}

/// Tori are Jiang spaces, so `Nie = |Lef|`.
pub fn torus_nielsen(l: &IntMatrix, k: u64) -> Result<BigInt, FixError> {
    Ok(torus_lefschetz(l, k)?.abs())
}

/// `Lef(f^k) = det(I - L^k) * chi(B)` when `f` covers the identity of `B`.
pub fn bundle_lefschetz(l: &IntMatrix, k: u64, chi: i64) -> Result<BigInt, FixError> {
    Ok(torus_lefschetz(l, k)? * chi)
}

/// `psi = L - I`, the additive form of `g -> L(g) g^-1`.
pub fn psi_matrix(l: &IntMatrix) -> Result<IntMatrix, FixError> {
    Ok(-&l.identity_minus()?)
}

/// Fiber-preserving selfmap of `B x T^n` covering the identity of `B`:
/// `phi(u, s) = (u, rho(u) + L s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSelfmap {
    base: Presentation,
    rho: HomToZn,
    fiber: IntMatrix,
}

impl AffineSelfmap {
    pub fn new(base: Presentation, rho: HomToZn, fiber: IntMatrix) -> Result<Self, FixError> {
        if !fiber.is_square() {
            return Err(MatrixError::NotSquare { rows: fiber.rows(), cols: fiber.cols() }.into());
        }
        if rho.target_rank() != fiber.rows() {
            return Err(FixError::Shape(format!(
                "rho targets Z^{} but L is {}x{}",
                rho.target_rank(),
                fiber.rows(),
                fiber.cols()
            )));
        }
        if rho.matrix().cols() != base.generator_count() {
            return Err(GroupError::ShapeMismatch {
                expected: base.generator_count(),
                got: rho.matrix().cols(),
            }
            .into());
        }
        Ok(AffineSelfmap { base, rho, fiber })
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn rho(&self) -> &HomToZn {
        &self.rho
    }

    pub fn fiber(&self) -> &IntMatrix {
        &self.fiber
    }

    pub fn fiber_rank(&self) -> usize {
        self.fiber.rows()
    }

    /// `rho_k = (I + L + ... + L^(k-1)) R`.
    pub fn rho_iterate(&self, k: u64) -> Result<IntMatrix, FixError> {
        check_k(k)?;
        Ok(self.fiber.geometric_sum(k)?.checked_mul(self.rho.matrix())?)
    }

    /// `[Gamma : p(fix phi^k)]`, the order of the image of `rho_k` in
    /// `Z^n / (I - L^k) Z^n`, computed as `|det A_k| / [Z^n : span(A_k | rho_k)]`.
    pub fn fixed_projection_index(&self, k: u64) -> Result<BigInt, FixError> {
        check_k(k)?;
        let a = self.fiber.pow(k)?.identity_minus()?;
        let d = a.det()?;
        if d.is_zero() {
            return Err(FixError::ZeroBranch { k });
        }
        quotient_image_order(&a, &d, &self.rho_iterate(k)?)
    }

    /// `|ind(f^k, F)| = [Gamma : p(fix phi^k)] * |chi|` for the essential
    /// class `F` guaranteed by a nonzero Lefschetz number.
    pub fn essential_class_index(&self, k: u64, chi: i64) -> Result<BigInt, FixError> {
        if bundle_lefschetz(&self.fiber, k, chi)?.is_zero() {
            if torus_lefschetz(&self.fiber, k)?.is_zero() {
                return Err(FixError::ZeroBranch { k });
            }
            return Err(FixError::NoEssentialClass { k });
        }
        Ok(self.fixed_projection_index(k)? * BigInt::from(chi).abs())
    }

    /// Report for `det(I - L^k) = 0`: `f^k` deforms to a fixed point free map.
    pub fn nielsen_zero_branch(&self, k: u64) -> Result<InvariantReport, FixError> {
        if !torus_lefschetz(&self.fiber, k)?.is_zero() {
            return Err(FixError::NotZeroBranch { k });
        }
        Ok(InvariantReport {
            k,
            lefschetz: BigInt::zero(),
            nielsen: Some(BigInt::zero()),
            min_fixed: Some(BigInt::zero()),
            projection_index: None,
            essential_index: None,
            zero_branch: true,
        })
    }

    pub fn psi(&self) -> Result<IntMatrix, FixError> {
        psi_matrix(&self.fiber)
    }

    fn injective_psi(&self) -> Result<(IntMatrix, BigInt), FixError> {
        let psi = self.psi()?;
        let d = psi.det()?;
        if d.is_zero() {
            return Err(FixError::FixedSubgroupNontrivial);
        }
        Ok((psi, d))
    }

    /// `[Gamma : Gamma']` with `Gamma' = rho^-1(psi(Z^n))`, i.e. the order of
    /// the image of `R` in `Z^n / (L - I) Z^n`. Bounded by `|det(L - I)|`.
    pub fn gamma_prime_index(&self) -> Result<BigInt, FixError> {
        let (psi, d) = self.injective_psi()?;
        quotient_image_order(&psi, &d, self.rho.matrix())
    }

    /// Whether the abelianized element `u` lies in `Gamma'`.
    pub fn in_gamma_prime(&self, u: &[BigInt]) -> Result<bool, FixError> {
        match self.theta_vector(u) {
            Ok(_) => Ok(true),
            Err(FixError::NotInGammaPrime) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `theta(u) = psi^-1(rho(u))`: the integer `x` with `(L - I) x = R u`.
    pub fn theta_vector(&self, u: &[BigInt]) -> Result<Vec<BigInt>, FixError> {
        let (psi, _) = self.injective_psi()?;
        let image = self.rho.apply(u)?;
        match psi.solve_integral(&image) {
            Ok(x) => Ok(x),
            Err(MatrixError::NotIntegral) => Err(FixError::NotInGammaPrime),
            Err(e) => Err(e.into()),
        }
    }

    /// Checks `h o phi o h^-1 = id x L` on `Gamma' x Z^n` at every sample,
    /// where `h(u, s) = (u, theta(u) + s)`.
    pub fn conjugation_check(&self, samples: &[(Vec<BigInt>, Vec<BigInt>)]) -> Result<bool, FixError> {
        self.conjugation_check_with(samples, |u| self.theta_vector(u))
    }

    /// Same as [`conjugation_check`](Self::conjugation_check) but with a
    /// caller-supplied `theta`.
    pub fn conjugation_check_with<F>(&self, samples: &[(Vec<BigInt>, Vec<BigInt>)], theta: F) -> Result<bool, FixError>
    where
        F: Fn(&[BigInt]) -> Result<Vec<BigInt>, FixError>,
    {
        self.injective_psi()?;
        let n = self.fiber_rank();
        for (u, s) in samples {
            if s.len() != n {
                return Err(FixError::Shape(format!("fiber sample of length {} for Z^{n}", s.len())));
            }
            if !self.in_gamma_prime(u)? {
                return Err(FixError::NotInGammaPrime);
            }
            let t = theta(u)?;
            let rho_u = self.rho.apply(u)?;
            // h^-1(u, s) = (u, s - theta(u))
            let s1: Vec<BigInt> = s.iter().zip(&t).map(|(a, b)| a - b).collect();
            // phi(u, s1) = (u, rho(u) + L s1)
            let ls1 = self.fiber.mul_vec(&s1)?;
            let s2: Vec<BigInt> = rho_u.iter().zip(&ls1).map(|(a, b)| a + b).collect();
            // h(u, s2) = (u, theta(u) + s2)
            let s3: Vec<BigInt> = t.iter().zip(&s2).map(|(a, b)| a + b).collect();
            if s3 != self.fiber.mul_vec(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Random `(u, s)` with `u` in abelianized `Gamma'` and `s` in `Z^n`.
    /// `u` is a random vector scaled by `[Gamma : Gamma']`, which kills the
    /// finite abelian quotient `Gamma / Gamma'`.
    pub fn sample_gamma_prime<R: Rng>(
        &self,
        rng: &mut R,
        count: usize,
        bound: i64,
    ) -> Result<Vec<(Vec<BigInt>, Vec<BigInt>)>, FixError> {
        let index = self.gamma_prime_index()?;
        let g = self.base.generator_count();
        let n = self.fiber_rank();
        Ok((0..count)
            .map(|_| {
                let u = (0..g).map(|_| BigInt::from(rng.gen_range(-bound..=bound)) * &index).collect();
                let s = (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
                (u, s)
            })
            .collect())
    }

    /// Euler characteristic recorded on the base presentation.
    pub fn chi(&self) -> Result<i64, FixError> {
        self.base.euler_characteristic().ok_or(FixError::MissingEulerCharacteristic)
    }

    /// All invariants of `f^k` that can be certified.
    ///
    /// When `det(I - L^k) = 0` this is the zero-branch report. Otherwise the
    /// Lefschetz number and projection index are always filled in, the
    /// essential index whenever the Lefschetz number is nonzero, and the
    /// Nielsen number only for torus bases, where the total space is itself a
    /// torus and `Nie = |Lef|`. `min_fixed` mirrors `nielsen`.
    pub fn full_report(&self, k: u64, chi: i64) -> Result<InvariantReport, FixError> {
        let det = torus_lefschetz(&self.fiber, k)?;
        if det.is_zero() {
            return self.nielsen_zero_branch(k);
        }
        let lefschetz = &det * chi;
        let projection_index = self.fixed_projection_index(k)?;
        let essential_index =
            (!lefschetz.is_zero()).then(|| &projection_index * BigInt::from(chi).abs());
        let nielsen = matches!(self.base.kind(), BaseKind::Torus { .. }).then(|| lefschetz.abs());
        Ok(InvariantReport {
            k,
            min_fixed: nielsen.clone(),
            nielsen,
            lefschetz,
            projection_index: Some(projection_index),
            essential_index,
            zero_branch: false,
        })
    }
}

/// Order of the subgroup generated by the columns of `gens` in `Z^n / a Z^n`,
/// for square `a` with nonzero determinant `det_a`.
fn quotient_image_order(a: &IntMatrix, det_a: &BigInt, gens: &IntMatrix) -> Result<BigInt, FixError> {
    let span = lattice_index(&a.hcat(gens)?)
        .finite()
        .expect("a nonsingular block keeps the span full rank");
    Ok(det_a.abs() / span)
}

/// Invariants of one iterate `f^k`. Absent fields were not certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    #[serde(with = "crate::decimal")]
    pub k: u64,
    #[serde(with = "crate::decimal")]
    pub lefschetz: BigInt,
    #[serde(with = "crate::decimal::option")]
    pub nielsen: Option<BigInt>,
    #[serde(with = "crate::decimal::option")]
    pub min_fixed: Option<BigInt>,
    #[serde(with = "crate::decimal::option")]
    pub projection_index: Option<BigInt>,
    #[serde(with = "crate::decimal::option")]
    pub essential_index: Option<BigInt>,
    pub zero_branch: bool,
}
