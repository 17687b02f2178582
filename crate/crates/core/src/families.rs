//! Parametrized map families whose essential class indices grow without
//! bound in `m`, and the witness/sweep machinery that certifies each member.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactmat::IntMatrix;
use crate::fixtheory::{AffineSelfmap, FixError};
use crate::groups::{pz_presentation, surface_presentation, HomToZn, Presentation};
use crate::polyalg::{vanishes_at, zero_iterates};

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `L_m = [[m+1, m], [1, 1]]`, determinant 1.
pub fn lm_2x2(m: u64) -> Result<IntMatrix, FixError> {
    lm_nxn(2, m)
}

/// First row `(m+1, m, ..., m)`, then row `i` has ones in columns `1..=i`.
/// `det(xI - L_m) = (x - 1)^n - m x^(n-1)` and `det L_m = 1`.
pub fn lm_nxn(n: usize, m: u64) -> Result<IntMatrix, FixError> {
    if n < 2 {
        return Err(FixError::Shape(format!("family matrix needs n >= 2, got {n}")));
    }
    if m == 0 {
        return Err(FixError::Shape("family parameter m must be positive".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    data.push(big(m + 1));
    data.extend((1..n).map(|_| big(m)));
    for i in 1..n {
        data.extend((0..n).map(|j| if j <= i { big(1) } else { big(0) }));
    }
    Ok(IntMatrix::new(n, n, data)?)
}

/// Fiber matrix of the rank-`n` family: `[m+1]` for the circle, `L_m` otherwise.
pub fn fiber_matrix(n: usize, m: u64) -> Result<IntMatrix, FixError> {
    match n {
        0 => Err(FixError::Shape("fiber rank must be positive".into())),
        1 if m == 0 => Err(FixError::Shape("family parameter m must be positive".into())),
        1 => Ok(IntMatrix::new(1, 1, vec![big(m + 1)])?),
        _ => lm_nxn(n, m),
    }
}

/// Base of a witness family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBase {
    /// Closed orientable surface of genus `g >= 2`.
    Surface { genus: u32 },
    /// Paoluzzi-Zimmermann manifold with group `G_{3,1}`; `chi` supplied by the caller.
    Pz { chi: i64 },
}

impl WitnessBase {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessBase::Surface { .. } => "surface",
            WitnessBase::Pz { .. } => "pz",
        }
    }

    pub fn genus_or_label(&self) -> String {
        match self {
            WitnessBase::Surface { genus } => genus.to_string(),
            WitnessBase::Pz { .. } => "G31".to_string(),
        }
    }

    pub fn presentation(&self) -> Result<Presentation, FixError> {
        Ok(match *self {
            WitnessBase::Surface { genus } => surface_presentation(genus)?,
            WitnessBase::Pz { chi } => pz_presentation().with_euler_characteristic(chi),
        })
    }

    /// `rho(a1) = e1` on surfaces; `rho(x0, x1, x2) = (1, 0, -1) e1` on `G_{3,1}`.
    pub fn rho(&self, base: &Presentation, n: usize) -> Result<HomToZn, FixError> {
        Ok(match self {
            WitnessBase::Surface { .. } => HomToZn::on_generator(base, n, 0, 1)?,
            WitnessBase::Pz { .. } => {
                let g = base.generator_count();
                let mut data = vec![BigInt::zero(); n * g];
                data[0] = BigInt::from(1);
                data[2] = BigInt::from(-1);
                HomToZn::new(base, IntMatrix::new(n, g, data)?)?
            }
        })
    }

    pub fn chi(&self) -> i64 {
        match *self {
            WitnessBase::Surface { genus } => 2 - 2 * genus as i64,
            WitnessBase::Pz { chi } => chi,
        }
    }
}

/// The family member `phi(u, s) = (u, rho(u) e1 + L_m s)` over `base`.
pub fn family_map(base: WitnessBase, n: usize, m: u64) -> Result<AffineSelfmap, FixError> {
    let presentation = base.presentation()?;
    let rho = base.rho(&presentation, n)?;
    AffineSelfmap::new(presentation, rho, fiber_matrix(n, m)?)
}

/// Certified essential class index for one family member and iterate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub base: String,
    pub g_or_label: String,
    #[serde(with = "crate::decimal")]
    pub n: usize,
    #[serde(with = "crate::decimal")]
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub k: u64,
    #[serde(with = "crate::decimal")]
    pub chi: i64,
    #[serde(with = "crate::decimal")]
    pub lefschetz: BigInt,
    pub lefschetz_nonzero: bool,
    /// `det(I - L^k) != 0`, decided by cyclotomic divisibility.
    pub valid: bool,
    #[serde(with = "crate::decimal::option")]
    pub projection_index: Option<BigInt>,
    #[serde(with = "crate::decimal::option")]
    pub essential_index: Option<BigInt>,
    /// `m * |chi|`, the claimed index.
    #[serde(with = "crate::decimal")]
    pub claimed_index: BigInt,
    /// Whether the certified essential index reaches `claimed_index`.
    pub bound_met: bool,
}

pub fn witness(base: WitnessBase, n: usize, m: u64, k: u64) -> Result<WitnessReport, FixError> {
    if k == 0 {
        return Err(FixError::ZeroIterate);
    }
    let map = family_map(base, n, m)?;
    let chi = base.chi();
    let valid = !vanishes_at(&zero_iterates(map.fiber())?, k);
    let claimed_index = big(m) * BigInt::from(chi).abs();
    let report = map.full_report(k, chi)?;
    debug_assert_eq!(valid, !report.zero_branch);
    let bound_met = report.essential_index.as_ref().is_some_and(|e| *e >= claimed_index);
    Ok(WitnessReport {
        base: base.label().to_string(),
        g_or_label: base.genus_or_label(),
        n,
        m,
        k,
        chi,
        lefschetz_nonzero: !report.lefschetz.is_zero(),
        lefschetz: report.lefschetz,
        valid,
        projection_index: report.projection_index,
        essential_index: report.essential_index,
        claimed_index,
        bound_met,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    /// One report per `m = 1..=m_max`, in order.
    pub reports: Vec<WitnessReport>,
}

impl Sweep {
    pub fn invalid_count(&self) -> usize {
        self.reports.iter().filter(|r| !r.valid || r.essential_index.is_none()).count()
    }

    /// Essential indices strictly increase along `m` (vacuous for fewer than
    /// two members; false if any member lacks an index).
    pub fn strictly_increasing(&self) -> bool {
        let idx: Option<Vec<&BigInt>> = self.reports.iter().map(|r| r.essential_index.as_ref()).collect();
        match idx {
            Some(v) => v.windows(2).all(|w| w[0] < w[1]),
            None => false,
        }
    }
}

/// Witnesses for `m = 1..=m_max`, evaluated in parallel, ordered by `m`.
pub fn unboundedness_sweep(base: WitnessBase, n: usize, k: u64, m_max: u64) -> Result<Sweep, FixError> {
    let reports = (1..=m_max)
        .into_par_iter()
        .map(|m| witness(base, n, m, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sweep { reports })
}

/// CSV header for sweep rows.
pub const CSV_HEADER: [&str; 9] =
    ["base", "g_or_label", "n", "m", "k", "lefschetz", "projection_index", "essential_index", "valid"];

impl WitnessReport {
    pub fn csv_record(&self) -> [String; 9] {
        let opt = |v: &Option<BigInt>| v.as_ref().map(ToString::to_string).unwrap_or_default();
        [
            self.base.clone(),
            self.g_or_label.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.k.to_string(),
            self.lefschetz.to_string(),
            opt(&self.projection_index),
            opt(&self.essential_index),
            self.valid.to_string(),
        ]
    }

    pub fn essential_index_is_claimed(&self) -> bool {
        self.essential_index.as_ref().is_some_and(|e| *e == self.claimed_index)
    }
}
