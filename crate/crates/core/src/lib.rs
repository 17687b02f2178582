//! Exact fixed point theory for fiber-preserving selfmaps of
//! (aspherical base) x (torus).
//!
//! The maps are described on fundamental groups by
//! `phi(u, s) = (u, rho(u) + L s)` with `rho` a homomorphism from the base
//! group to `Z^n` and `L` an integer matrix. From this data the crate
//! computes Lefschetz numbers of iterates, the index of the projected fixed
//! subgroup, the index of the essential fixed point class, and the
//! conjugation that splits the map on a finite-index subgroup. All arithmetic
//! is exact over arbitrary-precision integers.

pub mod cli;
mod decimal;
pub mod exactmat;
pub mod families;
pub mod fixtheory;
pub mod groups;
pub mod polyalg;

pub use exactmat::{lattice_index, IntMatrix, LatticeIndex, MatrixError, SmithForm};
pub use families::{lm_2x2, lm_nxn, unboundedness_sweep, witness, WitnessBase, WitnessReport};
pub use fixtheory::{AffineSelfmap, FixError, InvariantReport};
pub use groups::{pz_presentation, surface_presentation, HomToZn, Presentation, Word};
pub use polyalg::{cyclotomic, poly_gcd, zero_iterates, IntPolynomial};
