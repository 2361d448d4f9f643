//! Computable kernels for vector-valued Siegel modular forms.
//!
//! The crate is organized around the pipeline
//!
//! * [`exactmath`] — exact rationals, cyclotomic numbers, quadratic-form
//!   utilities (reduction, automorphisms, lattice solutions);
//! * [`chars`] — Dirichlet characters with exact root-of-unity values and
//!   truncated L-values;
//! * [`weights`] — dominant weights for `GL_n` / `O_n` and the
//!   Kashiwara–Vergne weight correspondence;
//! * [`pluriharm`] — exact polynomials on `M_n`, the pluriharmonic
//!   Laplacians, and highest-weight generators;
//! * [`gauss`] — generalized quadratic Gauss sums and exhaustive vanishing
//!   certificates;
//! * [`theta`] — theta series: level ideals, Fourier coefficients,
//!   truncated evaluation, cusp-support reports;
//! * [`cusps`] — double-coset representatives of symplectic groups over
//!   finite fields;
//! * [`analytic`] — Gamma factors, Λ-products, Euler factors, pole
//!   prediction;
//! * [`rankin`] — the Rankin product, the Hermitian operator `H_{ρ,R}(s)`
//!   by quadrature, and the unfolding identity checks.

pub mod acceptance;
pub mod analytic;
pub mod chars;
pub mod cusps;
pub mod error;
pub mod exactmath;
pub mod gauss;
pub mod pluriharm;
pub mod quadrature;
pub mod rankin;
pub mod theta;
pub mod weights;

pub use error::{Error, Result};
