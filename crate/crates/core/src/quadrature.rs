//! Double-exponential quadrature on product domains.
//!
//! One-dimensional rules: exp-sinh on `(0, ∞)` and sinh-sinh on `ℝ`,
//! combined as tensor grids for up to three variables (enough for the
//! lower-triangular Cholesky coordinates of a 2×2 positive definite
//! matrix). Refinement halves the step until the vector value is stable;
//! integrands may be vector-valued so that operator entries share one
//! grid.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Domain of a single integration variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `(0, ∞)` via `x = exp((π/2)·sinh t)`
    HalfLine,
    /// `ℝ` via `x = sinh((π/2)·sinh t)`
    RealLine,
}

const T_MAX: f64 = 3.5;

fn axis_nodes(axis: Axis, h: f64) -> Vec<(f64, f64)> {
    let half = std::f64::consts::FRAC_PI_2;
    let steps = (T_MAX / h).floor() as i64;
    let mut out = Vec::with_capacity((2 * steps + 1) as usize);
    for i in -steps..=steps {
        let t = i as f64 * h;
        let sh = half * t.sinh();
        let ch = half * t.cosh();
        match axis {
            Axis::HalfLine => {
                let x = sh.exp();
                let w = x * ch * h;
                if w.is_finite() && w > 1e-300 {
                    out.push((x, w));
                }
            }
            Axis::RealLine => {
                let x = sh.sinh();
                let w = ch * sh.cosh() * h;
                if w.is_finite() && w > 1e-300 {
                    out.push((x, w));
                }
            }
        }
    }
    out
}

/// Converged value together with refinement diagnostics.
#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: Vec<Complex64>,
    pub levels_used: u32,
    pub last_delta: f64,
}

fn grid_sum(
    axes: &[Axis],
    h: f64,
    out_dim: usize,
    f: &mut dyn FnMut(&[f64]) -> Vec<Complex64>,
) -> Vec<Complex64> {
    let per_axis: Vec<Vec<(f64, f64)>> = axes.iter().map(|a| axis_nodes(*a, h)).collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); out_dim];
    let mut point = vec![0.0f64; axes.len()];
    fn recurse(
        per_axis: &[Vec<(f64, f64)>],
        depth: usize,
        weight: f64,
        point: &mut Vec<f64>,
        acc: &mut [Complex64],
        f: &mut dyn FnMut(&[f64]) -> Vec<Complex64>,
    ) {
        if depth == per_axis.len() {
            let v = f(point);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x * weight;
            }
            return;
        }
        for &(x, w) in &per_axis[depth] {
            point[depth] = x;
            recurse(per_axis, depth + 1, weight * w, point, acc, f);
        }
    }
    recurse(&per_axis, 0, 1.0, &mut point, &mut acc, f);
    acc
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Integrates a vector-valued function over the product of the given
/// axes, halving the step until two consecutive refinements agree to
/// `tol` relative in Euclidean norm.
pub fn integrate_vec(
    axes: &[Axis],
    out_dim: usize,
    tol: f64,
    max_level: u32,
    f: &mut dyn FnMut(&[f64]) -> Vec<Complex64>,
) -> Result<QuadratureResult> {
    if axes.is_empty() || axes.len() > 3 {
        return Err(Error::domain("quadrature supports 1 to 3 variables"));
    }
    let mut h = 0.5;
    let mut prev = grid_sum(axes, h, out_dim, f);
    let mut last_delta = f64::INFINITY;
    for level in 1..=max_level {
        h /= 2.0;
        let cur = grid_sum(axes, h, out_dim, f);
        let diff: Vec<Complex64> = cur.iter().zip(&prev).map(|(a, b)| a - b).collect();
        last_delta = vec_norm(&diff) / vec_norm(&cur).max(1e-300);
        if last_delta <= tol {
            return Ok(QuadratureResult {
                value: cur,
                levels_used: level,
                last_delta,
            });
        }
        prev = cur;
    }
    Err(Error::domain(format!(
        "quadrature did not converge: relative change {last_delta:.3e} after {max_level} refinements"
    )))
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate(
    axes: &[Axis],
    tol: f64,
    max_level: u32,
    f: &mut dyn FnMut(&[f64]) -> Complex64,
) -> Result<Complex64> {
    let r = integrate_vec(axes, 1, tol, max_level, &mut |x| vec![f(x)])?;
    Ok(r.value[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::complex_gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_line_exponential_moments() {
        let v = integrate(&[Axis::HalfLine], 1e-10, 10, &mut |x| c((-x[0]).exp(), 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-9);
        let v3 = integrate(&[Axis::HalfLine], 1e-10, 10, &mut |x| {
            c(x[0].powi(3) * (-x[0]).exp(), 0.0)
        })
        .unwrap();
        assert!((v3.re - 6.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_integrals() {
        let pi = std::f64::consts::PI;
        let half = integrate(&[Axis::HalfLine], 1e-10, 10, &mut |x| {
            c((-x[0] * x[0]).exp(), 0.0)
        })
        .unwrap();
        assert!((half.re - pi.sqrt() / 2.0).abs() < 1e-9);
        let full = integrate(&[Axis::RealLine], 1e-10, 10, &mut |x| {
            c((-x[0] * x[0]).exp(), 0.0)
        })
        .unwrap();
        assert!((full.re - pi.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn complex_gamma_integral() {
        let s = c(2.3, 0.7);
        let v = integrate(&[Axis::HalfLine], 1e-10, 10, &mut |x| {
            let x = x[0];
            ((s - c(1.0, 0.0)) * x.ln()).exp() * (-x).exp()
        })
        .unwrap();
        let expect = complex_gamma(s).unwrap();
        assert!((v - expect).norm() < 1e-8 * expect.norm());
    }

    #[test]
    fn product_grids() {
        let pi = std::f64::consts::PI;
        let v2 = integrate(&[Axis::HalfLine, Axis::HalfLine], 1e-9, 8, &mut |x| {
            c(x[0] * x[1] * (-x[0] - x[1]).exp(), 0.0)
        })
        .unwrap();
        assert!((v2.re - 1.0).abs() < 1e-7);
        let v3 = integrate(
            &[Axis::HalfLine, Axis::RealLine, Axis::HalfLine],
            1e-8,
            6,
            &mut |x| c((-x[0] * x[0] - x[1] * x[1] - x[2] * x[2]).exp(), 0.0),
        )
        .unwrap();
        assert!((v3.re - pi.powf(1.5) / 4.0).abs() < 1e-6);
    }

    #[test]
    fn vector_integrand_shares_grid() {
        let r = integrate_vec(&[Axis::HalfLine], 2, 1e-10, 10, &mut |x| {
            vec![c((-x[0]).exp(), 0.0), c(x[0] * (-x[0]).exp(), 0.0)]
        })
        .unwrap();
        assert!((r.value[0].re - 1.0).abs() < 1e-9);
        assert!((r.value[1].re - 1.0).abs() < 1e-9);
        assert!(r.last_delta <= 1e-10);
    }

    #[test]
    fn guards() {
        assert!(integrate(&[], 1e-9, 8, &mut |_| c(1.0, 0.0)).is_err());
        let four = [Axis::HalfLine; 4];
        assert!(integrate(&four, 1e-9, 8, &mut |_| c(1.0, 0.0)).is_err());
        let r = integrate(&[Axis::HalfLine], 0.0, 2, &mut |x| c((-x[0]).exp(), 0.0));
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
