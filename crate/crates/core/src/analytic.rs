//! Closed-form analytic factors: the Siegel Gamma function Γ_n, the
//! archimedean product Γ_ρ(s), the piecewise factor Γ^{k,n}(s), Λ-products
//! of Dirichlet L-values, Euler factors of the standard L-function, its
//! truncated Euler product, and the pole-location predictor for the
//! completed function Z(s).

use crate::chars::{dirichlet_l, DirichletCharacter};
use crate::error::{Error, Result};
use crate::weights::GLWeight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An element of ½ℤ, stored as twice its value so that case splits on
/// integrality are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    /// `[x]`, the floor.
    pub fn floor(&self) -> i64 {
        self.twice.div_euclid(2)
    }

    pub fn as_f64(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn add(&self, other: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + other.twice,
        }
    }

    pub fn sub(&self, other: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - other.twice,
        }
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_gamma_pole(z: Complex64) -> bool {
    z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12 && z.re.round() <= 0.0
}

/// Γ(z) by the Lanczos approximation (g = 7, 9 coefficients), with the
/// reflection formula for Re(z) < ½. Signals an error at the poles
/// z = 0, −1, −2, … with the residue direction (−1)^m/m!.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        let m = (-z.re.round()) as i64;
        let sign = if m % 2 == 0 { "+" } else { "−" };
        return Err(Error::Pole(format!(
            "Γ has a simple pole at z = {} with residue {}1/{}!",
            z.re.round(),
            sign,
            m
        )));
    }
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π/sin(πz)
        let pi = std::f64::consts::PI;
        let s = (Complex64::new(pi, 0.0) * z).sin();
        return Ok(Complex64::new(pi, 0.0) / (s * complex_gamma(Complex64::new(1.0, 0.0) - z)?));
    }
    let z = z - Complex64::new(1.0, 0.0);
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += Complex64::new(c, 0.0) / (z + Complex64::new(i as f64, 0.0));
    }
    let t = z + Complex64::new(LANCZOS_G + 0.5, 0.0);
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    Ok(Complex64::new(sqrt_two_pi, 0.0) * t.powc(z + Complex64::new(0.5, 0.0)) * (-t).exp() * x)
}

/// Siegel's Gamma function
/// `Γ_n(s) = π^{n(n−1)/4}·Π_{j=0}^{n−1} Γ(s − j/2)`; Γ_0 ≡ 1.
pub fn siegel_gamma(n: usize, s: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(
        std::f64::consts::PI.powf(n as f64 * (n as f64 - 1.0) / 4.0),
        0.0,
    );
    for j in 0..n {
        let arg = s - Complex64::new(j as f64 / 2.0, 0.0);
        let factor = complex_gamma(arg).map_err(|e| {
            Error::Pole(format!("Γ_{n}(s): factor Γ(s − {j}/2): {e}"))
        })?;
        acc *= factor;
    }
    Ok(acc)
}

/// `Γ_ρ(s) = π^{n(n−1)/4}·Π_{i=1}^n Γ(s + h + λ_i − i/2 + 1/2)` for a
/// dominant weight ρ = (λ_1, …, λ_n) and the half-integral shift h.
pub fn gamma_rho(rho: &GLWeight, h: HalfInt, s: Complex64) -> Result<Complex64> {
    let n = rho.n;
    let mut acc = Complex64::new(
        std::f64::consts::PI.powf(n as f64 * (n as f64 - 1.0) / 4.0),
        0.0,
    );
    for (i, &lam) in rho.entries.iter().enumerate() {
        let shift = h.as_f64() + lam as f64 - (i as f64 + 1.0) / 2.0 + 0.5;
        acc *= complex_gamma(s + Complex64::new(shift, 0.0))?;
    }
    Ok(acc)
}

/// The piecewise archimedean factor Γ^{k,n}(s), defined for `k ≥ n/2`
/// (strictly if `k − n/2 ∉ ℤ`), with `n̄ = n mod 2`:
///
/// - `n < k ∉ ℤ`: `Γ_n(s + (k−n)/2)`
/// - `n < k ∈ ℤ`: `Γ(s + (k−n−n̄)/2 − [(k−n̄)/2])·Γ_n(s + (k−n)/2)`
/// - `k ≤ n, k−n/2 ∈ ℤ`: `Γ_{2k−n+1}(s + (k−n)/2)·Π_{i=k−n/2+1}^{[n/2]} Γ(2s − n/2 − i)`
/// - `k ≤ n, k−n/2 ∉ ℤ`: `Γ_{2k−n+1}(s + (k−n)/2)·Π_{i=[k−n/2]+1}^{[(n−1)/2]} Γ(2s − (n+1)/2 − i)`
pub fn gamma_kn(k: HalfInt, n: usize, s: Complex64) -> Result<Complex64> {
    let ni = n as i64;
    let k_minus_half_n = HalfInt::from_twice(k.twice() - ni);
    if k.twice() < ni || (k.twice() == ni && !k_minus_half_n.is_integer()) {
        return Err(Error::domain(format!(
            "Γ^(k,n) requires k ≥ n/2 (strict for half-integral k − n/2); got k = {k}, n = {n}"
        )));
    }
    let n_bar = (n % 2) as i64;
    let shift = (k.as_f64() - n as f64) / 2.0;
    if k.twice() > 2 * ni {
        // k > n
        let base = siegel_gamma(n, s + Complex64::new(shift, 0.0))?;
        if k.is_integer() {
            let kk = k.twice() / 2;
            let extra_shift = (kk - ni - n_bar) as f64 / 2.0 - ((kk - n_bar) as f64 / 2.0).floor();
            Ok(complex_gamma(s + Complex64::new(extra_shift, 0.0))? * base)
        } else {
            Ok(base)
        }
    } else {
        // n/2 ≤ k ≤ n
        let deg = (k.twice() - ni + 1) as usize;
        let base = siegel_gamma(deg, s + Complex64::new(shift, 0.0))?;
        let two_s = s * 2.0;
        let mut acc = base;
        if k_minus_half_n.is_integer() {
            let start = k_minus_half_n.twice() / 2 + 1;
            let end = ni / 2;
            for i in start..=end {
                acc *= complex_gamma(two_s - Complex64::new(ni as f64 / 2.0 + i as f64, 0.0))?;
            }
        } else {
            let start = k_minus_half_n.floor() + 1;
            let end = (ni - 1) / 2;
            for i in start..=end {
                acc *= complex_gamma(
                    two_s - Complex64::new((ni as f64 + 1.0) / 2.0 + i as f64, 0.0),
                )?;
            }
        }
        Ok(acc)
    }
}

/// Value of a Λ-product together with an honest truncation tail bound.
#[derive(Clone, Copy, Debug)]
pub struct LambdaValue {
    pub value: Complex64,
    pub tail: f64,
}

/// `Λ_𝔵^{m,κ}(s, η)`: `L_𝔵(2s, η)·Π_{i=1}^{[m/2]} L_𝔵(4s−2i, η²)` when
/// κ ∈ ℤ, and `Π_{i=1}^{[(m+1)/2]} L_𝔵(4s−2i+1, η²)` otherwise, with the
/// Euler factors at primes dividing 𝔵 removed.
pub fn lambda_factor(
    m: usize,
    kappa: HalfInt,
    x_ideal: u64,
    eta: &DirichletCharacter,
    s: Complex64,
    p_max: u64,
) -> Result<LambdaValue> {
    if m == 0 {
        return Err(Error::domain("Λ requires m ≥ 1"));
    }
    let skip: Vec<u64> = (2..=x_ideal).filter(|d| x_ideal % d == 0 && is_prime_u64(*d)).collect();
    let eta2 = eta.pow(2);
    let mut value = Complex64::new(1.0, 0.0);
    let mut rel_tail = 0.0;
    let mut push = |arg: Complex64, chr: &DirichletCharacter| -> Result<()> {
        let (v, t) = dirichlet_l(arg, chr, p_max, &skip)?;
        value *= v;
        rel_tail += if v.norm() > 0.0 { t / v.norm() } else { 0.0 };
        Ok(())
    };
    if kappa.is_integer() {
        push(s * 2.0, eta)?;
        for i in 1..=(m / 2) as i64 {
            push(s * 4.0 - Complex64::new(2.0 * i as f64, 0.0), &eta2)?;
        }
    } else {
        for i in 1..=((m + 1) / 2) as i64 {
            push(s * 4.0 - Complex64::new(2.0 * i as f64 - 1.0, 0.0), &eta2)?;
        }
    }
    let tail = value.norm() * rel_tail;
    Ok(LambdaValue { value, tail })
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Satake parameters of a Hecke eigenform: per-prime lists λ_{p,1..n},
/// the weight, the level ideal and the nebentype.
#[derive(Clone, Debug)]
pub struct SatakeData {
    pub n: usize,
    pub k: HalfInt,
    /// ascending primes with their parameter lists
    pub params: Vec<(u64, Vec<Complex64>)>,
    pub level: u64,
    pub psi: DirichletCharacter,
}

impl SatakeData {
    pub fn validate(&self) -> Result<()> {
        for (i, (p, lams)) in self.params.iter().enumerate() {
            if !is_prime_u64(*p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            if self.params[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::domain("repeated prime in Satake data"));
            }
            if lams.len() != self.n {
                return Err(Error::domain("parameter list length must equal n"));
            }
            if lams.iter().any(|l| l.norm_sqr() == 0.0) {
                return Err(Error::domain("Satake parameters must be nonzero"));
            }
        }
        Ok(())
    }

    fn params_for(&self, p: u64) -> Result<&[Complex64]> {
        self.params
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, l)| l.as_slice())
            .ok_or_else(|| Error::domain(format!("no Satake parameters supplied for p = {p}")))
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Euler factor `L_p(t)` as ascending coefficients. Degree `2n+1` for
/// good p and integral k, `2n` for good p and half-integral k, `n` when
/// p divides the level; constant term always 1.
pub fn euler_factor(p: u64, data: &SatakeData, at_level: bool) -> Result<Vec<Complex64>> {
    data.validate()?;
    let lams = data.params_for(p)?;
    let pn = Complex64::new((p as f64).powi(data.n as i32), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut poly = vec![one];
    if at_level {
        for lam in lams {
            poly = poly_mul(&poly, &[one, -pn * lam]);
        }
        return Ok(poly);
    }
    if data.k.is_integer() {
        poly = poly_mul(&poly, &[one, -pn]);
    }
    for lam in lams {
        poly = poly_mul(&poly, &[one, -pn * lam]);
        poly = poly_mul(&poly, &[one, -pn / lam]);
    }
    Ok(poly)
}

/// Truncated standard L value with a convergence-region flag.
#[derive(Clone, Copy, Debug)]
pub struct StandardLValue {
    pub value: Complex64,
    /// true iff Re(s) lies in the absolute-convergence region
    pub in_convergence_region: bool,
}

fn eval_poly(poly: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in poly.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// `L(s, f, χ) = Π_p L_p(ψ(p)χ(p)p^{−s})^{−1}` over the supplied primes
/// up to `prime_bound`, ascending.
pub fn truncated_standard_l(
    s: Complex64,
    data: &SatakeData,
    chi: &DirichletCharacter,
    prime_bound: u64,
) -> Result<StandardLValue> {
    data.validate()?;
    let mut value = Complex64::new(1.0, 0.0);
    let mut primes: Vec<u64> = data
        .params
        .iter()
        .map(|(p, _)| *p)
        .filter(|p| *p <= prime_bound)
        .collect();
    primes.sort_unstable();
    for p in primes {
        let at_level = data.level % p == 0;
        let poly = euler_factor(p, data, at_level)?;
        let w = data.psi.value_complex(p as i64) * chi.value_complex(p as i64);
        let t = w * (-s * (p as f64).ln()).exp();
        let lp = eval_poly(&poly, t);
        if lp.norm_sqr() == 0.0 {
            return Err(Error::Pole(format!("Euler factor at p = {p} vanishes at s")));
        }
        value /= lp;
    }
    let threshold = if data.k.is_integer() {
        2.0 * data.n as f64 + 1.0
    } else {
        2.0 * data.n as f64
    };
    Ok(StandardLValue {
        value,
        in_convergence_region: s.re > threshold,
    })
}

/// A single predicted pole location with its provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoleLocation {
    /// twice the real s-value, keeping half-integers exact
    pub twice_s: i64,
    pub source: String,
}

/// Predicted pole data for the completed function Z(s).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoleReport {
    pub case: String,
    pub exceptional_set: Vec<PoleLocation>,
    pub lambda_ratio_poles: Vec<PoleLocation>,
    /// always true: every listed pole is simple
    pub all_simple: bool,
}

/// Assembles the case analysis for the poles of Z(s).
///
/// The exceptional sets follow the trichotomy on ((ψχ)², 𝔶, k, n): a
/// single pole at s = n+1 for large integral k of the right parity, the
/// window sets for n/2 ≤ k ≤ n, and the extra window
/// {[(n+1)/2], …, n} when 𝔶 = ℤ. The Λ-ratio poles come from the
/// denominator Euler factors at primes dividing 𝔶 but not 𝔠: the factor
/// 1 − η(p)p^{−(2s−n)/2} contributes s = n/2 when η(p) = 1, and the
/// η²-factors contribute s = n/2 + i (integral branch) or
/// s = (n + 2i − 1)/2 (half-integral branch) when η²(p) = 1.
#[allow(clippy::too_many_arguments)]
pub fn pole_report(
    k: HalfInt,
    n: usize,
    psi_chi_square_trivial: bool,
    y_trivial: bool,
    c_ideal: u64,
    y_ideal: u64,
    eta: &DirichletCharacter,
) -> Result<PoleReport> {
    let ni = n as i64;
    let k_minus_half_n = HalfInt::from_twice(k.twice() - ni);
    if k.twice() < ni {
        return Err(Error::domain(format!(
            "pole prediction requires k ≥ n/2; got k = {k}, n = {n}"
        )));
    }

    let mut lambda_ratio_poles: Vec<PoleLocation> = Vec::new();
    let ratio_primes: Vec<u64> = (2..=y_ideal)
        .filter(|d| y_ideal % d == 0 && is_prime_u64(*d) && c_ideal % d != 0)
        .collect();
    let eta2 = eta.pow(2);
    for &p in &ratio_primes {
        if eta.value_exponent(p as i64) == Some(0) {
            push_unique(
                &mut lambda_ratio_poles,
                ni,
                format!("1 − η({p})·p^(−(2s−n)/2) vanishes"),
            );
        }
        if eta2.value_exponent(p as i64) == Some(0) {
            if k_minus_half_n.is_integer() {
                for i in 1..=ni / 2 {
                    push_unique(
                        &mut lambda_ratio_poles,
                        ni + 2 * i,
                        format!("1 − η²({p})·p^(−(2s−n−2i)) vanishes, i = {i}"),
                    );
                }
            } else {
                for i in 1..=(ni + 1) / 2 {
                    push_unique(
                        &mut lambda_ratio_poles,
                        ni + 2 * i - 1,
                        format!("1 − η²({p})·p^(−(2s−n−2i+1)) vanishes, i = {i}"),
                    );
                }
            }
        }
    }

    let mut exceptional_set: Vec<PoleLocation> = Vec::new();
    let case;
    if !psi_chi_square_trivial {
        case = "(ψχ)² ≠ 1: only Λ-ratio poles".to_string();
    } else if !y_trivial {
        if k.twice() > 2 * ni {
            if k.is_integer() && (k.twice() / 2 - ni) % 2 == 0 {
                case = "(ψχ)² = 1, 𝔶 ≠ ℤ, k > n, k ∈ ℤ, k − n even: single pole".to_string();
                exceptional_set.push(PoleLocation {
                    twice_s: 2 * (ni + 1),
                    source: "single pole at s = n + 1".to_string(),
                });
            } else {
                case = "(ψχ)² = 1, 𝔶 ≠ ℤ, k > n, parity excludes the pole".to_string();
            }
        } else if k_minus_half_n.is_integer() {
            case = "(ψχ)² = 1, 𝔶 ≠ ℤ, n/2 ≤ k ≤ n, k − n/2 ∈ ℤ: integer window".to_string();
            let kk = k.twice() / 2;
            for j in (ni + 1)..=(2 * ni + 1 - kk) {
                exceptional_set.push(PoleLocation {
                    twice_s: 2 * j,
                    source: format!("window n+1 ≤ j ≤ 2n+1−k, j = {j}"),
                });
            }
        } else {
            case = "(ψχ)² = 1, 𝔶 ≠ ℤ, n/2 ≤ k ≤ n, k − n/2 ∉ ℤ: half-integral window".to_string();
            // j + 1/2 for n+1 ≤ j ≤ 2n + 1/2 − k, with 2n + 1/2 − k ∈ ℤ here
            let upper = (4 * ni + 1 - k.twice()) / 2;
            for j in (ni + 1)..=upper {
                exceptional_set.push(PoleLocation {
                    twice_s: 2 * j + 1,
                    source: format!("window n+1 ≤ j ≤ 2n+1/2−k, j = {j}"),
                });
            }
        }
    } else if k_minus_half_n.is_integer() {
        case = "(ψχ)² = 1, 𝔶 = ℤ, k − n/2 ∈ ℤ: integer window plus extra window".to_string();
        let kk2 = k.twice();
        if kk2 <= 2 * ni {
            let kk = kk2 / 2;
            for j in (ni + 1)..=(2 * ni + 1 - kk) {
                exceptional_set.push(PoleLocation {
                    twice_s: 2 * j,
                    source: format!("window n+1 ≤ j ≤ 2n+1−k, j = {j}"),
                });
            }
        }
        for j in (ni + 1) / 2..=ni {
            exceptional_set.push(PoleLocation {
                twice_s: 2 * j,
                source: format!("extra window [(n+1)/2] ≤ j ≤ n, j = {j}"),
            });
        }
    } else {
        case = "(ψχ)² = 1, 𝔶 = ℤ, k − n/2 ∉ ℤ: no exceptional set".to_string();
    }

    Ok(PoleReport {
        case,
        exceptional_set,
        lambda_ratio_poles,
        all_simple: true,
    })
}

fn push_unique(list: &mut Vec<PoleLocation>, twice_s: i64, source: String) {
    if !list.iter().any(|p| p.twice_s == twice_s) {
        list.push(PoleLocation { twice_s, source });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::enumerate_characters;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_known_values() {
        let pi = std::f64::consts::PI;
        assert!((complex_gamma(c(0.5, 0.0)).unwrap().re - pi.sqrt()).abs() < 1e-12);
        assert!((complex_gamma(c(6.0, 0.0)).unwrap().re - 120.0).abs() < 1e-9);
        let g = complex_gamma(c(1.0, 1.0)).unwrap();
        assert!((g - c(0.498_015_668_118_356, -0.154_949_828_301_810)).norm() < 1e-10);
        assert!((complex_gamma(c(-1.5, 0.0)).unwrap().re - 4.0 * pi.sqrt() / 3.0).abs() < 1e-10);
        assert!(matches!(complex_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(complex_gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn siegel_gamma_examples() {
        let pi = std::f64::consts::PI;
        assert!((siegel_gamma(1, c(2.0, 0.0)).unwrap().re - 1.0).abs() < 1e-12);
        assert!((siegel_gamma(2, c(2.0, 0.0)).unwrap().re - pi / 2.0).abs() < 1e-10);
        assert!(matches!(siegel_gamma(2, c(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_rho_trivial_weight_is_shifted_gamma() {
        let rho = GLWeight::new(vec![0]).unwrap();
        let h = HalfInt::from_twice(5);
        for i in 0..20 {
            let s = c(1.3 + 0.37 * i as f64, 0.2 * i as f64 - 1.0);
            let lhs = gamma_rho(&rho, h, s).unwrap();
            let rhs = complex_gamma(s + c(h.as_f64(), 0.0)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "i = {i}");
        }
    }

    #[test]
    fn gamma_rho_rank_two_example() {
        // ρ = (1,0), s + h = 3: π^{1/2}·Γ(4)·Γ(5/2) = 4.5π
        let rho = GLWeight::new(vec![1, 0]).unwrap();
        let h = HalfInt::from_int(3);
        let v = gamma_rho(&rho, h, c(0.0, 0.0)).unwrap();
        assert!((v.re - 4.5 * std::f64::consts::PI).abs() < 1e-9);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn gamma_kn_cases() {
        let s = c(2.3, 0.7);
        // n = 2, k = 4: Γ(s − 1)·Γ₂(s + 1)
        let v = gamma_kn(HalfInt::from_int(4), 2, s).unwrap();
        let expect = complex_gamma(s - c(1.0, 0.0)).unwrap() * siegel_gamma(2, s + c(1.0, 0.0)).unwrap();
        assert!((v - expect).norm() < 1e-10 * expect.norm());
        // n = 2, k = 5/2: Γ₂(s + 1/4)
        let v2 = gamma_kn(HalfInt::from_twice(5), 2, s).unwrap();
        let expect2 = siegel_gamma(2, s + c(0.25, 0.0)).unwrap();
        assert!((v2 - expect2).norm() < 1e-10 * expect2.norm());
        // k = n/2 − 1 out of regime
        assert!(gamma_kn(HalfInt::from_int(0), 2, s).is_err());
        // n = 2, k = 2 (= n, k − n/2 ∈ ℤ): Γ₃(s) and an empty tail product
        let v3 = gamma_kn(HalfInt::from_int(2), 2, s).unwrap();
        let expect3 = siegel_gamma(3, s).unwrap();
        assert!((v3 - expect3).norm() < 1e-10 * expect3.norm());
        // n = 3, k = 3/2 (= n/2): Γ₁(s − 3/4)·Γ(2s − 3/2 − 1)
        let v4 = gamma_kn(HalfInt::from_twice(3), 3, s).unwrap();
        let expect4 = siegel_gamma(1, s - c(0.75, 0.0)).unwrap()
            * complex_gamma(s * 2.0 - c(2.5, 0.0)).unwrap();
        assert!((v4 - expect4).norm() < 1e-10 * expect4.norm());
    }

    #[test]
    fn lambda_factor_zeta_values() {
        let triv = DirichletCharacter::trivial(1);
        let s = c(2.0, 0.0);
        let v1 = lambda_factor(1, HalfInt::from_int(1), 1, &triv, s, 20_000).unwrap();
        assert!((v1.value.re - 1.082_323_233_711).abs() < 1e-6);
        assert!(v1.tail < 1e-6);
        let v2 = lambda_factor(2, HalfInt::from_int(1), 1, &triv, s, 20_000).unwrap();
        let zeta6 = 1.017_343_061_984;
        assert!((v2.value.re - 1.082_323_233_711 * zeta6).abs() < 1e-6);
        // half-integral κ, m = 1: single factor L(4s − 1)
        let v3 = lambda_factor(1, HalfInt::from_twice(3), 1, &triv, s, 20_000).unwrap();
        let (zeta7, _) = dirichlet_l(c(7.0, 0.0), &triv, 20_000, &[]).unwrap();
        assert!((v3.value - zeta7).norm() < 1e-9);
    }

    #[test]
    fn lambda_factor_skips_level_primes() {
        let triv = DirichletCharacter::trivial(1);
        let s = c(2.0, 0.0);
        let with = lambda_factor(1, HalfInt::from_int(1), 1, &triv, s, 10_000).unwrap();
        let without = lambda_factor(1, HalfInt::from_int(1), 6, &triv, s, 10_000).unwrap();
        // removing the 2- and 3-factors of ζ(4)
        let expect = with.value.re * (1.0 - 2f64.powf(-4.0)) * (1.0 - 3f64.powf(-4.0));
        assert!((without.value.re - expect).abs() < 1e-9);
    }

    fn sample_data(n: usize, k: HalfInt, level: u64) -> SatakeData {
        let lams: Vec<Complex64> = (0..n).map(|i| c(1.0 + 0.5 * i as f64, 0.0)).collect();
        SatakeData {
            n,
            k,
            params: vec![(2, lams.clone()), (3, lams.clone()), (5, lams)],
            level,
            psi: DirichletCharacter::trivial(1),
        }
    }

    #[test]
    fn euler_factor_degrees_and_constant_terms() {
        let d1 = sample_data(1, HalfInt::from_int(4), 1);
        let p1 = euler_factor(2, &d1, false).unwrap();
        assert_eq!(p1.len(), 4);
        let d2 = sample_data(2, HalfInt::from_twice(5), 1);
        let p2 = euler_factor(3, &d2, false).unwrap();
        assert_eq!(p2.len(), 5);
        let p3 = euler_factor(3, &d2, true).unwrap();
        assert_eq!(p3.len(), 3);
        for poly in [&p1, &p2, &p3] {
            assert!((poly[0] - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn euler_factor_degenerate_parameters() {
        // all λ = 1, half-integral k: (1 − p^n t)^{2n}
        let mut d = sample_data(2, HalfInt::from_twice(5), 1);
        for (_, lams) in d.params.iter_mut() {
            for l in lams.iter_mut() {
                *l = c(1.0, 0.0);
            }
        }
        let poly = euler_factor(2, &d, false).unwrap();
        let base = [c(1.0, 0.0), c(-4.0, 0.0)];
        let mut expect = vec![c(1.0, 0.0)];
        for _ in 0..4 {
            expect = poly_mul(&expect, &base);
        }
        for (a, b) in poly.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn standard_l_identity_oracle() {
        // all λ = 1, n = 1, k ∈ ℤ: L_p = (1 − p·t)³ with t = p^{−s}, so
        // the product equals Π (1 − p^{1−s})^{−3}
        let mut d = sample_data(1, HalfInt::from_int(4), 1);
        for (_, lams) in d.params.iter_mut() {
            lams[0] = c(1.0, 0.0);
        }
        let s = c(4.0, 0.0);
        let triv = DirichletCharacter::trivial(1);
        let v = truncated_standard_l(s, &d, &triv, 10).unwrap();
        let mut expect = 1.0;
        for p in [2.0f64, 3.0, 5.0] {
            expect /= (1.0 - p.powf(1.0 - 4.0)).powi(3);
        }
        assert!((v.value.re - expect).abs() < 1e-10);
        assert!(v.in_convergence_region);

        // empty prime list → 1
        let v0 = truncated_standard_l(s, &d, &triv, 1).unwrap();
        assert!((v0.value - c(1.0, 0.0)).norm() < 1e-14);

        // removing the p = 5 factor is an exact quotient by L₅(t)⁻¹
        let v4 = truncated_standard_l(s, &d, &triv, 4).unwrap();
        let l5 = (1.0 - 5.0f64.powf(1.0 - 4.0)).powi(3);
        assert!((v.value.re - v4.value.re / l5).abs() < 1e-10);

        // outside the region the flag drops but no error occurs
        let v_out = truncated_standard_l(c(2.0, 0.0), &d, &triv, 10).unwrap();
        assert!(!v_out.in_convergence_region);
    }

    #[test]
    fn pole_report_examples() {
        let triv = DirichletCharacter::trivial(1);
        // k = 6, n = 2, (ψχ)² = 1, 𝔶 nontrivial, k − n = 4 ∈ 2ℤ → {3}
        let r1 = pole_report(HalfInt::from_int(6), 2, true, false, 12, 3, &triv).unwrap();
        assert_eq!(
            r1.exceptional_set.iter().map(|p| p.twice_s).collect::<Vec<_>>(),
            vec![6]
        );
        // k = 2, n = 2 window: {3}
        let r2 = pole_report(HalfInt::from_int(2), 2, true, false, 12, 3, &triv).unwrap();
        assert_eq!(
            r2.exceptional_set.iter().map(|p| p.twice_s).collect::<Vec<_>>(),
            vec![6]
        );
        // (ψχ)² ≠ 1 and 𝔠 = 𝔶 → both empty
        let r3 = pole_report(HalfInt::from_int(6), 2, false, false, 6, 6, &triv).unwrap();
        assert!(r3.exceptional_set.is_empty());
        assert!(r3.lambda_ratio_poles.is_empty());
        // k = 5 odd parity excludes the single pole
        let r4 = pole_report(HalfInt::from_int(5), 2, true, false, 12, 3, &triv).unwrap();
        assert!(r4.exceptional_set.is_empty());
        assert!(r4.all_simple);
    }

    #[test]
    fn pole_report_lambda_ratio_and_bounds() {
        // 𝔶 = 3, 𝔠 = 4: p = 3 divides 𝔶 only; trivial η(3) = 1 gives
        // s = n/2 and the η²-ladder
        let triv = DirichletCharacter::trivial(1);
        let r = pole_report(HalfInt::from_int(3), 2, false, false, 4, 3, &triv).unwrap();
        let mut poles: Vec<i64> = r.lambda_ratio_poles.iter().map(|p| p.twice_s).collect();
        poles.sort_unstable();
        assert_eq!(poles, vec![2, 4]);
        // a nontrivial odd character mod 3 kills both (χ(3) = 0)
        let chi3 = enumerate_characters(3).into_iter().find(|c| c.is_odd()).unwrap();
        let r2 = pole_report(HalfInt::from_int(3), 2, false, false, 4, 3, &chi3).unwrap();
        assert!(r2.lambda_ratio_poles.is_empty());
        // containment: exceptional poles inside [n/2, 2n+1]
        for rep in [&r, &r2] {
            for p in &rep.exceptional_set {
                assert!(p.twice_s >= 2 && p.twice_s <= 10);
            }
        }
    }
}
