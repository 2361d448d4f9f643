//! Executable acceptance checks shared by the `acceptance` integration
//! test and the command line `verify-paper` subcommand.
//!
//! Each criterion runs a fixed battery of exact identities and
//! small-instance certificates and reports pass/fail with per-check
//! detail lines. Tolerances are pinned here, next to the checks that use
//! them. Criterion 1 is expected to fail: the vanishing claim it sweeps
//! has genuine counterexamples, which the report prints instead of
//! hiding (see the integration test for the pinned expectations).

use crate::analytic::{lambda_factor, pole_report, HalfInt, SatakeData};
use crate::chars::{enumerate_characters, DirichletCharacter};
use crate::cusps::{crt_combine, dedup_double_cosets, CellKind, LocalRep};
use crate::error::Result;
use crate::exactmath::{
    automorph_group, rat, reduced_binary_forms, rint, RationalMatrix, SymPosDef,
};
use crate::gauss::vanishing_certificate;
use crate::pluriharm::{
    is_pluriharmonic_scalar, kv_generator, sym_vector_polynomial, weight_profile,
    MatrixPolynomial, VectorPolynomial,
};
use crate::rankin::{
    h_operator, maass_integral_check, mat_to_complex, unfolding_check, CoefficientFamily, Rep,
};
use crate::theta::{cuspidality_report, level_data, theta_coefficient, ThetaSpec};
use crate::weights::{kv_tau, tau_sigma_membership, EvenTag, GLWeight, OrthWeight};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionResult {
    /// One-line summary, `criterion 07 unfolding-reindex: pass`.
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {}: {}",
            self.id,
            self.name,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

struct Checker {
    passed: bool,
    details: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: String) {
        self.passed &= ok;
        self.details
            .push(format!("{} {msg}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, msg: String) {
        self.details.push(format!("note {msg}"));
    }

    fn finish(self, id: u32, name: &'static str) -> CriterionResult {
        CriterionResult {
            id,
            name,
            passed: self.passed,
            details: self.details,
        }
    }
}

const CRITERIA: &[(u32, &str)] = &[
    (1, "gauss-vanishing-sweep"),
    (2, "kv-correspondence"),
    (3, "kv-generator-pluriharmonicity"),
    (4, "kv-generator-weight-profile"),
    (5, "gamma-vs-maass-quadrature"),
    (6, "hermitian-and-conjugation-laws"),
    (7, "unfolding-reindex"),
    (8, "quadratic-form-plumbing"),
    (9, "theta-level-golden"),
    (10, "theta-coefficient-closed-form"),
    (11, "cusp-representatives"),
    (12, "analytic-factors"),
    (13, "cuspidality-report"),
];

/// Suite names understood by `run_suite`, with their criterion subsets.
pub const SUITES: &[(&str, &[u32])] = &[
    ("gauss", &[1]),
    ("weights", &[2, 3, 4]),
    ("analytic", &[5, 12]),
    ("rankin", &[6, 7]),
    ("quadform", &[8]),
    ("theta", &[9, 10]),
    ("cusps", &[11, 13]),
    (
        "all",
        &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13],
    ),
];

/// Runs one criterion; `quick` shrinks parameter sweeps without changing
/// the checked identities.
pub fn run_criterion(id: u32, quick: bool) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(cid, _)| *cid == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let out = match id {
        1 => criterion_gauss(quick),
        2 => criterion_kv(quick),
        3 => criterion_generator_pluriharmonic(quick),
        4 => criterion_generator_profile(quick),
        5 => criterion_gamma_maass(quick),
        6 => criterion_hermitian_conjugation(quick),
        7 => criterion_unfolding(quick),
        8 => criterion_quadform(quick),
        9 => criterion_theta_level(quick),
        10 => criterion_theta_coefficients(quick),
        11 => criterion_cusp_reps(quick),
        12 => criterion_analytic_factors(quick),
        13 => criterion_cuspidality(quick),
        _ => {
            let mut c = Checker::new();
            c.check(false, format!("unknown criterion id {id}"));
            Ok(c)
        }
    };
    match out {
        Ok(c) => c.finish(id, name),
        Err(e) => {
            let mut c = Checker::new();
            c.check(false, format!("criterion aborted: {e}"));
            c.finish(id, name)
        }
    }
}

/// Runs a named suite; unknown names return `None`.
pub fn run_suite(suite: &str, quick: bool) -> Option<Vec<CriterionResult>> {
    let ids = SUITES.iter().find(|(s, _)| *s == suite).map(|(_, v)| *v)?;
    Some(ids.iter().map(|&id| run_criterion(id, quick)).collect())
}

fn odd_char(f: u64) -> DirichletCharacter {
    enumerate_characters(f)
        .into_iter()
        .find(|c| c.is_odd())
        .expect("odd prime modulus has an odd character")
}

fn spd(rows: &[Vec<i64>]) -> SymPosDef {
    SymPosDef::from_i64_rows(rows).expect("positive definite input")
}

// 1. Exhaustive Gauss-sum vanishing sweeps. The n = 2 families with
// non-scalar τ[Q] mod p, and every family at p = 5, have genuine
// counterexamples; they are reported, not suppressed.
fn criterion_gauss(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let n1_primes: &[u64] = if quick { &[3, 5] } else { &[3, 5, 7, 11, 13] };
    for &p in n1_primes {
        let rep = vanishing_certificate(1, p, &spd(&[vec![1]]), &RationalMatrix::identity(1), false)?;
        c.check(
            rep.zero,
            format!("n = 1, p = {p}: swept {} sums, all zero", rep.swept),
        );
    }
    let taus = [spd(&[vec![1, 0], vec![0, 1]]), spd(&[vec![1, 0], vec![0, 2]])];
    let qs = [
        RationalMatrix::identity(2),
        RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
    ];
    let n2_primes: &[u64] = if quick { &[3] } else { &[3, 5] };
    for &p in n2_primes {
        for (ti, tau) in taus.iter().enumerate() {
            for (qi, q) in qs.iter().enumerate() {
                let rep = vanishing_certificate(2, p, tau, q, false)?;
                let label = format!(
                    "n = 2, p = {p}, τ = {}, Q = {}",
                    ["I", "diag(1,2)"][ti],
                    ["I", "shear"][qi]
                );
                match &rep.counterexample {
                    None => c.check(true, format!("{label}: swept {} sums, all zero", rep.swept)),
                    Some(ce) => c.check(
                        false,
                        format!(
                            "{label}: nonzero at χ-exponents {:?}, X = {:?}, R = {:?}",
                            ce.chi_exponents, ce.x, ce.r
                        ),
                    ),
                }
            }
        }
    }
    Ok(c)
}

// 2. Kashiwara–Vergne correspondence: golden cases and the exhaustive
// round trip through tau_sigma_membership.
fn criterion_kv(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let golden: Vec<(OrthWeight, Vec<i64>)> = vec![
        (OrthWeight::odd(1, vec![], 1)?, vec![0]),
        (OrthWeight::odd(1, vec![], -1)?, vec![1]),
        (OrthWeight::odd(3, vec![2], 1)?, vec![2, 0, 0]),
        (OrthWeight::odd(3, vec![0], -1)?, vec![1, 1, 1]),
        (OrthWeight::odd(3, vec![3], -1)?, vec![3, 0, 0]),
        (OrthWeight::odd(3, vec![1], 1)?, vec![1, 1, 0]),
        (OrthWeight::odd(5, vec![2, 1], -1)?, vec![2, 1, 0, 0, 0]),
        (OrthWeight::odd(5, vec![2, 1], 1)?, vec![2, 1, 1, 0, 0]),
        (OrthWeight::odd(5, vec![0, 0], -1)?, vec![1, 1, 1, 1, 1]),
        (OrthWeight::even(4, vec![2, 0], EvenTag::Minus)?, vec![2, 1, 1, 0]),
        (OrthWeight::even(4, vec![2, 0], EvenTag::Plus)?, vec![2, 0, 0, 0]),
        (OrthWeight::even(2, vec![1], EvenTag::Minus)?, vec![1, 0]),
    ];
    let mut golden_ok = true;
    for (lam, expect) in &golden {
        golden_ok &= kv_tau(lam)? == GLWeight::new(expect.clone())?;
    }
    c.check(golden_ok, format!("{} golden map cases", golden.len()));

    let max_entry = if quick { 2 } else { 3 };
    let mut trips = 0usize;
    let mut trip_ok = true;
    for n in 1..=5usize {
        for lam in all_orth_weights(n, max_entry) {
            let rho = kv_tau(&lam)?;
            match tau_sigma_membership(&rho) {
                None => trip_ok = false,
                Some(back) => {
                    let coincides = matches!(
                        (&lam, &back),
                        (
                            OrthWeight::Even { m: m1, .. },
                            OrthWeight::Even { m: m2, tag: EvenTag::Plus, .. }
                        ) if m1 == m2 && *m1.last().unwrap_or(&1) != 0
                    );
                    trip_ok &= back == lam || coincides;
                    trip_ok &= kv_tau(&back)? == rho;
                }
            }
            trips += 1;
        }
    }
    c.check(
        trip_ok,
        format!("round trip over {trips} weights, n ≤ 5, entries ≤ {max_entry}"),
    );
    Ok(c)
}

fn all_orth_weights(n: usize, max_entry: i64) -> Vec<OrthWeight> {
    let l = n / 2;
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..l {
        let mut next = Vec::new();
        for t in &tuples {
            let hi = t.last().copied().unwrap_or(max_entry);
            for v in 0..=hi {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut out = Vec::new();
    for t in tuples {
        if n % 2 == 1 {
            for eps in [1, -1] {
                out.push(OrthWeight::odd(n, t.clone(), eps).unwrap());
            }
        } else {
            out.push(OrthWeight::even(n, t.clone(), EvenTag::Plus).unwrap());
            if let Ok(w) = OrthWeight::even(n, t.clone(), EvenTag::Minus) {
                out.push(w);
            }
        }
    }
    out
}

/// Supported generator weights for degree n with entries ≤ max: the
/// (m_1,…,m_l,0,…,0) shapes plus the all-ones weight.
fn generator_weights(n: usize, max_entry: i64) -> Vec<GLWeight> {
    let l = n / 2;
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..l.max(1) {
        let mut next = Vec::new();
        for t in &tuples {
            let hi = t.last().copied().unwrap_or(max_entry);
            for v in 0..=hi {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut out = Vec::new();
    for t in tuples {
        let mut entries = t.clone();
        entries.resize(n, 0);
        out.push(GLWeight::new(entries).unwrap());
    }
    out.push(GLWeight::new(vec![1; n]).unwrap());
    out.dedup();
    out
}

// 3. Every constructible generator is exactly pluriharmonic; the
// negative control x₁₁² fails with a witness.
fn criterion_generator_pluriharmonic(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let max_entry = if quick { 2 } else { 3 };
    for n in 2..=4usize {
        let mut count = 0usize;
        let mut ok = true;
        for rho in generator_weights(n, max_entry) {
            let p = kv_generator(&rho)?;
            ok &= is_pluriharmonic_scalar(&p).pluriharmonic;
            count += 1;
        }
        c.check(ok, format!("n = {n}: {count} generators pluriharmonic"));
    }
    let bad = MatrixPolynomial::variable(2, 0, 0).pow(2);
    let rep = is_pluriharmonic_scalar(&bad);
    c.check(
        !rep.pluriharmonic && rep.witness.is_some(),
        "negative control x₁₁² rejected with witness".to_string(),
    );
    Ok(c)
}

// 4. weight_profile(kv_generator(ρ)) = ρ with unipotent invariance.
fn criterion_generator_profile(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let max_entry = if quick { 2 } else { 3 };
    for n in 2..=4usize {
        let mut count = 0usize;
        let mut ok = true;
        for rho in generator_weights(n, max_entry) {
            let p = kv_generator(&rho)?;
            let prof = weight_profile(&p);
            ok &= prof.unipotent_invariant && prof.exponents.as_deref() == Some(&rho.entries[..]);
            count += 1;
        }
        c.check(ok, format!("n = {n}: {count} highest-weight profiles match"));
    }
    Ok(c)
}

// 5. Torus-moment quadrature against the closed-form Gamma product.
fn criterion_gamma_maass(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    for (lam, a) in [(0i64, 2.0f64), (1, 2.0), (2, 3.0)] {
        let r = maass_integral_check(&[lam], a, 1)?;
        c.check(
            r.relative_error < 1e-8,
            format!("n = 1, λ = ({lam}), s+h = {a}: rel {:.2e}", r.relative_error),
        );
    }
    let shs: &[f64] = if quick { &[3.5] } else { &[3.0, 3.5, 4.0] };
    for lam in [[0i64, 0], [1, 0], [2, 0]] {
        for &a in shs {
            let r = maass_integral_check(&lam, a, 2)?;
            c.check(
                r.relative_error < 1e-6,
                format!(
                    "n = 2, λ = {lam:?}, s+h = {a}: rel {:.2e}",
                    r.relative_error
                ),
            );
        }
    }
    Ok(c)
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> RationalMatrix {
    let shear = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
    let lower = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
    let rot = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
    let mut u = RationalMatrix::identity(2);
    for _ in 0..4 {
        let g = match rng.gen_range(0..3) {
            0 => &shear,
            1 => &lower,
            _ => &rot,
        };
        u = u.mul(g);
    }
    u
}

// 6. Hermitian symmetry of H_{ρ,R} and the two-route conjugation law
// over random unimodular changes of variable.
fn criterion_hermitian_conjugation(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let h = HalfInt::from_twice(7);
    let s = Complex64::new(0.0, 0.0);
    let r0 = spd(&[vec![2, 1], vec![1, 3]]);
    let trials = if quick { 5 } else { 20 };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for j in 1..=3u32 {
        let rep = Rep::sym(j, 0);
        let base = h_operator(&rep, h, s, &r0)?;
        c.check(
            base.asymmetry < 1e-9,
            format!("Sym^{j}: asymmetry {:.2e}", base.asymmetry),
        );
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let u = random_unimodular(&mut rng);
            let moved = SymPosDef::new(u.transpose().mul(r0.matrix()).mul(&u))?;
            let lhs = h_operator(&rep, h, s, &moved)?;
            let u_inv = u.inverse()?;
            let rho_left = rep.apply_complex(&mat_to_complex(&u_inv))?;
            let rho_right = rep.apply_complex(&mat_to_complex(&u_inv.transpose()))?;
            let dim = rep.dim();
            let mut num = 0.0;
            let mut den = 0.0;
            for t in 0..dim {
                for w in 0..dim {
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for x in 0..dim {
                        for y in 0..dim {
                            rhs += rho_left[t][x] * base.matrix[x][y] * rho_right[y][w];
                        }
                    }
                    num += (lhs.matrix[t][w] - rhs).norm_sqr();
                    den += rhs.norm_sqr();
                }
            }
            worst = worst.max(num.sqrt() / den.sqrt());
        }
        c.check(
            worst < 1e-8,
            format!("Sym^{j}: conjugation law over {trials} unimodular u, worst rel {worst:.2e}"),
        );
    }
    Ok(c)
}

fn scalar_theta_n1(tau_val: i64, chi: DirichletCharacter) -> ThetaSpec {
    ThetaSpec {
        tau: spd(&[vec![tau_val]]),
        q: RationalMatrix::identity(1),
        chi,
        p: VectorPolynomial::new(vec![MatrixPolynomial::variable(1, 0, 0)]).unwrap(),
        rho: GLWeight::new(vec![1]).unwrap(),
    }
}

fn sym2_theta_n2(chi: DirichletCharacter) -> ThetaSpec {
    ThetaSpec {
        tau: spd(&[vec![1, 0], vec![0, 1]]),
        q: RationalMatrix::identity(2),
        chi,
        p: sym_vector_polynomial(2),
        rho: GLWeight::new(vec![2, 0]).unwrap(),
    }
}

// 7. Unfolding: class-set series versus Hermite-normal-form coset series
// at matched truncation.
fn criterion_unfolding(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let f1 = CoefficientFamily::synthetic(
        Rep::scalar(1),
        HalfInt::from_twice(7),
        DirichletCharacter::trivial(1),
        9,
        5,
    )?;
    let r1 = unfolding_check(&f1, &scalar_theta_n1(1, odd_char(3)), 1.2, 9)?;
    c.check(
        r1.relative_discrepancy < 1e-8,
        format!(
            "n = 1 scalar: {} cosets, rel {:.2e}",
            r1.cosets, r1.relative_discrepancy
        ),
    );
    let bound = if quick { 6 } else { 10 };
    let f2 = CoefficientFamily::synthetic(
        Rep::sym(2, 0),
        HalfInt::from_int(6),
        DirichletCharacter::trivial(1),
        bound,
        11,
    )?;
    let r2 = unfolding_check(&f2, &sym2_theta_n2(odd_char(3)), 2.0, bound)?;
    c.check(
        r2.relative_discrepancy < 1e-6,
        format!(
            "n = 2 Sym², det ≤ {bound}: {} cosets, rel {:.2e}",
            r2.cosets, r2.relative_discrepancy
        ),
    );
    Ok(c)
}

// 8. Automorphism counts and the reduced binary class list.
fn criterion_quadform(_quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let cases = [
        (spd(&[vec![1]]), 2usize),
        (spd(&[vec![1, 0], vec![0, 1]]), 8),
        (spd(&[vec![2, 1], vec![1, 2]]), 12),
    ];
    for (r, expect) in &cases {
        let aut = automorph_group(r)?;
        c.check(
            aut.len() == *expect,
            format!("|Aut| = {} (expected {expect})", aut.len()),
        );
    }
    let classes = reduced_binary_forms(3);
    c.check(
        classes.len() == 4,
        format!("{} reduced binary classes with det ≤ 3 (expected 4)", classes.len()),
    );
    let mut dets: Vec<i64> = classes
        .iter()
        .map(|r| crate::exactmath::rat_to_f64(&r.det()).round() as i64)
        .collect();
    dets.sort_unstable();
    c.check(dets == vec![1, 2, 3, 3], format!("class determinants {dets:?}"));
    Ok(c)
}

// 9. Level ideals of the adapted theta choice τ = 2p·I, Q = (2p)⁻¹·I.
fn criterion_theta_level(_quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let n = 8usize;
    for p in [3i64, 5] {
        let tau = SymPosDef::new(RationalMatrix::identity(n).scale(&rint(2 * p)))?;
        let q = RationalMatrix::identity(n).scale(&rat(1, 2 * p));
        let spec = ThetaSpec {
            tau,
            q,
            chi: odd_char(p as u64),
            p: VectorPolynomial::new(vec![MatrixPolynomial::constant(
                n,
                crate::exactmath::GaussRat::one(),
            )])?,
            rho: GLWeight::new(vec![0; n])?,
        };
        let ld = level_data(&spec)?;
        let ok = ld.b_ideal == rat(1, 2 * p) && ld.c_ideal == rint(4 * p * p);
        c.check(
            ok,
            format!(
                "n = 8, p = {p}: (𝔟, 𝔠) = ({}, {}) expected ((2p)⁻¹ℤ, 4p²ℤ)",
                crate::exactmath::rat_to_str(&ld.b_ideal),
                crate::exactmath::rat_to_str(&ld.c_ideal)
            ),
        );
    }
    Ok(c)
}

// 10. Degree-one closed form c((m²)) = 2m·χ*(m) and the singular-R
// vanishing sweep, both exact.
fn criterion_theta_coefficients(quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let chi = odd_char(3);
    let spec = scalar_theta_n1(1, chi.clone());
    let m_max = if quick { 8 } else { 20 };
    let mut ok = true;
    for m in 1i64..=m_max {
        let r = spd(&[vec![m * m]]);
        let coeff = theta_coefficient(&spec, &r)?;
        let expect = crate::chars::hecke_weight(&chi, m).scale(&rint(2 * m));
        let got = coeff.exact.as_ref().expect("exact branch for τ = 1");
        let order = got[0].order();
        ok &= got[0].sub(&expect.promote(order)).is_zero();
    }
    c.check(ok, format!("c((m²)) = 2m·χ*(m) exact for m ≤ {m_max}"));

    let spec2 = ThetaSpec {
        tau: spd(&[vec![1, 0], vec![0, 1]]),
        q: RationalMatrix::identity(2),
        chi,
        p: VectorPolynomial::new(vec![MatrixPolynomial::det_poly(2)])?,
        rho: GLWeight::new(vec![1, 1])?,
    };
    let mut swept = 0usize;
    let mut ok2 = true;
    for a in 0i64..=5 {
        for b in -2i64..=2 {
            let m = RationalMatrix::from_i64_rows(&[vec![a, b], vec![b, 0]])?;
            if !m.det().is_zero() {
                continue;
            }
            if let Ok(r) = SymPosDef::new_semidefinite(m) {
                let coeff = theta_coefficient(&spec2, &r)?;
                ok2 &= coeff.exact.as_ref().expect("exact branch")[0].is_zero();
                swept += 1;
            }
        }
    }
    c.check(ok2, format!("{swept} singular R give exactly zero"));
    Ok(c)
}

fn modp(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn inv_mod(a: i64, p: i64) -> Option<i64> {
    (1..p).find(|&x| modp(a * x, p) == 1)
}

fn mat2_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2], p: i64) -> [[i64; 2]; 2] {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = modp((0..2).map(|k| a[i][k] * b[k][j]).sum(), p);
        }
    }
    out
}

fn mat2_inv(a: &[[i64; 2]; 2], p: i64) -> [[i64; 2]; 2] {
    let det = modp(a[0][0] * a[1][1] - a[0][1] * a[1][0], p);
    let d = inv_mod(det, p).expect("invertible");
    [
        [modp(a[1][1] * d, p), modp(-a[0][1] * d, p)],
        [modp(-a[1][0] * d, p), modp(a[0][0] * d, p)],
    ]
}

/// Independent oracle: partitions SL₂(𝔽_p) into Q\G/P double cosets by
/// direct group enumeration and counts the classes.
fn sl2_class_count(p: i64) -> usize {
    let mut group: Vec<[[i64; 2]; 2]> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for cc in 0..p {
                for d in 0..p {
                    if modp(a * d - b * cc, p) == 1 {
                        group.push([[a, b], [cc, d]]);
                    }
                }
            }
        }
    }
    let in_klingen = |g: &[[i64; 2]; 2]| g[1][0] == 0;
    let mut assigned = vec![false; group.len()];
    let mut classes = 0usize;
    for i in 0..group.len() {
        if assigned[i] {
            continue;
        }
        classes += 1;
        let gi_inv = mat2_inv(&group[i], p);
        for (j, g) in group.iter().enumerate() {
            if assigned[j] {
                continue;
            }
            for q in (1..p).map(|a| [[a, 0], [0, inv_mod(a, p).unwrap()]]) {
                let q_inv = mat2_inv(&q, p);
                if in_klingen(&mat2_mul(&mat2_mul(&gi_inv, &q_inv, p), g, p)) {
                    assigned[j] = true;
                    break;
                }
            }
        }
    }
    classes
}

// 11. Cusp representatives: class counts against the full-group oracle,
// symplecticity, and the four kind vectors mod 2p.
fn criterion_cusp_reps(_quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    for p in [3u64, 5] {
        let reps = dedup_double_cosets(1, p)?;
        let oracle = sl2_class_count(p as i64);
        c.check(
            reps.len() == oracle,
            format!("p = {p}: {} classes (oracle {oracle})", reps.len()),
        );
        c.check(
            reps.iter().all(|r| r.is_symplectic()),
            format!("p = {p}: all representatives symplectic"),
        );
    }
    for p in [3u64, 5] {
        let l2: Vec<LocalRep> = dedup_double_cosets(1, 2)?.iter().map(LocalRep::from).collect();
        let lp: Vec<LocalRep> = dedup_double_cosets(1, p)?.iter().map(LocalRep::from).collect();
        let combined = crt_combine(&[(2, l2), (p, lp)])?;
        let mut kinds: Vec<Vec<CellKind>> = combined.iter().map(|r| r.kind_vector()).collect();
        kinds.sort();
        kinds.dedup();
        c.check(
            kinds.len() == 4,
            format!("m = {}: {} distinct kind vectors (expected 4)", 2 * p, kinds.len()),
        );
    }
    Ok(c)
}

// 12. Λ-products with tail bounds, Euler-factor degrees across branches,
// pole-report golden cases.
fn criterion_analytic_factors(_quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let triv = DirichletCharacter::trivial(1);
    let s2 = Complex64::new(2.0, 0.0);
    let z4 = 1.0823232337111382;
    let z4z6 = z4 * 1.0173430619844492;
    let l1 = lambda_factor(1, HalfInt::from_int(1), 1, &triv, s2, 10_000)?;
    c.check(
        (l1.value.re - z4).abs() < 1e-6 + l1.tail,
        format!("Λ(m=1, s=2) = {:.9} ≈ ζ(4), tail {:.1e}", l1.value.re, l1.tail),
    );
    let l2 = lambda_factor(2, HalfInt::from_int(1), 1, &triv, s2, 10_000)?;
    c.check(
        (l2.value.re - z4z6).abs() < 1e-6 + l2.tail,
        format!("Λ(m=2, s=2) = {:.9} ≈ ζ(4)ζ(6), tail {:.1e}", l2.value.re, l2.tail),
    );

    for (n, k, at_level, expect_deg) in [
        (1usize, HalfInt::from_int(4), false, 3usize),
        (1, HalfInt::from_twice(7), false, 2),
        (1, HalfInt::from_int(4), true, 1),
        (2, HalfInt::from_int(6), false, 5),
        (2, HalfInt::from_twice(11), false, 4),
        (2, HalfInt::from_int(6), true, 2),
    ] {
        let data = SatakeData {
            n,
            k,
            params: vec![(2, vec![Complex64::new(1.0, 0.0); n])],
            level: if at_level { 2 } else { 1 },
            psi: triv.clone(),
        };
        let poly = crate::analytic::euler_factor(2, &data, at_level)?;
        let ok = poly.len() == expect_deg + 1 && (poly[0] - Complex64::new(1.0, 0.0)).norm() == 0.0;
        c.check(
            ok,
            format!(
                "Euler factor n = {n}, k = {k}, at_level = {at_level}: degree {} (expected {expect_deg})",
                poly.len() - 1
            ),
        );
    }

    let r1 = pole_report(HalfInt::from_int(6), 2, true, false, 12, 3, &triv)?;
    let e1: Vec<i64> = r1.exceptional_set.iter().map(|p| p.twice_s).collect();
    c.check(e1 == vec![6], format!("single-pole branch: 2s ∈ {e1:?} (expected [6])"));
    let r2 = pole_report(HalfInt::from_int(2), 2, true, false, 12, 3, &triv)?;
    let e2: Vec<i64> = r2.exceptional_set.iter().map(|p| p.twice_s).collect();
    c.check(e2 == vec![6], format!("window branch k = n: 2s ∈ {e2:?} (expected [6])"));
    let r3 = pole_report(HalfInt::from_int(6), 2, false, false, 6, 6, &triv)?;
    c.check(
        r3.exceptional_set.is_empty() && r3.lambda_ratio_poles.is_empty(),
        "nontrivial (ψχ)² with 𝔠 = 𝔶: both pole lists empty".to_string(),
    );
    c.check(
        r1.all_simple && r2.all_simple && r3.all_simple,
        "all reported poles simple".to_string(),
    );
    Ok(c)
}

// 13. Cuspidality certificates for the adapted family and the honest
// gates outside it.
fn criterion_cuspidality(_quick: bool) -> Result<Checker> {
    let mut c = Checker::new();
    let spec3 = ThetaSpec {
        tau: SymPosDef::new(RationalMatrix::identity(2).scale(&rint(6)))?,
        q: RationalMatrix::identity(2).scale(&rat(1, 6)),
        chi: odd_char(3),
        p: VectorPolynomial::new(vec![MatrixPolynomial::det_poly(2)])?,
        rho: GLWeight::new(vec![1, 1])?,
    };
    let rep = cuspidality_report(&spec3)?;
    c.check(
        rep.verdict == "cuspidal" && rep.kinds.len() == 4 && rep.kinds.iter().all(|k| k.verified),
        format!(
            "p = 3 adapted family: verdict {} with {} kinds certified",
            rep.verdict,
            rep.kinds.iter().filter(|k| k.verified).count()
        ),
    );

    let even = enumerate_characters(5)
        .into_iter()
        .find(|ch| !ch.is_trivial() && !ch.is_odd())
        .expect("even nontrivial character mod 5");
    let mut spec_even = spec3.clone();
    spec_even.chi = even;
    c.check(
        cuspidality_report(&spec_even)?.verdict == "not covered",
        "even character gated as not covered".to_string(),
    );
    let mut spec_triv = spec3.clone();
    spec_triv.chi = DirichletCharacter::trivial(1);
    c.check(
        cuspidality_report(&spec_triv)?.verdict == "not covered",
        "trivial character gated as not covered".to_string(),
    );

    let spec5 = ThetaSpec {
        tau: SymPosDef::new(RationalMatrix::identity(2).scale(&rint(10)))?,
        q: RationalMatrix::identity(2).scale(&rat(1, 10)),
        chi: odd_char(5),
        p: VectorPolynomial::new(vec![MatrixPolynomial::det_poly(2)])?,
        rho: GLWeight::new(vec![1, 1])?,
    };
    let rep5 = cuspidality_report(&spec5)?;
    c.check(
        rep5.verdict == "uncertified" && rep5.certificates.iter().any(|r| r.counterexample.is_some()),
        format!(
            "p = 5 family honestly uncertified ({}): the sweep it needs has a counterexample",
            rep5.verdict
        ),
    );
    c.note("the p = 5 counterexample family is reported under criterion 1".to_string());
    Ok(c)
}
