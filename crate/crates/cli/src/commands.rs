//! One function per subcommand. Each returns the `(input echo, result)`
//! pair that the report envelope wraps.

use crate::input;
use crate::report::{
    complex_with_abs_error, complex_with_rel_error, cyclotomic_value, rat_value, FLOAT_SLACK,
};
use crate::CliError;
use num_complex::Complex64;
use serde_json::{json, Value};
use siegel_core::acceptance::{run_criterion, SUITES};
use siegel_core::analytic::{
    euler_factor, gamma_kn, gamma_rho, lambda_factor, pole_report, truncated_standard_l,
    SatakeData,
};
use siegel_core::cusps::{crt_combine, dedup_double_cosets, lift_degree_one, LocalRep};
use siegel_core::exactmath::{RationalMatrix, SymPosDef};
use siegel_core::gauss::{gauss_sum, vanishing_certificate, GaussSumParams};
use siegel_core::pluriharm::{
    is_pluriharmonic, kv_generator, polynomial_from_json, polynomial_to_json, weight_profile,
    PolyTermJson, VectorPolynomial,
};
use siegel_core::rankin::{
    d_tau_series, maass_integral_check, pluriharmonic_gamma, rankin_series, unfolding_check,
    Partner,
};
use siegel_core::theta::{cuspidality_report, level_data, theta_coefficient};
use siegel_core::weights::kv_tau;

type Result<T> = std::result::Result<T, CliError>;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn kv_map(n: usize, lambda: &str) -> Result<(Value, Value)> {
    let lam = input::parse_orth_weight(n, lambda)?;
    let tau = kv_tau(&lam).map_err(CliError::Core)?;
    Ok((
        json!({"n": n, "lambda": lambda}),
        json!({"exact": true, "tau": tau.entries}),
    ))
}

pub fn pluriharmonic_check(n: usize, poly_path: &str) -> Result<(Value, Value)> {
    let text = std::fs::read_to_string(poly_path)
        .map_err(|e| schema(format!("cannot read {poly_path}: {e}")))?;
    let components: Vec<Vec<PolyTermJson>> =
        serde_json::from_str(&text).map_err(|e| schema(format!("{poly_path}: {e}")))?;
    let comps = components
        .iter()
        .map(|terms| polynomial_from_json(n, terms))
        .collect::<siegel_core::Result<Vec<_>>>()
        .map_err(CliError::Core)?;
    let p = VectorPolynomial::new(comps).map_err(CliError::Core)?;
    let rep = is_pluriharmonic(&p);
    let witness = rep.witness.as_ref().map(|(comp, i, j, residual)| {
        json!({
            "component": comp,
            "laplacian": [i, j],
            "residual": polynomial_to_json(residual),
        })
    });
    Ok((
        json!({"n": n, "poly": poly_path}),
        json!({"exact": true, "pluriharmonic": rep.pluriharmonic, "witness": witness}),
    ))
}

pub fn kv_generator_cmd(rho_str: &str) -> Result<(Value, Value)> {
    let rho = input::parse_gl_weight(rho_str)?;
    let p = kv_generator(&rho).map_err(CliError::Core)?;
    let profile = weight_profile(&p);
    Ok((
        json!({"rho": rho_str}),
        json!({
            "exact": true,
            "generator": polynomial_to_json(&p),
            "terms": p.num_terms(),
            "weight_profile": {
                "exponents": profile.exponents,
                "unipotent_invariant": profile.unipotent_invariant,
            },
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn gauss_sum_cmd(
    n: usize,
    modulus: u64,
    chi_index: Option<usize>,
    chi_exponents: Option<&str>,
    x: &str,
    r: &str,
    tau_q: &str,
) -> Result<(Value, Value)> {
    let chi = input::character_from_flags(modulus, chi_index, chi_exponents)?;
    let params = GaussSumParams {
        n,
        chi,
        x: input::parse_int_matrix(x)?,
        r: input::parse_int_matrix(r)?,
        f: modulus,
        tau_q: input::parse_rat_matrix(tau_q)?,
    };
    let value = gauss_sum(&params).map_err(CliError::Core)?;
    Ok((
        json!({
            "n": n, "modulus": modulus, "chi_index": chi_index,
            "chi_exponents": chi_exponents, "x": x, "r": r, "tau_q": tau_q,
        }),
        json!({"value": cyclotomic_value(&value)}),
    ))
}

pub fn vanishing_certificate_cmd(
    n: usize,
    p: u64,
    tau: &str,
    q: &str,
    include_even: bool,
) -> Result<(Value, Value)> {
    let tau = input::parse_sym_pos_def(tau)?;
    let q = input::parse_rat_matrix(q)?;
    let report = vanishing_certificate(n, p, &tau, &q, include_even).map_err(CliError::Core)?;
    Ok((
        json!({"n": n, "p": p, "include_even": include_even}),
        json!({"exact": true, "certificate": report}),
    ))
}

pub fn theta_level(spec_path: &str) -> Result<(Value, Value)> {
    let (spec, echo) = input::load_theta_spec(spec_path)?;
    let ld = level_data(&spec).map_err(CliError::Core)?;
    Ok((
        json!({"spec": spec_path, "spec_contents": echo}),
        json!({
            "exact": true,
            "b_ideal": rat_value(&ld.b_ideal),
            "c_ideal": rat_value(&ld.c_ideal),
            "r_ideal": rat_value(&ld.r_ideal),
            "t_ideal": rat_value(&ld.t_ideal),
            "a_ideal": rat_value(&ld.a_ideal),
            "epsilon": {"trivial": ld.eps.is_trivial(), "parity": ld.eps.parity()},
            "nebentype_parity": ld.nebentype_parity,
        }),
    ))
}

pub fn theta_coeffs(spec_path: &str, r: &str) -> Result<(Value, Value)> {
    let (spec, echo) = input::load_theta_spec(spec_path)?;
    let rows = input::parse_int_matrix(r)?;
    let m = RationalMatrix::from_i64_rows(&rows).map_err(CliError::Core)?;
    let r_mat = SymPosDef::new(m.clone())
        .or_else(|_| SymPosDef::new_semidefinite(m))
        .map_err(CliError::Core)?;
    let coeff = theta_coefficient(&spec, &r_mat).map_err(CliError::Core)?;
    let numeric_norm: f64 = coeff.numeric.iter().map(|z| z.norm()).sum();
    let numeric: Vec<Value> = coeff
        .numeric
        .iter()
        .map(|z| complex_with_abs_error(*z, FLOAT_SLACK * numeric_norm.max(1.0)))
        .collect();
    let exact = coeff
        .exact
        .as_ref()
        .map(|v| v.iter().map(cyclotomic_value).collect::<Vec<_>>());
    Ok((
        json!({"spec": spec_path, "spec_contents": echo, "r": r}),
        json!({"exact": exact, "numeric": numeric, "sqrt_mode": coeff.sqrt_mode}),
    ))
}

pub fn theta_cusp_report(spec_path: &str, p: Option<u64>) -> Result<(Value, Value)> {
    let (spec, echo) = input::load_theta_spec(spec_path)?;
    let mut report = cuspidality_report(&spec).map_err(CliError::Core)?;
    if let Some(p) = p {
        report.certificates.retain(|c| c.p == p);
    }
    Ok((
        json!({"spec": spec_path, "spec_contents": echo, "p": p}),
        json!({"exact": true, "report": report}),
    ))
}

pub fn cusp_reps(n: usize, m: u64, lift: bool) -> Result<(Value, Value)> {
    let mut primes = Vec::new();
    let mut rest = m;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            rest /= d;
            if rest % d == 0 {
                return Err(CliError::Core(siegel_core::Error::domain(format!(
                    "modulus {m} is not squarefree"
                ))));
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    let mut locals = Vec::new();
    let mut local_counts = Vec::new();
    for &p in &primes {
        let reps = dedup_double_cosets(n, p).map_err(CliError::Core)?;
        local_counts.push(json!({"p": p, "classes": reps.len()}));
        locals.push((p, reps.iter().map(LocalRep::from).collect::<Vec<_>>()));
    }
    let combined = crt_combine(&locals).map_err(CliError::Core)?;
    let lifts: Option<Vec<Value>> = if lift {
        if n != 1 || primes.len() != 1 {
            return Err(CliError::Core(siegel_core::Error::domain(
                "lifting is provided only for n = 1 at a single prime",
            )));
        }
        let reps = dedup_double_cosets(1, primes[0]).map_err(CliError::Core)?;
        Some(
            reps.iter()
                .map(|r| lift_degree_one(r).map(|m| json!(m)))
                .collect::<siegel_core::Result<Vec<_>>>()
                .map_err(CliError::Core)?,
        )
    } else {
        None
    };
    let reps_json: Vec<Value> = combined
        .iter()
        .map(|r| {
            json!({
                "kinds": r.kind_vector(),
                "locals": r.locals,
            })
        })
        .collect();
    Ok((
        json!({"n": n, "m": m, "lift": lift}),
        json!({
            "exact": true,
            "local_classes": local_counts,
            "count": combined.len(),
            "representatives": reps_json,
            "lifts": lifts,
        }),
    ))
}

pub fn gamma_factors(rho_str: &str, h: &str, s: &str) -> Result<(Value, Value)> {
    let rho = input::parse_gl_weight(rho_str)?;
    let h = input::parse_half_int(h)?;
    let sv = input::parse_complex(s)?;
    let g_rho = gamma_rho(&rho, h, sv).map_err(CliError::Core)?;
    let g_vec = pluriharmonic_gamma(&rho, h, sv).map_err(CliError::Core)?;
    let g_kn = gamma_kn(h, rho.n, sv).map_err(CliError::Core)?;
    Ok((
        json!({"rho": rho_str, "h": h.to_string(), "s": s}),
        json!({
            "gamma_rho": complex_with_rel_error(g_rho, FLOAT_SLACK),
            "pluriharmonic_gamma": complex_with_rel_error(g_vec, FLOAT_SLACK),
            "gamma_kn": complex_with_rel_error(g_kn, FLOAT_SLACK),
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn lambda_values(
    m: usize,
    kappa: &str,
    x_ideal: u64,
    eta_modulus: u64,
    eta_index: Option<usize>,
    s: &str,
    p_max: u64,
) -> Result<(Value, Value)> {
    let kappa_v = input::parse_half_int(kappa)?;
    let eta = input::character_from_flags(eta_modulus, eta_index, None)?;
    let sv = input::parse_complex(s)?;
    let lv = lambda_factor(m, kappa_v, x_ideal, &eta, sv, p_max).map_err(CliError::Core)?;
    Ok((
        json!({
            "m": m, "kappa": kappa, "x_ideal": x_ideal,
            "eta_modulus": eta_modulus, "eta_index": eta_index,
            "s": s, "p_max": p_max,
        }),
        json!({"value": complex_with_abs_error(lv.value, lv.tail), "tail_bound": lv.tail}),
    ))
}

fn satake_from_parts(
    n: usize,
    k: &str,
    level: u64,
    psi_modulus: u64,
    psi_index: Option<usize>,
    satake: &str,
) -> Result<SatakeData> {
    let mut params = Vec::new();
    for block in satake.split('|') {
        let (p_str, lams) = block
            .split_once(':')
            .ok_or_else(|| schema(format!("satake block '{block}' (expected p:re,im;re,im)")))?;
        let p: u64 = p_str
            .trim()
            .parse()
            .map_err(|e| schema(format!("satake prime '{p_str}': {e}")))?;
        let lam: Vec<Complex64> = lams
            .split(';')
            .map(input::parse_complex)
            .collect::<Result<_>>()?;
        params.push((p, lam));
    }
    let data = SatakeData {
        n,
        k: input::parse_half_int(k)?,
        params,
        level,
        psi: input::character_from_flags(psi_modulus, psi_index, None)?,
    };
    data.validate().map_err(CliError::Core)?;
    Ok(data)
}

#[allow(clippy::too_many_arguments)]
pub fn euler_factor_cmd(
    p: u64,
    n: usize,
    k: &str,
    level: u64,
    psi_modulus: u64,
    psi_index: Option<usize>,
    satake: &str,
    at_level: bool,
) -> Result<(Value, Value)> {
    let data = satake_from_parts(n, k, level, psi_modulus, psi_index, satake)?;
    let poly = euler_factor(p, &data, at_level).map_err(CliError::Core)?;
    let coeffs: Vec<Value> = poly
        .iter()
        .map(|c| complex_with_rel_error(*c, FLOAT_SLACK))
        .collect();
    Ok((
        json!({
            "p": p, "n": n, "k": k, "level": level,
            "psi_modulus": psi_modulus, "psi_index": psi_index,
            "satake": satake, "at_level": at_level,
        }),
        json!({"degree": poly.len() - 1, "coefficients": coeffs}),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn standard_l(
    n: usize,
    k: &str,
    level: u64,
    psi_modulus: u64,
    psi_index: Option<usize>,
    satake: &str,
    chi_modulus: u64,
    chi_index: Option<usize>,
    s: &str,
    prime_bound: u64,
) -> Result<(Value, Value)> {
    let data = satake_from_parts(n, k, level, psi_modulus, psi_index, satake)?;
    let chi = input::character_from_flags(chi_modulus, chi_index, None)?;
    let sv = input::parse_complex(s)?;
    let lv = truncated_standard_l(sv, &data, &chi, prime_bound).map_err(CliError::Core)?;
    Ok((
        json!({
            "n": n, "k": k, "level": level,
            "psi_modulus": psi_modulus, "psi_index": psi_index,
            "satake": satake, "chi_modulus": chi_modulus, "chi_index": chi_index,
            "s": s, "prime_bound": prime_bound,
        }),
        json!({
            "value": complex_with_rel_error(lv.value, FLOAT_SLACK),
            "in_convergence_region": lv.in_convergence_region,
            "truncation": {"euler_primes_up_to": prime_bound},
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn pole_report_cmd(
    k: &str,
    n: usize,
    psi_chi_square_trivial: bool,
    y_trivial: bool,
    c_ideal: u64,
    y_ideal: u64,
    eta_modulus: u64,
    eta_index: Option<usize>,
) -> Result<(Value, Value)> {
    let kv = input::parse_half_int(k)?;
    let eta = input::character_from_flags(eta_modulus, eta_index, None)?;
    let report = pole_report(kv, n, psi_chi_square_trivial, y_trivial, c_ideal, y_ideal, &eta)
        .map_err(CliError::Core)?;
    Ok((
        json!({
            "k": k, "n": n,
            "psi_chi_square_trivial": psi_chi_square_trivial, "y_trivial": y_trivial,
            "c_ideal": c_ideal, "y_ideal": y_ideal,
            "eta_modulus": eta_modulus, "eta_index": eta_index,
        }),
        json!({"exact": true, "report": report}),
    ))
}

pub fn rankin_eval(
    family_path: &str,
    theta_path: &str,
    s: &str,
    det_bound: i64,
    seed: Option<u64>,
) -> Result<(Value, Value)> {
    let (fam, used_seed, fam_echo) = input::load_family(family_path, seed)?;
    let (spec, theta_echo) = input::load_theta_spec(theta_path)?;
    let sv = input::parse_complex(s)?;
    let value = rankin_series(sv, &fam, &Partner::Theta(&spec), det_bound).map_err(CliError::Core)?;
    Ok((
        json!({
            "family": family_path, "family_contents": fam_echo,
            "theta": theta_path, "theta_contents": theta_echo,
            "s": s, "det_bound": det_bound, "family_seed": used_seed,
        }),
        json!({
            "value": complex_with_rel_error(value.value, FLOAT_SLACK),
            "h": value.h.to_string(),
            "truncation": {"det_bound": det_bound, "classes": value.classes, "nonzero_terms": value.nonzero_terms},
        }),
    ))
}

pub fn unfold_check(
    family_path: &str,
    theta_path: &str,
    s: f64,
    det_bound: i64,
    seed: Option<u64>,
) -> Result<(Value, Value)> {
    let (fam, used_seed, fam_echo) = input::load_family(family_path, seed)?;
    let (spec, theta_echo) = input::load_theta_spec(theta_path)?;
    let report = unfolding_check(&fam, &spec, s, det_bound).map_err(CliError::Core)?;
    Ok((
        json!({
            "family": family_path, "family_contents": fam_echo,
            "theta": theta_path, "theta_contents": theta_echo,
            "s": s, "det_bound": det_bound, "family_seed": used_seed,
        }),
        json!({
            "lhs": complex_with_rel_error(report.lhs, report.relative_discrepancy),
            "rhs": complex_with_rel_error(report.rhs, report.relative_discrepancy),
            "relative_discrepancy": report.relative_discrepancy,
            "h": report.h.to_string(),
            "truncation": {"det_bound": det_bound, "classes": report.classes, "cosets": report.cosets},
        }),
    ))
}

pub fn d_tau_cmd(
    family_path: &str,
    theta_path: &str,
    s: f64,
    coset_bound: i64,
    seed: Option<u64>,
) -> Result<(Value, Value)> {
    let (fam, used_seed, fam_echo) = input::load_family(family_path, seed)?;
    let (spec, theta_echo) = input::load_theta_spec(theta_path)?;
    let value = d_tau_series(&fam, &spec, s, coset_bound).map_err(CliError::Core)?;
    Ok((
        json!({
            "family": family_path, "family_contents": fam_echo,
            "theta": theta_path, "theta_contents": theta_echo,
            "s": s, "coset_bound": coset_bound, "family_seed": used_seed,
        }),
        json!({
            "value": complex_with_rel_error(value.value, FLOAT_SLACK),
            "truncation": {"coset_bound": coset_bound, "cosets": value.cosets},
            "bad_primes_normalized": value.bad_primes_normalized,
        }),
    ))
}

pub fn maass_check(n: usize, lambda: &str, s_plus_h: f64) -> Result<(Value, Value)> {
    let lam: Vec<i64> = lambda
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| schema(format!("lambda '{lambda}': {e}")))?;
    let check = maass_integral_check(&lam, s_plus_h, n).map_err(CliError::Core)?;
    Ok((
        json!({"n": n, "lambda": lambda, "s_plus_h": s_plus_h}),
        json!({
            "quadrature": complex_with_rel_error(check.quadrature, check.relative_error),
            "closed_form": complex_with_rel_error(check.closed_form, FLOAT_SLACK),
            "relative_error": check.relative_error,
            "levels_used": check.levels_used,
        }),
    ))
}

/// Runs an acceptance suite; the returned bool is the aggregate verdict.
pub fn verify_paper(suite: &str, quick: bool) -> Result<(Value, Value, bool)> {
    let ids = SUITES
        .iter()
        .find(|(s, _)| *s == suite)
        .map(|(_, ids)| *ids)
        .ok_or_else(|| {
            schema(format!(
                "unknown suite '{suite}' (expected one of {})",
                SUITES.iter().map(|(s, _)| *s).collect::<Vec<_>>().join(", ")
            ))
        })?;
    let mut criteria = Vec::new();
    let mut passed = true;
    for &id in ids {
        let start = std::time::Instant::now();
        let r = run_criterion(id, quick);
        let seconds = (start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0;
        passed &= r.passed;
        criteria.push(json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "seconds": seconds,
            "details": r.details,
        }));
    }
    Ok((
        json!({"suite": suite, "quick": quick}),
        json!({"passed": passed, "criteria": criteria}),
        passed,
    ))
}
