//! JSON report assembly. Reports are plain `serde_json` values built
//! from sorted-key maps, so a fixed config always serializes to the same
//! bytes. Every numeric entry either carries `"exact": true` or sits
//! next to an explicit error-bound field.

use num_complex::Complex64;
use serde_json::{json, Value};
use siegel_core::exactmath::{rat_to_str, CyclotomicNumber, Rat};

/// Relative slack attributed to double-precision evaluation of
/// closed-form quantities (Lanczos Gamma, finite products).
pub const FLOAT_SLACK: f64 = 1e-12;

pub fn complex_with_rel_error(z: Complex64, rel: f64) -> Value {
    json!({"re": z.re, "im": z.im, "rel_error": rel})
}

pub fn complex_with_abs_error(z: Complex64, abs: f64) -> Value {
    json!({"re": z.re, "im": z.im, "abs_error": abs})
}

pub fn rat_value(r: &Rat) -> Value {
    json!({"exact": true, "value": rat_to_str(r)})
}

pub fn cyclotomic_value(z: &CyclotomicNumber) -> Value {
    let j = siegel_core::exactmath::CyclotomicJson::from(z);
    json!({
        "exact": true,
        "order": j.order,
        "coefficients": j.coefficients,
        "zero": z.is_zero(),
    })
}

/// Full report envelope written to stdout or `--output`.
pub fn envelope(command: &str, input: Value, seed: Option<u64>, threads: usize, result: Value) -> Value {
    json!({
        "command": command,
        "input": input,
        "seed": seed,
        "threads": threads,
        "result": result,
    })
}
