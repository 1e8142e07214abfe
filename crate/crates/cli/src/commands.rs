//! The seven subcommands: estimation, sweeps, samples, and verification.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use sturmian_core::contfrac::{
    circle_arc_lengths, convergents, three_distance_gaps, ContinuedFraction,
};
use sturmian_core::fractal::{box_dimension, dim_lower_bound, thickness, IntervalSet, Thickness};
use sturmian_core::surface::{
    escape_profile, fricke_drift_extended, membership_estimate_with, orbit_classify,
    spectral_line_point, spectrum_estimate, trace_map_apply, trace_map_inverse, CantorApprox,
    OrbitStatus, SurvivalRegionSpec, TriplePoint,
};
use sturmian_core::torus::{
    cone_check, graph_transform_manifold, property_c_verify, semiconjugacy_f, stable_slope,
    stable_slope_exact, torus_apply, ConeSpec, DigitMatrix, PerturbOptions, PerturbedMapFamily,
};

use crate::config::RunConfig;
use crate::emit::{csv_text, deliver, json_text, sig17};
use crate::error::{AppError, EXIT_VERIFY};

/// Grid-plus-bisection estimate with the membership tests fanned out over
/// the worker pool; results are merged by index, so the output is identical
/// to a serial run.
fn parallel_estimate(
    lambda: f64,
    digits: &ContinuedFraction,
    resolution: f64,
    max_steps: usize,
    escape_threshold: f64,
    region: Option<&SurvivalRegionSpec>,
) -> Result<CantorApprox, AppError> {
    let approx = membership_estimate_with(lambda, resolution, |es| {
        es.par_iter()
            .map(|&e| {
                let seed = spectral_line_point(lambda, e);
                let r = orbit_classify(&seed, digits, max_steps, escape_threshold, region);
                r.status == OrbitStatus::BoundedUpToBudget
            })
            .collect()
    })?;
    Ok(approx)
}

/// Common emission for interval artifacts: CSV rows "left,right" plus a
/// JSON summary that echoes the resolved config. With `--format csv` and an
/// output path, the summary lands next to the CSV with extension `.json`;
/// with `--format json` the summary (intervals included) is the artifact.
fn emit_intervals(
    cfg: &RunConfig,
    approx: &CantorApprox,
    extra: &[(&str, serde_json::Value)],
) -> Result<(), AppError> {
    let rows: Vec<String> = approx
        .intervals()
        .iter()
        .map(|&(l, r)| format!("{},{}", sig17(l), sig17(r)))
        .collect();
    let csv = csv_text("left,right", &rows);

    let mut summary = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "lambda": cfg.lambda,
        "digits": cfg.alpha,
        "resolution": cfg.resolution,
        "intervals": approx.intervals(),
        "interval_count": approx.intervals().len(),
        "total_length": approx.total_length(),
        "undecided_cells": approx.undecided_cells,
        "evaluations": approx.evaluations,
        "window": [approx.window.0, approx.window.1],
    });
    for (k, v) in extra {
        summary[*k] = v.clone();
    }

    match cfg.format {
        crate::config::Format::Csv => {
            deliver(&csv, cfg.output.as_deref())?;
            if let Some(p) = &cfg.output {
                let sidecar = p.with_extension("json");
                if &sidecar != p {
                    deliver(&json_text(&summary), Some(&sidecar))?;
                }
            }
            Ok(())
        }
        crate::config::Format::Json => deliver(&json_text(&summary), cfg.output.as_deref()),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let approx = parallel_estimate(
        cfg.lambda,
        &digits,
        cfg.resolution,
        cfg.max_steps,
        cfg.escape_threshold,
        None,
    )?;
    emit_intervals(cfg, &approx, &[])?;
    Ok(0)
}

pub fn cmd_survival(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let region = SurvivalRegionSpec::for_lambda(cfg.lambda, cfg.rho)?;
    let approx = parallel_estimate(
        cfg.lambda,
        &digits,
        cfg.resolution,
        cfg.max_steps,
        cfg.escape_threshold,
        Some(&region),
    )?;
    emit_intervals(cfg, &approx, &[("rho", json!(cfg.rho))])?;
    Ok(0)
}

struct SweepRow {
    lambda: f64,
    box_dim: f64,
    tau: f64,
    dim_lower: f64,
    total_length: f64,
    runtime: f64,
}

/// One sweep entry: profile the escape steps on the grid, pick the deepest
/// horizon the grid still resolves, re-estimate the spectrum at that
/// horizon, then measure the estimate. `--max-steps` is the profiling cap.
fn sweep_row(cfg: &RunConfig, digits: &ContinuedFraction, lambda: f64) -> Result<SweepRow, AppError> {
    let t0 = Instant::now();
    let profile = escape_profile(
        lambda,
        digits,
        cfg.resolution,
        cfg.max_steps,
        cfg.escape_threshold,
        None,
    )?;
    let horizon = profile.matched_horizon();
    let approx = parallel_estimate(
        lambda,
        digits,
        cfg.resolution,
        horizon,
        cfg.escape_threshold,
        None,
    )?;
    let set = approx
        .set
        .as_ref()
        .ok_or(AppError::Numeric(format!("empty estimate at lambda {lambda}")))?;
    let scales: Vec<f64> = (2..=6).map(|j| cfg.resolution * f64::from(1 << j)).collect();
    let fit = box_dimension(set, &scales)?;
    let report = thickness(set);
    Ok(SweepRow {
        lambda,
        box_dim: fit.dimension,
        tau: report.tau.to_f64(),
        dim_lower: report.dim_lower,
        total_length: approx.total_length(),
        runtime: t0.elapsed().as_secs_f64(),
    })
}

pub fn cmd_dimension_sweep(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let lambdas: Vec<f64> = cfg
        .lambda_list
        .clone()
        .unwrap_or_else(|| vec![cfg.lambda]);
    // parallel across couplings, merged back in input order
    let rows: Vec<SweepRow> = lambdas
        .par_iter()
        .map(|&l| sweep_row(cfg, &digits, l))
        .collect::<Result<Vec<_>, _>>()?;

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                sig17(r.lambda),
                sig17(r.box_dim),
                sig17(r.tau),
                sig17(r.dim_lower),
                sig17(r.total_length),
                sig17(r.runtime)
            )
        })
        .collect();
    let csv = csv_text("lambda,box_dim,tau,dim_lower,total_length,runtime", &csv_rows);

    let json_rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            json!({
                "lambda": r.lambda,
                "box_dim": r.box_dim,
                "tau": if r.tau.is_finite() { Some(r.tau) } else { None },
                "dim_lower": r.dim_lower,
                "total_length": r.total_length,
                "runtime": r.runtime,
            })
        })
        .collect();
    let summary = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "rows": json_rows,
    });

    match cfg.format {
        crate::config::Format::Csv => {
            deliver(&csv, cfg.output.as_deref())?;
            if let Some(p) = &cfg.output {
                let sidecar = p.with_extension("json");
                if &sidecar != p {
                    deliver(&json_text(&summary), Some(&sidecar))?;
                }
            }
        }
        crate::config::Format::Json => deliver(&json_text(&summary), cfg.output.as_deref())?,
    }
    Ok(0)
}

fn status_name(s: OrbitStatus) -> &'static str {
    match s {
        OrbitStatus::BoundedUpToBudget => "bounded",
        OrbitStatus::Escaped => "escaped",
        OrbitStatus::LeftSurvivalRegion => "left-region",
    }
}

pub fn cmd_orbit(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let energy = cfg
        .energy
        .ok_or(AppError::Usage("orbit requires an energy argument".into()))?;
    if !energy.is_finite() {
        return Err(AppError::Usage("energy must be finite".into()));
    }
    let seed = spectral_line_point(cfg.lambda, energy);
    let r = orbit_classify(&seed, &digits, cfg.max_steps, cfg.escape_threshold, None);

    let csv = csv_text(
        "status,steps,max_norm",
        &[format!(
            "{},{},{}",
            status_name(r.status),
            r.steps,
            sig17(r.max_norm)
        )],
    );
    let summary = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "energy": energy,
        "status": status_name(r.status),
        "steps": r.steps,
        "max_norm": if r.max_norm.is_finite() { Some(r.max_norm) } else { None },
    });
    match cfg.format {
        crate::config::Format::Csv => deliver(&csv, cfg.output.as_deref())?,
        crate::config::Format::Json => deliver(&json_text(&summary), cfg.output.as_deref())?,
    }
    Ok(0)
}

/// Stable-manifold reconstruction: `--max-steps` is the graph-transform
/// depth budget and `--resolution` its sup-norm stopping tolerance.
pub fn cmd_stable_manifold(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let g = graph_transform_manifold(cfg.lambda, &digits, cfg.max_steps, cfg.resolution)?;
    let rows: Vec<String> = g
        .chart_points()
        .iter()
        .map(|&(t, x, y)| format!("{},{},{}", sig17(t), sig17(x), sig17(y)))
        .collect();
    let csv = csv_text("t,x,y", &rows);
    let summary = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "base": g.base(),
        "half_len": g.half_len(),
        "lipschitz_bound": g.lipschitz_bound(),
        "max_difference_quotient": g.max_difference_quotient(),
        "slope_at_center": g.slope_at_center(),
        "samples": g.chart_points(),
    });
    match cfg.format {
        crate::config::Format::Csv => {
            deliver(&csv, cfg.output.as_deref())?;
            if let Some(p) = &cfg.output {
                let sidecar = p.with_extension("json");
                if &sidecar != p {
                    deliver(&json_text(&summary), Some(&sidecar))?;
                }
            }
        }
        crate::config::Format::Json => deliver(&json_text(&summary), cfg.output.as_deref())?,
    }
    Ok(0)
}

/// Three-distance gaps of the rotation by α for the first `--max-steps`
/// points.
pub fn cmd_three_distance(cfg: &RunConfig) -> Result<i32, AppError> {
    let digits = cfg.digits()?;
    let alpha = digits.value_f64();
    let lengths = three_distance_gaps(alpha, cfg.max_steps)?;
    let rows: Vec<String> = lengths.iter().map(|&l| sig17(l)).collect();
    let csv = csv_text("length", &rows);
    let summary = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "alpha_value": alpha,
        "n": cfg.max_steps,
        "lengths": lengths,
    });
    match cfg.format {
        crate::config::Format::Csv => deliver(&csv, cfg.output.as_deref())?,
        crate::config::Format::Json => deliver(&json_text(&summary), cfg.output.as_deref())?,
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// splitmix64: tiny deterministic generator for the randomized checks.
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    fn sym(&mut self, bound: f64) -> f64 {
        (2.0 * self.unit() - 1.0) * bound
    }
    fn int_in(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next_u64() % (hi - lo + 1)
    }
}

struct CheckResult {
    name: &'static str,
    outcome: Result<(), String>,
}

fn check_eigen_identities() -> Result<(), String> {
    for a in 1..=50u32 {
        let m = DigitMatrix::new(a);
        let af = f64::from(a);
        if (m.mu_u() + m.mu_s() - af).abs() > 1e-14 * af.max(1.0) {
            return Err(format!("trace identity fails at a={a}"));
        }
        if (m.mu_u() * m.mu_s() + 1.0).abs() > 1e-14 {
            return Err(format!("determinant identity fails at a={a}"));
        }
    }
    Ok(())
}

fn check_semiconjugacy(grid: usize) -> Result<(), String> {
    for i in 0..grid {
        for j in 0..grid {
            let p = [
                (i as f64 + 0.5) / grid as f64,
                (j as f64 + 0.5) / grid as f64,
            ];
            for a in 1..=5u32 {
                let q = torus_apply(a, p);
                let lhs = semiconjugacy_f(q[0], q[1]);
                let rhs = trace_map_apply(a, &semiconjugacy_f(p[0], p[1]));
                let err = (lhs.x1 - rhs.x1)
                    .abs()
                    .max((lhs.x2 - rhs.x2).abs())
                    .max((lhs.x3 - rhs.x3).abs());
                if err >= 1e-12 {
                    return Err(format!("residual {err:e} at a={a}, p=({}, {})", p[0], p[1]));
                }
            }
        }
    }
    Ok(())
}

fn check_fricke_drift(seed: u64) -> Result<(), String> {
    let mut rng = Rng(seed ^ 0xF41C);
    for _ in 0..2000 {
        let p = TriplePoint::new(rng.sym(2.0), rng.sym(2.0), rng.sym(2.0))
            .map_err(|e| e.to_string())?;
        for a in 1..=5u32 {
            let d = fricke_drift_extended(a, &p);
            if d >= 1e-12 {
                return Err(format!("extended drift {d:e} at a={a}"));
            }
        }
    }
    Ok(())
}

fn check_inverse_roundtrip(seed: u64) -> Result<(), String> {
    let mut rng = Rng(seed ^ 0x1172);
    for _ in 0..500 {
        let p = TriplePoint::new(rng.sym(2.0), rng.sym(2.0), rng.sym(2.0))
            .map_err(|e| e.to_string())?;
        for a in 1..=5u32 {
            let q = trace_map_apply(a, &p);
            let tol = if q.max_norm() <= 2.5 {
                1e-12
            } else {
                1e-13 * (1.0 + q.max_norm()) * (1.0 + q.max_norm())
            };
            let back = trace_map_inverse(a, &q);
            let err = (back.x1 - p.x1)
                .abs()
                .max((back.x2 - p.x2).abs())
                .max((back.x3 - p.x3).abs());
            if err >= tol {
                return Err(format!("round-trip error {err:e} at a={a}"));
            }
        }
    }
    Ok(())
}

fn check_free_spectrum() -> Result<(), String> {
    let approx = spectrum_estimate(0.0, &ContinuedFraction::golden(), 5e-3, 50, 10.0)
        .map_err(|e| e.to_string())?;
    let iv = approx.intervals();
    if iv.len() != 1 {
        return Err(format!("expected one band, found {}", iv.len()));
    }
    let (lo, hi) = iv[0];
    if (lo + 2.0).abs() > 1e-2 || (hi - 2.0).abs() > 1e-2 {
        return Err(format!("band [{lo}, {hi}] strays from [-2, 2]"));
    }
    Ok(())
}

fn check_diophantine() -> Result<(), String> {
    use num_traits::{One, Signed};
    for cf in [ContinuedFraction::golden(), ContinuedFraction::silver()] {
        let lo = cf.truncation_value(44).map_err(|e| e.to_string())?;
        let hi = cf.truncation_value(45).map_err(|e| e.to_string())?;
        for pair in convergents(&cf, 40).map_err(|e| e.to_string())? {
            let p = num_rational::BigRational::from(pair.p.clone());
            let q = num_rational::BigRational::from(pair.q.clone());
            let e1 = (q.clone() * lo.clone() - p.clone()).abs();
            let e2 = (q.clone() * hi.clone() - p).abs();
            let worst = if e1 > e2 { e1 } else { e2 };
            if worst * q >= num_rational::BigRational::one() {
                return Err(format!("Diophantine bound fails at k={}", pair.k));
            }
        }
    }
    Ok(())
}

fn check_arc_partition() -> Result<(), String> {
    for cf in [ContinuedFraction::golden(), ContinuedFraction::silver()] {
        let alpha = cf.value_f64();
        for n in [10usize, 50, 144] {
            let arcs = circle_arc_lengths(alpha, n);
            let sum: f64 = arcs.iter().sum();
            if (sum - 1.0).abs() >= 1e-12 {
                return Err(format!("arcs sum to {sum} at n={n}"));
            }
            let distinct = three_distance_gaps(alpha, n).map_err(|e| e.to_string())?;
            if !(1..=3).contains(&distinct.len()) {
                return Err(format!("{} distinct gaps at n={n}", distinct.len()));
            }
        }
    }
    Ok(())
}

fn check_cone_constants(beta: f64) -> Result<(), String> {
    let cone = ConeSpec::new(beta).map_err(|e| e.to_string())?;
    for a in 1..=10u32 {
        let rep = cone_check(&cone, a);
        if !rep.invariant {
            return Err(format!("cone not invariant under digit {a}"));
        }
        if rep.min_expansion < cone.mu_bar() - 1e-12 {
            return Err(format!(
                "min expansion {} under the closed form at a={a}",
                rep.min_expansion
            ));
        }
        let mu_u = DigitMatrix::new(a).mu_u();
        if rep.max_expansion > mu_u + 1e-12 {
            return Err(format!(
                "max expansion {} above the closed form at a={a}",
                rep.max_expansion
            ));
        }
    }
    let base = ConeSpec::reference();
    let rep = cone_check(&base, 1);
    if rep.min_expansion < std::f64::consts::SQRT_2 - 0.01 {
        return Err(format!(
            "reference-cone expansion {} below sqrt(2) - 0.01",
            rep.min_expansion
        ));
    }
    Ok(())
}

fn check_stable_slopes(seed: u64) -> Result<(), String> {
    let golden30 = stable_slope(&[1u32; 30]).map_err(|e| e.to_string())?;
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    if (golden30 + phi).abs() >= 1e-9 {
        return Err(format!("golden slope {golden30} strays from -phi"));
    }
    let mut rng = Rng(seed ^ 0x51DE);
    for _ in 0..20 {
        let len = rng.int_in(1, 20) as usize;
        let digits: Vec<u32> = (0..len).map(|_| rng.int_in(1, 9) as u32).collect();
        let exact = stable_slope_exact(&digits).map_err(|e| e.to_string())?;
        let value = ContinuedFraction::from_digits(digits.clone())
            .and_then(|cf| cf.truncation_value(len))
            .map_err(|e| e.to_string())?;
        if exact != -value.recip() {
            return Err(format!("exact slope mismatch for {digits:?}"));
        }
    }
    Ok(())
}

fn middle_construction(stage: u32, keep: f64) -> Result<IntervalSet<f64>, String> {
    let mut intervals = vec![(0.0f64, 1.0f64)];
    for _ in 0..stage {
        intervals = intervals
            .iter()
            .flat_map(|&(lo, hi)| {
                let w = hi - lo;
                [(lo, lo + keep * w), (hi - keep * w, hi)]
            })
            .collect();
    }
    IntervalSet::from_f64(intervals).map_err(|e| e.to_string())
}

fn check_thickness_anchor() -> Result<(), String> {
    let thirds = middle_construction(6, 1.0 / 3.0)?;
    let rep = thickness(&thirds);
    let tau = rep.tau.to_f64();
    if (tau - 1.0).abs() >= 1e-12 {
        return Err(format!("middle-thirds tau {tau}"));
    }
    if (rep.dim_lower - 2.0f64.ln() / 3.0f64.ln()).abs() >= 1e-12 {
        return Err(format!("middle-thirds dim lower {}", rep.dim_lower));
    }
    let halves = middle_construction(5, 0.25)?;
    let rep = thickness(&halves);
    // quarter splits are exact dyadics, so the ratio is exact
    if rep.tau != Thickness::Finite(0.5) {
        return Err(format!("middle-half tau {}", rep.tau.to_f64()));
    }
    if (rep.dim_lower - 0.5).abs() >= 1e-15 {
        return Err(format!("middle-half dim lower {}", rep.dim_lower));
    }
    if dim_lower_bound(&Thickness::<f64>::Infinite) != 1.0 {
        return Err("gap-free set must get dimension 1".into());
    }
    Ok(())
}

fn check_zero_coupling_linearity() -> Result<(), String> {
    for a in [1u32, 2, 3] {
        let fam = PerturbedMapFamily::build(0.0, a, 0.1).map_err(|e| e.to_string())?;
        for i in 0..40 {
            for j in 0..40 {
                let p = [i as f64 / 40.0, j as f64 / 40.0];
                let got = fam.apply(p).map_err(|e| e.to_string())?;
                let want = torus_apply(a, p);
                if got[0].to_bits() != want[0].to_bits() || got[1].to_bits() != want[1].to_bits() {
                    return Err(format!("not bitwise linear at a={a}, p={p:?}"));
                }
            }
        }
    }
    Ok(())
}

fn check_property_c(grid: usize) -> Result<(), String> {
    // positive couplings certify against the enlarged cone; see the
    // cone-width guidance on property_c_verify
    let cone = ConeSpec::new(0.03).map_err(|e| e.to_string())?;
    let maps: Vec<PerturbedMapFamily> = [1u32, 2]
        .iter()
        .map(|&a| PerturbedMapFamily::build(0.02, a, 0.3))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let rep = property_c_verify(&maps, &cone, &cone, grid, 0.1).map_err(|e| e.to_string())?;
    if rep.cone_violations != 0 || !rep.passes() {
        return Err(format!(
            "small coupling: {} violations, worst expansion {}",
            rep.cone_violations, rep.worst_expansion
        ));
    }
    // negative control: a large coupling must break the certificate
    let mut opts = PerturbOptions::default();
    opts.allow_large_lambda = true;
    let big = PerturbedMapFamily::build_with(0.5, 1, 0.3, opts).map_err(|e| e.to_string())?;
    let rep = property_c_verify(&[big], &cone, &cone, grid.min(60), 0.1)
        .map_err(|e| e.to_string())?;
    if rep.cone_violations == 0 {
        return Err("negative control produced no violations".into());
    }
    Ok(())
}

/// Runs the full invariant suite and reports a machine-readable failure
/// list. Canonical inputs are fixed for reproducibility; `--beta`, `--grid`,
/// and `--seed` parameterize the cone, grid-sweep, and randomized checks.
pub fn cmd_verify(cfg: &RunConfig) -> Result<i32, AppError> {
    let checks = vec![
        CheckResult { name: "eigen-identities", outcome: check_eigen_identities() },
        CheckResult { name: "semiconjugacy-exact", outcome: check_semiconjugacy(cfg.grid) },
        CheckResult { name: "fricke-drift-extended", outcome: check_fricke_drift(cfg.seed) },
        CheckResult { name: "inverse-roundtrip", outcome: check_inverse_roundtrip(cfg.seed) },
        CheckResult { name: "free-spectrum-band", outcome: check_free_spectrum() },
        CheckResult { name: "diophantine-convergents", outcome: check_diophantine() },
        CheckResult { name: "arc-partition", outcome: check_arc_partition() },
        CheckResult { name: "cone-constants", outcome: check_cone_constants(cfg.beta) },
        CheckResult { name: "stable-slopes", outcome: check_stable_slopes(cfg.seed) },
        CheckResult { name: "thickness-anchor", outcome: check_thickness_anchor() },
        CheckResult { name: "zero-coupling-linearity", outcome: check_zero_coupling_linearity() },
        CheckResult { name: "property-c", outcome: check_property_c(cfg.grid) },
    ];

    let failures: Vec<&str> = checks
        .iter()
        .filter(|c| c.outcome.is_err())
        .map(|c| c.name)
        .collect();
    let report = json!({
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "checks": checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.outcome.is_ok(),
                    "detail": c.outcome.as_ref().err(),
                })
            })
            .collect::<Vec<_>>(),
        "failures": failures,
        "all_passed": failures.is_empty(),
    });
    deliver(&json_text(&report), cfg.output.as_deref())?;
    Ok(if failures.is_empty() { 0 } else { EXIT_VERIFY })
}
