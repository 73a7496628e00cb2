//! Monte Carlo experiments estimating both sides of the martingale
//! inequalities on simulated enhanced paths.
//!
//! Determinism contract: replication `i` draws only from RNG stream `i` of
//! the master seed, replication outputs are collected in index order, and
//! aggregation uses pairwise summation over that order. Reports are
//! therefore byte-identical for any worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use crate::config::{CliError, Settings};
use crate::report::{mean_se, pairwise_sum, ExperimentReport, ReportRow, REPORT_SCHEMA};
use roughbdg_core::path::{geodesic_approx, piecewise_linear_approx, Dissection};
use roughbdg_core::rng::{CounterRng, RngSpec};
use roughbdg_core::stochastic::{refine, simulate, MartingaleSample};
use roughbdg_core::variation::{
    discrete_q_variation, interpolation_bound_check, p_variation, pvar_distance, sup_distance,
};
use roughbdg_core::{GroupPath, HomNorm, NormKind, VectorNorm};

/// Sup over grid pairs of (homogeneous increment norm, level-1 l2 norm) in
/// one pass. For the default planar sum-l2 norm a squared lower-bound test
/// skips the square roots on pairs that cannot improve either running sup,
/// which makes the O(n²) scan cheap enough for the pinned replication
/// counts.
fn sup_norms(path: &GroupPath, norm: &HomNorm) -> Result<(f64, f64), CliError> {
    if path.dim() == 2 && norm.kind == NormKind::ExplicitSum && norm.vector == VectorNorm::L2 {
        return Ok(sup_norms_planar_suml2(path));
    }
    let n = path.len();
    let mut sup_h = 0.0f64;
    let mut sup_1 = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let h = path.increment_norm(i, j, norm).map_err(to_cli)?;
            if h > sup_h {
                sup_h = h;
            }
            let l1 = path.level1_increment_norm(i, j, VectorNorm::L2);
            if l1 > sup_1 {
                sup_1 = l1;
            }
        }
    }
    Ok((sup_h, sup_1))
}

fn sup_norms_planar_suml2(path: &GroupPath) -> (f64, f64) {
    let n = path.len();
    let xs = path.xs_raw();
    let aas = path.aas_raw();
    let mut sup_h = 0.0f64;
    let mut sup_h_sq2 = 0.0f64; // sup_h² / 2, threshold for the skip test
    let mut sup_1_sq = 0.0f64;
    for i in 0..n {
        let (xi0, xi1) = (xs[2 * i], xs[2 * i + 1]);
        let ai = aas[4 * i + 1];
        for j in (i + 1)..n {
            let dx0 = xs[2 * j] - xi0;
            let dx1 = xs[2 * j + 1] - xi1;
            let lsq = dx0 * dx0 + dx1 * dx1;
            if lsq > sup_1_sq {
                sup_1_sq = lsq;
            }
            let da = (aas[4 * j + 1] - ai - 0.5 * (xi0 * xs[2 * j + 1] - xs[2 * j] * xi1)).abs();
            // (|Δx| + √|Δa|)² ≤ 2(|Δx|² + |Δa|), so pairs failing this
            // cannot beat the current sup and need no square roots.
            if lsq + da > sup_h_sq2 {
                let h = lsq.sqrt() + da.sqrt();
                if h > sup_h {
                    sup_h = h;
                    sup_h_sq2 = 0.5 * h * h;
                }
            }
        }
    }
    (sup_h, sup_1_sq.sqrt())
}

/// Moderate function F(x) = x^r, r > 0.
#[derive(Debug, Clone, Copy)]
pub struct Power(pub f64);

impl Power {
    pub fn eval(&self, x: f64) -> f64 {
        if self.0 == 1.0 {
            x
        } else {
            x.powf(self.0)
        }
    }
}

fn to_cli(e: roughbdg_core::Error) -> CliError {
    match e {
        roughbdg_core::Error::Unsupported(m) => CliError::unsupported(m),
        other => CliError::numeric(other.to_string()),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::numeric(format!("thread pool: {e}")))
}

/// Runs one closure per replication; output order is replication order.
fn run_reps<T, F>(r_mc: usize, workers: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync,
{
    pool(workers)?.install(|| (0..r_mc as u64).into_par_iter().map(|i| f(i)).collect())
}

fn spec_for(s: &Settings, rep: u64) -> RngSpec {
    RngSpec {
        master_seed: s.master_seed,
        stream_index: rep,
    }
}

fn simulate_rep(s: &Settings, rep: u64) -> Result<MartingaleSample, CliError> {
    let family = s.family.to_family(s.d, s.horizon);
    simulate(&family, s.n_fine, &spec_for(s, rep)).map_err(to_cli)
}

fn refine_rep(s: &Settings, sample: &MartingaleSample, rep: u64) -> Result<MartingaleSample, CliError> {
    refine(sample, &spec_for(s, rep)).map_err(to_cli)
}

fn parse_dissection(name: &str, n_points: usize) -> Result<Dissection, CliError> {
    if name == "two-point" {
        return Ok(Dissection::two_point(n_points));
    }
    if name == "full" {
        return Ok(Dissection::full(n_points));
    }
    if let Some(k) = name.strip_prefix("dyadic-") {
        let k: u32 = k
            .parse()
            .map_err(|_| CliError::schema(format!("bad dissection {name:?}")))?;
        return Dissection::dyadic(n_points, k).map_err(to_cli);
    }
    if let Some(r) = name.strip_prefix("geometric-") {
        let r: f64 = r
            .parse()
            .map_err(|_| CliError::schema(format!("bad dissection {name:?}")))?;
        return Dissection::geometric(n_points, r).map_err(to_cli);
    }
    Err(CliError::schema(format!(
        "unknown dissection {name:?}; expected two-point, dyadic-<k>, geometric-<ratio> or full"
    )))
}

fn base_params(s: &Settings) -> BTreeMap<String, serde_json::Value> {
    let mut params = BTreeMap::new();
    params.insert("d".into(), json!(s.d));
    params.insert("horizon".into(), json!(s.horizon));
    params.insert("n_fine".into(), json!(s.n_fine));
    params.insert("f_power".into(), json!(s.f_power));
    params.insert("norm".into(), json!(s.norm_name));
    params
}

fn require_finite(report: &ExperimentReport) -> Result<(), CliError> {
    let all = [
        report.lhs_mean,
        report.rhs_mean,
        report.implied_constant,
        report.implied_constant_lower,
    ];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(CliError::numeric(format!(
            "{}: non-finite estimate (lhs {}, rhs {})",
            report.name, report.lhs_mean, report.rhs_mean
        )));
    }
    Ok(())
}

fn finish(mut report: ExperimentReport) -> Result<ExperimentReport, CliError> {
    require_finite(&report)?;
    report.schema = REPORT_SCHEMA;
    Ok(report)
}

pub fn run_experiment(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    match s.experiment.as_str() {
        "bdg_classical" => bdg_classical(s, workers),
        "chebyshev_group_bound" => chebyshev_group_bound(s, workers),
        "bdg_group_uniform" => bdg_group_uniform(s, workers),
        "bdg_pvar" => bdg_pvar(s, workers),
        "lepingle_discrete" => lepingle_discrete(s, workers),
        "uniform_dissection_bound" => uniform_dissection_bound(s, workers),
        "pwl_convergence" => pwl_convergence(s, workers),
        "geodesic_sup_bound" => geodesic_sup_bound(s, workers),
        other => Err(CliError::schema(format!("unknown experiment {other:?}"))),
    }
}

/// Classical BDG at the chosen moderate function: E F(sup |M|) against
/// E F(|⟨M⟩|^{1/2}).
fn bdg_classical(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let f = Power(s.f_power);
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let refined = refine_rep(s, &sample, rep)?;
        Ok([
            f.eval(sample.sup_abs()),
            f.eval(sample.bracket_total().sqrt()),
            f.eval(refined.sup_abs()),
            f.eval(refined.bracket_total().sqrt()),
        ])
    })?;
    two_sided_report(s, "bdg_classical", per_rep, base_params(s))
}

/// Shared shape for the two-sided comparisons: per replication
/// [lhs, rhs, refined lhs, refined rhs].
fn two_sided_report(
    s: &Settings,
    name: &str,
    per_rep: Vec<[f64; 4]>,
    params: BTreeMap<String, serde_json::Value>,
) -> Result<ExperimentReport, CliError> {
    let lhs: Vec<f64> = per_rep.iter().map(|r| r[0]).collect();
    let rhs: Vec<f64> = per_rep.iter().map(|r| r[1]).collect();
    let lhs_r: Vec<f64> = per_rep.iter().map(|r| r[2]).collect();
    let rhs_r: Vec<f64> = per_rep.iter().map(|r| r[3]).collect();
    let (lhs_mean, lhs_se) = mean_se(&lhs);
    let (rhs_mean, rhs_se) = mean_se(&rhs);
    let (lhs_mean_r, _) = mean_se(&lhs_r);
    let (rhs_mean_r, _) = mean_se(&rhs_r);
    let implied = lhs_mean / rhs_mean;
    let implied_r = lhs_mean_r / rhs_mean_r;
    let implied_se = implied * (lhs_se / lhs_mean + rhs_se / rhs_mean);
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: name.into(),
        family: s.family.label(),
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean,
        lhs_se,
        rhs_mean,
        rhs_se,
        implied_constant: implied,
        implied_constant_lower: rhs_mean / lhs_mean,
        refinement_delta: (implied - implied_r).abs(),
        rows: vec![ReportRow {
            label: "overall".into(),
            x: 0.0,
            lhs: lhs_mean,
            lhs_se,
            rhs: rhs_mean,
            rhs_se,
            implied: implied_se,
        }],
    })
}

/// Tail bound P(sup ‖M_{s,t}‖ ≥ λ) ≤ A E|⟨M⟩|/λ² over a λ grid; the
/// implied A is the worst ratio over the grid.
fn chebyshev_group_bound(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    if s.lambda_grid.is_empty() {
        return Err(CliError::schema("lambda grid must be non-empty"));
    }
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let refined = refine_rep(s, &sample, rep)?;
        let (sup, _) = sup_norms(&sample.lift, &s.norm)?;
        let (sup_r, _) = sup_norms(&refined.lift, &s.norm)?;
        Ok([
            sup,
            sample.bracket_total(),
            sup_r,
            refined.bracket_total(),
        ])
    })?;
    let n = s.r_mc as f64;
    let bracket: Vec<f64> = per_rep.iter().map(|r| r[1]).collect();
    let (bracket_mean, bracket_se) = mean_se(&bracket);
    let bracket_r: Vec<f64> = per_rep.iter().map(|r| r[3]).collect();
    let (bracket_mean_r, _) = mean_se(&bracket_r);

    let mut rows = Vec::new();
    let mut implied = 0.0f64;
    let mut implied_r = 0.0f64;
    let mut best = None;
    for &lambda in &s.lambda_grid {
        let hits: Vec<f64> = per_rep
            .iter()
            .map(|r| if r[0] >= lambda { 1.0 } else { 0.0 })
            .collect();
        let tail = pairwise_sum(&hits) / n;
        let tail_se = (tail * (1.0 - tail) / n).sqrt();
        let bound = bracket_mean / (lambda * lambda);
        let ratio = tail / bound;
        if ratio > implied {
            implied = ratio;
            best = Some((tail, tail_se, bound, lambda));
        }
        let hits_r: Vec<f64> = per_rep
            .iter()
            .map(|r| if r[2] >= lambda { 1.0 } else { 0.0 })
            .collect();
        let tail_r = pairwise_sum(&hits_r) / n;
        implied_r = implied_r.max(tail_r / (bracket_mean_r / (lambda * lambda)));
        rows.push(ReportRow {
            label: format!("lambda-{lambda}"),
            x: lambda,
            lhs: tail,
            lhs_se: tail_se,
            rhs: bound,
            rhs_se: bracket_se / (lambda * lambda),
            implied: ratio,
        });
    }
    // All-zero tails leave `best` unset; report the first grid point then.
    let (tail, tail_se, bound, lambda) = best.unwrap_or_else(|| {
        let r = &rows[0];
        (r.lhs, r.lhs_se, r.rhs, r.x)
    });
    let mut params = base_params(s);
    params.insert("lambda_grid".into(), json!(s.lambda_grid));
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: "chebyshev_group_bound".into(),
        family: s.family.label(),
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean: tail,
        lhs_se: tail_se,
        rhs_mean: bound,
        rhs_se: bracket_se / (lambda * lambda),
        implied_constant: implied,
        implied_constant_lower: 0.0,
        refinement_delta: (implied - implied_r).abs(),
        rows,
    })
}

/// Two-sided comparison of E F(sup ‖M_{s,t}‖) with
/// E F(|⟨M⟩|^{1/2}); the lower-bound ordering sup ‖M_{s,t}‖ ≥ sup |M_{s,t}|
/// is asserted path by path.
fn bdg_group_uniform(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let f = Power(s.f_power);
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let refined = refine_rep(s, &sample, rep)?;
        let (sup, sup_level1) = sup_norms(&sample.lift, &s.norm)?;
        if sup < sup_level1 {
            return Err(CliError::numeric(format!(
                "rep {rep}: sup group norm {sup} below level-1 sup {sup_level1}"
            )));
        }
        let (sup_r, _) = sup_norms(&refined.lift, &s.norm)?;
        Ok([
            f.eval(sup),
            f.eval(sample.bracket_total().sqrt()),
            f.eval(sup_r),
            f.eval(refined.bracket_total().sqrt()),
        ])
    })?;
    two_sided_report(s, "bdg_group_uniform", per_rep, base_params(s))
}

/// p-variation BDG: E F(‖M‖_{p-var}) against E F(|⟨M⟩|^{1/2}), p > 2.
fn bdg_pvar(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let f = Power(s.f_power);
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let refined = refine_rep(s, &sample, rep)?;
        let pv = p_variation(&sample.lift, s.p, &s.norm).map_err(to_cli)?.value;
        let (sup, sup_level1) = sup_norms(&sample.lift, &s.norm)?;
        // Path-by-path sanity chain: the two-point dissection of any pair
        // is admissible, and the norm dominates the level-1 part.
        if pv < sup * (1.0 - 1e-12) || sup < sup_level1 {
            return Err(CliError::numeric(format!(
                "rep {rep}: ordering violated (pvar {pv}, sup {sup}, level-1 {sup_level1})"
            )));
        }
        let pv_r = p_variation(&refined.lift, s.p, &s.norm).map_err(to_cli)?.value;
        Ok([
            f.eval(pv),
            f.eval(sample.bracket_total().sqrt()),
            f.eval(pv_r),
            f.eval(refined.bracket_total().sqrt()),
        ])
    })?;
    let mut params = base_params(s);
    params.insert("p".into(), json!(s.p));
    two_sided_report(s, "bdg_pvar", per_rep, params)
}

/// Discrete-time lemma: E F(|Y|_{p-var}) ≤ c E F((Σ|ΔY|^q)^{1/q}) on ±1
/// walks or on block Lévy-area martingales harvested from a lift.
fn lepingle_discrete(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let f = Power(s.f_power);
    let is_walk = s.walk == "pm1";
    if !is_walk && s.d < 2 {
        return Err(CliError::unsupported(
            "area-blocks walk needs d >= 2 for a Lévy area",
        ));
    }
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let y: Vec<f64> = if is_walk {
            let rng = CounterRng::new(&spec_for(s, rep));
            let mut y = vec![0.0; s.n_steps + 1];
            for k in 0..s.n_steps {
                let step = if rng.raw(k as u64) & 1 == 1 { 1.0 } else { -1.0 };
                y[k + 1] = y[k] + step;
            }
            y
        } else {
            // Increments are the Lévy areas of dyadic blocks of the lift.
            let sample = simulate_rep(s, rep)?;
            let n_blocks = s.n_steps.min(sample.n_steps());
            let block = sample.n_steps() / n_blocks;
            let mut y = vec![0.0; n_blocks + 1];
            for b in 0..n_blocks {
                let g = sample.lift.increment(b * block, (b + 1) * block);
                y[b + 1] = y[b] + g.log().a[1];
            }
            y
        };
        let lhs = discrete_q_variation(&y, 1, s.p).map_err(to_cli)?.value;
        let mut qsum = 0.0;
        for w in y.windows(2) {
            qsum += (w[1] - w[0]).abs().powf(s.q);
        }
        let rhs = qsum.powf(1.0 / s.q);
        Ok([f.eval(lhs), f.eval(rhs)])
    })?;
    let lhs: Vec<f64> = per_rep.iter().map(|r| r[0]).collect();
    let rhs: Vec<f64> = per_rep.iter().map(|r| r[1]).collect();
    let (lhs_mean, lhs_se) = mean_se(&lhs);
    let (rhs_mean, rhs_se) = mean_se(&rhs);
    let mut params = base_params(s);
    params.insert("p".into(), json!(s.p));
    params.insert("q".into(), json!(s.q));
    params.insert("walk".into(), json!(s.walk));
    params.insert("n_steps".into(), json!(s.n_steps));
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: "lepingle_discrete".into(),
        family: if is_walk {
            "pm1_walk".into()
        } else {
            format!("area_blocks_{}", s.family.label())
        },
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean,
        lhs_se,
        rhs_mean,
        rhs_se,
        implied_constant: lhs_mean / rhs_mean,
        implied_constant_lower: rhs_mean / lhs_mean,
        refinement_delta: 0.0,
        rows: vec![ReportRow {
            label: "overall".into(),
            x: 0.0,
            lhs: lhs_mean,
            lhs_se,
            rhs: rhs_mean,
            rhs_se,
            implied: lhs_mean / rhs_mean,
        }],
    })
}

/// E F(‖M^D‖_{p-var}) ≤ C E F(|⟨M⟩|^{1/2}) uniformly over a dissection
/// set; reports the per-D constants and their maximum.
fn uniform_dissection_bound(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let f = Power(s.f_power);
    let n_diss = s.dissections.len();
    if n_diss == 0 {
        return Err(CliError::schema("empty dissection set"));
    }
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let n_points = sample.lift.len();
        let mut out = Vec::with_capacity(n_diss + 1);
        for name in &s.dissections {
            let diss = parse_dissection(name, n_points)?;
            let approx = piecewise_linear_approx(&sample.lift, &diss).map_err(to_cli)?;
            let pv = p_variation(&approx, s.p, &s.norm).map_err(to_cli)?.value;
            out.push(f.eval(pv));
        }
        out.push(f.eval(sample.bracket_total().sqrt()));
        Ok(out)
    })?;
    let rhs: Vec<f64> = per_rep.iter().map(|r| r[n_diss]).collect();
    let (rhs_mean, rhs_se) = mean_se(&rhs);
    let mut rows = Vec::new();
    let mut max_implied = 0.0f64;
    let mut max_lhs = (0.0, 0.0);
    for (di, name) in s.dissections.iter().enumerate() {
        let lhs: Vec<f64> = per_rep.iter().map(|r| r[di]).collect();
        let (lhs_mean, lhs_se) = mean_se(&lhs);
        let implied = lhs_mean / rhs_mean;
        if implied > max_implied {
            max_implied = implied;
            max_lhs = (lhs_mean, lhs_se);
        }
        rows.push(ReportRow {
            label: name.clone(),
            x: di as f64,
            lhs: lhs_mean,
            lhs_se,
            rhs: rhs_mean,
            rhs_se,
            implied,
        });
    }
    let mut params = base_params(s);
    params.insert("p".into(), json!(s.p));
    params.insert("dissections".into(), json!(s.dissections));
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: "uniform_dissection_bound".into(),
        family: s.family.label(),
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean: max_lhs.0,
        lhs_se: max_lhs.1,
        rhs_mean,
        rhs_se,
        implied_constant: max_implied,
        implied_constant_lower: 0.0,
        refinement_delta: 0.0,
        rows,
    })
}

/// Convergence of the piecewise-linear approximation along dyadic meshes:
/// L^q norms of d_∞ and d_{p-var}, plus the interpolation-bound constant.
fn pwl_convergence(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    let levels = s.mesh_levels.clone();
    let n_levels = levels.len();
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let n_points = sample.lift.len();
        let mut out = Vec::with_capacity(2 * n_levels + 1);
        let mut max_interp_c = 0.0f64;
        for &k in &levels {
            let diss = Dissection::dyadic(n_points, k).map_err(to_cli)?;
            let approx = piecewise_linear_approx(&sample.lift, &diss).map_err(to_cli)?;
            let d_inf = sup_distance(&sample.lift, &approx, &s.norm)
                .map_err(to_cli)?
                .increment;
            let d_pv = pvar_distance(&sample.lift, &approx, s.p, &s.norm).map_err(to_cli)?;
            let interp =
                interpolation_bound_check(&sample.lift, &approx, s.p, s.p_prime, &s.norm)
                    .map_err(to_cli)?;
            if interp.implied_c > max_interp_c {
                max_interp_c = interp.implied_c;
            }
            out.push(d_inf.powf(s.q));
            out.push(d_pv.powf(s.q));
        }
        out.push(max_interp_c);
        Ok(out)
    })?;
    let mut rows = Vec::new();
    let mut log_mesh = Vec::new();
    let mut log_dinf = Vec::new();
    let mut log_dpv = Vec::new();
    for (li, &k) in levels.iter().enumerate() {
        let dinf_q: Vec<f64> = per_rep.iter().map(|r| r[2 * li]).collect();
        let dpv_q: Vec<f64> = per_rep.iter().map(|r| r[2 * li + 1]).collect();
        let (m_inf, se_inf) = mean_se(&dinf_q);
        let (m_pv, se_pv) = mean_se(&dpv_q);
        let root = 1.0 / s.q;
        // Delta method for the standard error of m^{1/q}.
        let v_inf = m_inf.powf(root);
        let v_pv = m_pv.powf(root);
        let se_v_inf = se_inf * root * m_inf.powf(root - 1.0);
        let se_v_pv = se_pv * root * m_pv.powf(root - 1.0);
        let mesh = 0.5f64.powi(k as i32);
        rows.push(ReportRow {
            label: format!("mesh-2^-{k}"),
            x: mesh,
            lhs: v_inf,
            lhs_se: se_v_inf,
            rhs: v_pv,
            rhs_se: se_v_pv,
            implied: v_inf / v_pv,
        });
        log_mesh.push(mesh.ln());
        log_dinf.push(v_inf.ln());
        log_dpv.push(v_pv.ln());
    }
    let slope_inf = lls_slope(&log_mesh, &log_dinf);
    let slope_pv = lls_slope(&log_mesh, &log_dpv);
    let interp_max = per_rep
        .iter()
        .map(|r| r[2 * n_levels])
        .fold(0.0f64, f64::max);
    let mut params = base_params(s);
    params.insert("p".into(), json!(s.p));
    params.insert("p_prime".into(), json!(s.p_prime));
    params.insert("q".into(), json!(s.q));
    params.insert("mesh_levels".into(), json!(levels));
    params.insert("interp_max_c".into(), json!(interp_max));
    let first = rows.first().ok_or_else(|| CliError::schema("empty mesh set"))?.clone();
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: "pwl_convergence".into(),
        family: s.family.label(),
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean: first.lhs,
        lhs_se: first.lhs_se,
        rhs_mean: first.rhs,
        rhs_se: first.rhs_se,
        // Log-log slopes against the mesh: both should be positive, since
        // the distances shrink with the mesh.
        implied_constant: slope_inf,
        implied_constant_lower: slope_pv,
        refinement_delta: 0.0,
        rows,
    })
}

/// Least-squares slope of y against x.
fn lls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = pairwise_sum(x) / n;
    let my = pairwise_sum(y) / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

/// Geodesic approximation bound with the sup over the dissection set taken
/// inside the expectation.
fn geodesic_sup_bound(s: &Settings, workers: usize) -> Result<ExperimentReport, CliError> {
    if s.d != 2 {
        return Err(CliError::unsupported("geodesic_sup_bound requires d = 2"));
    }
    let f = Power(s.f_power);
    let n_diss = s.dissections.len();
    let per_rep = run_reps(s.r_mc, workers, |rep| {
        let sample = simulate_rep(s, rep)?;
        let n_points = sample.lift.len();
        let mut out = Vec::with_capacity(n_diss + 2);
        let mut sup_pv = 0.0f64;
        for name in &s.dissections {
            let diss = parse_dissection(name, n_points)?;
            let geo = geodesic_approx(&sample.lift, &diss, s.m_geodesic).map_err(to_cli)?;
            let pv = p_variation(&geo, s.p, &s.norm).map_err(to_cli)?.value;
            if pv > sup_pv {
                sup_pv = pv;
            }
            out.push(f.eval(pv));
        }
        out.push(f.eval(sup_pv));
        out.push(f.eval(sample.bracket_total().sqrt()));
        Ok(out)
    })?;
    let sup_vals: Vec<f64> = per_rep.iter().map(|r| r[n_diss]).collect();
    let rhs: Vec<f64> = per_rep.iter().map(|r| r[n_diss + 1]).collect();
    let (lhs_mean, lhs_se) = mean_se(&sup_vals);
    let (rhs_mean, rhs_se) = mean_se(&rhs);
    let mut rows = Vec::new();
    let mut max_of_means = 0.0f64;
    for (di, name) in s.dissections.iter().enumerate() {
        let vals: Vec<f64> = per_rep.iter().map(|r| r[di]).collect();
        let (m, se) = mean_se(&vals);
        if m > max_of_means {
            max_of_means = m;
        }
        rows.push(ReportRow {
            label: name.clone(),
            x: di as f64,
            lhs: m,
            lhs_se: se,
            rhs: rhs_mean,
            rhs_se,
            implied: m / rhs_mean,
        });
    }
    if lhs_mean < max_of_means {
        return Err(CliError::numeric(format!(
            "sup-inside mean {lhs_mean} below max of per-dissection means {max_of_means}"
        )));
    }
    let mut params = base_params(s);
    params.insert("p".into(), json!(s.p));
    params.insert("m_geodesic".into(), json!(s.m_geodesic));
    params.insert("dissections".into(), json!(s.dissections));
    finish(ExperimentReport {
        schema: REPORT_SCHEMA,
        name: "geodesic_sup_bound".into(),
        family: s.family.label(),
        params,
        r_mc: s.r_mc,
        master_seed: s.master_seed,
        lhs_mean,
        lhs_se,
        rhs_mean,
        rhs_se,
        implied_constant: lhs_mean / rhs_mean,
        implied_constant_lower: max_of_means / rhs_mean,
        refinement_delta: 0.0,
        rows,
    })
}
