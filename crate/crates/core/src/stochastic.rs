//! Simulation of continuous local martingales with their Lévy areas and
//! brackets.
//!
//! Ground truth for the enhanced path is the exact lift of the fine
//! polygonal interpolant; brackets are accumulated in closed form per
//! family. All randomness is counter-based (see [`crate::rng`]), with the
//! counter layout (level << 48) | (step·d + component), so dyadic
//! refinement draws never collide with the base draws.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::path::{self, GroupPath};
use crate::rng::{CounterRng, RngSpec};

/// Number of dyadic switching blocks for the step-integrand family.
const STEP_INTEGRAND_BLOCKS: usize = 8;

/// A parametrized family of continuous (local) martingales on [0, T] with a
/// closed-form bracket along the fine grid.
#[derive(Debug, Clone, PartialEq)]
pub enum MartingaleFamily {
    /// Standard d-dimensional Brownian motion.
    BrownianMotion { d: usize, horizon: f64 },
    /// c · B for a scalar c; the lift is the dilation of the driving lift.
    ScaledBm { d: usize, horizon: f64, c: f64 },
    /// B ∘ σ for the deterministic increasing clock σ(t) = T^{1−γ} t^γ.
    TimeChangedBm { d: usize, horizon: f64, gamma: f64 },
    /// Brownian motion frozen after its first grid-time exit from the
    /// radius-R ball.
    StoppedBm { d: usize, horizon: f64, radius: f64 },
    /// ∫ H dB with H ∈ {−1, +1} constant on dyadic blocks, adapted: the
    /// sign for a block is the sign of the previous block's first-component
    /// increment.
    StepIntegrand { d: usize, horizon: f64 },
}

impl MartingaleFamily {
    pub fn dim(&self) -> usize {
        match self {
            MartingaleFamily::BrownianMotion { d, .. }
            | MartingaleFamily::ScaledBm { d, .. }
            | MartingaleFamily::TimeChangedBm { d, .. }
            | MartingaleFamily::StoppedBm { d, .. }
            | MartingaleFamily::StepIntegrand { d, .. } => *d,
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            MartingaleFamily::BrownianMotion { horizon, .. }
            | MartingaleFamily::ScaledBm { horizon, .. }
            | MartingaleFamily::TimeChangedBm { horizon, .. }
            | MartingaleFamily::StoppedBm { horizon, .. }
            | MartingaleFamily::StepIntegrand { horizon, .. } => *horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(self.horizon() > 0.0) {
            return Err(Error::InvalidInput("horizon must be positive".into()));
        }
        match self {
            MartingaleFamily::ScaledBm { c, .. } if *c == 0.0 || !c.is_finite() => {
                Err(Error::InvalidInput("scale c must be finite and nonzero".into()))
            }
            MartingaleFamily::TimeChangedBm { gamma, .. } if !(*gamma > 0.0) => Err(
                Error::InvalidInput("clock exponent gamma must be positive".into()),
            ),
            MartingaleFamily::StoppedBm { radius, .. } if !(*radius > 0.0) => {
                Err(Error::InvalidInput("exit radius must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// The deterministic clock of the time-changed family.
    pub fn clock(&self, t: f64) -> f64 {
        match self {
            MartingaleFamily::TimeChangedBm { horizon, gamma, .. } => {
                math::powf(*horizon, 1.0 - *gamma) * math::powf(t, *gamma)
            }
            _ => t,
        }
    }
}

/// One simulated path: fine grid, values, running componentwise bracket and
/// the lifted group path.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleSample {
    pub family: MartingaleFamily,
    /// Dyadic refinement level; 0 for a freshly simulated sample.
    pub level: u32,
    pub times: Vec<f64>,
    /// (N+1) × d values, row-major; row 0 is zero.
    pub values: Vec<f64>,
    /// (N+1) × d componentwise running bracket ⟨Mⁱ⟩.
    pub bracket: Vec<f64>,
    pub lift: GroupPath,
}

#[inline]
fn draw_counter(level: u32, idx: u64) -> u64 {
    ((level as u64) << 48) | idx
}

impl MartingaleSample {
    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn value_at(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.values[k * d..(k + 1) * d]
    }

    pub fn bracket_at(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.bracket[k * d..(k + 1) * d]
    }

    /// |⟨M⟩_T| = Σᵢ ⟨Mⁱ⟩_T.
    pub fn bracket_total(&self) -> f64 {
        self.bracket_at(self.times.len() - 1).iter().sum()
    }

    /// sup over grid times of the Euclidean norm |M_t|₂.
    pub fn sup_abs(&self) -> f64 {
        let d = self.dim();
        let mut best = 0.0;
        for k in 0..self.times.len() {
            let mut acc = 0.0;
            for i in 0..d {
                let v = self.values[k * d + i];
                acc += v * v;
            }
            let v = math::sqrt(acc);
            if v > best {
                best = v;
            }
        }
        best
    }
}

fn power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Brownian values on an arbitrary strictly increasing grid starting at its
/// first entry, with per-step variance equal to the grid increment. Step k,
/// component i consumes counter (level << 48) | (k·d + i).
fn gaussian_polygon(d: usize, clock: &[f64], rng: &CounterRng, level: u32) -> Vec<f64> {
    let n = clock.len() - 1;
    let mut values = vec![0.0; (n + 1) * d];
    for k in 0..n {
        let sd = math::sqrt(clock[k + 1] - clock[k]);
        for i in 0..d {
            let g = rng.gaussian(draw_counter(level, (k * d + i) as u64));
            values[(k + 1) * d + i] = values[k * d + i] + sd * g;
        }
    }
    values
}

/// Simulates one path of the family on the uniform grid with `n_fine`
/// steps. `n_fine` must be a power of two so dyadic refinement checks are
/// available.
pub fn simulate(
    family: &MartingaleFamily,
    n_fine: usize,
    spec: &RngSpec,
) -> Result<MartingaleSample> {
    family.validate()?;
    if n_fine < 2 || !power_of_two(n_fine) {
        return Err(Error::InvalidInput(format!(
            "n_fine must be a power of two >= 2, got {n_fine}"
        )));
    }
    let d = family.dim();
    let t_max = family.horizon();
    let rng = CounterRng::new(spec);
    let times: Vec<f64> = (0..=n_fine)
        .map(|k| t_max * k as f64 / n_fine as f64)
        .collect();

    match family {
        MartingaleFamily::BrownianMotion { .. } => {
            let values = gaussian_polygon(d, &times, &rng, 0);
            let bracket = brownian_bracket(d, &times);
            let lift = path::lift_piecewise_linear(&times, &values, d)?;
            Ok(MartingaleSample {
                family: family.clone(),
                level: 0,
                times,
                values,
                bracket,
                lift,
            })
        }
        MartingaleFamily::ScaledBm { c, .. } => {
            let base = simulate(
                &MartingaleFamily::BrownianMotion { d, horizon: t_max },
                n_fine,
                spec,
            )?;
            let values: Vec<f64> = base.values.iter().map(|v| c * v).collect();
            let bracket: Vec<f64> = base.bracket.iter().map(|v| c * c * v).collect();
            // Dilation of the driving lift, exactly: δ_c S₂(B) = S₂(cB).
            let lift = path::path_dilate(*c, &base.lift);
            Ok(MartingaleSample {
                family: family.clone(),
                level: 0,
                times,
                values,
                bracket,
                lift,
            })
        }
        MartingaleFamily::TimeChangedBm { .. } => {
            let clock: Vec<f64> = times.iter().map(|t| family.clock(*t)).collect();
            let values = gaussian_polygon(d, &clock, &rng, 0);
            let mut bracket = vec![0.0; (n_fine + 1) * d];
            for k in 0..=n_fine {
                for i in 0..d {
                    bracket[k * d + i] = clock[k];
                }
            }
            let lift = path::lift_piecewise_linear(&times, &values, d)?;
            Ok(MartingaleSample {
                family: family.clone(),
                level: 0,
                times,
                values,
                bracket,
                lift,
            })
        }
        MartingaleFamily::StoppedBm { radius, .. } => {
            let bm = simulate(
                &MartingaleFamily::BrownianMotion { d, horizon: t_max },
                n_fine,
                spec,
            )?;
            stopped_overlay(&bm, family, *radius)
        }
        MartingaleFamily::StepIntegrand { .. } => {
            let bm = simulate(
                &MartingaleFamily::BrownianMotion { d, horizon: t_max },
                n_fine,
                spec,
            )?;
            step_integrand_overlay(&bm, family)
        }
    }
}

/// Freezes the driving Brownian values and bracket after the first grid
/// time outside the radius ball.
fn stopped_overlay(
    bm: &MartingaleSample,
    family: &MartingaleFamily,
    radius: f64,
) -> Result<MartingaleSample> {
    let d = bm.dim();
    let n = bm.n_steps();
    let mut values = bm.values.clone();
    let mut bracket = bm.bracket.clone();
    let mut exited_at: Option<usize> = None;
    for k in 0..=n {
        let mut acc = 0.0;
        for i in 0..d {
            acc += values[k * d + i] * values[k * d + i];
        }
        if math::sqrt(acc) > radius {
            exited_at = Some(k);
            break;
        }
    }
    if let Some(k0) = exited_at {
        for k in (k0 + 1)..=n {
            for i in 0..d {
                values[k * d + i] = values[k0 * d + i];
                bracket[k * d + i] = bracket[k0 * d + i];
            }
        }
    }
    let lift = path::lift_piecewise_linear(&bm.times, &values, d)?;
    Ok(MartingaleSample {
        family: family.clone(),
        level: bm.level,
        times: bm.times.clone(),
        values,
        bracket,
        lift,
    })
}

/// Integrates sign · dB where the sign is constant on dyadic blocks and,
/// adaptedly, equals the sign of the previous block's first-component
/// increment. Block boundaries sit at fixed times, so the rule commutes
/// with dyadic refinement of the driver.
fn step_integrand_overlay(
    bm: &MartingaleSample,
    family: &MartingaleFamily,
) -> Result<MartingaleSample> {
    let d = bm.dim();
    let n = bm.n_steps();
    let block_len = (n / STEP_INTEGRAND_BLOCKS).max(1);
    let mut values = vec![0.0; (n + 1) * d];
    let mut sign = 1.0f64;
    for k in 0..n {
        if k % block_len == 0 && k > 0 {
            let inc = bm.values[k * d] - bm.values[(k - block_len) * d];
            sign = if inc < 0.0 { -1.0 } else { 1.0 };
        }
        for i in 0..d {
            let db = bm.values[(k + 1) * d + i] - bm.values[k * d + i];
            values[(k + 1) * d + i] = values[k * d + i] + sign * db;
        }
    }
    let lift = path::lift_piecewise_linear(&bm.times, &values, d)?;
    Ok(MartingaleSample {
        family: family.clone(),
        level: bm.level,
        times: bm.times.clone(),
        values,
        bracket: bm.bracket.clone(),
        lift,
    })
}

fn brownian_bracket(d: usize, times: &[f64]) -> Vec<f64> {
    let mut bracket = vec![0.0; times.len() * d];
    for (k, t) in times.iter().enumerate() {
        for i in 0..d {
            bracket[k * d + i] = *t;
        }
    }
    bracket
}

/// Dyadic refinement by Brownian-bridge midpoint insertion: the restriction
/// of the result to the coarse grid equals the input values exactly.
/// Supported for the Brownian-derived families.
pub fn refine(sample: &MartingaleSample, spec: &RngSpec) -> Result<MartingaleSample> {
    let d = sample.dim();
    let n = sample.n_steps();
    let rng = CounterRng::new(spec);
    let level = sample.level + 1;

    let scale = match &sample.family {
        MartingaleFamily::BrownianMotion { .. } | MartingaleFamily::TimeChangedBm { .. } => 1.0,
        MartingaleFamily::ScaledBm { c, .. } => math::abs(*c),
        MartingaleFamily::StoppedBm {
            d: fd,
            horizon,
            radius,
        } => {
            // Refine the unstopped driver (same draws as the sample used)
            // and re-apply the exit rule on the finer grid.
            let base = n >> sample.level;
            let mut bm = simulate(
                &MartingaleFamily::BrownianMotion {
                    d: *fd,
                    horizon: *horizon,
                },
                base,
                spec,
            )?;
            for _ in 0..=sample.level {
                bm = refine(&bm, spec)?;
            }
            return stopped_overlay(&bm, &sample.family, *radius);
        }
        MartingaleFamily::StepIntegrand { d: fd, horizon } => {
            let base = n >> sample.level;
            let mut bm = simulate(
                &MartingaleFamily::BrownianMotion {
                    d: *fd,
                    horizon: *horizon,
                },
                base,
                spec,
            )?;
            for _ in 0..=sample.level {
                bm = refine(&bm, spec)?;
            }
            return step_integrand_overlay(&bm, &sample.family);
        }
    };

    let mut times = Vec::with_capacity(2 * n + 1);
    let mut values = vec![0.0; (2 * n + 1) * d];
    let mut bracket = vec![0.0; (2 * n + 1) * d];
    for k in 0..n {
        let tl = sample.times[k];
        let tr = sample.times[k + 1];
        let tm = 0.5 * (tl + tr);
        times.push(tl);
        times.push(tm);
        let (cl, cm, cr) = (
            sample.family.clock(tl),
            sample.family.clock(tm),
            sample.family.clock(tr),
        );
        // Conditional law of the bridge midpoint in the changed time.
        let w = (cm - cl) / (cr - cl);
        let var = (cm - cl) * (cr - cm) / (cr - cl);
        let sd = scale * math::sqrt(var);
        for i in 0..d {
            let vl = sample.values[k * d + i];
            let vr = sample.values[(k + 1) * d + i];
            values[2 * k * d + i] = vl;
            let g = rng.gaussian(draw_counter(level, (k * d + i) as u64));
            values[(2 * k + 1) * d + i] = vl + w * (vr - vl) + sd * g;
            bracket[2 * k * d + i] = sample.bracket[k * d + i];
            bracket[(2 * k + 1) * d + i] = match &sample.family {
                MartingaleFamily::ScaledBm { c, .. } => c * c * cm,
                _ => cm,
            };
        }
    }
    times.push(sample.times[n]);
    for i in 0..d {
        values[2 * n * d + i] = sample.values[n * d + i];
        bracket[2 * n * d + i] = sample.bracket[n * d + i];
    }
    let lift = path::lift_piecewise_linear(&times, &values, d)?;
    Ok(MartingaleSample {
        family: sample.family.clone(),
        level,
        times,
        values,
        bracket,
        lift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::HomNorm;

    fn spec(stream: u64) -> RngSpec {
        RngSpec {
            master_seed: 0xC0FFEE,
            stream_index: stream,
        }
    }

    #[test]
    fn brownian_bracket_is_exact() {
        let fam = MartingaleFamily::BrownianMotion { d: 2, horizon: 1.0 };
        let s = simulate(&fam, 16, &spec(0)).unwrap();
        assert_eq!(s.bracket_at(16), &[1.0, 1.0]);
        assert_eq!(s.bracket_total(), 2.0);
        assert_eq!(s.value_at(0), &[0.0, 0.0]);
    }

    #[test]
    fn n_fine_must_be_power_of_two() {
        let fam = MartingaleFamily::BrownianMotion { d: 2, horizon: 1.0 };
        assert!(simulate(&fam, 12, &spec(0)).is_err());
        assert!(simulate(&fam, 1, &spec(0)).is_err());
    }

    #[test]
    fn scaled_bm_is_dilation_of_driver_bit_level() {
        let c = 2.5;
        let bm = simulate(
            &MartingaleFamily::BrownianMotion { d: 2, horizon: 1.0 },
            64,
            &spec(3),
        )
        .unwrap();
        let sc = simulate(
            &MartingaleFamily::ScaledBm {
                d: 2,
                horizon: 1.0,
                c,
            },
            64,
            &spec(3),
        )
        .unwrap();
        let dilated = path::path_dilate(c, &bm.lift);
        assert_eq!(sc.lift, dilated);
        assert_eq!(sc.bracket_total(), c * c * 2.0);
    }

    #[test]
    fn scaled_bm_lift_regenerable_from_values() {
        let sc = simulate(
            &MartingaleFamily::ScaledBm {
                d: 2,
                horizon: 1.0,
                c: -1.7,
            },
            64,
            &spec(5),
        )
        .unwrap();
        let relift = path::lift_piecewise_linear(&sc.times, &sc.values, 2).unwrap();
        for i in 0..sc.lift.len() {
            let dist =
                crate::group::distance(&sc.lift.point(i), &relift.point(i), &HomNorm::SUM_L2)
                    .unwrap();
            // The homogeneous distance is a square root of the area
            // mismatch, so 1e-16-level rounding shows up at the 1e-8 scale.
            assert!(dist < 1e-7, "point {i}: {dist}");
        }
    }

    #[test]
    fn stopped_bm_freezes_after_exit() {
        let fam = MartingaleFamily::StoppedBm {
            d: 2,
            horizon: 4.0,
            radius: 0.5,
        };
        for stream in 0..20 {
            let s = simulate(&fam, 256, &spec(stream)).unwrap();
            let n = s.n_steps();
            let mut frozen = false;
            for k in 1..=n {
                let r: f64 = math::sqrt(s.value_at(k).iter().map(|v| v * v).sum());
                if frozen {
                    assert_eq!(s.value_at(k), s.value_at(k - 1));
                    assert_eq!(s.bracket_at(k), s.bracket_at(k - 1));
                }
                if r > 0.5 {
                    frozen = true;
                }
            }
        }
    }

    #[test]
    fn step_integrand_has_brownian_bracket_and_unit_steps() {
        let fam = MartingaleFamily::StepIntegrand { d: 2, horizon: 1.0 };
        let s = simulate(&fam, 64, &spec(1)).unwrap();
        assert_eq!(s.bracket_total(), 2.0);
        // |ΔM| equals |ΔB| step-by-step: flipping the sign keeps magnitude.
        let bm = simulate(
            &MartingaleFamily::BrownianMotion { d: 2, horizon: 1.0 },
            64,
            &spec(1),
        )
        .unwrap();
        for k in 0..64 {
            for i in 0..2 {
                let dm = s.values[(k + 1) * 2 + i] - s.values[k * 2 + i];
                let db = bm.values[(k + 1) * 2 + i] - bm.values[k * 2 + i];
                assert!((dm.abs() - db.abs()).abs() <= 1e-12 * (1.0 + db.abs()));
            }
        }
    }

    #[test]
    fn time_changed_matches_time_change_of_matched_bm() {
        let fam = MartingaleFamily::TimeChangedBm {
            d: 2,
            horizon: 1.0,
            gamma: 2.0,
        };
        let s = simulate(&fam, 64, &spec(9)).unwrap();
        // Drive a Brownian polygon on the clock grid with the same draws.
        let clock: Vec<f64> = s.times.iter().map(|t| fam.clock(*t)).collect();
        let rng = CounterRng::new(&spec(9));
        let values = gaussian_polygon(2, &clock, &rng, 0);
        assert_eq!(s.values, values);
        // Reparametrizing the clock-grid lift onto the t grid is exactly the
        // time-changed lift.
        let lift_on_clock = path::lift_piecewise_linear(&clock, &values, 2).unwrap();
        let idx: Vec<usize> = (0..s.times.len()).collect();
        let re = path::time_change(&lift_on_clock, &s.times, &idx).unwrap();
        assert_eq!(re, s.lift);
    }

    #[test]
    fn refine_keeps_coarse_skeleton_exactly() {
        for fam in [
            MartingaleFamily::BrownianMotion { d: 2, horizon: 1.0 },
            MartingaleFamily::ScaledBm {
                d: 2,
                horizon: 1.0,
                c: 3.0,
            },
            MartingaleFamily::TimeChangedBm {
                d: 2,
                horizon: 1.0,
                gamma: 1.5,
            },
        ] {
            let s = simulate(&fam, 32, &spec(11)).unwrap();
            let r = refine(&s, &spec(11)).unwrap();
            assert_eq!(r.n_steps(), 64);
            assert_eq!(r.level, 1);
            for k in 0..=32 {
                assert_eq!(r.value_at(2 * k), s.value_at(k));
                assert_eq!(r.times[2 * k], s.times[k]);
            }
            assert_eq!(r.bracket_total(), s.bracket_total());
        }
    }

    #[test]
    fn refine_overlay_families() {
        // The step integrand's block signs are functions of coarse-grid
        // increments, so refinement reproduces the coarse skeleton up to
        // summation order.
        let s = simulate(
            &MartingaleFamily::StepIntegrand { d: 2, horizon: 1.0 },
            32,
            &spec(7),
        )
        .unwrap();
        let r = refine(&s, &spec(7)).unwrap();
        assert_eq!(r.level, 1);
        assert_eq!(r.n_steps(), 64);
        for k in 0..=32 {
            for i in 0..2 {
                let a = r.values[2 * k * 2 + i];
                let b = s.values[k * 2 + i];
                assert!((a - b).abs() < 1e-12, "k={k} i={i}: {a} vs {b}");
            }
        }

        let s = simulate(
            &MartingaleFamily::StoppedBm {
                d: 2,
                horizon: 4.0,
                radius: 1.0,
            },
            32,
            &spec(7),
        )
        .unwrap();
        let r = refine(&s, &spec(7)).unwrap();
        assert_eq!(r.level, 1);
        assert_eq!(r.n_steps(), 64);
        // The refined path may exit at an inserted midpoint, so brackets
        // can only shrink.
        assert!(r.bracket_total() <= s.bracket_total() + 1e-12);
    }

    #[test]
    fn determinism_same_spec_same_sample() {
        let fam = MartingaleFamily::BrownianMotion { d: 3, horizon: 2.0 };
        let a = simulate(&fam, 128, &spec(17)).unwrap();
        let b = simulate(&fam, 128, &spec(17)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&fam, 128, &spec(18)).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn invalid_family_parameters_rejected() {
        assert!(simulate(
            &MartingaleFamily::StoppedBm {
                d: 2,
                horizon: 1.0,
                radius: -1.0
            },
            16,
            &spec(0)
        )
        .is_err());
        assert!(simulate(
            &MartingaleFamily::TimeChangedBm {
                d: 2,
                horizon: 1.0,
                gamma: 0.0
            },
            16,
            &spec(0)
        )
        .is_err());
        assert!(simulate(
            &MartingaleFamily::ScaledBm {
                d: 2,
                horizon: 1.0,
                c: 0.0
            },
            16,
            &spec(0)
        )
        .is_err());
    }
}
