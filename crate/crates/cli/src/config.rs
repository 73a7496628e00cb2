//! Run configuration: schema, defaults and validation.

use serde::{Deserialize, Serialize};

use roughbdg_core::{HomNorm, MartingaleFamily};

/// Error category mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or schema-violating configuration (exit 2).
    Schema,
    /// Arithmetic produced non-finite values or an assertion failed (exit 3).
    Numeric,
    /// Well-formed configuration outside the supported parameter region
    /// (exit 4).
    Unsupported,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub category: ErrorCategory,
    pub message: String,
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Schema,
            message: msg.into(),
        }
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Numeric,
            message: msg.into(),
        }
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Unsupported,
            message: msg.into(),
        }
    }
    pub fn exit_code(&self) -> i32 {
        match self.category {
            ErrorCategory::Schema => 2,
            ErrorCategory::Numeric => 3,
            ErrorCategory::Unsupported => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cat = match self.category {
            ErrorCategory::Schema => "schema",
            ErrorCategory::Numeric => "numeric",
            ErrorCategory::Unsupported => "unsupported",
        };
        write!(f, "error[{cat}]: {}", self.message)
    }
}

impl std::error::Error for CliError {}

pub const EXPERIMENTS: &[&str] = &[
    "bdg_classical",
    "chebyshev_group_bound",
    "bdg_group_uniform",
    "bdg_pvar",
    "lepingle_discrete",
    "uniform_dissection_bound",
    "pwl_convergence",
    "geodesic_sup_bound",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum FamilyConfig {
    BrownianMotion,
    ScaledBm { c: f64 },
    TimeChangedBm { gamma: f64 },
    StoppedBm { radius: f64 },
    StepIntegrand,
}

impl FamilyConfig {
    pub fn to_family(&self, d: usize, horizon: f64) -> MartingaleFamily {
        match self {
            FamilyConfig::BrownianMotion => MartingaleFamily::BrownianMotion { d, horizon },
            FamilyConfig::ScaledBm { c } => MartingaleFamily::ScaledBm { d, horizon, c: *c },
            FamilyConfig::TimeChangedBm { gamma } => MartingaleFamily::TimeChangedBm {
                d,
                horizon,
                gamma: *gamma,
            },
            FamilyConfig::StoppedBm { radius } => MartingaleFamily::StoppedBm {
                d,
                horizon,
                radius: *radius,
            },
            FamilyConfig::StepIntegrand => MartingaleFamily::StepIntegrand { d, horizon },
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilyConfig::BrownianMotion => "brownian_motion".into(),
            FamilyConfig::ScaledBm { c } => format!("scaled_bm_c_{c}"),
            FamilyConfig::TimeChangedBm { gamma } => format!("time_changed_bm_gamma_{gamma}"),
            FamilyConfig::StoppedBm { radius } => format!("stopped_bm_radius_{radius}"),
            FamilyConfig::StepIntegrand => "step_integrand".into(),
        }
    }
}

/// On-disk configuration (JSON). Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_mc: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_fine: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    /// Exponent r of the moderate function F(x) = x^r.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Homogeneous norm name: sum-l2, sum-l1, max-l2 or cc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    /// Dyadic mesh levels k, meaning dissections with 2^k intervals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh_levels: Option<Vec<u32>>,
    /// Points per geodesic segment in the geodesic approximation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_geodesic: Option<usize>,
    /// Dissection names: two-point, dyadic-<k>, geometric-<ratio>, full.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dissections: Option<Vec<String>>,
    /// Walk family for the discrete lemma: pm1 or area-blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
}

/// Configuration with defaults applied and parameters validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub experiment: String,
    pub master_seed: u64,
    pub r_mc: usize,
    pub n_fine: usize,
    pub d: usize,
    pub horizon: f64,
    pub family: FamilyConfig,
    pub f_power: f64,
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub norm: HomNorm,
    pub norm_name: String,
    pub lambda_grid: Vec<f64>,
    pub mesh_levels: Vec<u32>,
    pub m_geodesic: usize,
    pub dissections: Vec<String>,
    pub walk: String,
    pub n_steps: usize,
}

fn parse_norm(name: &str) -> Result<HomNorm, CliError> {
    match name {
        "sum-l2" => Ok(HomNorm::SUM_L2),
        "sum-l1" => Ok(HomNorm::SUM_L1),
        "max-l2" => Ok(HomNorm::MAX_L2),
        "cc" => Ok(HomNorm::CC),
        other => Err(CliError::schema(format!(
            "unknown norm {other:?}; expected sum-l2, sum-l1, max-l2 or cc"
        ))),
    }
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Settings, CliError> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(CliError::schema(format!(
                "unknown experiment {:?}; see list-experiments",
                self.experiment
            )));
        }
        let norm_name = self.norm.clone().unwrap_or_else(|| "sum-l2".into());
        let s = Settings {
            experiment: self.experiment.clone(),
            master_seed: self.master_seed.unwrap_or(0),
            r_mc: self.r_mc.unwrap_or(2000),
            n_fine: self.n_fine.unwrap_or(1 << 10),
            d: self.d.unwrap_or(2),
            horizon: self.horizon.unwrap_or(1.0),
            family: self.family.clone().unwrap_or(FamilyConfig::BrownianMotion),
            f_power: self.f_power.unwrap_or(1.0),
            p: self.p.unwrap_or(2.5),
            p_prime: self.p_prime.unwrap_or(2.25),
            q: self.q.unwrap_or(2.0),
            norm: parse_norm(&norm_name)?,
            norm_name,
            lambda_grid: self
                .lambda_grid
                .clone()
                .unwrap_or_else(|| vec![0.5, 0.75, 1.0, 1.5, 2.0, 3.0]),
            mesh_levels: self.mesh_levels.clone().unwrap_or_else(|| vec![3, 4, 5, 6, 7]),
            m_geodesic: self.m_geodesic.unwrap_or(256),
            dissections: self.dissections.clone().unwrap_or_else(|| {
                vec![
                    "two-point".into(),
                    "dyadic-3".into(),
                    "geometric-0.5".into(),
                    "full".into(),
                ]
            }),
            walk: self.walk.clone().unwrap_or_else(|| "pm1".into()),
            n_steps: self.n_steps.unwrap_or(64),
        };
        s.validate()?;
        Ok(s)
    }
}

impl Settings {
    fn validate(&self) -> Result<(), CliError> {
        if self.d == 0 {
            return Err(CliError::schema("d must be at least 1"));
        }
        if !(self.horizon > 0.0) {
            return Err(CliError::schema("horizon must be positive"));
        }
        if self.r_mc < 100 {
            return Err(CliError::unsupported("r_mc below 100 is not supported"));
        }
        if self.n_fine < 2 || !self.n_fine.is_power_of_two() {
            return Err(CliError::schema("n_fine must be a power of two >= 2"));
        }
        if !(self.f_power > 0.0) {
            return Err(CliError::schema("f_power must be positive"));
        }
        match self.experiment.as_str() {
            "bdg_pvar" | "uniform_dissection_bound" | "geodesic_sup_bound" => {
                if !(self.p > 2.0) {
                    return Err(CliError::unsupported(format!(
                        "{} requires p > 2, got p = {}",
                        self.experiment, self.p
                    )));
                }
            }
            "pwl_convergence" => {
                if !(self.p > 2.0) {
                    return Err(CliError::unsupported(format!(
                        "pwl_convergence requires p > 2, got p = {}",
                        self.p
                    )));
                }
                if !(self.q >= 1.0) {
                    return Err(CliError::unsupported("pwl_convergence requires q >= 1"));
                }
                for k in &self.mesh_levels {
                    if (1usize << k) > self.n_fine {
                        return Err(CliError::unsupported(format!(
                            "mesh level {k} exceeds the fine grid"
                        )));
                    }
                }
            }
            "lepingle_discrete" => {
                let (q, p) = (self.q, self.p);
                let strict = 1.0 < q && q < p && p <= 2.0;
                let degenerate = q == 1.0 && p == 1.0;
                if !(strict || degenerate) {
                    return Err(CliError::unsupported(format!(
                        "lepingle_discrete requires 1 < q < p <= 2 or q = p = 1, got q = {q}, p = {p}"
                    )));
                }
                if self.walk != "pm1" && self.walk != "area-blocks" {
                    return Err(CliError::schema(format!(
                        "unknown walk {:?}; expected pm1 or area-blocks",
                        self.walk
                    )));
                }
            }
            _ => {}
        }
        if self.experiment == "geodesic_sup_bound" && self.d != 2 {
            return Err(CliError::unsupported(
                "geodesic_sup_bound requires d = 2 (Carnot-Caratheodory geodesics)",
            ));
        }
        if self.norm.kind == roughbdg_core::NormKind::CarnotCaratheodory && self.d != 2 {
            return Err(CliError::unsupported("the cc norm requires d = 2"));
        }
        if self.experiment == "chebyshev_group_bound"
            && self.lambda_grid.iter().any(|l| !(*l > 0.0))
        {
            return Err(CliError::schema("lambda grid entries must be positive"));
        }
        Ok(())
    }
}
