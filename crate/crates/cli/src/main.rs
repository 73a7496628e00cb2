//! Command-line driver: runs experiments from JSON configs, writes report
//! artifacts and provides a quick deterministic selftest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use roughbdg_cli::config::{CliError, RunConfig, EXPERIMENTS};
use roughbdg_cli::experiments::run_experiment;
use roughbdg_cli::formats::{path_from_csv, path_to_csv, report_to_csv};
use roughbdg_cli::report::pairwise_sum;

/// Output directory fallback when --out is not given.
const OUT_ENV: &str = "ROUGHBDG_OUT";

#[derive(Parser)]
#[command(name = "roughbdg", version, about = "Monte Carlo checks of martingale inequalities on step-2 rough paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run {
        /// Path to the JSON run configuration.
        config: PathBuf,
        /// Override the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; results are byte-identical for any value.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output directory; defaults to $ROUGHBDG_OUT or the current dir.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Which report files to write.
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
    /// Run the built-in deterministic self checks.
    Selftest,
    /// List the available experiment names.
    ListExperiments,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            out,
            format,
        } => run(&config, seed, workers, out, format),
        Command::Selftest => selftest(),
        Command::ListExperiments => {
            for name in EXPERIMENTS {
                println!("{name}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(
    config_path: &Path,
    seed: Option<u64>,
    workers: usize,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", config_path.display())))?;
    let mut config: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::schema(format!("invalid config: {e}")))?;
    if let Some(seed) = seed {
        config.master_seed = Some(seed);
    }
    let settings = config.resolve()?;
    let report = run_experiment(&settings, workers)?;

    let out_dir = out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::schema(format!("cannot create {}: {e}", out_dir.display())))?;
    let write = |name: &str, contents: &str| -> Result<(), CliError> {
        let p = out_dir.join(name);
        std::fs::write(&p, contents)
            .map_err(|e| CliError::schema(format!("cannot write {}: {e}", p.display())))?;
        println!("wrote {}", p.display());
        Ok(())
    };

    if format != Format::Csv {
        write("report.json", &report.to_json())?;
    }
    if format != Format::Json {
        write("report.csv", &report_to_csv(&report))?;
    }
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "master_seed": settings.master_seed,
        "workers": workers,
        "experiment": settings.experiment,
    });
    let mut manifest_text =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_text.push('\n');
    write("manifest.json", &manifest_text)?;

    println!(
        "{}: lhs {:.6e} (se {:.1e}), rhs {:.6e} (se {:.1e}), implied constant {:.6}",
        report.name,
        report.lhs_mean,
        report.lhs_se,
        report.rhs_mean,
        report.rhs_se,
        report.implied_constant
    );
    Ok(())
}

struct Suite {
    name: &'static str,
    passed: usize,
    failed: usize,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            passed: 0,
            failed: 0,
        }
    }

    fn check(&mut self, label: &str, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            eprintln!("selftest failure: {}/{label}", self.name);
        }
    }

    fn report(&self) -> bool {
        println!(
            "{:<22} {} passed, {} failed",
            self.name, self.passed, self.failed
        );
        self.failed == 0
    }
}

/// Quick deterministic checks of the numeric kernel; exits nonzero if any
/// check fails.
fn selftest() -> Result<(), CliError> {
    use roughbdg_core::cc::cc_norm;
    use roughbdg_core::path::lift_planar;
    use roughbdg_core::rng::{CounterRng, RngSpec};
    use roughbdg_core::variation::p_variation;
    use roughbdg_core::{GroupElement, HomNorm};

    let mut ok = true;

    let mut s = Suite::new("group-algebra");
    let g = GroupElement::from_upper(vec![0.3, -1.2], &[0.7]).unwrap();
    let h = GroupElement::from_upper(vec![-0.4, 0.9], &[-0.2]).unwrap();
    let gh = g.product(&h).unwrap();
    let back = gh.product(&h.inverse()).unwrap();
    s.check("inverse cancels", {
        let e = back.log();
        let f = g.log();
        e.x.iter()
            .zip(&f.x)
            .all(|(a, b)| (a - b).abs() < 1e-12)
            && e.a.iter().zip(&f.a).all(|(a, b)| (a - b).abs() < 1e-12)
    });
    s.check(
        "dilation is a morphism",
        {
            let lhs = g.dilate(2.0).product(&h.dilate(2.0)).unwrap();
            let rhs = gh.dilate(2.0);
            lhs.log()
                .a
                .iter()
                .zip(&rhs.log().a)
                .all(|(a, b)| (a - b).abs() < 1e-12)
        },
    );
    ok &= s.report();

    let mut s = Suite::new("cc-analytic");
    let pure = GroupElement::from_upper(vec![0.0, 0.0], &[1.0]).unwrap();
    s.check(
        "pure area closed form",
        (cc_norm(&pure).unwrap() - 2.0 * (core::f64::consts::PI).sqrt()).abs() < 1e-9,
    );
    let chord = GroupElement::from_upper(vec![3.0, 4.0], &[0.0]).unwrap();
    s.check("chord is its own geodesic", (cc_norm(&chord).unwrap() - 5.0).abs() < 1e-9);
    ok &= s.report();

    let mut s = Suite::new("pvar-dp");
    let path = lift_planar(
        &[0.0, 1.0, 2.0, 3.0],
        &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
    )
    .unwrap();
    let tv = p_variation(&path, 1.0, &HomNorm::SUM_L2).unwrap();
    s.check("piecewise total variation", tv.value > 0.0 && tv.dissection.len() >= 2);
    let two = p_variation(&path, 2.0, &HomNorm::SUM_L2).unwrap();
    s.check("monotone in p", two.value <= tv.value + 1e-12);
    ok &= s.report();

    let mut s = Suite::new("rng-determinism");
    let rng = CounterRng::new(&RngSpec {
        master_seed: 42,
        stream_index: 7,
    });
    let again = CounterRng::new(&RngSpec {
        master_seed: 42,
        stream_index: 7,
    });
    s.check(
        "counters reproduce",
        (0..64).all(|c| rng.raw(c) == again.raw(c) && rng.gaussian(c) == again.gaussian(c)),
    );
    s.check(
        "streams differ",
        CounterRng::new(&RngSpec {
            master_seed: 42,
            stream_index: 8,
        })
        .raw(0)
            != rng.raw(0),
    );
    ok &= s.report();

    let mut s = Suite::new("formats");
    let csv = path_to_csv(&path);
    s.check("path csv round trip", path_from_csv(&csv).unwrap() == path);
    s.check(
        "pairwise sum order-free",
        pairwise_sum(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]) == 28.0,
    );
    ok &= s.report();

    let mut s = Suite::new("report-determinism");
    let cfg: RunConfig = serde_json::from_str(
        r#"{"experiment": "bdg_classical", "r_mc": 100, "n_fine": 64}"#,
    )
    .map_err(|e| CliError::schema(e.to_string()))?;
    let settings = cfg.resolve()?;
    let a = run_experiment(&settings, 1)?;
    let b = run_experiment(&settings, 4)?;
    s.check("byte-identical across workers", a.to_json() == b.to_json());
    ok &= s.report();

    if ok {
        println!("selftest ok");
        Ok(())
    } else {
        Err(CliError::numeric("selftest failed"))
    }
}
