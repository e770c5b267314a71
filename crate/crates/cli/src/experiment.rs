use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Args;
use qup::su2::experiment::{write_group_trace, write_series_trace};
use qup::su2::{uncertainty_experiment, BandlimitedFunction, CMatrix, GridShape};
use qup::GroupId;
use serde_json::json;

use crate::config::{CoefficientFamily, ExperimentConfig};
use crate::{CliError, Verdict};

/// Samples per axis of the `|f|` trace on the group.
const TRACE_GRID: GridShape = GridShape {
    n_phi: 32,
    n_theta: 17,
    n_psi: 64,
};
/// Samples of the torus traces.
const TRACE_POINTS: usize = 1024;

#[derive(Args)]
pub struct ExperimentArgs {
    /// `key = value` config file.
    config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn coefficients(c: &ExperimentConfig) -> Result<BandlimitedFunction, CliError> {
    Ok(match c.coefficients {
        CoefficientFamily::Identity => BandlimitedFunction::new(
            c.spectrum
                .iter()
                .map(|&n| (n, CMatrix::identity(n + 1, n + 1))),
        )?,
        CoefficientFamily::ScaledIdentity => BandlimitedFunction::scaled_identity(&c.spectrum),
        CoefficientFamily::Random => BandlimitedFunction::seeded(&c.spectrum, c.seed),
    })
}

pub fn run(args: ExperimentArgs) -> Result<Verdict, CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(dir) = args.output_dir {
        config.output_dir = dir;
    }
    if config.group != GroupId::Su2 {
        return Err(CliError::Usage(format!(
            "the experiment runs on su2 only, got {}",
            config.group.tag()
        )));
    }
    let f = coefficients(&config)?;
    let report = uncertainty_experiment(&config.spectrum, &f, &config.params())?;

    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let bundle = json!({
        "timestamp": timestamp,
        "config": config.to_string(),
        "coefficients": f,
        "report": report,
    });
    let path = dir.join("report.json");
    let body = serde_json::to_string_pretty(&bundle).expect("reports serialize");
    fs::write(&path, body + "\n").map_err(|e| CliError::io(&path, e))?;

    let path = dir.join("f_abs.csv");
    let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_group_trace(std::io::BufWriter::new(file), &f, TRACE_GRID)
        .map_err(|e| CliError::io(&path, e))?;
    for (name, series) in [
        ("f_f.csv", &report.f_f),
        ("delta_plus_f_f.csv", &report.delta_plus_f_f),
    ] {
        let path = dir.join(name);
        let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        write_series_trace(std::io::BufWriter::new(file), series, TRACE_POINTS)?;
    }

    println!(
        "spectrum {:?}, f ≡ 0: {}",
        report.spectrum, report.f_is_zero
    );
    println!(
        "condition at Q = {}, N = {}, r = {}: {}",
        config.q,
        config.n,
        config.r,
        if report.condition.holds {
            "holds"
        } else {
            "fails"
        }
    );
    for step in &report.steps {
        println!(
            "{:<15} {}  {}",
            step.label,
            if step.passed { "PASS" } else { "FAIL" },
            step.detail
        );
    }
    println!("report written to {}", dir.display());
    Ok(Verdict::from_bool(report.all_passed))
}
