//! `key = value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qup::su2::{ExperimentParams, GridShape};
use qup::{GroupId, Rational64};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientFamily {
    /// `A_n = I`.
    Identity,
    /// `A_n = I/(n+1)`, so that `f = Σ Θ_n`.
    ScaledIdentity,
    /// Entries uniform in the unit square, drawn from `seed`.
    Random,
}

impl CoefficientFamily {
    fn tag(self) -> &'static str {
        match self {
            CoefficientFamily::Identity => "identity",
            CoefficientFamily::ScaledIdentity => "scaled_identity",
            CoefficientFamily::Random => "random",
        }
    }
}

impl FromStr for CoefficientFamily {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "identity" => Ok(CoefficientFamily::Identity),
            "scaled_identity" => Ok(CoefficientFamily::ScaledIdentity),
            "random" => Ok(CoefficientFamily::Random),
            _ => Err(CliError::Usage(format!(
                "unknown coefficient family `{s}` (expected identity, scaled_identity or random)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub group: GroupId,
    /// Highest weights.
    pub spectrum: Vec<usize>,
    pub coefficients: CoefficientFamily,
    pub q: Rational64,
    pub n: i64,
    pub r: usize,
    /// `None` means the smallest exact grid for the band limit.
    pub haar_grid: Option<GridShape>,
    pub torus_points: usize,
    pub box_side: f64,
    pub delta_rel: f64,
    pub group_samples_per_side: usize,
    pub check_points: usize,
    pub translate_radius: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let p = ExperimentParams::default();
        ExperimentConfig {
            group: GroupId::Su2,
            spectrum: Vec::new(),
            coefficients: CoefficientFamily::Identity,
            q: p.q,
            n: p.n,
            r: p.r,
            haar_grid: p.haar,
            torus_points: p.torus_points,
            box_side: p.box_side,
            delta_rel: p.delta_rel,
            group_samples_per_side: p.group_samples_per_side,
            check_points: p.check_points,
            translate_radius: p.translate_radius,
            output_dir: PathBuf::from("qup-out"),
            seed: p.seed,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("bad value `{value}` for `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse_value(key, v))
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = ExperimentConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
            match key {
                "group" => c.group = value.parse().map_err(CliError::from)?,
                "spectrum" => c.spectrum = parse_list(key, value)?,
                "coefficients" => c.coefficients = value.parse()?,
                "q" => c.q = parse_value(key, value)?,
                "n" => c.n = parse_value(key, value)?,
                "r" => c.r = parse_value(key, value)?,
                "haar_grid" => {
                    c.haar_grid =
                        if value == "auto" {
                            None
                        } else {
                            match parse_list(key, value)?.as_slice() {
                                &[n_phi, n_theta, n_psi] => Some(GridShape {
                                    n_phi,
                                    n_theta,
                                    n_psi,
                                }),
                                _ => return Err(CliError::Usage(
                                    "haar_grid takes `auto` or three sizes `n_phi,n_theta,n_psi`"
                                        .into(),
                                )),
                            }
                        }
                }
                "torus_points" => c.torus_points = parse_value(key, value)?,
                "box_side" => c.box_side = parse_value(key, value)?,
                "delta_rel" => c.delta_rel = parse_value(key, value)?,
                "group_samples_per_side" => c.group_samples_per_side = parse_value(key, value)?,
                "check_points" => c.check_points = parse_value(key, value)?,
                "translate_radius" => c.translate_radius = parse_value(key, value)?,
                "output_dir" => c.output_dir = PathBuf::from(value),
                "seed" => c.seed = parse_value(key, value)?,
                _ => {
                    return Err(CliError::Usage(format!(
                        "line {}: unknown key `{key}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(c)
    }

    pub fn params(&self) -> ExperimentParams {
        ExperimentParams {
            q: self.q,
            n: self.n,
            r: self.r,
            haar: self.haar_grid,
            torus_points: self.torus_points,
            box_side: self.box_side,
            delta_rel: self.delta_rel,
            group_samples_per_side: self.group_samples_per_side,
            check_points: self.check_points,
            translate_radius: self.translate_radius,
            seed: self.seed,
        }
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spectrum: Vec<String> = self.spectrum.iter().map(usize::to_string).collect();
        let grid = match self.haar_grid {
            None => "auto".to_string(),
            Some(g) => format!("{},{},{}", g.n_phi, g.n_theta, g.n_psi),
        };
        writeln!(f, "group = {}", self.group.tag())?;
        writeln!(f, "spectrum = {}", spectrum.join(","))?;
        writeln!(f, "coefficients = {}", self.coefficients.tag())?;
        writeln!(f, "q = {}", self.q)?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "r = {}", self.r)?;
        writeln!(f, "haar_grid = {grid}")?;
        writeln!(f, "torus_points = {}", self.torus_points)?;
        writeln!(f, "box_side = {:?}", self.box_side)?;
        writeln!(f, "delta_rel = {:?}", self.delta_rel)?;
        writeln!(
            f,
            "group_samples_per_side = {}",
            self.group_samples_per_side
        )?;
        writeln!(f, "check_points = {}", self.check_points)?;
        writeln!(f, "translate_radius = {:?}", self.translate_radius)?;
        writeln!(f, "output_dir = {}", self.output_dir.display())?;
        writeln!(f, "seed = {}", self.seed)
    }
}
