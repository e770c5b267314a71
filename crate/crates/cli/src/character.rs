use std::path::PathBuf;

use clap::Args;
use qup::character::{character_eval, character_series_exact, weyl_gram};
use qup::{RootSystem, Weight};
use serde_json::json;

use crate::{emit, CliError, Verdict};

/// Largest deviation of the Weyl-integration Gram matrix from the identity
/// accepted by `--verify-orthogonality`.
const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

#[derive(Args)]
pub struct CharacterArgs {
    /// One of su2, u2, u3, u4.
    #[arg(long)]
    group: String,
    /// Highest weight in natural coordinates, e.g. `2` or `2,0`.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Torus angles to evaluate at, e.g. `0,0`; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    eval: Vec<String>,
    /// Check orthonormality of the first `--count` characters.
    #[arg(long)]
    verify_orthogonality: bool,
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_angles(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad angle `{v}` in --eval")))
        })
        .collect()
}

fn format_complex(re: f64, im: f64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

pub fn run(args: CharacterArgs) -> Result<Verdict, CliError> {
    let rs = RootSystem::from_tag(&args.group)?;
    let lam: Weight = args.weight.parse()?;
    let series = character_series_exact(&rs, &lam)?;
    let dim = rs.weyl_dimension(&lam)?;
    let evals = args
        .eval
        .iter()
        .map(|s| {
            let t = parse_angles(s)?;
            Ok((t.clone(), character_eval(&rs, &lam, &t)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let orthogonality = if args.verify_orthogonality {
        let weights = rs.dominant_weights(args.count);
        let gram = weyl_gram(&rs, &weights)?;
        let dev = gram
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).norm())
            })
            .fold(0.0, f64::max);
        Some((weights.len(), dev))
    } else {
        None
    };

    let text = if args.json {
        let report = json!({
            "group": rs.group().tag(),
            "weight": lam,
            "dimension": dim,
            "terms": series.terms().map(|(e, c)| json!({"exponent": e, "coefficient": c})).collect::<Vec<_>>(),
            "evaluations": evals.iter().map(|(t, v)| json!({"at": t, "re": v.re, "im": v.im})).collect::<Vec<_>>(),
            "orthogonality": orthogonality.map(|(k, dev)| json!({"characters": k, "max_deviation": dev, "passed": dev < ORTHOGONALITY_TOLERANCE})),
        });
        serde_json::to_string_pretty(&report).expect("reports serialize")
    } else {
        let mut lines = vec![
            format!("character of {lam} on {}", rs.group().tag()),
            "exponent\tcoefficient".into(),
        ];
        lines.extend(series.terms().map(|(e, c)| format!("{e}\t{c}")));
        lines.push(format!("dim {dim}"));
        for (t, v) in &evals {
            let at: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            lines.push(format!(
                "chi({}) = {}",
                at.join(", "),
                format_complex(v.re, v.im)
            ));
        }
        if let Some((k, dev)) = orthogonality {
            lines.push(format!(
                "orthogonality of {k} characters: max deviation {dev:.3e}"
            ));
        }
        lines.join("\n")
    };
    emit(&text, args.output.as_ref())?;
    Ok(Verdict::from_bool(
        orthogonality.is_none_or(|(_, dev)| dev < ORTHOGONALITY_TOLERANCE),
    ))
}
