use std::path::PathBuf;

use clap::{Args, Subcommand};
use qup::lacuna::{check_condition_1, is_lacunary, is_q_thin, min_lacunary_cover, IntSet};
use qup::{Rational64, RootSystem, SpectrumSet, Weight};
use serde_json::json;

use crate::{emit, CliError, Verdict};

#[derive(Args)]
pub struct SetArgs {
    /// Comma-separated integers, e.g. `1,2,4,8` or `-1,-3,-9`.
    #[arg(long, allow_hyphen_values = true)]
    set: String,
    /// Ratio bound Q > 1, as an integer or `p/q`.
    #[arg(long)]
    q: Rational64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum LacunaryCommand {
    /// Q-thin test, or the lacunary test when `--n` is given.
    Check {
        #[command(flatten)]
        common: SetArgs,
        /// Cutoff N ≥ 1; elements inside (−N, N) are unconstrained.
        #[arg(long)]
        n: Option<i64>,
    },
    /// Minimal partition into (Q, N)-lacunary parts.
    Cover {
        #[command(flatten)]
        common: SetArgs,
        #[arg(long)]
        n: i64,
        /// Fail unless at most this many parts are needed.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Whether the Weyl orbit fits in a product of sets with at most r parts each.
    Condition1 {
        /// One of su2, u2, u3, u4.
        #[arg(long)]
        group: String,
        /// Weights in natural coordinates separated by `;`, e.g. `(1,2);(2,4)`.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        q: Rational64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_set(s: &str) -> Result<IntSet, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<i64>()
                .map_err(|_| CliError::Usage(format!("bad integer `{v}` in --set")))
        })
        .collect()
}

fn parse_weights(rs: &RootSystem, s: &str) -> Result<SpectrumSet, CliError> {
    let weights = s
        .split(';')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<Weight>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumSet::from_weights(rs.rank(), weights)?)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn run(cmd: LacunaryCommand) -> Result<Verdict, CliError> {
    match cmd {
        LacunaryCommand::Check { common, n } => {
            let set = parse_set(&common.set)?;
            let (predicate, holds) = match n {
                Some(n) => ("lacunary", is_lacunary(&set, common.q, n)?),
                None => ("q_thin", is_q_thin(&set, common.q)?),
            };
            let report = json!({
                "predicate": predicate,
                "set": set,
                "q": common.q.to_string(),
                "n": n,
                "holds": holds,
            });
            emit(&pretty(&report), common.output.as_ref())?;
            Ok(Verdict::from_bool(holds))
        }
        LacunaryCommand::Cover { common, n, r } => {
            let set = parse_set(&common.set)?;
            let cert = min_lacunary_cover(&set, common.q, n)?;
            let holds = r.is_none_or(|r| cert.part_count() <= r);
            let report = json!({
                "set": set,
                "parts": cert.part_count(),
                "limit": r,
                "holds": holds,
                "cert": cert,
            });
            emit(&pretty(&report), common.output.as_ref())?;
            Ok(Verdict::from_bool(holds))
        }
        LacunaryCommand::Condition1 {
            group,
            set,
            q,
            n,
            r,
            output,
        } => {
            let rs = RootSystem::from_tag(&group)?;
            let e = parse_weights(&rs, &set)?;
            let report = check_condition_1(&rs, &e, q, n, r)?;
            emit(&pretty(&report), output.as_ref())?;
            Ok(Verdict::from_bool(report.holds))
        }
    }
}
