use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use signalsim::fuzzy::{build_rulebase as build, BuildMeta, BuildOptions, StateSpread, NUM_RULES};
use signalsim::scenario::{arrival_stream, export_report, run_with_stream, ReportFormat, RunOptions, Summary};
use signalsim::{ControllerKind, IntersectionConfig, RuleBase, Scenario};

use crate::{BuildArgs, ControllerArg, FormatArg, ScenarioArgs};

fn kinds(sel: ControllerArg) -> Vec<ControllerKind> {
    match sel {
        ControllerArg::Fixed => vec![ControllerKind::Fixed],
        ControllerArg::Pretimed => vec![ControllerKind::Pretimed],
        ControllerArg::Segmental => vec![ControllerKind::Segmental],
        ControllerArg::Fuzzy => vec![ControllerKind::Fuzzy],
        ControllerArg::Realtime => vec![ControllerKind::Realtime],
        ControllerArg::Fuzzyreal => vec![ControllerKind::FuzzyReal],
        ControllerArg::All => ControllerKind::ALL.to_vec(),
    }
}

/// A path that exists wins over a bundled scenario of the same name.
fn load_scenario(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if path.exists() {
        return Scenario::load(path).with_context(|| format!("loading scenario {spec}"));
    }
    match Scenario::bundled(spec) {
        Some(s) => Ok(s?),
        None => bail!("scenario `{spec}` is neither a file nor a bundled scenario"),
    }
}

pub fn run(sel: ControllerArg, args: &ScenarioArgs, print_table: bool) -> Result<()> {
    let kinds = kinds(sel);
    let rulebase = match &args.rulebase {
        Some(p) => Some(RuleBase::load(p).with_context(|| format!("loading rule base {}", p.display()))?),
        None => {
            if let Some(k) = kinds.iter().find(|k| k.needs_rulebase()) {
                bail!("controller `{k}` needs a rule base: pass --rulebase <FILE> (create one with `signalsim build-rulebase`)");
            }
            None
        }
    };
    let scenario = load_scenario(&args.scenario)?;
    let config = IntersectionConfig { period_s: scenario.period_s, ..IntersectionConfig::default() };
    if let Some(rb) = &rulebase {
        rb.validate(&config)?;
    }
    let opts = RunOptions { segment_len: args.segment_len as usize, seed: args.seed };
    let seed = args.seed.unwrap_or(scenario.master_seed);
    let stream = arrival_stream(&config, &scenario, seed)?;

    let mut reports = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let run = run_with_stream(&config, &scenario, kind, rulebase.as_ref(), &opts, stream.clone())
            .with_context(|| format!("running {kind}"))?;
        let r = run.report;
        eprintln!(
            "{kind:<10} delay {:>12} veh-s  max SQS {:>5}  candidates {:>6}  {:.2?}",
            r.total_delay, r.max_sqs, r.candidates_evaluated, r.wall_clock
        );
        reports.push(r);
    }

    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Text => ReportFormat::Text,
    };
    let files = export_report(&scenario.name, seed, &reports, &args.out, format)?;
    if print_table {
        print!("{}", Summary::new(&scenario.name, seed, &reports).table());
    }
    eprintln!("wrote {} and {}", files.summary.display(), files.series.display());
    Ok(())
}

#[derive(Serialize)]
struct SpreadFile<'a> {
    meta: &'a BuildMeta,
    turns_from: Option<&'a str>,
    states_at_least_95pct_within_2s: usize,
    states: &'a [StateSpread],
}

fn stats_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "rulebase".into());
    out.with_file_name(format!("{stem}.stats.json"))
}

pub fn build_rulebase(args: &BuildArgs) -> Result<()> {
    let config = IntersectionConfig::default();
    let mut opts = BuildOptions { repetitions: args.reps, base_seed: args.seed, ..BuildOptions::default() };
    if let Some(spec) = &args.scenario {
        opts.turns = load_scenario(spec)?.turns;
    }
    let started = Instant::now();
    let mut stderr = std::io::stderr();
    let (rb, spreads) = build(&config, &opts, |i, s| {
        if !args.quiet && ((i + 1) % 25 == 0 || i + 1 == NUM_RULES) {
            let _ = writeln!(
                stderr,
                "[{:>3}/{NUM_RULES}] {:?} -> {} s ({:.0}% within 2 s of mode)  {:.0?}",
                i + 1,
                s.levels,
                s.green,
                100.0 * s.within_two_of_mode,
                started.elapsed()
            );
        }
    })?;
    rb.save(&args.out)?;

    let stats = stats_path(&args.out);
    let meta = rb.meta.as_ref().expect("builder records its metadata");
    let file = SpreadFile {
        meta,
        turns_from: args.scenario.as_deref(),
        states_at_least_95pct_within_2s: spreads.iter().filter(|s| s.within_two_of_mode >= 0.95).count(),
        states: &spreads,
    };
    let body = serde_json::to_string_pretty(&file)? + "\n";
    std::fs::write(&stats, body).with_context(|| format!("writing {}", stats.display()))?;
    eprintln!("wrote {} and {} in {:.1?}", args.out.display(), stats.display(), started.elapsed());
    Ok(())
}
