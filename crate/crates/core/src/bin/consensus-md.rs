use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use consensus_md_core::analysis::{control_search_many, ControlReport, OrderSource};
use consensus_md_core::consensus::{parse_notions, ConsensusOutcome};
use consensus_md_core::dynamics::{md_run, UpdateOrder};
use consensus_md_core::gen::{counterexample_catalog, find_fixture};
use consensus_md_core::harness::{
    parse_agent_counts, run_experiment, with_jobs, Experiment, ExperimentConfig, OrderPolicy,
};
use consensus_md_core::prefcore::{read_profile, render_profile, AltSet, LabeledProfile};
use consensus_md_core::{Error, Result};

const SEED_VAR: &str = "CONSENSUS_MD_SEED";

#[derive(Parser)]
#[command(name = "consensus-md", version, about = "Majority dynamics on incomplete preferences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Effect frequencies by number of agents under a fixed update order.
    Effects(ExperimentArgs),
    /// Effect frequencies by completeness of the profile.
    Completeness(ExperimentArgs),
    /// Control frequencies over all (or sampled) update orders.
    Control(ExperimentArgs),
    /// Run the dynamics on a profile file and print each step.
    RunMd {
        #[arg(long)]
        profile: PathBuf,
        /// Order prefix such as "ab,bc" or "a>b,b>c"; remaining pairs
        /// follow lexicographically.
        #[arg(long, default_value = "")]
        order: String,
    },
    /// Report which outcomes some update order can reach on a profile.
    ControlSearch {
        #[arg(long)]
        profile: PathBuf,
        /// Comma-separated notion tags, or "all".
        #[arg(long, default_value = "all")]
        notion: String,
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Examine this many random orders instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict the choosable set to these labels.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write a catalog profile in the profile file format.
    ExportFixture {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// List the catalog names instead.
        #[arg(long)]
        list: bool,
    },
    /// Recheck every catalog fact; exits nonzero if any fails.
    VerifyFixtures {
        /// Seed for the random completion of each order prefix.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Agent counts: "1,3,5", "3-9" or "1-25/2".
    #[arg(long)]
    agents: Option<String>,
    #[arg(long)]
    alternatives: Option<usize>,
    /// Profiles per agent count.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// lexicographic, fixed:<pairs>, exhaustive or sampled:<K>.
    #[arg(long)]
    order_policy: Option<String>,
    /// Comma-separated notion tags, or "all".
    #[arg(long)]
    notions: Option<String>,
    /// CSV path; settings go to <out>.meta.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

/// Writes to stdout; a reader that went away (as with `| head`) is not an
/// error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_VAR} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn build_config(experiment: Experiment, a: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::defaults(experiment);
    if let Some(s) = &a.agents {
        c.agent_counts = parse_agent_counts(s)?;
    }
    if let Some(m) = a.alternatives {
        c.m = m;
    }
    if let Some(s) = a.samples {
        c.samples = s;
    }
    if let Some(s) = env_seed()?.or(a.seed) {
        c.seed = s;
    }
    if let Some(p) = &a.order_policy {
        c.order_policy = OrderPolicy::parse(p, c.m)?;
    }
    if let Some(n) = &a.notions {
        c.notions = parse_notions(n)?;
    }
    c.jobs = a.jobs;
    c.validate()?;
    Ok(c)
}

fn experiment(kind: Experiment, a: &ExperimentArgs) -> Result<()> {
    let config = build_config(kind, a)?;
    let out = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("{kind}.csv")));
    let data = run_experiment(&config)?;
    data.write_files(&out)?;
    eprintln!("wrote {} ({} rows)", out.display(), data.rows.len());
    if let Some(v) = data.metadata.consistency_violations.filter(|&v| v > 0) {
        eprintln!("warning: {v} fixed-order effects were not matched by the control search");
    }
    Ok(())
}

fn outcome_label(o: ConsensusOutcome, lp: &LabeledProfile) -> String {
    match o {
        ConsensusOutcome::NoConsensus => "none".into(),
        ConsensusOutcome::Winner(a) => lp.label(a).to_string(),
    }
}

fn run_md(profile: &Path, order: &str) -> Result<()> {
    let lp = read_profile(profile)?;
    let prefix = UpdateOrder::parse_pairs(order, &lp.labels)?;
    let order = UpdateOrder::complete(lp.profile.m(), &prefix)?;
    let (fin, traces) = md_run(&lp.profile, &order)?;
    let mut text = format!("order {}\n", order.render(&lp.labels));
    for (k, t) in traces.iter().enumerate() {
        let l = |a| lp.label(a);
        let added: Vec<String> = t
            .updaters
            .iter()
            .zip(&t.closure_additions)
            .filter(|(_, adds)| !adds.is_empty())
            .map(|(i, adds)| {
                let pairs: Vec<_> = adds.iter().map(|&(x, y)| format!("{}>{}", l(x), l(y))).collect();
                format!("agent {i}: {}", pairs.join(" "))
            })
            .collect();
        let _ = writeln!(
            text,
            "step {}: {}{} support {}/{} adopted {}>{} by agents {:?}{}",
            k + 1,
            l(t.pair.0),
            l(t.pair.1),
            t.support_first,
            t.support_second,
            l(t.adopted.0),
            l(t.adopted.1),
            t.updaters,
            if added.is_empty() { String::new() } else { format!("; closure {}", added.join(", ")) }
        );
    }
    let out = LabeledProfile { labels: lp.labels.clone(), profile: fin };
    text.push_str(&render_profile(&out));
    emit(&text)
}

fn report_json(r: &ControlReport, lp: &LabeledProfile) -> Value {
    let outcomes: Map<String, Value> =
        r.outcome_multiset().into_iter().map(|(o, c)| (outcome_label(o, lp), json!(c))).collect();
    let neg = r.negative_control();
    json!({
        "notion": r.notion.tag(),
        "initial": outcome_label(r.initial, lp),
        "orders_examined": r.orders_examined,
        "exhaustive": r.exhaustive,
        "seed": r.seed,
        "outcomes": outcomes,
        "can_preserve_existence": r.can_preserve_existence(),
        "can_preserve_identity": r.can_preserve_identity(),
        "can_lose": r.can_lose(),
        "can_lose_identity": r.can_lose_identity(),
        "can_generate": r.can_generate(),
        "can_prevent_generation": r.can_prevent_generation(),
        "negative_control_available": r.negative_control_available(),
        "negative_control_by_prevention": neg.map(|n| n.prevent_generation),
        "negative_control_by_divergence": neg.map(|n| n.divergent_outcomes),
        "choosable": r.choosable().iter().map(|a| lp.label(a).to_string()).collect::<Vec<_>>(),
    })
}

fn control_search_cmd(
    profile: &Path,
    notion: &str,
    sample: Option<u64>,
    seed: u64,
    targets: Option<&str>,
    jobs: Option<usize>,
) -> Result<()> {
    let lp = read_profile(profile)?;
    let notions = parse_notions(notion)?;
    let seed = env_seed()?.unwrap_or(seed);
    let source = match sample {
        Some(count) => OrderSource::Sampled { count, seed },
        None => OrderSource::Exhaustive,
    };
    let targets = targets
        .map(|t| t.split(',').map(|l| lp.lookup(l.trim())).collect::<Result<AltSet>>())
        .transpose()?;
    let reports = with_jobs(jobs, || control_search_many(&notions, &lp.profile, source, targets))??;
    let doc: Vec<Value> = reports.iter().map(|r| report_json(r, &lp)).collect();
    emit(&(serde_json::to_string_pretty(&doc)? + "\n"))
}

fn export_fixture(name: Option<&str>, out: Option<&PathBuf>, list: bool) -> Result<()> {
    if list {
        let names: String = counterexample_catalog().iter().map(|f| format!("{}\t{}\n", f.name, f.summary)).collect();
        return emit(&names);
    }
    let f = find_fixture(name.expect("required by clap"))?;
    let text = render_profile(&f.labeled_profile());
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e))?,
        None => emit(&text)?,
    }
    Ok(())
}

fn verify_fixtures(seed: u64) -> Result<bool> {
    let seed = env_seed()?.unwrap_or(seed);
    let mut all_ok = true;
    let mut text = String::new();
    for f in counterexample_catalog() {
        for c in f.verify(seed)? {
            all_ok &= c.passed;
            let _ = writeln!(text, "{} {}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.fixture, c.fact, c.detail);
        }
    }
    emit(&text)?;
    Ok(all_ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Effects(a) => experiment(Experiment::Effects, a).map(|_| true),
        Command::Completeness(a) => experiment(Experiment::Completeness, a).map(|_| true),
        Command::Control(a) => experiment(Experiment::Control, a).map(|_| true),
        Command::RunMd { profile, order } => run_md(profile, order).map(|_| true),
        Command::ControlSearch { profile, notion, exhaustive: _, sample, seed, targets, jobs } => {
            control_search_cmd(profile, notion, *sample, *seed, targets.as_deref(), *jobs).map(|_| true)
        }
        Command::ExportFixture { name, out, list } => export_fixture(name.as_deref(), out.as_ref(), *list).map(|_| true),
        Command::VerifyFixtures { seed } => verify_fixtures(*seed),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::from(2)
        }
    }
}
