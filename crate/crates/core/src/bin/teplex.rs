use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use teplex::report::{self, PipelineError, RunConfig, Stage};
use teplex::synth::{self, SynthSpec};
use teplex::{CooccurrenceMode, CooccurrenceScope, Error};

#[derive(Parser)]
#[command(name = "teplex", version, about = "Transfer-entropy influence networks and multiplex measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: layers, measures, co-occurrence and figure data
    Run(ConfigArgs),
    /// Build and export the sixteen layer edge lists only
    Te(ConfigArgs),
    /// Recompute multiplex measures from exported layer files
    Measures {
        /// Directory holding layer_<SRC>_<TGT>.csv files
        #[arg(long)]
        layers: PathBuf,
        #[arg(short, long)]
        output_dir: PathBuf,
        #[arg(long)]
        charts: bool,
    },
    /// Recompute the co-occurrence matrix from exported layer files
    Cooccur {
        #[arg(long)]
        layers: PathBuf,
        #[arg(short, long)]
        output_dir: PathBuf,
        #[arg(long, default_value = "actor_level")]
        mode: CooccurrenceMode,
        #[arg(long, default_value = "aggregated4")]
        scope: CooccurrenceScope,
        #[arg(long)]
        charts: bool,
    },
    /// Write a synthetic events file, ranking tables and a ready-to-run config
    Synth(SynthArgs),
    /// Check a configuration without running it
    ValidateConfig(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Key-value configuration file; flags override its values
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    print_config: bool,
    #[arg(long)]
    events: Option<String>,
    #[arg(long)]
    trust_table: Option<String>,
    #[arg(long)]
    popularity_table: Option<String>,
    #[arg(short, long)]
    output_dir: Option<String>,
    #[arg(long)]
    window_start: Option<String>,
    #[arg(long)]
    window_end: Option<String>,
    #[arg(long)]
    trust_threshold: Option<String>,
    #[arg(long)]
    mainstream_rank_cutoff: Option<String>,
    #[arg(long)]
    te_min: Option<String>,
    #[arg(long)]
    min_active_days: Option<String>,
    /// 2 (bits) or e (nats)
    #[arg(long)]
    log_base: Option<String>,
    #[arg(long)]
    cooccurrence_mode: Option<String>,
    #[arg(long)]
    cooccurrence_scope: Option<String>,
    #[arg(long)]
    emit_charts: Option<String>,
    #[arg(long)]
    dump_series: Option<String>,
    #[arg(long)]
    permutations: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> teplex::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("events", &self.events),
            ("trust_table", &self.trust_table),
            ("popularity_table", &self.popularity_table),
            ("output_dir", &self.output_dir),
            ("window_start", &self.window_start),
            ("window_end", &self.window_end),
            ("trust_threshold", &self.trust_threshold),
            ("mainstream_rank_cutoff", &self.mainstream_rank_cutoff),
            ("te_min", &self.te_min),
            ("min_active_days", &self.min_active_days),
            ("log_base", &self.log_base),
            ("cooccurrence_mode", &self.cooccurrence_mode),
            ("cooccurrence_scope", &self.cooccurrence_scope),
            ("emit_charts", &self.emit_charts),
            ("dump_series", &self.dump_series),
            ("permutations", &self.permutations),
            ("seed", &self.seed),
        ];
        let cwd = Path::new(".");
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v, cwd)?;
            }
        }
        cfg.apply_env()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Scenario {
    CopyPair,
    AsymmetricOverlap,
    ParticipationMix,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory to write events.jsonl, trust.csv, popularity.csv, ground_truth.csv and run.conf
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "asymmetric-overlap", conflicts_with = "spec")]
    scenario: Scenario,
    /// JSON spec file instead of a built-in scenario
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 365)]
    days: usize,
    #[arg(long, default_value_t = 0.8)]
    strength: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// te_min written to the generated run.conf
    #[arg(long, default_value_t = 0.1)]
    te_min: f64,
}

fn synth(args: &SynthArgs) -> Result<(), PipelineError> {
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| PipelineError::new(Stage::Config, Error::Config(format!("{}: {e}", path.display()))))?;
            serde_json::from_str(&text)
                .map_err(|e| PipelineError::new(Stage::Config, Error::Config(format!("{}: {e}", path.display()))))?
        }
        None => match args.scenario {
            Scenario::CopyPair => SynthSpec::copy_pair(args.days, args.strength, args.seed),
            Scenario::AsymmetricOverlap => SynthSpec::asymmetric_overlap(args.days, args.strength, args.seed),
            Scenario::ParticipationMix => SynthSpec::participation_mix(args.days, args.strength, args.seed),
        },
    };
    let generated = spec.generate().map_err(|e| PipelineError::new(Stage::Config, e))?;
    let window = generated.window;
    let config = format!(
        "events = events.jsonl\ntrust_table = trust.csv\npopularity_table = popularity.csv\noutput_dir = results\n\
         window_start = {}\nwindow_end = {}\nte_min = {}\nmin_active_days = 1\n\
         cooccurrence_mode = actor_level\ncooccurrence_scope = aggregated4\nseed = {}\n",
        window.start, window.end, args.te_min, spec.seed
    );
    let mut tree = report::OutputTree::new();
    tree.add("events.jsonl", synth::events_jsonl(&generated.series, &window));
    tree.add("trust.csv", synth::trust_table_csv());
    tree.add("popularity.csv", synth::popularity_table_csv());
    tree.add("ground_truth.csv", generated.ledger.to_csv());
    tree.add(
        "spec.json",
        serde_json::to_string_pretty(&spec).expect("spec serializes") + "\n",
    );
    tree.add("run.conf", config);
    tree.commit(&args.out).map_err(|e| PipelineError::new(Stage::Output, e))?;
    eprintln!(
        "teplex: wrote {} series and {} planted edges to {}",
        generated.series.len(),
        generated.ledger.edges.len(),
        args.out.display()
    );
    Ok(())
}

fn config_error(e: Error) -> PipelineError {
    PipelineError::new(Stage::Config, e)
}

fn execute(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Run(args) | Command::Te(args) | Command::ValidateConfig(args) if args.print_config => {
            let cfg = args.resolve().map_err(config_error)?;
            print!("{}", cfg.to_text());
            Ok(())
        }
        Command::Run(args) => {
            let cfg = args.resolve().map_err(config_error)?;
            report::run_pipeline(&cfg).map(|_| ())
        }
        Command::Te(args) => {
            let cfg = args.resolve().map_err(config_error)?;
            report::run_layers(&cfg).map(|_| ())
        }
        Command::ValidateConfig(args) => {
            let cfg = args.resolve().map_err(config_error)?;
            cfg.validate().map_err(config_error)?;
            println!("configuration ok");
            Ok(())
        }
        Command::Measures {
            layers,
            output_dir,
            charts,
        } => report::run_measures(&layers, &output_dir, charts),
        Command::Cooccur {
            layers,
            output_dir,
            mode,
            scope,
            charts,
        } => report::run_cooccurrence(&layers, &output_dir, mode, scope, charts).map(|_| ()),
        Command::Synth(args) => synth(&args),
    }
}

fn main() -> ExitCode {
    // Usage errors are configuration errors; clap's own status 2 would read
    // as a data error.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("teplex: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
