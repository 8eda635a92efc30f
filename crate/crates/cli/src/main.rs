use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use repcite::commands;
use repcite::config::{MissingArtifact, PipelineConfig};
use repcite::fixturegen;
use repcite::ModelChoice;

/// Exit codes: 0 success, 1 validation, 2 io/network, 3 internal.
const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "repcite",
    version,
    about = "Harvest citation contexts for reproduced ML papers, score reproducibility, \
             classify context sentiment, and relate the two"
)]
struct Cli {
    /// Pipeline config TOML.
    #[arg(short, long, global = true, default_value = "repcite.toml")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve rep-study DOIs and collect citation contexts.
    Harvest {
        /// Serve exclusively from the response cache; fail on cache misses.
        #[arg(long)]
        offline: bool,
    },
    /// Pool rep-study finding counts into per-paper scores and bins.
    Score,
    /// Label citation contexts interactively (p/n/u/skip/quit).
    Annotate {
        /// Revisit already-labeled contexts; without this flag existing
        /// labels are never touched.
        #[arg(long)]
        relabel: bool,
        /// Stop after this many answers.
        #[arg(long)]
        limit: Option<usize>,
        /// Export context_id,text,label rows (blank label when unlabeled)
        /// and exit without prompting.
        #[arg(long, value_name = "CSV")]
        export: Option<PathBuf>,
    },
    /// Build the balanced, related, and polarity datasets from labels.
    #[command(name = "build-gt")]
    BuildGt,
    /// Train the flat and hierarchical classifiers.
    Train,
    /// Cross-validate the classifiers, or score external predictions
    /// against the balanced gold subset.
    Eval {
        /// Tag of previously imported external predictions to evaluate.
        #[arg(long)]
        external: Option<String>,
    },
    /// Apply trained models to every context, or import external
    /// predictions from CSV.
    Predict {
        #[arg(long, value_enum, default_value = "both")]
        model: ModelChoice,
        /// CSV of external predictions
        /// (context_id,label[,p_positive,p_negative,p_neutral]).
        #[arg(long, requires = "tag")]
        external: Option<PathBuf>,
        /// Tag naming the external model, e.g. m3.
        #[arg(long, requires = "external")]
        tag: Option<String>,
    },
    /// Tally predictions per rs_score bin, normalize, filter, and emit
    /// plot data.
    Aggregate {
        #[arg(long, value_enum, default_value = "both")]
        model: ModelChoice,
        /// Bypass harvesting and models: run the analysis on a transcribed
        /// bin-count table.
        #[arg(long = "from-table2", value_name = "CSV")]
        from_table2: Option<PathBuf>,
    },
    /// Render a plain-text report over all existing artifacts.
    Report,
    /// Regenerate the bundled fixtures (deterministic).
    MakeFixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Command::MakeFixtures { out, seed } = &cli.command {
        let seed = seed.unwrap_or(fixturegen::FIXTURE_SEED);
        fixturegen::generate_fixtures(out, seed)?;
        println!("fixtures written to {}", out.display());
        return Ok(());
    }

    let config = PipelineConfig::load(&cli.config)?;
    let config_path = cli.config.as_path();
    match cli.command {
        Command::Harvest { offline } => commands::harvest::run(&config, config_path, offline),
        Command::Score => commands::score::run(&config, config_path),
        Command::Annotate {
            relabel,
            limit,
            export,
        } => commands::annotate::run(
            &config,
            config_path,
            commands::annotate::AnnotateOptions {
                relabel,
                limit,
                export,
            },
        ),
        Command::BuildGt => commands::build_gt::run(&config, config_path),
        Command::Train => commands::train::run(&config, config_path),
        Command::Eval { external } => {
            commands::eval_cmd::run(&config, config_path, external.as_deref())
        }
        Command::Predict {
            model,
            external,
            tag,
        } => {
            let external = external
                .as_deref()
                .map(|path| (path, tag.as_deref().expect("clap enforces --tag")));
            commands::predict::run(&config, config_path, model, external)
        }
        Command::Aggregate { model, from_table2 } => {
            commands::aggregate::run(&config, config_path, model, from_table2.as_deref())
        }
        Command::Report => commands::report::run(&config, config_path),
        Command::MakeFixtures { .. } => unreachable!("handled above"),
    }
}

/// Maps an error chain onto the documented exit classes.
fn classify(err: &anyhow::Error) -> u8 {
    use repcite_core::Error as CoreError;
    use repcite_harvest::HarvestError;

    for cause in err.chain() {
        if cause.downcast_ref::<MissingArtifact>().is_some() {
            return EXIT_VALIDATION;
        }
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::Io { .. } => EXIT_IO,
                CoreError::Internal(_) | CoreError::Diverged { .. } => EXIT_INTERNAL,
                _ => EXIT_VALIDATION,
            };
        }
        if let Some(harvest) = cause.downcast_ref::<HarvestError>() {
            return match harvest {
                HarvestError::InvalidDoi(_) | HarvestError::NotFound(_) => EXIT_VALIDATION,
                HarvestError::Core(core) => match core {
                    CoreError::Io { .. } => EXIT_IO,
                    CoreError::Internal(_) => EXIT_INTERNAL,
                    _ => EXIT_VALIDATION,
                },
                _ => EXIT_IO,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
        if cause.downcast_ref::<toml::de::Error>().is_some() {
            return EXIT_VALIDATION;
        }
    }
    EXIT_INTERNAL
}
