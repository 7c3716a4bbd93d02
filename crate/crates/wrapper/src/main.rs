use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use semantify_core::VocabularyGraph;
use semantify_wrapper::scheduler::{Executor, Scheduler};
use semantify_wrapper::{run_extension, AdapterRegistry, ExtensionActivation, HttpPlatform, RunError};
use tracing_subscriber::EnvFilter;

/// Runs extension adapters against the annotation platform.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled adapters and their configuration keys.
    Adapters,
    /// Run one activation once and print its report.
    Run {
        #[arg(long)]
        activation: PathBuf,
        /// Store lastRunAt / lastRunReport back into the activation file.
        #[arg(long)]
        write_back: bool,
    },
    /// Run activations on their configured frequency until interrupted.
    Schedule {
        #[arg(long, required = true)]
        activation: Vec<PathBuf>,
    },
}

fn load_activation(path: &Path) -> anyhow::Result<ExtensionActivation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut a: ExtensionActivation = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Ok(v) = std::env::var("SEMANTIFY_ENDPOINT") {
        a.platform.endpoint = v;
    }
    if let Ok(v) = std::env::var("SEMANTIFY_API_KEY") {
        a.platform.api_key = v;
    }
    Ok(a)
}

fn executor(registry: AdapterRegistry) -> Executor {
    let g = Arc::new(VocabularyGraph::bundled());
    Arc::new(move |activation: &ExtensionActivation| {
        let adapter = registry
            .get(&activation.adapter_id)
            .ok_or_else(|| RunError::ConfigInvalid(format!("unknown adapter {}", activation.adapter_id)))?;
        let platform = HttpPlatform::new(activation.platform.clone());
        run_extension(activation, adapter.as_ref(), &platform, &g)
    })
}

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let registry = AdapterRegistry::with_builtin();
    match Args::parse().command {
        Command::Adapters => {
            println!("{}", serde_json::to_string_pretty(&registry.descriptors())?);
        }
        Command::Run { activation, write_back } => {
            let mut a = load_activation(&activation)?;
            let report = executor(registry)(&a)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if write_back {
                a.last_run_at = Some(chrono::Utc::now());
                a.last_run_report = Some(report);
                std::fs::write(&activation, serde_json::to_string_pretty(&a)?)?;
            }
        }
        Command::Schedule { activation } => {
            let mut scheduler = Scheduler::new(executor(registry.clone()), rand::random());
            let now = chrono::Utc::now();
            for path in &activation {
                let a = load_activation(path)?;
                if registry.get(&a.adapter_id).is_none() {
                    bail!("{}: unknown adapter {}", path.display(), a.adapter_id);
                }
                scheduler.add(a, now)?;
            }
            let stop = Arc::new(AtomicBool::new(false));
            scheduler.run(&stop, Duration::from_secs(1));
        }
    }
    Ok(())
}
