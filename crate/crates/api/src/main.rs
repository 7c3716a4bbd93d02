use std::path::PathBuf;

use anyhow::Context;
use clap::Parser;
use semantify_api::{build_state, serve, ServerConfig};
use tracing_subscriber::EnvFilter;

/// Annotation platform REST server.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// TOML configuration file; SEMANTIFY_* variables override it.
    #[arg(long, short, env = "SEMANTIFY_CONFIG")]
    config: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();
    let config = ServerConfig::load(args.config.as_deref())?;
    let state = build_state(&config)?;
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .with_context(|| format!("binding {}", config.bind))?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    serve(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
        tracing::info!("shutting down");
    })
    .await?;
    Ok(())
}
