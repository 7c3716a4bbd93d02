use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Parser};
use semantify_injector::{fetch_annotation, inject, script_tag, Cache, FetchError, InjectError, InjectionSpec};

const EXIT_USAGE: u8 = 2;
const EXIT_NETWORK: u8 = 3;
const EXIT_NOT_FOUND: u8 = 4;
const EXIT_INJECT: u8 = 5;

/// Fetch an annotation and embed it in an HTML page as a JSON-LD script element.
#[derive(Parser, Debug)]
#[command(name = "inject", version)]
#[command(group(ArgGroup::new("lookup").required(true).args(["hash", "page_url", "cid"])))]
#[command(group(ArgGroup::new("sink").args(["out", "stdout"])))]
struct Cli {
    /// Platform base URL.
    #[arg(long, env = "SEMANTIFY_ENDPOINT")]
    endpoint: String,
    #[arg(long)]
    hash: Option<String>,
    /// Page whose annotation has this url value.
    #[arg(long)]
    page_url: Option<String>,
    #[arg(long)]
    cid: Option<String>,
    /// Website API key, required with --page-url and --cid.
    #[arg(long, env = "SEMANTIFY_API_KEY")]
    key: Option<String>,
    /// HTML page to inject into; without it the bare script tag is written.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    stdout: bool,
    /// Reuse fetched annotations for this many seconds.
    #[arg(long)]
    cache_ttl: Option<u64>,
    #[arg(long, requires = "cache_ttl")]
    cache_dir: Option<PathBuf>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("inject: {msg}");
    ExitCode::from(code)
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), ExitCode> {
    let written = match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| e.to_string())
        }
    };
    written.map_err(|e| fail(EXIT_INJECT, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match (&cli.hash, &cli.page_url, &cli.cid) {
        (Some(h), _, _) => InjectionSpec::by_hash(&cli.endpoint, h),
        (_, Some(u), _) | (_, _, Some(u)) => {
            let Some(key) = cli.key.as_deref().filter(|k| !k.is_empty()) else {
                return fail(EXIT_USAGE, "--key is required with --page-url and --cid");
            };
            if cli.page_url.is_some() {
                InjectionSpec::by_page_url(&cli.endpoint, u, key)
            } else {
                InjectionSpec::by_cid(&cli.endpoint, u, key)
            }
        }
        _ => unreachable!("clap enforces one lookup"),
    };

    let html = match &cli.input {
        Some(path) => match std::fs::read(path) {
            Ok(b) => Some(b),
            Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", path.display())),
        },
        None => None,
    };

    let fetched = match cli.cache_ttl {
        Some(ttl) => Cache {
            dir: cli.cache_dir.clone().unwrap_or_else(|| std::env::temp_dir().join("semantify-inject-cache")),
            ttl: Duration::from_secs(ttl),
        }
        .fetch(&spec),
        None => fetch_annotation(&spec),
    };
    let annotation = match fetched {
        Ok(a) => a,
        Err(FetchError::NotFound) => return fail(EXIT_NOT_FOUND, "annotation not found"),
        Err(FetchError::InvalidSpec(m)) => return fail(EXIT_USAGE, m),
        Err(e @ (FetchError::Unauthorized(_) | FetchError::NetworkError(_))) => return fail(EXIT_NETWORK, e),
    };

    let out = if cli.stdout { None } else { cli.out.as_ref() };
    let Some(html) = html else {
        return match script_tag(&annotation) {
            Ok(mut tag) => {
                tag.push(b'\n');
                emit(out, &tag).err().unwrap_or(ExitCode::SUCCESS)
            }
            Err(e) => fail(EXIT_INJECT, e),
        };
    };
    match inject(&html, &annotation) {
        Ok(page) => emit(out, &page).err().unwrap_or(ExitCode::SUCCESS),
        // The page goes out untouched so a pipeline never loses it.
        Err(e @ InjectError::NoHeadElement) => {
            if let Err(code) = emit(out, &html) {
                return code;
            }
            fail(EXIT_INJECT, format!("warning: {e}; page written unchanged"))
        }
        Err(e) => fail(EXIT_INJECT, e),
    }
}
