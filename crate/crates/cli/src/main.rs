use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use locus_cli::{commands, output, render, server};
use locus_core::network::SegmentJson;
use locus_core::search::SearchParams;
use locus_core::{Network, ShortcutSet};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "locus", version, about = "Continuous diameter and shortcut sets for plane networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continuous diameter and its diametral pairs.
    Diameter { file: Option<PathBuf> },
    /// Whether any shortcut set can lower the diameter.
    Check { file: Option<PathBuf> },
    /// Fan construction of a shortcut set.
    Fan { file: Option<PathBuf> },
    /// Shortcut set bringing the diameter within eps of the hull diameter.
    Epsilon {
        file: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
    },
    /// Search for a single shortcut segment.
    Shortcut {
        file: Option<PathBuf>,
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        res: Option<f64>,
        #[arg(long)]
        simple: bool,
        /// Print progress events to stderr.
        #[arg(long)]
        progress: bool,
    },
    /// One-segment connection test for a disconnected network.
    Scn1 { file: Option<PathBuf> },
    /// Shortcut number of a simple polygon.
    Polygon { file: Option<PathBuf> },
    /// Single shortcut of a plane K4.
    K4 { file: Option<PathBuf> },
    /// Point-cover gadget for a CNF formula.
    Gen3sat {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the provenance sidecar here.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Draw the network as SVG.
    Render {
        file: Option<PathBuf>,
        /// Shortcut segments to overlay (a JSON list, or an object with "segments").
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Start the local JSON service.
    Serve {
        #[arg(long, default_value_t = 8737)]
        port: u16,
    },
}

enum Failure {
    User(Value),
    Internal(Value),
}

impl From<locus_core::Error> for Failure {
    fn from(e: locus_core::Error) -> Self {
        let v = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
        if e.is_user_error() {
            Failure::User(v)
        } else {
            Failure::Internal(v)
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::User(json!({"error": {"kind": "Io", "message": format!("{}: {e}", path.display())}}))
}

fn read_text(file: &Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| io_failure(p, e)),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| io_failure(Path::new("<stdin>"), e))?;
            Ok(s)
        }
    }
}

fn read_network(file: &Option<PathBuf>) -> Result<Network, Failure> {
    Ok(Network::from_json_str(&read_text(file)?)?)
}

fn read_overlay(net: &Network, path: &PathBuf) -> Result<ShortcutSet, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| locus_core::Error::Parse(e.to_string()))?;
    let items = if v.is_array() { v } else { v.get("segments").cloned().unwrap_or(Value::Null) };
    let segs: Vec<SegmentJson> = serde_json::from_value(items).map_err(|e| locus_core::Error::Parse(e.to_string()))?;
    Ok(ShortcutSet::from_json(net, &segs)?)
}

fn run(cli: Cli) -> Result<Option<Value>, Failure> {
    let v = match cli.command {
        Command::Diameter { file } => commands::diameter(&read_network(&file)?)?,
        Command::Check { file } => commands::check(&read_network(&file)?)?,
        Command::Fan { file } => commands::fan(&read_network(&file)?)?,
        Command::Epsilon { file, eps } => commands::epsilon(&read_network(&file)?, eps)?,
        Command::Shortcut { file, gap, res, simple, progress } => {
            let net = read_network(&file)?;
            let params = SearchParams { gap, resolution: res, simple };
            let observer = |e: &locus_core::search::SearchEvent| eprintln!("{}", serde_json::to_string(&output::to_value(e)).unwrap_or_default());
            commands::shortcut(&net, params, progress.then_some(&observer as &(dyn Fn(&_) + Sync)))?
        }
        Command::Scn1 { file } => commands::scn1(&read_network(&file)?)?,
        Command::Polygon { file } => commands::polygon(&read_network(&file)?)?,
        Command::K4 { file } => commands::k4(&read_network(&file)?)?,
        Command::Gen3sat { file, seed, provenance } => {
            let (net, sidecar) = commands::gen3sat(&read_text(&file)?, seed)?;
            if let Some(p) = provenance {
                let text = serde_json::to_string_pretty(&sidecar).expect("serializable");
                std::fs::write(&p, text).map_err(|e| io_failure(&p, e))?;
            }
            net
        }
        Command::Render { file, overlay, output } => {
            let net = read_network(&file)?;
            let set = overlay.map(|p| read_overlay(&net, &p)).transpose()?;
            let svg = render::svg(&net, set.as_ref())?;
            std::fs::write(&output, svg).map_err(|e| io_failure(&output, e))?;
            return Ok(None);
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Internal(json!({"error": {"kind": "Io", "message": e.to_string()}})))?;
            rt.block_on(server::serve(port)).map_err(|e| Failure::User(json!({"error": {"kind": "Io", "message": e.to_string()}})))?;
            return Ok(None);
        }
    };
    Ok(Some(v))
}

fn emit(v: &Value) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable")).ok();
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Some(v)) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::User(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Internal(v)) => {
            emit(&v);
            ExitCode::from(2)
        }
    }
}
