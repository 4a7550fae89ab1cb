use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use boardless_cli::bench::{bench_csv, bench_table, run_timed_bench};
use boardless_cli::growth::{growth_csv, run_growth};
use boardless_cli::scenario::{generate_scenario, parse_family, ScenarioCase};
use boardless_cli::verify::run_verification;
use boardless_core::engine::{Engine, Strategy};
use boardless_core::game::{bundled_config, bundled_names, GameConfig};
use boardless_core::tiling::{BoardSpec, CanonCoord, Shape};
use boardless_core::topology::Topology;

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "BOARDLESS_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "boardless",
    version,
    about = "Growing-board engine benchmarks: growth curves, timed playouts, and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scripted growth scenario and write board-size metrics as CSV.
    Growth {
        /// Tile shape: square, hexagon, or triangle.
        #[arg(long)]
        shape: String,
        /// Growth family: peri or zone.
        #[arg(long)]
        family: String,
        /// Scenario case: worst or best.
        #[arg(long, default_value = "worst")]
        case: String,
        /// Number of scripted moves (at most 200).
        #[arg(long, default_value_t = 200)]
        moves: u32,
        /// Output file; stdout when neither this nor $BOARDLESS_OUT_DIR is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the expansion trace (JSON lines) to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run timed random playouts for each strategy and report throughput.
    Bench {
        /// Bundled game name (e.g. andantino-square) or a JSON config file.
        #[arg(long)]
        game: String,
        /// Comma-separated strategies, or `all`.
        #[arg(long, default_value = "all")]
        strategies: String,
        /// Wall-clock budget per strategy, in seconds.
        #[arg(long, default_value_t = 40.0)]
        seconds: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Keep topology and state across playouts instead of rebuilding
        /// them (the unfair mode; for demonstrating the reset protocol).
        #[arg(long)]
        no_reset: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a scripted list of canonical coordinates and dump the state.
    Play {
        /// Bundled game name or a JSON config file.
        #[arg(long)]
        config: String,
        /// JSON file holding an array of [a, b] coordinate pairs.
        #[arg(long)]
        script: PathBuf,
        /// State dump destination; stdout by default.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Also write the expansion trace (JSON lines) to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the replay/mapping equivalence oracles and invariant sweeps.
    Verify {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
    /// Dump a regular board topology as deterministic JSON.
    Topology {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Growth { shape, family, case, moves, out, trace } => {
            let shape: Shape = shape.parse()?;
            let family = parse_family(&family)?;
            let case: ScenarioCase = case.parse()?;
            let scenario = generate_scenario(shape, family, case, moves)?;
            if let Some(path) = trace {
                let events = replay_for_trace(&scenario)?;
                emit(&trace_jsonl(&events), Some(path), "trace.jsonl")?;
            }
            let table = run_growth(&scenario)?;
            let name = format!("growth-{}.csv", table.scenario_label);
            emit(&growth_csv(&table), out, &name)
        }
        Command::Bench { game, strategies, seconds, seed, no_reset, out } => {
            if seconds <= 0.0 {
                bail!("--seconds must be positive");
            }
            let config = load_config(&game)?;
            let strategies = parse_strategies(&strategies)?;
            let entries = run_timed_bench(&config, &strategies, seconds, seed, !no_reset)?;
            eprint!("{}", bench_table(&entries));
            let name = format!("bench-{}.csv", config.name);
            emit(&bench_csv(&entries), out, &name)
        }
        Command::Play { config, script, dump, trace } => {
            let config = load_config(&config)?;
            let moves = load_script(&script, config.shape)?;
            let engine = Engine::new(config.setup());
            let mut state = engine.initial_state(0);
            let mut events = Vec::new();
            for (i, &coord) in moves.iter().enumerate() {
                let player = (i % config.players as usize) as u8 + 1;
                let outcome = engine
                    .play_coord(&mut state, player, coord)
                    .with_context(|| format!("move {} at {coord:?}", i + 1))?;
                events.extend(outcome.expansion);
            }
            if let Some(path) = trace {
                emit(&trace_jsonl(&events), Some(path), "trace.jsonl")?;
            }
            let text = serde_json::to_string_pretty(&state.dump_json())?;
            emit(&text, dump, "state.json")
        }
        Command::Verify { seeds } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let report = run_verification(seeds)?;
            print!("{}", report.summary());
            if !report.passed() {
                bail!("verification found mismatches");
            }
            Ok(())
        }
        Command::Topology { shape, dim, out } => {
            let shape: Shape = shape.parse()?;
            let spec = BoardSpec::new(shape, dim)?;
            let topology = Topology::build_regular(spec);
            let name = format!("topology-{}-{dim}.json", shape.name());
            emit(&topology.dump().to_json(), out, &name)
        }
    }
}

/// Write to the explicit path, to `$BOARDLESS_OUT_DIR/<default_name>`, or to
/// stdout, in that order of preference.
fn emit(text: &str, out: Option<PathBuf>, default_name: &str) -> Result<()> {
    let target = out.or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name))
    });
    match target {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// One JSON object per expansion event.
fn trace_jsonl(events: &[boardless_core::engine::ExpansionEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("event serializes"));
        out.push('\n');
    }
    out
}

/// Re-run a scenario under its dynamic strategy, collecting expansion events.
fn replay_for_trace(
    scenario: &boardless_cli::scenario::GrowthScenario,
) -> Result<Vec<boardless_core::engine::ExpansionEvent>> {
    use boardless_cli::scenario::scenario_setup;
    use boardless_core::engine::GrowthFamily;
    let strategy = match scenario.family {
        GrowthFamily::Perimeter => Strategy::PeriMap,
        GrowthFamily::Zone => Strategy::ZoneMap,
        GrowthFamily::Fixed => bail!("trace needs a dynamic family"),
    };
    let engine = Engine::new(scenario_setup(scenario.shape, strategy));
    let mut state = engine.initial_state(0);
    let mut events = Vec::new();
    for (i, &coord) in scenario.moves.iter().enumerate() {
        let player = (i % 2) as u8 + 1;
        let outcome = engine.play_coord(&mut state, player, coord)?;
        events.extend(outcome.expansion);
    }
    Ok(events)
}

fn load_config(name_or_path: &str) -> Result<GameConfig> {
    let config = if let Some(config) = bundled_config(name_or_path) {
        config
    } else if std::path::Path::new(name_or_path).exists() {
        let text = fs::read_to_string(name_or_path)
            .with_context(|| format!("reading {name_or_path}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {name_or_path}"))?
    } else {
        bail!(
            "`{name_or_path}` is neither a bundled game ({}) nor a readable config file",
            bundled_names().join(", ")
        );
    };
    config.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(config)
}

fn parse_strategies(list: &str) -> Result<Vec<Strategy>> {
    if list.eq_ignore_ascii_case("all") {
        return Ok(Strategy::ALL.to_vec());
    }
    list.split(',')
        .map(|s| s.trim().parse::<Strategy>().map_err(|e| anyhow::anyhow!("{e}")))
        .collect()
}

/// A script is a JSON array of two-integer pairs, interpreted per shape:
/// `[x, y]` for squares and triangles, `[q, r]` for hexagons.
fn load_script(path: &PathBuf, shape: Shape) -> Result<Vec<CanonCoord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let pairs: Vec<[i32; 2]> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(pairs
        .into_iter()
        .map(|[a, b]| match shape {
            Shape::Square => CanonCoord::square(a, b),
            Shape::Hexagon => CanonCoord::hex(a, b),
            Shape::Triangle => CanonCoord::tri(a, b),
        })
        .collect())
}
