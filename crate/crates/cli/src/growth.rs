//! Board-size metrics over scripted growth scenarios, with CSV output.

use anyhow::Result;
use boardless_core::engine::{Engine, GrowthFamily, Strategy};
use boardless_core::tiling::cell_count;

use crate::scenario::{family_name, scenario_setup, GrowthScenario};

/// One measurement after one move.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample {
    pub move_index: u32,
    pub board_cells: u64,
    pub occupied_cells: u32,
    pub unused_pct: f64,
}

fn sample(move_index: u32, board_cells: u64, occupied_cells: u32) -> MetricSample {
    let unused = board_cells - occupied_cells as u64;
    MetricSample {
        move_index,
        board_cells,
        occupied_cells,
        unused_pct: unused as f64 / board_cells as f64 * 100.0,
    }
}

/// Samples of one strategy over one scenario.
#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub strategy: String,
    pub samples: Vec<MetricSample>,
}

#[derive(Clone, Debug)]
pub struct GrowthTable {
    pub scenario_label: String,
    pub rows: Vec<GrowthRow>,
}

/// Execute the scenario under the fixed board and under its dynamic
/// strategy, sampling board size, occupancy, and unused percentage after
/// every move. The fixed-board row comes first and stops early if a scripted
/// move falls outside its bounds.
pub fn run_growth(scenario: &GrowthScenario) -> Result<GrowthTable> {
    let strategy = match scenario.family {
        GrowthFamily::Perimeter => Strategy::PeriMap,
        GrowthFamily::Zone => Strategy::ZoneMap,
        GrowthFamily::Fixed => anyhow::bail!("scenario family must be dynamic"),
    };

    let mut rows = Vec::new();

    let engine = Engine::new(scenario_setup(scenario.shape, Strategy::Base));
    let fixed_cells = cell_count(engine.initial_spec());
    let mut state = engine.initial_state(0);
    let mut samples = Vec::new();
    for (i, &coord) in scenario.moves.iter().enumerate() {
        if state.board_topology.cell_id(coord).is_none() {
            break;
        }
        let player = (i % 2) as u8 + 1;
        engine.play_coord(&mut state, player, coord)?;
        samples.push(sample(i as u32 + 1, fixed_cells, i as u32 + 1));
    }
    rows.push(GrowthRow { strategy: "BASE".to_string(), samples });

    let engine = Engine::new(scenario_setup(scenario.shape, strategy));
    let mut state = engine.initial_state(0);
    let mut samples = Vec::with_capacity(scenario.moves.len());
    for (i, &coord) in scenario.moves.iter().enumerate() {
        let player = (i % 2) as u8 + 1;
        engine.play_coord(&mut state, player, coord)?;
        samples.push(sample(i as u32 + 1, state.board_site_count() as u64, i as u32 + 1));
    }
    rows.push(GrowthRow { strategy: family_name(scenario.family).to_string(), samples });

    Ok(GrowthTable {
        scenario_label: format!(
            "{}-{}-{}",
            scenario.shape.name(),
            family_name(scenario.family).to_ascii_lowercase(),
            scenario.case.name()
        ),
        rows,
    })
}

/// Render a growth table as CSV: one row per (strategy, move) sample.
pub fn growth_csv(table: &GrowthTable) -> String {
    let mut out = String::from("scenario,strategy,move,board_cells,occupied_cells,unused_pct\n");
    for row in &table.rows {
        for s in &row.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{:.4}\n",
                table.scenario_label,
                row.strategy,
                s.move_index,
                s.board_cells,
                s.occupied_cells,
                s.unused_pct
            ));
        }
    }
    out
}
