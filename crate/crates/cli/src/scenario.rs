//! Scripted growth scenarios: deterministic move sequences that drive the
//! board-size benchmarks.
//!
//! Every scenario starts from a one-cell board. Worst cases maximize the
//! tiles created per move (always playing on the boundary in the most
//! expensive spot); best cases grow compactly, spiraling around the first
//! placement. All sequences are legal under open placement.

use anyhow::{bail, Result};
use boardless_core::engine::{Engine, GrowthFamily, InitialBoard, PlacementRule, Setup, Strategy};
use boardless_core::state::{ComponentDef, ComponentTable};
use boardless_core::tiling::{square_origin, tri_anchor, CanonCoord, Shape};

pub const MAX_SCENARIO_MOVES: u32 = 200;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScenarioCase {
    Worst,
    Best,
}

impl ScenarioCase {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioCase::Worst => "worst",
            ScenarioCase::Best => "best",
        }
    }
}

impl std::str::FromStr for ScenarioCase {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "worst" => Ok(ScenarioCase::Worst),
            "best" => Ok(ScenarioCase::Best),
            other => bail!("unknown case `{other}` (expected worst or best)"),
        }
    }
}

/// A generated move list for one (shape, growth family, case) triple.
#[derive(Clone, Debug)]
pub struct GrowthScenario {
    pub shape: Shape,
    pub family: GrowthFamily,
    pub case: ScenarioCase,
    pub moves: Vec<CanonCoord>,
}

/// Open-placement engine setup used to execute scenarios.
pub fn scenario_setup(shape: Shape, strategy: Strategy) -> Setup {
    Setup {
        shape,
        strategy,
        players: 2,
        components: ComponentTable::new(vec![
            ComponentDef { index: 1, owner: 1, hand_count: None },
            ComponentDef { index: 2, owner: 2, hand_count: None },
        ]),
        rule: PlacementRule::AnyEmpty,
        initial: InitialBoard::OneCell,
    }
}

pub fn parse_family(s: &str) -> Result<GrowthFamily> {
    match s.to_ascii_lowercase().as_str() {
        "peri" | "perimeter" => Ok(GrowthFamily::Perimeter),
        "zone" => Ok(GrowthFamily::Zone),
        other => bail!("unknown growth family `{other}` (expected peri or zone)"),
    }
}

pub fn family_name(family: GrowthFamily) -> &'static str {
    match family {
        GrowthFamily::Fixed => "BASE",
        GrowthFamily::Perimeter => "PERI",
        GrowthFamily::Zone => "ZONE",
    }
}

/// Generate the named scenario with `budget` moves (at most 200).
pub fn generate_scenario(
    shape: Shape,
    family: GrowthFamily,
    case: ScenarioCase,
    budget: u32,
) -> Result<GrowthScenario> {
    if budget == 0 || budget > MAX_SCENARIO_MOVES {
        bail!("move budget must be in 1..={MAX_SCENARIO_MOVES}, got {budget}");
    }
    let moves = match (shape, family, case) {
        (_, GrowthFamily::Fixed, _) => bail!("growth scenarios need a dynamic family"),
        (Shape::Square, GrowthFamily::Perimeter, ScenarioCase::Worst) => {
            // A corner of the current board every turn; the board gains a
            // full ring per move.
            (1..=budget)
                .map(|k| {
                    let o = square_origin(2 * k - 1);
                    CanonCoord::square(o, o)
                })
                .collect()
        }
        (Shape::Square, _, ScenarioCase::Best) => square_spiral(budget),
        (Shape::Square, GrowthFamily::Zone, ScenarioCase::Worst) => {
            // Diagonal corner walk: every placement sits on a fresh corner
            // and creates five cells.
            (0..budget as i32).map(|k| CanonCoord::square(k, k)).collect()
        }
        (Shape::Hexagon, GrowthFamily::Perimeter, ScenarioCase::Worst) => {
            // The east corner of the current board every turn.
            (0..budget as i32).map(|k| CanonCoord::hex(k, 0)).collect()
        }
        (Shape::Hexagon, _, ScenarioCase::Best) => hex_spiral(budget),
        (Shape::Hexagon, GrowthFamily::Zone, ScenarioCase::Worst) => hex_zone_worst(budget),
        (Shape::Triangle, GrowthFamily::Perimeter, ScenarioCase::Worst) => {
            // The bottom-left corner of the current board every turn.
            (0..budget)
                .map(|k| {
                    let (ax, ay) = tri_anchor(1 + 3 * k);
                    CanonCoord::tri(ax, ay)
                })
                .collect()
        }
        (Shape::Triangle, GrowthFamily::Perimeter, ScenarioCase::Best) => {
            tri_shell_fill(budget)
        }
        (Shape::Triangle, GrowthFamily::Zone, ScenarioCase::Worst) => tri_zone_worst(budget),
        (Shape::Triangle, GrowthFamily::Zone, ScenarioCase::Best) => tri_zone_best(budget)?,
    };
    debug_assert_eq!(moves.len(), budget as usize);
    Ok(GrowthScenario { shape, family, case, moves })
}

/// Counterclockwise ring spiral on the square lattice: center, then each
/// ring entered at its east-southeast cell.
fn square_spiral(budget: u32) -> Vec<CanonCoord> {
    let mut moves = vec![CanonCoord::square(0, 0)];
    let mut r = 1;
    'outer: loop {
        let (mut x, mut y) = (r, -r + 1);
        let legs = [(0i32, 1i32, 2 * r - 1), (-1, 0, 2 * r), (0, -1, 2 * r), (1, 0, 2 * r)];
        moves.push(CanonCoord::square(x, y));
        if moves.len() == budget as usize {
            break 'outer;
        }
        for (dx, dy, steps) in legs {
            for _ in 0..steps {
                x += dx;
                y += dy;
                moves.push(CanonCoord::square(x, y));
                if moves.len() == budget as usize {
                    break 'outer;
                }
            }
        }
        r += 1;
    }
    moves
}

/// Counterclockwise ring spiral in axial coordinates, each ring entered at
/// its east cell.
fn hex_spiral(budget: u32) -> Vec<CanonCoord> {
    let mut moves = vec![CanonCoord::hex(0, 0)];
    let dirs = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)];
    let mut r = 1;
    'outer: loop {
        let (mut q, mut s) = (r, 0);
        moves.push(CanonCoord::hex(q, s));
        if moves.len() == budget as usize {
            break 'outer;
        }
        for (dq, dr) in dirs {
            for _ in 0..r {
                q += dq;
                s += dr;
                if (q, s) == (r, 0) {
                    continue;
                }
                moves.push(CanonCoord::hex(q, s));
                if moves.len() == budget as usize {
                    break 'outer;
                }
            }
        }
        r += 1;
    }
    moves
}

/// Hexagonal zone worst case: a straight east line. The drawn reference
/// sequence dresses the line's end after four moves (two placements one row
/// up, then the line tip) before continuing east; a pure line would grow
/// strictly faster than the published per-move sizes.
fn hex_zone_worst(budget: u32) -> Vec<CanonCoord> {
    let prefix =
        [(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (4, 0)].map(|(q, r)| CanonCoord::hex(q, r));
    let mut moves: Vec<CanonCoord> = prefix.into_iter().take(budget as usize).collect();
    let mut q = 5;
    while moves.len() < budget as usize {
        moves.push(CanonCoord::hex(q, 0));
        q += 1;
    }
    moves
}

/// Triangular perimeter best case: fill concentric triangular shells
/// (dimension 1, 4, 7, ...) in canonical order, so only the first cell of
/// each shell touches the boundary.
fn tri_shell_fill(budget: u32) -> Vec<CanonCoord> {
    let mut moves = Vec::with_capacity(budget as usize);
    let mut placed: std::collections::HashSet<CanonCoord> = std::collections::HashSet::new();
    let mut dim = 1;
    while moves.len() < budget as usize {
        for coord in boardless_core::tiling::enumerate_board(
            boardless_core::tiling::BoardSpec { shape: Shape::Triangle, dim },
        ) {
            if placed.insert(coord) {
                moves.push(coord);
                if moves.len() == budget as usize {
                    break;
                }
            }
        }
        dim += 3;
    }
    moves
}

/// Triangular zone worst case: march toward the bottom-right, alternating
/// between the placed row and the row below so every move creates seven
/// cells.
fn tri_zone_worst(budget: u32) -> Vec<CanonCoord> {
    let mut moves = vec![CanonCoord::tri(0, 0)];
    for m in 2..=budget {
        let k = (m / 2) as i32;
        if m % 2 == 0 {
            moves.push(CanonCoord::tri(4 * k - 2, -1));
        } else {
            moves.push(CanonCoord::tri(4 * k, 0));
        }
    }
    moves.truncate(budget as usize);
    moves
}

/// Triangular zone best case: greedy compact growth, always playing the
/// empty board cell closest to the first placement (canonical order breaks
/// ties). Needs the zone engine to know which cells exist.
fn tri_zone_best(budget: u32) -> Result<Vec<CanonCoord>> {
    let engine = Engine::new(scenario_setup(Shape::Triangle, Strategy::ZoneMap));
    let mut state = engine.initial_state(0);
    let origin = CanonCoord::tri(0, 0);
    let mut moves = Vec::with_capacity(budget as usize);
    for _ in 0..budget {
        let pick = state
            .board
            .playable
            .iter()
            .map(|site| state.board_topology.coord_of(site))
            .min_by_key(|c| (c.centroid_dist_sq(origin), c.canon_key()))
            .expect("zone board always has empty cells");
        engine.play_coord(&mut state, 1, pick)?;
        moves.push(pick);
    }
    Ok(moves)
}
