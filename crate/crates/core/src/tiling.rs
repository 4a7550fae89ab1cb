//! Pure geometry of the three regular tilings: coordinates, board generation,
//! neighbor enumeration, row classification, and the closed-form ring-expansion
//! and index-remapping formulas.
//!
//! Boards are centered on the lattice origin so that a board of one dimension
//! embeds exactly (same absolute coordinates) into the board of the next ring
//! dimension. All cell orderings are row-major from the bottom row up, which is
//! the order the remapping formulas assume.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tile shape of a board. Every operation in this module is total over the
/// three variants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Square,
    Hexagon,
    Triangle,
}

impl Shape {
    /// Vertices (= edges) bounding a single cell.
    pub fn verts_per_cell(self) -> usize {
        match self {
            Shape::Square => 4,
            Shape::Hexagon => 6,
            Shape::Triangle => 3,
        }
    }

    /// Number of edge-adjacent neighbors of an interior cell.
    pub fn edge_neighbor_count(self) -> usize {
        match self {
            Shape::Square => 4,
            Shape::Hexagon => 6,
            Shape::Triangle => 3,
        }
    }

    /// Number of cells sharing at least one vertex with an interior cell.
    pub fn vertex_neighbor_count(self) -> usize {
        match self {
            Shape::Square => 8,
            Shape::Hexagon => 6,
            Shape::Triangle => 12,
        }
    }

    /// Side length of the fixed oversized board used by the static strategy.
    pub fn fixed_board_dim(self) -> u32 {
        match self {
            Shape::Square | Shape::Triangle => 41,
            Shape::Hexagon => 21,
        }
    }

    /// Default starting dimension for a game with no initial tiles.
    pub fn default_initial_dim(self) -> u32 {
        match self {
            Shape::Square => 3,
            Shape::Hexagon => 2,
            Shape::Triangle => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Square => "square",
            Shape::Hexagon => "hexagon",
            Shape::Triangle => "triangle",
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = TilingError;

    fn from_str(s: &str) -> Result<Self, TilingError> {
        match s.to_ascii_lowercase().as_str() {
            "square" | "sq" => Ok(Shape::Square),
            "hexagon" | "hex" => Ok(Shape::Hexagon),
            "triangle" | "tri" => Ok(Shape::Triangle),
            _ => Err(TilingError::UnknownShape(s.to_string())),
        }
    }
}

/// Orientation of a triangular cell.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Orient {
    Up,
    Down,
}

/// Board-independent identity of a cell in the infinite tiling.
///
/// Two coordinates are equal iff they denote the same physical cell, which is
/// what makes remapping claims checkable: a cell keeps its `CanonCoord` no
/// matter how often the board around it is rebuilt.
///
/// Triangular cells store their orientation redundantly; it is fixed by the
/// lattice convention `Up iff x + y is even` and the `tri` constructor is the
/// only way to build one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CanonCoord {
    Square { x: i32, y: i32 },
    Hex { q: i32, r: i32 },
    Tri { x: i32, y: i32, orient: Orient },
}

impl CanonCoord {
    pub fn square(x: i32, y: i32) -> Self {
        CanonCoord::Square { x, y }
    }

    pub fn hex(q: i32, r: i32) -> Self {
        CanonCoord::Hex { q, r }
    }

    pub fn tri(x: i32, y: i32) -> Self {
        CanonCoord::Tri { x, y, orient: tri_orient(x, y) }
    }

    pub fn shape(self) -> Shape {
        match self {
            CanonCoord::Square { .. } => Shape::Square,
            CanonCoord::Hex { .. } => Shape::Hexagon,
            CanonCoord::Tri { .. } => Shape::Triangle,
        }
    }

    /// Sort key realizing the canonical traversal order: bottom row first,
    /// left to right within a row. For triangles the up-pointing cells of a
    /// band form one row and the down-pointing cells of the same band the
    /// next, so the key separates them.
    pub fn canon_key(self) -> (i32, u8, i32) {
        match self {
            CanonCoord::Square { x, y } => (y, 0, x),
            CanonCoord::Hex { q, r } => (r, 0, q),
            CanonCoord::Tri { x, y, orient } => (y, (orient == Orient::Down) as u8, x),
        }
    }

    /// The cells sharing an edge with this cell: 4 for squares, 6 for
    /// hexagons, 3 for triangles.
    pub fn edge_neighbors(self) -> Vec<CanonCoord> {
        match self {
            CanonCoord::Square { x, y } => vec![
                CanonCoord::square(x - 1, y),
                CanonCoord::square(x + 1, y),
                CanonCoord::square(x, y - 1),
                CanonCoord::square(x, y + 1),
            ],
            CanonCoord::Hex { q, r } => HEX_DIRS
                .iter()
                .map(|&(dq, dr)| CanonCoord::hex(q + dq, r + dr))
                .collect(),
            CanonCoord::Tri { x, y, orient } => {
                let dy = if orient == Orient::Up { -1 } else { 1 };
                vec![
                    CanonCoord::tri(x - 1, y),
                    CanonCoord::tri(x + 1, y),
                    CanonCoord::tri(x, y + dy),
                ]
            }
        }
    }

    /// The cells sharing at least one vertex with this cell: 8 for squares,
    /// 6 for hexagons (same as the edge neighbors), 12 for triangles.
    pub fn vertex_neighbors(self) -> Vec<CanonCoord> {
        match self {
            CanonCoord::Square { x, y } => {
                let mut out = Vec::with_capacity(8);
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        if dx != 0 || dy != 0 {
                            out.push(CanonCoord::square(x + dx, y + dy));
                        }
                    }
                }
                out
            }
            CanonCoord::Hex { .. } => self.edge_neighbors(),
            CanonCoord::Tri { x, y, orient } => {
                // The band on the flat side of the cell is met over a
                // five-cell span, the band on the apex side over three.
                let (flat, apex) = match orient {
                    Orient::Up => (y - 1, y + 1),
                    Orient::Down => (y + 1, y - 1),
                };
                let mut out = Vec::with_capacity(12);
                for dx in [-2, -1, 1, 2] {
                    out.push(CanonCoord::tri(x + dx, y));
                }
                for dx in -2..=2 {
                    out.push(CanonCoord::tri(x + dx, flat));
                }
                for dx in -1..=1 {
                    out.push(CanonCoord::tri(x + dx, apex));
                }
                out
            }
        }
    }

    /// Lattice vertices bounding the cell, counterclockwise, as exact integer
    /// keys (no floating point, so deduplication across cells is exact).
    ///
    /// Square vertices live on the unit grid. Hexagon vertices use the doubled
    /// horizontal / tripled vertical scaling of the axial center, under which
    /// every corner of every cell is an integer point. Triangle vertices live
    /// on the sheared integer lattice `(i, y)` with `i = (x - y) / 2` rounded
    /// per orientation.
    pub fn cell_vertices(self) -> Vec<(i32, i32)> {
        match self {
            CanonCoord::Square { x, y } => {
                vec![(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
            }
            CanonCoord::Hex { q, r } => {
                let (u, v) = (2 * q + r, 3 * r);
                vec![
                    (u, v - 2),
                    (u + 1, v - 1),
                    (u + 1, v + 1),
                    (u, v + 2),
                    (u - 1, v + 1),
                    (u - 1, v - 1),
                ]
            }
            CanonCoord::Tri { x, y, orient } => match orient {
                Orient::Up => {
                    let i = (x - y) / 2;
                    vec![(i, y), (i + 1, y), (i, y + 1)]
                }
                Orient::Down => {
                    let i = (x - y - 1) / 2;
                    vec![(i + 1, y), (i + 1, y + 1), (i, y + 1)]
                }
            },
        }
    }

    /// Squared Euclidean distance between the centroids of two cells of the
    /// same shape, on a fixed integer scale. Used for compact-growth move
    /// generation, tie-broken by `canon_key`, so it only needs to be
    /// proportional to the true squared distance.
    pub fn centroid_dist_sq(self, other: CanonCoord) -> i64 {
        let (ax, ay) = self.scaled_centroid();
        let (bx, by) = other.scaled_centroid();
        let (dx, dy) = ((ax - bx) as i64, (ay - by) as i64);
        match self {
            // Hex axial basis: unit vectors at 60 degrees.
            CanonCoord::Hex { .. } => dx * dx + dx * dy + dy * dy,
            // Triangle centroids on the (x/6, sqrt(3) y/6) grid.
            CanonCoord::Tri { .. } => dx * dx + 3 * dy * dy,
            CanonCoord::Square { .. } => dx * dx + dy * dy,
        }
    }

    fn scaled_centroid(self) -> (i32, i32) {
        match self {
            CanonCoord::Square { x, y } => (x, y),
            CanonCoord::Hex { q, r } => (q, r),
            CanonCoord::Tri { x, y, orient } => match orient {
                Orient::Up => {
                    let i = (x - y) / 2;
                    (6 * i + 3 * y + 3, 3 * y + 1)
                }
                Orient::Down => {
                    let i = (x - y - 1) / 2;
                    (6 * i + 3 * y + 6, 3 * y + 2)
                }
            },
        }
    }
}

const HEX_DIRS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

fn tri_orient(x: i32, y: i32) -> Orient {
    if (x + y).rem_euclid(2) == 0 {
        Orient::Up
    } else {
        Orient::Down
    }
}

/// A regular board: a shape and its side length (squares per side, hexagons
/// per hex-board side, triangle rows per side).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BoardSpec {
    pub shape: Shape,
    pub dim: u32,
}

impl BoardSpec {
    pub fn new(shape: Shape, dim: u32) -> Result<Self, TilingError> {
        if dim == 0 {
            return Err(TilingError::InvalidDimension(dim));
        }
        Ok(BoardSpec { shape, dim })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("board dimension must be at least 1, got {0}")]
    InvalidDimension(u32),
    #[error("unknown shape `{0}` (expected square, hexagon, or triangle)")]
    UnknownShape(String),
    #[error("cell id {id} is not on row {row} of a dimension-{dim} board")]
    RowMismatch { dim: u32, row: u32, id: u32 },
    #[error("cell id {id} out of range for a dimension-{dim} board ({count} cells)")]
    CellOutOfRange { dim: u32, id: u32, count: u64 },
}

/// Number of cells of a regular board.
pub fn cell_count(spec: BoardSpec) -> u64 {
    let d = spec.dim as u64;
    match spec.shape {
        Shape::Square | Shape::Triangle => d * d,
        Shape::Hexagon => 3 * d * (d - 1) + 1,
    }
}

/// Cells added by growing a full ring around a regular board of dimension
/// `prev_dim`, and the dimension of the grown board.
pub fn perimeter_added_cells(shape: Shape, prev_dim: u32) -> (u64, u32) {
    let p = prev_dim as u64;
    match shape {
        Shape::Square => (4 * (p + 2) - 4, prev_dim + 2),
        Shape::Hexagon => (6 * (p + 1) - 6, prev_dim + 1),
        Shape::Triangle => (3 * ((p + 3) * 2 - 1) - 6, prev_dim + 3),
    }
}

/// Index a cell of a regular board gets after a full-ring expansion, given
/// its index and its row (counted from 0, bottom to top) on the previous
/// board. Rejects a row that does not contain the given index.
pub fn perimeter_map_index(
    shape: Shape,
    prev_dim: u32,
    row: u32,
    prev_cell_id: u32,
) -> Result<u32, TilingError> {
    let actual = row_of_id(shape, prev_dim, prev_cell_id)?;
    if actual != row {
        return Err(TilingError::RowMismatch { dim: prev_dim, row, id: prev_cell_id });
    }
    let (p, r, i) = (prev_dim, row, prev_cell_id);
    Ok(match shape {
        Shape::Square => (p + 1) + 2 * (r + 1) + i,
        Shape::Hexagon => p + 2 * (r + 1) + i,
        Shape::Triangle => (p + 3) * 2 - 2 + 2 * (r + 1) + i,
    })
}

/// Number of index rows of a regular board (triangle bands count twice: one
/// row of up cells, one of down cells).
pub fn row_count(shape: Shape, dim: u32) -> u32 {
    match shape {
        Shape::Square => dim,
        Shape::Hexagon | Shape::Triangle => 2 * dim - 1,
    }
}

/// Number of cells on row `k` of a regular board.
pub fn row_len(shape: Shape, dim: u32, k: u32) -> u32 {
    debug_assert!(k < row_count(shape, dim));
    match shape {
        Shape::Square => dim,
        Shape::Hexagon => dim + k.min(2 * dim - 2 - k),
        Shape::Triangle => dim - k.div_ceil(2),
    }
}

/// Row (from 0, bottom to top) containing a cell index of a regular board.
pub fn row_of_id(shape: Shape, dim: u32, id: u32) -> Result<u32, TilingError> {
    let count = cell_count(BoardSpec { shape, dim });
    if (id as u64) >= count {
        return Err(TilingError::CellOutOfRange { dim, id, count });
    }
    let mut remaining = id;
    for k in 0..row_count(shape, dim) {
        let len = row_len(shape, dim, k);
        if remaining < len {
            return Ok(k);
        }
        remaining -= len;
    }
    unreachable!("id {id} within cell count {count} but past the last row");
}

/// Leftmost column (and bottom row) of a centered square board.
pub fn square_origin(dim: u32) -> i32 {
    -((dim as i32 - 1) / 2)
}

/// Anchor `(x, y)` of the bottom-left up-pointing corner cell of a centered
/// triangular board. Chosen so the board of dimension `d` sits inside the
/// board of dimension `d + 3` at identical absolute coordinates, and so the
/// orientation parity convention holds for every dimension.
pub fn tri_anchor(dim: u32) -> (i32, i32) {
    let d = dim as i32;
    let parity_fix = (d + d / 3 + 1).rem_euclid(2);
    (1 - d + parity_fix, -(d / 3))
}

/// All cells of a regular board in canonical index order: position `i` of the
/// returned list is the cell with id `i`.
pub fn enumerate_board(spec: BoardSpec) -> Vec<CanonCoord> {
    let d = spec.dim as i32;
    let mut cells = Vec::with_capacity(cell_count(spec) as usize);
    match spec.shape {
        Shape::Square => {
            let o = square_origin(spec.dim);
            for y in o..o + d {
                for x in o..o + d {
                    cells.push(CanonCoord::square(x, y));
                }
            }
        }
        Shape::Hexagon => {
            let radius = d - 1;
            for r in -radius..=radius {
                let lo = (-radius).max(-radius - r);
                let hi = radius.min(radius - r);
                for q in lo..=hi {
                    cells.push(CanonCoord::hex(q, r));
                }
            }
        }
        Shape::Triangle => {
            let (ax, ay) = tri_anchor(spec.dim);
            for band in 0..d {
                let y = ay + band;
                for i in 0..d - band {
                    cells.push(CanonCoord::tri(ax + 2 * i + band, y));
                }
                for i in 0..d - band - 1 {
                    cells.push(CanonCoord::tri(ax + 2 * i + 1 + band, y));
                }
            }
        }
    }
    cells
}

/// Row index (from 0, bottom to top) of a coordinate on a regular board of
/// the given dimension. The coordinate must belong to the board.
pub fn row_of_coord(spec: BoardSpec, coord: CanonCoord) -> u32 {
    match coord {
        CanonCoord::Square { y, .. } => (y - square_origin(spec.dim)) as u32,
        CanonCoord::Hex { r, .. } => (r + spec.dim as i32 - 1) as u32,
        CanonCoord::Tri { y, orient, .. } => {
            let (_, ay) = tri_anchor(spec.dim);
            (2 * (y - ay) + (orient == Orient::Down) as i32) as u32
        }
    }
}
