//! Materialized boards: cells, deduplicated vertices and edges, precomputed
//! adjacency, and perimeter classification.
//!
//! A [`Topology`] is immutable once built. Board growth produces a new
//! topology, either from scratch ([`Topology::build_from_cells`]) or by
//! extending an existing one with a few cells ([`Topology::extend_with_cells`]),
//! which yields the identical structure at a fraction of the cost.
//!
//! Vertices are keyed by exact integer lattice coordinates so deduplication
//! across adjacent cells never depends on floating-point comparison. Cell ids
//! follow the canonical traversal order (bottom row up, left to right), so the
//! id order of a regular board equals its enumeration order.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::tiling::{enumerate_board, BoardSpec, CanonCoord, Shape};

pub type CellId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("cell set is empty")]
    EmptyCellSet,
    #[error("cell {0:?} does not match board shape {1:?}")]
    ShapeMismatch(CanonCoord, Shape),
    #[error("cell id {id} out of range ({count} cells)")]
    InvalidCellId { id: CellId, count: usize },
    #[error("cells to add overlap the existing board: {0:?}")]
    OverlappingCells(CanonCoord),
}

/// A concrete board graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    shape: Shape,
    /// Cell id -> coordinate, in canonical traversal order.
    cells: Vec<CanonCoord>,
    /// Vertex id -> integer lattice key, in first-touch order.
    vertices: Vec<(i32, i32)>,
    /// Edge id -> vertex id pair (low, high), stored once per shared edge.
    edges: Vec<(u32, u32)>,
    /// Incident vertex ids per cell, fixed stride (4 / 6 / 3), cell order.
    cell_vertices: Vec<u32>,
    /// Incident edge ids per cell, fixed stride, cell order.
    cell_edges: Vec<u32>,
    edge_adj_off: Vec<u32>,
    edge_adj: Vec<CellId>,
    vert_adj_off: Vec<u32>,
    vert_adj: Vec<CellId>,
    vertex_ids: HashMap<(i32, i32), u32>,
    edge_ids: HashMap<(u32, u32), u32>,
    /// Set when the cell set is a full regular board built as such.
    regular_dim: Option<u32>,
}

impl Topology {
    /// Build the full regular board described by `spec`.
    pub fn build_regular(spec: BoardSpec) -> Topology {
        construct(spec.shape, enumerate_board(spec), Some(spec.dim))
    }

    /// Build a board over an arbitrary cell set (deduplicated), assigning ids
    /// in canonical traversal order over the bounding region.
    pub fn build_from_cells(
        shape: Shape,
        cells: impl IntoIterator<Item = CanonCoord>,
    ) -> Result<Topology, TopologyError> {
        let mut cells: Vec<CanonCoord> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(TopologyError::EmptyCellSet);
        }
        for &c in &cells {
            if c.shape() != shape {
                return Err(TopologyError::ShapeMismatch(c, shape));
            }
        }
        cells.sort_unstable_by_key(|c| c.canon_key());
        cells.dedup();
        Ok(construct(shape, cells, None))
    }

    /// Build the topology over this board's cells plus `added`, reusing the
    /// existing vertex and edge numbering. Equivalent to rebuilding from the
    /// union, but only the added cells and their surroundings are recomputed.
    pub fn extend_with_cells(&self, added: &[CanonCoord]) -> Result<Topology, TopologyError> {
        let mut added: Vec<CanonCoord> = added.to_vec();
        for &c in &added {
            if c.shape() != self.shape {
                return Err(TopologyError::ShapeMismatch(c, self.shape));
            }
            if self.cell_id(c).is_some() {
                return Err(TopologyError::OverlappingCells(c));
            }
        }
        added.sort_unstable_by_key(|c| c.canon_key());
        added.dedup();
        Ok(extend(self, &added))
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[CanonCoord] {
        &self.cells
    }

    pub fn coord_of(&self, id: CellId) -> CanonCoord {
        self.cells[id as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[(i32, i32)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Side length when this topology is a full regular board.
    pub fn regular_dim(&self) -> Option<u32> {
        self.regular_dim
    }

    /// Id of the cell at `coord`, if present. Regular boards resolve this
    /// arithmetically; irregular boards by binary search over the canonical
    /// cell order.
    pub fn cell_id(&self, coord: CanonCoord) -> Option<CellId> {
        if coord.shape() != self.shape {
            return None;
        }
        if let Some(dim) = self.regular_dim {
            return regular_cell_id(dim, coord);
        }
        self.cells
            .binary_search_by_key(&coord.canon_key(), |c| c.canon_key())
            .ok()
            .map(|i| i as CellId)
    }

    pub fn cell_vertex_ids(&self, id: CellId) -> &[u32] {
        let k = self.shape.verts_per_cell();
        &self.cell_vertices[id as usize * k..(id as usize + 1) * k]
    }

    pub fn cell_edge_ids(&self, id: CellId) -> &[u32] {
        let k = self.shape.verts_per_cell();
        &self.cell_edges[id as usize * k..(id as usize + 1) * k]
    }

    /// Present edge-adjacent neighbors, ascending by cell id.
    pub fn edge_adjacent(&self, id: CellId) -> &[CellId] {
        let (lo, hi) =
            (self.edge_adj_off[id as usize] as usize, self.edge_adj_off[id as usize + 1] as usize);
        &self.edge_adj[lo..hi]
    }

    /// Present vertex-adjacent neighbors, ascending by cell id.
    pub fn vertex_adjacent(&self, id: CellId) -> &[CellId] {
        let (lo, hi) =
            (self.vert_adj_off[id as usize] as usize, self.vert_adj_off[id as usize + 1] as usize);
        &self.vert_adj[lo..hi]
    }

    /// A cell is on the perimeter iff at least one of its vertex neighbors is
    /// missing from the board.
    pub fn is_perimeter(&self, id: CellId) -> Result<bool, TopologyError> {
        if (id as usize) >= self.cells.len() {
            return Err(TopologyError::InvalidCellId { id, count: self.cells.len() });
        }
        Ok(self.vertex_adjacent(id).len() < self.shape.vertex_neighbor_count())
    }

    /// All perimeter cell ids, ascending.
    pub fn perimeter_cells(&self) -> Vec<CellId> {
        (0..self.cells.len() as CellId)
            .filter(|&id| self.vertex_adjacent(id).len() < self.shape.vertex_neighbor_count())
            .collect()
    }

    /// Deterministic structural dump for golden tests and debugging.
    pub fn dump(&self) -> TopologyDump {
        TopologyDump {
            shape: self.shape,
            cell_count: self.cells.len(),
            vertex_count: self.vertices.len(),
            edge_count: self.edges.len(),
            cells: (0..self.cells.len() as CellId)
                .map(|id| CellDump {
                    id,
                    coord: self.cells[id as usize],
                    edge_adjacent: self.edge_adjacent(id).to_vec(),
                    vertex_adjacent: self.vertex_adjacent(id).to_vec(),
                    perimeter: self.vertex_adjacent(id).len()
                        < self.shape.vertex_neighbor_count(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TopologyDump {
    pub shape: Shape,
    pub cell_count: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub cells: Vec<CellDump>,
}

#[derive(Debug, Serialize)]
pub struct CellDump {
    pub id: CellId,
    pub coord: CanonCoord,
    pub edge_adjacent: Vec<CellId>,
    pub vertex_adjacent: Vec<CellId>,
    pub perimeter: bool,
}

impl TopologyDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology dump serializes")
    }
}

fn construct(shape: Shape, cells: Vec<CanonCoord>, regular_dim: Option<u32>) -> Topology {
    let n = cells.len();
    let k = shape.verts_per_cell();
    let mut vertex_ids: HashMap<(i32, i32), u32> = HashMap::with_capacity(n * 2);
    let mut vertices: Vec<(i32, i32)> = Vec::with_capacity(n * 2);
    let mut edge_ids: HashMap<(u32, u32), u32> = HashMap::with_capacity(n * 2);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n * 2);
    let mut cell_vertices: Vec<u32> = Vec::with_capacity(n * k);
    let mut cell_edges: Vec<u32> = Vec::with_capacity(n * k);

    let mut vids = Vec::with_capacity(k);
    for &coord in &cells {
        vids.clear();
        for key in coord.cell_vertices() {
            let next = vertices.len() as u32;
            let vid = *vertex_ids.entry(key).or_insert_with(|| {
                vertices.push(key);
                next
            });
            vids.push(vid);
        }
        cell_vertices.extend_from_slice(&vids);
        for i in 0..k {
            let (a, b) = (vids[i], vids[(i + 1) % k]);
            let key = (a.min(b), a.max(b));
            let next = edges.len() as u32;
            let eid = *edge_ids.entry(key).or_insert_with(|| {
                edges.push(key);
                next
            });
            cell_edges.push(eid);
        }
    }

    let lookup = |coord: CanonCoord| -> Option<CellId> {
        cells
            .binary_search_by_key(&coord.canon_key(), |c| c.canon_key())
            .ok()
            .map(|i| i as CellId)
    };

    let mut edge_adj_off = Vec::with_capacity(n + 1);
    let mut edge_adj = Vec::with_capacity(n * shape.edge_neighbor_count());
    let mut vert_adj_off = Vec::with_capacity(n + 1);
    let mut vert_adj = Vec::with_capacity(n * shape.vertex_neighbor_count());
    edge_adj_off.push(0);
    vert_adj_off.push(0);
    for &coord in &cells {
        let start = edge_adj.len();
        for nb in coord.edge_neighbors() {
            if let Some(id) = lookup(nb) {
                edge_adj.push(id);
            }
        }
        edge_adj[start..].sort_unstable();
        edge_adj_off.push(edge_adj.len() as u32);

        let start = vert_adj.len();
        for nb in coord.vertex_neighbors() {
            if let Some(id) = lookup(nb) {
                vert_adj.push(id);
            }
        }
        vert_adj[start..].sort_unstable();
        vert_adj_off.push(vert_adj.len() as u32);
    }

    Topology {
        shape,
        cells,
        vertices,
        edges,
        cell_vertices,
        cell_edges,
        edge_adj_off,
        edge_adj,
        vert_adj_off,
        vert_adj,
        vertex_ids,
        edge_ids,
        regular_dim,
    }
}

/// Incremental construction: merge `added` (sorted, disjoint) into `old`.
/// Vertex and edge ids are stable; cell ids shift by the number of added
/// cells preceding them in canonical order.
fn extend(old: &Topology, added: &[CanonCoord]) -> Topology {
    if added.is_empty() {
        return old.clone();
    }
    let shape = old.shape;
    let k = shape.verts_per_cell();
    let old_n = old.cells.len();
    let n = old_n + added.len();

    // Merge the two sorted coordinate lists, recording both id translations.
    let mut cells = Vec::with_capacity(n);
    let mut old_to_new = Vec::with_capacity(old_n);
    let mut added_ids = Vec::with_capacity(added.len());
    {
        let (mut i, mut j) = (0, 0);
        while i < old_n || j < added.len() {
            let take_old = j == added.len()
                || (i < old_n && old.cells[i].canon_key() < added[j].canon_key());
            if take_old {
                old_to_new.push((cells.len()) as CellId);
                cells.push(old.cells[i]);
                i += 1;
            } else {
                added_ids.push(cells.len() as CellId);
                cells.push(added[j]);
                j += 1;
            }
        }
    }

    let lookup = |coord: CanonCoord| -> Option<CellId> {
        cells
            .binary_search_by_key(&coord.canon_key(), |c| c.canon_key())
            .ok()
            .map(|i| i as CellId)
    };
    let is_added = |id: CellId| -> bool { added_ids.binary_search(&id).is_ok() };

    let mut vertex_ids = old.vertex_ids.clone();
    let mut vertices = old.vertices.clone();
    let mut edge_ids = old.edge_ids.clone();
    let mut edges = old.edges.clone();

    // Vertex and edge rows for the added cells only; old rows are copied.
    let mut added_vert_rows: Vec<Vec<u32>> = Vec::with_capacity(added.len());
    let mut added_edge_rows: Vec<Vec<u32>> = Vec::with_capacity(added.len());
    for &coord in added {
        let mut vids = Vec::with_capacity(k);
        for key in coord.cell_vertices() {
            let next = vertices.len() as u32;
            let vid = *vertex_ids.entry(key).or_insert_with(|| {
                vertices.push(key);
                next
            });
            vids.push(vid);
        }
        let mut eids = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (vids[i], vids[(i + 1) % k]);
            let key = (a.min(b), a.max(b));
            let next = edges.len() as u32;
            let eid = *edge_ids.entry(key).or_insert_with(|| {
                edges.push(key);
                next
            });
            eids.push(eid);
        }
        added_vert_rows.push(vids);
        added_edge_rows.push(eids);
    }

    let mut cell_vertices = Vec::with_capacity(n * k);
    let mut cell_edges = Vec::with_capacity(n * k);
    {
        let mut next_added = 0;
        for (new_id, _) in cells.iter().enumerate() {
            if next_added < added_ids.len() && added_ids[next_added] == new_id as CellId {
                cell_vertices.extend_from_slice(&added_vert_rows[next_added]);
                cell_edges.extend_from_slice(&added_edge_rows[next_added]);
                next_added += 1;
            } else {
                let old_id = new_id - next_added;
                cell_vertices.extend_from_slice(&old.cell_vertices[old_id * k..(old_id + 1) * k]);
                cell_edges.extend_from_slice(&old.cell_edges[old_id * k..(old_id + 1) * k]);
            }
        }
    }

    // Adjacency rows for added cells, plus the back-references old cells gain.
    // `extras` pairs (existing new id, added new id) for both relations.
    let mut edge_extras: Vec<(CellId, CellId)> = Vec::new();
    let mut vert_extras: Vec<(CellId, CellId)> = Vec::new();
    let mut added_edge_adj: Vec<Vec<CellId>> = Vec::with_capacity(added.len());
    let mut added_vert_adj: Vec<Vec<CellId>> = Vec::with_capacity(added.len());
    for (idx, &coord) in added.iter().enumerate() {
        let a_id = added_ids[idx];
        let mut row = Vec::new();
        for nb in coord.edge_neighbors() {
            if let Some(id) = lookup(nb) {
                row.push(id);
                if !is_added(id) {
                    edge_extras.push((id, a_id));
                }
            }
        }
        row.sort_unstable();
        added_edge_adj.push(row);
        let mut row = Vec::new();
        for nb in coord.vertex_neighbors() {
            if let Some(id) = lookup(nb) {
                row.push(id);
                if !is_added(id) {
                    vert_extras.push((id, a_id));
                }
            }
        }
        row.sort_unstable();
        added_vert_adj.push(row);
    }
    edge_extras.sort_unstable();
    vert_extras.sort_unstable();

    let merge_csr = |old_off: &[u32],
                     old_flat: &[CellId],
                     added_rows: &[Vec<CellId>],
                     extras: &[(CellId, CellId)]|
     -> (Vec<u32>, Vec<CellId>) {
        let mut off = Vec::with_capacity(n + 1);
        let mut flat = Vec::with_capacity(old_flat.len() + extras.len() * 2);
        off.push(0u32);
        let mut next_added = 0;
        let mut extra_i = 0;
        for new_id in 0..n as CellId {
            if next_added < added_ids.len() && added_ids[next_added] == new_id {
                flat.extend_from_slice(&added_rows[next_added]);
                next_added += 1;
            } else {
                let old_id = (new_id as usize) - next_added;
                let row =
                    &old_flat[old_off[old_id] as usize..old_off[old_id + 1] as usize];
                let row_start = flat.len();
                flat.extend(row.iter().map(|&c| old_to_new[c as usize]));
                // Merge in the added neighbors of this cell (already sorted).
                while extra_i < extras.len() && extras[extra_i].0 == new_id {
                    flat.push(extras[extra_i].1);
                    extra_i += 1;
                }
                flat[row_start..].sort_unstable();
            }
            off.push(flat.len() as u32);
        }
        (off, flat)
    };

    let (edge_adj_off, edge_adj) =
        merge_csr(&old.edge_adj_off, &old.edge_adj, &added_edge_adj, &edge_extras);
    let (vert_adj_off, vert_adj) =
        merge_csr(&old.vert_adj_off, &old.vert_adj, &added_vert_adj, &vert_extras);

    Topology {
        shape,
        cells,
        vertices,
        edges,
        cell_vertices,
        cell_edges,
        edge_adj_off,
        edge_adj,
        vert_adj_off,
        vert_adj,
        vertex_ids,
        edge_ids,
        regular_dim: None,
    }
}

/// Arithmetic coordinate-to-id resolution on a regular board.
fn regular_cell_id(dim: u32, coord: CanonCoord) -> Option<CellId> {
    let d = dim as i64;
    match coord {
        CanonCoord::Square { x, y } => {
            let o = crate::tiling::square_origin(dim) as i64;
            let (cx, cy) = (x as i64 - o, y as i64 - o);
            if cx < 0 || cx >= d || cy < 0 || cy >= d {
                return None;
            }
            Some((cy * d + cx) as CellId)
        }
        CanonCoord::Hex { q, r } => {
            let radius = d - 1;
            let (q, r) = (q as i64, r as i64);
            if q.abs() > radius || r.abs() > radius || (q + r).abs() > radius {
                return None;
            }
            let row = r + radius;
            let q_lo = (-radius).max(-radius - r);
            Some((hex_row_start(d, row) + (q - q_lo)) as CellId)
        }
        CanonCoord::Tri { x, y, orient } => {
            let (ax, ay) = crate::tiling::tri_anchor(dim);
            let band = y as i64 - ay as i64;
            if band < 0 || band >= d {
                return None;
            }
            let x_loc = x as i64 - ax as i64;
            let pos2 = x_loc - band;
            if pos2 < 0 || x_loc > 2 * d - 2 - band {
                return None;
            }
            let down = orient == crate::tiling::Orient::Down;
            debug_assert_eq!(down, pos2.rem_euclid(2) == 1);
            let row = 2 * band + down as i64;
            let i = if down { (pos2 - 1) / 2 } else { pos2 / 2 };
            // Cells before row `row`: d*row - floor(row^2 / 4).
            Some((d * row - (row * row) / 4 + i) as CellId)
        }
    }
}

fn hex_row_start(d: i64, row: i64) -> i64 {
    if row <= d {
        d * row + row * (row - 1) / 2
    } else {
        let full = d * d + d * (d - 1) / 2;
        full + (row - d) * (3 * d - 2) - (row - 1 + d) * (row - d) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::cell_count;
    use std::collections::HashMap;

    fn spec(shape: Shape, dim: u32) -> BoardSpec {
        BoardSpec { shape, dim }
    }

    #[test]
    fn square_board_counts() {
        let t = Topology::build_regular(spec(Shape::Square, 3));
        assert_eq!(t.cell_count(), 9);
        assert_eq!(t.vertex_count(), 16);
        assert_eq!(t.edge_count(), 24);

        let t = Topology::build_regular(spec(Shape::Square, 1));
        assert_eq!((t.cell_count(), t.vertex_count(), t.edge_count()), (1, 4, 4));
    }

    #[test]
    fn hexagon_board_counts() {
        let t = Topology::build_regular(spec(Shape::Hexagon, 2));
        assert_eq!(t.cell_count(), 7);
        assert_eq!(t.vertex_count(), 24);
        assert_eq!(t.edge_count(), 30);
    }

    #[test]
    fn euler_formula_holds_on_regular_boards() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            for dim in 1..=7 {
                let t = Topology::build_regular(spec(shape, dim));
                let (v, e, c) =
                    (t.vertex_count() as i64, t.edge_count() as i64, t.cell_count() as i64);
                assert_eq!(v - e + c, 1, "{shape:?} dim {dim}");
                assert_eq!(c as u64, cell_count(spec(shape, dim)));
            }
        }
    }

    #[test]
    fn every_edge_is_shared_by_at_most_two_cells() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            let t = Topology::build_regular(spec(shape, 4));
            let mut uses: HashMap<u32, usize> = HashMap::new();
            for id in 0..t.cell_count() as CellId {
                for &e in t.cell_edge_ids(id) {
                    *uses.entry(e).or_default() += 1;
                }
            }
            assert!(uses.values().all(|&c| c <= 2), "{shape:?}");
            assert_eq!(uses.len(), t.edge_count());
        }
    }

    #[test]
    fn adjacency_agrees_with_neighbor_functions() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            let t = Topology::build_regular(spec(shape, 5));
            for id in 0..t.cell_count() as CellId {
                let coord = t.coord_of(id);
                let mut expect_edge: Vec<CellId> = coord
                    .edge_neighbors()
                    .into_iter()
                    .filter_map(|c| t.cell_id(c))
                    .collect();
                expect_edge.sort_unstable();
                assert_eq!(t.edge_adjacent(id), &expect_edge[..]);
                let mut expect_vert: Vec<CellId> = coord
                    .vertex_neighbors()
                    .into_iter()
                    .filter_map(|c| t.cell_id(c))
                    .collect();
                expect_vert.sort_unstable();
                assert_eq!(t.vertex_adjacent(id), &expect_vert[..]);
            }
        }
    }

    #[test]
    fn from_cells_of_regular_enumeration_matches_build_regular() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            for dim in 1..=5 {
                let regular = Topology::build_regular(spec(shape, dim));
                let rebuilt =
                    Topology::build_from_cells(shape, regular.cells().iter().copied()).unwrap();
                assert_eq!(regular.cells(), rebuilt.cells());
                assert_eq!(regular.vertices, rebuilt.vertices);
                assert_eq!(regular.edges, rebuilt.edges);
                assert_eq!(regular.edge_adj, rebuilt.edge_adj);
                assert_eq!(regular.vert_adj, rebuilt.vert_adj);
                assert_eq!(regular.perimeter_cells(), rebuilt.perimeter_cells());
            }
        }
    }

    #[test]
    fn rebuilding_is_deterministic() {
        let a = Topology::build_regular(spec(Shape::Triangle, 5));
        let b = Topology::build_regular(spec(Shape::Triangle, 5));
        assert_eq!(a, b);
        assert_eq!(a.dump().to_json(), b.dump().to_json());
    }

    #[test]
    fn single_cell_set_matches_regular_unit_board() {
        let unit = Topology::build_regular(spec(Shape::Square, 1));
        let from_set =
            Topology::build_from_cells(Shape::Square, [CanonCoord::square(0, 0)]).unwrap();
        assert_eq!(unit.cells(), from_set.cells());
        assert_eq!(unit.vertex_count(), from_set.vertex_count());
        assert_eq!(unit.edge_count(), from_set.edge_count());
    }

    #[test]
    fn two_adjacent_squares_share_one_edge() {
        let t = Topology::build_from_cells(
            Shape::Square,
            [CanonCoord::square(0, 0), CanonCoord::square(1, 0)],
        )
        .unwrap();
        assert_eq!(t.cell_count(), 2);
        assert_eq!(t.vertex_count(), 6);
        assert_eq!(t.edge_count(), 7);
        assert_eq!(t.edge_adjacent(0), &[1]);
    }

    #[test]
    fn moore_neighborhood_zone_gets_row_major_ids() {
        let center = CanonCoord::square(0, 0);
        let mut cells = center.vertex_neighbors();
        cells.push(center);
        let t = Topology::build_from_cells(Shape::Square, cells).unwrap();
        assert_eq!(t.cell_count(), 9);
        let expected: Vec<CanonCoord> = (-1..=1)
            .flat_map(|y| (-1..=1).map(move |x| CanonCoord::square(x, y)))
            .collect();
        assert_eq!(t.cells(), &expected[..]);
    }

    #[test]
    fn grown_boards_may_enclose_holes() {
        // A Moore ring without its center: legal, and every cell stays on
        // the perimeter because the hole is a missing vertex neighbor.
        let ring = CanonCoord::square(0, 0).vertex_neighbors();
        let t = Topology::build_from_cells(Shape::Square, ring).unwrap();
        assert_eq!(t.cell_count(), 8);
        assert_eq!(t.cell_id(CanonCoord::square(0, 0)), None);
        assert_eq!(t.perimeter_cells().len(), 8);
    }

    #[test]
    fn perimeter_classification_on_regular_boards() {
        let t = Topology::build_regular(spec(Shape::Square, 3));
        let center = t.cell_id(CanonCoord::square(0, 0)).unwrap();
        let corner = t.cell_id(CanonCoord::square(-1, -1)).unwrap();
        assert!(!t.is_perimeter(center).unwrap());
        assert!(t.is_perimeter(corner).unwrap());

        let t = Topology::build_regular(spec(Shape::Hexagon, 2));
        let origin = t.cell_id(CanonCoord::hex(0, 0)).unwrap();
        assert!(!t.is_perimeter(origin).unwrap());
        assert_eq!(t.perimeter_cells().len(), 6);
    }

    #[test]
    fn invalid_cell_id_is_rejected() {
        let t = Topology::build_regular(spec(Shape::Square, 2));
        assert_eq!(t.is_perimeter(4), Err(TopologyError::InvalidCellId { id: 4, count: 4 }));
    }

    #[test]
    fn arithmetic_lookup_matches_binary_search() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            for dim in 1..=8 {
                let t = Topology::build_regular(spec(shape, dim));
                for (id, &coord) in t.cells().iter().enumerate() {
                    assert_eq!(t.cell_id(coord), Some(id as CellId), "{shape:?} {dim} {coord:?}");
                }
                // Off-board probes must miss.
                let far = match shape {
                    Shape::Square => CanonCoord::square(1000, 0),
                    Shape::Hexagon => CanonCoord::hex(1000, 0),
                    Shape::Triangle => CanonCoord::tri(1000, 0),
                };
                assert_eq!(t.cell_id(far), None);
            }
        }
    }

    #[test]
    fn extension_equals_full_rebuild() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            let base = Topology::build_regular(spec(shape, 2));
            // Grow a blob by repeatedly closing the neighborhood of a
            // perimeter cell, comparing incremental against from-scratch.
            let mut current = base.clone();
            for step in 0..6 {
                let perimeter = current.perimeter_cells();
                let target = current.coord_of(perimeter[step % perimeter.len()]);
                let missing: Vec<CanonCoord> = target
                    .vertex_neighbors()
                    .into_iter()
                    .filter(|&c| current.cell_id(c).is_none())
                    .collect();
                let extended = current.extend_with_cells(&missing).unwrap();
                let union = current.cells().iter().copied().chain(missing.iter().copied());
                let rebuilt = Topology::build_from_cells(shape, union).unwrap();
                assert_eq!(extended.cells(), rebuilt.cells(), "{shape:?} step {step}");
                assert_eq!(extended.edge_adj, rebuilt.edge_adj);
                assert_eq!(extended.edge_adj_off, rebuilt.edge_adj_off);
                assert_eq!(extended.vert_adj, rebuilt.vert_adj);
                assert_eq!(extended.vert_adj_off, rebuilt.vert_adj_off);
                assert_eq!(extended.perimeter_cells(), rebuilt.perimeter_cells());
                // Vertex/edge keys agree even though numbering may differ.
                for id in 0..extended.cell_count() as CellId {
                    let keys_a: Vec<_> = extended
                        .cell_vertex_ids(id)
                        .iter()
                        .map(|&v| extended.vertices[v as usize])
                        .collect();
                    let keys_b: Vec<_> = rebuilt
                        .cell_vertex_ids(id)
                        .iter()
                        .map(|&v| rebuilt.vertices[v as usize])
                        .collect();
                    assert_eq!(keys_a, keys_b);
                }
                assert_eq!(extended.vertex_count(), rebuilt.vertex_count());
                assert_eq!(extended.edge_count(), rebuilt.edge_count());
                current = extended;
            }
        }
    }

    #[test]
    fn extension_rejects_overlap_and_wrong_shape() {
        let t = Topology::build_regular(spec(Shape::Square, 2));
        assert!(matches!(
            t.extend_with_cells(&[t.coord_of(0)]),
            Err(TopologyError::OverlappingCells(_))
        ));
        assert!(matches!(
            t.extend_with_cells(&[CanonCoord::hex(5, 5)]),
            Err(TopologyError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn empty_cell_set_is_rejected() {
        assert_eq!(
            Topology::build_from_cells(Shape::Square, []).unwrap_err(),
            TopologyError::EmptyCellSet
        );
    }

    #[test]
    fn dump_is_stable() {
        let t = Topology::build_regular(spec(Shape::Square, 2));
        let dump = t.dump();
        assert_eq!(dump.cell_count, 4);
        assert_eq!(dump.cells[0].edge_adjacent, vec![1, 2]);
        assert_eq!(dump.cells[0].vertex_adjacent, vec![1, 2, 3]);
        assert!(dump.cells.iter().all(|c| c.perimeter));
        let json = dump.to_json();
        assert!(json.contains("\"cell_count\": 4"));
    }
}
