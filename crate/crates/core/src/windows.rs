//! Decoding-window generation for parallel window decoding.
//!
//! Temporal windows parallelize the decoding of a patch held in memory:
//! layer-A windows span 3d rounds (buffer, commit, buffer) separated by
//! d-round gaps; layer-B windows cover the two adjacent buffers plus the gap
//! and can be decoded once both neighboring A tasks are done, so the decoder
//! latency of the chain is two window decodes.
//!
//! Spatial windows parallelize a lattice surgery: commit regions of size
//! d x d tile the surgery cross-section, layered so that no two windows in a
//! layer overlap their commit regions. Two layers suffice for X/Z surgeries;
//! a Pauli operator with a Y term needs three.
//!
//! All geometry is kept in integer half-units of d/2 (so extents like 1.5d
//! stay exact) and, on the time axis, half-units of d/2 rounds.

use crate::models::Distance;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;
use std::io::{self, BufRead, Write};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowError {
    /// The dependency graph has a cycle (offending window id).
    Cycle(u32),
    /// Two windows share an id.
    DuplicateId(u32),
    /// A dependency references an id that is not in the set.
    UnknownDependency { window: u32, missing: u32 },
    /// Two commit regions overlap.
    CommitOverlap(u32, u32),
    /// Commit regions do not cover the expected volume exactly.
    CommitGap { covered: u64, expected: u64 },
    /// A commit region leaves its window or the expected volume.
    CommitOutOfBounds(u32),
    /// Malformed JSON-lines input.
    Parse(String),
}

impl fmt::Display for WindowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowError::Cycle(id) => write!(f, "window dependency cycle involving id {id}"),
            WindowError::DuplicateId(id) => write!(f, "window id {id} appears more than once"),
            WindowError::UnknownDependency { window, missing } => {
                write!(f, "window {window} depends on unknown id {missing}")
            }
            WindowError::CommitOverlap(a, b) => write!(f, "commit regions of windows {a} and {b} overlap"),
            WindowError::CommitGap { covered, expected } => {
                write!(f, "commit regions cover {covered} cells of {expected}")
            }
            WindowError::CommitOutOfBounds(id) => write!(f, "commit region of window {id} leaves its bounds"),
            WindowError::Parse(msg) => write!(f, "window stream parse error: {msg}"),
        }
    }
}

impl std::error::Error for WindowError {}

/// Axis-aligned box in half-units of d/2; intervals are half-open `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBox {
    pub x: (u32, u32),
    pub z: (u32, u32),
    pub t: (u32, u32),
}

impl GridBox {
    pub fn new(x: (u32, u32), z: (u32, u32), t: (u32, u32)) -> Self {
        debug_assert!(x.0 <= x.1 && z.0 <= z.1 && t.0 <= t.1);
        GridBox { x, z, t }
    }

    pub fn extent_x(&self) -> u32 {
        self.x.1 - self.x.0
    }

    pub fn extent_z(&self) -> u32 {
        self.z.1 - self.z.0
    }

    pub fn extent_t(&self) -> u32 {
        self.t.1 - self.t.0
    }

    /// Volume in half-unit cells.
    pub fn volume(&self) -> u64 {
        u64::from(self.extent_x()) * u64::from(self.extent_z()) * u64::from(self.extent_t())
    }

    pub fn contains(&self, other: &GridBox) -> bool {
        self.x.0 <= other.x.0
            && other.x.1 <= self.x.1
            && self.z.0 <= other.z.0
            && other.z.1 <= self.z.1
            && self.t.0 <= other.t.0
            && other.t.1 <= self.t.1
    }

    pub fn intersects(&self, other: &GridBox) -> bool {
        self.x.0 < other.x.1
            && other.x.0 < self.x.1
            && self.z.0 < other.z.1
            && other.z.0 < self.z.1
            && self.t.0 < other.t.1
            && other.t.0 < self.t.1
    }

    /// Closed-box contact: true when the boxes intersect or share a boundary.
    pub fn touches(&self, other: &GridBox) -> bool {
        self.x.0 <= other.x.1
            && other.x.0 <= self.x.1
            && self.z.0 <= other.z.1
            && other.z.0 <= self.z.1
            && self.t.0 <= other.t.1
            && other.t.0 <= self.t.1
    }
}

/// Which decoding layer a window belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    /// Temporal layer A.
    A,
    /// Temporal layer B.
    B,
    /// Spatial layer 1..=3.
    Spatial(u8),
}

impl Layer {
    /// Decode-order rank: everything a window may depend on has lower rank.
    pub fn rank(&self) -> u8 {
        match self {
            Layer::A => 0,
            Layer::B => 1,
            Layer::Spatial(l) => l - 1,
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            Layer::A => "A",
            Layer::B => "B",
            Layer::Spatial(1) => "1",
            Layer::Spatial(2) => "2",
            Layer::Spatial(3) => "3",
            Layer::Spatial(_) => "?",
        }
    }

    fn parse(s: &str) -> Option<Layer> {
        match s {
            "A" => Some(Layer::A),
            "B" => Some(Layer::B),
            "1" => Some(Layer::Spatial(1)),
            "2" => Some(Layer::Spatial(2)),
            "3" => Some(Layer::Spatial(3)),
            _ => None,
        }
    }
}

impl Serialize for Layer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Layer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Layer::parse(&raw).ok_or_else(|| serde::de::Error::custom(format!("unknown layer {raw:?}")))
    }
}

/// One decoding task: a window of the decoding graph with the sub-region it
/// commits and the earlier windows whose commits pin its boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingWindow {
    pub id: u32,
    pub layer: Layer,
    pub bounds: GridBox,
    pub commit: GridBox,
    pub depends_on: Vec<u32>,
}

impl DecodingWindow {
    /// Spatial decoding-graph nodes at distance `d` (half-unit extents times
    /// d/2 each).
    pub fn spatial_nodes(&self, d: Distance) -> f64 {
        let du = f64::from(d.get()) / 2.0;
        f64::from(self.bounds.extent_x()) * du * f64::from(self.bounds.extent_z()) * du
    }

    /// Temporal depth in syndrome rounds at distance `d`.
    pub fn rounds(&self, d: Distance) -> f64 {
        f64::from(self.bounds.extent_t()) * f64::from(d.get()) / 2.0
    }
}

/// Temporal A/B windows covering `n_cycles` logical cycles of one square
/// d x d memory patch.
pub fn memory_windows(n_cycles: u32, d: Distance) -> Vec<DecodingWindow> {
    memory_windows_for_patch(n_cycles, d, 2, 2)
}

/// Temporal A/B windows for a patch of `half_x` x `half_z` half-units
/// cross-section (a 2d x d pair patch is `(4, 2)`).
///
/// Layer-A windows span three cycle slots (buffer, commit, buffer) with a
/// one-slot gap between consecutive A windows; layer-B windows cover
/// buffer + gap + buffer and commit all of it, depending on the one or two
/// adjacent A windows. The first and last windows absorb the timeline
/// boundaries so the commit regions tile `[0, n_cycles)` exactly.
pub fn memory_windows_for_patch(n_cycles: u32, d: Distance, half_x: u32, half_z: u32) -> Vec<DecodingWindow> {
    let _ = d; // geometry is in units of d/2; d re-enters via node counts
    let n = n_cycles;
    let xs = (0, half_x);
    let zs = (0, half_z);
    let slot = |s: u32| 2 * s; // one cycle slot = 2 half-units of time
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if n <= 3 {
        out.push(DecodingWindow {
            id: 0,
            layer: Layer::A,
            bounds: GridBox::new(xs, zs, (0, slot(n))),
            commit: GridBox::new(xs, zs, (0, slot(n))),
            depends_on: vec![],
        });
        return out;
    }

    let a_exists = |i: u32| 4 * i < n && (i == 0 || 4 * i + 1 < n);
    let b_exists = |i: u32| 4 * i + 2 < n;

    let mut id = 0u32;
    let mut a_ids: Vec<u32> = Vec::new();
    let mut pending_b: Vec<(u32, u32)> = Vec::new(); // (index i, id)

    let mut i = 0u32;
    while a_exists(i) || b_exists(i) {
        if a_exists(i) {
            let lo = 4 * i;
            let hi = (4 * i + 3).min(n);
            let c_lo = if i == 0 { 0 } else { 4 * i + 1 };
            let c_hi = if 4 * i + 2 >= n { n } else { 4 * i + 2 };
            out.push(DecodingWindow {
                id,
                layer: Layer::A,
                bounds: GridBox::new(xs, zs, (slot(lo), slot(hi))),
                commit: GridBox::new(xs, zs, (slot(c_lo), slot(c_hi))),
                depends_on: vec![],
            });
            a_ids.push(id);
            id += 1;
        }
        if b_exists(i) {
            let lo = 4 * i + 2;
            let hi = (4 * i + 5).min(n);
            out.push(DecodingWindow {
                id,
                layer: Layer::B,
                bounds: GridBox::new(xs, zs, (slot(lo), slot(hi))),
                commit: GridBox::new(xs, zs, (slot(lo), slot(hi))),
                depends_on: vec![],
            });
            pending_b.push((i, id));
            id += 1;
        }
        i += 1;
    }
    // B_i depends on A_i and, when it exists, A_{i+1}. Ids are sequential,
    // so they double as indices.
    for (bi, bid) in pending_b {
        let mut deps = vec![a_ids[bi as usize]];
        if (bi as usize) + 1 < a_ids.len() {
            deps.push(a_ids[bi as usize + 1]);
        }
        out[bid as usize].depends_on = deps;
    }
    out
}

/// Spatial windows for a lattice surgery over an `n_x` x `n_z` grid of d x d
/// patches.
///
/// Layers are assigned by the diagonal coloring `(x + z) mod L` with `L = 3`
/// when the surgery Pauli has a Y term and `L = 2` otherwise. Every window
/// commits exactly its own d x d tile; buffers of d/2 extend toward in-grid
/// neighbors that are not yet committed when the window's layer runs. Each
/// window spans 2d rounds: a d-round temporal buffer (committed by the
/// preceding operation once it finishes decoding) followed by the surgery's
/// own d rounds, which the window commits.
pub fn surgery_windows(n_x: u32, n_z: u32, d: Distance, has_y: bool) -> Vec<DecodingWindow> {
    let _ = d;
    let layers: u32 = if has_y { 3 } else { 2 };
    let color = |x: u32, z: u32| (x + z) % layers;
    let mut out = Vec::new();
    let mut id = 0u32;
    for x in 0..n_x {
        for z in 0..n_z {
            let ell = color(x, z);
            let committed_before = |nx: i64, nz: i64| -> bool {
                if nx < 0 || nz < 0 || nx >= i64::from(n_x) || nz >= i64::from(n_z) {
                    // Outside the merged region the decoding graph simply
                    // ends; no buffer is needed there.
                    return true;
                }
                color(nx as u32, nz as u32) < ell
            };
            let xi = i64::from(x);
            let zi = i64::from(z);
            let buf_xl = u32::from(!committed_before(xi - 1, zi));
            let buf_xr = u32::from(!committed_before(xi + 1, zi));
            let buf_zl = u32::from(!committed_before(xi, zi - 1));
            let buf_zr = u32::from(!committed_before(xi, zi + 1));
            let commit = GridBox::new((2 * x, 2 * x + 2), (2 * z, 2 * z + 2), (2, 4));
            let bounds = GridBox::new(
                (2 * x - buf_xl, 2 * x + 2 + buf_xr),
                (2 * z - buf_zl, 2 * z + 2 + buf_zr),
                (0, 4),
            );
            out.push(DecodingWindow {
                id,
                layer: Layer::Spatial((ell + 1) as u8),
                bounds,
                commit,
                depends_on: vec![],
            });
            id += 1;
        }
    }
    // A window depends on every earlier-layer window whose committed tile
    // touches its extent (those commits pin its boundary conditions).
    let snapshot = out.clone();
    for w in &mut out {
        for v in &snapshot {
            if v.layer.rank() < w.layer.rank() && v.commit.touches(&w.bounds) {
                w.depends_on.push(v.id);
            }
        }
        w.depends_on.sort_unstable();
    }
    out
}

/// Kahn topological sort; errors with a cycle witness.
pub fn toposort(windows: &[DecodingWindow]) -> Result<Vec<u32>, WindowError> {
    use std::collections::HashMap;
    let mut index: HashMap<u32, usize> = HashMap::with_capacity(windows.len());
    for (i, w) in windows.iter().enumerate() {
        if index.insert(w.id, i).is_some() {
            return Err(WindowError::DuplicateId(w.id));
        }
    }
    let mut indegree = vec![0usize; windows.len()];
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); windows.len()];
    for (wi, w) in windows.iter().enumerate() {
        for dep in &w.depends_on {
            let di = *index
                .get(dep)
                .ok_or(WindowError::UnknownDependency { window: w.id, missing: *dep })?;
            indegree[wi] += 1;
            dependents[di].push(wi);
        }
    }
    let mut queue: VecDeque<usize> = (0..windows.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(windows.len());
    while let Some(i) = queue.pop_front() {
        order.push(windows[i].id);
        for &j in &dependents[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    if order.len() != windows.len() {
        let stuck = windows.iter().enumerate().find(|(i, _)| indegree[*i] > 0).map(|(_, w)| w.id);
        return Err(WindowError::Cycle(stuck.unwrap_or(0)));
    }
    Ok(order)
}

/// Longest dependency chain, in windows. A plain memory stream has depth 2
/// (A then B), which is why the decode latency there is two window times.
pub fn dag_depth(windows: &[DecodingWindow]) -> Result<u32, WindowError> {
    use std::collections::HashMap;
    let order = toposort(windows)?;
    let index: HashMap<u32, usize> = windows.iter().enumerate().map(|(i, w)| (w.id, i)).collect();
    let mut depth = vec![1u32; windows.len()];
    for id in order {
        let wi = index[&id];
        let base = windows[wi]
            .depends_on
            .iter()
            .map(|dep| depth[index[dep]])
            .max()
            .unwrap_or(0);
        depth[wi] = base + 1;
    }
    Ok(depth.into_iter().max().unwrap_or(0))
}

/// Check that commit regions are pairwise disjoint, stay inside both their
/// windows and `volume`, and cover `volume` exactly once.
pub fn check_commit_tiling(windows: &[DecodingWindow], volume: &GridBox) -> Result<(), WindowError> {
    let mut covered: u64 = 0;
    for (i, w) in windows.iter().enumerate() {
        if !w.bounds.contains(&w.commit) || !volume.contains(&w.commit) {
            return Err(WindowError::CommitOutOfBounds(w.id));
        }
        covered += w.commit.volume();
        for v in &windows[i + 1..] {
            if w.commit.intersects(&v.commit) {
                return Err(WindowError::CommitOverlap(w.id, v.id));
            }
        }
    }
    if covered != volume.volume() {
        return Err(WindowError::CommitGap { covered, expected: volume.volume() });
    }
    Ok(())
}

/// Serialize a window set as JSON lines, one window per line:
/// `{"id":..,"layer":"A","bounds":{"x":[..],"z":[..],"t":[..]},"commit":{..},"depends_on":[..]}`
/// with all coordinates in half-units of d/2.
pub fn to_jsonl(windows: &[DecodingWindow], mut sink: impl Write) -> io::Result<()> {
    for w in windows {
        let line = serde_json::to_string(w).expect("window serializes");
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

/// Parse a JSON-lines window stream produced by [`to_jsonl`].
pub fn from_jsonl(source: impl BufRead) -> Result<Vec<DecodingWindow>, WindowError> {
    let mut out = Vec::new();
    for (no, line) in source.lines().enumerate() {
        let line = line.map_err(|e| WindowError::Parse(format!("line {}: {e}", no + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let w: DecodingWindow =
            serde_json::from_str(&line).map_err(|e| WindowError::Parse(format!("line {}: {e}", no + 1)))?;
        out.push(w);
    }
    Ok(out)
}
