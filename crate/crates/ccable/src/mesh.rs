//! Constructs the explicit quad mesh described by a subdivision vector:
//! one step of the central split into n corner regions, each filled with a
//! regular grid, plus planar embedding helpers (boundary synthesis, Coons
//! interior placement, uniform smoothing) and mesh validation.
//!
//! Side i runs corner i -> corner i+1 counterclockwise and splits at m_i
//! into s_{i-1} then s_{i+1} edges. The spoke from m_i to the central
//! vertex carries s_i edges. Region i, at corner i+1, is the s_{i+1} x s_i
//! grid bounded by side i's second half, side i+1's first half and spokes
//! i and i+1. Zero-length chains collapse by endpoint merging, which a
//! union-find over abstract vertex keys performs mechanically; this also
//! covers the degenerate multi-zero patterns where the central vertex
//! pinches onto several boundary points at once.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::types::{PatchSpec, SubdivisionVector};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("subdivision vector has {got} entries, expected {expected}")]
    SubdivisionLengthMismatch { expected: usize, got: usize },
    #[error("subdivision component {index} is negative ({value})")]
    NegativeSubdivision { index: usize, value: i64 },
    #[error("side {side} needs s_{{i-1}} + s_{{i+1}} = {expected} edges, got {got}")]
    InconsistentSubdivision { side: usize, expected: i64, got: i64 },
    #[error("boundary has {got} sides, expected {expected}")]
    SideCountMismatch { expected: usize, got: usize },
    #[error("side {side} polyline has {got} points, expected {expected}")]
    ChainLengthMismatch {
        side: usize,
        expected: usize,
        got: usize,
    },
    #[error("side {side} polyline does not end where side {next} begins")]
    OpenBoundary { side: usize, next: usize },
    #[error("corners {a} and {b} coincide")]
    DegenerateBoundary { a: usize, b: usize },
    #[error("mesh carries no construction layout; embed meshes built by build_topology")]
    MissingLayout,
}

/// Structured grid of one region: `verts[v * (cols + 1) + u]` is the vertex
/// at grid coordinates (u, v).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RegionGrid {
    pub cols: usize,
    pub rows: usize,
    pub verts: Vec<usize>,
}

impl RegionGrid {
    pub fn at(&self, u: usize, v: usize) -> usize {
        self.verts[v * (self.cols + 1) + u]
    }
}

/// Construction metadata kept for geometric embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Layout {
    /// Single structured grid covering the whole patch (n = 4).
    Grid(RegionGrid),
    /// One region per corner around the central vertex. Spoke j is region
    /// j's u = 0 column, from m_j to the center.
    Radial { regions: Vec<RegionGrid> },
}

/// Indexed planar quad mesh with boundary chains and the tagged singular
/// vertex. Built unpositioned; `embed_geometry` fills `positions`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadMesh {
    pub vertex_count: usize,
    pub positions: Option<Vec<Point>>,
    /// Consistently oriented (counterclockwise in the embedding).
    pub quads: Vec<[usize; 4]>,
    /// Chain i lists side i's vertices in order, corner i to corner i+1.
    pub boundary_chains: Vec<Vec<usize>>,
    pub corner_vertices: Vec<usize>,
    /// The central vertex; `None` for n = 4, where it is regular.
    pub singular_vertex: Option<usize>,
    pub(crate) layout: Option<Layout>,
}

impl QuadMesh {
    /// Assembles a mesh from raw parts, e.g. in tests seeding deliberate
    /// faults. Such meshes cannot be embedded (no construction layout).
    pub fn from_parts(
        vertex_count: usize,
        positions: Option<Vec<Point>>,
        quads: Vec<[usize; 4]>,
        boundary_chains: Vec<Vec<usize>>,
        corner_vertices: Vec<usize>,
        singular_vertex: Option<usize>,
    ) -> Self {
        QuadMesh {
            vertex_count,
            positions,
            quads,
            boundary_chains,
            corner_vertices,
            singular_vertex,
            layout: None,
        }
    }

    pub fn is_positioned(&self) -> bool {
        self.positions.is_some()
    }

    /// Total boundary edge count.
    pub fn boundary_edge_count(&self) -> usize {
        self.boundary_chains.iter().map(|c| c.len() - 1).sum()
    }

    /// Distinct undirected edges referenced by the quads.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for q in &self.quads {
            for k in 0..4 {
                let a = q[k];
                let b = q[(k + 1) % 4];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges
    }
}

fn check_subdivision(spec: &PatchSpec, s: &SubdivisionVector) -> Result<(), MeshError> {
    let n = spec.n();
    if s.len() != n {
        return Err(MeshError::SubdivisionLengthMismatch {
            expected: n,
            got: s.len(),
        });
    }
    for (index, &value) in s.values().iter().enumerate() {
        if value < 0 {
            return Err(MeshError::NegativeSubdivision { index, value });
        }
    }
    for i in 0..n as isize {
        let expected = spec.edge(i);
        let got = s.get(i - 1) + s.get(i + 1);
        if expected != got {
            return Err(MeshError::InconsistentSubdivision {
                side: i as usize,
                expected,
                got,
            });
        }
    }
    Ok(())
}

/// Abstract identity of a construction vertex before welding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Corner(usize),
    /// Side point (side, position from corner `side`), 0 < position < e.
    Side(usize, i64),
    /// Spoke point (spoke, position from m_j), 0 < position < s_j.
    Spoke(usize, i64),
    Center,
    /// Region-interior grid point (region, u, v).
    Interior(usize, i64, i64),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn make(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Builder<'a> {
    spec: &'a PatchSpec,
    s: &'a [i64],
    ids: HashMap<Key, usize>,
    uf: UnionFind,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a PatchSpec, s: &'a SubdivisionVector) -> Self {
        Builder {
            spec,
            s: s.values(),
            ids: HashMap::new(),
            uf: UnionFind { parent: Vec::new() },
        }
    }

    fn n(&self) -> usize {
        self.spec.n()
    }

    fn side_key(&self, side: usize, t: i64) -> Key {
        if t == 0 {
            Key::Corner(side)
        } else if t == self.spec.edges()[side] {
            Key::Corner((side + 1) % self.n())
        } else {
            Key::Side(side, t)
        }
    }

    /// Keys of spoke j's point at distance t from m_j. The endpoints alias
    /// the split point and the center; on a zero-length spoke (s_j = 0)
    /// both alias at once, which is exactly the m_j = center weld.
    fn spoke_keys(&self, j: usize, t: i64, out: &mut Vec<Key>) {
        let n = self.n();
        if t == 0 {
            out.push(self.side_key(j, self.s[(j + n - 1) % n]));
        }
        if t == self.s[j] {
            out.push(Key::Center);
        }
        if t > 0 && t < self.s[j] {
            out.push(Key::Spoke(j, t));
        }
    }

    /// All keys describing region i's grid point (u, v).
    fn keys_at(&self, i: usize, u: i64, v: i64, out: &mut Vec<Key>) {
        out.clear();
        let n = self.n();
        let su = self.s[(i + 1) % n];
        let sv = self.s[i];
        if v == 0 {
            out.push(self.side_key(i, self.s[(i + n - 1) % n] + u));
        }
        if u == su {
            out.push(self.side_key((i + 1) % n, v));
        }
        if u == 0 {
            self.spoke_keys(i, v, out);
        }
        if v == sv {
            self.spoke_keys((i + 1) % n, su - u, out);
        }
        if out.is_empty() {
            out.push(Key::Interior(i, u, v));
        }
    }

    fn intern(&mut self, key: Key) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            id
        } else {
            let id = self.uf.make();
            self.ids.insert(key, id);
            id
        }
    }

    fn build(mut self) -> QuadMesh {
        let n = self.n();
        let s = self.s.to_vec();
        let e: Vec<i64> = self.spec.edges().to_vec();

        // Pass 1: sweep every region grid (collapsed ones included) so all
        // co-located keys are welded.
        let mut keys = Vec::with_capacity(4);
        for i in 0..n {
            let su = s[(i + 1) % n];
            let sv = s[i];
            for v in 0..=sv {
                for u in 0..=su {
                    self.keys_at(i, u, v, &mut keys);
                    let (first_key, rest) = keys.split_first().expect("keys_at never returns empty");
                    let first = self.intern(*first_key);
                    for &key in rest {
                        let id = self.intern(key);
                        self.uf.union(first, id);
                    }
                }
            }
        }

        // Pass 2: number the classes deterministically, boundary ring
        // first, then spokes, center, and region interiors.
        let mut order: Vec<Key> = Vec::new();
        for (side, &edge_count) in e.iter().enumerate() {
            order.push(Key::Corner(side));
            for t in 1..edge_count {
                order.push(Key::Side(side, t));
            }
        }
        for (j, &spoke_len) in s.iter().enumerate() {
            for t in 1..spoke_len {
                order.push(Key::Spoke(j, t));
            }
        }
        order.push(Key::Center);
        for i in 0..n {
            let su = s[(i + 1) % n];
            for v in 1..s[i] {
                for u in 1..su {
                    order.push(Key::Interior(i, u, v));
                }
            }
        }
        let mut index_of_root: HashMap<usize, usize> = HashMap::new();
        let mut vertex_count = 0;
        for key in order {
            let id = *self.ids.get(&key).expect("all canonical keys were swept");
            let root = self.uf.find(id);
            index_of_root.entry(root).or_insert_with(|| {
                let v = vertex_count;
                vertex_count += 1;
                v
            });
        }
        debug_assert_eq!(index_of_root.len(), vertex_count);

        let resolve = |b: &mut Builder, key: Key| -> usize {
            let id = b.ids[&key];
            index_of_root[&b.uf.find(id)]
        };

        // Pass 3: materialize chains, region grids and quads.
        let mut boundary_chains = Vec::with_capacity(n);
        for (side, &edge_count) in e.iter().enumerate() {
            let chain: Vec<usize> = (0..=edge_count)
                .map(|t| {
                    let key = self.side_key(side, t);
                    resolve(&mut self, key)
                })
                .collect();
            boundary_chains.push(chain);
        }
        let corner_vertices: Vec<usize> = (0..n)
            .map(|i| resolve(&mut self, Key::Corner(i)))
            .collect();
        let center = resolve(&mut self, Key::Center);

        let mut regions = Vec::with_capacity(n);
        let mut quads = Vec::new();
        for i in 0..n {
            let cols = s[(i + 1) % n] as usize;
            let rows = s[i] as usize;
            let mut verts = Vec::with_capacity((cols + 1) * (rows + 1));
            for v in 0..=rows {
                for u in 0..=cols {
                    self.keys_at(i, u as i64, v as i64, &mut keys);
                    let key = keys[0];
                    verts.push(resolve(&mut self, key));
                }
            }
            let grid = RegionGrid { cols, rows, verts };
            for v in 0..rows {
                for u in 0..cols {
                    quads.push([
                        grid.at(u, v),
                        grid.at(u + 1, v),
                        grid.at(u + 1, v + 1),
                        grid.at(u, v + 1),
                    ]);
                }
            }
            regions.push(grid);
        }

        QuadMesh {
            vertex_count,
            positions: None,
            quads,
            boundary_chains,
            corner_vertices,
            singular_vertex: Some(center),
            layout: Some(Layout::Radial { regions }),
        }
    }
}

/// Builds the connectivity of the tessellation described by `s`.
///
/// For n = 4 the subdivision choice is immaterial (every member yields the
/// same tessellation) and the plain e_0 x e_1 grid is emitted.
pub fn build_topology(spec: &PatchSpec, s: &SubdivisionVector) -> Result<QuadMesh, MeshError> {
    check_subdivision(spec, s)?;
    if spec.n() == 4 {
        return Ok(build_grid(spec));
    }
    Ok(Builder::new(spec, s).build())
}

fn build_grid(spec: &PatchSpec) -> QuadMesh {
    let a = spec.edges()[0] as usize;
    let b = spec.edges()[1] as usize;
    let at = |x: usize, y: usize| y * (a + 1) + x;
    let mut quads = Vec::with_capacity(a * b);
    for y in 0..b {
        for x in 0..a {
            quads.push([at(x, y), at(x + 1, y), at(x + 1, y + 1), at(x, y + 1)]);
        }
    }
    let boundary_chains = vec![
        (0..=a).map(|x| at(x, 0)).collect(),
        (0..=b).map(|y| at(a, y)).collect(),
        (0..=a).rev().map(|x| at(x, b)).collect(),
        (0..=b).rev().map(|y| at(0, y)).collect(),
    ];
    QuadMesh {
        vertex_count: (a + 1) * (b + 1),
        positions: None,
        quads,
        boundary_chains,
        corner_vertices: vec![at(0, 0), at(a, 0), at(a, b), at(0, b)],
        singular_vertex: None,
        layout: Some(Layout::Grid(RegionGrid {
            cols: a,
            rows: b,
            verts: (0..(a + 1) * (b + 1)).collect(),
        })),
    }
}

/// Per-side boundary polylines; side i has e_i + 1 points and consecutive
/// sides share their corner endpoints exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGeometry {
    pub sides: Vec<Vec<Point>>,
}

/// Default boundary: corners on the unit circle at angles 2*pi*i/n + pi/2,
/// sides uniformly subdivided along the chords. A two-sided patch gets two
/// semicircular arcs instead.
pub fn synthesize_boundary(spec: &PatchSpec) -> BoundaryGeometry {
    let n = spec.n();
    let angle = |i: usize| 2.0 * std::f64::consts::PI * i as f64 / n as f64 + std::f64::consts::FRAC_PI_2;
    let corner = |i: usize| -> Point {
        let a = angle(i % n);
        [a.cos(), a.sin()]
    };
    let mut sides = Vec::with_capacity(n);
    for i in 0..n {
        let e = spec.edges()[i];
        let mut side = Vec::with_capacity(e as usize + 1);
        for t in 0..=e {
            if t == 0 {
                side.push(corner(i));
            } else if t == e {
                side.push(corner(i + 1));
            } else if n == 2 {
                let a = angle(i) + std::f64::consts::PI * t as f64 / e as f64;
                side.push([a.cos(), a.sin()]);
            } else {
                let f = t as f64 / e as f64;
                let p = corner(i);
                let q = corner(i + 1);
                side.push([p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1])]);
            }
        }
        sides.push(side);
    }
    BoundaryGeometry { sides }
}

fn validate_boundary(mesh: &QuadMesh, boundary: &BoundaryGeometry) -> Result<(), MeshError> {
    let n = mesh.boundary_chains.len();
    if boundary.sides.len() != n {
        return Err(MeshError::SideCountMismatch {
            expected: n,
            got: boundary.sides.len(),
        });
    }
    for (side, polyline) in boundary.sides.iter().enumerate() {
        let expected = mesh.boundary_chains[side].len();
        if polyline.len() != expected {
            return Err(MeshError::ChainLengthMismatch {
                side,
                expected,
                got: polyline.len(),
            });
        }
    }
    for side in 0..n {
        let next = (side + 1) % n;
        if boundary.sides[side].last() != boundary.sides[next].first() {
            return Err(MeshError::OpenBoundary { side, next });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if boundary.sides[a][0] == boundary.sides[b][0] {
                return Err(MeshError::DegenerateBoundary { a, b });
            }
        }
    }
    Ok(())
}

/// Sets vertex positions: boundary from the polylines, the center at the
/// mean of the side split points, spokes by linear interpolation, region
/// interiors by bilinear transfinite (Coons) interpolation, then
/// `smoothing_iters` rounds of uniform neighborhood averaging on interior
/// vertices with the boundary held fixed.
///
/// Where the construction welded a chain onto the boundary, the boundary
/// position wins; the first writer of a welded vertex in side order fixes
/// its position.
pub fn embed_geometry(
    mesh: &QuadMesh,
    boundary: &BoundaryGeometry,
    smoothing_iters: usize,
) -> Result<QuadMesh, MeshError> {
    let layout = mesh.layout.as_ref().ok_or(MeshError::MissingLayout)?;
    validate_boundary(mesh, boundary)?;

    let mut pos = vec![[0.0f64; 2]; mesh.vertex_count];
    let mut placed = vec![false; mesh.vertex_count];
    let place = |pos: &mut Vec<Point>, placed: &mut Vec<bool>, v: usize, p: Point| {
        if !placed[v] {
            pos[v] = p;
            placed[v] = true;
        }
    };

    for (side, polyline) in boundary.sides.iter().enumerate() {
        for (v, p) in mesh.boundary_chains[side].iter().zip(polyline) {
            place(&mut pos, &mut placed, *v, *p);
        }
    }

    match layout {
        Layout::Grid(grid) => {
            coons_fill(grid, &mut pos, &mut placed);
        }
        Layout::Radial { regions } => {
            // Split points m_j sit at each region's grid origin; the center
            // is the top of every spoke.
            let center = mesh.singular_vertex.expect("radial layout has a center");
            if !placed[center] {
                let mut acc = [0.0, 0.0];
                for region in regions {
                    let m = region.at(0, 0);
                    acc[0] += pos[m][0];
                    acc[1] += pos[m][1];
                }
                let inv = 1.0 / regions.len() as f64;
                place(&mut pos, &mut placed, center, [acc[0] * inv, acc[1] * inv]);
            }
            for region in regions {
                let m = region.at(0, 0);
                let rows = region.rows;
                for v in 1..rows {
                    let t = v as f64 / rows as f64;
                    let vert = region.at(0, v);
                    let p = [
                        pos[m][0] + t * (pos[center][0] - pos[m][0]),
                        pos[m][1] + t * (pos[center][1] - pos[m][1]),
                    ];
                    place(&mut pos, &mut placed, vert, p);
                }
            }
            for region in regions {
                coons_fill(region, &mut pos, &mut placed);
            }
        }
    }
    debug_assert!(placed.iter().all(|&p| p));

    if smoothing_iters > 0 {
        let boundary_set: BTreeSet<usize> = mesh
            .boundary_chains
            .iter()
            .flatten()
            .copied()
            .collect();
        let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); mesh.vertex_count];
        for &(a, b) in &mesh.edge_set() {
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        for _ in 0..smoothing_iters {
            let mut next = pos.clone();
            for v in 0..mesh.vertex_count {
                if boundary_set.contains(&v) || adjacency[v].is_empty() {
                    continue;
                }
                let mut acc = [0.0, 0.0];
                for &w in &adjacency[v] {
                    acc[0] += pos[w][0];
                    acc[1] += pos[w][1];
                }
                let inv = 1.0 / adjacency[v].len() as f64;
                next[v] = [acc[0] * inv, acc[1] * inv];
            }
            pos = next;
        }
    }

    let mut out = mesh.clone();
    out.positions = Some(pos);
    Ok(out)
}

/// Bilinear transfinite interpolation of a region's interior from its four
/// bounding polylines, which must already be positioned.
fn coons_fill(grid: &RegionGrid, pos: &mut [Point], placed: &mut [bool]) {
    if grid.cols < 2 || grid.rows < 2 {
        return;
    }
    let p = |u: usize, v: usize, pos: &[Point]| pos[grid.at(u, v)];
    for v in 1..grid.rows {
        for u in 1..grid.cols {
            let vert = grid.at(u, v);
            if placed[vert] {
                continue;
            }
            let a = u as f64 / grid.cols as f64;
            let b = v as f64 / grid.rows as f64;
            let bottom = p(u, 0, pos);
            let top = p(u, grid.rows, pos);
            let left = p(0, v, pos);
            let right = p(grid.cols, v, pos);
            let c00 = p(0, 0, pos);
            let c10 = p(grid.cols, 0, pos);
            let c11 = p(grid.cols, grid.rows, pos);
            let c01 = p(0, grid.rows, pos);
            let mut point = [0.0; 2];
            for d in 0..2 {
                point[d] = (1.0 - b) * bottom[d] + b * top[d] + (1.0 - a) * left[d]
                    + a * right[d]
                    - ((1.0 - a) * (1.0 - b) * c00[d]
                        + a * (1.0 - b) * c10[d]
                        + a * b * c11[d]
                        + (1.0 - a) * b * c01[d]);
            }
            pos[vert] = point;
            placed[vert] = true;
        }
    }
}

/// Exact mesh counts plus the irregular-vertex inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub quad_count: usize,
    /// V - E + F; 1 for a disk.
    pub euler_characteristic: i64,
    /// Interior vertices with valency != 4, as (vertex, valency).
    pub interior_irregular: Vec<(usize, usize)>,
    /// Non-corner boundary vertices with edge-valency != 3.
    pub boundary_irregular: Vec<(usize, usize)>,
    /// Corner vertices with edge-valency != 2.
    pub corner_irregular: Vec<(usize, usize)>,
    /// Valency -> number of vertices.
    pub valency_histogram: BTreeMap<usize, usize>,
}

/// Counts vertices, edges and quads and inventories irregular vertices by
/// their position class (interior / boundary / corner).
pub fn mesh_stats(mesh: &QuadMesh) -> MeshStats {
    let edges = mesh.edge_set();
    let mut valency = vec![0usize; mesh.vertex_count];
    for &(a, b) in &edges {
        valency[a] += 1;
        valency[b] += 1;
    }
    let boundary: BTreeSet<usize> = mesh.boundary_chains.iter().flatten().copied().collect();
    let corners: BTreeSet<usize> = mesh.corner_vertices.iter().copied().collect();

    let mut interior_irregular = Vec::new();
    let mut boundary_irregular = Vec::new();
    let mut corner_irregular = Vec::new();
    let mut valency_histogram = BTreeMap::new();
    for (v, &val) in valency.iter().enumerate() {
        *valency_histogram.entry(val).or_insert(0) += 1;
        if corners.contains(&v) {
            if val != 2 {
                corner_irregular.push((v, val));
            }
        } else if boundary.contains(&v) {
            if val != 3 {
                boundary_irregular.push((v, val));
            }
        } else if val != 4 {
            interior_irregular.push((v, val));
        }
    }
    MeshStats {
        vertex_count: mesh.vertex_count,
        edge_count: edges.len(),
        quad_count: mesh.quads.len(),
        euler_characteristic: mesh.vertex_count as i64 + mesh.quads.len() as i64
            - edges.len() as i64,
        interior_irregular,
        boundary_irregular,
        corner_irregular,
        valency_histogram,
    }
}

/// A violated mesh invariant, naming the offending simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MeshViolation {
    QuadVertexOutOfRange { quad: usize },
    DegenerateQuad { quad: usize },
    /// Undirected edge bordered by more than two quads.
    NonManifoldEdge { a: usize, b: usize, quads: usize },
    /// Directed edge used twice: two quads disagree on winding.
    OrientationConflict { a: usize, b: usize },
    /// An edge is a quad-boundary edge or a side-chain edge but not both.
    BoundaryEdgeMismatch { a: usize, b: usize },
    /// Chain i does not end where chain i+1 begins.
    ChainBreak { side: usize },
    /// Positioned mesh only: quad with non-positive signed area.
    FlippedQuad { quad: usize },
    /// Positioned mesh only: distinct vertices at identical coordinates,
    /// i.e. a chain that should have been welded.
    CoincidentVertices { a: usize, b: usize },
}

/// Checks every structural invariant and, when positions are present, the
/// geometric ones; an empty list means the mesh is valid.
pub fn validate_mesh(mesh: &QuadMesh) -> Vec<MeshViolation> {
    let mut violations = Vec::new();

    let mut edge_quads: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (qi, q) in mesh.quads.iter().enumerate() {
        if q.iter().any(|&v| v >= mesh.vertex_count) {
            violations.push(MeshViolation::QuadVertexOutOfRange { quad: qi });
            continue;
        }
        let distinct: BTreeSet<usize> = q.iter().copied().collect();
        if distinct.len() != 4 {
            violations.push(MeshViolation::DegenerateQuad { quad: qi });
            continue;
        }
        for k in 0..4 {
            let a = q[k];
            let b = q[(k + 1) % 4];
            *edge_quads.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            *directed.entry((a, b)).or_insert(0) += 1;
        }
    }
    for (&(a, b), &count) in &edge_quads {
        if count > 2 {
            violations.push(MeshViolation::NonManifoldEdge { a, b, quads: count });
        }
    }
    for (&(a, b), &count) in &directed {
        if count > 1 && a < b {
            violations.push(MeshViolation::OrientationConflict { a, b });
        }
    }

    let mut chain_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for chain in &mesh.boundary_chains {
        for w in chain.windows(2) {
            chain_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let quad_boundary: BTreeSet<(usize, usize)> = edge_quads
        .iter()
        .filter(|(_, &c)| c == 1)
        .map(|(&e, _)| e)
        .collect();
    for &(a, b) in quad_boundary.symmetric_difference(&chain_edges) {
        violations.push(MeshViolation::BoundaryEdgeMismatch { a, b });
    }

    let n = mesh.boundary_chains.len();
    for side in 0..n {
        let next = (side + 1) % n;
        if mesh.boundary_chains[side].last() != mesh.boundary_chains[next].first() {
            violations.push(MeshViolation::ChainBreak { side });
        }
    }

    if let Some(pos) = &mesh.positions {
        for (qi, q) in mesh.quads.iter().enumerate() {
            if q.iter().any(|&v| v >= pos.len()) {
                continue;
            }
            let mut area2 = 0.0;
            for k in 0..4 {
                let p = pos[q[k]];
                let r = pos[q[(k + 1) % 4]];
                area2 += p[0] * r[1] - r[0] * p[1];
            }
            if area2 <= 0.0 {
                violations.push(MeshViolation::FlippedQuad { quad: qi });
            }
        }
        let mut seen: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for (v, p) in pos.iter().enumerate() {
            let bits = (p[0].to_bits(), p[1].to_bits());
            if let Some(&w) = seen.get(&bits) {
                violations.push(MeshViolation::CoincidentVertices { a: w, b: v });
            } else {
                seen.insert(bits, v);
            }
        }
    }

    violations
}
