//! Global distance queries.
//!
//! The exact distance is the smaller of two candidates:
//!
//! * the shortest geodesic from `x` to `y` whose interior avoids the vertices,
//!   found by a best-first search over strip unfoldings;
//! * the shortest path `x → v → ... → w → y` where the first and last legs are
//!   vertex-free geodesics and the middle is a shortest path in the graph of
//!   vertex-free distances between vertices.
//!
//! Any shortest path on the surface splits at the vertices it passes through
//! into vertex-free geodesic legs, so the minimum is exact. A shortest path
//! never revisits a vertex, so it has finitely many legs, and each leg lies in
//! a strip the search reaches before its lower bound passes the incumbent.
//! The incumbent comes from the Steiner graph, which gives a length of a real
//! curve and hence an upper bound.

mod steiner;
mod strip;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

pub use strip::{unfold, StripUnfolding};

use crate::curves::{FaceCurve, SurfaceCurve};
use crate::metric::{Barycentric, FlatSurface, SurfacePoint};
use steiner::SteinerGraph;
use strip::{CapPolicy, Search, SearchParams};

/// Steiner points per edge used for incumbents and by default.
pub const DEFAULT_REFINEMENT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(
        "strip search reached the depth cap {depth_max} with candidates still below the incumbent"
    )]
    DepthCapExceeded { depth_max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOptions {
    /// Steiner points per edge for approximate queries.
    pub refinement: usize,
    /// Maximum strip length; `None` means four times the face count.
    pub depth_max: Option<usize>,
    /// Return `d_i` directly when it is below the larger safety radius.
    pub fast_path: bool,
    /// Place Steiner points on the wrong end of partner sides. Test harness only.
    #[doc(hidden)]
    pub miswire_steiner: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            refinement: DEFAULT_REFINEMENT,
            depth_max: None,
            fast_path: true,
            miswire_steiner: false,
        }
    }
}

/// A shortest curve found by a query, with its length.
#[derive(Debug, Clone, Serialize)]
pub struct Geodesic {
    pub length: f64,
    pub curve: SurfaceCurve,
}

impl Geodesic {
    fn constant() -> Self {
        Self {
            length: 0.0,
            curve: SurfaceCurve::constant(),
        }
    }

    fn reversed(self) -> Self {
        Self {
            length: self.length,
            curve: self.curve.reversed(),
        }
    }
}

#[derive(Debug)]
struct VertexTable {
    dist: Vec<Vec<f64>>,
    next: Vec<Vec<usize>>,
    direct: HashMap<(usize, usize), SurfaceCurve>,
}

impl VertexTable {
    fn path(&self, v: usize, w: usize) -> SurfaceCurve {
        let mut curve = SurfaceCurve::constant();
        let mut u = v;
        while u != w {
            let n = self.next[u][w];
            curve = curve.concat(self.direct[&(u, n)].clone());
            u = n;
        }
        curve
    }
}

/// Distance oracle for one flat surface. Cheap to construct; the vertex table
/// and Steiner graphs are built on first use and shared between threads.
#[derive(Debug)]
pub struct DistanceEngine {
    surface: FlatSurface,
    options: EngineOptions,
    depth_max: usize,
    vertex_table: OnceLock<Result<VertexTable, EngineError>>,
    graphs: Mutex<HashMap<(usize, bool), Arc<SteinerGraph>>>,
}

/// Engine with default options and `k` Steiner points per edge.
pub fn build_engine(surface: FlatSurface, k: usize) -> DistanceEngine {
    DistanceEngine::new(
        surface,
        EngineOptions {
            refinement: k,
            ..EngineOptions::default()
        },
    )
}

impl DistanceEngine {
    pub fn new(surface: FlatSurface, options: EngineOptions) -> Self {
        let depth_max = options
            .depth_max
            .unwrap_or(4 * surface.triangulation().face_count());
        Self {
            surface,
            options,
            depth_max,
            vertex_table: OnceLock::new(),
            graphs: Mutex::new(HashMap::new()),
        }
    }

    pub fn surface(&self) -> &FlatSurface {
        &self.surface
    }

    pub fn options(&self) -> &EngineOptions {
        &self.options
    }

    pub fn depth_max(&self) -> usize {
        self.depth_max
    }

    fn graph(&self, k: usize, miswire: bool) -> Arc<SteinerGraph> {
        let mut graphs = self.graphs.lock().unwrap();
        graphs
            .entry((k, miswire))
            .or_insert_with(|| Arc::new(SteinerGraph::build(&self.surface, k, miswire)))
            .clone()
    }

    fn incumbent(&self, x: &SurfacePoint, y: &SurfacePoint) -> Geodesic {
        let (length, curve) = self
            .graph(DEFAULT_REFINEMENT, false)
            .shortest(&self.surface, x, y);
        Geodesic { length, curve }
    }

    /// Shortest path length in the Steiner graph with `k` points per edge.
    pub fn distance_approx(&self, x: &SurfacePoint, y: &SurfacePoint, k: usize) -> f64 {
        self.approx_geodesic(x, y, k).length
    }

    pub fn approx_geodesic(&self, x: &SurfacePoint, y: &SurfacePoint, k: usize) -> Geodesic {
        if x == y {
            return Geodesic::constant();
        }
        let (length, curve) =
            self.graph(k, self.options.miswire_steiner)
                .shortest(&self.surface, x, y);
        Geodesic { length, curve }
    }

    pub fn distance_exact(&self, x: &SurfacePoint, y: &SurfacePoint) -> Result<f64, EngineError> {
        self.realize_geodesic(x, y).map(|g| g.length)
    }

    /// Exact distance together with a curve realizing it.
    pub fn realize_geodesic(
        &self,
        x: &SurfacePoint,
        y: &SurfacePoint,
    ) -> Result<Geodesic, EngineError> {
        if x == y {
            return Ok(Geodesic::constant());
        }
        if y < x {
            return self.solve(y, x).map(Geodesic::reversed);
        }
        self.solve(x, y)
    }

    fn solve(&self, x: &SurfacePoint, y: &SurfacePoint) -> Result<Geodesic, EngineError> {
        let s = &self.surface;
        if self.options.fast_path {
            if let Some((d, rx, ry)) = s.shared_distance(x, y) {
                if d < s.safety_radius(x).max(s.safety_radius(y)) {
                    return Ok(Geodesic {
                        length: d,
                        curve: SurfaceCurve::from_pieces_unchecked(vec![FaceCurve::segment(
                            rx.face, rx.bary, ry.bary,
                        )]),
                    });
                }
            }
        }

        let mut best = self.incumbent(x, y);
        let from_x = Search::run(
            s,
            x,
            &[y],
            SearchParams {
                bound: best.length,
                tighten: true,
                want_vertices: true,
                depth_max: self.depth_max,
                on_cap: CapPolicy::Fail,
            },
        )?;
        if let Some(hit) = from_x.points[0] {
            if hit.length < best.length {
                best = Geodesic {
                    length: hit.length,
                    curve: from_x.curve(&hit),
                };
            }
        }
        if from_x.vertices.iter().all(Option::is_none) {
            return Ok(best);
        }
        let from_y = Search::run(
            s,
            y,
            &[],
            SearchParams {
                bound: best.length,
                tighten: false,
                want_vertices: true,
                depth_max: self.depth_max,
                on_cap: CapPolicy::Fail,
            },
        )?;
        let table = self.vertex_table()?;
        let mut via = None;
        for (v, hv) in from_x.vertices.iter().enumerate() {
            let Some(hv) = hv else { continue };
            for (w, hw) in from_y.vertices.iter().enumerate() {
                let Some(hw) = hw else { continue };
                let total = hv.length + table.dist[v][w] + hw.length;
                if total < best.length {
                    best.length = total;
                    via = Some((v, w, *hv, *hw));
                }
            }
        }
        if let Some((v, w, hv, hw)) = via {
            best.curve = from_x
                .curve(&hv)
                .concat(table.path(v, w))
                .concat(from_y.curve(&hw).reversed());
        }
        Ok(best)
    }

    /// Shortest geodesic from `a` to `b` whose interior avoids the vertices,
    /// if one has length at most `upper_bound`. An infinite bound explores
    /// strips up to the depth cap.
    pub fn vertex_free_distance(
        &self,
        a: &SurfacePoint,
        b: &SurfacePoint,
        upper_bound: f64,
    ) -> Result<Option<f64>, EngineError> {
        Ok(self
            .vertex_free_geodesic(a, b, upper_bound)?
            .map(|g| g.length))
    }

    pub fn vertex_free_geodesic(
        &self,
        a: &SurfacePoint,
        b: &SurfacePoint,
        upper_bound: f64,
    ) -> Result<Option<Geodesic>, EngineError> {
        if a == b {
            return Ok(Some(Geodesic::constant()));
        }
        let search = Search::run(
            &self.surface,
            a,
            &[b],
            SearchParams {
                // a hit exactly at the bound still counts
                bound: upper_bound.next_up(),
                tighten: true,
                want_vertices: false,
                depth_max: self.depth_max,
                on_cap: if upper_bound.is_finite() {
                    CapPolicy::Fail
                } else {
                    CapPolicy::Truncate
                },
            },
        )?;
        Ok(search.points[0]
            .filter(|h| h.length <= upper_bound)
            .map(|h| Geodesic {
                length: h.length,
                curve: search.curve(&h),
            }))
    }

    /// The strip unfolding behind the shortest vertex-free geodesic, if any is
    /// within `upper_bound`.
    pub fn vertex_free_strip(
        &self,
        a: &SurfacePoint,
        b: &SurfacePoint,
        upper_bound: f64,
    ) -> Result<Option<StripUnfolding>, EngineError> {
        let search = Search::run(
            &self.surface,
            a,
            &[b],
            SearchParams {
                bound: upper_bound.next_up(),
                tighten: true,
                want_vertices: false,
                depth_max: self.depth_max,
                on_cap: CapPolicy::Fail,
            },
        )?;
        Ok(search.points[0]
            .filter(|h| h.length <= upper_bound)
            .map(|h| search.unfolding(&h)))
    }

    /// Exact distances between all vertices, indexed by vertex id.
    pub fn vertex_distances(&self) -> Result<&[Vec<f64>], EngineError> {
        self.vertex_table().map(|t| t.dist.as_slice())
    }

    fn vertex_table(&self) -> Result<&VertexTable, EngineError> {
        self.vertex_table
            .get_or_init(|| self.build_vertex_table())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_vertex_table(&self) -> Result<VertexTable, EngineError> {
        let tri = self.surface.triangulation();
        let n = tri.vertex_count();
        let graph = self.graph(DEFAULT_REFINEMENT, false);
        let points: Vec<SurfacePoint> = tri
            .vertices()
            .map(|v| {
                let c = tri.vertex_corners(v)[0];
                self.surface.point(c.face, Barycentric::corner(c.corner))
            })
            .collect();

        let mut dist = vec![vec![f64::INFINITY; n]; n];
        let mut direct: HashMap<(usize, usize), SurfaceCurve> = HashMap::new();
        for v in 0..n {
            dist[v][v] = 0.0;
            // Steiner paths are real curves, so they bound every leg worth keeping
            let bound = graph
                .vertex_distances(v, n)
                .iter()
                .copied()
                .fold(0.0, f64::max);
            let search = Search::run(
                &self.surface,
                &points[v],
                &[],
                SearchParams {
                    bound: bound.next_up(),
                    tighten: false,
                    want_vertices: true,
                    depth_max: self.depth_max,
                    on_cap: CapPolicy::Fail,
                },
            )?;
            for (w, hit) in search.vertices.iter().enumerate() {
                let Some(hit) = hit else { continue };
                if w == v {
                    continue;
                }
                let (a, b) = (v.min(w), v.max(w));
                if hit.length < dist[a][b] {
                    dist[a][b] = hit.length;
                    dist[b][a] = hit.length;
                    let curve = search.curve(hit);
                    let forward = if v == a { curve } else { curve.reversed() };
                    direct.insert((b, a), forward.reversed());
                    direct.insert((a, b), forward);
                }
            }
        }

        let mut next: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let through = dist[i][m] + dist[m][j];
                    if through < dist[i][j] {
                        dist[i][j] = through;
                        next[i][j] = next[i][m];
                    }
                }
            }
        }
        Ok(VertexTable { dist, next, direct })
    }
}
