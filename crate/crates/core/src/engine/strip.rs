//! Best-first search over planar strip unfoldings.
//!
//! A strip starts at a face carrying a representative of the source and
//! crosses open edges one at a time; each crossed face is developed into the
//! plane next to its predecessor. The window is the part of the last crossed
//! edge that straight rays from the source image can reach through every
//! earlier crossing. A target representative inside the developed face and
//! inside the cone over the window is joined to the source by a straight
//! segment that stays in the strip, so its length is the length of a curve on
//! the surface. Every geodesic whose interior avoids the vertices is found
//! this way by the strip of faces it crosses.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::curves::{FaceCurve, SurfaceCurve};
use crate::geom::{dist_point_segment, Point2};
use crate::gluing::SideRef;
use crate::metric::{across_side, Barycentric, FacePlacement, FlatSurface, Rep, SurfacePoint};

use super::EngineError;

/// Windows narrower than this (as a fraction of the crossed side) are dropped;
/// the rays they carry pass within rounding of a vertex.
const MIN_WINDOW: f64 = 1e-12;

/// Slack for the cone membership test, relative to the vector lengths involved.
const CONE_EPS: f64 = 1e-12;

/// A developed sequence of faces.
#[derive(Debug, Clone, Serialize)]
pub struct StripUnfolding {
    /// Crossed sides, each given as the side of the face being left.
    pub crossed: Vec<SideRef>,
    /// Planar images of the faces, in crossing order; the first is the face's own placement.
    pub faces: Vec<FacePlacement>,
    /// Image of the source representative.
    pub source: Point2,
    /// Reachable part of the last crossed side, or `None` for an empty strip.
    pub window: Option<(Point2, Point2)>,
}

/// What to do when a strip that is still below the bound hits the depth cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CapPolicy {
    Fail,
    Truncate,
}

#[derive(Debug, Clone)]
struct Node {
    face: usize,
    corners: [Point2; 3],
    entry: Option<u8>,
    window: (Point2, Point2),
    parent: Option<usize>,
    depth: usize,
    seed: usize,
    crossed: Vec<SideRef>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Hit {
    pub length: f64,
    node: usize,
    target: Rep,
}

struct Key {
    bound: f64,
    depth: usize,
    crossed: Vec<SideRef>,
    node: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.depth.cmp(&other.depth))
            .then_with(|| self.crossed.cmp(&other.crossed))
            .then(self.node.cmp(&other.node))
    }
}

pub(crate) struct Search<'a> {
    surface: &'a FlatSurface,
    source: &'a SurfacePoint,
    nodes: Vec<Node>,
    pub points: Vec<Option<Hit>>,
    pub vertices: Vec<Option<Hit>>,
}

pub(crate) struct SearchParams {
    pub bound: f64,
    /// Lower the bound whenever the first point target is reached.
    pub tighten: bool,
    pub want_vertices: bool,
    pub depth_max: usize,
    pub on_cap: CapPolicy,
}

impl<'a> Search<'a> {
    pub fn run(
        surface: &'a FlatSurface,
        source: &'a SurfacePoint,
        targets: &[&SurfacePoint],
        params: SearchParams,
    ) -> Result<Self, EngineError> {
        let tri = surface.triangulation();
        let mut search = Search {
            surface,
            source,
            nodes: Vec::new(),
            points: vec![None; targets.len()],
            vertices: vec![
                None;
                if params.want_vertices {
                    tri.vertex_count()
                } else {
                    0
                }
            ],
        };
        let mut bound = params.bound;
        let mut heap = BinaryHeap::new();

        for (seed, rep) in source.reps().iter().enumerate() {
            let corners = surface.placement(rep.face).corners;
            search.nodes.push(Node {
                face: rep.face,
                corners,
                entry: None,
                window: (corners[0], corners[0]),
                parent: None,
                depth: 0,
                seed,
                crossed: Vec::new(),
            });
            let node = search.nodes.len() - 1;
            heap.push(Reverse(Key {
                bound: 0.0,
                depth: 0,
                crossed: Vec::new(),
                node,
            }));
        }

        while let Some(Reverse(key)) = heap.pop() {
            if key.bound >= bound {
                break;
            }
            let idx = key.node;
            let node = search.nodes[idx].clone();
            let seed_rep = source.reps()[node.seed];
            let s = surface.position(&seed_rep);

            for (ti, target) in targets.iter().enumerate() {
                for r in target.reps_in(node.face) {
                    let b = r.bary.position(&node.corners);
                    if node.entry.is_some() && !in_cone(s, node.window, b) {
                        continue;
                    }
                    let length = s.dist(b);
                    if search.points[ti].is_none_or(|h| length < h.length) {
                        search.points[ti] = Some(Hit {
                            length,
                            node: idx,
                            target: *r,
                        });
                        if params.tighten && ti == 0 {
                            bound = bound.min(length);
                        }
                    }
                }
            }
            if params.want_vertices {
                for c in 0..3u8 {
                    let b = node.corners[c as usize];
                    if node.entry.is_some() && !in_cone(s, node.window, b) {
                        continue;
                    }
                    let v = tri
                        .orbit_of_corner(crate::gluing::Corner::new(node.face, c))
                        .0;
                    let length = s.dist(b);
                    if search.vertices[v].is_none_or(|h| length < h.length) {
                        search.vertices[v] = Some(Hit {
                            length,
                            node: idx,
                            target: Rep::new(node.face, Barycentric::corner(c)),
                        });
                    }
                }
            }

            for k in 0..3u8 {
                let exits = match node.entry {
                    Some(e) => k != e,
                    None => !seed_rep.bary.on_closed_side(k),
                };
                if !exits {
                    continue;
                }
                let a = node.corners[((k + 1) % 3) as usize];
                let b = node.corners[((k + 2) % 3) as usize];
                let window = match node.entry {
                    None => Some((a, b)),
                    Some(_) => clip(s, node.window, a, b),
                };
                let Some(window) = window else { continue };
                let lower = dist_point_segment(s, window.0, window.1);
                if lower >= bound {
                    continue;
                }
                if node.depth + 1 > params.depth_max {
                    match params.on_cap {
                        CapPolicy::Fail => {
                            return Err(EngineError::DepthCapExceeded {
                                depth_max: params.depth_max,
                            })
                        }
                        CapPolicy::Truncate => continue,
                    }
                }
                let side = SideRef::new(node.face, k);
                let (next, entry, corners) = develop(surface, side, &node.corners);
                let mut crossed = node.crossed.clone();
                crossed.push(side);
                search.nodes.push(Node {
                    face: next,
                    corners,
                    entry: Some(entry),
                    window,
                    parent: Some(idx),
                    depth: node.depth + 1,
                    seed: node.seed,
                    crossed: crossed.clone(),
                });
                heap.push(Reverse(Key {
                    bound: lower,
                    depth: node.depth + 1,
                    crossed,
                    node: search.nodes.len() - 1,
                }));
            }
        }
        Ok(search)
    }

    /// The strip that produced `hit`.
    pub fn unfolding(&self, hit: &Hit) -> StripUnfolding {
        let chain = self.chain(hit.node);
        let first = &self.nodes[chain[0]];
        let last = &self.nodes[*chain.last().unwrap()];
        StripUnfolding {
            crossed: last.crossed.clone(),
            faces: chain
                .iter()
                .map(|&i| FacePlacement {
                    face: self.nodes[i].face,
                    corners: self.nodes[i].corners,
                })
                .collect(),
            source: self.surface.position(&self.source.reps()[first.seed]),
            window: last.entry.map(|_| last.window),
        }
    }

    fn chain(&self, mut idx: usize) -> Vec<usize> {
        let mut chain = vec![idx];
        while let Some(p) = self.nodes[idx].parent {
            chain.push(p);
            idx = p;
        }
        chain.reverse();
        chain
    }

    /// The straight segment behind `hit`, cut into one piece per crossed face.
    pub fn curve(&self, hit: &Hit) -> SurfaceCurve {
        let tri = self.surface.triangulation();
        let chain = self.chain(hit.node);
        let seed = self.source.reps()[self.nodes[chain[0]].seed];
        let s = self.surface.position(&seed);
        let end = hit.target.bary.position(&self.nodes[hit.node].corners);
        let dir = end - s;

        let mut pieces = Vec::new();
        let mut start = seed.bary;
        for w in chain.windows(2) {
            let node = &self.nodes[w[0]];
            let k = self.nodes[w[1]].crossed.last().unwrap().side;
            let a = node.corners[((k + 1) % 3) as usize];
            let b = node.corners[((k + 2) % 3) as usize];
            // s + u*dir meets a + tau*(b - a)
            let denom = (b - a).cross(dir);
            let tau = if denom == 0.0 {
                0.5
            } else {
                ((s - a).cross(dir) / denom).clamp(0.0, 1.0)
            };
            let exit = crossing(k, tau);
            push_piece(&mut pieces, node.face, start, exit);
            start = across_side(tri, SideRef::new(node.face, k), &exit).bary;
        }
        push_piece(
            &mut pieces,
            self.nodes[hit.node].face,
            start,
            hit.target.bary,
        );
        SurfaceCurve::from_pieces_unchecked(pieces)
    }
}

fn crossing(side: u8, tau: f64) -> Barycentric {
    let tau = if tau < crate::tol::SNAP {
        0.0
    } else if tau > 1.0 - crate::tol::SNAP {
        1.0
    } else {
        tau
    };
    Barycentric::on_side(side, 1.0 - tau, tau)
}

fn push_piece(pieces: &mut Vec<FaceCurve>, face: usize, a: Barycentric, b: Barycentric) {
    if a != b {
        pieces.push(FaceCurve::segment(face, a, b));
    }
}

/// Place the face across `side` next to the face whose corner images are `corners`.
/// Returns the new face, the side it was entered through, and its corner images.
pub(crate) fn develop(
    surface: &FlatSurface,
    side: SideRef,
    corners: &[Point2; 3],
) -> (usize, u8, [Point2; 3]) {
    let tri = surface.triangulation();
    let (t, o) = tri.partner(side);
    let k = side.side as usize;
    let a = corners[(k + 1) % 3];
    let b = corners[(k + 2) % 3];
    let (img_start, img_end) = if o.starts_match() { (a, b) } else { (b, a) };

    let ti = t.side as usize;
    let mut out = [Point2::default(); 3];
    out[(ti + 1) % 3] = img_start;
    out[(ti + 2) % 3] = img_end;

    let canon = surface.placement(t.face).corners;
    let q1 = canon[(ti + 1) % 3];
    let q2 = canon[(ti + 2) % 3];
    let e = (q2 - q1) * (1.0 / q1.dist(q2));
    let along = (canon[ti] - q1).dot(e);
    let across = e.cross(canon[ti] - q1).abs();

    let e_img = (img_end - img_start) * (1.0 / img_start.dist(img_end));
    let opposite = corners[k];
    let normal = if e_img.cross(opposite - img_start) > 0.0 {
        -e_img.perp()
    } else {
        e_img.perp()
    };
    out[ti] = img_start + e_img * along + normal * across;
    (t.face, t.side, out)
}

/// Whether `p` lies in the closed cone from `s` spanned by the window endpoints.
fn in_cone(s: Point2, window: (Point2, Point2), p: Point2) -> bool {
    let (mut du, mut dv) = (window.0 - s, window.1 - s);
    if du.cross(dv) < 0.0 {
        std::mem::swap(&mut du, &mut dv);
    }
    let dp = p - s;
    let np = dp.norm();
    du.cross(dp) >= -CONE_EPS * du.norm() * np && dp.cross(dv) >= -CONE_EPS * dv.norm() * np
}

/// Part of segment `[a, b]` inside the cone from `s` over `window`.
fn clip(s: Point2, window: (Point2, Point2), a: Point2, b: Point2) -> Option<(Point2, Point2)> {
    let (mut du, mut dv) = (window.0 - s, window.1 - s);
    if du.cross(dv) < 0.0 {
        std::mem::swap(&mut du, &mut dv);
    }
    let d = b - a;
    let sa = a - s;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // both constraints are affine in the segment parameter
    for (h0, h1) in [(du.cross(sa), du.cross(d)), (sa.cross(dv), d.cross(dv))] {
        if h1 == 0.0 {
            if h0 < 0.0 {
                return None;
            }
        } else {
            let r = -h0 / h1;
            if h1 > 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
    }
    (hi - lo > MIN_WINDOW).then(|| (a + d * lo, a + d * hi))
}

/// Develop an explicit side sequence from `seed`. Returns `None` if a side is
/// not an exit of the current face or the window empties out.
pub fn unfold(surface: &FlatSurface, seed: Rep, sides: &[u8]) -> Option<StripUnfolding> {
    let s = surface.position(&seed);
    let mut corners = surface.placement(seed.face).corners;
    let mut face = seed.face;
    let mut entry: Option<u8> = None;
    let mut window: Option<(Point2, Point2)> = None;
    let mut faces = vec![FacePlacement { face, corners }];
    let mut crossed = Vec::new();
    for &k in sides {
        let allowed = match entry {
            Some(e) => k != e,
            None => !seed.bary.on_closed_side(k),
        };
        if !allowed || k > 2 {
            return None;
        }
        let a = corners[((k + 1) % 3) as usize];
        let b = corners[((k + 2) % 3) as usize];
        window = Some(match window {
            None => (a, b),
            Some(w) => clip(s, w, a, b)?,
        });
        let side = SideRef::new(face, k);
        crossed.push(side);
        let (next, e, c) = develop(surface, side, &corners);
        face = next;
        entry = Some(e);
        corners = c;
        faces.push(FacePlacement { face, corners });
    }
    Some(StripUnfolding {
        crossed,
        faces,
        source: s,
        window,
    })
}
