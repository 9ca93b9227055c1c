//! Refined shortest-path graph: vertices plus evenly spaced points on every
//! edge, joined whenever two nodes share a face.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::curves::{FaceCurve, SurfaceCurve};
use crate::metric::{Barycentric, FlatSurface, Rep, SurfacePoint};

#[derive(Debug, Clone, Copy)]
struct Dist(f64);

impl PartialEq for Dist {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    weight: f64,
    face: usize,
}

#[derive(Debug)]
pub(crate) struct SteinerGraph {
    nodes: Vec<SurfacePoint>,
    face_nodes: Vec<Vec<usize>>,
    adj: Vec<Vec<Arc>>,
}

#[derive(Debug, Clone, Copy)]
enum Pred {
    None,
    Source(usize),
    Node(usize, usize),
}

impl SteinerGraph {
    /// Nodes `0..V` are the vertices, in id order.
    pub fn build(surface: &FlatSurface, k: usize, miswire: bool) -> Self {
        let tri = surface.triangulation();
        let mut nodes: Vec<SurfacePoint> = tri
            .vertices()
            .map(|v| {
                let c = tri.vertex_corners(v)[0];
                surface.point(c.face, Barycentric::corner(c.corner))
            })
            .collect();
        for e in tri.edges() {
            let side = tri.edge_sides(e)[0];
            for j in 1..=k {
                let t = j as f64 / (k + 1) as f64;
                let bary = Barycentric::on_side(side.side, 1.0 - t, t);
                let point = if miswire {
                    let (other, o) = tri.partner(side);
                    // the wrong end of the partner side
                    let wrong = if o.starts_match() {
                        Barycentric::on_side(other.side, t, 1.0 - t)
                    } else {
                        Barycentric::on_side(other.side, 1.0 - t, t)
                    };
                    SurfacePoint::from_reps_unchecked(vec![
                        Rep::new(side.face, bary),
                        Rep::new(other.face, wrong),
                    ])
                } else {
                    surface.point(side.face, bary)
                };
                nodes.push(point);
            }
        }
        let mut face_nodes = vec![Vec::new(); tri.face_count()];
        for (i, p) in nodes.iter().enumerate() {
            for f in p.faces() {
                face_nodes[f].push(i);
            }
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        for (face, members) in face_nodes.iter().enumerate() {
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    let weight = surface.quasi_distance(face, &nodes[i], &nodes[j]).unwrap();
                    adj[i].push(Arc {
                        to: j,
                        weight,
                        face,
                    });
                    adj[j].push(Arc {
                        to: i,
                        weight,
                        face,
                    });
                }
            }
        }
        Self {
            nodes,
            face_nodes,
            adj,
        }
    }

    /// Graph distance from `x` to `y` with `x`, `y` added as extra nodes, and the path.
    pub fn shortest(
        &self,
        surface: &FlatSurface,
        x: &SurfacePoint,
        y: &SurfacePoint,
    ) -> (f64, SurfaceCurve) {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![Pred::None; n];
        let mut heap = BinaryHeap::new();
        for f in x.faces() {
            for &u in &self.face_nodes[f] {
                let d = surface.quasi_distance(f, x, &self.nodes[u]).unwrap();
                if d < dist[u] {
                    dist[u] = d;
                    pred[u] = Pred::Source(f);
                }
            }
        }
        let mut exit = vec![None::<(f64, usize)>; n];
        for f in y.faces() {
            for &u in &self.face_nodes[f] {
                let d = surface.quasi_distance(f, &self.nodes[u], y).unwrap();
                if exit[u].is_none_or(|(e, _)| d < e) {
                    exit[u] = Some((d, f));
                }
            }
        }
        for (u, &d) in dist.iter().enumerate() {
            if d.is_finite() {
                heap.push(Reverse((Dist(d), u)));
            }
        }

        // direct segment in a shared face
        let mut best = surface
            .shared_distance(x, y)
            .map(|w| w.0)
            .unwrap_or(f64::INFINITY);
        let mut via: Option<usize> = None;
        while let Some(Reverse((Dist(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if d >= best {
                break;
            }
            if let Some((e, _)) = exit[u] {
                if d + e < best {
                    best = d + e;
                    via = Some(u);
                }
            }
            for arc in &self.adj[u] {
                let nd = d + arc.weight;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    pred[arc.to] = Pred::Node(u, arc.face);
                    heap.push(Reverse((Dist(nd), arc.to)));
                }
            }
        }

        let Some(last) = via else {
            let (_, rx, ry) = surface
                .shared_distance(x, y)
                .expect("connected surface has a path");
            return (best, segment_curve(rx.face, rx.bary, ry.bary));
        };
        let mut hops = Vec::new();
        let (_, f) = exit[last].unwrap();
        hops.push((self.nodes[last].clone(), y.clone(), f));
        let mut u = last;
        loop {
            match pred[u] {
                Pred::Node(p, f) => {
                    hops.push((self.nodes[p].clone(), self.nodes[u].clone(), f));
                    u = p;
                }
                Pred::Source(f) => {
                    hops.push((x.clone(), self.nodes[u].clone(), f));
                    break;
                }
                Pred::None => unreachable!("settled node without predecessor"),
            }
        }
        hops.reverse();
        let pieces = hops
            .iter()
            .flat_map(|(a, b, f)| {
                let (_, ra, rb) = surface.quasi_distance_witness(*f, a, b).unwrap();
                segment_curve(*f, ra.bary, rb.bary).pieces
            })
            .collect();
        (best, SurfaceCurve::from_pieces_unchecked(pieces))
    }

    /// Graph distances from vertex `v` to every vertex.
    pub fn vertex_distances(&self, v: usize, vertex_count: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        dist[v] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((Dist(0.0), v))]);
        while let Some(Reverse((Dist(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for arc in &self.adj[u] {
                let nd = d + arc.weight;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    heap.push(Reverse((Dist(nd), arc.to)));
                }
            }
        }
        dist.truncate(vertex_count);
        dist
    }

    #[cfg(test)]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

fn segment_curve(face: usize, a: Barycentric, b: Barycentric) -> SurfaceCurve {
    if a == b {
        SurfaceCurve::constant()
    } else {
        SurfaceCurve::from_pieces_unchecked(vec![FaceCurve::segment(face, a, b)])
    }
}
