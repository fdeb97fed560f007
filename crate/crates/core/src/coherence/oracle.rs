use std::collections::BTreeMap;

use crate::equilibrium::Stress;
use crate::error::{Error, Result};
use crate::geometry::{perp, reduce_to_fundamental, IVec2, TorusShape, Vec2};
use crate::graph::{dual_with_positions, Dart, EdgeSpec, TorusGraph, VertexSpec};
use crate::reciprocal::ReciprocalPair;

use super::VertexWeights;

/// Largest site count the brute-force construction accepts.
pub const MAX_SITES: usize = 32;

/// Power-distance gap, relative to the squared size of the torus, below
/// which a configuration counts as degenerate.
const GENERIC_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub name: String,
    pub position: Vec2,
    pub weight: f64,
}

impl Site {
    pub fn new(name: impl Into<String>, position: Vec2, weight: f64) -> Self {
        Site {
            name: name.into(),
            position,
            weight,
        }
    }
}

/// Weighted points on a flat torus.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSet {
    pub shape: TorusShape,
    pub sites: Vec<Site>,
}

impl SiteSet {
    pub fn weights(&self) -> VertexWeights {
        VertexWeights::new(self.sites.iter().map(|s| s.weight).collect())
    }
}

/// A lifted copy of a site: site index and lattice translation.
type Lift = (usize, IVec2);

#[derive(Debug, Clone, Copy)]
struct CellEdge {
    /// Corner where this edge starts (counterclockwise).
    start: Vec2,
    neighbor: Option<Lift>,
}

/// Clips a convex counterclockwise polygon to `{y : y·n ≤ c}`; the new
/// edge along the clip line is labelled `label`.
fn clip(poly: &[CellEdge], n: Vec2, c: f64, label: Lift) -> Vec<CellEdge> {
    let m = poly.len();
    let inside = |p: Vec2| p.dot(n) <= c;
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let cur = poly[i];
        let next = poly[(i + 1) % m];
        let (a, b) = (cur.start, next.start);
        let (ia, ib) = (inside(a), inside(b));
        if ia {
            out.push(cur);
        }
        if ia != ib {
            let t = (c - a.dot(n)) / (b - a).dot(n);
            let x = a + (b - a) * t;
            if ia {
                // leaving: the clip line takes over from x
                out.push(CellEdge {
                    start: x,
                    neighbor: Some(label),
                });
            } else {
                // entering: the old edge resumes at x
                out.push(CellEdge {
                    start: x,
                    neighbor: cur.neighbor,
                });
            }
        }
    }
    out
}

struct Cell {
    edges: Vec<CellEdge>,
}

/// Power cell of site `a` among all lifted sites within `reach` lattice
/// steps, in coordinates relative to site `a`.
fn power_cell(sites: &[Site], shape: &TorusShape, a: usize, reach: i64, box_half: f64) -> Cell {
    let mut poly = vec![
        CellEdge {
            start: Vec2::new(-box_half, -box_half),
            neighbor: None,
        },
        CellEdge {
            start: Vec2::new(box_half, -box_half),
            neighbor: None,
        },
        CellEdge {
            start: Vec2::new(box_half, box_half),
            neighbor: None,
        },
        CellEdge {
            start: Vec2::new(-box_half, box_half),
            neighbor: None,
        },
    ];
    let pa = sites[a].position;
    for kx in -reach..=reach {
        for ky in -reach..=reach {
            let k = IVec2::new(kx, ky);
            for (b, site) in sites.iter().enumerate() {
                if b == a && k == IVec2::ZERO {
                    continue;
                }
                let d = site.position + shape.translation(k) - pa;
                let c = 0.5 * d.norm_squared() - site.weight + sites[a].weight;
                poly = clip(&poly, d, c, (b, k));
                if poly.is_empty() {
                    return Cell { edges: poly };
                }
            }
        }
    }
    Cell { edges: poly }
}

/// Brute-force weighted Delaunay graph of weighted sites on a torus, from
/// power cells computed against a patch of lifted sites. The patch grows
/// once if some power disk is not certified empty.
pub fn oracle_weighted_delaunay(set: &SiteSet) -> Result<TorusGraph> {
    let n = set.sites.len();
    if n == 0 || n > MAX_SITES {
        return Err(Error::NonGeneric(format!(
            "site count {n} outside 1..={MAX_SITES}"
        )));
    }
    let shape = set.shape;
    let sites: Vec<Site> = set
        .sites
        .iter()
        .map(|s| {
            let (q, _) = reduce_to_fundamental(s.position, &shape);
            Site::new(s.name.clone(), q, s.weight)
        })
        .collect();
    let mut last_err = None;
    for reach in [1, 2] {
        match delaunay_from_cells(&sites, &shape, reach) {
            Ok(g) => return Ok(g),
            Err(Escalate::Grow(msg)) => last_err = Some(msg),
            Err(Escalate::Fail(e)) => return Err(e),
        }
    }
    Err(Error::NonGeneric(format!(
        "no certificate on a 5x5 patch: {}",
        last_err.unwrap_or_default()
    )))
}

enum Escalate {
    Grow(String),
    Fail(Error),
}

impl From<Error> for Escalate {
    fn from(e: Error) -> Self {
        Escalate::Fail(e)
    }
}

fn delaunay_from_cells(
    sites: &[Site],
    shape: &TorusShape,
    reach: i64,
) -> std::result::Result<TorusGraph, Escalate> {
    let n = sites.len();
    let (u, v) = (shape.u(), shape.v());
    let size = u.norm() + v.norm();
    let box_half = 4.0 * (reach as f64 + 1.0) * size;
    let tol = GENERIC_TOLERANCE * size * size;
    let max_weight = sites.iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.weight));

    // rotation at each site: (neighbor lift) in counterclockwise order
    let mut rotations: Vec<Vec<Lift>> = Vec::with_capacity(n);
    for a in 0..n {
        let cell = power_cell(sites, shape, a, reach, box_half);
        if cell.edges.is_empty() {
            return Err(Escalate::Fail(Error::HiddenSite {
                name: sites[a].name.clone(),
            }));
        }
        let m = cell.edges.len();
        let mut around = Vec::with_capacity(m);
        for i in 0..m {
            let edge = cell.edges[i];
            let Some(nb) = edge.neighbor else {
                return Err(Escalate::Grow(format!(
                    "cell of {} reaches the bounding box",
                    sites[a].name
                )));
            };
            let end = cell.edges[(i + 1) % m].start;
            if (end - edge.start).norm() <= tol.sqrt() {
                return Err(Escalate::Fail(Error::NonGeneric(format!(
                    "power cell of {} has a degenerate edge",
                    sites[a].name
                ))));
            }
            around.push(nb);
        }
        for i in 0..m {
            // corner shared by edges i-1 and i, relative to site a
            let c = cell.edges[i].start;
            let prev = around[(i + m - 1) % m];
            let cur = around[i];
            let power = 0.5 * c.norm_squared() - sites[a].weight;
            // any site beating this corner lies within this radius of it
            let radius = (2.0 * (power + max_weight)).max(0.0).sqrt();
            if !disk_in_patch(sites[a].position + c, radius, shape, reach) {
                return Err(Escalate::Grow(format!(
                    "power disk at a corner of {} leaves the patch",
                    sites[a].name
                )));
            }
            for kx in -reach..=reach {
                for ky in -reach..=reach {
                    let k = IVec2::new(kx, ky);
                    for (b, site) in sites.iter().enumerate() {
                        let lift = (b, k);
                        if (b == a && k == IVec2::ZERO) || lift == prev || lift == cur {
                            continue;
                        }
                        let x = site.position + shape.translation(k) - sites[a].position;
                        let other = 0.5 * (c - x).norm_squared() - site.weight;
                        if other - power <= tol {
                            return Err(Escalate::Fail(Error::NonGeneric(format!(
                                "sites {}, {}, {} and {} are power-cocircular",
                                sites[a].name, sites[prev.0].name, sites[cur.0].name, site.name
                            ))));
                        }
                    }
                }
            }
        }
        rotations.push(around);
    }

    // each undirected edge is seen from both ends
    let key = |a: usize, b: usize, k: IVec2| (a, b, k).min((b, a, -k));
    let mut edge_ids: BTreeMap<(usize, usize, IVec2), usize> = BTreeMap::new();
    for (a, around) in rotations.iter().enumerate() {
        for &(b, k) in around {
            let len = edge_ids.len();
            edge_ids.entry(key(a, b, k)).or_insert(len);
        }
    }
    let mut edges = vec![EdgeSpec::new("", 0, 0, IVec2::ZERO); edge_ids.len()];
    for (&(a, b, k), &id) in &edge_ids {
        edges[id] = EdgeSpec::new(format!("e{id}"), a, b, k);
    }
    let mut seen = vec![0u8; 2 * edges.len()];
    let mut rotation_darts = Vec::with_capacity(n);
    for (a, around) in rotations.iter().enumerate() {
        let mut darts = Vec::with_capacity(around.len());
        for &(b, k) in around {
            let id = edge_ids[&key(a, b, k)];
            let e = &edges[id];
            let d = if (e.tail, e.head, e.homology) == (a, b, k) {
                Dart::reference(id)
            } else {
                Dart::reversal(id)
            };
            seen[d.index()] += 1;
            darts.push(d);
        }
        rotation_darts.push(darts);
    }
    if seen.iter().any(|&c| c != 1) {
        return Err(Escalate::Fail(Error::NonGeneric(
            "power cells disagree about their shared edges".into(),
        )));
    }
    let vertices = sites
        .iter()
        .map(|s| VertexSpec::new(s.name.clone(), s.position))
        .collect();
    Ok(TorusGraph::build(*shape, vertices, edges, rotation_darts)?)
}

/// Whether the disk lies inside the parallelogram covered by the lifted
/// translations `[−reach, reach]²`, i.e. `M·[−reach, reach + 1]²`.
fn disk_in_patch(center: Vec2, radius: f64, shape: &TorusShape, reach: i64) -> bool {
    let t = shape.lattice_coords(center);
    let inv = shape.inverse();
    // distance from the center to the lines s = const and t = const, per
    // unit of lattice coordinate
    let row_norm = |r: Vec2| r.norm();
    let sx = row_norm(Vec2::new(inv.a, inv.b));
    let sy = row_norm(Vec2::new(inv.c, inv.d));
    let (lo, hi) = (-(reach as f64), reach as f64 + 1.0);
    let margin_x = (t.x - lo).min(hi - t.x) / sx;
    let margin_y = (t.y - lo).min(hi - t.y) / sy;
    margin_x > radius && margin_y > radius
}

/// The weighted Voronoi dual of a weighted Delaunay graph: dual vertices at
/// the power centers of the faces, with stress `|e*| / |e|`.
pub fn weighted_voronoi(g: &TorusGraph, weights: &VertexWeights) -> Result<ReciprocalPair> {
    let centers = (0..g.face_count())
        .map(|f| power_center(g, weights, f))
        .collect::<Result<Vec<_>>>()?;
    let dual = dual_with_positions(g, *g.shape(), &centers)?;
    let mut stress = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let d = Dart::reference(e);
        let delta = g.displacement(d);
        let signed = dual.displacement(d).dot(perp(delta)) / delta.norm_squared();
        if !(signed > 0.0) {
            return Err(Error::NonGeneric(format!(
                "edge {} is not strictly locally Delaunay",
                g.edge_name(e)
            )));
        }
        stress.push(signed);
    }
    Ok(ReciprocalPair {
        primal: g.clone(),
        dual,
        stress: Stress::new(stress),
    })
}

/// Center `c` of the canonical lift of face `f` with
/// `½|x − c|² − π_x` equal at every corner, from the first three corners.
pub fn power_center(g: &TorusGraph, weights: &VertexWeights, f: usize) -> Result<Vec2> {
    let face = g.face(f);
    let corners = g.face_corners(f);
    if corners.len() < 3 {
        return Err(Error::NonGeneric(format!(
            "face {f} has fewer than three corners"
        )));
    }
    let pi: Vec<f64> = face
        .boundary
        .iter()
        .map(|d| weights.get(g.tail(*d)))
        .collect();
    let p0 = corners[0];
    let (a, b) = (corners[1] - p0, corners[2] - p0);
    // (x_i − p0)·(c − p0) = ½|x_i − p0|² − π_i + π_0
    let ra = 0.5 * a.norm_squared() - pi[1] + pi[0];
    let rb = 0.5 * b.norm_squared() - pi[2] + pi[0];
    let det = a.cross(b);
    if det.abs() <= 1e-14 * a.norm_squared().max(b.norm_squared()) {
        return Err(Error::NonGeneric(format!("face {f} has collinear corners")));
    }
    let c = Vec2::new(ra * b.y - rb * a.y, a.x * rb - b.x * ra) * (1.0 / det);
    Ok(p0 + c)
}
