//! Equilibrium stresses, the spring embedder, affine transfer between tori
//! and embedding validation.

use crate::error::{Error, Result};
use crate::geometry::{IVec2, TorusShape, Vec2};
use crate::graph::{Dart, PatchRange, TorusGraph};
use crate::linalg::{solve_dense, DenseMatrix, LinearSystem};

/// Equilibrium tolerance, relative to the largest single force term.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-9;

/// A real weight per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Stress {
    values: Vec<f64>,
}

impl Stress {
    pub fn new(values: Vec<f64>) -> Self {
        Stress { values }
    }

    pub fn uniform(edges: usize, value: f64) -> Self {
        Stress {
            values: vec![value; edges],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, edge: usize) -> f64 {
        self.values[edge]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|w| *w > 0.0 && w.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Stress {
        Stress {
            values: self.values.iter().map(|w| w * s).collect(),
        }
    }

    /// `InvalidStress` unless there is one finite positive value per edge.
    pub fn check_positive(&self, g: &TorusGraph) -> Result<()> {
        self.check_len(g)?;
        match self
            .values
            .iter()
            .position(|w| !(*w > 0.0 && w.is_finite()))
        {
            Some(e) => Err(Error::InvalidStress(format!(
                "edge {} has stress {}",
                g.edge_name(e),
                self.values[e]
            ))),
            None => Ok(()),
        }
    }

    pub(crate) fn check_len(&self, g: &TorusGraph) -> Result<()> {
        if self.values.len() != g.edge_count() {
            return Err(Error::InvalidStress(format!(
                "{} values for {} edges",
                self.values.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    /// `Σ ω·Δ` over darts leaving each vertex.
    pub residuals: Vec<Vec2>,
    pub max_residual: f64,
    /// Largest `|ω_e Δ_e|`.
    pub scale: f64,
}

impl EquilibriumReport {
    pub fn is_equilibrium(&self) -> bool {
        self.max_residual <= EQUILIBRIUM_TOLERANCE * self.scale
    }
}

pub fn equilibrium_residual(g: &TorusGraph, stress: &Stress) -> Result<EquilibriumReport> {
    stress.check_len(g)?;
    let mut residuals = vec![Vec2::ZERO; g.vertex_count()];
    let mut scale: f64 = 0.0;
    for d in g.darts() {
        let force = g.displacement(d) * stress.get(d.edge());
        scale = scale.max(force.norm());
        residuals[g.tail(d)] += force;
    }
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.norm()));
    Ok(EquilibriumReport {
        residuals,
        max_residual,
        scale,
    })
}

/// The unique (up to translation) geodesic embedding homotopic to `g` that
/// is in equilibrium with respect to `stress`, with `pinned` held at its
/// current coordinate.
pub fn tutte_embed(g: &TorusGraph, stress: &Stress, pinned: usize) -> Result<TorusGraph> {
    stress.check_positive(g)?;
    if pinned >= g.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "pinned vertex {pinned} out of range"
        )));
    }
    if !g.check_essential().is_valid() {
        return Err(Error::NotEssentiallyValid);
    }
    let positions = solve_tutte_system(g, stress, pinned)?;
    let out = g.with_positions(&positions)?;
    let report = equilibrium_residual(&out, stress)?;
    if !report.is_equilibrium() {
        return Err(Error::SingularSystem(format!(
            "solution misses equilibrium by {:e}",
            report.max_residual
        )));
    }
    if !embedding_check(&out) {
        return Err(Error::NotAnEmbedding(
            "equilibrium drawing is not an embedding".into(),
        ));
    }
    Ok(out)
}

/// Solves `Σ_{q→r} ω(x_r + M[q→r] − x_q) = 0` for all unpinned `q`.
fn solve_tutte_system(g: &TorusGraph, stress: &Stress, pinned: usize) -> Result<Vec<Vec2>> {
    let n = g.vertex_count();
    let index: Vec<Option<usize>> = (0..n)
        .scan(0, |next, v| {
            Some(if v == pinned {
                None
            } else {
                *next += 1;
                Some(*next - 1)
            })
        })
        .collect();
    let p0 = g.position(pinned);
    let mut a = DenseMatrix::zeros(n - 1, n - 1);
    let mut b = DenseMatrix::zeros(n - 1, 2);
    for d in g.darts() {
        let Some(row) = index[g.tail(d)] else {
            continue;
        };
        let w = stress.get(d.edge());
        let shift = g.shape().translation(g.homology(d)) * w;
        a[(row, row)] += w;
        match index[g.head(d)] {
            Some(col) => a[(row, col)] -= w,
            None => {
                b[(row, 0)] += w * p0.x;
                b[(row, 1)] += w * p0.y;
            }
        }
        b[(row, 0)] += shift.x;
        b[(row, 1)] += shift.y;
    }
    let x = solve_dense(&LinearSystem { matrix: a, rhs: b })?;
    Ok((0..n)
        .map(|v| match index[v] {
            Some(i) => Vec2::new(x[(i, 0)], x[(i, 1)]),
            None => p0,
        })
        .collect())
}

/// Displacement vectors (one per edge) of the equilibrium embedding, found
/// from vertex equilibrium, face closure, and the two homology constraints
/// `Σ_γ Δ = M[γ]` for a pair of spanning cycles. The system is overdetermined
/// by two redundant rows and solved through its normal equations.
pub fn solve_displacements(g: &TorusGraph, stress: &Stress) -> Result<Vec<Vec2>> {
    stress.check_positive(g)?;
    let m = g.edge_count();
    let mut rows: Vec<(Vec<f64>, Vec2)> = Vec::new();
    for v in 0..g.vertex_count() {
        let mut row = vec![0.0; m];
        for d in g.rotation(v) {
            row[d.edge()] += d.sign() * stress.get(d.edge());
        }
        rows.push((row, Vec2::ZERO));
    }
    for f in g.faces() {
        let mut row = vec![0.0; m];
        for d in &f.boundary {
            row[d.edge()] += d.sign();
        }
        rows.push((row, Vec2::ZERO));
    }
    let cycles = g.fundamental_cycles();
    let classes: Vec<IVec2> = cycles
        .iter()
        .map(|c| c.iter().fold(IVec2::ZERO, |acc, d| acc + g.homology(*d)))
        .collect();
    let (i, j) = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .find(|&(i, j)| classes[i].x * classes[j].y - classes[i].y * classes[j].x != 0)
        .ok_or_else(|| Error::NotCellular("cycle classes do not span".into()))?;
    for k in [i, j] {
        let mut row = vec![0.0; m];
        for d in &cycles[k] {
            row[d.edge()] += d.sign();
        }
        rows.push((row, g.shape().translation(classes[k])));
    }

    let mut ata = DenseMatrix::zeros(m, m);
    let mut atb = DenseMatrix::zeros(m, 2);
    for (row, rhs) in &rows {
        for (p, &x) in row.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            atb[(p, 0)] += x * rhs.x;
            atb[(p, 1)] += x * rhs.y;
            for (q, &y) in row.iter().enumerate() {
                ata[(p, q)] += x * y;
            }
        }
    }
    let x = solve_dense(&LinearSystem {
        matrix: ata,
        rhs: atb,
    })?;
    Ok((0..m).map(|e| Vec2::new(x[(e, 0)], x[(e, 1)])).collect())
}

/// The image of `g` under the linear map taking `g`'s torus to `target`:
/// coordinates are multiplied by `target·M⁻¹`, homology vectors are kept.
pub fn affine_transfer(g: &TorusGraph, target: &TorusShape) -> Result<TorusGraph> {
    let a = target.matrix() * g.shape().inverse();
    let positions: Vec<Vec2> = g.positions().into_iter().map(|p| a.mul_vec(p)).collect();
    g.with_shape_and_positions(*target, &positions)
}

/// Whether the geodesic drawing of `g` is an embedding: vertex images are
/// distinct, no two lifted edges meet except at shared endpoints, every face
/// lifts to a simple counterclockwise polygon, and face areas add up to the
/// area of the torus.
pub fn embedding_check(g: &TorusGraph) -> bool {
    let shape = g.shape();
    let scale = shape.u().norm().max(shape.v().norm());
    let eps = 1e-12 * scale;

    for i in 0..g.vertex_count() {
        for j in i + 1..g.vertex_count() {
            let (_, dist) = shape.nearest_lattice(g.position(i) - g.position(j));
            if dist <= eps {
                return false;
            }
        }
    }

    let reach = 2 + 2 * g
        .homology_matrix()
        .iter()
        .map(|h| h.max_abs())
        .max()
        .unwrap_or(0);
    let range = PatchRange::centered(reach);
    let base: Vec<(Vec2, Vec2)> = (0..g.edge_count())
        .map(|e| {
            let d = Dart::reference(e);
            let p = g.position(g.tail(d));
            (p, p + g.displacement(d))
        })
        .collect();
    for (e, &(p1, p2)) in base.iter().enumerate() {
        for kx in range.min.x..=range.max.x {
            for ky in range.min.y..=range.max.y {
                let k = IVec2::new(kx, ky);
                let t = shape.translation(k);
                for (f, &(q1, q2)) in base.iter().enumerate() {
                    if f < e && k == IVec2::ZERO {
                        continue;
                    }
                    if f == e && k == IVec2::ZERO {
                        continue;
                    }
                    let (q1, q2) = (q1 + t, q2 + t);
                    if boxes_apart(p1, p2, q1, q2, eps) {
                        continue;
                    }
                    if segments_conflict(p1, p2, q1, q2, eps) {
                        return false;
                    }
                }
            }
        }
    }

    let mut total = 0.0;
    for f in 0..g.face_count() {
        let corners = g.face_corners(f);
        let area = polygon_area(&corners);
        if !(area > eps * scale) || !polygon_is_simple(&corners, eps) {
            return false;
        }
        total += area;
    }
    (total - shape.det()).abs() <= 1e-9 * shape.det().max(1.0)
}

fn boxes_apart(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2, eps: f64) -> bool {
    p1.x.max(p2.x) + eps < q1.x.min(q2.x)
        || q1.x.max(q2.x) + eps < p1.x.min(p2.x)
        || p1.y.max(p2.y) + eps < q1.y.min(q2.y)
        || q1.y.max(q2.y) + eps < p1.y.min(p2.y)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(p: Vec2, a: Vec2, b: Vec2, eps: f64) -> bool {
    let ab = b - a;
    let len = ab.norm();
    if len <= eps {
        return (p - a).norm() <= eps;
    }
    if orient(a, b, p).abs() > eps * len {
        return false;
    }
    let t = (p - a).dot(ab) / (len * len);
    t >= -eps / len && t <= 1.0 + eps / len
}

/// Whether two segments meet anywhere other than at a single shared endpoint.
fn segments_conflict(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2, eps: f64) -> bool {
    let same = |a: Vec2, b: Vec2| (a - b).norm() <= eps;
    let shared = [
        (p1, p2, q1, q2),
        (p1, p2, q2, q1),
        (p2, p1, q1, q2),
        (p2, p1, q2, q1),
    ]
    .into_iter()
    .filter(|(s, _, t, _)| same(*s, *t))
    .map(|(s, a, _, b)| (s, a, b))
    .collect::<Vec<_>>();
    match shared.len() {
        0 => {}
        1 => {
            let (s, a, b) = shared[0];
            let (da, db) = (a - s, b - s);
            let collinear = da.cross(db).abs() <= eps * da.norm().max(db.norm());
            return collinear && da.dot(db) > 0.0;
        }
        _ => return true,
    }
    let d1 = orient(p1, p2, q1);
    let d2 = orient(p1, p2, q2);
    let d3 = orient(q1, q2, p1);
    let d4 = orient(q1, q2, p2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    on_segment(q1, p1, p2, eps)
        || on_segment(q2, p1, p2, eps)
        || on_segment(p1, q1, q2, eps)
        || on_segment(p2, q1, q2, eps)
}

/// Signed shoelace area.
pub(crate) fn polygon_area(corners: &[Vec2]) -> f64 {
    let n = corners.len();
    (0..n)
        .map(|i| corners[i].cross(corners[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

fn polygon_is_simple(corners: &[Vec2], eps: f64) -> bool {
    let n = corners.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a1, a2) = (corners[i], corners[(i + 1) % n]);
            let (b1, b2) = (corners[j], corners[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // consecutive sides share exactly one corner and must not fold back
                if n > 2 && segments_conflict(a1, a2, b1, b2, eps) {
                    return false;
                }
            } else if segments_conflict(a1, a2, b1, b2, eps) {
                return false;
            }
        }
    }
    true
}
