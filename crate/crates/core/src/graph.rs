//! Combinatorial maps on the torus with geodesic coordinates.
//!
//! Darts are numbered `2e` (the reference dart `e⁺`) and `2e + 1` (its
//! reversal `e⁻`). The rotation system lists the darts leaving each vertex in
//! counterclockwise order; the dart following `d` along its left face is the
//! rotation-predecessor of `rev(d)`, so face boundaries run counterclockwise.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{reduce_lenient, IVec2, TorusShape, Vec2};

/// Lattice-coordinate slack within which a stored coordinate counts as
/// already reduced.
const REDUCE_SLACK: f64 = 1e-12;

/// A directed half of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(usize);

impl Dart {
    pub fn from_index(i: usize) -> Dart {
        Dart(i)
    }

    /// `e⁺`.
    pub fn reference(edge: usize) -> Dart {
        Dart(2 * edge)
    }

    /// `e⁻`.
    pub fn reversal(edge: usize) -> Dart {
        Dart(2 * edge + 1)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_reference(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    /// `+1` for a reference dart, `−1` for a reversal.
    pub fn sign(self) -> f64 {
        if self.is_reference() {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpec {
    pub name: String,
    pub position: Vec2,
}

impl VertexSpec {
    pub fn new(name: impl Into<String>, position: Vec2) -> Self {
        VertexSpec {
            name: name.into(),
            position,
        }
    }
}

/// An edge given by its reference dart.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub homology: IVec2,
}

impl EdgeSpec {
    pub fn new(name: impl Into<String>, tail: usize, head: usize, homology: IVec2) -> Self {
        EdgeSpec {
            name: name.into(),
            tail,
            head,
            homology,
        }
    }
}

/// A dart in the permutation-level input of [`TorusGraph::from_darts`].
#[derive(Debug, Clone, PartialEq)]
pub struct DartSpec {
    pub tail: usize,
    pub reversal: usize,
    pub homology: IVec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    /// Consecutive darts under the face-successor permutation, starting at the
    /// smallest dart.
    pub boundary: Vec<Dart>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.boundary.len()
    }
}

/// A cellularly embedded geodesic graph on a flat torus, given by its
/// coordinate representation: vertex coordinates in the fundamental
/// parallelogram plus one homology vector per dart.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGraph {
    shape: TorusShape,
    vertices: Vec<VertexSpec>,
    edge_names: Vec<String>,
    tails: Vec<usize>,
    homology: Vec<IVec2>,
    rotations: Vec<Vec<Dart>>,
    rot_pos: Vec<usize>,
    faces: Vec<Face>,
    left_face: Vec<usize>,
    /// Lift offset of each dart's tail inside the canonical lift of its left
    /// face: that lift starts at the stored coordinate of the first boundary
    /// dart's tail, and the tail of `d` sits at `pos(tail d) + M·corner_shift[d]`.
    corner_shift: Vec<IVec2>,
}

impl TorusGraph {
    /// Validates and assembles a torus graph.
    ///
    /// `rotations[v]` lists the darts leaving `v` in counterclockwise order.
    /// Coordinates are reduced into the fundamental domain, with homology
    /// vectors adjusted so that every displacement is unchanged.
    pub fn build(
        shape: TorusShape,
        vertices: Vec<VertexSpec>,
        edges: Vec<EdgeSpec>,
        rotations: Vec<Vec<Dart>>,
    ) -> Result<TorusGraph> {
        let n = vertices.len();
        let m = edges.len();
        if n == 0 {
            return Err(Error::NotCellular("graph has no vertices".into()));
        }
        check_unique(vertices.iter().map(|v| v.name.as_str()), "vertex")?;
        check_unique(edges.iter().map(|e| e.name.as_str()), "edge")?;
        if let Some(v) = vertices.iter().find(|v| !v.position.is_finite()) {
            return Err(Error::MalformedMap(format!(
                "vertex {} has a non-finite coordinate",
                v.name
            )));
        }

        let mut tails = Vec::with_capacity(2 * m);
        let mut homology = Vec::with_capacity(2 * m);
        for e in &edges {
            if e.tail >= n || e.head >= n {
                return Err(Error::MalformedMap(format!(
                    "edge {} references a missing vertex",
                    e.name
                )));
            }
            tails.push(e.tail);
            tails.push(e.head);
            homology.push(e.homology);
            homology.push(-e.homology);
        }

        if rotations.len() != n {
            return Err(Error::MalformedMap(format!(
                "{} rotation records for {} vertices",
                rotations.len(),
                n
            )));
        }
        let mut seen = vec![false; 2 * m];
        let mut rotations = rotations;
        for (v, rot) in rotations.iter_mut().enumerate() {
            if rot.is_empty() {
                return Err(Error::NotCellular(format!(
                    "vertex {} is isolated",
                    vertices[v].name
                )));
            }
            for d in rot.iter() {
                let i = d.index();
                if i >= 2 * m {
                    return Err(Error::MalformedMap(format!("dart {i} does not exist")));
                }
                if seen[i] {
                    return Err(Error::MalformedMap(format!(
                        "dart {i} appears twice in the rotation system"
                    )));
                }
                seen[i] = true;
                if tails[i] != v {
                    return Err(Error::MalformedMap(format!(
                        "dart {i} listed at vertex {} but its tail is {}",
                        vertices[v].name, vertices[tails[i]].name
                    )));
                }
            }
            let start = rot
                .iter()
                .enumerate()
                .min_by_key(|(_, d)| **d)
                .map(|(i, _)| i)
                .unwrap_or(0);
            rot.rotate_left(start);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedMap(format!(
                "dart {i} missing from the rotation system"
            )));
        }

        // Reduce coordinates, compensating in the homology vectors.
        let mut vertices = vertices;
        let mut shift = vec![IVec2::ZERO; n];
        for (v, spec) in vertices.iter_mut().enumerate() {
            let (q, k) = reduce_lenient(spec.position, &shape, REDUCE_SLACK);
            spec.position = q;
            shift[v] = k;
        }
        for d in 0..2 * m {
            let head = tails[d ^ 1];
            homology[d] += shift[head] - shift[tails[d]];
        }

        let mut rot_pos = vec![0; 2 * m];
        for rot in &rotations {
            for (i, d) in rot.iter().enumerate() {
                rot_pos[d.index()] = i;
            }
        }

        let mut graph = TorusGraph {
            shape,
            vertices,
            edge_names: edges.into_iter().map(|e| e.name).collect(),
            tails,
            homology,
            rotations,
            rot_pos,
            faces: Vec::new(),
            left_face: vec![usize::MAX; 2 * m],
            corner_shift: vec![IVec2::ZERO; 2 * m],
        };
        graph.trace_faces();
        graph.validate_topology()?;
        Ok(graph)
    }

    /// Builds from raw dart permutations. Each reversal pair becomes an edge
    /// whose reference dart is the smaller input index; edges are numbered by
    /// first appearance and named `e0, e1, …`.
    pub fn from_darts(
        shape: TorusShape,
        vertices: Vec<VertexSpec>,
        darts: Vec<DartSpec>,
        rotations: Vec<Vec<usize>>,
    ) -> Result<TorusGraph> {
        let k = darts.len();
        for (i, d) in darts.iter().enumerate() {
            if d.reversal >= k {
                return Err(Error::MalformedMap(format!(
                    "reversal of dart {i} is out of range"
                )));
            }
            if d.reversal == i {
                return Err(Error::MalformedMap(format!("dart {i} is its own reversal")));
            }
            let r = &darts[d.reversal];
            if r.reversal != i {
                return Err(Error::MalformedMap(format!(
                    "reversal is not an involution at dart {i}"
                )));
            }
            if r.homology != -d.homology {
                return Err(Error::MalformedMap(format!(
                    "dart {i} and its reversal have non-opposite homology"
                )));
            }
        }
        let mut relabel = vec![usize::MAX; k];
        let mut edges = Vec::new();
        for (i, d) in darts.iter().enumerate() {
            if relabel[i] != usize::MAX {
                continue;
            }
            let e = edges.len();
            relabel[i] = 2 * e;
            relabel[d.reversal] = 2 * e + 1;
            edges.push(EdgeSpec::new(
                format!("e{e}"),
                d.tail,
                darts[d.reversal].tail,
                d.homology,
            ));
        }
        let rotations = rotations
            .into_iter()
            .map(|rot| {
                rot.into_iter()
                    .map(|i| {
                        relabel
                            .get(i)
                            .map(|&j| Dart(j))
                            .ok_or_else(|| Error::MalformedMap(format!("dart {i} does not exist")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TorusGraph::build(shape, vertices, edges, rotations)
    }

    /// Builds with the rotation system read off the geometry: darts around
    /// each vertex are sorted counterclockwise by displacement angle.
    pub fn from_geometry(
        shape: TorusShape,
        vertices: Vec<VertexSpec>,
        edges: Vec<EdgeSpec>,
    ) -> Result<TorusGraph> {
        let n = vertices.len();
        let mut around: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); n];
        for (e, spec) in edges.iter().enumerate() {
            if spec.tail >= n || spec.head >= n {
                return Err(Error::MalformedMap(format!(
                    "edge {} references a missing vertex",
                    spec.name
                )));
            }
            let delta = vertices[spec.head].position - vertices[spec.tail].position
                + shape.translation(spec.homology);
            around[spec.tail].push((delta.y.atan2(delta.x), Dart::reference(e)));
            around[spec.head].push(((-delta.y).atan2(-delta.x), Dart::reversal(e)));
        }
        let mut rotations = Vec::with_capacity(n);
        for (v, mut darts) in around.into_iter().enumerate() {
            darts.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in darts.windows(2) {
                if (w[1].0 - w[0].0).abs() < 1e-12 {
                    return Err(Error::MalformedMap(format!(
                        "darts {} and {} leave vertex {} in the same direction",
                        w[0].1.index(),
                        w[1].1.index(),
                        vertices[v].name
                    )));
                }
            }
            rotations.push(darts.into_iter().map(|(_, d)| d).collect());
        }
        TorusGraph::build(shape, vertices, edges, rotations)
    }

    /// Same map and homotopy class with new coordinates (re-reduced).
    pub fn with_positions(&self, positions: &[Vec2]) -> Result<TorusGraph> {
        self.with_shape_and_positions(self.shape, positions)
    }

    /// Same map with new torus shape and coordinates; homology vectors are
    /// carried over before reduction.
    pub fn with_shape_and_positions(
        &self,
        shape: TorusShape,
        positions: &[Vec2],
    ) -> Result<TorusGraph> {
        if positions.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} positions for {} vertices",
                positions.len(),
                self.vertex_count()
            )));
        }
        let vertices = self
            .vertices
            .iter()
            .zip(positions)
            .map(|(v, &p)| VertexSpec::new(v.name.clone(), p))
            .collect();
        TorusGraph::build(shape, vertices, self.edge_specs(), self.rotations.clone())
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        (0..self.edge_count())
            .map(|e| {
                let d = Dart::reference(e);
                EdgeSpec::new(
                    self.edge_names[e].clone(),
                    self.tail(d),
                    self.head(d),
                    self.homology(d),
                )
            })
            .collect()
    }

    fn trace_faces(&mut self) {
        let dart_count = self.dart_count();
        for start in 0..dart_count {
            if self.left_face[start] != usize::MAX {
                continue;
            }
            let id = self.faces.len();
            let mut boundary = Vec::new();
            let mut shift = IVec2::ZERO;
            let mut d = Dart(start);
            loop {
                self.left_face[d.index()] = id;
                self.corner_shift[d.index()] = shift;
                shift += self.homology[d.index()];
                boundary.push(d);
                d = self.face_next(d);
                if d.index() == start {
                    break;
                }
            }
            self.faces.push(Face { id, boundary });
        }
    }

    fn validate_topology(&self) -> Result<()> {
        // connectivity
        let n = self.vertex_count();
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(v) = queue.pop_front() {
            for d in &self.rotations[v] {
                let h = self.head(*d);
                if !reached[h] {
                    reached[h] = true;
                    queue.push_back(h);
                }
            }
        }
        if let Some(v) = reached.iter().position(|r| !r) {
            return Err(Error::NotCellular(format!(
                "vertex {} is disconnected from vertex {}",
                self.vertices[v].name, self.vertices[0].name
            )));
        }

        let euler = n as i64 - self.edge_count() as i64 + self.face_count() as i64;
        if euler != 0 {
            return Err(Error::NotCellular(format!(
                "V - E + F = {n} - {} + {} = {euler}, expected 0",
                self.edge_count(),
                self.face_count()
            )));
        }

        for face in &self.faces {
            let sum = face
                .boundary
                .iter()
                .fold(IVec2::ZERO, |acc, d| acc + self.homology(*d));
            if sum != IVec2::ZERO {
                return Err(Error::BadFaceHomology {
                    face: face.id,
                    hx: sum.x,
                    hy: sum.y,
                });
            }
        }

        let classes: Vec<IVec2> = self
            .fundamental_cycles()
            .iter()
            .map(|c| c.iter().fold(IVec2::ZERO, |acc, d| acc + self.homology(*d)))
            .collect();
        let spans = classes
            .iter()
            .enumerate()
            .any(|(i, a)| classes[i + 1..].iter().any(|b| a.x * b.y - a.y * b.x != 0));
        if !spans {
            return Err(Error::NotCellular(
                "cycle homology classes do not span the torus".into(),
            ));
        }
        Ok(())
    }

    pub fn shape(&self) -> &TorusShape {
        &self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn dart_count(&self) -> usize {
        self.tails.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart)
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v].name
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn position(&self, v: usize) -> Vec2 {
        self.vertices[v].position
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.vertices.iter().map(|v| v.position).collect()
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.tails[d.index()]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tails[d.rev().index()]
    }

    pub fn homology(&self, d: Dart) -> IVec2 {
        self.homology[d.index()]
    }

    /// Counterclockwise order of darts leaving `v`.
    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn rot_next(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.rot_pos[d.index()] + 1) % rot.len()]
    }

    pub fn rot_prev(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.rot_pos[d.index()] + rot.len() - 1) % rot.len()]
    }

    /// Next dart along the left face of `d`.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rot_prev(d.rev())
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn left_face(&self, d: Dart) -> usize {
        self.left_face[d.index()]
    }

    pub fn right_face(&self, d: Dart) -> usize {
        self.left_face[d.rev().index()]
    }

    /// `Δ_{p→q} = ⟨q⟩ − ⟨p⟩ + M[p→q]`.
    pub fn displacement(&self, d: Dart) -> Vec2 {
        self.position(self.head(d)) - self.position(self.tail(d))
            + self.shape.translation(self.homology(d))
    }

    /// Columns are the displacements of the reference darts.
    pub fn displacement_matrix(&self) -> Vec<Vec2> {
        (0..self.edge_count())
            .map(|e| self.displacement(Dart::reference(e)))
            .collect()
    }

    /// Columns are the homology vectors of the reference darts (`Λ`).
    pub fn homology_matrix(&self) -> Vec<IVec2> {
        (0..self.edge_count())
            .map(|e| self.homology(Dart::reference(e)))
            .collect()
    }

    /// Position of the tail of `d` in the canonical lift of its left face.
    pub fn corner(&self, d: Dart) -> Vec2 {
        self.position(self.tail(d)) + self.shape.translation(self.corner_shift[d.index()])
    }

    pub fn corner_shift(&self, d: Dart) -> IVec2 {
        self.corner_shift[d.index()]
    }

    /// Corners of the canonical lift of face `f`, in boundary order.
    pub fn face_corners(&self, f: usize) -> Vec<Vec2> {
        self.faces[f]
            .boundary
            .iter()
            .map(|d| self.corner(*d))
            .collect()
    }

    /// The canonical lift of `right_face(d)`, translated by `M·n`, shares the
    /// lift of `d` with the canonical lift of `left_face(d)`. Returns `n`.
    pub fn neighbor_offset(&self, d: Dart) -> IVec2 {
        self.corner_shift[d.index()] + self.homology(d) - self.corner_shift[d.rev().index()]
    }

    /// Fundamental cycles of a breadth-first spanning tree rooted at vertex 0,
    /// one per non-tree edge, each a closed walk whose last dart is followed
    /// by its first.
    pub fn fundamental_cycles(&self) -> Vec<Vec<Dart>> {
        let n = self.vertex_count();
        let mut parent: Vec<Option<Dart>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree_edge = vec![false; self.edge_count()];
        depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &d in &self.rotations[v] {
                let h = self.head(d);
                if depth[h] == usize::MAX {
                    depth[h] = depth[v] + 1;
                    parent[h] = Some(d);
                    tree_edge[d.edge()] = true;
                    queue.push_back(h);
                }
            }
        }
        let path_up = |mut v: usize| -> Vec<Dart> {
            // darts from root down to v
            let mut path = Vec::new();
            while let Some(d) = parent[v] {
                path.push(d);
                v = self.tail(d);
            }
            path.reverse();
            path
        };
        let mut cycles = Vec::new();
        for e in 0..self.edge_count() {
            if tree_edge[e] {
                continue;
            }
            let d = Dart::reference(e);
            let to_tail = path_up(self.tail(d));
            let to_head = path_up(self.head(d));
            let common = to_tail
                .iter()
                .zip(&to_head)
                .take_while(|(a, b)| a == b)
                .count();
            let mut cycle: Vec<Dart> = to_tail[common..].to_vec();
            cycle.push(d);
            cycle.extend(to_head[common..].iter().rev().map(|x| x.rev()));
            cycles.push(cycle);
        }
        cycles
    }

    /// A plane patch of the universal cover covering the lattice translations
    /// in `range`.
    pub fn universal_cover_patch(&self, range: PatchRange) -> PlanePatch {
        let mut index = HashMap::new();
        let mut vertices = Vec::new();
        for kx in range.min.x..=range.max.x {
            for ky in range.min.y..=range.max.y {
                let k = IVec2::new(kx, ky);
                for v in 0..self.vertex_count() {
                    index.insert((v, k), vertices.len());
                    vertices.push(PatchVertex {
                        source: v,
                        translation: k,
                        position: self.position(v) + self.shape.translation(k),
                    });
                }
            }
        }
        let mut edges = Vec::new();
        for kx in range.min.x..=range.max.x {
            for ky in range.min.y..=range.max.y {
                let k = IVec2::new(kx, ky);
                for e in 0..self.edge_count() {
                    let d = Dart::reference(e);
                    let a = index[&(self.tail(d), k)];
                    if let Some(&b) = index.get(&(self.head(d), k + self.homology(d))) {
                        edges.push(PatchEdge {
                            edge: e,
                            from: a,
                            to: b,
                        });
                    }
                }
            }
        }
        PlanePatch { vertices, edges }
    }

    /// Finite certificates for essential simplicity and essential
    /// 3-connectivity of the universal cover.
    ///
    /// Simplicity is exact: a loop in the cover is an edge with equal
    /// endpoints and zero homology, and parallel edges in the cover share
    /// `(tail, head, homology)` up to reversal. 3-connectivity is checked on
    /// the 3×3 wraparound covering graph, which is only a certificate while
    /// every homology entry stays within ±1 (`window_limited` otherwise).
    pub fn check_essential(&self) -> EssentialReport {
        let mut lifts = BTreeSet::new();
        let mut simple = true;
        for e in 0..self.edge_count() {
            let d = Dart::reference(e);
            let (t, h, k) = (self.tail(d), self.head(d), self.homology(d));
            if t == h && k == IVec2::ZERO {
                simple = false;
                break;
            }
            let key = (t, h, k).min((h, t, -k));
            if !lifts.insert(key) {
                simple = false;
                break;
            }
        }
        let window_limited = self.homology.iter().any(|h| h.max_abs() > 1);
        EssentialReport {
            essentially_simple: simple,
            essentially_3_connected: self.wraparound_cover_is_3_connected(3),
            window_limited,
        }
    }

    fn wraparound_cover_is_3_connected(&self, k: i64) -> bool {
        let cells = (k * k) as usize;
        let n = self.vertex_count() * cells;
        let id = |v: usize, t: IVec2| -> usize {
            let x = t.x.rem_euclid(k);
            let y = t.y.rem_euclid(k);
            v * cells + (x * k + y) as usize
        };
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for x in 0..k {
            for y in 0..k {
                let t = IVec2::new(x, y);
                for e in 0..self.edge_count() {
                    let d = Dart::reference(e);
                    let a = id(self.tail(d), t);
                    let b = id(self.head(d), t + self.homology(d));
                    if a != b {
                        adj[a].insert(b);
                        adj[b].insert(a);
                    }
                }
            }
        }
        let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
        is_3_connected(&adj)
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in names {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::MalformedMap(format!("invalid {what} name {name:?}")));
        }
        if !seen.insert(name) {
            return Err(Error::MalformedMap(format!("duplicate {what} name {name}")));
        }
    }
    Ok(())
}

/// Simple-graph 3-connectivity: at least four vertices, and connected after
/// deleting any one vertex with no articulation point left.
fn is_3_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n < 4 {
        return false;
    }
    (0..n).all(|removed| biconnected_without(adj, removed))
}

fn biconnected_without(adj: &[Vec<usize>], removed: usize) -> bool {
    let n = adj.len();
    let root = if removed == 0 { 1 } else { 0 };
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut visited = 0;
    // iterative Tarjan: (vertex, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    disc[root] = time;
    low[root] = time;
    time += 1;
    visited += 1;
    let mut root_children = 0;
    while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
        if *next < adj[v].len() {
            let w = adj[v][*next];
            *next += 1;
            if w == removed || w == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = time;
                low[w] = time;
                time += 1;
                visited += 1;
                if v == root {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != root && low[v] >= disc[p] {
                    return false;
                }
            }
        }
    }
    visited == n - 1 && root_children <= 1
}

/// Inclusive box of lattice translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchRange {
    pub min: IVec2,
    pub max: IVec2,
}

impl PatchRange {
    /// Translations `[0, k)²`.
    pub fn square(k: i64) -> Self {
        PatchRange {
            min: IVec2::ZERO,
            max: IVec2::new(k - 1, k - 1),
        }
    }

    /// Translations `[-r, r]²`.
    pub fn centered(r: i64) -> Self {
        PatchRange {
            min: IVec2::new(-r, -r),
            max: IVec2::new(r, r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchVertex {
    pub source: usize,
    pub translation: IVec2,
    pub position: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchEdge {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
}

/// Finite piece of the universal cover: straight-line plane graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePatch {
    pub vertices: Vec<PatchVertex>,
    pub edges: Vec<PatchEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EssentialReport {
    pub essentially_simple: bool,
    pub essentially_3_connected: bool,
    /// Some homology entry exceeds 1 in absolute value, so the 3×3 window may
    /// be too small to certify 3-connectivity.
    pub window_limited: bool,
}

impl EssentialReport {
    pub fn is_valid(&self) -> bool {
        self.essentially_simple && self.essentially_3_connected
    }
}

/// The dual map `G*`. Dual vertex `f` is face `f` of the primal, and dual dart
/// `i` is `d*` for primal dart `i`: it runs from `right_face(d)` to
/// `left_face(d)`, i.e. `d` turned counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DualEmbedding {
    pub graph: TorusGraph,
}

impl DualEmbedding {
    pub fn dual_dart(&self, primal: Dart) -> Dart {
        primal
    }

    pub fn primal_face(&self, dual_vertex: usize) -> usize {
        dual_vertex
    }
}

/// The natural dual: each dual vertex at the centroid of the canonical lift
/// of its face, homotopic to the dual drawn through edge midpoints.
pub fn dual(g: &TorusGraph) -> Result<DualEmbedding> {
    let centroids = (0..g.face_count())
        .map(|f| {
            let corners = g.face_corners(f);
            let sum = corners.iter().fold(Vec2::ZERO, |acc, c| acc + *c);
            sum * (1.0 / corners.len() as f64)
        })
        .collect::<Vec<_>>();
    Ok(DualEmbedding {
        graph: dual_with_positions(g, *g.shape(), &centroids)?,
    })
}

/// Dual map with dual vertex `f` placed at `positions[f]`, interpreted in the
/// frame of the canonical lift of face `f` (on `shape`'s lattice).
pub(crate) fn dual_with_positions(
    g: &TorusGraph,
    shape: TorusShape,
    positions: &[Vec2],
) -> Result<TorusGraph> {
    let vertices = positions
        .iter()
        .enumerate()
        .map(|(f, p)| VertexSpec::new(format!("f{f}"), *p))
        .collect();
    let edges = (0..g.edge_count())
        .map(|e| {
            let d = Dart::reference(e);
            EdgeSpec::new(
                format!("{}*", g.edge_name(e)),
                g.right_face(d),
                g.left_face(d),
                -g.neighbor_offset(d),
            )
        })
        .collect();
    let rotations = g
        .faces()
        .iter()
        .map(|f| f.boundary.iter().map(|b| b.rev()).collect())
        .collect();
    TorusGraph::build(shape, vertices, edges, rotations)
}
