//! Projective planes PG(2,q), their incidence (Levi) graphs, and rotational
//! Hamilton cycles.
//!
//! Points are one-dimensional subspaces of GF(q)^3 and lines are kernels of
//! nonzero dual functionals; both are stored as normalized coordinate
//! triples (first nonzero coordinate scaled to 1). The Levi graph L_q puts
//! points on one side, lines on the other, and joins incident pairs; it is
//! (q+1)-regular, bipartite and has girth 6.
//!
//! A Hamilton cycle v_0 v_1 ... v_{n-1} in L_q is rotational when shifting
//! every index by 2 is a graph automorphism. Such cycles exist for every
//! prime power q: walk the powers of a primitive element alpha of GF(q^3),
//! taking p_i as the projective class of alpha^i and l_i as the line
//! spanned by alpha^i and alpha^{i+1}.

use std::collections::HashMap;

use crate::bitset::Bitset;
use crate::error::Error;
use crate::field::{CubicExtension, FieldTable, PrimePower};

/// Default cap on the plane order q.
pub const DEFAULT_PLANE_CAP: u64 = 32;

/// A point of PG(2,q): a normalized coordinate triple over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: [u64; 3],
}

impl ProjectivePoint {
    pub fn coords(&self) -> [u64; 3] {
        self.coords
    }
}

/// A line of PG(2,q): its sorted incident point indices plus the normalized
/// dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveLine {
    point_ids: Vec<usize>,
    dual_coords: [u64; 3],
}

impl ProjectiveLine {
    pub fn point_ids(&self) -> &[usize] {
        &self.point_ids
    }

    pub fn dual_coords(&self) -> [u64; 3] {
        self.dual_coords
    }
}

/// The Desarguesian projective plane of order q.
#[derive(Clone, Debug)]
pub struct IncidencePlane {
    q: u64,
    field: FieldTable,
    points: Vec<ProjectivePoint>,
    lines: Vec<ProjectiveLine>,
    point_index: HashMap<[u64; 3], usize>,
    line_index: HashMap<[u64; 3], usize>,
}

/// Builds PG(2,q) for a prime power q.
pub fn build_plane(q: u64) -> Result<IncidencePlane, Error> {
    build_plane_with_cap(q, DEFAULT_PLANE_CAP)
}

pub fn build_plane_with_cap(q: u64, cap: u64) -> Result<IncidencePlane, Error> {
    if q > cap {
        return Err(Error::PlaneTooLarge { q, cap });
    }
    let pp = PrimePower::factor(q).ok_or(Error::NotPrimePower(q))?;
    let field = FieldTable::new(pp)?;
    Ok(IncidencePlane::from_field(field))
}

impl IncidencePlane {
    fn from_field(field: FieldTable) -> Self {
        let q = field.order();
        // Canonical representatives in lexicographic order of the coordinate
        // encodings: (0,0,1), (0,1,b), (1,a,b).
        let mut points = Vec::with_capacity((q * q + q + 1) as usize);
        points.push(ProjectivePoint { coords: [0, 0, 1] });
        for b in 0..q {
            points.push(ProjectivePoint { coords: [0, 1, b] });
        }
        for a in 0..q {
            for b in 0..q {
                points.push(ProjectivePoint { coords: [1, a, b] });
            }
        }
        points.sort();
        let point_index: HashMap<_, _> =
            points.iter().enumerate().map(|(i, pt)| (pt.coords, i)).collect();

        let mut lines = Vec::with_capacity(points.len());
        let mut line_index = HashMap::new();
        for dual in points.iter().map(|pt| pt.coords) {
            let point_ids: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, pt)| dot(&field, dual, pt.coords) == 0)
                .map(|(i, _)| i)
                .collect();
            debug_assert_eq!(point_ids.len(), (q + 1) as usize);
            line_index.insert(dual, lines.len());
            lines.push(ProjectiveLine { point_ids, dual_coords: dual });
        }

        IncidencePlane { q, field, points, lines, point_index, line_index }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjectiveLine] {
        &self.lines
    }

    /// Number of points (and of lines): q^2 + q + 1.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Normalizes an arbitrary nonzero coordinate triple to its canonical
    /// projective representative.
    pub fn normalize(&self, coords: [u64; 3]) -> [u64; 3] {
        normalize(&self.field, coords)
    }

    pub fn point_id(&self, coords: [u64; 3]) -> Option<usize> {
        self.point_index.get(&self.normalize(coords)).copied()
    }

    pub fn line_id(&self, dual: [u64; 3]) -> Option<usize> {
        self.line_index.get(&self.normalize(dual)).copied()
    }

    /// The unique line through two distinct points, as a line index.
    pub fn line_through(&self, a: [u64; 3], b: [u64; 3]) -> Option<usize> {
        let c = cross(&self.field, a, b);
        if c == [0, 0, 0] {
            return None;
        }
        self.line_id(c)
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        dot(&self.field, self.lines[line].dual_coords, self.points[point].coords) == 0
    }

    /// Text dump: header, then one row of sorted point indices per line.
    pub fn dump(&self) -> String {
        let mut out = format!("plane q={}\n", self.q);
        for line in &self.lines {
            let ids: Vec<String> = line.point_ids.iter().map(|i| i.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

fn normalize(field: &FieldTable, coords: [u64; 3]) -> [u64; 3] {
    let lead = coords.iter().copied().find(|&c| c != 0);
    match lead {
        None => [0, 0, 0],
        Some(c) => {
            let inv = field.inv(c).expect("lead coordinate is nonzero");
            [field.mul(inv, coords[0]), field.mul(inv, coords[1]), field.mul(inv, coords[2])]
        }
    }
}

fn dot(field: &FieldTable, a: [u64; 3], b: [u64; 3]) -> u64 {
    let mut acc = 0;
    for i in 0..3 {
        acc = field.add(acc, field.mul(a[i], b[i]));
    }
    acc
}

fn cross(field: &FieldTable, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
    [
        field.sub(field.mul(a[1], b[2]), field.mul(a[2], b[1])),
        field.sub(field.mul(a[2], b[0]), field.mul(a[0], b[2])),
        field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0])),
    ]
}

/// 3x3 determinant over GF(q); zero exactly when the rows are linearly
/// dependent.
pub fn det3(field: &FieldTable, rows: [[u64; 3]; 3]) -> u64 {
    dot(field, rows[0], cross(field, rows[1], rows[2]))
}

/// Which side of the bipartition a Levi-graph vertex lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Point,
    Line,
}

/// The incidence graph of a projective plane, with bitset adjacency.
#[derive(Clone, Debug)]
pub struct LeviGraph {
    n: usize,
    adj: Vec<Bitset>,
    side: Vec<Side>,
}

/// Builds the Levi graph of a plane: vertices 0..size are points,
/// size..2*size are lines.
pub fn levi_graph(plane: &IncidencePlane) -> LeviGraph {
    LeviGraph::from_plane(plane)
}

impl LeviGraph {
    pub fn from_plane(plane: &IncidencePlane) -> Self {
        let size = plane.size();
        let n = 2 * size;
        let mut adj = vec![Bitset::new(n); n];
        for (li, line) in plane.lines().iter().enumerate() {
            for &pi in line.point_ids() {
                adj[pi].insert(size + li);
                adj[size + li].insert(pi);
            }
        }
        let mut side = vec![Side::Point; n];
        for s in side.iter_mut().skip(size) {
            *s = Side::Line;
        }
        LeviGraph { n, adj, side }
    }

    /// Builds a graph from an explicit edge list; edges must be simple and
    /// must join the two sides.
    pub fn from_edges(side: Vec<Side>, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let n = side.len();
        let mut adj = vec![Bitset::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::SizeMismatch { expected: n, got: u.max(v) + 1 });
            }
            if u == v || side[u] == side[v] {
                return Err(Error::BadStarOffsets(format!(
                    "edge ({u}, {v}) does not join the two sides"
                )));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(LeviGraph { n, adj, side })
    }

    /// Builds the cyclic (Singer) model of L_q from the adjacency offsets of
    /// even positions: vertices are cycle positions, even positions are
    /// points, and position i is joined to i+d for every offset d.
    ///
    /// The offsets must be the star pattern of a rotational labeling: odd,
    /// distinct, containing 1 and n-1, q+1 of them, and mapping through
    /// a = (d-1)/2 to a planar difference set mod q^2+q+1.
    pub fn from_star_offsets(q: u64, offsets: &[usize]) -> Result<Self, Error> {
        let classes = (q * q + q + 1) as usize;
        let n = 2 * classes;
        if offsets.len() != (q + 1) as usize {
            return Err(Error::BadStarOffsets(format!(
                "expected {} offsets for q={q}, got {}",
                q + 1,
                offsets.len()
            )));
        }
        let mut seen = vec![false; n];
        for &d in offsets {
            if d == 0 || d >= n {
                return Err(Error::BadStarOffsets(format!("offset {d} out of range")));
            }
            if d % 2 == 0 {
                return Err(Error::BadStarOffsets(format!(
                    "offset {d} is even; incidences join opposite parities"
                )));
            }
            if seen[d] {
                return Err(Error::BadStarOffsets(format!("offset {d} repeated")));
            }
            seen[d] = true;
        }
        if !seen[1] || !seen[n - 1] {
            return Err(Error::BadStarOffsets(
                "offsets must contain 1 and n-1 (the Hamilton-cycle edges)".into(),
            ));
        }
        let residues = star_offset_residues(n, offsets);
        if !is_planar_difference_set(classes as u64, &residues) {
            return Err(Error::BadStarOffsets(format!(
                "residues {residues:?} are not a planar difference set mod {classes}"
            )));
        }

        let mut adj = vec![Bitset::new(n); n];
        for i in (0..n).step_by(2) {
            for &d in offsets {
                let j = (i + d) % n;
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        let side = (0..n)
            .map(|i| if i % 2 == 0 { Side::Point } else { Side::Line })
            .collect();
        Ok(LeviGraph { n, adj, side })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbours(&self, u: usize) -> &Bitset {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count()
    }

    pub fn side(&self, u: usize) -> Side {
        self.side[u]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|b| b.count()).sum::<usize>() / 2
    }

    /// Sorted edge list with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS distances from a start vertex; unreachable vertices get usize::MAX.
    pub fn bfs_distances(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in self.adj[u].iter() {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Text dump: header, then the sorted edge list.
    pub fn dump(&self) -> String {
        let mut out = format!("graph n={}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// A vertex ordering realizing a rotational Hamilton cycle, together with
/// the adjacency offsets of position 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicLabeling {
    order: Vec<usize>,
    offsets: Vec<usize>,
}

impl CyclicLabeling {
    pub fn new(order: Vec<usize>, offsets: Vec<usize>) -> Self {
        CyclicLabeling { order, offsets }
    }

    /// The identity labeling of a graph whose vertices already are cycle
    /// positions, as produced by [`LeviGraph::from_star_offsets`].
    pub fn identity(graph: &LeviGraph) -> Self {
        let order: Vec<usize> = (0..graph.n()).collect();
        let offsets = (1..graph.n()).filter(|&d| graph.adjacent(0, d)).collect();
        CyclicLabeling { order, offsets }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Adjacency offsets of position 0 (all odd, q+1 of them).
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }
}

/// The full output of the rotational-cycle construction.
#[derive(Clone, Debug)]
pub struct RotationalSystem {
    pub plane: IncidencePlane,
    pub levi: LeviGraph,
    pub labeling: CyclicLabeling,
    pub extension: CubicExtension,
}

/// Builds GF(q^3) over GF(q), takes p_i as the projective class of alpha^i
/// and l_i as the line through alpha^i and alpha^{i+1} (indices mod
/// q^2+q+1), and interleaves them into a Hamilton cycle of L_q.
pub fn rotational_system(q: u64) -> Result<RotationalSystem, Error> {
    let plane = build_plane(q)?;
    let extension = CubicExtension::new(plane.field().clone())?;
    let classes = plane.size();

    let mut order = Vec::with_capacity(2 * classes);
    for i in 0..classes {
        let here = extension.alpha_power(i as i64);
        let next = extension.alpha_power((i as i64 + 1) % classes as i64);
        let point = plane.point_id(here).expect("alpha power is a nonzero vector");
        let line = plane
            .line_through(here, next)
            .expect("consecutive alpha powers span a line");
        order.push(point);
        order.push(classes + line);
    }

    let levi = LeviGraph::from_plane(&plane);
    let offsets: Vec<usize> =
        (1..levi.n()).filter(|&d| levi.adjacent(order[0], order[d])).collect();
    let labeling = CyclicLabeling { order, offsets };
    debug_assert_eq!(verify_rotational(&levi, &labeling), Ok(true));
    Ok(RotationalSystem { plane, levi, labeling, extension })
}

/// The rotational Hamilton cycle of L_q.
pub fn rotational_cycle(q: u64) -> Result<CyclicLabeling, Error> {
    Ok(rotational_system(q)?.labeling)
}

/// Exhaustively checks that a labeling is a Hamilton cycle and that
/// shifting all positions by 2 preserves adjacency.
pub fn verify_rotational(graph: &LeviGraph, labeling: &CyclicLabeling) -> Result<bool, Error> {
    let n = graph.n();
    if labeling.order.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: labeling.order.len() });
    }
    let mut seen = vec![false; n];
    for &v in &labeling.order {
        if v >= n || seen[v] {
            return Err(Error::NotPermutation);
        }
        seen[v] = true;
    }
    let at = |i: usize| labeling.order[i % n];
    for i in 0..n {
        if !graph.adjacent(at(i), at(i + 1)) {
            return Ok(false);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if graph.adjacent(at(i), at(j)) != graph.adjacent(at(i + 2), at(j + 2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when every nonzero residue mod `modulus` arises exactly once as a
/// difference of two set elements.
pub fn is_planar_difference_set(modulus: u64, residues: &[u64]) -> bool {
    assert!(residues.iter().all(|&r| r < modulus), "residues must lie in [0, modulus)");
    let mut counts = vec![0u32; modulus as usize];
    for &a in residues {
        for &b in residues {
            if a != b {
                counts[((a + modulus - b) % modulus) as usize] += 1;
            }
        }
    }
    counts.iter().skip(1).all(|&c| c == 1)
}

/// Maps star offsets d of a rotational labeling on n positions to residues
/// a = (d-1)/2 mod n/2, the line indices adjacent to point 0.
pub fn star_offset_residues(n: usize, offsets: &[usize]) -> Vec<u64> {
    let classes = (n / 2) as u64;
    let mut out: Vec<u64> = offsets
        .iter()
        .map(|&d| {
            debug_assert!(d % 2 == 1);
            ((d as u64 - 1) / 2) % classes
        })
        .collect();
    out.sort_unstable();
    out
}

/// Exhaustive BFS statistics of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    /// Common degree, when the graph is regular.
    pub regularity: Option<usize>,
    pub bipartite: bool,
    /// None means acyclic (infinite girth).
    pub girth: Option<usize>,
    /// None means disconnected (infinite diameter).
    pub diameter: Option<usize>,
}

pub fn graph_stats(graph: &LeviGraph) -> GraphStats {
    let n = graph.n();
    let degrees: Vec<usize> = (0..n).map(|u| graph.degree(u)).collect();
    let regularity = match degrees.first() {
        Some(&d) if degrees.iter().all(|&e| e == d) => Some(d),
        _ => None,
    };

    // 2-colour BFS over every component.
    let mut colour = vec![2u8; n];
    let mut bipartite = true;
    for s in 0..n {
        if colour[s] != 2 {
            continue;
        }
        colour[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in graph.neighbours(u).iter() {
                if colour[v] == 2 {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                } else if colour[v] == colour[u] {
                    bipartite = false;
                }
            }
        }
    }

    let mut girth = usize::MAX;
    let mut diameter = 0usize;
    let mut connected = true;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in graph.neighbours(u).iter() {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if v != parent[u] {
                    girth = girth.min(dist[u] + dist[v] + 1);
                }
            }
        }
        for &d in &dist {
            if d == usize::MAX {
                connected = false;
            } else {
                diameter = diameter.max(d);
            }
        }
    }

    GraphStats {
        vertices: n,
        edges: graph.edge_count(),
        regularity,
        bipartite,
        girth: (girth != usize::MAX).then_some(girth),
        diameter: connected.then_some(diameter),
    }
}
