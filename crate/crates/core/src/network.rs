//! Plane Euclidean networks, locus addressing and segment insertion.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    self, dist_f, line_intersection, orient, point_on_segment, seg_intersect, tol, Intersection, Point,
    PointJson, Rational, SegmentGeom,
};

pub type EdgeId = usize;

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: u64,
    pub point: Point,
    xy: [f64; 2],
    /// Original decimal strings, echoed on output.
    text: Option<(String, String)>,
}

impl Vertex {
    pub fn xy(&self) -> [f64; 2] {
        self.xy
    }
}

/// An edge with canonical orientation `u < v` (vertex indices, which follow id order).
#[derive(Clone, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
    /// Index of the straight carrier this edge is a piece of.
    pub carrier: usize,
}

/// Where a carrier line came from: an edge of the network as first built,
/// or the k-th segment inserted since.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierOrigin {
    Base(EdgeId),
    Inserted(usize),
}

#[derive(Clone, Debug)]
pub struct Carrier {
    pub a: Point,
    pub b: Point,
    pub origin: CarrierOrigin,
}

#[derive(Clone, Debug)]
pub struct Network {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    carriers: Vec<Carrier>,
    adjacency: Vec<Vec<(usize, EdgeId)>>,
    index_of: HashMap<u64, usize>,
}

/// A point of the locus: position `t` along edge `edge` from its `u` end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub edge: EdgeId,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateVertex { a: u64, b: u64 },
    ZeroLengthEdge { u: u64, v: u64 },
    DuplicateEdge { u: u64, v: u64 },
    Crossing { e1: [u64; 2], e2: [u64; 2], at: PointJson },
    Overlap { e1: [u64; 2], e2: [u64; 2] },
    VertexOnEdge { vertex: u64, edge: [u64; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub components: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The host object an exact point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Host {
    Vertex(usize),
    Edge(EdgeId),
}

impl Network {
    /// Builds a network without geometric validation; see [`Network::validate`].
    pub fn new(vertices: Vec<(u64, Point)>, edges: Vec<(u64, u64)>) -> Result<Self> {
        let vs = vertices
            .into_iter()
            .map(|(id, point)| Vertex { id, xy: point.to_f64(), point, text: None })
            .collect();
        Self::assemble(vs, edges, None)
    }

    /// Builds and rejects anything `validate` complains about.
    pub fn new_valid(vertices: Vec<(u64, Point)>, edges: Vec<(u64, u64)>) -> Result<Self> {
        let net = Self::new(vertices, edges)?;
        let report = net.validate();
        if !report.is_valid() {
            return Err(Error::InvalidNetwork(report.violations));
        }
        Ok(net)
    }

    fn assemble(mut vertices: Vec<Vertex>, edges: Vec<(u64, u64)>, carriers: Option<Vec<Carrier>>) -> Result<Self> {
        vertices.sort_by_key(|v| v.id);
        let mut index_of = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index_of.insert(v.id, i).is_some() {
                return Err(Error::DuplicateVertexId(v.id));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index_of.get(&a).ok_or(Error::UnknownVertex(a))?;
            let ib = *index_of.get(&b).ok_or(Error::UnknownVertex(b))?;
            pairs.push((ia.min(ib), ia.max(ib)));
        }
        Self::from_index_edges(vertices, index_of, pairs.into_iter().map(|(u, v)| (u, v, None)).collect(), carriers)
    }

    fn from_index_edges(
        vertices: Vec<Vertex>,
        index_of: HashMap<u64, usize>,
        mut edges: Vec<(usize, usize, Option<usize>)>,
        carriers: Option<Vec<Carrier>>,
    ) -> Result<Self> {
        edges.sort_by_key(|&(u, v, _)| (u, v));
        let base = carriers.is_none();
        let mut carriers = carriers.unwrap_or_default();
        let mut out = Vec::with_capacity(edges.len());
        for (i, (u, v, c)) in edges.into_iter().enumerate() {
            let carrier = match c {
                Some(c) => c,
                None => {
                    debug_assert!(base);
                    carriers.push(Carrier {
                        a: vertices[u].point.clone(),
                        b: vertices[v].point.clone(),
                        origin: CarrierOrigin::Base(i),
                    });
                    carriers.len() - 1
                }
            };
            out.push(Edge { u, v, len: dist_f(vertices[u].xy, vertices[v].xy), carrier });
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (i, e) in out.iter().enumerate() {
            adjacency[e.u].push((e.v, i));
            if e.v != e.u {
                adjacency[e.v].push((e.u, i));
            }
        }
        Ok(Network { vertices, edges: out, carriers, adjacency, index_of })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn carriers(&self) -> &[Carrier] {
        &self.carriers
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: u64) -> Option<usize> {
        self.index_of.get(&id).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e).ok_or(Error::UnknownEdge(e))
    }

    /// Neighbours of vertex index `v` with the connecting edge ids.
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn pendant_count(&self) -> usize {
        (0..self.vertices.len()).filter(|&v| self.degree(v) == 1).count()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.len).sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.len).fold(0.0, f64::max)
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    pub fn edge_id_between(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.adjacency[a].iter().find(|&&(n, _)| n == b).map(|&(_, e)| e)
    }

    pub fn edge_segment(&self, e: EdgeId) -> SegmentGeom {
        let edge = &self.edges[e];
        SegmentGeom { a: self.vertices[edge.u].point.clone(), b: self.vertices[edge.v].point.clone() }
    }

    /// Reports duplicate vertices, zero-length and duplicate edges, crossings and
    /// vertices lying in edge interiors. Disconnection is reported, not a violation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let ids = |e: &Edge| [self.vertices[e.u].id, self.vertices[e.v].id];
        let mut seen: HashMap<&Point, u64> = HashMap::new();
        for v in &self.vertices {
            if let Some(&other) = seen.get(&v.point) {
                violations.push(Violation::DuplicateVertex { a: other, b: v.id });
            } else {
                seen.insert(&v.point, v.id);
            }
        }
        let mut edge_seen = std::collections::HashSet::new();
        for e in &self.edges {
            if self.vertices[e.u].point == self.vertices[e.v].point {
                let [u, v] = ids(e);
                violations.push(Violation::ZeroLengthEdge { u, v });
            }
            if !edge_seen.insert((e.u, e.v)) {
                let [u, v] = ids(e);
                violations.push(Violation::DuplicateEdge { u, v });
            }
        }
        for i in 0..self.edges.len() {
            let ei = &self.edges[i];
            if ei.u == ei.v {
                continue;
            }
            let si = self.edge_segment(i);
            for j in i + 1..self.edges.len() {
                let ej = &self.edges[j];
                if ej.u == ej.v || (ei.u, ei.v) == (ej.u, ej.v) {
                    continue;
                }
                let shared = [ei.u, ei.v].into_iter().find(|x| *x == ej.u || *x == ej.v);
                match seg_intersect(&si, &self.edge_segment(j)) {
                    Intersection::Empty => {}
                    Intersection::Point(p) => {
                        let ok = shared.is_some_and(|s| self.vertices[s].point == p);
                        if !ok {
                            violations.push(Violation::Crossing { e1: ids(ei), e2: ids(ej), at: (&p).into() });
                        }
                    }
                    Intersection::Overlap(_) => {
                        violations.push(Violation::Overlap { e1: ids(ei), e2: ids(ej) });
                    }
                }
            }
            for (k, v) in self.vertices.iter().enumerate() {
                if k != ei.u && k != ei.v && point_on_segment(&v.point, &si.a, &si.b) {
                    violations.push(Violation::VertexOnEdge { vertex: v.id, edge: ids(ei) });
                }
            }
        }
        ValidationReport { violations, components: self.components().len() }
    }

    /// Connected components as sorted lists of vertex ids.
    pub fn components(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![s];
            comp[s] = c;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(self.vertices[x].id);
                for &(y, _) in &self.adjacency[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    fn check_locus(&self, p: &LocusPoint) -> Result<&Edge> {
        let e = self.edge(p.edge)?;
        if !(0.0..=1.0).contains(&p.t) {
            return Err(Error::ParameterOutOfRange(p.t));
        }
        Ok(e)
    }

    /// Floating coordinates of a locus point.
    pub fn locus_xy(&self, p: &LocusPoint) -> Result<[f64; 2]> {
        let e = self.check_locus(p)?;
        let (a, b) = (self.vertices[e.u].xy, self.vertices[e.v].xy);
        Ok([a[0] + p.t * (b[0] - a[0]), a[1] + p.t * (b[1] - a[1])])
    }

    /// Exact coordinates `u + t (v - u)`, with `t` taken as its exact binary value.
    pub fn locus_coords(&self, p: &LocusPoint) -> Result<Point> {
        let e = self.check_locus(p)?;
        let (a, b) = (&self.vertices[e.u].point, &self.vertices[e.v].point);
        if p.t == 0.0 {
            return Ok(a.clone());
        }
        if p.t == 1.0 {
            return Ok(b.clone());
        }
        Ok(a.lerp(b, &geom::rational_from_f64(p.t)?))
    }

    /// Exact coordinates of (approximately) `p`, placed on its edge's carrier
    /// at a dyadic parameter so that coordinate sizes stay small. Vertices map
    /// to themselves.
    pub fn locus_coords_dyadic(&self, p: &LocusPoint) -> Result<Point> {
        if let Some(v) = self.locus_vertex(p) {
            self.check_locus(p)?;
            return Ok(self.vertices[v].point.clone());
        }
        let e = self.check_locus(p)?;
        let c = &self.carriers[e.carrier];
        let lam = (carrier_param(c, self.locus_xy(p)?) * DYADIC).round() / DYADIC;
        Ok(c.a.lerp(&c.b, &geom::rational_from_f64(lam)?))
    }

    /// Vertex index if the locus point sits on a vertex.
    pub fn locus_vertex(&self, p: &LocusPoint) -> Option<usize> {
        let e = self.edges.get(p.edge)?;
        if p.t == 0.0 {
            Some(e.u)
        } else if p.t == 1.0 {
            Some(e.v)
        } else {
            None
        }
    }

    /// Locus point of a vertex: smallest incident edge, `t` in {0, 1}.
    pub fn vertex_locus(&self, v: usize) -> Option<LocusPoint> {
        let &(_, e) = self.adjacency[v].iter().min_by_key(|&&(_, e)| e)?;
        let t = if self.edges[e].u == v { 0.0 } else { 1.0 };
        Some(LocusPoint { edge: e, t })
    }

    /// Normalises vertex positions to their canonical representative.
    pub fn canonical(&self, p: LocusPoint) -> LocusPoint {
        match self.locus_vertex(&p) {
            Some(v) => self.vertex_locus(v).unwrap_or(p),
            None => p,
        }
    }

    /// Nearest locus point within `snap_radius`; ties go to the smaller edge id, then smaller `t`.
    pub fn project_to_locus(&self, q: [f64; 2], snap_radius: f64) -> Option<LocusPoint> {
        let mut best: Option<(f64, LocusPoint)> = None;
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = (self.vertices[e.u].xy, self.vertices[e.v].xy);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let l2 = dx * dx + dy * dy;
            let t = if l2 == 0.0 { 0.0 } else { (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / l2).clamp(0.0, 1.0) };
            let d = dist_f(q, [a[0] + t * dx, a[1] + t * dy]);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, LocusPoint { edge: i, t }));
            }
        }
        let (d, p) = best?;
        (d <= snap_radius).then(|| self.canonical(p))
    }

    /// Where an exact point lies on the locus (vertices take precedence).
    pub fn locate(&self, p: &Point) -> Option<Host> {
        if let Some(i) = self.vertices.iter().position(|v| &v.point == p) {
            return Some(Host::Vertex(i));
        }
        (0..self.edges.len())
            .find(|&e| {
                let edge = &self.edges[e];
                point_on_segment(p, &self.vertices[edge.u].point, &self.vertices[edge.v].point)
            })
            .map(Host::Edge)
    }

    /// Snaps a point lying within `tol` of the locus onto it exactly.
    pub fn snap(&self, p: &Point) -> Option<Point> {
        if self.locate(p).is_some() {
            return Some(p.clone());
        }
        let xy = p.to_f64();
        let scale = xy[0].abs().max(xy[1].abs());
        let lp = self.project_to_locus(xy, tol(scale))?;
        let e = &self.edges[lp.edge];
        let (a, b) = (&self.vertices[e.u].point, &self.vertices[e.v].point);
        let dx = &b.x - &a.x;
        let dy = &b.y - &a.y;
        let l2 = &dx * &dx + &dy * &dy;
        let mut lam = ((&p.x - &a.x) * &dx + (&p.y - &a.y) * &dy) / l2;
        if lam < Rational::zero() {
            lam = Rational::zero();
        } else if lam > Rational::one() {
            lam = Rational::one();
        }
        Some(a.lerp(b, &lam))
    }

    /// Inserts `s`, subdividing every edge it crosses or touches. Endpoints within
    /// tolerance of the locus are snapped onto it exactly.
    pub fn insert_segment(&self, s: &SegmentGeom) -> Result<Network> {
        let off = |p: &Point| {
            let [x, y] = p.to_f64();
            Error::EndpointOffLocus { x, y }
        };
        let a = self.snap(&s.a).ok_or_else(|| off(&s.a))?;
        let b = self.snap(&s.b).ok_or_else(|| off(&s.b))?;
        let s = SegmentGeom::new(a, b)?;

        // Points of the network lying on s, and interior split points per edge.
        let mut on_s: Vec<Point> = vec![s.a.clone(), s.b.clone()];
        let mut splits: BTreeMap<EdgeId, Vec<Point>> = BTreeMap::new();
        let (sa, sb) = (s.a.to_f64(), s.b.to_f64());
        let margin = 1e-9 * (1.0 + sa[0].abs().max(sa[1].abs()).max(sb[0].abs()).max(sb[1].abs()));
        let sbox = [sa[0].min(sb[0]) - margin, sa[0].max(sb[0]) + margin, sa[1].min(sb[1]) - margin, sa[1].max(sb[1]) + margin];
        for v in &self.vertices {
            let [x, y] = v.xy;
            if x < sbox[0] || x > sbox[1] || y < sbox[2] || y > sbox[3] {
                continue;
            }
            if point_on_segment(&v.point, &s.a, &s.b) {
                on_s.push(v.point.clone());
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (xu, xv) = (self.vertices[e.u].xy, self.vertices[e.v].xy);
            if xu[0].max(xv[0]) < sbox[0] || xu[0].min(xv[0]) > sbox[1] || xu[1].max(xv[1]) < sbox[2] || xu[1].min(xv[1]) > sbox[3] {
                continue;
            }
            let pu = &self.vertices[e.u].point;
            let pv = &self.vertices[e.v].point;
            let c = &self.carriers[e.carrier];
            let hit = if orient(&c.a, &c.b, &s.a) == 0 && orient(&c.a, &c.b, &s.b) == 0 {
                let piece = SegmentGeom { a: pu.clone(), b: pv.clone() };
                match seg_intersect(&piece, &s) {
                    Intersection::Overlap(_) => return Err(Error::DegenerateOverlap),
                    Intersection::Point(x) => Some(x),
                    Intersection::Empty => None,
                }
            } else {
                // Intersect carrier lines so coordinates stay one level deep.
                line_intersection(&s.a, &s.b, &c.a, &c.b)
                    .filter(|x| in_box(x, &s.a, &s.b) && in_box(x, pu, pv))
            };
            if let Some(x) = hit {
                if &x != pu && &x != pv {
                    splits.entry(i).or_default().push(x.clone());
                }
                on_s.push(x);
            }
        }
        on_s.sort();
        on_s.dedup();
        sort_along(&mut on_s, &s.a, &s.b);

        let mut vertices = self.vertices.clone();
        let mut index_of = self.index_of.clone();
        let mut by_point: HashMap<Point, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.point.clone(), i)).collect();
        let mut next_id = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        let mut index = |p: &Point, vertices: &mut Vec<Vertex>| -> usize {
            if let Some(&i) = by_point.get(p) {
                return i;
            }
            let i = vertices.len();
            vertices.push(Vertex { id: next_id, point: p.clone(), xy: p.to_f64(), text: None });
            index_of.insert(next_id, i);
            next_id += 1;
            by_point.insert(p.clone(), i);
            i
        };
        let s_idx: Vec<usize> = on_s.iter().map(|p| index(p, &mut vertices)).collect();

        let mut edges = Vec::with_capacity(self.edges.len() + 2 * on_s.len());
        for (i, e) in self.edges.iter().enumerate() {
            match splits.get_mut(&i) {
                None => edges.push((e.u, e.v, Some(e.carrier))),
                Some(pts) => {
                    let (pu, pv) = (&self.vertices[e.u].point, &self.vertices[e.v].point);
                    pts.sort();
                    pts.dedup();
                    sort_along(pts, pu, pv);
                    let mut chain = vec![e.u];
                    chain.extend(pts.iter().map(|p| index(p, &mut vertices)));
                    chain.push(e.v);
                    for w in chain.windows(2) {
                        edges.push((w[0].min(w[1]), w[0].max(w[1]), Some(e.carrier)));
                    }
                }
            }
        }
        let mut carriers = self.carriers.clone();
        let inserted = carriers.iter().filter(|c| matches!(c.origin, CarrierOrigin::Inserted(_))).count();
        carriers.push(Carrier { a: s.a.clone(), b: s.b.clone(), origin: CarrierOrigin::Inserted(inserted) });
        let sc = carriers.len() - 1;
        for w in s_idx.windows(2) {
            edges.push((w[0].min(w[1]), w[0].max(w[1]), Some(sc)));
        }
        // New vertices carry ids above every old id, so index order still follows id order.
        Network::from_index_edges(vertices, index_of, edges, Some(carriers))
    }

    /// Inserts the segments of `set` in order.
    pub fn insert_shortcut_set(&self, set: &ShortcutSet) -> Result<Network> {
        let mut net = self.clone();
        for (i, s) in set.segments.iter().enumerate() {
            net = net.insert_segment(s).map_err(|e| match e {
                Error::EndpointOffLocus { .. } => Error::ChainingViolation { index: i },
                other => other,
            })?;
        }
        Ok(net)
    }

    /// Maps a point of this network's locus back to the original edge it lies
    /// on, if it lies on one (points on inserted segments return `None`).
    pub fn to_base(&self, p: &LocusPoint) -> Option<(EdgeId, f64)> {
        let e = self.edges.get(p.edge)?;
        let c = &self.carriers[e.carrier];
        let CarrierOrigin::Base(base) = c.origin else {
            if let Some(v) = self.locus_vertex(p) {
                return self.vertex_on_base(v);
            }
            return None;
        };
        let xy = self.locus_xy(p).ok()?;
        Some((base, carrier_param(c, xy)))
    }

    fn vertex_on_base(&self, v: usize) -> Option<(EdgeId, f64)> {
        self.adjacency[v].iter().find_map(|&(_, e)| {
            let c = &self.carriers[self.edges[e].carrier];
            match c.origin {
                CarrierOrigin::Base(b) => Some((b, carrier_param(c, self.vertices[v].xy))),
                CarrierOrigin::Inserted(_) => None,
            }
        })
    }
}

/// Resolution of dyadic carrier parameters.
const DYADIC: f64 = (1u64 << 40) as f64;

fn carrier_param(c: &Carrier, xy: [f64; 2]) -> f64 {
    let (a, b) = (c.a.to_f64(), c.b.to_f64());
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    (((xy[0] - a[0]) * dx + (xy[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0)
}

fn in_box(p: &Point, a: &Point, b: &Point) -> bool {
    let within = |v: &Rational, l: &Rational, h: &Rational| if l <= h { l <= v && v <= h } else { h <= v && v <= l };
    within(&p.x, &a.x, &b.x) && within(&p.y, &a.y, &b.y)
}

/// Sorts collinear points by position from `a` towards `b`.
fn sort_along(pts: &mut [Point], a: &Point, b: &Point) {
    pts.sort();
    if a > b {
        pts.reverse();
    }
}

/// Which object a shortcut-set endpoint rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    Vertex(u64),
    Edge([u64; 2]),
    Segment(usize),
}

/// Ordered segments `s_1..s_k`; each endpoint rests on the network or an earlier segment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShortcutSet {
    pub segments: Vec<SegmentGeom>,
    pub anchors: Vec<[Anchor; 2]>,
}

impl ShortcutSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Computes anchors against `net`, snapping endpoints within tolerance and
    /// rejecting any endpoint that rests on neither the network nor an earlier segment.
    pub fn anchored(net: &Network, segments: Vec<SegmentGeom>) -> Result<Self> {
        let mut out = ShortcutSet::empty();
        for (i, s) in segments.into_iter().enumerate() {
            let mut ends = Vec::with_capacity(2);
            for p in [&s.a, &s.b] {
                let (q, anchor) = anchor_of(net, &out.segments, p).ok_or(Error::ChainingViolation { index: i })?;
                ends.push((q, anchor));
            }
            let (b, ab) = ends.pop().expect("two ends");
            let (a, aa) = ends.pop().expect("two ends");
            out.segments.push(SegmentGeom::new(a, b)?);
            out.anchors.push([aa, ab]);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<SegmentJson> {
        self.segments
            .iter()
            .zip(&self.anchors)
            .map(|(s, a)| SegmentJson { a: (&s.a).into(), b: (&s.b).into(), anchors: a.to_vec() })
            .collect()
    }

    /// Parses the wire form and re-derives anchors against `net`.
    pub fn from_json(net: &Network, items: &[SegmentJson]) -> Result<Self> {
        let segs = items
            .iter()
            .map(|s| SegmentGeom::new(Point::try_from(&s.a)?, Point::try_from(&s.b)?))
            .collect::<Result<Vec<_>>>()?;
        Self::anchored(net, segs)
    }
}

fn anchor_of(net: &Network, earlier: &[SegmentGeom], p: &Point) -> Option<(Point, Anchor)> {
    let find = |p: &Point| -> Option<Anchor> {
        match net.locate(p) {
            Some(Host::Vertex(v)) => Some(Anchor::Vertex(net.vertices[v].id)),
            Some(Host::Edge(e)) => {
                let edge = &net.edges[e];
                Some(Anchor::Edge([net.vertices[edge.u].id, net.vertices[edge.v].id]))
            }
            None => earlier.iter().position(|s| geom::point_on(p, s)).map(Anchor::Segment),
        }
    };
    if let Some(a) = find(p) {
        return Some((p.clone(), a));
    }
    let q = net.snap(p)?;
    let a = find(&q)?;
    Some((q, a))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub a: PointJson,
    pub b: PointJson,
    #[serde(default)]
    pub anchors: Vec<Anchor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u64,
    pub x: String,
    pub y: String,
}

/// Canonical wire form of a network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[u64; 2]>,
}

impl NetworkJson {
    pub fn to_network(&self) -> Result<Network> {
        let mut vs = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let point = Point::parse(&v.x, &v.y)?;
            vs.push(Vertex { id: v.id, xy: point.to_f64(), point, text: Some((v.x.clone(), v.y.clone())) });
        }
        Network::assemble(vs, self.edges.iter().map(|e| (e[0], e[1])).collect(), None)
    }
}

impl From<&Network> for NetworkJson {
    fn from(net: &Network) -> Self {
        let vertices = net
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = match &v.text {
                    Some((x, y)) => (x.clone(), y.clone()),
                    None => (geom::format_rational(&v.point.x), geom::format_rational(&v.point.y)),
                };
                VertexJson { id: v.id, x, y }
            })
            .collect();
        let edges = net.edges.iter().map(|e| [net.vertices[e.u].id, net.vertices[e.v].id]).collect();
        NetworkJson { vertices, edges }
    }
}

impl Network {
    pub fn from_json_str(s: &str) -> Result<Network> {
        let j: NetworkJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        j.to_network()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&NetworkJson::from(self)).expect("network serializes")
    }

    /// Reassigns carriers so that every current edge counts as original.
    pub fn rebased(&self) -> Network {
        let vs = self.vertices.clone();
        let edges = self.edges.iter().map(|e| (self.vertices[e.u].id, self.vertices[e.v].id)).collect();
        Network::assemble(vs, edges, None).expect("ids are consistent")
    }
}
