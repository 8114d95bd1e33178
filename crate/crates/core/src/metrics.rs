//! Shortest-path distances on the locus, eccentricities and the continuous diameter.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::tol;
use crate::network::{EdgeId, LocusPoint, Network};

/// All-pairs vertex distances with a predecessor matrix.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    n: usize,
    dist: Vec<f64>,
    pred: Vec<usize>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

fn dijkstra(net: &Network, s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = net.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Item(0.0, s));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in net.neighbors(u) {
            let nd = d + net.edges()[e].len;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Item(nd, v));
            }
        }
    }
    (dist, pred)
}

impl DistanceOracle {
    pub fn new(net: &Network) -> Self {
        let n = net.vertex_count();
        let rows: Vec<(Vec<f64>, Vec<usize>)> = if n >= 64 {
            (0..n).into_par_iter().map(|s| dijkstra(net, s)).collect()
        } else {
            (0..n).map(|s| dijkstra(net, s)).collect()
        };
        let mut dist = Vec::with_capacity(n * n);
        let mut pred = Vec::with_capacity(n * n);
        for (d, p) in rows {
            dist.extend(d);
            pred.extend(p);
        }
        DistanceOracle { n, dist, pred }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between vertex indices; infinite when disconnected.
    #[inline]
    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    /// Vertex indices of a shortest path from `u` to `v`.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if !self.d(u, v).is_finite() {
            return None;
        }
        let mut out = vec![v];
        let mut x = v;
        while x != u {
            x = self.pred[u * self.n + x];
            out.push(x);
        }
        out.reverse();
        Some(out)
    }
}

/// Distances from a locus point to every vertex.
pub fn vertex_distances(net: &Network, oracle: &DistanceOracle, p: &LocusPoint) -> Vec<f64> {
    let e = &net.edges()[p.edge];
    let (a, b) = (p.t * e.len, (1.0 - p.t) * e.len);
    (0..net.vertex_count()).map(|v| (a + oracle.d(e.u, v)).min(b + oracle.d(e.v, v))).collect()
}

/// Shortest-path distance along the locus.
pub fn locus_distance(net: &Network, oracle: &DistanceOracle, p: &LocusPoint, q: &LocusPoint) -> Result<f64> {
    let ep = net.edge(p.edge)?;
    let eq = net.edge(q.edge)?;
    for x in [p.t, q.t] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::ParameterOutOfRange(x));
        }
    }
    let pa = [(ep.u, p.t * ep.len), (ep.v, (1.0 - p.t) * ep.len)];
    let qa = [(eq.u, q.t * eq.len), (eq.v, (1.0 - q.t) * eq.len)];
    let mut best = f64::INFINITY;
    for &(x, dx) in &pa {
        for &(y, dy) in &qa {
            best = best.min(dx + oracle.d(x, y) + dy);
        }
    }
    if p.edge == q.edge {
        best = best.min((p.t - q.t).abs() * ep.len);
    }
    Ok(best)
}

/// Largest distance from `p` to any point of the edge with endpoint distances `da`, `db`.
#[inline]
fn edge_reach(da: f64, db: f64, len: f64) -> f64 {
    if (da - db).abs() <= len {
        (da + db + len) / 2.0
    } else {
        da.min(db) + len
    }
}

/// Largest locus distance from `p`, exact per edge.
pub fn eccentricity(net: &Network, oracle: &DistanceOracle, p: &LocusPoint) -> Result<f64> {
    let ep = net.edge(p.edge)?;
    if !(0.0..=1.0).contains(&p.t) {
        return Err(Error::ParameterOutOfRange(p.t));
    }
    let dv = vertex_distances(net, oracle, p);
    let mut ecc = (p.t * ep.len).max((1.0 - p.t) * ep.len);
    for (i, e) in net.edges().iter().enumerate() {
        if i != p.edge {
            ecc = ecc.max(edge_reach(dv[e.u], dv[e.v], e.len));
        }
    }
    if net.vertex_count() > 0 && dv.iter().any(|d| !d.is_finite()) {
        return Ok(f64::INFINITY);
    }
    Ok(ecc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    VertexVertex,
    PendantVertexEdge,
    EdgeEdge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiametralPair {
    pub p: LocusPoint,
    pub q: LocusPoint,
    pub kind: PairKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiameterReport {
    pub d: f64,
    pub pairs: Vec<DiametralPair>,
}

/// The four routes between a point at `t` on `e` and a point at `s` on `f`,
/// each as `c + alpha t + beta s`.
fn route_planes(net: &Network, oracle: &DistanceOracle, e: EdgeId, f: EdgeId) -> [[f64; 3]; 4] {
    let (ee, ff) = (&net.edges()[e], &net.edges()[f]);
    let (le, lf) = (ee.len, ff.len);
    [
        [oracle.d(ee.u, ff.u), le, lf],
        [oracle.d(ee.u, ff.v) + lf, le, -lf],
        [le + oracle.d(ee.v, ff.u), -le, lf],
        [le + lf + oracle.d(ee.v, ff.v), -le, -lf],
    ]
}

#[inline]
fn eval(planes: &[[f64; 3]; 4], t: f64, s: f64) -> f64 {
    planes.iter().map(|c| c[0] + c[1] * t + c[2] * s).fold(f64::INFINITY, f64::min)
}

fn upper_bound(planes: &[[f64; 3]; 4]) -> f64 {
    planes.iter().map(|c| c[0] + c[1].max(0.0) + c[2].max(0.0)).fold(f64::INFINITY, f64::min)
}

/// Vertices of the arrangement of the four planes inside the unit box.
fn candidates(planes: &[[f64; 3]; 4]) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
    let inside = |x: f64| (-1e-12..=1.0 + 1e-12).contains(&x);
    for i in 0..4 {
        for j in i + 1..4 {
            let (dc, da, db) = (planes[i][0] - planes[j][0], planes[i][1] - planes[j][1], planes[i][2] - planes[j][2]);
            for fixed in [0.0, 1.0] {
                // t fixed, solve for s
                if db.abs() > 1e-15 {
                    let s = -(dc + da * fixed) / db;
                    if inside(s) {
                        out.push((fixed, s.clamp(0.0, 1.0)));
                    }
                }
                if da.abs() > 1e-15 {
                    let t = -(dc + db * fixed) / da;
                    if inside(t) {
                        out.push((t.clamp(0.0, 1.0), fixed));
                    }
                }
            }
            for k in j + 1..4 {
                let (ec, ea, eb) = (planes[i][0] - planes[k][0], planes[i][1] - planes[k][1], planes[i][2] - planes[k][2]);
                let det = da * eb - db * ea;
                if det.abs() > 1e-15 {
                    let t = (-dc * eb + db * ec) / det;
                    let s = (-da * ec + dc * ea) / det;
                    if inside(t) && inside(s) {
                        out.push((t.clamp(0.0, 1.0), s.clamp(0.0, 1.0)));
                    }
                }
            }
        }
    }
    out
}

struct PairMax {
    e: EdgeId,
    f: EdgeId,
    value: f64,
    at: Vec<(f64, f64)>,
}

fn edge_pair_max(planes: &[[f64; 3]; 4], e: EdgeId, f: EdgeId, band: f64) -> PairMax {
    let cands = candidates(planes);
    let vals: Vec<f64> = cands.iter().map(|&(t, s)| eval(planes, t, s)).collect();
    let value = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut at: Vec<(f64, f64)> = cands.iter().zip(&vals).filter(|(_, v)| **v >= value - band).map(|(c, _)| *c).collect();
    if at.len() > 1 {
        let k = at.len() as f64;
        let c = (at.iter().map(|a| a.0).sum::<f64>() / k, at.iter().map(|a| a.1).sum::<f64>() / k);
        if eval(planes, c.0, c.1) >= value - band {
            at.push(c);
        }
    }
    PairMax { e, f, value, at }
}

fn classify(net: &Network, p: &LocusPoint, q: &LocusPoint) -> PairKind {
    match (net.locus_vertex(p), net.locus_vertex(q)) {
        (Some(_), Some(_)) => PairKind::VertexVertex,
        (Some(v), None) | (None, Some(v)) if net.degree(v) == 1 => PairKind::PendantVertexEdge,
        _ => PairKind::EdgeEdge,
    }
}

fn key(p: &LocusPoint) -> (usize, i64) {
    (p.edge, (p.t * 1e9).round() as i64)
}

/// Continuous diameter with every diametral pair found among the maximizers.
pub fn continuous_diameter(net: &Network) -> Result<DiameterReport> {
    let oracle = DistanceOracle::new(net);
    continuous_diameter_with(net, &oracle)
}

pub fn continuous_diameter_with(net: &Network, oracle: &DistanceOracle) -> Result<DiameterReport> {
    if net.vertex_count() == 0 {
        return Err(Error::EmptyInput);
    }
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = net.vertex_count();
    let m = net.edge_count();
    let mut step1 = 0.0f64;
    for u in 0..n {
        for v in u + 1..n {
            step1 = step1.max(oracle.d(u, v));
        }
    }
    let pairs: Vec<(EdgeId, EdgeId)> = (0..m).flat_map(|e| (e + 1..m).map(move |f| (e, f))).collect();
    let band0 = tol(step1);
    let maxima: Vec<PairMax> = pairs
        .iter()
        .filter_map(|&(e, f)| {
            let planes = route_planes(net, oracle, e, f);
            (upper_bound(&planes) >= step1 - band0).then(|| edge_pair_max(&planes, e, f, band0))
        })
        .collect();
    let d = maxima.iter().map(|p| p.value).fold(step1, f64::max);
    let band = tol(d);

    let mut out: Vec<DiametralPair> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |p: LocusPoint, q: LocusPoint, out: &mut Vec<DiametralPair>| {
        let (p, q) = (net.canonical(p), net.canonical(q));
        let (p, q) = if key(&p) <= key(&q) { (p, q) } else { (q, p) };
        if !seen.insert((key(&p), key(&q))) {
            return;
        }
        let dist = locus_distance(net, oracle, &p, &q).unwrap_or(f64::NAN);
        if (dist - d).abs() <= band {
            out.push(DiametralPair { kind: classify(net, &p, &q), p, q });
        }
    };
    for u in 0..n {
        for v in u + 1..n {
            if oracle.d(u, v) >= d - band {
                if let (Some(p), Some(q)) = (net.vertex_locus(u), net.vertex_locus(v)) {
                    push(p, q, &mut out);
                }
            }
        }
    }
    for pm in maxima.iter().filter(|pm| pm.value >= d - band) {
        for &(t, s) in &pm.at {
            push(LocusPoint { edge: pm.e, t }, LocusPoint { edge: pm.f, t: s }, &mut out);
        }
    }
    Ok(DiameterReport { d, pairs: out })
}

/// Continuous diameter by closed-form candidates: vertex pairs, interior pairs
/// balanced between two routes on each side, and pendant-vertex/edge pairs.
/// Candidates whose balancing positions fall outside the edges are discarded,
/// and survivors are checked against `locus_distance`.
pub fn formula_diameter(net: &Network) -> Result<f64> {
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let oracle = DistanceOracle::new(net);
    let n = net.vertex_count();
    let m = net.edge_count();
    let mut d = 0.0f64;
    for u in 0..n {
        for v in u + 1..n {
            d = d.max(oracle.d(u, v));
        }
    }
    let check = |p: LocusPoint, q: LocusPoint, value: f64| -> Option<f64> {
        let actual = locus_distance(net, &oracle, &p, &q).ok()?;
        ((actual - value).abs() <= tol(value)).then_some(value)
    };
    for e in 0..m {
        for f in e + 1..m {
            let c = route_planes(net, &oracle, e, f);
            let (le, lf) = (net.edges()[e].len, net.edges()[f].len);
            let (a, b) = (c[0][0] - c[3][0], c[1][0] - c[2][0]);
            let t = -(a + b) / (4.0 * le);
            let s = (b - a) / (4.0 * lf);
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s) {
                // Route sums around the two matchings are constant over the box.
                let cyc1 = c[0][0] + c[3][0];
                let cyc2 = c[1][0] + c[2][0];
                let w = cyc1.min(cyc2) / 2.0;
                if let Some(v) = check(LocusPoint { edge: e, t }, LocusPoint { edge: f, t: s }, w) {
                    d = d.max(v);
                }
            }
        }
    }
    for v in 0..n {
        if net.degree(v) != 1 {
            continue;
        }
        let Some(p) = net.vertex_locus(v) else { continue };
        for (f, ef) in net.edges().iter().enumerate() {
            let (da, db) = (oracle.d(v, ef.u), oracle.d(v, ef.v));
            let s = (db - da + ef.len) / (2.0 * ef.len);
            if (0.0..=1.0).contains(&s) {
                if let Some(val) = check(p, LocusPoint { edge: f, t: s }, (da + db + ef.len) / 2.0) {
                    d = d.max(val);
                }
            }
        }
    }
    Ok(d)
}

/// Largest distance over a grid of `k + 1` points per edge.
pub fn sampled_diameter(net: &Network, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: k });
    }
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let oracle = DistanceOracle::new(net);
    let pts: Vec<LocusPoint> = (0..net.edge_count())
        .flat_map(|e| (0..=k).map(move |i| LocusPoint { edge: e, t: i as f64 / k as f64 }))
        .collect();
    let best = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            pts[i + 1..]
                .iter()
                .map(|q| locus_distance(net, &oracle, p, q).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, eps: f64) -> bool {
        (a - b).abs() <= eps
    }

    fn at(net: &Network, a: u64, b: u64, t: f64) -> LocusPoint {
        let (ia, ib) = (net.vertex_index(a).unwrap(), net.vertex_index(b).unwrap());
        let e = net.edge_id_between(ia, ib).unwrap();
        let t = if net.edges()[e].u == ia { t } else { 1.0 - t };
        LocusPoint { edge: e, t }
    }

    #[test]
    fn apsp_examples() {
        let sq = fixtures::square1();
        assert!(close(DistanceOracle::new(&sq).d(0, 2), 2.0, 1e-12));
        let k4 = fixtures::k4a();
        assert!(close(DistanceOracle::new(&k4).d(0, 1), 4.0, 1e-12));
        let star = fixtures::star5();
        let o = DistanceOracle::new(&star);
        for i in 1..6 {
            for j in 1..6 {
                if i != j {
                    assert!(close(o.d(i, j), 2.0, 1e-12));
                }
            }
        }
        assert_eq!(o.path(1, 2).unwrap(), vec![1, 0, 2]);
    }

    #[test]
    fn locus_distance_examples() {
        let sq = fixtures::square1();
        let o = DistanceOracle::new(&sq);
        let d = locus_distance(&sq, &o, &at(&sq, 0, 1, 0.5), &at(&sq, 2, 3, 0.5)).unwrap();
        assert!(close(d, 2.0, 1e-12));
        let e = LocusPoint { edge: 0, t: 0.2 };
        let f = LocusPoint { edge: 0, t: 0.7 };
        assert!(close(locus_distance(&sq, &o, &e, &f).unwrap(), 0.5, 1e-12));
    }

    #[test]
    fn locus_distance_matches_subdivision() {
        let k4 = fixtures::k4a();
        let o = DistanceOracle::new(&k4);
        let (p, q) = (at(&k4, 2, 3, 0.5), at(&k4, 1, 4, 0.5));
        let d = locus_distance(&k4, &o, &p, &q).unwrap();
        let fine = subdivide(&k4, 64);
        let fo = DistanceOracle::new(&fine);
        let pi = fine.vertices().iter().position(|v| v.point == k4.locus_coords(&p).unwrap()).unwrap();
        let qi = fine.vertices().iter().position(|v| v.point == k4.locus_coords(&q).unwrap()).unwrap();
        assert!(close(d, fo.d(pi, qi), 2.0 * k4.max_edge_length() / 64.0));
    }

    /// Splits every edge into `k` equal pieces.
    fn subdivide(net: &Network, k: usize) -> Network {
        let mut vs: Vec<(u64, crate::geom::Point)> = net.vertices().iter().map(|v| (v.id, v.point.clone())).collect();
        let mut es = Vec::new();
        let mut next = vs.iter().map(|v| v.0).max().unwrap() + 1;
        for e in net.edges() {
            let (a, b) = (&net.vertices()[e.u], &net.vertices()[e.v]);
            let mut prev = a.id;
            for i in 1..k {
                let t = crate::geom::Rational::new((i as i64).into(), (k as i64).into());
                vs.push((next, a.point.lerp(&b.point, &t)));
                es.push((prev, next));
                prev = next;
                next += 1;
            }
            es.push((prev, b.id));
        }
        Network::new(vs, es).unwrap()
    }

    #[test]
    fn eccentricity_examples() {
        let sq = fixtures::square1();
        let o = DistanceOracle::new(&sq);
        assert!(close(eccentricity(&sq, &o, &sq.vertex_locus(0).unwrap()).unwrap(), 2.0, 1e-12));
        let path = fixtures::path1();
        let o = DistanceOracle::new(&path);
        assert!(close(eccentricity(&path, &o, &LocusPoint { edge: 0, t: 0.25 }).unwrap(), 0.75, 1e-12));
        let star = fixtures::star5();
        let o = DistanceOracle::new(&star);
        assert!(close(eccentricity(&star, &o, &star.vertex_locus(0).unwrap()).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn diameter_examples() {
        let sq = continuous_diameter(&fixtures::square1()).unwrap();
        assert!(close(sq.d, 2.0, 1e-12));
        let net = fixtures::square1();
        let (m1, m2) = (at(&net, 0, 1, 0.5), at(&net, 2, 3, 0.5));
        assert!(sq.pairs.iter().any(|pr| (pr.p == m1 && pr.q == m2) || (pr.p == m2 && pr.q == m1)));
        assert!(close(continuous_diameter(&fixtures::tri1()).unwrap().d, 1.5, 1e-9));
        let star = continuous_diameter(&fixtures::star5()).unwrap();
        assert!(close(star.d, 2.0, 1e-9));
        assert!(!star.pairs.is_empty());
        assert!(star.pairs.iter().all(|p| p.kind == PairKind::VertexVertex));
        let k4 = fixtures::k4a();
        let d = continuous_diameter(&k4).unwrap().d;
        assert!(close(d, sampled_diameter(&k4, 128).unwrap(), 2.0 * k4.max_edge_length() / 128.0));
        assert_eq!(continuous_diameter(&fixtures::two_triangles()).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn sampled_examples() {
        assert!(close(sampled_diameter(&fixtures::square1(), 4).unwrap(), 2.0, 1e-12));
        for k in [2, 3, 7] {
            assert!(close(sampled_diameter(&fixtures::path1(), k).unwrap(), 1.0, 1e-12));
        }
        assert!(close(sampled_diameter(&fixtures::tri1(), 6).unwrap(), 1.5, 1e-9));
    }

    #[test]
    fn pairs_realize_the_diameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let net = crate::random::connected_network(&mut rng, 7, 0.5);
            let o = DistanceOracle::new(&net);
            let r = continuous_diameter_with(&net, &o).unwrap();
            assert!(!r.pairs.is_empty());
            for pr in &r.pairs {
                let d = locus_distance(&net, &o, &pr.p, &pr.q).unwrap();
                assert!(close(d, r.d, tol(r.d)));
                assert!(close(eccentricity(&net, &o, &pr.p).unwrap(), r.d, 1e-9));
            }
        }
    }

    #[test]
    fn closed_form_candidates_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut nets: Vec<Network> = (0..40).map(|i| crate::random::connected_network(&mut rng, 4 + i % 7, 0.5)).collect();
        nets.extend([fixtures::square1(), fixtures::tri1(), fixtures::star5(), fixtures::k4a(), fixtures::pocket1()]);
        for net in nets {
            let a = continuous_diameter(&net).unwrap().d;
            let b = formula_diameter(&net).unwrap();
            assert!(close(a, b, 1e-9), "{a} vs {b}");
        }
    }
}
