//! Single-segment shortcut search by branch-and-prune over endpoint parameters.

pub mod stabbing;

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{dist_f, seg_intersect, segment_distance, tol, Intersection, PointJson, SegmentGeom};
use crate::metrics::{continuous_diameter, vertex_distances, DiameterReport, DistanceOracle};
use crate::network::{EdgeId, LocusPoint, Network};

pub use stabbing::{scn_is_one_disconnected, stabbing_line, stabbing_line_bruteforce, DisconnectedVerdict, Line};

/// Lipschitz constant relating endpoint displacement to diameter change, for simple segments.
pub const LIPSCHITZ: f64 = 4.0;
/// Candidate parameters are snapped to multiples of this.
const SNAP: f64 = 1.0 / (1u64 << 20) as f64;
/// Adaptive pairs kept per edge pair.
const POOL: usize = 48;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SearchParams {
    pub gap: Option<f64>,
    pub resolution: Option<f64>,
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub a: PointJson,
    pub b: PointJson,
    pub p: LocusPoint,
    pub q: LocusPoint,
    pub new_d: f64,
    #[serde(skip)]
    pub segment: SegmentGeom,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub edge_pairs: usize,
    pub cells: usize,
    pub pruned_bound: usize,
    pub pruned_lipschitz: usize,
    pub evaluated: usize,
    pub infeasible: usize,
    pub leaves: usize,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.edge_pairs += o.edge_pairs;
        self.cells += o.cells;
        self.pruned_bound += o.pruned_bound;
        self.pruned_lipschitz += o.pruned_lipschitz;
        self.evaluated += o.evaluated;
        self.infeasible += o.infeasible;
        self.leaves += o.leaves;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum SearchOutcome {
    Found { old_d: f64, gap: f64, resolution: f64, candidate: Box<Candidate>, stats: SearchStats },
    None { old_d: f64, gap: f64, resolution: f64, certified_gap: f64, best_d: f64, stats: SearchStats },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn candidate(&self) -> Option<&Candidate> {
        match self {
            SearchOutcome::Found { candidate, .. } => Some(candidate),
            SearchOutcome::None { .. } => None,
        }
    }
}

/// Progress notifications, one per finished edge pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SearchEvent {
    Start { edge_pairs: usize, d: f64, gap: f64, resolution: f64 },
    Pair { e: EdgeId, f: EdgeId, done: usize, total: usize, cells: usize, best_d: f64, found: bool },
}

/// Inserts the segment between two locus points and measures the result.
pub fn evaluate_candidate(net: &Network, p: &LocusPoint, q: &LocusPoint) -> Result<(SegmentGeom, Network, DiameterReport)> {
    let s = SegmentGeom::new(net.locus_coords(p)?, net.locus_coords(q)?)?;
    let aug = net.insert_segment(&s)?;
    let report = continuous_diameter(&aug)?;
    Ok((s, aug, report))
}

/// Whether the open segment avoids the locus.
pub fn is_simple(net: &Network, s: &SegmentGeom) -> bool {
    (0..net.edge_count()).all(|g| match seg_intersect(s, &net.edge_segment(g)) {
        Intersection::Empty => true,
        Intersection::Point(x) => x == s.a || x == s.b,
        Intersection::Overlap(_) => false,
    })
}

/// A locus point with its vertex distances.
struct Anchor {
    p: LocusPoint,
    dv: Vec<f64>,
}

struct PairProbe {
    w: Anchor,
    z: Anchor,
    d: f64,
}

struct Ctx<'a> {
    net: &'a Network,
    oracle: DistanceOracle,
    d: f64,
    gap: f64,
    res: f64,
    simple: bool,
    base: Vec<PairProbe>,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    t0: f64,
    t1: f64,
    s0: f64,
    s1: f64,
}

/// Piece `[a0, a1]` of edge `g`.
#[derive(Clone, Copy, Debug)]
struct Host {
    g: EdgeId,
    a0: f64,
    a1: f64,
    p0: [f64; 2],
    p1: [f64; 2],
}

impl Ctx<'_> {
    fn probe(&self, w: LocusPoint, z: LocusPoint) -> PairProbe {
        let w = Anchor { dv: vertex_distances(self.net, &self.oracle, &w), p: w };
        let z = Anchor { dv: vertex_distances(self.net, &self.oracle, &z), p: z };
        let d = crate::metrics::locus_distance(self.net, &self.oracle, &w.p, &z.p).unwrap_or(f64::INFINITY);
        PairProbe { w, z, d }
    }

    fn host(&self, g: EdgeId, a0: f64, a1: f64) -> Host {
        let xy = |t| self.net.locus_xy(&LocusPoint { edge: g, t }).expect("valid edge");
        Host { g, a0, a1, p0: xy(a0), p1: xy(a1) }
    }

    /// Lower bound on the locus distance from `w` to any point of `h`.
    fn reach(&self, w: &Anchor, h: &Host) -> f64 {
        let e = &self.net.edges()[h.g];
        let mut best = (w.dv[e.u] + h.a0 * e.len).min(w.dv[e.v] + (1.0 - h.a1) * e.len);
        if w.p.edge == h.g {
            let t = w.p.t;
            let along = if t < h.a0 {
                h.a0 - t
            } else if t > h.a1 {
                t - h.a1
            } else {
                0.0
            };
            best = best.min(along * e.len);
        }
        best
    }

    fn hosts(&self, e: EdgeId, f: EdgeId, c: &Cell) -> Vec<Host> {
        let he = self.host(e, c.t0, c.t1);
        let hf = self.host(f, c.s0, c.s1);
        let mut out = vec![he, hf];
        if self.simple {
            return out;
        }
        let quad = [he.p0, he.p1, hf.p0, hf.p1];
        let scale = quad.iter().flat_map(|p| p.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
        let margin = 1e-9 * scale;
        let hull = hull_f64(&quad);
        for g in 0..self.net.edge_count() {
            if g == e || g == f {
                continue;
            }
            let edge = &self.net.edges()[g];
            let (a, b) = (self.net.vertices()[edge.u].xy(), self.net.vertices()[edge.v].xy());
            if let Some((a0, a1)) = clip(a, b, &hull, margin) {
                out.push(self.host(g, a0, a1));
            }
        }
        out
    }

    /// Lower bound on the distance between `w` and `z` after inserting any
    /// segment whose locus contacts lie on `hosts`.
    fn pair_bound(&self, pr: &PairProbe, hosts: &[Host]) -> f64 {
        let mut lb = pr.d;
        let rw: Vec<f64> = hosts.iter().map(|h| self.reach(&pr.w, h)).collect();
        let rz: Vec<f64> = hosts.iter().map(|h| self.reach(&pr.z, h)).collect();
        for (i, x) in hosts.iter().enumerate() {
            if rw[i] >= lb {
                continue;
            }
            for (j, y) in hosts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v = rw[i] + segment_distance(x.p0, x.p1, y.p0, y.p1) + rz[j];
                lb = lb.min(v);
            }
        }
        lb
    }

    /// Whether every candidate in the cell crosses the interior of some other edge.
    fn blocked(&self, e: EdgeId, f: EdgeId, c: &Cell) -> bool {
        let he = self.host(e, c.t0, c.t1);
        let hf = self.host(f, c.s0, c.s1);
        let corners = [(he.p0, hf.p0), (he.p0, hf.p1), (he.p1, hf.p0), (he.p1, hf.p1)];
        (0..self.net.edge_count()).any(|g| {
            if g == e || g == f {
                return false;
            }
            let edge = &self.net.edges()[g];
            let (a, b) = (self.net.vertices()[edge.u].xy(), self.net.vertices()[edge.v].xy());
            let d = [b[0] - a[0], b[1] - a[1]];
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            let side = |p: [f64; 2]| (d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])) / len;
            let m = 1e-9 * len.max(1.0);
            let (e0, e1, f0, f1) = (side(he.p0), side(he.p1), side(hf.p0), side(hf.p1));
            let opposite = (e0.min(e1) > m && f0.max(f1) < -m) || (e0.max(e1) < -m && f0.min(f1) > m);
            opposite
                && corners.iter().all(|&(p, q)| {
                    let (sp, sq) = (side(p), side(q));
                    let x = [p[0] + (q[0] - p[0]) * sp / (sp - sq), p[1] + (q[1] - p[1]) * sp / (sp - sq)];
                    let u = ((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / (len * len);
                    u * len > m && (1.0 - u) * len > m
                })
        })
    }

    fn eval(&self, e: EdgeId, f: EdgeId, t: f64, s: f64) -> Option<(Candidate, DiameterReport, Network)> {
        let p = LocusPoint { edge: e, t };
        let q = LocusPoint { edge: f, t: s };
        let seg = SegmentGeom::new(self.net.locus_coords(&p).ok()?, self.net.locus_coords(&q).ok()?).ok()?;
        if self.simple && !is_simple(self.net, &seg) {
            return None;
        }
        let aug = self.net.insert_segment(&seg).ok()?;
        let report = continuous_diameter(&aug).ok()?;
        let cand = Candidate { a: (&seg.a).into(), b: (&seg.b).into(), p, q, new_d: report.d, segment: seg };
        Some((cand, report, aug))
    }
}

fn snap(x: f64) -> f64 {
    ((x / SNAP).round() * SNAP).clamp(0.0, 1.0)
}

fn hull_f64(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p: Vec<[f64; 2]> = pts.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Parameter interval of segment `ab` inside the convex polygon grown by `margin`.
fn clip(a: [f64; 2], b: [f64; 2], hull: &[[f64; 2]], margin: f64) -> Option<(f64, f64)> {
    if hull.len() < 3 {
        let (c, d) = (hull[0], *hull.last().expect("non-empty"));
        return (segment_distance(a, b, c, d) <= margin).then_some((0.0, 1.0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let dir = [b[0] - a[0], b[1] - a[1]];
    let n = hull.len();
    for i in 0..n {
        let (p, q) = (hull[i], hull[(i + 1) % n]);
        let edge = [q[0] - p[0], q[1] - p[1]];
        let len = (edge[0] * edge[0] + edge[1] * edge[1]).sqrt();
        // Signed distance to the left of p->q (inside for a counter-clockwise hull).
        let f = |x: [f64; 2]| (edge[0] * (x[1] - p[1]) - edge[1] * (x[0] - p[0])) / len + margin;
        let fa = f(a);
        let slope = (edge[0] * dir[1] - edge[1] * dir[0]) / len;
        if slope.abs() < 1e-300 {
            if fa < 0.0 {
                return None;
            }
            continue;
        }
        let t = -fa / slope;
        if slope > 0.0 {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
        if lo > hi {
            return None;
        }
    }
    // Widen slightly so floating error never shrinks the piece.
    Some(((lo - 1e-9).max(0.0), (hi + 1e-9).min(1.0)))
}

struct PairResult {
    found: Option<Candidate>,
    best_d: f64,
    stats: SearchStats,
}

fn search_pair(ctx: &Ctx, e: EdgeId, f: EdgeId, index: usize, winner: &AtomicUsize) -> PairResult {
    let (le, lf) = (ctx.net.edges()[e].len, ctx.net.edges()[f].len);
    let target = ctx.d - ctx.gap;
    let mut stats = SearchStats { edge_pairs: 1, ..Default::default() };
    let mut best_d = f64::INFINITY;
    let mut pool: Vec<PairProbe> = Vec::new();
    let mut stack = vec![Cell { t0: 0.0, t1: 1.0, s0: 0.0, s1: 1.0 }];
    let slack = tol(ctx.d);
    while let Some(c) = stack.pop() {
        if stats.cells.is_multiple_of(64) && winner.load(Ordering::Relaxed) < index {
            break;
        }
        stats.cells += 1;
        if ctx.simple && ctx.blocked(e, f, &c) {
            stats.pruned_bound += 1;
            continue;
        }
        let hosts = ctx.hosts(e, f, &c);
        let pruned = ctx.base.iter().chain(pool.iter()).any(|pr| ctx.pair_bound(pr, &hosts) - slack > target);
        if pruned {
            stats.pruned_bound += 1;
            continue;
        }
        let (tc, sc) = (snap((c.t0 + c.t1) / 2.0), snap((c.s0 + c.s1) / 2.0));
        let eta = ((c.t1 - c.t0) / 2.0 + SNAP) * le + ((c.s1 - c.s0) / 2.0 + SNAP) * lf;
        match ctx.eval(e, f, tc, sc) {
            Some((cand, report, aug)) => {
                stats.evaluated += 1;
                best_d = best_d.min(cand.new_d);
                if cand.new_d <= target {
                    return PairResult { found: Some(cand), best_d, stats };
                }
                if ctx.simple && cand.new_d - LIPSCHITZ * eta > target {
                    stats.pruned_lipschitz += 1;
                    continue;
                }
                if pool.len() < POOL {
                    for pr in &report.pairs {
                        let (Some(w), Some(z)) = (aug.to_base(&pr.p), aug.to_base(&pr.q)) else { continue };
                        let probe = ctx.probe(LocusPoint { edge: w.0, t: w.1 }, LocusPoint { edge: z.0, t: z.1 });
                        if probe.d > target && pool.len() < POOL {
                            pool.push(probe);
                        }
                    }
                }
            }
            None => {
                stats.infeasible += 1;
                let (wt, ws) = ((c.t1 - c.t0) * le, (c.s1 - c.s0) * lf);
                if wt.max(ws) < ctx.res {
                    stats.leaves += 1;
                    for (t, s) in [(c.t0, c.s0), (c.t0, c.s1), (c.t1, c.s0), (c.t1, c.s1)] {
                        let Some((cand, _, _)) = ctx.eval(e, f, snap(t), snap(s)) else { continue };
                        stats.evaluated += 1;
                        best_d = best_d.min(cand.new_d);
                        if cand.new_d <= target {
                            return PairResult { found: Some(cand), best_d, stats };
                        }
                        break;
                    }
                    continue;
                }
            }
        }
        let (wt, ws) = ((c.t1 - c.t0) * le, (c.s1 - c.s0) * lf);
        if wt.max(ws) < ctx.res {
            stats.leaves += 1;
            continue;
        }
        let (tm, sm) = ((c.t0 + c.t1) / 2.0, (c.s0 + c.s1) / 2.0);
        let mut kids = Vec::with_capacity(4);
        match (wt >= ctx.res && wt >= ws / 2.0, ws >= ctx.res && ws >= wt / 2.0) {
            (true, true) => {
                kids.push(Cell { t0: c.t0, t1: tm, s0: c.s0, s1: sm });
                kids.push(Cell { t0: c.t0, t1: tm, s0: sm, s1: c.s1 });
                kids.push(Cell { t0: tm, t1: c.t1, s0: c.s0, s1: sm });
                kids.push(Cell { t0: tm, t1: c.t1, s0: sm, s1: c.s1 });
            }
            (true, false) => {
                kids.push(Cell { t1: tm, ..c });
                kids.push(Cell { t0: tm, ..c });
            }
            _ => {
                kids.push(Cell { s1: sm, ..c });
                kids.push(Cell { s0: sm, ..c });
            }
        }
        stack.extend(kids.into_iter().rev());
    }
    PairResult { found: None, best_d, stats }
}

/// Searches for one segment lowering the continuous diameter by at least `gap`.
///
/// `Found` is re-verified by insertion from scratch. `None` reports
/// `gap + 4 * resolution` as the certified gap. That margin rests on the
/// Lipschitz bound, which holds for simple segments but not for segments
/// crossing an edge at a shallow angle; for those, cells below the
/// resolution are covered by their centre sample only.
pub fn find_shortcut(net: &Network, params: SearchParams, observer: Option<&(dyn Fn(&SearchEvent) + Sync)>) -> Result<SearchOutcome> {
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let oracle = DistanceOracle::new(net);
    let report = crate::metrics::continuous_diameter_with(net, &oracle)?;
    let d = report.d;
    let gap = params.gap.unwrap_or(1e-6 * d);
    let res = params.resolution.unwrap_or(1e-3 * net.max_edge_length());
    if gap.is_nan() || gap <= crate::geom::TAU || res.is_nan() || res <= 0.0 {
        return Err(Error::Malformed(format!("gap must exceed {} and resolution must be positive", crate::geom::TAU)));
    }
    let mut ctx = Ctx { net, oracle, d, gap, res, simple: params.simple, base: Vec::new() };
    ctx.base = report.pairs.iter().map(|pr| ctx.probe(pr.p, pr.q)).collect();
    let m = net.edge_count();
    let pairs: Vec<(EdgeId, EdgeId)> = (0..m).flat_map(|e| (e + 1..m).map(move |f| (e, f))).collect();
    if let Some(obs) = observer {
        obs(&SearchEvent::Start { edge_pairs: pairs.len(), d, gap, resolution: res });
    }
    let winner = AtomicUsize::new(usize::MAX);
    let done = AtomicUsize::new(0);
    let results: Vec<Option<PairResult>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(e, f))| {
            if winner.load(Ordering::Relaxed) < i {
                return None;
            }
            let r = search_pair(&ctx, e, f, i, &winner);
            if r.found.is_some() {
                winner.fetch_min(i, Ordering::Relaxed);
            }
            let n = done.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(obs) = observer {
                obs(&SearchEvent::Pair {
                    e,
                    f,
                    done: n,
                    total: pairs.len(),
                    cells: r.stats.cells,
                    best_d: r.best_d,
                    found: r.found.is_some(),
                });
            }
            Some(r)
        })
        .collect();
    let mut stats = SearchStats::default();
    let mut best_d = d;
    let mut found = None;
    for r in results.into_iter().flatten() {
        stats.add(&r.stats);
        best_d = best_d.min(r.best_d);
        if found.is_none() {
            found = r.found;
        }
    }
    match found {
        Some(candidate) => {
            // Independent re-verification.
            let again = continuous_diameter(&net.insert_segment(&candidate.segment)?)?.d;
            debug_assert!((again - candidate.new_d).abs() <= tol(d));
            Ok(SearchOutcome::Found { old_d: d, gap, resolution: res, candidate: Box::new(Candidate { new_d: again, ..candidate }), stats })
        }
        None => Ok(SearchOutcome::None { old_d: d, gap, resolution: res, certified_gap: gap + LIPSCHITZ * res, best_d, stats }),
    }
}

/// `find_shortcut` restricted to segments whose interiors avoid the locus.
pub fn find_simple_shortcut(net: &Network, gap: Option<f64>, resolution: Option<f64>) -> Result<SearchOutcome> {
    find_shortcut(net, SearchParams { gap, resolution, simple: true }, None)
}

/// Best single segment over a `k x k` grid of endpoint parameters on every edge pair.
pub fn grid_shortcut_oracle(net: &Network, k: usize) -> Result<Option<Candidate>> {
    if k < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: k });
    }
    let m = net.edge_count();
    let mut jobs = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            for i in 0..k {
                for j in 0..k {
                    jobs.push((e, f, i as f64 / (k - 1) as f64, j as f64 / (k - 1) as f64));
                }
            }
        }
    }
    let best = jobs
        .par_iter()
        .enumerate()
        .filter_map(|(n, &(e, f, t, s))| {
            let (p, q) = (LocusPoint { edge: e, t }, LocusPoint { edge: f, t: s });
            let (seg, _, report) = evaluate_candidate(net, &p, &q).ok()?;
            Some((report.d, n, Candidate { a: (&seg.a).into(), b: (&seg.b).into(), p, q, new_d: report.d, segment: seg }))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(best.map(|b| b.2))
}

/// Euclidean length of a candidate.
pub fn candidate_length(c: &Candidate) -> f64 {
    dist_f(c.segment.a.to_f64(), c.segment.b.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn pocket_and_k4_have_shortcuts() {
        for net in [fixtures::pocket1(), fixtures::k4a()] {
            let out = find_shortcut(&net, SearchParams::default(), None).unwrap();
            let SearchOutcome::Found { old_d, gap, candidate, .. } = out else { panic!("expected a shortcut") };
            let again = continuous_diameter(&net.insert_segment(&candidate.segment).unwrap()).unwrap().d;
            assert!(again <= old_d - gap + tol(old_d));
        }
    }

    #[test]
    fn star_has_none() {
        let out = find_shortcut(&fixtures::star5(), SearchParams::default(), None).unwrap();
        assert!(!out.is_found());
    }

    #[test]
    fn polygons_have_no_simple_shortcut() {
        for net in [fixtures::square1(), fixtures::pocket1(), fixtures::l_hexagon()] {
            assert!(!find_simple_shortcut(&net, None, None).unwrap().is_found());
        }
    }

    #[test]
    fn grid_oracle_square() {
        let best = grid_shortcut_oracle(&fixtures::square1(), 8).unwrap().unwrap();
        assert!((best.new_d - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn events_are_reported() {
        let count = AtomicUsize::new(0);
        let obs = |_: &SearchEvent| {
            count.fetch_add(1, Ordering::Relaxed);
        };
        find_shortcut(&fixtures::tri1(), SearchParams::default(), Some(&obs)).unwrap();
        assert_eq!(count.load(Ordering::Relaxed), 4);
    }

    #[test]
    fn rejects_bad_params() {
        let p = SearchParams { gap: Some(0.0), ..Default::default() };
        assert!(find_shortcut(&fixtures::square1(), p, None).is_err());
    }
}
