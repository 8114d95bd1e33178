//! Existence of shortcut sets and constructions that realise them.

use num::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{
    self, hull_diameter, line_intersection, orient, point_on_segment, rational_from_f64, tol, Point, Rational,
    SegmentGeom,
};
use crate::metrics::{continuous_diameter, continuous_diameter_with, eccentricity, locus_distance, DistanceOracle};
use crate::network::{LocusPoint, Network, ShortcutSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistenceVerdict {
    pub admits: bool,
    /// Diametral vertex ids whose straight segment lies in the locus.
    pub witness: Option<[u64; 2]>,
    pub hull_d: f64,
    pub d: f64,
}

/// Whether some set of segments strictly decreases the continuous diameter.
pub fn admits_shortcut_set(net: &Network) -> Result<ExistenceVerdict> {
    let oracle = DistanceOracle::new(net);
    let d = continuous_diameter_with(net, &oracle)?.d;
    let hull_d = hull_diameter(&net.points())?;
    let band = tol(d);
    if hull_d < d - band {
        return Ok(ExistenceVerdict { admits: true, witness: None, hull_d, d });
    }
    let n = net.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            let (pu, pv) = (&net.vertices()[u], &net.vertices()[v]);
            if oracle.d(u, v) < d - band || geom::dist_f(pu.xy(), pv.xy()) < d - band {
                continue;
            }
            if segment_in_locus(net, &pu.point, &pv.point) {
                return Ok(ExistenceVerdict { admits: false, witness: Some([pu.id, pv.id]), hull_d, d });
            }
        }
    }
    Ok(ExistenceVerdict { admits: true, witness: None, hull_d, d })
}

/// Exact test that the closed segment `ab` is covered by edges of `net`.
pub fn segment_in_locus(net: &Network, a: &Point, b: &Point) -> bool {
    // Parametrise along the dominant axis of ab.
    let use_x = (&b.x - &a.x).abs() >= (&b.y - &a.y).abs();
    let coord = |p: &Point| if use_x { p.x.clone() } else { p.y.clone() };
    let (lo, hi) = {
        let (ca, cb) = (coord(a), coord(b));
        if ca <= cb {
            (ca, cb)
        } else {
            (cb, ca)
        }
    };
    let mut pieces: Vec<(Rational, Rational)> = Vec::new();
    for e in net.edges() {
        let (p, q) = (&net.vertices()[e.u].point, &net.vertices()[e.v].point);
        if orient(a, b, p) != 0 || orient(a, b, q) != 0 {
            continue;
        }
        let (cp, cq) = (coord(p), coord(q));
        let (s, t) = if cp <= cq { (cp, cq) } else { (cq, cp) };
        pieces.push((s, t));
    }
    pieces.sort();
    let mut reach = lo.clone();
    for (s, t) in pieces {
        if s > reach {
            break;
        }
        if t > reach {
            reach = t;
        }
        if reach >= hi {
            return true;
        }
    }
    reach >= hi
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub is_shortcut_set: bool,
    pub old_d: f64,
    pub new_d: f64,
}

pub fn verify_shortcut_set(net: &Network, set: &ShortcutSet) -> Result<Verification> {
    let old_d = continuous_diameter(net)?.d;
    let new_d = continuous_diameter(&net.insert_shortcut_set(set)?)?.d;
    Ok(Verification { is_shortcut_set: new_d < old_d - tol(old_d), old_d, new_d })
}

/// Point at distance `delta` from vertex `u` towards neighbour `w`, exactly on the edge.
fn toward(net: &Network, u: usize, w: usize, delta: f64) -> Result<Point> {
    let (pu, pw) = (&net.vertices()[u], &net.vertices()[w]);
    let frac = rational_from_f64(delta / geom::dist_f(pu.xy(), pw.xy()))?;
    Ok(pu.point.lerp(&pw.point, &frac))
}

/// Neighbours of `u` in clockwise order, starting from the largest angle.
fn clockwise_neighbors(net: &Network, u: usize) -> Vec<usize> {
    let c = net.vertices()[u].xy();
    let mut ns: Vec<(f64, usize)> = net
        .neighbors(u)
        .iter()
        .map(|&(w, _)| {
            let p = net.vertices()[w].xy();
            ((p[1] - c[1]).atan2(p[0] - c[0]), w)
        })
        .collect();
    ns.sort_by(|a, b| b.0.total_cmp(&a.0));
    ns.into_iter().map(|(_, w)| w).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanChord {
    pub vertex: u64,
    /// Ids of the neighbours whose edges hold the chord endpoints.
    pub from: u64,
    pub to: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanPlan {
    pub chords: Vec<FanChord>,
    /// Standoff as a fraction of each vertex's shortest incident edge.
    pub scale: f64,
    pub halvings: u32,
}

/// Index pairs `(i, j)` of the clockwise neighbour list: from each `u_i`, the
/// furthest `u_j` reachable clockwise through an angle below a half turn.
fn fan_runs(net: &Network, u: usize, ring: &[usize]) -> Vec<(usize, usize)> {
    let k = ring.len();
    let pu = &net.vertices()[u].point;
    let mut out = Vec::new();
    for i in 0..k {
        let pi = &net.vertices()[ring[i]].point;
        let mut last = None;
        for step in 1..k {
            let j = (i + step) % k;
            if orient(pu, pi, &net.vertices()[ring[j]].point) < 0 {
                last = Some(j);
            } else {
                break;
            }
        }
        if let Some(j) = last {
            out.push((i, j));
        }
    }
    out
}

fn fan_segments(net: &Network, scale: f64) -> Result<(Vec<SegmentGeom>, Vec<FanChord>)> {
    let mut segs = Vec::new();
    let mut chords = Vec::new();
    for u in 0..net.vertex_count() {
        if net.degree(u) < 2 {
            continue;
        }
        let shortest = net.neighbors(u).iter().map(|&(_, e)| net.edges()[e].len).fold(f64::INFINITY, f64::min);
        let delta = shortest * scale;
        let ring = clockwise_neighbors(net, u);
        for (i, j) in fan_runs(net, u, &ring) {
            let a = toward(net, u, ring[i], delta)?;
            let b = toward(net, u, ring[j], delta)?;
            segs.push(SegmentGeom::new(a, b)?);
            let id = |x: usize| net.vertices()[x].id;
            chords.push(FanChord { vertex: id(u), from: id(ring[i]), to: id(ring[j]) });
        }
    }
    Ok((segs, chords))
}

/// Upper bound on the fan size: twice the edge count minus the pendant count.
pub fn fan_bound(net: &Network) -> usize {
    2 * net.edge_count() - net.pendant_count()
}

/// Tiny chords near every vertex of degree at least two, each crossing a
/// clockwise run of incident edges spanning less than a half turn.
pub fn fan_shortcut_set(net: &Network) -> Result<(ShortcutSet, FanPlan, Verification)> {
    if !admits_shortcut_set(net)?.admits {
        return Err(Error::NoShortcutSet);
    }
    let old_d = continuous_diameter(net)?.d;
    let mut scale = 0.25;
    let mut last = None;
    for halvings in 0..=60 {
        let (segs, chords) = fan_segments(net, scale)?;
        assert!(segs.len() <= fan_bound(net));
        if segs.is_empty() {
            break;
        }
        let set = ShortcutSet::anchored(net, segs)?;
        let new_d = continuous_diameter(&net.insert_shortcut_set(&set)?)?.d;
        if new_d < old_d - tol(old_d) {
            let v = Verification { is_shortcut_set: true, old_d, new_d };
            return Ok((set, FanPlan { chords, scale, halvings }, v));
        }
        last = Some(new_d);
        scale /= 2.0;
    }
    Err(Error::VerificationExhausted {
        attempts: 61,
        detail: match last {
            Some(d) => format!("fan diameter stayed at {d} against {old_d}"),
            None => "no vertex has a fan run".into(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonStage {
    /// Segments joining cover points to their far-set cover points.
    Cover,
    /// Segments joining successive diametral pairs.
    Straighten,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonCoverPlan {
    pub eps: f64,
    pub hull_d: f64,
    /// Eccentricity threshold defining the covered set.
    pub m: f64,
    /// Locus covering radius of the net.
    pub radius: f64,
    pub net_points: Vec<LocusPoint>,
    /// For each net point, the net points at distance at least `m` from it.
    pub far: Vec<Vec<usize>>,
    pub stage: EpsilonStage,
    pub new_d: f64,
}

/// Largest cover-stage set that is inserted and checked before straightening.
const COVER_LIMIT: usize = 48;
const STRAIGHTEN_LIMIT: usize = 400;

/// Greedy net of `pts` with locus radius `radius`.
fn locus_net(net: &Network, oracle: &DistanceOracle, pts: &[LocusPoint], radius: f64) -> Vec<LocusPoint> {
    let mut centres: Vec<LocusPoint> = Vec::new();
    for p in pts {
        let covered = centres.iter().any(|c| locus_distance(net, oracle, c, p).is_ok_and(|x| x <= radius));
        if !covered {
            centres.push(*p);
        }
    }
    centres
}

fn push_unique(segs: &mut Vec<SegmentGeom>, a: Point, b: Point) -> Result<()> {
    if a == b {
        return Ok(());
    }
    let s = SegmentGeom::new(a, b)?;
    if !segs.iter().any(|t| t.sorted() == s.sorted()) {
        segs.push(s);
    }
    Ok(())
}

/// A set with `diam(CH) <= new diameter < diam(CH) + eps`, when `diam(CH) + eps < diam`.
///
/// The cover stage nets the points of eccentricity at least `diam(CH) + eps/4`
/// at locus radius `eps/4` and joins each net point to the net points far from
/// it. Points of the inserted segments are not controlled by that argument, so
/// if the bound fails the set is rebuilt by straightening: the current
/// diametral pair is joined by a segment until the bound holds.
pub fn epsilon_shortcut_set(net: &Network, eps: f64) -> Result<(ShortcutSet, EpsilonCoverPlan)> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::HypothesisViolated(format!("eps must be positive, got {eps}")));
    }
    let oracle = DistanceOracle::new(net);
    let d = continuous_diameter_with(net, &oracle)?.d;
    let hull_d = hull_diameter(&net.points())?;
    if hull_d + eps >= d {
        return Err(Error::HypothesisViolated(format!("hull diameter {hull_d} + eps {eps} is not below {d}")));
    }
    let h = eps / 8.0;
    let m = hull_d + eps / 4.0;
    let mut samples = Vec::new();
    for (i, e) in net.edges().iter().enumerate() {
        let k = (e.len / h).ceil().max(1.0) as usize;
        for j in 0..=k {
            let p = LocusPoint { edge: i, t: j as f64 / k as f64 };
            if eccentricity(net, &oracle, &p)? >= m - h / 2.0 {
                samples.push(p);
            }
        }
    }
    let radius = eps / 4.0 - h / 2.0;
    let centres = locus_net(net, &oracle, &samples, radius);
    let mut far = vec![Vec::new(); centres.len()];
    let mut segs = Vec::new();
    for i in 0..centres.len() {
        for j in 0..centres.len() {
            if i != j && locus_distance(net, &oracle, &centres[i], &centres[j])? >= m - 2.0 * (eps / 4.0) {
                far[i].push(j);
                if i < j {
                    let (a, b) = (net.locus_coords(&centres[i])?, net.locus_coords(&centres[j])?);
                    if !segment_in_locus(net, &a, &b) {
                        push_unique(&mut segs, a, b)?;
                    }
                }
            }
        }
    }
    let within = |x: f64| x >= hull_d - tol(hull_d) && x < hull_d + eps;
    let mut plan = EpsilonCoverPlan { eps, hull_d, m, radius, net_points: centres, far, stage: EpsilonStage::Cover, new_d: d };
    if segs.len() <= COVER_LIMIT {
        let set = ShortcutSet::anchored(net, segs)?;
        if let Ok(aug) = net.insert_shortcut_set(&set) {
            let new_d = continuous_diameter(&aug)?.d;
            if within(new_d) {
                plan.new_d = new_d;
                return Ok((set, plan));
            }
        }
    }

    plan.stage = EpsilonStage::Straighten;
    let mut aug = net.clone();
    let mut segs = Vec::new();
    for _ in 0..STRAIGHTEN_LIMIT {
        let report = continuous_diameter(&aug)?;
        if within(report.d) {
            plan.new_d = report.d;
            return Ok((ShortcutSet::anchored(net, segs)?, plan));
        }
        let mut progressed = false;
        for pr in &report.pairs {
            let (a, b) = (aug.locus_coords_dyadic(&pr.p)?, aug.locus_coords_dyadic(&pr.q)?);
            let Ok(s) = SegmentGeom::new(a, b) else { continue };
            if let Ok(next) = aug.insert_segment(&s) {
                aug = next;
                segs.push(s);
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    Err(Error::VerificationExhausted {
        attempts: segs.len(),
        detail: format!("straightening did not bring the diameter below {}", hull_d + eps),
    })
}

/// Vertex indices of a simple cycle in traversal order.
pub fn cycle_order(net: &Network) -> Result<Vec<usize>> {
    let n = net.vertex_count();
    if n < 3 || net.edge_count() != n || !net.is_connected() || (0..n).any(|v| net.degree(v) != 2) {
        return Err(Error::NotACycle);
    }
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = net.neighbors(cur).iter().map(|&(w, _)| w).find(|&w| w != prev).expect("degree two");
        if next == 0 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order)
}

/// Whether the cycle has no reflex vertex.
pub fn is_convex_polygon(net: &Network, order: &[usize]) -> bool {
    let n = order.len();
    let pt = |i: usize| &net.vertices()[order[i % n]].point;
    let signs: Vec<i8> = (0..n).map(|i| orient(pt(i), pt(i + 1), pt(i + 2))).collect();
    !(signs.contains(&1) && signs.contains(&-1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonResult {
    pub scn: u8,
    #[serde(skip)]
    pub set: ShortcutSet,
    pub verification: Verification,
}

/// Shortcut number of a simple polygon with a verified optimal set.
pub fn polygon_scn(net: &Network) -> Result<PolygonResult> {
    let order = cycle_order(net)?;
    if !is_convex_polygon(net, &order) {
        let s = polygon_shortcut(net)?;
        let set = ShortcutSet::anchored(net, vec![s])?;
        let verification = verify_shortcut_set(net, &set)?;
        return Ok(PolygonResult { scn: 1, set, verification });
    }
    // Corner chords at both ends of a longest edge.
    let n = order.len();
    let len = |i: usize| geom::dist_f(net.vertices()[order[i]].xy(), net.vertices()[order[(i + 1) % n]].xy());
    let i = (0..n).max_by(|&a, &b| len(a).total_cmp(&len(b)).then(b.cmp(&a))).expect("non-empty");
    let corners = [order[i], order[(i + 1) % n]];
    let old_d = continuous_diameter(net)?.d;
    let mut scale = 0.25;
    for _ in 0..=60 {
        let mut segs = Vec::new();
        for &u in &corners {
            let shortest = net.neighbors(u).iter().map(|&(_, e)| net.edges()[e].len).fold(f64::INFINITY, f64::min);
            let ns: Vec<usize> = net.neighbors(u).iter().map(|&(w, _)| w).collect();
            segs.push(SegmentGeom::new(toward(net, u, ns[0], shortest * scale)?, toward(net, u, ns[1], shortest * scale)?)?);
        }
        let set = ShortcutSet::anchored(net, segs)?;
        let new_d = continuous_diameter(&net.insert_shortcut_set(&set)?)?.d;
        if new_d < old_d - tol(old_d) {
            return Ok(PolygonResult { scn: 2, set, verification: Verification { is_shortcut_set: true, old_d, new_d } });
        }
        scale /= 2.0;
    }
    Err(Error::VerificationExhausted { attempts: 61, detail: "corner chords did not shorten the polygon".into() })
}

/// First boundary point hit by the ray from `u` through `r` strictly beyond `r`.
fn ray_exit(net: &Network, u: &Point, r: &Point) -> Option<Point> {
    let dir = (&r.x - &u.x, &r.y - &u.y);
    let along = |p: &Point| (&p.x - &u.x) * &dir.0 + (&p.y - &u.y) * &dir.1;
    let base = along(r);
    let mut best: Option<(Rational, Point)> = None;
    for e in net.edges() {
        let (a, b) = (&net.vertices()[e.u].point, &net.vertices()[e.v].point);
        let Some(x) = line_intersection(u, r, a, b) else { continue };
        if !point_on_segment(&x, a, b) {
            continue;
        }
        let k = along(&x);
        if k > base && best.as_ref().is_none_or(|(bk, _)| &k < bk) {
            best = Some((k, x));
        }
    }
    best.map(|(_, x)| x)
}

/// A single verified shortcut of a non-convex polygon, anchored at a hull vertex
/// bounding a pocket and passing close to the other end of the pocket lid.
pub fn polygon_shortcut(net: &Network) -> Result<SegmentGeom> {
    let order = cycle_order(net)?;
    if is_convex_polygon(net, &order) {
        return Err(Error::NotNonConvex);
    }
    let hull = geom::convex_hull(&net.points())?;
    let idx = |p: &Point| net.vertices().iter().position(|v| &v.point == p).expect("hull vertex is a vertex");
    let old_d = continuous_diameter(net)?.d;
    let n = order.len();
    let pos: Vec<usize> = {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    for (a, b) in hull.edges() {
        let (u, v) = (idx(a), idx(b));
        if net.edge_id_between(u, v).is_some() {
            continue;
        }
        for (u, v) in [(u, v), (v, u)] {
            // Neighbour of v on the pocket side: the one along the chain towards u that stays inside the hull.
            let fwd = order[(pos[v] + 1) % n];
            let back = order[(pos[v] + n - 1) % n];
            for w in [fwd, back] {
                let len = geom::dist_f(net.vertices()[v].xy(), net.vertices()[w].xy());
                let mut eps = len / 4.0;
                for _ in 0..40 {
                    let r1 = toward(net, v, w, eps)?;
                    let pu = net.vertices()[u].point.clone();
                    if let Some(r) = ray_exit(net, &pu, &r1) {
                        if let Ok(s) = SegmentGeom::new(pu, r) {
                            if let Ok(aug) = net.insert_segment(&s) {
                                let new_d = continuous_diameter(&aug)?.d;
                                if new_d < old_d - tol(old_d) {
                                    return Ok(s);
                                }
                            }
                        }
                    }
                    eps /= 2.0;
                }
            }
        }
    }
    Err(Error::VerificationExhausted { attempts: 40, detail: "no pocket segment shortened the polygon".into() })
}

/// Index of the interior vertex of a plane K4.
pub fn k4_interior(net: &Network) -> Result<usize> {
    if net.vertex_count() != 4 || net.edge_count() != 6 || (0..4).any(|v| net.degree(v) != 3) {
        return Err(Error::NotK4);
    }
    let p = |i: usize| &net.vertices()[i].point;
    for inner in 0..4 {
        let o: Vec<usize> = (0..4).filter(|&i| i != inner).collect();
        let s = [
            orient(p(o[0]), p(o[1]), p(inner)),
            orient(p(o[1]), p(o[2]), p(inner)),
            orient(p(o[2]), p(o[0]), p(inner)),
        ];
        if s.iter().all(|&x| x == 1) || s.iter().all(|&x| x == -1) {
            return Ok(inner);
        }
    }
    Err(Error::NotK4)
}

/// A verified single shortcut of a plane K4: a tiny chord near an outer
/// vertex crossing all three of its edges.
pub fn k4_shortcut(net: &Network) -> Result<SegmentGeom> {
    let inner = k4_interior(net)?;
    let old_d = continuous_diameter(net)?.d;
    for u in (0..4).filter(|&i| i != inner) {
        let outer: Vec<usize> = (0..4).filter(|&i| i != inner && i != u).collect();
        let shortest = net.neighbors(u).iter().map(|&(_, e)| net.edges()[e].len).fold(f64::INFINITY, f64::min);
        let mut delta = shortest / 4.0;
        for _ in 0..=60 {
            let s = SegmentGeom::new(toward(net, u, outer[0], delta)?, toward(net, u, outer[1], delta)?)?;
            let new_d = continuous_diameter(&net.insert_segment(&s)?)?.d;
            if new_d < old_d - tol(old_d) {
                return Ok(s);
            }
            delta /= 2.0;
        }
    }
    Err(Error::VerificationExhausted { attempts: 61, detail: "no corner chord shortened the K4".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn existence_examples() {
        let v = admits_shortcut_set(&fixtures::straight_path()).unwrap();
        assert!(!v.admits);
        assert_eq!(v.witness, Some([0, 2]));
        for net in [fixtures::square1(), fixtures::tri1(), fixtures::star5(), fixtures::k4a()] {
            assert!(admits_shortcut_set(&net).unwrap().admits);
        }
        assert!(!admits_shortcut_set(&fixtures::path1()).unwrap().admits);
    }

    #[test]
    fn fan_examples() {
        for (net, cap) in [(fixtures::star5(), 5), (fixtures::tri1(), 6), (fixtures::square1(), 8)] {
            let (set, _, v) = fan_shortcut_set(&net).unwrap();
            assert!(set.len() <= cap, "{} > {cap}", set.len());
            assert!(set.len() <= fan_bound(&net));
            assert!(v.is_shortcut_set);
        }
        assert_eq!(fan_shortcut_set(&fixtures::star5()).unwrap().0.len(), 5);
        assert!(fan_shortcut_set(&fixtures::straight_path()).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let sq = fixtures::square1();
        let (_, plan) = epsilon_shortcut_set(&sq, 0.4).unwrap();
        assert!(plan.new_d >= 2f64.sqrt() - 1e-9 && plan.new_d < 2f64.sqrt() + 0.4);
        assert!(matches!(epsilon_shortcut_set(&fixtures::tri1(), 0.6), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn verify_examples() {
        let sq = fixtures::square1();
        let diag = ShortcutSet::anchored(&sq, vec![SegmentGeom::new(Point::from_ints(0, 0), Point::from_ints(1, 1)).unwrap()]).unwrap();
        let v = verify_shortcut_set(&sq, &diag).unwrap();
        assert_eq!(v.old_d, 2.0);
        assert!(v.new_d <= v.old_d);
        let v = verify_shortcut_set(&sq, &ShortcutSet::empty()).unwrap();
        assert!(!v.is_shortcut_set);
        let tri = fixtures::tri1();
        let a = tri.locus_coords(&LocusPoint { edge: 0, t: 0.5 }).unwrap();
        let b = tri.locus_coords(&LocusPoint { edge: 1, t: 0.5 }).unwrap();
        let chord = ShortcutSet::anchored(&tri, vec![SegmentGeom::new(a, b).unwrap()]).unwrap();
        assert!(!verify_shortcut_set(&tri, &chord).unwrap().is_shortcut_set);
    }

    #[test]
    fn polygon_examples() {
        let sq = polygon_scn(&fixtures::square1()).unwrap();
        assert_eq!(sq.scn, 2);
        assert!(sq.verification.is_shortcut_set);
        assert_eq!(polygon_scn(&fixtures::tri1()).unwrap().scn, 2);
        let pocket = polygon_scn(&fixtures::pocket1()).unwrap();
        assert_eq!(pocket.scn, 1);
        assert!(pocket.verification.is_shortcut_set);
        let s = polygon_shortcut(&fixtures::pocket1()).unwrap();
        let hull_vertices = [Point::from_ints(4, 0), Point::from_ints(0, 4)];
        assert!(hull_vertices.contains(&s.a) || hull_vertices.contains(&s.b));
        let l = fixtures::l_hexagon();
        let s = polygon_shortcut(&l).unwrap();
        assert!(verify_shortcut_set(&l, &ShortcutSet::anchored(&l, vec![s]).unwrap()).unwrap().is_shortcut_set);
        assert_eq!(polygon_shortcut(&fixtures::square1()).unwrap_err(), Error::NotNonConvex);
        assert_eq!(polygon_scn(&fixtures::star5()).unwrap_err(), Error::NotACycle);
    }

    #[test]
    fn k4_examples() {
        let k4 = fixtures::k4a();
        let s = k4_shortcut(&k4).unwrap();
        let near_u1 = |p: &Point| geom::dist_f(p.to_f64(), [0.0, 0.0]) < 1.5;
        assert!(near_u1(&s.a) && near_u1(&s.b));
        assert!(k4_shortcut(&fixtures::k4_centroid()).is_ok());
        assert_eq!(k4_shortcut(&fixtures::square1()).unwrap_err(), Error::NotK4);
    }
}
