//! Stabbing lines for families of convex hulls, and the one-segment bridge
//! for disconnected networks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, orient, seg_intersect, HullPolygon, Intersection, Point, PointJson, Rational, SegmentGeom};
use crate::network::{Network, SegmentJson, ShortcutSet};

/// The line through `a` with direction `b - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub a: Point,
    pub b: Point,
}

impl Line {
    fn side(&self, p: &Point) -> i8 {
        orient(&self.a, &self.b, p)
    }

    /// Whether the line meets the convex hull of `pts`.
    pub fn meets(&self, pts: &[Point]) -> bool {
        let (mut pos, mut neg) = (false, false);
        for p in pts {
            match self.side(p) {
                0 => return true,
                1 => pos = true,
                _ => neg = true,
            }
        }
        pos && neg
    }

    /// Parameter of `p` along the line, assuming `p` lies on it.
    fn param(&self, p: &Point) -> Rational {
        let dx = &self.b.x - &self.a.x;
        let dy = &self.b.y - &self.a.y;
        let num = (&p.x - &self.a.x) * &dx + (&p.y - &self.a.y) * &dy;
        num / (&dx * &dx + &dy * &dy)
    }

    fn at(&self, l: &Rational) -> Point {
        self.a.lerp(&self.b, l)
    }

    pub fn to_json(&self) -> LineJson {
        LineJson { point: (&self.a).into(), through: (&self.b).into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineJson {
    pub point: PointJson,
    pub through: PointJson,
}

fn candidates(hulls: &[HullPolygon]) -> Vec<Line> {
    let mut out = Vec::new();
    for h in hulls {
        let vs = &h.vertices;
        for i in 0..vs.len() {
            let j = (i + 1) % vs.len();
            if vs[i] != vs[j] {
                out.push(Line { a: vs[i].clone(), b: vs[j].clone() });
            }
        }
    }
    for (i, h) in hulls.iter().enumerate() {
        for g in &hulls[i + 1..] {
            for p in &h.vertices {
                for q in &g.vertices {
                    if p != q {
                        out.push(Line { a: p.clone(), b: q.clone() });
                    }
                }
            }
        }
    }
    // Coincident single points: any line through them.
    for h in hulls {
        for p in &h.vertices {
            let q = Point::new(&p.x + Rational::from_integer(1.into()), p.y.clone());
            out.push(Line { a: p.clone(), b: q });
        }
    }
    out
}

fn stabbers(hulls: &[HullPolygon]) -> impl Iterator<Item = Line> + '_ {
    candidates(hulls).into_iter().filter(move |l| hulls.iter().all(|h| l.meets(&h.vertices)))
}

/// A line meeting every hull, if one exists.
pub fn stabbing_line(hulls: &[HullPolygon]) -> Result<Option<Line>> {
    if hulls.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(stabbers(hulls).next())
}

/// Direction sweep: whether some line with one of `dirs` normals meets every hull.
pub fn stabbing_line_bruteforce(hulls: &[HullPolygon], dirs: usize) -> bool {
    let pts: Vec<Vec<[f64; 2]>> = hulls.iter().map(|h| h.vertices.iter().map(Point::to_f64).collect()).collect();
    let scale = pts.iter().flatten().flat_map(|p| p.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
    (0..dirs).any(|k| {
        let th = std::f64::consts::PI * k as f64 / dirs as f64;
        let (c, s) = (th.cos(), th.sin());
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for h in &pts {
            let proj = h.iter().map(|p| p[0] * c + p[1] * s);
            let (a, b) = proj.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            lo = lo.max(a);
            hi = hi.min(b);
        }
        lo <= hi + 1e-12 * scale
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisconnectedVerdict {
    pub yes: bool,
    pub components: usize,
    pub line: Option<LineJson>,
    pub witness: Option<Vec<SegmentJson>>,
}

/// Parameters along `line` where it meets the component's edges.
fn hits(net: &Network, line: &Line, edges: &[usize]) -> Vec<Rational> {
    let mut out = Vec::new();
    for &g in edges {
        let s = net.edge_segment(g);
        let (oa, ob) = (line.side(&s.a), line.side(&s.b));
        if oa == 0 {
            out.push(line.param(&s.a));
        }
        if ob == 0 {
            out.push(line.param(&s.b));
        }
        if oa * ob < 0 {
            let x = crate::geom::line_intersection(&line.a, &line.b, &s.a, &s.b).expect("crossing lines");
            out.push(line.param(&x));
        }
    }
    out
}

/// Decides whether one segment can connect every component.
pub fn scn_is_one_disconnected(net: &Network) -> Result<DisconnectedVerdict> {
    let comps = net.components();
    if comps.len() < 2 {
        return Err(Error::Connected);
    }
    let mut comp_of = vec![0usize; net.vertex_count()];
    let mut hulls = Vec::with_capacity(comps.len());
    for (c, ids) in comps.iter().enumerate() {
        let mut pts = Vec::with_capacity(ids.len());
        for id in ids {
            let v = net.vertex_index(*id).ok_or(Error::UnknownVertex(*id))?;
            comp_of[v] = c;
            pts.push(net.vertices()[v].point.clone());
        }
        hulls.push(convex_hull(&pts)?);
    }
    let mut comp_edges = vec![Vec::new(); comps.len()];
    for (g, e) in net.edges().iter().enumerate() {
        comp_edges[comp_of[e.u]].push(g);
    }
    let verts_of: Vec<Vec<Point>> = comps
        .iter()
        .map(|ids| ids.iter().filter_map(|id| net.vertex_index(*id)).map(|v| net.vertices()[v].point.clone()).collect())
        .collect();
    for line in stabbers(&hulls) {
        let sets: Vec<Vec<Rational>> = (0..comps.len())
            .map(|c| {
                let mut h = hits(net, &line, &comp_edges[c]);
                if comp_edges[c].is_empty() {
                    h.extend(verts_of[c].iter().filter(|p| line.side(p) == 0).map(|p| line.param(p)));
                }
                h
            })
            .collect();
        if sets.iter().any(Vec::is_empty) {
            continue;
        }
        let lo = sets.iter().map(|s| s.iter().max().expect("non-empty").clone()).min().expect("components");
        let hi = sets.iter().map(|s| s.iter().min().expect("non-empty").clone()).max().expect("components");
        let all_lo = sets.iter().flatten().min().expect("non-empty").clone();
        let all_hi = sets.iter().flatten().max().expect("non-empty").clone();
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        for (x, y) in [(lo, hi), (all_lo, all_hi)] {
            if x == y {
                continue;
            }
            let Ok(seg) = SegmentGeom::new(line.at(&x), line.at(&y)) else { continue };
            if !touches_all(net, &seg, &comp_edges, &verts_of) {
                continue;
            }
            let Ok(aug) = net.insert_segment(&seg) else { continue };
            if aug.is_connected() {
                let witness = ShortcutSet::anchored(net, vec![seg])?.to_json();
                return Ok(DisconnectedVerdict { yes: true, components: comps.len(), line: Some(line.to_json()), witness: Some(witness) });
            }
        }
    }
    Ok(DisconnectedVerdict { yes: false, components: comps.len(), line: None, witness: None })
}

fn touches_all(net: &Network, seg: &SegmentGeom, comp_edges: &[Vec<usize>], verts_of: &[Vec<Point>]) -> bool {
    comp_edges.iter().zip(verts_of).all(|(edges, verts)| {
        verts.iter().any(|p| crate::geom::point_on(p, seg))
            || edges.iter().any(|&g| !matches!(seg_intersect(seg, &net.edge_segment(g)), Intersection::Empty))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[(i64, i64)]) -> HullPolygon {
        convex_hull(&pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn squares_on_axis_are_stabbed() {
        let hs: Vec<HullPolygon> = [0, 5, 10].iter().map(|&c| hull(&[(2 * c - 1, -1), (2 * c + 1, -1), (2 * c + 1, 1), (2 * c - 1, 1)])).collect();
        let l = stabbing_line(&hs).unwrap().unwrap();
        assert!(hs.iter().all(|h| l.meets(&h.vertices)));
        assert!(stabbing_line_bruteforce(&hs, 3600));
    }

    #[test]
    fn triangle_of_points_is_not() {
        let hs = vec![hull(&[(0, 0)]), hull(&[(10, 0)]), hull(&[(5, 9)])];
        assert!(stabbing_line(&hs).unwrap().is_none());
        assert!(!stabbing_line_bruteforce(&hs, 3600));
    }

    #[test]
    fn single_hull_and_empty() {
        assert!(stabbing_line(&[hull(&[(0, 0), (3, 1), (1, 4)])]).unwrap().is_some());
        assert!(stabbing_line(&[hull(&[(2, 2)])]).unwrap().is_some());
        assert!(matches!(stabbing_line(&[]), Err(Error::EmptyInput)));
    }

    type Seg = ((i64, i64), (i64, i64));

    fn segments(segs: &[Seg]) -> Network {
        let mut vs = Vec::new();
        let mut es = Vec::new();
        for (k, &(a, b)) in segs.iter().enumerate() {
            let id = 2 * k as u64;
            vs.push((id, Point::from_ints(a.0, a.1)));
            vs.push((id + 1, Point::from_ints(b.0, b.1)));
            es.push((id, id + 1));
        }
        Network::new(vs, es).unwrap()
    }

    #[test]
    fn collinear_segments_bridge() {
        let v = scn_is_one_disconnected(&segments(&[((0, 0), (1, 0)), ((2, 0), (3, 0))])).unwrap();
        assert!(v.yes);
    }

    #[test]
    fn stacked_segments_bridge() {
        let v = scn_is_one_disconnected(&segments(&[((0, 0), (1, 0)), ((0, 1), (1, 1))])).unwrap();
        assert!(v.yes);
        assert_eq!(v.witness.unwrap().len(), 1);
    }

    #[test]
    fn triangle_arrangement_has_no_bridge() {
        let net = segments(&[((0, 0), (2, 0)), ((20, 0), (22, 0)), ((10, 17), (12, 17))]);
        let v = scn_is_one_disconnected(&net).unwrap();
        assert!(!v.yes);
    }

    #[test]
    fn connected_input_is_rejected() {
        assert!(matches!(scn_is_one_disconnected(&crate::fixtures::square1()), Err(Error::Connected)));
    }
}
