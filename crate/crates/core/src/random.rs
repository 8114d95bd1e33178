//! Seeded generators of valid networks and polygons.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geom::{point_on_segment, seg_intersect, Intersection, Point, SegmentGeom};
use crate::network::Network;

fn distinct_grid_points<R: Rng>(rng: &mut R, n: usize, span: i64) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::from_ints(rng.gen_range(0..=span), rng.gen_range(0..=span));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

fn compatible(pts: &[Point], kept: &[(usize, usize)], a: usize, b: usize) -> bool {
    let s = SegmentGeom { a: pts[a].clone(), b: pts[b].clone() };
    if pts.iter().enumerate().any(|(k, p)| k != a && k != b && point_on_segment(p, &s.a, &s.b)) {
        return false;
    }
    kept.iter().all(|&(c, d)| {
        let t = SegmentGeom { a: pts[c].clone(), b: pts[d].clone() };
        match seg_intersect(&s, &t) {
            Intersection::Empty => true,
            Intersection::Point(x) => {
                let shared = [a, b].into_iter().find(|v| *v == c || *v == d);
                shared.is_some_and(|v| pts[v] == x)
            }
            Intersection::Overlap(_) => false,
        }
    })
}

/// A connected plane network on `n` integer grid points: a greedy
/// triangulation thinned by `keep` while staying connected.
pub fn connected_network<R: Rng>(rng: &mut R, n: usize, keep: f64) -> Network {
    let pts = distinct_grid_points(rng, n, 12);
    let mut cand: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    cand.sort_by(|&(a, b), &(c, d)| {
        let l1 = crate::geom::dist(&pts[a], &pts[b]);
        let l2 = crate::geom::dist(&pts[c], &pts[d]);
        l1.total_cmp(&l2).then((a, b).cmp(&(c, d)))
    });
    let mut kept = Vec::new();
    for (a, b) in cand {
        if compatible(&pts, &kept, a, b) {
            kept.push((a, b));
        }
    }
    kept.shuffle(rng);
    let mut i = 0;
    while i < kept.len() {
        if rng.gen_bool(1.0 - keep) {
            let e = kept.remove(i);
            if !connected(n, &kept) {
                kept.insert(i, e);
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    let vs = pts.into_iter().enumerate().map(|(i, p)| (i as u64, p)).collect();
    Network::new(vs, kept.into_iter().map(|(a, b)| (a as u64, b as u64)).collect()).expect("ids are consistent")
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps <= 1
}

/// Convex polygon with `n` vertices at random angles on a circle.
pub fn convex_polygon<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let r = rng.gen_range(1.0..4.0);
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| Point::from_f64((r * a.cos() * 1e6).round() / 1e6, (r * a.sin() * 1e6).round() / 1e6).expect("finite"))
            .collect();
        if is_strictly_convex(&pts) && min_gap(&pts) > 0.05 {
            return pts;
        }
    }
}

/// Star-shaped simple polygon with at least one reflex vertex.
pub fn nonconvex_polygon<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    assert!(n >= 4);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * (i as f64 + rng.gen_range(-0.3..0.3)) / n as f64;
                let r = rng.gen_range(0.6..3.0);
                Point::from_f64((r * a.cos() * 1e6).round() / 1e6, (r * a.sin() * 1e6).round() / 1e6).expect("finite")
            })
            .collect();
        if !is_strictly_convex(&pts) && min_gap(&pts) > 0.05 && crate::fixtures::cycle(pts.clone()).validate().is_valid() {
            return pts;
        }
    }
}

/// Either kind of polygon, as a cycle network.
pub fn polygon<R: Rng>(rng: &mut R, n: usize) -> Network {
    let pts = if n >= 4 && rng.gen_bool(0.5) { nonconvex_polygon(rng, n) } else { convex_polygon(rng, n) };
    crate::fixtures::cycle(pts)
}

fn is_strictly_convex(pts: &[Point]) -> bool {
    let n = pts.len();
    (0..n).all(|i| crate::geom::orient(&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]) > 0)
}

fn min_gap(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| crate::geom::dist(&pts[i], &pts[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}
