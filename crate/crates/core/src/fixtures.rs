//! Small named networks used throughout tests and examples.

use crate::geom::Point;
use crate::network::Network;

fn pt(x: f64, y: f64) -> Point {
    Point::from_f64(x, y).expect("finite")
}

/// Closed polygon through `points` in order, ids `0..n`.
pub fn cycle(points: Vec<Point>) -> Network {
    let n = points.len() as u64;
    let vs = points.into_iter().enumerate().map(|(i, p)| (i as u64, p)).collect();
    let es = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Network::new(vs, es).expect("ids are consistent")
}

/// Open path through `points` in order.
pub fn path(points: Vec<Point>) -> Network {
    let n = points.len() as u64;
    let vs = points.into_iter().enumerate().map(|(i, p)| (i as u64, p)).collect();
    let es = (1..n).map(|i| (i - 1, i)).collect();
    Network::new(vs, es).expect("ids are consistent")
}

pub fn path1() -> Network {
    path(vec![Point::from_ints(0, 0), Point::from_ints(1, 0)])
}

/// Three collinear vertices.
pub fn straight_path() -> Network {
    path(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(3, 0)])
}

pub fn square1() -> Network {
    cycle(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(1, 1), Point::from_ints(0, 1)])
}

pub fn tri1() -> Network {
    cycle(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), pt(0.5, 3f64.sqrt() / 2.0)])
}

/// Centre id 0, leaves 1..=5 on the unit circle.
pub fn star5() -> Network {
    star(5)
}

pub fn star(k: usize) -> Network {
    let mut vs = vec![(0, Point::from_ints(0, 0))];
    for i in 0..k {
        let a = std::f64::consts::TAU * i as f64 / k as f64;
        vs.push((i as u64 + 1, pt(a.cos(), a.sin())));
    }
    let es = (1..=k as u64).map(|i| (0, i)).collect();
    Network::new(vs, es).expect("ids are consistent")
}

/// Plane K4 with u1..u4 as ids 1..=4; u4 is interior.
pub fn k4a() -> Network {
    let vs = vec![
        (1, Point::from_ints(0, 0)),
        (2, Point::from_ints(4, 0)),
        (3, Point::from_ints(2, 3)),
        (4, Point::from_ints(2, 1)),
    ];
    Network::new(vs, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).expect("ids are consistent")
}

/// Unit triangle with an interior vertex near its centroid.
pub fn k4_centroid() -> Network {
    let h = 3f64.sqrt() / 2.0;
    let vs = vec![
        (1, Point::from_ints(0, 0)),
        (2, Point::from_ints(1, 0)),
        (3, pt(0.5, h)),
        (4, pt(0.51, h / 3.0)),
    ];
    Network::new(vs, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).expect("ids are consistent")
}

pub fn pocket1() -> Network {
    cycle(vec![Point::from_ints(0, 0), Point::from_ints(4, 0), Point::from_ints(1, 1), Point::from_ints(0, 4)])
}

pub fn l_hexagon() -> Network {
    cycle(
        [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
            .into_iter()
            .map(|(x, y)| Point::from_ints(x, y))
            .collect(),
    )
}

pub fn two_triangles() -> Network {
    let vs = vec![
        (0, Point::from_ints(0, 0)),
        (1, Point::from_ints(1, 0)),
        (2, Point::from_ints(0, 1)),
        (3, Point::from_ints(5, 0)),
        (4, Point::from_ints(6, 0)),
        (5, Point::from_ints(5, 1)),
    ];
    Network::new(vs, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).expect("ids are consistent")
}

/// Apex fan triangulation of a regular `k`-gon from its vertex 0.
pub fn fan_triangulation(k: usize) -> Network {
    let vs: Vec<(u64, Point)> = (0..k)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / k as f64;
            (i as u64, pt(a.cos(), a.sin()))
        })
        .collect();
    let mut es: Vec<(u64, u64)> = (0..k as u64).map(|i| (i, (i + 1) % k as u64)).collect();
    es.extend((2..k as u64 - 1).map(|i| (0, i)));
    Network::new(vs, es).expect("ids are consistent")
}
