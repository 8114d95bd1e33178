//! Render-ready geometry: vertices, edges, and diametral pairs as polylines.

use locus_core::metrics::DiametralPair;
use locus_core::network::NetworkJson;
use locus_core::{DiameterReport, DistanceOracle, LocusPoint, Network};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct EdgeView {
    pub index: usize,
    pub u: u64,
    pub v: u64,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub len: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairView {
    #[serde(flatten)]
    pub pair: DiametralPair,
    pub path: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Geometry {
    pub network: NetworkJson,
    pub edges: Vec<EdgeView>,
    pub d: f64,
    pub pairs: Vec<PairView>,
}

/// A shortest route from `p` to `q` along the locus, as a polyline.
pub fn pair_path(net: &Network, oracle: &DistanceOracle, p: &LocusPoint, q: &LocusPoint) -> Vec<[f64; 2]> {
    let xy = |x: &LocusPoint| net.locus_xy(x).unwrap_or([f64::NAN; 2]);
    let (ep, eq) = (&net.edges()[p.edge], &net.edges()[q.edge]);
    let mut best = f64::INFINITY;
    let mut route = vec![xy(p), xy(q)];
    if p.edge == q.edge {
        best = (p.t - q.t).abs() * ep.len;
    }
    for (a, ca) in [(ep.u, p.t * ep.len), (ep.v, (1.0 - p.t) * ep.len)] {
        for (b, cb) in [(eq.u, q.t * eq.len), (eq.v, (1.0 - q.t) * eq.len)] {
            let c = ca + oracle.d(a, b) + cb;
            if c < best - 1e-12 {
                if let Some(path) = oracle.path(a, b) {
                    best = c;
                    route = std::iter::once(xy(p))
                        .chain(path.iter().map(|&v| net.vertices()[v].xy()))
                        .chain(std::iter::once(xy(q)))
                        .collect();
                }
            }
        }
    }
    route.dedup();
    route
}

pub fn geometry(net: &Network, report: &DiameterReport) -> Geometry {
    let oracle = DistanceOracle::new(net);
    let edges = net
        .edges()
        .iter()
        .enumerate()
        .map(|(index, e)| EdgeView {
            index,
            u: net.vertices()[e.u].id,
            v: net.vertices()[e.v].id,
            a: net.vertices()[e.u].xy(),
            b: net.vertices()[e.v].xy(),
            len: e.len,
        })
        .collect();
    let pairs = report.pairs.iter().map(|pr| PairView { pair: pr.clone(), path: pair_path(net, &oracle, &pr.p, &pr.q) }).collect();
    Geometry { network: NetworkJson::from(net), edges, d: report.d, pairs }
}
