//! Point-cover gadgets for 3-CNF formulas.
//!
//! Each clause becomes a point and each variable an `m x m` grid whose rows
//! and columns lie on declared lines. A clause point sits on the column line
//! of each variable it contains positively and on the row line of each
//! variable it contains negatively. The formula is satisfiable iff all points
//! can be covered by `n * m` lines.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{line_intersection, orient, Point};
use crate::network::Network;
use crate::search::stabbing::Line;

/// Largest point set the exhaustive line cover accepts.
pub const COVER_CAP: usize = 14;
const RETRIES: usize = 64;

/// A 3-CNF formula; literals are signed 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if n == 0 || clauses.is_empty() {
            return Err(Error::MalformedCnf("need at least one variable and one clause".into()));
        }
        let mut out = Vec::with_capacity(clauses.len());
        for (j, c) in clauses.iter().enumerate() {
            let c: [i32; 3] = c
                .as_slice()
                .try_into()
                .map_err(|_| Error::MalformedCnf(format!("clause {} has {} literals", j + 1, c.len())))?;
            for &l in &c {
                if l == 0 || l.unsigned_abs() as usize > n {
                    return Err(Error::MalformedCnf(format!("literal {l} out of range")));
                }
            }
            if c.iter().any(|&l| c.contains(&-l)) {
                return Err(Error::MalformedCnf(format!("clause {} contains a variable and its negation", j + 1)));
            }
            out.push(c);
        }
        let f = CnfFormula { n, clauses: out };
        if !f.incidence_connected() {
            return Err(Error::MalformedCnf("variable-clause incidence graph is disconnected".into()));
        }
        Ok(f)
    }

    /// Parses DIMACS-like text: optional `c`/`p` lines, clauses terminated by `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = 0usize;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                n = parts.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse("bad p line".into()))?;
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            clauses.push(cur);
        }
        if n == 0 {
            n = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        }
        CnfFormula::new(n, clauses)
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    fn incidence_connected(&self) -> bool {
        let (n, m) = (self.n, self.m());
        let mut seen = vec![false; n + m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            let next: Vec<usize> = if x < n {
                (0..m).filter(|&j| self.clauses[j].iter().any(|l| l.unsigned_abs() as usize == x + 1)).map(|j| n + j).collect()
            } else {
                self.clauses[x - n].iter().map(|l| l.unsigned_abs() as usize - 1).collect()
            };
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                v == (l > 0)
            })
        })
    }

    /// Exhaustive satisfiability.
    pub fn is_satisfiable(&self) -> Result<bool> {
        if self.n > 24 {
            return Err(Error::TooLarge(format!("{} variables", self.n)));
        }
        Ok((0..1u64 << self.n).any(|a| self.eval(a)))
    }

    /// A random valid formula.
    pub fn random<R: Rng>(rng: &mut R, n: usize, m: usize) -> Result<Self> {
        for _ in 0..10_000 {
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n as i32);
                            if rng.gen_bool(0.5) { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            if let Ok(f) = CnfFormula::new(n, clauses) {
                return Ok(f);
            }
        }
        Err(Error::RetryBudgetExhausted { attempts: 10_000, seed: 0 })
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |l: i32| if l > 0 { format!("x{l}") } else { format!("~x{}", -l) };
        let parts: Vec<String> = self.clauses.iter().map(|c| format!("({})", c.map(lit).join(" | "))).collect();
        write!(f, "{}", parts.join(" & "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum PointLabel {
    /// Clause `j` (1-based).
    Clause { j: usize },
    /// Grid point of variable `i`, row `k`, column `l` (1-based).
    Grid { i: usize, k: usize, l: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "family")]
pub enum LineLabel {
    /// Column `j` of variable `i`.
    L { i: usize, j: usize },
    /// Row `j` of variable `i`.
    R { i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredLine {
    pub label: LineLabel,
    pub line: Line,
    /// Indices into `GadgetInstance::points` meant to lie on the line.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetInstance {
    pub formula: CnfFormula,
    pub points: Vec<Point>,
    pub labels: Vec<PointLabel>,
    pub lines: Vec<DeclaredLine>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetViolation {
    Coincident { a: PointLabel, b: PointLabel },
    OffDeclaredLine { line: LineLabel, point: PointLabel },
    ExtraOnDeclaredLine { line: LineLabel, point: PointLabel },
    Collinear { points: Vec<PointLabel> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvenanceEntry {
    pub vertex: u64,
    #[serde(flatten)]
    pub label: PointLabel,
}

impl GadgetInstance {
    /// The gadget as an edgeless network; vertex ids follow point order from 1.
    pub fn to_network(&self) -> Result<Network> {
        Network::new(self.points.iter().cloned().enumerate().map(|(i, p)| (i as u64 + 1, p)).collect(), Vec::new())
    }

    pub fn provenance(&self) -> Vec<ProvenanceEntry> {
        self.labels.iter().enumerate().map(|(i, &label)| ProvenanceEntry { vertex: i as u64 + 1, label }).collect()
    }
}

fn random_dir(rng: &mut ChaCha8Rng) -> (i64, i64) {
    loop {
        let d = (rng.gen_range(-12..=12), rng.gen_range(-12..=12));
        if d != (0, 0) {
            return d;
        }
    }
}

fn line_through(p: &Point, d: (i64, i64)) -> Line {
    let q = Point::new(&p.x + crate::geom::Rational::from_integer(d.0.into()), &p.y + crate::geom::Rational::from_integer(d.1.into()));
    Line { a: p.clone(), b: q }
}

fn attempt(phi: &CnfFormula, rng: &mut ChaCha8Rng, seed: u64) -> Option<GadgetInstance> {
    let (n, m) = (phi.n, phi.m());
    let clause_pts: Vec<Point> = (0..m).map(|_| Point::from_ints(rng.gen_range(-60..=60), rng.gen_range(-60..=60))).collect();
    let mut lines = Vec::new();
    for i in 1..=n {
        for (fam, sign) in [(0, 1), (1, -1)] {
            for j in 1..=m {
                let through = phi.clauses[j - 1].contains(&(sign * i as i32));
                let anchor = if through {
                    clause_pts[j - 1].clone()
                } else {
                    Point::from_ints(rng.gen_range(-60..=60), rng.gen_range(-60..=60))
                };
                let label = if fam == 0 { LineLabel::L { i, j } } else { LineLabel::R { i, j } };
                lines.push(DeclaredLine { label, line: line_through(&anchor, random_dir(rng)), members: Vec::new() });
            }
        }
    }
    let idx = |label: LineLabel| -> usize {
        match label {
            LineLabel::L { i, j } => (i - 1) * 2 * m + j - 1,
            LineLabel::R { i, j } => (i - 1) * 2 * m + m + j - 1,
        }
    };
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (j, p) in clause_pts.into_iter().enumerate() {
        let label = PointLabel::Clause { j: j + 1 };
        for &lit in &phi.clauses[j] {
            let i = lit.unsigned_abs() as usize;
            let l = if lit > 0 { LineLabel::L { i, j: j + 1 } } else { LineLabel::R { i, j: j + 1 } };
            let li = idx(l);
            if !lines[li].members.contains(&points.len()) {
                lines[li].members.push(points.len());
            }
        }
        points.push(p);
        labels.push(label);
    }
    for i in 1..=n {
        for k in 1..=m {
            for l in 1..=m {
                let (r, c) = (&lines[idx(LineLabel::R { i, j: k })].line, &lines[idx(LineLabel::L { i, j: l })].line);
                let p = line_intersection(&r.a, &r.b, &c.a, &c.b)?;
                let at = points.len();
                lines[idx(LineLabel::R { i, j: k })].members.push(at);
                lines[idx(LineLabel::L { i, j: l })].members.push(at);
                points.push(p);
                labels.push(PointLabel::Grid { i, k, l });
            }
        }
    }
    let g = GadgetInstance { formula: phi.clone(), points, labels, lines, seed };
    verify_gadget(&g).is_empty().then_some(g)
}

/// Builds a verified gadget for `phi`, retrying placements from `seed`.
pub fn build_point_cover_instance(phi: &CnfFormula, seed: u64) -> Result<GadgetInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        if let Some(g) = attempt(phi, &mut rng, seed) {
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted { attempts: RETRIES, seed })
}

/// Exact check of the declared incidences and of genericity.
pub fn verify_gadget(g: &GadgetInstance) -> Vec<GadgetViolation> {
    let pts = &g.points;
    let mut out = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if pts[a] == pts[b] {
                out.push(GadgetViolation::Coincident { a: g.labels[a], b: g.labels[b] });
            }
        }
    }
    for dl in &g.lines {
        for (k, p) in pts.iter().enumerate() {
            let on = orient(&dl.line.a, &dl.line.b, p) == 0;
            let meant = dl.members.contains(&k);
            if meant && !on {
                out.push(GadgetViolation::OffDeclaredLine { line: dl.label, point: g.labels[k] });
            } else if on && !meant {
                out.push(GadgetViolation::ExtraOnDeclaredLine { line: dl.label, point: g.labels[k] });
            }
        }
    }
    let declared: Vec<BTreeSet<usize>> = g.lines.iter().map(|d| d.members.iter().copied().collect()).collect();
    let mut seen = BTreeSet::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if pts[a] == pts[b] {
                continue;
            }
            let on: BTreeSet<usize> = (0..pts.len()).filter(|&k| orient(&pts[a], &pts[b], &pts[k]) == 0).collect();
            if on.len() > 2 && !declared.iter().any(|d| on.is_subset(d)) && seen.insert(on.clone()) {
                out.push(GadgetViolation::Collinear { points: on.iter().map(|&k| g.labels[k]).collect() });
            }
        }
    }
    out
}

/// Smallest set of at most `budget` lines covering every point.
pub fn min_line_cover_bruteforce(points: &[Point], budget: usize) -> Result<Option<Vec<Line>>> {
    if points.len() > COVER_CAP {
        return Err(Error::TooLarge(format!("{} points exceed the cover cap of {COVER_CAP}", points.len())));
    }
    if points.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let n = points.len();
    // Candidate lines through each point, as membership masks.
    let mut through: Vec<Vec<(u32, Line)>> = vec![Vec::new(); n];
    for p in 0..n {
        let mut masks = BTreeSet::new();
        for q in 0..n {
            if points[q] == points[p] {
                continue;
            }
            let mask = (0..n).filter(|&k| orient(&points[p], &points[q], &points[k]) == 0).fold(0u32, |m, k| m | 1 << k);
            if masks.insert(mask) {
                through[p].push((mask, Line { a: points[p].clone(), b: points[q].clone() }));
            }
        }
        if through[p].is_empty() {
            let mask = (0..n).filter(|&k| points[k] == points[p]).fold(0u32, |m, k| m | 1 << k);
            through[p].push((mask, line_through(&points[p], (1, 0))));
        }
        through[p].sort_by_key(|(m, _)| std::cmp::Reverse(m.count_ones()));
    }
    let cap = through.iter().flatten().map(|(m, _)| m.count_ones()).max().unwrap_or(1) as usize;

    fn go(uncovered: u32, left: usize, cap: usize, through: &[Vec<(u32, Line)>], acc: &mut Vec<usize>) -> bool {
        if uncovered == 0 {
            return true;
        }
        if uncovered.count_ones() as usize > left * cap {
            return false;
        }
        let p = uncovered.trailing_zeros() as usize;
        for (c, (mask, _)) in through[p].iter().enumerate() {
            acc.push(c);
            if go(uncovered & !mask, left - 1, cap, through, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }

    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for k in 1..=budget {
        let mut acc = Vec::new();
        if go(all, k, cap, &through, &mut acc) {
            // Replay the choices to recover the lines.
            let mut uncovered = all;
            let mut lines = Vec::new();
            for c in acc {
                let p = uncovered.trailing_zeros() as usize;
                let (mask, line) = &through[p][c];
                uncovered &= !mask;
                lines.push(line.clone());
            }
            return Ok(Some(lines));
        }
    }
    Ok(None)
}

/// Whether satisfiability of `phi` matches coverability of its gadget by `n * m` lines.
pub fn scn_reduction_check(phi: &CnfFormula) -> Result<bool> {
    let size = phi.n * phi.m() * phi.m() + phi.m();
    if size > COVER_CAP {
        return Err(Error::TooLarge(format!("gadget has {size} points, cap is {COVER_CAP}")));
    }
    let g = build_point_cover_instance(phi, 0)?;
    let sat = phi.is_satisfiable()?;
    let cover = min_line_cover_bruteforce(&g.points, phi.n * phi.m())?.is_some();
    Ok(sat == cover)
}
