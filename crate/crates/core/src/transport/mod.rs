//! Hop metrics on faces and the exact 1-Wasserstein distance between finitely
//! supported measures.
//!
//! The primal transport problem is solved by the transportation simplex
//! (north-west corner start, potentials, Bland's rule). The Kantorovich dual
//! is solved separately as a linear program over pairwise Lipschitz
//! constraints on the union of the supports, so each route certifies the other.

mod simplex;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

pub const MEASURE_TOL: f64 = 1e-12;
pub const MARGINAL_TOL: f64 = 1e-10;
pub const LIPSCHITZ_TOL: f64 = 1e-10;
pub const DUALITY_GAP_TOL: f64 = 1e-9;

const UNREACHABLE: u32 = u32::MAX;

/// Shortest-path hop distances between the `dim`-faces (or dual-graph vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMetric {
    pub dim: usize,
    n: usize,
    dist: Vec<u32>,
}

impl FaceMetric {
    pub fn from_adjacency(dim: usize, adjacency: &[Vec<usize>]) -> Self {
        let n = adjacency.len();
        let mut dist = vec![UNREACHABLE; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &v in &adjacency[u] {
                    if row[v] == UNREACHABLE {
                        row[v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        FaceMetric { dim, n, dist }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Hop distance, `None` when the two points are disconnected.
    pub fn distance(&self, a: usize, b: usize) -> Option<u32> {
        let d = self.dist[a * self.n + b];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn diameter(&self) -> Option<u32> {
        self.dist
            .iter()
            .try_fold(0, |acc, &d| (d != UNREACHABLE).then(|| acc.max(d)))
    }
}

/// Hop metric on the `i`-faces of `k`, where faces are adjacent when they share an `(i-1)`-face.
pub fn face_metric(k: &SimplicialComplex, i: usize) -> Result<FaceMetric> {
    if i == 0 || i > k.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, max: k.dim() });
    }
    let adjacency: Vec<Vec<usize>> = (0..k.face_count(i))
        .map(|f| {
            let mut ns: Vec<usize> = k.neighbors(i, f).into_iter().map(|(g, _)| g).collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    Ok(FaceMetric::from_adjacency(i, &adjacency))
}

/// Finitely supported probability measure on face indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceMeasure {
    masses: BTreeMap<usize, f64>,
}

impl FaceMeasure {
    /// Validates nonnegativity and unit total (within `1e-12`). Zero masses are dropped.
    pub fn new(masses: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((f, m)) = masses.iter().find(|(_, m)| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("mass {m} at point {f}")));
        }
        let total: f64 = masses.values().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total}")));
        }
        Ok(FaceMeasure {
            masses: masses.into_iter().filter(|(_, m)| *m > 0.0).collect(),
        })
    }

    pub fn point(f: usize) -> Self {
        FaceMeasure {
            masses: BTreeMap::from([(f, 1.0)]),
        }
    }

    pub fn get(&self, f: usize) -> f64 {
        self.masses.get(&f).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.masses.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.masses.iter().map(|(&f, &m)| (f, m))
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }
}

/// Transport plan `A(u, v)`; only positive entries are stored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coupling {
    pub plan: BTreeMap<(usize, usize), f64>,
}

impl Coupling {
    pub fn cost(&self, metric: &FaceMetric) -> f64 {
        self.plan
            .iter()
            .map(|(&(u, v), &m)| m * metric.distance(u, v).map_or(f64::INFINITY, f64::from))
            .sum()
    }

    /// Largest deviation of the row/column sums from `mu` / `nu`.
    pub fn marginal_error(&self, mu: &FaceMeasure, nu: &FaceMeasure) -> f64 {
        let mut rows: BTreeMap<usize, f64> = mu.iter().map(|(u, m)| (u, -m)).collect();
        let mut cols: BTreeMap<usize, f64> = nu.iter().map(|(v, m)| (v, -m)).collect();
        for (&(u, v), &m) in &self.plan {
            *rows.entry(u).or_default() += m;
            *cols.entry(v).or_default() += m;
        }
        rows.values().chain(cols.values()).map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// 1-Lipschitz potential on the union of the supports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzCertificate {
    pub potential: BTreeMap<usize, f64>,
}

impl LipschitzCertificate {
    /// `max (|f(u) − f(v)| − d(u, v))` over the potential's domain.
    pub fn max_violation(&self, metric: &FaceMetric) -> f64 {
        let pts: Vec<(usize, f64)> = self.potential.iter().map(|(&u, &f)| (u, f)).collect();
        let mut worst = f64::NEG_INFINITY;
        for (a, &(u, fu)) in pts.iter().enumerate() {
            for &(v, fv) in &pts[a + 1..] {
                let d = metric.distance(u, v).map_or(f64::INFINITY, f64::from);
                worst = worst.max((fu - fv).abs() - d);
            }
        }
        worst
    }

    pub fn evaluate(&self, mu: &FaceMeasure, nu: &FaceMeasure) -> f64 {
        self.potential.iter().map(|(&u, &f)| f * (mu.get(u) - nu.get(u))).sum()
    }
}

fn cost_matrix(rows: &[usize], cols: &[usize], metric: &FaceMetric) -> Result<Vec<Vec<f64>>> {
    rows.iter()
        .map(|&u| {
            cols.iter()
                .map(|&v| metric.distance(u, v).map(f64::from).ok_or(Error::DisconnectedSupports))
                .collect()
        })
        .collect()
}

/// Exact `W_1(mu, nu)` and an optimal coupling.
pub fn wasserstein(mu: &FaceMeasure, nu: &FaceMeasure, metric: &FaceMetric) -> Result<(f64, Coupling)> {
    let rows: Vec<usize> = mu.support().collect();
    let cols: Vec<usize> = nu.support().collect();
    let cost = cost_matrix(&rows, &cols, metric)?;
    let supply: Vec<f64> = rows.iter().map(|&u| mu.get(u)).collect();
    let demand: Vec<f64> = cols.iter().map(|&v| nu.get(v)).collect();
    let x = transportation_simplex(&supply, &demand, &cost)?;
    let mut plan = BTreeMap::new();
    let mut value = 0.0;
    for (r, &u) in rows.iter().enumerate() {
        for (c, &v) in cols.iter().enumerate() {
            if x[r][c] > 0.0 {
                plan.insert((u, v), x[r][c]);
                value += x[r][c] * cost[r][c];
            }
        }
    }
    Ok((value, Coupling { plan }))
}

/// `sup Σ f(u)(mu(u) − nu(u))` over 1-Lipschitz `f` on the union of supports.
pub fn kantorovich_dual(
    mu: &FaceMeasure,
    nu: &FaceMeasure,
    metric: &FaceMetric,
) -> Result<(f64, LipschitzCertificate)> {
    let pts: Vec<usize> = mu
        .support()
        .chain(nu.support())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = pts.len();
    let d = cost_matrix(&pts, &pts, metric)?;
    let cap = d.iter().flatten().copied().fold(0.0, f64::max);
    let objective: Vec<f64> = pts.iter().map(|&u| mu.get(u) - nu.get(u)).collect();
    // Potentials are shift invariant (total mass difference is zero), so we
    // look for f in [0, diam]; the box keeps the program bounded.
    let mut a = Vec::with_capacity(n * n);
    let mut b = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let mut row = vec![0.0; n];
                row[u] = 1.0;
                row[v] = -1.0;
                a.push(row);
                b.push(d[u][v]);
            }
        }
        let mut row = vec![0.0; n];
        row[u] = 1.0;
        a.push(row);
        b.push(cap);
    }
    let sol = simplex::maximize(&objective, &a, &b)?;
    let potential = pts.iter().copied().zip(sol.x).collect();
    Ok((sol.value, LipschitzCertificate { potential }))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    Row(usize),
    Col(usize),
}

fn transportation_simplex(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let m = supply.len();
    let n = demand.len();
    let mut x = vec![vec![0.0; n]; m];
    let mut basic = vec![vec![false; n]; m];

    // north-west corner start: a staircase of m + n - 1 basic cells
    let (mut s, mut d) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    loop {
        let q = s[i].min(d[j]);
        x[i][j] = q;
        basic[i][j] = true;
        s[i] -= q;
        d[j] -= q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 {
            j += 1;
        } else if j == n - 1 || s[i] <= d[j] {
            i += 1;
        } else {
            j += 1;
        }
    }

    let max_iters = 50 * (m + n) * (m + n) + 1000;
    for _ in 0..max_iters {
        let (u, v) = potentials(&basic, cost);
        let entering = (0..m)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| !basic[r][c] && cost[r][c] - u[r] - v[c] < -1e-12);
        let Some((er, ec)) = entering else {
            return Ok(x);
        };
        let path = tree_path(&basic, Node::Col(ec), Node::Row(er));
        // path cells alternate -, +, -, ... starting from the entering column
        let minus: Vec<(usize, usize)> = path.iter().step_by(2).copied().collect();
        let theta = minus.iter().map(|&(r, c)| x[r][c]).fold(f64::INFINITY, f64::min);
        let leaving = minus
            .iter()
            .copied()
            .filter(|&(r, c)| x[r][c] <= theta)
            .min()
            .expect("cycle has a decreasing cell");
        for (k, &(r, c)) in path.iter().enumerate() {
            if k % 2 == 0 {
                x[r][c] -= theta;
            } else {
                x[r][c] += theta;
            }
        }
        x[er][ec] = theta;
        basic[er][ec] = true;
        basic[leaving.0][leaving.1] = false;
        x[leaving.0][leaving.1] = 0.0;
    }
    Err(Error::Solver("transportation simplex iteration limit reached".into()))
}

fn potentials(basic: &[Vec<bool>], cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let m = basic.len();
    let n = basic[0].len();
    let mut u = vec![f64::NAN; m];
    let mut v = vec![f64::NAN; n];
    u[0] = 0.0;
    let mut queue = VecDeque::from([Node::Row(0)]);
    while let Some(node) = queue.pop_front() {
        match node {
            Node::Row(r) => {
                for c in 0..n {
                    if basic[r][c] && v[c].is_nan() {
                        v[c] = cost[r][c] - u[r];
                        queue.push_back(Node::Col(c));
                    }
                }
            }
            Node::Col(c) => {
                for r in 0..m {
                    if basic[r][c] && u[r].is_nan() {
                        u[r] = cost[r][c] - v[c];
                        queue.push_back(Node::Row(r));
                    }
                }
            }
        }
    }
    (u, v)
}

/// Basic cells on the unique tree path between two nodes, in path order.
fn tree_path(basic: &[Vec<bool>], from: Node, to: Node) -> Vec<(usize, usize)> {
    let m = basic.len();
    let n = basic[0].len();
    let key = |node: Node| match node {
        Node::Row(r) => r,
        Node::Col(c) => m + c,
    };
    let mut parent: Vec<Option<Node>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    seen[key(from)] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        let next: Vec<Node> = match node {
            Node::Row(r) => (0..n).filter(|&c| basic[r][c]).map(Node::Col).collect(),
            Node::Col(c) => (0..m).filter(|&r| basic[r][c]).map(Node::Row).collect(),
        };
        for nb in next {
            if !seen[key(nb)] {
                seen[key(nb)] = true;
                parent[key(nb)] = Some(node);
                queue.push_back(nb);
            }
        }
    }
    let mut cells = Vec::new();
    let mut cur = to;
    while cur != from {
        let prev = parent[key(cur)].expect("basis is a spanning tree");
        cells.push(match (prev, cur) {
            (Node::Row(r), Node::Col(c)) | (Node::Col(c), Node::Row(r)) => (r, c),
            _ => unreachable!("bipartite tree"),
        });
        cur = prev;
    }
    cells.reverse();
    cells
}
