//! Fixtures and independent reference implementations shared by the
//! integration tests. Nothing here goes through the library's solvers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sricci::complex::SimplicialComplex;
use sricci::document::ComplexDocument;
use sricci::generate;

pub fn fixtures() -> Vec<ComplexDocument> {
    vec![
        generate::tetrahedron(),
        generate::torus_grid(3, 3).unwrap(),
        generate::torus_grid(4, 4).unwrap(),
        generate::cycle(4).unwrap(),
        generate::cycle(5).unwrap(),
        generate::cycle(6).unwrap(),
        generate::cycle(8).unwrap(),
        generate::complete_graph(4).unwrap(),
        generate::complete_graph(5).unwrap(),
        generate::circulant(8, &[1, 2]).unwrap(),
    ]
}

/// Random pure 2-complex: `facets` distinct triangles on `0..vertices`.
pub fn random_pure_2_complex(rng: &mut StdRng, vertices: u64, facets: usize) -> Vec<Vec<u64>> {
    let mut all = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                all.push(vec![a, b, c]);
            }
        }
    }
    all.shuffle(rng);
    all.truncate(facets);
    // random labels so the input order does not match sorted order
    let offset = rng.gen_range(0..100u64);
    all.into_iter()
        .map(|f| f.into_iter().map(|v| v * 7 + offset).collect())
        .collect()
}

/// All pairwise hop distances of a graph given by adjacency sets (Floyd–Warshall).
pub fn all_pairs(adj: &[BTreeSet<usize>]) -> Vec<Vec<Option<u32>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for &v in &adj[u] {
            d[u][v] = Some(1);
        }
    }
    for m in 0..n {
        for u in 0..n {
            for v in 0..n {
                if let (Some(a), Some(b)) = (d[u][m], d[m][v]) {
                    if d[u][v].is_none_or(|c| a + b < c) {
                        d[u][v] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Exact `W(mu, nu)` for an integer metric: the Kantorovich dual attains its
/// optimum at an integer-valued 1-Lipschitz potential on the joint support, so
/// a depth-first enumeration of such potentials (anchored at 0) is exact.
pub fn lipschitz_enumeration(
    mu: &BTreeMap<usize, f64>,
    nu: &BTreeMap<usize, f64>,
    dist: &dyn Fn(usize, usize) -> u32,
) -> f64 {
    let support: Vec<usize> = mu
        .keys()
        .chain(nu.keys())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let diff: Vec<f64> = support
        .iter()
        .map(|s| mu.get(s).copied().unwrap_or(0.0) - nu.get(s).copied().unwrap_or(0.0))
        .collect();
    let diam = support
        .iter()
        .flat_map(|&a| support.iter().map(move |&b| (a, b)))
        .map(|(a, b)| dist(a, b))
        .max()
        .unwrap_or(0) as i64;
    let mut values = vec![0i64; support.len()];
    let mut best = f64::NEG_INFINITY;
    fn dfs(
        j: usize,
        values: &mut Vec<i64>,
        support: &[usize],
        diff: &[f64],
        diam: i64,
        dist: &dyn Fn(usize, usize) -> u32,
        best: &mut f64,
    ) {
        if j == support.len() {
            let v: f64 = values.iter().zip(diff).map(|(&f, &m)| f as f64 * m).sum();
            *best = best.max(v);
            return;
        }
        let range = if j == 0 { 0..=0 } else { -diam..=diam };
        for x in range {
            let ok = (0..j).all(|p| (x - values[p]).abs() <= dist(support[j], support[p]) as i64);
            if ok {
                values[j] = x;
                dfs(j + 1, values, support, diff, diam, dist, best);
            }
        }
    }
    dfs(0, &mut values, &support, &diff, diam, dist, &mut best);
    best
}

/// Curvature between edges of a graph treated as a 1-complex under delta
/// weights, written directly from the measure definition on edges.
pub struct GraphEdgeOracle {
    pub edges: Vec<(u64, u64)>,
    vertex_degree: BTreeMap<u64, usize>,
    dist: Vec<Vec<Option<u32>>>,
}

impl GraphEdgeOracle {
    pub fn new(edges: &[(u64, u64)]) -> Self {
        let edges: Vec<(u64, u64)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut vertex_degree = BTreeMap::new();
        for &(a, b) in &edges {
            *vertex_degree.entry(a).or_insert(0) += 1;
            *vertex_degree.entry(b).or_insert(0) += 1;
        }
        let adj: Vec<BTreeSet<usize>> = (0..edges.len())
            .map(|i| {
                (0..edges.len())
                    .filter(|&j| j != i && Self::meet(edges[i], edges[j]).is_some())
                    .collect()
            })
            .collect();
        let dist = all_pairs(&adj);
        GraphEdgeOracle {
            edges,
            vertex_degree,
            dist,
        }
    }

    fn meet(a: (u64, u64), b: (u64, u64)) -> Option<u64> {
        [a.0, a.1].into_iter().find(|v| *v == b.0 || *v == b.1)
    }

    pub fn index(&self, e: (u64, u64)) -> usize {
        let e = (e.0.min(e.1), e.0.max(e.1));
        self.edges.iter().position(|&x| x == e).expect("edge")
    }

    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.edges.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.dist[i][j] == Some(1))
            .collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i][j]
    }

    /// Edge weight 1; a vertex weighs (and has degree) its number of incident edges.
    pub fn measure(&self, i: usize, eps: f64) -> BTreeMap<usize, f64> {
        let (a, b) = self.edges[i];
        let mut m = BTreeMap::new();
        let mut own = 1.0 - eps;
        for v in [a, b] {
            let deg = self.vertex_degree[&v] as f64;
            own += eps / (2.0 * deg);
            for (j, &e) in self.edges.iter().enumerate() {
                if j != i && (e.0 == v || e.1 == v) {
                    *m.entry(j).or_insert(0.0) += eps / (2.0 * deg);
                }
            }
        }
        m.insert(i, own);
        m
    }

    pub fn epsilon_curvature(&self, i: usize, j: usize, eps: f64) -> f64 {
        let d = self.dist[i][j].expect("connected");
        let w = lipschitz_enumeration(&self.measure(i, eps), &self.measure(j, eps), &|a, b| {
            self.dist[a][b].expect("connected")
        });
        1.0 - w / d as f64
    }

    /// `κ_ε/ε` at two tiny ε; both lie on the first linear piece, so they agree.
    pub fn curvature(&self, i: usize, j: usize) -> (f64, f64) {
        let e1 = 2f64.powi(-12);
        let e2 = 2f64.powi(-13);
        (
            self.epsilon_curvature(i, j, e1) / e1,
            self.epsilon_curvature(i, j, e2) / e2,
        )
    }
}

/// Orientability by trying every sign assignment on the facets.
pub fn orientable_by_search(facets: &[Vec<u64>]) -> bool {
    let facets: Vec<Vec<u64>> = facets
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f
        })
        .collect();
    // (codim-1 face, facet index, induced sign)
    let mut incid: BTreeMap<Vec<u64>, Vec<(usize, i32)>> = BTreeMap::new();
    for (fi, f) in facets.iter().enumerate() {
        for j in 0..f.len() {
            let mut e = f.clone();
            e.remove(j);
            incid.entry(e).or_default().push((fi, if j % 2 == 0 { 1 } else { -1 }));
        }
    }
    let m = facets.len();
    (0u64..1 << m).any(|mask| {
        let s = |fi: usize| if mask >> fi & 1 == 1 { -1 } else { 1 };
        incid.values().all(|list| {
            list.iter()
                .enumerate()
                .all(|(a, &(fa, sa))| list[a + 1..].iter().all(|&(fb, sb)| s(fa) * sa + s(fb) * sb == 0))
        })
    })
}

pub fn complex(doc: &ComplexDocument) -> SimplicialComplex {
    doc.complex().expect("fixture builds")
}
