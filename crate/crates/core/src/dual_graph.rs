//! Face-adjacency ("dual") graph of a pure complex, its simple-random-walk
//! Ollivier curvature and normalized Laplacian spectrum.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, WeightAssignment};
use crate::curvature::checks::{delta_k_min, regular_degree, CheckOptions, CheckOutcome};
use crate::curvature::BOUND_TOL;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::spectral::{down_laplacian, multiset_deviation, spectrum, spectrum_of_symmetric, Spectrum};
use crate::transport::{wasserstein, FaceMeasure, FaceMetric};

#[derive(Clone, Debug)]
pub struct DualGraph {
    dim: usize,
    faces: Vec<Face>,
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    metric: FaceMetric,
}

/// Vertices are the top faces in index order; two are joined when they share a codimension-1 face.
pub fn build_dual(k: &SimplicialComplex, i: usize) -> Result<DualGraph> {
    k.require_pure()?;
    if i == 0 || i != k.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, max: k.dim() });
    }
    let n = k.face_count(i);
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|f| {
            let mut ns: Vec<usize> = k.neighbors(i, f).into_iter().map(|(g, _)| g).collect();
            ns.sort_unstable();
            ns
        })
        .collect();
    let edges = adjacency
        .iter()
        .enumerate()
        .flat_map(|(f, ns)| ns.iter().filter(move |&&g| g > f).map(move |&g| (f, g)))
        .collect();
    Ok(DualGraph {
        dim: i,
        faces: k.faces(i).to_vec(),
        labels: k.faces(i).iter().map(|f| k.display_face(f)).collect(),
        metric: FaceMetric::from_adjacency(i, &adjacency),
        adjacency,
        edges,
    })
}

impl DualGraph {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn metric(&self) -> &FaceMetric {
        &self.metric
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Common degree, if every vertex has the same number of neighbours.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map(Vec::len)?;
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges.iter().all(|&(x, y)| {
            !self.adjacency[x]
                .iter()
                .any(|z| self.adjacency[y].binary_search(z).is_ok())
        })
    }

    fn walk_measure(&self, x: usize) -> Result<FaceMeasure> {
        let ns = &self.adjacency[x];
        if ns.is_empty() {
            return Err(Error::IsolatedVertex(x));
        }
        let p = 1.0 / ns.len() as f64;
        FaceMeasure::new(ns.iter().map(|&v| (v, p)).collect::<BTreeMap<_, _>>())
    }
}

/// `1 − W(m_x, m_y)` with `m_x` uniform on the neighbours of `x`.
pub fn graph_ricci(g: &DualGraph, x: usize, y: usize) -> Result<f64> {
    let n = g.vertex_count();
    if x >= n || y >= n {
        return Err(Error::BadParams(format!("vertex out of range (graph has {n})")));
    }
    if !g.is_adjacent(x, y) {
        return Err(Error::NotAdjacent(g.labels[x].clone(), g.labels[y].clone()));
    }
    let (w, _) = wasserstein(&g.walk_measure(x)?, &g.walk_measure(y)?, &g.metric)?;
    Ok(1.0 - w)
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdgeCurvature {
    pub edge: (usize, usize),
    pub labels: (String, String),
    pub kappa: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphCurvature {
    pub edges: Vec<GraphEdgeCurvature>,
    pub k_min: Option<f64>,
}

pub fn graph_curvature(g: &DualGraph) -> Result<GraphCurvature> {
    let edges = g
        .edges
        .iter()
        .map(|&(x, y)| {
            Ok(GraphEdgeCurvature {
                edge: (x, y),
                labels: (g.labels[x].clone(), g.labels[y].clone()),
                kappa: graph_ricci(g, x, y)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k_min = edges.iter().map(|e| e.kappa).reduce(f64::min);
    Ok(GraphCurvature { edges, k_min })
}

/// Spectrum of `I − D^{-1/2} A D^{-1/2}`.
pub fn normalized_graph_spectrum(g: &DualGraph, zero_threshold: f64) -> Result<Spectrum> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut s = DenseMatrix::zeros(n, n);
    for x in 0..n {
        s[(x, x)] = 1.0;
        for &y in g.neighbors(x) {
            s[(x, y)] = -inv_sqrt[x] * inv_sqrt[y];
        }
    }
    spectrum_of_symmetric(&s, zero_threshold)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralRelationReport {
    pub dim: usize,
    /// `(i+1)/2`
    pub factor: f64,
    pub down_spectrum: Vec<f64>,
    pub graph_spectrum: Vec<f64>,
    /// Largest `|λ_k − factor·μ_k|` over sorted spectra.
    pub positional_deviation: f64,
    pub positional_holds: bool,
    pub down_zero_multiplicity: usize,
    pub graph_zero_multiplicity: usize,
    /// Deviation of the nonzero parts compared as multisets (the asserted part).
    pub nonzero_deviation: f64,
    pub outcome: CheckOutcome,
    pub note: Option<String>,
}

/// Compares the top down-Laplacian spectrum (delta weights) with the scaled
/// normalized spectrum of the dual graph.
pub fn hj_relation_check(k: &SimplicialComplex, zero_threshold: f64) -> Result<SpectralRelationReport> {
    let (i, r) = regular_degree(k)?;
    let w = WeightAssignment::delta(k)?;
    let factor = (i + 1) as f64 / 2.0;
    let lambda = spectrum(&down_laplacian(k, i, &w)?, zero_threshold)?;
    let g = build_dual(k, i)?;
    let mu = match normalized_graph_spectrum(&g, zero_threshold) {
        Ok(s) => s,
        Err(Error::IsolatedVertex(_)) => {
            return Ok(unmet_relation(i, factor, lambda, "dual graph has an isolated vertex"));
        }
        Err(e) => return Err(e),
    };
    if (r - 1.0).abs() <= 1e-12 {
        return Ok(unmet_relation(i, factor, lambda, "codimension-1 faces have degree 1"));
    }
    let scaled: Vec<f64> = mu.eigenvalues.iter().map(|m| factor * m).collect();
    let positional_deviation = lambda
        .eigenvalues
        .iter()
        .zip(&scaled)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scaled_nonzero: Vec<f64> = mu.nonzero().iter().map(|m| factor * m).collect();
    let nonzero_deviation = multiset_deviation(&lambda.nonzero(), &scaled_nonzero);
    let zl = lambda.zero_multiplicity();
    let zm = mu.zero_multiplicity();
    Ok(SpectralRelationReport {
        dim: i,
        factor,
        positional_holds: positional_deviation <= BOUND_TOL,
        positional_deviation,
        down_zero_multiplicity: zl,
        graph_zero_multiplicity: zm,
        nonzero_deviation,
        outcome: CheckOutcome::from_pass(nonzero_deviation <= BOUND_TOL),
        note: (zl != zm).then(|| format!("zero multiplicities differ: {zl} vs {zm}")),
        down_spectrum: lambda.eigenvalues,
        graph_spectrum: mu.eigenvalues,
    })
}

fn unmet_relation(dim: usize, factor: f64, lambda: Spectrum, why: &str) -> SpectralRelationReport {
    SpectralRelationReport {
        dim,
        factor,
        down_zero_multiplicity: lambda.zero_multiplicity(),
        down_spectrum: lambda.eigenvalues,
        graph_spectrum: Vec::new(),
        positional_deviation: f64::NAN,
        positional_holds: false,
        graph_zero_multiplicity: 0,
        nonzero_deviation: f64::NAN,
        outcome: CheckOutcome::HypothesisUnmet,
        note: Some(why.to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureRelationReport {
    pub k_min: f64,
    pub graph_k_min: Option<f64>,
    /// `1 − k^G/2`
    pub graph_side: Option<f64>,
    pub slack: Option<f64>,
    pub outcome: CheckOutcome,
    pub note: Option<String>,
}

/// Minimum face curvature is at most `1 − k^G/2` when the dual graph has positive curvature.
pub fn corollary_relation_check(k: &SimplicialComplex, opts: &CheckOptions) -> Result<CurvatureRelationReport> {
    let (i, _) = regular_degree(k)?;
    let w = WeightAssignment::delta(k)?;
    let k_min = delta_k_min(k, &w, i, opts)?;
    let g = build_dual(k, i)?;
    let graph_k_min = graph_curvature(&g)?.k_min;
    match graph_k_min {
        Some(kg) if kg > 0.0 => {
            let side = 1.0 - kg / 2.0;
            let slack = side - k_min;
            Ok(CurvatureRelationReport {
                k_min,
                graph_k_min,
                graph_side: Some(side),
                slack: Some(slack),
                outcome: CheckOutcome::from_pass(slack >= -BOUND_TOL),
                note: None,
            })
        }
        _ => Ok(CurvatureRelationReport {
            k_min,
            graph_k_min,
            graph_side: None,
            slack: None,
            outcome: CheckOutcome::HypothesisUnmet,
            note: Some(Error::NonPositiveGraphCurvature(graph_k_min.unwrap_or(f64::NAN)).to_string()),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(f: &[&[u64]]) -> SimplicialComplex {
        SimplicialComplex::build(&f.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn tetra() -> SimplicialComplex {
        build(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
    }

    fn cycle(n: u64) -> SimplicialComplex {
        SimplicialComplex::build(&(0..n).map(|v| vec![v, (v + 1) % n]).collect::<Vec<_>>()).unwrap()
    }

    fn torus(m: u64, n: u64) -> SimplicialComplex {
        let id = |a: u64, b: u64| (a % m) * n + (b % n);
        let mut facets = Vec::new();
        for a in 0..m {
            for b in 0..n {
                facets.push(vec![id(a, b), id(a + 1, b), id(a + 1, b + 1)]);
                facets.push(vec![id(a, b), id(a, b + 1), id(a + 1, b + 1)]);
            }
        }
        SimplicialComplex::build(&facets).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn dual_shapes() {
        let g = build_dual(&tetra(), 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.regular_degree(), Some(3));

        let g = build_dual(&cycle(7), 1).unwrap();
        assert_eq!(g.edges().len(), 7);
        assert_eq!(g.regular_degree(), Some(2));

        let g = build_dual(&build(&[&[0, 1, 2], &[1, 2, 3]]), 2).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);

        let t = torus(3, 3);
        let g = build_dual(&t, 2).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edges().len(), t.face_count(1));
        assert!(g.is_triangle_free());

        let mixed = build(&[&[0, 1, 2], &[2, 3]]);
        assert!(matches!(build_dual(&mixed, 2), Err(Error::NotPure(_))));
        assert!(build_dual(&tetra(), 1).is_err());
    }

    #[test]
    fn graph_curvature_examples() {
        let g = build_dual(&tetra(), 2).unwrap();
        for &(x, y) in g.edges() {
            assert!((graph_ricci(&g, x, y).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        }
        for n in [4, 5, 6, 9] {
            let g = build_dual(&cycle(n), 1).unwrap();
            let c = graph_curvature(&g).unwrap();
            assert!(c.edges.iter().all(|e| e.kappa.abs() < 1e-12), "C_{n}");
        }
        let g = build_dual(&cycle(3), 1).unwrap();
        assert!((graph_ricci(&g, 0, 1).unwrap() - 0.5).abs() < 1e-12);

        let g = build_dual(&build(&[&[0, 1, 2], &[1, 2, 3]]), 2).unwrap();
        assert!(graph_ricci(&g, 0, 1).unwrap().abs() < 1e-12);

        let g = build_dual(&build(&[&[0, 1, 2], &[3, 4, 5]]), 2).unwrap();
        assert!(matches!(graph_ricci(&g, 0, 1), Err(Error::NotAdjacent(..))));
    }

    #[test]
    fn triangle_free_duals_are_nonpositive() {
        let g = build_dual(&torus(4, 3), 2).unwrap();
        assert!(g.is_triangle_free());
        let c = graph_curvature(&g).unwrap();
        assert!(c.edges.iter().all(|e| e.kappa <= 1e-12));
    }

    #[test]
    fn normalized_spectra() {
        let s = normalized_graph_spectrum(&build_dual(&tetra(), 2).unwrap(), 1e-8).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0], 1e-12));
        let s = normalized_graph_spectrum(&build_dual(&cycle(4), 1).unwrap(), 1e-8).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 1.0, 1.0, 2.0], 1e-12));
        let two = build(&[&[0, 1, 2], &[1, 2, 3]]);
        let s = normalized_graph_spectrum(&build_dual(&two, 2).unwrap(), 1e-8).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 2.0], 1e-12));
        let single = build(&[&[0, 1, 2]]);
        assert!(matches!(
            normalized_graph_spectrum(&build_dual(&single, 2).unwrap(), 1e-8),
            Err(Error::IsolatedVertex(0))
        ));
    }

    #[test]
    fn spectral_relation() {
        let r = hj_relation_check(&tetra(), 1e-8).unwrap();
        assert_eq!(r.outcome, CheckOutcome::Pass);
        assert!(r.nonzero_deviation < 1e-9);
        assert!(r.positional_holds);

        let r = hj_relation_check(&cycle(6), 1e-8).unwrap();
        assert_eq!(r.factor, 1.0);
        assert!(r.positional_holds);
        assert_eq!(r.outcome, CheckOutcome::Pass);

        let r = hj_relation_check(&torus(3, 3), 1e-8).unwrap();
        assert_eq!(r.outcome, CheckOutcome::Pass);

        let r = hj_relation_check(&build(&[&[0, 1, 2]]), 1e-8).unwrap();
        assert_eq!(r.outcome, CheckOutcome::HypothesisUnmet);

        assert!(matches!(
            hj_relation_check(&build(&[&[0, 1, 2], &[1, 2, 3]]), 1e-8),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn curvature_relation() {
        let opts = CheckOptions::default();
        let r = corollary_relation_check(&tetra(), &opts).unwrap();
        assert_eq!(r.outcome, CheckOutcome::Pass);
        assert!((r.graph_side.unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!(r.slack.unwrap().abs() < 1e-7);

        let r = corollary_relation_check(&cycle(6), &opts).unwrap();
        assert_eq!(r.outcome, CheckOutcome::HypothesisUnmet);

        let r = corollary_relation_check(&torus(3, 3), &opts).unwrap();
        assert_eq!(r.outcome, CheckOutcome::HypothesisUnmet);
    }
}
