//! Ricci curvature between `i`-faces.
//!
//! Each face `F` carries the dispersion measure `m_F^ε`: it keeps
//! `1 − ε + (ε/(i+1)) Σ_{E∈∂F} w(F)/deg E` at `F` and puts
//! `ε w(F')/((i+1) deg E)` on every face `F'` meeting `F` along `E`.
//! `κ_ε(F, F') = 1 − W(m_F^ε, m_F'^ε)/d(F, F')` and `κ = lim κ_ε/ε`.

pub mod checks;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, WeightAssignment};
use crate::error::{Error, Result};
use crate::transport::{face_metric, wasserstein, FaceMeasure, FaceMetric};

/// Additive tolerance for every curvature bound comparison.
pub const BOUND_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitOptions {
    /// Stop once two consecutive `κ_ε/ε` samples agree this closely.
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            tolerance: 1e-9,
            max_halvings: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureResult {
    pub faces: (usize, usize),
    pub labels: (String, String),
    pub distance: u32,
    /// `(ε, κ_ε)` in sampling order (ε = 1/2, 1/4, ...).
    pub samples: Vec<(f64, f64)>,
    pub kappa: f64,
    pub converged: bool,
    /// Lower and upper bounds, only for adjacent pairs.
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
}

impl CurvatureResult {
    pub fn halvings(&self) -> usize {
        self.samples.len()
    }

    /// `lower − tol ≤ κ ≤ upper + tol ≤ 1 + tol` (vacuous for non-adjacent pairs).
    pub fn bracketed(&self) -> bool {
        match (self.lower_bound, self.upper_bound) {
            (Some(lo), Some(hi)) => {
                lo - BOUND_TOL <= self.kappa && self.kappa <= hi + BOUND_TOL && hi <= 1.0 + BOUND_TOL
            }
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalCurvatureSummary {
    pub dim: usize,
    pub pairs: Vec<CurvatureResult>,
    /// Minimum curvature over adjacent pairs.
    pub k_min: Option<f64>,
    /// Sampled non-adjacent pairs used to confirm the adjacent minimum bounds every pair.
    pub distant_samples: Vec<CurvatureResult>,
    pub distant_pairs_bounded: bool,
    pub warnings: Vec<String>,
}

/// Curvature evaluator for the `dim`-faces of a complex under fixed weights.
pub struct FaceCurvature<'a> {
    complex: &'a SimplicialComplex,
    weights: &'a WeightAssignment,
    dim: usize,
    metric: FaceMetric,
    boundary_degree: Vec<f64>,
    limit: LimitOptions,
}

impl<'a> FaceCurvature<'a> {
    pub fn new(complex: &'a SimplicialComplex, weights: &'a WeightAssignment, dim: usize) -> Result<Self> {
        let metric = face_metric(complex, dim)?;
        let boundary_degree = (0..complex.face_count(dim - 1))
            .map(|e| complex.degree_of(dim - 1, e, weights))
            .collect();
        Ok(FaceCurvature {
            complex,
            weights,
            dim,
            metric,
            boundary_degree,
            limit: LimitOptions::default(),
        })
    }

    pub fn with_limit(mut self, limit: LimitOptions) -> Self {
        self.limit = limit;
        self
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &FaceMetric {
        &self.metric
    }

    pub fn face_count(&self) -> usize {
        self.complex.face_count(self.dim)
    }

    fn label(&self, f: usize) -> String {
        self.complex.display_face(self.complex.face(self.dim, f))
    }

    fn check_face(&self, f: usize) -> Result<()> {
        if f < self.face_count() {
            Ok(())
        } else {
            Err(Error::FaceNotInComplex(format!("{}-face #{f}", self.dim)))
        }
    }

    fn arity(&self) -> f64 {
        (self.dim + 1) as f64
    }

    /// `(1/(i+1)) Σ_{E∈∂F} w(F)/deg E`.
    pub fn retained_share(&self, f: usize) -> f64 {
        let wf = self.weights.get(self.dim, f);
        self.complex
            .boundary(self.dim, f)
            .iter()
            .map(|&e| wf / self.boundary_degree[e])
            .sum::<f64>()
            / self.arity()
    }

    pub fn dispersion_measure(&self, f: usize, eps: f64) -> Result<FaceMeasure> {
        self.check_face(f)?;
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::BadParams(format!("ε = {eps} outside [0, 1]")));
        }
        let i1 = self.arity();
        let mut masses = BTreeMap::new();
        let mut own = 1.0 - eps;
        for &e in self.complex.boundary(self.dim, f) {
            let deg = self.boundary_degree[e];
            if deg <= 0.0 {
                return Err(Error::BoundaryDegreeZero(
                    self.complex.display_face(self.complex.face(self.dim - 1, e)),
                ));
            }
            own += eps * self.weights.get(self.dim, f) / (i1 * deg);
            for &g in self.complex.cofacets(self.dim - 1, e) {
                if g != f {
                    *masses.entry(g).or_insert(0.0) += eps * self.weights.get(self.dim, g) / (i1 * deg);
                }
            }
        }
        masses.insert(f, own);
        FaceMeasure::new(masses)
    }

    fn distance(&self, f: usize, g: usize) -> Result<u32> {
        self.check_face(f)?;
        self.check_face(g)?;
        if f == g {
            return Err(Error::BadParams("curvature needs two distinct faces".into()));
        }
        self.metric
            .distance(f, g)
            .ok_or_else(|| Error::DisconnectedPair(self.label(f), self.label(g)))
    }

    pub fn epsilon_ricci(&self, f: usize, g: usize, eps: f64) -> Result<f64> {
        let d = self.distance(f, g)?;
        let mu = self.dispersion_measure(f, eps)?;
        let nu = self.dispersion_measure(g, eps)?;
        let (w, _) = wasserstein(&mu, &nu, &self.metric)?;
        Ok(1.0 - w / f64::from(d))
    }

    /// `κ` by evaluating `κ_ε/ε` at `ε = 2^-j` until consecutive values agree.
    pub fn ricci(&self, f: usize, g: usize) -> Result<CurvatureResult> {
        let d = self.distance(f, g)?;
        let mut samples = Vec::new();
        let mut prev: Option<f64> = None;
        let mut ratio = f64::NAN;
        let mut converged = false;
        for j in 1..=self.limit.max_halvings {
            let eps = 0.5f64.powi(j as i32);
            let k = self.epsilon_ricci(f, g, eps)?;
            samples.push((eps, k));
            ratio = k / eps;
            if prev.is_some_and(|p| (p - ratio).abs() <= self.limit.tolerance) {
                converged = true;
                break;
            }
            prev = Some(ratio);
        }
        let adjacent = d == 1;
        Ok(CurvatureResult {
            faces: (f, g),
            labels: (self.label(f), self.label(g)),
            distance: d,
            samples,
            kappa: ratio,
            converged,
            lower_bound: if adjacent { Some(self.lower_bound(f, g)?) } else { None },
            upper_bound: if adjacent { Some(self.upper_bound(f, g)?) } else { None },
        })
    }

    /// Triangle-inequality cap on `κ_ε`:
    /// `(ε/d)(2 − share(F) − share(F'))`.
    pub fn kappa_eps_upper(&self, f: usize, g: usize, eps: f64) -> Result<f64> {
        let d = self.distance(f, g)?;
        Ok(eps / f64::from(d) * (2.0 - self.retained_share(f) - self.retained_share(g)))
    }

    fn shared(&self, f: usize, g: usize) -> Result<usize> {
        self.check_face(f)?;
        self.check_face(g)?;
        self.complex
            .shared_face(self.dim, f, g)
            .ok_or_else(|| Error::NotAdjacent(self.label(f), self.label(g)))
    }

    /// Faces adjacent to both `f` and `g` through a face of `f` other than
    /// their common one, with `(deg Ē, deg Ē')` for the faces shared with `f` and `g`.
    fn common_neighbors(&self, f: usize, g: usize, e: usize) -> Vec<(usize, f64, f64)> {
        self.complex
            .neighbors(self.dim, f)
            .into_iter()
            .filter(|&(h, eb)| eb != e && h != g)
            .filter_map(|(h, eb)| {
                self.complex
                    .shared_face(self.dim, g, h)
                    .map(|eb2| (h, self.boundary_degree[eb], self.boundary_degree[eb2]))
            })
            .collect()
    }

    /// Lower bound from an explicit transport plan between the two dispersion measures.
    pub fn lower_bound(&self, f: usize, g: usize) -> Result<f64> {
        let e = self.shared(f, g)?;
        let i1 = self.arity();
        let sum: f64 = self
            .common_neighbors(f, g, e)
            .into_iter()
            .map(|(h, d1, d2)| {
                let wh = self.weights.get(self.dim, h);
                2.0 * wh / d1.min(d2) + wh / d1.max(d2)
            })
            .sum();
        let wf = self.weights.get(self.dim, f);
        let wg = self.weights.get(self.dim, g);
        Ok((3.0 + sum) / i1 - (wf + wg) / (i1 * self.boundary_degree[e]) - 2.0)
    }

    /// Upper bound from the mass the two dispersion measures have in common.
    pub fn upper_bound(&self, f: usize, g: usize) -> Result<f64> {
        let e = self.shared(f, g)?;
        let sum: f64 = self
            .common_neighbors(f, g, e)
            .into_iter()
            .map(|(h, d1, d2)| self.weights.get(self.dim, h) / d1.max(d2))
            .sum();
        Ok((1.0 + sum) / self.arity())
    }

    /// All adjacent pairs `f < g`, in index order.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in 0..self.face_count() {
            let mut ns: Vec<usize> = self
                .complex
                .neighbors(self.dim, f)
                .into_iter()
                .map(|(g, _)| g)
                .filter(|&g| g > f)
                .collect();
            ns.sort_unstable();
            out.extend(ns.into_iter().map(|g| (f, g)));
        }
        out
    }

    /// Curvature of every adjacent pair, plus a deterministic sample of up to
    /// `distant_sample` pairs at distance ≥ 2 checked against the minimum.
    pub fn global(&self, distant_sample: usize) -> Result<GlobalCurvatureSummary> {
        let mut pairs = Vec::new();
        for (f, g) in self.adjacent_pairs() {
            pairs.push(self.ricci(f, g)?);
        }
        let k_min = pairs.iter().map(|r| r.kappa).reduce(f64::min);

        let n = self.face_count();
        let mut distant = Vec::new();
        let mut disconnected = 0usize;
        for f in 0..n {
            for g in f + 1..n {
                match self.metric.distance(f, g) {
                    None => disconnected += 1,
                    Some(d) if d >= 2 => distant.push((f, g)),
                    _ => {}
                }
            }
        }
        let mut warnings = Vec::new();
        if disconnected > 0 {
            warnings.push(format!(
                "{disconnected} pair(s) of {}-faces lie in different components and were skipped",
                self.dim
            ));
        }
        let stride = distant.len().div_ceil(distant_sample.max(1)).max(1);
        let mut distant_samples = Vec::new();
        for &(f, g) in distant.iter().step_by(stride).take(distant_sample) {
            distant_samples.push(self.ricci(f, g)?);
        }
        let distant_pairs_bounded = match k_min {
            Some(k) => distant_samples.iter().all(|r| r.kappa >= k - BOUND_TOL),
            None => true,
        };
        Ok(GlobalCurvatureSummary {
            dim: self.dim,
            pairs,
            k_min,
            distant_samples,
            distant_pairs_bounded,
            warnings,
        })
    }
}

fn face_pair(k: &SimplicialComplex, a: &Face, b: &Face) -> Result<(usize, usize, usize)> {
    if a.dim() != b.dim() {
        return Err(Error::BadParams("faces have different dimensions".into()));
    }
    Ok((a.dim(), k.require_index(a)?, k.require_index(b)?))
}

/// Dispersion measure of `face` (indices of the resulting measure are faces of the same dimension).
pub fn dispersion_measure(k: &SimplicialComplex, face: &Face, eps: f64, w: &WeightAssignment) -> Result<FaceMeasure> {
    let f = k.require_index(face)?;
    FaceCurvature::new(k, w, face.dim())?.dispersion_measure(f, eps)
}

pub fn epsilon_ricci(k: &SimplicialComplex, a: &Face, b: &Face, eps: f64, w: &WeightAssignment) -> Result<f64> {
    let (d, f, g) = face_pair(k, a, b)?;
    FaceCurvature::new(k, w, d)?.epsilon_ricci(f, g, eps)
}

pub fn ricci(k: &SimplicialComplex, a: &Face, b: &Face, w: &WeightAssignment) -> Result<CurvatureResult> {
    let (d, f, g) = face_pair(k, a, b)?;
    FaceCurvature::new(k, w, d)?.ricci(f, g)
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

    const TOL: f64 = 1e-9;

    #[test]
    fn tetrahedron_measure() {
        let k = tetra();
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        let m = fc.dispersion_measure(0, 0.5).unwrap();
        assert!((m.get(0) - 0.75).abs() < 1e-15);
        for g in 1..4 {
            assert!((m.get(g) - 1.0 / 12.0).abs() < 1e-15);
        }
        assert!((m.total() - 1.0).abs() < 1e-15);
        assert_eq!(fc.dispersion_measure(0, 0.0).unwrap(), FaceMeasure::point(0));
        assert!(fc.dispersion_measure(0, 1.5).is_err());
    }

    #[test]
    fn cycle_measure() {
        let k = cycle(6);
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 1).unwrap();
        let m = fc.dispersion_measure(0, 0.5).unwrap();
        assert_eq!(m.get(0), 0.75);
        let others: Vec<f64> = m.iter().filter(|(f, _)| *f != 0).map(|(_, x)| x).collect();
        assert_eq!(others, vec![0.125, 0.125]);
    }

    #[test]
    fn epsilon_ricci_examples() {
        let k = tetra();
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        assert_eq!(fc.epsilon_ricci(0, 1, 0.0).unwrap(), 0.0);
        assert!((fc.epsilon_ricci(0, 1, 0.5).unwrap() - 1.0 / 3.0).abs() < TOL);

        let c = cycle(6);
        let wc = WeightAssignment::delta(&c).unwrap();
        let fc = FaceCurvature::new(&c, &wc, 1).unwrap();
        let (f, g) = fc.adjacent_pairs()[0];
        assert!(fc.epsilon_ricci(f, g, 0.5).unwrap().abs() < TOL);
    }

    #[test]
    fn ricci_examples() {
        let k = tetra();
        let w = WeightAssignment::delta(&k).unwrap();
        let r = ricci(&k, k.face(2, 0), k.face(2, 3), &w).unwrap();
        assert!(r.converged);
        assert!((r.kappa - 2.0 / 3.0).abs() < TOL, "{r:?}");
        assert!((r.upper_bound.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.lower_bound.unwrap() + 1.0 / 3.0).abs() < 1e-15);

        let t = torus(3, 3);
        let wt = WeightAssignment::delta(&t).unwrap();
        let fc = FaceCurvature::new(&t, &wt, 2).unwrap();
        for (f, g) in fc.adjacent_pairs() {
            let r = fc.ricci(f, g).unwrap();
            // W = 1 + ε/3: neighbour mass ε/6 on each side travels distance 3
            assert!((r.kappa + 1.0 / 3.0).abs() < 1e-9, "{r:?}");
            assert!((r.lower_bound.unwrap() + 4.0 / 3.0).abs() < 1e-15);
            assert!((r.upper_bound.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }

        let c = cycle(6);
        let wc = WeightAssignment::delta(&c).unwrap();
        let fc = FaceCurvature::new(&c, &wc, 1).unwrap();
        let r = fc.ricci(0, 1).unwrap();
        assert!(r.kappa.abs() < TOL);
    }

    #[test]
    fn curvature_is_symmetric() {
        let t = torus(3, 4);
        let w = WeightAssignment::delta(&t).unwrap();
        let fc = FaceCurvature::new(&t, &w, 2).unwrap();
        for (f, g) in [(0, 1), (0, 7), (3, 20)] {
            let a = fc.ricci(f, g).unwrap().kappa;
            let b = fc.ricci(g, f).unwrap().kappa;
            assert!((a - b).abs() < TOL);
        }
    }

    #[test]
    fn lemma_cap_examples() {
        let k = tetra();
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        assert!((fc.kappa_eps_upper(0, 1, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(fc.kappa_eps_upper(0, 1, 0.0).unwrap(), 0.0);
        assert!(fc.epsilon_ricci(0, 1, 0.5).unwrap() <= 0.5 + TOL);

        let c = cycle(5);
        let wc = WeightAssignment::delta(&c).unwrap();
        let fc = FaceCurvature::new(&c, &wc, 1).unwrap();
        assert!((fc.kappa_eps_upper(0, 1, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bounds_for_two_triangles() {
        let k = build(&[&[0, 1, 2], &[1, 2, 3]]);
        let w = WeightAssignment::unit(&k);
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        assert!((fc.lower_bound(0, 1).unwrap() + 4.0 / 3.0).abs() < 1e-15);
        assert!((fc.upper_bound(0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let r = fc.ricci(0, 1).unwrap();
        assert!(r.bracketed(), "{r:?}");
    }

    #[test]
    fn not_adjacent_and_disconnected() {
        let k = build(&[&[0, 1, 2], &[3, 4, 5]]);
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        assert!(matches!(fc.lower_bound(0, 1), Err(Error::NotAdjacent(..))));
        assert!(matches!(fc.ricci(0, 1), Err(Error::DisconnectedPair(..))));
        let g = fc.global(8).unwrap();
        assert_eq!(g.k_min, None);
        assert_eq!(g.warnings.len(), 1);
    }

    #[test]
    fn global_summaries() {
        let k = tetra();
        let w = WeightAssignment::delta(&k).unwrap();
        let g = FaceCurvature::new(&k, &w, 2).unwrap().global(16).unwrap();
        assert_eq!(g.pairs.len(), 6);
        assert!((g.k_min.unwrap() - 2.0 / 3.0).abs() < TOL);
        assert!(g.distant_samples.is_empty());

        let c = cycle(6);
        let wc = WeightAssignment::delta(&c).unwrap();
        let g = FaceCurvature::new(&c, &wc, 1).unwrap().global(64).unwrap();
        assert!(g.k_min.unwrap().abs() < TOL);
        assert_eq!(g.distant_samples.len(), 9);
        assert!(g.distant_pairs_bounded);
        assert!(g.distant_samples.iter().all(|r| r.kappa >= -TOL));
    }
}
