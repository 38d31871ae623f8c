//! Checkers for the curvature inequalities. Each returns a report rather than
//! panicking; `outcome` says whether the asserted inequality held.

use serde::Serialize;

use super::{FaceCurvature, LimitOptions, BOUND_TOL};
use crate::complex::{is_regular, orient, SimplicialComplex, WeightAssignment};
use crate::error::{Error, Result};
use crate::spectral::{
    down_laplacian, inverse_degree_sums, spectrum, uniform_inverse_degree_sum, DEFAULT_ZERO_THRESHOLD,
};

/// Slack allowed in concavity comparisons of `κ_ε` values.
pub const CONCAVITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    HypothesisUnmet,
}

impl CheckOutcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail => "fail",
            CheckOutcome::HypothesisUnmet => "hypothesis-unmet",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CheckOptions {
    pub zero_threshold: f64,
    pub limit: LimitOptions,
    /// Number of non-adjacent pairs sampled by global summaries.
    pub distant_sample: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
            limit: LimitOptions::default(),
            distant_sample: 32,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterPair {
    pub faces: (usize, usize),
    pub labels: (String, String),
    pub distance: u32,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterReport {
    pub k: f64,
    pub pairs_checked: usize,
    pub violations: usize,
    pub tightest: Option<DiameterPair>,
    pub outcome: CheckOutcome,
}

/// `d(F, F') ≤ (1/k)(2 − share(F) − share(F'))` for every connected pair of distinct faces.
pub fn diameter_bound_check(fc: &FaceCurvature, k: f64) -> Result<DiameterReport> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::NonPositiveK(k));
    }
    let n = fc.face_count();
    let shares: Vec<f64> = (0..n).map(|f| fc.retained_share(f)).collect();
    let mut tightest: Option<DiameterPair> = None;
    let mut pairs_checked = 0;
    let mut violations = 0;
    for f in 0..n {
        for g in f + 1..n {
            let Some(d) = fc.metric().distance(f, g) else {
                continue;
            };
            pairs_checked += 1;
            let bound = (2.0 - shares[f] - shares[g]) / k;
            let slack = bound - f64::from(d);
            if slack < -BOUND_TOL {
                violations += 1;
            }
            if tightest.as_ref().is_none_or(|t| slack < t.slack) {
                let c = fc.complex();
                tightest = Some(DiameterPair {
                    faces: (f, g),
                    labels: (c.display_face(c.face(fc.dim(), f)), c.display_face(c.face(fc.dim(), g))),
                    distance: d,
                    bound,
                    slack,
                });
            }
        }
    }
    Ok(DiameterReport {
        k,
        pairs_checked,
        violations,
        tightest,
        outcome: CheckOutcome::from_pass(violations == 0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborLemmaReport {
    pub dim: usize,
    pub triples_checked: usize,
    pub max_count: usize,
    pub violations: usize,
    pub outcome: CheckOutcome,
}

/// For adjacent `F, F'` meeting in `E` and each other face `E'` of `F`, at most
/// one face meets `F` along `E'` and is also adjacent to `F'`.
pub fn neighbor_lemma_check(k: &SimplicialComplex, i: usize) -> Result<NeighborLemmaReport> {
    if i == 0 || i > k.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, max: k.dim() });
    }
    let mut triples_checked = 0;
    let mut max_count = 0;
    let mut violations = 0;
    for f in 0..k.face_count(i) {
        for (g, e) in k.neighbors(i, f) {
            for &e2 in k.boundary(i, f) {
                if e2 == e {
                    continue;
                }
                let count = k
                    .cofacets(i - 1, e2)
                    .iter()
                    .filter(|&&h| h != f && h != g && k.shared_face(i, g, h).is_some())
                    .count();
                triples_checked += 1;
                max_count = max_count.max(count);
                if count > 1 {
                    violations += 1;
                }
            }
        }
    }
    Ok(NeighborLemmaReport {
        dim: i,
        triples_checked,
        max_count,
        violations,
        outcome: CheckOutcome::from_pass(violations == 0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcavityReport {
    pub faces: (usize, usize),
    pub grid: Vec<f64>,
    pub kappas: Vec<f64>,
    /// Largest amount by which a middle value falls below the chord.
    pub worst_violation: f64,
    pub outcome: CheckOutcome,
}

/// Concavity of `ε ↦ κ_ε` over consecutive triples of a strictly increasing grid in `[0, 1]`.
pub fn concavity_check(fc: &FaceCurvature, f: usize, g: usize, grid: &[f64]) -> Result<ConcavityReport> {
    if grid.iter().any(|e| !(0.0..=1.0).contains(e)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParams(
            "ε grid must be strictly increasing within [0, 1]".into(),
        ));
    }
    let kappas = grid
        .iter()
        .map(|&e| fc.epsilon_ricci(f, g, e))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for j in 1..grid.len().saturating_sub(1) {
        let (a, b, c) = (grid[j - 1], grid[j], grid[j + 1]);
        let chord = ((c - b) * kappas[j - 1] + (b - a) * kappas[j + 1]) / (c - a);
        worst = worst.max(chord - kappas[j]);
    }
    Ok(ConcavityReport {
        faces: (f, g),
        grid: grid.to_vec(),
        kappas,
        worst_violation: worst,
        outcome: CheckOutcome::from_pass(worst <= CONCAVITY_TOL),
    })
}

/// `n` equally spaced points from 0 to 1.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|j| j as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenvalueSlack {
    pub eigenvalue: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub dim: usize,
    /// `1/D`
    pub inverse_degree_sum: f64,
    pub k_min: f64,
    /// Eigenvalue of the oriented constant function, excluded from the check.
    pub constant_eigenvalue: f64,
    /// `(i+1)(k − 1) + 2/D`
    pub bound: f64,
    pub eigenvalues: Vec<EigenvalueSlack>,
    pub min_slack: f64,
    pub outcome: CheckOutcome,
}

pub(crate) fn delta_k_min(k: &SimplicialComplex, w: &WeightAssignment, i: usize, opts: &CheckOptions) -> Result<f64> {
    FaceCurvature::new(k, w, i)?
        .with_limit(opts.limit)
        .global(0)?
        .k_min
        .ok_or(Error::DisconnectedComplex(i))
}

/// Lower bound on the top-dimensional down-Laplacian eigenvalues in terms of
/// the minimum curvature, under delta weights.
pub fn theorem_estimate_check(k: &SimplicialComplex, opts: &CheckOptions) -> Result<TheoremReport> {
    let orientation = orient(k)?;
    let i = orientation.dim;
    let w = WeightAssignment::delta(k)?;
    let inv = uniform_inverse_degree_sum(&inverse_degree_sums(k, i, &w))?;
    let i1 = (i + 1) as f64;
    let constant = 2.0 * inv - i1;
    let spec = spectrum(&down_laplacian(k, i, &w)?, opts.zero_threshold)?;
    let qualifying: Vec<f64> = spec
        .nonzero()
        .into_iter()
        .filter(|l| (l - constant).abs() > BOUND_TOL)
        .collect();
    if qualifying.is_empty() {
        return Err(Error::NoQualifyingEigenvalue);
    }
    let k_min = delta_k_min(k, &w, i, opts)?;
    let bound = i1 * (k_min - 1.0) + 2.0 * inv;
    let eigenvalues: Vec<EigenvalueSlack> = qualifying
        .into_iter()
        .map(|l| EigenvalueSlack {
            eigenvalue: l,
            slack: l - bound,
        })
        .collect();
    let min_slack = eigenvalues.iter().map(|e| e.slack).fold(f64::INFINITY, f64::min);
    Ok(TheoremReport {
        dim: i,
        inverse_degree_sum: inv,
        k_min,
        constant_eigenvalue: constant,
        bound,
        eigenvalues,
        min_slack,
        outcome: CheckOutcome::from_pass(min_slack >= -BOUND_TOL),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub dim: usize,
    /// Common delta degree of the codimension-1 faces.
    pub r: f64,
    pub k_min: Option<f64>,
    /// `(i+1) k`
    pub bound: Option<f64>,
    pub eigenvalues: Vec<EigenvalueSlack>,
    pub min_slack: Option<f64>,
    pub outcome: CheckOutcome,
    pub note: Option<String>,
}

/// Common degree of the codimension-1 faces of an orientable complex.
pub(crate) fn regular_degree(k: &SimplicialComplex) -> Result<(usize, f64)> {
    let orientation = orient(k)?;
    let i = orientation.dim;
    let reg = is_regular(k, i - 1)?;
    match reg.degree {
        Some(r) => Ok((i, r)),
        None => Err(Error::NotRegular(format!(
            "{}-face degrees range over [{}, {}]",
            i - 1,
            reg.min_degree,
            reg.max_degree
        ))),
    }
}

/// Every nonzero down-Laplacian eigenvalue is at least `(i+1) k` on an orientable
/// regular complex whose codimension-1 faces have degree 2.
pub fn corollary_regular_check(k: &SimplicialComplex, opts: &CheckOptions) -> Result<CorollaryReport> {
    let (i, r) = regular_degree(k)?;
    if (r - 2.0).abs() > 1e-12 {
        return Ok(CorollaryReport {
            dim: i,
            r,
            k_min: None,
            bound: None,
            eigenvalues: Vec::new(),
            min_slack: None,
            outcome: CheckOutcome::HypothesisUnmet,
            note: Some(format!("codimension-1 faces have degree {r}, not 2")),
        });
    }
    let w = WeightAssignment::delta(k)?;
    let k_min = delta_k_min(k, &w, i, opts)?;
    let bound = (i + 1) as f64 * k_min;
    let eigenvalues: Vec<EigenvalueSlack> = spectrum(&down_laplacian(k, i, &w)?, opts.zero_threshold)?
        .nonzero()
        .into_iter()
        .map(|l| EigenvalueSlack {
            eigenvalue: l,
            slack: l - bound,
        })
        .collect();
    let min_slack = eigenvalues.iter().map(|e| e.slack).reduce(f64::min);
    Ok(CorollaryReport {
        dim: i,
        r,
        k_min: Some(k_min),
        bound: Some(bound),
        outcome: CheckOutcome::from_pass(min_slack.is_none_or(|s| s >= -BOUND_TOL)),
        eigenvalues,
        min_slack,
        note: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReading {
    pub formula: String,
    pub bound: f64,
    pub min_slack: Option<f64>,
    pub consistent_with_spectrum: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularGraphReport {
    pub r: f64,
    pub k_min: f64,
    pub orientable: bool,
    pub nonzero_eigenvalues: Vec<f64>,
    /// `2(k − 1) + 4/r`, from `2/D` with `1/D = 2/r`.
    pub four_over_r: BoundReading,
    /// `2(k − 1) + r`
    pub r_reading: BoundReading,
}

/// Evaluates both candidate eigenvalue bounds for an `r`-regular graph viewed
/// as a 1-complex against its computed spectrum. Informational: regular graphs
/// with `r ≥ 3` are not orientable.
pub fn regular_graph_readings(k: &SimplicialComplex, opts: &CheckOptions) -> Result<RegularGraphReport> {
    if k.dim() != 1 || !k.is_pure() {
        return Err(Error::BadParams("expected a graph (pure 1-complex)".into()));
    }
    let reg = is_regular(k, 0)?;
    let r = reg.degree.ok_or_else(|| {
        Error::NotRegular(format!(
            "vertex degrees range over [{}, {}]",
            reg.min_degree, reg.max_degree
        ))
    })?;
    let w = WeightAssignment::delta(k)?;
    let k_min = delta_k_min(k, &w, 1, opts)?;
    let nonzero = spectrum(&down_laplacian(k, 1, &w)?, opts.zero_threshold)?.nonzero();
    let reading = |formula: &str, bound: f64| {
        let min_slack = nonzero.iter().map(|l| l - bound).reduce(f64::min);
        BoundReading {
            formula: formula.to_string(),
            bound,
            min_slack,
            consistent_with_spectrum: min_slack.is_none_or(|s| s >= -BOUND_TOL),
        }
    };
    let four_over_r = reading("2(k-1)+4/r", 2.0 * (k_min - 1.0) + 4.0 / r);
    let r_reading = reading("2(k-1)+r", 2.0 * (k_min - 1.0) + r);
    Ok(RegularGraphReport {
        r,
        k_min,
        orientable: orient(k).is_ok(),
        nonzero_eigenvalues: nonzero,
        four_over_r,
        r_reading,
    })
}
