//! Command dispatch and analysis reports for the CLI and FFI.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::complex::{is_regular, orient, Regularity, SimplicialComplex, WeightAssignment, WeightScheme};
use crate::curvature::checks::{
    concavity_check, corollary_regular_check, diameter_bound_check, neighbor_lemma_check, regular_graph_readings,
    theorem_estimate_check, uniform_grid, CheckOptions, CheckOutcome, ConcavityReport, CONCAVITY_TOL,
};
use crate::curvature::{FaceCurvature, GlobalCurvatureSummary, LimitOptions, BOUND_TOL};
use crate::document::ComplexDocument;
use crate::dual_graph::{
    build_dual, corollary_relation_check, graph_curvature, hj_relation_check, normalized_graph_spectrum, GraphCurvature,
};
use crate::error::{Error, Result};
use crate::spectral::{
    check_spectrum_pairing, down_laplacian, full_laplacian, inverse_degree_sums, spectrum, up_laplacian, LaplacianKind,
    DEFAULT_ZERO_THRESHOLD, PAIRING_TOL,
};
use crate::transport::{DUALITY_GAP_TOL, MARGINAL_TOL};

pub const CONCAVITY_GRID_POINTS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Summary,
    Spectrum,
    Curvature,
    Verify,
    Dual,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Summary => "summary",
            Command::Spectrum => "spectrum",
            Command::Curvature => "curvature",
            Command::Verify => "verify",
            Command::Dual => "dual",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "summary" => Ok(Command::Summary),
            "spectrum" => Ok(Command::Spectrum),
            "curvature" => Ok(Command::Curvature),
            "verify" => Ok(Command::Verify),
            "dual" => Ok(Command::Dual),
            _ => Err(Error::BadParams(format!("unknown command {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RunOptions {
    /// Face dimension to analyse; defaults to the top dimension.
    pub dim: Option<usize>,
    pub weights: WeightScheme,
    pub zero_threshold: f64,
    pub eps_tolerance: f64,
    pub distant_sample: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            dim: None,
            weights: WeightScheme::Delta,
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
            eps_tolerance: LimitOptions::default().tolerance,
            distant_sample: 32,
        }
    }
}

impl RunOptions {
    fn limit(&self) -> LimitOptions {
        LimitOptions {
            tolerance: self.eps_tolerance,
            ..LimitOptions::default()
        }
    }

    fn check_options(&self) -> CheckOptions {
        CheckOptions {
            zero_threshold: self.zero_threshold,
            limit: self.limit(),
            distant_sample: self.distant_sample,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub zero_threshold: f64,
    pub eps_tolerance: f64,
    pub max_halvings: usize,
    pub bound: f64,
    pub pairing: f64,
    pub concavity: f64,
    pub marginal: f64,
    pub duality_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSummary {
    pub name: Option<String>,
    pub vertices: usize,
    pub dim: usize,
    pub counts: Vec<usize>,
    pub pure: bool,
    pub orientable: Option<bool>,
    pub orientation_note: Option<String>,
    /// Delta-weight regularity of each lower dimension (pure complexes only).
    pub regularity: Vec<Regularity>,
    /// Connected components of the top-dimensional faces.
    pub components: usize,
    /// Common `Σ 1/deg E` over top faces under delta weights, when it exists.
    pub inverse_degree_sum: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub kind: LaplacianKind,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub outcome: CheckOutcome,
    pub summary: String,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualSection {
    pub dim: usize,
    pub vertices: usize,
    pub edges: usize,
    pub regular_degree: Option<usize>,
    pub triangle_free: bool,
    pub curvature: GraphCurvature,
    pub spectrum: Option<Vec<f64>>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub timestamp: u64,
    pub command: Command,
    pub weights: WeightScheme,
    pub dim: usize,
    pub tolerances: Tolerances,
    pub complex: ComplexSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spectra: Vec<SpectrumEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<GlobalCurvatureSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualSection>,
    pub checks: Vec<CheckEntry>,
}

impl AnalysisReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == CheckOutcome::Fail)
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.complex;
        let _ = writeln!(
            out,
            "{} {}  {}  {}",
            self.tool,
            self.version,
            self.command.as_str(),
            c.name.as_deref().unwrap_or("(unnamed)")
        );
        let _ = writeln!(
            out,
            "complex: {} vertices, dimension {}, face counts {:?}, pure {}, orientable {}",
            c.vertices,
            c.dim,
            c.counts,
            yes_no(c.pure),
            c.orientable.map_or("n/a", yes_no)
        );
        for r in &c.regularity {
            match r.degree {
                Some(d) => {
                    let _ = writeln!(out, "  {}-faces regular, degree {}", r.dim, fmt(d));
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  {}-faces not regular, degrees {}..{}",
                        r.dim,
                        fmt(r.min_degree),
                        fmt(r.max_degree)
                    );
                }
            }
        }
        if let Some(inv) = c.inverse_degree_sum {
            let _ = writeln!(out, "  sum of 1/deg over boundary faces: {}", fmt(inv));
        }
        let _ = writeln!(out, "weights: {}, face dimension {}", self.weights.as_str(), self.dim);

        for s in &self.spectra {
            let vals: Vec<String> = s.eigenvalues.iter().map(|&x| fmt(x)).collect();
            let _ = writeln!(
                out,
                "{:?} Laplacian, dimension {}: [{}]",
                s.kind,
                s.dim,
                vals.join(", ")
            );
        }

        if let Some(g) = &self.curvature {
            let _ = writeln!(
                out,
                "curvature: {} adjacent pairs, minimum {}",
                g.pairs.len(),
                g.k_min.map_or("n/a".into(), fmt)
            );
            let _ = writeln!(
                out,
                "  {:<14} {:<14} {:>12} {:>12} {:>12} {:>9}",
                "face", "face", "kappa", "lower", "upper", "halvings"
            );
            for p in &g.pairs {
                let _ = writeln!(
                    out,
                    "  {:<14} {:<14} {:>12} {:>12} {:>12} {:>9}",
                    p.labels.0,
                    p.labels.1,
                    fmt(p.kappa),
                    p.lower_bound.map_or("-".into(), fmt),
                    p.upper_bound.map_or("-".into(), fmt),
                    p.halvings()
                );
            }
            for w in &g.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }

        if let Some(d) = &self.dual {
            let _ = writeln!(
                out,
                "dual graph: {} vertices, {} edges, regular degree {}, triangle-free {}",
                d.vertices,
                d.edges,
                d.regular_degree.map_or("-".into(), |r| r.to_string()),
                yes_no(d.triangle_free)
            );
            let _ = writeln!(
                out,
                "  graph curvature minimum {}",
                d.curvature.k_min.map_or("n/a".into(), fmt)
            );
            for e in &d.curvature.edges {
                let _ = writeln!(out, "  {:<14} {:<14} {:>12}", e.labels.0, e.labels.1, fmt(e.kappa));
            }
            if let Some(mu) = &d.spectrum {
                let vals: Vec<String> = mu.iter().map(|&x| fmt(x)).collect();
                let _ = writeln!(out, "  normalized spectrum: [{}]", vals.join(", "));
            }
            if let Some(n) = &d.note {
                let _ = writeln!(out, "  note: {n}");
            }
        }

        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for ch in &self.checks {
                let _ = writeln!(out, "  {:<17} {:<24} {}", ch.outcome.as_str(), ch.name, ch.summary);
            }
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fmt(x: f64) -> String {
    let r = if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{r:.6}")
}

fn entry<T: Serialize>(name: &str, outcome: CheckOutcome, summary: String, detail: &T) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        outcome,
        summary,
        detail: serde_json::to_value(detail).unwrap_or(serde_json::Value::Null),
    }
}

fn is_hypothesis_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotOrientable(_)
            | Error::NotRegular(_)
            | Error::NotPure(_)
            | Error::HeterogeneousDegreeSum { .. }
            | Error::NoQualifyingEigenvalue
            | Error::DisconnectedComplex(_)
            | Error::DimensionOutOfRange { .. }
            | Error::NonPositiveK(_)
            | Error::IsolatedVertex(_)
    )
}

/// Turns a checker result into an entry; unmet preconditions become `hypothesis-unmet`.
fn guarded<T: Serialize>(
    name: &str,
    result: Result<T>,
    outcome: impl Fn(&T) -> CheckOutcome,
    summary: impl Fn(&T) -> String,
) -> Result<CheckEntry> {
    match result {
        Ok(r) => Ok(entry(name, outcome(&r), summary(&r), &r)),
        Err(e) if is_hypothesis_error(&e) => Ok(entry(
            name,
            CheckOutcome::HypothesisUnmet,
            e.to_string(),
            &serde_json::json!({ "error": e.name(), "message": e.to_string() }),
        )),
        Err(e) => Err(e),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or("n/a".into(), fmt)
}

fn summarize(k: &SimplicialComplex, doc: &ComplexDocument) -> ComplexSummary {
    let pure = k.is_pure();
    let (orientable, orientation_note) = if pure && k.dim() >= 1 {
        match orient(k) {
            Ok(_) => (Some(true), None),
            Err(e) => (Some(false), Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let regularity = if pure {
        (0..k.dim()).filter_map(|j| is_regular(k, j).ok()).collect()
    } else {
        Vec::new()
    };
    let top = k.dim();
    let components = k.components(top).into_iter().max().map_or(0, |c| c + 1);
    let inverse_degree_sum = if pure && top >= 1 {
        WeightAssignment::delta(k).ok().and_then(|w| {
            let sums = inverse_degree_sums(k, top, &w);
            let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
            let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (max - min <= 1e-12 * max.abs().max(1.0)).then_some(min)
        })
    } else {
        None
    };
    ComplexSummary {
        name: doc.name().map(str::to_string),
        vertices: k.n_vertices(),
        dim: top,
        counts: k.counts(),
        pure,
        orientable,
        orientation_note,
        regularity,
        components,
        inverse_degree_sum,
    }
}

fn weights_for(k: &SimplicialComplex, doc: &ComplexDocument, scheme: WeightScheme) -> Result<WeightAssignment> {
    match scheme {
        WeightScheme::Delta => WeightAssignment::delta(k),
        WeightScheme::Unit => Ok(WeightAssignment::unit(k)),
        WeightScheme::Custom => doc
            .custom_weights(k)?
            .ok_or_else(|| Error::BadParams("custom weights requested but the document has none".into())),
    }
}

/// Runs `command` on a document. Errors abort the run; failed checks are
/// reported inside the returned report.
pub fn run(command: Command, doc: &ComplexDocument, opts: &RunOptions) -> Result<AnalysisReport> {
    let k = doc.complex()?;
    let dim = opts.dim.unwrap_or(k.dim());
    if dim > k.dim() {
        return Err(Error::DimensionOutOfRange { dim, max: k.dim() });
    }
    let mut report = AnalysisReport {
        tool: "sricci".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        command,
        weights: opts.weights,
        dim,
        tolerances: Tolerances {
            zero_threshold: opts.zero_threshold,
            eps_tolerance: opts.eps_tolerance,
            max_halvings: opts.limit().max_halvings,
            bound: BOUND_TOL,
            pairing: PAIRING_TOL,
            concavity: CONCAVITY_TOL,
            marginal: MARGINAL_TOL,
            duality_gap: DUALITY_GAP_TOL,
        },
        complex: summarize(&k, doc),
        spectra: Vec::new(),
        curvature: None,
        dual: None,
        checks: Vec::new(),
    };
    match command {
        Command::Summary => {}
        Command::Spectrum => run_spectrum(&k, doc, dim, opts, &mut report)?,
        Command::Curvature => {
            let w = weights_for(&k, doc, opts.weights)?;
            let fc = curvature_evaluator(&k, &w, dim, opts)?;
            let summary = fc.global(opts.distant_sample)?;
            report.checks.extend(curvature_entries(&summary));
            report.curvature = Some(summary);
        }
        Command::Verify => run_verify(&k, doc, dim, opts, &mut report)?,
        Command::Dual => report.dual = Some(dual_section(&k, dim, opts)?),
    }
    Ok(report)
}

fn curvature_evaluator<'a>(
    k: &'a SimplicialComplex,
    w: &'a WeightAssignment,
    dim: usize,
    opts: &RunOptions,
) -> Result<FaceCurvature<'a>> {
    if dim == 0 {
        return Err(Error::DimensionOutOfRange { dim, max: k.dim() });
    }
    Ok(FaceCurvature::new(k, w, dim)?.with_limit(opts.limit()))
}

fn run_spectrum(
    k: &SimplicialComplex,
    doc: &ComplexDocument,
    dim: usize,
    opts: &RunOptions,
    report: &mut AnalysisReport,
) -> Result<()> {
    let w = weights_for(k, doc, opts.weights)?;
    let zt = opts.zero_threshold;
    let mut push = |kind, l| -> Result<()> {
        report.spectra.push(SpectrumEntry {
            kind,
            dim,
            eigenvalues: spectrum(&l, zt)?.eigenvalues,
        });
        Ok(())
    };
    push(LaplacianKind::Up, up_laplacian(k, dim, &w)?)?;
    if dim >= 1 {
        push(LaplacianKind::Down, down_laplacian(k, dim, &w)?)?;
    }
    push(LaplacianKind::Full, full_laplacian(k, dim, &w)?)?;
    let lower = dim.saturating_sub(1);
    for i in lower..=dim {
        let p = check_spectrum_pairing(k, i, &w, zt)?;
        report.checks.push(entry(
            &format!("pairing_{i}"),
            CheckOutcome::from_pass(p.passed),
            format!(
                "{} nonzero eigenvalues, max deviation {:.3e}",
                p.up_nonzero.len(),
                p.max_deviation
            ),
            &p,
        ));
    }
    Ok(())
}

fn curvature_entries(g: &GlobalCurvatureSummary) -> Vec<CheckEntry> {
    let unbracketed: Vec<_> = g
        .pairs
        .iter()
        .filter(|p| !p.bracketed())
        .map(|p| p.labels.clone())
        .collect();
    let unconverged: Vec<_> = g
        .pairs
        .iter()
        .chain(&g.distant_samples)
        .filter(|p| !p.converged)
        .map(|p| p.labels.clone())
        .collect();
    let max_halvings = g
        .pairs
        .iter()
        .chain(&g.distant_samples)
        .map(|p| p.halvings())
        .max()
        .unwrap_or(0);
    let below: Vec<_> = g
        .distant_samples
        .iter()
        .filter(|p| g.k_min.is_some_and(|k| p.kappa < k - BOUND_TOL))
        .map(|p| (p.labels.clone(), p.kappa))
        .collect();
    vec![
        entry(
            "bound_bracketing",
            CheckOutcome::from_pass(unbracketed.is_empty()),
            format!(
                "{} of {} adjacent pairs outside their bounds",
                unbracketed.len(),
                g.pairs.len()
            ),
            &unbracketed,
        ),
        entry(
            "limit_convergence",
            CheckOutcome::from_pass(unconverged.is_empty()),
            format!(
                "{} unconverged pairs, at most {max_halvings} halvings",
                unconverged.len()
            ),
            &unconverged,
        ),
        entry(
            "distant_pairs",
            CheckOutcome::from_pass(g.distant_pairs_bounded),
            format!(
                "{} sampled non-adjacent pairs, {} below the adjacent minimum",
                g.distant_samples.len(),
                below.len()
            ),
            &below,
        ),
    ]
}

fn run_verify(
    k: &SimplicialComplex,
    doc: &ComplexDocument,
    dim: usize,
    opts: &RunOptions,
    report: &mut AnalysisReport,
) -> Result<()> {
    let copts = opts.check_options();
    let checks = &mut report.checks;

    checks.push(guarded(
        "eigenvalue_estimate",
        theorem_estimate_check(k, &copts),
        |r| r.outcome,
        |r| format!("bound {}, minimum slack {}", fmt(r.bound), fmt(r.min_slack)),
    )?);
    checks.push(guarded(
        "regular_estimate",
        corollary_regular_check(k, &copts),
        |r| r.outcome,
        |r| match &r.note {
            Some(n) => n.clone(),
            None => format!("bound {}, minimum slack {}", opt(r.bound), opt(r.min_slack)),
        },
    )?);
    checks.push(guarded(
        "spectral_relation",
        hj_relation_check(k, opts.zero_threshold),
        |r| r.outcome,
        |r| {
            let mut s = format!(
                "nonzero deviation {:.3e}, positional deviation {:.3e}",
                r.nonzero_deviation, r.positional_deviation
            );
            if let Some(n) = &r.note {
                s.push_str("; ");
                s.push_str(n);
            }
            s
        },
    )?);
    checks.push(guarded(
        "curvature_relation",
        corollary_relation_check(k, &copts),
        |r| r.outcome,
        |r| match &r.note {
            Some(n) => n.clone(),
            None => format!("1 - k_G/2 = {}, slack {}", opt(r.graph_side), opt(r.slack)),
        },
    )?);
    if k.dim() == 1 && is_regular(k, 0).is_ok_and(|r| r.regular) {
        checks.push(guarded(
            "regular_graph_readings",
            regular_graph_readings(k, &copts),
            |r| {
                if r.orientable {
                    CheckOutcome::from_pass(r.four_over_r.consistent_with_spectrum)
                } else {
                    CheckOutcome::HypothesisUnmet
                }
            },
            |r| {
                format!(
                    "{} = {} ({}), {} = {} ({})",
                    r.four_over_r.formula,
                    fmt(r.four_over_r.bound),
                    if r.four_over_r.consistent_with_spectrum {
                        "holds"
                    } else {
                        "violated"
                    },
                    r.r_reading.formula,
                    fmt(r.r_reading.bound),
                    if r.r_reading.consistent_with_spectrum {
                        "holds"
                    } else {
                        "violated"
                    },
                )
            },
        )?);
    }

    checks.push(guarded(
        "neighbor_lemma",
        neighbor_lemma_check(k, dim),
        |r| r.outcome,
        |r| format!("{} triples, maximum count {}", r.triples_checked, r.max_count),
    )?);

    let w = match weights_for(k, doc, opts.weights) {
        Ok(w) => w,
        Err(e) if is_hypothesis_error(&e) => {
            checks.push(guarded::<()>(
                "curvature",
                Err(e),
                |_| CheckOutcome::Pass,
                |_| String::new(),
            )?);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let fc = match curvature_evaluator(k, &w, dim, opts) {
        Ok(fc) => fc,
        Err(e) if is_hypothesis_error(&e) => {
            checks.push(guarded::<()>(
                "curvature",
                Err(e),
                |_| CheckOutcome::Pass,
                |_| String::new(),
            )?);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let global = fc.global(opts.distant_sample)?;
    checks.extend(curvature_entries(&global));

    let diameter = match global.k_min {
        Some(kmin) => diameter_bound_check(&fc, kmin),
        None => Err(Error::DisconnectedComplex(dim)),
    };
    checks.push(guarded(
        "diameter_bound",
        diameter,
        |r| r.outcome,
        |r| match &r.tightest {
            Some(t) => format!("tightest pair distance {} vs bound {}", t.distance, fmt(t.bound)),
            None => "no connected pairs".into(),
        },
    )?);

    let grid = uniform_grid(CONCAVITY_GRID_POINTS);
    let mut worst: Option<ConcavityReport> = None;
    for (f, g) in fc.adjacent_pairs() {
        let r = concavity_check(&fc, f, g, &grid)?;
        if worst.as_ref().is_none_or(|w| r.worst_violation > w.worst_violation) {
            worst = Some(r);
        }
    }
    match worst {
        Some(r) => checks.push(entry(
            "concavity",
            r.outcome,
            format!(
                "{}-point grid, worst chord excess {:.3e}",
                grid.len(),
                r.worst_violation
            ),
            &r,
        )),
        None => checks.push(entry(
            "concavity",
            CheckOutcome::HypothesisUnmet,
            "no adjacent pairs".into(),
            &(),
        )),
    }
    report.curvature = Some(global);
    Ok(())
}

fn dual_section(k: &SimplicialComplex, dim: usize, opts: &RunOptions) -> Result<DualSection> {
    let g = build_dual(k, dim)?;
    let curvature = graph_curvature(&g)?;
    let (spectrum, note) = match normalized_graph_spectrum(&g, opts.zero_threshold) {
        Ok(s) => (Some(s.eigenvalues), None),
        Err(e @ Error::IsolatedVertex(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(DualSection {
        dim,
        vertices: g.vertex_count(),
        edges: g.edges().len(),
        regular_degree: g.regular_degree(),
        triangle_free: g.is_triangle_free(),
        curvature,
        spectrum,
        note,
    })
}
