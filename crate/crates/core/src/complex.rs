//! Abstract simplicial complexes built from facet lists.
//!
//! Faces are stored per dimension in lexicographic order of their (dense)
//! vertex ids; every matrix and report in the crate uses this ordering.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Largest facet accepted by [`SimplicialComplex::build`]; the closure of a
/// facet with `n` vertices has `2^n - 1` faces.
pub const MAX_FACET_VERTICES: usize = 20;

/// A nonempty face given by its strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face(Vec<VertexId>);

impl Face {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedFacet("empty face".into()));
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedFacet(format!("vertex {} repeated", w[0])));
        }
        Ok(Face(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face obtained by dropping the `j`-th vertex, or `None` for a vertex.
    pub fn without(&self, j: usize) -> Option<Face> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(j);
        Some(Face(v))
    }

    pub fn contains(&self, other: &Face) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A face together with a sign relative to its ascending vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedFace {
    pub face: Face,
    pub sign: i8,
}

impl OrientedFace {
    pub fn canonical(face: Face) -> Self {
        OrientedFace { face, sign: 1 }
    }
}

/// Boundary of an oriented face: the faces `F_j` (vertex `j` removed), each in
/// canonical orientation, paired with the coefficient `sign * (-1)^j`.
///
/// A vertex has only the empty face as boundary, which is not represented, so
/// the result is empty for 0-faces.
pub fn boundary_with_signs(face: &OrientedFace) -> Vec<(OrientedFace, i8)> {
    (0..face.face.0.len())
        .filter_map(|j| {
            face.face
                .without(j)
                .map(|f| (OrientedFace::canonical(f), face.sign * alternating(j)))
        })
        .collect()
}

pub(crate) fn alternating(j: usize) -> i8 {
    if j.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<u64>,
    facets: Vec<Face>,
    faces: Vec<Vec<Face>>,
    index: Vec<HashMap<Face, usize>>,
    // boundary[d][f][j]: index in dimension d-1 of face f with vertex j removed
    boundary: Vec<Vec<Vec<usize>>>,
    cofacets: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Inclusion-closure of the given facets. Vertex labels are remapped to
    /// dense ids in order of first appearance.
    pub fn build(facets: &[Vec<u64>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut labels = Vec::new();
        let mut dense: HashMap<u64, VertexId> = HashMap::new();
        let mut input = Vec::with_capacity(facets.len());
        for raw in facets {
            if raw.is_empty() {
                return Err(Error::MalformedFacet("empty facet".into()));
            }
            if raw.len() > MAX_FACET_VERTICES {
                return Err(Error::MalformedFacet(format!(
                    "facet with {} vertices exceeds the limit of {MAX_FACET_VERTICES}",
                    raw.len()
                )));
            }
            let mut seen = BTreeSet::new();
            for &l in raw {
                if !seen.insert(l) {
                    return Err(Error::MalformedFacet(format!("vertex {l} repeated in facet {raw:?}")));
                }
            }
            let ids = raw
                .iter()
                .map(|&l| {
                    *dense.entry(l).or_insert_with(|| {
                        labels.push(l);
                        labels.len() - 1
                    })
                })
                .collect::<Vec<_>>();
            input.push(Face::new(ids)?);
        }

        let top = input.iter().map(Face::dim).max().unwrap_or(0);
        let mut by_dim: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); top + 1];
        for facet in &input {
            let n = facet.0.len();
            for mask in 1u32..(1u32 << n) {
                let verts = (0..n)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| facet.0[b])
                    .collect::<Vec<_>>();
                by_dim[verts.len() - 1].insert(Face::from_sorted(verts));
            }
        }
        let faces: Vec<Vec<Face>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Face, usize>> = faces
            .iter()
            .map(|fs| fs.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect())
            .collect();

        let mut boundary = vec![Vec::new(); top + 1];
        let mut cofacets: Vec<Vec<Vec<usize>>> = faces.iter().map(|fs| vec![Vec::new(); fs.len()]).collect();
        boundary[0] = vec![Vec::new(); faces[0].len()];
        for d in 1..=top {
            boundary[d] = faces[d]
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    (0..=d)
                        .map(|j| {
                            let e = index[d - 1][&f.without(j).expect("dimension >= 1")];
                            cofacets[d - 1][e].push(k);
                            e
                        })
                        .collect()
                })
                .collect();
        }

        let mut facets = Vec::new();
        for (d, fs) in faces.iter().enumerate() {
            for (k, f) in fs.iter().enumerate() {
                if cofacets[d][k].is_empty() {
                    facets.push(f.clone());
                }
            }
        }

        Ok(SimplicialComplex {
            labels,
            facets,
            faces,
            index,
            boundary,
            cofacets,
        })
    }

    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Original input label of each dense vertex id.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Inclusion-maximal faces, ordered by dimension then lexicographically.
    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// Faces of dimension `d` in lexicographic order (empty if `d > dim`).
    pub fn faces(&self, d: usize) -> &[Face] {
        self.faces.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn face_count(&self, d: usize) -> usize {
        self.faces(d).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn face(&self, d: usize, idx: usize) -> &Face {
        &self.faces[d][idx]
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.index.get(face.dim())?.get(face).copied()
    }

    pub(crate) fn require_index(&self, face: &Face) -> Result<usize> {
        self.index_of(face)
            .ok_or_else(|| Error::FaceNotInComplex(self.display_face(face)))
    }

    /// Indices of the codimension-1 faces of face `idx`; entry `j` omits vertex `j`.
    pub fn boundary(&self, d: usize, idx: usize) -> &[usize] {
        &self.boundary[d][idx]
    }

    /// Indices (dimension `d + 1`, ascending) of the faces having face `idx` in their boundary.
    pub fn cofacets(&self, d: usize, idx: usize) -> &[usize] {
        &self.cofacets[d][idx]
    }

    /// `sgn([E], ∂[F])` for the canonical orientations, where `e` is in the boundary of `f`.
    pub fn incidence_sign(&self, d: usize, f: usize, e: usize) -> Option<i8> {
        self.boundary[d][f].iter().position(|&x| x == e).map(alternating)
    }

    pub fn is_pure(&self) -> bool {
        let top = self.dim();
        self.facets.iter().all(|f| f.dim() == top)
    }

    pub(crate) fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            let dims: BTreeSet<usize> = self.facets.iter().map(Face::dim).collect();
            Err(Error::NotPure(dims.into_iter().collect()))
        }
    }

    pub(crate) fn require_dim(&self, d: usize) -> Result<()> {
        if d <= self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionOutOfRange {
                dim: d,
                max: self.dim(),
            })
        }
    }

    /// Faces adjacent to face `idx` of dimension `d >= 1`, as `(neighbor, shared)`
    /// where `shared` indexes the common `(d-1)`-face. Ordered by shared face
    /// position then neighbor index.
    pub fn neighbors(&self, d: usize, idx: usize) -> Vec<(usize, usize)> {
        if d == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for &e in &self.boundary[d][idx] {
            for &g in &self.cofacets[d - 1][e] {
                if g != idx {
                    out.push((g, e));
                }
            }
        }
        out
    }

    /// The common `(d-1)`-face of two `d`-faces, if they are adjacent.
    pub fn shared_face(&self, d: usize, a: usize, b: usize) -> Option<usize> {
        if d == 0 || a == b {
            return None;
        }
        let other = &self.boundary[d][b];
        self.boundary[d][a].iter().copied().find(|e| other.contains(e))
    }

    pub fn degree_of(&self, d: usize, idx: usize, w: &WeightAssignment) -> f64 {
        self.cofacets[d][idx].iter().map(|&c| w.get(d + 1, c)).sum()
    }

    /// Face rendered with the original vertex labels, e.g. `[3,7,9]`.
    pub fn display_face(&self, face: &Face) -> String {
        let mut ls: Vec<u64> = face
            .vertices()
            .iter()
            .map(|&v| self.labels.get(v).copied().unwrap_or(v as u64))
            .collect();
        ls.sort_unstable();
        let s: Vec<String> = ls.iter().map(u64::to_string).collect();
        format!("[{}]", s.join(","))
    }

    /// Comma-joined sorted labels, the key format used by weight documents.
    pub fn face_key(&self, face: &Face) -> String {
        let mut ls: Vec<u64> = face.vertices().iter().map(|&v| self.labels[v]).collect();
        ls.sort_unstable();
        let s: Vec<String> = ls.iter().map(u64::to_string).collect();
        s.join(",")
    }

    /// Connected components of the `d`-face adjacency graph, as a component id per face.
    pub fn components(&self, d: usize) -> Vec<usize> {
        let n = self.face_count(d);
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(f) = queue.pop_front() {
                for (g, _) in self.neighbors(d, f) {
                    if comp[g] == usize::MAX {
                        comp[g] = next;
                        queue.push_back(g);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

/// Sum of cofacet weights of `face`.
pub fn degree(k: &SimplicialComplex, face: &Face, w: &WeightAssignment) -> Result<f64> {
    let idx = k.require_index(face)?;
    Ok(k.degree_of(face.dim(), idx, w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    Unit,
    Delta,
    Custom,
}

impl WeightScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightScheme::Unit => "unit",
            WeightScheme::Delta => "delta",
            WeightScheme::Custom => "custom",
        }
    }
}

/// Positive weight per nonempty face; the empty face implicitly weighs 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment {
    scheme: WeightScheme,
    values: Vec<Vec<f64>>,
}

impl WeightAssignment {
    pub fn unit(k: &SimplicialComplex) -> Self {
        WeightAssignment {
            scheme: WeightScheme::Unit,
            values: k.faces.iter().map(|fs| vec![1.0; fs.len()]).collect(),
        }
    }

    /// Facets weigh 1; every other face weighs its degree, assigned top-down.
    pub fn delta(k: &SimplicialComplex) -> Result<Self> {
        k.require_pure()?;
        let top = k.dim();
        let mut values: Vec<Vec<f64>> = k.faces.iter().map(|fs| vec![0.0; fs.len()]).collect();
        values[top].iter_mut().for_each(|v| *v = 1.0);
        for d in (0..top).rev() {
            for idx in 0..k.face_count(d) {
                values[d][idx] = k.cofacets[d][idx].iter().map(|&c| values[d + 1][c]).sum();
            }
        }
        Ok(WeightAssignment {
            scheme: WeightScheme::Delta,
            values,
        })
    }

    /// Custom weights indexed `[dim][face index]`; every value must be finite and positive.
    pub fn custom(k: &SimplicialComplex, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != k.faces.len() || values.iter().zip(&k.faces).any(|(v, f)| v.len() != f.len()) {
            return Err(Error::InvalidWeight(
                "weight table shape does not match the complex".into(),
            ));
        }
        for (d, vs) in values.iter().enumerate() {
            for (idx, &v) in vs.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidWeight(format!(
                        "face {} has weight {v}",
                        k.display_face(k.face(d, idx))
                    )));
                }
            }
        }
        Ok(WeightAssignment {
            scheme: WeightScheme::Custom,
            values,
        })
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn get(&self, d: usize, idx: usize) -> f64 {
        self.values[d][idx]
    }

    pub fn dimension(&self, d: usize) -> &[f64] {
        &self.values[d]
    }

    pub fn empty_face(&self) -> f64 {
        0.0
    }
}

/// Signs of the top-dimensional faces relative to their canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub dim: usize,
    pub signs: Vec<i8>,
}

impl Orientation {
    /// Adjacent top faces induce opposite signs on every shared face.
    pub fn is_coherent(&self, k: &SimplicialComplex) -> bool {
        let d = self.dim;
        (0..k.face_count(d - 1)).all(|e| {
            let cf = k.cofacets(d - 1, e);
            cf.iter().enumerate().all(|(a, &f)| {
                cf[a + 1..].iter().all(|&g| {
                    let sf = self.signs[f] * k.incidence_sign(d, f, e).unwrap();
                    let sg = self.signs[g] * k.incidence_sign(d, g, e).unwrap();
                    sf * sg == -1
                })
            })
        })
    }
}

/// Coherent orientation of the top-dimensional faces by breadth-first sign
/// propagation, seeded with `+1` on the first face of each component.
pub fn orient(k: &SimplicialComplex) -> Result<Orientation> {
    k.require_pure()?;
    let d = k.dim();
    if d == 0 {
        return Err(Error::DimensionOutOfRange { dim: 0, max: 0 });
    }
    for e in 0..k.face_count(d - 1) {
        let n = k.cofacets(d - 1, e).len();
        if n > 2 {
            return Err(Error::NotOrientable(format!(
                "face {} lies in {n} top-dimensional faces",
                k.display_face(k.face(d - 1, e))
            )));
        }
    }
    let n = k.face_count(d);
    let mut signs = vec![0i8; n];
    for seed in 0..n {
        if signs[seed] != 0 {
            continue;
        }
        signs[seed] = 1;
        let mut queue = VecDeque::from([seed]);
        while let Some(f) = queue.pop_front() {
            for (g, e) in k.neighbors(d, f) {
                let want = -signs[f] * k.incidence_sign(d, f, e).unwrap() * k.incidence_sign(d, g, e).unwrap();
                if signs[g] == 0 {
                    signs[g] = want;
                    queue.push_back(g);
                } else if signs[g] != want {
                    return Err(Error::NotOrientable(format!(
                        "inconsistent signs around {}",
                        k.display_face(k.face(d - 1, e))
                    )));
                }
            }
        }
    }
    Ok(Orientation { dim: d, signs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regularity {
    pub dim: usize,
    pub regular: bool,
    /// Common degree when regular.
    pub degree: Option<f64>,
    pub min_degree: f64,
    pub max_degree: f64,
}

/// Whether all `j`-faces share one degree under delta weights.
pub fn is_regular(k: &SimplicialComplex, j: usize) -> Result<Regularity> {
    k.require_dim(j)?;
    let w = WeightAssignment::delta(k)?;
    let degs: Vec<f64> = (0..k.face_count(j)).map(|f| k.degree_of(j, f, &w)).collect();
    let min = degs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = degs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let regular = max - min <= 1e-12 * max.abs().max(1.0);
    Ok(Regularity {
        dim: j,
        regular,
        degree: regular.then_some(min),
        min_degree: min,
        max_degree: max,
    })
}
