//! JSON input documents: `{"facets": [[...], ...], "weights": {"0,1": 2.0}, "metadata": {...}}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{SimplicialComplex, WeightAssignment};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub facets: Vec<Vec<u64>>,
    /// Keyed by comma-joined sorted vertex labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

pub fn parse_document(path: impl AsRef<Path>) -> Result<ComplexDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document_str(&text)
}

/// Parses and validates a document; weight keys come back in canonical form.
pub fn parse_document_str(text: &str) -> Result<ComplexDocument> {
    let mut doc: ComplexDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    let complex = doc.complex().map_err(|e| match e {
        Error::MalformedFacet(_) | Error::EmptyInput => Error::Parse {
            line: None,
            column: None,
            message: e.to_string(),
        },
        other => other,
    })?;
    if let Some(weights) = doc.weights.take() {
        let mut canonical = BTreeMap::new();
        for (key, value) in weights {
            let key = canonical_key(&key)?;
            if canonical.insert(key.clone(), value).is_some() {
                return Err(parse_error(format!("weight key {key:?} given twice")));
            }
        }
        check_coverage(&complex, &canonical)?;
        doc.weights = Some(canonical);
    }
    Ok(doc)
}

fn parse_error(message: String) -> Error {
    Error::Parse {
        line: None,
        column: None,
        message,
    }
}

/// Sorts the labels of a face key, e.g. `"3, 1,2"` becomes `"1,2,3"`.
pub fn canonical_key(key: &str) -> Result<String> {
    let mut labels = key
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| parse_error(format!("weight key {key:?} is not a list of vertex labels")))?;
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(parse_error(format!("weight key {key:?} repeats a vertex")));
    }
    Ok(labels.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

fn check_coverage(k: &SimplicialComplex, weights: &BTreeMap<String, f64>) -> Result<()> {
    let mut all = BTreeSet::new();
    let mut missing = Vec::new();
    for d in 0..=k.dim() {
        for f in k.faces(d) {
            let key = k.face_key(f);
            if !weights.contains_key(&key) {
                missing.push(key.clone());
            }
            all.insert(key);
        }
    }
    if !missing.is_empty() {
        return Err(Error::WeightCoverage(missing));
    }
    if let Some(extra) = weights.keys().find(|key| !all.contains(*key)) {
        return Err(parse_error(format!(
            "weight key {extra:?} names no face of the complex"
        )));
    }
    Ok(())
}

impl ComplexDocument {
    pub fn new(facets: Vec<Vec<u64>>) -> Self {
        ComplexDocument {
            facets,
            weights: None,
            metadata: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.metadata.get_or_insert_with(Metadata::default).name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.as_ref()?.name.as_deref()
    }

    pub fn complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::build(&self.facets)
    }

    /// Custom weight assignment from the document, if it carries one.
    pub fn custom_weights(&self, k: &SimplicialComplex) -> Result<Option<WeightAssignment>> {
        let Some(weights) = &self.weights else {
            return Ok(None);
        };
        let mut values = Vec::with_capacity(k.dim() + 1);
        for d in 0..=k.dim() {
            let row = k
                .faces(d)
                .iter()
                .map(|f| {
                    let key = k.face_key(f);
                    weights.get(&key).copied().ok_or(Error::WeightCoverage(vec![key]))
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        WeightAssignment::custom(k, values).map(Some)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tetrahedron() {
        let doc = parse_document_str(r#"{"facets":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#).unwrap();
        assert_eq!(doc.facets.len(), 4);
        assert_eq!(doc.complex().unwrap().counts(), vec![4, 6, 4]);
        assert!(doc.custom_weights(&doc.complex().unwrap()).unwrap().is_none());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_document_str("{\"facets\":\n[[0,1,]]}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, Some(2));
                assert!(column.is_some());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_document_str(r#"{"facet":[[0,1]]}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_document_str(r#"{"facets":[[0,-1]]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn malformed_facet_is_parse_error() {
        let err = parse_document_str(r#"{"facets":[[0,0,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { line: None, .. }), "{err:?}");
        assert!(err.to_string().contains("MalformedFacet"));
        assert!(matches!(
            parse_document_str(r#"{"facets":[]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn weights_are_canonicalized_and_checked() {
        let doc = parse_document_str(
            r#"{"facets":[[2,1]],"weights":{"1":1.0,"2":1.5,"2,1":2.0},"metadata":{"name":"edge"}}"#,
        )
        .unwrap();
        let w = doc.weights.as_ref().unwrap();
        assert_eq!(w.keys().collect::<Vec<_>>(), vec!["1", "1,2", "2"]);
        assert_eq!(doc.name(), Some("edge"));
        let k = doc.complex().unwrap();
        let wa = doc.custom_weights(&k).unwrap().unwrap();
        assert_eq!(wa.get(1, 0), 2.0);

        let err = parse_document_str(r#"{"facets":[[0,1]],"weights":{"0,1":2.0}}"#).unwrap_err();
        assert_eq!(err, Error::WeightCoverage(vec!["0".into(), "1".into()]));

        let err = parse_document_str(r#"{"facets":[[0,1]],"weights":{"0":1,"1":1,"0,1":1,"7":1}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_document_str(r#"{"facets":[[0,1]],"weights":{"0":1,"1":1,"1,0":1,"0,1":1}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn nonpositive_weight_rejected_on_use() {
        let doc = parse_document_str(r#"{"facets":[[0,1]],"weights":{"0":1,"1":0,"0,1":1}}"#).unwrap();
        let k = doc.complex().unwrap();
        assert!(matches!(doc.custom_weights(&k), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn json_round_trip() {
        let doc = ComplexDocument::new(vec![vec![0, 1, 2]]).with_name("triangle");
        assert_eq!(parse_document_str(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(parse_document("/nonexistent/doc.json"), Err(Error::Io(_))));
    }
}
