//! Built-in fixture complexes.

use std::collections::BTreeSet;

use crate::document::ComplexDocument;
use crate::error::{Error, Result};

pub const GENERATORS: &[&str] = &["tetrahedron", "torus_grid", "cycle", "complete_graph", "circulant"];

/// Builds a named fixture. Parameters: `torus_grid m n`, `cycle n`,
/// `complete_graph n`, `circulant n o1 o2 ...`.
pub fn generate(name: &str, params: &[u64]) -> Result<ComplexDocument> {
    let doc = match name {
        "tetrahedron" => {
            expect_params(name, params, 0)?;
            tetrahedron()
        }
        "torus_grid" => {
            expect_params(name, params, 2)?;
            torus_grid(params[0], params[1])?
        }
        "cycle" => {
            expect_params(name, params, 1)?;
            cycle(params[0])?
        }
        "complete_graph" => {
            expect_params(name, params, 1)?;
            complete_graph(params[0])?
        }
        "circulant" => {
            if params.is_empty() {
                return Err(Error::BadParams("circulant needs n followed by offsets".into()));
            }
            circulant(params[0], &params[1..])?
        }
        _ => return Err(Error::UnknownGenerator(name.to_string())),
    };
    Ok(doc)
}

fn expect_params(name: &str, params: &[u64], n: usize) -> Result<()> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "{name} takes {n} parameter(s), got {}",
            params.len()
        )))
    }
}

fn call_name(name: &str, params: &[u64]) -> String {
    let args: Vec<String> = params.iter().map(u64::to_string).collect();
    format!("{name}({})", args.join(","))
}

pub fn tetrahedron() -> ComplexDocument {
    ComplexDocument::new(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).with_name("tetrahedron")
}

/// Diagonal triangulation of the `m × n` flat torus; vertex `(a, b)` is `a·n + b`.
pub fn torus_grid(m: u64, n: u64) -> Result<ComplexDocument> {
    if m < 3 || n < 3 {
        return Err(Error::BadParams(format!("torus_grid needs m, n >= 3, got {m}, {n}")));
    }
    let id = |a: u64, b: u64| (a % m) * n + (b % n);
    let mut facets = Vec::with_capacity((2 * m * n) as usize);
    for a in 0..m {
        for b in 0..n {
            facets.push(vec![id(a, b), id(a + 1, b), id(a + 1, b + 1)]);
            facets.push(vec![id(a, b), id(a, b + 1), id(a + 1, b + 1)]);
        }
    }
    Ok(ComplexDocument::new(facets).with_name(call_name("torus_grid", &[m, n])))
}

pub fn cycle(n: u64) -> Result<ComplexDocument> {
    if n < 3 {
        return Err(Error::BadParams(format!("cycle needs n >= 3, got {n}")));
    }
    let facets = (0..n).map(|v| vec![v, (v + 1) % n]).collect();
    Ok(ComplexDocument::new(facets).with_name(call_name("cycle", &[n])))
}

pub fn complete_graph(n: u64) -> Result<ComplexDocument> {
    if n < 2 {
        return Err(Error::BadParams(format!("complete_graph needs n >= 2, got {n}")));
    }
    let facets = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    Ok(ComplexDocument::new(facets).with_name(call_name("complete_graph", &[n])))
}

/// Vertices `0..n`, with `v` joined to `v ± o (mod n)` for every offset `o`.
pub fn circulant(n: u64, offsets: &[u64]) -> Result<ComplexDocument> {
    if n < 3 {
        return Err(Error::BadParams(format!("circulant needs n >= 3, got {n}")));
    }
    if offsets.is_empty() || offsets.iter().any(|&o| o % n == 0) {
        return Err(Error::BadParams(
            "circulant offsets must be nonempty and nonzero mod n".into(),
        ));
    }
    let mut edges = BTreeSet::new();
    for v in 0..n {
        for &o in offsets {
            let u = (v + o) % n;
            edges.insert((v.min(u), v.max(u)));
        }
    }
    let facets = edges.into_iter().map(|(a, b)| vec![a, b]).collect();
    let mut params = vec![n];
    params.extend_from_slice(offsets);
    Ok(ComplexDocument::new(facets).with_name(call_name("circulant", &params)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::orient;

    fn euler(counts: &[usize]) -> i64 {
        counts
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    #[test]
    fn tetrahedron_counts() {
        let k = generate("tetrahedron", &[]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![4, 6, 4]);
        assert_eq!(euler(&k.counts()), 2);
    }

    #[test]
    fn torus_counts_and_incidence() {
        for (m, n) in [(3, 3), (4, 4), (3, 5)] {
            let doc = generate("torus_grid", &[m, n]).unwrap();
            let k = doc.complex().unwrap();
            let mn = (m * n) as usize;
            assert_eq!(k.counts(), vec![mn, 3 * mn, 2 * mn]);
            assert_eq!(euler(&k.counts()), 0);
            assert!((0..k.face_count(1)).all(|e| k.cofacets(1, e).len() == 2));
            assert!(orient(&k).is_ok());
        }
        assert_eq!(generate("torus_grid", &[3, 3]).unwrap().name(), Some("torus_grid(3,3)"));
    }

    #[test]
    fn graphs() {
        let k = generate("cycle", &[6]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![6, 6]);
        let k = generate("complete_graph", &[5]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![5, 10]);
        let k = generate("circulant", &[8, 1, 2]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![8, 16]);
        // offset n/2 yields each diameter once
        let k = generate("circulant", &[6, 3]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![6, 3]);
        let k = generate("circulant", &[7, 1, 6]).unwrap().complex().unwrap();
        assert_eq!(k.counts(), vec![7, 7]);
    }

    #[test]
    fn errors() {
        assert!(matches!(generate("sphere", &[]), Err(Error::UnknownGenerator(_))));
        for (name, params) in [
            ("torus_grid", vec![2, 3]),
            ("torus_grid", vec![3]),
            ("cycle", vec![2]),
            ("complete_graph", vec![1]),
            ("circulant", vec![]),
            ("circulant", vec![6]),
            ("circulant", vec![6, 6]),
            ("tetrahedron", vec![1]),
        ] {
            assert!(
                matches!(generate(name, &params), Err(Error::BadParams(_))),
                "{name} {params:?}"
            );
        }
    }
}
