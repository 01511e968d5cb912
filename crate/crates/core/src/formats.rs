//! On-disk JSON shapes for polygons and polytopes.
//!
//! ```json
//! {"n": 5, "vertices": [[1.0, 0.0], [0.309, 0.951], ...]}
//! {"d": 3, "n": 8, "vertices": [[x1, x2, x3], ...]}
//! ```
//!
//! Unknown keys are ignored so that reports carrying extra metadata can be
//! read back as documents.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{ComplexPolygon, C64};
use crate::error::{Error, Result};
use crate::polytope::PolytopeVertices;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub n: usize,
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonDocument {
    pub fn from_polygon(polygon: &ComplexPolygon) -> Self {
        Self {
            n: polygon.n(),
            vertices: polygon.vertices().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_polygon(&self) -> Result<ComplexPolygon> {
        if self.vertices.len() != self.n {
            return Err(Error::InvalidDocument(format!(
                "n = {} but {} vertices listed",
                self.n,
                self.vertices.len()
            )));
        }
        if self.vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDocument("non-finite coordinate".into()));
        }
        ComplexPolygon::new(
            self.vertices
                .iter()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub d: usize,
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeDocument {
    pub fn from_polytope(polytope: &PolytopeVertices) -> Self {
        Self {
            d: polytope.d(),
            n: polytope.n(),
            vertices: polytope
                .vertices()
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<PolytopeVertices> {
        if self.vertices.len() != self.n {
            return Err(Error::InvalidDocument(format!(
                "n = {} but {} vertices listed",
                self.n,
                self.vertices.len()
            )));
        }
        if let Some(bad) = self.vertices.iter().find(|v| v.len() != self.d) {
            return Err(Error::InvalidDocument(format!(
                "vertex of length {} in dimension {}",
                bad.len(),
                self.d
            )));
        }
        if self.vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDocument("non-finite coordinate".into()));
        }
        PolytopeVertices::new(
            self.d,
            self.vertices
                .iter()
                .map(|v| DVector::from_vec(v.clone()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{build_q, FrequencySet};

    #[test]
    fn polygon_document_parses() {
        let doc: PolygonDocument =
            serde_json::from_str(r#"{"n": 4, "vertices": [[1,0],[0,1],[-1,0],[0,-1]]}"#).unwrap();
        let p = doc.to_polygon().unwrap();
        assert_eq!(p.vertex(1), C64::new(0.0, 1.0));
        assert_eq!(PolygonDocument::from_polygon(&p), doc);
    }

    #[test]
    fn polygon_document_rejects_bad_shapes() {
        let doc = PolygonDocument {
            n: 5,
            vertices: vec![[0.0, 0.0]; 4],
        };
        assert!(doc.to_polygon().is_err());
        assert!(
            serde_json::from_str::<PolygonDocument>(r#"{"n": 4, "vertices": [[1,0,2]]}"#).is_err()
        );
        let tagged: PolygonDocument = serde_json::from_str(
            r#"{"schema": "x", "n": 4, "vertices": [[1,0],[0,1],[-1,0],[0,-1]]}"#,
        )
        .unwrap();
        assert!(tagged.to_polygon().is_ok());
    }

    #[test]
    fn polytope_document_roundtrip() {
        let q = build_q(8, 3, &FrequencySet::new(vec![1], 8).unwrap()).unwrap();
        let doc = PolytopeDocument::from_polytope(&q);
        let text = serde_json::to_string(&doc).unwrap();
        let back: PolytopeDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_polytope().unwrap(), q);
    }

    #[test]
    fn polytope_document_rejects_ragged_rows() {
        let doc = PolytopeDocument {
            d: 2,
            n: 5,
            vertices: vec![
                vec![0.0, 1.0],
                vec![1.0],
                vec![0.0, 0.0],
                vec![2.0, 2.0],
                vec![3.0, 1.0],
            ],
        };
        assert!(matches!(doc.to_polytope(), Err(Error::InvalidDocument(_))));
    }
}
