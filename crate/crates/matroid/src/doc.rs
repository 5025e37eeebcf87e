//! JSON documents: the matroid interchange schema and report rendering.
//!
//! Matroid documents look like
//! `{"name": ..., "elements": [...], "backend": {...}}` where the backend
//! is one of `{"kind":"linear","q":7,"matrix":[[...]]}`,
//! `{"kind":"bases","bases":[["a","b"],...]}`, or
//! `{"kind":"rank_table","ranks":{"a,b":2,...}}` with subset keys as
//! sorted comma-joined labels. Bit order follows the element list.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ground::{subsets_of, GroundSet, Mask};
use crate::matrix::Matrix;
use crate::matroid::{Backend, Matroid};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidDoc {
    #[serde(default)]
    pub name: String,
    pub elements: Vec<String>,
    pub backend: BackendDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendDoc {
    Linear {
        q: usize,
        matrix: Vec<Vec<u8>>,
    },
    Bases {
        bases: Vec<Vec<String>>,
    },
    RankTable {
        ranks: BTreeMap<String, u8>,
    },
}

impl MatroidDoc {
    pub fn to_matroid(&self) -> Result<Matroid> {
        let ground = GroundSet::new(self.elements.clone())?;
        let backend = match &self.backend {
            BackendDoc::Linear { q, matrix } => {
                let field = FieldSpec::new(*q)?;
                let mat = Matrix::from_rows(matrix.clone(), self.elements.clone())?;
                Backend::Linear { field, matrix: mat }
            }
            BackendDoc::Bases { bases } => {
                let mut masks = Vec::with_capacity(bases.len());
                for b in bases {
                    masks.push(ground.mask_of(b)?);
                }
                Backend::Bases { bases: masks }
            }
            BackendDoc::RankTable { ranks } => {
                let n = ground.len();
                let mut table = vec![0u8; 1 << n];
                let mut seen = vec![false; 1 << n];
                for (key, &r) in ranks {
                    let labels: Vec<&str> = if key.is_empty() {
                        vec![]
                    } else {
                        key.split(',').collect()
                    };
                    let mask = ground.mask_of(&labels)?;
                    table[mask as usize] = r;
                    seen[mask as usize] = true;
                }
                if seen.iter().any(|&s| !s) {
                    return Err(Error::Invalid(
                        "rank table does not cover every subset".into(),
                    ));
                }
                Backend::Table { ranks: table }
            }
        };
        Matroid::new(ground, backend)
    }

    pub fn from_matroid(name: &str, m: &Matroid) -> MatroidDoc {
        let mut ranks = BTreeMap::new();
        for x in subsets_of(m.full_mask()) {
            ranks.insert(m.ground().subset_key(x), m.rank(x) as u8);
        }
        MatroidDoc {
            name: name.to_string(),
            elements: m.ground().labels().to_vec(),
            backend: BackendDoc::RankTable { ranks },
        }
    }
}

pub fn parse_matroid(json: &str) -> Result<Matroid> {
    let doc: MatroidDoc =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("bad matroid JSON: {e}")))?;
    doc.to_matroid()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub q: usize,
    pub rows: usize,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<u8>>,
}

impl MatrixDoc {
    pub fn from_matrix(q: usize, m: &Matrix) -> MatrixDoc {
        MatrixDoc {
            q,
            rows: m.rows,
            labels: m.labels.clone(),
            entries: m.row_slices(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::from_rows(self.entries.clone(), self.labels.clone())
    }
}

/// Render a mask as sorted labels for reports.
pub fn mask_labels(m: &Matroid, x: Mask) -> Vec<String> {
    m.ground().labels_of(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    #[test]
    fn rank_table_roundtrip() {
        let m = uniform(2, 4, "e").unwrap();
        let doc = MatroidDoc::from_matroid("u24", &m);
        let json = serde_json::to_string(&doc).unwrap();
        let back = parse_matroid(&json).unwrap();
        for x in subsets_of(m.full_mask()) {
            assert_eq!(m.rank(x), back.rank(x));
        }
    }

    #[test]
    fn linear_doc_parses() {
        let json = r#"{
            "name": "u24-gf3",
            "elements": ["a", "b", "c", "d"],
            "backend": {"kind": "linear", "q": 3, "matrix": [[1,0,1,1],[0,1,1,2]]}
        }"#;
        let m = parse_matroid(json).unwrap();
        assert_eq!(m.full_rank(), 2);
        assert_eq!(m.rank(0b1111), 2);
        assert!(m.check_axioms().valid);
    }

    #[test]
    fn bases_doc_parses() {
        let json = r#"{
            "name": "u23",
            "elements": ["a", "b", "c"],
            "backend": {"kind": "bases", "bases": [["a","b"],["a","c"],["b","c"]]}
        }"#;
        let m = parse_matroid(json).unwrap();
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn incomplete_rank_table_rejected() {
        let json = r#"{
            "name": "bad",
            "elements": ["a", "b"],
            "backend": {"kind": "rank_table", "ranks": {"": 0, "a": 1}}
        }"#;
        assert!(parse_matroid(json).is_err());
    }
}
