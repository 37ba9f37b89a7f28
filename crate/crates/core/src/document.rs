//! JSON interchange format for kernels.
//!
//! ```json
//! {"kind": "stoch", "dom": ["a"], "cod": ["x", "y"], "matrix": [["1/2"], ["1/2"]]}
//! {"kind": "multi", "dom": ["0", "1"], "cod": ["0", "1"], "images": [["0", "1"], ["1"]]}
//! ```
//!
//! Matrix rows index the codomain and columns the domain. Entries are
//! fraction strings or integers and are reduced on parse.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{validate, Kernel, Kind};
use crate::object::FinObject;
use crate::scalar::{format_scalar, parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDocument {
    pub kind: Kind,
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Vec<String>>>,
}

fn field_error(field: impl std::fmt::Display, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}: {msg}"))
}

fn object(labels: &[String], field: &str) -> Result<FinObject> {
    FinObject::new(labels.iter().cloned()).map_err(|e| field_error(field, e))
}

impl KernelDocument {
    pub fn from_kernel(k: &Kernel) -> Self {
        let dom = k.dom().labels().to_vec();
        let cod = k.cod().labels().to_vec();
        if k.kind() == Kind::Multi {
            let images = (0..k.dom().len())
                .map(|c| {
                    k.column_support(c)
                        .into_iter()
                        .map(|r| k.cod().label(r).to_string())
                        .collect()
                })
                .collect();
            KernelDocument {
                kind: k.kind(),
                dom,
                cod,
                matrix: None,
                images: Some(images),
            }
        } else {
            let matrix = (0..k.cod().len())
                .map(|r| {
                    (0..k.dom().len())
                        .map(|c| Entry::Text(format_scalar(k.scalar(r, c).expect("numeric kernel"))))
                        .collect()
                })
                .collect();
            KernelDocument {
                kind: k.kind(),
                dom,
                cod,
                matrix: Some(matrix),
                images: None,
            }
        }
    }

    /// Builds the kernel without checking the column law.
    pub fn to_kernel_unvalidated(&self) -> Result<Kernel> {
        let dom = object(&self.dom, "dom")?;
        let cod = object(&self.cod, "cod")?;
        match self.kind {
            Kind::Multi => {
                if self.matrix.is_some() {
                    return Err(field_error("matrix", "multi kernels use \"images\""));
                }
                let images = self
                    .images
                    .as_ref()
                    .ok_or_else(|| field_error("images", "missing field"))?;
                if images.len() != dom.len() {
                    return Err(field_error(
                        "images",
                        format!("expected {} entries, found {}", dom.len(), images.len()),
                    ));
                }
                let mut rows = vec![vec![false; dom.len()]; cod.len()];
                for (c, image) in images.iter().enumerate() {
                    for (i, label) in image.iter().enumerate() {
                        let r = cod
                            .index_of(label)
                            .map_err(|_| field_error(format!("images[{c}][{i}]"), format!("unknown label {label:?}")))?;
                        rows[r][c] = true;
                    }
                }
                Kernel::from_bool_rows_unchecked(dom, cod, rows)
            }
            kind => {
                if self.images.is_some() {
                    return Err(field_error("images", "only multi kernels use \"images\""));
                }
                let matrix = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| field_error("matrix", "missing field"))?;
                if matrix.len() != cod.len() {
                    return Err(field_error(
                        "matrix",
                        format!("expected {} rows, found {}", cod.len(), matrix.len()),
                    ));
                }
                let mut rows = Vec::with_capacity(matrix.len());
                for (r, row) in matrix.iter().enumerate() {
                    if row.len() != dom.len() {
                        return Err(field_error(
                            format!("matrix[{r}]"),
                            format!("expected {} entries, found {}", dom.len(), row.len()),
                        ));
                    }
                    let parsed = row
                        .iter()
                        .enumerate()
                        .map(|(c, entry)| match entry {
                            Entry::Int(i) => Ok(Scalar::from_integer((*i).into())),
                            Entry::Text(s) => parse_scalar(s).map_err(|e| field_error(format!("matrix[{r}][{c}]"), e)),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(parsed);
                }
                Kernel::from_rows_unchecked(kind, dom, cod, rows)
            }
        }
    }

    pub fn to_kernel(&self) -> Result<Kernel> {
        let k = self.to_kernel_unvalidated()?;
        validate(&k).map_err(Error::Invalid)?;
        Ok(k)
    }
}

fn parse_document(text: &str) -> Result<KernelDocument> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own position; keep ours as the single prefix.
        let full = e.to_string();
        let msg = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
        Error::Parse(format!("line {} column {}: {msg}", e.line(), e.column()))
    })
}

/// Parses and validates a kernel document.
pub fn parse_kernel(text: &str) -> Result<Kernel> {
    parse_document(text)?.to_kernel()
}

pub fn parse_kernel_unvalidated(text: &str) -> Result<Kernel> {
    parse_document(text)?.to_kernel_unvalidated()
}

/// Canonical single-line JSON.
pub fn emit_kernel(k: &Kernel) -> String {
    serde_json::to_string(&KernelDocument::from_kernel(k)).expect("documents serialize")
}

impl Serialize for Kernel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KernelDocument::from_kernel(self).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_spec_example() {
        let k = parse_kernel(r#"{"kind":"stoch","dom":["a"],"cod":["x","y"],"matrix":[["1/2"],["1/2"]]}"#).unwrap();
        assert_eq!((k.cod().len(), k.dom().len()), (2, 1));
    }

    #[test]
    fn canonicalizes_fractions() {
        let k = parse_kernel(r#"{"kind":"stoch","dom":["a"],"cod":["x","y"],"matrix":[["2/4"],["1/2"]]}"#).unwrap();
        assert_eq!(
            emit_kernel(&k),
            r#"{"kind":"stoch","dom":["a"],"cod":["x","y"],"matrix":[["1/2"],["1/2"]]}"#
        );
    }

    #[test]
    fn integers_accepted() {
        let k = parse_kernel(r#"{"kind":"signed","dom":["a"],"cod":["x","y"],"matrix":[[2],["-1"]]}"#).unwrap();
        assert_eq!(k.to_string_rows(), vec![vec!["2"], vec!["-1"]]);
    }

    #[test]
    fn validation_error_forwarded() {
        let err = parse_kernel(r#"{"kind":"stoch","dom":["a"],"cod":["x","y"],"matrix":[["1/2"],["1/4"]]}"#)
            .unwrap_err();
        match err {
            Error::Invalid(v) => assert!(v.message.contains("3/4"), "{v}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_locate_problem() {
        let err = parse_kernel("{\n\"kind\": \"stoch\",\n\"dom\": [\"a\"],\n}").unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.starts_with("line 4")), "{err:?}");
        let err = parse_kernel(r#"{"kind":"stoch","dom":["a"],"cod":["x"],"matrix":[["1/0"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.starts_with("matrix[0][0]")), "{err:?}");
        let err = parse_kernel(r#"{"kind":"multi","dom":["a"],"cod":["x"],"images":[["z"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.starts_with("images[0][0]")), "{err:?}");
    }

    #[test]
    fn fixtures_round_trip() {
        let mut all = fixtures::paper_stochastic_idempotents();
        all.extend(fixtures::non_balanced_idempotents());
        for k in all {
            let text = emit_kernel(&k);
            let back = parse_kernel(&text).unwrap();
            assert_eq!(back, k);
            assert_eq!(emit_kernel(&back), text);
        }
    }

    #[test]
    fn multi_uses_images() {
        let text = emit_kernel(&fixtures::multi_upset_idempotent());
        assert_eq!(text, r#"{"kind":"multi","dom":["0","1"],"cod":["0","1"],"images":[["0","1"],["1"]]}"#);
    }
}
