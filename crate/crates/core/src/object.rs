//! Finite objects: ordered lists of distinct labels.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Label of the single element of the monoidal unit.
pub const UNIT_LABEL: &str = "•";

#[derive(Debug)]
struct Inner {
    labels: Vec<String>,
    factors: Option<(FinObject, FinObject)>,
}

/// A finite set with a fixed element order.
///
/// Equality compares labels only. Tensor objects remember their two factors so
/// that marginalization can recover them, but an object parsed from labels of
/// the form `"(x,y)"` can be split as well.
#[derive(Clone)]
pub struct FinObject(Arc<Inner>);

impl FinObject {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if let Some(dup) = first_duplicate(&labels) {
            return Err(Error::DuplicateLabel(dup.to_string()));
        }
        Ok(Self::from_unique(labels))
    }

    pub(crate) fn from_unique(labels: Vec<String>) -> Self {
        FinObject(Arc::new(Inner { labels, factors: None }))
    }

    /// Objects with labels `"0"`, `"1"`, …, `"n-1"`.
    pub fn range(n: usize) -> Self {
        Self::from_unique((0..n).map(|i| i.to_string()).collect())
    }

    /// Objects with labels `"1"`, …, `"n"`.
    pub fn one_based(n: usize) -> Self {
        Self::from_unique((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn unit() -> Self {
        Self::from_unique(vec![UNIT_LABEL.to_string()])
    }

    pub fn empty() -> Self {
        Self::from_unique(Vec::new())
    }

    /// `X ⊗ Y` with elements `(x,y)` in x-major order.
    pub fn tensor(left: &FinObject, right: &FinObject) -> Self {
        let mut labels = Vec::with_capacity(left.len() * right.len());
        for x in left.labels() {
            for y in right.labels() {
                labels.push(format!("({x},{y})"));
            }
        }
        FinObject(Arc::new(Inner {
            labels,
            factors: Some((left.clone(), right.clone())),
        }))
    }

    /// Subset object keeping the original labels in their original order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self::from_unique(indices.iter().map(|&i| self.0.labels[i].clone()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.0.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Recovers the two factors of a tensor object whose left factor has
    /// `left_size` elements.
    pub fn split_at(&self, left_size: usize) -> Result<(FinObject, FinObject)> {
        let bad = || Error::BadSplit {
            size: self.len(),
            left: left_size,
        };
        if let Some((l, r)) = &self.0.factors {
            if l.len() == left_size {
                return Ok((l.clone(), r.clone()));
            }
            // A nested tensor may still split at another position.
        }
        if left_size == 0 || self.len() % left_size != 0 {
            if self.is_empty() && left_size == 0 {
                return Ok((FinObject::empty(), FinObject::empty()));
            }
            return Err(bad());
        }
        let right_size = self.len() / left_size;
        let pairs: Option<Vec<(String, String)>> =
            self.labels().iter().map(|l| split_pair_label(l)).collect();
        let pairs = pairs.ok_or_else(bad)?;
        let left: Vec<String> = (0..left_size)
            .map(|i| pairs[i * right_size].0.clone())
            .collect();
        let right: Vec<String> = (0..right_size).map(|j| pairs[j].1.clone()).collect();
        for (k, (a, b)) in pairs.iter().enumerate() {
            if *a != left[k / right_size] || *b != right[k % right_size] {
                return Err(bad());
            }
        }
        let left = FinObject::new(left).map_err(|_| bad())?;
        let right = FinObject::new(right).map_err(|_| bad())?;
        Ok((left, right))
    }
}

fn first_duplicate(labels: &[String]) -> Option<&str> {
    let mut seen = HashSet::new();
    labels
        .iter()
        .find(|l| !seen.insert(l.as_str()))
        .map(String::as_str)
}

impl serde::Serialize for FinObject {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.labels())
    }
}

pub(crate) fn duplicate_label(labels: &[String]) -> Option<String> {
    first_duplicate(labels).map(str::to_string)
}

/// Splits `"(a,b)"` at the top-level comma.
fn split_pair_label(label: &str) -> Option<(String, String)> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    let mut cut = None;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if cut.is_some() {
                    return None;
                }
                cut = Some(i);
            }
            _ => {}
        }
    }
    let cut = cut?;
    Some((inner[..cut].to_string(), inner[cut + 1..].to_string()))
}

impl PartialEq for FinObject {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for FinObject {}

impl Hash for FinObject {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.labels.hash(state);
    }
}

impl fmt::Debug for FinObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

impl fmt::Display for FinObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_is_x_major() {
        let x = FinObject::new(["a", "b"]).unwrap();
        let y = FinObject::new(["0", "1", "2"]).unwrap();
        let xy = FinObject::tensor(&x, &y);
        assert_eq!(xy.len(), 6);
        assert_eq!(xy.label(0), "(a,0)");
        assert_eq!(xy.label(1), "(a,1)");
        assert_eq!(xy.label(3), "(b,0)");
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(
            FinObject::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
    }

    #[test]
    fn split_recovers_factors_from_labels() {
        let x = FinObject::new(["a", "b"]).unwrap();
        let y = FinObject::new(["(u,v)", "w"]).unwrap();
        let xy = FinObject::tensor(&x, &y);
        let parsed = FinObject::new(xy.labels().to_vec()).unwrap();
        let (l, r) = parsed.split_at(2).unwrap();
        assert_eq!(l, x);
        assert_eq!(r, y);
        assert!(parsed.split_at(3).is_err());
        assert!(FinObject::range(4).split_at(2).is_err());
    }

    #[test]
    fn unit_has_one_element() {
        assert_eq!(FinObject::unit().labels(), &["•".to_string()]);
        let x = FinObject::range(2);
        assert_eq!(FinObject::tensor(&x, &FinObject::unit()).label(1), "(1,•)");
    }
}
