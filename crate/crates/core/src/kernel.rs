//! Kernels: matrices over one of three semirings with labelled domain and codomain.
//!
//! Entry `(i, j)` is the weight of codomain element `i` given domain element `j`,
//! so every column is a distribution (or an image, for relations).

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::object::{duplicate_label, FinObject};
use crate::scalar::{format_scalar, is_negative, parse_scalar, Scalar, Semiring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Nonnegative columns summing to one.
    Stoch,
    /// Columns summing to one, entries of any sign.
    Signed,
    /// Boolean columns with nonempty image.
    Multi,
}

impl Kind {
    pub fn is_boolean(self) -> bool {
        self == Kind::Multi
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Stoch => "stoch",
            Kind::Signed => "signed",
            Kind::Multi => "multi",
        })
    }
}

/// A single matrix entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Num(Scalar),
    Bool(bool),
}

impl Weight {
    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Num(x) => x.is_zero(),
            Weight::Bool(b) => !b,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Num(x) => f.write_str(&format_scalar(x)),
            Weight::Bool(b) => write!(f, "{}", u8::from(*b)),
        }
    }
}

/// First failure of a kernel's column law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Mat<S> {
    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub(crate) fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    fn matmul(&self, rhs: &Mat<S>) -> Mat<S> {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut out = vec![S::zero_elem(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero_elem() {
                        continue;
                    }
                    let slot = &mut out[i * rhs.cols + j];
                    *slot = slot.add(&a.mul(b));
                }
            }
        }
        Mat {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    fn kron(&self, rhs: &Mat<S>) -> Mat<S> {
        Mat::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self.get(r / rhs.rows, c / rhs.cols)
                .mul(rhs.get(r % rhs.rows, c % rhs.cols))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Weights {
    Num(Mat<Scalar>),
    Bool(Mat<bool>),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    kind: Kind,
    dom: FinObject,
    cod: FinObject,
    weights: Weights,
}

impl Kernel {
    /// Stochastic or signed kernel from rows (indexed by codomain), validated.
    pub fn from_rows(kind: Kind, dom: FinObject, cod: FinObject, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let k = Self::from_rows_unchecked(kind, dom, cod, rows)?;
        validate(&k).map_err(Error::Invalid)?;
        Ok(k)
    }

    /// Like [`Kernel::from_rows`] but only checks the shape; use [`validate`] afterwards.
    pub fn from_rows_unchecked(
        kind: Kind,
        dom: FinObject,
        cod: FinObject,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if kind == Kind::Multi {
            return Err(Error::UnsupportedKind(kind));
        }
        check_shape(&dom, &cod, rows.iter().map(Vec::len), rows.len())?;
        let data = rows.into_iter().flatten().collect();
        Ok(Kernel {
            kind,
            weights: Weights::Num(Mat {
                rows: cod.len(),
                cols: dom.len(),
                data,
            }),
            dom,
            cod,
        })
    }

    /// Multivalued kernel from a boolean matrix (rows indexed by codomain), validated.
    pub fn from_bool_rows(dom: FinObject, cod: FinObject, rows: Vec<Vec<bool>>) -> Result<Self> {
        let k = Self::from_bool_rows_unchecked(dom, cod, rows)?;
        validate(&k).map_err(Error::Invalid)?;
        Ok(k)
    }

    pub fn from_bool_rows_unchecked(dom: FinObject, cod: FinObject, rows: Vec<Vec<bool>>) -> Result<Self> {
        check_shape(&dom, &cod, rows.iter().map(Vec::len), rows.len())?;
        let data = rows.into_iter().flatten().collect();
        Ok(Kernel {
            kind: Kind::Multi,
            weights: Weights::Bool(Mat {
                rows: cod.len(),
                cols: dom.len(),
                data,
            }),
            dom,
            cod,
        })
    }

    /// Multivalued kernel from the image (codomain indices) of each domain element.
    pub fn from_images(dom: FinObject, cod: FinObject, images: &[Vec<usize>]) -> Result<Self> {
        if images.len() != dom.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for a domain of size {}",
                images.len(),
                dom.len()
            )));
        }
        let mut rows = vec![vec![false; dom.len()]; cod.len()];
        for (a, image) in images.iter().enumerate() {
            for &x in image {
                if x >= cod.len() {
                    return Err(Error::ShapeMismatch(format!("image index {x} out of range")));
                }
                rows[x][a] = true;
            }
        }
        Self::from_bool_rows(dom, cod, rows)
    }

    /// Test and fixture helper: rows of decimal fraction strings (or `0`/`1` for Multi).
    pub fn parse_rows(kind: Kind, dom: FinObject, cod: FinObject, rows: &[&[&str]]) -> Result<Self> {
        if kind == Kind::Multi {
            let rows = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| match s.trim() {
                            "1" | "true" => Ok(true),
                            "0" | "false" => Ok(false),
                            other => Err(Error::Parse(format!("invalid boolean {other:?}"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::from_bool_rows(dom, cod, rows);
        }
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(kind, dom, cod, rows)
    }

    /// Deterministic kernel sending domain element `j` to codomain element `map(j)`.
    pub fn deterministic(
        kind: Kind,
        dom: FinObject,
        cod: FinObject,
        map: impl Fn(usize) -> usize,
    ) -> Self {
        let targets: Vec<usize> = (0..dom.len()).map(map).collect();
        Self::build(kind, dom, cod, |r, c| targets[c] == r)
    }

    /// Builds a kernel from a 0/1 pattern; `true` becomes one.
    pub(crate) fn build(
        kind: Kind,
        dom: FinObject,
        cod: FinObject,
        pattern: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let (rows, cols) = (cod.len(), dom.len());
        let weights = if kind == Kind::Multi {
            Weights::Bool(Mat::from_fn(rows, cols, &pattern))
        } else {
            Weights::Num(Mat::from_fn(rows, cols, |r, c| {
                if pattern(r, c) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }))
        };
        Kernel {
            kind,
            dom,
            cod,
            weights,
        }
    }

    /// Builds a kernel from a weight function; the caller guarantees the column law.
    pub(crate) fn from_weight_fn(
        kind: Kind,
        dom: FinObject,
        cod: FinObject,
        f: impl Fn(usize, usize) -> Weight,
    ) -> Self {
        let (rows, cols) = (cod.len(), dom.len());
        let weights = if kind == Kind::Multi {
            Weights::Bool(Mat::from_fn(rows, cols, |r, c| match f(r, c) {
                Weight::Bool(b) => b,
                Weight::Num(x) => !x.is_zero(),
            }))
        } else {
            Weights::Num(Mat::from_fn(rows, cols, |r, c| match f(r, c) {
                Weight::Num(x) => x,
                Weight::Bool(b) => {
                    if b {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                }
            }))
        };
        Kernel {
            kind,
            dom,
            cod,
            weights,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dom(&self) -> &FinObject {
        &self.dom
    }

    pub fn cod(&self) -> &FinObject {
        &self.cod
    }

    pub fn get(&self, row: usize, col: usize) -> Weight {
        match &self.weights {
            Weights::Num(m) => Weight::Num(m.get(row, col).clone()),
            Weights::Bool(m) => Weight::Bool(*m.get(row, col)),
        }
    }

    /// Rational entry; `None` for multivalued kernels.
    pub fn scalar(&self, row: usize, col: usize) -> Option<&Scalar> {
        match &self.weights {
            Weights::Num(m) => Some(m.get(row, col)),
            Weights::Bool(_) => None,
        }
    }

    /// Whether the entry is nonzero (true, for relations).
    pub fn nonzero(&self, row: usize, col: usize) -> bool {
        match &self.weights {
            Weights::Num(m) => !m.get(row, col).is_zero(),
            Weights::Bool(m) => *m.get(row, col),
        }
    }

    /// Codomain indices where column `col` is nonzero.
    pub fn column_support(&self, col: usize) -> Vec<usize> {
        (0..self.cod.len()).filter(|&r| self.nonzero(r, col)).collect()
    }

    /// Codomain indices hit by some column: the support (or union of images).
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.cod.len())
            .filter(|&r| (0..self.dom.len()).any(|c| self.nonzero(r, c)))
            .collect()
    }

    pub fn column(&self, col: usize) -> Vec<Weight> {
        (0..self.cod.len()).map(|r| self.get(r, col)).collect()
    }

    /// Same matrix with new domain and codomain objects of the same sizes.
    pub fn relabel(&self, dom: FinObject, cod: FinObject) -> Result<Self> {
        if dom.len() != self.dom.len() || cod.len() != self.cod.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot relabel {}x{} kernel as {}x{}",
                self.cod.len(),
                self.dom.len(),
                cod.len(),
                dom.len()
            )));
        }
        Ok(Kernel {
            kind: self.kind,
            dom,
            cod,
            weights: self.weights.clone(),
        })
    }

    pub fn with_dom(&self, dom: FinObject) -> Result<Self> {
        self.relabel(dom, self.cod.clone())
    }

    pub fn with_cod(&self, cod: FinObject) -> Result<Self> {
        self.relabel(self.dom.clone(), cod)
    }

    /// Keeps only the given codomain rows; the caller guarantees the result is valid.
    pub(crate) fn select_rows(&self, rows: &[usize], cod: FinObject) -> Self {
        debug_assert_eq!(rows.len(), cod.len());
        Self::from_weight_fn(self.kind, self.dom.clone(), cod, |r, c| self.get(rows[r], c))
    }

    /// Replaces the columns for which `replace` returns `Some`.
    pub(crate) fn map_columns(&self, replace: impl Fn(usize) -> Option<Vec<Weight>>) -> Self {
        let cols: Vec<Option<Vec<Weight>>> = (0..self.dom.len()).map(replace).collect();
        Self::from_weight_fn(self.kind, self.dom.clone(), self.cod.clone(), |r, c| {
            match &cols[c] {
                Some(col) => col[r].clone(),
                None => self.get(r, c),
            }
        })
    }

    /// Rows of the matrix as strings, for reports.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.cod.len())
            .map(|r| (0..self.dom.len()).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Kernel<{}> {} -> {}", self.kind, self.dom, self.cod)?;
        for (label, row) in self.cod.labels().iter().zip(self.to_string_rows()) {
            writeln!(f, "  {label}: [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_shape(
    dom: &FinObject,
    cod: &FinObject,
    mut row_lengths: impl Iterator<Item = usize>,
    nrows: usize,
) -> Result<()> {
    if nrows != cod.len() {
        return Err(Error::ShapeMismatch(format!(
            "{nrows} rows for a codomain of size {}",
            cod.len()
        )));
    }
    if let Some(bad) = row_lengths.find(|&n| n != dom.len()) {
        return Err(Error::ShapeMismatch(format!(
            "row of length {bad} for a domain of size {}",
            dom.len()
        )));
    }
    Ok(())
}

fn same_kind(a: &Kernel, b: &Kernel) -> Result<()> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch {
            left: a.kind,
            right: b.kind,
        });
    }
    Ok(())
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(g: &Kernel, f: &Kernel) -> Result<Kernel> {
    same_kind(g, f)?;
    if f.cod != g.dom {
        return Err(Error::DomainMismatch {
            expected: g.dom.labels().to_vec(),
            found: f.cod.labels().to_vec(),
        });
    }
    let weights = match (&g.weights, &f.weights) {
        (Weights::Num(a), Weights::Num(b)) => Weights::Num(a.matmul(b)),
        (Weights::Bool(a), Weights::Bool(b)) => Weights::Bool(a.matmul(b)),
        _ => unreachable!("kind checked"),
    };
    Ok(Kernel {
        kind: f.kind,
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        weights,
    })
}

/// Composes a chain given in diagrammatic order: `chain(&[f, g, h]) = h ∘ g ∘ f`.
pub fn chain(kernels: &[&Kernel]) -> Result<Kernel> {
    let (first, rest) = kernels
        .split_first()
        .ok_or_else(|| Error::ShapeMismatch("empty chain".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, k| compose(k, &acc))
}

/// `f ⊗ g`, Kronecker product with x-major indices.
pub fn tensor(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    same_kind(f, g)?;
    let weights = match (&f.weights, &g.weights) {
        (Weights::Num(a), Weights::Num(b)) => Weights::Num(a.kron(b)),
        (Weights::Bool(a), Weights::Bool(b)) => Weights::Bool(a.kron(b)),
        _ => unreachable!("kind checked"),
    };
    Ok(Kernel {
        kind: f.kind,
        dom: FinObject::tensor(&f.dom, &g.dom),
        cod: FinObject::tensor(&f.cod, &g.cod),
        weights,
    })
}

/// Exact equality: kind, labels and every entry.
pub fn kernel_equal(f: &Kernel, g: &Kernel) -> bool {
    f == g
}

/// Every column is a point mass (a singleton image, for relations).
pub fn is_deterministic(f: &Kernel) -> bool {
    (0..f.dom.len()).all(|c| {
        let support = f.column_support(c);
        support.len() == 1
            && match &f.weights {
                Weights::Num(m) => m.get(support[0], c).is_one(),
                Weights::Bool(_) => true,
            }
    })
}

/// Determinism via the comonoid equation `copy ∘ f = (f ⊗ f) ∘ copy`.
pub fn is_deterministic_by_copy(f: &Kernel) -> bool {
    let kind = f.kind;
    let lhs = compose(&crate::structure::copy(kind, &f.cod), f);
    let rhs = tensor(f, f).and_then(|ff| compose(&ff, &crate::structure::copy(kind, &f.dom)));
    matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
}

/// Which output of a two-factor codomain to sum out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Sums (or ORs) out one factor of `f`'s codomain `X ⊗ Y`, where `|X| = left_size`.
pub fn marginalize(f: &Kernel, left_size: usize, discard: Side) -> Result<Kernel> {
    let (left, right) = f.cod.split_at(left_size)?;
    let (kept, n_left, n_right) = (
        match discard {
            Side::Left => right.clone(),
            Side::Right => left.clone(),
        },
        left.len(),
        right.len(),
    );
    let out_index = |r: usize| match discard {
        Side::Left => r % n_right,
        Side::Right => r / n_right,
    };
    debug_assert_eq!(n_left * n_right, f.cod.len());
    let weights = match &f.weights {
        Weights::Num(m) => {
            let mut out = Mat::from_fn(kept.len(), f.dom.len(), |_, _| Scalar::zero());
            for r in 0..f.cod.len() {
                for c in 0..f.dom.len() {
                    let slot = &mut out.data[out_index(r) * f.dom.len() + c];
                    *slot += m.get(r, c);
                }
            }
            Weights::Num(out)
        }
        Weights::Bool(m) => {
            let mut out = Mat::from_fn(kept.len(), f.dom.len(), |_, _| false);
            for r in 0..f.cod.len() {
                for c in 0..f.dom.len() {
                    out.data[out_index(r) * f.dom.len() + c] |= *m.get(r, c);
                }
            }
            Weights::Bool(out)
        }
    };
    Ok(Kernel {
        kind: f.kind,
        dom: f.dom.clone(),
        cod: kept,
        weights,
    })
}

/// Checks label uniqueness and the column law of the kernel's kind.
pub fn validate(k: &Kernel) -> std::result::Result<(), Violation> {
    for (name, obj) in [("domain", &k.dom), ("codomain", &k.cod)] {
        if let Some(dup) = duplicate_label(obj.labels()) {
            return Err(Violation {
                column: None,
                message: format!("duplicate label {dup:?} in {name}"),
            });
        }
    }
    for c in 0..k.dom.len() {
        match &k.weights {
            Weights::Num(m) => {
                if k.kind == Kind::Stoch {
                    if let Some(r) = (0..k.cod.len()).find(|&r| is_negative(m.get(r, c))) {
                        return Err(Violation {
                            column: Some(c),
                            message: format!(
                                "column {c} has negative entry {} at row {r}",
                                format_scalar(m.get(r, c))
                            ),
                        });
                    }
                }
                let sum: Scalar = (0..k.cod.len()).map(|r| m.get(r, c)).sum();
                if !sum.is_one() {
                    return Err(Violation {
                        column: Some(c),
                        message: format!("column {c} sums to {}", format_scalar(&sum)),
                    });
                }
            }
            Weights::Bool(m) => {
                if !(0..k.cod.len()).any(|r| *m.get(r, c)) {
                    return Err(Violation {
                        column: Some(c),
                        message: format!("column {c} has empty image"),
                    });
                }
            }
        }
    }
    Ok(())
}
