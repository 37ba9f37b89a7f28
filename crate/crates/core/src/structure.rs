//! Structure morphisms: identities, copy, discard, swap, point states and
//! the coherence isomorphisms of the x-major tensor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Kernel, Kind};
use crate::object::FinObject;

pub fn identity(kind: Kind, x: &FinObject) -> Kernel {
    Kernel::deterministic(kind, x.clone(), x.clone(), |j| j)
}

/// `X → X ⊗ X`, `x ↦ (x,x)`.
pub fn copy(kind: Kind, x: &FinObject) -> Kernel {
    let n = x.len();
    Kernel::deterministic(kind, x.clone(), FinObject::tensor(x, x), |j| j * n + j)
}

/// `X → I`.
pub fn discard(kind: Kind, x: &FinObject) -> Kernel {
    Kernel::deterministic(kind, x.clone(), FinObject::unit(), |_| 0)
}

/// `X ⊗ Y → Y ⊗ X`.
pub fn swap(kind: Kind, x: &FinObject, y: &FinObject) -> Kernel {
    let (nx, ny) = (x.len(), y.len());
    Kernel::deterministic(kind, FinObject::tensor(x, y), FinObject::tensor(y, x), |j| {
        (j % ny) * nx + j / ny
    })
}

/// Point mass `I → X` at `label`.
pub fn delta(kind: Kind, x: &FinObject, label: &str) -> Result<Kernel> {
    let i = x.index_of(label)?;
    Ok(delta_at(kind, x, i))
}

pub(crate) fn delta_at(kind: Kind, x: &FinObject, index: usize) -> Kernel {
    Kernel::deterministic(kind, FinObject::unit(), x.clone(), |_| index)
}

/// Associator `(X ⊗ Y) ⊗ Z → X ⊗ (Y ⊗ Z)`; the identity matrix under x-major order.
pub fn assoc(kind: Kind, x: &FinObject, y: &FinObject, z: &FinObject) -> Kernel {
    let dom = FinObject::tensor(&FinObject::tensor(x, y), z);
    let cod = FinObject::tensor(x, &FinObject::tensor(y, z));
    Kernel::deterministic(kind, dom, cod, |j| j)
}

/// Inverse associator `X ⊗ (Y ⊗ Z) → (X ⊗ Y) ⊗ Z`.
pub fn assoc_inv(kind: Kind, x: &FinObject, y: &FinObject, z: &FinObject) -> Kernel {
    let dom = FinObject::tensor(x, &FinObject::tensor(y, z));
    let cod = FinObject::tensor(&FinObject::tensor(x, y), z);
    Kernel::deterministic(kind, dom, cod, |j| j)
}

/// `I ⊗ X → X`.
pub fn left_unitor(kind: Kind, x: &FinObject) -> Kernel {
    Kernel::deterministic(kind, FinObject::tensor(&FinObject::unit(), x), x.clone(), |j| j)
}

/// `X ⊗ I → X`.
pub fn right_unitor(kind: Kind, x: &FinObject) -> Kernel {
    Kernel::deterministic(kind, FinObject::tensor(x, &FinObject::unit()), x.clone(), |j| j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Copy,
    Discard,
    Swap,
    Identity,
    Delta,
}

/// Uniform entry point for the structure generators.
pub fn structure(
    kind: Kind,
    which: StructureKind,
    x: &FinObject,
    y: Option<&FinObject>,
    label: Option<&str>,
) -> Result<Kernel> {
    match which {
        StructureKind::Copy => Ok(copy(kind, x)),
        StructureKind::Discard => Ok(discard(kind, x)),
        StructureKind::Identity => Ok(identity(kind, x)),
        StructureKind::Swap => {
            let y = y.ok_or_else(|| Error::ShapeMismatch("swap needs a second object".into()))?;
            Ok(swap(kind, x, y))
        }
        StructureKind::Delta => {
            let label = label.ok_or_else(|| Error::ShapeMismatch("delta needs a label".into()))?;
            delta(kind, x, label)
        }
    }
}
