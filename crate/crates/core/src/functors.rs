//! The input-output relation functor, parametric morphisms and conditionals.

use num_traits::Zero;
use serde::Serialize;

use crate::asrel::{ase, AseQuery};
use crate::error::{Error, Result};
use crate::kernel::{compose, marginalize, tensor, Kernel, Kind, Side, Weight};
use crate::object::FinObject;
use crate::scalar::Scalar;
use crate::structure::{assoc, copy, discard, identity, left_unitor};

/// `Υ(p)`: the relation `a ↦ {x : p(x|a) > 0}`.
pub fn upsilon(p: &Kernel) -> Result<Kernel> {
    if p.kind() != Kind::Stoch {
        return Err(Error::UnsupportedKind(p.kind()));
    }
    Ok(Kernel::from_weight_fn(Kind::Multi, p.dom().clone(), p.cod().clone(), |r, c| {
        Weight::Bool(p.nonzero(r, c))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UpsilonCheck {
    pub composition_ok: bool,
    pub tensor_ok: bool,
    pub copy_ok: bool,
}

impl UpsilonCheck {
    pub fn all_ok(&self) -> bool {
        self.composition_ok && self.tensor_ok && self.copy_ok
    }
}

/// Functoriality, monoidality and copy preservation of `Υ` on `g ∘ p`.
pub fn upsilon_check(p: &Kernel, g: &Kernel) -> Result<UpsilonCheck> {
    let gp = compose(g, p).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let composition_ok = upsilon(&gp)? == compose(&upsilon(g)?, &upsilon(p)?)?;
    let tensor_ok = upsilon(&tensor(p, g)?)? == tensor(&upsilon(p)?, &upsilon(g)?)?;
    let copy_ok = upsilon(&copy(Kind::Stoch, p.dom()))? == copy(Kind::Multi, p.dom());
    Ok(UpsilonCheck {
        composition_ok,
        tensor_ok,
        copy_ok,
    })
}

/// A morphism `A → X` of the category parametrized by `W`, stored as a
/// kernel `W ⊗ A → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMorphism {
    w: FinObject,
    a: FinObject,
    inner: Kernel,
}

impl ParamMorphism {
    pub fn new(w: &FinObject, a: &FinObject, inner: Kernel) -> Result<Self> {
        if *inner.dom() != FinObject::tensor(w, a) {
            return Err(Error::ShapeMismatch(format!(
                "inner domain {} is not {} ⊗ {}",
                inner.dom(),
                w,
                a
            )));
        }
        Ok(ParamMorphism {
            w: w.clone(),
            a: a.clone(),
            inner,
        })
    }

    pub fn parameter(&self) -> &FinObject {
        &self.w
    }

    pub fn dom(&self) -> &FinObject {
        &self.a
    }

    pub fn cod(&self) -> &FinObject {
        self.inner.cod()
    }

    pub fn inner(&self) -> &Kernel {
        &self.inner
    }

    pub fn kind(&self) -> Kind {
        self.inner.kind()
    }
}

/// `g ∘ f` with the parameter copied to both: `g ∘ (id_W ⊗ f) ∘ (copy_W ⊗ id_A)`.
pub fn param_compose(g: &ParamMorphism, f: &ParamMorphism) -> Result<ParamMorphism> {
    if g.w != f.w || g.kind() != f.kind() {
        return Err(Error::ParamMismatch);
    }
    if f.cod() != &g.a {
        return Err(Error::ShapeMismatch(format!("{} does not match {}", f.cod(), g.a)));
    }
    let kind = f.kind();
    let w = &f.w;
    let spread = compose(
        &assoc(kind, w, w, &f.a),
        &tensor(&copy(kind, w), &identity(kind, &f.a))?,
    )?;
    let inner = compose(&g.inner, &compose(&tensor(&identity(kind, w), &f.inner)?, &spread)?)?;
    ParamMorphism::new(w, &f.a, inner)
}

/// `discard_W ⊗ f`: a plain kernel that ignores the parameter.
pub fn param_lift(f: &Kernel, w: &FinObject) -> Result<ParamMorphism> {
    let kind = f.kind();
    let inner = compose(&left_unitor(kind, f.cod()), &tensor(&discard(kind, w), f)?)?;
    ParamMorphism::new(w, f.dom(), inner)
}

pub fn param_identity(kind: Kind, w: &FinObject, a: &FinObject) -> ParamMorphism {
    param_lift(&identity(kind, a), w).expect("identity lifts")
}

pub fn param_copy(kind: Kind, w: &FinObject, a: &FinObject) -> ParamMorphism {
    param_lift(&copy(kind, a), w).expect("copy lifts")
}

pub fn param_discard(kind: Kind, w: &FinObject, a: &FinObject) -> ParamMorphism {
    param_lift(&discard(kind, a), w).expect("discard lifts")
}

/// `f ⊗ g` with the parameter copied to both factors.
pub fn param_tensor(f: &ParamMorphism, g: &ParamMorphism) -> Result<ParamMorphism> {
    if f.w != g.w || f.kind() != g.kind() {
        return Err(Error::ParamMismatch);
    }
    let kind = f.kind();
    let w = &f.w;
    let (na, nb) = (f.a.len(), g.a.len());
    let ab = FinObject::tensor(&f.a, &g.a);
    let dom = FinObject::tensor(w, &ab);
    let cod = FinObject::tensor(&FinObject::tensor(w, &f.a), &FinObject::tensor(w, &g.a));
    let spread = Kernel::deterministic(kind, dom, cod, |j| {
        let (wi, rest) = (j / (na * nb), j % (na * nb));
        let (ai, bi) = (rest / nb, rest % nb);
        (wi * na + ai) * (w.len() * nb) + wi * nb + bi
    });
    let inner = compose(&tensor(&f.inner, &g.inner)?, &spread)?;
    ParamMorphism::new(w, &ab, inner)
}

/// `(m ⊗ id_A) ∘ copy_A` where `m` is the `X`-marginal of `f : A → X ⊗ Y`.
pub fn conditioning_base(f: &Kernel, x_size: usize) -> Result<Kernel> {
    let kind = f.kind();
    let m = marginalize(f, x_size, Side::Right)?;
    compose(&tensor(&m, &identity(kind, f.dom()))?, &copy(kind, f.dom()))
}

/// Rebuilds `f : A → X ⊗ Y` from its `X`-marginal and a conditional
/// `c : X ⊗ A → Y`: `(id_X ⊗ c) ∘ assoc ∘ (copy_X ⊗ id_A) ∘ b`.
pub fn reconstruct_from_conditional(f: &Kernel, x_size: usize, c: &Kernel) -> Result<Kernel> {
    let kind = f.kind();
    let (x, _) = f.cod().split_at(x_size)?;
    let a = f.dom();
    let b = conditioning_base(f, x_size)?;
    let spread = compose(
        &assoc(kind, &x, &x, a),
        &tensor(&copy(kind, &x), &identity(kind, a))?,
    )?;
    compose(&tensor(&identity(kind, &x), c)?, &compose(&spread, &b)?)
}

/// `f_{|X}(y|x,a) = f((x,y)|a) / f_X(x|a)`, with the point mass on the first
/// element of `Y` where `f_X(x|a) = 0`.
pub fn conditional(f: &Kernel, x_size: usize) -> Result<Kernel> {
    if f.kind() != Kind::Stoch {
        return Err(Error::UnsupportedKind(f.kind()));
    }
    let (x, y) = f.cod().split_at(x_size)?;
    if y.is_empty() {
        return Err(Error::ShapeMismatch("conditional into an empty object".into()));
    }
    let (na, ny) = (f.dom().len(), y.len());
    let entry = |xi: usize, yi: usize, ai: usize| f.scalar(xi * ny + yi, ai).expect("numeric kernel").clone();
    let mass = |xi: usize, ai: usize| (0..ny).fold(Scalar::zero(), |acc, yi| acc + entry(xi, yi, ai));
    let dom = FinObject::tensor(&x, f.dom());
    let c = Kernel::from_weight_fn(Kind::Stoch, dom, y, |r, col| {
        let (xi, ai) = (col / na, col % na);
        let m = mass(xi, ai);
        if m.is_zero() {
            Weight::Bool(r == 0)
        } else {
            Weight::Num(entry(xi, r, ai) / m)
        }
    });
    if reconstruct_from_conditional(f, x_size, &c)? != *f {
        return Err(Error::StructureViolation("conditional does not reconstruct the joint".into()));
    }
    Ok(c)
}

/// Two conditionals of the same joint agree almost surely with respect to
/// the conditioning base.
pub fn verify_conditional_unique(f: &Kernel, x_size: usize, c1: &Kernel, c2: &Kernel) -> Result<bool> {
    for (name, c) in [("first", c1), ("second", c2)] {
        let ok = matches!(reconstruct_from_conditional(f, x_size, c), Ok(r) if r == *f);
        if !ok {
            return Err(Error::NotAConditional(format!("{name} candidate does not reconstruct the joint")));
        }
    }
    let b = conditioning_base(f, x_size)?;
    Ok(ase(&AseQuery::new(b, c1.clone(), c2.clone())?))
}
