//! The free support completion: objects `(X, p)` with `p` atomic, morphisms
//! `p`-almost-sure classes of kernels `f` with `f ∘ p ≪ q`.
//!
//! Classes are stored by a canonical representative whose columns outside
//! `Supp(p)` are the point mass on the first codomain element.

use crate::asrel::{abs_cont, is_atomic, refute_abs_cont, AcRefutation};
use crate::error::{Error, Result};
use crate::kernel::{compose, tensor, Kernel, Kind, Weight};
use crate::object::FinObject;
use crate::structure::{copy, discard, identity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppCompCell {
    pub object: FinObject,
    pub anchor: Kernel,
}

impl SuppCompCell {
    pub fn new(anchor: Kernel) -> Result<Self> {
        if !is_atomic(&anchor)? {
            return Err(Error::StructureViolation("anchor is not atomic".into()));
        }
        Ok(SuppCompCell {
            object: anchor.cod().clone(),
            anchor,
        })
    }

    /// `(X, id_X)`: the copy of the base category inside the completion.
    pub fn plain(kind: Kind, x: &FinObject) -> Result<Self> {
        Self::new(identity(kind, x))
    }

    pub fn unit(kind: Kind) -> Self {
        let i = FinObject::unit();
        SuppCompCell {
            object: i.clone(),
            anchor: identity(kind, &i),
        }
    }

    pub fn kind(&self) -> Kind {
        self.anchor.kind()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppCompMorphism {
    pub src: SuppCompCell,
    pub dst: SuppCompCell,
    pub representative: Kernel,
}

/// Canonical representative of the `p`-a.s. class of `f`.
pub fn canonicalize(f: &Kernel, p: &Kernel) -> Kernel {
    let support = p.support_indices();
    let boolean = f.kind().is_boolean();
    let point = |r: usize| {
        if boolean {
            Weight::Bool(r == 0)
        } else {
            Weight::Num(if r == 0 { num_traits::One::one() } else { num_traits::Zero::zero() })
        }
    };
    let n = f.cod().len();
    f.map_columns(|c| {
        (!support.contains(&c) && n > 0).then(|| (0..n).map(point).collect())
    })
}

pub fn scomp_hom(src: &SuppCompCell, dst: &SuppCompCell, f: &Kernel) -> Result<SuppCompMorphism> {
    if f.dom() != &src.object || f.cod() != &dst.object {
        return Err(Error::ShapeMismatch("kernel does not run between the cell objects".into()));
    }
    let pushed = compose(f, &src.anchor)?;
    if let AcRefutation::Witness(w) = refute_abs_cont(&dst.anchor, &pushed)? {
        return Err(Error::NotMember(w.element));
    }
    Ok(SuppCompMorphism {
        src: src.clone(),
        dst: dst.clone(),
        representative: canonicalize(f, &src.anchor),
    })
}

pub fn scomp_identity(cell: &SuppCompCell) -> SuppCompMorphism {
    scomp_hom(cell, cell, &identity(cell.kind(), &cell.object)).expect("identity is a member")
}

pub fn scomp_compose(g: &SuppCompMorphism, f: &SuppCompMorphism) -> Result<SuppCompMorphism> {
    if f.dst != g.src {
        return Err(Error::CellMismatch);
    }
    let composite = compose(&g.representative, &f.representative)?;
    scomp_hom(&f.src, &g.dst, &composite)
        .map_err(|e| Error::StructureViolation(format!("composite left the completion: {e}")))
}

/// `[f] ≪ [g]` for morphisms into the same cell: `f ∘ p ≪ g ∘ r`.
pub fn scomp_abs_cont(f: &SuppCompMorphism, g: &SuppCompMorphism) -> Result<bool> {
    if f.dst != g.dst {
        return Err(Error::CellMismatch);
    }
    let fp = compose(&f.representative, &f.src.anchor)?;
    let gr = compose(&g.representative, &g.src.anchor)?;
    abs_cont(&gr, &fp)
}

/// Support of `[f] : (X,p) → (Y,q)` inside the completion.
#[derive(Clone, Debug)]
pub struct CompletionSupport {
    /// `(Y, f ∘ p)`.
    pub cell: SuppCompCell,
    /// Class of `id_Y : (Y, f ∘ p) → (Y, q)`.
    pub inclusion: SuppCompMorphism,
    /// Class of `f : (X, p) → (Y, f ∘ p)`.
    pub factor: SuppCompMorphism,
}

pub fn scomp_support(f: &SuppCompMorphism) -> Result<CompletionSupport> {
    let pushed = compose(&f.representative, &f.src.anchor)?;
    let cell = SuppCompCell::new(pushed)?;
    let inclusion = scomp_hom(&cell, &f.dst, &identity(cell.kind(), &cell.object))?;
    let factor = scomp_hom(&f.src, &cell, &f.representative)?;
    if scomp_compose(&inclusion, &factor)? != *f {
        return Err(Error::StructureViolation("support does not factor f".into()));
    }
    Ok(CompletionSupport {
        cell,
        inclusion,
        factor,
    })
}

/// Factors `[g] : (Z,r) → (Y,q)` through the support inclusion of `[f]`, if `[g] ≪ [f]`.
pub fn scomp_factor_through_support(
    g: &SuppCompMorphism,
    support: &CompletionSupport,
) -> Result<SuppCompMorphism> {
    scomp_hom(&g.src, &support.cell, &g.representative)
}

pub fn scomp_tensor_cell(a: &SuppCompCell, b: &SuppCompCell) -> Result<SuppCompCell> {
    Ok(SuppCompCell {
        object: FinObject::tensor(&a.object, &b.object),
        anchor: tensor(&a.anchor, &b.anchor)?,
    })
}

pub fn scomp_tensor(f: &SuppCompMorphism, g: &SuppCompMorphism) -> Result<SuppCompMorphism> {
    let src = scomp_tensor_cell(&f.src, &g.src)?;
    let dst = scomp_tensor_cell(&f.dst, &g.dst)?;
    scomp_hom(&src, &dst, &tensor(&f.representative, &g.representative)?)
}

/// `[copy_X] : (X,p) → (X,p) ⊗ (X,p)`; a member because `p` is atomic.
pub fn scomp_copy(cell: &SuppCompCell) -> Result<SuppCompMorphism> {
    let dst = scomp_tensor_cell(cell, cell)?;
    scomp_hom(cell, &dst, &copy(cell.kind(), &cell.object))
}

pub fn scomp_discard(cell: &SuppCompCell) -> Result<SuppCompMorphism> {
    scomp_hom(cell, &SuppCompCell::unit(cell.kind()), &discard(cell.kind(), &cell.object))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asrel::perturb_off_support;

    fn abc() -> FinObject {
        FinObject::new(["a", "b", "c"]).unwrap()
    }

    fn p() -> Kernel {
        Kernel::parse_rows(Kind::Stoch, FinObject::unit(), abc(), &[&["1/2"], &["1/2"], &["0"]]).unwrap()
    }

    #[test]
    fn identity_class() {
        let cell = SuppCompCell::new(p()).unwrap();
        let id = scomp_identity(&cell);
        let canonical = id.representative.clone();
        assert_eq!(canonical.column(2), crate::structure::delta(Kind::Stoch, &abc(), "a").unwrap().column(0));
        assert_eq!(scomp_compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn non_member_is_refuted() {
        let src = SuppCompCell::plain(Kind::Stoch, &abc()).unwrap();
        let dst = SuppCompCell::new(p()).unwrap();
        let err = scomp_hom(&src, &dst, &identity(Kind::Stoch, &abc())).unwrap_err();
        assert_eq!(err, Error::NotMember("c".into()));
    }

    #[test]
    fn representatives_off_support_collapse() {
        let cell = SuppCompCell::new(p()).unwrap();
        let target = SuppCompCell::plain(Kind::Stoch, &FinObject::range(2)).unwrap();
        let f = crate::random::random_kernel(Kind::Stoch, &abc(), &FinObject::range(2), &mut crate::random::rng(2));
        let f2 = perturb_off_support(&f, &p(), 4).unwrap();
        assert_eq!(scomp_hom(&cell, &target, &f).unwrap(), scomp_hom(&cell, &target, &f2).unwrap());
    }

    #[test]
    fn support_of_a_state() {
        let unit = SuppCompCell::unit(Kind::Stoch);
        let target = SuppCompCell::plain(Kind::Stoch, &abc()).unwrap();
        let f = scomp_hom(&unit, &target, &p()).unwrap();
        let s = scomp_support(&f).unwrap();
        assert_eq!(s.cell, SuppCompCell::new(p()).unwrap());
        let id = scomp_identity(&SuppCompCell::new(p()).unwrap());
        assert_eq!(scomp_support(&id).unwrap().cell, SuppCompCell::new(p()).unwrap());
    }

    #[test]
    fn disjoint_pushforwards_not_dominated() {
        let unit = SuppCompCell::unit(Kind::Stoch);
        let target = SuppCompCell::plain(Kind::Stoch, &abc()).unwrap();
        let a = scomp_hom(&unit, &target, &crate::structure::delta(Kind::Stoch, &abc(), "a").unwrap()).unwrap();
        let c = scomp_hom(&unit, &target, &crate::structure::delta(Kind::Stoch, &abc(), "c").unwrap()).unwrap();
        assert!(!scomp_abs_cont(&a, &c).unwrap());
        assert!(scomp_abs_cont(&a, &a).unwrap());
    }
}
