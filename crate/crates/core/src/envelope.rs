//! Karoubi and Blackwell envelopes over the finite kernel models.
//!
//! An object is a pair `(X, e)` with `e` idempotent; a morphism
//! `(X, e) → (Y, d)` is a kernel `f` with `f ∘ e = f = d ∘ f`. The Blackwell
//! envelope keeps only balanced idempotents and carries the copy
//! `(e ⊗ e) ∘ copy ∘ e`.

use rand::Rng;
use serde::Serialize;

use crate::asrel::{ase, AseQuery, Implication};
use crate::error::{Error, Result};
use crate::idempotent::{classify, is_idempotent};
use crate::kernel::{compose, tensor, Kernel, Kind};
use crate::object::FinObject;
use crate::random::{random_kernel, rng};
use crate::structure::{assoc, copy, discard, identity, left_unitor, right_unitor, swap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Karoubi,
    Blackwell,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeCell {
    endo: Kernel,
    flavor: Flavor,
}

impl EnvelopeCell {
    pub fn object(&self) -> &FinObject {
        self.endo.dom()
    }

    pub fn endo(&self) -> &Kernel {
        &self.endo
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn kind(&self) -> Kind {
        self.endo.kind()
    }

    /// `(X, id_X)`.
    pub fn plain(kind: Kind, x: &FinObject, flavor: Flavor) -> Self {
        EnvelopeCell {
            endo: identity(kind, x),
            flavor,
        }
    }

    /// Skips the idempotency and balance checks, so that negative tests can
    /// apply the envelope copy to cells that should not carry it.
    #[cfg(any(test, feature = "test-support"))]
    pub fn unchecked(endo: Kernel, flavor: Flavor) -> Self {
        EnvelopeCell { endo, flavor }
    }
}

pub fn env_cell(x: &FinObject, e: &Kernel, flavor: Flavor) -> Result<EnvelopeCell> {
    if e.dom() != x || e.cod() != x {
        return Err(Error::NotEndo);
    }
    if !is_idempotent(e)? {
        return Err(Error::NotIdempotent);
    }
    if flavor == Flavor::Blackwell && !classify(e)?.balanced {
        return Err(Error::NotBalanced);
    }
    Ok(EnvelopeCell {
        endo: e.clone(),
        flavor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeMorphism {
    src: EnvelopeCell,
    dst: EnvelopeCell,
    kernel: Kernel,
}

impl EnvelopeMorphism {
    pub fn src(&self) -> &EnvelopeCell {
        &self.src
    }

    pub fn dst(&self) -> &EnvelopeCell {
        &self.dst
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }
}

pub fn env_hom(src: &EnvelopeCell, dst: &EnvelopeCell, f: &Kernel) -> Result<EnvelopeMorphism> {
    if f.dom() != src.object() || f.cod() != dst.object() {
        return Err(Error::ShapeMismatch(format!(
            "kernel {} -> {} between cells on {} and {}",
            f.dom(),
            f.cod(),
            src.object(),
            dst.object()
        )));
    }
    if compose(f, &src.endo)? != *f {
        return Err(Error::NotHom("f . e_src != f".into()));
    }
    if compose(&dst.endo, f)? != *f {
        return Err(Error::NotHom("e_dst . f != f".into()));
    }
    Ok(EnvelopeMorphism {
        src: src.clone(),
        dst: dst.clone(),
        kernel: f.clone(),
    })
}

/// The identity of `(X, e)` is `e`.
pub fn env_identity(cell: &EnvelopeCell) -> EnvelopeMorphism {
    EnvelopeMorphism {
        src: cell.clone(),
        dst: cell.clone(),
        kernel: cell.endo.clone(),
    }
}

fn revalidated(src: &EnvelopeCell, dst: &EnvelopeCell, k: Kernel) -> Result<EnvelopeMorphism> {
    env_hom(src, dst, &k).map_err(|e| Error::StructureViolation(format!("result left the envelope: {e}")))
}

pub fn env_compose(g: &EnvelopeMorphism, f: &EnvelopeMorphism) -> Result<EnvelopeMorphism> {
    if f.dst != g.src {
        return Err(Error::CellMismatch);
    }
    revalidated(&f.src, &g.dst, compose(&g.kernel, &f.kernel)?)
}

/// `(X ⊗ Y, e_X ⊗ e_Y)`; Blackwell only when both factors are.
pub fn env_tensor_cell(a: &EnvelopeCell, b: &EnvelopeCell) -> Result<EnvelopeCell> {
    let endo = tensor(&a.endo, &b.endo)?;
    let flavor = if a.flavor == Flavor::Blackwell && b.flavor == Flavor::Blackwell {
        Flavor::Blackwell
    } else {
        Flavor::Karoubi
    };
    if flavor == Flavor::Blackwell && classify(&a.endo)?.balanced && classify(&b.endo)?.balanced {
        let r = classify(&endo)?;
        if !r.idempotent || !r.balanced {
            return Err(Error::StructureViolation("tensor of balanced idempotents is not balanced".into()));
        }
    }
    Ok(EnvelopeCell { endo, flavor })
}

pub fn env_tensor(f: &EnvelopeMorphism, g: &EnvelopeMorphism) -> Result<EnvelopeMorphism> {
    let src = env_tensor_cell(&f.src, &g.src)?;
    let dst = env_tensor_cell(&f.dst, &g.dst)?;
    revalidated(&src, &dst, tensor(&f.kernel, &g.kernel)?)
}

fn copy_formula(cell: &EnvelopeCell) -> Result<Kernel> {
    let e = &cell.endo;
    compose(&compose(&tensor(e, e)?, &copy(cell.kind(), cell.object()))?, e)
}

/// `(e ⊗ e) ∘ copy ∘ e : (X, e) → (X, e) ⊗ (X, e)`.
pub fn blackwell_copy(cell: &EnvelopeCell) -> Result<EnvelopeMorphism> {
    if cell.flavor == Flavor::Karoubi && !classify(&cell.endo)?.balanced {
        return Err(Error::NotBalanced);
    }
    let dst = env_tensor_cell(cell, cell)?;
    revalidated(cell, &dst, copy_formula(cell)?)
}

/// `discard ∘ e : (X, e) → (I, id)`.
pub fn env_discard(cell: &EnvelopeCell) -> Result<EnvelopeMorphism> {
    let unit = EnvelopeCell::plain(cell.kind(), &FinObject::unit(), cell.flavor);
    revalidated(cell, &unit, compose(&discard(cell.kind(), cell.object()), &cell.endo)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub counit_left: bool,
    pub counit_right: bool,
    pub coassociative: bool,
    pub cocommutative: bool,
    pub discard_natural: bool,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.counit_left && self.counit_right && self.coassociative && self.cocommutative && self.discard_natural
    }
}

/// Comonoid laws of the envelope copy on a cell, plus naturality of discard
/// against a few random cell endomorphisms drawn from `seed`.
///
/// The copy formula is applied whatever the flavor, so non-balanced cells
/// built with the test-only constructor can be examined too.
pub fn env_check_markov_laws(cell: &EnvelopeCell, seed: u64) -> Result<LawReport> {
    let kind = cell.kind();
    let x = cell.object();
    let e = &cell.endo;
    let c = copy_formula(cell)?;
    let del = compose(&discard(kind, x), e)?;

    let left = compose(&left_unitor(kind, x), &compose(&tensor(&del, e)?, &c)?)?;
    let right = compose(&right_unitor(kind, x), &compose(&tensor(e, &del)?, &c)?)?;
    let outer_left = compose(&tensor(&c, e)?, &c)?;
    let outer_right = compose(&tensor(e, &c)?, &c)?;
    let coassociative = compose(&assoc(kind, x, x, x), &outer_left)? == outer_right;
    let cocommutative = compose(&swap(kind, x, x), &c)? == c;

    let mut r = rng(seed);
    let mut discard_natural = true;
    for _ in 0..8 {
        let k = random_kernel(kind, x, x, &mut r);
        let f = compose(e, &compose(&k, e)?)?;
        if compose(&del, &f)? != del {
            discard_natural = false;
        }
    }
    Ok(LawReport {
        counit_left: left == *e,
        counit_right: right == *e,
        coassociative,
        cocommutative,
        discard_natural,
    })
}

/// `f =_p g` computed in the envelope: the joints `(f ⊗ e_Y) ∘ copy_Y ∘ p`
/// and `(g ⊗ e_Y) ∘ copy_Y ∘ p` with the envelope copy. The verdict is
/// checked against plain almost-sure equality of the underlying kernels.
pub fn env_ase(p: &EnvelopeMorphism, f: &EnvelopeMorphism, g: &EnvelopeMorphism) -> Result<bool> {
    if f.src != p.dst || g.src != p.dst || f.dst != g.dst {
        return Err(Error::ShapeMismatch("expected p: X -> Y and f, g: Y -> Z".into()));
    }
    let y = &p.dst;
    if !classify(&y.endo)?.balanced {
        return Err(Error::NotBalanced);
    }
    let c = copy_formula(y)?;
    let joint = |h: &Kernel| -> Result<Kernel> { compose(&compose(&tensor(h, &y.endo)?, &c)?, &p.kernel) };
    let envelope = joint(&f.kernel)? == joint(&g.kernel)?;
    let base = ase(&AseQuery::new(p.kernel.clone(), f.kernel.clone(), g.kernel.clone())?);
    if envelope != base {
        return Err(Error::StructureViolation(format!(
            "envelope verdict {envelope} differs from base verdict {base}"
        )));
    }
    Ok(envelope)
}

/// Causality instance inside the envelope: `h₁ =_{g∘f} h₂` should give
/// `h₁ ∘ g =_f h₂ ∘ g`.
pub fn env_causality_instance(
    f: &EnvelopeMorphism,
    g: &EnvelopeMorphism,
    h1: &EnvelopeMorphism,
    h2: &EnvelopeMorphism,
) -> Result<Implication> {
    let gf = env_compose(g, f)?;
    let antecedent = env_ase(&gf, h1, h2)?;
    let consequent = env_ase(f, &env_compose(h1, g)?, &env_compose(h2, g)?)?;
    Ok(Implication::new(antecedent, consequent))
}

/// Every idempotent splits in the envelope: `e` read as `(X, e) → (X, id)`
/// and as `(X, id) → (X, e)`. Returns `(projection, inclusion)`.
pub fn formal_splitting(cell: &EnvelopeCell) -> Result<(EnvelopeMorphism, EnvelopeMorphism)> {
    let plain = EnvelopeCell::plain(cell.kind(), cell.object(), cell.flavor);
    let projection = env_hom(cell, &plain, &cell.endo)?;
    let inclusion = env_hom(&plain, cell, &cell.endo)?;
    if env_compose(&projection, &inclusion)?.kernel != cell.endo {
        return Err(Error::StructureViolation("formal splitting".into()));
    }
    if env_compose(&inclusion, &projection)? != env_identity(cell) {
        return Err(Error::StructureViolation("formal splitting".into()));
    }
    Ok((projection, inclusion))
}

/// A random morphism between two cells, `e_dst ∘ k ∘ e_src`.
pub fn random_env_morphism<R: Rng>(src: &EnvelopeCell, dst: &EnvelopeCell, rng: &mut R) -> EnvelopeMorphism {
    let k = random_kernel(src.kind(), src.object(), dst.object(), rng);
    let f = compose(&dst.endo, &compose(&k, &src.endo).expect("shapes agree")).expect("shapes agree");
    EnvelopeMorphism {
        src: src.clone(),
        dst: dst.clone(),
        kernel: f,
    }
}
