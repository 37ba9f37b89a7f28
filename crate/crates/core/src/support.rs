//! Supports and split supports of stochastic and multivalued kernels, and the
//! constructions that go through them.

use serde::Serialize;

use crate::asrel::{abs_cont, ase, AseQuery};
use crate::error::{Error, Result};
use crate::kernel::{compose, is_deterministic, tensor, Kernel, Kind};
use crate::object::FinObject;
use crate::structure::{copy, identity};

/// Support `S ⊆ X` of `p : A → X` with inclusion `ι`, factorization `p̂` and,
/// for split supports, a projection `π` with `π ∘ ι = id`.
#[derive(Clone, Debug)]
pub struct SupportData {
    pub base: Kernel,
    pub object: FinObject,
    /// Positions of the support elements in `base.cod()`.
    pub indices: Vec<usize>,
    pub inclusion: Kernel,
    pub factorization: Kernel,
    pub projection: Option<Kernel>,
}

fn require_positive_kind(p: &Kernel) -> Result<()> {
    match p.kind() {
        Kind::Signed => Err(Error::UnsupportedKind(Kind::Signed)),
        _ => Ok(()),
    }
}

pub fn support(p: &Kernel) -> Result<SupportData> {
    require_positive_kind(p)?;
    let indices = p.support_indices();
    let object = p.cod().subset(&indices);
    let inclusion = Kernel::deterministic(p.kind(), object.clone(), p.cod().clone(), |j| indices[j]);
    let factorization = p.select_rows(&indices, object.clone());
    Ok(SupportData {
        base: p.clone(),
        object,
        indices,
        inclusion,
        factorization,
        projection: None,
    })
}

/// The unique `f̂` with `ι ∘ f̂ = f`, provided `f ≪ p`.
pub fn factor_through_support(f: &Kernel, sd: &SupportData) -> Result<Kernel> {
    if f.kind() != sd.base.kind() {
        return Err(Error::KindMismatch {
            left: f.kind(),
            right: sd.base.kind(),
        });
    }
    if f.cod() != sd.base.cod() {
        return Err(Error::CodMismatch);
    }
    if let Some(x) = f.support_indices().into_iter().find(|x| !sd.indices.contains(x)) {
        return Err(Error::NotAbsolutelyContinuous(f.cod().label(x).to_string()));
    }
    Ok(f.select_rows(&sd.indices, sd.object.clone()))
}

/// Support with the projection sending every element outside it to the
/// first support element.
pub fn split_support(p: &Kernel) -> Result<SupportData> {
    let mut sd = support(p)?;
    if sd.indices.is_empty() {
        return Err(Error::EmptySupport);
    }
    let targets: Vec<usize> = (0..p.cod().len())
        .map(|x| sd.indices.iter().position(|&s| s == x).unwrap_or(0))
        .collect();
    sd.projection = Some(Kernel::deterministic(
        p.kind(),
        p.cod().clone(),
        sd.object.clone(),
        |x| targets[x],
    ));
    Ok(sd)
}

/// For a commuting square `g ∘ p = q ∘ f`, the induced map `Supp(p) → Supp(q)`.
pub fn support_functor_map(p: &Kernel, q: &Kernel, f: &Kernel, g: &Kernel) -> Result<Kernel> {
    let shape = |e: Error| Error::ShapeMismatch(e.to_string());
    let gp = compose(g, p).map_err(shape)?;
    let qf = compose(q, f).map_err(shape)?;
    if gp != qf {
        return Err(Error::NotCommutative);
    }
    let sp = support(p)?;
    let sq = support(q)?;
    let g_iota = compose(g, &sp.inclusion)?;
    let dashed = factor_through_support(&g_iota, &sq)
        .map_err(|e| Error::FactorizationFailed(e.to_string()))?;
    if compose(&sq.inclusion, &dashed)? != g_iota {
        return Err(Error::FactorizationFailed("right square does not commute".into()));
    }
    Ok(dashed)
}

/// Equalizer `E = {x : f(x) = g(x)}` of two deterministic kernels and the
/// factorization of `p` through it.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub object: FinObject,
    pub inclusion: Kernel,
    pub factored: Kernel,
}

pub fn equalizer_factor(p: &Kernel, f: &Kernel, g: &Kernel) -> Result<Equalizer> {
    if !is_deterministic(f) || !is_deterministic(g) {
        return Err(Error::NotDeterministic);
    }
    if f.dom() != g.dom() || f.cod() != g.cod() || p.cod() != f.dom() {
        return Err(Error::ShapeMismatch("equalizer needs parallel f, g out of p.cod".into()));
    }
    let agree: Vec<usize> = (0..f.dom().len())
        .filter(|&x| f.column(x) == g.column(x))
        .collect();
    if !ase(&AseQuery::new(p.clone(), f.clone(), g.clone())?) {
        return Err(Error::NotAse);
    }
    let object = f.dom().subset(&agree);
    let inclusion = Kernel::deterministic(p.kind(), object.clone(), f.dom().clone(), |j| agree[j]);
    let factored = p.select_rows(&agree, object.clone());
    debug_assert_eq!(compose(&inclusion, &factored).ok().as_ref(), Some(p));
    Ok(Equalizer {
        object,
        inclusion,
        factored,
    })
}

/// First input `a` (in element order) with `p(x|a) > 0`.
pub fn point_lift(p: &Kernel, x: &str) -> Result<String> {
    require_positive_kind(p)?;
    let xi = p.cod().index_of(x)?;
    (0..p.dom().len())
        .find(|&a| p.nonzero(xi, a))
        .map(|a| p.dom().label(a).to_string())
        .ok_or_else(|| Error::NotInSupport(x.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PreciseSupports {
    pub joint_dominates: bool,
    pub pointwise: bool,
    pub agree: bool,
}

/// Compares membership of `(x, y)` in the support of the joint
/// `(id ⊗ f) ∘ copy ∘ p` with `x ∈ Supp(p) ∧ y ∈ Supp(f(·|x))`.
pub fn precise_supports_equiv(p: &Kernel, f: &Kernel, x: &str, y: &str) -> Result<PreciseSupports> {
    require_positive_kind(p)?;
    if p.dom().len() != 1 || f.dom() != p.cod() || f.kind() != p.kind() {
        return Err(Error::ShapeMismatch("need a state p : I → X and f : X → Y".into()));
    }
    let kind = p.kind();
    let joint = compose(
        &tensor(&identity(kind, p.cod()), f)?,
        &compose(&copy(kind, p.cod()), p)?,
    )?;
    let xi = p.cod().index_of(x)?;
    let yi = f.cod().index_of(y)?;
    let joint_dominates = joint.nonzero(xi * f.cod().len() + yi, 0);
    let pointwise = p.nonzero(xi, 0) && f.nonzero(yi, xi);
    Ok(PreciseSupports {
        joint_dominates,
        pointwise,
        agree: joint_dominates == pointwise,
    })
}

/// `ι ≈ p` for the computed support.
pub fn inclusion_bicontinuous(sd: &SupportData) -> Result<bool> {
    crate::asrel::acsim(&sd.inclusion, &sd.base)
}

/// Whether `f ≪ p` (shorthand used throughout tests and reports).
pub fn dominated(f: &Kernel, p: &Kernel) -> Result<bool> {
    abs_cont(p, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::delta;

    fn abc() -> FinObject {
        FinObject::new(["a", "b", "c"]).unwrap()
    }

    fn intro_p() -> Kernel {
        Kernel::parse_rows(Kind::Stoch, FinObject::unit(), abc(), &[&["1/2"], &["1/2"], &["0"]]).unwrap()
    }

    #[test]
    fn support_of_intro_example() {
        let sd = support(&intro_p()).unwrap();
        assert_eq!(sd.object.labels(), &["a", "b"]);
        assert_eq!(compose(&sd.inclusion, &sd.factorization).unwrap(), intro_p());
        assert!(inclusion_bicontinuous(&sd).unwrap());
    }

    #[test]
    fn support_of_identity_is_everything() {
        let id = identity(Kind::Stoch, &abc());
        let sd = support(&id).unwrap();
        assert_eq!(sd.object, abc());
        assert_eq!(sd.inclusion, id);
    }

    #[test]
    fn multi_support_is_union_of_images() {
        let x = FinObject::new(["x", "y", "z"]).unwrap();
        let p = Kernel::from_images(FinObject::range(2), x, &[vec![0], vec![0, 1]]).unwrap();
        assert_eq!(support(&p).unwrap().object.labels(), &["x", "y"]);
    }

    #[test]
    fn factorization_examples() {
        let sd = support(&intro_p()).unwrap();
        let da = delta(Kind::Stoch, &abc(), "a").unwrap();
        let fa = factor_through_support(&da, &sd).unwrap();
        assert_eq!(fa, delta(Kind::Stoch, &sd.object, "a").unwrap());
        let dc = delta(Kind::Stoch, &abc(), "c").unwrap();
        assert_eq!(
            factor_through_support(&dc, &sd).unwrap_err(),
            Error::NotAbsolutelyContinuous("c".into())
        );
        assert_eq!(factor_through_support(&intro_p(), &sd).unwrap(), sd.factorization);
    }

    #[test]
    fn split_support_sends_outside_to_first() {
        let sd = split_support(&intro_p()).unwrap();
        let pi = sd.projection.clone().unwrap();
        assert_eq!(pi.column_support(2), vec![0]);
        assert_eq!(compose(&pi, &sd.inclusion).unwrap(), identity(Kind::Stoch, &sd.object));
        let e = compose(&sd.inclusion, &pi).unwrap();
        assert_eq!(e.column(2), delta(Kind::Stoch, &abc(), "a").unwrap().column(0));
        let full = split_support(&identity(Kind::Stoch, &abc())).unwrap();
        assert_eq!(full.projection.unwrap(), identity(Kind::Stoch, &abc()));
    }

    #[test]
    fn empty_support_has_no_split() {
        let p = Kernel::from_rows(Kind::Stoch, FinObject::empty(), abc(), vec![vec![]; 3]).unwrap();
        assert_eq!(split_support(&p).unwrap_err(), Error::EmptySupport);
    }

    #[test]
    fn equalizer_examples() {
        let y = FinObject::range(2);
        let f = Kernel::deterministic(Kind::Stoch, abc(), y.clone(), |_| 0);
        let g = Kernel::deterministic(Kind::Stoch, abc(), y, |x| usize::from(x == 2));
        let eq = equalizer_factor(&intro_p(), &f, &g).unwrap();
        assert_eq!(eq.object.labels(), &["a", "b"]);
        let same = equalizer_factor(&intro_p(), &f, &f).unwrap();
        assert_eq!(same.object, abc());
        assert_eq!(same.factored, intro_p());
        let uniform = Kernel::parse_rows(Kind::Stoch, FinObject::unit(), abc(), &[&["1/3"], &["1/3"], &["1/3"]]).unwrap();
        assert_eq!(equalizer_factor(&uniform, &f, &g).unwrap_err(), Error::NotAse);
        assert_eq!(equalizer_factor(&uniform, &uniform, &g).unwrap_err(), Error::NotDeterministic);
    }

    #[test]
    fn point_lifts() {
        assert_eq!(point_lift(&intro_p(), "a").unwrap(), "•");
        assert_eq!(point_lift(&intro_p(), "c").unwrap_err(), Error::NotInSupport("c".into()));
        let x = FinObject::one_based(3);
        let e = Kernel::parse_rows(Kind::Stoch, x.clone(), x, &[&["1", "0", "1/2"], &["0", "1", "1/2"], &["0", "0", "0"]]).unwrap();
        assert_eq!(point_lift(&e, "1").unwrap(), "1");
        assert_eq!(point_lift(&e, "2").unwrap(), "2");
    }

    #[test]
    fn precise_support_examples() {
        let id = identity(Kind::Stoch, &abc());
        let da = delta(Kind::Stoch, &abc(), "a").unwrap();
        let r = precise_supports_equiv(&da, &id, "a", "a").unwrap();
        assert!(r.joint_dominates && r.pointwise && r.agree);
        let r = precise_supports_equiv(&intro_p(), &id, "c", "c").unwrap();
        assert!(!r.joint_dominates && !r.pointwise && r.agree);
    }

    #[test]
    fn functor_map_identity_square() {
        let p = intro_p();
        let id = identity(Kind::Stoch, &abc());
        let unit_id = identity(Kind::Stoch, &FinObject::unit());
        let dashed = support_functor_map(&p, &p, &unit_id, &id).unwrap();
        let sd = support(&p).unwrap();
        assert_eq!(dashed, identity(Kind::Stoch, &sd.object));
        let wrong = delta(Kind::Stoch, &abc(), "c").unwrap();
        assert_eq!(support_functor_map(&p, &wrong, &unit_id, &id).unwrap_err(), Error::NotCommutative);
    }
}
