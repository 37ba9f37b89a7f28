//! Static, strong and balanced idempotents, and the Cauchy–Schwarz check.
//!
//! All three defining equations compare the two-step kernel
//! `x ↦ (final, intermediate)` with a reference kernel:
//!
//! | type     | reference                          |
//! |----------|------------------------------------|
//! | static   | `copy ∘ e`                         |
//! | strong   | `(e ⊗ e) ∘ copy`                   |
//! | balanced | `(e ⊗ e) ∘ copy ∘ e`               |
//!
//! Each reference is symmetric under swapping the outputs, so the choice of
//! output order only affects which entry is reported as a witness.

use serde::Serialize;

use crate::asrel::{ase, AseQuery, Implication};
use crate::error::{Error, Result};
use crate::kernel::{compose, is_deterministic, tensor, Kernel};
use crate::structure::{copy, identity, swap};

/// `x ↦ (y, z)` with `z ~ e(·|x)` the intermediate state and `y ~ e(·|z)` the
/// final one: `(e ⊗ id) ∘ copy ∘ e`.
pub fn two_step(e: &Kernel) -> Result<Kernel> {
    require_endo(e)?;
    let x = e.dom();
    compose(
        &tensor(e, &identity(e.kind(), x))?,
        &compose(&copy(e.kind(), x), e)?,
    )
}

fn require_endo(e: &Kernel) -> Result<()> {
    if e.dom() != e.cod() {
        return Err(Error::NotEndo);
    }
    Ok(())
}

pub fn is_idempotent(e: &Kernel) -> Result<bool> {
    require_endo(e)?;
    Ok(compose(e, e)? == *e)
}

/// First entry `(input, outputs…)` where two parallel kernels differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: String,
    pub output: String,
}

pub(crate) fn first_difference(lhs: &Kernel, rhs: &Kernel) -> Option<Witness> {
    debug_assert_eq!(lhs.dom(), rhs.dom());
    debug_assert_eq!(lhs.cod(), rhs.cod());
    (0..lhs.dom().len()).find_map(|c| {
        (0..lhs.cod().len())
            .find(|&r| lhs.get(r, c) != rhs.get(r, c))
            .map(|r| Witness {
                input: lhs.dom().label(c).to_string(),
                output: lhs.cod().label(r).to_string(),
            })
    })
}

fn static_reference(e: &Kernel) -> Result<Kernel> {
    compose(&copy(e.kind(), e.cod()), e)
}

fn strong_reference(e: &Kernel) -> Result<Kernel> {
    compose(&tensor(e, e)?, &copy(e.kind(), e.dom()))
}

fn balanced_reference(e: &Kernel) -> Result<Kernel> {
    compose(&strong_reference(e)?, e)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdempotentWitnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Witness>,
    #[serde(rename = "static", skip_serializing_if = "Option::is_none")]
    pub static_: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balanced: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub idempotent: bool,
    pub deterministic: bool,
    #[serde(rename = "static")]
    pub static_: bool,
    pub strong: bool,
    pub balanced: bool,
    pub witnesses: IdempotentWitnesses,
}

impl IdempotentReport {
    /// static ⟹ balanced, strong ⟹ balanced, static ∧ strong ⟹ deterministic.
    pub fn lattice_consistent(&self) -> bool {
        (!self.static_ || self.balanced)
            && (!self.strong || self.balanced)
            && (!(self.static_ && self.strong) || self.deterministic)
    }
}

pub fn classify(e: &Kernel) -> Result<IdempotentReport> {
    require_endo(e)?;
    let ee = compose(e, e)?;
    if ee != *e {
        return Ok(IdempotentReport {
            idempotent: false,
            deterministic: false,
            static_: false,
            strong: false,
            balanced: false,
            witnesses: IdempotentWitnesses {
                idempotent: first_difference(&ee, e),
                ..Default::default()
            },
        });
    }
    let lhs = two_step(e)?;
    let static_w = first_difference(&lhs, &static_reference(e)?);
    let strong_w = first_difference(&lhs, &strong_reference(e)?);
    let balanced_w = first_difference(&lhs, &balanced_reference(e)?);
    Ok(IdempotentReport {
        idempotent: true,
        deterministic: is_deterministic(e),
        static_: static_w.is_none(),
        strong: strong_w.is_none(),
        balanced: balanced_w.is_none(),
        witnesses: IdempotentWitnesses {
            idempotent: None,
            static_: static_w,
            strong: strong_w,
            balanced: balanced_w,
        },
    })
}

/// The four equivalent characterizations of balanced idempotents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedCrossCheck {
    pub balanced: bool,
    pub detailed_balance: bool,
    pub as_strong: bool,
    pub self_adjoint: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl BalancedCrossCheck {
    pub fn all_agree(&self) -> bool {
        self.balanced == self.detailed_balance
            && self.balanced == self.as_strong
            && self.balanced == self.self_adjoint
    }
}

/// Joint `(e ⊗ id) ∘ copy ∘ p` of an invariant `p` and one more step.
fn step_joint(e: &Kernel, p: &Kernel) -> Result<Kernel> {
    compose(
        &tensor(e, &identity(e.kind(), e.dom()))?,
        &compose(&copy(e.kind(), e.dom()), p)?,
    )
}

fn mirror_symmetric(k: &Kernel, e: &Kernel) -> Result<bool> {
    let x = e.dom();
    Ok(compose(&swap(e.kind(), x, x), k)? == *k)
}

/// Checks the balanced equation, detailed balance, the strong equation
/// `e`-almost surely, and self-adjointness.
///
/// Self-adjointness is checked on the invariant columns `e ∘ δ_x`. Every
/// invariant `p` has columns that are fixed vectors of `e`; for an idempotent
/// these are combinations of columns of `e`, and the condition is linear in `p`.
pub fn balanced_cross_check(e: &Kernel) -> Result<BalancedCrossCheck> {
    if !is_idempotent(e)? {
        return Err(Error::NotIdempotent);
    }
    let lhs = two_step(e)?;
    let witness = first_difference(&lhs, &balanced_reference(e)?);
    let detailed_balance = mirror_symmetric(&lhs, e)?;
    let as_strong = ase(&AseQuery::new(e.clone(), lhs.clone(), strong_reference(e)?)?);
    let mut self_adjoint = true;
    for x in 0..e.dom().len() {
        let p = compose(e, &crate::structure::delta_at(e.kind(), e.dom(), x))?;
        if !mirror_symmetric(&step_joint(e, &p)?, e)? {
            self_adjoint = false;
            break;
        }
    }
    Ok(BalancedCrossCheck {
        balanced: witness.is_none(),
        detailed_balance,
        as_strong,
        self_adjoint,
        witness,
    })
}

/// `e` is `e`-almost surely deterministic: `copy ∘ e =_e (e ⊗ e) ∘ copy`.
pub fn is_as_deterministic(e: &Kernel) -> Result<bool> {
    require_endo(e)?;
    let lhs = static_reference(e)?;
    let rhs = strong_reference(e)?;
    Ok(ase(&AseQuery::new(e.clone(), lhs, rhs)?))
}

/// One instance of the Cauchy–Schwarz implication for `f : A → B`,
/// `g : B → X`, `h : X → Y`.
///
/// Antecedent: `(hg ⊗ hg) ∘ copy ∘ f = (h ⊗ h) ∘ copy ∘ g ∘ f`.
/// Consequent: `(h ⊗ id) ∘ copy ∘ g =_f (hg ⊗ g) ∘ copy`, i.e. for `f`-almost
/// every `b`, `h(y|x) = (hg)(y|b)` for `g(·|b)`-almost every `x`.
pub fn cauchy_schwarz(f: &Kernel, g: &Kernel, h: &Kernel) -> Result<Implication> {
    let shape = |e: Error| Error::ShapeMismatch(e.to_string());
    let kind = f.kind();
    let hg = compose(h, g).map_err(shape)?;
    let gf = compose(g, f).map_err(shape)?;
    let b = f.cod();
    let x = g.cod();
    let lhs = compose(&tensor(&hg, &hg)?, &compose(&copy(kind, b), f)?)?;
    let rhs = compose(&tensor(h, h)?, &compose(&copy(kind, x), &gf)?)?;
    let antecedent = lhs == rhs;
    let pointwise = compose(&tensor(h, &identity(kind, x))?, &compose(&copy(kind, x), g)?)?;
    let averaged = compose(&tensor(&hg, g)?, &copy(kind, b))?;
    let consequent = ase(&AseQuery::new(f.clone(), pointwise, averaged)?);
    Ok(Implication::new(antecedent, consequent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kernel::{marginalize, Side};

    #[test]
    fn two_step_of_fair_coin() {
        let e = fixtures::strong_idempotent();
        let l = two_step(&e).unwrap();
        for r in 0..4 {
            for c in 0..2 {
                assert_eq!(l.scalar(r, c).unwrap(), &crate::scalar::ratio(1, 4));
            }
        }
    }

    #[test]
    fn two_step_of_identity_is_copy() {
        let x = crate::FinObject::range(3);
        let id = identity(crate::Kind::Stoch, &x);
        assert_eq!(two_step(&id).unwrap(), copy(crate::Kind::Stoch, &x));
    }

    #[test]
    fn two_step_marginals() {
        for e in [fixtures::static_idempotent(), fixtures::balanced_idempotent()] {
            let l = two_step(&e).unwrap();
            let n = e.dom().len();
            assert_eq!(marginalize(&l, n, Side::Left).unwrap(), compose(&e, &e).unwrap());
            assert_eq!(marginalize(&l, n, Side::Right).unwrap(), e);
        }
    }

    #[test]
    fn paper_examples_classify() {
        let r = classify(&fixtures::strong_idempotent()).unwrap();
        assert!(r.idempotent && r.strong && !r.static_ && r.balanced);
        let r = classify(&fixtures::static_idempotent()).unwrap();
        assert!(r.idempotent && r.static_ && !r.strong && r.balanced);
        let r = classify(&fixtures::balanced_idempotent()).unwrap();
        assert!(r.idempotent && !r.static_ && !r.strong && r.balanced);
    }

    #[test]
    fn non_balanced_witnesses() {
        let r = classify(&fixtures::multi_upset_idempotent()).unwrap();
        assert!(r.idempotent && !r.balanced);
        let w = r.witnesses.balanced.unwrap();
        assert_eq!((w.input.as_str(), w.output.as_str()), ("0", "(0,1)"));

        let r = classify(&fixtures::signed_idempotent()).unwrap();
        assert!(r.idempotent && !r.balanced);
        let w = r.witnesses.balanced.unwrap();
        assert_eq!((w.input.as_str(), w.output.as_str()), ("a", "(a,b)"));
    }

    #[test]
    fn cross_checks() {
        for e in fixtures::paper_stochastic_idempotents() {
            let c = balanced_cross_check(&e).unwrap();
            assert!(c.balanced && c.all_agree(), "{c:?}");
        }
        for e in [fixtures::multi_upset_idempotent(), fixtures::signed_idempotent()] {
            let c = balanced_cross_check(&e).unwrap();
            assert!(!c.balanced && c.all_agree(), "{c:?}");
        }
        let c = balanced_cross_check(&fixtures::multi_upset_idempotent()).unwrap();
        assert_eq!(c.witness.unwrap().output, "(0,1)");
    }

    #[test]
    fn non_idempotent_reports_all_false() {
        let x = crate::FinObject::range(2);
        let k = crate::Kernel::parse_rows(crate::Kind::Stoch, x.clone(), x, &[&["0", "1"], &["1", "0"]]).unwrap();
        let r = classify(&k).unwrap();
        assert!(!r.idempotent && !r.balanced && !r.static_ && !r.strong);
        assert!(r.witnesses.idempotent.is_some());
        assert_eq!(balanced_cross_check(&k).unwrap_err(), Error::NotIdempotent);
    }

    #[test]
    fn multi_idempotent_breaks_cauchy_schwarz() {
        let e = fixtures::multi_upset_idempotent();
        let r = cauchy_schwarz(&e, &e, &e).unwrap();
        assert!(r.antecedent && !r.consequent && !r.implication_ok);
    }

    #[test]
    fn static_iff_as_deterministic() {
        for e in fixtures::paper_stochastic_idempotents() {
            assert_eq!(classify(&e).unwrap().static_, is_as_deterministic(&e).unwrap());
        }
    }
}
