//! Almost-sure equality, absolute continuity and the checks built on them.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{compose, tensor, Kernel, Kind};
use crate::object::FinObject;
use crate::random::{random_column, rng};
use crate::structure::{assoc_inv, copy, identity};

/// `f, g : W ⊗ X → Y` compared almost surely with respect to `p : A → X`.
#[derive(Clone, Debug)]
pub struct AseQuery {
    pub p: Kernel,
    pub f: Kernel,
    pub g: Kernel,
    /// Size of the parameter factor `W` at the front of `f.dom`.
    pub w_size: usize,
}

impl AseQuery {
    /// Query without a parameter wire (`W = I`).
    pub fn new(p: Kernel, f: Kernel, g: Kernel) -> Result<Self> {
        Self::with_parameter(p, f, g, 1)
    }

    pub fn with_parameter(p: Kernel, f: Kernel, g: Kernel, w_size: usize) -> Result<Self> {
        for k in [&f, &g] {
            if k.kind() != p.kind() {
                return Err(Error::KindMismatch {
                    left: p.kind(),
                    right: k.kind(),
                });
            }
        }
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(Error::ShapeMismatch("f and g are not parallel".into()));
        }
        if w_size == 0 || f.dom().len() != w_size * p.cod().len() {
            return Err(Error::ShapeMismatch(format!(
                "domain of size {} does not factor as W ⊗ X with |W| = {w_size}, |X| = {}",
                f.dom().len(),
                p.cod().len()
            )));
        }
        Ok(AseQuery { p, f, g, w_size })
    }

    fn x_size(&self) -> usize {
        self.p.cod().len()
    }
}

/// `f =_p g`: equality at every `(w, x)` with `x` in the nonzero support of `p`.
pub fn ase(q: &AseQuery) -> bool {
    let n = q.x_size();
    let support = q.p.support_indices();
    (0..q.w_size).all(|w| {
        support.iter().all(|&x| {
            let col = w * n + x;
            (0..q.f.cod().len()).all(|y| q.f.get(y, col) == q.g.get(y, col))
        })
    })
}

/// The joint `W ⊗ A → Y ⊗ X`: copy the output of `p`, feed one copy with `w` into `f`.
pub fn ase_joint(q: &AseQuery, f: &Kernel) -> Result<Kernel> {
    let kind = q.p.kind();
    let x = q.p.cod();
    let w = q
        .f
        .dom()
        .split_at(q.w_size)
        .map(|(w, _)| w)
        .unwrap_or_else(|_| FinObject::range(q.w_size));
    let f = f.with_dom(FinObject::tensor(&w, x))?;
    let id_w = identity(kind, &w);
    let steps = [
        tensor(&id_w, &q.p)?,
        tensor(&id_w, &copy(kind, x))?,
        assoc_inv(kind, &w, x, x),
        tensor(&f, &identity(kind, x))?,
    ];
    crate::kernel::chain(&steps.iter().collect::<Vec<_>>())
}

/// Literal evaluation of the defining equation of almost-sure equality.
pub fn ase_by_joint(q: &AseQuery) -> Result<bool> {
    Ok(ase_joint(q, &q.f)? == ase_joint(q, &q.g)?)
}

fn check_ac_kinds(q: &Kernel, p: &Kernel) -> Result<()> {
    if q.kind() != p.kind() {
        return Err(Error::KindMismatch {
            left: q.kind(),
            right: p.kind(),
        });
    }
    if q.kind() == Kind::Signed {
        return Err(Error::UnsupportedKind(Kind::Signed));
    }
    if q.cod() != p.cod() {
        return Err(Error::CodMismatch);
    }
    Ok(())
}

/// Elements in the support of `p` but not of `q`.
fn escaping(q: &Kernel, p: &Kernel) -> Vec<usize> {
    let sq = q.support_indices();
    p.support_indices()
        .into_iter()
        .filter(|x| !sq.contains(x))
        .collect()
}

/// `q ≫ p`: support inclusion `Supp(p) ⊆ Supp(q)`.
pub fn abs_cont(q: &Kernel, p: &Kernel) -> Result<bool> {
    check_ac_kinds(q, p)?;
    Ok(escaping(q, p).is_empty())
}

/// Indicator functions `f = 0`, `g = [· = x]` with `f =_q g` but not `f =_p g`.
#[derive(Clone, Debug)]
pub struct AcWitness {
    pub f: Kernel,
    pub g: Kernel,
    pub element: String,
}

#[derive(Clone, Debug)]
pub enum AcRefutation {
    NoWitness,
    Witness(AcWitness),
}

pub fn refute_abs_cont(q: &Kernel, p: &Kernel) -> Result<AcRefutation> {
    check_ac_kinds(q, p)?;
    let Some(&x) = escaping(q, p).first() else {
        return Ok(AcRefutation::NoWitness);
    };
    let bits = FinObject::from_unique(vec!["0".into(), "1".into()]);
    let dom = p.cod().clone();
    let f = Kernel::deterministic(p.kind(), dom.clone(), bits.clone(), |_| 0);
    let g = Kernel::deterministic(p.kind(), dom, bits, |j| usize::from(j == x));
    Ok(AcRefutation::Witness(AcWitness {
        f,
        g,
        element: p.cod().label(x).to_string(),
    }))
}

/// Absolute bicontinuity `p ≈ q`.
pub fn acsim(p: &Kernel, q: &Kernel) -> Result<bool> {
    Ok(abs_cont(p, q)? && abs_cont(q, p)?)
}

/// `copy ∘ p ≪ p ⊗ p`.
pub fn is_atomic(p: &Kernel) -> Result<bool> {
    if p.kind() == Kind::Signed {
        return Err(Error::UnsupportedKind(Kind::Signed));
    }
    let pp = tensor(p, p)?;
    let cp = compose(&copy(p.kind(), p.cod()), p)?;
    abs_cont(&pp, &cp)
}

/// Replaces every column of `f : W ⊗ X → Y` at an `x` outside `Supp(p)` by a
/// seeded random valid column that differs from the original when possible.
pub fn perturb_off_support(f: &Kernel, p: &Kernel, seed: u64) -> Result<Kernel> {
    let n = p.cod().len();
    if n == 0 || f.dom().len() % n != 0 {
        return Err(Error::ShapeMismatch(format!(
            "domain of size {} does not end in an object of size {n}",
            f.dom().len()
        )));
    }
    let support = p.support_indices();
    let mut rng = rng(seed);
    let cod_len = f.cod().len();
    let replacements: Vec<Option<Vec<crate::kernel::Weight>>> = (0..f.dom().len())
        .map(|c| {
            if support.contains(&(c % n)) || cod_len == 0 {
                return None;
            }
            let original = f.column(c);
            let mut candidate = random_column(f.kind(), cod_len, &mut rng);
            for _ in 0..64 {
                if candidate != original {
                    break;
                }
                candidate = random_column(f.kind(), cod_len, &mut rng);
            }
            Some(candidate)
        })
        .collect();
    Ok(f.map_columns(|c| replacements[c].clone()))
}

/// Outcome of one instance of the causality implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub antecedent: bool,
    pub consequent: bool,
    pub implication_ok: bool,
}

impl Implication {
    pub(crate) fn new(antecedent: bool, consequent: bool) -> Self {
        Implication {
            antecedent,
            consequent,
            implication_ok: !antecedent || consequent,
        }
    }
}

/// For `f : A → X`, `g : X → Y`, `h₁, h₂ : Y → Z`: does `h₁ =_{g∘f} h₂` give
/// `h₁ ∘ g =_f h₂ ∘ g`?
pub fn check_causality_instance(f: &Kernel, g: &Kernel, h1: &Kernel, h2: &Kernel) -> Result<Implication> {
    let shape = |e: Error| Error::ShapeMismatch(e.to_string());
    let gf = compose(g, f).map_err(shape)?;
    let antecedent = ase(&AseQuery::new(gf, h1.clone(), h2.clone())?);
    let h1g = compose(h1, g).map_err(shape)?;
    let h2g = compose(h2, g).map_err(shape)?;
    let consequent = ase(&AseQuery::new(f.clone(), h1g, h2g)?);
    Ok(Implication::new(antecedent, consequent))
}

/// A random pair `(f, g)` of parallel kernels `W ⊗ X → Y` with `f =_p g`.
pub fn random_ase_pair<R: Rng>(
    p: &Kernel,
    w: &FinObject,
    y: &FinObject,
    rng: &mut R,
) -> (Kernel, Kernel) {
    let dom = FinObject::tensor(w, p.cod());
    let f = crate::random::random_kernel(p.kind(), &dom, y, rng);
    let g = perturb_off_support(&f, p, rng.random()).expect("shapes agree");
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::delta;

    fn abc() -> FinObject {
        FinObject::new(["a", "b", "c"]).unwrap()
    }

    fn half_half() -> Kernel {
        Kernel::parse_rows(Kind::Stoch, FinObject::unit(), abc(), &[&["1/2"], &["1/2"], &["0"]]).unwrap()
    }

    fn two() -> FinObject {
        FinObject::range(2)
    }

    #[test]
    fn agreement_on_support_is_enough() {
        let y = FinObject::new(["u", "v"]).unwrap();
        let f = Kernel::parse_rows(Kind::Stoch, abc(), y.clone(), &[&["1", "0", "1"], &["0", "1", "0"]]).unwrap();
        let g = Kernel::parse_rows(Kind::Stoch, abc(), y, &[&["1", "0", "0"], &["0", "1", "1"]]).unwrap();
        let q = AseQuery::new(half_half(), f.clone(), g.clone()).unwrap();
        assert!(ase(&q));
        assert!(ase_by_joint(&q).unwrap());
        let q = AseQuery::new(identity(Kind::Stoch, &abc()), f, g).unwrap();
        assert!(!ase(&q));
        assert!(!ase_by_joint(&q).unwrap());
    }

    #[test]
    fn shape_errors() {
        let f = identity(Kind::Stoch, &two());
        assert!(matches!(
            AseQuery::new(half_half(), f.clone(), f),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn remark_precomposition_counterexample() {
        let q = Kernel::parse_rows(Kind::Stoch, two(), two(), &[&["1", "1/2"], &["0", "1/2"]]).unwrap();
        let p = Kernel::parse_rows(Kind::Stoch, two(), two(), &[&["1/2", "1/2"], &["1/2", "1/2"]]).unwrap();
        assert!(abs_cont(&q, &p).unwrap());
        let d0 = delta(Kind::Stoch, &two(), "0").unwrap();
        let qd = compose(&q, &d0).unwrap();
        let pd = compose(&p, &d0).unwrap();
        assert!(!abs_cont(&qd, &pd).unwrap());
        let AcRefutation::Witness(w) = refute_abs_cont(&qd, &pd).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(w.element, "1");
        assert!(ase(&AseQuery::new(qd, w.f.clone(), w.g.clone()).unwrap()));
        assert!(!ase(&AseQuery::new(pd, w.f, w.g).unwrap()));
    }

    #[test]
    fn identity_is_greatest() {
        assert!(abs_cont(&identity(Kind::Stoch, &abc()), &half_half()).unwrap());
        assert!(matches!(
            refute_abs_cont(&half_half(), &half_half()).unwrap(),
            AcRefutation::NoWitness
        ));
    }

    #[test]
    fn signed_has_no_abs_cont() {
        let s = identity(Kind::Signed, &two());
        assert_eq!(abs_cont(&s, &s).unwrap_err(), Error::UnsupportedKind(Kind::Signed));
    }

    #[test]
    fn disjoint_points_not_bicontinuous() {
        let a = delta(Kind::Stoch, &abc(), "a").unwrap();
        let b = delta(Kind::Stoch, &abc(), "b").unwrap();
        assert!(!acsim(&a, &b).unwrap());
        assert!(acsim(&a, &a).unwrap());
    }

    #[test]
    fn atomic_example() {
        let p = Kernel::parse_rows(Kind::Stoch, FinObject::unit(), two(), &[&["1/2"], &["1/2"]]).unwrap();
        assert!(is_atomic(&p).unwrap());
    }

    #[test]
    fn perturbation_stays_off_support() {
        let y = FinObject::range(3);
        let f = crate::random::random_kernel(Kind::Stoch, &abc(), &y, &mut rng(1));
        let g = perturb_off_support(&f, &half_half(), 9).unwrap();
        assert_ne!(f, g);
        for c in 0..2 {
            assert_eq!(f.column(c), g.column(c));
        }
        assert!(ase(&AseQuery::new(half_half(), f.clone(), g.clone()).unwrap()));
        assert_eq!(g, perturb_off_support(&f, &half_half(), 9).unwrap());
        let full = identity(Kind::Stoch, &abc());
        assert_eq!(perturb_off_support(&f, &full, 9).unwrap(), f);
    }

    #[test]
    fn causality_trivial_when_equal() {
        let f = half_half();
        let g = identity(Kind::Stoch, &abc());
        let h = crate::random::random_kernel(Kind::Stoch, &abc(), &two(), &mut rng(3));
        let r = check_causality_instance(&f, &g, &h, &h).unwrap();
        assert!(r.antecedent && r.consequent && r.implication_ok);
    }
}
