//! Seeded generators for kernels and idempotents, shared by tests, the
//! acceptance suite and the CLI.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Kernel, Kind, Weight};
use crate::object::FinObject;
use crate::scalar::Scalar;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random column valid for `kind` over `n ≥ 1` codomain elements.
///
/// Stochastic columns have small denominators and frequent zeros so that
/// supports are interesting.
pub fn random_column<R: Rng>(kind: Kind, n: usize, rng: &mut R) -> Vec<Weight> {
    assert!(n > 0, "no valid column into an empty object");
    match kind {
        Kind::Multi => {
            let mut col: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
            if !col.iter().any(|&b| b) {
                col[rng.random_range(0..n)] = true;
            }
            col.into_iter().map(Weight::Bool).collect()
        }
        Kind::Stoch => {
            let mut raw: Vec<i64> = (0..n)
                .map(|_| if rng.random_bool(0.4) { 0 } else { rng.random_range(1..=4) })
                .collect();
            if raw.iter().all(|&w| w == 0) {
                raw[rng.random_range(0..n)] = rng.random_range(1..=4);
            }
            normalize(&raw)
        }
        Kind::Signed => loop {
            let raw: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
            if raw.iter().sum::<i64>() != 0 {
                break normalize(&raw);
            }
        },
    }
}

fn normalize(raw: &[i64]) -> Vec<Weight> {
    let total: i64 = raw.iter().sum();
    raw.iter()
        .map(|&w| Weight::Num(Scalar::new(BigInt::from(w), BigInt::from(total))))
        .collect()
}

pub fn random_kernel<R: Rng>(kind: Kind, dom: &FinObject, cod: &FinObject, rng: &mut R) -> Kernel {
    let cols: Vec<Vec<Weight>> = (0..dom.len())
        .map(|_| random_column(kind, cod.len(), rng))
        .collect();
    Kernel::from_weight_fn(kind, dom.clone(), cod.clone(), |r, c| cols[c][r].clone())
}

/// Random deterministic kernel.
pub fn random_function<R: Rng>(kind: Kind, dom: &FinObject, cod: &FinObject, rng: &mut R) -> Kernel {
    let targets: Vec<usize> = (0..dom.len()).map(|_| rng.random_range(0..cod.len())).collect();
    Kernel::deterministic(kind, dom.clone(), cod.clone(), |j| targets[j])
}

/// Object with labels `"0"..` of a random size in `lo..=hi`.
pub fn random_object<R: Rng>(lo: usize, hi: usize, rng: &mut R) -> FinObject {
    FinObject::range(rng.random_range(lo..=hi))
}

/// A stochastic idempotent built as `ι ∘ π` from a random class structure,
/// together with that structure.
#[derive(Clone, Debug)]
pub struct GeneratedIdempotent {
    pub kernel: Kernel,
    pub inclusion: Kernel,
    pub projection: Kernel,
    /// Recurrent classes as element indices, each sorted.
    pub classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
}

/// Random partition of `0..n` into recurrent classes and a transient set, a
/// full-support distribution on each class, and random mixtures of classes
/// for transient states.
pub fn random_idempotent<R: Rng>(n: usize, rng: &mut R) -> GeneratedIdempotent {
    assert!(n > 0);
    let x = FinObject::range(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let n_transient = if n == 1 { 0 } else { rng.random_range(0..n) };
    let n_recurrent = n - n_transient;
    let n_classes = rng.random_range(1..=n_recurrent);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (k, &elem) in order[..n_recurrent].iter().enumerate() {
        let slot = if k < n_classes { k } else { rng.random_range(0..n_classes) };
        classes[slot].push(elem);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    let mut transient: Vec<usize> = order[n_recurrent..].to_vec();
    transient.sort_unstable();

    let t = FinObject::from_unique((0..n_classes).map(|i| format!("t{i}")).collect());
    let measures: Vec<Vec<Scalar>> = classes
        .iter()
        .map(|class| {
            let raw: Vec<i64> = class.iter().map(|_| rng.random_range(1..=4)).collect();
            let total: i64 = raw.iter().sum();
            let mut col = vec![Scalar::zero(); n];
            for (&elem, &w) in class.iter().zip(&raw) {
                col[elem] = Scalar::new(BigInt::from(w), BigInt::from(total));
            }
            col
        })
        .collect();
    let inclusion = Kernel::from_weight_fn(Kind::Stoch, t.clone(), x.clone(), |r, c| {
        Weight::Num(measures[c][r].clone())
    });
    let class_of: Vec<Option<usize>> = (0..n)
        .map(|elem| classes.iter().position(|c| c.contains(&elem)))
        .collect();
    let mix: Vec<Vec<Weight>> = (0..n)
        .map(|elem| match class_of[elem] {
            Some(c) => (0..n_classes).map(|i| Weight::Bool(i == c)).collect(),
            None => random_column(Kind::Stoch, n_classes, rng),
        })
        .collect();
    let projection = Kernel::from_weight_fn(Kind::Stoch, x.clone(), t, |r, c| mix[c][r].clone());
    let kernel = crate::kernel::compose(&inclusion, &projection).expect("shapes agree");
    GeneratedIdempotent {
        kernel,
        inclusion,
        projection,
        classes,
        transient,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{compose, validate};

    #[test]
    fn generated_kernels_are_valid() {
        let mut r = rng(7);
        for kind in [Kind::Stoch, Kind::Signed, Kind::Multi] {
            for _ in 0..50 {
                let a = random_object(0, 4, &mut r);
                let b = random_object(1, 4, &mut r);
                let k = random_kernel(kind, &a, &b, &mut r);
                assert!(validate(&k).is_ok(), "{k:?}");
            }
        }
    }

    #[test]
    fn generated_idempotents_are_idempotent() {
        let mut r = rng(11);
        for n in 1..=8 {
            let g = random_idempotent(n, &mut r);
            assert!(validate(&g.kernel).is_ok());
            assert_eq!(compose(&g.kernel, &g.kernel).unwrap(), g.kernel);
            let pi_iota = compose(&g.projection, &g.inclusion).unwrap();
            assert!(crate::kernel::is_deterministic(&pi_iota));
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_kernel(Kind::Stoch, &FinObject::range(3), &FinObject::range(3), &mut rng(5));
        let b = random_kernel(Kind::Stoch, &FinObject::range(3), &FinObject::range(3), &mut rng(5));
        assert_eq!(a, b);
    }
}
