#![allow(dead_code)]

use finmarkov::random::{random_kernel, rng, Rng64};
use finmarkov::{FinObject, Kernel, Kind};
use proptest::prelude::*;

pub fn kinds() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Stoch), Just(Kind::Signed), Just(Kind::Multi)]
}

pub fn positive_kinds() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Stoch), Just(Kind::Multi)]
}

/// Object sizes plus a seed; kernels are drawn from the seed inside the test.
pub fn sizes(n: usize, max: usize) -> impl Strategy<Value = (Vec<usize>, u64)> {
    (prop::collection::vec(1..=max, n), any::<u64>())
}

pub fn objects(sizes: &[usize]) -> Vec<FinObject> {
    sizes.iter().map(|&n| FinObject::range(n)).collect()
}

pub fn draw(kind: Kind, dom: &FinObject, cod: &FinObject, r: &mut Rng64) -> Kernel {
    random_kernel(kind, dom, cod, r)
}

pub fn seeded(seed: u64) -> Rng64 {
    rng(seed)
}
