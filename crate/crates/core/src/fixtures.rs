//! Worked examples used by tests, the CLI golden suite and the Python bindings.

use crate::kernel::{Kernel, Kind};
use crate::object::FinObject;

fn stoch(dom: FinObject, cod: FinObject, rows: &[&[&str]]) -> Kernel {
    Kernel::parse_rows(Kind::Stoch, dom, cod, rows).expect("fixture is valid")
}

fn labelled(labels: &[&str]) -> FinObject {
    FinObject::new(labels.iter().copied()).expect("fixture labels are distinct")
}

/// Ignores its input and flips a fair coin.
pub fn strong_idempotent() -> Kernel {
    let x = FinObject::one_based(2);
    stoch(x.clone(), x, &[&["1/2", "1/2"], &["1/2", "1/2"]])
}

/// Identity on the first two states, fair coin on them from the third.
pub fn static_idempotent() -> Kernel {
    let x = FinObject::one_based(3);
    stoch(
        x.clone(),
        x,
        &[&["1", "0", "1/2"], &["0", "1", "1/2"], &["0", "0", "0"]],
    )
}

pub fn balanced_idempotent() -> Kernel {
    let x = FinObject::one_based(4);
    stoch(
        x.clone(),
        x,
        &[
            &["1/2", "1/2", "0", "1/4"],
            &["1/2", "1/2", "0", "1/4"],
            &["0", "0", "1", "1/2"],
            &["0", "0", "0", "0"],
        ],
    )
}

pub fn paper_stochastic_idempotents() -> Vec<Kernel> {
    vec![strong_idempotent(), static_idempotent(), balanced_idempotent()]
}

/// A splitting as printed next to each example: `(e, ι, π)`.
pub struct PrintedSplitting {
    pub name: &'static str,
    pub endo: Kernel,
    pub inclusion: Kernel,
    pub projection: Kernel,
}

pub fn paper_splittings() -> Vec<PrintedSplitting> {
    let strong_t = labelled(&["C_1"]);
    let static_t = labelled(&["C_1", "C_2"]);
    let balanced_t = labelled(&["C_1", "C_3"]);
    let x2 = FinObject::one_based(2);
    let x3 = FinObject::one_based(3);
    let x4 = FinObject::one_based(4);
    vec![
        PrintedSplitting {
            name: "strong",
            endo: strong_idempotent(),
            inclusion: stoch(strong_t.clone(), x2.clone(), &[&["1/2"], &["1/2"]]),
            projection: stoch(x2, strong_t, &[&["1", "1"]]),
        },
        PrintedSplitting {
            name: "static",
            endo: static_idempotent(),
            inclusion: stoch(static_t.clone(), x3.clone(), &[&["1", "0"], &["0", "1"], &["0", "0"]]),
            projection: stoch(x3, static_t, &[&["1", "0", "1/2"], &["0", "1", "1/2"]]),
        },
        PrintedSplitting {
            name: "balanced",
            endo: balanced_idempotent(),
            inclusion: stoch(
                balanced_t.clone(),
                x4.clone(),
                &[&["1/2", "0"], &["1/2", "0"], &["0", "1"], &["0", "0"]],
            ),
            projection: stoch(x4, balanced_t, &[&["1", "1", "0", "1/2"], &["0", "0", "1", "1/2"]]),
        },
    ]
}

/// Multivalued idempotent `0 ↦ {0,1}`, `1 ↦ {1}`; not balanced.
pub fn multi_upset_idempotent() -> Kernel {
    let x = FinObject::range(2);
    Kernel::from_images(x.clone(), x, &[vec![0, 1], vec![1]]).expect("fixture is valid")
}

/// `x ↦ {y : y ≥ x}` on a three-element chain; not balanced.
pub fn multi_chain_idempotent() -> Kernel {
    let x = FinObject::range(3);
    Kernel::from_images(x.clone(), x, &[vec![0, 1, 2], vec![1, 2], vec![2]]).expect("fixture is valid")
}

/// Signed idempotent on `{a,b,c}` with a negative entry; not balanced.
pub fn signed_idempotent() -> Kernel {
    let x = labelled(&["a", "b", "c"]);
    Kernel::parse_rows(
        Kind::Signed,
        x.clone(),
        x,
        &[&["1", "0", "0"], &["1", "0", "0"], &["-1", "1", "1"]],
    )
    .expect("fixture is valid")
}

pub fn non_balanced_idempotents() -> Vec<Kernel> {
    vec![multi_upset_idempotent(), multi_chain_idempotent(), signed_idempotent()]
}

/// `q ≫ p` on `{0,1}` while `q ∘ δ₀ ≫ p ∘ δ₀` fails: `(q, p)`.
pub fn precomposition_counterexample() -> (Kernel, Kernel) {
    let x = FinObject::range(2);
    let q = stoch(x.clone(), x.clone(), &[&["1", "1/2"], &["0", "1/2"]]);
    let p = stoch(x.clone(), x, &[&["1/2", "1/2"], &["1/2", "1/2"]]);
    (q, p)
}
