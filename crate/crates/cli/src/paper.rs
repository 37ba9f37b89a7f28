//! Golden checks on the worked examples, read from the checked-in fixtures.

use finmarkov::document::{parse_kernel, KernelDocument};
use finmarkov::idempotent::{balanced_cross_check, classify};
use finmarkov::split::{blackwell_split, search_split, verify_split, SearchDomain, SearchOutcome, DEFAULT_CANDIDATE_BOUND};
use finmarkov::{Error, Kernel, Result};
use serde::{Deserialize, Serialize};

pub const E_STRONG: &str = include_str!("../fixtures/e_strong.json");
pub const E_STATIC: &str = include_str!("../fixtures/e_static.json");
pub const E_BALANCED4: &str = include_str!("../fixtures/e_balanced4.json");
pub const SPLIT_STRONG: &str = include_str!("../fixtures/split_strong.json");
pub const SPLIT_STATIC: &str = include_str!("../fixtures/split_static.json");
pub const SPLIT_BALANCED4: &str = include_str!("../fixtures/split_balanced4.json");
pub const MULTI_UPSET: &str = include_str!("../fixtures/multi_upset.json");
pub const MULTI_CHAIN: &str = include_str!("../fixtures/multi_chain.json");
pub const SIGNED_ABC: &str = include_str!("../fixtures/signed_abc.json");

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Deserialize)]
struct SplitDocument {
    iota: KernelDocument,
    pi: KernelDocument,
}

/// `(ι, π)` from a fixture.
pub fn parse_split(text: &str) -> Result<(Kernel, Kernel)> {
    let doc: SplitDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((doc.iota.to_kernel()?, doc.pi.to_kernel()?))
}

/// Whether two splittings of the same idempotent agree after renaming `T`.
pub fn same_up_to_relabeling(iota: &Kernel, pi: &Kernel, other_iota: &Kernel, other_pi: &Kernel) -> bool {
    let n = iota.dom().len();
    if other_iota.dom().len() != n || iota.cod() != other_iota.cod() || pi.dom() != other_pi.dom() {
        return false;
    }
    let row = |k: &Kernel, r: usize| (0..k.dom().len()).map(|c| k.get(r, c)).collect::<Vec<_>>();
    let mut used = vec![false; n];
    (0..n).all(|t| {
        let found = (0..n).find(|&s| {
            !used[s] && iota.column(t) == other_iota.column(s) && row(pi, t) == row(other_pi, s)
        });
        match found {
            Some(s) => {
                used[s] = true;
                true
            }
            None => false,
        }
    })
}

fn check(name: &str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check {
            name: name.to_string(),
            passed,
            detail,
        },
        Err(e) => Check {
            name: name.to_string(),
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn flags(e: &Kernel) -> Result<(bool, bool, bool)> {
    let r = classify(e)?;
    Ok((r.static_, r.strong, r.balanced))
}

/// Classification and splitting of the three stochastic examples.
pub fn golden_examples() -> Vec<Check> {
    let cases = [
        ("strong", E_STRONG, SPLIT_STRONG, (false, true, true)),
        ("static", E_STATIC, SPLIT_STATIC, (true, false, true)),
        ("balanced", E_BALANCED4, SPLIT_BALANCED4, (false, false, true)),
    ];
    let mut out = Vec::new();
    for (name, e_text, split_text, expected) in cases {
        out.push(check(&format!("classify {name} example"), (|| {
            let e = parse_kernel(e_text)?;
            let got = flags(&e)?;
            Ok((got == expected, format!("(static, strong, balanced) = {got:?}")))
        })()));
        out.push(check(&format!("cross-check {name} example"), (|| {
            let c = balanced_cross_check(&parse_kernel(e_text)?)?;
            Ok((c.all_agree() && c.balanced, format!("{c:?}")))
        })()));
        out.push(check(&format!("split {name} example"), (|| {
            let e = parse_kernel(e_text)?;
            let s = blackwell_split(&e)?;
            verify_split(&e, &s.inclusion, &s.projection)?;
            let (iota, pi) = parse_split(split_text)?;
            verify_split(&e, &iota, &pi)?;
            let matches = same_up_to_relabeling(&s.inclusion, &s.projection, &iota, &pi);
            Ok((matches, format!("classes {:?}, transient {:?}", s.classes, s.transient)))
        })()));
    }
    out
}

fn witness_is(e: &Kernel, input: &str, output: &str) -> Result<(bool, String)> {
    let r = classify(e)?;
    let w = r.witnesses.balanced.clone();
    let ok = !r.balanced && w.as_ref().is_some_and(|w| w.input == input && w.output == output);
    Ok((ok, format!("balanced = {}, witness = {:?}", r.balanced, w)))
}

/// The non-balanced idempotents and the failure to split.
pub fn non_balanced_examples() -> Vec<Check> {
    vec![
        check("multivalued upset is not balanced", (|| witness_is(&parse_kernel(MULTI_UPSET)?, "0", "(0,1)"))()),
        check("multivalued 3-chain is not balanced", (|| {
            let r = classify(&parse_kernel(MULTI_CHAIN)?)?;
            Ok((r.idempotent && !r.balanced, format!("balanced = {}", r.balanced)))
        })()),
        check("signed example is not balanced", (|| witness_is(&parse_kernel(SIGNED_ABC)?, "a", "(a,b)"))()),
        check("multivalued upset has no splitting with |T| <= 2", (|| {
            let out = search_split(&parse_kernel(MULTI_UPSET)?, 2, SearchDomain::Boolean, DEFAULT_CANDIDATE_BOUND)?;
            Ok((out == SearchOutcome::NoSplitUpTo { max_t: 2 }, format!("{out:?}")))
        })()),
    ]
}

pub fn verify_paper() -> Vec<Check> {
    let mut all = golden_examples();
    all.extend(non_balanced_examples());
    all
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {:<width$}  {}\n", c.name, c.detail));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    out
}
