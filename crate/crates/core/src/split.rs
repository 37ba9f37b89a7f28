//! Splitting idempotents: the recurrent-class construction for stochastic
//! kernels and an exhaustive search for small kernels of any kind.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::asrel::{ase, AseQuery};
use crate::error::{Error, Result};
use crate::idempotent::{classify, is_idempotent, IdempotentReport};
use crate::kernel::{compose, is_deterministic, tensor, Kernel, Kind, Weight};
use crate::object::FinObject;
use crate::scalar::Scalar;
use crate::structure::{copy, delta_at, identity};
use num_traits::Zero;

pub const DEFAULT_CANDIDATE_BOUND: u128 = 10_000_000;

/// `e = ι ∘ π` with `π ∘ ι = id_T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitData {
    #[serde(rename = "T")]
    pub object: FinObject,
    #[serde(rename = "pi")]
    pub projection: Kernel,
    #[serde(rename = "iota")]
    pub inclusion: Kernel,
    pub classes: Vec<Vec<String>>,
    pub transient: Vec<String>,
}

impl SplitData {
    fn from_pair(e: &Kernel, inclusion: Kernel, projection: Kernel) -> Self {
        let x = e.dom();
        let classes: Vec<Vec<usize>> = (0..inclusion.dom().len())
            .map(|t| inclusion.column_support(t))
            .collect();
        let covered: Vec<bool> = (0..x.len())
            .map(|i| classes.iter().any(|c| c.contains(&i)))
            .collect();
        SplitData {
            object: inclusion.dom().clone(),
            classes: classes
                .iter()
                .map(|c| c.iter().map(|&i| x.label(i).to_string()).collect())
                .collect(),
            transient: (0..x.len())
                .filter(|&i| !covered[i])
                .map(|i| x.label(i).to_string())
                .collect(),
            projection,
            inclusion,
        }
    }
}

fn violation(msg: impl Into<String>) -> Error {
    Error::StructureViolation(msg.into())
}

/// Splits a stochastic idempotent through its recurrent communication classes.
///
/// In the graph `x → y ⟺ e(y|x) > 0` the recurrent classes are the strongly
/// connected components without outgoing edges. Every state of a class has
/// the same column, which becomes `ι`; since the columns of `ι` have disjoint
/// supports, `e = ι ∘ π` forces `π(t|x) = e(C_t|x)`.
pub fn blackwell_split(e: &Kernel) -> Result<SplitData> {
    if e.kind() != Kind::Stoch {
        return Err(Error::UnsupportedKind(e.kind()));
    }
    if !is_idempotent(e)? {
        return Err(Error::NotIdempotent);
    }
    let x = e.dom();
    let n = x.len();
    let mut graph = DiGraph::<usize, ()>::with_capacity(n, n * n);
    let nodes: Vec<NodeIndex> = (0..n).map(|i| graph.add_node(i)).collect();
    for src in 0..n {
        for dst in 0..n {
            if e.nonzero(dst, src) {
                graph.add_edge(nodes[src], nodes[dst], ());
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut members: Vec<usize> = comp.into_iter().map(|v| graph[v]).collect();
            members.sort_unstable();
            members
        })
        .filter(|members| {
            members.iter().all(|&src| (0..n).all(|dst| !e.nonzero(dst, src) || members.contains(&dst)))
        })
        .collect();
    classes.sort();

    let t = FinObject::new(classes.iter().map(|c| format!("C_{}", x.label(c[0]))))?;
    for class in &classes {
        let col = e.column(class[0]);
        if class.iter().any(|&m| e.column(m) != col) {
            return Err(violation(format!("columns differ within class C_{}", x.label(class[0]))));
        }
    }
    let inclusion = Kernel::from_weight_fn(Kind::Stoch, t.clone(), x.clone(), |r, c| {
        e.get(r, classes[c][0])
    });
    let mass = |c: usize, col: usize| -> Scalar {
        classes[c]
            .iter()
            .fold(Scalar::zero(), |acc, &r| acc + e.scalar(r, col).expect("numeric kernel"))
    };
    let projection = Kernel::from_weight_fn(Kind::Stoch, x.clone(), t.clone(), |r, c| Weight::Num(mass(r, c)));
    crate::kernel::validate(&projection).map_err(|v| violation(format!("projection: {v}")))?;

    if compose(&projection, &inclusion)? != identity(Kind::Stoch, &t) {
        return Err(violation("pi . iota != id"));
    }
    if compose(&inclusion, &projection)? != *e {
        return Err(violation("iota . pi != e"));
    }
    let data = SplitData::from_pair(e, inclusion, projection);
    let recurrent: Vec<usize> = classes.iter().flatten().copied().collect();
    for col in 0..n {
        for r in (0..n).filter(|r| !recurrent.contains(r)) {
            if e.nonzero(r, col) {
                return Err(violation(format!("transient state {} is reachable", x.label(r))));
            }
        }
    }
    let report = classify(e)?;
    if is_deterministic(&data.inclusion) != report.static_ {
        return Err(violation("iota deterministic disagrees with static"));
    }
    if is_deterministic(&data.projection) != report.strong {
        return Err(violation("pi deterministic disagrees with strong"));
    }
    Ok(data)
}

/// Entries allowed for candidate kernels during exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchDomain {
    /// Boolean matrices with nonempty columns.
    Boolean,
    /// Stochastic columns with entries in `{0, 1/d, …, 1}`.
    Grid(u32),
}

impl SearchDomain {
    pub fn for_kind(kind: Kind, denominator: u32) -> Result<Self> {
        match kind {
            Kind::Multi => Ok(SearchDomain::Boolean),
            Kind::Stoch => Ok(SearchDomain::Grid(denominator.max(1))),
            Kind::Signed => Err(Error::UnsupportedKind(kind)),
        }
    }

    fn kind(self) -> Kind {
        match self {
            SearchDomain::Boolean => Kind::Multi,
            SearchDomain::Grid(_) => Kind::Stoch,
        }
    }

    fn column_count(self, len: usize) -> u128 {
        match self {
            SearchDomain::Boolean => {
                if len >= 127 {
                    u128::MAX
                } else {
                    (1u128 << len) - 1
                }
            }
            SearchDomain::Grid(d) => binomial(d as u128 + len as u128 - 1, len as u128 - 1),
        }
    }

    fn columns(self, len: usize) -> Vec<Vec<Weight>> {
        match self {
            SearchDomain::Boolean => (1u64..(1u64 << len))
                .map(|mask| (0..len).map(|i| Weight::Bool(mask >> i & 1 == 1)).collect())
                .collect(),
            SearchDomain::Grid(d) => {
                let mut out = Vec::new();
                let mut parts = vec![0u32; len];
                compositions(d, 0, &mut parts, &mut out);
                out.into_iter()
                    .map(|p| {
                        p.into_iter()
                            .map(|k| Weight::Num(Scalar::new(k.into(), d.into())))
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

fn compositions(remaining: u32, pos: usize, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        out.push(parts.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        parts[pos] = k;
        compositions(remaining - k, pos + 1, parts, out);
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of `(π, ι)` pairs with `|T| ≤ max_t`.
pub fn candidate_count(domain: SearchDomain, n: usize, max_t: usize) -> u128 {
    (1..=max_t)
        .map(|k| {
            let pis = domain.column_count(k).saturating_pow(n as u32);
            let iotas = domain.column_count(n).saturating_pow(k as u32);
            pis.saturating_mul(iotas)
        })
        .fold(0u128, u128::saturating_add)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Split(SplitData),
    NoSplitUpTo { max_t: usize },
}

/// Exhaustively searches for `π : X → T`, `ι : T → X` with `π ∘ ι = id` and
/// `ι ∘ π = e`, for `|T| = 1..=max_t`.
///
/// For each `ι` only the `π` columns with `ι ∘ π(·|x) = e(·|x)` are combined,
/// which visits every valid pair while skipping columns that cannot work.
pub fn search_split(e: &Kernel, max_t: usize, domain: SearchDomain, bound: u128) -> Result<SearchOutcome> {
    if e.kind() != domain.kind() {
        return Err(Error::KindMismatch {
            left: e.kind(),
            right: domain.kind(),
        });
    }
    if !is_idempotent(e)? {
        return Err(Error::NotIdempotent);
    }
    let x = e.dom();
    let n = x.len();
    let candidates = candidate_count(domain, n, max_t);
    if candidates > bound {
        return Err(Error::SizeLimitExceeded { candidates, bound });
    }
    let kind = e.kind();
    let targets: Vec<Kernel> = (0..n)
        .map(|i| compose(e, &delta_at(kind, x, i)))
        .collect::<Result<_>>()?;
    let x_columns = domain.columns(n);
    for k in 1..=max_t {
        let t = FinObject::new((0..k).map(|i| format!("t{i}")))?;
        let unit = FinObject::unit();
        let t_columns: Vec<Kernel> = domain
            .columns(k)
            .into_iter()
            .map(|col| Kernel::from_weight_fn(kind, unit.clone(), t.clone(), |r, _| col[r].clone()))
            .collect();
        let id_t = identity(kind, &t);
        let mut choice = vec![0usize; k];
        loop {
            let iota = Kernel::from_weight_fn(kind, t.clone(), x.clone(), |r, c| x_columns[choice[c]][r].clone());
            let per_x: Vec<Vec<usize>> = targets
                .iter()
                .map(|target| {
                    t_columns
                        .iter()
                        .enumerate()
                        .filter(|(_, col)| compose(&iota, col).map(|k| k == *target).unwrap_or(false))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            if per_x.iter().all(|c| !c.is_empty()) {
                let mut pick = vec![0usize; n];
                loop {
                    let pi = Kernel::from_weight_fn(kind, x.clone(), t.clone(), |r, c| {
                        t_columns[per_x[c][pick[c]]].get(r, 0)
                    });
                    if compose(&pi, &iota)? == id_t {
                        return Ok(SearchOutcome::Split(SplitData::from_pair(e, iota, pi)));
                    }
                    if !advance(&mut pick, |i| per_x[i].len()) {
                        break;
                    }
                }
            }
            if !advance(&mut choice, |_| x_columns.len()) {
                break;
            }
        }
    }
    Ok(SearchOutcome::NoSplitUpTo { max_t })
}

/// Odometer step; returns false after the last combination.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in 0..digits.len() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitVerification {
    pub report: IdempotentReport,
    pub iota_deterministic: bool,
    pub pi_deterministic: bool,
    pub pi_as_deterministic: bool,
}

/// Checks a proposed splitting and the properties every splitting has.
///
/// The correspondences between determinism of `ι`, `π` and the idempotent
/// type rely on positivity, so they are asserted for stochastic and
/// multivalued kernels only.
pub fn verify_split(e: &Kernel, inclusion: &Kernel, projection: &Kernel) -> Result<SplitVerification> {
    let not_split = |m: &str| Error::NotASplitting(m.to_string());
    if e.dom() != e.cod() {
        return Err(Error::NotEndo);
    }
    if inclusion.cod() != e.dom() || projection.dom() != e.dom() || projection.cod() != inclusion.dom() {
        return Err(not_split("shapes do not compose"));
    }
    let kind = e.kind();
    if compose(projection, inclusion)? != identity(kind, inclusion.dom()) {
        return Err(not_split("pi . iota = id"));
    }
    if compose(inclusion, projection)? != *e {
        return Err(not_split("iota . pi = e"));
    }
    let report = classify(e)?;
    let t = inclusion.dom();
    let lhs = compose(&copy(kind, t), projection)?;
    let rhs = compose(&tensor(projection, projection)?, &copy(kind, e.dom()))?;
    let pi_as_deterministic = ase(&AseQuery::new(inclusion.clone(), lhs, rhs)?);
    let out = SplitVerification {
        iota_deterministic: is_deterministic(inclusion),
        pi_deterministic: is_deterministic(projection),
        pi_as_deterministic,
        report,
    };
    if matches!(kind, Kind::Stoch | Kind::Multi) {
        if out.iota_deterministic != out.report.static_ {
            return Err(violation("iota deterministic disagrees with static"));
        }
        if out.pi_deterministic != out.report.strong {
            return Err(violation("pi deterministic disagrees with strong"));
        }
        if !out.report.balanced {
            return Err(violation("split idempotent is not balanced"));
        }
    }
    if !out.pi_as_deterministic {
        return Err(violation("pi is not iota-almost surely deterministic"));
    }
    Ok(out)
}
