//! Local consistency notions: checkers, and drivers that reach them by
//! feeding the matching reducers to the engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::csp::{domain_members, join_all, Body, Constraint, Csp, Relation, Scheme, DEFAULT_SOLUTION_CAP};
use crate::engine::{run_sequence, Deterministic, Mode, ReductionFunction, RunConfig, RunTrace, Strategy};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::lattice::{Atom, Value};
use crate::reducers::{binary_projection, full_projection, path_fn, relational_fn, Which};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Arc,
    Path,
    /// Directional goals carry the order `<_d` as a permutation of domain indices, least first.
    DirectionalArc(Vec<usize>),
    DirectionalPath(Vec<usize>),
    Relational(usize),
}

impl Goal {
    fn is_directional(&self) -> bool {
        matches!(self, Goal::DirectionalArc(_) | Goal::DirectionalPath(_))
    }
}

fn fmt_order(order: &[usize]) -> String {
    order.iter().map(|i| (i + 1).to_string()).join(",")
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Arc => f.write_str("arc"),
            Goal::Path => f.write_str("path"),
            Goal::DirectionalArc(o) => write!(f, "dir-arc:{}", fmt_order(o)),
            Goal::DirectionalPath(o) => write!(f, "dir-path:{}", fmt_order(o)),
            Goal::Relational(m) => write!(f, "rel:{m}"),
        }
    }
}

/// Parses `arc`, `path`, `dir-arc:<order>`, `dir-path:<order>` or `rel:<m>`;
/// orders are comma-separated 1-based indices.
impl FromStr for Goal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("unknown goal `{s}`"));
        let order = |o: &str| -> Result<Vec<usize>> {
            o.split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Error::Argument(format!("bad index `{x}` in order `{o}`"))),
                })
                .collect()
        };
        match s.split_once(':') {
            None if s == "arc" => Ok(Goal::Arc),
            None if s == "path" => Ok(Goal::Path),
            Some(("dir-arc", o)) => Ok(Goal::DirectionalArc(order(o)?)),
            Some(("dir-path", o)) => Ok(Goal::DirectionalPath(order(o)?)),
            Some(("rel", m)) => m
                .trim()
                .parse()
                .ok()
                .filter(|&m| m >= 1)
                .map(Goal::Relational)
                .ok_or_else(|| Error::Argument(format!("bad m in `{s}`"))),
            _ => Err(bad()),
        }
    }
}

/// The CSP with every domain a finite set and every constraint extensional
/// (linear bodies are enumerated within the domains).
pub fn finite_form(p: &Csp) -> Result<Csp> {
    let domains = p
        .domains
        .iter()
        .map(|d| match d {
            Value::Set(_) => Ok(d.clone()),
            _ => Ok(Value::set(domain_members(d)?)),
        })
        .collect::<Result<Vec<_>>>()?;
    let constraints = p
        .constraints
        .iter()
        .map(|c| match c.body {
            Body::Extensional(_) => Ok(c.clone()),
            _ => {
                let r = c.materialize(&p.domains, DEFAULT_SOLUTION_CAP)?;
                Ok(Constraint { body: Body::Extensional(r.tuples), ..c.clone() })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Csp { domains, constraints })
}

fn extensional(c: &Constraint) -> Result<&BTreeSet<Vec<Atom>>> {
    c.tuples().ok_or_else(|| Error::Unsupported(format!("constraint `{}` is not extensional", c.id)))
}

/// Every value of every domain a constraint mentions has a supporting tuple
/// (within the current domains) in that constraint.
pub fn is_arc_consistent(p: &Csp) -> Result<bool> {
    for c in &p.constraints {
        let r = Relation::new(c.scheme.clone(), extensional(c)?.clone()).within(&p.domains);
        for (k, &i) in c.scheme.indices().iter().enumerate() {
            let supported: BTreeSet<&Atom> = r.tuples.iter().map(|t| &t[k]).collect();
            if domain_members(&p.domains[i])?.iter().any(|a| !supported.contains(a)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn scheme_set(s: &Scheme) -> BTreeSet<usize> {
    s.indices().iter().copied().collect()
}

/// Whether the tuple `d` of type `t` is consistent: every constraint whose
/// scheme lies within `t` holds on the matching coordinates.
fn is_consistent_tuple(p: &Csp, t: &[usize], d: &[Atom]) -> bool {
    p.constraints.iter().all(|c| {
        let vals: Option<Vec<Atom>> =
            c.scheme.indices().iter().map(|i| t.iter().position(|x| x == i).map(|k| d[k].clone())).collect();
        match vals {
            Some(v) => c.satisfied_by(&v),
            None => true,
        }
    })
}

/// Exhaustive check: for every choice of `m` different constraints and every
/// subsequence `t` of their joint scheme (including the empty one), every
/// consistent tuple of type `t` extends to a solution of the chosen ones.
/// Constraints are matched to subsequences as sets of indices.
pub fn is_relationally_m_consistent(p: &Csp, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::Argument("m must be at least 1".into()));
    }
    let rels = p.constraints.iter().map(Constraint::relation).collect::<Result<Vec<_>>>()?;
    let members: Vec<Vec<Atom>> = p.domains.iter().map(domain_members).collect::<Result<_>>()?;
    for combo in (0..rels.len()).combinations(m) {
        let joined = join_all(combo.iter().map(|&k| &rels[k]));
        for t in joined.scheme.indices().iter().copied().powerset() {
            let ts = Scheme::new(t.clone())?;
            let proj = joined.restrict(&ts)?.tuples;
            let size: u128 = t.iter().map(|&i| members[i].len() as u128).product();
            if size > DEFAULT_SOLUTION_CAP {
                return Err(Error::Resource(format!("{size} tuples of type {ts:?} exceed the cap")));
            }
            for d in tuples_of_type(&members, &t) {
                if !proj.contains(&d) && is_consistent_tuple(p, &t, &d) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All tuples of type `t`; one empty tuple when `t` is empty.
fn tuples_of_type(members: &[Vec<Atom>], t: &[usize]) -> Vec<Vec<Atom>> {
    if t.is_empty() {
        return vec![Vec::new()];
    }
    t.iter().map(|&i| members[i].iter().cloned()).multi_cartesian_product().collect()
}

/// Intersects constraints whose schemes contain the same indices; the first
/// of each group keeps its id, scheme order and position.
pub fn merge_duplicates(p: &Csp) -> Result<Csp> {
    let mut first: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut out: Vec<Constraint> = Vec::new();
    for c in &p.constraints {
        let key = scheme_set(&c.scheme);
        match first.get(&key) {
            Some(&k) => {
                let aligned = c.relation()?.restrict(&out[k].scheme)?;
                let kept = extensional(&out[k])?.intersection(&aligned.tuples).cloned().collect();
                out[k].body = Body::Extensional(kept);
                out[k].synthetic &= c.synthetic;
            }
            None => {
                first.insert(key, out.len());
                extensional(c)?;
                out.push(c.clone());
            }
        }
    }
    Ok(Csp { domains: p.domains.clone(), constraints: out })
}

/// Merges constraints with exactly the same scheme (same order).
fn merge_ordered(p: &Csp) -> Result<Csp> {
    let mut first: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut out: Vec<Constraint> = Vec::new();
    for c in &p.constraints {
        let tuples = extensional(c)?;
        match first.get(c.scheme.indices()) {
            Some(&k) => {
                let kept = extensional(&out[k])?.intersection(tuples).cloned().collect();
                out[k].body = Body::Extensional(kept);
                out[k].synthetic &= c.synthetic;
            }
            None => {
                first.insert(c.scheme.indices().to_vec(), out.len());
                out.push(c.clone());
            }
        }
    }
    Ok(Csp { domains: p.domains.clone(), constraints: out })
}

/// The Cartesian product of the domains on `scheme`, flagged synthetic.
pub fn universal_constraint(domains: &[Value], scheme: Scheme) -> Result<Constraint> {
    let size: u128 = scheme
        .indices()
        .iter()
        .map(|&i| domain_members(&domains[i]).map(|m| m.len() as u128))
        .product::<Result<u128>>()?;
    if size > DEFAULT_SOLUTION_CAP {
        return Err(Error::Resource(format!("universal constraint on {scheme:?} has {size} tuples")));
    }
    let unary = scheme
        .indices()
        .iter()
        .map(|&i| {
            let tuples = domain_members(&domains[i])?.into_iter().map(|a| vec![a]).collect();
            Ok(Relation::new(Scheme::new(vec![i])?, tuples))
        })
        .collect::<Result<Vec<_>>>()?;
    let id = format!("u{}", scheme.one_based().iter().join("_"));
    let mut c = Constraint::from_relation(id, join_all(&unary));
    c.scheme = scheme;
    c.synthetic = true;
    Ok(c)
}

fn check_order(order: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut rank = vec![usize::MAX; n];
    for (r, &i) in order.iter().enumerate() {
        if i >= n || rank[i] != usize::MAX {
            return Err(Error::Argument(format!("`{}` is not an order of 1..{n}", fmt_order(order))));
        }
        rank[i] = r;
    }
    if order.len() != n {
        return Err(Error::Argument(format!("`{}` is not an order of 1..{n}", fmt_order(order))));
    }
    Ok(rank)
}

fn binary_pair(c: &Constraint) -> Result<(usize, usize)> {
    match c.scheme.indices() {
        &[a, b] => Ok((a, b)),
        _ => Err(Error::config(format!("`{}` is not binary", c.id))),
    }
}

/// Constraint index by ordered pair of variables.
type PairIndex = BTreeMap<(usize, usize), usize>;

/// Path preparation: one constraint per ordered pair `(i,j)`, `i ≠ j`.
fn complete_pairs(p: &Csp) -> Result<(Csp, PairIndex)> {
    let mut q = merge_ordered(p)?;
    let mut at = BTreeMap::new();
    for (k, c) in q.constraints.iter().enumerate() {
        at.insert(binary_pair(c)?, k);
    }
    let n = q.arity();
    for (i, j) in (0..n).cartesian_product(0..n).filter(|(i, j)| i != j) {
        if let std::collections::btree_map::Entry::Vacant(e) = at.entry((i, j)) {
            e.insert(q.constraints.len());
            q.constraints.push(universal_constraint(&q.domains, Scheme::new(vec![i, j])?)?);
        }
    }
    Ok((q, at))
}

fn path_functions(
    q: &Csp,
    layout: &Layout,
    at: &BTreeMap<(usize, usize), usize>,
    triples: impl IntoIterator<Item = (usize, usize, usize)>,
) -> Result<Vec<ReductionFunction<Value>>> {
    triples
        .into_iter()
        .map(|(k, l, m)| {
            let kl = at[&(k, l)];
            let f = path_fn(&layout.slot(q, kl)?, &layout.slot(q, at[&(k, m)])?, &layout.slot(q, at[&(m, l)])?)?;
            Ok(f.with_group(kl))
        })
        .collect()
}

/// The prepared CSP a goal runs on and its functions over that CSP's
/// [`Layout`]. For directional goals the functions are in pass order.
pub fn goal_functions(p: &Csp, goal: &Goal) -> Result<(Csp, Vec<ReductionFunction<Value>>)> {
    let fin = finite_form(p)?;
    let n = fin.arity();
    match goal {
        Goal::Arc => {
            let fs = fin
                .constraints
                .iter()
                .enumerate()
                .map(|(k, c)| Ok(full_projection(c)?.with_group(k)))
                .collect::<Result<Vec<_>>>()?;
            Ok((fin, fs))
        }
        Goal::DirectionalArc(order) => {
            let rank = check_order(order, n)?;
            let mut fs = Vec::new();
            for (k, c) in fin.constraints.iter().enumerate() {
                let (a, b) = binary_pair(c)?;
                // reduce the <_d-smaller end against the larger one
                let (which, larger) = if rank[a] < rank[b] { (Which::First, b) } else { (Which::Second, a) };
                let smaller = if larger == b { a } else { b };
                fs.push((rank[larger], rank[smaller], k, binary_projection(c, which)?.with_group(k)));
            }
            fs.sort_by(|x, y| (y.0, y.1, x.2).cmp(&(x.0, x.1, y.2)));
            Ok((fin, fs.into_iter().map(|x| x.3).collect()))
        }
        Goal::Path => {
            let (q, at) = complete_pairs(&fin)?;
            let layout = Layout::new(&q);
            let triples = (0..n)
                .cartesian_product(0..n)
                .cartesian_product(0..n)
                .map(|((k, l), m)| (k, l, m))
                .filter(|&(k, l, m)| k != l && k != m && l != m);
            let fs = path_functions(&q, &layout, &at, triples)?;
            Ok((q, fs))
        }
        Goal::DirectionalPath(order) => {
            let rank = check_order(order, n)?;
            let (q, at) = complete_pairs(&fin)?;
            let layout = Layout::new(&q);
            let mut triples = Vec::new();
            for &m in order.iter().rev() {
                let below = &order[..rank[m]];
                for (&k, &l) in below.iter().cartesian_product(below).filter(|(k, l)| k != l) {
                    triples.push((k, l, m));
                }
            }
            let fs = path_functions(&q, &layout, &at, triples)?;
            Ok((q, fs))
        }
        Goal::Relational(m) => {
            if *m == 0 {
                return Err(Error::Argument("m must be at least 1".into()));
            }
            let mut q = merge_duplicates(&fin)?;
            let members = q.constraints.len();
            let mut by_set: BTreeMap<BTreeSet<usize>, usize> =
                q.constraints.iter().enumerate().map(|(k, c)| (scheme_set(&c.scheme), k)).collect();
            // (target, members) pairs, creating universal targets on demand
            let mut plan = Vec::new();
            for combo in (0..members).combinations(*m) {
                let joint = crate::csp::scheme_union(combo.iter().map(|&k| &q.constraints[k].scheme));
                for t in joint.indices().iter().copied().powerset().filter(|t| !t.is_empty()) {
                    let key: BTreeSet<usize> = t.iter().copied().collect();
                    let target = match by_set.get(&key) {
                        Some(&k) => k,
                        None => {
                            q.constraints.push(universal_constraint(&q.domains, Scheme::new(t)?)?);
                            by_set.insert(key, q.constraints.len() - 1);
                            q.constraints.len() - 1
                        }
                    };
                    plan.push((target, combo.clone()));
                }
            }
            let layout = Layout::new(&q);
            let fs = plan
                .into_iter()
                .map(|(target, combo)| {
                    let slots = combo.iter().map(|&k| layout.slot(&q, k)).collect::<Result<Vec<_>>>()?;
                    Ok(relational_fn(&layout.slot(&q, target)?, &slots)?.with_group(target))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((q, fs))
        }
    }
}

/// A reduced CSP and the run that produced it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub csp: Csp,
    pub trace: RunTrace<Value>,
}

impl Reduction {
    pub fn converged(&self) -> bool {
        self.trace.outcome == crate::engine::Outcome::Converged
    }
}

/// Reaches `goal` with the deterministic strategy.
pub fn achieve(p: &Csp, goal: &Goal, mode: Mode) -> Result<Reduction> {
    achieve_with(p, goal, &RunConfig::with_mode(mode), &mut Deterministic)
}

/// Reaches `goal` under an explicit run configuration and strategy.
/// Directional goals run their single ordered pass and ignore both mode and
/// strategy. Synthetic (completion) constraints that are no longer universal
/// in the result lose their synthetic flag.
pub fn achieve_with(p: &Csp, goal: &Goal, cfg: &RunConfig, strategy: &mut dyn Strategy) -> Result<Reduction> {
    let (q, fs) = goal_functions(p, goal)?;
    let layout = Layout::new(&q);
    let start = layout.encode(&q);
    let result = if goal.is_directional() {
        run_sequence(&fs, start, cfg)?
    } else {
        crate::engine::run(&fs, start, cfg, strategy)?
    };
    let mut csp = layout.decode(&q, &result.value)?;
    for c in csp.constraints.iter_mut().filter(|c| c.synthetic) {
        let full = universal_constraint(&csp.domains, c.scheme.clone())?;
        c.synthetic = c.tuples() == full.tuples();
    }
    restore_unchanged(p, &mut csp)?;
    Ok(Reduction { csp, trace: result.trace })
}

/// Domains and intensional constraints that the reduction left as they
/// were get their original (interval, linear) representation back.
fn restore_unchanged(p: &Csp, csp: &mut Csp) -> Result<()> {
    let finite = finite_form(p)?;
    for (i, d) in csp.domains.iter_mut().enumerate() {
        if *d == finite.domains[i] {
            *d = p.domains[i].clone();
        }
    }
    for c in csp.constraints.iter_mut() {
        let original = p.constraints.iter().zip(&finite.constraints).find(|(o, _)| o.id == c.id && o.scheme == c.scheme);
        if let Some((o, f)) = original {
            if !matches!(o.body, Body::Extensional(_)) && c.body == f.body {
                *c = o.clone();
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::int_domain;

    fn s(ix: &[usize]) -> Scheme {
        Scheme::from_one_based(ix).unwrap()
    }

    fn t(xs: &[i64]) -> Vec<Atom> {
        xs.iter().map(|&x| Atom::Int(x)).collect()
    }

    fn ext(id: &str, sch: &[usize], tuples: &[&[i64]]) -> Constraint {
        Constraint::extensional(id, s(sch), tuples.iter().map(|x| t(x)))
    }

    fn eq_neq() -> Csp {
        Csp::new(
            vec![int_domain([0, 1]), int_domain([0, 1])],
            vec![ext("eq", &[1, 2], &[&[0, 0], &[1, 1]]), ext("neq", &[1, 2], &[&[0, 1], &[1, 0]])],
        )
        .unwrap()
    }

    fn rho_example() -> Csp {
        Csp::new(
            vec![int_domain([0, 1]), int_domain([0, 1]), int_domain([0, 1])],
            vec![ext("c1", &[1, 2], &[&[0, 0], &[1, 1]]), ext("c2", &[2, 3], &[&[0, 1]])],
        )
        .unwrap()
    }

    #[test]
    fn goals_parse_and_print() {
        for g in ["arc", "path", "dir-arc:3,1,2", "dir-path:1,2", "rel:2"] {
            assert_eq!(g.parse::<Goal>().unwrap().to_string(), g);
        }
        assert_eq!("dir-arc:2,1".parse::<Goal>().unwrap(), Goal::DirectionalArc(vec![1, 0]));
        for bad in ["arcs", "rel:0", "rel:x", "dir-arc:0,1", "dir-arc"] {
            assert!(bad.parse::<Goal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn arc_consistency_examples() {
        assert!(is_arc_consistent(&eq_neq()).unwrap());
        assert!(is_arc_consistent(&Csp::new(vec![int_domain([1])], vec![]).unwrap()).unwrap());
        let p = Csp::new(vec![int_domain([1, 2]), int_domain([1])], vec![ext("c", &[1, 2], &[&[1, 1]])]).unwrap();
        assert!(!is_arc_consistent(&p).unwrap());
    }

    #[test]
    fn achieve_arc_examples() {
        let p = eq_neq();
        let r = achieve(&p, &Goal::Arc, Mode::Cii).unwrap();
        assert_eq!(r.csp, p);
        assert!(p.solutions().unwrap().is_empty());

        let p = Csp::new(vec![int_domain([1, 2, 3]), int_domain([1, 2])], vec![ext("c", &[1, 2], &[&[1, 1], &[2, 2]])])
            .unwrap();
        for mode in Mode::ALL {
            let r = achieve(&p, &Goal::Arc, mode).unwrap();
            assert_eq!(r.csp.domains, vec![int_domain([1, 2]), int_domain([1, 2])]);
            assert!(is_arc_consistent(&r.csp).unwrap());
        }
    }

    #[test]
    fn relational_checker_examples() {
        // constraints and domains equal to their solution projections
        let tight = Csp::new(
            vec![int_domain([0]), int_domain([0]), int_domain([1])],
            vec![ext("c1", &[1, 2], &[&[0, 0]]), ext("c2", &[2, 3], &[&[0, 1]])],
        )
        .unwrap();
        assert!(is_relationally_m_consistent(&tight, 1).unwrap());
        assert!(is_relationally_m_consistent(&tight, 2).unwrap());
        assert!(!is_relationally_m_consistent(&rho_example(), 2).unwrap());

        let empty = Csp::new(vec![int_domain([0, 1])], vec![ext("e", &[1], &[])]).unwrap();
        assert!(!is_relationally_m_consistent(&empty, 1).unwrap());
        // an empty constraint on the empty scheme leaves no consistent tuple at all
        let void = Csp::new(vec![int_domain([0, 1])], vec![Constraint::extensional("v", Scheme::default(), [])]).unwrap();
        assert!(is_relationally_m_consistent(&void, 1).unwrap());
    }

    #[test]
    fn relational_two_tightens_the_rho_example() {
        let p = rho_example();
        let r = achieve(&p, &Goal::Relational(2), Mode::Cii).unwrap();
        assert_eq!(r.csp.constraints[0].tuples().unwrap(), &[t(&[0, 0])].into_iter().collect());
        assert_eq!(r.csp.constraints[1].tuples().unwrap(), &[t(&[0, 1])].into_iter().collect());
        assert_eq!(r.csp.solutions().unwrap(), p.solutions().unwrap());
        // relational 1 cannot see across constraints
        let r1 = achieve(&p, &Goal::Relational(1), Mode::Cii).unwrap();
        assert_eq!(r1.csp.constraints[0].tuples().unwrap().len(), 2);
    }

    #[test]
    fn path_example_through_the_driver() {
        let p = Csp::new(
            vec![int_domain([0, 1]), int_domain([0, 1]), int_domain([0, 1])],
            vec![ext("x12", &[1, 2], &[&[0, 0], &[0, 1]]), ext("x13", &[1, 3], &[&[0, 1]]), ext("x32", &[3, 2], &[&[1, 1]])],
        )
        .unwrap();
        let r = achieve(&p, &Goal::Path, Mode::Cii).unwrap();
        assert_eq!(r.csp.constraints[0].tuples().unwrap(), &[t(&[0, 1])].into_iter().collect());
        assert_eq!(r.csp.solutions().unwrap(), p.solutions().unwrap());
        assert!(r.converged());
    }

    #[test]
    fn directional_arc_single_pass() {
        // x1 < x2 < x3 over {0,1,2}
        let lt: Vec<&[i64]> = vec![&[0, 1], &[0, 2], &[1, 2]];
        let p = Csp::new(
            vec![int_domain([0, 1, 2]), int_domain([0, 1, 2]), int_domain([0, 1, 2])],
            vec![ext("a", &[1, 2], &lt), ext("b", &[2, 3], &lt)],
        )
        .unwrap();
        let r = achieve(&p, &Goal::DirectionalArc(vec![0, 1, 2]), Mode::Ciq).unwrap();
        assert_eq!(r.trace.steps.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["pi1@b", "pi1@a"]);
        assert_eq!(r.csp.domains, vec![int_domain([0]), int_domain([0, 1]), int_domain([0, 1, 2])]);
        assert!(matches!(
            achieve(&p, &Goal::DirectionalArc(vec![0, 1]), Mode::Ci),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn merge_intersects_permuted_duplicates() {
        let p = Csp::new(
            vec![int_domain([0, 1]), int_domain([0, 1])],
            vec![ext("a", &[1, 2], &[&[0, 1], &[1, 1]]), ext("b", &[2, 1], &[&[1, 0]])],
        )
        .unwrap();
        let q = merge_duplicates(&p).unwrap();
        assert_eq!(q.constraints.len(), 1);
        assert_eq!(q.constraints[0].tuples().unwrap(), &[t(&[0, 1])].into_iter().collect());
    }
}
