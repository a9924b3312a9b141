//! The CSP data model: schemes, constraints, joins, projections and the
//! brute-force solution enumerator used as a test oracle throughout.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Atom, GridInterval, Lattice, PowersetValue, ProductValue, Tuple, Value};

/// Default cap on the number of candidate tuples the enumerators may visit.
pub const DEFAULT_SOLUTION_CAP: u128 = 1_000_000;

/// A sequence of distinct component indices (0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scheme(Vec<usize>);

impl Scheme {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &i in &indices {
            if !seen.insert(i) {
                return Err(Error::config(format!("index {} occurs twice in scheme", i + 1)));
            }
        }
        Ok(Scheme(indices))
    }

    /// Builds a scheme from 1-based indices, as written in files.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::config("scheme indices are 1-based"));
        }
        Scheme::new(indices.iter().map(|i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.iter().position(|&j| j == i)
    }

    /// Order-preserving containment.
    pub fn is_subsequence_of(&self, other: &Scheme) -> bool {
        let mut rest = other.0.iter();
        self.0.iter().all(|i| rest.any(|j| j == i))
    }

    /// Order-insensitive containment.
    pub fn is_within(&self, other: &Scheme) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, ")")
    }
}

/// `⟨s1,...,sk⟩`: concatenation after dropping from each `si` the indices
/// already present in an earlier scheme.
pub fn scheme_union<'a>(schemes: impl IntoIterator<Item = &'a Scheme>) -> Scheme {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in schemes {
        for &i in &s.0 {
            if seen.insert(i) {
                out.push(i);
            }
        }
    }
    Scheme(out)
}

/// A finite set of tuples over a scheme. Relational algebra lives here; the
/// constraint types wrap it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub scheme: Scheme,
    pub tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new(scheme: Scheme, tuples: BTreeSet<Tuple>) -> Self {
        Relation { scheme, tuples }
    }

    /// The one-tuple relation over the empty scheme, the unit of `⋈`.
    pub fn unit() -> Self {
        Relation { scheme: Scheme::default(), tuples: [Vec::new()].into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Natural join; the result scheme is `⟨self.scheme, other.scheme⟩`.
    pub fn join(&self, other: &Relation) -> Relation {
        let scheme = scheme_union([&self.scheme, &other.scheme]);
        let shared: Vec<(usize, usize)> = other
            .scheme
            .0
            .iter()
            .enumerate()
            .filter_map(|(ob, i)| self.scheme.position(*i).map(|sa| (sa, ob)))
            .collect();
        let extra: Vec<usize> =
            (0..other.scheme.len()).filter(|ob| !shared.iter().any(|(_, b)| b == ob)).collect();

        let mut index: HashMap<Vec<&Atom>, Vec<&Tuple>> = HashMap::new();
        for t in &other.tuples {
            index.entry(shared.iter().map(|&(_, b)| &t[b]).collect()).or_default().push(t);
        }
        let mut tuples = BTreeSet::new();
        for a in &self.tuples {
            let key: Vec<&Atom> = shared.iter().map(|&(sa, _)| &a[sa]).collect();
            if let Some(matches) = index.get(&key) {
                for b in matches {
                    let mut t = a.clone();
                    t.extend(extra.iter().map(|&k| b[k].clone()));
                    tuples.insert(t);
                }
            }
        }
        Relation { scheme, tuples }
    }

    /// `{ d[s] | d ∈ self }` for any `s` whose indices all occur in the scheme.
    pub fn restrict(&self, s: &Scheme) -> Result<Relation> {
        let pos = s
            .0
            .iter()
            .map(|i| {
                self.scheme.position(*i).ok_or_else(|| {
                    Error::Argument(format!("index {} is not in scheme {:?}", i + 1, self.scheme))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let tuples = self.tuples.iter().map(|t| pos.iter().map(|&p| t[p].clone()).collect()).collect();
        Ok(Relation { scheme: s.clone(), tuples })
    }

    /// Keeps the tuples whose every coordinate lies in the matching domain.
    pub fn within(&self, domains: &[Value]) -> Relation {
        let tuples = self
            .tuples
            .iter()
            .filter(|t| t.iter().zip(&self.scheme.0).all(|(a, &i)| domains[i].admits(a)))
            .cloned()
            .collect();
        Relation { scheme: self.scheme.clone(), tuples }
    }
}

/// Join of a sequence of relations; the unit relation when empty.
pub fn join_all<'a>(rels: impl IntoIterator<Item = &'a Relation>) -> Relation {
    let mut it = rels.into_iter();
    match it.next() {
        None => Relation::unit(),
        Some(first) => it.fold(first.clone(), |acc, r| acc.join(r)),
    }
}

/// `∑ coeffs[k] * x_{scheme[k]}` compared against `rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl LinearForm {
    fn lhs(&self, values: &[Atom]) -> Option<i128> {
        let mut sum = 0i128;
        for (c, a) in self.coeffs.iter().zip(values) {
            sum += *c as i128 * a.as_int()? as i128;
        }
        Some(sum)
    }
}

/// An integer linear inequality `∑ terms[i] * x_i <= rhs` keyed by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearIneq {
    pub terms: BTreeMap<usize, i64>,
    pub rhs: i64,
}

impl LinearIneq {
    pub fn new(terms: impl IntoIterator<Item = (usize, i64)>, rhs: i64) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in terms {
            *map.entry(v).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        LinearIneq { terms: map, rhs }
    }

    /// `0 <= rhs` with `rhs >= 0`.
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty() && self.rhs >= 0
    }

    pub fn holds(&self, assignment: impl Fn(usize) -> Option<i64>) -> Option<bool> {
        let mut sum = 0i128;
        for (&v, &c) in &self.terms {
            sum += c as i128 * assignment(v)? as i128;
        }
        Some(sum <= self.rhs as i128)
    }

    pub fn into_constraint(self, id: impl Into<String>) -> Constraint {
        let scheme = Scheme(self.terms.keys().copied().collect());
        let coeffs = self.terms.values().copied().collect();
        Constraint::new(id, scheme, Body::LinearLeq(LinearForm { coeffs, rhs: self.rhs }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Extensional(BTreeSet<Tuple>),
    LinearEq(LinearForm),
    LinearLeq(LinearForm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub id: String,
    pub scheme: Scheme,
    pub body: Body,
    /// Completion artifacts (universal constraints) that serializers may omit.
    pub synthetic: bool,
}

impl Constraint {
    pub fn new(id: impl Into<String>, scheme: Scheme, body: Body) -> Self {
        Constraint { id: id.into(), scheme, body, synthetic: false }
    }

    pub fn extensional(id: impl Into<String>, scheme: Scheme, tuples: impl IntoIterator<Item = Tuple>) -> Self {
        Constraint::new(id, scheme, Body::Extensional(tuples.into_iter().collect()))
    }

    pub fn from_relation(id: impl Into<String>, r: Relation) -> Self {
        Constraint::new(id, r.scheme, Body::Extensional(r.tuples))
    }

    pub fn tuples(&self) -> Option<&BTreeSet<Tuple>> {
        match &self.body {
            Body::Extensional(t) => Some(t),
            _ => None,
        }
    }

    pub fn relation(&self) -> Result<Relation> {
        match &self.body {
            Body::Extensional(t) => Ok(Relation::new(self.scheme.clone(), t.clone())),
            _ => Err(Error::config(format!("constraint `{}` is not extensional", self.id))),
        }
    }

    /// Whether `values` (the tuple `d[s]` for this constraint's scheme) satisfies it.
    pub fn satisfied_by(&self, values: &[Atom]) -> bool {
        match &self.body {
            Body::Extensional(t) => t.contains(values),
            Body::LinearEq(f) => f.lhs(values) == Some(f.rhs as i128),
            Body::LinearLeq(f) => f.lhs(values).is_some_and(|l| l <= f.rhs as i128),
        }
    }

    /// The inequality, when the body is `leq`.
    pub fn as_ineq(&self) -> Option<LinearIneq> {
        match &self.body {
            Body::LinearLeq(f) => Some(LinearIneq::new(
                self.scheme.0.iter().copied().zip(f.coeffs.iter().copied()),
                f.rhs,
            )),
            _ => None,
        }
    }

    /// The tuple set denoted within `domains` (`C ∩ D` for extensional bodies,
    /// enumeration for linear ones).
    pub fn materialize(&self, domains: &[Value], cap: u128) -> Result<Relation> {
        match &self.body {
            Body::Extensional(t) => Ok(Relation::new(self.scheme.clone(), t.clone()).within(domains)),
            _ => {
                let doms: Vec<&Value> = self.scheme.0.iter().map(|&i| &domains[i]).collect();
                let mut tuples = BTreeSet::new();
                for_each_tuple(&doms, cap, |t| {
                    if self.satisfied_by(t) {
                        tuples.insert(t.to_vec());
                    }
                })?;
                Ok(Relation::new(self.scheme.clone(), tuples))
            }
        }
    }
}

/// `C1 ⋈ ... ⋈ Ck` for extensional constraints.
pub fn join_constraints(cs: &[Constraint]) -> Result<Constraint> {
    let rels = cs.iter().map(Constraint::relation).collect::<Result<Vec<_>>>()?;
    let id = cs.iter().map(|c| c.id.as_str()).collect::<Vec<_>>().join("*");
    Ok(Constraint::from_relation(id, join_all(&rels)))
}

/// `Π_s(C)`; `s` must be a subsequence of the constraint's scheme.
pub fn project(c: &Constraint, s: &Scheme) -> Result<Constraint> {
    if !s.is_subsequence_of(&c.scheme) {
        return Err(Error::Argument(format!(
            "{s:?} is not a subsequence of the scheme {:?} of `{}`",
            c.scheme, c.id
        )));
    }
    Ok(Constraint::from_relation(c.id.clone(), c.relation()?.restrict(s)?))
}

/// Enumerable members of a domain component.
pub fn domain_members(d: &Value) -> Result<Vec<Atom>> {
    match d {
        Value::Set(s) => Ok(s.elements().iter().cloned().collect()),
        Value::Interval(i) => i
            .integers()
            .map(|it| it.map(Atom::Int).collect())
            .ok_or_else(|| Error::Unsupported("cannot enumerate a real interval".into())),
        other => Err(Error::config(format!("{} is not a domain", other.kind()))),
    }
}

fn domain_size(d: &Value) -> Result<u128> {
    match d {
        Value::Set(s) => Ok(s.len() as u128),
        Value::Interval(i) => match (i.is_integer(), i.span()) {
            (true, Some((l, h))) => Ok((h as i128 - l as i128 + 1) as u128),
            (true, None) => Ok(0),
            _ => Err(Error::Unsupported("cannot enumerate a real interval".into())),
        },
        other => Err(Error::config(format!("{} is not a domain", other.kind()))),
    }
}

fn check_cap(doms: &[&Value], cap: u128) -> Result<()> {
    let mut total: u128 = 1;
    for d in doms {
        total = total.saturating_mul(domain_size(d)?);
    }
    if total > cap {
        return Err(Error::Resource(format!("{total} candidate tuples exceed the cap of {cap}")));
    }
    Ok(())
}

fn for_each_tuple(doms: &[&Value], cap: u128, mut f: impl FnMut(&[Atom])) -> Result<()> {
    check_cap(doms, cap)?;
    let members = doms.iter().map(|d| domain_members(d)).collect::<Result<Vec<_>>>()?;
    if members.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut idx = vec![0usize; members.len()];
    let mut t: Vec<Atom> = members.iter().map(|m| m[0].clone()).collect();
    loop {
        f(&t);
        let mut k = members.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < members[k].len() {
                t[k] = members[k][idx[k]].clone();
                break;
            }
            idx[k] = 0;
            t[k] = members[k][0].clone();
        }
    }
}

/// A constraint-satisfaction problem `⟨D1,...,Dn; C⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csp {
    pub domains: Vec<Value>,
    pub constraints: Vec<Constraint>,
}

/// A well-formedness problem, located by constraint id when it has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub constraint: Option<String>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constraint {
            Some(c) => write!(f, "constraint `{c}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl Csp {
    pub fn new(domains: Vec<Value>, constraints: Vec<Constraint>) -> Result<Self> {
        let csp = Csp { domains, constraints };
        if let Some(issue) = csp.issues().into_iter().next() {
            return Err(Error::Data(issue.to_string()));
        }
        Ok(csp)
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn constraint(&self, id: &str) -> Option<(usize, &Constraint)> {
        self.constraints.iter().enumerate().find(|(_, c)| c.id == id)
    }

    /// Every well-formedness violation.
    pub fn issues(&self) -> Vec<Issue> {
        let mut out = Vec::new();
        for (i, d) in self.domains.iter().enumerate() {
            if !matches!(d, Value::Set(_) | Value::Interval(_)) {
                out.push(Issue { constraint: None, message: format!("domain {} is a {}", i + 1, d.kind()) });
            }
        }
        let mut ids = BTreeSet::new();
        for c in &self.constraints {
            let mut push = |m: String| out.push(Issue { constraint: Some(c.id.clone()), message: m });
            if !ids.insert(c.id.as_str()) {
                push("duplicate constraint id".into());
            }
            if let Some(&bad) = c.scheme.0.iter().find(|&&i| i >= self.domains.len()) {
                push(format!("scheme index {} exceeds the {} domains", bad + 1, self.domains.len()));
                continue;
            }
            match &c.body {
                Body::Extensional(tuples) => {
                    for t in tuples {
                        if t.len() != c.scheme.len() {
                            push(format!("tuple of length {} on a scheme of length {}", t.len(), c.scheme.len()));
                            continue;
                        }
                        for (a, &i) in t.iter().zip(&c.scheme.0) {
                            if !self.domains[i].admits(a) {
                                push(format!("value {a} lies outside domain {}", i + 1));
                            }
                        }
                    }
                }
                Body::LinearEq(f) | Body::LinearLeq(f) => {
                    if f.coeffs.len() != c.scheme.len() {
                        push(format!("{} coefficients on a scheme of length {}", f.coeffs.len(), c.scheme.len()));
                    }
                    if f.coeffs.contains(&0) {
                        push("zero coefficient in a linear body".into());
                    }
                }
            }
        }
        out
    }

    /// The least element of the domain product: the declared domains.
    pub fn bottom(&self) -> ProductValue<Value> {
        ProductValue(self.domains.clone())
    }

    /// The CSP determined by this one and the domains `ds`: every extensional
    /// constraint is restricted to the new domains.
    pub fn with_domains(&self, ds: Vec<Value>) -> Csp {
        let constraints = self
            .constraints
            .iter()
            .map(|c| match &c.body {
                Body::Extensional(_) => {
                    let r = c.relation().expect("extensional").within(&ds);
                    Constraint { body: Body::Extensional(r.tuples), ..c.clone() }
                }
                _ => c.clone(),
            })
            .collect();
        Csp { domains: ds, constraints }
    }

    /// Every tuple of `D1 × ... × Dn` satisfying all constraints, enumerated
    /// directly with early pruning.
    pub fn solutions(&self) -> Result<BTreeSet<Tuple>> {
        self.solutions_with_cap(DEFAULT_SOLUTION_CAP)
    }

    pub fn solutions_with_cap(&self, cap: u128) -> Result<BTreeSet<Tuple>> {
        let doms: Vec<&Value> = self.domains.iter().collect();
        check_cap(&doms, cap)?;
        let members = doms.iter().map(|d| domain_members(d)).collect::<Result<Vec<_>>>()?;
        // constraints checkable once variable k is assigned
        let mut ready: Vec<Vec<&Constraint>> = vec![Vec::new(); self.arity() + 1];
        for c in &self.constraints {
            let slot = c.scheme.max_index().map_or(0, |m| m + 1);
            ready[slot].push(c);
        }
        let mut out = BTreeSet::new();
        if ready[0].iter().any(|c| !c.satisfied_by(&[])) {
            return Ok(out);
        }
        let mut partial = Vec::with_capacity(self.arity());
        extend_solutions(&members, &ready, &mut partial, &mut out);
        Ok(out)
    }

    /// `Sol = C1 ⋈ ... ⋈ Ck ⋈_{i ∈ I} Di`, the join route to the same set.
    pub fn solutions_by_join(&self) -> Result<BTreeSet<Tuple>> {
        self.solutions_by_join_with_cap(DEFAULT_SOLUTION_CAP)
    }

    pub fn solutions_by_join_with_cap(&self, cap: u128) -> Result<BTreeSet<Tuple>> {
        let mut rels = self
            .constraints
            .iter()
            .map(|c| c.materialize(&self.domains, cap))
            .collect::<Result<Vec<_>>>()?;
        let covered = scheme_union(self.constraints.iter().map(|c| &c.scheme));
        for i in 0..self.arity() {
            if !covered.contains(i) {
                let tuples = domain_members(&self.domains[i])?.into_iter().map(|a| vec![a]).collect();
                rels.push(Relation::new(Scheme(vec![i]), tuples));
            }
        }
        let all = join_all(&rels);
        let full = Scheme((0..self.arity()).collect());
        Ok(all.restrict(&full)?.tuples)
    }

    /// Whether both CSPs have the same solution set.
    pub fn equivalent(&self, other: &Csp) -> Result<bool> {
        if self.arity() != other.arity() {
            return Err(Error::Argument(format!(
                "arity {} differs from arity {}",
                self.arity(),
                other.arity()
            )));
        }
        Ok(self.solutions()? == other.solutions()?)
    }
}

fn extend_solutions(
    members: &[Vec<Atom>],
    ready: &[Vec<&Constraint>],
    partial: &mut Vec<Atom>,
    out: &mut BTreeSet<Tuple>,
) {
    let k = partial.len();
    if k == members.len() {
        out.insert(partial.clone());
        return;
    }
    for a in &members[k] {
        partial.push(a.clone());
        let ok = ready[k + 1].iter().all(|c| {
            let vals: Vec<Atom> = c.scheme.0.iter().map(|&i| partial[i].clone()).collect();
            c.satisfied_by(&vals)
        });
        if ok {
            extend_solutions(members, ready, partial, out);
        }
        partial.pop();
    }
}

/// `equivalent` as a free function.
pub fn equivalent(p: &Csp, q: &Csp) -> Result<bool> {
    p.equivalent(q)
}

/// Intersection of two domain components of the same kind.
pub fn intersect_domains(a: &Value, b: &Value) -> Result<Value> {
    a.try_join(b)
}

/// The domain `{0..n-1}` as a set component; handy in tests and generators.
pub fn int_domain(values: impl IntoIterator<Item = i64>) -> Value {
    Value::Set(values.into_iter().map(Atom::Int).collect::<PowersetValue<Atom>>())
}

/// The integer interval domain `[lo..hi]`.
pub fn interval_domain(lo: i64, hi: i64) -> Result<Value> {
    Ok(Value::Interval(GridInterval::integer(lo, hi)?))
}
