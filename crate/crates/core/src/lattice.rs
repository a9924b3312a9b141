//! Component orders and their Cartesian products.
//!
//! All shipped components are families of subsets ordered by inverse
//! inclusion: `x ⊑ y` iff `x ⊇ y`, the join is intersection and the least
//! element is the full base set. A component "grows" in the order while the
//! set it denotes shrinks, which is what the propagation engine relies on.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use ordered_float::OrderedFloat;
use rand::Rng;

use crate::csp::LinearIneq;
use crate::error::{Error, Result};

/// A partial order with binary joins and a least element (supplied by the
/// base set of each component, not by the trait).
pub trait Lattice: Clone + PartialEq + fmt::Debug {
    fn try_leq(&self, other: &Self) -> Result<bool>;

    fn try_join(&self, other: &Self) -> Result<Self>;

    /// Greatest element of the component, if it has one. For families of
    /// subsets this is the empty set.
    fn is_top(&self) -> bool {
        false
    }

    /// Whether every increasing chain through this component stabilizes.
    fn finite_chains(&self) -> bool {
        true
    }

    fn leq(&self, other: &Self) -> bool {
        self.try_leq(other).unwrap_or(false)
    }
}

/// Random elements above a given one, used by the registration probes and
/// the property tests.
pub trait Sample: Lattice {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self;
}

/// An opaque domain element. The derived order only serves canonical output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Int(i64),
    Real(OrderedFloat<f64>),
    Sym(String),
}

pub type Tuple = Vec<Atom>;

impl Atom {
    pub fn real(x: f64) -> Atom {
        Atom::Real(OrderedFloat(x))
    }

    pub fn sym(s: impl Into<String>) -> Atom {
        Atom::Sym(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Atom::Int(i) => Some(*i as f64),
            Atom::Real(x) => Some(x.0),
            Atom::Sym(_) => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Atom::Int(i) => Some(*i),
            _ => None,
        }
    }
}

impl From<i64> for Atom {
    fn from(i: i64) -> Self {
        Atom::Int(i)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(i) => write!(f, "{i}"),
            Atom::Real(x) => write!(f, "{}", fmt_real(x.0)),
            Atom::Sym(s) => f.write_str(s),
        }
    }
}

pub(crate) fn fmt_real(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        // `{:?}` keeps a decimal point so the value re-parses as a real
        format!("{x:?}")
    }
}

/// Element of a powerset component: a finite set, ordered by inverse inclusion.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowersetValue<T: Ord>(BTreeSet<T>);

impl<T: Ord + Clone> PowersetValue<T> {
    pub fn new(elements: BTreeSet<T>) -> Self {
        PowersetValue(elements)
    }

    pub fn empty() -> Self {
        PowersetValue(BTreeSet::new())
    }

    pub fn elements(&self) -> &BTreeSet<T> {
        &self.0
    }

    pub fn into_elements(self) -> BTreeSet<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.0.contains(x)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        PowersetValue(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl<T: Ord + Clone> FromIterator<T> for PowersetValue<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        PowersetValue(iter.into_iter().collect())
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for PowersetValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<T: Ord + Clone + fmt::Debug> Lattice for PowersetValue<T> {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        Ok(other.0.is_subset(&self.0))
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        Ok(self.intersect(other))
    }

    fn is_top(&self) -> bool {
        self.0.is_empty()
    }
}

impl<T: Ord + Clone + fmt::Debug> Sample for PowersetValue<T> {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let keep = rng.gen_range(0.3..1.0);
        self.0.iter().filter(|_| rng.gen_bool(keep)).cloned().collect()
    }
}

/// The finite bound set `F` of an interval family. Bounds are addressed by
/// integer positions: the integers themselves for [`Grid::Int`], indices into
/// the sorted point list for [`Grid::Points`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Grid {
    /// Every integer in `[min..max]` is a bound.
    Int { min: i64, max: i64 },
    /// An explicit sorted set of bounds, typically including `±inf`.
    Points(Arc<[OrderedFloat<f64>]>),
}

impl Grid {
    pub fn integers(min: i64, max: i64) -> Result<Grid> {
        if min > max {
            return Err(Error::config(format!("integer grid [{min}..{max}] has no points")));
        }
        Ok(Grid::Int { min, max })
    }

    pub fn points(points: impl IntoIterator<Item = f64>) -> Result<Grid> {
        let mut pts: Vec<OrderedFloat<f64>> = Vec::new();
        for p in points {
            if p.is_nan() {
                return Err(Error::config("grid point is NaN"));
            }
            pts.push(OrderedFloat(p));
        }
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Err(Error::config("grid has no points"));
        }
        Ok(Grid::Points(pts.into()))
    }

    fn position_range(&self) -> (i64, i64) {
        match self {
            Grid::Int { min, max } => (*min, *max),
            Grid::Points(p) => (0, p.len() as i64 - 1),
        }
    }

    pub fn value_at(&self, pos: i64) -> f64 {
        match self {
            Grid::Int { .. } => pos as f64,
            Grid::Points(p) => p[pos as usize].0,
        }
    }

    pub fn contains_value(&self, x: f64) -> bool {
        let (lo, hi) = self.position_range();
        self.value_at(lo) <= x && x <= self.value_at(hi)
    }

    /// Greatest bound `≤ x`.
    fn floor_pos(&self, x: f64) -> Option<i64> {
        match self {
            Grid::Int { min, max } => {
                let f = x.floor();
                if f < *min as f64 {
                    None
                } else if f >= *max as f64 {
                    Some(*max)
                } else {
                    Some(f as i64)
                }
            }
            Grid::Points(p) => {
                let n = p.partition_point(|q| q.0 <= x);
                (n > 0).then(|| n as i64 - 1)
            }
        }
    }

    /// Least bound `≥ x`.
    fn ceil_pos(&self, x: f64) -> Option<i64> {
        match self {
            Grid::Int { min, max } => {
                let c = x.ceil();
                if c > *max as f64 {
                    None
                } else if c <= *min as f64 {
                    Some(*min)
                } else {
                    Some(c as i64)
                }
            }
            Grid::Points(p) => {
                let n = p.partition_point(|q| q.0 < x);
                (n < p.len()).then_some(n as i64)
            }
        }
    }
}

/// An interval `[lo..hi]` with both bounds on a [`Grid`]. All empty intervals
/// share the representation `span == None`, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridInterval {
    grid: Grid,
    span: Option<(i64, i64)>,
}

impl GridInterval {
    pub fn full(grid: Grid) -> Self {
        let span = Some(grid.position_range());
        GridInterval { grid, span }
    }

    pub fn empty(grid: Grid) -> Self {
        GridInterval { grid, span: None }
    }

    /// Integer interval `[lo..hi]` whose grid is the interval itself.
    pub fn integer(lo: i64, hi: i64) -> Result<Self> {
        Ok(GridInterval::full(Grid::integers(lo, hi)?))
    }

    /// Interval between two grid positions; `hi < lo` yields the empty interval.
    pub fn new(grid: Grid, lo: i64, hi: i64) -> Result<Self> {
        let (min, max) = grid.position_range();
        if hi < lo {
            return Ok(GridInterval::empty(grid));
        }
        if lo < min || hi > max {
            return Err(Error::config(format!(
                "bounds {lo}..{hi} lie outside the grid positions {min}..{max}"
            )));
        }
        Ok(GridInterval { grid, span: Some((lo, hi)) })
    }

    /// Same grid, new bounds. Bounds outside the grid are an error.
    pub fn with_bounds(&self, lo: i64, hi: i64) -> Result<Self> {
        GridInterval::new(self.grid.clone(), lo, hi)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn span(&self) -> Option<(i64, i64)> {
        self.span
    }

    pub fn is_empty(&self) -> bool {
        self.span.is_none()
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.grid, Grid::Int { .. })
    }

    pub fn bounds_f64(&self) -> Option<(f64, f64)> {
        self.span.map(|(l, h)| (self.grid.value_at(l), self.grid.value_at(h)))
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.bounds_f64().is_some_and(|(l, h)| l <= x && x <= h)
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        match (a, &self.grid, self.span) {
            (Atom::Int(i), Grid::Int { .. }, Some((l, h))) => l <= *i && *i <= h,
            _ => a.as_f64().is_some_and(|x| self.contains_f64(x)),
        }
    }

    /// Integer members, when the interval lives on an integer grid.
    pub fn integers(&self) -> Option<impl Iterator<Item = i64>> {
        match &self.grid {
            Grid::Int { .. } => Some(self.span.into_iter().flat_map(|(l, h)| l..=h)),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &GridInterval) -> Result<GridInterval> {
        interval_intersect(self, other)
    }
}

impl fmt::Debug for GridInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GridInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.grid, self.span) {
            (_, None) => f.write_str("empty"),
            (Grid::Int { .. }, Some((l, h))) => write!(f, "[{l}..{h}]"),
            (Grid::Points(_), Some((l, h))) => write!(
                f,
                "[{}..{}]",
                fmt_real(self.grid.value_at(l)),
                fmt_real(self.grid.value_at(h))
            ),
        }
    }
}

/// `[a,b] ∩ [c,d] = [max(a,c), min(b,d)]`, normalized to the empty interval.
pub fn interval_intersect(a: &GridInterval, b: &GridInterval) -> Result<GridInterval> {
    if a.grid != b.grid {
        return Err(Error::config("cannot intersect intervals over different grids"));
    }
    let span = match (a.span, b.span) {
        (Some((al, ah)), Some((bl, bh))) => {
            let (lo, hi) = (al.max(bl), ah.min(bh));
            (lo <= hi).then_some((lo, hi))
        }
        _ => None,
    };
    Ok(GridInterval { grid: a.grid.clone(), span })
}

/// The smallest interval with bounds in `grid` containing every point of `xs`.
pub fn interval_hull(xs: &[f64], grid: &Grid) -> Result<GridInterval> {
    if xs.is_empty() {
        return Ok(GridInterval::empty(grid.clone()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        if x.is_nan() || !grid.contains_value(x) {
            return Err(Error::Data(format!("point {x} lies outside the grid range")));
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let l = grid.floor_pos(lo).expect("point within grid range");
    let h = grid.ceil_pos(hi).expect("point within grid range");
    GridInterval::new(grid.clone(), l, h)
}

impl Lattice for GridInterval {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        if self.grid != other.grid {
            return Err(Error::config("cannot compare intervals over different grids"));
        }
        Ok(match (self.span, other.span) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((al, ah)), Some((bl, bh))) => al <= bl && bh <= ah,
        })
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        interval_intersect(self, other)
    }

    fn is_top(&self) -> bool {
        self.is_empty()
    }
}

impl Sample for GridInterval {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        match self.span {
            Some((l, h)) if !rng.gen_bool(0.05) => {
                let a = rng.gen_range(l..=h);
                let b = rng.gen_range(l..=h);
                GridInterval { grid: self.grid.clone(), span: Some((a.min(b), a.max(b))) }
            }
            _ => GridInterval::empty(self.grid.clone()),
        }
    }
}

/// A set of integer linear inequalities. Larger in the order means more
/// inequalities, i.e. a smaller solution set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IneqSystem(BTreeSet<LinearIneq>);

impl IneqSystem {
    pub fn new(ineqs: impl IntoIterator<Item = LinearIneq>) -> Self {
        IneqSystem(ineqs.into_iter().collect())
    }

    pub fn inequalities(&self) -> &BTreeSet<LinearIneq> {
        &self.0
    }

    pub fn contains(&self, ineq: &LinearIneq) -> bool {
        self.0.contains(ineq)
    }

    pub fn with(&self, ineq: LinearIneq) -> Self {
        let mut s = self.0.clone();
        s.insert(ineq);
        IneqSystem(s)
    }
}

impl Lattice for IneqSystem {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        Ok(self.0.is_subset(&other.0))
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        Ok(IneqSystem(self.0.union(&other.0).cloned().collect()))
    }

    fn finite_chains(&self) -> bool {
        false
    }
}

impl Sample for IneqSystem {
    fn sample_above<R: Rng + ?Sized>(&self, _rng: &mut R) -> Self {
        self.clone()
    }
}

/// A component of a propagation state. Domain components are sets or
/// intervals; constraint components are tuple sets or inequality systems.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Set(PowersetValue<Atom>),
    Interval(GridInterval),
    Relation(PowersetValue<Tuple>),
    System(IneqSystem),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Set(_) => "set",
            Value::Interval(_) => "interval",
            Value::Relation(_) => "relation",
            Value::System(_) => "inequality system",
        }
    }

    pub fn as_set(&self) -> Result<&PowersetValue<Atom>> {
        match self {
            Value::Set(s) => Ok(s),
            other => Err(Error::config(format!("expected a set component, found {}", other.kind()))),
        }
    }

    pub fn as_interval(&self) -> Result<&GridInterval> {
        match self {
            Value::Interval(i) => Ok(i),
            other => Err(Error::config(format!(
                "expected an interval component, found {}",
                other.kind()
            ))),
        }
    }

    pub fn as_relation(&self) -> Result<&PowersetValue<Tuple>> {
        match self {
            Value::Relation(r) => Ok(r),
            other => Err(Error::config(format!(
                "expected a relation component, found {}",
                other.kind()
            ))),
        }
    }

    pub fn as_system(&self) -> Result<&IneqSystem> {
        match self {
            Value::System(s) => Ok(s),
            other => Err(Error::config(format!(
                "expected an inequality-system component, found {}",
                other.kind()
            ))),
        }
    }

    /// Whether a domain element lies in this (domain) component.
    pub fn admits(&self, a: &Atom) -> bool {
        match self {
            Value::Set(s) => s.contains(a),
            Value::Interval(i) => i.contains_atom(a),
            _ => false,
        }
    }

    pub fn set(atoms: impl IntoIterator<Item = Atom>) -> Value {
        Value::Set(atoms.into_iter().collect())
    }

    pub fn int_set(xs: impl IntoIterator<Item = i64>) -> Value {
        Value::Set(xs.into_iter().map(Atom::Int).collect())
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Set(s) => s.fmt(f),
            Value::Interval(i) => write!(f, "{i}"),
            Value::Relation(r) => r.fmt(f),
            Value::System(s) => s.fmt(f),
        }
    }
}

impl Lattice for Value {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (Value::Set(a), Value::Set(b)) => a.try_leq(b),
            (Value::Interval(a), Value::Interval(b)) => a.try_leq(b),
            (Value::Relation(a), Value::Relation(b)) => a.try_leq(b),
            (Value::System(a), Value::System(b)) => a.try_leq(b),
            (a, b) => Err(Error::config(format!("cannot compare {} with {}", a.kind(), b.kind()))),
        }
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (Value::Set(a), Value::Set(b)) => Value::Set(a.try_join(b)?),
            (Value::Interval(a), Value::Interval(b)) => Value::Interval(a.try_join(b)?),
            (Value::Relation(a), Value::Relation(b)) => Value::Relation(a.try_join(b)?),
            (Value::System(a), Value::System(b)) => Value::System(a.try_join(b)?),
            (a, b) => {
                return Err(Error::config(format!("cannot join {} with {}", a.kind(), b.kind())))
            }
        })
    }

    fn is_top(&self) -> bool {
        match self {
            Value::Set(s) => s.is_top(),
            Value::Interval(i) => i.is_top(),
            Value::Relation(r) => r.is_top(),
            Value::System(_) => false,
        }
    }

    fn finite_chains(&self) -> bool {
        !matches!(self, Value::System(_))
    }
}

impl Sample for Value {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        match self {
            Value::Set(s) => Value::Set(s.sample_above(rng)),
            Value::Interval(i) => Value::Interval(i.sample_above(rng)),
            Value::Relation(r) => Value::Relation(r.sample_above(rng)),
            Value::System(s) => Value::System(s.sample_above(rng)),
        }
    }
}

/// A tuple of component values, ordered and joined componentwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProductValue<V>(pub Vec<V>);

impl<V> ProductValue<V> {
    pub fn new(components: Vec<V>) -> Self {
        ProductValue(components)
    }

    pub fn components(&self) -> &[V] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn into_components(self) -> Vec<V> {
        self.0
    }
}

impl<V> std::ops::Index<usize> for ProductValue<V> {
    type Output = V;
    fn index(&self, i: usize) -> &V {
        &self.0[i]
    }
}

impl<V: fmt::Debug> fmt::Debug for ProductValue<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("").field(&self.0).finish()
    }
}

impl<V: Lattice> Lattice for ProductValue<V> {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        if self.0.len() != other.0.len() {
            return Err(Error::config("product arity mismatch"));
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.try_leq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        if self.0.len() != other.0.len() {
            return Err(Error::config("product arity mismatch"));
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.try_join(b)).collect::<Result<_>>().map(ProductValue)
    }

    fn is_top(&self) -> bool {
        self.0.iter().any(Lattice::is_top)
    }

    fn finite_chains(&self) -> bool {
        self.0.iter().all(Lattice::finite_chains)
    }
}

impl<V: Sample> Sample for ProductValue<V> {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        ProductValue(self.0.iter().map(|v| v.sample_above(rng)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(lo: i64, hi: i64, grid: &Grid) -> GridInterval {
        GridInterval::new(grid.clone(), lo, hi).unwrap()
    }

    fn members(i: &GridInterval) -> BTreeSet<i64> {
        i.integers().unwrap().collect()
    }

    #[test]
    fn intersect_examples() {
        let g = Grid::integers(-10, 10).unwrap();
        let r = interval_intersect(&int(3, 9, &g), &int(1, 4, &g)).unwrap();
        assert_eq!(r, int(3, 4, &g));
        // membership oracle
        let expect: BTreeSet<i64> = members(&int(3, 9, &g)).intersection(&members(&int(1, 4, &g))).copied().collect();
        assert_eq!(members(&r), expect);

        let full = GridInterval::full(g.clone());
        assert_eq!(interval_intersect(&int(2, 5, &g), &full).unwrap(), int(2, 5, &g));
        let e = interval_intersect(&int(0, 1, &g), &int(2, 3, &g)).unwrap();
        assert!(e.is_empty());
        assert_eq!(e, GridInterval::empty(g.clone()));
        assert_eq!(e, int(5, 2, &g));
    }

    #[test]
    fn intersect_rejects_grid_mismatch() {
        let a = GridInterval::integer(0, 5).unwrap();
        let b = GridInterval::integer(0, 6).unwrap();
        assert!(matches!(interval_intersect(&a, &b), Err(Error::Config(_))));
    }

    #[test]
    fn hull_examples() {
        let inf = f64::INFINITY;
        let g = Grid::points([-inf, 0.0, 1.0, 2.0, inf]).unwrap();
        let h = interval_hull(&[0.5, 1.5], &g).unwrap();
        assert_eq!(h.bounds_f64(), Some((0.0, 2.0)));
        assert!(interval_hull(&[], &g).unwrap().is_empty());
        assert_eq!(interval_hull(&[1.0], &g).unwrap().bounds_f64(), Some((1.0, 1.0)));
        // beyond the finite points, only the infinite bounds remain
        assert_eq!(interval_hull(&[7.0], &g).unwrap().bounds_f64(), Some((2.0, inf)));

        let bounded = Grid::points([0.0, 1.0]).unwrap();
        assert!(matches!(interval_hull(&[3.0], &bounded), Err(Error::Data(_))));
    }

    #[test]
    fn hull_on_integer_grid() {
        let g = Grid::integers(0, 10).unwrap();
        let h = interval_hull(&[2.5, 4.0], &g).unwrap();
        assert_eq!(h.span(), Some((2, 4)));
    }

    #[test]
    fn powerset_join_and_bottom() {
        let a: PowersetValue<i32> = [1, 2].into_iter().collect();
        let b: PowersetValue<i32> = [2, 3].into_iter().collect();
        let bottom: PowersetValue<i32> = [1, 2, 3].into_iter().collect();
        assert_eq!(a.try_join(&b).unwrap(), [2].into_iter().collect());
        for x in [&a, &b, &bottom] {
            assert!(bottom.leq(x));
        }
        assert!(!a.leq(&b));
    }

    #[test]
    fn product_join_is_componentwise() {
        let g = Grid::integers(0, 9).unwrap();
        let x = ProductValue(vec![Value::int_set([1, 2]), Value::Interval(GridInterval::full(g.clone()))]);
        let y = ProductValue(vec![Value::int_set([2]), Value::Interval(int(3, 9, &g))]);
        let j = x.try_join(&y).unwrap();
        assert_eq!(j, ProductValue(vec![Value::int_set([2]), Value::Interval(int(3, 9, &g))]));
        assert!(x.leq(&j) && y.leq(&j));
    }

    #[test]
    fn mismatched_shapes_are_config_errors() {
        let g = Grid::integers(0, 3).unwrap();
        let s = Value::int_set([1]);
        let i = Value::Interval(GridInterval::full(g));
        assert!(matches!(s.try_join(&i), Err(Error::Config(_))));
        assert!(matches!(s.try_leq(&i), Err(Error::Config(_))));
        let p = ProductValue(vec![s.clone()]);
        let q = ProductValue(vec![s.clone(), s]);
        assert!(p.try_join(&q).is_err());
    }

    fn subsets(n: u32) -> Vec<PowersetValue<u32>> {
        (0..1u32 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
    }

    fn grid_intervals(points: i64) -> Vec<GridInterval> {
        let g = Grid::integers(0, points - 1).unwrap();
        let mut out = vec![GridInterval::empty(g.clone())];
        for l in 0..points {
            for h in l..points {
                out.push(int(l, h, &g));
            }
        }
        out
    }

    fn check_lub<V: Lattice>(all: &[V]) {
        for x in all {
            assert!(x.leq(x));
            for y in all {
                if x.leq(y) && y.leq(x) {
                    assert_eq!(x, y, "antisymmetry");
                }
                let j = x.try_join(y).unwrap();
                assert!(x.leq(&j) && y.leq(&j), "join is an upper bound");
                for z in all {
                    if x.leq(y) && y.leq(z) {
                        assert!(x.leq(z), "transitivity");
                    }
                    if x.leq(z) && y.leq(z) {
                        assert!(j.leq(z), "join is least");
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_order_laws_on_powersets() {
        check_lub(&subsets(4));
    }

    #[test]
    fn exhaustive_order_laws_on_grids() {
        check_lub(&grid_intervals(6));
    }

    #[test]
    fn strictly_increasing_chains_are_short() {
        // longest strictly increasing chain in P({0..3}) under ⊇ has 4 steps
        let all = subsets(4);
        let mut longest = vec![0usize; all.len()];
        // process by decreasing size so successors (smaller sets) are done first
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by_key(|&i| all[i].len());
        for &i in &order {
            longest[i] = order
                .iter()
                .filter(|&&j| all[j].len() < all[i].len() && all[i].leq(&all[j]))
                .map(|&j| longest[j] + 1)
                .max()
                .unwrap_or(0);
        }
        assert_eq!(longest.iter().max(), Some(&4));
    }

    #[test]
    fn value_finite_chain_flags() {
        let p = ProductValue(vec![Value::int_set([1]), Value::System(IneqSystem::default())]);
        assert!(!p.finite_chains());
        assert!(ProductValue(vec![Value::int_set([1])]).finite_chains());
    }
}
