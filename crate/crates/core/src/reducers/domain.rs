//! Domain reduction functions: they shrink domains without losing any tuple
//! of their constraint.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::Integer;

use crate::csp::{Body, Constraint, LinearForm};
use crate::engine::ReductionFunction;
use crate::error::{Error, Result};
use crate::lattice::{interval_hull, Atom, GridInterval, PowersetValue, Tuple, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

fn tuples_of(c: &Constraint) -> Result<Arc<BTreeSet<Tuple>>> {
    c.tuples()
        .cloned()
        .map(Arc::new)
        .ok_or_else(|| Error::config(format!("constraint `{}` is not extensional", c.id)))
}

/// `π₁` or `π₂` of a binary extensional constraint: keeps the values of one
/// side that have a supporting pair.
pub fn binary_projection(c: &Constraint, which: Which) -> Result<ReductionFunction<Value>> {
    if c.scheme.len() != 2 {
        return Err(Error::config(format!(
            "`{}` has arity {}, binary projections need 2",
            c.id,
            c.scheme.len()
        )));
    }
    let tuples = tuples_of(c)?;
    let (k, name) = match which {
        Which::First => (0, "pi1"),
        Which::Second => (1, "pi2"),
    };
    let f = ReductionFunction::new(format!("{name}@{}", c.id), c.scheme.clone(), true, move |xs: &[Value]| {
        let (x, y) = (xs[0].as_set()?, xs[1].as_set()?);
        let supported: BTreeSet<Atom> = tuples
            .iter()
            .filter(|t| x.contains(&t[0]) && y.contains(&t[1]))
            .map(|t| t[k].clone())
            .collect();
        let mut out = xs.to_vec();
        out[k] = Value::Set(PowersetValue::new(supported));
        Ok(out)
    });
    Ok(f)
}

/// `π_C`: every component becomes the projection of `C ∩ D`.
pub fn full_projection(c: &Constraint) -> Result<ReductionFunction<Value>> {
    let tuples = tuples_of(c)?;
    let n = c.scheme.len();
    let f = ReductionFunction::new(format!("piC@{}", c.id), c.scheme.clone(), true, move |xs: &[Value]| {
        let sets = xs.iter().map(Value::as_set).collect::<Result<Vec<_>>>()?;
        let mut cols = vec![BTreeSet::new(); n];
        for t in tuples.iter().filter(|t| t.iter().zip(&sets).all(|(a, s)| s.contains(a))) {
            for (col, a) in cols.iter_mut().zip(t) {
                col.insert(a.clone());
            }
        }
        Ok(cols.into_iter().map(|c| Value::Set(PowersetValue::new(c))).collect())
    });
    Ok(f)
}

/// Interval hull of the projections of `C ∩ D`, for gridded numeric domains.
pub fn hull_projection(c: &Constraint) -> Result<ReductionFunction<Value>> {
    let tuples = tuples_of(c)?;
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(tuples.len());
    for t in tuples.iter() {
        let p = t
            .iter()
            .map(|a| a.as_f64().ok_or_else(|| Error::Data(format!("`{}` holds non-numeric value {a}", c.id))))
            .collect::<Result<Vec<_>>>()?;
        points.push(p);
    }
    let n = c.scheme.len();
    let id = c.id.clone();
    let f = ReductionFunction::new(format!("hull@{}", c.id), c.scheme.clone(), true, move |xs: &[Value]| {
        let boxes = xs.iter().map(Value::as_interval).collect::<Result<Vec<_>>>()?;
        for p in &points {
            if let Some((k, x)) = p.iter().enumerate().find(|(k, x)| !boxes[*k].grid().contains_value(**x)) {
                return Err(Error::Data(format!(
                    "`{id}` has value {x} outside the grid of component {}",
                    k + 1
                )));
            }
        }
        let inside: Vec<&Vec<f64>> =
            points.iter().filter(|p| p.iter().zip(&boxes).all(|(x, b)| b.contains_f64(*x))).collect();
        (0..n)
            .map(|k| {
                let col: Vec<f64> = inside.iter().map(|p| p[k]).collect();
                Ok(Value::Interval(interval_hull(&col, boxes[k].grid())?.intersect(boxes[k])?))
            })
            .collect()
    });
    Ok(f)
}

/// One application of the bound-narrowing rule for `∑ a_i x_i = b` over
/// integer intervals. Positive coefficients form POS, negative ones NEG
/// (with `|a_i|`); zero coefficients leave their interval untouched.
pub fn linear_eq_narrow(form: &LinearForm, boxes: &[GridInterval]) -> Result<Vec<GridInterval>> {
    if form.coeffs.len() != boxes.len() {
        return Err(Error::config(format!(
            "{} coefficients for {} intervals",
            form.coeffs.len(),
            boxes.len()
        )));
    }
    if let Some(b) = boxes.iter().find(|b| !b.is_integer()) {
        return Err(Error::config(format!("linear narrowing needs integer intervals, got {b}")));
    }
    let spans: Option<Vec<(i128, i128)>> =
        boxes.iter().map(|b| b.span().map(|(l, h)| (l as i128, h as i128))).collect();
    let Some(spans) = spans else {
        return Ok(boxes.iter().map(|b| GridInterval::empty(b.grid().clone())).collect());
    };
    let b = form.rhs as i128;
    let a: Vec<i128> = form.coeffs.iter().map(|&c| (c as i128).abs()).collect();
    let pos = |i: usize| form.coeffs[i] > 0;
    let neg = |i: usize| form.coeffs[i] < 0;
    let n = boxes.len();

    // sums over POS and NEG of a_i l_i and a_i h_i
    let sum = |keep: &dyn Fn(usize) -> bool, upper: bool| -> i128 {
        (0..n).filter(|&i| keep(i)).map(|i| a[i] * if upper { spans[i].1 } else { spans[i].0 }).sum()
    };
    let (pos_l, pos_h) = (sum(&pos, false), sum(&pos, true));
    let (neg_l, neg_h) = (sum(&neg, false), sum(&neg, true));

    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (l, h) = spans[j];
        let (lo, hi) = if pos(j) {
            let alpha = b - (pos_l - a[j] * l) + neg_h;
            let gamma = b - (pos_h - a[j] * h) + neg_l;
            (l.max(Integer::div_ceil(&gamma, &a[j])), h.min(Integer::div_floor(&alpha, &a[j])))
        } else if neg(j) {
            let beta = -b + pos_l - (neg_h - a[j] * h);
            let delta = -b + pos_h - (neg_l - a[j] * l);
            (l.max(Integer::div_ceil(&beta, &a[j])), h.min(Integer::div_floor(&delta, &a[j])))
        } else {
            (l, h)
        };
        // within [l..h], so the casts are lossless
        out.push(boxes[j].with_bounds(lo as i64, hi as i64)?);
    }
    Ok(out)
}

/// [`linear_eq_narrow`] for a `lineq` constraint. Not idempotent.
pub fn lineq_reducer(c: &Constraint) -> Result<ReductionFunction<Value>> {
    let Body::LinearEq(form) = &c.body else {
        return Err(Error::config(format!("`{}` is not a linear equality", c.id)));
    };
    let form = form.clone();
    let f = ReductionFunction::new(format!("lineq@{}", c.id), c.scheme.clone(), false, move |xs: &[Value]| {
        let boxes = xs.iter().map(|x| x.as_interval().cloned()).collect::<Result<Vec<_>>>()?;
        Ok(linear_eq_narrow(&form, &boxes)?.into_iter().map(Value::Interval).collect())
    });
    Ok(f)
}

/// A domain reducer as a function on a state whose domain components start
/// at `offset`; the constraint components stay fixed.
pub fn embed_domain_reducer<V: crate::lattice::Lattice>(
    f: &ReductionFunction<V>,
    offset: usize,
) -> Result<ReductionFunction<V>> {
    f.relocated(|i| i + offset)
}
