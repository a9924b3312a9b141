//! Gomory–Chvátal cutting planes over integer linear inequalities, with
//! exact rational arithmetic.

use std::str::FromStr;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::csp::{LinearIneq, Scheme};
use crate::engine::ReductionFunction;
use crate::error::{Error, Result};
use crate::lattice::Value;

/// Parses a nonnegative rational such as `1/2`, `3` or `0`.
pub fn parse_multiplier(s: &str) -> Result<BigRational> {
    let r = BigRational::from_str(s.trim()).map_err(|_| Error::Argument(format!("bad multiplier `{s}`")))?;
    if r.is_negative() {
        return Err(Error::Argument(format!("multiplier `{s}` is negative")));
    }
    Ok(r)
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Data(format!("cut coefficient {x} overflows")))
}

/// `∑_i (∑_j c_j a_i^j) x_i ≤ ⌊∑_j c_j b^j⌋`. Every combined coefficient
/// must be an integer; otherwise the variable (1-based) is reported.
pub fn cutting_plane(ineqs: &[LinearIneq], multipliers: &[BigRational]) -> Result<LinearIneq> {
    if ineqs.len() != multipliers.len() {
        return Err(Error::Argument(format!(
            "{} inequalities but {} multipliers",
            ineqs.len(),
            multipliers.len()
        )));
    }
    if multipliers.iter().any(Signed::is_negative) {
        return Err(Error::Argument("multipliers must be nonnegative".into()));
    }
    let mut coeffs: std::collections::BTreeMap<usize, BigRational> = Default::default();
    let mut rhs = BigRational::zero();
    for (ineq, c) in ineqs.iter().zip(multipliers) {
        for (&v, &a) in &ineq.terms {
            *coeffs.entry(v).or_insert_with(BigRational::zero) += c * BigRational::from_integer(a.into());
        }
        rhs += c * BigRational::from_integer(ineq.rhs.into());
    }
    let mut terms = Vec::with_capacity(coeffs.len());
    for (v, a) in coeffs {
        if !a.is_integer() {
            return Err(Error::NonIntegralCut { variable: v + 1, value: a.to_string() });
        }
        terms.push((v, to_i64(&a.to_integer())?));
    }
    Ok(LinearIneq::new(terms, to_i64(&rhs.floor().to_integer())?))
}

/// Appends `cut` to the inequality system at `pos` unless it is trivial or
/// already present. Declared non-idempotent.
pub fn cut_reducer(id: impl Into<String>, pos: usize, cut: LinearIneq) -> Result<ReductionFunction<Value>> {
    let f = ReductionFunction::new(id, Scheme::new(vec![pos])?, false, move |xs: &[Value]| {
        let sys = xs[0].as_system()?;
        if cut.is_trivial() || sys.contains(&cut) {
            return Ok(xs.to_vec());
        }
        Ok(vec![Value::System(sys.with(cut.clone()))])
    });
    Ok(f)
}
