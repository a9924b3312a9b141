//! Constraint reduction functions over components that hold tuple sets.

use crate::csp::{join_all, Scheme};
use crate::engine::ReductionFunction;
use crate::error::{Error, Result};
use crate::lattice::Value;

use super::{relation_value, slot_scheme, Slot};

fn ids(slots: &[&Slot]) -> String {
    slots.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(",")
}

/// `ρ`: replaces every member by the projection of the solutions of all
/// members on its scheme. The strongest constraint reducer on the members.
pub fn rho(members: &[Slot]) -> Result<ReductionFunction<Value>> {
    let refs: Vec<&Slot> = members.iter().collect();
    let scheme = slot_scheme(&refs)?;
    let id = format!("rho@{}", ids(&refs));
    let members = members.to_vec();
    let f = ReductionFunction::new(id, scheme, true, move |xs: &[Value]| {
        let rels = members.iter().zip(xs).map(|(s, x)| s.relation(x)).collect::<Result<Vec<_>>>()?;
        let sol = join_all(&rels);
        members.iter().map(|s| Ok(relation_value(sol.restrict(&s.scheme)?))).collect()
    });
    Ok(f)
}

/// `g_s`: intersects `target` with the projection of the join of `members`
/// on the target's scheme. The target may itself be a member.
pub fn relational_fn(target: &Slot, members: &[Slot]) -> Result<ReductionFunction<Value>> {
    let covered = crate::csp::scheme_union(members.iter().map(|m| &m.scheme));
    if !target.scheme.is_within(&covered) {
        return Err(Error::config(format!(
            "scheme {:?} of `{}` is not covered by the members {}",
            target.scheme,
            target.id,
            members.iter().map(|m| m.id.as_str()).collect::<Vec<_>>().join(",")
        )));
    }
    // function components: the target first, then the members other than it
    let mut comps: Vec<&Slot> = vec![target];
    comps.extend(members.iter().filter(|m| m.pos != target.pos));
    let scheme = slot_scheme(&comps)?;
    // where each member is read from
    let member_at: Vec<usize> = members
        .iter()
        .map(|m| comps.iter().position(|c| c.pos == m.pos).expect("member is a component"))
        .collect();
    let id = format!("rel@{:?};{}", target.scheme, ids(&members.iter().collect::<Vec<_>>()));
    let (target, members) = (target.clone(), members.to_vec());
    let f = ReductionFunction::new(id, scheme, true, move |xs: &[Value]| {
        let rels = members
            .iter()
            .zip(&member_at)
            .map(|(m, &k)| m.relation(&xs[k]))
            .collect::<Result<Vec<_>>>()?;
        let proj = join_all(&rels).restrict(&target.scheme)?;
        let current = xs[0].as_relation()?;
        let kept = current.elements().iter().filter(|t| proj.tuples.contains(*t)).cloned().collect();
        let mut out = xs.to_vec();
        out[0] = Value::Relation(kept);
        Ok(out)
    });
    Ok(f)
}

/// `g^m_{k,l}`: shrinks `X_{k,l}` by the join of `X_{k,m}` and `X_{m,l}`.
/// The slots must carry the schemes `(k,l)`, `(k,m)` and `(m,l)`.
pub fn path_fn(kl: &Slot, km: &Slot, ml: &Slot) -> Result<ReductionFunction<Value>> {
    let shape = |s: &Slot| -> Result<(usize, usize)> {
        match s.scheme.indices() {
            &[a, b] => Ok((a, b)),
            _ => Err(Error::config(format!("`{}` is not binary", s.id))),
        }
    };
    let ((k, l), (k2, m), (m2, l2)) = (shape(kl)?, shape(km)?, shape(ml)?);
    if k != k2 || l != l2 || m != m2 || k == l || k == m || l == m {
        return Err(Error::config(format!(
            "schemes {:?}, {:?}, {:?} do not form a path k,l,m",
            kl.scheme, km.scheme, ml.scheme
        )));
    }
    let f = relational_fn(kl, &[km.clone(), ml.clone()])?;
    let id = format!("path@{},{},{}", k + 1, l + 1, m + 1);
    let scheme = Scheme::new(vec![kl.pos, km.pos, ml.pos])?;
    Ok(ReductionFunction::new(id, scheme, true, move |xs: &[Value]| f.apply(xs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Atom, PowersetValue, Tuple};

    fn rel(tuples: &[&[i64]]) -> Value {
        Value::Relation(tuples.iter().map(|t| t.iter().map(|&x| Atom::Int(x)).collect::<Tuple>()).collect())
    }

    fn slot(pos: usize, sch: &[usize], id: &str) -> Slot {
        Slot::new(pos, Scheme::from_one_based(sch).unwrap(), id)
    }

    #[test]
    fn rho_example() {
        let f = rho(&[slot(0, &[1, 2], "c1"), slot(1, &[2, 3], "c2")]).unwrap();
        let x = vec![rel(&[&[0, 0], &[1, 1]]), rel(&[&[0, 1]])];
        let out = f.apply(&x).unwrap();
        assert_eq!(out, vec![rel(&[&[0, 0]]), rel(&[&[0, 1]])]);
        assert_eq!(f.apply(&out).unwrap(), out);
        let dead = f.apply(&[rel(&[]), rel(&[&[0, 1]])]).unwrap();
        assert_eq!(dead, vec![rel(&[]), rel(&[])]);
    }

    #[test]
    fn relational_example() {
        let universal = rel(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let t = slot(2, &[1, 3], "u13");
        let f = relational_fn(&t, &[slot(0, &[1, 2], "c1"), slot(1, &[2, 3], "c2")]).unwrap();
        let out = f.apply(&[universal.clone(), rel(&[&[0, 0], &[1, 1]]), rel(&[&[0, 1]])]).unwrap();
        assert_eq!(out[0], rel(&[&[0, 1]]));
        // already inside the projection: identity
        let again = f.apply(&out).unwrap();
        assert_eq!(again, out);
        let dead = f.apply(&[universal, rel(&[]), rel(&[&[0, 1]])]).unwrap();
        assert_eq!(dead[0], Value::Relation(PowersetValue::empty()));
    }

    #[test]
    fn relational_target_may_be_a_member() {
        let c1 = slot(0, &[1, 2], "c1");
        let f = relational_fn(&c1, &[c1.clone(), slot(1, &[2, 3], "c2")]).unwrap();
        assert_eq!(f.scheme().indices(), &[0, 1]);
        let out = f.apply(&[rel(&[&[0, 0], &[1, 1]]), rel(&[&[0, 1]])]).unwrap();
        assert_eq!(out, vec![rel(&[&[0, 0]]), rel(&[&[0, 1]])]);
    }

    #[test]
    fn relational_rejects_uncovered_target() {
        let r = relational_fn(&slot(2, &[1, 4], "t"), &[slot(0, &[1, 2], "c1")]);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn path_example() {
        let f = path_fn(&slot(0, &[1, 2], "x12"), &slot(1, &[1, 3], "x13"), &slot(2, &[3, 2], "x32")).unwrap();
        assert_eq!(f.id(), "path@1,2,3");
        let out = f.apply(&[rel(&[&[0, 0], &[0, 1]]), rel(&[&[0, 1]]), rel(&[&[1, 1]])]).unwrap();
        assert_eq!(out[0], rel(&[&[0, 1]]));
        let full = rel(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let x = vec![rel(&[&[0, 1]]), full.clone(), full.clone()];
        assert_eq!(f.apply(&x).unwrap(), x);
        let out = f.apply(&[full.clone(), rel(&[]), full]).unwrap();
        assert_eq!(out[0], Value::Relation(PowersetValue::empty()));
    }

    #[test]
    fn path_checks_shapes() {
        let r = path_fn(&slot(0, &[1, 2], "a"), &slot(1, &[1, 3], "b"), &slot(2, &[2, 3], "c"));
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
