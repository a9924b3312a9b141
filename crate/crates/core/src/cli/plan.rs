//! Reducers addressed by name: `pi1@<cid>`, `pi2@<cid>`, `piC@<cid>`,
//! `hull@<cid>`, `lineq@<cid>`, `rho@<cids>`, `path@k,l,m`, `rel@t;<cids>`
//! and `cut@<cids>;<multipliers>`. Indices are 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::consistency::universal_constraint;
use crate::csp::{Csp, Scheme};
use crate::engine::ReductionFunction;
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::lattice::Value;
use crate::reducers::{self, Which};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducerSpec {
    Pi1(String),
    Pi2(String),
    PiC(String),
    Hull(String),
    Lineq(String),
    Rho(Vec<String>),
    /// 0-based `k, l, m`.
    Path(usize, usize, usize),
    Rel { target: Vec<usize>, members: Vec<String> },
    Cut { ids: Vec<String>, multipliers: Vec<String> },
}

fn ids(s: &str) -> Result<Vec<String>> {
    let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    if v.iter().any(String::is_empty) {
        return Err(Error::Argument(format!("empty constraint id in `{s}`")));
    }
    Ok(v)
}

fn indices(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    s.split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Argument(format!("bad index `{}`", x.trim()))),
        })
        .collect()
}

impl FromStr for ReducerSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once('@').ok_or_else(|| Error::Argument(format!("reducer `{s}` lacks `@`")))?;
        let single = || -> Result<String> {
            match ids(arg)?.as_slice() {
                [one] => Ok(one.clone()),
                _ => Err(Error::Argument(format!("`{name}` takes one constraint id"))),
            }
        };
        Ok(match name {
            "pi1" => ReducerSpec::Pi1(single()?),
            "pi2" => ReducerSpec::Pi2(single()?),
            "piC" => ReducerSpec::PiC(single()?),
            "hull" => ReducerSpec::Hull(single()?),
            "lineq" => ReducerSpec::Lineq(single()?),
            "rho" => ReducerSpec::Rho(ids(arg)?),
            "path" => match indices(arg)?.as_slice() {
                &[k, l, m] => ReducerSpec::Path(k, l, m),
                _ => return Err(Error::Argument(format!("`{s}` needs three indices"))),
            },
            "rel" => {
                let (t, m) = arg.split_once(';').ok_or_else(|| Error::Argument(format!("`{s}` needs `t;ids`")))?;
                ReducerSpec::Rel { target: indices(t)?, members: ids(m)? }
            }
            "cut" => {
                let (c, m) = arg.split_once(';').ok_or_else(|| Error::Argument(format!("`{s}` needs `ids;multipliers`")))?;
                ReducerSpec::Cut { ids: ids(c)?, multipliers: m.split(',').map(|x| x.trim().to_string()).collect() }
            }
            _ => return Err(Error::Argument(format!("unknown reducer `{name}`"))),
        })
    }
}

impl fmt::Display for ReducerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducerSpec::Pi1(c) => write!(f, "pi1@{c}"),
            ReducerSpec::Pi2(c) => write!(f, "pi2@{c}"),
            ReducerSpec::PiC(c) => write!(f, "piC@{c}"),
            ReducerSpec::Hull(c) => write!(f, "hull@{c}"),
            ReducerSpec::Lineq(c) => write!(f, "lineq@{c}"),
            ReducerSpec::Rho(cs) => write!(f, "rho@{}", cs.join(",")),
            ReducerSpec::Path(k, l, m) => write!(f, "path@{},{},{}", k + 1, l + 1, m + 1),
            ReducerSpec::Rel { target, members } => {
                let t: Vec<String> = target.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "rel@({});{}", t.join(","), members.join(","))
            }
            ReducerSpec::Cut { ids, multipliers } => write!(f, "cut@{};{}", ids.join(","), multipliers.join(",")),
        }
    }
}

fn find(csp: &Csp, id: &str) -> Result<usize> {
    csp.constraint(id).map(|(k, _)| k).ok_or_else(|| Error::config(format!("no constraint `{id}`")))
}

/// Constraint with exactly the scheme `(a,b)`.
fn pair(csp: &Csp, a: usize, b: usize, who: &ReducerSpec) -> Result<usize> {
    let hits: Vec<usize> =
        (0..csp.constraints.len()).filter(|&k| csp.constraints[k].scheme.indices() == [a, b]).collect();
    match hits.as_slice() {
        [k] => Ok(*k),
        [] => Err(Error::config(format!("`{who}` needs a constraint on ({},{})", a + 1, b + 1))),
        _ => Err(Error::config(format!("`{who}`: several constraints on ({},{})", a + 1, b + 1))),
    }
}

/// The CSP the functions run on (extended with universal targets that
/// `rel@` needs) and the functions, in the order given.
pub fn build(csp: &Csp, specs: &[ReducerSpec]) -> Result<(Csp, Vec<ReductionFunction<Value>>)> {
    let mut q = csp.clone();
    // relational targets, created up front so the layout sees them
    let mut targets = Vec::with_capacity(specs.len());
    for spec in specs {
        let t = match spec {
            ReducerSpec::Rel { target, .. } => {
                let key: BTreeSet<usize> = target.iter().copied().collect();
                let scheme = Scheme::new(target.clone())?;
                if let Some(&bad) = target.iter().find(|&&i| i >= q.arity()) {
                    return Err(Error::config(format!("`{spec}` mentions domain {}", bad + 1)));
                }
                let existing = q
                    .constraints
                    .iter()
                    .position(|c| c.scheme.indices().iter().copied().collect::<BTreeSet<_>>() == key);
                Some(match existing {
                    Some(k) => k,
                    None => {
                        q.constraints.push(universal_constraint(&q.domains, scheme)?);
                        q.constraints.len() - 1
                    }
                })
            }
            _ => None,
        };
        targets.push(t);
    }
    let layout = Layout::new(&q);
    let mut fs = Vec::with_capacity(specs.len());
    for (spec, target) in specs.iter().zip(targets) {
        let f = match spec {
            ReducerSpec::Pi1(c) | ReducerSpec::Pi2(c) => {
                let k = find(&q, c)?;
                let which = if matches!(spec, ReducerSpec::Pi1(_)) { Which::First } else { Which::Second };
                reducers::binary_projection(&q.constraints[k], which)?.with_group(k)
            }
            ReducerSpec::PiC(c) => {
                let k = find(&q, c)?;
                reducers::full_projection(&q.constraints[k])?.with_group(k)
            }
            ReducerSpec::Hull(c) => {
                let k = find(&q, c)?;
                reducers::hull_projection(&q.constraints[k])?.with_group(k)
            }
            ReducerSpec::Lineq(c) => {
                let k = find(&q, c)?;
                reducers::lineq_reducer(&q.constraints[k])?.with_group(k)
            }
            ReducerSpec::Rho(cs) => {
                let ks = cs.iter().map(|c| find(&q, c)).collect::<Result<Vec<_>>>()?;
                let slots = ks.iter().map(|&k| layout.slot(&q, k)).collect::<Result<Vec<_>>>()?;
                reducers::rho(&slots)?.with_group(ks[0])
            }
            ReducerSpec::Path(k, l, m) => {
                if let Some(&bad) = [k, l, m].into_iter().find(|&&i| i >= q.arity()) {
                    return Err(Error::config(format!("`{spec}` mentions domain {}", bad + 1)));
                }
                let (kl, km, ml) = (pair(&q, *k, *l, spec)?, pair(&q, *k, *m, spec)?, pair(&q, *m, *l, spec)?);
                reducers::path_fn(&layout.slot(&q, kl)?, &layout.slot(&q, km)?, &layout.slot(&q, ml)?)?.with_group(kl)
            }
            ReducerSpec::Rel { members, .. } => {
                let t = target.expect("relational target resolved");
                let slots = members.iter().map(|c| layout.slot(&q, find(&q, c)?)).collect::<Result<Vec<_>>>()?;
                reducers::relational_fn(&layout.slot(&q, t)?, &slots)?.with_group(t)
            }
            ReducerSpec::Cut { ids, multipliers } => {
                let mut ineqs = Vec::with_capacity(ids.len());
                for c in ids {
                    let con = &q.constraints[find(&q, c)?];
                    ineqs.push(con.as_ineq().ok_or_else(|| Error::config(format!("`{c}` is not a `leq` constraint")))?);
                }
                let ms = multipliers.iter().map(|m| reducers::parse_multiplier(m)).collect::<Result<Vec<_>>>()?;
                let cut = reducers::cutting_plane(&ineqs, &ms)?;
                reducers::cut_reducer(spec.to_string(), layout.system()?, cut)?
            }
        };
        fs.push(f);
    }
    Ok((q, fs))
}
