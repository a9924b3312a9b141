//! The propagation state of a CSP: one component per domain, then one per
//! extensional constraint, then (when there are `leq` constraints) a single
//! inequality-system component. Domain reducers therefore address domain
//! components by their domain index, and constraint reducers reach their
//! constraints through [`Slot`]s.

use std::collections::BTreeSet;

use crate::csp::{Body, Constraint, Csp, LinearIneq, Relation};
use crate::error::{Error, Result};
use crate::lattice::{IneqSystem, PowersetValue, ProductValue, Value};
use crate::reducers::Slot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    domains: usize,
    relations: Vec<Option<usize>>,
    system: Option<usize>,
    len: usize,
}

impl Layout {
    pub fn new(csp: &Csp) -> Self {
        let mut len = csp.arity();
        let relations = csp
            .constraints
            .iter()
            .map(|c| {
                matches!(c.body, Body::Extensional(_)).then(|| {
                    len += 1;
                    len - 1
                })
            })
            .collect();
        let system = csp.constraints.iter().any(|c| matches!(c.body, Body::LinearLeq(_))).then(|| {
            len += 1;
            len - 1
        });
        Layout { domains: csp.arity(), relations, system, len }
    }

    /// Number of state components.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn domains(&self) -> usize {
        self.domains
    }

    /// The component of constraint `c` (by index).
    pub fn slot(&self, csp: &Csp, c: usize) -> Result<Slot> {
        let con = csp.constraints.get(c).ok_or_else(|| Error::Argument(format!("no constraint #{}", c + 1)))?;
        let pos = self.relations[c]
            .ok_or_else(|| Error::config(format!("constraint `{}` is not extensional", con.id)))?;
        Ok(Slot::new(pos, con.scheme.clone(), con.id.clone()))
    }

    pub fn system(&self) -> Result<usize> {
        self.system.ok_or_else(|| Error::config("the CSP has no `leq` constraints"))
    }

    pub fn encode(&self, csp: &Csp) -> ProductValue<Value> {
        let mut comps = csp.domains.clone();
        for c in &csp.constraints {
            if let Body::Extensional(t) = &c.body {
                comps.push(Value::Relation(PowersetValue::new(t.clone())));
            }
        }
        if self.system.is_some() {
            comps.push(Value::System(IneqSystem::new(csp.constraints.iter().filter_map(Constraint::as_ineq))));
        }
        ProductValue(comps)
    }

    /// The CSP determined by `state`: new domains, constraint components
    /// restricted to them, and any inequalities the system gained appended
    /// as `cut<k>` constraints.
    pub fn decode(&self, csp: &Csp, state: &ProductValue<Value>) -> Result<Csp> {
        if state.arity() != self.len {
            return Err(Error::config(format!("state has {} components, layout {}", state.arity(), self.len)));
        }
        let domains: Vec<Value> = state.components()[..self.domains].to_vec();
        let mut constraints = Vec::with_capacity(csp.constraints.len());
        for (c, pos) in csp.constraints.iter().zip(&self.relations) {
            let con = match pos {
                Some(p) => {
                    let tuples = state[*p].as_relation()?.elements().clone();
                    let r = Relation::new(c.scheme.clone(), tuples).within(&domains);
                    Constraint { body: Body::Extensional(r.tuples), ..c.clone() }
                }
                None => c.clone(),
            };
            constraints.push(con);
        }
        if let Some(p) = self.system {
            let original: BTreeSet<LinearIneq> = csp.constraints.iter().filter_map(Constraint::as_ineq).collect();
            let mut used: BTreeSet<String> = csp.constraints.iter().map(|c| c.id.clone()).collect();
            let mut k = 0;
            for ineq in state[p].as_system()?.inequalities() {
                if original.contains(ineq) {
                    continue;
                }
                let id = loop {
                    k += 1;
                    let id = format!("cut{k}");
                    if !used.contains(&id) {
                        break id;
                    }
                };
                used.insert(id.clone());
                constraints.push(ineq.clone().into_constraint(id));
            }
        }
        Ok(Csp { domains, constraints })
    }
}
