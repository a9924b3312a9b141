//! The reduction-function catalogue.
//!
//! Domain reducers ([`domain`]) read and write domain components and take
//! their scheme from the constraint they serve. Constraint reducers
//! ([`constraint`], [`cut`]) act on components that hold constraint tuple
//! sets or inequality systems; they address them through [`Slot`]s.

pub mod constraint;
pub mod cut;
pub mod domain;

pub use constraint::{path_fn, relational_fn, rho};
pub use cut::{cut_reducer, cutting_plane, parse_multiplier};
pub use domain::{
    binary_projection, embed_domain_reducer, full_projection, hull_projection, linear_eq_narrow,
    lineq_reducer, Which,
};

use crate::csp::{Relation, Scheme};
use crate::error::{Error, Result};
use crate::lattice::{PowersetValue, Value};

/// A state component holding the tuples of one constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    /// Position in the state.
    pub pos: usize,
    /// Scheme of the constraint (domain indices).
    pub scheme: Scheme,
    pub id: String,
}

impl Slot {
    pub fn new(pos: usize, scheme: Scheme, id: impl Into<String>) -> Self {
        Slot { pos, scheme, id: id.into() }
    }

    fn relation(&self, v: &Value) -> Result<Relation> {
        Ok(Relation::new(self.scheme.clone(), v.as_relation()?.elements().clone()))
    }
}

fn relation_value(r: Relation) -> Value {
    Value::Relation(PowersetValue::new(r.tuples))
}

/// Positions of `slots` as a function scheme; slots must be distinct.
fn slot_scheme(slots: &[&Slot]) -> Result<Scheme> {
    Scheme::new(slots.iter().map(|s| s.pos).collect())
        .map_err(|_| Error::config("a constraint is named twice"))
}
