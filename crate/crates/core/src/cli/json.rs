//! JSON rendering of CSPs and run summaries, one field per element of the
//! text format.

use serde_json::{json, Value as Json};

use crate::csp::{Body, Csp};
use crate::lattice::{fmt_real, Atom, Grid, Value};

fn atom(a: &Atom) -> Json {
    match a {
        Atom::Int(i) => json!(i),
        Atom::Real(x) if x.0.is_finite() => json!(x.0),
        Atom::Real(x) => json!(fmt_real(x.0)),
        Atom::Sym(s) => json!(s),
    }
}

fn domain(i: usize, d: &Value) -> Json {
    match d {
        Value::Set(s) => json!({"index": i + 1, "kind": "set", "values": s.elements().iter().map(atom).collect::<Vec<_>>()}),
        Value::Interval(iv) => {
            let mut o = match iv.grid() {
                Grid::Int { .. } => json!({"index": i + 1, "kind": "int"}),
                Grid::Points(p) => json!({
                    "index": i + 1,
                    "kind": "real",
                    "grid": p.iter().map(|x| atom(&Atom::real(x.0))).collect::<Vec<_>>(),
                }),
            };
            match (iv.grid(), iv.span(), iv.bounds_f64()) {
                (_, None, _) => o["empty"] = json!(true),
                (Grid::Int { .. }, Some((l, h)), _) => {
                    o["lo"] = json!(l);
                    o["hi"] = json!(h);
                }
                (_, _, Some((l, h))) => {
                    o["lo"] = atom(&Atom::real(l));
                    o["hi"] = atom(&Atom::real(h));
                }
                _ => {}
            }
            o
        }
        other => json!({"index": i + 1, "kind": other.kind()}),
    }
}

/// Tuples as arrays of atoms.
pub fn tuples_json<'a>(ts: impl IntoIterator<Item = &'a Vec<Atom>>) -> Json {
    ts.into_iter().map(|t| t.iter().map(atom).collect::<Vec<_>>()).collect()
}

/// The CSP as JSON; synthetic constraints are omitted as in the text form.
pub fn csp_json(p: &Csp) -> Json {
    let domains: Vec<Json> = p.domains.iter().enumerate().map(|(i, d)| domain(i, d)).collect();
    let constraints: Vec<Json> = p
        .constraints
        .iter()
        .filter(|c| !c.synthetic)
        .map(|c| {
            let mut o = json!({"id": c.id, "scheme": c.scheme.one_based()});
            match &c.body {
                Body::Extensional(t) => {
                    o["tuples"] = tuples_json(t);
                }
                Body::LinearEq(f) => o["lineq"] = json!({"coeffs": f.coeffs, "rhs": f.rhs}),
                Body::LinearLeq(f) => o["leq"] = json!({"coeffs": f.coeffs, "rhs": f.rhs}),
            }
            o
        })
        .collect();
    json!({"domains": domains, "constraints": constraints})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::text::parse_csp;

    #[test]
    fn mirrors_the_text_model() {
        let p = parse_csp(
            "domain 1 set {a,1}\ndomain 2 int [0..3]\ndomain 3 real {-inf,0,+inf} [0..+inf]\n\
             constraint c scheme (1,2) tuples {(a,0)}\nconstraint e scheme (2) lineq 2*x2 = 2\n",
        )
        .unwrap();
        let j = csp_json(&p);
        assert_eq!(j["domains"][0], json!({"index": 1, "kind": "set", "values": [1, "a"]}));
        assert_eq!(j["domains"][1], json!({"index": 2, "kind": "int", "lo": 0, "hi": 3}));
        assert_eq!(j["domains"][2]["grid"], json!(["-inf", 0.0, "+inf"]));
        assert_eq!(j["domains"][2]["hi"], json!("+inf"));
        assert_eq!(j["constraints"][0], json!({"id": "c", "scheme": [1, 2], "tuples": [["a", 0]]}));
        assert_eq!(j["constraints"][1]["lineq"], json!({"coeffs": [2], "rhs": 2}));
    }
}
