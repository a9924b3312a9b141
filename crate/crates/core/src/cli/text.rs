//! The line-oriented CSP file format.
//!
//! ```text
//! # comment
//! domain 1 set {a,b,3}
//! domain 2 int [0..9]
//! domain 3 real {-inf,0,1,2,+inf} [0..2]
//! constraint c1 scheme (1,2) tuples {(a,0),(b,1)}
//! constraint c2 scheme (2,3) lineq 3*x2 - 5*x3 = 4
//! constraint c3 scheme (2) leq 2*x2 <= 7
//! ```
//!
//! Domain indices and the `x<i>` variables are 1-based. The parser does not
//! validate membership or coefficients; see [`Csp::issues`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::csp::{Body, Constraint, Csp, LinearForm, Scheme};
use crate::error::{Error, Result};
use crate::lattice::{fmt_real, Atom, Grid, GridInterval, PowersetValue, Value};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a CSP file. Structural problems are reported with their line;
/// semantic ones are left to [`Csp::issues`].
pub fn parse_csp(src: &str) -> Result<Csp> {
    let mut domains: BTreeMap<usize, (usize, Value)> = BTreeMap::new();
    let mut constraints = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (head, rest) = split_word(text);
        match head {
            "domain" => {
                let (idx, rest) = split_word(rest);
                let i: usize = idx.parse().ok().filter(|&i| i >= 1).ok_or_else(|| perr(line, format!("bad domain index `{idx}`")))?;
                let d = parse_domain(rest).map_err(|m| perr(line, format!("domain {i}: {m}")))?;
                if domains.insert(i, (line, d)).is_some() {
                    return Err(perr(line, format!("domain {i} declared twice")));
                }
            }
            "constraint" => {
                let (id, rest) = split_word(rest);
                if id.is_empty() {
                    return Err(perr(line, "missing constraint id"));
                }
                let c = parse_constraint(id, rest).map_err(|m| perr(line, format!("constraint `{id}`: {m}")))?;
                constraints.push(c);
            }
            other => return Err(perr(line, format!("expected `domain` or `constraint`, found `{other}`"))),
        }
    }
    let n = domains.len();
    if let Some((&i, &(line, _))) = domains.iter().find(|(&i, _)| i > n) {
        return Err(perr(line, format!("domain {i} declared but only {n} domains present")));
    }
    Ok(Csp { domains: domains.into_values().map(|(_, d)| d).collect(), constraints })
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(p) => (&s[..p], s[p..].trim_start()),
        None => (s, ""),
    }
}

/// Contents of a delimited group at the start of `s`, and the remainder.
fn delimited(s: &str, open: char, close: char) -> std::result::Result<(&str, &str), String> {
    let s = s.trim_start();
    if !s.starts_with(open) {
        return Err(format!("expected `{open}`"));
    }
    let mut depth = 0;
    for (p, ch) in s.char_indices() {
        if ch == open {
            depth += 1;
        } else if ch == close {
            depth -= 1;
            if depth == 0 {
                return Ok((&s[1..p], s[p + 1..].trim_start()));
            }
        }
    }
    Err(format!("unclosed `{open}`"))
}

/// Comma-separated items at nesting depth zero.
fn items(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (p, ch) in s.char_indices() {
        match ch {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..p].trim());
                start = p + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn parse_atom(s: &str) -> std::result::Result<Atom, String> {
    if s.is_empty() {
        return Err("empty value".into());
    }
    if let Ok(i) = s.parse::<i64>() {
        return Ok(Atom::Int(i));
    }
    match s {
        "inf" | "+inf" => return Ok(Atom::real(f64::INFINITY)),
        "-inf" => return Ok(Atom::real(f64::NEG_INFINITY)),
        _ => {}
    }
    let numeric = s.starts_with(|c: char| c.is_ascii_digit() || matches!(c, '-' | '+' | '.'));
    if numeric {
        return s.parse::<f64>().ok().filter(|x| !x.is_nan()).map(Atom::real).ok_or_else(|| format!("bad number `{s}`"));
    }
    if s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        Ok(Atom::sym(s))
    } else {
        Err(format!("bad value `{s}`"))
    }
}

fn parse_int(s: &str) -> std::result::Result<i64, String> {
    s.trim().parse().map_err(|_| format!("bad integer `{}`", s.trim()))
}

fn parse_domain(s: &str) -> std::result::Result<Value, String> {
    let (kind, rest) = split_word(s);
    match kind {
        "set" => {
            let (body, tail) = delimited(rest, '{', '}')?;
            expect_end(tail)?;
            Ok(Value::Set(items(body).into_iter().map(parse_atom).collect::<std::result::Result<_, _>>()?))
        }
        "int" => {
            if rest == "empty" {
                return Ok(Value::Interval(GridInterval::empty(Grid::integers(0, 0).map_err(|e| e.to_string())?)));
            }
            let (body, tail) = delimited(rest, '[', ']')?;
            expect_end(tail)?;
            let (l, h) = body.split_once("..").ok_or("expected `[l..h]`")?;
            let (l, h) = (parse_int(l)?, parse_int(h)?);
            if l > h {
                return Err(format!("[{l}..{h}] is empty; write `int empty`"));
            }
            Ok(Value::Interval(GridInterval::integer(l, h).map_err(|e| e.to_string())?))
        }
        "real" => {
            let (body, tail) = delimited(rest, '{', '}')?;
            let mut points = Vec::new();
            for item in items(body) {
                let a = parse_atom(item)?;
                points.push(a.as_f64().ok_or_else(|| format!("grid point `{item}` is not a number"))?);
            }
            let grid = Grid::points(points).map_err(|e| e.to_string())?;
            let pos = |v: &str| -> std::result::Result<i64, String> {
                let x = parse_atom(v.trim())?.as_f64().ok_or_else(|| format!("bound `{v}` is not a number"))?;
                match &grid {
                    Grid::Points(p) => p
                        .iter()
                        .position(|q| q.0 == x)
                        .map(|k| k as i64)
                        .ok_or_else(|| format!("bound `{}` is not a grid point", v.trim())),
                    Grid::Int { .. } => unreachable!("points grid"),
                }
            };
            let tail = tail.trim();
            if tail.is_empty() {
                return Ok(Value::Interval(GridInterval::full(grid)));
            }
            if tail == "empty" {
                return Ok(Value::Interval(GridInterval::empty(grid)));
            }
            let (b, end) = delimited(tail, '[', ']')?;
            expect_end(end)?;
            let (l, h) = b.split_once("..").ok_or("expected `[lo..hi]`")?;
            let (l, h) = (pos(l)?, pos(h)?);
            if l > h {
                return Err("bounds are reversed; write `empty`".into());
            }
            Ok(Value::Interval(GridInterval::new(grid.clone(), l, h).map_err(|e| e.to_string())?))
        }
        other => Err(format!("unknown domain kind `{other}`")),
    }
}

fn expect_end(s: &str) -> std::result::Result<(), String> {
    if s.trim().is_empty() {
        Ok(())
    } else {
        Err(format!("unexpected `{}`", s.trim()))
    }
}

fn parse_constraint(id: &str, s: &str) -> std::result::Result<Constraint, String> {
    let (kw, rest) = split_word(s);
    if kw != "scheme" {
        return Err("expected `scheme`".into());
    }
    let (sch, rest) = delimited(rest, '(', ')')?;
    let idx = items(sch)
        .into_iter()
        .map(|x| x.parse::<usize>().ok().filter(|&i| i >= 1).ok_or_else(|| format!("bad index `{x}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let scheme = Scheme::from_one_based(&idx).map_err(|e| e.to_string())?;
    let (kind, rest) = split_word(rest);
    let body = match kind {
        "tuples" => {
            let (body, tail) = delimited(rest, '{', '}')?;
            expect_end(tail)?;
            let mut tuples = BTreeSet::new();
            for item in items(body) {
                let (inner, tail) = delimited(item, '(', ')')?;
                expect_end(tail)?;
                let t = items(inner).into_iter().map(parse_atom).collect::<std::result::Result<Vec<_>, _>>()?;
                tuples.insert(t);
            }
            Body::Extensional(tuples)
        }
        "lineq" => {
            let (lhs, rhs) = rest.split_once('=').ok_or("expected `=`")?;
            Body::LinearEq(parse_linear(lhs, rhs, &scheme)?)
        }
        "leq" => {
            let (lhs, rhs) = rest.split_once("<=").ok_or("expected `<=`")?;
            Body::LinearLeq(parse_linear(lhs, rhs, &scheme)?)
        }
        other => return Err(format!("unknown constraint body `{other}`")),
    };
    Ok(Constraint::new(id, scheme, body))
}

/// `a1*x1 + a2*x2 - ...` against an integer right-hand side; coefficients
/// are collected per scheme position.
fn parse_linear(lhs: &str, rhs: &str, scheme: &Scheme) -> std::result::Result<LinearForm, String> {
    let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs = vec![0i64; scheme.len()];
    if compact != "0" {
        let mut terms = Vec::new();
        let mut start = 0;
        for (p, ch) in compact.char_indices() {
            if p > 0 && (ch == '+' || ch == '-') {
                terms.push(&compact[start..p]);
                start = p;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, var) = match body.split_once('*') {
                Some((c, v)) => (parse_int(c)?, v),
                None => match body.find('x') {
                    Some(0) => (1, body),
                    Some(p) => (parse_int(&body[..p])?, &body[p..]),
                    None => return Err(format!("bad term `{term}`")),
                },
            };
            let i: usize = var
                .strip_prefix('x')
                .and_then(|v| v.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| format!("bad variable `{var}`"))?;
            let k = scheme.position(i - 1).ok_or_else(|| format!("variable x{i} is not in the scheme"))?;
            coeffs[k] += sign * coef;
        }
    }
    Ok(LinearForm { coeffs, rhs: parse_int(rhs)? })
}

fn fmt_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    atoms.into_iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// A domain or component value as it appears in the file format (also used
/// for trace values).
pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Set(s) => format!("{{{}}}", fmt_atoms(s.elements())),
        Value::Interval(i) => i.to_string(),
        Value::Relation(r) => fmt_tuples(r),
        Value::System(s) => {
            let parts: Vec<String> = s
                .inequalities()
                .iter()
                .map(|q| {
                    let scheme = Scheme::new(q.terms.keys().copied().collect()).expect("distinct variables");
                    let form = LinearForm { coeffs: q.terms.values().copied().collect(), rhs: q.rhs };
                    format!("{} <= {}", fmt_linear(&form, &scheme), q.rhs)
                })
                .collect();
            format!("{{{}}}", parts.join("; "))
        }
    }
}

fn fmt_tuples(r: &PowersetValue<Vec<Atom>>) -> String {
    let ts: Vec<String> = r.elements().iter().map(|t| format!("({})", fmt_atoms(t))).collect();
    format!("{{{}}}", ts.join(","))
}

fn fmt_domain(v: &Value) -> String {
    match v {
        Value::Set(s) => format!("set {{{}}}", fmt_atoms(s.elements())),
        Value::Interval(i) => match i.grid() {
            Grid::Int { .. } => format!("int {i}"),
            Grid::Points(p) => {
                let pts: Vec<String> = p.iter().map(|x| fmt_real(x.0)).collect();
                format!("real {{{}}} {i}", pts.join(","))
            }
        },
        other => format!("{} {}", other.kind(), fmt_value(other)),
    }
}

fn fmt_linear(f: &LinearForm, scheme: &Scheme) -> String {
    let mut out = String::new();
    for (k, (&c, &i)) in f.coeffs.iter().zip(scheme.indices()).enumerate() {
        let var = format!("x{}", i + 1);
        let mag = if c.abs() == 1 { var } else { format!("{}*{var}", c.abs()) };
        match (k, c < 0) {
            (0, false) => out.push_str(&mag),
            (0, true) => write!(out, "-{mag}").unwrap(),
            (_, false) => write!(out, " + {mag}").unwrap(),
            (_, true) => write!(out, " - {mag}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn fmt_scheme(s: &Scheme) -> String {
    s.one_based().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Canonical text of a CSP. Synthetic constraints are omitted.
pub fn to_text(p: &Csp) -> String {
    let mut out = String::new();
    for (i, d) in p.domains.iter().enumerate() {
        writeln!(out, "domain {} {}", i + 1, fmt_domain(d)).unwrap();
    }
    for c in p.constraints.iter().filter(|c| !c.synthetic) {
        let body = match &c.body {
            Body::Extensional(t) => {
                let ts: Vec<String> = t.iter().map(|t| format!("({})", fmt_atoms(t))).collect();
                format!("tuples {{{}}}", ts.join(","))
            }
            Body::LinearEq(f) => format!("lineq {} = {}", fmt_linear(f, &c.scheme), f.rhs),
            Body::LinearLeq(f) => format!("leq {} <= {}", fmt_linear(f, &c.scheme), f.rhs),
        };
        writeln!(out, "constraint {} scheme ({}) {body}", c.id, fmt_scheme(&c.scheme)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
domain 1 set {a,b,3}
domain 2 int [0..9]
domain 3 real {-inf,0,1,2,+inf} [0..2]
domain 4 int empty
constraint c1 scheme (1,2) tuples {(a,0),(b,1)}
constraint c2 scheme (2,4) lineq 3*x2 - 5*x4 = 4   # trailing comment
constraint c3 scheme (2) leq -x2 <= 7
constraint cut scheme () leq 0 <= -1
constraint c4 scheme (3) tuples {(0.5),(1.5)}
";

    #[test]
    fn parses_every_form() {
        let p = parse_csp(SAMPLE).unwrap();
        assert_eq!(p.arity(), 4);
        assert_eq!(p.domains[0], Value::set([Atom::Int(3), Atom::sym("a"), Atom::sym("b")]));
        assert_eq!(p.domains[1], Value::Interval(GridInterval::integer(0, 9).unwrap()));
        assert!(p.domains[3].as_interval().unwrap().is_empty());
        assert_eq!(p.domains[2].as_interval().unwrap().to_string(), "[0.0..2.0]");
        assert_eq!(p.constraints[1].body, Body::LinearEq(LinearForm { coeffs: vec![3, -5], rhs: 4 }));
        assert_eq!(p.constraints[2].body, Body::LinearLeq(LinearForm { coeffs: vec![-1], rhs: 7 }));
        assert!(p.constraints[3].scheme.is_empty());
        assert!(p.issues().is_empty(), "{:?}", p.issues());
    }

    #[test]
    fn round_trip_is_identity_on_canonical_text() {
        let p = parse_csp(SAMPLE).unwrap();
        let text = to_text(&p);
        let q = parse_csp(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(to_text(&q), text);
    }

    #[test]
    fn linear_terms_accept_loose_spelling() {
        let p = parse_csp("domain 1 int [0..3]\ndomain 2 int [0..3]\nconstraint c scheme (1,2) lineq x1+2x2 - x1 + 2*x1 = 3\n").unwrap();
        assert_eq!(p.constraints[0].body, Body::LinearEq(LinearForm { coeffs: vec![2, 2], rhs: 3 }));
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("domain 1 set {0}\ndomain 1 set {1}\n", 2),
            ("domain 1 set {0}\nconstraint c scheme (1,1) tuples {(0,0)}\n", 2),
            ("domain 2 set {0}\n", 1),
            ("domain 1 int [3..1]\n", 1),
            ("domain 1 set {0}\nconstraint c scheme (1) lineq x2 = 1\n", 2),
            ("bogus\n", 1),
            ("domain 1 set {0\n", 1),
        ];
        for (src, line) in cases {
            match parse_csp(src) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn synthetic_constraints_are_omitted() {
        let mut p = parse_csp("domain 1 set {0}\nconstraint u scheme (1) tuples {(0)}\n").unwrap();
        p.constraints[0].synthetic = true;
        assert_eq!(to_text(&p), "domain 1 set {0}\n");
    }
}
