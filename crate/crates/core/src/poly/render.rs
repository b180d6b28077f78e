use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use super::{Monomial, Polynomial, VarId};
use crate::error::{Error, Result};

fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let key = |m: &Monomial| {
        let lam = m.exponent(VarId::Lambda);
        let w: u32 = m
            .iter()
            .filter(|p| p.0 != VarId::Lambda)
            .map(|(v, e)| v.degree().unwrap_or(1) * e)
            .sum();
        (lam, w)
    };
    key(b).cmp(&key(a)).then_with(|| a.cmp(b))
}

impl Polynomial {
    /// Terms in display order: descending degree, then ascending variable order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|a, b| display_cmp(a.0, b.0));
        t
    }

    pub fn to_text(&self) -> String {
        render(self, false)
    }

    pub fn to_latex(&self) -> String {
        render(self, true)
    }

    pub fn to_json(&self) -> Value {
        let vars: Vec<String> = self.variables().iter().map(|v| v.to_string()).collect();
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let exps: Map<String, Value> =
                    m.iter().map(|(v, e)| (v.to_string(), json!(e))).collect();
                json!({ "exps": exps, "coeff": c.to_string() })
            })
            .collect();
        json!({ "vars": vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Polynomial> {
        let bad = |what: &str| Error::Parse(format!("polynomial json: {what}"));
        let declared: BTreeSet<VarId> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("missing vars"))?
            .iter()
            .map(|s| s.as_str().ok_or_else(|| bad("var name")).and_then(str::parse))
            .collect::<Result<_>>()?;
        let mut p = Polynomial::zero();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let coeff: BigInt = t["coeff"]
                .as_str()
                .ok_or_else(|| bad("coeff"))?
                .parse()
                .map_err(|_| bad("coeff"))?;
            let mut pairs = Vec::new();
            for (name, e) in t["exps"].as_object().ok_or_else(|| bad("exps"))? {
                let var: VarId = name.parse()?;
                if !declared.contains(&var) {
                    return Err(bad("undeclared variable"));
                }
                let e = e.as_u64().ok_or_else(|| bad("exponent"))? as u32;
                pairs.push((var, e));
            }
            p.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(p)
    }

    /// Parse the text form produced by [`Polynomial::to_text`], e.g. `x_1*x_2^2 - 3*q_1_2 + 1`.
    pub fn parse(s: &str) -> Result<Polynomial> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut p = Polynomial::zero();
        let mut rest = src.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let mut coeff = BigInt::one();
            let mut pairs = Vec::new();
            for factor in term.split('*') {
                if factor.as_bytes().first().is_some_and(u8::is_ascii_digit) {
                    let c: BigInt = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
                    coeff *= c;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?,
                    ),
                    None => (factor, 1),
                };
                pairs.push((name.parse::<VarId>()?, e));
            }
            if negative {
                coeff = -coeff;
            }
            p.add_term(Monomial::from_pairs(pairs), coeff);
            rest = tail;
        }
        Ok(p)
    }
}

fn render(p: &Polynomial, latex: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.sorted_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        let factors: Vec<String> = m
            .iter()
            .map(|(v, e)| match (latex, e) {
                (true, 1) => v.latex(),
                (true, _) => format!("{}^{{{e}}}", v.latex()),
                (false, 1) => v.to_string(),
                (false, _) => format!("{v}^{e}"),
            })
            .collect();
        if m.is_one() {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
                if !latex {
                    out.push('*');
                }
            }
            out.push_str(&factors.join(if latex { "" } else { "*" }));
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s)
    }
}

/// Shorthand used throughout the tests: panics on malformed input.
pub fn poly(s: &str) -> Polynomial {
    Polynomial::parse(s).unwrap_or_else(|e| panic!("{e}: `{s}`"))
}
