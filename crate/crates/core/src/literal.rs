//! Text formats: class JSON and morphism literals.
//!
//! A cohomology class is `{"terms":[{"zeta":[e1,...,ek],"coeff":"<ring text>"}]}`;
//! a homology class is `{"values":[[[e1,...,ek],"<ring text>"],...]}` or the
//! bare list. Morphism literals are primitives `proj(mask)`, `embed(t,n)`,
//! `diag(t)`, `perm(s1,...,sk)` and `id`, joined by `;` and composed right to
//! left. Factor indices are 1-based; `embed(t,n)` enlarges factor `t` to `P^n`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{CoeffRing, RingElem};
use crate::error::{Error, Result};
use crate::homodual::HomClass;
use crate::spaces::{CohClass, Morphism, Space};

#[derive(Serialize, Deserialize)]
struct TermLiteral {
    zeta: Vec<u32>,
    coeff: String,
}

#[derive(Deserialize)]
struct ClassLiteral {
    terms: Vec<TermLiteral>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HomLiteral {
    Wrapped { values: Vec<(Vec<u32>, String)> },
    Bare(Vec<(Vec<u32>, String)>),
}

fn json_error(text: &str, err: &serde_json::Error) -> Error {
    let offset: usize = text
        .split_inclusive('\n')
        .take(err.line().saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + err.column().saturating_sub(1);
    let token: String = text[offset.min(text.len())..].chars().take(12).collect();
    Error::parse(token, offset, err.to_string())
}

fn check_exponents(space: &Space, zeta: &[u32], item: usize) -> Result<()> {
    if space.contains_monomial(zeta) {
        return Ok(());
    }
    Err(Error::parse(
        format!("{zeta:?}"),
        item,
        format!("entry {item}: not a basis monomial of {space}"),
    ))
}

fn coefficient(ring: &Arc<CoeffRing>, text: &str, item: usize) -> Result<RingElem> {
    RingElem::parse(ring, text).map_err(|e| match e {
        Error::Parse {
            token,
            position,
            message,
        } => Error::parse(token, position, format!("entry {item} coefficient: {message}")),
        other => other,
    })
}

/// Parse a cohomology class; unknown keys such as `space` are ignored.
pub fn parse_class(text: &str, space: &Space, ring: &Arc<CoeffRing>) -> Result<CohClass> {
    let lit: ClassLiteral = serde_json::from_str(text).map_err(|e| json_error(text, &e))?;
    let mut terms = Vec::with_capacity(lit.terms.len());
    for (i, t) in lit.terms.into_iter().enumerate() {
        check_exponents(space, &t.zeta, i)?;
        terms.push((t.zeta, coefficient(ring, &t.coeff, i)?));
    }
    CohClass::from_terms(space, ring, terms)
}

pub fn class_to_json(class: &CohClass) -> Value {
    let terms: Vec<TermLiteral> = class
        .sorted_terms()
        .into_iter()
        .map(|(e, c)| TermLiteral {
            zeta: e.clone(),
            coeff: c.to_string(),
        })
        .collect();
    json!({ "space": class.space().to_string(), "terms": terms })
}

pub fn parse_hom(text: &str, space: &Space, ring: &Arc<CoeffRing>) -> Result<HomClass> {
    let lit: HomLiteral = serde_json::from_str(text).map_err(|e| json_error(text, &e))?;
    let entries = match lit {
        HomLiteral::Wrapped { values } | HomLiteral::Bare(values) => values,
    };
    let mut values = Vec::with_capacity(entries.len());
    for (i, (e, c)) in entries.into_iter().enumerate() {
        check_exponents(space, &e, i)?;
        values.push((e, coefficient(ring, &c, i)?));
    }
    HomClass::from_values(space, ring, values)
}

pub fn hom_to_json(a: &HomClass) -> Value {
    let values: Vec<(Vec<u32>, String)> = a
        .sorted_values()
        .into_iter()
        .map(|(e, v)| (e.clone(), v.to_string()))
        .collect();
    json!({ "space": a.space().to_string(), "values": values })
}

fn split_tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in text.split(';') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead, part.trim()));
        start += part.len() + 1;
    }
    out
}

fn parse_args(token: &str, pos: usize) -> Result<(&str, Vec<&str>)> {
    if token == "id" {
        return Ok(("id", Vec::new()));
    }
    let open = token
        .find('(')
        .ok_or_else(|| Error::parse(token, pos, "expected name(arguments)"))?;
    let inner = token[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::parse(token, pos, "missing closing parenthesis"))?;
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    Ok((&token[..open], args))
}

fn index_arg(arg: &str, token: &str, pos: usize, bound: usize) -> Result<usize> {
    let v: usize = arg
        .parse()
        .map_err(|_| Error::parse(arg, pos, format!("bad integer in {token}")))?;
    if v == 0 || v > bound {
        return Err(Error::parse(arg, pos, format!("factor index must be in 1..={bound}")));
    }
    Ok(v - 1)
}

fn primitive(token: &str, pos: usize, source: &Space) -> Result<Morphism> {
    let (name, args) = parse_args(token, pos)?;
    let k = source.num_factors();
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::parse(token, pos, format!("{name} takes {n} argument(s)")))
        }
    };
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => Error::parse(token, pos, other.to_string()),
    };
    match name {
        "id" => Ok(Morphism::identity(source)),
        "proj" => {
            if k > 0 {
                arity(1)?;
            }
            let mask = args.first().copied().unwrap_or("");
            if mask.len() != k || !mask.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::parse(mask, pos, format!("mask must be {k} binary digits")));
            }
            Morphism::projection(source, mask.chars().map(|c| c == '1').collect()).map_err(wrap)
        }
        "embed" => {
            arity(2)?;
            let t = index_arg(args[0], token, pos, k)?;
            let n: u32 = args[1]
                .parse()
                .map_err(|_| Error::parse(args[1], pos, "bad target dimension"))?;
            if n < source.factor(t) {
                return Err(Error::parse(
                    token,
                    pos,
                    format!("cannot embed P{} into P{n}", source.factor(t)),
                ));
            }
            Morphism::embed_into(source, t, n).map_err(wrap)
        }
        "diag" => {
            arity(1)?;
            let t = index_arg(args[0], token, pos, k)?;
            Morphism::diagonal(source, t).map_err(wrap)
        }
        "perm" => {
            arity(k)?;
            let sigma = args
                .iter()
                .map(|a| index_arg(a, token, pos, k))
                .collect::<Result<Vec<_>>>()?;
            Morphism::permutation(source, sigma).map_err(wrap)
        }
        other => Err(Error::parse(other, pos, "unknown morphism")),
    }
}

/// Parse a morphism literal whose rightmost primitive starts at `source`.
pub fn parse_morphism(text: &str, source: &Space) -> Result<Morphism> {
    let tokens = split_tokens(text);
    let mut current: Option<Morphism> = None;
    for &(pos, token) in tokens.iter().rev() {
        if token.is_empty() {
            return Err(Error::parse(token, pos, "empty morphism"));
        }
        let from = current.as_ref().map_or(source, Morphism::target).clone();
        let step = primitive(token, pos, &from)?;
        current = Some(match current {
            None => step,
            Some(prev) => prev.then(&step)?,
        });
    }
    current.ok_or_else(|| Error::parse(text, 0, "empty morphism"))
}
