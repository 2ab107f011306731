//! Text forms for groups, words and cone descriptors.
//!
//! Words serialize as `[[name, exp], …]` lists and also parse from the compact
//! form `x y^-3` (`1` is the identity). Cones are JSON objects tagged by `kind`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::cone::{Cone, DynamicalSpec, Sign, Variant};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::ses::{Embedding, Ses};
use crate::surd::{IntMatrix2, QuadNum};
use crate::word::Word;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses a group from a shorthand (`klein`, `z`, `z2`, `zN`, `f2`, `fN`,
/// `sol`, `zxf2`, `z*z`) or from its JSON form.
pub fn parse_group(s: &str) -> Result<Group> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let group = match lower.as_str() {
        "klein" => Group::Klein,
        "z" => Group::zpow(1),
        "sol" => Group::sol(),
        "zxf2" => Group::DirectProduct { factors: vec![Group::zpow(1), Group::free(2)] },
        "z*z" => Group::FreeProduct { factors: vec![Group::zpow(1), Group::zpow(1)] },
        _ if lower.starts_with('{') => serde_json::from_str(t).map_err(|e| perr(format!("group: {e}")))?,
        _ => {
            let (family, n) = lower.split_at(1);
            let n: usize = n.parse().map_err(|_| perr(format!("unknown group '{t}'")))?;
            match family {
                "z" => Group::zpow(n),
                "f" => Group::free(n),
                _ => return Err(perr(format!("unknown group '{t}'"))),
            }
        }
    };
    group.validate()?;
    Ok(group)
}

pub fn group_to_json(g: &Group) -> Value {
    serde_json::to_value(g).expect("groups serialize")
}

/// Parses `sol`, `klein`, `zxf2` or a JSON sequence descriptor.
pub fn parse_ses(s: &str) -> Result<Ses> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "sol" => Ok(Ses::sol()),
        "klein" => Ok(Ses::KleinOverZ),
        "zxf2" => Ok(Ses::direct(Group::zpow(1), Group::free(2))),
        _ => serde_json::from_str(t).map_err(|e| perr(format!("sequence: {e}"))),
    }
}

pub fn ses_to_json(s: &Ses) -> Value {
    serde_json::to_value(s).expect("sequences serialize")
}

/// Parses `x y^-3`, `x*y^-3` or `1` against the group's generator names.
pub fn parse_word(group: &Group, s: &str) -> Result<Word> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| perr(format!("word: {e}")))?;
        return word_from_json(group, &v);
    }
    let mut w = Word::identity();
    for tok in t.split(|c: char| c.is_whitespace() || c == '*').filter(|x| !x.is_empty()) {
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| perr(format!("bad exponent in '{tok}'")))?),
            None => (tok, 1),
        };
        let gen = group
            .generator_index(name)
            .ok_or_else(|| perr(format!("unknown generator '{name}'; expected one of {:?}", group.generator_names())))?;
        w.push(gen, exp);
    }
    group.normalize(&w)
}

/// `[[name, exp], …]`, the inverse of the list form accepted by [`parse_word`].
pub fn word_to_json(group: &Group, w: &Word) -> Value {
    let names = group.generator_names();
    Value::Array(w.syllables().iter().map(|s| json!([names[s.gen], s.exp])).collect())
}

fn word_from_json(group: &Group, v: &Value) -> Result<Word> {
    match v {
        Value::String(s) => parse_word(group, s),
        Value::Array(items) => {
            let mut w = Word::identity();
            for it in items {
                let pair = it.as_array().filter(|p| p.len() == 2).ok_or_else(|| perr("word pairs are [name, exp]"))?;
                let name = pair[0].as_str().ok_or_else(|| perr("generator name must be a string"))?;
                let exp = pair[1].as_i64().ok_or_else(|| perr("exponent must be an integer"))?;
                let gen = group.generator_index(name).ok_or_else(|| perr(format!("unknown generator '{name}'")))?;
                w.push(gen, exp);
            }
            group.normalize(&w)
        }
        _ => Err(perr("a word is a string or a list of [name, exp] pairs")),
    }
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(n) => json!(n),
        None => json!(b.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| perr("surd entries must be integers")),
        Value::String(s) => s.parse().map_err(|_| perr(format!("bad integer '{s}'"))),
        _ => Err(perr("surd entries must be integers")),
    }
}

/// `(p + q√d)/r` as `[p, q, r, d]`.
pub fn surd_to_json(x: &QuadNum) -> Value {
    json!([big_to_json(x.rational_part()), big_to_json(x.surd_part()), big_to_json(x.denominator()), x.radicand()])
}

pub fn surd_from_json(v: &Value) -> Result<QuadNum> {
    let a = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| perr("a surd is [p, q, r, d]"))?;
    let d = a[3].as_u64().ok_or_else(|| perr("radicand must be a nonnegative integer"))?;
    Ok(QuadNum::new(big_from_json(&a[0])?, big_from_json(&a[1])?, big_from_json(&a[2])?, d)?)
}

fn sign_to_json(s: Sign) -> Value {
    json!(s.as_int())
}

fn sign_from_json(v: &Value) -> Result<Sign> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(1) => Ok(Sign::Positive),
            Some(-1) => Ok(Sign::Negative),
            _ => Err(perr("a sign is 1 or -1")),
        },
        Value::String(s) if s == "+" => Ok(Sign::Positive),
        Value::String(s) if s == "-" => Ok(Sign::Negative),
        _ => Err(perr("a sign is 1, -1, \"+\" or \"-\"")),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("missing field '{key}'")))
}

pub fn cone_to_json(c: &Cone) -> Value {
    match c {
        Cone::Integer { sign } => json!({ "kind": "integer", "sign": sign_to_json(*sign) }),
        Cone::Slope { a, variant } => json!({ "kind": "slope", "a": a, "variant": variant.symbol() }),
        Cone::QuadSlope { a, sign } => json!({
            "kind": "quad_slope",
            "a": [surd_to_json(&a[0]), surd_to_json(&a[1])],
            "sign": sign_to_json(*sign),
        }),
        Cone::Klein { ex, ey } => json!({ "kind": "klein", "ex": sign_to_json(*ex), "ey": sign_to_json(*ey) }),
        Cone::Lex { ses, kernel, quotient } => json!({
            "kind": "lex",
            "ses": ses_to_json(ses),
            "kernel": cone_to_json(kernel),
            "quotient": cone_to_json(quotient),
        }),
        Cone::Dynamical(spec) => {
            if *spec == DynamicalSpec::default() {
                json!({ "kind": "dynamical" })
            } else {
                json!({
                    "kind": "dynamical",
                    "images": spec.images.iter().map(|m| m.rows()).collect::<Vec<_>>(),
                    "basepoints": spec.basepoints.iter().map(surd_to_json).collect::<Vec<_>>(),
                })
            }
        }
        Cone::Conjugate { base, by } => json!({
            "kind": "conjugate",
            "base": cone_to_json(base),
            "by": word_to_json(&base.group(), by),
        }),
        Cone::KernelConjugate { ses, base, by } => json!({
            "kind": "kernel_conjugate",
            "ses": ses_to_json(ses),
            "base": cone_to_json(base),
            "by": word_to_json(&ses.total(), by),
        }),
        Cone::Restriction { base, embedding } => json!({
            "kind": "restriction",
            "base": cone_to_json(base),
            "sub": group_to_json(&embedding.sub),
            "images": embedding.images.iter().map(|w| word_to_json(&embedding.ambient, w)).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_cone(s: &str) -> Result<Cone> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr(format!("cone: {e}")))?;
    cone_from_json(&v)
}

pub fn cone_from_json(v: &Value) -> Result<Cone> {
    let obj = v.as_object().ok_or_else(|| perr("a cone is a JSON object"))?;
    let kind = field(obj, "kind")?.as_str().ok_or_else(|| perr("'kind' must be a string"))?;
    let cone = match kind {
        "integer" => Cone::Integer { sign: sign_from_json(field(obj, "sign")?)? },
        "slope" => {
            let a: [i64; 2] =
                serde_json::from_value(field(obj, "a")?.clone()).map_err(|e| perr(format!("slope 'a': {e}")))?;
            let variant = field(obj, "variant")?
                .as_str()
                .and_then(Variant::parse)
                .ok_or_else(|| perr("variant is one of ++, +-, -+, --"))?;
            crate::cone::slope_cone(a, variant)?
        }
        "quad_slope" => {
            let a = field(obj, "a")?.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr("'a' has two surds"))?;
            crate::cone::quad_slope_cone(
                [surd_from_json(&a[0])?, surd_from_json(&a[1])?],
                sign_from_json(field(obj, "sign")?)?,
            )?
        }
        "klein" => Cone::Klein { ex: sign_from_json(field(obj, "ex")?)?, ey: sign_from_json(field(obj, "ey")?)? },
        "lex" => {
            let ses: Ses = serde_json::from_value(field(obj, "ses")?.clone())
                .map_err(|e| perr(format!("lex 'ses': {e}")))?;
            crate::cone::lex_cone(ses, cone_from_json(field(obj, "kernel")?)?, cone_from_json(field(obj, "quotient")?)?)?
        }
        "dynamical" => {
            let mut spec = DynamicalSpec::default();
            if let Some(images) = obj.get("images") {
                let rows: Vec<[[i64; 2]; 2]> =
                    serde_json::from_value(images.clone()).map_err(|e| perr(format!("images: {e}")))?;
                spec.images = rows.into_iter().map(IntMatrix2::from_rows).collect();
            }
            if let Some(bps) = obj.get("basepoints") {
                let arr = bps.as_array().ok_or_else(|| perr("basepoints is a list of surds"))?;
                spec.basepoints = arr.iter().map(surd_from_json).collect::<Result<_>>()?;
            }
            crate::cone::dynamical_cone_with(spec)?
        }
        "conjugate" => {
            let base = cone_from_json(field(obj, "base")?)?;
            let by = word_from_json(&base.group(), field(obj, "by")?)?;
            crate::cone::conjugate_raw(&base, &by)?
        }
        "kernel_conjugate" => {
            let ses: Ses = serde_json::from_value(field(obj, "ses")?.clone())
                .map_err(|e| perr(format!("kernel_conjugate 'ses': {e}")))?;
            let base = cone_from_json(field(obj, "base")?)?;
            if base.group() != ses.kernel() {
                return Err(Error::ContextMismatch("base cone is not on the kernel".into()));
            }
            let by = word_from_json(&ses.total(), field(obj, "by")?)?;
            Cone::KernelConjugate { ses, base: Box::new(base), by }
        }
        "restriction" => {
            let base = cone_from_json(field(obj, "base")?)?;
            let sub: Group = serde_json::from_value(field(obj, "sub")?.clone())
                .map_err(|e| perr(format!("restriction 'sub': {e}")))?;
            let ambient = base.group();
            let images = field(obj, "images")?
                .as_array()
                .ok_or_else(|| perr("'images' is a list of words"))?
                .iter()
                .map(|w| word_from_json(&ambient, w))
                .collect::<Result<Vec<_>>>()?;
            let embedding = Embedding::new(sub, ambient, images)?;
            Cone::Restriction { base: Box::new(base), embedding }
        }
        other => return Err(perr(format!("unknown cone kind '{other}'"))),
    };
    Ok(cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{dynamical_cone, integer_cone, klein_cones, lex_cone, quad_slope_cone, slope_cone};
    use crate::group::KLEIN_Y;

    #[test]
    fn groups() {
        assert_eq!(parse_group("klein").unwrap(), Group::Klein);
        assert_eq!(parse_group("z2").unwrap(), Group::zpow(2));
        assert_eq!(parse_group("f3").unwrap(), Group::free(3));
        let g = Group::sol();
        assert_eq!(parse_group(&group_to_json(&g).to_string()).unwrap(), g);
        assert!(parse_group("q8").is_err());
    }

    #[test]
    fn words() {
        let k = Group::Klein;
        assert_eq!(parse_word(&k, "y^-3 x").unwrap(), Word::from_pairs([(KLEIN_Y, -3), (0, 1)]));
        assert_eq!(parse_word(&k, "1").unwrap(), Word::identity());
        assert_eq!(parse_word(&k, "[[\"y\", 2]]").unwrap(), Word::pow(KLEIN_Y, 2));
        assert!(parse_word(&k, "z").is_err());
        let zz = parse_group("z*z").unwrap();
        assert_eq!(parse_word(&zz, "a b a^-1 b^-1").unwrap().len(), 4);
        let w = parse_word(&Group::sol(), "t e1 t^-1").unwrap();
        assert_eq!(parse_word(&Group::sol(), &Group::sol().display_word(&w)).unwrap(), w);
    }

    #[test]
    fn cone_round_trip() {
        let ses = Ses::sol();
        let lex = lex_cone(ses.clone(), slope_cone([1, 0], crate::cone::Variant::PlusPlus).unwrap(), integer_cone(Sign::Positive))
            .unwrap();
        let mut cones = klein_cones();
        cones.extend([
            slope_cone([2, 3], crate::cone::Variant::PlusMinus).unwrap(),
            quad_slope_cone([QuadNum::int(1), QuadNum::sqrt(2)], Sign::Negative).unwrap(),
            lex.clone(),
            dynamical_cone(),
            crate::cone::conjugate_raw(&lex, &Word::gen(2)).unwrap(),
            Cone::KernelConjugate { ses: ses.clone(), base: Box::new(slope_cone([1, 1], crate::cone::Variant::MinusMinus).unwrap()), by: Word::gen(2) },
            Cone::Restriction { base: Box::new(lex), embedding: ses.kernel_embedding().unwrap() },
        ]);
        for c in cones {
            let text = cone_to_json(&c).to_string();
            assert_eq!(parse_cone(&text).unwrap(), c, "{text}");
            assert_eq!(cone_to_json(&parse_cone(&text).unwrap()).to_string(), text);
        }
    }

    #[test]
    fn documented_forms_parse() {
        assert_eq!(
            parse_cone(r#"{"kind":"klein","ex":1,"ey":-1}"#).unwrap(),
            Cone::Klein { ex: Sign::Positive, ey: Sign::Negative }
        );
        assert_eq!(
            parse_cone(r#"{"kind":"slope","a":[2,3],"variant":"+-"}"#).unwrap(),
            slope_cone([2, 3], crate::cone::Variant::PlusMinus).unwrap()
        );
        assert_eq!(parse_cone(r#"{"kind":"dynamical"}"#).unwrap(), dynamical_cone());
        assert!(parse_cone(r#"{"kind":"slope","a":[0,0],"variant":"++"}"#).is_err());
        assert!(parse_cone(r#"{"kind":"mystery"}"#).is_err());
    }
}
