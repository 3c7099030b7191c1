//! Tagged JSON encoding of formula ASTs: `{"k":"and","l":..,"r":..}`.

use serde_json::{json, Value};

use super::formula::{FreshTag, LFormula, LKind};
use super::modal::ModalFormula;
use crate::error::{Error, Result};

pub fn lformula_to_json(f: &LFormula) -> Value {
    let bin = |k: &str, a: &LFormula, b: &LFormula| json!({"k": k, "l": lformula_to_json(a), "r": lformula_to_json(b)});
    let un = |k: &str, a: &LFormula| json!({"k": k, "c": lformula_to_json(a)});
    match f.kind() {
        LKind::Atom(n) => json!({"k": "atom", "name": &**n}),
        LKind::Fresh(FreshTag::NegOf(a)) => json!({"k": "fresh", "of": lformula_to_json(a)}),
        LKind::Fresh(FreshTag::BotMark) => json!({"k": "p_bot"}),
        LKind::Fresh(FreshTag::TopMark) => json!({"k": "p_top"}),
        LKind::Bottom => json!({"k": "bot"}),
        LKind::Top => json!({"k": "top"}),
        LKind::Unit => json!({"k": "one"}),
        LKind::And(a, b) => bin("and", a, b),
        LKind::Or(a, b) => bin("or", a, b),
        LKind::Prod(a, b) => bin("prod", a, b),
        LKind::Under(a, b) => bin("under", a, b),
        LKind::Over(a, b) => bin("over", a, b),
        LKind::Not(a) => un("not", a),
        LKind::Dia(a) => un("dia", a),
        LKind::BoxDown(a) => un("boxdown", a),
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::Json(format!("missing field `{name}` in {v}")))
}

fn tag(v: &Value) -> Result<&str> {
    field(v, "k")?
        .as_str()
        .ok_or_else(|| Error::Json(format!("`k` must be a string in {v}")))
}

pub fn lformula_from_json(v: &Value) -> Result<LFormula> {
    let sub = |n: &str| lformula_from_json(field(v, n)?);
    Ok(match tag(v)? {
        "atom" => {
            let name = field(v, "name")?
                .as_str()
                .ok_or_else(|| Error::Json("atom name must be a string".into()))?;
            LFormula::atom(name)
        }
        "fresh" => LFormula::neg_letter(&sub("of")?),
        "p_bot" => LFormula::p_bot(),
        "p_top" => LFormula::p_top(),
        "bot" => LFormula::bot(),
        "top" => LFormula::top(),
        "one" => LFormula::unit(),
        "and" => LFormula::and(&sub("l")?, &sub("r")?),
        "or" => LFormula::or(&sub("l")?, &sub("r")?),
        "prod" => LFormula::prod(&sub("l")?, &sub("r")?),
        "under" => LFormula::under(&sub("l")?, &sub("r")?),
        "over" => LFormula::over(&sub("l")?, &sub("r")?),
        "not" => LFormula::not(&sub("c")?),
        "dia" => LFormula::dia(&sub("c")?),
        "boxdown" => LFormula::box_down(&sub("c")?),
        k => return Err(Error::Json(format!("unknown formula tag `{k}`"))),
    })
}

pub fn modal_to_json(f: &ModalFormula) -> Value {
    let bin = |k: &str, a: &ModalFormula, b: &ModalFormula| json!({"k": k, "l": modal_to_json(a), "r": modal_to_json(b)});
    match f {
        ModalFormula::Atom(n) => json!({"k": "atom", "name": n}),
        ModalFormula::Bottom => json!({"k": "bot"}),
        ModalFormula::And(a, b) => bin("and", a, b),
        ModalFormula::Or(a, b) => bin("or", a, b),
        ModalFormula::Implies(a, b) => bin("implies", a, b),
        ModalFormula::Not(a) => json!({"k": "not", "c": modal_to_json(a)}),
        ModalFormula::Diamond(a) => json!({"k": "dia", "c": modal_to_json(a)}),
    }
}

pub fn modal_from_json(v: &Value) -> Result<ModalFormula> {
    let sub = |n: &str| modal_from_json(field(v, n)?);
    Ok(match tag(v)? {
        "atom" => ModalFormula::atom(
            field(v, "name")?
                .as_str()
                .ok_or_else(|| Error::Json("atom name must be a string".into()))?,
        ),
        "bot" => ModalFormula::Bottom,
        "and" => ModalFormula::and(sub("l")?, sub("r")?),
        "or" => ModalFormula::or(sub("l")?, sub("r")?),
        "implies" => ModalFormula::implies(sub("l")?, sub("r")?),
        "not" => ModalFormula::not(sub("c")?),
        "dia" => ModalFormula::diamond(sub("c")?),
        k => return Err(Error::Json(format!("unknown modal tag `{k}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_lambek, parse_modal};

    #[test]
    fn round_trip() {
        let f = parse_lambek("p{~p} * (a \\ [v]<>b) \\/ one /\\ p_top").unwrap();
        let v = lformula_to_json(&f);
        assert_eq!(lformula_from_json(&v).unwrap(), f);
        assert_eq!(v["k"], "or");
        let m = parse_modal("[](p -> q) -> <>bot").unwrap();
        assert_eq!(modal_from_json(&modal_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_unknown_tags() {
        assert!(lformula_from_json(&json!({"k": "xor"})).is_err());
        assert!(lformula_from_json(&json!({"k": "and", "l": {"k": "bot"}})).is_err());
    }
}
