//! JSON spec documents.
//!
//! ```json
//! {"kind": "cvar", "beta": 0.5}
//! {"kind": "higher_moment", "p": 2, "c": 1.2}
//! {"kind": "kusuoka_mixture", "atoms": [[0.0, 0.5], [0.5, 0.5]]}
//! {"kind": "explicit", "support": [0, 2], "vertices": [[0.5, 0.5]],
//!  "hull_mode": "finite_set", "p": "inf"}
//! ```
//!
//! `hull_mode` defaults to `finite_set` and `p` to 1.

use serde_json::{json, Map, Value};

use licorm::transport::{GeneratorSet, HullMode};
use licorm::{Order, Spec};

use crate::error::{CliError, CliResult};
use crate::report::real;

/// Parses and validates a spec document.
pub fn parse_spec(text: &str) -> CliResult<Spec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::parse(format!("spec is not valid JSON: {e}")))?;
    let spec = spec_from_value(&doc)?;
    spec.validate()?;
    Ok(spec)
}

pub fn spec_from_value(doc: &Value) -> CliResult<Spec> {
    let obj = doc.as_object().ok_or_else(|| CliError::parse("spec must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::parse("spec needs a string field \"kind\""))?;
    match kind {
        "cvar" => {
            only(obj, &["kind", "beta"])?;
            Ok(Spec::CVaR { beta: field(obj, "beta")? })
        }
        "higher_moment" => {
            only(obj, &["kind", "p", "c"])?;
            Ok(Spec::HigherMoment {
                p: field(obj, "p")?,
                c: field(obj, "c")?,
            })
        }
        "kusuoka_mixture" => {
            only(obj, &["kind", "atoms"])?;
            let atoms = rows(obj, "atoms")?
                .into_iter()
                .enumerate()
                .map(|(j, row)| match row[..] {
                    [beta, w] => Ok((beta, w)),
                    _ => Err(CliError::parse(format!("atoms[{j}] must be a [beta, weight] pair"))),
                })
                .collect::<CliResult<_>>()?;
            Ok(Spec::KusuokaMixture { atoms })
        }
        "explicit" => {
            only(obj, &["kind", "support", "vertices", "hull_mode", "p"])?;
            let support = list(obj.get("support"), "support")?;
            let vertices = rows(obj, "vertices")?;
            let mode = match obj.get("hull_mode") {
                None => HullMode::FiniteSet,
                Some(v) => match v.as_str() {
                    Some("finite_set") => HullMode::FiniteSet,
                    Some("convex_hull") => HullMode::ConvexHull,
                    _ => return Err(CliError::parse("hull_mode must be \"finite_set\" or \"convex_hull\"")),
                },
            };
            let p = match obj.get("p") {
                None => Order::Finite(1.0),
                Some(Value::String(s)) if s == "inf" => Order::Infinity,
                Some(v) => Order::finite(v.as_f64().ok_or_else(|| CliError::parse("p must be a number or \"inf\""))?)?,
            };
            Ok(Spec::Explicit {
                set: GeneratorSet::new(support, vertices, mode)?,
                p,
            })
        }
        other => Err(CliError::parse(format!(
            "unknown spec kind {other:?} (expected cvar, higher_moment, kusuoka_mixture or explicit)"
        ))),
    }
}

/// Canonical document for a spec; parsing it yields the same spec.
pub fn spec_to_value(spec: &Spec) -> Value {
    match spec {
        Spec::CVaR { beta } => json!({"kind": "cvar", "beta": real(*beta)}),
        Spec::HigherMoment { p, c } => json!({"kind": "higher_moment", "p": real(*p), "c": real(*c)}),
        Spec::KusuokaMixture { atoms } => json!({
            "kind": "kusuoka_mixture",
            "atoms": atoms.iter().map(|&(b, w)| json!([real(b), real(w)])).collect::<Vec<_>>(),
        }),
        Spec::Explicit { set, p } => json!({
            "kind": "explicit",
            "support": reals(set.support()),
            "vertices": set.vertices().iter().map(|v| reals(v)).collect::<Vec<_>>(),
            "hull_mode": match set.mode() {
                HullMode::FiniteSet => "finite_set",
                HullMode::ConvexHull => "convex_hull",
            },
            "p": match p {
                Order::Infinity => json!("inf"),
                Order::Finite(p) => real(*p),
            },
        }),
    }
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

fn only(obj: &Map<String, Value>, allowed: &[&str]) -> CliResult<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::parse(format!("unexpected spec field {k:?}"))),
        None => Ok(()),
    }
}

fn field(obj: &Map<String, Value>, name: &str) -> CliResult<f64> {
    match obj.get(name) {
        None => Err(CliError::parse(format!("spec needs field {name:?}"))),
        Some(v) => v.as_f64().ok_or_else(|| CliError::parse(format!("{name} must be a number"))),
    }
}

fn list(value: Option<&Value>, name: &str) -> CliResult<Vec<f64>> {
    value
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::parse(format!("{name} must be an array of numbers")))?
        .iter()
        .map(|v| v.as_f64().ok_or_else(|| CliError::parse(format!("{name} must be an array of numbers"))))
        .collect()
}

fn rows(obj: &Map<String, Value>, name: &str) -> CliResult<Vec<Vec<f64>>> {
    obj.get(name)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::parse(format!("{name} must be an array of arrays")))?
        .iter()
        .enumerate()
        .map(|(j, row)| list(Some(row), &format!("{name}[{j}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        assert_eq!(parse_spec(r#"{"kind":"cvar","beta":0.5}"#).unwrap(), Spec::CVaR { beta: 0.5 });
        assert_eq!(
            parse_spec(r#"{"kind":"higher_moment","p":2,"c":1.2}"#).unwrap(),
            Spec::HigherMoment { p: 2.0, c: 1.2 }
        );
        assert_eq!(
            parse_spec(r#"{"kind":"kusuoka_mixture","atoms":[[0,0.5],[0.5,0.5]]}"#).unwrap(),
            Spec::KusuokaMixture { atoms: vec![(0.0, 0.5), (0.5, 0.5)] }
        );
        let spec = parse_spec(r#"{"kind":"explicit","support":[0,2],"vertices":[[0.5,0.5]],"hull_mode":"convex_hull","p":"inf"}"#).unwrap();
        match spec {
            Spec::Explicit { set, p } => {
                assert_eq!(p, Order::Infinity);
                assert_eq!(set.mode(), HullMode::ConvexHull);
                assert_eq!(set.support(), &[0.0, 2.0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn echo_reparses_to_the_same_spec() {
        for text in [
            r#"{"kind":"cvar","beta":0.1}"#,
            r#"{"kind":"higher_moment","p":3,"c":1.7}"#,
            r#"{"kind":"kusuoka_mixture","atoms":[[0.3,0.2],[0.9,0.8]]}"#,
            r#"{"kind":"explicit","support":[0,1,2],"vertices":[[0.5,0,0.5],[0,1,0]],"p":2}"#,
        ] {
            let spec = parse_spec(text).unwrap();
            let echo = crate::report::to_string(&spec_to_value(&spec));
            assert_eq!(parse_spec(&echo).unwrap(), spec, "{echo}");
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        for text in [
            "[]",
            r#"{"beta":0.5}"#,
            r#"{"kind":"cvar"}"#,
            r#"{"kind":"cvar","beta":"x"}"#,
            r#"{"kind":"cvar","beta":0.5,"extra":1}"#,
            r#"{"kind":"kusuoka_mixture","atoms":[[0.5]]}"#,
            r#"{"kind":"explicit","support":[1],"vertices":[[1]],"hull_mode":"hull"}"#,
            r#"{"kind":"unknown"}"#,
        ] {
            assert!(matches!(parse_spec(text), Err(CliError::Parse(_))), "{text}");
        }
    }

    #[test]
    fn out_of_range_parameters_are_validation_errors() {
        let err = parse_spec(r#"{"kind":"cvar","beta":1.2}"#).unwrap_err();
        assert!(matches!(err, CliError::Invalid(_)));
        assert!(err.to_string().contains("beta out of range"));
        assert!(matches!(
            parse_spec(r#"{"kind":"explicit","support":[0,2],"vertices":[[0.9,0.1]]}"#),
            Err(CliError::Invalid(_))
        ));
    }
}
