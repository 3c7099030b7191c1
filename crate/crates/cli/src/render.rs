//! Plain-text rendering of model documents.

use serde_json::Value;

fn tuple(t: &Value) -> String {
    let parts: Vec<&str> = t
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    format!("({})", parts.join(", "))
}

/// A model document as `states`, relation and valuation lines.
pub fn model(doc: &Value) -> String {
    let list = |key: &str| -> Vec<Value> {
        doc.get(key)
            .and_then(Value::as_array)
            .cloned()
            .unwrap_or_default()
    };
    let states: Vec<String> = list("states")
        .iter()
        .filter_map(|s| s.as_str().map(str::to_string))
        .collect();
    let mut out = format!("states: {}\n", states.join(", "));
    let rel: Vec<String> = list("rel").iter().map(tuple).collect();
    out.push_str(&format!("rel: {}\n", rel.join(" ")));
    if let Some(r2) = doc.get("rel2").and_then(Value::as_array) {
        let r2: Vec<String> = r2.iter().map(tuple).collect();
        out.push_str(&format!("rel2: {}\n", r2.join(" ")));
    }
    if let Some(u) = doc.get("unit").and_then(Value::as_str) {
        out.push_str(&format!("unit: {u}\n"));
    }
    if let Some(val) = doc.get("val").and_then(Value::as_object) {
        for (p, ws) in val {
            let ws: Vec<&str> = ws
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect())
                .unwrap_or_default();
            out.push_str(&format!("V({p}) = {{{}}}\n", ws.join(", ")));
        }
    }
    out
}
