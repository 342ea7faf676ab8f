//! Plain-text rendering of a JSON report, one `path  value` line per leaf.
//! Arrays of scalars and of short scalar tuples stay on one line.

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let Value::Array(items) = v else { return None };
    let parts: Option<Vec<String>> = items
        .iter()
        .map(|x| match x {
            Value::Array(t) if t.len() <= 4 => {
                let inner: Option<Vec<String>> = t.iter().map(scalar).collect();
                inner.map(|p| format!("({})", p.join(", ")))
            }
            _ => scalar(x),
        })
        .collect();
    parts.map(|p| format!("[{}]", p.join(" ")))
}

fn walk(v: &Value, path: &str, out: &mut String) {
    if let Some(s) = inline(v) {
        let key = if path.is_empty() { "value" } else { path };
        out.push_str(&format!("{key:<32} {s}\n"));
        return;
    }
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, &p, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattens_nested_objects() {
        let v = serde_json::json!({"a": {"b": 1, "c": [[0, 2], [1, 3]]}, "d": [{"e": null}]});
        let s = render(&v);
        assert!(s.contains("a.b"));
        assert!(s.contains("[(0, 2) (1, 3)]"));
        assert!(s.contains("d[0].e"));
    }
}
