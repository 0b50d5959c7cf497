//! Reports in a text and a JSON rendering. Entries keep their insertion order in both.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Int(i64),
    UInt(u64),
    Bool(bool),
    Ints(Vec<i64>),
    /// `(degree, dimension)` rows.
    Dims(Vec<(i64, usize)>),
    Lines(Vec<String>),
    Group(Vec<(String, Value)>),
    List(Vec<Value>),
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Text(t) => s.serialize_str(t),
            Value::Int(n) => s.serialize_i64(*n),
            Value::UInt(n) => s.serialize_u64(*n),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Ints(v) => v.serialize(s),
            Value::Dims(rows) => {
                let mut m = s.serialize_map(Some(rows.len()))?;
                for (d, n) in rows {
                    m.serialize_entry(&d.to_string(), n)?;
                }
                m.end()
            }
            Value::Lines(v) => v.serialize(s),
            Value::Group(entries) => entries_map(entries, s),
            Value::List(v) => v.serialize(s),
        }
    }
}

fn entries_map<S: Serializer>(entries: &[(String, Value)], s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(entries.len()))?;
    for (k, v) in entries {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

pub fn dims(rows: &[(i64, usize)]) -> Value {
    Value::Dims(rows.to_vec())
}

pub fn text(s: impl Into<String>) -> Value {
    Value::Text(s.into())
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub window: Option<(i64, i64)>,
    pub seed: Option<u64>,
    pub verdict: String,
    pub entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: impl Into<String>) -> Report {
        Report { command: command.into(), window: None, seed: None, verdict: verdict.into(), entries: Vec::new() }
    }

    pub fn window(mut self, lo: i64, hi: i64) -> Report {
        self.window = Some((lo, hi));
        self
    }

    pub fn seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, key: impl Into<String>, v: Value) {
        self.entries.push((key.into(), v));
    }

    fn header(&self) -> Vec<(String, Value)> {
        let mut e = vec![("command".to_string(), text(&self.command))];
        if let Some((lo, hi)) = self.window {
            e.push(("window".into(), Value::Ints(vec![lo, hi])));
        }
        if let Some(s) = self.seed {
            e.push(("seed".into(), Value::UInt(s)));
        }
        e.push(("verdict".into(), text(&self.verdict)));
        e.extend(self.entries.iter().cloned());
        e
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::pretty(&mut out);
        entries_map(&self.header(), &mut ser).expect("report serializes");
        String::from_utf8(out).expect("utf-8 json") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header() {
            if k == "window" {
                if let Some((lo, hi)) = self.window {
                    out.push_str(&format!("window: {lo}:{hi}\n"));
                }
                continue;
            }
            render(&mut out, &k, &v, 0);
        }
        out
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Text(t) => out.push_str(&format!("{pad}{key}: {t}\n")),
        Value::Int(n) => out.push_str(&format!("{pad}{key}: {n}\n")),
        Value::UInt(n) => out.push_str(&format!("{pad}{key}: {n}\n")),
        Value::Bool(b) => out.push_str(&format!("{pad}{key}: {}\n", if *b { "yes" } else { "no" })),
        Value::Ints(v) => {
            let s: Vec<String> = v.iter().map(i64::to_string).collect();
            out.push_str(&format!("{pad}{key}: ({})\n", s.join(", ")));
        }
        Value::Dims(rows) => {
            out.push_str(&format!("{pad}{key}:\n"));
            if rows.is_empty() {
                out.push_str(&format!("{pad}  (none)\n"));
            }
            for (d, n) in rows {
                out.push_str(&format!("{pad}  {d:>4}  {n}\n"));
            }
        }
        Value::Lines(lines) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for l in lines {
                out.push_str(&format!("{pad}  {l}\n"));
            }
        }
        Value::Group(entries) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in entries {
                render(out, k, v, depth + 1);
            }
        }
        Value::List(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (n, item) in items.iter().enumerate() {
                render(out, &format!("[{n}]"), item, depth + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("H A", "computed").window(-2, 0);
        r.push("dims", dims(&[(-2, 1), (-1, 0), (0, 1)]));
        r.push("part", Value::Group(vec![("ok".into(), Value::Bool(true)), ("shifts".into(), Value::Ints(vec![2, -1]))]));
        r
    }

    #[test]
    fn text_rendering() {
        let t = sample().to_text();
        assert_eq!(t, "command: H A\nwindow: -2:0\nverdict: computed\ndims:\n    -2  1\n    -1  0\n     0  1\npart:\n  ok: yes\n  shifts: (2, -1)\n");
    }

    #[test]
    fn json_keeps_order() {
        let j = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["dims"]["-2"], 1);
        assert_eq!(v["window"], serde_json::json!([-2, 0]));
        assert!(j.find("\"command\"").unwrap() < j.find("\"verdict\"").unwrap());
        assert!(j.find("\"verdict\"").unwrap() < j.find("\"dims\"").unwrap());
    }
}
