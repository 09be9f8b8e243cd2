use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// the property this check exercises
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), verdict: true, checks: vec![], data: Value::Null }
    }

    pub fn check(&mut self, name: impl Into<String>, property: &str, passed: bool, detail: Option<String>) -> &mut Check {
        self.verdict &= passed;
        self.checks.push(Check { name: name.into(), property: property.into(), passed, detail, millis: None });
        self.checks.last_mut().expect("just pushed")
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "[{}] {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.property);
            if let Some(ms) = c.millis {
                let _ = write!(out, " {ms}ms");
            }
            out.push('\n');
            if let Some(d) = &c.detail {
                for line in d.lines() {
                    let _ = writeln!(out, "    {line}");
                }
            }
        }
        if !self.data.is_null() {
            render_value(&mut out, &self.data, 0);
        }
        let _ = writeln!(out, "{}: {}", self.command, if self.verdict { "PASS" } else { "FAIL" });
        out
    }
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, indent + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline(x));
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", inline(v));
        }
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdict_is_conjunction() {
        let mut r = Report::new("x");
        r.check("a", "p", true, None);
        assert!(r.verdict);
        r.check("b", "p", false, Some("why".into()));
        assert!(!r.verdict);
        let text = r.to_text();
        assert!(text.contains("[FAIL] b (p)\n    why\n"));
        assert!(text.ends_with("x: FAIL\n"));
    }

    #[test]
    fn text_renders_nested_data() {
        let r = Report::new("solve").with_data(json!({"Y": [["1", "t"], ["0", "1"]], "meta": {"N": 4}}));
        let text = r.to_text();
        assert!(text.contains("Y: [[1, t], [0, 1]]\n"));
        assert!(text.contains("meta:\n  N: 4\n"));
    }
}
