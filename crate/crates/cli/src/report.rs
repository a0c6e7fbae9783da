use pathdef::Verdict;
use serde::{Deserialize, Serialize};

/// Output of one command. Text and JSON are renderings of the same value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub key: String,
    pub value: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), verdict: None, entries: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push(Entry { key: key.into(), value: value.into() });
    }

    pub fn line(&mut self, value: impl Into<String>) {
        self.push(String::new(), value);
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = Some(v.as_str().to_string());
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_deref() {
            Some("fail") => 1,
            Some("inconclusive") => 3,
            _ => 0,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if e.key.is_empty() {
                out.push_str(&e.value);
            } else {
                out.push_str(&format!("{}: {}", e.key, e.value));
            }
            out.push('\n');
        }
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("mc");
        r.push("x*y*x", "ok");
        r.line("λ - μ = 0");
        let r = r.with_verdict(Verdict::Fail);
        let back: Report = serde_json::from_str(&r.json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.exit_code(), 1);
        assert_eq!(r.text(), "x*y*x: ok\nλ - μ = 0\nverdict: fail\n");
    }
}
