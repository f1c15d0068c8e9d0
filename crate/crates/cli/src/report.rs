use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{ConfigError, Resolved};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub limit: String,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value: value.into(),
            limit: format!("<= {tol:e}"),
            pass: value <= tol,
        }
    }

    pub fn within(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value: value.into(),
            limit: format!("{target} +/- {tol:e}"),
            pass: (value - target).abs() <= tol,
        }
    }

    pub fn flag(name: &str, value: bool) -> Self {
        Check {
            name: name.into(),
            value: value.into(),
            limit: "true".into(),
            pass: value,
        }
    }

    /// Also requires `ok`.
    pub fn and(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }

    fn shown_value(&self) -> String {
        match &self.value {
            Value::Number(n) => n
                .as_f64()
                .map(|x| format!("{x:.3e}"))
                .unwrap_or_else(|| n.to_string()),
            other => other.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub config: Resolved,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, cfg: &Resolved, checks: Vec<Check>) -> Self {
        let timestamp_unix = cfg.timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Report {
            command: command.into(),
            timestamp_unix,
            config: cfg.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            details: Map::new(),
        }
    }

    pub fn detail<T: Serialize>(mut self, key: &str, value: T) -> Self {
        let v = serde_json::to_value(value).expect("report details serialize");
        self.details.insert(key.into(), v);
        self
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn text_lines(&self) -> Vec<String> {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = vec![format!(
            "{}: {}",
            self.command,
            if self.pass { "PASS" } else { "FAIL" }
        )];
        for c in &self.checks {
            out.push(format!(
                "  {:<width$}  {:>12}  {:<18} {}",
                c.name,
                c.shown_value(),
                c.limit,
                if c.pass { "ok" } else { "FAILED" }
            ));
        }
        out
    }

    pub fn emit(&self, cfg: &Resolved) -> Result<(), ConfigError> {
        self.emit_with(cfg, |_| {})
    }

    /// Writes the JSON report to `--out` if given and prints either the JSON
    /// or the text summary, extended by `extra`.
    pub fn emit_with<F: FnOnce(&mut Vec<String>)>(
        &self,
        cfg: &Resolved,
        extra: F,
    ) -> Result<(), ConfigError> {
        let json = self.to_json();
        if let Some(path) = &cfg.out {
            std::fs::write(path, format!("{json}\n"))
                .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
        }
        if cfg.json {
            println!("{json}");
        } else {
            let mut lines = self.text_lines();
            extra(&mut lines);
            println!("{}", lines.join("\n"));
        }
        Ok(())
    }
}
