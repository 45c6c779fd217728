use fo_csp::{Error, Mapping, Structure};

#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    /// Bad input files or arguments.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// What a command produced, before rendering.
#[derive(Debug, Default)]
pub struct Report {
    /// Single-word verdict; `None` for constructions whose output is a structure.
    pub verdict: Option<&'static str>,
    pub exit: i32,
    pub detail: Vec<String>,
    pub trace: Vec<String>,
    /// Pairs rendered as `x -> y` lines.
    pub mapping: Vec<(String, String)>,
}

impl Report {
    pub fn verdict(verdict: &'static str, affirmative: bool) -> Self {
        Report {
            verdict: Some(verdict),
            exit: if affirmative { 0 } else { 1 },
            ..Report::default()
        }
    }

    pub fn body(text: String) -> Self {
        Report {
            detail: vec![text],
            ..Report::default()
        }
    }

    pub fn error(err: &Failure) -> Self {
        let err = match err {
            Failure::Usage(message) => {
                return Report {
                    verdict: Some("error"),
                    exit: 2,
                    detail: vec![message.clone()],
                    ..Report::default()
                }
            }
            Failure::Lib(e) => e,
        };
        if err.is_resource_limit() {
            Report {
                verdict: Some("resource-limit"),
                exit: 2,
                detail: vec![err.to_string()],
                ..Report::default()
            }
        } else {
            Report {
                verdict: Some("error"),
                exit: 2,
                detail: vec![err.to_string()],
                ..Report::default()
            }
        }
    }

    pub fn with_detail(mut self, line: impl Into<String>) -> Self {
        self.detail.push(line.into());
        self
    }

    pub fn with_mapping(mut self, f: &Mapping, src: &Structure, dst: &Structure) -> Self {
        self.mapping = (0..f.source_size()).map(|x| (src.label(x), dst.label(f.apply(x)))).collect();
        self
    }

    pub fn render(&self, format: Format, show_trace: bool) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                let mut push = |line: &str| {
                    out.push_str(line);
                    if !line.ends_with('\n') {
                        out.push('\n');
                    }
                };
                if let Some(v) = self.verdict {
                    push(v);
                }
                for line in &self.detail {
                    push(line);
                }
                for (x, y) in &self.mapping {
                    push(&format!("{x} -> {y}"));
                }
                if show_trace {
                    for line in &self.trace {
                        push(line);
                    }
                }
                out
            }
            Format::Structured => {
                let mapping: Value = if self.mapping.is_empty() {
                    Value::Null
                } else {
                    self.mapping.iter().map(|(x, y)| json!([x, y])).collect()
                };
                let value = json!({
                    "verdict": self.verdict.unwrap_or("ok"),
                    "detail": self.detail.join("\n"),
                    "trace": if show_trace { json!(self.trace) } else { json!([]) },
                    "mapping": mapping,
                });
                format!("{value}\n")
            }
        }
    }
}
