use col_biworld::BiworldError;
use col_eval::EvalError;
use col_kripke::KripkeError;
use col_omega::OmegaError;
use col_syntax::ParseError;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(kind: &str, message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, kind: kind.to_string(), message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "exit_code": self.code } })
    }
}

fn from_kind(kind: &str, message: String) -> CliError {
    let code = if kind == "CapExceeded" { EXIT_CAP } else { EXIT_USAGE };
    CliError { code, kind: kind.to_string(), message }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        from_kind(e.kind(), e.to_string())
    }
}

impl From<BiworldError> for CliError {
    fn from(e: BiworldError) -> Self {
        from_kind(e.kind(), e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        from_kind(e.kind(), e.to_string())
    }
}

impl From<KripkeError> for CliError {
    fn from(e: KripkeError) -> Self {
        from_kind(e.kind(), e.to_string())
    }
}

impl From<OmegaError> for CliError {
    fn from(e: OmegaError) -> Self {
        from_kind(e.kind(), e.to_string())
    }
}

/// Collects the text lines or the JSON value of one command.
pub struct Output {
    pub json: bool,
    pub lines: Vec<String>,
    pub value: Value,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output { json, lines: Vec::new(), value: Value::Null }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn render(&self) -> String {
        if self.json {
            format!("{}\n", self.value)
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}
