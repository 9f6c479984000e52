//! Reports and exit codes.

use awfslab::json::canonical;
use awfslab::Error;
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// What a command found: pass iff every finding passes.
#[derive(Clone, Debug, Default)]
pub struct Findings(pub Vec<Value>);

impl Findings {
    pub fn push(&mut self, v: Value) {
        self.0.push(v);
    }

    /// Adds `{"check": name, "status": ..}` merged with the fields of `extra`.
    pub fn check(&mut self, name: &str, ok: bool, extra: Value) {
        let mut v = json!({"check": name, "status": Status::of(ok).as_str()});
        if let (Some(m), Value::Object(extra)) = (v.as_object_mut(), extra) {
            m.extend(extra);
        }
        self.0.push(v);
    }

    pub fn status(&self) -> Status {
        let ok = self.0.iter().all(|f| f.get("status").and_then(Value::as_str).is_none_or(|s| s == "pass"));
        Status::of(ok)
    }
}

/// A command that could not run: bad input, a violated bound or an exhausted budget.
#[derive(Clone, Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
    pub detail: Option<Value>,
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            exit: EXIT_INPUT,
            detail: None,
        }
    }

    pub fn budget(message: impl Into<String>, detail: Value) -> Self {
        CliError {
            code: "budget_exhausted",
            message: message.into(),
            exit: EXIT_BUDGET,
            detail: Some(detail),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NestingDepth { .. } | Error::UnboundedHomSet | Error::IndexOutOfRange(_) => "bound_violation",
            Error::Precondition(_) => "precondition",
            _ => "schema_violation",
        };
        CliError::input(code, e.to_string())
    }
}

pub type CmdResult = std::result::Result<Findings, CliError>;

/// The outcome of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: i32,
    pub status: Status,
    pub report: Value,
}

impl Outcome {
    pub fn new(command: &[String], result: CmdResult) -> Self {
        let (status, exit, findings) = match result {
            Ok(f) => {
                let s = f.status();
                (s, if s == Status::Pass { EXIT_PASS } else { EXIT_FAIL }, f.0)
            }
            Err(e) => {
                let mut v = json!({"check": "run", "status": "error", "code": e.code, "message": e.message});
                if let Some(d) = e.detail {
                    v["detail"] = d;
                }
                (Status::Error, e.exit, vec![v])
            }
        };
        Outcome {
            exit,
            status,
            report: json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "status": status.as_str(),
                "findings": findings,
            }),
        }
    }

    pub fn text(&self) -> String {
        canonical(&self.report)
    }

    /// `code: message` of the first error finding.
    pub fn error_line(&self) -> Option<String> {
        let f = self.report["findings"].as_array()?.iter().find(|f| f["status"] == "error")?;
        Some(format!("{}: {}", f["code"].as_str()?, f["message"].as_str()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn findings_fail_if_any_check_fails() {
        let mut f = Findings::default();
        f.check("a", true, json!({"n": 1}));
        assert_eq!(f.status(), Status::Pass);
        f.check("b", false, Value::Null);
        assert_eq!(f.status(), Status::Fail);
        assert_eq!(f.0[0], json!({"check": "a", "status": "pass", "n": 1}));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let o = Outcome::new(&["x".into()], Err(Error::Precondition("p".into()).into()));
        assert_eq!(o.exit, EXIT_INPUT);
        assert_eq!(o.error_line().unwrap(), "precondition: precondition violated: p");
        let o = Outcome::new(&[], Err(CliError::budget("b", json!([1, 2]))));
        assert_eq!((o.exit, o.status), (EXIT_BUDGET, Status::Error));
        assert!(o.text().ends_with("}\n"));
    }
}
