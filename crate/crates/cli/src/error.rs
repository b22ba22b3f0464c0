use plane_homeo::ExprError;
use serde::Serialize;

/// Failures of a subcommand. Exit code 1 for bad input or a failed
/// computation, 2 for an inconclusive result under `--strict`.
#[derive(Debug)]
pub enum CliError {
    Expr { flag: &'static str, err: ExprError },
    /// Command-line syntax, as rendered by the argument parser.
    Usage(String),
    Input(String),
    Io { path: String, message: String },
    Failed(String),
    /// Carries the document that would have been printed.
    Inconclusive { reason: String, document: String },
}

#[derive(Serialize)]
struct Record<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    flag: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Inconclusive { .. } => 2,
            _ => 1,
        }
    }

    pub fn stdout(&self) -> Option<&str> {
        match self {
            CliError::Inconclusive { document, .. } => Some(document),
            _ => None,
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        let rec = match self {
            CliError::Expr { flag, err } => Record {
                error: match err {
                    ExprError::Syntax { .. } => "syntax",
                    ExprError::Domain { .. } => "domain",
                },
                message: err.to_string(),
                flag: Some(flag),
                offset: Some(err.offset()),
            },
            CliError::Usage(m) => Record {
                error: "usage",
                message: m.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string(),
                flag: None,
                offset: None,
            },
            CliError::Input(m) => Record { error: "input", message: m.clone(), flag: None, offset: None },
            CliError::Io { path, message } => Record {
                error: "io",
                message: format!("{path}: {message}"),
                flag: None,
                offset: None,
            },
            CliError::Failed(m) => Record { error: "failed", message: m.clone(), flag: None, offset: None },
            CliError::Inconclusive { reason, .. } => Record {
                error: "inconclusive",
                message: reason.clone(),
                flag: None,
                offset: None,
            },
        };
        serde_json::to_string(&rec).expect("record serializes")
    }
}

pub fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}
