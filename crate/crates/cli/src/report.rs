use std::fmt;

use ideal_conv::topolab::FinSpace;
use serde_json::Value;

use crate::dsl::DslError;

pub const WINDOW_VAR: &str = "ICONV_WINDOW";

/// A finished command: its report and whether the checked property held.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { report, ok: true }
    }

    pub fn checked(report: Value, ok: bool) -> Self {
        Outcome { report, ok }
    }
}

/// Bad input: exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<DslError> for UsageError {
    fn from(e: DslError) -> Self {
        UsageError(e.to_string())
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for UsageError {
            fn from(e: $t) -> Self {
                UsageError(e.to_string())
            }
        }
    )*};
}

usage_from!(
    ideal_conv::setexpr::SetError,
    ideal_conv::seq::SeqError,
    ideal_conv::shrink::ShrinkError,
    ideal_conv::topolab::TopoError,
    std::io::Error
);

pub type CmdResult = Result<Outcome, UsageError>;

/// `--window`, else `ICONV_WINDOW`, else the library default.
pub fn window(flag: Option<u64>) -> Result<u64, UsageError> {
    if let Some(w) = flag {
        return check_window(w);
    }
    match std::env::var(WINDOW_VAR) {
        Ok(s) => {
            let w = s.trim().parse().map_err(|_| UsageError(format!("{WINDOW_VAR}={s} is not a window size")))?;
            check_window(w)
        }
        Err(_) => Ok(ideal_conv::DEFAULT_WINDOW),
    }
}

fn check_window(w: u64) -> Result<u64, UsageError> {
    if w == 0 || w > ideal_conv::setexpr::MAX_WINDOW {
        return Err(UsageError(format!("window {w} outside 1..={}", ideal_conv::setexpr::MAX_WINDOW)));
    }
    Ok(w)
}

/// Inline `space{...}` text or a path to a file holding it.
pub fn load_space(arg: &str) -> Result<FinSpace, UsageError> {
    let text = if arg.trim_start().starts_with("space") {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| UsageError(format!("cannot read {arg}: {e}")))?
    };
    Ok(FinSpace::parse(text.trim())?)
}

pub fn space_json(s: &FinSpace) -> Value {
    serde_json::json!({
        "points": s.labels(),
        "opens": s.opens().iter().map(|&u| s.fmt_set(u)).collect::<Vec<_>>(),
    })
}
