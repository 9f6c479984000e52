//! Manifest runs.
//!
//! A manifest is `{"entries": [{"name", "args", "expect"?}]}`; `expect` is
//! the status the entry must report (default `pass`) and relative paths in
//! `args` are resolved against the manifest's directory.

use std::path::Path;

use awfslab::Exec;
use serde_json::{json, Value};

use crate::input::read_value;
use crate::report::{CliError, CmdResult, Findings};
use crate::{run_in, Ctx};

struct Entry {
    name: String,
    args: Vec<String>,
    expect: String,
}

fn entries(v: &Value) -> Result<Vec<Entry>, CliError> {
    let bad = |m: &str| CliError::input("schema_violation", format!("manifest: {m}"));
    let list = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("`entries` must be an array"))?;
    list.iter()
        .map(|e| {
            let name = e.get("name").and_then(Value::as_str).ok_or_else(|| bad("entry without a name"))?;
            let args = e
                .get("args")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("entry without args"))?
                .iter()
                .map(|a| a.as_str().map(str::to_string).ok_or_else(|| bad("args must be strings")))
                .collect::<Result<Vec<_>, _>>()?;
            let expect = e.get("expect").and_then(Value::as_str).unwrap_or("pass");
            if !["pass", "fail", "error"].contains(&expect) {
                return Err(bad("expect must be pass, fail or error"));
            }
            if args.first().map(String::as_str) == Some("corpus") {
                return Err(bad("manifests cannot nest"));
            }
            Ok(Entry {
                name: name.to_string(),
                args,
                expect: expect.to_string(),
            })
        })
        .collect()
}

pub fn run(ctx: &Ctx, manifest: &Path) -> CmdResult {
    let path = ctx.path(manifest);
    let v = read_value(ctx, manifest)?;
    let list = entries(&v)?;
    let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
    let seed = ctx.seed.to_string();
    let outcomes = Exec::default().map(&list, |e| {
        let mut args = e.args.clone();
        if !args.iter().any(|a| a == "--seed") {
            args.extend(["--seed".to_string(), seed.clone()]);
        }
        run_in(&base, &args)
    });
    let mut fs = Findings::default();
    let failed: Vec<&str> = list
        .iter()
        .zip(&outcomes)
        .filter(|(e, o)| o.status.as_str() != e.expect)
        .map(|(e, _)| e.name.as_str())
        .collect();
    fs.check("manifest", failed.is_empty(), json!({"entries": list.len(), "failed": failed}));
    for (e, o) in list.iter().zip(outcomes) {
        let ok = o.status.as_str() == e.expect;
        fs.check(
            "entry",
            ok,
            json!({"name": e.name, "expect": e.expect, "exit": o.exit, "report": o.report}),
        );
    }
    Ok(fs)
}
