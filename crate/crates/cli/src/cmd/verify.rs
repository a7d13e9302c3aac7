use std::path::Path;

use nilseq_core::Result;
use serde_json::json;

use crate::report::{read_report, Output};
use crate::Ctx;

/// Replays each certificate under the report's own precision policy.
pub fn run(path: &Path, ctx: &mut Ctx) -> Result<Output> {
    let (rep, bytes) = read_report(path)?;
    ctx.record(path, bytes);
    let mut checks = Vec::new();
    let mut failed = 0;
    for (i, c) in rep.certificates.iter().enumerate() {
        let r = c.replay(&rep.precision);
        if r.is_err() {
            failed += 1;
        }
        checks.push(json!({
            "index": i,
            "kind": c.kind(),
            "ok": r.is_ok(),
            "error": r.err().map(|e| e.to_string()),
        }));
    }
    let mut out = Output::new(json!({
        "report": path.display().to_string(),
        "report_digest": rep.inputs_digest,
        "certificates": rep.certificates.len(),
        "failed": failed,
        "checks": checks,
    }));
    out.failed = failed > 0;
    Ok(out)
}
