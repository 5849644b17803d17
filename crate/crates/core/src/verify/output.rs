//! Report files: JSON lines, a CSV summary and a separate timing table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::report::VerificationReport;

pub const REPORTS_FILE: &str = "reports.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMINGS_FILE: &str = "timings.csv";

/// One JSON object per line. Runtimes are zeroed so that the file depends
/// only on the configuration; they go to [`timings_csv`] instead.
pub fn reports_jsonl(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&r.clone().with_runtime_ms(0.0).to_json_line());
        s.push('\n');
    }
    s
}

/// One row per report: `check_id,identity,max_err,passed`.
pub fn summary_csv(reports: &[VerificationReport]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "identity", "max_err", "passed"])?;
    for r in reports {
        w.write_record([
            r.check_id.as_str(),
            r.identity.as_str(),
            &format!("{:e}", r.abs_err),
            if r.passed { "true" } else { "false" },
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

pub fn timings_csv(reports: &[VerificationReport]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "check_id", "runtime_ms"])?;
    for (i, r) in reports.iter().enumerate() {
        w.write_record([i.to_string(), r.check_id.clone(), format!("{:.3}", r.runtime_ms)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

/// Writes `contents` next to `path` and renames it into place, so a reader
/// never sees a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Writes all three files into `dir` and returns their paths. Every file is
/// rendered before the first one is written.
pub fn write_reports(dir: &Path, reports: &[VerificationReport]) -> std::io::Result<Vec<PathBuf>> {
    let to_io = |e: csv::Error| std::io::Error::other(e);
    let files = [
        (REPORTS_FILE, reports_jsonl(reports)),
        (SUMMARY_FILE, summary_csv(reports).map_err(to_io)?),
        (TIMINGS_FILE, timings_csv(reports).map_err(to_io)?),
    ];
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Tolerance;
    use num_complex::Complex64;
    use serde_json::json;

    fn sample() -> Vec<VerificationReport> {
        vec![
            VerificationReport::compare(
                "a.b",
                "x, with a comma",
                json!({}),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 1e-13),
                Tolerance::DEFAULT,
            )
            .with_runtime_ms(3.5),
        ]
    }

    #[test]
    fn jsonl_zeroes_runtime() {
        let s = reports_jsonl(&sample());
        let r = VerificationReport::from_json_line(s.trim_end()).unwrap();
        assert_eq!(r.runtime_ms, 0.0);
        assert_eq!(r.check_id, "a.b");
    }

    #[test]
    fn summary_quotes_fields() {
        let s = summary_csv(&sample()).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("check_id,identity,max_err,passed"));
        assert!(lines.next().unwrap().starts_with("a.b,\"x, with a comma\","));
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = std::env::temp_dir().join(format!("holoherm-out-{}", std::process::id()));
        let paths = write_reports(&dir, &sample()).unwrap();
        assert_eq!(paths.len(), 3);
        let names: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 3);
        fs::remove_dir_all(&dir).unwrap();
    }
}
