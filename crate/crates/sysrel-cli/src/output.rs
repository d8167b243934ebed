//! CSV serialization and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use sysrel_core::simkit::CurvePoint;
use sysrel_core::theorems::{KofnClaimReport, TheoremReport};

use crate::CliError;

/// Quotes a CSV field when needed (witness strings contain commas).
pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Writes to `path` atomically (temp file + rename), or to stdout when no
/// path is given.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let tmp: PathBuf = {
                let mut name = path.file_name().unwrap_or_default().to_os_string();
                name.push(".tmp");
                path.with_file_name(name)
            };
            let mut file = std::fs::File::create(&tmp)
                .map_err(|e| CliError::Internal(format!("{}: {e}", tmp.display())))?;
            file.write_all(content.as_bytes())
                .and_then(|_| file.sync_all())
                .map_err(|e| CliError::Internal(format!("{}: {e}", tmp.display())))?;
            std::fs::rename(&tmp, path)
                .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
        }
    }
}

pub fn curve_csv(name: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("x,{name}\n");
    for &(x, value) in rows {
        out.push_str(&format!("{x:.12e},{value:.15e}\n"));
    }
    out
}

pub fn simulation_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("x,estimate,stderr,analytic,abs_z\n");
    for p in points {
        out.push_str(&format!(
            "{:.12e},{:.15e},{:.15e},{:.15e},{:.6}\n",
            p.x, p.estimate, p.stderr, p.analytic, p.abs_z
        ));
    }
    out
}

pub fn report_csv(reports: &[TheoremReport]) -> String {
    let mut out = String::from("theorem,item,verdict,worst_margin,witness,description\n");
    for report in reports {
        for c in &report.conditions {
            out.push_str(&format!(
                "{},{},{},{:.6e},{},{}\n",
                report.rule,
                c.id,
                c.verdict,
                c.worst_margin,
                csv_field(&c.witness),
                csv_field(&c.description),
            ));
        }
        let concl = &report.conclusion;
        out.push_str(&format!(
            "{},conclusion,{},{:.6e},{},{}\n",
            report.rule,
            concl.verdict,
            concl.worst_margin,
            csv_field(&concl.witness),
            csv_field(&concl.description),
        ));
        out.push_str(&format!(
            "{},consistency,{},,,{}\n",
            report.rule,
            if report.consistent { "ok" } else { "ALARM" },
            csv_field("no (premises certified ∧ conclusion violated) combination"),
        ));
    }
    out
}

pub fn lemmas_csv(reports: &[KofnClaimReport]) -> String {
    let mut out = String::from("claim,verdict,worst_margin,mu_hat,mu_expected,witness\n");
    for r in reports {
        let mu_hat = r.mu_hat.map(|v| format!("{v:.6}")).unwrap_or_default();
        let mu_expected = r.mu_expected.map(|v| format!("{v:.6}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.6e},{},{},{}\n",
            r.claim,
            r.verdict,
            r.worst_margin,
            mu_hat,
            mu_expected,
            csv_field(&r.witness),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_with_commas_are_quoted() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("p=(0.1,0.2)"), "\"p=(0.1,0.2)\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("sysrel-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        emit(Some(&path), "first\n").unwrap();
        emit(Some(&path), "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert!(!path.with_file_name("out.csv.tmp").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
