//! Four tolerant parsers converting raw scripts into the canonical
//! [`ParsedBuild`] IR. Parsing never executes any part of a script, never
//! touches the filesystem, and never spawns a process.

pub mod cmake;
pub mod gradle;
pub mod makefile;
pub mod maven;
pub mod xml;

use std::sync::OnceLock;

use regex::Regex;

use crate::model::{BuildScript, ParsedBuild, SystemKind};

/// Parses a script with the parser matching its system. `Unknown` scripts
/// yield an empty IR with a diagnostic; they are never analyzed.
pub fn parse(script: &BuildScript) -> ParsedBuild {
    match script.system {
        SystemKind::Maven => maven::parse_maven(script),
        SystemKind::Gradle => gradle::parse_gradle(script),
        SystemKind::CMake => cmake::parse_cmake(script),
        SystemKind::Make => makefile::parse_make(script),
        SystemKind::Unknown => {
            let mut parsed = ParsedBuild::empty(SystemKind::Unknown);
            parsed
                .diagnostics
                .push(crate::model::Diagnostic::warning("unknown build system; not parsed"));
            parsed
        }
    }
}

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"(?i)[a-z][a-z0-9+.-]*://[^\s"'<>`]+"#).expect("valid url regex")
    })
}

/// Extracts URL-looking substrings, trimming trailing punctuation.
pub fn find_urls(text: &str) -> Vec<String> {
    url_regex()
        .find_iter(text)
        .map(|m| {
            m.as_str()
                .trim_end_matches([')', ']', '}', ',', ';', '.', ':', '!', '?'])
                .to_string()
        })
        .filter(|u| !u.is_empty())
        .collect()
}

/// The source line at a 1-based index, for span excerpts.
pub fn line_at(lines: &[&str], line_no: usize) -> String {
    lines
        .get(line_no.saturating_sub(1))
        .map(|l| l.trim().to_string())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn url_extraction_trims_punctuation() {
        assert_eq!(
            find_urls("see http://example.com/a, then ftp://x.io/b."),
            vec!["http://example.com/a".to_string(), "ftp://x.io/b".to_string()]
        );
        assert_eq!(find_urls("no urls here"), Vec::<String>::new());
        assert_eq!(find_urls("file:///opt/x"), vec!["file:///opt/x".to_string()]);
    }

    #[test]
    fn unknown_system_yields_empty_ir() {
        let script = BuildScript::new("x.txt", SystemKind::Unknown, "hello");
        let parsed = parse(&script);
        assert!(parsed.dependencies.is_empty());
        assert_eq!(parsed.diagnostics.len(), 1);
    }
}
