//! CMake listfile parser: records command invocations with their arguments,
//! `set()` variables, `find_package()` dependencies, URLs, and `#` comments.
//! Files without `cmake_minimum_required` are parsed like any other.

use crate::model::{
    BuildScript, CMakeDirective, Comment, DeclKind, DependencyDecl, Diagnostic, ParsedBuild,
    SourceSpan, SystemKind, UrlContext, UrlRef, VersionSpec, Variable,
};
use crate::parsers::{find_urls, line_at};

pub fn parse_cmake(script: &BuildScript) -> ParsedBuild {
    let mut parsed = ParsedBuild::empty(SystemKind::CMake);
    let lines: Vec<&str> = script.content.lines().collect();
    let chars: Vec<char> = script.content.chars().collect();

    let mut pos = 0usize;
    let mut line = 1usize;

    while pos < chars.len() {
        let c = chars[pos];
        match c {
            '\n' => {
                line += 1;
                pos += 1;
            }
            '#' => {
                let start = pos + 1;
                let mut end = pos;
                while end < chars.len() && chars[end] != '\n' {
                    end += 1;
                }
                let text: String = chars[start..end].iter().collect();
                parsed.comments.push(Comment {
                    text: text.trim().to_string(),
                    span: SourceSpan::line(line, &text),
                });
                pos = end;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = pos;
                let start_line = line;
                while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                // skip whitespace (no newlines expected between name and paren, but tolerate)
                while pos < chars.len() && chars[pos].is_whitespace() {
                    if chars[pos] == '\n' {
                        line += 1;
                    }
                    pos += 1;
                }
                if pos < chars.len() && chars[pos] == '(' {
                    pos += 1;
                    match read_args(&chars, &mut pos, &mut line) {
                        Ok(args) => {
                            let span =
                                SourceSpan::new(start_line, line, &line_at(&lines, start_line));
                            record_directive(&mut parsed, name, args, span);
                        }
                        Err(()) => {
                            parsed.diagnostics.push(Diagnostic::warning(format!(
                                "unbalanced parentheses in {name}() starting at line {start_line}"
                            )));
                            // directives up to this point are retained
                            return parsed;
                        }
                    }
                }
                // bare token without '(' is ignored
            }
            _ => {
                pos += 1;
            }
        }
    }

    parsed
}

/// Reads whitespace-separated arguments until the matching ')'. Quoted
/// strings are single arguments; nested parentheses are kept inside tokens.
/// `Err` means EOF before balance was restored.
fn read_args(chars: &[char], pos: &mut usize, line: &mut usize) -> Result<Vec<String>, ()> {
    let mut args = Vec::new();
    let mut current = String::new();
    let mut depth = 1usize;
    let mut quote = false;

    while *pos < chars.len() {
        let c = chars[*pos];
        *pos += 1;
        if c == '\n' {
            *line += 1;
        }
        if quote {
            if c == '"' {
                quote = false;
                args.push(std::mem::take(&mut current));
            } else if c == '\\' && *pos < chars.len() {
                current.push(chars[*pos]);
                *pos += 1;
            } else {
                current.push(c);
            }
            continue;
        }
        match c {
            '"' => {
                if !current.is_empty() {
                    args.push(std::mem::take(&mut current));
                }
                quote = true;
            }
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth -= 1;
                if depth == 0 {
                    if !current.is_empty() {
                        args.push(current);
                    }
                    return Ok(args);
                }
                current.push(c);
            }
            '#' => {
                // comment inside an invocation: skip to EOL
                while *pos < chars.len() && chars[*pos] != '\n' {
                    *pos += 1;
                }
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    args.push(std::mem::take(&mut current));
                }
            }
            _ => current.push(c),
        }
    }
    Err(())
}

fn record_directive(parsed: &mut ParsedBuild, name: String, args: Vec<String>, span: SourceSpan) {
    let lower = name.to_ascii_lowercase();

    if lower == "find_package" {
        if let Some(pkg) = args.first() {
            let version_spec = match args.get(1) {
                Some(second) if looks_like_version(second) => {
                    VersionSpec::Literal(second.clone())
                }
                _ => VersionSpec::Absent,
            };
            parsed.dependencies.push(DependencyDecl {
                group: String::new(),
                name: pkg.clone(),
                version_spec,
                scope_or_configuration: String::new(),
                declared_in: DeclKind::Direct,
                span: span.clone(),
            });
        }
    } else if lower == "set" {
        if let Some(var) = args.first() {
            parsed.variables.insert(
                var.clone(),
                Variable {
                    value: args[1..].join(" "),
                    span: span.clone(),
                },
            );
        }
    }

    let url_context = if lower == "externalproject_add"
        || lower.starts_with("fetchcontent")
        || (lower == "file" && args.first().is_some_and(|a| a.eq_ignore_ascii_case("DOWNLOAD")))
    {
        UrlContext::Download
    } else {
        UrlContext::Other
    };
    for arg in &args {
        if arg.contains("://") {
            for url in find_urls(arg) {
                parsed.urls.push(UrlRef::new(url, url_context, span.clone()));
            }
        }
    }

    parsed.cmake_directives.push(CMakeDirective { name, args, span });
}

/// `digits(.digits)*`
fn looks_like_version(text: &str) -> bool {
    !text.is_empty()
        && text
            .split('.')
            .all(|seg| !seg.is_empty() && seg.chars().all(|c| c.is_ascii_digit()))
}
