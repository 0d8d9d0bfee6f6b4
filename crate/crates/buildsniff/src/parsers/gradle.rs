//! Gradle parser. Dependency declarations are extracted textually via three
//! pattern families (string notation, function-call notation, map notation)
//! covering Groovy and Kotlin DSL; repository URLs via dedicated `url`/`uri`
//! patterns. Build logic is never evaluated.

use std::sync::OnceLock;

use regex::Regex;

use crate::model::{
    BuildScript, Comment, DeclKind, DependencyDecl, ParsedBuild, SourceSpan, SystemKind,
    UrlContext, UrlRef, Variable, VersionSpec,
};
use crate::parsers::find_urls;

/// Keywords that take a quoted argument but never declare a dependency.
const NON_DEPENDENCY_KEYWORDS: [&str; 14] = [
    "url", "uri", "id", "include", "includeBuild", "from", "into", "project", "files", "file",
    "name", "version", "group", "description",
];

fn string_notation_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // conf 'g:a:v' | conf("g:a:v") | conf platform('g:a:v')
    RE.get_or_init(|| {
        Regex::new(
            r#"^\s*([A-Za-z][A-Za-z0-9_]*)\s*\(?\s*(?:(?:platform|enforcedPlatform)\s*\()?\s*['"]([^'"]+)['"]"#,
        )
        .expect("valid string-notation regex")
    })
}

fn map_notation_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // conf group: 'g', name: 'a', version: 'v'  /  conf(group = "g", name = "a", version = "v")
    RE.get_or_init(|| {
        Regex::new(
            r#"^\s*([A-Za-z][A-Za-z0-9_]*)\s*\(?\s*group\s*[:=]\s*['"]([^'"]+)['"]\s*,\s*name\s*[:=]\s*['"]([^'"]+)['"](?:\s*,\s*version\s*[:=]\s*['"]([^'"]+)['"])?"#,
        )
        .expect("valid map-notation regex")
    })
}

fn url_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // url "..." | url = "..." | url('...') | uri("...")
    RE.get_or_init(|| {
        Regex::new(r#"\b(?:url|uri)\s*[=(]?\s*\(?\s*['"]([^'"]+)['"]"#).expect("valid url regex")
    })
}

fn variable_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // ext.name = 'v' | val name = "v" | def name = 'v' | name = 'v'
    RE.get_or_init(|| {
        Regex::new(
            r#"^\s*(?:ext\.|val\s+|def\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*=\s*['"]([^'"]*)['"]\s*$"#,
        )
        .expect("valid variable regex")
    })
}

pub fn parse_gradle(script: &BuildScript) -> ParsedBuild {
    let mut parsed = ParsedBuild::empty(SystemKind::Gradle);
    let mut in_block_comment = false;
    let mut block_comment_start = 0usize;
    let mut block_comment_text = String::new();

    for (idx, raw_line) in script.content.lines().enumerate() {
        let line_no = idx + 1;

        let mut code = String::new();
        let mut rest = raw_line;
        if in_block_comment {
            match rest.find("*/") {
                Some(end) => {
                    block_comment_text.push(' ');
                    block_comment_text.push_str(rest[..end].trim());
                    parsed.comments.push(Comment {
                        text: block_comment_text.trim().to_string(),
                        span: SourceSpan::new(block_comment_start, line_no, &block_comment_text),
                    });
                    block_comment_text.clear();
                    in_block_comment = false;
                    rest = &rest[end + 2..];
                }
                None => {
                    block_comment_text.push(' ');
                    block_comment_text.push_str(rest.trim());
                    continue;
                }
            }
        }

        // Split code from comments, honoring string literals.
        let (line_code, line_comment, opened_block, opened_at) = split_comment(rest);
        code.push_str(&line_code);
        if let Some(text) = line_comment {
            parsed.comments.push(Comment {
                text: text.trim().to_string(),
                span: SourceSpan::line(line_no, raw_line),
            });
        }
        if opened_block {
            in_block_comment = true;
            block_comment_start = line_no;
            block_comment_text = opened_at;
        }

        let code = code.as_str();
        if code.trim().is_empty() {
            continue;
        }
        let span = SourceSpan::line(line_no, raw_line);

        // Pattern family 3 first: map notation is more specific.
        if let Some(caps) = map_notation_re().captures(code) {
            let conf = caps.get(1).map(|m| m.as_str()).unwrap_or("");
            if !NON_DEPENDENCY_KEYWORDS.contains(&conf) {
                let version_spec = match caps.get(4) {
                    Some(v) => VersionSpec::from_text(v.as_str()),
                    None => VersionSpec::Absent,
                };
                parsed.dependencies.push(DependencyDecl {
                    group: caps[2].to_string(),
                    name: caps[3].to_string(),
                    version_spec,
                    scope_or_configuration: conf.to_string(),
                    declared_in: declared_in_for(conf),
                    span: span.clone(),
                });
            }
        } else if let Some(caps) = string_notation_re().captures(code) {
            // Families 1 and 2: quoted coordinate after a configuration name.
            let conf = caps.get(1).map(|m| m.as_str()).unwrap_or("");
            let coordinate = &caps[2];
            if !NON_DEPENDENCY_KEYWORDS.contains(&conf) {
                if let Some(dep) = dependency_from_coordinate(conf, coordinate, &span) {
                    parsed.dependencies.push(dep);
                }
            }
        }

        // Repository URLs via the dedicated pattern.
        let mut dedicated: Vec<String> = Vec::new();
        for caps in url_re().captures_iter(code) {
            let url = caps[1].to_string();
            dedicated.push(url.clone());
            parsed
                .urls
                .push(UrlRef::new(url, UrlContext::Repository, span.clone()));
        }
        // Other URLs appearing in code (string literals, etc.).
        for url in find_urls(code) {
            if !dedicated.iter().any(|d| d.contains(&url) || url.contains(d.as_str())) {
                parsed.urls.push(UrlRef::new(url, UrlContext::Other, span.clone()));
            }
        }

        if let Some(caps) = variable_re().captures(code) {
            parsed.variables.insert(
                caps[1].to_string(),
                Variable {
                    value: caps[2].to_string(),
                    span: span.clone(),
                },
            );
        }
    }

    if in_block_comment {
        parsed.comments.push(Comment {
            text: block_comment_text.trim().to_string(),
            span: SourceSpan::new(
                block_comment_start,
                script.loc.max(block_comment_start),
                &block_comment_text,
            ),
        });
    }

    parsed
}

fn declared_in_for(conf: &str) -> DeclKind {
    if conf == "classpath" {
        DeclKind::Plugin
    } else {
        DeclKind::Direct
    }
}

/// Builds a declaration from `group:name[:version[:classifier]]` text.
fn dependency_from_coordinate(
    conf: &str,
    coordinate: &str,
    span: &SourceSpan,
) -> Option<DependencyDecl> {
    if coordinate.contains("://") || coordinate.contains('/') || coordinate.contains(char::is_whitespace) {
        return None;
    }
    let segments: Vec<&str> = coordinate.split(':').collect();
    if !(2..=4).contains(&segments.len()) {
        return None;
    }
    let group = segments[0];
    let name = segments[1];
    let segment_ok = |s: &str| {
        !s.is_empty()
            && s.chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '.' | '-' | '_'))
    };
    if !segment_ok(group) || !segment_ok(name) {
        return None;
    }
    let version_spec = match segments.get(2) {
        Some(v) => VersionSpec::from_text(v),
        None => VersionSpec::Absent,
    };
    Some(DependencyDecl {
        group: group.to_string(),
        name: name.to_string(),
        version_spec,
        scope_or_configuration: conf.to_string(),
        declared_in: declared_in_for(conf),
        span: span.clone(),
    })
}

/// Splits a line into (code, line comment, block-comment-opened, its text),
/// tracking quote state so `http://` inside strings survives.
fn split_comment(line: &str) -> (String, Option<String>, bool, String) {
    let chars: Vec<char> = line.chars().collect();
    let mut quote: Option<char> = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match quote {
            Some(q) => {
                if c == '\\' {
                    i += 1; // skip escaped char
                } else if c == q {
                    quote = None;
                }
            }
            None => match c {
                '\'' | '"' => quote = Some(c),
                '/' if i + 1 < chars.len() && chars[i + 1] == '/' => {
                    let code: String = chars[..i].iter().collect();
                    let comment: String = chars[i + 2..].iter().collect();
                    return (code, Some(comment), false, String::new());
                }
                '/' if i + 1 < chars.len() && chars[i + 1] == '*' => {
                    let code: String = chars[..i].iter().collect();
                    let rest: String = chars[i + 2..].iter().collect();
                    // block comment may close on the same line
                    if let Some(end) = rest.find("*/") {
                        let after = &rest[end + 2..];
                        let (after_code, after_comment, opened, opened_text) = split_comment(after);
                        let text = rest[..end].trim().to_string();
                        let merged_comment = match after_comment {
                            Some(more) if !text.is_empty() => Some(format!("{text} {more}")),
                            Some(more) => Some(more),
                            None => Some(text),
                        };
                        return (code + &after_code, merged_comment, opened, opened_text);
                    }
                    return (code, None, true, rest.trim().to_string());
                }
                _ => {}
            },
        }
        i += 1;
    }
    (line.to_string(), None, false, String::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(content: &str) -> ParsedBuild {
        parse_gradle(&BuildScript::new("build.gradle", SystemKind::Gradle, content))
    }

    #[test]
    fn string_notation_groovy() {
        let parsed = parse("dependencies {\n  implementation 'com.foo:bar:1.2'\n}\n");
        assert_eq!(parsed.dependencies.len(), 1);
        let dep = &parsed.dependencies[0];
        assert_eq!(dep.group, "com.foo");
        assert_eq!(dep.name, "bar");
        assert_eq!(dep.version_spec, VersionSpec::Literal("1.2".into()));
        assert_eq!(dep.scope_or_configuration, "implementation");
        assert_eq!(dep.span.line_start, 2);
    }

    #[test]
    fn function_call_notation_kotlin() {
        let parsed = parse("dependencies {\n    testImplementation(\"org.junit:junit:5.10.0\")\n}\n");
        assert_eq!(parsed.dependencies.len(), 1);
        assert_eq!(parsed.dependencies[0].scope_or_configuration, "testImplementation");
        assert_eq!(parsed.dependencies[0].name, "junit");
    }

    #[test]
    fn map_notation() {
        let parsed = parse("implementation group: 'g', name: 'n', version: '3'\n");
        assert_eq!(parsed.dependencies.len(), 1);
        let dep = &parsed.dependencies[0];
        assert_eq!(dep.group, "g");
        assert_eq!(dep.name, "n");
        assert_eq!(dep.version_spec, VersionSpec::Literal("3".into()));
    }

    #[test]
    fn kotlin_map_notation_with_equals() {
        let parsed = parse("implementation(group = \"g\", name = \"n\", version = \"2\")\n");
        assert_eq!(parsed.dependencies.len(), 1);
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Literal("2".into()));
    }

    #[test]
    fn map_notation_without_version_is_absent() {
        let parsed = parse("implementation group: 'g', name: 'n'\n");
        assert_eq!(parsed.dependencies.len(), 1);
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Absent);
    }

    #[test]
    fn two_segment_coordinate_has_absent_version() {
        let parsed = parse("implementation 'com.foo:bar'\n");
        assert_eq!(parsed.dependencies.len(), 1);
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Absent);
    }

    #[test]
    fn property_version_in_interpolated_coordinate() {
        let parsed = parse("implementation \"com.foo:bar:${fooVersion}\"\n");
        assert_eq!(
            parsed.dependencies[0].version_spec,
            VersionSpec::PropertyRef("fooVersion".into())
        );
    }

    #[test]
    fn repository_url_pattern() {
        let parsed = parse("repositories {\n  maven { url \"http://repo.example.com\" }\n}\n");
        assert_eq!(parsed.urls.len(), 1);
        let url = &parsed.urls[0];
        assert_eq!(url.scheme, "http");
        assert_eq!(url.context, UrlContext::Repository);
        assert_eq!(url.span.line_start, 2);
    }

    #[test]
    fn uri_call_and_kotlin_assignment() {
        let parsed = parse("maven { url = uri(\"https://r.example.com\") }\n");
        assert!(parsed
            .urls
            .iter()
            .any(|u| u.url == "https://r.example.com" && u.context == UrlContext::Repository));
    }

    #[test]
    fn non_dependency_keywords_skipped() {
        let parsed = parse("include ':app'\nid 'java'\nurl 'http://x.io'\nproject(':lib')\n");
        assert!(parsed.dependencies.is_empty());
    }

    #[test]
    fn variables_from_ext_val_def_and_plain() {
        let parsed = parse(
            "ext.fooVersion = '1.2'\nval barVersion = \"2.0\"\ndef baz = 'x'\nhttpVersion = '4.5'\n",
        );
        assert_eq!(parsed.variables["fooVersion"].value, "1.2");
        assert_eq!(parsed.variables["barVersion"].value, "2.0");
        assert_eq!(parsed.variables["baz"].value, "x");
        assert_eq!(parsed.variables["httpVersion"].value, "4.5");
    }

    #[test]
    fn line_and_block_comments_collected() {
        let parsed = parse("// TODO: tidy\nimplementation 'a:b:1' // trailing\n/* block\n spans lines */\n");
        assert_eq!(parsed.comments.len(), 3);
        assert_eq!(parsed.comments[0].text, "TODO: tidy");
        assert_eq!(parsed.comments[1].text, "trailing");
        assert!(parsed.comments[2].text.contains("spans lines"));
        assert_eq!(parsed.comments[2].span.line_start, 3);
        assert_eq!(parsed.comments[2].span.line_end, 4);
        assert_eq!(parsed.dependencies.len(), 1);
    }

    #[test]
    fn url_inside_string_not_a_comment() {
        let parsed = parse("maven { url \"http://repo.example.com/maven2\" }\n");
        assert!(parsed.comments.is_empty());
        assert_eq!(parsed.urls.len(), 1);
    }

    #[test]
    fn generic_urls_outside_dedicated_pattern() {
        let parsed = parse("def mirror = 'http://mirror.example.com/pkg'\n");
        assert_eq!(parsed.urls.len(), 1);
        assert_eq!(parsed.urls[0].context, UrlContext::Other);
    }

    #[test]
    fn classpath_configuration_is_plugin_decl() {
        let parsed = parse("buildscript {\n classpath 'com.android.tools.build:gradle:8.0.0'\n}\n");
        assert_eq!(parsed.dependencies[0].declared_in, DeclKind::Plugin);
    }

    #[test]
    fn dynamic_plus_version_stays_literal() {
        let parsed = parse("implementation 'g:a:1.+'\n");
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Literal("1.+".into()));
        let parsed = parse("implementation 'g:a:+'\n");
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Wildcard);
    }

    #[test]
    fn parse_is_idempotent() {
        let s = BuildScript::new(
            "build.gradle",
            SystemKind::Gradle,
            "implementation 'a:b:1'\n// note\nmaven { url 'https://x' }\n",
        );
        assert_eq!(parse_gradle(&s), parse_gradle(&s));
    }
}
