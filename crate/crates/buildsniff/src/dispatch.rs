//! Determines the build system of an input file: filename rules first, then
//! lexical heuristics over the first kilobyte.

use crate::model::SystemKind;

/// Window of content inspected by the lexical heuristics.
pub const HEAD_WINDOW_BYTES: usize = 1024;

/// Maps a filename to a system, or `None` when the name is not conclusive.
pub fn system_from_filename(filename: &str) -> Option<SystemKind> {
    let base = filename
        .rsplit(['/', '\\'])
        .next()
        .unwrap_or(filename);
    if base == "pom.xml" {
        return Some(SystemKind::Maven);
    }
    if base.ends_with(".gradle") || base.ends_with(".gradle.kts") {
        return Some(SystemKind::Gradle);
    }
    if base == "CMakeLists.txt" || base.ends_with(".cmake") {
        return Some(SystemKind::CMake);
    }
    if base == "Makefile" || base == "makefile" || base == "GNUmakefile" || base.ends_with(".mk") {
        return Some(SystemKind::Make);
    }
    None
}

/// Identifies the build system from the filename and the first kilobyte of
/// content. Filename rules dominate; heuristic precedence is
/// CMake > Maven > Gradle > Make. `Unknown` is a valid result.
pub fn identify_system(filename: &str, head: &str) -> SystemKind {
    if let Some(kind) = system_from_filename(filename) {
        return kind;
    }
    let head = clip_head(head);

    if head.contains("cmake_minimum_required") || head.contains("add_executable(") {
        return SystemKind::CMake;
    }
    if head.contains("<project") && head.contains("<modelVersion") {
        return SystemKind::Maven;
    }
    if head.contains("dependencies {")
        && (head.contains("implementation") || head.contains("apply plugin"))
    {
        return SystemKind::Gradle;
    }
    if has_make_style_rule(head) {
        return SystemKind::Make;
    }
    SystemKind::Unknown
}

fn clip_head(head: &str) -> &str {
    if head.len() <= HEAD_WINDOW_BYTES {
        return head;
    }
    let mut end = HEAD_WINDOW_BYTES;
    while !head.is_char_boundary(end) {
        end -= 1;
    }
    &head[..end]
}

/// A `target: prereqs` line immediately followed by a tab-indented line.
fn has_make_style_rule(head: &str) -> bool {
    let lines: Vec<&str> = head.lines().collect();
    for pair in lines.windows(2) {
        if looks_like_rule_line(pair[0]) && pair[1].starts_with('\t') {
            return true;
        }
    }
    false
}

fn looks_like_rule_line(line: &str) -> bool {
    if line.starts_with('\t') || line.starts_with('#') {
        return false;
    }
    let first = match line.chars().next() {
        Some(c) if !c.is_whitespace() => c,
        _ => return false,
    };
    let _ = first;
    match line.find(':') {
        Some(idx) => {
            // ':' must come before any '=' (otherwise it is an assignment)
            !line[..idx].is_empty() && !line[..idx].contains('=')
        }
        None => false,
    }
}
