//! Shared domain types: build scripts, the canonical parsed IR, smell
//! categories with their CWE mappings, and findings.
//!
//! Everything here is an immutable value type; no I/O happens in this module.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// The build system a script belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    Maven,
    Gradle,
    CMake,
    Make,
    /// Not recognized as any supported system. Never analyzed by detectors.
    Unknown,
}

impl SystemKind {
    /// The four analyzable systems, in canonical order.
    pub const ANALYZABLE: [SystemKind; 4] = [
        SystemKind::Maven,
        SystemKind::Gradle,
        SystemKind::CMake,
        SystemKind::Make,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Maven => "Maven",
            SystemKind::Gradle => "Gradle",
            SystemKind::CMake => "CMake",
            SystemKind::Make => "Make",
            SystemKind::Unknown => "Unknown",
        }
    }

    /// Uppercase token used in detector ids, e.g. `MAVEN.INSECURE_URLS`.
    pub fn id_token(&self) -> &'static str {
        match self {
            SystemKind::Maven => "MAVEN",
            SystemKind::Gradle => "GRADLE",
            SystemKind::CMake => "CMAKE",
            SystemKind::Make => "MAKE",
            SystemKind::Unknown => "UNKNOWN",
        }
    }

    pub fn parse(s: &str) -> Option<SystemKind> {
        match s.to_ascii_lowercase().as_str() {
            "maven" => Some(SystemKind::Maven),
            "gradle" => Some(SystemKind::Gradle),
            "cmake" => Some(SystemKind::CMake),
            "make" => Some(SystemKind::Make),
            "unknown" => Some(SystemKind::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One raw build script as collected from disk or a remote service.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildScript {
    /// Path or URL the script came from.
    pub origin: String,
    pub system: SystemKind,
    pub content: String,
    /// Physical line count (newline-delimited lines, blanks and comments included).
    pub loc: usize,
    /// Hex-encoded SHA-256 of the content.
    pub content_hash: String,
}

impl BuildScript {
    pub fn new(origin: impl Into<String>, system: SystemKind, content: impl Into<String>) -> Self {
        let content = content.into();
        let loc = count_lines(&content);
        let content_hash = hex_digest(&content);
        BuildScript {
            origin: origin.into(),
            system,
            content,
            loc,
            content_hash,
        }
    }
}

/// Number of newline-delimited lines. A trailing newline does not add an
/// empty line, so this matches `wc -l` for newline-terminated files while
/// keeping the last line addressable by spans in files without one.
pub fn count_lines(content: &str) -> usize {
    content.lines().count()
}

fn hex_digest(content: &str) -> String {
    let digest = Sha256::digest(content.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Maximum excerpt length carried by a span.
pub const MAX_EXCERPT_CHARS: usize = 200;

/// A 1-based line range within a script, with a short source excerpt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line_start: usize,
    pub line_end: usize,
    pub excerpt: String,
}

impl SourceSpan {
    /// Builds a span, truncating the excerpt to 200 characters.
    pub fn new(line_start: usize, line_end: usize, excerpt: &str) -> Self {
        let excerpt_trimmed = excerpt.trim();
        let excerpt = if excerpt_trimmed.chars().count() > MAX_EXCERPT_CHARS {
            excerpt_trimmed.chars().take(MAX_EXCERPT_CHARS).collect()
        } else {
            excerpt_trimmed.to_string()
        };
        SourceSpan {
            line_start,
            line_end,
            excerpt,
        }
    }

    pub fn line(line: usize, excerpt: &str) -> Self {
        SourceSpan::new(line, line, excerpt)
    }

    pub fn is_valid_for(&self, loc: usize) -> bool {
        1 <= self.line_start && self.line_start <= self.line_end && self.line_end <= loc
    }
}

/// How a dependency's version is written down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VersionSpec {
    Literal(String),
    /// `${name}` / `$name` reference into the script's variables.
    PropertyRef(String),
    Range(String),
    /// Exactly `*`, `+`, `LATEST`, or `RELEASE`.
    Wildcard,
    Absent,
}

impl VersionSpec {
    /// Classifies a raw version string per the wildcard / range / property rules.
    pub fn from_text(text: &str) -> VersionSpec {
        let t = text.trim();
        if t.is_empty() {
            return VersionSpec::Absent;
        }
        if t == "*" || t == "+" || t == "LATEST" || t == "RELEASE" {
            return VersionSpec::Wildcard;
        }
        if let Some(name) = property_ref_name(t) {
            return VersionSpec::PropertyRef(name);
        }
        if (t.starts_with('[') || t.starts_with('(')) && (t.ends_with(']') || t.ends_with(')')) {
            return VersionSpec::Range(t.to_string());
        }
        VersionSpec::Literal(t.to_string())
    }
}

/// Extracts the property name from `${name}` or `$name`, if the whole text is
/// a single reference.
pub fn property_ref_name(text: &str) -> Option<String> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix("${").and_then(|s| s.strip_suffix('}')) {
        if !inner.is_empty() && !inner.contains('$') {
            return Some(inner.to_string());
        }
    }
    if let Some(rest) = t.strip_prefix('$') {
        if !rest.is_empty()
            && !rest.starts_with('{')
            && !rest.starts_with('(')
            && rest.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
        {
            return Some(rest.to_string());
        }
    }
    None
}

/// Where a dependency declaration lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeclKind {
    Direct,
    Management,
    Plugin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyDecl {
    /// May be empty for Make and CMake packages.
    pub group: String,
    pub name: String,
    pub version_spec: VersionSpec,
    pub scope_or_configuration: String,
    pub declared_in: DeclKind,
    pub span: SourceSpan,
}

/// Syntactic context a URL was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UrlContext {
    Repository,
    Distribution,
    Download,
    Plugin,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrlRef {
    pub url: String,
    /// Characters before `://`, lowercased; `"none"` when absent.
    pub scheme: String,
    pub context: UrlContext,
    pub span: SourceSpan,
}

impl UrlRef {
    pub fn new(url: impl Into<String>, context: UrlContext, span: SourceSpan) -> Self {
        let url = url.into();
        let scheme = match url.find("://") {
            Some(idx) => url[..idx].to_ascii_lowercase(),
            None => "none".to_string(),
        };
        UrlRef {
            url,
            scheme,
            context,
            span,
        }
    }

    /// Host portion of the URL (userinfo and port stripped), if any.
    pub fn host(&self) -> Option<&str> {
        let rest = &self.url[self.url.find("://")? + 3..];
        let authority = rest.split(['/', '?', '#']).next().unwrap_or(rest);
        let host_port = authority.rsplit('@').next().unwrap_or(authority);
        Some(host_port.split(':').next().unwrap_or(host_port))
    }
}

/// A variable or property binding recorded by a parser.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub value: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub text: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MakeRule {
    pub target: String,
    pub prerequisites: Vec<String>,
    pub recipe: Vec<(String, SourceSpan)>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMakeDirective {
    pub name: String,
    pub args: Vec<String>,
    pub span: SourceSpan,
}

/// One XML element flattened to its name chain, e.g.
/// `project/dependencies/dependency/version`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XmlElement {
    pub path: String,
    /// Trimmed text content; empty for elements with no own text.
    pub text: String,
    pub has_children: bool,
    pub span: SourceSpan,
}

impl XmlElement {
    /// Last segment of the path chain (the element's own name).
    pub fn name(&self) -> &str {
        self.path.rsplit('/').next().unwrap_or(&self.path)
    }
}

/// A parse warning. Diagnostics never abort analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    pub fatal: bool,
}

impl Diagnostic {
    pub fn warning(message: impl Into<String>) -> Self {
        Diagnostic {
            message: message.into(),
            fatal: false,
        }
    }

    pub fn fatal(message: impl Into<String>) -> Self {
        Diagnostic {
            message: message.into(),
            fatal: true,
        }
    }
}

/// Canonical IR emitted by every parser and consumed by every detector.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedBuild {
    pub system: SystemKind,
    pub dependencies: Vec<DependencyDecl>,
    pub urls: Vec<UrlRef>,
    pub variables: std::collections::BTreeMap<String, Variable>,
    pub comments: Vec<Comment>,
    pub make_rules: Vec<MakeRule>,
    pub cmake_directives: Vec<CMakeDirective>,
    pub xml_elements: Vec<XmlElement>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Default for SystemKind {
    fn default() -> Self {
        SystemKind::Unknown
    }
}

impl ParsedBuild {
    pub fn empty(system: SystemKind) -> Self {
        ParsedBuild {
            system,
            ..Default::default()
        }
    }
}

/// The thirteen smell categories, in canonical (matrix) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SmellCategory {
    HardcodedCredentials,
    HardcodedPathsUrls,
    DeprecatedDependencies,
    OutdatedDependencies,
    Duplicates,
    SuspiciousComments,
    InsecureUrls,
    EmptyIncompleteTags,
    Complexity,
    LackErrorHandling,
    WildcardUsage,
    MissingDependencyVersion,
    InconsistentDependencyManagement,
}

impl SmellCategory {
    pub const ALL: [SmellCategory; 13] = [
        SmellCategory::HardcodedCredentials,
        SmellCategory::HardcodedPathsUrls,
        SmellCategory::DeprecatedDependencies,
        SmellCategory::OutdatedDependencies,
        SmellCategory::Duplicates,
        SmellCategory::SuspiciousComments,
        SmellCategory::InsecureUrls,
        SmellCategory::EmptyIncompleteTags,
        SmellCategory::Complexity,
        SmellCategory::LackErrorHandling,
        SmellCategory::WildcardUsage,
        SmellCategory::MissingDependencyVersion,
        SmellCategory::InconsistentDependencyManagement,
    ];

    /// Position in the canonical order; used as matrix index.
    pub fn index(&self) -> usize {
        SmellCategory::ALL
            .iter()
            .position(|c| c == self)
            .expect("category present in ALL")
    }

    pub fn name(&self) -> &'static str {
        match self {
            SmellCategory::HardcodedCredentials => "HardcodedCredentials",
            SmellCategory::HardcodedPathsUrls => "HardcodedPathsUrls",
            SmellCategory::DeprecatedDependencies => "DeprecatedDependencies",
            SmellCategory::OutdatedDependencies => "OutdatedDependencies",
            SmellCategory::Duplicates => "Duplicates",
            SmellCategory::SuspiciousComments => "SuspiciousComments",
            SmellCategory::InsecureUrls => "InsecureUrls",
            SmellCategory::EmptyIncompleteTags => "EmptyIncompleteTags",
            SmellCategory::Complexity => "Complexity",
            SmellCategory::LackErrorHandling => "LackErrorHandling",
            SmellCategory::WildcardUsage => "WildcardUsage",
            SmellCategory::MissingDependencyVersion => "MissingDependencyVersion",
            SmellCategory::InconsistentDependencyManagement => "InconsistentDependencyManagement",
        }
    }

    /// Uppercase token used in detector ids.
    pub fn id_token(&self) -> &'static str {
        match self {
            SmellCategory::HardcodedCredentials => "HARDCODED_CREDENTIALS",
            SmellCategory::HardcodedPathsUrls => "HARDCODED_PATHS_URLS",
            SmellCategory::DeprecatedDependencies => "DEPRECATED_DEPENDENCIES",
            SmellCategory::OutdatedDependencies => "OUTDATED_DEPENDENCIES",
            SmellCategory::Duplicates => "DUPLICATES",
            SmellCategory::SuspiciousComments => "SUSPICIOUS_COMMENTS",
            SmellCategory::InsecureUrls => "INSECURE_URLS",
            SmellCategory::EmptyIncompleteTags => "EMPTY_INCOMPLETE_TAGS",
            SmellCategory::Complexity => "COMPLEXITY",
            SmellCategory::LackErrorHandling => "LACK_ERROR_HANDLING",
            SmellCategory::WildcardUsage => "WILDCARD_USAGE",
            SmellCategory::MissingDependencyVersion => "MISSING_DEPENDENCY_VERSION",
            SmellCategory::InconsistentDependencyManagement => "INCONSISTENT_DEPENDENCY_MANAGEMENT",
        }
    }

    pub fn parse(s: &str) -> Option<SmellCategory> {
        SmellCategory::ALL.iter().copied().find(|c| c.name() == s)
    }
}

impl fmt::Display for SmellCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed CWE mapping per category. Total and stable.
pub fn cwe_for(category: SmellCategory) -> &'static [u32] {
    match category {
        SmellCategory::HardcodedCredentials => &[798, 259],
        SmellCategory::HardcodedPathsUrls => &[427, 706],
        SmellCategory::DeprecatedDependencies => &[1104],
        SmellCategory::OutdatedDependencies => &[1104],
        SmellCategory::Duplicates => &[710],
        SmellCategory::SuspiciousComments => &[546],
        SmellCategory::InsecureUrls => &[319],
        SmellCategory::EmptyIncompleteTags => &[611],
        SmellCategory::Complexity => &[710],
        SmellCategory::LackErrorHandling => &[391],
        SmellCategory::WildcardUsage => &[829],
        SmellCategory::MissingDependencyVersion => &[440],
        SmellCategory::InconsistentDependencyManagement => &[439, 710],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Low,
    Medium,
    High,
    Critical,
}

impl Severity {
    pub fn name(&self) -> &'static str {
        match self {
            Severity::Low => "Low",
            Severity::Medium => "Medium",
            Severity::High => "High",
            Severity::Critical => "Critical",
        }
    }

    pub fn parse(s: &str) -> Option<Severity> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Some(Severity::Low),
            "medium" => Some(Severity::Medium),
            "high" => Some(Severity::High),
            "critical" => Some(Severity::Critical),
            _ => None,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Default severity per category. Overridable through the rule config.
pub fn default_severity(category: SmellCategory) -> Severity {
    match category {
        SmellCategory::HardcodedCredentials => Severity::Critical,
        SmellCategory::InsecureUrls
        | SmellCategory::WildcardUsage
        | SmellCategory::DeprecatedDependencies => Severity::High,
        SmellCategory::HardcodedPathsUrls
        | SmellCategory::OutdatedDependencies
        | SmellCategory::MissingDependencyVersion
        | SmellCategory::InconsistentDependencyManagement
        | SmellCategory::LackErrorHandling
        | SmellCategory::EmptyIncompleteTags => Severity::Medium,
        SmellCategory::Duplicates
        | SmellCategory::SuspiciousComments
        | SmellCategory::Complexity => Severity::Low,
    }
}

/// One smell occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub category: SmellCategory,
    /// `<SYSTEM>.<CATEGORY>[.variant]`
    pub detector_id: String,
    pub severity: Severity,
    pub message: String,
    pub cwe_ids: Vec<u32>,
    /// Origin of the script the finding belongs to.
    pub file: String,
    pub span: SourceSpan,
    /// True when the finding reports a detector failure rather than a smell.
    pub engine_error: bool,
}

impl Finding {
    /// Sort key giving the canonical report order.
    pub fn sort_key(&self) -> (&str, usize, &str) {
        (&self.file, self.span.line_start, &self.detector_id)
    }
}

/// Sorts findings into canonical report order: (file, line_start, detector_id).
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}
