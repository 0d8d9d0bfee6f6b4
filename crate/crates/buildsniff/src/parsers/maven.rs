//! Maven POM parser: strips byte-order marks and editor-added line-number
//! prefixes, scans the XML in recovery mode, and normalizes the tree into
//! dependency, plugin, URL, property, and element lists.

use std::borrow::Cow;
use std::sync::OnceLock;

use regex::Regex;

use crate::model::{
    BuildScript, Comment, DeclKind, DependencyDecl, Diagnostic, ParsedBuild, SourceSpan,
    SystemKind, UrlContext, UrlRef, Variable, VersionSpec, XmlElement,
};
use crate::parsers::xml::{self, XmlNode};
use crate::parsers::{find_urls, line_at};

pub fn parse_maven(script: &BuildScript) -> ParsedBuild {
    let mut parsed = ParsedBuild::empty(SystemKind::Maven);
    let content = strip_bom(&script.content);
    let content = strip_line_number_prefixes(content);
    let lines: Vec<&str> = content.lines().collect();

    let doc = xml::scan(&content);
    for diag in &doc.diagnostics {
        parsed.diagnostics.push(Diagnostic::warning(diag));
    }
    for (text, start, end) in &doc.comments {
        parsed.comments.push(Comment {
            text: text.clone(),
            span: SourceSpan::new(*start, (*end).max(*start), text),
        });
    }

    let root = match doc.roots.first() {
        Some(root) => root,
        None => {
            parsed
                .diagnostics
                .push(Diagnostic::fatal("no root element found"));
            return parsed;
        }
    };

    walk(root, &root.name, &lines, &mut parsed);
    parsed
}

fn strip_bom(content: &str) -> &str {
    content.strip_prefix('\u{FEFF}').unwrap_or(content)
}

fn prefix_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*\d+(?::| \|)\s?").expect("valid prefix regex"))
}

/// Removes editor-added `NN:` / `NN |` line prefixes when the file as a whole
/// carries them (first tagged line must reveal a `<`). Stripping is per line,
/// so line numbers are unchanged and spans stay aligned.
fn strip_line_number_prefixes(content: &str) -> Cow<'_, str> {
    let re = prefix_regex();
    let mut nonblank = 0usize;
    let mut tagged = 0usize;
    let mut first_strip_starts_tag = false;
    for line in content.lines() {
        if line.trim().is_empty() {
            continue;
        }
        nonblank += 1;
        if let Some(m) = re.find(line) {
            if tagged == 0 {
                first_strip_starts_tag = line[m.end()..].trim_start().starts_with('<');
            }
            tagged += 1;
        }
    }
    if nonblank == 0 || tagged * 10 < nonblank * 9 || !first_strip_starts_tag {
        return Cow::Borrowed(content);
    }
    let stripped: Vec<&str> = content
        .lines()
        .map(|line| match re.find(line) {
            Some(m) => &line[m.end()..],
            None => line,
        })
        .collect();
    let mut out = stripped.join("\n");
    if content.ends_with('\n') {
        out.push('\n');
    }
    Cow::Owned(out)
}

fn walk(node: &XmlNode, path: &str, lines: &[&str], parsed: &mut ParsedBuild) {
    parsed.xml_elements.push(XmlElement {
        path: path.to_string(),
        text: node.text.clone(),
        has_children: !node.children.is_empty(),
        span: element_span(node, lines),
    });

    if node.name == "dependency" && path.contains("/dependencies/") {
        let declared_in = if path.contains("dependencyManagement") {
            DeclKind::Management
        } else {
            DeclKind::Direct
        };
        if let Some(dep) = dependency_from(node, declared_in, lines) {
            parsed.dependencies.push(dep);
        }
    } else if node.name == "plugin" && path.contains("/plugins/") {
        if let Some(dep) = dependency_from(node, DeclKind::Plugin, lines) {
            parsed.dependencies.push(dep);
        }
    }

    if path.starts_with("project/properties/") && node.children.is_empty() {
        parsed.variables.insert(
            node.name.clone(),
            Variable {
                value: node.text.clone(),
                span: element_span(node, lines),
            },
        );
    }

    if node.children.is_empty() && node.text.contains("://") {
        let context = url_context(path);
        for url in find_urls(&node.text) {
            parsed
                .urls
                .push(UrlRef::new(url, context, element_span(node, lines)));
        }
    }

    for child in &node.children {
        let child_path = format!("{path}/{}", child.name);
        walk(child, &child_path, lines, parsed);
    }
}

fn element_span(node: &XmlNode, lines: &[&str]) -> SourceSpan {
    SourceSpan::new(node.line_start, node.line_end, &line_at(lines, node.line_start))
}

fn dependency_from(node: &XmlNode, declared_in: DeclKind, lines: &[&str]) -> Option<DependencyDecl> {
    let name = node.child_text("artifactId").unwrap_or("").trim().to_string();
    if name.is_empty() {
        return None;
    }
    let group = node.child_text("groupId").unwrap_or("").trim().to_string();
    let version_spec = match node.child("version") {
        Some(version) => VersionSpec::from_text(&version.text),
        None => VersionSpec::Absent,
    };
    let scope = node.child_text("scope").unwrap_or("").trim().to_string();
    Some(DependencyDecl {
        group,
        name,
        version_spec,
        scope_or_configuration: scope,
        declared_in,
        span: element_span(node, lines),
    })
}

fn url_context(path: &str) -> UrlContext {
    if path.contains("pluginRepositor") {
        UrlContext::Plugin
    } else if path.contains("repositories/repository") {
        UrlContext::Repository
    } else if path.contains("distributionManagement") {
        UrlContext::Distribution
    } else {
        UrlContext::Other
    }
}

/// Element paths that hold project metadata; URLs there are descriptive, not
/// fetched by the build (used by the hardcoded-paths detector's exemptions).
pub fn is_metadata_path(path: &str) -> bool {
    const METADATA: [&str; 9] = [
        "project/url",
        "project/scm",
        "project/licenses",
        "project/issueManagement",
        "project/ciManagement",
        "project/organization",
        "project/developers",
        "project/contributors",
        "project/mailingLists",
    ];
    METADATA
        .iter()
        .any(|m| path == *m || path.starts_with(&format!("{m}/")))
}

/// True when the path is inside a repository/distribution declaration.
pub fn is_repository_path(path: &str) -> bool {
    path.contains("repositories/repository")
        || path.contains("pluginRepositor")
        || path.contains("distributionManagement")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn script(content: &str) -> BuildScript {
        BuildScript::new("pom.xml", SystemKind::Maven, content)
    }

    const MINIMAL_POM: &str = r#"<project>
  <modelVersion>4.0.0</modelVersion>
  <groupId>com.example</groupId>
  <artifactId>app</artifactId>
  <version>0.1.0</version>
  <dependencies>
    <dependency>
      <groupId>g</groupId>
      <artifactId>a</artifactId>
      <version>1.0</version>
    </dependency>
  </dependencies>
</project>
"#;

    #[test]
    fn minimal_pom_one_dependency() {
        let parsed = parse_maven(&script(MINIMAL_POM));
        assert_eq!(parsed.dependencies.len(), 1);
        let dep = &parsed.dependencies[0];
        assert_eq!(dep.group, "g");
        assert_eq!(dep.name, "a");
        assert_eq!(dep.version_spec, VersionSpec::Literal("1.0".into()));
        assert_eq!(dep.declared_in, DeclKind::Direct);
        assert_eq!(dep.span.line_start, 7);
        assert_eq!(dep.span.line_end, 11);
    }

    #[test]
    fn property_version_resolves_to_property_ref() {
        let pom = r#"<project>
  <properties><lib.version>2.3</lib.version></properties>
  <dependencies>
    <dependency>
      <groupId>g</groupId>
      <artifactId>lib</artifactId>
      <version>${lib.version}</version>
    </dependency>
  </dependencies>
</project>"#;
        let parsed = parse_maven(&script(pom));
        assert_eq!(
            parsed.dependencies[0].version_spec,
            VersionSpec::PropertyRef("lib.version".into())
        );
        assert_eq!(parsed.variables["lib.version"].value, "2.3");
    }

    #[test]
    fn line_number_prefixes_stripped_to_identical_ir() {
        let prefixed: String = MINIMAL_POM
            .lines()
            .map(|l| format!("12: {l}"))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n";
        let plain = parse_maven(&script(MINIMAL_POM));
        let from_prefixed = parse_maven(&script(&prefixed));
        assert_eq!(plain, from_prefixed);
    }

    #[test]
    fn pipe_style_prefixes_stripped() {
        let prefixed: String = MINIMAL_POM
            .lines()
            .enumerate()
            .map(|(i, l)| format!("{} | {l}", i + 1))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n";
        let from_prefixed = parse_maven(&script(&prefixed));
        assert_eq!(from_prefixed.dependencies.len(), 1);
        assert_eq!(from_prefixed.dependencies[0].name, "a");
    }

    #[test]
    fn ordinary_pom_with_numeric_text_not_mangled() {
        // A version line starting with digits must not be treated as a prefix.
        let parsed = parse_maven(&script(MINIMAL_POM));
        assert_eq!(
            parsed
                .xml_elements
                .iter()
                .find(|e| e.path == "project/version")
                .map(|e| e.text.as_str()),
            Some("0.1.0")
        );
    }

    #[test]
    fn bom_stripped() {
        let with_bom = format!("\u{FEFF}{MINIMAL_POM}");
        let parsed = parse_maven(&script(&with_bom));
        assert_eq!(parsed.dependencies.len(), 1);
    }

    #[test]
    fn management_and_plugin_decls_flagged() {
        let pom = r#"<project>
  <dependencyManagement>
    <dependencies>
      <dependency>
        <groupId>g</groupId><artifactId>managed</artifactId><version>2.0</version>
      </dependency>
    </dependencies>
  </dependencyManagement>
  <build>
    <plugins>
      <plugin>
        <groupId>org.apache.maven.plugins</groupId>
        <artifactId>maven-compiler-plugin</artifactId>
        <version>3.11.0</version>
      </plugin>
    </plugins>
  </build>
</project>"#;
        let parsed = parse_maven(&script(pom));
        assert_eq!(parsed.dependencies.len(), 2);
        assert_eq!(parsed.dependencies[0].declared_in, DeclKind::Management);
        assert_eq!(parsed.dependencies[1].declared_in, DeclKind::Plugin);
        assert_eq!(parsed.dependencies[1].name, "maven-compiler-plugin");
    }

    #[test]
    fn url_contexts_assigned_by_element_path() {
        let pom = r#"<project>
  <url>https://example.org/home</url>
  <repositories>
    <repository><id>r</id><url>http://repo.example.com/maven2</url></repository>
  </repositories>
  <pluginRepositories>
    <pluginRepository><id>p</id><url>https://plugins.example.com</url></pluginRepository>
  </pluginRepositories>
  <distributionManagement>
    <repository><id>d</id><url>https://dist.example.com</url></repository>
  </distributionManagement>
</project>"#;
        let parsed = parse_maven(&script(pom));
        let ctx_of = |url: &str| {
            parsed
                .urls
                .iter()
                .find(|u| u.url.contains(url))
                .map(|u| u.context)
        };
        assert_eq!(ctx_of("example.org/home"), Some(UrlContext::Other));
        assert_eq!(ctx_of("repo.example.com"), Some(UrlContext::Repository));
        assert_eq!(ctx_of("plugins.example.com"), Some(UrlContext::Plugin));
        assert_eq!(ctx_of("dist.example.com"), Some(UrlContext::Distribution));
        assert_eq!(
            parsed.urls.iter().find(|u| u.url.contains("repo.example.com")).unwrap().scheme,
            "http"
        );
    }

    #[test]
    fn irrecoverable_input_yields_fatal_diagnostic() {
        let parsed = parse_maven(&script("this is not xml at all"));
        assert!(parsed.dependencies.is_empty());
        assert!(parsed.xml_elements.is_empty());
        assert!(parsed.diagnostics.iter().any(|d| d.fatal));
    }

    #[test]
    fn unclosed_trailing_tags_still_parse() {
        let pom = "<project>\n<dependencies>\n<dependency>\n<groupId>g</groupId>\n<artifactId>a</artifactId>\n<version>1</version>\n";
        let parsed = parse_maven(&script(pom));
        assert_eq!(parsed.dependencies.len(), 1);
        assert!(!parsed.diagnostics.iter().any(|d| d.fatal));
    }

    #[test]
    fn empty_and_self_closed_elements_recorded() {
        let pom = "<project>\n<url/>\n<dependencies>\n<dependency>\n<artifactId>a</artifactId>\n<version></version>\n</dependency>\n</dependencies>\n</project>";
        let parsed = parse_maven(&script(pom));
        let url = parsed.xml_elements.iter().find(|e| e.path == "project/url").unwrap();
        assert_eq!(url.text, "");
        assert!(!url.has_children);
        let version = parsed
            .xml_elements
            .iter()
            .find(|e| e.path.ends_with("dependency/version"))
            .unwrap();
        assert_eq!(version.text, "");
        // a dependency with an empty version element counts as versionless
        assert_eq!(parsed.dependencies[0].version_spec, VersionSpec::Absent);
    }

    #[test]
    fn comments_collected() {
        let pom = "<project>\n<!-- TODO: remove -->\n</project>";
        let parsed = parse_maven(&script(pom));
        assert_eq!(parsed.comments.len(), 1);
        assert_eq!(parsed.comments[0].text, "TODO: remove");
        assert_eq!(parsed.comments[0].span.line_start, 2);
    }

    #[test]
    fn parse_is_deterministic_and_idempotent() {
        let s = script(MINIMAL_POM);
        assert_eq!(parse_maven(&s), parse_maven(&s));
    }

    #[test]
    fn spans_valid_for_script() {
        let s = script(MINIMAL_POM);
        let parsed = parse_maven(&s);
        for e in &parsed.xml_elements {
            assert!(e.span.is_valid_for(s.loc), "bad span {:?} for {}", e.span, e.path);
        }
        for d in &parsed.dependencies {
            assert!(d.span.is_valid_for(s.loc));
        }
    }

    #[test]
    fn metadata_and_repository_path_classifiers() {
        assert!(is_metadata_path("project/url"));
        assert!(is_metadata_path("project/scm/url"));
        assert!(!is_metadata_path("project/dependencies/dependency/url"));
        assert!(is_repository_path("project/repositories/repository/url"));
        assert!(is_repository_path("project/distributionManagement/repository/url"));
        assert!(!is_repository_path("project/url"));
    }
}
