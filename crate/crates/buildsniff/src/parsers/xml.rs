//! Tolerant XML scanner used by the Maven parser and registry metadata
//! parsing. Recovers from unclosed trailing tags, mismatched end tags, and
//! stray characters outside the root; yields a best-effort element tree plus
//! diagnostics instead of failing. Attributes are skipped: downstream
//! consumers only need element name chains, text, and line spans.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlNode {
    pub name: String,
    /// Own text content (children's text excluded), whitespace-trimmed.
    pub text: String,
    pub children: Vec<XmlNode>,
    pub line_start: usize,
    pub line_end: usize,
}

impl XmlNode {
    pub fn child(&self, name: &str) -> Option<&XmlNode> {
        self.children.iter().find(|c| c.name == name)
    }

    pub fn child_text(&self, name: &str) -> Option<&str> {
        self.child(name).map(|c| c.text.as_str())
    }
}

#[derive(Debug, Clone, Default)]
pub struct XmlDocument {
    pub roots: Vec<XmlNode>,
    /// (text, line_start, line_end)
    pub comments: Vec<(String, usize, usize)>,
    pub diagnostics: Vec<String>,
}

struct OpenNode {
    node: XmlNode,
    text_parts: Vec<String>,
}

/// Scans `content` into a best-effort element tree. Never fails.
pub fn scan(content: &str) -> XmlDocument {
    let chars: Vec<char> = content.chars().collect();
    let mut doc = XmlDocument::default();
    let mut stack: Vec<OpenNode> = Vec::new();
    let mut pos = 0usize;
    let mut line = 1usize;
    let mut stray_text_seen = false;

    let advance = |from: usize, to: usize, line: &mut usize, chars: &[char]| {
        for &c in &chars[from..to.min(chars.len())] {
            if c == '\n' {
                *line += 1;
            }
        }
    };

    while pos < chars.len() {
        // Text run up to the next '<'.
        let lt = match find_char(&chars, pos, '<') {
            Some(idx) => idx,
            None => chars.len(),
        };
        if lt > pos {
            let text: String = chars[pos..lt].iter().collect();
            if let Some(top) = stack.last_mut() {
                top.text_parts.push(text);
            } else if !text.trim().is_empty() && !stray_text_seen {
                doc.diagnostics
                    .push(format!("content outside root element near line {line}"));
                stray_text_seen = true;
            }
            advance(pos, lt, &mut line, &chars);
            pos = lt;
        }
        if pos >= chars.len() {
            break;
        }

        // pos is at '<'.
        let tag_line = line;
        if starts_with(&chars, pos, "<!--") {
            let end = find_seq(&chars, pos + 4, "-->");
            let (body_end, next) = match end {
                Some(idx) => (idx, idx + 3),
                None => {
                    doc.diagnostics
                        .push(format!("unterminated comment at line {line}"));
                    (chars.len(), chars.len())
                }
            };
            let text: String = chars[pos + 4..body_end].iter().collect();
            advance(pos, next, &mut line, &chars);
            doc.comments.push((text.trim().to_string(), tag_line, line));
            pos = next;
        } else if starts_with(&chars, pos, "<![CDATA[") {
            let end = find_seq(&chars, pos + 9, "]]>");
            let (body_end, next) = match end {
                Some(idx) => (idx, idx + 3),
                None => {
                    doc.diagnostics
                        .push(format!("unterminated CDATA section at line {line}"));
                    (chars.len(), chars.len())
                }
            };
            let text: String = chars[pos + 9..body_end].iter().collect();
            if let Some(top) = stack.last_mut() {
                top.text_parts.push(text);
            }
            advance(pos, next, &mut line, &chars);
            pos = next;
        } else if starts_with(&chars, pos, "<?") {
            let next = match find_seq(&chars, pos + 2, "?>") {
                Some(idx) => idx + 2,
                None => chars.len(),
            };
            advance(pos, next, &mut line, &chars);
            pos = next;
        } else if starts_with(&chars, pos, "<!") {
            let next = match find_char(&chars, pos, '>') {
                Some(idx) => idx + 1,
                None => chars.len(),
            };
            advance(pos, next, &mut line, &chars);
            pos = next;
        } else if starts_with(&chars, pos, "</") {
            let gt = find_char(&chars, pos, '>');
            let (name_end, next) = match gt {
                Some(idx) => (idx, idx + 1),
                None => (chars.len(), chars.len()),
            };
            let name: String = chars[pos + 2..name_end]
                .iter()
                .collect::<String>()
                .trim()
                .to_string();
            advance(pos, next, &mut line, &chars);
            pos = next;
            close_element(&mut doc, &mut stack, &name, line);
        } else if pos + 1 < chars.len() && is_name_start(chars[pos + 1]) {
            // Start tag: read the name then skip to '>' honoring quotes.
            let mut idx = pos + 1;
            while idx < chars.len() && is_name_char(chars[idx]) {
                idx += 1;
            }
            let name: String = chars[pos + 1..idx].iter().collect();
            let mut quote: Option<char> = None;
            let mut self_closing = false;
            let mut gt = None;
            while idx < chars.len() {
                let c = chars[idx];
                match quote {
                    Some(q) => {
                        if c == q {
                            quote = None;
                        }
                    }
                    None => match c {
                        '"' | '\'' => quote = Some(c),
                        '>' => {
                            gt = Some(idx);
                            break;
                        }
                        _ => {}
                    },
                }
                if c == '/' && quote.is_none() {
                    self_closing = true;
                } else if !c.is_whitespace() && c != '>' {
                    // any non-'/' character after '/' cancels self-closing
                    if quote.is_none() && c != '/' {
                        self_closing = false;
                    }
                }
                idx += 1;
            }
            let next = match gt {
                Some(i) => i + 1,
                None => {
                    doc.diagnostics
                        .push(format!("unterminated tag <{name} at line {tag_line}"));
                    chars.len()
                }
            };
            advance(pos, next, &mut line, &chars);
            pos = next;

            let node = XmlNode {
                name,
                text: String::new(),
                children: Vec::new(),
                line_start: tag_line,
                line_end: line,
            };
            if self_closing {
                attach(&mut doc, &mut stack, node, line);
            } else {
                stack.push(OpenNode {
                    node,
                    text_parts: Vec::new(),
                });
            }
        } else {
            // Stray '<' that does not open a tag: keep it as text.
            if let Some(top) = stack.last_mut() {
                top.text_parts.push("<".to_string());
            }
            pos += 1;
        }
    }

    // Auto-close everything left open at EOF.
    while let Some(open) = stack.pop() {
        doc.diagnostics
            .push(format!("unclosed element <{}>", open.node.name));
        let node = seal(open, line);
        attach_finished(&mut doc, &mut stack, node);
    }

    doc
}

fn close_element(doc: &mut XmlDocument, stack: &mut Vec<OpenNode>, name: &str, line: usize) {
    let matching = stack.iter().rposition(|open| open.node.name == name);
    match matching {
        Some(idx) => {
            // Auto-close anything opened above the matching element.
            while stack.len() > idx + 1 {
                let open = stack.pop().expect("stack nonempty");
                doc.diagnostics.push(format!(
                    "element <{}> implicitly closed by </{}>",
                    open.node.name, name
                ));
                let node = seal(open, line);
                attach_finished(doc, stack, node);
            }
            let open = stack.pop().expect("matching element present");
            let node = seal(open, line);
            attach_finished(doc, stack, node);
        }
        None => {
            doc.diagnostics
                .push(format!("unmatched closing tag </{name}> at line {line}"));
        }
    }
}

fn seal(open: OpenNode, line_end: usize) -> XmlNode {
    let mut node = open.node;
    node.text = open.text_parts.concat().trim().to_string();
    node.line_end = line_end.max(node.line_start);
    node
}

fn attach(doc: &mut XmlDocument, stack: &mut Vec<OpenNode>, mut node: XmlNode, line: usize) {
    node.line_end = line.max(node.line_start);
    attach_finished(doc, stack, node);
}

fn attach_finished(doc: &mut XmlDocument, stack: &mut Vec<OpenNode>, node: XmlNode) {
    match stack.last_mut() {
        Some(parent) => parent.node.children.push(node),
        None => doc.roots.push(node),
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')
}

fn starts_with(chars: &[char], pos: usize, pat: &str) -> bool {
    let pat: Vec<char> = pat.chars().collect();
    chars.len() >= pos + pat.len() && chars[pos..pos + pat.len()] == pat[..]
}

fn find_char(chars: &[char], from: usize, needle: char) -> Option<usize> {
    chars[from..].iter().position(|&c| c == needle).map(|i| from + i)
}

fn find_seq(chars: &[char], from: usize, pat: &str) -> Option<usize> {
    let pat: Vec<char> = pat.chars().collect();
    if pat.is_empty() || chars.len() < pat.len() {
        return None;
    }
    (from..=chars.len() - pat.len()).find(|&i| chars[i..i + pat.len()] == pat[..])
}
