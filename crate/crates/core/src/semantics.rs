//! Argument-level analysis of log calls: argument shapes, label detection
//! between a literal and a named argument, repeated-character normalization
//! of literal text, and calls embedded in argument expressions.

use crate::ast::{LiteralKind, NodeData, NodeId, NodeKind, SourceTree};

/// Shape category of one log argument.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ArgumentKind {
    Literal,
    Template,
    Identifier,
    Member,
    Call,
    Other,
}

impl ArgumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArgumentKind::Literal => "literal",
            ArgumentKind::Template => "template",
            ArgumentKind::Identifier => "identifier",
            ArgumentKind::Member => "member",
            ArgumentKind::Call => "call",
            ArgumentKind::Other => "other",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ArgumentProfile {
    pub arg_count: usize,
    pub kinds: Vec<ArgumentKind>,
    /// Source text of each argument; template placeholders stay as written.
    pub rendered: Vec<String>,
    /// Referable name per argument: the identifier itself, or the final
    /// non-computed property of a member access.
    pub names: Vec<Option<String>>,
    /// A string or template literal is present (the primary literal notion).
    pub has_literal: bool,
    /// Some literal argument names another argument. Defined for any arity;
    /// for two-argument calls this equals [`detect_label`].
    pub label_names_other: bool,
    pub embedded_callee_names: Vec<String>,
}

pub fn profile_arguments(tree: &SourceTree, call: NodeId) -> ArgumentProfile {
    let args: Vec<NodeId> = tree.node(call).children[1..].to_vec();
    let kinds: Vec<ArgumentKind> = args.iter().map(|&a| argument_kind(tree, a)).collect();
    let rendered: Vec<String> = args
        .iter()
        .map(|&a| tree.source_slice(a).to_string())
        .collect();
    let names: Vec<Option<String>> = args.iter().map(|&a| referable_name(tree, a)).collect();
    let has_literal = args.iter().any(|&a| is_text_literal(tree, a));
    let mut profile = ArgumentProfile {
        arg_count: args.len(),
        kinds,
        rendered,
        names,
        has_literal,
        label_names_other: false,
        embedded_callee_names: embedded_calls(tree, call),
    };
    profile.label_names_other = any_label(&profile, false);
    profile
}

fn argument_kind(tree: &SourceTree, id: NodeId) -> ArgumentKind {
    match tree.node(id).kind {
        NodeKind::Literal => ArgumentKind::Literal,
        NodeKind::TemplateLiteral => ArgumentKind::Template,
        NodeKind::Identifier => ArgumentKind::Identifier,
        NodeKind::MemberExpression => ArgumentKind::Member,
        NodeKind::CallExpression => ArgumentKind::Call,
        _ => ArgumentKind::Other,
    }
}

/// String or template literal: the form a human-readable label takes.
fn is_text_literal(tree: &SourceTree, id: NodeId) -> bool {
    let node = tree.node(id);
    match node.kind {
        NodeKind::TemplateLiteral => true,
        NodeKind::Literal => matches!(node.data, NodeData::Literal(LiteralKind::String)),
        _ => false,
    }
}

/// Lenient variant: any literal at all (numbers, booleans, ...) counts.
pub fn has_any_literal(profile: &ArgumentProfile) -> bool {
    profile
        .kinds
        .iter()
        .any(|k| matches!(k, ArgumentKind::Literal | ArgumentKind::Template))
}

fn referable_name(tree: &SourceTree, id: NodeId) -> Option<String> {
    let node = tree.node(id);
    match node.kind {
        NodeKind::Identifier => match &node.data {
            NodeData::Name(n) => Some(n.clone()),
            _ => None,
        },
        NodeKind::MemberExpression => {
            if matches!(node.data, NodeData::Member { computed: true }) {
                return None;
            }
            let prop = *node.children.last()?;
            let pnode = tree.node(prop);
            match (&pnode.kind, &pnode.data) {
                (NodeKind::Identifier | NodeKind::PrivateIdentifier, NodeData::Name(n)) => {
                    Some(n.clone())
                }
                _ => None,
            }
        }
        _ => None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("label detection is defined for two-argument calls, got {arg_count}")]
pub struct LabelArityError {
    pub arg_count: usize,
}

/// Whether one of a two-argument call's literals names the other argument,
/// e.g. `console.log('Results: ', results)`. Case-insensitive, symmetric in
/// argument order.
pub fn detect_label(profile: &ArgumentProfile) -> Result<bool, LabelArityError> {
    detect_label_with(profile, false)
}

/// As [`detect_label`], optionally requiring the name to sit on word
/// boundaries within the literal text.
pub fn detect_label_with(
    profile: &ArgumentProfile,
    word_boundary: bool,
) -> Result<bool, LabelArityError> {
    if profile.arg_count != 2 {
        return Err(LabelArityError {
            arg_count: profile.arg_count,
        });
    }
    Ok(any_label(profile, word_boundary))
}

fn any_label(profile: &ArgumentProfile, word_boundary: bool) -> bool {
    (0..profile.arg_count).any(|lit| {
        matches!(
            profile.kinds[lit],
            ArgumentKind::Literal | ArgumentKind::Template
        ) && is_text_kind(profile, lit)
            && (0..profile.arg_count).any(|other| {
                other != lit
                    && !matches!(
                        profile.kinds[other],
                        ArgumentKind::Literal | ArgumentKind::Template
                    )
                    && profile.names[other].as_deref().is_some_and(|name| {
                        contains_name(&profile.rendered[lit], name, word_boundary)
                    })
            })
    })
}

/// Kinds alone cannot tell a string literal from a numeric one; the label
/// side must be textual, which `names` being absent and `rendered` starting
/// with a quote or backtick captures.
fn is_text_kind(profile: &ArgumentProfile, idx: usize) -> bool {
    profile.kinds[idx] == ArgumentKind::Template
        || profile.rendered[idx]
            .chars()
            .next()
            .is_some_and(|c| matches!(c, '"' | '\'' | '`'))
}

fn contains_name(text: &str, name: &str, word_boundary: bool) -> bool {
    if name.is_empty() {
        return false;
    }
    let text = text.to_lowercase();
    let name = name.to_lowercase();
    if !word_boundary {
        return text.contains(&name);
    }
    let is_word = |c: char| c.is_alphanumeric() || c == '_' || c == '$';
    let mut from = 0;
    while let Some(pos) = text[from..].find(&name) {
        let start = from + pos;
        let end = start + name.len();
        let before_ok = text[..start].chars().next_back().is_none_or(|c| !is_word(c));
        let after_ok = text[end..].chars().next().is_none_or(|c| !is_word(c));
        if before_ok && after_ok {
            return true;
        }
        from = start + 1;
    }
    false
}

/// Collapses runs and plain numbers in literal text: a maximal run of one
/// character longer than three becomes the character followed by `R`, and
/// text that is only decimal digits (with at most one dot) becomes `<NUM>`.
pub fn normalize_literal(text: &str) -> String {
    if is_plain_number(text) {
        return "<NUM>".to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let mut run = 1usize;
        while chars.peek() == Some(&c) {
            chars.next();
            run += 1;
        }
        if run > 3 {
            out.push(c);
            out.push('R');
        } else {
            for _ in 0..run {
                out.push(c);
            }
        }
    }
    out
}

fn is_plain_number(text: &str) -> bool {
    let mut digits = 0usize;
    let mut dots = 0usize;
    for c in text.chars() {
        match c {
            '0'..='9' => digits += 1,
            '.' => dots += 1,
            _ => return false,
        }
    }
    digits > 0 && dots <= 1
}

/// Dotted callee names of every call inside the log's arguments, in source
/// order. Callees that are not a plain identifier/member chain contribute no
/// name, but their arguments are still searched.
pub fn embedded_calls(tree: &SourceTree, call: NodeId) -> Vec<String> {
    let mut out = Vec::new();
    for &arg in &tree.node(call).children[1..] {
        for id in std::iter::once(arg).chain(tree.descendants(arg)) {
            if tree.node(id).kind == NodeKind::CallExpression {
                if let Some(name) = tree
                    .node(id)
                    .children
                    .first()
                    .and_then(|&callee| dotted_name(tree, callee))
                {
                    out.push(name);
                }
            }
        }
    }
    out
}

fn dotted_name(tree: &SourceTree, id: NodeId) -> Option<String> {
    let node = tree.node(id);
    match node.kind {
        NodeKind::Identifier | NodeKind::PrivateIdentifier => match &node.data {
            NodeData::Name(n) => Some(n.clone()),
            _ => None,
        },
        NodeKind::ThisExpression => Some("this".to_string()),
        NodeKind::Super => Some("super".to_string()),
        NodeKind::MemberExpression => {
            if matches!(node.data, NodeData::Member { computed: true }) {
                return None;
            }
            let base = dotted_name(tree, *node.children.first()?)?;
            let prop = dotted_name(tree, *node.children.last()?)?;
            Some(format!("{base}.{prop}"))
        }
        _ => None,
    }
}
