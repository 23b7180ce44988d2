//! Syntax-tree construction and the structural queries used to contextualize
//! extracted log calls: locating `console.log` call sites, classifying the
//! block and function that contain them, inferring names for anonymous
//! functions, and computing cyclomatic complexity.

mod convert;
pub mod record;
pub mod tree;

use std::collections::BTreeSet;

use swc_common::{BytePos, Spanned};
use swc_ecma_ast::EsVersion;
use swc_ecma_parser::{lexer::Lexer, EsSyntax, Parser, StringInput, Syntax, TsSyntax};

pub use tree::{
    FunctionInfo, LiteralKind, Node, NodeData, NodeId, NodeKind, SourcePosition, SourceTree,
};

/// Parse dialect, chosen from the file extension.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SourceSyntax {
    Js { jsx: bool },
    Ts { tsx: bool },
}

impl SourceSyntax {
    pub fn for_path(path: &str) -> SourceSyntax {
        let ext = path
            .rsplit(['/', '\\'])
            .next()
            .and_then(|name| name.rsplit_once('.'))
            .map(|(_, ext)| ext.to_ascii_lowercase());
        match ext.as_deref() {
            Some("ts") => SourceSyntax::Ts { tsx: false },
            Some("tsx") => SourceSyntax::Ts { tsx: true },
            _ => SourceSyntax::Js { jsx: true },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub message: String,
}

/// Parses one source file. Any syntax error, including recoverable ones,
/// rejects the file: a partially parsed tree would silently undercount logs.
pub fn parse_source(source: &str, syntax: SourceSyntax) -> Result<SourceTree, ParseError> {
    let syntax = match syntax {
        SourceSyntax::Js { jsx } => Syntax::Es(EsSyntax {
            jsx,
            ..Default::default()
        }),
        SourceSyntax::Ts { tsx } => Syntax::Typescript(TsSyntax {
            tsx,
            decorators: true,
            ..Default::default()
        }),
    };
    // BytePos 0 is the parser's dummy position; offsets are rebased in the
    // conversion layer.
    let input = StringInput::new(source, BytePos(1), BytePos(source.len() as u32 + 1));
    let lexer = Lexer::new(syntax, EsVersion::latest(), input, None);
    let mut parser = Parser::new_from(lexer);
    let program = parser
        .parse_program()
        .map_err(|e| parse_error(source, &e))?;
    if let Some(e) = parser.take_errors().first() {
        return Err(parse_error(source, e));
    }
    Ok(convert::build_tree(source, &program))
}

fn parse_error(source: &str, e: &swc_ecma_parser::error::Error) -> ParseError {
    let offset = (e.span().lo.0.saturating_sub(1) as usize).min(source.len());
    let line = source[..offset].bytes().filter(|&b| b == b'\n').count() as u32 + 1;
    ParseError {
        line,
        message: e.kind().msg().into_owned(),
    }
}

/// All `console.log` call sites in preorder. Logs nested in another log's
/// arguments are reported separately.
pub fn find_log_calls(tree: &SourceTree) -> Vec<NodeId> {
    find_console_calls(tree, &["log"])
}

/// Call sites of `console.<method>` for any of the given methods. The callee
/// must be a non-computed member access on the bare identifier `console`.
pub fn find_console_calls(tree: &SourceTree, methods: &[&str]) -> Vec<NodeId> {
    tree.preorder()
        .filter(|&id| {
            let node = tree.node(id);
            node.kind == NodeKind::CallExpression
                && node
                    .children
                    .first()
                    .is_some_and(|&callee| is_console_member(tree, callee, methods))
        })
        .collect()
}

fn is_console_member(tree: &SourceTree, id: NodeId, methods: &[&str]) -> bool {
    let node = tree.node(id);
    node.kind == NodeKind::MemberExpression
        && matches!(node.data, NodeData::Member { computed: false })
        && node.children.len() == 2
        && ident_text(tree, node.children[0]) == Some("console")
        && ident_text(tree, node.children[1]).is_some_and(|m| methods.contains(&m))
}

fn ident_text(tree: &SourceTree, id: NodeId) -> Option<&str> {
    let node = tree.node(id);
    match (&node.kind, &node.data) {
        (NodeKind::Identifier, NodeData::Name(n)) => Some(n),
        _ => None,
    }
}

/// Retains calls whose start line is among the deleted lines. Multi-line
/// calls match by start line only.
pub fn match_deleted_logs(
    tree: &SourceTree,
    calls: &[NodeId],
    deleted_lines: &BTreeSet<u32>,
) -> Vec<NodeId> {
    calls
        .iter()
        .copied()
        .filter(|&c| deleted_lines.contains(&tree.start_position(c).line))
        .collect()
}

/// Block categories a log can reside in. Loop statements merge into one
/// bucket; function kinds appear only for root-level placements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BlockKind {
    Program,
    FunctionDeclaration,
    FunctionExpression,
    ArrowFunctionExpression,
    MethodDefinition,
    TryStatement,
    CatchClause,
    IfStatement,
    For,
    WhileStatement,
    DoWhileStatement,
    SwitchCase,
    ClassBody,
}

impl BlockKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockKind::Program => "Program",
            BlockKind::FunctionDeclaration => "FunctionDeclaration",
            BlockKind::FunctionExpression => "FunctionExpression",
            BlockKind::ArrowFunctionExpression => "ArrowFunctionExpression",
            BlockKind::MethodDefinition => "MethodDefinition",
            BlockKind::TryStatement => "TryStatement",
            BlockKind::CatchClause => "CatchClause",
            BlockKind::IfStatement => "IfStatement",
            BlockKind::For => "For",
            BlockKind::WhileStatement => "WhileStatement",
            BlockKind::DoWhileStatement => "DoWhileStatement",
            BlockKind::SwitchCase => "SwitchCase",
            BlockKind::ClassBody => "ClassBody",
        }
    }

    pub const ALL: [BlockKind; 13] = [
        BlockKind::Program,
        BlockKind::FunctionDeclaration,
        BlockKind::FunctionExpression,
        BlockKind::ArrowFunctionExpression,
        BlockKind::MethodDefinition,
        BlockKind::TryStatement,
        BlockKind::CatchClause,
        BlockKind::IfStatement,
        BlockKind::For,
        BlockKind::WhileStatement,
        BlockKind::DoWhileStatement,
        BlockKind::SwitchCase,
        BlockKind::ClassBody,
    ];
}

/// Nearest structural block above `id`. A function kind wins only when the
/// node sits at the root statement level of that function's body; otherwise
/// the walk continues to the surrounding structure.
pub fn enclosing_block(tree: &SourceTree, id: NodeId) -> BlockKind {
    let mut prev = id;
    let mut first_block: Option<NodeId> = None;
    for anc in tree.ancestors(id) {
        let node = tree.node(anc);
        match node.kind {
            NodeKind::BlockStatement => {
                first_block.get_or_insert(anc);
            }
            NodeKind::TryStatement => return BlockKind::TryStatement,
            NodeKind::CatchClause => return BlockKind::CatchClause,
            NodeKind::IfStatement => return BlockKind::IfStatement,
            NodeKind::ForStatement | NodeKind::ForInStatement | NodeKind::ForOfStatement => {
                return BlockKind::For
            }
            NodeKind::WhileStatement => return BlockKind::WhileStatement,
            NodeKind::DoWhileStatement => return BlockKind::DoWhileStatement,
            NodeKind::SwitchCase => return BlockKind::SwitchCase,
            NodeKind::ClassBody => return BlockKind::ClassBody,
            kind if kind.is_function() => {
                if let NodeData::Function(info) = &node.data {
                    // Root level: arrived through the body, with no other
                    // block in between (concise arrow bodies have none).
                    let at_root = info.body == Some(prev)
                        && first_block.map_or(true, |fb| Some(fb) == info.body);
                    if at_root {
                        return match kind {
                            NodeKind::FunctionDeclaration => BlockKind::FunctionDeclaration,
                            NodeKind::ArrowFunctionExpression => {
                                BlockKind::ArrowFunctionExpression
                            }
                            _ if method_wrapper(tree, anc).is_some() => {
                                BlockKind::MethodDefinition
                            }
                            _ => BlockKind::FunctionExpression,
                        };
                    }
                }
            }
            _ => {}
        }
        prev = anc;
    }
    BlockKind::Program
}

/// The four reported function shapes. A FunctionExpression directly under a
/// MethodDefinition is reported as the method.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FunctionType {
    FunctionDeclaration,
    FunctionExpression,
    ArrowFunctionExpression,
    MethodDefinition,
}

impl FunctionType {
    pub fn as_str(self) -> &'static str {
        match self {
            FunctionType::FunctionDeclaration => "FunctionDeclaration",
            FunctionType::FunctionExpression => "FunctionExpression",
            FunctionType::ArrowFunctionExpression => "ArrowFunctionExpression",
            FunctionType::MethodDefinition => "MethodDefinition",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FunctionContext {
    /// The function node itself.
    pub function: NodeId,
    /// MethodDefinition wrapper when there is one, else the function node.
    pub reported: NodeId,
    pub function_type: FunctionType,
    pub name: String,
    pub is_async: bool,
    pub is_callback: bool,
    pub is_anonymous: bool,
    pub callback_callee_name: Option<String>,
    /// 1-based line of the reported node.
    pub line: u32,
}

/// Nearest function-like ancestor, or None for top-level code.
pub fn enclosing_function(tree: &SourceTree, id: NodeId) -> Option<FunctionContext> {
    let f = tree
        .ancestors(id)
        .find(|&a| tree.node(a).kind.is_function())?;
    Some(classify_function(tree, f))
}

/// Full classification of one function node.
///
/// `is_anonymous` reflects only whether the function carries its own
/// identifier; a name recovered by [`name_function`] does not clear it.
pub fn classify_function(tree: &SourceTree, f: NodeId) -> FunctionContext {
    let node = tree.node(f);
    let info = match &node.data {
        NodeData::Function(info) => info,
        _ => panic!("classify_function on non-function node"),
    };
    let method = method_wrapper(tree, f);
    let function_type = match node.kind {
        NodeKind::FunctionDeclaration => FunctionType::FunctionDeclaration,
        NodeKind::ArrowFunctionExpression => FunctionType::ArrowFunctionExpression,
        _ if method.is_some() => FunctionType::MethodDefinition,
        _ => FunctionType::FunctionExpression,
    };
    let reported = method.unwrap_or(f);
    let is_callback = tree.parent(f).is_some_and(|p| {
        tree.node(p).kind == NodeKind::CallExpression && tree.node(p).children.first() != Some(&f)
    });
    let callback_callee_name = if is_callback {
        tree.parent(f).and_then(|call| callee_name(tree, call))
    } else {
        None
    };
    FunctionContext {
        function: f,
        reported,
        function_type,
        name: name_function(tree, f),
        is_async: info.is_async,
        is_callback,
        is_anonymous: info.name.is_none() && method.is_none(),
        callback_callee_name,
        line: tree.start_position(reported).line,
    }
}

/// All function nodes in preorder.
pub fn find_all_functions(tree: &SourceTree) -> Vec<NodeId> {
    tree.preorder()
        .filter(|&id| tree.node(id).kind.is_function())
        .collect()
}

/// MethodDefinition wrapping this function, when it is a method's value.
fn method_wrapper(tree: &SourceTree, f: NodeId) -> Option<NodeId> {
    if tree.node(f).kind != NodeKind::FunctionExpression {
        return None;
    }
    let parent = tree.parent(f)?;
    let pnode = tree.node(parent);
    (pnode.kind == NodeKind::MethodDefinition && pnode.children.last() == Some(&f))
        .then_some(parent)
}

/// Resolves a display name for a function, looking at how it is bound when
/// it has no identifier of its own: variable declarator, receiving call's
/// callee, assignment target, or class member key. Falls back to
/// "(anonymous)".
pub fn name_function(tree: &SourceTree, f: NodeId) -> String {
    resolved_function_name(tree, f).unwrap_or_else(|| "(anonymous)".to_string())
}

fn resolved_function_name(tree: &SourceTree, f: NodeId) -> Option<String> {
    let node = tree.node(f);
    if let NodeData::Function(info) = &node.data {
        if let Some(name) = &info.name {
            return Some(name.clone());
        }
    }
    if let Some(method) = method_wrapper(tree, f) {
        return key_name(tree, method);
    }
    let parent = node.parent?;
    let pnode = tree.node(parent);
    match pnode.kind {
        NodeKind::VariableDeclarator => {
            let binding = *pnode.children.first()?;
            if binding != f && tree.node(binding).kind == NodeKind::Identifier {
                return ident_text(tree, binding).map(str::to_string);
            }
            None
        }
        NodeKind::CallExpression => {
            if pnode.children.first() == Some(&f) {
                return None;
            }
            callee_name(tree, parent)
        }
        NodeKind::AssignmentExpression => {
            if pnode.children.last() != Some(&f) {
                return None;
            }
            // a = b = fn names the outermost target
            let mut top = parent;
            while let Some(gp) = tree.parent(top) {
                let gnode = tree.node(gp);
                if gnode.kind == NodeKind::AssignmentExpression
                    && gnode.children.last() == Some(&top)
                {
                    top = gp;
                } else {
                    break;
                }
            }
            assigned_name(tree, *tree.node(top).children.first()?)
        }
        NodeKind::PropertyDefinition => {
            if pnode.children.last() != Some(&f) {
                return None;
            }
            key_name(tree, parent)
        }
        _ => None,
    }
}

/// Name of the function a call invokes: plain identifier, or the final
/// non-computed property of a member access.
pub fn callee_name(tree: &SourceTree, call: NodeId) -> Option<String> {
    let callee = *tree.node(call).children.first()?;
    let cnode = tree.node(callee);
    match cnode.kind {
        NodeKind::Identifier => ident_text(tree, callee).map(str::to_string),
        NodeKind::MemberExpression => {
            if matches!(cnode.data, NodeData::Member { computed: true }) {
                return None;
            }
            member_prop_name(tree, callee)
        }
        _ => None,
    }
}

fn member_prop_name(tree: &SourceTree, member: NodeId) -> Option<String> {
    let prop = *tree.node(member).children.last()?;
    let pnode = tree.node(prop);
    match (&pnode.kind, &pnode.data) {
        (NodeKind::Identifier | NodeKind::PrivateIdentifier, NodeData::Name(n)) => Some(n.clone()),
        _ => None,
    }
}

fn assigned_name(tree: &SourceTree, target: NodeId) -> Option<String> {
    let node = tree.node(target);
    match node.kind {
        NodeKind::Identifier => ident_text(tree, target).map(str::to_string),
        NodeKind::MemberExpression => {
            if matches!(node.data, NodeData::Member { computed: true }) {
                return None;
            }
            member_prop_name(tree, target)
        }
        _ => None,
    }
}

/// Key name of a Property / PropertyDefinition / MethodDefinition: an
/// identifier, or a string literal stripped of its quotes. Computed keys
/// yield nothing.
fn key_name(tree: &SourceTree, member: NodeId) -> Option<String> {
    let node = tree.node(member);
    if matches!(node.data, NodeData::Key { computed: true }) {
        return None;
    }
    let key = *node.children.first()?;
    let knode = tree.node(key);
    match (&knode.kind, &knode.data) {
        (NodeKind::Identifier | NodeKind::PrivateIdentifier, NodeData::Name(n)) => Some(n.clone()),
        (NodeKind::Literal, NodeData::Literal(LiteralKind::String)) => {
            Some(strip_quotes(tree.source_slice(key)).to_string())
        }
        _ => None,
    }
}

pub(crate) fn strip_quotes(raw: &str) -> &str {
    let mut chars = raw.chars();
    match (chars.next(), chars.next_back()) {
        (Some(open @ ('"' | '\'' | '`')), Some(close)) if open == close && raw.len() >= 2 => {
            chars.as_str()
        }
        _ => raw,
    }
}

/// 1 + the decision points in the function body: if, ternary, loops, catch
/// clauses, non-default switch cases, and (optionally) each short-circuit
/// operator. Nested function bodies contribute nothing.
pub fn cyclomatic_complexity(tree: &SourceTree, f: NodeId, count_logical: bool) -> u32 {
    let body = match &tree.node(f).data {
        NodeData::Function(info) => match info.body {
            Some(body) => body,
            None => return 1,
        },
        _ => panic!("cyclomatic_complexity on non-function node"),
    };
    if tree.node(body).kind.is_function() {
        return 1;
    }
    let mut count = 1u32;
    let mut stack = vec![body];
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        if node.kind.is_function() {
            if let NodeData::Function(info) = &node.data {
                stack.extend(node.children.iter().copied().filter(|&c| Some(c) != info.body));
            }
            continue;
        }
        count += match node.kind {
            NodeKind::IfStatement
            | NodeKind::ConditionalExpression
            | NodeKind::ForStatement
            | NodeKind::ForInStatement
            | NodeKind::ForOfStatement
            | NodeKind::WhileStatement
            | NodeKind::DoWhileStatement
            | NodeKind::CatchClause => 1,
            NodeKind::SwitchCase => match node.data {
                NodeData::Case { is_default } => (!is_default) as u32,
                _ => 0,
            },
            NodeKind::LogicalExpression if count_logical => 1,
            _ => 0,
        };
        stack.extend(node.children.iter().copied());
    }
    count
}
