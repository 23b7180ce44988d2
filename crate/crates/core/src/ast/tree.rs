//! Arena-backed syntax tree with estree-style node kinds.
//!
//! Nodes are stored in a flat vector in depth-first order: a node always
//! precedes its children, and sibling subtrees appear in source order. Byte
//! spans index directly into the retained source text.

use std::fmt;

/// Index of a node in its [`SourceTree`] arena.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Node vocabulary. `as_str` yields the exact estree type names, which is
/// what record serialization and argument kinds report.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NodeKind {
    Program,
    FunctionDeclaration,
    FunctionExpression,
    ArrowFunctionExpression,
    ClassDeclaration,
    ClassExpression,
    ClassBody,
    MethodDefinition,
    PropertyDefinition,
    StaticBlock,
    BlockStatement,
    ExpressionStatement,
    VariableDeclaration,
    VariableDeclarator,
    ReturnStatement,
    IfStatement,
    ForStatement,
    ForInStatement,
    ForOfStatement,
    WhileStatement,
    DoWhileStatement,
    SwitchStatement,
    SwitchCase,
    BreakStatement,
    ContinueStatement,
    ThrowStatement,
    TryStatement,
    CatchClause,
    LabeledStatement,
    WithStatement,
    DebuggerStatement,
    EmptyStatement,
    ImportDeclaration,
    ImportSpecifier,
    ImportDefaultSpecifier,
    ImportNamespaceSpecifier,
    ExportNamedDeclaration,
    ExportDefaultDeclaration,
    ExportAllDeclaration,
    ExportSpecifier,
    Identifier,
    PrivateIdentifier,
    Literal,
    TemplateLiteral,
    TemplateElement,
    TaggedTemplateExpression,
    ThisExpression,
    Super,
    ArrayExpression,
    ObjectExpression,
    Property,
    SpreadElement,
    UnaryExpression,
    UpdateExpression,
    BinaryExpression,
    LogicalExpression,
    AssignmentExpression,
    ConditionalExpression,
    CallExpression,
    NewExpression,
    SequenceExpression,
    MemberExpression,
    AwaitExpression,
    YieldExpression,
    MetaProperty,
    ArrayPattern,
    ObjectPattern,
    AssignmentPattern,
    RestElement,
    JsxElement,
    JsxFragment,
    JsxExpressionContainer,
    JsxAttribute,
    JsxSpreadAttribute,
    JsxText,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        use NodeKind::*;
        match self {
            Program => "Program",
            FunctionDeclaration => "FunctionDeclaration",
            FunctionExpression => "FunctionExpression",
            ArrowFunctionExpression => "ArrowFunctionExpression",
            ClassDeclaration => "ClassDeclaration",
            ClassExpression => "ClassExpression",
            ClassBody => "ClassBody",
            MethodDefinition => "MethodDefinition",
            PropertyDefinition => "PropertyDefinition",
            StaticBlock => "StaticBlock",
            BlockStatement => "BlockStatement",
            ExpressionStatement => "ExpressionStatement",
            VariableDeclaration => "VariableDeclaration",
            VariableDeclarator => "VariableDeclarator",
            ReturnStatement => "ReturnStatement",
            IfStatement => "IfStatement",
            ForStatement => "ForStatement",
            ForInStatement => "ForInStatement",
            ForOfStatement => "ForOfStatement",
            WhileStatement => "WhileStatement",
            DoWhileStatement => "DoWhileStatement",
            SwitchStatement => "SwitchStatement",
            SwitchCase => "SwitchCase",
            BreakStatement => "BreakStatement",
            ContinueStatement => "ContinueStatement",
            ThrowStatement => "ThrowStatement",
            TryStatement => "TryStatement",
            CatchClause => "CatchClause",
            LabeledStatement => "LabeledStatement",
            WithStatement => "WithStatement",
            DebuggerStatement => "DebuggerStatement",
            EmptyStatement => "EmptyStatement",
            ImportDeclaration => "ImportDeclaration",
            ImportSpecifier => "ImportSpecifier",
            ImportDefaultSpecifier => "ImportDefaultSpecifier",
            ImportNamespaceSpecifier => "ImportNamespaceSpecifier",
            ExportNamedDeclaration => "ExportNamedDeclaration",
            ExportDefaultDeclaration => "ExportDefaultDeclaration",
            ExportAllDeclaration => "ExportAllDeclaration",
            ExportSpecifier => "ExportSpecifier",
            Identifier => "Identifier",
            PrivateIdentifier => "PrivateIdentifier",
            Literal => "Literal",
            TemplateLiteral => "TemplateLiteral",
            TemplateElement => "TemplateElement",
            TaggedTemplateExpression => "TaggedTemplateExpression",
            ThisExpression => "ThisExpression",
            Super => "Super",
            ArrayExpression => "ArrayExpression",
            ObjectExpression => "ObjectExpression",
            Property => "Property",
            SpreadElement => "SpreadElement",
            UnaryExpression => "UnaryExpression",
            UpdateExpression => "UpdateExpression",
            BinaryExpression => "BinaryExpression",
            LogicalExpression => "LogicalExpression",
            AssignmentExpression => "AssignmentExpression",
            ConditionalExpression => "ConditionalExpression",
            CallExpression => "CallExpression",
            NewExpression => "NewExpression",
            SequenceExpression => "SequenceExpression",
            MemberExpression => "MemberExpression",
            AwaitExpression => "AwaitExpression",
            YieldExpression => "YieldExpression",
            MetaProperty => "MetaProperty",
            ArrayPattern => "ArrayPattern",
            ObjectPattern => "ObjectPattern",
            AssignmentPattern => "AssignmentPattern",
            RestElement => "RestElement",
            JsxElement => "JSXElement",
            JsxFragment => "JSXFragment",
            JsxExpressionContainer => "JSXExpressionContainer",
            JsxAttribute => "JSXAttribute",
            JsxSpreadAttribute => "JSXSpreadAttribute",
            JsxText => "JSXText",
        }
    }

    pub fn is_function(self) -> bool {
        matches!(
            self,
            NodeKind::FunctionDeclaration
                | NodeKind::FunctionExpression
                | NodeKind::ArrowFunctionExpression
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LiteralKind {
    String,
    Number,
    Boolean,
    Null,
    Regex,
    BigInt,
}

/// Extra facts a kind alone cannot carry.
#[derive(Clone, PartialEq, Debug, Default)]
pub enum NodeData {
    #[default]
    None,
    /// Identifier / PrivateIdentifier symbol text.
    Name(String),
    Literal(LiteralKind),
    /// MemberExpression access form.
    Member { computed: bool },
    /// Property / PropertyDefinition / MethodDefinition key form.
    Key { computed: bool },
    Function(FunctionInfo),
    Case { is_default: bool },
}

/// Attached to the three function kinds.
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionInfo {
    pub is_async: bool,
    /// The function's own identifier, when declared with one.
    pub name: Option<String>,
    /// Body node: a BlockStatement, or the bare expression of a concise arrow.
    pub body: Option<NodeId>,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Byte offsets into the source, end exclusive.
    pub span: (u32, u32),
    pub data: NodeData,
}

/// Line/column pair: line is 1-based, column is a 0-based byte offset.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourcePosition {
    pub line: u32,
    pub column: u32,
}

pub struct SourceTree {
    source: String,
    nodes: Vec<Node>,
    line_starts: Vec<u32>,
}

impl fmt::Debug for SourceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceTree")
            .field("nodes", &self.nodes.len())
            .field("source_len", &self.source.len())
            .finish()
    }
}

impl SourceTree {
    pub(crate) fn new(source: String, nodes: Vec<Node>) -> SourceTree {
        let mut line_starts = vec![0u32];
        for (i, b) in source.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i as u32 + 1);
            }
        }
        SourceTree {
            source,
            nodes,
            line_starts,
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn source_slice(&self, id: NodeId) -> &str {
        let (lo, hi) = self.nodes[id.index()].span;
        &self.source[lo as usize..hi as usize]
    }

    pub fn position(&self, offset: u32) -> SourcePosition {
        let idx = self.line_starts.partition_point(|&s| s <= offset) - 1;
        SourcePosition {
            line: idx as u32 + 1,
            column: offset - self.line_starts[idx],
        }
    }

    pub fn start_position(&self, id: NodeId) -> SourcePosition {
        self.position(self.nodes[id.index()].span.0)
    }

    pub fn end_position(&self, id: NodeId) -> SourcePosition {
        self.position(self.nodes[id.index()].span.1)
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    /// Walks upward starting at the parent of `id`.
    pub fn ancestors(&self, id: NodeId) -> Ancestors<'_> {
        Ancestors {
            tree: self,
            next: self.nodes[id.index()].parent,
        }
    }

    /// Arena order is depth-first with children in source order, so index
    /// order is a preorder traversal.
    pub fn preorder(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Preorder over the subtree below `id`, excluding `id` itself.
    pub fn descendants(&self, id: NodeId) -> Descendants<'_> {
        let mut stack = self.nodes[id.index()].children.clone();
        stack.reverse();
        Descendants { tree: self, stack }
    }
}

pub struct Ancestors<'t> {
    tree: &'t SourceTree,
    next: Option<NodeId>,
}

impl Iterator for Ancestors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        self.next = self.tree.nodes[id.index()].parent;
        Some(id)
    }
}

pub struct Descendants<'t> {
    tree: &'t SourceTree,
    stack: Vec<NodeId>,
}

impl Iterator for Descendants<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.stack.pop()?;
        let children = &self.tree.nodes[id.index()].children;
        self.stack.extend(children.iter().rev().copied());
        Some(id)
    }
}
