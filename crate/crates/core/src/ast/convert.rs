//! Lowers a parsed swc program into the arena tree.
//!
//! The lowering normalizes toward the estree vocabulary: parenthesized
//! expressions and TypeScript-only wrappers (as/satisfies/non-null/assertions)
//! are transparent, optional chains flatten to plain member/call nodes, and
//! class methods become MethodDefinition wrapping an id-less
//! FunctionExpression. TypeScript-only declarations (interfaces, type aliases,
//! enums, modules) produce no nodes.

use swc_common::{Span, Spanned};
use swc_ecma_ast as sw;

use super::tree::{FunctionInfo, LiteralKind, Node, NodeData, NodeId, NodeKind, SourceTree};

/// Source offsets are parsed with a BytePos base of 1; 0 is the parser's
/// reserved dummy position.
const POS_BASE: u32 = 1;

pub(crate) fn build_tree(source: &str, program: &sw::Program) -> SourceTree {
    let mut b = Builder { nodes: Vec::new() };
    match program {
        sw::Program::Module(m) => {
            let root = b.push(NodeKind::Program, None, m.span);
            for item in &m.body {
                module_item(&mut b, root, item);
            }
        }
        sw::Program::Script(s) => {
            let root = b.push(NodeKind::Program, None, s.span);
            for st in &s.body {
                stmt(&mut b, root, st);
            }
        }
    }
    SourceTree::new(source.to_string(), b.nodes)
}

struct Builder {
    nodes: Vec<Node>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, parent: Option<NodeId>, span: Span) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        if let Some(p) = parent {
            self.nodes[p.index()].children.push(id);
        }
        self.nodes.push(Node {
            kind,
            parent,
            children: Vec::new(),
            span: (
                span.lo.0.saturating_sub(POS_BASE),
                span.hi.0.saturating_sub(POS_BASE),
            ),
            data: NodeData::None,
        });
        id
    }

    fn set_data(&mut self, id: NodeId, data: NodeData) {
        self.nodes[id.index()].data = data;
    }
}

fn module_item(b: &mut Builder, parent: NodeId, item: &sw::ModuleItem) {
    match item {
        sw::ModuleItem::ModuleDecl(d) => module_decl(b, parent, d),
        sw::ModuleItem::Stmt(s) => stmt(b, parent, s),
    }
}

fn module_decl(b: &mut Builder, parent: NodeId, d: &sw::ModuleDecl) {
    match d {
        sw::ModuleDecl::Import(i) => {
            let id = b.push(NodeKind::ImportDeclaration, Some(parent), i.span);
            for s in &i.specifiers {
                match s {
                    sw::ImportSpecifier::Named(n) => {
                        let sid = b.push(NodeKind::ImportSpecifier, Some(id), n.span);
                        if let Some(imported) = &n.imported {
                            module_export_name(b, sid, imported);
                        }
                        ident_node(b, sid, &n.local);
                    }
                    sw::ImportSpecifier::Default(dft) => {
                        let sid = b.push(NodeKind::ImportDefaultSpecifier, Some(id), dft.span);
                        ident_node(b, sid, &dft.local);
                    }
                    sw::ImportSpecifier::Namespace(ns) => {
                        let sid = b.push(NodeKind::ImportNamespaceSpecifier, Some(id), ns.span);
                        ident_node(b, sid, &ns.local);
                    }
                }
            }
            str_literal(b, id, i.src.span);
        }
        sw::ModuleDecl::ExportDecl(e) => {
            let id = b.push(NodeKind::ExportNamedDeclaration, Some(parent), e.span);
            decl(b, id, &e.decl);
        }
        sw::ModuleDecl::ExportNamed(e) => {
            let id = b.push(NodeKind::ExportNamedDeclaration, Some(parent), e.span);
            for s in &e.specifiers {
                match s {
                    sw::ExportSpecifier::Named(n) => {
                        let sid = b.push(NodeKind::ExportSpecifier, Some(id), n.span);
                        module_export_name(b, sid, &n.orig);
                        if let Some(exported) = &n.exported {
                            module_export_name(b, sid, exported);
                        }
                    }
                    sw::ExportSpecifier::Namespace(n) => {
                        let sid = b.push(NodeKind::ExportSpecifier, Some(id), n.span);
                        module_export_name(b, sid, &n.name);
                    }
                    sw::ExportSpecifier::Default(n) => {
                        let sid = b.push(NodeKind::ExportSpecifier, Some(id), n.exported.span);
                        ident_node(b, sid, &n.exported);
                    }
                }
            }
            if let Some(src) = &e.src {
                str_literal(b, id, src.span);
            }
        }
        sw::ModuleDecl::ExportDefaultDecl(e) => {
            let id = b.push(NodeKind::ExportDefaultDeclaration, Some(parent), e.span);
            match &e.decl {
                sw::DefaultDecl::Fn(f) => {
                    fn_node(
                        b,
                        id,
                        NodeKind::FunctionDeclaration,
                        f.ident.as_ref(),
                        &f.function,
                    );
                }
                sw::DefaultDecl::Class(c) => {
                    class_node(b, id, NodeKind::ClassDeclaration, c.ident.as_ref(), &c.class);
                }
                sw::DefaultDecl::TsInterfaceDecl(_) => {}
            }
        }
        sw::ModuleDecl::ExportDefaultExpr(e) => {
            let id = b.push(NodeKind::ExportDefaultDeclaration, Some(parent), e.span);
            expr(b, id, &e.expr);
        }
        sw::ModuleDecl::ExportAll(e) => {
            let id = b.push(NodeKind::ExportAllDeclaration, Some(parent), e.span);
            str_literal(b, id, e.src.span);
        }
        sw::ModuleDecl::TsImportEquals(_)
        | sw::ModuleDecl::TsExportAssignment(_)
        | sw::ModuleDecl::TsNamespaceExport(_) => {}
    }
}

fn module_export_name(b: &mut Builder, parent: NodeId, n: &sw::ModuleExportName) {
    match n {
        sw::ModuleExportName::Ident(i) => {
            ident_node(b, parent, i);
        }
        sw::ModuleExportName::Str(s) => {
            str_literal(b, parent, s.span);
        }
    }
}

fn stmt(b: &mut Builder, parent: NodeId, s: &sw::Stmt) {
    match s {
        sw::Stmt::Block(bs) => {
            block_node(b, parent, bs.span, &bs.stmts);
        }
        sw::Stmt::Empty(e) => {
            b.push(NodeKind::EmptyStatement, Some(parent), e.span);
        }
        sw::Stmt::Debugger(d) => {
            b.push(NodeKind::DebuggerStatement, Some(parent), d.span);
        }
        sw::Stmt::With(w) => {
            let id = b.push(NodeKind::WithStatement, Some(parent), w.span);
            expr(b, id, &w.obj);
            stmt(b, id, &w.body);
        }
        sw::Stmt::Return(r) => {
            let id = b.push(NodeKind::ReturnStatement, Some(parent), r.span);
            if let Some(arg) = &r.arg {
                expr(b, id, arg);
            }
        }
        sw::Stmt::Labeled(l) => {
            let id = b.push(NodeKind::LabeledStatement, Some(parent), l.span);
            ident_node(b, id, &l.label);
            stmt(b, id, &l.body);
        }
        sw::Stmt::Break(br) => {
            let id = b.push(NodeKind::BreakStatement, Some(parent), br.span);
            if let Some(label) = &br.label {
                ident_node(b, id, label);
            }
        }
        sw::Stmt::Continue(c) => {
            let id = b.push(NodeKind::ContinueStatement, Some(parent), c.span);
            if let Some(label) = &c.label {
                ident_node(b, id, label);
            }
        }
        sw::Stmt::If(i) => {
            let id = b.push(NodeKind::IfStatement, Some(parent), i.span);
            expr(b, id, &i.test);
            stmt(b, id, &i.cons);
            if let Some(alt) = &i.alt {
                stmt(b, id, alt);
            }
        }
        sw::Stmt::Switch(s) => {
            let id = b.push(NodeKind::SwitchStatement, Some(parent), s.span);
            expr(b, id, &s.discriminant);
            for case in &s.cases {
                let cid = b.push(NodeKind::SwitchCase, Some(id), case.span);
                b.set_data(
                    cid,
                    NodeData::Case {
                        is_default: case.test.is_none(),
                    },
                );
                if let Some(test) = &case.test {
                    expr(b, cid, test);
                }
                for st in &case.cons {
                    stmt(b, cid, st);
                }
            }
        }
        sw::Stmt::Throw(t) => {
            let id = b.push(NodeKind::ThrowStatement, Some(parent), t.span);
            expr(b, id, &t.arg);
        }
        sw::Stmt::Try(t) => {
            let id = b.push(NodeKind::TryStatement, Some(parent), t.span);
            block_node(b, id, t.block.span, &t.block.stmts);
            if let Some(handler) = &t.handler {
                let hid = b.push(NodeKind::CatchClause, Some(id), handler.span);
                if let Some(param) = &handler.param {
                    pat(b, hid, param);
                }
                block_node(b, hid, handler.body.span, &handler.body.stmts);
            }
            if let Some(fin) = &t.finalizer {
                block_node(b, id, fin.span, &fin.stmts);
            }
        }
        sw::Stmt::While(w) => {
            let id = b.push(NodeKind::WhileStatement, Some(parent), w.span);
            expr(b, id, &w.test);
            stmt(b, id, &w.body);
        }
        sw::Stmt::DoWhile(d) => {
            let id = b.push(NodeKind::DoWhileStatement, Some(parent), d.span);
            stmt(b, id, &d.body);
            expr(b, id, &d.test);
        }
        sw::Stmt::For(f) => {
            let id = b.push(NodeKind::ForStatement, Some(parent), f.span);
            match &f.init {
                Some(sw::VarDeclOrExpr::VarDecl(v)) => var_decl(b, id, v),
                Some(sw::VarDeclOrExpr::Expr(e)) => {
                    expr(b, id, e);
                }
                None => {}
            }
            if let Some(test) = &f.test {
                expr(b, id, test);
            }
            if let Some(update) = &f.update {
                expr(b, id, update);
            }
            stmt(b, id, &f.body);
        }
        sw::Stmt::ForIn(f) => {
            let id = b.push(NodeKind::ForInStatement, Some(parent), f.span);
            for_head(b, id, &f.left);
            expr(b, id, &f.right);
            stmt(b, id, &f.body);
        }
        sw::Stmt::ForOf(f) => {
            let id = b.push(NodeKind::ForOfStatement, Some(parent), f.span);
            for_head(b, id, &f.left);
            expr(b, id, &f.right);
            stmt(b, id, &f.body);
        }
        sw::Stmt::Decl(d) => decl(b, parent, d),
        sw::Stmt::Expr(e) => {
            let id = b.push(NodeKind::ExpressionStatement, Some(parent), e.span);
            expr(b, id, &e.expr);
        }
    }
}

fn decl(b: &mut Builder, parent: NodeId, d: &sw::Decl) {
    match d {
        sw::Decl::Class(c) => {
            class_node(
                b,
                parent,
                NodeKind::ClassDeclaration,
                Some(&c.ident),
                &c.class,
            );
        }
        sw::Decl::Fn(f) => {
            fn_node(
                b,
                parent,
                NodeKind::FunctionDeclaration,
                Some(&f.ident),
                &f.function,
            );
        }
        sw::Decl::Var(v) => var_decl(b, parent, v),
        sw::Decl::Using(u) => {
            let id = b.push(NodeKind::VariableDeclaration, Some(parent), u.span);
            for d in &u.decls {
                declarator(b, id, d);
            }
        }
        sw::Decl::TsInterface(_)
        | sw::Decl::TsTypeAlias(_)
        | sw::Decl::TsEnum(_)
        | sw::Decl::TsModule(_) => {}
    }
}

fn var_decl(b: &mut Builder, parent: NodeId, v: &sw::VarDecl) {
    let id = b.push(NodeKind::VariableDeclaration, Some(parent), v.span);
    for d in &v.decls {
        declarator(b, id, d);
    }
}

fn declarator(b: &mut Builder, parent: NodeId, d: &sw::VarDeclarator) {
    let id = b.push(NodeKind::VariableDeclarator, Some(parent), d.span);
    pat(b, id, &d.name);
    if let Some(init) = &d.init {
        expr(b, id, init);
    }
}

fn for_head(b: &mut Builder, parent: NodeId, h: &sw::ForHead) {
    match h {
        sw::ForHead::VarDecl(v) => var_decl(b, parent, v),
        sw::ForHead::UsingDecl(u) => {
            let id = b.push(NodeKind::VariableDeclaration, Some(parent), u.span);
            for d in &u.decls {
                declarator(b, id, d);
            }
        }
        sw::ForHead::Pat(p) => {
            pat(b, parent, p);
        }
    }
}

fn expr(b: &mut Builder, parent: NodeId, e: &sw::Expr) -> Option<NodeId> {
    match e {
        sw::Expr::This(t) => Some(b.push(NodeKind::ThisExpression, Some(parent), t.span)),
        sw::Expr::Array(a) => {
            let id = b.push(NodeKind::ArrayExpression, Some(parent), a.span);
            for elem in a.elems.iter().flatten() {
                expr_or_spread(b, id, elem);
            }
            Some(id)
        }
        sw::Expr::Object(o) => {
            let id = b.push(NodeKind::ObjectExpression, Some(parent), o.span);
            for p in &o.props {
                match p {
                    sw::PropOrSpread::Spread(s) => {
                        let sid = b.push(NodeKind::SpreadElement, Some(id), s.span());
                        expr(b, sid, &s.expr);
                    }
                    sw::PropOrSpread::Prop(p) => prop(b, id, p),
                }
            }
            Some(id)
        }
        sw::Expr::Fn(f) => Some(fn_node(
            b,
            parent,
            NodeKind::FunctionExpression,
            f.ident.as_ref(),
            &f.function,
        )),
        sw::Expr::Unary(u) => {
            let id = b.push(NodeKind::UnaryExpression, Some(parent), u.span);
            expr(b, id, &u.arg);
            Some(id)
        }
        sw::Expr::Update(u) => {
            let id = b.push(NodeKind::UpdateExpression, Some(parent), u.span);
            expr(b, id, &u.arg);
            Some(id)
        }
        sw::Expr::Bin(x) => {
            // estree separates the short-circuiting operators into their own
            // kind; swc folds them into one binary node.
            let kind = match x.op {
                sw::BinaryOp::LogicalAnd
                | sw::BinaryOp::LogicalOr
                | sw::BinaryOp::NullishCoalescing => NodeKind::LogicalExpression,
                _ => NodeKind::BinaryExpression,
            };
            let id = b.push(kind, Some(parent), x.span);
            expr(b, id, &x.left);
            expr(b, id, &x.right);
            Some(id)
        }
        sw::Expr::Assign(a) => {
            let id = b.push(NodeKind::AssignmentExpression, Some(parent), a.span);
            assign_target(b, id, &a.left);
            expr(b, id, &a.right);
            Some(id)
        }
        sw::Expr::Member(m) => Some(member_node(b, parent, m, m.span)),
        sw::Expr::SuperProp(s) => Some(super_prop_node(b, parent, s)),
        sw::Expr::Cond(c) => {
            let id = b.push(NodeKind::ConditionalExpression, Some(parent), c.span);
            expr(b, id, &c.test);
            expr(b, id, &c.cons);
            expr(b, id, &c.alt);
            Some(id)
        }
        sw::Expr::Call(c) => {
            let id = b.push(NodeKind::CallExpression, Some(parent), c.span);
            match &c.callee {
                sw::Callee::Super(s) => {
                    b.push(NodeKind::Super, Some(id), s.span);
                }
                sw::Callee::Import(i) => {
                    let iid = b.push(NodeKind::Identifier, Some(id), i.span);
                    b.set_data(iid, NodeData::Name("import".to_string()));
                }
                sw::Callee::Expr(e) => {
                    expr(b, id, e);
                }
            }
            for arg in &c.args {
                expr_or_spread(b, id, arg);
            }
            Some(id)
        }
        sw::Expr::New(n) => {
            let id = b.push(NodeKind::NewExpression, Some(parent), n.span);
            expr(b, id, &n.callee);
            if let Some(args) = &n.args {
                for arg in args {
                    expr_or_spread(b, id, arg);
                }
            }
            Some(id)
        }
        sw::Expr::Seq(s) => {
            let id = b.push(NodeKind::SequenceExpression, Some(parent), s.span);
            for e in &s.exprs {
                expr(b, id, e);
            }
            Some(id)
        }
        sw::Expr::Ident(i) => Some(ident_node(b, parent, i)),
        sw::Expr::Lit(l) => lit(b, parent, l),
        sw::Expr::Tpl(t) => Some(tpl_node(b, parent, t)),
        sw::Expr::TaggedTpl(t) => {
            let id = b.push(NodeKind::TaggedTemplateExpression, Some(parent), t.span);
            expr(b, id, &t.tag);
            tpl_node(b, id, &t.tpl);
            Some(id)
        }
        sw::Expr::Arrow(a) => {
            let id = b.push(NodeKind::ArrowFunctionExpression, Some(parent), a.span);
            for p in &a.params {
                pat(b, id, p);
            }
            let body = match &*a.body {
                sw::ArrowFunctionBody::FunctionBody(fb) => {
                    Some(block_node(b, id, fb.span, &fb.stmts))
                }
                sw::ArrowFunctionBody::Expr(e) => expr(b, id, e),
            };
            b.set_data(
                id,
                NodeData::Function(FunctionInfo {
                    is_async: a.is_async,
                    name: None,
                    body,
                }),
            );
            Some(id)
        }
        sw::Expr::Class(c) => Some(class_node(
            b,
            parent,
            NodeKind::ClassExpression,
            c.ident.as_ref(),
            &c.class,
        )),
        sw::Expr::Yield(y) => {
            let id = b.push(NodeKind::YieldExpression, Some(parent), y.span);
            if let Some(arg) = &y.arg {
                expr(b, id, arg);
            }
            Some(id)
        }
        sw::Expr::MetaProp(m) => Some(b.push(NodeKind::MetaProperty, Some(parent), m.span)),
        sw::Expr::Await(a) => {
            let id = b.push(NodeKind::AwaitExpression, Some(parent), a.span);
            expr(b, id, &a.arg);
            Some(id)
        }
        sw::Expr::Paren(p) => expr(b, parent, &p.expr),
        sw::Expr::JSXMember(_) | sw::Expr::JSXNamespacedName(_) | sw::Expr::JSXEmpty(_) => None,
        sw::Expr::JSXElement(e) => Some(jsx_element(b, parent, e)),
        sw::Expr::JSXFragment(f) => Some(jsx_fragment(b, parent, f)),
        sw::Expr::TsTypeAssertion(t) => expr(b, parent, &t.expr),
        sw::Expr::TsConstAssertion(t) => expr(b, parent, &t.expr),
        sw::Expr::TsNonNull(t) => expr(b, parent, &t.expr),
        sw::Expr::TsAs(t) => expr(b, parent, &t.expr),
        sw::Expr::TsInstantiation(t) => expr(b, parent, &t.expr),
        sw::Expr::TsSatisfies(t) => expr(b, parent, &t.expr),
        sw::Expr::PrivateName(p) => Some(private_name_node(b, parent, p)),
        sw::Expr::OptChain(oc) => Some(opt_chain(b, parent, oc)),
        sw::Expr::Invalid(_) => None,
    }
}

fn opt_chain(b: &mut Builder, parent: NodeId, oc: &sw::OptChainExpr) -> NodeId {
    match &*oc.base {
        sw::OptChainBase::Member(m) => member_node(b, parent, m, oc.span),
        sw::OptChainBase::Call(c) => {
            let id = b.push(NodeKind::CallExpression, Some(parent), oc.span);
            expr(b, id, &c.callee);
            for arg in &c.args {
                expr_or_spread(b, id, arg);
            }
            id
        }
    }
}

fn super_prop_node(b: &mut Builder, parent: NodeId, s: &sw::SuperPropExpr) -> NodeId {
    let id = b.push(NodeKind::MemberExpression, Some(parent), s.span);
    b.push(NodeKind::Super, Some(id), s.obj.span);
    let computed = match &s.prop {
        sw::SuperProp::Ident(i) => {
            ident_name_node(b, id, i);
            false
        }
        sw::SuperProp::Computed(c) => {
            expr(b, id, &c.expr);
            true
        }
    };
    b.set_data(id, NodeData::Member { computed });
    id
}

fn member_node(b: &mut Builder, parent: NodeId, m: &sw::MemberExpr, span: Span) -> NodeId {
    let id = b.push(NodeKind::MemberExpression, Some(parent), span);
    expr(b, id, &m.obj);
    let computed = match &m.prop {
        sw::MemberProp::Ident(i) => {
            ident_name_node(b, id, i);
            false
        }
        sw::MemberProp::PrivateName(p) => {
            private_name_node(b, id, p);
            false
        }
        sw::MemberProp::Computed(c) => {
            expr(b, id, &c.expr);
            true
        }
    };
    b.set_data(id, NodeData::Member { computed });
    id
}

fn assign_target(b: &mut Builder, parent: NodeId, t: &sw::AssignTarget) {
    match t {
        sw::AssignTarget::Simple(s) => match s {
            sw::SimpleAssignTarget::Ident(bi) => {
                ident_node(b, parent, &bi.id);
            }
            sw::SimpleAssignTarget::Member(m) => {
                member_node(b, parent, m, m.span);
            }
            sw::SimpleAssignTarget::SuperProp(sp) => {
                super_prop_node(b, parent, sp);
            }
            sw::SimpleAssignTarget::Paren(p) => {
                expr(b, parent, &p.expr);
            }
            sw::SimpleAssignTarget::OptChain(oc) => {
                opt_chain(b, parent, oc);
            }
            sw::SimpleAssignTarget::TsAs(t) => {
                expr(b, parent, &t.expr);
            }
            sw::SimpleAssignTarget::TsSatisfies(t) => {
                expr(b, parent, &t.expr);
            }
            sw::SimpleAssignTarget::TsNonNull(t) => {
                expr(b, parent, &t.expr);
            }
            sw::SimpleAssignTarget::TsTypeAssertion(t) => {
                expr(b, parent, &t.expr);
            }
            sw::SimpleAssignTarget::TsInstantiation(t) => {
                expr(b, parent, &t.expr);
            }
            sw::SimpleAssignTarget::Invalid(_) => {}
        },
        sw::AssignTarget::Pat(p) => match p {
            sw::AssignTargetPat::Array(a) => {
                array_pat(b, parent, a);
            }
            sw::AssignTargetPat::Object(o) => {
                object_pat(b, parent, o);
            }
            sw::AssignTargetPat::Invalid(_) => {}
        },
    }
}

fn pat(b: &mut Builder, parent: NodeId, p: &sw::Pat) -> Option<NodeId> {
    match p {
        sw::Pat::Ident(bi) => Some(ident_node(b, parent, &bi.id)),
        sw::Pat::Array(a) => Some(array_pat(b, parent, a)),
        sw::Pat::Rest(r) => {
            let id = b.push(NodeKind::RestElement, Some(parent), r.span);
            pat(b, id, &r.arg);
            Some(id)
        }
        sw::Pat::Object(o) => Some(object_pat(b, parent, o)),
        sw::Pat::Assign(a) => {
            let id = b.push(NodeKind::AssignmentPattern, Some(parent), a.span);
            pat(b, id, &a.left);
            expr(b, id, &a.right);
            Some(id)
        }
        sw::Pat::Invalid(_) => None,
        sw::Pat::Expr(e) => expr(b, parent, e),
    }
}

fn array_pat(b: &mut Builder, parent: NodeId, a: &sw::ArrayPat) -> NodeId {
    let id = b.push(NodeKind::ArrayPattern, Some(parent), a.span);
    for elem in a.elems.iter().flatten() {
        pat(b, id, elem);
    }
    id
}

fn object_pat(b: &mut Builder, parent: NodeId, o: &sw::ObjectPat) -> NodeId {
    let id = b.push(NodeKind::ObjectPattern, Some(parent), o.span);
    for p in &o.props {
        match p {
            sw::ObjectPatProp::KeyValue(kv) => {
                let pid = b.push(NodeKind::Property, Some(id), kv.span());
                let computed = prop_name(b, pid, &kv.key);
                b.set_data(pid, NodeData::Key { computed });
                pat(b, pid, &kv.value);
            }
            sw::ObjectPatProp::Assign(ap) => {
                let pid = b.push(NodeKind::Property, Some(id), ap.span);
                b.set_data(pid, NodeData::Key { computed: false });
                ident_node(b, pid, &ap.key.id);
                if let Some(value) = &ap.value {
                    expr(b, pid, value);
                }
            }
            sw::ObjectPatProp::Rest(r) => {
                let rid = b.push(NodeKind::RestElement, Some(id), r.span);
                pat(b, rid, &r.arg);
            }
        }
    }
    id
}

fn expr_or_spread(b: &mut Builder, parent: NodeId, a: &sw::ExprOrSpread) {
    match a.spread {
        Some(dots) => {
            let span = Span {
                lo: dots.lo,
                hi: a.expr.span().hi,
            };
            let id = b.push(NodeKind::SpreadElement, Some(parent), span);
            expr(b, id, &a.expr);
        }
        None => {
            expr(b, parent, &a.expr);
        }
    }
}

fn prop(b: &mut Builder, parent: NodeId, p: &sw::Prop) {
    match p {
        sw::Prop::Shorthand(i) => {
            let id = b.push(NodeKind::Property, Some(parent), i.span);
            b.set_data(id, NodeData::Key { computed: false });
            ident_node(b, id, i);
        }
        sw::Prop::KeyValue(kv) => {
            let id = b.push(NodeKind::Property, Some(parent), kv.span());
            let computed = prop_name(b, id, &kv.key);
            b.set_data(id, NodeData::Key { computed });
            expr(b, id, &kv.value);
        }
        sw::Prop::Assign(a) => {
            let id = b.push(NodeKind::Property, Some(parent), a.span);
            b.set_data(id, NodeData::Key { computed: false });
            ident_node(b, id, &a.key);
            expr(b, id, &a.value);
        }
        sw::Prop::Getter(g) => {
            let id = b.push(NodeKind::Property, Some(parent), g.span);
            let computed = prop_name(b, id, &g.key);
            b.set_data(id, NodeData::Key { computed });
            fn_node(b, id, NodeKind::FunctionExpression, None, &g.function);
        }
        sw::Prop::Setter(s) => {
            let id = b.push(NodeKind::Property, Some(parent), s.span);
            let computed = prop_name(b, id, &s.key);
            b.set_data(id, NodeData::Key { computed });
            fn_node(b, id, NodeKind::FunctionExpression, None, &s.function);
        }
        sw::Prop::Method(m) => {
            let id = b.push(NodeKind::Property, Some(parent), m.span());
            let computed = prop_name(b, id, &m.key);
            b.set_data(id, NodeData::Key { computed });
            fn_node(b, id, NodeKind::FunctionExpression, None, &m.function);
        }
    }
}

/// Returns whether the key is computed. Computed keys materialize the inner
/// expression directly, mirroring estree's `key` field.
fn prop_name(b: &mut Builder, parent: NodeId, k: &sw::PropName) -> bool {
    match k {
        sw::PropName::Ident(i) => {
            ident_name_node(b, parent, i);
            false
        }
        sw::PropName::Str(s) => {
            str_literal(b, parent, s.span);
            false
        }
        sw::PropName::Num(n) => {
            let id = b.push(NodeKind::Literal, Some(parent), n.span);
            b.set_data(id, NodeData::Literal(LiteralKind::Number));
            false
        }
        sw::PropName::BigInt(n) => {
            let id = b.push(NodeKind::Literal, Some(parent), n.span);
            b.set_data(id, NodeData::Literal(LiteralKind::BigInt));
            false
        }
        sw::PropName::Computed(c) => {
            expr(b, parent, &c.expr);
            true
        }
    }
}

fn fn_node(
    b: &mut Builder,
    parent: NodeId,
    kind: NodeKind,
    ident: Option<&sw::Ident>,
    f: &sw::Function,
) -> NodeId {
    let id = b.push(kind, Some(parent), f.span);
    let name = ident.map(|i| i.sym.to_string());
    if let Some(i) = ident {
        ident_node(b, id, i);
    }
    for p in &f.params {
        pat(b, id, &p.pat);
    }
    let body = f
        .body
        .as_ref()
        .map(|fb| block_node(b, id, fb.span, &fb.stmts));
    b.set_data(
        id,
        NodeData::Function(FunctionInfo {
            is_async: f.is_async,
            name,
            body,
        }),
    );
    id
}

fn class_node(
    b: &mut Builder,
    parent: NodeId,
    kind: NodeKind,
    ident: Option<&sw::Ident>,
    class: &sw::Class,
) -> NodeId {
    let id = b.push(kind, Some(parent), class.span);
    if let Some(i) = ident {
        ident_node(b, id, i);
    }
    if let Some(sc) = &class.super_class {
        expr(b, id, sc);
    }
    let body = b.push(NodeKind::ClassBody, Some(id), class.span);
    for m in &class.body {
        class_member(b, body, m);
    }
    id
}

fn class_member(b: &mut Builder, parent: NodeId, m: &sw::ClassMember) {
    match m {
        sw::ClassMember::Constructor(c) => {
            let id = b.push(NodeKind::MethodDefinition, Some(parent), c.span);
            let computed = prop_name(b, id, &c.key);
            b.set_data(id, NodeData::Key { computed });
            let fid = b.push(NodeKind::FunctionExpression, Some(id), c.span);
            for p in &c.params {
                match p {
                    sw::ParamOrTsParamProp::Param(p) => {
                        pat(b, fid, &p.pat);
                    }
                    sw::ParamOrTsParamProp::TsParamProp(tp) => match &tp.param {
                        sw::TsParamPropParam::Ident(bi) => {
                            ident_node(b, fid, &bi.id);
                        }
                        sw::TsParamPropParam::Assign(a) => {
                            let aid = b.push(NodeKind::AssignmentPattern, Some(fid), a.span);
                            pat(b, aid, &a.left);
                            expr(b, aid, &a.right);
                        }
                    },
                }
            }
            let body = c
                .body
                .as_ref()
                .map(|fb| block_node(b, fid, fb.span, &fb.stmts));
            b.set_data(
                fid,
                NodeData::Function(FunctionInfo {
                    is_async: false,
                    name: None,
                    body,
                }),
            );
        }
        sw::ClassMember::Method(m) => {
            let id = b.push(NodeKind::MethodDefinition, Some(parent), m.span);
            let computed = prop_name(b, id, &m.key);
            b.set_data(id, NodeData::Key { computed });
            fn_node(b, id, NodeKind::FunctionExpression, None, &m.function);
        }
        sw::ClassMember::PrivateMethod(m) => {
            let id = b.push(NodeKind::MethodDefinition, Some(parent), m.span);
            b.set_data(id, NodeData::Key { computed: false });
            private_name_node(b, id, &m.key);
            fn_node(b, id, NodeKind::FunctionExpression, None, &m.function);
        }
        sw::ClassMember::ClassProp(p) => {
            let id = b.push(NodeKind::PropertyDefinition, Some(parent), p.span);
            let computed = prop_name(b, id, &p.key);
            b.set_data(id, NodeData::Key { computed });
            if let Some(value) = &p.value {
                expr(b, id, value);
            }
        }
        sw::ClassMember::PrivateProp(p) => {
            let id = b.push(NodeKind::PropertyDefinition, Some(parent), p.span);
            b.set_data(id, NodeData::Key { computed: false });
            private_name_node(b, id, &p.key);
            if let Some(value) = &p.value {
                expr(b, id, value);
            }
        }
        sw::ClassMember::StaticBlock(s) => {
            let id = b.push(NodeKind::StaticBlock, Some(parent), s.span);
            for st in &s.body.stmts {
                stmt(b, id, st);
            }
        }
        sw::ClassMember::AutoAccessor(a) => {
            let id = b.push(NodeKind::PropertyDefinition, Some(parent), a.span);
            let computed = match &a.key {
                sw::Key::Private(p) => {
                    private_name_node(b, id, p);
                    false
                }
                sw::Key::Public(k) => prop_name(b, id, k),
            };
            b.set_data(id, NodeData::Key { computed });
            if let Some(value) = &a.value {
                expr(b, id, value);
            }
        }
        sw::ClassMember::TsIndexSignature(_) | sw::ClassMember::Empty(_) => {}
    }
}

fn block_node(b: &mut Builder, parent: NodeId, span: Span, stmts: &[sw::Stmt]) -> NodeId {
    let id = b.push(NodeKind::BlockStatement, Some(parent), span);
    for s in stmts {
        stmt(b, id, s);
    }
    id
}

fn tpl_node(b: &mut Builder, parent: NodeId, t: &sw::Tpl) -> NodeId {
    let id = b.push(NodeKind::TemplateLiteral, Some(parent), t.span);
    for (i, quasi) in t.quasis.iter().enumerate() {
        b.push(NodeKind::TemplateElement, Some(id), quasi.span);
        if let Some(e) = t.exprs.get(i) {
            expr(b, id, e);
        }
    }
    id
}

fn lit(b: &mut Builder, parent: NodeId, l: &sw::Lit) -> Option<NodeId> {
    let (kind, span) = match l {
        sw::Lit::Str(s) => (LiteralKind::String, s.span),
        sw::Lit::Bool(v) => (LiteralKind::Boolean, v.span),
        sw::Lit::Null(n) => (LiteralKind::Null, n.span),
        sw::Lit::Num(n) => (LiteralKind::Number, n.span),
        sw::Lit::BigInt(n) => (LiteralKind::BigInt, n.span),
        sw::Lit::Regex(r) => (LiteralKind::Regex, r.span),
        sw::Lit::JSXText(t) => return Some(b.push(NodeKind::JsxText, Some(parent), t.span)),
    };
    let id = b.push(NodeKind::Literal, Some(parent), span);
    b.set_data(id, NodeData::Literal(kind));
    Some(id)
}

fn str_literal(b: &mut Builder, parent: NodeId, span: Span) -> NodeId {
    let id = b.push(NodeKind::Literal, Some(parent), span);
    b.set_data(id, NodeData::Literal(LiteralKind::String));
    id
}

fn ident_node(b: &mut Builder, parent: NodeId, i: &sw::Ident) -> NodeId {
    let id = b.push(NodeKind::Identifier, Some(parent), i.span);
    b.set_data(id, NodeData::Name(i.sym.to_string()));
    id
}

fn ident_name_node(b: &mut Builder, parent: NodeId, i: &sw::IdentName) -> NodeId {
    let id = b.push(NodeKind::Identifier, Some(parent), i.span);
    b.set_data(id, NodeData::Name(i.sym.to_string()));
    id
}

fn private_name_node(b: &mut Builder, parent: NodeId, p: &sw::PrivateName) -> NodeId {
    let id = b.push(NodeKind::PrivateIdentifier, Some(parent), p.span);
    b.set_data(id, NodeData::Name(p.name.to_string()));
    id
}

fn jsx_element(b: &mut Builder, parent: NodeId, e: &sw::JSXElement) -> NodeId {
    let id = b.push(NodeKind::JsxElement, Some(parent), e.span);
    for attr in &e.opening.attrs {
        match attr {
            sw::JSXAttrOrSpread::JSXAttr(a) => {
                let aid = b.push(NodeKind::JsxAttribute, Some(id), a.span);
                if let Some(value) = &a.value {
                    jsx_attr_value(b, aid, value);
                }
            }
            sw::JSXAttrOrSpread::SpreadElement(s) => {
                let sid = b.push(NodeKind::JsxSpreadAttribute, Some(id), s.span());
                expr(b, sid, &s.expr);
            }
        }
    }
    jsx_children(b, id, &e.children);
    id
}

fn jsx_fragment(b: &mut Builder, parent: NodeId, f: &sw::JSXFragment) -> NodeId {
    let id = b.push(NodeKind::JsxFragment, Some(parent), f.span);
    jsx_children(b, id, &f.children);
    id
}

fn jsx_children(b: &mut Builder, parent: NodeId, children: &[sw::JSXElementChild]) {
    for child in children {
        match child {
            sw::JSXElementChild::JSXText(t) => {
                b.push(NodeKind::JsxText, Some(parent), t.span);
            }
            sw::JSXElementChild::JSXExprContainer(c) => {
                jsx_container(b, parent, c);
            }
            sw::JSXElementChild::JSXSpreadChild(s) => {
                let sid = b.push(NodeKind::SpreadElement, Some(parent), s.span);
                expr(b, sid, &s.expr);
            }
            sw::JSXElementChild::JSXElement(e) => {
                jsx_element(b, parent, e);
            }
            sw::JSXElementChild::JSXFragment(f) => {
                jsx_fragment(b, parent, f);
            }
        }
    }
}

fn jsx_container(b: &mut Builder, parent: NodeId, c: &sw::JSXExprContainer) -> NodeId {
    let id = b.push(NodeKind::JsxExpressionContainer, Some(parent), c.span);
    if let sw::JSXExpr::Expr(e) = &c.expr {
        expr(b, id, e);
    }
    id
}

fn jsx_attr_value(b: &mut Builder, parent: NodeId, v: &sw::JSXAttrValue) {
    match v {
        sw::JSXAttrValue::Str(s) => {
            str_literal(b, parent, s.span);
        }
        sw::JSXAttrValue::JSXExprContainer(c) => {
            jsx_container(b, parent, c);
        }
        sw::JSXAttrValue::JSXElement(e) => {
            jsx_element(b, parent, e);
        }
        sw::JSXAttrValue::JSXFragment(f) => {
            jsx_fragment(b, parent, f);
        }
    }
}
