//! Rooted ordered binary trees: the combinatorial objects being drawn.
//!
//! Child order is significant (left/right slots are the rotation system), and
//! node ids are dense preorder indices so that embedding files can reference
//! nodes stably.

use crate::report::{CheckResult, VerifyReport};

/// Hard cap on generated tree sizes.
pub const NODE_CAP: usize = 1 << 22;

/// Dense node index within a single tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Node labels used by the hardness reduction (and for SVG coloring).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Role {
    #[default]
    Plain,
    /// Node of the top perfect binary tree.
    TopTree,
    /// Vertex of one of a variable's four spine paths; `sub` in 1..=4.
    VarSpine { var: usize, sub: usize, index: usize },
    /// Vertex of the true-literal path of a variable gadget.
    Pt { var: usize, index: usize },
    /// Vertex of the false-literal path of a variable gadget.
    Pf { var: usize, index: usize },
    /// Extra leaf encoding that variable `var` occurs in clause `clause`.
    LiteralLeaf { var: usize, clause: usize },
    /// Vertex of one of the three long blue paths; `sub` in 1..=3.
    BlueSpine { sub: usize, index: usize },
    /// Blue leaf bump for clause `clause`.
    BlueClauseLeaf { clause: usize },
    /// Vertex of the last (short) blue path.
    LastSubtreeSpine { index: usize },
    /// Leaf bump for variable `var` (frame or last-subtree bumps).
    VarBumpLeaf { var: usize },
}

#[derive(Debug, Clone, Default)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub role: Role,
}

/// A rooted tree with ordered (left/right) child slots.
///
/// Immutable after construction; node 0 is always the root and ids follow
/// preorder (root, left subtree, right subtree).
#[derive(Debug, Clone)]
pub struct RootedOrderedTree {
    nodes: Vec<Node>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("node cap exceeded: {requested} nodes (cap {cap})")]
    TooLarge { requested: usize, cap: usize },
}

impl RootedOrderedTree {
    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    pub fn left(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].left
    }

    pub fn right(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].right
    }

    pub fn role(&self, id: NodeId) -> Role {
        self.nodes[id.0].role
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Edges as (parent, child) pairs.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.ids().flat_map(move |id| {
            let n = self.node(id);
            n.left
                .into_iter()
                .chain(n.right)
                .map(move |child| (id, child))
        })
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let n = self.node(id);
        n.left.into_iter().chain(n.right)
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(id) {
            id = p;
            d += 1;
        }
        d
    }

    /// Strict ancestor order: true iff `a` lies on the path from the root to
    /// `b` and `a != b`.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = self.parent(b);
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent(p);
        }
        false
    }

    /// Number of nodes in the subtree rooted at `id` (including `id`).
    pub fn subtree_size(&self, id: NodeId) -> usize {
        let mut count = 0;
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            count += 1;
            stack.extend(self.children(n));
        }
        count
    }

    /// Preorder traversal starting at the root.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root()];
        while let Some(n) = stack.pop() {
            out.push(n);
            // Right first so left pops first.
            if let Some(r) = self.right(n) {
                stack.push(r);
            }
            if let Some(l) = self.left(n) {
                stack.push(l);
            }
        }
        out
    }

    /// Structural and role checks pass/fail as a report.
    ///
    /// Passes iff there is a root, parent links agree with child slots, every
    /// node is reachable exactly once, and no node appears in two child slots.
    pub fn validate_binary(&self) -> VerifyReport {
        let mut report = VerifyReport::new();
        if self.is_empty() {
            report.push(CheckResult::fail("root", "empty tree"));
            return report;
        }
        report.push(CheckResult::pass("root"));

        let mut seen_as_child = vec![false; self.len()];
        let mut consistent = true;
        let mut detail = String::new();
        for id in self.ids() {
            for child in self.children(id) {
                if child.0 >= self.len() {
                    consistent = false;
                    detail = format!("node {id} references out-of-range child {child}");
                    break;
                }
                if seen_as_child[child.0] {
                    consistent = false;
                    detail = format!("node {child} appears as a child twice");
                    break;
                }
                seen_as_child[child.0] = true;
                if self.parent(child) != Some(id) {
                    consistent = false;
                    detail = format!("parent link of {child} disagrees with child slot of {id}");
                    break;
                }
            }
        }
        if consistent && seen_as_child[self.root().0] {
            consistent = false;
            detail = "root has a parent edge".into();
        }
        if consistent {
            // Connectivity: everything except the root must be someone's child.
            for id in self.ids().skip(1) {
                if !seen_as_child[id.0] {
                    consistent = false;
                    detail = format!("node {id} is unreachable");
                    break;
                }
            }
        }
        report.push(if consistent {
            CheckResult::pass("parent_consistency")
        } else {
            CheckResult::fail("parent_consistency", detail)
        });
        report
    }
}

/// Mutable construction helper; `finish` renumbers ids to canonical preorder.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the root node; must be called first.
    pub fn add_root(&mut self, role: Role) -> NodeId {
        assert!(self.nodes.is_empty(), "root already added");
        self.nodes.push(Node {
            role,
            ..Node::default()
        });
        NodeId(0)
    }

    pub fn add_left(&mut self, parent: NodeId, role: Role) -> NodeId {
        assert!(self.nodes[parent.0].left.is_none(), "left slot taken");
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            parent: Some(parent),
            role,
            ..Node::default()
        });
        self.nodes[parent.0].left = Some(id);
        id
    }

    pub fn add_right(&mut self, parent: NodeId, role: Role) -> NodeId {
        assert!(self.nodes[parent.0].right.is_none(), "right slot taken");
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            parent: Some(parent),
            role,
            ..Node::default()
        });
        self.nodes[parent.0].right = Some(id);
        id
    }

    pub fn set_role(&mut self, id: NodeId, role: Role) {
        self.nodes[id.0].role = role;
    }

    /// Renumbers to preorder ids and returns the immutable tree plus the
    /// builder-id -> final-id mapping.
    pub fn finish(self) -> (RootedOrderedTree, Vec<NodeId>) {
        assert!(!self.nodes.is_empty(), "empty tree");
        let mut order = vec![NodeId(usize::MAX); self.nodes.len()];
        let mut next = 0usize;
        let mut stack = vec![NodeId(0)];
        while let Some(id) = stack.pop() {
            order[id.0] = NodeId(next);
            next += 1;
            if let Some(r) = self.nodes[id.0].right {
                stack.push(r);
            }
            if let Some(l) = self.nodes[id.0].left {
                stack.push(l);
            }
        }
        assert_eq!(next, self.nodes.len(), "builder graph is not a tree");
        let mut nodes = vec![Node::default(); self.nodes.len()];
        for (old, node) in self.nodes.iter().enumerate() {
            let new = order[old];
            nodes[new.0] = Node {
                parent: node.parent.map(|p| order[p.0]),
                left: node.left.map(|c| order[c.0]),
                right: node.right.map(|c| order[c.0]),
                role: node.role,
            };
        }
        (RootedOrderedTree { nodes }, order)
    }
}

/// Builds the perfect binary tree `T_k`: all leaves at depth `k`,
/// `2^(k+1) - 1` nodes, preorder ids.
pub fn perfect_binary_tree(k: u32) -> Result<RootedOrderedTree, TreeError> {
    let count = match 1usize.checked_shl(k + 1) {
        Some(c) => c - 1,
        None => usize::MAX,
    };
    if count > NODE_CAP {
        return Err(TreeError::TooLarge {
            requested: count,
            cap: NODE_CAP,
        });
    }
    let mut nodes = vec![Node::default(); count];
    // Preorder: node at `id` with `depth` remaining levels has its left child
    // at id+1 and its right child at id+1+size(left subtree).
    fn fill(nodes: &mut [Node], id: usize, levels: u32) {
        if levels == 0 {
            return;
        }
        let sub = (1usize << levels) - 1;
        let left = id + 1;
        let right = id + 1 + sub;
        nodes[id].left = Some(NodeId(left));
        nodes[id].right = Some(NodeId(right));
        nodes[left].parent = Some(NodeId(id));
        nodes[right].parent = Some(NodeId(id));
        fill(nodes, left, levels - 1);
        fill(nodes, right, levels - 1);
    }
    fill(&mut nodes, 0, k);
    Ok(RootedOrderedTree { nodes })
}

/// Parses the nested-parenthesis tree grammar:
/// `node := "(" id child child ")"`, `child := node | "."`.
///
/// Textual ids are only checked for well-formedness; output ids are always the
/// canonical preorder numbering.
pub fn parse_tree(text: &str) -> Result<RootedOrderedTree, TreeError> {
    let mut p = Parser::new(text);
    let mut builder = TreeBuilder::new();
    p.skip_ws();
    p.parse_node(&mut builder)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("trailing input after tree"));
    }
    let (tree, _) = builder.finish();
    Ok(tree)
}

/// Canonical text form; `parse_tree(serialize_tree(t))` reproduces `t`
/// including child order.
pub fn serialize_tree(t: &RootedOrderedTree) -> String {
    let mut out = String::new();
    fn write_node(t: &RootedOrderedTree, id: NodeId, out: &mut String) {
        out.push('(');
        out.push_str(&id.0.to_string());
        for slot in [t.left(id), t.right(id)] {
            out.push(' ');
            match slot {
                Some(child) => write_node(t, child, out),
                None => out.push('.'),
            }
        }
        out.push(')');
    }
    write_node(t, t.root(), &mut out);
    out
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> TreeError {
        TreeError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), TreeError> {
        match self.peek() {
            Some(got) if got == b => {
                self.bump();
                Ok(())
            }
            Some(got) => Err(self.err(format!(
                "expected '{}', found '{}'",
                b as char, got as char
            ))),
            None => Err(self.err(format!("expected '{}', found end of input", b as char))),
        }
    }

    fn parse_node(&mut self, builder: &mut TreeBuilder) -> Result<NodeId, TreeError> {
        self.expect(b'(')?;
        self.skip_ws();
        if !matches!(self.peek(), Some(b'0'..=b'9')) {
            return Err(self.err("expected node id"));
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        let id = builder.add_root(Role::Plain);
        self.parse_children(builder, id)?;
        Ok(id)
    }

    fn parse_children(&mut self, builder: &mut TreeBuilder, id: NodeId) -> Result<(), TreeError> {
        for slot in 0..2 {
            self.skip_ws();
            match self.peek() {
                Some(b'.') => {
                    self.bump();
                }
                Some(b'(') => {
                    self.expect(b'(')?;
                    self.skip_ws();
                    if !matches!(self.peek(), Some(b'0'..=b'9')) {
                        return Err(self.err("expected node id"));
                    }
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.bump();
                    }
                    let child = if slot == 0 {
                        builder.add_left(id, Role::Plain)
                    } else {
                        builder.add_right(id, Role::Plain)
                    };
                    self.parse_children(builder, child)?;
                }
                Some(b')') => return Err(self.err("node lists fewer than 2 child slots")),
                Some(got) => {
                    return Err(self.err(format!("expected child, found '{}'", got as char)))
                }
                None => return Err(self.err("expected child, found end of input")),
            }
        }
        self.skip_ws();
        match self.peek() {
            Some(b')') => {
                self.bump();
                Ok(())
            }
            Some(b'(' | b'.') => Err(self.err("node lists more than 2 children")),
            Some(got) => Err(self.err(format!("expected ')', found '{}'", got as char))),
            None => Err(self.err("expected ')', found end of input")),
        }
    }
}
