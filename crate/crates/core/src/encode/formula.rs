use std::collections::HashMap;

use super::cardinality::CardinalityEncoding;
use super::ClauseGroup;

/// Handle to a node inside a [`Formula`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef(u32);

impl NodeRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        NodeRef(i as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Const(bool),
    Var(u32),
    Not(NodeRef),
    And(Vec<NodeRef>),
    Or(Vec<NodeRef>),
    Xor(Vec<NodeRef>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    Holds(NodeRef),
    AtMost {
        inputs: Vec<NodeRef>,
        bound: usize,
        encoding: CardinalityEncoding,
    },
}

/// A hash-consed Boolean circuit plus a list of top-level assertions.
///
/// Structurally identical subterms are stored once, so the circuit is a DAG.
/// Constructors fold constants, cancel double negation, and sort the
/// operands of commutative gates. Children always precede their parents.
#[derive(Clone, Debug, Default)]
pub struct Formula {
    gates: Vec<Gate>,
    index: HashMap<Gate, NodeRef>,
    assertions: Vec<(Assertion, ClauseGroup)>,
}

impl Formula {
    pub fn new() -> Self {
        Formula::default()
    }

    fn intern(&mut self, gate: Gate) -> NodeRef {
        if let Some(&r) = self.index.get(&gate) {
            return r;
        }
        let r = NodeRef(self.gates.len() as u32);
        self.gates.push(gate.clone());
        self.index.insert(gate, r);
        r
    }

    pub fn gate(&self, r: NodeRef) -> &Gate {
        &self.gates[r.index()]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn assertions(&self) -> &[(Assertion, ClauseGroup)] {
        &self.assertions
    }

    pub fn max_var(&self) -> u32 {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Var(v) => Some(*v),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn constant(&mut self, value: bool) -> NodeRef {
        self.intern(Gate::Const(value))
    }

    pub fn var(&mut self, v: u32) -> NodeRef {
        assert!(v >= 1, "variable ids start at 1");
        self.intern(Gate::Var(v))
    }

    fn as_const(&self, r: NodeRef) -> Option<bool> {
        match self.gate(r) {
            Gate::Const(b) => Some(*b),
            _ => None,
        }
    }

    pub fn not(&mut self, x: NodeRef) -> NodeRef {
        match *self.gate(x) {
            Gate::Not(inner) => inner,
            Gate::Const(b) => self.constant(!b),
            _ => self.intern(Gate::Not(x)),
        }
    }

    /// Strips one negation, returning the base node and whether it was negated.
    fn split_not(&self, x: NodeRef) -> (NodeRef, bool) {
        match *self.gate(x) {
            Gate::Not(inner) => (inner, true),
            _ => (x, false),
        }
    }

    fn junction(&mut self, children: Vec<NodeRef>, is_and: bool) -> NodeRef {
        // `absorbing` is false for AND, true for OR.
        let absorbing = !is_and;
        let mut kept: Vec<NodeRef> = Vec::with_capacity(children.len());
        for c in children {
            match self.as_const(c) {
                Some(b) if b == absorbing => return self.constant(absorbing),
                Some(_) => {}
                None => kept.push(c),
            }
        }
        kept.sort_unstable();
        kept.dedup();
        for &c in &kept {
            let (base, neg) = self.split_not(c);
            let complement = if neg { base } else { self.not_lookup(base) };
            if kept.binary_search(&complement).is_ok() && complement != c {
                return self.constant(absorbing);
            }
        }
        match kept.len() {
            0 => self.constant(!absorbing),
            1 => kept[0],
            _ if is_and => self.intern(Gate::And(kept)),
            _ => self.intern(Gate::Or(kept)),
        }
    }

    /// The negation of `x` if it already exists, else `x` itself (so that a
    /// complement test never matches).
    fn not_lookup(&self, x: NodeRef) -> NodeRef {
        self.index.get(&Gate::Not(x)).copied().unwrap_or(x)
    }

    pub fn and(&mut self, children: Vec<NodeRef>) -> NodeRef {
        self.junction(children, true)
    }

    pub fn or(&mut self, children: Vec<NodeRef>) -> NodeRef {
        self.junction(children, false)
    }

    pub fn xor(&mut self, children: Vec<NodeRef>) -> NodeRef {
        let mut parity = false;
        let mut kept: Vec<NodeRef> = Vec::with_capacity(children.len());
        for c in children {
            if let Some(b) = self.as_const(c) {
                parity ^= b;
                continue;
            }
            let (base, neg) = self.split_not(c);
            parity ^= neg;
            kept.push(base);
        }
        kept.sort_unstable();
        let mut reduced: Vec<NodeRef> = Vec::with_capacity(kept.len());
        for c in kept {
            if reduced.last() == Some(&c) {
                reduced.pop();
            } else {
                reduced.push(c);
            }
        }
        let node = match reduced.len() {
            0 => return self.constant(parity),
            1 => reduced[0],
            _ => self.intern(Gate::Xor(reduced)),
        };
        if parity {
            self.not(node)
        } else {
            node
        }
    }

    pub fn and2(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        self.and(vec![a, b])
    }

    pub fn or2(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        self.or(vec![a, b])
    }

    pub fn xor2(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        self.xor(vec![a, b])
    }

    pub fn assert_true(&mut self, node: NodeRef, group: ClauseGroup) {
        self.assertions.push((Assertion::Holds(node), group));
    }

    pub fn assert_at_most(
        &mut self,
        inputs: Vec<NodeRef>,
        bound: usize,
        encoding: CardinalityEncoding,
        group: ClauseGroup,
    ) {
        self.assertions.push((
            Assertion::AtMost {
                inputs,
                bound,
                encoding,
            },
            group,
        ));
    }

    /// Values of every node under `assignment`.
    pub fn evaluate_all(&self, assignment: impl Fn(u32) -> bool) -> Vec<bool> {
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                Gate::Const(b) => *b,
                Gate::Var(v) => assignment(*v),
                Gate::Not(c) => !values[c.index()],
                Gate::And(cs) => cs.iter().all(|c| values[c.index()]),
                Gate::Or(cs) => cs.iter().any(|c| values[c.index()]),
                Gate::Xor(cs) => cs.iter().fold(false, |acc, c| acc ^ values[c.index()]),
            };
            values.push(v);
        }
        values
    }

    pub fn evaluate(&self, node: NodeRef, assignment: impl Fn(u32) -> bool) -> bool {
        self.evaluate_all(assignment)[node.index()]
    }

    fn assertion_holds(&self, a: &Assertion, values: &[bool]) -> bool {
        match a {
            Assertion::Holds(n) => values[n.index()],
            Assertion::AtMost { inputs, bound, .. } => {
                inputs.iter().filter(|n| values[n.index()]).count() <= *bound
            }
        }
    }

    /// True iff every assertion holds under `assignment`.
    pub fn satisfied_by(&self, assignment: impl Fn(u32) -> bool) -> bool {
        let values = self.evaluate_all(assignment);
        self.assertions
            .iter()
            .all(|(a, _)| self.assertion_holds(a, &values))
    }

    /// Groups whose assertions fail under `assignment`.
    pub fn violated_groups(&self, assignment: impl Fn(u32) -> bool) -> Vec<ClauseGroup> {
        let values = self.evaluate_all(assignment);
        let mut out: Vec<ClauseGroup> = self
            .assertions
            .iter()
            .filter(|(a, _)| !self.assertion_holds(a, &values))
            .map(|(_, g)| *g)
            .collect();
        out.dedup();
        out
    }
}
