//! Partitioned forest over the features.
//!
//! Each feature has at most one feature parent and a group label. Trees (the
//! connected components of the parent relation) are the unit of group
//! membership. Tree labels are maintained incrementally under re-attachment;
//! [`Graph::validate`] recomputes everything from the parent pointers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Group {
    /// Independent of the class label.
    Noise,
    /// Has the class label as an additional parent.
    Signal,
}

impl Group {
    pub const BOTH: [Group; 2] = [Group::Noise, Group::Signal];

    pub fn flip(self) -> Group {
        match self {
            Group::Noise => Group::Signal,
            Group::Signal => Group::Noise,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_signal(self) -> bool {
        self == Group::Signal
    }
}

impl From<Group> for u8 {
    fn from(g: Group) -> u8 {
        g as u8
    }
}

impl TryFrom<u8> for Group {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, Self::Error> {
        match v {
            0 => Ok(Group::Noise),
            1 => Ok(Group::Signal),
            other => Err(format!("group must be 0 or 1, got {other}")),
        }
    }
}

/// Label of one tree. Labels are recycled once a tree disappears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(pub usize);

/// Parent set of a feature: its feature parent (if any) and whether the
/// class label is a parent (exactly when the feature is in the signal group).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParentSet {
    pub feature_parent: Option<usize>,
    pub includes_class: bool,
}

/// Edge and node counts entering the structure prior.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCounts {
    /// Feature-feature edges in the noise group.
    pub e0: usize,
    /// Feature-feature edges in the signal group.
    pub e1: usize,
    /// Nodes in the signal group.
    pub d1: usize,
}

/// A graph up to the choice of root within each tree: group labels plus the
/// undirected edge set. Graphs in one class have identical scores.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphClass {
    pub groups: Vec<Group>,
    pub edges: Vec<(usize, usize)>,
}

const INACTIVE: usize = usize::MAX;

#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "GraphWire", try_from = "GraphWire")]
pub struct Graph {
    parent: Vec<Option<usize>>,
    group: Vec<Group>,
    children: Vec<Vec<usize>>,
    tree_id: Vec<usize>,
    tree_root: Vec<usize>,
    tree_size: Vec<usize>,
    active: Vec<usize>,
    active_pos: Vec<usize>,
    free: Vec<usize>,
    counts: StructureCounts,
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    groups: Vec<Group>,
    parents: Vec<Option<usize>>,
}

impl From<Graph> for GraphWire {
    fn from(g: Graph) -> Self {
        GraphWire { groups: g.group, parents: g.parent }
    }
}

impl TryFrom<GraphWire> for Graph {
    type Error = Error;

    fn try_from(w: GraphWire) -> Result<Self> {
        Graph::from_parts(w.parents, w.groups)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.group == other.group
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("parent", &self.parent).field("group", &self.group).finish()
    }
}

impl Graph {
    /// Every feature a singleton noise root.
    pub fn empty(d: usize) -> Graph {
        assert!(d >= 1, "graph needs at least one feature");
        Graph {
            parent: vec![None; d],
            group: vec![Group::Noise; d],
            children: vec![Vec::new(); d],
            tree_id: (0..d).collect(),
            tree_root: (0..d).collect(),
            tree_size: vec![1; d],
            active: (0..d).collect(),
            active_pos: (0..d).collect(),
            free: Vec::new(),
            counts: StructureCounts::default(),
        }
    }

    /// Builds a graph from parent pointers and groups, rejecting cycles and
    /// trees with mixed group labels.
    pub fn from_parts(parents: Vec<Option<usize>>, groups: Vec<Group>) -> Result<Graph> {
        let d = parents.len();
        if d == 0 || groups.len() != d {
            return Err(Error::InvalidGraph(format!("{} parents and {} groups", d, groups.len())));
        }
        let mut children = vec![Vec::new(); d];
        for (j, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= d || p == j {
                    return Err(Error::InvalidGraph(format!("node {j} has invalid parent {p}")));
                }
                children[p].push(j);
            }
        }
        let mut g = Graph {
            parent: parents,
            group: groups,
            children,
            tree_id: vec![INACTIVE; d],
            tree_root: vec![INACTIVE; d],
            tree_size: vec![0; d],
            active: Vec::new(),
            active_pos: vec![INACTIVE; d],
            free: Vec::new(),
            counts: StructureCounts::default(),
        };
        let mut next = 0;
        for r in 0..d {
            if g.parent[r].is_some() {
                continue;
            }
            let label = next;
            next += 1;
            let members = g.descendants(r);
            for &m in &members {
                if g.group[m] != g.group[r] {
                    return Err(Error::InvalidGraph(format!("tree rooted at {r} mixes groups (node {m})")));
                }
                g.tree_id[m] = label;
            }
            g.tree_root[label] = r;
            g.tree_size[label] = members.len();
            g.active_pos[label] = g.active.len();
            g.active.push(label);
        }
        if let Some(j) = g.tree_id.iter().position(|&t| t == INACTIVE) {
            return Err(Error::InvalidGraph(format!("node {j} lies on a cycle")));
        }
        g.free = (next..d).rev().collect();
        g.counts = g.recount();
        Ok(g)
    }

    pub fn d(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, j: usize) -> Option<usize> {
        self.parent[j]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn group(&self, j: usize) -> Group {
        self.group[j]
    }

    pub fn groups(&self) -> &[Group] {
        &self.group
    }

    pub fn children(&self, j: usize) -> &[usize] {
        &self.children[j]
    }

    pub fn parent_set(&self, j: usize) -> ParentSet {
        ParentSet { feature_parent: self.parent[j], includes_class: self.group[j].is_signal() }
    }

    pub fn tree_of(&self, j: usize) -> TreeId {
        TreeId(self.tree_id[j])
    }

    pub fn num_trees(&self) -> usize {
        self.active.len()
    }

    /// The `i`-th live tree in internal order, `i < num_trees()`.
    pub fn tree_at(&self, i: usize) -> TreeId {
        TreeId(self.active[i])
    }

    pub fn trees(&self) -> impl Iterator<Item = TreeId> + '_ {
        self.active.iter().map(|&t| TreeId(t))
    }

    pub fn tree_root(&self, t: TreeId) -> usize {
        assert!(self.is_live(t), "tree {t:?} does not exist");
        self.tree_root[t.0]
    }

    pub fn tree_size(&self, t: TreeId) -> usize {
        assert!(self.is_live(t), "tree {t:?} does not exist");
        self.tree_size[t.0]
    }

    pub fn tree_group(&self, t: TreeId) -> Group {
        self.group[self.tree_root(t)]
    }

    pub fn tree_members(&self, t: TreeId) -> Vec<usize> {
        self.descendants(self.tree_root(t))
    }

    fn is_live(&self, t: TreeId) -> bool {
        t.0 < self.active_pos.len() && self.active_pos[t.0] != INACTIVE
    }

    /// Nodes of the subtree rooted at `j`, `j` first (pre-order).
    pub fn descendants(&self, j: usize) -> Vec<usize> {
        let mut out = vec![j];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }

    pub fn is_descendant(&self, node: usize, of: usize) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == of {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// Maintained edge/node counts.
    pub fn structure_counts(&self) -> StructureCounts {
        self.counts
    }

    fn recount(&self) -> StructureCounts {
        let mut c = StructureCounts::default();
        for j in 0..self.d() {
            let signal = self.group[j].is_signal();
            if signal {
                c.d1 += 1;
            }
            if self.parent[j].is_some() {
                if signal {
                    c.e1 += 1;
                } else {
                    c.e0 += 1;
                }
            }
        }
        c
    }

    /// Undirected edges as `(low, high)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> =
            self.parent.iter().enumerate().filter_map(|(j, p)| p.map(|p| (j.min(p), j.max(p)))).collect();
        e.sort_unstable();
        e
    }

    pub fn class_key(&self) -> GraphClass {
        GraphClass { groups: self.group.clone(), edges: self.edges() }
    }

    fn alloc_tree(&mut self) -> usize {
        let t = self.free.pop().expect("a free tree label exists whenever a tree splits");
        self.active_pos[t] = self.active.len();
        self.active.push(t);
        t
    }

    fn release_tree(&mut self, t: usize) {
        let pos = self.active_pos[t];
        self.active.swap_remove(pos);
        if let Some(&moved) = self.active.get(pos) {
            self.active_pos[moved] = pos;
        }
        self.active_pos[t] = INACTIVE;
        self.tree_size[t] = 0;
        self.free.push(t);
    }

    fn add_edge_count(&mut self, g: Group, delta: isize) {
        let slot = match g {
            Group::Noise => &mut self.counts.e0,
            Group::Signal => &mut self.counts.e1,
        };
        *slot = slot.checked_add_signed(delta).expect("edge count stays non-negative");
    }

    /// Detaches the subtree rooted at `j` and hangs it under `new_parent`, or
    /// makes `j` a root when `new_parent` is `None`. The subtree takes the
    /// group of its new parent, or `target_group` when it becomes a root.
    pub fn reattach_subtree(&mut self, j: usize, new_parent: Option<usize>, target_group: Group) -> Result<()> {
        if let Some(p) = new_parent {
            if p >= self.d() {
                return Err(Error::InvalidGraph(format!("parent {p} out of range")));
            }
            if self.is_descendant(p, j) {
                return Err(Error::Cycle { node: j, parent: p });
            }
        }
        let old_parent = self.parent[j];
        let old_group = self.group[j];
        let new_group = new_parent.map_or(target_group, |p| self.group[p]);
        if old_parent == new_parent && old_group == new_group {
            return Ok(());
        }
        let subtree = self.descendants(j);
        let m = subtree.len();

        // structure counts
        if old_parent.is_some() {
            self.add_edge_count(old_group, -1);
        }
        self.add_edge_count(old_group, -(m as isize - 1));
        self.add_edge_count(new_group, m as isize - 1);
        if new_parent.is_some() {
            self.add_edge_count(new_group, 1);
        }
        if old_group.is_signal() {
            self.counts.d1 -= m;
        }
        if new_group.is_signal() {
            self.counts.d1 += m;
        }

        // pointers
        if let Some(p0) = old_parent {
            let siblings = &mut self.children[p0];
            let pos = siblings.iter().position(|&c| c == j).expect("child listed under parent");
            siblings.swap_remove(pos);
        }
        if let Some(p) = new_parent {
            self.children[p].push(j);
        }
        self.parent[j] = new_parent;

        // tree labels
        let old_tree = self.tree_id[j];
        let new_tree = match (old_parent, new_parent) {
            (None, None) => old_tree,
            (None, Some(p)) => {
                let t = self.tree_id[p];
                self.release_tree(old_tree);
                t
            }
            (Some(_), None) => {
                self.tree_size[old_tree] -= m;
                let t = self.alloc_tree();
                self.tree_root[t] = j;
                t
            }
            (Some(_), Some(p)) => {
                let t = self.tree_id[p];
                if t != old_tree {
                    self.tree_size[old_tree] -= m;
                }
                t
            }
        };
        if new_tree != old_tree {
            if self.tree_size[new_tree] == 0 || new_parent.is_none() {
                self.tree_size[new_tree] = m;
            } else {
                self.tree_size[new_tree] += m;
            }
        }
        for &s in &subtree {
            self.tree_id[s] = new_tree;
            self.group[s] = new_group;
        }
        Ok(())
    }

    /// Flips the group of every node in tree `t`.
    pub fn switch_tree_group(&mut self, t: TreeId) {
        let members = self.tree_members(t);
        let from = self.group[members[0]];
        let to = from.flip();
        let m = members.len();
        self.add_edge_count(from, -(m as isize - 1));
        self.add_edge_count(to, m as isize - 1);
        if to.is_signal() {
            self.counts.d1 += m;
        } else {
            self.counts.d1 -= m;
        }
        for s in members {
            self.group[s] = to;
        }
    }

    /// Re-roots the tree containing `new_root` at `new_root` by reversing the
    /// parent pointers on the path to the old root. Returns the nodes whose
    /// parent changed.
    pub fn pivot_tree(&mut self, new_root: usize) -> Vec<usize> {
        let mut path = vec![new_root];
        while let Some(p) = self.parent[*path.last().unwrap()] {
            path.push(p);
        }
        if path.len() == 1 {
            return Vec::new();
        }
        for w in path.windows(2) {
            let (child, par) = (w[0], w[1]);
            let siblings = &mut self.children[par];
            let pos = siblings.iter().position(|&c| c == child).expect("child listed under parent");
            siblings.swap_remove(pos);
            self.children[child].push(par);
            self.parent[par] = Some(child);
        }
        self.parent[new_root] = None;
        let t = self.tree_id[new_root];
        self.tree_root[t] = new_root;
        path
    }

    /// Full consistency check against a from-scratch recomputation.
    pub fn validate(&self) -> Result<()> {
        let d = self.d();
        let bad = |m: String| Err(Error::InvalidGraph(m));
        for j in 0..d {
            if let Some(p) = self.parent[j] {
                if p >= d || p == j {
                    return bad(format!("node {j} has invalid parent {p}"));
                }
                if self.children[p].iter().filter(|&&c| c == j).count() != 1 {
                    return bad(format!("node {j} missing from children of {p}"));
                }
            }
            for &c in &self.children[j] {
                if self.parent[c] != Some(j) {
                    return bad(format!("stale child {c} under {j}"));
                }
            }
        }
        let mut root_of = vec![INACTIVE; d];
        for (j, root) in root_of.iter_mut().enumerate() {
            let mut cur = j;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                cur = p;
                steps += 1;
                if steps > d {
                    return bad(format!("cycle through node {j}"));
                }
            }
            *root = cur;
        }
        let mut label_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for (j, &r) in root_of.iter().enumerate() {
            if self.group[j] != self.group[r] {
                return bad(format!("node {j} and its root {r} differ in group"));
            }
            let label = self.tree_id[j];
            match label_of_root.insert(r, label) {
                Some(prev) if prev != label => return bad(format!("tree of {r} has two labels")),
                _ => {}
            }
            *sizes.entry(label).or_default() += 1;
        }
        if sizes.len() != label_of_root.len() {
            return bad("two trees share a label".into());
        }
        if sizes.len() != self.active.len() {
            return bad(format!("{} live labels for {} trees", self.active.len(), sizes.len()));
        }
        for (&r, &label) in &label_of_root {
            if self.active_pos[label] == INACTIVE || self.active[self.active_pos[label]] != label {
                return bad(format!("label {label} is not live"));
            }
            if self.tree_root[label] != r {
                return bad(format!("label {label} records root {} not {r}", self.tree_root[label]));
            }
            if self.tree_size[label] != sizes[&label] {
                return bad(format!("label {label} records size {}", self.tree_size[label]));
            }
        }
        if self.recount() != self.counts {
            return bad(format!("counts {:?} != {:?}", self.counts, self.recount()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Group::{Noise, Signal};

    /// Chain 0 -> 1 -> 2 (parent of 1 is 0, of 2 is 1), all noise.
    fn chain3() -> Graph {
        Graph::from_parts(vec![None, Some(0), Some(1)], vec![Noise; 3]).unwrap()
    }

    #[test]
    fn empty_graph() {
        let g = Graph::empty(3);
        assert_eq!(g.parents(), &[None, None, None]);
        assert_eq!(g.groups(), &[Noise; 3]);
        assert_eq!(g.num_trees(), 3);
        assert_eq!(g.structure_counts(), StructureCounts::default());
        g.validate().unwrap();
        assert_eq!(Graph::empty(1).num_trees(), 1);
    }

    #[test]
    fn parent_sets_by_type() {
        let g = Graph::from_parts(
            vec![None, None, None, None, None, Some(4), None],
            vec![Noise, Noise, Signal, Noise, Signal, Signal, Noise],
        )
        .unwrap();
        assert_eq!(g.parent_set(5), ParentSet { feature_parent: Some(4), includes_class: true });
        assert_eq!(g.parent_set(0), ParentSet { feature_parent: None, includes_class: false });
        assert_eq!(g.parent_set(2), ParentSet { feature_parent: None, includes_class: true });
    }

    #[test]
    fn descendants_of_chain() {
        let g = chain3();
        let mut d = g.descendants(1);
        d.sort_unstable();
        assert_eq!(d, vec![1, 2]);
        assert_eq!(g.descendants(2), vec![2]);
        assert_eq!(g.descendants(0).len(), 3);
    }

    #[test]
    fn leaf_joins_group_of_new_parent() {
        let mut g = Graph::from_parts(vec![None, Some(0), None], vec![Noise, Noise, Signal]).unwrap();
        g.reattach_subtree(1, Some(2), Noise).unwrap();
        assert_eq!(g.group(1), Signal);
        assert_eq!(g.structure_counts(), StructureCounts { e0: 0, e1: 1, d1: 2 });
        g.validate().unwrap();
    }

    #[test]
    fn reattach_to_same_parent_is_identity() {
        let mut g = chain3();
        let before = g.clone();
        g.reattach_subtree(2, Some(1), Signal).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn detach_splits_tree() {
        let mut g = chain3();
        g.reattach_subtree(1, None, Noise).unwrap();
        assert_eq!(g.parent(1), None);
        assert_eq!(g.num_trees(), 2);
        assert_eq!(g.tree_of(1), g.tree_of(2));
        assert_ne!(g.tree_of(0), g.tree_of(1));
        g.validate().unwrap();
    }

    #[test]
    fn cycle_is_rejected() {
        let mut g = chain3();
        assert!(matches!(g.reattach_subtree(0, Some(2), Noise), Err(Error::Cycle { .. })));
        assert!(matches!(g.reattach_subtree(1, Some(1), Noise), Err(Error::Cycle { .. })));
        g.validate().unwrap();
    }

    #[test]
    fn switch_is_an_involution() {
        let mut g = chain3();
        let t = g.tree_of(0);
        g.switch_tree_group(t);
        assert_eq!(g.groups(), &[Signal; 3]);
        assert_eq!(g.structure_counts(), StructureCounts { e0: 0, e1: 2, d1: 3 });
        g.switch_tree_group(t);
        assert_eq!(g, chain3());
        g.validate().unwrap();
    }

    #[test]
    fn pivot_reverses_path() {
        let mut g = chain3();
        assert!(g.pivot_tree(0).is_empty());
        let changed = g.pivot_tree(2);
        assert_eq!(changed, vec![2, 1, 0]);
        assert_eq!(g.parents(), &[Some(1), Some(2), None]);
        assert_eq!(g.edges(), chain3().edges());
        assert_eq!(g.tree_root(g.tree_of(0)), 2);
        g.validate().unwrap();
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        assert!(Graph::from_parts(vec![Some(1), Some(0)], vec![Noise; 2]).is_err());
        assert!(Graph::from_parts(vec![None, Some(0)], vec![Noise, Signal]).is_err());
        assert!(Graph::from_parts(vec![Some(0)], vec![Noise]).is_err());
        assert!(Graph::from_parts(vec![None, Some(5)], vec![Noise; 2]).is_err());
    }

    #[test]
    fn json_shape() {
        let g = Graph::from_parts(vec![None, Some(0)], vec![Signal, Signal]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"groups":[1,1],"parents":[null,0]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"groups":[0,2],"parents":[null,null]}"#).is_err());
    }
}
