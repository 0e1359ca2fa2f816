use serde::{Deserialize, Serialize};

use super::{NodeKind, SpqrForest};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDump {
    pub id: usize,
    pub origin: String,
    pub in_tree: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partner: Option<usize>,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: usize,
    pub kind: NodeKind,
    pub tree: usize,
    pub edges: Vec<EdgeDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestDump {
    pub nodes: Vec<NodeDump>,
}

impl SpqrForest {
    pub fn dump(&mut self) -> ForestDump {
        let mut nodes = Vec::new();
        for n in self.live_nodes() {
            let sk = self.skeleton(n);
            let tree = self.tree_of(n);
            let edges = sk
                .edge_ids
                .iter()
                .map(|&e| {
                    let rec = self.edge(e).clone();
                    EdgeDump { id: e, origin: rec.origin.to_string(), in_tree: rec.in_tree, partner: rec.partner, ends: self.ends(e) }
                })
                .collect();
            nodes.push(NodeDump { id: n, kind: sk.kind, tree, edges });
        }
        ForestDump { nodes }
    }
}

pub fn to_json(forest: &mut SpqrForest) -> String {
    serde_json::to_string_pretty(&forest.dump()).expect("dump is serializable")
}

/// Graphviz rendering: one cluster per skeleton, tree edges bold, virtual
/// pairs joined by dashed links.
pub fn to_dot(forest: &mut SpqrForest) -> String {
    let dump = forest.dump();
    let mut out = String::from("graph spqr {\n  compound=true;\n  node [shape=point];\n");
    let mut links = Vec::new();
    for n in &dump.nodes {
        out.push_str(&format!("  subgraph cluster_{} {{\n    label=\"{:?}{}\";\n", n.id, n.kind, n.id));
        let mut verts: Vec<usize> = n.edges.iter().flat_map(|e| e.ends).collect();
        verts.sort_unstable();
        verts.dedup();
        for v in verts {
            out.push_str(&format!("    n{}v{};\n", n.id, v));
        }
        for e in &n.edges {
            let mut attrs = vec![format!("label=\"{}\"", if e.partner.is_some() { format!("v{}", e.id) } else { e.origin.clone() })];
            if e.in_tree {
                attrs.push("style=bold".into());
                attrs.push("color=red".into());
            } else {
                attrs.push("color=blue".into());
            }
            if e.partner.is_some() {
                attrs.push("style=dashed".into());
            }
            out.push_str(&format!("    n{}v{} -- n{}v{} [{}];\n", n.id, e.ends[0], n.id, e.ends[1], attrs.join(", ")));
            if let Some(p) = e.partner {
                if e.id < p {
                    links.push((n.id, e.ends[0], e.id, p));
                }
            }
        }
        out.push_str("  }\n");
    }
    for (nid, v, e, p) in links {
        if let Some(m) = dump.nodes.iter().find(|m| m.edges.iter().any(|x| x.id == p)) {
            let w = m.edges.iter().find(|x| x.id == p).map(|x| x.ends[0]).unwrap_or(0);
            out.push_str(&format!(
                "  n{nid}v{v} -- n{}v{w} [style=dashed, color=gray, ltail=cluster_{nid}, lhead=cluster_{}, label=\"{e}~{p}\"];\n",
                m.id, m.id
            ));
        }
    }
    out.push_str("}\n");
    out
}
