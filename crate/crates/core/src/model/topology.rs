//! Network graphs: symmetric directed links with per-link capacities.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rng::{stream_rng, Stream};

pub type NodeId = usize;
pub type LinkId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub from: NodeId,
    pub to: NodeId,
    /// Objects per second.
    pub capacity: f64,
}

/// Directed graph whose link set is closed under reversal.
#[derive(Clone, Debug)]
pub struct NetworkModel {
    names: Vec<String>,
    links: Vec<Link>,
    outgoing: Vec<Vec<LinkId>>,
    incoming: Vec<Vec<LinkId>>,
    index: HashMap<(NodeId, NodeId), LinkId>,
}

impl NetworkModel {
    /// Builds a network from undirected edges; each edge yields both directed links.
    pub fn from_edges(names: Vec<String>, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let mut links = Vec::with_capacity(edges.len() * 2);
        for &(a, b, capacity) in edges {
            links.push(Link { from: a, to: b, capacity });
            links.push(Link { from: b, to: a, capacity });
        }
        Self::from_links(names, links)
    }

    /// Builds a network from directed links, validating symmetry, capacities and self-links.
    pub fn from_links(names: Vec<String>, links: Vec<Link>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        let mut index = HashMap::with_capacity(links.len());
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (id, link) in links.iter().enumerate() {
            if link.from >= n || link.to >= n {
                return Err(Error::Topology(format!(
                    "link ({}, {}) references a node outside 0..{n}",
                    link.from, link.to
                )));
            }
            if link.from == link.to {
                return Err(Error::Topology(format!("self-link at node {}", link.from)));
            }
            if !(link.capacity.is_finite() && link.capacity > 0.0) {
                return Err(Error::Topology(format!(
                    "link ({}, {}) has non-positive capacity {}",
                    link.from, link.to, link.capacity
                )));
            }
            if index.insert((link.from, link.to), id).is_some() {
                return Err(Error::Topology(format!(
                    "duplicate link ({}, {})",
                    link.from, link.to
                )));
            }
            outgoing[link.from].push(id);
            incoming[link.to].push(id);
        }
        for link in &links {
            if !index.contains_key(&(link.to, link.from)) {
                return Err(Error::Topology(format!(
                    "link ({}, {}) has no reverse link",
                    link.from, link.to
                )));
            }
        }
        for list in outgoing.iter_mut() {
            list.sort_by_key(|&l| links[l].to);
        }
        for list in incoming.iter_mut() {
            list.sort_by_key(|&l| links[l].from);
        }
        Ok(Self {
            names,
            links,
            outgoing,
            incoming,
            index,
        })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn link_id(&self, from: NodeId, to: NodeId) -> Option<LinkId> {
        self.index.get(&(from, to)).copied()
    }

    pub fn capacity(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.link_id(from, to).map(|id| self.links[id].capacity)
    }

    /// Link ids leaving `node`, ordered by receiver id.
    pub fn outgoing(&self, node: NodeId) -> &[LinkId] {
        &self.outgoing[node]
    }

    /// Link ids entering `node`, ordered by sender id.
    pub fn incoming(&self, node: NodeId) -> &[LinkId] {
        &self.incoming[node]
    }

    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.outgoing[node].iter().map(move |&l| self.links[l].to)
    }

    /// The reverse link of `id`; always exists by construction.
    pub fn reverse(&self, id: LinkId) -> LinkId {
        let l = &self.links[id];
        self.index[&(l.to, l.from)]
    }

    /// 11-node Abilene backbone, 14 bidirectional edges.
    pub fn abilene(capacity: f64) -> Self {
        const NAMES: [&str; 11] = [
            "Seattle",
            "Sunnyvale",
            "LosAngeles",
            "Denver",
            "KansasCity",
            "Houston",
            "Chicago",
            "Indianapolis",
            "Atlanta",
            "Washington",
            "NewYork",
        ];
        const EDGES: [(usize, usize); 14] = [
            (0, 1),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 5),
            (3, 4),
            (4, 5),
            (4, 7),
            (5, 8),
            (6, 7),
            (6, 10),
            (7, 8),
            (8, 9),
            (9, 10),
        ];
        let edges: Vec<_> = EDGES.iter().map(|&(a, b)| (a, b, capacity)).collect();
        Self::from_edges(NAMES.iter().map(|s| s.to_string()).collect(), &edges)
            .expect("builtin abilene topology is valid")
    }

    /// Two-dimensional `rows x cols` grid; node id is `r * cols + c`.
    pub fn grid(rows: usize, cols: usize, capacity: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyNetwork);
        }
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let id = r * cols + c;
                if c + 1 < cols {
                    edges.push((id, id + 1, capacity));
                }
                if r + 1 < rows {
                    edges.push((id, id + cols, capacity));
                }
            }
        }
        let names = (0..rows * cols)
            .map(|i| format!("g{}_{}", i / cols, i % cols))
            .collect();
        Self::from_edges(names, &edges)
    }

    /// Connected `degree`-regular graph sampled with the pairing model.
    ///
    /// Samples with self-loops, multi-edges or more than one component are rejected
    /// and redrawn from the same seeded stream.
    pub fn random_regular(nodes: usize, degree: usize, seed: u64, capacity: f64) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::EmptyNetwork);
        }
        if degree >= nodes || (nodes * degree) % 2 != 0 || degree == 0 {
            return Err(Error::Topology(format!(
                "no simple {degree}-regular graph on {nodes} nodes"
            )));
        }
        let mut rng = stream_rng(seed, Stream::Topology);
        let mut points: Vec<NodeId> = (0..nodes)
            .flat_map(|n| std::iter::repeat_n(n, degree))
            .collect();
        for _ in 0..100_000 {
            points.shuffle(&mut rng);
            let mut seen = BTreeSet::new();
            let ok = points.chunks(2).all(|pair| {
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                a != b && seen.insert((a, b))
            });
            if !ok {
                continue;
            }
            let edges: Vec<_> = seen.into_iter().map(|(a, b)| (a, b, capacity)).collect();
            let names = (0..nodes).map(|i| format!("r{i}")).collect();
            let model = Self::from_edges(names, &edges)?;
            if model.is_connected() {
                return Ok(model);
            }
        }
        Err(Error::Topology(
            "pairing model failed to produce a simple connected graph".into(),
        ))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(n) = stack.pop() {
            for b in self.neighbors(n) {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Parses the TOML topology format. Edges without a capacity use `default_capacity`.
    pub fn from_toml_str(text: &str, default_capacity: f64) -> Result<Self> {
        let file: TopologyFile = toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from("<topology>"),
            message: e.to_string(),
        })?;
        file.into_model(default_capacity)
    }

    pub fn load(path: &Path, default_capacity: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, default_capacity).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Serializes to the TOML topology format (one entry per undirected edge).
    pub fn to_toml_string(&self) -> String {
        let edges = self
            .links
            .iter()
            .filter(|l| l.from < l.to)
            .map(|l| EdgeEntry {
                a: self.names[l.from].clone(),
                b: self.names[l.to].clone(),
                capacity: Some(l.capacity),
            })
            .collect();
        let file = TopologyFile {
            nodes: self.names.clone(),
            edges,
        };
        toml::to_string(&file).expect("topology serializes")
    }
}

/// On-disk topology: node names and undirected edges.
///
/// ```toml
/// nodes = ["a", "b", "c"]
///
/// [[edges]]
/// a = "a"
/// b = "b"
/// capacity = 10.0
/// ```
#[derive(Debug, Serialize, Deserialize)]
pub struct TopologyFile {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<f64>,
}

impl TopologyFile {
    pub fn into_model(self, default_capacity: f64) -> Result<NetworkModel> {
        let lookup: HashMap<&str, NodeId> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if lookup.len() != self.nodes.len() {
            return Err(Error::Topology("duplicate node names".into()));
        }
        let resolve = |name: &str| {
            lookup
                .get(name)
                .copied()
                .ok_or_else(|| Error::Topology(format!("edge references unknown node `{name}`")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push((
                resolve(&e.a)?,
                resolve(&e.b)?,
                e.capacity.unwrap_or(default_capacity),
            ));
        }
        NetworkModel::from_edges(self.nodes, &edges)
    }
}

/// Named topology selector used by scenario configs: `abilene`, `grid[:RxC]`,
/// `regular[:N]`, or a path to a topology file.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TopologySpec {
    Abilene,
    Grid { rows: usize, cols: usize },
    Regular { nodes: usize, degree: usize, seed: u64 },
    File(PathBuf),
}

impl TopologySpec {
    pub const DEFAULT_REGULAR_NODES: usize = 20;
    pub const REGULAR_GRAPH_SEED: u64 = 3;

    /// The topologies that need no external file.
    pub fn builtins() -> Vec<TopologySpec> {
        vec![
            TopologySpec::Abilene,
            TopologySpec::Grid { rows: 4, cols: 4 },
            TopologySpec::Regular {
                nodes: Self::DEFAULT_REGULAR_NODES,
                degree: 3,
                seed: Self::REGULAR_GRAPH_SEED,
            },
        ]
    }

    pub fn build(&self, capacity: f64) -> Result<NetworkModel> {
        match self {
            TopologySpec::Abilene => Ok(NetworkModel::abilene(capacity)),
            TopologySpec::Grid { rows, cols } => NetworkModel::grid(*rows, *cols, capacity),
            TopologySpec::Regular {
                nodes,
                degree,
                seed,
            } => NetworkModel::random_regular(*nodes, *degree, *seed, capacity),
            TopologySpec::File(path) => NetworkModel::load(path, capacity),
        }
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> String {
        match self {
            TopologySpec::Abilene => "abilene".into(),
            TopologySpec::Grid { .. } => "grid".into(),
            TopologySpec::Regular { .. } => "regular".into(),
            TopologySpec::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologySpec::Abilene => write!(f, "abilene"),
            TopologySpec::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            TopologySpec::Regular {
                nodes,
                degree,
                seed,
            } => write!(f, "regular:{nodes}:{degree}:{seed}"),
            TopologySpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for TopologySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unknown {
            kind: "topology",
            name: s.to_string(),
        };
        let mut parts = s.split(':');
        match parts.next().unwrap_or_default() {
            "abilene" => Ok(TopologySpec::Abilene),
            "grid" => match parts.next() {
                None => Ok(TopologySpec::Grid { rows: 4, cols: 4 }),
                Some(dims) => {
                    let (r, c) = dims.split_once('x').ok_or_else(bad)?;
                    Ok(TopologySpec::Grid {
                        rows: r.parse().map_err(|_| bad())?,
                        cols: c.parse().map_err(|_| bad())?,
                    })
                }
            },
            "regular" => {
                let nodes = match parts.next() {
                    Some(n) => n.parse().map_err(|_| bad())?,
                    None => Self::DEFAULT_REGULAR_NODES,
                };
                let degree = match parts.next() {
                    Some(d) => d.parse().map_err(|_| bad())?,
                    None => 3,
                };
                let seed = match parts.next() {
                    Some(d) => d.parse().map_err(|_| bad())?,
                    None => Self::REGULAR_GRAPH_SEED,
                };
                Ok(TopologySpec::Regular {
                    nodes,
                    degree,
                    seed,
                })
            }
            _ if s.ends_with(".toml") => Ok(TopologySpec::File(PathBuf::from(s))),
            _ => Err(bad()),
        }
    }
}

impl Serialize for TopologySpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TopologySpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
