//! JSON file formats for graphs, distributions and triples.
//!
//! ```text
//! graph:        {"vertices": ["0","1"], "edges": [{"tail":"0","head":"1"}], "root": "0"}
//! distribution: {"values": {"0": 0.5, "1": 0.5}}
//! triple:       {"steps": M, "f": [[..]; M+1], "v": [[..]; M], "g": [[..]; M]}
//! ```

use std::collections::BTreeMap;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::graph::DirectedGraph;
use crate::measures::{
    EdgeDistribution, EdgePairPath, EdgeVelocity, TimeGrid, Triple, VertexDistribution, VertexPath,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub steps: usize,
    pub f: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
}

fn parse<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn lookup(labels: &[String], label: &str, role: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Graph(format!("{role} {label:?} is not a listed vertex")))
}

impl GraphFile {
    pub fn from_graph(graph: &DirectedGraph) -> Self {
        GraphFile {
            vertices: graph.labels().to_vec(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    tail: graph.label(e.tail).to_owned(),
                    head: graph.label(e.head).to_owned(),
                })
                .collect(),
            root: graph.root().map(|r| graph.label(r).to_owned()),
        }
    }

    pub fn to_graph(&self) -> Result<DirectedGraph> {
        let labels = &self.vertices;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                Ok((
                    lookup(labels, &e.tail, &format!("tail of edge {k}"))?,
                    lookup(labels, &e.head, &format!("head of edge {k}"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let root = self
            .root
            .as_deref()
            .map(|r| lookup(labels, r, "root"))
            .transpose()?;
        DirectedGraph::new(labels.clone(), &edges, root)
    }
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    parse::<GraphFile>("graph", text)?.to_graph()
}

pub fn graph_to_json(graph: &DirectedGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph)).expect("graph serializes")
}

/// Reads a distribution whose keys are exactly the vertex labels of `graph`.
pub fn parse_distribution(text: &str, graph: &DirectedGraph) -> Result<VertexDistribution> {
    let file: DistributionFile = parse("distribution", text)?;
    let mut mass = Array1::zeros(graph.num_vertices());
    for (label, value) in &file.values {
        let x = graph
            .vertex(label)
            .ok_or_else(|| Error::Distribution(format!("unknown vertex {label:?}")))?;
        mass[x] = *value;
    }
    if let Some(missing) = graph.labels().iter().find(|l| !file.values.contains_key(*l)) {
        return Err(Error::Distribution(format!("no mass given for vertex {missing:?}")));
    }
    VertexDistribution::new(mass)
}

pub fn distribution_to_json(f: &VertexDistribution, graph: &DirectedGraph) -> Result<String> {
    check_len("distribution", graph.num_vertices(), f.len())?;
    let values = graph
        .labels()
        .iter()
        .cloned()
        .zip(f.mass().iter().copied())
        .collect();
    Ok(serde_json::to_string_pretty(&DistributionFile { values }).expect("distribution serializes"))
}

impl TripleFile {
    pub fn from_triple(triple: &Triple) -> Result<Self> {
        let grid = triple.path().grid();
        if !grid.is_uniform() {
            return Err(Error::Parameter("only uniform grids can be written".into()));
        }
        let pair = triple.pair();
        Ok(TripleFile {
            steps: grid.steps(),
            f: triple.path().samples().iter().map(|s| s.mass().to_vec()).collect(),
            v: pair.velocities().iter().map(|v| v.value().to_vec()).collect(),
            g: pair.weights().iter().map(|g| g.mass().to_vec()).collect(),
        })
    }

    /// Builds the triple on the uniform grid with `steps` intervals, checking
    /// every row against the vertex and edge counts of `graph`.
    pub fn to_triple(&self, graph: &DirectedGraph) -> Result<Triple> {
        let grid = TimeGrid::uniform(self.steps)?;
        check_len("f rows", self.steps + 1, self.f.len())?;
        check_len("v rows", self.steps, self.v.len())?;
        check_len("g rows", self.steps, self.g.len())?;
        let samples = self
            .f
            .iter()
            .map(|row| {
                check_len("f row", graph.num_vertices(), row.len())?;
                VertexDistribution::new(Array1::from(row.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let velocities = self
            .v
            .iter()
            .map(|row| {
                check_len("v row", graph.num_edges(), row.len())?;
                EdgeVelocity::new(Array1::from(row.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let weights = self
            .g
            .iter()
            .map(|row| {
                check_len("g row", graph.num_edges(), row.len())?;
                EdgeDistribution::new(Array1::from(row.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Triple::new(
            VertexPath::new(grid.clone(), samples)?,
            EdgePairPath::new(grid, velocities, weights)?,
        )
    }
}

pub fn parse_triple(text: &str, graph: &DirectedGraph) -> Result<Triple> {
    parse::<TripleFile>("triple", text)?.to_triple(graph)
}

pub fn triple_to_json(triple: &Triple) -> Result<String> {
    let file = TripleFile::from_triple(triple)?;
    Ok(serde_json::to_string(&file).expect("triple serializes"))
}
