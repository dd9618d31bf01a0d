//! W₁ solvers behind a common trait, looked up by name at run time.

use std::collections::BTreeMap;

use crate::benamou::benamou_distance;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, RootedTree};
use crate::measures::VertexDistribution;
use crate::transport::{w1_beckmann, w1_kantorovich, w1_tree};

/// Summary of the time-constant pair certifying a dynamic distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSummary {
    pub q: f64,
    /// Common `|v_k|` on the support of `g`.
    pub speed: f64,
    /// `Σ_k |J_k|` of the Beckmann flow the pair was built from.
    pub flow_l1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub method: &'static str,
    /// For `auto`, the method that actually ran.
    pub resolved: &'static str,
    pub value: f64,
    pub pair: Option<PairSummary>,
}

impl DistanceReport {
    fn plain(method: &'static str, value: f64) -> Self {
        DistanceReport {
            method,
            resolved: method,
            value,
            pair: None,
        }
    }
}

pub trait W1Method: Send + Sync {
    fn name(&self) -> &'static str;

    fn distance(
        &self,
        graph: &DirectedGraph,
        f0: &VertexDistribution,
        f1: &VertexDistribution,
    ) -> Result<DistanceReport>;
}

/// Options shared by all methods; only `benamou` reads `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodConfig {
    pub q: f64,
}

impl Default for MethodConfig {
    fn default() -> Self {
        MethodConfig { q: 2.0 }
    }
}

pub struct TreeMethod;

impl W1Method for TreeMethod {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn distance(&self, graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<DistanceReport> {
        Ok(DistanceReport::plain(self.name(), w1_tree(graph, f0, f1)?))
    }
}

pub struct BeckmannMethod;

impl W1Method for BeckmannMethod {
    fn name(&self) -> &'static str {
        "beckmann"
    }

    fn distance(&self, graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<DistanceReport> {
        Ok(DistanceReport::plain(self.name(), w1_beckmann(graph, f0, f1)?.0))
    }
}

pub struct KantorovichMethod;

impl W1Method for KantorovichMethod {
    fn name(&self) -> &'static str {
        "kantorovich"
    }

    fn distance(&self, graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<DistanceReport> {
        Ok(DistanceReport::plain(self.name(), w1_kantorovich(graph, f0, f1)?.0))
    }
}

pub struct BenamouMethod {
    pub q: f64,
}

impl W1Method for BenamouMethod {
    fn name(&self) -> &'static str {
        "benamou"
    }

    fn distance(&self, graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<DistanceReport> {
        let (value, pair) = benamou_distance(graph, f0, f1, self.q)?;
        let speed = pair.velocities()[0].value().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let flow_l1 = pair.time_integral().iter().map(|j| j.abs()).sum();
        Ok(DistanceReport {
            method: self.name(),
            resolved: self.name(),
            value,
            pair: Some(PairSummary {
                q: self.q,
                speed,
                flow_l1,
            }),
        })
    }
}

/// The tail formula on outward-rooted trees, Beckmann elsewhere.
pub struct AutoMethod;

impl W1Method for AutoMethod {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn distance(&self, graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<DistanceReport> {
        let inner: &dyn W1Method = if RootedTree::from_graph(graph).is_ok() {
            &TreeMethod
        } else {
            &BeckmannMethod
        };
        let mut report = inner.distance(graph, f0, f1)?;
        report.method = self.name();
        Ok(report)
    }
}

type Factory = fn(&MethodConfig) -> Box<dyn W1Method>;

/// Name → constructor table.
pub struct MethodRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        MethodRegistry {
            factories: BTreeMap::new(),
        }
    }

    /// `tree`, `beckmann`, `kantorovich`, `benamou` and `auto`.
    pub fn with_builtin() -> Self {
        let mut registry = Self::empty();
        registry.register("tree", |_| Box::new(TreeMethod));
        registry.register("beckmann", |_| Box::new(BeckmannMethod));
        registry.register("kantorovich", |_| Box::new(KantorovichMethod));
        registry.register("benamou", |c| Box::new(BenamouMethod { q: c.q }));
        registry.register("auto", |_| Box::new(AutoMethod));
        registry
    }

    /// Adds or replaces a method.
    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str, config: &MethodConfig) -> Result<Box<dyn W1Method>> {
        if !(config.q.is_finite() && config.q >= 1.0) {
            return Err(Error::Parameter(format!("q must be >= 1, got {}", config.q)));
        }
        match self.factories.get(name) {
            Some(factory) => Ok(factory(config)),
            None => Err(Error::Parameter(format!(
                "unknown method {name:?} (available: {})",
                self.names().join(", ")
            ))),
        }
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}
