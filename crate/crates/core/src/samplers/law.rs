use std::sync::Arc;

use num_rational::Ratio;

use crate::finite::FiniteSchreierGraph;
use crate::keyed::{subseed, SeededKey};
use crate::oracle::{Oracle, Rebased};
use crate::vertex::VertexId;

/// A random subgroup, realised as a deterministic map from seeds to oracles.
pub trait SubgroupLaw: Send + Sync {
    fn rank(&self) -> usize;
    fn sample(&self, seed: u64) -> Oracle;

    /// Short human-readable description, echoed in report headers.
    fn describe(&self) -> String;

    /// The whole law when it is finitely supported and known exactly.
    fn atoms(&self) -> Option<Vec<(Oracle, Ratio<u64>)>> {
        None
    }
}

pub type Law = Arc<dyn SubgroupLaw>;

/// Point mass on one subgroup.
pub struct Dirac {
    oracle: Oracle,
    name: String,
}

impl Dirac {
    pub fn new(oracle: Oracle, name: impl Into<String>) -> Self {
        Dirac {
            oracle,
            name: name.into(),
        }
    }
}

impl SubgroupLaw for Dirac {
    fn rank(&self) -> usize {
        self.oracle.rank()
    }

    fn sample(&self, _seed: u64) -> Oracle {
        self.oracle.clone()
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn atoms(&self) -> Option<Vec<(Oracle, Ratio<u64>)>> {
        Some(vec![(self.oracle.clone(), Ratio::from_integer(1))])
    }
}

/// A finite Schreier graph rooted at a uniformly random vertex: the invariant
/// random subgroup carried by the conjugacy class of a finite-index subgroup.
pub struct UniformRoot {
    graph: Arc<FiniteSchreierGraph>,
    name: String,
}

impl UniformRoot {
    pub fn new(graph: FiniteSchreierGraph, name: impl Into<String>) -> Self {
        UniformRoot {
            graph: Arc::new(graph),
            name: name.into(),
        }
    }
}

impl SubgroupLaw for UniformRoot {
    fn rank(&self) -> usize {
        self.graph.rank()
    }

    fn sample(&self, seed: u64) -> Oracle {
        let key = VertexId::Index(0);
        let v = SeededKey::new(subseed(seed, "uniform-root", 0), "root", &key)
            .below(self.graph.len() as u64);
        let root = self.graph.labels()[v as usize].clone();
        let inner: Oracle = self.graph.clone();
        Arc::new(Rebased::new(inner, root))
    }

    fn describe(&self) -> String {
        format!("uniform:{}", self.name)
    }

    fn atoms(&self) -> Option<Vec<(Oracle, Ratio<u64>)>> {
        let n = self.graph.len() as u64;
        let inner: Oracle = self.graph.clone();
        Some(
            self.graph
                .labels()
                .iter()
                .map(|v| {
                    let o: Oracle = Arc::new(Rebased::new(inner.clone(), v.clone()));
                    (o, Ratio::new(1, n))
                })
                .collect(),
        )
    }
}
