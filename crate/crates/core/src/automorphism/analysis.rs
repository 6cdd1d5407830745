use crate::automorphism::block::{build_sigma, BlockPermutation};
use crate::automorphism::edges::{delta, EdgePartitionS};
use crate::components::census::{build_census, TreeCensus};
use crate::components::counting::k_cutoff;
use crate::components::partition::{decompose, ComponentPartition};
use crate::error::Result;
use crate::model::graph::SparseGraph;
use crate::model::instance::CorrelatedInstance;
use crate::seed::Seed;

/// Everything derived from the intersection graph of one instance.
#[derive(Debug, Clone)]
pub struct IntersectionAnalysis {
    pub intersection: SparseGraph,
    pub partition: ComponentPartition,
    pub census: TreeCensus,
    pub s: EdgePartitionS,
}

impl IntersectionAnalysis {
    /// Uses the default cutoff `K(n)`.
    pub fn new(inst: &CorrelatedInstance) -> Result<Self> {
        Self::with_cutoff(inst, k_cutoff(inst.n()))
    }

    pub fn with_cutoff(inst: &CorrelatedInstance, k: usize) -> Result<Self> {
        let intersection = inst.intersection();
        let partition = decompose(&intersection, k);
        let census = build_census(&partition, &intersection)?;
        let s = EdgePartitionS::from_partition(&partition);
        Ok(IntersectionAnalysis { intersection, partition, census, s })
    }

    pub fn build_sigma(&self, seed: Seed) -> Result<BlockPermutation> {
        build_sigma(&self.census, &self.partition, seed)
    }

    pub fn delta(&self, sigma: &BlockPermutation, inst: &CorrelatedInstance) -> Result<usize> {
        delta(&sigma.sigma, inst, &self.s)
    }
}
