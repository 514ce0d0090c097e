//! Agglomerative clustering, partitions, validity indices and the Sim score.

mod linkage;
mod partition;
mod sim;
mod validity;

pub use linkage::{agglomerate, Dendrogram, Linkage, Merge};
pub use partition::Partition;
pub use sim::sim_index;
pub use validity::{
    davies_bouldin, dunn_index, select_k, silhouette, silhouette_detail, silhouette_revision,
    silhouette_revision_rounds, Reassignment, RevisionOutcome, Silhouette, ValidityReport,
};
