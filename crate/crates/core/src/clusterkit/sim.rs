use super::partition::Partition;
use crate::error::{invalid, Result};

/// Gavrilov-style similarity between a found clustering and the truth.
///
/// For each true cluster take the best Sørensen overlap `2|G∩A| / (|G|+|A|)`
/// over found clusters, then average over true clusters. Not symmetric.
pub fn sim_index(found: &Partition, truth: &Partition) -> Result<f64> {
    if found.len() != truth.len() {
        return Err(invalid(format!(
            "partitions cover {} and {} items",
            found.len(),
            truth.len()
        )));
    }
    let mut counts = vec![0usize; truth.k() * found.k()];
    for (t, f) in truth.labels().iter().zip(found.labels()) {
        counts[t * found.k() + f] += 1;
    }
    let ts = truth.sizes();
    let fs = found.sizes();
    let total: f64 = (0..truth.k())
        .map(|g| {
            (0..found.k())
                .map(|a| 2.0 * counts[g * found.k() + a] as f64 / (ts[g] + fs[a]) as f64)
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(total / truth.k() as f64)
}
