use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::linkage::Dendrogram;
use super::partition::Partition;
use crate::distkit::DissimilarityMatrix;
use crate::error::{invalid, Result};

fn check_sizes(p: &Partition, m: &DissimilarityMatrix) -> Result<()> {
    if p.len() != m.n() {
        return Err(invalid(format!(
            "partition covers {} items but the matrix has {}",
            p.len(),
            m.n()
        )));
    }
    if p.k() < 2 {
        return Err(invalid("validity indices need at least 2 clusters"));
    }
    Ok(())
}

fn mean_between(m: &DissimilarityMatrix, a: &[usize], b: &[usize]) -> f64 {
    let total: f64 = a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j))).map(|(i, j)| m.get(i, j)).sum();
    total / (a.len() * b.len()) as f64
}

/// Mean pairwise dissimilarity inside a cluster; zero for singletons.
fn mean_within(m: &DissimilarityMatrix, a: &[usize]) -> f64 {
    if a.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for (x, &i) in a.iter().enumerate() {
        for &j in &a[x + 1..] {
            total += m.get(i, j);
        }
    }
    total / (a.len() * (a.len() - 1) / 2) as f64
}

/// Dunn's index with average inter-cluster distance and average diameter.
///
/// Returns `+inf` when every cluster has zero diameter.
pub fn dunn_index(p: &Partition, m: &DissimilarityMatrix) -> Result<f64> {
    check_sizes(p, m)?;
    let groups = p.groups();
    let max_diam = groups.iter().map(|g| mean_within(m, g)).fold(0.0, f64::max);
    if max_diam == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut min_sep = f64::INFINITY;
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            min_sep = min_sep.min(mean_between(m, a, b));
        }
    }
    Ok(min_sep / max_diam)
}

/// Per-item silhouette detail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    pub a: f64,
    pub b: f64,
    /// Cluster achieving `b`.
    pub nearest: usize,
    pub s: f64,
}

/// Silhouette of every item. Members of singleton clusters get `s = 0`.
pub fn silhouette_detail(p: &Partition, m: &DissimilarityMatrix) -> Result<Vec<Silhouette>> {
    check_sizes(p, m)?;
    let groups = p.groups();
    Ok((0..p.len())
        .map(|i| {
            let own = p.label(i);
            let mut nearest = usize::MAX;
            let mut b = f64::INFINITY;
            for (c, g) in groups.iter().enumerate() {
                if c == own {
                    continue;
                }
                let v = g.iter().map(|&j| m.get(i, j)).sum::<f64>() / g.len() as f64;
                if v < b {
                    b = v;
                    nearest = c;
                }
            }
            let members = &groups[own];
            if members.len() < 2 {
                return Silhouette { a: 0.0, b, nearest, s: 0.0 };
            }
            let a = members.iter().filter(|&&j| j != i).map(|&j| m.get(i, j)).sum::<f64>()
                / (members.len() - 1) as f64;
            let denom = a.max(b);
            let s = if denom > 0.0 { (b - a) / denom } else { 0.0 };
            Silhouette { a, b, nearest, s }
        })
        .collect())
}

pub fn silhouette(p: &Partition, m: &DissimilarityMatrix) -> Result<Vec<f64>> {
    Ok(silhouette_detail(p, m)?.into_iter().map(|s| s.s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reassignment {
    pub item: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevisionOutcome {
    pub partition: Partition,
    pub moved: Vec<Reassignment>,
    /// Negative-silhouette items kept in place because moving them would empty their cluster.
    pub retained: Vec<usize>,
    pub rounds: usize,
}

/// One reassignment pass: every item with negative silhouette moves to its nearest other cluster.
pub fn silhouette_revision(p: &Partition, m: &DissimilarityMatrix) -> Result<Partition> {
    Ok(silhouette_revision_rounds(p, m, 1)?.partition)
}

/// Up to `max_rounds` reassign-recompute passes, stopping at a fixed point.
pub fn silhouette_revision_rounds(
    p: &Partition,
    m: &DissimilarityMatrix,
    max_rounds: usize,
) -> Result<RevisionOutcome> {
    let mut labels = p.labels().to_vec();
    let mut moved = Vec::new();
    let mut retained = Vec::new();
    let mut rounds = 0;
    for _ in 0..max_rounds {
        let current = Partition::new(labels.clone())?;
        let sil = silhouette_detail(&current, m)?;
        let mut sizes = current.sizes();
        let mut changed = false;
        retained.clear();
        for (i, s) in sil.iter().enumerate() {
            if s.s >= 0.0 {
                continue;
            }
            let from = labels[i];
            if sizes[from] <= 1 {
                retained.push(i);
                continue;
            }
            sizes[from] -= 1;
            sizes[s.nearest] += 1;
            labels[i] = s.nearest;
            moved.push(Reassignment { item: i, from, to: s.nearest });
            changed = true;
        }
        rounds += 1;
        if !changed {
            break;
        }
    }
    Ok(RevisionOutcome { partition: Partition::new(labels)?, moved, retained, rounds })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `(k, Dunn index)` for each candidate.
    #[serde(with = "dunn_table")]
    pub dunn: Vec<(usize, f64)>,
    /// Silhouettes of the chosen cut.
    pub silhouette: Vec<f64>,
    pub chosen_k: usize,
}

/// Dunn values may be `+inf`, which JSON numbers cannot carry; write it as `"inf"`.
mod dunn_table {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Value {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &[(usize, f64)], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(usize, Value)> = v
            .iter()
            .map(|&(k, d)| (k, if d.is_finite() { Value::Num(d) } else { Value::Text(d.to_string()) }))
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, f64)>, D::Error> {
        let rows = Vec::<(usize, Value)>::deserialize(d)?;
        rows.into_iter()
            .map(|(k, v)| match v {
                Value::Num(x) => Ok((k, x)),
                Value::Text(t) => t.parse().map(|x| (k, x)).map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

/// Pick `k` maximizing Dunn's index over `k_range`; ties go to the smaller `k`.
pub fn select_k(
    d: &Dendrogram,
    m: &DissimilarityMatrix,
    k_range: RangeInclusive<usize>,
) -> Result<(usize, ValidityReport)> {
    let n = d.n_leaves;
    if k_range.is_empty() {
        return Err(invalid("empty k range"));
    }
    if *k_range.start() < 2 || *k_range.end() >= n {
        return Err(invalid(format!(
            "k range {}..={} must lie inside 2..={}",
            k_range.start(),
            k_range.end(),
            n.saturating_sub(1)
        )));
    }
    let mut dunn = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    for k in k_range {
        let v = dunn_index(&d.cut(k)?, m)?;
        dunn.push((k, v));
        let better = match best {
            None => true,
            Some((_, b)) if b.is_infinite() => false,
            Some((_, b)) => v.is_infinite() || v > b * (1.0 + 1e-12),
        };
        if better {
            best = Some((k, v));
        }
    }
    let chosen_k = best.expect("nonempty range").0;
    let silhouette = silhouette(&d.cut(chosen_k)?, m)?;
    Ok((chosen_k, ValidityReport { dunn, silhouette, chosen_k }))
}

/// Davies-Bouldin index in its medoid form for dissimilarity data (lower is better).
pub fn davies_bouldin(p: &Partition, m: &DissimilarityMatrix) -> Result<f64> {
    check_sizes(p, m)?;
    let groups = p.groups();
    let medoids: Vec<usize> = groups
        .iter()
        .map(|g| {
            *g.iter()
                .min_by(|&&x, &&y| {
                    let sx: f64 = g.iter().map(|&j| m.get(x, j)).sum();
                    let sy: f64 = g.iter().map(|&j| m.get(y, j)).sum();
                    sx.total_cmp(&sy)
                })
                .expect("clusters are nonempty")
        })
        .collect();
    let scatter: Vec<f64> = groups
        .iter()
        .zip(&medoids)
        .map(|(g, &c)| g.iter().map(|&j| m.get(c, j)).sum::<f64>() / g.len() as f64)
        .collect();
    let k = groups.len();
    let total: f64 = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .map(|j| (scatter[i] + scatter[j]) / m.get(medoids[i], medoids[j]))
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(total / k as f64)
}
