use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::distkit::DissimilarityMatrix;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    /// Largest cross-pair dissimilarity.
    Complete,
    /// Mean cross-pair dissimilarity (UPGMA).
    Average,
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        })
    }
}

impl FromStr for Linkage {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            _ => Err(invalid(format!("unknown linkage {s:?}"))),
        }
    }
}

/// One agglomeration step. Leaves are clusters `0..n`; step `s` creates cluster `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    /// Number of leaves in the new cluster.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
    pub n_leaves: usize,
    pub linkage: Linkage,
}

impl Dendrogram {
    /// Heights never decrease along the merge sequence.
    pub fn is_monotone(&self) -> bool {
        self.merges.windows(2).all(|w| w[1].height >= w[0].height)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s)?;
        if d.merges.len() + 1 != d.n_leaves {
            return Err(invalid("a dendrogram over n leaves has n - 1 merges"));
        }
        Ok(d)
    }

    /// Partition left after undoing the `k - 1` last (highest) merges.
    ///
    /// Labels are numbered by first appearance in item order.
    pub fn cut(&self, k: usize) -> Result<Partition> {
        let n = self.n_leaves;
        if k < 1 || k > n {
            return Err(invalid(format!("k = {k} is outside 1..={n}")));
        }
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, m) in self.merges.iter().take(n - k).enumerate() {
            let new = n + s;
            let ra = find(&mut parent, m.a);
            let rb = find(&mut parent, m.b);
            parent[ra] = new;
            parent[rb] = new;
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Partition::from_keys(&roots)
    }
}

/// Agglomerative hierarchical clustering by Lance-Williams updates.
///
/// At each step the closest pair of active clusters is merged; among equal
/// distances the pair with the lowest `(a, b)` cluster ids wins.
pub fn agglomerate(m: &DissimilarityMatrix, linkage: Linkage) -> Result<Dendrogram> {
    m.validate()?;
    let n = m.n();
    if n < 2 {
        return Err(invalid("agglomeration needs at least 2 items"));
    }
    let total = 2 * n - 1;
    let mut d = vec![f64::NAN; total * total];
    for i in 0..n {
        for j in 0..n {
            d[i * total + j] = m.get(i, j);
        }
    }
    let mut size = vec![1usize; total];
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for (ai, &a) in active.iter().enumerate() {
            for &b in &active[ai + 1..] {
                let v = d[a * total + b];
                if v < best.2 {
                    best = (a, b, v);
                }
            }
        }
        let (a, b, height) = best;
        let new = n + step;
        let (na, nb) = (size[a] as f64, size[b] as f64);
        active.retain(|&c| c != a && c != b);
        for &c in &active {
            let (da, db) = (d[a * total + c], d[b * total + c]);
            let v = match linkage {
                Linkage::Complete => da.max(db),
                Linkage::Average => (na * da + nb * db) / (na + nb),
            };
            d[new * total + c] = v;
            d[c * total + new] = v;
        }
        d[new * total + new] = 0.0;
        size[new] = size[a] + size[b];
        active.push(new);
        merges.push(Merge { a, b, height, size: size[new] });
    }
    Ok(Dendrogram { merges, n_leaves: n, linkage })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line(points: &[f64]) -> DissimilarityMatrix {
        let rows = points
            .iter()
            .map(|a| points.iter().map(|b| (a - b).abs()).collect())
            .collect();
        DissimilarityMatrix::from_rows(rows, "line").unwrap()
    }

    #[test]
    fn two_items() {
        let m = line(&[0.0, 2.5]);
        let d = agglomerate(&m, Linkage::Complete).unwrap();
        assert_eq!(d.merges.len(), 1);
        assert_eq!(d.merges[0].height, 2.5);
    }

    #[test]
    fn line_merge_trace() {
        let m = line(&[0.0, 1.0, 10.0, 11.0]);
        for linkage in [Linkage::Complete, Linkage::Average] {
            let d = agglomerate(&m, linkage).unwrap();
            let first: Vec<(usize, usize)> = d.merges[..2].iter().map(|x| (x.a, x.b)).collect();
            assert_eq!(first, vec![(0, 1), (2, 3)]);
            let p = d.cut(2).unwrap();
            assert_eq!(p.labels(), &[0, 0, 1, 1]);
            assert!(d.is_monotone());
        }
        let d = agglomerate(&m, Linkage::Complete).unwrap();
        assert_eq!(d.merges[2].height, 11.0);
        let d = agglomerate(&m, Linkage::Average).unwrap();
        assert_eq!(d.merges[2].height, 10.0);
    }

    #[test]
    fn duplicate_rows_merge_first() {
        let rows = vec![
            vec![0.0, 3.0, 3.0, 5.0],
            vec![3.0, 0.0, 0.0, 4.0],
            vec![3.0, 0.0, 0.0, 4.0],
            vec![5.0, 4.0, 4.0, 0.0],
        ];
        let m = DissimilarityMatrix::from_rows(rows, "t").unwrap();
        let d = agglomerate(&m, Linkage::Average).unwrap();
        assert_eq!((d.merges[0].a, d.merges[0].b, d.merges[0].height), (1, 2, 0.0));
    }

    #[test]
    fn cut_extremes() {
        let m = line(&[0.0, 1.0, 3.0, 7.0, 15.0]);
        let d = agglomerate(&m, Linkage::Complete).unwrap();
        assert_eq!(d.cut(5).unwrap().labels(), &[0, 1, 2, 3, 4]);
        assert_eq!(d.cut(1).unwrap().labels(), &[0; 5]);
        assert!(d.cut(0).is_err());
        assert!(d.cut(6).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = agglomerate(&line(&[0.0, 1.0, 4.0]), Linkage::Average).unwrap();
        assert_eq!(Dendrogram::from_json(&d.to_json().unwrap()).unwrap(), d);
    }
}
