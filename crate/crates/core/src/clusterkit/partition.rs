use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Assignment of items to `k` nonempty clusters labeled `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid("a partition needs at least one item"));
        }
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("cluster {empty} is empty")));
        }
        Ok(Self { labels, k })
    }

    /// Relabel arbitrary keys as `0..k` in order of first appearance.
    pub fn from_keys<K: std::hash::Hash + Eq + Clone>(keys: &[K]) -> Result<Self> {
        let mut map: HashMap<K, usize> = HashMap::new();
        let labels = keys
            .iter()
            .map(|key| {
                let next = map.len();
                *map.entry(key.clone()).or_insert(next)
            })
            .collect();
        Self::new(labels)
    }

    /// Build from explicit groups of item indices covering `0..n` exactly once.
    pub fn from_groups(groups: &[Vec<usize>]) -> Result<Self> {
        let n: usize = groups.iter().map(Vec::len).sum();
        let mut labels = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                if i >= n || labels[i] != usize::MAX {
                    return Err(invalid(format!("item {i} is out of range or repeated")));
                }
                labels[i] = g;
            }
        }
        Self::new(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Member indices per cluster.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            g[l].push(i);
        }
        g
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    /// Same grouping, relabeled by first appearance in item order.
    pub fn canonical(&self) -> Self {
        Self::from_keys(&self.labels).expect("relabeling a valid partition")
    }

    /// `item,label` CSV.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["item", "label"])?;
        for (i, l) in self.labels.iter().enumerate() {
            out.write_record([i.to_string(), l.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}
