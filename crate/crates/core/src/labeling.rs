use std::fmt;

use crate::error::{Error, Result};

/// A total assignment of labels to nodes. Labels are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        Labeling(labels)
    }

    /// Builds a labeling from 1-based labels, as written in files and on the CLI.
    pub fn from_one_based(labels: &[usize]) -> Result<Self> {
        labels
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::validation("labels are 1-based; got 0"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Labeling)
    }

    pub fn uniform(num_nodes: usize, label: usize) -> Self {
        Labeling(vec![label; num_nodes])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, node: usize) -> usize {
        self.0[node]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    /// Checks length and label range against an instance shape.
    pub fn validate(&self, num_nodes: usize, num_labels: usize) -> Result<()> {
        if self.0.len() != num_nodes {
            return Err(Error::validation(format!(
                "labeling has {} entries but the instance has {num_nodes} nodes",
                self.0.len()
            )));
        }
        if let Some((node, &label)) = self.0.iter().enumerate().find(|(_, &l)| l >= num_labels) {
            return Err(Error::validation(format!(
                "node {node} has label {} outside 1..{num_labels}",
                label + 1
            )));
        }
        Ok(())
    }

    /// Number of nodes on which the two labelings differ.
    pub fn hamming(&self, other: &Labeling) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Whether the labelings agree on every node of `nodes`.
    pub fn agrees_on(&self, other: &Labeling, nodes: &[usize]) -> bool {
        nodes.iter().all(|&v| self.0[v] == other.0[v])
    }

    /// Parses `"2,2,3,3"` or `"(2,2,3,3)"` as 1-based labels.
    pub fn parse_one_based(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad label {t:?} in labeling {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Labeling::from_one_based(&labels)
    }
}

impl fmt::Display for Labeling {
    /// 1-based tuple form, e.g. `(2,2,3,3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l + 1)?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for Labeling {
    fn from(v: Vec<usize>) -> Self {
        Labeling(v)
    }
}
