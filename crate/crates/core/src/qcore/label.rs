use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Conventional subsystem names used by the evaporation models.
pub mod names {
    pub const REF: &str = "ref";
    pub const INT: &str = "int";
    pub const B: &str = "B";
    pub const R: &str = "R";
    pub const EXT: &str = "ext";
    /// Reference purifying matter injected after formation.
    pub const LATE: &str = "late";
}

/// A named tensor factor with its local Hilbert-space dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemLabel {
    name: String,
    dim: usize,
}

impl SubsystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        let name = name.into();
        if dim == 0 {
            return Err(Error::InvalidDimension(format!(
                "subsystem `{name}` must have dimension >= 1"
            )));
        }
        Ok(Self { name, dim })
    }

    /// A register of `count` qubits.
    pub fn qubits(name: impl Into<String>, count: u32) -> Result<Self> {
        let dim = 1usize
            .checked_shl(count)
            .filter(|_| count < usize::BITS - 1)
            .ok_or_else(|| Error::InvalidDimension(format!("2^{count} does not fit in memory")))?;
        Self::new(name, dim)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Ordered list of uniquely named subsystems. The first label is the most
/// significant index of the flattened (row-major) basis.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Layout {
    labels: Vec<SubsystemLabel>,
}

impl Layout {
    pub fn new(labels: Vec<SubsystemLabel>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].iter().any(|o| o.name == l.name) {
                return Err(Error::DuplicateLabel(l.name.clone()));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[SubsystemLabel] {
        &self.labels
    }

    pub fn names(&self) -> Vec<&str> {
        self.labels.iter().map(|l| l.name()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(|l| l.dim).product()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.labels.iter().any(|l| l.name == name)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.labels[self.position(name)?].dim)
    }

    /// Product of the dimensions of the named labels.
    pub fn dim_of_set(&self, names: &[&str]) -> Result<usize> {
        names
            .iter()
            .try_fold(1usize, |acc, n| Ok(acc * self.dim_of(n)?))
    }

    pub fn concat(&self, other: &Layout) -> Result<Layout> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Layout::new(labels)
    }

    /// Positions of `names`, validating that every name exists exactly once.
    pub fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let p = self.position(n)?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel(n.to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Positions of `keep` sorted into layout order, and the complementary
    /// positions in layout order.
    pub fn split_positions(&self, keep: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut kept = self.positions(keep)?;
        kept.sort_unstable();
        let rest = (0..self.len()).filter(|p| !kept.contains(p)).collect();
        Ok((kept, rest))
    }

    pub fn select(&self, positions: &[usize]) -> Layout {
        Layout {
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    pub(crate) fn replace(
        &self,
        at: usize,
        count: usize,
        with: Vec<SubsystemLabel>,
    ) -> Result<Layout> {
        let mut labels = self.labels[..at].to_vec();
        labels.extend(with);
        labels.extend_from_slice(&self.labels[at + count..]);
        Layout::new(labels)
    }
}

/// For axes of sizes `dims` reordered as `order` (new axis `i` is old axis
/// `order[i]`), returns `map` with `map[new_linear] = old_linear`.
pub(crate) fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let mut old_strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        old_strides[i] = old_strides[i + 1] * dims[i + 1];
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let strides: Vec<usize> = order.iter().map(|&o| old_strides[o]).collect();
    let mut map = Vec::with_capacity(total);
    let mut counter = vec![0usize; order.len()];
    let mut old = 0usize;
    for _ in 0..total {
        map.push(old);
        for axis in (0..order.len()).rev() {
            counter[axis] += 1;
            old += strides[axis];
            if counter[axis] < new_dims[axis] {
                break;
            }
            old -= strides[axis] * new_dims[axis];
            counter[axis] = 0;
        }
    }
    map
}
