//! Partitions indexing the type of a finite abelian p-group.

use std::fmt;

/// A partition: positive parts sorted non-increasing. The type lambda of the
/// p-group Z_{p^l1} x ... x Z_{p^lr}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from arbitrary entries: zeros are dropped and the
    /// rest sorted non-increasing.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts; the rank of the p-group.
    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// |lambda| = sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The i-th part with 1-based index, zero beyond the rank. Makes the
    /// conventions lambda_{r+1} = 0 and mu'_{j+1} = 0 direct to write.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Conjugate partition (transposed Ferrers diagram):
    /// lambda'_j = #{i : lambda_i >= j}.
    pub fn conjugate(&self) -> Partition {
        let max = self.part(1);
        let parts = (1..=max)
            .map(|j| self.parts.iter().filter(|&&x| x >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Component-wise domination mu_i <= lambda_i (with zero padding); the
    /// condition for a subgroup of type mu to exist in a p-group of type
    /// lambda.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.parts.len() <= self.parts.len()
            && mu.parts.iter().zip(&self.parts).all(|(m, l)| m <= l)
    }

    /// All partitions mu with mu <= lambda component-wise, in lexicographic
    /// order; includes the empty partition and lambda itself.
    pub fn subpartitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current: Vec<u32> = Vec::new();
        fn rec(lambda: &[u32], i: usize, prev: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i == lambda.len() {
                out.push(Partition {
                    parts: current.iter().copied().filter(|&x| x > 0).collect(),
                });
                return;
            }
            let hi = lambda[i].min(prev);
            for v in (0..=hi).rev() {
                current.push(v);
                rec(lambda, i + 1, v, current, out);
                current.pop();
                if v == 0 {
                    break;
                }
            }
        }
        rec(&self.parts, 0, u32::MAX, &mut current, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
