//! Invariants of tensor powers of the SU(M) fundamental representation.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Young diagram with at most `M` rows, stored with all `M` row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YoungDiagram {
    rows: Vec<u32>,
}

impl YoungDiagram {
    pub fn empty(rank: u32) -> Self {
        YoungDiagram {
            rows: vec![0; rank as usize],
        }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn boxes(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Diagram with a box appended to `row`, if that keeps rows weakly decreasing.
    pub fn add_box(&self, row: usize) -> Option<Self> {
        if row >= self.rows.len() || (row > 0 && self.rows[row - 1] == self.rows[row]) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[row] += 1;
        Some(YoungDiagram { rows })
    }

    /// Strips full-height columns, which carry the determinant representation.
    pub fn reduced(mut self) -> Self {
        let full = *self.rows.last().unwrap_or(&0);
        if full > 0 {
            for r in &mut self.rows {
                *r -= full;
            }
        }
        self
    }
}

/// Multiplicity of the trivial representation in the `m`-th tensor power of
/// the SU(M) fundamental, by counting box-adding paths from the empty
/// diagram back to the empty reduced diagram.
pub fn su_m_invariant_dimension(rank: u32, m: u32) -> BigUint {
    assert!(rank >= 2, "SU(M) needs M >= 2");
    if !m.is_multiple_of(rank) {
        return BigUint::zero();
    }
    let mut layer: HashMap<YoungDiagram, BigUint> = HashMap::new();
    layer.insert(YoungDiagram::empty(rank), BigUint::one());
    for step in 0..m {
        let remaining = m - step - 1;
        let mut next: HashMap<YoungDiagram, BigUint> = HashMap::with_capacity(layer.len() * 2);
        for (diagram, paths) in &layer {
            for row in 0..rank as usize {
                let Some(grown) = diagram.add_box(row) else {
                    continue;
                };
                let grown = grown.reduced();
                // boxes still needed to close every row up to the first one
                let first = grown.rows[0];
                let deficit: u32 = grown.rows.iter().map(|r| first - r).sum();
                if deficit > remaining {
                    continue;
                }
                *next.entry(grown).or_default() += paths;
            }
        }
        layer = next;
    }
    layer.remove(&YoungDiagram::empty(rank)).unwrap_or_default()
}

/// Number of standard Young tableaux of the given shape, by the hook-length formula.
pub fn standard_tableaux_count(shape: &[u32]) -> BigUint {
    let boxes: u32 = shape.iter().sum();
    let mut numerator = BigUint::one();
    for k in 1..=boxes {
        numerator *= k;
    }
    let mut hooks = BigUint::one();
    for (i, &len) in shape.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = shape[i + 1..].iter().filter(|&&l| l > j).count() as u32;
            hooks *= arm + leg + 1;
        }
    }
    numerator / hooks
}

/// Hook-length count for the `rank x (m / rank)` rectangle, zero when `rank` does not divide `m`.
pub fn rectangular_tableaux_count(rank: u32, m: u32) -> BigUint {
    if !m.is_multiple_of(rank) {
        return BigUint::zero();
    }
    standard_tableaux_count(&vec![m / rank; rank as usize])
}
