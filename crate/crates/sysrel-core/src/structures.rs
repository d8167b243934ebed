//! Coherent system structure functions and their minimal path sets.
//!
//! A structure is either an explicit antichain of minimal path sets over
//! components `1..=n`, or a k-out-of-n shortcut ("the system works iff at
//! least k of the n components work"). Path sets are stored as bitmasks;
//! component indices are 1-based in the public API, matching scenario files.

use thiserror::Error;

/// Hard cap for explicit-path operations (bitmask width and inclusion–
/// exclusion cost both grow with `n`).
pub const MAX_COMPONENTS: usize = 20;
/// Hard cap for boolean-table ingestion (the table has `2^n` rows).
pub const MAX_TABLE_COMPONENTS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structure function is not monotone: state {state:#b} works but superstate {superstate:#b} does not")]
    NonMonotone { state: u32, superstate: u32 },
    #[error("component {0} appears in no minimal path set")]
    IrrelevantComponent(usize),
    #[error("structure function is constant")]
    DegenerateSystem,
    #[error("threshold out of range: k={k}, n={n}")]
    OutOfRange { k: usize, n: usize },
    #[error("component count {n} exceeds the cap of {max}")]
    TooManyComponents { n: usize, max: usize },
    #[error("boolean table has {got} rows, expected {expected}")]
    BadTableSize { got: usize, expected: usize },
    #[error("path set is empty")]
    EmptyPath,
    #[error("component index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("path {0:?} is a superset of another path (not minimal)")]
    NotMinimal(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum StructureKind {
    /// Minimal path sets as bitmasks (bit `i` = component `i+1`), sorted.
    Explicit { paths: Vec<u32> },
    KOutOfN { k: usize },
}

/// A coherent structure over `n` components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentStructure {
    n: usize,
    kind: StructureKind,
}

impl CoherentStructure {
    /// Builds a structure from explicit minimal path sets (1-based indices).
    ///
    /// The input must already be an antichain (no path contained in another),
    /// every component must appear in at least one path, and every path must
    /// be non-empty.
    pub fn from_paths(n: usize, paths: &[Vec<usize>]) -> Result<Self, StructureError> {
        if n == 0 || n > MAX_COMPONENTS {
            return Err(StructureError::TooManyComponents { n, max: MAX_COMPONENTS });
        }
        if paths.is_empty() {
            return Err(StructureError::DegenerateSystem);
        }
        let mut masks = Vec::with_capacity(paths.len());
        for path in paths {
            if path.is_empty() {
                return Err(StructureError::EmptyPath);
            }
            let mut mask = 0u32;
            for &index in path {
                if index == 0 || index > n {
                    return Err(StructureError::IndexOutOfRange { index, n });
                }
                mask |= 1 << (index - 1);
            }
            masks.push(mask);
        }
        masks.sort_unstable();
        masks.dedup();
        for (i, &a) in masks.iter().enumerate() {
            for &b in masks.iter().skip(i + 1) {
                if a & b == a || a & b == b {
                    let sup = if a & b == a { b } else { a };
                    return Err(StructureError::NotMinimal(mask_to_indices(sup)));
                }
            }
        }
        let mut covered = 0u32;
        for &mask in &masks {
            covered |= mask;
        }
        for i in 0..n {
            if covered & (1 << i) == 0 {
                return Err(StructureError::IrrelevantComponent(i + 1));
            }
        }
        Ok(Self { n, kind: StructureKind::Explicit { paths: masks } })
    }

    /// Recovers the minimal path sets of a monotone structure function given
    /// as a full truth table (`table[s]` = system state for component-state
    /// bitmask `s`).
    pub fn from_boolean_table(n: usize, table: &[bool]) -> Result<Self, StructureError> {
        if n == 0 || n > MAX_TABLE_COMPONENTS {
            return Err(StructureError::TooManyComponents { n, max: MAX_TABLE_COMPONENTS });
        }
        let rows = 1usize << n;
        if table.len() != rows {
            return Err(StructureError::BadTableSize { got: table.len(), expected: rows });
        }
        for state in 0..rows as u32 {
            if !table[state as usize] {
                continue;
            }
            for bit in 0..n {
                let superstate = state | (1 << bit);
                if !table[superstate as usize] {
                    return Err(StructureError::NonMonotone { state, superstate });
                }
            }
        }
        if table[0] || !table[rows - 1] {
            return Err(StructureError::DegenerateSystem);
        }
        // Minimal working states of a monotone table are the minimal path sets.
        let mut paths = Vec::new();
        for state in 1..rows as u32 {
            if !table[state as usize] {
                continue;
            }
            let minimal = (0..n).all(|bit| {
                state & (1 << bit) == 0 || !table[(state & !(1 << bit)) as usize]
            });
            if minimal {
                paths.push(state);
            }
        }
        let mut covered = 0u32;
        for &mask in &paths {
            covered |= mask;
        }
        for i in 0..n {
            if covered & (1 << i) == 0 {
                return Err(StructureError::IrrelevantComponent(i + 1));
            }
        }
        paths.sort_unstable();
        Ok(Self { n, kind: StructureKind::Explicit { paths } })
    }

    /// The k-out-of-n structure: works iff at least `k` of `n` components work.
    pub fn k_out_of_n(k: usize, n: usize) -> Result<Self, StructureError> {
        if n == 0 || n > MAX_COMPONENTS {
            return Err(StructureError::TooManyComponents { n, max: MAX_COMPONENTS });
        }
        if k == 0 || k > n {
            return Err(StructureError::OutOfRange { k, n });
        }
        Ok(Self { n, kind: StructureKind::KOutOfN { k } })
    }

    /// Series system (all components needed) = n-out-of-n.
    pub fn series(n: usize) -> Result<Self, StructureError> {
        Self::k_out_of_n(n, n)
    }

    /// Parallel system (any component suffices) = 1-out-of-n.
    pub fn parallel(n: usize) -> Result<Self, StructureError> {
        Self::k_out_of_n(1, n)
    }

    pub fn component_count(&self) -> usize {
        self.n
    }

    /// The k-out-of-n threshold, when this structure is the shortcut form.
    pub fn threshold(&self) -> Option<usize> {
        match self.kind {
            StructureKind::KOutOfN { k } => Some(k),
            StructureKind::Explicit { .. } => None,
        }
    }

    /// Minimal path sets as sorted 1-based index lists. For k-out-of-n this
    /// expands to all `C(n, k)` subsets of size `k`.
    pub fn expand_paths(&self) -> Vec<Vec<usize>> {
        self.path_masks().iter().map(|&m| mask_to_indices(m)).collect()
    }

    /// Minimal path sets as bitmasks (sorted ascending).
    pub(crate) fn path_masks(&self) -> Vec<u32> {
        match &self.kind {
            StructureKind::Explicit { paths } => paths.clone(),
            StructureKind::KOutOfN { k } => {
                let mut masks: Vec<u32> = (1..(1u32 << self.n))
                    .filter(|m| m.count_ones() as usize == *k)
                    .collect();
                masks.sort_unstable();
                masks
            }
        }
    }

    /// Structure function φ: does the system work when exactly the components
    /// in `working` (bitmask) work?
    pub fn system_works(&self, working: u32) -> bool {
        match &self.kind {
            StructureKind::KOutOfN { k } => (working & self.full_mask()).count_ones() as usize >= *k,
            StructureKind::Explicit { paths } => {
                // path ⊆ working  ⟺  path ∧ ¬working = ∅
                paths.iter().any(|&path| path & !working == 0)
            }
        }
    }

    /// Full truth table (`2^n` rows), the inverse of [`from_boolean_table`].
    ///
    /// [`from_boolean_table`]: CoherentStructure::from_boolean_table
    pub fn to_boolean_table(&self) -> Vec<bool> {
        (0..(1u32 << self.n)).map(|s| self.system_works(s)).collect()
    }

    pub(crate) fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Enumerates every coherent structure on `n ≤ 4` components by filtering all
/// boolean tables. Exposed for oracle-style exhaustive tests.
pub fn enumerate_coherent(n: usize) -> Vec<CoherentStructure> {
    assert!((1..=4).contains(&n), "exhaustive enumeration is limited to n <= 4");
    let rows = 1usize << n;
    let mut out = Vec::new();
    for code in 0u32..(1u32 << rows) {
        let table: Vec<bool> = (0..rows).map(|r| code & (1 << r) != 0).collect();
        if let Ok(s) = CoherentStructure::from_boolean_table(n, &table) {
            out.push(s);
        }
    }
    out
}
