use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::HyperError;

/// Default largest carrier the scan enumerates exhaustively.
pub const DEFAULT_SCAN_BOUND: usize = 6;

/// Hard ceiling: subsets are enumerated as bit masks.
const MAX_SCAN_SIZE: usize = 20;

/// A finite set `{0, …, n-1}` with an arbitrary binary operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMagma")]
pub struct FiniteMagma {
    size: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawMagma {
    size: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawMagma> for FiniteMagma {
    type Error = HyperError;

    fn try_from(r: RawMagma) -> Result<Self, HyperError> {
        let m = FiniteMagma::new(r.table)?;
        if m.size != r.size {
            return Err(HyperError::InvalidMagma(format!(
                "size {} does not match a table with {} rows",
                r.size, m.size
            )));
        }
        Ok(m)
    }
}

impl FiniteMagma {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, HyperError> {
        let size = table.len();
        if size == 0 {
            return Err(HyperError::InvalidMagma("the carrier is empty".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(HyperError::InvalidMagma(format!("row {i} has {} entries", row.len())));
            }
            if let Some(v) = row.iter().find(|&&v| v >= size) {
                return Err(HyperError::InvalidMagma(format!("entry {v} in row {i} is out of range")));
            }
        }
        Ok(FiniteMagma { size, table })
    }

    /// `op(i, j) = f(i, j)` on `n` elements.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, HyperError> {
        FiniteMagma::new((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    /// Row-major digits, e.g. `"0101"` for the 2-element left-zero magma.
    pub fn from_digits(n: usize, digits: &str) -> Result<Self, HyperError> {
        let cells: Vec<usize> = digits
            .chars()
            .map(|c| c.to_digit(36).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| HyperError::InvalidMagma(format!("bad digit in {digits:?}")))?;
        if cells.len() != n * n {
            return Err(HyperError::InvalidMagma(format!("{} cells for size {n}", cells.len())));
        }
        FiniteMagma::new(cells.chunks(n).map(|r| r.to_vec()).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.op(i, i) == i).collect()
    }

    /// Relabel the carrier by the permutation `p` (`i ↦ p[i]`).
    pub fn relabel(&self, p: &[usize]) -> Result<Self, HyperError> {
        let mut inv = vec![0; self.size];
        for (i, &pi) in p.iter().enumerate() {
            inv[pi] = i;
        }
        FiniteMagma::from_fn(self.size, |a, b| p[self.op(inv[a], inv[b])])
    }

    /// Close the generators under the operation for at most `depth`
    /// rounds. The flag says whether a fixpoint was reached.
    pub fn closure(&self, generators: &[usize], depth: usize) -> (BTreeSet<usize>, bool) {
        let mut set: BTreeSet<usize> = generators.iter().copied().filter(|&g| g < self.size).collect();
        for _ in 0..=depth {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.insert(self.op(a, b));
                }
            }
            if next == set {
                return (set, true);
            }
            set = next;
        }
        (set, false)
    }

    fn is_closed(&self, mask: u32) -> bool {
        let members = members_of(mask);
        members
            .iter()
            .all(|&a| members.iter().all(|&b| mask & (1 << self.op(a, b)) != 0))
    }

    /// Every nonempty proper subset closed under the operation, as masks.
    fn sub_magma_masks(&self) -> Vec<u32> {
        let full = (1u32 << self.size) - 1;
        (1..full).filter(|&m| self.is_closed(m)).collect()
    }
}

fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub size: usize,
    pub idempotents: Vec<usize>,
    pub sub_magmas: Vec<Vec<usize>>,
    pub family: Vec<Vec<usize>>,
    pub family_size: usize,
    /// The union of the members of the family.
    pub union: Vec<usize>,
    pub is_hyperspace: bool,
    pub note: String,
}

const FINITE_NOTE: &str = "a finite carrier has finitely many sub-magmas, so the required infinite family \
     of pairwise disjoint sub-structures cannot exist and the carrier is not a hyperspace";

/// Find a largest family of proper sub-magmas that pairwise meet only in
/// idempotents.
pub fn finite_magma_scan(m: &FiniteMagma, bound: usize) -> Result<ScanReport, HyperError> {
    if m.size() > bound.min(MAX_SCAN_SIZE) {
        return Err(HyperError::TooLarge {
            size: m.size(),
            bound: bound.min(MAX_SCAN_SIZE),
        });
    }
    let idem: u32 = m.idempotents().iter().fold(0, |acc, &i| acc | (1 << i));
    let subs = m.sub_magma_masks();
    let k = subs.len();
    let adj: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i != j && subs[i] & subs[j] & !idem == 0).collect())
        .collect();
    let mut best = Vec::new();
    bron_kerbosch(&adj, Vec::new(), (0..k).collect(), Vec::new(), &mut best);
    best.sort_unstable();
    let family: Vec<Vec<usize>> = best.iter().map(|&i| members_of(subs[i])).collect();
    let union = members_of(best.iter().fold(0, |acc, &i| acc | subs[i]));
    Ok(ScanReport {
        size: m.size(),
        idempotents: m.idempotents(),
        sub_magmas: subs.iter().map(|&s| members_of(s)).collect(),
        family_size: family.len(),
        family,
        union,
        is_hyperspace: false,
        note: FINITE_NOTE.into(),
    })
}

/// Maximum clique with pivoting; keeps the first largest clique found.
fn bron_kerbosch(adj: &[Vec<bool>], r: Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, best: &mut Vec<usize>) {
    if p.is_empty() && x.is_empty() {
        if r.len() > best.len() {
            *best = r;
        }
        return;
    }
    if r.len() + p.len() <= best.len() {
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .unwrap();
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, best);
        p.retain(|&w| w != v);
        x.push(v);
    }
}
