//! Intersection semilattices, finite posets and Möbius functions.

use std::collections::{BTreeSet, HashSet};

use crate::arrangement::{Arrangement, CanonicalSubspace, Space};
use crate::exec::{self, Strategy};
use crate::{Error, Result};

/// A finite poset given by its strict order relation. `labels[i]` records
/// the element of the parent structure that local index `i` stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<usize>,
    less: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds a poset from a strict order matrix; labels are `0..n`.
    pub fn new(less: Vec<Vec<bool>>) -> Self {
        let labels = (0..less.len()).collect();
        Poset { labels, less }
    }

    pub fn empty() -> Self {
        Poset { labels: Vec::new(), less: Vec::new() }
    }

    /// An antichain on `n` elements.
    pub fn antichain(n: usize) -> Self {
        Poset::new(vec![vec![false; n]; n])
    }

    /// A chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Poset::new((0..n).map(|i| (0..n).map(|j| i < j).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    /// Induced subposet on the given local indices, keeping parent labels.
    pub fn induced(&self, keep: &[usize]) -> Poset {
        Poset {
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            less: keep.iter().map(|&i| keep.iter().map(|&j| self.less[i][j]).collect()).collect(),
        }
    }

    /// Cover relations `(i, j)` with `i < j` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less[i][j] && !(0..n).any(|k| self.less[i][k] && self.less[k][j]) {
                    edges.push((i, j));
                }
            }
        }
        edges
    }
}

/// The intersection semilattice of an arrangement, ordered by reverse
/// inclusion. Element 0 is the bottom `0̂`, the whole ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilattice {
    space: Space,
    elements: Vec<CanonicalSubspace>,
    dims: Vec<usize>,
    leq: Vec<Vec<bool>>,
    atoms: Vec<usize>,
}

pub fn build_lattice(a: &Arrangement) -> Semilattice {
    build_lattice_with(a, Strategy::default())
}

/// Intersection closure of the arrangement's subspaces.
///
/// The frontier of new elements is intersected with every generator until
/// nothing new appears. Elements are sorted by decreasing dimension and then
/// by canonical equations, so the result does not depend on input order.
/// Subspaces that are empty (possible after reduction mod p) are skipped.
pub fn build_lattice_with(a: &Arrangement, strategy: Strategy) -> Semilattice {
    let space = a.space();
    let whole = space.whole();
    let mut generators: Vec<CanonicalSubspace> = Vec::new();
    let mut seen: HashSet<CanonicalSubspace> = HashSet::new();
    seen.insert(whole.clone());
    for c in a.canonical_subspaces().into_iter().flatten() {
        if seen.insert(c.clone()) {
            generators.push(c);
        }
    }
    let mut frontier = generators.clone();
    while !frontier.is_empty() {
        let products: Vec<Vec<CanonicalSubspace>> = exec::map(strategy, &frontier, |x| {
            generators.iter().filter_map(|g| space.intersect(&[x, g]).expect("same space")).collect()
        });
        let mut next = Vec::new();
        for c in products.into_iter().flatten() {
            if seen.insert(c.clone()) {
                next.push(c);
            }
        }
        frontier = next;
    }
    let mut elements: Vec<CanonicalSubspace> = seen.into_iter().collect();
    elements.sort_by(|x, y| y.dim().cmp(&x.dim()).then_with(|| x.equations().cmp(y.equations())));
    let dims: Vec<usize> = elements.iter().map(|e| e.dim()).collect();
    let leq = exec::map_range(strategy, 0..elements.len(), |i| {
        (0..elements.len()).map(|j| i == j || (j > i && space.contains(&elements[i], &elements[j]))).collect()
    });
    let mut lattice = Semilattice { space, elements, dims, leq, atoms: Vec::new() };
    lattice.atoms = (1..lattice.len()).filter(|&x| (1..x).all(|z| !lattice.leq[z][x])).collect();
    lattice
}

impl Semilattice {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Never true: `0̂` is always present.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CanonicalSubspace] {
        &self.elements
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `x ≤ y`, i.e. `y ⊆ x` as point sets.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_projective(&self) -> bool {
        self.space.ambient.is_projective()
    }

    /// Whether every element contains the origin (affine lattices only).
    pub fn is_central(&self) -> bool {
        !self.is_projective() && self.elements.iter().all(|e| e.is_central())
    }

    /// Largest dimension among elements other than `0̂`.
    pub fn max_dim(&self) -> Option<usize> {
        self.dims.iter().skip(1).max().copied()
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.space.ambient.dim()
    }

    /// Index of an element equal to `c`, if any.
    pub fn position(&self, c: &CanonicalSubspace) -> Option<usize> {
        self.elements.iter().position(|e| e == c)
    }

    /// The whole lattice as a poset.
    pub fn poset(&self) -> Poset {
        let n = self.len();
        Poset::new((0..n).map(|i| (0..n).map(|j| self.less(i, j)).collect()).collect())
    }

    fn subposet(&self, keep: &[usize]) -> Poset {
        self.poset().induced(keep)
    }

    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.poset().hasse_edges()
    }

    pub fn mobius(&self) -> MobiusTable {
        mobius(self)
    }

    /// `L^{≥j}`: elements other than `0̂` of dimension at least `j`.
    pub fn truncation(&self, j: i64) -> Poset {
        let keep: Vec<usize> = (1..self.len()).filter(|&x| self.dims[x] as i64 >= j).collect();
        self.subposet(&keep)
    }

    /// The open interval `(x, y)`; empty unless `x < y`.
    pub fn open_interval(&self, x: usize, y: usize) -> Poset {
        let keep: Vec<usize> = (0..self.len()).filter(|&z| self.less(x, z) && self.less(z, y)).collect();
        self.subposet(&keep)
    }

    /// The open interval `(0̂, x)`.
    pub fn open_interval_below(&self, x: usize) -> Result<Poset> {
        if x == 0 || x >= self.len() {
            return Err(Error::BadElement(x));
        }
        Ok(self.open_interval(0, x))
    }

    /// Every element `x ≠ 0̂` of positive dimension lies below some element of
    /// dimension `dim(x) - 1`.
    pub fn is_hereditary(&self) -> bool {
        (1..self.len())
            .filter(|&x| self.dims[x] > 0)
            .all(|x| (0..self.len()).any(|y| self.less(x, y) && self.dims[y] + 1 == self.dims[x]))
    }

    /// Lengths of the maximal chains `0̂ = x_0 < ... < x_r`, as a set.
    ///
    /// Depth-first over the Hasse diagram, memoizing the set of lengths
    /// reachable above each element.
    pub fn maximal_chain_lengths(&self) -> BTreeSet<usize> {
        let n = self.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, j) in self.hasse_edges() {
            up[i].push(j);
        }
        // Indices are a linear extension, so a reverse sweep visits covers first.
        let mut above: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for x in (0..n).rev() {
            above[x] = if up[x].is_empty() {
                BTreeSet::from([0])
            } else {
                up[x].iter().flat_map(|&y| above[y].iter().map(|l| l + 1)).collect()
            };
        }
        std::mem::take(&mut above[0])
    }

    /// All maximal chain lengths agree mod `m`.
    pub fn is_mod_m_pure(&self, m: usize) -> bool {
        assert!(m >= 1, "m must be positive");
        let residues: BTreeSet<usize> = self.maximal_chain_lengths().iter().map(|l| l % m).collect();
        residues.len() <= 1
    }
}

/// `μ(x, y)` for all pairs; zero where `x ≰ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    mu: Vec<Vec<i64>>,
}

impl MobiusTable {
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.mu[x][y]
    }

    /// The row `μ(0̂, ·)`.
    pub fn bottom_row(&self) -> &[i64] {
        &self.mu[0]
    }
}

/// Möbius function by `μ(x,y) = -Σ_{x≤z<y} μ(x,z)`.
pub fn mobius(l: &Semilattice) -> MobiusTable {
    let n = l.len();
    let mut mu = vec![vec![0i64; n]; n];
    for (x, row) in mu.iter_mut().enumerate() {
        row[x] = 1;
        for y in x + 1..n {
            if l.less(x, y) {
                let below: i64 = (x..y).filter(|&z| l.leq(x, z) && l.leq(z, y)).map(|z| row[z]).sum();
                row[y] = -below;
            }
        }
    }
    MobiusTable { mu }
}
