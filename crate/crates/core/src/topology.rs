//! Order complexes and their rational homology.

use std::collections::HashMap;

use crate::exec::{self, Strategy};
use crate::lattice::{Poset, Semilattice};
use crate::linalg::{sparse_rank, SparseRow};

/// The simplicial complex of all chains of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    /// Parent labels of the poset's elements.
    vertices: Vec<usize>,
    /// `faces[k]` lists the k-simplices as increasing chains of local indices.
    faces: Vec<Vec<Vec<usize>>>,
}

/// Enumerates every chain by depth-first extension along the strict order.
/// Faces of each dimension come out in lexicographic order.
pub fn order_complex(p: &Poset) -> OrderComplex {
    let n = p.len();
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|v| vec![v]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().expect("chains are nonempty");
        for w in (0..n).rev() {
            if p.less(top, w) {
                let mut next = chain.clone();
                next.push(w);
                stack.push(next);
            }
        }
        let k = chain.len() - 1;
        if faces.len() <= k {
            faces.resize(k + 1, Vec::new());
        }
        faces[k].push(chain);
    }
    for level in &mut faces {
        level.sort();
    }
    OrderComplex { vertices: p.labels().to_vec(), faces }
}

impl OrderComplex {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the complex; -1 when empty.
    pub fn dim(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    /// k-simplices as chains of local vertex indices.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map_or(&[], |f| f.as_slice())
    }

    /// Number of faces in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Maximal chains.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (k, level) in self.faces.iter().enumerate() {
            let bigger = self.faces(k + 1);
            for f in level {
                let covered = bigger.iter().any(|g| f.iter().all(|v| g.contains(v)));
                if !covered {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// Boundary map `∂_k` as sparse rows, one per k-face, over the
    /// (k-1)-faces. Orientation follows the increasing chain order.
    pub fn boundary(&self, k: usize) -> Vec<SparseRow> {
        if k == 0 {
            return self.faces(0).iter().map(|_| vec![(0, 1)]).collect();
        }
        let index: HashMap<&[usize], usize> =
            self.faces(k - 1).iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        self.faces(k)
            .iter()
            .map(|f| {
                let mut row: SparseRow = (0..f.len())
                    .map(|drop| {
                        let face: Vec<usize> =
                            f.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        (index[face.as_slice()], sign)
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect()
    }
}

/// Reduced Betti numbers over Q, indexed from degree -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector {
    reduced: Vec<u64>,
}

impl BettiVector {
    /// From reduced Betti numbers listed from degree -1 upward.
    pub fn from_reduced(mut reduced: Vec<u64>) -> Self {
        while reduced.len() > 1 && reduced.last() == Some(&0) {
            reduced.pop();
        }
        if reduced.is_empty() {
            reduced.push(0);
        }
        BettiVector { reduced }
    }

    /// The empty complex: only `β̃_{-1} = 1`.
    pub fn empty_complex() -> Self {
        BettiVector { reduced: vec![1] }
    }

    /// `β̃_k`, zero outside the stored range.
    pub fn reduced(&self, k: i64) -> u64 {
        if k < -1 {
            return 0;
        }
        self.reduced.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// Ordinary Betti number `β_k`; `β_0 = β̃_0 + 1` for nonempty complexes.
    pub fn unreduced(&self, k: i64) -> u64 {
        match k {
            0 if !self.is_empty_complex() => self.reduced(0) + 1,
            k if k < 0 => 0,
            k => self.reduced(k),
        }
    }

    pub fn is_empty_complex(&self) -> bool {
        self.reduced[0] == 1
    }

    /// Highest degree with a nonzero entry, -2 if there is none.
    pub fn top_degree(&self) -> i64 {
        (0..self.reduced.len()).rev().find(|&i| self.reduced[i] != 0).map_or(-2, |i| i as i64 - 1)
    }

    /// `(degree, β̃)` for every nonzero entry.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.reduced.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, &b)| (i as i64 - 1, b))
    }

    /// `Σ (-1)^k β̃_k`.
    pub fn euler_reduced(&self) -> i64 {
        self.nonzero().map(|(k, b)| if k.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

/// `β̃_k = f_k - rank ∂_k - rank ∂_{k+1}` over the augmented chain complex.
pub fn reduced_betti(k: &OrderComplex) -> BettiVector {
    if k.is_empty() {
        return BettiVector::empty_complex();
    }
    let top = k.faces.len();
    // ranks[i] = rank of ∂_i for i = 0..=top; ∂_0 is the augmentation.
    let ranks: Vec<usize> = (0..=top).map(|i| if i == top { 0 } else { sparse_rank(&k.boundary(i)) }).collect();
    let mut reduced = vec![0u64];
    for i in 0..top {
        reduced.push((k.faces[i].len() - ranks[i] - ranks[i + 1]) as u64);
    }
    BettiVector::from_reduced(reduced)
}

/// `χ̃ = Σ_F (-1)^{dim F} - 1`.
pub fn euler_char_reduced(k: &OrderComplex) -> i64 {
    k.faces.iter().enumerate().map(|(d, f)| if d % 2 == 0 { f.len() as i64 } else { -(f.len() as i64) }).sum::<i64>()
        - 1
}

/// Reduced Betti numbers of `Δ(P)`.
pub fn poset_betti(p: &Poset) -> BettiVector {
    reduced_betti(&order_complex(p))
}

/// An interval of `L ∪ {1̂}`; `None` as the upper end stands for `1̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: usize,
    pub upper: Option<usize>,
}

/// Outcome of the Cohen-Macaulay test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmReport {
    pub cohen_macaulay: bool,
    /// First interval, in index order, with homology below its top dimension.
    pub failing: Option<Interval>,
}

pub fn is_rationally_cm(l: &Semilattice) -> CmReport {
    is_rationally_cm_with(l, Strategy::default())
}

/// Checks every open interval `(x, y)` of `L ∪ {1̂}`, including `(0̂, 1̂)`,
/// for vanishing reduced homology below the dimension of its order complex.
pub fn is_rationally_cm_with(l: &Semilattice, strategy: Strategy) -> CmReport {
    let n = l.len();
    let mut intervals = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if l.less(x, y) {
                intervals.push(Interval { lower: x, upper: Some(y) });
            }
        }
        intervals.push(Interval { lower: x, upper: None });
    }
    let ok = exec::map(strategy, &intervals, |iv| {
        let p = match iv.upper {
            Some(y) => l.open_interval(iv.lower, y),
            None => {
                let above: Vec<usize> = (0..n).filter(|&z| l.less(iv.lower, z)).collect();
                l.poset().induced(&above)
            }
        };
        let k = order_complex(&p);
        let b = reduced_betti(&k);
        let ok = b.nonzero().all(|(deg, _)| deg >= k.dim());
        ok
    });
    let failing = intervals.iter().zip(&ok).find(|(_, ok)| !**ok).map(|(iv, _)| *iv);
    CmReport { cohen_macaulay: failing.is_none(), failing }
}
