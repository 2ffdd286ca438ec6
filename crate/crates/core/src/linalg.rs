//! Sparse exact linear algebra: rank, solve and kernel bases.
//!
//! Elimination keeps a list of pivot rows in insertion order. Each pivot row
//! is normalized to `1` at its pivot column and is free of the pivot columns
//! of all earlier pivots, so reducing a new row against pivots in insertion
//! order terminates and yields a triangular system for back-substitution.
//! The pivot inside a row is the entry with the smallest
//! [`Scalar::pivot_cost`], which keeps rational entries short.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

type SparseRow<F> = Vec<(usize, F)>;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<F>>,
}

/// Result of [`SparseMatrix::solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome<T> {
    Solved(T),
    /// A vector `y` with `yᵀA = 0` and `yᵀb ≠ 0`.
    Infeasible { certificate: T },
}

impl<F: Scalar> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.data[i].push((i, F::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, F)>) -> Result<Self> {
        let mut maps: Vec<std::collections::BTreeMap<usize, F>> = vec![Default::default(); rows];
        for (r, c, v) in triplets {
            if r >= rows {
                return Err(Error::IndexOutOfRange { what: "row", index: r, lo: 0, hi: rows.saturating_sub(1) });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange { what: "column", index: c, lo: 0, hi: cols.saturating_sub(1) });
            }
            let e = maps[r].entry(c).or_insert_with(F::zero);
            *e += v;
        }
        let data = maps.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_negligible()).collect()).collect();
        Ok(SparseMatrix { rows, cols, data })
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("ragged dense matrix: row of length {} vs {cols}", bad.len())));
        }
        let triplets =
            rows.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(rows.len(), cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r].iter().find(|(j, _)| *j == c).map_or_else(F::zero, |(_, v)| v.clone())
    }

    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.data[r]
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow<F>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul_vec(&self, x: &[F]) -> Result<Vec<F>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (j, v) in row {
                    acc += v.clone() * x[*j].clone();
                }
                acc
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        Echelon::build(self, None).pivots.len()
    }

    /// Some `x` with `A x = b`, or a certificate of infeasibility.
    pub fn solve(&self, b: &[F]) -> Result<SolveOutcome<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let ech = Echelon::build(self, Some(b));
        if ech.inconsistent {
            let kernel = self.transpose().kernel_basis();
            let certificate = kernel
                .into_iter()
                .find(|y| {
                    let mut acc = F::zero();
                    for (yi, bi) in y.iter().zip(b) {
                        acc += yi.clone() * bi.clone();
                    }
                    !acc.is_negligible()
                })
                .ok_or_else(|| Error::Internal("inconsistent system without a left-kernel certificate".into()))?;
            return Ok(SolveOutcome::Infeasible { certificate });
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, (col, row)) in ech.pivots.iter().enumerate().rev() {
            let mut v = ech.rhs[k].clone();
            for (c, a) in row {
                if c != col {
                    v -= a.clone() * x[*c].clone();
                }
            }
            x[*col] = v;
        }
        Ok(SolveOutcome::Solved(x))
    }

    /// A basis of `{x : A x = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let ech = Echelon::build(self, None);
        let mut is_pivot = vec![false; self.cols];
        for (c, _) in &ech.pivots {
            is_pivot[*c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![F::zero(); self.cols];
            x[free] = F::one();
            for (col, row) in ech.pivots.iter().rev() {
                let mut v = F::zero();
                for (c, a) in row {
                    if c != col {
                        v -= a.clone() * x[*c].clone();
                    }
                }
                x[*col] = v;
            }
            basis.push(x);
        }
        basis
    }
}

/// `row += factor * other`, both sorted by column.
fn axpy<F: Scalar>(row: &SparseRow<F>, factor: &F, other: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, factor.clone() * other[j].1.clone()));
            j += 1;
        } else {
            let v = row[i].1.clone() + factor.clone() * other[j].1.clone();
            if !v.is_negligible() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct Echelon<F> {
    pivots: Vec<(usize, SparseRow<F>)>,
    rhs: Vec<F>,
    inconsistent: bool,
}

impl<F: Scalar> Echelon<F> {
    fn build(m: &SparseMatrix<F>, b: Option<&[F]>) -> Self {
        let mut order: Vec<usize> = (0..m.rows).collect();
        order.sort_by_key(|&r| (m.data[r].len(), r));
        let mut pivots: Vec<(usize, SparseRow<F>)> = Vec::new();
        let mut rhs: Vec<F> = Vec::new();
        let mut pivot_index: HashMap<usize, usize> = HashMap::new();
        let mut inconsistent = false;
        for r in order {
            let mut row = m.data[r].clone();
            let mut rb = b.map_or_else(F::zero, |b| b[r].clone());
            let mut heap: BinaryHeap<Reverse<usize>> =
                row.iter().filter_map(|(c, _)| pivot_index.get(c).map(|&k| Reverse(k))).collect();
            while let Some(Reverse(k)) = heap.pop() {
                let col = pivots[k].0;
                let Some(coef) = row.iter().find(|(c, _)| *c == col).map(|(_, v)| v.clone()) else {
                    continue;
                };
                let factor = -coef;
                row = axpy(&row, &factor, &pivots[k].1);
                rb += factor * rhs[k].clone();
                for (c, _) in &pivots[k].1 {
                    if let Some(&k2) = pivot_index.get(c) {
                        if k2 > k {
                            heap.push(Reverse(k2));
                        }
                    }
                }
            }
            if row.is_empty() {
                if !rb.is_negligible() {
                    inconsistent = true;
                }
                continue;
            }
            let (pc, pv) = row
                .iter()
                .min_by_key(|(c, v)| (v.pivot_cost(), *c))
                .map(|(c, v)| (*c, v.clone()))
                .expect("nonempty row");
            let inv = F::one() / pv;
            for (_, v) in row.iter_mut() {
                *v *= inv.clone();
            }
            rb *= inv;
            pivot_index.insert(pc, pivots.len());
            pivots.push((pc, row));
            rhs.push(rb);
        }
        Echelon { pivots, rhs, inconsistent }
    }
}
