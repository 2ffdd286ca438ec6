//! Combinatorics of an elementary tensor read cyclically: minimal blocks,
//! left-blocks, one-blocks and block-units, heights and descent.
//!
//! Positions are 1-based and cyclic, so position `n+2` is position `1`.
//! Apart from block-units (which look at the elements themselves), everything
//! here depends only on the shape `[x_1] ⊗ ⋯ ⊗ [x_{n+1}]`.

use std::collections::BTreeSet;

use crate::algebra::BandAlgebra;
use crate::band::Decomposition;
use crate::chain::ElemTensor;

/// A cyclic interval `[start, start + len - 1]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CyclicInterval {
    pub start: usize,
    pub len: usize,
}

impl CyclicInterval {
    /// Positions covered, in order.
    pub fn positions(&self, n1: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |o| wrap(start + o, n1))
    }
}

/// Reduces a 1-based position modulo `n1 = n + 1`.
#[inline]
pub fn wrap(p: usize, n1: usize) -> usize {
    (p - 1) % n1 + 1
}

#[inline]
fn prev(p: usize, n1: usize) -> usize {
    if p == 1 {
        n1
    } else {
        p - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    pub degree: usize,
    pub has_min: bool,
    /// Maximal cyclic runs of entries whose degree is the tensor's degree.
    pub minimal_blocks: Vec<CyclicInterval>,
    /// Initial points of the minimal blocks.
    pub min_initial: Vec<usize>,
    /// Left-blocks; empty when the tensor has a minimal element.
    pub left_blocks: Vec<CyclicInterval>,
    /// Initial points of the left-blocks; empty when the tensor has a minimal element.
    pub initial: Vec<usize>,
    /// Number of left-blocks, counting a tensor with a minimal element as one.
    pub j: usize,
    pub block_units: Vec<usize>,
    /// One-blocks that are not block-units and lie strictly above their successor.
    pub r_set: Vec<usize>,
    /// Positions `p+1` (`0 ≤ p ≤ n`) where `[x_p x_{p+1}]` lies below the
    /// left-block after the one containing `x_{p+1}`.
    pub dead_spots: Vec<usize>,
}

impl BlockStructure {
    /// `J` when there is a minimal element, `I` otherwise.
    pub fn initial_points(&self) -> &[usize] {
        if self.has_min {
            &self.min_initial
        } else {
            &self.initial
        }
    }

    /// Number of entries with minimal degree.
    pub fn minimal_count(&self) -> usize {
        self.minimal_blocks.iter().map(|b| b.len).sum()
    }

    pub fn is_one_block(&self, i: usize) -> bool {
        self.left_blocks.iter().any(|b| b.start == i && b.len == 1)
    }

    /// The left-block containing position `p`.
    pub fn left_block_of(&self, p: usize) -> Option<usize> {
        let n1 = self.degree + 1;
        self.left_blocks.iter().position(|b| b.positions(n1).any(|q| q == p))
    }
}

/// The tensor's degree: the meet of all entry degrees.
fn tensor_degree(dec: &Decomposition, shape: &[usize]) -> usize {
    shape.iter().copied().reduce(|a, b| dec.meet(a, b)).expect("empty tensor")
}

/// Minimal blocks of a shape, plus whether the whole tensor is one block.
pub fn minimal_blocks(dec: &Decomposition, shape: &[usize]) -> Vec<CyclicInterval> {
    let n1 = shape.len();
    let deg = tensor_degree(dec, shape);
    let minimal: Vec<bool> = shape.iter().map(|&a| a == deg).collect();
    if minimal.iter().all(|&m| m) {
        return vec![CyclicInterval { start: 1, len: n1 }];
    }
    let mut out = Vec::new();
    for p in 1..=n1 {
        if minimal[p - 1] && !minimal[prev(p, n1) - 1] {
            let mut len = 1;
            while minimal[wrap(p + len, n1) - 1] {
                len += 1;
            }
            out.push(CyclicInterval { start: p, len });
        }
    }
    out
}

/// Length of the longest cyclic interval starting at `k` whose first entry
/// lies below all of its entries (at most `n1`).
fn left_reach(dec: &Decomposition, shape: &[usize], k: usize) -> usize {
    let n1 = shape.len();
    let base = shape[k - 1];
    let mut len = 1;
    while len < n1 && dec.leq(base, shape[wrap(k + len, n1) - 1]) {
        len += 1;
    }
    len
}

/// Whether some interval `[k', k]` with `k' ≠ k` has a minimal left element.
fn covered_from_left(dec: &Decomposition, shape: &[usize], k: usize) -> bool {
    let n1 = shape.len();
    let mut kp = k;
    for _ in 1..n1 {
        kp = prev(kp, n1);
        let base = shape[kp - 1];
        let mut ok = true;
        let mut q = kp;
        loop {
            if !dec.leq(base, shape[q - 1]) {
                ok = false;
                break;
            }
            if q == k {
                break;
            }
            q = wrap(q + 1, n1);
        }
        if ok {
            return true;
        }
    }
    false
}

/// Left-block decomposition of a shape without minimal element.
///
/// Panics if the maximal intervals fail to tile the cycle, which would mean
/// the input has a minimal element.
pub fn left_blocks(dec: &Decomposition, shape: &[usize]) -> Vec<CyclicInterval> {
    let n1 = shape.len();
    let initial: Vec<usize> = (1..=n1).filter(|&k| !covered_from_left(dec, shape, k)).collect();
    let blocks: Vec<CyclicInterval> =
        initial.iter().map(|&k| CyclicInterval { start: k, len: left_reach(dec, shape, k) }).collect();
    let total: usize = blocks.iter().map(|b| b.len).sum();
    assert_eq!(total, n1, "left-blocks of {shape:?} do not tile the cycle");
    for (idx, b) in blocks.iter().enumerate() {
        let next = blocks[(idx + 1) % blocks.len()].start;
        assert_eq!(wrap(b.start + b.len, n1), next, "left-blocks of {shape:?} overlap or leave gaps");
    }
    blocks
}

pub fn block_structure(x: &[usize], alg: &BandAlgebra) -> BlockStructure {
    let dec = alg.decomposition();
    let shape = alg.shape(x);
    let n1 = x.len();
    let deg = tensor_degree(dec, &shape);
    let has_min = shape.contains(&deg);
    let minimal_blocks = if has_min { minimal_blocks(dec, &shape) } else { Vec::new() };
    let min_initial = minimal_blocks.iter().map(|b| b.start).collect();
    if has_min {
        return BlockStructure {
            degree: n1 - 1,
            has_min,
            minimal_blocks,
            min_initial,
            left_blocks: Vec::new(),
            initial: Vec::new(),
            j: 1,
            block_units: Vec::new(),
            r_set: Vec::new(),
            dead_spots: Vec::new(),
        };
    }
    let left = left_blocks(dec, &shape);
    let initial: Vec<usize> = left.iter().map(|b| b.start).collect();
    let mut block_units = Vec::new();
    let mut r_set = Vec::new();
    for b in left.iter().filter(|b| b.len == 1) {
        let i = b.start;
        let next = wrap(i + 1, n1);
        let (xi, xn) = (x[i - 1], x[next - 1]);
        if xi == alg.lcu(xi) && alg.mul(xi, xn) == xn {
            block_units.push(i);
        } else if dec.lt(shape[next - 1], shape[i - 1]) {
            r_set.push(i);
        }
    }
    let mut dead_spots = Vec::new();
    for p in 0..n1 {
        let (a, b) = if p == 0 { (n1, 1) } else { (p, p + 1) };
        let b = wrap(b, n1);
        let owner = left.iter().position(|blk| blk.positions(n1).any(|q| q == b)).expect("tiled");
        let following = &left[(owner + 1) % left.len()];
        let prod = dec.meet(shape[a - 1], shape[b - 1]);
        if dec.leq(prod, shape[following.start - 1]) {
            dead_spots.push(p + 1);
        }
    }
    BlockStructure {
        degree: n1 - 1,
        has_min,
        minimal_blocks,
        min_initial,
        j: initial.len(),
        left_blocks: left,
        initial,
        block_units,
        r_set,
        dead_spots,
    }
}

/// Number of left-blocks, with tensors that have a minimal element counting as one.
pub fn left_block_count(x: &[usize], alg: &BandAlgebra) -> usize {
    let dec = alg.decomposition();
    let shape = alg.shape(x);
    let deg = tensor_degree(dec, &shape);
    if shape.contains(&deg) {
        1
    } else {
        (1..=shape.len()).filter(|&k| !covered_from_left(dec, &shape, k)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorStats {
    pub shape: Vec<usize>,
    pub height: usize,
    pub descent: usize,
    pub j: usize,
    /// Number of block-units.
    pub r: usize,
}

/// Closure of a set of semilattice elements under the meet.
fn generated_subsemilattice(dec: &Decomposition, gens: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    loop {
        let items: Vec<usize> = set.iter().copied().collect();
        let mut grew = false;
        for &a in &items {
            for &b in &items {
                grew |= set.insert(dec.meet(a, b));
            }
        }
        if !grew {
            return items;
        }
    }
}

/// Height of each element of `t` inside `t`: the longest strictly descending chain below it.
fn heights_in(dec: &Decomposition, t: &[usize]) -> Vec<(usize, usize)> {
    // Sort by number of elements below so that every element follows all elements under it.
    let mut order: Vec<usize> = t.to_vec();
    order.sort_by_key(|&a| t.iter().filter(|&&b| dec.lt(b, a)).count());
    let mut h: Vec<(usize, usize)> = Vec::with_capacity(t.len());
    for &a in &order {
        let best = h.iter().filter(|&&(b, _)| dec.lt(b, a)).map(|&(_, hb)| hb + 1).max().unwrap_or(0);
        h.push((a, best));
    }
    h
}

/// `Σ_i height_{L(x)}([x_i])`.
pub fn height(x: &[usize], alg: &BandAlgebra) -> usize {
    let dec = alg.decomposition();
    let shape = alg.shape(x);
    let t = generated_subsemilattice(dec, &shape);
    let h = heights_in(dec, &t);
    shape.iter().map(|a| h.iter().find(|(b, _)| b == a).expect("generator in closure").1).sum()
}

/// Number of consecutive strict descents starting at position `i`.
pub fn descent_at(shape: &[usize], dec: &Decomposition, i: usize) -> usize {
    let n1 = shape.len();
    let mut e = 0;
    let mut p = i;
    while e < n1 && dec.lt(shape[wrap(p + 1, n1) - 1], shape[p - 1]) {
        e += 1;
        p = wrap(p + 1, n1);
    }
    e
}

pub fn tensor_stats(x: &[usize], alg: &BandAlgebra) -> TensorStats {
    let bs = block_structure(x, alg);
    let shape = alg.shape(x);
    let dec = alg.decomposition();
    let descent = bs.r_set.iter().map(|&i| descent_at(&shape, dec, i)).sum();
    TensorStats { height: height(x, alg), descent, j: bs.j, r: bs.block_units.len(), shape }
}

/// The tensor obtained from `x` by putting `lcu(x_i)` at position `i` and
/// `x_i x_{i+1}` at position `i+1` (cyclically, in place).
pub fn pinch_unit(x: &[usize], i: usize, alg: &BandAlgebra) -> ElemTensor {
    let n1 = x.len();
    let next = wrap(i + 1, n1);
    let mut v = x.to_vec();
    v[i - 1] = alg.lcu(x[i - 1]);
    v[next - 1] = alg.mul(x[i - 1], x[next - 1]);
    ElemTensor::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{make_free_semilattice, make_rectangular};

    // Elements of the free semilattice on k generators are indexed by bitmask - 1.
    fn set(gens: &[usize]) -> usize {
        gens.iter().fold(0usize, |m, g| m | 1 << (g - 1)) - 1
    }

    fn fs4() -> BandAlgebra {
        BandAlgebra::new(make_free_semilattice(4).unwrap()).unwrap()
    }

    fn worked_example() -> Vec<usize> {
        vec![set(&[1, 2]), set(&[2]), set(&[1, 2, 3]), set(&[1, 2]), set(&[3, 4]), set(&[1]), set(&[1, 3]), set(&[3])]
    }

    #[test]
    fn worked_example_left_blocks() {
        let alg = fs4();
        let bs = block_structure(&worked_example(), &alg);
        assert!(!bs.has_min);
        assert_eq!(bs.initial, vec![1, 3, 5, 6, 7]);
        assert_eq!(bs.j, 5);
        let lens: Vec<usize> = bs.left_blocks.iter().map(|b| b.len).collect();
        assert_eq!(lens, vec![2, 2, 1, 1, 2]);
    }

    #[test]
    fn constant_tensor_is_one_minimal_block() {
        let alg = fs4();
        let e = set(&[2]);
        let bs = block_structure(&[e, e, e], &alg);
        assert!(bs.has_min);
        assert_eq!(bs.minimal_blocks, vec![CyclicInterval { start: 1, len: 3 }]);
        assert_eq!(bs.initial_points(), &[1]);
        assert_eq!(bs.j, 1);
    }

    #[test]
    fn wrapping_minimal_block() {
        let alg = fs4();
        let top = set(&[1, 2]);
        let (a, b) = (set(&[1]), set(&[2]));
        let bs = block_structure(&[top, a, b, top], &alg);
        assert_eq!(bs.minimal_blocks, vec![CyclicInterval { start: 4, len: 2 }]);
        assert_eq!(bs.min_initial, vec![4]);
    }

    #[test]
    fn rectangular_tensors_have_height_zero() {
        let alg = BandAlgebra::new(make_rectangular(2, 2).unwrap()).unwrap();
        let x = [0, 3, 1, 2];
        assert_eq!(height(&x, &alg), 0);
        assert!(block_structure(&x, &alg).has_min);
    }

    #[test]
    fn descent_counts_strict_runs() {
        let alg = fs4();
        let dec = alg.decomposition();
        // larger subsets sit lower in the order
        let shape = alg.shape(&[set(&[1]), set(&[1, 2]), set(&[1, 2, 3]), set(&[4])]);
        assert_eq!(descent_at(&shape, dec, 1), 2);
        assert_eq!(descent_at(&shape, dec, 2), 1);
        assert_eq!(descent_at(&shape, dec, 3), 0);
    }

    #[test]
    fn pinch_wraps_at_the_end() {
        let alg = fs4();
        let x = [set(&[1]), set(&[2]), set(&[3])];
        let y = pinch_unit(&x, 3, &alg);
        assert_eq!(y.entries(), &[set(&[1, 3]), set(&[2]), set(&[3])]);
    }
}
