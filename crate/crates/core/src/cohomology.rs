//! Brute-force dimensions of Hochschild and cyclic cohomology, trace cocycles
//! and exactness of the reduced complex, all by exact rank computation over
//! the full (co)chain spaces.
//!
//! Cochain matrices are assembled from face maps, i.e. from the adjoint of the
//! boundary; the pipeline in [`crate::normalize`] uses the explicit coboundary
//! formula instead, so the two check each other.

use std::collections::HashMap;

use crate::algebra::BandAlgebra;
use crate::chain::{coboundary, coboundary_adjoint, for_each_tuple, Chain, Cochain, ElemTensor};
use crate::error::{Error, Result};
use crate::linalg::{SolveOutcome, SparseMatrix};
use crate::scalar::{sign, Scalar};

/// Default cap on the number of stored matrix entries.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "BANDCOH_BUDGET";

/// The budget from [`BUDGET_ENV`], or the default if unset or unparsable.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&b| b > 0).unwrap_or(DEFAULT_BUDGET)
}

fn pow(base: usize, exp: usize) -> u128 {
    (base as u128).saturating_pow(exp as u32)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Lexicographic index of a tuple in `S^len`.
pub fn tuple_index(t: &[usize], size: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * size + x)
}

/// Matrix of `δ_n : C^n → C^{n+1}` in the tuple basis (rows `S^{n+2}`, columns `S^{n+1}`).
pub fn coboundary_matrix<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<SparseMatrix<F>> {
    let s = alg.size();
    check_budget(pow(s, n + 2).saturating_mul(n as u128 + 2), budget)?;
    let rows = pow(s, n + 2) as usize;
    let cols = pow(s, n + 1) as usize;
    let mut triplets = Vec::with_capacity(rows * (n + 2));
    let mut r = 0;
    for_each_tuple(s, n + 2, |a| {
        let t = ElemTensor::from(a);
        for i in 0..=n + 1 {
            triplets.push((r, tuple_index(&t.face_unchecked(alg, i), s), sign::<F>(i)));
        }
        r += 1;
    });
    SparseMatrix::from_triplets(rows, cols, triplets)
}

/// Matrix of the reduced boundary `C_n → C_{n-1}` (rows `S^n`, columns `S^{n+1}`), `n ≥ 1`.
pub fn reduced_boundary_matrix<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<SparseMatrix<F>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let s = alg.size();
    check_budget(pow(s, n + 1).saturating_mul(n as u128), budget)?;
    let rows = pow(s, n) as usize;
    let cols = pow(s, n + 1) as usize;
    let mut triplets = Vec::with_capacity(cols * n);
    let mut c = 0;
    for_each_tuple(s, n + 1, |x| {
        let t = ElemTensor::from(x);
        for i in 1..=n {
            triplets.push((tuple_index(&t.face_unchecked(alg, i), s), c, sign::<F>(i)));
        }
        c += 1;
    });
    SparseMatrix::from_triplets(rows, cols, triplets)
}

fn rank_either_way<F: Scalar>(m: &SparseMatrix<F>) -> usize {
    if m.rows() <= m.cols() {
        m.rank()
    } else {
        m.transpose().rank()
    }
}

/// `dim HH^n = |S|^{n+1} - rank δ_n - rank δ_{n-1}`.
pub fn hh_dim<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<usize> {
    let dim = pow(alg.size(), n + 1) as usize;
    let r_n = rank_either_way(&coboundary_matrix::<F>(alg, n, budget)?);
    let r_prev = if n == 0 { 0 } else { rank_either_way(&coboundary_matrix::<F>(alg, n - 1, budget)?) };
    Ok(dim - r_n - r_prev)
}

/// Rotation class of a tuple: the lexicographically least rotation `rep`,
/// the shift `k` with `t = rot^k(rep)`, and the orbit size.
pub fn orbit_rep(t: &[usize]) -> (Vec<usize>, usize, usize) {
    let len = t.len();
    let mut best = t.to_vec();
    let mut best_k = 0;
    let mut period = len;
    let mut cur = t.to_vec();
    for j in 1..=len {
        cur.rotate_left(1);
        if cur == t && period == len {
            period = j;
        }
        if j < len && cur < best {
            best = cur.clone();
            best_k = j;
        }
    }
    (best, best_k % period, period)
}

/// Whether a degree-`n` orbit of size `m` carries a nonzero cyclic value.
#[inline]
pub fn admissible(n: usize, m: usize) -> bool {
    (n * m).is_multiple_of(2)
}

/// Basis of the cyclic cochains of degree `n`: one vector per admissible
/// orbit, with value `(-1)^{nk}` at `rot^k(rep)`.
#[derive(Debug, Clone)]
pub struct CyclicBasis {
    pub degree: usize,
    pub reps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl CyclicBasis {
    pub fn new(size: usize, n: usize) -> Self {
        Self::over(&(0..size).collect::<Vec<_>>(), n)
    }

    /// The basis for cochains supported on tuples drawn from `elems` (sorted ascending).
    pub fn over(elems: &[usize], n: usize) -> Self {
        let mut reps = Vec::new();
        let mut t = vec![0; n + 1];
        for_each_tuple(elems.len(), n + 1, |local| {
            for (slot, &i) in t.iter_mut().zip(local) {
                *slot = elems[i];
            }
            let (rep, _, m) = orbit_rep(&t);
            if rep == t && admissible(n, m) {
                reps.push(rep);
            }
        });
        let index = reps.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        CyclicBasis { degree: n, reps, index }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `(basis index, sign)` of the basis vector that is nonzero at `t`, if any.
    pub fn locate<F: Scalar>(&self, t: &[usize]) -> Option<(usize, F)> {
        let (rep, k, _) = orbit_rep(t);
        self.index.get(&rep).map(|&i| (i, sign(self.degree * k)))
    }

    /// Coordinates of a cyclic cochain.
    pub fn coordinates<F: Scalar>(&self, psi: &Cochain<F>) -> Vec<F> {
        self.reps.iter().map(|r| psi.value(r)).collect()
    }

    /// The cochain with the given coordinates.
    pub fn cochain<F: Scalar>(&self, coords: &[F]) -> Cochain<F> {
        let mut out = Cochain::zero(self.degree);
        for (rep, c) in self.reps.iter().zip(coords) {
            if c.is_negligible() {
                continue;
            }
            let mut cur = rep.clone();
            for k in 0..rep.len() {
                out.set(ElemTensor::new(cur.clone()), sign::<F>(self.degree * k) * c.clone());
                cur.rotate_right(1);
                if &cur == rep {
                    break;
                }
            }
        }
        out
    }
}

/// `δ` restricted to cyclic cochains, in orbit bases (rows: degree `n+1`, columns: degree `n`).
pub fn cyclic_coboundary_matrix<F: Scalar>(
    alg: &BandAlgebra,
    n: usize,
    budget: u128,
) -> Result<(SparseMatrix<F>, CyclicBasis, CyclicBasis)> {
    let s = alg.size();
    check_budget(pow(s, n + 2).saturating_mul(n as u128 + 2), budget)?;
    let src = CyclicBasis::new(s, n);
    let dst = CyclicBasis::new(s, n + 1);
    let mut triplets = Vec::new();
    for (r, rep) in dst.reps.iter().enumerate() {
        let t = ElemTensor::new(rep.clone());
        for i in 0..=n + 1 {
            if let Some((c, v)) = src.locate::<F>(&t.face_unchecked(alg, i)) {
                triplets.push((r, c, sign::<F>(i) * v));
            }
        }
    }
    let m = SparseMatrix::from_triplets(dst.len(), src.len(), triplets)?;
    Ok((m, src, dst))
}

/// `dim HC^n` from the cyclic subcomplex.
pub fn hc_dim<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<usize> {
    let (m_n, src, _) = cyclic_coboundary_matrix::<F>(alg, n, budget)?;
    let r_prev = if n == 0 { 0 } else { rank_either_way(&cyclic_coboundary_matrix::<F>(alg, n - 1, budget)?.0) };
    Ok(src.len() - rank_either_way(&m_n) - r_prev)
}

/// Dimension of the cyclic cochains of degree `n`, by counting admissible orbits.
pub fn cyclic_dim_by_orbits(size: usize, n: usize) -> usize {
    CyclicBasis::new(size, n).len()
}

/// Dimension of the cyclic cochains of degree `n`, as the rank of the
/// averaging projector `(n+1)^{-1} Σ_k t^k`.
pub fn cyclic_dim_by_projector<F: Scalar>(size: usize, n: usize, budget: u128) -> Result<usize> {
    check_budget(pow(size, n + 1).saturating_mul(n as u128 + 1), budget)?;
    let dim = pow(size, n + 1) as usize;
    let w = F::recip_i64(n as i64 + 1);
    let mut triplets = Vec::with_capacity(dim * (n + 1));
    let mut r = 0;
    for_each_tuple(size, n + 1, |x| {
        let mut cur = x.to_vec();
        for k in 0..=n {
            triplets.push((r, tuple_index(&cur, size), sign::<F>(n * k) * w.clone()));
            cur.rotate_right(1);
        }
        r += 1;
    });
    Ok(SparseMatrix::from_triplets(dim, dim, triplets)?.rank())
}

/// Indicator functionals of the rectangular components, in component order.
pub fn trace_basis<F: Scalar>(alg: &BandAlgebra) -> Vec<Cochain<F>> {
    alg.decomposition()
        .components()
        .iter()
        .map(|comp| Cochain::from_values(0, comp.iter().map(|&x| (ElemTensor::new(vec![x]), F::one()))))
        .collect()
}

/// `τ^{(n)}(a_1, …, a_{n+1}) = τ(a_1 ⋯ a_{n+1})` for a trace `τ` and even `n`.
pub fn trace_cocycle<F: Scalar>(tau: &Cochain<F>, n: usize, alg: &BandAlgebra) -> Result<Cochain<F>> {
    if tau.degree() != 0 {
        return Err(Error::DegreeMismatch { expected: 0, got: tau.degree() });
    }
    if n % 2 == 1 {
        return Err(Error::OddTraceDegree(n));
    }
    tau.check_in(alg)?;
    if let Some((t, _)) = coboundary(tau, alg).iter().next() {
        return Err(Error::NotACocycle { tuple: t.entries().to_vec() });
    }
    if n == 0 {
        return Ok(tau.clone());
    }
    let mut out = Cochain::zero(n);
    for_each_tuple(alg.size(), n + 1, |x| {
        let v = tau.value(&[alg.band().product(x)]);
        if !v.is_negligible() {
            out.set(ElemTensor::from(x), v);
        }
    });
    if let Some(t) = out.first_non_cyclic() {
        return Err(Error::Internal(format!("trace cocycle is not cyclic at {t:?}")));
    }
    if let Some((t, _)) = coboundary_adjoint(&out, alg).iter().next() {
        return Err(Error::Internal(format!("trace cocycle is not closed at {t:?}")));
    }
    Ok(out)
}

/// Kernel and image dimensions of the reduced boundary at degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactnessDims {
    pub zr: usize,
    pub br: usize,
}

impl ExactnessDims {
    pub fn is_exact(&self) -> bool {
        self.zr == self.br
    }
}

/// `dim ZR_n` and `dim BR_n` for the reduced complex.
pub fn reduced_exactness<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<ExactnessDims> {
    let dim = pow(alg.size(), n + 1) as usize;
    let zr = if n == 0 { dim } else { dim - rank_either_way(&reduced_boundary_matrix::<F>(alg, n, budget)?) };
    let br = rank_either_way(&reduced_boundary_matrix::<F>(alg, n + 1, budget)?);
    Ok(ExactnessDims { zr, br })
}

/// A basis of the reduced cycles of degree `n ≥ 1`, as chains.
pub fn reduced_cycle_basis<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<Vec<Chain<F>>> {
    let m = reduced_boundary_matrix::<F>(alg, n, budget)?;
    let s = alg.size();
    let mut tuples = Vec::with_capacity(m.cols());
    for_each_tuple(s, n + 1, |x| tuples.push(ElemTensor::from(x)));
    Ok(m
        .kernel_basis()
        .into_iter()
        .map(|v| Chain::from_terms(n, tuples.iter().cloned().zip(v)))
        .collect())
}

/// Whether the classes of `τ_α^{(n)}` are linearly independent in `HC^n`:
/// appending them to the image of `δ` on cyclic `(n-1)`-cochains raises the rank by `|L|`.
pub fn trace_classes_independent<F: Scalar>(alg: &BandAlgebra, n: usize, budget: u128) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let (m, _, dst) = cyclic_coboundary_matrix::<F>(alg, n - 1, budget)?;
    let traces: Vec<Vec<F>> = trace_basis::<F>(alg)
        .iter()
        .map(|tau| trace_cocycle(tau, n, alg).map(|c| dst.coordinates(&c)))
        .collect::<Result<_>>()?;
    let base = rank_either_way(&m);
    let mut triplets: Vec<(usize, usize, F)> = Vec::new();
    for r in 0..m.rows() {
        for (c, v) in m.row(r) {
            triplets.push((r, *c, v.clone()));
        }
    }
    for (k, col) in traces.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            triplets.push((r, m.cols() + k, v.clone()));
        }
    }
    let augmented = SparseMatrix::from_triplets(m.rows(), m.cols() + traces.len(), triplets)?;
    Ok(rank_either_way(&augmented) == base + traces.len())
}

/// Solves `δχ = ψ` over cyclic `χ` of degree `n - 1`.
pub fn solve_cyclic_coboundary<F: Scalar>(
    psi: &Cochain<F>,
    alg: &BandAlgebra,
    budget: u128,
) -> Result<SolveOutcome<Cochain<F>>> {
    let n = psi.degree();
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let (m, src, dst) = cyclic_coboundary_matrix::<F>(alg, n - 1, budget)?;
    Ok(match m.solve(&dst.coordinates(psi))? {
        SolveOutcome::Solved(x) => SolveOutcome::Solved(src.cochain(&x)),
        SolveOutcome::Infeasible { certificate } => SolveOutcome::Infeasible { certificate: dst.cochain(&certificate) },
    })
}

/// Re-checks `ψ = τ^{(n)} + δχ` with the adjoint coboundary.
pub fn check_witness<F: Scalar>(
    psi: &Cochain<F>,
    tau: Option<&Cochain<F>>,
    chi: &Cochain<F>,
    alg: &BandAlgebra,
) -> Result<()> {
    let mut residual = psi.sub(&coboundary_adjoint(chi, alg))?;
    if let Some(tau) = tau {
        residual = residual.sub(&trace_cocycle(tau, psi.degree(), alg)?)?;
    }
    let first = residual.iter().next().map(|(t, _)| t.entries().to_vec());
    match first {
        Some(tuple) => Err(Error::NonZeroResidual { tuple }),
        None => Ok(()),
    }
}
