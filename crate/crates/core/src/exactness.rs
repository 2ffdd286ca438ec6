//! Unit-insertion operators on the reduced complex and an explicit
//! contraction showing the reduced complex is exact.
//!
//! Positions are 1-based: `s_k` inserts `lcu(x_k)` in front of `x_k`, for
//! `1 ≤ k ≤ n+1` on a degree-`n` chain. All boundaries here are reduced.

use crate::algebra::BandAlgebra;
use crate::chain::{boundary, Chain, ElemTensor};
use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};

/// Where `s_k` inserts, for a given input degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertionPlan {
    degree: usize,
    position: usize,
}

impl InsertionPlan {
    pub fn new(degree: usize, position: usize) -> Result<Self> {
        if position == 0 || position > degree + 1 {
            return Err(Error::IndexOutOfRange { what: "insertion position", index: position, lo: 1, hi: degree + 1 });
        }
        Ok(InsertionPlan { degree, position })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// The unsigned image tensor of `x` (the sign is `(-1)^k`).
    pub fn insert(&self, x: &[usize], alg: &BandAlgebra) -> ElemTensor {
        insert_at(x, self.position, alg)
    }
}

/// `x_1 ⊗ ⋯ ⊗ x_{k-1} ⊗ lcu(x_k) ⊗ x_k ⊗ ⋯`, unsigned. `k` is 1-based.
pub(crate) fn insert_at(x: &[usize], k: usize, alg: &BandAlgebra) -> ElemTensor {
    let mut v = Vec::with_capacity(x.len() + 1);
    v.extend_from_slice(&x[..k - 1]);
    v.push(alg.lcu(x[k - 1]));
    v.extend_from_slice(&x[k - 1..]);
    ElemTensor::new(v)
}

/// `s_k`.
pub fn insert_lcu<F: Scalar>(c: &Chain<F>, k: usize, alg: &BandAlgebra) -> Result<Chain<F>> {
    let plan = InsertionPlan::new(c.degree(), k)?;
    let s: F = sign(k);
    Ok(c.map_linear(c.degree() + 1, |t, out| out.push((plan.insert(t, alg), s.clone()))))
}

fn check_inner_index(degree: usize, k: usize, what: &'static str) -> Result<()> {
    if degree == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if k == 0 || k > degree {
        return Err(Error::IndexOutOfRange { what, index: k, lo: 1, hi: degree });
    }
    Ok(())
}

/// `Q_k = d s_k + s_k d - I` on degree-`n` chains, `1 ≤ k ≤ n`.
pub fn q_op<F: Scalar>(c: &Chain<F>, k: usize, alg: &BandAlgebra) -> Result<Chain<F>> {
    check_inner_index(c.degree(), k, "Q index")?;
    let mut out = boundary(&insert_lcu(c, k, alg)?, true, alg)?;
    out += &insert_lcu(&boundary(c, true, alg)?, k, alg)?;
    out -= c;
    Ok(out)
}

/// `ρ_i(x) = ⋯ ⊗ x_i·lcu(x_{i+1}) ⊗ x_{i+1} ⊗ ⋯`, `1 ≤ i ≤ n`.
pub fn rho<F: Scalar>(c: &Chain<F>, i: usize, alg: &BandAlgebra) -> Result<Chain<F>> {
    check_inner_index(c.degree(), i, "rho index")?;
    Ok(c.map_linear(c.degree(), |t, out| {
        let mut v = t.entries().to_vec();
        v[i - 1] = alg.mul(v[i - 1], alg.lcu(v[i]));
        out.push((ElemTensor::new(v), F::one()));
    }))
}

/// `Q̃_k(x) = -⋯⊗lcu(x_k)⊗x_k x_{k+1}⊗⋯ + ⋯⊗lcu(x_k x_{k+1})⊗x_k x_{k+1}⊗⋯`.
pub fn qtilde<F: Scalar>(c: &Chain<F>, k: usize, alg: &BandAlgebra) -> Result<Chain<F>> {
    check_inner_index(c.degree(), k, "Q-tilde index")?;
    Ok(c.map_linear(c.degree(), |t, out| {
        let x = t.entries();
        let prod = alg.mul(x[k - 1], x[k]);
        let mut a = x.to_vec();
        a[k - 1] = alg.lcu(x[k - 1]);
        a[k] = prod;
        let mut b = x.to_vec();
        b[k - 1] = alg.lcu(prod);
        b[k] = prod;
        out.push((ElemTensor::new(a), -F::one()));
        out.push((ElemTensor::new(b), F::one()));
    }))
}

/// A chain `w` with reduced `d w = z`, for a reduced cycle `z`.
///
/// With `z_0 = z` and `z_k = (d s_k - I) z_{k-1}`, the chain
/// `w = Σ_{k=1}^{n+1} (-1)^{k-1} s_k z_{k-1}` telescopes to
/// `d w = z + (-1)^n z_{n+1}`, and `z_{n+1} = 0` for cycles. In degree 0
/// this reduces to `w = s_1 z = -Σ λ_s lcu(s) ⊗ s`.
pub fn hunital_preimage<F: Scalar>(z: &Chain<F>, alg: &BandAlgebra) -> Result<Chain<F>> {
    z.check_in(alg)?;
    let n = z.degree();
    if n > 0 && !boundary(z, true, alg)?.is_zero() {
        return Err(Error::NotAReducedCycle);
    }
    let mut w = Chain::zero(n + 1);
    let mut zk = z.clone();
    for k in 1..=n + 1 {
        let sz = insert_lcu(&zk, k, alg)?;
        w += &sz.scaled(&sign(k - 1));
        let mut next = boundary(&sz, true, alg)?;
        next -= &zk;
        zk = next;
    }
    if !zk.is_zero() {
        return Err(Error::Internal(format!("contraction did not terminate: z_{} = {:?}", n + 1, zk)));
    }
    Ok(w)
}
