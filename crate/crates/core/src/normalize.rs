//! Explicit cobounding of cyclic cocycles.
//!
//! A cyclic `n`-cocycle `ψ` is written as `τ^{(n)} + δχ` in three stages:
//!
//! 1. [`r_normalize`] removes the part supported inside single rectangular
//!    components by an exact solve, producing the trace `τ` (even `n` only).
//! 2. [`minimal_normalize`] kills `ψ` on tensors with a minimal element,
//!    peeling off one minimal-entry count at a time with `s_min`.
//! 3. [`reduce_filtration`] kills `ψ` on tensors with at most `j`
//!    left-blocks for `j = 2, …, n+1`, by iterating the duals of
//!    `P_k = I - k⁻¹(s d + d s)` with the left-block insertion `s_lb`.
//!
//! Every stage records the cochain it subtracted a coboundary of, so the
//! final [`Witness`] is checkable: `ψ - τ^{(n)} - δχ = 0`. The pipeline works
//! on dense cochains and uses the explicit coboundary formula; the final
//! check goes through [`crate::cohomology::check_witness`], which uses the
//! adjoint of the boundary instead.

use std::collections::BTreeMap;

use crate::algebra::BandAlgebra;
use crate::blocks::{block_structure, height, left_block_count, pinch_unit};
use crate::chain::{boundary, coboundary, congruent_mod_cyclic, for_each_tuple, pair, Chain, Cochain, ElemTensor};
use crate::cohomology::{check_witness, trace_cocycle, tuple_index, CyclicBasis};
use crate::error::{Error, Result};
use crate::exactness::insert_at;
use crate::linalg::{SolveOutcome, SparseMatrix};
use crate::scalar::{sign, Scalar};

/// `s_min(x) = j⁻¹ Σ_{i∈J} (-1)^i ⋯⊗lcu(x_i)⊗x_i⊗⋯` over the initial points of minimal blocks.
pub fn s_min<F: Scalar>(x: &[usize], alg: &BandAlgebra) -> Chain<F> {
    let bs = block_structure(x, alg);
    let w = F::recip_i64(bs.min_initial.len().max(1) as i64);
    Chain::from_terms(x.len(), bs.min_initial.iter().map(|&i| (insert_at(x, i, alg), sign::<F>(i) * w.clone())))
}

/// `s_lb(x) = Σ_{i∈I} (-1)^i ⋯⊗lcu(x_i)⊗x_i⊗⋯` over the initial points of
/// left-blocks; zero when `x` has a minimal element.
pub fn s_lb<F: Scalar>(x: &[usize], alg: &BandAlgebra) -> Chain<F> {
    let bs = block_structure(x, alg);
    Chain::from_terms(x.len(), bs.initial.iter().map(|&i| (insert_at(x, i, alg), sign::<F>(i))))
}

/// `Err(x) = Σ_{i∈R} ⋯⊗lcu(x_i)⊗x_i x_{i+1}⊗⋯`. For `i = n+1` the pinch is
/// applied in place, which differs from the rotated form only by `ran(I - t)`.
pub fn err<F: Scalar>(x: &[usize], alg: &BandAlgebra) -> Chain<F> {
    let bs = block_structure(x, alg);
    Chain::from_terms(x.len() - 1, bs.r_set.iter().map(|&i| (pinch_unit(x, i, alg), F::one())))
}

/// Linear extension of a map on elementary tensors.
pub fn extend<F: Scalar>(c: &Chain<F>, out_degree: usize, op: impl Fn(&[usize]) -> Chain<F>) -> Chain<F> {
    c.map_linear(out_degree, |t, out| out.extend(op(t.entries()).iter().map(|(u, v)| (u.clone(), v.clone()))))
}

/// `(s d + d s)(c)` with `s = s_lb` and the full boundary.
pub fn homotopy_sum<F: Scalar>(c: &Chain<F>, alg: &BandAlgebra) -> Result<Chain<F>> {
    let n = c.degree();
    let s = |t: &[usize]| s_lb::<F>(t, alg);
    let mut out = boundary(&extend(c, n + 1, s), false, alg)?;
    if n > 0 {
        out += &extend(&boundary(c, false, alg)?, n, s);
    }
    Ok(out)
}

/// `P_k(c) = c - k⁻¹ (s d + d s)(c)`, `k ≥ 1`.
pub fn p_op<F: Scalar>(c: &Chain<F>, k: usize, alg: &BandAlgebra) -> Result<Chain<F>> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange { what: "k", value: 0, range: "k >= 1" });
    }
    Ok(c - &homotopy_sum(c, alg)?.scaled(&F::recip_i64(k as i64)))
}

/// The bracketed terms approximating `(s d + d s)(x)`, summed over `i ∈ I_x`:
/// `x + (⋯⊗lcu(x_i x_{i+1})⊗x_i x_{i+1}⊗⋯) - (⋯⊗lcu(x_i)⊗x_i x_{i+1}⊗⋯)`,
/// with the wrap-around form for `i = n+1`.
pub fn bracket_terms<F: Scalar>(x: &[usize], alg: &BandAlgebra) -> Chain<F> {
    let n = x.len() - 1;
    let mut out = Chain::zero(n);
    for &i in &block_structure(x, alg).initial {
        out.add_term(ElemTensor::from(x), F::one());
        if i <= n {
            let prod = alg.mul(x[i - 1], x[i]);
            let mut a = x.to_vec();
            a[i - 1] = alg.lcu(prod);
            a[i] = prod;
            let mut b = x.to_vec();
            b[i - 1] = alg.lcu(x[i - 1]);
            b[i] = prod;
            out.add_term(ElemTensor::new(a), F::one());
            out.add_term(ElemTensor::new(b), -F::one());
        } else {
            let prod = alg.mul(x[n], x[0]);
            let mut a = x[1..n].to_vec();
            a.extend([alg.lcu(prod), prod]);
            let mut b = x[1..n].to_vec();
            b.extend([alg.lcu(x[n]), prod]);
            out.add_term(ElemTensor::new(a), sign(n));
            out.add_term(ElemTensor::new(b), sign(n + 1));
        }
    }
    out
}

/// Number of left-blocks and height of an elementary tensor.
pub fn filtration_position(x: &[usize], alg: &BandAlgebra) -> (usize, usize) {
    (left_block_count(x, alg), height(x, alg))
}

/// Membership in `G_{n,j,h} = lin F^{j,h} + lin F^{j-1}`, or with
/// `include_cyclic` in `H_{n,j,h} = G_{n,j,h} + ran(I - t)`.
pub fn in_filtration_span<F: Scalar>(c: &Chain<F>, j: usize, h: i64, include_cyclic: bool, alg: &BandAlgebra) -> bool {
    in_filtration_span_with(c, j, h, include_cyclic, |t| filtration_position(t, alg))
}

/// [`in_filtration_span`] with a caller-supplied (e.g. memoized) [`filtration_position`].
pub fn in_filtration_span_with<F: Scalar>(
    c: &Chain<F>,
    j: usize,
    h: i64,
    include_cyclic: bool,
    position: impl Fn(&[usize]) -> (usize, usize),
) -> bool {
    let good = |t: &ElemTensor| {
        let (lb, ht) = position(t.entries());
        lb < j || (lb <= j && (ht as i64) <= h)
    };
    if include_cyclic {
        congruent_mod_cyclic(c, good)
    } else {
        c.support().all(good)
    }
}

fn require_cyclic_cocycle<F: Scalar>(psi: &Cochain<F>, alg: &BandAlgebra) -> Result<()> {
    psi.check_in(alg)?;
    if psi.degree() == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if let Some(t) = psi.first_non_cyclic() {
        return Err(Error::NotCyclic { tuple: t.into_entries() });
    }
    if let Some((t, _)) = coboundary(psi, alg).iter().next() {
        return Err(Error::NotACocycle { tuple: t.entries().to_vec() });
    }
    Ok(())
}

/// One cobounding step with an arbitrary insertion operator `s`:
/// `χ = ψ∘s` on degree `n-1` and `ψ' = ψ - δχ`.
///
/// Because `ψ∘d = 0`, `ψ'(x) = ψ((I - d s - s d) x)` for every `x`; both
/// sides are computed and compared.
pub fn peel_step<F: Scalar>(
    psi: &Cochain<F>,
    s: impl Fn(&ElemTensor) -> Chain<F>,
    alg: &BandAlgebra,
) -> Result<(Cochain<F>, Cochain<F>)> {
    require_cyclic_cocycle(psi, alg)?;
    let n = psi.degree();
    let apply = |t: &ElemTensor| -> Result<Chain<F>> {
        let image = s(t);
        if !image.is_zero() && image.degree() != t.degree() + 1 {
            return Err(Error::DegreeMismatch { expected: t.degree() + 1, got: image.degree() });
        }
        Ok(image)
    };
    let mut chi = Cochain::zero(n - 1);
    let mut failure = None;
    for_each_tuple(alg.size(), n, |y| {
        if failure.is_some() {
            return;
        }
        match apply(&ElemTensor::from(y)).and_then(|img| if img.is_zero() { Ok(F::zero()) } else { pair(psi, &img) }) {
            Ok(v) => chi.set(ElemTensor::from(y), v),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let next = psi.sub(&coboundary(&chi, alg))?;
    let mut mismatch = None;
    for_each_tuple(alg.size(), n + 1, |x| {
        if mismatch.is_some() {
            return;
        }
        let xt = ElemTensor::from(x);
        let check = || -> Result<F> {
            let c = Chain::from_tensor(xt.clone());
            let mut rest = c.clone();
            let sx = apply(&xt)?;
            if !sx.is_zero() {
                rest -= &boundary(&sx, false, alg)?;
            }
            for (y, v) in boundary(&c, false, alg)?.iter() {
                let sy = apply(y)?;
                if !sy.is_zero() {
                    rest -= &sy.scaled(v);
                }
            }
            pair(psi, &rest)
        };
        match check() {
            Ok(v) if v == next.get(&xt) => {}
            Ok(_) => mismatch = Some(Error::Internal(format!("peel identity fails at {x:?}"))),
            Err(e) => mismatch = Some(e),
        }
    });
    match mismatch {
        Some(e) => Err(e),
        None => Ok((next, chi)),
    }
}

/// Output of [`r_normalize`].
#[derive(Debug, Clone)]
pub struct RNormalized<F: Scalar> {
    pub psi: Cochain<F>,
    pub chi: Cochain<F>,
    /// A trace, zero in odd degree.
    pub tau: Cochain<F>,
}

/// Makes `ψ` vanish on every tuple whose entries share one rectangular
/// component: `ψ' = ψ - τ^{(n)} - δχ`, with `χ` cyclic and supported on
/// component tuples, and `τ` constant on components (zero for odd `n`).
pub fn r_normalize<F: Scalar>(psi: &Cochain<F>, alg: &BandAlgebra) -> Result<RNormalized<F>> {
    require_cyclic_cocycle(psi, alg)?;
    let n = psi.degree();
    let even = n.is_multiple_of(2);
    let mut chi = Cochain::zero(n - 1);
    let mut tau = Cochain::zero(0);
    for comp in alg.decomposition().components() {
        let mut elems = comp.clone();
        elems.sort_unstable();
        let src = CyclicBasis::over(&elems, n - 1);
        let dst = CyclicBasis::over(&elems, n);
        let unknowns = src.len() + usize::from(even);
        let mut triplets = Vec::new();
        for (r, rep) in dst.reps.iter().enumerate() {
            let t = ElemTensor::new(rep.clone());
            for i in 0..=n {
                if let Some((c, v)) = src.locate::<F>(&t.face_unchecked(alg, i)) {
                    triplets.push((r, c, sign::<F>(i) * v));
                }
            }
            if even {
                triplets.push((r, src.len(), F::one()));
            }
        }
        let m = SparseMatrix::from_triplets(dst.len(), unknowns, triplets)?;
        let x = match m.solve(&dst.coordinates(psi))? {
            SolveOutcome::Solved(x) => x,
            SolveOutcome::Infeasible { .. } => return Err(Error::Infeasible),
        };
        for (t, v) in src.cochain(&x[..src.len()]).iter() {
            chi.set(t.clone(), v.clone());
        }
        if even && !x[src.len()].is_negligible() {
            for &e in &elems {
                tau.set(ElemTensor::new(vec![e]), x[src.len()].clone());
            }
        }
    }
    let mut next = psi.sub(&coboundary(&chi, alg))?;
    if even && !tau.is_zero() {
        next = next.sub(&trace_cocycle(&tau, n, alg)?)?;
    }
    let dec = alg.decomposition();
    if let Some((t, v)) = next.iter().find(|(t, _)| t.iter().all(|&x| dec.component_of(x) == dec.component_of(t[0]))) {
        return Err(Error::StageStalled { stage: "R-normalization", tuple: t.entries().to_vec(), value: v.to_string() });
    }
    Ok(RNormalized { psi: next, chi, tau })
}

/// Cochains stored densely over `S^{d+1}` in lexicographic tuple order.
struct Dense<F> {
    degree: usize,
    vals: Vec<F>,
}

impl<F: Scalar> Dense<F> {
    fn zero(degree: usize, size: usize) -> Self {
        Dense { degree, vals: vec![F::zero(); size.pow(degree as u32 + 1)] }
    }

    fn from_sparse(c: &Cochain<F>, size: usize) -> Self {
        let mut d = Dense::zero(c.degree(), size);
        for (t, v) in c.iter() {
            d.vals[tuple_index(t, size)] = v.clone();
        }
        d
    }

    fn to_sparse(&self, size: usize) -> Cochain<F> {
        let mut out = Cochain::zero(self.degree);
        let mut idx = 0;
        for_each_tuple(size, self.degree + 1, |t| {
            if !self.vals[idx].is_negligible() {
                out.set(ElemTensor::from(t), self.vals[idx].clone());
            }
            idx += 1;
        });
        out
    }

    fn is_zero(&self) -> bool {
        self.vals.iter().all(Scalar::is_negligible)
    }

    fn sub_assign(&mut self, other: &Dense<F>) {
        for (a, b) in self.vals.iter_mut().zip(&other.vals) {
            if !b.is_negligible() {
                *a -= b.clone();
            }
        }
    }

    fn add_scaled(&mut self, other: &Dense<F>, w: &F) {
        for (a, b) in self.vals.iter_mut().zip(&other.vals) {
            if !b.is_negligible() {
                *a += b.clone() * w.clone();
            }
        }
    }

    fn scale(&mut self, w: &F) {
        for a in &mut self.vals {
            if !a.is_negligible() {
                *a *= w.clone();
            }
        }
    }

    /// `(δψ)(a) = Σ_{i=0}^{d+1} (-1)^i ψ(∂_i a)` written out as the explicit formula.
    fn coboundary(&self, alg: &BandAlgebra) -> Dense<F> {
        let s = alg.size();
        let d = self.degree;
        let mut out = Dense::zero(d + 1, s);
        if self.is_zero() {
            return out;
        }
        let mut buf = vec![0usize; d + 1];
        let mut r = 0;
        for_each_tuple(s, d + 2, |a| {
            let mut acc = F::zero();
            buf[..d].copy_from_slice(&a[1..=d]);
            buf[d] = alg.mul(a[d + 1], a[0]);
            acc += self.vals[tuple_index(&buf, s)].clone();
            for j in 1..=d {
                buf[..j - 1].copy_from_slice(&a[..j - 1]);
                buf[j - 1] = alg.mul(a[j - 1], a[j]);
                buf[j..].copy_from_slice(&a[j + 1..]);
                let v = &self.vals[tuple_index(&buf, s)];
                if !v.is_negligible() {
                    acc += sign::<F>(j) * v.clone();
                }
            }
            buf[..d].copy_from_slice(&a[..d]);
            buf[d] = alg.mul(a[d], a[d + 1]);
            let v = &self.vals[tuple_index(&buf, s)];
            if !v.is_negligible() {
                acc += sign::<F>(d + 1) * v.clone();
            }
            out.vals[r] = acc;
            r += 1;
        });
        out
    }

    fn first_nonzero_where(&self, size: usize, pred: impl Fn(usize) -> bool) -> Option<(Vec<usize>, F)> {
        let mut idx = 0;
        let mut found = None;
        for_each_tuple(size, self.degree + 1, |t| {
            if found.is_none() && !self.vals[idx].is_negligible() && pred(idx) {
                found = Some((t.to_vec(), self.vals[idx].clone()));
            }
            idx += 1;
        });
        found
    }
}

/// An insertion operator tabulated on all degree-`(n-1)` tuples: for each
/// tuple index, the `(index in S^{n+1}, coefficient)` pairs of its image.
struct InsertionTable<F> {
    images: Vec<Vec<(usize, F)>>,
}

impl<F: Scalar> InsertionTable<F> {
    fn build(alg: &BandAlgebra, n: usize, op: impl Fn(&[usize]) -> Chain<F>) -> Self {
        let s = alg.size();
        let mut images = Vec::with_capacity(s.pow(n as u32));
        for_each_tuple(s, n, |y| {
            images.push(op(y).iter().map(|(t, v)| (tuple_index(t, s), v.clone())).collect());
        });
        InsertionTable { images }
    }

    /// `σψ = ψ∘s`, restricted to the tuple indices where `keep` holds.
    fn dual(&self, psi: &Dense<F>, keep: impl Fn(usize) -> bool) -> Dense<F> {
        let vals = self
            .images
            .iter()
            .enumerate()
            .map(|(y, img)| {
                let mut acc = F::zero();
                if keep(y) {
                    for (x, c) in img {
                        let v = &psi.vals[*x];
                        if !v.is_negligible() {
                            acc += c.clone() * v.clone();
                        }
                    }
                }
                acc
            })
            .collect();
        Dense { degree: psi.degree - 1, vals }
    }
}

/// Per-tuple block data for the two degrees the pipeline touches.
struct Tables {
    /// Number of entries of minimal degree on `S^n` (zero without a minimal element).
    low_minimal: Vec<usize>,
    /// Whether a tuple of `S^{n+1}` has a minimal element.
    top_has_min: Vec<bool>,
    /// Left-block count on `S^{n+1}`, one for tuples with a minimal element.
    top_blocks: Vec<usize>,
}

impl Tables {
    fn build(alg: &BandAlgebra, n: usize) -> Self {
        let s = alg.size();
        let mut low_minimal = Vec::new();
        for_each_tuple(s, n, |y| {
            let bs = block_structure(y, alg);
            low_minimal.push(if bs.has_min { bs.minimal_count() } else { 0 });
        });
        let mut top_has_min = Vec::new();
        let mut top_blocks = Vec::new();
        for_each_tuple(s, n + 1, |x| {
            let bs = block_structure(x, alg);
            top_has_min.push(bs.has_min);
            top_blocks.push(bs.j);
        });
        Tables { low_minimal, top_has_min, top_blocks }
    }
}

fn minimal_stage<F: Scalar>(psi: &mut Dense<F>, alg: &BandAlgebra, tables: &Tables) -> Result<Dense<F>> {
    let n = psi.degree;
    let s = alg.size();
    let smin = InsertionTable::build(alg, n, |y| s_min::<F>(y, alg));
    let mut chi = Dense::zero(n - 1, s);
    for level in (2..=n).rev() {
        let step = smin.dual(psi, |y| tables.low_minimal[y] == level - 1);
        if step.is_zero() {
            continue;
        }
        psi.sub_assign(&step.coboundary(alg));
        chi.add_scaled(&step, &F::one());
    }
    if let Some((tuple, v)) = psi.first_nonzero_where(s, |x| tables.top_has_min[x]) {
        return Err(Error::StageStalled { stage: "minimal-block normalization", tuple, value: v.to_string() });
    }
    Ok(chi)
}

/// Round budget for the filtration step at level `j`: `j(n-1)n²`.
pub fn round_bound(n: usize, j: usize) -> usize {
    j * n.saturating_sub(1) * n * n
}

fn filtration_stage<F: Scalar>(
    psi: &mut Dense<F>,
    j: usize,
    alg: &BandAlgebra,
    tables: &Tables,
    slb: &InsertionTable<F>,
) -> Result<(Dense<F>, usize)> {
    let n = psi.degree;
    let s = alg.size();
    if let Some((tuple, _)) = psi.first_nonzero_where(s, |x| tables.top_blocks[x] < j) {
        return Err(Error::NotNormalized { what: "vanishing on the previous filtration level", tuple });
    }
    let mut chi = Dense::zero(n - 1, s);
    let bound = round_bound(n, j);
    let mut rounds = 0;
    while psi.first_nonzero_where(s, |x| tables.top_blocks[x] <= j).is_some() {
        if rounds == bound {
            let (tuple, v) = psi.first_nonzero_where(s, |x| tables.top_blocks[x] <= j).expect("checked above");
            return Err(Error::StageStalled { stage: "left-block filtration", tuple, value: v.to_string() });
        }
        // ψ∘(P_j ⋯ P_1): the dual of P_j acts first.
        for k in (1..=j).rev() {
            let mut step = slb.dual(psi, |_| true);
            if step.is_zero() {
                continue;
            }
            step.scale(&F::recip_i64(k as i64));
            psi.sub_assign(&step.coboundary(alg));
            chi.add_scaled(&step, &F::one());
        }
        rounds += 1;
    }
    Ok((chi, rounds))
}

/// Kills an R-normalized cyclic cocycle on every tensor with a minimal element.
/// Returns `(ψ', χ)` with `ψ' = ψ - δχ`.
pub fn minimal_normalize<F: Scalar>(psi: &Cochain<F>, alg: &BandAlgebra) -> Result<(Cochain<F>, Cochain<F>)> {
    require_cyclic_cocycle(psi, alg)?;
    let dec = alg.decomposition();
    if let Some((t, _)) = psi.iter().find(|(t, _)| t.iter().all(|&x| dec.component_of(x) == dec.component_of(t[0]))) {
        return Err(Error::NotNormalized { what: "R-normalized", tuple: t.entries().to_vec() });
    }
    let s = alg.size();
    let tables = Tables::build(alg, psi.degree());
    let mut dense = Dense::from_sparse(psi, s);
    let chi = minimal_stage(&mut dense, alg, &tables)?;
    Ok((dense.to_sparse(s), chi.to_sparse(s)))
}

/// Given a cyclic cocycle vanishing on `F^{j-1}`, returns `(ψ', χ)` with
/// `ψ' = ψ - δχ` vanishing on `F^j`, and the number of `(P_j ⋯ P_1)` rounds used.
pub fn reduce_filtration<F: Scalar>(
    psi: &Cochain<F>,
    j: usize,
    alg: &BandAlgebra,
) -> Result<(Cochain<F>, Cochain<F>, usize)> {
    require_cyclic_cocycle(psi, alg)?;
    let n = psi.degree();
    if j < 2 || j > n + 1 {
        return Err(Error::ParameterOutOfRange { what: "j", value: j, range: "2..=n+1" });
    }
    let s = alg.size();
    let tables = Tables::build(alg, n);
    let slb = InsertionTable::build(alg, n, |y| s_lb::<F>(y, alg));
    let mut dense = Dense::from_sparse(psi, s);
    let (chi, rounds) = filtration_stage(&mut dense, j, alg, &tables, &slb)?;
    Ok((dense.to_sparse(s), chi.to_sparse(s), rounds))
}

/// `ψ = τ^{(n)} + δχ`, with `τ` present only in even degree.
#[derive(Debug, Clone)]
pub struct Witness<F: Scalar> {
    pub degree: usize,
    pub tau: Option<Cochain<F>>,
    pub chi: Cochain<F>,
    /// `(P_j ⋯ P_1)` rounds used at each filtration level `j`.
    pub rounds: BTreeMap<usize, usize>,
}

/// Writes a cyclic `n`-cocycle as `τ^{(n)} + δχ` with `χ` cyclic.
pub fn cobound_cyclic<F: Scalar>(psi: &Cochain<F>, alg: &BandAlgebra) -> Result<Witness<F>> {
    let n = psi.degree();
    let s = alg.size();
    let r = r_normalize(psi, alg)?;
    let tables = Tables::build(alg, n);
    let mut dense = Dense::from_sparse(&r.psi, s);
    let mut chi = Dense::from_sparse(&r.chi, s);
    chi.add_scaled(&minimal_stage(&mut dense, alg, &tables)?, &F::one());
    let slb = InsertionTable::build(alg, n, |y| s_lb::<F>(y, alg));
    let mut rounds = BTreeMap::new();
    for j in 2..=n + 1 {
        let (step, used) = filtration_stage(&mut dense, j, alg, &tables, &slb)?;
        chi.add_scaled(&step, &F::one());
        rounds.insert(j, used);
    }
    if let Some((tuple, _)) = dense.first_nonzero_where(s, |_| true) {
        return Err(Error::NonZeroResidual { tuple });
    }
    let tau = n.is_multiple_of(2).then_some(r.tau);
    let chi = chi.to_sparse(s);
    check_witness(psi, tau.as_ref(), &chi, alg)?;
    Ok(Witness { degree: n, tau, chi, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{make_free_band, make_free_semilattice, make_rectangular};
    use crate::chain::cyclic_shift;
    use crate::cohomology::cyclic_coboundary_matrix;
    use crate::Rat;

    fn q(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    fn set(gens: &[usize]) -> usize {
        gens.iter().fold(0usize, |m, g| m | 1 << (g - 1)) - 1
    }

    /// `Σ c_i b_i` over a basis of cyclic cocycles, with small fixed coefficients.
    fn some_cocycle(alg: &BandAlgebra, n: usize) -> Cochain<Rat> {
        let (m, src, _) = cyclic_coboundary_matrix::<Rat>(alg, n, u128::MAX).unwrap();
        let basis = m.kernel_basis();
        let mut coords = vec![q(0); src.len()];
        for (k, b) in basis.iter().enumerate() {
            let c = q((k as i64 % 5) - 2);
            for (x, y) in coords.iter_mut().zip(b) {
                *x += c.clone() * y.clone();
            }
        }
        src.cochain(&coords)
    }

    #[test]
    fn s_min_on_constant_tensor() {
        let alg = BandAlgebra::new(make_free_semilattice(2).unwrap()).unwrap();
        let c: Chain<Rat> = s_min(&[0, 0], &alg);
        assert_eq!(c, Chain::term(ElemTensor::new(vec![0, 0, 0]), q(-1)));
        let none: Chain<Rat> = s_lb(&[0, 0], &alg);
        assert!(none.is_zero());
    }

    #[test]
    fn s_lb_worked_example_has_five_terms() {
        let alg = BandAlgebra::new(make_free_semilattice(4).unwrap()).unwrap();
        let x = [set(&[1]), set(&[1, 2]), set(&[2]), set(&[2, 3]), set(&[3]), set(&[4]), set(&[1])];
        let x: Vec<usize> = x.to_vec();
        let bs = block_structure(&x, &alg);
        let c: Chain<Rat> = s_lb(&x, &alg);
        assert_eq!(c.len(), bs.initial.len());
        for &i in &bs.initial {
            assert_eq!(c.coeff(&insert_at(&x, i, &alg)), sign(i));
        }
    }

    #[test]
    fn p_op_rejects_zero() {
        let alg = BandAlgebra::new(make_rectangular(1, 2).unwrap()).unwrap();
        assert!(p_op(&Chain::<Rat>::from_tensor(ElemTensor::new(vec![0, 1])), 0, &alg).is_err());
    }

    #[test]
    fn filtration_span_support_and_cyclic() {
        let alg = BandAlgebra::new(make_free_semilattice(2).unwrap()).unwrap();
        // {1} ⊗ {2} has two left-blocks and no minimal element
        let x = ElemTensor::new(vec![0, 1]);
        let c = Chain::<Rat>::from_tensor(x.clone());
        assert!(!in_filtration_span(&c, 1, 100, false, &alg));
        assert!(in_filtration_span(&c, 2, 100, false, &alg));
        let boundary_term = &c - &cyclic_shift(&c);
        assert!(in_filtration_span(&boundary_term, 0, -1, true, &alg));
        assert!(in_filtration_span(&Chain::<Rat>::zero(1), 0, -1, false, &alg));
    }

    #[test]
    fn peel_with_zero_operator_is_identity() {
        let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
        let psi = some_cocycle(&alg, 1);
        let (next, chi) = peel_step(&psi, |_| Chain::zero(0), &alg).unwrap();
        assert_eq!(next, psi);
        assert!(chi.is_zero());
    }

    #[test]
    fn peel_with_s_min_satisfies_both_formulas() {
        let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
        // all-minimal tensors have J = {1} in every rotation, so σ is only
        // cyclic on cocycles that already vanish there
        let psi = r_normalize(&some_cocycle(&alg, 2), &alg).unwrap().psi;
        let (next, chi) = peel_step(&psi, |t| s_min(t.entries(), &alg), &alg).unwrap();
        assert!(chi.is_cyclic());
        assert!(next.is_cyclic());
    }

    #[test]
    fn r_normalize_on_rectangular_band() {
        let alg = BandAlgebra::new(make_rectangular(2, 2).unwrap()).unwrap();
        for n in 1..=3 {
            let psi = some_cocycle(&alg, n);
            let r = r_normalize(&psi, &alg).unwrap();
            assert!(r.psi.is_zero(), "degree {n}");
            if n % 2 == 1 {
                assert!(r.tau.is_zero());
            }
        }
    }

    #[test]
    fn cobound_recovers_trace_cocycle() {
        let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
        let comps = alg.decomposition().components();
        let mut tau0 = Cochain::<Rat>::zero(0);
        for (k, comp) in comps.iter().enumerate() {
            for &e in comp {
                tau0.set(ElemTensor::new(vec![e]), q(k as i64 + 1));
            }
        }
        let psi = trace_cocycle(&tau0, 2, &alg).unwrap();
        let w = cobound_cyclic(&psi, &alg).unwrap();
        assert_eq!(w.tau.as_ref(), Some(&tau0));
        check_witness(&psi, w.tau.as_ref(), &w.chi, &alg).unwrap();
    }

    #[test]
    fn cobound_degree_one_and_two() {
        let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
        for n in 1..=2 {
            let psi = some_cocycle(&alg, n);
            let w = cobound_cyclic(&psi, &alg).unwrap();
            assert_eq!(w.tau.is_none(), n % 2 == 1);
            check_witness(&psi, w.tau.as_ref(), &w.chi, &alg).unwrap();
            assert!(w.chi.is_cyclic());
        }
    }

    #[test]
    fn rejects_non_cyclic_input() {
        let alg = BandAlgebra::new(make_free_semilattice(2).unwrap()).unwrap();
        let psi = Cochain::<Rat>::from_values(1, [(ElemTensor::new(vec![0, 1]), q(1))]);
        assert!(matches!(cobound_cyclic(&psi, &alg), Err(Error::NotCyclic { .. })));
    }
}
