//! Named property suites over a single band.
//!
//! Each suite runs a list of checks; a check records how many cases it saw
//! and the first counterexample. Tensors are enumerated exhaustively when the
//! tuple space is small enough and sampled from the caller's RNG otherwise,
//! so a suite is deterministic for a fixed RNG state.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::algebra::BandAlgebra;
use crate::band::check_lcu_laws;
use crate::blocks::{block_structure, height, left_block_count, pinch_unit, tensor_stats, wrap, BlockStructure};
use crate::chain::{
    boundary, coboundary, coboundary_adjoint, coboundary_at, cyclic_shift, pair, Chain, Cochain, ElemTensor,
};
use crate::cohomology::{
    check_witness, cyclic_coboundary_matrix, cyclic_dim_by_orbits, cyclic_dim_by_projector, hc_dim, hh_dim,
    reduced_cycle_basis, reduced_exactness, trace_basis, trace_cocycle, trace_classes_independent, CyclicBasis,
};
use crate::error::{Error, Result};
use crate::exactness::{hunital_preimage, insert_at, insert_lcu, q_op, qtilde, rho};
use crate::normalize::{bracket_terms, cobound_cyclic, err, filtration_position, homotopy_sum, in_filtration_span_with, p_op};
use crate::scalar::{sign, Scalar};
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Exactness,
    Filtration,
    Pipeline,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Identities, Suite::Exactness, Suite::Filtration, Suite::Pipeline];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Exactness => "exactness",
            Suite::Filtration => "filtration",
            Suite::Pipeline => "pipeline",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}' (expected identities, exactness, filtration or pipeline)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// Informational checks are reported but do not fail the suite.
    pub required: bool,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !(c.required && c.status == Status::Fail))
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Random cases per check when a space is too large to enumerate.
    pub samples: usize,
    /// Highest chain degree for the complex laws.
    pub max_degree: usize,
    /// Tuple spaces up to this size are enumerated exhaustively.
    pub exhaustive_limit: u128,
    /// Sparse-entry budget for rank computations.
    pub budget: u128,
    /// Random cocycles per degree in the pipeline suite.
    pub cocycles: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 200,
            max_degree: 4,
            exhaustive_limit: 2500,
            budget: crate::cohomology::DEFAULT_BUDGET,
            cocycles: 20,
        }
    }
}

struct Tally {
    name: &'static str,
    required: bool,
    cases: usize,
    failure: Option<String>,
    note: Option<String>,
    skipped: bool,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, required: true, cases: 0, failure: None, note: None, skipped: false }
    }

    fn informational(name: &'static str) -> Self {
        Tally { required: false, ..Tally::new(name) }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn record_result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{}: {e}", witness())),
        }
    }

    fn skip(&mut self, why: String) {
        self.skipped = true;
        self.note = Some(why);
    }

    fn finish(self) -> Check {
        let status = if self.failure.is_some() {
            Status::Fail
        } else if self.skipped && self.cases == 0 {
            Status::Skipped
        } else {
            Status::Pass
        };
        Check {
            name: self.name,
            required: self.required,
            status,
            cases: self.cases,
            counterexample: self.failure,
            note: self.note,
        }
    }
}

fn q(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

fn random_tuple<R: Rng>(size: usize, len: usize, rng: &mut R) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(0..size)).collect()
}

/// All of `S^len` when small enough, otherwise `samples` random tuples.
fn tuples<R: Rng>(size: usize, len: usize, cfg: &VerifyConfig, rng: &mut R) -> Vec<Vec<usize>> {
    let total = (size as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total <= cfg.exhaustive_limit {
        let mut out = Vec::with_capacity(total as usize);
        crate::chain::for_each_tuple(size, len, |t| out.push(t.to_vec()));
        out
    } else {
        (0..cfg.samples).map(|_| random_tuple(size, len, rng)).collect()
    }
}

fn random_coeff<R: Rng>(rng: &mut R) -> Rat {
    let v = rng.random_range(1..=3i64);
    q(if rng.random_bool(0.5) { v } else { -v })
}

fn random_chain<R: Rng>(alg: &BandAlgebra, degree: usize, terms: usize, rng: &mut R) -> Chain<Rat> {
    Chain::from_terms(
        degree,
        (0..terms).map(|_| (ElemTensor::new(random_tuple(alg.size(), degree + 1, rng)), random_coeff(rng))).collect::<Vec<_>>(),
    )
}

fn show(c: &Chain<Rat>) -> String {
    c.iter().map(|(t, v)| format!("{v}*{:?}", t.entries())).collect::<Vec<_>>().join(" + ")
}

/// Left-block counts and heights, memoized per tuple.
struct PositionCache<'a> {
    alg: &'a BandAlgebra,
    cache: RefCell<HashMap<Vec<usize>, (usize, usize)>>,
}

impl<'a> PositionCache<'a> {
    fn new(alg: &'a BandAlgebra) -> Self {
        PositionCache { alg, cache: RefCell::new(HashMap::new()) }
    }

    fn get(&self, t: &[usize]) -> (usize, usize) {
        if let Some(&p) = self.cache.borrow().get(t) {
            return p;
        }
        let p = filtration_position(t, self.alg);
        self.cache.borrow_mut().insert(t.to_vec(), p);
        p
    }

    fn in_span(&self, c: &Chain<Rat>, j: usize, h: i64, include_cyclic: bool) -> bool {
        in_filtration_span_with(c, j, h, include_cyclic, |t| self.get(t))
    }
}

pub fn run_suite<R: Rng>(suite: Suite, alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> SuiteReport {
    let checks = match suite {
        Suite::Identities => identities(alg, cfg, rng),
        Suite::Exactness => exactness(alg, cfg, rng),
        Suite::Filtration => filtration(alg, cfg, rng),
        Suite::Pipeline => pipeline(alg, cfg, rng),
    };
    SuiteReport { suite, checks }
}

// ---------------------------------------------------------------- identities

fn identities<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let mut out = Vec::new();
    let mut laws = Tally::new("unit-laws");
    laws.record(check_lcu_laws(alg.band(), alg.decomposition(), alg.lcu_map()).is_ok(), || {
        format!("{:?}", check_lcu_laws(alg.band(), alg.decomposition(), alg.lcu_map()).unwrap_err())
    });
    out.push(laws.finish());
    out.extend(complex_laws(alg, cfg, rng));
    out.extend(insertion_identities(alg, cfg, rng));
    out
}

/// `d∘d = 0` (full and reduced), `δ∘δ = 0`, `t^{n+1} = I`, `⟨δψ, c⟩ = ⟨ψ, dc⟩`,
/// and agreement of the explicit and adjoint coboundaries.
pub fn complex_laws<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let mut dd_full = Tally::new("full-boundary-squares-to-zero");
    let mut dd_red = Tally::new("reduced-boundary-squares-to-zero");
    let mut cyc = Tally::new("cyclic-shift-has-order-n-plus-1");
    let mut adj = Tally::new("coboundary-is-adjoint-of-boundary");
    let mut dd_co = Tally::new("coboundary-squares-to-zero");
    let mut agree = Tally::new("explicit-and-adjoint-coboundaries-agree");
    let top = cfg.max_degree.max(2);
    for case in 0..cfg.samples {
        let n = 2 + case % (top - 1);
        let c = random_chain(alg, n, 1 + case % 4, rng);
        let full = boundary(&c, false, alg).and_then(|b| boundary(&b, false, alg));
        dd_full.record_result(full.map(|z| z.is_zero()), || show(&c));
        let red = boundary(&c, true, alg).and_then(|b| boundary(&b, true, alg));
        dd_red.record_result(red.map(|z| z.is_zero()), || show(&c));
        let mut shifted = c.clone();
        for _ in 0..=n {
            shifted = cyclic_shift(&shifted);
        }
        cyc.record(shifted == c, || show(&c));

        // ψ random on every face of c, paired against c both ways
        let mut psi = Cochain::zero(n - 1);
        for (t, _) in c.iter() {
            for i in 0..=n {
                psi.set(t.face_unchecked(alg, i), random_coeff(rng));
            }
        }
        let lhs: Rat = c.iter().map(|(t, v)| v.clone() * coboundary_at(&psi, t, alg)).sum();
        let rhs = boundary(&c, false, alg).and_then(|b| pair(&psi, &b));
        adj.record_result(rhs.map(|r| r == lhs), || show(&c));

        // (δδψ)(a) with ψ random on all second faces of a
        let m = n - 2;
        let a = ElemTensor::new(random_tuple(alg.size(), m + 3, rng));
        let mut phi = Cochain::zero(m);
        for i in 0..=m + 2 {
            let f = a.face_unchecked(alg, i);
            for k in 0..=m + 1 {
                phi.set(f.face_unchecked(alg, k), random_coeff(rng));
            }
        }
        let value: Rat = (0..=m + 2).map(|i| sign::<Rat>(i) * coboundary_at(&phi, &a.face_unchecked(alg, i), alg)).sum();
        dd_co.record(value.is_negligible(), || format!("{:?}", a.entries()));
    }
    // Whole-space comparison where S^{n+2} is small.
    let mut degree = 0;
    while (alg.size() as u128).pow(degree as u32 + 2) <= 50_000 && degree <= cfg.max_degree {
        for _ in 0..3 {
            let mut psi = Cochain::zero(degree);
            for _ in 0..20 {
                psi.set(ElemTensor::new(random_tuple(alg.size(), degree + 1, rng)), random_coeff(rng));
            }
            agree.record(coboundary(&psi, alg) == coboundary_adjoint(&psi, alg), || format!("degree {degree}"));
        }
        degree += 1;
    }
    if agree.cases == 0 {
        agree.skip("tuple space too large for a whole-space comparison".into());
    }
    vec![dd_full.finish(), dd_red.finish(), cyc.finish(), adj.finish(), dd_co.finish(), agree.finish()]
}

/// Face/insertion commutation rules, `ρ`, and the `Q` products.
pub fn insertion_identities<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let mut before = Tally::new("face-before-insertion-commutes");
    let mut at = Tally::new("face-at-insertion-is-signed-identity");
    let mut after = Tally::new("face-after-insertion-commutes");
    let mut rho_face = Tally::new("rho-is-face-of-next-insertion");
    let mut face_rho = Tally::new("face-absorbs-rho");
    let mut products = Tally::new("q-products-equal-q-tilde-products");
    let mut kernels = Tally::new("q-products-land-in-rho-kernels");
    let mut rho_qt = Tally::new("rho-kills-q-tilde");
    let mut last = Tally::new("last-step-annihilates-q-tilde");
    for n in 1..=3usize {
        for x in tuples(alg.size(), n + 1, cfg, rng) {
            let c = Chain::<Rat>::from_tensor(ElemTensor::new(x.clone()));
            let w = || format!("{x:?}");
            let f = |c: &Chain<Rat>, i: usize| crate::chain::face(c, i, alg);
            let s = |c: &Chain<Rat>, k: usize| insert_lcu(c, k, alg);
            for k in 1..=n + 1 {
                for i in 1..=n + 1 {
                    let lhs = s(&c, k).and_then(|sc| f(&sc, i));
                    if i + 2 <= k {
                        let rhs = f(&c, i).and_then(|fc| s(&fc, k - 1)).map(|v| -v);
                        before.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("{x:?} i={i} k={k}"));
                    } else if i == k {
                        at.record_result(lhs.map(|l| l == c.scaled(&sign(i))), || format!("{x:?} i={i}"));
                    } else if k + 2 <= i {
                        let rhs = f(&c, i - 1).and_then(|fc| s(&fc, k));
                        after.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("{x:?} i={i} k={k}"));
                    }
                }
            }
            for i in 1..=n {
                let r = rho(&c, i, alg);
                let via_face = s(&c, i + 1).and_then(|sc| f(&sc, i)).map(|v| v.scaled(&sign(i + 1)));
                rho_face.record_result(r.clone().and_then(|r| via_face.map(|v| v == r)), w);
                face_rho.record_result(r.and_then(|r| Ok(f(&r, i)? == f(&c, i)?)), w);
            }
            let mut qs = c.clone();
            let mut qts = c.clone();
            for r in 1..=n {
                qs = match q_op(&qs, r, alg) {
                    Ok(v) => v,
                    Err(e) => {
                        products.record(false, || format!("{x:?}: {e}"));
                        break;
                    }
                };
                qts = qtilde(&qts, r, alg).expect("index checked by q_op");
                products.record(qs == qts, || format!("{x:?} r={r}"));
                for i in 1..=r {
                    kernels.record_result(rho(&qs, i, alg).map(|z| z.is_zero()), || format!("{x:?} r={r} i={i}"));
                }
                rho_qt.record_result(
                    qtilde(&c, r, alg).and_then(|v| rho(&v, r, alg)).map(|z| z.is_zero()),
                    || format!("{x:?} k={r}"),
                );
            }
            // (s_n d + d s_{n+1} - I) Q̃_n with the reduced boundary
            let check_last = || -> Result<bool> {
                let v = qtilde(&c, n, alg)?;
                let mut z = boundary(&s(&v, n + 1)?, true, alg)?;
                if n >= 1 {
                    z += &s(&boundary(&v, true, alg)?, n)?;
                }
                z -= &v;
                Ok(z.is_zero())
            };
            last.record_result(check_last(), w);
        }
    }
    [before, at, after, rho_face, face_rho, products, kernels, rho_qt, last].into_iter().map(Tally::finish).collect()
}

// ---------------------------------------------------------------- exactness

fn exactness<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let mut dims = Tally::new("reduced-kernel-equals-image");
    let mut preimages = Tally::new("kernel-basis-preimages");
    let mut deg0 = Tally::new("degree-zero-preimages");
    let mut hh = Tally::new("hochschild-vanishes-in-positive-degree");
    let mut hc = Tally::new("cyclic-dimensions-match-traces");
    let mut two_ways = Tally::new("cyclic-cochain-dimension-two-ways");
    let mut indep = Tally::new("trace-classes-independent");
    let l = alg.semilattice_size();
    for n in 1..=2 {
        match reduced_exactness::<Rat>(alg, n, cfg.budget) {
            Ok(d) => dims.record(d.is_exact(), || format!("degree {n}: zr {} br {}", d.zr, d.br)),
            Err(e) => dims.skip(format!("degree {n}: {e}")),
        }
        match reduced_cycle_basis::<Rat>(alg, n, cfg.budget) {
            Ok(basis) => {
                for z in basis {
                    let r = hunital_preimage(&z, alg).and_then(|w| Ok(boundary(&w, true, alg)? == z));
                    preimages.record_result(r, || show(&z));
                }
            }
            Err(e) => preimages.skip(format!("degree {n}: {e}")),
        }
        match hh_dim::<Rat>(alg, n, cfg.budget) {
            Ok(d) => hh.record(d == 0, || format!("degree {n}: dim {d}")),
            Err(e) => hh.skip(format!("degree {n}: {e}")),
        }
    }
    for _ in 0..cfg.samples.min(50) {
        let a = random_chain(alg, 0, 3, rng);
        deg0.record_result(hunital_preimage(&a, alg).and_then(|w| Ok(boundary(&w, true, alg)? == a)), || show(&a));
    }
    for n in 0..=2 {
        match hc_dim::<Rat>(alg, n, cfg.budget) {
            Ok(d) => {
                let expected = if n % 2 == 0 { l } else { 0 };
                hc.record(d == expected, || format!("degree {n}: dim {d}, expected {expected}"));
            }
            Err(e) => hc.skip(format!("degree {n}: {e}")),
        }
        match cyclic_dim_by_projector::<Rat>(alg.size(), n, cfg.budget) {
            Ok(p) => {
                let o = cyclic_dim_by_orbits(alg.size(), n);
                two_ways.record(p == o, || format!("degree {n}: projector {p}, orbits {o}"));
            }
            Err(e) => two_ways.skip(format!("degree {n}: {e}")),
        }
    }
    match trace_classes_independent::<Rat>(alg, 2, cfg.budget) {
        Ok(ok) => indep.record(ok, || "degree 2".into()),
        Err(e) => indep.skip(format!("degree 2: {e}")),
    }
    [dims, preimages, deg0, hh, hc, two_ways, indep].into_iter().map(Tally::finish).collect()
}

// ---------------------------------------------------------------- filtration

/// Checks of the left-block combinatorics on every tensor of degree `1..=3`
/// (sampled when the space is large).
fn filtration<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let cache = PositionCache::new(alg);
    let mut t = FiltrationTallies::new();
    for n in 1..=3usize {
        for x in tuples(alg.size(), n + 1, cfg, rng) {
            filtration_checks(&x, alg, &cache, &mut t);
        }
    }
    t.finish()
}

struct FiltrationTallies {
    invariants: Tally,
    equivariance: Tally,
    faces: Tally,
    heights: Tally,
    descents: Tally,
    cases: Tally,
    err_descent: Tally,
    pinching: Tally,
    diagonal: Tally,
    lower_height: Tally,
    cancel: Tally,
    bracket_cyclic: Tally,
    bracket_strict: Tally,
    p_congruence: Tally,
}

impl FiltrationTallies {
    fn new() -> Self {
        FiltrationTallies {
            invariants: Tally::new("block-structure-invariants"),
            equivariance: Tally::new("initial-points-rotate-with-tensor"),
            faces: Tally::new("faces-do-not-increase-left-blocks"),
            heights: Tally::new("height-bounds"),
            descents: Tally::new("descent-bounds"),
            cases: Tally::new("initial-point-case-split"),
            err_descent: Tally::new("error-terms-lower-descent"),
            pinching: Tally::new("face-drops-left-blocks-iff-one-block-or-dead-spot"),
            diagonal: Tally::new("diagonal-face-pairs-touch-initial-points"),
            lower_height: Tally::new("unit-faces-lower-height"),
            cancel: Tally::new("off-diagonal-terms-cancel"),
            bracket_cyclic: Tally::new("homotopy-matches-brackets-mod-cyclic"),
            bracket_strict: Tally::informational("homotopy-matches-brackets-without-cyclic"),
            p_congruence: Tally::new("p-operator-congruence"),
        }
    }

    fn finish(self) -> Vec<Check> {
        [
            self.invariants,
            self.equivariance,
            self.faces,
            self.heights,
            self.descents,
            self.cases,
            self.err_descent,
            self.pinching,
            self.diagonal,
            self.lower_height,
            self.cancel,
            self.bracket_cyclic,
            self.bracket_strict,
            self.p_congruence,
        ]
        .into_iter()
        .map(Tally::finish)
        .collect()
    }
}

fn face_of(x: &[usize], p: usize, alg: &BandAlgebra) -> Vec<usize> {
    ElemTensor::from(x).face_unchecked(alg, p).into_entries()
}

fn filtration_checks(x: &[usize], alg: &BandAlgebra, cache: &PositionCache<'_>, t: &mut FiltrationTallies) {
    let n = x.len() - 1;
    let n1 = n + 1;
    let dec = alg.decomposition();
    let bs = block_structure(x, alg);
    let shape = alg.shape(x);
    let w = || format!("{x:?}");
    let j = bs.j;

    t.invariants.record(block_invariants_hold(&bs), w);

    let rotated = ElemTensor::from(x).rotate();
    let br = block_structure(&rotated, alg);
    let shift = |v: &[usize]| v.iter().map(|&i| wrap(i + 1, n1)).collect::<BTreeSet<_>>();
    let same = shift(&bs.initial) == br.initial.iter().copied().collect()
        && shift(&bs.min_initial) == br.min_initial.iter().copied().collect();
    // an all-minimal tensor has its single initial point pinned at 1
    if bs.minimal_count() < n1 {
        t.equivariance.record(same, w);
    }

    for p in 0..n1.min(n + 1) {
        if n == 0 {
            break;
        }
        t.faces.record(left_block_count(&face_of(x, p, alg), alg) <= j, || format!("{x:?} p={p}"));
    }

    if bs.has_min {
        return;
    }
    let stats = tensor_stats(x, alg);
    t.heights.record(n < stats.height && stats.height <= n * (n + 1), w);
    let r = bs.r_set.len();
    t.descents.record(r <= stats.descent && stats.descent <= (j - 1) * (n - 1), w);

    // the four cases for each initial point
    for &i in &bs.initial {
        let next = wrap(i + 1, n1);
        let prod = alg.mul(x[i - 1], x[next - 1]);
        let mut a = x.to_vec();
        a[i - 1] = alg.lcu(prod);
        a[next - 1] = prod;
        let mut b = x.to_vec();
        b[i - 1] = alg.lcu(x[i - 1]);
        b[next - 1] = prod;
        let one = bs.is_one_block(i);
        let c1 = !one;
        let c2 = one && !dec.leq(shape[next - 1], shape[i - 1]);
        let c3 = bs.block_units.contains(&i);
        let c4 = bs.r_set.contains(&i);
        let exactly_one = [c1, c2, c3, c4].iter().filter(|&&c| c).count() == 1;
        let (lb_x, h_x) = cache.get(x);
        let claim = if c1 {
            a == b
        } else if c2 {
            let (lb_b, h_b) = cache.get(&b);
            lb_b < lb_x || (lb_b == lb_x && h_b < h_x)
        } else if c3 {
            b == x
        } else {
            true
        };
        let merged = c1 || cache.get(&a).0 < lb_x;
        t.cases.record(exactly_one && claim && merged, || format!("{x:?} i={i} cases {:?}", [c1, c2, c3, c4]));
    }

    for &i in &bs.r_set {
        let y = pinch_unit(x, i, alg);
        let ys = tensor_stats(&y, alg);
        t.err_descent.record(ys.shape == stats.shape && ys.descent < stats.descent, || format!("{x:?} i={i}"));
    }

    // ∂_p drops the left-block count iff x_p is a one-block or p+1 is a dead spot
    for p in 0..=n {
        let pos = if p == 0 { n1 } else { p };
        let drops = left_block_count(&face_of(x, p, alg), alg) < j;
        let predicted = bs.is_one_block(pos) || bs.dead_spots.contains(&(p + 1));
        t.pinching.record(drops == predicted, || format!("{x:?} p={p}"));
    }

    let initial: BTreeSet<usize> = bs.initial.iter().copied().collect();
    for p in 0..=n {
        let y = face_of(x, p, alg);
        let by = block_structure(&y, alg);
        if by.has_min || by.j != j {
            continue;
        }
        if p >= 1 && by.initial.contains(&p) {
            t.diagonal.record(initial.contains(&p) || initial.contains(&(p + 1)), || format!("{x:?} (i,p)=({p},{p})"));
        }
        if p == 0 && by.initial.contains(&n) {
            t.diagonal.record(initial.contains(&n1) || initial.contains(&1), || format!("{x:?} (i,p)=({n},0)"));
        }
    }

    let hx = stats.height;
    for k in 0..=n {
        if initial.contains(&(k + 1)) {
            let y = face_of(&insert_at(x, k + 1, alg), k, alg);
            t.lower_height.record(height(&y, alg) < hx, || format!("{x:?} face {k} of insertion {}", k + 1));
            if k >= 1 {
                let y = insert_at(&face_of(x, k, alg), k, alg);
                t.lower_height.record(height(&y, alg) < hx, || format!("{x:?} insertion {k} of face {k}"));
            }
        }
    }
    if initial.contains(&1) && n >= 1 {
        let y = insert_at(&face_of(x, 0, alg), n, alg);
        t.lower_height.record(height(&y, alg) < hx, || format!("{x:?} insertion {n} of face 0"));
    }

    t.cancel.record_result(off_diagonal_cancellation(x, &bs, alg), w);

    let c = Chain::<Rat>::from_tensor(ElemTensor::from(x));
    let h = hx as i64;
    match homotopy_sum(&c, alg) {
        Ok(hs) => {
            let defect = &hs - &bracket_terms::<Rat>(x, alg);
            t.bracket_cyclic.record(cache.in_span(&defect, j, h - 1, true), || format!("{x:?}: {}", show(&defect)));
            t.bracket_strict.record(cache.in_span(&defect, j, h - 1, false), || format!("{x:?}: {}", show(&defect)));
        }
        Err(e) => t.bracket_cyclic.record(false, || format!("{x:?}: {e}")),
    }

    let units = bs.block_units.len() as i64;
    let e = err::<Rat>(x, alg);
    for k in 1..=j {
        let kk = k as i64;
        let coeff = q(1) - Rat::new(((j as i64) - units).into(), kk.into());
        let r = p_op(&c, k, alg).map(|pk| {
            let rest = &(&pk - &c.scaled(&coeff)) - &e.scaled(&Rat::new(1.into(), kk.into()));
            cache.in_span(&rest, j, h - 1, true)
        });
        t.p_congruence.record_result(r, || format!("{x:?} k={k}"));
    }
}

fn block_invariants_hold(bs: &BlockStructure) -> bool {
    if bs.has_min {
        return bs.j == 1 && bs.left_blocks.is_empty() && !bs.minimal_blocks.is_empty();
    }
    let n1 = bs.degree + 1;
    let mut covered: Vec<usize> = bs.left_blocks.iter().flat_map(|b| b.positions(n1).collect::<Vec<_>>()).collect();
    covered.sort_unstable();
    let tiles = covered == (1..=n1).collect::<Vec<_>>();
    let units_are_one_blocks = bs.block_units.iter().all(|&i| bs.is_one_block(i));
    let disjoint = bs.r_set.iter().all(|i| !bs.block_units.contains(i));
    let small = bs.r_set.len() < bs.j && bs.block_units.len() < bs.j;
    tiles && units_are_one_blocks && disjoint && small && bs.j >= 2
}

/// The pairs `(i, p)` with `s_i ∂_p x` and `(r, k)` with `∂_r s_k x` whose
/// tensors keep all `j` left-blocks, restricted to the off-diagonal ranges,
/// are matched by `(r, k) ↦ (k, r-1)` when `k < r-1` and `(k-1, r)` otherwise,
/// and the signed terms cancel.
pub fn off_diagonal_cancellation(x: &[usize], bs: &BlockStructure, alg: &BandAlgebra) -> Result<bool> {
    if bs.has_min {
        return Ok(true);
    }
    let n = x.len() - 1;
    let j = bs.j;
    let mut sd = BTreeSet::new();
    for p in 0..=n {
        let y = face_of(x, p, alg);
        let by = block_structure(&y, alg);
        if by.has_min || by.j != j {
            continue;
        }
        for &i in &by.initial {
            let a = 1 <= i && i < p && p <= n;
            let b = 1 <= p && p < i && i <= n;
            let c = p == 0 && 1 <= i && i < n;
            if a || b || c {
                sd.insert((i, p));
            }
        }
    }
    let in_a = |r: usize, k: usize| 1 <= k && k + 1 < r && r <= n + 1;
    let mut ds = BTreeSet::new();
    for &k in &bs.initial {
        let sk = insert_at(x, k, alg);
        for r in 0..=n + 1 {
            if left_block_count(&face_of(&sk, r, alg), alg) != j {
                continue;
            }
            let b = 1 <= r && r + 1 < k && k <= n + 1;
            let c = r == 0 && 2 <= k && k <= n;
            if in_a(r, k) || b || c {
                ds.insert((r, k));
            }
        }
    }
    let image: BTreeSet<(usize, usize)> =
        ds.iter().map(|&(r, k)| if in_a(r, k) { (k, r - 1) } else { (k - 1, r) }).collect();
    if image.len() != ds.len() || image != sd {
        return Ok(false);
    }
    let mut total = Chain::<Rat>::zero(n);
    for &(r, k) in &ds {
        let t = ElemTensor::new(insert_at(x, k, alg).into_entries()).face_unchecked(alg, r);
        total.add_term(t, sign(r + k));
    }
    for &(i, p) in &sd {
        total.add_term(insert_at(&face_of(x, p, alg), i, alg), sign(p + i));
    }
    Ok(total.is_zero())
}

// ---------------------------------------------------------------- pipeline

/// A random cyclic cocycle: an integer combination of a basis of `ker δ` on cyclic cochains.
pub fn random_cyclic_cocycle<R: Rng>(alg: &BandAlgebra, n: usize, budget: u128, rng: &mut R) -> Result<Cochain<Rat>> {
    let (m, src, _) = cyclic_coboundary_matrix::<Rat>(alg, n, budget)?;
    let mut coords = vec![q(0); src.len()];
    for b in m.kernel_basis() {
        let c = q(rng.random_range(-3..=3));
        for (x, y) in coords.iter_mut().zip(&b) {
            *x += c.clone() * y.clone();
        }
    }
    Ok(src.cochain(&coords))
}

/// A random cyclic cochain of degree `n`.
pub fn random_cyclic_cochain<R: Rng>(size: usize, n: usize, rng: &mut R) -> Cochain<Rat> {
    let basis = CyclicBasis::new(size, n);
    let coords: Vec<Rat> = (0..basis.len()).map(|_| q(rng.random_range(-3..=3))).collect();
    basis.cochain(&coords)
}

fn is_trace(tau: &Cochain<Rat>, alg: &BandAlgebra) -> bool {
    let dec = alg.decomposition();
    let constant = dec.components().iter().all(|comp| comp.iter().all(|&e| tau.value(&[e]) == tau.value(&[comp[0]])));
    constant && coboundary(tau, alg).is_zero()
}

fn pipeline<R: Rng>(alg: &BandAlgebra, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let mut exact = Tally::new("cobound-witness-is-exact");
    let mut odd = Tally::new("no-trace-part-in-odd-degree");
    let mut trace = Tally::new("trace-part-is-a-trace");
    let mut cyclic = Tally::new("primitive-is-cyclic");
    let mut coboundaries = Tally::new("coboundaries-have-no-trace-part");
    let mut traces = Tally::new("trace-cocycles-recover-their-trace");
    for n in 1..=3usize {
        for case in 0..cfg.cocycles {
            let psi = match random_cyclic_cocycle(alg, n, cfg.budget, rng) {
                Ok(p) => p,
                Err(e) => {
                    exact.skip(format!("degree {n}: {e}"));
                    break;
                }
            };
            let w = || format!("degree {n} cocycle #{case}");
            match cobound_cyclic(&psi, alg) {
                Ok(wit) => {
                    exact.record(check_witness(&psi, wit.tau.as_ref(), &wit.chi, alg).is_ok(), w);
                    if n % 2 == 1 {
                        odd.record(wit.tau.is_none(), w);
                    } else {
                        trace.record(wit.tau.as_ref().is_some_and(|t| is_trace(t, alg)), w);
                    }
                    cyclic.record(wit.chi.is_cyclic(), w);
                }
                Err(e) => exact.record(false, || format!("{}: {e}", w())),
            }
        }
        if (alg.size() as u128).pow(n as u32 + 2) > cfg.budget {
            continue;
        }
        for case in 0..cfg.cocycles.min(5) {
            let phi = random_cyclic_cochain(alg.size(), n - 1, rng);
            let psi = coboundary(&phi, alg);
            let r = cobound_cyclic(&psi, alg).map(|wit| wit.tau.as_ref().is_none_or(Cochain::is_zero));
            coboundaries.record_result(r, || format!("degree {n} coboundary #{case}"));
        }
        if n % 2 == 0 {
            for (k, basis_tau) in trace_basis::<Rat>(alg).into_iter().enumerate() {
                let tau0 = basis_tau.scaled(&q(k as i64 + 2));
                let r = trace_cocycle(&tau0, n, alg)
                    .and_then(|psi| cobound_cyclic(&psi, alg))
                    .map(|wit| wit.tau.as_ref() == Some(&tau0));
                traces.record_result(r, || format!("degree {n} trace #{k}"));
            }
        }
    }
    [exact, odd, trace, cyclic, coboundaries, traces].into_iter().map(Tally::finish).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{make_free_band, make_free_semilattice, make_rectangular};
    use rand::SeedableRng;

    fn rng() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(7)
    }

    fn small() -> VerifyConfig {
        VerifyConfig { samples: 20, max_degree: 3, exhaustive_limit: 300, cocycles: 2, ..VerifyConfig::default() }
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn identities_pass_on_free_band() {
        let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
        let report = run_suite(Suite::Identities, &alg, &small(), &mut rng());
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn filtration_passes_on_semilattice() {
        let alg = BandAlgebra::new(make_free_semilattice(2).unwrap()).unwrap();
        let report = run_suite(Suite::Filtration, &alg, &small(), &mut rng());
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn pipeline_passes_on_rectangular() {
        let alg = BandAlgebra::new(make_rectangular(2, 2).unwrap()).unwrap();
        let report = run_suite(Suite::Pipeline, &alg, &small(), &mut rng());
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn failing_check_is_reported() {
        let mut t = Tally::new("x");
        t.record(true, || unreachable!());
        t.record(false, || "witness".into());
        t.record(false, || "second".into());
        let c = t.finish();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.cases, 3);
        assert_eq!(c.counterexample.as_deref(), Some("witness"));
    }
}
