//! Finite band semigroups, their decomposition into rectangular components
//! over the structure semilattice, and left-coherent units.
//!
//! Elements are identified by their index `0..size`; labels are cosmetic.

use crate::error::{Error, Result};
use crate::free_band;

/// Largest band this crate will materialize a multiplication table for.
pub const MAX_BAND_SIZE: usize = 4096;

/// A finite band: an idempotent, associative multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    size: usize,
    table: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Band {
    /// Validates a square table and returns the band it describes.
    ///
    /// Errors report the first offending index or triple.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::EmptyTable);
        }
        if size > MAX_BAND_SIZE {
            return Err(Error::SizeOverflow { requested: size as u128, max: MAX_BAND_SIZE });
        }
        let mut table = Vec::with_capacity(size * size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::RaggedTable { row: x, len: row.len(), size });
            }
            for (y, &value) in row.iter().enumerate() {
                if value >= size {
                    return Err(Error::EntryOutOfRange { x, y, value, size });
                }
            }
            table.extend_from_slice(row);
        }
        let band = Band { size, table, labels: None };
        band.validate()?;
        Ok(band)
    }

    /// Builds a band from a table that is correct by construction.
    pub(crate) fn from_trusted(size: usize, table: Vec<usize>, labels: Option<Vec<String>>) -> Self {
        debug_assert_eq!(table.len(), size * size);
        Band { size, table, labels }
    }

    /// Checks idempotency, then associativity.
    pub fn validate(&self) -> Result<()> {
        for x in 0..self.size {
            let product = self.mul(x, x);
            if product != x {
                return Err(Error::NotIdempotent { x, product });
            }
        }
        for x in 0..self.size {
            for y in 0..self.size {
                let xy = self.mul(x, y);
                for z in 0..self.size {
                    let left = self.mul(xy, z);
                    let right = self.mul(x, self.mul(y, z));
                    if left != right {
                        return Err(Error::NotAssociative { x, y, z, left, right });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::LabelCount { got: labels.len(), size: self.size });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    /// Product of a nonempty sequence of elements.
    pub fn product(&self, xs: &[usize]) -> usize {
        let (&first, rest) = xs.split_first().expect("product of an empty sequence");
        rest.iter().fold(first, |acc, &x| self.mul(acc, x))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }
}

/// The rectangular band `A × B` with `(a1,b1)(a2,b2) = (a1,b2)`, elements in
/// row-major order: index `a * q + b`.
pub fn make_rectangular(p: usize, q: usize) -> Result<Band> {
    if p == 0 {
        return Err(Error::ParameterOutOfRange { what: "p", value: p, range: ">= 1" });
    }
    if q == 0 {
        return Err(Error::ParameterOutOfRange { what: "q", value: q, range: ">= 1" });
    }
    let size = (p as u128) * (q as u128);
    if size > MAX_BAND_SIZE as u128 {
        return Err(Error::SizeOverflow { requested: size, max: MAX_BAND_SIZE });
    }
    let size = p * q;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            table.push((x / q) * q + y % q);
        }
    }
    let labels = (0..size).map(|x| format!("({},{})", x / q, x % q)).collect();
    Ok(Band::from_trusted(size, table, Some(labels)))
}

/// Nonempty subsets of `{1..k}` under union. Element `i` is the subset whose
/// bitmask is `i + 1`.
pub fn make_free_semilattice(k: usize) -> Result<Band> {
    if k == 0 || k > 16 {
        return Err(Error::ParameterOutOfRange { what: "k", value: k, range: "1..=16" });
    }
    let size = (1u128 << k) - 1;
    if size > MAX_BAND_SIZE as u128 {
        return Err(Error::SizeOverflow { requested: size, max: MAX_BAND_SIZE });
    }
    let size = size as usize;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            table.push(((x + 1) | (y + 1)) - 1);
        }
    }
    let labels = (0..size)
        .map(|x| {
            let mask = x + 1;
            let members: Vec<String> =
                (0..k).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    Ok(Band::from_trusted(size, table, Some(labels)))
}

/// The free band on `k ≤ 3` generators, elements labelled by their shortest
/// (then lexicographically least) representative word.
pub fn make_free_band(k: usize) -> Result<Band> {
    free_band::free_band(k)
}

/// The small test bands: generated families plus a few hand-written tables.
pub fn corpus() -> Vec<(&'static str, Band)> {
    let table = |rows: &[&[usize]]| Band::from_table(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("corpus table is a band");
    vec![
        ("singleton", table(&[&[0]])),
        ("chain3", table(&[&[0, 0, 0], &[0, 1, 1], &[0, 1, 2]])),
        ("left-zero-over-zero", table(&[&[0, 0, 0], &[0, 1, 1], &[0, 2, 2]])),
        ("free-semilattice-2", make_free_semilattice(2).expect("k = 2")),
        ("free-semilattice-3", make_free_semilattice(3).expect("k = 3")),
        ("rectangular-1x3", make_rectangular(1, 3).expect("1x3")),
        ("rectangular-2x2", make_rectangular(2, 2).expect("2x2")),
        ("rectangular-2x3", make_rectangular(2, 3).expect("2x3")),
        ("free-band-2", make_free_band(2).expect("k = 2")),
        ("left-zero-2-x-semilattice-4", left_zero_times_semilattice()),
    ]
}

/// `{0,1} × L` with `(u,α)(v,β) = (u, αβ)`, where `L = {0, a, c, ab}` is the
/// meet-semilattice of the sets `∅, {a}, {c}, {a,b}` under intersection.
/// Tensors such as `((0,c), (0,ab), (1,a))` have one-blocks that are not
/// block-units.
fn left_zero_times_semilattice() -> Band {
    const MEET: [[usize; 4]; 4] = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 0], [0, 1, 0, 3]];
    let rows = (0..8)
        .map(|x: usize| (0..8).map(|y: usize| (x & 4) | MEET[x & 3][y & 3]).collect())
        .collect::<Vec<_>>();
    Band::from_table(&rows).expect("product of bands")
}

/// True iff `xaby = xbay` for every quadruple.
pub fn is_normal(band: &Band) -> bool {
    let n = band.size();
    for a in 0..n {
        for b in 0..n {
            let ab = band.mul(a, b);
            let ba = band.mul(b, a);
            if ab == ba {
                continue;
            }
            for x in 0..n {
                let xab = band.mul(x, ab);
                let xba = band.mul(x, ba);
                for y in 0..n {
                    if band.mul(xab, y) != band.mul(xba, y) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Rectangular components `R_α` indexed by the structure semilattice `L`.
///
/// Component ids are ordered by the least element they contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    component_of: Vec<usize>,
    semilattice_mult: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn semilattice_size(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn component_of(&self, x: usize) -> usize {
        self.component_of[x]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    #[inline]
    pub fn meet(&self, alpha: usize, beta: usize) -> usize {
        self.semilattice_mult[alpha * self.components.len() + beta]
    }

    /// `α ⪯ β` iff `αβ = α`.
    #[inline]
    pub fn leq(&self, alpha: usize, beta: usize) -> bool {
        self.meet(alpha, beta) == alpha
    }

    #[inline]
    pub fn lt(&self, alpha: usize, beta: usize) -> bool {
        alpha != beta && self.leq(alpha, beta)
    }

    pub fn semilattice_rows(&self) -> Vec<Vec<usize>> {
        let l = self.components.len();
        self.semilattice_mult.chunks(l).map(|r| r.to_vec()).collect()
    }
}

/// Splits a band into classes of `a ~ b ⇔ aba = a ∧ bab = b`.
pub fn decompose(band: &Band) -> Result<Decomposition> {
    let n = band.size();
    let related = |a: usize, b: usize| band.mul(band.mul(a, b), a) == a && band.mul(band.mul(b, a), b) == b;
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if component_of[x] != usize::MAX {
            continue;
        }
        let id = components.len();
        let members: Vec<usize> = (x..n).filter(|&y| component_of[y] == usize::MAX && related(x, y)).collect();
        for &y in &members {
            component_of[y] = id;
        }
        components.push(members);
    }
    // The relation must be an equivalence: related within classes, unrelated across.
    for a in 0..n {
        for b in 0..n {
            if related(a, b) != (component_of[a] == component_of[b]) {
                return Err(Error::Internal(format!(
                    "rectangular-component relation is not an equivalence at ({a},{b})"
                )));
            }
        }
    }
    let l = components.len();
    let mut semilattice_mult = vec![0; l * l];
    for alpha in 0..l {
        for beta in 0..l {
            semilattice_mult[alpha * l + beta] =
                component_of[band.mul(components[alpha][0], components[beta][0])];
        }
    }
    for x in 0..n {
        for y in 0..n {
            let expected = semilattice_mult[component_of[x] * l + component_of[y]];
            if component_of[band.mul(x, y)] != expected {
                return Err(Error::Internal(format!("R_[{x}] R_[{y}] is not inside a single component")));
            }
        }
    }
    Ok(Decomposition { component_of, semilattice_mult, components })
}

/// Left-coherent units `lcu(x) = x · y_[x]` for fixed representatives `y_α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcuMap {
    rep: Vec<usize>,
    lcu: Vec<usize>,
}

impl LcuMap {
    pub fn rep(&self, alpha: usize) -> usize {
        self.rep[alpha]
    }

    #[inline]
    pub fn lcu(&self, x: usize) -> usize {
        self.lcu[x]
    }

    pub fn reps(&self) -> &[usize] {
        &self.rep
    }
}

/// Uses the least element of each component as its representative.
pub fn assign_lcu(band: &Band, dec: &Decomposition) -> Result<LcuMap> {
    let reps: Vec<usize> = dec.components().iter().map(|c| c[0]).collect();
    assign_lcu_with_reps(band, dec, &reps)
}

/// Builds the map from explicit representatives and checks every law.
pub fn assign_lcu_with_reps(band: &Band, dec: &Decomposition, reps: &[usize]) -> Result<LcuMap> {
    if reps.len() != dec.semilattice_size() {
        return Err(Error::Dimension(format!(
            "{} representatives for {} components",
            reps.len(),
            dec.semilattice_size()
        )));
    }
    for (alpha, &r) in reps.iter().enumerate() {
        if r >= band.size() || dec.component_of(r) != alpha {
            return Err(Error::Internal(format!("representative {r} is not in component {alpha}")));
        }
    }
    let lcu: Vec<usize> = (0..band.size()).map(|x| band.mul(x, reps[dec.component_of(x)])).collect();
    let map = LcuMap { rep: reps.to_vec(), lcu };
    check_lcu_laws(band, dec, &map).map_err(|(law, witness)| {
        Error::Internal(format!("left-coherent unit law '{law}' fails at {witness:?}"))
    })?;
    Ok(map)
}

/// Exhaustively checks the unit laws; returns the first failing law and witness.
pub fn check_lcu_laws(band: &Band, dec: &Decomposition, map: &LcuMap) -> std::result::Result<(), (&'static str, Vec<usize>)> {
    let n = band.size();
    for x in 0..n {
        let u = map.lcu(x);
        if dec.component_of(u) != dec.component_of(x) {
            return Err(("lcu(R_a) in R_a", vec![x]));
        }
        if band.mul(u, x) != x {
            return Err(("lcu(x) x = x", vec![x]));
        }
        if map.lcu(u) != u {
            return Err(("lcu(lcu(y)) = lcu(y)", vec![x]));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = band.mul(x, y);
            if dec.leq(dec.component_of(x), dec.component_of(y)) && map.lcu(xy) != map.lcu(x) {
                return Err(("lcu(xy) = lcu(x) when [x] <= [y]", vec![x, y]));
            }
            if band.mul(map.lcu(x), map.lcu(xy)) != map.lcu(xy) {
                return Err(("lcu(y) lcu(yz) = lcu(yz)", vec![x, y]));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_table_is_a_band() {
        let b = Band::from_table(&[vec![0]]).unwrap();
        assert_eq!(b.size(), 1);
    }

    #[test]
    fn two_element_chain_is_a_band() {
        // e = 0, f = 1, ef = fe = f
        let b = Band::from_table(&[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(b.mul(0, 1), 1);
        assert!(is_normal(&b));
    }

    #[test]
    fn idempotency_violation_is_reported() {
        let err = Band::from_table(&[vec![1, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, Error::NotIdempotent { x: 0, product: 1 });
    }

    #[test]
    fn associativity_violation_is_reported() {
        // idempotent but not associative: left zero on {0,1}, with 2 mixing them
        let rows = vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 0, 2]];
        match Band::from_table(&rows) {
            Err(Error::NotAssociative { .. }) => {}
            other => panic!("expected associativity error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert_eq!(Band::from_table(&[]), Err(Error::EmptyTable));
        assert!(matches!(Band::from_table(&[vec![0, 1], vec![1]]), Err(Error::RaggedTable { row: 1, .. })));
        assert!(matches!(Band::from_table(&[vec![3]]), Err(Error::EntryOutOfRange { .. })));
    }

    #[test]
    fn rectangular_product_rule() {
        let b = make_rectangular(2, 3).unwrap();
        // (0,1) = 1, (1,2) = 5, product (0,2) = 2
        assert_eq!(b.mul(1, 5), 2);
        let r = make_rectangular(2, 2).unwrap();
        for a in 0..4 {
            for bb in 0..4 {
                for c in 0..4 {
                    assert_eq!(r.product(&[a, bb, c]), r.mul(a, c));
                }
            }
        }
        assert_eq!(make_rectangular(1, 1).unwrap().size(), 1);
    }

    #[test]
    fn free_semilattice_union() {
        assert_eq!(make_free_semilattice(1).unwrap().size(), 1);
        let b = make_free_semilattice(2).unwrap();
        assert_eq!(b.size(), 3);
        // {1} = 0, {2} = 1, {1,2} = 2
        assert_eq!(b.mul(0, 1), 2);
        assert_eq!(b.label(2), "{1,2}");
        let b3 = make_free_semilattice(3).unwrap();
        assert_eq!(b3.size(), 7);
        let dec = decompose(&b3).unwrap();
        for x in 0..7 {
            for y in 0..7 {
                // α ⪯ β ⇔ αβ = α is a partial order: antisymmetry
                if dec.leq(x, y) && dec.leq(y, x) {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn oversize_generators_fail() {
        assert!(matches!(make_free_semilattice(13), Err(Error::SizeOverflow { .. })));
        assert!(matches!(make_free_semilattice(17), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(make_rectangular(0, 2), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(make_rectangular(100, 100), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn decomposition_of_rectangular_and_semilattice() {
        let dec = decompose(&make_rectangular(2, 3).unwrap()).unwrap();
        assert_eq!(dec.semilattice_size(), 1);
        assert_eq!(dec.components()[0].len(), 6);
        let dec = decompose(&make_free_semilattice(2).unwrap()).unwrap();
        assert_eq!(dec.semilattice_size(), 3);
        assert!(dec.components().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn lcu_on_rectangular_2x2() {
        let b = make_rectangular(2, 2).unwrap();
        let dec = decompose(&b).unwrap();
        let lcu = assign_lcu(&b, &dec).unwrap();
        assert_eq!(lcu.rep(0), 0);
        // (1,1) = 3, (1,1)(0,0) = (1,0) = 2
        assert_eq!(lcu.lcu(3), 2);
    }

    #[test]
    fn lcu_is_identity_on_semilattices() {
        let b = make_free_semilattice(3).unwrap();
        let dec = decompose(&b).unwrap();
        let lcu = assign_lcu(&b, &dec).unwrap();
        assert!((0..b.size()).all(|x| lcu.lcu(x) == x));
    }

    #[test]
    fn bad_representatives_are_rejected() {
        let b = make_free_semilattice(2).unwrap();
        let dec = decompose(&b).unwrap();
        assert!(assign_lcu_with_reps(&b, &dec, &[1, 0, 2]).is_err());
        assert!(assign_lcu_with_reps(&b, &dec, &[0]).is_err());
    }

    #[test]
    fn rectangular_bands_are_normal() {
        for (p, q) in [(1, 2), (2, 2), (2, 3), (3, 1)] {
            assert!(is_normal(&make_rectangular(p, q).unwrap()));
        }
    }

    #[test]
    fn labels_must_match_size() {
        let b = make_rectangular(1, 2).unwrap();
        assert!(b.clone().with_labels(vec!["a".into()]).is_err());
        let b = b.with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(b.label(1), "b");
    }
}
