//! Cohomology dimensions against a dense oracle built straight from the band
//! table, and the expected values for bands.

use bandcoh_core::band::{corpus, make_free_band};
use bandcoh_core::cohomology::{hc_dim, hh_dim, reduced_exactness, trace_classes_independent, DEFAULT_BUDGET};
use bandcoh_core::{BandAlgebra, Rat};
use num_traits::{One, Zero};

fn tuples(size: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..size).map(move |e| [t.clone(), vec![e]].concat())).collect();
    }
    out
}

fn index(t: &[usize], size: usize) -> usize {
    t.iter().fold(0, |acc, &e| acc * size + e)
}

/// Rows indexed by `(n+2)`-tuples `a`, columns by `(n+1)`-tuples:
/// `(δψ)(a) = ψ(a_2, …, a_{n+1}, a_{n+2} a_1) + Σ_i (-1)^i ψ(…, a_i a_{i+1}, …)`.
fn dense_coboundary(alg: &BandAlgebra, n: usize) -> Vec<Vec<Rat>> {
    let s = alg.size();
    let cols = s.pow(n as u32 + 1);
    tuples(s, n + 2)
        .into_iter()
        .map(|a| {
            let mut row = vec![Rat::zero(); cols];
            let mut first = a[1..n + 1].to_vec();
            first.push(alg.mul(a[n + 1], a[0]));
            row[index(&first, s)] += Rat::one();
            for i in 1..=n + 1 {
                let mut y = a[..i - 1].to_vec();
                y.push(alg.mul(a[i - 1], a[i]));
                y.extend_from_slice(&a[i + 1..]);
                let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                row[index(&y, s)] += sign;
            }
            row
        })
        .collect()
}

fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut().filter(|row| !row[c].is_zero()) {
            let f = row[c].clone() / pivot_row[c].clone();
            for (dst, src) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *dst -= src.clone() * f.clone();
            }
        }
        r += 1;
    }
    r
}

/// Columns of `m` multiplied by a basis of the cyclic cochains, as a dense matrix.
/// A cyclic cochain is constant up to the sign `(-1)^{nk}` along each rotation orbit.
fn restrict_to_cyclic(m: &[Vec<Rat>], size: usize, n: usize) -> (Vec<Vec<Rat>>, usize) {
    let mut seen = vec![false; size.pow(n as u32 + 1)];
    let mut basis: Vec<Vec<(usize, Rat)>> = Vec::new();
    for t in tuples(size, n + 1) {
        if seen[index(&t, size)] {
            continue;
        }
        let mut col = Vec::new();
        let mut cur = t.clone();
        let mut consistent = true;
        for k in 0..=n {
            let sign = if (n * k).is_multiple_of(2) { Rat::one() } else { -Rat::one() };
            let idx = index(&cur, size);
            if let Some((_, v)) = col.iter().find(|(i, _)| *i == idx) {
                consistent &= *v == sign;
            } else {
                col.push((idx, sign));
            }
            seen[idx] = true;
            cur.rotate_right(1);
        }
        if consistent {
            basis.push(col);
        }
    }
    let dim = basis.len();
    let out = m.iter().map(|row| basis.iter().map(|col| col.iter().map(|(i, v)| row[*i].clone() * v.clone()).sum()).collect()).collect();
    (out, dim)
}

fn oracle_hh(alg: &BandAlgebra, n: usize) -> usize {
    let s = alg.size();
    let kernel = s.pow(n as u32 + 1) - rank(&dense_coboundary(alg, n));
    kernel - if n == 0 { 0 } else { rank(&dense_coboundary(alg, n - 1)) }
}

fn oracle_hc(alg: &BandAlgebra, n: usize) -> usize {
    let s = alg.size();
    let (dn, dim) = restrict_to_cyclic(&dense_coboundary(alg, n), s, n);
    let kernel = dim - rank(&dn);
    kernel - if n == 0 { 0 } else { rank(&restrict_to_cyclic(&dense_coboundary(alg, n - 1), s, n - 1).0) }
}

#[test]
fn dimensions_match_dense_oracle() {
    for (name, band) in corpus() {
        if band.size() > 6 {
            continue;
        }
        let alg = BandAlgebra::new(band).unwrap();
        for n in 0..=2 {
            if n >= 1 {
                assert_eq!(hh_dim::<Rat>(&alg, n, DEFAULT_BUDGET).unwrap(), oracle_hh(&alg, n), "{name} hh {n}");
            }
            assert_eq!(hc_dim::<Rat>(&alg, n, DEFAULT_BUDGET).unwrap(), oracle_hc(&alg, n), "{name} hc {n}");
        }
    }
}

#[test]
fn headline_dimensions_on_corpus() {
    for (name, band) in corpus() {
        let alg = BandAlgebra::new(band).unwrap();
        let l = alg.semilattice_size();
        for n in 1..=2 {
            assert_eq!(hh_dim::<Rat>(&alg, n, DEFAULT_BUDGET).unwrap(), 0, "{name} hh {n}");
            assert!(reduced_exactness::<Rat>(&alg, n, DEFAULT_BUDGET).unwrap().is_exact(), "{name} exactness {n}");
        }
        for (n, expected) in [(0, l), (1, 0), (2, l)] {
            assert_eq!(hc_dim::<Rat>(&alg, n, DEFAULT_BUDGET).unwrap(), expected, "{name} hc {n}");
        }
        assert!(trace_classes_independent::<Rat>(&alg, 2, DEFAULT_BUDGET).unwrap(), "{name}");
    }
}

#[test]
fn free_band_degree_two_reports() {
    let alg = BandAlgebra::new(make_free_band(2).unwrap()).unwrap();
    assert_eq!(hh_dim::<Rat>(&alg, 1, DEFAULT_BUDGET).unwrap(), 0);
    assert_eq!(hh_dim::<Rat>(&alg, 2, DEFAULT_BUDGET).unwrap(), 0);
    assert_eq!(hc_dim::<Rat>(&alg, 0, DEFAULT_BUDGET).unwrap(), 3);
    assert_eq!(hc_dim::<Rat>(&alg, 1, DEFAULT_BUDGET).unwrap(), 0);
    assert_eq!(hc_dim::<Rat>(&alg, 2, DEFAULT_BUDGET).unwrap(), 3);
}
