//! JSON formats for bands, cochains and cobounding witnesses.
//!
//! Element indices are 0-based. Rationals are written as `"p/q"` strings;
//! the reader also accepts a bare integer `"p"`.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::BandAlgebra;
use crate::band::{make_free_band, make_free_semilattice, make_rectangular, Band, Decomposition};
use crate::chain::{Cochain, ElemTensor};
use crate::cohomology::check_witness;
use crate::error::{Error, Result};
use crate::normalize::Witness;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKind {
    Table,
    Rectangular,
    FreeSemilattice,
    FreeBand,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    #[serde(rename = "L_size")]
    pub l_size: usize,
    pub components: Vec<Vec<usize>>,
    /// Multiplication table of the structure semilattice, on component ids.
    pub semilattice: Vec<Vec<usize>>,
}

impl DecompositionSummary {
    pub fn new(dec: &Decomposition) -> Self {
        DecompositionSummary {
            l_size: dec.semilattice_size(),
            components: dec.components().to_vec(),
            semilattice: dec.semilattice_rows(),
        }
    }
}

/// A band spec file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandSpec {
    pub kind: BandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BandParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Informational; ignored when loading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
}

impl BandSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// A `table` spec for `band`, with its decomposition summary.
    pub fn from_band(band: &Band, dec: &Decomposition) -> Self {
        BandSpec {
            kind: BandKind::Table,
            size: Some(band.size()),
            table: Some(band.rows()),
            params: None,
            labels: band.labels().map(<[String]>::to_vec),
            decomposition: Some(DecompositionSummary::new(dec)),
        }
    }

    pub fn to_band(&self) -> Result<Band> {
        let param = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("band spec of kind {:?} needs parameter '{name}'", self.kind)))
        };
        let params = self.params.clone().unwrap_or_default();
        let band = match self.kind {
            BandKind::Table => {
                let table = self.table.as_ref().ok_or_else(|| Error::Parse("table spec needs 'table'".into()))?;
                if let Some(size) = self.size {
                    if size != table.len() {
                        return Err(Error::Parse(format!("'size' is {size} but the table has {} rows", table.len())));
                    }
                }
                Band::from_table(table)?
            }
            BandKind::Rectangular => make_rectangular(param(params.p, "p")?, param(params.q, "q")?)?,
            BandKind::FreeSemilattice => make_free_semilattice(param(params.k, "k")?)?,
            BandKind::FreeBand => make_free_band(param(params.k, "k")?)?,
        };
        match &self.labels {
            Some(labels) => band.with_labels(labels.clone()),
            None => Ok(band),
        }
    }
}

pub fn format_rational(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a rational of the form p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(Error::Parse(format!("'{s}' has a zero denominator")));
    }
    Ok(Rat::new(p, q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub tuple: Vec<usize>,
    pub value: String,
}

/// A cochain (or chain) file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainFile {
    pub degree: usize,
    pub entries: Vec<CochainEntry>,
}

impl CochainFile {
    pub fn from_cochain(c: &Cochain<Rat>) -> Self {
        CochainFile {
            degree: c.degree(),
            entries: c
                .iter()
                .map(|(t, v)| CochainEntry { tuple: t.entries().to_vec(), value: format_rational(v) })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Builds the cochain, rejecting duplicate tuples and tuples of the wrong length.
    pub fn to_cochain(&self) -> Result<Cochain<Rat>> {
        let mut seen = BTreeSet::new();
        let mut out = Cochain::zero(self.degree);
        for e in &self.entries {
            if e.tuple.len() != self.degree + 1 {
                return Err(Error::TupleLength { tuple: e.tuple.clone(), len: e.tuple.len(), expected: self.degree + 1 });
            }
            if !seen.insert(e.tuple.clone()) {
                return Err(Error::Parse(format!("duplicate tuple {:?}", e.tuple)));
            }
            out.set(ElemTensor::new(e.tuple.clone()), parse_rational(&e.value)?);
        }
        Ok(out)
    }
}

/// Reads a cochain file and checks its tuples against the band.
pub fn read_cochain(text: &str, alg: &BandAlgebra) -> Result<Cochain<Rat>> {
    let c = CochainFile::parse(text)?.to_cochain()?;
    c.check_in(alg)?;
    Ok(c)
}

/// A witness file: `ψ = τ^{(n)} + δχ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub degree: usize,
    pub tau: Option<CochainFile>,
    pub chi: CochainFile,
    pub residual_max_abs: String,
}

impl WitnessFile {
    /// Re-checks the witness against `ψ` before serializing it.
    pub fn new(psi: &Cochain<Rat>, w: &Witness<Rat>, alg: &BandAlgebra) -> Result<Self> {
        check_witness(psi, w.tau.as_ref(), &w.chi, alg)?;
        Ok(WitnessFile {
            degree: w.degree,
            tau: w.tau.as_ref().map(CochainFile::from_cochain),
            chi: CochainFile::from_cochain(&w.chi),
            residual_max_abs: "0".into(),
        })
    }
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
