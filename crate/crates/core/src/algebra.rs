use crate::band::{assign_lcu, assign_lcu_with_reps, decompose, Band, Decomposition, LcuMap};
use crate::error::Result;

/// A band together with its decomposition and left-coherent units: everything
/// the chain-level operators need to know about the semigroup algebra.
#[derive(Debug, Clone)]
pub struct BandAlgebra {
    band: Band,
    dec: Decomposition,
    lcu: LcuMap,
}

impl BandAlgebra {
    pub fn new(band: Band) -> Result<Self> {
        let dec = decompose(&band)?;
        let lcu = assign_lcu(&band, &dec)?;
        Ok(BandAlgebra { band, dec, lcu })
    }

    /// Same band, different representatives `y_α`.
    pub fn with_representatives(band: Band, reps: &[usize]) -> Result<Self> {
        let dec = decompose(&band)?;
        let lcu = assign_lcu_with_reps(&band, &dec, reps)?;
        Ok(BandAlgebra { band, dec, lcu })
    }

    pub fn band(&self) -> &Band {
        &self.band
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.dec
    }

    pub fn lcu_map(&self) -> &LcuMap {
        &self.lcu
    }

    pub fn size(&self) -> usize {
        self.band.size()
    }

    pub fn semilattice_size(&self) -> usize {
        self.dec.semilattice_size()
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.band.mul(x, y)
    }

    #[inline]
    pub fn lcu(&self, x: usize) -> usize {
        self.lcu.lcu(x)
    }

    /// The degree `[x]`: the component containing `x`.
    #[inline]
    pub fn degree(&self, x: usize) -> usize {
        self.dec.component_of(x)
    }

    /// The degree of a tuple: the component of the product of its entries.
    pub fn tuple_degree(&self, xs: &[usize]) -> usize {
        xs.iter().map(|&x| self.degree(x)).reduce(|a, b| self.dec.meet(a, b)).expect("empty tuple")
    }

    /// The tuple of degrees.
    pub fn shape(&self, xs: &[usize]) -> Vec<usize> {
        xs.iter().map(|&x| self.degree(x)).collect()
    }
}
