//! Flattening of [`HrisParams`] into the optimization vector.

use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::error::{HrisError, Result};
use crate::hris::{ConnectionTopology, HrisParams};
use crate::RMat;

/// Distance used when suggesting how to move a boundary value inside.
const NUDGE: f64 = 1e-6;

/// Which box a coordinate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    /// `rho_l(b)`, in `(0, 1)`.
    Rho { b: usize, l: usize },
    /// `psi_l(b)`, in `(0, 2pi)`.
    Psi { b: usize, l: usize },
    /// `phi_{r,l}(b)`, in `(0, 2pi)`; only connected `(r, l)` appear.
    Phi { b: usize, r: usize, l: usize },
}

impl Coordinate {
    pub fn upper(&self) -> f64 {
        match self {
            Coordinate::Rho { .. } => 1.0,
            _ => TAU,
        }
    }

    pub fn is_rho(&self) -> bool {
        matches!(self, Coordinate::Rho { .. })
    }
}

/// Index map between `x` and the parameter matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamLayout {
    b: usize,
    n: usize,
    mask: DMatrix<bool>,
    /// Connected `(r, l)` pairs in row-major order.
    links: Vec<(usize, usize)>,
}

/// The flattened parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    pub x: Vec<f64>,
}

impl ParamLayout {
    pub fn new(b: usize, n: usize, n_r: usize, topology: &ConnectionTopology) -> Result<Self> {
        Ok(Self::from_mask(b, topology.mask(n_r, n)?))
    }

    pub fn from_mask(b: usize, mask: DMatrix<bool>) -> Self {
        let (n_r, n) = mask.shape();
        let links = (0..n_r).flat_map(|r| (0..n).map(move |l| (r, l))).filter(|&(r, l)| mask[(r, l)]).collect();
        ParamLayout { b, n, mask, links }
    }

    pub fn of(params: &HrisParams) -> Self {
        Self::from_mask(params.subframes(), params.mask.clone())
    }

    pub fn subframes(&self) -> usize {
        self.b
    }

    pub fn elements(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &DMatrix<bool> {
        &self.mask
    }

    /// Connected `(r, l)` pairs in the order they appear in each `phi` block.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.b * (2 * self.n + self.links.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rho_index(&self, b: usize, l: usize) -> usize {
        b * self.n + l
    }

    pub fn psi_index(&self, b: usize, l: usize) -> usize {
        (self.b + b) * self.n + l
    }

    /// Index of the `j`-th link of sub-frame `b`.
    pub fn phi_index(&self, b: usize, j: usize) -> usize {
        2 * self.b * self.n + b * self.links.len() + j
    }

    pub fn coordinate(&self, i: usize) -> Coordinate {
        let bn = self.b * self.n;
        if i < bn {
            Coordinate::Rho { b: i / self.n, l: i % self.n }
        } else if i < 2 * bn {
            let i = i - bn;
            Coordinate::Psi { b: i / self.n, l: i % self.n }
        } else {
            let i = i - 2 * bn;
            let (r, l) = self.links[i % self.links.len()];
            Coordinate::Phi { b: i / self.links.len(), r, l }
        }
    }

    /// Upper box bound of every coordinate (the lower bound is 0).
    pub fn upper_bounds(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.coordinate(i).upper()).collect()
    }

    fn check_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.len() {
            return Err(HrisError::dims("parameter vector", (self.len(), 1), (x.len(), 1)));
        }
        for (i, &v) in x.iter().enumerate() {
            let coord = self.coordinate(i);
            let hi = coord.upper();
            if !(v > 0.0 && v < hi) {
                let hint = if v <= 0.0 { NUDGE } else { hi - NUDGE };
                return Err(HrisError::Boundary(format!(
                    "{coord:?} = {v} is not strictly inside (0, {hi}); clamp it to {hint}"
                )));
            }
        }
        Ok(())
    }

    pub fn pack(&self, params: &HrisParams) -> Result<ParamVector> {
        if params.subframes() != self.b || params.mask != self.mask {
            return Err(HrisError::dims("HRIS parameters", (self.b, self.n), (params.subframes(), params.elements())));
        }
        let mut x = Vec::with_capacity(self.len());
        for b in 0..self.b {
            x.extend(params.rho.row(b).iter());
        }
        for b in 0..self.b {
            x.extend(params.psi.row(b).iter());
        }
        for phi in &params.phi {
            x.extend(self.links.iter().map(|&(r, l)| phi[(r, l)]));
        }
        self.check_interior(&x)?;
        Ok(ParamVector { x })
    }

    /// Inverse of [`pack`](Self::pack). Unconnected `phi` entries are set to 0.
    pub fn unpack(&self, v: &ParamVector) -> Result<HrisParams> {
        self.check_interior(&v.x)?;
        Ok(self.unpack_unchecked(&v.x))
    }

    pub(crate) fn unpack_unchecked(&self, x: &[f64]) -> HrisParams {
        let (b, n) = (self.b, self.n);
        let rho = RMat::from_fn(b, n, |i, l| x[self.rho_index(i, l)]);
        let psi = RMat::from_fn(b, n, |i, l| x[self.psi_index(i, l)]);
        let phi = (0..b)
            .map(|i| {
                let mut m = RMat::zeros(self.mask.nrows(), n);
                for (j, &(r, l)) in self.links.iter().enumerate() {
                    m[(r, l)] = x[self.phi_index(i, j)];
                }
                m
            })
            .collect();
        HrisParams { rho, psi, phi, mask: self.mask.clone() }
    }

    /// Whether every coordinate is strictly inside its box.
    pub fn is_interior(&self, x: &[f64]) -> bool {
        self.check_interior(x).is_ok()
    }
}

impl ParamVector {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Entity};

    #[test]
    fn length_formula() {
        let layout = ParamLayout::new(1, 2, 1, &ConnectionTopology::FullyConnected).unwrap();
        assert_eq!(layout.len(), 6);
        let layout = ParamLayout::new(3, 8, 4, &ConnectionTopology::FullyConnected).unwrap();
        assert_eq!(layout.len(), 3 * 8 * (2 + 4));
    }

    #[test]
    fn partial_connection_shrinks_phi() {
        let topo = ConnectionTopology::round_robin(8, 4);
        let layout = ParamLayout::new(2, 8, 4, &topo).unwrap();
        assert_eq!(layout.links().len(), 8);
        assert_eq!(layout.len(), 2 * (2 * 8 + 8));
    }

    #[test]
    fn round_trip_is_bitwise() {
        let topo = ConnectionTopology::round_robin(5, 2);
        let p = HrisParams::random(&mut stream(9, Entity::Params, 0), 3, 5, 2, &topo).unwrap();
        let layout = ParamLayout::of(&p);
        let v = layout.pack(&p).unwrap();
        assert_eq!(layout.unpack(&v).unwrap(), p);
        for i in 0..v.len() {
            let value = match layout.coordinate(i) {
                Coordinate::Rho { b, l } => p.rho[(b, l)],
                Coordinate::Psi { b, l } => p.psi[(b, l)],
                Coordinate::Phi { b, r, l } => p.phi[b][(r, l)],
            };
            assert_eq!(value, v.x[i]);
        }
    }

    #[test]
    fn boundary_values_are_rejected() {
        let p = HrisParams::constant(1, 1.0, 1.0, 1.0, 2, 1, &ConnectionTopology::FullyConnected).unwrap();
        let err = ParamLayout::of(&p).pack(&p).unwrap_err();
        assert!(matches!(&err, HrisError::Boundary(msg) if msg.contains("0.999999")), "{err}");
        let p = HrisParams::constant(1, 0.5, 0.0, 1.0, 2, 1, &ConnectionTopology::FullyConnected).unwrap();
        assert!(matches!(ParamLayout::of(&p).pack(&p), Err(HrisError::Boundary(_))));
        let layout = ParamLayout::of(&p);
        let mut v = ParamVector { x: vec![0.5; 6] };
        v.x[5] = TAU;
        assert!(layout.unpack(&v).is_err());
    }
}
