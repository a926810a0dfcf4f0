//! HRIS parameterization and the reflection / reception matrices it induces.
//!
//! Element `l` reflects amplitude `rho_l` with phase `psi_l` and forwards
//! amplitude `1 - rho_l` with phase `phi_{r,l}` to every RF chain `r` it is
//! connected to. When an element feeds several chains each connection carries
//! the full `1 - rho_l` amplitude; the model is not energy conserving.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{HrisError, Result};
use crate::linalg::vstack;
use crate::rng::{self, Entity};
use crate::{CMat, RMat};

/// Analog combiner wiring between elements and receive RF chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionTopology {
    /// Every element feeds every chain.
    FullyConnected,
    /// `assignment[l]` is the single chain fed by element `l`.
    PartiallyConnected { assignment: Vec<usize> },
}

impl ConnectionTopology {
    /// Partial connection assigning element `l` to chain `l mod n_r`.
    pub fn round_robin(n: usize, n_r: usize) -> Self {
        ConnectionTopology::PartiallyConnected { assignment: (0..n).map(|l| l % n_r).collect() }
    }

    pub fn mask(&self, n_r: usize, n: usize) -> Result<DMatrix<bool>> {
        match self {
            ConnectionTopology::FullyConnected => Ok(DMatrix::from_element(n_r, n, true)),
            ConnectionTopology::PartiallyConnected { assignment } => {
                if assignment.len() != n {
                    return Err(HrisError::InvalidConfig(format!(
                        "assignment covers {} elements, expected {n}",
                        assignment.len()
                    )));
                }
                let mut mask = DMatrix::from_element(n_r, n, false);
                for (l, &r) in assignment.iter().enumerate() {
                    if r >= n_r {
                        return Err(HrisError::InvalidConfig(format!("element {l} assigned to chain {r} >= N_r = {n_r}")));
                    }
                    mask[(r, l)] = true;
                }
                Ok(mask)
            }
        }
    }
}

/// The tunable surface configuration over the `B` sub-frames.
#[derive(Debug, Clone, PartialEq)]
pub struct HrisParams {
    /// `B x N` reflected amplitude fractions in `[0, 1]`.
    pub rho: RMat,
    /// `B x N` reflection phases in `[0, 2pi]`.
    pub psi: RMat,
    /// `B` matrices of size `N_r x N` with reception phases in `[0, 2pi]`;
    /// entries outside the mask are held at 0 by [`HrisParams::new`].
    pub phi: Vec<RMat>,
    /// `N_r x N`, true where chain `r` is fed by element `l`.
    pub mask: DMatrix<bool>,
}

fn check_box(name: &str, m: &RMat, hi: f64) -> Result<()> {
    match m.iter().find(|v| !(**v >= 0.0 && **v <= hi)) {
        Some(v) => Err(HrisError::Domain(format!("{name} entry {v} outside [0, {hi}]"))),
        None => Ok(()),
    }
}

impl HrisParams {
    pub fn new(rho: RMat, psi: RMat, phi: Vec<RMat>, mask: DMatrix<bool>) -> Result<Self> {
        let (b, n) = rho.shape();
        if psi.shape() != (b, n) {
            return Err(HrisError::dims("psi", (b, n), psi.shape()));
        }
        if phi.len() != b {
            return Err(HrisError::DimensionMismatch {
                context: "phi",
                expected: format!("{b} sub-frames"),
                actual: format!("{}", phi.len()),
            });
        }
        let n_r = mask.nrows();
        if mask.ncols() != n {
            return Err(HrisError::dims("mask", (n_r, n), mask.shape()));
        }
        if let Some(p) = phi.iter().find(|p| p.shape() != (n_r, n)) {
            return Err(HrisError::dims("phi", (n_r, n), p.shape()));
        }
        check_box("rho", &rho, 1.0)?;
        check_box("psi", &psi, TAU)?;
        for p in &phi {
            check_box("phi", p, TAU)?;
        }
        let mut phi = phi;
        // unconnected reception phases carry no meaning; keep them canonical
        for p in &mut phi {
            p.zip_apply(&mask, |v, m| if !m { *v = 0.0 });
        }
        let params = HrisParams { rho, psi, phi, mask };
        let orphans = params.unconnected_elements();
        if !orphans.is_empty() {
            log::warn!("elements {orphans:?} feed no RF chain; G is not fully identifiable");
        }
        Ok(params)
    }

    /// Every sub-frame configured identically: shared `rho`, given phases.
    pub fn constant(b: usize, rho: f64, psi: f64, phi: f64, n: usize, n_r: usize, topology: &ConnectionTopology) -> Result<Self> {
        Self::new(
            RMat::from_element(b, n, rho),
            RMat::from_element(b, n, psi),
            vec![RMat::from_element(n_r, n, phi); b],
            topology.mask(n_r, n)?,
        )
    }

    /// Interior random draw: `rho ~ U(0.3, 0.7)`, phases `~ U(0.1, 2pi - 0.1)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, b: usize, n: usize, n_r: usize, topology: &ConnectionTopology) -> Result<Self> {
        let phase = |rng: &mut R| rng.random_range(0.1..TAU - 0.1);
        let rho = RMat::from_fn(b, n, |_, _| rng.random_range(0.3..0.7));
        let psi = RMat::from_fn(b, n, |_, _| phase(rng));
        let phi = (0..b).map(|_| RMat::from_fn(n_r, n, |_, _| phase(rng))).collect();
        Self::new(rho, psi, phi, topology.mask(n_r, n)?)
    }

    /// Same ranges as [`HrisParams::random`], but sub-frame `b` draws from its
    /// own stream of `seed`, `rho` then `psi` then `phi` row by row. Draws for
    /// fewer sub-frames or fewer RF chains are prefixes of larger ones, so
    /// sweeps over `B` or `N_r` compare nested configurations.
    pub fn random_nested(seed: u64, b: usize, n: usize, n_r: usize, topology: &ConnectionTopology) -> Result<Self> {
        let mut rho = RMat::zeros(b, n);
        let mut psi = RMat::zeros(b, n);
        let mut phi = Vec::with_capacity(b);
        for sub in 0..b {
            let mut rng = rng::stream(seed, Entity::Params, sub as u64);
            for l in 0..n {
                rho[(sub, l)] = rng.random_range(0.3..0.7);
            }
            for l in 0..n {
                psi[(sub, l)] = rng.random_range(0.1..TAU - 0.1);
            }
            let mut p = RMat::zeros(n_r, n);
            for r in 0..n_r {
                for l in 0..n {
                    p[(r, l)] = rng.random_range(0.1..TAU - 0.1);
                }
            }
            phi.push(p);
        }
        Self::new(rho, psi, phi, topology.mask(n_r, n)?)
    }

    /// Number of sub-frames `B`.
    pub fn subframes(&self) -> usize {
        self.rho.nrows()
    }

    pub fn elements(&self) -> usize {
        self.rho.ncols()
    }

    pub fn rf_chains(&self) -> usize {
        self.mask.nrows()
    }

    pub fn connections(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Elements whose mask column has no connection.
    pub fn unconnected_elements(&self) -> Vec<usize> {
        (0..self.elements()).filter(|&l| !self.mask.column(l).iter().any(|&m| m)).collect()
    }

    fn check_index(&self, b: usize) -> Result<()> {
        if b >= self.subframes() {
            return Err(HrisError::IndexOutOfRange { index: b, count: self.subframes() });
        }
        Ok(())
    }

    /// Diagonal of the reflection matrix of sub-frame `b` (0-based).
    pub fn reflection_coefficients(&self, b: usize) -> Result<Vec<Complex64>> {
        self.check_index(b)?;
        Ok((0..self.elements())
            .map(|l| Complex64::from_polar(self.rho[(b, l)], self.psi[(b, l)]))
            .collect())
    }
}

/// `Psi(b) = diag(rho_l(b) e^{j psi_l(b)})`, `b` 0-based.
pub fn reflection_matrix(params: &HrisParams, b: usize) -> Result<CMat> {
    let coeffs = params.reflection_coefficients(b)?;
    Ok(CMat::from_diagonal(&nalgebra::DVector::from_vec(coeffs)))
}

/// `Phi(b)` with entries `(1 - rho_l(b)) e^{j phi_{r,l}(b)}` where connected.
pub fn reception_matrix(params: &HrisParams, b: usize) -> Result<CMat> {
    params.check_index(b)?;
    let phi = &params.phi[b];
    Ok(CMat::from_fn(params.rf_chains(), params.elements(), |r, l| {
        if params.mask[(r, l)] {
            Complex64::from_polar(1.0 - params.rho[(b, l)], phi[(r, l)])
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `A_RC = [Phi(1); ...; Phi(B)]`, of size `(N_r B) x N`.
pub fn stack_reception(params: &HrisParams) -> CMat {
    let blocks: Vec<CMat> = (0..params.subframes())
        .map(|b| reception_matrix(params, b).expect("index in range"))
        .collect();
    vstack(&blocks)
}

/// All reflection matrices `Psi(1..B)`.
pub fn reflection_matrices(params: &HrisParams) -> Vec<CMat> {
    (0..params.subframes())
        .map(|b| reflection_matrix(params, b).expect("index in range"))
        .collect()
}

/// `B x N` matrix whose row `b` is the diagonal of `Psi(b)`.
pub fn reflection_table(params: &HrisParams) -> CMat {
    CMat::from_fn(params.subframes(), params.elements(), |b, l| {
        Complex64::from_polar(params.rho[(b, l)], params.psi[(b, l)])
    })
}
