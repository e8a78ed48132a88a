//! Laplacian eigendecomposition, the graph Fourier transform and projection
//! onto the Paley-Wiener space `PW_ω = span{u_k : λ_k ≤ ω}`.

use std::ops::{Add, AddAssign, Index, Mul, Sub};

use nalgebra::{DMatrix, DVector, DVectorView, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_len, domain, Error, Result};
use crate::graph::SymmetricMatrix;

/// One real value per vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSignal(Vec<f64>);

impl GraphSignal {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    /// Indicator signal `δ_S` of a vertex set.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut v = vec![0.0; n];
        for &i in set {
            v[i] = 1.0;
        }
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "signal length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "signal length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

impl From<Vec<f64>> for GraphSignal {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for GraphSignal {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &GraphSignal {
    type Output = GraphSignal;
    fn add(self, rhs: &GraphSignal) -> GraphSignal {
        assert_eq!(self.len(), rhs.len(), "signal length mismatch");
        GraphSignal(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &GraphSignal {
    type Output = GraphSignal;
    fn sub(self, rhs: &GraphSignal) -> GraphSignal {
        assert_eq!(self.len(), rhs.len(), "signal length mismatch");
        GraphSignal(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &GraphSignal {
    type Output = GraphSignal;
    fn mul(self, rhs: f64) -> GraphSignal {
        self.scaled(rhs)
    }
}

impl AddAssign<&GraphSignal> for GraphSignal {
    fn add_assign(&mut self, rhs: &GraphSignal) {
        assert_eq!(self.len(), rhs.len(), "signal length mismatch");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

/// GFT coefficients indexed by ascending frequency rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl From<Vec<f64>> for Spectrum {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Ascending Laplacian eigenvalues with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

/// Dense symmetric eigendecomposition, eigenvalues sorted ascending.
///
/// Each eigenvector's sign is fixed so its first entry with magnitude above
/// `1e-12` is positive.
pub fn eigendecompose(matrix: &SymmetricMatrix) -> Result<SpectralBasis> {
    let n = matrix.order();
    let m = DMatrix::from_row_slice(n, n, matrix.entries());
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1000 + 200 * n).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let sign = col.iter().find(|x| x.abs() > 1e-12).map_or(1.0, |x| x.signum());
        eigenvectors.set_column(dst, &(col * sign));
    }
    Ok(SpectralBasis { eigenvalues, eigenvectors })
}

/// Eigenvalues only, ascending. Cheaper than [`eigendecompose`].
pub fn eigenvalues(matrix: &SymmetricMatrix) -> Vec<f64> {
    let n = matrix.order();
    let m = DMatrix::from_row_slice(n, n, matrix.entries());
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

impl SpectralBasis {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> GraphSignal {
        GraphSignal(self.eigenvectors.column(k).iter().copied().collect())
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Slack added to the cutoff so ties at the band edge count as in-band.
    pub fn band_tolerance(&self) -> f64 {
        1e-9 * self.lambda_max()
    }

    /// Number of eigenvalues with `λ_k ≤ ω` (up to [`Self::band_tolerance`]).
    pub fn in_band_count(&self, omega: f64) -> usize {
        let cut = omega + self.band_tolerance();
        self.eigenvalues.partition_point(|&l| l <= cut)
    }

    /// The cutoff `λ_K` that makes the band exactly `dimension` wide (barring ties).
    pub fn cutoff_for_dimension(&self, dimension: usize) -> Result<f64> {
        if dimension == 0 || dimension > self.order() {
            return Err(domain(format!("in-band dimension {dimension} outside 1..={}", self.order())));
        }
        Ok(self.eigenvalues[dimension - 1])
    }

    pub fn gft(&self, f: &GraphSignal) -> Result<Spectrum> {
        check_len(self.order(), f.len())?;
        let coeffs = self.eigenvectors.tr_mul(&DVectorView::from_slice(f.values(), f.len()));
        Ok(Spectrum(coeffs.iter().copied().collect()))
    }

    pub fn inverse_gft(&self, spectrum: &Spectrum) -> Result<GraphSignal> {
        check_len(self.order(), spectrum.0.len())?;
        let f = &self.eigenvectors * DVector::from_column_slice(&spectrum.0);
        Ok(GraphSignal(f.iter().copied().collect()))
    }

    pub fn projector(&self, omega: f64) -> Result<BandProjector> {
        if omega.is_nan() || omega < 0.0 {
            return Err(domain(format!("cutoff must be nonnegative, got {omega}")));
        }
        let k = self.in_band_count(omega);
        Ok(BandProjector {
            omega,
            basis: self.eigenvectors.columns(0, k).into_owned(),
        })
    }

    pub fn project_bandlimited(&self, omega: f64, f: &GraphSignal) -> Result<GraphSignal> {
        self.projector(omega)?.project(f)
    }
}

/// Orthogonal projector onto `PW_ω`, holding the in-band eigenvectors.
#[derive(Debug, Clone)]
pub struct BandProjector {
    omega: f64,
    basis: DMatrix<f64>,
}

impl BandProjector {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension `K` of the band.
    pub fn dimension(&self) -> usize {
        self.basis.ncols()
    }

    /// The `N × K` matrix of in-band eigenvectors.
    pub fn in_band_basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn project(&self, f: &GraphSignal) -> Result<GraphSignal> {
        check_len(self.order(), f.len())?;
        Ok(self.project_slice(f.values()))
    }

    /// In-band coefficients `U_Kᵀ f`.
    pub fn coefficients(&self, f: &[f64]) -> DVector<f64> {
        self.basis.tr_mul(&DVectorView::from_slice(f, f.len()))
    }

    pub(crate) fn project_slice(&self, f: &[f64]) -> GraphSignal {
        let y = &self.basis * self.coefficients(f);
        GraphSignal(y.data.into())
    }
}

/// Draws a random signal in `PW_ω` with 2-norm `norm`.
///
/// In-band GFT coefficients are i.i.d. standard normal. When `offband_energy`
/// is `Some(e)`, a standard-normal out-of-band component is added so that the
/// in-band part carries energy `(1 - e)·norm²` and the out-of-band part `e·norm²`.
pub fn random_bandlimited<R: Rng + ?Sized>(
    basis: &SpectralBasis,
    omega: f64,
    rng: &mut R,
    norm: f64,
    offband_energy: Option<f64>,
) -> Result<GraphSignal> {
    if !(norm.is_finite() && norm >= 0.0) {
        return Err(domain(format!("target norm must be finite and nonnegative, got {norm}")));
    }
    let k = basis.in_band_count(omega.max(0.0));
    if omega < 0.0 || k == 0 {
        return Err(domain(format!("no eigenvalue at or below cutoff {omega}")));
    }
    let offband = offband_energy.unwrap_or(0.0);
    if !(0.0..1.0).contains(&offband) {
        return Err(domain(format!("out-of-band energy must lie in [0, 1), got {offband}")));
    }
    let n = basis.order();
    let mut out = random_combination(basis, 0..k, rng, norm * (1.0 - offband).sqrt());
    if offband > 0.0 {
        if k == n {
            return Err(domain("out-of-band energy requested but the band covers the whole spectrum"));
        }
        let high = random_combination(basis, k..n, rng, norm * offband.sqrt());
        out += &high;
    }
    Ok(out)
}

fn random_combination<R: Rng + ?Sized>(
    basis: &SpectralBasis,
    ranks: std::ops::Range<usize>,
    rng: &mut R,
    norm: f64,
) -> GraphSignal {
    let width = ranks.len();
    let coeffs = loop {
        let c: DVector<f64> = DVector::from_fn(width, |_, _| rng.sample(StandardNormal));
        if c.norm() > 0.0 {
            break c;
        }
    };
    let f = basis.eigenvectors.columns(ranks.start, width) * coeffs;
    let signal = GraphSignal(f.data.into());
    signal.scaled(norm / signal.norm())
}
