//! Scenario model: finite type spaces, contact kernels and the branching
//! operator that decides whether a kernel percolates.
//!
//! Every analytic quantity downstream is computed from the mean-offspring
//! matrix `M(i,j) = kappa(i,j) * mu(j)`, the expected number of type-`j`
//! neighbours of a type-`i` agent.

use crate::error::{Error, Result};

/// Tolerance on `sum(mu) == 1`.
pub const PROPORTION_TOLERANCE: f64 = 1e-9;
/// Half-width of the band around 1 classified as [`Phase::Critical`].
pub const PHASE_EPSILON: f64 = 1e-9;
/// Default convergence tolerance for [`spectral_radius`].
pub const SPECTRAL_TOLERANCE: f64 = 1e-12;
/// Power-iteration cap.
pub const POWER_ITERATION_CAP: usize = 100_000;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                context: "matrix rows",
                expected: 1,
                found: 0,
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.dim).map(|r| r.iter().sum()).collect()
    }

    /// `self * x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Ordered finite type space with population proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSpace {
    labels: Vec<String>,
    mu: Vec<f64>,
}

impl TypeSpace {
    pub fn new(labels: Vec<String>, mu: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::BadLabels("at least one type is required".into()));
        }
        if labels.len() != mu.len() {
            return Err(Error::DimensionMismatch {
                context: "type proportions",
                expected: labels.len(),
                found: mu.len(),
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::BadLabels(format!("label {i} is empty")));
            }
            if labels[..i].contains(label) {
                return Err(Error::BadLabels(format!("duplicate label {label:?}")));
            }
        }
        for (i, &m) in mu.iter().enumerate() {
            if !m.is_finite() || !(0.0..=1.0).contains(&m) {
                return Err(Error::BadProportions(format!(
                    "mu[{i}] = {m} is outside [0, 1]"
                )));
            }
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > PROPORTION_TOLERANCE {
            return Err(Error::BadProportions(format!(
                "proportions sum to {total}, expected 1"
            )));
        }
        Ok(Self { labels, mu })
    }

    /// A single type named `label` holding the whole population.
    pub fn single(label: &str) -> Self {
        Self {
            labels: vec![label.to_owned()],
            mu: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }
}

/// Symmetric, non-negative matrix of contact rates `kappa(i,j)`.
///
/// Two agents of types `i` and `j` in a network of `n` agents share an edge
/// with probability `kappa(i,j) / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel(SquareMatrix);

impl Kernel {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix(SquareMatrix::from_rows(rows)?)
    }

    pub fn from_matrix(m: SquareMatrix) -> Result<Self> {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidKernelEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        for i in 0..m.dim() {
            for j in (i + 1)..m.dim() {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::AsymmetricKernel {
                        row: i,
                        col: j,
                        value: m.get(i, j),
                        mirror: m.get(j, i),
                    });
                }
            }
        }
        Ok(Self(m))
    }

    /// One-type kernel with rate `rate`.
    pub fn constant(rate: f64) -> Result<Self> {
        Self::from_rows(&[vec![rate]])
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }
}

/// The two possible product qualities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductState {
    Good,
    Bad,
}

/// A validated seeding problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    types: TypeSpace,
    kernel_good: Kernel,
    kernel_bad: Kernel,
    lambda: f64,
    n: u64,
}

impl Scenario {
    /// Builds and validates a scenario; see [`validate_scenario`].
    pub fn new(
        types: TypeSpace,
        kernel_good: Kernel,
        kernel_bad: Kernel,
        lambda: f64,
        n: u64,
    ) -> Result<Self> {
        validate_scenario(Self {
            types,
            kernel_good,
            kernel_bad,
            lambda,
            n,
        })
    }

    /// One-type (Erdős–Rényi) scenario.
    pub fn erdos_renyi(kappa_good: f64, kappa_bad: f64, lambda: f64, n: u64) -> Result<Self> {
        Self::new(
            TypeSpace::single("all"),
            Kernel::constant(kappa_good)?,
            Kernel::constant(kappa_bad)?,
            lambda,
            n,
        )
    }

    /// Same scenario on a network of `n` agents.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("network size must be at least 1".into()));
        }
        Ok(Self { n, ..self.clone() })
    }

    /// Same scenario with designer weight `lambda`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        validate_scenario(Self {
            lambda,
            ..self.clone()
        })
    }

    pub fn types(&self) -> &TypeSpace {
        &self.types
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn kernel_good(&self) -> &Kernel {
        &self.kernel_good
    }

    pub fn kernel_bad(&self) -> &Kernel {
        &self.kernel_bad
    }

    pub fn kernel(&self, state: ProductState) -> &Kernel {
        match state {
            ProductState::Good => &self.kernel_good,
            ProductState::Bad => &self.kernel_bad,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Branching operator `M(i,j) = kappa(i,j) * mu(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanOffspringMatrix(SquareMatrix);

impl MeanOffspringMatrix {
    /// Wraps a non-negative square matrix.
    pub fn new(m: SquareMatrix) -> Result<Self> {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidKernelEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }
}

/// Percolation phase of a branching operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Subcritical,
    Critical,
    Supercritical,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::Subcritical => "subcritical",
            Phase::Critical => "critical",
            Phase::Supercritical => "supercritical",
        })
    }
}

/// Checks every scenario invariant, including the strict phase ordering
/// (good kernel supercritical, bad kernel subcritical).
pub fn validate_scenario(s: Scenario) -> Result<Scenario> {
    let k = s.types.len();
    for (name, kernel) in [("kernel_good", &s.kernel_good), ("kernel_bad", &s.kernel_bad)] {
        if kernel.dim() != k {
            return Err(Error::DimensionMismatch {
                context: name,
                expected: k,
                found: kernel.dim(),
            });
        }
    }
    if !(s.lambda.is_finite() && s.lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be positive and finite, got {}",
            s.lambda
        )));
    }
    if s.n == 0 {
        return Err(Error::InvalidArgument("network size must be at least 1".into()));
    }

    let good = spectral_radius(&mean_offspring(&s.kernel_good, &s.types)?, SPECTRAL_TOLERANCE)?;
    if classify(good) != Phase::Supercritical {
        return Err(Error::PhaseViolation {
            kernel: "good",
            radius: good,
            expected: "> 1",
        });
    }
    let bad = spectral_radius(&mean_offspring(&s.kernel_bad, &s.types)?, SPECTRAL_TOLERANCE)?;
    if classify(bad) != Phase::Subcritical {
        return Err(Error::PhaseViolation {
            kernel: "bad",
            radius: bad,
            expected: "< 1",
        });
    }
    Ok(s)
}

pub fn mean_offspring(kernel: &Kernel, types: &TypeSpace) -> Result<MeanOffspringMatrix> {
    if kernel.dim() != types.len() {
        return Err(Error::DimensionMismatch {
            context: "kernel vs type space",
            expected: types.len(),
            found: kernel.dim(),
        });
    }
    let mu = types.mu();
    Ok(MeanOffspringMatrix(SquareMatrix::from_fn(kernel.dim(), |i, j| {
        kernel.get(i, j) * mu[j]
    })))
}

/// Perron root of a non-negative matrix by power iteration from the
/// all-ones vector.
///
/// Stops once successive Rayleigh quotients differ by less than
/// `tol * max(1, |rho|)`. Periodic matrices, where plain power iteration
/// oscillates, are retried on the shifted operator `M + I`, whose Perron
/// root is exactly one larger.
pub fn spectral_radius(m: &MeanOffspringMatrix, tol: f64) -> Result<f64> {
    match power_iteration(m.matrix(), 0.0, tol) {
        Some(r) => Ok(r),
        None => power_iteration(m.matrix(), 1.0, tol)
            .map(|r| (r - 1.0).max(0.0))
            .ok_or(Error::NoConvergence {
                what: "power iteration",
                iterations: POWER_ITERATION_CAP,
            }),
    }
}

fn power_iteration(m: &SquareMatrix, shift: f64, tol: f64) -> Option<f64> {
    let dim = m.dim();
    let mut x = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut previous = f64::NAN;
    for _ in 0..POWER_ITERATION_CAP {
        let mut next = m.apply(&x);
        for (v, xi) in next.iter_mut().zip(&x) {
            *v += shift * xi;
        }
        // x has unit norm, so x.Mx is the Rayleigh quotient.
        let rayleigh: f64 = next.iter().zip(&x).map(|(a, b)| a * b).sum();
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // Nilpotent: every eigenvalue is zero.
            return Some(shift);
        }
        if (rayleigh - previous).abs() < tol * rayleigh.abs().max(1.0) {
            return Some(rayleigh);
        }
        previous = rayleigh;
        for (xi, v) in x.iter_mut().zip(&next) {
            *xi = v / norm;
        }
    }
    None
}

fn classify(radius: f64) -> Phase {
    if radius > 1.0 + PHASE_EPSILON {
        Phase::Supercritical
    } else if radius < 1.0 - PHASE_EPSILON {
        Phase::Subcritical
    } else {
        Phase::Critical
    }
}

pub fn phase(m: &MeanOffspringMatrix) -> Result<Phase> {
    spectral_radius(m, SPECTRAL_TOLERANCE).map(classify)
}
