//! Truncated Fock-space matrices for checking the bath and composite
//! similarity maps numerically.
//!
//! Ladder operators truncated at `dim` levels obey `[a, a†] = I` everywhere
//! except the last diagonal entry, and products of them degrade from the
//! top of the spectrum downwards. Residuals are therefore measured on the
//! top-left `dim/2` block only.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::model::{
    system_similarity, system_similarity_inverse, EnvConfig, Matrix2, SystemConfig,
};

const MIN_DIM: usize = 2;
const MIN_RESIDUAL_DIM: usize = 8;

/// Dense complex operator on a truncated Fock space (or a tensor product
/// with the qubit).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(DMatrix<Complex64>);

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        OperatorMatrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn scale(&self, s: Complex64) -> Self {
        OperatorMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn dagger(&self) -> Self {
        OperatorMatrix(self.0.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    /// `self ⊗ other`
    pub fn kron(&self, other: &Self) -> Self {
        OperatorMatrix(self.0.kronecker(&other.0))
    }

    /// Lifts a qubit operator into a dense matrix.
    pub fn from_qubit(m: &Matrix2) -> Self {
        OperatorMatrix::from_fn(2, |r, c| m.get(r, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|self − other|` entry over the given index set (rows and
    /// columns both drawn from `indices`).
    pub fn max_abs_diff_on(&self, other: &Self, indices: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for &r in indices {
            for &c in indices {
                worst = worst.max((self.0[(r, c)] - other.0[(r, c)]).norm());
            }
        }
        worst
    }

    /// `max |H − H†|`
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self + &rhs
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self - &rhs
    }
}

impl Mul for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self * &rhs
    }
}

/// Outcome of a similarity check on the trusted block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub dim: usize,
    pub tau: f64,
    pub zeta: f64,
    pub delta: f64,
    pub block_size: usize,
    pub residual: f64,
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        Err(Error::Dimension { dim, min })
    } else {
        Ok(())
    }
}

/// `(a, a†)` with `a|n⟩ = √n|n−1⟩`.
pub fn ladder(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(dim, MIN_DIM)?;
    let a = OperatorMatrix::from_fn(dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let ad = a.dagger();
    Ok((a, ad))
}

/// `x = (a + a†)/sqrt(2mω)`
pub fn position(dim: usize, m: f64, omega: f64) -> Result<OperatorMatrix> {
    let (a, ad) = ladder(dim)?;
    Ok((&a + &ad).scale_re(1.0 / (2.0 * m * omega).sqrt()))
}

/// `p = i·sqrt(mω/2)·(a† − a)`
pub fn momentum(dim: usize, m: f64, omega: f64) -> Result<OperatorMatrix> {
    let (a, ad) = ladder(dim)?;
    Ok((&ad - &a).scale(Complex64::new(0.0, (0.5 * m * omega).sqrt())))
}

fn oscillator_frequency(m: f64, k: f64) -> Result<f64> {
    require_positive("m", m)?;
    require_positive("k", k)?;
    Ok((k / m).sqrt())
}

/// Single-mode `(ζ − 4δτ²)p²/2m + (δ/2)k·x² + iδτω(xp + px)`.
pub fn env_hamiltonian_nh(
    dim: usize,
    zeta: f64,
    delta: f64,
    tau: f64,
    m: f64,
    k: f64,
) -> Result<OperatorMatrix> {
    let omega = oscillator_frequency(m, k)?;
    let x = position(dim, m, omega)?;
    let p = momentum(dim, m, omega)?;
    let kinetic = (&p * &p).scale_re((zeta - 4.0 * delta * tau * tau) / (2.0 * m));
    let potential = (&x * &x).scale_re(0.5 * delta * k);
    let squeeze = (&(&x * &p) + &(&p * &x)).scale(Complex64::new(0.0, delta * tau * omega));
    Ok(&(&kinetic + &potential) + &squeeze)
}

/// Single-mode `ζp²/2m + (δ/2)k·x²`.
pub fn env_hamiltonian_h(
    dim: usize,
    zeta: f64,
    delta: f64,
    m: f64,
    k: f64,
) -> Result<OperatorMatrix> {
    let omega = oscillator_frequency(m, k)?;
    let x = position(dim, m, omega)?;
    let p = momentum(dim, m, omega)?;
    Ok(&(&p * &p).scale_re(zeta / (2.0 * m)) + &(&x * &x).scale_re(0.5 * delta * k))
}

/// `(η_E, η_E⁻¹)` with `η_E = exp(τ·p²/(mω))`, both from one eigendecomposition
/// of the Hermitian exponent.
pub fn env_similarity_pair(
    dim: usize,
    tau: f64,
    m: f64,
    omega: f64,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(dim, MIN_DIM)?;
    require_positive("m", m)?;
    require_positive("omega", omega)?;
    if !tau.is_finite() {
        return Err(Error::domain("tau", tau, "must be finite"));
    }
    if tau == 0.0 {
        return Ok((OperatorMatrix::identity(dim), OperatorMatrix::identity(dim)));
    }
    let p = momentum(dim, m, omega)?;
    let p2 = &p * &p;
    let eig = SymmetricEigen::new(p2.0);
    let vecs = &eig.eigenvectors;
    let build = |sign: f64| {
        let mut scaled = vecs.clone();
        for (j, &lam) in eig.eigenvalues.iter().enumerate() {
            let w = (sign * tau * lam / (m * omega)).exp();
            scaled.column_mut(j).scale_mut(w);
        }
        OperatorMatrix(&scaled * vecs.adjoint())
    };
    Ok((build(1.0), build(-1.0)))
}

/// `η_E = exp(τ·p²/(mω))`.
pub fn env_similarity(dim: usize, tau: f64, m: f64, omega: f64) -> Result<OperatorMatrix> {
    env_similarity_pair(dim, tau, m, omega).map(|(eta, _)| eta)
}

fn trusted_block(dim: usize) -> Vec<usize> {
    (0..dim / 2).collect()
}

/// `max |η_E·H_E^NH·η_E⁻¹ − H_E|` on the top-left `dim/2` block.
pub fn similarity_residual(dim: usize, env: &EnvConfig, m: f64, k: f64) -> Result<ResidualReport> {
    check_dim(dim, MIN_RESIDUAL_DIM)?;
    let omega = oscillator_frequency(m, k)?;
    let (zeta, delta, tau) = (env.zeta(), env.delta(), env.tau());
    let h_nh = env_hamiltonian_nh(dim, zeta, delta, tau, m, k)?;
    let h = env_hamiltonian_h(dim, zeta, delta, m, k)?;
    let (eta, eta_inv) = env_similarity_pair(dim, tau, m, omega)?;
    let mapped = &(&eta * &h_nh) * &eta_inv;
    let block = trusted_block(dim);
    Ok(ResidualReport {
        dim,
        tau,
        zeta,
        delta,
        block_size: block.len(),
        residual: mapped.max_abs_diff_on(&h, &block),
    })
}

/// Single-mode composite `H^NH` acting on qubit ⊗ Fock (qubit index major).
///
/// `σx + iα_Sσz + ω{Θ₊a² + Θ₋a†² + ((ζ+δ)/4 − δτ²)(2a†a + 1)}
///  + (σx + iα_Sσz) ⊗ {c·a† + c*·a + τ(c + c*)(a − a†)}`
/// with `Θ± = δ(τ ± ½)² − ζ/4`.
pub fn composite_hamiltonian_nh(
    dim: usize,
    sys: &SystemConfig,
    env: &EnvConfig,
    coupling: Complex64,
    m: f64,
    k: f64,
) -> Result<OperatorMatrix> {
    let omega = oscillator_frequency(m, k)?;
    let (a, ad) = ladder(dim)?;
    let (zeta, delta, tau) = (env.zeta(), env.delta(), env.tau());
    let (theta_plus, theta_minus) = theta_pm(zeta, delta, tau);
    let id_bath = OperatorMatrix::identity(dim);
    let number_term =
        (&(&ad * &a).scale_re(2.0) + &id_bath).scale_re((zeta + delta) / 4.0 - delta * tau * tau);
    let bath = (&(&(&a * &a).scale_re(theta_plus) + &(&ad * &ad).scale_re(theta_minus))
        + &number_term)
        .scale_re(omega);
    let drive = &(&ad.scale(coupling) + &a.scale(coupling.conj()))
        + &(&a - &ad).scale_re(tau * 2.0 * coupling.re);
    let qubit = OperatorMatrix::from_qubit(&crate::model::system_hamiltonian_nh(sys.alpha_s()));
    let id_qubit = OperatorMatrix::identity(2);
    Ok(&(&qubit.kron(&id_bath) + &id_qubit.kron(&bath)) + &qubit.kron(&drive))
}

/// `Θ± = δ(τ ± ½)² − ζ/4`
pub fn theta_pm(zeta: f64, delta: f64, tau: f64) -> (f64, f64) {
    (
        delta * (tau + 0.5).powi(2) - zeta / 4.0,
        delta * (tau - 0.5).powi(2) - zeta / 4.0,
    )
}

/// Hermitian composite
/// `E₁σx + E₁σx ⊗ (c·a† + c*·a) + ω{(ζ+δ)/2·(a†a + ½) + (δ−ζ)/4·(a² + a†²)}`.
pub fn composite_hamiltonian_h(
    dim: usize,
    sys: &SystemConfig,
    env: &EnvConfig,
    coupling: Complex64,
    m: f64,
    k: f64,
) -> Result<OperatorMatrix> {
    let omega = oscillator_frequency(m, k)?;
    let (a, ad) = ladder(dim)?;
    let (zeta, delta) = (env.zeta(), env.delta());
    let id_bath = OperatorMatrix::identity(dim);
    let number = (&(&ad * &a) + &id_bath.scale_re(0.5)).scale_re(0.5 * (zeta + delta));
    let squeeze = (&(&a * &a) + &(&ad * &ad)).scale_re(0.25 * (delta - zeta));
    let bath = (&number + &squeeze).scale_re(omega);
    let sx = OperatorMatrix::from_qubit(&Matrix2::pauli_x()).scale_re(sys.e1());
    let drive = &ad.scale(coupling) + &a.scale(coupling.conj());
    Ok(&(&sx.kron(&id_bath) + &OperatorMatrix::identity(2).kron(&bath)) + &sx.kron(&drive))
}

/// `max |η·H^NH·η⁻¹ − H|` with `η = η_S ⊗ η_E`, over the trusted Fock block
/// of both qubit sectors. Single bath mode only.
pub fn composite_residual(
    dim: usize,
    sys: &SystemConfig,
    env: &EnvConfig,
    couplings: &[Complex64],
    m: f64,
    k: f64,
) -> Result<ResidualReport> {
    check_dim(dim, MIN_RESIDUAL_DIM)?;
    let &[coupling] = couplings else {
        return Err(Error::domain(
            "couplings",
            couplings.len() as f64,
            "exactly one bath mode is supported",
        ));
    };
    let omega = oscillator_frequency(m, k)?;
    let eta_s = OperatorMatrix::from_qubit(&system_similarity(sys.alpha_s())?);
    let eta_s_inv = OperatorMatrix::from_qubit(&system_similarity_inverse(sys.alpha_s())?);
    let (eta_e, eta_e_inv) = env_similarity_pair(dim, env.tau(), m, omega)?;
    let eta = eta_s.kron(&eta_e);
    let eta_inv = eta_s_inv.kron(&eta_e_inv);

    let h_nh = composite_hamiltonian_nh(dim, sys, env, coupling, m, k)?;
    let h = composite_hamiltonian_h(dim, sys, env, coupling, m, k)?;
    let mapped = &(&eta * &h_nh) * &eta_inv;
    let half = dim / 2;
    let block: Vec<usize> = (0..2)
        .flat_map(|q| (0..half).map(move |n| q * dim + n))
        .collect();
    Ok(ResidualReport {
        dim,
        tau: env.tau(),
        zeta: env.zeta(),
        delta: env.delta(),
        block_size: half,
        residual: mapped.max_abs_diff_on(&h, &block),
    })
}
