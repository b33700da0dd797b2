//! Dense complex linear algebra on the chain Hilbert space.
//!
//! The chain of `L` sites with local dimension `N` carries the computational
//! product basis with **site 1 as the most significant tensor factor**: basis
//! state `|s_1 s_2 ... s_L>` has index `sum_m s_m N^(L-m)`. Every module in
//! the crate inherits this convention, which pins all matrices entry by entry.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse, Norm};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use crate::{C64, Error, Result, JORDAN_CONDITION_THRESHOLD};

/// Dense complex operator on the full chain space (`N^L` by `N^L`).
pub type ChainOp = Array2<C64>;

/// Dense state vector on the full chain space.
pub type ChainVec = Array1<C64>;

/// Largest admissible `L * log2(N)` for the dense-matrix budget.
pub const DEFAULT_BUDGET_QUBITS: f64 = 14.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

/// System size, local dimension, inhomogeneity period and boundary kind.
///
/// Constructing a geometry validates that the depth divides the system size,
/// that open boundaries come with depth 2 and even `L`, and that the full
/// operator space fits the dense-matrix budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainGeometry {
    pub sites: usize,
    pub local_dim: usize,
    pub period: usize,
    pub boundary: Boundary,
}

impl ChainGeometry {
    pub fn new(sites: usize, local_dim: usize, period: usize, boundary: Boundary) -> Result<Self> {
        Self::with_budget(sites, local_dim, period, boundary, DEFAULT_BUDGET_QUBITS)
    }

    /// Periodic spin-1/2 chain of the given depth.
    pub fn periodic_qubits(sites: usize, period: usize) -> Result<Self> {
        Self::new(sites, 2, period, Boundary::Periodic)
    }

    /// Open spin-1/2 chain (depth 2 only).
    pub fn open_qubits(sites: usize) -> Result<Self> {
        Self::new(sites, 2, 2, Boundary::Open)
    }

    pub fn with_budget(
        sites: usize,
        local_dim: usize,
        period: usize,
        boundary: Boundary,
        budget_qubits: f64,
    ) -> Result<Self> {
        if sites == 0 || local_dim < 2 || period == 0 {
            return Err(Error::Geometry(format!(
                "need L >= 1, N >= 2, n >= 1; got L = {sites}, N = {local_dim}, n = {period}"
            )));
        }
        if sites % period != 0 {
            return Err(Error::Geometry(format!(
                "system size must satisfy L mod n = 0; got L = {sites}, n = {period}"
            )));
        }
        if boundary == Boundary::Open && (period != 2 || sites % 2 != 0) {
            return Err(Error::Geometry(format!(
                "open boundary requires n = 2 and even L; got L = {sites}, n = {period}"
            )));
        }
        let qubits = sites as f64 * (local_dim as f64).log2();
        if qubits > budget_qubits {
            return Err(Error::Geometry(format!(
                "L log2 N = {qubits:.1} exceeds the dense-matrix budget of {budget_qubits}"
            )));
        }
        Ok(Self { sites, local_dim, period, boundary })
    }

    /// Dimension of the full chain space, `N^L`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.sites as u32)
    }

    /// Reduce a 1-based site index into `1..=L`, wrapping only when periodic.
    pub fn wrap_site(&self, site: i64) -> Result<usize> {
        let l = self.sites as i64;
        if site >= 1 && site <= l {
            return Ok(site as usize);
        }
        match self.boundary {
            Boundary::Periodic => Ok(((site - 1).rem_euclid(l) + 1) as usize),
            Boundary::Open => Err(Error::SiteOutOfRange { index: site, sites: self.sites }),
        }
    }

    /// Digit of `state` at 1-based `site` (site 1 most significant).
    #[inline]
    pub fn digit(&self, state: usize, site: usize) -> usize {
        let shift = self.local_dim.pow((self.sites - site) as u32);
        (state / shift) % self.local_dim
    }

    /// Stride of the 1-based `site` in the basis index.
    #[inline]
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim.pow((self.sites - site) as u32)
    }
}

/// Gate on two (not necessarily adjacent) sites: an `N^2 x N^2` matrix in the
/// ordered-pair basis, first site major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSiteGate {
    pub local_dim: usize,
    pub mat: Array2<C64>,
}

impl TwoSiteGate {
    pub fn new(local_dim: usize, mat: Array2<C64>) -> Result<Self> {
        let d = local_dim * local_dim;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "two-site gate for N = {local_dim} must be {d}x{d}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { local_dim, mat })
    }

    pub fn identity(local_dim: usize) -> Self {
        Self { local_dim, mat: Array2::eye(local_dim * local_dim) }
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Transpose in both tensor factors (the plain matrix transpose).
    pub fn transpose_both(&self) -> Self {
        Self { local_dim: self.local_dim, mat: self.mat.t().to_owned() }
    }

    /// Partial transpose in the first factor.
    pub fn transpose_first(&self) -> Self {
        self.partial_transpose(true)
    }

    /// Partial transpose in the second factor.
    pub fn transpose_second(&self) -> Self {
        self.partial_transpose(false)
    }

    fn partial_transpose(&self, first: bool) -> Self {
        let n = self.local_dim;
        let mut out = Array2::zeros((n * n, n * n));
        for a in 0..n {
            for i in 0..n {
                for b in 0..n {
                    for j in 0..n {
                        let (row, col) = if first { (b * n + i, a * n + j) } else { (a * n + j, b * n + i) };
                        out[[row, col]] = self.mat[[a * n + i, b * n + j]];
                    }
                }
            }
        }
        Self { local_dim: n, mat: out }
    }

    /// Conjugate the first factor: `(v x 1) G (v^-1 x 1)`.
    pub fn conjugate_first(&self, v: &Array2<C64>) -> Result<Self> {
        let n = self.local_dim;
        let vinv = v.inv().map_err(|e| Error::Singular(format!("first-factor conjugator: {e}")))?;
        let left = kron(v, &Array2::eye(n));
        let right = kron(&vinv, &Array2::eye(n));
        Ok(Self { local_dim: n, mat: left.dot(&self.mat).dot(&right) })
    }

    /// Trace over the first factor against a single-site weight:
    /// `X_{i j} = sum_{a b} G_{(a i), (b j)} K_{b a}`.
    pub fn trace_first_with(&self, weight: &Array2<C64>) -> Array2<C64> {
        let n = self.local_dim;
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..n {
                    for b in 0..n {
                        acc += self.mat[[a * n + i, b * n + j]] * weight[[b, a]];
                    }
                }
                out[[i, j]] = acc;
            }
        }
        out
    }
}

/// Two-site permutation gate: `P (A x B) P = B x A`, `P^2 = 1`.
pub fn permutation_op(local_dim: usize) -> TwoSiteGate {
    let n = local_dim;
    let mut mat = Array2::zeros((n * n, n * n));
    for a in 0..n {
        for b in 0..n {
            mat[[a * n + b, b * n + a]] = C64::new(1.0, 0.0);
        }
    }
    TwoSiteGate { local_dim: n, mat }
}

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Embed a two-site gate at the ordered site pair `(site_i, site_j)`,
/// identity elsewhere. Indices wrap modulo `L` only for periodic chains.
pub fn embed_two_site(gate: &TwoSiteGate, site_i: i64, site_j: i64, geo: &ChainGeometry) -> Result<ChainOp> {
    if gate.local_dim != geo.local_dim {
        return Err(Error::DimensionMismatch(format!(
            "gate local dimension {} != chain local dimension {}",
            gate.local_dim, geo.local_dim
        )));
    }
    let i = geo.wrap_site(site_i)?;
    let j = geo.wrap_site(site_j)?;
    if i == j {
        return Err(Error::InvalidInput(format!("site pair must be distinct, got ({site_i}, {site_j})")));
    }
    let n = geo.local_dim;
    let dim = geo.dim();
    let (si, sj) = (geo.stride(i), geo.stride(j));
    let mut out = Array2::zeros((dim, dim));
    for col in 0..dim {
        let ci = (col / si) % n;
        let cj = (col / sj) % n;
        let base = col - ci * si - cj * sj;
        let gcol = ci * n + cj;
        for a in 0..n {
            for b in 0..n {
                let g = gate.mat[[a * n + b, gcol]];
                if g != C64::new(0.0, 0.0) {
                    out[[base + a * si + b * sj, col]] += g;
                }
            }
        }
    }
    Ok(out)
}

/// Embed a single-site operator at the 1-based `site`.
pub fn embed_single_site(op: &Array2<C64>, site: i64, geo: &ChainGeometry) -> Result<ChainOp> {
    let n = geo.local_dim;
    if op.nrows() != n || op.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "single-site operator must be {n}x{n}, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    let m = geo.wrap_site(site)?;
    let s = geo.stride(m);
    let dim = geo.dim();
    let mut out = Array2::zeros((dim, dim));
    for col in 0..dim {
        let cm = (col / s) % n;
        let base = col - cm * s;
        for a in 0..n {
            let g = op[[a, cm]];
            if g != C64::new(0.0, 0.0) {
                out[[base + a * s, col]] += g;
            }
        }
    }
    Ok(out)
}

/// Right-multiply `m` by a single-site operator embedded at `site`:
/// `out = m . g_site`. Cheaper than materializing the embedding.
pub fn apply_single_site_right(m: &ChainOp, g: &Array2<C64>, site: usize, geo: &ChainGeometry) -> ChainOp {
    let n = geo.local_dim;
    let s = geo.stride(site);
    let dim = geo.dim();
    let mut out = Array2::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            let cc = (col / s) % n;
            let base = col - cc * s;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[[row, base + k * s]] * g[[k, cc]];
            }
            out[[row, col]] = acc;
        }
    }
    out
}

/// Right translation operator `G` built directly as the basis permutation
/// `|s_1 s_2 ... s_L> -> |s_L s_1 ... s_(L-1)>`; equals the ordered product
/// of adjacent permutation gates `P_{1,2} P_{2,3} ... P_{L-1,L}`.
pub fn translation_op(geo: &ChainGeometry) -> Result<ChainOp> {
    if geo.boundary != Boundary::Periodic {
        return Err(Error::Geometry("translation operator requires a periodic chain".into()));
    }
    let dim = geo.dim();
    let mut out = Array2::zeros((dim, dim));
    for col in 0..dim {
        // digits of col, site 1 first
        let mut row = 0usize;
        for site in 1..=geo.sites {
            let d = geo.digit(col, site);
            let target = if site == geo.sites { 1 } else { site + 1 };
            row += d * geo.stride(target);
        }
        out[[row, col]] = C64::new(1.0, 0.0);
    }
    Ok(out)
}

/// The same operator as the explicit matrix product of Eq.-style adjacent
/// transpositions; used by tests to pin the convention.
pub fn translation_op_product(geo: &ChainGeometry) -> Result<ChainOp> {
    if geo.boundary != Boundary::Periodic {
        return Err(Error::Geometry("translation operator requires a periodic chain".into()));
    }
    let p = permutation_op(geo.local_dim);
    let mut g = Array2::eye(geo.dim());
    for m in 1..geo.sites {
        g = g.dot(&embed_two_site(&p, m as i64, m as i64 + 1, geo)?);
    }
    Ok(g)
}

pub fn identity_op(dim: usize) -> ChainOp {
    Array2::eye(dim)
}

pub fn fro_norm(m: &ChainOp) -> f64 {
    m.norm_l2()
}

pub fn adjoint(m: &ChainOp) -> ChainOp {
    m.t().mapv(|z| z.conj())
}

pub fn conj_entrywise(m: &ChainOp) -> ChainOp {
    m.mapv(|z| z.conj())
}

pub fn commutator(a: &ChainOp, b: &ChainOp) -> ChainOp {
    a.dot(b) - b.dot(a)
}

pub fn anticommutator(a: &ChainOp, b: &ChainOp) -> ChainOp {
    a.dot(b) + b.dot(a)
}

pub fn check_finite(m: &ChainOp, context: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context.to_string()))
    }
}

/// Deterministic RNG used by every randomized check.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform complex sample from the centered square `|Re|, |Im| <= radius`.
pub fn random_complex(rng: &mut impl Rng, radius: f64) -> C64 {
    C64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

/// General (non-Hermitian) eigendecomposition with deterministic ordering.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues sorted by (argument, modulus).
    pub values: Vec<C64>,
    /// Right eigenvectors, column k matching `values[k]`.
    pub vectors: ChainOp,
    /// Inverse of the eigenvector matrix.
    pub vectors_inv: ChainOp,
    /// `|V diag(lambda) V^-1 - A|_F / |A|_F`.
    pub reconstruction_residual: f64,
    /// Frobenius condition estimate `|V|_F |V^-1|_F`.
    pub vector_condition: f64,
}

impl EigenDecomposition {
    /// Near-defective input: eigenvector conditioning beyond the Jordan-risk
    /// threshold, expected exactly at spectral phase transitions.
    pub fn jordan_risk(&self) -> bool {
        self.vector_condition > JORDAN_CONDITION_THRESHOLD
    }
}

/// Sort key: argument in (-pi, pi] ascending, then modulus.
fn eig_order(a: &C64, b: &C64) -> std::cmp::Ordering {
    let (pa, pb) = (a.arg(), b.arg());
    pa.partial_cmp(&pb)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
}

pub fn eig(op: &ChainOp) -> Result<EigenDecomposition> {
    check_finite(op, "eigensolver input")?;
    let (vals, vecs) = op
        .eig()
        .map_err(|e| Error::EigenSolver(format!("zgeev: {e}")))?;
    let dim = op.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig_order(&vals[i], &vals[j]));
    let values: Vec<C64> = order.iter().map(|&i| vals[i]).collect();
    let mut vectors = Array2::zeros((dim, dim));
    for (k, &i) in order.iter().enumerate() {
        vectors.column_mut(k).assign(&vecs.column(i));
    }
    let vectors_inv = vectors
        .inv()
        .map_err(|e| Error::EigenSolver(format!("eigenvector matrix inversion: {e}")))?;
    let lambda = Array2::from_diag(&Array1::from_vec(values.clone()));
    let recon = vectors.dot(&lambda).dot(&vectors_inv);
    let denom = fro_norm(op).max(f64::MIN_POSITIVE);
    let reconstruction_residual = fro_norm(&(&recon - op)) / denom;
    let vector_condition = fro_norm(&vectors) * fro_norm(&vectors_inv);
    Ok(EigenDecomposition { values, vectors, vectors_inv, reconstruction_residual, vector_condition })
}

#[derive(Debug, Clone)]
pub struct MatrixLog {
    pub matrix: ChainOp,
    /// Set when the eigenvector conditioning exceeds the Jordan-risk
    /// threshold; the log is then untrustworthy rather than wrong outright.
    pub jordan_risk: bool,
    pub vector_condition: f64,
}

/// Principal matrix logarithm through the eigendecomposition: every
/// eigenvalue takes the branch with imaginary part in `(-pi, pi]`.
pub fn matrix_log_principal(op: &ChainOp) -> Result<MatrixLog> {
    let decomp = eig(op)?;
    let tiny = 1e-300;
    for v in &decomp.values {
        if v.norm() < tiny {
            return Err(Error::Singular("matrix log of a singular operator".into()));
        }
    }
    let logs: Vec<C64> = decomp.values.iter().map(|v| C64::new(v.norm().ln(), v.arg())).collect();
    let lambda = Array2::from_diag(&Array1::from_vec(logs));
    let matrix = decomp.vectors.dot(&lambda).dot(&decomp.vectors_inv);
    Ok(MatrixLog {
        matrix,
        jordan_risk: decomp.jordan_risk(),
        vector_condition: decomp.vector_condition,
    })
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
/// Independent of the eigendecomposition path, so the pair
/// (`matrix_log_principal`, `matrix_exp`) forms a two-route consistency check.
pub fn matrix_exp(op: &ChainOp) -> ChainOp {
    let norm = fro_norm(op);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = C64::new(1.0 / f64::from(1u32 << squarings.min(31)), 0.0);
    let scaled = op.mapv(|z| z * scale);
    let dim = op.nrows();
    let mut term = identity_op(dim);
    let mut acc = identity_op(dim);
    for k in 1..=40 {
        term = term.dot(&scaled).mapv(|z| z / C64::new(k as f64, 0.0));
        acc += &term;
        if fro_norm(&term) < 1e-18 * fro_norm(&acc) {
            break;
        }
    }
    for _ in 0..squarings.min(31) {
        acc = acc.dot(&acc);
    }
    acc
}
