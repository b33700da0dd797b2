//! Inhomogeneous monodromy and transfer matrices, periodic and reflecting-end,
//! the two-row transfer matrix, and the staggered Hamiltonian.
//!
//! Monodromy matrices are held blockwise: an `N x N` array of chain operators
//! (the auxiliary-space matrix elements; for N = 2 the blocks are A, B, C, D).
//! Products over the auxiliary space never materialize the `N^(L+1)` space.

use std::sync::Arc;

use ndarray::Array2;

use crate::chain::{
    apply_single_site_right, embed_single_site, fro_norm, identity_op, kron, translation_op,
    Boundary, ChainGeometry, ChainOp, TwoSiteGate,
};
use crate::six_vertex::{paulis, tl_generator, AnisotropyParams};
use crate::yang_baxter::{boundary_ybe_residual, RMatrixSpec};
use crate::{C64, Error, Result};

/// Scalar prefactor tracked as (base, exponent) pairs and applied once at the
/// end, so large arguments stay representable through the logarithm.
#[derive(Debug, Clone, Default)]
pub struct ScaleFactor {
    factors: Vec<(C64, i32)>,
}

impl ScaleFactor {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn push(&mut self, base: C64, exponent: i32) {
        self.factors.push((base, exponent));
    }

    pub fn times(mut self, base: C64, exponent: i32) -> Self {
        self.push(base, exponent);
        self
    }

    /// Direct product of the tracked factors.
    pub fn value(&self) -> C64 {
        self.factors
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &(b, e)| acc * b.powi(e))
    }

    /// Logarithm of the product, safe at large exponents.
    pub fn ln(&self) -> C64 {
        self.factors
            .iter()
            .fold(C64::new(0.0, 0.0), |acc, &(b, e)| acc + b.ln() * e as f64)
    }

    pub fn apply_to(&self, op: &ChainOp) -> ChainOp {
        let v = self.value();
        op.mapv(|z| z * v)
    }
}

/// Inhomogeneous monodromy matrix held as auxiliary-space blocks.
#[derive(Debug, Clone)]
pub struct Monodromy {
    /// Row-major `aux_dim x aux_dim` chain-operator blocks.
    pub blocks: Vec<ChainOp>,
    pub aux_dim: usize,
    pub u: C64,
    pub inhoms: Vec<C64>,
}

impl Monodromy {
    fn identity(aux_dim: usize, dim: usize, u: C64, inhoms: Vec<C64>) -> Self {
        let mut blocks = Vec::with_capacity(aux_dim * aux_dim);
        for r in 0..aux_dim {
            for c in 0..aux_dim {
                blocks.push(if r == c { identity_op(dim) } else { Array2::zeros((dim, dim)) });
            }
        }
        Self { blocks, aux_dim, u, inhoms }
    }

    pub fn block(&self, r: usize, c: usize) -> &ChainOp {
        &self.blocks[r * self.aux_dim + c]
    }

    /// The magnon-creation block `B = M_{0,1}` (N = 2).
    pub fn b_block(&self) -> &ChainOp {
        self.block(0, 1)
    }

    /// Partial trace over the auxiliary space.
    pub fn trace(&self) -> ChainOp {
        let mut acc = self.block(0, 0).clone();
        for r in 1..self.aux_dim {
            acc += self.block(r, r);
        }
        acc
    }

    /// Right-multiply by an `(aux x site)` two-site gate acting at `site`.
    fn push_site_factor(&mut self, gate: &TwoSiteGate, site: usize, geo: &ChainGeometry) {
        let n = self.aux_dim;
        let mut next = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc: Option<ChainOp> = None;
                for k in 0..n {
                    // site-space operator sitting in the (k, c) auxiliary block of the gate
                    let mut local = Array2::zeros((n, n));
                    for sp in 0..n {
                        for s in 0..n {
                            local[[sp, s]] = gate.mat[[k * n + sp, c * n + s]];
                        }
                    }
                    let term = apply_single_site_right(self.block(r, k), &local, site, geo);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a + term,
                    });
                }
                next.push(acc.expect("aux_dim >= 1"));
            }
        }
        self.blocks = next;
    }

    /// Right-multiply by an operator acting on the auxiliary space alone.
    fn push_aux_factor(&mut self, k_op: &Array2<C64>) {
        let n = self.aux_dim;
        let dim = self.block(0, 0).nrows();
        let mut next = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc: ChainOp = Array2::zeros((dim, dim));
                for k in 0..n {
                    let w = k_op[[k, c]];
                    if w != C64::new(0.0, 0.0) {
                        acc += &self.block(r, k).mapv(|z| z * w);
                    }
                }
                next.push(acc);
            }
        }
        self.blocks = next;
    }

    /// Block-matrix product with another monodromy on the same spaces.
    fn push_monodromy(&mut self, other: &Monodromy) {
        let n = self.aux_dim;
        let dim = self.block(0, 0).nrows();
        let mut next = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc: ChainOp = Array2::zeros((dim, dim));
                for k in 0..n {
                    acc += &self.block(r, k).dot(other.block(k, c));
                }
                next.push(acc);
            }
        }
        self.blocks = next;
    }

    /// Expand onto an explicit `(aux x chain)` space, auxiliary factor first.
    pub fn to_full(&self) -> Array2<C64> {
        let n = self.aux_dim;
        let dim = self.block(0, 0).nrows();
        let mut out = Array2::zeros((n * dim, n * dim));
        for r in 0..n {
            for c in 0..n {
                let blk = self.block(r, c);
                for x in 0..dim {
                    for y in 0..dim {
                        out[[r * dim + x, c * dim + y]] = blk[[x, y]];
                    }
                }
            }
        }
        out
    }
}

/// Inhomogeneity assigned to the 1-based `site`: `u_j` with
/// `j = ((site - 1) mod n) + 1`.
fn inhom_at(site: usize, inhoms: &[C64]) -> C64 {
    inhoms[(site - 1) % inhoms.len()]
}

/// Ordered product `M_a(u, {u_j}) = R_{a,1}(u, u_1) R_{a,2}(u, u_2) ...`,
/// the site-1 factor leftmost, auxiliary-space blocks extracted by basis
/// projection.
pub fn monodromy(spec: &RMatrixSpec, u: C64, inhoms: &[C64], geo: &ChainGeometry) -> Result<Monodromy> {
    if geo.boundary != Boundary::Periodic {
        return Err(Error::Geometry("the periodic monodromy needs a periodic chain".into()));
    }
    if inhoms.len() != geo.period {
        return Err(Error::InvalidInput(format!(
            "expected {} inhomogeneities (one per period site), got {}",
            geo.period,
            inhoms.len()
        )));
    }
    if spec.local_dim != geo.local_dim {
        return Err(Error::DimensionMismatch("spec and geometry disagree on N".into()));
    }
    let mut m = Monodromy::identity(geo.local_dim, geo.dim(), u, inhoms.to_vec());
    for site in 1..=geo.sites {
        let gate = spec.evaluate(u, inhom_at(site, inhoms))?;
        m.push_site_factor(&gate, site, geo);
    }
    Ok(m)
}

/// Bare inhomogeneous transfer matrix: the auxiliary trace of the monodromy,
/// no scalar prefactor.
pub fn bare_transfer(spec: &RMatrixSpec, u: C64, inhoms: &[C64], geo: &ChainGeometry) -> Result<ChainOp> {
    Ok(monodromy(spec, u, inhoms, geo)?.trace())
}

/// Prefactor of the staggered 6-vertex transfer matrix,
/// `[sinh(u + eta) sinh(u - alpha + eta)]^(L/2)`, as a tracked scale.
pub fn staggered_prefactor(params: &AnisotropyParams, u: C64, alpha: C64, sites: usize) -> ScaleFactor {
    let half = (sites / 2) as i32;
    ScaleFactor::one()
        .times((u + params.eta).sinh(), half)
        .times((u - alpha + params.eta).sinh(), half)
}

/// Staggered 6-vertex transfer matrix (depth 2, inhomogeneities `{0, alpha}`)
/// including the scalar prefactor that clears the gate denominators.
pub fn staggered_transfer(
    params: &AnisotropyParams,
    u: C64,
    alpha: C64,
    geo: &ChainGeometry,
) -> Result<ChainOp> {
    if geo.period != 2 {
        return Err(Error::Geometry("the staggered transfer matrix is a depth-2 object".into()));
    }
    let spec = crate::six_vertex::six_vertex_spec(params)?;
    let bare = bare_transfer(&spec, u, &[C64::new(0.0, 0.0), alpha], geo)?;
    Ok(staggered_prefactor(params, u, alpha, geo.sites).apply_to(&bare))
}

/// Two-row transfer matrix `T(u, alpha) T(u + alpha, alpha)`.
pub fn two_row_transfer(
    params: &AnisotropyParams,
    u: C64,
    alpha: C64,
    geo: &ChainGeometry,
) -> Result<ChainOp> {
    let t1 = staggered_transfer(params, u, alpha, geo)?;
    let t2 = staggered_transfer(params, u + alpha, alpha, geo)?;
    Ok(t1.dot(&t2))
}

/// Staggered Hamiltonian in closed form over Temperley–Lieb generators:
///
/// `H = -sum_m [ e_m + cA {e_m, e_{m+1}} - (-1)^m cC [e_m, e_{m+1}] - c0 ]`
///
/// with `cA = sinh^2(alpha) cosh(eta) / (cosh 2eta - cosh 2alpha)`,
/// `cC = sinh(alpha) cosh(alpha) sinh(eta) / (cosh 2eta - cosh 2alpha)`,
/// `c0 = cosh(eta) (cosh 2eta - cosh^2 alpha) / (cosh 2eta - cosh 2alpha)`.
pub fn staggered_hamiltonian_closed(
    params: &AnisotropyParams,
    alpha: C64,
    geo: &ChainGeometry,
) -> Result<ChainOp> {
    if geo.boundary != Boundary::Periodic || geo.period != 2 {
        return Err(Error::Geometry("the staggered Hamiltonian is periodic with period 2".into()));
    }
    let eta = params.eta;
    let denom = (eta * 2.0).cosh() - (alpha * 2.0).cosh();
    if denom.norm() < 1e-12 {
        return Err(Error::CoefficientPole(format!(
            "cosh(2 eta) = cosh(2 alpha) at eta = {eta}, alpha = {alpha}"
        )));
    }
    let c_a = alpha.sinh() * alpha.sinh() * eta.cosh() / denom;
    let c_c = alpha.sinh() * alpha.cosh() * eta.sinh() / denom;
    let c_0 = eta.cosh() * ((eta * 2.0).cosh() - alpha.cosh() * alpha.cosh()) / denom;

    let l = geo.sites as i64;
    let gate = tl_generator(params);
    let dim = geo.dim();
    let mut h: ChainOp = Array2::zeros((dim, dim));
    for m in 1..=l {
        let em = crate::chain::embed_two_site(&gate, m, m + 1, geo)?;
        let en = crate::chain::embed_two_site(&gate, m + 1, m + 2, geo)?;
        let anti = crate::chain::anticommutator(&em, &en);
        let comm = crate::chain::commutator(&em, &en);
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 }; // -(-1)^m
        let mut term = em;
        term += &anti.mapv(|z| z * c_a);
        term += &comm.mapv(|z| z * c_c * sign);
        term -= &identity_op(dim).mapv(|z| z * c_0);
        h -= &term;
    }
    Ok(h)
}

/// Reflecting-end boundary data: K matrices as callables of the spectral
/// parameter together with the crossing weight `w`.
#[derive(Clone)]
pub struct OpenBoundaryData {
    pub k_minus: Arc<dyn Fn(C64) -> Array2<C64> + Send + Sync>,
    pub k_plus: Arc<dyn Fn(C64) -> Array2<C64> + Send + Sync>,
    pub w: Array2<C64>,
}

impl OpenBoundaryData {
    /// Constant quantum-group-invariant choice: `K_- = 1`, `K_+ = w`.
    pub fn quantum_group_invariant(params: &AnisotropyParams) -> Self {
        let eta = params.eta;
        let w: Array2<C64> = Array2::from_diag(&ndarray::arr1(&[eta.exp(), (-eta).exp()]));
        let w_plus = w.clone();
        Self {
            k_minus: Arc::new(|_u| Array2::eye(2)),
            k_plus: Arc::new(move |_u| w_plus.clone()),
            w,
        }
    }

    /// Admission gate: both boundary Yang–Baxter residuals below `tol` at
    /// `samples` seeded random points.
    pub fn validate(&self, spec: &RMatrixSpec, seed: u64, samples: usize, tol: f64) -> Result<()> {
        let mut rng = crate::chain::rng_from_seed(seed);
        for _ in 0..samples {
            let u = spec.sample_point(&mut rng, 0.8, &[]);
            let v = spec.sample_point(&mut rng, 0.8, &[u]);
            let (rm, rp) = boundary_ybe_residual(spec, &*self.k_minus, &*self.k_plus, u, v)?;
            if rm > tol || rp > tol {
                return Err(Error::InvalidInput(format!(
                    "boundary data rejected: reflection residuals ({rm:.3e}, {rp:.3e}) at (u, v) = ({u}, {v})"
                )));
            }
        }
        Ok(())
    }
}

/// Open-boundary monodromy
/// `M°_a(u) = M_a(u) K_-(u) M_a^-1(-u) K_+(u)`, the inverse factor built from
/// transposed gates (never by numerical inversion):
/// `M_a^-1(-u) = prod_{m=L/2..1} R^t_{a,2m}(u + u_2) R^t_{a,2m-1}(u + u_1)`.
pub fn open_monodromy(
    spec: &RMatrixSpec,
    u: C64,
    inhoms: [C64; 2],
    bdata: &OpenBoundaryData,
    geo: &ChainGeometry,
) -> Result<Monodromy> {
    if geo.boundary != Boundary::Open {
        return Err(Error::Geometry("open monodromy needs an open chain".into()));
    }
    if !(spec.difference_form && spec.regular) {
        return Err(Error::InvalidInput(
            "the reflecting-end construction needs a regular difference-form spec".into(),
        ));
    }
    let zero = C64::new(0.0, 0.0);
    let dim = geo.dim();
    let n = geo.local_dim;

    // forward half: ordered product of R_{a,m}(u - u_j), site 1 leftmost
    let mut m_fwd = Monodromy::identity(n, dim, u, inhoms.to_vec());
    for site in 1..=geo.sites {
        let gate = spec.evaluate(u, inhom_at(site, &inhoms))?;
        m_fwd.push_site_factor(&gate, site, geo);
    }

    m_fwd.push_aux_factor(&(bdata.k_minus)(u));

    // analytic inverse of M_a(-u): transposed gates in descending site order
    for site in (1..=geo.sites).rev() {
        let gate = spec.evaluate(u + inhom_at(site, &inhoms), zero)?.transpose_both();
        m_fwd.push_site_factor(&gate, site, geo);
    }

    m_fwd.push_aux_factor(&(bdata.k_plus)(u));
    Ok(m_fwd)
}

/// Open (reflecting-end) transfer matrix `T°(u) = Tr_a M°_a(u)`.
pub fn open_transfer(
    spec: &RMatrixSpec,
    u: C64,
    inhoms: [C64; 2],
    bdata: &OpenBoundaryData,
    geo: &ChainGeometry,
) -> Result<ChainOp> {
    Ok(open_monodromy(spec, u, inhoms, bdata, geo)?.trace())
}

/// Global spin flip `prod_m sigma^x_m`.
pub fn spin_flip_all(geo: &ChainGeometry) -> Result<ChainOp> {
    let [_, sx, _, _] = paulis();
    let mut acc = identity_op(geo.dim());
    for m in 1..=geo.sites {
        acc = acc.dot(&embed_single_site(&sx, m as i64, geo)?);
    }
    Ok(acc)
}

/// Which auxiliary slot a monodromy occupies when expanded on the doubled
/// auxiliary space (for exchange-relation checks).
pub enum AuxSlot {
    First,
    Second,
}

/// Expand a monodromy onto `aux_a x aux_b x chain`, acting on the chosen slot.
pub fn monodromy_on_doubled_aux(m: &Monodromy, slot: AuxSlot) -> Array2<C64> {
    let n = m.aux_dim;
    let dim = m.block(0, 0).nrows();
    let eye_aux = Array2::<C64>::eye(n);
    let mut out = Array2::zeros((n * n * dim, n * n * dim));
    for r in 0..n {
        for c in 0..n {
            let mut unit = Array2::<C64>::zeros((n, n));
            unit[[r, c]] = C64::new(1.0, 0.0);
            let aux = match slot {
                AuxSlot::First => kron(&unit, &eye_aux),
                AuxSlot::Second => kron(&eye_aux, &unit),
            };
            out += &kron(&aux, m.block(r, c));
        }
    }
    out
}

/// Frobenius residual of the exchange relation
/// `R_ab(u, v) M_a(u) M_b(v) = M_b(v) M_a(u) R_ab(u, v)` on the full
/// `aux x aux x chain` space.
pub fn exchange_relation_residual(
    spec: &RMatrixSpec,
    u: C64,
    v: C64,
    inhoms: &[C64],
    geo: &ChainGeometry,
) -> Result<f64> {
    let ma = monodromy_on_doubled_aux(&monodromy(spec, u, inhoms, geo)?, AuxSlot::First);
    let mb = monodromy_on_doubled_aux(&monodromy(spec, v, inhoms, geo)?, AuxSlot::Second);
    let r_ab = kron(&spec.evaluate(u, v)?.mat, &identity_op(geo.dim()));
    let lhs = r_ab.dot(&ma).dot(&mb);
    let rhs = mb.dot(&ma).dot(&r_ab);
    Ok(fro_norm(&(&lhs - &rhs)))
}

/// Residual of the easy-plane conjugation identity
/// `T^dagger(u, alpha, eta) = (prod sigma^x) T(conj(u) - eta, conj(alpha), eta) (prod sigma^x)`.
pub fn dagger_identity_residual(
    params: &AnisotropyParams,
    u: C64,
    alpha: C64,
    geo: &ChainGeometry,
) -> Result<f64> {
    let t = staggered_transfer(params, u, alpha, geo)?;
    let t_dag = crate::chain::adjoint(&t);
    let flipped = staggered_transfer(params, u.conj() - params.eta, alpha.conj(), geo)?;
    let flip = spin_flip_all(geo)?;
    let rhs = flip.dot(&flipped).dot(&flip);
    Ok(fro_norm(&(&t_dag - &rhs)))
}
