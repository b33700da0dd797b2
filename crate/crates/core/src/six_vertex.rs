//! The concrete gate set of the (staggered) 6-vertex model: Temperley–Lieb
//! generators, the trigonometric R matrix, the exponential Floquet gate, the
//! map between the gate argument `alpha` and the Floquet half-period `T`, and
//! the rational isotropic limit.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{array, Array2};

use crate::chain::{
    commutator, embed_two_site, fro_norm, identity_op, translation_op, Boundary, ChainGeometry,
    TwoSiteGate,
};
use crate::yang_baxter::{CrossingData, RMatrixSpec};
use crate::{C64, Error, Result};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Anisotropy class of the 6-vertex coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnisotropyClass {
    /// `eta` real and nonzero (`|Delta| > 1`).
    EasyAxis,
    /// `eta = i gamma` with `0 < gamma < pi` (`|Delta| < 1`).
    EasyPlane,
    /// `eta = 0` or `eta = i pi` (`|Delta| = 1`).
    Isotropic,
}

/// Root-of-unity data `eta = i pi l1 / l2` with `q^(eps l2) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub l1: i64,
    pub l2: i64,
    /// 2 when `l1` is odd, 1 when `l1` is even.
    pub epsilon: u8,
}

/// Anisotropy parameter set: `q = exp(eta)`, `beta = q + 1/q = 2 cosh(eta)`,
/// `Delta = cosh(eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyParams {
    pub eta: C64,
    pub q: C64,
    pub beta: C64,
    pub delta: C64,
    pub class: AnisotropyClass,
    pub root_of_unity: Option<RootOfUnity>,
}

const AXIS_TOL: f64 = 1e-12;

/// Largest denominator scanned when recognizing a root-of-unity anisotropy.
pub const ROOT_OF_UNITY_MAX_DENOMINATOR: i64 = 64;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

impl AnisotropyParams {
    pub fn new(eta: C64) -> Result<Self> {
        let class = if eta.im.abs() < AXIS_TOL {
            if eta.re.abs() < AXIS_TOL {
                AnisotropyClass::Isotropic
            } else {
                AnisotropyClass::EasyAxis
            }
        } else if eta.re.abs() < AXIS_TOL {
            let gamma = eta.im;
            if (gamma - PI).abs() < AXIS_TOL {
                AnisotropyClass::Isotropic
            } else if gamma > 0.0 && gamma < PI {
                AnisotropyClass::EasyPlane
            } else {
                return Err(Error::UnsupportedAnisotropy(format!(
                    "easy-plane coupling needs 0 < Im eta < pi, got Im eta = {gamma}"
                )));
            }
        } else {
            return Err(Error::UnsupportedAnisotropy(format!(
                "eta must be purely real or purely imaginary, got {eta}"
            )));
        };
        let q = eta.exp();
        let beta = q + 1.0 / q;
        let delta = eta.cosh();
        let root_of_unity = Self::detect_root_of_unity(eta, class);
        Ok(Self { eta, q, beta, delta, class, root_of_unity })
    }

    pub fn easy_axis(eta: f64) -> Result<Self> {
        Self::new(c(eta, 0.0))
    }

    pub fn easy_plane(gamma: f64) -> Result<Self> {
        Self::new(c(0.0, gamma))
    }

    fn detect_root_of_unity(eta: C64, class: AnisotropyClass) -> Option<RootOfUnity> {
        if class != AnisotropyClass::EasyPlane {
            return None;
        }
        let ratio = eta.im / PI; // l1/l2 in lowest terms
        for l2 in 1..=ROOT_OF_UNITY_MAX_DENOMINATOR {
            let l1 = (ratio * l2 as f64).round() as i64;
            if l1 == 0 {
                continue;
            }
            if (ratio - l1 as f64 / l2 as f64).abs() < 1e-9 && gcd(l1, l2) == 1 {
                let epsilon = if l1 % 2 != 0 { 2 } else { 1 };
                return Some(RootOfUnity { l1, l2, epsilon });
            }
        }
        None
    }

    pub fn is_easy_plane(&self) -> bool {
        self.class == AnisotropyClass::EasyPlane
    }
}

/// Pauli matrices and the 2x2 identity.
pub fn paulis() -> [Array2<C64>; 4] {
    [
        array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
    ]
}

/// Temperley–Lieb generator on two spin-1/2 sites, assembled from the spin
/// representation with the sigma^z-asymmetric term:
///
/// `e = (q + 1/q)/4 - (sx sx + sy sy + (q + 1/q)/2 sz sz)/2 - (q - 1/q)/4 (sz x 1 - 1 x sz)`
///
/// which works out to rows `[[0,0,0,0], [0, 1/q, -1, 0], [0, -1, q, 0], [0,0,0,0]]`.
pub fn tl_generator(params: &AnisotropyParams) -> TwoSiteGate {
    use crate::chain::kron;
    let [id, sx, sy, sz] = paulis();
    let q = params.q;
    let half_beta = (q + 1.0 / q) / 2.0;
    let xx = kron(&sx, &sx);
    let yy = kron(&sy, &sy);
    let zz = kron(&sz, &sz);
    let z1 = kron(&sz, &id);
    let z2 = kron(&id, &sz);
    let eye = kron(&id, &id);
    let mut mat = eye.mapv(|z| z * half_beta / 2.0);
    mat = mat - xx.mapv(|z| z * 0.5) - yy.mapv(|z| z * 0.5) - zz.mapv(|z| z * half_beta / 2.0);
    let asym = (q - 1.0 / q) / 4.0;
    mat = mat - (&z1 - &z2).mapv(|z| z * asym);
    TwoSiteGate { local_dim: 2, mat }
}

/// Max residual of the affine Temperley–Lieb relations over all generators
/// embedded in the periodic chain: `e^2 = beta e`, `e e' e = e` for cyclic
/// neighbours, translation covariance, and commutation at distance >= 2.
pub fn atl_relations_residual(params: &AnisotropyParams, geo: &ChainGeometry) -> Result<f64> {
    if geo.boundary != Boundary::Periodic || geo.sites < 4 {
        return Err(Error::Geometry("affine TL relations need a periodic chain with L >= 4".into()));
    }
    let l = geo.sites as i64;
    let e_gate = tl_generator(params);
    let e_at = |m: i64| embed_two_site(&e_gate, m, m + 1, geo);
    let g = translation_op(geo)?;
    let ginv = g.t().to_owned();
    let beta = params.beta;
    let mut worst: f64 = 0.0;

    for m in 1..=l {
        let em = e_at(m)?;
        worst = worst.max(fro_norm(&(&em.dot(&em) - &em.mapv(|z| z * beta))));

        for pm in [1i64, -1] {
            let en = e_at(m + pm)?;
            let prod = em.dot(&en).dot(&em);
            worst = worst.max(fro_norm(&(&prod - &em)));
        }

        let translated = g.dot(&em).dot(&ginv);
        let next = e_at(m + 1)?;
        worst = worst.max(fro_norm(&(&translated - &next)));

        for k in 1..=l {
            // distance on the circle between gate supports {m, m+1} and {k, k+1}
            let d = (m - k).rem_euclid(l).min((k - m).rem_euclid(l));
            if d >= 2 && d <= l - 2 {
                let ek = e_at(k)?;
                worst = worst.max(fro_norm(&commutator(&em, &ek)));
            }
        }
    }
    Ok(worst)
}

/// `sinh` shorthand for complex arguments.
fn csinh(z: C64) -> C64 {
    z.sinh()
}

/// Minimum `|sinh(u + eta)|` treated as pole-free by random sampling.
const POLE_GUARD: f64 = 1e-3;

/// The trigonometric 6-vertex R matrix as a regular, difference-form spec
/// with crossing data:
///
/// `Rcheck(u) = 1 - sinh(u)/sinh(u + eta) e`, `R(u) = Rcheck(u) P`,
/// crossing operator `v = [[0, exp(-eta/2)], [exp(eta/2), 0]]`.
pub fn six_vertex_spec(params: &AnisotropyParams) -> Result<RMatrixSpec> {
    if params.class == AnisotropyClass::Isotropic {
        return Err(Error::UnsupportedAnisotropy(
            "the trigonometric gate degenerates at |Delta| = 1; use iso_spec".into(),
        ));
    }
    let eta = params.eta;
    let e_mat = tl_generator(params).mat;
    let p = crate::chain::permutation_op(2);
    let eval = Arc::new(move |u: C64, v: C64| -> Result<TwoSiteGate> {
        let w = u - v;
        let denom = csinh(w + eta);
        if denom.norm() < 1e-14 {
            return Err(Error::EvaluationPole { u, v });
        }
        let s = csinh(w) / denom;
        let mat = &identity_op(4) - &e_mat.mapv(|z| z * s);
        TwoSiteGate::new(2, mat.dot(&p.mat))
    });
    // Antidiagonal crossing operator with a sigma^y-type sign; the sign is
    // required for the conjugation identity to hold and drops out of
    // w = v^t v = diag(e^eta, e^-eta).
    let v_op = array![
        [c(0., 0.), (-eta / 2.0).exp()],
        [-(eta / 2.0).exp(), c(0., 0.)]
    ];
    let spec = RMatrixSpec::new(2, true, true, Some(CrossingData { eta, v_op }), eval)
        .with_pole_predicate(Arc::new(move |u: C64, v: C64| {
            csinh(u - v + eta).norm() < POLE_GUARD
        }));
    Ok(spec)
}

/// Exponential Floquet gate `exp(-i T e) = 1 + (exp(-i beta T) - 1)/beta e`;
/// equals `Rcheck(-alpha)` with `alpha = alpha_of_t(params, T, 0)`.
pub fn exp_gate(params: &AnisotropyParams, t: f64) -> Result<TwoSiteGate> {
    if params.beta.norm() < 1e-12 {
        return Err(Error::UnsupportedAnisotropy(
            "beta = 0 (eta = i pi/2) is outside the exponential-gate construction".into(),
        ));
    }
    let e_mat = tl_generator(params).mat;
    let beta = params.beta;
    let coeff = ((c(0.0, -t) * beta).exp() - 1.0) / beta;
    let mat = &identity_op(4) + &e_mat.mapv(|z| z * coeff);
    TwoSiteGate::new(2, mat)
}

/// Gate argument as a function of the Floquet half-period:
///
/// `alpha = -1/2 log[ cosh(eta + i T cosh eta) / cosh(eta - i T cosh eta) ] + i m pi`
///
/// with the principal branch of the logarithm and branch index `m`.
pub fn alpha_of_t(params: &AnisotropyParams, t: f64, branch_m: i32) -> Result<C64> {
    if params.class == AnisotropyClass::Isotropic {
        return Err(Error::UnsupportedAnisotropy("use iso_alpha_of_t in the isotropic limit".into()));
    }
    if params.beta.norm() < 1e-12 {
        return Err(Error::UnsupportedAnisotropy(
            "beta = 0 (eta = i pi/2) is outside the alpha(T) map".into(),
        ));
    }
    let eta = params.eta;
    let it_cosh = c(0.0, t) * eta.cosh();
    let num = (eta + it_cosh).cosh();
    let den = (eta - it_cosh).cosh();
    if num.norm() < 1e-14 || den.norm() < 1e-14 {
        return Err(Error::BranchPoint { t });
    }
    let ratio = num / den;
    Ok(ratio.ln() * c(-0.5, 0.0) + c(0.0, branch_m as f64 * PI))
}

/// Reduce `Im alpha` into `(-pi/2, pi/2]`; the gate is invariant under
/// `alpha -> alpha + i pi`.
pub fn alpha_mod_ipi(alpha: C64) -> C64 {
    let mut im = alpha.im;
    while im > PI / 2.0 {
        im -= PI;
    }
    while im <= -PI / 2.0 {
        im += PI;
    }
    c(alpha.re, im)
}

/// The isotropic (rational) gate `Rcheck(u) = 1 - u/(u + i) e` with the
/// symmetric-difference generator; regular and of difference form.
pub fn iso_spec() -> RMatrixSpec {
    let e_mat = iso_generator();
    let p = crate::chain::permutation_op(2);
    RMatrixSpec::new(
        2,
        true,
        true,
        None,
        Arc::new(move |u: C64, v: C64| -> Result<TwoSiteGate> {
            let w = u - v;
            let denom = w + c(0.0, 1.0);
            if denom.norm() < 1e-14 {
                return Err(Error::EvaluationPole { u, v });
            }
            let s = w / denom;
            let mat = &identity_op(4) - &e_mat.mapv(|z| z * s);
            TwoSiteGate::new(2, mat.dot(&p.mat))
        }),
    )
    .with_pole_predicate(Arc::new(|u: C64, v: C64| (u - v + c(0.0, 1.0)).norm() < POLE_GUARD))
}

/// Isotropic Temperley–Lieb generator (`beta = 2`).
pub fn iso_generator() -> Array2<C64> {
    array![
        [c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)],
        [c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)],
        [c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)],
        [c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]
    ]
}

/// Isotropic gate argument: `alpha = i (exp(2iT) - 1)/(exp(2iT) + 1)`.
pub fn iso_alpha_of_t(t: f64) -> Result<C64> {
    let z = c(0.0, 2.0 * t).exp();
    let den = z + 1.0;
    if den.norm() < 1e-12 {
        return Err(Error::BranchPoint { t });
    }
    Ok(c(0.0, 1.0) * (z - 1.0) / den)
}
