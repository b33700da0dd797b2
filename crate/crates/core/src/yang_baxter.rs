//! R-matrix abstraction and residual checks for every Yang–Baxter-type
//! identity the circuit constructions rely on.
//!
//! All residuals are Frobenius norms; proportionality checks ("A is
//! proportional to B") minimize `|A - c B|` over a complex scalar in closed
//! form, `c = <B, A> / <B, B>`.

use std::sync::Arc;

use ndarray::Array2;
use rand::Rng;

use crate::chain::{
    embed_two_site, fro_norm, identity_op, kron, permutation_op, random_complex, rng_from_seed,
    Boundary, ChainGeometry, TwoSiteGate,
};
use crate::{C64, Error, Result};

pub type GateFn = dyn Fn(C64, C64) -> Result<TwoSiteGate> + Send + Sync;
pub type PolePredicate = dyn Fn(C64, C64) -> bool + Send + Sync;

/// Crossing-symmetry data: the constant one-site operator `v` and the
/// crossing parameter entering `R(u) ~ v R^(t_b)(-u - eta) v^-1`.
#[derive(Clone)]
pub struct CrossingData {
    pub eta: C64,
    pub v_op: Array2<C64>,
}

impl CrossingData {
    /// `w = v^t v`.
    pub fn w_op(&self) -> Array2<C64> {
        self.v_op.t().dot(&self.v_op)
    }
}

/// A two-site solution of the Yang–Baxter equation as a callable of two
/// spectral parameters, with capability flags.
#[derive(Clone)]
pub struct RMatrixSpec {
    pub local_dim: usize,
    pub difference_form: bool,
    pub regular: bool,
    pub crossing: Option<CrossingData>,
    eval: Arc<GateFn>,
    near_pole: Option<Arc<PolePredicate>>,
}

impl RMatrixSpec {
    pub fn new(
        local_dim: usize,
        difference_form: bool,
        regular: bool,
        crossing: Option<CrossingData>,
        eval: Arc<GateFn>,
    ) -> Self {
        Self { local_dim, difference_form, regular, crossing, eval, near_pole: None }
    }

    /// Attach a predicate marking spectral points too close to a pole for
    /// random sampling to use.
    pub fn with_pole_predicate(mut self, pred: Arc<PolePredicate>) -> Self {
        self.near_pole = Some(pred);
        self
    }

    /// Evaluate `R(u, v)`; non-finite entries abort with the offending point.
    pub fn evaluate(&self, u: C64, v: C64) -> Result<TwoSiteGate> {
        let gate = (self.eval)(u, v)?;
        if gate.local_dim != self.local_dim {
            return Err(Error::DimensionMismatch(format!(
                "spec promised N = {}, evaluation produced N = {}",
                self.local_dim, gate.local_dim
            )));
        }
        if !gate.is_finite() {
            return Err(Error::EvaluationPole { u, v });
        }
        Ok(gate)
    }

    /// `Rcheck(u, v) = R(u, v) P`: the brick-wall quantum gate.
    pub fn r_check(&self, u: C64, v: C64) -> Result<TwoSiteGate> {
        let r = self.evaluate(u, v)?;
        let p = permutation_op(self.local_dim);
        TwoSiteGate::new(self.local_dim, r.mat.dot(&p.mat))
    }

    pub fn is_near_pole(&self, u: C64, v: C64) -> bool {
        match &self.near_pole {
            Some(pred) => pred(u, v),
            None => self.evaluate(u, v).is_err(),
        }
    }

    /// Draw one spectral point in the square of the given radius, rejecting
    /// the neighbourhood of poles (against the origin and against `others`).
    pub fn sample_point(&self, rng: &mut impl Rng, radius: f64, others: &[C64]) -> C64 {
        for _ in 0..1000 {
            let u = random_complex(rng, radius);
            let clear = !self.is_near_pole(u, C64::new(0.0, 0.0))
                && others.iter().all(|&v| !self.is_near_pole(u, v) && !self.is_near_pole(v, u));
            if clear {
                return u;
            }
        }
        C64::new(radius * 0.5, radius * 0.25) // deterministic fallback, off the pole set
    }

    /// Check the declared capability flags on sampled points.
    pub fn validate(&self, seed: u64, samples: usize, tol: f64) -> Result<()> {
        let mut rng = rng_from_seed(seed);
        if self.regular {
            let zero = C64::new(0.0, 0.0);
            let r00 = self.evaluate(zero, zero)?;
            let p = permutation_op(self.local_dim);
            let resid = fro_norm(&(&r00.mat - &p.mat));
            if resid > tol {
                return Err(Error::InvalidInput(format!(
                    "spec declared regular but |R(0,0) - P| = {resid:.3e}"
                )));
            }
        }
        if self.difference_form {
            for _ in 0..samples {
                let u = self.sample_point(&mut rng, 1.0, &[]);
                let v = self.sample_point(&mut rng, 1.0, &[u]);
                let s = random_complex(&mut rng, 1.0);
                let direct = self.evaluate(u, v)?;
                let shifted = self.evaluate(u - v, C64::new(0.0, 0.0))?;
                let resid = fro_norm(&(&direct.mat - &shifted.mat));
                if resid > tol {
                    return Err(Error::InvalidInput(format!(
                        "spec declared difference form but |R(u,v) - R(u-v,0)| = {resid:.3e}"
                    )));
                }
                if let (Ok(a), Ok(b)) = (self.evaluate(u, v), self.evaluate(u + s, v + s)) {
                    let resid = fro_norm(&(&a.mat - &b.mat));
                    if resid > tol {
                        return Err(Error::InvalidInput(format!(
                            "shift invariance violated: |R(u,v) - R(u+s,v+s)| = {resid:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Best-scalar proportionality residual `min_c |A - c B| / |A|`.
pub fn best_scalar_residual(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let bb: C64 = b.iter().map(|z| z.conj() * z).sum();
    let ba: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let na = fro_norm(a).max(f64::MIN_POSITIVE);
    if bb.norm() < f64::MIN_POSITIVE {
        return 1.0;
    }
    let c = ba / bb;
    let diff = a - &b.mapv(|z| z * c);
    fro_norm(&diff) / na
}

/// The scalar realizing the best proportionality fit `A ~ c B`.
pub fn best_scalar(a: &Array2<C64>, b: &Array2<C64>) -> C64 {
    let bb: C64 = b.iter().map(|z| z.conj() * z).sum();
    let ba: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    ba / bb
}

/// Residuals of the Yang–Baxter identities evaluated on a three-site space.
#[derive(Debug, Clone, Copy)]
pub struct YbeResidual {
    /// Vertex form `R12 R13 R23 = R23 R13 R12`.
    pub vertex: f64,
    /// Braid form on adjacent embeddings.
    pub braid: f64,
    /// Difference-form braid identity, when the spec is of difference form.
    pub braid_difference: Option<f64>,
}

impl YbeResidual {
    pub fn max(&self) -> f64 {
        self.vertex.max(self.braid).max(self.braid_difference.unwrap_or(0.0))
    }
}

/// Frobenius residual of the Yang–Baxter equation at the spectral triple
/// `(u, v, w)`, computed by direct matrix products on a three-site space.
pub fn ybe_residual(spec: &RMatrixSpec, u: C64, v: C64, w: C64) -> Result<YbeResidual> {
    let geo = ChainGeometry::with_budget(3, spec.local_dim, 1, Boundary::Periodic, 16.0)?;
    let emb = |gate: &TwoSiteGate, i: i64, j: i64| embed_two_site(gate, i, j, &geo);

    let r12 = emb(&spec.evaluate(u, v)?, 1, 2)?;
    let r13 = emb(&spec.evaluate(u, w)?, 1, 3)?;
    let r23 = emb(&spec.evaluate(v, w)?, 2, 3)?;
    let lhs = r12.dot(&r13).dot(&r23);
    let rhs = r23.dot(&r13).dot(&r12);
    let vertex = fro_norm(&(&lhs - &rhs));

    // braid form: Rc_{12}(u,v) Rc_{23}(u,w) Rc_{12}(v,w) = Rc_{23}(v,w) Rc_{12}(u,w) Rc_{23}(u,v)
    let c12_uv = emb(&spec.r_check(u, v)?, 1, 2)?;
    let c23_uw = emb(&spec.r_check(u, w)?, 2, 3)?;
    let c12_vw = emb(&spec.r_check(v, w)?, 1, 2)?;
    let c23_vw = emb(&spec.r_check(v, w)?, 2, 3)?;
    let c12_uw = emb(&spec.r_check(u, w)?, 1, 2)?;
    let c23_uv = emb(&spec.r_check(u, v)?, 2, 3)?;
    let braid = fro_norm(&(&c12_uv.dot(&c23_uw).dot(&c12_vw) - &c23_vw.dot(&c12_uw).dot(&c23_uv)));

    // difference-form braid: Rc12(u-v) Rc23(u) Rc12(v) = Rc23(v) Rc12(u) Rc23(u-v)
    let braid_difference = if spec.difference_form {
        let zero = C64::new(0.0, 0.0);
        let a = emb(&spec.r_check(u - v, zero)?, 1, 2)?;
        let b = emb(&spec.r_check(u, zero)?, 2, 3)?;
        let c = emb(&spec.r_check(v, zero)?, 1, 2)?;
        let d = emb(&spec.r_check(v, zero)?, 2, 3)?;
        let e = emb(&spec.r_check(u, zero)?, 1, 2)?;
        let f = emb(&spec.r_check(u - v, zero)?, 2, 3)?;
        Some(fro_norm(&(&a.dot(&b).dot(&c) - &d.dot(&e).dot(&f))))
    } else {
        None
    };

    Ok(YbeResidual { vertex, braid, braid_difference })
}

/// Raw and best-scalar residuals of the inversion symmetry
/// `R(u) R^t(-u) = 1` (transpose in both factors).
#[derive(Debug, Clone, Copy)]
pub struct InversionResidual {
    pub raw: f64,
    pub best_scalar: f64,
}

pub fn inversion_residual(spec: &RMatrixSpec, u: C64) -> Result<InversionResidual> {
    if !spec.difference_form {
        return Err(Error::InvalidInput("inversion symmetry is stated for difference-form specs".into()));
    }
    let zero = C64::new(0.0, 0.0);
    let r = spec.evaluate(u, zero)?;
    let rt = spec.evaluate(-u, zero)?.transpose_both();
    let x = r.mat.dot(&rt.mat);
    let eye = identity_op(spec.local_dim * spec.local_dim);
    let raw = fro_norm(&(&x - &eye));
    let best = best_scalar_residual(&x, &eye);
    Ok(InversionResidual { raw, best_scalar: best })
}

/// Best-scalar residuals of the two crossing-symmetry forms.
#[derive(Debug, Clone, Copy)]
pub struct CrossingResidual {
    /// `R(u) ~ v R^(t_b)(-u - eta) v^-1`.
    pub conjugated: f64,
    /// `R^(t_a)(u) w R^(t_b)(-u - 2 eta) w^-1 ~ 1`.
    pub w_form: f64,
}

pub fn crossing_residual(spec: &RMatrixSpec, u: C64) -> Result<CrossingResidual> {
    let crossing = spec.crossing.as_ref().ok_or(Error::MissingCrossingData)?;
    let eta = crossing.eta;
    let zero = C64::new(0.0, 0.0);
    let n = spec.local_dim;

    let a = spec.evaluate(u, zero)?;
    let b = spec.evaluate(-u - eta, zero)?.transpose_second().conjugate_first(&crossing.v_op)?;
    let conjugated = best_scalar_residual(&a.mat, &b.mat);

    let w = crossing.w_op();
    let winv = {
        use ndarray_linalg::Inverse;
        w.inv().map_err(|e| Error::Singular(format!("crossing weight w: {e}")))?
    };
    let rta = spec.evaluate(u, zero)?.transpose_first();
    let rtb = spec.evaluate(-u - eta - eta, zero)?.transpose_second();
    let eye_n = Array2::<C64>::eye(n);
    let chain = rta
        .mat
        .dot(&kron(&w, &eye_n))
        .dot(&rtb.mat)
        .dot(&kron(&winv, &eye_n));
    let w_form = best_scalar_residual(&chain, &identity_op(n * n));

    Ok(CrossingResidual { conjugated, w_form })
}

/// Frobenius residuals of the two boundary Yang–Baxter equations, evaluated
/// as two-site matrix identities.
pub fn boundary_ybe_residual(
    spec: &RMatrixSpec,
    k_minus: &dyn Fn(C64) -> Array2<C64>,
    k_plus: &dyn Fn(C64) -> Array2<C64>,
    u: C64,
    v: C64,
) -> Result<(f64, f64)> {
    if !(spec.difference_form && spec.regular) {
        return Err(Error::InvalidInput(
            "boundary Yang-Baxter equations require a regular difference-form spec".into(),
        ));
    }
    let crossing = spec.crossing.as_ref().ok_or(Error::MissingCrossingData)?;
    let eta = crossing.eta;
    let n = spec.local_dim;
    let zero = C64::new(0.0, 0.0);
    let eye = Array2::<C64>::eye(n);
    let p = permutation_op(n);

    let r = |x: C64| -> Result<Array2<C64>> { Ok(spec.evaluate(x, zero)?.mat) };
    // R with the two tensor factors exchanged
    let r_swapped = |x: C64| -> Result<Array2<C64>> { Ok(p.mat.dot(&r(x)?).dot(&p.mat)) };
    let on_first = |m: &Array2<C64>| kron(m, &eye);
    let on_second = |m: &Array2<C64>| kron(&eye, m);

    // reflection equation for K_-
    let km_u = on_first(&k_minus(u));
    let km_v = on_second(&k_minus(v));
    let lhs = r(u - v)?.dot(&km_u).dot(&r_swapped(u + v)?).dot(&km_v);
    let rhs = km_v.dot(&r(u + v)?).dot(&km_u).dot(&r_swapped(u - v)?);
    let res_minus = fro_norm(&(&lhs - &rhs));

    // dual reflection equation for K_+
    let w = crossing.w_op();
    let winv = {
        use ndarray_linalg::Inverse;
        w.inv().map_err(|e| Error::Singular(format!("crossing weight w: {e}")))?
    };
    let kp_u = on_first(&k_plus(u).t().to_owned());
    let kp_v = on_second(&k_plus(v).t().to_owned());
    let two_eta = eta + eta;
    let rt = |x: C64| -> Result<Array2<C64>> { Ok(spec.evaluate(x, zero)?.transpose_both().mat) };
    let lhs = r(-u + v)?
        .dot(&kp_u)
        .dot(&on_first(&winv))
        .dot(&rt(-u - v - two_eta)?)
        .dot(&on_first(&w))
        .dot(&kp_v);
    let rhs = kp_v
        .dot(&on_first(&w))
        .dot(&r(-u - v - two_eta)?)
        .dot(&on_first(&winv))
        .dot(&kp_u)
        .dot(&rt(-u + v)?);
    let res_plus = fro_norm(&(&lhs - &rhs));

    Ok((res_minus, res_plus))
}

/// The constant spec `R = P`: solves the Yang–Baxter equation, is regular and
/// of difference form. Useful as a control in tests.
pub fn permutation_spec(local_dim: usize) -> RMatrixSpec {
    RMatrixSpec::new(
        local_dim,
        true,
        true,
        None,
        Arc::new(move |_u, _v| Ok(permutation_op(local_dim))),
    )
}
