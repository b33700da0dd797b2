//! Spectral analysis of the Floquet evolution operator and Hamiltonian:
//! regime classification, unimodularity, the anti-unitary (GPT) symmetry and
//! its dynamical breaking, the infinite-argument limit operator, and the
//! root-of-unity census of the spectrum at phase transitions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::chain::{
    conj_entrywise, eig, embed_two_site, fro_norm, identity_op, permutation_op, translation_op,
    Boundary, ChainGeometry, ChainOp,
};
use crate::floquet::{FloquetOperatorBundle, FloquetParams};
use crate::six_vertex::{tl_generator, AnisotropyClass, AnisotropyParams};
use crate::{C64, Error, Result};

/// Phase label of a Floquet point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralRegime {
    /// Symmetric phase: unimodular evolution spectrum, real Hamiltonian
    /// spectrum.
    RegimeI,
    /// Broken phase: complex-conjugate-paired Hamiltonian spectrum.
    RegimeII,
    /// Within tolerance of a phase boundary.
    Transition,
    EasyAxis,
    Isotropic,
}

impl std::fmt::Display for SpectralRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpectralRegime::RegimeI => "I",
            SpectralRegime::RegimeII => "II",
            SpectralRegime::Transition => "transition",
            SpectralRegime::EasyAxis => "easy_axis",
            SpectralRegime::Isotropic => "isotropic",
        };
        write!(f, "{s}")
    }
}

/// Tolerance around a phase boundary inside which a point is reported as
/// `Transition`.
pub const TRANSITION_TOL: f64 = 1e-9;

/// Phase boundaries `(t_lower, t_upper, period)` of the easy-plane half-period
/// axis: the symmetric phase is `[0, t_lower] u [t_upper, period)`.
pub fn regime_boundaries(params: &AnisotropyParams) -> Result<(f64, f64, f64)> {
    if params.class != AnisotropyClass::EasyPlane {
        return Err(Error::UnsupportedAnisotropy("phase boundaries exist in the easy-plane class".into()));
    }
    let gamma = params.eta.im;
    let cos_g = gamma.cos();
    if cos_g.abs() < 1e-12 {
        return Err(Error::UnsupportedAnisotropy(
            "gamma = pi/2 (beta = 0) is outside the regime classification".into(),
        ));
    }
    // both branches are the same complex expressions (pi -+ 2 i eta)/(2 cosh eta)
    // evaluated on eta = i gamma; for gamma > pi/2 they come out positive after
    // reduction by the (negative) period
    if gamma < PI / 2.0 {
        Ok(((PI - 2.0 * gamma) / (2.0 * cos_g), (PI + 2.0 * gamma) / (2.0 * cos_g), PI / cos_g))
    } else {
        let c = cos_g.abs();
        Ok(((2.0 * gamma - PI) / (2.0 * c), (3.0 * PI - 2.0 * gamma) / (2.0 * c), PI / c))
    }
}

/// Classify the half-period into the symmetric phase (I), the broken phase
/// (II), or a transition point.
pub fn classify_regime(params: &AnisotropyParams, half_period: f64) -> Result<SpectralRegime> {
    match params.class {
        AnisotropyClass::EasyAxis => return Ok(SpectralRegime::EasyAxis),
        AnisotropyClass::Isotropic => return Ok(SpectralRegime::Isotropic),
        AnisotropyClass::EasyPlane => {}
    }
    let (t1, t2, period) = regime_boundaries(params)?;
    let t = half_period.rem_euclid(period);
    if (t - t1).abs() < TRANSITION_TOL || (t - t2).abs() < TRANSITION_TOL {
        return Ok(SpectralRegime::Transition);
    }
    if t > t1 && t < t2 {
        Ok(SpectralRegime::RegimeII)
    } else {
        Ok(SpectralRegime::RegimeI)
    }
}

/// One matched conjugate pair in the Hamiltonian spectrum.
#[derive(Debug, Clone, Copy)]
pub struct ConjugatePair {
    pub i: usize,
    pub j: usize,
    /// `|E_i - conj(E_j)|`.
    pub residual: f64,
}

/// Spectral summary of one Floquet point.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub uf_eigenvalues: Vec<C64>,
    /// `(i / 2T) Log` of the matching evolution eigenvalue, principal branch.
    pub hf_eigenvalues: Vec<C64>,
    pub max_unit_circle_deviation: f64,
    pub regime: SpectralRegime,
    pub conjugation_pairing: Vec<ConjugatePair>,
    pub worst_pairing_residual: f64,
    pub max_hf_imag: f64,
    pub jordan_risk: bool,
}

/// Greedy nearest-neighbour matching of the spectrum onto its conjugate,
/// ties broken by index order.
pub fn conjugate_pairing(values: &[C64]) -> Vec<ConjugatePair> {
    let n = values.len();
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut best = None;
        for j in 0..n {
            if used[j] && j != i {
                continue;
            }
            if j == i || !used[j] {
                let d = (values[i] - values[j].conj()).norm();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        let (j, residual) = best.expect("nonempty spectrum");
        used[i] = true;
        used[j] = true;
        pairs.push(ConjugatePair { i, j, residual });
    }
    pairs
}

/// Diagonalize a built Floquet operator and classify its spectrum.
pub fn analyze(bundle: &FloquetOperatorBundle, params: &FloquetParams) -> Result<SpectrumReport> {
    let decomp = eig(&bundle.u_f)?;
    let t = params.half_period;
    let hf: Vec<C64> = decomp
        .values
        .iter()
        .map(|mu| C64::new(mu.norm().ln(), mu.arg()) * C64::new(0.0, 1.0) / (2.0 * t))
        .collect();
    let max_dev = decomp
        .values
        .iter()
        .map(|mu| (mu.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let pairs = conjugate_pairing(&hf);
    let worst = pairs.iter().map(|p| p.residual).fold(0.0f64, f64::max);
    let max_hf_imag = hf.iter().map(|e| e.im.abs()).fold(0.0f64, f64::max);
    Ok(SpectrumReport {
        uf_eigenvalues: decomp.values.clone(),
        hf_eigenvalues: hf,
        max_unit_circle_deviation: max_dev,
        regime: classify_regime(&params.aniso, t)?,
        conjugation_pairing: pairs,
        worst_pairing_residual: worst,
        max_hf_imag,
        jordan_risk: decomp.jordan_risk(),
    })
}

/// Parity and translation conjugators entering the anti-unitary symmetry.
/// The time-reversal factor is entrywise complex conjugation in the
/// computational basis and is applied functionally, never stored.
#[derive(Debug, Clone)]
pub struct GptOperators {
    pub parity: ChainOp,
    pub translation: ChainOp,
}

pub fn gpt_operators(geo: &ChainGeometry) -> Result<GptOperators> {
    if geo.boundary != Boundary::Periodic || geo.sites % 2 != 0 {
        return Err(Error::Geometry("the GPT conjugators need an even periodic chain".into()));
    }
    let p_gate = permutation_op(geo.local_dim);
    let mut parity = identity_op(geo.dim());
    for m in 1..=(geo.sites / 2) {
        parity = parity.dot(&embed_two_site(&p_gate, m as i64, (geo.sites - m + 1) as i64, geo)?);
    }
    Ok(GptOperators { parity, translation: translation_op(geo)? })
}

/// Residual of the anti-unitary symmetry of the evolution operator:
/// `| G P conj(U_F) P G^-1 U_F - 1 |`.
pub fn gpt_residual(u_f: &ChainOp, geo: &ChainGeometry) -> Result<f64> {
    let ops = gpt_operators(geo)?;
    let g = &ops.translation;
    let p = &ops.parity;
    let sandwich = g.dot(p).dot(&conj_entrywise(u_f)).dot(p).dot(&g.t());
    let dim = geo.dim();
    Ok(fro_norm(&(&sandwich.dot(u_f) - &identity_op(dim))))
}

/// The evolution operator at infinite gate argument:
/// `prod_m (1 - e^(s eta) e_{2m-1,2m}) prod_m (1 - e^(s eta) e_{2m,2m+1})`
/// for `alpha -> s * infinity`, `s = +-1`.
pub fn limit_operator(params: &AnisotropyParams, sign: i8, geo: &ChainGeometry) -> Result<ChainOp> {
    if geo.boundary != Boundary::Periodic || geo.period != 2 {
        return Err(Error::Geometry("the limit operator is the depth-2 periodic brick wall".into()));
    }
    let coeff = -(params.eta * f64::from(sign)).exp();
    let e_gate = tl_generator(params);
    let gate =
        crate::chain::TwoSiteGate::new(2, &identity_op(4) + &e_gate.mat.mapv(|z| z * coeff))?;
    let mut u = identity_op(geo.dim());
    for m in 1..=(geo.sites / 2) as i64 {
        u = u.dot(&embed_two_site(&gate, 2 * m - 1, 2 * m, geo)?);
    }
    for m in 1..=(geo.sites / 2) as i64 {
        u = u.dot(&embed_two_site(&gate, 2 * m, 2 * m + 1, geo)?);
    }
    Ok(u)
}

/// Census of a spectrum against the conjectured root lattice
/// `exp(2 pi i n / (l2 L / 2))`.
///
/// At a phase transition the evolution operator is defective, so individual
/// computed eigenvalues scatter by roughly the square root of machine epsilon
/// around the true (lattice) values while the per-root cluster means cancel
/// the scatter; the pass verdict therefore tests cluster means against the
/// tolerance and individual values only against the assignment cell.
#[derive(Debug, Clone)]
pub struct RootCensus {
    /// Number of conjectured roots, `l2 * L / 2`.
    pub lattice_size: usize,
    /// Nearest lattice index and distance for every eigenvalue.
    pub assignments: Vec<(usize, f64)>,
    /// Occupied lattice indices with multiplicities.
    pub occupancy: BTreeMap<usize, usize>,
    /// Worst individual eigenvalue distance to its assigned root.
    pub max_distance: f64,
    /// Worst distance between a cluster mean and its root.
    pub max_cluster_mean_distance: f64,
    pub pass: bool,
    /// Shifts `s` for which the occupancy multiset is invariant under the
    /// lattice reflection `n -> s - n`; the spectrum is mirror symmetric
    /// about the axis through angle `pi s / lattice_size` for such `s`.
    pub mirror_axes: Vec<usize>,
    /// True when at least one mirror axis exists.
    pub mirror_symmetric: bool,
}

impl RootCensus {
    pub fn all_roots_occupied(&self) -> bool {
        self.occupancy.len() == self.lattice_size
    }
}

pub fn root_of_unity_check(eigs: &[C64], l2: i64, sites: usize, tol: f64) -> RootCensus {
    let lattice_size = (l2 as usize) * sites / 2;
    let mut assignments = Vec::with_capacity(eigs.len());
    let mut occupancy: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cluster_sums: BTreeMap<usize, C64> = BTreeMap::new();
    let mut max_distance = 0.0f64;
    for mu in eigs {
        let (mut best_n, mut best_d) = (0usize, f64::INFINITY);
        for n in 0..lattice_size {
            let root = C64::from_polar(1.0, 2.0 * PI * n as f64 / lattice_size as f64);
            let d = (mu - root).norm();
            if d < best_d {
                best_d = d;
                best_n = n;
            }
        }
        assignments.push((best_n, best_d));
        max_distance = max_distance.max(best_d);
        *occupancy.entry(best_n).or_insert(0) += 1;
        *cluster_sums.entry(best_n).or_insert(C64::new(0.0, 0.0)) += mu;
    }
    let mut max_cluster_mean_distance = 0.0f64;
    for (&n, &mult) in &occupancy {
        let root = C64::from_polar(1.0, 2.0 * PI * n as f64 / lattice_size as f64);
        let mean = cluster_sums[&n] / mult as f64;
        max_cluster_mean_distance = max_cluster_mean_distance.max((mean - root).norm());
    }
    // half the lattice spacing: assignments beyond this are ambiguous
    let half_cell = (PI / lattice_size as f64).sin();
    let pass = max_cluster_mean_distance < tol && max_distance < half_cell;
    let mirror_axes: Vec<usize> = (0..lattice_size)
        .filter(|&s| {
            occupancy.iter().all(|(&n, &mult)| {
                let mirror = (s + lattice_size - n % lattice_size) % lattice_size;
                occupancy.get(&mirror).copied() == Some(mult)
            })
        })
        .collect();
    let mirror_symmetric = !mirror_axes.is_empty();
    RootCensus {
        lattice_size,
        assignments,
        occupancy,
        max_distance,
        max_cluster_mean_distance,
        pass,
        mirror_axes,
        mirror_symmetric,
    }
}

/// Robust occupancy of the root lattice through the smallest singular value
/// of `U - z_n`: immune to the eigenvalue scatter of defective matrices.
pub fn occupied_roots_sigma_min(op: &ChainOp, l2: i64, sites: usize, threshold: f64) -> Result<Vec<usize>> {
    use ndarray_linalg::SVD;
    let lattice_size = (l2 as usize) * sites / 2;
    let dim = op.nrows();
    let mut occupied = Vec::new();
    for n in 0..lattice_size {
        let z = C64::from_polar(1.0, 2.0 * PI * n as f64 / lattice_size as f64);
        let shifted = op - &identity_op(dim).mapv(|x| x * z);
        let (_, sv, _) = shifted
            .svd(false, false)
            .map_err(|e| Error::EigenSolver(format!("singular values: {e}")))?;
        if sv[sv.len() - 1] < threshold {
            occupied.push(n);
        }
    }
    Ok(occupied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::commutator;
    use crate::floquet::{floquet_operator, FloquetParams};
    use crate::six_vertex::six_vertex_spec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn staggered_bundle(gamma_or_eta: C64, t: f64, l: usize) -> (FloquetOperatorBundle, FloquetParams) {
        let aniso = AnisotropyParams::new(gamma_or_eta).unwrap();
        let fp = FloquetParams::staggered(aniso, t).unwrap();
        let spec = six_vertex_spec(&fp.aniso).unwrap();
        let geo = ChainGeometry::periodic_qubits(l, 2).unwrap();
        (floquet_operator(&spec, &fp.inhoms, &geo).unwrap(), fp)
    }

    #[test]
    fn regime_classification_examples() {
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let cos_half = 0.5f64.cos();
        let t1 = (PI - 1.0) / (2.0 * cos_half);
        let t2 = (PI + 1.0) / (2.0 * cos_half);
        assert_eq!(classify_regime(&params, 0.1).unwrap(), SpectralRegime::RegimeI);
        assert_eq!(classify_regime(&params, t1).unwrap(), SpectralRegime::Transition);
        assert_eq!(
            classify_regime(&params, 0.5 * (t1 + t2)).unwrap(),
            SpectralRegime::RegimeII
        );
        // wide-gamma branch: boundaries positive and ordered
        let wide = AnisotropyParams::easy_plane(2.0 * PI / 3.0).unwrap();
        let (b1, b2, period) = regime_boundaries(&wide).unwrap();
        assert!(b1 > 0.0 && b1 < b2 && b2 < period);
        assert!(classify_regime(&wide, 0.5 * (b1 + b2)).unwrap() == SpectralRegime::RegimeII);
    }

    #[test]
    fn regime_boundary_matches_alpha_jump() {
        // the classifier boundary coincides with the Im(alpha) jump
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let (t1, _, _) = regime_boundaries(&params).unwrap();
        // a branch-point error marks the jump itself: count it as "not real"
        let is_real = |t: f64| {
            crate::six_vertex::alpha_of_t(&params, t, 0)
                .map(|a| a.im.abs() < 1e-6)
                .unwrap_or(false)
        };
        let (mut lo, mut hi) = (t1 - 0.05, t1 + 0.05);
        assert!(is_real(lo) && !is_real(hi));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if is_real(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((0.5 * (lo + hi) - t1).abs() < 1e-9, "jump at {} vs boundary {t1}", 0.5 * (lo + hi));
    }

    #[test]
    fn symmetric_phase_spectrum_unimodular_and_real() {
        let (bundle, fp) = staggered_bundle(c(0.0, 0.5), 0.3, 6);
        let report = analyze(&bundle, &fp).unwrap();
        assert_eq!(report.regime, SpectralRegime::RegimeI);
        assert!(report.max_unit_circle_deviation < 1e-8, "dev {}", report.max_unit_circle_deviation);
        assert!(report.max_hf_imag < 1e-8, "max Im E {}", report.max_hf_imag);
    }

    #[test]
    fn broken_phase_spectrum_leaves_circle_in_pairs() {
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let (t1, t2, _) = regime_boundaries(&params).unwrap();
        let (bundle, fp) = staggered_bundle(c(0.0, 0.5), 0.5 * (t1 + t2), 6);
        let report = analyze(&bundle, &fp).unwrap();
        assert_eq!(report.regime, SpectralRegime::RegimeII);
        assert!(report.max_unit_circle_deviation > 1e-3, "dev {}", report.max_unit_circle_deviation);
        assert!(report.worst_pairing_residual < 1e-8, "pairing {}", report.worst_pairing_residual);
        assert!(report.max_hf_imag > 1e-3);
    }

    #[test]
    fn easy_axis_spectrum_real() {
        let (bundle, fp) = staggered_bundle(c(0.7, 0.0), 0.4, 4);
        let report = analyze(&bundle, &fp).unwrap();
        assert_eq!(report.regime, SpectralRegime::EasyAxis);
        assert!(report.max_unit_circle_deviation < 1e-9);
        assert!(report.max_hf_imag < 1e-9);
    }

    #[test]
    fn spectrum_invariant_under_inverse_conjugate() {
        // mu -> 1/conj(mu) maps the spectrum to itself in both phases
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let (t1, t2, _) = regime_boundaries(&params).unwrap();
        for t in [0.3, 0.5 * (t1 + t2)] {
            let (bundle, _) = staggered_bundle(c(0.0, 0.5), t, 4);
            let decomp = eig(&bundle.u_f).unwrap();
            let mut worst = 0.0f64;
            for mu in &decomp.values {
                let target = 1.0 / mu.conj();
                let nearest = decomp
                    .values
                    .iter()
                    .map(|x| (x - target).norm())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            assert!(worst < 1e-8, "inverse-conjugate matching residual {worst} at T = {t}");
        }
    }

    #[test]
    fn parity_operator_invariants() {
        let geo = ChainGeometry::periodic_qubits(6, 2).unwrap();
        let ops = gpt_operators(&geo).unwrap();
        let p2 = ops.parity.dot(&ops.parity);
        assert!(fro_norm(&(&p2 - &identity_op(64))) < 1e-12);
        // the combined parity-plus-conjugation sandwich sends the generator
        // at bond m to the one at bond L - m; parity alone also swaps the two
        // legs of the asymmetric gate, which conjugation undoes
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let gate = tl_generator(&params);
        for m in 1..=5i64 {
            let em = embed_two_site(&gate, m, m + 1, &geo).unwrap();
            let target = embed_two_site(&gate, 6 - m, 6 - m + 1, &geo).unwrap();
            let moved = ops.parity.dot(&conj_entrywise(&em)).dot(&ops.parity);
            assert!(fro_norm(&(&moved - &target)) < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn gpt_symmetry_holds_in_both_phases() {
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let (t1, t2, _) = regime_boundaries(&params).unwrap();
        let geo = ChainGeometry::periodic_qubits(6, 2).unwrap();
        for t in [0.3, 0.5 * (t1 + t2)] {
            let (bundle, _) = staggered_bundle(c(0.0, 0.5), t, 6);
            let resid = gpt_residual(&bundle.u_f, &geo).unwrap();
            assert!(resid < 1e-10, "GPT residual {resid} at T = {t}");
        }
    }

    #[test]
    fn time_reversal_on_generator_easy_plane_only() {
        // conj(e) equals the site-swapped generator only for imaginary eta
        let p = permutation_op(2).mat;
        let plane = tl_generator(&AnisotropyParams::easy_plane(0.5).unwrap()).mat;
        let swapped = p.dot(&plane).dot(&p);
        assert!(fro_norm(&(&conj_entrywise(&plane) - &swapped)) < 1e-13);
        let axis = tl_generator(&AnisotropyParams::easy_axis(0.7).unwrap()).mat;
        let swapped = p.dot(&axis).dot(&p);
        assert!(fro_norm(&(&conj_entrywise(&axis) - &swapped)) > 1e-3);
    }

    #[test]
    fn limit_operator_matches_large_argument_evolution() {
        let params = AnisotropyParams::easy_plane(PI / 3.0).unwrap();
        let spec = six_vertex_spec(&params).unwrap();
        let geo = ChainGeometry::periodic_qubits(6, 2).unwrap();
        for sign in [1i8, -1] {
            let lim = limit_operator(&params, sign, &geo).unwrap();
            let alpha = c(20.0 * f64::from(sign), 0.0);
            let far = floquet_operator(&spec, &[c(0.0, 0.0), alpha], &geo).unwrap();
            let resid = fro_norm(&(&lim - &far.u_f)) / fro_norm(&lim);
            assert!(resid < 1e-6, "limit mismatch {resid} at sign {sign}");
        }
    }

    #[test]
    fn limit_operator_commutes_with_two_row_transfer() {
        let params = AnisotropyParams::easy_plane(PI / 3.0).unwrap();
        let geo = ChainGeometry::periodic_qubits(6, 2).unwrap();
        let lim = limit_operator(&params, 1, &geo).unwrap();
        // the limit circuit is itself a Floquet point: alpha -> infinity along
        // the real axis; it must commute with its own translation square
        let g = translation_op(&geo).unwrap();
        let g2 = g.dot(&g);
        assert!(fro_norm(&commutator(&lim, &g2)) < 1e-10);
    }

    #[test]
    fn root_census_small_cases() {
        let census = root_of_unity_check(&[c(1.0, 0.0)], 3, 6, 1e-8);
        assert!(census.pass);
        assert_eq!(census.lattice_size, 9);
        assert_eq!(census.occupancy.get(&0), Some(&1));

        let params = AnisotropyParams::easy_plane(PI / 3.0).unwrap();
        let geo = ChainGeometry::periodic_qubits(6, 2).unwrap();
        let lim = limit_operator(&params, 1, &geo).unwrap();
        let decomp = eig(&lim).unwrap();
        let census = root_of_unity_check(&decomp.values, 3, 6, 1e-8);
        assert!(
            census.pass,
            "cluster-mean distance {}",
            census.max_cluster_mean_distance
        );
        assert!(census.all_roots_occupied(), "occupied {} of 9", census.occupancy.len());
        assert!(census.mirror_axes.contains(&0), "mirror about the real axis expected");
        // the robust occupancy agrees
        let occ = occupied_roots_sigma_min(&lim, 3, 6, 1e-8).unwrap();
        assert_eq!(occ.len(), 9);
    }

    #[test]
    fn root_census_strict_subset_at_wide_gamma() {
        let params = AnisotropyParams::easy_plane(5.0 * PI / 9.0).unwrap();
        let geo = ChainGeometry::periodic_qubits(8, 2).unwrap();
        let lim = limit_operator(&params, 1, &geo).unwrap();
        let decomp = eig(&lim).unwrap();
        let census = root_of_unity_check(&decomp.values, 9, 8, 1e-8);
        assert!(
            census.pass,
            "cluster-mean distance {}",
            census.max_cluster_mean_distance
        );
        assert_eq!(census.lattice_size, 36);
        assert!(!census.all_roots_occupied(), "expected a strict subset");
        assert!(census.mirror_symmetric, "no mirror axis found");
        let occ = occupied_roots_sigma_min(&lim, 9, 8, 1e-8).unwrap();
        let from_eig: Vec<usize> = census.occupancy.keys().copied().collect();
        assert_eq!(occ, from_eig, "sigma-min and eigensolver occupancy disagree");
    }

    #[test]
    fn generic_point_fails_root_census() {
        // away from the transition the spectrum is dense on the circle, not
        // pinned to lattice roots
        let (bundle, _) = staggered_bundle(c(0.0, PI / 3.0), 0.3, 6);
        let decomp = eig(&bundle.u_f).unwrap();
        let census = root_of_unity_check(&decomp.values, 3, 6, 1e-8);
        assert!(!census.pass);
    }

    #[test]
    fn transition_point_flags_jordan_risk() {
        let params = AnisotropyParams::easy_plane(0.5).unwrap();
        let (t1, _, _) = regime_boundaries(&params).unwrap();
        let (bundle, fp) = staggered_bundle(c(0.0, 0.5), t1 + 1e-9, 4);
        let report = analyze(&bundle, &fp).unwrap();
        assert!(report.jordan_risk, "no Jordan risk at the transition point");
    }
}
