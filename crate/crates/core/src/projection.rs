//! Orthogonal projection-based reduced order models (PROMs) and their error
//! analysis.
//!
//! For a column-orthonormal `P` with orthonormal complement `Q`, the error
//! system `Σ − Σ_r` of the PROM `(PᵀAP, PᵀB, CP, D)` factors exactly as
//! `Θ · Δ · Γ` with
//!
//! * `Θ = (A_PP, A_PQ, CP, CQ)`
//! * `Δ = (A, Q, Qᵀ, 0)`
//! * `Γ = (A_PP, PᵀB, A_QP, QᵀB)`
//!
//! and the product of the three H∞ norms bounds the reduction error. When
//! `B` and `C` lie in the range of `P` (interface invariance), `CQ` and `QᵀB`
//! vanish and both outer factors are strictly proper.

use faer::{Mat, MatRef};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::lti::{self, StateSpace, DEFAULT_RTOL};

/// Column-orthonormality tolerance, scaled by the number of columns.
pub const ORTHO_TOL: f64 = 1e-12;
/// Input tolerance accepted by [`make_projection`] before re-orthonormalization.
pub const INPUT_ORTHO_TOL: f64 = 1e-8;
/// Relative asymmetry accepted by the symmetric bound.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    p: Mat<f64>,
    q: Mat<f64>,
}

impl Projection {
    /// Pairs a basis with a caller-supplied complement, checking every
    /// orthogonality invariant.
    pub fn with_complement(p: Mat<f64>, q: Mat<f64>) -> Result<Self> {
        let n = p.nrows();
        if q.nrows() != n || p.ncols() + q.ncols() != n {
            return Err(Error::InvalidProjection(format!(
                "P is {}x{} and Q is {}x{}; their columns must split R^{n}",
                p.nrows(),
                p.ncols(),
                q.nrows(),
                q.ncols()
            )));
        }
        let proj = Self { p, q };
        let res = proj.residuals();
        let tol = ORTHO_TOL * (proj.r().max(1) as f64);
        let tol_q = ORTHO_TOL * ((n - proj.r()).max(1) as f64);
        if res.ptp > tol || res.qtq > tol_q || res.qtp > tol.max(tol_q) || res.completeness > ORTHO_TOL * n as f64 {
            return Err(Error::InvalidProjection(format!("orthogonality residuals too large: {res:?}")));
        }
        Ok(proj)
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn r(&self) -> usize {
        self.p.ncols()
    }

    pub fn p(&self) -> MatRef<'_, f64> {
        self.p.as_ref()
    }

    pub fn q(&self) -> MatRef<'_, f64> {
        self.q.as_ref()
    }

    pub fn residuals(&self) -> ProjectionResiduals {
        let (p, q) = (self.p(), self.q());
        let qtp = q.transpose() * p;
        let full = p * p.transpose() + q * q.transpose();
        let eye = Mat::<f64>::identity(self.n(), self.n());
        ProjectionResiduals {
            ptp: linalg::orthonormality_residual(p),
            qtq: linalg::orthonormality_residual(q),
            qtp: linalg::frobenius(qtp.as_ref()),
            completeness: linalg::frobenius((&full - &eye).as_ref()),
        }
    }
}

/// Frobenius residuals of the four projection identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResiduals {
    pub ptp: f64,
    pub qtq: f64,
    pub qtp: f64,
    pub completeness: f64,
}

/// Re-orthonormalizes `p_raw` and completes it with `Q` from a full QR.
///
/// `r = n` is accepted and yields an empty complement; it represents the
/// trivial (similarity) reduction and is rejected by the error-analysis
/// routines.
pub fn make_projection(p_raw: MatRef<'_, f64>) -> Result<Projection> {
    let (n, r) = (p_raw.nrows(), p_raw.ncols());
    if r == 0 || r > n {
        return Err(Error::InvalidProjection(format!("need 1 <= r <= n, got r = {r}, n = {n}")));
    }
    if !linalg::all_finite(p_raw) {
        return Err(Error::NonFinite("P"));
    }
    let resid = linalg::orthonormality_residual(p_raw);
    if resid > INPUT_ORTHO_TOL {
        // Distinguish rank deficiency from merely non-orthonormal input.
        linalg::orthonormalize(p_raw)?;
        return Err(Error::InvalidProjection(format!("columns not orthonormal (‖PᵀP − I‖_F = {resid:e})")));
    }
    let qr = p_raw.qr();
    let full_q = qr.compute_Q();
    let rr = qr.R();
    let sign = |j: usize| if rr[(j, j)] < 0.0 { -1.0 } else { 1.0 };
    let p = Mat::from_fn(n, r, |i, j| sign(j) * full_q[(i, j)]);
    let q = Mat::from_fn(n, n - r, |i, j| full_q[(i, r + j)]);
    Projection::with_complement(p, q)
}

/// `(PᵀAP, PᵀB, CP, D)`.
pub fn build_prom(sys: &StateSpace, proj: &Projection) -> Result<StateSpace> {
    check_dims(sys, proj)?;
    let p = proj.p();
    StateSpace::new(
        p.transpose() * sys.a() * p,
        p.transpose() * sys.b(),
        sys.c() * p,
        sys.d().to_owned(),
    )
}

fn check_dims(sys: &StateSpace, proj: &Projection) -> Result<()> {
    if sys.n() != proj.n() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} states, projection acts on R^{}",
            sys.n(),
            proj.n()
        )));
    }
    Ok(())
}

/// `C = CPPᵀ` and `B = PPᵀB`, each to relative Frobenius tolerance `tol`.
pub fn is_interface_invariant(sys: &StateSpace, proj: &Projection, tol: f64) -> bool {
    if sys.n() != proj.n() {
        return false;
    }
    let (c_res, b_res) = interface_residuals(sys, proj);
    c_res <= tol * linalg::frobenius(sys.c()) && b_res <= tol * linalg::frobenius(sys.b())
}

/// Absolute residuals `(‖C − CPPᵀ‖_F, ‖B − PPᵀB‖_F)`.
pub fn interface_residuals(sys: &StateSpace, proj: &Projection) -> (f64, f64) {
    let p = proj.p();
    let ppt = p * p.transpose();
    let c_res = sys.c() - sys.c() * &ppt;
    let b_res = sys.b() - &ppt * sys.b();
    (linalg::frobenius(c_res.as_ref()), linalg::frobenius(b_res.as_ref()))
}

#[derive(Debug, Clone)]
pub struct ErrorProductForm {
    pub theta: StateSpace,
    pub gamma: StateSpace,
    pub delta: StateSpace,
    /// `Θ ∘ Δ ∘ Γ`, realizing `Σ − Σ_r`.
    pub assembled: StateSpace,
}

struct Blocks {
    a_pp: Mat<f64>,
    a_pq: Mat<f64>,
    a_qp: Mat<f64>,
}

fn blocks(sys: &StateSpace, proj: &Projection) -> Blocks {
    let (p, q, a) = (proj.p(), proj.q(), sys.a());
    Blocks {
        a_pp: p.transpose() * a * p,
        a_pq: p.transpose() * a * q,
        a_qp: q.transpose() * a * p,
    }
}

fn theta_gamma(sys: &StateSpace, proj: &Projection, blk: &Blocks) -> Result<(StateSpace, StateSpace)> {
    let (p, q) = (proj.p(), proj.q());
    let theta = StateSpace::new(blk.a_pp.clone(), blk.a_pq.clone(), sys.c() * p, sys.c() * q)?;
    let gamma = StateSpace::new(blk.a_pp.clone(), p.transpose() * sys.b(), blk.a_qp.clone(), q.transpose() * sys.b())?;
    Ok((theta, gamma))
}

pub fn product_form(sys: &StateSpace, proj: &Projection) -> Result<ErrorProductForm> {
    check_dims(sys, proj)?;
    if proj.r() == proj.n() {
        return Err(Error::EmptyComplement);
    }
    let blk = blocks(sys, proj);
    let (theta, gamma) = theta_gamma(sys, proj, &blk)?;
    let k = proj.n() - proj.r();
    let q = proj.q();
    let delta = StateSpace::new(sys.a().to_owned(), q.to_owned(), q.transpose().to_owned(), Mat::zeros(k, k))?;
    let assembled = lti::series(&theta, &lti::series(&delta, &gamma)?)?;
    Ok(ErrorProductForm { theta, gamma, delta, assembled })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub theta_norm: f64,
    pub gamma_norm: f64,
    pub delta_norm: f64,
    pub bound: f64,
    pub used_symmetric_shortcut: bool,
}

impl BoundReport {
    fn new(theta_norm: f64, gamma_norm: f64, delta_norm: f64, used_symmetric_shortcut: bool) -> Self {
        Self {
            theta_norm,
            gamma_norm,
            delta_norm,
            bound: theta_norm * gamma_norm * delta_norm,
            used_symmetric_shortcut,
        }
    }

    /// Report for the trivial reduction (`r = n`), whose error is identically zero.
    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, false)
    }
}

/// `‖Θ‖·‖Δ‖·‖Γ‖`, every factor computed by H∞ iteration.
pub fn error_bound(sys: &StateSpace, proj: &Projection) -> Result<BoundReport> {
    check_dims(sys, proj)?;
    if proj.r() == proj.n() {
        return Err(Error::EmptyComplement);
    }
    lti::require_hurwitz(sys.a(), "A")?;
    let form = product_form(sys, proj)?;
    lti::require_hurwitz(form.theta.a(), "A_PP")?;
    let theta_norm = lti::hinf_norm(&form.theta, DEFAULT_RTOL)?.value;
    let gamma_norm = lti::hinf_norm(&form.gamma, DEFAULT_RTOL)?.value;
    let delta_norm = lti::hinf_norm(&form.delta, DEFAULT_RTOL)?.value;
    Ok(BoundReport::new(theta_norm, gamma_norm, delta_norm, false))
}

/// Symmetric Hurwitz `A`: `‖Δ‖_H∞ = ‖QᵀA⁻¹Q‖₂`, so the n-state factor never
/// goes through the H∞ iteration.
pub fn error_bound_symmetric(sys: &StateSpace, proj: &Projection) -> Result<BoundReport> {
    check_dims(sys, proj)?;
    if proj.r() == proj.n() {
        return Err(Error::EmptyComplement);
    }
    let a = sys.a();
    let asym = linalg::asymmetry(a);
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric(asym));
    }
    let ev = linalg::symmetric_spectrum(a, "A")?;
    let max_re = ev.last().copied().unwrap_or(f64::NEG_INFINITY);
    let scale = ev.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if !(max_re < -lti::STABILITY_MARGIN * scale) {
        return Err(Error::NotHurwitz { which: "A", max_real: max_re });
    }
    let cond = scale / ev.iter().fold(f64::INFINITY, |s, v| s.min(v.abs()));
    if !(cond <= linalg::COND_LIMIT) {
        return Err(Error::IllConditioned { what: "A", cond });
    }
    let q = proj.q();
    let ainv_q = solve(a, q);
    let qt_ainv_q = q.transpose() * &ainv_q;
    let delta_norm = linalg::norm2(qt_ainv_q.as_ref())?;

    let blk = blocks(sys, proj);
    let a_pp_sym = Mat::from_fn(blk.a_pp.nrows(), blk.a_pp.ncols(), |i, j| 0.5 * (blk.a_pp[(i, j)] + blk.a_pp[(j, i)]));
    let pp_ev = linalg::symmetric_spectrum(a_pp_sym.as_ref(), "A_PP")?;
    let pp_max = pp_ev.last().copied().unwrap_or(f64::NEG_INFINITY);
    let pp_scale = pp_ev.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if !(pp_max < -lti::STABILITY_MARGIN * pp_scale) {
        return Err(Error::NotHurwitz { which: "A_PP", max_real: pp_max });
    }
    let (theta, gamma) = theta_gamma(sys, proj, &blk)?;
    let theta_norm = lti::hinf_norm(&theta, DEFAULT_RTOL)?.value;
    // With C = Bᵀ and A symmetric, Γ is the transpose system of Θ.
    let dual = linalg::max_abs_diff(sys.c(), sys.b().transpose()) == 0.0;
    let gamma_norm = if dual { theta_norm } else { lti::hinf_norm(&gamma, DEFAULT_RTOL)?.value };
    Ok(BoundReport::new(theta_norm, gamma_norm, delta_norm, true))
}

fn solve(m: MatRef<'_, f64>, rhs: MatRef<'_, f64>) -> Mat<f64> {
    use faer::prelude::Solve;
    m.partial_piv_lu().solve(rhs)
}

/// Which bound a multi-stage routine evaluates per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    General,
    Symmetric,
    /// Symmetric shortcut when `A` is symmetric, general otherwise.
    Auto,
}

pub fn bound_with(sys: &StateSpace, proj: &Projection, method: BoundMethod) -> Result<BoundReport> {
    match method {
        BoundMethod::General => error_bound(sys, proj),
        BoundMethod::Symmetric => error_bound_symmetric(sys, proj),
        BoundMethod::Auto => {
            if linalg::asymmetry(sys.a()) <= SYMMETRY_TOL {
                error_bound_symmetric(sys, proj)
            } else {
                error_bound(sys, proj)
            }
        }
    }
}

/// Factorization of a projection into singleton (dimension-dropping-by-one) steps.
#[derive(Debug, Clone)]
pub struct SingletonSequence {
    factors: Vec<Mat<f64>>,
    product: Mat<f64>,
}

impl SingletonSequence {
    /// Validates shapes (`(n−k+1) × (n−k)`) and column orthonormality of each factor.
    pub fn from_factors(factors: Vec<Mat<f64>>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidParameter("a singleton sequence needs at least one factor".into()))?;
        let mut product = Mat::<f64>::identity(first.nrows(), first.nrows());
        for (k, f) in factors.iter().enumerate() {
            if f.nrows() != product.ncols() || f.ncols() + 1 != f.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "factor {} is {}x{}, expected {}x{}",
                    k + 1,
                    f.nrows(),
                    f.ncols(),
                    product.ncols(),
                    product.ncols().saturating_sub(1)
                )));
            }
            let res = linalg::orthonormality_residual(f.as_ref());
            if res > ORTHO_TOL * (f.ncols().max(1) as f64) {
                return Err(Error::InvalidProjection(format!("factor {} not orthonormal ({res:e})", k + 1)));
            }
            product = &product * f;
        }
        Ok(Self { factors, product })
    }

    pub fn factors(&self) -> &[Mat<f64>] {
        &self.factors
    }

    pub fn product(&self) -> MatRef<'_, f64> {
        self.product.as_ref()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// `P₍₁₎ = [P, q₁, …, q_{n−r−1}]`, then `P₍ₖ₎ = [I_{n−k}; 0]` for `k ≥ 2`.
pub fn singleton_decompose(proj: &Projection) -> Result<SingletonSequence> {
    let (n, r) = (proj.n(), proj.r());
    if r >= n {
        return Err(Error::EmptyComplement);
    }
    let (p, q) = (proj.p(), proj.q());
    let mut factors = Vec::with_capacity(n - r);
    factors.push(linalg::hstack(p, q.subcols(0, n - r - 1)));
    for k in 2..=(n - r) {
        factors.push(Mat::from_fn(n - k + 1, n - k, |i, j| if i == j { 1.0 } else { 0.0 }));
    }
    SingletonSequence::from_factors(factors)
}

/// Per-stage bounds of a singleton sequence and the final reduced system.
#[derive(Debug, Clone)]
pub struct SequenceReport {
    pub stage_bounds: Vec<f64>,
    pub total: f64,
    pub reduced: StateSpace,
}

pub fn sequence_report(sys: &StateSpace, seq: &SingletonSequence, method: BoundMethod) -> Result<SequenceReport> {
    let mut current = sys.clone();
    let mut stage_bounds = Vec::with_capacity(seq.len());
    for (k, factor) in seq.factors().iter().enumerate() {
        let stage = |e: Error| Error::Stage { stage: k + 1, source: Box::new(e) };
        let proj = make_projection(factor.as_ref()).map_err(stage)?;
        let b = bound_with(&current, &proj, method).map_err(stage)?;
        stage_bounds.push(b.bound);
        current = build_prom(&current, &proj).map_err(stage)?;
    }
    Ok(SequenceReport { total: stage_bounds.iter().sum(), stage_bounds, reduced: current })
}

/// `Σₖ b(Σ₍ₖ₋₁₎, P₍ₖ₎)`, which dominates the H∞ norm of the final error
/// by the telescoping sum `Σ_r − Σ = Σₖ (Σ₍ₖ₎ − Σ₍ₖ₋₁₎)`.
pub fn sequence_bound(sys: &StateSpace, seq: &SingletonSequence) -> Result<f64> {
    Ok(sequence_report(sys, seq, BoundMethod::General)?.total)
}

/// `Υ(M, Q) = M⁻¹ − M⁻¹Q(QᵀM⁻¹Q)⁻¹QᵀM⁻¹`, which equals `P(PᵀMP)⁻¹Pᵀ`.
pub fn lift_inverse(m: MatRef<'_, f64>, proj: &Projection) -> Result<Mat<f64>> {
    if m.nrows() != proj.n() || m.ncols() != proj.n() {
        return Err(Error::DimensionMismatch("lift_inverse: M must be n x n".into()));
    }
    let (p, q) = (proj.p(), proj.q());
    let m_inv = linalg::guarded_inverse(m, "M")?;
    let m_pp = p.transpose() * m * p;
    linalg::guarded_inverse(m_pp.as_ref(), "PᵀMP")?;
    let minv_q = &m_inv * q;
    let inner = q.transpose() * &minv_q;
    let inner_inv = linalg::guarded_inverse(inner.as_ref(), "QᵀM⁻¹Q")?;
    // M⁻¹Q(QᵀM⁻¹Q)⁻¹QᵀM⁻¹ = (M⁻¹Q)(QᵀM⁻¹Q)⁻¹(QᵀM⁻¹); the right factor is not
    // (M⁻¹Q)ᵀ unless M is symmetric.
    let qt_minv = q.transpose() * &m_inv;
    Ok(&m_inv - &minv_q * &inner_inv * &qt_minv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurSide {
    /// `S(M, P) = M_QQ − M_QP M_PP⁻¹ M_PQ`.
    P,
    /// `S(M, Q) = M_PP − M_PQ M_QQ⁻¹ M_QP`.
    Q,
}

/// Projected Schur complement of `M` in the `[P Q]` basis.
pub fn projected_schur(m: MatRef<'_, f64>, proj: &Projection, side: SchurSide) -> Result<Mat<f64>> {
    if m.nrows() != proj.n() || m.ncols() != proj.n() {
        return Err(Error::DimensionMismatch("projected_schur: M must be n x n".into()));
    }
    let (p, q) = (proj.p(), proj.q());
    let (keep, pivot) = match side {
        SchurSide::P => (q, p),
        SchurSide::Q => (p, q),
    };
    let m_kk = keep.transpose() * m * keep;
    let m_kp = keep.transpose() * m * pivot;
    let m_pk = pivot.transpose() * m * keep;
    let m_pp = pivot.transpose() * m * pivot;
    let what = match side {
        SchurSide::P => "M_PP",
        SchurSide::Q => "M_QQ",
    };
    let solved = linalg::guarded_solve(m_pp.as_ref(), m_pk.as_ref(), what)?;
    Ok(&m_kk - &m_kp * &solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{example, random};

    fn mat(rows: &[&[f64]]) -> Mat<f64> {
        let ncols = rows.first().map_or(0, |r| r.len());
        Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j])
    }

    fn eye_cols(n: usize, r: usize) -> Mat<f64> {
        Mat::from_fn(n, r, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    fn rel(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> f64 {
        linalg::frobenius((a - b).as_ref()) / linalg::frobenius(b).max(1e-300)
    }

    #[test]
    fn complement_of_coordinate_plane() {
        let proj = make_projection(eye_cols(3, 2).as_ref()).unwrap();
        let q = proj.q();
        assert_eq!((q.nrows(), q.ncols()), (3, 1));
        assert!((q[(2, 0)].abs() - 1.0).abs() < 1e-14);
        assert!(q[(0, 0)].abs() < 1e-14 && q[(1, 0)].abs() < 1e-14);
    }

    #[test]
    fn complement_of_example_basis() {
        let alpha = 0.5;
        let b = 0.75_f64.sqrt();
        let given = example::projection(alpha).unwrap();
        let proj = make_projection(given.p()).unwrap();
        let q = proj.q();
        let expected = [0.0, -b, alpha];
        let dot: f64 = (0..3).map(|i| q[(i, 0)] * expected[i]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_projection_residuals() {
        let p = random::orthonormal(&mut random::rng(11, 0), 6, 2).unwrap();
        let proj = make_projection(p.as_ref()).unwrap();
        let res = proj.residuals();
        assert!(res.qtp < 1e-13 && res.qtq < 1e-13 && res.completeness < 1e-13, "{res:?}");
        assert!(linalg::max_abs_diff(proj.p(), p.as_ref()) < 1e-13);
    }

    #[test]
    fn rejects_bad_bases() {
        assert!(make_projection(Mat::<f64>::zeros(3, 0).as_ref()).is_err());
        assert!(make_projection(Mat::<f64>::zeros(2, 3).as_ref()).is_err());
        let dup = Mat::from_fn(3, 2, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert!(matches!(make_projection(dup.as_ref()), Err(Error::InvalidProjection(_))));
        let skew = mat(&[&[1.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(make_projection(skew.as_ref()), Err(Error::InvalidProjection(_))));
    }

    #[test]
    fn full_rank_projection_keeps_system() {
        let sys = example::system();
        let proj = make_projection(eye_cols(3, 3).as_ref()).unwrap();
        assert_eq!(proj.q().ncols(), 0);
        let red = build_prom(&sys, &proj).unwrap();
        assert_eq!(linalg::max_abs_diff(red.a(), sys.a()), 0.0);
        assert!(matches!(product_form(&sys, &proj), Err(Error::EmptyComplement)));
        assert!(matches!(error_bound(&sys, &proj), Err(Error::EmptyComplement)));
    }

    #[test]
    fn example_reduced_state_matrix() {
        let sys = example::system();
        for alpha in [-0.9, -0.2, 0.0, 0.3, 0.73, 1.0] {
            let b = example::beta(alpha);
            let red = build_prom(&sys, &example::projection(alpha).unwrap()).unwrap();
            let expected = mat(&[&[-2.0, alpha], &[alpha, -alpha * alpha - (b - alpha).powi(2)]]);
            assert!(linalg::max_abs_diff(red.a(), expected.as_ref()) < 1e-14, "alpha = {alpha}");
        }
    }

    #[test]
    fn reduced_tfm_matches_direct_formula() {
        let mut rng = random::rng(5, 0);
        let sys = random::stable_system(&mut rng, 6, 2, 2, 0.5).unwrap();
        let p = random::orthonormal(&mut rng, 6, 3).unwrap();
        let proj = make_projection(p.as_ref()).unwrap();
        let red = build_prom(&sys, &proj).unwrap();
        for omega in [0.0, 0.3, 2.0, 17.0] {
            let pap = p.transpose() * sys.a() * &p;
            let res = Mat::from_fn(3, 3, |i, j| {
                faer::c64::new(-pap[(i, j)], if i == j { omega } else { 0.0 })
            });
            let pb = linalg::to_complex((p.transpose() * sys.b()).as_ref());
            let cp = linalg::to_complex((sys.c() * &p).as_ref());
            use faer::prelude::Solve;
            let direct = &cp * res.partial_piv_lu().solve(&pb) + linalg::to_complex(sys.d());
            let got = lti::tfm_eval(&red, omega).unwrap();
            assert!(linalg::frobenius_c((&got - &direct).as_ref()) < 1e-12);
        }
    }

    #[test]
    fn interface_invariance_predicate() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sys = example::system();
        let p = mat(&[&[s, s], &[s, -s], &[0.0, 0.0]]);
        let proj = make_projection(p.as_ref()).unwrap();
        assert!(is_interface_invariant(&sys, &proj, 1e-12));
        // P·Pᵀ is not the identity, yet the reduced model keeps the interface.
        assert!(linalg::max_abs_diff((proj.p() * proj.p().transpose()).as_ref(), Mat::<f64>::identity(3, 3).as_ref()) > 0.5);

        let coord = make_projection(eye_cols(4, 2).as_ref()).unwrap();
        let sys = StateSpace::new(-Mat::<f64>::identity(4, 4), eye_cols(4, 1), eye_cols(4, 2).transpose().to_owned(), Mat::zeros(2, 1)).unwrap();
        assert!(is_interface_invariant(&sys, &coord, 1e-12));

        let mut rng = random::rng(9, 0);
        let proj = make_projection(random::orthonormal(&mut rng, 5, 2).unwrap().as_ref()).unwrap();
        let b = proj.q().subcols(0, 1).to_owned();
        let sys = StateSpace::new(-Mat::<f64>::identity(5, 5), b, Mat::zeros(1, 5), Mat::zeros(1, 1)).unwrap();
        assert!(!is_interface_invariant(&sys, &proj, 1e-8));
    }

    /// Characteristic polynomial `s² + c₁ s + c₀` of a 2 × 2 matrix.
    fn char_poly2(a: MatRef<'_, f64>) -> (f64, f64) {
        (-(a[(0, 0)] + a[(1, 1)]), a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)])
    }

    #[test]
    fn example_outer_factor_denominator() {
        let alpha = 0.73;
        let b = example::beta(alpha);
        let g2 = (alpha - b).powi(2);
        let form = product_form(&example::system(), &example::projection(alpha).unwrap()).unwrap();
        for factor in [&form.theta, &form.gamma] {
            let (c1, c0) = char_poly2(factor.a());
            assert!((c1 - (alpha * alpha + g2 + 2.0)).abs() < 1e-13);
            assert!((c0 - (alpha * alpha + 2.0 * g2)).abs() < 1e-13);
        }
        assert_eq!(form.theta.d()[(0, 0)], 0.0);
        // Θ and Γ share a transfer function here.
        let th = lti::tfm_eval(&form.theta, 1.3).unwrap();
        let ga = lti::tfm_eval(&form.gamma, 1.3).unwrap();
        assert!((th[(0, 0)] - ga[(0, 0)]).norm() < 1e-13);
    }

    #[test]
    fn interface_invariant_factors_are_strictly_proper() {
        let mut rng = random::rng(21, 0);
        let sys0 = random::stable_system(&mut rng, 6, 2, 2, 0.5).unwrap();
        let proj = make_projection(random::orthonormal(&mut rng, 6, 3).unwrap().as_ref()).unwrap();
        let b = proj.p() * random::gaussian(&mut rng, 3, 2);
        let c = random::gaussian(&mut rng, 2, 3) * proj.p().transpose();
        let sys = StateSpace::new(sys0.a().to_owned(), b, c, sys0.d().to_owned()).unwrap();
        assert!(is_interface_invariant(&sys, &proj, 1e-12));
        let form = product_form(&sys, &proj).unwrap();
        assert!(linalg::frobenius(form.theta.d()) <= 1e-10 * linalg::frobenius(sys.c()));
        assert!(linalg::frobenius(form.gamma.d()) <= 1e-10 * linalg::frobenius(sys.b()));
        assert_eq!((form.theta.d().nrows(), form.theta.d().ncols()), (2, 3));
        assert_eq!((form.gamma.d().nrows(), form.gamma.d().ncols()), (3, 2));
    }

    #[test]
    fn product_form_matches_additive_error() {
        let mut rng = random::rng(33, 0);
        let sys = random::stable_system(&mut rng, 6, 2, 3, 0.3).unwrap();
        let proj = make_projection(random::orthonormal(&mut rng, 6, 3).unwrap().as_ref()).unwrap();
        let form = product_form(&sys, &proj).unwrap();
        let additive = lti::subtract(&sys, &build_prom(&sys, &proj).unwrap()).unwrap();
        let freqs = lti::probe_frequencies(sys.a(), 200).unwrap();
        let disc = lti::tfm_discrepancy(&form.assembled, &additive, &freqs).unwrap();
        assert!(disc <= 1e-8, "discrepancy {disc:e}");
    }

    #[test]
    fn example_bound_at_best_alpha() {
        let report = error_bound(&example::system(), &example::projection(0.73).unwrap()).unwrap();
        assert!((report.bound - 0.039).abs() < 0.002, "{report:?}");
        assert!(!report.used_symmetric_shortcut);
        let sym = error_bound_symmetric(&example::system(), &example::projection(0.73).unwrap()).unwrap();
        assert!((sym.bound - report.bound).abs() <= 1e-5 * report.bound);
        assert!(sym.used_symmetric_shortcut);
    }

    #[test]
    fn zero_input_gives_zero_bound() {
        let sys = StateSpace::new(example::system().a().to_owned(), Mat::zeros(3, 1), mat(&[&[1.0, 1.0, 0.0]]), Mat::zeros(1, 1)).unwrap();
        let report = error_bound(&sys, &example::projection(0.4).unwrap()).unwrap();
        assert_eq!(report.gamma_norm, 0.0);
        assert_eq!(report.bound, 0.0);
    }

    #[test]
    fn bound_dominates_error_on_random_instance() {
        let mut rng = random::rng(44, 0);
        let sys = random::stable_system(&mut rng, 5, 1, 2, 0.5).unwrap();
        let p = random::orthonormal(&mut rng, 5, 3).unwrap();
        let proj = make_projection(p.as_ref()).unwrap();
        let bound = error_bound(&sys, &proj).unwrap().bound;
        let err = lti::hinf_norm(&lti::subtract(&build_prom(&sys, &proj).unwrap(), &sys).unwrap(), DEFAULT_RTOL).unwrap().value;
        assert!(bound + 1e-6 >= err, "bound {bound} < error {err}");
    }

    #[test]
    fn unstable_state_matrix_is_named() {
        let sys = StateSpace::new(Mat::<f64>::identity(2, 2), eye_cols(2, 1), eye_cols(2, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        let proj = make_projection(eye_cols(2, 1).as_ref()).unwrap();
        assert!(matches!(error_bound(&sys, &proj), Err(Error::NotHurwitz { which: "A", .. })));
        assert!(matches!(error_bound_symmetric(&sys, &proj), Err(Error::NotHurwitz { which: "A", .. })));
    }

    #[test]
    fn unstable_reduced_matrix_is_named() {
        // Hurwitz A whose compression onto e₁ is unstable.
        let a = mat(&[&[0.5, -3.0], &[3.0, -2.0]]);
        assert!(lti::is_hurwitz(a.as_ref()).unwrap());
        let sys = StateSpace::new(a, eye_cols(2, 1), eye_cols(2, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        let proj = make_projection(eye_cols(2, 1).as_ref()).unwrap();
        assert!(matches!(error_bound(&sys, &proj), Err(Error::NotHurwitz { which: "A_PP", .. })));
    }

    #[test]
    fn symmetric_delta_of_negative_identity() {
        let sys = StateSpace::new(-Mat::<f64>::identity(3, 3), eye_cols(3, 1), eye_cols(3, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        let proj = Projection::with_complement(eye_cols(3, 2), Mat::from_fn(3, 1, |i, _| if i == 2 { 1.0 } else { 0.0 })).unwrap();
        let report = error_bound_symmetric(&sys, &proj).unwrap();
        assert!((report.delta_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_delta_matches_hinf_on_example() {
        let sys = example::system();
        for alpha in [-0.6, 0.1, 0.73, 0.95] {
            let proj = example::projection(alpha).unwrap();
            let shortcut = error_bound_symmetric(&sys, &proj).unwrap().delta_norm;
            let delta = product_form(&sys, &proj).unwrap().delta;
            let full = lti::hinf_norm(&delta, DEFAULT_RTOL).unwrap().value;
            assert!((shortcut - full).abs() <= 1e-5 * full, "alpha {alpha}: {shortcut} vs {full}");
        }
    }

    #[test]
    fn symmetric_delta_matches_hinf_on_grounded_path() {
        let n = 6;
        let a = Mat::from_fn(n, n, |i, j| match (i, j) {
            (0, 0) => -2.0,
            _ if i == j && i == n - 1 => -1.0,
            _ if i == j => -2.0,
            _ if i.abs_diff(j) == 1 => 1.0,
            _ => 0.0,
        });
        let sys = StateSpace::new(a, eye_cols(n, 1), eye_cols(n, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        // Cells {1}, {2,3}, {4}, {5,6}.
        let cells: [&[usize]; 4] = [&[0], &[1, 2], &[3], &[4, 5]];
        let p = Mat::from_fn(n, 4, |i, j| if cells[j].contains(&i) { 1.0 / (cells[j].len() as f64).sqrt() } else { 0.0 });
        let proj = make_projection(p.as_ref()).unwrap();
        let shortcut = error_bound_symmetric(&sys, &proj).unwrap().delta_norm;
        let full = lti::hinf_norm(&product_form(&sys, &proj).unwrap().delta, DEFAULT_RTOL).unwrap().value;
        assert!((shortcut - full).abs() <= 1e-5 * full);
    }

    #[test]
    fn symmetric_bound_rejects_asymmetry() {
        let sys = StateSpace::new(mat(&[&[-1.0, 1.0], &[0.0, -1.0]]), eye_cols(2, 1), eye_cols(2, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        let proj = make_projection(eye_cols(2, 1).as_ref()).unwrap();
        assert!(matches!(error_bound_symmetric(&sys, &proj), Err(Error::Asymmetric(_))));
    }

    fn assert_product(seq: &SingletonSequence, p: MatRef<'_, f64>) {
        assert!(linalg::frobenius((seq.product() - p).as_ref()) <= 1e-10);
        for f in seq.factors() {
            assert!(linalg::orthonormality_residual(f.as_ref()) <= 1e-12);
        }
    }

    #[test]
    fn single_step_sequence_is_the_projection() {
        let proj = example::projection(0.3).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        assert_eq!(seq.len(), 1);
        assert!(linalg::max_abs_diff(seq.factors()[0].as_ref(), proj.p()) == 0.0);
    }

    #[test]
    fn two_step_sequence_of_coordinate_plane() {
        let proj = make_projection(eye_cols(4, 2).as_ref()).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!((seq.factors()[0].nrows(), seq.factors()[0].ncols()), (4, 3));
        assert_eq!((seq.factors()[1].nrows(), seq.factors()[1].ncols()), (3, 2));
        assert!(linalg::max_abs_diff(seq.factors()[1].as_ref(), eye_cols(3, 2).as_ref()) == 0.0);
        assert_product(&seq, proj.p());
    }

    #[test]
    fn random_sequence_reproduces_projection() {
        let p = random::orthonormal(&mut random::rng(2, 0), 6, 2).unwrap();
        let proj = make_projection(p.as_ref()).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        assert_eq!(seq.len(), 4);
        assert_product(&seq, proj.p());
    }

    #[test]
    fn factor_validation() {
        assert!(SingletonSequence::from_factors(vec![]).is_err());
        assert!(SingletonSequence::from_factors(vec![eye_cols(4, 2)]).is_err());
        assert!(SingletonSequence::from_factors(vec![mat(&[&[1.0], &[1.0]])]).is_err());
    }

    #[test]
    fn single_factor_sequence_bound_equals_bound() {
        let sys = example::system();
        let proj = example::projection(0.73).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        let total = sequence_bound(&sys, &seq).unwrap();
        let direct = error_bound(&sys, &proj).unwrap().bound;
        assert!((total - direct).abs() <= 1e-12 * direct);
        assert!((total - 0.039).abs() < 0.002);
    }

    #[test]
    fn two_step_sequence_dominates_error() {
        let mut rng = random::rng(8, 0);
        let sys = random::symmetric_stable_system(&mut rng, 5, 1, 1, 0.5, 4.0).unwrap();
        let proj = make_projection(random::orthonormal(&mut rng, 5, 3).unwrap().as_ref()).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        let report = sequence_report(&sys, &seq, BoundMethod::General).unwrap();
        let direct = build_prom(&sys, &proj).unwrap();
        let freqs = lti::probe_frequencies(sys.a(), 50).unwrap();
        assert!(lti::tfm_discrepancy(&report.reduced, &direct, &freqs).unwrap() <= 1e-8);
        let err = lti::hinf_norm(&lti::subtract(&report.reduced, &sys).unwrap(), DEFAULT_RTOL).unwrap().value;
        assert!(report.total + 1e-6 >= err);
    }

    #[test]
    fn sequence_reports_failing_stage() {
        let a = mat(&[&[0.5, -3.0, 0.0], &[3.0, -2.0, 0.0], &[0.0, 0.0, -1.0]]);
        let sys = StateSpace::new(a, eye_cols(3, 1), eye_cols(3, 1).transpose().to_owned(), Mat::zeros(1, 1)).unwrap();
        let proj = make_projection(eye_cols(3, 1).as_ref()).unwrap();
        let seq = singleton_decompose(&proj).unwrap();
        let err = sequence_bound(&sys, &seq).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: 2, .. }), "{err}");
        assert!(err.is_instability());
    }

    #[test]
    fn lifting_of_identity_is_orthogonal_projector() {
        let proj = make_projection(random::orthonormal(&mut random::rng(1, 0), 4, 2).unwrap().as_ref()).unwrap();
        let lifted = lift_inverse(Mat::<f64>::identity(4, 4).as_ref(), &proj).unwrap();
        let ppt = proj.p() * proj.p().transpose();
        assert!(linalg::max_abs_diff(lifted.as_ref(), ppt.as_ref()) < 1e-14);
    }

    #[test]
    fn lifting_identity_on_random_matrix() {
        let mut rng = random::rng(4, 0);
        let mut m = random::gaussian(&mut rng, 5, 5);
        for i in 0..5 {
            m[(i, i)] += 4.0;
        }
        let proj = make_projection(random::orthonormal(&mut rng, 5, 2).unwrap().as_ref()).unwrap();
        let lifted = lift_inverse(m.as_ref(), &proj).unwrap();
        let p = proj.p();
        let direct = p * linalg::inverse((p.transpose() * &m * p).as_ref()) * p.transpose();
        assert!(rel(lifted.as_ref(), direct.as_ref()) <= 1e-9);
    }

    #[test]
    fn lifting_of_diagonal() {
        let m = Mat::from_fn(3, 3, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let proj = make_projection(eye_cols(3, 1).as_ref()).unwrap();
        let lifted = lift_inverse(m.as_ref(), &proj).unwrap();
        let e11 = Mat::from_fn(3, 3, |i, j| if i == 0 && j == 0 { 1.0 } else { 0.0 });
        assert!(linalg::max_abs_diff(lifted.as_ref(), e11.as_ref()) < 1e-15);
    }

    #[test]
    fn lifting_reports_singular_block() {
        let m = Mat::from_fn(2, 2, |i, j| if i == 1 && j == 1 { 1.0 } else { 0.0 } + if i == 0 && j == 1 { 1.0 } else { 0.0 } + if i == 1 && j == 0 { 1.0 } else { 0.0 });
        let proj = make_projection(eye_cols(2, 1).as_ref()).unwrap();
        assert!(matches!(lift_inverse(m.as_ref(), &proj), Err(Error::IllConditioned { what: "PᵀMP", .. })));
    }

    #[test]
    fn schur_of_block_diagonal() {
        let m = Mat::from_fn(3, 3, |i, j| if i == j { [2.0, 3.0, 5.0][i] } else { 0.0 });
        let proj = make_projection(eye_cols(3, 2).as_ref()).unwrap();
        let s = projected_schur(m.as_ref(), &proj, SchurSide::Q).unwrap();
        assert!(linalg::max_abs_diff(s.as_ref(), mat(&[&[2.0, 0.0], &[0.0, 3.0]]).as_ref()) < 1e-15);
        let s = projected_schur(Mat::<f64>::identity(3, 3).as_ref(), &proj, SchurSide::Q).unwrap();
        assert!(linalg::max_abs_diff(s.as_ref(), Mat::<f64>::identity(2, 2).as_ref()) < 1e-15);
    }

    #[test]
    fn schur_inverse_identities() {
        let mut rng = random::rng(6, 0);
        let mut m = random::gaussian(&mut rng, 5, 5);
        for i in 0..5 {
            m[(i, i)] += 4.0;
        }
        let proj = make_projection(random::orthonormal(&mut rng, 5, 2).unwrap().as_ref()).unwrap();
        let (p, q) = (proj.p(), proj.q());
        let m_inv = linalg::inverse(m.as_ref());
        let s_q = projected_schur(m.as_ref(), &proj, SchurSide::Q).unwrap();
        let lhs = p.transpose() * &m_inv * p;
        assert!(rel(linalg::inverse(s_q.as_ref()).as_ref(), lhs.as_ref()) <= 1e-9);
        let s_p = projected_schur(m.as_ref(), &proj, SchurSide::P).unwrap();
        let lhs_q = q.transpose() * &m_inv * q;
        assert!(rel(linalg::inverse(s_p.as_ref()).as_ref(), lhs_q.as_ref()) <= 1e-9);
        let cross = p.transpose() * &m_inv * q;
        let m_pp = p.transpose() * &m * p;
        let m_pq = p.transpose() * &m * q;
        let rhs = -(linalg::inverse(m_pp.as_ref()) * &m_pq * &lhs_q);
        assert!(rel(cross.as_ref(), rhs.as_ref()) <= 1e-9);
    }
}
