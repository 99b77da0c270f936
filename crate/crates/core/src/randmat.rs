//! Random matrix ensembles and Monte Carlo checks of matrix inequalities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::mc::{run_chunks, ChunkPlan, MCEstimate, StreamRng, Welford};
use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

/// Scalar entry law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", content = "p")]
pub enum Law {
    Rademacher,
    Gaussian,
    /// Symmetric law with `P[|X| ≥ t] = ln t / t^p` for `t ≥ e`.
    HeavyTail(f64),
}

impl Law {
    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            Law::Rademacher => rademacher(rng),
            Law::Gaussian => rng.sample(StandardNormal),
            Law::HeavyTail(p) => heavytail_sample(p, rng),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Law::Rademacher => "rademacher".into(),
            Law::Gaussian => "gaussian".into(),
            Law::HeavyTail(p) => format!("heavytail({p})"),
        }
    }

    /// `E[X²]`.
    pub fn second_moment(&self) -> f64 {
        match *self {
            Law::Rademacher | Law::Gaussian => 1.0,
            // e^{2−p} + 2∫_e^∞ t^{1−p} ln t dt
            Law::HeavyTail(p) => {
                let q = p - 2.0;
                (-p).exp() * std::f64::consts::E.powi(2) + 2.0 * (1.0 / q + 1.0 / (q * q)) * (-q).exp()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag")]
pub enum Ensemble {
    HaarOrthogonal,
    HaarUnitary,
    /// `[X_ij]/√d`.
    IidEntries { law: Law },
    /// `E·[X_ij]/√d` with `E` Haar orthogonal.
    HaarTimesIid { law: Law },
    /// `s·E` with `E` Haar orthogonal.
    ScaledOrthogonal { scale: f64 },
}

impl Ensemble {
    pub fn label(&self) -> String {
        match self {
            Ensemble::HaarOrthogonal => "haar-o".into(),
            Ensemble::HaarUnitary => "haar-u".into(),
            Ensemble::IidEntries { law } => format!("iid-{}", law.label()),
            Ensemble::HaarTimesIid { law } => format!("haar-x-{}", law.label()),
            Ensemble::ScaledOrthogonal { scale } => format!("scaled-haar-o({scale})"),
        }
    }

    /// Accepts `haar-o`, `haar-u`, `gaussian`, `rademacher`, `heavytail:P`,
    /// `haar-x-rademacher`, `haar-x-gaussian`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let law = |t: &str| -> Result<Law> {
            match t {
                "rademacher" => Ok(Law::Rademacher),
                "gaussian" => Ok(Law::Gaussian),
                _ => match t.strip_prefix("heavytail:") {
                    Some(p) => p
                        .parse::<f64>()
                        .ok()
                        .filter(|p| *p >= 2.0)
                        .map(Law::HeavyTail)
                        .ok_or_else(|| Error::Domain(format!("bad heavy-tail exponent in {t}"))),
                    None => Err(Error::Domain(format!("unknown ensemble {t}"))),
                },
            }
        };
        match s.as_str() {
            "haar-o" | "orthogonal" => Ok(Ensemble::HaarOrthogonal),
            "haar-u" | "unitary" => Ok(Ensemble::HaarUnitary),
            _ => match s.strip_prefix("haar-x-") {
                Some(rest) => Ok(Ensemble::HaarTimesIid { law: law(rest)? }),
                None => Ok(Ensemble::IidEntries { law: law(&s)? }),
            },
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Ensemble::HaarUnitary)
    }

    /// Law of the entries, if any.
    pub fn law(&self) -> Option<Law> {
        match self {
            Ensemble::IidEntries { law } | Ensemble::HaarTimesIid { law } => Some(*law),
            _ => None,
        }
    }
}

fn rademacher(rng: &mut StreamRng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `P[|X| ≥ t]` for the heavy-tailed law.
pub fn heavytail_survival(p: f64, t: f64) -> f64 {
    let e = std::f64::consts::E;
    if t <= 0.0 {
        1.0
    } else if t <= e {
        (-p).exp()
    } else {
        t.ln() / t.powf(p)
    }
}

/// Inverse survival by bisection in `s = ln t`; `u < e^{−p}` required.
fn heavytail_quantile(p: f64, u: f64) -> f64 {
    // S(e^s) = s e^{−ps} is decreasing for s ≥ 1 when p ≥ 1.
    let target = u.ln();
    let g = |s: f64| s.ln() - p * s - target;
    let mut lo = 1.0;
    let mut hi = 2.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// One draw of the symmetric heavy-tailed law: an atom at zero of mass
/// `1 − e^{−p}`, survival `ln t / t^p` beyond `e`, random sign.
pub fn heavytail_sample(p: f64, rng: &mut StreamRng) -> f64 {
    assert!(p >= 2.0, "heavytail_sample needs p >= 2");
    let u: f64 = rng.random();
    let atom = (-p).exp();
    if u >= atom {
        return 0.0;
    }
    // u is uniform on (0, e^{−p}) here
    let t = heavytail_quantile(p, u.max(f64::MIN_POSITIVE));
    t * rademacher(rng)
}

fn gaussian_complex(rng: &mut StreamRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar orthogonal matrix: QR of a Gaussian matrix with the sign of `R_jj`
/// moved into column `j`.
pub fn haar_orthogonal(d: usize, rng: &mut StreamRng) -> RMat {
    let g = RMat::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar unitary matrix, phase-corrected analogously.
pub fn haar_unitary(d: usize, rng: &mut StreamRng) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn iid(law: Law, d: usize, rng: &mut StreamRng) -> RMat {
    let s = 1.0 / (d as f64).sqrt();
    RMat::from_fn(d, d, |_, _| s * law.sample(rng))
}

/// A real draw, or `None` for complex ensembles.
pub fn sample_real(ens: &Ensemble, d: usize, rng: &mut StreamRng) -> Option<RMat> {
    assert!(d >= 1);
    match *ens {
        Ensemble::HaarOrthogonal => Some(haar_orthogonal(d, rng)),
        Ensemble::HaarUnitary => None,
        Ensemble::IidEntries { law } => Some(iid(law, d, rng)),
        Ensemble::HaarTimesIid { law } => {
            let e = haar_orthogonal(d, rng);
            Some(e * iid(law, d, rng))
        }
        Ensemble::ScaledOrthogonal { scale } => Some(haar_orthogonal(d, rng) * scale),
    }
}

/// A draw from the ensemble as a complex matrix.
pub fn sample(ens: &Ensemble, d: usize, rng: &mut StreamRng) -> CMat {
    match ens {
        Ensemble::HaarUnitary => haar_unitary(d, rng),
        _ => sample_real(ens, d, rng).unwrap().map(|x| Complex64::new(x, 0.0)),
    }
}

const EIG_EPS: f64 = 1e-14;
const EIG_ITERS: usize = 10_000;

fn singular_values(m: &CMat) -> Result<DVector<f64>> {
    m.clone()
        .try_svd(false, false, EIG_EPS, EIG_ITERS)
        .map(|s| s.singular_values)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))
}

fn singular_values_real(m: &RMat) -> Result<DVector<f64>> {
    m.clone()
        .try_svd(false, false, EIG_EPS, EIG_ITERS)
        .map(|s| s.singular_values)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))
}

/// `|M| = √(M*M)` through a Hermitian eigendecomposition.
pub fn matrix_abs(m: &CMat) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::Domain("matrix_abs needs a square matrix".into()));
    }
    let g = m.adjoint() * m;
    let eig = g
        .try_symmetric_eigen(EIG_EPS, EIG_ITERS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let sq = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    Ok(&v * CMat::from_diagonal(&sq) * v.adjoint())
}

/// `|M|` for a real matrix.
pub fn matrix_abs_real(m: &RMat) -> Result<RMat> {
    if !m.is_square() {
        return Err(Error::Domain("matrix_abs needs a square matrix".into()));
    }
    let g = m.transpose() * m;
    let eig = g
        .try_symmetric_eigen(EIG_EPS, EIG_ITERS)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let sq = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = eig.eigenvectors;
    Ok(&v * RMat::from_diagonal(&sq) * v.transpose())
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.max())
}

pub fn op_norm_real(m: &RMat) -> Result<f64> {
    Ok(singular_values_real(m)?.max())
}

/// `σ(M) = λ_min(|M|)`.
pub fn smallest_singular(m: &CMat) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Domain("smallest_singular needs a square matrix".into()));
    }
    Ok(singular_values(m)?.min())
}

pub fn smallest_singular_real(m: &RMat) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Domain("smallest_singular needs a square matrix".into()));
    }
    Ok(singular_values_real(m)?.min())
}

fn draw_op_norm(ens: &Ensemble, d: usize, rng: &mut StreamRng) -> Result<f64> {
    match sample_real(ens, d, rng) {
        Some(m) => op_norm_real(&m),
        None => op_norm(&sample(ens, d, rng)),
    }
}

fn check_samples(samples: usize, min: usize) -> Result<()> {
    if samples < min {
        return Err(Error::Domain(format!("need at least {min} samples, got {samples}")));
    }
    Ok(())
}

fn collect_parts(parts: Vec<Result<Welford>>, seed: u64, plan: ChunkPlan) -> Result<MCEstimate> {
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MCEstimate::from_parts(parts, seed, plan))
}

/// Estimate of `E[‖M‖_op^p]`.
pub fn mc_opnorm_moment(ens: &Ensemble, d: usize, p: f64, samples: usize, seed: u64, plan: ChunkPlan) -> Result<MCEstimate> {
    check_samples(samples, 100)?;
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut w = Welford::default();
        for _ in 0..count {
            w.push(draw_op_norm(ens, d, rng)?.powf(p));
        }
        Ok(w)
    });
    collect_parts(parts, seed, plan)
}

/// `E[‖M‖^q]^{1/q} / E[‖M‖]` on a common set of draws.
pub fn opnorm_moment_ratio(ens: &Ensemble, d: usize, q: f64, samples: usize, seed: u64, plan: ChunkPlan) -> Result<f64> {
    check_samples(samples, 100)?;
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut a = Welford::default();
        let mut b = Welford::default();
        for _ in 0..count {
            let v = draw_op_norm(ens, d, rng)?;
            a.push(v);
            b.push(v.powf(q));
        }
        Ok((a, b))
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let (mut a, mut b) = (Welford::default(), Welford::default());
    for (x, y) in &parts {
        a.merge(x);
        b.merge(y);
    }
    Ok(b.mean.powf(1.0 / q) / a.mean)
}

/// `σ(E|M|)` from the sample average of `|M|`.  The standard error is the
/// spread of the per-chunk values divided by the square root of the chunk
/// count.
pub fn mc_sigma_expected_abs(ens: &Ensemble, d: usize, samples: usize, seed: u64, plan: ChunkPlan) -> Result<MCEstimate> {
    check_samples(samples, 100)?;
    let parts = run_chunks(samples, seed, plan, |rng, count| -> Result<(CMat, usize)> {
        let mut acc = CMat::zeros(d, d);
        for _ in 0..count {
            match sample_real(ens, d, rng) {
                Some(m) => acc += matrix_abs_real(&m)?.map(|x| Complex64::new(x, 0.0)),
                None => acc += matrix_abs(&sample(ens, d, rng))?,
            }
        }
        Ok((acc, count))
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let mut total = CMat::zeros(d, d);
    let mut chunk_sigma = Welford::default();
    for (acc, count) in &parts {
        total += acc;
        chunk_sigma.push(smallest_singular(&(acc / Complex64::new(*count as f64, 0.0)))?);
    }
    let mean = smallest_singular(&(total / Complex64::new(samples as f64, 0.0)))?;
    let stderr = if parts.len() > 1 { chunk_sigma.stderr() } else { 0.0 };
    Ok(MCEstimate { mean, stderr, count: samples as u64, seed, chunk_size: plan.chunk_size })
}

/// Monte Carlo check of `E tr(PA) = 0` and `E|tr(PA)|² = tr(A*A)/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceIdentity {
    pub d: usize,
    pub first_re: MCEstimate,
    pub first_im: MCEstimate,
    pub second: MCEstimate,
    pub second_target: f64,
}

impl TraceIdentity {
    /// Both identities within `k` standard errors.
    pub fn holds(&self, k: f64) -> bool {
        self.first_re.within(0.0, k) && self.first_im.within(0.0, k) && self.second.within(self.second_target, k)
    }
}

pub fn haar_trace_identities(ens: &Ensemble, a: &CMat, samples: usize, seed: u64, plan: ChunkPlan) -> TraceIdentity {
    let d = a.nrows();
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut w = [Welford::default(); 3];
        for _ in 0..count {
            let t = (sample(ens, d, rng) * a).trace();
            w[0].push(t.re);
            w[1].push(t.im);
            w[2].push(t.norm_sqr());
        }
        w
    });
    let pick = |i: usize| MCEstimate::from_parts(parts.iter().map(|w| w[i]).collect(), seed, plan);
    let target = (a.adjoint() * a).trace().re / d as f64;
    TraceIdentity { d, first_re: pick(0), first_im: pick(1), second: pick(2), second_target: target }
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (mut i, mut j, mut dmax) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        dmax = dmax.max((i as f64 / x.len() as f64 - j as f64 / y.len() as f64).abs());
    }
    dmax
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

/// Compares the laws of `tr(PMA)` and `tr(MA)` on independent draws of `M`.
pub fn orthogonal_invariance_ks(ens: &Ensemble, p: &RMat, a: &RMat, draws: usize, seed: u64, plan: ChunkPlan) -> KsReport {
    let d = a.nrows();
    let run = |stream_seed: u64, left: bool| -> Vec<f64> {
        run_chunks(draws, stream_seed, plan, |rng, count| {
            (0..count)
                .map(|_| {
                    let m = sample_real(ens, d, rng).expect("real ensemble");
                    if left {
                        (p * m * a).trace()
                    } else {
                        (m * a).trace()
                    }
                })
                .collect::<Vec<_>>()
        })
        .concat()
    };
    let x = run(crate::mc::derive_seed(seed, "ks-left"), true);
    let y = run(crate::mc::derive_seed(seed, "ks-right"), false);
    let statistic = ks_statistic(&x, &y);
    let n = draws as f64;
    let critical = crate::constants::KS_C_ALPHA_1PCT * (2.0 / n).sqrt();
    KsReport { statistic, critical, pass: statistic <= critical }
}

/// Latała's three-term bound for `E‖(a_ij g_ij)‖_op`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatalaReport {
    pub lhs: MCEstimate,
    pub rhs: f64,
    pub ratio: f64,
}

/// Weight matrix with i.i.d. uniform entries kept with probability `density`.
pub fn sparse_weights(d: usize, density: f64, rng: &mut StreamRng) -> RMat {
    RMat::from_fn(d, d, |_, _| if rng.random::<f64>() < density { rng.random::<f64>() } else { 0.0 })
}

pub fn latala_bound(a: &RMat) -> f64 {
    let rows = a.row_iter().map(|r| r.norm()).fold(0.0, f64::max);
    let cols = a.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let quart = a.iter().map(|x| x.powi(4)).sum::<f64>().powf(0.25);
    rows + cols + quart
}

pub fn latala_check(a: &RMat, samples: usize, seed: u64, plan: ChunkPlan) -> Result<LatalaReport> {
    let (r, c) = a.shape();
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut w = Welford::default();
        for _ in 0..count {
            let m = RMat::from_fn(r, c, |i, j| a[(i, j)] * rng.sample::<f64, _>(StandardNormal));
            w.push(op_norm_real(&m)?);
        }
        Ok(w)
    });
    let lhs = collect_parts(parts, seed, plan)?;
    let rhs = latala_bound(a);
    Ok(LatalaReport { lhs, rhs, ratio: lhs.mean / rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream_rng;

    #[test]
    fn haar_is_orthogonal() {
        let mut rng = stream_rng(1, 0);
        for d in [1usize, 3, 12] {
            let q = haar_orthogonal(d, &mut rng);
            let e = (q.transpose() * &q - RMat::identity(d, d)).amax();
            assert!(e <= 1e-12);
            let u = haar_unitary(d, &mut rng);
            let e = (u.adjoint() * &u - CMat::identity(d, d)).map(|z| z.norm()).max();
            assert!(e <= 1e-12);
        }
    }

    #[test]
    fn diagonal_functionals() {
        let d = CMat::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 2.0),
        ]));
        assert!((op_norm(&d).unwrap() - 3.0).abs() < 1e-12);
        assert!((smallest_singular(&d).unwrap() - 0.5).abs() < 1e-12);
        let a = matrix_abs(&d).unwrap();
        for (i, v) in [3.0, 0.5, 2.0].iter().enumerate() {
            assert!((a[(i, i)].re - v).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_abs_is_identity() {
        let mut rng = stream_rng(5, 0);
        let q = sample(&Ensemble::HaarUnitary, 6, &mut rng);
        let a = matrix_abs(&q).unwrap();
        assert!((a - CMat::identity(6, 6)).map(|z| z.norm()).max() < 1e-10);
        assert!((op_norm(&q).unwrap() - 1.0).abs() < 1e-12);
        assert!((smallest_singular(&q).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heavytail_atom_and_tail() {
        let p = 4.0;
        let mut rng = stream_rng(11, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| heavytail_sample(p, &mut rng)).collect();
        for t in [std::f64::consts::E, 5.0] {
            let s = heavytail_survival(p, t);
            let hits = xs.iter().filter(|x| x.abs() >= t).count() as f64 / n as f64;
            let sd = (s * (1.0 - s) / n as f64).sqrt();
            assert!((hits - s).abs() <= 3.0 * sd + 1e-12, "t={t} {hits} vs {s}");
        }
        assert!(xs.iter().all(|x| *x == 0.0 || x.abs() >= std::f64::consts::E * (1.0 - 1e-12)));
        let q = heavytail_quantile(p, 1e-5);
        assert!((heavytail_survival(p, q) / 1e-5 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn heavytail_second_moment() {
        let e2 = Law::HeavyTail(4.0).second_moment();
        assert!((e2 - 2.5 * (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.5).collect();
        assert!((ks_statistic(&a, &b) - 0.5).abs() < 2e-3);
        assert_eq!(ks_statistic(&a, &a), 0.0);
    }

    #[test]
    fn ensemble_parse() {
        assert_eq!(Ensemble::parse("haar-o").unwrap(), Ensemble::HaarOrthogonal);
        assert_eq!(Ensemble::parse("heavytail:4").unwrap(), Ensemble::IidEntries { law: Law::HeavyTail(4.0) });
        assert_eq!(Ensemble::parse("haar-x-rademacher").unwrap(), Ensemble::HaarTimesIid { law: Law::Rademacher });
        assert!(Ensemble::parse("heavytail:1").is_err());
        assert!(Ensemble::parse("cauchy").is_err());
    }

    #[test]
    fn orthogonal_moment_is_one() {
        let e = mc_opnorm_moment(&Ensemble::HaarOrthogonal, 7, 3.0, 100, 3, ChunkPlan::default()).unwrap();
        assert!((e.mean - 1.0).abs() < 1e-12);
        assert!(mc_opnorm_moment(&Ensemble::HaarOrthogonal, 7, 3.0, 99, 3, ChunkPlan::default()).is_err());
        let s = mc_sigma_expected_abs(&Ensemble::HaarOrthogonal, 5, 100, 3, ChunkPlan::default()).unwrap();
        assert!((s.mean - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scalar_rademacher_abs() {
        let e = Ensemble::IidEntries { law: Law::Rademacher };
        let s = mc_sigma_expected_abs(&e, 1, 200, 8, ChunkPlan::default()).unwrap();
        assert!((s.mean - 1.0).abs() < 1e-12);
    }
}
