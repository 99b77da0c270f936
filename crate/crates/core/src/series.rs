//! Randomized eigenfunction series: sampling, moment estimation, and the
//! universality, Kahane–Khintchine, contraction and Salem–Zygmund checks.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::Serialize;

use crate::mc::{derive_seed, run_chunks, stream_rng, ChunkPlan, MCEstimate, StreamRng, Welford};
use crate::measure::{QuadratureRule, PANEL_ORDER};
use crate::randmat::{mc_sigma_expected_abs, sample, CMat, Ensemble, Law};
use crate::spectral::Family;
use crate::specfun::{hermite_all, y_norm_const, zonal_l2_norm, zonal_z};
use crate::{Error, Result, Rule};

/// Largest truncation supported on the two-dimensional oscillator box.
pub const HERMITE_MAX_N: usize = 30;
/// Gauss–Legendre nodes per unit length on the oscillator box.
pub const BOX_NODES_PER_UNIT: usize = 8;

/// Evaluation grid with the basis tabulated on it.
#[derive(Debug, Clone)]
pub struct SeriesGrid {
    pub family: Family,
    pub n_max: usize,
    pub rule: Arc<Rule>,
    basis: Basis,
}

#[derive(Debug, Clone)]
enum Basis {
    /// `h_k` on one axis of `[−L, L]^d`, `d ∈ {1, 2}`; rows are levels.
    Axis(DMatrix<Complex64>),
    /// One basis function per level, tabulated at every node.
    Levels(Vec<Vec<Complex64>>),
}

impl SeriesGrid {
    pub fn new(family: Family, n_max: usize) -> Result<Self> {
        family.validate()?;
        let (rule, basis) = match family {
            Family::HermiteOscillator { d } => {
                if d > 2 || n_max > HERMITE_MAX_N {
                    return Err(Error::Grid(format!(
                        "oscillator series need d <= 2 and N <= {HERMITE_MAX_N}, got d={d}, N={n_max}"
                    )));
                }
                let l = ((2 * n_max + 3) as f64).sqrt() + 4.0;
                let (xs, ws) = QuadratureRule::<f64>::box_axis(l, BOX_NODES_PER_UNIT);
                let axis = DMatrix::from_fn(n_max + 1, xs.len(), |_, _| Complex64::new(0.0, 0.0));
                let mut axis = axis;
                for (a, &x) in xs.iter().enumerate() {
                    for (k, h) in hermite_all(n_max, x).into_iter().enumerate() {
                        axis[(k, a)] = Complex64::new(h, 0.0);
                    }
                }
                let rule = if d == 2 {
                    QuadratureRule::box2(l, BOX_NODES_PER_UNIT)
                } else {
                    let nodes = xs.iter().map(|&x| [x, 0.0]).collect();
                    QuadratureRule {
                        domain: crate::measure::Domain::BoxRd { d: 1 },
                        nodes,
                        weights: ws,
                        resolution: BOX_NODES_PER_UNIT,
                    }
                };
                (rule, Basis::Axis(axis))
            }
            Family::SphereHighest { d } => {
                let panels = (4.0 * (n_max as f64).sqrt()).ceil().max(8.0) as usize;
                let rule = QuadratureRule::band(d, panels, PANEL_ORDER, 8 * (n_max + 2));
                let table = (0..=n_max)
                    .map(|n| {
                        let c: f64 = y_norm_const(d, n);
                        rule.nodes
                            .iter()
                            .map(|x: &[f64; 2]| Complex64::from_polar(c * x[0].cos().powi(n as i32), n as f64 * x[1]))
                            .collect()
                    })
                    .collect();
                (rule, Basis::Levels(table))
            }
            Family::SphereZonal { d } => {
                let panels = (20 * (n_max + 2)).div_ceil(PANEL_ORDER).max(8);
                let rule = QuadratureRule::zonal(d, panels, PANEL_ORDER);
                let table = (0..=n_max)
                    .map(|n| {
                        let norm = if n == 0 { 1.0 } else { zonal_l2_norm(d, n) };
                        rule.nodes.iter().map(|x| Complex64::new(zonal_z(d, n, x[0]) / norm, 0.0)).collect()
                    })
                    .collect();
                (rule, Basis::Levels(table))
            }
            Family::TorusFourier => {
                let rule = QuadratureRule::torus(16 * (n_max + 1));
                let table = (0..=n_max)
                    .map(|n| rule.nodes.iter().map(|x| Complex64::from_polar(1.0, n as f64 * x[0])).collect())
                    .collect();
                (rule, Basis::Levels(table))
            }
        };
        Ok(Self { family, n_max, rule: Arc::new(rule), basis })
    }

    /// Values of `Σ_n Σ_i b_{n,i} φ_{n,i}` at the nodes.
    pub fn evaluate(&self, b: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        if b.len() > self.n_max + 1 {
            return Err(Error::Grid(format!("{} levels on a grid built for N = {}", b.len() - 1, self.n_max)));
        }
        match &self.basis {
            Basis::Axis(h) => {
                let m = h.ncols();
                match self.family.d() {
                    1 => Ok((0..m)
                        .map(|a| b.iter().enumerate().filter(|(_, v)| !v.is_empty()).map(|(n, v)| v[0] * h[(n, a)]).sum())
                        .collect()),
                    _ => {
                        let k = self.n_max + 1;
                        let mut c = DMatrix::<Complex64>::zeros(k, k);
                        for (n, v) in b.iter().enumerate() {
                            if v.is_empty() {
                                continue;
                            }
                            if v.len() != n + 1 {
                                return Err(Error::Grid(format!("level {n} has {} coefficients", v.len())));
                            }
                            for (i, z) in v.iter().enumerate() {
                                c[(i, n - i)] = *z;
                            }
                        }
                        let vals = h.transpose() * c * h;
                        // row-major over (x₁, x₂) to match the box rule
                        Ok((0..m * m).map(|idx| vals[(idx / m, idx % m)]).collect())
                    }
                }
            }
            Basis::Levels(t) => {
                let mut out = vec![Complex64::new(0.0, 0.0); self.rule.len()];
                for (n, v) in b.iter().enumerate() {
                    match v.len() {
                        0 => continue,
                        1 => {
                            let z = v[0];
                            for (o, phi) in out.iter_mut().zip(&t[n]) {
                                *o += z * phi;
                            }
                        }
                        l => return Err(Error::Grid(format!("level {n} has {l} coefficients, expected 1"))),
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Coefficients, truncation, ensemble and grid of a randomized series.
#[derive(Debug, Clone)]
pub struct RandomSeriesSpec {
    pub family: Family,
    /// `coeffs[n]` holds `(⟨u_n, φ_{n,j}⟩)_j`; levels below the family's
    /// first level are empty.
    pub coeffs: Vec<Vec<Complex64>>,
    pub ensemble: Ensemble,
    pub grid: Arc<SeriesGrid>,
}

impl RandomSeriesSpec {
    pub fn new(family: Family, coeffs: Vec<Vec<Complex64>>, ensemble: Ensemble, grid: Arc<SeriesGrid>) -> Result<Self> {
        if grid.family != family {
            return Err(Error::Grid("grid built for a different family".into()));
        }
        if coeffs.is_empty() || coeffs.len() > grid.n_max + 1 {
            return Err(Error::Grid(format!("{} levels for a grid with N = {}", coeffs.len(), grid.n_max)));
        }
        for (n, c) in coeffs.iter().enumerate() {
            let want = if n < family.first_level() { 0 } else { family.dim(n)? as usize };
            if c.len() != want {
                return Err(Error::Grid(format!("level {n}: {} coefficients, expected {want}", c.len())));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Numerical(format!("non-finite coefficient at level {n}")));
            }
        }
        Ok(Self { family, coeffs, ensemble, grid })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `‖u_n‖_{L²}` per level.
    pub fn level_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect()
    }

    pub fn l2_norm(&self) -> f64 {
        self.level_norms().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn with_ensemble(&self, ensemble: Ensemble) -> Self {
        Self { ensemble, ..self.clone() }
    }
}

/// Per-level coefficient vectors with Gaussian directions and norms
/// `(1 + n)^{−decay}`.
pub fn power_law_coefficients(family: Family, n_max: usize, decay: f64, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    let mut rng = stream_rng(derive_seed(seed, "coefficients"), 0);
    (0..=n_max)
        .map(|n| {
            if n < family.first_level() {
                return Ok(Vec::new());
            }
            let dn = family.dim(n)? as usize;
            let v: Vec<f64> = (0..dn).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let s = (1.0 + n as f64).powf(-decay) / norm;
            Ok(v.into_iter().map(|x| Complex64::new(x * s, 0.0)).collect())
        })
        .collect()
}

/// One draw of `(M_n c_n)_n`.
pub fn sample_coefficients(spec: &RandomSeriesSpec, rng: &mut StreamRng) -> Vec<Vec<Complex64>> {
    spec.coeffs
        .iter()
        .map(|c| {
            if c.is_empty() {
                return Vec::new();
            }
            let m: CMat = sample(&spec.ensemble, c.len(), rng);
            let v = m * nalgebra::DVector::from_column_slice(c);
            v.iter().copied().collect()
        })
        .collect()
}

/// `|S_N|` at the grid nodes for one draw.
pub fn sample_series(spec: &RandomSeriesSpec, rng: &mut StreamRng) -> Result<crate::Sampled> {
    let vals = spec.grid.evaluate(&sample_coefficients(spec, rng))?;
    crate::Sampled::new(spec.grid.rule.clone(), vals.iter().map(|z| z.norm()).collect())
}

/// `|u|` at the grid nodes (all `M_n = I`).
pub fn deterministic_series(spec: &RandomSeriesSpec) -> Result<crate::Sampled> {
    let vals = spec.grid.evaluate(&spec.coeffs)?;
    crate::Sampled::new(spec.grid.rule.clone(), vals.iter().map(|z| z.norm()).collect())
}

fn lp_norm_complex(vals: &[Complex64], w: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    if p == 2.0 {
        return vals.iter().zip(w).map(|(z, w)| w * z.norm_sqr()).sum::<f64>().sqrt();
    }
    let h = p / 2.0;
    vals.iter().zip(w).map(|(z, w)| w * z.norm_sqr().powf(h)).sum::<f64>().powf(1.0 / p)
}

/// Welford accumulators of `‖S_N‖_{p_k}^{q_k}` on common draws.
pub fn mc_norm_powers(spec: &RandomSeriesSpec, pq: &[(f64, f64)], samples: usize, seed: u64, plan: ChunkPlan) -> Result<Vec<Welford>> {
    let w = &spec.grid.rule.weights;
    let parts = run_chunks(samples, seed, plan, |rng, count| -> Result<Vec<Welford>> {
        let mut acc = vec![Welford::default(); pq.len()];
        for _ in 0..count {
            let vals = spec.grid.evaluate(&sample_coefficients(spec, rng))?;
            for (a, &(p, q)) in acc.iter_mut().zip(pq) {
                a.push(lp_norm_complex(&vals, w, p).powf(q));
            }
        }
        Ok(acc)
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let mut out = vec![Welford::default(); pq.len()];
    for part in &parts {
        for (o, a) in out.iter_mut().zip(part) {
            o.merge(a);
        }
    }
    Ok(out)
}

/// Estimate of `E[‖S_N‖_{L^p}^q]^{1/q}`.
pub fn mc_lp_moment(spec: &RandomSeriesSpec, p: f64, q: f64, samples: usize, seed: u64, plan: ChunkPlan) -> Result<MCEstimate> {
    if samples < 50 {
        return Err(Error::Domain(format!("mc_lp_moment needs at least 50 samples, got {samples}")));
    }
    let w = mc_norm_powers(spec, &[(p, q)], samples, seed, plan)?;
    Ok(MCEstimate::from_welford(&w[0], seed, plan).root(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KkmpReport {
    pub p: f64,
    /// `E[‖S‖^p]^{1/p}`.
    pub moment_p: MCEstimate,
    /// `E‖S‖`.
    pub moment_1: MCEstimate,
    pub ratio: f64,
    /// Delta-method standard error of the ratio.
    pub stderr: f64,
}

/// `E[‖S‖_{L^p}^p]^{1/p} / E‖S‖_{L^p}`.
pub fn kkmp_ratio(spec: &RandomSeriesSpec, p: f64, samples: usize, seed: u64, plan: ChunkPlan) -> Result<KkmpReport> {
    if samples < 200 {
        return Err(Error::Domain(format!("kkmp_ratio needs at least 200 samples, got {samples}")));
    }
    let w = mc_norm_powers(spec, &[(p, p), (p, 1.0)], samples, seed, plan)?;
    let moment_p = MCEstimate::from_welford(&w[0], seed, plan).root(p);
    let moment_1 = MCEstimate::from_welford(&w[1], seed, plan);
    let ratio = moment_p.mean / moment_1.mean;
    let stderr = ratio * ((moment_p.stderr / moment_p.mean).powi(2) + (moment_1.stderr / moment_1.mean).powi(2)).sqrt();
    Ok(KkmpReport { p, moment_p, moment_1, ratio, stderr })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalityRow {
    pub ensemble: String,
    pub p: f64,
    pub q: f64,
    pub estimate: MCEstimate,
    pub plp: f64,
    pub ratio: f64,
}

/// For each ensemble and exponent, `E[‖S_N‖_p^q]^{1/q}` with `q = max(2, p)`
/// divided by the deterministic `PL^p` norm.
pub fn universality_ratio(
    spec: &RandomSeriesSpec,
    ps: &[f64],
    ensembles: &[Ensemble],
    samples: usize,
    seed: u64,
    plan: ChunkPlan,
) -> Result<Vec<UniversalityRow>> {
    for e in ensembles {
        if let Some(Law::HeavyTail(t)) = e.law() {
            let need = ps.iter().fold(2.0f64, |m, &p| m.max(p));
            if t <= need {
                return Err(Error::Domain(format!("heavy tail exponent {t} must exceed max(2, p) = {need}")));
            }
        }
    }
    let norms = spec.level_norms();
    let plp: Vec<f64> = ps
        .iter()
        .map(|&p| crate::plp::plp_norm_quadrature(spec.family, &norms, p).map(|i| i.value))
        .collect::<Result<_>>()?;
    let pq: Vec<(f64, f64)> = ps.iter().map(|&p| (p, p.max(2.0))).collect();
    let mut rows = Vec::new();
    for e in ensembles {
        let s = spec.with_ensemble(*e);
        let sub = derive_seed(seed, &e.label());
        let w = mc_norm_powers(&s, &pq, samples, sub, plan)?;
        for (k, &(p, q)) in pq.iter().enumerate() {
            let estimate = MCEstimate::from_welford(&w[k], sub, plan).root(q);
            rows.push(UniversalityRow { ensemble: e.label(), p, q, estimate, plp: plp[k], ratio: estimate.mean / plp[k] });
        }
    }
    Ok(rows)
}

/// Random multi-level Hilbert–Schmidt identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsIdentity {
    pub estimate: MCEstimate,
    /// `Σ ‖a_n‖²_HS`.
    pub target: f64,
}

/// `E|Σ √d_n tr(E_n a_n)|²` for random complex `a_n` of sizes `dims`.
pub fn hs_identity_check(dims: &[usize], ens: &Ensemble, samples: usize, seed: u64, plan: ChunkPlan) -> HsIdentity {
    let mut rng = stream_rng(derive_seed(seed, "hs-matrices"), 0);
    let a: Vec<CMat> = dims
        .iter()
        .map(|&d| {
            CMat::from_fn(d, d, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
        })
        .collect();
    let target = a.iter().map(|m| m.norm_squared()).sum();
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut w = Welford::default();
        for _ in 0..count {
            let s: Complex64 = a
                .iter()
                .map(|m| {
                    let d = m.nrows();
                    (sample(ens, d, rng) * m).trace() * (d as f64).sqrt()
                })
                .sum();
            w.push(s.norm_sqr());
        }
        w
    });
    HsIdentity { estimate: MCEstimate::from_parts(parts, seed, plan), target }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionReport {
    /// `c·E‖Σ √d_n tr(E_n b_n)‖`.
    pub lhs: f64,
    /// `E‖Σ √d_n tr(M_n b_n)‖`.
    pub rhs: f64,
    /// `min_n σ(E|M_n|)`.
    pub c: f64,
    /// Combined standard error of `rhs − lhs`.
    pub stderr: f64,
    pub holds: bool,
}

/// Contraction principle: the Haar series scaled by `min_n σ(E|M_n|)` is
/// dominated in `L¹(Ω, L^p)` by the `M`-series.
pub fn contraction_check(spec: &RandomSeriesSpec, p: f64, ensemble: &Ensemble, samples: usize, seed: u64, plan: ChunkPlan) -> Result<ContractionReport> {
    let reference = if ensemble.is_real() { Ensemble::HaarOrthogonal } else { Ensemble::HaarUnitary };
    let mut dims: Vec<usize> = spec.coeffs.iter().map(|c| c.len()).filter(|&l| l > 0).collect();
    dims.sort_unstable();
    dims.dedup();
    let mut c = f64::INFINITY;
    for d in dims {
        let s = mc_sigma_expected_abs(ensemble, d, samples.max(100), derive_seed(seed, &format!("sigma-{d}")), plan)?;
        c = c.min(s.mean);
    }
    let base = mc_lp_moment(&spec.with_ensemble(reference), p, 1.0, samples, seed, plan)?;
    let other = mc_lp_moment(&spec.with_ensemble(*ensemble), p, 1.0, samples, seed, plan)?;
    let lhs = c * base.mean;
    let rhs = other.mean;
    let stderr = (c * c * base.stderr * base.stderr + other.stderr * other.stderr).sqrt();
    let holds = lhs <= rhs + crate::constants::SIGMA_BAND * stderr + 1e-12 * rhs.abs();
    Ok(ContractionReport { lhs, rhs, c, stderr, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SalemZygmundReport {
    pub n: usize,
    pub grid_size: usize,
    /// `E[max |Σ ε_k e^{ikx}|] / √(N ln N)`, or the raw supremum when `N = 1`.
    pub estimate: MCEstimate,
    /// Set when `N ln N = 0` and no normalization was applied.
    pub zero_denominator: bool,
    /// Smallest observed `sup / √N`; at least one by Parseval.
    pub min_sup_over_sqrt_n: f64,
}

/// Random Rademacher trigonometric polynomial, supremum on an FFT grid.
pub fn torus_salem_zygmund(n: usize, samples: usize, grid_size: usize, seed: u64, plan: ChunkPlan) -> Result<SalemZygmundReport> {
    if n == 0 || grid_size < 16 * n {
        return Err(Error::Domain(format!("need N >= 1 and grid_size >= 16 N, got N={n}, grid={grid_size}")));
    }
    let denom = ((n as f64) * (n as f64).ln()).sqrt();
    let zero_denominator = denom == 0.0;
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(grid_size);
    let parts = run_chunks(samples, seed, plan, |rng, count| {
        let mut w = Welford::default();
        let mut lowest = f64::INFINITY;
        let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
        for _ in 0..count {
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for slot in buf.iter_mut().skip(1).take(n) {
                *slot = Complex64::new(Law::Rademacher.sample(rng), 0.0);
            }
            fft.process(&mut buf);
            let sup = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
            lowest = lowest.min(sup / (n as f64).sqrt());
            w.push(if zero_denominator { sup } else { sup / denom });
        }
        (w, lowest)
    });
    let lowest = parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let estimate = MCEstimate::from_parts(parts.into_iter().map(|p| p.0).collect(), seed, plan);
    Ok(SalemZygmundReport { n, grid_size, estimate, zero_denominator, min_sup_over_sqrt_n: lowest })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub n: usize,
    /// Median over trajectories of `max_{2≤k≤N} |X_k| / (k^{1/p} ln^{2/p} k)`.
    pub median_running_max: f64,
    /// Median of the same maximum restricted to `k` above the previous checkpoint.
    pub median_window_max: f64,
}

/// Growth of the normalized running maximum of i.i.d. draws of `law`.
pub fn heavytail_divergence_demo(p: f64, n_list: &[usize], law: Law, trajectories: usize, seed: u64) -> Result<Vec<DivergenceRow>> {
    if p < 2.0 {
        return Err(Error::Domain(format!("p must be >= 2, got {p}")));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.first().is_none_or(|&n| n < 2) {
        return Err(Error::Domain("checkpoints must be >= 2".into()));
    }
    let n_max = *ns.last().unwrap();
    let runs = run_chunks(trajectories, seed, ChunkPlan::new(1), |rng, _| {
        let mut running = 0.0f64;
        let mut window = 0.0f64;
        let mut out = Vec::with_capacity(ns.len());
        let mut next = 0;
        for k in 2..=n_max {
            let x = law.sample(rng).abs();
            if x != 0.0 {
                let kf = k as f64;
                let v = x / (kf.powf(1.0 / p) * kf.ln().powf(2.0 / p));
                running = running.max(v);
                window = window.max(v);
            }
            if k == ns[next] {
                out.push((running, window));
                window = 0.0;
                next += 1;
            }
        }
        out
    });
    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let m = v.len();
        if m % 2 == 1 {
            v[m / 2]
        } else {
            0.5 * (v[m / 2 - 1] + v[m / 2])
        }
    };
    Ok(ns
        .iter()
        .enumerate()
        .map(|(i, &n)| DivergenceRow {
            n,
            median_running_max: median(runs.iter().map(|r| r[i].0).collect()),
            median_window_max: median(runs.iter().map(|r| r[i].1).collect()),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, n: usize, ens: Ensemble) -> RandomSeriesSpec {
        let grid = Arc::new(SeriesGrid::new(family, n).unwrap());
        let c = power_law_coefficients(family, n, 1.0, 3).unwrap();
        RandomSeriesSpec::new(family, c, ens, grid).unwrap()
    }

    #[test]
    fn basis_is_orthonormal_on_grid() {
        for f in [Family::HermiteOscillator { d: 2 }, Family::SphereHighest { d: 2 }, Family::SphereZonal { d: 3 }, Family::TorusFourier] {
            let s = spec(f, 6, Ensemble::HaarOrthogonal);
            let u = deterministic_series(&s).unwrap();
            assert!((u.lp_norm(2.0) - s.l2_norm()).abs() < 1e-10, "{f:?}");
        }
    }

    #[test]
    fn orthogonal_draws_preserve_l2() {
        let s = spec(Family::HermiteOscillator { d: 2 }, 8, Ensemble::HaarOrthogonal);
        let mut rng = stream_rng(4, 0);
        let b = sample_coefficients(&s, &mut rng);
        for (x, y) in b.iter().zip(&s.coeffs) {
            let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
            assert!((nx - ny).abs() < 1e-12);
        }
        let e = mc_lp_moment(&s, 2.0, 2.0, 64, 1, ChunkPlan::default()).unwrap();
        assert!((e.mean - s.l2_norm()).abs() < 1e-10 && e.stderr < 1e-10);
    }

    #[test]
    fn scalar_rademacher_flips_signs() {
        let f = Family::SphereZonal { d: 2 };
        let s = spec(f, 5, Ensemble::IidEntries { law: Law::Rademacher });
        let mut rng = stream_rng(2, 0);
        let b = sample_coefficients(&s, &mut rng);
        for (x, y) in b.iter().zip(&s.coeffs).skip(1) {
            assert!((x[0] - y[0]).norm() < 1e-15 || (x[0] + y[0]).norm() < 1e-15);
        }
    }

    #[test]
    fn kkmp_single_level_is_one() {
        let f = Family::TorusFourier;
        let grid = Arc::new(SeriesGrid::new(f, 3).unwrap());
        let mut c = vec![vec![Complex64::new(0.0, 0.0)]; 4];
        c[2][0] = Complex64::new(1.5, 0.0);
        let s = RandomSeriesSpec::new(f, c, Ensemble::IidEntries { law: Law::Rademacher }, grid).unwrap();
        let r = kkmp_ratio(&s, 2.0, 200, 5, ChunkPlan::default()).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hs_identity_small() {
        let r = hs_identity_check(&[1, 2, 4], &Ensemble::HaarOrthogonal, 20_000, 6, ChunkPlan::default());
        assert!(r.estimate.within(r.target, 4.0), "{r:?}");
    }

    #[test]
    fn contraction_scaled() {
        let s = spec(Family::SphereZonal { d: 2 }, 6, Ensemble::HaarOrthogonal);
        let r = contraction_check(&s, 4.0, &Ensemble::ScaledOrthogonal { scale: 2.0 }, 100, 9, ChunkPlan::default()).unwrap();
        assert!((r.c - 2.0).abs() < 1e-10);
        assert!((r.lhs - r.rhs).abs() < 1e-9 * r.rhs);
    }

    #[test]
    fn salem_zygmund_guard_and_parseval() {
        let r = torus_salem_zygmund(1, 10, 16, 1, ChunkPlan::default()).unwrap();
        assert!(r.zero_denominator && (r.estimate.mean - 1.0).abs() < 1e-12);
        let r = torus_salem_zygmund(64, 30, 1024, 1, ChunkPlan::default()).unwrap();
        assert!(r.min_sup_over_sqrt_n >= 1.0 - 1e-12);
        assert!(torus_salem_zygmund(64, 30, 1000, 1, ChunkPlan::default()).is_err());
    }

    #[test]
    fn divergence_running_max_monotone() {
        let rows = heavytail_divergence_demo(4.0, &[100, 1000, 10_000], Law::HeavyTail(4.0), 11, 2).unwrap();
        assert!(rows.windows(2).all(|w| w[0].median_running_max <= w[1].median_running_max));
        let rad = heavytail_divergence_demo(4.0, &[100, 10_000], Law::Rademacher, 5, 2).unwrap();
        assert!(rad[1].median_window_max < rad[0].median_window_max);
    }

    #[test]
    fn grid_mismatch_is_error() {
        let f = Family::SphereZonal { d: 2 };
        let grid = Arc::new(SeriesGrid::new(f, 3).unwrap());
        assert!(RandomSeriesSpec::new(f, vec![vec![]; 6], Ensemble::HaarOrthogonal, grid.clone()).is_err());
        assert!(RandomSeriesSpec::new(f, vec![vec![], vec![Complex64::new(1.0, 0.0); 2]], Ensemble::HaarOrthogonal, grid).is_err());
        assert!(SeriesGrid::new(Family::HermiteOscillator { d: 3 }, 4).is_err());
        assert!(SeriesGrid::new(Family::HermiteOscillator { d: 2 }, 31).is_err());
    }
}
