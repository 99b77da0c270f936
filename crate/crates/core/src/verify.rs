//! The verification suite: fourteen numbered criteria plus supplementary
//! groups exercising the remaining operations, with a coverage map.
//!
//! Every stochastic quantity is drawn from a stream derived from the suite
//! seed and a fixed label, so reports are bit-identical across thread counts.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::calibrate::{closed_form_cells, closed_form_ratios, ls_slope, muckenhoupt_error_ratio};
use crate::constants::*;
use crate::mc::{derive_seed, stream_rng, ChunkPlan};
use crate::measure::{sphere_area, QuadratureRule, SampledFunction};
use crate::plp::*;
use crate::randmat::{
    haar_trace_identities, heavytail_sample, heavytail_survival, latala_check, matrix_abs_real, mc_opnorm_moment,
    mc_sigma_expected_abs, opnorm_moment_ratio, orthogonal_invariance_ks, sample_real, sparse_weights, CMat, Ensemble,
    Law, RMat,
};
use crate::report::{Check, GroupResult, SuiteReport, SCHEMA_VERSION};
use crate::series::*;
use crate::specfun::*;
use crate::spectral::*;
use crate::{Complex64, Error, Result};

/// Every library operation the suite is expected to reach.
pub const ALL_OPS: &[&str] = &[
    "hermite_h",
    "hermite_zero",
    "jacobi_p",
    "phi_fn",
    "muckenhoupt_main",
    "y_norm_const",
    "zonal_z",
    "jacobi_band_constant",
    "sphere_area",
    "integrate_zonal",
    "integrate_band",
    "integrate_radial",
    "lp_norm",
    "weak_lp_quasinorm",
    "dim_e",
    "osc_spectral",
    "osc_concentration_report",
    "sqrt_spectral_lp",
    "tilde_profiles",
    "zonal_lp_profile",
    "sample",
    "heavytail_sample",
    "matrix_abs",
    "mc_opnorm_moment",
    "mc_sigma_expected_abs",
    "sample_series",
    "mc_lp_moment",
    "kkmp_ratio",
    "universality_ratio",
    "contraction_check",
    "torus_salem_zygmund",
    "heavytail_divergence_demo",
    "plp_norm_quadrature",
    "y_closed_form",
    "z_closed_form",
    "hermite_closed_form",
    "sobolev_norm",
    "critical_exponent",
    "interpolation_defect",
    "holder_witness",
    "hypothesis_checks",
    "embedding_sweep",
    "r_boundedness_counterexample",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Reduced sample counts and grids, for smoke tests.
    pub quick: bool,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, quick: false }
    }

    pub fn samples(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }

    fn seed_for(&self, label: &str) -> u64 {
        derive_seed(self.seed, label)
    }
}

const PLAN: ChunkPlan = ChunkPlan { chunk_size: 64 };

type Runner = fn(&VerifyConfig, &mut GroupResult) -> Result<()>;

/// Numbered criteria: id, title, runner.
pub const CRITERIA: &[(u32, &str, Runner)] = &[
    (1, "special functions", c01_special_functions),
    (2, "spectral normalization", c02_normalization),
    (3, "oscillator concentration", c03_concentration),
    (4, "norm exponents", c04_norm_exponents),
    (5, "Haar trace identities", c05_haar_identities),
    (6, "Hilbert-Schmidt identity", c06_hs_identity),
    (7, "random-matrix moments", c07_randmat_moments),
    (8, "universality", c08_universality),
    (9, "closed-form equivalences", c09_closed_forms),
    (10, "interpolation defect and Holder witness", c10_interpolation),
    (11, "square-function counterexample", c11_counterexample),
    (12, "torus Salem-Zygmund", c12_salem_zygmund),
    (13, "critical exponent", c13_critical_exponent),
    (14, "determinism", c14_determinism),
];

/// Supplementary groups: id, title, runner.
pub const SUPPLEMENTARY: &[(&str, &str, Runner)] = &[
    ("s1", "oscillator spectral function", s1_oscillator),
    ("s2", "sphere profiles", s2_sphere_profiles),
    ("s3", "random matrices", s3_random_matrices),
    ("s4", "random series", s4_series),
    ("s5", "PL^p structure", s5_plp),
];

fn run_group(id: String, title: &str, f: Runner, cfg: &VerifyConfig) -> GroupResult {
    let mut g = GroupResult::new(id, title);
    if let Err(e) = f(cfg, &mut g) {
        g.fail_with(&e);
    }
    g
}

/// Criterion ids selected by `suite`: `all`, or a comma list of numbers.
pub fn parse_suite(suite: &str) -> Result<Vec<u32>> {
    if suite == "all" {
        return Ok(CRITERIA.iter().map(|c| c.0).collect());
    }
    suite
        .split(',')
        .map(|s| {
            let id: u32 = s.trim().parse().map_err(|_| Error::Domain(format!("unknown suite element {s:?}")))?;
            if CRITERIA.iter().any(|c| c.0 == id) {
                Ok(id)
            } else {
                Err(Error::Domain(format!("no criterion {id}")))
            }
        })
        .collect()
}

/// Run the selected criteria; the supplementary groups run with `all`.
pub fn run_suite(suite: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let ids = parse_suite(suite)?;
    let criteria: Vec<GroupResult> = CRITERIA
        .iter()
        .filter(|c| ids.contains(&c.0))
        .map(|&(id, title, f)| run_group(id.to_string(), title, f, cfg))
        .collect();
    let mut supplementary: Vec<GroupResult> = if suite == "all" {
        SUPPLEMENTARY.iter().map(|&(id, title, f)| run_group(id.into(), title, f, cfg)).collect()
    } else {
        Vec::new()
    };
    let mut coverage: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for g in criteria.iter().chain(&supplementary) {
        for op in &g.ops {
            coverage.entry(op.clone()).or_default().push(g.id.clone());
        }
    }
    if suite == "all" {
        let mut g = GroupResult::new("coverage", "every operation exercised");
        for op in ALL_OPS {
            g.push(Check::truth(format!("covered {op}"), coverage.contains_key(*op)));
        }
        supplementary.push(g);
    }
    let pass = criteria.iter().chain(&supplementary).all(|g| g.pass);
    Ok(SuiteReport { schema_version: SCHEMA_VERSION, suite: suite.into(), seed: cfg.seed, pass, criteria, supplementary, coverage })
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0f64, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// `|mean − target| / stderr`, zero when both vanish.
fn z_score(est: &crate::MCEstimate, target: f64) -> f64 {
    let diff = (est.mean - target).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / est.stderr
    }
}

fn log_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..points)
        .map(|i| ((lo as f64).ln() + ((hi as f64).ln() - (lo as f64).ln()) * i as f64 / (points - 1) as f64).exp().round() as usize)
        .collect();
    v.dedup();
    v
}

fn c01_special_functions(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["hermite_h", "hermite_zero", "muckenhoupt_main", "phi_fn"]);
    let worst = max_abs((0..=500).map(|k| {
        let z: f64 = hermite_zero(k);
        (hermite_h(2 * k, 0.0) - z) / z.abs().max(1.0)
    }));
    g.push(Check::at_most("h_2k(0) recurrence vs closed form, k <= 500", worst, 1e-10));

    let n_gram = 50;
    let l = ((2 * n_gram + 1) as f64).sqrt() + 12.0;
    let rule = QuadratureRule::<f64>::interval(-l, l, 48, crate::measure::PANEL_ORDER);
    let mut gram = vec![vec![0.0; n_gram + 1]; n_gram + 1];
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let h = hermite_all(n_gram, x[0]);
        for i in 0..=n_gram {
            for j in 0..=i {
                gram[i][j] += w * h[i] * h[j];
            }
        }
    }
    let off = max_abs((0..=n_gram).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| gram[i][j] - if i == j { 1.0 } else { 0.0 }));
    g.push(Check::at_most("Gram matrix of h_0..h_50 minus identity", off, 1e-8));

    let points = if cfg.quick { 50 } else { 400 };
    let step = if cfg.quick { 10 } else { 1 };
    let c = muckenhoupt_error_ratio(300, step, points)?;
    g.push(Check::at_most("oscillatory approximation error / (2n+1)^{1/2}(2n+1-x^2)^{-7/4}, n <= 300", c, MUCKENHOUPT_C));
    Ok(())
}

fn c02_normalization(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["dim_e", "integrate_zonal", "integrate_band", "integrate_radial", "osc_spectral", "sphere_area"]);
    let step = if cfg.quick { 17 } else { 1 };
    let mut families = vec![Family::TorusFourier];
    for d in [2usize, 3] {
        families.extend([Family::HermiteOscillator { d }, Family::SphereHighest { d }, Family::SphereZonal { d }]);
    }
    for f in families {
        let mut worst = 0.0f64;
        let mut flagged = 0usize;
        for n in (f.first_level()..=100).step_by(step) {
            let m = density_mass(f, n)?;
            worst = worst.max((m.value - 1.0).abs());
            flagged += usize::from(!m.converged);
        }
        let name = format!("{} d={}", f.label(), f.d());
        g.push(Check::at_most(format!("{name}: max |mass - 1|, n <= 100"), worst, 1e-6));
        g.push(Check::at_most(format!("{name}: unconverged integrals"), flagged as f64, 0.0));
    }
    let mut worst = 0.0f64;
    for d in [2usize, 3] {
        for n in [0usize, 1, 5, 20, 50, 100] {
            let turn = ((2 * n + 1) as f64).sqrt();
            for i in 0..=20 {
                let r = 1.5 * turn * i as f64 / 20.0;
                worst = worst.max((osc_spectral(d, n, r) - osc_spectral_dual(d, n, r)).abs());
            }
        }
    }
    g.push(Check::at_most("two recursion orders of the oscillator spectral function", worst, 1e-8));
    Ok(())
}

fn c03_concentration(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["osc_concentration_report", "osc_spectral"]);
    let ns: &[usize] = if cfg.quick { &[50, 100] } else { &[50, 100, 200, 400] };
    let (lo, hi) = OSC_ANNULUS_BAND;
    for d in [2usize, 3] {
        for &n in ns {
            let r = osc_concentration_report(d, n, 0.2, ConcentrationOptions::default())?;
            g.push(Check::at_least(format!("d={d} n={n}: annulus min ratio"), r.min_ratio, lo));
            g.push(Check::at_most(format!("d={d} n={n}: annulus max ratio"), r.max_ratio, hi));
            g.push(Check::at_most(format!("d={d} n={n}: Gaussian-weighted tail max"), r.tail_max, OSC_TAIL_BOUND));
            g.diag(format!("d={d} n={n} inner max"), r.inner_max);
        }
    }
    Ok(())
}

fn slope_check(g: &mut GroupResult, name: String, ns: &[usize], values: &[f64], expected: f64) {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let s = ls_slope(&xs, &ys);
    g.push(Check::band(name, s, expected - SLOPE_TOL, expected + SLOPE_TOL));
}

fn c04_norm_exponents(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["sqrt_spectral_lp", "zonal_lp_profile", "y_norm_const", "zonal_z", "jacobi_p"]);
    let ns = log_grid(20, 400, if cfg.quick { 4 } else { 9 });
    for d in [2usize, 3] {
        let df = d as f64;
        for p in [3.0, 4.0, 6.0, 10.0] {
            let vals: Vec<f64> = ns
                .iter()
                .map(|&n| sqrt_spectral_lp(Family::HermiteOscillator { d }, n, p).map(|i| i.value))
                .collect::<Result<_>>()?;
            slope_check(g, format!("oscillator d={d} p={p}"), &ns, &vals, 0.5 * (df / 2.0 - 1.0 + df / p));
            let vals: Vec<f64> = ns.iter().map(|&n| y_lp_power_exact(d, n, p).powf(1.0 / p)).collect();
            slope_check(g, format!("highest d={d} p={p}"), &ns, &vals, (df - 1.0) / 2.0 * (0.5 - 1.0 / p));
        }
        let pc = zonal_critical_p(d);
        let ps: &[f64] = if d == 2 { &[2.5, 3.0, 5.0, 6.0, 8.0] } else { &[2.5, 4.0, 5.0, 6.0, 8.0] };
        for &p in ps {
            let vals: Vec<f64> = ns.iter().map(|&n| zonal_lp_profile(d, n, p).map(|i| i.value)).collect::<Result<_>>()?;
            let expected = if p < pc { 0.0 } else { (df - 1.0) / 2.0 - df / p };
            slope_check(g, format!("zonal d={d} p={p}"), &ns, &vals, expected);
        }
        // logarithmic law at the critical exponent
        let vals: Vec<f64> = ns.iter().map(|&n| zonal_lp_profile(d, n, pc).map(|i| i.value)).collect::<Result<_>>()?;
        let xs: Vec<f64> = ns.iter().map(|&n| ((n + 1) as f64).ln().ln()).collect();
        let ys: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
        let s = ls_slope(&xs, &ys);
        g.push(Check::band(format!("zonal d={d} p={pc}: exponent of ln(n+1)"), s, 0.5 - SLOPE_TOL, 0.5 + SLOPE_TOL));
        g.diag(format!("zonal d={d} critical: 1/p"), 1.0 / pc);
        let pw: Vec<f64> = vals.iter().map(|v| v.powf(pc)).collect();
        let xs: Vec<f64> = ns.iter().map(|&n| ((n + 1) as f64).ln()).collect();
        g.diag(format!("zonal d={d} critical: d(norm^p)/d ln(n+1)"), ls_slope(&xs, &pw));
    }
    Ok(())
}

fn random_matrix(d: usize, rng: &mut crate::mc::StreamRng) -> CMat {
    CMat::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn c05_haar_identities(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["sample"]);
    let samples = cfg.samples(100_000, 4_000);
    let mut rng = stream_rng(cfg.seed_for("c5-matrices"), 0);
    for d in [2usize, 5, 20] {
        let a = random_matrix(d, &mut rng);
        for ens in [Ensemble::HaarOrthogonal, Ensemble::HaarUnitary] {
            let t = haar_trace_identities(&ens, &a, samples, cfg.seed_for(&format!("c5-{}-{d}", ens.label())), PLAN);
            let name = format!("{} d={d}", ens.label());
            g.push(Check::at_most(format!("{name}: E tr(PA) real part, sigmas"), z_score(&t.first_re, 0.0), SIGMA_BAND));
            g.push(Check::at_most(format!("{name}: E tr(PA) imaginary part, sigmas"), z_score(&t.first_im, 0.0), SIGMA_BAND));
            g.push(Check::at_most(format!("{name}: E|tr(PA)|^2, sigmas"), z_score(&t.second, t.second_target), SIGMA_BAND));
        }
    }
    Ok(())
}

fn c06_hs_identity(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["sample"]);
    let samples = cfg.samples(20_000, 2_000);
    let mut rng = stream_rng(cfg.seed_for("c6-dims"), 0);
    for i in 0..5 {
        let levels = rng.random_range(2..=4);
        let dims: Vec<usize> = (0..levels).map(|_| rng.random_range(1..=6)).collect();
        let ens = if i % 2 == 0 { Ensemble::HaarOrthogonal } else { Ensemble::HaarUnitary };
        let r = hs_identity_check(&dims, &ens, samples, cfg.seed_for(&format!("c6-{i}")), PLAN);
        g.push(Check::at_most(format!("instance {i} dims {dims:?} {}: sigmas", ens.label()), z_score(&r.estimate, r.target), SIGMA_BAND));
    }
    Ok(())
}

fn c07_randmat_moments(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["mc_opnorm_moment", "mc_sigma_expected_abs", "sample", "heavytail_sample", "matrix_abs"]);
    let rad = Ensemble::IidEntries { law: Law::Rademacher };
    let dims: &[usize] = if cfg.quick { &[20, 40] } else { &[20, 50, 100, 200] };
    let samples = cfg.samples(200, 100);
    for p in [1.0, 2.0] {
        let vals: Vec<f64> = dims
            .iter()
            .map(|&d| mc_opnorm_moment(&rad, d, p, samples, cfg.seed_for(&format!("c7-rad-{d}-{p}")), PLAN).map(|e| e.mean.powf(1.0 / p)))
            .collect::<Result<_>>()?;
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        g.push(Check::at_most(format!("Rademacher E^(1/{p}) ||M||^{p} spread over d"), hi / lo - 1.0, OPNORM_SPREAD));
    }
    let d_ratio = if cfg.quick { 20 } else { 50 };
    for q in [2.0, 4.0, 8.0] {
        let r = opnorm_moment_ratio(&rad, d_ratio, q, samples, cfg.seed_for(&format!("c7-ratio-{q}")), PLAN)?;
        g.push(Check::at_most(format!("moment ratio q={q}, d={d_ratio}"), r, KKMP_K * q.sqrt()));
    }
    for d in [5usize, 20, 50] {
        let s = mc_sigma_expected_abs(&rad, d, samples, cfg.seed_for(&format!("c7-sigma-{d}")), PLAN)?;
        g.push(Check::at_least(format!("sigma(E|M|) d={d}"), s.mean, SIGMA_ABS_FLOOR));
    }
    let heavy = Ensemble::IidEntries { law: Law::HeavyTail(4.0) };
    let (d_lo, d_hi) = if cfg.quick { (20, 40) } else { (20, 200) };
    let small = mc_opnorm_moment(&heavy, d_lo, 1.0, samples, cfg.seed_for("c7-heavy-lo"), PLAN)?;
    let large = mc_opnorm_moment(&heavy, d_hi, 1.0, samples, cfg.seed_for("c7-heavy-hi"), PLAN)?;
    g.diag(format!("heavy tail E||M|| d={d_lo}"), small.mean);
    g.diag(format!("heavy tail E||M|| d={d_hi}"), large.mean);
    g.push(Check::at_least(format!("heavy tail p=4 growth d={d_lo} to d={d_hi}"), large.mean / small.mean, HEAVYTAIL_GROWTH));
    Ok(())
}

/// The four standard ensembles of the universality comparison.
pub fn standard_ensembles() -> [Ensemble; 4] {
    [
        Ensemble::HaarOrthogonal,
        Ensemble::HaarUnitary,
        Ensemble::IidEntries { law: Law::Gaussian },
        Ensemble::HaarTimesIid { law: Law::Rademacher },
    ]
}

/// Families of the universality test matrix.
pub fn universality_families() -> [Family; 3] {
    [Family::HermiteOscillator { d: 2 }, Family::SphereHighest { d: 2 }, Family::SphereZonal { d: 2 }]
}

pub const UNIVERSALITY_DECAY: f64 = 1.0;

fn c08_universality(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["universality_ratio", "mc_lp_moment", "sample_series", "plp_norm_quadrature", "sample", "lp_norm"]);
    let samples = cfg.samples(200, 40);
    let ns: &[usize] = if cfg.quick { &[5, 10] } else { &[5, 10, 20] };
    let ps = [2.0, 4.0, 6.0];
    let ens = standard_ensembles();
    for f in universality_families() {
        // ratio[n][row]
        let mut table = Vec::new();
        for &n in ns {
            let grid = Arc::new(SeriesGrid::new(f, n)?);
            let coeffs = power_law_coefficients(f, n, UNIVERSALITY_DECAY, cfg.seed_for("c8-coefficients"))?;
            let spec = RandomSeriesSpec::new(f, coeffs, ens[0], grid)?;
            let rows = universality_ratio(&spec, &ps, &ens, samples, cfg.seed_for(&format!("c8-{}-{n}", f.label())), PLAN)?;
            for &p in &ps {
                let r: Vec<f64> = rows.iter().filter(|r| r.p == p).map(|r| r.ratio).collect();
                let hi = r.iter().cloned().fold(0.0, f64::max);
                let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
                g.push(Check::at_most(format!("{} N={n} p={p}: max/min across ensembles", f.label()), hi / lo, UNIVERSALITY_SPREAD));
            }
            table.push(rows);
        }
        for (k, row) in table[0].iter().enumerate() {
            let vals: Vec<f64> = table.iter().map(|t| t[k].ratio).collect();
            let hi = vals.iter().cloned().fold(0.0, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            g.push(Check::at_most(format!("{} {} p={}: drift across N", f.label(), row.ensemble, row.p), hi / lo - 1.0, UNIVERSALITY_N_DRIFT));
        }
    }
    Ok(())
}

fn c09_closed_forms(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["y_closed_form", "z_closed_form", "hermite_closed_form", "plp_norm_quadrature"]);
    let count = cfg.samples(24, 20);
    for (f, p) in closed_form_cells() {
        let (lo, hi) = closed_form_band(f.label(), f.d(), p).ok_or_else(|| Error::Domain("no frozen band".into()))?;
        let r = closed_form_ratios(f, p, count, cfg.seed_for("c9-instances"))?;
        let rmin = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let rmax = r.iter().cloned().fold(0.0, f64::max);
        let name = format!("{} d={} p={p}", f.label(), f.d());
        g.push(Check::at_least(format!("{name}: smallest ratio of {count}"), rmin, lo));
        g.push(Check::at_most(format!("{name}: largest ratio of {count}"), rmax, hi));
    }
    for d in [2usize, 3] {
        let f = Family::SphereZonal { d };
        let p0 = if d == 2 { 6.0 } else { 5.0 };
        for beta in [0.5, 1.5] {
            let m = zonal_log_family(d, p0, beta);
            let member = membership(f, &m, p0)?;
            g.push(Check::truth(format!("zonal d={d} log family beta={beta}: member at p0={p0} iff beta > 1"), member == (beta > 1.0)));
            let slope = zonal_summand_log_slope(d, &m, p0, 8, 20)?;
            g.diag(format!("zonal d={d} beta={beta}: fitted log exponent of the summand"), -slope);
        }
    }
    Ok(())
}

fn random_profile(rng: &mut crate::mc::StreamRng, rule: &Arc<crate::Rule>) -> Result<crate::Sampled> {
    let c: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    let cut = rng.random_range(0.5..1.0);
    SampledFunction::from_fn(rule.clone(), move |x| {
        if x[0] > cut {
            return 0.0;
        }
        c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * PI * x[0]).cos()).sum::<f64>().exp()
    })
}

fn c10_interpolation(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["interpolation_defect", "holder_witness", "lp_norm"]);
    let rule_ind = profile_rule(0.0, 1.25, 4);
    let ind_exact = SampledFunction::from_fn(rule_ind, |_| 3.0)?;
    let q = interpolation_defect(&ind_exact, 2.0, 6.0, 64)?.q;
    g.push(Check::at_most("Q(3 * 1_[0,1.25], [2,6]) - 1", (q - 1.0).abs(), 1e-6));

    let oracle = interpolation_defect_with(|p| (PI / p).powf(0.5 / p), 2.0, 4.0, 64)?;
    let gauss_rule = profile_rule(-9.0, 9.0, 40);
    let gauss = SampledFunction::from_fn(gauss_rule, |x| (-x[0] * x[0]).exp())?;
    let quad = interpolation_defect(&gauss, 2.0, 4.0, 64)?;
    g.push(Check::at_most("Gaussian Q quadrature vs closed-form norms", (quad.q - oracle.q).abs(), 1e-4));
    g.diag("Gaussian Q on [2,4]", oracle.q);

    let mut rng = stream_rng(cfg.seed_for("c10-profiles"), 0);
    let rule = profile_rule(0.0, 1.0, 8);
    for i in 0..10 {
        let phi = random_profile(&mut rng, &rule)?;
        let p1: f64 = rng.random_range(1.5..3.0);
        let q1 = p1 / (p1 - 1.0);
        let p2 = rng.random_range(q1.max(p1 + 0.5)..8.0);
        let w = holder_witness(&phi, p1, p2)?;
        let qr = w.q.powf(w.r);
        let name = format!("profile {i} [{p1:.3}, {p2:.3}]");
        g.push(Check::at_most(format!("{name}: |pairing - 1|"), (w.pairing - 1.0).abs(), 1e-6));
        g.push(Check::at_most(format!("{name}: |phi|_p1 |psi|_q1 - Q^r"), w.products[0] - qr, 1e-6));
        g.push(Check::at_most(format!("{name}: |phi|_p2 |psi|_q2 - Q^r"), w.products[1] - qr, 1e-6));
        g.push(Check::at_most(format!("{name}: pointwise bound at q1"), w.pointwise_excess[0], 1e-6));
        g.push(Check::at_most(format!("{name}: pointwise bound at q2"), w.pointwise_excess[1], 1e-6));
        // interpolation lower bound at every grid exponent
        let (n1, n2) = (phi.lp_norm(p1), phi.lp_norm(p2));
        let worst = (0..=32)
            .map(|k| {
                let p = 1.0 / (1.0 / p2 + (1.0 / p1 - 1.0 / p2) * k as f64 / 32.0);
                let t1 = theta1(p1, p, p2);
                n1.powf(t1) * n2.powf(1.0 - t1) / w.q / phi.lp_norm(p)
            })
            .fold(0.0, f64::max);
        g.push(Check::at_most(format!("{name}: interpolation lower bound"), worst, 1.0 + 1e-9));
    }
    Ok(())
}

fn c11_counterexample(_cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["r_boundedness_counterexample"]);
    for p in [3.0, 4.0, 6.0] {
        let mut worst = 0.0f64;
        for n in 1..=64usize {
            let (s, u) = r_boundedness_counterexample(p, n)?;
            let nf = n as f64;
            worst = worst.max(((s - nf.powf(p / 2.0)) / nf.powf(p / 2.0)).abs()).max(((u - nf) / nf).abs());
        }
        g.push(Check::at_most(format!("p={p}: relative error vs (N^(p/2), N), N <= 64"), worst, 1e-12));
    }
    Ok(())
}

fn c12_salem_zygmund(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["torus_salem_zygmund"]);
    let samples = cfg.samples(200, 30);
    let top = if cfg.quick { 8 } else { 12 };
    let (lo, hi) = SALEM_ZYGMUND_BAND;
    for k in 5..=top {
        let n = 1usize << k;
        let r = torus_salem_zygmund(n, samples, 16 * n, cfg.seed_for(&format!("c12-{k}")), PLAN)?;
        g.push(Check::band(format!("N=2^{k}: E sup / sqrt(N ln N)"), r.estimate.mean, lo, hi));
        g.push(Check::at_least(format!("N=2^{k}: smallest sup / sqrt(N)"), r.min_sup_over_sqrt_n, 1.0 - 1e-9));
    }
    Ok(())
}

fn c13_critical_exponent(_cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["critical_exponent"]);
    for d in [2usize, 3] {
        let f = Family::SphereZonal { d };
        let p0s: &[f64] = if d == 2 { &[5.0, 6.0, 8.0] } else { &[4.0, 5.0, 6.0] };
        for &p0 in p0s {
            for beta in [0.5, 1.5] {
                let pc = critical_exponent(f, &zonal_log_family(d, p0, beta))?;
                g.push(Check::at_most(format!("zonal d={d} p0={p0} beta={beta}: |p_c - p0|"), (pc - p0).abs(), 1e-2));
            }
        }
        let y = Family::SphereHighest { d };
        let m = CoeffModel::PowerLog { sigma: 0.5, tau: 1.0 };
        let rejected = [2.0 + 1e-6, 2.1, 2.5, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0]
            .iter()
            .map(|&p| membership(y, &m, p))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| !b);
        g.push(Check::truth(format!("highest d={d}: 1/(sqrt(n) ln n) rejected for all p > 2"), rejected));
        g.push(Check::at_most(format!("highest d={d}: p_c of 1/(sqrt(n) ln n) minus 2"), critical_exponent(y, &m)? - 2.0, 1e-3));
    }
    Ok(())
}

/// Stochastic subset rerun under one and eight worker threads.
fn determinism_probe(cfg: &VerifyConfig) -> Result<String> {
    let mut g = GroupResult::new("probe", "determinism probe");
    let sub = VerifyConfig { seed: cfg.seed, quick: true };
    c06_hs_identity(&sub, &mut g)?;
    c12_salem_zygmund(&VerifyConfig { seed: cfg.seed ^ 1, quick: true }, &mut g)?;
    let f = Family::SphereHighest { d: 2 };
    let grid = Arc::new(SeriesGrid::new(f, 6)?);
    let spec = RandomSeriesSpec::new(f, power_law_coefficients(f, 6, 1.0, cfg.seed)?, Ensemble::HaarOrthogonal, grid)?;
    let est = mc_lp_moment(&spec, 4.0, 4.0, 200, cfg.seed_for("c14-series"), PLAN)?;
    g.diag("series moment", est.mean);
    g.diag("series stderr", est.stderr);
    crate::report::to_json(&g)
}

fn c14_determinism(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["mc_lp_moment"]);
    let run = |threads: usize| -> Result<String> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?
            .install(|| determinism_probe(cfg))
    };
    let (one, eight) = (run(1)?, run(8)?);
    g.push(Check::truth("stochastic probe identical under 1 and 8 threads", one == eight));
    Ok(())
}

fn s1_oscillator(_cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["osc_spectral", "sqrt_spectral_lp", "hypothesis_checks", "weak_lp_quasinorm", "lp_norm"]);
    let mut base = 0.0f64;
    for n in [0usize, 3, 10, 40] {
        for r in [0.0, 0.7, 2.5, 6.0] {
            let h: f64 = hermite_h(n, r);
            base = base.max((osc_spectral(1, n, r) - h * h).abs());
        }
    }
    g.push(Check::at_most("d=1 equals h_n(r)^2", base, 1e-14));
    let odd = max_abs([1usize, 7, 51, 199].iter().flat_map(|&n| [osc_spectral(2, n, 0.0), osc_spectral(3, n, 0.0)]));
    g.push(Check::at_most("odd n vanishes at the origin", odd, 1e-14));
    for d in [2usize, 3] {
        let vals: Vec<f64> = (1..=200).map(|k| osc_spectral(d, 2 * k, 0.0) * ((2 * k) as f64).powf(1.0 - d as f64 / 2.0)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        g.push(Check::band(format!("d={d}: e(n,0) n^(1-d/2), even n <= 400, smallest"), lo, OSC_ORIGIN_BAND.0, OSC_ORIGIN_BAND.1));
        g.push(Check::band(format!("d={d}: e(n,0) n^(1-d/2), even n <= 400, largest"), hi, OSC_ORIGIN_BAND.0, OSC_ORIGIN_BAND.1));
    }
    for f in [Family::HermiteOscillator { d: 2 }, Family::SphereHighest { d: 3 }, Family::SphereZonal { d: 2 }, Family::TorusFourier] {
        let worst = max_abs(
            [3usize, 17, 40]
                .iter()
                .map(|&n| Ok(sqrt_spectral_lp(f, n, 2.0)?.value - (f.dim(n)? as f64).sqrt()))
                .collect::<Result<Vec<f64>>>()?,
        );
        g.push(Check::at_most(format!("{} d={}: L^2 norm of sqrt e equals sqrt d_n", f.label(), f.d()), worst, 1e-6));
    }
    for (f, p, n) in [(Family::HermiteOscillator { d: 2 }, 4.0, 24), (Family::SphereHighest { d: 2 }, 4.0, 40), (Family::SphereZonal { d: 2 }, 6.0, 40)] {
        let h = hypothesis_checks(f, p, n)?;
        let name = format!("{} d={} p={p}", f.label(), f.d());
        g.push(Check::at_most(format!("{name}: weak norm of envelope, relative change N/2 to N"), (h.weak_norm[0] / h.weak_norm[1] - 1.0).abs(), 0.1));
        g.diag(format!("{name}: weak norm of envelope, N={n}"), h.weak_norm[0]);
        g.diag(format!("{name}: weak norm of envelope, N={}", n / 2), h.weak_norm[1]);
        g.diag(format!("{name}: strong norm of envelope, N={n}"), h.strong_norm[0]);
        g.diag(format!("{name}: strong norm of envelope, N={}", n / 2), h.strong_norm[1]);
        g.diag(format!("{name}: defect on [2, 2p]"), h.defect);
        g.diag(format!("{name}: largest duality product"), h.duality_products.iter().cloned().fold(0.0, f64::max));
    }
    Ok(())
}

fn s2_sphere_profiles(_cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["tilde_profiles", "jacobi_band_constant", "phi_fn", "sphere_area", "y_norm_const", "integrate_band"]);
    g.push(Check::at_most("area of S^2 minus 4 pi", (sphere_area::<f64>(2) - 4.0 * PI).abs(), 1e-13));
    g.push(Check::at_most("phi(1) minus pi/4", (phi_fn(1.0f64)? - PI / 4.0).abs(), 1e-15));
    for alpha in [0.0, 0.5] {
        let c = jacobi_band_constant(alpha, 60)?;
        g.push(Check::at_most(format!("band constant alpha={alpha} minus frozen value"), (c - JACOBI_BAND_CONSTANT).abs(), 1e-6));
    }
    for d in [2usize, 3] {
        let mut ratios = Vec::new();
        for n in [10usize, 50, 150, 300] {
            if let TildeProfile::Highest { .. } = tilde_profiles(Family::SphereHighest { d }, n)? {
                for p in [2.0, 4.0, 6.0] {
                    let t = tilde_profiles(Family::SphereHighest { d }, n)?.lp_norm(p)?.value;
                    ratios.push(t / y_lp_power_exact(d, n, p).powf(1.0 / p));
                }
            }
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        g.push(Check::band(format!("d={d}: surrogate over true L^p norm of Y_n, smallest"), lo, TILDE_RATIO_BAND.0, TILDE_RATIO_BAND.1));
        g.push(Check::band(format!("d={d}: surrogate over true L^p norm of Y_n, largest"), hi, TILDE_RATIO_BAND.0, TILDE_RATIO_BAND.1));
        let mut worst = 0.0f64;
        for (n1, n2) in [(3usize, 2usize), (10, 10), (40, 7)] {
            let exact = y_product_exact(d, n1, n2);
            worst = worst.max(((y_product_quadrature(d, n1, n2).value - exact) / exact).abs());
        }
        g.push(Check::at_most(format!("d={d}: closed-form product integral vs quadrature"), worst, 1e-6));
        for n in [20usize, 60] {
            let z = tilde_profiles(Family::SphereZonal { d }, n)?.lp_norm(4.0)?.value;
            g.diag(format!("d={d} n={n}: L^4 norm of the zonal surrogate"), z);
        }
    }
    Ok(())
}

fn s3_random_matrices(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["matrix_abs", "heavytail_sample", "sample"]);
    let mut rng = stream_rng(cfg.seed_for("s3"), 0);
    let m = RMat::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
    let a = matrix_abs_real(&m)?;
    g.push(Check::at_most("|M|^2 - M^T M", (&a * &a - m.transpose() * &m).amax(), 1e-12));
    let draws = cfg.samples(50_000, 5_000);
    let xs: Vec<f64> = (0..draws).map(|_| heavytail_sample(5.0, &mut rng).abs()).collect();
    for t in [1.5, 3.0, 6.0] {
        let emp = xs.iter().filter(|&&x| x > t).count() as f64 / draws as f64;
        let target = heavytail_survival(5.0, t);
        let se = (target * (1.0 - target) / draws as f64).sqrt();
        g.push(Check::at_most(format!("heavy tail p=5 survival at t={t}, sigmas"), (emp - target).abs() / se, SIGMA_BAND));
    }
    let p = crate::randmat::haar_orthogonal(5, &mut rng);
    let a5 = RMat::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
    let ks = orthogonal_invariance_ks(&Ensemble::HaarTimesIid { law: Law::Rademacher }, &p, &a5, cfg.samples(2000, 400), cfg.seed_for("s3-ks"), PLAN);
    g.push(Check::at_most("left invariance of Haar x Rademacher, KS statistic", ks.statistic, ks.critical));
    let real = sample_real(&Ensemble::ScaledOrthogonal { scale: 2.0 }, 4, &mut rng).ok_or_else(|| Error::Domain("not real".into()))?;
    let orth = (real.transpose() * &real - RMat::identity(4, 4) * 4.0).amax();
    g.push(Check::at_most("scaled orthogonal sample is 2 x orthogonal", orth, 1e-12));
    for (d, density) in [(20usize, 0.3), (60, 0.1)] {
        let w = sparse_weights(d, density, &mut rng);
        let r = latala_check(&w, cfg.samples(300, 60), cfg.seed_for(&format!("s3-latala-{d}")), PLAN)?;
        g.push(Check::at_most(format!("Gaussian weighted matrix d={d}: E||X|| / Latala bound"), r.ratio, LATALA_C));
    }
    Ok(())
}

fn s4_series(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["kkmp_ratio", "contraction_check", "heavytail_divergence_demo", "sample_series", "mc_lp_moment", "mc_sigma_expected_abs"]);
    let samples = cfg.samples(400, 200);
    for f in [Family::SphereHighest { d: 2 }, Family::HermiteOscillator { d: 2 }, Family::TorusFourier] {
        let n = 8;
        let grid = Arc::new(SeriesGrid::new(f, n)?);
        let coeffs = power_law_coefficients(f, n, 1.0, cfg.seed_for("s4-coefficients"))?;
        for ens in [Ensemble::HaarOrthogonal, Ensemble::IidEntries { law: Law::Gaussian }] {
            let spec = RandomSeriesSpec::new(f, coeffs.clone(), ens, grid.clone())?;
            for p in [2.0, 4.0] {
                let k = kkmp_ratio(&spec, p, samples, cfg.seed_for(&format!("s4-kkmp-{}-{}", f.label(), ens.label())), PLAN)?;
                let name = format!("{} {} p={p}", f.label(), ens.label());
                g.push(Check::band(format!("{name}: moment ratio"), k.ratio, 1.0 - SIGMA_BAND * k.stderr, KKMP_K * p.sqrt()));
            }
        }
        let spec = RandomSeriesSpec::new(f, coeffs, Ensemble::HaarOrthogonal, grid)?;
        let c = contraction_check(&spec, 4.0, &Ensemble::IidEntries { law: Law::Gaussian }, samples, cfg.seed_for(&format!("s4-contraction-{}", f.label())), PLAN)?;
        g.push(Check::truth(format!("{}: contraction with Gaussian matrices", f.label()), c.holds));
        g.diag(format!("{}: contraction constant", f.label()), c.c);
    }
    let rows = heavytail_divergence_demo(4.0, &[100, 1_000, 10_000, 100_000], Law::HeavyTail(4.0), cfg.samples(64, 16), cfg.seed_for("s4-divergence"))?;
    let monotone = rows.windows(2).all(|w| w[1].median_running_max >= w[0].median_running_max);
    g.push(Check::truth("running maximum is nondecreasing in N", monotone));
    for r in &rows {
        g.diag(format!("divergence N={}: median running max", r.n), r.median_running_max);
        g.diag(format!("divergence N={}: median window max", r.n), r.median_window_max);
    }
    Ok(())
}

fn s5_plp(cfg: &VerifyConfig, g: &mut GroupResult) -> Result<()> {
    g.uses(&["embedding_sweep", "sobolev_norm", "hermite_closed_form", "plp_norm_quadrature"]);
    for d in [2usize, 3] {
        for p in [3.0, 4.0, 6.0] {
            for f in [Family::HermiteOscillator { d }, Family::SphereHighest { d }, Family::SphereZonal { d }] {
                let rows = embedding_sweep(f, p)?;
                let fails = rows.iter().filter(|r| !r.pass).count();
                g.push(Check::at_most(format!("{} d={d} p={p}: failed embedding cells of {}", f.label(), rows.len()), fails as f64, 0.0));
            }
        }
    }
    let mut rng = stream_rng(cfg.seed_for("s5"), 0);
    let mut worst_dual = f64::NEG_INFINITY;
    let mut worst_hom = 0.0f64;
    for i in 0..6 {
        let f = [Family::SphereZonal { d: 2 }, Family::HermiteOscillator { d: 3 }, Family::SphereHighest { d: 2 }][i % 3];
        let first = f.first_level();
        let u: Vec<f64> = (0..12).map(|n| if n < first { 0.0 } else { rng.random::<f64>() }).collect();
        let w: Vec<f64> = (0..12).map(|n| if n < first { 0.0 } else { rng.random::<f64>() }).collect();
        let p = rng.random_range(2.5..8.0);
        let (lhs, rhs) = duality_check(f, &u, &w, p)?;
        worst_dual = worst_dual.max(lhs - rhs);
        let base = plp_norm_quadrature(f, &u, p)?.value;
        let scaled: Vec<f64> = u.iter().map(|x| 2.5 * x).collect();
        worst_hom = worst_hom.max((plp_norm_quadrature(f, &scaled, p)?.value - 2.5 * base).abs() / base);
    }
    g.push(Check::at_most("pairing minus product of norms", worst_dual, 1e-8));
    g.push(Check::at_most("homogeneity of the quadrature norm", worst_hom, 1e-13));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(parse_suite("all").unwrap().len(), 14);
        assert_eq!(parse_suite("3, 11").unwrap(), vec![3, 11]);
        assert!(parse_suite("15").is_err());
        assert!(parse_suite("x").is_err());
    }

    #[test]
    fn deterministic_criteria_pass_quickly() {
        let cfg = VerifyConfig { seed: 42, quick: true };
        let r = run_suite("9,10,11,13", &cfg).unwrap();
        for g in &r.criteria {
            assert!(g.pass, "{g:#?}");
        }
        assert!(r.coverage.contains_key("holder_witness"));
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(20, 400, 9);
        assert_eq!(g[0], 20);
        assert_eq!(*g.last().unwrap(), 400);
    }
}
