//! Spectral functions and dimensions of the eigenspace families: harmonic
//! oscillator, highest-weight and zonal sphere harmonics, torus exponentials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::measure::{
    integrate_band_tol, integrate_radial_tol, integrate_zonal_tol, sphere_area, BandProfile, Integral,
    QuadratureRule, RadialProfile, Tolerance, ZonalProfile, PANEL_ORDER,
};
use crate::specfun::{hermite_all, jacobi_band_constant, y_norm_const, zonal_l2_norm, zonal_z};
use crate::{Error, Result, Rule};

/// `dim E_{d,n} = binom(n + d − 1, d − 1)`.
pub fn dim_e(d: usize, n: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("dim_e needs d >= 1".into()));
    }
    let mut r: u128 = 1;
    for i in 1..d as u128 {
        r = r
            .checked_mul(n as u128 + i)
            .ok_or_else(|| Error::Overflow(format!("dim_e({d}, {n})")))?
            / i;
    }
    u64::try_from(r).map_err(|_| Error::Overflow(format!("dim_e({d}, {n})")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "tag")]
pub enum Family {
    HermiteOscillator { d: usize },
    SphereHighest { d: usize },
    SphereZonal { d: usize },
    TorusFourier,
}

impl Family {
    /// Parses `hermite`, `highest` (or `y`), `zonal` (or `z`), `torus`.
    pub fn parse(name: &str, d: usize) -> Result<Self> {
        let f = match name.to_ascii_lowercase().as_str() {
            "hermite" | "oscillator" => Family::HermiteOscillator { d },
            "highest" | "y" => Family::SphereHighest { d },
            "zonal" | "z" => Family::SphereZonal { d },
            "torus" => Family::TorusFourier,
            other => return Err(Error::Domain(format!("unknown family {other}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::HermiteOscillator { d } if d == 0 => Err(Error::Domain("oscillator needs d >= 1".into())),
            Family::SphereHighest { d } | Family::SphereZonal { d } if d < 2 => {
                Err(Error::Domain("sphere families need d >= 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Family::HermiteOscillator { .. } => "hermite",
            Family::SphereHighest { .. } => "highest",
            Family::SphereZonal { .. } => "zonal",
            Family::TorusFourier => "torus",
        }
    }

    pub fn d(&self) -> usize {
        match *self {
            Family::HermiteOscillator { d } | Family::SphereHighest { d } | Family::SphereZonal { d } => d,
            Family::TorusFourier => 1,
        }
    }

    /// Lowest implemented level.
    pub fn first_level(&self) -> usize {
        match self {
            Family::SphereHighest { .. } | Family::SphereZonal { .. } => 1,
            _ => 0,
        }
    }

    /// `d_n`.
    pub fn dim(&self, n: usize) -> Result<u64> {
        match *self {
            Family::HermiteOscillator { d } => dim_e(d, n),
            _ => Ok(1),
        }
    }

    /// Measure of the underlying space (infinite for `R^d`).
    pub fn total_measure(&self) -> f64 {
        match *self {
            Family::HermiteOscillator { .. } => f64::INFINITY,
            Family::SphereHighest { d } | Family::SphereZonal { d } => sphere_area(d),
            Family::TorusFourier => 1.0,
        }
    }

    /// Spectral function `e(n, ·)` on the reduced coordinate of the family:
    /// radius, `ρ`, colatitude, or nothing for the torus.
    pub fn spectral(&self, n: usize, t: f64) -> f64 {
        match *self {
            Family::HermiteOscillator { d } => OscSpectral::global().value(d, n, t),
            Family::SphereHighest { d } => {
                let c: f64 = y_norm_const(d, n);
                (c * t.powi(n as i32)).powi(2)
            }
            Family::SphereZonal { d } => (zonal_z(d, n, t) / zonal_l2_norm(d, n)).powi(2),
            Family::TorusFourier => 1.0,
        }
    }

    /// One-dimensional rule on the reduced coordinate resolving every level
    /// up to `n_max`; `refine` doubles the resolution.
    pub fn reduced_grid(&self, n_max: usize, refine: u32) -> Result<ReducedGrid> {
        self.validate()?;
        let scale = 1usize << refine;
        let rule = match *self {
            Family::HermiteOscillator { d } => {
                let r_max = ((2 * n_max + 1) as f64).sqrt() + 12.0;
                let panels = (20 * (n_max + 2)).div_ceil(PANEL_ORDER).max(8) * scale;
                QuadratureRule::radial(d, r_max, panels, PANEL_ORDER)
            }
            Family::SphereHighest { d } => {
                let panels = (4.0 * (n_max as f64).sqrt()).ceil().max(8.0) as usize * scale;
                QuadratureRule::band(d, panels, PANEL_ORDER, 1)
            }
            Family::SphereZonal { d } => {
                let panels = (20 * (n_max + 2)).div_ceil(PANEL_ORDER).max(8) * scale;
                QuadratureRule::zonal(d, panels, PANEL_ORDER)
            }
            Family::TorusFourier => QuadratureRule::torus(1),
        };
        let coord = |x: &[f64; 2]| match self {
            Family::SphereHighest { .. } => x[0].cos(),
            _ => x[0],
        };
        let e = match *self {
            Family::HermiteOscillator { d } => {
                let osc = OscSpectral::global();
                let w = osc.zero_weights(d - 1, n_max);
                let mut table = vec![vec![0.0; rule.len()]; n_max + 1];
                for (i, x) in rule.nodes.iter().enumerate() {
                    let h = hermite_all(n_max, x[0]);
                    let h2: Vec<f64> = h.iter().map(|v| v * v).collect();
                    for (n, row) in table.iter_mut().enumerate() {
                        row[i] = (0..=n).map(|k| w[k] * h2[n - k]).sum();
                    }
                }
                table
            }
            _ => (0..=n_max)
                .map(|n| {
                    if n < self.first_level() {
                        vec![0.0; rule.len()]
                    } else {
                        rule.nodes.iter().map(|x| self.spectral(n, coord(x))).collect()
                    }
                })
                .collect(),
        };
        Ok(ReducedGrid { family: *self, rule: Arc::new(rule), e })
    }
}

/// A reduced rule together with `e(n, ·)` at its nodes for `n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct ReducedGrid {
    pub family: Family,
    pub rule: Arc<Rule>,
    /// `e[n][i]`.
    pub e: Vec<Vec<f64>>,
}

/// Memoized oscillator spectral functions.
///
/// `e_d(n, r) = Σ_k e_{d−1}(k, 0) h_{n−k}(r)²`; the weights `e_{d−1}(k, 0)`
/// are convolution powers of `h_k(0)²` and are cached per `(d − 1, n_max)`.
/// Grid tables are cached per `(d, n, grid id)`.
#[derive(Default)]
pub struct OscSpectral {
    zero: RwLock<HashMap<(usize, usize), Arc<Vec<f64>>>>,
    grids: RwLock<HashMap<(usize, usize, u64), Arc<Vec<f64>>>>,
}

/// A radial grid with a content-derived identifier.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub r: Vec<f64>,
    pub id: u64,
}

impl RadialGrid {
    pub fn new(r: Vec<f64>) -> Self {
        let mut id: u64 = 0xcbf2_9ce4_8422_2325;
        for v in &r {
            id ^= v.to_bits();
            id = id.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Self { r, id }
    }

    pub fn linspace(a: f64, b: f64, points: usize) -> Self {
        let m = points.max(2) - 1;
        Self::new((0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect())
    }
}

impl OscSpectral {
    pub fn global() -> &'static OscSpectral {
        static CACHE: OnceLock<OscSpectral> = OnceLock::new();
        CACHE.get_or_init(OscSpectral::default)
    }

    /// `e_{m}(k, 0)` for `k ≤ n_max` (`e_0(k, 0) = δ_{k0}`).
    pub fn zero_weights(&self, m: usize, n_max: usize) -> Arc<Vec<f64>> {
        if let Some(v) = self.zero.read().unwrap().get(&(m, n_max)) {
            return v.clone();
        }
        let z: Vec<f64> = hermite_all(n_max, 0.0).into_iter().map(|v| v * v).collect();
        let mut w = vec![0.0; n_max + 1];
        w[0] = 1.0;
        for _ in 0..m {
            w = convolve_trunc(&w, &z);
        }
        let w = Arc::new(w);
        self.zero.write().unwrap().entry((m, n_max)).or_insert_with(|| w.clone()).clone()
    }

    /// `e_d(n, r)` through the precomputed weights at the origin.
    pub fn value(&self, d: usize, n: usize, r: f64) -> f64 {
        let w = self.zero_weights(d - 1, n);
        let h = hermite_all(n, r);
        (0..=n).map(|k| w[k] * h[n - k] * h[n - k]).sum()
    }

    /// `e_d(n, ·)` on `grid`, memoized.
    pub fn on_grid(&self, d: usize, n: usize, grid: &RadialGrid) -> Arc<Vec<f64>> {
        let key = (d, n, grid.id);
        if let Some(v) = self.grids.read().unwrap().get(&key) {
            return v.clone();
        }
        let vals = Arc::new(grid.r.iter().map(|&r| self.value(d, n, r)).collect::<Vec<_>>());
        self.grids.write().unwrap().entry(key).or_insert_with(|| vals.clone()).clone()
    }
}

fn convolve_trunc(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|i| (0..=i).map(|k| a[k] * b[i - k]).sum()).collect()
}

/// `e_d(n, r)` by the recursion in the dimension: spectral values at `r`
/// convolved with `h_k(0)²`, starting from `e_1(k, r) = h_k(r)²`.
pub fn osc_spectral(d: usize, n: usize, r: f64) -> f64 {
    assert!(d >= 1);
    let z: Vec<f64> = hermite_all(n, 0.0).into_iter().map(|v| v * v).collect();
    let mut e: Vec<f64> = hermite_all(n, r).into_iter().map(|v| v * v).collect();
    for _ in 1..d {
        e = convolve_trunc(&e, &z);
    }
    e[n]
}

/// `e_d(n, r)` by the dual recursion: spectral values at the origin paired
/// with `h_k(r)²`.
pub fn osc_spectral_dual(d: usize, n: usize, r: f64) -> f64 {
    OscSpectral::global().value(d, n, r)
}

/// Concentration summary of `e_d(n, ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub d: usize,
    pub n: usize,
    pub alpha: f64,
    /// Extremes of `e_d(n, r)/n^{d/2−1}` on `C₀/√(2n+1) ≤ r ≤ α√(2n+1)`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Largest `e_d(n, r)/n^{d/2−1}` on `r ≤ √(2n+1)`.
    pub inner_max: f64,
    /// Largest `e_d(n, r) e^{γr²}/n^{d/2−1}` on `r ≥ √(2n+1)`.
    pub tail_max: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ConcentrationOptions {
    pub n0: usize,
    pub c0: f64,
    pub gamma: f64,
    pub points: usize,
}

impl Default for ConcentrationOptions {
    fn default() -> Self {
        Self { n0: 20, c0: 3.0, gamma: crate::constants::OSC_TAIL_GAMMA, points: 600 }
    }
}

pub fn osc_concentration_report(d: usize, n: usize, alpha: f64, opts: ConcentrationOptions) -> Result<ConcentrationReport> {
    if n < opts.n0 {
        return Err(Error::Domain(format!("concentration report needs n >= {}", opts.n0)));
    }
    if !(alpha > 0.0 && alpha < 0.25f64.sin()) {
        return Err(Error::Domain(format!("alpha must lie in (0, sin 1/4), got {alpha}")));
    }
    let osc = OscSpectral::global();
    let turn = ((2 * n + 1) as f64).sqrt();
    let norm = (n as f64).powf(d as f64 / 2.0 - 1.0);
    let lo = opts.c0 / turn;
    let hi = alpha * turn;
    if lo >= hi {
        return Err(Error::Domain(format!("empty annulus [{lo}, {hi}]")));
    }
    let ann = RadialGrid::linspace(lo, hi, opts.points);
    let vals = osc.on_grid(d, n, &ann);
    let (min_ratio, max_ratio) = vals
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v / norm), b.max(v / norm)));
    let inner = RadialGrid::linspace(0.0, turn, opts.points);
    let inner_max = osc.on_grid(d, n, &inner).iter().fold(0.0f64, |m, &v| m.max(v / norm));
    let tail = RadialGrid::linspace(turn, 2.0 * turn + 10.0, 2 * opts.points);
    let tail_vals = osc.on_grid(d, n, &tail);
    let tail_max = tail
        .r
        .iter()
        .zip(tail_vals.iter())
        .fold(0.0f64, |m, (&r, &v)| m.max(v * (opts.gamma * r * r).exp() / norm));
    Ok(ConcentrationReport { d, n, alpha, min_ratio, max_ratio, inner_max, tail_max })
}

/// One row of an exported spectral table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRow {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub e: f64,
    /// `e / max(n, 1)^{d/2 − 1}`.
    pub e_normalized: f64,
}

/// `e_d(n, r)` for `r ∈ [0, factor·√(2n+1)]` on `points` equispaced radii.
pub fn spectral_table(d: usize, ns: &[usize], points: usize, factor: f64) -> Vec<SpectralRow> {
    let mut rows = Vec::new();
    for &n in ns {
        let grid = RadialGrid::linspace(0.0, factor * ((2 * n + 1) as f64).sqrt(), points);
        let vals = OscSpectral::global().on_grid(d, n, &grid);
        let norm = (n.max(1) as f64).powf(d as f64 / 2.0 - 1.0);
        for (&r, &e) in grid.r.iter().zip(vals.iter()) {
            rows.push(SpectralRow { d, n, r, e, e_normalized: e / norm });
        }
    }
    rows
}

pub const SPECTRAL_CSV_HEADER: &str = "d,n,r,e,e_normalized";

pub fn spectral_csv(rows: &[SpectralRow]) -> String {
    let mut out = String::from(SPECTRAL_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{:e},{:e},{:e}\n", r.d, r.n, r.r, r.e, r.e_normalized));
    }
    out
}

fn lp_tolerance() -> Tolerance {
    Tolerance { stop: 1e-9, flag: 1e-6 }
}

/// `(1/d_n) ∫ e(n, ·) dμ`, which must equal one.
pub fn density_mass(family: Family, n: usize) -> Result<Integral<f64>> {
    let mut i = power_integral(family, n, 2.0)?;
    i.value /= family.dim(n)? as f64;
    Ok(i)
}

/// `∫ e(n, ·)^{p/2} dμ`.
fn power_integral(family: Family, n: usize, p: f64) -> Result<Integral<f64>> {
    family.validate()?;
    if n < family.first_level() {
        return Err(Error::Domain(format!("level {n} not implemented for {}", family.label())));
    }
    let half = p / 2.0;
    Ok(match family {
        Family::HermiteOscillator { d } => {
            let osc = OscSpectral::global();
            let r_max = ((2 * n + 1) as f64).sqrt() + 12.0 + 12.0 / p.max(0.5);
            let prof = RadialProfile::new(|r: f64| osc.value(d, n, r).powf(half), r_max, n);
            integrate_radial_tol(d, &prof, lp_tolerance())
        }
        Family::SphereHighest { d } => {
            let c: f64 = y_norm_const(d, n);
            let prof = BandProfile::new(|rho: f64, _| (c * rho.powi(n as i32)).powf(p), n * p.ceil() as usize, 0);
            integrate_band_tol(d, &prof, lp_tolerance())
        }
        Family::SphereZonal { d } => {
            let norm = zonal_l2_norm(d, n);
            let prof = ZonalProfile::new(|t: f64| (zonal_z(d, n, t) / norm).abs().powf(p), n);
            integrate_zonal_tol(d, &prof, lp_tolerance())
        }
        Family::TorusFourier => Integral { value: 1.0, change: 0.0, converged: true, nodes: 1, tail_warning: false },
    })
}

/// `‖√e(n, ·)‖_{L^p}`; `p = ∞` is the supremum on a fine grid.
pub fn sqrt_spectral_lp(family: Family, n: usize, p: f64) -> Result<Integral<f64>> {
    if p.is_infinite() {
        return sqrt_spectral_sup(family, n);
    }
    if p < 1.0 {
        return Err(Error::Domain(format!("p must be >= 1, got {p}")));
    }
    let mut i = power_integral(family, n, p)?;
    i.value = i.value.powf(1.0 / p);
    Ok(i)
}

fn sqrt_spectral_sup(family: Family, n: usize) -> Result<Integral<f64>> {
    family.validate()?;
    let pts = 40 * (n + 2);
    let (a, b) = match family {
        Family::HermiteOscillator { .. } => (0.0, ((2 * n + 1) as f64).sqrt() + 4.0),
        Family::SphereHighest { .. } => (0.0, 1.0),
        Family::SphereZonal { .. } => (0.0, std::f64::consts::PI),
        Family::TorusFourier => (0.0, 0.0),
    };
    let v = (0..=pts)
        .map(|i| family.spectral(n, a + (b - a) * i as f64 / pts as f64))
        .fold(0.0f64, f64::max)
        .sqrt();
    Ok(Integral { value: v, change: 0.0, converged: true, nodes: pts + 1, tail_warning: false })
}

/// `‖Z_n‖_{L^p(S^d)}` for the unnormalized `Z_n`.
pub fn zonal_lp_profile(d: usize, n: usize, p: f64) -> Result<Integral<f64>> {
    if p < 1.0 || d < 2 || n < 1 {
        return Err(Error::Domain(format!("zonal_lp_profile(d={d}, n={n}, p={p})")));
    }
    let mut i = sqrt_spectral_lp(Family::SphereZonal { d }, n, p)?;
    i.value *= zonal_l2_norm(d, n);
    Ok(i)
}

/// Indicator-restricted surrogates of `|Y_n|` and `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TildeProfile {
    /// `Ỹ_n = n^{(d−1)/4} 1{δ ≤ 1/√n}`.
    Highest { d: usize, n: usize },
    /// `Z̃_n = 1_{[0, c/n]}(Θ) Z_n`.
    Zonal { d: usize, n: usize, c: f64 },
}

pub fn tilde_profiles(family: Family, n: usize) -> Result<TildeProfile> {
    if n < 1 {
        return Err(Error::Domain("tilde profiles need n >= 1".into()));
    }
    match family {
        Family::SphereHighest { d } if d >= 2 => Ok(TildeProfile::Highest { d, n }),
        Family::SphereZonal { d } if d >= 2 => Ok(TildeProfile::Zonal { d, n, c: crate::constants::band_constant(d) }),
        _ => Err(Error::Domain(format!("no tilde profile for {}", family.label()))),
    }
}

impl TildeProfile {
    /// `Ỹ_n` as a function of `δ`, or `Z̃_n` as a function of `Θ`.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TildeProfile::Highest { d, n } => {
                if t <= 1.0 / (n as f64).sqrt() {
                    (n as f64).powf((d as f64 - 1.0) / 4.0)
                } else {
                    0.0
                }
            }
            TildeProfile::Zonal { d, n, c } => {
                if t <= c / n as f64 {
                    zonal_z(d, n, t)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn lp_norm(&self, p: f64) -> Result<Integral<f64>> {
        let mut i = match *self {
            TildeProfile::Highest { d, n } => {
                let cut = 1.0 / (n as f64).sqrt();
                let v = self.value(0.0).powf(p);
                let prof = BandProfile::new(|rho: f64, _| if rho.acos() <= cut { v } else { 0.0 }, n, 0)
                    .with_breakpoints(vec![cut]);
                integrate_band_tol(d, &prof, lp_tolerance())
            }
            TildeProfile::Zonal { d, n, c } => {
                let cut = c / n as f64;
                let prof = ZonalProfile::new(|t: f64| self.value(t).abs().powf(p), 0).with_breakpoints(vec![cut]);
                integrate_zonal_tol(d, &prof, lp_tolerance())
            }
        };
        i.value = i.value.powf(1.0 / p);
        Ok(i)
    }
}

/// `∫ |Y_{n₁} Y_{n₂}|² = (c_{n₁} c_{n₂} / c_{n₁+n₂})²`.
pub fn y_product_exact(d: usize, n1: usize, n2: usize) -> f64 {
    let c1: f64 = y_norm_const(d, n1);
    let c2: f64 = y_norm_const(d, n2);
    let c12: f64 = y_norm_const(d, n1 + n2);
    (c1 * c2 / c12).powi(2)
}

/// `∫ |Y_{n₁} Y_{n₂}|²` by quadrature.
pub fn y_product_quadrature(d: usize, n1: usize, n2: usize) -> Integral<f64> {
    let c1: f64 = y_norm_const(d, n1);
    let c2: f64 = y_norm_const(d, n2);
    let prof = BandProfile::new(|rho: f64, _| (c1 * c2 * rho.powi((n1 + n2) as i32)).powi(2), n1 + n2, 0);
    integrate_band_tol(d, &prof, Tolerance::default())
}

/// `∫ |Ỹ_{n₁} Ỹ_{n₂}|²` (exact: the indicators are nested).
pub fn y_tilde_product(d: usize, n1: usize, n2: usize) -> Integral<f64> {
    let (a, b) = (n1.max(n2), n1.min(n2));
    let amp = ((a * b) as f64).powf((d as f64 - 1.0) / 2.0);
    let cut = 1.0 / (a as f64).sqrt();
    let prof = BandProfile::new(|rho: f64, _| if rho.acos() <= cut { amp } else { 0.0 }, a, 0).with_breakpoints(vec![cut]);
    integrate_band_tol(d, &prof, Tolerance::default())
}

/// Frozen value or fresh computation of the Jacobi band constant.
pub fn band_constant_for(d: usize, n_max: usize) -> Result<f64> {
    jacobi_band_constant(d as f64 / 2.0 - 1.0, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(dim_e(2, 5).unwrap(), 6);
        assert_eq!(dim_e(3, 4).unwrap(), 15);
        assert_eq!(dim_e(1, 17).unwrap(), 1);
        assert!(dim_e(60, usize::MAX / 4).is_err());
        assert!(dim_e(0, 3).is_err());
    }

    #[test]
    fn oscillator_base_and_parity() {
        let h = crate::specfun::hermite_h(7, 1.3);
        assert!((osc_spectral(1, 7, 1.3) - h * h).abs() < 1e-15);
        for d in 1..=3 {
            assert!(osc_spectral(d, 5, 0.0).abs() < 1e-15);
            assert!(osc_spectral_dual(d, 9, 0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn recursions_agree() {
        for d in 2..=4 {
            for n in [0usize, 3, 17, 60] {
                for r in [0.0, 0.4, 2.1, 7.5] {
                    let a = osc_spectral(d, n, r);
                    let b = osc_spectral_dual(d, n, r);
                    assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300), "d={d} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn densities_normalized() {
        let fams = [
            Family::HermiteOscillator { d: 2 },
            Family::HermiteOscillator { d: 3 },
            Family::SphereHighest { d: 2 },
            Family::SphereHighest { d: 3 },
            Family::SphereZonal { d: 2 },
            Family::SphereZonal { d: 3 },
            Family::TorusFourier,
        ];
        for f in fams {
            for n in [1usize, 7, 30] {
                let m = density_mass(f, n).unwrap();
                assert!((m.value - 1.0).abs() < 1e-6, "{f:?} n={n} {m:?}");
            }
        }
    }

    #[test]
    fn sqrt_lp_at_two_is_sqrt_dim() {
        let f = Family::HermiteOscillator { d: 3 };
        let v = sqrt_spectral_lp(f, 6, 2.0).unwrap().value;
        assert!((v - (dim_e(3, 6).unwrap() as f64).sqrt()).abs() < 1e-6);
        assert!(sqrt_spectral_lp(f, 6, 0.5).is_err());
        let sup = sqrt_spectral_lp(Family::SphereZonal { d: 2 }, 5, f64::INFINITY).unwrap().value;
        let exact = (5f64).sqrt() / zonal_l2_norm(2, 5);
        assert!((sup - exact).abs() < 1e-12);
    }

    #[test]
    fn reduced_grid_integrates_densities() {
        for f in [Family::HermiteOscillator { d: 2 }, Family::SphereHighest { d: 3 }, Family::SphereZonal { d: 2 }] {
            let g = f.reduced_grid(12, 0).unwrap();
            for n in f.first_level()..=12 {
                let s: f64 = g.e[n].iter().zip(&g.rule.weights).map(|(e, w)| e * w).sum();
                assert!((s / f.dim(n).unwrap() as f64 - 1.0).abs() < 1e-8, "{f:?} n={n} s={s}");
            }
        }
    }

    #[test]
    fn exact_products() {
        for (n1, n2) in [(3usize, 2usize), (10, 10), (40, 7)] {
            let q = y_product_quadrature(2, n1, n2).value;
            assert!((q / y_product_exact(2, n1, n2) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn family_parse() {
        assert_eq!(Family::parse("zonal", 2).unwrap(), Family::SphereZonal { d: 2 });
        assert!(Family::parse("zonal", 1).is_err());
        assert!(Family::parse("cube", 2).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = spectral_table(2, &[5], 4, 1.5);
        let csv = spectral_csv(&rows);
        assert!(csv.starts_with("d,n,r,e,e_normalized\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
