//! Probabilistic Lebesgue norms: quadrature definition, closed forms for the
//! sphere and oscillator families, membership predicates and critical
//! exponents, interpolation defect, Hölder witnesses and embedding sweeps.

use std::sync::Arc;

use serde::Serialize;

use crate::measure::{Integral, SampledFunction};
use crate::spectral::{Family, ReducedGrid};
use crate::specfun::zonal_l2_norm;
use crate::{Error, Result, Rule, Sampled};

/// Level norms `‖u_n‖_{L²}` of a finitely supported input together with
/// the family and exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PLpInput {
    pub family: Family,
    pub norms: Vec<f64>,
    pub p: f64,
}

impl PLpInput {
    pub fn new(family: Family, norms: Vec<f64>, p: f64) -> Result<Self> {
        if norms.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain("level norms must be finite and nonnegative".into()));
        }
        if !(p >= 1.0) {
            return Err(Error::Domain(format!("p must be >= 1, got {p}")));
        }
        Ok(Self { family, norms, p })
    }

    pub fn norm(&self) -> Result<Integral<f64>> {
        plp_norm_quadrature(self.family, &self.norms, self.p)
    }
}

fn grid_norm(g: &ReducedGrid, norms: &[f64], p: f64) -> Result<f64> {
    let family = g.family;
    let mut dens = vec![0.0; g.rule.len()];
    for (n, &a) in norms.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        if n < family.first_level() {
            return Err(Error::Domain(format!("level {n} not implemented for {}", family.label())));
        }
        let s = a * a / family.dim(n)? as f64;
        for (d, e) in dens.iter_mut().zip(&g.e[n]) {
            *d += s * e;
        }
    }
    if p.is_infinite() {
        return Ok(dens.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt());
    }
    let h = p / 2.0;
    Ok(dens.iter().zip(&g.rule.weights).map(|(d, w)| w * d.powf(h)).sum::<f64>().powf(1.0 / p))
}

/// `‖√(Σ ‖u_n‖² e(n,·)/d_n)‖_{L^p}` on the reduced one-dimensional rule of
/// the family; `change` compares against a rule of twice the resolution.
pub fn plp_norm_quadrature(family: Family, norms: &[f64], p: f64) -> Result<Integral<f64>> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must be >= 1, got {p}")));
    }
    let n_max = norms.len().saturating_sub(1);
    let coarse = family.reduced_grid(n_max, 0)?;
    let fine = family.reduced_grid(n_max, 1)?;
    let a = grid_norm(&coarse, norms, p)?;
    let b = grid_norm(&fine, norms, p)?;
    let change = if b > 0.0 { (a - b).abs() / b } else { 0.0 };
    Ok(Integral { value: b, change, converged: change <= 1e-6, nodes: fine.rule.len(), tail_warning: false })
}

/// `ζ(s, a) = Σ_{k≥0} (a + k)^{−s}` for `s > 1`, `a > 0`, by Euler–Maclaurin
/// after ten explicit terms.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0 && a > 0.0) {
        return Err(Error::Domain(format!("hurwitz_zeta needs s > 1 and a > 0, got s={s}, a={a}")));
    }
    // B_{2j}/(2j)!
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let m = 10.0f64.max(2.0 * s);
    let mut sum = 0.0;
    let mut k = 0.0;
    while k < m {
        sum += (a + k).powf(-s);
        k += 1.0;
    }
    let x = a + k;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // s(s+1)…(s+2j−2) x^{−s−2j+1}
    let mut rising = s;
    let mut xp = x.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        let term = b * rising * xp;
        sum += term;
        let jj = (2 * j + 1) as f64;
        rising *= (s + jj) * (s + jj + 1.0);
        xp /= x * x;
    }
    Ok(sum)
}

/// `[Σ_{n≥1} n^{−m} S_n^{p/2}]^{1/p}` with `S_n = Σ_{k≤n} k^w |a_k|²` and the
/// constant tail after the support summed by the Hurwitz zeta function.
fn weighted_closed_form(a: &[f64], p: f64, w: f64, m: f64) -> Result<f64> {
    let last = match a.iter().rposition(|x| *x != 0.0) {
        Some(k) if k >= 1 => k,
        _ => return Ok(0.0),
    };
    let h = p / 2.0;
    let mut s = 0.0;
    let mut total = 0.0;
    for n in 1..=last {
        let nf = n as f64;
        s += nf.powf(w) * a[n] * a[n];
        total += nf.powf(-m) * s.powf(h);
    }
    total += s.powf(h) * hurwitz_zeta(m, (last + 1) as f64)?;
    Ok(total.powf(1.0 / p))
}

/// Closed form for the highest-weight family; `a[n]` is the coefficient of
/// the normalized `Y_n` (`a[0]` ignored).
pub fn y_closed_form(a: &[f64], p: f64, d: usize) -> Result<f64> {
    if !(p > 1.0) || d < 2 {
        return Err(Error::Domain(format!("y_closed_form needs p > 1 and d >= 2, got p={p}, d={d}")));
    }
    let df = d as f64;
    weighted_closed_form(a, p, (df - 1.0) / 2.0, (df + 1.0) / 2.0)
}

/// `2d/(d − 1)`.
pub fn zonal_critical_p(d: usize) -> f64 {
    2.0 * d as f64 / (d as f64 - 1.0)
}

/// Closed form for the zonal family; `a[n]` multiplies the unnormalized
/// `Z_n`.  Refuses `p ≤ 2d/(d−1)` where the space collapses to `ℓ²`.
pub fn z_closed_form(a: &[f64], p: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain("z_closed_form needs d >= 2".into()));
    }
    if !(p > zonal_critical_p(d)) {
        return Err(Error::Domain(format!("z_closed_form needs p > {}, got {p}", zonal_critical_p(d))));
    }
    let df = d as f64;
    weighted_closed_form(a, p, df - 1.0, df + 1.0)
}

/// `‖Π₀u‖ + [Σ_{n≥1} n^{d/2−1} R_n^{p/2}]^{1/p}` with
/// `R_n = Σ_{k≥n} ‖Π_k u‖²/k^{d/2}`.
pub fn hermite_closed_form(norms: &[f64], p: f64, d: usize) -> Result<f64> {
    if !(p >= 1.0) || d == 0 {
        return Err(Error::Domain(format!("hermite_closed_form needs p >= 1, d >= 1, got p={p}, d={d}")));
    }
    if norms.is_empty() {
        return Ok(0.0);
    }
    let half_d = d as f64 / 2.0;
    let mut r = vec![0.0; norms.len() + 1];
    for k in (1..norms.len()).rev() {
        r[k] = r[k + 1] + norms[k] * norms[k] / (k as f64).powf(half_d);
    }
    let sum: f64 = (1..norms.len()).map(|n| (n as f64).powf(half_d - 1.0) * r[n].powf(p / 2.0)).sum();
    Ok(norms[0] + sum.powf(1.0 / p))
}

/// Level norms for a coefficient sequence of the given family.
pub fn level_norms(family: Family, a: &[f64]) -> Vec<f64> {
    match family {
        Family::SphereZonal { d } => {
            a.iter().enumerate().map(|(n, x)| if n == 0 { 0.0 } else { x.abs() * zonal_l2_norm(d, n) }).collect()
        }
        Family::SphereHighest { .. } => a.iter().enumerate().map(|(n, x)| if n == 0 { 0.0 } else { x.abs() }).collect(),
        _ => a.iter().map(|x| x.abs()).collect(),
    }
}

/// Sobolev norm: sphere and torus weight `(1+n)^{2s}`, oscillator weight
/// `(1+n)^s` (its eigenvalues grow like `n`, not `n²`).
pub fn sobolev_norm(family: Family, norms: &[f64], s: f64) -> f64 {
    let exp = match family {
        Family::HermiteOscillator { .. } => s,
        _ => 2.0 * s,
    };
    norms.iter().enumerate().map(|(n, a)| (1.0 + n as f64).powf(exp) * a * a).sum::<f64>().sqrt()
}

/// Coefficient models with analytic membership.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model")]
pub enum CoeffModel {
    /// Finitely supported, `a[n]` at level `n`.
    Finite { a: Vec<f64> },
    /// `a_n = n^{−σ} ln^{−τ} n` for `n ≥ 2`.
    PowerLog { sigma: f64, tau: f64 },
    /// `a_{2^k} = 2^{−kσ}` for `k ≥ 1`, zero elsewhere.
    Lacunary { sigma: f64 },
    /// `a_n = ratio^n`, `0 ≤ ratio < 1`.
    Geometric { ratio: f64 },
}

impl CoeffModel {
    /// The first `n_max + 1` coefficients.
    pub fn truncate(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max)
            .map(|n| match self {
                CoeffModel::Finite { a } => a.get(n).copied().unwrap_or(0.0),
                CoeffModel::PowerLog { sigma, tau } => {
                    if n >= 2 {
                        let nf = n as f64;
                        nf.powf(-sigma) * nf.ln().powf(-tau)
                    } else {
                        0.0
                    }
                }
                CoeffModel::Lacunary { sigma } => {
                    if n >= 2 && n.is_power_of_two() {
                        (n as f64).powf(-sigma)
                    } else {
                        0.0
                    }
                }
                CoeffModel::Geometric { ratio } => ratio.powi(n as i32),
            })
            .collect()
    }
}

const EXP_TOL: f64 = 1e-12;

/// `Σ n^{−m} S_n^{p/2}` with `S_n = Σ_{k≤n} k^w a_k²` finite? (`m > 1`).
fn weighted_member(model: &CoeffModel, p: f64, w: f64, m: f64) -> bool {
    debug_assert!(m > 1.0);
    match *model {
        CoeffModel::Finite { .. } | CoeffModel::Geometric { .. } => true,
        CoeffModel::PowerLog { sigma, tau } => {
            let e = w - 2.0 * sigma;
            if e > -1.0 + EXP_TOL {
                let big_p = -m + (e + 1.0) * p / 2.0;
                big_p < -1.0 - EXP_TOL || ((big_p + 1.0).abs() <= EXP_TOL && tau * p > 1.0 + EXP_TOL)
            } else {
                // S_n grows at most logarithmically and m > 1
                true
            }
        }
        CoeffModel::Lacunary { sigma } => {
            let e = w - 2.0 * sigma;
            e <= EXP_TOL || -m + e * p / 2.0 < -1.0 - EXP_TOL
        }
    }
}

fn l2_member(model: &CoeffModel) -> bool {
    match *model {
        CoeffModel::Finite { .. } | CoeffModel::Geometric { .. } => true,
        CoeffModel::PowerLog { sigma, tau } => 2.0 * sigma > 1.0 + EXP_TOL || ((2.0 * sigma - 1.0).abs() <= EXP_TOL && 2.0 * tau > 1.0 + EXP_TOL),
        CoeffModel::Lacunary { sigma } => sigma > EXP_TOL,
    }
}

/// Membership of `Σ a_n φ_n` in `PL^p` by tail-exponent analysis of the
/// closed form of the family.
pub fn membership(family: Family, model: &CoeffModel, p: f64) -> Result<bool> {
    family.validate()?;
    if let CoeffModel::Geometric { ratio } = model {
        if !(0.0..1.0).contains(ratio) {
            return Err(Error::Domain("geometric ratio must lie in [0, 1)".into()));
        }
    }
    let df = family.d() as f64;
    Ok(match family {
        Family::SphereHighest { .. } => {
            if p <= 2.0 {
                l2_member(model)
            } else {
                weighted_member(model, p, (df - 1.0) / 2.0, (df + 1.0) / 2.0)
            }
        }
        Family::SphereZonal { d } => {
            if p <= zonal_critical_p(d) {
                l2_member(model)
            } else {
                weighted_member(model, p, df - 1.0, df + 1.0)
            }
        }
        Family::TorusFourier => l2_member(model),
        Family::HermiteOscillator { .. } => match *model {
            CoeffModel::Finite { .. } | CoeffModel::Geometric { .. } => true,
            CoeffModel::PowerLog { sigma, tau } => {
                let e = -2.0 * sigma - df / 2.0;
                if e < -1.0 - EXP_TOL {
                    let big_p = df / 2.0 - 1.0 + (e + 1.0) * p / 2.0;
                    big_p < -1.0 - EXP_TOL || ((big_p + 1.0).abs() <= EXP_TOL && tau * p > 1.0 + EXP_TOL)
                } else {
                    false
                }
            }
            CoeffModel::Lacunary { .. } => {
                return Err(Error::Domain("lacunary membership not implemented for the oscillator".into()))
            }
        },
    })
}

/// `a_n = n^{−d(1/2−1/p₀)} ln^{−β/p₀} n`, borderline at `p₀` for the zonal family.
pub fn zonal_log_family(d: usize, p0: f64, beta: f64) -> CoeffModel {
    CoeffModel::PowerLog { sigma: d as f64 * (0.5 - 1.0 / p0), tau: beta / p0 }
}

/// Supremum of the exponents `p ∈ [2, 64]` with membership, to `1e−4`;
/// `+∞` when membership holds at `p = 64`.
pub fn critical_exponent(family: Family, model: &CoeffModel) -> Result<f64> {
    const P_MAX: f64 = 64.0;
    if !matches!(family, Family::SphereHighest { .. } | Family::SphereZonal { .. } | Family::HermiteOscillator { .. }) {
        return Err(Error::Domain("critical_exponent needs a sphere or oscillator family".into()));
    }
    if membership(family, model, P_MAX)? {
        return Ok(f64::INFINITY);
    }
    let (mut lo, mut hi) = (2.0, P_MAX);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if membership(family, model, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Numerical tail analysis of the closed-form summand `n^{−m} S_n^{p/2}`
/// for the zonal family: least-squares slope of `ln(n · summand)` against
/// `ln ln n` over dyadic `n ∈ [2^lo, 2^hi]`.  For a summand `≍ 1/(n ln^β n)`
/// the slope is `−β`.
pub fn zonal_summand_log_slope(d: usize, model: &CoeffModel, p: f64, lo: u32, hi: u32) -> Result<f64> {
    let df = d as f64;
    let (w, m) = (df - 1.0, df + 1.0);
    let n_max = 1usize << hi;
    let a = model.truncate(n_max);
    let mut s = 0.0;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (n, an) in a.iter().enumerate().skip(1) {
        let nf = n as f64;
        s += nf.powf(w) * an * an;
        if n >= (1 << lo) && n.is_power_of_two() {
            let summand = nf.powf(-m) * s.powf(p / 2.0);
            xs.push(nf.ln().ln());
            ys.push((nf * summand).ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Domain("need at least three dyadic points".into()));
    }
    Ok(crate::calibrate::ls_slope(&xs, &ys))
}

/// `θ₁ = (1/p − 1/p₂)/(1/p₁ − 1/p₂)`.
pub fn theta1(p1: f64, p: f64, p2: f64) -> f64 {
    (1.0 / p - 1.0 / p2) / (1.0 / p1 - 1.0 / p2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefectReport {
    pub q: f64,
    /// Maximizing exponent.
    pub p_star: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Interpolation defect from a norm oracle `p ↦ ‖φ‖_p`.  The log-quotient
/// is concave in `1/p`, so a grid scan of at least 64 points is followed by
/// golden-section refinement around the best grid point.
pub fn interpolation_defect_with(norm: impl Fn(f64) -> f64, p1: f64, p2: f64, grid: usize) -> Result<DefectReport> {
    if !(1.0 <= p1 && p1 < p2 && p2.is_finite()) {
        return Err(Error::Domain(format!("need 1 <= p1 < p2 < inf, got [{p1}, {p2}]")));
    }
    let (l1, l2) = (norm(p1).ln(), norm(p2).ln());
    if !(l1.is_finite() && l2.is_finite()) {
        return Err(Error::Domain("phi must be nonzero with finite norms".into()));
    }
    let (t1, t2) = (1.0 / p1, 1.0 / p2);
    let f = |t: f64| {
        let th1 = (t - t2) / (t1 - t2);
        th1 * l1 + (1.0 - th1) * l2 - norm(1.0 / t).ln()
    };
    let m = grid.max(64);
    let ts: Vec<f64> = (0..=m).map(|i| t2 + (t1 - t2) * i as f64 / m as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let best = (0..=m).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    let (mut a, mut b) = (ts[best.saturating_sub(1)], ts[(best + 1).min(m)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let (mut t_best, mut v_best) = (ts[best], vals[best]);
    for (t, v) in [(c, fc), (d, fd)] {
        if v > v_best {
            t_best = t;
            v_best = v;
        }
    }
    Ok(DefectReport { q: v_best.max(0.0).exp(), p_star: 1.0 / t_best, p1, p2 })
}

/// `Q(φ, [p₁, p₂])` for a sampled profile.
pub fn interpolation_defect(phi: &Sampled, p1: f64, p2: f64, grid: usize) -> Result<DefectReport> {
    interpolation_defect_with(|p| phi.lp_norm(p), p1, p2, grid)
}

/// A dual function `ψ` for `φ` with its verification data.
#[derive(Debug, Clone)]
pub struct HolderWitness {
    pub psi: Sampled,
    pub r: f64,
    pub q: f64,
    /// `∫ φψ`.
    pub pairing: f64,
    /// `‖φ‖_{p₁}‖ψ‖_{q₁}` and `‖φ‖_{p₂}‖ψ‖_{q₂}`.
    pub products: [f64; 2],
    /// Largest pointwise excess of `|ψ|^{q_i}/∫|ψ|^{q_i}` over its bound,
    /// for `i = 1, 2` (nonpositive when the bound holds).
    pub pointwise_excess: [f64; 2],
}

impl HolderWitness {
    /// The five conclusions within `slack`.
    pub fn holds(&self, slack: f64) -> bool {
        let qr = self.q.powf(self.r);
        (self.pairing - 1.0).abs() <= slack
            && self.products.iter().all(|&x| x <= qr + slack)
            && self.pointwise_excess.iter().all(|&x| x <= slack)
    }
}

/// `ψ = |φ|^r / (φ ∫|φ|^r)` with `r` the midpoint of
/// `[1 + p₁/q₂, 1 + p₂/q₁]`.
pub fn holder_witness(phi: &Sampled, p1: f64, p2: f64) -> Result<HolderWitness> {
    if !(1.0 < p1 && p1 < p2 && p2.is_finite()) {
        return Err(Error::Domain(format!("need 1 < p1 < p2 < inf, got [{p1}, {p2}]")));
    }
    let (q1, q2) = (p1 / (p1 - 1.0), p2 / (p2 - 1.0));
    let (lo, hi) = (1.0 + p1 / q2, 1.0 + p2 / q1);
    if lo > hi + 1e-12 {
        return Err(Error::Domain(format!("empty witness interval [{lo}, {hi}]: need 1/p1 + 1/p2 <= 1")));
    }
    let r = 0.5 * (lo + hi);
    let ir: f64 = phi.map(|v| v.abs().powf(r)).integral();
    let psi = phi.map(|v| if v == 0.0 { 0.0 } else { v.abs().powf(r) / (v * ir) });
    let pairing = phi.values.iter().zip(&psi.values).zip(&phi.rule.weights).map(|((a, b), w)| a * b * w).sum();
    let q = interpolation_defect(phi, p1, p2, 256)?.q;
    let products = [phi.lp_norm(p1) * psi.lp_norm(q1), phi.lp_norm(p2) * psi.lp_norm(q2)];
    let i1: f64 = phi.map(|v| v.abs().powf(p1)).integral();
    let i2: f64 = phi.map(|v| v.abs().powf(p2)).integral();
    let excess = |qq: f64| {
        let iq: f64 = psi.map(|v| v.abs().powf(qq)).integral();
        let k = q.powf((r - 1.0) * qq);
        phi.values
            .iter()
            .zip(&psi.values)
            .map(|(f, s)| {
                let lhs = s.abs().powf(qq) / iq;
                let rhs = k * (f.abs().powf(p1) / i1 + f.abs().powf(p2) / i2);
                (lhs - rhs) / rhs.max(1.0)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let pointwise_excess = [excess(q1), excess(q2)];
    Ok(HolderWitness { psi, r, q, pairing, products, pointwise_excess })
}

/// Profile `√e(n, ·)` on a reduced rule.
fn level_profile(g: &ReducedGrid, n: usize) -> Result<Sampled> {
    SampledFunction::new(g.rule.clone(), g.e[n].iter().map(|v| v.max(0.0).sqrt()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub family: Family,
    pub p: f64,
    pub n: usize,
    /// Weak-`L^p` quasinorm of `g_N = sup_{n≤N} √e(n,·)/‖√e(n,·)‖_p` at `N` and `N/2`.
    pub weak_norm: [f64; 2],
    /// `L^p` norm of `g_N` at `N` and `N/2`.
    pub strong_norm: [f64; 2],
    /// `sup_{n≤N} Q(√e(n,·), [p₁, p₂])` with `[p₁, p₂] = [2, 2p]`.
    pub defect: f64,
    /// `‖√e(n,·)‖_p ‖√e(n,·)‖_{p'} / d_n` for every level.
    pub duality_products: Vec<f64>,
}

/// Envelope, defect and duality diagnostics over the levels `≤ N`.
pub fn hypothesis_checks(family: Family, p: f64, n: usize) -> Result<HypothesisReport> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::Domain(format!("hypothesis_checks needs 2 < p < inf, got {p}")));
    }
    let g = family.reduced_grid(n, 1)?;
    let first = family.first_level();
    let q = p / (p - 1.0);
    let mut profiles = Vec::new();
    for k in first..=n {
        profiles.push(level_profile(&g, k)?);
    }
    let envelope = |upto: usize| -> Result<Sampled> {
        let mut v = vec![0.0f64; g.rule.len()];
        for prof in profiles.iter().take(upto + 1 - first) {
            let s = prof.lp_norm(p);
            for (o, x) in v.iter_mut().zip(&prof.values) {
                *o = o.max(x / s);
            }
        }
        SampledFunction::new(g.rule.clone(), v)
    };
    let half = (n / 2).max(first);
    let (g_full, g_half) = (envelope(n)?, envelope(half)?);
    let weak_norm = [crate::measure::weak_lp_quasinorm(&g_full, p), crate::measure::weak_lp_quasinorm(&g_half, p)];
    let strong_norm = [g_full.lp_norm(p), g_half.lp_norm(p)];
    let mut defect = 1.0f64;
    let mut duality_products = Vec::new();
    for (i, prof) in profiles.iter().enumerate() {
        let k = first + i;
        if family != Family::TorusFourier {
            defect = defect.max(interpolation_defect(prof, 2.0, 2.0 * p, 64)?.q);
        }
        duality_products.push(prof.lp_norm(p) * prof.lp_norm(q) / family.dim(k)? as f64);
    }
    Ok(HypothesisReport { family, p, n, weak_norm, strong_norm, defect, duality_products })
}

/// Pairing `∫ Σ ‖u_n‖‖w_n‖ e(n,·)/d_n` against `‖u‖_{PL^p}‖w‖_{PL^{p'}}` on one rule.
pub fn duality_check(family: Family, u: &[f64], w: &[f64], p: f64) -> Result<(f64, f64)> {
    let n_max = u.len().max(w.len()).saturating_sub(1);
    let g = family.reduced_grid(n_max, 0)?;
    let q = p / (p - 1.0);
    let mut pair = vec![0.0; g.rule.len()];
    for n in family.first_level()..=n_max {
        let (a, b) = (u.get(n).copied().unwrap_or(0.0), w.get(n).copied().unwrap_or(0.0));
        let s = a * b / family.dim(n)? as f64;
        for (o, e) in pair.iter_mut().zip(&g.e[n]) {
            *o += s * e;
        }
    }
    let lhs = pair.iter().zip(&g.rule.weights).map(|(x, w)| x * w).sum();
    Ok((lhs, grid_norm(&g, u, p)? * grid_norm(&g, w, q)?))
}

/// Sobolev exponent separating embedding from non-embedding.  The zonal
/// space equals `L²` up to `p = 2d/(d−1)`, so its threshold is clamped at 0.
pub fn sobolev_threshold(family: Family, p: f64) -> Result<f64> {
    let df = family.d() as f64;
    match family {
        Family::SphereHighest { .. } => Ok((df - 1.0) / 2.0 * (0.5 - 1.0 / p)),
        Family::SphereZonal { .. } => Ok(((df - 1.0) / 2.0 - df / p).max(0.0)),
        Family::HermiteOscillator { .. } => Ok(-df * (0.5 - 1.0 / p)),
        Family::TorusFourier => Err(Error::Domain("no Sobolev threshold for the torus".into())),
    }
}

/// One cell of an embedding sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub d: usize,
    pub p: f64,
    pub s_or_param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub pass: bool,
}

pub const SWEEP_CSV_HEADER: &str = "family,d,p,s_or_param,lhs,rhs,ratio,band_lo,band_hi,pass";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
            r.family, r.d, r.p, r.s_or_param, r.lhs, r.rhs, r.ratio, r.band_lo, r.band_hi, r.pass
        ));
    }
    out
}

const SWEEP_EPS: f64 = 0.05;

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn class_row(family: Family, p: f64, s: f64, got: bool, want: bool) -> SweepRow {
    SweepRow {
        family: family.label().into(),
        d: family.d(),
        p,
        s_or_param: s,
        lhs: indicator(got),
        rhs: indicator(want),
        ratio: indicator(got == want),
        band_lo: 1.0,
        band_hi: 1.0,
        pass: got == want,
    }
}

/// Sobolev versus `PL^p` classification.
///
/// Sphere families: for each `s` on a grid around the threshold `s*`, the
/// power law `a_n = n^{−(s+1/2+ε)}` (just inside `H^s`) must lie in `PL^p`
/// exactly when `s > s*`; lacunary sequences `a_{2^k} = 2^{−kσ}` must lie in
/// `PL^p` exactly when `σ > s*`, so the witness at `σ = s*` belongs to every
/// `H^{s*−ε}` but not to `PL^p`.  Oscillator: the bound
/// `‖u‖_{H^{s*}} ≤ C ‖u‖_{PL^p}` is evaluated on power-law and random inputs.
pub fn embedding_sweep(family: Family, p: f64) -> Result<Vec<SweepRow>> {
    if !(p > 2.0) {
        return Err(Error::Domain(format!("embedding_sweep needs p > 2, got {p}")));
    }
    let s_star = sobolev_threshold(family, p)?;
    let mut rows = Vec::new();
    match family {
        Family::SphereHighest { .. } | Family::SphereZonal { .. } => {
            for i in -6..=6 {
                let s = s_star + 0.1 * i as f64;
                if i == 0 {
                    continue;
                }
                let got = membership(family, &CoeffModel::PowerLog { sigma: s + 0.5 + SWEEP_EPS * 0.1, tau: 0.0 }, p)?;
                // power laws are only informative above the l² threshold
                let informative = !matches!(family, Family::SphereZonal { d } if p <= zonal_critical_p(d));
                if informative {
                    rows.push(class_row(family, p, s, got, s > s_star));
                }
                let lac = membership(family, &CoeffModel::Lacunary { sigma: s }, p)?;
                rows.push(class_row(family, p, s, lac, s > s_star));
            }
            let witness = membership(family, &CoeffModel::Lacunary { sigma: s_star }, p)?;
            rows.push(class_row(family, p, s_star, witness, false));
        }
        Family::HermiteOscillator { d } => {
            let band = crate::constants::HERMITE_SOBOLEV_BOUND;
            let mut rng = crate::mc::stream_rng(crate::mc::derive_seed(17, "embedding"), 0);
            for i in 0..12 {
                let norms: Vec<f64> = if i < 6 {
                    let sigma = 0.25 * i as f64;
                    (0..=40).map(|n| (1.0 + n as f64).powf(-sigma)).collect()
                } else {
                    use rand::Rng;
                    (0..=40).map(|_| rng.random::<f64>()).collect()
                };
                let lhs = sobolev_norm(family, &norms, s_star);
                let rhs = hermite_closed_form(&norms, p, d)?;
                let ratio = lhs / rhs;
                rows.push(SweepRow {
                    family: family.label().into(),
                    d,
                    p,
                    s_or_param: i as f64,
                    lhs,
                    rhs,
                    ratio,
                    band_lo: 0.0,
                    band_hi: band,
                    pass: ratio <= band,
                });
            }
        }
        Family::TorusFourier => unreachable!(),
    }
    Ok(rows)
}

/// Fact that square functions of shifted indicators are not `L^p`-bounded:
/// with `f_n = 1_{[n, n+1)}` and shifts `T_n f = f(· + n)`, returns
/// `(∫ (Σ|T_n f_n|²)^{p/2}, ∫ (Σ|f_n|²)^{p/2})`, exactly `(N^{p/2}, N)`.
pub fn r_boundedness_counterexample(p: f64, n: usize) -> Result<(f64, f64)> {
    if !(p >= 1.0) || n == 0 {
        return Err(Error::Domain(format!("need p >= 1 and N >= 1, got p={p}, N={n}")));
    }
    // piecewise-constant representation on the unit cells [k, k+1), k < N
    let mut shifted = vec![0.0f64; n];
    let mut plain = vec![0.0f64; n];
    for m in 0..n {
        plain[m] += 1.0;
        shifted[0] += 1.0;
    }
    let integral = |sq: &[f64]| sq.iter().map(|s| s.powf(p / 2.0)).sum::<f64>();
    Ok((integral(&shifted), integral(&plain)))
}

/// Rule on `[a, b]` for one-dimensional profiles.
pub fn profile_rule(a: f64, b: f64, panels: usize) -> Arc<Rule> {
    Arc::new(crate::measure::QuadratureRule::interval(a, b, panels, crate::measure::PANEL_ORDER))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert!((hurwitz_zeta(1.5, 1.0).unwrap() - 2.612_375_348_685_488).abs() < 1e-12);
        assert!((hurwitz_zeta(3.0, 1.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-13);
        let direct: f64 = (0..5).map(|k| (2.5 + k as f64).powf(-2.0)).sum::<f64>() + hurwitz_zeta(2.0, 7.5).unwrap();
        assert!((hurwitz_zeta(2.0, 2.5).unwrap() - direct).abs() < 1e-14);
        assert!(hurwitz_zeta(1.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let delta = [0.0, 1.0];
        let y = y_closed_form(&delta, 2.0, 2).unwrap();
        assert!((y - 2.612_375_348_685_488f64.sqrt()).abs() < 1e-12);
        assert!((y - 1.6163).abs() < 1e-4);
        let z = z_closed_form(&delta, 5.0, 2).unwrap();
        assert!((z - 1.202_056_903_159_594_2f64.powf(0.2)).abs() < 1e-12);
        assert!((z - 1.0375).abs() < 1e-4);
        assert_eq!(y_closed_form(&[0.0, 0.0, 0.0], 3.0, 2).unwrap(), 0.0);
        assert!(z_closed_form(&delta, 4.0, 2).is_err());
    }

    #[test]
    fn hermite_closed_single_level() {
        let (n0, d, p) = (5usize, 2usize, 4.0);
        let mut norms = vec![0.0; n0 + 1];
        norms[n0] = 2.0;
        let direct = ((1..=n0).map(|n| (n as f64).powf(d as f64 / 2.0 - 1.0)).sum::<f64>()).powf(1.0 / p)
            * 2.0
            * (n0 as f64).powf(-(d as f64) / 4.0);
        assert!((hermite_closed_form(&norms, p, d).unwrap() - direct).abs() < 1e-12);
        assert_eq!(hermite_closed_form(&[3.0], p, d).unwrap(), 3.0);
    }

    #[test]
    fn quadrature_at_two_is_l2() {
        let norms = [0.0, 0.3, 0.0, 1.2, 0.7];
        let l2 = norms.iter().map(|x| x * x).sum::<f64>().sqrt();
        for f in [Family::HermiteOscillator { d: 2 }, Family::SphereHighest { d: 2 }, Family::SphereZonal { d: 3 }, Family::TorusFourier] {
            let v = plp_norm_quadrature(f, &norms, 2.0).unwrap();
            assert!((v.value - l2).abs() < 1e-8, "{f:?}");
        }
        let t = plp_norm_quadrature(Family::TorusFourier, &norms, 5.0).unwrap();
        assert!((t.value - l2).abs() < 1e-12);
    }

    #[test]
    fn single_level_quadrature() {
        let f = Family::HermiteOscillator { d: 2 };
        let mut norms = vec![0.0; 8];
        norms[7] = 1.7;
        let v = plp_norm_quadrature(f, &norms, 4.0).unwrap().value;
        let s = crate::spectral::sqrt_spectral_lp(f, 7, 4.0).unwrap().value;
        assert!((v - 1.7 * s / (8f64).sqrt()).abs() < 1e-7 * v);
    }

    #[test]
    fn log_family_flips_at_one() {
        let p0 = 6.0;
        let f = Family::SphereZonal { d: 2 };
        assert!(!membership(f, &zonal_log_family(2, p0, 0.5), p0).unwrap());
        assert!(membership(f, &zonal_log_family(2, p0, 1.5), p0).unwrap());
        for beta in [0.5, 1.5] {
            let pc = critical_exponent(f, &zonal_log_family(2, p0, beta)).unwrap();
            assert!((pc - p0).abs() < 1e-2);
        }
        assert_eq!(critical_exponent(f, &CoeffModel::Geometric { ratio: 0.5 }).unwrap(), f64::INFINITY);
        let y = Family::SphereHighest { d: 2 };
        let m = CoeffModel::PowerLog { sigma: 0.5, tau: 1.0 };
        for p in [2.001, 2.5, 4.0, 30.0] {
            assert!(!membership(y, &m, p).unwrap());
        }
    }

    #[test]
    fn numeric_log_slope() {
        for beta in [0.5, 1.5] {
            let s = zonal_summand_log_slope(2, &zonal_log_family(2, 6.0, beta), 6.0, 8, 20).unwrap();
            assert!((s + beta).abs() < 0.35, "beta={beta} slope={s}");
        }
    }

    #[test]
    fn sobolev_examples() {
        let f = Family::HermiteOscillator { d: 2 };
        assert!((sobolev_norm(f, &[3.0, 4.0], 0.0) - 5.0).abs() < 1e-15);
        let mut e = vec![0.0; 6];
        e[5] = 1.0;
        assert!((sobolev_norm(f, &e, 1.5) - 6f64.powf(0.75)).abs() < 1e-12);
        assert!((sobolev_norm(Family::SphereZonal { d: 2 }, &e, 1.5) - 6f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn defect_of_indicator_and_gaussian() {
        let rule = profile_rule(0.0, 3.0, 6);
        let ind = SampledFunction::from_fn(rule.clone(), |_| 2.5).unwrap();
        assert!((interpolation_defect(&ind, 2.0, 4.0, 64).unwrap().q - 1.0).abs() < 1e-6);
        let closed = interpolation_defect_with(|p| (std::f64::consts::PI / p).powf(0.5 / p), 2.0, 4.0, 64).unwrap();
        let rule = profile_rule(-9.0, 9.0, 40);
        let g = SampledFunction::from_fn(rule, |x| (-x[0] * x[0]).exp()).unwrap();
        let quad = interpolation_defect(&g, 2.0, 4.0, 64).unwrap();
        assert!((quad.q - closed.q).abs() < 1e-4);
        assert!(closed.q > 1.0);
    }

    #[test]
    fn witness_of_indicator() {
        let rule = profile_rule(0.0, 2.0, 4);
        let ind = SampledFunction::from_fn(rule, |x| if x[0] <= 2.0 { 1.0 } else { 0.0 }).unwrap();
        let w = holder_witness(&ind, 2.0, 4.0).unwrap();
        assert!(w.psi.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
        assert!(w.products.iter().all(|x| (x - 1.0).abs() < 1e-10));
        assert!(w.holds(1e-6));
        assert!(holder_witness(&ind, 1.2, 1.5).is_err());
    }

    #[test]
    fn counterexample_values() {
        assert_eq!(r_boundedness_counterexample(4.0, 4).unwrap(), (16.0, 4.0));
        assert_eq!(r_boundedness_counterexample(2.0, 7).unwrap(), (7.0, 7.0));
        assert_eq!(r_boundedness_counterexample(3.0, 1).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn duality_bound() {
        let u = [0.0, 1.0, 0.5, 0.2, 0.9];
        let w = [0.0, 0.3, 1.0, 0.7, 0.1];
        let (lhs, rhs) = duality_check(Family::SphereZonal { d: 2 }, &u, &w, 5.0).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-8));
        let direct: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!((lhs - direct).abs() < 1e-8);
    }
}
