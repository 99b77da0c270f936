//! Hermite functions, symmetric Jacobi polynomials and the sphere harmonics
//! `Y_n`, `Z_n` with their normalization constants.

use num_complex::Complex64;

use crate::measure::sphere_area;
use crate::{lit, Error, Real, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (reflection below one half).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    if x > lit(20.0) {
        // Stirling with four correction terms, accurate to round-off here.
        let inv = x.recip();
        let inv2 = inv * inv;
        let series = inv
            * (lit::<T>(1.0 / 12.0)
                - inv2 * (lit::<T>(1.0 / 360.0) - inv2 * (lit::<T>(1.0 / 1260.0) - inv2 * lit::<T>(1.0 / 1680.0))));
        return (x - half) * x.ln() - x + lit::<T>(0.918_938_533_204_672_8) + series;
    }
    let x = x - T::one();
    let mut a = lit::<T>(LANCZOS[0]);
    let t = x + lit::<T>(LANCZOS_G + 0.5);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + lit::<T>(c) / (x + T::from_usize(i).unwrap());
    }
    lit::<T>(0.918_938_533_204_672_8) + (x + half) * t.ln() - t + a.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta<T: Real>(a: T, b: T) -> T {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln binom(n + α, n)` for real `α > -1`.
pub fn ln_binom<T: Real>(n: usize, alpha: T) -> T {
    let nf = T::from_usize(n).unwrap();
    ln_gamma(nf + alpha + T::one()) - ln_gamma(nf + T::one()) - ln_gamma(alpha + T::one())
}

/// Values `h_0(x), …, h_{n_max}(x)` of the L²-normalized Hermite functions.
///
/// The Gaussian weight is carried as a separate logarithmic scale so the
/// recurrence never underflows even when `e^{-x²/2}` alone would.
pub fn hermite_all<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let big = T::max_value().sqrt().sqrt();
    let ln_big = big.ln();
    let base = -x * x * lit(0.5) - T::PI().ln() * lit(0.25);
    let mut scale = T::zero();
    let mut factor = scaled_factor(base + scale);
    let mut prev = T::zero();
    let mut cur = T::one();
    out.push(finish(cur, factor, base + scale));
    for k in 0..n_max {
        let kf = T::from_usize(k).unwrap();
        let k1 = kf + T::one();
        let next = x * (lit::<T>(2.0) / k1).sqrt() * cur - (kf / k1).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            cur = cur / big;
            prev = prev / big;
            scale = scale + ln_big;
            factor = scaled_factor(base + scale);
        }
        out.push(finish(cur, factor, base + scale));
    }
    out
}

#[inline]
fn scaled_factor<T: Real>(log_factor: T) -> Option<T> {
    let f = log_factor.exp();
    // Keep a margin above the subnormal range so m * f stays exact to round-off.
    if f.is_finite() && f > T::min_positive_value() * lit(1e30) {
        Some(f)
    } else {
        None
    }
}

#[inline]
fn finish<T: Real>(m: T, factor: Option<T>, log_factor: T) -> T {
    match factor {
        Some(f) => m * f,
        None => {
            if m == T::zero() {
                T::zero()
            } else {
                m.signum() * (m.abs().ln() + log_factor).exp()
            }
        }
    }
}

/// L²-normalized Hermite function `h_n(x)`.
pub fn hermite_h<T: Real>(n: usize, x: T) -> T {
    *hermite_all(n, x).last().unwrap()
}

/// `h_{2k}(0) = (-1)^k √((2k)!) / (k! 2^k π^{1/4})`, evaluated in log space.
pub fn hermite_zero<T: Real>(k: usize) -> T {
    let kf = T::from_usize(k).unwrap();
    let two = lit::<T>(2.0);
    let ln = ln_gamma(two * kf + T::one()) * lit(0.5)
        - ln_gamma(kf + T::one())
        - kf * two.ln()
        - T::PI().ln() * lit(0.25);
    let sign = if k % 2 == 0 { T::one() } else { -T::one() };
    sign * ln.exp()
}

/// Symmetric Jacobi polynomial `P_n^{(α,α)}(x)`.
pub fn jacobi_p<T: Real>(n: usize, alpha: T, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let one = T::one();
    let mut p0 = one;
    let mut p1 = (alpha + one) * x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let two = lit::<T>(2.0);
        let num = (kf + alpha) * ((two * kf + two * alpha - one) * x * p1 - (kf + alpha - one) * p0);
        let p2 = num / (kf * (kf + two * alpha));
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `Φ(u) = ½ arcsin u + ½ u √(1 − u²)` on `[0, 1]`.
pub fn phi_fn<T: Real>(u: T) -> Result<T> {
    if !(u >= T::zero() && u <= T::one()) {
        return Err(Error::Domain(format!("phi_fn needs u in [0,1], got {u:?}")));
    }
    let half = lit::<T>(0.5);
    Ok(half * u.asin() + half * u * (T::one() - u * u).sqrt())
}

/// Upper end of the validity range of [`muckenhoupt_main`].
pub fn muckenhoupt_range<T: Real>(n: usize) -> T {
    let m = T::from_usize(2 * n + 1).unwrap();
    m.sqrt() - m.powf(lit(-1.0 / 6.0))
}

/// Oscillatory main term approximating `h_n(x)` inside the turning point.
pub fn muckenhoupt_main<T: Real>(n: usize, x: T) -> Result<T> {
    let hi = muckenhoupt_range::<T>(n);
    if !(x >= T::zero() && x <= hi) {
        return Err(Error::Domain(format!("muckenhoupt_main needs 0 <= x <= {hi:?}, got {x:?}")));
    }
    let m = T::from_usize(2 * n + 1).unwrap();
    let amp = lit::<T>(2.0).sqrt() / (T::PI().sqrt() * (m - x * x).powf(lit(0.25)));
    let phase = m * phi_fn((x / m.sqrt()).min(T::one()))? - T::from_usize(n).unwrap() * T::FRAC_PI_2();
    Ok(amp * phase.cos())
}

/// `c_{d,n}` with `c^{-2} = μ_{d-2}(S^{d-2}) π B(n+1, (d-1)/2)`.
pub fn y_norm_const<T: Real>(d: usize, n: usize) -> T {
    assert!(d >= 2, "y_norm_const needs d >= 2");
    let b = ln_beta(T::from_usize(n + 1).unwrap(), T::from_usize(d - 1).unwrap() * lit(0.5));
    let ln_inv_sq = sphere_area::<T>(d - 2).ln() + T::PI().ln() + b;
    (-ln_inv_sq * lit(0.5)).exp()
}

/// Exact `∫_{S^d} |Y_n|^p dμ = c^p μ_{d-2} π B(np/2 + 1, (d-1)/2)`.
pub fn y_lp_power_exact(d: usize, n: usize, p: f64) -> f64 {
    let c: f64 = y_norm_const(d, n);
    let ln = p * c.ln() + sphere_area::<f64>(d - 2).ln() + std::f64::consts::PI.ln()
        + ln_beta(n as f64 * p / 2.0 + 1.0, (d as f64 - 1.0) / 2.0);
    ln.exp()
}

/// Zonal eigenfunction `Z_n(Θ) = √n P_n^{((d-2)/2,(d-2)/2)}(cos Θ)`.
pub fn zonal_z<T: Real>(d: usize, n: usize, theta: T) -> T {
    let alpha = T::from_usize(d).unwrap() * lit(0.5) - T::one();
    T::from_usize(n).unwrap().sqrt() * jacobi_p(n, alpha, theta.cos())
}

/// Exact `‖Z_n‖_{L²(S^d)}` from the Jacobi norm.
pub fn zonal_l2_norm(d: usize, n: usize) -> f64 {
    let a = d as f64 / 2.0 - 1.0;
    let nf = n as f64;
    let ln_h = (2.0 * a + 1.0) * 2f64.ln() + 2.0 * ln_gamma(nf + a + 1.0)
        - (2.0 * nf + 2.0 * a + 1.0).ln()
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + 2.0 * a + 1.0);
    (sphere_area::<f64>(d - 1) * nf * ln_h.exp()).sqrt()
}

/// Largest `c ≤ π/2` with `P_n(cos Θ) ≥ ½ P_n(1)` for all `Θ ≤ c/n`, `n ≤ n_max`.
pub fn jacobi_band_constant(alpha: f64, n_max: usize) -> Result<f64> {
    if alpha <= -1.0 || n_max == 0 {
        return Err(Error::Domain("jacobi_band_constant needs alpha > -1, n_max >= 1".into()));
    }
    const GRID: usize = 16;
    let holds = |c: f64| {
        (1..=n_max).all(|n| {
            let half_top = 0.5 * jacobi_p(n, alpha, 1.0);
            (1..=GRID).all(|j| {
                let theta = c / n as f64 * j as f64 / GRID as f64;
                jacobi_p(n, alpha, theta.cos()) >= half_top
            })
        })
    };
    let lo_min = 1e-3;
    if !holds(lo_min) {
        return Err(Error::Numerical(format!("no band constant >= {lo_min} for alpha = {alpha}")));
    }
    let mut lo = lo_min;
    let mut hi = std::f64::consts::FRAC_PI_2;
    if holds(hi) {
        return Ok(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// A Hermite function evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteEval {
    pub n: usize,
    pub x: f64,
}

impl HermiteEval {
    pub fn value(&self) -> f64 {
        hermite_h(self.n, self.x)
    }
}

/// A symmetric Jacobi polynomial evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiEval {
    pub n: usize,
    pub alpha: f64,
    pub x: f64,
}

impl JacobiEval {
    pub fn value(&self) -> Result<f64> {
        if self.alpha <= -1.0 || self.x.abs() > 1.0 {
            return Err(Error::Domain(format!("jacobi needs alpha > -1 and |x| <= 1: {self:?}")));
        }
        Ok(jacobi_p(self.n, self.alpha, self.x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum HarmonicKind {
    Highest,
    Zonal,
    TildeHighest,
    TildeZonal,
}

/// One of the concrete eigenfunctions on `S^d` used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereHarmonic {
    pub d: usize,
    pub n: usize,
    pub kind: HarmonicKind,
    c: f64,
}

impl SphereHarmonic {
    pub fn new(d: usize, n: usize, kind: HarmonicKind) -> Result<Self> {
        if d < 2 || n < 1 {
            return Err(Error::Domain(format!("sphere harmonic needs d >= 2, n >= 1 (d={d}, n={n})")));
        }
        let c = match kind {
            HarmonicKind::Highest | HarmonicKind::TildeHighest => y_norm_const(d, n),
            HarmonicKind::Zonal => 1.0,
            HarmonicKind::TildeZonal => crate::constants::band_constant(d),
        };
        Ok(Self { d, n, kind, c })
    }

    pub fn is_band(&self) -> bool {
        matches!(self.kind, HarmonicKind::Highest | HarmonicKind::TildeHighest)
    }

    /// `|Y_n|` or `Ỹ_n` as a function of `ρ = √(x₁² + x₂²)`.
    pub fn band_amplitude(&self, rho: f64) -> f64 {
        match self.kind {
            HarmonicKind::Highest => self.c * rho.powi(self.n as i32),
            HarmonicKind::TildeHighest => {
                if rho.clamp(-1.0, 1.0).acos() <= 1.0 / (self.n as f64).sqrt() {
                    (self.n as f64).powf((self.d as f64 - 1.0) / 4.0)
                } else {
                    0.0
                }
            }
            _ => f64::NAN,
        }
    }

    /// `Y_n = c ρ^n e^{inθ}`.
    pub fn highest_value(&self, rho: f64, theta: f64) -> Complex64 {
        Complex64::from_polar(self.c * rho.powi(self.n as i32), self.n as f64 * theta)
    }

    /// `Z_n(Θ)` or `Z̃_n(Θ)`.
    pub fn zonal_value(&self, theta: f64) -> f64 {
        match self.kind {
            HarmonicKind::Zonal => zonal_z(self.d, self.n, theta),
            HarmonicKind::TildeZonal => {
                if theta <= self.c / self.n as f64 {
                    zonal_z(self.d, self.n, theta)
                } else {
                    0.0
                }
            }
            _ => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hermite_examples() {
        assert!((hermite_h(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_h(1, 0.0_f64), 0.0);
        let h2 = -(2f64.sqrt()) / (2.0 * PI.powf(0.25));
        assert!((hermite_h(2, 0.0) - h2).abs() < 1e-15);
        assert!((h2 + 0.531126).abs() < 1e-6);
    }

    #[test]
    fn hermite_zero_examples() {
        assert!((hermite_zero::<f64>(0) - PI.powf(-0.25)).abs() < 1e-14);
        assert!((hermite_zero::<f64>(1) + 0.531_125_966).abs() < 1e-8);
    }

    #[test]
    fn hermite_zero_scaled_band() {
        for k in (0..=10_000).step_by(7) {
            let v = hermite_zero::<f64>(k).abs() * ((k + 1) as f64).powf(0.25);
            assert!((0.5..=1.0).contains(&v), "k={k} v={v}");
        }
    }

    #[test]
    fn hermite_single_precision_agrees() {
        for n in [0usize, 3, 10, 40] {
            for x in [0.3f64, 1.7, 4.2] {
                let a = hermite_h(n, x);
                let b = hermite_h(n, x as f32) as f64;
                assert!((a - b).abs() < 1e-5, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn hermite_far_tail_is_finite() {
        for n in [0usize, 100, 2000] {
            let x = 2.0 * ((2 * n + 1) as f64).sqrt();
            for v in hermite_all(n, x) {
                assert!(v.is_finite());
            }
            let v = hermite_h(n, 0.9 * ((2 * n + 1) as f64).sqrt());
            assert!(v.is_finite() && v != 0.0);
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_p(0, 0.7, 0.3), 1.0);
        for alpha in [0.0f64, 0.5, 1.0, 2.5] {
            for n in [1usize, 2, 7, 40] {
                let exact = ln_binom(n, alpha).exp();
                let v = jacobi_p(n, alpha, 1.0);
                assert!((v / exact - 1.0).abs() < 1e-12, "n={n} a={alpha}");
            }
        }
        // Legendre P_3 = (5x³ − 3x)/2
        let x = 0.37f64;
        assert!((jacobi_p(3, 0.0, x) - (5.0 * x * x * x - 3.0 * x) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_fn(0.0).unwrap(), 0.0);
        assert!((phi_fn(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        let v = phi_fn(0.5).unwrap();
        assert!((v - (PI / 12.0 + 3f64.sqrt() / 8.0)).abs() < 1e-15);
        assert!((v - 0.478306).abs() < 1e-6);
        assert!(phi_fn(1.5).is_err());
        assert!(phi_fn(-0.1).is_err());
    }

    #[test]
    fn muckenhoupt_examples() {
        let v = muckenhoupt_main(2, 0.0).unwrap();
        assert!((v + 2f64.sqrt() / (PI.sqrt() * 5f64.powf(0.25))).abs() < 1e-15);
        assert!((v + 0.5336).abs() < 1e-4);
        assert!(muckenhoupt_main(2, 2.3).is_err());
    }

    #[test]
    fn y_norm_examples() {
        let c: f64 = y_norm_const(2, 0);
        assert!((c - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-15);
        for d in [2usize, 3, 4] {
            for n in [10usize, 50, 200, 500] {
                let v = y_norm_const::<f64>(d, n) * (n as f64).powf(-(d as f64 - 1.0) / 4.0);
                assert!((0.1..=2.0).contains(&v), "d={d} n={n} v={v}");
            }
        }
    }

    #[test]
    fn zonal_norm_matches_legendre() {
        // d = 2: ‖Z_n‖² = 2π · 2n/(2n+1)
        for n in [1usize, 5, 80] {
            let exact = (2.0 * PI * 2.0 * n as f64 / (2.0 * n as f64 + 1.0)).sqrt();
            assert!((zonal_l2_norm(2, n) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn band_constant_examples() {
        let c = jacobi_band_constant(0.0, 1).unwrap();
        assert!((c - PI / 3.0).abs() < 1e-9);
        for alpha in [0.0, 0.5, 1.0] {
            let a = jacobi_band_constant(alpha, 40).unwrap();
            let b = jacobi_band_constant(alpha, 80).unwrap();
            assert!((a / b - 1.0).abs() <= 0.1);
        }
        assert!(jacobi_band_constant(-1.5, 3).is_err());
    }

    #[test]
    fn sphere_harmonic_kinds() {
        assert!(SphereHarmonic::new(1, 3, HarmonicKind::Zonal).is_err());
        let y = SphereHarmonic::new(2, 4, HarmonicKind::Highest).unwrap();
        assert!((y.highest_value(0.7, 1.1).norm() - y.band_amplitude(0.7)).abs() < 1e-15);
        let z = SphereHarmonic::new(3, 6, HarmonicKind::TildeZonal).unwrap();
        assert_eq!(z.zonal_value(1.0), 0.0);
        assert_eq!(z.zonal_value(0.01), zonal_z(3, 6, 0.01));
    }
}
