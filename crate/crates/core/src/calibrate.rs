//! Fits behind the frozen constants, plus small regression helpers.

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

use rand::Rng;

use crate::mc::{derive_seed, stream_rng};
use crate::plp::{hermite_closed_form, level_norms, plp_norm_quadrature, y_closed_form, z_closed_form};
use crate::specfun::{hermite_h, muckenhoupt_main, muckenhoupt_range};
use crate::spectral::{osc_concentration_report, ConcentrationOptions, Family, OscSpectral, RadialGrid};
use crate::Result;

/// `max |h_n(x) − main(n, x)| / ((2n+1)^{1/2} (2n+1−x²)^{−7/4})` over the
/// levels `1..=n_max` in steps of `step` and `points` abscissae per level.
pub fn muckenhoupt_error_ratio(n_max: usize, step: usize, points: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in (1..=n_max).step_by(step.max(1)) {
        let hi: f64 = muckenhoupt_range(n);
        let m = (2 * n + 1) as f64;
        for i in 0..=points {
            let x = (hi * i as f64 / points as f64).min(hi);
            let err = (hermite_h::<f64>(n, x) - muckenhoupt_main(n, x)?).abs();
            worst = worst.max(err / (m.sqrt() * (m - x * x).powf(-1.75)));
        }
    }
    Ok(worst)
}

/// Largest `γ` with `e_d(n, r) e^{γr²} ≤ C n^{d/2−1}` on the tail grid of the
/// concentration report, `C` being the inner maximum.  Returns `(γ, C)`.
pub fn fit_tail_gamma(d: usize, n: usize) -> Result<(f64, f64)> {
    let opts = ConcentrationOptions { gamma: 0.0, ..Default::default() };
    let rep = osc_concentration_report(d, n, 0.2, opts)?;
    let turn = ((2 * n + 1) as f64).sqrt();
    let norm = (n as f64).powf(d as f64 / 2.0 - 1.0);
    let tail = RadialGrid::linspace(turn, 2.0 * turn + 10.0, 2 * opts.points);
    let vals = OscSpectral::global().on_grid(d, n, &tail);
    let gamma = tail
        .r
        .iter()
        .zip(vals.iter())
        .filter(|(_, &v)| v > 0.0)
        .map(|(&r, &v)| (rep.inner_max * norm / v).ln() / (r * r))
        .fold(f64::INFINITY, f64::min);
    Ok((gamma, rep.inner_max))
}

/// Coefficient instances for the closed-form comparisons: power laws,
/// i.i.d. uniform blocks, single levels and lacunary sequences, truncated at
/// most at `n_cap`.
pub fn closed_form_instances(count: usize, n_cap: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(derive_seed(seed, "closed-form"), 0);
    (0..count)
        .map(|i| {
            let n = rng.random_range(4..=n_cap);
            let mut a = vec![0.0; n + 1];
            match i % 4 {
                0 => {
                    let sigma = rng.random_range(0.0..1.5);
                    for (k, x) in a.iter_mut().enumerate().skip(1) {
                        *x = (k as f64).powf(-sigma);
                    }
                }
                1 => {
                    for x in a.iter_mut().skip(1) {
                        *x = rng.random_range(-1.0..1.0);
                    }
                }
                2 => a[n] = rng.random_range(0.5..2.0),
                _ => {
                    let sigma = rng.random_range(0.0..1.0);
                    let mut k = 1;
                    while k <= n {
                        a[k] = (k as f64).powf(-sigma);
                        k *= 2;
                    }
                }
            }
            a
        })
        .collect()
}

/// Largest level used by the closed-form instances of a family.
pub fn closed_form_cap(family: Family) -> usize {
    match family {
        Family::HermiteOscillator { .. } => 30,
        _ => 48,
    }
}

/// `closed form / quadrature` on each instance.
pub fn closed_form_ratios(family: Family, p: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    let d = family.d();
    closed_form_instances(count, closed_form_cap(family), seed)
        .into_iter()
        .map(|a| {
            let mut a = a;
            if matches!(family, Family::HermiteOscillator { .. }) {
                a.iter_mut().for_each(|x| *x = x.abs());
            }
            let closed = match family {
                Family::SphereHighest { .. } => y_closed_form(&a, p, d)?,
                Family::SphereZonal { .. } => z_closed_form(&a, p, d)?,
                Family::HermiteOscillator { .. } => hermite_closed_form(&a, p, d)?,
                Family::TorusFourier => unreachable!("no closed form for the torus"),
            };
            let quad = plp_norm_quadrature(family, &level_norms(family, &a), p)?.value;
            Ok(closed / quad)
        })
        .collect()
}

/// The `(family, p)` cells with frozen closed-form bands.
pub fn closed_form_cells() -> Vec<(Family, f64)> {
    let mut cells = Vec::new();
    for d in [2usize, 3] {
        for p in [3.0, 4.0, 6.0] {
            cells.push((Family::SphereHighest { d }, p));
            cells.push((Family::HermiteOscillator { d }, p));
        }
        let zp: &[f64] = if d == 2 { &[5.0, 6.0, 8.0] } else { &[4.0, 5.0, 6.0] };
        for &p in zp {
            cells.push((Family::SphereZonal { d }, p));
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        assert!((ls_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    #[ignore]
    fn print_fits() {
        println!("muckenhoupt C = {}", muckenhoupt_error_ratio(300, 1, 400).unwrap());
        println!("tail (gamma, C) = {:?}", fit_tail_gamma(2, 100).unwrap());
        for (f, p) in closed_form_cells() {
            let r = closed_form_ratios(f, p, 24, 1).unwrap();
            let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = r.iter().cloned().fold(0.0, f64::max);
            println!("{} d={} p={p}: [{lo:.4}, {hi:.4}]", f.label(), f.d());
        }
        for d in [2usize, 3] {
            for p in [3.0, 4.0, 6.0] {
                for f in [Family::HermiteOscillator { d }, Family::SphereHighest { d }, Family::SphereZonal { d }] {
                    let rows = crate::plp::embedding_sweep(f, p).unwrap();
                    let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
                    let fails = rows.iter().filter(|r| !r.pass).count();
                    println!("embed {} d={d} p={p}: max ratio {worst:.4}, fails {fails}/{}", f.label(), rows.len());
                }
            }
        }
        for (d, dens) in [(20usize, 0.3), (60, 0.1), (100, 0.05)] {
            let mut rng = stream_rng(5, d as u64);
            let a = crate::randmat::sparse_weights(d, dens, &mut rng);
            let r = crate::randmat::latala_check(&a, 400, 3, crate::mc::ChunkPlan::new(64)).unwrap();
            println!("latala d={d}: {:.4}", r.ratio);
        }
    }
}
