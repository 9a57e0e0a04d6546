//! Diagnostic and experimental layer: concentration functions, trichotomy
//! classification, orbit distance, subadditivity scans and the stability
//! experiment.
//!
//! Suprema over translation centers are restricted to grid translates
//! throughout; this is a lower bound on the continuum supremum and is the
//! conservative side for every conclusion drawn here.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::fft::fft_nd;
use crate::fracops;
use crate::functional::{self, mass, normalize_to_mass, Params, State};
use crate::grid::{Field, Grid};
use crate::groundstate::{
    minimize, scalar_ground_state, MinimizeConfig, MinimizerResult,
};
use crate::rng::StreamRng;
use crate::{dynamics, Complex64, Result};

/// Concentration function Q(t) = max over grid centers y of the mass of
/// ρ = |u₁|² + |u₂|² inside the (minimum-image) ball B_t(y), for each radius.
///
/// Computed as a circular convolution of ρ with the ball indicator. Radii
/// beyond L/2 would wrap the window and are rejected.
pub fn concentration_function(state: &State, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let grid = state.grid().clone();
    let half_l = 0.5 * grid.box_length();
    for &t in radii {
        if t.is_nan() || t <= 0.0 || t > half_l {
            return Err(CoreError::InvalidArgument(alloc::format!(
                "window radius {t} outside (0, L/2]"
            )));
        }
    }
    let n = grid.node_count();
    let mut rho: Vec<Complex64> = (0..n)
        .map(|i| {
            Complex64::new(
                state.u1.values()[i].norm_sqr() + state.u2.values()[i].norm_sqr(),
                0.0,
            )
        })
        .collect();
    fft_nd(grid.dim(), grid.points_per_axis(), &mut rho, false);

    // Offset length of the index difference k per axis: min(k, M-k)·h.
    let m = grid.points_per_axis();
    let offset_sq = |flat: usize| -> f64 {
        let idx = grid.unflatten(flat);
        idx[..grid.dim()]
            .iter()
            .map(|&k| {
                let d = k.min(m - k) as f64 * grid.spacing();
                d * d
            })
            .sum()
    };

    let mut out = Vec::with_capacity(radii.len());
    for &t in radii {
        let mut ind: Vec<Complex64> = (0..n)
            .map(|flat| {
                if offset_sq(flat) <= t * t {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        fft_nd(grid.dim(), m, &mut ind, false);
        let mut conv: Vec<Complex64> = rho.iter().zip(ind.iter()).map(|(a, b)| a * b).collect();
        fft_nd(grid.dim(), m, &mut conv, true);
        let best = conv.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        out.push((t, best.max(0.0) * grid.cell_volume()));
    }
    Ok(out)
}

/// Trichotomy label for a finite family standing in for a minimizing sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceClass {
    Compact,
    Vanishing,
    Dichotomy,
}

/// Cutoffs for the finite-family trichotomy. The paper's trichotomy is
/// asymptotic; a finite family needs explicit thresholds.
#[derive(Debug, Clone, Copy)]
pub struct TrichotomyThresholds {
    /// Compact when Q(t_max) ≥ (1 − eps_compact) · total mass.
    pub eps_compact: f64,
    /// Vanishing when Q(window_radius) ≤ eps_vanish_frac · total mass.
    pub eps_vanish_frac: f64,
    /// Large-window radius; defaults to L/4.
    pub t_max: Option<f64>,
}

impl Default for TrichotomyThresholds {
    fn default() -> Self {
        TrichotomyThresholds { eps_compact: 0.01, eps_vanish_frac: 0.05, t_max: None }
    }
}

/// Classify the terminal member of a family: compact if essentially all mass
/// fits in the large window, vanishing if the small fixed window catches
/// almost none of it anywhere, dichotomy otherwise.
pub fn classify_sequence(
    states: &[State],
    window_radius: f64,
    thresholds: &TrichotomyThresholds,
) -> Result<SequenceClass> {
    let last = states
        .last()
        .ok_or_else(|| CoreError::InvalidArgument("empty state family".into()))?;
    let grid = last.grid();
    let t_max = thresholds.t_max.unwrap_or(0.25 * grid.box_length());
    let total = mass(&last.u1) + mass(&last.u2);
    if total == 0.0 {
        return Ok(SequenceClass::Vanishing);
    }
    let q = concentration_function(last, &[window_radius, t_max])?;
    let (q_window, q_tmax) = (q[0].1, q[1].1);
    if q_tmax >= (1.0 - thresholds.eps_compact) * total {
        Ok(SequenceClass::Compact)
    } else if q_window <= thresholds.eps_vanish_frac * total {
        Ok(SequenceClass::Vanishing)
    } else {
        Ok(SequenceClass::Dichotomy)
    }
}

/// Per-component L^q norms for each requested q.
pub fn vanishing_norms(state: &State, q_list: &[f64]) -> Result<Vec<(f64, (f64, f64))>> {
    for &q in q_list {
        if q < 1.0 {
            return Err(CoreError::InvalidArgument(alloc::format!("q={q} below 1")));
        }
    }
    Ok(q_list
        .iter()
        .map(|&q| (q, (functional::lp_norm(&state.u1, q), functional::lp_norm(&state.u2, q))))
        .collect())
}

/// Distance from `state` to the translation × phase orbit of `reference` in
/// the H^α product norm: min over shared grid translations y and independent
/// per-component phases of ‖u_j − e^{iθ_j} ref_j(· − y)‖_α.
///
/// The optimal phase for a given shift is closed-form (the argument of the
/// H^α pairing), and the pairing for *all* grid shifts at once is one FFT of
/// the weighted spectral product.
pub fn orbit_distance(state: &State, reference: &State, alpha: f64) -> Result<f64> {
    if state.grid() != reference.grid() {
        return Err(CoreError::GridMismatch);
    }
    let grid = state.grid().clone();
    let n = grid.node_count();
    let w = grid.cell_volume() / n as f64;
    let weight: Vec<f64> =
        (0..n).map(|flat| (1.0 + grid.wavenumber_sq(flat)).powf(alpha)).collect();

    // d²(y) = Σ_j (‖u_j‖²_α + ‖ref_j‖²_α − 2 |⟨u_j, ref_j(·−y)⟩_α|); the
    // pairing for every grid shift y at once is a forward transform of the
    // weighted spectral product, since exp(−i ξ_k · y_m) is the DFT kernel.
    let mut fixed = 0.0;
    let mut gain = vec![0.0f64; n];
    for (u, r) in [(&state.u1, &reference.u1), (&state.u2, &reference.u2)] {
        let us = u.spectrum();
        let rs = r.spectrum();
        let mut cross: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            fixed += weight[k] * (us[k].norm_sqr() + rs[k].norm_sqr());
            cross.push(weight[k] * us[k].conj() * rs[k]);
        }
        fft_nd(grid.dim(), grid.points_per_axis(), &mut cross, false);
        // The optimal per-component phase turns the pairing into its modulus.
        for (g, c) in gain.iter_mut().zip(cross.iter()) {
            *g += c.norm();
        }
    }
    let best_gain = gain.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let d_sq = w * (fixed - 2.0 * best_gain);
    Ok(d_sq.max(0.0).sqrt())
}

/// One row of the subadditivity table: masses, the three infima, the margin
/// Ê_{σ+τ} − Ê_σ − Ê_τ, and whether every inner solve converged.
#[derive(Debug, Clone, Copy)]
pub struct SubaddRow {
    pub sigma: (f64, f64),
    pub tau: (f64, f64),
    pub e_sigma: f64,
    pub e_tau: f64,
    pub e_sum: f64,
    pub margin: f64,
    pub valid: bool,
}

/// Numerical constrained infimum Ê at one mass pair; zero slots fall back to
/// the single-component solver. Returns None when an inner solve fails to
/// converge.
pub fn constrained_infimum(
    masses: (f64, f64),
    base_params: &Params,
    config: &MinimizeConfig,
    grid: &Grid,
) -> Option<f64> {
    let (t1, t2) = masses;
    if t1 < 0.0 || t2 < 0.0 {
        return None;
    }
    if t1 == 0.0 && t2 == 0.0 {
        return Some(0.0);
    }
    if t1 == 0.0 {
        let r = scalar_ground_state(
            base_params.alpha,
            base_params.mu2,
            base_params.p2,
            t2,
            config,
            grid,
        )
        .ok()?;
        return r.converged.then_some(r.energy);
    }
    if t2 == 0.0 {
        let r = scalar_ground_state(
            base_params.alpha,
            base_params.mu1,
            base_params.p1,
            t1,
            config,
            grid,
        )
        .ok()?;
        return r.converged.then_some(r.energy);
    }
    let params = Params { tau1: t1, tau2: t2, ..*base_params };
    let r = minimize(&params, config, grid).ok()?;
    r.converged.then_some(r.energy)
}

/// Margins Ê_{σ+τ} − Ê_σ − Ê_τ over all admissible (σ, τ) combinations from
/// the given mass grid (σ + τ must have both components positive). Inner
/// solves are memoized across rows; a failed solve marks its rows invalid and
/// the scan continues.
pub fn subadditivity_scan(
    mass_grid: &[(f64, f64)],
    base_params: &Params,
    config: &MinimizeConfig,
    grid: &Grid,
) -> Vec<SubaddRow> {
    let mut cache: Vec<((f64, f64), Option<f64>)> = Vec::new();
    let mut infimum = |m: (f64, f64)| -> Option<f64> {
        if let Some((_, v)) = cache.iter().find(|(k, _)| *k == m) {
            return *v;
        }
        let v = constrained_infimum(m, base_params, config, grid);
        cache.push((m, v));
        v
    };
    let mut rows = Vec::new();
    for i in 0..mass_grid.len() {
        for j in i..mass_grid.len() {
            let sigma = mass_grid[i];
            let tau = mass_grid[j];
            if sigma == (0.0, 0.0) || tau == (0.0, 0.0) {
                continue;
            }
            let sum = (sigma.0 + tau.0, sigma.1 + tau.1);
            if !(sum.0 > 0.0 && sum.1 > 0.0) {
                continue;
            }
            let e_sigma = infimum(sigma);
            let e_tau = infimum(tau);
            let e_sum = infimum(sum);
            match (e_sigma, e_tau, e_sum) {
                (Some(a), Some(b), Some(c)) => rows.push(SubaddRow {
                    sigma,
                    tau,
                    e_sigma: a,
                    e_tau: b,
                    e_sum: c,
                    margin: c - a - b,
                    valid: true,
                }),
                _ => rows.push(SubaddRow {
                    sigma,
                    tau,
                    e_sigma: e_sigma.unwrap_or(f64::NAN),
                    e_tau: e_tau.unwrap_or(f64::NAN),
                    e_sum: e_sum.unwrap_or(f64::NAN),
                    margin: f64::NAN,
                    valid: false,
                }),
            }
        }
    }
    rows
}

/// One row of the stability table.
#[derive(Debug, Clone, Copy)]
pub struct StabilityRow {
    pub delta: f64,
    /// Sup over sampled times of the orbit distance to the reference.
    pub sup_distance: f64,
    /// Max relative mass drift per component over the run.
    pub mass_drift: (f64, f64),
    /// Max relative energy drift over the run.
    pub energy_drift: f64,
    pub aborted: bool,
}

/// Smooth random direction with unit H^α product norm, deterministic in
/// (seed, stream).
fn random_direction(grid: &Grid, alpha: f64, seed: u64, stream: u64) -> State {
    let mut rng = StreamRng::new(seed, stream);
    let cutoff_sq = {
        // Quarter-Nyquist low-pass keeps the direction well resolved.
        let xi_max = core::f64::consts::PI / grid.spacing();
        (0.25 * xi_max) * (0.25 * xi_max)
    };
    let make = |rng: &mut StreamRng| {
        let spec: Vec<Complex64> = (0..grid.node_count())
            .map(|flat| {
                let damp = (-grid.wavenumber_sq(flat) / (2.0 * cutoff_sq)).exp();
                Complex64::new(rng.normal(), rng.normal()) * damp
            })
            .collect();
        Field::from_spectrum(grid, spec)
    };
    let v1 = make(&mut rng);
    let v2 = make(&mut rng);
    let norm = (fracops::sobolev_norm_sq(&v1, alpha) + fracops::sobolev_norm_sq(&v2, alpha))
        .sqrt();
    let scale = 1.0 / norm;
    State {
        u1: Field::from_parts(grid.clone(), v1.values().iter().map(|v| v * scale).collect()),
        u2: Field::from_parts(grid.clone(), v2.values().iter().map(|v| v * scale).collect()),
    }
}

/// One stability run: perturb the reference minimizer by δ in H^α, project
/// back onto the mass spheres, evolve, and track the orbit distance.
pub fn stability_row(
    reference: &MinimizerResult,
    delta: f64,
    params: &Params,
    evolve_config: &dynamics::EvolveConfig,
    seed: u64,
    stream: u64,
) -> Result<StabilityRow> {
    let grid = reference.state.grid().clone();
    let start = if delta == 0.0 {
        reference.state.clone()
    } else {
        let dir = random_direction(&grid, params.alpha, seed, stream);
        let u1 = Field::from_parts(
            grid.clone(),
            reference
                .state
                .u1
                .values()
                .iter()
                .zip(dir.u1.values())
                .map(|(u, v)| u + delta * v)
                .collect(),
        );
        let u2 = Field::from_parts(
            grid.clone(),
            reference
                .state
                .u2
                .values()
                .iter()
                .zip(dir.u2.values())
                .map(|(u, v)| u + delta * v)
                .collect(),
        );
        State {
            u1: normalize_to_mass(&u1, params.tau1)?,
            u2: normalize_to_mass(&u2, params.tau2)?,
        }
    };
    let traj = dynamics::evolve_tracked(&start, params, evolve_config, Some(&reference.state))?;
    let dists = traj.orbit_distance.as_ref().expect("reference supplied");
    let sup_distance = dists.iter().fold(0.0f64, |a, &b| a.max(b));
    let drift = |series: &[f64]| -> f64 {
        let base = series.first().copied().unwrap_or(0.0);
        series
            .iter()
            .map(|&v| (v - base).abs() / base.abs().max(1e-300))
            .fold(0.0, f64::max)
    };
    Ok(StabilityRow {
        delta,
        sup_distance,
        mass_drift: (drift(&traj.mass1), drift(&traj.mass2)),
        energy_drift: drift(&traj.energy),
        aborted: traj.aborted_at_step.is_some(),
    })
}

/// Stability experiment over a δ ladder (serial; the CLI parallelizes rows).
pub fn stability_experiment(
    reference: &MinimizerResult,
    deltas: &[f64],
    params: &Params,
    evolve_config: &dynamics::EvolveConfig,
    seed: u64,
) -> Result<Vec<StabilityRow>> {
    deltas
        .iter()
        .enumerate()
        .map(|(i, &d)| stability_row(reference, d, params, evolve_config, seed, i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Profile;

    fn bump_state(grid: &Grid, centers: (f64, f64), width: f64, taus: (f64, f64)) -> State {
        let u1 = normalize_to_mass(
            &Profile::gaussian([centers.0, 0.0, 0.0], width).sample(grid),
            taus.0,
        )
        .unwrap();
        let u2 = normalize_to_mass(
            &Profile::gaussian([centers.1, 0.0, 0.0], width).sample(grid),
            taus.1,
        )
        .unwrap();
        State::new(u1, u2).unwrap()
    }

    #[test]
    fn concentration_of_single_and_split_bumps() {
        let grid = Grid::new(1, 256, 64.0).unwrap();
        let state = bump_state(&grid, (0.0, 0.0), 1.0, (1.0, 1.0));
        // Window almost as large as allowed captures everything.
        let q = concentration_function(&state, &[0.5 * 64.0 - grid.spacing()]).unwrap();
        assert!((q[0].1 - 2.0).abs() < 1e-6, "{}", q[0].1);

        // Two far-separated equal bumps: a small window sees half the mass.
        let split = bump_state(&grid, (-16.0, 16.0), 1.0, (1.0, 1.0));
        let q = concentration_function(&split, &[8.0]).unwrap();
        assert!((q[0].1 - 1.0).abs() < 1e-3, "{}", q[0].1);

        // Q is non-decreasing in the radius and bounded by the total mass.
        let radii: Vec<f64> = (1..=16).map(|i| i as f64 * 2.0).collect();
        let qs = concentration_function(&state, &radii).unwrap();
        for w in qs.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-10);
        }
        assert!(qs.iter().all(|&(_, v)| v <= 2.0 + 1e-9));

        assert!(concentration_function(&state, &[40.0]).is_err());
        assert!(concentration_function(&state, &[0.0]).is_err());
    }

    #[test]
    fn classify_three_regimes() {
        let grid = Grid::new(1, 512, 256.0).unwrap();
        let thresholds = TrichotomyThresholds::default();

        // Concentrated family → compact.
        let compact: Vec<State> =
            (0..3).map(|_| bump_state(&grid, (0.0, 0.0), 1.5, (1.0, 1.0))).collect();
        assert_eq!(
            classify_sequence(&compact, 2.0, &thresholds).unwrap(),
            SequenceClass::Compact
        );

        // Mass-preserving spreading family u_n = n^{-1/2} φ(x/n) → vanishing.
        let spreading: Vec<State> = [1.0f64, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
            .iter()
            .map(|&n| {
                let w = 1.5 * n;
                bump_state(&grid, (0.0, 0.0), w, (1.0, 1.0))
            })
            .collect();
        assert_eq!(
            classify_sequence(&spreading, 1.0, &thresholds).unwrap(),
            SequenceClass::Vanishing
        );

        // Two bumps diverging to half the box → dichotomy.
        let parting: Vec<State> = [8.0f64, 16.0, 32.0, 64.0]
            .iter()
            .map(|&c| bump_state(&grid, (-c, c), 1.5, (1.0, 1.0)))
            .collect();
        assert_eq!(
            classify_sequence(&parting, 1.0, &thresholds).unwrap(),
            SequenceClass::Dichotomy
        );

        assert!(classify_sequence(&[], 2.0, &thresholds).is_err());
    }

    #[test]
    fn vanishing_norms_on_spreading_family() {
        let grid = Grid::new(1, 512, 256.0).unwrap();
        let qs = [3.0, 4.0];
        let mut previous: Option<Vec<f64>> = None;
        for &n in &[1.0f64, 2.0, 4.0, 8.0] {
            let state = bump_state(&grid, (0.0, 0.0), 1.5 * n, (1.0, 1.0));
            // Mass stays pinned while the L^q norms fall.
            assert!((mass(&state.u1) - 1.0).abs() < 1e-12);
            let norms = vanishing_norms(&state, &qs).unwrap();
            let current: Vec<f64> = norms.iter().map(|(_, (a, _))| *a).collect();
            if let Some(prev) = previous {
                for (now, before) in current.iter().zip(prev.iter()) {
                    assert!(now < before, "{now} !< {before}");
                }
            }
            previous = Some(current);
            // q = 2 equals the square root of the constant mass.
            let l2 = vanishing_norms(&state, &[2.0]).unwrap()[0].1 .0;
            assert!((l2 - 1.0).abs() < 1e-12);
        }
        let state = bump_state(&grid, (0.0, 0.0), 1.5, (1.0, 1.0));
        assert!(vanishing_norms(&state, &[0.5]).is_err());
    }

    #[test]
    fn orbit_distance_quotient_properties() {
        let grid = Grid::new(1, 128, 40.0).unwrap();
        let alpha = 0.75;
        let reference = bump_state(&grid, (0.0, 0.5), 1.2, (1.0, 1.0));
        // Zero on the diagonal.
        let d0 = orbit_distance(&reference, &reference, alpha).unwrap();
        assert!(d0 < 1e-10, "{d0}");
        // Translation (whole nodes, shared) × per-component phase is quotiented.
        let rot = |f: &Field, theta: f64| {
            Field::from_parts(
                grid.clone(),
                f.values().iter().map(|v| v * Complex64::from_polar(1.0, theta)).collect(),
            )
        };
        let shifted = State {
            u1: rot(&reference.u1.shift_nodes(&[17, 0, 0]), 0.9),
            u2: rot(&reference.u2.shift_nodes(&[17, 0, 0]), -1.4),
        };
        let d = orbit_distance(&shifted, &reference, alpha).unwrap();
        assert!(d <= 1e-10, "{d}");
        // A perturbation of H^α size δ moves the orbit by at most δ.
        let delta = 1e-3;
        let dir = random_direction(&grid, alpha, 5, 0);
        let perturbed = State {
            u1: Field::from_parts(
                grid.clone(),
                reference
                    .u1
                    .values()
                    .iter()
                    .zip(dir.u1.values())
                    .map(|(u, v)| u + delta * v)
                    .collect(),
            ),
            u2: Field::from_parts(
                grid.clone(),
                reference
                    .u2
                    .values()
                    .iter()
                    .zip(dir.u2.values())
                    .map(|(u, v)| u + delta * v)
                    .collect(),
            ),
        };
        let dp = orbit_distance(&perturbed, &reference, alpha).unwrap();
        assert!(dp <= delta * (1.0 + 1e-9), "{dp} vs {delta}");
    }

    #[test]
    fn orbit_distance_is_a_pseudometric_on_the_quotient() {
        let grid = Grid::new(1, 64, 24.0).unwrap();
        let alpha = 0.7;
        let mk = |stream: u64| {
            let d = random_direction(&grid, alpha, 11, stream);
            let u1 = normalize_to_mass(&d.u1, 1.0).unwrap();
            let u2 = normalize_to_mass(&d.u2, 1.0).unwrap();
            State::new(u1, u2).unwrap()
        };
        let (a, b, c) = (mk(0), mk(1), mk(2));
        // Symmetry within solver tolerance.
        let ab = orbit_distance(&a, &b, alpha).unwrap();
        let ba = orbit_distance(&b, &a, alpha).unwrap();
        assert!((ab - ba).abs() <= 1e-10 * ab.max(1e-10), "{ab} vs {ba}");
        // Zero on the quotient diagonal.
        assert!(orbit_distance(&a, &a, alpha).unwrap() <= 1e-10);
        // Triangle inequality with the documented slack.
        let ac = orbit_distance(&a, &c, alpha).unwrap();
        let bc = orbit_distance(&b, &c, alpha).unwrap();
        assert!(ac <= ab + bc + 1e-8, "{ac} > {ab} + {bc}");
    }

    #[test]
    fn subadditivity_scan_markers() {
        // Cheap scan at coarse tolerance just to exercise bookkeeping:
        // memoization, edge rows via the scalar solver, symmetric margins.
        let grid = Grid::new(1, 64, 40.0).unwrap();
        let params = Params {
            alpha: 0.75,
            mu1: 1.0,
            mu2: 1.0,
            p1: 2.5,
            p2: 2.5,
            beta: 1.0,
            r1: 1.2,
            r2: 1.2,
            tau1: 1.0,
            tau2: 1.0,
        };
        let config = MinimizeConfig { tol: 1e-4, max_iters: 3000, ..Default::default() };
        let points = [(0.5, 0.5), (0.0, 0.5)];
        let rows = subadditivity_scan(&points, &params, &config, &grid);
        // Pairs: (p0,p0), (p0,p1); (p1,p1) sums to (0,1) and is skipped.
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert!(row.valid, "row {:?}", row);
            assert!(row.margin < 0.0, "margin {}", row.margin);
        }
    }
}
