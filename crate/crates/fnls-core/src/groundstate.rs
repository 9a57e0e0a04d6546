//! Constrained minimization of the energy on the product of L² spheres.
//!
//! Projected gradient descent with radial retraction: normalize each
//! component onto its sphere, project the gradient onto the tangent space,
//! take a backtracking (Armijo) step along the negative tangent with the
//! retraction applied inside the trial, and declare convergence on the
//! Euler-Lagrange residual rather than on energy stagnation. Trial steps use
//! a safeguarded Barzilai-Borwein guess, so the energy trace stays monotone
//! while the step length adapts to the spectral stiffness of `(-Δ)^α`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::fracops;
use crate::functional::{
    self, energy, gradient, mass, normalize_to_mass, Params, Profile, State,
};
use crate::grid::{inner_product, tail_mass_fraction, Field, Grid};
use crate::rng::StreamRng;
use crate::{Complex64, Result};

/// How `minimize` builds its starting state.
#[derive(Debug, Clone)]
pub enum InitMode {
    /// Two randomly centered Gaussian bumps, seed-deterministic.
    GaussianBumps,
    /// Start from the given state (normalized onto the spheres).
    ProvidedState(State),
    /// Initialize each component from its decoupled scalar ground state.
    ScalarProduct,
}

#[derive(Debug, Clone)]
pub struct MinimizeConfig {
    pub step_init: f64,
    pub shrink: f64,
    pub armijo: f64,
    /// Residual tolerance relative to the Sobolev norm of each component.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub init: InitMode,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            step_init: 0.5,
            shrink: 0.5,
            armijo: 1e-4,
            tol: 1e-6,
            max_iters: 20_000,
            seed: 7,
            init: InitMode::GaussianBumps,
        }
    }
}

impl MinimizeConfig {
    fn check(&self) -> Result<()> {
        let ok = self.step_init > 0.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.armijo > 0.0
            && self.armijo < 1.0
            && self.tol > 0.0
            && self.max_iters > 0;
        if ok {
            Ok(())
        } else {
            Err(CoreError::InvalidArgument("minimize configuration out of range".into()))
        }
    }
}

/// Converged (or stalled) minimizer with its certificates.
#[derive(Debug, Clone)]
pub struct MinimizerResult {
    pub state: State,
    pub energy: f64,
    pub lambda: (f64, f64),
    pub residual: (f64, f64),
    pub iterations: usize,
    /// Energy after the initial normalization and after every accepted step;
    /// non-increasing by construction.
    pub trace: Vec<f64>,
    pub converged: bool,
    /// Fraction of each component's mass within L/8 of the box boundary;
    /// reported so under-resolved boxes are visible, never silently accepted.
    pub tail_mass: (f64, f64),
}

/// Scalar (single-component) ground state.
#[derive(Debug, Clone)]
pub struct ScalarResult {
    pub field: Field,
    pub omega: f64,
    pub residual: f64,
    pub energy: f64,
    pub iterations: usize,
    pub trace: Vec<f64>,
    pub converged: bool,
    pub tail_mass: f64,
}

/// Tangent projection: per component G_j − (Re⟨G_j, u_j⟩ / τ_j) u_j.
///
/// On-sphere states make the result L²-orthogonal to u_j.
pub fn project_tangent(
    state: &State,
    grad_state: &State,
    tau1: f64,
    tau2: f64,
) -> Result<State> {
    if state.grid() != grad_state.grid() {
        return Err(CoreError::GridMismatch);
    }
    let project = |u: &Field, g: &Field, tau: f64| -> Result<Field> {
        if tau <= 0.0 || mass(u) == 0.0 {
            return Err(CoreError::InvalidArgument(
                "tangent projection requires a component with positive mass".into(),
            ));
        }
        let lambda = inner_product(g, u)?.re / tau;
        Ok(Field::from_parts(
            u.grid().clone(),
            g.values().iter().zip(u.values()).map(|(gv, uv)| gv - lambda * uv).collect(),
        ))
    };
    Ok(State {
        u1: project(&state.u1, &grad_state.u1, tau1)?,
        u2: project(&state.u2, &grad_state.u2, tau2)?,
    })
}

/// λ_j = Re⟨G_j, u_j⟩ / τ_j for the current state.
pub fn lagrange_multipliers(state: &State, params: &Params) -> Result<(f64, f64)> {
    if mass(&state.u1) == 0.0 || mass(&state.u2) == 0.0 {
        return Err(CoreError::InvalidArgument(
            "Lagrange multipliers need components with positive mass".into(),
        ));
    }
    let g = gradient(state, params);
    let l1 = inner_product(&g.u1, &state.u1)?.re / params.tau1;
    let l2 = inner_product(&g.u2, &state.u2)?.re / params.tau2;
    Ok((l1, l2))
}

/// L² norms of the stationary-system defects
/// (-Δ)^α u_j − λ_j u_j − μ_j|u_j|^{p_j-2}u_j − ∂_jF, per component.
pub fn el_residual(state: &State, params: &Params, l1: f64, l2: f64) -> (f64, f64) {
    let g = gradient(state, params);
    let norm = |gf: &Field, uf: &Field, lam: f64| -> f64 {
        let h = gf.grid().cell_volume();
        (gf.values()
            .iter()
            .zip(uf.values())
            .map(|(gv, uv)| (gv - lam * uv).norm_sqr())
            .sum::<f64>()
            * h)
            .sqrt()
    };
    (norm(&g.u1, &state.u1, l1), norm(&g.u2, &state.u2, l2))
}

/// Shared descent driver over one or two constrained components.
struct Descent<'a> {
    taus: &'a [f64],
    energy_fn: &'a dyn Fn(&[Field]) -> f64,
    gradient_fn: &'a dyn Fn(&[Field]) -> Vec<Field>,
    sobolev_fn: &'a dyn Fn(&Field) -> f64,
}

struct DescentOutcome {
    fields: Vec<Field>,
    energy: f64,
    lambdas: Vec<f64>,
    residuals: Vec<f64>,
    iterations: usize,
    trace: Vec<f64>,
    converged: bool,
}

fn l2_norm_sq(f: &Field) -> f64 {
    f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * f.grid().cell_volume()
}

impl<'a> Descent<'a> {
    fn run(&self, start: Vec<Field>, config: &MinimizeConfig) -> Result<DescentOutcome> {
        config.check()?;
        let k = start.len();
        let mut fields: Vec<Field> = start
            .iter()
            .zip(self.taus)
            .map(|(f, &tau)| normalize_to_mass(f, tau))
            .collect::<Result<_>>()?;
        let mut e = (self.energy_fn)(&fields);
        let mut trace = vec![e];
        let mut lambdas = vec![0.0; k];
        let mut residuals = vec![0.0; k];
        let mut converged = false;
        let mut iterations = 0;
        let mut last_step = config.step_init;
        // Previous iterate and tangent for the Barzilai-Borwein guess.
        let mut prev: Option<(Vec<Field>, Vec<Field>)> = None;

        for iter in 0..config.max_iters {
            iterations = iter;
            let grads = (self.gradient_fn)(&fields);
            let mut tangents = Vec::with_capacity(k);
            let mut dir_sq = 0.0;
            let mut done = true;
            for j in 0..k {
                let lam = inner_product(&grads[j], &fields[j])?.re / self.taus[j];
                lambdas[j] = lam;
                let t = Field::from_parts(
                    fields[j].grid().clone(),
                    grads[j]
                        .values()
                        .iter()
                        .zip(fields[j].values())
                        .map(|(g, u)| g - lam * u)
                        .collect(),
                );
                let r = l2_norm_sq(&t).sqrt();
                residuals[j] = r;
                if r > config.tol * (self.sobolev_fn)(&fields[j]).sqrt() {
                    done = false;
                }
                dir_sq += r * r;
                tangents.push(t);
            }
            if done {
                converged = true;
                break;
            }

            // Barzilai-Borwein trial step from the previous (x, d) pair,
            // safeguarded into a broad window around the configured step.
            let mut step = match &prev {
                None => last_step,
                Some((px, pd)) => {
                    let mut sxx = 0.0;
                    let mut sxd = 0.0;
                    for j in 0..k {
                        for ((x, p), (d, q)) in fields[j]
                            .values()
                            .iter()
                            .zip(px[j].values())
                            .zip(tangents[j].values().iter().zip(pd[j].values()))
                        {
                            let dx = x - p;
                            let dd = d - q;
                            sxx += dx.re * dx.re + dx.im * dx.im;
                            sxd += dx.re * dd.re + dx.im * dd.im;
                        }
                    }
                    if sxd > 0.0 {
                        (sxx / sxd).clamp(1e-8 * config.step_init, 1e4 * config.step_init)
                    } else {
                        (2.0 * last_step).min(1e4 * config.step_init)
                    }
                }
            };

            prev = Some((fields.clone(), tangents.clone()));

            // Armijo backtracking with the retraction inside the trial step.
            let mut accepted = false;
            for _ in 0..80 {
                let mut cand = Vec::with_capacity(k);
                let mut ok = true;
                for j in 0..k {
                    let moved = Field::from_parts(
                        fields[j].grid().clone(),
                        fields[j]
                            .values()
                            .iter()
                            .zip(tangents[j].values())
                            .map(|(u, t)| u - step * t)
                            .collect(),
                    );
                    match normalize_to_mass(&moved, self.taus[j]) {
                        Ok(f) => cand.push(f),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let e_new = (self.energy_fn)(&cand);
                    if e_new.is_finite() && e_new <= e - config.armijo * step * dir_sq {
                        fields = cand;
                        e = e_new;
                        trace.push(e);
                        last_step = step;
                        accepted = true;
                        break;
                    }
                }
                step *= config.shrink;
                if step < 1e-18 * config.step_init {
                    break;
                }
            }
            if !accepted {
                // Line search exhausted at floating-point resolution.
                break;
            }
        }

        // Certificates for the state actually returned.
        let grads = (self.gradient_fn)(&fields);
        for j in 0..k {
            let lam = inner_product(&grads[j], &fields[j])?.re / self.taus[j];
            lambdas[j] = lam;
            let h = fields[j].grid().cell_volume();
            residuals[j] = (grads[j]
                .values()
                .iter()
                .zip(fields[j].values())
                .map(|(g, u)| (g - lam * u).norm_sqr())
                .sum::<f64>()
                * h)
                .sqrt();
        }
        if !converged {
            converged = (0..k)
                .all(|j| residuals[j] <= config.tol * (self.sobolev_fn)(&fields[j]).sqrt());
        }
        Ok(DescentOutcome { fields, energy: e, lambdas, residuals, iterations, trace, converged })
    }
}

fn gaussian_init(grid: &Grid, rng: &mut StreamRng, tau: f64) -> Result<Field> {
    let l = grid.box_length();
    let width = (l / 24.0).clamp(2.0 * grid.spacing(), 2.0);
    let mut center = [0.0; 3];
    for c in center.iter_mut().take(grid.dim()) {
        *c = rng.uniform(-l / 8.0, l / 8.0);
    }
    let profile = Profile::Gaussian { center, width, amplitude: 1.0 };
    normalize_to_mass(&profile.sample(grid), tau)
}

/// Minimize the coupled energy over S_{τ₁} × S_{τ₂}.
///
/// Non-convergence is not an error: the result carries `converged = false`
/// together with the residuals actually reached.
pub fn minimize(params: &Params, config: &MinimizeConfig, grid: &Grid) -> Result<MinimizerResult> {
    let start = match &config.init {
        InitMode::GaussianBumps => {
            let mut rng = StreamRng::new(config.seed, 0);
            vec![
                gaussian_init(grid, &mut rng, params.tau1)?,
                gaussian_init(grid, &mut rng, params.tau2)?,
            ]
        }
        InitMode::ProvidedState(s) => {
            if s.grid() != grid {
                return Err(CoreError::GridMismatch);
            }
            vec![s.u1.clone(), s.u2.clone()]
        }
        InitMode::ScalarProduct => {
            let scalar_cfg = MinimizeConfig {
                init: InitMode::GaussianBumps,
                tol: (config.tol * 100.0).min(1e-3),
                ..config.clone()
            };
            let s1 = scalar_ground_state(
                params.alpha,
                params.mu1,
                params.p1,
                params.tau1,
                &scalar_cfg,
                grid,
            )?;
            let s2 = scalar_ground_state(
                params.alpha,
                params.mu2,
                params.p2,
                params.tau2,
                &scalar_cfg,
                grid,
            )?;
            vec![s1.field, s2.field]
        }
    };
    let taus = [params.tau1, params.tau2];
    let energy_fn = |fs: &[Field]| {
        energy(&State { u1: fs[0].clone(), u2: fs[1].clone() }, params)
    };
    let gradient_fn = |fs: &[Field]| {
        let g = gradient(&State { u1: fs[0].clone(), u2: fs[1].clone() }, params);
        vec![g.u1, g.u2]
    };
    let sobolev_fn = |f: &Field| fracops::sobolev_norm_sq(f, params.alpha);
    let out = Descent {
        taus: &taus,
        energy_fn: &energy_fn,
        gradient_fn: &gradient_fn,
        sobolev_fn: &sobolev_fn,
    }
    .run(start, config)?;
    let mut fields = out.fields.into_iter();
    let state = State { u1: fields.next().unwrap(), u2: fields.next().unwrap() };
    let tail = (tail_mass_fraction(&state.u1), tail_mass_fraction(&state.u2));
    Ok(MinimizerResult {
        energy: out.energy,
        lambda: (out.lambdas[0], out.lambdas[1]),
        residual: (out.residuals[0], out.residuals[1]),
        iterations: out.iterations,
        trace: out.trace,
        converged: out.converged,
        tail_mass: tail,
        state,
    })
}

/// Single-component constrained ground state of
/// e(u) = 1/2 ‖(-Δ)^{α/2}u‖² − (μ/p) ‖u‖_p^p on S_τ.
///
/// Accepts α ∈ (0, 1]; α = 1 is the classical-limit test mode.
pub fn scalar_ground_state(
    alpha: f64,
    mu: f64,
    p: f64,
    tau: f64,
    config: &MinimizeConfig,
    grid: &Grid,
) -> Result<ScalarResult> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CoreError::AlphaRange(alpha));
    }
    if !(mu > 0.0 && p > 2.0 && tau > 0.0) {
        return Err(CoreError::ParamViolation(
            "scalar solve needs mu > 0, p > 2, tau > 0".into(),
        ));
    }
    let start = match &config.init {
        InitMode::ProvidedState(s) => vec![s.u1.clone()],
        _ => {
            let mut rng = StreamRng::new(config.seed, 1);
            vec![gaussian_init(grid, &mut rng, tau)?]
        }
    };
    let taus = [tau];
    let table = fracops::power_multiplier(grid, alpha);
    let energy_fn = |fs: &[Field]| {
        0.5 * fracops::spectral_norm_sq(&fs[0], &table)
            - mu / p * functional::lp_norm_pow(&fs[0], p)
    };
    let gradient_fn = |fs: &[Field]| {
        let lin = fracops::apply_table(&fs[0], &table);
        let values = lin
            .values()
            .iter()
            .zip(fs[0].values())
            .map(|(l, u)| {
                let m = u.norm();
                if m > 0.0 {
                    l - mu * m.powf(p - 1.0) * (u / m)
                } else {
                    *l
                }
            })
            .collect();
        vec![Field::from_parts(grid.clone(), values)]
    };
    let sobolev_fn = |f: &Field| fracops::sobolev_norm_sq(f, alpha);
    let out = Descent {
        taus: &taus,
        energy_fn: &energy_fn,
        gradient_fn: &gradient_fn,
        sobolev_fn: &sobolev_fn,
    }
    .run(start, config)?;
    let field = out.fields.into_iter().next().unwrap();
    Ok(ScalarResult {
        tail_mass: tail_mass_fraction(&field),
        omega: out.lambdas[0],
        residual: out.residuals[0],
        energy: out.energy,
        iterations: out.iterations,
        trace: out.trace,
        converged: out.converged,
        field,
    })
}

/// Scan of the negativity witness.
#[derive(Debug, Clone)]
pub struct NegativityWitness {
    /// First λ on the ladder with E(u^λ) < 0.
    pub lambda: f64,
    pub energy: f64,
    /// All scanned (λ, E) pairs, ladder order.
    pub table: Vec<(f64, f64)>,
}

/// Search the mass-preserving scaling family of a Gaussian pair over a
/// geometric λ ladder for a member with negative energy.
pub fn negativity_witness(params: &Params, grid: &Grid) -> Result<NegativityWitness> {
    let width = (grid.box_length() / 24.0).clamp(2.0 * grid.spacing(), 2.0);
    let g1 = Profile::gaussian([0.0; 3], width).normalized_to_mass(params.tau1, grid)?;
    let g2 = Profile::gaussian([0.0; 3], width).normalized_to_mass(params.tau2, grid)?;
    let mut table = Vec::new();
    let mut lambda = 4.0;
    for _ in 0..16 {
        let terms = functional::scaling_family_terms((&g1, &g2), lambda, params, grid);
        table.push((lambda, terms.energy));
        if terms.energy < 0.0 {
            return Ok(NegativityWitness { lambda, energy: terms.energy, table });
        }
        lambda *= 0.5;
    }
    Err(CoreError::WitnessNotFound(table))
}

/// Canonical representative of the translation × phase orbit: density peak
/// moved to the origin (whole-node shift) and each component's zero mode
/// rotated to the positive real axis.
pub fn canonicalize(state: &State) -> State {
    let grid = state.grid().clone();
    let n = grid.node_count();
    let mut peak = 0usize;
    let mut best = -1.0;
    for i in 0..n {
        let rho = state.u1.values()[i].norm_sqr() + state.u2.values()[i].norm_sqr();
        if rho > best {
            best = rho;
            peak = i;
        }
    }
    let idx = grid.unflatten(peak);
    let m = grid.points_per_axis();
    let mut offsets = [0i64; 3];
    for axis in 0..grid.dim() {
        offsets[axis] = m as i64 / 2 - idx[axis] as i64;
    }
    let fix_phase = |f: &Field| -> Field {
        let dc: Complex64 = f.values().iter().sum();
        if dc.norm() < 1e-300 {
            return f.clone();
        }
        let rot = (dc / dc.norm()).conj();
        Field::from_parts(f.grid().clone(), f.values().iter().map(|v| v * rot).collect())
    };
    State {
        u1: fix_phase(&state.u1.shift_nodes(&offsets)),
        u2: fix_phase(&state.u2.shift_nodes(&offsets)),
    }
}
