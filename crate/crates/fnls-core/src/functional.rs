//! Model parameters, the constrained energy functional, and its gradient.
//!
//! The energy of a pair (u₁, u₂) is
//!
//! ```text
//! E = 1/2 (‖(-Δ)^{α/2}u₁‖² + ‖(-Δ)^{α/2}u₂‖²)
//!     - ∫ ( μ₁/p₁ |u₁|^{p₁} + μ₂/p₂ |u₂|^{p₂} + β |u₁|^{r₁} |u₂|^{r₂} ) dx
//! ```
//!
//! minimized subject to prescribed squared masses ∫|u_j|² = τ_j. Powers of
//! complex fields act on the modulus with the phase carried along, so the
//! functional is invariant under independent phase rotation of each
//! component.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::fracops;
use crate::grid::{Field, Grid};
use crate::{Complex64, Result};

/// All model constants. Plain data; [`Params::validate`] checks the standing
/// assumptions and is called at every external entry point. Test modes
/// (classical limit α = 1, decoupled β = 0) construct the struct directly and
/// skip validation knowingly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub p1: f64,
    pub p2: f64,
    pub beta: f64,
    pub r1: f64,
    pub r2: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl Params {
    /// Standing assumptions: 0 < α < 1, μ_j > 0, β > 0, r_i > 1,
    /// 2 < p_j < 2 + 4α/N, and 2 < r₁+r₂ < 2 + 4α/N. Violations are errors;
    /// N = 1 is accepted with a warning (the theory is stated for N ≥ 2 but
    /// one-dimensional desk tests are useful).
    pub fn validate(&self, dim: usize) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CoreError::ParamViolation(format!("alpha={} not in (0,1)", self.alpha)));
        }
        if !(self.mu1 > 0.0 && self.mu2 > 0.0) {
            return Err(CoreError::ParamViolation(format!(
                "mu1={}, mu2={} must be positive",
                self.mu1, self.mu2
            )));
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(CoreError::ParamViolation(format!("beta={} must be positive", self.beta)));
        }
        if !(self.r1 > 1.0 && self.r2 > 1.0) {
            return Err(CoreError::ParamViolation(format!(
                "r1={}, r2={} must exceed 1",
                self.r1, self.r2
            )));
        }
        let cap = 2.0 + 4.0 * self.alpha / dim as f64;
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(p > 2.0 && p < cap) {
                return Err(CoreError::ParamViolation(format!(
                    "{name}={p} not in (2, {cap}) for dim {dim}"
                )));
            }
        }
        let rsum = self.r1 + self.r2;
        if !(rsum > 2.0 && rsum < cap) {
            return Err(CoreError::ParamViolation(format!(
                "r1+r2={rsum} not in (2, {cap}) for dim {dim}"
            )));
        }
        if !(self.tau1 > 0.0 && self.tau2 > 0.0) {
            return Err(CoreError::ParamViolation(format!(
                "tau1={}, tau2={} must be positive",
                self.tau1, self.tau2
            )));
        }
        if dim == 1 {
            warnings.push("dim = 1 accepted for desk-scale tests; theory assumes dim >= 2".into());
        }
        Ok(warnings)
    }

    /// γ_i = μ_i / p_i.
    pub fn gamma(&self, which: usize) -> f64 {
        self.mu(which) / self.p(which)
    }

    pub fn mu(&self, which: usize) -> f64 {
        match which {
            1 => self.mu1,
            2 => self.mu2,
            _ => panic!("component index must be 1 or 2"),
        }
    }

    pub fn p(&self, which: usize) -> f64 {
        match which {
            1 => self.p1,
            2 => self.p2,
            _ => panic!("component index must be 1 or 2"),
        }
    }

    pub fn r(&self, which: usize) -> f64 {
        match which {
            1 => self.r1,
            2 => self.r2,
            _ => panic!("component index must be 1 or 2"),
        }
    }

    pub fn tau(&self, which: usize) -> f64 {
        match which {
            1 => self.tau1,
            2 => self.tau2,
            _ => panic!("component index must be 1 or 2"),
        }
    }

    fn assert_operator_alpha(&self) {
        assert!(
            self.alpha > 0.0 && self.alpha <= 1.0,
            "alpha={} outside operator range (0, 1]",
            self.alpha
        );
    }
}

/// Ordered pair (u₁, u₂) on a shared grid.
#[derive(Debug, Clone)]
pub struct State {
    pub u1: Field,
    pub u2: Field,
}

impl State {
    pub fn new(u1: Field, u2: Field) -> Result<State> {
        if u1.grid() != u2.grid() {
            return Err(CoreError::GridMismatch);
        }
        Ok(State { u1, u2 })
    }

    pub fn grid(&self) -> &Grid {
        self.u1.grid()
    }

    pub fn component(&self, which: usize) -> &Field {
        match which {
            1 => &self.u1,
            2 => &self.u2,
            _ => panic!("component index must be 1 or 2"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite()
    }
}

/// Squared L² mass ∫ |u|² dx.
pub fn mass(field: &Field) -> f64 {
    field.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * field.grid().cell_volume()
}

/// ‖u‖_p^p = ∫ |u|^p dx.
pub fn lp_norm_pow(field: &Field, p: f64) -> f64 {
    field
        .values()
        .iter()
        .map(|v| {
            let m = v.norm();
            if m == 0.0 {
                0.0
            } else {
                m.powf(p)
            }
        })
        .sum::<f64>()
        * field.grid().cell_volume()
}

/// ‖u‖_p.
pub fn lp_norm(field: &Field, p: f64) -> f64 {
    lp_norm_pow(field, p).powf(1.0 / p)
}

/// Radial retraction onto the mass sphere: u ← u √(τ/mass(u)).
pub fn normalize_to_mass(field: &Field, tau: f64) -> Result<Field> {
    let m = mass(field);
    if m == 0.0 {
        return Err(CoreError::InvalidArgument(
            "cannot normalize a zero field onto a mass sphere".into(),
        ));
    }
    let s = (tau / m).sqrt();
    Ok(Field::from_parts(
        field.grid().clone(),
        field.values().iter().map(|v| v * s).collect(),
    ))
}

/// Coupling term ∫ β |u₁|^{r₁} |u₂|^{r₂} dx ≥ 0.
pub fn coupling(state: &State, params: &Params) -> f64 {
    if params.beta == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (a, b) in state.u1.values().iter().zip(state.u2.values().iter()) {
        let (m1, m2) = (a.norm(), b.norm());
        if m1 > 0.0 && m2 > 0.0 {
            acc += m1.powf(params.r1) * m2.powf(params.r2);
        }
    }
    params.beta * acc * state.grid().cell_volume()
}

/// Single-component energy e_i(u) = 1/2 ‖(-Δ)^{α/2}u‖² − (μ_i/p_i) ‖u‖_{p_i}^{p_i}.
pub fn single_energy(field: &Field, which: usize, params: &Params) -> f64 {
    params.assert_operator_alpha();
    let kinetic = fracops::half_frac_norm_sq(field, params.alpha).expect("alpha checked");
    0.5 * kinetic - params.gamma(which) * lp_norm_pow(field, params.p(which))
}

/// Full energy; evaluated exactly as e₁(u₁) + e₂(u₂) − coupling.
pub fn energy(state: &State, params: &Params) -> f64 {
    single_energy(&state.u1, 1, params) + single_energy(&state.u2, 2, params)
        - coupling(state, params)
}

/// Constraint-free first variation: the pair G_j with
/// G_j = (-Δ)^α u_j − μ_j |u_j|^{p_j-2} u_j − β r_j |u_j|^{r_j-2} u_j |u_{3-j}|^{r_{3-j}},
/// so that d/dε E(state + ε v)|₀ = Σ_j Re ⟨G_j, v_j⟩.
///
/// Power terms vanish at nodes where the modulus is zero (all exponents of the
/// modulus stay positive once the phase factor is pulled out).
pub fn gradient(state: &State, params: &Params) -> State {
    params.assert_operator_alpha();
    let table = fracops::power_multiplier(state.grid(), params.alpha);
    let lin1 = fracops::apply_table(&state.u1, &table);
    let lin2 = fracops::apply_table(&state.u2, &table);
    let n = state.grid().node_count();
    let mut g1 = lin1.into_values();
    let mut g2 = lin2.into_values();
    for i in 0..n {
        let a = state.u1.values()[i];
        let b = state.u2.values()[i];
        let (m1, m2) = (a.norm(), b.norm());
        if m1 > 0.0 {
            let phase = a / m1;
            let mut coef = params.mu1 * m1.powf(params.p1 - 1.0);
            if params.beta != 0.0 && m2 > 0.0 {
                coef += params.beta * params.r1 * m1.powf(params.r1 - 1.0) * m2.powf(params.r2);
            }
            g1[i] -= coef * phase;
        }
        if m2 > 0.0 {
            let phase = b / m2;
            let mut coef = params.mu2 * m2.powf(params.p2 - 1.0);
            if params.beta != 0.0 && m1 > 0.0 {
                coef += params.beta * params.r2 * m2.powf(params.r2 - 1.0) * m1.powf(params.r1);
            }
            g2[i] -= coef * phase;
        }
    }
    State {
        u1: Field::from_parts(state.grid().clone(), g1),
        u2: Field::from_parts(state.grid().clone(), g2),
    }
}

/// Interpolation exponent λ of the fractional Gagliardo-Nirenberg inequality,
/// solving N/p = λ(N-2α)/2 + N(1-λ)/q.
pub fn gn_exponent(p: f64, q: f64, dim: usize, alpha: f64) -> Result<f64> {
    if !(1..=3).contains(&dim) {
        return Err(CoreError::UnsupportedDim(dim));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::AlphaRange(alpha));
    }
    if p < 1.0 || q < 1.0 {
        return Err(CoreError::InvalidArgument(format!("exponents p={p}, q={q} must be >= 1")));
    }
    let n = dim as f64;
    let denom = 0.5 * (n - 2.0 * alpha) - n / q;
    let numer = n / p - n / q;
    if denom.abs() < 1e-14 {
        if numer.abs() < 1e-14 {
            return Ok(0.0);
        }
        return Err(CoreError::InvalidArgument(
            "interpolation relation is degenerate for these exponents".into(),
        ));
    }
    let lambda = numer / denom;
    if !(-1e-12..=1.0 + 1e-12).contains(&lambda) {
        return Err(CoreError::InvalidArgument(format!(
            "interpolation exponent lambda={lambda} outside [0, 1] for p={p}, q={q}, dim={dim}, alpha={alpha}"
        )));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

/// Empirical Gagliardo-Nirenberg ratio ‖u‖_p / ([u]^λ ‖u‖_q^{1-λ}).
///
/// Scale-invariant in the field amplitude; the supremum over a test corpus is
/// the reported empirical constant.
pub fn gn_check(field: &Field, p: f64, q: f64, alpha: f64) -> Result<f64> {
    let lambda = gn_exponent(p, q, field.grid().dim(), alpha)?;
    let seminorm = gagliardo_seminorm(field, alpha)?;
    let lq = lp_norm(field, q);
    let denom = seminorm.powf(lambda) * lq.powf(1.0 - lambda);
    if denom == 0.0 {
        return Err(CoreError::InvalidArgument(
            "Gagliardo-Nirenberg denominator vanishes (constant or zero field)".into(),
        ));
    }
    Ok(lp_norm(field, p) / denom)
}

fn gagliardo_seminorm(field: &Field, alpha: f64) -> Result<f64> {
    Ok(fracops::gagliardo_seminorm_sq(field, alpha)?.max(0.0).sqrt())
}

/// Closed-form radial profile generators.
///
/// The mass-preserving dilation u^λ(x) = λ^{1/2} u(λ^{1/N} x) maps each
/// variant to another instance of itself, so scaling families are re-sampled
/// analytically instead of interpolated from grid data.
#[derive(Debug, Clone, Copy)]
pub enum Profile {
    /// amplitude · exp(−|x−center|² / (2 width²))
    Gaussian { center: [f64; 3], width: f64, amplitude: f64 },
    /// amplitude · sech(|x−center| / width)
    Sech { center: [f64; 3], width: f64, amplitude: f64 },
}

impl Profile {
    pub fn gaussian(center: [f64; 3], width: f64) -> Profile {
        Profile::Gaussian { center, width, amplitude: 1.0 }
    }

    pub fn sech(center: [f64; 3], width: f64) -> Profile {
        Profile::Sech { center, width, amplitude: 1.0 }
    }

    pub fn sample(&self, grid: &Grid) -> Field {
        Field::from_fn(grid, |x| Complex64::new(self.eval(x, grid.dim()), 0.0))
    }

    pub fn eval(&self, x: &[f64; 3], dim: usize) -> f64 {
        match *self {
            Profile::Gaussian { center, width, amplitude } => {
                let mut r2 = 0.0;
                for axis in 0..dim {
                    let d = x[axis] - center[axis];
                    r2 += d * d;
                }
                amplitude * (-r2 / (2.0 * width * width)).exp()
            }
            Profile::Sech { center, width, amplitude } => {
                let mut r2 = 0.0;
                for axis in 0..dim {
                    let d = x[axis] - center[axis];
                    r2 += d * d;
                }
                let t = r2.sqrt() / width;
                amplitude * 2.0 / (t.exp() + (-t).exp())
            }
        }
    }

    /// The mass-preserving member u^λ(x) = λ^{1/2} u(λ^{1/N} x), expressed as
    /// a profile again: width and center contract by λ^{1/N}, amplitude grows
    /// by λ^{1/2}.
    pub fn mass_rescaled(&self, lambda: f64, dim: usize) -> Profile {
        let theta = lambda.powf(1.0 / dim as f64);
        let boost = lambda.sqrt();
        match *self {
            Profile::Gaussian { center, width, amplitude } => Profile::Gaussian {
                center: [center[0] / theta, center[1] / theta, center[2] / theta],
                width: width / theta,
                amplitude: amplitude * boost,
            },
            Profile::Sech { center, width, amplitude } => Profile::Sech {
                center: [center[0] / theta, center[1] / theta, center[2] / theta],
                width: width / theta,
                amplitude: amplitude * boost,
            },
        }
    }

    /// Adjust the amplitude so the grid mass equals τ.
    pub fn normalized_to_mass(&self, tau: f64, grid: &Grid) -> Result<Profile> {
        let m = mass(&self.sample(grid));
        if m == 0.0 {
            return Err(CoreError::InvalidArgument("profile has zero mass on this grid".into()));
        }
        let s = (tau / m).sqrt();
        Ok(match *self {
            Profile::Gaussian { center, width, amplitude } => {
                Profile::Gaussian { center, width, amplitude: amplitude * s }
            }
            Profile::Sech { center, width, amplitude } => {
                Profile::Sech { center, width, amplitude: amplitude * s }
            }
        })
    }
}

/// Scaling-family terms used by the exponent regressions and the negativity
/// witness: values of the energy pieces at one family member λ.
#[derive(Debug, Clone, Copy)]
pub struct FamilyTerms {
    pub lambda: f64,
    pub kinetic: f64,
    pub coupling: f64,
    pub mass1: f64,
    pub mass2: f64,
    pub energy: f64,
}

/// Evaluate kinetic, coupling and total energy for the λ-member of the
/// mass-preserving family generated by a pair of profiles.
pub fn scaling_family_terms(
    profiles: (&Profile, &Profile),
    lambda: f64,
    params: &Params,
    grid: &Grid,
) -> FamilyTerms {
    let dim = grid.dim();
    let u1 = profiles.0.mass_rescaled(lambda, dim).sample(grid);
    let u2 = profiles.1.mass_rescaled(lambda, dim).sample(grid);
    let state = State { u1, u2 };
    let kinetic = 0.5
        * (fracops::half_frac_norm_sq(&state.u1, params.alpha).expect("alpha checked")
            + fracops::half_frac_norm_sq(&state.u2, params.alpha).expect("alpha checked"));
    FamilyTerms {
        lambda,
        kinetic,
        coupling: coupling(&state, params),
        mass1: mass(&state.u1),
        mass2: mass(&state.u2),
        energy: energy(&state, params),
    }
}
