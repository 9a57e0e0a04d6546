//! Built-in operator verification suite (`verify-ops` subcommand).
//!
//! Each check pits a spectral-route quantity against an independent oracle:
//! closed forms, brute-force double sums, real-space quadrature, or a
//! finite-difference stencil. The suite is the fast self-test of the
//! fractional-operator layer.

use fnls_core::fracops;
use fnls_core::grid::{inner_product, Field, Grid};
use fnls_core::rng::StreamRng;
use fnls_core::Complex64;

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: &'static str, value: f64, reference: f64, error: f64, tolerance: f64) -> Self {
        CheckRow { name, value, reference, error, tolerance, pass: error <= tolerance }
    }
}

/// Brute-force O(M²) Gagliardo double sum over one period with minimum-image
/// distance, excluding the diagonal (one-dimensional).
///
/// The field differences are sampled at node pairs; the singular kernel
/// |z|^{-1-2α} is integrated exactly over each separation cell
/// (product-integration weights), with the sub-h/2 kernel mass attached to
/// the first off-diagonal difference through the quadratic small-z behavior
/// of |u(x)-u(x+z)|². A plain node-sampled kernel misses O(h^{2-2α}) of the
/// kernel mass near the diagonal, which at desk resolution swamps the 2%
/// comparison this oracle exists for.
pub fn gagliardo_double_sum(field: &Field, alpha: f64) -> f64 {
    let grid = field.grid();
    assert_eq!(grid.dim(), 1, "the double-sum oracle is one-dimensional");
    let m = grid.points_per_axis();
    let h = grid.spacing();
    // Kernel antiderivatives: P = ∫ z^{-1-2α} dz, Q = ∫ z^{-2α} dz.
    let p = |z: f64| z.powf(-2.0 * alpha) / (-2.0 * alpha);
    let q = |z: f64| {
        if (alpha - 0.5).abs() < 1e-12 {
            z.ln()
        } else {
            z.powf(1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha)
        }
    };
    // Piecewise-linear product integration of the squared-difference profile
    // against the exact kernel over each separation element [σh, (σ+1)h];
    // the origin element uses the quadratic small-z behavior of the profile.
    // a_w(σ) weights the left node, b_w(σ) the right one.
    let a_w = |sigma: usize| -> f64 {
        let a = sigma as f64 * h;
        let b = a + h;
        (1.0 + a / h) * (p(b) - p(a)) - (q(b) - q(a)) / h
    };
    let b_w = |sigma: usize| -> f64 {
        if sigma == 0 {
            // ∫_0^h (z/h)² z^{-1-2α} dz
            return h.powf(-2.0 * alpha) / (2.0 - 2.0 * alpha);
        }
        let a = sigma as f64 * h;
        let b = a + h;
        (q(b) - q(a)) / h - (a / h) * (p(b) - p(a))
    };
    let mut weights = vec![0.0f64; m / 2 + 1];
    for (sigma, w) in weights.iter_mut().enumerate().take(m / 2).skip(1) {
        *w = b_w(sigma - 1) + a_w(sigma);
    }
    weights[m / 2] = 2.0 * b_w(m / 2 - 1);
    let n = grid.node_count();
    let values = field.values();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = j - i;
            let sigma = s.min(m - s);
            acc += 2.0 * (values[i] - values[j]).norm_sqr() * weights[sigma];
        }
    }
    acc * h
}

fn smooth_random_field(grid: &Grid, rng: &mut StreamRng, keep: usize) -> Field {
    let m = grid.points_per_axis();
    let spec: Vec<Complex64> = (0..grid.node_count())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            let ok = (0..grid.dim()).all(|a| {
                let k = idx[a];
                k.min(m - k) <= keep
            });
            if ok {
                Complex64::new(rng.normal(), rng.normal())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_spectrum(grid, spec)
}

/// Run the whole suite. Deterministic in the seed.
pub fn run_all(seed: u64) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = StreamRng::new(seed, 100);

    // Plane waves are eigenfunctions of the multiplier.
    {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let xi = 2.0 * std::f64::consts::PI * 5.0 / 16.0;
        let pw = Field::from_fn(&grid, |x| {
            Complex64::new((xi * x[0]).cos(), (xi * x[0]).sin())
        });
        let mut worst = 0.0f64;
        for &alpha in &[0.25, 0.5, 0.75, 1.0] {
            let lam = xi.abs().powf(2.0 * alpha);
            let out = fracops::frac_laplacian(&pw, alpha).unwrap();
            for (o, p) in out.values().iter().zip(pw.values()) {
                worst = worst.max((o - lam * p).norm() / lam);
            }
        }
        rows.push(CheckRow::new("plane_wave_eigenvalue", worst, 0.0, worst, 1e-12));
    }

    // Constants are annihilated.
    {
        let grid = Grid::new(2, 16, 9.0).unwrap();
        let c = Field::constant(&grid, Complex64::new(1.3, -0.4));
        let out = fracops::frac_laplacian(&c, 0.6).unwrap();
        let worst = out.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        rows.push(CheckRow::new("constant_annihilated", worst, 0.0, worst, 1e-13));
    }

    // Half-order operator composes to the full order.
    {
        let grid = Grid::new(1, 64, 20.0).unwrap();
        let u = smooth_random_field(&grid, &mut rng, 8);
        let alpha = 0.7;
        let twice =
            fracops::half_frac(&fracops::half_frac(&u, alpha).unwrap(), alpha).unwrap();
        let full = fracops::frac_laplacian(&u, alpha).unwrap();
        let scale = full.values().iter().map(|v| v.norm()).fold(1e-300, f64::max);
        let worst = twice
            .values()
            .iter()
            .zip(full.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        rows.push(CheckRow::new("half_frac_semigroup", worst, 0.0, worst, 1e-12));
    }

    // Parseval: grid mass equals the normalized spectral mass.
    {
        let grid = Grid::new(2, 16, 7.0).unwrap();
        let u = smooth_random_field(&grid, &mut rng, 8);
        let mass = inner_product(&u, &u).unwrap().re;
        let ones = vec![1.0; grid.node_count()];
        let spectral = fracops::spectral_norm_sq(&u, &ones);
        let err = (mass - spectral).abs() / mass;
        rows.push(CheckRow::new("parseval_mass", spectral, mass, err, 1e-12));
    }

    // Normalization constant, integral route, against the closed value 1/π.
    let c_half = fracops::normalization_constant(1, 0.5).unwrap();
    {
        let reference = 1.0 / std::f64::consts::PI;
        let err = (c_half.integral_form - reference).abs();
        rows.push(CheckRow::new("c_integral_1_half", c_half.integral_form, reference, err, 1e-6));
    }

    // The Gamma-form expression disagrees by a factor of two; the check
    // passes when the discrepancy is detected and measures 2.
    {
        let err = (c_half.ratio - 2.0).abs() + if c_half.discrepant { 0.0 } else { 1.0 };
        rows.push(CheckRow::new("gamma_form_factor_two", c_half.ratio, 2.0, err, 1e-6));
    }

    // Spectral Gagliardo seminorm against the brute-force double sum, on a
    // random smooth field. Modes 2..=5 keep both ends of the oracle's error
    // budget small: the minimum-image kernel truncation hits mode 1 hardest
    // and the node sampling hits high modes.
    {
        let grid = Grid::new(1, 64, 32.0).unwrap();
        let alpha = 0.75;
        let m = grid.points_per_axis();
        let mut spec = vec![Complex64::new(0.0, 0.0); grid.node_count()];
        for (k, v) in spec.iter_mut().enumerate() {
            let mag = k.min(m - k);
            if (2..=5).contains(&mag) {
                *v = Complex64::new(rng.normal(), rng.normal());
            }
        }
        let u = Field::from_spectrum(&grid, spec);
        let spectral = fracops::gagliardo_seminorm_sq(&u, alpha).unwrap();
        let brute = gagliardo_double_sum(&u, alpha);
        let err = (spectral - brute).abs() / brute;
        rows.push(CheckRow::new("seminorm_double_sum", spectral, brute, err, 0.02));
    }

    // Dilation law: (-Δ)^α h(θ·) on the contracted box is θ^{2α} (-Δ)^α h.
    {
        let m = 64;
        let l = 32.0;
        let theta: f64 = 2.0;
        let alpha = 0.55;
        let grid = Grid::new(1, m, l).unwrap();
        let companion = Grid::new(1, m, l / theta).unwrap();
        let profile = |x: f64| (-x * x / 3.0).exp();
        let h = Field::from_fn(&grid, |x| Complex64::new(profile(x[0]), 0.0));
        let h_scaled =
            Field::from_fn(&companion, |x| Complex64::new(profile(theta * x[0]), 0.0));
        let left = fracops::frac_laplacian(&h_scaled, alpha).unwrap();
        let right = fracops::frac_laplacian(&h, alpha).unwrap();
        let factor = theta.powf(2.0 * alpha);
        let scale = right.values().iter().map(|v| v.norm()).fold(1e-300, f64::max) * factor;
        let worst = left
            .values()
            .iter()
            .zip(right.values())
            .map(|(a, b)| (a - factor * b).norm())
            .fold(0.0, f64::max)
            / scale;
        rows.push(CheckRow::new("dilation_law", worst, 0.0, worst, 1e-10));
    }

    // Classical limit: α = 1 multiplier versus a second-difference stencil,
    // observed convergence order under refinement.
    {
        let l = 20.0;
        let err_at = |m: usize| -> f64 {
            let grid = Grid::new(1, m, l).unwrap();
            let u = Field::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
            let spectral = fracops::frac_laplacian(&u, 1.0).unwrap();
            let h = grid.spacing();
            let n = grid.node_count();
            let mut worst = 0.0f64;
            for i in 0..n {
                let um = u.values()[(i + n - 1) % n];
                let uc = u.values()[i];
                let up = u.values()[(i + 1) % n];
                let stencil = -(up - 2.0 * uc + um) / (h * h);
                worst = worst.max((spectral.values()[i] - stencil).norm());
            }
            worst
        };
        let order = (err_at(128) / err_at(256)).log2();
        let err = if order >= 1.9 { 0.0 } else { 1.9 - order };
        rows.push(CheckRow::new("classical_limit_order", order, 2.0, err, 0.1));
    }

    // Singular-integral oracle against the multiplier on a Gaussian.
    {
        let grid = Grid::new(1, 256, 40.0).unwrap();
        let u = Field::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let alpha = 0.5;
        let node = grid.node_count() / 2;
        let spectral = fracops::frac_laplacian(&u, alpha).unwrap().values()[node];
        match fracops::singular_integral_oracle(&u, alpha, node) {
            Ok(est) => {
                let err = (est.value - spectral).norm() / spectral.norm();
                rows.push(CheckRow::new(
                    "singular_integral_gaussian",
                    est.value.re,
                    spectral.re,
                    err,
                    1e-4,
                ));
            }
            Err(_) => {
                rows.push(CheckRow::new(
                    "singular_integral_gaussian",
                    f64::NAN,
                    spectral.re,
                    f64::INFINITY,
                    1e-4,
                ));
            }
        }
    }

    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for row in run_all(7) {
            assert!(
                row.pass,
                "{}: value {} reference {} error {} > {}",
                row.name, row.value, row.reference, row.error, row.tolerance
            );
        }
    }

    #[test]
    fn double_sum_scaling_homogeneity() {
        let grid = Grid::new(1, 32, 16.0).unwrap();
        let u = Field::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.2));
        let alpha = 0.45;
        let base = gagliardo_double_sum(&u, alpha);
        let scaled =
            Field::new(grid.clone(), u.values().iter().map(|v| v * 3.0).collect()).unwrap();
        assert!((gagliardo_double_sum(&scaled, alpha) - 9.0 * base).abs() <= 1e-12 * base);
    }
}
