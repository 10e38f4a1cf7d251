//! Initial data generators and the reference solutions some of them carry.

use std::f64::consts::PI;

use gkp_core::ground_state::{gardner_soliton_1d, petviashvili_general, zaitsev_profile};
use gkp_core::{Complex64, Field, Spectral};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::formats::read_field;

/// A solution the numerical trajectory can be compared against.
#[derive(Debug, Clone)]
pub enum Reference {
    /// `φ(x − ct, y)`.
    Comoving { profile: Field, speed: f64 },
    /// `A cos(ξx + ηy + Ωt)`, `Ω = ξ|ξ|^{2α} − εη²/ξ`.
    LinearMode { xi: f64, eta: f64, amplitude: f64, omega: f64 },
}

pub struct Initial {
    pub field: Field,
    pub reference: Option<Reference>,
}

/// Builds `u₀` from `cfg.initial`. Every generator output is projected to
/// zero mean along x, which the antiderivative requires.
pub fn initial_field(cfg: &RunConfig, sp: &Spectral) -> CliResult<Initial> {
    let g = cfg.grid;
    let ini = &cfg.initial;
    let amp = ini.amplitude;
    let (field, reference) = match ini.kind.as_str() {
        "gaussian" => {
            // x-derivative of a Gaussian, so every y-line integrates to zero.
            let w = ini.width;
            if !(w > 0.0) {
                return Err(CliError::invalid_field("initial.width", "must be positive"));
            }
            (Field::from_fn(g, |x, y| amp * (x / w) * (-(x * x + y * y) / (w * w)).exp()), None)
        }
        "groundstate" => {
            let gs = petviashvili_general(sp, &cfg.params, cfg.speed, None, &cfg.solver)?;
            let profile = gs.profile.scaled(amp);
            let reference = (amp == 1.0).then(|| Reference::Comoving { profile: profile.clone(), speed: cfg.speed });
            (profile, reference)
        }
        "gardner" => {
            let xs: Vec<f64> = (0..g.nx).map(|i| g.x(i)).collect();
            let s = gardner_soliton_1d(ini.gardner_a, ini.gardner_varsigma, 1.0, 0.0, &xs, false)?;
            (Field::from_fn(g, |x, _| amp * s.profile[x_index(&g, x)]), None)
        }
        "zaitsev" => {
            let z = zaitsev_profile(ini.zaitsev_beta0, ini.zaitsev_beta, ini.zaitsev_delta, g)?;
            (z.field.scaled(amp), None)
        }
        "mode" => {
            if ini.mode_a == 0 {
                return Err(CliError::invalid_field("initial.modeA", "must be nonzero"));
            }
            let xi = 2.0 * PI * ini.mode_a as f64 / g.lx;
            let eta = 2.0 * PI * ini.mode_b as f64 / g.ly;
            let p = &cfg.params;
            let omega = xi * xi.abs().powf(2.0 * p.alpha) - p.eps * eta * eta / xi;
            let field = Field::from_fn(g, |x, y| amp * (xi * x + eta * y).cos());
            let reference = p.is_linear().then_some(Reference::LinearMode { xi, eta, amplitude: amp, omega });
            (field, reference)
        }
        "file" => {
            let path =
                ini.file.as_ref().ok_or_else(|| CliError::invalid_field("initial.file", "required for kind = file"))?;
            let (u, _) = read_field(path)?;
            if *u.grid() != g {
                return Err(CliError::invalid_field("initial.file", "grid differs from the configured grid"));
            }
            (u.scaled(amp), None)
        }
        other => return Err(CliError::invalid_field("initial.kind", format!("unknown generator {other:?}"))),
    };
    let field = sp.project_zero_xmean(&field)?;
    Ok(Initial { field, reference })
}

fn x_index(g: &gkp_core::GridSpec, x: f64) -> usize {
    (((x + 0.5 * g.lx) / g.hx()).round() as usize).min(g.nx - 1)
}

/// Relative L² distance between `u` and the reference at time `t`.
pub fn reference_error(sp: &Spectral, r: &Reference, t: f64, u: &Field) -> f64 {
    let exact = match r {
        Reference::Comoving { profile, speed } => {
            let Ok(mut spec) = sp.transform(profile) else { return f64::NAN };
            let g = *sp.grid();
            let shift = speed * t;
            sp.multiply(&mut spec, |j, _| Complex64::from_polar(1.0, -g.xi(j) * shift));
            match sp.inverse_transform(&spec) {
                Ok(f) => f,
                Err(_) => return f64::NAN,
            }
        }
        Reference::LinearMode { xi, eta, amplitude, omega } => {
            Field::from_fn(*sp.grid(), |x, y| amplitude * (xi * x + eta * y + omega * t).cos())
        }
    };
    let diff: f64 = u.values().iter().zip(exact.values()).map(|(a, b)| (a - b) * (a - b)).sum();
    let norm: f64 = exact.values().iter().map(|b| b * b).sum();
    (diff / norm).sqrt()
}

/// Smooth random field with zero x-mean: random coefficients on the modes
/// `1 ≤ |a| ≤ modes`, `0 ≤ b ≤ modes`, Gaussian-weighted in the mode index,
/// normalized to sup norm `amp`.
pub fn smooth_random(sp: &Spectral, rng: &mut ChaCha8Rng, modes: i64, amp: f64) -> CliResult<Field> {
    let g = *sp.grid();
    let mut spec = sp.zero_spectrum();
    for a in -modes..=modes {
        if a == 0 {
            continue;
        }
        for b in 0..=modes {
            let Some(i) = g.spectral_index(a, b) else { continue };
            let w = (-((a * a + b * b) as f64) / (modes * modes) as f64).exp();
            spec[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w;
        }
    }
    // The b = 0 column must be Hermitian for a real field.
    for a in 1..=modes {
        if let (Some(p), Some(m)) = (g.spectral_index(a, 0), g.spectral_index(-a, 0)) {
            spec[m] = spec[p].conj();
        }
    }
    let u = sp.inverse_transform(&spec)?;
    let sup = u.sup_norm();
    if !(sup > 0.0) {
        return Err(CliError::numerical("random field vanished"));
    }
    Ok(u.scaled(amp / sup))
}
