#![allow(dead_code)]

use gkp_core::{Complex64, Field, GridSpec, Spectral};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Smooth periodic field with zero x-mean: random coefficients on modes
/// `1 ≤ |a| ≤ modes`, `|b| ≤ modes`, Gaussian-weighted in the mode index.
pub fn smooth_field(sp: &Spectral, rng: &mut ChaCha8Rng, modes: i64, amp: f64) -> Field {
    let g = *sp.grid();
    let mut spec = sp.zero_spectrum();
    let nyh = g.nyh();
    for a in -modes..=modes {
        if a == 0 {
            continue;
        }
        for b in 0..=modes {
            let Some(i) = g.spectral_index(a, b) else { continue };
            let w = (-((a * a + b * b) as f64) / (modes * modes) as f64).exp();
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            spec[i] = z * w * amp * g.len() as f64 / 8.0;
            // The k = 0 column must be Hermitian along ξ.
            if b == 0 {
                if let Some(jm) = g.spectral_index(-a, 0) {
                    if jm / nyh != i / nyh {
                        spec[jm] = spec[i].conj();
                    }
                }
            }
        }
    }
    sp.inverse_transform(&spec).expect("spectrum length")
}

pub fn grid(n: usize, l: f64) -> GridSpec {
    GridSpec::square(n, l).expect("valid grid")
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
