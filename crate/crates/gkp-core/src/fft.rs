//! Small self-contained FFT: iterative radix-2 for powers of two, Bluestein
//! otherwise, a packed real transform on top, and the 2D real layout used by
//! every spectral operator.
//!
//! Conventions: forward transforms are unnormalized,
//! `X[k] = Σ x[m] e^{-2πikm/n}`; the "unnormalized inverse" computes
//! `Σ X[k] e^{+2πikm/n}`. The 2D inverse in [`RealFft2`] divides by `nx·ny`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64 as C64;

fn cis(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    Radix2 { twiddles: Vec<C64>, rev: Vec<u32> },
    Bluestein { m: usize, inner: Box<FftPlan>, chirp: Vec<C64>, kernel: Vec<C64> },
}

/// Complex FFT plan of a fixed length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    kind: Kind,
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be positive");
        if n == 1 {
            return FftPlan { n, kind: Kind::Trivial };
        }
        if n.is_power_of_two() {
            let twiddles = (0..n / 2).map(|k| cis(-2.0 * PI * k as f64 / n as f64)).collect();
            let bits = n.trailing_zeros();
            let rev = (0..n as u32).map(|i| i.reverse_bits() >> (32 - bits)).collect();
            return FftPlan { n, kind: Kind::Radix2 { twiddles, rev } };
        }
        // Bluestein: jk = (j² + k² - (k-j)²)/2, chirp w_j = e^{-iπ j²/n}.
        let m = (2 * n - 1).next_power_of_two();
        let inner = Box::new(FftPlan::new(m));
        let two_n = 2 * n as u64;
        let chirp: Vec<C64> = (0..n as u64).map(|j| cis(-PI * ((j * j) % two_n) as f64 / n as f64)).collect();
        let mut kernel = vec![C64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for j in 1..n {
            kernel[j] = chirp[j].conj();
            kernel[m - j] = chirp[j].conj();
        }
        inner.forward(&mut kernel);
        FftPlan { n, kind: Kind::Bluestein { m, inner, chirp, kernel } }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [C64]) {
        self.run(data, false);
    }

    /// Unnormalized inverse (no 1/n).
    pub fn inverse(&self, data: &mut [C64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [C64], inverse: bool) {
        assert_eq!(data.len(), self.n);
        match &self.kind {
            Kind::Trivial => {}
            Kind::Radix2 { twiddles, rev } => radix2(data, twiddles, rev, inverse),
            Kind::Bluestein { m, inner, chirp, kernel } => {
                if inverse {
                    data.iter_mut().for_each(|z| *z = z.conj());
                }
                let mut a = vec![C64::new(0.0, 0.0); *m];
                for (j, (x, w)) in data.iter().zip(chirp).enumerate() {
                    a[j] = x * w;
                }
                inner.forward(&mut a);
                for (x, k) in a.iter_mut().zip(kernel) {
                    *x *= k;
                }
                inner.inverse(&mut a);
                let scale = 1.0 / *m as f64;
                for (k, x) in data.iter_mut().enumerate() {
                    *x = a[k] * chirp[k] * scale;
                }
                if inverse {
                    data.iter_mut().for_each(|z| *z = z.conj());
                }
            }
        }
    }
}

fn radix2(data: &mut [C64], twiddles: &[C64], rev: &[u32], inverse: bool) {
    let n = data.len();
    for i in 0..n {
        let j = rev[i] as usize;
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for start in (0..n).step_by(len) {
            let (lo, hi) = data[start..start + len].split_at_mut(half);
            for k in 0..half {
                let mut w = twiddles[k * step];
                if inverse {
                    w = w.conj();
                }
                let a = lo[k];
                let b = hi[k] * w;
                lo[k] = a + b;
                hi[k] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Real FFT of even length `n` through one complex FFT of length `n/2`.
#[derive(Debug, Clone)]
pub struct RealFft {
    n: usize,
    half: FftPlan,
    twiddles: Vec<C64>,
}

impl RealFft {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2 && n % 2 == 0, "real FFT length must be even");
        let twiddles = (0..=n / 2).map(|k| cis(-2.0 * PI * k as f64 / n as f64)).collect();
        RealFft { n, half: FftPlan::new(n / 2), twiddles }
    }

    /// `out` has `n/2 + 1` entries; `scratch` has `n/2`.
    pub fn forward(&self, input: &[f64], out: &mut [C64], scratch: &mut [C64]) {
        let h = self.n / 2;
        for m in 0..h {
            scratch[m] = C64::new(input[2 * m], input[2 * m + 1]);
        }
        self.half.forward(scratch);
        for k in 0..=h {
            let zk = scratch[k % h];
            let zc = scratch[(h - k) % h].conj();
            let e = (zk + zc) * 0.5;
            let o = (zk - zc) * C64::new(0.0, -0.5);
            out[k] = e + self.twiddles[k] * o;
        }
    }

    /// Unnormalized inverse of a half spectrum (`n/2 + 1` entries).
    pub fn inverse(&self, input: &[C64], out: &mut [f64], scratch: &mut [C64]) {
        let h = self.n / 2;
        for k in 0..h {
            let xk = input[k];
            let xc = input[h - k].conj();
            let e = xk + xc;
            let o = (xk - xc) * self.twiddles[k].conj();
            scratch[k] = e + C64::new(0.0, 1.0) * o;
        }
        self.half.inverse(scratch);
        for m in 0..h {
            out[2 * m] = scratch[m].re;
            out[2 * m + 1] = scratch[m].im;
        }
    }
}

/// 2D real transform on an `nx × ny` array stored with `y` contiguous
/// (`values[ix * ny + iy]`). The spectrum is the half plane `nx × (ny/2+1)`
/// with `spec[j * (ny/2+1) + k]`, `j` in FFT order along x, `k = 0..=ny/2`.
#[derive(Debug, Clone)]
pub struct RealFft2 {
    nx: usize,
    ny: usize,
    xplan: FftPlan,
    yplan: RealFft,
}

impl RealFft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        RealFft2 { nx, ny, xplan: FftPlan::new(nx), yplan: RealFft::new(ny) }
    }

    pub fn spectrum_len(&self) -> usize {
        self.nx * (self.ny / 2 + 1)
    }

    pub fn forward(&self, values: &[f64], spec: &mut [C64]) {
        let (nx, ny) = (self.nx, self.ny);
        let nyh = ny / 2 + 1;
        assert_eq!(values.len(), nx * ny);
        assert_eq!(spec.len(), nx * nyh);
        let mut scratch = vec![C64::new(0.0, 0.0); ny / 2];
        for ix in 0..nx {
            self.yplan.forward(&values[ix * ny..(ix + 1) * ny], &mut spec[ix * nyh..(ix + 1) * nyh], &mut scratch);
        }
        let mut col = vec![C64::new(0.0, 0.0); nx];
        for k in 0..nyh {
            for j in 0..nx {
                col[j] = spec[j * nyh + k];
            }
            self.xplan.forward(&mut col);
            for j in 0..nx {
                spec[j * nyh + k] = col[j];
            }
        }
    }

    /// Normalized inverse. Returns the realness defect: the largest imaginary
    /// part left in the self-conjugate columns (`k = 0`, `k = ny/2`) after
    /// the x pass, which a Hermitian-consistent spectrum keeps at round-off.
    pub fn inverse(&self, spec: &[C64], values: &mut [f64]) -> f64 {
        let (nx, ny) = (self.nx, self.ny);
        let nyh = ny / 2 + 1;
        assert_eq!(values.len(), nx * ny);
        assert_eq!(spec.len(), nx * nyh);
        let mut work = spec.to_vec();
        let mut col = vec![C64::new(0.0, 0.0); nx];
        let mut defect: f64 = 0.0;
        for k in 0..nyh {
            for j in 0..nx {
                col[j] = work[j * nyh + k];
            }
            self.xplan.inverse(&mut col);
            if k == 0 || k == nyh - 1 {
                for z in &mut col {
                    defect = defect.max(z.im.abs());
                    z.im = 0.0;
                }
            }
            for j in 0..nx {
                work[j * nyh + k] = col[j];
            }
        }
        let mut scratch = vec![C64::new(0.0, 0.0); ny / 2];
        let scale = 1.0 / (nx * ny) as f64;
        for ix in 0..nx {
            let row = &mut values[ix * ny..(ix + 1) * ny];
            self.yplan.inverse(&work[ix * nyh..(ix + 1) * nyh], row, &mut scratch);
            row.iter_mut().for_each(|v| *v *= scale);
        }
        defect * scale
    }
}
