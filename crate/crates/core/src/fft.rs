//! Radix-2 complex FFT. Twiddles are evaluated directly, not by recurrence.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

fn transform(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n < 2 {
        return;
    }
    let shift = usize::BITS - n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> shift;
        if j > i {
            buf.swap(i, j);
        }
    }
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let a = sign * 2.0 * PI * k as f64 / n as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = buf[start + k];
                let b = buf[start + k + half] * twiddles[k * stride];
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// `c_m = (1/n) sum_k g_k exp(-2 pi i m k / n)`.
pub(crate) fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut buf, -1.0);
    let scale = 1.0 / values.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Real part of `g_k = sum_m c_m exp(2 pi i m k / n)`.
pub(crate) fn inverse_real(spectrum: &[Complex64]) -> Vec<f64> {
    let mut buf = spectrum.to_vec();
    transform(&mut buf, 1.0);
    buf.into_iter().map(|c| c.re).collect()
}
