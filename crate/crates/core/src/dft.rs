//! Dense separable discrete Fourier transform for the modest 3-D arrays used
//! by spectral evolution. O(n) work per output sample along each axis.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::prelude::*;

/// In-place transform of one strided line, using a twiddle table of length `len`.
fn line(data: &mut [Complex64], start: usize, stride: usize, tw: &[Complex64], buf: &mut Vec<Complex64>) {
    let len = tw.len();
    buf.clear();
    buf.extend((0..len).map(|j| data[start + j * stride]));
    for k in 0..len {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0;
        for x in buf.iter() {
            acc += x * tw[idx];
            idx += k;
            if idx >= len {
                idx -= len;
            }
        }
        data[start + k * stride] = acc;
    }
}

/// 3-D DFT of a row-major `n[0] × n[1] × n[2]` array.
///
/// Forward uses e^{−2πi jk/N}; the inverse uses e^{+2πi jk/N} and divides by
/// the total size, so `inverse(forward(x)) = x`.
pub fn dft3(data: &mut [Complex64], n: [usize; 3], inverse: bool) {
    assert_eq!(data.len(), n[0] * n[1] * n[2], "dft3: length does not match shape");
    let sign = if inverse { 1.0 } else { -1.0 };
    let strides = [n[1] * n[2], n[2], 1];
    let mut buf = Vec::new();
    for axis in 0..3 {
        let len = n[axis];
        let tw: Vec<Complex64> =
            (0..len).map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 / len as f64)).collect();
        let s = strides[axis];
        for base in 0..data.len() {
            if (base / s) % len == 0 {
                line(data, base, s, &tw, &mut buf);
            }
        }
    }
    if inverse {
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }
}

/// Angular wavenumber of DFT bin `m` on an axis of `len` samples spaced `h`.
pub fn wavenumber(m: usize, len: usize, h: f64) -> f64 {
    let signed = if 2 * m < len { m as f64 } else { m as f64 - len as f64 };
    2.0 * PI * signed / (len as f64 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let n = [3, 4, 5];
        let orig: Vec<Complex64> =
            (0..60).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64).cos())).collect();
        let mut d = orig.clone();
        dft3(&mut d, n, false);
        dft3(&mut d, n, true);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn single_mode_lands_in_one_bin() {
        let n = [4, 4, 8];
        let mut d = vec![Complex64::new(0.0, 0.0); 128];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..8 {
                    d[(i * 4 + j) * 8 + k] = Complex64::from_polar(1.0, 2.0 * PI * (i as f64 / 4.0 + 3.0 * k as f64 / 8.0));
                }
            }
        }
        dft3(&mut d, n, false);
        for (idx, z) in d.iter().enumerate() {
            let want = if idx == (1 * 4) * 8 + 3 { 128.0 } else { 0.0 };
            assert!((z.norm() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn signed_wavenumbers() {
        assert_eq!(wavenumber(0, 8, 1.0), 0.0);
        assert!((wavenumber(7, 8, 1.0) + 2.0 * PI / 8.0).abs() < 1e-15);
        assert!((wavenumber(4, 8, 1.0) + PI).abs() < 1e-15);
    }
}
