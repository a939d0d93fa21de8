//! Complex and real 3-vectors.

use libm::sqrt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

pub type Vec3 = [f64; 3];

/// Complex 3-vector. `dot` and `cross` are bilinear (no conjugation).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const ZERO: CVec3 = CVec3([Complex64::new(0.0, 0.0); 3]);

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        CVec3([x, y, z])
    }

    pub fn from_real(v: Vec3) -> Self {
        CVec3([v[0].into(), v[1].into(), v[2].into()])
    }

    pub fn from_parts(re: Vec3, im: Vec3) -> Self {
        CVec3(core::array::from_fn(|i| Complex64::new(re[i], im[i])))
    }

    pub fn re(&self) -> Vec3 {
        self.0.map(|z| z.re)
    }

    pub fn im(&self) -> Vec3 {
        self.0.map(|z| z.im)
    }

    pub fn conj(&self) -> Self {
        CVec3(self.0.map(|z| z.conj()))
    }

    pub fn dot(&self, o: &CVec3) -> Complex64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn dot_real(&self, v: &Vec3) -> Complex64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }

    /// Hermitian product `Σ aᵢ conj(bᵢ)`.
    pub fn hdot(&self, o: &CVec3) -> Complex64 {
        self.dot(&o.conj())
    }

    pub fn cross(&self, o: &CVec3) -> CVec3 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        CVec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn scale(&self, s: Complex64) -> CVec3 {
        CVec3(self.0.map(|z| z * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for CVec3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec3 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3(core::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for CVec3 {
    fn add_assign(&mut self, o: CVec3) {
        for i in 0..3 {
            self.0[i] += o.0[i];
        }
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3(core::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl SubAssign for CVec3 {
    fn sub_assign(&mut self, o: CVec3) {
        for i in 0..3 {
            self.0[i] -= o.0[i];
        }
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3(self.0.map(|z| -z))
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        self.scale(s)
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3(self.0.map(|z| z * s))
    }
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    sqrt(dot(a, a))
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_right_handed() {
        let x = CVec3::from_real([1.0, 0.0, 0.0]);
        let y = CVec3::from_real([0.0, 1.0, 0.0]);
        assert_eq!(x.cross(&y), CVec3::from_real([0.0, 0.0, 1.0]));
        assert_eq!(cross(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn hermitian_norm() {
        let v = CVec3::new(Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0), 0.0.into());
        assert_eq!(v.hdot(&v).re, 6.0);
        assert_eq!(v.norm_sqr(), 6.0);
    }
}
