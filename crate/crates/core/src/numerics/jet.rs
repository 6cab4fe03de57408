//! Truncated Taylor series `sum c_j t^j` with complex coefficients.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<Complex64>,
}

impl Jet {
    pub fn zeros(len: usize) -> Self {
        Jet { c: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn constant(v: Complex64, len: usize) -> Self {
        let mut j = Self::zeros(len);
        j.c[0] = v;
        j
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.c.truncate(len);
        self
    }

    /// d/dt; the result is one coefficient shorter.
    pub fn derivative(&self) -> Self {
        let c = (1..self.c.len()).map(|j| self.c[j] * j as f64).collect();
        Jet { c }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Jet { c: self.c.iter().map(|&x| x * s).collect() }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let mut r = Self::zeros(n);
        let inv0 = 1.0 / self.c[0];
        r.c[0] = inv0;
        for k in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                s += self.c[i] * r.c[k - i];
            }
            r.c[k] = -s * inv0;
        }
        r
    }

    pub fn div(&self, other: &Jet) -> Self {
        self * &other.recip()
    }

    /// Principal square root of the leading coefficient, extended as a series.
    pub fn sqrt(&self) -> Self {
        let n = self.c.len();
        let mut r = Self::zeros(n);
        r.c[0] = self.c[0].sqrt();
        let two_r0 = 2.0 * r.c[0];
        for k in 1..n {
            let mut s = self.c[k];
            for i in 1..k {
                s -= r.c[i] * r.c[k - i];
            }
            r.c[k] = s / two_r0;
        }
        r
    }

    /// Series of `exp(a + b t)`, used for the `cosh` and `sinh` jets.
    pub fn exp_linear(a: Complex64, b: Complex64, len: usize) -> Self {
        let mut j = Self::zeros(len);
        let mut term = a.exp();
        for k in 0..len {
            j.c[k] = term;
            term = term * b / (k as f64 + 1.0);
        }
        j
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|i| self.c[i] + o.c[i]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|i| self.c[i] - o.c[i]).collect() }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut r = Jet::zeros(n);
        for k in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                s += self.c[i] * o.c[k - i];
            }
            r.c[k] = s;
        }
        r
    }
}
