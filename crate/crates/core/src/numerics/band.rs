//! LU factorisation with partial pivoting for complex band matrices.

use num_complex::Complex64;

/// Row-windowed band storage: row `i` keeps columns `i - kl ..= i + kl + ku`
/// so that pivoting fill-in fits.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![Complex64::new(0.0, 0.0); n * width] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let lo = i as isize - self.kl as isize;
        let off = j as isize - lo;
        if off < 0 || off >= self.width as isize {
            None
        } else {
            Some(i * self.width + off as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.slot(i, j).map_or(Complex64::new(0.0, 0.0), |s| self.data[s])
    }

    /// Panics when `(i, j)` lies outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band"
        );
        let s = self.slot(i, j).expect("band slot");
        self.data[s] = v;
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                *yi += self.get(i, j) * x[j];
            }
        }
        y
    }

    /// Factorises `self - shift * I` in place of a copy.
    pub fn lu_shifted(&self, shift: Complex64) -> BandLu {
        let mut a = self.clone();
        for i in 0..a.n {
            let s = a.slot(i, i).unwrap();
            a.data[s] -= shift;
        }
        let n = a.n;
        let kl = a.kl;
        let reach = a.kl + a.ku;
        let mut piv = vec![0usize; n];
        let mut singular = false;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = a.get(k, k).norm();
            for i in k + 1..=last {
                let v = a.get(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            let cmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=cmax {
                    let sk = a.slot(k, j).unwrap();
                    let sp = a.slot(p, j).unwrap();
                    a.data.swap(sk, sp);
                }
            }
            let mut d = a.get(k, k);
            if d.norm() == 0.0 {
                singular = true;
                d = Complex64::new(f64::MIN_POSITIVE.sqrt(), 0.0);
                let s = a.slot(k, k).unwrap();
                a.data[s] = d;
            }
            for i in k + 1..=last {
                let si = a.slot(i, k).unwrap();
                let l = a.data[si] / d;
                a.data[si] = l;
                if l.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..=cmax {
                    let v = a.get(k, j);
                    let s = a.slot(i, j).unwrap();
                    a.data[s] -= l * v;
                }
            }
        }
        BandLu { a, piv, singular }
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    a: BandMatrix,
    piv: Vec<usize>,
    pub singular: bool,
}

impl BandLu {
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.a.n;
        let kl = self.a.kl;
        let reach = self.a.kl + self.a.ku;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let last = (k + kl).min(n - 1);
            for i in k + 1..=last {
                let l = self.a.get(i, k);
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for k in (0..n).rev() {
            let cmax = (k + reach).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=cmax {
                s -= self.a.get(k, j) * x[j];
            }
            x[k] = s / self.a.get(k, k);
        }
        x
    }
}
