//! Dense complex matrices and the matrix exponential.
//!
//! Scaling-and-squaring with a Taylor core: the generators exponentiated
//! here (truncated displacement and squeeze generators) are anti-Hermitian,
//! so the exponential is unitary and the squaring phase is well conditioned.
//! The Taylor tail is driven below 1e-13 of the running sum after scaling
//! the 1-norm under 1/4.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Truncated annihilation operator: `a[n-1, n] = √n`.
    pub fn annihilator(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for k in 1..dim {
            m[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
        }
        m
    }

    /// Truncated creation operator, the transpose of [`CMatrix::annihilator`].
    pub fn creator(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for k in 1..dim {
            m[(k, k - 1)] = Complex64::new((k as f64).sqrt(), 0.0);
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let row_out = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                let row_b = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(v.len(), n);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in self.data[i * n..(i + 1) * n].iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn frob(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// exp(A) by scaling-and-squaring with a Taylor core to ~1e-13.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm = a.norm_1();
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(1.0 / 2f64.powi(s as i32), 0.0));
    let mut sum = CMatrix::identity(a.n);
    let mut term = CMatrix::identity(a.n);
    for k in 1..=60u32 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.frob() < 1e-13 * sum.frob().max(1.0) {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..s {
        out = out.matmul(&out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_of_diagonal() {
        let mut a = CMatrix::zeros(3);
        a[(0, 0)] = Complex64::new(1.0, 0.0);
        a[(1, 1)] = Complex64::new(0.0, std::f64::consts::PI);
        a[(2, 2)] = Complex64::new(-2.0, 0.5);
        let e = expm(&a);
        assert!((e[(0, 0)] - Complex64::new(1f64.exp(), 0.0)).norm() < 1e-12);
        assert!((e[(1, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((e[(2, 2)] - Complex64::new(-2.0, 0.5).exp()).norm() < 1e-12);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn exponential_of_antihermitian_is_unitary() {
        // K = α a† − α* a on a modest truncation.
        let dim = 40;
        let alpha = Complex64::new(0.9, -0.4);
        let k = CMatrix::creator(dim)
            .scale(alpha)
            .add(&CMatrix::annihilator(dim).scale(-alpha.conj()));
        let u = expm(&k);
        // Column norms of a unitary are 1 (truncation spoils only the last
        // few columns; check the first one, i.e. U|0⟩).
        let col0: f64 = (0..dim).map(|i| u[(i, 0)].norm_sqr()).sum();
        assert!((col0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        // e^{αa†−α*a}|0⟩ has ⟨n|ψ⟩ = e^{−|α|²/2} αⁿ/√n!.
        let dim = 64;
        let alpha = Complex64::new(1.0, 0.0);
        let k = CMatrix::creator(dim)
            .scale(alpha)
            .add(&CMatrix::annihilator(dim).scale(-alpha.conj()));
        let u = expm(&k);
        let mut e0 = vec![Complex64::new(0.0, 0.0); dim];
        e0[0] = Complex64::new(1.0, 0.0);
        let v = u.matvec(&e0);
        let mut fact = 1.0f64;
        for n in 0..12 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-0.5f64).exp() / fact.sqrt();
            assert!(
                (v[n] - Complex64::new(want, 0.0)).norm() < 1e-10,
                "n = {n}: {} vs {want}",
                v[n]
            );
        }
    }
}
