//! Well-conditioned polynomial bases with an explicit monic normalization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::LN_2;

/// How the basis polynomials `φ_0..φ_n` are generated from the rescaled
/// variable `s = (z − center)/scale`.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    /// Chebyshev polynomials of the first kind in `s`.
    Chebyshev,
    /// Polynomials orthonormal (in the discrete RMS sense) on a node set,
    /// generated by Arnoldi. `h[(j, k)]` is the Hessenberg recurrence.
    Arnoldi { h: DMatrix<Complex64> },
}

/// Basis polynomials in the rescaled variable together with the factor that
/// turns `φ_n + Σ_{k<n} c_k φ_k` into a monic polynomial in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedBasis {
    pub center: Complex64,
    pub scale: f64,
    pub kind: BasisKind,
}

impl ConditionedBasis {
    pub fn chebyshev(center: Complex64, scale: f64) -> Self {
        ConditionedBasis {
            center,
            scale,
            kind: BasisKind::Chebyshev,
        }
    }

    /// Arnoldi basis of degree `n` orthonormalized on `nodes`. With `real`
    /// set (node set closed under conjugation, real center) the recurrence
    /// coefficients are real and the basis polynomials have real coefficients.
    pub fn arnoldi(nodes: &[Complex64], center: Complex64, scale: f64, n: usize, real: bool) -> Self {
        let m = nodes.len();
        let s: Vec<Complex64> = nodes.iter().map(|z| (z - center) / scale).collect();
        let mut h = DMatrix::<Complex64>::zeros(n + 1, n.max(1));
        let mut q: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0); m]];
        let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() / m as f64
        };
        for k in 1..=n {
            let mut v: Vec<Complex64> = q[k - 1].iter().zip(&s).map(|(a, b)| a * b).collect();
            // Two passes of Gram–Schmidt keep the basis orthogonal to rounding.
            for _ in 0..2 {
                for j in 0..k {
                    let mut c = inner(&q[j], &v);
                    if real {
                        c.im = 0.0;
                    }
                    h[(j, k - 1)] += c;
                    for (vi, qi) in v.iter_mut().zip(&q[j]) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = inner(&v, &v).re.sqrt();
            h[(k, k - 1)] = Complex64::new(norm, 0.0);
            q.push(v.into_iter().map(|x| x / norm).collect());
        }
        ConditionedBasis {
            center,
            scale,
            kind: BasisKind::Arnoldi { h },
        }
    }

    /// Highest degree the basis supports (unbounded for Chebyshev).
    pub fn max_degree(&self) -> usize {
        match &self.kind {
            BasisKind::Chebyshev => usize::MAX,
            BasisKind::Arnoldi { h } => h.nrows() - 1,
        }
    }

    /// `φ_0(z), …, φ_n(z)`.
    pub fn eval_all(&self, z: Complex64, n: usize) -> Vec<Complex64> {
        let s = (z - self.center) / self.scale;
        let mut out = Vec::with_capacity(n + 1);
        out.push(Complex64::new(1.0, 0.0));
        match &self.kind {
            BasisKind::Chebyshev => {
                if n >= 1 {
                    out.push(s);
                }
                for k in 2..=n {
                    let next = 2.0 * s * out[k - 1] - out[k - 2];
                    out.push(next);
                }
            }
            BasisKind::Arnoldi { h } => {
                assert!(n < h.nrows(), "Arnoldi basis built for degree {}", h.nrows() - 1);
                for k in 1..=n {
                    let mut v = s * out[k - 1];
                    for j in 0..k {
                        v -= h[(j, k - 1)] * out[j];
                    }
                    out.push(v / h[(k, k - 1)]);
                }
            }
        }
        out
    }

    /// Real-variable Chebyshev values `T_0(s), …, T_n(s)` for real `x`.
    pub fn eval_real(&self, x: f64, n: usize) -> Vec<f64> {
        debug_assert!(matches!(self.kind, BasisKind::Chebyshev));
        let s = (x - self.center.re) / self.scale;
        let mut out = Vec::with_capacity(n + 1);
        out.push(1.0);
        if n >= 1 {
            out.push(s);
        }
        for k in 2..=n {
            out.push(2.0 * s * out[k - 1] - out[k - 2]);
        }
        out
    }

    /// `log` of the factor `F` with `F·φ_n(z) = z^n + lower order terms`.
    pub fn log_monic_factor(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let log_scale = n as f64 * self.scale.ln();
        match &self.kind {
            BasisKind::Chebyshev => log_scale - (n - 1) as f64 * LN_2,
            BasisKind::Arnoldi { h } => log_scale + (1..=n).map(|k| h[(k, k - 1)].re.ln()).sum::<f64>(),
        }
    }
}

/// A monic polynomial `F·(φ_n + Σ_{k<n} c_k φ_k)` in a [`ConditionedBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    pub basis: ConditionedBasis,
    pub degree: usize,
    /// `c_0..c_{n−1}`.
    pub coefficients: Vec<Complex64>,
}

impl MonicPolynomial {
    /// `φ_n(z) + Σ c_k φ_k(z)`, i.e. the polynomial without the monic factor.
    pub fn eval_scaled(&self, z: Complex64) -> Complex64 {
        let phi = self.basis.eval_all(z, self.degree);
        phi[self.degree]
            + self
                .coefficients
                .iter()
                .zip(&phi)
                .map(|(c, p)| c * p)
                .sum::<Complex64>()
    }

    pub fn log_factor(&self) -> f64 {
        self.basis.log_monic_factor(self.degree)
    }

    /// The monic polynomial itself.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_scaled(z) * self.log_factor().exp()
    }

    /// Largest imaginary part among the coefficients.
    pub fn max_imaginary_coefficient(&self) -> f64 {
        self.coefficients.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}
