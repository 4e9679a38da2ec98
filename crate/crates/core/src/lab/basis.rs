//! Band-limited, phase-invariant polynomial functions on CPⁿ.
//!
//! The degree-D space is spanned by the monomials `z^a·z̄^b` with
//! `|a| = |b| = D` restricted to unit representatives. Because conjugation
//! swaps `(a, b)`, the span has a real-valued generating set: the diagonal
//! monomials `|z^a|²` and the real and imaginary parts of the off-diagonal
//! ones. Inner products of generators reduce to sphere moments
//! `∫ z^c z̄^{c'} dσ = δ_{cc'}·n!·c!/(n+|c|)!` (normalized measure), so the
//! Gram matrix is computed in closed form and symmetrically
//! orthonormalized. The resulting basis is real-valued and orthonormal,
//! which keeps transform operators real.

use super::LabError;
use crate::cpn::{CVector, ProjPoint};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Desk-scale cap on the basis size `C(D+n, n)²`.
pub const BASIS_SIZE_CAP: usize = 2500;

/// Condition-number cap on the generator Gram matrix.
const GRAM_CONDITION_CAP: f64 = 1e12;

/// All multi-indices of `nvars` nonnegative integers summing to `degree`,
/// in lexicographic order.
pub fn multi_indices(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            let mut v = prefix.clone();
            v.push(remaining);
            out.push(v);
            return;
        }
        for take in (0..=remaining).rev() {
            prefix.push(take);
            rec(prefix, remaining - take, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), degree, nvars, &mut out);
    out
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// The moment `∫ z^c z̄^c dσ = n!·c!/(n+|c|)!` of the unit sphere in
/// ℂ^{n+1} with normalized measure. Off-diagonal moments (`c ≠ c'`) vanish.
pub fn sphere_moment(n: usize, c: &[u32]) -> f64 {
    let total: u32 = c.iter().sum();
    let ln = ln_factorial(n) + c.iter().map(|&ci| ln_factorial(ci as usize)).sum::<f64>()
        - ln_factorial(n + total as usize);
    ln.exp()
}

fn binomial(n: usize, k: usize) -> usize {
    let mut r = 1usize;
    for i in 0..k.min(n - k) {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// A real generating function: a diagonal monomial or the real/imaginary
/// part of an off-diagonal one. Indices refer to the exponent table.
#[derive(Clone, Copy, Debug)]
enum Generator {
    Diag(usize),
    Re(usize, usize),
    Im(usize, usize),
}

impl Generator {
    /// The generator as complex combinations of plain monomials
    /// `f_{uv} = z^u·z̄^v`: a list of `(coefficient, u, v)` terms.
    fn terms(&self) -> Vec<(Complex64, usize, usize)> {
        match *self {
            Generator::Diag(a) => vec![(Complex64::ONE, a, a)],
            Generator::Re(a, b) => vec![(Complex64::ONE, a, b), (Complex64::ONE, b, a)],
            Generator::Im(a, b) => vec![
                (Complex64::new(0.0, -1.0), a, b),
                (Complex64::new(0.0, 1.0), b, a),
            ],
        }
    }
}

/// An orthonormal basis of the real-valued degree-D band on CPⁿ.
#[derive(Clone, Debug)]
pub struct CPBasis {
    n: usize,
    degree: u32,
    exponents: Vec<Vec<u32>>,
    generators: Vec<Generator>,
    /// Symmetric orthonormalizer: row `i` holds basis function `i` in
    /// generator coordinates.
    transform: DMatrix<f64>,
}

impl CPBasis {
    /// Builds the orthonormal basis; fails when `C(D+n,n)²` exceeds the cap
    /// or the generator Gram matrix is numerically singular.
    pub fn build(n: usize, degree: u32) -> Result<Self, LabError> {
        assert!(n >= 1, "CP^0 is a point");
        let m = binomial(degree as usize + n, n);
        let size = m * m;
        if size > BASIS_SIZE_CAP {
            return Err(LabError::BasisTooLarge {
                size,
                cap: BASIS_SIZE_CAP,
            });
        }
        let exponents = multi_indices(n + 1, degree);
        debug_assert_eq!(exponents.len(), m);

        let mut generators = Vec::with_capacity(size);
        for a in 0..m {
            generators.push(Generator::Diag(a));
        }
        for a in 0..m {
            for b in (a + 1)..m {
                generators.push(Generator::Re(a, b));
                generators.push(Generator::Im(a, b));
            }
        }
        debug_assert_eq!(generators.len(), size);

        let gram = Self::generator_gram(n, &exponents, &generators);
        let eig = nalgebra::SymmetricEigen::new(gram);
        let lmax = eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
        let lmin = eig.eigenvalues.iter().copied().fold(f64::MAX, f64::min);
        if !lmin.is_finite() || lmin <= 0.0 || lmax / lmin > GRAM_CONDITION_CAP {
            return Err(LabError::GramIllConditioned {
                condition: if lmin > 0.0 { lmax / lmin } else { f64::INFINITY },
            });
        }
        let q = eig.eigenvectors;
        let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        let transform = &q * inv_sqrt * q.transpose();

        Ok(Self {
            n,
            degree,
            exponents,
            generators,
            transform,
        })
    }

    fn generator_gram(
        n: usize,
        exponents: &[Vec<u32>],
        generators: &[Generator],
    ) -> DMatrix<f64> {
        // Plain product integral ∫ f_{uv}·f_{u'v'} dσ: nonzero only when
        // u + u' = v + v', where it equals the moment of the summed index.
        let plain = |u: usize, v: usize, up: usize, vp: usize| -> f64 {
            let sum_u: Vec<u32> = exponents[u]
                .iter()
                .zip(&exponents[up])
                .map(|(x, y)| x + y)
                .collect();
            let sum_v: Vec<u32> = exponents[v]
                .iter()
                .zip(&exponents[vp])
                .map(|(x, y)| x + y)
                .collect();
            if sum_u == sum_v {
                sphere_moment(n, &sum_u)
            } else {
                0.0
            }
        };
        let size = generators.len();
        let mut gram = DMatrix::zeros(size, size);
        for i in 0..size {
            let ti = generators[i].terms();
            for j in i..size {
                let tj = generators[j].terms();
                let mut acc = Complex64::new(0.0, 0.0);
                for &(ci, u, v) in &ti {
                    for &(cj, up, vp) in &tj {
                        let p = plain(u, v, up, vp);
                        if p != 0.0 {
                            acc += ci * cj * p;
                        }
                    }
                }
                debug_assert!(acc.im.abs() < 1e-12);
                gram[(i, j)] = acc.re;
                gram[(j, i)] = acc.re;
            }
        }
        gram
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Dimension of the basis: `C(D+n, n)²`.
    pub fn size(&self) -> usize {
        self.generators.len()
    }

    /// Values of the raw generators at a unit representative.
    fn generator_values(&self, rep: &CVector) -> DVector<f64> {
        let nvars = self.n + 1;
        let d = self.degree as usize;
        // Power table z_i^k for k ≤ D.
        let mut pows = vec![Complex64::ONE; nvars * (d + 1)];
        for i in 0..nvars {
            for k in 1..=d {
                pows[i * (d + 1) + k] = pows[i * (d + 1) + k - 1] * rep[i];
            }
        }
        let mono: Vec<Complex64> = self
            .exponents
            .iter()
            .map(|a| {
                a.iter()
                    .enumerate()
                    .fold(Complex64::ONE, |acc, (i, &k)| {
                        acc * pows[i * (d + 1) + k as usize]
                    })
            })
            .collect();
        DVector::from_fn(self.generators.len(), |g, _| match self.generators[g] {
            Generator::Diag(a) => mono[a].norm_sqr(),
            Generator::Re(a, b) => 2.0 * (mono[a] * mono[b].conj()).re,
            Generator::Im(a, b) => 2.0 * (mono[a] * mono[b].conj()).im,
        })
    }

    /// Values of every orthonormal basis function at a unit representative
    /// (phase invariant).
    pub fn evaluate_rep(&self, rep: &CVector) -> DVector<f64> {
        &self.transform * self.generator_values(rep)
    }

    pub fn evaluate(&self, p: &ProjPoint) -> DVector<f64> {
        self.evaluate_rep(p.rep())
    }

    /// Gram matrix of the raw generators (closed form); exposed for the
    /// orthonormality checks.
    #[cfg(test)]
    pub(crate) fn raw_gram(&self) -> DMatrix<f64> {
        Self::generator_gram(self.n, &self.exponents, &self.generators)
    }
}
