use nalgebra::DMatrix;
use num_complex::Complex64;

use super::group::Su2;

pub type CMatrix = DMatrix<Complex64>;

/// `π_n(g)` for one group element.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepMatrix {
    pub n: usize,
    pub matrix: CMatrix,
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut c = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1.0;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0.0 };
        }
    }
    c
}

fn powers(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        p.push(acc);
        acc *= z;
    }
    p
}

/// The spin-`n/2` representation: `g` acts on homogeneous degree-`n`
/// polynomials by `p(z) ↦ p(z g)` (z a row vector), written in the basis
/// `z₁^{n-k} z₂^k / sqrt((n-k)! k!)`, which is orthonormal for the
/// Fischer inner product and makes the matrices unitary.
pub fn irrep_matrix(n: usize, g: &Su2) -> IrrepMatrix {
    let [[g11, g12], [g21, g22]] = g.matrix();
    let fact = factorials(n);
    let binom = binomials(n);
    let (p11, p12, p21, p22) = (
        powers(g11, n),
        powers(g12, n),
        powers(g21, n),
        powers(g22, n),
    );
    let mut m = CMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        // expand (z₁g₁₁ + z₂g₂₁)^{n-k} (z₁g₁₂ + z₂g₂₂)^k; a + b is the z₂ degree
        for a in 0..=n - k {
            let left = binom[n - k][a] * p11[n - k - a] * p21[a];
            for b in 0..=k {
                let j = a + b;
                m[(j, k)] += left * binom[k][b] * p12[k - b] * p22[b];
            }
        }
    }
    for j in 0..=n {
        for k in 0..=n {
            m[(j, k)] *= ((fact[n - j] * fact[j]) / (fact[n - k] * fact[k])).sqrt();
        }
    }
    IrrepMatrix { n, matrix: m }
}
