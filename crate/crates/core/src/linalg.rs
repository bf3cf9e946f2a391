//! Minimal dense complex linear algebra for the Lindblad module: square
//! matrices, LU solves, and the scaling-and-squaring matrix exponential.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Complex;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<Complex>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: alloc::vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let mut out = alloc::vec![Complex::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn scale(&self, c: Complex) -> CMat {
        CMat {
            n: self.n,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n, other.n);
        CMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &CMat, c: Complex) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (p, q) = (self.n, other.n);
        let n = p * q;
        let mut out = CMat::zeros(n);
        for i in 0..p {
            for j in 0..p {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        out[(i * q + k, j * q + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Solve self · X = B by LU with partial pivoting.
    pub fn solve(&self, b: &CMat) -> Result<CMat> {
        let n = self.n;
        let mut lu = self.clone();
        let mut x = b.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (pivot_row, pivot_norm) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .fold((col, 0.0), |best, cand| if cand.1 > best.1 { cand } else { best });
            if pivot_norm < 1e-300 {
                return Err(Error::Numeric {
                    context: "singular matrix in LU solve",
                    coefficients: Vec::new(),
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(col, pivot_row);
            }
            let inv_pivot = lu[(col, col)].inv();
            for r in col + 1..n {
                let factor = lu[(r, col)] * inv_pivot;
                lu[(r, col)] = factor;
                for j in col + 1..n {
                    let sub = factor * lu[(col, j)];
                    lu[(r, j)] -= sub;
                }
            }
        }
        // apply permutation to RHS
        let permuted: Vec<Complex> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| x[(perm[i], j)])
            .collect();
        x.data = permuted;
        // forward substitution (unit lower)
        for col in 0..n {
            for r in col + 1..n {
                let factor = lu[(r, col)];
                for j in 0..n {
                    let sub = factor * x[(col, j)];
                    x[(r, j)] -= sub;
                }
            }
        }
        // back substitution
        for col in (0..n).rev() {
            let inv = lu[(col, col)].inv();
            for j in 0..n {
                x[(col, j)] *= inv;
            }
            for r in 0..col {
                let factor = lu[(r, col)];
                for j in 0..n {
                    let sub = factor * x[(col, j)];
                    x[(r, j)] -= sub;
                }
            }
        }
        Ok(x)
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &CMat) -> Result<CMat> {
    // Padé-13 coefficients
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;

    let norm = a.norm_one();
    let s = if norm > THETA_13 {
        libm::ceil(libm::log2(norm / THETA_13)) as u32
    } else {
        0
    };
    let scaled = a.scale(Complex::new(libm::exp2(-(s as f64)), 0.0));

    let n = a.dim();
    let ident = CMat::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    // U = A·(A6·(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let mut inner = a6.scale(Complex::new(B[13], 0.0));
    inner.add_assign_scaled(&a4, Complex::new(B[11], 0.0));
    inner.add_assign_scaled(&a2, Complex::new(B[9], 0.0));
    let mut u = a6.matmul(&inner);
    u.add_assign_scaled(&a6, Complex::new(B[7], 0.0));
    u.add_assign_scaled(&a4, Complex::new(B[5], 0.0));
    u.add_assign_scaled(&a2, Complex::new(B[3], 0.0));
    u.add_assign_scaled(&ident, Complex::new(B[1], 0.0));
    let u = scaled.matmul(&u);

    // V = A6·(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let mut inner = a6.scale(Complex::new(B[12], 0.0));
    inner.add_assign_scaled(&a4, Complex::new(B[10], 0.0));
    inner.add_assign_scaled(&a2, Complex::new(B[8], 0.0));
    let mut v = a6.matmul(&inner);
    v.add_assign_scaled(&a6, Complex::new(B[6], 0.0));
    v.add_assign_scaled(&a4, Complex::new(B[4], 0.0));
    v.add_assign_scaled(&a2, Complex::new(B[2], 0.0));
    v.add_assign_scaled(&ident, Complex::new(B[0], 0.0));

    // (V − U)·R = (V + U)
    let mut vmu = v.clone();
    vmu.add_assign_scaled(&u, Complex::new(-1.0, 0.0));
    let mut vpu = v;
    vpu.add_assign_scaled(&u, Complex::new(1.0, 0.0));
    let mut r = vmu.solve(&vpu)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}
