//! Dense-matrix reference operators. Everything here is built from explicit
//! N×N matrices (Kronecker products of the 2×2 Hadamard, a diagonal phase
//! matrix, matrix products) and never calls into the fast in-place routines.

#![allow(dead_code)]

use num_complex::Complex64;

pub type Mat = Vec<Vec<Complex64>>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// H^⊗n as a dense 2^n × 2^n matrix.
pub fn hadamard(n: u32) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h: Mat = vec![vec![c(s), c(s)], vec![c(s), c(-s)]];
    (1..n).fold(h.clone(), |acc, _| kron(&acc, &h))
}

/// Conditional phase shift: every basis state except |0⟩ gets −1.
pub fn conditional_phase(n: u32) -> Mat {
    let size = 1usize << n;
    (0..size)
        .map(|i| (0..size).map(|j| if i != j { c(0.0) } else if i == 0 { c(1.0) } else { c(-1.0) }).collect())
        .collect()
}

/// H (2|0⟩⟨0| − I) H.
pub fn diffusion(n: u32) -> Mat {
    let h = hadamard(n);
    matmul(&matmul(&h, &conditional_phase(n)), &h)
}

/// Diagonal oracle: −1 on solutions, +1 elsewhere.
pub fn oracle(n: u32, solutions: &[usize]) -> Mat {
    let size = 1usize << n;
    (0..size)
        .map(|i| {
            (0..size).map(|j| if i != j { c(0.0) } else if solutions.contains(&i) { c(-1.0) } else { c(1.0) }).collect()
        })
        .collect()
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
