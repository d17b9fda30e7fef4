//! Pfaffian of a complex antisymmetric matrix by Parlett–Reid elimination
//! with partial pivoting.

use num_complex::Complex64;

/// Pivots below this fraction of the largest entry count as zero.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Pfaffian in factored form: `phase · exp(log_mag)`, or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogPfaffian {
    Zero,
    Value { phase: Complex64, log_mag: f64 },
}

impl LogPfaffian {
    pub fn to_complex(self) -> Complex64 {
        match self {
            LogPfaffian::Zero => Complex64::new(0.0, 0.0),
            LogPfaffian::Value { phase, log_mag } => phase * log_mag.exp(),
        }
    }
}

/// Pfaffian of `a` (row-major, n×n). The matrix is consumed as scratch space.
pub fn pfaffian_log(mut a: Vec<Vec<Complex64>>) -> LogPfaffian {
    let n = a.len();
    if n == 0 {
        return LogPfaffian::Value { phase: Complex64::new(1.0, 0.0), log_mag: 0.0 };
    }
    if n % 2 == 1 {
        return LogPfaffian::Zero;
    }
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return LogPfaffian::Zero;
    }
    let mut phase = Complex64::new(1.0, 0.0);
    let mut log_mag = 0.0;
    for k in (0..n - 1).step_by(2) {
        let (kp, best) = (k + 1..n)
            .map(|i| (i, a[i][k].norm()))
            .fold((k + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if kp != k + 1 {
            a.swap(k + 1, kp);
            for row in a.iter_mut() {
                row.swap(k + 1, kp);
            }
            phase = -phase;
        }
        if best <= SINGULAR_TOL * scale {
            return LogPfaffian::Zero;
        }
        let pivot = a[k][k + 1];
        phase *= pivot / pivot.norm();
        log_mag += pivot.norm().ln();
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|j| a[k][j] / pivot).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|i| a[i][k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[i][j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    LogPfaffian::Value { phase, log_mag }
}

pub fn pfaffian(a: Vec<Vec<Complex64>>) -> Complex64 {
    pfaffian_log(a).to_complex()
}

/// Reference Pfaffian by expansion along the first row; exponential cost.
pub fn pfaffian_expansion(a: &[Vec<Complex64>]) -> Complex64 {
    fn rec(a: &[Vec<Complex64>], idx: &[usize]) -> Complex64 {
        if idx.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let first = idx[0];
        let mut total = Complex64::new(0.0, 0.0);
        for (pos, &j) in idx.iter().enumerate().skip(1) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != j).collect();
            let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[first][j] * rec(a, &rest);
        }
        total
    }
    if a.len() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let idx: Vec<usize> = (0..a.len()).collect();
    rec(a, &idx)
}
