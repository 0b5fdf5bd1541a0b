//! Independent brute-force and classical-special-function oracles used by the
//! test suites: rank-1 classical polynomials, the circle theta kernel, Wallis
//! integrals, numerical differentiation, and Gauss-Hermite quadrature.
//!
//! Nothing here shares code with the main pipeline; everything is a direct
//! recurrence, series, or stencil.

use num_complex::Complex64;

use crate::rootsys::Vec2;
use crate::{Error, Result};

/// Lanczos approximation of `ln Gamma(x)` for `x > 0`.
///
/// Coefficients are the classic g = 7, n = 9 set; relative accuracy is about
/// 1e-13 over the arguments used here.
pub fn ln_gamma(x: f64) -> f64 {
    const P: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let xm1 = x - 1.0;
    let mut t = P[0];
    for (i, &p) in P.iter().enumerate().skip(1) {
        t += p / (xm1 + i as f64);
    }
    let w = xm1 + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm1 + 0.5) * w.ln() - w + t.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Gegenbauer polynomial `C_n^mu(u)` by the three-term recurrence.
pub fn gegenbauer_eval(mu: f64, n: usize, u: f64) -> Result<f64> {
    if mu <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "gegenbauer parameter must be positive, got {mu}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * mu * u;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * u * (kf + mu - 1.0) * cur - (kf + 2.0 * mu - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Chebyshev polynomial of the second kind, `U_n(u)`.
pub fn chebyshev_u(n: usize, u: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * u;
    for _ in 2..=n {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence.
pub fn jacobi_eval(a: f64, b: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let kf = k as f64;
        let c1 = 2.0 * kf * (kf + a + b) * (2.0 * kf + a + b - 2.0);
        let c2 = (2.0 * kf + a + b - 1.0)
            * ((2.0 * kf + a + b) * (2.0 * kf + a + b - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * (2.0 * kf + a + b);
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Heat kernel on a circle of circumference `period` (generator d^2/dtheta^2),
/// evaluated by the theta series, summed to machine tail.
pub fn circle_heat_kernel(theta: f64, theta_p: f64, t: f64, period: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let omega = 2.0 * std::f64::consts::PI / period;
    let d = theta - theta_p;
    let mut acc = 1.0;
    let mut k = 1.0f64;
    loop {
        let damp = (-(omega * k).powi(2) * t).exp();
        if damp < 1e-20 {
            break;
        }
        acc += 2.0 * damp * (omega * k * d).cos();
        k += 1.0;
    }
    Ok(acc / period)
}

/// `int_0^pi (2 sin u)^m du = 2^m sqrt(pi) Gamma((m+1)/2) / Gamma(m/2 + 1)`.
pub fn wallis_mass(m: f64) -> Result<f64> {
    if m < 0.0 {
        return Err(Error::InvalidInput(format!(
            "wallis_mass requires m >= 0, got {m}"
        )));
    }
    Ok((m * 2.0f64.ln() + 0.5 * std::f64::consts::PI.ln() + ln_gamma((m + 1.0) / 2.0)
        - ln_gamma(m / 2.0 + 1.0))
    .exp())
}

// 8th-order central stencils.
const FD1: [(i32, f64); 8] = [
    (1, 4.0 / 5.0),
    (-1, -4.0 / 5.0),
    (2, -1.0 / 5.0),
    (-2, 1.0 / 5.0),
    (3, 4.0 / 105.0),
    (-3, -4.0 / 105.0),
    (4, -1.0 / 280.0),
    (-4, 1.0 / 280.0),
];
const FD2: [(i32, f64); 9] = [
    (0, -205.0 / 72.0),
    (1, 8.0 / 5.0),
    (-1, 8.0 / 5.0),
    (2, -1.0 / 5.0),
    (-2, -1.0 / 5.0),
    (3, 8.0 / 315.0),
    (-3, 8.0 / 315.0),
    (4, -1.0 / 560.0),
    (-4, -1.0 / 560.0),
];

/// First partial derivative along `axis` by an 8th-order central stencil.
pub fn fd_partial<F: Fn(Vec2) -> Complex64>(f: &F, x: Vec2, axis: usize, step: f64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (k, c) in FD1 {
        let mut y = x;
        y[axis] += k as f64 * step;
        acc += f(y) * c;
    }
    acc / step
}

/// Second partial derivative along `axis` by an 8th-order central stencil.
pub fn fd_partial2<F: Fn(Vec2) -> Complex64>(f: &F, x: Vec2, axis: usize, step: f64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (k, c) in FD2 {
        let mut y = x;
        y[axis] += k as f64 * step;
        acc += f(y) * c;
    }
    acc / (step * step)
}

/// Directional derivative `d_xi f` from per-axis stencils.
pub fn fd_directional<F: Fn(Vec2) -> Complex64>(
    f: &F,
    x: Vec2,
    xi: Vec2,
    rank: usize,
    step: f64,
) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for axis in 0..rank {
        if xi[axis] != 0.0 {
            acc += fd_partial(f, x, axis, step) * xi[axis];
        }
    }
    acc
}

/// Euclidean Laplacian from per-axis second-derivative stencils.
pub fn fd_laplacian<F: Fn(Vec2) -> Complex64>(f: &F, x: Vec2, rank: usize, step: f64) -> Complex64 {
    (0..rank).map(|axis| fd_partial2(f, x, axis, step)).sum()
}

/// Gauss-Hermite nodes and weights for `int f(x) e^{-x^2} dx`.
///
/// Newton iteration on the orthonormalized Hermite recurrence; standard
/// initial guesses for the largest roots.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite values at z.
            let mut p1 = std::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}
