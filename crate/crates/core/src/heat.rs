//! The alcove heat kernel, its truncation control, and the heat semigroup
//! acting on sampled data.
//!
//! The kernel is the spectral series
//! `G_m(x, y, t) = sum_la r_la e^{-theta_la t} R_la(x) R_la(-y)` truncated at
//! the basis shell. The neglected tail is bounded by the polynomial-growth
//! envelope `r_la <= C prod la_a^{m_a}` (with `C` fitted on the computed
//! basis and a safety factor), combined with `theta_la >= |la|^2` and a
//! lattice point count per norm shell; for complex arguments the factor
//! `|R_la(z)| <= e^{|la| |Im z|}` enters. The reported bound is guaranteed
//! for `t >= t_min`, where `t_min` is calibrated at construction from the
//! requested tolerance.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::innerprod::QuadratureGrid;
use crate::jacobi::JacobiBasis;
use crate::rootsys::{RootSystem, Vec2, Weight};
use crate::trigpoly::TrigPoly;
use crate::{Error, Result};

pub use crate::jacobi::theta;

/// Values of a (nominally W_aff-invariant) function on a quadrature grid.
#[derive(Clone)]
pub struct SampledFunction {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_fn<F: Fn(Vec2) -> Complex64 + Sync>(grid: Arc<QuadratureGrid>, f: F) -> Self {
        let values = grid.sample(f);
        SampledFunction { grid, values }
    }

    pub fn from_poly(grid: Arc<QuadratureGrid>, f: &TrigPoly) -> Self {
        Self::from_fn(grid, |x| f.eval_real(x))
    }

    pub fn check_grid(&self, other: &SampledFunction) -> Result<()> {
        if !self.grid.same_grid(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Weighted `L^p` norm over the alcove (`p = infinity` gives the sup).
    pub fn lp_norm(&self, p: f64, weight_values: &[f64]) -> f64 {
        let rs = self.grid.root_system();
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let cw = self.grid.cell_weight() / rs.weyl_order() as f64;
        let mut acc = 0.0;
        for (v, &w) in self.values.iter().zip(weight_values) {
            acc += v.norm().powf(p) * w;
        }
        (acc * cw).powf(1.0 / p)
    }

    /// Largest deviation `|f(w k) - f(k)|` over Weyl generators acting on
    /// grid indices (lattice translations act trivially on indices, so this
    /// measures the full affine symmetry defect).
    pub fn symmetry_defect(&self) -> f64 {
        let rs = self.grid.root_system().clone();
        let n = self.grid.n as i64;
        let mut worst = 0.0f64;
        for w in &rs.weyl {
            // Integer action on coroot-basis coordinates.
            let a = crate::rootsys::mat_mul(
                &crate::rootsys::mat_mul(&rs.coroot_inv, &w.mat),
                &rs.coroot_basis,
            );
            let mut c = [[0i64; 2]; 2];
            let mut ok = true;
            for i in 0..2 {
                for j in 0..2 {
                    let r = a[i][j].round();
                    if (a[i][j] - r).abs() > 1e-9 {
                        ok = false;
                    }
                    c[i][j] = r as i64;
                }
            }
            if !ok {
                continue;
            }
            for flat in 0..self.values.len() {
                let idx = self.grid.indices(flat);
                let k = [idx[0] as i64, idx[1] as i64];
                let img = [
                    (c[0][0] * k[0] + c[0][1] * k[1]).rem_euclid(n) as usize,
                    (c[1][0] * k[0] + c[1][1] * k[1]).rem_euclid(n) as usize,
                ];
                let flat_img = if rs.rank == 1 {
                    img[0]
                } else {
                    img[0] * self.grid.n + img[1]
                };
                worst = worst.max((self.values[flat] - self.values[flat_img]).norm());
            }
        }
        worst
    }
}

/// Kernel value together with the truncation-tail estimate.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Whether the bound is guaranteed (`t >= t_min` of the evaluator).
    pub guaranteed: bool,
}

/// Truncated spectral heat kernel with tail control.
pub struct HeatKernelEvaluator {
    basis: Arc<JacobiBasis>,
    pub eps: f64,
    pub t_min: f64,
    /// Envelope constant: `r_la <= env_c * prod_{la_a != 0} la_a^{m_a}` with
    /// a factor-2 safety margin over the fitted maximum.
    env_c: f64,
    /// Dominant weights in the extension zone `(shell, shell + EXT]`, cached
    /// as (norm, theta, envelope product).
    ext_zone: Vec<(f64, f64, f64)>,
    ext_end: f64,
}

const TAIL_EXTENSION: f64 = 20.0;

impl HeatKernelEvaluator {
    pub fn new(basis: Arc<JacobiBasis>, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidInput(format!(
                "truncation tolerance must be positive, got {eps}"
            )));
        }
        let rs = basis.root_system().clone();
        let envelope = |la: &Weight| -> f64 {
            let mut p = 1.0;
            for root in &rs.positive_roots {
                let la_a = rs.lambda_alpha(la, root);
                if la_a != 0 {
                    p *= (la_a as f64).powf(rs.multiplicity_of(root));
                }
            }
            p
        };
        let mut env_c = 0.0f64;
        for e in &basis.entries {
            env_c = env_c.max(e.r / envelope(&e.lambda));
        }
        env_c *= 2.0;
        let shell = basis.max_shell;
        let ext_end = shell + TAIL_EXTENSION;
        let ext_zone: Vec<(f64, f64, f64)> = rs
            .dominant_weights_in_shell(ext_end)
            .into_iter()
            .filter(|la| la.norm() > shell + 1e-12)
            .map(|la| (la.norm(), theta(&rs, &la), envelope(&la)))
            .collect();
        let mut ev = HeatKernelEvaluator {
            basis,
            eps,
            t_min: 0.0,
            env_c,
            ext_zone,
            ext_end,
        };
        // Smallest t with a guaranteed tail below eps, by bisection.
        let mut lo = 1e-6;
        let mut hi = 64.0;
        if ev.tail_bound(lo, 0.0, 0.0) < eps {
            ev.t_min = lo;
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if ev.tail_bound(mid, 0.0, 0.0) < eps {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            ev.t_min = hi;
        }
        Ok(ev)
    }

    pub fn basis(&self) -> &Arc<JacobiBasis> {
        &self.basis
    }

    /// Upper bound on the neglected tail
    /// `sum_{|la| > shell} r_la e^{-theta_la t} |R_la(z)| |R_la(-w)|`
    /// for arguments with imaginary parts of length `im_z`, `im_w`.
    ///
    /// Dominant weights in the extension zone just past the shell are
    /// enumerated with their exact spectral values; beyond that a continuum
    /// comparison over norm shells takes over (where the summands are
    /// already negligible for any `t` of interest).
    pub fn tail_bound(&self, t: f64, im_z: f64, im_w: f64) -> f64 {
        let rs = self.basis.root_system();
        let grow = im_z + im_w;
        let mut total = 0.0;
        for &(norm, th, env) in &self.ext_zone {
            total += self.env_c * env * (-th * t + norm * grow).exp();
        }
        // Continuum remainder: theta_la >= |la|^2 + 2 rho_min |la| on the
        // dominant cone, with rho_min the minimum of <rho, .> over the
        // extreme rays.
        let rho = rs.rho();
        let mut rho_min = f64::INFINITY;
        for j in 0..rs.rank {
            let b = rs.lattice_column(j);
            rho_min = rho_min.min(crate::rootsys::dot(rho, b) / crate::rootsys::norm(b));
        }
        let mut m_total = 0.0;
        let mut c_pow = 1.0;
        for root in &rs.positive_roots {
            let m = rs.multiplicity_of(root);
            m_total += m;
            c_pow *= root.norm_sq.sqrt().powf(m);
        }
        let count = |u: f64| -> f64 {
            match rs.rank {
                1 => {
                    let d = crate::rootsys::norm(rs.lattice_column(0));
                    1.0 / d + 1.0
                }
                _ => {
                    let a = rs.lattice_column(0);
                    let b = rs.lattice_column(1);
                    let area = (a[0] * b[1] - a[1] * b[0]).abs();
                    let diam = crate::rootsys::norm(a) + crate::rootsys::norm(b);
                    let outer = u + 1.0 + diam;
                    let inner = (u - diam).max(0.0);
                    // Quarter annulus: the dominant cone has angle <= pi/2.
                    0.25 * std::f64::consts::PI * (outer * outer - inner * inner) / area
                }
            }
        };
        let mut u = self.ext_end;
        loop {
            let pw = if m_total > 0.0 {
                ((u + 1.0).powf(m_total)) / c_pow
            } else {
                1.0
            };
            let term = self.env_c
                * count(u)
                * pw
                * (-u * u * t - 2.0 * rho_min * u * t + (u + 1.0) * grow).exp();
            total += term;
            u += 1.0;
            if term < 1e-300 * total.max(1e-300) || u > 1e5 {
                break;
            }
        }
        total
    }

    /// Evaluates the truncated kernel at complex arguments with the tail
    /// estimate attached.
    pub fn kernel_eval(&self, z: [Complex64; 2], w: [Complex64; 2], t: f64) -> Result<KernelValue> {
        if t <= 0.0 {
            return Err(Error::NonPositiveTime(t));
        }
        let value = self.sum_entries(z, w, t, false);
        let im_z = (z[0].im * z[0].im + z[1].im * z[1].im).sqrt();
        let im_w = (w[0].im * w[0].im + w[1].im * w[1].im).sqrt();
        let tail = self.tail_bound(t, im_z, im_w);
        Ok(KernelValue {
            value,
            tail_bound: tail,
            guaranteed: tail < self.eps,
        })
    }

    /// Like [`Self::kernel_eval`] but errors when the tail exceeds the
    /// evaluator tolerance.
    pub fn kernel_eval_strict(
        &self,
        z: [Complex64; 2],
        w: [Complex64; 2],
        t: f64,
    ) -> Result<KernelValue> {
        let kv = self.kernel_eval(z, w, t)?;
        if kv.tail_bound >= self.eps {
            return Err(Error::TailBoundExceeded {
                bound: kv.tail_bound,
                eps: self.eps,
            });
        }
        Ok(kv)
    }

    fn sum_entries(&self, z: [Complex64; 2], w: [Complex64; 2], t: f64, skip_zero: bool) -> Complex64 {
        let minus_w = [-w[0], -w[1]];
        let mut acc = Complex64::ZERO;
        for e in &self.basis.entries {
            if skip_zero && e.lambda.is_zero() {
                continue;
            }
            let damp = (-e.theta * t).exp();
            if damp == 0.0 {
                continue;
            }
            acc += e.rpoly.eval_complex(z) * e.rpoly.eval_complex(minus_w) * (e.r * damp);
        }
        acc
    }

    /// Real-argument kernel value. The imaginary part vanishes up to
    /// rounding (terms pair under conjugation); realness is asserted by the
    /// identity suites rather than here.
    pub fn kernel_real(&self, x: Vec2, y: Vec2, t: f64) -> Result<f64> {
        let kv = self.kernel_eval(
            [Complex64::new(x[0], 0.0), Complex64::new(x[1], 0.0)],
            [Complex64::new(y[0], 0.0), Complex64::new(y[1], 0.0)],
            t,
        )?;
        Ok(kv.value.re)
    }

    /// The fluctuation `G_m(x,y,t) - r_0`, summed without the constant mode
    /// so the long-time decay is resolved below rounding of the full sum.
    pub fn kernel_fluctuation(&self, x: Vec2, y: Vec2, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::NonPositiveTime(t));
        }
        let z = [Complex64::new(x[0], 0.0), Complex64::new(x[1], 0.0)];
        let w = [Complex64::new(y[0], 0.0), Complex64::new(y[1], 0.0)];
        Ok(self.sum_entries(z, w, t, true).re)
    }

    /// Stationary value `r_0 = 1 / int_{A_0} w_m`.
    pub fn stationary_limit(&self) -> f64 {
        self.basis.r_zero()
    }

    /// Two-sided bracket for `C_t = sum_la r_la e^{-theta_la t}`: truncated
    /// sum and truncated sum plus tail bound.
    pub fn ct_bracket(&self, t: f64) -> (f64, f64) {
        let partial: f64 = self
            .basis
            .entries
            .iter()
            .map(|e| e.r * (-e.theta * t).exp())
            .sum();
        (partial, partial + self.tail_bound(t, 0.0, 0.0))
    }
}

/// Spectral heat transform of a trigonometric polynomial:
/// `H(t) f = sum_la r_la e^{-theta_la t} fhat(la) R_la`.
pub fn heat_transform_poly(basis: &JacobiBasis, f: &TrigPoly, t: f64) -> Result<TrigPoly> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let hat = basis.ho_transform(f)?;
    let damped = damp_spectrum(basis, &hat, t);
    basis.resum(&damped)
}

/// Applies `e^{-theta_la t}` to a spectral coefficient map.
pub fn damp_spectrum(
    basis: &JacobiBasis,
    hat: &BTreeMap<[i32; 2], Complex64>,
    t: f64,
) -> BTreeMap<[i32; 2], Complex64> {
    let mut out = BTreeMap::new();
    for e in &basis.entries {
        if let Some(&v) = hat.get(&e.lambda.coords) {
            out.insert(e.lambda.coords, v * (-e.theta * t).exp());
        }
    }
    out
}

/// Heckman-Opdam transform of sampled data by grid quadrature:
/// `fhat(la) = (1/|W|) sum_nodes f(x) conj(R_la(x)) w(x) cellw`.
pub fn ho_transform_sampled(
    basis: &JacobiBasis,
    f: &SampledFunction,
) -> Result<BTreeMap<[i32; 2], Complex64>> {
    let rs = basis.root_system();
    if f.grid.root_system().name != rs.name
        || f.grid.root_system().multiplicities() != rs.multiplicities()
    {
        return Err(Error::GridMismatch);
    }
    let wvals = f.grid.weight_values();
    let mut out = BTreeMap::new();
    for e in &basis.entries {
        let rvals = f.grid.sample(|x| e.rpoly.eval_real(x));
        out.insert(
            e.lambda.coords,
            crate::innerprod::grid_pair(&f.grid, &f.values, &rvals, &wvals),
        );
    }
    Ok(out)
}

/// Heat semigroup on sampled data: transform, damp, resum on the same grid.
/// Returns the evolved samples together with the damped spectrum.
pub fn heat_transform_sampled(
    basis: &JacobiBasis,
    f: &SampledFunction,
    t: f64,
) -> Result<(SampledFunction, BTreeMap<[i32; 2], Complex64>)> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let hat = ho_transform_sampled(basis, f)?;
    if t == 0.0 {
        return Ok((f.clone(), hat));
    }
    let damped = damp_spectrum(basis, &hat, t);
    let poly = basis.resum(&damped)?;
    Ok((SampledFunction::from_poly(f.grid.clone(), &poly), damped))
}

/// Parseval residual `| |f|^2 - sum r_la |fhat|^2 |` relative to `|f|^2`,
/// reported alongside solver output as a band-limitation diagnostic.
pub fn parseval_residual(
    basis: &JacobiBasis,
    f: &SampledFunction,
    hat: &BTreeMap<[i32; 2], Complex64>,
) -> f64 {
    let wvals = f.grid.weight_values();
    let norm_sq = f.lp_norm(2.0, &wvals).powi(2);
    let spectral: f64 = basis
        .entries
        .iter()
        .filter_map(|e| hat.get(&e.lambda.coords).map(|v| e.r * v.norm_sqr()))
        .sum();
    (norm_sq - spectral).abs() / norm_sq.max(1e-300)
}

/// Convenience: the smallest nonzero `theta_la` (decay rate of the slowest
/// non-constant mode).
pub fn theta_min(basis: &JacobiBasis) -> f64 {
    basis.theta_min_nonzero()
}

/// Dominant weight list helper re-exported for callers assembling spectra.
pub fn basis_weights(basis: &JacobiBasis) -> Vec<Weight> {
    basis.entries.iter().map(|e| e.lambda).collect()
}

/// Shared helper for tests and the check suite: uniform points along the
/// (closed) alcove obtained by folding a segment sweep.
pub fn alcove_sweep(rs: &Arc<RootSystem>, count: usize) -> Vec<Vec2> {
    let dir = crate::rootsys::add(rs.coroot_column(0), [0.07, 0.013]);
    (0..count)
        .map(|k| {
            let t = 1.7 * k as f64 / count.max(1) as f64;
            rs.fold_to_alcove(crate::rootsys::scale(dir, t)).unwrap()
        })
        .collect()
}
