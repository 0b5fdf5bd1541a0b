//! The invariant suite behind `ho check`: every module property measured as
//! a residual against its tolerance, reported machine-readably.
//!
//! A check that cannot run at the given configuration (degenerate
//! multiplicities, missing exact backend) is reported as skipped with the
//! reason, not as failed. Errors during a check fail that check with the
//! message attached.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::bargmann;
use crate::cherednik;
use crate::heat::{self, HeatKernelEvaluator, SampledFunction};
use crate::innerprod::{Backend, PairingTable, QuadratureGrid};
use crate::jacobi::{self, JacobiBasis};
use crate::rootsys::{dot, RootSystem};
use crate::trigpoly::TrigPoly;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub rs: Arc<RootSystem>,
    pub max_shell: f64,
    pub backend: Backend,
    pub eps: f64,
    pub grid_n: usize,
    pub seed: u64,
}

impl CheckConfig {
    pub fn new(rs: Arc<RootSystem>, max_shell: f64, backend: Backend, grid_n: usize) -> Self {
        CheckConfig {
            rs,
            max_shell,
            backend,
            eps: 1e-8,
            grid_n,
            seed: 20_240_501,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub skipped: Option<String>,
    pub note: Option<String>,
}

impl CheckResult {
    fn measured(name: &str, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            skipped: None,
            note: None,
        }
    }

    fn skipped(name: &str, reason: String) -> Self {
        CheckResult {
            name: name.to_string(),
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
            skipped: Some(reason),
            note: None,
        }
    }

    fn failed(name: &str, tolerance: f64, message: String) -> Self {
        CheckResult {
            name: name.to_string(),
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            skipped: None,
            note: Some(message),
        }
    }
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

pub fn report_to_json(results: &[CheckResult]) -> Value {
    let entries: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "residual": if r.residual.is_finite() { Value::from(r.residual) } else { Value::from("inf") },
                "tolerance": r.tolerance,
                "pass": r.pass,
                "skipped": r.skipped,
                "note": r.note,
            })
        })
        .collect();
    json!({ "checks": entries, "all_pass": all_pass(results) })
}

fn record(
    out: &mut Vec<CheckResult>,
    name: &str,
    tolerance: f64,
    body: impl FnOnce() -> Result<f64>,
) {
    match body() {
        Ok(residual) => out.push(CheckResult::measured(name, residual, tolerance)),
        Err(Error::DegenerateMultiplicity) => out.push(CheckResult::skipped(
            name,
            "degenerate multiplicity; closed form unavailable, use value_at_zero".into(),
        )),
        Err(e) => out.push(CheckResult::failed(name, tolerance, e.to_string())),
    }
}

fn random_invariant(rs: &Arc<RootSystem>, rng: &mut impl Rng, max_coord: i32) -> TrigPoly {
    let mut f = TrigPoly::zero(rs.clone());
    for _ in 0..3 {
        let c = if rs.rank == 1 {
            [rng.gen_range(0..=max_coord), 0]
        } else {
            [rng.gen_range(0..=max_coord), rng.gen_range(0..=max_coord)]
        };
        if let Ok(m) = TrigPoly::orbit_sum(rs, &rs.weight(c)) {
            f = f
                .add(&m.scaled(Complex64::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )))
                .unwrap();
        }
    }
    f
}

fn random_poly(rs: &Arc<RootSystem>, rng: &mut impl Rng) -> TrigPoly {
    let mut f = TrigPoly::zero(rs.clone());
    for _ in 0..5 {
        let mu = if rs.rank == 1 {
            [rng.gen_range(-3..=3), 0]
        } else {
            [rng.gen_range(-2..=2), rng.gen_range(-2..=2)]
        };
        f.add_term(
            mu,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    f
}

/// Runs the full invariant suite for one configuration.
pub fn run_checks(cfg: &CheckConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let rs = cfg.rs.clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);

    // --- root system geometry ---
    record(&mut out, "rootsys.orbit_stabilizer", 0.0, || {
        let mut worst = 0.0f64;
        for c in [[0, 0], [1, 0], [2, 1], [0, 3]] {
            let c = if rs.rank == 1 { [c[0], 0] } else { c };
            let w = rs.weight(c);
            let prod = rs.weyl_orbit(&w).len() * rs.stabilizer_order(&w);
            worst = worst.max((prod as f64 - rs.weyl_order() as f64).abs());
        }
        Ok(worst)
    });
    record(&mut out, "rootsys.fold_affine_invariance", 1e-9, || {
        let mut worst = 0.0f64;
        let pi = std::f64::consts::PI;
        for _ in 0..20 {
            let x = [
                rng.gen_range(-6.0..6.0),
                if rs.rank == 2 { rng.gen_range(-6.0..6.0) } else { 0.0 },
            ];
            let y = rs.fold_to_alcove(x)?;
            let shifted = crate::rootsys::add(x, crate::rootsys::scale(rs.coroot_column(0), 2.0 * pi));
            worst = worst.max(crate::rootsys::norm(crate::rootsys::sub(
                rs.fold_to_alcove(shifted)?,
                y,
            )));
            worst = worst.max(crate::rootsys::norm(crate::rootsys::sub(
                rs.fold_to_alcove(y)?,
                y,
            )));
        }
        Ok(worst)
    });

    // --- trigonometric polynomial ring ---
    record(&mut out, "trigpoly.ring_associativity", 1e-12, || {
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let f = random_poly(&rs, &mut rng);
            let g = random_poly(&rs, &mut rng);
            let h = random_poly(&rs, &mut rng);
            let lhs = f.multiply(&g)?.multiply(&h)?;
            let rhs = f.multiply(&g.multiply(&h)?)?;
            let scale = lhs.max_coeff_norm().max(1.0);
            worst = worst.max(lhs.coeff_distance(&rhs) / scale);
        }
        Ok(worst)
    });
    record(&mut out, "trigpoly.eval_multiplicative", 1e-10, || {
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let f = random_poly(&rs, &mut rng);
            let g = random_poly(&rs, &mut rng);
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let lhs = f.multiply(&g)?.eval_real(x);
            let rhs = f.eval_real(x) * g.eval_real(x);
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });

    // --- Cherednik operators ---
    record(&mut out, "cherednik.commutativity", 1e-10, || {
        let xi = [0.8, if rs.rank == 2 { 0.3 } else { 0.0 }];
        let eta = [-0.2, if rs.rank == 2 { 1.1 } else { 0.6 }];
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let f = random_poly(&rs, &mut rng);
            let a = cherednik::apply_cherednik(&rs, eta, &cherednik::apply_cherednik(&rs, xi, &f)?)?;
            let b = cherednik::apply_cherednik(&rs, xi, &cherednik::apply_cherednik(&rs, eta, &f)?)?;
            worst = worst.max(a.coeff_distance(&b) / a.max_coeff_norm().max(1.0));
        }
        Ok(worst)
    });
    record(&mut out, "cherednik.pointwise_oracle", 1e-7, || {
        let xi = [0.9, if rs.rank == 2 { -0.5 } else { 0.0 }];
        let f = random_poly(&rs, &mut rng);
        let symbolic = cherednik::apply_cherednik(&rs, xi, &f)?;
        let mut worst = 0.0f64;
        let mut found = 0;
        while found < 20 {
            let x = [
                rng.gen_range(-3.0..3.0),
                if rs.rank == 2 { rng.gen_range(-3.0..3.0) } else { 0.0 },
            ];
            let y = rs.fold_to_alcove(x)?;
            let interior = rs.positive_roots.iter().all(|r| {
                let p = dot(r.cart, y);
                p.min(std::f64::consts::PI - p) / r.norm_sq.sqrt() > 0.1
            });
            if !interior {
                continue;
            }
            found += 1;
            let direct = cherednik::cherednik_pointwise(&rs, xi, &f, y);
            worst = worst.max((symbolic.eval_real(y) - direct).norm() / (1.0 + direct.norm()));
        }
        Ok(worst)
    });

    // --- inner product backends ---
    record(&mut out, "innerprod.hermitian_symmetry", 1e-10, || {
        let table = PairingTable::build(&rs, cfg.backend, 2.0 * cfg.max_shell + 1e-9)?;
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let f = random_invariant(&rs, &mut rng, 2);
            let g = random_invariant(&rs, &mut rng, 2);
            let fg = table.pair(&f, &g)?;
            let gf = table.pair(&g, &f)?;
            worst = worst.max((fg - gf.conj()).norm() / (1.0 + fg.norm()));
            let ff = table.pair(&f, &f)?;
            worst = worst.max((-ff.re).max(0.0));
            worst = worst.max(ff.im.abs() / (1.0 + ff.re.abs()));
        }
        Ok(worst)
    });
    {
        let even = rs
            .multiplicities()
            .iter()
            .all(|m| m.fract() == 0.0 && (*m as i64) % 2 == 0);
        if even {
            record(&mut out, "innerprod.backend_agreement", 1e-9, || {
                let exact = PairingTable::build(&rs, Backend::Exact, 0.0)?;
                let n = if rs.rank == 1 { 1024 } else { 256 };
                let quad =
                    PairingTable::build(&rs, Backend::Quadrature { n }, 2.0 * cfg.max_shell + 1e-9)?;
                let mut worst = 0.0f64;
                for _ in 0..4 {
                    let f = random_invariant(&rs, &mut rng, 2);
                    let g = random_invariant(&rs, &mut rng, 2);
                    let a = exact.pair(&f, &g)?;
                    let b = quad.pair(&f, &g)?;
                    worst = worst.max((a - b).norm() / (1.0 + a.norm()));
                }
                Ok(worst)
            });
        } else {
            out.push(CheckResult::skipped(
                "innerprod.backend_agreement",
                "exact backend requires even integer multiplicities".into(),
            ));
        }
    }

    // --- basis-dependent checks ---
    let basis = match jacobi::build_basis(&rs, cfg.max_shell, cfg.backend) {
        Ok(b) => Arc::new(b),
        Err(e) => {
            out.push(CheckResult::failed(
                "jacobi.build_basis",
                0.0,
                e.to_string(),
            ));
            return out;
        }
    };

    record(&mut out, "jacobi.c_function_consistency", {
        if matches!(cfg.backend, Backend::Exact) { 1e-12 } else { 1e-6 }
    }, || {
        let mut worst = 0.0f64;
        for e in &basis.entries {
            let c = jacobi::c_function(&rs, &e.lambda)?;
            worst = worst.max((c * e.value_at_zero - 1.0).abs());
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.norm_formula_consistency", {
        if matches!(cfg.backend, Backend::Exact) { 1e-12 } else { 1e-6 }
    }, || {
        let mut worst = 0.0f64;
        for e in &basis.entries {
            let nf = jacobi::norm_formula(&rs, &e.lambda)?;
            worst = worst.max((nf / e.norm_sq - 1.0).abs());
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.orthogonality", 1e-9, || {
        let mut worst = 0.0f64;
        for (i, e) in basis.entries.iter().enumerate() {
            for f in basis.entries.iter().take(i) {
                let m = TrigPoly::orbit_sum(&rs, &f.lambda)?;
                let p = basis.table().pair(&e.poly, &m)?;
                let scale = e.norm_sq.sqrt() * basis.table().norm_sq(&m)?.sqrt();
                worst = worst.max(p.norm() / scale);
            }
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.convexity_nonnegative", 1e-12, || {
        let mut worst = 0.0f64;
        for e in &basis.entries {
            for (_, c) in e.rpoly.terms() {
                worst = worst.max(-c.re).max(c.im.abs());
            }
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.convexity_sum_one", 1e-10, || {
        let mut worst = 0.0f64;
        for e in &basis.entries {
            let total: f64 = e.rpoly.terms().map(|(_, c)| c.re).sum();
            worst = worst.max((total - 1.0).abs());
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.sup_norm_bound", 1e-10, || {
        let pts = heat::alcove_sweep(&rs, 200);
        let mut worst = 0.0f64;
        for e in &basis.entries {
            for x in &pts {
                worst = worst.max(e.rpoly.eval_real(*x).norm() - 1.0);
            }
        }
        Ok(worst.max(0.0))
    });
    record(&mut out, "jacobi.eigen_equation", 1e-8, || {
        let mut worst = 0.0f64;
        for e in &basis.entries {
            let lhs = cherednik::apply_lm(&rs, &e.rpoly)?;
            let residual = lhs.add(&e.rpoly.scaled(Complex64::new(e.theta, 0.0)))?;
            worst = worst.max(residual.coeff_l2_norm() / e.rpoly.coeff_l2_norm());
        }
        Ok(worst)
    });
    record(&mut out, "jacobi.parseval", 1e-9, || {
        let mut worst = 0.0f64;
        for _ in 0..3 {
            let f = random_invariant(&rs, &mut rng, 2);
            let hat = basis.ho_transform(&f)?;
            let spectral: f64 = basis
                .entries
                .iter()
                .map(|e| e.r * hat[&e.lambda.coords].norm_sqr())
                .sum();
            let direct = basis.table().norm_sq(&f)?;
            worst = worst.max((spectral - direct).abs() / (1.0 + direct));
        }
        Ok(worst)
    });

    // --- heat kernel ---
    let ev = match HeatKernelEvaluator::new(basis.clone(), cfg.eps) {
        Ok(ev) => ev,
        Err(e) => {
            out.push(CheckResult::failed("heat.evaluator", 0.0, e.to_string()));
            return out;
        }
    };
    let grid = Arc::new(QuadratureGrid::new(rs.clone(), cfg.grid_n));
    let wvals = grid.weight_values();
    let cw = grid.cell_weight() / rs.weyl_order() as f64;
    let t = 0.2;

    record(&mut out, "heat.stochasticity", cfg.eps, || {
        let mut total = 0.0;
        for i in 0..grid.num_nodes() {
            total += ev.kernel_real([0.37, 0.11], grid.node(i), t)? * wvals[i];
        }
        Ok((total * cw - 1.0).abs())
    });
    record(&mut out, "heat.semigroup_law", 3.0 * cfg.eps, || {
        let x = heat::alcove_sweep(&rs, 3)[1];
        let y = heat::alcove_sweep(&rs, 5)[3];
        let mut conv = 0.0;
        for i in 0..grid.num_nodes() {
            let a = grid.node(i);
            conv += ev.kernel_real(x, a, t)? * ev.kernel_real(a, y, 0.15)? * wvals[i];
        }
        conv *= cw;
        Ok((conv - ev.kernel_real(x, y, t + 0.15)?).abs())
    });
    record(&mut out, "heat.eigen_reproducing", cfg.eps, || {
        let e = &basis.entries[basis.len().min(2) - 1];
        let x = heat::alcove_sweep(&rs, 3)[1];
        let mut total = Complex64::ZERO;
        for i in 0..grid.num_nodes() {
            let a = grid.node(i);
            total += Complex64::new(ev.kernel_real(x, a, t)?, 0.0)
                * e.rpoly.eval_real(a)
                * wvals[i];
        }
        total *= cw;
        let expect = e.rpoly.eval_real(x) * (-e.theta * t).exp();
        Ok((total - expect).norm())
    });
    record(&mut out, "heat.strict_positivity", 0.0, || {
        // Times below the evaluator's guaranteed range are clamped so that
        // truncation error cannot mask the sign.
        let pts = heat::alcove_sweep(&rs, 40);
        let mut min = f64::INFINITY;
        for &tp in &[0.05f64, 0.1, 1.0] {
            let tp = tp.max(ev.t_min);
            for x in &pts {
                for y in &pts {
                    min = min.min(ev.kernel_real(*x, *y, tp)?);
                }
            }
        }
        Ok((-min).max(0.0))
    });
    record(&mut out, "heat.hermitian_realness", 1e-10, || {
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let x = rs.fold_to_alcove([rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])?;
            let y = rs.fold_to_alcove([rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])?;
            let kv = ev.kernel_eval(
                [Complex64::new(x[0], 0.0), Complex64::new(x[1], 0.0)],
                [Complex64::new(y[0], 0.0), Complex64::new(y[1], 0.0)],
                t,
            )?;
            worst = worst.max(kv.value.im.abs());
            worst = worst.max((kv.value.re - ev.kernel_real(y, x, t)?).abs());
        }
        Ok(worst)
    });
    record(&mut out, "heat.lp_contraction", 1e-9, || {
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let f = random_invariant(&rs, &mut rng, 3);
            let sample = SampledFunction::from_fn(grid.clone(), |x| {
                Complex64::new(f.eval_real(x).norm(), 0.0)
            });
            let (outv, _) = heat::heat_transform_sampled(&basis, &sample, 0.1)?;
            for &p in &[1.0, 2.0, f64::INFINITY] {
                let before = sample.lp_norm(p, &wvals);
                let after = outv.lp_norm(p, &wvals);
                worst = worst.max(after / before - 1.0);
            }
            let min = outv.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
            worst = worst.max(-min / sample.lp_norm(f64::INFINITY, &wvals));
        }
        Ok(worst.max(0.0))
    });
    record(&mut out, "heat.long_time_limit", 1e-6, || {
        let pts = heat::alcove_sweep(&rs, 10);
        let mut sup = 0.0f64;
        for x in &pts {
            for y in &pts {
                sup = sup.max(ev.kernel_fluctuation(*x, *y, 10.0)?.abs());
            }
        }
        Ok(sup)
    });

    // --- Segal-Bargmann ---
    record(&mut out, "bargmann.unitarity", 1e-9, || {
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let f = random_invariant(&rs, &mut rng, 2);
            let g = random_invariant(&rs, &mut rng, 2);
            let hf = bargmann::holo_heat_transform(&basis, &f, 0.1)?;
            let hg = bargmann::holo_heat_transform(&basis, &g, 0.1)?;
            let lhs = bargmann::ht_inner_product(&hf, &hg)?;
            let rhs = basis.table().pair(&f, &g)?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });
    record(&mut out, "bargmann.reproducing_kernel", 1e-8, || {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let f = random_invariant(&rs, &mut rng, 2);
            let hf = bargmann::holo_heat_transform(&basis, &f, 0.25)?;
            let z = [
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)),
                if rs.rank == 2 {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5))
                } else {
                    Complex64::ZERO
                },
            ];
            let kz = bargmann::kernel_as_ht_function(&basis, 0.25, z);
            let lhs = bargmann::ht_inner_product(&hf, &kz)?;
            let rhs = hf.eval(z);
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });
    record(&mut out, "bargmann.restriction_consistency", 1e-10, || {
        let f = random_invariant(&rs, &mut rng, 2);
        let hf = bargmann::holo_heat_transform(&basis, &f, 0.2)?;
        let l2 = heat::heat_transform_poly(&basis, &f, 0.2)?;
        let mut worst = 0.0f64;
        for x in heat::alcove_sweep(&rs, 15) {
            worst = worst.max((hf.eval_real(x) - l2.eval_real(x)).norm());
        }
        Ok(worst)
    });
    {
        let zero_mult = rs.multiplicities().iter().all(|&m| m == 0.0);
        if rs.rank == 1 && zero_mult {
            record(&mut out, "bargmann.torus_crosscheck", 1e-8, || {
                let f = random_invariant(&rs, &mut rng, 3);
                let g = random_invariant(&rs, &mut rng, 3);
                let hf = bargmann::holo_heat_transform(&basis, &f, 0.2)?;
                let hg = bargmann::holo_heat_transform(&basis, &g, 0.2)?;
                let rep = bargmann::classical_torus_crosscheck(&hf, &hg, 2048)?;
                let scale = 1.0 + rep.spectral.norm();
                Ok(((rep.spectral - rep.integral_full).norm() / scale)
                    .max((rep.integral_full - rep.integral_chamber).norm() / scale))
            });
        } else {
            out.push(CheckResult::skipped(
                "bargmann.torus_crosscheck",
                "requires rank one and zero multiplicity".into(),
            ));
        }
    }

    out
}

/// Spot subset used by `ho sb-check`: the Segal-Bargmann unitarity and
/// reproducing-kernel suites at a caller-chosen time.
pub fn run_sb_checks(basis: &Arc<JacobiBasis>, t: f64, seed: u64) -> Result<Vec<CheckResult>> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let rs = basis.root_system().clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    record(&mut out, "sb.unitarity", 1e-9, || {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let f = random_invariant(&rs, &mut rng, 2);
            let g = random_invariant(&rs, &mut rng, 2);
            let hf = bargmann::holo_heat_transform(basis, &f, t)?;
            let hg = bargmann::holo_heat_transform(basis, &g, t)?;
            let lhs = bargmann::ht_inner_product(&hf, &hg)?;
            let rhs = basis.table().pair(&f, &g)?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });
    record(&mut out, "sb.reproducing_kernel", 1e-8, || {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let f = random_invariant(&rs, &mut rng, 2);
            let hf = bargmann::holo_heat_transform(basis, &f, t)?;
            let z = [
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)),
                if rs.rank == 2 {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5))
                } else {
                    Complex64::ZERO
                },
            ];
            let kz = bargmann::kernel_as_ht_function(basis, t, z);
            let lhs = bargmann::ht_inner_product(&hf, &kz)?;
            worst = worst.max((lhs - hf.eval(z)).norm() / (1.0 + hf.eval(z).norm()));
        }
        Ok(worst)
    });
    record(&mut out, "sb.expansion_round_trip", 1e-8, || {
        let f = random_invariant(&rs, &mut rng, 2);
        let hf = bargmann::holo_heat_transform(basis, &f, t)?;
        let n = if rs.rank == 1 { 2048 } else { 128 };
        let grid = Arc::new(QuadratureGrid::new(rs.clone(), n));
        let sample = SampledFunction::from_fn(grid, |x| hf.eval_real(x));
        let rehat = heat::ho_transform_sampled(basis, &sample)?;
        let mut worst = 0.0f64;
        for e in &basis.entries {
            let a = hf
                .fhat
                .get(&e.lambda.coords)
                .copied()
                .unwrap_or(Complex64::ZERO);
            worst = worst.max((a - rehat[&e.lambda.coords]).norm() / (1.0 + a.norm()));
        }
        Ok(worst)
    });
    Ok(out)
}
