//! Construction of Heckman-Opdam polynomials by weighted Gram-Schmidt, the
//! c-function and norm constants, the renormalized polynomials `R_lambda`,
//! and the Heckman-Opdam Fourier transform.
//!
//! For each dominant weight `la` with `|la| <= max_shell`, the polynomial
//! `P_la` is the orthogonalization of the orbit sum `M_la` against all orbit
//! sums `M_mu` with `mu` strictly dominated by `la`, under the weighted inner
//! product. Its leading orbit-sum coefficient is 1, and `R_la = P_la /
//! P_la(0)` is the normalization with `R_la(0) = 1`. The table of norms
//! yields `r_la = 1 / |R_la|^2` and the spectral values
//! `theta_la = <la, la + 2 rho>`.
//!
//! The closed Gamma-product formulas for `P_la(0)` (the inverse c-function)
//! and for the norms are implemented as cross-checks; `R_la` itself is always
//! defined through the evaluated `P_la(0)`, which stays finite at degenerate
//! multiplicities (e.g. `m = 0`) where the Gamma products hit poles.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::innerprod::{Backend, PairingTable};
use crate::oracle::ln_gamma;
use crate::rootsys::{dot, RootSystem, Weight};
use crate::trigpoly::TrigPoly;
use crate::{Error, Result};

/// One basis entry: the monic polynomial, its value at zero, squared norm,
/// the normalization constant `r_la`, and the spectral value `theta_la`.
#[derive(Debug, Clone)]
pub struct BasisEntry {
    pub lambda: Weight,
    pub poly: TrigPoly,
    pub rpoly: TrigPoly,
    pub value_at_zero: f64,
    pub norm_sq: f64,
    pub r: f64,
    pub theta: f64,
}

/// Ordered table of Heckman-Opdam polynomials up to a norm shell.
pub struct JacobiBasis {
    rs: Arc<RootSystem>,
    pub entries: Vec<BasisEntry>,
    pub max_shell: f64,
    table: PairingTable,
    index: BTreeMap<[i32; 2], usize>,
}

/// `theta_la = <la, la + 2 rho>`.
pub fn theta(rs: &RootSystem, la: &Weight) -> f64 {
    dot(
        la.cart,
        crate::rootsys::add(la.cart, crate::rootsys::scale(rs.rho(), 2.0)),
    )
}

/// Builds the basis for all dominant weights with `|la| <= max_shell`.
pub fn build_basis(rs: &Arc<RootSystem>, max_shell: f64, backend: Backend) -> Result<JacobiBasis> {
    if !(max_shell > 0.0) {
        return Err(Error::InvalidInput(format!(
            "max_shell must be positive, got {max_shell}"
        )));
    }
    let weights = rs.dominant_weights_in_shell(max_shell);
    build_basis_for_weights(rs, weights, max_shell, backend)
}

pub(crate) fn build_basis_for_weights(
    rs: &Arc<RootSystem>,
    weights: Vec<Weight>,
    max_shell: f64,
    backend: Backend,
) -> Result<JacobiBasis> {
    let table = PairingTable::build(rs, backend, 2.0 * max_shell + 1e-9)?;
    let mut entries: Vec<BasisEntry> = Vec::with_capacity(weights.len());
    let mut index: BTreeMap<[i32; 2], usize> = BTreeMap::new();

    for la in weights {
        let mut p = TrigPoly::orbit_sum(rs, &la)?;
        // Modified Gram-Schmidt against strictly dominated entries, with one
        // re-orthogonalization pass.
        let lower: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| rs.dominance_leq(&e.lambda, &la) && e.lambda != la)
            .map(|(i, _)| i)
            .collect();
        for _pass in 0..2 {
            for &i in &lower {
                let e = &entries[i];
                let c = table.pair(&p, &e.poly)? / e.norm_sq;
                p = p.sub(&e.poly.scaled(c))?;
            }
        }
        let norm_sq = table.norm_sq(&p)?;
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::GramSingular(la.coords));
        }
        let v0 = p.eval_real([0.0, 0.0]);
        let value_at_zero = v0.re;
        // A drifting imaginary part or nonpositive value at the origin means
        // the Gram data was too inaccurate to orthogonalize against.
        if v0.im.abs() > 1e-6 * v0.re.abs().max(1.0) || !(value_at_zero > 0.0) {
            return Err(Error::GramSingular(la.coords));
        }
        let rpoly = p.scaled(Complex64::new(1.0 / value_at_zero, 0.0));
        let r = value_at_zero * value_at_zero / norm_sq;
        let th = theta(rs, &la);
        index.insert(la.coords, entries.len());
        entries.push(BasisEntry {
            lambda: la,
            poly: p,
            rpoly,
            value_at_zero,
            norm_sq,
            r,
            theta: th,
        });
    }

    Ok(JacobiBasis {
        rs: rs.clone(),
        entries,
        max_shell,
        table,
        index,
    })
}

impl JacobiBasis {
    /// Reassembles a basis from stored parts (deserialization path).
    pub(crate) fn from_parts(
        rs: Arc<RootSystem>,
        entries: Vec<BasisEntry>,
        max_shell: f64,
        table: PairingTable,
    ) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.lambda.coords, i))
            .collect();
        JacobiBasis {
            rs,
            entries,
            max_shell,
            table,
            index,
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn table(&self) -> &PairingTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, coords: [i32; 2]) -> Option<&BasisEntry> {
        self.index.get(&coords).map(|&i| &self.entries[i])
    }

    /// `r_0 = 1 / int_{A_0} w_m`: the stationary value of the heat kernel.
    pub fn r_zero(&self) -> f64 {
        self.entries[0].r
    }

    /// Weight mass `<1,1>_m`.
    pub fn mass(&self) -> f64 {
        self.table.mass()
    }

    /// Smallest nonzero spectral value `theta_la` in the basis.
    pub fn theta_min_nonzero(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !e.lambda.is_zero())
            .map(|e| e.theta)
            .fold(f64::INFINITY, f64::min)
    }

    /// Heckman-Opdam transform of a trigonometric polynomial:
    /// `fhat(la) = int_{A_0} f(x) R_la(-x) w_m(x) dx = <f, R_la>_m`.
    pub fn ho_transform(&self, f: &TrigPoly) -> Result<BTreeMap<[i32; 2], Complex64>> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            out.insert(e.lambda.coords, self.table.pair(f, &e.rpoly)?);
        }
        Ok(out)
    }

    /// Resums spectral coefficients into a polynomial:
    /// `sum_la r_la chat(la) R_la`.
    pub fn resum(&self, chat: &BTreeMap<[i32; 2], Complex64>) -> Result<TrigPoly> {
        let mut acc = TrigPoly::zero(self.rs.clone());
        for e in &self.entries {
            if let Some(&c) = chat.get(&e.lambda.coords) {
                acc = acc.add(&e.rpoly.scaled(c * e.r))?;
            }
        }
        Ok(acc)
    }
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

/// Ratio `Gamma(b + k) Gamma(a) / (Gamma(a + k) Gamma(b))`; exact Pochhammer
/// products when `k` is a nonnegative integer, log-Gamma otherwise. All
/// arguments must be strictly positive.
fn gamma_shift_ratio(a: f64, b: f64, k: f64) -> Result<f64> {
    for v in [a, b, a + k, b + k] {
        if v <= 0.0 {
            return Err(Error::DegenerateMultiplicity);
        }
    }
    if is_nonneg_integer(k) {
        let mut acc = 1.0;
        for j in 0..(k as i64) {
            acc *= (b + j as f64) / (a + j as f64);
        }
        Ok(acc)
    } else {
        Ok((ln_gamma(b + k) + ln_gamma(a) - ln_gamma(a + k) - ln_gamma(b)).exp())
    }
}

/// The c-function value
/// `c(la + rho, m) = prod_a G(la_a + rho_a + m_{a/2}/4) G(rho_a + m_{a/2}/4 + m_a/2)
///                 / (G(la_a + rho_a + m_{a/2}/4 + m_a/2) G(rho_a + m_{a/2}/4))`,
/// which equals `P_la(0)^{-1}`. Errors at Gamma poles (degenerate
/// multiplicities, e.g. `m = 0`).
pub fn c_function(rs: &RootSystem, la: &Weight) -> Result<f64> {
    if !la.is_dominant() {
        return Err(Error::NotDominant(la.coords));
    }
    let mut acc = 1.0;
    for root in &rs.positive_roots {
        let m = rs.multiplicity_of(root);
        let mh = rs.half_multiplicity(root);
        let la_a = rs.lambda_alpha(la, root) as f64;
        let rho_a = dot(rs.rho(), root.cart) / root.norm_sq;
        let base = rho_a + 0.25 * mh;
        // Gamma(la_a + base) Gamma(base + m/2) / (Gamma(la_a + base + m/2) Gamma(base))
        acc *= gamma_shift_ratio(la_a + base, base, 0.5 * m)?;
    }
    Ok(acc)
}

/// Closed-form squared norm of `P_la`:
///
/// ```text
/// |P_la|^2 = vol(cell) * prod_a  G(la_a+rho_a-m_{a/2}/4-m_a/2+1)   G(la_a+rho_a+m_{a/2}/4+m_a/2)
///                               ------------------------------- * ----------------------------
///                                 G(la_a+rho_a-m_{a/2}/4+1)          G(la_a+rho_a+m_{a/2}/4)
/// ```
///
/// where `vol(cell)` is the volume of the torus cell. At `la = 0` this
/// reproduces the weight mass `int_{A_0} w_m dx` whenever the Gamma product
/// is nondegenerate. Errors at Gamma poles (e.g. `m = 0`, where the second
/// factor hits `Gamma(0)`).
pub fn norm_formula(rs: &RootSystem, la: &Weight) -> Result<f64> {
    if !la.is_dominant() {
        return Err(Error::NotDominant(la.coords));
    }
    let mut acc = rs.cell_volume();
    for root in &rs.positive_roots {
        let m = rs.multiplicity_of(root);
        let mh = rs.half_multiplicity(root);
        let la_a = rs.lambda_alpha(la, root) as f64;
        let rho_a = dot(rs.rho(), root.cart) / root.norm_sq;
        let k = 0.5 * m;
        let a = la_a + rho_a - 0.25 * mh + 1.0;
        let b = la_a + rho_a + 0.25 * mh;
        // Gamma(a-k)/Gamma(a) * Gamma(b+k)/Gamma(b), poles checked inside.
        acc *= gamma_shift_ratio(a - k, b, k)?;
    }
    Ok(acc)
}
