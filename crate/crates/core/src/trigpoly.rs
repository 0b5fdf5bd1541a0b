//! Sparse arithmetic for trigonometric polynomials `f = sum c_mu e^{i mu}`
//! with `mu` in the weight lattice, including evaluation at complex arguments
//! and Weyl symmetrization.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::rootsys::{weight_order, RootSystem, Vec2, Weight};
use crate::{Error, Result};

/// Relative magnitude below which coefficients are dropped after arithmetic.
pub const DROP_THRESHOLD: f64 = 1e-15;

/// A trigonometric polynomial over the weight lattice of a fixed root system.
///
/// Coefficients are keyed by integer lattice coordinates; no stored
/// coefficient is smaller than `DROP_THRESHOLD` times the largest magnitude.
/// The `w_invariant` flag is recomputed (never assumed) whenever terms change.
#[derive(Clone)]
pub struct TrigPoly {
    rs: Arc<RootSystem>,
    terms: BTreeMap<[i32; 2], Complex64>,
    w_invariant: bool,
}

impl std::fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TrigPoly({} terms)", self.terms.len())
    }
}

impl TrigPoly {
    fn from_terms(rs: Arc<RootSystem>, terms: BTreeMap<[i32; 2], Complex64>) -> Self {
        let mut p = TrigPoly {
            rs,
            terms,
            w_invariant: false,
        };
        p.normalize();
        p
    }

    /// Builds a polynomial from a raw coefficient map (crate-internal bulk
    /// constructor; normalizes and recomputes the invariance flag).
    pub(crate) fn from_term_map(rs: Arc<RootSystem>, terms: BTreeMap<[i32; 2], Complex64>) -> Self {
        TrigPoly::from_terms(rs, terms)
    }

    pub fn zero(rs: Arc<RootSystem>) -> Self {
        TrigPoly {
            rs,
            terms: BTreeMap::new(),
            w_invariant: true,
        }
    }

    pub fn constant(rs: Arc<RootSystem>, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::ZERO {
            terms.insert([0, 0], c);
        }
        TrigPoly::from_terms(rs, terms)
    }

    pub fn one(rs: Arc<RootSystem>) -> Self {
        TrigPoly::constant(rs, Complex64::ONE)
    }

    /// The single exponential `e^{i mu}`.
    pub fn exponential(rs: Arc<RootSystem>, mu: [i32; 2]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mu, Complex64::ONE);
        TrigPoly::from_terms(rs, terms)
    }

    /// The W-invariant orbit sum `M_lambda = sum_{mu in W.lambda} e^{i mu}`.
    pub fn orbit_sum(rs: &Arc<RootSystem>, lambda: &Weight) -> Result<Self> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.coords));
        }
        let mut terms = BTreeMap::new();
        for w in rs.weyl_orbit(lambda) {
            terms.insert(w.coords, Complex64::ONE);
        }
        Ok(TrigPoly::from_terms(rs.clone(), terms))
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn is_w_invariant(&self) -> bool {
        self.w_invariant
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: [i32; 2]) -> Complex64 {
        self.terms.get(&mu).copied().unwrap_or(Complex64::ZERO)
    }

    /// Iterates terms in lattice-coordinate order (deterministic).
    pub fn terms(&self) -> impl Iterator<Item = (&[i32; 2], &Complex64)> {
        self.terms.iter()
    }

    /// Terms sorted by (|mu|, lex): the canonical serialization order.
    pub fn sorted_terms(&self) -> Vec<(Weight, Complex64)> {
        let mut out: Vec<(Weight, Complex64)> = self
            .terms
            .iter()
            .map(|(c, v)| (self.rs.weight(*c), *v))
            .collect();
        out.sort_by(|a, b| weight_order(&a.0, &b.0));
        out
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn normalize(&mut self) {
        let max = self.max_coeff_norm();
        let cut = DROP_THRESHOLD * max;
        self.terms.retain(|_, c| c.norm() > cut);
        self.w_invariant = self.check_w_invariance(1e-12);
    }

    /// Verifies `c_{w mu} = c_mu` for every stored term and Weyl generator.
    fn check_w_invariance(&self, tol: f64) -> bool {
        let scale = self.max_coeff_norm().max(1.0);
        for m in &self.rs.simple_coord_mats {
            for (&mu, &c) in &self.terms {
                let img = [
                    m[0][0] * mu[0] + m[0][1] * mu[1],
                    m[1][0] * mu[0] + m[1][1] * mu[1],
                ];
                if (self.coeff(img) - c).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    fn check_same_system(&self, other: &TrigPoly) -> Result<()> {
        if !Arc::ptr_eq(&self.rs, &other.rs) && self.rs.name != other.rs.name {
            return Err(Error::SystemMismatch);
        }
        if self.rs.multiplicities() != other.rs.multiplicities() {
            return Err(Error::SystemMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_same_system(other)?;
        let mut terms = self.terms.clone();
        for (&mu, &c) in &other.terms {
            *terms.entry(mu).or_insert(Complex64::ZERO) += c;
        }
        Ok(TrigPoly::from_terms(self.rs.clone(), terms))
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, s: Complex64) -> TrigPoly {
        let terms = self.terms.iter().map(|(&mu, &c)| (mu, c * s)).collect();
        TrigPoly::from_terms(self.rs.clone(), terms)
    }

    /// Adds `s * e^{i mu}` in place (normalizing afterwards).
    pub fn add_term(&mut self, mu: [i32; 2], s: Complex64) {
        *self.terms.entry(mu).or_insert(Complex64::ZERO) += s;
        self.normalize();
    }

    /// Convolution of the weight-indexed coefficient maps.
    pub fn multiply(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_same_system(other)?;
        let mut terms: BTreeMap<[i32; 2], Complex64> = BTreeMap::new();
        for (&mu, &c) in &self.terms {
            for (&nu, &d) in &other.terms {
                let key = [mu[0] + nu[0], mu[1] + nu[1]];
                *terms.entry(key).or_insert(Complex64::ZERO) += c * d;
            }
        }
        Ok(TrigPoly::from_terms(self.rs.clone(), terms))
    }

    /// Evaluates at a complex point of the complexified ambient space, with
    /// the bilinear extension of the inner product:
    /// `f(z) = sum c_mu exp(i <mu, z>)`.
    pub fn eval_complex(&self, z: [Complex64; 2]) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (&mu, &c) in &self.terms {
            let w = self.rs.weight(mu);
            let phase = z[0] * w.cart[0] + z[1] * w.cart[1];
            acc += c * (Complex64::i() * phase).exp();
        }
        acc
    }

    pub fn eval_real(&self, x: Vec2) -> Complex64 {
        self.eval_complex([Complex64::new(x[0], 0.0), Complex64::new(x[1], 0.0)])
    }

    /// The polynomial with coefficients `conj(c_{-mu})`, so that evaluation at
    /// real `x` is the complex conjugate of `f(x)`.
    pub fn conjugate_reflect(&self) -> TrigPoly {
        let terms = self
            .terms
            .iter()
            .map(|(&mu, &c)| ([-mu[0], -mu[1]], c.conj()))
            .collect();
        TrigPoly::from_terms(self.rs.clone(), terms)
    }

    /// Symbolic directional derivative: `e^{i mu}` picks up `i <mu, xi>`.
    pub fn directional_derivative(&self, xi: Vec2) -> TrigPoly {
        let terms = self
            .terms
            .iter()
            .map(|(&mu, &c)| {
                let w = self.rs.weight(mu);
                (mu, c * Complex64::new(0.0, crate::rootsys::dot(w.cart, xi)))
            })
            .collect();
        TrigPoly::from_terms(self.rs.clone(), terms)
    }

    /// Largest coefficient difference against another polynomial.
    pub fn coeff_distance(&self, other: &TrigPoly) -> f64 {
        let mut keys: Vec<[i32; 2]> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, SystemName};
    use rand::Rng;
    use rand::SeedableRng;

    fn a1() -> Arc<RootSystem> {
        build_root_system(SystemName::A1, &[2.0]).unwrap()
    }

    fn a2() -> Arc<RootSystem> {
        build_root_system(SystemName::A2, &[1.0]).unwrap()
    }

    fn random_poly(rs: &Arc<RootSystem>, rng: &mut impl Rng, nterms: usize) -> TrigPoly {
        let mut p = TrigPoly::zero(rs.clone());
        for _ in 0..nterms {
            let mu = if rs.rank == 1 {
                [rng.gen_range(-4..=4), 0]
            } else {
                [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]
            };
            p.add_term(mu, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        p
    }

    #[test]
    fn orbit_sum_basics() {
        let rs = a1();
        let m0 = TrigPoly::orbit_sum(&rs, &rs.weight([0, 0])).unwrap();
        assert_eq!(m0.num_terms(), 1);
        assert!((m0.eval_real([0.3, 0.0]) - Complex64::ONE).norm() < 1e-15);

        // M_1 = e^{i la} + e^{-i la} = 2 cos <la, x> on real points.
        let m1 = TrigPoly::orbit_sum(&rs, &rs.weight([1, 0])).unwrap();
        assert!(m1.is_w_invariant());
        let la = rs.weight([1, 0]);
        let x = [0.37, 0.0];
        let expect = 2.0 * (crate::rootsys::dot(la.cart, x)).cos();
        assert!((m1.eval_real(x) - Complex64::new(expect, 0.0)).norm() < 1e-14);

        let rs2 = a2();
        let m = TrigPoly::orbit_sum(&rs2, &rs2.weight([1, 0])).unwrap();
        assert_eq!(m.num_terms(), 3);
        assert!((m.eval_real([0.0, 0.0]) - Complex64::new(3.0, 0.0)).norm() < 1e-14);

        assert!(TrigPoly::orbit_sum(&rs, &rs.weight([-1, 0])).is_err());
    }

    #[test]
    fn multiplication_identities() {
        let rs = a1();
        let one = TrigPoly::one(rs.clone());
        let f = TrigPoly::orbit_sum(&rs, &rs.weight([2, 0])).unwrap();
        assert!(f.multiply(&one).unwrap().coeff_distance(&f) < 1e-15);

        // e^{i mu} e^{i nu} = e^{i (mu+nu)}
        let emu = TrigPoly::exponential(rs.clone(), [1, 0]);
        let enu = TrigPoly::exponential(rs.clone(), [2, 0]);
        let prod = emu.multiply(&enu).unwrap();
        assert_eq!(prod.num_terms(), 1);
        assert!((prod.coeff([3, 0]) - Complex64::ONE).norm() < 1e-15);

        // A1 in the orbit-sum basis: M_1^2 = M_2 + 2 M_0.
        let m1 = TrigPoly::orbit_sum(&rs, &rs.weight([1, 0])).unwrap();
        let m2 = TrigPoly::orbit_sum(&rs, &rs.weight([2, 0])).unwrap();
        let expect = m2.add(&TrigPoly::one(rs.clone()).scaled(Complex64::new(2.0, 0.0))).unwrap();
        assert!(m1.multiply(&m1).unwrap().coeff_distance(&expect) < 1e-14);
    }

    #[test]
    fn mismatched_systems_rejected() {
        let f = TrigPoly::one(a1());
        let g = TrigPoly::one(a2());
        assert!(matches!(f.add(&g), Err(Error::SystemMismatch)));
        let h = TrigPoly::one(build_root_system(SystemName::A1, &[1.0]).unwrap());
        assert!(matches!(f.multiply(&h), Err(Error::SystemMismatch)));
    }

    #[test]
    fn evaluation_is_periodic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for rs in [a1(), a2()] {
            let f = random_poly(&rs, &mut rng, 6);
            let x: Vec2 = [0.4, if rs.rank == 2 { -0.7 } else { 0.0 }];
            let pi = std::f64::consts::PI;
            let q = crate::rootsys::add(
                rs.coroot_column(0),
                if rs.rank == 2 { rs.coroot_column(rs.rank - 1) } else { [0.0, 0.0] },
            );
            let shifted = crate::rootsys::add(x, crate::rootsys::scale(q, pi));
            assert!((f.eval_real(x) - f.eval_real(shifted)).norm() < 1e-12 * (1.0 + f.max_coeff_norm()));
        }
    }

    #[test]
    fn exponential_growth_bound() {
        // |e^{i gamma}(z)| <= e^{|gamma| |z|}
        let rs = a2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mu = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            let gamma = rs.weight(mu);
            let z = [
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let f = TrigPoly::exponential(rs.clone(), mu);
            let znorm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            assert!(f.eval_complex(z).norm() <= (gamma.norm() * znorm).exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn conjugate_reflect_matches_conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rs = a2();
        let f = random_poly(&rs, &mut rng, 8);
        let g = f.conjugate_reflect();
        for _ in 0..10 {
            let x: Vec2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            assert!((g.eval_real(x) - f.eval_real(x).conj()).norm() < 1e-12);
        }
        // Real-coefficient, symmetric-support polynomials are fixed points.
        let m = TrigPoly::orbit_sum(&rs, &rs.weight([1, 1])).unwrap();
        assert!(m.conjugate_reflect().coeff_distance(&m) < 1e-15);
        // For A2 the negated orbit of (2,1) is the orbit of the dual (1,2).
        let m21 = TrigPoly::orbit_sum(&rs, &rs.weight([2, 1])).unwrap();
        let m12 = TrigPoly::orbit_sum(&rs, &rs.weight([1, 2])).unwrap();
        assert!(m21.conjugate_reflect().coeff_distance(&m12) < 1e-15);
        // Single exponential flips sign of the weight.
        let e = TrigPoly::exponential(rs.clone(), [1, 2]).scaled(Complex64::new(0.0, 2.0));
        let er = e.conjugate_reflect();
        assert!((er.coeff([-1, -2]) - Complex64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn ring_axioms_on_random_polys() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for rs in [a1(), a2()] {
            for _ in 0..10 {
                let f = random_poly(&rs, &mut rng, 5);
                let g = random_poly(&rs, &mut rng, 5);
                let h = random_poly(&rs, &mut rng, 5);
                let scale_ref = f.max_coeff_norm() * g.max_coeff_norm() * h.max_coeff_norm() + 1.0;
                // Associativity.
                let lhs = f.multiply(&g).unwrap().multiply(&h).unwrap();
                let rhs = f.multiply(&g.multiply(&h).unwrap()).unwrap();
                assert!(lhs.coeff_distance(&rhs) < 1e-12 * scale_ref);
                // Distributivity.
                let lhs = f.multiply(&g.add(&h).unwrap()).unwrap();
                let rhs = f.multiply(&g).unwrap().add(&f.multiply(&h).unwrap()).unwrap();
                assert!(lhs.coeff_distance(&rhs) < 1e-12 * scale_ref);
            }
        }
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let rs = a2();
        for _ in 0..10 {
            let f = random_poly(&rs, &mut rng, 5);
            let g = random_poly(&rs, &mut rng, 5);
            let x: Vec2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let lhs = f.multiply(&g).unwrap().eval_real(x);
            let rhs = f.eval_real(x) * g.eval_real(x);
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn invariance_flag_is_sound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let rs = a2();
        // Random W-invariant polynomial: combination of orbit sums.
        let mut f = TrigPoly::zero(rs.clone());
        for coords in [[1, 0], [0, 2], [1, 1]] {
            let m = TrigPoly::orbit_sum(&rs, &rs.weight(coords)).unwrap();
            f = f
                .add(&m.scaled(Complex64::new(rng.gen_range(-1.0..1.0), 0.0)))
                .unwrap();
        }
        assert!(f.is_w_invariant());
        for _ in 0..10 {
            let x: Vec2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            for w in &rs.weyl {
                let wx = crate::rootsys::mat_vec(&w.mat, x);
                assert!((f.eval_real(wx) - f.eval_real(x)).norm() < 1e-11);
            }
        }
        // A non-invariant polynomial must not carry the flag.
        let e = TrigPoly::exponential(rs.clone(), [1, 0]);
        assert!(!e.is_w_invariant());
        // The product of W-invariant inputs stays W-invariant.
        assert!(f.multiply(&f).unwrap().is_w_invariant());
    }
}
