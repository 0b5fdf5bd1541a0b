//! Root system data, Weyl group enumeration, lattices, dominance order, and
//! affine-Weyl alcove geometry.
//!
//! Supported systems are rank <= 2: `A1`, `BC1`, `A2`, `B2`, `G2`, `BC2`. The
//! Cartesian normalizations are fixed so that file formats are deterministic:
//!
//! * `A1`: ambient line, `alpha = sqrt(2) e1`.
//! * `BC1`: ambient line, positive roots `e1` and `2 e1`.
//! * `A2`: plane realization with `alpha1 = sqrt(2)(1,0)`,
//!   `alpha2 = sqrt(2)(-1/2, sqrt(3)/2)` (all roots of squared length 2).
//! * `B2`: short roots `e1`, `e2`; long roots `e1 +- e2`.
//! * `G2`: short `alpha1 = sqrt(2)(1,0)` (squared length 2), long `alpha2`
//!   at 150 degrees (squared length 6).
//! * `BC2`: short `e_i`, middle `e1 +- e2`, long `2 e_i`.
//!
//! The weight lattice is `L = { l : <l,a>/<a,a> integer for all roots a }`. A
//! basis of `L` is pinned per system such that a weight is dominant exactly
//! when its integer coordinates are all nonnegative. Because `L` pairs evenly
//! with coroots, the dominance order on `L` is generated by the doubled
//! positive roots: `mu <= la` iff `la - mu` is a nonnegative integer
//! combination of `2 alpha_i` over the simple roots. This is the order in
//! which the orthogonal polynomial construction is triangular.

use std::sync::Arc;

use crate::{Error, Result};

pub const MAX_RANK: usize = 2;

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(a: Vec2, s: f64) -> Vec2 {
    [a[0] * s, a[1] * s]
}

/// 2x2 matrix, row major.
pub type Mat2 = [[f64; 2]; 2];

#[inline]
pub fn mat_vec(m: &Mat2, v: Vec2) -> Vec2 {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

#[inline]
pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_inv(m: &Mat2) -> Mat2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert!(det.abs() > 1e-12, "singular 2x2 matrix");
    [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ]
}

/// Matrix whose columns are the given vectors.
fn columns(c0: Vec2, c1: Vec2) -> Mat2 {
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SystemName {
    A1,
    BC1,
    A2,
    B2,
    G2,
    BC2,
}

impl SystemName {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(SystemName::A1),
            "BC1" => Ok(SystemName::BC1),
            "A2" => Ok(SystemName::A2),
            "B2" => Ok(SystemName::B2),
            "G2" => Ok(SystemName::G2),
            "BC2" => Ok(SystemName::BC2),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemName::A1 => "A1",
            SystemName::BC1 => "BC1",
            SystemName::A2 => "A2",
            SystemName::B2 => "B2",
            SystemName::G2 => "G2",
            SystemName::BC2 => "BC2",
        }
    }
}

/// One positive root with its length-class index and cached lattice data.
#[derive(Debug, Clone)]
pub struct Root {
    pub cart: Vec2,
    pub norm_sq: f64,
    /// Index into the length-class table of the root system.
    pub class: usize,
    /// Coordinates of `2 alpha` in the weight-lattice basis (always integral).
    pub two_alpha_coords: [i32; 2],
    /// Index of `alpha/2` in `positive_roots`, when `alpha/2` is itself a root.
    pub half_root: Option<usize>,
}

/// A Weyl group element: orthogonal action on Cartesian coordinates plus the
/// induced integer action on weight-lattice coordinates.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub mat: Mat2,
    pub coord_mat: [[i32; 2]; 2],
}

impl WeylElement {
    #[inline]
    pub fn apply_coords(&self, c: [i32; 2]) -> [i32; 2] {
        [
            self.coord_mat[0][0] * c[0] + self.coord_mat[0][1] * c[1],
            self.coord_mat[1][0] * c[0] + self.coord_mat[1][1] * c[1],
        ]
    }
}

/// An element of the weight lattice in integer coordinates with its Cartesian
/// realization.
#[derive(Debug, Clone, Copy)]
pub struct Weight {
    pub coords: [i32; 2],
    pub cart: Vec2,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for Weight {}

impl Weight {
    pub fn norm(&self) -> f64 {
        norm(self.cart)
    }

    pub fn is_dominant(&self) -> bool {
        self.coords[0] >= 0 && self.coords[1] >= 0
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0]
    }
}

/// Total order refining dominance: (|mu|, lexicographic coordinates).
pub fn weight_order(a: &Weight, b: &Weight) -> std::cmp::Ordering {
    a.norm()
        .partial_cmp(&b.norm())
        .unwrap()
        .then(a.coords.cmp(&b.coords))
}

#[derive(Debug, Clone)]
pub struct LengthClass {
    pub name: &'static str,
    pub norm_sq: f64,
    pub multiplicity: f64,
}

/// Root system data for one of the supported named types, with a fixed
/// multiplicity function. Immutable after construction.
#[derive(Debug)]
pub struct RootSystem {
    pub name: SystemName,
    pub rank: usize,
    pub positive_roots: Vec<Root>,
    /// Indices of the simple roots within `positive_roots`.
    pub simple: Vec<usize>,
    pub classes: Vec<LengthClass>,
    pub weyl: Vec<WeylElement>,
    /// Columns are the pinned basis of the weight lattice.
    pub lattice_basis: Mat2,
    pub lattice_inv: Mat2,
    /// Columns are a basis of the coroot lattice `Q^v`.
    pub coroot_basis: Mat2,
    pub coroot_inv: Mat2,
    /// Coordinate actions of the simple reflections (generators of W).
    pub simple_coord_mats: Vec<[[i32; 2]; 2]>,
    rho: Vec2,
}

fn reflection_matrix(alpha: Vec2) -> Mat2 {
    // s_a(x) = x - 2 <a,x>/<a,a> a
    let ns = dot(alpha, alpha);
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let e = if i == j { 1.0 } else { 0.0 };
            m[i][j] = e - 2.0 * alpha[i] * alpha[j] / ns;
        }
    }
    m
}

fn mats_close(a: &Mat2, b: &Mat2) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).abs() < 1e-9))
}

struct SystemData {
    rank: usize,
    roots: Vec<(Vec2, usize)>, // cartesian, class index
    simple: Vec<usize>,
    class_names: Vec<&'static str>,
    lattice: [Vec2; 2],
    coroot: [Vec2; 2],
    weyl_order: usize,
}

fn system_data(name: SystemName) -> SystemData {
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6.0f64.sqrt();
    match name {
        SystemName::A1 => SystemData {
            rank: 1,
            roots: vec![([s2, 0.0], 0)],
            simple: vec![0],
            class_names: vec!["short"],
            lattice: [[s2, 0.0], [0.0, 1.0]],
            coroot: [[s2, 0.0], [0.0, 1.0]],
            weyl_order: 2,
        },
        SystemName::BC1 => SystemData {
            rank: 1,
            roots: vec![([1.0, 0.0], 0), ([2.0, 0.0], 1)],
            simple: vec![0],
            class_names: vec!["short", "long"],
            lattice: [[2.0, 0.0], [0.0, 1.0]],
            coroot: [[1.0, 0.0], [0.0, 1.0]],
            weyl_order: 2,
        },
        SystemName::A2 => {
            let a1 = [s2, 0.0];
            let a2 = [-s2 / 2.0, s6 / 2.0];
            SystemData {
                rank: 2,
                roots: vec![(a1, 0), (a2, 0), (add(a1, a2), 0)],
                simple: vec![0, 1],
                class_names: vec!["short"],
                lattice: [[s2, s6 / 3.0], [0.0, 2.0 * s6 / 3.0]],
                coroot: [a1, a2],
                weyl_order: 6,
            }
        }
        SystemName::B2 => SystemData {
            rank: 2,
            roots: vec![
                ([1.0, -1.0], 1), // e1 - e2, long, simple
                ([0.0, 1.0], 0),  // e2, short, simple
                ([1.0, 0.0], 0),  // e1, short
                ([1.0, 1.0], 1),  // e1 + e2, long
            ],
            simple: vec![0, 1],
            class_names: vec!["short", "long"],
            lattice: [[2.0, 0.0], [1.0, 1.0]],
            coroot: [[1.0, 1.0], [1.0, -1.0]],
            weyl_order: 8,
        },
        SystemName::G2 => {
            let a1 = [s2, 0.0];
            let a2 = [-1.5 * s2, s6 / 2.0];
            SystemData {
                rank: 2,
                roots: vec![
                    (a1, 0),
                    (a2, 1),
                    (add(a1, a2), 0),
                    (add(scale(a1, 2.0), a2), 0),
                    (add(scale(a1, 3.0), a2), 1),
                    (add(scale(a1, 3.0), scale(a2, 2.0)), 1),
                ],
                simple: vec![0, 1],
                class_names: vec!["short", "long"],
                lattice: [[s2, s6], [0.0, 2.0 * s6]],
                coroot: [[-s2 / 2.0, s6 / 6.0], [s2 / 2.0, s6 / 6.0]],
                weyl_order: 12,
            }
        }
        SystemName::BC2 => SystemData {
            rank: 2,
            roots: vec![
                ([1.0, -1.0], 1), // e1 - e2, middle, simple
                ([0.0, 1.0], 0),  // e2, short, simple
                ([1.0, 0.0], 0),  // e1, short
                ([1.0, 1.0], 1),  // e1 + e2, middle
                ([2.0, 0.0], 2),  // 2 e1, long
                ([0.0, 2.0], 2),  // 2 e2, long
            ],
            simple: vec![0, 1],
            class_names: vec!["short", "middle", "long"],
            lattice: [[2.0, 0.0], [2.0, 2.0]],
            coroot: [[1.0, 0.0], [0.0, 1.0]],
            weyl_order: 8,
        },
    }
}

/// Builds one of the named root systems with multiplicities given per length
/// class, ordered as in [`RootSystem::class_names`] (increasing root length).
pub fn build_root_system(name: SystemName, multiplicities: &[f64]) -> Result<Arc<RootSystem>> {
    let data = system_data(name);
    if multiplicities.len() != data.class_names.len() {
        return Err(Error::MultiplicityCount {
            system: name.as_str().to_string(),
            expected: data.class_names.len(),
            got: multiplicities.len(),
        });
    }
    for (c, &m) in multiplicities.iter().enumerate() {
        if m < 0.0 || !m.is_finite() {
            return Err(Error::NegativeMultiplicity {
                class: data.class_names[c].to_string(),
                value: m,
            });
        }
    }

    let lattice_basis = columns(data.lattice[0], data.lattice[1]);
    let lattice_inv = mat_inv(&lattice_basis);
    let coroot_basis = columns(data.coroot[0], data.coroot[1]);
    let coroot_inv = mat_inv(&coroot_basis);

    let round_coords = |v: Vec2| -> [i32; 2] {
        let c = mat_vec(&lattice_inv, v);
        let r = [c[0].round(), c[1].round()];
        assert!(
            (c[0] - r[0]).abs() < 1e-9 && (c[1] - r[1]).abs() < 1e-9,
            "vector {v:?} not on the weight lattice"
        );
        [r[0] as i32, r[1] as i32]
    };

    let mut positive_roots = Vec::with_capacity(data.roots.len());
    for (cart, class) in &data.roots {
        let half = scale(*cart, 0.5);
        let half_root = data
            .roots
            .iter()
            .position(|(c, _)| norm(sub(*c, half)) < 1e-9);
        positive_roots.push(Root {
            cart: *cart,
            norm_sq: dot(*cart, *cart),
            class: *class,
            two_alpha_coords: round_coords(scale(*cart, 2.0)),
            half_root,
        });
    }

    // Weyl group: closure of the simple reflections.
    let gens: Vec<Mat2> = data
        .simple
        .iter()
        .map(|&i| reflection_matrix(positive_roots[i].cart))
        .collect();
    let identity: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut mats: Vec<Mat2> = vec![identity];
    let mut queue = vec![identity];
    while let Some(m) = queue.pop() {
        for g in &gens {
            let n = mat_mul(g, &m);
            if !mats.iter().any(|k| mats_close(k, &n)) {
                mats.push(n);
                queue.push(n);
            }
        }
    }
    assert_eq!(
        mats.len(),
        data.weyl_order,
        "Weyl group order mismatch for {}",
        name.as_str()
    );

    let weyl: Vec<WeylElement> = mats
        .iter()
        .map(|m| {
            // Induced action on lattice coordinates: B^-1 M B, integral.
            let a = mat_mul(&mat_mul(&lattice_inv, m), &lattice_basis);
            let mut coord_mat = [[0i32; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let r = a[i][j].round();
                    assert!(
                        (a[i][j] - r).abs() < 1e-9,
                        "Weyl action not integral on the weight lattice"
                    );
                    coord_mat[i][j] = r as i32;
                }
            }
            WeylElement { mat: *m, coord_mat }
        })
        .collect();

    let classes: Vec<LengthClass> = data
        .class_names
        .iter()
        .enumerate()
        .map(|(c, &n)| LengthClass {
            name: n,
            norm_sq: positive_roots
                .iter()
                .find(|r| r.class == c)
                .map(|r| r.norm_sq)
                .unwrap(),
            multiplicity: multiplicities[c],
        })
        .collect();

    let mut rho = [0.0; 2];
    for r in &positive_roots {
        rho = add(rho, scale(r.cart, 0.5 * multiplicities[r.class]));
    }

    let simple_coord_mats: Vec<[[i32; 2]; 2]> = data
        .simple
        .iter()
        .map(|&i| {
            let m = reflection_matrix(positive_roots[i].cart);
            let a = mat_mul(&mat_mul(&lattice_inv, &m), &lattice_basis);
            let mut out = [[0i32; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    let v = a[r][c].round();
                    assert!((a[r][c] - v).abs() < 1e-9);
                    out[r][c] = v as i32;
                }
            }
            out
        })
        .collect();

    let rs = RootSystem {
        name,
        rank: data.rank,
        positive_roots,
        simple: data.simple,
        classes,
        weyl,
        lattice_basis,
        lattice_inv,
        coroot_basis,
        coroot_inv,
        simple_coord_mats,
        rho,
    };
    rs.verify();
    Ok(Arc::new(rs))
}

impl RootSystem {
    /// Constructor-time sanity checks of the structural invariants.
    fn verify(&self) {
        // Closure: w alpha is a root (up to sign) for every w, alpha, and the
        // multiplicity function is constant along the orbit.
        for w in &self.weyl {
            for r in &self.positive_roots {
                let img = mat_vec(&w.mat, r.cart);
                let hit = self.positive_roots.iter().find(|s| {
                    norm(sub(s.cart, img)) < 1e-9 || norm(add(s.cart, img)) < 1e-9
                });
                match hit {
                    Some(s) => assert_eq!(
                        s.class, r.class,
                        "multiplicity not W-invariant along a root orbit"
                    ),
                    None => panic!("root system not closed under its Weyl group"),
                }
            }
        }
        // Reflections are involutions.
        for &i in &self.simple {
            let m = reflection_matrix(self.positive_roots[i].cart);
            assert!(mats_close(&mat_mul(&m, &m), &[[1.0, 0.0], [0.0, 1.0]]));
        }
        // The lattice pairs evenly with the coroot basis (pi Q^v periodicity).
        for j in 0..self.rank {
            let q = self.coroot_column(j);
            for i in 0..self.rank {
                let b = self.lattice_column(i);
                let p = dot(b, q);
                assert!(
                    (p / 2.0 - (p / 2.0).round()).abs() < 1e-9,
                    "lattice does not pair evenly with coroots"
                );
            }
        }
        // rho is dominant.
        for r in &self.positive_roots {
            assert!(dot(self.rho, r.cart) > -1e-12);
        }
        // The pinned lattice basis realizes dominance as "all coords >= 0".
        for c0 in -3..=3 {
            for c1 in -3..=3 {
                let c = if self.rank == 1 { [c0, 0] } else { [c0, c1] };
                let w = self.weight(c);
                let geom = self
                    .positive_roots
                    .iter()
                    .all(|r| dot(w.cart, r.cart) > -1e-9);
                assert_eq!(w.is_dominant(), geom, "dominance convention broken at {c:?}");
            }
        }
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn class_names(&self) -> Vec<&'static str> {
        self.classes.iter().map(|c| c.name).collect()
    }

    pub fn multiplicities(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.multiplicity).collect()
    }

    pub fn multiplicity_of(&self, root: &Root) -> f64 {
        self.classes[root.class].multiplicity
    }

    /// Multiplicity of `alpha/2`, zero when `alpha/2` is not a root.
    pub fn half_multiplicity(&self, root: &Root) -> f64 {
        root.half_root
            .map(|i| self.classes[self.positive_roots[i].class].multiplicity)
            .unwrap_or(0.0)
    }

    /// `rho = 1/2 sum m_a a` over the positive roots.
    pub fn rho(&self) -> Vec2 {
        self.rho
    }

    pub fn lattice_column(&self, j: usize) -> Vec2 {
        [self.lattice_basis[0][j], self.lattice_basis[1][j]]
    }

    pub fn coroot_column(&self, j: usize) -> Vec2 {
        [self.coroot_basis[0][j], self.coroot_basis[1][j]]
    }

    pub fn weight(&self, coords: [i32; 2]) -> Weight {
        debug_assert!(self.rank == 2 || coords[1] == 0);
        let cart = mat_vec(&self.lattice_basis, [coords[0] as f64, coords[1] as f64]);
        Weight { coords, cart }
    }

    /// Recovers a lattice weight from Cartesian coordinates, if it is one.
    pub fn weight_from_cart(&self, cart: Vec2) -> Option<Weight> {
        let c = mat_vec(&self.lattice_inv, cart);
        let r = [c[0].round(), c[1].round()];
        if (c[0] - r[0]).abs() > 1e-7 || (c[1] - r[1]).abs() > 1e-7 {
            return None;
        }
        if self.rank == 1 && r[1] != 0.0 {
            return None;
        }
        Some(self.weight([r[0] as i32, r[1] as i32]))
    }

    /// `lambda_alpha = <lambda, alpha>/<alpha, alpha>`, an integer on the
    /// weight lattice.
    pub fn lambda_alpha(&self, w: &Weight, root: &Root) -> i64 {
        let v = dot(w.cart, root.cart) / root.norm_sq;
        let r = v.round();
        debug_assert!((v - r).abs() < 1e-6, "lambda_alpha not integral: {v}");
        r as i64
    }

    /// The Weyl orbit of a lattice weight, sorted by (|mu|, lex).
    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut coords: Vec<[i32; 2]> = self
            .weyl
            .iter()
            .map(|e| e.apply_coords(w.coords))
            .collect();
        coords.sort_unstable();
        coords.dedup();
        let mut out: Vec<Weight> = coords.into_iter().map(|c| self.weight(c)).collect();
        out.sort_by(weight_order);
        out
    }

    /// Order of the stabilizer of `w` in the Weyl group.
    pub fn stabilizer_order(&self, w: &Weight) -> usize {
        self.weyl
            .iter()
            .filter(|e| e.apply_coords(w.coords) == w.coords)
            .count()
    }

    /// Whether `mu <= la` in the dominance order of the weight lattice
    /// (difference a nonnegative integer combination of doubled simple roots).
    pub fn dominance_leq(&self, mu: &Weight, la: &Weight) -> bool {
        self.dominance_coeffs(mu, la).is_some()
    }

    fn dominance_coeffs(&self, mu: &Weight, la: &Weight) -> Option<Vec<i64>> {
        let diff = sub(la.cart, mu.cart);
        let cols = match self.rank {
            1 => columns(scale(self.positive_roots[self.simple[0]].cart, 2.0), [0.0, 1.0]),
            _ => columns(
                scale(self.positive_roots[self.simple[0]].cart, 2.0),
                scale(self.positive_roots[self.simple[1]].cart, 2.0),
            ),
        };
        let c = mat_vec(&mat_inv(&cols), diff);
        let mut out = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let r = c[j].round();
            if (c[j] - r).abs() > 1e-7 || r < -1e-7 {
                return None;
            }
            out.push(r as i64);
        }
        Some(out)
    }

    /// All dominant weights `mu <= la`, sorted by (|mu|, lex). Errors when
    /// `la` is not dominant.
    pub fn dominant_weights_below(&self, la: &Weight) -> Result<Vec<Weight>> {
        if !la.is_dominant() {
            return Err(Error::NotDominant(la.coords));
        }
        // mu = la - c1 (2 a1) - c2 (2 a2); bound the c_j by pairing with the
        // dual basis of the doubled simple roots.
        let cols = match self.rank {
            1 => columns(scale(self.positive_roots[self.simple[0]].cart, 2.0), [0.0, 1.0]),
            _ => columns(
                scale(self.positive_roots[self.simple[0]].cart, 2.0),
                scale(self.positive_roots[self.simple[1]].cart, 2.0),
            ),
        };
        let inv = mat_inv(&cols);
        let la_norm = la.norm();
        let mut bounds = [0i64; 2];
        for j in 0..self.rank {
            let dual = [inv[j][0], inv[j][1]];
            bounds[j] = (2.0 * la_norm * norm(dual)).ceil() as i64 + 1;
        }
        let mut out = Vec::new();
        for c1 in 0..=bounds[0] {
            for c2 in 0..=(if self.rank == 2 { bounds[1] } else { 0 }) {
                let mut x = la.cart;
                x = sub(x, scale(self.positive_roots[self.simple[0]].cart, 2.0 * c1 as f64));
                if self.rank == 2 {
                    x = sub(x, scale(self.positive_roots[self.simple[1]].cart, 2.0 * c2 as f64));
                }
                if let Some(mu) = self.weight_from_cart(x) {
                    if mu.is_dominant() {
                        out.push(mu);
                    }
                }
            }
        }
        out.sort_by(weight_order);
        out.dedup_by(|a, b| a.coords == b.coords);
        Ok(out)
    }

    /// All dominant weights with `|lambda| <= radius`, sorted by (|mu|, lex).
    pub fn dominant_weights_in_shell(&self, radius: f64) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut n1 = 0;
        loop {
            let w1 = self.weight([n1, 0]);
            if w1.norm() > radius + 1e-12 {
                break;
            }
            if self.rank == 1 {
                out.push(w1);
            } else {
                let mut n2 = 0;
                loop {
                    let w = self.weight([n1, n2]);
                    if w.norm() > radius + 1e-12 {
                        break;
                    }
                    out.push(w);
                    n2 += 1;
                }
            }
            n1 += 1;
        }
        out.sort_by(weight_order);
        out
    }

    /// Whether `x` lies in the closed fundamental alcove, up to `tol`.
    pub fn in_alcove(&self, x: Vec2, tol: f64) -> bool {
        self.positive_roots.iter().all(|r| {
            let p = dot(r.cart, x);
            p >= -tol && p <= std::f64::consts::PI + tol
        })
    }

    /// Folds `x` into the closed alcove by the affine Weyl group: first reduce
    /// modulo `pi Q^v`, then reflect across violated walls.
    pub fn fold_to_alcove(&self, x: Vec2) -> Result<Vec2> {
        let pi = std::f64::consts::PI;
        let mut y = x;
        // Translate by pi Q^v to land near the origin.
        let t = mat_vec(&self.coroot_inv, y);
        for j in 0..self.rank {
            let k = (t[j] / pi).round();
            y = sub(y, scale(self.coroot_column(j), pi * k));
        }
        for _ in 0..10_000 {
            let mut reflected = false;
            for r in &self.positive_roots {
                let p = dot(r.cart, y);
                if p < -1e-14 {
                    y = sub(y, scale(r.cart, 2.0 * p / r.norm_sq));
                    reflected = true;
                } else if p > pi + 1e-14 {
                    y = sub(y, scale(r.cart, 2.0 * (p - pi) / r.norm_sq));
                    reflected = true;
                }
            }
            if !reflected {
                return Ok(y);
            }
        }
        Err(Error::FoldIterationCap)
    }

    /// Volume of the fundamental cell of the torus `a / pi Q^v`.
    pub fn cell_volume(&self) -> f64 {
        let pi = std::f64::consts::PI;
        match self.rank {
            1 => pi * norm(self.coroot_column(0)),
            _ => {
                let a = self.coroot_column(0);
                let b = self.coroot_column(1);
                pi * pi * (a[0] * b[1] - a[1] * b[0]).abs()
            }
        }
    }

    /// Volume of the closed alcove: cell volume over the Weyl group order.
    pub fn alcove_volume(&self) -> f64 {
        self.cell_volume() / self.weyl_order() as f64
    }
}
