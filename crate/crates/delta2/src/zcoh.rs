//! Cohomology of the order-2 group with coefficients in a free lattice
//! carrying an involution.
//!
//! Everything is computed from the closed formulas for the cyclic resolution:
//! H¹ = Ker(1+τ)/Im(τ−1) and H² = Ĥ⁰ = Ker(1−τ)/Im(1+τ). Classes are
//! canonicalized through the Smith normal form of the coboundary lattice
//! expressed in a kernel basis, so class coordinates are deterministic.

use crate::mat::{
    kernel_basis, smith_normal_form, solve_integer, solve_integer_with, IMat, Snf,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZcohError {
    #[error("ambient lattice mismatch: {0} vs {1}")]
    AmbientMismatch(String, String),
    #[error("involution is not of order 2 on lattice {0}")]
    NotInvolution(String),
    #[error("representative violates the cocycle condition in degree {0}")]
    NotCocycle(u8),
    #[error("map is not equivariant for the involutions")]
    NotEquivariant,
    #[error("coefficient module has torsion: invariant factor {0}")]
    TorsionCoefficients(i64),
    #[error("cohomology group is infinite; cannot enumerate classes")]
    InfiniteGroup,
}

/// Finitely generated free integer module with an involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveLattice {
    rank: usize,
    tau: IMat,
    label: String,
}

impl InvolutiveLattice {
    pub fn new(tau: IMat, label: impl Into<String>) -> Result<Self, ZcohError> {
        let label = label.into();
        if !tau.mul(&tau).is_identity() {
            return Err(ZcohError::NotInvolution(label));
        }
        Ok(InvolutiveLattice { rank: tau.nrows(), tau, label })
    }

    pub fn trivial(rank: usize, label: impl Into<String>) -> Self {
        InvolutiveLattice {
            rank,
            tau: IMat::identity(rank),
            label: label.into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tau(&self) -> &IMat {
        &self.tau
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Tensor square with the involution τ⊗τ, basis e_i⊗e_j at index i·rank+j.
    pub fn tensor_square(&self) -> InvolutiveLattice {
        InvolutiveLattice {
            rank: self.rank * self.rank,
            tau: self.tau.kronecker(&self.tau),
            label: format!("{}⊗{}", self.label, self.label),
        }
    }

    /// Exterior square with the involution Λ²τ, basis e_i∧e_j for i<j, lex order.
    pub fn wedge_square(&self) -> InvolutiveLattice {
        let q = wedge_quotient_map(self.rank);
        let s = wedge_section(self.rank);
        InvolutiveLattice {
            rank: q.nrows(),
            tau: q.mul(&self.tau.kronecker(&self.tau)).mul(&s),
            label: format!("Λ²{}", self.label),
        }
    }
}

/// Quotient map M⊗M → Λ²M: e_i⊗e_j ↦ e_i∧e_j (i<j), e_j⊗e_i ↦ −e_i∧e_j, diagonal ↦ 0.
pub fn wedge_quotient_map(n: usize) -> IMat {
    let rows = n * (n - 1) / 2;
    let mut m = IMat::zeros(rows, n * n);
    for (r, (i, j)) in wedge_basis(n).into_iter().enumerate() {
        m[(r, i * n + j)] = 1;
        m[(r, j * n + i)] = -1;
    }
    m
}

/// Section Λ²M → M⊗M sending e_i∧e_j to e_i⊗e_j (i<j).
pub fn wedge_section(n: usize) -> IMat {
    let rows = n * (n - 1) / 2;
    let mut m = IMat::zeros(n * n, rows);
    for (r, (i, j)) in wedge_basis(n).into_iter().enumerate() {
        m[(i * n + j, r)] = 1;
    }
    m
}

/// Basis index pairs (i, j), i<j, lexicographic.
pub fn wedge_basis(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// A degree-1 or degree-2 cohomology class, stored as a representative vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    degree: u8,
    rep: Vec<i64>,
    ambient: InvolutiveLattice,
}

impl CohClass {
    pub fn new(
        degree: u8,
        rep: Vec<i64>,
        ambient: &InvolutiveLattice,
    ) -> Result<Self, ZcohError> {
        assert!(degree == 1 || degree == 2, "degree must be 1 or 2");
        assert_eq!(rep.len(), ambient.rank());
        let tau_rep = ambient.tau().mul_vec(&rep);
        let ok = match degree {
            // (1+τ)·rep = 0
            1 => rep.iter().zip(&tau_rep).all(|(a, b)| a + b == 0),
            // (1−τ)·rep = 0
            _ => rep.iter().zip(&tau_rep).all(|(a, b)| a - b == 0),
        };
        if !ok {
            return Err(ZcohError::NotCocycle(degree));
        }
        Ok(CohClass { degree, rep, ambient: ambient.clone() })
    }

    pub fn zero(degree: u8, ambient: &InvolutiveLattice) -> Self {
        CohClass {
            degree,
            rep: vec![0; ambient.rank()],
            ambient: ambient.clone(),
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn rep(&self) -> &[i64] {
        &self.rep
    }

    pub fn ambient(&self) -> &InvolutiveLattice {
        &self.ambient
    }

    /// Class-level sum (representatives add).
    pub fn add(&self, other: &CohClass) -> Result<CohClass, ZcohError> {
        if self.ambient != other.ambient || self.degree != other.degree {
            return Err(ZcohError::AmbientMismatch(
                self.ambient.label.clone(),
                other.ambient.label.clone(),
            ));
        }
        Ok(CohClass {
            degree: self.degree,
            rep: crate::mat::vec_add(&self.rep, &other.rep),
            ambient: self.ambient.clone(),
        })
    }
}

/// Finite abelian group in invariant-factor form, with generator
/// representatives and the data needed to reduce a cocycle to canonical
/// coordinates.
#[derive(Clone, Debug)]
pub struct FinAbGroup {
    invariant_factors: Vec<i64>,
    free_rank: usize,
    /// generators in ambient coordinates, one column per invariant factor
    basis: IMat,
    degree: u8,
    ambient: InvolutiveLattice,
    // reduction data: rep ↦ K-coords ↦ SNF coords mod factors
    kernel_snf: Snf,
    red_u: IMat,
    red_d: Vec<i64>,
}

impl FinAbGroup {
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// log₂ of the order, for groups that are elementary abelian 2-groups.
    pub fn f2_dim(&self) -> usize {
        debug_assert!(self.invariant_factors.iter().all(|&f| f == 2));
        self.invariant_factors.len()
    }

    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().map(|&f| f as u64).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn generator(&self, i: usize) -> Vec<i64> {
        self.basis.col(i)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn ambient(&self) -> &InvolutiveLattice {
        &self.ambient
    }

    /// Canonical coordinates of a class: entries in [0, fᵢ), one per
    /// invariant factor. Two cocycles are cohomologous iff coords agree.
    pub fn coords(&self, c: &CohClass) -> Result<Vec<i64>, ZcohError> {
        if c.ambient != self.ambient {
            return Err(ZcohError::AmbientMismatch(
                c.ambient.label.clone(),
                self.ambient.label.clone(),
            ));
        }
        if c.degree != self.degree {
            return Err(ZcohError::NotCocycle(c.degree));
        }
        let y = solve_integer_with(&self.kernel_snf, c.rep())
            .expect("cocycle must lie in the kernel lattice");
        let w = self.red_u.mul_vec(&y);
        let mut coords = Vec::new();
        for (i, &d) in self.red_d.iter().enumerate() {
            match d {
                0 => {
                    if w[i] != 0 {
                        return Err(ZcohError::InfiniteGroup);
                    }
                }
                1 => {}
                _ => coords.push(w[i].rem_euclid(d)),
            }
        }
        Ok(coords)
    }

    pub fn is_zero_class(&self, c: &CohClass) -> Result<bool, ZcohError> {
        Ok(self.coords(c)?.iter().all(|&x| x == 0))
    }

    pub fn classes_equal(&self, a: &CohClass, b: &CohClass) -> Result<bool, ZcohError> {
        Ok(self.coords(a)? == self.coords(b)?)
    }

    /// Representative with the canonical coordinates, built from the generators.
    pub fn rep_from_coords(&self, coords: &[i64]) -> CohClass {
        assert_eq!(coords.len(), self.invariant_factors.len());
        let mut rep = vec![0i64; self.ambient.rank()];
        for (i, &a) in coords.iter().enumerate() {
            let g = self.basis.col(i);
            for (r, gv) in rep.iter_mut().zip(&g) {
                *r += a * gv;
            }
        }
        CohClass { degree: self.degree, rep, ambient: self.ambient.clone() }
    }

    /// Every class of the (finite) group, in lexicographic coordinate order.
    pub fn enumerate(&self) -> Result<Vec<CohClass>, ZcohError> {
        if self.free_rank > 0 {
            return Err(ZcohError::InfiniteGroup);
        }
        let mut out = vec![vec![]];
        for &f in &self.invariant_factors {
            let mut next = Vec::with_capacity(out.len() * f as usize);
            for prefix in &out {
                for a in 0..f {
                    let mut p = prefix.clone();
                    p.push(a);
                    next.push(p);
                }
            }
            out = next;
        }
        Ok(out.iter().map(|c| self.rep_from_coords(c)).collect())
    }
}

fn cohomology(
    m: &InvolutiveLattice,
    degree: u8,
    ker_of: IMat,
    im_of: IMat,
) -> FinAbGroup {
    let kernel = kernel_basis(&ker_of);
    let k = kernel.ncols();
    let kernel_snf = smith_normal_form(&kernel);
    // coboundary generators in kernel coordinates
    let mut rel_cols = Vec::new();
    for j in 0..im_of.ncols() {
        let col = im_of.col(j);
        let y = solve_integer_with(&kernel_snf, &col)
            .expect("coboundary lattice must lie inside the cocycle lattice");
        rel_cols.push(y);
    }
    let mut rel = IMat::zeros(k, rel_cols.len());
    for (j, col) in rel_cols.iter().enumerate() {
        for i in 0..k {
            rel[(i, j)] = col[i];
        }
    }
    let snf = smith_normal_form(&rel);
    let red_d: Vec<i64> = (0..k).map(|i| snf.diag(i)).collect();
    let mut invariant_factors = Vec::new();
    let mut free_rank = 0;
    let mut gen_cols = Vec::new();
    for (i, &d) in red_d.iter().enumerate() {
        if d == 0 {
            free_rank += 1;
        } else if d != 1 {
            invariant_factors.push(d);
            gen_cols.push(kernel.mul_vec(&snf.uinv.col(i)));
        }
    }
    let mut basis = IMat::zeros(m.rank(), gen_cols.len());
    for (j, col) in gen_cols.iter().enumerate() {
        for i in 0..m.rank() {
            basis[(i, j)] = col[i];
        }
    }
    FinAbGroup {
        invariant_factors,
        free_rank,
        basis,
        degree,
        ambient: m.clone(),
        kernel_snf,
        red_u: snf.u,
        red_d,
    }
}

/// H¹(Z/2, M) = Ker(1+τ)/Im(τ−1).
pub fn h1(m: &InvolutiveLattice) -> FinAbGroup {
    let id = IMat::identity(m.rank());
    cohomology(m, 1, id.add(m.tau()), m.tau().sub(&id))
}

/// H²(Z/2, M) = Ker(1−τ)/Im(1+τ).
pub fn h2(m: &InvolutiveLattice) -> FinAbGroup {
    let id = IMat::identity(m.rank());
    cohomology(m, 2, id.sub(m.tau()), id.add(m.tau()))
}

/// Tate Ĥ⁰(Z/2, M) = M^G/(1+τ)M. For the order-2 group this coincides with
/// H², but it is kept as a named operation for report clarity.
pub fn tate_h0(m: &InvolutiveLattice) -> FinAbGroup {
    h2(m)
}

/// Cup product H¹ ⊗ H¹ → H² with coefficients in M⊗M, via the cyclic
/// resolution formula rep(x) ⊗ τ·rep(y).
pub fn cup_h1_h1(x: &CohClass, y: &CohClass) -> Result<CohClass, ZcohError> {
    if x.ambient != y.ambient {
        return Err(ZcohError::AmbientMismatch(
            x.ambient.label.clone(),
            y.ambient.label.clone(),
        ));
    }
    if x.degree != 1 || y.degree != 1 {
        return Err(ZcohError::NotCocycle(2));
    }
    let m = &x.ambient;
    let n = m.rank();
    let ty = m.tau().mul_vec(y.rep());
    let mut rep = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            rep[i * n + j] = x.rep()[i] * ty[j];
        }
    }
    CohClass::new(2, rep, &m.tensor_square())
}

/// Pushforward of a class along an equivariant map of lattices.
pub fn pushforward(
    f: &IMat,
    target: &InvolutiveLattice,
    c: &CohClass,
) -> Result<CohClass, ZcohError> {
    assert_eq!(f.ncols(), c.ambient.rank());
    assert_eq!(f.nrows(), target.rank());
    if f.mul(c.ambient.tau()) != target.tau().mul(f) {
        return Err(ZcohError::NotEquivariant);
    }
    CohClass::new(c.degree, f.mul_vec(c.rep()), target)
}

/// Brute-force class count: enumerate cocycles with entries in {0,1} and
/// count equivalence classes, where equivalence is decided by integer
/// solvability of the coboundary system. Independent of the SNF route.
pub fn brute_force_class_count(m: &InvolutiveLattice, degree: u8) -> usize {
    let id = IMat::identity(m.rank());
    let (ker_of, im_of) = match degree {
        1 => (id.add(m.tau()), m.tau().sub(&id)),
        _ => (id.sub(m.tau()), id.add(m.tau())),
    };
    let n = m.rank();
    let mut reps: Vec<Vec<i64>> = Vec::new();
    for bits in 0..(1u32 << n) {
        let v: Vec<i64> = (0..n).map(|i| i64::from(bits >> i & 1 == 1)).collect();
        if !ker_of.mul_vec(&v).iter().all(|&x| x == 0) {
            continue;
        }
        let cohomologous = reps.iter().any(|r| {
            let diff = crate::mat::vec_sub(&v, r);
            solve_integer(&im_of, &diff).is_some()
        });
        if !cohomologous {
            reps.push(v);
        }
    }
    reps.len()
}

/// Label like "e1+e3" for a vector over F₂-style coordinates, "0" if zero.
pub fn class_label(coords: &[i64]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| {
            if a == 1 {
                format!("e{}", i + 1)
            } else {
                format!("{}e{}", a, i + 1)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

pub use crate::mat::smith_normal_form as snf;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Rat;

    fn lat(rows: &[Vec<i64>], label: &str) -> InvolutiveLattice {
        InvolutiveLattice::new(IMat::from_rows(rows), label).unwrap()
    }

    #[test]
    fn h1_examples() {
        // rank 2, tau = -I: (Z/2)^2
        let m = lat(&[vec![-1, 0], vec![0, -1]], "m");
        assert_eq!(h1(&m).invariant_factors(), &[2, 2]);

        // rank 1, tau = +1: trivial
        let m = lat(&[vec![1]], "t");
        assert!(h1(&m).is_trivial());

        // rank 2, diag(1, -1): Z/2
        let m = lat(&[vec![1, 0], vec![0, -1]], "d");
        let g = h1(&m);
        assert_eq!(g.invariant_factors(), &[2]);
        assert_eq!(g.order(), Some(2));
    }

    #[test]
    fn h2_examples() {
        let m = lat(&[vec![1]], "t");
        assert_eq!(h2(&m).invariant_factors(), &[2]);

        let m = lat(&[vec![-1]], "s");
        assert!(h2(&m).is_trivial());

        // rank 3, swap e1,e2, fix e3: Z/2 generated by e3
        let m = lat(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]], "p");
        let g = h2(&m);
        assert_eq!(g.invariant_factors(), &[2]);
        let e3 = CohClass::new(2, vec![0, 0, 1], &m).unwrap();
        assert!(!g.is_zero_class(&e3).unwrap());
        let fixed = CohClass::new(2, vec![1, 1, 0], &m).unwrap();
        assert!(g.is_zero_class(&fixed).unwrap());
    }

    #[test]
    fn tate_h0_examples() {
        assert_eq!(tate_h0(&lat(&[vec![1]], "t")).invariant_factors(), &[2]);
        assert!(tate_h0(&lat(&[vec![-1]], "s")).is_trivial());
        // swap is induced, so the Tate group vanishes
        let swap = lat(&[vec![0, 1], vec![1, 0]], "sw");
        assert!(tate_h0(&swap).is_trivial());
    }

    #[test]
    fn brute_force_agrees() {
        let lattices = vec![
            lat(&[vec![-1, 0], vec![0, -1]], "a"),
            lat(&[vec![1, 0], vec![0, -1]], "b"),
            lat(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]], "c"),
            lat(
                &[
                    vec![0, 1, 0, 0],
                    vec![1, 0, 0, 0],
                    vec![0, 0, -1, 0],
                    vec![0, 0, 0, 1],
                ],
                "d",
            ),
        ];
        for m in &lattices {
            assert_eq!(
                h1(m).order().unwrap() as usize,
                brute_force_class_count(m, 1),
                "h1 mismatch for {}",
                m.label()
            );
            assert_eq!(
                h2(m).order().unwrap() as usize,
                brute_force_class_count(m, 2),
                "h2 mismatch for {}",
                m.label()
            );
        }
    }

    #[test]
    fn cup_examples() {
        let m = lat(&[vec![-1, 0], vec![0, -1]], "m");
        let x = CohClass::new(1, vec![1, 0], &m).unwrap();
        let y = CohClass::new(1, vec![0, 1], &m).unwrap();
        let zero = CohClass::zero(1, &m);

        let c = cup_h1_h1(&zero, &zero).unwrap();
        let h2t = h2(&m.tensor_square());
        assert!(h2t.is_zero_class(&c).unwrap());

        // x = e1, y = e2: rep -e1⊗e2, nonzero in H²
        let c = cup_h1_h1(&x, &y).unwrap();
        assert_eq!(c.rep(), &[0, -1, 0, 0]);
        assert!(!h2t.is_zero_class(&c).unwrap());

        // x = y = e1: image in Λ² vanishes
        let c = cup_h1_h1(&x, &x).unwrap();
        let w = m.wedge_square();
        let q = wedge_quotient_map(2);
        let wc = pushforward(&q, &w, &c).unwrap();
        assert!(h2(&w).is_zero_class(&wc).unwrap());
    }

    #[test]
    fn pushforward_examples() {
        let m = lat(&[vec![-1, 0], vec![0, -1]], "m");
        let x = CohClass::new(1, vec![1, 0], &m).unwrap();
        let id = IMat::identity(2);
        let px = pushforward(&id, &m, &x).unwrap();
        assert_eq!(px.rep(), x.rep());

        let zero_map = IMat::zeros(2, 2);
        let pz = pushforward(&zero_map, &m, &x).unwrap();
        assert_eq!(pz.rep(), &[0, 0]);

        // non-equivariant map rejected
        let n = lat(&[vec![1, 0], vec![0, -1]], "n");
        let f = IMat::identity(2);
        assert_eq!(
            pushforward(&f, &n, &x).unwrap_err(),
            ZcohError::NotEquivariant
        );
    }

    #[test]
    fn cup_bilinear_and_wedge_kills_diagonal() {
        let m = lat(
            &[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]],
            "m3",
        );
        let g = h1(&m);
        let classes = g.enumerate().unwrap();
        let tensor = m.tensor_square();
        let h2t = h2(&tensor);
        let wedge = m.wedge_square();
        let h2w = h2(&wedge);
        let q = wedge_quotient_map(3);
        for x in &classes {
            for y in &classes {
                for z in &classes {
                    let lhs = cup_h1_h1(&x.add(y).unwrap(), z).unwrap();
                    let rhs = cup_h1_h1(x, z)
                        .unwrap()
                        .add(&cup_h1_h1(y, z).unwrap())
                        .unwrap();
                    assert!(h2t.classes_equal(&lhs, &rhs).unwrap());
                }
                let diag = cup_h1_h1(x, x).unwrap();
                let wd = pushforward(&q, &wedge, &diag).unwrap();
                assert!(h2w.is_zero_class(&wd).unwrap());
            }
        }
    }

    #[test]
    fn class_equality_is_equivalence() {
        let m = lat(&[vec![-1, 0], vec![0, 1]], "m");
        let g = h1(&m);
        // shift a representative by a coboundary: class unchanged
        let x = CohClass::new(1, vec![1, 0], &m).unwrap();
        let shifted = CohClass::new(1, vec![-1, 0], &m).unwrap();
        assert!(g.classes_equal(&x, &shifted).unwrap());
        assert!(g.classes_equal(&x, &x).unwrap());
    }

    #[test]
    fn rational_denominators() {
        // (τ−1) solve has denominators dividing 2
        let m = lat(&[vec![-1, 0], vec![0, -1]], "m");
        let id = IMat::identity(2);
        let a = m.tau().sub(&id);
        let sol =
            crate::mat::solve_rational(&a, &[Rat::from_integer(-1), Rat::from_integer(0)])
                .unwrap();
        assert_eq!(sol[0], Rat::new(1, 2));
    }
}
