//! Exact arithmetic in free nilpotent class-2 quotients π/[π]₃.
//!
//! Elements are stored in the normal-form coordinates (v, z) coming from the
//! ordered-word section v = x₁^{a₁}⋯x_n^{a_n}: composition is
//! (v, z)∘(w, y) = (v+w, z+y+⟨v,w⟩) with the bilinear pairing fixed by that
//! section. The center is Λ²Zⁿ for a free group, or a quotient of Λ² by the
//! symplectic classes of proper surface pieces.

use crate::mat::{basis_vec, smith_normal_form, solve_integer, IMat, Rat};
use crate::zcoh::{wedge_basis, InvolutiveLattice, ZcohError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Nil2Error {
    #[error("element dimensions do not match the group")]
    DimensionMismatch,
    #[error("center quotient has torsion")]
    TorsionCenter,
    #[error("involution does not negate the symplectic class")]
    OmegaNotAntiInvariant,
    #[error("generator image {0} has wrong abelianization")]
    TauImageInconsistent(usize),
    #[error("induced map is not an involution on generator {0}")]
    TauNotInvolution(usize),
    #[error(transparent)]
    Coh(#[from] ZcohError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nil2Element {
    pub v: Vec<i64>,
    pub z: Vec<i64>,
}

impl Nil2Element {
    pub fn new(v: Vec<i64>, z: Vec<i64>) -> Self {
        Nil2Element { v, z }
    }
}

#[derive(Clone, Debug)]
pub struct Nil2Group {
    n: usize,
    abelianization: InvolutiveLattice,
    center: InvolutiveLattice,
    /// c × n² matrix; column i·n+j is ⟨e_i, e_j⟩
    pairing: IMat,
    /// quotient Λ²Zⁿ → center (identity for free π)
    lambda2_to_center: IMat,
    tau_images: Vec<Nil2Element>,
}

/// Pairing of the ordered-word section on the free group: reordering
/// x_j past x_i for i>j contributes [x_i,x_j] = −e_j∧e_i, so
/// ⟨e_i,e_j⟩ = 0 for i≤j and −e_j∧e_i for i>j.
fn free_pairing(n: usize) -> IMat {
    let c = n * (n - 1) / 2;
    let mut p = IMat::zeros(c, n * n);
    let basis = wedge_basis(n);
    for (row, &(j, i)) in basis.iter().enumerate() {
        // i > j here since wedge_basis yields (j, i) with j < i
        p[(row, i * n + j)] = -1;
    }
    p
}

/// Symplectic class ω = Σ e_{2i}∧e_{2i+1} of a genus-g block starting at
/// coordinate `offset` inside rank `n`, in Λ² lex coordinates.
pub fn symplectic_class(n: usize, offset: usize, genus: usize) -> Vec<i64> {
    let basis = wedge_basis(n);
    let mut w = vec![0i64; basis.len()];
    for k in 0..genus {
        let (a, b) = (offset + 2 * k, offset + 2 * k + 1);
        let row = basis.iter().position(|&p| p == (a, b)).unwrap();
        w[row] = 1;
    }
    w
}

/// Free quotient of Λ²Zⁿ by the span of the given (primitive, independent)
/// classes: returns (quotient map, section) with quotient ∘ section = id.
pub fn center_quotient(n: usize, omegas: &[Vec<i64>]) -> Result<(IMat, IMat), Nil2Error> {
    let c = n * (n - 1) / 2;
    if omegas.is_empty() {
        return Ok((IMat::identity(c), IMat::identity(c)));
    }
    let mut om = IMat::zeros(c, omegas.len());
    for (j, w) in omegas.iter().enumerate() {
        assert_eq!(w.len(), c);
        for i in 0..c {
            om[(i, j)] = w[i];
        }
    }
    let snf = smith_normal_form(&om);
    for i in 0..omegas.len() {
        if snf.diag(i).abs() != 1 {
            return Err(Nil2Error::TorsionCenter);
        }
    }
    let k = omegas.len();
    // u·om has the identity in its first k rows; the remaining rows of u
    // project onto a complement, with section given by columns of uinv
    let mut q = IMat::zeros(c - k, c);
    let mut s = IMat::zeros(c, c - k);
    for i in 0..c - k {
        for j in 0..c {
            q[(i, j)] = snf.u[(k + i, j)];
            s[(j, i)] = snf.uinv[(j, k + i)];
        }
    }
    Ok((q, s))
}

/// Rank and quotient map of the center [π]₂/[π]₃ of a genus-g surface group:
/// Λ²Z^{2g}/⟨ω⟩, free of rank C(2g,2) − 1.
pub fn surface_center(genus: usize) -> Result<(usize, IMat), Nil2Error> {
    let n = 2 * genus;
    if genus == 0 {
        return Ok((0, IMat::zeros(0, 0)));
    }
    let omega = symplectic_class(n, 0, genus);
    let (q, _s) = center_quotient(n, &[omega])?;
    Ok((q.nrows(), q))
}

impl Nil2Group {
    /// Group with the given abelianization involution, center presented as a
    /// quotient of Λ²Zⁿ by `omegas`, and the involution given by generator
    /// images. Checks all structural invariants.
    pub fn new(
        abelianization: InvolutiveLattice,
        omegas: &[Vec<i64>],
        tau_images: Vec<Nil2Element>,
    ) -> Result<Self, Nil2Error> {
        let n = abelianization.rank();
        Nil2Group::with_corrections(abelianization, omegas, tau_images, &vec![None; n], &[])
    }

    /// Like [`Nil2Group::new`], but with two kinds of central adjustments to
    /// the generator images:
    ///
    /// - `conj[i] = Some(k)` conjugates the image of generator i by an
    ///   element with abelianization k (path transport of a piece's local
    ///   base to the global base point); the central effect is the
    ///   commutator [k, τ(e_i)] and does not depend on the conjugator's own
    ///   central part.
    /// - indices in `solve_for` get their central part ζ solved from
    ///   (1 + τ_c)·ζ = −defect so the induced map squares to the identity;
    ///   needed for gluing generators of the form τ(e) = e + r.
    pub fn with_corrections(
        abelianization: InvolutiveLattice,
        omegas: &[Vec<i64>],
        tau_images: Vec<Nil2Element>,
        conj: &[Option<Vec<i64>>],
        solve_for: &[usize],
    ) -> Result<Self, Nil2Error> {
        let n = abelianization.rank();
        let (q, s) = center_quotient(n, omegas)?;
        let lambda2_tau = lambda2_map(abelianization.tau());
        // the involution must descend to the quotient, acting by −1 on each ω
        for w in omegas {
            let tw = lambda2_tau.mul_vec(w);
            if tw != crate::mat::vec_neg(w) {
                return Err(Nil2Error::OmegaNotAntiInvariant);
            }
        }
        let tau_c = q.mul(&lambda2_tau).mul(&s);
        let center = InvolutiveLattice::new(
            tau_c,
            format!("center({})", abelianization.label()),
        )?;
        let pairing = q.mul(&free_pairing(n));
        let mut group = Nil2Group {
            n,
            abelianization,
            center,
            pairing,
            lambda2_to_center: q,
            tau_images,
        };
        assert_eq!(conj.len(), n);
        for (i, k) in conj.iter().enumerate() {
            if let Some(k) = k {
                let v = group.tau_images[i].v.clone();
                let comm = crate::mat::vec_sub(&group.pair(k, &v), &group.pair(&v, k));
                group.tau_images[i].z = crate::mat::vec_add(&group.tau_images[i].z, &comm);
            }
        }
        for &i in solve_for {
            // with ζ = 0 the double image is (e_i, d); fix ζ from (1+τ_c)ζ = −d
            let bad = group.apply_tau(&group.tau_images[i].clone());
            debug_assert_eq!(bad.v, basis_vec(group.n, i));
            let zeta = solve_central_correction(group.center.tau(), &bad.z)
                .ok_or(Nil2Error::TauNotInvolution(i))?;
            group.tau_images[i].z = zeta;
        }
        group.validate()?;
        Ok(group)
    }

    /// Free π of rank n: center Λ²Zⁿ.
    pub fn free(
        abelianization: InvolutiveLattice,
        tau_images: Vec<Nil2Element>,
    ) -> Result<Self, Nil2Error> {
        Nil2Group::new(abelianization, &[], tau_images)
    }

    fn validate(&self) -> Result<(), Nil2Error> {
        if self.tau_images.len() != self.n {
            return Err(Nil2Error::DimensionMismatch);
        }
        for (i, t) in self.tau_images.iter().enumerate() {
            if t.v.len() != self.n || t.z.len() != self.center.rank() {
                return Err(Nil2Error::DimensionMismatch);
            }
            if t.v != self.abelianization.tau().col(i) {
                return Err(Nil2Error::TauImageInconsistent(i));
            }
        }
        // commutator convention: [s(e_i), s(e_j)] = image of e_i∧e_j
        for (row, &(i, j)) in wedge_basis(self.n).iter().enumerate() {
            let got = self.commutator(&self.section_basis(i), &self.section_basis(j));
            let want = self.lambda2_to_center.col(row);
            debug_assert_eq!(got, want, "pairing convention broken at ({i},{j})");
            if got != want {
                return Err(Nil2Error::DimensionMismatch);
            }
        }
        // order 2 on generators suffices: apply_tau is a homomorphism
        for i in 0..self.n {
            let twice = self.apply_tau(&self.apply_tau(&self.section_basis(i)));
            if twice != self.section_basis(i) {
                return Err(Nil2Error::TauNotInvolution(i));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn abelianization(&self) -> &InvolutiveLattice {
        &self.abelianization
    }

    pub fn center(&self) -> &InvolutiveLattice {
        &self.center
    }

    pub fn tau_images(&self) -> &[Nil2Element] {
        &self.tau_images
    }

    pub fn lambda2_to_center(&self) -> &IMat {
        &self.lambda2_to_center
    }

    pub fn identity(&self) -> Nil2Element {
        Nil2Element::new(vec![0; self.n], vec![0; self.center.rank()])
    }

    pub fn section(&self, v: &[i64]) -> Nil2Element {
        assert_eq!(v.len(), self.n);
        Nil2Element::new(v.to_vec(), vec![0; self.center.rank()])
    }

    fn section_basis(&self, i: usize) -> Nil2Element {
        self.section(&basis_vec(self.n, i))
    }

    pub fn central(&self, z: &[i64]) -> Nil2Element {
        assert_eq!(z.len(), self.center.rank());
        Nil2Element::new(vec![0; self.n], z.to_vec())
    }

    /// ⟨v, w⟩ in center coordinates.
    pub fn pair(&self, v: &[i64], w: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        assert_eq!(w.len(), self.n);
        let mut t = vec![0i64; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                t[i * self.n + j] = v[i] * w[j];
            }
        }
        self.pairing.mul_vec(&t)
    }

    /// Pairing extended bilinearly to rational vectors.
    pub fn pair_q(&self, v: &[Rat], w: &[Rat]) -> Vec<Rat> {
        let mut t = vec![Rat::from_integer(0); self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                t[i * self.n + j] = v[i] * w[j];
            }
        }
        self.pairing.mul_qvec(&t)
    }

    pub fn compose(&self, a: &Nil2Element, b: &Nil2Element) -> Nil2Element {
        assert_eq!(a.v.len(), self.n, "dimension mismatch");
        assert_eq!(b.v.len(), self.n, "dimension mismatch");
        let v = crate::mat::vec_add(&a.v, &b.v);
        let mut z = crate::mat::vec_add(&a.z, &b.z);
        z = crate::mat::vec_add(&z, &self.pair(&a.v, &b.v));
        Nil2Element::new(v, z)
    }

    /// Inverse: (−v, −z + ⟨v,v⟩), verified against the group axiom in tests
    /// rather than assumed (⟨v,v⟩ vanishes for the ordered-word pairing only
    /// on basis vectors).
    pub fn inverse(&self, a: &Nil2Element) -> Nil2Element {
        let v = crate::mat::vec_neg(&a.v);
        let z = crate::mat::vec_add(&crate::mat::vec_neg(&a.z), &self.pair(&a.v, &a.v));
        Nil2Element::new(v, z)
    }

    /// a^k for any integer k: (k·v, k·z + C(k,2)·⟨v,v⟩).
    pub fn power(&self, a: &Nil2Element, k: i64) -> Nil2Element {
        let binom = k * (k - 1) / 2;
        let v = crate::mat::vec_scale(k, &a.v);
        let z = crate::mat::vec_add(
            &crate::mat::vec_scale(k, &a.z),
            &crate::mat::vec_scale(binom, &self.pair(&a.v, &a.v)),
        );
        Nil2Element::new(v, z)
    }

    /// [a, b] in center coordinates; depends only on abelianized parts.
    pub fn commutator(&self, a: &Nil2Element, b: &Nil2Element) -> Vec<i64> {
        crate::mat::vec_sub(&self.pair(&a.v, &b.v), &self.pair(&b.v, &a.v))
    }

    /// Induced involution by word substitution: each generator is replaced by
    /// its image, the central part by τ_center.
    pub fn apply_tau(&self, a: &Nil2Element) -> Nil2Element {
        let mut out = self.identity();
        for (i, t) in self.tau_images.iter().enumerate() {
            if a.v[i] != 0 {
                out = self.compose(&out, &self.power(t, a.v[i]));
            }
        }
        let tz = self.center.tau().mul_vec(&a.z);
        self.compose(&out, &self.central(&tz))
    }

    /// The commutator pairing [−,−]: Λ²(π^ab) → center as a matrix; for the
    /// ordered-word convention this is the center quotient map itself, but it
    /// is derived from commutators of section lifts rather than assumed.
    pub fn commutator_map(&self) -> IMat {
        let basis = wedge_basis(self.n);
        let mut m = IMat::zeros(self.center.rank(), basis.len());
        for (col, &(i, j)) in basis.iter().enumerate() {
            let c = self.commutator(&self.section_basis(i), &self.section_basis(j));
            for (row, val) in c.iter().enumerate() {
                m[(row, col)] = *val;
            }
        }
        m
    }
}

/// Λ² of a linear map on Zⁿ, in lex wedge coordinates.
pub fn lambda2_map(a: &IMat) -> IMat {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    let basis = wedge_basis(n);
    let mut m = IMat::zeros(basis.len(), basis.len());
    for (col, &(i, j)) in basis.iter().enumerate() {
        // A e_i ∧ A e_j
        for (row, &(p, q)) in basis.iter().enumerate() {
            m[(row, col)] = a[(p, i)] * a[(q, j)] - a[(q, i)] * a[(p, j)];
        }
    }
    m
}

/// Solve for a central correction ζ with (1 + τ_c)·ζ = −defect, used when a
/// gluing introduces a generator whose involution image needs a central term
/// to square to the identity.
pub fn solve_central_correction(
    tau_c: &IMat,
    defect: &[i64],
) -> Option<Vec<i64>> {
    let id = IMat::identity(tau_c.nrows());
    solve_integer(&id.add(tau_c), &crate::mat::vec_neg(defect))
}
