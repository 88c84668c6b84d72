//! Lattice-quotient models of the abelian and 2-nilpotent approximations:
//! Alb₁ = (π^ab ⊗ R)/π^ab with the linear involution, Alb₂ = the real
//! 2-nilpotent group modulo its integer points with the affine-quadratic
//! involution σ(v, z) = (τv, τ_c z + h̃(v)), where h̃ interpolates the central
//! part of the involution word at integer points.
//!
//! Everything is exact rational arithmetic; fixed components and lifts are
//! decided by linear algebra modulo the lattice, never by sampling.

use crate::curve::EquivariantPi1Data;
use crate::mat::{basis_vec, kernel_basis, smith_normal_form, vec_add, vec_scale, IMat, Rat};
use crate::nil2::Nil2Group;
use crate::obstruction::{delta2_lift, ObstructionError};
use crate::zcoh::{h1, h2, CohClass};
use serde::Serialize;

fn rzero(n: usize) -> Vec<Rat> {
    vec![Rat::from_integer(0); n]
}

fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x)).collect()
}

fn rat_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn rat_scale(k: Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| k * x).collect()
}

/// Fractional part in [0, 1).
fn frac(x: Rat) -> Rat {
    x - x.floor()
}

#[derive(Clone, Debug)]
pub struct AlbModel {
    pub level: u8,
    nil2: Nil2Group,
    /// h(e_i): central part of the involution word on the i-th generator
    h_gen: Vec<Vec<i64>>,
    /// Δ(e_i, e_j) = h(e_i+e_j) − h(e_i) − h(e_j) for i<j, Δ(e_i,e_i) from 2e_i
    delta: Vec<Vec<Vec<i64>>>,
}

pub fn build_alb(data: &EquivariantPi1Data, level: u8) -> AlbModel {
    assert!(level == 1 || level == 2);
    let g = &data.nil2;
    let n = g.n();
    let h = |v: &[i64]| g.apply_tau(&g.section(v)).z;
    let mut h_gen = Vec::with_capacity(n);
    for i in 0..n {
        h_gen.push(h(&basis_vec(n, i)));
    }
    let mut delta = vec![vec![vec![]; n]; n];
    for i in 0..n {
        for j in i..n {
            let sum = if i == j {
                vec_scale(2, &basis_vec(n, i))
            } else {
                vec_add(&basis_vec(n, i), &basis_vec(n, j))
            };
            let mut d = h(&sum);
            for (k, v) in d.iter_mut().enumerate() {
                *v -= h_gen[i][k] + h_gen[j][k];
            }
            // coefficient bound: ½Δ and h are the quadratic and linear
            // coefficients, so all denominators divide 2 by construction
            delta[i][j] = d;
        }
    }
    AlbModel { level, nil2: g.clone(), h_gen, delta }
}

impl AlbModel {
    pub fn rank(&self) -> usize {
        self.nil2.n()
    }

    pub fn center_rank(&self) -> usize {
        self.nil2.center().rank()
    }

    /// The quadratic interpolation h̃ of the central involution defect:
    /// h̃(v) = Σ vᵢ h(eᵢ) + Σ C(vᵢ,2) Δᵢᵢ + Σ_{i<j} vᵢvⱼ Δᵢⱼ, exact over Q.
    pub fn h_tilde(&self, v: &[Rat]) -> Vec<Rat> {
        let n = self.nil2.n();
        let c = self.nil2.center().rank();
        let half = Rat::new(1, 2);
        let mut out = rzero(c);
        for i in 0..n {
            out = rat_add(&out, &rat_scale(v[i], &to_rat(&self.h_gen[i])));
            let binom = half * v[i] * (v[i] - Rat::from_integer(1));
            out = rat_add(&out, &rat_scale(binom, &to_rat(&self.delta[i][i])));
            for j in i + 1..n {
                out = rat_add(&out, &rat_scale(v[i] * v[j], &to_rat(&self.delta[i][j])));
            }
        }
        out
    }

    /// Level-1 involution on torus coordinates.
    pub fn involution1(&self, v: &[Rat]) -> Vec<Rat> {
        self.nil2.abelianization().tau().mul_qvec(v)
    }

    /// Level-2 involution σ(v, z) = (τv, τ_c z + h̃(v)).
    pub fn involution2(&self, v: &[Rat], z: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let tv = self.involution1(v);
        let tz = rat_add(&self.nil2.center().tau().mul_qvec(z), &self.h_tilde(v));
        (tv, tz)
    }

    /// σ² = id exactly (checked at rational sample points in tests); the
    /// level-2 map covers the level-1 map by construction.
    pub fn check_involution(&self, samples: &[(Vec<Rat>, Vec<Rat>)]) -> bool {
        samples.iter().all(|(v, z)| {
            let (tv, tz) = self.involution2(v, z);
            let (ttv, ttz) = self.involution2(&tv, &tz);
            ttv == *v && ttz == *z
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedComponent {
    pub level: u8,
    /// representative point on the torus, coordinates in [0, 1)
    pub point: Vec<Rat>,
    /// integer cocycle whose H¹ class indexes the component
    pub class_rep: Vec<i64>,
}

/// Fixed components of the level-1 torus. A point v is fixed iff
/// m = (τ−I)v is integral; m is a 1-cocycle constant on each component, and
/// components biject with H¹(G, π^ab). Representative: v = m/2.
pub fn fixed_components_alb1(
    data: &EquivariantPi1Data,
    model: &AlbModel,
) -> Result<Vec<FixedComponent>, ObstructionError> {
    assert_eq!(model.level, 1);
    let g = h1(&data.abelianization);
    let mut out = Vec::new();
    for class in g.enumerate()? {
        let m = class.rep().to_vec();
        let point: Vec<Rat> = m.iter().map(|&x| frac(Rat::new(x, 2))).collect();
        out.push(FixedComponent { level: 1, point, class_rep: m });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftResult {
    pub lifts: bool,
    /// fixed point (v, z) of the level-2 involution over the component
    pub witness: Option<Vec<Rat>>,
    /// translation part of the fiber action when no fixed point exists,
    /// as a full level-2 vector (0, …, 0, t)
    pub obstruction: Option<Vec<Rat>>,
}

/// Decide whether a level-1 fixed component lifts to a fixed point of the
/// level-2 involution. The fiber over the representative p carries the
/// affine action F(z) = τ_c z + t with t = h̃(p) + ⟨p − τp, τp⟩; a fixed
/// point exists iff (τ_c − I)z ≡ −t mod Z^c is solvable, decided by Smith
/// normal form.
pub fn lifts_to_alb2(model2: &AlbModel, fc: &FixedComponent) -> LiftResult {
    assert_eq!(model2.level, 2);
    let g = &model2.nil2;
    let c = g.center().rank();
    let p = fc.point.clone();
    let tp = model2.involution1(&p);
    let diff: Vec<Rat> = p.iter().zip(&tp).map(|(a, b)| a - b).collect();
    let cross = g.pair_q(&diff, &tp);
    let t = rat_add(&model2.h_tilde(&p), &cross);

    let tau_c = g.center().tau();
    let m = tau_c.sub(&IMat::identity(c));
    let snf = smith_normal_form(&m);
    // w = U·(−t); solvable iff w is integral on the rows where D vanishes
    let neg_t: Vec<Rat> = t.iter().map(|x| -x).collect();
    let w = snf.u.mul_qvec(&neg_t);
    let mut ok = true;
    for i in 0..c {
        if snf.diag(i) == 0 && !w[i].is_integer() {
            ok = false;
        }
    }
    if ok {
        // y_i = w_i/d_i on the invertible part, 0 on the rest; z = V·y
        let mut y = rzero(c);
        for i in 0..c {
            let d = snf.diag(i);
            if d != 0 {
                y[i] = w[i] / Rat::from_integer(d);
            }
        }
        let z = snf.v.mul_qvec(&y);
        let mut witness = p;
        witness.extend(z.into_iter().map(frac));
        LiftResult { lifts: true, witness: Some(witness), obstruction: None }
    } else {
        let mut obstruction = rzero(g.n());
        obstruction.extend(t.into_iter().map(frac));
        LiftResult { lifts: false, witness: None, obstruction: Some(obstruction) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconcileRow {
    pub class_rep: Vec<i64>,
    pub point: Vec<Rat>,
    pub lifts: bool,
    pub in_kernel: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconcileReport {
    pub rows: Vec<ReconcileRow>,
    pub pass: bool,
}

/// Geometric/cohomological reconciliation: a fixed component lifts to Alb₂
/// iff its H¹ class lies in Ker δ₂.
pub fn reconcile_with_delta2(
    data: &EquivariantPi1Data,
    model1: &AlbModel,
    model2: &AlbModel,
) -> Result<ReconcileReport, ObstructionError> {
    let h2c = h2(data.nil2.center());
    let mut rows = Vec::new();
    let mut pass = true;
    for fc in fixed_components_alb1(data, model1)? {
        let class = CohClass::new(1, fc.class_rep.clone(), &data.abelianization)?;
        let in_kernel = h2c.is_zero_class(&delta2_lift(data, &class)?)?;
        let lifts = lifts_to_alb2(model2, &fc).lifts;
        if lifts != in_kernel {
            pass = false;
        }
        rows.push(ReconcileRow {
            class_rep: fc.class_rep.clone(),
            point: fc.point.clone(),
            lifts,
            in_kernel,
        });
    }
    Ok(ReconcileReport { rows, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct PlotData {
    pub level: u8,
    pub rank: usize,
    /// vertices of the unit-cube fundamental domain
    pub cube_vertices: Vec<Vec<i64>>,
    /// index pairs of cube edges
    pub cube_edges: Vec<(usize, usize)>,
    /// one entry per fixed component: base point plus spanning directions
    pub fixed_loci: Vec<FixedLocus>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedLocus {
    pub point: Vec<Rat>,
    pub directions: Vec<Vec<i64>>,
}

/// Vertex/edge data of the level-1 fundamental domain and its fixed loci,
/// for external plotting.
pub fn plot_data(
    data: &EquivariantPi1Data,
    model: &AlbModel,
) -> Result<PlotData, ObstructionError> {
    assert_eq!(model.level, 1);
    let n = data.abelianization.rank();
    assert!(n <= 12, "plot data only emitted for small ranks");
    let verts: Vec<Vec<i64>> = (0..1usize << n)
        .map(|b| (0..n).map(|i| (b >> i & 1) as i64).collect())
        .collect();
    let mut edges = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        for (j, w) in verts.iter().enumerate().skip(i + 1) {
            let diff: i64 = v.iter().zip(w).map(|(a, b)| (a - b).abs()).sum();
            if diff == 1 {
                edges.push((i, j));
            }
        }
    }
    let fixed_dirs = kernel_basis(
        &data
            .abelianization
            .tau()
            .sub(&IMat::identity(n)),
    );
    let directions: Vec<Vec<i64>> = (0..fixed_dirs.ncols()).map(|j| fixed_dirs.col(j)).collect();
    let mut fixed_loci = Vec::new();
    for fc in fixed_components_alb1(data, model)? {
        fixed_loci.push(FixedLocus {
            point: fc.point.clone(),
            directions: directions.clone(),
        });
    }
    Ok(PlotData {
        level: 1,
        rank: n,
        cube_vertices: verts,
        cube_edges: edges,
        fixed_loci,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build, ComponentRef, CurveSpec, PieceModel, SmoothPiece};
    use crate::obstruction::kernel_delta2;

    fn single(model: PieceModel) -> EquivariantPi1Data {
        build(&CurveSpec {
            pieces: vec![SmoothPiece { label: None, model }],
            gluings: vec![],
            base: ComponentRef { piece: 0, oval: 0 },
        })
        .unwrap()
    }

    fn p1m3() -> EquivariantPi1Data {
        single(PieceModel::PuncturedP1Real { punctures: 3 })
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn golden_involutions() {
        let data = p1m3();
        let m1 = build_alb(&data, 1);
        let m2 = build_alb(&data, 2);
        let v = vec![r(1, 2), r(1, 3)];
        assert_eq!(m1.involution1(&v), vec![r(-1, 2), r(-1, 3)]);
        // (a₁, a₂, a₁₂) ↦ (−a₁, −a₂, a₁₂): the central defect vanishes
        let (tv, tz) = m2.involution2(&v, &[r(5, 7)]);
        assert_eq!(tv, vec![r(-1, 2), r(-1, 3)]);
        assert_eq!(tz, vec![r(5, 7)]);
    }

    #[test]
    fn involution_squares_to_identity() {
        for data in [
            p1m3(),
            single(PieceModel::PuncturedP1Real { punctures: 4 }),
            single(PieceModel::Genus2ThreeOvals),
            single(PieceModel::EllipticOneOval),
        ] {
            let m2 = build_alb(&data, 2);
            let n = data.abelianization.rank();
            let c = data.nil2.center().rank();
            let mut samples = Vec::new();
            for k in 0..20i64 {
                let v: Vec<Rat> = (0..n).map(|i| r((k * 3 + i as i64) % 7 - 3, 2)).collect();
                let z: Vec<Rat> = (0..c).map(|i| r((k + i as i64) % 5 - 2, 2)).collect();
                samples.push((v, z));
            }
            assert!(m2.check_involution(&samples));
        }
    }

    #[test]
    fn trivial_tau_identity_involution() {
        let data = single(PieceModel::PuncturedP1ConjPair);
        let m1 = build_alb(&data, 1);
        let v = vec![r(2, 3)];
        assert_eq!(m1.involution1(&v), v);
        let fcs = fixed_components_alb1(&data, &m1).unwrap();
        assert_eq!(fcs.len(), 1);
    }

    #[test]
    fn golden_fixed_components() {
        let data = p1m3();
        let m1 = build_alb(&data, 1);
        let fcs = fixed_components_alb1(&data, &m1).unwrap();
        assert_eq!(fcs.len(), 4);
        let mut points: Vec<Vec<Rat>> = fcs.iter().map(|f| f.point.clone()).collect();
        points.sort();
        assert_eq!(
            points,
            vec![
                vec![r(0, 1), r(0, 1)],
                vec![r(0, 1), r(1, 2)],
                vec![r(1, 2), r(0, 1)],
                vec![r(1, 2), r(1, 2)],
            ]
        );
    }

    #[test]
    fn diag_tau_two_circles() {
        let data = single(PieceModel::EllipticTwoOvals);
        let m1 = build_alb(&data, 1);
        let fcs = fixed_components_alb1(&data, &m1).unwrap();
        assert_eq!(fcs.len(), 2);
    }

    #[test]
    fn golden_lifts() {
        let data = p1m3();
        let m1 = build_alb(&data, 1);
        let m2 = build_alb(&data, 2);
        let fcs = fixed_components_alb1(&data, &m1).unwrap();
        let mut lifted = 0;
        for fc in &fcs {
            let res = lifts_to_alb2(&m2, fc);
            if fc.point == vec![r(1, 2), r(1, 2)] {
                assert!(!res.lifts);
                // the obstructing fiber translation over (1/2, 1/2)
                assert_eq!(res.obstruction, Some(vec![r(0, 1), r(0, 1), r(1, 2)]));
            } else {
                assert!(res.lifts, "component at {:?} must lift", fc.point);
                let w = res.witness.unwrap();
                // witness is an actual fixed point modulo the lattice
                let (tv, tz) = m2.involution2(&w[..2].to_vec(), &w[2..].to_vec());
                let back: Vec<Rat> = tv
                    .iter()
                    .chain(tz.iter())
                    .zip(w.iter())
                    .map(|(a, b)| a - b)
                    .collect();
                assert!(back.iter().all(|x| x.is_integer()));
            }
            if res.lifts {
                lifted += 1;
            }
        }
        assert_eq!(lifted, 3);
    }

    #[test]
    fn reconcile_examples() {
        for data in [
            p1m3(),
            single(PieceModel::PuncturedP1Real { punctures: 4 }),
            single(PieceModel::EllipticTwoOvals),
            single(PieceModel::Genus2ThreeOvals),
        ] {
            let m1 = build_alb(&data, 1);
            let m2 = build_alb(&data, 2);
            let report = reconcile_with_delta2(&data, &m1, &m2).unwrap();
            assert!(report.pass);
            let kernel = kernel_delta2(&data).unwrap();
            let lifted = report.rows.iter().filter(|r| r.lifts).count();
            assert_eq!(lifted, kernel.len());
        }
    }

    #[test]
    fn rank3_lifts_half() {
        let data = single(PieceModel::PuncturedP1Real { punctures: 4 });
        let m1 = build_alb(&data, 1);
        let m2 = build_alb(&data, 2);
        let fcs = fixed_components_alb1(&data, &m1).unwrap();
        assert_eq!(fcs.len(), 8);
        let lifted = fcs.iter().filter(|f| lifts_to_alb2(&m2, f).lifts).count();
        assert_eq!(lifted, 4);
    }

    #[test]
    fn plot_data_shape() {
        let data = p1m3();
        let m1 = build_alb(&data, 1);
        let pd = plot_data(&data, &m1).unwrap();
        assert_eq!(pd.cube_vertices.len(), 4);
        assert_eq!(pd.cube_edges.len(), 4);
        assert_eq!(pd.fixed_loci.len(), 4);
        // τ = −I: fixed loci are isolated points
        assert!(pd.fixed_loci.iter().all(|l| l.directions.is_empty()));
        serde_json::to_string(&pd).unwrap();
    }
}
