//! The obstruction δ₂ to lifting a section class from the abelian level to
//! the 2-nilpotent level, computed by two independent routes, plus the
//! kernel identity Ker δ₂ = Im κ^ab.

use crate::curve::{verify_unit_adjunction, CurveError, EquivariantPi1Data};
use crate::mat::{solve_integer, vec_neg, IMat};
use crate::zcoh::{
    class_label, cup_h1_h1, h1, h2, pushforward, wedge_quotient_map, CohClass, ZcohError,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObstructionError {
    #[error("kappa basis unavailable, only the lift route applies: {0}")]
    BasisUnavailable(String),
    #[error("class does not lie in the kappa span")]
    NotInKappaSpan,
    #[error(transparent)]
    Coh(#[from] ZcohError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// δ₂ through the extension: lift the cocycle representative to the
/// 2-nilpotent group and take the central part of c(τ,τ) = γ̃ ∘ τ(γ̃).
pub fn delta2_lift(
    data: &EquivariantPi1Data,
    x: &CohClass,
) -> Result<CohClass, ObstructionError> {
    assert_eq!(x.degree(), 1);
    let g = &data.nil2;
    let lift = g.section(x.rep());
    let c = g.compose(&lift, &g.apply_tau(&lift));
    debug_assert!(c.v.iter().all(|&v| v == 0), "cocycle condition broken");
    Ok(CohClass::new(2, c.z, g.center())?)
}

/// The commutator pushforward π^ab ⊗ π^ab → center, e_i⊗e_j ↦ [s(e_i), s(e_j)].
fn tensor_to_center(data: &EquivariantPi1Data) -> IMat {
    let n = data.abelianization.rank();
    data.nil2.commutator_map().mul(&wedge_quotient_map(n))
}

/// δ₂ through the Zarkhin expansion: write x in the κ^ab basis, where δ₂
/// vanishes term by term, and sum the pairwise commutator-pushed cup products.
pub fn delta2_zarkhin(
    data: &EquivariantPi1Data,
    x: &CohClass,
) -> Result<CohClass, ObstructionError> {
    let adj = verify_unit_adjunction(data)?;
    if let Some(reason) = &adj.skipped {
        return Err(ObstructionError::BasisUnavailable(reason.clone()));
    }
    if !adj.pass() {
        return Err(ObstructionError::BasisUnavailable(
            adj.witnesses.join("; "),
        ));
    }
    let g = h1(&data.abelianization);
    let basis = &data.kappa_classes[1..];
    let cols: Vec<Vec<i64>> = basis
        .iter()
        .map(|c| g.coords(c))
        .collect::<Result<_, _>>()?;
    let target = g.coords(x)?;
    let expansion = f2_solve(&cols, &target).ok_or(ObstructionError::NotInKappaSpan)?;
    let f = tensor_to_center(data);
    let mut acc = CohClass::zero(2, data.nil2.center());
    for i in 0..basis.len() {
        if expansion[i] == 0 {
            continue;
        }
        for (j, &e) in expansion.iter().enumerate().skip(i + 1) {
            if e == 0 {
                continue;
            }
            let cup = cup_h1_h1(&basis[i], &basis[j])?;
            let pushed = pushforward(&f, data.nil2.center(), &cup)?;
            acc = acc.add(&pushed)?;
        }
    }
    Ok(acc)
}

/// Solve Σ cᵢ·colᵢ = target over F₂.
fn f2_solve(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let rows = target.len();
    let n = cols.len();
    // augmented matrix [cols | target] mod 2
    let mut m: Vec<Vec<i64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<i64> = cols.iter().map(|c| c[r].rem_euclid(2)).collect();
            row.push(target[r].rem_euclid(2));
            row
        })
        .collect();
    let mut pivot_of = vec![None; n];
    let mut rank = 0;
    for c in 0..n {
        if let Some(p) = (rank..rows).find(|&r| m[r][c] == 1) {
            m.swap(rank, p);
            for r in 0..rows {
                if r != rank && m[r][c] == 1 {
                    for k in 0..=n {
                        m[r][k] = (m[r][k] + m[rank][k]) % 2;
                    }
                }
            }
            pivot_of[c] = Some(rank);
            rank += 1;
        }
    }
    // inconsistent if a zero row has target 1
    for r in rank..rows {
        if m[r][n] == 1 {
            return None;
        }
    }
    let mut sol = vec![0i64; n];
    for (c, p) in pivot_of.iter().enumerate() {
        if let Some(r) = p {
            sol[c] = m[*r][n];
        }
    }
    Some(sol)
}

/// All H¹ classes with vanishing δ₂.
pub fn kernel_delta2(
    data: &EquivariantPi1Data,
) -> Result<Vec<CohClass>, ObstructionError> {
    let g = h1(&data.abelianization);
    let h2c = h2(data.nil2.center());
    let mut out = Vec::new();
    for x in g.enumerate()? {
        let d = delta2_lift(data, &x)?;
        if h2c.is_zero_class(&d)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Independent restatement of δ₂-vanishing: the integer system
/// (1 + τ_c)·z = −c(τ,τ) is solvable iff the class dies in H².
pub fn solvability_oracle(
    data: &EquivariantPi1Data,
    x: &CohClass,
) -> Result<bool, ObstructionError> {
    let g = &data.nil2;
    let lift = g.section(x.rep());
    let c = g.compose(&lift, &g.apply_tau(&lift));
    let tau_c = g.center().tau();
    let a = IMat::identity(tau_c.nrows()).add(tau_c);
    Ok(solve_integer(&a, &vec_neg(&c.z)).is_some())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub label: String,
    pub coords: Vec<i64>,
    pub delta2_lift: Vec<i64>,
    pub delta2_zarkhin: Option<Vec<i64>>,
    pub in_kernel: bool,
    pub realized: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub rows: Vec<ClassRow>,
    pub kernel_size: usize,
    pub image_size: usize,
    pub verdict: Verdict,
}

/// Per-class table of both δ₂ routes and the verdict on Ker δ₂ = Im κ^ab.
pub fn verify_main_theorem(
    data: &EquivariantPi1Data,
) -> Result<ObstructionReport, ObstructionError> {
    let g = h1(&data.abelianization);
    let h2c = h2(data.nil2.center());
    let kappa_coords: Vec<Vec<i64>> = data
        .kappa_classes
        .iter()
        .map(|c| g.coords(c))
        .collect::<Result<_, _>>()?;
    let zarkhin_usable = data.hypothesis_ok && verify_unit_adjunction(data)?.pass();
    let mut rows = Vec::new();
    let mut kernel_size = 0;
    for x in g.enumerate()? {
        let coords = g.coords(&x)?;
        let lift = delta2_lift(data, &x)?;
        let lift_coords = h2c.coords(&lift)?;
        let zarkhin = if zarkhin_usable {
            let z = delta2_zarkhin(data, &x)?;
            Some(h2c.coords(&z)?)
        } else {
            None
        };
        let in_kernel = lift_coords.iter().all(|&v| v == 0);
        if in_kernel {
            kernel_size += 1;
        }
        let realized = kappa_coords.contains(&coords);
        rows.push(ClassRow {
            label: class_label(&coords),
            coords,
            delta2_lift: lift_coords,
            delta2_zarkhin: zarkhin,
            in_kernel,
            realized,
        });
    }
    let mut image: Vec<&Vec<i64>> = kappa_coords.iter().collect();
    image.sort();
    image.dedup();
    let image_size = image.len();
    let kernel_eq_image = rows.iter().all(|r| r.in_kernel == r.realized);
    let verdict = if !data.hypothesis_ok {
        Verdict::HypothesisNotMet
    } else if kernel_eq_image {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ObstructionReport { rows, kernel_size, image_size, verdict })
}

/// The lemma that the commutator pushforward
/// H²(G, Λ²π^ab) → H²(G, center) is injective: exhaustive kernel check on
/// the finite H² groups.
pub fn check_pushforward_injective(
    data: &EquivariantPi1Data,
) -> Result<bool, ObstructionError> {
    let wedge = data.abelianization.wedge_square();
    let h2w = h2(&wedge);
    let h2c = h2(data.nil2.center());
    let f = data.nil2.commutator_map();
    for c in h2w.enumerate()? {
        let pushed = pushforward(&f, data.nil2.center(), &c)?;
        if h2c.is_zero_class(&pushed)? && !h2w.is_zero_class(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build, ComponentRef, CurveSpec, NodeGluing, PieceModel, SmoothPiece};
    use crate::mat::vec_add;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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

    #[test]
    fn golden_delta2_values() {
        let data = p1m3();
        let m = &data.abelianization;
        let h2c = h2(data.nil2.center());
        let zero = CohClass::zero(1, m);
        assert!(h2c.is_zero_class(&delta2_lift(&data, &zero).unwrap()).unwrap());
        let e1 = CohClass::new(1, vec![1, 0], m).unwrap();
        let e2 = CohClass::new(1, vec![0, 1], m).unwrap();
        assert!(h2c.is_zero_class(&delta2_lift(&data, &e1).unwrap()).unwrap());
        assert!(h2c.is_zero_class(&delta2_lift(&data, &e2).unwrap()).unwrap());
        let e12 = e1.add(&e2).unwrap();
        assert!(!h2c.is_zero_class(&delta2_lift(&data, &e12).unwrap()).unwrap());
    }

    #[test]
    fn golden_kernel() {
        let data = p1m3();
        let kernel = kernel_delta2(&data).unwrap();
        assert_eq!(kernel.len(), 3);
        let report = verify_main_theorem(&data).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.kernel_size, 3);
        assert_eq!(report.image_size, 3);
        for row in &report.rows {
            assert_eq!(Some(&row.delta2_lift), row.delta2_zarkhin.as_ref());
        }
    }

    #[test]
    fn center_rank_zero_kernel_is_everything() {
        let data = single(PieceModel::EllipticTwoOvals);
        assert_eq!(data.nil2.center().rank(), 0);
        let kernel = kernel_delta2(&data).unwrap();
        assert_eq!(kernel.len(), 2);
        assert_eq!(verify_main_theorem(&data).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn rank3_kernel_is_half() {
        let data = single(PieceModel::PuncturedP1Real { punctures: 4 });
        let kernel = kernel_delta2(&data).unwrap();
        assert_eq!(kernel.len(), 4);
        let g = h1(&data.abelianization);
        let labels: Vec<String> = kernel
            .iter()
            .map(|c| class_label(&g.coords(c).unwrap()))
            .collect();
        let mut labels = labels;
        labels.sort();
        assert_eq!(labels, vec!["0", "e1", "e2", "e3"]);
        assert_eq!(verify_main_theorem(&data).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn zarkhin_identity_without_basis_assumption() {
        // δ₂(x+y) − δ₂(x) − δ₂(y) = [−,−]_*(x ∪ y) for the lift route alone
        for data in [
            p1m3(),
            single(PieceModel::PuncturedP1Real { punctures: 4 }),
            single(PieceModel::Genus2ThreeOvals),
        ] {
            let g = h1(&data.abelianization);
            let h2c = h2(data.nil2.center());
            let f = tensor_to_center(&data);
            let classes = g.enumerate().unwrap();
            for x in &classes {
                for y in &classes {
                    let lhs = delta2_lift(&data, &x.add(y).unwrap()).unwrap();
                    let dx = delta2_lift(&data, x).unwrap();
                    let dy = delta2_lift(&data, y).unwrap();
                    let cup = cup_h1_h1(x, y).unwrap();
                    let cross = pushforward(&f, data.nil2.center(), &cup).unwrap();
                    let rhs = dx.add(&dy).unwrap().add(&cross).unwrap();
                    assert!(h2c.classes_equal(&lhs, &rhs).unwrap());
                }
            }
        }
    }

    #[test]
    fn route_agreement() {
        for data in [
            p1m3(),
            single(PieceModel::PuncturedP1Real { punctures: 5 }),
            single(PieceModel::Genus2ThreeOvals),
        ] {
            let g = h1(&data.abelianization);
            let h2c = h2(data.nil2.center());
            for x in g.enumerate().unwrap() {
                let a = delta2_lift(&data, &x).unwrap();
                let b = delta2_zarkhin(&data, &x).unwrap();
                assert!(h2c.classes_equal(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn representative_independence() {
        let data = single(PieceModel::PuncturedP1Real { punctures: 4 });
        let m = &data.abelianization;
        let g = h1(m);
        let h2c = h2(data.nil2.center());
        let id = IMat::identity(m.rank());
        let cob = m.tau().sub(&id);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x in g.enumerate().unwrap() {
            let base = delta2_lift(&data, &x).unwrap();
            for _ in 0..10 {
                let w: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(-3..=3)).collect();
                let rep = vec_add(x.rep(), &cob.mul_vec(&w));
                let shifted = CohClass::new(1, rep, m).unwrap();
                let d = delta2_lift(&data, &shifted).unwrap();
                assert!(h2c.classes_equal(&base, &d).unwrap());
            }
        }
    }

    #[test]
    fn oracle_agrees() {
        for data in [
            p1m3(),
            single(PieceModel::PuncturedP1Real { punctures: 4 }),
            single(PieceModel::EllipticTwoOvals),
            single(PieceModel::Genus2ThreeOvals),
        ] {
            let g = h1(&data.abelianization);
            let h2c = h2(data.nil2.center());
            for x in g.enumerate().unwrap() {
                let vanishes = h2c
                    .is_zero_class(&delta2_lift(&data, &x).unwrap())
                    .unwrap();
                assert_eq!(vanishes, solvability_oracle(&data, &x).unwrap());
            }
        }
    }

    #[test]
    fn pushforward_injectivity() {
        for data in [
            p1m3(),
            single(PieceModel::Genus2ThreeOvals),
            single(PieceModel::Genus2OneOval),
            single(PieceModel::EllipticTwoOvals),
        ] {
            assert!(check_pushforward_injective(&data).unwrap());
        }
    }

    #[test]
    fn hypothesis_gate_reported() {
        let data = build(&CurveSpec {
            pieces: vec![
                SmoothPiece {
                    label: None,
                    model: PieceModel::PuncturedP1Real { punctures: 3 },
                },
                SmoothPiece {
                    label: None,
                    model: PieceModel::ConicNoRealPoints,
                },
            ],
            gluings: vec![NodeGluing::WedgeConj { piece_a: 0, piece_b: 1 }],
            base: ComponentRef { piece: 0, oval: 0 },
        })
        .unwrap();
        let report = verify_main_theorem(&data).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(!report.rows.is_empty());
        assert!(matches!(
            delta2_zarkhin(&data, &CohClass::zero(1, &data.abelianization)),
            Err(ObstructionError::BasisUnavailable(_))
        ));
    }
}
