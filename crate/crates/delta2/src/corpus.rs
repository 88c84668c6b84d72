//! Deterministic random generator of valid curve specs for the property
//! suites. Every emitted spec is connected, equivariant by construction,
//! satisfies the main-theorem hypotheses, and keeps the abelianization rank
//! small enough for exhaustive class enumeration.

use crate::curve::{ComponentRef, CurveSpec, NodeGluing, PieceModel, SmoothPiece};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANK_BUDGET: usize = 6;

fn model_rank(m: &PieceModel) -> usize {
    match m {
        PieceModel::PuncturedP1Real { punctures } => punctures - 1,
        PieceModel::PuncturedP1ConjPair => 1,
        PieceModel::EllipticTwoOvals | PieceModel::EllipticOneOval => 2,
        PieceModel::Genus2ThreeOvals | PieceModel::Genus2OneOval => 4,
        _ => unreachable!("generator only draws presets"),
    }
}

fn model_ovals(m: &PieceModel) -> usize {
    match m {
        PieceModel::PuncturedP1Real { punctures } => *punctures,
        PieceModel::PuncturedP1ConjPair => 1,
        PieceModel::EllipticTwoOvals => 2,
        PieceModel::EllipticOneOval => 1,
        PieceModel::Genus2ThreeOvals => 3,
        PieceModel::Genus2OneOval => 1,
        _ => unreachable!("generator only draws presets"),
    }
}

fn draw_model(rng: &mut ChaCha8Rng, budget: usize) -> Option<PieceModel> {
    let mut pool = Vec::new();
    for k in 2..=5usize {
        if k - 1 <= budget {
            pool.push(PieceModel::PuncturedP1Real { punctures: k });
        }
    }
    if budget >= 1 {
        pool.push(PieceModel::PuncturedP1ConjPair);
    }
    if budget >= 2 {
        pool.push(PieceModel::EllipticTwoOvals);
        pool.push(PieceModel::EllipticOneOval);
    }
    if budget >= 4 {
        pool.push(PieceModel::Genus2ThreeOvals);
        pool.push(PieceModel::Genus2OneOval);
    }
    if pool.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..pool.len());
    Some(pool.swap_remove(i))
}

/// One random valid spec.
pub fn generate_one(rng: &mut ChaCha8Rng) -> CurveSpec {
    let mut budget = RANK_BUDGET;
    let mut pieces = Vec::new();
    let first = draw_model(rng, budget).unwrap();
    budget -= model_rank(&first);
    pieces.push(first);
    let mut gluings = Vec::new();
    // optionally attach a second piece
    if budget >= 2 && rng.gen_bool(0.5) {
        let conj = rng.gen_bool(0.3);
        let wedge_cost = usize::from(conj);
        if let Some(m) = draw_model(rng, budget - wedge_cost) {
            budget -= model_rank(&m) + wedge_cost;
            let b = pieces.len();
            if conj {
                gluings.push(NodeGluing::WedgeConj { piece_a: 0, piece_b: b });
            } else {
                let oval_a = rng.gen_range(0..model_ovals(&pieces[0]));
                let oval_b = rng.gen_range(0..model_ovals(&m));
                gluings.push(NodeGluing::WedgeReal {
                    piece_a: 0,
                    oval_a,
                    piece_b: b,
                    oval_b,
                });
            }
            pieces.push(m);
        }
    }
    // node identifications on the connected space
    for _ in 0..rng.gen_range(0..=2) {
        match rng.gen_range(0..3) {
            0 if budget >= 2 => {
                gluings.push(NodeGluing::IdentifyConjPairs {});
                budget -= 2;
            }
            1 if budget >= 1 => {
                gluings.push(NodeGluing::PinchConjPair { path: None });
                budget -= 1;
            }
            2 if budget >= 1 => {
                let pa = rng.gen_range(0..pieces.len());
                let pb = rng.gen_range(0..pieces.len());
                gluings.push(NodeGluing::IdentifyReal {
                    comp_a: ComponentRef {
                        piece: pa,
                        oval: rng.gen_range(0..model_ovals(&pieces[pa])),
                    },
                    comp_b: ComponentRef {
                        piece: pb,
                        oval: rng.gen_range(0..model_ovals(&pieces[pb])),
                    },
                    path: None,
                });
                budget -= 1;
            }
            _ => {}
        }
    }
    let base_oval = rng.gen_range(0..model_ovals(&pieces[0]));
    CurveSpec {
        pieces: pieces
            .into_iter()
            .map(|model| SmoothPiece { label: None, model })
            .collect(),
        gluings,
        base: ComponentRef { piece: 0, oval: base_oval },
    }
}

/// Deterministic corpus for a seed.
pub fn generate(seed: u64, size: usize) -> Vec<CurveSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| generate_one(&mut rng)).collect()
}
