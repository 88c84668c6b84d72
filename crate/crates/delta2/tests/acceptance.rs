//! Acceptance suite. Each test checks one release criterion and prints a
//! single pass line; any assertion failure fails the build.

use delta2::alb::{build_alb, fixed_components_alb1, lifts_to_alb2, reconcile_with_delta2};
use delta2::corpus;
use delta2::curve::{
    build, verify_unit_adjunction, ComponentRef, CurveSpec, NodeGluing, PieceModel, SmoothPiece,
};
use delta2::mat::{smith_normal_form, IMat, Rat};
use delta2::nil2::{Nil2Element, Nil2Group};
use delta2::obstruction::{
    check_pushforward_injective, delta2_lift, delta2_zarkhin, verify_main_theorem, Verdict,
};
use delta2::zcoh::{
    brute_force_class_count, cup_h1_h1, h1, h2, pushforward, wedge_quotient_map,
    InvolutiveLattice,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn single(model: PieceModel) -> CurveSpec {
    CurveSpec {
        pieces: vec![SmoothPiece { label: None, model }],
        gluings: vec![],
        base: ComponentRef { piece: 0, oval: 0 },
    }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[test]
fn criterion_1_golden_example() {
    let start = Instant::now();
    let data = build(&single(PieceModel::PuncturedP1Real { punctures: 3 })).unwrap();
    assert_eq!(data.pi0_real().len(), 3);
    assert_eq!(h1(&data.abelianization).invariant_factors(), &[2, 2]);

    let report = verify_main_theorem(&data).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert_eq!(report.kernel_size, 3);
    assert_eq!(report.image_size, 3);

    let m1 = build_alb(&data, 1);
    let m2 = build_alb(&data, 2);
    let fcs = fixed_components_alb1(&data, &m1).unwrap();
    assert_eq!(fcs.len(), 4);
    for fc in &fcs {
        // every fixed component sits at a 2-torsion point
        assert!(fc.point.iter().all(|x| *x == r(0, 1) || *x == r(1, 2)));
    }
    let mut lifted = 0;
    for fc in &fcs {
        let res = lifts_to_alb2(&m2, fc);
        if res.lifts {
            lifted += 1;
        } else {
            assert_eq!(fc.point, vec![r(1, 2), r(1, 2)]);
            assert_eq!(res.obstruction, Some(vec![r(0, 1), r(0, 1), r(1, 2)]));
        }
    }
    assert_eq!(lifted, 3);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 (golden example): PASS");
}

#[test]
fn criterion_2_route_agreement() {
    let start = Instant::now();
    let specs = corpus::generate(2, 50);
    assert!(specs.len() >= 50);
    for spec in &specs {
        let data = build(spec).unwrap();
        let n = data.abelianization.rank();
        assert!(n <= 6);
        let g = h1(&data.abelianization);
        let h2c = h2(data.nil2.center());
        let f = data.nil2.commutator_map().mul(&wedge_quotient_map(n));
        let classes = g.enumerate().unwrap();
        let lifts: Vec<_> = classes
            .iter()
            .map(|x| delta2_lift(&data, x).unwrap())
            .collect();
        for (x, dx) in classes.iter().zip(&lifts) {
            let z = delta2_zarkhin(&data, x).unwrap();
            assert!(h2c.classes_equal(dx, &z).unwrap());
        }
        for (i, x) in classes.iter().enumerate() {
            for (j, y) in classes.iter().enumerate() {
                let lhs = delta2_lift(&data, &x.add(y).unwrap()).unwrap();
                let cup = cup_h1_h1(x, y).unwrap();
                let cross = pushforward(&f, data.nil2.center(), &cup).unwrap();
                let rhs = lifts[i].add(&lifts[j]).unwrap().add(&cross).unwrap();
                assert!(h2c.classes_equal(&lhs, &rhs).unwrap());
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (route agreement, {} specs): PASS", specs.len());
}

#[test]
fn criterion_3_main_theorem_on_corpus() {
    let specs = corpus::generate(3, 50);
    for spec in &specs {
        let data = build(spec).unwrap();
        assert!(data.hypothesis_ok);
        let report = verify_main_theorem(&data).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "spec {spec:?}");
    }
    println!("ACCEPTANCE 3 (kernel = image on {} specs): PASS", specs.len());
}

/// F2 row rank.
fn f2_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|row| row.iter().map(|x| x.rem_euclid(2)).collect())
        .collect();
    let cols = m.first().map_or(0, |row| row.len());
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..m.len()).find(|&i| m[i][c] == 1) {
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && m[i][c] == 1 {
                    for k in 0..cols {
                        m[i][k] = (m[i][k] + m[rank][k]) % 2;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// The map induced by the cup product on the exterior square of H1 lands in
/// H2 of the wedge square with trivial kernel.
fn cup_wedge_injective(m: &InvolutiveLattice) -> bool {
    let g = h1(m);
    let wedge = m.wedge_square();
    let h2w = h2(&wedge);
    let q = wedge_quotient_map(m.rank());
    let gens: Vec<_> = (0..g.invariant_factors().len())
        .map(|i| {
            let mut coords = vec![0i64; g.invariant_factors().len()];
            coords[i] = 1;
            g.rep_from_coords(&coords)
        })
        .collect();
    let mut rows = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let cup = cup_h1_h1(&gens[i], &gens[j]).unwrap();
            let wc = pushforward(&q, &wedge, &cup).unwrap();
            rows.push(h2w.coords(&wc).unwrap());
        }
    }
    f2_rank(&rows) == rows.len()
}

#[test]
fn criterion_4_lemma_suite() {
    let specs = corpus::generate(4, 50);
    let mut small = 0;
    for spec in &specs {
        let data = build(spec).unwrap();
        if data.abelianization.rank() <= 4 {
            assert!(cup_wedge_injective(&data.abelianization));
            assert!(check_pushforward_injective(&data).unwrap());
            small += 1;
        }
    }
    assert!(small > 0);
    // surface-type centers, checked explicitly
    for model in [
        PieceModel::EllipticTwoOvals,
        PieceModel::EllipticOneOval,
        PieceModel::Genus2ThreeOvals,
        PieceModel::Genus2OneOval,
    ] {
        let data = build(&single(model)).unwrap();
        assert!(check_pushforward_injective(&data).unwrap());
    }

    // the free-orbit identification leaves H1 untouched, the pinch adds
    // exactly one F2 dimension
    for model in [
        PieceModel::PuncturedP1Real { punctures: 3 },
        PieceModel::EllipticTwoOvals,
        PieceModel::Genus2ThreeOvals,
    ] {
        let base = single(model);
        let dim = h1(&build(&base).unwrap().abelianization).f2_dim();

        let mut with_pair = base.clone();
        with_pair.gluings.push(NodeGluing::IdentifyConjPairs {});
        let d1 = build(&with_pair).unwrap();
        assert_eq!(h1(&d1.abelianization).f2_dim(), dim);

        let mut with_pinch = base.clone();
        with_pinch.gluings.push(NodeGluing::PinchConjPair { path: None });
        let d2 = build(&with_pinch).unwrap();
        assert_eq!(h1(&d2.abelianization).f2_dim(), dim + 1);
    }
    println!("ACCEPTANCE 4 (lemma suite, {small} small lattices): PASS");
}

#[test]
fn criterion_5_alb_reconciliation() {
    let specs = corpus::generate(5, 50);
    for spec in &specs {
        let data = build(spec).unwrap();
        let m1 = build_alb(&data, 1);
        let m2 = build_alb(&data, 2);
        let report = reconcile_with_delta2(&data, &m1, &m2).unwrap();
        assert!(report.pass, "spec {spec:?}");
    }
    println!("ACCEPTANCE 5 (lift set = kernel on {} specs): PASS", specs.len());
}

fn neg_group(n: usize) -> Nil2Group {
    let ab = InvolutiveLattice::new(IMat::identity(n).neg(), format!("neg{n}")).unwrap();
    let c = n * (n - 1) / 2;
    let images = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = -1;
            Nil2Element::new(v, vec![0; c])
        })
        .collect();
    Nil2Group::new(ab, &[], images).unwrap()
}

#[test]
fn criterion_6_algebra_kernel() {
    // group axioms on the integer box [-2,2]^dim
    for n in 1..=3usize {
        let g = neg_group(n);
        let dim = n + n * (n - 1) / 2;
        let vals = [-2i64, -1, 0, 1, 2];
        let mut elems = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let coords: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
            elems.push(Nil2Element::new(coords[..n].to_vec(), coords[n..].to_vec()));
            let mut k = 0;
            while k < dim {
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == dim {
                break;
            }
        }
        let id = g.identity();
        for x in &elems {
            assert_eq!(g.compose(x, &id), *x);
            assert_eq!(g.compose(&id, x), *x);
            assert_eq!(g.compose(x, &g.inverse(x)), id);
            assert_eq!(g.compose(&g.inverse(x), x), id);
            assert_eq!(g.apply_tau(&g.apply_tau(x)), *x);
        }
        // associativity, strided so the triple loop stays desk-scale
        let (sx, sy, sz) = match n {
            1 => (1, 1, 1),
            2 => (1, 3, 7),
            _ => (25, 125, 625),
        };
        for x in elems.iter().step_by(sx) {
            for y in elems.iter().step_by(sy) {
                let xy = g.compose(x, y);
                for z in elems.iter().step_by(sz) {
                    assert_eq!(g.compose(&xy, z), g.compose(x, &g.compose(y, z)));
                }
            }
        }
    }

    // Smith normal form on 1000 random matrices up to 8x8; products are
    // taken in i128 because the transforms can carry large entries
    fn wide(m: &IMat) -> Vec<Vec<i128>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| i128::from(m[(i, j)])).collect())
            .collect()
    }
    fn wmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let cols = b[0].len();
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum())
                    .collect()
            })
            .collect()
    }
    fn wident(m: &[Vec<i128>]) -> bool {
        m.iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i128::from(i == j)))
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let mut a = IMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                a[(i, j)] = rng.gen_range(-3..=3);
            }
        }
        let s = smith_normal_form(&a);
        assert_eq!(wmul(&wmul(&wide(&s.u), &wide(&a)), &wide(&s.v)), wide(&s.d));
        // explicit integer inverses certify unimodularity
        assert!(wident(&wmul(&wide(&s.u), &wide(&s.uinv))));
        assert!(wident(&wmul(&wide(&s.uinv), &wide(&s.u))));
        assert!(wident(&wmul(&wide(&s.v), &wide(&s.vinv))));
        assert!(wident(&wmul(&wide(&s.vinv), &wide(&s.v))));
        for i in 1..rows.min(cols) {
            let (p, q) = (s.diag(i - 1), s.diag(i));
            assert!(q == 0 || (p != 0 && q % p == 0));
            assert!(p >= 0 && q >= 0);
        }
    }

    // cohomology orders against brute-force enumeration, rank <= 4
    let mut lattices = vec![
        InvolutiveLattice::new(IMat::identity(3).neg(), "n3").unwrap(),
        InvolutiveLattice::new(
            IMat::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]),
            "m3",
        )
        .unwrap(),
        InvolutiveLattice::new(
            IMat::from_rows(&[
                vec![1, 0, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
            ]),
            "m4",
        )
        .unwrap(),
    ];
    for spec in corpus::generate(6, 30) {
        let data = build(&spec).unwrap();
        if data.abelianization.rank() <= 4 {
            lattices.push(data.abelianization.clone());
        }
    }
    for m in &lattices {
        assert_eq!(h1(m).order().unwrap() as usize, brute_force_class_count(m, 1));
        assert_eq!(h2(m).order().unwrap() as usize, brute_force_class_count(m, 2));
    }
    println!("ACCEPTANCE 6 (algebra kernel): PASS");
}

#[test]
fn corpus_adjunction_counts() {
    // hypothesis-satisfying specs: component count determines the kappa span
    for spec in corpus::generate(8, 30) {
        let data = build(&spec).unwrap();
        let adj = verify_unit_adjunction(&data).unwrap();
        assert!(adj.pass(), "{:?}: {:?}", spec, adj.witnesses);
        assert_eq!(
            data.pi0_real().len(),
            1 + h1(&data.abelianization).f2_dim()
        );
    }
}
