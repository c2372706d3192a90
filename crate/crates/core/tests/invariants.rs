use std::collections::HashSet;

use num_complex::Complex64;
use proptest::prelude::*;

use mols_mub::gf::FieldSpec;
use mols_mub::mub::{ws_mub_number, MubOptions};
use mols_mub::net::{build_net, net_from_mols, validate_net};
use mols_mub::spectra::{common_eigenbasis, weyl_matrix};
use mols_mub::squares::{are_orthogonal, ff_complete_mols, macneish_mols, macneish_product, LatinSquare, MolsFamily};
use mols_mub::weyl::{crt_join, crt_split, enumerate_classes, symplectic, ExponentPair};

fn relabel(s: &LatinSquare, rows: &[usize], cols: &[usize], syms: &[usize]) -> LatinSquare {
    let d = s.order();
    LatinSquare::new((0..d).map(|i| (0..d).map(|j| syms[s.get(rows[i], cols[j])]).collect()).collect()).unwrap()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn field_order() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![3usize, 4, 5, 7, 8, 9])
}

fn pair_counts_distinct(a: &LatinSquare, b: &LatinSquare) -> bool {
    let d = a.order();
    (0..d * d).map(|k| (a.get(k / d, k % d), b.get(k / d, k % d))).collect::<HashSet<_>>().len() == d * d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonality_is_symmetric_and_isotopy_invariant(
        (q, i, j, rows, cols, s1, s2) in field_order().prop_flat_map(|q| (
            Just(q), 0..q - 1, 0..q - 1, permutation(q), permutation(q), permutation(q), permutation(q),
        ))
    ) {
        let fam = ff_complete_mols(q).unwrap();
        let a = relabel(&fam.squares()[i], &rows, &cols, &s1);
        let b = relabel(&fam.squares()[j], &rows, &cols, &s2);
        let ab = are_orthogonal(&a, &b).unwrap().is_orthogonal();
        prop_assert_eq!(ab, are_orthogonal(&b, &a).unwrap().is_orthogonal());
        prop_assert_eq!(ab, i != j);
        prop_assert_eq!(ab, pair_counts_distinct(&a, &b));
    }

    #[test]
    fn macneish_products_of_orthogonal_pairs_are_orthogonal(
        (q1, q2, a, b, c, e) in (field_order(), field_order()).prop_flat_map(|(q1, q2)| (
            Just(q1), Just(q2), 0..q1 - 1, 0..q1 - 1, 0..q2 - 1, 0..q2 - 1,
        ))
    ) {
        prop_assume!(a != b && c != e);
        let (f1, f2) = (ff_complete_mols(q1).unwrap(), ff_complete_mols(q2).unwrap());
        let x = macneish_product(&f1.squares()[a], &f2.squares()[c]);
        let y = macneish_product(&f1.squares()[b], &f2.squares()[e]);
        prop_assert!(are_orthogonal(&x, &y).unwrap().is_orthogonal());
        prop_assert!(pair_counts_distinct(&x, &y));
    }

    #[test]
    fn symplectic_zero_iff_matrices_commute(d in 2usize..=12, a in 0usize..144, b in 0usize..144) {
        let pa = ExponentPair::new(d, a / 12, a % 12);
        let pb = ExponentPair::new(d, b / 12, b % 12);
        let (wa, wb) = (weyl_matrix(&pa), weyl_matrix(&pb));
        let commute = wa.matmul(&wb).max_abs_diff(&wb.matmul(&wa)) < 1e-12;
        prop_assert_eq!(commute, symplectic(&pa, &pb).unwrap() == 0);
    }

    #[test]
    fn crt_split_round_trips(
        (d1, d2) in prop::sample::select(vec![(2usize, 3usize), (2, 5), (3, 5), (4, 9), (5, 7), (3, 4)]),
        m in 0usize..1000, n in 0usize..1000,
    ) {
        let pair = ExponentPair::new(d1 * d2, m, n);
        let (a, b) = crt_split(&pair, d1, d2).unwrap();
        prop_assert_eq!(crt_join(&a, &b).unwrap(), pair);
    }

    #[test]
    fn field_arithmetic_is_distributive(q in field_order(), x in 0usize..9, y in 0usize..9, z in 0usize..9) {
        let f = FieldSpec::with_order(q).unwrap();
        let (x, y, z) = (f.from_index(x % q), f.from_index(y % q), f.from_index(z % q));
        prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
        if !x.is_zero() {
            prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn eigenbasis_projectors_do_not_depend_on_seed(d in 2usize..=10, idx in 0usize..64, s1: u64, s2: u64) {
        let classes = enumerate_classes(d).unwrap();
        let class = &classes[idx % classes.len()];
        let p1 = common_eigenbasis(class, s1).unwrap().projectors();
        let p2 = common_eigenbasis(class, s2).unwrap().projectors();
        // same set of rank-one projectors, possibly reordered
        for p in &p1 {
            prop_assert!(p2.iter().any(|r| p.max_abs_diff(r) < 1e-8));
        }
    }
}

#[test]
fn nets_from_field_and_macneish_families_satisfy_invariants() {
    for d in 2..=10 {
        let fam = macneish_mols(d).unwrap();
        let net = net_from_mols(&fam).unwrap();
        assert_eq!(net.rows().len(), fam.len() + 2, "order {d}");
        assert!(validate_net(&net).is_valid(), "order {d}");
    }
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let fam = ff_complete_mols(q).unwrap();
        assert_eq!(fam.len(), q - 1);
        assert!(validate_net(&build_net(&fam)).is_valid(), "q = {q}");
    }
}

#[test]
fn cyclic_square_net_is_valid_for_every_order() {
    for d in 1..=10 {
        let fam = MolsFamily::new(d, vec![LatinSquare::cyclic(d)]).unwrap();
        assert!(validate_net(&build_net(&fam)).is_valid(), "order {d}");
    }
}

#[test]
fn order_ten_graph_has_no_four_clique() {
    let r = ws_mub_number(10, &MubOptions::default()).unwrap();
    let adj = &r.unbiased_matrix;
    let n = adj.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let q = [a, b, c, e];
                    assert!(!q.iter().all(|&u| q.iter().all(|&v| u == v || adj[u][v])), "4-clique {q:?}");
                }
            }
        }
    }
}

#[test]
fn weyl_operators_are_unitary() {
    for d in 1..=8 {
        for k in 0..d * d {
            let w = weyl_matrix(&ExponentPair::new(d, k / d, k % d));
            assert!(w.unitarity_deviation() < 1e-10);
            let tr: Complex64 = w.trace();
            assert!(k == 0 || tr.norm() < 1e-10);
        }
    }
}

#[test]
fn design_subsets_never_exceed_quantum_macneish_bound() {
    use mols_mub::mub::design_mubs;
    use mols_mub::squares::{builtin_mols10, quantum_macneish_bound};
    let opts = MubOptions::default();
    for d in [6, 10, 15, 35] {
        let bound = quantum_macneish_bound(d).unwrap();
        let r = design_mubs(&macneish_mols(d).unwrap(), None, &opts).unwrap();
        assert!(r.max_clique.size <= bound, "d = {d}: {} > {bound}", r.max_clique.size);
    }
    let r = design_mubs(&builtin_mols10(), None, &opts).unwrap();
    assert!(r.max_clique.size <= quantum_macneish_bound(10).unwrap());
}
