mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use subarr::arrangement::{
    good_prime, intersect, Ambient, Arrangement, CanonicalSubspace, LinearForm, Ring, DEFAULT_SUBSET_CAP,
};
use subarr::enumerative::{
    beta_triangle, char_poly, frobenius_affine_complement, frobenius_projective_union, local_beta_table,
    reduced_char_poly, truncation_betti_with, zeta_affine_complement, zeta_projective_union,
};
use subarr::exec::Strategy as Exec;
use subarr::lattice::{build_lattice, build_lattice_with, Semilattice};
use subarr::linalg::{ExactMatrix, Rationals};
use subarr::oracle::{count_points, count_points_with, count_table, CountMode, DEFAULT_POINT_CAP};
use subarr::topology::{euler_char_reduced, is_rationally_cm_with, order_complex, reduced_betti, OrderComplex};

/// Random arrangement description: ring, ambient, subspaces as form rows.
#[derive(Clone, Debug)]
struct Sample {
    ring: Ring,
    ambient: Ambient,
    groups: Vec<Vec<Vec<i64>>>,
}

impl Sample {
    fn build(&self) -> Option<Arrangement> {
        let groups = self.groups.iter().map(|g| g.iter().map(|r| LinearForm::from_row(r)).collect()).collect();
        Arrangement::new(self.ring, self.ambient, groups).ok()
    }
}

fn sample(projective: bool) -> impl Strategy<Value = Sample> {
    let ring = prop_oneof![Just(Ring::Integers), Just(Ring::Prime(2)), Just(Ring::Prime(3))];
    let n = if projective { 3usize..=4 } else { 2usize..=3 };
    (ring, n).prop_flat_map(move |(ring, n)| {
        let constant = if projective { Just(0i64).boxed() } else { (-1i64..=1).boxed() };
        let form = (constant, prop::collection::vec(-2i64..=2, n)).prop_map(|(c, a)| {
            let mut row = vec![c];
            row.extend(a);
            row
        });
        let group = prop::collection::vec(form, 1..=2);
        let ambient = if projective { Ambient::Projective(n) } else { Ambient::Affine(n) };
        prop::collection::vec(group, 1..=4).prop_map(move |groups| Sample { ring, ambient, groups })
    })
}

fn any_sample() -> impl Strategy<Value = Sample> {
    prop_oneof![sample(false), sample(true)]
}

fn field_size(a: &Arrangement) -> u64 {
    a.ring().characteristic().unwrap_or(5)
}

/// `β̃_k = f_k - rank ∂_k - rank ∂_{k+1}` with dense exact ranks, `f_{-1} = 1`.
fn betti_from_ranks(k: &OrderComplex) -> Vec<u64> {
    let top = k.dim();
    let rank = |d: i64| -> usize {
        if d < 0 || d > top {
            return 0;
        }
        let rows = k.boundary(d as usize);
        let cols = if d == 0 { 1 } else { k.faces(d as usize - 1).len() };
        let dense: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![0; cols];
                r.iter().for_each(|&(c, x)| v[c] = x);
                v
            })
            .collect();
        ExactMatrix::from_i64(Rationals, cols, &dense).rank()
    };
    (-1..=top.max(-1))
        .map(|d| {
            let f = if d < 0 { 1 } else { k.faces(d as usize).len() };
            (f - rank(d) - rank(d + 1)) as u64
        })
        .collect()
}

fn assert_same_lattice(a: &Semilattice, b: &Semilattice) {
    assert_eq!(a.elements(), b.elements());
    assert_eq!(a.dims(), b.dims());
    assert_eq!(a.atoms(), b.atoms());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn lattice_is_permutation_invariant(s in any_sample(), seed in any::<u64>()) {
        let Some(a) = s.build() else { return Ok(()) };
        let mut shuffled = s.clone();
        let len = shuffled.groups.len();
        for i in (1..len).rev() {
            shuffled.groups.swap(i, (seed.rotate_left(i as u32) as usize) % (i + 1));
        }
        for g in &mut shuffled.groups {
            g.reverse();
        }
        let b = shuffled.build().unwrap();
        assert_same_lattice(&build_lattice(&a), &build_lattice(&b));
    }

    #[test]
    fn closure_is_sound(s in any_sample()) {
        let Some(a) = s.build() else { return Ok(()) };
        let l = build_lattice(&a);
        let elems: &[CanonicalSubspace] = l.elements();
        for x in elems {
            for y in elems {
                if let Some(z) = intersect(&[x, y]).unwrap() {
                    prop_assert!(l.position(&z).is_some());
                }
            }
        }
    }

    #[test]
    fn hall_and_euler_poincare(s in any_sample()) {
        let Some(a) = s.build() else { return Ok(()) };
        let l = build_lattice(&a);
        let mu = l.mobius();
        for x in 0..l.len() {
            for y in 0..l.len() {
                if !l.less(x, y) {
                    continue;
                }
                let k = order_complex(&l.open_interval(x, y));
                let chi = euler_char_reduced(&k);
                prop_assert_eq!(mu.get(x, y), chi);
                let b = reduced_betti(&k);
                prop_assert_eq!(b.euler_reduced(), chi);
                let from_ranks = betti_from_ranks(&k);
                for (i, &v) in from_ranks.iter().enumerate() {
                    prop_assert_eq!(b.reduced(i as i64 - 1), v);
                }
            }
        }
    }

    #[test]
    fn char_poly_counts_points(s in any_sample()) {
        let Some(a) = s.build() else { return Ok(()) };
        let q = field_size(&a);
        if a.ring() == Ring::Integers && !good_prime(&a, q, DEFAULT_SUBSET_CAP).unwrap().good {
            return Ok(());
        }
        let l = build_lattice(&a);
        let p = if l.is_projective() { reduced_char_poly(&l) } else { char_poly(&l) }.unwrap();
        let table = count_table(&a, q, 2, DEFAULT_POINT_CAP).unwrap();
        for row in &table.rows {
            prop_assert_eq!(row.union + row.complement, row.total);
            prop_assert_eq!(p.eval(&BigInt::from(q).pow(row.s as u32)), BigInt::from(row.complement));
        }
    }

    #[test]
    fn char_poly_degree_ranges(s in any_sample()) {
        let Some(a) = s.build() else { return Ok(()) };
        let l = build_lattice(&a);
        let Some(d) = l.max_dim() else { return Ok(()) };
        let n = a.ambient().n();
        if l.is_projective() {
            let pstar = reduced_char_poly(&l).unwrap();
            for j in d + 1..n {
                prop_assert_eq!(pstar.coeff(j), BigInt::from(1));
            }
        } else {
            let p = char_poly(&l).unwrap();
            prop_assert_eq!(p.degree(), Some(n));
            prop_assert_eq!(p.coeff(n), BigInt::from(1));
            prop_assert!(p.coeff(d) < BigInt::from(0));
        }
    }

    #[test]
    fn zeta_matches_beta_triangle_and_profiles(s in sample(true)) {
        let Some(a) = s.build() else { return Ok(()) };
        let l = build_lattice(&a);
        let pstar = reduced_char_poly(&l).unwrap();
        let z = zeta_projective_union(&pstar, l.max_dim());
        let b = beta_triangle(&l).unwrap();
        for (j, row) in b.rows().iter().enumerate() {
            let e: i64 = row.iter().enumerate().map(|(i, &m)| if i % 2 == 1 { m as i64 } else { -(m as i64) }).sum();
            prop_assert_eq!(z.exponent(j), e);
        }
        prop_assert_eq!(frobenius_projective_union(&b, l.ambient_dim()).zeta(), z);
        if l.is_hereditary() && is_rationally_cm_with(&l, Exec::Sequential).cohen_macaulay {
            let d = l.max_dim().unwrap();
            for (j, row) in b.rows().iter().enumerate().take(d) {
                prop_assert_eq!(row[0], 1);
                prop_assert!(row[1..d - j].iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn affine_profile_matches_zeta(s in sample(false)) {
        let Some(a) = s.build() else { return Ok(()) };
        let l = build_lattice(&a);
        let f = frobenius_affine_complement(&local_beta_table(&l).unwrap(), a.ambient().n());
        prop_assert_eq!(f.zeta(), zeta_affine_complement(&char_poly(&l).unwrap()));
    }

    #[test]
    fn strategies_agree(s in any_sample()) {
        let Some(a) = s.build() else { return Ok(()) };
        let seq = build_lattice_with(&a, Exec::Sequential);
        assert_same_lattice(&seq, &build_lattice_with(&a, Exec::Parallel));
        prop_assert_eq!(is_rationally_cm_with(&seq, Exec::Sequential), is_rationally_cm_with(&seq, Exec::Parallel));
        if seq.is_projective() {
            prop_assert_eq!(truncation_betti_with(&seq, Exec::Sequential).unwrap(), truncation_betti_with(&seq, Exec::Parallel).unwrap());
        }
        let q = field_size(&a);
        for mode in [CountMode::Union, CountMode::Complement] {
            prop_assert_eq!(
                count_points_with(&a, q, 1, mode, DEFAULT_POINT_CAP, Exec::Sequential).unwrap(),
                count_points_with(&a, q, 1, mode, DEFAULT_POINT_CAP, Exec::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn good_primes_preserve_dimensions(s in sample(false).prop_filter("integer", |s| s.ring == Ring::Integers), p in prop_oneof![Just(2u64), Just(3)]) {
        let Some(a) = s.build() else { return Ok(()) };
        if !good_prime(&a, p, DEFAULT_SUBSET_CAP).unwrap().good {
            return Ok(());
        }
        let reduced = Arrangement::new(Ring::Prime(p), a.ambient(), a.subspaces().to_vec()).unwrap();
        let (lq, lp) = (build_lattice(&a), build_lattice(&reduced));
        let mut dq = lq.dims().to_vec();
        let mut dp = lp.dims().to_vec();
        dq.sort_unstable();
        dp.sort_unstable();
        prop_assert_eq!(dq, dp);
    }
}

#[test]
fn corpus_counts_partition_the_ambient_space() {
    for name in common::corpus_names() {
        let a = common::load(&name);
        let q = field_size(&a).min(3);
        let union = count_points(&a, q, 1, CountMode::Union, DEFAULT_POINT_CAP).unwrap();
        let complement = count_points(&a, q, 1, CountMode::Complement, DEFAULT_POINT_CAP).unwrap();
        let n = a.ambient().n() as u32;
        let total = if a.ambient().is_projective() { (q.pow(n) - 1) / (q - 1) } else { q.pow(n) };
        assert_eq!(union + complement, total, "{name}");
    }
}

#[test]
fn corpus_lattices_are_closed() {
    for name in common::corpus_names() {
        let l = build_lattice(&common::load(&name));
        for x in l.elements() {
            for y in l.elements() {
                if let Some(z) = intersect(&[x, y]).unwrap() {
                    assert!(l.position(&z).is_some(), "{name}");
                }
            }
        }
    }
}
