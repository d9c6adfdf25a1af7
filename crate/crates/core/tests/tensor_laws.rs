//! The defining relations of the q-tensor square hold for the symbols
//! `g ⊗ h = [g, h^φ]` and `k̂` realized in `ν^q(G)`.

use std::sync::Arc;

use proptest::prelude::*;
use qpc::pc::ExponentVector;
use qpc::qnu::{build_nu, NuContext};
use qpc::qwedge::build_wedge;
use qpc::subgrp::InducedSequence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

type V = ExponentVector<i64>;

fn check_laws(nu: &NuContext<i64>, rng: &mut ChaCha8Rng) {
    let g = &nu.group;
    let p = &nu.pres;
    let q = nu.q as i64;
    let t = |a: &V, b: &V| nu.tensor_of(a, b).unwrap();
    let conj = |a: &V, b: &V| g.conjugate(a, b).unwrap();
    let act = |x: &V, k: &V| p.conjugate(x, &nu.embed_g(k).unwrap()).unwrap();
    let r = |rng: &mut ChaCha8Rng| random_element(g, rng);
    let (x, x1, y, y1) = (r(rng), r(rng), r(rng), r(rng));
    // g ⊗ h h1 = (g ⊗ h1)(g^h1 ⊗ h^h1)
    let lhs = t(&x, &g.mul(&y, &y1).unwrap());
    let rhs = p
        .mul(&t(&x, &y1), &t(&conj(&x, &y1), &conj(&y, &y1)))
        .unwrap();
    assert_eq!(lhs, rhs, "first tensor law");
    // g g1 ⊗ h = (g^g1 ⊗ h^g1)(g1 ⊗ h)
    let lhs = t(&g.mul(&x, &x1).unwrap(), &y);
    let rhs = p
        .mul(&t(&conj(&x, &x1), &conj(&y, &x1)), &t(&x1, &y))
        .unwrap();
    assert_eq!(lhs, rhs, "second tensor law");
    // the action of G on the tensor square is the diagonal one
    assert_eq!(act(&t(&x, &y), &x1), t(&conj(&x, &x1), &conj(&y, &x1)));
    if q == 0 {
        return;
    }
    let hat = |k: &V| nu.hat_of(k).unwrap();
    let pw = |k: &V, e: i64| g.pow(k, &e).unwrap();
    // (g ⊗ h)^k̂ = g^{k^q} ⊗ h^{k^q}
    let kq = pw(&x1, q);
    assert_eq!(
        p.conjugate(&t(&x, &y), &hat(&x1)).unwrap(),
        t(&conj(&x, &kq), &conj(&y, &kq))
    );
    // hat(k k1) = k̂ ∏ (k ⊗ k1^{-i})^{k^{q-1-i}} k̂1
    let (k, k1) = (x1.clone(), y1.clone());
    let mut rhs = hat(&k);
    for i in 1..q {
        rhs = p
            .mul(&rhs, &act(&t(&k, &pw(&k1, -i)), &pw(&k, q - 1 - i)))
            .unwrap();
    }
    rhs = p.mul(&rhs, &hat(&k1)).unwrap();
    assert_eq!(hat(&g.mul(&k, &k1).unwrap()), rhs, "hat of a product");
    // [k̂, k̂1] = k^q ⊗ k1^q
    assert_eq!(
        p.commutator(&hat(&k), &hat(&k1)).unwrap(),
        t(&pw(&k, q), &pw(&k1, q))
    );
    // hat([g, h]) = (g ⊗ h)^q
    assert_eq!(
        hat(&g.commutator(&x, &y).unwrap()),
        p.pow(&t(&x, &y), &q).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tensor_laws_hold(seed in any::<u64>(), q in 0u64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for name in ["s3", "d4", "q8", "dinf", "c2xc2"] {
            let nu = build_nu(&load(name), q).unwrap();
            for _ in 0..5 {
                check_laws(&nu, &mut rng);
            }
        }
    }
}

#[test]
fn diagonal_is_central_and_in_kernel() {
    for (name, g) in corpus() {
        for q in 0..=3 {
            let nu = build_nu(&g, q).unwrap();
            for d in nu.delta.members() {
                for k in 0..nu.pres.ngens() {
                    assert!(
                        nu.pres
                            .commutator(d, &nu.pres.generator(k))
                            .unwrap()
                            .is_identity(),
                        "{name} q={q}"
                    );
                }
                assert!(nu.psi(d).unwrap().is_identity(), "{name} q={q}");
            }
        }
    }
}

#[test]
fn psi_is_a_homomorphism() {
    for name in ["s3", "d4", "dinf"] {
        for q in 0..=3 {
            let nu = build_nu(&load(name), q).unwrap();
            let p = &nu.pres;
            let t = &nu.tau.pres;
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..20 {
                let a = random_element(p, &mut rng);
                let b = random_element(p, &mut rng);
                let lhs = nu.psi(&p.mul(&a, &b).unwrap()).unwrap();
                let rhs = t.mul(&nu.psi(&a).unwrap(), &nu.psi(&b).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{name} q={q}");
            }
        }
    }
}

#[test]
fn rho_image_is_derived_times_powers() {
    for (name, g) in corpus() {
        for q in 0..=3 {
            let nu = build_nu(&g, q).unwrap();
            let images: Vec<V> = nu
                .upsilon
                .members()
                .iter()
                .map(|m| nu.rho(m).unwrap())
                .collect();
            let image = InducedSequence::new(Arc::new(g.clone()), &images).unwrap();
            let expected = build_wedge(&g, q).unwrap().image_in_group().unwrap();
            assert_eq!(image.members(), expected.members(), "{name} q={q}");
            let p = &nu.pres;
            let ms = nu.upsilon.members();
            for a in ms {
                for b in ms {
                    let lhs = nu.rho(&p.mul(a, b).unwrap()).unwrap();
                    let rhs = g.mul(&nu.rho(a).unwrap(), &nu.rho(b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{name} q={q}");
                }
            }
        }
    }
}

#[test]
fn rho_on_s3() {
    let nu = build_nu(&load("s3"), 2).unwrap();
    assert_eq!(nu.rho(&nu.tensor(0, 1).unwrap()).unwrap().0, vec![0, 2]);
    assert_eq!(nu.rho(&nu.images_hat[1]).unwrap().0, vec![0, 2]);
    assert!(nu.rho(&nu.images_g[0]).is_err());
}
