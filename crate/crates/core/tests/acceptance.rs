use std::sync::Arc;
use std::time::{Duration, Instant};

use qpc::covers::{attach_tails, q_cover, Relator};
use qpc::oracle::{abelian_tensor, brute_center, cyclic_wedge, enumerate};
use qpc::pc::{ExponentVector, Word};
use qpc::qnu::{build_nu, build_nu_qperfect, build_tau, diagonal, tensor_square};
use qpc::qwedge::{build_wedge, exterior_center, is_q_capable};
use qpc::structure::{
    abelianization, hirsch_length, is_isomorphic_abelian, matches_presentation, order, Cardinal,
    Verdict,
};
use qpc::subgrp::{center, InducedSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn c1_e2_s3() -> Check {
    let c = ok(q_cover(&load("s3"), 2))?;
    ensure!(
        order(&c.pres) == Cardinal::Finite(24),
        "order {}",
        order(&c.pres)
    );
    ensure!(
        c.tail_orders == vec![2, 2],
        "tail orders {:?}",
        c.tail_orders
    );
    ensure!(ok(c.pres.consistency_report())?.is_empty(), "inconsistent");
    Ok(())
}

fn c2_e_q_dinf() -> Check {
    let g = load("dinf");
    for q in [2u64, 3, 5] {
        let tp = ok(attach_tails(&g, q, &Default::default()))?;
        ensure!(
            ok(tp.pres.is_consistent())?,
            "q={q}: tails not consistent as attached"
        );
        ensure!(
            tp.tail_orders == vec![q as i64; 2],
            "q={q}: attached {:?}",
            tp.tail_orders
        );
        let c = ok(q_cover(&g, q))?;
        ensure!(
            c.tail_orders == vec![q as i64; 2],
            "q={q}: surviving {:?}",
            c.tail_orders
        );
    }
    Ok(())
}

fn c3_s3_wedge() -> Check {
    let ctx = ok(build_wedge(&load("s3"), 2))?;
    ensure!(
        ok(is_isomorphic_abelian(&ctx.wedge_pres, &cyclic(6)))?,
        "wedge is not C6"
    );
    ensure!(
        ok(is_isomorphic_abelian(&ok(ctx.h2())?, &cyclic(2)))?,
        "H2 is not C2"
    );
    // w = [g1, g2] g1^2 = g2^2 t1 generates the wedge.
    let l = ok(ctx.lambda_eval(&Word::gen(0), &Word::gen(1), &Word::gen(0)))?;
    let e = &ctx.cover.pres;
    let t1 = ctx
        .cover
        .tail_element(&ctx.cover.relator_tail(Relator::Power(0)).unwrap());
    let w = ok(e.mul(&ExponentVector(vec![0, 2, 0, 0]), &t1))?;
    ensure!(ok(ctx.embed(&l))? == w, "lambda(g1,g2,g1) != g2^2 t1");
    let gen = InducedSequence::new(Arc::new(e.clone()), &[w]).unwrap();
    ensure!(
        gen.order() == Some(6) && ctx.w.order() == Some(6),
        "w does not generate the wedge"
    );
    Ok(())
}

fn c4_dinf_wedge() -> Check {
    let ctx = ok(build_wedge(&load("dinf"), 2))?;
    ensure!(ok(ctx.wedge_pres.is_abelian())?, "wedge not abelian");
    ensure!(
        abelianization(&ctx.wedge_pres) == vec![2, 2, 0],
        "wedge {:?}",
        abelianization(&ctx.wedge_pres)
    );
    let c = &ctx.cover;
    let tail = |r| c.tail_element(&c.relator_tail(r).unwrap());
    let expected = [
        ExponentVector(vec![0, 2, 0, 0]),
        tail(Relator::Power(0)),
        tail(Relator::Conj(1, 0)),
    ];
    ensure!(
        ctx.w.members() == expected,
        "wedge generators are not g2^2, t1, t2"
    );
    let g1g2 = ok(ctx.lambda_eval(&Word::gen(0), &Word::gen(1), &Word::identity()))?;
    let act = ok(ctx.wedge_action_word(&g1g2, &Word::gen(0)))?;
    ensure!(act == vec![-1, 0, 1], "(g1^g2)^g1 = {act:?}");
    let l = ok(ctx.lambda_eval(&Word::gen(0), &Word::gen(1), &Word::gen(0)))?;
    ensure!(l == vec![1, 1, 1], "lambda(g1,g2,g1) = {l:?}");
    Ok(())
}

fn c5_exterior_centers() -> Check {
    ensure!(
        ok(exterior_center(&load("s3"), 2))?.is_empty(),
        "Z(S3) nontrivial"
    );
    ensure!(ok(is_q_capable(&load("s3"), 2))?, "S3 not 2-capable");
    for q in [0, 2, 3] {
        ensure!(
            ok(exterior_center(&load("dinf"), q))?.is_empty(),
            "q={q}: Z(Dinf) nontrivial"
        );
    }
    ensure!(
        ok(exterior_center(&load("c2"), 2))?.order() == Some(2),
        "Z(C2) != C2"
    );
    ensure!(!ok(is_q_capable(&load("c2"), 2))?, "C2 reported 2-capable");
    Ok(())
}

fn c6_tau() -> Check {
    let tau = ok(build_tau(&load("s3"), 2))?;
    let t = &tau.pres;
    ensure!(ok(t.is_consistent())?, "tau(S3) inconsistent");
    let n = 2;
    let ctx = &tau.ctx;
    let w = ok(ctx.lambda_eval(&Word::gen(0), &Word::gen(1), &Word::gen(0)))?;
    let w2 = ok(ctx.wedge_pres.pow(&ExponentVector(w), &2))?;
    let lhs = ok(t.collect(t.conj_rhs(n + 1, 0)))?;
    let rhs = ok(t.mul(&t.generator(n + 1), &tau.wedge_element(&w2.0)))?;
    ensure!(lhs == rhs, "g1^-1 g2phi g1 != g2phi w^2 in tau(S3)");

    let tau = ok(build_tau(&load("dinf"), 2))?;
    let t = &tau.pres;
    ensure!(ok(t.is_consistent())?, "tau(Dinf) inconsistent");
    let lhs = ok(t.collect(t.conj_rhs(n, 1)))?;
    let rhs = ok(t.mul(&t.generator(n), &tau.wedge_element(&[1, 0, 1])))?;
    ensure!(lhs == rhs, "g2^-1 g1phi g2 != g1phi w1 w3 in tau(Dinf)");
    Ok(())
}

fn c7_nu_s3() -> Check {
    let nu = ok(build_nu(&load("s3"), 2))?;
    ensure!(
        order(&nu.pres) == Cardinal::Finite(432),
        "|nu| = {}",
        order(&nu.pres)
    );
    ensure!(
        ok(is_isomorphic_abelian(&tensor_square(&nu), &cyclic(12)))?,
        "tensor is not Z12"
    );
    ensure!(
        ok(is_isomorphic_abelian(&ok(diagonal(&nu))?, &cyclic(2)))?,
        "diagonal is not Z2"
    );
    Ok(())
}

fn c8_nu_dinf() -> Check {
    let nu = ok(build_nu(&load("dinf"), 3))?;
    let v = ok(matches_presentation(
        &tensor_square(&nu),
        &load("dinf"),
        200_000,
    ))?;
    ensure!(v == Verdict::Yes, "matches_presentation gave {v:?}");
    Ok(())
}

fn biderivation_laws(g: &P, q: u64, rng: &mut ChaCha8Rng, trials: usize) -> Check {
    let ctx = ok(build_wedge(g, q))?;
    let e = &ctx.cover.pres;
    let one = g.identity();
    let lam = |a: &ExponentVector<i64>, b: &ExponentVector<i64>, c: &ExponentVector<i64>| {
        ok(ctx.lambda_cover(a, b, c))
    };
    let conj = |a: &ExponentVector<i64>, b: &ExponentVector<i64>| ok(g.conjugate(a, b));
    let qi = q as i64;
    for _ in 0..trials {
        let (x, y, z) = (
            random_element(g, rng),
            random_element(g, rng),
            random_element(g, rng),
        );
        let (x1, y1) = (random_element(g, rng), random_element(g, rng));
        // g g1, h, k
        let lhs = lam(&ok(g.mul(&x, &x1))?, &y, &z)?;
        let rhs = ok(e.mul(
            &lam(&conj(&x, &x1)?, &conj(&y, &x1)?, &one)?,
            &lam(&x1, &y, &z)?,
        ))?;
        ensure!(lhs == rhs, "law (gg1,h,k) fails for q={q}");
        // g, h h1, k
        let lhs = lam(&x, &ok(g.mul(&y, &y1))?, &z)?;
        let rhs = ok(e.mul(
            &lam(&x, &y1, &one)?,
            &lam(&conj(&x, &y1)?, &conj(&y, &y1)?, &z)?,
        ))?;
        ensure!(lhs == rhs, "law (g,hh1,k) fails for q={q}");
        // conjugation by λ(1,1,k)
        let hk = lam(&one, &one, &z)?;
        let lhs = ok(e.conjugate(&lam(&x, &y, &one)?, &hk))?;
        let kq = ok(g.pow(&z, &qi))?;
        let rhs = lam(&conj(&x, &kq)?, &conj(&y, &kq)?, &one)?;
        ensure!(lhs == rhs, "law (conjugation by k-hat) fails for q={q}");
        // λ(1,1,k k1)
        let lhs = lam(&one, &one, &ok(g.mul(&z, &x1))?)?;
        let mut rhs = lam(&one, &one, &z)?;
        for i in 1..qi {
            let inner = conj(&ok(g.pow(&x1, &-i))?, &ok(g.pow(&z, &(qi - 1 - i)))?)?;
            rhs = ok(e.mul(&rhs, &lam(&z, &inner, &one)?))?;
        }
        rhs = ok(e.mul(&rhs, &lam(&one, &one, &x1)?))?;
        ensure!(lhs == rhs, "law (1,1,kk1) fails for q={q}");
        // [λ(1,1,k), λ(1,1,k1)]
        let lhs = ok(e.commutator(&lam(&one, &one, &z)?, &lam(&one, &one, &x1)?))?;
        let rhs = lam(&kq, &ok(g.pow(&x1, &qi))?, &one)?;
        ensure!(lhs == rhs, "law (commutator of hats) fails for q={q}");
        // λ(1,1,[g,h])
        let lhs = lam(&one, &one, &ok(g.commutator(&x, &y))?)?;
        let rhs = ok(e.pow(&lam(&x, &y, &one)?, &qi))?;
        ensure!(lhs == rhs, "law (1,1,[g,h]) fails for q={q}");
    }
    Ok(())
}

fn c9_property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, g) in corpus() {
        let finite = g.is_finite();
        for q in 0..=3u64 {
            let ctx = ok(build_wedge(&g, q))?;
            ensure!(
                ok(ctx.cover.pres.is_consistent())?,
                "{name} q={q}: cover inconsistent"
            );
            ensure!(
                ok(ctx.wedge_pres.is_consistent())?,
                "{name} q={q}: wedge inconsistent"
            );
            let h2 = ok(ctx.h2())?;
            if finite && q > 0 {
                let img = ok(ctx.image_in_group())?;
                let (w, h, i) = (
                    ctx.w.order(),
                    ok(h2.collect(&Word::identity())).map(|_| order(&h2))?,
                    img.order(),
                );
                let h = h.finite().copied();
                ensure!(
                    w.is_some() && w == h.zip(i).map(|(a, b)| a * b),
                    "{name} q={q}: |wedge| != |H2| |G'G^q|"
                );
            }
            if q == 1 {
                let wp = &ctx.wedge_pres;
                ensure!(
                    order(wp) == order(&g)
                        && hirsch_length(wp) == hirsch_length(&g)
                        && abelianization(wp) == abelianization(&g),
                    "{name}: q=1 wedge differs from G"
                );
                if ok(g.is_abelian())? {
                    ensure!(
                        ok(is_isomorphic_abelian(wp, &g))?,
                        "{name}: q=1 wedge not isomorphic to G"
                    );
                }
            }
            let nu = ok(build_nu(&g, q))?;
            ensure!(
                ok(nu.tau.pres.is_consistent())?,
                "{name} q={q}: tau inconsistent"
            );
            ensure!(
                ok(nu.pres.is_consistent())?,
                "{name} q={q}: nu inconsistent"
            );
            ensure!(
                ok(nu.tensor_pres.is_consistent())?,
                "{name} q={q}: tensor inconsistent"
            );
            if let (Some(go), Cardinal::Finite(v), Cardinal::Finite(t)) =
                (group_order(&g), order(&nu.pres), order(&nu.tensor_pres))
            {
                ensure!(v == go * go * t, "{name} q={q}: |nu| != |G|^2 |tensor|");
            } else {
                ensure!(!finite, "{name} q={q}: finite group with infinite nu");
            }
            biderivation_laws(&g, q, &mut rng, 100)?;
        }
    }
    Ok(())
}

fn c10_oracles() -> Check {
    for (name, g) in abelian_corpus() {
        let inv: Vec<u64> = abelianization(&g).into_iter().map(|d| d as u64).collect();
        let nu = ok(build_nu(&g, 0))?;
        let t = &nu.tensor_pres;
        ensure!(ok(t.is_abelian())?, "{name}: tensor not abelian");
        let got: Vec<u64> = abelianization(t).into_iter().map(|d| d as u64).collect();
        ensure!(got == abelian_tensor(&inv, &inv), "{name}: tensor {got:?}");
    }
    for n in 1..=12 {
        for q in 1..=6 {
            let ctx = ok(build_wedge(&cyclic(n), q))?;
            let got: Vec<u64> = abelianization(&ctx.wedge_pres)
                .into_iter()
                .map(|d| d as u64)
                .collect();
            ensure!(
                ok(ctx.wedge_pres.is_abelian())?,
                "C{n} q={q}: wedge not abelian"
            );
            ensure!(
                got == cyclic_wedge(n as u64, q),
                "C{n} q={q}: wedge {got:?}"
            );
        }
    }
    for (name, g) in corpus() {
        if !g.is_finite() {
            continue;
        }
        for q in 1..=3 {
            let c = ok(q_cover(&g, q))?;
            let table = ok(enumerate(&c.pres))?;
            let mut brute = ok(brute_center(&table))?;
            let mut fast = ok(ok(center(&c.pres))?.elements())?;
            brute.sort();
            fast.sort();
            ensure!(
                brute == fast,
                "{name} q={q}: center disagrees with brute force"
            );
        }
    }
    Ok(())
}

fn c11_qperfect() -> Check {
    for (n, q) in [(3, 2), (5, 2), (5, 3)] {
        let g = cyclic(n);
        let a = ok(build_nu(&g, q))?;
        let b = ok(build_nu_qperfect(&g, q))?;
        let (ta, tb) = (tensor_square(&a), tensor_square(&b));
        ensure!(order(&ta) == order(&tb), "C{n} q={q}: tensor orders differ");
        ensure!(
            ok(is_isomorphic_abelian(&ta, &tb))?,
            "C{n} q={q}: tensors differ"
        );
        ensure!(b.delta.is_empty(), "C{n} q={q}: diagonal nontrivial");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("E2(S3) has order 24 with two tails of order 2", c1_e2_s3),
        (
            "Eq(Dinf) tails consistent as attached, of order q",
            c2_e_q_dinf,
        ),
        (
            "S3 wedge^2 S3 = C6, H2(S3,Z2) = C2, lambda(g1,g2,g1) = w",
            c3_s3_wedge,
        ),
        (
            "Dinf wedge^2 Dinf = C2 x C2 x Z, action and lambda",
            c4_dinf_wedge,
        ),
        ("exterior centers and capability", c5_exterior_centers),
        ("tau^2(S3) and tau^2(Dinf) relations", c6_tau),
        ("nu^2(S3) of order 432, tensor Z12, diagonal Z2", c7_nu_s3),
        ("Dinf tensor^3 Dinf = Dinf", c8_nu_dinf),
        (
            "property suite over the corpus, q = 0..3",
            c9_property_suite,
        ),
        ("oracle equivalence", c10_oracles),
        (
            "q-perfect shortcut agrees with the general path",
            c11_qperfect,
        ),
    ];
    let limit = Duration::from_secs(5);
    let mut failed = 0;
    for (k, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(()) if elapsed > limit => Err(format!("took {elapsed:?}")),
            o => o,
        };
        match outcome {
            Ok(()) => println!(
                "criterion {:2}: PASS  {label} ({} ms)",
                k + 1,
                elapsed.as_millis()
            ),
            Err(e) => {
                failed += 1;
                println!("criterion {:2}: FAIL  {label}: {e}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
