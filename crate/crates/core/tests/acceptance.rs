//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::process::ExitCode;

use common::{cover_closure, coxeter_m, golden};
use ekor_core::admissible::*;
use ekor_core::building::*;
use ekor_core::chains::{render_index_set, IndexSet, StandardChain, SubspaceKind};
use ekor_core::weyl::{ExtAffineElement, WeylGroup};
use ekor_core::zips::*;
use ekor_core::Rational;
use proptest::strategy::{Just, Strategy};
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn set_of(v: &[ExtAffineElement]) -> BTreeSet<ExtAffineElement> {
    v.iter().cloned().collect()
}

fn c1_admissible_set() -> Outcome {
    let gold = golden(include_str!("../golden/adm_g2.txt"));
    let adm = admissible_set(2);
    ensure!(adm.len() == 13, "|Adm| = {}", adm.len());
    ensure!(set_of(&adm) == set_of(&gold), "Adm differs from the golden list");
    Ok("13 elements, equal to the golden list".into())
}

fn c2_frobenii() -> Outcome {
    let adm = golden(include_str!("../golden/adm_g2.txt"));
    let expected: Vec<&str> = include_str!("../golden/frobenii_g2.txt").lines().filter(|l| !l.is_empty()).collect();
    let got: Vec<String> = frobenii_table(&adm).iter().map(|m| m.to_string()).collect();
    for (i, (a, b)) in got.iter().zip(&expected).enumerate() {
        ensure!(a == b, "matrix {} is {a}, expected {b}", i + 1);
    }
    ensure!(got.len() == expected.len(), "{} matrices, expected {}", got.len(), expected.len());
    Ok(format!("{} matrices bit-exact", got.len()))
}

fn c3_kr_ekor() -> Outcome {
    let wg = WeylGroup::new(2).unwrap();
    let siegel = ParahoricWeyl::new(&wg, &ParahoricType::siegel(2)).unwrap();
    let kr: Vec<_> = siegel.kr_set().map_err(|e| e.to_string())?.into_iter().map(|t| t.min_rep).collect();
    let ekor = siegel.ekor_set().map_err(|e| e.to_string())?;
    let kr_gold = golden(include_str!("../golden/kr_siegel_g2.txt"));
    let ekor_gold = golden(include_str!("../golden/ekor_siegel_g2.txt"));
    ensure!(set_of(&kr) == set_of(&kr_gold), "Siegel KR reps differ from golden");
    ensure!(set_of(&ekor) == set_of(&ekor_gold), "Siegel EKOR differs from golden");
    ensure!(set_of(&kr_gold).is_subset(&set_of(&ekor)), "KR reps not contained in EKOR");
    let iw = ParahoricWeyl::new(&wg, &ParahoricType::iwahori(2)).unwrap();
    let (iw_kr, iw_ekor) = (iw.kr_set().unwrap().len(), iw.ekor_set().unwrap().len());
    ensure!(iw_kr == 13 && iw_ekor == 13, "Iwahori {iw_kr}/{iw_ekor}");
    let hs = ParahoricWeyl::new(&wg, &ParahoricType::hyperspecial(2)).unwrap();
    let hs_ekor = hs.ekor_set().unwrap().len();
    ensure!(hs_ekor == 4, "hyperspecial EKOR has {hs_ekor} elements");
    Ok(format!("Siegel KR {} / EKOR {}, Iwahori {iw_kr} = {iw_ekor}, hyperspecial EKOR {hs_ekor}", kr.len(), ekor.len()))
}

fn c4_lemma() -> Outcome {
    let wg = WeylGroup::new(2).unwrap();
    let mut sizes = Vec::new();
    for (name, k) in ParahoricType::standard_types_g2() {
        let pw = ParahoricWeyl::new(&wg, &k).unwrap();
        let (a, b) = pw.ekor_both_ways();
        ensure!(a == b, "{name}: Adm^K ∩ ^K W ≠ Adm ∩ ^K W");
        sizes.push(format!("{name} {}", a.len()));
    }
    ensure!(sizes.len() == 5, "{} standard types", sizes.len());
    Ok(sizes.join(", "))
}

fn c5_criterion_vs_bruhat() -> Outcome {
    let mut checked = 0;
    for g in 1..=2 {
        let wg = WeylGroup::new(g).unwrap();
        for w in enumeration_domain(g) {
            ensure!(admissible_kr_criterion(&w) == admissible_by_bruhat(&wg, &w), "disagreement at {w}");
            checked += 1;
        }
    }
    // random elements of arbitrary shape, Bruhat side as oracle
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    let strategy = (1usize..=2).prop_flat_map(|g| {
        (Just(g), proptest::collection::vec(0..=g, 0..=6), -1i32..=2)
    });
    runner
        .run(&strategy, |(g, word, k)| {
            let wg = WeylGroup::new(g).unwrap();
            let w = wg.evaluate_word(&word, k);
            if admissible_kr_criterion(&w) != admissible_by_bruhat(&wg, &w) {
                return Err(TestCaseError::fail(format!("disagreement at {w}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{checked} domain elements plus 256 random elements agree"))
}

fn c6_strata_table() -> Outcome {
    let wg = WeylGroup::new(2).unwrap();
    let pw = ParahoricWeyl::new(&wg, &ParahoricType::siegel(2)).unwrap();
    let rows = eo_table(&pw).map_err(|e| e.to_string())?;
    ensure!(rows.len() == 9, "{} rows", rows.len());
    let reference = parse_reference_table(include_str!("../golden/strata_siegel_g2.tsv")).map_err(|e| e.to_string())?;
    let cmp = compare_with_reference(&rows, &reference).map_err(|e| e.to_string())?;
    let yn = |b: bool| if b { "=" } else { "≠" };
    for c in &cmp {
        println!(
            "      {:<32} C0{} D0{} C2{} D2{} label{} D0/C2-swapped{}",
            c.w.to_string(),
            yn(c.c0),
            yn(c.d0),
            yn(c.cg),
            yn(c.dg),
            yn(c.label),
            yn(c.d0_cg_swapped)
        );
    }
    for c in &cmp {
        ensure!(c.c0, "C0 differs for {}", c.w);
    }
    let k = pw.parahoric();
    let mut positions = 0;
    for r in &rows {
        let zip = standard_zip(&r.w, k).map_err(|e| e.to_string())?;
        zip.verify().map_err(|e| e.to_string())?;
        ensure!(zip.positions().iter().all(|p| p.c.len() == 2 && p.d.len() == 2), "rank condition");
        positions += zip.positions().len();
    }
    let full = cmp.iter().filter(|c| c.all_agree()).count();
    let swapped = cmp.iter().filter(|c| c.d0_cg_swapped).count();
    Ok(format!(
        "C0 9/9; full row agreement {full}/9, D0/C2 agree after swapping the two columns {swapped}/9; axioms hold at {positions} positions"
    ))
}

fn c7_eo_observations() -> Outcome {
    let wg = WeylGroup::new(2).unwrap();
    let pw = ParahoricWeyl::new(&wg, &ParahoricType::siegel(2)).unwrap();
    let rows = eo_table(&pw).map_err(|e| e.to_string())?;
    for r in &rows {
        ensure!(r.eo0 == r.eog, "w0 ≠ w2 for {}", r.w);
    }
    let mut by_kr: BTreeMap<&ExtAffineElement, Vec<&EOInvariant>> = BTreeMap::new();
    for r in &rows {
        by_kr.entry(&r.kr_type).or_default().push(&r.eo0);
    }
    let mut pairs = 0;
    for (kr, invs) in &by_kr {
        if invs.len() == 2 {
            ensure!(invs[0] != invs[1], "EKOR strata over {kr} share an EO invariant");
            pairs += 1;
        }
    }
    let classes: BTreeSet<_> = rows.iter().map(|r| &r.eo0).collect();
    ensure!(classes.len() == 4, "{} EO classes", classes.len());
    Ok(format!("w0 = w2 on 9 rows, {pairs} KR types split by EO, 4 classes"))
}

fn kernels(c: &StandardChain, symmetric: bool) -> BTreeSet<IndexSet> {
    c.distinguished_subspaces()
        .unwrap()
        .into_iter()
        .filter(|d| (d.kind == SubspaceKind::Symmetric) == symmetric)
        .map(|d| d.indices)
        .collect()
}

fn parse_sets(s: &str) -> BTreeSet<IndexSet> {
    s.split(';').map(|t| t.split(',').map(|x| x.trim().parse().unwrap()).collect()).collect()
}

fn c8_reductive_quotient() -> Outcome {
    let chain = |g: usize, v: &[usize]| StandardChain::new(&ParahoricType::new(g, v.iter().copied()).unwrap());
    for g in [1, 2, 3, 8] {
        let r = chain(g, &(0..=g).collect::<Vec<_>>()).rdt_factors().map_err(|e| e.to_string())?;
        let torus = r.factors.len() == g && r.factors.iter().all(|f| f.to_string() == "GL(1)") && r.multiplier;
        ensure!(torus, "Iwahori g={g}: {r}");
    }
    for v in [&[0, 2][..], &[0, 1]] {
        let r = chain(2, v).rdt_factors().map_err(|e| e.to_string())?;
        let iso: Vec<String> = r.isomorphism_type().iter().map(|f| f.to_string()).collect();
        ensure!(iso == ["GL(1)", "GL(2)"], "g=2 {v:?}: {r} has type {iso:?}");
    }
    let c = chain(8, &[0, 3, 5]);
    let sym = parse_sets("1,-1,2,-2,3,-3;4,-4,5,-5,6,-6,7,-7,8,-8;1,-1,2,-2,3,-3,4,-4,5,-5;6,-6,7,-7,8,-8");
    let one = parse_sets("-3,-2,-1;-5,-4;-5,-4,-3,-2,-1;4,5;1,2,3,4,5;1,2,3");
    ensure!(kernels(&c, true) == sym, "symmetric kernels {:?}", kernels(&c, true));
    ensure!(kernels(&c, false) == one, "one-sided kernels {:?}", kernels(&c, false));
    let r = c.rdt_factors().unwrap();
    ensure!(r.to_string() == "GSp(6) x GL(2) x GL(3) [+Gm]", "{r}");
    let big = chain(8, &[0, 2, 3, 5]);
    let before: BTreeSet<_> = kernels(&c, true).union(&kernels(&c, false)).cloned().collect();
    let after: BTreeSet<_> = kernels(&big, true).union(&kernels(&big, false)).cloned().collect();
    let extra: BTreeSet<_> = after.difference(&before).cloned().collect();
    let paper = parse_sets("-2,-1;1,2;-3;-5,-4,-3;3,4,5;3;3,4,5,6,7,8,-8,-7,-6,-5,-4,-3;1,2,-2,-1");
    ensure!(extra == paper, "extra subspaces {:?}", extra.iter().map(render_index_set).collect::<Vec<_>>());
    let rb = big.rdt_factors().unwrap();
    let dynkin: Vec<String> = rb.dynkin_type().iter().map(|f| f.to_string()).collect();
    ensure!(dynkin == ["GSp(6)", "GL(2)", "GL(2)"], "{rb}");
    Ok(format!("torus, GL(2) x Gm twice, {r}, {rb} (Dynkin type {})", dynkin.join(" x ")))
}

fn c9_building() -> Outcome {
    const Z4: [i64; 4] = [0, 0, 0, 0];
    const Z3P: [i64; 4] = [0, 0, 0, 1];
    const Z2P2: [i64; 4] = [0, 0, 1, 1];
    const ZP3: [i64; 4] = [0, 1, 1, 1];
    let q = Rational::new;
    let paper: [(&str, Vec<([i64; 4], Rational)>, &str); 5] = [
        ("hs", vec![(Z4, q(0, 1))], "Z_p Z_p Z_p Z_p; Z_p Z_p Z_p Z_p; Z_p Z_p Z_p Z_p; Z_p Z_p Z_p Z_p"),
        (
            "paramodular",
            vec![(Z3P, q(-1, 2)), (ZP3, q(0, 1))],
            "Z_p Z_p Z_p p^{-1}Z_p; pZ_p Z_p Z_p Z_p; pZ_p Z_p Z_p Z_p; pZ_p pZ_p pZ_p Z_p",
        ),
        (
            "klingen",
            vec![(Z4, q(-1, 4)), (Z3P, q(0, 1)), (ZP3, q(1, 4))],
            "Z_p Z_p Z_p Z_p; pZ_p Z_p Z_p Z_p; pZ_p Z_p Z_p Z_p; pZ_p pZ_p pZ_p Z_p",
        ),
        (
            "siegel",
            vec![(Z4, q(-1, 4)), (Z2P2, q(1, 4))],
            "Z_p Z_p Z_p Z_p; Z_p Z_p Z_p Z_p; pZ_p pZ_p Z_p Z_p; pZ_p pZ_p Z_p Z_p",
        ),
        (
            "iwahori",
            vec![(Z4, q(-1, 4)), (Z3P, q(-1, 8)), (Z2P2, q(1, 8)), (ZP3, q(1, 4))],
            "Z_p Z_p Z_p Z_p; pZ_p Z_p Z_p Z_p; pZ_p pZ_p Z_p Z_p; pZ_p pZ_p pZ_p Z_p",
        ),
    ];
    let mut offsets = Vec::new();
    for (name, lats, pattern) in &paper {
        let point = named_point::<Rational>(name).map_err(|e| e.to_string())?;
        let chain = chain_from_point(&point);
        let got = chain.normalized();
        let got_lats: Vec<_> = got.iter().map(|(l, _)| l.exps.clone()).collect();
        let want_lats: Vec<_> = lats.iter().map(|(e, _)| e.to_vec()).collect();
        ensure!(got_lats == want_lats, "{name}: lattices {got_lats:?}");
        let diffs: BTreeSet<Rational> = got.iter().zip(lats).map(|((_, c), (_, e))| c - e).collect();
        ensure!(diffs.len() == 1, "{name}: gradings differ by a non-constant {diffs:?}");
        let d = *diffs.iter().next().unwrap();
        if d != q(0, 1) {
            offsets.push(format!("{name} +{d}"));
        }
        let rendered = render_pattern(&chain.parahoric_pattern());
        ensure!(&rendered == pattern, "{name}: pattern {rendered}");
    }
    let iw = walls_through_point(&named_point::<Rational>("iwahori").unwrap());
    ensure!(iw.is_empty(), "Iwahori walls {iw:?}");
    let hs = walls_through_point(&named_point::<Rational>("hs").unwrap());
    ensure!(hs.len() == 4, "hyperspecial walls {hs:?}");
    let offsets = if offsets.is_empty() { "none".to_string() } else { offsets.join(", ") };
    Ok(format!("5 chains and patterns match; grading offsets: {offsets}; walls ∅ / 4"))
}

fn c10_weyl_properties() -> Outcome {
    let mut counted = 0;
    for g in 1..=3 {
        let wg = WeylGroup::new(g).unwrap();
        let id = wg.identity();
        for i in 0..=g {
            let s = wg.simple_reflection(i);
            ensure!(s.multiply(s).unwrap() == id, "g={g}: s_{i}^2 ≠ 1");
            for j in 0..=g {
                let st = s.multiply(wg.simple_reflection(j)).unwrap();
                let order = (1..=12).find(|&k| st.pow(k) == id);
                ensure!(order == coxeter_m(g, i, j), "g={g}: (s_{i} s_{j}) has order {order:?}");
            }
        }
        for k in 0..=1 {
            let ball = wg.enumerate_ball(6, k);
            for w in &ball {
                ensure!(wg.length(&w.inverse()) == wg.length(w), "ℓ(w⁻¹) ≠ ℓ(w) for {w}");
            }
            let zero: Vec<_> = ball.iter().filter(|w| wg.length(w) == 0).collect();
            ensure!(zero == [&wg.omega_generator().pow(k)], "g={g}: ℓ⁻¹(0) ∩ component {k} = {zero:?}");
            let small: Vec<_> = ball.iter().filter(|w| wg.length(w) <= 3).collect();
            for u in &small {
                for v in &small {
                    let uv = u.multiply(v).unwrap();
                    ensure!(wg.length(&uv) <= wg.length(u) + wg.length(v), "subadditivity fails for {u}, {v}");
                }
            }
            let below = cover_closure(&wg, &ball, 6);
            for u in &ball {
                for w in &ball {
                    ensure!(wg.bruhat_leq(u, w) == below[w].contains(u), "g={g}: Bruhat order disagrees at {u} <= {w}");
                }
            }
            counted += ball.len();
        }
    }
    Ok(format!("checked on balls with {counted} elements in total"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("admissible set g=2", c1_admissible_set),
        ("Frobenius matrices", c2_frobenii),
        ("KR/EKOR counts", c3_kr_ekor),
        ("EKOR lemma for 5 parahoric types", c4_lemma),
        ("vector criterion = Bruhat definition", c5_criterion_vs_bruhat),
        ("strata table C0 and zip axioms", c6_strata_table),
        ("EO observations", c7_eo_observations),
        ("reductive quotients", c8_reductive_quotient),
        ("building chains, patterns, walls", c9_building),
        ("Weyl group properties", c10_weyl_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
