//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::Instant;

use irrslope::canonical::is_canonical;
use irrslope::parity::{
    conjugator, factor_into_permutations, factor_into_proper_transpositions, member, Group, ProperTransposition,
};
use irrslope::plmap::PLMap;
use irrslope::presentation::{check_normal_shape, compile_word, generator, to_normal_word};
use irrslope::random::{random_even_word, random_tree, random_word, seeded};
use irrslope::relators::{cycle_raising_instances, negative_control, verify_instances, verify_relators};
use irrslope::tree::{derive_basic_moves, shape_classes, Step};
use irrslope::vbeta::{
    compile_beta_word, index4_class, index4_witnesses, perm_sign, verify_beta_relators, Index4Class,
};
use irrslope::word::{GenKind, GeneratorSymbol, Word};
use irrslope::{
    BetaDiagram, Caret, CaretKind, CaretTree, Permutation, Scalar, TernaryCaret, TreePairDiagram, ZBeta,
    ZTau,
};
use num_bigint::BigInt;
use rand::Rng;

const RELATOR_MAX_INDEX: u32 = 6;
const CYCLE_MAX_N: u32 = 8;
const TRANSPOSITION_MAX_I: u32 = 6;
const RAISE_BOUND: u32 = 8;
const CORPUS_WORDS: usize = 1000;
const CORPUS_MAX_LEN: usize = 30;
const CORPUS_MAX_INDEX: u32 = 4;
const PARITY_DIAGRAMS: usize = 100;
const PARITY_PERTURBATIONS: usize = 100;
const PARITY_PAIRS: usize = 1000;
const FACTOR_WORDS: usize = 200;
const CONJUGATOR_PAIRS: usize = 100;
const BETA_MAX_INDEX: u32 = 5;
const BETA_PAIRS: usize = 500;
const BETA_EXPANSIONS: usize = 100;
const TAU_POWER_MAX: i64 = 12;
const SIGN_SAMPLES: usize = 10_000;
/// Decimal digits of the square roots used by the sign oracle.
const ORACLE_DIGITS: u32 = 80;

const TAU_KINDS: [GenKind; 4] = [GenKind::X, GenKind::Y, GenKind::C, GenKind::P];
const BETA_KINDS: [GenKind; 3] = [GenKind::X, GenKind::Y, GenKind::P];

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word(s: &str) -> TreePairDiagram {
    compile_word(&s.parse().unwrap()).unwrap()
}

fn corpus() -> Vec<Word> {
    let mut rng = seeded(2024);
    (0..CORPUS_WORDS)
        .map(|_| {
            let len = rng.gen_range(0..=CORPUS_MAX_LEN);
            random_word(&mut rng, len, &TAU_KINDS, CORPUS_MAX_INDEX)
        })
        .collect()
}

fn relators() -> Check {
    let report = verify_relators(RELATOR_MAX_INDEX);
    ensure(report.tally.len() == 26, || format!("{} families instead of 26", report.tally.len()))?;
    if let Some(f) = report.failures.first() {
        return Err(format!("{} failures, first {}", report.failures.len(), f.instance));
    }
    let control = verify_instances(&[negative_control()]);
    ensure(!control.all_passed(), || "negative control x1 x0 = x0 x1 was accepted".into())?;
    Ok(format!("{} instances in 26 families up to index {RELATOR_MAX_INDEX}; control rejected", report.total()))
}

fn generator_orders() -> Check {
    for n in 1..=CYCLE_MAX_N {
        let c = generator(GeneratorSymbol::c(n)).map_err(|e| e.to_string())?;
        let mut acc = TreePairDiagram::identity();
        for m in 1..=n + 2 {
            acc = acc.compose(&c).unwrap();
            ensure(acc.is_identity() == (m == n + 2), || format!("c{n}^{m} identity = {}", acc.is_identity()))?;
        }
    }
    for i in 0..=TRANSPOSITION_MAX_I {
        let p = word(&format!("p{i}"));
        ensure(!p.is_identity(), || format!("p{i} is trivial"))?;
        ensure(p.pow(2).unwrap().is_identity(), || format!("p{i}^2 is not trivial"))?;
        let braid = word(&format!("p{} p{i}", i + 1)).pow(3).unwrap();
        ensure(braid.is_identity(), || format!("(p{} p{i})^3 is not trivial", i + 1))?;
    }
    Ok(format!("c_n has order n+2 for n <= {CYCLE_MAX_N}; p_i involutions with braid order 3 for i <= {TRANSPOSITION_MAX_I}"))
}

fn cycle_raising() -> Check {
    let inst = cycle_raising_instances(RAISE_BOUND);
    let report = verify_instances(&inst);
    if let Some(f) = report.failures.first() {
        return Err(format!("{} failures, first {}", report.failures.len(), f.instance));
    }
    Ok(format!("{} instances with 1 <= m <= n+1 <= {RAISE_BOUND}", report.total()))
}

/// Map of a word computed piece by piece from the generators' maps, never
/// composing diagrams.
fn oracle_map(w: &Word) -> PLMap<ZTau> {
    w.symbols()
        .iter()
        .fold(PLMap::identity(), |acc, &s| acc.then(&generator(s).unwrap().to_plmap()))
}

fn word_problem(corpus: &[Word]) -> Check {
    let mut identities = 0;
    for w in corpus {
        let v = compile_word(w).map_err(|e| format!("{w}: {e}"))?;
        let oracle = oracle_map(w);
        oracle.check_bijective().map_err(|e| format!("{w}: oracle map {e}"))?;
        ensure(v.to_plmap() == oracle, || format!("{w}: diagram map differs from oracle"))?;
        let r = v.reduce();
        ensure(r.equals(&v), || format!("{w}: reduce changed the element"))?;
        let trivial = r.leaf_count() == 1;
        ensure(trivial == oracle.is_identity(), || format!("{w}: reduced to {r}, oracle identity {}", oracle.is_identity()))?;
        if oracle.is_identity() {
            identities += 1;
            ensure(r.perm().is_identity(), || format!("{w}: identity with permutation {:?}", r.perm()))?;
        }
    }
    Ok(format!("{} words agree with the piecewise oracle, {identities} of them trivial", corpus.len()))
}

fn normal_forms(corpus: &[Word]) -> Check {
    let mut counts = [0usize; 3];
    let mut longest = 0;
    for w in corpus {
        let v = compile_word(w).unwrap();
        let class = v.classify();
        let nf = to_normal_word(&v).map_err(|e| format!("{w}: {e}"))?;
        check_normal_shape(&nf, class).map_err(|e| format!("{w}: {e}"))?;
        ensure(compile_word(&nf).unwrap().equals(&v), || format!("{w}: normal form {nf} is a different element"))?;
        counts[class as usize] += 1;
        longest = longest.max(nf.len());
    }
    Ok(format!(
        "{} words (F {}, T {}, V {}), longest normal form {longest} symbols",
        corpus.len(),
        counts[0],
        counts[1],
        counts[2]
    ))
}

fn perturb<R: Rng>(rng: &mut R, d: &TreePairDiagram) -> TreePairDiagram {
    let mut d = d.clone();
    match rng.gen_range(0..4) {
        0 => {
            let leaf = rng.gen_range(0..d.leaf_count());
            let c = Caret::all()[rng.gen_range(0..2)];
            d = d.expand(leaf, c).unwrap();
        }
        1 | 2 => {
            let domain = rng.gen_bool(0.5);
            let tree = if domain { d.domain() } else { d.range() };
            let sites: Vec<_> = tree
                .caret_paths()
                .into_iter()
                .flat_map(|p| tree.moves_at(&p).into_iter().map(move |mv| (p.clone(), mv)))
                .collect();
            if sites.is_empty() {
                let leaf = rng.gen_range(0..d.leaf_count());
                d = d.expand(leaf, Caret::X).unwrap();
            } else {
                let (path, mv) = sites[rng.gen_range(0..sites.len())].clone();
                let step = Step::Move { path, mv };
                if domain {
                    d.apply_domain_step(&step).unwrap();
                } else {
                    d.apply_range_step(&step).unwrap();
                }
            }
        }
        _ => d = d.reduce(),
    }
    d
}

fn parity() -> Check {
    let mut rng = seeded(77);
    for _ in 0..PARITY_DIAGRAMS {
        let len = rng.gen_range(1..=20);
        let w = random_word(&mut rng, len, &TAU_KINDS, CORPUS_MAX_INDEX);
        let v = compile_word(&w).unwrap();
        let expected = w.y_parity();
        ensure(v.y_parity() == expected, || format!("{w}: diagram parity differs from word parity"))?;
        let mut d = v.clone();
        for step in 0..PARITY_PERTURBATIONS {
            d = perturb(&mut rng, &d);
            ensure(d.y_parity() == expected, || format!("{w}: parity changed after {step} perturbations"))?;
        }
        ensure(d.equals(&v), || format!("{w}: perturbations changed the element"))?;
    }
    for _ in 0..PARITY_PAIRS {
        let (la, lb) = (rng.gen_range(0..=15), rng.gen_range(0..=15));
        let a = compile_word(&random_word(&mut rng, la, &TAU_KINDS, CORPUS_MAX_INDEX)).unwrap();
        let b = compile_word(&random_word(&mut rng, lb, &TAU_KINDS, CORPUS_MAX_INDEX)).unwrap();
        let ab = a.compose(&b).unwrap();
        ensure(ab.y_parity() == a.y_parity() ^ b.y_parity(), || format!("parity of {a} * {b}"))?;
    }
    for n in 0..=RELATOR_MAX_INDEX {
        for (s, want) in [(GeneratorSymbol::x(n), 0), (GeneratorSymbol::y(n), 1), (GeneratorSymbol::p(n), 0)] {
            ensure(generator(s).unwrap().y_parity() == want, || format!("parity of {s}"))?;
        }
        if n >= 1 {
            ensure(generator(GeneratorSymbol::c(n)).unwrap().y_parity() == 0, || format!("parity of c{n}"))?;
        }
    }
    Ok(format!(
        "{PARITY_DIAGRAMS} diagrams x {PARITY_PERTURBATIONS} perturbations, {PARITY_PAIRS} products, generator values x,c,p -> 0 and y -> 1"
    ))
}

fn factorization() -> Check {
    let mut rng = seeded(31);
    let mut total = 0;
    let mut pairings = 0;
    for _ in 0..FACTOR_WORDS {
        let len = rng.gen_range(1..=16);
        let w = random_even_word(&mut rng, len, &TAU_KINDS, CORPUS_MAX_INDEX);
        let v = compile_word(&w).unwrap();
        let ts = factor_into_proper_transpositions(&v).map_err(|e| format!("{w}: {e}"))?;
        let product = TreePairDiagram::product(ts.iter().map(|t| t.diagram())).unwrap();
        ensure(product.equals(&v), || format!("{w}: product of {} transpositions differs", ts.len()))?;
        for t in &ts {
            ensure(t.diagram().y_parity() == 0, || format!("{w}: factor with parity 1"))?;
            ensure(t.tree().caret_count() >= 3, || format!("{w}: factor on {} carets", t.tree().caret_count()))?;
            ensure(t.diagram().perm().cycles().len() == 1 && t.diagram().perm().support().len() == 2, || {
                format!("{w}: factor is not a transposition")
            })?;
        }
        let audit = factor_into_permutations(&v).unwrap().audit;
        ensure(is_canonical_start(&v, &audit), || format!("{w}: audit does not start at the canonical triple"))?;
        for pair in audit.windows(2) {
            let drop = pair[0].y_carets as i64 - pair[1].y_carets as i64;
            let want = if pair[1].y_step { 2 } else { 0 };
            ensure(drop == want, || format!("{w}: audit step {:?} -> {:?}", pair[0], pair[1]))?;
            pairings += pair[1].y_step as usize;
        }
        ensure(audit.last().is_none_or(|s| s.y_carets == 0), || format!("{w}: y-carets left over"))?;
        total += ts.len();
    }
    Ok(format!("{FACTOR_WORDS} words, {total} proper transpositions, {pairings} pairing steps each removing 2 y-carets"))
}

fn is_canonical_start(v: &TreePairDiagram, audit: &[irrslope::parity::Stage]) -> bool {
    let c = irrslope::canonical::canonical_triple(v).unwrap();
    is_canonical(&c)
        && audit.first().is_none_or(|s| {
            s.y_carets == c.domain().count_type(Caret::Y) + c.range().count_type(Caret::Y)
        })
}

fn random_transposition<R: Rng>(rng: &mut R, ys: Option<usize>) -> ProperTransposition {
    let carets = rng.gen_range(3..8);
    let mut t: CaretTree = random_tree(rng, carets);
    if let Some(ys) = ys {
        // force the y-caret count by growing an x-spine plus `ys` y-leaves
        t = CaretTree::spine(carets, Caret::X);
        for i in 0..ys {
            t.expand_leaf_in_place(2 * i, Caret::Y).unwrap();
        }
    }
    let k = t.leaf_count();
    let a = rng.gen_range(0..k);
    let b = (a + rng.gen_range(1..k)) % k;
    ProperTransposition::on(t, a, b).unwrap()
}

fn conjugators() -> Check {
    let mut rng = seeded(13);
    let mut fixed = 0;
    for i in 0..CONJUGATOR_PAIRS {
        // every fourth pair has y-caret counts of opposite parity
        let (t1, t2) = if i % 4 == 0 {
            (random_transposition(&mut rng, Some(1)), random_transposition(&mut rng, Some(0)))
        } else {
            (random_transposition(&mut rng, None), random_transposition(&mut rng, None))
        };
        let g = conjugator(&t1, &t2).map_err(|e| e.to_string())?;
        ensure(member(&g, Group::Vxz), || format!("conjugator {g} has parity 1"))?;
        let lhs = TreePairDiagram::product([&g, t2.diagram(), &g.invert()]).unwrap();
        ensure(lhs.equals(t1.diagram()), || format!("g t2 g^-1 != t1 for {t1:?}, {t2:?}"))?;
        if (t1.tree().count_type(Caret::Y) + t2.tree().count_type(Caret::Y)) % 2 == 1 {
            fixed += 1;
        }
    }
    ensure(fixed >= CONJUGATOR_PAIRS / 4, || format!("only {fixed} pairs needed the parity fix"))?;
    Ok(format!("{CONJUGATOR_PAIRS} pairs, {fixed} needing the parity-fixing caret"))
}

fn beta() -> Check {
    let report = verify_beta_relators(BETA_MAX_INDEX);
    if let Some(f) = report.failures.first() {
        return Err(format!("{} relator failures, first {}", report.failures.len(), f.instance));
    }
    let mut rng = seeded(55);
    for _ in 0..BETA_PAIRS {
        let (la, lb) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
        let wa = random_word(&mut rng, la, &BETA_KINDS, CORPUS_MAX_INDEX);
        let wb = random_word(&mut rng, lb, &BETA_KINDS, CORPUS_MAX_INDEX);
        let a = compile_beta_word(&wa).unwrap();
        let b = compile_beta_word(&wb).unwrap();
        let ab = a.compose(&b).unwrap();
        ensure(index4_class(&ab) == index4_class(&a) + index4_class(&b), || format!("class of ({wa})({wb})"))?;
    }
    let witnesses = index4_witnesses().map_err(|e| e.to_string())?;
    for (rho, phi) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let want = Index4Class { rho, phi };
        ensure(witnesses.iter().any(|w| index4_class(w) == want), || format!("no witness for {want}"))?;
    }
    let mut odd = 0;
    for _ in 0..10 {
        let carets = rng.gen_range(1..5);
        let t: irrslope::TernaryCaretTree = random_tree(&mut rng, carets);
        let k = t.leaf_count();
        let perm = Permutation::from_vec({
            let mut p: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            p
        })
        .unwrap();
        let v = BetaDiagram::new(t.clone(), perm, random_range(&mut rng, k)).unwrap();
        let sign = perm_sign(&v);
        odd += sign as usize;
        let mut d = v.clone();
        for _ in 0..BETA_EXPANSIONS {
            let leaf = rng.gen_range(0..d.leaf_count());
            d = d.expand(leaf, TernaryCaret::all()[rng.gen_range(0..3)]).unwrap();
            ensure(perm_sign(&d) == sign, || "sign changed under expansion".into())?;
        }
        ensure(d.equals(&v), || "expansions changed the element".into())?;
    }
    Ok(format!(
        "{} relator instances up to index {BETA_MAX_INDEX}; {BETA_PAIRS} products; 4 witnesses; 10 diagrams ({odd} odd) x {BETA_EXPANSIONS} expansions",
        report.total()
    ))
}

/// Ternary tree with exactly `k` leaves.
fn random_range<R: Rng>(rng: &mut R, k: usize) -> irrslope::TernaryCaretTree {
    random_tree(rng, (k - 1) / 2)
}

/// Sign of `p + q·√d`, computed from a truncated decimal expansion of `√d`.
fn oracle_sign(p: i128, q: i128, d: u32) -> i8 {
    let scale = BigInt::from(10).pow(ORACLE_DIGITS);
    let root = (BigInt::from(d) * &scale * &scale).sqrt();
    let value = BigInt::from(p) * &scale + BigInt::from(q) * root;
    // the truncation error is below |q|, far smaller than any nonzero value
    match value.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn sample_pairs<R: Rng>(rng: &mut R) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    // convergents of τ and β, where the values are closest to zero
    let (mut f0, mut f1) = (0i128, 1i128);
    let (mut p0, mut p1) = (0i128, 1i128);
    for _ in 0..60 {
        out.push((f0, -f1));
        out.push((-f0, f1));
        out.push((p0, -p1));
        (f0, f1) = (f1, f0 + f1);
        (p0, p1) = (p1, 2 * p1 + p0);
    }
    while out.len() < SIGN_SAMPLES {
        let bits = rng.gen_range(1..100);
        let m = 1i128 << bits;
        out.push((rng.gen_range(-m..=m), rng.gen_range(-m..=m)));
    }
    out
}

fn ring_layer() -> Check {
    for e in -TAU_POWER_MAX..=TAU_POWER_MAX {
        let p = ZTau::tau_power(e);
        ensure(p * ZTau::tau_power(-e) == ZTau::one(), || format!("tau^{e} * tau^{} != 1", -e))?;
        ensure(p.sign() == 1, || format!("tau^{e} is not positive"))?;
        let b = ZBeta::beta_power(e);
        ensure(b * ZBeta::beta_power(-e) == ZBeta::one(), || format!("beta^{e} * beta^{} != 1", -e))?;
    }
    let mut rng = seeded(101);
    let pairs = sample_pairs(&mut rng);
    for &(a, b) in &pairs {
        // a + bτ = ((2a − b) + b√5)/2 and a + bβ = (a − b) + b√2
        let tau = ZTau::new(a, b).sign();
        ensure(tau == oracle_sign(2 * a - b, b, 5), || format!("sign of {a}+{b}*t"))?;
        let beta = ZBeta::new(a, b).sign();
        ensure(beta == oracle_sign(a - b, b, 2), || format!("sign of {a}+{b}*s"))?;
    }
    let binary = shape_classes::<Caret>();
    let binary_pairs: Vec<_> = binary.values().filter(|v| v.len() > 1).collect();
    ensure(binary_pairs.len() == 1 && binary_pairs[0].len() == 2, || format!("binary classes {binary:?}"))?;
    ensure(derive_basic_moves::<Caret>().len() == 2, || "binary moves".into())?;
    let ternary: Vec<String> = shape_classes::<TernaryCaret>()
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(widths, v)| {
            let shapes: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            format!("{} {:?}", shapes.join(" = "), widths)
        })
        .collect();
    ensure(ternary.len() == 4, || format!("ternary pairs {ternary:?}"))?;
    Ok(format!(
        "powers |e| <= {TAU_POWER_MAX}; {} sign samples per ring; binary 1 pair; ternary pairs: {}",
        pairs.len(),
        ternary.join(", ")
    ))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("relators", Box::new(relators)),
        ("generator orders", Box::new(generator_orders)),
        ("cycle raising", Box::new(cycle_raising)),
        ("word problem", Box::new(|| word_problem(&corpus))),
        ("normal form", Box::new(|| normal_forms(&corpus))),
        ("parity", Box::new(parity)),
        ("factorization", Box::new(factorization)),
        ("conjugacy", Box::new(conjugators)),
        ("ternary", Box::new(beta)),
        ("ring layer", Box::new(ring_layer)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name:<17} PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name:<17} FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

