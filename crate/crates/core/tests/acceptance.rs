//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use layered::build3::{
    continued_fraction, homology, mapping_torus, monodromy_homology, validate_3manifold, Homology,
};
use layered::cli;
use layered::numfield::{ArithOp, NumberField, NumberFieldElement};
use layered::orbit::{detect_period, pachner_path, plant, splitting_sequence, OrbitError, SplitSequence};
use layered::spinemoves::{
    align_spines, edge_swap, edge_swap_elementary, pachner, random, slide_spine_off_disc, Move, MoveTarget,
    PachnerMove,
};
use layered::surf::{bouquet, isomorphisms, spine_to_triangulation, DartMap, Triangulation2};
use layered::track::random::{field_measure, measured_track, track};
use layered::track::{
    maximal_split, measured_split, positive_solution_with, switch_failures, BranchClass, Measure, TrackError,
    TrainTrack,
};

type Outcome = Result<String, String>;

fn picker(seed: u64) -> impl FnMut(usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    move |n| rng.gen_range(0..n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn cubic() -> Arc<NumberField> {
    NumberField::new(vec![(-1).into(), (-1).into(), 0.into(), 1.into()], rat(13, 10), rat(14, 10)).unwrap()
}

fn counting() -> Outcome {
    let mut pick = picker(1);
    let mut n = 0;
    for i in 0..500 {
        let g = 2 + i % 3;
        let t = if i % 2 == 0 {
            random::one_vertex_triangulation(g, 10, &mut pick)
        } else {
            random::triangulation(g, 1 + i % 4, 10, &mut pick)
        };
        let (v, f, e) = (t.num_vertices(), t.num_triangles(), t.surface().num_darts() / 2);
        ensure(t.genus() == g && f == 2 * v + 4 * g - 4 && e == 3 * v + 6 * g - 6, || {
            format!("triangulation g={g}: V={v} F={f} E={e}")
        })?;
        let s = random::trivalent_spine(g, 10, &mut pick);
        ensure(s.genus() == g && s.num_vertices() == 4 * g - 2 && s.num_edges() == 6 * g - 3, || {
            format!("spine g={g}: V={} E={}", s.num_vertices(), s.num_edges())
        })?;
        n += 1;
    }
    Ok(format!("{n} triangulations and {n} spines"))
}

fn move_bounds() -> Outcome {
    let mut pick = picker(2);
    let mut worst = [0.0f64; 3];
    for i in 0..200 {
        let g = 2 + i % 2;
        let s = random::trivalent_spine(g, 40, &mut pick);
        let spec = random::swap(&s, &mut pick);
        let seq = edge_swap_elementary(&s, &spec).map_err(|e| format!("swap: {e}"))?;
        ensure(seq.len() <= 24 * g, || format!("swap used {} moves at genus {g}", seq.len()))?;
        let end = seq.replay_spine(&s).map_err(|e| e.to_string())?;
        let want = edge_swap(&s, &spec).map_err(|e| e.to_string())?;
        ensure(end.same_up_to_relabeling(&want), || "swap replay differs".into())?;
        worst[0] = worst[0].max(seq.len() as f64 / (24 * g) as f64);
    }
    let mut done = 0;
    let mut i = 0;
    while done < 200 {
        i += 1;
        let g = 2 + i % 2;
        let t = random::triangulation(g, 8, 10, &mut pick);
        let c = t.surface().clone();
        let s = random::cellular_spine(&c, &mut pick);
        let Some(d) = random::disc(&c, 2 + i % 6, &mut pick) else { continue };
        let off = slide_spine_off_disc(&s, &d).map_err(|e| format!("offdisc: {e}"))?;
        let bound = 6 * g + 2 * d.boundary_length();
        ensure(off.moves.len() <= bound, || format!("offdisc used {} > {bound}", off.moves.len()))?;
        match off.moves.replay(&MoveTarget::Cellular(s.clone())).map_err(|e| e.to_string())? {
            MoveTarget::Cellular(r) => ensure(r == off.result, || "offdisc replay differs".into())?,
            _ => return Err("offdisc replay changed type".into()),
        }
        worst[1] = worst[1].max(off.moves.len() as f64 / bound as f64);
        done += 1;
    }
    for i in 0..50 {
        let g = 2 + i % 2;
        let t = random::triangulation(g, 4, 10, &mut pick);
        let c = t.surface().clone();
        let a = random::cellular_spine(&c, &mut pick);
        let b = random::cellular_spine(&c, &mut pick);
        let al = align_spines(&a, &b).map_err(|e| format!("align: {e}"))?;
        let bound = 48 * g * g * a.num_cells();
        ensure(al.moves.len() <= bound, || format!("align used {} > {bound}", al.moves.len()))?;
        let end = al.moves.replay_spine(&al.start).map_err(|e| e.to_string())?;
        ensure(
            end.same_up_to_relabeling(&al.end)
                && al.start.same_up_to_relabeling(&a.intrinsic())
                && al.end.same_up_to_relabeling(&b.intrinsic()),
            || "align endpoints differ".into(),
        )?;
        worst[2] = worst[2].max(al.moves.len() as f64 / bound as f64);
    }
    Ok(format!("worst ratio to bound: swap {:.3}, offdisc {:.3}, align {:.3}", worst[0], worst[1], worst[2]))
}

fn track_exactness() -> Outcome {
    let mut pick = picker(3);
    let (mut splits, mut maximal, mut degenerate) = (0, 0, 0);
    for i in 0..1000 {
        let g = 2 + i % 2;
        let (t, mu) = measured_track(g, i % 4, &mut pick).ok_or("no random track")?;
        let r = t.regions_and_indices();
        let chi = 2 - 2 * g as i64;
        ensure(r.total_index() == chi.into(), || format!("index sum {} != {chi}", r.total_index()))?;
        if r.filling {
            ensure(r.regions.len() <= 4 * g - 4, || format!("{} regions at genus {g}", r.regions.len()))?;
        }
        let classes = t.classify_branches();
        if let Some(b) = (0..t.num_branches()).find(|&b| classes[b] == BranchClass::Large) {
            match measured_split(&t, &mu, b) {
                Ok((s, nu)) => {
                    ensure(switch_failures(&s, &nu).map_err(|e| e.to_string())?.is_empty(), || {
                        "switch failure after measured split".into()
                    })?;
                    splits += 1;
                }
                Err(TrackError::Degenerate(_)) => degenerate += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
        match maximal_split(&t, &mu) {
            Ok(m) => {
                ensure(switch_failures(&m.track, &m.measure).map_err(|e| e.to_string())?.is_empty(), || {
                    "switch failure after maximal split".into()
                })?;
                maximal += 1;
            }
            Err(TrackError::Degenerate(_)) => degenerate += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("1000 tracks, {splits} single and {maximal} maximal splits checked, {degenerate} degenerate"))
}

/// Diagonal weight by laying integer strands through the rectangle.
fn strand_oracle(a: i64, b: i64, c: i64) -> i64 {
    (0..a + b).filter(|&i| (i < a) != (i < c)).count() as i64
}

fn split_oracle() -> Outcome {
    let mut pick = picker(4);
    let (mut plain, mut central, mut tries, mut degenerate) = (0, 0, 0, 0);
    while plain + central < 500 {
        tries += 1;
        if tries > 200_000 {
            return Err(format!("only {plain} + {central} rectangles realised"));
        }
        let t = track(2, 2, &mut pick).ok_or("no random track")?;
        let classes = t.classify_branches();
        let Some(b) = (0..t.num_branches()).find(|&b| classes[b] == BranchClass::Large) else { continue };
        let (nw, se) = (t.rot(2 * b), t.rot(2 * b + 1));
        let (sw, ne) = (t.rot(nw), t.rot(se));
        let bs = [nw / 2, sw / 2, ne / 2, se / 2];
        if (0..4).any(|i| (0..i).any(|j| bs[i] == bs[j])) {
            continue;
        }
        let force = central < 50 && pick(10) == 0;
        let a = 1 + pick(6) as i64;
        let s = a + 1 + pick(6) as i64;
        let c = if force { a } else { 1 + pick((s - 1) as usize) as i64 };
        let fixed = [(bs[0], a), (bs[1], s - a), (bs[2], c), (bs[3], s - c)];
        let fixed: Vec<(usize, BigRational)> = fixed.iter().map(|&(x, v)| (x, rat(v, 1))).collect();
        let Some(w) = positive_solution_with(&t, None, &fixed) else { continue };
        let k = 1 + pick(5) as i64;
        let w: Vec<BigRational> = w.iter().map(|x| x / rat(k, 1)).collect();
        let mu = Measure::rational(&w);
        let (split, nu) = match measured_split(&t, &mu, b) {
            Ok(x) => x,
            Err(TrackError::Degenerate(_)) => {
                degenerate += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let want = strand_oracle(a, s - a, c);
        if want == 0 {
            ensure(split.num_branches() + 3 == t.num_branches(), || "central split kept the branch".into())?;
            central += 1;
        } else {
            let got = nu.weight(b).as_rational().ok_or("irrational weight")? * rat(k, 1);
            ensure(got == rat(want, 1), || format!("diagonal {got} != oracle {want} for {a},{},{c}", s - a))?;
            plain += 1;
        }
    }
    ensure(central >= 50, || format!("only {central} central cases"))?;
    Ok(format!("{plain} diagonal + {central} central rectangles ({degenerate} degenerate splits skipped)"))
}

struct Planted {
    seq: SplitSequence,
    n: usize,
    m: usize,
}

fn random_perm(nb: usize, pick: &mut impl FnMut(usize) -> usize) -> Vec<usize> {
    let mut branches: Vec<usize> = (0..nb).collect();
    for i in (1..nb).rev() {
        branches.swap(i, pick(i + 1));
    }
    let mut perm = vec![0; 2 * nb];
    for b in 0..nb {
        let flip = pick(2);
        perm[2 * b] = 2 * branches[b] + flip;
        perm[2 * b + 1] = 2 * branches[b] + 1 - flip;
    }
    perm
}

fn plantings(count: usize, seed: u64) -> Result<Vec<(Planted, NumberFieldElement)>, String> {
    let mut pick = picker(seed);
    let fields = [NumberField::golden(), cubic()];
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 20 * count {
            return Err(format!("only {} plantings succeeded", out.len()));
        }
        let field = &fields[out.len() % 2];
        let t = track(2, 3, &mut pick).ok_or("no random track")?;
        let Some(mu) = field_measure(&t, field, &mut pick) else { continue };
        let (n, m) = (1 + pick(3), 1 + pick(3));
        let pre = splitting_sequence(&t, &mu, n).map_err(|e| e.to_string())?;
        if pre.len() <= n {
            continue;
        }
        let perm = random_perm(pre.steps[n].track.num_branches(), &mut pick);
        let x = NumberFieldElement::generator(field);
        let lambda = if pick(2) == 0 { x.clone() } else { x.arith(&x, ArithOp::Mul).unwrap() };
        let Ok(seq) = plant(&t, &mu, n, m, &perm, &lambda, 3) else { continue };
        out.push((Planted { seq, n, m }, lambda));
    }
    Ok(out)
}

fn period_detection() -> Outcome {
    for (i, (p, lambda)) in plantings(20, 5)?.iter().enumerate() {
        let r = detect_period(&p.seq, None).map_err(|e| format!("planting {i}: {e}"))?;
        ensure((r.preperiod, r.period) == (p.n, p.m) && &r.lambda == lambda && r.consistent, || {
            format!("planting {i}: got ({}, {}, {}) want ({}, {}, {lambda})", r.preperiod, r.period, r.lambda, p.n, p.m)
        })?;
    }
    let mut pick = picker(6);
    let limit = 300;
    let mut at_limit = 0;
    for i in 0..20 {
        let (t, mu) = measured_track(2, i % 3, &mut pick).ok_or("no random track")?;
        let seq = splitting_sequence(&t, &mu, limit).map_err(|e| e.to_string())?;
        match detect_period(&seq, None) {
            Err(OrbitError::Exhausted(k)) if k == seq.len() => {}
            other => return Err(format!("rational measure {i}: {other:?}")),
        }
        if seq.len() == limit + 1 {
            at_limit += 1;
        }
    }
    Ok(format!("20 plantings recovered; 20 rational measures exhausted ({at_limit} ran to the limit {limit}, the rest halted)"))
}

fn path_contract() -> Outcome {
    let bound = 18 * 2 - 18;
    let mut segments = 0;
    let mut moves = 0;
    for (i, (p, _)) in plantings(20, 7)?.iter().enumerate() {
        let last = p.seq.len() - 1;
        for (from, to) in [(0, p.n + p.m - 1), (p.n + p.m, last)] {
            let path = pachner_path(&p.seq, from, to).map_err(|e| format!("planting {i} {from}..{to}: {e}"))?;
            for (k, &c) in path.per_step.iter().enumerate() {
                let events = p.seq.steps[from + 1 + k].events.len();
                ensure(c == events && c <= bound, || format!("step {}: {c} moves for {events} splits", from + 1 + k))?;
            }
            let start = p.seq.steps[from].track.dual_triangulation().map_err(|e| e.to_string())?;
            let end = p.seq.steps[to].track.dual_triangulation().map_err(|e| e.to_string())?;
            let mut tri = path.start.clone();
            for mv in &path.moves.moves {
                let Move::Pachner(pm) = mv else { return Err("non-Pachner move in path".into()) };
                tri = pachner(&tri, *pm).map_err(|e| e.to_string())?.0;
            }
            ensure(path.start == start && tri == path.end && path.end.same_up_to_relabeling(&end), || {
                format!("planting {i} {from}..{to}: endpoints differ from the duals")
            })?;
            segments += 1;
            moves += path.moves.len();
        }
    }
    Ok(format!("{segments} segments, {moves} flips, every split within {bound}"))
}

fn flip_loops(t: &Triangulation2, depth: usize, limit: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut frontier = vec![(t.clone(), Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (u, word) in &frontier {
            let m = u.surface();
            for d in (0..m.num_darts()).filter(|&d| d < m.opp(d)) {
                let Ok((v, _)) = pachner(u, PachnerMove::Flip22(d)) else { continue };
                let mut w: Vec<usize> = word.clone();
                w.push(d);
                if let Some(phi) = isomorphisms(v.surface(), t.surface()).into_iter().next() {
                    out.push((w.clone(), phi));
                    if out.len() >= limit {
                        return out;
                    }
                }
                next.push((v, w));
            }
        }
        frontier = next;
    }
    out
}

fn mapping_tori() -> Outcome {
    let t = spine_to_triangulation(&bouquet(2).expanded_to_trivalent()).map_err(|e| e.to_string())?;
    let id: Vec<usize> = (0..t.surface().num_darts()).collect();
    let x = mapping_torus(&t, &[], &id).map_err(|e| e.to_string())?;
    let r = validate_3manifold(&x);
    let h = homology(&x).map_err(|e| e.to_string())?;
    ensure(r.valid() && r.closed && r.orientable && r.euler == 0 && r.links.iter().all(|&x| x == 2), || format!("identity torus: {r}"))?;
    ensure(x.num_tets() == 18 && h.to_string() == "H1 = Z^5", || format!("identity torus: {} tets, {h}", x.num_tets()))?;
    let mut twist = None;
    for (w, phi) in flip_loops(&t, 3, 40) {
        let moves: Vec<PachnerMove> = w.iter().map(|&d| PachnerMove::Flip22(d)).collect();
        let x = mapping_torus(&t, &moves, &phi).map_err(|e| e.to_string())?;
        ensure(x.num_tets() == 18 + w.len(), || format!("{} tets for a path of {}", x.num_tets(), w.len()))?;
        let r = validate_3manifold(&x);
        ensure(r.valid(), || format!("loop {w:?}: {r}"))?;
        let h = homology(&x).map_err(|e| e.to_string())?;
        let oracle = monodromy_homology(&t, &w, &phi).map_err(|e| e.to_string())?;
        ensure(h == oracle, || format!("loop {w:?}: {h} but oracle {oracle}"))?;
        if twist.is_none() && h == (Homology { rank: 4, torsion: vec![] }) {
            twist = Some(w);
        }
    }
    let w = twist.ok_or("no twist among flip loops")?;
    Ok(format!("identity: 18 tets, H1 = Z^5; twist word {w:?}: {} tets, H1 = Z^4 = oracle", 18 + w.len()))
}

fn euclid(p: i64, q: i64) -> Vec<i64> {
    if q == 0 {
        Vec::new()
    } else {
        let mut v = vec![p / q];
        v.extend(euclid(q, p % q));
        v
    }
}

fn lens() -> Outcome {
    let mut n = 0;
    for p in 2..200i64 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                ensure(continued_fraction(p, q).is_err(), || format!("({p},{q}) accepted"))?;
                continue;
            }
            let cf = continued_fraction(p, q).map_err(|e| e.to_string())?;
            let want = euclid(p, q);
            let s: i64 = want.iter().sum();
            ensure(cf.terms == want && cf.sum == s, || format!("L({p},{q}): {:?}", cf.terms))?;
            let text = cf.report();
            let terms: Vec<String> = want.iter().map(|t| t.to_string()).collect();
            ensure(
                text.starts_with(&format!("format: 1\nlens: L({p},{q})\n[{}] sum={s}\n", terms.join(",")))
                    && text.contains(&format!("bound: k*{s} <= Δ(L({p},{q})) <= {s} (k > 0 universal constant)\n")),
                || format!("report for L({p},{q}):\n{text}"),
            )?;
            let exact = format!("exact: Δ(L({p},1)) = p-3 = {}\n", p - 3);
            ensure(text.contains(&exact) == (q == 1 && p % 2 == 0 && p >= 4), || format!("exact line for L({p},{q})"))?;
            n += 1;
        }
    }
    Ok(format!("{n} coprime pairs"))
}

fn imul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let ps = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = ps.iter().min().unwrap().clone();
    let hi = ps.iter().max().unwrap().clone();
    (lo, hi)
}

/// Enclosure of `x` from its coefficients and a root interval `root`.
fn enclose(x: &NumberFieldElement, root: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in x.coeffs().iter().rev() {
        let m = imul(&acc, root);
        acc = (m.0 + c, m.1 + c);
    }
    acc
}

fn random_element(field: &Arc<NumberField>, pick: &mut impl FnMut(usize) -> usize) -> NumberFieldElement {
    let coeffs = (0..field.degree()).map(|_| rat(pick(11) as i64 - 5, 1 + pick(4) as i64)).collect();
    NumberFieldElement::new(field, coeffs)
}

fn expression(field: &Arc<NumberField>, depth: usize, pick: &mut impl FnMut(usize) -> usize) -> NumberFieldElement {
    if depth == 0 {
        return random_element(field, pick);
    }
    let a = expression(field, depth - 1, pick);
    let b = expression(field, depth - 1, pick);
    let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div][pick(4)];
    a.arith(&b, op).unwrap_or(a)
}

fn exact_arithmetic() -> Outcome {
    let mut pick = picker(9);
    let fields = [NumberField::golden(), cubic()];
    let width = BigRational::new(BigInt::one(), BigInt::from(10).pow(100));
    let roots: Vec<_> = fields.iter().map(|f| f.refine_to(&width)).collect();
    let mut nonzero = 0;
    for i in 0..1000 {
        let f = &fields[i % 2];
        let a = expression(f, 2, &mut pick);
        let b = expression(f, 2, &mut pick);
        let (lo, hi) = enclose(&a, &roots[i % 2]);
        let sign = a.sign();
        let agrees = if lo.is_positive() {
            sign == 1
        } else if hi.is_negative() {
            sign == -1
        } else {
            a.is_zero() && sign == 0
        };
        ensure(agrees, || format!("sign {sign} of {a} against [{lo}, {hi}]"))?;
        let back = a.arith(&b, ArithOp::Add).and_then(|s| s.arith(&b, ArithOp::Sub)).map_err(|e| e.to_string())?;
        ensure(back == a, || format!("({a} + {b}) - {b} = {back}"))?;
        if !a.is_zero() {
            let one = a.arith(&a.inverse().map_err(|e| e.to_string())?, ArithOp::Mul).map_err(|e| e.to_string())?;
            ensure(one == NumberFieldElement::one(f), || format!("{a} * 1/{a} = {one}"))?;
            nonzero += 1;
        }
    }
    Ok(format!("1000 expressions, {nonzero} inverses"))
}

fn pipeline(dir: &std::path::Path, t: &TrainTrack, mu: &Measure, surface: &Triangulation2) -> Vec<String> {
    std::fs::create_dir_all(dir).unwrap();
    let tr = dir.join("track.txt");
    let sf = dir.join("surface.txt");
    let mv = dir.join("moves.txt");
    let tri = dir.join("torus.tri");
    let tail = dir.join("tail.txt");
    std::fs::write(&tr, layered::track::write_track(t, Some(mu))).unwrap();
    std::fs::write(&sf, surface.surface().to_text()).unwrap();
    std::fs::write(&mv, "moves: 2\np22 d0\np22 d0\n").unwrap();
    let s = |p: &std::path::PathBuf| p.to_string_lossy().into_owned();
    let runs = [
        vec!["tt".into(), "validate".into(), s(&tr)],
        vec!["tt".into(), "split".into(), s(&tr), "--steps".into(), "25".into(), "--out".into(), s(&tail)],
        vec!["tt".into(), "period".into(), s(&tr), "--steps".into(), "25".into()],
        vec!["tt".into(), "pachner-path".into(), s(&tr), "--steps".into(), "25".into()],
        vec!["m3".into(), "build".into(), "--surface".into(), s(&sf), "--moves".into(), s(&mv), "--out".into(), s(&tri)],
        vec!["m3".into(), "homology".into(), s(&tri)],
        vec!["lens".into(), "7".into(), "3".into()],
    ];
    let mut out = Vec::new();
    for args in runs {
        let o = cli::run(args);
        out.push(format!("{}\n{}\n{}", o.code, o.stdout, o.stderr));
    }
    for f in [&tail, &tri] {
        out.push(std::fs::read_to_string(f).unwrap_or_default());
    }
    out
}

fn determinism() -> Outcome {
    let mut pick = picker(10);
    let t = track(2, 3, &mut pick).ok_or("no random track")?;
    let mu = field_measure(&t, &NumberField::golden(), &mut pick).ok_or("no field measure")?;
    let surface = random::one_vertex_triangulation(2, 7, &mut pick);
    let base = std::env::temp_dir().join(format!("layered-acceptance-{}", std::process::id()));
    let a = pipeline(&base.join("a"), &t, &mu, &surface);
    let b = pipeline(&base.join("b"), &t, &mu, &surface);
    let a: Vec<String> = a.iter().map(|x| x.replace(&base.join("a").to_string_lossy().into_owned(), "")).collect();
    let b: Vec<String> = b.iter().map(|x| x.replace(&base.join("b").to_string_lossy().into_owned(), "")).collect();
    let _ = std::fs::remove_dir_all(&base);
    ensure(a == b, || "outputs differ between runs".into())?;
    let bytes: usize = a.iter().map(|x| x.len()).sum();
    ensure(a[4].starts_with("0\n") && a[5].contains("H1 = "), || format!("pipeline failed:\n{}\n{}", a[4], a[5]))?;
    Ok(format!("{} outputs, {bytes} bytes identical", a.len()))
}

/// Bypasses the test harness capture so the summary shows in plain runs.
fn line(s: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("counting identities", 10, counting),
        ("move-length bounds", 60, move_bounds),
        ("train-track exactness", 60, track_exactness),
        ("measured-split oracle", 10, split_oracle),
        ("period detection", 120, period_detection),
        ("pachner-path contract", 120, path_contract),
        ("mapping-torus pipeline", 30, mapping_tori),
        ("lens continued fractions", 60, lens),
        ("exact arithmetic", 120, exact_arithmetic),
        ("determinism", 120, determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let r = f();
        let dt = t0.elapsed();
        let r = match r {
            Ok(s) if dt > Duration::from_secs(*limit) => Err(format!("{s}; took {dt:.1?} > {limit} s")),
            other => other,
        };
        match &r {
            Ok(s) => line(format!("criterion {}: PASS {name}: {s} ({dt:.1?})", i + 1)),
            Err(s) => {
                line(format!("criterion {}: FAIL {name}: {s} ({dt:.1?})", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
