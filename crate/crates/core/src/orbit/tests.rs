use super::*;
use crate::track::random::{field_measure, measured_track, track};
use crate::track::{switch_failures, BranchClass};
use crate::surf::NONE;
use num_bigint::BigInt;
use num_rational::BigRational;

fn lcg(seed: u64) -> impl FnMut(usize) -> usize {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    move |n| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 33) % n as u64) as usize
    }
}

/// `k`-sheeted cyclic cover: branch `b` lifts to `b·k + i`, whose first dart
/// sits on sheet `i` and second on sheet `i + shift[b]`.
fn cover(t: &TrainTrack, k: usize, shift: &[usize]) -> Option<TrainTrack> {
    let n = t.num_darts();
    let id = |d: usize, i: usize| -> usize {
        let b = d / 2;
        if d.is_multiple_of(2) {
            2 * (b * k + i % k)
        } else {
            2 * (b * k + (i + k - shift[b] % k) % k) + 1
        }
    };
    let mut rot = vec![0; n * k];
    let mut lone = vec![false; n * k];
    for d in 0..n {
        for i in 0..k {
            rot[id(d, i)] = id(t.rot(d), i);
            lone[id(d, i)] = t.is_lone(d);
        }
    }
    TrainTrack::new(rot, lone).ok()
}

/// Automorphism search by replaying dart words from dart 0.
fn word_oracle(a: &TrainTrack, b: &TrainTrack) -> Vec<Vec<usize>> {
    let n = a.num_darts();
    if n != b.num_darts() {
        return Vec::new();
    }
    let mut parent = vec![(NONE, false); n];
    let mut order = vec![0];
    parent[0] = (0, false);
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for (e, via_rot) in [(a.opp(d), false), (a.rot(d), true)] {
            if parent[e].0 == NONE {
                parent[e] = (d, via_rot);
                order.push(e);
            }
        }
        i += 1;
    }
    let mut out = Vec::new();
    for x in 0..n {
        let mut f = vec![NONE; n];
        f[0] = x;
        for &d in &order[1..] {
            let (p, via_rot) = parent[d];
            f[d] = if via_rot { b.rot(f[p]) } else { b.opp(f[p]) };
        }
        let mut hit = vec![false; n];
        let ok = (0..n).all(|d| {
            let fresh = !hit[f[d]];
            hit[f[d]] = true;
            fresh && f[a.opp(d)] == b.opp(f[d]) && f[a.rot(d)] == b.rot(f[d]) && a.is_lone(d) == b.is_lone(f[d])
        });
        if ok {
            out.push(f);
        }
    }
    out
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
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

#[test]
fn limit_zero_keeps_only_the_input() {
    let mut pick = lcg(1);
    let (t, mu) = measured_track(2, 1, &mut pick).unwrap();
    let seq = splitting_sequence(&t, &mu, 0).unwrap();
    assert_eq!(seq.len(), 1);
    assert!(seq.halted.is_none());
    let bad = Measure::from_ints(&vec![1; t.num_branches()]);
    assert!(matches!(splitting_sequence(&t, &bad, 3), Err(OrbitError::InvalidMeasure(_))));
}

#[test]
fn identity_and_size_mismatch() {
    let mut pick = lcg(2);
    let t = track(2, 1, &mut pick).unwrap();
    let isos = find_isomorphisms(&t, &t);
    assert!(isos.contains(&(0..t.num_darts()).collect::<Vec<_>>()));
    let u = track(2, 2, &mut pick).unwrap();
    assert!(find_isomorphisms(&t, &u).is_empty());
}

#[test]
fn cyclic_covers_have_exactly_k_symmetries() {
    let mut pick = lcg(3);
    let mut checked = 0;
    for k in [2usize, 3, 4] {
        for _ in 0..40 {
            let base = track(2, 0, &mut pick).unwrap();
            if find_isomorphisms(&base, &base).len() != 1 {
                continue;
            }
            let shift: Vec<usize> = (0..base.num_branches()).map(|_| pick(k)).collect();
            let Some(c) = cover(&base, k, &shift) else { continue };
            let isos = find_isomorphisms(&c, &c);
            let oracle = word_oracle(&c, &c);
            assert_eq!(isos, oracle);
            assert_eq!(isos.len(), k, "cover of order {k}");
            // group: identity, closure, inverses
            let id: Vec<usize> = (0..c.num_darts()).collect();
            assert!(isos.contains(&id));
            for f in &isos {
                for g in &isos {
                    assert!(isos.contains(&compose(f, g)));
                }
                assert!(isos.iter().any(|g| compose(f, g) == id));
            }
            checked += 1;
            break;
        }
    }
    assert_eq!(checked, 3);
}

#[test]
fn planted_golden_orbit_is_recovered() {
    let golden = NumberField::golden();
    let mut pick = lcg(4);
    let t = track(2, 3, &mut pick).unwrap();
    let mu = field_measure(&t, &golden, &mut pick).unwrap();
    let seq0 = splitting_sequence(&t, &mu, 6).unwrap();
    assert_eq!(seq0.len(), 7, "{:?}", seq0.halted);
    let (n, m) = (2, 3);
    let perm = random_perm(seq0.steps[n].track.num_branches(), &mut pick);
    let phi = NumberFieldElement::generator(&golden);
    let lambda = phi.arith(&phi, ArithOp::Mul).unwrap();
    let seq = plant(&t, &mu, n, m, &perm, &lambda, 4).unwrap();
    assert_eq!(seq.replay_failures(), vec![n + m]);
    let r = detect_period(&seq, None).unwrap();
    assert_eq!((r.preperiod, r.period), (n, m));
    assert_eq!(r.lambda, lambda);
    assert!(r.consistent && r.warnings.is_empty());
    // iso undoes perm up to a symmetry of step n
    let back = compose(&r.iso, &perm);
    assert!(find_isomorphisms(&seq.steps[n].track, &seq.steps[n].track).contains(&back));
    assert!(switch_failures(&seq.steps[n + m].track, &seq.steps[n + m].measure).unwrap().is_empty());
}

#[test]
fn perturbed_ratio_is_rejected_and_unit_ratio_warns() {
    let golden = NumberField::golden();
    let mut pick = lcg(5);
    let t = track(2, 3, &mut pick).unwrap();
    let mu = field_measure(&t, &golden, &mut pick).unwrap();
    let perm: Vec<usize> = (0..t.num_darts()).collect();
    let one = NumberFieldElement::one(&golden);
    let seq = plant(&t, &mu, 1, 2, &perm, &one, 0).unwrap();
    let r = detect_period(&seq, None).unwrap();
    assert_eq!((r.preperiod, r.period), (1, 2));
    assert_eq!(r.warnings.len(), 1);

    let mut bad = seq.clone();
    let last = bad.steps.last_mut().unwrap();
    let mut w = last.measure.weights().to_vec();
    w[0] = w[0].arith(&one, ArithOp::Add).unwrap();
    last.measure = Measure::new(w).unwrap();
    assert_eq!(detect_period(&bad, None), Err(OrbitError::Exhausted(4)));
}

#[test]
fn rational_measures_exhaust() {
    let mut pick = lcg(6);
    for _ in 0..3 {
        let (t, mu) = measured_track(2, 1, &mut pick).unwrap();
        let seq = splitting_sequence(&t, &mu, 30).unwrap();
        assert!(matches!(detect_period(&seq, None), Err(OrbitError::Exhausted(_))));
    }
}

#[test]
fn mixed_fields_need_a_field() {
    let golden = NumberField::golden();
    let mut pick = lcg(7);
    let t = track(2, 3, &mut pick).unwrap();
    let mu = field_measure(&t, &golden, &mut pick).unwrap();
    let cubic = NumberField::new(
        vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(0), BigInt::from(1)],
        BigRational::new(13.into(), 10.into()),
        BigRational::new(14.into(), 10.into()),
    )
    .unwrap();
    let nu = field_measure(&t, &cubic, &mut pick).unwrap();
    let mut seq = splitting_sequence(&t, &mu, 1).unwrap();
    seq.steps.push(Step { track: t.clone(), measure: nu, events: Vec::new() });
    assert_eq!(detect_period(&seq, None), Err(OrbitError::FieldRequired));
    assert!(matches!(detect_period(&seq, Some(&golden)), Err(OrbitError::NumField(_))));
}

#[test]
fn bounds_formula() {
    let golden = NumberField::golden();
    let mut r = PeriodReport {
        preperiod: 0,
        period: 5,
        iso: Vec::new(),
        lambda: NumberFieldElement::one(&golden),
        consistent: true,
        warnings: Vec::new(),
    };
    assert_eq!(length_bounds(&r, 2).upper, 90);
    r.period = 1;
    assert_eq!(length_bounds(&r, 3).upper, 36);
    assert!(length_bounds(&r, 3).to_string().contains(">= m/Q (Q non-constructive)"));
}

#[test]
fn pachner_paths_follow_splits() {
    let golden = NumberField::golden();
    let mut pick = lcg(8);
    let t = track(2, 3, &mut pick).unwrap();
    let mu = field_measure(&t, &golden, &mut pick).unwrap();
    let seq = splitting_sequence(&t, &mu, 8).unwrap();
    let p = pachner_path(&seq, 0, 1).unwrap();
    assert_eq!(p.moves.moves.len(), seq.steps[1].events.len());
    let p = pachner_path(&seq, 0, seq.len() - 1).unwrap();
    let total: usize = seq.steps.iter().map(|s| s.events.len()).sum();
    assert_eq!(p.moves.moves.len(), total);
    assert!(p.per_step.iter().all(|&k| k <= 18));
    assert_eq!(p.start, seq.steps[0].track.dual_triangulation().unwrap());
    assert!(p.end.same_up_to_relabeling(&seq.steps[seq.len() - 1].track.dual_triangulation().unwrap()));
    // replay on the start
    let mut tri = p.start.clone();
    for mv in &p.moves.moves {
        let Move::Pachner(pm) = mv else { unreachable!() };
        tri = pachner(&tri, *pm).unwrap().0;
    }
    assert_eq!(tri, p.end);
}

#[test]
fn central_split_blocks_the_path() {
    let mut pick = lcg(9);
    for _ in 0..200 {
        let t = track(2, 1, &mut pick).unwrap();
        let classes = t.classify_branches();
        let Some(b) = (0..t.num_branches()).find(|&b| classes[b] == BranchClass::Large) else { continue };
        let seq = SplitSequence {
            steps: vec![
                Step { track: t.clone(), measure: Measure::from_ints(&vec![1; t.num_branches()]), events: vec![] },
                Step {
                    track: t.clone(),
                    measure: Measure::from_ints(&vec![1; t.num_branches()]),
                    events: vec![SplitEvent { branch: b, choice: SplitChoice::Central }],
                },
            ],
            halted: None,
        };
        assert_eq!(pachner_path(&seq, 0, 1), Err(OrbitError::CentralSplitPresent(1)));
        return;
    }
    panic!("no large branch");
}

#[test]
fn planted_jump_has_no_monodromy() {
    let golden = NumberField::golden();
    let mut pick = lcg(10);
    let t = track(2, 3, &mut pick).unwrap();
    let mu = field_measure(&t, &golden, &mut pick).unwrap();
    let (n, m) = (1, 2);
    let seq0 = splitting_sequence(&t, &mu, n).unwrap();
    let perm = random_perm(seq0.steps[n].track.num_branches(), &mut pick);
    let phi = NumberFieldElement::generator(&golden);
    let seq = plant(&t, &mu, n, m, &perm, &phi, 2).unwrap();
    let r = detect_period(&seq, None).unwrap();
    assert!(matches!(period_monodromy(&seq, &r), Err(OrbitError::EndpointMismatch(_))));
    let p = pachner_path(&seq, n, n + m - 1).unwrap();
    assert_eq!(p.moves.len(), (n + 1..n + m).map(|k| seq.steps[k].events.len()).sum::<usize>());
}
