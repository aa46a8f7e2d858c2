use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

use super::random::{integral, measured_track, track};
use super::*;
use crate::spinemoves::{pachner, PachnerMove};
use crate::surf::is_isomorphic;

fn lcg(seed: u64) -> impl FnMut(usize) -> usize {
    let mut s = seed;
    move |n| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 33) as usize) % n
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Genus-2 track whose four regions are all trigons.
fn all_trigons() -> TrainTrack {
    let mut pick = lcg(7);
    for _ in 0..200 {
        let t = track(2, 3, &mut pick).unwrap();
        if t.regions_and_indices().regions.iter().all(|r| r.cusps == 3) {
            return t;
        }
    }
    panic!("no all-trigon track found");
}

/// Diagonal weight by laying integer strands through the split rectangle.
fn strand_oracle(a: usize, b: usize, c: usize, d: usize) -> usize {
    assert_eq!(a + b, c + d);
    // strand i enters at height i from the top and leaves at height i
    (0..a + b).filter(|&i| (i < a) != (i < c)).count()
}

#[test]
fn switch_condition_and_positivity() {
    let t = all_trigons();
    let mut pick = lcg(3);
    let mu = super::random::measure(&t, &mut pick).unwrap();
    let r = validate_track(&t, Some(&mu));
    assert!(r.ok(), "{r}");
    let [l, x, y] = t.switches()[0];
    let mut ws: Vec<BigRational> = mu.weights().iter().map(|w| w.as_rational().unwrap()).collect();
    assert_eq!(ws[l / 2], &ws[x / 2] + &ws[y / 2]);
    ws[x / 2] = int(-1);
    let bad = validate_track(&t, Some(&Measure::rational(&ws)));
    assert!(bad.issues.contains(&Issue::PositivityFailure { branch: x / 2 }));
    assert!(bad.to_string().contains("PositivityFailure"));
}

#[test]
fn five_is_two_plus_three() {
    let t = all_trigons();
    let [l, x, y] = t.switches()[0];
    let fixed = [(x / 2, int(2)), (y / 2, int(3))];
    let mut found = None;
    for k in 1..20 {
        let scaled: Vec<(usize, BigRational)> = fixed.iter().map(|(b, v)| (*b, v * int(k))).collect();
        if let Some(w) = positive_solution_with(&t, None, &scaled) {
            found = Some((k, w));
            break;
        }
    }
    let (k, w) = found.expect("switch weights 2k, 3k realisable");
    assert_eq!(w[l / 2], int(5 * k));
    assert!(switch_failures(&t, &Measure::rational(&w)).unwrap().is_empty());
}

#[test]
fn trigons_and_duality() {
    let t = all_trigons();
    assert_eq!(t.num_switches(), 12);
    assert_eq!(t.num_branches(), 18);
    let r = t.regions_and_indices();
    assert_eq!(r.regions.len(), 4);
    assert!(r.filling);
    for reg in &r.regions {
        assert_eq!(reg.index, Rational64::new(-1, 2));
    }
    assert_eq!(r.total_index(), Rational64::from_integer(-2));
    assert_eq!(t.genus(), 2);
    let d = t.dual_triangulation().unwrap();
    let rep = d.report();
    assert_eq!((rep.vertices, rep.faces, rep.edges), (4, 12, 18));
}

#[test]
fn classification_counts() {
    let mut pick = lcg(11);
    for _ in 0..20 {
        let t = track(2, 2, &mut pick).unwrap();
        let cls = t.classify_branches();
        let lone_slots: usize = cls
            .iter()
            .map(|c| match c {
                BranchClass::Large => 2,
                BranchClass::Mixed => 1,
                BranchClass::Small => 0,
            })
            .sum();
        assert_eq!(lone_slots, t.num_switches());
        assert!(cls.contains(&BranchClass::Large));
    }
}

#[test]
fn slide_is_an_involution() {
    let mut pick = lcg(5);
    let mut slid = 0;
    for _ in 0..20 {
        let t = track(2, 2, &mut pick).unwrap();
        let cls = t.classify_branches();
        for b in 0..t.num_branches() {
            match cls[b] {
                BranchClass::Mixed => {
                    let Ok(s) = slide(&t, b) else { continue };
                    slid += 1;
                    assert_eq!(s.num_branches(), t.num_branches());
                    assert_eq!(s.regions_and_indices().regions.len(), t.regions_and_indices().regions.len());
                    assert_eq!(s.regions_and_indices().total_index(), t.regions_and_indices().total_index());
                    assert_eq!(slide(&s, b).unwrap(), t);
                }
                _ => assert!(matches!(slide(&t, b), Err(TrackError::NotMixed(x)) if x == b)),
            }
        }
    }
    assert!(slid > 20);
}

#[test]
fn splits_keep_or_drop_one_branch() {
    let mut pick = lcg(9);
    let mut central_seen = 0;
    for _ in 0..20 {
        let t = track(2, 3, &mut pick).unwrap();
        let regions = t.regions_and_indices().regions.len();
        for (b, c) in t.classify_branches().into_iter().enumerate() {
            if c != BranchClass::Large {
                assert!(matches!(split(&t, b, SplitChoice::Left), Err(TrackError::NotLarge(_))));
                continue;
            }
            for ch in [SplitChoice::Left, SplitChoice::Right] {
                let s = split(&t, b, ch).unwrap();
                assert_eq!(s.num_branches(), t.num_branches());
                assert_eq!(s.regions_and_indices().regions.len(), regions);
                assert_eq!(s.genus(), t.genus());
                // the dual triangulations differ by flipping the edge of b
                let (flipped, _) = pachner(&t.dual_triangulation().unwrap(), PachnerMove::Flip22(2 * b)).unwrap();
                assert!(is_isomorphic(flipped.surface(), s.dual_triangulation().unwrap().surface()));
            }
            if let Ok(s) = split(&t, b, SplitChoice::Central) {
                assert_eq!(s.num_branches(), t.num_branches() - 3);
                assert_eq!(s.num_switches(), t.num_switches() - 2);
                assert_eq!(s.genus(), t.genus());
                assert_eq!(s.regions_and_indices().total_index(), t.regions_and_indices().total_index());
                // the cusp regions at the two ends of b merge
                let (f0, f1) = {
                    let faces = t.to_surface().face_of();
                    let r = t.parts().0;
                    (faces[r[r[2 * b]]], faces[r[r[2 * b + 1]]])
                };
                if f0 != f1 {
                    assert_eq!(s.regions_and_indices().regions.len(), regions - 1);
                    central_seen += 1;
                } else {
                    assert!(!s.regions_and_indices().filling);
                    assert!(matches!(s.dual_triangulation(), Err(TrackError::NotFilling(_))));
                }
            }
        }
    }
    assert!(central_seen > 10);
}

#[test]
fn measured_split_matches_strand_oracle() {
    let mut pick = lcg(21);
    let mut checked = 0;
    while checked < 40 {
        let (t, mu) = measured_track(2, 2, &mut pick).unwrap();
        let mu = integral(&mu);
        for (b, c) in t.classify_branches().into_iter().enumerate() {
            if c != BranchClass::Large {
                assert!(matches!(measured_split(&t, &mu, b), Err(TrackError::NotLarge(_))));
                continue;
            }
            let w = |d: usize| mu.weight(d / 2).as_rational().unwrap().to_integer().try_into().unwrap();
            let (p, q) = (t.parts().0[2 * b], t.parts().0[2 * b + 1]);
            let (a, bb, d, cc) = (w(p), w(t.parts().0[p]), w(q), w(t.parts().0[q]));
            let Ok((s, nu)) = measured_split(&t, &mu, b) else { continue };
            checked += 1;
            assert!(switch_failures(&s, &nu).unwrap().is_empty());
            let expected = strand_oracle(a, bb, cc, d);
            if expected == 0 {
                assert_eq!(s.num_branches(), t.num_branches() - 3);
            } else {
                assert_eq!(nu.weight(b).as_rational().unwrap(), int(expected as i64));
            }
        }
    }
}

#[test]
fn measured_split_three_two_one_four() {
    let mut pick = lcg(33);
    for _ in 0..200 {
        let t = track(2, 2, &mut pick).unwrap();
        for (b, c) in t.classify_branches().into_iter().enumerate() {
            if c != BranchClass::Large {
                continue;
            }
            let r = t.parts().0;
            let (nw, sw) = (r[2 * b], r[r[2 * b]]);
            let (se, ne) = (r[2 * b + 1], r[r[2 * b + 1]]);
            let bs = [nw / 2, sw / 2, ne / 2, se / 2];
            if (0..4).any(|i| (0..i).any(|j| bs[i] == bs[j])) {
                continue;
            }
            let fixed = [(nw / 2, int(3)), (sw / 2, int(2)), (ne / 2, int(1)), (se / 2, int(4))];
            let Some(w) = positive_solution_with(&t, None, &fixed) else { continue };
            let mu = Measure::rational(&w);
            assert_eq!(split_choice(&t, &mu, b).unwrap(), SplitChoice::Left);
            let (_, nu) = measured_split(&t, &mu, b).unwrap();
            assert_eq!(nu.weight(b).as_rational().unwrap(), int(2));
            assert_eq!(strand_oracle(3, 2, 1, 4), 2);
            return;
        }
    }
    panic!("no track realises the weights 3, 2, 1, 4");
}

#[test]
fn maximal_split_is_deterministic_and_valid() {
    let mut pick = lcg(41);
    let mut multi = 0;
    for _ in 0..30 {
        let (mut t, mut mu) = measured_track(2, 2, &mut pick).unwrap();
        for _ in 0..6 {
            let a = maximal_split(&t, &mu);
            let b = maximal_split(&t, &mu);
            assert_eq!(a, b);
            let Ok(m) = a else { break };
            if m.events.len() > 1 {
                multi += 1;
            }
            let r = validate_track(&m.track, Some(&m.measure));
            assert!(switch_failures(&m.track, &m.measure).unwrap().is_empty());
            assert!(!r.issues.iter().any(|i| matches!(i, Issue::PositivityFailure { .. })));
            assert_eq!(r.regions.total_index(), Rational64::from_integer(-2));
            t = m.track;
            mu = m.measure;
        }
    }
    assert!(multi > 0);
}

#[test]
fn text_round_trip() {
    let mut pick = lcg(2);
    let (t, mu) = measured_track(3, 1, &mut pick).unwrap();
    let text = write_track(&t, Some(&mu));
    assert!(text.starts_with("format: 1\n"));
    let (t2, mu2) = parse_track(&text).unwrap();
    assert_eq!(t2, t);
    assert_eq!(mu2.unwrap(), mu);
    assert!(parse_track("switch 0: lone=0 top=1\n").is_err());
    assert!(matches!(
        parse_track("switch 0: lone=0 top=1 bottom=2\nswitch 1: lone=3 top=4 bottom=5\n"),
        Err(TrackError::BadSmoothing(_)) | Err(TrackError::Disconnected) | Ok(_)
    ));
}

#[test]
fn index_zero_region_is_not_a_train_track() {
    let t = all_trigons();
    let (rot, lone) = t.parts();
    // move a cusp out of one trigon into another region: one region drops to
    // two cusps and index zero
    let reg = &t.regions_and_indices().regions[0];
    let e = *reg.cycles[0].iter().find(|&&d| t.is_bottom(d)).unwrap();
    let l = rot[e];
    let mut lone2 = lone.to_vec();
    for d in [e, l, rot[l]] {
        lone2[d] = false;
    }
    lone2[rot[l]] = true;
    let bad = TrainTrack::new(rot.to_vec(), lone2).unwrap();
    let r = validate_track(&bad, None);
    assert!(!r.is_train_track());
    assert!(r.to_string().contains("NegativeIndexFailure"));
}


#[test]
fn central_split_can_leave_an_annulus() {
    let mut pick = lcg(13);
    for _ in 0..200 {
        let t = track(2, 3, &mut pick).unwrap();
        for (b, c) in t.classify_branches().into_iter().enumerate() {
            if c != BranchClass::Large {
                continue;
            }
            let Ok(s) = split(&t, b, SplitChoice::Central) else { continue };
            let Some(g) = s.groups().first() else { continue };
            if g.darts.len() != 2 || g.genus != 0 {
                continue;
            }
            let r = s.regions_and_indices();
            assert!(!r.filling);
            let annulus = r.regions.iter().find(|x| x.cycles.len() == 2).unwrap();
            assert_eq!(annulus.euler, 0);
            assert_eq!(r.total_index(), Rational64::from_integer(-2));
            assert!(matches!(s.dual_triangulation(), Err(TrackError::NotFilling(_))));
            let text = write_track(&s, None);
            assert!(text.contains("region: darts="));
            assert_eq!(parse_track(&text).unwrap().0, s);
            let report = validate_track(&s, None);
            assert!(report.to_string().contains("filling: false"));
            return;
        }
    }
    panic!("no annulus found");
}

