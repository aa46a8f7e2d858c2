use super::*;
use crate::surf::bouquet;
use crate::surf::spine_to_triangulation;
use crate::track::random::measured_track;

fn tmp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("layered-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn lcg(seed: u64) -> impl FnMut(usize) -> usize {
    let mut s = seed;
    move |n| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 33) % n as u64) as usize
    }
}

fn track_file(name: &str) -> String {
    let (t, mu) = measured_track(2, 1, &mut lcg(3)).unwrap();
    tmp(name, &write_track(&t, Some(&mu)))
}

#[test]
fn lens_7_3() {
    let o = run(["lens", "7", "3"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("format: 1\n"));
    assert!(o.stdout.contains("[2,3] sum=5\n"));
    assert!(o.stdout.contains("bound: k*5 <= "));
    let o = run(["lens", "6", "3"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("NotCoprime"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(["lens", "seven", "3"]).code, 2);
    assert_eq!(run(["nonsense"]).code, 2);
    assert_eq!(run(["tt", "validate", "/nonexistent/track.txt"]).code, 2);
    let p = tmp("garbage.txt", "switch 0: what\n");
    let o = run(["tt", "validate", &p]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("ParseError"));
}

#[test]
fn negative_weight_names_positivity() {
    let (t, mu) = measured_track(2, 1, &mut lcg(4)).unwrap();
    let good = write_track(&t, Some(&mu));
    let p = tmp("ok.txt", &good);
    let o = run(["tt", "validate", &p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.ends_with("status: ok\n"));
    let bad = good.replacen("weight=", "weight=-", 1);
    let p = tmp("neg.txt", &bad);
    let o = run(["tt", "validate", &p]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("PositivityFailure"), "{}", o.stderr);
}

#[test]
fn zero_steps() {
    let p = track_file("z.txt");
    let o = run(["tt", "period", &p, "--steps", "0"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("Exhausted"));
    let o = run(["tt", "pachner-path", &p, "--steps", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.ends_with("moves: 0\n"));
}

#[test]
fn split_is_deterministic() {
    let p = track_file("s.txt");
    let a = run(["tt", "split", &p, "--steps", "12"]);
    let b = run(["tt", "split", &p, "--steps", "12"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, b);
    assert!(a.stdout.starts_with("format: 1\nsteps: "));
}

#[test]
fn identity_mapping_torus_homology() {
    let t = spine_to_triangulation(&bouquet(2).expanded_to_trivalent()).unwrap();
    let s = tmp("g2.txt", &t.surface().to_text());
    let out = std::env::temp_dir().join(format!("layered-cli-{}", std::process::id())).join("g2.tri");
    let out = out.to_string_lossy().into_owned();
    let o = run(["m3", "build", "--surface", &s, "--close", "identity", "--out", &out]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("H1 = Z^5\n"));
    let o = run(["m3", "homology", &out]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout, "format: 1\ntets: 18\nH1 = Z^5\n");
    let o = run(["m3", "build", "--surface", &s, "--close", "none", "--out", &out]);
    assert_eq!(o.code, 0);
    let o = run(["m3", "homology", &out]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("NotClosed"));
}

fn join(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

#[test]
fn spine_subcommands() {
    use crate::spinemoves::random;
    let mut pick = lcg(5);
    let s = random::trivalent_spine(2, 10, &mut pick);
    let spec = random::swap(&s, &mut pick);
    let p = tmp("spine.txt", &s.to_text());
    let o = run(["spine", "swap", &p, "--move", &Move::Swap(spec).to_string()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("format: 1\nmoves: "));
    assert!(o.stdout.contains("result:\n"));
    assert_eq!(run(["spine", "swap", &p, "--move", "contract e1"]).code, 2);

    let t = random::triangulation(2, 3, 6, &mut pick);
    let c = t.surface().clone();
    let cp = tmp("carrier.txt", &c.to_text());
    let a = join(&random::cellular_spine(&c, &mut pick).darts());
    let b = join(&random::cellular_spine(&c, &mut pick).darts());
    let o = run(["spine", "align", &cp, "--from", &a, "--to", &b]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("cell_moves: "));
    let f = (0..c.faces().len()).find(|&f| CellDisc::new(&c, &[f]).is_ok()).unwrap().to_string();
    let o = run(["spine", "offdisc", &cp, "--spine", &a, "--faces", &f]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = run(["spine", "align", &cp, "--from", "0", "--to", &b]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.starts_with("error: NotCellular"), "{}", o.stderr);
}
