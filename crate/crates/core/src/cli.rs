//! Command-line front end. [`run`] returns the exit code and both output
//! streams so it can be driven from tests.

use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::build3::{self, continued_fraction, homology, validate_3manifold, Triangulation3};
use crate::numfield::parse_field;
use crate::orbit::{self, detect_period, pachner_path, render_period, render_sequence, splitting_sequence};
use crate::spinemoves::{
    align_spines, edge_swap_elementary, pachner, slide_spine_off_disc, CellDisc, CellularSpine, Move, MoveSeq,
    PachnerMove,
};
use crate::surf::{isomorphisms, CombSurface, Spine, Triangulation2};
use crate::track::{parse_track, validate_track, write_track, Measure, TrainTrack};

pub const DEFAULT_STEPS: usize = 10000;

#[derive(Parser, Debug)]
#[command(name = "layered", version, about = "Train tracks, spines and layered triangulations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Measured train tracks.
    #[command(subcommand)]
    Tt(Tt),
    /// Layered 3-manifold triangulations.
    #[command(subcommand)]
    M3(M3),
    /// Spine moves.
    #[command(subcommand)]
    Spine(SpineCmd),
    /// Continued fraction and complexity bounds of L(p,q).
    Lens {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
    },
}

#[derive(Args, Debug)]
struct Steps {
    /// Maximum number of maximal splits.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
}

#[derive(Subcommand, Debug)]
enum Tt {
    /// Check a track file and its optional measure.
    Validate { track: PathBuf },
    /// Run maximal splits and print one line per step.
    Split {
        track: PathBuf,
        #[command(flatten)]
        steps: Steps,
        /// Write the last track here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a projectively periodic step.
    Period {
        track: PathBuf,
        #[command(flatten)]
        steps: Steps,
        /// Common field, as `field:<coeffs>;iv:<lo>,<hi>`.
        #[arg(long)]
        field: Option<String>,
        /// Write key=value period data here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// 2-2 moves dual to the splits between two steps.
    PachnerPath {
        track: PathBuf,
        #[command(flatten)]
        steps: Steps,
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Defaults to the last step.
        #[arg(long)]
        to: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum M3 {
    /// Layer moves onto S×I and optionally close up.
    Build {
        /// Triangulated surface file.
        #[arg(long, conflicts_with = "track", required_unless_present = "track")]
        surface: Option<PathBuf>,
        /// Pachner moves to layer.
        #[arg(long, requires = "surface")]
        moves: Option<PathBuf>,
        /// `identity`, `auto`, `none`, or a file of top-to-bottom dart images.
        #[arg(long, default_value = "auto")]
        close: String,
        /// Build from the period of a measured track instead.
        #[arg(long)]
        track: Option<PathBuf>,
        #[command(flatten)]
        steps: Steps,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First homology of a closed triangulation.
    Homology { triangulation: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SpineCmd {
    /// Elementary moves realising one edge swap.
    Swap {
        spine: PathBuf,
        /// e.g. `swap out=e7 in=c3,s5 new=e9`
        #[arg(long = "move")]
        mv: String,
    },
    /// Connect two cellular spines of one carrier.
    Align {
        carrier: PathBuf,
        /// Carrier darts of the first spine, comma separated.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Slide a cellular spine off a disc of carrier faces.
    Offdisc {
        carrier: PathBuf,
        #[arg(long)]
        spine: String,
        /// Carrier faces of the disc, comma separated.
        #[arg(long)]
        faces: String,
    },
}

/// Exit code and the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Parse(String),
    Domain(String),
}

/// Parse errors in any module render with a `ParseError:` prefix.
fn classify(e: impl Display) -> Failure {
    let s = e.to_string();
    if s.starts_with("ParseError") {
        Failure::Parse(s)
    } else {
        Failure::Domain(s)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("IoError: {}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Failure::Domain(format!("IoError: {}: {e}", path.display())))
}

fn list(s: &str) -> Res<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Failure::Parse(format!("ParseError: bad index '{x}'"))))
        .collect()
}

fn load_track(path: &PathBuf) -> Res<(TrainTrack, Option<Measure>)> {
    parse_track(&read(path)?).map_err(classify)
}

fn measured(path: &PathBuf) -> Res<(TrainTrack, Measure)> {
    match load_track(path)? {
        (t, Some(mu)) => Ok((t, mu)),
        _ => Err(Failure::Domain("InvalidMeasure: track file has no weights".into())),
    }
}

fn surface(path: &PathBuf) -> Res<CombSurface> {
    CombSurface::parse(&read(path)?).map_err(classify)
}

/// Runs the command line `args` (without the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("layered")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.cmd, &mut out) {
        Ok(()) => Outcome { code: 0, stdout: out, stderr: String::new() },
        Err(Failure::Domain(m)) => Outcome { code: 1, stdout: out, stderr: format!("error: {m}\n") },
        Err(Failure::Parse(m)) => Outcome { code: 2, stdout: out, stderr: format!("error: {m}\n") },
    }
}

fn dispatch(cmd: Cmd, out: &mut String) -> Res<()> {
    match cmd {
        Cmd::Lens { p, q } => {
            out.push_str(&continued_fraction(p, q).map_err(classify)?.report());
            Ok(())
        }
        Cmd::Tt(c) => tt(c, out),
        Cmd::M3(c) => m3(c, out),
        Cmd::Spine(c) => spine(c, out),
    }
}

fn tt(cmd: Tt, out: &mut String) -> Res<()> {
    match cmd {
        Tt::Validate { track } => {
            let (t, mu) = load_track(&track)?;
            let report = validate_track(&t, mu.as_ref());
            out.push_str("format: 1\n");
            out.push_str(&report.to_string());
            out.push('\n');
            match report.issues.first() {
                Some(i) => Err(Failure::Domain(i.to_string())),
                None => Ok(()),
            }
        }
        Tt::Split { track, steps, out: path } => {
            let (t, mu) = measured(&track)?;
            let seq = splitting_sequence(&t, &mu, steps.steps).map_err(classify)?;
            out.push_str(&render_sequence(&seq));
            if let Some(p) = path {
                let last = &seq.steps[seq.len() - 1];
                write(&p, &write_track(&last.track, Some(&last.measure)))?;
            }
            Ok(())
        }
        Tt::Period { track, steps, field, sidecar } => {
            let (t, mu) = measured(&track)?;
            let field = field.map(|f| parse_field(&f)).transpose().map_err(classify)?;
            let seq = splitting_sequence(&t, &mu, steps.steps).map_err(classify)?;
            let report = detect_period(&seq, field.as_ref()).map_err(classify)?;
            let g = validate_track(&t, None).genus.max(0) as usize;
            out.push_str(&render_period(&seq, &report, g));
            if let Some(p) = sidecar {
                write(&p, &report.sidecar())?;
            }
            Ok(())
        }
        Tt::PachnerPath { track, steps, from, to } => {
            let (t, mu) = measured(&track)?;
            let seq = splitting_sequence(&t, &mu, steps.steps).map_err(classify)?;
            let to = to.unwrap_or(seq.len() - 1);
            let path = pachner_path(&seq, from, to).map_err(classify)?;
            let per: Vec<String> = path.per_step.iter().map(|k| k.to_string()).collect();
            out.push_str("format: 1\n");
            out.push_str(&format!("segment: {from}..{to}\n"));
            out.push_str(&format!("per_step: [{}]\n", per.join(",")));
            out.push_str(&path.moves.to_text());
            Ok(())
        }
    }
}

fn pachner_moves(seq: &MoveSeq) -> Res<Vec<PachnerMove>> {
    seq.moves
        .iter()
        .map(|m| match m {
            Move::Pachner(p) => Ok(*p),
            other => Err(Failure::Domain(format!("WrongObject: '{other}' is not a Pachner move"))),
        })
        .collect()
}

fn m3(cmd: M3, out: &mut String) -> Res<()> {
    match cmd {
        M3::Build { surface: surf, moves, close, track, steps, out: path } => {
            let x = match track {
                Some(track) => {
                    let (t, mu) = measured(&track)?;
                    let seq = splitting_sequence(&t, &mu, steps.steps).map_err(classify)?;
                    let report = detect_period(&seq, None).map_err(classify)?;
                    let (p, phi) = orbit::period_monodromy(&seq, &report).map_err(classify)?;
                    build3::mapping_torus(&p.start, &pachner_moves(&p.moves)?, &phi).map_err(classify)?
                }
                None => {
                    let start = Triangulation2::new(surface(&surf.expect("required by clap"))?).map_err(classify)?;
                    let mv = match moves {
                        Some(m) => pachner_moves(&MoveSeq::parse(&read(&m)?).map_err(classify)?)?,
                        None => Vec::new(),
                    };
                    let mut x = build3::collar(&start).map_err(classify)?;
                    for &m in &mv {
                        x = build3::layer_move(&x, m).map_err(classify)?;
                    }
                    close_up(x, &start, &mv, &close)?
                }
            };
            let report = validate_3manifold(&x);
            out.push_str("format: 1\n");
            out.push_str(&report.to_string());
            out.push('\n');
            if x.is_closed() {
                out.push_str(&format!("{}\n", homology(&x).map_err(classify)?));
            }
            match path {
                Some(p) => write(&p, &x.to_text())?,
                None => out.push_str(&x.to_text()),
            }
            Ok(())
        }
        M3::Homology { triangulation } => {
            let x = Triangulation3::parse(&read(&triangulation)?).map_err(classify)?;
            let h = homology(&x).map_err(classify)?;
            out.push_str("format: 1\n");
            out.push_str(&format!("tets: {}\n{h}\n", x.num_tets()));
            Ok(())
        }
    }
}

fn close_up(x: Triangulation3, start: &Triangulation2, moves: &[PachnerMove], how: &str) -> Res<Triangulation3> {
    let mut end = start.clone();
    for &m in moves {
        end = pachner(&end, m).map_err(classify)?.0;
    }
    let phi = match how {
        "none" => return Ok(x),
        "identity" => {
            if &end != start {
                return Err(Failure::Domain("BoundaryMismatch: moves do not return to the start labels".into()));
            }
            (0..start.surface().num_darts()).collect()
        }
        "auto" => isomorphisms(end.surface(), start.surface())
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Domain("BoundaryMismatch: end is not isomorphic to start".into()))?,
        file => list(&read(&PathBuf::from(file))?.replace(char::is_whitespace, ","))?,
    };
    build3::glue_monodromy(&x, &phi).map_err(classify)
}

fn spine(cmd: SpineCmd, out: &mut String) -> Res<()> {
    out.push_str("format: 1\n");
    match cmd {
        SpineCmd::Swap { spine, mv } => {
            let s = Spine::parse(&read(&spine)?).map_err(classify)?;
            let spec = match mv.parse::<Move>().map_err(classify)? {
                Move::Swap(spec) => spec,
                other => return Err(Failure::Parse(format!("ParseError: '{other}' is not a swap"))),
            };
            let seq = edge_swap_elementary(&s, &spec).map_err(classify)?;
            let end = seq.replay_spine(&s).map_err(classify)?;
            out.push_str(&seq.to_text());
            out.push_str("result:\n");
            out.push_str(&end.to_text());
        }
        SpineCmd::Align { carrier, from, to } => {
            let c = surface(&carrier)?;
            let a = CellularSpine::new(c.clone(), &list(&from)?).map_err(classify)?;
            let b = CellularSpine::new(c, &list(&to)?).map_err(classify)?;
            let al = align_spines(&a, &b).map_err(classify)?;
            out.push_str(&format!("cell_moves: {}\n", al.cell_moves.len()));
            out.push_str(&al.moves.to_text());
        }
        SpineCmd::Offdisc { carrier, spine, faces } => {
            let c = surface(&carrier)?;
            let s = CellularSpine::new(c.clone(), &list(&spine)?).map_err(classify)?;
            let d = CellDisc::new(&c, &list(&faces)?).map_err(classify)?;
            let off = slide_spine_off_disc(&s, &d).map_err(classify)?;
            out.push_str(&off.moves.to_text());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
