use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use polynewt::classify::{bk_theorem_check, detect_bk, is_negligible};
use polynewt::corpus::{self, CorpusEntry, CorpusOptions, Fault};
use polynewt::degrees::{DegreeKind, DegreeQuery};
use polynewt::e_newton::{e_newton, euler_obstructions, is_dual_defective, ProjectivePoint};
use polynewt::ehrhart::{codegree, degree, ehrhart_polynomial, h_star, is_join, is_thin, is_trivially_thin, local_h_star};
use polynewt::io::{PosetJson, SubdivisionJson};
use polynewt::mixed_volume::{cayley_volume_identity, mixed_volume, MixedVolumeQuery};
use polynewt::newton::{ell_newton, newton_number};
use polynewt::geom::cayley_sum;
use polynewt::{ConeSpec, Error, LatticePointSet, Polytope};

#[derive(Parser)]
#[command(name = "polynewt", version, about = "Exact invariants of lattice polytopes and point sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Vertices, facets and f-vector.
    Hull { input: PathBuf },
    /// Normalized lattice volume.
    Volume { input: PathBuf },
    /// Ehrhart polynomial, coefficients as fractions.
    Ehrhart { input: PathBuf },
    /// h*-polynomial.
    Hstar { input: PathBuf },
    /// Local h*-polynomial.
    Lstar { input: PathBuf },
    /// Thinness, degree, codegree and join tests.
    Thin { input: PathBuf },
    /// Newton number in a cone.
    Newton {
        #[arg(long)]
        cone: Option<String>,
        #[arg(long)]
        terms: bool,
        input: PathBuf,
    },
    /// ℓ-Newton number with the intermediate polynomials.
    EllNewton {
        #[arg(long)]
        cone: Option<String>,
        input: PathBuf,
    },
    /// e-Newton number at a point of QP^n, written `x_1:...:x_n:w`.
    ENewton {
        #[arg(long)]
        point: Option<String>,
        input: PathBuf,
    },
    /// c-numbers and Euler obstructions of every face of the set.
    EulerObstructions { input: PathBuf },
    /// Dual defect test.
    DualDefect { input: PathBuf },
    /// Mixed volume; each input may carry a repeat count as `file:count`.
    MixedVolume {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Cayley sum and its volume identity.
    Cayley {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// B_k certificate in an orthant-product cone.
    Bk {
        #[arg(long)]
        cone: Option<String>,
        input: PathBuf,
    },
    /// Negligibility, cross-checked against B_k detection when possible.
    Negligible {
        #[arg(long)]
        cone: Option<String>,
        input: PathBuf,
    },
    /// Algebraic degrees from supports.
    Degree {
        kind: Kind,
        #[arg(required = true)]
        supports: Vec<PathBuf>,
        /// Comma-separated weight vector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<i64>>,
        #[arg(long)]
        homog_degree: Option<i64>,
    },
    /// Bundled corpus.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
    /// Poset and subdivision invariants.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mml,
    Ml,
    Ed,
    Polar,
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Runs the invariant checks.
    Verify {
        /// Seed range `a..b`.
        #[arg(long, alias = "seed", default_value = "0..500")]
        seeds: String,
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Ids of the bundled entries.
    List,
    /// One bundled entry.
    Show { id: String },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// g-polynomial.
    G { input: PathBuf },
    /// h-polynomial.
    H { input: PathBuf },
    /// Eulerian class.
    Class { input: PathBuf },
    /// h-polynomial of the twins-poset.
    Twins { input: PathBuf },
    /// Local h-polynomial of a subdivision map at the top and bottom.
    LocalH { input: PathBuf },
}

enum Failure {
    Usage(String),
    Internal(String),
    Checks(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type Out = std::result::Result<Value, Failure>;

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> std::result::Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { String::new() } else { format!(" at {path}") };
        Failure::Usage(format!("{origin}{at}: {}", e.into_inner()))
    })
}

struct Input {
    set: LatticePointSet,
    cone: Option<ConeSpec>,
    homog_degree: Option<i64>,
}

/// A bare point set, or a corpus entry with its transform applied.
fn load(path: &Path) -> std::result::Result<Input, Failure> {
    let text = read_text(path)?;
    let origin = path.display().to_string();
    let v: Value = parse(&text, &origin)?;
    if v.get("points").is_some_and(Value::is_object) {
        let e: CorpusEntry = parse(&text, &origin)?;
        Ok(Input { set: e.point_set()?, cone: e.cone.clone(), homog_degree: e.homog_degree })
    } else {
        Ok(Input { set: parse(&text, &origin)?, cone: None, homog_degree: None })
    }
}

fn load_polytope(path: &Path) -> std::result::Result<Polytope, Failure> {
    Ok(load(path)?.set.hull())
}

fn cone_arg(arg: &Option<String>, input: &Input) -> std::result::Result<ConeSpec, Failure> {
    match arg {
        Some(s) if s.trim_start().starts_with('{') => parse(s, "--cone"),
        Some(s) => parse(&read_text(Path::new(s))?, s),
        None => input.cone.clone().ok_or_else(|| Failure::Usage("no cone given and the input carries none".into())),
    }
}

fn coeffs(v: impl serde::Serialize) -> Value {
    json!({ "coeffs": v })
}

fn run(cmd: Cmd) -> Out {
    Ok(match cmd {
        Cmd::Hull { input } => {
            let p = load_polytope(&input)?;
            let mut f = vec![0usize; p.dim() + 2];
            for face in p.faces() {
                f[(face.dim + 1) as usize] += 1;
            }
            let facets: Vec<Value> =
                p.facets().iter().map(|x| json!({"normal": x.normal, "offset": x.offset})).collect();
            json!({"dim": p.dim(), "vertices": p.vertices(), "facets": facets, "f_vector": &f[1..f.len() - 1]})
        }
        Cmd::Volume { input } => {
            let p = load_polytope(&input)?;
            json!({"dim": p.dim(), "volume": p.lattice_volume()})
        }
        Cmd::Ehrhart { input } => coeffs(ehrhart_polynomial(&load_polytope(&input)?)),
        Cmd::Hstar { input } => coeffs(h_star(&load_polytope(&input)?)?),
        Cmd::Lstar { input } => coeffs(local_h_star(&load_polytope(&input)?)?),
        Cmd::Thin { input } => {
            let p = load_polytope(&input)?;
            json!({
                "thin": is_thin(&p)?,
                "trivially_thin": is_trivially_thin(&p)?,
                "degree": degree(&p)?,
                "codegree": codegree(&p),
                "join": is_join(&p),
            })
        }
        Cmd::Newton { cone, terms, input } => {
            let inp = load(&input)?;
            let c = cone_arg(&cone, &inp)?.build()?;
            let p = inp.set.hull();
            if terms {
                let r = ell_newton(&p, &c)?;
                json!({"nu": r.nu, "face_terms": r.face_terms})
            } else {
                json!({"nu": newton_number(&p, &c)?})
            }
        }
        Cmd::EllNewton { cone, input } => {
            let inp = load(&input)?;
            let c = cone_arg(&cone, &inp)?.build()?;
            serde_json::to_value(ell_newton(&inp.set.hull(), &c)?).expect("report serializes")
        }
        Cmd::ENewton { point, input } => {
            let a = load(&input)?.set;
            let q = match point {
                Some(s) => s.parse::<ProjectivePoint>()?,
                None => ProjectivePoint::origin(a.ambient_dim()),
            };
            json!({"point": q, "e_newton": e_newton(&a, &q)?})
        }
        Cmd::EulerObstructions { input } => {
            let t = euler_obstructions(&load(&input)?.set)?;
            let faces: Vec<Value> = t
                .faces
                .iter()
                .zip(t.obstructions())
                .map(|(f, e)| json!({"points": f.points, "dim": f.dim, "volume": f.volume, "obstruction": e}))
                .collect();
            json!({"faces": faces, "c": t.c})
        }
        Cmd::DualDefect { input } => json!({"dual_defective": is_dual_defective(&load(&input)?.set)?}),
        Cmd::MixedVolume { inputs } => {
            let mut terms = Vec::new();
            for s in &inputs {
                let (path, count) = match s.rsplit_once(':') {
                    Some((p, c)) if c.parse::<usize>().is_ok() => (p, c.parse().unwrap()),
                    _ => (s.as_str(), 1),
                };
                terms.push((load_polytope(Path::new(path))?, count));
            }
            let n = terms[0].0.ambient_dim();
            json!({"mixed_volume": mixed_volume(&MixedVolumeQuery::new(n, terms)?)?})
        }
        Cmd::Cayley { inputs } => {
            let polys: Vec<Polytope> = inputs.iter().map(|p| load_polytope(p)).collect::<Result<_, _>>()?;
            let sets: Vec<LatticePointSet> = polys.iter().map(Polytope::vertex_set).collect();
            let refs: Vec<&Polytope> = polys.iter().collect();
            json!({"cayley": cayley_sum(&sets)?, "identity": cayley_volume_identity(&refs)?})
        }
        Cmd::Bk { cone, input } => {
            let inp = load(&input)?;
            let c = cone_arg(&cone, &inp)?.build()?;
            json!({"certificate": detect_bk(&inp.set.hull(), &c)?})
        }
        Cmd::Negligible { cone, input } => {
            let inp = load(&input)?;
            let c = cone_arg(&cone, &inp)?.build()?;
            let p = inp.set.hull();
            if c.orthant_form().is_some() {
                serde_json::to_value(bk_theorem_check(&p, &c)?).expect("verdict serializes")
            } else {
                json!({"negligible": is_negligible(&p, &c)?})
            }
        }
        Cmd::Degree { kind, supports, u, homog_degree } => {
            let inputs: Vec<Input> = supports.iter().map(|p| load(p)).collect::<Result<_, _>>()?;
            let kind = match kind {
                Kind::Mml => DegreeKind::Mml,
                Kind::Ml => DegreeKind::Ml,
                Kind::Ed => DegreeKind::Ed,
                Kind::Polar => DegreeKind::Polar,
            };
            let homog_degree = homog_degree.or(inputs[0].homog_degree);
            let q = DegreeQuery { kind, supports: inputs.into_iter().map(|i| i.set).collect(), u, homog_degree };
            let r = q.evaluate()?;
            let checks = if r.checks.is_empty() {
                Value::from("none")
            } else if r.all_equal {
                Value::from("all-equal")
            } else {
                Value::from("mismatch")
            };
            let key = if kind == DegreeKind::Polar { "pdeg" } else { "degree" };
            let mut out = json!({ key: r.value, "checks": checks, "details": r.checks });
            if !r.flags.is_empty() {
                out["flags"] = json!(r.flags);
            }
            out
        }
        Cmd::Corpus { cmd } => match cmd {
            CorpusCmd::List => json!(corpus::bundled().iter().map(|e| e.id.clone()).collect::<Vec<_>>()),
            CorpusCmd::Show { id } => match corpus::bundled_entry(&id) {
                Some(e) => serde_json::to_value(e).expect("entry serializes"),
                None => return Err(Failure::Usage(format!("no corpus entry {id:?}"))),
            },
            CorpusCmd::Verify { seeds, only, inject_fault } => {
                let Some((a, b)) = seeds.split_once("..") else {
                    return Err(Failure::Usage(format!("--seeds expects a..b, got {seeds:?}")));
                };
                let (Ok(a), Ok(b)) = (a.parse::<u64>(), b.parse::<u64>()) else {
                    return Err(Failure::Usage(format!("--seeds expects a..b, got {seeds:?}")));
                };
                let fault = inject_fault.map(|f| f.parse::<Fault>()).transpose()?;
                let r = corpus::verify(&CorpusOptions { seeds: a..b, only, fault })?;
                let v = serde_json::to_value(&r).expect("report serializes");
                if !r.passed {
                    return Err(Failure::Checks(v));
                }
                v
            }
        },
        Cmd::Poset { cmd } => match cmd {
            PosetCmd::G { input } => coeffs(poset(&input)?.g_polynomial()?),
            PosetCmd::H { input } => coeffs(poset(&input)?.h_polynomial()?),
            PosetCmd::Class { input } => json!({"class": poset(&input)?.class()}),
            PosetCmd::Twins { input } => coeffs(poset(&input)?.twins()?.h_polynomial()?),
            PosetCmd::LocalH { input } => {
                let text = read_text(&input)?;
                let j: SubdivisionJson = parse(&text, &input.display().to_string())?;
                let m = j.build()?;
                let top = m.target().top().ok_or_else(|| Failure::Usage("target has no maximum".into()))?;
                let bottom = m.source().bottom().ok_or_else(|| Failure::Usage("source has no minimum".into()))?;
                json!({
                    "strong_formal_subdivision": m.is_strong_formal_subdivision(),
                    "coeffs": m.local_h_at(top, bottom)?,
                })
            }
        },
    })
}

fn poset(path: &Path) -> std::result::Result<polynewt::FinitePoset, Failure> {
    let j: PosetJson = parse(&read_text(path)?, &path.display().to_string())?;
    Ok(j.build()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("POLYNEWT_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool configured once");
            }
            _ => {
                eprintln!("error: POLYNEWT_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.cmd) {
        Ok(v) => {
            println!("{}", serde_json::to_string(&v).expect("json"));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Checks(v)) => {
            println!("{}", serde_json::to_string(&v).expect("json"));
            ExitCode::from(1)
        }
    }
}
