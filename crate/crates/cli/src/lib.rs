//! Command-line front end: load map files, run one library operation, render
//! the result as map-file text or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use formalflows::blockmatrix::{self, BlockMatrix};
use formalflows::cadic::{self, CAdicInt};
use formalflows::fraciter::{self, FractionalIterate};
use formalflows::mapfile::{parse_map_file, render_map, JSON_FORMAT};
use formalflows::sumfn::{fit_char0, fit_charc};
use formalflows::{Error, ErrorKind, FormalMap, MapFile, Ring};

pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Environment variable bounding the cap of any loaded map.
pub const MAX_CAP_VAR: &str = "FORMALFLOWS_MAX_CAP";
pub const DEFAULT_MAX_CAP: u32 = 16;

#[derive(Debug, Parser)]
#[command(name = "formalflows", version, about = "Exact iteration of formal self-maps of K^d fixing the origin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of map-file text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Expand the input maps to this cap instead of the declared one.
    #[arg(long, global = true, value_name = "N")]
    pub cap_override: Option<u32>,
}

#[derive(Debug, Args)]
pub struct MapArg {
    #[arg(long, value_name = "FILE")]
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct TwoMaps {
    #[arg(long, value_name = "FILE")]
    pub map: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub map2: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// g^k for an integer k.
    Iterate {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Compositional inverse.
    Inverse {
        #[command(flatten)]
        input: MapArg,
    },
    /// f o g, with f from --map and g from --map2.
    Compose {
        #[command(flatten)]
        input: TwoMaps,
    },
    /// g^a for rational a (characteristic zero, g tangent to the identity).
    Frac {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// n-th compositional root in characteristic zero.
    Root {
        #[command(flatten)]
        input: MapArg,
        #[arg(long)]
        n: u64,
    },
    /// g^z for a c-adic integer z given by little-endian digits.
    Cadic {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        digits: Vec<u64>,
    },
    /// n-th compositional root in characteristic c, for n prime to c.
    CadicRoot {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Least n <= bound with g^n = 1 at the cap.
    Order {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, default_value_t = 64)]
        order_bound: u32,
    },
    /// Whether two maps commute; with --alpha and --beta also checks that
    /// g^alpha and h^beta commute.
    CommuteCheck {
        #[command(flatten)]
        input: TwoMaps,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Fits a sum-function to a table of values (characteristic 0 over Z,
    /// or one full period of length c^r over F_c).
    SumfnFit {
        #[arg(long = "char")]
        characteristic: u64,
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// The matrix B_r of basic sum-function values mod c.
    Matrix {
        #[arg(long = "char")]
        characteristic: u64,
        #[arg(long)]
        r: u32,
        /// Render r = 2 in block notation (T, 2T, 0).
        #[arg(long)]
        template_blocks: bool,
    },
    /// h = u o t^-1 with u tangent to the identity and t of finite order.
    Factor {
        #[command(flatten)]
        input: MapArg,
        #[arg(long, default_value_t = 64)]
        order_bound: u32,
    },
}

/// One invocation: the parsed command plus its environment.
#[derive(Debug)]
pub struct Job {
    pub cli: Cli,
    pub max_cap: u32,
}

impl Job {
    /// Reads the cap guard from the environment.
    pub fn from_env(cli: Cli) -> Result<Job, Failure> {
        let max_cap = match std::env::var(MAX_CAP_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::new(EXIT_PRECONDITION, format!("{MAX_CAP_VAR}={v:?} is not a cap")))?,
            Err(_) => DEFAULT_MAX_CAP,
        };
        Ok(Job { cli, max_cap })
    }
}

/// An error message and the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e.kind() {
            ErrorKind::Parse => EXIT_PARSE,
            ErrorKind::Precondition => EXIT_PRECONDITION,
            ErrorKind::Verification => EXIT_VERIFICATION,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Runs a job and returns its standard output.
pub fn run(job: &Job) -> Outcome {
    let cli = &job.cli;
    let loader = Loader { cap_override: cli.cap_override, max_cap: job.max_cap };
    let json = cli.json;
    match &cli.command {
        Command::Iterate { input, k } => {
            let f = loader.load(&input.map)?;
            let out = f.map.iterate(*k)?;
            Ok(emit_map(json, &format!("{}^{k}", f.name), &out, json!({})))
        }
        Command::Inverse { input } => {
            let f = loader.load(&input.map)?;
            Ok(emit_map(json, &format!("{}^-1", f.name), &f.map.invert()?, json!({})))
        }
        Command::Compose { input } => {
            let (f, g) = loader.load_pair(input)?;
            Ok(emit_map(json, &format!("{}.{}", f.name, g.name), &f.map.compose(&g.map)?, json!({})))
        }
        Command::Frac { input, alpha } => {
            let f = loader.load(&input.map)?;
            let a = parse_rational(alpha)?;
            let it = fraciter::frac_iterate(&f.map, &a)?;
            Ok(emit_fractional(json, &format!("{}^{a}", f.name), &it))
        }
        Command::Root { input, n } => {
            let f = loader.load(&input.map)?;
            let it = fraciter::nth_root(&f.map, *n)?;
            Ok(emit_fractional(json, &format!("{}^1/{n}", f.name), &it))
        }
        Command::Cadic { input, digits } => {
            let f = loader.load(&input.map)?;
            let c = char_positive(&f.map, "c-adic iteration")?;
            let z = CAdicInt::from_digits(c, digits.clone())?;
            let out = cadic::cadic_iterate(&f.map, &z)?;
            Ok(emit_cadic(json, &format!("{}^z", f.name), &out, "z", &z))
        }
        Command::CadicRoot { input, n } => {
            let f = loader.load(&input.map)?;
            let c = char_positive(&f.map, "c-adic roots")?;
            let inv = CAdicInt::inverse_unit(&BigInt::from(*n), c, cadic::required_digits(c, f.map.cap()))?;
            let out = cadic::cadic_root(&f.map, *n)?;
            Ok(emit_cadic(json, &format!("{}^1/{n}", f.name), &out, &format!("1/{n}"), &inv))
        }
        Command::Order { input, order_bound } => {
            let f = loader.load(&input.map)?;
            let order = f.map.order_upto(*order_bound);
            let cap = f.map.cap();
            if json {
                return Ok(json_line(json!({
                    "format": JSON_FORMAT,
                    "order": order,
                    "bound": order_bound,
                    "cap": cap,
                })));
            }
            Ok(match order {
                Some(n) => format!("order {n} at cap {cap}\n"),
                None => format!("no order up to {order_bound} at cap {cap}\n"),
            })
        }
        Command::CommuteCheck { input, alpha, beta } => {
            let (f, g) = loader.load_pair(input)?;
            let commute = f.map.commutes_with(&g.map)?;
            let mut fractional = None;
            if commute {
                if let (Some(a), Some(b)) = (alpha, beta) {
                    let (a, b) = (parse_rational(a)?, parse_rational(b)?);
                    if !fraciter::commuting_pair_check(&f.map, &g.map, &a, &b)? {
                        return Err(Error::VerificationFailed(format!(
                            "{}^{a} and {}^{b} do not commute",
                            f.name, g.name
                        ))
                        .into());
                    }
                    fractional = Some((a, b));
                }
            }
            if json {
                return Ok(json_line(json!({
                    "format": JSON_FORMAT,
                    "commute": commute,
                    "fractional": fractional.as_ref().map(|(a, b)| json!({"alpha": a.to_string(), "beta": b.to_string()})),
                    "cap": f.map.cap(),
                })));
            }
            let mut out = format!("commute {} at cap {}\n", if commute { "yes" } else { "no" }, f.map.cap());
            if let Some((a, b)) = fractional {
                let _ = writeln!(out, "{}^{a} and {}^{b} commute", f.name, g.name);
            }
            Ok(out)
        }
        Command::SumfnFit { characteristic, values } => sumfn_fit(json, *characteristic, values),
        Command::Matrix { characteristic, r, template_blocks } => matrix(json, *characteristic, *r, *template_blocks),
        Command::Factor { input, order_bound } => {
            let f = loader.load(&input.map)?;
            let fac = fraciter::factor_finite_linear_part(&f.map, *order_bound)?;
            let tname = format!("{}_tangent", f.name);
            let oname = format!("{}_torsion", f.name);
            if json {
                return Ok(json_line(json!({
                    "format": JSON_FORMAT,
                    "order": fac.order,
                    "tangent": MapFile::new(tname, fac.tangent).to_json(),
                    "torsion": MapFile::new(oname, fac.torsion).to_json(),
                })));
            }
            Ok(format!(
                "# {} = {tname} o {oname}^-1, {oname} of order {}\n{}\n{}",
                f.name,
                fac.order,
                render_map(&tname, &fac.tangent),
                render_map(&oname, &fac.torsion)
            ))
        }
    }
}

struct Loader {
    cap_override: Option<u32>,
    max_cap: u32,
}

impl Loader {
    fn load(&self, path: &Path) -> Result<MapFile, Failure> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
        let f = parse_map_file(&text, self.cap_override).map_err(|e| {
            let mut fail = Failure::from(e);
            fail.message = format!("{}: {}", path.display(), fail.message);
            fail
        })?;
        if f.map.cap() > self.max_cap {
            return Err(Failure::new(
                EXIT_PRECONDITION,
                format!("cap {} exceeds {MAX_CAP_VAR}={}", f.map.cap(), self.max_cap),
            ));
        }
        Ok(f)
    }

    /// Both maps; they must share ring, dimension and cap.
    fn load_pair(&self, input: &TwoMaps) -> Result<(MapFile, MapFile), Failure> {
        let f = self.load(&input.map)?;
        let g = self.load(&input.map2)?;
        f.map.check_compatible(&g.map)?;
        Ok((f, g))
    }
}

fn parse_rational(text: &str) -> Result<BigRational, Failure> {
    Ring::Q
        .parse_literal(text)
        .ok()
        .and_then(|e| e.to_rational())
        .ok_or_else(|| Failure::new(EXIT_PRECONDITION, format!("{text:?} is not a rational number")))
}

fn char_positive(map: &FormalMap, op: &'static str) -> Result<u64, Failure> {
    match map.ring().characteristic() {
        0 => Err(Error::NeedsCharPositive { op, ring: map.ring() }.into()),
        c => Ok(c),
    }
}

fn json_line(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// A map, with extra top-level fields merged into the JSON form.
fn emit_map(json: bool, name: &str, map: &FormalMap, extra: Value) -> String {
    if json {
        let mut v = MapFile::new(name, map.clone()).to_json();
        if let (Value::Object(obj), Value::Object(more)) = (&mut v, extra) {
            obj.extend(more);
        }
        return json_line(v);
    }
    render_map(name, map)
}

fn emit_fractional(json: bool, name: &str, it: &FractionalIterate) -> String {
    let report: Vec<Value> = it
        .non_integral
        .iter()
        .map(|(i, m, c)| json!({"component": i, "monomial": m.to_string(), "coeff": c.to_string()}))
        .collect();
    if json {
        return emit_map(true, name, &it.map, json!({"integral": it.is_integral(), "non_integral": report}));
    }
    let mut out = String::new();
    if it.is_integral() {
        out.push_str("# integral: yes\n");
    } else {
        out.push_str("# integral: no\n");
        for (i, m, c) in &it.non_integral {
            let _ = writeln!(out, "#   component {i}, {m}: {c}");
        }
    }
    out.push_str(&render_map(name, &it.map));
    out
}

fn emit_cadic(json: bool, name: &str, map: &FormalMap, label: &str, z: &CAdicInt) -> String {
    if json {
        let extra = json!({
            "digits": z.digits(),
            "modulus": z.modulus().to_string(),
            "value": z.value().to_string(),
        });
        return emit_map(true, name, map, extra);
    }
    format!("# {label} = {z}\n{}", render_map(name, map))
}

fn sumfn_fit(json: bool, c: u64, raw: &[String]) -> Outcome {
    let ring = if c == 0 { Ring::Z } else { Ring::prime_field(c)? };
    let values = raw
        .iter()
        .map(|v| ring.parse_literal(v).map_err(|m| Failure::new(EXIT_PARSE, m)))
        .collect::<Result<Vec<_>, _>>()?;
    let h = if c == 0 { fit_char0(ring, &values)? } else { fit_charc(ring, &values)? };
    if h.values(values.len()) != values {
        return Err(Error::VerificationFailed("fitted sum-function does not reproduce the values".into()).into());
    }
    let period = if c == 0 { None } else { Some(h.period()?) };
    let table_len = 2 * values.len();
    let table = h.values(table_len);
    if json {
        return Ok(json_line(json!({
            "format": JSON_FORMAT,
            "ring": ring.to_string(),
            "coefficients": h.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "degree": h.degree(),
            "period": period,
            "values": table.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })));
    }
    let mut out = format!("ring {ring}\ncoefficients {h}\n");
    match h.degree() {
        Some(d) => {
            let _ = writeln!(out, "degree {d}");
        }
        None => out.push_str("degree -inf\n"),
    }
    if let Some(p) = period {
        let _ = writeln!(out, "period {p}");
    }
    out.push_str("k value\n");
    for (k, v) in table.iter().enumerate() {
        let _ = writeln!(out, "{k} {v}");
    }
    Ok(out)
}

/// Largest level rendered for a given characteristic.
pub fn max_matrix_level(c: u64) -> u32 {
    if c <= 3 {
        4
    } else {
        3
    }
}

fn matrix(json: bool, c: u64, r: u32, template_blocks: bool) -> Outcome {
    if r > max_matrix_level(c) {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            format!("level {r} too large for c = {c}; at most {}", max_matrix_level(c)),
        ));
    }
    let b: BlockMatrix = blockmatrix::block_matrix(c, r)?;
    if json {
        return Ok(json_line(json!({
            "format": JSON_FORMAT,
            "c": c,
            "r": r,
            "rows": b.rows(),
        })));
    }
    if template_blocks {
        return Ok(b.render_template_blocks()?);
    }
    Ok(b.render_grid())
}
