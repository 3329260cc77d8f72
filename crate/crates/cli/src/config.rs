//! Run configuration: the same keys as command-line flags or in a TOML file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ecrank_core::arith::Rational;
use ecrank_core::curve::{CurvePoint, WeierstrassCurve};
use ecrank_core::ff::FFElement;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

type Result<T> = std::result::Result<T, ConfigError>;

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Points,
    Group,
    Pencil,
    Monodromy,
    Symmetrize,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Points => "points",
            Command::Group => "group",
            Command::Pencil => "pencil",
            Command::Monodromy => "monodromy",
            Command::Symmetrize => "symmetrize",
        }
    }

    /// Keys that mean something for this command.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Points => &["curve", "count", "start", "stride", "precision", "torsion-bound", "regulator-points"],
            Command::Group => &["n", "exhaustive"],
            Command::Pencil => &["curve", "point", "n", "escalate-n", "height-bound", "precision"],
            Command::Monodromy => &["curve", "f", "precision"],
            Command::Symmetrize => &["curve", "points", "precision"],
        }
    }
}

/// Every key is optional here; [`RunConfig::resolve`] fills defaults and
/// checks ranges.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Curve as a=..,b=.. (rationals allowed)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    /// Number of independent points to certify
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// First x-value of the scan
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    /// Step between scanned x-values
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<String>,
    /// Degree: of the symmetric group, or of the pencil's function
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Largest entry of searched isotropic vectors
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<u64>,
    /// Working precision in bits
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    /// Multiples checked by the torsion screen
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion_bound: Option<u32>,
    /// Size of the regulator cross-check (0 skips it)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regulator_points: Option<usize>,
    /// Output file instead of stdout
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Run over every transitive subgroup with a transposition
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    /// Try n, n+2, ... up to this degree until a vector is found
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escalate_n: Option<usize>,
    /// Base point of the pencil as x,y
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// Function u(x) + v(x) y as u=c0,c1,..;v=c0,.. (ascending), or x or y
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Points as x1,y1;x2,y2;... (O for the point at infinity)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    /// Keys set in `top` win over those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(
            base,
            top,
            command,
            curve,
            count,
            start,
            stride,
            n,
            height_bound,
            precision,
            torsion_bound,
            regulator_points,
            out,
            exhaustive,
            escalate_n,
            point,
            f,
            points
        )
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let v = serde_json::to_value(self).expect("config serializes");
        let names = [
            "curve",
            "count",
            "start",
            "stride",
            "n",
            "height-bound",
            "precision",
            "torsion-bound",
            "regulator-points",
            "exhaustive",
            "escalate-n",
            "point",
            "f",
            "points",
        ];
        names.into_iter().filter(|k| v.get(*k).is_some()).collect()
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let command = self.command.ok_or_else(|| bad("no command given"))?;
        let allowed = command.keys();
        if let Some(k) = self.set_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(bad(format!("--{k} does not apply to `{}`", command.name())));
        }
        let precision = range("precision", self.precision.unwrap_or(128), 53, 4096)?;
        Ok(match command {
            Command::Points => {
                let curve = self.curve()?;
                let start = match &self.start {
                    Some(s) => rational("start", s)?,
                    None => default_start(&curve)?,
                };
                let stride = rational("stride", self.stride.as_deref().unwrap_or("1"))?;
                if !stride.is_positive() {
                    return Err(bad("stride must be positive"));
                }
                let count = range("count", self.count.unwrap_or(10), 1, 1000)?;
                Resolved::Points(PointsConfig {
                    curve,
                    start,
                    stride,
                    count,
                    precision,
                    torsion_bound: self.torsion_bound.map(|t| range("torsion-bound", t as usize, 1, 10_000)).transpose()?.map(|t| t as u32),
                    regulator_points: range("regulator-points", self.regulator_points.unwrap_or(5), 0, 20)?,
                })
            }
            Command::Group => {
                let exhaustive = self.exhaustive.unwrap_or(false);
                let n = range("n", self.n.unwrap_or(4), 2, if exhaustive { 6 } else { 8 })?;
                Resolved::Group(GroupConfig { n, exhaustive })
            }
            Command::Pencil => {
                let curve = self.curve()?;
                let point = parse_point(self.point.as_deref().ok_or_else(|| bad("pencil needs --point"))?)?;
                if !curve.contains(&point) {
                    return Err(bad(format!("point {point} is not on {curve}")));
                }
                let n = even("n", self.n.unwrap_or(8))?;
                let escalate_n = even("escalate-n", self.escalate_n.unwrap_or(n))?;
                if escalate_n < n {
                    return Err(bad(format!("escalate-n {escalate_n} is below n {n}")));
                }
                let height_bound = range("height-bound", self.height_bound.unwrap_or(50) as usize, 1, 1000)? as u64;
                Resolved::Pencil(PencilConfig { curve, point, n, escalate_n, height_bound, precision })
            }
            Command::Monodromy => {
                let curve = self.curve()?;
                let f = self.f.clone().unwrap_or_else(|| "x".into());
                let func = parse_function(&curve, &f)?;
                if func.is_constant() {
                    return Err(bad("f is constant"));
                }
                Resolved::Monodromy(MonodromyConfig { curve, f, func, precision })
            }
            Command::Symmetrize => {
                let curve = self.curve()?;
                let points = parse_points(self.points.as_deref().ok_or_else(|| bad("symmetrize needs --points"))?)?;
                if points.len() < 2 || points.len() > 12 {
                    return Err(bad(format!("symmetrize takes 2 to 12 points, got {}", points.len())));
                }
                if let Some(p) = points.iter().find(|p| !curve.contains(p)) {
                    return Err(bad(format!("point {p} is not on {curve}")));
                }
                Resolved::Symmetrize(SymmetrizeConfig { curve, points, precision })
            }
        })
    }

    fn curve(&self) -> Result<WeierstrassCurve> {
        let s = self.curve.as_deref().ok_or_else(|| bad("missing --curve"))?;
        s.parse().map_err(|e| bad(format!("--curve: {e}")))
    }
}

fn range(key: &str, v: usize, lo: usize, hi: usize) -> Result<usize> {
    if v < lo || v > hi {
        return Err(bad(format!("{key} must lie in {lo}..={hi}, got {v}")));
    }
    Ok(v)
}

fn even(key: &str, v: usize) -> Result<usize> {
    let v = range(key, v, 8, 40)?;
    if v % 2 != 0 {
        return Err(bad(format!("{key} must be even, got {v}")));
    }
    Ok(v)
}

fn rational(key: &str, s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|_| bad(format!("{key}: cannot parse {s:?} as a rational")))
}

/// The least integer, at least 1, to the right of every real root of
/// x^3 + ax + b.
fn default_start(curve: &WeierstrassCurve) -> Result<Rational> {
    let root = ecrank_core::rank::largest_real_root(curve).map_err(|e| bad(e.to_string()))?;
    let mut k = Rational::from_int((root.floor() as i64).max(1));
    let w = curve.w_poly();
    while w.count_real_roots_above(&k) > 0 || !w.eval(&k).is_positive() {
        k = &k + &Rational::one();
    }
    Ok(k)
}

pub fn parse_point(s: &str) -> Result<CurvePoint> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.eq_ignore_ascii_case("o") {
        return Ok(CurvePoint::Infinity);
    }
    let (x, y) = s.split_once(',').ok_or_else(|| bad(format!("point {s:?} is not x,y")))?;
    Ok(CurvePoint::rational(rational("point", x)?, rational("point", y)?))
}

pub fn parse_points(s: &str) -> Result<Vec<CurvePoint>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_point).collect()
}

fn coefficients(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|c| !c.trim().is_empty()).map(|c| rational("f", c)).collect()
}

pub fn parse_function(curve: &WeierstrassCurve, s: &str) -> Result<FFElement> {
    match s.trim() {
        "x" => return Ok(FFElement::x(curve)),
        "y" => return Ok(FFElement::y(curve)),
        _ => {}
    }
    let (mut u, mut v) = (Vec::new(), Vec::new());
    for part in s.split(';') {
        let (k, cs) = part.split_once('=').ok_or_else(|| bad(format!("f: expected u=..;v=.., got {s:?}")))?;
        match k.trim() {
            "u" => u = coefficients(cs)?,
            "v" => v = coefficients(cs)?,
            other => return Err(bad(format!("f: unknown part {other:?}"))),
        }
    }
    let f = FFElement::from_parts(curve, u, v);
    if f.pole_order().is_none() {
        return Err(bad("f is zero"));
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub enum Resolved {
    Points(PointsConfig),
    Group(GroupConfig),
    Pencil(PencilConfig),
    Monodromy(MonodromyConfig),
    Symmetrize(SymmetrizeConfig),
}

impl Resolved {
    pub fn command(&self) -> Command {
        match self {
            Resolved::Points(_) => Command::Points,
            Resolved::Group(_) => Command::Group,
            Resolved::Pencil(_) => Command::Pencil,
            Resolved::Monodromy(_) => Command::Monodromy,
            Resolved::Symmetrize(_) => Command::Symmetrize,
        }
    }

    /// The effective configuration, defaults filled in, as a config file
    /// would state it.
    pub fn echo(&self) -> RunConfig {
        let mut c = RunConfig { command: Some(self.command()), ..Default::default() };
        match self {
            Resolved::Points(p) => {
                c.curve = Some(curve_string(&p.curve));
                c.start = Some(p.start.to_string());
                c.stride = Some(p.stride.to_string());
                c.count = Some(p.count);
                c.precision = Some(p.precision);
                c.torsion_bound = p.torsion_bound;
                c.regulator_points = Some(p.regulator_points);
            }
            Resolved::Group(g) => {
                c.n = Some(g.n);
                c.exhaustive = Some(g.exhaustive);
            }
            Resolved::Pencil(p) => {
                c.curve = Some(curve_string(&p.curve));
                c.point = Some(point_string(&p.point));
                c.n = Some(p.n);
                c.escalate_n = Some(p.escalate_n);
                c.height_bound = Some(p.height_bound);
                c.precision = Some(p.precision);
            }
            Resolved::Monodromy(m) => {
                c.curve = Some(curve_string(&m.curve));
                c.f = Some(m.f.clone());
                c.precision = Some(m.precision);
            }
            Resolved::Symmetrize(s) => {
                c.curve = Some(curve_string(&s.curve));
                c.points = Some(s.points.iter().map(point_string).collect::<Vec<_>>().join(";"));
                c.precision = Some(s.precision);
            }
        }
        c
    }
}

fn curve_string(e: &WeierstrassCurve) -> String {
    format!("a={},b={}", e.a(), e.b())
}

fn point_string(p: &CurvePoint) -> String {
    match p.coords_pair() {
        Some((x, y)) => format!("{x},{y}"),
        None => "O".into(),
    }
}

#[derive(Clone, Debug)]
pub struct PointsConfig {
    pub curve: WeierstrassCurve,
    pub start: Rational,
    pub stride: Rational,
    pub count: usize,
    pub precision: usize,
    pub torsion_bound: Option<u32>,
    pub regulator_points: usize,
}

#[derive(Clone, Debug)]
pub struct GroupConfig {
    pub n: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
pub struct PencilConfig {
    pub curve: WeierstrassCurve,
    pub point: CurvePoint,
    pub n: usize,
    pub escalate_n: usize,
    pub height_bound: u64,
    pub precision: usize,
}

#[derive(Clone, Debug)]
pub struct MonodromyConfig {
    pub curve: WeierstrassCurve,
    pub f: String,
    pub func: FFElement,
    pub precision: usize,
}

#[derive(Clone, Debug)]
pub struct SymmetrizeConfig {
    pub curve: WeierstrassCurve,
    pub points: Vec<CurvePoint>,
    pub precision: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig { command: Some(command), curve: Some("a=0,b=2".into()), ..Default::default() }
    }

    #[test]
    fn flags_win() {
        let file: RunConfig = toml::from_str("command = \"points\"\ncurve = \"a=0,b=2\"\ncount = 3\n").unwrap();
        let flags = RunConfig { count: Some(7), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.count, Some(7));
        assert_eq!(merged.command, Some(Command::Points));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("cuve = \"a=0,b=2\"").is_err());
    }

    #[test]
    fn keys_must_fit_the_command() {
        let mut c = cfg(Command::Points);
        c.height_bound = Some(5);
        assert!(c.resolve().unwrap_err().0.contains("height-bound"));
        assert!(RunConfig::default().resolve().is_err());
    }

    #[test]
    fn ranges() {
        let mut c = cfg(Command::Points);
        c.count = Some(0);
        assert!(c.resolve().is_err());
        c.count = Some(3);
        c.precision = Some(20);
        assert!(c.resolve().is_err());
        let mut p = cfg(Command::Pencil);
        p.point = Some("1,1".into());
        p.curve = Some("a=-1,b=1".into());
        p.n = Some(9);
        assert!(p.resolve().is_err());
        p.n = Some(12);
        assert!(p.resolve().is_ok());
    }

    #[test]
    fn default_start_is_right_of_the_roots() {
        let Resolved::Points(p) = cfg(Command::Points).resolve().unwrap() else { panic!() };
        assert_eq!(p.start, Rational::from_int(1));
        let mut c = cfg(Command::Points);
        c.curve = Some("a=-7,b=-5".into());
        let Resolved::Points(p) = c.resolve().unwrap() else { panic!() };
        // roots about -2.17, -0.78 and 2.95
        assert_eq!(p.start, Rational::from_int(3));
    }

    #[test]
    fn echo_resolves_to_itself() {
        let mut c = cfg(Command::Symmetrize);
        c.curve = Some("a=0,b=17".into());
        c.points = Some("(-2,3); 2,-5 ;O".into());
        let r = c.resolve().unwrap();
        let echo = r.echo();
        assert_eq!(echo.points.as_deref(), Some("-2,3;2,-5;O"));
        assert_eq!(echo.resolve().unwrap().echo(), echo);
    }

    #[test]
    fn functions() {
        let e: WeierstrassCurve = "a=0,b=2".parse().unwrap();
        assert_eq!(parse_function(&e, "u=0,1;v=").unwrap(), FFElement::x(&e));
        assert_eq!(parse_function(&e, "v=1").unwrap(), FFElement::y(&e));
        assert!(parse_function(&e, "w=1").is_err());
    }
}
