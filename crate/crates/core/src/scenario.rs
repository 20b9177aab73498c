//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "two-robots"
//! controller = "EAC"
//!
//! [domain]
//! rectangle = [0.0, 0.0, 6.0, 6.0]   # or: vertices = [[x, y], ...]
//!
//! [density]
//! kind = "uniform"                   # or "gaussian-mixture" / "bimodal"
//!
//! [graph]
//! policy = "complete"                # or "disk" with radius and frozen
//!
//! [run]
//! max_steps = 500
//!
//! [[robots]]
//! position = [1.0, 1.0]
//! e_init = 100.0
//! alpha = 1.0
//! beta = 1.0
//!
//! [[robots]]
//! position = [2.0, 1.0]
//! schedule = [{ from_step = 0, alpha = 1.0, beta = 1.0 }, { from_step = 11, alpha = 1.0, beta = 5.0 }]
//! ```
//!
//! `[gains]`, `[energy]` and `[rate_reset]` are optional. Robots may instead
//! be scattered uniformly at random with a `[random_robots]` table, using
//! `run.seed`; its `alpha` and `beta` may be `[min, max]` ranges sampled per
//! robot.

use std::ops::Range;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::controllers::{ControllerKind, Gains};
use crate::density::{DensityField, GaussianBump};
use crate::energy::{EnergyProfile, RateResetMode, ScheduleSegment, DEFAULT_RATE_RESET_THRESHOLD};
use crate::engine::{RateReset, RobotSpec, ScenarioConfig, SpeedSource, DEFAULT_MAX_STEPS};
use crate::error::ConfigError;
use crate::geometry::{ConvexPolygon, Point2};
use crate::graph::GraphPolicy;
use crate::Error;

const DEFAULT_E_INIT: f64 = 100.0;
const DEFAULT_FLOOR: f64 = 0.01;
const PLACEMENT_ATTEMPTS: usize = 100_000;

/// Scenarios shipped with the library, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("scenario0", include_str!("../scenarios/scenario0.toml")),
    ("scenario1", include_str!("../scenarios/scenario1.toml")),
    ("scenario2", include_str!("../scenarios/scenario2.toml")),
    ("scenario3", include_str!("../scenarios/scenario3.toml")),
    ("bimodal", include_str!("../scenarios/bimodal.toml")),
    (
        "connectivity20",
        include_str!("../scenarios/connectivity20.toml"),
    ),
    ("scale100", include_str!("../scenarios/scale100.toml")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    controller: Option<Spanned<String>>,
    domain: Spanned<DomainFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<Spanned<DensityFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<Spanned<GraphFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gains: Option<Spanned<GainsFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy: Option<Spanned<EnergyFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rate_reset: Option<Spanned<RateResetFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    run: Option<Spanned<RunFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    random_robots: Option<Spanned<RandomRobotsFile>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    robots: Vec<Spanned<RobotFile>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rectangle: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    components: Vec<ComponentFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    mean: [f64; 2],
    covariance: [[f64; 2]; 2],
    #[serde(default = "one")]
    weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frozen: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GainsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_atc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pbc_gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps_position: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass_floor: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnergyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speed_source: Option<SpeedSource>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RateResetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    two_sided: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_steps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_weight: Option<f64>,
}

/// A fixed coefficient, or `[min, max]` to draw one per robot.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Fixed(f64),
    Range([f64; 2]),
}

impl Coefficient {
    fn sample(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Coefficient::Fixed(v) => v,
            Coefficient::Range([lo, hi]) if hi > lo => rng.gen_range(lo..hi),
            Coefficient::Range([lo, _]) => lo,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomRobotsFile {
    count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e_init: Option<f64>,
    alpha: Coefficient,
    beta: Coefficient,
    /// Keep-out band along the bounding box edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotFile {
    position: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e_init: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<ScheduleSegment>>,
}

/// Maps byte offsets to 1-based line numbers.
struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, span: Range<usize>) -> Option<usize> {
        let end = span.start.min(self.0.len());
        Some(self.0[..end].bytes().filter(|&b| b == b'\n').count() + 1)
    }
}

fn err<T>(
    key: impl Into<String>,
    line: Option<usize>,
    msg: impl Into<String>,
) -> Result<T, ConfigError> {
    Err(ConfigError::at_key(key, msg).with_line(line))
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| {
        let lines = Lines(text);
        ConfigError::new(e.message().trim().to_string())
            .with_line(e.span().and_then(|s| lines.of(s)))
    })?;
    let lines = Lines(text);
    let sections = SectionLines::of(&file, &lines);
    let config = build(file, &lines)?;
    config.validate().map_err(|e| {
        let line = e.key.as_deref().and_then(|k| sections.locate(k));
        e.with_line(line)
    })?;
    Ok(config)
}

/// Where each section of a parsed file starts, for locating late errors.
struct SectionLines {
    gains: Option<usize>,
    rate_reset: Option<usize>,
    run: Option<usize>,
    graph: Option<usize>,
    robots: Vec<Option<usize>>,
    random_robots: Option<usize>,
}

impl SectionLines {
    fn of(file: &ScenarioFile, lines: &Lines) -> Self {
        let at = |s: Option<Range<usize>>| s.and_then(|s| lines.of(s));
        Self {
            gains: at(file.gains.as_ref().map(Spanned::span)),
            rate_reset: at(file.rate_reset.as_ref().map(Spanned::span)),
            run: at(file.run.as_ref().map(Spanned::span)),
            graph: at(file.graph.as_ref().map(Spanned::span)),
            robots: file.robots.iter().map(|r| lines.of(r.span())).collect(),
            random_robots: at(file.random_robots.as_ref().map(Spanned::span)),
        }
    }

    fn locate(&self, key: &str) -> Option<usize> {
        let section = key.split(['.', '[']).next()?;
        match section {
            "gains" => self.gains,
            "rate_reset" => self.rate_reset,
            "run" => self.run,
            "graph" => self.graph,
            "robots" => {
                let index = key
                    .strip_prefix("robots[")
                    .and_then(|k| k.split(']').next()?.parse::<usize>().ok());
                match index {
                    Some(i) => self.robots.get(i).copied().flatten().or(self.random_robots),
                    None => self
                        .robots
                        .first()
                        .copied()
                        .flatten()
                        .or(self.random_robots),
                }
            }
            _ => None,
        }
    }
}

/// Reads a scenario from a path, or from the bundled set when `source`
/// names a bundled scenario and no such file exists.
pub fn load_scenario(source: &str) -> Result<ScenarioConfig, Error> {
    let path = Path::new(source);
    let text = if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {source}"), e))?
    } else if let Some(text) = bundled(source) {
        text.to_string()
    } else {
        return Err(ConfigError::new(format!(
            "no scenario file or bundled scenario named {source:?}"
        ))
        .into());
    };
    Ok(parse_scenario(&text)?)
}

fn build(file: ScenarioFile, lines: &Lines) -> Result<ScenarioConfig, ConfigError> {
    let controller = match &file.controller {
        None => ControllerKind::Eac,
        Some(s) => s
            .get_ref()
            .parse()
            .map_err(|e: crate::controllers::ControlError| {
                ConfigError::at_key("controller", e.to_string()).with_line(lines.of(s.span()))
            })?,
    };

    let domain_line = lines.of(file.domain.span());
    let domain = build_domain(file.domain.get_ref(), domain_line)?;

    let density = match &file.density {
        None => DensityField::Uniform,
        Some(d) => build_density(d.get_ref(), lines.of(d.span()))?,
    };

    let graph = match &file.graph {
        None => GraphPolicy::Complete,
        Some(g) => build_graph_policy(g.get_ref(), lines.of(g.span()))?,
    };

    let (max_steps, seed, initial_weight) = match &file.run {
        None => (DEFAULT_MAX_STEPS, 0, 1.0),
        Some(r) => {
            let r = r.get_ref();
            (
                r.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
                r.seed.unwrap_or(0),
                r.initial_weight.unwrap_or(1.0),
            )
        }
    };

    let mut robots = Vec::with_capacity(file.robots.len());
    for (i, r) in file.robots.iter().enumerate() {
        robots.push(build_robot(i, r.get_ref(), lines.of(r.span()))?);
    }
    if let Some(rr) = &file.random_robots {
        let line = lines.of(rr.span());
        robots.extend(place_random(rr.get_ref(), &domain, seed, line)?);
    }
    if robots.is_empty() {
        return err("robots", None, "at least one robot is required");
    }

    let defaults = Gains::defaults_for(domain.area(), robots.len());
    let gains = match &file.gains {
        None => defaults,
        Some(g) => {
            let g = g.get_ref();
            Gains {
                k_p: g.k_p.unwrap_or(defaults.k_p),
                k_w: g.k_w.unwrap_or(defaults.k_w),
                k_e: g.k_e.unwrap_or(defaults.k_e),
                alpha_atc: g.alpha_atc.unwrap_or(defaults.alpha_atc),
                pbc_gain: g.pbc_gain.unwrap_or(defaults.pbc_gain),
                e_max: g.e_max.unwrap_or(defaults.e_max),
                v_max: g.v_max.unwrap_or(defaults.v_max),
                dt: g.dt.unwrap_or(defaults.dt),
                eps_position: g.eps_position.unwrap_or(defaults.eps_position),
                delta_energy: g.delta_energy.unwrap_or(defaults.delta_energy),
                w_floor: g.w_floor.unwrap_or(defaults.w_floor),
                mass_floor: g.mass_floor.unwrap_or(defaults.mass_floor),
            }
        }
    };
    if let (Some((key, value)), Some(g)) = (gains.first_invalid(), &file.gains) {
        return err(
            format!("gains.{key}"),
            lines.of(g.span()),
            format!("must be positive and finite, got {value}"),
        );
    }

    let speed_source = file
        .energy
        .as_ref()
        .and_then(|e| e.get_ref().speed_source)
        .unwrap_or_default();
    let rate_reset = match &file.rate_reset {
        None => RateReset::default(),
        Some(r) => {
            let r = r.get_ref();
            RateReset {
                threshold: r.threshold.unwrap_or(DEFAULT_RATE_RESET_THRESHOLD),
                mode: match r.two_sided {
                    Some(false) => RateResetMode::OneSided,
                    _ => RateResetMode::TwoSided,
                },
            }
        }
    };

    Ok(ScenarioConfig {
        name: file.name.unwrap_or_else(|| "scenario".into()),
        domain,
        density,
        robots,
        graph,
        controller,
        gains,
        max_steps,
        seed,
        speed_source,
        rate_reset,
        initial_weight,
    })
}

fn build_domain(d: &DomainFile, line: Option<usize>) -> Result<ConvexPolygon, ConfigError> {
    let poly = match (&d.rectangle, &d.vertices) {
        (Some([x0, y0, x1, y1]), None) => {
            if !(x1 > x0 && y1 > y0) {
                return err(
                    "domain.rectangle",
                    line,
                    "expected [x_min, y_min, x_max, y_max] with max > min",
                );
            }
            ConvexPolygon::rectangle(*x0, *y0, *x1, *y1)
        }
        (None, Some(vs)) => {
            ConvexPolygon::new(vs.iter().map(|&[x, y]| Point2::new(x, y)).collect())
        }
        _ => {
            return err(
                "domain",
                line,
                "give exactly one of `rectangle` or `vertices`",
            )
        }
    };
    poly.or_else(|e| err("domain", line, e.to_string()))
}

fn build_density(d: &DensityFile, line: Option<usize>) -> Result<DensityField, ConfigError> {
    let floor = d.floor.unwrap_or(DEFAULT_FLOOR);
    match d.kind.as_str() {
        "uniform" => {
            if d.floor.is_some() || !d.components.is_empty() {
                return err(
                    "density",
                    line,
                    "a uniform density takes no `floor` or `components`",
                );
            }
            Ok(DensityField::Uniform)
        }
        "bimodal" => {
            if !d.components.is_empty() {
                return err(
                    "density.components",
                    line,
                    "the bimodal field has fixed components",
                );
            }
            if !(floor.is_finite() && floor >= 0.0) {
                return err(
                    "density.floor",
                    line,
                    format!("must be non-negative, got {floor}"),
                );
            }
            Ok(DensityField::bimodal(floor))
        }
        "gaussian-mixture" => {
            if d.components.is_empty() {
                return err(
                    "density.components",
                    line,
                    "a mixture needs at least one component",
                );
            }
            let mut bumps = Vec::with_capacity(d.components.len());
            for (k, c) in d.components.iter().enumerate() {
                let bump =
                    GaussianBump::new(Point2::new(c.mean[0], c.mean[1]), c.covariance, c.weight)
                        .or_else(|e| {
                            err(format!("density.components[{k}]"), line, e.to_string())
                        })?;
                bumps.push(bump);
            }
            DensityField::mixture(bumps, floor)
                .or_else(|e| err("density.floor", line, e.to_string()))
        }
        other => err(
            "density.kind",
            line,
            format!("unknown kind {other:?} (expected uniform, gaussian-mixture or bimodal)"),
        ),
    }
}

fn build_graph_policy(g: &GraphFile, line: Option<usize>) -> Result<GraphPolicy, ConfigError> {
    match (g.policy.as_str(), g.radius) {
        ("complete", None) if g.frozen.is_none() => Ok(GraphPolicy::Complete),
        ("complete", _) => err(
            "graph",
            line,
            "the complete policy takes no `radius` or `frozen`",
        ),
        ("disk", Some(radius)) => Ok(GraphPolicy::Disk {
            radius,
            frozen: g.frozen.unwrap_or(true),
        }),
        ("disk", None) => err("graph.radius", line, "the disk policy requires a radius"),
        (other, _) => err(
            "graph.policy",
            line,
            format!("unknown policy {other:?} (expected complete or disk)"),
        ),
    }
}

fn build_robot(i: usize, r: &RobotFile, line: Option<usize>) -> Result<RobotSpec, ConfigError> {
    let key = |field: &str| format!("robots[{i}].{field}");
    let e_init = r.e_init.unwrap_or(DEFAULT_E_INIT);
    let schedule = match (&r.schedule, r.alpha, r.beta) {
        (Some(s), None, None) => s.clone(),
        (None, Some(alpha), Some(beta)) => vec![ScheduleSegment {
            from_step: 0,
            alpha,
            beta,
        }],
        (Some(_), _, _) => {
            return err(
                key("schedule"),
                line,
                "give either `schedule` or `alpha`/`beta`, not both",
            )
        }
        (None, None, _) => return err(key("alpha"), line, "missing required field"),
        (None, _, None) => return err(key("beta"), line, "missing required field"),
    };
    let profile = EnergyProfile::new(e_init, schedule).or_else(|e| {
        let field = match e.to_string() {
            m if m.contains("alpha") => "alpha",
            m if m.contains("beta") => "beta",
            m if m.contains("initial energy") => "e_init",
            _ => "schedule",
        };
        err(key(field), line, e.to_string())
    })?;
    Ok(RobotSpec {
        position: Point2::new(r.position[0], r.position[1]),
        profile,
    })
}

fn place_random(
    r: &RandomRobotsFile,
    domain: &ConvexPolygon,
    seed: u64,
    line: Option<usize>,
) -> Result<Vec<RobotSpec>, ConfigError> {
    if r.count == 0 {
        return err("random_robots.count", line, "must be at least 1");
    }
    let margin = r.margin.unwrap_or(0.0);
    let (lo, hi) = domain.bounds();
    if !(margin >= 0.0 && 2.0 * margin < (hi.x - lo.x).min(hi.y - lo.y)) {
        return err(
            "random_robots.margin",
            line,
            format!("{margin} leaves no room to place robots"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(r.count);
    for _ in 0..PLACEMENT_ATTEMPTS {
        if out.len() == r.count {
            break;
        }
        let q = Point2::new(
            rng.gen_range(lo.x + margin..hi.x - margin),
            rng.gen_range(lo.y + margin..hi.y - margin),
        );
        if domain.contains(q, 0.0) {
            let (alpha, beta) = (r.alpha.sample(&mut rng), r.beta.sample(&mut rng));
            let profile = EnergyProfile::constant(r.e_init.unwrap_or(DEFAULT_E_INIT), alpha, beta)
                .or_else(|e| err(format!("robots[{}]", out.len()), line, e.to_string()))?;
            out.push(RobotSpec {
                position: q,
                profile,
            });
        }
    }
    if out.len() < r.count {
        return err(
            "random_robots",
            line,
            "could not place every robot inside the domain",
        );
    }
    Ok(out)
}

fn s<T>(value: T) -> Spanned<T> {
    Spanned::new(0..0, value)
}

/// Writes `config` back out as a scenario document with every default made
/// explicit. Randomly placed robots are written at their sampled positions.
pub fn to_toml_string(config: &ScenarioConfig) -> String {
    let g = config.gains;
    let density = match &config.density {
        DensityField::Uniform => DensityFile {
            kind: "uniform".into(),
            floor: None,
            components: vec![],
        },
        DensityField::GaussianMixture { components, floor } => DensityFile {
            kind: "gaussian-mixture".into(),
            floor: Some(*floor),
            components: components
                .iter()
                .map(|c| ComponentFile {
                    mean: [c.mean().x, c.mean().y],
                    covariance: c.covariance(),
                    weight: c.weight(),
                })
                .collect(),
        },
    };
    let graph = match config.graph {
        GraphPolicy::Complete => GraphFile {
            policy: "complete".into(),
            radius: None,
            frozen: None,
        },
        GraphPolicy::Disk { radius, frozen } => GraphFile {
            policy: "disk".into(),
            radius: Some(radius),
            frozen: Some(frozen),
        },
    };
    let robots = config
        .robots
        .iter()
        .map(|r| {
            let sched = r.profile.schedule();
            let (alpha, beta, schedule) = match sched {
                [only] => (Some(only.alpha), Some(only.beta), None),
                _ => (None, None, Some(sched.to_vec())),
            };
            s(RobotFile {
                position: [r.position.x, r.position.y],
                e_init: Some(r.profile.e_init()),
                alpha,
                beta,
                schedule,
            })
        })
        .collect();
    let file = ScenarioFile {
        name: Some(config.name.clone()),
        controller: Some(s(config.controller.as_str().to_string())),
        domain: s(DomainFile {
            rectangle: None,
            vertices: Some(
                config
                    .domain
                    .vertices()
                    .iter()
                    .map(|v| [v.x, v.y])
                    .collect(),
            ),
        }),
        density: Some(s(density)),
        graph: Some(s(graph)),
        gains: Some(s(GainsFile {
            k_p: Some(g.k_p),
            k_w: Some(g.k_w),
            k_e: Some(g.k_e),
            alpha_atc: Some(g.alpha_atc),
            pbc_gain: Some(g.pbc_gain),
            e_max: Some(g.e_max),
            v_max: Some(g.v_max),
            dt: Some(g.dt),
            eps_position: Some(g.eps_position),
            delta_energy: Some(g.delta_energy),
            w_floor: Some(g.w_floor),
            mass_floor: Some(g.mass_floor),
        })),
        energy: Some(s(EnergyFile {
            speed_source: Some(config.speed_source),
        })),
        rate_reset: Some(s(RateResetFile {
            threshold: Some(config.rate_reset.threshold),
            two_sided: Some(config.rate_reset.mode == RateResetMode::TwoSided),
        })),
        run: Some(s(RunFile {
            max_steps: Some(config.max_steps),
            seed: Some(config.seed),
            initial_weight: Some(config.initial_weight),
        })),
        random_robots: None,
        robots,
    };
    toml::to_string(&file).expect("scenario documents always serialize")
}
