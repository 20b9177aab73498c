//! Flat-file artifacts of a run: per-robot trace, per-step scalars, a text
//! summary and SVG snapshots of the partition.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::density::DensityField;
use crate::engine::{partition, ScenarioConfig, SimTrace};
use crate::geometry::{ConvexPolygon, GeometryError, Point2};
use crate::scenario::to_toml_string;
use crate::study::{ComparisonRow, SweepRow};
use crate::Error;

pub const TRACE_FILE: &str = "trace.csv";
pub const STEPS_FILE: &str = "steps.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

pub const TRACE_COLUMNS: [&str; 11] = [
    "step",
    "robot",
    "x",
    "y",
    "weight",
    "energy",
    "e_dot",
    "area",
    "mass",
    "dist_to_centroid",
    "w_times_edot",
];
pub const STEP_COLUMNS: [&str; 3] = ["step", "locational_cost", "convergence_cost"];

#[derive(Serialize)]
struct TraceRow {
    step: u32,
    robot: usize,
    x: f64,
    y: f64,
    weight: f64,
    energy: f64,
    e_dot: f64,
    area: f64,
    mass: f64,
    dist_to_centroid: f64,
    w_times_edot: f64,
}

#[derive(Serialize)]
struct StepRow {
    step: u32,
    locational_cost: f64,
    convergence_cost: f64,
}

fn csv_bytes<R: Serialize>(header: &[&str], rows: impl Iterator<Item = R>) -> Vec<u8> {
    // The header is written by hand so that an empty trace still has one.
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.serialize(row).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// `trace.csv`: one row per executed step per robot.
pub fn trace_csv(trace: &SimTrace) -> Vec<u8> {
    let rows = trace.records.iter().flat_map(|rec| {
        rec.robots.iter().enumerate().map(move |(i, r)| TraceRow {
            step: rec.step,
            robot: i,
            x: r.position.x,
            y: r.position.y,
            weight: r.weight,
            energy: r.energy,
            e_dot: r.e_dot,
            area: r.area,
            mass: r.mass,
            dist_to_centroid: r.dist_to_centroid,
            w_times_edot: r.w_times_edot,
        })
    });
    csv_bytes(&TRACE_COLUMNS, rows)
}

/// `steps.csv`: scalar metrics per executed step.
pub fn steps_csv(trace: &SimTrace) -> Vec<u8> {
    let rows = trace.records.iter().map(|r| StepRow {
        step: r.step,
        locational_cost: r.locational_cost,
        convergence_cost: r.convergence_cost,
    });
    csv_bytes(&STEP_COLUMNS, rows)
}

pub fn summary_text(config: &ScenarioConfig, trace: &SimTrace) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", trace.scenario);
    let _ = writeln!(s, "controller: {}", trace.controller.as_str());
    let _ = writeln!(s, "termination: {}", trace.termination);
    let _ = writeln!(s, "steps: {}", trace.steps());
    let _ = writeln!(
        s,
        "algebraic_connectivity: {:.6}",
        trace.algebraic_connectivity
    );
    let _ = writeln!(
        s,
        "initial_locational_cost: {:.6}",
        trace.initial.locational_cost
    );
    let _ = writeln!(
        s,
        "final_locational_cost: {:.6}",
        trace.final_locational_cost()
    );
    let _ = writeln!(s, "final_weights:");
    for (i, w) in trace.final_weights().iter().enumerate() {
        let _ = writeln!(s, "  robot {i}: {w:.6}");
    }
    let _ = writeln!(s, "\n# resolved scenario with all defaults applied");
    s.push_str(&to_toml_string(config));
    s
}

const PALETTE: [&str; 10] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
    "#d9d9d9", "#bc80bd",
];

/// Filled power cells with robot markers and centroids.
pub fn partition_svg(
    domain: &ConvexPolygon,
    density: &DensityField,
    positions: &[Point2],
    weights: &[f64],
) -> Result<String, GeometryError> {
    let (_, cells) = partition(positions, weights, domain, density)?;
    let (lo, hi) = domain.bounds();
    let size = 600.0;
    let scale = size / (hi.x - lo.x).max(hi.y - lo.y);
    let width = (hi.x - lo.x) * scale;
    let height = (hi.y - lo.y) * scale;
    // SVG y grows downward.
    let map = |p: Point2| ((p.x - lo.x) * scale, (hi.y - p.y) * scale);
    let points = |poly: &ConvexPolygon| {
        poly.vertices()
            .iter()
            .map(|&v| {
                let (x, y) = map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##,
        points(domain)
    );
    for cell in &cells {
        if let Some(poly) = &cell.polygon {
            let _ = writeln!(
                s,
                r##"<polygon points="{}" fill="{}" stroke="#333333" stroke-width="1"/>"##,
                points(poly),
                PALETTE[cell.owner % PALETTE.len()]
            );
        }
    }
    for cell in &cells {
        if let Some(c) = cell.centroid {
            let (x, y) = map(c);
            let _ = writeln!(
                s,
                r##"<path d="M{:.2},{:.2}h8M{:.2},{:.2}v8" stroke="#555555" stroke-width="1.5"/>"##,
                x - 4.0,
                y,
                x,
                y - 4.0
            );
        }
    }
    for (i, &p) in positions.iter().enumerate() {
        let (x, y) = map(p);
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 6.0,
            y - 6.0,
            i + 1
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Positions and weights at `step`; step 0 is the initial state.
pub fn state_at(trace: &SimTrace, step: u32) -> Option<(Vec<Point2>, Vec<f64>)> {
    if step == 0 {
        return Some((
            trace.initial.positions.clone(),
            trace.initial.weights.clone(),
        ));
    }
    let rec = trace.records.iter().find(|r| r.step == step)?;
    Some((
        rec.robots.iter().map(|r| r.position).collect(),
        rec.weights(),
    ))
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf, Error> {
    fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}

/// Writes the CSVs, the summary and one SVG per requested step into `dir`.
/// Steps past the end of the run are skipped. Returns the written paths.
pub fn write_run(
    config: &ScenarioConfig,
    trace: &SimTrace,
    dir: &Path,
    svg_steps: &[u32],
) -> Result<Vec<PathBuf>, Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let mut written = vec![
        write(dir.join(TRACE_FILE), &trace_csv(trace))?,
        write(dir.join(STEPS_FILE), &steps_csv(trace))?,
        write(
            dir.join(SUMMARY_FILE),
            summary_text(config, trace).as_bytes(),
        )?,
    ];
    for &step in svg_steps {
        let Some((positions, weights)) = state_at(trace, step) else {
            continue;
        };
        let svg = partition_svg(&config.domain, &config.density, &positions, &weights)
            .map_err(|source| crate::SimError::Geometry { step, source })?;
        written.push(write(
            dir.join(format!("partition_{step}.svg")),
            svg.as_bytes(),
        )?);
    }
    Ok(written)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|w| format!("{w:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let mut s = format!(
        "{:<6} {:>14} {:>6} {:<16} weights\n",
        "kind", "locational_cost", "steps", "termination"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<6} {:>14.4} {:>6} {:<16} {}",
            r.controller.as_str(),
            r.final_locational_cost,
            r.steps,
            r.termination.as_str(),
            join(&r.final_weights)
        );
    }
    s
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:>8} {:>6} {:>10} {:>6} {:<16} {:>12} {:>12} {:>10}\n",
        "radius",
        "edges",
        "lambda2",
        "steps",
        "termination",
        "cost_first",
        "cost_final",
        "steps_1pct"
    );
    for r in rows {
        let _ = write!(
            s,
            "{:>8.3} {:>6} {:>10.4}",
            r.radius, r.edges, r.algebraic_connectivity
        );
        match &r.run {
            None => s.push_str("  disconnected\n"),
            Some(run) => {
                let _ = writeln!(
                    s,
                    " {:>6} {:<16} {:>12.4e} {:>12.4e} {:>10}",
                    run.steps,
                    run.termination.as_str(),
                    run.initial_convergence_cost,
                    run.final_convergence_cost,
                    run.steps_to_consensus
                        .map_or("-".to_string(), |v| v.to_string())
                );
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_scenario;
    use crate::scenario::parse_scenario;

    const AT_CENTER: &str = r#"
name = "still"
[domain]
rectangle = [0.0, 0.0, 2.0, 2.0]
[[robots]]
position = [1.0, 1.0]
alpha = 1.0
beta = 1.0
"#;

    #[test]
    fn zero_step_run_has_header_only_csv() {
        let cfg = parse_scenario(AT_CENTER).unwrap();
        let trace = run_scenario(&cfg).unwrap();
        assert_eq!(trace.steps(), 0);
        let csv = String::from_utf8(trace_csv(&trace)).unwrap();
        assert_eq!(csv, format!("{}\n", TRACE_COLUMNS.join(",")));
        let steps = String::from_utf8(steps_csv(&trace)).unwrap();
        assert_eq!(steps.lines().count(), 1);
        let summary = summary_text(&cfg, &trace);
        assert!(summary.contains("termination: all-at-centroid"));
        assert!(summary.contains("steps: 0"));
    }

    #[test]
    fn single_robot_svg_is_the_domain() {
        let cfg = parse_scenario(AT_CENTER).unwrap();
        let svg =
            partition_svg(&cfg.domain, &cfg.density, &[Point2::new(0.5, 0.5)], &[0.0]).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
        let mut polys: Vec<Vec<&str>> = svg
            .lines()
            .filter_map(|l| l.strip_prefix(r#"<polygon points=""#))
            .map(|l| {
                let mut v: Vec<&str> = l.split('"').next().unwrap().split(' ').collect();
                v.sort_unstable();
                v
            })
            .collect();
        assert_eq!(
            polys[0],
            ["0.00,0.00", "0.00,600.00", "600.00,0.00", "600.00,600.00"]
        );
        assert_eq!(polys.pop(), polys.pop());
    }
}
