//! One function per subcommand. Each builds its whole result in memory and
//! writes it once at the end.

use std::f64::consts::PI;

use bifree::bifreeconv::{marginal_atoms, SmoothedDensity};
use bifree::freeconv::stieltjes_inversion;
use bifree::limits::{planar_atom_mass_sliding_limit, DEEP_LADDER};
use bifree::schema::{AtomJson, Measure1DJson, PlanarAtomJson, PlanarMeasureJson};
use bifree::semigroup::atom_evolution;
use bifree::series::{
    bifree_convolve_moments, free_convolve_moments, free_power_moments, semigroup_moments,
};
use bifree::{
    bi_boolean_eval, bifree_atoms, bifree_eval, boolean_atoms, boolean_eval, cbifree_eval,
    cfree_eval, density2d_smoothed, double_poisson_smoothing, free_atoms, marginal_atom_evolution,
    semigroup_eval, semigroup_marginal_eval, Atom1D, BiFreeEvaluator, ComplexPoint,
    FreeConvEvaluator, Measure1D, PlanarAtom, PlanarMeasure, SemigroupState, SolverConfig,
};
use serde::Serialize;

use crate::args::{Cli, Command, Run};
use crate::error::{usage, CliResult};
use crate::input::{self, AnyMeasure, Grid};
use crate::output::{fmt_f64, to_json, Csv};

const LINE_EPS: f64 = 1e-6;
const PLANE_EPS: f64 = 1e-2;
const LINE_ORDER: usize = 16;
const PLANE_ORDER: usize = 8;
/// Total atom mass within this of one makes the atoms a complete measure.
const FULL_MASS: f64 = 1e-12;

type C = [f64; 2];

fn cx(z: ComplexPoint) -> C {
    [z.re, z.im]
}

/// Results of one run: the main document and an optional density grid.
struct Artifacts {
    main: String,
    grid: Option<String>,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let (run, artifacts) = match &cli.command {
        Command::FreeConv(r) => (r, free_conv(r)?),
        Command::BifreeConv(r) => (r, bifree_conv(r)?),
        Command::BooleanConv(r) => (r, boolean_conv(r)?),
        Command::BiBooleanConv(r) => (r, bi_boolean_conv(r)?),
        Command::CfreeConv(r) => (r, cfree_conv(r)?),
        Command::CbifreeConv(r) => (r, cbifree_conv(r)?),
        Command::Semigroup(r) => (r, semigroup(r)?),
        Command::Atoms(r) => (r, atoms(r)?),
        Command::Moments(r) => (r, moments(r)?),
        Command::Density(r) => (r, density(r)?),
    };
    if let Some(grid) = &artifacts.grid {
        let path = run
            .csv
            .as_deref()
            .ok_or_else(|| usage("--grid needs --csv for the density output"))?;
        input::write(path, grid)?;
    }
    match &run.out {
        Some(path) => input::write(path, &artifacts.main),
        None => {
            print!("{}", artifacts.main);
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing

impl Run {
    fn solver(&self) -> CliResult<SolverConfig> {
        let cfg = SolverConfig {
            tolerance: self.tol,
            max_iterations: self.max_iter,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn expect_inputs(&self, n: usize, what: &str) -> CliResult<()> {
        if self.inputs.len() == n {
            Ok(())
        } else {
            Err(usage(format!("expected {n} input file(s): {what}")))
        }
    }

    fn line_pair(&self) -> CliResult<(Measure1D, Measure1D)> {
        self.expect_inputs(2, "two measures on the line")?;
        Ok((
            input::load_line(&self.inputs[0], self.renormalize)?,
            input::load_line(&self.inputs[1], self.renormalize)?,
        ))
    }

    fn plane_pair(&self) -> CliResult<(PlanarMeasure, PlanarMeasure)> {
        self.expect_inputs(2, "two planar measures")?;
        Ok((
            input::load_plane(&self.inputs[0], self.renormalize)?,
            input::load_plane(&self.inputs[1], self.renormalize)?,
        ))
    }

    fn eps(&self, default: f64) -> CliResult<f64> {
        let eps = self.eps.unwrap_or(default);
        if eps > 0.0 && eps.is_finite() {
            Ok(eps)
        } else {
            Err(usage("--eps must be positive"))
        }
    }

    fn grid(&self) -> CliResult<Option<Grid>> {
        self.grid.as_deref().map(input::parse_grid).transpose()
    }

    fn line_grid(&self) -> CliResult<Option<Vec<f64>>> {
        match self.grid()? {
            None => Ok(None),
            Some(Grid { x, y: None }) => Ok(Some(x)),
            Some(_) => Err(usage(
                "--grid takes a single axis x0:x1:n for measures on the line",
            )),
        }
    }

    /// Planar grids always go through arguments in both half-planes.
    fn plane_grid(&self) -> CliResult<Option<(Vec<f64>, Vec<f64>)>> {
        match self.grid()? {
            None => Ok(None),
            Some(Grid { y: None, .. }) => Err(usage(
                "--grid takes two axes x0:x1:n,y0:y1:m for planar measures",
            )),
            Some(Grid { x, y: Some(y) }) => {
                self.require_experimental("planar density grids")?;
                Ok(Some((x, y)))
            }
        }
    }

    fn require_experimental(&self, what: &str) -> CliResult<()> {
        if self.experimental_2d_density {
            Ok(())
        } else {
            Err(usage(format!("{what} need --experimental-2d-density")))
        }
    }

    fn line_points(&self) -> CliResult<Vec<ComplexPoint>> {
        self.at.iter().map(|s| input::parse_point(s)).collect()
    }

    fn plane_points(&self) -> CliResult<Vec<(ComplexPoint, ComplexPoint)>> {
        let points: Vec<_> = self
            .at
            .iter()
            .map(|s| input::parse_point_pair(s))
            .collect::<CliResult<_>>()?;
        if points.iter().any(|(z, w)| z.im * w.im < 0.0) {
            self.require_experimental("points in opposite half-planes")?;
        }
        Ok(points)
    }

    fn times(&self) -> CliResult<Option<Vec<f64>>> {
        let ts = match (self.t, &self.t_range) {
            (Some(t), _) => vec![t],
            (None, Some(range)) => input::linspace(range, "--t-range")?,
            (None, None) => return Ok(None),
        };
        if let Some(t) = ts.iter().find(|t| !(**t >= 1.0)) {
            return Err(usage(format!(
                "semigroup times must be at least 1, got {t}"
            )));
        }
        Ok(Some(ts))
    }
}

fn atom_json(atoms: &[Atom1D]) -> Vec<AtomJson> {
    atoms
        .iter()
        .map(|a| AtomJson {
            x: a.location,
            m: a.mass,
        })
        .collect()
}

/// The atoms as a measure when they carry all of the mass.
fn full_line_measure(atoms: &[Atom1D]) -> CliResult<Option<Measure1DJson>> {
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    if atoms.is_empty() || (total - 1.0).abs() > FULL_MASS {
        return Ok(None);
    }
    let m = Measure1D::new(atoms.to_vec(), Vec::new())?;
    Ok(Some(Measure1DJson::from(&m)))
}

fn full_plane_measure(atoms: &[PlanarAtom]) -> CliResult<Option<PlanarMeasureJson>> {
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    if atoms.is_empty() || (total - 1.0).abs() > FULL_MASS {
        return Ok(None);
    }
    let m = PlanarMeasure::new(atoms.to_vec(), None)?;
    Ok(Some(PlanarMeasureJson::from(&m)))
}

/// `-Im G/π` at height `eps` minus the Poisson kernels of the known atoms,
/// i.e. the smoothed density of the continuous part.
fn continuous_density<G>(
    g: G,
    xs: &[f64],
    eps: f64,
    atoms: &[Atom1D],
    meta: Vec<(&str, String)>,
) -> CliResult<String>
where
    G: Fn(ComplexPoint) -> bifree::Result<ComplexPoint> + Sync,
{
    let raw = stieltjes_inversion(g, xs, eps, false)?;
    let mut meta = meta;
    meta.push(("eps", fmt_f64(eps)));
    meta.push(("atoms_subtracted", atoms.len().to_string()));
    let mut csv = Csv::new(&meta, &["x", "density"]);
    for (x, d) in raw {
        let kernels: f64 = atoms
            .iter()
            .map(|a| a.mass * eps / (PI * ((x - a.location).powi(2) + eps * eps)))
            .sum();
        csv.row(&[x, d - kernels]);
    }
    Ok(csv.finish())
}

fn smoothed_csv(
    command: &str,
    eps: f64,
    delta: f64,
    layers: &[(Option<f64>, SmoothedDensity)],
) -> String {
    let with_t = layers.iter().any(|(t, _)| t.is_some());
    let failed: usize = layers.iter().map(|(_, d)| d.failed_nodes).sum();
    let meta = vec![
        ("command", command.to_string()),
        ("experimental", "true".to_string()),
        ("eps", fmt_f64(eps)),
        ("delta", fmt_f64(delta)),
        ("failed_nodes", failed.to_string()),
    ];
    let header: &[&str] = if with_t {
        &["t", "x", "y", "density"]
    } else {
        &["x", "y", "density"]
    };
    let mut csv = Csv::new(&meta, header);
    for (t, d) in layers {
        for (i, &x) in d.x.iter().enumerate() {
            for (j, &y) in d.y.iter().enumerate() {
                match t {
                    Some(t) => csv.row(&[*t, x, y, d.values[i][j]]),
                    None => csv.row(&[x, y, d.values[i][j]]),
                }
            }
        }
    }
    csv.finish()
}

#[derive(Serialize)]
struct LineValue {
    z: C,
    g: C,
}

#[derive(Serialize)]
struct PlaneValue {
    z: C,
    w: C,
    g: C,
}

// ---------------------------------------------------------------------------
// Convolutions on the line

#[derive(Serialize)]
struct FreeValue {
    z: C,
    g: C,
    omega1: C,
    omega2: C,
}

#[derive(Serialize)]
struct FreeConvReport {
    command: &'static str,
    atoms: Vec<AtomJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<Measure1DJson>,
    values: Vec<FreeValue>,
}

fn free_conv(r: &Run) -> CliResult<Artifacts> {
    let (mu1, mu2) = r.line_pair()?;
    let atoms = free_atoms(&mu1, &mu2);
    let ev = FreeConvEvaluator::new(mu1, mu2, r.solver()?)?;
    let values = r
        .line_points()?
        .into_iter()
        .map(|z| {
            let s = ev.subordination(z)?;
            Ok(FreeValue {
                z: cx(z),
                g: cx(ev.eval(z)?),
                omega1: cx(s.omega1),
                omega2: cx(s.omega2),
            })
        })
        .collect::<CliResult<_>>()?;
    let grid = match r.line_grid()? {
        Some(xs) => Some(continuous_density(
            |z| ev.eval(z),
            &xs,
            r.eps(LINE_EPS)?,
            &atoms,
            vec![("command", "free-conv".into())],
        )?),
        None => None,
    };
    let report = FreeConvReport {
        command: "free-conv",
        measure: full_line_measure(&atoms)?,
        atoms: atom_json(&atoms),
        values,
    };
    Ok(Artifacts {
        main: to_json(&report),
        grid,
    })
}

#[derive(Serialize)]
struct LineReport {
    command: &'static str,
    atoms: Vec<AtomJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<Measure1DJson>,
    values: Vec<LineValue>,
}

fn boolean_conv(r: &Run) -> CliResult<Artifacts> {
    let (mu1, mu2) = r.line_pair()?;
    let atoms = if mu1.is_atomic() && mu2.is_atomic() {
        boolean_atoms(&mu1, &mu2)?
    } else {
        Vec::new()
    };
    let g = |z| boolean_eval(&mu1, &mu2, z);
    let values = r
        .line_points()?
        .into_iter()
        .map(|z| {
            Ok(LineValue {
                z: cx(z),
                g: cx(g(z)?),
            })
        })
        .collect::<CliResult<_>>()?;
    let grid = match r.line_grid()? {
        Some(xs) => Some(continuous_density(
            g,
            &xs,
            r.eps(LINE_EPS)?,
            &atoms,
            vec![("command", "boolean-conv".into())],
        )?),
        None => None,
    };
    let report = LineReport {
        command: "boolean-conv",
        measure: full_line_measure(&atoms)?,
        atoms: atom_json(&atoms),
        values,
    };
    Ok(Artifacts {
        main: to_json(&report),
        grid,
    })
}

#[derive(Serialize)]
struct PairValue {
    z: C,
    g_phi: C,
    g_psi: C,
}

#[derive(Serialize)]
struct PairReport {
    command: &'static str,
    values: Vec<PairValue>,
}

fn cfree_conv(r: &Run) -> CliResult<Artifacts> {
    r.expect_inputs(2, "two pair files")?;
    let p1 = input::load_line_pair(&r.inputs[0], r.renormalize)?;
    let p2 = input::load_line_pair(&r.inputs[1], r.renormalize)?;
    let cfg = r.solver()?;
    let values = r
        .line_points()?
        .into_iter()
        .map(|z| {
            let (gs, gm) = cfree_eval(&p1, &p2, z, &cfg)?;
            Ok(PairValue {
                z: cx(z),
                g_phi: cx(gs),
                g_psi: cx(gm),
            })
        })
        .collect::<CliResult<_>>()?;
    let grid = match r.line_grid()? {
        Some(xs) => {
            let eps = r.eps(LINE_EPS)?;
            let phi =
                stieltjes_inversion(|z| Ok(cfree_eval(&p1, &p2, z, &cfg)?.0), &xs, eps, false)?;
            let psi =
                stieltjes_inversion(|z| Ok(cfree_eval(&p1, &p2, z, &cfg)?.1), &xs, eps, false)?;
            let meta = [("command", "cfree-conv".to_string()), ("eps", fmt_f64(eps))];
            let mut csv = Csv::new(&meta, &["x", "density_phi", "density_psi"]);
            for ((x, a), (_, b)) in phi.into_iter().zip(psi) {
                csv.row(&[x, a, b]);
            }
            Some(csv.finish())
        }
        None => None,
    };
    Ok(Artifacts {
        main: to_json(&PairReport {
            command: "cfree-conv",
            values,
        }),
        grid,
    })
}

// ---------------------------------------------------------------------------
// Convolutions in the plane

#[derive(Serialize)]
struct BiAtomJson {
    x: f64,
    y: f64,
    m: f64,
    first_marginal_mass: f64,
    second_marginal_mass: f64,
    ratio_sum: f64,
    analytic: f64,
}

#[derive(Serialize)]
struct Marginals {
    first: Vec<AtomJson>,
    second: Vec<AtomJson>,
}

#[derive(Serialize)]
struct BiValue {
    z: C,
    w: C,
    g: C,
    denominator: C,
    experimental: bool,
}

#[derive(Serialize)]
struct BifreeReport {
    command: &'static str,
    atoms: Vec<BiAtomJson>,
    marginal_atoms: Marginals,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<PlanarMeasureJson>,
    values: Vec<BiValue>,
}

fn bifree_atom_json(
    eta1: &PlanarMeasure,
    eta2: &PlanarMeasure,
    cfg: &SolverConfig,
) -> CliResult<(Vec<PlanarAtom>, Vec<BiAtomJson>)> {
    let found = bifree_atoms(eta1, eta2, cfg)?;
    let json = found
        .iter()
        .map(|(a, d)| BiAtomJson {
            x: a.x,
            y: a.y,
            m: a.mass,
            first_marginal_mass: d.first_marginal_mass,
            second_marginal_mass: d.second_marginal_mass,
            ratio_sum: d.ratio_sum,
            analytic: d.analytic,
        })
        .collect();
    Ok((found.into_iter().map(|(a, _)| a).collect(), json))
}

fn bifree_conv(r: &Run) -> CliResult<Artifacts> {
    let (eta1, eta2) = r.plane_pair()?;
    let cfg = r.solver()?;
    let points = r.plane_points()?;
    let grid = r.plane_grid()?;
    let (atoms, atom_rows) = bifree_atom_json(&eta1, &eta2, &cfg)?;
    let (first, second) = marginal_atoms(&eta1, &eta2);
    let ev = BiFreeEvaluator::new(eta1, eta2, cfg)?;
    let values = points
        .into_iter()
        .map(|(z, w)| {
            let (g, d) = bifree_eval(&ev, z, w)?;
            Ok(BiValue {
                z: cx(z),
                w: cx(w),
                g: cx(g),
                denominator: cx(d.denominator),
                experimental: d.experimental,
            })
        })
        .collect::<CliResult<_>>()?;
    let csv = match grid {
        Some((xs, ys)) => {
            let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
            let d = density2d_smoothed(&ev, &xs, &ys, eps, delta)?;
            Some(smoothed_csv("bifree-conv", eps, delta, &[(None, d)]))
        }
        None => None,
    };
    let report = BifreeReport {
        command: "bifree-conv",
        measure: full_plane_measure(&atoms)?,
        atoms: atom_rows,
        marginal_atoms: Marginals {
            first: atom_json(&first),
            second: atom_json(&second),
        },
        values,
    };
    Ok(Artifacts {
        main: to_json(&report),
        grid: csv,
    })
}

#[derive(Serialize)]
struct PlaneReport {
    command: &'static str,
    values: Vec<PlaneValue>,
}

fn bi_boolean_conv(r: &Run) -> CliResult<Artifacts> {
    let (eta1, eta2) = r.plane_pair()?;
    let g = |z, w| bi_boolean_eval(&eta1, &eta2, z, w);
    let values = r
        .plane_points()?
        .into_iter()
        .map(|(z, w)| {
            Ok(PlaneValue {
                z: cx(z),
                w: cx(w),
                g: cx(g(z, w)?),
            })
        })
        .collect::<CliResult<_>>()?;
    let csv = match r.plane_grid()? {
        Some((xs, ys)) => {
            let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
            let d = double_poisson_smoothing(g, &xs, &ys, eps, delta)?;
            Some(smoothed_csv("bi-boolean-conv", eps, delta, &[(None, d)]))
        }
        None => None,
    };
    Ok(Artifacts {
        main: to_json(&PlaneReport {
            command: "bi-boolean-conv",
            values,
        }),
        grid: csv,
    })
}

#[derive(Serialize)]
struct PlanePairValue {
    z: C,
    w: C,
    g_phi: C,
    g_psi: C,
}

#[derive(Serialize)]
struct PlanePairReport {
    command: &'static str,
    values: Vec<PlanePairValue>,
}

fn cbifree_conv(r: &Run) -> CliResult<Artifacts> {
    r.expect_inputs(2, "two planar pair files")?;
    let p1 = input::load_plane_pair(&r.inputs[0], r.renormalize)?;
    let p2 = input::load_plane_pair(&r.inputs[1], r.renormalize)?;
    let cfg = r.solver()?;
    let values = r
        .plane_points()?
        .into_iter()
        .map(|(z, w)| {
            let (gt, ge) = cbifree_eval(&p1, &p2, z, w, &cfg)?;
            Ok(PlanePairValue {
                z: cx(z),
                w: cx(w),
                g_phi: cx(gt),
                g_psi: cx(ge),
            })
        })
        .collect::<CliResult<_>>()?;
    let csv = match r.plane_grid()? {
        Some((xs, ys)) => {
            let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
            let phi = double_poisson_smoothing(
                |z, w| Ok(cbifree_eval(&p1, &p2, z, w, &cfg)?.0),
                &xs,
                &ys,
                eps,
                delta,
            )?;
            let psi = double_poisson_smoothing(
                |z, w| Ok(cbifree_eval(&p1, &p2, z, w, &cfg)?.1),
                &xs,
                &ys,
                eps,
                delta,
            )?;
            let meta = [
                ("command", "cbifree-conv".to_string()),
                ("experimental", "true".to_string()),
                ("eps", fmt_f64(eps)),
                ("delta", fmt_f64(delta)),
                (
                    "failed_nodes",
                    (phi.failed_nodes + psi.failed_nodes).to_string(),
                ),
            ];
            let mut csv = Csv::new(&meta, &["x", "y", "density_phi", "density_psi"]);
            for (i, &x) in xs.iter().enumerate() {
                for (j, &y) in ys.iter().enumerate() {
                    csv.row(&[x, y, phi.values[i][j], psi.values[i][j]]);
                }
            }
            Some(csv.finish())
        }
        None => None,
    };
    Ok(Artifacts {
        main: to_json(&PlanePairReport {
            command: "cbifree-conv",
            values,
        }),
        grid: csv,
    })
}

// ---------------------------------------------------------------------------
// Semigroup

#[derive(Serialize)]
struct EvolvedAtomJson {
    x: f64,
    y: f64,
    m: f64,
    first_marginal_mass: f64,
    second_marginal_mass: f64,
    analytic: f64,
}

#[derive(Serialize)]
struct SemigroupStep {
    t: f64,
    atoms: Vec<EvolvedAtomJson>,
    marginal_atoms: Marginals,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<PlanarMeasureJson>,
    values: Vec<PlaneValue>,
}

#[derive(Serialize)]
struct SemigroupReport {
    command: &'static str,
    steps: Vec<SemigroupStep>,
}

fn evolved_atoms(
    s: &SemigroupState,
    cfg: &SolverConfig,
) -> CliResult<(Vec<PlanarAtom>, Vec<EvolvedAtomJson>)> {
    let evolved = atom_evolution(s);
    let rows = evolved
        .iter()
        .map(|(a, e)| {
            let analytic = planar_atom_mass_sliding_limit(
                |z, w| semigroup_eval(s, z, w, cfg),
                a.x,
                a.y,
                &DEEP_LADDER,
            )?;
            Ok(EvolvedAtomJson {
                x: a.x,
                y: a.y,
                m: a.mass,
                first_marginal_mass: e.first_marginal_mass,
                second_marginal_mass: e.second_marginal_mass,
                analytic,
            })
        })
        .collect::<CliResult<_>>()?;
    Ok((evolved.into_iter().map(|(a, _)| a).collect(), rows))
}

fn semigroup(r: &Run) -> CliResult<Artifacts> {
    r.expect_inputs(1, "one planar measure")?;
    let eta = input::load_plane(&r.inputs[0], r.renormalize)?;
    let times = r
        .times()?
        .ok_or_else(|| usage("semigroup needs --t or --t-range"))?;
    let cfg = r.solver()?;
    let points = r.plane_points()?;
    let grid = r.plane_grid()?;
    let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
    let mut steps = Vec::new();
    let mut layers = Vec::new();
    for t in times {
        let s = SemigroupState::new(eta.clone(), t)?;
        let (atoms, rows) = evolved_atoms(&s, &cfg)?;
        let (mu, nu) = s.marginals();
        let values = points
            .iter()
            .map(|&(z, w)| {
                Ok(PlaneValue {
                    z: cx(z),
                    w: cx(w),
                    g: cx(semigroup_eval(&s, z, w, &cfg)?),
                })
            })
            .collect::<CliResult<_>>()?;
        if let Some((xs, ys)) = &grid {
            let d = double_poisson_smoothing(
                |z, w| semigroup_eval(&s, z, w, &cfg),
                xs,
                ys,
                eps,
                delta,
            )?;
            layers.push((Some(t), d));
        }
        steps.push(SemigroupStep {
            t,
            measure: full_plane_measure(&atoms)?,
            atoms: rows,
            marginal_atoms: Marginals {
                first: atom_json(&marginal_atom_evolution(mu, t)?),
                second: atom_json(&marginal_atom_evolution(nu, t)?),
            },
            values,
        });
    }
    let csv = grid.map(|_| smoothed_csv("semigroup", eps, delta, &layers));
    Ok(Artifacts {
        main: to_json(&SemigroupReport {
            command: "semigroup",
            steps,
        }),
        grid: csv,
    })
}

// ---------------------------------------------------------------------------
// Atoms, moments, density

fn load_inputs(r: &Run) -> CliResult<Vec<AnyMeasure>> {
    r.inputs
        .iter()
        .map(|p| input::load_any(p, r.renormalize))
        .collect()
}

fn single_time(r: &Run) -> CliResult<Option<f64>> {
    if r.t_range.is_some() {
        return Err(usage("this command takes a single --t"));
    }
    Ok(r.times()?.map(|ts| ts[0]))
}

#[derive(Serialize)]
#[serde(untagged)]
enum AtomRows {
    Line(Vec<AtomJson>),
    Plane(Vec<PlanarAtomJson>),
    Evolved(Vec<EvolvedAtomJson>),
    BiFree(Vec<BiAtomJson>),
}

#[derive(Serialize)]
#[serde(untagged)]
enum AnyMeasureJson {
    Line(Measure1DJson),
    Plane(PlanarMeasureJson),
}

#[derive(Serialize)]
struct AtomsReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    atoms: AtomRows,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<AnyMeasureJson>,
}

fn atoms(r: &Run) -> CliResult<Artifacts> {
    let t = single_time(r)?;
    let cfg = r.solver()?;
    let inputs = load_inputs(r)?;
    let (rows, measure) = match (inputs.as_slice(), t) {
        ([AnyMeasure::Line(mu)], t) => {
            let atoms = match t {
                Some(t) => marginal_atom_evolution(mu, t)?,
                None => mu.atoms().to_vec(),
            };
            (
                AtomRows::Line(atom_json(&atoms)),
                full_line_measure(&atoms)?.map(AnyMeasureJson::Line),
            )
        }
        ([AnyMeasure::Line(a), AnyMeasure::Line(b)], None) => {
            let atoms = free_atoms(a, b);
            (
                AtomRows::Line(atom_json(&atoms)),
                full_line_measure(&atoms)?.map(AnyMeasureJson::Line),
            )
        }
        ([AnyMeasure::Plane(eta)], None) => {
            let atoms = eta.atoms().to_vec();
            let rows = atoms
                .iter()
                .map(|a| PlanarAtomJson {
                    x: a.x,
                    y: a.y,
                    m: a.mass,
                })
                .collect();
            (
                AtomRows::Plane(rows),
                full_plane_measure(&atoms)?.map(AnyMeasureJson::Plane),
            )
        }
        ([AnyMeasure::Plane(eta)], Some(t)) => {
            let s = SemigroupState::new(eta.clone(), t)?;
            let (atoms, rows) = evolved_atoms(&s, &cfg)?;
            (
                AtomRows::Evolved(rows),
                full_plane_measure(&atoms)?.map(AnyMeasureJson::Plane),
            )
        }
        ([AnyMeasure::Plane(a), AnyMeasure::Plane(b)], None) => {
            let (atoms, rows) = bifree_atom_json(a, b, &cfg)?;
            (
                AtomRows::BiFree(rows),
                full_plane_measure(&atoms)?.map(AnyMeasureJson::Plane),
            )
        }
        ([_, _], Some(_)) => return Err(usage("--t takes a single input")),
        _ => return Err(usage("inputs must both be on the line or both be planar")),
    };
    Ok(Artifacts {
        main: to_json(&AtomsReport {
            command: "atoms",
            t,
            atoms: rows,
            measure,
        }),
        grid: None,
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum MomentValues {
    Line(Vec<f64>),
    Plane(Vec<Vec<f64>>),
}

#[derive(Serialize)]
struct MomentsReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    order: usize,
    moments: MomentValues,
}

fn moments(r: &Run) -> CliResult<Artifacts> {
    let t = single_time(r)?;
    let inputs = load_inputs(r)?;
    let (order, values) = match (inputs.as_slice(), t) {
        ([AnyMeasure::Line(mu)], t) => {
            let n = r.order.unwrap_or(LINE_ORDER);
            let m = mu.moments(n);
            let m = match t {
                Some(t) => free_power_moments(&m, t, n)?,
                None => m,
            };
            (n, MomentValues::Line(m))
        }
        ([AnyMeasure::Line(a), AnyMeasure::Line(b)], None) => {
            let n = r.order.unwrap_or(LINE_ORDER);
            (
                n,
                MomentValues::Line(free_convolve_moments(&a.moments(n), &b.moments(n), n)?),
            )
        }
        ([AnyMeasure::Plane(eta)], t) => {
            let n = r.order.unwrap_or(PLANE_ORDER);
            let m = eta.mixed_moments(n);
            let m = match t {
                Some(t) => semigroup_moments(&m, t, n)?,
                None => m,
            };
            (n, MomentValues::Plane(m.rows().to_vec()))
        }
        ([AnyMeasure::Plane(a), AnyMeasure::Plane(b)], None) => {
            let n = r.order.unwrap_or(PLANE_ORDER);
            let m = bifree_convolve_moments(&a.mixed_moments(n), &b.mixed_moments(n), n)?;
            (n, MomentValues::Plane(m.rows().to_vec()))
        }
        ([_, _], Some(_)) => return Err(usage("--t takes a single input")),
        _ => return Err(usage("inputs must both be on the line or both be planar")),
    };
    Ok(Artifacts {
        main: to_json(&MomentsReport {
            command: "moments",
            t,
            order,
            moments: values,
        }),
        grid: None,
    })
}

fn density(r: &Run) -> CliResult<Artifacts> {
    let t = single_time(r)?;
    let cfg = r.solver()?;
    let inputs = load_inputs(r)?;
    let spec = r.grid()?.ok_or_else(|| usage("density needs --grid"))?;
    let main = match (inputs.as_slice(), t) {
        ([AnyMeasure::Line(a), AnyMeasure::Line(b)], None) => {
            let xs = r.line_grid()?.unwrap_or(spec.x);
            let atoms = free_atoms(a, b);
            let ev = FreeConvEvaluator::new(a.clone(), b.clone(), cfg)?;
            continuous_density(
                |z| ev.eval(z),
                &xs,
                r.eps(LINE_EPS)?,
                &atoms,
                vec![("command", "density".into())],
            )?
        }
        ([AnyMeasure::Line(mu)], Some(t)) => {
            let xs = r.line_grid()?.unwrap_or(spec.x);
            let atoms = marginal_atom_evolution(mu, t)?;
            continuous_density(
                |z| semigroup_marginal_eval(mu, t, z, &cfg),
                &xs,
                r.eps(LINE_EPS)?,
                &atoms,
                vec![("command", "density".into()), ("t", fmt_f64(t))],
            )?
        }
        ([AnyMeasure::Plane(a), AnyMeasure::Plane(b)], None) => {
            let (xs, ys) = r.plane_grid()?.expect("grid present");
            let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
            let ev = BiFreeEvaluator::new(a.clone(), b.clone(), cfg)?;
            let d = density2d_smoothed(&ev, &xs, &ys, eps, delta)?;
            smoothed_csv("density", eps, delta, &[(None, d)])
        }
        ([AnyMeasure::Plane(eta)], Some(t)) => {
            let (xs, ys) = r.plane_grid()?.expect("grid present");
            let (eps, delta) = (r.eps(PLANE_EPS)?, r.delta);
            let s = SemigroupState::new(eta.clone(), t)?;
            let d = double_poisson_smoothing(
                |z, w| semigroup_eval(&s, z, w, &cfg),
                &xs,
                &ys,
                eps,
                delta,
            )?;
            smoothed_csv("density", eps, delta, &[(Some(t), d)])
        }
        ([_], None) => return Err(usage("density of a single input needs --t")),
        ([_, _], Some(_)) => return Err(usage("--t takes a single input")),
        _ => return Err(usage("inputs must both be on the line or both be planar")),
    };
    Ok(Artifacts { main, grid: None })
}
