use std::fmt;
use std::io::Read;
use std::path::Path;

use acyclic_core::complex::{Lift, SimplicialPreComplex};
use acyclic_core::developing::{gauge_basis, MetricTriangulation};
use acyclic_core::format::{fmt17, TriangulationFile};
use acyclic_core::jacobians::{
    assemble_a3, assemble_b3, assemble_d4, assemble_q4, asymmetry, conjugate_omega_map,
    dependence_report, det_j_identity, four_star, jacobian_set, normalized_product, DeviationBasis,
    LabeledMatrix,
};
use acyclic_core::linalg::rank_info;
use acyclic_core::pachner::{
    apply_random, move_experiment, site_at, two_four_factors, FactorReport, MoveRegistry,
};
use acyclic_core::report::{to_json, SCHEMA};
use acyclic_core::torsion::{compute_invariant, edge_labels, TorsionReport};
use acyclic_core::zoo::{GeneratorRegistry, GeneratorSpec};
use acyclic_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CheckArgs, ExperimentArgs, GenArgs, InvariantArgs, JacobianArgs, MoveArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String, std::io::Error),
}

impl CliError {
    /// 2 for unreadable input and bad parameters, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::Core(Error::Parse { .. } | Error::BadParams(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub struct Output {
    pub stdout: String,
    /// `false` turns into exit code 1.
    pub ok: bool,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, ok: true }
    }
}

type CmdResult = Result<Output, CliError>;

fn read_input(path: &Path) -> Result<String, CliError> {
    let name = path.display().to_string();
    if name == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(name, e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(name, e))
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

struct Loaded {
    state: MetricTriangulation,
    lift_residual: f64,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let file = TriangulationFile::parse(&read_input(path)?)?;
    let complex = file.complex()?;
    let (placement, lift_residual) = file
        .placement()?
        .ok_or_else(|| Error::BadParams("file has no `lift` records".into()))?;
    let metric = file.metric(&complex, &placement)?;
    Ok(Loaded {
        state: MetricTriangulation {
            complex,
            placement,
            metric,
        },
        lift_residual,
    })
}

fn emit(state: &MetricTriangulation) -> Result<String, CliError> {
    Ok(TriangulationFile::from_parts(&state.complex, Some(&state.placement))?.emit())
}

#[derive(Serialize)]
struct GenReport {
    schema: u32,
    spec: GeneratorSpec,
    f_vector: Vec<usize>,
    experimental: bool,
    file: String,
}

pub fn gen(a: &GenArgs) -> CmdResult {
    let spec = GeneratorSpec {
        kind: a.kind.clone(),
        p: a.p,
        q: a.q,
        k: a.k,
        alpha: a.alpha,
        a: a.a,
        subdivisions: a.subdivisions,
        seed: a.seed,
    };
    let g = GeneratorRegistry::standard()
        .get(&a.kind)?
        .generate(&spec)?;
    if g.experimental {
        log::warn!("{}: gauge basis is experimental", a.kind);
    }
    let file = emit(&g.state)?;
    if a.json {
        let r = GenReport {
            schema: SCHEMA,
            spec,
            f_vector: g.state.complex.f_vector(),
            experimental: g.experimental,
            file,
        };
        Ok(Output::ok(to_json(&r) + "\n"))
    } else {
        Ok(Output::ok(file))
    }
}

#[derive(Serialize, Default)]
struct CheckReport {
    schema: u32,
    dim: usize,
    f_vector: Vec<usize>,
    tol: f64,
    lift_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_omega: Option<f64>,
    /// `|AB| / (|A| |B|)` in 3D.
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_product: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymmetry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gauge_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    experimental_gauge: Option<bool>,
    /// `|Om D| / (|Om| |D|)` in 4D.
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_area_product: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_omega: Option<usize>,
    /// Worst relative residual of `|det J| = 24 |V| L^{5/2}` over top simplices.
    det_j_residual: Option<f64>,
    four_surrounded_edges: Option<usize>,
    max_annihilation: Option<f64>,
    min_response_rank: Option<usize>,
    max_column_ratio_spread: Option<f64>,
    violations: Vec<String>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn check3(s: &MetricTriangulation, r: &mut CheckReport) -> acyclic_core::Result<()> {
    let (c, m, p) = (&s.complex, &s.metric, &s.placement);
    let a = assemble_a3(c, m)?;
    r.asymmetry = Some(asymmetry(&a));
    let g = gauge_basis(p, &p.rep)?;
    let b = assemble_b3(c, p, &g)?;
    let (ra, rb) = (rank_info(&a).rank, rank_info(&b).rank);
    r.chain_product = Some(normalized_product(&a, &b));
    r.rank_a = Some(ra);
    r.rank_b = Some(rb);
    r.gauge_size = Some(g.len());
    r.exact = Some(rb == g.len() && ra + rb == c.num_edges());
    r.experimental_gauge = Some(g.experimental());
    Ok(())
}

fn check4(s: &MetricTriangulation, r: &mut CheckReport) -> acyclic_core::Result<()> {
    let (c, m, p) = (&s.complex, &s.metric, &s.placement);
    let q = assemble_q4(c, m)?;
    let basis = DeviationBasis::new(c, p)?;
    let d = assemble_d4(c, p, &basis)?;
    let om = conjugate_omega_map(&q);
    r.omega_area_product = Some(normalized_product(&om, &d));
    r.rank_omega = Some(rank_info(&om).rank);
    let mut det_j = 0.0f64;
    for t in 0..c.num_tops() {
        let (lhs, rhs) = det_j_identity(&p.top_points(c, t))?;
        det_j = det_j.max(rel(lhs, rhs));
    }
    r.det_j_residual = Some(det_j);
    let (mut n, mut ann, mut rank, mut spread) = (0, 0.0f64, usize::MAX, 0.0f64);
    for e in 0..c.num_edges() {
        if four_star(c, e).is_err() {
            continue;
        }
        let dr = dependence_report(c, m, p, &q, e)?;
        n += 1;
        ann = ann.max(dr.annihilation);
        rank = rank.min(dr.response_rank);
        spread = spread.max(dr.column_ratio_spread);
    }
    r.four_surrounded_edges = Some(n);
    if n > 0 {
        r.max_annihilation = Some(ann);
        r.min_response_rank = Some(rank);
        r.max_column_ratio_spread = Some(spread);
    }
    Ok(())
}

pub fn check(a: &CheckArgs) -> CmdResult {
    let loaded = load(&a.file)?;
    let s = &loaded.state;
    let mut r = CheckReport {
        schema: SCHEMA,
        dim: s.complex.dim(),
        f_vector: s.complex.f_vector(),
        tol: a.tol,
        lift_residual: loaded.lift_residual,
        ..CheckReport::default()
    };
    match s.max_abs_omega() {
        Ok(w) => r.max_abs_omega = Some(w),
        Err(e) => r.violations.push(format!("curvature: {e}")),
    }
    let res = if r.dim == 3 {
        check3(s, &mut r)
    } else {
        check4(s, &mut r)
    };
    if let Err(e) = res {
        r.violations.push(format!("jacobians: {e}"));
    }
    let scale = s.placement.diameter().max(1.0);
    let mut gate = |name: &str, v: Option<f64>, tol: f64| {
        if let Some(v) = v {
            if v.is_nan() || v > tol {
                r.violations.push(format!("{name} = {v:e} exceeds {tol:e}"));
            }
        }
    };
    gate("lift_residual", Some(loaded.lift_residual), a.tol * scale);
    gate("max_abs_omega", r.max_abs_omega, a.tol);
    gate("chain_product", r.chain_product, a.tol);
    gate("asymmetry", r.asymmetry, a.tol);
    gate("omega_area_product", r.omega_area_product, a.tol);
    gate("det_j_residual", r.det_j_residual, a.tol);
    gate("max_annihilation", r.max_annihilation, a.tol);
    gate("max_column_ratio_spread", r.max_column_ratio_spread, a.tol);
    if r.exact == Some(false) {
        r.violations
            .push("rank A + rank B differs from the edge count".into());
    }
    if matches!(r.min_response_rank, Some(k) if k != 3) {
        r.violations
            .push("area response block has rank below 3".into());
    }
    let ok = r.violations.is_empty();
    Ok(Output {
        stdout: to_json(&r) + "\n",
        ok,
    })
}

#[derive(Serialize)]
struct InvariantReport {
    schema: u32,
    c_labels: Vec<String>,
    c_bar_labels: Vec<String>,
    pivot_seed: Option<u64>,
    torsion: TorsionReport,
}

pub fn invariant(a: &InvariantArgs) -> CmdResult {
    let s = load(&a.file)?.state;
    if s.complex.dim() != 3 {
        return Err(Error::BadParams("invariant needs a 3-dimensional file".into()).into());
    }
    let t = compute_invariant(&s.complex, &s.metric, &s.placement, a.pivot_seed)?;
    if t.experimental_gauge {
        log::warn!("trivial representation: gauge basis is experimental");
    }
    let r = InvariantReport {
        schema: SCHEMA,
        c_labels: edge_labels(&s.complex, &t.c),
        c_bar_labels: edge_labels(&s.complex, &t.c_bar),
        pivot_seed: a.pivot_seed,
        torsion: t,
    };
    Ok(Output::ok(to_json(&r) + "\n"))
}

/// Parses `a,b@1,c` into lifts of `c`'s vertices.
fn parse_site(c: &SimplicialPreComplex, text: &str) -> acyclic_core::Result<Vec<Lift>> {
    text.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (name, copy) = match t.split_once('@') {
                Some((n, k)) => (
                    n,
                    k.parse::<i64>()
                        .map_err(|_| Error::BadParams(format!("bad copy index in {t:?}")))?,
                ),
                None => (t, 0),
            };
            let v = c
                .vertex_names()
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::BadParams(format!("unknown vertex {name:?}")))?;
            Ok(Lift::new(v, copy))
        })
        .collect()
}

#[derive(Serialize)]
struct MoveReport {
    schema: u32,
    kind: String,
    seed: u64,
    sigma: String,
    tau: String,
    new_vertex: Option<String>,
    removed_tops: usize,
    created_tops: usize,
    attempts: usize,
    max_abs_omega: f64,
    f_vector_before: Vec<usize>,
    f_vector_after: Vec<usize>,
    factors: Option<FactorReport>,
}

pub fn apply_move(a: &MoveArgs) -> CmdResult {
    let s = load(&a.file)?.state;
    let reg = MoveRegistry::standard();
    let mv = reg.get(&a.kind)?;
    if mv.dim() != s.complex.dim() {
        return Err(Error::BadParams(format!(
            "{} applies to {}-dimensional complexes",
            a.kind,
            mv.dim()
        ))
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let o = match &a.site {
        Some(text) => {
            let sigma = parse_site(&s.complex, text)?;
            let site = site_at(mv, &s.complex, &sigma)?;
            mv.apply(&s, &site, &mut rng)?
        }
        None => apply_random(mv, &s, &mut rng)?,
    };
    let factors = if a.kind == "2-4" {
        Some(two_four_factors(&s, &o)?)
    } else {
        None
    };
    let c1 = &o.state.complex;
    let tau = if o.site.link.is_empty() {
        String::new()
    } else {
        c1.format_lifts(&o.site.link)
    };
    let r = MoveReport {
        schema: SCHEMA,
        kind: a.kind.clone(),
        seed: a.seed,
        sigma: s.complex.format_lifts(&o.site.sigma),
        tau,
        new_vertex: o
            .new_vertex
            .as_ref()
            .map(|(v, _)| c1.vertex_names()[*v].clone()),
        removed_tops: o.removed_tops,
        created_tops: o.created_tops,
        attempts: o.attempts,
        max_abs_omega: o.max_abs_omega,
        f_vector_before: s.complex.f_vector(),
        f_vector_after: c1.f_vector(),
        factors,
    };
    if let Some(path) = &a.out {
        write_output(path, &emit(&o.state)?)?;
    }
    Ok(Output::ok(to_json(&r) + "\n"))
}

#[derive(Serialize)]
struct ExperimentReport {
    schema: u32,
    seed: u64,
    kinds: Vec<String>,
    requested: usize,
    applied: Vec<String>,
    skipped: usize,
    values: Vec<f64>,
    spread: f64,
    max_abs_omega: f64,
    f_vector_after: Vec<usize>,
}

pub fn experiment(a: &ExperimentArgs) -> CmdResult {
    let s = load(&a.file)?.state;
    if s.complex.dim() != 3 {
        return Err(Error::BadParams("experiments track the 3D invariant".into()).into());
    }
    let (trace, fin) = move_experiment(&s, &MoveRegistry::standard(), &a.kinds, a.n, a.seed)?;
    if let Some(path) = &a.out {
        write_output(path, &emit(&fin)?)?;
    }
    let r = ExperimentReport {
        schema: SCHEMA,
        seed: a.seed,
        kinds: trace.kinds.clone(),
        requested: a.n,
        spread: trace.spread(),
        applied: trace.applied,
        skipped: trace.skipped,
        values: trace.values,
        max_abs_omega: trace.max_abs_omega,
        f_vector_after: fin.complex.f_vector(),
    };
    Ok(Output::ok(to_json(&r) + "\n"))
}

#[derive(Serialize)]
struct MatrixJson {
    name: String,
    rows: Vec<String>,
    cols: Vec<String>,
    data: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct JacobianReport {
    schema: u32,
    matrices: Vec<MatrixJson>,
}

fn named(s: &MetricTriangulation) -> acyclic_core::Result<Vec<(String, LabeledMatrix)>> {
    let c = &s.complex;
    let g = if c.dim() == 3 {
        Some(gauge_basis(&s.placement, &s.placement.rep)?)
    } else {
        None
    };
    let js = jacobian_set(c, &s.metric, &s.placement, g.as_ref())?;
    let mut out = Vec::new();
    for (name, m) in [("A", js.a), ("B", js.b), ("Q4", js.q4), ("D4", js.d4)] {
        if let Some(m) = m {
            out.push((name.to_string(), m));
        }
    }
    Ok(out)
}

pub fn jacobians(a: &JacobianArgs) -> CmdResult {
    let s = load(&a.file)?.state;
    let mats = named(&s)?;
    if a.json {
        let r = JacobianReport {
            schema: SCHEMA,
            matrices: mats
                .into_iter()
                .map(|(name, m)| MatrixJson {
                    name,
                    data: m
                        .data
                        .row_iter()
                        .map(|r| r.iter().copied().collect())
                        .collect(),
                    rows: m.rows,
                    cols: m.cols,
                })
                .collect(),
        };
        return Ok(Output::ok(to_json(&r) + "\n"));
    }
    let mut out = String::new();
    for (name, m) in mats {
        out += &format!("# {name} {}x{}\n", m.data.nrows(), m.data.ncols());
        out += &format!("\t{}\n", m.cols.join("\t"));
        for (i, row) in m.rows.iter().enumerate() {
            let vals: Vec<String> = m.data.row(i).iter().map(|v| fmt17(*v)).collect();
            out += &format!("{row}\t{}\n", vals.join("\t"));
        }
    }
    Ok(Output::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use acyclic_core::zoo::gen_lens;

    #[test]
    fn site_labels_accept_commas_and_copies() {
        let c = gen_lens(5, 1, 1, 0).unwrap().state.complex;
        let ls = parse_site(&c, "a@1, b").unwrap();
        assert_eq!(ls, vec![Lift::new(0, 1), Lift::new(1, 0)]);
        assert!(matches!(parse_site(&c, "z"), Err(Error::BadParams(_))));
        assert!(matches!(parse_site(&c, "a@x"), Err(Error::BadParams(_))));
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        let parse = CliError::Core(Error::Parse {
            line: 1,
            msg: "x".into(),
        });
        assert_eq!(parse.exit_code(), 2);
        assert_eq!(CliError::Core(Error::BadParams("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(Error::Singular("x".into())).exit_code(), 1);
        assert_eq!(
            CliError::Core(Error::DegenerateSite("x".into())).exit_code(),
            1
        );
    }
}
