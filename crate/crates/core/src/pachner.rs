//! Bistellar (Pachner) moves on metric triangulations, applied equivariantly on
//! the cover, and the determinant/form factors of 2→4 moves.
//!
//! A `k → d+2-k` move takes a cell `σ` of dimension `d+1-k` whose star is `k`
//! top simplices with link `∂τ`, and replaces `σ * ∂τ` by `∂σ * τ`. For `k = 1`
//! the cell `τ` is a new vertex.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{sort_parity, CellId, Lift, SimplicialPreComplex, Top};
use crate::developing::{CoverPlacement, MetricTriangulation, MAX_RESAMPLE, MIN_SHAPE_QUALITY};
use crate::error::{Error, Result};
use crate::jacobians::{assemble_q4, four_star, orthogonal_triple, squared_area_responses};
use crate::linalg::{full_pivot_select, log_det, rank_info, submatrix, LogDet};
use crate::metric::{deficit_angles, shape_quality, signed_volume, sq_from_points, triangle_area};
use crate::torsion::compute_invariant;

/// Curvature bound that must hold after every move.
pub const POST_MOVE_CURVATURE_TOL: f64 = 1e-9;
/// Shrink factor toward the barycenter for new vertices.
pub const NEW_VERTEX_SHRINK: f64 = 0.8;

/// A cluster matching the before-pattern of a move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub cell: CellId,
    /// Canonical labels of `σ`.
    pub sigma: Vec<Lift>,
    /// Top simplices of the star of `σ`.
    pub star: Vec<usize>,
    /// Labels of each star top, shifted into the frame of `σ`.
    pub star_labels: Vec<Vec<Lift>>,
    /// Vertices of `τ` in the frame of `σ` (empty when `τ` is a new vertex).
    pub link: Vec<Lift>,
}

#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub kind: String,
    pub state: MetricTriangulation,
    pub site: Site,
    /// New index of every old quotient vertex (`None` if removed).
    pub vertex_map: Vec<Option<usize>>,
    /// Added vertex and its base coordinates.
    pub new_vertex: Option<(usize, Vec<f64>)>,
    pub removed_tops: usize,
    pub created_tops: usize,
    pub max_abs_omega: f64,
    pub attempts: usize,
}

/// A move kind selectable by name.
pub trait PachnerMove: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    /// Number of top simplices replaced.
    fn before(&self) -> usize;
    fn after(&self) -> usize {
        self.dim() + 2 - self.before()
    }
    fn find_sites(&self, c: &SimplicialPreComplex) -> Vec<Site>;
    fn apply(
        &self,
        state: &MetricTriangulation,
        site: &Site,
        rng: &mut ChaCha8Rng,
    ) -> Result<MoveOutcome>;
}

/// The generic `k → d+2-k` flip.
#[derive(Clone, Debug)]
pub struct BistellarFlip {
    name: String,
    dim: usize,
    k: usize,
}

impl BistellarFlip {
    pub fn new(dim: usize, k: usize) -> Self {
        BistellarFlip {
            name: format!("{}-{}", k, dim + 2 - k),
            dim,
            k,
        }
    }
}

fn parity_in(order: &[Lift], reference: &[Lift]) -> i8 {
    let pos: Vec<usize> = order
        .iter()
        .map(|l| {
            reference
                .iter()
                .position(|r| r == l)
                .expect("label in reference")
        })
        .collect();
    sort_parity(&pos)
}

fn fresh_name(names: &[String]) -> String {
    let mut i = names.len() + 1;
    loop {
        let cand = format!("v{i}");
        if !names.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

impl PachnerMove for BistellarFlip {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn before(&self) -> usize {
        self.k
    }

    fn find_sites(&self, c: &SimplicialPreComplex) -> Vec<Site> {
        if c.dim() != self.dim {
            return Vec::new();
        }
        let sdim = self.dim + 1 - self.k;
        let group = c.group();
        let mut sites = Vec::new();
        for index in 0..c.num_cells(sdim) {
            let cell = CellId::new(sdim, index);
            let inc = c.incidences(cell);
            if inc.len() != self.k {
                continue;
            }
            let mut star: Vec<usize> = inc.iter().map(|i| i.top).collect();
            star.sort();
            star.dedup();
            if star.len() != self.k {
                continue;
            }
            let sigma = c.cell_lifts(cell).to_vec();
            let star_labels: Vec<Vec<Lift>> = inc
                .iter()
                .map(|i| group.shift_all(&c.tops()[i.top].lifts, c.face_ref(i.top, i.mask).shift))
                .collect();
            let mut link: Vec<Lift> = Vec::new();
            for ls in &star_labels {
                for l in ls {
                    if !sigma.contains(l) && !link.contains(l) {
                        link.push(*l);
                    }
                }
            }
            link.sort();
            if self.k == 1 {
                if !link.is_empty() {
                    continue;
                }
            } else {
                if link.len() != self.k {
                    continue;
                }
                let mut missing: Vec<Lift> = star_labels
                    .iter()
                    .filter_map(|ls| link.iter().find(|l| !ls.contains(l)).copied())
                    .collect();
                missing.sort();
                missing.dedup();
                if missing.len() != self.k {
                    continue;
                }
            }
            let star = inc.iter().map(|i| i.top).collect();
            sites.push(Site {
                cell,
                sigma,
                star,
                star_labels,
                link,
            });
        }
        sites
    }

    fn apply(
        &self,
        state: &MetricTriangulation,
        site: &Site,
        rng: &mut ChaCha8Rng,
    ) -> Result<MoveOutcome> {
        let c = &state.complex;
        let group = c.group();
        let n = self.dim + 1;
        if self.k >= 2 {
            if c.find_cell(&site.link).is_some() {
                return Err(Error::DegenerateSite(format!(
                    "cell {} already exists",
                    c.format_lifts(&site.link)
                )));
            }
            if group.canonical(&site.link).stabilizer != 1 {
                return Err(Error::DegenerateSite(
                    "new cell is fixed by the deck group".into(),
                ));
            }
        }
        let adds_vertex = self.k == 1;
        let removes_vertex = self.k == n;
        let new_vertex = c.num_vertices();
        let tau: Vec<Lift> = if adds_vertex {
            vec![Lift::base(new_vertex)]
        } else {
            site.link.clone()
        };
        let delta: Vec<Lift> = site.sigma.iter().chain(tau.iter()).copied().collect();
        let ns = site.sigma.len();

        // consistent orientation of the star as part of ∂Δ
        let mut eps: Option<i8> = None;
        for (slot, labels) in site.star.iter().zip(&site.star_labels) {
            let missing_pos = if adds_vertex {
                ns
            } else {
                ns + tau
                    .iter()
                    .position(|l| !labels.contains(l))
                    .expect("star top misses a link vertex")
            };
            let reduced: Vec<Lift> = delta
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != missing_pos)
                .map(|(_, &l)| l)
                .collect();
            let sign = if missing_pos % 2 == 0 { 1 } else { -1 };
            let e = c.tops()[*slot].orientation * parity_in(labels, &reduced) * sign;
            match eps {
                None => eps = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::DegenerateSite(
                        "star is not coherently oriented".into(),
                    ))
                }
                _ => {}
            }
        }
        let eps = eps.expect("nonempty star");

        let mut tops: Vec<Top> = c
            .tops()
            .iter()
            .enumerate()
            .filter(|(t, _)| !site.star.contains(t))
            .map(|(_, t)| t.clone())
            .collect();
        for i in 0..ns {
            let labels: Vec<Lift> = delta
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &l)| l)
                .collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            tops.push(Top::new(labels, -eps * sign));
        }

        let mut names = c.vertex_names().to_vec();
        let mut vertex_map: Vec<Option<usize>> = (0..c.num_vertices()).map(Some).collect();
        let mut base = state.placement.base.clone();
        if adds_vertex {
            names.push(fresh_name(&names));
            base.push(DVector::zeros(self.dim));
        }
        if removes_vertex {
            let v = site.sigma[0].vertex;
            names.remove(v);
            base.remove(v);
            vertex_map[v] = None;
            for (old, slot) in vertex_map.iter_mut().enumerate() {
                if old > v {
                    *slot = Some(old - 1);
                }
            }
            for t in tops.iter_mut() {
                for l in t.lifts.iter_mut() {
                    if l.vertex == v {
                        return Err(Error::DegenerateSite("removed vertex still in use".into()));
                    }
                    if l.vertex > v {
                        l.vertex -= 1;
                    }
                }
            }
        }
        let created = ns;
        let complex = SimplicialPreComplex::build_with_group(self.dim, group, names, tops)
            .map_err(|e| Error::DegenerateSite(e.to_string()))?;

        let mut placement = CoverPlacement {
            rep: state.placement.rep.clone(),
            deck: state.placement.deck.clone(),
            base,
        };
        let mut attempts = 1;
        let metric = if adds_vertex {
            let corners: Vec<DVector<f64>> = site
                .sigma
                .iter()
                .map(|&l| state.placement.coords(l))
                .collect();
            let bary =
                corners.iter().fold(DVector::zeros(self.dim), |a, x| a + x) / corners.len() as f64;
            let mut found = None;
            for attempt in 1..=MAX_RESAMPLE {
                let w: Vec<f64> = (0..corners.len())
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let total: f64 = w.iter().sum();
                let point = corners
                    .iter()
                    .zip(&w)
                    .fold(DVector::zeros(self.dim), |a, (x, wi)| a + x * (wi / total));
                placement.base[new_vertex] = &bary + (point - &bary) * NEW_VERTEX_SHRINK;
                if created_quality(&placement, &delta, ns) < MIN_SHAPE_QUALITY {
                    continue;
                }
                match placement.metric(&complex) {
                    Ok(m) => {
                        found = Some(m);
                        attempts = attempt;
                        break;
                    }
                    Err(Error::Degenerate(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            found.ok_or(Error::ResampleExhausted(MAX_RESAMPLE))?
        } else {
            let q = created_quality(&placement, &delta, ns);
            if q < MIN_SHAPE_QUALITY {
                return Err(Error::DegenerateSite(format!(
                    "new simplex too thin (shape quality {q:e})"
                )));
            }
            placement.metric(&complex).map_err(|e| match e {
                Error::Degenerate(s) => Error::DegenerateSite(s),
                e => e,
            })?
        };
        let max_abs_omega = deficit_angles(&complex, &metric)?.max_abs();
        if max_abs_omega > POST_MOVE_CURVATURE_TOL {
            return Err(Error::CurvedInput {
                max_abs: max_abs_omega,
            });
        }
        let new_vertex_record = if adds_vertex {
            Some((
                new_vertex,
                placement.base[new_vertex].iter().copied().collect(),
            ))
        } else {
            None
        };
        Ok(MoveOutcome {
            kind: self.name.clone(),
            state: MetricTriangulation {
                complex,
                placement,
                metric,
            },
            site: site.clone(),
            vertex_map,
            new_vertex: new_vertex_record,
            removed_tops: self.k,
            created_tops: created,
            max_abs_omega,
            attempts,
        })
    }
}

/// Worst shape quality of the simplices `delta` minus `delta[i]`, `i < ns`.
fn created_quality(p: &CoverPlacement, delta: &[Lift], ns: usize) -> f64 {
    (0..ns)
        .map(|i| {
            let pts: Vec<DVector<f64>> = delta
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &l)| p.coords(l))
                .collect();
            shape_quality(&sq_from_points(&pts))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Move kinds registered by name.
pub struct MoveRegistry {
    moves: BTreeMap<String, Box<dyn PachnerMove>>,
}

impl MoveRegistry {
    pub fn empty() -> Self {
        MoveRegistry {
            moves: BTreeMap::new(),
        }
    }

    /// 3D: 2-3, 3-2, 1-4, 4-1; 4D: 2-4, 4-2, 3-3.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for (d, k) in [(3, 2), (3, 3), (3, 1), (3, 4), (4, 2), (4, 4), (4, 3)] {
            r.register(Box::new(BistellarFlip::new(d, k)));
        }
        r
    }

    pub fn register(&mut self, m: Box<dyn PachnerMove>) {
        self.moves.insert(m.name().to_string(), m);
    }

    pub fn get(&self, name: &str) -> Result<&dyn PachnerMove> {
        self.moves
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::BadParams(format!("unknown move kind {name:?}")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.moves.keys().map(String::as_str).collect()
    }
}

/// Sites of `mv` that pass the combinatorial admissibility test.
pub fn admissible_sites(mv: &dyn PachnerMove, c: &SimplicialPreComplex) -> Vec<Site> {
    mv.find_sites(c)
        .into_iter()
        .filter(|s| s.link.is_empty() || c.find_cell(&s.link).is_none())
        .collect()
}

/// Applies `mv` at a random admissible site, trying other sites on failure.
pub fn apply_random(
    mv: &dyn PachnerMove,
    state: &MetricTriangulation,
    rng: &mut ChaCha8Rng,
) -> Result<MoveOutcome> {
    let mut sites = admissible_sites(mv, &state.complex);
    if sites.is_empty() {
        return Err(Error::DegenerateSite(format!(
            "no admissible {} site",
            mv.name()
        )));
    }
    let mut last = None;
    while !sites.is_empty() {
        let i = rng.random_range(0..sites.len());
        let site = sites.swap_remove(i);
        match mv.apply(state, &site, rng) {
            Ok(o) => return Ok(o),
            Err(e @ (Error::DegenerateSite(_) | Error::ResampleExhausted(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Site of `mv` whose `σ` has the given labels.
pub fn site_at(mv: &dyn PachnerMove, c: &SimplicialPreComplex, sigma: &[Lift]) -> Result<Site> {
    let id = c
        .find_cell(sigma)
        .ok_or_else(|| Error::DegenerateSite(format!("no cell {}", c.format_lifts(sigma))))?;
    mv.find_sites(c)
        .into_iter()
        .find(|s| s.cell == id)
        .ok_or_else(|| {
            Error::DegenerateSite(format!("{} is not a {} site", c.format_cell(id), mv.name()))
        })
}

/// Stellar subdivision of one top simplex of a 4D complex (a 1→5 move, used
/// only to build complexes that admit 2↔4 and 3→3 moves).
pub fn stellar_subdivision(
    state: &MetricTriangulation,
    top: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MoveOutcome> {
    let mv = BistellarFlip::new(state.complex.dim(), 1);
    let full = (1u32 << (state.complex.dim() + 1)) - 1;
    let cell = state.complex.top_face(top, full);
    let site = mv
        .find_sites(&state.complex)
        .into_iter()
        .find(|s| s.cell == cell)
        .expect("every top simplex is a site");
    mv.apply(state, &site, rng)
}

/// Multiplicative factors of a 2→4 move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub new_edge: String,
    /// Face playing the role of `ABF`.
    pub face: String,
    pub rows_d: Vec<String>,
    pub cols_c: Vec<String>,
    pub det_before: LogDet,
    pub det_after: LogDet,
    /// `det B_after / det B_before`.
    pub measured_ratio: f64,
    /// Analytic `dω_ABF/dL_AB` after the move.
    pub derivative: f64,
    /// Closed form `S_ABF/24 · V_Â V_B̂ / (V_Ĉ V_D̂ V_Ê)`.
    pub predicted: f64,
    pub ratio_rel_err: f64,
    pub closed_form_rel_err: f64,
    pub rank_before: usize,
    pub rank_after: usize,
    pub form_factor: f64,
    pub form_factor_predicted: f64,
    pub form_factor_rel_err: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// `3 |det J| / |V_F̂|` for the new edge AB with link `C, D, E, F`, where `J` is
/// the d(S²) block at the three faces whose apex differs from `link[omit]`,
/// together with the predicted `72 L_AB^{5/2}`.
pub fn deviation_form_factor(
    c: &SimplicialPreComplex,
    p: &CoverPlacement,
    edge: usize,
    omit: usize,
) -> Result<(f64, f64)> {
    let s = four_star(c, edge)?;
    let a = p.coords(s.a);
    let b = p.coords(s.b);
    let apexes: Vec<DVector<f64>> = (0..4)
        .filter(|&k| k != omit)
        .map(|k| p.coords(s.link[k]))
        .collect();
    let triple = orthogonal_triple(&(&b - &a));
    let j = squared_area_responses(&a, &b, &apexes, &triple)?;
    let mut simplex = vec![a.clone(), b.clone()];
    simplex.extend(apexes);
    let v = signed_volume(&simplex).abs();
    let l = (&b - &a).norm_squared();
    Ok((3.0 * j.determinant().abs() / v, 72.0 * l.powf(2.5)))
}

/// Factors of the 2→4 move `before → outcome`.
pub fn two_four_factors(
    before: &MetricTriangulation,
    outcome: &MoveOutcome,
) -> Result<FactorReport> {
    let c0 = &before.complex;
    let c1 = &outcome.state.complex;
    if c0.dim() != 4 || outcome.site.link.len() != 2 {
        return Err(Error::BadParams(
            "factor report applies to 2-4 moves".into(),
        ));
    }
    let q0 = assemble_q4(c0, &before.metric)?;
    let q1 = assemble_q4(c1, &outcome.state.metric)?;
    let r0 = rank_info(&q0).rank;
    let r1 = rank_info(&q1).rank;
    let (rows, cols) = full_pivot_select::<ChaCha8Rng>(&q0, r0, None);
    let det_before = log_det(&submatrix(&q0, &rows, &cols));

    let map = |k: usize, i: usize| -> usize {
        c1.find_cell(c0.cell_lifts(CellId::new(k, i)))
            .expect("old cell survives a 2-4 move")
            .index
    };
    let (a, b) = (outcome.site.link[0], outcome.site.link[1]);
    let sig = &outcome.site.sigma;
    let f = sig[3];
    let ab = c1.find_cell(&[a, b]).expect("new edge").index;
    let abf = c1.find_cell(&[a, b, f]).expect("new face").index;
    let mut rows1: Vec<usize> = rows.iter().map(|&i| map(2, i)).collect();
    let mut cols1: Vec<usize> = cols.iter().map(|&i| map(1, i)).collect();
    rows1.push(abf);
    cols1.push(ab);
    let det_after = log_det(&submatrix(&q1, &rows1, &cols1));
    let measured_ratio = det_after.sign as f64
        * det_before.sign as f64
        * (det_after.log_abs - det_before.log_abs).exp();
    let derivative = q1[(abf, ab)];

    let p = &outcome.state.placement;
    let pts: BTreeMap<Lift, DVector<f64>> = [a, b, sig[0], sig[1], sig[2], sig[3]]
        .iter()
        .map(|&l| (l, p.coords(l)))
        .collect();
    let hat = |x: Lift| {
        let rest: Vec<DVector<f64>> = pts
            .iter()
            .filter(|(l, _)| **l != x)
            .map(|(_, v)| v.clone())
            .collect();
        signed_volume(&rest).abs()
    };
    let predicted = triangle_area(&pts[&a], &pts[&b], &pts[&f]) / 24.0 * hat(a) * hat(b)
        / (hat(sig[0]) * hat(sig[1]) * hat(sig[2]));
    let (form_factor, form_factor_predicted) = deviation_form_factor(c1, p, ab, 3)?;
    Ok(FactorReport {
        new_edge: c1.format_cell(CellId::new(1, ab)),
        face: c1.format_cell(CellId::new(2, abf)),
        rows_d: rows1
            .iter()
            .map(|&i| c1.format_cell(CellId::new(2, i)))
            .collect(),
        cols_c: cols1
            .iter()
            .map(|&i| c1.format_cell(CellId::new(1, i)))
            .collect(),
        det_before,
        det_after,
        measured_ratio,
        derivative,
        predicted,
        ratio_rel_err: rel(measured_ratio.abs(), derivative.abs()),
        closed_form_rel_err: rel(derivative.abs(), predicted),
        rank_before: r0,
        rank_after: r1,
        form_factor,
        form_factor_predicted,
        form_factor_rel_err: rel(form_factor, form_factor_predicted),
    })
}

/// Invariant values along a sequence of random moves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTrace {
    pub kinds: Vec<String>,
    pub values: Vec<f64>,
    pub applied: Vec<String>,
    pub skipped: usize,
    pub max_abs_omega: f64,
}

impl ExperimentTrace {
    /// `(max - min) / max` over the recorded values.
    pub fn spread(&self) -> f64 {
        let hi = self.values.iter().copied().fold(f64::MIN, f64::max);
        let lo = self.values.iter().copied().fold(f64::MAX, f64::min);
        if self.values.is_empty() {
            0.0
        } else {
            (hi - lo) / hi.abs()
        }
    }
}

/// Applies `n` random admissible moves drawn from `kinds`, recomputing the
/// 3D invariant after each.
pub fn move_experiment(
    state: &MetricTriangulation,
    registry: &MoveRegistry,
    kinds: &[String],
    n: usize,
    seed: u64,
) -> Result<(ExperimentTrace, MetricTriangulation)> {
    let moves: Vec<&dyn PachnerMove> = kinds
        .iter()
        .map(|k| registry.get(k))
        .collect::<Result<_>>()?;
    if moves.iter().any(|m| m.dim() != state.complex.dim()) {
        return Err(Error::BadParams(
            "move dimension does not match the complex".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = state.clone();
    let mut trace = ExperimentTrace {
        kinds: kinds.to_vec(),
        values: vec![compute_invariant(&cur.complex, &cur.metric, &cur.placement, None)?.invariant],
        applied: Vec::new(),
        skipped: 0,
        max_abs_omega: cur.max_abs_omega()?,
    };
    let budget = 50 * n.max(1);
    let mut draws = 0;
    while trace.applied.len() < n {
        draws += 1;
        if draws > budget {
            return Err(Error::DegenerateSite(format!(
                "only {} of {n} moves admissible after {budget} draws",
                trace.applied.len()
            )));
        }
        let mv = moves[rng.random_range(0..moves.len())];
        let outcome = match apply_random(mv, &cur, &mut rng) {
            Ok(o) => o,
            Err(Error::DegenerateSite(_) | Error::ResampleExhausted(_)) => {
                trace.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        cur = outcome.state;
        let report = compute_invariant(&cur.complex, &cur.metric, &cur.placement, None)?;
        trace.max_abs_omega = trace.max_abs_omega.max(outcome.max_abs_omega);
        trace.values.push(report.invariant);
        trace.applied.push(mv.name().to_string());
    }
    Ok((trace, cur))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_names_and_sizes() {
        let m = BistellarFlip::new(4, 2);
        assert_eq!(m.name(), "2-4");
        assert_eq!(m.after(), 4);
        assert_eq!(BistellarFlip::new(3, 1).name(), "1-4");
    }

    #[test]
    fn fresh_names_skip_existing_ones() {
        let names: Vec<String> = ["a", "v3", "b"].map(String::from).to_vec();
        assert_eq!(fresh_name(&names), "v4");
        let names: Vec<String> = ["a", "b"].map(String::from).to_vec();
        assert_eq!(fresh_name(&names), "v3");
    }

    #[test]
    fn parity_relative_to_reference() {
        let r = [Lift::base(0), Lift::base(1), Lift::base(2)];
        assert_eq!(parity_in(&[r[1], r[0], r[2]], &r), -1);
        assert_eq!(parity_in(&[r[1], r[2], r[0]], &r), 1);
    }
}
