//! Developing maps: equivariant placements of universal-cover vertices in flat
//! space, reconstruction of a placement from a flat metric, and the coordinate
//! differentials ("gauge basis") spanning the first term of the 3D sequence.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{local_pairs, DeckGroup, Incidence, Lift, SimplicialPreComplex};
use crate::error::{Error, Result};
use crate::linalg::{fit_isometry, Isometry};
use crate::metric::{
    deficit_angles, gram_from_sq, is_degenerate_sq, min_shape_quality, signed_volume,
    sq_from_points, MetricData,
};

/// Maximum attempts before a placement gives up on degenerate samples.
pub const MAX_RESAMPLE: usize = 100;
/// Samples whose thinnest top simplex has a smaller shape quality
/// (volume relative to a regular simplex of the same rms edge) are redrawn.
pub const MIN_SHAPE_QUALITY: f64 = 1e-2;
/// Curvature tolerance for flat metrics.
pub const CURVATURE_TOL: f64 = 1e-10;
/// Re-entry tolerance of the developing map at unit scale.
pub const MONODROMY_TOL: f64 = 1e-8;

/// Representation of the fundamental group in the isometries of flat space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Representation {
    Trivial {
        dim: usize,
    },
    /// Generator acts as rotation by `2 pi index / order` about the z-axis.
    SingleAxisCyclic {
        order: u32,
        index: u32,
    },
    /// Finite cyclic image with an arbitrary generator; coordinates gauge.
    MultiAxis {
        order: u32,
        generator: Isometry,
    },
    /// Screw motion about the z-axis: rotation by `alpha`, translation by `shift`.
    CyclicInfinite {
        alpha: f64,
        shift: f64,
    },
}

pub fn rotation_z(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

impl Representation {
    pub fn dim(&self) -> usize {
        match self {
            Representation::Trivial { dim } => *dim,
            Representation::MultiAxis { generator, .. } => generator.dim(),
            _ => 3,
        }
    }

    pub fn deck_group(&self) -> DeckGroup {
        match self {
            Representation::Trivial { .. } => DeckGroup::Trivial,
            Representation::SingleAxisCyclic { order, .. }
            | Representation::MultiAxis { order, .. } => {
                if *order == 1 {
                    DeckGroup::Trivial
                } else {
                    DeckGroup::Cyclic(*order)
                }
            }
            Representation::CyclicInfinite { .. } => DeckGroup::Infinite,
        }
    }

    /// Isometry assigned to the group generator.
    pub fn generator(&self) -> Isometry {
        match self {
            Representation::Trivial { dim } => Isometry::identity(*dim),
            Representation::SingleAxisCyclic { order, index } => Isometry {
                rotation: rotation_z(2.0 * PI * *index as f64 / *order as f64),
                translation: DVector::zeros(3),
            },
            Representation::MultiAxis { generator, .. } => generator.clone(),
            Representation::CyclicInfinite { alpha, shift } => Isometry {
                rotation: rotation_z(*alpha),
                translation: DVector::from_vec(vec![0.0, 0.0, *shift]),
            },
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self {
            Representation::Trivial { .. } => "trivial",
            Representation::SingleAxisCyclic { .. } => "single_axis_cyclic",
            Representation::MultiAxis { .. } => "multi_axis",
            Representation::CyclicInfinite { .. } => "cyclic_infinite",
        }
    }
}

/// Coordinates of the universal-cover vertex lifts.
///
/// Lift `(v, j)` sits at `deck^j (base[v])`, so equivariance holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPlacement {
    pub rep: Representation,
    pub deck: Isometry,
    pub base: Vec<DVector<f64>>,
}

impl CoverPlacement {
    pub fn new(rep: Representation, base: Vec<DVector<f64>>) -> Self {
        let deck = rep.generator();
        CoverPlacement { rep, deck, base }
    }

    pub fn dim(&self) -> usize {
        self.deck.dim()
    }

    pub fn coords(&self, l: Lift) -> DVector<f64> {
        if l.copy == 0 {
            self.base[l.vertex].clone()
        } else {
            self.deck.power(l.copy).apply(&self.base[l.vertex])
        }
    }

    pub fn top_points(&self, c: &SimplicialPreComplex, t: usize) -> Vec<DVector<f64>> {
        c.tops()[t].lifts.iter().map(|&l| self.coords(l)).collect()
    }

    /// Metric read off the lifts; signs are the image orientations.
    pub fn metric(&self, c: &SimplicialPreComplex) -> Result<MetricData> {
        let sq_lengths: Vec<f64> = (0..c.num_edges())
            .map(|e| {
                let ls = c.cell_lifts(crate::complex::CellId::new(1, e));
                (self.coords(ls[0]) - self.coords(ls[1])).norm_squared()
            })
            .collect();
        let mut signs = Vec::with_capacity(c.num_tops());
        for t in 0..c.num_tops() {
            let pts = self.top_points(c, t);
            if is_degenerate_sq(&sq_from_points(&pts)) {
                return Err(Error::Degenerate(format!("top simplex {t}")));
            }
            let v = signed_volume(&pts);
            signs.push(c.tops()[t].orientation * if v > 0.0 { 1 } else { -1 });
        }
        Ok(MetricData { sq_lengths, signs })
    }

    /// Explicit lift records: all copies for finite groups, a window for ℤ.
    pub fn lifts(&self, c: &SimplicialPreComplex) -> Vec<(Lift, DVector<f64>)> {
        let copies: Vec<i64> = match c.group() {
            DeckGroup::Trivial => vec![0],
            DeckGroup::Cyclic(p) => (0..p as i64).collect(),
            DeckGroup::Infinite => {
                let hi = c
                    .tops()
                    .iter()
                    .flat_map(|t| t.lifts.iter().map(|l| l.copy))
                    .max()
                    .unwrap_or(0);
                (0..=hi.max(1)).collect()
            }
        };
        let mut out = Vec::new();
        for v in 0..self.base.len() {
            for &j in &copies {
                let l = Lift::new(v, j);
                out.push((l, self.coords(l)));
            }
        }
        out
    }

    /// Max distance between given lift coordinates and the deck-action prediction.
    pub fn equivariance_residual(&self, lifts: &[(Lift, DVector<f64>)]) -> f64 {
        lifts
            .iter()
            .map(|(l, x)| (self.coords(*l) - x).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> CoverPlacement {
        let mut deck = self.deck.clone();
        deck.translation *= s;
        let rep = match &self.rep {
            Representation::CyclicInfinite { alpha, shift } => Representation::CyclicInfinite {
                alpha: *alpha,
                shift: shift * s,
            },
            r => r.clone(),
        };
        CoverPlacement {
            rep,
            deck,
            base: self.base.iter().map(|x| x * s).collect(),
        }
    }

    /// Largest distance between two base lifts.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for a in &self.base {
            for b in &self.base {
                d = d.max((a - b).norm());
            }
        }
        d
    }
}

/// Samples a generic equivariant placement with seeded coordinates in `[1, 2]^d`.
pub fn equivariant_placement(
    c: &SimplicialPreComplex,
    rep: &Representation,
    seed: u64,
) -> Result<(CoverPlacement, MetricData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rep.dim();
    let m = c.num_vertices();
    let mut sampler = |_attempt: usize| -> Vec<DVector<f64>> {
        (0..m)
            .map(|_| DVector::from_fn(d, |_, _| rng.random_range(1.0..2.0)))
            .collect()
    };
    let (p, metric, _) = equivariant_placement_with(c, rep, &mut sampler)?;
    Ok((p, metric))
}

/// Placement from an arbitrary sampler; returns the number of attempts used.
pub fn equivariant_placement_with(
    c: &SimplicialPreComplex,
    rep: &Representation,
    sampler: &mut dyn FnMut(usize) -> Vec<DVector<f64>>,
) -> Result<(CoverPlacement, MetricData, usize)> {
    if rep.dim() != c.dim() {
        return Err(Error::BadParams(format!(
            "representation acts on R^{} but complex has dimension {}",
            rep.dim(),
            c.dim()
        )));
    }
    if rep.deck_group() != c.group() {
        return Err(Error::BadParams(format!(
            "representation {} incompatible with deck group {:?}",
            rep.case_name(),
            c.group()
        )));
    }
    for attempt in 1..=MAX_RESAMPLE {
        let placement = CoverPlacement::new(rep.clone(), sampler(attempt));
        let metric = match placement.metric(c) {
            Ok(m) => m,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        if metric.sq_lengths.iter().any(|&l| l <= 1e-12) {
            continue;
        }
        if min_shape_quality(c, &metric) < MIN_SHAPE_QUALITY {
            log::debug!("placement attempt {attempt}: thin simplex, resampling");
            continue;
        }
        return Ok((placement, metric, attempt));
    }
    Err(Error::ResampleExhausted(MAX_RESAMPLE))
}

/// Result of developing a flat metric into Euclidean space.
#[derive(Clone, Debug)]
pub struct Developed {
    pub coords: BTreeMap<Lift, DVector<f64>>,
    /// Largest disagreement seen when a vertex was reached twice.
    pub max_reentry: f64,
    /// Deck transformation fitted between consecutive copies.
    pub deck: Option<Isometry>,
}

impl Developed {
    /// Base lifts (copy 0) as a placement with the fitted deck transformation.
    pub fn into_placement(self, rep: Representation, nverts: usize) -> CoverPlacement {
        let d = rep.dim();
        let deck = self.deck.clone().unwrap_or_else(|| Isometry::identity(d));
        let base = (0..nverts)
            .map(|v| {
                self.coords
                    .get(&Lift::base(v))
                    .cloned()
                    .unwrap_or_else(|| DVector::zeros(d))
            })
            .collect();
        CoverPlacement { rep, deck, base }
    }
}

fn embed_simplex(sq: &DMatrix<f64>, orientation: i8) -> Result<Vec<DVector<f64>>> {
    let d = sq.nrows() - 1;
    let g = gram_from_sq(sq);
    let chol = g.cholesky().ok_or(Error::NotRealizable)?;
    let l = chol.l();
    let mut pts = vec![DVector::zeros(d)];
    for a in 0..d {
        pts.push(DVector::from_fn(d, |r, _| l[(a, r)]));
    }
    if orientation < 0 {
        for p in pts.iter_mut() {
            p[d - 1] = -p[d - 1];
        }
    }
    Ok(pts)
}

/// Places the apex of a simplex over a placed facet, on the side giving the
/// requested orientation of the full ordered tuple.
fn place_apex(
    facet: &[(usize, DVector<f64>)],
    apex_pos: usize,
    sq: &DMatrix<f64>,
    orientation: i8,
) -> Result<DVector<f64>> {
    let d = facet.len();
    let (p0, x0) = &facet[0];
    let edges: Vec<DVector<f64>> = facet[1..].iter().map(|(_, x)| x - x0).collect();
    let k = edges.len();
    let g = DMatrix::from_fn(k, k, |a, b| edges[a].dot(&edges[b]));
    let rhs = DVector::from_fn(k, |a, _| {
        0.5 * (sq[(apex_pos, *p0)] + edges[a].norm_squared() - sq[(apex_pos, facet[a + 1].0)])
    });
    let coef = g.clone().lu().solve(&rhs).ok_or(Error::NotRealizable)?;
    let mut par = DVector::zeros(d);
    for a in 0..k {
        par += &edges[a] * coef[a];
    }
    let h2 = sq[(apex_pos, *p0)] - par.norm_squared();
    let scale = sq.iter().fold(0.0f64, |a, v| a.max(*v));
    if h2 < -1e-9 * scale {
        return Err(Error::NotRealizable);
    }
    // unit normal of the facet hyperplane
    let mut normal = DVector::zeros(d);
    for axis in 0..d {
        let mut v = DVector::zeros(d);
        v[axis] = 1.0;
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for e in &edges {
            let mut u = e.clone();
            for b in &basis {
                u -= b * b.dot(&u);
            }
            basis.push(u.normalize());
        }
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > normal.norm() {
            normal = v;
        }
    }
    let normal = normal.normalize();
    let h = h2.max(0.0).sqrt();
    for sign in [1.0, -1.0] {
        let apex = x0 + &par + &normal * (sign * h);
        let mut pts = vec![DVector::zeros(d); d + 1];
        for (pos, x) in facet {
            pts[*pos] = x.clone();
        }
        pts[apex_pos] = apex.clone();
        let v = signed_volume(&pts);
        if (v > 0.0) == (orientation > 0) {
            return Ok(apex);
        }
    }
    Err(Error::Degenerate("apex lies in facet hyperplane".into()))
}

/// Develops a flat metric from `base_top` by breadth-first propagation across
/// shared facets of the cover, checking agreement whenever a vertex is reached twice.
pub fn develop(c: &SimplicialPreComplex, m: &MetricData, base_top: usize) -> Result<Developed> {
    develop_with_tol(c, m, base_top, CURVATURE_TOL, MONODROMY_TOL)
}

pub fn develop_with_tol(
    c: &SimplicialPreComplex,
    m: &MetricData,
    base_top: usize,
    curvature_tol: f64,
    monodromy_tol: f64,
) -> Result<Developed> {
    let omega = deficit_angles(c, m)?;
    if omega.max_abs() > curvature_tol {
        return Err(Error::CurvedInput {
            max_abs: omega.max_abs(),
        });
    }
    let group = c.group();
    let n = c.dim() + 1;
    let full = (1u32 << n) - 1;
    let window: i64 = 3;
    let in_window = |labels: &[Lift]| match group {
        DeckGroup::Infinite => labels.iter().all(|l| l.copy.abs() <= window),
        _ => true,
    };
    let mean_l = m.sq_lengths.iter().sum::<f64>() / m.sq_lengths.len() as f64;
    let tol = monodromy_tol * mean_l.sqrt().max(1.0);

    let mut coords: BTreeMap<Lift, DVector<f64>> = BTreeMap::new();
    let mut seen: BTreeMap<(usize, i64), ()> = BTreeMap::new();
    let mut max_reentry = 0.0f64;
    let want = |t: usize| m.signs[t] * c.tops()[t].orientation;

    let base_pts = embed_simplex(&m.top_sq(c, base_top), want(base_top))?;
    for (l, x) in c.tops()[base_top].lifts.iter().zip(base_pts) {
        coords.insert(*l, x);
    }
    let mut queue = VecDeque::from([(base_top, 0i64)]);
    seen.insert((base_top, 0), ());
    while let Some((t, g)) = queue.pop_front() {
        for miss in 0..n {
            let fmask = full & !(1 << miss);
            let fref = c.face_ref(t, fmask);
            let pair = c.incidences(crate::complex::CellId::new(n - 2, fref.index));
            let here = Incidence {
                top: t,
                mask: fmask,
            };
            let other = if pair[0] == here { pair[1] } else { pair[0] };
            let oref = c.face_ref(other.top, other.mask);
            let g2 = group.normalize(g - fref.shift + oref.shift);
            if seen.contains_key(&(other.top, g2)) {
                continue;
            }
            let labels = group.shift_all(&c.tops()[other.top].lifts, g2);
            if !in_window(&labels) {
                continue;
            }
            let apex_pos = (full & !other.mask).trailing_zeros() as usize;
            let facet: Vec<(usize, DVector<f64>)> = (0..n)
                .filter(|&p| p != apex_pos)
                .map(|p| {
                    coords
                        .get(&labels[p])
                        .cloned()
                        .map(|x| (p, x))
                        .ok_or_else(|| Error::Unsupported("facet vertex not yet placed".into()))
                })
                .collect::<Result<_>>()?;
            let apex = place_apex(&facet, apex_pos, &m.top_sq(c, other.top), want(other.top))?;
            match coords.get(&labels[apex_pos]) {
                Some(prev) => {
                    let r = (prev - &apex).norm();
                    max_reentry = max_reentry.max(r);
                    if r > tol {
                        return Err(Error::Monodromy { residual: r });
                    }
                }
                None => {
                    coords.insert(labels[apex_pos], apex);
                }
            }
            seen.insert((other.top, g2), ());
            queue.push_back((other.top, g2));
        }
    }

    let deck = match group {
        DeckGroup::Trivial => None,
        _ => {
            let mut from = Vec::new();
            let mut to = Vec::new();
            for (l, x) in &coords {
                let next = Lift::new(l.vertex, group.normalize(l.copy + 1));
                if let Some(y) = coords.get(&next) {
                    from.push(x.clone());
                    to.push(y.clone());
                }
            }
            Some(fit_isometry(&from, &to))
        }
    };
    Ok(Developed {
        coords,
        max_reentry,
        deck,
    })
}

/// Develops the metric read off `p` and compares with `p` after a fitted
/// rigid motion; returns the max vertex deviation relative to the diameter.
pub fn develop_roundtrip(
    c: &SimplicialPreComplex,
    p: &CoverPlacement,
    m: &MetricData,
) -> Result<f64> {
    let dev = develop(c, m, 0)?;
    let (from, to): (Vec<_>, Vec<_>) = dev
        .coords
        .iter()
        .map(|(l, x)| (x.clone(), p.coords(*l)))
        .unzip();
    let fit = fit_isometry(&from, &to);
    let worst = from
        .iter()
        .zip(&to)
        .map(|(x, y)| (fit.apply(x) - y).norm())
        .fold(0.0, f64::max);
    let diam = to
        .iter()
        .flat_map(|a| to.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    Ok(worst / diam.max(f64::MIN_POSITIVE))
}

/// Rotation angle (in `[0, pi]`) of a 3D rotation matrix.
pub fn rotation_angle(r: &DMatrix<f64>) -> f64 {
    ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// What one coordinate differential varies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ParamKind {
    /// `rho_v d rho_v`
    Rho,
    /// `d(phi_v - phi_first)`
    PhiDiff,
    /// `d(z_v - z_first)`
    ZDiff,
    /// Euclidean coordinate of a vertex along a fixed direction.
    Coordinate { direction: Vec<f64> },
    /// Rotation angle of the screw generator.
    Alpha,
    /// Translation of the screw generator.
    Translation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeParam {
    pub vertex: Option<usize>,
    pub kind: ParamKind,
    /// Factor applied to the plain derivative (`1/rho` for `rho d rho`).
    pub scale: f64,
}

/// Ordered coordinate differentials spanning the first term of the 3D sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeBasis {
    pub case: String,
    pub params: Vec<GaugeParam>,
}

impl GaugeBasis {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn experimental(&self) -> bool {
        self.case == "trivial" || self.case == "cyclic_infinite"
    }
}

fn cylindrical(x: &DVector<f64>) -> (f64, f64, f64) {
    (x[0].hypot(x[1]), x[1].atan2(x[0]), x[2])
}

pub fn gauge_basis(p: &CoverPlacement, rep: &Representation) -> Result<GaugeBasis> {
    if p.dim() != 3 {
        return Err(Error::Unsupported(
            "gauge bases are defined for 3D placements".into(),
        ));
    }
    let m = p.base.len();
    let scale = p.diameter().max(1e-300);
    let mut params = Vec::new();
    let cyl_params = |params: &mut Vec<GaugeParam>| -> Result<()> {
        for v in 0..m {
            let (rho, _, _) = cylindrical(&p.base[v]);
            if rho <= 1e-9 * scale {
                return Err(Error::GaugeDegenerate(format!(
                    "vertex {v} lies on the axis"
                )));
            }
            params.push(GaugeParam {
                vertex: Some(v),
                kind: ParamKind::Rho,
                scale: 1.0 / rho,
            });
        }
        for kind in [ParamKind::PhiDiff, ParamKind::ZDiff] {
            for v in 1..m {
                params.push(GaugeParam {
                    vertex: Some(v),
                    kind: kind.clone(),
                    scale: 1.0,
                });
            }
        }
        Ok(())
    };
    match rep {
        Representation::SingleAxisCyclic { .. } => cyl_params(&mut params)?,
        Representation::CyclicInfinite { .. } => {
            cyl_params(&mut params)?;
            params.push(GaugeParam {
                vertex: None,
                kind: ParamKind::Alpha,
                scale: 1.0,
            });
            params.push(GaugeParam {
                vertex: None,
                kind: ParamKind::Translation,
                scale: 1.0,
            });
        }
        Representation::MultiAxis { .. } => {
            for v in 0..m {
                for axis in 0..3 {
                    let mut dir = vec![0.0; 3];
                    dir[axis] = 1.0;
                    params.push(GaugeParam {
                        vertex: Some(v),
                        kind: ParamKind::Coordinate { direction: dir },
                        scale: 1.0,
                    });
                }
            }
        }
        Representation::Trivial { .. } => {
            if m < 3 {
                return Err(Error::GaugeDegenerate("fewer than three vertices".into()));
            }
            let e1 = &p.base[1] - &p.base[0];
            if e1.norm() <= 1e-9 * scale {
                return Err(Error::GaugeDegenerate(
                    "first two gauge vertices coincide".into(),
                ));
            }
            let e1 = e1.normalize();
            let w = &p.base[2] - &p.base[0];
            let mut e2 = &w - &e1 * e1.dot(&w);
            if e2.norm() <= 1e-9 * scale {
                return Err(Error::GaugeDegenerate(
                    "gauge vertices are collinear".into(),
                ));
            }
            e2 = e2.normalize();
            let e3 = DVector::from_vec(vec![
                e1[1] * e2[2] - e1[2] * e2[1],
                e1[2] * e2[0] - e1[0] * e2[2],
                e1[0] * e2[1] - e1[1] * e2[0],
            ]);
            let frame = [e1, e2, e3];
            for v in 1..m {
                let free = if v == 1 {
                    1
                } else if v == 2 {
                    2
                } else {
                    3
                };
                for dir in frame.iter().take(free) {
                    params.push(GaugeParam {
                        vertex: Some(v),
                        kind: ParamKind::Coordinate {
                            direction: dir.iter().copied().collect(),
                        },
                        scale: 1.0,
                    });
                }
            }
        }
    }
    Ok(GaugeBasis {
        case: rep.case_name().to_string(),
        params,
    })
}

fn axis_generator(x: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![-x[1], x[0], 0.0])
}

impl CoverPlacement {
    /// Derivative of the coordinates of `l` with respect to a gauge parameter
    /// (before the parameter's scale factor).
    pub fn lift_derivative(&self, param: &GaugeParam, l: Lift) -> DVector<f64> {
        let d = self.dim();
        match (&param.kind, param.vertex) {
            (ParamKind::Alpha, _) => {
                // d/d alpha of R(j alpha) x + (0, 0, j a)
                let x = self.coords(l);
                let t = &self.deck.power(l.copy).translation;
                axis_generator(&(x - t)) * l.copy as f64
            }
            (ParamKind::Translation, _) => DVector::from_vec(vec![0.0, 0.0, l.copy as f64]),
            (kind, Some(v)) => {
                if v != l.vertex {
                    return DVector::zeros(d);
                }
                let x = &self.base[v];
                let base_dir = match kind {
                    ParamKind::Rho => {
                        let (_, phi, _) = cylindrical(x);
                        DVector::from_vec(vec![phi.cos(), phi.sin(), 0.0])
                    }
                    ParamKind::PhiDiff => axis_generator(x),
                    ParamKind::ZDiff => DVector::from_vec(vec![0.0, 0.0, 1.0]),
                    ParamKind::Coordinate { direction } => DVector::from_row_slice(direction),
                    _ => unreachable!(),
                };
                if l.copy == 0 {
                    base_dir
                } else {
                    &self.deck.power(l.copy).rotation * base_dir
                }
            }
            (_, None) => DVector::zeros(d),
        }
    }

    /// Placement with one gauge parameter moved by `h` (plain, unscaled units).
    pub fn perturbed(&self, param: &GaugeParam, h: f64) -> CoverPlacement {
        let mut out = self.clone();
        match (&param.kind, param.vertex) {
            (ParamKind::Alpha, _) | (ParamKind::Translation, _) => {
                if let Representation::CyclicInfinite { alpha, shift } = self.rep {
                    let rep = if param.kind == ParamKind::Alpha {
                        Representation::CyclicInfinite {
                            alpha: alpha + h,
                            shift,
                        }
                    } else {
                        Representation::CyclicInfinite {
                            alpha,
                            shift: shift + h,
                        }
                    };
                    out.deck = rep.generator();
                    out.rep = rep;
                }
            }
            (ParamKind::PhiDiff, Some(v)) => {
                out.base[v] = rotation_z(h) * &self.base[v];
            }
            (_, Some(v)) => {
                out.base[v] += self.lift_derivative(param, Lift::base(v)) * h;
            }
            (_, None) => {}
        }
        out
    }
}

/// Edge counts per top simplex helper used by tests of lift independence.
pub fn lift_length_spread(c: &SimplicialPreComplex, p: &CoverPlacement) -> f64 {
    let order = match c.group() {
        DeckGroup::Cyclic(q) => q as i64,
        _ => 1,
    };
    let mut worst = 0.0f64;
    for t in 0..c.num_tops() {
        let lifts = &c.tops()[t].lifts;
        for (i, j) in local_pairs(lifts.len()) {
            let l0 = (p.coords(lifts[i]) - p.coords(lifts[j])).norm();
            for g in 1..order {
                let a = c.group().shift(lifts[i], g);
                let b = c.group().shift(lifts[j], g);
                let lg = (p.coords(a) - p.coords(b)).norm();
                worst = worst.max((lg - l0).abs() / l0);
            }
        }
    }
    worst
}

/// A complex together with an equivariant placement and the metric it induces.
#[derive(Clone, Debug)]
pub struct MetricTriangulation {
    pub complex: SimplicialPreComplex,
    pub placement: CoverPlacement,
    pub metric: MetricData,
}

impl MetricTriangulation {
    pub fn from_placement(
        complex: SimplicialPreComplex,
        placement: CoverPlacement,
    ) -> Result<Self> {
        let metric = placement.metric(&complex)?;
        Ok(MetricTriangulation {
            complex,
            placement,
            metric,
        })
    }

    pub fn max_abs_omega(&self) -> Result<f64> {
        Ok(deficit_angles(&self.complex, &self.metric)?.max_abs())
    }
}
