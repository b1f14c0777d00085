//! Linear maps of the 3D and 4D sequences: `A = (dω/dl)`, `B = (dl/dx)`,
//! `Q4 = (dω/dL)` and the edge-deviation map `D4 = (dS/dv)`, plus their
//! finite-difference checks.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::{local_pairs, pair_mask, CellId, DeckGroup, Lift, SimplicialPreComplex};
use crate::developing::{CoverPlacement, GaugeBasis};
use crate::error::{Error, Result};
use crate::fd::{fd_jacobian_adaptive, max_relative_error};
use crate::linalg::max_abs;
use crate::metric::{
    deficit_angles, dihedral_jacobian_sq, shape_quality, signed_volume, triangle_area, MetricData,
};

/// Relative floor used when comparing analytic and numeric entries.
pub const FD_FLOOR: f64 = 1e-3;

/// Dense matrix with row and column labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub data: DMatrix<f64>,
}

impl LabeledMatrix {
    pub fn transpose(&self) -> LabeledMatrix {
        LabeledMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            data: self.data.transpose(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JacobianSet {
    pub a: Option<LabeledMatrix>,
    pub b: Option<LabeledMatrix>,
    pub q4: Option<LabeledMatrix>,
    pub d4: Option<LabeledMatrix>,
}

fn labels(c: &SimplicialPreComplex, k: usize) -> Vec<String> {
    (0..c.num_cells(k))
        .map(|i| c.format_cell(CellId::new(k, i)))
        .collect()
}

fn require_dim(c: &SimplicialPreComplex, d: usize) -> Result<()> {
    if c.dim() != d {
        return Err(Error::Unsupported(format!(
            "operation needs a {d}-dimensional complex, got {}",
            c.dim()
        )));
    }
    Ok(())
}

/// `dω_h/dL_e` for every hinge and edge.
fn omega_sq_jacobian(c: &SimplicialPreComplex, m: &MetricData) -> Result<DMatrix<f64>> {
    let n = c.dim() + 1;
    let full = (1u32 << n) - 1;
    let pairs = local_pairs(n);
    let mut q = DMatrix::zeros(c.num_hinges(), c.num_edges());
    for t in 0..c.num_tops() {
        let (_, jac) = dihedral_jacobian_sq(&m.top_sq(c, t))?;
        let edges = c.top_edges(t);
        let eps = m.signs[t] as f64;
        for (r, &(i, j)) in pairs.iter().enumerate() {
            let h = c.top_face(t, full & !pair_mask(i, j)).index;
            for (e, &edge) in edges.iter().enumerate() {
                q[(h, edge)] += eps * jac[(r, e)];
            }
        }
    }
    Ok(q)
}

/// `A[a][b] = dω_a/dl_b` with plain lengths `l = sqrt(L)`.
pub fn assemble_a3(c: &SimplicialPreComplex, m: &MetricData) -> Result<DMatrix<f64>> {
    require_dim(c, 3)?;
    let mut a = omega_sq_jacobian(c, m)?;
    for b in 0..c.num_edges() {
        let f = 2.0 * m.length(b);
        a.column_mut(b).scale_mut(f);
    }
    Ok(a)
}

/// `B[a][j]`: derivative of plain length `l_a` along the `j`-th gauge parameter.
pub fn assemble_b3(
    c: &SimplicialPreComplex,
    p: &CoverPlacement,
    g: &GaugeBasis,
) -> Result<DMatrix<f64>> {
    require_dim(c, 3)?;
    let mut b = DMatrix::zeros(c.num_edges(), g.len());
    for e in 0..c.num_edges() {
        let ls = c.cell_lifts(CellId::new(1, e));
        let diff = p.coords(ls[0]) - p.coords(ls[1]);
        let len = diff.norm();
        if len == 0.0 {
            return Err(Error::GaugeDegenerate(format!(
                "edge {} has zero length",
                c.format_cell(CellId::new(1, e))
            )));
        }
        let dir = diff / len;
        for (j, param) in g.params.iter().enumerate() {
            let dx = p.lift_derivative(param, ls[0]) - p.lift_derivative(param, ls[1]);
            b[(e, j)] = dir.dot(&dx) * param.scale;
        }
    }
    Ok(b)
}

/// `Q4[i][a] = dω_i/dL_a` over 2-faces and edges of a 4D complex.
pub fn assemble_q4(c: &SimplicialPreComplex, m: &MetricData) -> Result<DMatrix<f64>> {
    require_dim(c, 4)?;
    omega_sq_jacobian(c, m)
}

/// The `(dΩ_a/dS_i)` map, taken as the transpose of `Q4`.
pub fn conjugate_omega_map(q4: &DMatrix<f64>) -> DMatrix<f64> {
    q4.transpose()
}

/// Orthonormal triple spanning the complement of one edge direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFrame {
    pub lifts: Vec<Lift>,
    pub direction: DVector<f64>,
    pub triple: Vec<DVector<f64>>,
}

/// Deviation frames for every edge of a 4D complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationBasis {
    pub frames: Vec<EdgeFrame>,
}

/// Gram–Schmidt completion of `u` seeded from the coordinate axes.
pub fn orthogonal_triple(u: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = u.len();
    let mut basis = vec![u.normalize()];
    for axis in 0..d {
        let mut v = DVector::zeros(d);
        v[axis] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-3 {
            basis.push(v.normalize());
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

impl DeviationBasis {
    pub fn new(c: &SimplicialPreComplex, p: &CoverPlacement) -> Result<Self> {
        require_dim(c, 4)?;
        let frames = (0..c.num_edges())
            .map(|e| {
                let lifts = c.cell_lifts(CellId::new(1, e)).to_vec();
                let u = p.coords(lifts[1]) - p.coords(lifts[0]);
                if u.norm() == 0.0 {
                    return Err(Error::Degenerate(format!(
                        "edge {} has zero length",
                        c.format_cell(CellId::new(1, e))
                    )));
                }
                let direction = u.normalize();
                let triple = orthogonal_triple(&direction);
                Ok(EdgeFrame {
                    lifts,
                    direction,
                    triple,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DeviationBasis { frames })
    }

    /// Replaces the triple of one edge by `R * triple` for a 3x3 orthogonal `R`.
    pub fn rotate(&mut self, edge: usize, r: &DMatrix<f64>) {
        let old = self.frames[edge].triple.clone();
        self.frames[edge].triple = (0..3)
            .map(|i| {
                (0..3).fold(DVector::zeros(old[0].len()), |acc, j| {
                    acc + &old[j] * r[(i, j)]
                })
            })
            .collect();
    }
}

/// Gradient of the area of triangle `PQR` with respect to `P`.
pub fn area_gradient(p: &DVector<f64>, q: &DVector<f64>, r: &DVector<f64>) -> Result<DVector<f64>> {
    let u = r - q;
    let w = p - q;
    let uu = u.norm_squared();
    if uu == 0.0 {
        return Err(Error::Degenerate(
            "midpoint triangle has a zero side".into(),
        ));
    }
    let h = &w - &u * (u.dot(&w) / uu);
    let hn = h.norm();
    if hn == 0.0 {
        return Err(Error::Degenerate("midpoint triangle is flat".into()));
    }
    Ok(h * (u.norm() / (2.0 * hn)))
}

/// `dS_ABC` per unit deviation of edge AB, as a row over the given triple.
pub fn face_response(
    a: &DVector<f64>,
    b: &DVector<f64>,
    x: &DVector<f64>,
    triple: &[DVector<f64>],
) -> Result<Vec<f64>> {
    let m_ab = (a + b) / 2.0;
    let m_bx = (b + x) / 2.0;
    let m_xa = (x + a) / 2.0;
    let g = area_gradient(&m_ab, &m_bx, &m_xa)? * 4.0;
    Ok(triple.iter().map(|t| g.dot(t)).collect())
}

/// Matrix of `d(S_ABX^2)` responses (rows: apexes `X`, cols: triple components)
/// to a deviation of edge AB.
pub fn squared_area_responses(
    a: &DVector<f64>,
    b: &DVector<f64>,
    apexes: &[DVector<f64>],
    triple: &[DVector<f64>],
) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(apexes.len(), triple.len());
    for (r, x) in apexes.iter().enumerate() {
        let s = triangle_area(a, b, x);
        let row = face_response(a, b, x, triple)?;
        for (k, v) in row.into_iter().enumerate() {
            out[(r, k)] = 2.0 * s * v;
        }
    }
    Ok(out)
}

/// Area change of triangle ABC under finite edge deviations, by the
/// midpoint-triangle rule `dS = 4 S(A'B'C') - S(ABC)`.
pub fn midpoint_rule_area_change(
    a: &DVector<f64>,
    b: &DVector<f64>,
    c: &DVector<f64>,
    dv_ab: &DVector<f64>,
    dv_bc: &DVector<f64>,
    dv_ca: &DVector<f64>,
) -> f64 {
    let c1 = (a + b) / 2.0 + dv_ab;
    let a1 = (b + c) / 2.0 + dv_bc;
    let b1 = (c + a) / 2.0 + dv_ca;
    4.0 * triangle_area(&a1, &b1, &c1) - triangle_area(a, b, c)
}

/// `D4`: rows 2-faces, columns three deviation components per edge.
pub fn assemble_d4(
    c: &SimplicialPreComplex,
    p: &CoverPlacement,
    basis: &DeviationBasis,
) -> Result<DMatrix<f64>> {
    require_dim(c, 4)?;
    if c.group() != DeckGroup::Trivial {
        return Err(Error::Unsupported(
            "edge deviations need a trivial deck group".into(),
        ));
    }
    let mut d = DMatrix::zeros(c.num_cells(2), 3 * c.num_edges());
    for f in 0..c.num_cells(2) {
        let ls = c.cell_lifts(CellId::new(2, f));
        let x: Vec<DVector<f64>> = ls.iter().map(|&l| p.coords(l)).collect();
        for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
            let k = 3 - i - j;
            let e = c
                .find_cell(&[ls[i], ls[j]])
                .expect("face edge is a cell")
                .index;
            let row = face_response(&x[i], &x[j], &x[k], &basis.frames[e].triple)?;
            for (s, v) in row.into_iter().enumerate() {
                d[(f, 3 * e + s)] = v;
            }
        }
    }
    Ok(d)
}

/// Labeled matrices for a complex; 3D needs a gauge basis, 4D a deviation basis.
pub fn jacobian_set(
    c: &SimplicialPreComplex,
    m: &MetricData,
    p: &CoverPlacement,
    g: Option<&GaugeBasis>,
) -> Result<JacobianSet> {
    let edges = labels(c, 1);
    if c.dim() == 3 {
        let a = assemble_a3(c, m)?;
        let b = match g {
            Some(g) => Some(LabeledMatrix {
                rows: edges.clone(),
                cols: gauge_labels(c, g),
                data: assemble_b3(c, p, g)?,
            }),
            None => None,
        };
        Ok(JacobianSet {
            a: Some(LabeledMatrix {
                rows: edges.clone(),
                cols: edges,
                data: a,
            }),
            b,
            q4: None,
            d4: None,
        })
    } else {
        let faces = labels(c, 2);
        let q4 = assemble_q4(c, m)?;
        let basis = DeviationBasis::new(c, p)?;
        let d4 = assemble_d4(c, p, &basis)?;
        let dev_cols = edges
            .iter()
            .flat_map(|e| ["x", "y", "z"].map(|s| format!("dv{s}[{e}]")))
            .collect();
        Ok(JacobianSet {
            a: None,
            b: None,
            q4: Some(LabeledMatrix {
                rows: faces.clone(),
                cols: edges,
                data: q4,
            }),
            d4: Some(LabeledMatrix {
                rows: faces,
                cols: dev_cols,
                data: d4,
            }),
        })
    }
}

pub fn gauge_labels(c: &SimplicialPreComplex, g: &GaugeBasis) -> Vec<String> {
    use crate::developing::ParamKind;
    g.params
        .iter()
        .map(|p| {
            let v = p
                .vertex
                .map(|v| c.vertex_names()[v].clone())
                .unwrap_or_default();
            match &p.kind {
                ParamKind::Rho => format!("rho*drho[{v}]"),
                ParamKind::PhiDiff => format!("d(phi[{v}]-phi[{}])", c.vertex_names()[0]),
                ParamKind::ZDiff => format!("d(z[{v}]-z[{}])", c.vertex_names()[0]),
                ParamKind::Coordinate { direction } => format!("dx[{v}]{direction:?}"),
                ParamKind::Alpha => "dalpha".to_string(),
                ParamKind::Translation => "da".to_string(),
            }
        })
        .collect()
}

/// `‖X Y‖ / (‖X‖ ‖Y‖)` in the max-entry norm.
pub fn normalized_product(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let denom = max_abs(x) * max_abs(y);
    if denom == 0.0 {
        return 0.0;
    }
    max_abs(&(x * y)) / denom
}

/// `‖A - Aᵀ‖ / ‖A‖` in the max-entry norm.
pub fn asymmetry(a: &DMatrix<f64>) -> f64 {
    let s = max_abs(a);
    if s == 0.0 {
        0.0
    } else {
        max_abs(&(a - a.transpose())) / s
    }
}

/// Length scale on which `omega` is smooth near each edge.
///
/// For every top simplex containing the edge this is its rms edge length,
/// shrunk by its shape quality (1 for a regular simplex); a thin simplex
/// sits close to degeneracy and needs a proportionally shorter step.
pub fn edge_scales(c: &SimplicialPreComplex, m: &MetricData) -> Vec<f64> {
    let mut out = vec![f64::INFINITY; c.num_edges()];
    for t in 0..c.num_tops() {
        let sq = m.top_sq(c, t);
        let edges = c.top_edges(t);
        let rms = (edges.iter().map(|&e| m.sq_lengths[e]).sum::<f64>() / edges.len() as f64).sqrt();
        let s = rms * shape_quality(&sq).min(1.0);
        for e in edges {
            out[e] = out[e].min(s);
        }
    }
    out
}

/// Multiples of the nominal step tried by the adaptive difference quotient.
pub const FD_STEP_FACTORS: [f64; 5] = [1000.0, 100.0, 10.0, 1.0, 0.1];

fn omega_of_lengths(
    c: &SimplicialPreComplex,
    m: &MetricData,
    sq: Vec<f64>,
) -> Result<DVector<f64>> {
    let pert = MetricData {
        sq_lengths: sq,
        signs: m.signs.clone(),
    };
    Ok(DVector::from_vec(deficit_angles(c, &pert)?.omega))
}

/// Max relative error of `A` against central differences in plain lengths.
pub fn fd_check_a3(c: &SimplicialPreComplex, m: &MetricData) -> Result<f64> {
    let a = assemble_a3(c, m)?;
    let l0 = DVector::from_iterator(c.num_edges(), (0..c.num_edges()).map(|e| m.length(e)));
    let f = |l: &DVector<f64>| omega_of_lengths(c, m, l.iter().map(|x| x * x).collect());
    let h: Vec<f64> = edge_scales(c, m).iter().map(|s| 1e-5 * s).collect();
    let (num, _) = fd_jacobian_adaptive(&f, &l0, &h, &FD_STEP_FACTORS)?;
    Ok(max_relative_error(&a, &num, FD_FLOOR))
}

/// Max relative error of `Q4` against central differences in squared lengths.
pub fn fd_check_q4(c: &SimplicialPreComplex, m: &MetricData) -> Result<f64> {
    let q = assemble_q4(c, m)?;
    let sq0 = DVector::from_vec(m.sq_lengths.clone());
    let f = |l: &DVector<f64>| omega_of_lengths(c, m, l.iter().copied().collect());
    let h: Vec<f64> = edge_scales(c, m)
        .iter()
        .enumerate()
        .map(|(e, s)| 1e-5 * s * m.length(e))
        .collect();
    let (num, _) = fd_jacobian_adaptive(&f, &sq0, &h, &FD_STEP_FACTORS)?;
    Ok(max_relative_error(&q, &num, FD_FLOOR))
}

/// Max relative error of `B` against central differences of the placement.
pub fn fd_check_b3(c: &SimplicialPreComplex, p: &CoverPlacement, g: &GaugeBasis) -> Result<f64> {
    let b = assemble_b3(c, p, g)?;
    let h = 1e-5 * p.diameter().max(1e-12);
    let lengths = |q: &CoverPlacement| -> DVector<f64> {
        DVector::from_iterator(
            c.num_edges(),
            (0..c.num_edges()).map(|e| {
                let ls = c.cell_lifts(CellId::new(1, e));
                (q.coords(ls[0]) - q.coords(ls[1])).norm()
            }),
        )
    };
    let mut num = DMatrix::zeros(b.nrows(), b.ncols());
    for (j, param) in g.params.iter().enumerate() {
        let d = |s: f64| {
            (lengths(&p.perturbed(param, s)) - lengths(&p.perturbed(param, -s))) / (2.0 * s)
        };
        let coarse = d(h);
        let fine = d(h / 2.0);
        let rich = (fine * 4.0 - coarse) / 3.0;
        num.set_column(j, &(rich * param.scale));
    }
    Ok(max_relative_error(&b, &num, FD_FLOOR))
}

/// Max relative error of `D4` against finite differences of the midpoint rule.
pub fn fd_check_d4(
    c: &SimplicialPreComplex,
    p: &CoverPlacement,
    basis: &DeviationBasis,
) -> Result<f64> {
    let d4 = assemble_d4(c, p, basis)?;
    let h = 1e-5 * p.diameter().max(1e-12);
    let mut num = DMatrix::zeros(d4.nrows(), d4.ncols());
    for f in 0..c.num_cells(2) {
        let ls = c.cell_lifts(CellId::new(2, f));
        let x: Vec<DVector<f64>> = ls.iter().map(|&l| p.coords(l)).collect();
        let zero = DVector::zeros(4);
        for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
            let e = c
                .find_cell(&[ls[i], ls[j]])
                .expect("face edge is a cell")
                .index;
            for s in 0..3 {
                let dir = &basis.frames[e].triple[s];
                let area = |t: f64| {
                    let dv = dir * t;
                    // deviation attached to the side (i, j) only
                    let (ab, bc, ca) = match (i, j) {
                        (0, 1) => (dv, zero.clone(), zero.clone()),
                        (1, 2) => (zero.clone(), dv, zero.clone()),
                        _ => (zero.clone(), zero.clone(), dv),
                    };
                    midpoint_rule_area_change(&x[0], &x[1], &x[2], &ab, &bc, &ca)
                };
                let coarse = (area(h) - area(-h)) / (2.0 * h);
                let fine = (area(h / 2.0) - area(-h / 2.0)) / h;
                num[(f, 3 * e + s)] = (4.0 * fine - coarse) / 3.0;
            }
        }
    }
    Ok(max_relative_error(&d4, &num, FD_FLOOR))
}

/// Data of an edge surrounded by exactly four top simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct FourStar {
    pub edge: usize,
    pub a: Lift,
    pub b: Lift,
    /// Link vertices `C, D, E, F`.
    pub link: Vec<Lift>,
}

pub fn four_star(c: &SimplicialPreComplex, edge: usize) -> Result<FourStar> {
    require_dim(c, 4)?;
    let id = CellId::new(1, edge);
    let inc = c.incidences(id);
    if inc.len() != 4 {
        return Err(Error::WrongLink(inc.len()));
    }
    let ls = c.cell_lifts(id);
    let mut link: Vec<Lift> = Vec::new();
    for i in inc {
        for &l in &c.tops()[i.top].lifts {
            if !ls.contains(&l) && !link.contains(&l) {
                link.push(l);
            }
        }
    }
    if link.len() != 4 {
        return Err(Error::WrongLink(inc.len()));
    }
    link.sort();
    Ok(FourStar {
        edge,
        a: ls[0],
        b: ls[1],
        link,
    })
}

/// Signed volumes `(V_{-Ĉ}, V_{D̂}, V_{-Ê}, V_{F̂})` of the consistently oriented
/// simplices `ABDFE, ABCEF, ABCFD, ABCDE` around edge AB.
pub fn dependence_coefficients(pts: &[DVector<f64>; 6]) -> [f64; 4] {
    let [a, b, c, d, e, f] = pts;
    let v = |xs: [&DVector<f64>; 5]| signed_volume(&xs.map(|x| x.clone()));
    [
        v([a, b, d, f, e]),
        v([a, b, c, e, f]),
        v([a, b, c, f, d]),
        v([a, b, c, d, e]),
    ]
}

/// Diagnostics for the linear dependence of area differentials around a
/// four-surrounded edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    /// `|Σ_X V_X d(S_ABX^2)| / (|V| |responses|)`.
    pub annihilation: f64,
    /// Rank of the 4x3 response block.
    pub response_rank: usize,
    /// Spread of `Q4[ABX, AB] / (V_X S_ABX)` over the four faces.
    pub column_ratio_spread: f64,
    pub column_ratio: f64,
}

fn star_points(p: &CoverPlacement, s: &FourStar) -> [DVector<f64>; 6] {
    [
        p.coords(s.a),
        p.coords(s.b),
        p.coords(s.link[0]),
        p.coords(s.link[1]),
        p.coords(s.link[2]),
        p.coords(s.link[3]),
    ]
}

pub fn dependence_report(
    c: &SimplicialPreComplex,
    m: &MetricData,
    p: &CoverPlacement,
    q4: &DMatrix<f64>,
    edge: usize,
) -> Result<DependenceReport> {
    let s = four_star(c, edge)?;
    let pts = star_points(p, &s);
    let coef = dependence_coefficients(&pts);
    let triple = orthogonal_triple(&(&pts[1] - &pts[0]));
    let resp = squared_area_responses(&pts[0], &pts[1], &pts[2..], &triple)?;
    let cv = DVector::from_row_slice(&coef);
    let comb = resp.transpose() * &cv;
    let annihilation = comb.norm() / (cv.norm() * resp.norm());
    let rank = crate::linalg::rank_info(&resp).rank;
    let mut ratios = Vec::new();
    for (k, x) in s.link.iter().enumerate() {
        let face = c
            .find_cell(&[s.a, s.b, *x])
            .expect("star face exists")
            .index;
        let area = triangle_area(&pts[0], &pts[1], &pts[2 + k]);
        ratios.push(q4[(face, edge)] / (coef[k] * area));
    }
    let _ = m;
    let mean = ratios.iter().sum::<f64>() / 4.0;
    let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs();
    Ok(DependenceReport {
        annihilation,
        response_rank: rank,
        column_ratio_spread: spread,
        column_ratio: mean,
    })
}

/// `|det J|` and `24 |V| L^{5/2}` for the d(S²) block of edge `pts[0] pts[1]`
/// at faces with apexes `pts[2..5]`.
pub fn det_j_identity(pts: &[DVector<f64>]) -> Result<(f64, f64)> {
    let triple = orthogonal_triple(&(&pts[1] - &pts[0]));
    let j = squared_area_responses(&pts[0], &pts[1], &pts[2..5], &triple)?;
    let l = (&pts[1] - &pts[0]).norm_squared();
    Ok((
        j.determinant().abs(),
        24.0 * signed_volume(&pts[..5]).abs() * l.powf(2.5),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(xs)
    }

    #[test]
    fn zero_deviation_gives_zero_area_change() {
        let z = DVector::zeros(3);
        let ds = midpoint_rule_area_change(
            &v(&[0., 0., 0.]),
            &v(&[2., 0., 0.]),
            &v(&[0.3, 1.7, 0.]),
            &z,
            &z,
            &z,
        );
        assert!(ds.abs() < 1e-14);
    }

    #[test]
    fn in_plane_deviation_scales_with_edge_length() {
        // l_AB = 2: moving the AB midpoint by eps away from C changes S by 2 eps
        let a = v(&[0., 0., 0.]);
        let b = v(&[2., 0., 0.]);
        let c = v(&[0.5, 1.0, 0.]);
        let triple = vec![v(&[0., -1., 0.]), v(&[0., 0., 1.])];
        let row = face_response(&a, &b, &c, &triple).unwrap();
        assert!((row[0] - 2.0).abs() < 1e-12);
        assert!(row[1].abs() < 1e-12);
        let eps = 1e-6;
        let z = DVector::zeros(3);
        let ds = midpoint_rule_area_change(&a, &b, &c, &v(&[0., -eps, 0.]), &z, &z);
        assert!((ds / eps - 2.0).abs() < 1e-6);
    }

    #[test]
    fn triple_is_orthonormal() {
        let u = v(&[0.3, -1.2, 0.7, 2.0]).normalize();
        let t = orthogonal_triple(&u);
        assert_eq!(t.len(), 3);
        for i in 0..3 {
            assert!(t[i].dot(&u).abs() < 1e-12);
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((t[i].dot(&t[j]) - want).abs() < 1e-12);
            }
        }
    }
}
