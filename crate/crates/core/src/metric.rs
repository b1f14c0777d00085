//! Euclidean metric quantities of simplices and deficit angles at hinges.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::{local_pairs, pair_mask, CellId, SimplicialPreComplex};
use crate::error::{Error, Result};

/// Scale-invariant degeneracy cutoff on squared volumes.
pub const DEGENERACY_RTOL: f64 = 1e-24;

/// Squared length per edge cell plus metric sign per top simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricData {
    pub sq_lengths: Vec<f64>,
    pub signs: Vec<i8>,
}

impl MetricData {
    pub fn length(&self, edge: usize) -> f64 {
        self.sq_lengths[edge].sqrt()
    }

    /// Local squared-distance matrix of a top simplex.
    pub fn top_sq(&self, c: &SimplicialPreComplex, top: usize) -> DMatrix<f64> {
        let n = c.dim() + 1;
        let edges = c.top_edges(top);
        let mut m = DMatrix::zeros(n, n);
        for (e, (i, j)) in local_pairs(n).into_iter().enumerate() {
            m[(i, j)] = self.sq_lengths[edges[e]];
            m[(j, i)] = self.sq_lengths[edges[e]];
        }
        m
    }

    pub fn scaled(&self, s: f64) -> MetricData {
        MetricData {
            sq_lengths: self.sq_lengths.iter().map(|l| l * s * s).collect(),
            signs: self.signs.clone(),
        }
    }
}

/// Deficit angle per hinge, reduced to `(-pi, pi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureVector {
    pub omega: Vec<f64>,
}

impl CurvatureVector {
    pub fn max_abs(&self) -> f64 {
        self.omega.iter().fold(0.0f64, |a, w| a.max(w.abs()))
    }
}

pub fn reduce_angle(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Gram matrix of edge vectors from local vertex 0.
pub fn gram_from_sq(sq: &DMatrix<f64>) -> DMatrix<f64> {
    let k = sq.nrows() - 1;
    DMatrix::from_fn(k, k, |a, b| {
        0.5 * (sq[(0, a + 1)] + sq[(0, b + 1)] - sq[(a + 1, b + 1)])
    })
}

/// Squared k-volume from squared edge lengths (Gram route).
pub fn sq_volume(sq: &DMatrix<f64>) -> f64 {
    let k = sq.nrows() - 1;
    if k == 0 {
        return 1.0;
    }
    gram_from_sq(sq).determinant() / (factorial(k) * factorial(k))
}

fn mean_sq(sq: &DMatrix<f64>) -> f64 {
    let n = sq.nrows();
    let pairs = local_pairs(n);
    pairs.iter().map(|&(i, j)| sq[(i, j)]).sum::<f64>() / pairs.len() as f64
}

/// Volume of the regular k-simplex with unit edges.
pub fn regular_volume(k: usize) -> f64 {
    ((k + 1) as f64).sqrt() / (factorial(k) * 2f64.powf(k as f64 / 2.0))
}

/// Scale-free shape quality: volume over `(mean squared edge)^(k/2)`,
/// normalized so the regular simplex scores 1.
pub fn shape_quality(sq: &DMatrix<f64>) -> f64 {
    let k = sq.nrows() - 1;
    sq_volume(sq).max(0.0).sqrt() / mean_sq(sq).powf(k as f64 / 2.0) / regular_volume(k)
}

/// Worst shape quality over the top simplices.
pub fn min_shape_quality(c: &SimplicialPreComplex, m: &MetricData) -> f64 {
    (0..c.num_tops())
        .map(|t| shape_quality(&m.top_sq(c, t)))
        .fold(f64::INFINITY, f64::min)
}

pub fn is_degenerate_sq(sq: &DMatrix<f64>) -> bool {
    let k = sq.nrows() - 1;
    sq_volume(sq) <= DEGENERACY_RTOL * mean_sq(sq).powi(k as i32)
}

fn cayley_menger_sq_volume(sq: &DMatrix<f64>) -> f64 {
    let n = sq.nrows();
    let k = n - 1;
    let mut cm = DMatrix::from_element(n + 1, n + 1, 1.0);
    cm[(0, 0)] = 0.0;
    for i in 0..n {
        for j in 0..n {
            cm[(i + 1, j + 1)] = sq[(i, j)];
        }
    }
    let sign = if (k + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * cm.determinant() / (2f64.powi(k as i32) * factorial(k) * factorial(k))
}

/// Euclidean k-volume from the Cayley–Menger determinant of squared distances.
pub fn cm_volume(k: usize, sq: &DMatrix<f64>) -> Result<f64> {
    if sq.nrows() != k + 1 || sq.ncols() != k + 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected {0}x{0} squared distances",
            k + 1
        )));
    }
    for i in 0..=k {
        if sq[(i, i)] != 0.0 {
            return Err(Error::NotRealizable);
        }
        for j in 0..i {
            if (sq[(i, j)] - sq[(j, i)]).abs() > 1e-12 * sq[(i, j)].abs().max(1.0)
                || sq[(i, j)] < 0.0
            {
                return Err(Error::NotRealizable);
            }
        }
    }
    if k == 0 {
        return Ok(1.0);
    }
    let scale = mean_sq(sq).max(f64::MIN_POSITIVE);
    // every face must be realizable as well
    for size in 3..=k + 1 {
        for mask in 1u32..(1 << (k + 1)) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let idx: Vec<usize> = (0..=k).filter(|i| mask & (1 << i) != 0).collect();
            let sub = DMatrix::from_fn(size, size, |a, b| sq[(idx[a], idx[b])]);
            let v2 = cayley_menger_sq_volume(&sub);
            if v2 < -1e-12 * scale.powi(size as i32 - 1) {
                return Err(Error::NotRealizable);
            }
        }
    }
    Ok(cayley_menger_sq_volume(sq).max(0.0).sqrt())
}

/// Signed volume of `d+1` points in d-space: `det(p_i - p_0) / d!`.
pub fn signed_volume(points: &[DVector<f64>]) -> f64 {
    let d = points.len() - 1;
    let m = DMatrix::from_fn(d, d, |r, c| points[c + 1][r] - points[0][r]);
    m.determinant() / factorial(d)
}

/// Squared distance matrix of a point tuple.
pub fn sq_from_points(points: &[DVector<f64>]) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| (&points[i] - &points[j]).norm_squared())
}

/// k-volume of the simplex spanned by points in any ambient dimension.
pub fn simplex_volume(points: &[DVector<f64>]) -> f64 {
    sq_volume(&sq_from_points(points)).max(0.0).sqrt()
}

pub fn triangle_area(a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
    simplex_volume(&[a.clone(), b.clone(), c.clone()])
}

/// Interior dihedral angle at the hinge spanned by all vertices except `i` and `j`,
/// from coordinates: the angle between the components of the two opposite
/// vertices orthogonal to the hinge's affine hull.
pub fn dihedral_angle(points: &[DVector<f64>], i: usize, j: usize) -> Result<f64> {
    let n = points.len();
    let hinge: Vec<usize> = (0..n).filter(|&v| v != i && v != j).collect();
    let hinge_pts: Vec<DVector<f64>> = hinge.iter().map(|&v| points[v].clone()).collect();
    let hsq = sq_from_points(&hinge_pts);
    if hinge_pts.len() > 1 && is_degenerate_sq(&hsq) {
        return Err(Error::Degenerate("hinge has zero volume".into()));
    }
    let origin = &points[hinge[0]];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for p in &hinge_pts[1..] {
        let mut v = p - origin;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        basis.push(v.normalize());
    }
    let project = |p: &DVector<f64>| {
        let mut v = p - origin;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        v
    };
    let u = project(&points[i]);
    let w = project(&points[j]);
    let (nu, nw) = (u.norm(), w.norm());
    if nu == 0.0 || nw == 0.0 {
        return Err(Error::Degenerate("simplex is flat".into()));
    }
    Ok((u.dot(&w) / (nu * nw)).clamp(-1.0, 1.0).acos())
}

/// Extended inverse Gram matrix: entry `(i, j)` is the inner product of the dual
/// vectors (facet normals) opposite vertices `i` and `j`.
fn extended_inverse(hi: &DMatrix<f64>) -> DMatrix<f64> {
    let d = hi.nrows();
    let mut h = DMatrix::zeros(d + 1, d + 1);
    for a in 0..d {
        for b in 0..d {
            h[(a + 1, b + 1)] = hi[(a, b)];
        }
    }
    for b in 0..d {
        let s: f64 = (0..d).map(|a| hi[(a, b)]).sum();
        h[(0, b + 1)] = -s;
        h[(b + 1, 0)] = -s;
    }
    h[(0, 0)] = hi.sum();
    h
}

fn gram_derivative(d: usize, a: usize, b: usize) -> DMatrix<f64> {
    let mut dg = DMatrix::zeros(d, d);
    if a == 0 {
        for j in 0..d {
            dg[(b - 1, j)] += 0.5;
            dg[(j, b - 1)] += 0.5;
        }
    } else {
        dg[(a - 1, b - 1)] = -0.5;
        dg[(b - 1, a - 1)] = -0.5;
    }
    dg
}

fn checked_inverse_gram(sq: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if is_degenerate_sq(sq) {
        return Err(Error::Degenerate(format!(
            "squared volume {:e}",
            sq_volume(sq)
        )));
    }
    gram_from_sq(sq)
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular Gram matrix".into()))
}

/// Dihedral angles from squared lengths, indexed by opposite pair in
/// [`local_pairs`] order.
pub fn dihedral_angles_sq(sq: &DMatrix<f64>) -> Result<Vec<f64>> {
    let h = extended_inverse(&checked_inverse_gram(sq)?);
    Ok(local_pairs(sq.nrows())
        .into_iter()
        .map(|(i, j)| {
            (-h[(i, j)] / (h[(i, i)] * h[(j, j)]).sqrt())
                .clamp(-1.0, 1.0)
                .acos()
        })
        .collect())
}

/// Dihedral angles and their derivatives with respect to the squared lengths.
///
/// Row `r` is the hinge opposite `local_pairs[r]`, column `e` the local edge
/// `local_pairs[e]`.
pub fn dihedral_jacobian_sq(sq: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = sq.nrows();
    let d = n - 1;
    let hi = checked_inverse_gram(sq)?;
    let h = extended_inverse(&hi);
    let pairs = local_pairs(n);
    let mut angles = Vec::with_capacity(pairs.len());
    let mut jac = DMatrix::zeros(pairs.len(), pairs.len());
    let dhs: Vec<DMatrix<f64>> = pairs
        .iter()
        .map(|&(a, b)| {
            let dg = gram_derivative(d, a, b);
            extended_inverse(&(-(&hi * dg * &hi)))
        })
        .collect();
    for (r, &(i, j)) in pairs.iter().enumerate() {
        let root = (h[(i, i)] * h[(j, j)]).sqrt();
        let cos = (-h[(i, j)] / root).clamp(-1.0, 1.0);
        let theta = cos.acos();
        let sin = theta.sin();
        if sin <= 0.0 {
            return Err(Error::Degenerate("dihedral angle at 0 or pi".into()));
        }
        angles.push(theta);
        for (e, dh) in dhs.iter().enumerate() {
            let dcos = -dh[(i, j)] / root
                + 0.5 * h[(i, j)] / root * (dh[(i, i)] / h[(i, i)] + dh[(j, j)] / h[(j, j)]);
            jac[(r, e)] = -dcos / sin;
        }
    }
    Ok((angles, jac))
}

/// Deficit angles of every hinge from squared lengths and signs.
pub fn deficit_angles(c: &SimplicialPreComplex, m: &MetricData) -> Result<CurvatureVector> {
    let n = c.dim() + 1;
    let full = (1u32 << n) - 1;
    let pairs = local_pairs(n);
    let mut sums = vec![0.0; c.num_hinges()];
    for t in 0..c.num_tops() {
        let angles = dihedral_angles_sq(&m.top_sq(c, t))?;
        for (r, &(i, j)) in pairs.iter().enumerate() {
            let h = c.top_face(t, full & !pair_mask(i, j));
            sums[h.index] += m.signs[t] as f64 * angles[r];
        }
    }
    Ok(CurvatureVector {
        omega: sums.into_iter().map(reduce_angle).collect(),
    })
}

/// Deficit angle of one hinge, summed over its hinge cycle.
pub fn deficit_at(c: &SimplicialPreComplex, m: &MetricData, h: CellId) -> Result<f64> {
    let n = c.dim() + 1;
    let full = (1u32 << n) - 1;
    let pairs = local_pairs(n);
    let mut sum = 0.0;
    for inc in c.hinge_cycle(h)? {
        let opp = full & !inc.mask;
        let r = pairs
            .iter()
            .position(|&(i, j)| pair_mask(i, j) == opp)
            .expect("hinge complement is a pair");
        let angles = dihedral_angles_sq(&m.top_sq(c, inc.top))?;
        sum += m.signs[inc.top] as f64 * angles[r];
    }
    Ok(reduce_angle(sum))
}

/// Deficit angles computed from top-simplex coordinates instead of lengths.
#[allow(clippy::needless_range_loop)]
pub fn deficit_angles_from_coords(
    c: &SimplicialPreComplex,
    signs: &[i8],
    top_points: &dyn Fn(usize) -> Vec<DVector<f64>>,
) -> Result<CurvatureVector> {
    let n = c.dim() + 1;
    let full = (1u32 << n) - 1;
    let mut sums = vec![0.0; c.num_hinges()];
    for t in 0..c.num_tops() {
        let pts = top_points(t);
        for (i, j) in local_pairs(n) {
            let h = c.top_face(t, full & !pair_mask(i, j));
            sums[h.index] += signs[t] as f64 * dihedral_angle(&pts, i, j)?;
        }
    }
    Ok(CurvatureVector {
        omega: sums.into_iter().map(reduce_angle).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[f64]]) -> Vec<DVector<f64>> {
        rows.iter().map(|r| DVector::from_row_slice(r)).collect()
    }

    fn regular_tetrahedron() -> Vec<DVector<f64>> {
        // explicit unit-edge embedding
        let s3 = 3f64.sqrt();
        pts(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.5, s3 / 2.0, 0.0],
            &[0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()],
        ])
    }

    #[test]
    fn cm_volume_examples() {
        let corner = pts(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        let v = cm_volume(3, &sq_from_points(&corner)).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);

        // oracle: coordinate determinant / 3!
        let reg = regular_tetrahedron();
        let oracle = signed_volume(&reg).abs();
        assert!((oracle - 0.117_851_130_197_757_9).abs() < 1e-12);
        let all_one = DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!((cm_volume(3, &all_one).unwrap() - oracle).abs() < 1e-14);

        let collinear =
            DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 4.0, 1.0, 0.0, 1.0, 4.0, 1.0, 0.0]);
        assert!(cm_volume(2, &collinear).unwrap() < 1e-12);
    }

    #[test]
    fn cm_volume_rejects_triangle_inequality_violation() {
        let bad = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 16.0, 1.0, 0.0, 1.0, 16.0, 1.0, 0.0]);
        assert_eq!(cm_volume(2, &bad), Err(Error::NotRealizable));
    }

    #[test]
    fn signed_volume_orientation() {
        let mut p = pts(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert!((signed_volume(&p) - 1.0 / 24.0).abs() < 1e-15);
        p.swap(0, 1);
        assert!((signed_volume(&p) + 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn dihedral_examples() {
        let reg = regular_tetrahedron();
        let expect = (1.0f64 / 3.0).acos();
        for (i, j) in local_pairs(4) {
            assert!((dihedral_angle(&reg, i, j).unwrap() - expect).abs() < 1e-12);
        }
        assert!((expect - 1.230_959_417_340_774_7).abs() < 1e-12);
        let corner4 = pts(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        // hinge {origin, e1, e2} is opposite vertices 3, 4
        assert!((dihedral_angle(&corner4, 3, 4).unwrap() - PI / 2.0).abs() < 1e-12);
        let corner3 = pts(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        // edge origin-e1 is opposite vertices 2, 3
        assert!((dihedral_angle(&corner3, 2, 3).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gram_and_coordinate_angles_agree() {
        let p = pts(&[
            &[0.1, 0.3, -0.2, 1.0],
            &[1.2, 0.1, 0.4, 0.2],
            &[-0.3, 1.1, 0.2, 0.5],
            &[0.2, -0.4, 1.3, 0.1],
            &[0.6, 0.5, 0.3, -0.9],
        ]);
        let gram = dihedral_angles_sq(&sq_from_points(&p)).unwrap();
        for (r, (i, j)) in local_pairs(5).into_iter().enumerate() {
            assert!((gram[r] - dihedral_angle(&p, i, j).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_hinge_reported() {
        let p = pts(&[
            &[0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert!(matches!(
            dihedral_angle(&p, 2, 3),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn reduce_angle_branch() {
        assert!((reduce_angle(2.0 * PI) - 0.0).abs() < 1e-15);
        assert!((reduce_angle(-PI) - PI).abs() < 1e-15);
        assert!((reduce_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }
}
