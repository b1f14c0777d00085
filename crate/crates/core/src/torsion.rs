//! Torsion of the 3D sequence and the derived 3-manifold invariant.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CellId, SimplicialPreComplex};
use crate::developing::{gauge_basis, CoverPlacement, GaugeBasis};
use crate::error::{Error, Result};
use crate::jacobians::{assemble_a3, assemble_b3};
use crate::linalg::{
    log_det, rank_info, singular_values, submatrix, symmetric_pivot_select, LogDet, RankInfo,
};
use crate::metric::{cm_volume, MetricData};

/// Smallest admissible `sigma_min / sigma_max` of the pivot block `A|_C`.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Edge subset `C` with `A|_C` nonsingular and `|C| = rank(A)`.
///
/// Without a seed the pivots are chosen greedily; a seed randomizes each choice
/// among pivots within a factor 0.5 of the best, giving another admissible set.
pub fn select_c(a: &DMatrix<f64>, pivot_seed: Option<u64>) -> Vec<usize> {
    let r = rank_info(a).rank;
    match pivot_seed {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            symmetric_pivot_select(a, r, Some(&mut rng))
        }
        None => symmetric_pivot_select::<ChaCha8Rng>(a, r, None),
    }
}

/// Every `rank(A)`-subset `C` whose block `A|_C` has `sigma_min / sigma_max`
/// above `rtol`, in lexicographic order, stopping after `limit` sets.
pub fn admissible_pivot_sets(a: &DMatrix<f64>, rtol: f64, limit: usize) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let r = rank_info(a).rank;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        let sv = singular_values(&submatrix(a, &idx, &idx));
        let ok = match (sv.first(), sv.last()) {
            (Some(&hi), Some(&lo)) => lo > rtol * hi,
            _ => true,
        };
        if ok {
            out.push(idx.clone());
            if out.len() >= limit {
                break;
            }
        }
        // next combination
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub c: Vec<usize>,
    pub c_bar: Vec<usize>,
    pub det_a_c: LogDet,
    pub det_b_cbar: LogDet,
    pub tau: LogDet,
    /// `log |invariant|`; filled in by [`invariant3d`].
    pub log_invariant: f64,
    pub invariant: f64,
    pub rank_a: RankInfo,
    pub rank_b: RankInfo,
    pub gauge_size: usize,
    pub experimental_gauge: bool,
    pub rank_rtol: f64,
    pub singular_rtol: f64,
}

/// `tau = (det B|_C̄)^2 / det A|_C` in log-magnitude form.
pub fn torsion3d(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &[usize]) -> Result<TorsionReport> {
    let n = a.nrows();
    let c_bar: Vec<usize> = (0..n).filter(|i| !c.contains(i)).collect();
    if c_bar.len() != b.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "complement of C has {} edges but the gauge basis has {} elements",
            c_bar.len(),
            b.ncols()
        )));
    }
    let a_c = submatrix(a, c, c);
    let sv = singular_values(&a_c);
    if let (Some(&hi), Some(&lo)) = (sv.first(), sv.last()) {
        if lo <= SINGULAR_RTOL * hi {
            return Err(Error::Singular(format!(
                "sigma_min/sigma_max = {:e}",
                lo / hi
            )));
        }
    }
    let all_cols: Vec<usize> = (0..b.ncols()).collect();
    let b_c = submatrix(b, &c_bar, &all_cols);
    let det_a_c = log_det(&a_c);
    let det_b_cbar = log_det(&b_c);
    if det_a_c.is_zero() {
        return Err(Error::Singular("det A|_C = 0".into()));
    }
    let tau = LogDet {
        log_abs: 2.0 * det_b_cbar.log_abs - det_a_c.log_abs,
        sign: if det_b_cbar.is_zero() {
            0
        } else {
            det_a_c.sign
        },
    };
    log::debug!("torsion sign {} (det A|_C sign {})", tau.sign, det_a_c.sign);
    Ok(TorsionReport {
        c: c.to_vec(),
        c_bar,
        det_a_c,
        det_b_cbar,
        tau,
        log_invariant: f64::NAN,
        invariant: f64::NAN,
        rank_a: rank_info(a),
        rank_b: rank_info(b),
        gauge_size: b.ncols(),
        experimental_gauge: false,
        rank_rtol: crate::linalg::RANK_RTOL,
        singular_rtol: SINGULAR_RTOL,
    })
}

/// `|tau * Π_edges l^2 / Π_tets 6V|` over quotient cells, in log form.
pub fn invariant3d(
    c: &SimplicialPreComplex,
    m: &MetricData,
    report: &mut TorsionReport,
) -> Result<f64> {
    if report.tau.is_zero() {
        return Err(Error::Singular("torsion vanishes".into()));
    }
    let mut log = report.tau.log_abs;
    for e in 0..c.num_edges() {
        log += m.sq_lengths[e].ln();
    }
    for t in 0..c.num_tops() {
        let v = cm_volume(3, &m.top_sq(c, t))?;
        log -= (6.0 * v).ln();
    }
    report.log_invariant = log;
    report.invariant = log.exp();
    Ok(report.invariant)
}

/// Full pipeline: gauge basis, `A`, `B`, pivot selection, torsion and invariant.
pub fn compute_invariant(
    c: &SimplicialPreComplex,
    m: &MetricData,
    p: &CoverPlacement,
    pivot_seed: Option<u64>,
) -> Result<TorsionReport> {
    let g = gauge_basis(p, &p.rep)?;
    compute_invariant_with(c, m, p, &g, pivot_seed)
}

pub fn compute_invariant_with(
    c: &SimplicialPreComplex,
    m: &MetricData,
    p: &CoverPlacement,
    g: &GaugeBasis,
    pivot_seed: Option<u64>,
) -> Result<TorsionReport> {
    let a = assemble_a3(c, m)?;
    let b = assemble_b3(c, p, g)?;
    let sel = select_c(&a, pivot_seed);
    let mut report = torsion3d(&a, &b, &sel)?;
    report.experimental_gauge = g.experimental();
    invariant3d(c, m, &mut report)?;
    Ok(report)
}

/// Edge labels of a pivot set, for reports.
pub fn edge_labels(c: &SimplicialPreComplex, edges: &[usize]) -> Vec<String> {
    edges
        .iter()
        .map(|&e| c.format_cell(CellId::new(1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_selects_nothing() {
        assert!(select_c(&DMatrix::zeros(3, 3), None).is_empty());
        assert_eq!(log_det(&DMatrix::zeros(0, 0)), LogDet::ONE);
    }

    #[test]
    fn diagonal_selection() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(select_c(&a, None), vec![0]);
    }

    #[test]
    fn pivot_sets_of_rank_one() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(admissible_pivot_sets(&a, 1e-12, 10), vec![vec![0], vec![1]]);
    }

    #[test]
    fn diagonal_toy_torsion() {
        let a = DMatrix::from_row_slice(1, 1, &[2.0]);
        let b = DMatrix::zeros(1, 0);
        let r = torsion3d(&a, &b, &[0]).unwrap();
        assert!((r.tau.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch_detected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let b = DMatrix::zeros(2, 0);
        assert!(matches!(
            torsion3d(&a, &b, &[0]),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
