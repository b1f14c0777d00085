//! Dense linear-algebra helpers: log-magnitude determinants, rank decisions
//! and pivot-set selection.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Relative singular-value threshold used for every rank decision.
pub const RANK_RTOL: f64 = 1e-8;

/// Determinant stored as `sign * exp(log_abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogDet {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogDet {
    pub const ONE: LogDet = LogDet {
        log_abs: 0.0,
        sign: 1,
    };

    pub fn value(&self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

/// Determinant via LU with full pivoting. The empty matrix has determinant 1.
pub fn log_det(m: &DMatrix<f64>) -> LogDet {
    assert_eq!(m.nrows(), m.ncols(), "log_det of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return LogDet::ONE;
    }
    let mut a = m.clone();
    let mut sign = 1i8;
    let mut log_abs = 0.0;
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, 0.0f64);
        for i in k..n {
            for j in k..n {
                let v = a[(i, j)].abs();
                if v > best {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best == 0.0 {
            return LogDet {
                log_abs: f64::NEG_INFINITY,
                sign: 0,
            };
        }
        if pr != k {
            a.swap_rows(pr, k);
            sign = -sign;
        }
        if pc != k {
            a.swap_columns(pc, k);
            sign = -sign;
        }
        let piv = a[(k, k)];
        if piv < 0.0 {
            sign = -sign;
        }
        log_abs += piv.abs().ln();
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
    }
    LogDet { log_abs, sign }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank decision with its separating gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankInfo {
    pub rank: usize,
    /// `sigma_rank / sigma_{rank+1}`; infinite when nothing lies below the cut.
    pub gap: f64,
    pub largest: f64,
}

pub fn rank_info(m: &DMatrix<f64>) -> RankInfo {
    let sv = singular_values(m);
    rank_from_singular_values(&sv)
}

pub fn rank_from_singular_values(sv: &[f64]) -> RankInfo {
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return RankInfo {
            rank: 0,
            gap: f64::INFINITY,
            largest,
        };
    }
    let rank = sv.iter().filter(|&&s| s > RANK_RTOL * largest).count();
    let gap = if rank == sv.len() || sv[rank] == 0.0 {
        f64::INFINITY
    } else {
        sv[rank - 1] / sv[rank]
    };
    RankInfo { rank, gap, largest }
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Picks an index among candidates whose score is within `ratio` of the best.
fn pick<R: Rng>(scored: &[(f64, usize)], ratio: f64, rng: Option<&mut R>) -> usize {
    let best = scored.iter().map(|s| s.0).fold(0.0f64, f64::max);
    match rng {
        None => {
            scored
                .iter()
                .find(|s| s.0 == best)
                .expect("empty candidate list")
                .1
        }
        Some(rng) => {
            let good: Vec<usize> = scored
                .iter()
                .filter(|s| s.0 >= ratio * best)
                .map(|s| s.1)
                .collect();
            good[rng.random_range(0..good.len())]
        }
    }
}

/// Selects `r` row/column pivots by Gaussian elimination with full pivoting.
///
/// With an RNG, each step picks uniformly among entries within a factor 0.5 of
/// the largest remaining one, which yields different admissible pivot sets.
pub fn full_pivot_select<R: Rng>(
    m: &DMatrix<f64>,
    r: usize,
    mut rng: Option<&mut R>,
) -> (Vec<usize>, Vec<usize>) {
    let mut a = m.clone();
    let mut rows = Vec::with_capacity(r);
    let mut cols = Vec::with_capacity(r);
    for _ in 0..r {
        let mut scored = Vec::new();
        for i in 0..a.nrows() {
            if rows.contains(&i) {
                continue;
            }
            for j in 0..a.ncols() {
                if cols.contains(&j) {
                    continue;
                }
                scored.push((a[(i, j)].abs(), i * a.ncols() + j));
            }
        }
        if scored.is_empty() {
            break;
        }
        let id = pick(&scored, 0.5, rng.as_deref_mut());
        let (pr, pc) = (id / a.ncols(), id % a.ncols());
        let piv = a[(pr, pc)];
        if piv == 0.0 {
            break;
        }
        for i in 0..a.nrows() {
            if i == pr || rows.contains(&i) {
                continue;
            }
            let f = a[(i, pc)] / piv;
            if f != 0.0 {
                for j in 0..a.ncols() {
                    let v = a[(pr, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        rows.push(pr);
        cols.push(pc);
    }
    (rows, cols)
}

/// Selects `r` indices `C` such that the principal block `A|_C` of a symmetric
/// matrix is nonsingular.
///
/// Greedy symmetric elimination on the Schur complement: a 1x1 diagonal pivot
/// when one is large enough, otherwise the best 2x2 principal pivot.
pub fn symmetric_pivot_select<R: Rng>(
    a: &DMatrix<f64>,
    r: usize,
    mut rng: Option<&mut R>,
) -> Vec<usize> {
    let n = a.nrows();
    let mut s = a.clone();
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    let scale = max_abs(a);
    while chosen.len() < r {
        let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
        let diag: Vec<(f64, usize)> = free.iter().map(|&i| (s[(i, i)].abs(), i)).collect();
        let best_diag = diag.iter().map(|d| d.0).fold(0.0f64, f64::max);
        let best_off = free
            .iter()
            .flat_map(|&i| free.iter().map(move |&j| (i, j)))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| s[(i, j)].abs())
            .fold(0.0f64, f64::max);
        let block: Vec<usize> = if best_diag >= 0.1 * best_off || chosen.len() + 1 == r {
            if best_diag <= 1e-300 * scale.max(1e-300) {
                break;
            }
            vec![pick(&diag, 0.5, rng.as_deref_mut())]
        } else {
            let mut pairs = Vec::new();
            let mut ids = Vec::new();
            for (x, &i) in free.iter().enumerate() {
                for &j in &free[x + 1..] {
                    let d = (s[(i, i)] * s[(j, j)] - s[(i, j)] * s[(j, i)]).abs();
                    pairs.push((d, ids.len()));
                    ids.push((i, j));
                }
            }
            let (i, j) = ids[pick(&pairs, 0.5, rng.as_deref_mut())];
            vec![i, j]
        };
        // Schur complement update
        let pblock = submatrix(&s, &block, &block);
        let inv = match pblock.clone().try_inverse() {
            Some(inv) => inv,
            None => break,
        };
        let rest: Vec<usize> = (0..n)
            .filter(|i| !chosen.contains(i) && !block.contains(i))
            .collect();
        let cpart = submatrix(&s, &rest, &block);
        let rpart = submatrix(&s, &block, &rest);
        let update = &cpart * &inv * &rpart;
        for (x, &i) in rest.iter().enumerate() {
            for (y, &j) in rest.iter().enumerate() {
                s[(i, j)] -= update[(x, y)];
            }
        }
        chosen.extend(block);
    }
    chosen.sort();
    chosen
}

/// Rigid motion `x -> rotation * x + translation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub rotation: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl Isometry {
    pub fn identity(d: usize) -> Self {
        Isometry {
            rotation: DMatrix::identity(d, d),
            translation: DVector::zeros(d),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.rotation * x + &self.translation
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            rotation: &self.rotation * &other.rotation,
            translation: &self.rotation * &other.translation + &self.translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let rt = self.rotation.transpose();
        let t = -(&rt * &self.translation);
        Isometry {
            rotation: rt,
            translation: t,
        }
    }

    /// `self^n` for any integer `n`.
    pub fn power(&self, n: i64) -> Isometry {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Isometry::identity(self.translation.len());
        for _ in 0..n.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }
}

/// Least-squares proper rigid motion mapping `from[i]` onto `to[i]` (Kabsch).
pub fn fit_isometry(from: &[DVector<f64>], to: &[DVector<f64>]) -> Isometry {
    assert_eq!(from.len(), to.len());
    assert!(!from.is_empty());
    let d = from[0].len();
    let n = from.len() as f64;
    let cf = from.iter().fold(DVector::zeros(d), |acc, x| acc + x) / n;
    let ct = to.iter().fold(DVector::zeros(d), |acc, x| acc + x) / n;
    let mut h = DMatrix::zeros(d, d);
    for (x, y) in from.iter().zip(to) {
        h += (y - &ct) * (x - &cf).transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    let mut corr = DMatrix::identity(d, d);
    if (&u * &vt).determinant() < 0.0 {
        corr[(d - 1, d - 1)] = -1.0;
    }
    let rotation = &u * corr * &vt;
    let translation = &ct - &rotation * &cf;
    Isometry {
        rotation,
        translation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn log_det_matches_direct_determinant() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, 1.0, 3.0, -2.0, 0.0, 4.0, 1.0]);
        let ld = log_det(&m);
        assert!((ld.value() - m.determinant()).abs() < 1e-12);
        assert_eq!(log_det(&DMatrix::zeros(0, 0)), LogDet::ONE);
        assert!(log_det(&DMatrix::zeros(2, 2)).is_zero());
    }

    #[test]
    fn symmetric_selection_handles_zero_diagonal() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let c = symmetric_pivot_select::<ChaCha8Rng>(&a, 2, None);
        assert_eq!(c, vec![0, 1]);
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(symmetric_pivot_select::<ChaCha8Rng>(&d, 1, None), vec![0]);
    }

    #[test]
    fn randomized_selection_is_admissible() {
        let v = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]);
        let w = DVector::from_vec(vec![0.0, 1.0, 1.0, -3.0]);
        let a = &v * v.transpose() - &w * w.transpose();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let c = symmetric_pivot_select(&a, 2, Some(&mut rng));
            assert_eq!(c.len(), 2);
            assert!(log_det(&submatrix(&a, &c, &c)).log_abs > -20.0);
        }
    }

    #[test]
    fn isometry_fit_recovers_rotation() {
        let th: f64 = 0.7;
        let rot = DMatrix::from_row_slice(
            3,
            3,
            &[
                th.cos(),
                -th.sin(),
                0.0,
                th.sin(),
                th.cos(),
                0.0,
                0.0,
                0.0,
                1.0,
            ],
        );
        let g = Isometry {
            rotation: rot,
            translation: DVector::from_vec(vec![0.1, -0.3, 2.0]),
        };
        let pts: Vec<DVector<f64>> = (0..5)
            .map(|i| DVector::from_vec(vec![i as f64, (i * i) as f64 * 0.3, 1.0 - i as f64]))
            .collect();
        let img: Vec<_> = pts.iter().map(|p| g.apply(p)).collect();
        let fit = fit_isometry(&pts, &img);
        assert!((fit.rotation - &g.rotation).abs().max() < 1e-10);
        assert!((g.power(3).apply(&pts[1]) - g.apply(&g.apply(&g.apply(&pts[1])))).norm() < 1e-12);
        assert!((g.power(-1).apply(&img[2]) - &pts[2]).norm() < 1e-12);
    }
}
