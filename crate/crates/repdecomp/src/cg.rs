//! Clebsch–Gordan coefficients for tensor products of spin representations.
//!
//! The main pipeline decomposes the product representation into irreducible
//! bands, conjugates the total Jz into band coordinates to find the
//! highest-weight vectors, realizes those vectors as real columns, and fills
//! in the rest of each band by applying the total lowering operator with the
//! standard normalization. A direct ladder-operator construction, sharing no
//! code path with the decomposition, serves as an independent reference.
//!
//! For a multiplicity-free (J, M) sector the coefficient column is unique up
//! to sign, and the sign convention below pins it. When an irrep occurs with
//! multiplicity c > 1 only the c-dimensional coefficient subspace is
//! canonical; any orthonormal real basis of it is an equally valid answer, so
//! tables are compared by principal angles there, never entrywise.

use crate::groups::{GroupError, HalfInt, TensorRep};
use crate::numerics::{
    complex_from_real, fro_norm, hermitian_eig, principal_angles, CMatrix, NumericsError,
    TolerancePolicy,
};
use crate::smily::{decompose_su2, verify_block_diagonal, DecompositionReport, SmilyError};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

/// Per-axis angle count of the random grids behind the adapted states used by
/// [`cg_matrix_su2`].
const CG_N_ANGLES: usize = 7;

/// Support threshold of the per-column sign convention.
const SIGN_TOL: f64 = 1e-6;

/// Internal consistency gates of the realization steps. These sit far above
/// the residuals a verified decomposition produces and far below any real
/// coefficient, so tripping one means the run is unusable, not marginal.
const REALIZE_TOL: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CgError {
    #[error(transparent)]
    Smily(#[from] SmilyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("column realization failed: {detail}")]
    Realization { detail: String },
    #[error("coefficient tables are structurally different: {detail}")]
    StructureMismatch { detail: String },
    #[error("invalid coefficient table: {detail}")]
    InvalidTable { detail: String },
}

/// Labels of one coefficient column: total spin J, magnetic number M, and the
/// 1-based multiplicity index c separating repeated irreps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CgColumn {
    pub j: HalfInt,
    pub m: HalfInt,
    pub c: usize,
}

/// A labeled table of real Clebsch–Gordan coefficients.
///
/// Rows are the product basis in Kronecker order and carry (m₁, …, m_N)
/// tuples; columns carry (J, M, c) labels. `coeffs[(r, k)]` is the coefficient
/// of product state r in coupled state k.
#[derive(Debug, Clone)]
pub struct CgTable {
    pub factors: Vec<HalfInt>,
    pub row_labels: Vec<Vec<HalfInt>>,
    pub columns: Vec<CgColumn>,
    pub coeffs: DMatrix<f64>,
}

impl CgTable {
    /// Twice the m-sum of each row label.
    fn row_m_twice(&self) -> Vec<i64> {
        self.row_labels
            .iter()
            .map(|l| l.iter().map(|m| m.twice()).sum())
            .collect()
    }

    /// Checks the defining invariants: a square table with orthonormal
    /// columns, each column supported only on rows whose m-sum equals its M
    /// label (which makes it an exact total-Jz eigenvector).
    pub fn validate(&self, pol: &TolerancePolicy) -> Result<(), CgError> {
        let d = self.row_labels.len();
        let invalid = |detail: String| Err(CgError::InvalidTable { detail });
        if self.coeffs.nrows() != d || self.coeffs.ncols() != self.columns.len() {
            return invalid(format!(
                "coefficient matrix is {}×{} but there are {} row and {} column labels",
                self.coeffs.nrows(),
                self.coeffs.ncols(),
                d,
                self.columns.len()
            ));
        }
        if self.columns.len() != d {
            return invalid(format!("{} columns do not form a basis of dim {d}", self.columns.len()));
        }
        let gram = self.coeffs.transpose() * &self.coeffs;
        let gram_dev = (&gram - DMatrix::identity(d, d))
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        if gram_dev > pol.eq_tol {
            return invalid(format!("columns not orthonormal: Gram deviation {gram_dev:.3e}"));
        }
        let sums = self.row_m_twice();
        for (k, col) in self.columns.iter().enumerate() {
            let mut jz_dev2 = 0.0f64;
            for r in 0..d {
                let v = self.coeffs[(r, k)];
                let gap = sums[r] - col.m.twice();
                if gap != 0 && v.abs() > pol.eq_tol {
                    return invalid(format!(
                        "column {k} ({}, {}, {}) breaks the selection rule on row {r}: |{v:.3e}|",
                        col.j, col.m, col.c
                    ));
                }
                jz_dev2 += (gap as f64 / 2.0 * v).powi(2);
            }
            if jz_dev2.sqrt() > pol.eig_group_tol {
                return invalid(format!(
                    "column {k} is not a total-Jz eigenvector: residual {:.3e}",
                    jz_dev2.sqrt()
                ));
            }
        }
        Ok(())
    }

    /// JSON form: factor list plus one object per column with its labels and
    /// its coefficients on the rows allowed by the selection rule. Spins are
    /// written as fraction strings so keys and labels stay exact.
    pub fn to_json(&self) -> serde_json::Value {
        let sums = self.row_m_twice();
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, col)| {
                let entries: Vec<serde_json::Value> = (0..self.row_labels.len())
                    .filter(|&r| sums[r] == col.m.twice())
                    .map(|r| {
                        json!({
                            "row_m": self.row_labels[r]
                                .iter()
                                .map(|m| m.to_string())
                                .collect::<Vec<_>>(),
                            "value": self.coeffs[(r, k)],
                        })
                    })
                    .collect();
                json!({
                    "J": col.j.to_string(),
                    "M": col.m.to_string(),
                    "c": col.c,
                    "entries": entries,
                })
            })
            .collect();
        json!({
            "factors": self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "columns": columns,
        })
    }

    /// Flat CSV form, one coefficient per line:
    /// `J,M,c,m1,…,mN,value` for every row the selection rule allows.
    pub fn to_csv(&self) -> String {
        let n = self.factors.len();
        let mut out = String::from("J,M,c");
        for i in 1..=n {
            out.push_str(&format!(",m{i}"));
        }
        out.push_str(",value\n");
        let sums = self.row_m_twice();
        for (k, col) in self.columns.iter().enumerate() {
            for r in 0..self.row_labels.len() {
                if sums[r] != col.m.twice() {
                    continue;
                }
                out.push_str(&format!("{},{},{}", col.j, col.m, col.c));
                for m in &self.row_labels[r] {
                    out.push_str(&format!(",{m}"));
                }
                out.push_str(&format!(",{}\n", self.coeffs[(r, k)]));
            }
        }
        out
    }
}

/// Product-basis labels (m₁, …, m_N) in Kronecker order: first factor
/// slowest, m descending within each factor. Accepts a single factor.
fn product_labels(spins: &[HalfInt]) -> Result<Vec<Vec<HalfInt>>, CgError> {
    if spins.is_empty() {
        return Err(CgError::Group(GroupError::InvalidSpin(
            "at least one factor required".into(),
        )));
    }
    for &j in spins {
        if j.twice() < 0 {
            return Err(CgError::Group(GroupError::InvalidSpin(format!(
                "spin must be nonnegative, got {j}"
            ))));
        }
    }
    let dims: Vec<usize> = spins.iter().map(|j| (j.twice() + 1) as usize).collect();
    let total: usize = dims.iter().product();
    Ok((0..total)
        .map(|row| {
            let mut r = row;
            let mut label = vec![HalfInt::from_int(0); dims.len()];
            for (k, &dk) in dims.iter().enumerate().rev() {
                let digit = r % dk;
                r /= dk;
                label[k] = HalfInt::from_twice(spins[k].twice() - 2 * digit as i64);
            }
            label
        })
        .collect())
}

/// The total Jz of a spin tensor product: the Kronecker sum of the factor Jz
/// operators, i.e. the diagonal matrix of row m-sums.
pub fn total_jz(factors: &[HalfInt]) -> Result<CMatrix, CgError> {
    let labels = product_labels(factors)?;
    let d = labels.len();
    let sums: Vec<f64> = labels
        .iter()
        .map(|l| l.iter().map(|m| m.to_f64()).sum())
        .collect();
    Ok(CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(sums[r], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// The lowering operator of a single spin-j factor in the descending-m basis:
/// J₋|j,m⟩ = √((j+m)(j−m+1)) |j,m−1⟩.
fn lowering_block(j: HalfInt) -> DMatrix<f64> {
    let d = (j.twice() + 1) as usize;
    let jf = j.to_f64();
    DMatrix::from_fn(d, d, |r, c| {
        if r == c + 1 {
            let m = jf - c as f64;
            ((jf + m) * (jf - m + 1.0)).sqrt()
        } else {
            0.0
        }
    })
}

/// Total lowering operator: Σᵢ 𝟙⊗…⊗J₋⁽ⁱ⁾⊗…⊗𝟙. Real in the standard basis.
fn total_lowering(spins: &[HalfInt]) -> DMatrix<f64> {
    let dims: Vec<usize> = spins.iter().map(|j| (j.twice() + 1) as usize).collect();
    let d: usize = dims.iter().product();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..spins.len() {
        let mut term = DMatrix::identity(1, 1);
        for (k, &jk) in spins.iter().enumerate() {
            let factor = if k == i {
                lowering_block(jk)
            } else {
                DMatrix::identity(dims[k], dims[k])
            };
            term = term.kronecker(&factor);
        }
        out += term;
    }
    out
}

/// Generates the full M = J, J−1, …, −J chain from a unit highest-weight
/// vector by repeated lowering, dividing by √((J+M)(J−M+1)) at each step.
/// The lowering operator changes each row's m-sum by exactly one, so every
/// vector in the chain keeps exact weight support; the measured norm after
/// each step must come back ≈ 1 or the starting vector was not a
/// highest-weight state of this J.
fn lower_tower(
    jm: &DMatrix<f64>,
    hw: DVector<f64>,
    j_twice: i64,
) -> Result<Vec<DVector<f64>>, CgError> {
    let steps = j_twice as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = hw;
    cur /= cur.norm();
    out.push(cur.clone());
    for l in 0..steps {
        let m_twice = j_twice - 2 * l as i64;
        let a = (j_twice + m_twice) / 2;
        let b = (j_twice - m_twice + 2) / 2;
        cur = (jm * &cur) / ((a * b) as f64).sqrt();
        let norm = cur.norm();
        if (norm - 1.0).abs() > 1e-3 {
            return Err(CgError::Realization {
                detail: format!(
                    "lowering step to M = {} of J = {} produced norm {norm:.6}",
                    HalfInt::from_twice(m_twice - 2),
                    HalfInt::from_twice(j_twice)
                ),
            });
        }
        cur /= norm;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Flips a column so the first row (in Kronecker basis order, i.e. the
/// lexicographically largest m-tuple) carrying weight above the support
/// threshold is positive. On multiplicity-free sectors of two-factor products
/// this reproduces the Condon–Shortley orientation.
fn sign_fix_column(coeffs: &mut DMatrix<f64>, k: usize) {
    for r in 0..coeffs.nrows() {
        let v = coeffs[(r, k)];
        if v.abs() > SIGN_TOL {
            if v < 0.0 {
                for rr in 0..coeffs.nrows() {
                    coeffs[(rr, k)] = -coeffs[(rr, k)];
                }
            }
            return;
        }
    }
}

struct RawColumn {
    j_twice: i64,
    m_twice: i64,
    copy: usize,
    vec: DVector<f64>,
}

fn assemble_table(
    factors: &[HalfInt],
    row_labels: Vec<Vec<HalfInt>>,
    raw: Vec<RawColumn>,
) -> CgTable {
    let d = row_labels.len();
    let mut coeffs = DMatrix::zeros(d, raw.len());
    let mut columns = Vec::with_capacity(raw.len());
    for (k, rc) in raw.iter().enumerate() {
        coeffs.set_column(k, &rc.vec);
        columns.push(CgColumn {
            j: HalfInt::from_twice(rc.j_twice),
            m: HalfInt::from_twice(rc.m_twice),
            c: rc.copy,
        });
    }
    for k in 0..columns.len() {
        sign_fix_column(&mut coeffs, k);
    }
    CgTable {
        factors: factors.to_vec(),
        row_labels,
        columns,
        coeffs,
    }
}

/// Zeroes the entries of `v` on rows whose m-sum differs from `m_twice`,
/// erroring if those entries carried non-negligible weight.
fn restrict_to_weight(
    v: &mut DVector<Complex64>,
    sums: &[i64],
    m_twice: i64,
    context: &str,
) -> Result<(), CgError> {
    let mut off = 0.0f64;
    for r in 0..v.len() {
        if sums[r] != m_twice {
            off += v[r].norm_sqr();
            v[r] = Complex64::new(0.0, 0.0);
        }
    }
    if off.sqrt() > REALIZE_TOL {
        return Err(CgError::Realization {
            detail: format!("{context}: off-weight mass {:.3e}", off.sqrt()),
        });
    }
    Ok(())
}

/// Extracts real orthonormal vectors spanning the same subspace as the given
/// complex orthonormal columns. The span is closed under entrywise
/// conjugation (it is a joint eigenspace of real symmetric operators), so its
/// real points have the full dimension; a single vector has a real
/// representative reachable by a phase rotation, and for several vectors the
/// stacked real and imaginary parts expose the real span through an SVD.
fn realize_span(vectors: &[DVector<Complex64>], context: &str) -> Result<Vec<DVector<f64>>, CgError> {
    let c = vectors.len();
    let d = vectors[0].len();
    if c == 1 {
        let v = &vectors[0];
        let mut best = 0usize;
        for r in 0..d {
            if v[r].norm() > v[best].norm() {
                best = r;
            }
        }
        let phase = v[best].conj() / v[best].norm();
        let rotated: DVector<Complex64> = v.map(|z| z * phase);
        let im_mass = rotated.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        if im_mass > REALIZE_TOL {
            return Err(CgError::Realization {
                detail: format!("{context}: imaginary mass {im_mass:.3e} after phase rotation"),
            });
        }
        let mut real: DVector<f64> = rotated.map(|z| z.re);
        real /= real.norm();
        return Ok(vec![real]);
    }
    let mut stack = DMatrix::zeros(d, 2 * c);
    for (k, v) in vectors.iter().enumerate() {
        for r in 0..d {
            stack[(r, k)] = v[r].re;
            stack[(r, c + k)] = v[r].im;
        }
    }
    let svd = stack.svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let sv = &svd.singular_values;
    if sv[c - 1] < 1e-3 {
        return Err(CgError::Realization {
            detail: format!("{context}: real span ill-conditioned, σ_{c} = {:.3e}", sv[c - 1]),
        });
    }
    if sv.len() > c && sv[c] > REALIZE_TOL {
        return Err(CgError::Realization {
            detail: format!("{context}: real span exceeds dimension {c}, σ_{} = {:.3e}", c + 1, sv[c]),
        });
    }
    Ok((0..c).map(|k| u.column(k).into_owned()).collect())
}

/// Output of [`cg_matrix_su2`]: the real transformation, the labeled table
/// built from its columns, and the decomposition report behind it (with the
/// transformation and residuals of the delivered real matrix).
#[derive(Debug, Clone)]
pub struct CgSu2 {
    pub c_z: CMatrix,
    pub table: CgTable,
    pub report: DecompositionReport,
}

/// Computes a real orthogonal Clebsch–Gordan matrix for a tensor product of
/// spins, with columns labeled (J, M, c) and ordered band-major (copies within
/// a band, M descending within a copy).
///
/// The adapted-state decomposition supplies the band structure and a unitary
/// C₁ with C₁†U C₁ = ⊕ 𝟙_c ⊗ D. Conjugating total Jz by C₁ turns each band
/// into 𝟙_c ⊗ J̃ with J̃ the irrep's Jz in an unknown orthonormal basis; the
/// top eigenvector of J̃ per copy gives the highest-weight vectors, which are
/// realized as real columns and lowered down each band. Every output column
/// is supported exactly on its weight rows, so the conjugated total Jz is
/// diagonal with per-copy descending M, and the band spans are untouched, so
/// the off-band residual of the decomposition carries over.
pub fn cg_matrix_su2(
    factors: &[HalfInt],
    seed: u64,
    pol: &TolerancePolicy,
) -> Result<CgSu2, CgError> {
    let dec = decompose_su2(factors, CG_N_ANGLES, seed, pol)?;
    let d = dec.rep.dim();
    let row_labels = dec.rep.row_labels();
    let sums: Vec<i64> = row_labels
        .iter()
        .map(|l| l.iter().map(|m| m.twice()).sum())
        .collect();

    let jz = total_jz(factors)?;
    let c1 = &dec.report.c;
    let conj = c1.adjoint() * &jz * c1;
    let jz_scale = fro_norm(&jz).max(1.0);
    let jm = total_lowering(factors);

    let ranges = dec.report.structure.band_ranges();
    let mut raw: Vec<RawColumn> = Vec::with_capacity(d);
    for (band, range) in ranges.iter().enumerate() {
        let (c_mult, n_dim) = dec.report.structure.irreps[band];
        let j_twice = (n_dim - 1) as i64;

        // The band of C₁†·Jz·C₁ must be 𝟙_c ⊗ J̃ (same J̃ in every copy).
        let block = conj
            .view((range.start, range.start), (c_mult * n_dim, c_mult * n_dim))
            .into_owned();
        let jt = block.view((0, 0), (n_dim, n_dim)).into_owned();
        let mut pattern_dev2 = 0.0f64;
        for q in 0..c_mult {
            for p in 0..c_mult {
                let sub = block.view((q * n_dim, p * n_dim), (n_dim, n_dim));
                let dev = if q == p { &jt - sub } else { -sub.into_owned() };
                pattern_dev2 += dev.norm_squared();
            }
        }
        // The q = p = 0 term vanishes by construction; the rest measures the
        // copy pattern.
        if pattern_dev2.sqrt() > REALIZE_TOL * jz_scale {
            return Err(CgError::Realization {
                detail: format!(
                    "band {band}: conjugated Jz deviates from the copy pattern by {:.3e}",
                    pattern_dev2.sqrt()
                ),
            });
        }

        let jt_herm = (&jt + jt.adjoint()).map(|z| z * 0.5);
        let (vals, vecs) = hermitian_eig(&jt_herm, pol)?;
        for (i, v) in vals.iter().enumerate() {
            let expected = (-j_twice + 2 * i as i64) as f64 / 2.0;
            if (v - expected).abs() > REALIZE_TOL * jz_scale {
                return Err(CgError::Realization {
                    detail: format!(
                        "band {band}: Jz eigenvalue {v:.6} where {expected} was required"
                    ),
                });
            }
        }
        let v_top = vecs.column(n_dim - 1);

        // Highest-weight vector of copy q in product coordinates.
        let mut hws: Vec<DVector<Complex64>> = Vec::with_capacity(c_mult);
        for q in 0..c_mult {
            let mut hw = DVector::zeros(d);
            for r in 0..n_dim {
                let col = c1.column(range.start + q * n_dim + r);
                hw.axpy(v_top[r], &col, Complex64::new(1.0, 0.0));
            }
            restrict_to_weight(&mut hw, &sums, j_twice, &format!("band {band} copy {q}"))?;
            hws.push(hw);
        }

        let real_hws = realize_span(&hws, &format!("band {band} highest-weight sector"))?;
        for (q, hw) in real_hws.into_iter().enumerate() {
            let tower = lower_tower(&jm, hw, j_twice)?;
            for (l, vec) in tower.into_iter().enumerate() {
                raw.push(RawColumn {
                    j_twice,
                    m_twice: j_twice - 2 * l as i64,
                    copy: q + 1,
                    vec,
                });
            }
        }
    }

    let table = assemble_table(factors, row_labels, raw);
    table.validate(pol)?;
    let c_z = complex_from_real(&table.coeffs);

    let block_res = verify_block_diagonal(&c_z, &dec.matrices, &dec.report.structure);
    let mut report = dec.report.clone();
    report.c = c_z.clone();
    report.residuals.off_block_max = block_res.off_block_max;
    report.residuals.unitarity = crate::numerics::unitarity_residual(&c_z)?;

    Ok(CgSu2 {
        c_z,
        table,
        report,
    })
}

/// Reference table from the textbook ladder construction: in each weight
/// sector the highest-weight vectors of spin J are the null space of the
/// total raising operator restricted to that sector, and lowering generates
/// the rest. Entirely real arithmetic, no random input, and no shared code
/// with the decomposition pipeline.
pub fn ladder_oracle(factors: &[HalfInt]) -> Result<CgTable, CgError> {
    TensorRep::new(factors)?; // validates (≥ 2 nonnegative spins)
    let row_labels = product_labels(factors)?;
    let d = row_labels.len();
    let sums: Vec<i64> = row_labels
        .iter()
        .map(|l| l.iter().map(|m| m.twice()).sum())
        .collect();
    let jm = total_lowering(factors);
    let jp = jm.transpose();

    let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (r, &s) in sums.iter().enumerate() {
        sectors.entry(s).or_default().push(r);
    }
    let sector_dim = |m_twice: i64| sectors.get(&m_twice).map_or(0, |v| v.len());

    let j_max_twice: i64 = factors.iter().map(|j| j.twice()).sum();
    let mut raw: Vec<RawColumn> = Vec::with_capacity(d);
    let mut j_twice = j_max_twice;
    while j_twice >= 0 {
        let n_here = sector_dim(j_twice);
        let n_above = sector_dim(j_twice + 2);
        if n_here > n_above {
            let mult = n_here - n_above;
            let cols = &sectors[&j_twice];
            let null_basis = if n_above == 0 {
                DMatrix::identity(n_here, n_here)
            } else {
                // Null space of J₊ restricted to this sector, as the
                // small-eigenvalue eigenvectors of the normal matrix.
                let rows = &sectors[&(j_twice + 2)];
                let a = DMatrix::from_fn(rows.len(), cols.len(), |i, k| jp[(rows[i], cols[k])]);
                let normal = a.transpose() * &a;
                let eig = nalgebra::SymmetricEigen::new(normal);
                let mut order: Vec<usize> = (0..n_here).collect();
                order.sort_by(|&i, &k| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[k]));
                let scale = eig.eigenvalues[order[n_here - 1]].max(1.0);
                if eig.eigenvalues[order[mult - 1]] > 1e-10 * scale
                    || eig.eigenvalues[order[mult]] < 1e-6 * scale
                {
                    return Err(CgError::Realization {
                        detail: format!(
                            "raising operator null space at M = {} is not {mult}-dimensional",
                            HalfInt::from_twice(j_twice)
                        ),
                    });
                }
                DMatrix::from_fn(n_here, mult, |r, k| eig.eigenvectors[(r, order[k])])
            };
            for q in 0..mult {
                let mut hw = DVector::zeros(d);
                for (k, &r) in cols.iter().enumerate() {
                    hw[r] = null_basis[(k, q)];
                }
                let tower = lower_tower(&jm, hw, j_twice)?;
                for (l, vec) in tower.into_iter().enumerate() {
                    raw.push(RawColumn {
                        j_twice,
                        m_twice: j_twice - 2 * l as i64,
                        copy: q + 1,
                        vec,
                    });
                }
            }
        }
        j_twice -= 2;
    }
    Ok(assemble_table(factors, row_labels, raw))
}

/// Result of comparing two coefficient tables over the same factors.
#[derive(Debug, Clone, Copy)]
pub struct CgMatchReport {
    pub tol: f64,
    /// Largest column deviation (up to sign) over multiplicity-1 sectors.
    pub max_column_deviation: f64,
    /// Largest principal angle (radians) over multiplicity > 1 sectors.
    pub max_principal_angle: f64,
    pub matched: bool,
}

/// Compares two tables sector by sector: multiplicity-free (J, M) columns
/// must agree up to sign; higher-multiplicity sectors are compared as
/// subspaces through principal angles, because no entrywise ground truth
/// exists there. Mismatched factors or (J, M, multiplicity) structure is an
/// error; numerical disagreement is reported, not raised.
pub fn compare_cg(a: &CgTable, b: &CgTable, tol: f64) -> Result<CgMatchReport, CgError> {
    let fa: Vec<i64> = a.factors.iter().map(|f| f.twice()).collect();
    let fb: Vec<i64> = b.factors.iter().map(|f| f.twice()).collect();
    if fa != fb {
        return Err(CgError::StructureMismatch {
            detail: format!(
                "factor lists differ: ({}) vs ({})",
                a.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "),
                b.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
            ),
        });
    }
    let group = |t: &CgTable| -> BTreeMap<(i64, i64), Vec<usize>> {
        let mut map: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (k, col) in t.columns.iter().enumerate() {
            map.entry((col.j.twice(), col.m.twice())).or_default().push(k);
        }
        map
    };
    let ga = group(a);
    let gb = group(b);
    if ga.keys().collect::<Vec<_>>() != gb.keys().collect::<Vec<_>>()
        || ga.iter().any(|(k, v)| gb[k].len() != v.len())
    {
        let describe = |g: &BTreeMap<(i64, i64), Vec<usize>>| -> String {
            g.iter()
                .map(|(&(j, m), v)| {
                    format!(
                        "({}, {})×{}",
                        HalfInt::from_twice(j),
                        HalfInt::from_twice(m),
                        v.len()
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        return Err(CgError::StructureMismatch {
            detail: format!("sectors {} vs {}", describe(&ga), describe(&gb)),
        });
    }

    let d = a.row_labels.len();
    let mut max_dev = 0.0f64;
    let mut max_angle = 0.0f64;
    for (key, cols_a) in &ga {
        let cols_b = &gb[key];
        if cols_a.len() == 1 {
            let va = a.coeffs.column(cols_a[0]);
            let vb = b.coeffs.column(cols_b[0]);
            let diff = (&va - &vb).norm();
            let sum = (&va + &vb).norm();
            max_dev = max_dev.max(diff.min(sum));
        } else {
            let c = cols_a.len();
            let qa = DMatrix::from_fn(d, c, |r, k| a.coeffs[(r, cols_a[k])]);
            let qb = DMatrix::from_fn(d, c, |r, k| b.coeffs[(r, cols_b[k])]);
            let angles = principal_angles(&complex_from_real(&qa), &complex_from_real(&qb));
            if let Some(&worst) = angles.last() {
                max_angle = max_angle.max(worst);
            }
        }
    }
    Ok(CgMatchReport {
        tol,
        max_column_deviation: max_dev,
        max_principal_angle: max_angle,
        matched: max_dev <= tol && max_angle <= tol,
    })
}
