//! Finite groups as Cayley tables, their regular representations, and SU(2)
//! angular-momentum representations.
//!
//! Group elements are indexed `0..n` internally with the identity at index 0;
//! the text interchange format is 1-based with the identity as element 1.

use crate::numerics::{hermitian_eig, max_abs, unitarity_residual, CMatrix, TolerancePolicy};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("identity is not the first element: {0}")]
    IdentityNotFirst(String),
    #[error("invalid spin: {0}")]
    InvalidSpin(String),
}

/// A finite group given by its Cayley table.
///
/// `product(i, j)` is the index of `g_i · g_j`; index 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
}

impl GroupTable {
    /// Builds a table from a row-major product array (0-based indices) and
    /// validates the group axioms.
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Parse("group order must be positive".into()));
        }
        if table.len() != n * n {
            return Err(GroupError::Parse(format!(
                "expected {} products, got {}",
                n * n,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= n) {
            return Err(GroupError::Parse(format!(
                "product index {} out of range 1..={}",
                bad + 1,
                n
            )));
        }
        let g = Self { n, table };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let n = self.n;
        for k in 0..n {
            if self.product(0, k) != k || self.product(k, 0) != k {
                return Err(GroupError::IdentityNotFirst(format!(
                    "element 1 does not act as the identity on element {}",
                    k + 1
                )));
            }
        }
        // Latin square: every row and column is a permutation.
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for i in 0..n {
            seen_row.fill(false);
            seen_col.fill(false);
            for j in 0..n {
                let r = self.product(i, j);
                let c = self.product(j, i);
                if seen_row[r] {
                    return Err(GroupError::NotAGroup(format!(
                        "row {} repeats entry {}",
                        i + 1,
                        r + 1
                    )));
                }
                if seen_col[c] {
                    return Err(GroupError::NotAGroup(format!(
                        "column {} repeats entry {}",
                        i + 1,
                        c + 1
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // Associativity: exhaustive for small orders, sampled beyond.
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if self.product(self.product(i, j), k) != self.product(i, self.product(j, k))
                        {
                            return Err(GroupError::NotAGroup(format!(
                                "associativity fails at ({}, {}, {})",
                                i + 1,
                                j + 1,
                                k + 1
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9E3779B97F4A7C15u64;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize
            };
            for _ in 0..64 * 64 * 64 {
                let (i, j, k) = (next() % n, next() % n, next() % n);
                if self.product(self.product(i, j), k) != self.product(i, self.product(j, k)) {
                    return Err(GroupError::NotAGroup(format!(
                        "associativity fails at ({}, {}, {})",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Index of `g_i · g_j` (0-based).
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.n + j]
    }

    /// Index of `g_i⁻¹`.
    pub fn inverse(&self, i: usize) -> usize {
        (0..self.n)
            .find(|&j| self.product(i, j) == 0)
            .expect("validated table has inverses")
    }

    /// The cyclic group of order `n` (element `k` is the rotation by `k`).
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Parse("cyclic group order must be positive".into()));
        }
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = (i + j) % n;
            }
        }
        Self::new(n, table)
    }

    /// The symmetric group S3, generated by the transpositions (12) and (23).
    /// Generator indices are returned by [`s3_generators`].
    pub fn s3() -> Self {
        from_permutations(3, &[vec![1, 0, 2], vec![0, 2, 1]])
            .expect("S3 construction is a group")
    }

    /// The alternating group A4, generated by the double transpositions
    /// (12)(34), (13)(24) and the 3-cycle (123). Generator indices are
    /// returned by [`a4_generators`].
    pub fn a4() -> Self {
        from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![1, 2, 0, 3]])
            .expect("A4 construction is a group")
    }
}

/// Indices (0-based) of the S3 generators a1 = (12), a2 = (23) inside
/// [`GroupTable::s3`].
pub fn s3_generators() -> (usize, usize) {
    (1, 2)
}

/// Indices (0-based) of the A4 generators a = (12)(34), b = (13)(24),
/// c = (123) inside [`GroupTable::a4`].
pub fn a4_generators() -> (usize, usize, usize) {
    (1, 2, 3)
}

/// Closes a set of generator permutations (images of 0..deg) into a group and
/// returns its Cayley table. Elements are ordered breadth-first from the
/// identity, so generator `k` lands at index `k + 1`.
fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<GroupTable, GroupError> {
    let compose = |f: &[usize], g: &[usize]| -> Vec<usize> {
        g.iter().map(|&x| f[x]).collect()
    };
    let identity: Vec<usize> = (0..degree).collect();
    let mut elements = vec![identity];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for gen in generators {
            let next = compose(&current, gen);
            if !elements.contains(&next) {
                elements.push(next);
            }
        }
        frontier += 1;
    }
    let n = elements.len();
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let prod = compose(&elements[i], &elements[j]);
            table[i * n + j] = elements
                .iter()
                .position(|e| *e == prod)
                .expect("closure contains all products");
        }
    }
    GroupTable::new(n, table)
}

/// Parses the text interchange format: first line the order `n`, then `n`
/// lines of `n` whitespace-separated 1-based product indices. Lines starting
/// with `#` are comments. The identity must be element 1.
pub fn load_group_table(text: &str) -> Result<GroupTable, GroupError> {
    let mut tokens = text
        .lines()
        .filter(|line| !line.trim_start().starts_with('#'))
        .flat_map(|line| line.split_whitespace());
    let n: usize = tokens
        .next()
        .ok_or_else(|| GroupError::Parse("empty input".into()))?
        .parse()
        .map_err(|e| GroupError::Parse(format!("order: {e}")))?;
    if n == 0 {
        return Err(GroupError::Parse("group order must be positive".into()));
    }
    let mut table = Vec::with_capacity(n * n);
    for tok in tokens.by_ref().take(n * n) {
        let v: usize = tok
            .parse()
            .map_err(|e| GroupError::Parse(format!("product entry '{tok}': {e}")))?;
        if v == 0 || v > n {
            return Err(GroupError::Parse(format!(
                "product entry {v} out of range 1..={n}"
            )));
        }
        table.push(v - 1);
    }
    if table.len() < n * n {
        return Err(GroupError::Parse(format!(
            "expected {} product entries, found {}",
            n * n,
            table.len()
        )));
    }
    if tokens.next().is_some() {
        return Err(GroupError::Parse("trailing data after product table".into()));
    }
    GroupTable::new(n, table)
}

/// A finite group together with one unitary matrix per element.
#[derive(Debug, Clone)]
pub struct FiniteRep {
    pub group: GroupTable,
    pub matrices: Vec<CMatrix>,
}

impl FiniteRep {
    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// Checks identity, unitarity, and the homomorphism property on every
    /// pair of elements.
    pub fn validate(&self, pol: &TolerancePolicy) -> Result<(), GroupError> {
        let n = self.group.order();
        if self.matrices.len() != n {
            return Err(GroupError::NotAGroup(format!(
                "expected {n} matrices, got {}",
                self.matrices.len()
            )));
        }
        let d = self.dim();
        if max_abs(&(&self.matrices[0] - CMatrix::identity(d, d))) > pol.eq_tol {
            return Err(GroupError::NotAGroup(
                "matrix of the identity element is not the identity".into(),
            ));
        }
        for (k, u) in self.matrices.iter().enumerate() {
            let res = unitarity_residual(u).map_err(|_| {
                GroupError::NotAGroup(format!("matrix {} is not square", k + 1))
            })?;
            if res > 1e-8 {
                return Err(GroupError::NotAGroup(format!(
                    "matrix {} unitarity residual {res:.3e}",
                    k + 1
                )));
            }
        }
        let res = self.homomorphism_residual();
        if res > 1e-8 {
            return Err(GroupError::NotAGroup(format!(
                "homomorphism residual {res:.3e}"
            )));
        }
        Ok(())
    }

    /// Max over all pairs of `‖U(g_i)U(g_j) − U(g_i g_j)‖_F`.
    pub fn homomorphism_residual(&self) -> f64 {
        let n = self.group.order();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let prod = &self.matrices[i] * &self.matrices[j];
                let expected = &self.matrices[self.group.product(i, j)];
                worst = worst.max((prod - expected).norm());
            }
        }
        worst
    }
}

/// The left regular representation: `U(g_k)` is the permutation matrix with
/// `[U(g_k)]_{ij} = 1` exactly when `g_i = g_k · g_j`.
pub fn regular_representation(group: &GroupTable) -> FiniteRep {
    let n = group.order();
    let matrices = (0..n)
        .map(|k| {
            let mut u = CMatrix::zeros(n, n);
            for j in 0..n {
                u[(group.product(k, j), j)] = Complex64::new(1.0, 0.0);
            }
            u
        })
        .collect();
    FiniteRep {
        group: group.clone(),
        matrices,
    }
}

/// The division table `T(i, j) = index of g_i · g_j⁻¹`, the index pattern of
/// an adapted state of the regular representation: filling positions `(i, j)`
/// with `φ(T(i,j))` realizes the sum `Σ_k φ(k) U(g_k)`.
pub fn paper_t_table(group: &GroupTable) -> Vec<Vec<usize>> {
    let n = group.order();
    let inverses: Vec<usize> = (0..n).map(|j| group.inverse(j)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| group.product(i, inverses[j])).collect())
        .collect()
}

/// A half-integer (spin, magnetic quantum number) stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_int(v: i64) -> Self {
        Self { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Parses "p", "p/1", or "p/2"; other denominators are rejected.
    pub fn parse(s: &str) -> Result<Self, GroupError> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, "1"),
            Some((n, d)) => (n, d),
        };
        let p: i64 = num
            .parse()
            .map_err(|e| GroupError::InvalidSpin(format!("'{s}': {e}")))?;
        match den.trim() {
            "1" => Ok(Self::from_int(p)),
            "2" => Ok(Self::from_twice(p)),
            other => Err(GroupError::InvalidSpin(format!(
                "'{s}': denominator {other} is not 1 or 2"
            ))),
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Rotation angles about the x, y, z axes, each in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AngleTriple {
    const TAU: f64 = 2.0 * std::f64::consts::PI;

    /// Wraps each angle into `[0, 2π)`.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let wrap = |a: f64| {
            let r = a.rem_euclid(Self::TAU);
            if r == Self::TAU {
                0.0
            } else {
                r
            }
        };
        Self {
            x: wrap(x),
            y: wrap(y),
            z: wrap(z),
        }
    }

    pub fn zero() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }
}

/// The spin-j representation of the su(2) generators on the basis
/// |j,j⟩, |j,j−1⟩, …, |j,−j⟩.
#[derive(Debug, Clone)]
pub struct Su2Irrep {
    pub j: HalfInt,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl Su2Irrep {
    pub fn dim(&self) -> usize {
        (self.j.twice() + 1) as usize
    }

    /// The m value of basis row `r` (descending from j).
    pub fn m_of_row(&self, r: usize) -> HalfInt {
        HalfInt::from_twice(self.j.twice() - 2 * r as i64)
    }
}

/// Builds the spin-j generators from the ladder matrix elements
/// ⟨j,m±1|J±|j,m⟩ = √((j∓m)(j±m+1)).
pub fn su2_irrep(j: HalfInt) -> Result<Su2Irrep, GroupError> {
    if j.twice() < 0 {
        return Err(GroupError::InvalidSpin(format!(
            "spin must be nonnegative, got {j}"
        )));
    }
    let d = (j.twice() + 1) as usize;
    let jf = j.to_f64();
    let mut jp = CMatrix::zeros(d, d); // J₊: superdiagonal
    for r in 1..d {
        let m = jf - r as f64; // raise from |j,m⟩ (row r) to |j,m+1⟩ (row r−1)
        jp[(r - 1, r)] = Complex64::new(((jf - m) * (jf + m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).map(|z| z * 0.5);
    let jy = (&jp - &jm).map(|z| z * Complex64::new(0.0, -0.5));
    let jz = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(jf - r as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(Su2Irrep { j, jx, jy, jz })
}

/// The rotation `U(θ) = exp(i(θx·Jx + θy·Jy + θz·Jz))`, evaluated through the
/// eigendecomposition of the Hermitian exponent so the result is unitary to
/// machine precision.
pub fn su2_element(rep: &Su2Irrep, theta: AngleTriple) -> CMatrix {
    su2_element_raw(rep, theta.x, theta.y, theta.z)
}

/// Same exponential with unconstrained angles. The exponent mixes
/// non-commuting generators, so the rotation is not componentwise 2π-periodic;
/// identities like U(θ)² = U(2θ) or U(θ)† = U(−θ) need the raw doubled or
/// negated angles rather than their wrapped representatives.
pub fn su2_element_raw(rep: &Su2Irrep, x: f64, y: f64, z: f64) -> CMatrix {
    let h = &rep.jx.map(|v| v * x) + &rep.jy.map(|v| v * y) + &rep.jz.map(|v| v * z);
    let pol = TolerancePolicy::default();
    let (vals, vecs) = hermitian_eig(&h, &pol).expect("generator combination is Hermitian");
    let phases = CMatrix::from_fn(vals.len(), vals.len(), |r, c| {
        if r == c {
            Complex64::from_polar(1.0, vals[r])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &vecs * phases * vecs.adjoint()
}

/// A tensor product of spin representations evaluated on the diagonal
/// subgroup: every factor receives the same angle triple.
#[derive(Debug, Clone)]
pub struct TensorRep {
    pub factors: Vec<Su2Irrep>,
}

impl TensorRep {
    pub fn new(spins: &[HalfInt]) -> Result<Self, GroupError> {
        if spins.len() < 2 {
            return Err(GroupError::InvalidSpin(
                "a tensor product needs at least 2 factors".into(),
            ));
        }
        let factors = spins.iter().map(|&j| su2_irrep(j)).collect::<Result<_, _>>()?;
        Ok(Self { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn element(&self, theta: AngleTriple) -> CMatrix {
        self.element_raw(theta.x, theta.y, theta.z)
    }

    /// Evaluation at unconstrained angles; see [`su2_element_raw`].
    pub fn element_raw(&self, x: f64, y: f64, z: f64) -> CMatrix {
        let mut out = su2_element_raw(&self.factors[0], x, y, z);
        for f in &self.factors[1..] {
            out = out.kronecker(&su2_element_raw(f, x, y, z));
        }
        out
    }

    /// Product-basis label of row `r`: the tuple (m₁, …, m_N) in Kronecker
    /// order (first factor slowest, m descending within each factor).
    pub fn row_labels(&self) -> Vec<Vec<HalfInt>> {
        let dims: Vec<usize> = self.factors.iter().map(|f| f.dim()).collect();
        let total: usize = dims.iter().product();
        (0..total)
            .map(|mut r| {
                let mut label = vec![HalfInt::from_int(0); dims.len()];
                for (k, &d) in dims.iter().enumerate().rev() {
                    let digit = r % d;
                    r /= d;
                    label[k] = self.factors[k].m_of_row(digit);
                }
                label
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fro_norm;

    #[test]
    fn z2_from_text() {
        let g = load_group_table("2\n1 2\n2 1").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.product(1, 1), 0);
        assert_eq!(g.inverse(1), 1);
    }

    #[test]
    fn comments_and_bad_tables() {
        assert!(load_group_table("# cyclic\n2\n1 2\n2 1").is_ok());
        // Repeated entry in a row: Latin square violation.
        assert!(matches!(
            load_group_table("2\n1 1\n2 1"),
            Err(GroupError::NotAGroup(_)) | Err(GroupError::IdentityNotFirst(_))
        ));
        // Identity not first.
        assert!(matches!(
            load_group_table("2\n2 1\n1 2"),
            Err(GroupError::IdentityNotFirst(_))
        ));
        assert!(matches!(
            load_group_table("2\n1 2"),
            Err(GroupError::Parse(_))
        ));
        assert!(matches!(
            load_group_table("2\n1 3\n3 1"),
            Err(GroupError::Parse(_))
        ));
    }

    #[test]
    fn s3_structure() {
        let g = GroupTable::s3();
        assert_eq!(g.order(), 6);
        let (a1, a2) = s3_generators();
        assert_eq!(g.product(a1, a1), 0);
        assert_eq!(g.product(a2, a2), 0);
        let a1a2 = g.product(a1, a2);
        let cubed = g.product(a1a2, g.product(a1a2, a1a2));
        assert_eq!(cubed, 0);
    }

    #[test]
    fn a4_structure_and_relations() {
        let g = GroupTable::a4();
        assert_eq!(g.order(), 12);
        let (a, b, c) = a4_generators();
        assert_eq!(g.product(a, a), 0);
        assert_eq!(g.product(b, b), 0);
        assert_eq!(g.product(c, g.product(c, c)), 0);
        let ab = g.product(a, b);
        assert_eq!(g.product(ab, ab), 0);
        // The two long relators: a·c²·a·b·c = e and b·c²·a·c = e.
        let c2 = g.product(c, c);
        let word1 = [a, c2, a, b, c]
            .iter()
            .fold(0, |acc, &x| g.product(acc, x));
        assert_eq!(word1, 0);
        let word2 = [b, c2, a, c].iter().fold(0, |acc, &x| g.product(acc, x));
        assert_eq!(word2, 0);
    }

    #[test]
    fn regular_rep_of_z2_and_characters() {
        let g = GroupTable::cyclic(2).unwrap();
        let rep = regular_representation(&g);
        rep.validate(&TolerancePolicy::default()).unwrap();
        assert_eq!(rep.matrices[1][(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(rep.matrices[1][(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(rep.matrices[1][(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn regular_rep_character_is_order_at_identity_only() {
        let g = GroupTable::s3();
        let rep = regular_representation(&g);
        rep.validate(&TolerancePolicy::default()).unwrap();
        for (k, u) in rep.matrices.iter().enumerate() {
            let tr: Complex64 = u.diagonal().iter().sum();
            let expected = if k == 0 { 6.0 } else { 0.0 };
            assert!((tr - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn t_table_properties() {
        let z2 = GroupTable::cyclic(2).unwrap();
        assert_eq!(paper_t_table(&z2), vec![vec![0, 1], vec![1, 0]]);
        for g in [GroupTable::s3(), GroupTable::a4(), GroupTable::cyclic(5).unwrap()] {
            let t = paper_t_table(&g);
            let n = g.order();
            for i in 0..n {
                assert_eq!(t[i][0], i);
                assert_eq!(t[0][i], g.inverse(i));
                assert_eq!(t[i][i], 0);
            }
            // Every row and column of T is a permutation.
            for i in 0..n {
                let mut row: Vec<usize> = t[i].clone();
                row.sort_unstable();
                assert_eq!(row, (0..n).collect::<Vec<_>>());
                let mut col: Vec<usize> = (0..n).map(|r| t[r][i]).collect();
                col.sort_unstable();
                assert_eq!(col, (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn half_int_parse_and_display() {
        assert_eq!(HalfInt::parse("3/2").unwrap().twice(), 3);
        assert_eq!(HalfInt::parse("2").unwrap().twice(), 4);
        assert_eq!(HalfInt::parse("2/1").unwrap().twice(), 4);
        assert_eq!(HalfInt::parse("-1/2").unwrap().twice(), -1);
        assert!(HalfInt::parse("1/3").is_err());
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
    }

    #[test]
    fn spin_half_is_half_the_pauli_matrices() {
        let rep = su2_irrep(HalfInt::from_twice(1)).unwrap();
        let c = Complex64::new;
        assert!((rep.jx[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rep.jx[(1, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rep.jy[(0, 1)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((rep.jy[(1, 0)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((rep.jz[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rep.jz[(1, 1)] - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_three_half_jx_superdiagonal() {
        let rep = su2_irrep(HalfInt::from_twice(3)).unwrap();
        let expect = [3.0_f64.sqrt() / 2.0, 1.0, 3.0_f64.sqrt() / 2.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((rep.jx[(k, k + 1)].re - e).abs() < 1e-14);
            assert!((rep.jx[(k + 1, k)].re - e).abs() < 1e-14);
        }
    }

    #[test]
    fn spin_zero_is_trivial() {
        let rep = su2_irrep(HalfInt::from_int(0)).unwrap();
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.jx[(0, 0)], Complex64::new(0.0, 0.0));
        let u = su2_element(&rep, AngleTriple::new(1.0, 2.0, 3.0));
        assert!((u[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn commutator_algebra() {
        for twice_j in [1i64, 2, 3, 4] {
            let rep = su2_irrep(HalfInt::from_twice(twice_j)).unwrap();
            let i = Complex64::new(0.0, 1.0);
            let comm_xy = &rep.jx * &rep.jy - &rep.jy * &rep.jx;
            assert!(fro_norm(&(comm_xy - rep.jz.map(|z| z * i))) < 1e-12);
            let comm_yz = &rep.jy * &rep.jz - &rep.jz * &rep.jy;
            assert!(fro_norm(&(comm_yz - rep.jx.map(|z| z * i))) < 1e-12);
            let comm_zx = &rep.jz * &rep.jx - &rep.jx * &rep.jz;
            assert!(fro_norm(&(comm_zx - rep.jy.map(|z| z * i))) < 1e-12);
        }
    }

    #[test]
    fn rotation_about_z_for_spin_half() {
        let rep = su2_irrep(HalfInt::from_twice(1)).unwrap();
        let u = su2_element(&rep, AngleTriple::new(0.0, 0.0, std::f64::consts::PI));
        assert!((u[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((u[(1, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(u[(0, 1)].norm() < 1e-12 && u[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn identity_angles_give_identity() {
        let rep = su2_irrep(HalfInt::from_twice(3)).unwrap();
        let u = su2_element(&rep, AngleTriple::zero());
        assert!(fro_norm(&(u - CMatrix::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn tensor_rep_dimensions_and_identity() {
        let half = HalfInt::from_twice(1);
        let rep = TensorRep::new(&[half, half]).unwrap();
        assert_eq!(rep.dim(), 4);
        let u0 = rep.element(AngleTriple::zero());
        assert!(fro_norm(&(u0 - CMatrix::identity(4, 4))) < 1e-12);
        let rep2 = TensorRep::new(&[HalfInt::from_twice(3), HalfInt::from_int(1)]).unwrap();
        assert_eq!(rep2.dim(), 12);
        let rep3 =
            TensorRep::new(&[half, half, HalfInt::from_twice(3)]).unwrap();
        assert_eq!(rep3.dim(), 16);
    }

    #[test]
    fn tensor_row_labels_kronecker_order() {
        let rep = TensorRep::new(&[HalfInt::from_twice(1), HalfInt::from_int(1)]).unwrap();
        let labels = rep.row_labels();
        assert_eq!(labels.len(), 6);
        assert_eq!(labels[0], vec![HalfInt::from_twice(1), HalfInt::from_int(1)]);
        assert_eq!(labels[1], vec![HalfInt::from_twice(1), HalfInt::from_int(0)]);
        assert_eq!(labels[5], vec![HalfInt::from_twice(-1), HalfInt::from_int(-1)]);
    }
}
