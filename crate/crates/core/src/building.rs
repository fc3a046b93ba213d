//! One apartment of the Bruhat-Tits building of `GSp(2g)`.
//!
//! A point `v` determines the norm `α_v(Σ t_i e_i) = min_i(ord_p(t_i) - v_i)`;
//! its balls around zero are diagonal lattices `⊕ p^{⌈r + v_i⌉} Z_p e_i`,
//! graded by `c(Λ) = inf_Λ α_v = min_i(a_i - v_i)`. The stabilizer of the
//! chain is read off entrywise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::ExactRational;
use crate::weyl::{index_at, position, Index, SignedPermutation};

/// `(x_1, …, x_g, x_{-g}, …, x_{-1})` with all `x_i + x_{-i}` equal to `x_0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApartmentPoint<T> {
    coords: Vec<T>,
}

impl<T: ExactRational> ApartmentPoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        let n = coords.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidPoint(format!("need 2g coordinates, got {n}")));
        }
        let x0 = coords[0].clone() + coords[n - 1].clone();
        if (0..n / 2).any(|p| coords[p].clone() + coords[n - 1 - p].clone() != x0) {
            return Err(Error::InvalidPoint("x_i + x_-i must not depend on i".into()));
        }
        Ok(ApartmentPoint { coords })
    }

    pub fn g(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn x(&self, i: Index) -> T {
        self.coords[position(self.g(), i)].clone()
    }

    pub fn x0(&self) -> T {
        self.x(1) + self.x(-1)
    }

    /// `v + t(1, …, 1)`.
    pub fn translate(&self, t: &T) -> Self {
        ApartmentPoint { coords: self.coords.iter().map(|c| c.clone() + t.clone()).collect() }
    }
}

impl<T: ExactRational> fmt::Display for ApartmentPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses `(a,b,…)` with entries `n` or `n/d`.
impl<T: ExactRational> FromStr for ApartmentPoint<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let inner = s.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| bad("expected (…)"))?;
        let coords = inner
            .split(',')
            .map(|t| {
                let t = t.trim().replace('\u{2212}', "-");
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim().parse::<i64>(), d.trim().parse::<i64>()),
                    None => (t.parse::<i64>(), Ok(1)),
                };
                match (n, d) {
                    (Ok(n), Ok(d)) if d != 0 => Ok(T::from_ratio(n, d)),
                    _ => Err(bad("bad rational coordinate")),
                }
            })
            .collect::<Result<Vec<T>>>()?;
        ApartmentPoint::new(coords)
    }
}

/// The five named `g = 2` points in the base alcove.
pub const NAMED_POINTS: [&str; 5] = ["hs", "paramodular", "klingen", "siegel", "iwahori"];

pub fn named_point<T: ExactRational>(name: &str) -> Result<ApartmentPoint<T>> {
    let q = |n: i64, d: i64| T::from_ratio(n, d);
    let coords = match name {
        "hs" | "hyperspecial" => vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1)],
        "paramodular" => vec![q(-1, 2), q(0, 1), q(0, 1), q(1, 2)],
        "klingen" => vec![q(-1, 4), q(0, 1), q(0, 1), q(1, 4)],
        "siegel" => vec![q(-1, 4), q(-1, 4), q(1, 4), q(1, 4)],
        "iwahori" => vec![q(-1, 4), q(-1, 8), q(1, 8), q(1, 4)],
        _ => return Err(Error::InvalidPoint(format!("unknown point {name:?}"))),
    };
    ApartmentPoint::new(coords)
}

/// `⊕ p^{a_i} Z_p e_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct DiagonalLattice {
    pub exps: Vec<i64>,
}

impl DiagonalLattice {
    /// `p^k Λ`.
    pub fn shift(&self, k: i64) -> Self {
        DiagonalLattice { exps: self.exps.iter().map(|a| a + k).collect() }
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Dual under `⟨e_i, e_{-i}⟩ = ±1`: exponent `-a_k` at `-k`.
    pub fn dual(&self) -> Self {
        let n = self.exps.len();
        DiagonalLattice { exps: (0..n).map(|p| -self.exps[n - 1 - p]).collect() }
    }

    /// Representative of the homothety class with smallest exponent 0,
    /// and the shift used.
    pub fn normalized(&self) -> (Self, i64) {
        let m = *self.exps.iter().min().expect("non-empty");
        (self.shift(-m), -m)
    }
}

/// `Z_p^{k} ⊕ pZ_p^{m} ⊕ …`, runs of equal exponents; `p^{-1}(…)` style
/// prefixes are not used.
impl fmt::Display for DiagonalLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for &a in &self.exps {
            match runs.last_mut() {
                Some((b, n)) if *b == a => *n += 1,
                _ => runs.push((a, 1)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|&(a, n)| {
                let base = match a {
                    0 => "Z_p".to_string(),
                    1 => "pZ_p".to_string(),
                    _ => format!("p^{a}Z_p"),
                };
                if n == 1 {
                    base
                } else {
                    format!("{base}^{n}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// One period of the graded chain of balls, by increasing grading (so by
/// decreasing inclusion); the next period is `p` times this one with
/// gradings shifted by `1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedDiagonalChain<T> {
    pub members: Vec<(DiagonalLattice, T)>,
}

impl<T: ExactRational> GradedDiagonalChain<T> {
    /// Homothety-class representatives with smallest exponent 0 and their
    /// gradings, by increasing grading.
    pub fn normalized(&self) -> Vec<(DiagonalLattice, T)> {
        let mut out: Vec<(DiagonalLattice, T)> = self
            .members
            .iter()
            .map(|(l, c)| {
                let (n, k) = l.normalized();
                (n, c.clone() + T::from_i64(k))
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether `l` is `p^k` times a member for some `k`.
    pub fn contains_class(&self, l: &DiagonalLattice) -> bool {
        let n = l.normalized().0;
        self.members.iter().any(|(m, _)| m.normalized().0 == n)
    }

    /// Entrywise valuation bounds of the stabilizer:
    /// `bound(i, k) = max over members of (a_i - a_k)`.
    pub fn parahoric_pattern(&self) -> Vec<Vec<i64>> {
        let n = self.members.first().map_or(0, |(l, _)| l.exps.len());
        (0..n)
            .map(|i| (0..n).map(|k| self.members.iter().map(|(l, _)| l.exps[i] - l.exps[k]).max().unwrap_or(0)).collect())
            .collect()
    }
}

/// The graded lattice chain of `α_v`: balls at the critical radii
/// `r ∈ [0, 1)` with `r + v_i ∈ Z` for some `i`.
pub fn chain_from_point<T: ExactRational>(v: &ApartmentPoint<T>) -> GradedDiagonalChain<T> {
    let mut radii: Vec<T> = v
        .coords()
        .iter()
        .map(|x| {
            let r = -x.clone();
            r.clone() - T::from_i64(r.floor_to_i64())
        })
        .collect();
    radii.sort();
    radii.dedup();
    let members = radii
        .into_iter()
        .map(|r| {
            let exps: Vec<i64> = v.coords().iter().map(|x| (r.clone() + x.clone()).ceil_to_i64()).collect();
            let c = grading(v, &exps);
            (DiagonalLattice { exps }, c)
        })
        .collect();
    GradedDiagonalChain { members }
}

/// `c(Λ) = min_i (a_i - v_i)`.
pub fn grading<T: ExactRational>(v: &ApartmentPoint<T>, exps: &[i64]) -> T {
    exps.iter()
        .zip(v.coords())
        .map(|(&a, x)| T::from_i64(a) - x.clone())
        .min()
        .expect("non-empty")
}

pub fn render_pattern_entry(b: i64) -> String {
    match b {
        0 => "Z_p".into(),
        1 => "pZ_p".into(),
        -1 => "p^{-1}Z_p".into(),
        _ => format!("p^{b}Z_p"),
    }
}

/// Rows separated by `;`, entries by single spaces.
pub fn render_pattern(pattern: &[Vec<i64>]) -> String {
    pattern
        .iter()
        .map(|row| row.iter().map(|&b| render_pattern_entry(b)).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// An affine root `α - n δ` whose wall `α(x) = n` passes through a point.
/// `α` is one of `2e_i - e_0`, `e_i - e_j` (`i < j`), `e_i + e_j - e_0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Wall {
    pub family: String,
    pub n: i64,
}

/// Root families with the linear form `x ↦ n` defining their walls.
fn wall_families<T: ExactRational>(v: &ApartmentPoint<T>) -> Vec<(String, T)> {
    let g = v.g() as Index;
    let mut out = Vec::new();
    for i in 1..=g {
        out.push((format!("2e{i}-e0"), v.x0() - v.x(i) - v.x(i)));
    }
    for i in 1..=g {
        for j in i + 1..=g {
            out.push((format!("e{i}-e{j}"), v.x(j) - v.x(i)));
            out.push((format!("e{i}+e{j}-e0"), v.x0() - v.x(i) - v.x(j)));
        }
    }
    out
}

pub fn walls_through_point<T: ExactRational>(v: &ApartmentPoint<T>) -> Vec<Wall> {
    let mut out: Vec<Wall> = wall_families(v)
        .into_iter()
        .filter_map(|(family, val)| val.to_i64_exact().map(|n| Wall { family, n }))
        .collect();
    out.sort();
    out
}

/// Root families for `g = 2` by name: `2e1-e0`, `2e2-e0`, `e1-e2`,
/// `e1+e2-e0` and their negatives `e0-2e1`, `e0-2e2`, `e2-e1`, `e0-e1-e2`.
pub const ROOTS_G2: [&str; 8] = ["2e1-e0", "e0-2e1", "2e2-e0", "e0-2e2", "e1-e2", "e2-e1", "e1+e2-e0", "e0-e1-e2"];

fn negative_root(a: &str) -> Option<&'static str> {
    let i = ROOTS_G2.iter().position(|r| *r == a)?;
    Some(ROOTS_G2[i ^ 1])
}

/// The root subgroup `u_a(x)` of `GSp(4)`.
pub fn root_subgroup<T: ExactRational>(a: &str, x: T) -> Result<Matrix<T>> {
    let mut m = Matrix::identity(4);
    let mx = -x.clone();
    let entries: Vec<((usize, usize), T)> = match a {
        "e1-e2" => vec![((0, 1), x), ((2, 3), mx)],
        "e2-e1" => vec![((1, 0), x), ((3, 2), mx)],
        "2e1-e0" => vec![((0, 3), x)],
        "e0-2e1" => vec![((3, 0), x)],
        "2e2-e0" => vec![((1, 2), x)],
        "e0-2e2" => vec![((2, 1), x)],
        "e1+e2-e0" => vec![((0, 2), x.clone()), ((1, 3), x)],
        "e0-e1-e2" => vec![((2, 0), x.clone()), ((3, 1), x)],
        _ => return Err(Error::InvalidPoint(format!("unknown root {a:?}"))),
    };
    for ((i, j), val) in entries {
        m[(i, j)] = val;
    }
    Ok(m)
}

/// `w_a(x) = u_a(x) u_{-a}(-x^{-1}) u_a(x)`.
pub fn w_a<T: ExactRational>(a: &str, x: T) -> Result<Matrix<T>> {
    if x.is_zero() {
        return Err(Error::InvalidPoint("w_a needs x ≠ 0".into()));
    }
    let neg = negative_root(a).ok_or_else(|| Error::InvalidPoint(format!("unknown root {a:?}")))?;
    let u = root_subgroup(a, x.clone())?;
    let v = root_subgroup(neg, -(T::one() / x))?;
    Ok(u.mul(&v).mul(&u))
}

/// Writes a monomial matrix as `diag(d) · P` and returns `(P, (-v_p(d_i))_i)`.
pub fn nu1_of_monomial<T: ExactRational>(m: &Matrix<T>, p: u64) -> Result<(SignedPermutation, Vec<i64>)> {
    let n = m.rows();
    if n != m.cols() || !n.is_multiple_of(2) {
        return Err(Error::NotMonomial("need a square matrix of even size".into()));
    }
    let g = n / 2;
    let mut col_of_row = vec![usize::MAX; n];
    let mut nu = vec![0; n];
    for r in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&c| !m[(r, c)].is_zero()).collect();
        let [c] = nz.as_slice() else {
            return Err(Error::NotMonomial(format!("row {r} has {} non-zero entries", nz.len())));
        };
        col_of_row[r] = *c;
        nu[r] = -m[(r, *c)].p_adic_valuation(p).expect("non-zero");
    }
    // P e_c = e_r where (r, c) is the non-zero entry of row r
    let mut images = vec![0; g];
    for r in 0..n {
        let c = col_of_row[r];
        if c < g {
            images[c] = index_at(g, r);
        }
    }
    let pi = SignedPermutation::from_positive_images(g, &images)
        .map_err(|e| Error::NotMonomial(format!("permutation part is not signed: {e}")))?;
    if (0..n).any(|r| pi.apply_position(col_of_row[r]) != r) {
        return Err(Error::NotMonomial("permutation part does not commute with negation".into()));
    }
    Ok((pi, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn pt(name: &str) -> ApartmentPoint<Rational> {
        named_point(name).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn point_validation_and_parsing() {
        assert!(ApartmentPoint::new(vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).is_err());
        let p: ApartmentPoint<Rational> = "(-1/4,-1/4,1/4,1/4)".parse().unwrap();
        assert_eq!(p, pt("siegel"));
        assert_eq!(p.to_string(), "(-1/4,-1/4,1/4,1/4)");
        assert!("(1/0,0)".parse::<ApartmentPoint<Rational>>().is_err());
    }

    #[test]
    fn siegel_chain() {
        let c = chain_from_point(&pt("siegel")).normalized();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], (DiagonalLattice { exps: vec![0; 4] }, q(-1, 4)));
        assert_eq!(c[1], (DiagonalLattice { exps: vec![0, 0, 1, 1] }, q(1, 4)));
    }

    #[test]
    fn lattice_rendering_and_duality() {
        let l = DiagonalLattice { exps: vec![0, 1, 1, 1] };
        assert_eq!(l.to_string(), "Z_p+pZ_p^3");
        assert_eq!(l.dual(), DiagonalLattice { exps: vec![0, 0, 0, 1] }.shift(-1));
    }

    #[test]
    fn walls() {
        assert_eq!(walls_through_point(&pt("hs")).len(), 4);
        assert!(walls_through_point(&pt("iwahori")).is_empty());
        assert_eq!(walls_through_point(&pt("siegel")), vec![Wall { family: "e1-e2".into(), n: 0 }]);
    }

    #[test]
    fn nu1_recipe() {
        let p = 3;
        let x = q(9, 1);
        let (pi, nu) = nu1_of_monomial(&w_a("2e1-e0", x).unwrap(), p).unwrap();
        assert_eq!(pi.to_string(), "(1 -1)");
        assert_eq!(nu, vec![-2, 0, 0, 2]);
        let d = Matrix::from_rows(vec![
            vec![q(3, 1), q(0, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(0, 1), q(1, 3)],
        ]);
        let (pi, nu) = nu1_of_monomial(&d, p).unwrap();
        assert!(pi.is_identity());
        assert_eq!(nu, vec![-1, 0, 0, 1]);
        let full = Matrix::from_rows(vec![vec![q(1, 1); 2]; 2]);
        assert!(nu1_of_monomial(&full, p).is_err());
    }
}
