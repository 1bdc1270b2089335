//! Lowest eigenpairs of the dimensionless 1D Schrödinger operator
//! `−d²/dζ² + U(ζ)` (lengths in units of `L`, energies in `ħ²/(2 m L²)`).
//!
//! The operator is discretized with second-order central differences and
//! hard walls at `±ζ_max`. Eigenvalues come from bisection on Sturm counts,
//! which also certifies their index; eigenvectors come from inverse
//! iteration with a partially pivoted tridiagonal factorization.

use std::fmt;

use crate::error::{Result, TrapError};

pub const DEFAULT_HALF_WIDTH: f64 = 2.0;
pub const DEFAULT_POINTS: usize = 4001;

/// Splittings below this fraction of `|ε0|` are not resolved.
pub const SPLITTING_RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    n_points: usize,
}

impl Grid1D {
    /// Uniform grid on `[−half_width, half_width]` with an odd number of
    /// points, so that `ζ = 0` is a node.
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(TrapError::Domain(format!(
                "grid needs an odd number of points >= 3, got {n_points}"
            )));
        }
        if !(half_width > 0.5) || !half_width.is_finite() {
            return Err(TrapError::Domain(format!(
                "grid half-width must exceed 0.5 to contain both minima, got {half_width}"
            )));
        }
        Ok(Self { half_width, n_points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        // symmetric about the middle index, exactly
        let mid = (self.n_points - 1) / 2;
        let h = self.spacing();
        if j >= mid {
            (j - mid) as f64 * h
        } else {
            -((mid - j) as f64 * h)
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n_points).map(|j| f(self.point(j))).collect()
    }

    /// Grid inner product `Σ f g · h`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * self.spacing()
    }
}

impl Default for Grid1D {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            n_points: DEFAULT_POINTS,
        }
    }
}

/// Canonical double well `Ẽ_b (16 ζ⁴ − 8 ζ²)`: minima `−Ẽ_b` at `ζ = ±1/2`,
/// barrier top `0` at `ζ = 0`.
pub fn dimensionless_quartic(zeta: f64, eb_tilde: f64) -> f64 {
    let z2 = zeta * zeta;
    eb_tilde * (16.0 * z2 * z2 - 8.0 * z2)
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(TrapError::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        Ok(Self { diagonal, off_diagonal })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diagonal[i];
            if i + 1 < n {
                m[i][i + 1] = self.off_diagonal[i];
                m[i + 1][i] = self.off_diagonal[i];
            }
        }
        m
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off_diagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - radius);
            hi = hi.max(self.diagonal[i] + radius);
        }
        (lo, hi)
    }

    fn norm_estimate(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self.off_diagonal.iter().fold(0.0f64, |m, e| m.max(e * e));
        (f64::MIN_POSITIVE * emax).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `lambda` (count of negative
    /// pivots of the `LDLᵀ` factorization of `T − λI`).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diagonal[0] - lambda;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off_diagonal[i - 1];
                q = self.diagonal[i] - lambda - e * e / q;
            }
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.dim() {
            return Err(TrapError::Domain(format!(
                "eigenvalue index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * self.norm_estimate();
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `k` smallest eigenpairs with unit Euclidean-norm vectors.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>, bool)> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(TrapError::Domain(format!(
                "requested {k} eigenpairs of a {n}x{n} matrix"
            )));
        }
        let values = (0..k).map(|i| self.eigenvalue(i)).collect::<Result<Vec<_>>>()?;
        let certified = self.certify(&values);
        let palindromic = self.is_palindromic();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for (i, &lambda) in values.iter().enumerate() {
            let v = self.inverse_iteration(lambda, &vectors, palindromic, i)?;
            vectors.push(v);
        }
        Ok((values, vectors, certified))
    }

    /// Checks that exactly `i` eigenvalues lie below a point between
    /// `λ_{i−1}` and `λ_i`, and `i + 1` below a point between `λ_i` and the
    /// next one.
    fn certify(&self, values: &[f64]) -> bool {
        let k = values.len();
        let next = if k < self.dim() { self.eigenvalue(k).ok() } else { None };
        let slack = 4.0 * f64::EPSILON * self.norm_estimate();
        values.iter().enumerate().all(|(i, &lambda)| {
            let below = if i == 0 { None } else { Some(values[i - 1]) };
            let above = if i + 1 < k { Some(values[i + 1]) } else { next };
            let lower = below.map_or(lambda - 1.0, |b| 0.5 * (b + lambda)).min(lambda - slack);
            let upper = above.map_or(lambda + 1.0, |a| 0.5 * (a + lambda)).max(lambda + slack);
            self.sturm_count(lower) <= i && self.sturm_count(upper) > i
        })
    }

    fn is_palindromic(&self) -> bool {
        let n = self.dim();
        let tol = 1e-12 * self.norm_estimate();
        (0..n / 2).all(|i| (self.diagonal[i] - self.diagonal[n - 1 - i]).abs() <= tol)
            && (0..(n - 1) / 2).all(|i| (self.off_diagonal[i] - self.off_diagonal[n - 2 - i]).abs() <= tol)
    }

    fn inverse_iteration(
        &self,
        lambda: f64,
        previous: &[Vec<f64>],
        palindromic: bool,
        seed: usize,
    ) -> Result<Vec<f64>> {
        let n = self.dim();
        let norm = self.norm_estimate();
        let tol = 1e3 * n as f64 * f64::EPSILON * norm;
        let lu = TridiagonalLu::factor(self, lambda)?;
        let mut best = f64::INFINITY;
        for restart in 0..4 {
            let mut x = start_vector(n, seed + 7 * restart);
            for _ in 0..8 {
                lu.solve(&mut x);
                orthonormalize(&mut x, previous);
                let residual = self.residual(&x, lambda);
                best = best.min(residual);
                if residual <= tol {
                    if palindromic {
                        project_parity(&mut x);
                        orthonormalize(&mut x, previous);
                    }
                    fix_sign(&mut x);
                    return Ok(x);
                }
            }
        }
        Err(TrapError::numerical(
            format!("inverse iteration did not converge for eigenvalue {lambda}"),
            best,
        ))
    }

    fn residual(&self, x: &[f64], lambda: f64) -> f64 {
        self.apply(x)
            .iter()
            .zip(x)
            .map(|(tx, xi)| (tx - lambda * xi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // deterministic, not orthogonal to any structured eigenvector
    let phase = 0.618_033_988_749_894_8 * (seed + 1) as f64;
    (0..n)
        .map(|j| 1.0 + 0.5 * ((j as f64 + 1.0) * phase).sin() + 0.25 * ((j * j) as f64 * 0.37 * phase).cos())
        .collect()
}

fn orthonormalize(x: &mut [f64], previous: &[Vec<f64>]) {
    for _ in 0..2 {
        for p in previous {
            let d: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi -= d * pi;
            }
        }
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Replaces `x` by its dominant even or odd part under `j ↦ n−1−j`.
fn project_parity(x: &mut [f64]) {
    let n = x.len();
    let even: Vec<f64> = (0..n).map(|j| 0.5 * (x[j] + x[n - 1 - j])).collect();
    let odd: Vec<f64> = (0..n).map(|j| 0.5 * (x[j] - x[n - 1 - j])).collect();
    let ne: f64 = even.iter().map(|v| v * v).sum();
    let no: f64 = odd.iter().map(|v| v * v).sum();
    x.copy_from_slice(if ne >= no { &even } else { &odd });
}

/// Leftmost significant component positive.
fn fix_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * max) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// `T − σI = P L U` with partial pivoting, stored as in LAPACK `dgttrf`.
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymmetricTridiagonal, shift: f64) -> Result<Self> {
        let n = t.dim();
        let mut dl = t.off_diagonal.clone();
        let mut du = t.off_diagonal.clone();
        let mut d: Vec<f64> = t.diagonal.iter().map(|v| v - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        // zero pivots are nudged by a tiny multiple of ||T||, as in `dstein`
        let nudge = f64::EPSILON * t.norm_estimate();
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = nudge;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = nudge;
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(TrapError::numerical(
                "tridiagonal factorization overflowed",
                f64::INFINITY,
            ));
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // rescale to avoid overflow in later iterations
        let max = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max > 0.0 && max.is_finite() {
            b.iter_mut().for_each(|v| *v /= max);
        }
    }
}

/// Finite-difference Hamiltonian on the interior nodes of a grid; the end
/// nodes are the hard walls.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub grid: Grid1D,
    pub potential: Vec<f64>,
    pub operator: SymmetricTridiagonal,
}

/// Diagonal `2/h² + U_j`, off-diagonal `−1/h²` (units with `ħ²/2m = 1`).
pub fn build_hamiltonian(potential: &[f64], grid: &Grid1D) -> Result<Hamiltonian> {
    let n = grid.n_points();
    if potential.len() != n {
        return Err(TrapError::Domain(format!(
            "potential has {} samples for a {n}-point grid",
            potential.len()
        )));
    }
    if potential.iter().any(|u| !u.is_finite()) {
        return Err(TrapError::Domain("potential samples must be finite".into()));
    }
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diagonal = potential[1..n - 1].iter().map(|u| 2.0 * inv_h2 + u).collect();
    let off_diagonal = vec![-inv_h2; n - 3];
    Ok(Hamiltonian {
        grid: *grid,
        potential: potential.to_vec(),
        operator: SymmetricTridiagonal::new(diagonal, off_diagonal)?,
    })
}

#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Full-grid vectors (zero at the walls) with `Σ φ² h = 1`.
    pub vectors: Vec<Vec<f64>>,
    /// Every eigenvalue index confirmed by Sturm counts.
    pub certified: bool,
}

pub fn lowest_eigenpairs(hamiltonian: &Hamiltonian, k: usize) -> Result<EigenPairs> {
    let (values, interior, certified) = hamiltonian.operator.lowest_eigenpairs(k)?;
    let scale = 1.0 / hamiltonian.grid.spacing().sqrt();
    let vectors = interior
        .into_iter()
        .map(|v| {
            let mut full = Vec::with_capacity(v.len() + 2);
            full.push(0.0);
            full.extend(v.iter().map(|x| x * scale));
            full.push(0.0);
            full
        })
        .collect();
    Ok(EigenPairs {
        values,
        vectors,
        certified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverWarning {
    /// The highest requested level comes within 10 units of the wall
    /// potential; the domain may truncate the states.
    DomainTooSmall {
        level: f64,
        wall: f64,
    },
    Uncertified,
}

impl fmt::Display for SolverWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverWarning::DomainTooSmall { level, wall } => write!(
                f,
                "highest level {level:.6} is within 10 of the wall potential {wall:.6}; enlarge the grid"
            ),
            SolverWarning::Uncertified => write!(f, "Sturm counts did not certify the eigenvalue indices"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Splitting {
    Resolved(f64),
    BelowResolution(f64),
}

#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub grid: Grid1D,
    pub potential_samples: Vec<f64>,
    /// Ascending, units of `ħ²/(2 m L²)`, measured from the barrier top.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub warnings: Vec<SolverWarning>,
}

impl EigenSolution {
    pub fn splitting(&self) -> Option<Splitting> {
        if self.eigenvalues.len() < 2 {
            return None;
        }
        let (e0, e1) = (self.eigenvalues[0], self.eigenvalues[1]);
        let gap = (e1 - e0).max(0.0);
        if gap < SPLITTING_RESOLUTION * e0.abs() {
            Some(Splitting::BelowResolution(gap))
        } else {
            Some(Splitting::Resolved(gap))
        }
    }
}

pub fn solve_potential(potential: Vec<f64>, grid: &Grid1D, k: usize) -> Result<EigenSolution> {
    let hamiltonian = build_hamiltonian(&potential, grid)?;
    let pairs = lowest_eigenpairs(&hamiltonian, k)?;
    let mut warnings = Vec::new();
    let wall = potential[0].min(potential[potential.len() - 1]);
    if let Some(&top) = pairs.values.last() {
        if top > wall - 10.0 {
            warnings.push(SolverWarning::DomainTooSmall { level: top, wall });
        }
    }
    if !pairs.certified {
        warnings.push(SolverWarning::Uncertified);
    }
    Ok(EigenSolution {
        grid: *grid,
        potential_samples: potential,
        eigenvalues: pairs.values,
        eigenvectors: pairs.vectors,
        warnings,
    })
}

/// Lowest `k` levels of the canonical double well with barrier `Ẽ_b`.
pub fn quartic_spectrum(eb_tilde: f64, k: usize, grid: &Grid1D) -> Result<EigenSolution> {
    if !(eb_tilde > 0.0) || !eb_tilde.is_finite() {
        return Err(TrapError::Domain(format!(
            "dimensionless barrier must be positive, got {eb_tilde}"
        )));
    }
    let potential = grid.sample(|z| dimensionless_quartic(z, eb_tilde));
    solve_potential(potential, grid, k)
}

/// Number of sign changes, ignoring entries below `1e-8` of the maximum.
pub fn sign_changes(v: &[f64]) -> usize {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut last = 0.0;
    let mut count = 0;
    for &x in v {
        if x.abs() <= 1e-8 * max {
            continue;
        }
        if last != 0.0 && x.signum() != last {
            count += 1;
        }
        last = x.signum();
    }
    count
}
