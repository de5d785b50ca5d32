//! Numerical second-order theta functions on a principally polarized abelian
//! variety given by a Siegel matrix, and the kernel-based reconstruction of
//! the genus-2 and genus-3 invariant quartics from sampled points.
//!
//! Coordinates follow the lattice sum
//! Theta_sigma(z) = sum_n exp(pi i (n+sigma/2)^T (2 tau) (n+sigma/2)
//!                             + 2 pi i (n+sigma/2)^T (2z)),
//! truncated over an ellipsoid chosen from the Gaussian tail bound. Sampled
//! points are deterministic in the seed, evaluation order is fixed, and every
//! numerical rank decision must be certified by a spectral gap or the run
//! aborts: a silently wrong rank is the worst failure mode here.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::heis::two_torsion_lift_generators;
use crate::invariants::{
    k_invariant_cubics, quartic_basis, quartic_from_cubic_complex_with_labels, QuarticLabel,
};
use crate::par::par_map;
use crate::poly::ThetaPoly;

/// Default relative truncation tolerance for the lattice sums.
pub const DEFAULT_THETA_TOL: f64 = 1e-12;
/// Default relative threshold separating kernel from non-kernel singular values.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;
/// Required ratio between the smallest kept and largest discarded singular value.
pub const MIN_GAP_RATIO: f64 = 1e3;
/// Hard cap on the truncation radius in the Gaussian metric.
pub const RADIUS_CAP: f64 = 12.0;

const FRESH_SAMPLE_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// A point of the Siegel upper half-space: symmetric complex matrix with
/// positive definite imaginary part.
#[derive(Clone, Debug)]
pub struct SiegelTau {
    g: usize,
    re: DMatrix<f64>,
    im: DMatrix<f64>,
    im_inv: DMatrix<f64>,
}

impl SiegelTau {
    pub fn new(re: DMatrix<f64>, im: DMatrix<f64>) -> Result<Self> {
        let g = re.nrows();
        if re.ncols() != g || im.nrows() != g || im.ncols() != g {
            return Err(Error::BadTau(
                "matrix blocks must be square of equal size".into(),
            ));
        }
        let sym_err = (0..g)
            .flat_map(|i| (0..g).map(move |j| (i, j)))
            .map(|(i, j)| {
                (re[(i, j)] - re[(j, i)])
                    .abs()
                    .max((im[(i, j)] - im[(j, i)]).abs())
            })
            .fold(0.0f64, f64::max);
        if sym_err >= 1e-14 {
            return Err(Error::BadTau(format!(
                "asymmetry {sym_err:.2e} exceeds 1e-14"
            )));
        }
        let eig = im.clone().symmetric_eigen();
        let min_eig = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig <= 0.0 {
            return Err(Error::BadTau(format!(
                "imaginary part not positive definite (min eigenvalue {min_eig:.3e})"
            )));
        }
        let im_inv = im
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::BadTau("imaginary part not invertible".into()))?;
        Ok(SiegelTau { g, re, im, im_inv })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[(i, j)], self.im[(i, j)])
    }

    pub fn im(&self) -> &DMatrix<f64> {
        &self.im
    }

    /// Smallest eigenvalue of the imaginary part.
    pub fn min_im_eigenvalue(&self) -> f64 {
        self.im
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Deterministic random Siegel matrix: real part uniform in [-1/2, 1/2],
/// imaginary part I + M^T M rescaled so its spectrum lies in [1, 3].
pub fn random_tau(g: usize, seed: u64) -> Result<SiegelTau> {
    if !(2..=4).contains(&g) {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 2,
            max: 4,
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut re = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in i..g {
            let v = rng.gen_range(-0.5..0.5);
            re[(i, j)] = v;
            re[(j, i)] = v;
        }
    }
    let mut m = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            m[(i, j)] = rng.gen_range(0.0..1.0);
        }
    }
    let y0 = DMatrix::<f64>::identity(g, g) + m.transpose() * &m;
    let eig = y0.clone().symmetric_eigen();
    let lmin = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let spread = lmax - lmin;
    let im = if spread > 1e-9 {
        DMatrix::<f64>::identity(g, g)
            + (y0 - DMatrix::<f64>::identity(g, g) * lmin) * (2.0 / spread)
    } else {
        DMatrix::<f64>::identity(g, g)
    };
    SiegelTau::new(re, im)
}

/// Raw (unnormalized) second-order theta coordinates at z.
pub fn theta2_raw(z: &[Complex64], tau: &SiegelTau, tol: f64) -> Result<Vec<Complex64>> {
    let g = tau.genus();
    assert_eq!(z.len(), g, "z must have length g");
    let y: DVector<f64> = DVector::from_iterator(g, z.iter().map(|c| c.im));
    let shift = &tau.im_inv * &y;
    let q_scale = 4.0 * std::f64::consts::PI;
    let q_norm = |v: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..g {
            for j in 0..g {
                acc += v[i] * q_scale * tau.im[(i, j)] * v[j];
            }
        }
        acc.sqrt()
    };

    let mut out = Vec::with_capacity(1 << g);
    for sigma in 0..1u32 << g {
        // Gaussian center of the summand magnitudes
        let center: Vec<f64> = (0..g)
            .map(|i| 0.5 * ((sigma >> i) & 1) as f64 + shift[i])
            .collect();
        // distance from the center to the nearest lattice point
        let nearest: Vec<f64> = center.iter().map(|c| (-c).round() + c).collect();
        let r0 = q_norm(&nearest);
        let radius = (r0 * r0 + 2.0 * (1.0 / tol).ln()).sqrt() + 2.0;
        if radius > RADIUS_CAP {
            return Err(Error::TruncationCap {
                required: radius,
                cap: RADIUS_CAP,
            });
        }
        // axis-aligned bounding box of the ellipsoid
        let ranges: Vec<(i64, i64)> = (0..g)
            .map(|i| {
                let h = radius * (tau.im_inv[(i, i)] / q_scale).sqrt();
                let lo = (-center[i] - h).ceil() as i64;
                let hi = (-center[i] + h).floor() as i64;
                (lo, hi.max(lo))
            })
            .collect();

        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
        'outer: loop {
            let w: Vec<f64> = (0..g)
                .map(|i| idx[i] as f64 + 0.5 * ((sigma >> i) & 1) as f64)
                .collect();
            let dist: Vec<f64> = (0..g).map(|i| w[i] + shift[i]).collect();
            if q_norm(&dist) <= radius {
                // exponent 2 pi i (w^T tau w + 2 w^T z)
                let mut quad = Complex64::new(0.0, 0.0);
                for i in 0..g {
                    for j in 0..g {
                        quad += tau.entry(i, j) * w[i] * w[j];
                    }
                }
                let mut lin = Complex64::new(0.0, 0.0);
                for i in 0..g {
                    lin += z[i] * w[i];
                }
                let expo = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * (quad + lin * 2.0);
                acc += expo.exp();
            }
            // advance the lexicographic counter
            let mut i = 0;
            loop {
                if i == g {
                    break 'outer;
                }
                idx[i] += 1;
                if idx[i] <= ranges[i].1 {
                    break;
                }
                idx[i] = ranges[i].0;
                i += 1;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Projectively normalized second-order theta coordinates of a point:
/// unit sup-norm with the first nonzero coordinate real positive.
#[derive(Clone, Debug)]
pub struct KummerPoint {
    g: usize,
    coords: Vec<Complex64>,
}

impl KummerPoint {
    pub fn from_raw(raw: Vec<Complex64>, g: usize) -> Result<Self> {
        assert_eq!(raw.len(), 1 << g);
        let sup = raw.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if sup == 0.0 {
            return Err(Error::BadTau(
                "theta coordinates vanished identically".into(),
            ));
        }
        let first = raw
            .iter()
            .position(|c| c.norm() > 1e-9 * sup)
            .expect("sup-norm positive");
        let phase = raw[first] / raw[first].norm();
        let scale = (phase * sup).inv();
        Ok(KummerPoint {
            g,
            coords: raw.into_iter().map(|c| c * scale).collect(),
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }
}

/// Theta coordinates at z, normalized.
pub fn theta2_vector(z: &[Complex64], tau: &SiegelTau, tol: f64) -> Result<KummerPoint> {
    KummerPoint::from_raw(theta2_raw(z, tau, tol)?, tau.genus())
}

fn draw_points(tau: &SiegelTau, n: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let g = tau.genus();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut zs = Vec::with_capacity(n);
    for _ in 0..n {
        let u: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
        let v: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
        let z: Vec<Complex64> = (0..g)
            .map(|i| {
                let mut acc = Complex64::new(u[i], 0.0);
                for k in 0..g {
                    acc += tau.entry(i, k) * v[k];
                }
                acc * 0.5
            })
            .collect();
        zs.push(z);
    }
    zs
}

/// Draws N points z = (u + tau v)/2 with u, v uniform in [0,1)^g and returns
/// them with their normalized theta coordinates, in draw order.
pub fn sample_kummer(
    tau: &SiegelTau,
    n: usize,
    seed: u64,
) -> Result<Vec<(Vec<Complex64>, KummerPoint)>> {
    let zs = draw_points(tau, n, seed);
    let results = par_map(zs, |z| {
        theta2_vector(&z, tau, DEFAULT_THETA_TOL).map(|p| (z.clone(), p))
    });
    results.into_iter().collect()
}

/// Sequential variant of [`sample_kummer`], kept for benchmarking against the
/// parallel path.
pub fn sample_kummer_seq(
    tau: &SiegelTau,
    n: usize,
    seed: u64,
) -> Result<Vec<(Vec<Complex64>, KummerPoint)>> {
    let zs = draw_points(tau, n, seed);
    zs.into_iter()
        .map(|z| theta2_vector(&z, tau, DEFAULT_THETA_TOL).map(|p| (z, p)))
        .collect()
}

/// Result of a certified numerical kernel computation.
#[derive(Clone, Debug)]
pub struct KernelResult {
    pub kernel_dim: usize,
    /// Kernel basis vectors in the coordinates of the polynomial basis.
    pub kernel: Vec<Vec<Complex64>>,
    /// Full singular spectrum, descending.
    pub singular_values: Vec<f64>,
    /// Smallest kept over largest discarded singular value, when both exist.
    pub gap_ratio: Option<f64>,
}

/// Evaluates the basis polynomials at the sampled points, takes the SVD of
/// the evaluation matrix and splits the spectrum at `rank_tol * sigma_max`.
/// The split must be certified by a gap ratio of at least [`MIN_GAP_RATIO`],
/// otherwise the rank is declared indeterminate.
pub fn relation_kernel(
    points: &[KummerPoint],
    basis: &[ThetaPoly<Complex64>],
    rank_tol: f64,
) -> Result<KernelResult> {
    let b = basis.len();
    let need = 2 * b + 20;
    if points.len() < need {
        return Err(Error::TooFewSamples {
            need,
            got: points.len(),
        });
    }
    let n = points.len();
    let mut mat = DMatrix::<Complex64>::zeros(n, b);
    for (i, p) in points.iter().enumerate() {
        for (j, f) in basis.iter().enumerate() {
            mat[(i, j)] = f.eval(p.coords());
        }
    }
    let svd = mat.svd(false, true);
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let v_t = svd.v_t.expect("requested");
    let smax = sv.first().cloned().unwrap_or(0.0);
    let kernel_dim = sv.iter().filter(|&&s| s < rank_tol * smax).count();
    let gap_ratio = if kernel_dim > 0 && kernel_dim < b {
        let smallest_kept = sv[b - kernel_dim - 1];
        let largest_discarded = sv[b - kernel_dim];
        let ratio = smallest_kept / largest_discarded;
        if ratio < MIN_GAP_RATIO {
            return Err(Error::IndeterminateRank {
                tol: rank_tol,
                min_ratio: MIN_GAP_RATIO,
                spectrum: sv,
            });
        }
        Some(ratio)
    } else {
        None
    };
    let kernel: Vec<Vec<Complex64>> = (b - kernel_dim..b)
        .map(|i| (0..b).map(|j| v_t[(i, j)].conj()).collect())
        .collect();
    Ok(KernelResult {
        kernel_dim,
        kernel,
        singular_values: sv,
        gap_ratio,
    })
}

/// A reconstructed invariant quartic with its certification diagnostics.
#[derive(Clone, Debug)]
pub struct ReconstructedQuartic {
    pub g: usize,
    pub seed: u64,
    /// Monomial expansion, normalized to unit max coefficient.
    pub quartic: ThetaPoly<Complex64>,
    /// Coefficients in the labelled invariant-quartic basis, same scaling.
    pub label_coeffs: Vec<(QuarticLabel, Complex64)>,
    pub singular_values: Vec<f64>,
    pub gap_ratio: Option<f64>,
    /// max |Q(point)| / max coefficient, over the fresh samples.
    pub value_residual: f64,
    /// max over partials and fresh samples of |dQ(point)| / max coefficient;
    /// only demanded (and only meaningful) when the reconstruction promises
    /// the sampled locus inside the singular locus, as the genus-3 one does.
    pub partial_residual: Option<f64>,
    /// max coefficient deviation of x.Q - Q over the two-torsion lifts.
    pub invariance_residual: f64,
}

fn normalize_with_labels(
    q: ThetaPoly<Complex64>,
    labels: Vec<(QuarticLabel, Complex64)>,
) -> (ThetaPoly<Complex64>, Vec<(QuarticLabel, Complex64)>) {
    let sup = q.terms().map(|(_, c)| c.norm()).fold(0.0f64, f64::max);
    // deterministic representative: first monomial in canonical order whose
    // coefficient modulus is within 1e-6 of the maximum; stable across seeds
    let pivot = q
        .terms()
        .find(|(_, c)| c.norm() >= sup * (1.0 - 1e-6))
        .map(|(_, c)| *c)
        .unwrap_or(Complex64::new(1.0, 0.0));
    let scale = pivot.inv();
    (
        q.scale(&scale),
        labels.into_iter().map(|(l, c)| (l, c * scale)).collect(),
    )
}

fn max_coeff_norm(p: &ThetaPoly<Complex64>) -> f64 {
    p.terms().map(|(_, c)| c.norm()).fold(0.0f64, f64::max)
}

fn check_reconstruction(
    tau: &SiegelTau,
    seed: u64,
    q: ThetaPoly<Complex64>,
    labels: Vec<(QuarticLabel, Complex64)>,
    kr: &KernelResult,
    require_singular: bool,
) -> Result<ReconstructedQuartic> {
    let g = tau.genus();
    let (q, labels) = normalize_with_labels(q, labels);
    let fresh = sample_kummer(tau, 50, seed ^ FRESH_SAMPLE_SALT)?;

    let q_scale = max_coeff_norm(&q);
    let mut value_residual = 0.0f64;
    for (_, p) in &fresh {
        value_residual = value_residual.max(q.eval(p.coords()).norm() / q_scale);
    }
    if value_residual >= 1e-8 {
        return Err(Error::ResidualCheck {
            what: "quartic value at fresh samples",
            value: value_residual,
            bound: 1e-8,
        });
    }

    let partial_residual = if require_singular {
        let mut worst = 0.0f64;
        for sigma in BitVec::all(g) {
            let d = q.partial_derivative(&sigma);
            let scale = max_coeff_norm(&d);
            if scale == 0.0 {
                continue;
            }
            for (_, p) in &fresh {
                worst = worst.max(d.eval(p.coords()).norm() / scale);
            }
        }
        if worst >= 1e-8 {
            return Err(Error::ResidualCheck {
                what: "quartic gradient at fresh samples",
                value: worst,
                bound: 1e-8,
            });
        }
        Some(worst)
    } else {
        None
    };

    let mut invariance_residual = 0.0f64;
    for x in two_torsion_lift_generators(g) {
        let moved = q.heis_act(&x)?;
        let diff = moved.sub(&q)?;
        invariance_residual = invariance_residual.max(max_coeff_norm(&diff) / q_scale);
    }
    if invariance_residual >= 1e-10 {
        return Err(Error::ResidualCheck {
            what: "two-torsion invariance",
            value: invariance_residual,
            bound: 1e-10,
        });
    }

    Ok(ReconstructedQuartic {
        g,
        seed,
        quartic: q,
        label_coeffs: labels,
        singular_values: kr.singular_values.clone(),
        gap_ratio: kr.gap_ratio,
        value_residual,
        partial_residual,
        invariance_residual,
    })
}

/// Reconstructs the genus-3 invariant quartic singular along the sampled
/// Kummer variety: the one-dimensional kernel of the invariant cubics on the
/// samples is lifted through the d/dX_0 isomorphism.
pub fn coble_quartic(tau: &SiegelTau, seed: u64, rank_tol: f64) -> Result<ReconstructedQuartic> {
    if tau.genus() != 3 {
        return Err(Error::GenusOutOfRange {
            got: tau.genus(),
            min: 3,
            max: 3,
        });
    }
    let basis: Vec<ThetaPoly<Complex64>> = k_invariant_cubics(3)?
        .iter()
        .map(ThetaPoly::to_complex)
        .collect();
    let samples = sample_kummer(tau, 2 * basis.len() + 20, seed)?;
    let points: Vec<KummerPoint> = samples.into_iter().map(|(_, p)| p).collect();
    let kr = relation_kernel(&points, &basis, rank_tol)?;
    if kr.kernel_dim != 1 {
        return Err(Error::UnexpectedKernelDim {
            got: kr.kernel_dim,
            expected: 1,
        });
    }
    let mut f = ThetaPoly::<Complex64>::zero(3);
    for (c, b) in kr.kernel[0].iter().zip(&basis) {
        f = f.add(&b.scale(c))?;
    }
    let (q, labels) = quartic_from_cubic_complex_with_labels(&f)?;
    check_reconstruction(tau, seed, q, labels, &kr, true)
}

/// Reconstructs the genus-2 quartic surface as the one-dimensional kernel of
/// the invariant quartics on the sampled points.
pub fn kummer_quartic(tau: &SiegelTau, seed: u64, rank_tol: f64) -> Result<ReconstructedQuartic> {
    if tau.genus() != 2 {
        return Err(Error::GenusOutOfRange {
            got: tau.genus(),
            min: 2,
            max: 2,
        });
    }
    let labelled = quartic_basis(2)?;
    let basis: Vec<ThetaPoly<Complex64>> = labelled.iter().map(|(_, q)| q.to_complex()).collect();
    let samples = sample_kummer(tau, 2 * basis.len() + 20, seed)?;
    let points: Vec<KummerPoint> = samples.into_iter().map(|(_, p)| p).collect();
    let kr = relation_kernel(&points, &basis, rank_tol)?;
    if kr.kernel_dim != 1 {
        return Err(Error::UnexpectedKernelDim {
            got: kr.kernel_dim,
            expected: 1,
        });
    }
    let mut q = ThetaPoly::<Complex64>::zero(2);
    let mut labels = Vec::with_capacity(basis.len());
    for ((label, b), c) in labelled.iter().zip(kr.kernel[0].iter()) {
        q = q.add(&b.to_complex().scale(c))?;
        labels.push((label.clone(), *c));
    }
    check_reconstruction(tau, seed, q, labels, &kr, false)
}

/// Kernel dimension of all cubic monomials on sampled genus-3 points; the
/// expected value for a generic Siegel matrix is 8.
pub fn full_cubic_kernel_dim(tau: &SiegelTau, seed: u64, rank_tol: f64) -> Result<KernelResult> {
    if tau.genus() != 3 {
        return Err(Error::GenusOutOfRange {
            got: tau.genus(),
            min: 3,
            max: 3,
        });
    }
    let basis: Vec<ThetaPoly<Complex64>> = crate::poly::monomials_of_degree(3, 3)
        .into_iter()
        .map(|m| ThetaPoly::from_terms(3, [(m, BigRational::from_integer(1.into()))]).to_complex())
        .collect();
    let samples = sample_kummer(tau, 2 * basis.len() + 20, seed)?;
    let points: Vec<KummerPoint> = samples.into_iter().map(|(_, p)| p).collect();
    relation_kernel(&points, &basis, rank_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::HeisElem;
    use num_traits::Signed;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn random_tau_is_deterministic_and_well_conditioned() {
        for g in 2..=4 {
            let t1 = random_tau(g, 42).unwrap();
            let t2 = random_tau(g, 42).unwrap();
            for i in 0..g {
                for j in 0..g {
                    assert_eq!(t1.entry(i, j), t2.entry(i, j));
                }
            }
            let min = t1.min_im_eigenvalue();
            assert!(min >= 1.0 - 1e-9, "min eigenvalue {min}");
            let max = t1
                .im()
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            assert!(max <= 3.0 + 1e-9, "max eigenvalue {max}");
        }
        assert!(random_tau(5, 1).is_err());
    }

    #[test]
    fn theta_matches_brute_force_box() {
        // independent oracle: fixed large box, no ellipsoid filter
        let g = 2;
        let tau = random_tau(g, 7).unwrap();
        let z = [c(0.31, 0.12), c(-0.05, 0.4)];
        let fast = theta2_raw(&z, &tau, 1e-13).unwrap();
        let mut brute = vec![Complex64::new(0.0, 0.0); 1 << g];
        for (s, slot) in brute.iter_mut().enumerate() {
            for n0 in -8i64..=8 {
                for n1 in -8i64..=8 {
                    let w = [
                        n0 as f64 + 0.5 * (s & 1) as f64,
                        n1 as f64 + 0.5 * ((s >> 1) & 1) as f64,
                    ];
                    let mut quad = Complex64::new(0.0, 0.0);
                    for i in 0..g {
                        for j in 0..g {
                            quad += tau.entry(i, j) * w[i] * w[j];
                        }
                    }
                    let lin = z[0] * w[0] + z[1] * w[1];
                    *slot += (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * (quad + lin * 2.0))
                        .exp();
                }
            }
        }
        for s in 0..1 << g {
            assert!(
                (fast[s] - brute[s]).norm() < 1e-10 * brute[s].norm().max(1.0),
                "sigma={s}: {} vs {}",
                fast[s],
                brute[s]
            );
        }
    }

    #[test]
    fn theta_constants_are_finite_and_reproducible() {
        for g in 2..=4usize {
            let tau = random_tau(g, 19).unwrap();
            let z = vec![Complex64::new(0.0, 0.0); g];
            let consts = theta2_raw(&z, &tau, 1e-12).unwrap();
            assert_eq!(consts.len(), 1 << g);
            for v in &consts {
                assert!(v.re.is_finite() && v.im.is_finite());
            }
            // the vector is not identically zero, so it normalizes
            let p = theta2_vector(&z, &tau, 1e-12).unwrap();
            let sup = p.coords().iter().map(|c| c.norm()).fold(0.0f64, f64::max);
            assert!((sup - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unattainable_tolerance_hits_truncation_cap() {
        // the radius needed for a 1e-30 relative tail exceeds the hard cap
        let tau = random_tau(2, 3).unwrap();
        let z = vec![Complex64::new(0.1, 0.2); 2];
        assert!(matches!(
            theta2_raw(&z, &tau, 1e-30),
            Err(Error::TruncationCap { .. })
        ));
    }

    #[test]
    fn theta_is_periodic_in_integer_translations() {
        let g = 3;
        let tau = random_tau(g, 5).unwrap();
        let z = [c(0.2, 0.3), c(-0.4, 0.1), c(0.05, 0.25)];
        let base = theta2_raw(&z, &tau, 1e-12).unwrap();
        let shifted: Vec<Complex64> = z
            .iter()
            .zip([1.0, -2.0, 1.0])
            .map(|(zi, m)| zi + c(m, 0.0))
            .collect();
        let moved = theta2_raw(&shifted, &tau, 1e-12).unwrap();
        for s in 0..1 << g {
            assert!((base[s] - moved[s]).norm() < 1e-10 * base[s].norm().max(1.0));
        }
    }

    #[test]
    fn kummer_points_are_even() {
        for g in [2usize, 3] {
            let tau = random_tau(g, 11).unwrap();
            for (z, p) in sample_kummer(&tau, 6, 99).unwrap() {
                let neg: Vec<Complex64> = z.iter().map(|v| -v).collect();
                let q = theta2_vector(&neg, &tau, DEFAULT_THETA_TOL).unwrap();
                for s in 0..1 << g {
                    assert!((p.coords()[s] - q.coords()[s]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn sample_kummer_deterministic_and_seed_sensitive() {
        let tau = random_tau(2, 3).unwrap();
        let a = sample_kummer(&tau, 4, 17).unwrap();
        let b = sample_kummer(&tau, 4, 17).unwrap();
        for ((za, pa), (zb, pb)) in a.iter().zip(&b) {
            assert_eq!(za, zb);
            for s in 0..4 {
                assert_eq!(pa.coords()[s], pb.coords()[s]);
            }
        }
        let other = sample_kummer(&tau, 4, 18).unwrap();
        assert!(a[0].0 != other[0].0);
        assert!(sample_kummer(&tau, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn parallel_and_sequential_sampling_agree() {
        let tau = random_tau(3, 13).unwrap();
        let a = sample_kummer(&tau, 8, 5).unwrap();
        let b = sample_kummer_seq(&tau, 8, 5).unwrap();
        for ((za, pa), (zb, pb)) in a.iter().zip(&b) {
            assert_eq!(za, zb);
            for s in 0..8 {
                assert_eq!(pa.coords()[s], pb.coords()[s]);
            }
        }
    }

    #[test]
    fn half_period_translation_matches_heisenberg_signs() {
        // z -> z + (a + tau b)/2 permutes coordinates like the element
        // (1, b, chi_a), up to one global scalar
        for g in [2usize, 3] {
            let tau = random_tau(g, 23).unwrap();
            let z: Vec<Complex64> = (0..g).map(|i| c(0.1 + 0.07 * i as f64, 0.2)).collect();
            let base = theta2_raw(&z, &tau, 1e-12).unwrap();
            for a_bits in 0..1u32 << g {
                for b_bits in 0..1u32 << g {
                    let shifted: Vec<Complex64> = (0..g)
                        .map(|i| {
                            let mut acc = z[i] + c(0.5 * ((a_bits >> i) & 1) as f64, 0.0);
                            for k in 0..g {
                                acc += tau.entry(i, k) * (0.5 * ((b_bits >> k) & 1) as f64);
                            }
                            acc
                        })
                        .collect();
                    let moved = theta2_raw(&shifted, &tau, 1e-12).unwrap();
                    let a = BitVec::new(a_bits, g).unwrap();
                    let b = BitVec::new(b_bits, g).unwrap();
                    let x = HeisElem::unit(b, a).unwrap();
                    let mut ratio: Option<Complex64> = None;
                    for s_bits in 0..1u32 << g {
                        let s = BitVec::new(s_bits, g).unwrap();
                        let (coef, src) = x.act_basis(&s).unwrap();
                        let sign = if coef.is_negative() { -1.0 } else { 1.0 };
                        let predicted = base[src.bits() as usize] * sign;
                        let got = moved[s_bits as usize];
                        if predicted.norm() < 1e-6 {
                            continue;
                        }
                        let r = got / predicted;
                        match ratio {
                            None => ratio = Some(r),
                            Some(r0) => {
                                assert!(
                                    (r - r0).norm() < 1e-9 * r0.norm().max(1.0),
                                    "g={g} a={a_bits} b={b_bits} sigma={s_bits}"
                                );
                            }
                        }
                    }
                    assert!(ratio.is_some());
                }
            }
        }
    }

    #[test]
    fn kernel_dims_for_reference_configurations() {
        // g=2: invariant quartics have a 1-dimensional kernel on the samples
        let tau2 = random_tau(2, 31).unwrap();
        let labelled = quartic_basis(2).unwrap();
        let basis: Vec<ThetaPoly<Complex64>> =
            labelled.iter().map(|(_, q)| q.to_complex()).collect();
        let pts: Vec<KummerPoint> = sample_kummer(&tau2, 30, 57)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let kr = relation_kernel(&pts, &basis, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(kr.kernel_dim, 1);
        assert!(kr.gap_ratio.unwrap() >= MIN_GAP_RATIO);

        // g=3: all 120 cubic monomials -> kernel dimension 8
        let tau3 = random_tau(3, 31).unwrap();
        let kr = full_cubic_kernel_dim(&tau3, 57, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(kr.kernel_dim, 8);
        assert!(kr.gap_ratio.unwrap() >= MIN_GAP_RATIO);

        // g=3: the 15 invariant cubics -> kernel dimension 1
        let basis: Vec<ThetaPoly<Complex64>> = k_invariant_cubics(3)
            .unwrap()
            .iter()
            .map(ThetaPoly::to_complex)
            .collect();
        let pts: Vec<KummerPoint> = sample_kummer(&tau3, 50, 58)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let kr = relation_kernel(&pts, &basis, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(kr.kernel_dim, 1);
    }

    #[test]
    fn too_few_samples_rejected() {
        let tau = random_tau(2, 1).unwrap();
        let labelled = quartic_basis(2).unwrap();
        let basis: Vec<ThetaPoly<Complex64>> =
            labelled.iter().map(|(_, q)| q.to_complex()).collect();
        let pts: Vec<KummerPoint> = sample_kummer(&tau, 10, 5)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        assert!(matches!(
            relation_kernel(&pts, &basis, DEFAULT_RANK_TOL),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn coble_reconstruction_and_seed_independence() {
        let tau = random_tau(3, 101).unwrap();
        let q1 = coble_quartic(&tau, 1, DEFAULT_RANK_TOL).unwrap();
        let q2 = coble_quartic(&tau, 2, DEFAULT_RANK_TOL).unwrap();
        assert!(q1.value_residual < 1e-8);
        assert!(q1.partial_residual.unwrap() < 1e-8);
        assert!(q1.invariance_residual < 1e-10);
        // same quartic up to scalar: the shared normalization makes the
        // comparison coefficientwise
        for ((m1, c1), (m2, c2)) in q1.quartic.terms().zip(q2.quartic.terms()) {
            assert_eq!(m1, m2);
            assert!((c1 - c2).norm() < 1e-6);
        }
    }

    #[test]
    fn kummer_reconstruction() {
        let tau = random_tau(2, 77).unwrap();
        let q = kummer_quartic(&tau, 5, DEFAULT_RANK_TOL).unwrap();
        assert!(q.value_residual < 1e-8);
        assert_eq!(q.label_coeffs.len(), 5);
        let q2 = kummer_quartic(&tau, 6, DEFAULT_RANK_TOL).unwrap();
        for ((m1, c1), (m2, c2)) in q.quartic.terms().zip(q2.quartic.terms()) {
            assert_eq!(m1, m2);
            assert!((c1 - c2).norm() < 1e-6);
        }
    }
}
