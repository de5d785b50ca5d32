//! The release gate: every check the workbench must pass, runnable both from
//! the test suite and from the `selftest` CLI subcommand. Each criterion
//! returns a pass/fail record with a human-readable detail line; tolerances
//! are pinned here, next to the checks that use them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::BitVec;
use crate::chow;
use crate::heis::{self, HeisElem, TwoTorsionPoint};
use crate::invariants;
use crate::poly::{monomials_of_degree, Monomial, ThetaPoly};
use crate::series;
use crate::thetanum::{self, DEFAULT_RANK_TOL, MIN_GAP_RATIO};
use crate::verlinde;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime: std::time::Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<28} {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.runtime
        )
    }
}

fn run(
    id: usize,
    name: &'static str,
    f: impl FnOnce() -> Result<String, String>,
) -> CriterionResult {
    let start = std::time::Instant::now();
    let outcome = f();
    let runtime = start.elapsed();
    match outcome {
        Ok(detail) => CriterionResult {
            id,
            name,
            passed: true,
            detail,
            runtime,
        },
        Err(detail) => CriterionResult {
            id,
            name,
            passed: false,
            detail,
            runtime,
        },
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from_i64(v).expect("i64 embeds")
}

/// Criterion 1: the Chern number table for g = 3..8, exact, under 1 second.
pub fn criterion_chern_table() -> CriterionResult {
    run(1, "chern table g=3..8", || {
        let expected = [
            (3usize, 32i64),
            (4, 384),
            (5, 4096),
            (6, 56320),
            (7, 872448),
            (8, 15368192),
        ];
        let start = std::time::Instant::now();
        let table = chow::chern_table(3, 8).map_err(|e| e.to_string())?;
        for ((g, got), (ge, want)) in table.iter().zip(expected.iter()) {
            if g != ge || *got != big(*want) {
                return Err(format!("g={g}: got {got}, want {want}"));
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("table took {elapsed:.2?}, budget 1 s"));
        }
        Ok(format!("six exact values match, {elapsed:.2?}"))
    })
}

/// Criterion 2: three Euler-characteristic routes agree for all
/// 1 <= d <= g <= 12, the twisted variant equals C(g,d), spot value (4,2)=11.
pub fn criterion_euler_routes() -> CriterionResult {
    run(2, "euler characteristic routes", || {
        let start = std::time::Instant::now();
        for g in 1..=12usize {
            for d in 1..=g {
                let a = series::euler_char_substitution(g, d).map_err(|e| e.to_string())?;
                let b = series::euler_char_residue(g, d).map_err(|e| e.to_string())?;
                let c = series::euler_char_binomial(g, d).map_err(|e| e.to_string())?;
                if a != b || b != c {
                    return Err(format!("routes disagree at g={g}, d={d}: {a}, {b}, {c}"));
                }
                let t = series::euler_char_twisted(g, d).map_err(|e| e.to_string())?;
                if t != crate::comb::binomial(g, d) {
                    return Err(format!("twisted value wrong at g={g}, d={d}"));
                }
            }
        }
        if series::euler_char_substitution(4, 2).map_err(|e| e.to_string())? != big(11) {
            return Err("spot value (4,2) != 11".into());
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("sweep took {elapsed:.2?}, budget 1 s"));
        }
        Ok(format!(
            "all routes agree through g=12, (4,2) = 11, {elapsed:.2?}"
        ))
    })
}

/// Criterion 3: invariant dimension counts.
pub fn criterion_invariant_dimensions() -> CriterionResult {
    run(3, "invariant dimensions", || {
        for g in 2..=5usize {
            let want = ((1 << g) + 1) * ((1 << (g - 1)) + 1) / 3;
            let got = invariants::quartic_basis(g)
                .map_err(|e| e.to_string())?
                .len();
            if got != want {
                return Err(format!("quartic count at g={g}: got {got}, want {want}"));
            }
        }
        let c4 = invariants::k_invariant_cubics(4)
            .map_err(|e| e.to_string())?
            .len();
        let c3 = invariants::k_invariant_cubics(3)
            .map_err(|e| e.to_string())?
            .len();
        if c4 != 51 || c3 != 15 {
            return Err(format!(
                "cubic counts: g=4 -> {c4} (want 51), g=3 -> {c3} (want 15)"
            ));
        }
        let s4 = monomials_of_degree(4, 3).len();
        let s3 = monomials_of_degree(3, 3).len();
        if s4 != 816 || s3 != 120 {
            return Err(format!(
                "cubic space dims: g=4 -> {s4} (want 816), g=3 -> {s3} (want 120)"
            ));
        }
        Ok("quartic counts g=2..5, cubics 51/15, dims 816/120".into())
    })
}

/// Criterion 4: the d/dX_0 isomorphism round-trips the full quartic basis for
/// g <= 4 and the partials are the translation orbit of dQ/dX_0.
pub fn criterion_partial_isomorphism() -> CriterionResult {
    run(4, "d/dX0 isomorphism", || {
        for g in 2..=4usize {
            let x0 = BitVec::zero(g);
            for (_, q) in invariants::quartic_basis(g).map_err(|e| e.to_string())? {
                let f = q.partial_derivative(&x0);
                let back = invariants::quartic_from_cubic(&f).map_err(|e| e.to_string())?;
                if back != q {
                    return Err(format!("round trip failed at g={g}"));
                }
                for sigma in BitVec::all(g) {
                    let lhs = q.partial_derivative(&sigma);
                    let rhs = f
                        .heis_act(&invariants::translation_lift(&sigma))
                        .map_err(|e| e.to_string())?;
                    if lhs != rhs {
                        return Err(format!(
                            "partial orbit failed at g={g}, sigma={}",
                            sigma.bits()
                        ));
                    }
                }
            }
        }
        Ok("round trip and partial orbits exact for g = 2, 3, 4".into())
    })
}

/// Criterion 5: the combined eigenspace restriction has full rank 15 (g=3)
/// and 51 (g=4), within 10 seconds.
pub fn criterion_restriction_injectivity() -> CriterionResult {
    run(5, "eigenspace restriction rank", || {
        let start = std::time::Instant::now();
        let c3 = invariants::combined_restriction_is_injective(3).map_err(|e| e.to_string())?;
        let c4 = invariants::combined_restriction_is_injective(4).map_err(|e| e.to_string())?;
        if !(c3.injective && c3.rank == 15) {
            return Err(format!("g=3: rank {}/{}", c3.rank, c3.dim));
        }
        if !(c4.injective && c4.rank == 51) {
            return Err(format!("g=4: rank {}/{}", c4.rank, c4.dim));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 10.0 {
            return Err(format!("ranks took {elapsed:.2?}, budget 10 s"));
        }
        Ok(format!("rank 15/15 and 51/51, {elapsed:.2?}"))
    })
}

/// Criterion 6: Verlinde numbers and the dimension bookkeeping around them.
pub fn criterion_verlinde() -> CriterionResult {
    run(6, "verlinde numbers", || {
        if verlinde::verlinde_su2(4, 3).map_err(|e| e.to_string())? != big(800) {
            return Err("verlinde(4,3) != 800".into());
        }
        for g in 2..=10usize {
            let v = verlinde::verlinde_su2(g, 1).map_err(|e| e.to_string())?;
            if v != (BigInt::one() << g as u32) {
                return Err(format!("verlinde({g},1) != 2^{g}"));
            }
        }
        if verlinde::invariant_quartic_count(4).map_err(|e| e.to_string())? != big(41) {
            return Err("invariant quartic count at g=4 != 41".into());
        }
        if verlinde::even_theta_dim(3, 6).map_err(|e| e.to_string())? != big(112) {
            return Err("even theta dim (3,6) != 112".into());
        }
        let kernel = verlinde::sym_power_dim(4, 3)
            - verlinde::verlinde_su2(4, 3).map_err(|e| e.to_string())?;
        if kernel != big(16) {
            return Err(format!("816 - 800 = {kernel}, want 16 = 2^4"));
        }
        Ok("800, 2^g for g<=10, 41, 112, cubic kernel 16".into())
    })
}

/// Criterion 7: the ample-class self-intersection equals the closed form for
/// all 1 <= d <= g <= 8 and is negative exactly off d in {1, 2, g-1, g} for
/// 5 <= g <= 8.
pub fn criterion_self_intersection() -> CriterionResult {
    run(7, "self-intersection formula", || {
        for g in 1..=8usize {
            for d in 1..=g {
                let si = chow::ample_self_intersection(g, d).map_err(|e| e.to_string())?;
                if si.ring_route != si.closed_form {
                    return Err(format!("routes disagree at g={g}, d={d}"));
                }
                if g >= 5 {
                    let covered = d == 1 || d == 2 || d == g - 1 || d == g;
                    if si.closed_form.is_negative() == covered {
                        return Err(format!(
                            "negativity pattern broken at g={g}, d={d}: value {}",
                            si.closed_form
                        ));
                    }
                }
            }
        }
        Ok("closed form matches ring route, negativity pattern as stated".into())
    })
}

/// Criterion 8: kernel dimensions on sampled points with certified spectral
/// gaps, under 60 seconds at double precision.
pub fn criterion_numeric_kernels() -> CriterionResult {
    run(8, "numeric kernel dimensions", || {
        let start = std::time::Instant::now();
        let tau2 = thetanum::random_tau(2, 2024).map_err(|e| e.to_string())?;
        let labelled = invariants::quartic_basis(2).map_err(|e| e.to_string())?;
        let basis: Vec<ThetaPoly<Complex64>> =
            labelled.iter().map(|(_, q)| q.to_complex()).collect();
        let pts: Vec<thetanum::KummerPoint> = thetanum::sample_kummer(&tau2, 30, 1)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let k2 =
            thetanum::relation_kernel(&pts, &basis, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
        if k2.kernel_dim != 1 {
            return Err(format!("g=2 quartic kernel dim {}, want 1", k2.kernel_dim));
        }
        if k2.gap_ratio.unwrap_or(0.0) < MIN_GAP_RATIO {
            return Err("g=2 spectral gap not certified".into());
        }

        let tau3 = thetanum::random_tau(3, 2024).map_err(|e| e.to_string())?;
        let k8 = thetanum::full_cubic_kernel_dim(&tau3, 1, DEFAULT_RANK_TOL)
            .map_err(|e| e.to_string())?;
        if k8.kernel_dim != 8 {
            return Err(format!(
                "g=3 full cubic kernel dim {}, want 8",
                k8.kernel_dim
            ));
        }
        if k8.gap_ratio.unwrap_or(0.0) < MIN_GAP_RATIO {
            return Err("g=3 cubic spectral gap not certified".into());
        }

        let inv_basis: Vec<ThetaPoly<Complex64>> = invariants::k_invariant_cubics(3)
            .map_err(|e| e.to_string())?
            .iter()
            .map(ThetaPoly::to_complex)
            .collect();
        let pts: Vec<thetanum::KummerPoint> = thetanum::sample_kummer(&tau3, 50, 2)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let k1 = thetanum::relation_kernel(&pts, &inv_basis, DEFAULT_RANK_TOL)
            .map_err(|e| e.to_string())?;
        if k1.kernel_dim != 1 {
            return Err(format!(
                "g=3 invariant cubic kernel dim {}, want 1",
                k1.kernel_dim
            ));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 60.0 {
            return Err(format!("kernels took {elapsed:.2?}, budget 60 s"));
        }
        Ok(format!(
            "dims 1/8/1 with gaps {:.1e}, {:.1e}, {:.1e}, {elapsed:.2?}",
            k2.gap_ratio.unwrap_or(f64::INFINITY),
            k8.gap_ratio.unwrap_or(f64::INFINITY),
            k1.gap_ratio.unwrap_or(f64::INFINITY)
        ))
    })
}

/// Criterion 9: the genus-3 reconstruction agrees across three seeds and
/// passes the vanishing, gradient and invariance residual gates.
pub fn criterion_coble_reconstruction() -> CriterionResult {
    run(9, "coble reconstruction", || {
        let tau = thetanum::random_tau(3, 424242).map_err(|e| e.to_string())?;
        let runs: Vec<thetanum::ReconstructedQuartic> = [11u64, 22, 33]
            .iter()
            .map(|&seed| thetanum::coble_quartic(&tau, seed, DEFAULT_RANK_TOL))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for q in &runs {
            if q.value_residual >= 1e-8 {
                return Err(format!("value residual {:.3e}", q.value_residual));
            }
            if q.partial_residual.unwrap_or(1.0) >= 1e-8 {
                return Err(format!("partial residual {:?}", q.partial_residual));
            }
            if q.invariance_residual >= 1e-10 {
                return Err(format!("invariance residual {:.3e}", q.invariance_residual));
            }
        }
        let mut max_dev = 0.0f64;
        for other in &runs[1..] {
            for ((m1, c1), (m2, c2)) in runs[0].quartic.terms().zip(other.quartic.terms()) {
                if m1 != m2 {
                    return Err("monomial supports differ across seeds".into());
                }
                max_dev = max_dev.max((c1 - c2).norm());
            }
        }
        if max_dev >= 1e-6 {
            return Err(format!("seed deviation {max_dev:.3e} exceeds 1e-6"));
        }
        Ok(format!(
            "three seeds agree to {:.1e}; residuals {:.1e}/{:.1e}/{:.1e}",
            max_dev,
            runs[0].value_residual,
            runs[0].partial_residual.unwrap_or(f64::NAN),
            runs[0].invariance_residual
        ))
    })
}

/// Criterion 10: the differentiation identity on 200 random pairs per genus,
/// and the Weil pairing against commutator scalars, exhaustively.
pub fn criterion_structural_identities() -> CriterionResult {
    run(10, "structural identities", || {
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        for g in [2usize, 3, 4] {
            for _ in 0..200 {
                let p = random_poly(&mut rng, g);
                let a = BitVec::new(rng.gen_range(0..1 << g), g).map_err(|e| e.to_string())?;
                let chi = BitVec::new(rng.gen_range(0..1 << g), g).map_err(|e| e.to_string())?;
                let x = HeisElem::unit(a, chi).map_err(|e| e.to_string())?;
                let b = BitVec::new(rng.gen_range(0..1 << g), g).map_err(|e| e.to_string())?;
                let lhs = p
                    .heis_act(&x)
                    .map_err(|e| e.to_string())?
                    .partial_derivative(&b);
                let inner = p.partial_derivative(&a.add(&b).map_err(|e| e.to_string())?);
                let mut rhs = inner.heis_act(&x).map_err(|e| e.to_string())?;
                if crate::bits::char_eval(&chi, &b).map_err(|e| e.to_string())? < 0 {
                    rhs = rhs.neg();
                }
                if lhs != rhs {
                    return Err(format!("differentiation identity failed at g={g}"));
                }
            }
        }
        for g in [2usize, 3] {
            for a in BitVec::all(g) {
                for chi in BitVec::all(g) {
                    let p = TwoTorsionPoint::new(a, chi).map_err(|e| e.to_string())?;
                    for b in BitVec::all(g) {
                        for gamma in BitVec::all(g) {
                            let q = TwoTorsionPoint::new(b, gamma).map_err(|e| e.to_string())?;
                            let x = p.lift();
                            let y = q.lift();
                            let comm = x
                                .mul(&y)
                                .and_then(|xy| xy.mul(&x.inverse()))
                                .and_then(|m| m.mul(&y.inverse()))
                                .map_err(|e| e.to_string())?;
                            let e = heis::weil_pairing(&p, &q).map_err(|e| e.to_string())?;
                            if comm.scalar != BigRational::from_i64(e as i64).unwrap() {
                                return Err(format!("pairing mismatch at g={g}"));
                            }
                        }
                    }
                }
            }
        }
        Ok("600 differentiation pairs exact; pairing exhaustive for g = 2, 3".into())
    })
}

fn random_poly(rng: &mut ChaCha20Rng, g: usize) -> ThetaPoly<BigRational> {
    let mut p = ThetaPoly::zero(g);
    let degree = rng.gen_range(1..=4usize);
    for _ in 0..6 {
        let idx: Vec<u32> = (0..degree).map(|_| rng.gen_range(0..1u32 << g)).collect();
        let c = BigRational::new(
            rng.gen_range(-5i64..=5).into(),
            rng.gen_range(1i64..=4).into(),
        );
        p.add_term(Monomial::from_indices(&idx), c);
    }
    p
}

/// Runs the whole gate in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_chern_table(),
        criterion_euler_routes(),
        criterion_invariant_dimensions(),
        criterion_partial_isomorphism(),
        criterion_restriction_injectivity(),
        criterion_verlinde(),
        criterion_self_intersection(),
        criterion_numeric_kernels(),
        criterion_coble_reconstruction(),
        criterion_structural_identities(),
    ]
}
