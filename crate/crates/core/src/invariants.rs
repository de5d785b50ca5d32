//! The invariant quartic basis, level-subgroup invariant cubics, the
//! d/dX_0 isomorphism between them, and eigenspace restriction maps.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::{char_eval, BitVec};
use crate::error::{Error, Result};
use crate::heis::HeisElem;
use crate::par::par_map;
use crate::poly::{monomials_of_degree, Monomial, ThetaPoly};
use crate::ratmat::RatMatrix;

/// Label of a basis element of the space of invariant quartics.
///
/// `Q0` is the sum of fourth powers, `Qlambda` the sum of products of squares
/// along a nonzero translation, and `QLambda` the orbit product over a
/// 2-dimensional subspace stored as its three nonzero elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuarticLabel {
    Q0,
    Qlambda(BitVec),
    QLambda([BitVec; 3]),
}

/// Wire form of [`QuarticLabel`]: `{"type": ..., "data": [bitmasks]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct QuarticLabelJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub data: Vec<u32>,
}

impl QuarticLabel {
    pub fn to_json(&self) -> QuarticLabelJson {
        match self {
            QuarticLabel::Q0 => QuarticLabelJson {
                kind: "Q0".into(),
                data: vec![],
            },
            QuarticLabel::Qlambda(l) => QuarticLabelJson {
                kind: "Qlam".into(),
                data: vec![l.bits()],
            },
            QuarticLabel::QLambda(t) => QuarticLabelJson {
                kind: "QLam".into(),
                data: t.iter().map(BitVec::bits).collect(),
            },
        }
    }
}

fn check_genus_range(g: usize) -> Result<()> {
    if !(2..=8).contains(&g) {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 2,
            max: 8,
        });
    }
    Ok(())
}

/// Labelled basis of the invariant quartic space.
pub type LabelledQuarticBasis = Vec<(QuarticLabel, ThetaPoly<BigRational>)>;

/// Complex coefficients in the labelled invariant-quartic basis.
pub type LabelledComplexCoeffs = Vec<(QuarticLabel, Complex64)>;

/// Number of invariant quartic basis elements: (2^g+1)(2^(g-1)+1)/3.
pub fn quartic_basis_size(g: usize) -> usize {
    ((1usize << g) + 1) * ((1usize << (g - 1)) + 1) / 3
}

/// The displayed basis of the invariant quartics, labelled.
///
/// Every element is fixed by all lifts of the 2-torsion group; the three
/// families have pairwise disjoint monomial support, so the list is linearly
/// independent over Q.
pub fn quartic_basis(g: usize) -> Result<LabelledQuarticBasis> {
    check_genus_range(g)?;
    let n = 1u32 << g;
    let mut basis = Vec::with_capacity(quartic_basis_size(g));

    let q0 = ThetaPoly::from_terms(
        g,
        (0..n).map(|s| (Monomial::from_indices(&[s, s, s, s]), BigRational::one())),
    );
    basis.push((QuarticLabel::Q0, q0));

    for lambda in 1..n {
        let q = ThetaPoly::from_terms(
            g,
            (0..n).map(|s| {
                (
                    Monomial::from_indices(&[s, s, s ^ lambda, s ^ lambda]),
                    BigRational::one(),
                )
            }),
        );
        basis.push((QuarticLabel::Qlambda(BitVec::new(lambda, g)?), q));
    }

    for lambda in 1..n {
        for mu in lambda + 1..n {
            let nu = lambda ^ mu;
            if nu <= mu {
                continue; // keep one representative {lambda < mu < nu} per subspace
            }
            let q = ThetaPoly::from_terms(
                g,
                (0..n).map(|s| {
                    (
                        Monomial::from_indices(&[s, s ^ lambda, s ^ mu, s ^ nu]),
                        BigRational::one(),
                    )
                }),
            );
            let label = QuarticLabel::QLambda([
                BitVec::new(lambda, g)?,
                BitVec::new(mu, g)?,
                BitVec::new(nu, g)?,
            ]);
            basis.push((label, q));
        }
    }
    debug_assert_eq!(basis.len(), quartic_basis_size(g));
    Ok(basis)
}

/// Monomial basis of the level-subgroup invariant cubics: the X_a X_b X_c
/// with a+b+c = 0, in canonical monomial order. Genus 1 is allowed because
/// the eigenspace restrictions land there when g = 2.
pub fn k_invariant_cubic_monomials(g: usize) -> Result<Vec<Monomial>> {
    if !(1..=8).contains(&g) {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 1,
            max: 8,
        });
    }
    Ok(monomials_of_degree(g, 3)
        .into_iter()
        .filter(|m| m.index_sum(g).is_zero())
        .collect())
}

/// Same basis as polynomials with unit coefficients.
pub fn k_invariant_cubics(g: usize) -> Result<Vec<ThetaPoly<BigRational>>> {
    Ok(k_invariant_cubic_monomials(g)?
        .into_iter()
        .map(|m| ThetaPoly::from_terms(g, [(m, BigRational::one())]))
        .collect())
}

/// Expected count 1 + (2^g-1) + (2^g-1)(2^g-2)/6 of invariant cubic monomials.
pub fn k_invariant_cubic_count(g: usize) -> usize {
    let n = 1usize << g;
    1 + (n - 1) + (n - 1) * (n - 2) / 6
}

/// The matrix of d/dX_0 from the invariant quartic basis to the invariant
/// cubic monomial basis, along with both bases.
pub fn partial0_matrix(g: usize) -> Result<(LabelledQuarticBasis, Vec<Monomial>, RatMatrix)> {
    let basis = quartic_basis(g)?;
    let cubics = k_invariant_cubic_monomials(g)?;
    let index: std::collections::BTreeMap<&Monomial, usize> = cubics.iter().zip(0..).collect();
    let x0 = BitVec::zero(g);
    let mut mat = RatMatrix::zeros(cubics.len(), basis.len());
    for (j, (_, q)) in basis.iter().enumerate() {
        let d = q.partial_derivative(&x0);
        for (m, c) in d.terms() {
            let i = *index
                .get(m)
                .expect("derivative of an invariant quartic is an invariant cubic");
            mat.set(i, j, c.clone());
        }
    }
    Ok((basis, cubics, mat))
}

/// The unique invariant quartic Q with dQ/dX_0 = F, for a level-invariant
/// homogeneous cubic F. Solved exactly on the quartic basis coefficients.
pub fn quartic_from_cubic(f: &ThetaPoly<BigRational>) -> Result<ThetaPoly<BigRational>> {
    let g = f.genus();
    if f.is_zero() {
        check_genus_range(g)?;
        return Ok(ThetaPoly::zero(g));
    }
    let (basis, cubics, mat) = partial0_matrix(g)?;
    let rhs = cubic_coordinates(f, &cubics)?;
    let coeffs = mat.solve(&rhs)?;
    let mut q = ThetaPoly::zero(g);
    for ((_, b), c) in basis.iter().zip(&coeffs) {
        q = q.add(&b.scale(c))?;
    }
    Ok(q)
}

fn cubic_coordinates(f: &ThetaPoly<BigRational>, cubics: &[Monomial]) -> Result<Vec<BigRational>> {
    let index: std::collections::BTreeMap<&Monomial, usize> = cubics.iter().zip(0..).collect();
    let mut rhs = vec![BigRational::zero(); cubics.len()];
    for (m, c) in f.terms() {
        match index.get(m) {
            Some(&i) => rhs[i] = c.clone(),
            None => return Err(Error::NotInvariant),
        }
    }
    Ok(rhs)
}

/// Complex-coefficient version of [`quartic_from_cubic`], used by the numeric
/// reconstructions. The solve reuses the exact rational matrix; the labelled
/// basis coefficients are returned alongside the monomial expansion.
pub fn quartic_from_cubic_complex_with_labels(
    f: &ThetaPoly<Complex64>,
) -> Result<(ThetaPoly<Complex64>, LabelledComplexCoeffs)> {
    let g = f.genus();
    check_genus_range(g)?;
    let (basis, cubics, mat) = partial0_matrix(g)?;
    let index: std::collections::BTreeMap<&Monomial, usize> = cubics.iter().zip(0..).collect();
    let mut rhs = nalgebra::DVector::<Complex64>::zeros(cubics.len());
    for (m, c) in f.terms() {
        match index.get(m) {
            Some(&i) => rhs[i] = *c,
            None => return Err(Error::NotInvariant),
        }
    }
    let n = cubics.len();
    let mut a = nalgebra::DMatrix::<Complex64>::zeros(n, basis.len());
    for r in 0..n {
        for c in 0..basis.len() {
            a[(r, c)] = crate::poly::Coeff::from_rational(mat.get(r, c));
        }
    }
    let lu = a.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidArgument("derivative matrix is singular".into()))?;
    let mut q = ThetaPoly::<Complex64>::zero(g);
    let mut labels = Vec::with_capacity(basis.len());
    for (j, (label, b)) in basis.iter().enumerate() {
        q = q.add(&b.to_complex().scale(&sol[j]))?;
        labels.push((label.clone(), sol[j]));
    }
    Ok((q, labels))
}

/// Complex-coefficient lift without the labelled coefficients.
pub fn quartic_from_cubic_complex(f: &ThetaPoly<Complex64>) -> Result<ThetaPoly<Complex64>> {
    quartic_from_cubic_complex_with_labels(f).map(|(q, _)| q)
}

/// The +1/-1 eigenspace decomposition of the basis under a nonzero element
/// eta of the level subgroup K, together with the relabeling of the +1 part
/// by F_2^(g-1).
#[derive(Clone, Debug)]
pub struct EigenspaceBasis {
    pub eta: BitVec,
    pub plus: Vec<BitVec>,
    pub minus: Vec<BitVec>,
    reindex: Vec<Option<u32>>,
    pivot: usize,
}

impl EigenspaceBasis {
    pub fn genus(&self) -> usize {
        self.eta.genus()
    }

    /// Relabeled index of a +1 basis vector; `None` on the -1 part.
    pub fn reindex(&self, sigma: &BitVec) -> Option<BitVec> {
        self.reindex[sigma.bits() as usize]
            .map(|b| BitVec::new(b, self.genus() - 1).expect("reindex stays in range"))
    }

    /// The deleted coordinate position (lowest set bit of eta).
    pub fn pivot(&self) -> usize {
        self.pivot
    }
}

/// Splits the basis indices along the sign of chi_eta and fixes the
/// identification of the +1 part with F_2^(g-1) by deleting the pivot bit
/// of eta. Any two such choices differ by an invertible relabeling.
pub fn eigenspace_basis(eta: &BitVec, g: usize) -> Result<EigenspaceBasis> {
    if eta.genus() != g {
        return Err(Error::GenusMismatch(eta.genus(), g));
    }
    if eta.is_zero() {
        return Err(Error::InvalidArgument("eta must be nonzero".into()));
    }
    let pivot = eta.lowest_bit().expect("nonzero");
    let mut plus = Vec::with_capacity(1 << (g - 1));
    let mut minus = Vec::with_capacity(1 << (g - 1));
    let mut reindex = vec![None; 1 << g];
    for sigma in BitVec::all(g) {
        if char_eval(eta, &sigma)? == 1 {
            reindex[sigma.bits() as usize] = Some(sigma.delete_bit(pivot).bits());
            plus.push(sigma);
        } else {
            minus.push(sigma);
        }
    }
    Ok(EigenspaceBasis {
        eta: *eta,
        plus,
        minus,
        reindex,
        pivot,
    })
}

/// Restriction to the +1 eigenspace: kills the -1 variables and renames the
/// survivors into the genus-(g-1) coordinate system.
pub fn restrict_to_eigenspace(
    f: &ThetaPoly<BigRational>,
    basis: &EigenspaceBasis,
) -> Result<ThetaPoly<BigRational>> {
    if f.genus() != basis.genus() {
        return Err(Error::GenusMismatch(f.genus(), basis.genus()));
    }
    let mut out = ThetaPoly::zero(basis.genus() - 1);
    for (m, c) in f.terms() {
        let mapped: Option<Vec<u32>> = m
            .indices()
            .iter()
            .map(|&v| basis.reindex[v as usize])
            .collect();
        if let Some(idx) = mapped {
            out.add_term(Monomial::from_indices(&idx), c.clone());
        }
    }
    Ok(out)
}

/// Outcome of assembling the block matrix of all eigenspace restrictions on
/// the invariant cubic basis.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictionCertificate {
    pub g: usize,
    /// Dimension of the space of invariant cubics being restricted.
    pub dim: usize,
    /// Exact rank of the combined restriction matrix.
    pub rank: usize,
    pub injective: bool,
    /// The injectivity statement only applies from genus 3 on; below that the
    /// rank is reported without being asserted.
    pub within_hypothesis: bool,
    /// Empirical outcome of the companion check that restriction to every
    /// -1 eigenspace kills all invariant cubics.
    pub minus_restrictions_vanish: bool,
}

/// Builds the stacked restriction matrix over all nonzero eta in K and
/// returns its exact rank certificate.
pub fn combined_restriction_is_injective(g: usize) -> Result<RestrictionCertificate> {
    check_genus_range(g)?;
    let cubics = k_invariant_cubics(g)?;
    let dim = cubics.len();
    let small = k_invariant_cubic_monomials(g - 1)?;
    let small_index: std::collections::BTreeMap<&Monomial, usize> = small.iter().zip(0..).collect();

    let etas: Vec<BitVec> = BitVec::all(g).skip(1).collect();
    // per-eta coordinate blocks, built in parallel, concatenated in eta order
    let blocks: Vec<Result<Vec<Vec<BigRational>>>> = par_map(etas.clone(), |eta| {
        let basis = eigenspace_basis(&eta, g)?;
        let mut block = vec![vec![BigRational::zero(); small.len()]; dim];
        for (i, f) in cubics.iter().enumerate() {
            let r = restrict_to_eigenspace(f, &basis)?;
            for (m, c) in r.terms() {
                let j = *small_index
                    .get(m)
                    .expect("restriction of an invariant cubic stays invariant");
                block[i][j] = c.clone();
            }
        }
        Ok(block)
    });

    let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); dim];
    for block in blocks {
        let block = block?;
        for (i, row) in block.into_iter().enumerate() {
            rows[i].extend(row);
        }
    }
    let rank = RatMatrix::from_rows(rows)?.rank();

    let minus_vanish = etas.iter().all(|eta| {
        let basis = eigenspace_basis(eta, g).expect("eta nonzero");
        cubics.iter().all(|f| {
            // survives on the -1 part only if every variable is a -1 variable
            f.terms().all(|(m, _)| {
                m.indices()
                    .iter()
                    .any(|&v| basis.reindex[v as usize].is_some())
            })
        })
    });

    Ok(RestrictionCertificate {
        g,
        dim,
        rank,
        injective: rank == dim,
        within_hypothesis: g >= 3,
        minus_restrictions_vanish: minus_vanish,
    })
}

/// The lift (1, sigma, 1) used when comparing partials to the orbit of
/// dQ/dX_0.
pub fn translation_lift(sigma: &BitVec) -> HeisElem {
    HeisElem::unit(*sigma, BitVec::zero(sigma.genus())).expect("valid element")
}
