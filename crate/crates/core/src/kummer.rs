//! Discriminant bookkeeping for the generalized Kummer surface of E x E
//! modulo phi x phi^2 and the resulting Artin invariant.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{a2_block, gram_det, sublattice_disc, two_adic_normalize, IntLattice, IntMatrix};
use crate::surfgeom::{compute_v, v_b_lattice, AlphaPosition};

/// Number of A2 points on the quotient.
pub const EXCEPTIONAL_BLOCKS: usize = 9;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArtinResult {
    pub position: AlphaPosition,
    pub v: u32,
    /// Determinant of V_B with the form restricted from V_A.
    pub disc_vb_prime: BigInt,
    pub disc_vb_prime_v2: u32,
    /// Determinant of V_B with the form halved.
    pub disc_vb: BigInt,
    pub disc_exceptional: BigInt,
    /// 2-adic valuation of disc(V_B) * disc(exceptional lattice).
    pub disc_pic_v2: u32,
    /// Odd part discarded as a 2-adic unit.
    pub unit_part: BigInt,
    /// `-2^(2 sigma0)`.
    pub disc_pic: BigInt,
    pub sigma0: u32,
}

pub fn exceptional_lattice(blocks: usize) -> Result<IntLattice> {
    if blocks == 0 {
        return Err(Error::InvalidArgument("at least one block required".into()));
    }
    IntLattice::new(IntMatrix::block_diagonal(&vec![a2_block(); blocks]))
}

pub fn artin_invariant(pos: &AlphaPosition) -> Result<ArtinResult> {
    let v = compute_v(pos)?;
    let vb = v_b_lattice(pos)?;
    let disc_vb_prime = sublattice_disc(&vb)?;
    let closed_form = BigInt::from(-3) * (BigInt::one() << (2 * v));
    if disc_vb_prime != closed_form {
        return Err(Error::Verification(format!(
            "disc(V'_B) = {disc_vb_prime}, expected {closed_form}"
        )));
    }
    let (disc_vb_prime_v2, _) = two_adic_normalize(&disc_vb_prime)?;

    // The form on the quotient is half the form upstairs.
    let gram = vb.gram();
    let mut halved = IntMatrix::zeros(gram.rows(), gram.cols());
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let x = gram.get(i, j);
            if !(x % 2u32).is_zero() {
                return Err(Error::NonIntegral(format!("odd pairing {x} on V_B")));
            }
            halved.set(i, j, x / 2);
        }
    }
    let disc_vb = halved.determinant();
    if &disc_vb << 4 != disc_vb_prime {
        return Err(Error::Verification(format!(
            "halving gives {disc_vb}, not 2^-4 * {disc_vb_prime}"
        )));
    }

    let disc_exceptional = gram_det(&exceptional_lattice(EXCEPTIONAL_BLOCKS)?);
    let total = &disc_vb * &disc_exceptional;
    let (disc_pic_v2, unit_part) = two_adic_normalize(&total)?;
    if disc_pic_v2 != 2 * v - 4 || disc_pic_v2 % 2 != 0 || !total.is_negative() {
        return Err(Error::Verification(format!(
            "discriminant {total} is not of the form -2^(2 sigma0) up to units"
        )));
    }
    let sigma0 = disc_pic_v2 / 2;
    if sigma0 != v - 2 || !(1..=2).contains(&sigma0) {
        return Err(Error::Verification(format!("sigma0 = {sigma0} with v = {v}")));
    }
    Ok(ArtinResult {
        position: pos.clone(),
        v,
        disc_vb_prime,
        disc_vb_prime_v2,
        disc_vb,
        disc_exceptional,
        disc_pic_v2,
        unit_part,
        disc_pic: -(BigInt::one() << disc_pic_v2),
        sigma0,
    })
}

/// Inverts `d = -p^(2 sigma0)`.
pub fn sigma0_from_disc(p: u32, d: &BigInt) -> Result<u32> {
    let mut m = -d;
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("{d} is not negative")));
    }
    let mut e = 0u32;
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    if !m.is_one() || !e.is_multiple_of(2) || e == 0 {
        return Err(Error::InvalidArgument(format!("{d} is not -{p}^(2 sigma0)")));
    }
    Ok(e / 2)
}

/// Picard number of the char-3 Kummer fiber, as 16 exceptional curves plus
/// the rank of the abelian surface.
pub fn kummer_rho_char3() -> (u32, u32, u32) {
    let (exceptional, abelian) = (16, 6);
    (exceptional + abelian, exceptional, abelian)
}

/// Rank of V_B plus the exceptional A2 curves.
pub fn generalized_kummer_rho() -> (u32, u32, u32) {
    let exceptional = (2 * EXCEPTIONAL_BLOCKS) as u32;
    (4 + exceptional, 4, exceptional)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    #[test]
    fn exceptional_determinants() {
        assert_eq!(gram_det(&exceptional_lattice(1).unwrap()), BigInt::from(3));
        let nine = exceptional_lattice(9).unwrap();
        assert_eq!(nine.rank(), 18);
        assert_eq!(gram_det(&nine), BigInt::from(19683));
        assert!(nine.gram().is_negative_definite());
        assert!(exceptional_lattice(0).is_err());
    }

    #[test]
    fn artin_examples() {
        let f16 = field_make(2, 4).unwrap();
        let one = f16.one();
        let a = artin_invariant(&AlphaPosition::new(one.clone(), one.clone()).unwrap()).unwrap();
        assert_eq!((a.sigma0, a.disc_pic.clone()), (1, BigInt::from(-4)));
        assert_eq!(a.disc_vb_prime, BigInt::from(-192));
        assert_eq!(a.disc_vb, BigInt::from(-12));
        let w = f16.generator();
        let b = artin_invariant(&AlphaPosition::new(one, w).unwrap()).unwrap();
        assert_eq!((b.sigma0, b.disc_pic), (2, BigInt::from(-16)));
        assert_eq!(b.disc_vb_prime_v2, 8);
    }

    #[test]
    fn sigma0_inversion() {
        assert_eq!(sigma0_from_disc(2, &BigInt::from(-16)).unwrap(), 2);
        assert_eq!(sigma0_from_disc(2, &BigInt::from(-4)).unwrap(), 1);
        assert!(sigma0_from_disc(2, &BigInt::from(-8)).is_err());
        assert!(sigma0_from_disc(2, &BigInt::from(16)).is_err());
    }

    #[test]
    fn picard_rules() {
        assert_eq!(kummer_rho_char3(), (22, 16, 6));
        assert_eq!(generalized_kummer_rho(), (22, 4, 18));
    }
}
