//! C ABI over the arkworks BLS12-381 implementation.
//!
//! A "source" element is a mirrored pair (P1 in G1, P2 in G2) sharing one
//! discrete log, serialized as compressed G1 (48 bytes) followed by
//! compressed G2 (96 bytes).  A "target" element is an Fq12 value in the
//! order-r cyclotomic subgroup, serialized canonically (576 bytes).

use ark_bls12_381::{Bls12_381, Fq12, Fr, FrConfig, G1Affine, G2Affine};
use ark_ec::pairing::Pairing;
use ark_ec::AffineRepr;
use ark_ff::{BigInteger, Field, MontConfig, One, PrimeField};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};

pub const SOURCE_LEN: usize = 48 + 96;
pub const TARGET_LEN: usize = 576;
pub const SCALAR_LEN: usize = 32;

const OK: i32 = 0;
const ERR_DECODE: i32 = 1;
const ERR_GROUP: i32 = 2;

unsafe fn source_in(p: *const u8) -> Result<(G1Affine, G2Affine), i32> {
    let bytes = std::slice::from_raw_parts(p, SOURCE_LEN);
    let p1 = G1Affine::deserialize_compressed(&bytes[..48]).map_err(|_| ERR_DECODE)?;
    let p2 = G2Affine::deserialize_compressed(&bytes[48..]).map_err(|_| ERR_DECODE)?;
    // One encoding per element: reject inputs that do not re-serialize to
    // themselves (e.g. infinity with stray bits set).
    let mut canon = [0u8; SOURCE_LEN];
    source_out(&p1, &p2, canon.as_mut_ptr());
    if canon != bytes {
        return Err(ERR_DECODE);
    }
    Ok((p1, p2))
}

unsafe fn source_out(p1: &G1Affine, p2: &G2Affine, out: *mut u8) {
    let buf = std::slice::from_raw_parts_mut(out, SOURCE_LEN);
    p1.serialize_compressed(&mut buf[..48]).expect("g1 serialize");
    p2.serialize_compressed(&mut buf[48..]).expect("g2 serialize");
}

unsafe fn target_in(p: *const u8) -> Result<Fq12, i32> {
    let bytes = std::slice::from_raw_parts(p, TARGET_LEN);
    let f = Fq12::deserialize_compressed(bytes).map_err(|_| ERR_DECODE)?;
    let mut canon = [0u8; TARGET_LEN];
    target_out(&f, canon.as_mut_ptr());
    if canon != bytes {
        return Err(ERR_DECODE);
    }
    Ok(f)
}

unsafe fn target_out(f: &Fq12, out: *mut u8) {
    let buf = std::slice::from_raw_parts_mut(out, TARGET_LEN);
    f.serialize_compressed(&mut *buf).expect("fq12 serialize");
}

unsafe fn scalar_in(p: *const u8) -> Fr {
    let bytes = std::slice::from_raw_parts(p, SCALAR_LEN);
    Fr::from_be_bytes_mod_order(bytes)
}

#[no_mangle]
pub extern "C" fn nibe_bls381_source_len() -> usize {
    SOURCE_LEN
}

#[no_mangle]
pub extern "C" fn nibe_bls381_target_len() -> usize {
    TARGET_LEN
}

#[no_mangle]
pub extern "C" fn nibe_bls381_scalar_len() -> usize {
    SCALAR_LEN
}

/// Writes the group order r as 32 big-endian bytes.
#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_order(out: *mut u8) {
    let be = FrConfig::MODULUS.to_bytes_be();
    std::slice::from_raw_parts_mut(out, SCALAR_LEN).copy_from_slice(&be);
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_generator(out: *mut u8) -> i32 {
    source_out(&G1Affine::generator(), &G2Affine::generator(), out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_identity(out: *mut u8) -> i32 {
    source_out(&G1Affine::identity(), &G2Affine::identity(), out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_mul(a: *const u8, b: *const u8, out: *mut u8) -> i32 {
    let (a1, a2) = match source_in(a) { Ok(v) => v, Err(e) => return e };
    let (b1, b2) = match source_in(b) { Ok(v) => v, Err(e) => return e };
    source_out(&(a1 + b1).into(), &(a2 + b2).into(), out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_neg(a: *const u8, out: *mut u8) -> i32 {
    let (a1, a2) = match source_in(a) { Ok(v) => v, Err(e) => return e };
    source_out(&-a1, &-a2, out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_exp(a: *const u8, scalar: *const u8, out: *mut u8) -> i32 {
    let (a1, a2) = match source_in(a) { Ok(v) => v, Err(e) => return e };
    let e = scalar_in(scalar);
    source_out(&(a1 * e).into(), &(a2 * e).into(), out);
    OK
}

/// Full validation: decodable, on curve, in the prime-order subgroups, and the
/// two components share one discrete log (checked with the pairing equation
/// e(P1, g2) == e(g1, P2)).
#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_validate(a: *const u8) -> i32 {
    let (p1, p2) = match source_in(a) { Ok(v) => v, Err(e) => return e };
    let lhs = Bls12_381::pairing(p1, G2Affine::generator());
    let rhs = Bls12_381::pairing(G1Affine::generator(), p2);
    if lhs == rhs { OK } else { ERR_GROUP }
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_pair(a: *const u8, b: *const u8, out: *mut u8) -> i32 {
    let (a1, _) = match source_in(a) { Ok(v) => v, Err(e) => return e };
    let (_, b2) = match source_in(b) { Ok(v) => v, Err(e) => return e };
    target_out(&Bls12_381::pairing(a1, b2).0, out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_gt_identity(out: *mut u8) -> i32 {
    target_out(&Fq12::one(), out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_gt_mul(a: *const u8, b: *const u8, out: *mut u8) -> i32 {
    let fa = match target_in(a) { Ok(v) => v, Err(e) => return e };
    let fb = match target_in(b) { Ok(v) => v, Err(e) => return e };
    target_out(&(fa * fb), out);
    OK
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_gt_inv(a: *const u8, out: *mut u8) -> i32 {
    let fa = match target_in(a) { Ok(v) => v, Err(e) => return e };
    match fa.inverse() {
        Some(inv) => {
            target_out(&inv, out);
            OK
        }
        None => ERR_GROUP,
    }
}

#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_gt_exp(a: *const u8, scalar: *const u8, out: *mut u8) -> i32 {
    let fa = match target_in(a) { Ok(v) => v, Err(e) => return e };
    let e = scalar_in(scalar);
    target_out(&fa.pow(e.into_bigint()), out);
    OK
}

/// Valid Fq12 encoding and membership in the order-r subgroup (x^r == 1).
#[no_mangle]
pub unsafe extern "C" fn nibe_bls381_gt_validate(a: *const u8) -> i32 {
    let fa = match target_in(a) { Ok(v) => v, Err(e) => return e };
    if fa.pow(FrConfig::MODULUS) == Fq12::one() { OK } else { ERR_GROUP }
}
