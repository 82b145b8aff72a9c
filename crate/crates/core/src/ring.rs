//! Arithmetic in Z_n and set algebra over residue sets.
//!
//! Moduli are capped at 64 so that every subset of Z_n fits in one `u64`
//! word. Bit `i` of a [`ResidueSet`] is set iff residue `i` is a member.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, n)`. Always reduced by the [`Modulus`] that produced it.
pub type Residue = u32;

/// The ring Z_n, with its unit group and (for odd primes) the quadratic
/// residues precomputed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus {
    n: u32,
    odd_prime: bool,
    units: u64,
    squares: u64,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Modulus {
    pub const MAX: u32 = 64;

    pub fn new(n: u32) -> Result<Self> {
        if !(2..=Self::MAX).contains(&n) {
            return Err(Error::ModulusOutOfRange(n));
        }
        let odd_prime = n > 2 && is_prime(n);
        let mut units = 0u64;
        let mut squares = 0u64;
        for x in 1..n {
            if gcd(x, n) == 1 {
                units |= 1 << x;
                squares |= 1 << ((x * x) % n);
            }
        }
        Ok(Modulus {
            n,
            odd_prime,
            units,
            squares: if odd_prime { squares } else { 0 },
        })
    }

    /// Like [`Modulus::new`] but rejects anything that is not an odd prime.
    pub fn prime(p: u32) -> Result<Self> {
        let m = Self::new(p)?;
        if !m.odd_prime {
            return Err(Error::NotOddPrime(p));
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn is_odd_prime(&self) -> bool {
        self.odd_prime
    }

    pub fn require_odd_prime(&self) -> Result<()> {
        if self.odd_prime {
            Ok(())
        } else {
            Err(Error::NotOddPrime(self.n))
        }
    }

    /// Mask with the low `n` bits set.
    #[inline]
    pub(crate) fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn reduce(&self, x: i64) -> Residue {
        x.rem_euclid(self.n as i64) as Residue
    }

    pub fn check(&self, x: u32) -> Result<Residue> {
        if x < self.n {
            Ok(x)
        } else {
            Err(Error::ResidueOutOfRange {
                value: x,
                modulus: self.n,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        (a * b) % self.n
    }

    #[inline]
    pub fn is_unit(&self, x: Residue) -> bool {
        x < self.n && self.units >> x & 1 == 1
    }

    pub fn inv(&self, x: Residue) -> Option<Residue> {
        if !self.is_unit(x) {
            return None;
        }
        (1..self.n).find(|&y| self.mul(x, y) == 1)
    }

    /// `true` iff `p ≡ 1 (mod 4)`; only meaningful for odd primes.
    pub fn is_one_mod_four(&self) -> bool {
        self.n % 4 == 1
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Modulus::new(n)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.n
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.n)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Rotate the low `n` bits of `bits` left by `k`, i.e. translate the set by `k`.
#[inline]
pub(crate) fn rotate(bits: u64, k: u32, n: u32, mask: u64) -> u64 {
    if k == 0 {
        bits
    } else {
        ((bits << k) | (bits >> (n - k))) & mask
    }
}

/// A subset of Z_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    bits: u64,
}

impl ResidueSet {
    pub fn empty(modulus: Modulus) -> Self {
        ResidueSet { modulus, bits: 0 }
    }

    pub fn full(modulus: Modulus) -> Self {
        ResidueSet {
            modulus,
            bits: modulus.mask(),
        }
    }

    pub fn singleton(modulus: Modulus, x: Residue) -> Result<Self> {
        Self::from_residues(modulus, [x])
    }

    pub fn from_residues<I: IntoIterator<Item = u32>>(modulus: Modulus, items: I) -> Result<Self> {
        let mut bits = 0u64;
        for x in items {
            bits |= 1 << modulus.check(x)?;
        }
        Ok(ResidueSet { modulus, bits })
    }

    pub(crate) fn from_bits(modulus: Modulus, bits: u64) -> Self {
        ResidueSet {
            modulus,
            bits: bits & modulus.mask(),
        }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn contains(&self, x: Residue) -> bool {
        x < self.modulus.n && self.bits >> x & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn insert(&mut self, x: Residue) -> Result<()> {
        self.bits |= 1 << self.modulus.check(x)?;
        Ok(())
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Residue> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let x = rest.trailing_zeros();
                rest &= rest - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<Residue> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Residue> {
        (self.bits != 0).then(|| self.bits.trailing_zeros())
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_modulus(other)?;
        Ok(ResidueSet::from_bits(self.modulus, self.bits | other.bits))
    }

    pub fn intersection(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_modulus(other)?;
        Ok(ResidueSet::from_bits(self.modulus, self.bits & other.bits))
    }

    /// Complement within Z_n.
    pub fn complement(&self) -> ResidueSet {
        ResidueSet::from_bits(self.modulus, !self.bits)
    }

    /// `-X`.
    pub fn negate(&self) -> ResidueSet {
        let m = self.modulus;
        let bits = self.iter().fold(0u64, |acc, x| acc | 1 << m.neg(x));
        ResidueSet::from_bits(m, bits)
    }

    /// `X + x`.
    pub fn shift(&self, x: Residue) -> ResidueSet {
        let m = self.modulus;
        ResidueSet::from_bits(m, rotate(self.bits, x % m.n, m.n, m.mask()))
    }

    fn same_modulus(&self, other: &ResidueSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.n, other.modulus.n));
        }
        Ok(())
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `U(n)`, the units of Z_n.
pub fn units(m: Modulus) -> ResidueSet {
    ResidueSet::from_bits(m, m.units)
}

/// `Q_p`, the nonzero squares modulo an odd prime.
pub fn quadratic_residues(m: Modulus) -> Result<ResidueSet> {
    m.require_odd_prime()?;
    Ok(ResidueSet::from_bits(m, m.squares))
}

/// `N_p = U(p) \ Q_p`.
pub fn quadratic_nonresidues(m: Modulus) -> Result<ResidueSet> {
    m.require_odd_prime()?;
    Ok(ResidueSet::from_bits(m, m.units & !m.squares))
}

/// `{x + y : x ∈ X, y ∈ Y}`.
pub fn sumset(x: &ResidueSet, y: &ResidueSet) -> Result<ResidueSet> {
    x.same_modulus(y)?;
    let m = x.modulus;
    let (n, mask) = (m.n, m.mask());
    let bits = x
        .iter()
        .fold(0u64, |acc, a| acc | rotate(y.bits, a, n, mask));
    Ok(ResidueSet::from_bits(m, bits))
}

/// `X ∔ X = {a + b : a, b ∈ X, a ≠ b}`.
pub fn restricted_sumset(x: &ResidueSet) -> ResidueSet {
    let m = x.modulus;
    let (n, mask) = (m.n, m.mask());
    let bits = x.iter().fold(0u64, |acc, a| {
        acc | rotate(x.bits & !(1u64 << a), a, n, mask)
    });
    ResidueSet::from_bits(m, bits)
}

/// `u·X` for a unit `u`.
pub fn dilate(x: &ResidueSet, u: Residue) -> Result<ResidueSet> {
    let m = x.modulus;
    if !m.is_unit(u) {
        return Err(Error::NonUnitDilation(u));
    }
    let bits = x.iter().fold(0u64, |acc, v| acc | 1 << m.mul(u, v));
    Ok(ResidueSet::from_bits(m, bits))
}

/// Which coset of `Q_p` in `Z_p` a residue lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coset {
    Zero,
    Qp,
    Np,
}

pub fn coset_of(x: Residue, m: Modulus) -> Result<Coset> {
    m.require_odd_prime()?;
    let x = m.check(x)?;
    Ok(if x == 0 {
        Coset::Zero
    } else if m.squares >> x & 1 == 1 {
        Coset::Qp
    } else {
        Coset::Np
    })
}

/// A pair of weight sets `(A, B)`. `B = {0}` encodes the plain
/// `A`-weighted problem.
///
/// `A` excludes 0. `B` may contain 0: the introduction requires
/// `B ⊆ Z_n \ {0}` while the `(Q_p, B)` results allow any `B ⊆ Z_p`, and
/// `B = {0}` is what recovers the `A`-weighted constants.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightPair {
    a: ResidueSet,
    b: ResidueSet,
}

impl WeightPair {
    pub fn new(a: ResidueSet, b: ResidueSet) -> Result<Self> {
        a.same_modulus(&b)?;
        if a.is_empty() {
            return Err(Error::InvalidWeights("A is empty".into()));
        }
        if a.contains(0) {
            return Err(Error::InvalidWeights("A contains 0".into()));
        }
        if b.is_empty() {
            return Err(Error::InvalidWeights("B is empty".into()));
        }
        Ok(WeightPair { a, b })
    }

    /// `(Q_p, 1)`.
    pub fn qp_ones(m: Modulus) -> Result<Self> {
        Self::new(quadratic_residues(m)?, ResidueSet::singleton(m, 1)?)
    }

    /// `(Q_p, 0)`, i.e. plain `Q_p` weights.
    pub fn qp_plain(m: Modulus) -> Result<Self> {
        Self::new(quadratic_residues(m)?, ResidueSet::singleton(m, 0)?)
    }

    #[inline]
    pub fn a(&self) -> &ResidueSet {
        &self.a
    }

    #[inline]
    pub fn b(&self) -> &ResidueSet {
        &self.b
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.a.modulus
    }

    /// `B = {1}`: the case in which translates preserve zero-sums.
    pub fn b_is_ones(&self) -> bool {
        self.b.bits == 0b10
    }
}

impl fmt::Debug for WeightPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(A={:?}, B={:?}) mod {}", self.a, self.b, self.a.modulus.n)
    }
}
