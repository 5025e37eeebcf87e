use crate::error::{Error, Result};
use std::sync::Arc;

/// A finite field of order q, q prime or in {4, 8, 9}, as explicit
/// add/mul/inverse tables over element indices `0..q`.
///
/// Index 0 is zero and index 1 is one. Non-prime fields are built from a
/// fixed irreducible polynomial (x^2+x+1 over GF(2), x^3+x+1 over GF(2),
/// x^2+1 over GF(3)); elements are encoded as base-p digit strings of their
/// coefficient vectors, so e.g. in GF(4) index 2 is x and 3 is x+1.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    q: usize,
    p: usize,
    add: Arc<Vec<u8>>,
    mul: Arc<Vec<u8>>,
    inv: Arc<Vec<u8>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for FieldSpec {}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(q: usize) -> Result<Self> {
        if q > 255 {
            return Err(Error::Capacity(format!("field order {q} above 255")));
        }
        let (p, deg, poly): (usize, usize, &[usize]) = if is_prime(q) {
            (q, 1, &[])
        } else {
            match q {
                4 => (2, 2, &[1, 1]),    // x^2 + x + 1
                8 => (2, 3, &[1, 1, 0]), // x^3 + x + 1
                9 => (3, 2, &[1, 0]),    // x^2 + 1
                _ => {
                    return Err(Error::Domain(format!(
                        "field order {q} unsupported: need a prime or one of 4, 8, 9"
                    )))
                }
            }
        };

        let digits = |x: usize| -> Vec<usize> {
            let mut v = vec![0; deg];
            let mut x = x;
            for d in v.iter_mut() {
                *d = x % p;
                x /= p;
            }
            v
        };
        let undigits = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let da = digits(a);
                let db = digits(b);
                let ds: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&ds) as u8;

                // Polynomial product reduced by the irreducible polynomial.
                let mut prod = vec![0usize; 2 * deg];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for i in (deg..2 * deg).rev() {
                    let c = prod[i];
                    if c != 0 {
                        prod[i] = 0;
                        // x^deg = -(poly), poly listed low-to-high.
                        for (j, &pc) in poly.iter().enumerate() {
                            let sub = (c * pc) % p;
                            prod[i - deg + j] = (prod[i - deg + j] + p - sub) % p;
                        }
                    }
                }
                mul[a * q + b] = undigits(&prod[..deg]) as u8;
            }
        }

        let mut inv = vec![0u8; q];
        for a in 1..q {
            let mut found = None;
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    found = Some(b as u8);
                    break;
                }
            }
            inv[a] = found
                .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse in GF({q})")))?;
        }

        let f = FieldSpec {
            q,
            p,
            add: Arc::new(add),
            mul: Arc::new(mul),
            inv: Arc::new(inv),
        };
        if q <= 16 {
            f.verify_axioms()?;
        }
        Ok(f)
    }

    /// Exhaustive field-axiom check (associativity, distributivity,
    /// commutativity, identities, inverses). Used at construction for small q.
    fn verify_axioms(&self) -> Result<()> {
        let q = self.q as u8;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.mul(a, 0) != 0 {
                return Err(Error::Invalid("field identity axiom fails".into()));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::Invalid("field commutativity fails".into()));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return Err(Error::Invalid("field ring axiom fails".into()));
                    }
                }
            }
        }
        for a in 1..q {
            if self.mul(a, self.inv(a)) != 1 {
                return Err(Error::Invalid("field inverse fails".into()));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        // -a is the additive inverse; scan-free for characteristic 2.
        if self.p == 2 {
            return a;
        }
        for b in 0..self.q as u8 {
            if self.add(a, b) == 0 {
                return b;
            }
        }
        unreachable!("no additive inverse")
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    /// Nonzero elements, ascending.
    pub fn units(&self) -> impl Iterator<Item = u8> {
        1..self.q as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_are_modular() {
        let f = FieldSpec::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.neg(2), 5);
    }

    #[test]
    fn gf4_has_multiplicative_order_three() {
        let f = FieldSpec::new(4).unwrap();
        let w = 2u8; // x
        assert_eq!(f.mul(w, w), 3); // x^2 = x + 1
        assert_eq!(f.mul(f.mul(w, w), w), 1); // x^3 = 1
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn gf8_and_gf9_construct() {
        for q in [8, 9] {
            let f = FieldSpec::new(q).unwrap();
            // every unit has an order dividing q-1
            for a in f.units() {
                let mut x = a;
                let mut ord = 1;
                while x != 1 {
                    x = f.mul(x, a);
                    ord += 1;
                    assert!(ord <= q);
                }
                assert_eq!((q - 1) % ord, 0);
            }
        }
    }

    #[test]
    fn unsupported_orders_rejected() {
        assert!(FieldSpec::new(6).is_err());
        assert!(FieldSpec::new(16).is_err());
    }
}
