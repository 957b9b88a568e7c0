//! Reduced binary quadratic forms of negative discriminant.
//!
//! An independent route to the genus number of an imaginary quadratic field:
//! the genus group `Cl/Cl^2` has the same order as `Cl[2]`, and the 2-torsion
//! classes are exactly the ambiguous reduced forms.

use std::fmt;

use crate::arith::{gcd, is_fundamental_discriminant, isqrt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    /// Reduced forms of order dividing 2 in the class group.
    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.a == self.b || self.a == self.c
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn check(d: i64) -> Result<()> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// All reduced primitive forms of discriminant `d < 0`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadraticForm>> {
    check(d)?;
    let n = d.unsigned_abs();
    // a <= sqrt(|d| / 3) for reduced forms.
    let a_max = isqrt(n / 3) as i64;
    let mut forms = Vec::new();
    for a in 1..=a_max {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadraticForm {
                a,
                b,
                c: num / (4 * a),
            };
            if f.is_reduced() && f.is_primitive() {
                forms.push(f);
            }
        }
    }
    Ok(forms)
}

/// `h(d)` as the number of reduced primitive forms.
pub fn class_number(d: i64) -> Result<u64> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// `|Cl/Cl^2|` as the number of ambiguous reduced forms.
pub fn genus_number_forms(d: i64) -> Result<u64> {
    Ok(reduced_forms(d)?
        .iter()
        .filter(|f| f.is_ambiguous())
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert_eq!(class_number(-84).unwrap(), 4);
        assert_eq!(class_number(-3).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-163).unwrap(), 1);
    }

    #[test]
    fn genus_counts() {
        assert_eq!(genus_number_forms(-20).unwrap(), 2);
        assert_eq!(genus_number_forms(-4).unwrap(), 1);
        assert_eq!(genus_number_forms(-84).unwrap(), 4);
        assert_eq!(genus_number_forms(-23).unwrap(), 1);
    }

    #[test]
    fn forms_of_minus_twenty() {
        let forms = reduced_forms(-20).unwrap();
        assert_eq!(
            forms,
            vec![
                QuadraticForm { a: 1, b: 0, c: 5 },
                QuadraticForm { a: 2, b: 2, c: 3 }
            ]
        );
        assert!(forms.iter().all(|f| f.discriminant() == -20));
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(class_number(5).is_err());
        assert!(class_number(-16).is_err());
        assert!(genus_number_forms(-1).is_err());
    }

    #[test]
    fn genus_theory_identities() {
        for d in -3000i64..0 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let t = crate::arith::factorize(d.unsigned_abs()).len() as u32;
            let g = genus_number_forms(d).unwrap();
            assert_eq!(g, 1 << (t - 1), "d = {d}");
            assert_eq!(class_number(d).unwrap() % g, 0, "d = {d}");
        }
    }
}
