//! Genus numbers of abelian extensions of `Q`.
//!
//! With `h(Q) = 1` and `Z^* = {+-1}` the genus number is
//! `g = e_inf * prod_p e_p / (|G| * iota)`, where `iota = [Z^* : Z^* cap N]` is
//! 1 when `-1` is a local norm everywhere and 2 otherwise. The narrow genus
//! number drops both the archimedean index and the unit term:
//! `g+ = prod_p e_p / |G|`. Both must be integers; anything else is a bug in
//! the local computations and is reported as an error.

use serde::{Deserialize, Serialize};

use crate::characters::ResidueCharacter;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// One `G`-extension of `Q`, with everything the statistics need.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionRecord {
    pub conductor: u64,
    pub group: FiniteAbelianGroup,
    pub surjective: bool,
    pub e_infty: u8,
    /// `(p, e_p)` for the ramified primes, increasing in `p`.
    pub ramification: Vec<(u64, u64)>,
    pub iota: u8,
    pub genus: u64,
    pub narrow_genus: u64,
}

fn exact_div(what: &'static str, numerator: u64, denominator: u64) -> Result<u64> {
    if denominator == 0 || !numerator.is_multiple_of(denominator) {
        return Err(Error::NonIntegral {
            what,
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// `(g, g+)` from the local data.
pub fn genus_pair(group_order: u64, e_infty: u8, prod_e: u64, iota: u8) -> Result<(u64, u64)> {
    let genus = exact_div(
        "genus number",
        e_infty as u64 * prod_e,
        group_order * iota as u64,
    )?;
    let narrow = exact_div("narrow genus number", prod_e, group_order)?;
    if narrow != genus && narrow != 2 * genus {
        return Err(Error::CheckFailed(format!(
            "narrow genus {narrow} over genus {genus} is not 1 or 2"
        )));
    }
    Ok((genus, narrow))
}

fn iota(psi: &ResidueCharacter) -> u8 {
    if psi.unit_is_everywhere_local_norm() {
        1
    } else {
        2
    }
}

fn product_of_indices(psi: &ResidueCharacter) -> u64 {
    psi.ramification_indices().iter().map(|&(_, e)| e).product()
}

/// Genus number of the field cut out by a surjective `psi`.
pub fn genus_number(psi: &ResidueCharacter) -> Result<u64> {
    let order = psi.group().order();
    genus_pair(
        order,
        psi.infinite_ramification(),
        product_of_indices(psi),
        iota(psi),
    )
    .map(|p| p.0)
}

/// Narrow genus number of the field cut out by a surjective `psi`.
pub fn narrow_genus_number(psi: &ResidueCharacter) -> Result<u64> {
    exact_div(
        "narrow genus number",
        product_of_indices(psi),
        psi.group().order(),
    )
}

/// `sum_{eps in Z^*/Z^{*e}} f_eps`, the number of unit classes that are local
/// norms everywhere. Equals `[Z^* : Z^{*e}] / iota`.
pub fn unit_norm_index_sum(psi: &ResidueCharacter) -> Result<u64> {
    let e = psi.group().exponent();
    if e % 2 == 1 {
        return Ok(1);
    }
    // Indicator sum over A = {1, -1} of B = everywhere-local-norm units.
    let indicator_sum = 1 + u64::from(psi.unit_is_everywhere_local_norm());
    let closed_form = exact_div("unit index", 2, iota(psi) as u64)?;
    if indicator_sum != closed_form {
        return Err(Error::CheckFailed(format!(
            "unit indicator sum {indicator_sum} differs from |B| = {closed_form}"
        )));
    }
    Ok(indicator_sum)
}

impl ExtensionRecord {
    pub fn from_character(psi: &ResidueCharacter) -> Result<Self> {
        let ramification = psi.ramification_indices();
        let prod_e = ramification.iter().map(|&(_, e)| e).product();
        let e_infty = psi.infinite_ramification();
        let iota = iota(psi);
        let (genus, narrow_genus) = genus_pair(psi.group().order(), e_infty, prod_e, iota)?;
        Ok(Self {
            conductor: psi.conductor(),
            group: psi.group().clone(),
            surjective: psi.is_surjective(),
            e_infty,
            ramification,
            iota,
            genus,
            narrow_genus,
        })
    }

    /// Number of ramified finite primes.
    pub fn omega_finite(&self) -> usize {
        self.ramification.len()
    }

    /// Number of ramified places, counting the real place when `e_inf = 2`.
    pub fn omega_all(&self) -> usize {
        self.ramification.len() + usize::from(self.e_infty == 2)
    }

    pub const CSV_HEADER: [&'static str; 8] = [
        "conductor",
        "group",
        "genus",
        "narrow_genus",
        "omega_finite",
        "e_infty",
        "iota",
        "ram_primes",
    ];

    pub fn csv_fields(&self) -> [String; 8] {
        let ram = self
            .ramification
            .iter()
            .map(|(p, e)| format!("{p}:{e}"))
            .collect::<Vec<_>>()
            .join(";");
        [
            self.conductor.to_string(),
            self.group.to_string(),
            self.genus.to_string(),
            self.narrow_genus.to_string(),
            self.omega_finite().to_string(),
            self.e_infty.to_string(),
            self.iota.to_string(),
            ram,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{unit_group_structure, LocalCharacter};
    use crate::group::GroupElement;

    fn quad(d: i64) -> ResidueCharacter {
        ResidueCharacter::quadratic(d).unwrap()
    }

    fn cubic_conductor_7() -> ResidueCharacter {
        let z3: FiniteAbelianGroup = "3".parse().unwrap();
        let chi = LocalCharacter::new(
            unit_group_structure(7, 1).unwrap(),
            &z3,
            vec![GroupElement::new(vec![1])],
        )
        .unwrap();
        ResidueCharacter::new(&z3, vec![chi]).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_number(&quad(-20)).unwrap(), 2);
        assert_eq!(genus_number(&quad(-4)).unwrap(), 1);
        assert_eq!(genus_number(&quad(12)).unwrap(), 1);
        assert_eq!(genus_number(&cubic_conductor_7()).unwrap(), 1);
    }

    #[test]
    fn narrow_genus_examples() {
        assert_eq!(narrow_genus_number(&quad(12)).unwrap(), 2);
        assert_eq!(narrow_genus_number(&quad(-20)).unwrap(), 2);
        assert_eq!(narrow_genus_number(&cubic_conductor_7()).unwrap(), 1);
    }

    #[test]
    fn unit_sums() {
        assert_eq!(unit_norm_index_sum(&cubic_conductor_7()).unwrap(), 1);
        assert_eq!(unit_norm_index_sum(&quad(8)).unwrap(), 2);
        assert_eq!(unit_norm_index_sum(&quad(-4)).unwrap(), 1);
    }

    #[test]
    fn non_integral_is_an_error() {
        assert!(matches!(
            genus_pair(4, 1, 2, 1),
            Err(Error::NonIntegral { .. })
        ));
        assert_eq!(genus_pair(2, 2, 4, 2).unwrap(), (2, 2));
    }

    #[test]
    fn record_row() {
        let r = ExtensionRecord::from_character(&quad(-84)).unwrap();
        assert_eq!(r.genus, 4);
        assert_eq!(r.omega_finite(), 3);
        assert_eq!(r.omega_all(), 4);
        assert_eq!(r.csv_fields()[7], "2:2;3:2;7:2");
        assert_eq!(r.csv_fields()[1], "2");
        assert!(r.surjective);
    }

    #[test]
    fn quadratic_genus_is_two_to_the_t_minus_one() {
        for d in -2000i64..2000 {
            if !crate::arith::is_fundamental_discriminant(d) {
                continue;
            }
            let t = crate::arith::factorize(d.unsigned_abs()).len() as u32;
            let psi = quad(d);
            let g = genus_number(&psi).unwrap();
            let gp = narrow_genus_number(&psi).unwrap();
            assert_eq!(gp, 1 << (t - 1), "d = {d}");
            // 2^{omega} bounded by |G| iota g
            let rec = ExtensionRecord::from_character(&psi).unwrap();
            assert!(g * 2 * rec.iota as u64 >= 1 << rec.omega_all());
            assert!(gp == g || gp == 2 * g);
        }
    }
}
