//! Finitely generated commutative groups given by generators and relations,
//! their reductions `A/dA`, and the univalence test for induced maps
//! `f_d : B/dB → A/dA`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::smith::{
    identity, integer_kernel, smith_normal_form, transpose, HermiteBasis, IntMatrix,
};
use crate::error::{Error, Result};

/// `Z^generators / ⟨relations⟩`, relations stored as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

/// Invariant-factor description: `Z^free_rank ⊕ ⊕ Z/tᵢ` with `tᵢ > 1`,
/// `t₁ | t₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Invariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for Invariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..self.free_rank {
            parts.push("Z".into());
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.iter().any(|r| r.len() != generators) {
            return Err(Error::DimensionMismatch(format!(
                "relation rows must have {generators} entries"
            )));
        }
        Ok(Presentation {
            generators,
            relations,
        })
    }

    pub fn free(rank: usize) -> Self {
        Presentation {
            generators: rank,
            relations: Vec::new(),
        }
    }

    /// `⊕ Z/aᵢ`, where `aᵢ = 0` contributes a free summand.
    pub fn diagonal(orders: &[i64]) -> Self {
        let n = orders.len();
        let relations = orders
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::from(a);
                r
            })
            .collect();
        Presentation {
            generators: n,
            relations,
        }
    }

    pub fn invariants(&self) -> Invariants {
        if self.relations.is_empty() {
            return Invariants {
                free_rank: self.generators,
                torsion: Vec::new(),
            };
        }
        let snf = smith_normal_form(&self.relations, self.relations.len(), self.generators);
        let diag = snf.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        Invariants {
            free_rank: self.generators - nonzero,
            torsion: diag.into_iter().filter(|x| x > &BigInt::one()).collect(),
        }
    }

    pub fn relation_lattice(&self) -> HermiteBasis {
        HermiteBasis::new(&self.relations, self.generators)
    }

    /// Presentation with the extra relations `d·eᵢ`.
    fn with_multiples(&self, d: u64) -> Presentation {
        let mut relations = self.relations.clone();
        if d > 0 {
            for mut row in identity(self.generators) {
                row.iter_mut().for_each(|x| *x *= d);
                relations.push(row);
            }
        }
        Presentation {
            generators: self.generators,
            relations,
        }
    }
}

/// Presentation of `A/dA ≃ A ⊗ Z/dZ`, re-reduced into diagonal form.
pub fn tensor_mod_d(a: &Presentation, d: u64) -> Presentation {
    let inv = a.with_multiples(d).invariants();
    from_invariants(&inv)
}

pub fn from_invariants(inv: &Invariants) -> Presentation {
    let n = inv.free_rank + inv.torsion.len();
    let relations = inv
        .torsion
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = t.clone();
            r
        })
        .collect();
    Presentation {
        generators: n,
        relations,
    }
}

/// A homomorphism `B → A` given on generators: `f(x) = matrix · x`, where
/// `matrix` has `target.generators` rows and `source.generators` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: Presentation,
    pub target: Presentation,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.len() != target.generators
            || matrix.iter().any(|r| r.len() != source.generators)
        {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix must be {}x{}",
                target.generators, source.generators
            )));
        }
        let hom = GroupHom {
            source,
            target,
            matrix,
        };
        let lattice = hom.target.relation_lattice();
        for rel in &hom.source.relations {
            if !lattice.contains(&hom.apply(rel)) {
                return Err(Error::InvalidHom(format!(
                    "relation {:?} is not mapped into the target relations",
                    rel.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                )));
            }
        }
        Ok(hom)
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kernel of `f_d : B/dB → A/dA` as an abstract group.
    pub fn kernel_mod_d(&self, d: u64) -> Invariants {
        let src = self.source.with_multiples(d);
        let tgt = self.target.with_multiples(d);
        let nb = self.source.generators;
        let na = self.target.generators;
        let ra = tgt.relations.len();
        // x ∈ K  ⟺  F x = Rᵀ y for some y:  kernel of [F | -Rᵀ].
        let rt = transpose(&tgt.relations, na);
        let combined: IntMatrix = (0..na)
            .map(|i| {
                let mut row = self.matrix[i].clone();
                row.extend(rt[i].iter().map(|x| -x));
                row
            })
            .collect();
        let kernel = integer_kernel(&combined, na, nb + ra);
        let k_gens: IntMatrix = kernel.into_iter().map(|v| v[..nb].to_vec()).collect();
        let k_basis = HermiteBasis::new(&k_gens, nb);
        let coords: IntMatrix = src
            .relations
            .iter()
            .map(|r| {
                k_basis
                    .coordinates(r)
                    .expect("relations of B/dB lie in the kernel lattice")
            })
            .collect();
        let quotient = Presentation {
            generators: k_basis.rank(),
            relations: coords,
        };
        quotient.invariants()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoVerdict {
    pub d: u64,
    pub univalent: bool,
    pub kernel: Invariants,
}

/// Tests univalence of `f_d` for `d = 0, 1, …, d_max` (`d = 0` is `f`
/// itself).
pub fn check_mono_condition(f: &GroupHom, d_max: u64) -> Vec<MonoVerdict> {
    (0..=d_max)
        .map(|d| {
            let kernel = f.kernel_mod_d(d);
            MonoVerdict {
                d,
                univalent: kernel.is_trivial(),
                kernel,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::smith::to_int_matrix;

    fn inv(free: usize, torsion: &[i64]) -> Invariants {
        Invariants {
            free_rank: free,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    #[test]
    fn tensor_examples() {
        let z = Presentation::free(1);
        assert_eq!(tensor_mod_d(&z, 2).invariants(), inv(0, &[2]));
        let z6 = Presentation::diagonal(&[6]);
        assert_eq!(tensor_mod_d(&z6, 4).invariants(), inv(0, &[2]));
        let z_z3 = Presentation::diagonal(&[0, 3]);
        assert_eq!(tensor_mod_d(&z_z3, 3).invariants(), inv(0, &[3, 3]));
        assert_eq!(tensor_mod_d(&z_z3, 0).invariants(), inv(1, &[3]));
    }

    #[test]
    fn two_z_into_z_fails_mod_two() {
        // B = 2Z ≅ Z with generator 2; the inclusion is 1 ↦ 2.
        let f = GroupHom::new(
            Presentation::free(1),
            Presentation::free(1),
            to_int_matrix(&[vec![2]]),
        )
        .unwrap();
        let v = check_mono_condition(&f, 3);
        assert!(v[0].univalent, "the inclusion itself is injective");
        assert!(v[1].univalent);
        assert!(!v[2].univalent);
        assert_eq!(v[2].kernel, inv(0, &[2]));
        assert!(v[3].univalent);
    }

    #[test]
    fn identity_always_univalent() {
        let f = GroupHom::new(
            Presentation::free(1),
            Presentation::free(1),
            to_int_matrix(&[vec![1]]),
        )
        .unwrap();
        assert!(check_mono_condition(&f, 12).iter().all(|v| v.univalent));
    }

    #[test]
    fn times_three_kernel() {
        let f = GroupHom::new(
            Presentation::free(1),
            Presentation::free(1),
            to_int_matrix(&[vec![3]]),
        )
        .unwrap();
        let v = check_mono_condition(&f, 3);
        assert!(!v[3].univalent);
        assert_eq!(v[3].kernel, inv(0, &[3]));
    }

    #[test]
    fn rejects_non_hom() {
        // Z/2 → Z/3, 1 ↦ 1 does not respect 2·1 = 0.
        let r = GroupHom::new(
            Presentation::diagonal(&[2]),
            Presentation::diagonal(&[3]),
            to_int_matrix(&[vec![1]]),
        );
        assert!(matches!(r, Err(Error::InvalidHom(_))));
    }
}
