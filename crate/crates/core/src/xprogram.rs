//! Secret-keyed X-programs built from quadratic residue codes.
//!
//! An X-program is a list of product-of-Pauli-X terms sharing one angle θ;
//! applied to |0ⁿ⟩ and measured, it realizes an IQP circuit. The keyed
//! variant pairs the public program with the verifier's secret string.
//! Gates are stored as rows of the program matrix (one bit vector per gate).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::gf2::{self, BitVector};
use crate::Error;

/// A public X-program: `gates[k]` acts as ⊗_{i : bit i set} Xᵢ, and the
/// evolution is exp(iθ Σ_k X_{gates[k]}).
#[derive(Clone, PartialEq, Debug)]
pub struct XProgram {
    n_qubits: usize,
    theta: f64,
    gates: Vec<BitVector>,
}

impl XProgram {
    /// Builds a program, rejecting zero gates and length mismatches.
    /// An empty gate list is allowed (identity evolution).
    pub fn new(n_qubits: usize, theta: f64, gates: Vec<BitVector>) -> Result<Self, Error> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("n_qubits must be positive".into()));
        }
        for g in &gates {
            if g.len() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: g.len(),
                });
            }
            if g.is_zero() {
                return Err(Error::InvalidParameter(
                    "the all-zero gate is the identity and is rejected".into(),
                ));
            }
        }
        Ok(XProgram {
            n_qubits,
            theta,
            gates,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gates(&self) -> &[BitVector] {
        &self.gates
    }

    /// One X-term support per gate, as 1-based qubit labels for display:
    /// gate (1,0,1,1,0) becomes {1,3,4}, i.e. X₁X₃X₄.
    pub fn to_hamiltonian_terms(&self) -> Vec<Vec<usize>> {
        self.gates
            .iter()
            .map(|g| g.support().into_iter().map(|i| i + 1).collect())
            .collect()
    }
}

/// An X-program together with the secret string only Alice keeps.
#[derive(Clone, PartialEq, Debug)]
pub struct KeyedProgram {
    program: XProgram,
    secret: BitVector,
}

impl KeyedProgram {
    /// Pairs a program with a secret. The secret must be nonzero and the
    /// main part (gates with p·s = 1) nonempty.
    pub fn new(program: XProgram, secret: BitVector) -> Result<Self, Error> {
        if secret.len() != program.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: program.n_qubits(),
                right: secret.len(),
            });
        }
        if secret.is_zero() {
            return Err(Error::InvalidParameter("secret must be nonzero".into()));
        }
        let kp = KeyedProgram { program, secret };
        if kp.main_part().0.is_empty() {
            return Err(Error::InvalidParameter(
                "main part is empty: no gate overlaps the secret".into(),
            ));
        }
        Ok(kp)
    }

    pub fn program(&self) -> &XProgram {
        &self.program
    }

    pub fn secret(&self) -> &BitVector {
        &self.secret
    }

    /// Splits the gates into (main, redundant): main gates satisfy p·s = 1,
    /// redundant gates p·s = 0. The partition is exhaustive.
    pub fn main_part(&self) -> (Vec<BitVector>, Vec<BitVector>) {
        let mut main = Vec::new();
        let mut redundant = Vec::new();
        for g in self.program.gates() {
            // lengths are validated at construction
            if gf2::inner_product(g, &self.secret).unwrap() == 1 {
                main.push(g.clone());
            } else {
                redundant.push(g.clone());
            }
        }
        (main, redundant)
    }
}

fn check_qrc_prime(q: u64) -> Result<(), Error> {
    if !gf2::is_prime(q) {
        return Err(Error::InvalidParameter(format!("{q} is not prime")));
    }
    if (q + 1) % 8 != 0 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} does not satisfy 8 | (q + 1)"
        )));
    }
    Ok(())
}

/// The q main gates of the QRC construction on n = (q+3)/2 qubits:
/// every gate has qubit 0 set, and qubit m+1 of gate j is set iff
/// j ∈ { (m1 − 1 + m) mod q : m1 a quadratic residue mod q }.
fn qrc_main_gates(q: u64) -> Result<Vec<BitVector>, Error> {
    let n = ((q + 3) / 2) as usize;
    let qr = gf2::quadratic_residues(q)?;
    let mut gates: Vec<BitVector> = (0..q)
        .map(|_| {
            let mut g = BitVector::zeros(n);
            g.set(0, true);
            g
        })
        .collect();
    for m in 0..n - 1 {
        for &m1 in &qr {
            let row = ((m1 - 1 + m as u64) % q) as usize;
            gates[row].set(m + 1, true);
        }
    }
    Ok(gates)
}

/// Generates a keyed QRC program: q main gates, θ = π/8, secret e₁, plus
/// `n_redundant` distinct random nonzero gates orthogonal to the secret
/// (first bit 0).
pub fn generate_qrc_keyed(
    q: u64,
    n_redundant: usize,
    rng: &mut impl Rng,
) -> Result<KeyedProgram, Error> {
    check_qrc_prime(q)?;
    let n = ((q + 3) / 2) as usize;
    let mut gates = qrc_main_gates(q)?;
    {
        let distinct: BTreeSet<&BitVector> = gates.iter().collect();
        assert_eq!(
            distinct.len(),
            gates.len(),
            "QRC main part produced duplicate gates"
        );
    }
    // Distinct nonzero vectors with first bit 0: 2^(n-1) - 1 of them.
    let available = if n - 1 >= 64 {
        u64::MAX
    } else {
        (1u64 << (n - 1)) - 1
    };
    if n_redundant as u64 > available {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {n_redundant} distinct redundant gates on {n} qubits"
        )));
    }
    let mut seen = BTreeSet::new();
    while seen.len() < n_redundant {
        let mut g = BitVector::zeros(n);
        for i in 1..n {
            g.set(i, rng.gen::<bool>());
        }
        if g.is_zero() {
            continue; // retry, as the reference generator does
        }
        if seen.insert(g.clone()) {
            gates.push(g);
        }
    }
    let program = XProgram::new(n, PI / 8.0, gates)?;
    KeyedProgram::new(program, BitVector::basis(n, 0))
}

/// Scrambles a keyed program in place of Alice's column operations: `times`
/// iterations of adding a random qubit-column j into a distinct column i
/// across all gates, with the paired secret update s_j ← s_j ⊕ s_i, then one
/// final shuffle of the (commuting) gate order. The bias with respect to the
/// updated secret is unchanged.
pub fn scramble(
    kp: &KeyedProgram,
    times: usize,
    rng: &mut impl Rng,
) -> Result<KeyedProgram, Error> {
    let n = kp.program().n_qubits();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "scrambling needs at least 2 qubits".into(),
        ));
    }
    let mut gates = kp.program().gates().to_vec();
    let mut secret = kp.secret().clone();
    for _ in 0..times {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        for g in &mut gates {
            if g.get(j) {
                let flipped = !g.get(i);
                g.set(i, flipped);
            }
        }
        let si = secret.get(i);
        if si {
            let flipped = !secret.get(j);
            secret.set(j, flipped);
        }
    }
    // Fisher-Yates; gate order is cosmetic since the terms commute.
    for k in (1..gates.len()).rev() {
        let l = rng.gen_range(0..=k);
        gates.swap(k, l);
    }
    let program = XProgram::new(n, kp.program().theta(), gates)?;
    KeyedProgram::new(program, secret)
}

/// Exact bias via the codeword sum: (1/2^d) Σ_{c ∈ C_QRC} cos²[θ(q − 2|c|)],
/// where C_QRC is spanned by the qubit-columns of the main part and
/// d = (q+1)/2 is its dimension.
pub fn exact_bias_qrc(q: u64, theta: f64) -> Result<f64, Error> {
    check_qrc_prime(q)?;
    let gates = qrc_main_gates(q)?;
    let n = ((q + 3) / 2) as usize;
    // Qubit-columns of the main matrix are length-q generators of the code.
    let generators: Vec<BitVector> = (0..n)
        .map(|col| {
            let mut v = BitVector::zeros(q as usize);
            for (row, g) in gates.iter().enumerate() {
                if g.get(col) {
                    v.set(row, true);
                }
            }
            v
        })
        .collect();
    let codewords = gf2::span_enumerate(&generators)?;
    let dim = codewords.len();
    assert_eq!(dim as u64, 1 << ((q + 1) / 2), "QRC dimension mismatch");
    let sum: f64 = codewords
        .iter()
        .map(|c| {
            let arg = theta * (q as f64 - 2.0 * f64::from(c.hamming_weight()));
            let cos = libm::cos(arg);
            cos * cos
        })
        .sum();
    Ok(sum / dim as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::fixtures::example_keyed_program as example_program;

    #[test]
    fn qrc_q7_matches_generating_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let kp = generate_qrc_keyed(7, 0, &mut rng).unwrap();
        assert_eq!(kp.program().n_qubits(), 5);
        assert_eq!(kp.program().gates().len(), 7);
        assert_eq!(kp.secret(), &BitVector::from_bits(&[1, 0, 0, 0, 0]));
        // Qubit-columns equal r0..r4: all-ones, then cyclic shifts of the
        // quadratic-residue indicator (1,1,0,1,0,0,0).
        let expected: [[u8; 7]; 5] = [
            [1, 1, 1, 1, 1, 1, 1],
            [1, 1, 0, 1, 0, 0, 0],
            [0, 1, 1, 0, 1, 0, 0],
            [0, 0, 1, 1, 0, 1, 0],
            [0, 0, 0, 1, 1, 0, 1],
        ];
        for (col, exp) in expected.iter().enumerate() {
            let column: Vec<u8> = kp
                .program()
                .gates()
                .iter()
                .map(|g| u8::from(g.get(col)))
                .collect();
            assert_eq!(&column[..], &exp[..], "column {col}");
        }
        // All main gates overlap e1; with no redundancy the split is total.
        let (main, redundant) = kp.main_part();
        assert_eq!(main.len(), 7);
        assert!(redundant.is_empty());
    }

    #[test]
    fn qrc_q23_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kp = generate_qrc_keyed(23, 0, &mut rng).unwrap();
        assert_eq!(kp.program().n_qubits(), 13);
        assert_eq!(kp.program().gates().len(), 23);
        assert_eq!(kp.secret(), &BitVector::basis(13, 0));
    }

    #[test]
    fn qrc_rejects_bad_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(generate_qrc_keyed(11, 0, &mut rng).is_err()); // 8 ∤ 12
        assert!(generate_qrc_keyed(15, 0, &mut rng).is_err()); // composite
    }

    #[test]
    fn redundant_gates_are_orthogonal_and_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kp = generate_qrc_keyed(7, 10, &mut rng).unwrap();
        assert_eq!(kp.program().gates().len(), 17);
        let (main, redundant) = kp.main_part();
        assert_eq!(main.len(), 7);
        assert_eq!(redundant.len(), 10);
        let distinct: alloc::collections::BTreeSet<_> = redundant.iter().collect();
        assert_eq!(distinct.len(), 10);
        for g in &redundant {
            assert!(!g.get(0));
            assert!(!g.is_zero());
        }
        // 2^4 - 1 = 15 distinct candidates on 5 qubits
        assert!(generate_qrc_keyed(7, 15, &mut rng).is_ok());
        assert!(generate_qrc_keyed(7, 16, &mut rng).is_err());
    }

    #[test]
    fn example_split_matches_published_instance() {
        let kp = example_program();
        let (main, redundant) = kp.main_part();
        assert_eq!(main.len(), 7);
        assert_eq!(redundant.len(), 3);
        // Redundant terms are X3X4, X1X3, X1X4
        let terms: Vec<Vec<usize>> = redundant
            .iter()
            .map(|g| g.support().into_iter().map(|i| i + 1).collect())
            .collect();
        assert_eq!(
            terms,
            alloc::vec![
                alloc::vec![3, 4],
                alloc::vec![1, 3],
                alloc::vec![1, 4]
            ]
        );
    }

    #[test]
    fn hamiltonian_terms_of_example() {
        let kp = example_program();
        let terms = kp.program().to_hamiltonian_terms();
        let expected: Vec<Vec<usize>> = alloc::vec![
            alloc::vec![2],
            alloc::vec![3],
            alloc::vec![4],
            alloc::vec![4, 5],
            alloc::vec![2, 5],
            alloc::vec![2, 3, 4],
            alloc::vec![3, 5],
            alloc::vec![3, 4],
            alloc::vec![1, 3],
            alloc::vec![1, 4],
        ];
        assert_eq!(terms, expected);

        let single = XProgram::new(3, PI / 8.0, alloc::vec![BitVector::basis(3, 1)]).unwrap();
        assert_eq!(single.to_hamiltonian_terms(), alloc::vec![alloc::vec![2]]);
    }

    #[test]
    fn scramble_zero_times_keeps_gate_set_and_secret() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kp = example_program();
        let scrambled = scramble(&kp, 0, &mut rng).unwrap();
        assert_eq!(scrambled.secret(), kp.secret());
        let mut a = kp.program().gates().to_vec();
        let mut b = scrambled.program().gates().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn scramble_preserves_main_gate_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let kp = generate_qrc_keyed(7, 3, &mut rng).unwrap();
        let scrambled = scramble(&kp, 50, &mut rng).unwrap();
        let (main, redundant) = scrambled.main_part();
        assert_eq!(main.len(), 7);
        assert_eq!(redundant.len(), 3);
    }

    #[test]
    fn exact_bias_values() {
        let b = exact_bias_qrc(7, PI / 8.0).unwrap();
        assert!((b - 0.8535533905932737).abs() < 1e-12);
        // Every q - 2|c| is odd, so cos²(odd·π/4) = 1/2
        let b4 = exact_bias_qrc(7, PI / 4.0).unwrap();
        assert!((b4 - 0.5).abs() < 1e-12);
        assert!((exact_bias_qrc(7, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((exact_bias_qrc(23, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }
}
