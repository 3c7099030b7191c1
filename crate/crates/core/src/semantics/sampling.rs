//! Exhaustive and seeded random generation of small models.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kripke::KripkeModel;
use super::ternary::TernaryModel;
use crate::error::{Error, Result};

/// Largest state count for exhaustive Kripke enumeration.
pub const KRIPKE_EXHAUSTIVE_CAP: usize = 3;
/// Largest state count for exhaustive ternary enumeration (2^8 relations).
pub const TERNARY_EXHAUSTIVE_CAP: usize = 2;

fn decode_val(atoms: &[String], n: usize, bits: u64) -> BTreeMap<String, BTreeSet<usize>> {
    atoms
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let set = (0..n).filter(|w| bits >> (k * n + w) & 1 == 1).collect();
            (p.clone(), set)
        })
        .collect()
}

fn check_bits(bits: usize) -> Result<()> {
    if bits > 40 {
        return Err(Error::CapExceeded(format!(
            "2^{bits} models is too many to enumerate"
        )));
    }
    Ok(())
}

/// Every Kripke model on exactly `n` states over `atoms`:
/// `2^(n²)` relations times `2^(n·|atoms|)` valuations.
pub fn enumerate_kripke(n: usize, atoms: &[String]) -> Result<impl Iterator<Item = KripkeModel>> {
    if n == 0 || n > KRIPKE_EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded(format!(
            "exhaustive Kripke enumeration supports 1..={KRIPKE_EXHAUSTIVE_CAP} states"
        )));
    }
    let rbits = n * n;
    let vbits = n * atoms.len();
    check_bits(rbits + vbits)?;
    let atoms = atoms.to_vec();
    Ok((0u64..1 << (rbits + vbits)).map(move |code| {
        let rel = (0..rbits)
            .filter(|b| code >> b & 1 == 1)
            .map(|b| (b / n, b % n));
        KripkeModel::from_indices(n, rel, decode_val(&atoms, n, code >> rbits))
            .expect("indices are in range")
    }))
}

/// Every ternary model on exactly `n` states over `atoms`.
pub fn enumerate_ternary(n: usize, atoms: &[String]) -> Result<impl Iterator<Item = TernaryModel>> {
    if n == 0 || n > TERNARY_EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded(format!(
            "exhaustive ternary enumeration supports 1..={TERNARY_EXHAUSTIVE_CAP} states"
        )));
    }
    let rbits = n * n * n;
    let vbits = n * atoms.len();
    check_bits(rbits + vbits)?;
    let atoms = atoms.to_vec();
    Ok((0u64..1 << (rbits + vbits)).map(move |code| {
        let rel = (0..rbits)
            .filter(|b| code >> b & 1 == 1)
            .map(|b| (b / (n * n), b / n % n, b % n));
        TernaryModel::from_indices(n, rel, decode_val(&atoms, n, code >> rbits))
            .expect("indices are in range")
    }))
}

/// Frame conditions on the auxiliary binary relation used by `◇`/`□↓`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rel2Class {
    pub reflexive: bool,
    pub transitive: bool,
    pub euclidean: bool,
}

impl Rel2Class {
    /// Smallest relation containing `r` that meets the conditions.
    pub fn close(&self, n: usize, r: &mut BTreeSet<(usize, usize)>) {
        if self.reflexive {
            r.extend((0..n).map(|u| (u, u)));
        }
        loop {
            let mut add = Vec::new();
            for &(a, b) in r.iter() {
                for &(c, d) in r.iter() {
                    if self.transitive && b == c && !r.contains(&(a, d)) {
                        add.push((a, d));
                    }
                    if self.euclidean && a == c && !r.contains(&(b, d)) {
                        add.push((b, d));
                    }
                }
            }
            if add.is_empty() {
                break;
            }
            r.extend(add);
        }
    }

    pub fn holds(&self, n: usize, r: &BTreeSet<(usize, usize)>) -> bool {
        let mut c = r.clone();
        self.close(n, &mut c);
        c == *r
    }
}

#[derive(Clone, Debug)]
pub struct KripkeSampler {
    rng: ChaCha8Rng,
    pub max_states: usize,
    pub atoms: Vec<String>,
    pub edge_prob: f64,
}

impl KripkeSampler {
    pub fn new(seed: u64, max_states: usize, atoms: &[String]) -> Self {
        KripkeSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_states: max_states.max(1),
            atoms: atoms.to_vec(),
            edge_prob: 0.4,
        }
    }
}

impl Iterator for KripkeSampler {
    type Item = KripkeModel;

    fn next(&mut self) -> Option<KripkeModel> {
        let n = self.rng.gen_range(1..=self.max_states);
        let mut rel = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if self.rng.gen_bool(self.edge_prob) {
                    rel.push((u, v));
                }
            }
        }
        let val = random_val(&mut self.rng, &self.atoms, n);
        Some(KripkeModel::from_indices(n, rel, val).expect("indices are in range"))
    }
}

fn random_val(
    rng: &mut ChaCha8Rng,
    atoms: &[String],
    n: usize,
) -> BTreeMap<String, BTreeSet<usize>> {
    atoms
        .iter()
        .map(|p| (p.clone(), (0..n).filter(|_| rng.gen_bool(0.5)).collect()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TernarySampler {
    rng: ChaCha8Rng,
    pub min_states: usize,
    pub max_states: usize,
    pub atoms: Vec<String>,
    pub triple_prob: f64,
    /// Close `R(u,v,w)` under swapping `v` and `w`, as exchange requires.
    pub symmetric: bool,
    /// Attach a random binary relation closed under these conditions.
    pub rel2: Option<Rel2Class>,
}

impl TernarySampler {
    pub fn new(seed: u64, max_states: usize, atoms: &[String]) -> Self {
        TernarySampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            min_states: 1,
            max_states: max_states.max(1),
            atoms: atoms.to_vec(),
            triple_prob: 0.2,
            symmetric: false,
            rel2: None,
        }
    }
}

impl Iterator for TernarySampler {
    type Item = TernaryModel;

    fn next(&mut self) -> Option<TernaryModel> {
        let n = self
            .rng
            .gen_range(self.min_states.min(self.max_states)..=self.max_states);
        let mut rel = BTreeSet::new();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if self.rng.gen_bool(self.triple_prob) {
                        rel.insert((u, v, w));
                        if self.symmetric {
                            rel.insert((u, w, v));
                        }
                    }
                }
            }
        }
        let val = random_val(&mut self.rng, &self.atoms, n);
        let mut j = TernaryModel::from_indices(n, rel, val).expect("indices are in range");
        if let Some(class) = self.rel2 {
            let mut r2 = BTreeSet::new();
            for u in 0..n {
                for v in 0..n {
                    if self.rng.gen_bool(0.3) {
                        r2.insert((u, v));
                    }
                }
            }
            class.close(n, &mut r2);
            j = j.with_rel2(r2).expect("indices are in range");
        }
        Some(j)
    }
}
