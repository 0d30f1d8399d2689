use std::collections::BTreeSet;

use super::frame::{Frame, Model, Valuation};
use super::relation::Relation;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::syntax::IndexTerm;

/// `F^⊕`: adds `e⁺` interpreted as the transitive closure of `R_e`.
pub fn expand_plus(frame: &Frame, e: &IndexTerm) -> Result<Frame> {
    let closure = frame.relation_of(e)?.transitive_closure();
    let mut out = frame.clone();
    out.set_relation(IndexTerm::plus(e.clone()), closure)?;
    Ok(out)
}

/// `Σ^♯ = Σ ∪ {e;f, e|f, e⁺ | e, f ∈ Σ}`, sorted.
pub fn sharp_alphabet(alphabet: &BTreeSet<IndexTerm>) -> BTreeSet<IndexTerm> {
    let mut out = alphabet.clone();
    for e in alphabet {
        for f in alphabet {
            out.insert(IndexTerm::comp(e.clone(), f.clone()));
            out.insert(IndexTerm::union(e.clone(), f.clone()));
        }
        out.insert(IndexTerm::plus(e.clone()));
    }
    out
}

/// `Σ^(n)`, refusing alphabets larger than the configured cap.
pub fn sharp_alphabet_level(
    alphabet: &BTreeSet<IndexTerm>,
    level: usize,
    limits: &Limits,
) -> Result<BTreeSet<IndexTerm>> {
    let mut current = alphabet.clone();
    for _ in 0..level {
        let k = current.len() as u64;
        let bound = k + 2 * k * k + k;
        if bound > limits.sharp_terms as u64 {
            return Err(Error::CapExceeded {
                what: "sharp alphabet size",
                required: bound,
                cap: limits.sharp_terms as u64,
            });
        }
        current = sharp_alphabet(&current);
    }
    Ok(current)
}

/// `F^♯`: materializes every term of `Σ^♯` where `Σ` is the frame's
/// explicit alphabet.
pub fn expand_sharp(frame: &Frame, limits: &Limits) -> Result<Frame> {
    iterate_sharp(frame, 1, limits)
}

/// `F^(n)`, with `F^(0) = F`.
pub fn iterate_sharp(frame: &Frame, n: usize, limits: &Limits) -> Result<Frame> {
    let mut out = frame.clone();
    for _ in 0..n {
        let alphabet = sharp_alphabet_level(&out.alphabet(), 1, limits)?;
        out.materialize(alphabet.iter())?;
    }
    Ok(out)
}

pub fn fuse_frames(frames: &[Frame]) -> Result<Frame> {
    let first = frames
        .first()
        .ok_or_else(|| Error::Malformed("fusion of zero frames".into()))?;
    let mut out = Frame::new(first.world_count())?;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for f in frames {
        if f.world_count() != first.world_count() {
            return Err(Error::WorldCountMismatch {
                expected: first.world_count(),
                found: f.world_count(),
            });
        }
        let atoms = f.atoms();
        if let Some(clash) = atoms.intersection(&seen).next() {
            return Err(Error::AlphabetClash(clash.clone()));
        }
        seen.extend(atoms);
        for (t, r) in f.relations() {
            out.set_relation(t.clone(), r.clone())?;
        }
    }
    Ok(out)
}

/// Fuses the frames and merges the valuations; a variable valued
/// differently by two inputs is rejected.
pub fn fuse_models(models: &[Model]) -> Result<Model> {
    let frames: Vec<Frame> = models.iter().map(|m| m.frame.clone()).collect();
    let frame = fuse_frames(&frames)?;
    let mut valuation = Valuation::new();
    for m in models {
        for (v, set) in m.valuation() {
            if let Some(prev) = valuation.insert(v.clone(), *set) {
                if prev != *set {
                    return Err(Error::Malformed(format!(
                        "variable `{v}` is valued differently by two fused models"
                    )));
                }
            }
        }
    }
    Model::new(frame, valuation)
}

/// Number of frames on `n` worlds with `k` enumerated relations, as a bit
/// count, checked against the cap.
pub fn frame_code_bits(n: usize, k: usize, limits: &Limits) -> Result<u32> {
    let bits = (n * n * k) as u64;
    if bits > u64::from(limits.frame_bits) {
        return Err(Error::CapExceeded {
            what: "frame enumeration bits",
            required: bits,
            cap: u64::from(limits.frame_bits),
        });
    }
    Ok(bits as u32)
}

/// The frame encoded by `code`: bit `i·n² + x·n + y` puts `(x, y)` into the
/// relation of `indices[i]`.
pub fn frame_from_code(n: usize, indices: &[IndexTerm], code: u64) -> Frame {
    let mut frame = Frame::new(n).expect("world count checked by caller");
    let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
    for (i, t) in indices.iter().enumerate() {
        let rows = (0..n)
            .map(|x| (code >> (i * n * n + x * n)) & mask)
            .collect();
        frame
            .set_relation(t.clone(), Relation::from_rows(n, rows))
            .expect("sizes agree");
    }
    frame
}

/// All frames on `n` worlds interpreting `indices`, in increasing order of
/// their adjacency-bit encoding.
pub fn enumerate_frames<'a>(
    n: usize,
    indices: &'a [IndexTerm],
    limits: &Limits,
) -> Result<impl Iterator<Item = Frame> + 'a> {
    Frame::new(n)?;
    let bits = frame_code_bits(n, indices.len(), limits)?;
    Ok((0..1u64 << bits).map(move |code| frame_from_code(n, indices, code)))
}
