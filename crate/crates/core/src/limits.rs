/// Enumeration caps shared by the exhaustive procedures.
///
/// Every cap is a bit count: an enumeration over `2^k` objects is refused
/// with [`Error::CapExceeded`](crate::Error::CapExceeded) once `k` exceeds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// `world_count · |vars(φ)|` bound for valuation enumeration.
    pub valuation_bits: u32,
    /// `n² · |indices|` bound for frame enumeration.
    pub frame_bits: u32,
    /// Largest number of index terms materialized by the ♯-expansion.
    pub sharp_terms: usize,
    /// Largest number of propositional atoms in a truth-table check.
    pub tautology_atoms: u32,
}

pub const CAP_ENV_VAR: &str = "FILTRAKIT_CAP";

impl Default for Limits {
    fn default() -> Self {
        Limits {
            valuation_bits: 24,
            frame_bits: 24,
            sharp_terms: 4096,
            tautology_atoms: 16,
        }
    }
}

impl Limits {
    /// Defaults, with both enumeration bit caps replaced by `FILTRAKIT_CAP`
    /// when it holds a number.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(bits) = std::env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            limits.valuation_bits = bits;
            limits.frame_bits = bits;
        }
        limits
    }

    pub fn with_bits(bits: u32) -> Self {
        Limits {
            valuation_bits: bits,
            frame_bits: bits,
            ..Limits::default()
        }
    }
}
