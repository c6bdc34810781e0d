//! Refusal bounds that guard against combinatorial blowup.
//!
//! Every bound can be overridden from the environment:
//!
//! | variable                    | default | guards                                     |
//! |-----------------------------|---------|--------------------------------------------|
//! | `ISVARIANT_MAX_N`           | 5       | element-level scans over all of IS_n       |
//! | `ISVARIANT_MAX_PAIR_N`      | 3       | exhaustive pair / relation enumerations    |
//! | `ISVARIANT_MAX_POWERSET_N`  | 2       | scans over every subset of IS_n            |
//! | `ISVARIANT_MAX_PERM_N`      | 6       | witness search over S_n x S_n              |
//! | `ISVARIANT_MAX_ISO_SIZE`    | 40      | semigroup isomorphism backtracking         |

use std::env;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: usize,
    pub max_pair_n: usize,
    pub max_powerset_n: usize,
    pub max_perm_n: usize,
    pub max_iso_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: 5,
            max_pair_n: 3,
            max_powerset_n: 2,
            max_perm_n: 6,
            max_iso_size: 40,
        }
    }
}

impl Limits {
    /// Defaults, overridden by any of the `ISVARIANT_*` variables that parse.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        let read = |name: &str, slot: &mut usize| {
            if let Some(v) = env::var(name).ok().and_then(|s| s.trim().parse().ok()) {
                *slot = v;
            }
        };
        read("ISVARIANT_MAX_N", &mut limits.max_n);
        read("ISVARIANT_MAX_PAIR_N", &mut limits.max_pair_n);
        read("ISVARIANT_MAX_POWERSET_N", &mut limits.max_powerset_n);
        read("ISVARIANT_MAX_PERM_N", &mut limits.max_perm_n);
        read("ISVARIANT_MAX_ISO_SIZE", &mut limits.max_iso_size);
        limits
    }
}
