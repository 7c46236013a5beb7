//! The rank-two Frobenius algebra V = Z[X]/(X²) and its action on circle
//! labelings.
//!
//! A labeling of a configuration with k circles is a bitmask: bit c set means
//! circle c carries X, clear means it carries 1.  Gradings: gr(1) = -1,
//! gr(X) = +1.  Multiplication kills X·X; comultiplication sends 1 to
//! 1⊗X + X⊗1 and X to X⊗X, so every saddle map has coefficients +1 on the
//! labeling basis.

use crate::curves::{Surgery, SurgeryKind};
use std::sync::atomic::{AtomicUsize, Ordering};

#[inline]
pub fn bit(label: u64, c: usize) -> bool {
    (label >> c) & 1 == 1
}

/// Sum of circle gradings: (#X) - (#1) over `k` circles.
pub fn label_grade(label: u64, k: usize) -> i64 {
    let x = (label & mask(k)).count_ones() as i64;
    2 * x - k as i64
}

pub fn mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Apply the saddle map of a surgery to a labeling of the old configuration.
/// Returns the labelings of the new configuration appearing in the image;
/// every coefficient is +1.
pub fn apply_surgery(label: u64, s: &Surgery) -> Vec<u64> {
    let mut base = 0u64;
    for (&old, &new) in &s.map {
        if bit(label, old) {
            base |= 1u64 << new;
        }
    }
    match s.kind {
        SurgeryKind::Merge { from: (c1, c2), into } => {
            let (x1, x2) = (bit(label, c1), bit(label, c2));
            if x1 && x2 {
                vec![]
            } else if x1 || x2 {
                vec![base | 1u64 << into]
            } else {
                vec![base]
            }
        }
        SurgeryKind::Split { from, into: (d1, d2) } => {
            if bit(label, from) {
                vec![base | 1u64 << d1 | 1u64 << d2]
            } else {
                vec![base | 1u64 << d1, base | 1u64 << d2]
            }
        }
    }
}

static COUNIT_CALLS: AtomicUsize = AtomicUsize::new(0);

/// The counit of V: 1 ↦ 0, X ↦ 1.  No pipeline in this crate evaluates it;
/// the call counter lets tests pin that down.
pub fn counit(x_label: bool) -> i64 {
    COUNIT_CALLS.fetch_add(1, Ordering::Relaxed);
    if x_label {
        1
    } else {
        0
    }
}

pub fn counit_invocations() -> usize {
    COUNIT_CALLS.load(Ordering::Relaxed)
}

/// Structural checks of V on the {1, X} basis: associativity,
/// coassociativity, and the Frobenius compatibility (m ⊗ id)(id ⊗ Δ) = Δ m.
pub fn verify_axioms() -> bool {
    // Represent an element of V as (coeff of 1, coeff of X), and of V⊗V as a
    // 2x2 coefficient array.
    type El = [i64; 2];
    type El2 = [[i64; 2]; 2];
    fn mult(a: usize, b: usize) -> El {
        match (a, b) {
            (0, 0) => [1, 0],
            (0, 1) | (1, 0) => [0, 1],
            (1, 1) => [0, 0],
            _ => unreachable!(),
        }
    }
    fn comult(a: usize) -> El2 {
        match a {
            0 => [[0, 1], [1, 0]],
            1 => [[0, 0], [0, 1]],
            _ => unreachable!(),
        }
    }
    // Associativity: (ab)c = a(bc) on basis elements.
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut lhs = [0i64; 2];
                let ab = mult(a, b);
                for (i, &co) in ab.iter().enumerate() {
                    let m = mult(i, c);
                    lhs[0] += co * m[0];
                    lhs[1] += co * m[1];
                }
                let mut rhs = [0i64; 2];
                let bc = mult(b, c);
                for (i, &co) in bc.iter().enumerate() {
                    let m = mult(a, i);
                    rhs[0] += co * m[0];
                    rhs[1] += co * m[1];
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    // Coassociativity: (Δ ⊗ id)Δ = (id ⊗ Δ)Δ.
    for a in 0..2 {
        let d = comult(a);
        let mut lhs = [[[0i64; 2]; 2]; 2];
        let mut rhs = [[[0i64; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let di = comult(i);
                for (p, row) in di.iter().enumerate() {
                    for (q, &co) in row.iter().enumerate() {
                        lhs[p][q][j] += d[i][j] * co;
                    }
                }
                let dj = comult(j);
                for (p, row) in dj.iter().enumerate() {
                    for (q, &co) in row.iter().enumerate() {
                        rhs[i][p][q] += d[i][j] * co;
                    }
                }
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    // Frobenius compatibility: Δ(ab) = (m ⊗ id)(a ⊗ Δ(b)).
    for a in 0..2 {
        for b in 0..2 {
            let ab = mult(a, b);
            let mut lhs = [[0i64; 2]; 2];
            for (i, &co) in ab.iter().enumerate() {
                let d = comult(i);
                for p in 0..2 {
                    for q in 0..2 {
                        lhs[p][q] += co * d[p][q];
                    }
                }
            }
            let db = comult(b);
            let mut rhs = [[0i64; 2]; 2];
            for p in 0..2 {
                for q in 0..2 {
                    let m = mult(a, p);
                    for (r, &co) in m.iter().enumerate() {
                        rhs[r][q] += db[p][q] * co;
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
