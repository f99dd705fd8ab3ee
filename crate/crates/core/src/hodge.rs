//! Hodge numbers of `H^1(G_m, Sym^k Kl_2)` and everything read off them:
//! dimensions, the compactly supported Hodge polygon, gamma factors,
//! irregularity and rigidity.

use std::collections::BTreeMap;

use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::local_factors::{haessig_bound_holds, newton_polygon};
use crate::polygon::Polygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HodgeVariant {
    H1,
    H1Mid,
    H1Tilde,
    H1MidTilde,
}

/// Multiplicities indexed by `(p, q, weight)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub k: u32,
    pub variant: HodgeVariant,
    pub entries: BTreeMap<(u32, u32, u32), u32>,
}

impl HodgeData {
    pub fn dimension(&self) -> usize {
        self.entries.values().map(|&m| m as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(p, q, w), m)| self.entries.get(&(q, p, w)) == Some(m))
    }

    /// First Hodge indices `p`, with multiplicity, sorted.
    pub fn p_values(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|(&(p, _, _), &m)| std::iter::repeat(p).take(m as usize))
            .collect();
        v.sort_unstable();
        v
    }
}

pub fn hodge_numbers(k: u32, variant: HodgeVariant) -> HodgeData {
    let w = k + 1;
    let mut e = BTreeMap::new();
    let tilde = matches!(variant, HodgeVariant::H1Tilde | HodgeVariant::H1MidTilde);
    if tilde {
        for p in 1..=k {
            if k % 2 == 0 && (p == k / 2 || p == k / 2 + 1) {
                continue;
            }
            e.insert((p, w - p, w), 1);
        }
        if k % 2 == 0 {
            e.insert((k / 2 + 1, k / 2 + 1, k + 2), 1);
        }
    } else if k % 2 == 1 {
        for p in (2..k).step_by(2) {
            e.insert((p, w - p, w), 1);
        }
    } else {
        let top = 2 * ((k - 1) / 4);
        for p in 1..=k {
            let low = p.min(w - p);
            if low % 2 == 0 && low >= 2 && low <= top {
                e.insert((p, w - p, w), 1);
            }
        }
        if (k / 2 + 1) % 2 == 1 {
            e.insert((k / 2 + 1, k / 2 + 1, k + 2), 1);
        }
    }
    e.insert((k + 1, k + 1, 2 * k + 2), 1);
    if matches!(variant, HodgeVariant::H1Mid | HodgeVariant::H1MidTilde) {
        e.retain(|&(_, _, wt), _| wt == w);
    }
    HodgeData {
        k,
        variant,
        entries: e,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub h1: usize,
    pub h1_mid: usize,
    pub h1_tilde: usize,
    pub h1_mid_tilde: usize,
}

pub fn dims(k: u32) -> Dims {
    let k = k as usize;
    let four = usize::from(k % 4 == 0);
    let odd = k % 2 == 1;
    Dims {
        h1: k.div_ceil(2),
        h1_mid: ((k.saturating_sub(1)) / 2).saturating_sub(four),
        h1_tilde: if odd { k + 1 } else { k },
        h1_mid_tilde: if odd { k } else { k.saturating_sub(2) },
    }
}

/// Hodge polygon of compactly supported cohomology: slopes `k + 1 - p`
/// over the first Hodge indices of `H^1`.
pub fn hodge_polygon_compact(k: u32) -> Polygon {
    let slopes: Vec<i64> = hodge_numbers(k, HodgeVariant::H1)
        .p_values()
        .iter()
        .map(|&p| (k + 1 - p) as i64)
        .collect();
    Polygon::from_slopes(&slopes)
}

/// `L_k(infinity, s) = pi^{-ms/2} prod_{j in shifts} Gamma((s - j)/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFactor {
    pub k: u32,
    pub m: u32,
    pub shifts: Vec<u32>,
    /// The same shifts as produced by Serre's recipe from `H^1_mid`.
    pub recipe_shifts: Vec<u32>,
}

/// Serre's recipe on weight-`w` Hodge numbers: each pair `p < q` gives
/// `Gamma_C(s - p) ~ Gamma_R(s - p) Gamma_R(s - p + 1)`, the middle class
/// gives `Gamma_R(s - w/2 + e)` with `e = 1` when its sign is `-`.
pub fn serre_recipe_shifts(data: &HodgeData, middle_minus: bool) -> Vec<u32> {
    let mut shifts = Vec::new();
    for (&(p, q, _), &mult) in &data.entries {
        for _ in 0..mult {
            if p < q {
                shifts.push(p);
                shifts.push(p - 1);
            } else if p == q {
                shifts.push(if middle_minus { p - 1 } else { p });
            }
        }
    }
    shifts.sort_unstable();
    shifts
}

pub fn gamma_factor(k: u32) -> Result<GammaFactor> {
    let m = dims(k).h1_mid as u32;
    let shifts: Vec<u32> = (1..=m).collect();
    let recipe_shifts = serre_recipe_shifts(&hodge_numbers(k, HodgeVariant::H1Mid), k % 4 == 3);
    if recipe_shifts != shifts {
        return Err(Error::RecipeMismatch(format!(
            "k={k}: closed form {shifts:?}, recipe {recipe_shifts:?}"
        )));
    }
    Ok(GammaFactor {
        k,
        m,
        shifts,
        recipe_shifts,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonHodgeReport {
    pub newton: Polygon,
    pub hodge: Polygon,
    pub above: bool,
    pub endpoints_equal: bool,
    /// `p > k` (odd `k`) or `2p > k` (even `k`).
    pub endpoints_expected_equal: bool,
    pub haessig: bool,
}

/// Compares the Newton polygon of `Z_k(p;T)` with the compact Hodge
/// polygon. The comparison theorem is for odd `p`; at `p = 2` the report is
/// returned without asserting.
pub fn newton_vs_hodge(k: u32, p: u64, z: &IntPolynomial) -> Result<NewtonHodgeReport> {
    let newton = newton_polygon(z, p);
    let hodge = hodge_polygon_compact(k);
    let above = newton.lies_on_or_above(&hodge);
    let endpoints_equal = newton.endpoint() == hodge.endpoint();
    let endpoints_expected_equal = if k % 2 == 1 {
        p > k as u64
    } else {
        2 * p > k as u64
    };
    let haessig = haessig_bound_holds(z, p);
    let report = NewtonHodgeReport {
        newton,
        hodge,
        above,
        endpoints_equal,
        endpoints_expected_equal,
        haessig,
    };
    if p != 2 {
        if !report.above {
            return Err(Error::check("newton-above-hodge", format!("k={k} p={p}")));
        }
        if report.endpoints_equal != report.endpoints_expected_equal {
            return Err(Error::check("newton-endpoints", format!("k={k} p={p}")));
        }
        if !report.haessig {
            return Err(Error::check("haessig", format!("k={k} p={p}")));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IrregularityRigidity {
    pub irr: u32,
    pub irr_tilde: u32,
    pub swan_at_2: u32,
    pub rig: i64,
    pub rig_tilde: i64,
}

pub fn irregularity_and_rigidity(k: u32) -> IrregularityRigidity {
    let ki = k as i64;
    let (irr_tilde, swan_at_2, rig) = if k % 2 == 1 {
        let m = (ki - 1) / 2;
        (k + 1, k.div_ceil(2), 2 * (1 - m * m))
    } else {
        let m = ki / 2;
        (k, (k + 2) / 4, -2 * (m * m - m - 1))
    };
    IrregularityRigidity {
        irr: k.div_ceil(2),
        irr_tilde,
        swan_at_2,
        rig,
        rig_tilde: (ki + 1) * (2 - ki),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(d: &HodgeData) -> Vec<(u32, u32, u32)> {
        d.entries.keys().copied().collect()
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(keys(&hodge_numbers(5, HodgeVariant::H1Mid)), vec![(2, 4, 6), (4, 2, 6)]);
        assert_eq!(keys(&hodge_numbers(1, HodgeVariant::H1)), vec![(2, 2, 4)]);
        assert!(hodge_numbers(1, HodgeVariant::H1Mid).entries.is_empty());
        assert_eq!(
            keys(&hodge_numbers(8, HodgeVariant::H1)),
            vec![(2, 7, 9), (5, 5, 10), (7, 2, 9), (9, 9, 18)]
        );
    }

    #[test]
    fn dims_examples() {
        let d = |k| {
            let d = dims(k);
            (d.h1, d.h1_mid, d.h1_tilde, d.h1_mid_tilde)
        };
        assert_eq!(d(7), (4, 3, 8, 7));
        assert_eq!(d(4), (2, 0, 4, 2));
        assert_eq!(d(2), (1, 0, 2, 0));
    }

    #[test]
    fn dims_match_hodge_numbers() {
        use HodgeVariant::*;
        for k in 1..=100 {
            let d = dims(k);
            for (v, n) in [(H1, d.h1), (H1Mid, d.h1_mid), (H1Tilde, d.h1_tilde), (H1MidTilde, d.h1_mid_tilde)] {
                let h = hodge_numbers(k, v);
                assert_eq!(h.dimension(), n, "k={k} {v:?}");
                assert!(h.is_symmetric());
            }
            let poly = hodge_polygon_compact(k);
            assert_eq!(poly.segments(), d.h1);
            assert!(poly.is_convex());
        }
    }

    #[test]
    fn polygons() {
        assert_eq!(hodge_polygon_compact(6).vertices(), &[(0, 0), (1, 0), (2, 2), (3, 7)]);
        assert_eq!(
            hodge_polygon_compact(7).vertices(),
            &[(0, 0), (1, 0), (2, 2), (3, 6), (4, 12)]
        );
        assert_eq!(
            hodge_polygon_compact(8).vertices(),
            &[(0, 0), (1, 0), (2, 2), (3, 6), (4, 13)]
        );
    }

    #[test]
    fn gamma() {
        for k in 1..=60 {
            gamma_factor(k).unwrap();
        }
        assert_eq!(gamma_factor(5).unwrap().shifts, vec![1, 2]);
        assert_eq!(gamma_factor(4).unwrap().m, 0);
        let g7 = gamma_factor(7).unwrap();
        assert_eq!(g7.m, 3);
        // the middle (4,4) class contributes Gamma_R(s - 3)
        let mid_only = serre_recipe_shifts(
            &HodgeData {
                k: 7,
                variant: HodgeVariant::H1Mid,
                entries: [((4, 4, 8), 1)].into_iter().collect(),
            },
            true,
        );
        assert_eq!(mid_only, vec![3]);
    }

    #[test]
    fn irregularity() {
        let r = irregularity_and_rigidity(3);
        assert_eq!((r.irr, r.rig, r.rig_tilde), (2, 0, -4));
        let r = irregularity_and_rigidity(1);
        assert_eq!((r.rig, r.rig_tilde), (2, 2));
        assert_eq!(irregularity_and_rigidity(2).rig, 2);
        for k in 3..40 {
            assert_ne!(irregularity_and_rigidity(k).rig, 2);
        }
    }

    #[test]
    fn newton_hodge_examples() {
        use crate::local_factors::zeta_poly;
        let r = newton_vs_hodge(3, 5, &zeta_poly(3, 5).unwrap()).unwrap();
        assert_eq!(r.newton, r.hodge);
        let r = newton_vs_hodge(6, 3, &zeta_poly(6, 3).unwrap()).unwrap();
        assert!(r.above && !r.endpoints_equal);
        let r = newton_vs_hodge(1, 7, &IntPolynomial::from_i64s(&[1, -1])).unwrap();
        assert_eq!(r.newton, r.hodge);
    }
}
