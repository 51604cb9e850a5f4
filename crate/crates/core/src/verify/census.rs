//! Every exterior splash of ℓ∞, found as the traces of the scattered planes
//! of Σ∞, and the spectrum of pairwise intersections.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bruckbose::BruckBoseContext;
use crate::error::GeomError;
use crate::projgeom::{self, ProjSubspace};
use crate::splash::{self, Splash, Subline};

/// One exterior splash with its cover planes split into the two covers and
/// the subline family cut out by the lines of a plane of each cover.
#[derive(Clone, Debug)]
pub struct SplashRecord {
    pub splash: Splash,
    pub covers: [Vec<ProjSubspace>; 2],
    pub families: [Vec<Subline>; 2],
}

impl SplashRecord {
    /// Which family a subline belongs to, if any.
    pub fn family_of(&self, s: &Subline) -> Option<usize> {
        self.families.iter().position(|f| f.binary_search(s).is_ok())
    }
}

/// Number of planes of PG(5,q).
pub fn plane_count(q: u64) -> u64 {
    projgeom::gaussian_binomial(5, 2, q)
}

/// Scan every plane of Σ∞. A plane meeting `q^2+q+1` distinct spread planes
/// is a cover plane of the splash formed by those spread planes, so grouping
/// the scattered planes by trace yields every splash with all its cover planes.
pub fn enumerate_splashes(ctx: &BruckBoseContext, budget: u64) -> Result<Vec<SplashRecord>, GeomError> {
    let f = ctx.tower().base();
    let q = ctx.q() as usize;
    let n = q * q + q + 1;
    let mut groups: BTreeMap<Vec<usize>, Vec<ProjSubspace>> = BTreeMap::new();
    for plane in projgeom::all_subspaces(f, 5, 2, budget)? {
        let mut tr = splash::plane_trace(ctx, &plane);
        tr.sort_unstable();
        tr.dedup();
        if tr.len() == n {
            groups.entry(tr).or_default().push(plane);
        }
    }
    groups
        .into_iter()
        .map(|(idx, planes)| {
            let covers = splash::split_covers(ctx, &planes)?;
            let families = [
                splash::cover_plane_sublines(ctx, &covers[0][0]),
                splash::cover_plane_sublines(ctx, &covers[1][0]),
            ];
            Ok(SplashRecord { splash: Splash::from_indices(ctx, idx), covers, families })
        })
        .collect()
}

/// Pairwise intersection sizes of a list of splashes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub splashes: usize,
    /// `(size, number of unordered pairs)`, ascending by size.
    pub spectrum: Vec<(usize, u64)>,
    pub max: usize,
    /// Index pairs attaining the maximum.
    pub maximal_pairs: Vec<(usize, usize)>,
}

pub fn splash_intersection_census(records: &[SplashRecord], budget: u64) -> Result<Census, GeomError> {
    let n = records.len() as u64;
    let needed = n * n.saturating_sub(1) / 2;
    if needed > budget {
        return Err(GeomError::BudgetExceeded { needed, budget });
    }
    let mut spectrum: BTreeMap<usize, u64> = BTreeMap::new();
    let mut max = 0;
    let mut maximal_pairs = Vec::new();
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let k = records[i].splash.bits().intersection_len(records[j].splash.bits());
            *spectrum.entry(k).or_default() += 1;
            if k > max {
                max = k;
                maximal_pairs.clear();
            }
            if k == max {
                maximal_pairs.push((i, j));
            }
        }
    }
    Ok(Census { splashes: records.len(), spectrum: spectrum.into_iter().collect(), max, maximal_pairs })
}

/// The sublines of a splash contained in a set of spread indices, with
/// their family.
pub fn sublines_within(rec: &SplashRecord, set: &crate::bitset::BitSet) -> Vec<(usize, Subline)> {
    let mut out = Vec::new();
    for (k, fam) in rec.families.iter().enumerate() {
        for s in fam {
            if s.iter().all(|&i| set.contains(i)) {
                out.push((k, s.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldTower;
    use alloc::sync::Arc;

    #[test]
    fn census_at_q2() {
        let ctx = BruckBoseContext::new(Arc::new(FieldTower::for_q(2).unwrap()));
        let recs = enumerate_splashes(&ctx, 10_000).unwrap();
        let (_, s, _) = splash::canonical_subplane(&ctx);
        assert!(recs.iter().any(|r| r.splash.indices() == s.indices()));
        for r in &recs {
            assert_eq!(r.covers[0].len(), 7);
            assert_eq!(r.families[0].len(), 7);
        }
        let c = splash_intersection_census(&recs, 1_000_000).unwrap();
        assert_eq!(c.max, 6);
    }
}
