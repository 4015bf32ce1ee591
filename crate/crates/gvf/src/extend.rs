//! Feasibility of gradually varied extension and the envelope construction.
//!
//! An integer guiding set `f: J -> 1..=n` extends to a gradually varied
//! field on the whole graph iff every guiding pair satisfies
//! `d(x, y) >= |f(x) - f(y)|`. When it does, every valid extension is
//! sandwiched between the lower envelope `max_j clamp(i_j - d(x, x_j))`
//! and the upper envelope `min_j clamp(i_j + d(x, x_j))`.

use crate::error::{Error, Result};
use crate::field::{GuidingSet, LevelField};
use crate::graph::DomainGraph;

/// Which valid extension to return when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnvelopePolicy {
    /// The pointwise-least extension.
    Lower,
    /// The pointwise-greatest extension.
    Upper,
    /// `floor((lower + upper) / 2)`, level by level.
    #[default]
    Midpoint,
}

/// A guiding pair violating the extension condition: two observed
/// vertices closer in the graph than their level gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub x: usize,
    pub y: usize,
    pub distance: u32,
    pub level_x: usize,
    pub level_y: usize,
}

impl std::fmt::Display for FeasibilityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertices {} and {}, d={} < |{}-{}|",
            self.x, self.y, self.distance, self.level_x, self.level_y
        )
    }
}

/// Outcome of the pairwise distance test over a guiding set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<FeasibilityWitness>,
}

fn validate_guiding<T: Clone + PartialEq>(
    g: &DomainGraph,
    guiding: &GuidingSet<T>,
) -> Result<()> {
    let n = g.vertex_count();
    if guiding.max_vertex() >= n {
        return Err(Error::VertexOutOfRange { vertex: guiding.max_vertex(), vertex_count: n });
    }
    Ok(())
}

fn validate_levels(guiding: &GuidingSet<usize>, level_count: usize) -> Result<()> {
    for &(v, k) in guiding.entries() {
        if k < 1 || k > level_count {
            return Err(Error::LevelOutOfRange { vertex: v, index: k, count: level_count });
        }
    }
    Ok(())
}

/// Tests `d(x, y) >= |i - j|` over all guiding pairs with one
/// breadth-first sweep per guiding vertex. On failure the report carries
/// the first violating pair in vertex order.
pub fn check_feasible(g: &DomainGraph, guiding: &GuidingSet<usize>) -> Result<FeasibilityReport> {
    validate_guiding(g, guiding)?;
    let entries = guiding.entries();
    for (a, &(x, level_x)) in entries.iter().enumerate() {
        let dist = g.multi_source_distances(&[x])?;
        for &(y, level_y) in &entries[a + 1..] {
            let gap = level_x.abs_diff(level_y) as u64;
            let d = dist[y] as u64;
            if d < gap {
                return Ok(FeasibilityReport {
                    feasible: false,
                    witness: Some(FeasibilityWitness {
                        x,
                        y,
                        distance: dist[y],
                        level_x,
                        level_y,
                    }),
                });
            }
        }
    }
    Ok(FeasibilityReport { feasible: true, witness: None })
}

/// Constructs a gradually varied extension of `guiding` into `1..=level_count`
/// using the envelope selected by `policy`. Fails with the violating pair
/// when no extension exists.
pub fn gvf_extend(
    g: &DomainGraph,
    guiding: &GuidingSet<usize>,
    level_count: usize,
    policy: EnvelopePolicy,
) -> Result<LevelField> {
    validate_guiding(g, guiding)?;
    validate_levels(guiding, level_count)?;
    let report = check_feasible(g, guiding)?;
    if let Some(witness) = report.witness {
        return Err(Error::Infeasible { witness });
    }

    let n = g.vertex_count();
    let mut lo = vec![1i64; n];
    let mut hi = vec![level_count as i64; n];
    let clamp = |k: i64| k.clamp(1, level_count as i64);
    for &(x, level) in guiding.entries() {
        let dist = g.multi_source_distances(&[x])?;
        for v in 0..n {
            let d = dist[v] as i64;
            lo[v] = lo[v].max(clamp(level as i64 - d));
            hi[v] = hi[v].min(clamp(level as i64 + d));
        }
    }

    let indices: Vec<usize> = match policy {
        EnvelopePolicy::Lower => lo.iter().map(|&k| k as usize).collect(),
        EnvelopePolicy::Upper => hi.iter().map(|&k| k as usize).collect(),
        EnvelopePolicy::Midpoint => {
            lo.iter().zip(&hi).map(|(&a, &b)| ((a + b) / 2) as usize).collect()
        }
    };
    debug_assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "envelopes cross on a feasible instance");
    LevelField::new(indices, level_count)
}

/// Guard for the exhaustive oracle: at most this many labelings.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Exhaustively enumerates every gradually varied field into
/// `1..=level_count` that interpolates `guiding`. Intended as a
/// desk-scale oracle; rejects instances with more than
/// [`ENUMERATION_LIMIT`] candidate labelings.
///
/// Returns the extensions in lexicographic order of their index vectors.
/// The result is empty iff no extension exists (in particular when a
/// guiding level lies outside `1..=level_count`).
pub fn enumerate_extensions(
    g: &DomainGraph,
    guiding: &GuidingSet<usize>,
    level_count: usize,
) -> Result<Vec<LevelField>> {
    validate_guiding(g, guiding)?;
    let v = g.vertex_count() as u32;
    let labelings = (level_count as u128)
        .checked_pow(v)
        .ok_or(Error::InstanceTooLarge { labelings: u128::MAX, limit: ENUMERATION_LIMIT })?;
    if labelings > ENUMERATION_LIMIT {
        return Err(Error::InstanceTooLarge { labelings, limit: ENUMERATION_LIMIT });
    }
    if guiding.entries().iter().any(|&(_, k)| k < 1 || k > level_count) {
        return Ok(Vec::new());
    }

    let n = g.vertex_count();
    let mut base = vec![0usize; n];
    let mut is_free = vec![true; n];
    for &(x, k) in guiding.entries() {
        base[x] = k;
        is_free[x] = false;
    }
    let free: Vec<usize> = (0..n).filter(|&v| is_free[v]).collect();
    let edges: Vec<(usize, usize)> = g.edges().collect();

    // Odometer over the free vertices; guiding values stay fixed, so only
    // interpolating labelings are visited.
    let mut out = Vec::new();
    let mut digits = vec![1usize; free.len()];
    loop {
        for (slot, &vertex) in free.iter().enumerate() {
            base[vertex] = digits[slot];
        }
        if edges.iter().all(|&(a, b)| base[a].abs_diff(base[b]) <= 1) {
            out.push(LevelField::new(base.clone(), level_count)?);
        }
        // advance; most-significant digit first gives lexicographic order
        let mut slot = free.len();
        loop {
            if slot == 0 {
                return Ok(out);
            }
            slot -= 1;
            if digits[slot] < level_count {
                digits[slot] += 1;
                for d in &mut digits[slot + 1..] {
                    *d = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_gradually_varied;

    fn path(n: usize) -> DomainGraph {
        DomainGraph::build_grid(n, 1).unwrap()
    }

    #[test]
    fn infeasible_pair_on_path() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 6)], 5).unwrap();
        let report = check_feasible(&g, &guiding).unwrap();
        assert!(!report.feasible);
        let w = report.witness.unwrap();
        assert_eq!((w.x, w.y, w.distance, w.level_x, w.level_y), (0, 4, 4, 1, 6));
        assert_eq!(w.to_string(), "vertices 0 and 4, d=4 < |1-6|");
    }

    #[test]
    fn tight_pair_is_feasible() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 5)], 5).unwrap();
        assert!(check_feasible(&g, &guiding).unwrap().feasible);
    }

    #[test]
    fn singleton_is_always_feasible() {
        let g = path(3);
        let guiding = GuidingSet::new([(1usize, 7usize)], 3).unwrap();
        assert!(check_feasible(&g, &guiding).unwrap().feasible);
    }

    #[test]
    fn forced_unique_extension() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 5)], 5).unwrap();
        for policy in [EnvelopePolicy::Lower, EnvelopePolicy::Upper, EnvelopePolicy::Midpoint] {
            let field = gvf_extend(&g, &guiding, 5, policy).unwrap();
            assert_eq!(field.indices(), &[1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn midpoint_bump_on_flat_ends() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 1)], 5).unwrap();
        let field = gvf_extend(&g, &guiding, 3, EnvelopePolicy::Midpoint).unwrap();
        assert_eq!(field.indices(), &[1, 1, 2, 1, 1]);
        // and it is one of the valid extensions
        let all = enumerate_extensions(&g, &guiding, 3).unwrap();
        assert!(all.iter().any(|f| f.indices() == field.indices()));
    }

    #[test]
    fn infeasible_extend_carries_witness() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 6)], 6).unwrap();
        let err = gvf_extend(&g, &guiding, 6, EnvelopePolicy::Midpoint).unwrap_err();
        match err {
            Error::Infeasible { witness } => assert_eq!(witness.distance, 4),
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn out_of_scale_guiding_is_rejected() {
        let g = path(3);
        let guiding = GuidingSet::new([(0usize, 4usize)], 3).unwrap();
        assert!(matches!(
            gvf_extend(&g, &guiding, 3, EnvelopePolicy::Lower),
            Err(Error::LevelOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn enumerate_small_path() {
        let g = path(3);
        let guiding = GuidingSet::new([(0usize, 1usize), (2, 1)], 3).unwrap();
        let all = enumerate_extensions(&g, &guiding, 2).unwrap();
        let got: Vec<&[usize]> = all.iter().map(|f| f.indices()).collect();
        assert_eq!(got, vec![&[1, 1, 1][..], &[1, 2, 1][..]]);
    }

    #[test]
    fn enumerate_single_vertex() {
        let g = path(1);
        let guiding = GuidingSet::new([(0usize, 2usize)], 1).unwrap();
        let all = enumerate_extensions(&g, &guiding, 3).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].indices(), &[2]);
    }

    #[test]
    fn enumerate_infeasible_is_empty() {
        let g = path(5);
        let guiding = GuidingSet::new([(0usize, 1usize), (4, 6)], 6).unwrap();
        assert!(enumerate_extensions(&g, &guiding, 6).unwrap().is_empty());
    }

    #[test]
    fn enumerate_guards_instance_size() {
        let g = DomainGraph::build_grid(10, 10).unwrap();
        let guiding = GuidingSet::new([(0usize, 1usize)], 100).unwrap();
        assert!(matches!(
            enumerate_extensions(&g, &guiding, 4),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn extension_is_deterministic_under_entry_order() {
        let g = DomainGraph::build_grid(4, 3).unwrap();
        let a = GuidingSet::new([(0usize, 1usize), (11, 4), (5, 2)], 12).unwrap();
        let b = GuidingSet::new([(5usize, 2usize), (0, 1), (11, 4)], 12).unwrap();
        for policy in [EnvelopePolicy::Lower, EnvelopePolicy::Upper, EnvelopePolicy::Midpoint] {
            let fa = gvf_extend(&g, &a, 4, policy).unwrap();
            let fb = gvf_extend(&g, &b, 4, policy).unwrap();
            assert_eq!(fa.indices(), fb.indices());
        }
    }

    #[test]
    fn policies_interpolate_and_stay_gradually_varied() {
        let g = DomainGraph::build_grid(4, 4).unwrap();
        let guiding = GuidingSet::new([(0usize, 1usize), (15, 5), (3, 2)], 16).unwrap();
        for policy in [EnvelopePolicy::Lower, EnvelopePolicy::Upper, EnvelopePolicy::Midpoint] {
            let field = gvf_extend(&g, &guiding, 6, policy).unwrap();
            assert!(is_gradually_varied(&g, &field));
            for &(v, k) in guiding.entries() {
                assert_eq!(field.index(v), k);
            }
        }
    }
}
