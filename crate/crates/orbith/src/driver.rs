//! Whole-type orchestration: iteration over all orbits and structures of a
//! named type, sweep reports, listings, table dumps and seeded
//! generalized-Kahler runs. This is the surface the command line sits on.

use crate::calculus::Calculus;
use crate::chevalley::build_constants;
use crate::exact::{QJson, SignSqrtJson};
use crate::orbit::{enumerate_complex_structures, make_orbit, ComplexStructure};
use crate::rootsys::{build_root_system, RootSystemSpec, TypeError};
use crate::verify::{
    check_gk, sample_gk_instance, verify_theorem, GkReport, RankReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::time::Instant;

/// Default sweep preset: every type the exhaustive verification covers on a
/// desk-scale budget.
pub const DEFAULT_SWEEP: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"];

/// Types covered by the generic-oracle cross-checks (rank <= 3 plus G2).
pub const ORACLE_SWEEP: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C3", "G2"];

/// Types used for seeded generalized-Kahler sampling.
pub const GK_TYPES: &[&str] = &["A2", "B2", "G2"];

/// One structure visited during a sweep.
pub struct StructureCtx<'a> {
    pub calc: &'a Calculus<'a>,
    pub j: &'a ComplexStructure<'a>,
    pub orbit_mask: u32,
    pub sigma_index: usize,
}

pub fn mask_to_set(mask: u32, rank: usize) -> BTreeSet<usize> {
    (0..rank).filter(|i| mask >> i & 1 == 1).collect()
}

/// Visits every (orbit, structure) of the type, orbits in mask order and
/// structures in canonical order.
pub fn for_each_structure<F>(name: &str, f: F) -> Result<(), TypeError>
where
    F: FnMut(&StructureCtx<'_>),
{
    for_each_structure_filtered(name, None, None, f)
}

/// Same with optional restriction to one orbit mask and one structure index.
pub fn for_each_structure_filtered<F>(
    name: &str,
    only_mask: Option<u32>,
    only_sigma: Option<usize>,
    mut f: F,
) -> Result<(), TypeError>
where
    F: FnMut(&StructureCtx<'_>),
{
    let spec = RootSystemSpec::parse(name)?;
    let system = build_root_system(&spec);
    let (sc, _kt) = build_constants(&system);
    for mask in 0..(1u32 << system.rank) {
        if only_mask.is_some_and(|m| m != mask) {
            continue;
        }
        let s = mask_to_set(mask, system.rank);
        let orbit = make_orbit(&system, &s);
        let structures = enumerate_complex_structures(&orbit)?;
        let calc = Calculus::new(&system, &sc, &orbit);
        for (k, j) in structures.iter().enumerate() {
            if only_sigma.is_some_and(|want| want != k) {
                continue;
            }
            f(&StructureCtx {
                calc: &calc,
                j,
                orbit_mask: mask,
                sigma_index: k,
            });
        }
    }
    Ok(())
}

/// Rank reports for every (orbit, structure) of the type.
pub fn sweep_type(name: &str, with_timing: bool) -> Result<Vec<RankReport>, TypeError> {
    let mut out = Vec::new();
    for_each_structure(name, |ctx| {
        let start = Instant::now();
        let mut report = verify_theorem(ctx.calc, ctx.j, ctx.sigma_index);
        if with_timing {
            report.timing_ms = Some(start.elapsed().as_millis());
        }
        out.push(report);
    })?;
    Ok(out)
}

/// Summary line of an orbit listing.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitInfo {
    pub s: Vec<usize>,
    pub dim_m: usize,
    pub r0_size: usize,
    pub sigma_count: usize,
}

pub fn orbit_listing(name: &str) -> Result<Vec<OrbitInfo>, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let system = build_root_system(&spec);
    let mut out = Vec::new();
    for mask in 0..(1u32 << system.rank) {
        let s = mask_to_set(mask, system.rank);
        let orbit = make_orbit(&system, &s);
        let structures = enumerate_complex_structures(&orbit)?;
        out.push(OrbitInfo {
            s: s.iter().map(|&i| i + 1).collect(),
            dim_m: orbit.dim_m(),
            r0_size: orbit.r0.len(),
            sigma_count: structures.len(),
        });
    }
    Ok(out)
}

/// Per-orbit structure listings: each structure as a list of coefficient
/// vectors.
pub fn structures_listing(
    name: &str,
) -> Result<Vec<(OrbitInfo, Vec<Vec<Vec<i64>>>)>, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let system = build_root_system(&spec);
    let mut out = Vec::new();
    for mask in 0..(1u32 << system.rank) {
        let s = mask_to_set(mask, system.rank);
        let orbit = make_orbit(&system, &s);
        let structures = enumerate_complex_structures(&orbit)?;
        let info = OrbitInfo {
            s: s.iter().map(|&i| i + 1).collect(),
            dim_m: orbit.dim_m(),
            r0_size: orbit.r0.len(),
            sigma_count: structures.len(),
        };
        let sigmas = structures
            .iter()
            .map(|j| {
                j.sigma
                    .iter()
                    .map(|&i| system.root(i).coeffs.clone())
                    .collect()
            })
            .collect();
        out.push((info, sigmas));
    }
    Ok(out)
}

/// Dumps the Chevalley and Weyl tables plus the Killing pairing as JSON.
pub fn constants_dump(name: &str) -> Result<serde_json::Value, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let system = build_root_system(&spec);
    let chev = crate::chevalley::chevalley_constants(&system);
    let kt = crate::chevalley::killing_form(&chev);
    let sc = crate::chevalley::weyl_normalize(&chev, &kt);
    let mut chev_entries = Vec::new();
    let mut weyl_entries = Vec::new();
    for i in 0..system.len() {
        for j in 0..system.len() {
            if system.sum_index(i, j).is_some() {
                chev_entries.push(json!({
                    "alpha": system.root(i).coeffs,
                    "beta": system.root(j).coeffs,
                    "n": sc.n(i, j),
                }));
                weyl_entries.push(json!({
                    "alpha": system.root(i).coeffs,
                    "beta": system.root(j).coeffs,
                    "value": SignSqrtJson::of(&sc.weyl_n(i, j)),
                }));
            }
        }
    }
    let kappa: Vec<serde_json::Value> = (0..system.len())
        .map(|i| {
            json!({
                "root": system.root(i).coeffs,
                "value": QJson::of(&kt.kappa[i]),
            })
        })
        .collect();
    Ok(json!({
        "type": system.spec.to_string(),
        "chevalley": chev_entries,
        "weyl": weyl_entries,
        "kappa": kappa,
    }))
}

/// Seeded generalized-Kahler run: samples instances over the non-degenerate
/// orbits of the type and checks each one. Deterministic given the seed.
pub fn gk_run(name: &str, samples: usize, seed: u64) -> Result<Vec<GkReport>, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let system = build_root_system(&spec);
    let (sc, _kt) = build_constants(&system);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // fix all orbits and their structures up front
    let masks: Vec<u32> = (0..(1u32 << system.rank)).collect();
    let orbits: Vec<_> = masks
        .iter()
        .map(|&m| make_orbit(&system, &mask_to_set(m, system.rank)))
        .collect();
    let mut live = Vec::new();
    for orbit in &orbits {
        if orbit.dim_m() > 0 {
            let structures = enumerate_complex_structures(orbit)?;
            live.push((orbit, structures));
        }
    }
    assert!(!live.is_empty(), "type has no orbit with tangent directions");

    let mut out = Vec::new();
    for k in 0..samples {
        let pick = rand::Rng::gen_range(&mut rng, 0..live.len());
        let (orbit, structures) = &live[pick];
        let calc = Calculus::new(&system, &sc, orbit);
        let inst = sample_gk_instance(&calc, structures, &mut rng);
        out.push(check_gk(&calc, &inst, k));
    }
    Ok(out)
}
