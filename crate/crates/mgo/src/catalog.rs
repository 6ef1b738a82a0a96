//! The fixed set of painted diagrams the test suites and CLI sweep over.

use crate::flag::PaintedDiagram;
use crate::rootsys::{Family, RootSystemType};

/// Types whose painted diagrams are all included.
pub const FULL_TYPES: [(Family, usize); 11] = [
    (Family::A, 1),
    (Family::A, 2),
    (Family::A, 3),
    (Family::A, 4),
    (Family::B, 2),
    (Family::B, 3),
    (Family::B, 4),
    (Family::C, 3),
    (Family::C, 4),
    (Family::D, 4),
    (Family::G, 2),
];

/// Painted sets of F4 in the catalog.
pub const F4_SELECTION: [&[usize]; 5] = [&[1], &[4], &[1, 4], &[2, 3], &[1, 2, 3, 4]];

pub fn ty(f: Family, l: usize) -> RootSystemType {
    RootSystemType::new(f, l).expect("catalog type is admissible")
}

/// Every type that occurs in the catalog.
pub fn catalog_types() -> Vec<RootSystemType> {
    let mut out: Vec<RootSystemType> = FULL_TYPES.iter().map(|&(f, l)| ty(f, l)).collect();
    out.push(ty(Family::F, 4));
    out
}

/// All nonempty painted sets of a type, by increasing bitmask.
pub fn all_diagrams(t: RootSystemType) -> Vec<PaintedDiagram> {
    (1u32..(1 << t.rank))
        .map(|mask| {
            let painted = (0..t.rank).filter(|j| mask & (1 << j) != 0).map(|j| j + 1);
            PaintedDiagram::new(t, painted).expect("valid painted set")
        })
        .collect()
}

pub fn catalog_diagrams() -> Vec<PaintedDiagram> {
    let mut out = Vec::new();
    for &(f, l) in &FULL_TYPES {
        out.extend(all_diagrams(ty(f, l)));
    }
    for p in F4_SELECTION {
        out.push(PaintedDiagram::new(ty(Family::F, 4), p.iter().copied()).expect("valid painted set"));
    }
    out
}
