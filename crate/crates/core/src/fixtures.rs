//! Shipped example hypersurfaces (the `.lf` files under `data/`).

use crate::hypersurface::Hypersurface;

pub const BRUNELLA: &str = include_str!("../data/brunella.lf");
pub const CONE: &str = include_str!("../data/cone.lf");
pub const SPHERE: &str = include_str!("../data/sphere.lf");
pub const HYPERPLANE: &str = include_str!("../data/hyperplane.lf");
pub const IM_Z1Z2: &str = include_str!("../data/imz1z2.lf");
pub const CIRCLE: &str = include_str!("../data/circle.lf");

/// Name and text of every fixture.
pub const ALL: [(&str, &str); 6] = [
    ("brunella", BRUNELLA),
    ("cone", CONE),
    ("sphere", SPHERE),
    ("hyperplane", HYPERPLANE),
    ("imz1z2", IM_Z1Z2),
    ("circle", CIRCLE),
];

fn load(text: &str) -> Hypersurface {
    Hypersurface::parse(text).expect("fixture parses").0
}

pub fn brunella() -> Hypersurface {
    load(BRUNELLA)
}

pub fn cone() -> Hypersurface {
    load(CONE)
}

pub fn sphere() -> Hypersurface {
    load(SPHERE)
}

pub fn hyperplane() -> Hypersurface {
    load(HYPERPLANE)
}

pub fn im_z1z2() -> Hypersurface {
    load(IM_Z1Z2)
}

pub fn circle() -> Hypersurface {
    load(CIRCLE)
}

/// True iff `h` is the Brunella hypersurface up to a constant factor.
pub fn is_brunella(h: &Hypersurface) -> bool {
    h.dim() == 2 && h.rho().poly().is_proportional_to(brunella().rho().poly())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        for (name, text) in ALL {
            let h = Hypersurface::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(h.0.dim(), 2, "{name}");
        }
        assert!(is_brunella(&brunella()));
        assert!(!is_brunella(&cone()));
    }
}
