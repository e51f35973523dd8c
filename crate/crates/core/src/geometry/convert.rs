use super::graph::{GraphShape, RadialGraph};
use super::profile::{Profile, ProfileShape};
use super::{GeometryError, Result};

/// Isometric radial graph of a profile, with `f(h(0)) = k`.
pub fn to_graph(p: &Profile, k: f64) -> Result<RadialGraph> {
    for s in p.scan_grid()? {
        let slope = p.jet(s)?.d1;
        if slope <= 0.0 {
            return Err(GeometryError::NotMonotone { s, slope });
        }
        if slope > 1.0 + 1e-12 {
            return Err(GeometryError::MassBoundViolation { s, slope });
        }
    }
    let a = p.h(0.0)?;
    let r_max = p.h(p.s_max)?;
    let mut g = RadialGraph::with_domain(p.n, a, r_max, k, GraphShape::FromProfile(Box::new(p.clone())))?;
    g.tol = p.tol;
    Ok(g)
}

/// Arclength parametrization of a radial graph.
pub fn to_profile(g: &RadialGraph) -> Result<Profile> {
    let s_max = g.arclength(g.r_max)?;
    let mut p = Profile::new(g.n, s_max, ProfileShape::FromGraph(Box::new(g.clone())))?;
    p.tol = g.tol;
    Ok(p)
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::geometry::MassModel;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn profile_graph_round_trip(m in 0.1f64..2.0, core_ratio in 4.0f64..8.0, k in -3.0f64..3.0, s in 0.0f64..50.0) {
            let p = Profile::new(3, 100.0, ProfileShape::Mass(MassModel::Cored { m, core: m * core_ratio })).unwrap();
            let g = to_graph(&p, k).unwrap();
            prop_assert_eq!(g.f(g.a).unwrap(), k);
            let back = to_profile(&g).unwrap();
            prop_assert!((back.h(s).unwrap() - p.h(s).unwrap()).abs() <= 1e-8);
        }
    }
}
