use billiard_lab::billiard::{flow, UnitTangentState};
use billiard_lab::geometry::point::Vec2;
use billiard_lab::geometry::polygon::{triangle_from_angles, unit_square};
use billiard_lab::geometry::{reflection_group_info, Polygon, RationalityBounds};
use billiard_lab::surface_flow::straight_line_flow_dir;
use billiard_lab::unfolding::{
    direction_orbit, lift_state, project, regular_octagon_surface, stratum_of, surface_from_json, surface_to_json, two_square_torus,
    unfold, SurfacePoint, TranslationSurface,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn unfolded(p: &Polygon) -> TranslationSurface {
    unfold(p, &reflection_group_info(p, RationalityBounds::default())).unwrap()
}

/// Integer Gauss–Bonnet plus the corner-angle sum of the cells.
fn gauss_bonnet(s: &TranslationSurface) {
    let st = stratum_of(s).unwrap();
    let sum: i64 = st.orders.iter().map(|&a| a as i64).sum();
    assert_eq!(sum, 2 * st.genus as i64 - 2);
    let total_angle: f64 = s.cone_points().iter().map(|c| c.angle).sum();
    let corners: usize = s.cells().iter().map(Vec::len).sum();
    // angle sum over all corners equals (n − 2)π per cell
    assert!((total_angle - s.cells().iter().map(|c| (c.len() as f64 - 2.0) * PI).sum::<f64>()).abs() < 1e-9);
    assert_eq!(corners % 2, 0);
}

#[test]
fn square_unfolding() {
    let p = unit_square();
    let s = unfolded(&p);
    gauss_bonnet(&s);
    assert_eq!(s.cell_count(), 4);
    assert_eq!(s.genus(), 1);
    assert!((s.area() - 4.0 * p.area()).abs() < 1e-12);
    let st = stratum_of(&s).unwrap();
    assert_eq!(st.orders, vec![0, 0, 0, 0]);
    assert_eq!(st.label(), "(0)");
}

#[test]
fn isosceles_right_triangle_unfolding() {
    let p = triangle_from_angles(PI / 4.0, PI / 4.0).unwrap();
    let s = unfolded(&p);
    gauss_bonnet(&s);
    assert_eq!(s.cell_count(), 8);
    assert_eq!(s.genus(), 1);
    assert!(stratum_of(&s).unwrap().nonzero_orders().is_empty());
}

#[test]
fn pi_over_eight_triangle_unfolding() {
    let p = triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap();
    let s = unfolded(&p);
    gauss_bonnet(&s);
    assert_eq!(s.cell_count(), 16);
    assert_eq!(s.genus(), 2);
    let st = stratum_of(&s).unwrap();
    assert_eq!(st.nonzero_orders(), vec![2]);
    let data = s.unfolding().unwrap();
    // the 6π class consists of images of the 3π/8 vertex (polygon vertex 1)
    let zero = s.cone_points().iter().find(|c| c.multiplicity == 3).unwrap();
    assert!(zero.corners.iter().all(|&(c, v)| data.polygon_vertex[c][v] == 1));
    assert_eq!(zero.corners.len(), 16);
    assert_eq!(st.marked_points(), 5);
    // corners of a class: size × vertex angle = cone angle
    for cp in s.cone_points() {
        let (c, v) = cp.corners[0];
        let ang = p.angles()[data.polygon_vertex[c][v]];
        assert!((cp.corners.len() as f64 * ang - cp.angle).abs() < 1e-9);
    }
}

#[test]
fn octagon_and_two_square_strata() {
    let o = regular_octagon_surface();
    gauss_bonnet(&o);
    let st = stratum_of(&o).unwrap();
    assert_eq!((st.genus, st.orders.clone()), (2, vec![2]));
    let t = two_square_torus();
    let st = stratum_of(&t).unwrap();
    assert_eq!((st.genus, st.orders.clone()), (1, vec![0, 0]));
}

#[test]
fn cell_count_matches_group_order() {
    for (a, b) in [
        (PI / 4.0, PI / 4.0),
        (PI / 8.0, 3.0 * PI / 8.0),
        (PI / 6.0, PI / 3.0),
        (PI / 5.0, 2.0 * PI / 5.0),
        (2.0 * PI / 7.0, 3.0 * PI / 7.0),
    ] {
        let p = triangle_from_angles(a, b).unwrap();
        let info = reflection_group_info(&p, RationalityBounds::default());
        let s = unfold(&p, &info).unwrap();
        assert_eq!(Some(s.cell_count() as u64), info.group_order());
        gauss_bonnet(&s);
    }
}

#[test]
fn surface_file_round_trip() {
    let p = triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap();
    let s = unfolded(&p);
    let back = surface_from_json(&surface_to_json(&s)).unwrap();
    assert_eq!(back.genus(), 2);
    assert_eq!(back.cell_count(), 16);
}

/// Billiard orbit vs projected geodesic: crossing times equal collision times and projected
/// crossing points equal collision points.
fn correspondence(p: &Polygon, orbits: usize, collisions: usize, seed: u64) -> f64 {
    let s = unfolded(p);
    let data = s.unfolding().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < orbits {
        let pos = billiard_lab::billiard::liouville_sample(p, 1, rng.gen()).pop().unwrap().position;
        let st = UnitTangentState::new(pos, rng.gen_range(0.0..2.0 * PI));
        let tr = flow(p, &st, f64::INFINITY, collisions);
        if tr.events.len() < collisions {
            continue;
        }
        let t_end = tr.events[collisions - 1].time + 1e-9;
        let lifted = lift_state(p, &s, &st).unwrap();
        let geo = straight_line_flow_dir(&s, lifted.direction, lifted.cell, lifted.position, t_end, 10 * collisions).unwrap();
        assert!(geo.crossings.len() >= collisions);
        for (ev, cr) in tr.events.iter().zip(&geo.crossings) {
            worst = worst.max((ev.time - cr.time).abs());
            let back = project(&s, &SurfacePoint { cell: cr.to_cell, position: cr.position, direction: lifted.direction }).unwrap();
            worst = worst.max(back.position.dist(ev.position));
            // outgoing billiard direction is the projected surface direction
            worst = worst.max(back.direction.dist(Vec2::from_angle(ev.theta_out)));
            assert_eq!(data.polygon_edge[cr.from_cell][cr.edge], ev.edge);
        }
        done += 1;
    }
    worst
}

#[test]
fn billiard_geodesic_correspondence() {
    let p = triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap();
    let err = correspondence(&p, 5, 1000, 17);
    assert!(err < 1e-8, "{err}");
    let err = correspondence(&unit_square(), 5, 1000, 18);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn direction_orbit_is_finite() {
    let p = triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap();
    let s = unfolded(&p);
    let data = s.unfolding().unwrap();
    let theta = 0.3;
    let orbit = direction_orbit(theta, data.rotation_order, data.base_angle);
    assert_eq!(orbit.len(), 2 * data.rotation_order as usize);
    let st = UnitTangentState::new(Vec2::new(0.3, 0.05), theta);
    let tr = flow(&p, &st, f64::INFINITY, 500);
    for ev in &tr.events {
        assert!(orbit.iter().any(|&o| billiard_lab::geometry::point::angle_distance(o, ev.theta_out) < 1e-9));
    }
}
