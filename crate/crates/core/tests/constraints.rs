mod common;

use std::sync::Arc;

use growth_lab::constraints::DRAWDOWN_REL_TOL;
use growth_lab::{
    azema_yor, drawdown_optimal, floor_optimal, linear_drawdown_scale, running_max, shift_floor, validate_drawdown,
    DiscretePath, DrawdownOptimal, FloorKind, FloorOptimal, FloorSpec, MertonModel, NoiseBlock, Shifted, TimeGrid,
    WealthModel,
};
use proptest::prelude::*;

fn positive_path() -> impl Strategy<Value = DiscretePath> {
    prop::collection::vec(0.05f64..5.0, 1..200).prop_map(|mut v| {
        v.insert(0, 1.0);
        let grid = TimeGrid::uniform(1.0, v.len() - 1).unwrap();
        DiscretePath::new(grid, v).unwrap()
    })
}

proptest! {
    #[test]
    fn floor_optimal_dominates(eta in positive_path(), delta in 0.001f64..0.999, eps in 0.01f64..0.99) {
        let xi = shift_floor(&eta, delta, 1.0).unwrap();
        prop_assert!(xi.values().iter().all(|&x| x >= delta));
        let x = DiscretePath::constant(eta.grid().clone(), 1.0 - eps).unwrap();
        let v = floor_optimal(&xi, &x, eps).unwrap();
        prop_assert_eq!(v.initial(), eps + (1.0 - eps));
        for i in 0..v.values().len() {
            prop_assert!(v.values()[i] >= x.values()[i].max(eps * xi.values()[i]));
        }
    }

    #[test]
    fn drawdown_optimal_round_trips(xi in positive_path(), alpha in 0.0f64..0.95) {
        let pair = linear_drawdown_scale(alpha, 1.0).unwrap();
        let v = drawdown_optimal(&xi, &pair).unwrap();
        let back = azema_yor(pair.k(), &running_max(&v)).unwrap();
        for (a, b) in back.values().iter().zip(xi.values()) {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        }
        prop_assert_eq!(validate_drawdown(&[v], pair.spec(), DRAWDOWN_REL_TOL).n_violations, 0);
    }
}

#[test]
fn floor_audit_over_merton_paths() {
    let s = common::scalar_market(0.06, 0.2, 20.0);
    let grid = TimeGrid::uniform(20.0, 2000).unwrap();
    let xi = Shifted { inner: MertonModel::new(s, 0.5, 1.0).unwrap(), delta: 0.01 };
    let floor = FloorSpec::new(FloorKind::Constant { level: 0.5 }, 1.0, 0.4).unwrap();
    let model = FloorOptimal::new(xi, floor).unwrap();
    let r = model.audit(&grid, 1000, 17).unwrap();
    assert_eq!((r.n_paths_checked, r.n_violations), (1000, 0));
    assert!(r.worst_margin >= 0.1 - 1e-12);
    assert!(model.audit_dominating(&grid, 10, 17).unwrap().passed());
}

#[test]
fn exponential_and_proportional_floors() {
    let s = common::scalar_market(0.06, 0.2, 10.0);
    let grid = TimeGrid::uniform(10.0, 500).unwrap();
    let xi = || Shifted { inner: MertonModel::new(s.clone(), -1.0, 1.0).unwrap(), delta: 0.01 };
    let exp_floor = FloorSpec::new(FloorKind::Exponential { level: 0.6, decay: 0.05 }, 1.0, 0.4).unwrap();
    assert!(FloorOptimal::new(xi(), exp_floor).unwrap().audit(&grid, 300, 1).unwrap().passed());
    let reference: Arc<dyn WealthModel> = Arc::new(MertonModel::new(s.clone(), -3.0, 2.0).unwrap());
    let prop_floor = FloorSpec::new(FloorKind::Proportional { factor: 0.25, reference }, 1.0, 0.4).unwrap();
    let model = FloorOptimal::new(xi(), prop_floor).unwrap();
    let r = model.audit(&grid, 300, 1).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(model.audit_dominating(&grid, 300, 1).unwrap().passed());
    let noise = NoiseBlock::generate(1, 0, &grid, 1);
    assert_eq!(model.wealth(&grid, &noise).unwrap().initial(), 1.0);
}

#[test]
fn drawdown_audit_over_gbm_paths() {
    let s = common::scalar_market(0.06, 0.2, 10.0);
    let grid = TimeGrid::uniform(10.0, 1000).unwrap();
    for alpha in [0.3, 0.9] {
        let model = DrawdownOptimal {
            xi: MertonModel::new(s.clone(), -(1.0 - alpha), 1.0).unwrap(),
            scale: linear_drawdown_scale(alpha, 1.0).unwrap(),
        };
        let r = model.audit(&grid, 1000, 9).unwrap();
        assert_eq!((r.n_paths_checked, r.n_violations), (1000, 0));
        assert!(r.worst_margin > 0.0);
    }
}
