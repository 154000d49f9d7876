mod common;

use common::properties;

#[test]
fn smith_normal_form_agrees_with_minors() {
    properties::snf(1000).unwrap();
}

#[test]
fn nonzero_composites_are_rejected() {
    properties::d_squared(256).unwrap();
}

#[test]
fn extension_orders_multiply() {
    properties::extension_orders(256).unwrap();
}

#[test]
fn random_charts_are_deterministic() {
    properties::random_charts(128).unwrap();
}

#[test]
fn scenario_charts_are_deterministic() {
    properties::scenario_charts().unwrap();
}
