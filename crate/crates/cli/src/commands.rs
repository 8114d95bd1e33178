//! Operations shared by the command line and the service.

use locus_core::augment::{
    admits_shortcut_set, epsilon_shortcut_set, fan_shortcut_set, k4_interior, k4_shortcut, polygon_scn, verify_shortcut_set,
};
use locus_core::gadgets::{build_point_cover_instance, verify_gadget, CnfFormula};
use locus_core::network::NetworkJson;
use locus_core::search::{find_shortcut, scn_is_one_disconnected, SearchEvent, SearchParams};
use locus_core::{continuous_diameter, Network, Result, ShortcutSet};
use serde_json::{json, Value};

use crate::output::to_value;

pub fn diameter(net: &Network) -> Result<Value> {
    Ok(to_value(&continuous_diameter(net)?))
}

pub fn check(net: &Network) -> Result<Value> {
    Ok(to_value(&admits_shortcut_set(net)?))
}

pub fn fan(net: &Network) -> Result<Value> {
    let (set, plan, verification) = fan_shortcut_set(net)?;
    Ok(json!({
        "segments": set.to_json(),
        "size": set.len(),
        "plan": to_value(&plan),
        "verification": to_value(&verification),
    }))
}

pub fn epsilon(net: &Network, eps: f64) -> Result<Value> {
    let (set, plan) = epsilon_shortcut_set(net, eps)?;
    let verification = verify_shortcut_set(net, &set)?;
    Ok(json!({
        "segments": set.to_json(),
        "size": set.len(),
        "eps": eps,
        "hull_d": to_value(&plan.hull_d),
        "stage": to_value(&plan.stage),
        "net_points": plan.net_points.len(),
        "verification": to_value(&verification),
    }))
}

pub fn shortcut(net: &Network, params: SearchParams, observer: Option<&(dyn Fn(&SearchEvent) + Sync)>) -> Result<Value> {
    Ok(to_value(&find_shortcut(net, params, observer)?))
}

pub fn scn1(net: &Network) -> Result<Value> {
    Ok(to_value(&scn_is_one_disconnected(net)?))
}

pub fn polygon(net: &Network) -> Result<Value> {
    let r = polygon_scn(net)?;
    Ok(json!({
        "scn": r.scn,
        "segments": r.set.to_json(),
        "verification": to_value(&r.verification),
    }))
}

pub fn k4(net: &Network) -> Result<Value> {
    let inner = k4_interior(net)?;
    let seg = k4_shortcut(net)?;
    let set = ShortcutSet::anchored(net, vec![seg])?;
    let verification = verify_shortcut_set(net, &set)?;
    Ok(json!({
        "interior": net.vertices()[inner].id,
        "segments": set.to_json(),
        "verification": to_value(&verification),
    }))
}

/// The gadget network and its provenance sidecar.
pub fn gen3sat(cnf: &str, seed: u64) -> Result<(Value, Value)> {
    let phi = CnfFormula::parse(cnf)?;
    let g = build_point_cover_instance(&phi, seed)?;
    let net = g.to_network()?;
    let sidecar = json!({
        "formula": phi.to_string(),
        "n": phi.n,
        "m": phi.m(),
        "seed": seed,
        "points": to_value(&g.provenance()),
        "violations": to_value(&verify_gadget(&g)),
    });
    Ok((serde_json::to_value(NetworkJson::from(&net)).expect("serializable"), sidecar))
}
