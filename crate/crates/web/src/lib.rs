//! Browser bindings for the static demo in `www/`.
//!
//! Every export returns plain CSV text; errors come back as a thrown string.

use riordan::index::{self, Family, Filtration};
use riordan::quotients::{self, QuotientGroup};
use riordan::riordan::RiordanElem;
use riordan::series::CoeffRing;
use wasm_bindgen::prelude::*;

/// Quotients above this many elements are refused; the page runs on the main thread.
const DEMO_CAP: u64 = 1 << 18;

fn ints(list: &str) -> Result<Vec<i64>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad coefficient `{s}`")))
        .collect()
}

pub fn array_csv(p: u64, h: &str, g: &str, m: usize) -> Result<String, String> {
    if !(1..=64).contains(&m) {
        return Err("m must be between 1 and 64".into());
    }
    let ring = CoeffRing::prime_field(p).map_err(|e| e.to_string())?;
    let (mut h, mut g) = (ints(h)?, ints(g)?);
    if h.len() > m || g.len() > m {
        return Err(format!("at most {m} coefficients per series"));
    }
    h.resize(m, 0);
    g.resize(m, 0);
    let a = RiordanElem::from_i64(ring, &h, &g).map_err(|e| e.to_string())?;
    Ok(a.to_matrix(m).map_err(|e| e.to_string())?.to_csv())
}

pub fn width_csv(p: u64, level: usize, depth: usize) -> Result<String, String> {
    let g = QuotientGroup::with_cap(p, level, DEMO_CAP).map_err(|e| e.to_string())?;
    let rows = quotients::width_report(&g, depth).map_err(|e| e.to_string())?;
    let mut out = String::from("i,gamma_order,width,boundary\n");
    for r in rows {
        out += &format!("{},{},{},{}\n", r.i, r.gamma_order, r.width, r.boundary);
    }
    Ok(out)
}

pub fn dimension_csv(p: u64, family: &str, max_n: u64) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: riordan::error::Error| e.to_string())?;
    let (i, j) = family.pair(p).map_err(|e| e.to_string())?;
    let report = index::hausdorff_dim_checked(&i, &j, p, &Filtration::Identity, max_n.min(200_000), index::DEFAULT_BOUND)
        .map_err(|e| e.to_string())?;
    Ok(report.to_csv())
}

/// The m x m corner of the Riordan array (h, g) over F_p, as CSV rows.
#[wasm_bindgen(js_name = riordanArray)]
pub fn riordan_array(p: u32, h: &str, g: &str, m: u32) -> Result<String, JsValue> {
    array_csv(p.into(), h, g, m as usize).map_err(|e| JsValue::from_str(&e))
}

/// Orders and widths along the lower central series of R(F_p)/R^level.
#[wasm_bindgen(js_name = widthTable)]
pub fn width_table(p: u32, level: u32, depth: u32) -> Result<String, JsValue> {
    width_csv(p.into(), level as usize, depth as usize).map_err(|e| JsValue::from_str(&e))
}

/// Finite-level dimension estimates for a spectrum family, ending in `exact=...`.
#[wasm_bindgen(js_name = dimensionCurve)]
pub fn dimension_curve(p: u32, family: &str, max_n: u32) -> Result<String, JsValue> {
    dimension_csv(p.into(), family, max_n.into()).map_err(|e| JsValue::from_str(&e))
}
