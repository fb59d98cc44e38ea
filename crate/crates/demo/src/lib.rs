use wasm_bindgen::prelude::*;

use semilinear::groups::GroupSpec;
use semilinear::report::{self, Job};
use semilinear::tower::TowerSpec;

// Kept separate from the exported wrappers so they can be tested natively.
fn pell(d: i64) -> Result<String, String> {
    report::pell_report(d).map(|r| r.to_string()).map_err(|e| e.to_string())
}

fn classify_json(tower: &str, group: &str) -> Result<String, String> {
    let tower = TowerSpec::from_json(tower).map_err(|e| e.to_string())?;
    let group = GroupSpec::from_json(group).map_err(|e| e.to_string())?;
    report::classify_report(&Job::new(group, tower))
        .map(|r| r.to_string())
        .map_err(|e| e.to_string())
}

fn table_json(group: &str) -> Result<String, String> {
    let group = GroupSpec::from_json(group).map_err(|e| e.to_string())?;
    report::table_report(&group).map(|r| r.to_string()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn pell_report(d: i32) -> Result<String, JsValue> {
    pell(d as i64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(tower: &str, group: &str) -> Result<String, JsValue> {
    classify_json(tower, group).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn character_table(group: &str) -> Result<String, JsValue> {
    table_json(group).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrappers_return_json() {
        assert!(pell(2).unwrap().contains("\"solvable\":true"));
        let s3 = r#"{"generators":[[2,1,3],[2,3,1]],"sigma_images":[1,0]}"#;
        let c = classify_json(r#"{"kind":"quadratic","d":5}"#, s3).unwrap();
        assert!(c.contains("\"wedderburn_total\":12"));
        assert!(table_json(r#"{"generators":[[2,1,3]]}"#).unwrap().contains("rows"));
        assert!(classify_json("{}", s3).is_err());
    }
}
