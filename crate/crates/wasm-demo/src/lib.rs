//! Browser bindings for the interactive demo page in `www/`.
//!
//! Every export takes plain strings/numbers and returns a JSON string, so the
//! page needs no generated type glue and the functions can be tested natively.

use egocircles::egonet::{assign_circles, mean_shift_modes, silverman_bandwidth, tie_strength, MeanShiftConfig};
use egocircles::stats::{thorndike_case2, thorndike_case3};
use egocircles::CollaborationTie;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("cannot parse {s:?}")))
        .collect()
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

#[derive(Serialize)]
struct Classified {
    /// Ring (1 = innermost) of each input value, in input order.
    rings: Vec<usize>,
    ring_sizes: Vec<usize>,
    circle_sizes: Vec<usize>,
    breaks: Vec<f64>,
    complete: bool,
    modes: Vec<f64>,
    bandwidth: f64,
}

/// Splits a list of tie strengths into five rings (natural breaks) and
/// counts the modes of their distribution.
#[wasm_bindgen]
pub fn classify_strengths(text: &str) -> String {
    let values: Vec<f64> = match parse_list(text) {
        Ok(v) => v,
        Err(e) => return error(e),
    };
    if values.is_empty() {
        return error("enter at least one strength");
    }
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return error("strengths must be positive numbers");
    }
    let ties = values
        .iter()
        .enumerate()
        .map(|(i, &s)| CollaborationTie {
            ego_id: "ego".into(),
            alter_id: format!("{i:06}"),
            strength: s,
            duration_years: 1.0,
            shared_paper_count: 1,
            ring: 0,
        })
        .collect();
    let net = assign_circles("ego", ties);
    let mut rings = vec![0; values.len()];
    for t in &net.ties {
        rings[t.alter_id.parse::<usize>().expect("index id")] = t.ring;
    }
    let out = Classified {
        rings,
        ring_sizes: net.ring_sizes.to_vec(),
        circle_sizes: net.circle_sizes.to_vec(),
        breaks: net.breaks.clone(),
        complete: net.complete,
        modes: mean_shift_modes(&values, &MeanShiftConfig::default()),
        bandwidth: silverman_bandwidth(&values),
    };
    serde_json::to_string(&out).expect("serialisable")
}

/// Strength of one ego-alter relation from the author counts of the shared
/// papers and the relation length in years.
#[wasm_bindgen]
pub fn relation_strength(author_counts: &str, duration_years: f64) -> String {
    let counts: Vec<usize> = match parse_list(author_counts) {
        Ok(v) => v,
        Err(e) => return error(e),
    };
    if counts.is_empty() {
        return error("enter at least one author count");
    }
    match tie_strength(&counts, duration_years) {
        Ok(t) => json!({ "strength": t, "papers": counts.len() }).to_string(),
        Err(e) => error(e),
    }
}

/// Corrected correlation as a function of the SD ratio u in [0.25, u_max].
/// With `r_xz` and `r_zy` both zero the direct-restriction formula is used,
/// otherwise the third-variable one.
#[wasm_bindgen]
pub fn correction_curve(r: f64, r_xz: f64, r_zy: f64, u_max: f64, steps: u32) -> String {
    if !(u_max > 0.25) || steps < 2 {
        return error("u_max must exceed 0.25 and steps must be at least 2");
    }
    let direct = r_xz == 0.0 && r_zy == 0.0;
    let mut points = Vec::with_capacity(steps as usize);
    for i in 0..steps {
        let u = 0.25 + (u_max - 0.25) * i as f64 / (steps - 1) as f64;
        let v = if direct {
            thorndike_case2(r, u)
        } else {
            thorndike_case3(r, r_xz, r_zy, u)
        };
        match v {
            Ok(c) => points.push([u, c]),
            Err(e) => return error(e),
        }
    }
    json!({ "case": if direct { 2 } else { 3 }, "points": points }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn five_distinct_strengths() {
        let v = parse(&classify_strengths("0.5, 8, 2 1 4"));
        assert_eq!(v["rings"], json!([5, 1, 3, 4, 2]));
        assert_eq!(v["complete"], json!(true));
        assert_eq!(v["circle_sizes"], json!([1, 2, 3, 4, 5]));
    }

    #[test]
    fn two_clusters_two_modes() {
        let mut s = String::new();
        for i in 0..20 {
            s.push_str(&format!("{} {} ", 1.0 + i as f64 * 0.001, 10.0 + i as f64 * 0.001));
        }
        let v = parse(&classify_strengths(&s));
        assert_eq!(v["modes"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn bad_input() {
        assert!(parse(&classify_strengths("1, x")).get("error").is_some());
        assert!(parse(&classify_strengths("")).get("error").is_some());
        assert!(parse(&classify_strengths("-1")).get("error").is_some());
        assert!(parse(&relation_strength("1", 1.0)).get("error").is_some());
        assert!(parse(&relation_strength("2", 0.0)).get("error").is_some());
    }

    #[test]
    fn strength_examples() {
        assert_eq!(parse(&relation_strength("3,5", 2.0))["strength"], json!(0.375));
        assert_eq!(parse(&relation_strength("2 2 2", 4.0))["strength"], json!(0.75));
    }

    #[test]
    fn curve_shape() {
        let v = parse(&correction_curve(0.5, 0.0, 0.0, 3.0, 12));
        assert_eq!(v["case"], json!(2));
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 12);
        // u = 1 reproduces r; later points increase
        let ys: Vec<f64> = pts.iter().map(|p| p[1].as_f64().unwrap()).collect();
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
        let v = parse(&correction_curve(0.3, 0.5, 0.4, 2.0, 5));
        assert_eq!(v["case"], json!(3));
        assert!(parse(&correction_curve(0.3, 0.0, 0.0, 0.1, 5)).get("error").is_some());
    }
}
