//! Deterministic serialization: CSV, JSON, SVG.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), enough to
//! round-trip any binary f64 exactly. JSON objects are emitted with keys in
//! lexicographic order, so identical data always yields identical bytes.

use serde_json::Value;

use crate::equilibrium::{Beta, Temperature};
use crate::integrate::Trajectory;
use crate::statespace::DiagramCurve;

/// 17-significant-digit scientific notation; round-trip exact for f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON number `Value` from an f64 (finite input only).
pub fn number(x: f64) -> Value {
    Value::from(x)
}

/// Serialize a JSON value with sorted keys and full-precision floats.
pub fn to_json_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("numeric value")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        // serde_json's default map is a BTreeMap: keys iterate sorted
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("keys always serialize"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

pub fn beta_value(beta: Beta) -> Value {
    match beta {
        Beta::Finite(b) => number(b),
        Beta::PlusInfinity => Value::String("+infinity".into()),
        Beta::MinusInfinity => Value::String("-infinity".into()),
    }
}

pub fn temperature_value(t: Temperature) -> Value {
    match t {
        Temperature::Finite(v) => number(v),
        Temperature::Infinite => Value::String("infinite".into()),
    }
}

pub fn float_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

/// Trajectory CSV with the exact header `t,p_1,...,p_N,E,S,dSdt`.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let n = trajectory.spectrum().len();
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",p_{i}"));
    }
    out.push_str(",E,S,dSdt\n");
    for point in trajectory.points() {
        out.push_str(&format_float(point.t));
        for &p in point.state.probs() {
            out.push(',');
            out.push_str(&format_float(p));
        }
        out.push(',');
        out.push_str(&format_float(point.energy));
        out.push(',');
        out.push_str(&format_float(point.entropy));
        out.push(',');
        out.push_str(&format_float(point.entropy_rate));
        out.push('\n');
    }
    out
}

/// Diagram CSV with header `E,S,beta`.
pub fn diagram_csv(curve: &DiagramCurve) -> String {
    let mut out = String::from("E,S,beta\n");
    for sample in curve.samples() {
        out.push_str(&format_float(sample.energy));
        out.push(',');
        out.push_str(&format_float(sample.entropy));
        out.push(',');
        out.push_str(&format_float(sample.beta));
        out.push('\n');
    }
    out
}

/// A minimal SVG rendering of the diagram: axes, the S = 0 segment of
/// mechanics states, and the stable-equilibrium boundary polyline.
pub fn diagram_svg(curve: &DiagramCurve) -> String {
    const W: f64 = 720.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    let e_min = curve.spectrum().min_level();
    let e_max = curve.spectrum().max_level();
    let s_max = curve.apex().entropy;
    let e_span = (e_max - e_min).max(1e-300);
    let s_span = (s_max * 1.05).max(1e-300);
    let x = |e: f64| M + (e - e_min) / e_span * (W - 2.0 * M);
    let y = |s: f64| H - M - s / s_span * (H - 2.0 * M);

    let mut points = String::new();
    for sample in curve.samples() {
        points.push_str(&format!("{:.3},{:.3} ", x(sample.energy), y(sample.entropy)));
    }
    let points = points.trim_end();

    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\">\n",
            "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "  <line x1=\"{ax0}\" y1=\"{ay}\" x2=\"{ax1}\" y2=\"{ay}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            "  <line x1=\"{ax0}\" y1=\"{ay}\" x2=\"{ax0}\" y2=\"{ty}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            "  <line x1=\"{zx0}\" y1=\"{zy}\" x2=\"{zx1}\" y2=\"{zy}\" stroke=\"steelblue\" stroke-width=\"3\"/>\n",
            "  <polyline points=\"{points}\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\"/>\n",
            "  <text x=\"{ax0}\" y=\"{lby}\" font-size=\"12\">E = {emin:.6}</text>\n",
            "  <text x=\"{rtx}\" y=\"{lby}\" font-size=\"12\" text-anchor=\"end\">E = {emax:.6}</text>\n",
            "  <text x=\"{ax0}\" y=\"{tly}\" font-size=\"12\">S_max = {smax:.6}</text>\n",
            "  <text x=\"{zx1}\" y=\"{zly}\" font-size=\"12\" text-anchor=\"end\">S = 0</text>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        ax0 = M,
        ax1 = W - M,
        ay = H - M,
        ty = M,
        zx0 = x(e_min),
        zx1 = x(e_max),
        zy = y(0.0),
        points = points,
        lby = H - M + 20.0,
        rtx = W - M,
        tly = M - 10.0,
        zly = y(0.0) + 20.0,
        emin = e_min,
        emax = e_max,
        smax = s_max,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0_f64.ln(), 1e-300, -0.8, 123456.789] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s} did not round-trip");
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"zeta": 1, "alpha": 2, "Mid": 3});
        let s = to_json_string(&v);
        // byte order: uppercase before lowercase
        assert_eq!(s, "{\"Mid\":3,\"alpha\":2,\"zeta\":1}\n");
    }

    #[test]
    fn json_floats_use_full_precision() {
        let v = json!({"x": 0.5});
        assert_eq!(to_json_string(&v), "{\"x\":5.0000000000000000e-1}\n");
    }

    #[test]
    fn json_serialization_is_deterministic() {
        let v = json!({"a": [1.0, 2.5], "b": {"c": true, "d": null}});
        assert_eq!(to_json_string(&v), to_json_string(&v.clone()));
    }
}
