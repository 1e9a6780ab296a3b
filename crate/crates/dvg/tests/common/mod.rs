//! Integrable instances built by conjugating a diagonal map with polynomial
//! automorphisms of degree 2, `f = T⁻¹ ∘ D ∘ T`, where `D(x, y) = (t^b x, t^-a y)` keeps
//! `x^a y^b` and fixes the line `y = 0`.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dvg::ProblemSpec;

#[derive(Debug, Clone)]
pub struct Instance {
    pub map: [String; 2],
    pub curve: [String; 2],
    pub phi: String,
    pub integral: String,
    pub symplectic: bool,
}

const BASES: [(i64, i64); 7] = [(2, 1), (3, 1), (-2, 1), (1, 2), (3, 2), (-3, 1), (5, 1)];

fn small_poly(rng: &mut ChaCha8Rng, var: &str, degree: u32) -> String {
    let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
    let top = if degree == 2 { c[2] } else { 0 };
    format!("({} + ({})*{var} + ({})*{var}^2)", c[0] / 2, c[1], top)
}

fn subst(p: &str, var: &str, by: &str) -> String {
    p.replace(var, &format!("({by})"))
}

pub fn instance(rng: &mut ChaCha8Rng) -> Instance {
    let (tn, td) = BASES[rng.gen_range(0..BASES.len())];
    let (a, b) = [(1, 1), (1, 1), (1, 2), (2, 1)][rng.gen_range(0..4)];
    let t = format!("({tn}/{td})");
    let lambda = format!("{t}^{b}");
    let mu = format!("{t}^-{a}");
    // T(x, y) = (x + p1(y), y + p2(x + p1(y))) has degree 2 when p1 is affine
    let p1 = small_poly(rng, "s", 1);
    let p2 = small_poly(rng, "s", 2);
    let big_x = format!("x + {}", subst(&p1, "s", "y"));
    let big_y = format!("y + {}", subst(&p2, "s", &big_x));
    let u = format!("{lambda}*({big_x})");
    let v = format!("{mu}*({big_y})");
    let second = format!("{v} - {}", subst(&p2, "s", &u));
    let first = format!("{u} - {}", subst(&p1, "s", &second));
    let curve_y = format!("-{}", subst(&p2, "s", "z"));
    let curve_x = format!("z - {}", subst(&p1, "s", &curve_y));
    Instance {
        map: [first, second],
        curve: [curve_x, curve_y],
        phi: format!("{lambda}*z"),
        integral: format!("({big_x})^{a}*({big_y})^{b}"),
        symplectic: a == b,
    }
}

pub fn spec(i: &Instance, name: &str) -> ProblemSpec {
    let json = serde_json::json!({
        "name": name,
        "variables": ["x", "y"],
        "map": i.map,
        "symplectic": i.symplectic,
        "curve": i.curve,
        "phi": i.phi,
        "first_integrals": [i.integral],
    });
    ProblemSpec::from_json(&json.to_string()).expect("generated problems parse")
}
