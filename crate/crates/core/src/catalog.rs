//! Named systems `y'' = f(y)` with parameter schemas, declared parity,
//! potentials and domain guards.
//!
//! Every entry is checked when it is built: the declared parity must match
//! [`classify_field_parity`] on the entry's check ball, and when a potential
//! is attached its finite-difference gradient must reproduce `f`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Parity, VectorField};
use crate::sampling::HaltonCube;
use crate::symmetry::{classify_field_parity, SampleBall, DEFAULT_PARITY_TOL};

/// Parameter values by name. Scalars are one-element lists.
pub type Params = BTreeMap<String, Vec<f64>>;

/// Relative tolerance of the potential gradient check.
pub const GRADIENT_TOL: f64 = 1e-5;
/// Seeded points used by the gradient check.
pub const GRADIENT_POINTS: usize = 64;
const CHECK_SAMPLES: usize = 256;
const CHECK_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Any,
    Positive,
    NonNegative,
    AtLeast(f64),
}

impl Bound {
    fn admits(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Bound::Any => true,
                Bound::Positive => v > 0.0,
                Bound::NonNegative => v >= 0.0,
                Bound::AtLeast(lo) => v >= lo,
            }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Any => write!(f, "any real"),
            Bound::Positive => write!(f, "> 0"),
            Bound::NonNegative => write!(f, ">= 0"),
            Bound::AtLeast(lo) => write!(f, ">= {lo}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static [f64],
    pub bound: Bound,
    /// Accepts a list of any length (at least two) instead of one value.
    pub list: bool,
}

const fn scalar(name: &'static str, default: &'static [f64], bound: Bound) -> ParamSpec {
    ParamSpec {
        name,
        default,
        bound,
        list: false,
    }
}

fn schema_text(schema: &[ParamSpec]) -> String {
    if schema.is_empty() {
        return "no parameters".into();
    }
    schema
        .iter()
        .map(|p| {
            let kind = if p.list { "list, each " } else { "" };
            format!("{} ({kind}{}, default {:?})", p.name, p.bound, p.default)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Parameter values after defaults are filled in.
struct Values(Params);

impl Values {
    fn get(&self, name: &str) -> f64 {
        self.0[name][0]
    }

    fn list(&self, name: &str) -> Vec<f64> {
        self.0[name].clone()
    }
}

struct Built {
    field: VectorField,
    reference_y0: Vec<f64>,
    /// Guard-respecting region for the registration checks.
    check_center: Vec<f64>,
    check_radius: f64,
}

struct Definition {
    name: &'static str,
    equation: &'static str,
    guard: Option<&'static str>,
    singular: bool,
    schema: &'static [ParamSpec],
    build: fn(&Values) -> std::result::Result<Built, String>,
}

/// A registered, checked system.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub params: Params,
    pub schema: &'static [ParamSpec],
    pub field: VectorField,
    pub declared_parity: Parity,
    pub has_potential: bool,
    pub guard: Option<&'static str>,
    /// The equation (and any modelling assumption) the entry implements.
    pub equation: &'static str,
    /// True when `f` has a singularity that the guard excludes.
    pub singular: bool,
    /// A representative in-domain starting position.
    pub reference_y0: Vec<f64>,
    pub check_ball: SampleBall,
}

#[derive(Debug, Clone, Serialize)]
pub struct ListingParam {
    pub name: &'static str,
    pub default: Vec<f64>,
    pub range: String,
    pub list: bool,
}

/// One row of the JSON catalog listing.
#[derive(Debug, Clone, Serialize)]
pub struct Listing {
    pub name: &'static str,
    pub dimension: usize,
    pub parameters: Vec<ListingParam>,
    pub declared_parity: Parity,
    pub potential: bool,
    pub guard: Option<&'static str>,
    pub equation: &'static str,
}

static NBODY: &[ParamSpec] = &[
    ParamSpec {
        name: "masses",
        default: &[1.0, 1.0],
        bound: Bound::Positive,
        list: true,
    },
    scalar("G", &[1.0], Bound::Positive),
    scalar("guard_eps", &[1e-3], Bound::Positive),
];
static MANEV: &[ParamSpec] = &[
    scalar("gamma", &[1.0], Bound::Positive),
    scalar("epsilon", &[0.1], Bound::NonNegative),
    scalar("guard_eps", &[1e-3], Bound::Positive),
];
static ANISO: &[ParamSpec] = &[
    scalar("mu", &[1.0], Bound::AtLeast(1.0)),
    scalar("beta", &[2.0], Bound::AtLeast(2.0)),
    scalar("aniso_b", &[0.5], Bound::Positive),
    scalar("guard_eps", &[1e-3], Bound::Positive),
];
static ALPHA: &[ParamSpec] = &[scalar("alpha", &[1.0], Bound::Any)];
static NONE: &[ParamSpec] = &[];
static SATELLITE: &[ParamSpec] = &[scalar("mu", &[1.0], Bound::Positive), scalar("a", &[1.0], Bound::Positive)];
static OMEGA: &[ParamSpec] = &[scalar("omega", &[1.0], Bound::Positive)];
static FORCED: &[ParamSpec] = &[scalar("omega", &[1.0], Bound::Positive), scalar("lambda", &[0.5], Bound::Any)];
static STRING: &[ParamSpec] = &[scalar("a", &[1.0], Bound::Positive)];
static LAMBDA: &[ParamSpec] = &[scalar("lambda", &[0.5], Bound::Any)];
static MAGNETIC: &[ParamSpec] = &[
    scalar("m", &[1.0], Bound::Positive),
    scalar("a", &[1.0], Bound::Positive),
    scalar("g", &[1.0], Bound::NonNegative),
    scalar("h", &[2.0], Bound::Positive),
    scalar("c", &[1.0], Bound::NonNegative),
];
static EXP: &[ParamSpec] = &[scalar("a", &[1.0], Bound::Any)];
static SCALE: &[ParamSpec] = &[scalar("scale", &[1.0], Bound::Positive)];

static DEFINITIONS: &[Definition] = &[
    Definition {
        name: "nbody",
        equation: "y_k'' = sum_{j != k} G m_j (y_j - y_k) / |y_j - y_k|^3, bodies in R^3",
        guard: Some("any pairwise distance below guard_eps"),
        singular: true,
        schema: NBODY,
        build: build_nbody,
    },
    Definition {
        name: "manev",
        equation: "y'' = -grad U, U = -gamma/|y| - epsilon/|y|^2, y in R^3",
        guard: Some("|y| below guard_eps"),
        singular: true,
        schema: MANEV,
        build: build_manev,
    },
    Definition {
        name: "anisotropic_kepler",
        equation: "y'' = -grad U, U = -1/sqrt(y1^2 + y2^2) - aniso_b/(mu y1^2 + y2^2)^(beta/2)",
        guard: Some("|y| below guard_eps"),
        singular: true,
        schema: ANISO,
        build: build_aniso,
    },
    Definition {
        name: "duffing",
        equation: "x'' = -x - alpha x^3",
        guard: None,
        singular: false,
        schema: ALPHA,
        build: |v| {
            let alpha = v.get("alpha");
            scalar_built(
                VectorField::scalar("duffing", move |x| -x - alpha * x * x * x)
                    .with_potential(move |y| 0.5 * y[0] * y[0] + 0.25 * alpha * y[0].powi(4)),
            )
        },
    },
    Definition {
        name: "linear9",
        equation: "x'' = -9x",
        guard: None,
        singular: false,
        schema: NONE,
        build: |_| {
            scalar_built(VectorField::scalar("linear9", |x| -9.0 * x).with_potential(|y| 4.5 * y[0] * y[0]))
        },
    },
    Definition {
        name: "binary_satellite",
        equation: "x'' = -2 mu x / (a^2 + x^2)^(3/2)",
        guard: None,
        singular: false,
        schema: SATELLITE,
        build: |v| {
            let (mu, a) = (v.get("mu"), v.get("a"));
            scalar_built(
                VectorField::scalar("binary_satellite", move |x| -2.0 * mu * x / (a * a + x * x).powf(1.5))
                    .with_potential(move |y| -2.0 * mu / (a * a + y[0] * y[0]).sqrt()),
            )
        },
    },
    Definition {
        name: "pendulum",
        equation: "x'' = -omega^2 sin x",
        guard: None,
        singular: false,
        schema: OMEGA,
        build: |v| {
            let w2 = v.get("omega").powi(2);
            scalar_built(
                VectorField::scalar("pendulum", move |x| -w2 * x.sin()).with_potential(move |y| -w2 * y[0].cos()),
            )
        },
    },
    Definition {
        name: "cubic_pendulum",
        equation: "x'' = -omega^2 (x - x^3/6)",
        guard: None,
        singular: false,
        schema: OMEGA,
        build: |v| {
            let w2 = v.get("omega").powi(2);
            scalar_built(
                VectorField::scalar("cubic_pendulum", move |x| -w2 * (x - x * x * x / 6.0))
                    .with_potential(move |y| w2 * (0.5 * y[0] * y[0] - y[0].powi(4) / 24.0)),
            )
        },
    },
    Definition {
        name: "forced_pendulum",
        equation: "theta'' = omega^2 (cos theta - lambda) sin theta",
        guard: None,
        singular: false,
        schema: FORCED,
        build: |v| {
            let (w2, lambda) = (v.get("omega").powi(2), v.get("lambda"));
            scalar_built(
                VectorField::scalar("forced_pendulum", move |t| w2 * (t.cos() - lambda) * t.sin())
                    .with_potential(move |y| -w2 * (0.5 * y[0].sin().powi(2) + lambda * y[0].cos())),
            )
        },
    },
    Definition {
        name: "elastic_string",
        equation: "x'' = -x + a sgn(x) for |x| > a, 0 for |x| <= a (sgn 0 = 0); Lipschitz constant 1",
        guard: None,
        singular: false,
        schema: STRING,
        build: |v| {
            let a = v.get("a");
            let field = VectorField::scalar("elastic_string", move |x| {
                if x.abs() > a {
                    -x + a * x.signum()
                } else {
                    0.0
                }
            })
            .with_potential(move |y| {
                let over = (y[0].abs() - a).max(0.0);
                0.5 * over * over
            })
            .with_lipschitz(1.0);
            Ok(Built {
                field,
                reference_y0: vec![0.5],
                check_center: vec![0.0],
                check_radius: 2.0 * a,
            })
        },
    },
    Definition {
        name: "quartic_quadratic",
        equation: "x'' = x^4 - x^2",
        guard: None,
        singular: false,
        schema: NONE,
        build: |_| {
            scalar_built(
                VectorField::scalar("quartic_quadratic", |x| x.powi(4) - x * x)
                    .with_potential(|y| -y[0].powi(5) / 5.0 + y[0].powi(3) / 3.0),
            )
        },
    },
    Definition {
        name: "shifted_cubic",
        equation: "x'' = (x - lambda)(x^2 - lambda)",
        guard: None,
        singular: false,
        schema: LAMBDA,
        build: |v| {
            let l = v.get("lambda");
            scalar_built(
                VectorField::scalar("shifted_cubic", move |x| (x - l) * (x * x - l)).with_potential(move |y| {
                    let x = y[0];
                    -(x.powi(4) / 4.0 - l * x.powi(3) / 3.0 - l * x * x / 2.0 + l * l * x)
                }),
            )
        },
    },
    Definition {
        name: "magnetic_pendulum",
        equation: "m a^2 theta'' = -m g a sin theta + F h sin phi, F = c/(a^2 + h^2 - 2 a h cos theta), \
                   h > a; assumes sin phi = a sin theta / sqrt(a^2 + h^2 - 2 a h cos theta)",
        guard: None,
        singular: false,
        schema: MAGNETIC,
        build: build_magnetic,
    },
    Definition {
        name: "cubic_tilt",
        equation: "x'' = -lambda - x^3 + x",
        guard: None,
        singular: false,
        schema: LAMBDA,
        build: |v| {
            let l = v.get("lambda");
            scalar_built(
                VectorField::scalar("cubic_tilt", move |x| -l - x * x * x + x)
                    .with_potential(move |y| l * y[0] + y[0].powi(4) / 4.0 - y[0] * y[0] / 2.0),
            )
        },
    },
    Definition {
        name: "exp_minus",
        equation: "x'' = a - exp(x)",
        guard: None,
        singular: false,
        schema: EXP,
        build: |v| {
            let a = v.get("a");
            scalar_built(
                VectorField::scalar("exp_minus", move |x| a - x.exp()).with_potential(move |y| -a * y[0] + y[0].exp()),
            )
        },
    },
    Definition {
        name: "exp_plus",
        equation: "x'' = a + exp(x)",
        guard: None,
        singular: false,
        schema: EXP,
        build: |v| {
            let a = v.get("a");
            scalar_built(
                VectorField::scalar("exp_plus", move |x| a + x.exp()).with_potential(move |y| -a * y[0] - y[0].exp()),
            )
        },
    },
    Definition {
        name: "conservative",
        equation: "x'' = -g(x), g(0) = 0, g increasing, integral of g unbounded; here g(x) = scale sinh(x)",
        guard: None,
        singular: false,
        schema: SCALE,
        build: |v| {
            let s = v.get("scale");
            scalar_built(
                VectorField::scalar("conservative", move |x| -s * x.sinh())
                    .with_potential(move |y| s * (y[0].cosh() - 1.0)),
            )
        },
    },
];

fn scalar_built(field: VectorField) -> std::result::Result<Built, String> {
    Ok(Built {
        field,
        reference_y0: vec![0.5],
        check_center: vec![0.0],
        check_radius: 1.0,
    })
}

/// Bodies on a circle of radius 1/2 in the plane `z = 0`.
pub fn nbody_reference_positions(bodies: usize) -> Vec<f64> {
    (0..bodies)
        .flat_map(|k| {
            let angle = 2.0 * PI * k as f64 / bodies as f64;
            if bodies == 2 {
                [0.5 * (1.0 - 2.0 * k as f64), 0.0, 0.0]
            } else {
                [0.5 * angle.cos(), 0.5 * angle.sin(), 0.0]
            }
        })
        .collect()
}

fn build_nbody(v: &Values) -> std::result::Result<Built, String> {
    let masses = v.list("masses");
    if masses.len() < 2 {
        return Err("at least two bodies are required".into());
    }
    let (g, eps) = (v.get("G"), v.get("guard_eps"));
    let field = nbody_field(&masses, g, eps);
    let reference = nbody_reference_positions(masses.len());
    let spacing = (0..masses.len())
        .flat_map(|a| (a + 1..masses.len()).map(move |b| (a, b)))
        .map(|(a, b)| distance(&reference, a, b))
        .fold(f64::INFINITY, f64::min);
    Ok(Built {
        field,
        check_center: reference.clone(),
        check_radius: 0.15 * spacing,
        reference_y0: reference,
    })
}

fn distance(y: &[f64], a: usize, b: usize) -> f64 {
    (0..3).map(|c| (y[3 * a + c] - y[3 * b + c]).powi(2)).sum::<f64>().sqrt()
}

/// Gravitational N-body field in `R^{3N}`, with potential `-G sum m_j m_k / r_jk`
/// weighted by the body masses.
pub fn nbody_field(masses: &[f64], g: f64, guard_eps: f64) -> VectorField {
    let n = masses.len();
    let m: Arc<[f64]> = masses.into();
    let (m_rhs, m_pot) = (m.clone(), m.clone());
    let weights = masses.iter().flat_map(|&mk| [mk; 3]).collect();
    VectorField::new("nbody", 3 * n, move |y, out| {
        out.fill(0.0);
        for k in 0..n {
            for j in k + 1..n {
                let d = [
                    y[3 * j] - y[3 * k],
                    y[3 * j + 1] - y[3 * k + 1],
                    y[3 * j + 2] - y[3 * k + 2],
                ];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let inv3 = g / (r2 * r2.sqrt());
                for c in 0..3 {
                    out[3 * k + c] += m_rhs[j] * inv3 * d[c];
                    out[3 * j + c] -= m_rhs[k] * inv3 * d[c];
                }
            }
        }
    })
    .with_guard(guard_eps, move |y| {
        if y.iter().all(|&x| x == 0.0) {
            return Some("all bodies coincide at the origin (total mutual collision)".into());
        }
        for a in 0..n {
            for b in a + 1..n {
                let r = distance(y, a, b);
                if r < guard_eps {
                    return Some(format!("bodies {} and {} collide: distance {r:e} < {guard_eps:e}", a + 1, b + 1));
                }
            }
        }
        None
    })
    .with_potential(move |y| {
        let mut u = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                u += m_pot[a] * m_pot[b] / distance(y, a, b);
            }
        }
        -g * u
    })
    .with_weights(weights)
}

fn radius_guard(eps: f64) -> impl Fn(&[f64]) -> Option<String> + Send + Sync + 'static {
    move |y| {
        let r = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        (r < eps).then(|| format!("|y| = {r:e} is inside the singular core (< {eps:e})"))
    }
}

fn build_manev(v: &Values) -> std::result::Result<Built, String> {
    let (gamma, eps, guard) = (v.get("gamma"), v.get("epsilon"), v.get("guard_eps"));
    let field = VectorField::new("manev", 3, move |y, out| {
        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        let r = r2.sqrt();
        let s = gamma / (r2 * r) + 2.0 * eps / (r2 * r2);
        for c in 0..3 {
            out[c] = -s * y[c];
        }
    })
    .with_guard(guard, radius_guard(guard))
    .with_potential(move |y| {
        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        -gamma / r2.sqrt() - eps / r2
    });
    Ok(Built {
        field,
        reference_y0: vec![1.0, 0.0, 0.0],
        check_center: vec![1.0, 0.0, 0.0],
        check_radius: 0.5,
    })
}

fn build_aniso(v: &Values) -> std::result::Result<Built, String> {
    let (mu, beta, ab, guard) = (v.get("mu"), v.get("beta"), v.get("aniso_b"), v.get("guard_eps"));
    let field = VectorField::new("anisotropic_kepler", 2, move |y, out| {
        let r2 = y[0] * y[0] + y[1] * y[1];
        let rho = mu * y[0] * y[0] + y[1] * y[1];
        let kepler = 1.0 / (r2 * r2.sqrt());
        let aniso = ab * beta / rho.powf(0.5 * beta + 1.0);
        out[0] = -(kepler + aniso * mu) * y[0];
        out[1] = -(kepler + aniso) * y[1];
    })
    .with_guard(guard, radius_guard(guard))
    .with_potential(move |y| {
        let r2 = y[0] * y[0] + y[1] * y[1];
        let rho = mu * y[0] * y[0] + y[1] * y[1];
        -1.0 / r2.sqrt() - ab / rho.powf(0.5 * beta)
    });
    Ok(Built {
        field,
        reference_y0: vec![1.0, 0.0],
        check_center: vec![1.0, 0.0],
        check_radius: 0.5,
    })
}

fn build_magnetic(v: &Values) -> std::result::Result<Built, String> {
    let (m, a, g, h, c) = (v.get("m"), v.get("a"), v.get("g"), v.get("h"), v.get("c"));
    if h <= a {
        return Err(format!("the magnet height h = {h} must exceed the arm length a = {a}"));
    }
    let dist = move |t: f64| (a * a + h * h - 2.0 * a * h * t.cos()).sqrt();
    scalar_built(
        VectorField::scalar("magnetic_pendulum", move |t| {
            -(g / a) * t.sin() + c * h * t.sin() / (m * a * dist(t).powi(3))
        })
        .with_potential(move |y| -(g / a) * y[0].cos() + c / (m * a * a * dist(y[0]))),
    )
}

fn definition(name: &str) -> Result<&'static Definition> {
    DEFINITIONS
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownSystem(format!("`{name}` (known: {})", names().join(", "))))
}

/// Names of every registered system.
pub fn names() -> Vec<&'static str> {
    DEFINITIONS.iter().map(|d| d.name).collect()
}

fn resolve(def: &Definition, params: &Params) -> Result<Values> {
    let invalid = |message: String| Error::InvalidParams {
        system: def.name.into(),
        message,
        schema: schema_text(def.schema),
    };
    if let Some(unknown) = params.keys().find(|k| !def.schema.iter().any(|p| p.name == k.as_str())) {
        return Err(invalid(format!("unknown parameter `{unknown}`")));
    }
    let mut out = Params::new();
    for spec in def.schema {
        let value = params.get(spec.name).cloned().unwrap_or_else(|| spec.default.to_vec());
        if spec.list && value.len() < 2 {
            return Err(invalid(format!("`{}` needs at least two values", spec.name)));
        }
        if !spec.list && value.len() != 1 {
            return Err(invalid(format!("`{}` takes exactly one value", spec.name)));
        }
        if let Some(bad) = value.iter().find(|x| !spec.bound.admits(**x)) {
            return Err(invalid(format!("`{}` = {bad} is outside {}", spec.name, spec.bound)));
        }
        out.insert(spec.name.to_string(), value);
    }
    Ok(Values(out))
}

/// Builds and checks the named system. Missing parameters take defaults.
pub fn lookup(name: &str, params: &Params) -> Result<CatalogEntry> {
    let def = definition(name)?;
    let values = resolve(def, params)?;
    let built = (def.build)(&values).map_err(|message| Error::InvalidParams {
        system: def.name.into(),
        message,
        schema: schema_text(def.schema),
    })?;
    let ball = SampleBall::new(built.check_center.clone(), built.check_radius, CHECK_SAMPLES, CHECK_SEED);
    let parity = classify_field_parity(&built.field, &ball, DEFAULT_PARITY_TOL)?.classification;
    let expected = expected_parity(def.name, &values);
    let entry = CatalogEntry {
        name: def.name.into(),
        dim: built.field.dim(),
        params: values.0,
        schema: def.schema,
        has_potential: built.field.has_potential(),
        field: built.field.with_parity(parity),
        declared_parity: parity,
        guard: def.guard,
        equation: def.equation,
        singular: def.singular,
        reference_y0: built.reference_y0,
        check_ball: ball,
    };
    register(entry, expected)
}

/// Parity each entry must have at the given parameters.
fn expected_parity(name: &str, v: &Values) -> Parity {
    match name {
        "quartic_quadratic" => Parity::Even,
        "shifted_cubic" | "cubic_tilt" if v.get("lambda") == 0.0 => Parity::Odd,
        "shifted_cubic" | "cubic_tilt" | "exp_minus" | "exp_plus" => Parity::Neither,
        _ => Parity::Odd,
    }
}

fn register(entry: CatalogEntry, expected: Parity) -> Result<CatalogEntry> {
    let fail = |message: String| Error::Registration {
        system: entry.name.clone(),
        message,
    };
    if entry.declared_parity != expected {
        return Err(fail(format!(
            "declared parity {expected} but the sampled field is {}",
            entry.declared_parity
        )));
    }
    if let Some(mismatch) = entry.field.potential_gradient_mismatch(&gradient_points(&entry.check_ball)) {
        let mismatch = mismatch?;
        if mismatch > GRADIENT_TOL {
            return Err(fail(format!("potential gradient differs from f by {mismatch:e} (relative)")));
        }
    }
    Ok(entry)
}

/// Seeded points of the check ball used by the gradient check.
pub fn gradient_points(ball: &SampleBall) -> Vec<Vec<f64>> {
    HaltonCube::new(ball.center.len(), ball.seed ^ 0x9e37_79b9)
        .take(GRADIENT_POINTS)
        .map(|u| ball.center.iter().zip(u).map(|(c, x)| c + ball.radius * x).collect())
        .collect()
}

/// `x'' = -g(x)` for a caller-supplied increasing `g` with `g(0) = 0`.
///
/// The potential is `\int_0^x g`, evaluated by composite Simpson. Monotonicity
/// and `g(0) = 0` are checked on `[-radius, radius]`; the parity is measured.
pub fn conservative_with<G>(name: &str, g: G, radius: f64) -> Result<CatalogEntry>
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let fail = |message: String| Error::Registration {
        system: name.into(),
        message,
    };
    if !(radius > 0.0) {
        return Err(Error::Invalid(format!("check radius must be positive, got {radius}")));
    }
    if g(0.0) != 0.0 {
        return Err(fail(format!("g(0) = {} but must vanish", g(0.0))));
    }
    let samples = 2001;
    let mut prev = g(-radius);
    for i in 1..samples {
        let x = -radius + 2.0 * radius * i as f64 / (samples - 1) as f64;
        let cur = g(x);
        if !(cur > prev) {
            return Err(fail(format!("g is not strictly increasing near x = {x}")));
        }
        prev = cur;
    }
    let g = Arc::new(g);
    let gp = g.clone();
    let field = VectorField::scalar(name.to_string(), move |x| -g(x)).with_potential(move |y| simpson(&*gp, y[0], 200));
    let ball = SampleBall::new(vec![0.0], radius, CHECK_SAMPLES, CHECK_SEED);
    let parity = classify_field_parity(&field, &ball, DEFAULT_PARITY_TOL)?.classification;
    let entry = CatalogEntry {
        name: name.into(),
        dim: 1,
        params: Params::new(),
        schema: NONE,
        has_potential: true,
        field: field.with_parity(parity),
        declared_parity: parity,
        guard: None,
        equation: "x'' = -g(x), g(0) = 0, g increasing",
        singular: false,
        reference_y0: vec![0.5 * radius],
        check_ball: ball,
    };
    register(entry, parity)
}

fn simpson(g: &dyn Fn(f64) -> f64, x: f64, panels: usize) -> f64 {
    let h = x / (2 * panels) as f64;
    let mut acc = g(0.0) + g(x);
    for i in 1..2 * panels {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
    }
    acc * h / 3.0
}

/// Every registered system at default parameters.
pub fn defaults() -> Result<Vec<CatalogEntry>> {
    names().into_iter().map(|n| lookup(n, &Params::new())).collect()
}

/// JSON listing of the registry at default parameters.
pub fn listing() -> Result<Vec<Listing>> {
    DEFINITIONS
        .iter()
        .map(|def| {
            let entry = lookup(def.name, &Params::new())?;
            Ok(Listing {
                name: def.name,
                dimension: entry.dim,
                parameters: def
                    .schema
                    .iter()
                    .map(|p| ListingParam {
                        name: p.name,
                        default: p.default.to_vec(),
                        range: p.bound.to_string(),
                        list: p.list,
                    })
                    .collect(),
                declared_parity: entry.declared_parity,
                potential: entry.has_potential,
                guard: def.guard,
                equation: def.equation,
            })
        })
        .collect()
}

pub fn listing_json() -> Result<String> {
    Ok(serde_json::to_string_pretty(&listing()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &[f64])]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect()
    }

    fn eval(name: &str, y: &[f64]) -> Vec<f64> {
        lookup(name, &Params::new()).unwrap().field.eval_vec(y).unwrap()
    }

    #[test]
    fn every_default_entry_registers() {
        let all = defaults().unwrap();
        assert_eq!(all.len(), 17);
        for e in &all {
            assert!(e.has_potential, "{}", e.name);
        }
    }

    #[test]
    fn nbody_examples() {
        let e = lookup("nbody", &params(&[("masses", &[1.0, 1.0]), ("G", &[1.0])])).unwrap();
        assert_eq!(e.dim, 6);
        assert_eq!(e.declared_parity, Parity::Odd);
        let f = e.field.eval_vec(&[0.5, 0.0, 0.0, -0.5, 0.0, 0.0]).unwrap();
        assert_eq!(f, vec![-1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let f = e.field.eval_vec(&[-0.5, 0.0, 0.0, 0.5, 0.0, 0.0]).unwrap();
        assert_eq!(&f[..3], &[1.0, 0.0, 0.0]);
        let err = e.field.eval_vec(&[0.0; 6]).unwrap_err();
        assert!(err.reason.contains("collision"));
    }

    #[test]
    fn nbody_momentum_balance() {
        let e = lookup("nbody", &params(&[("masses", &[1.0, 2.0, 3.5])])).unwrap();
        let y = [0.3, -0.2, 0.1, -0.4, 0.5, 0.0, 0.2, 0.1, -0.6];
        let f = e.field.eval_vec(&y).unwrap();
        for c in 0..3 {
            let total: f64 = (0..3).map(|k| e.field.weight(3 * k) * f[3 * k + c]).sum();
            assert!(total.abs() < 1e-14);
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(eval("manev", &[1.0, 0.0, 0.0]), vec![-1.2, 0.0, 0.0]);
        let newton = lookup("manev", &params(&[("epsilon", &[0.0])])).unwrap();
        assert_eq!(newton.field.eval_vec(&[1.0, 0.0, 0.0]).unwrap(), vec![-1.0, 0.0, 0.0]);
        assert_eq!(eval("anisotropic_kepler", &[1.0, 0.0]), vec![-2.0, 0.0]);
        let aniso = lookup("anisotropic_kepler", &Params::new()).unwrap();
        assert_eq!(aniso.field.potential(&[1.0, 0.0]), Some(-1.5));
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(eval("elastic_string", &[1.5]), vec![-0.5]);
        assert_eq!(eval("elastic_string", &[0.5]), vec![0.0]);
        assert_eq!(eval("elastic_string", &[-1.5]), vec![0.5]);
        assert_eq!(eval("elastic_string", &[0.0]), vec![0.0]);
        assert!((eval("forced_pendulum", &[PI / 2.0])[0] + 0.5).abs() < 1e-15);
        assert_eq!(eval("binary_satellite", &[0.0]), vec![0.0]);
        assert_eq!(eval("linear9", &[2.0]), vec![-18.0]);
    }

    #[test]
    fn declared_parities() {
        let p = |n: &str| lookup(n, &Params::new()).unwrap().declared_parity;
        for odd in [
            "duffing",
            "linear9",
            "binary_satellite",
            "pendulum",
            "cubic_pendulum",
            "elastic_string",
            "forced_pendulum",
            "magnetic_pendulum",
            "conservative",
        ] {
            assert_eq!(p(odd), Parity::Odd, "{odd}");
        }
        for neither in ["shifted_cubic", "cubic_tilt", "exp_minus", "exp_plus"] {
            assert_eq!(p(neither), Parity::Neither, "{neither}");
        }
        assert_eq!(p("quartic_quadratic"), Parity::Even);
        let zero = lookup("cubic_tilt", &params(&[("lambda", &[0.0])])).unwrap();
        assert_eq!(zero.declared_parity, Parity::Odd);
    }

    #[test]
    fn odd_entries_vanish_at_origin() {
        for e in defaults().unwrap() {
            if e.declared_parity == Parity::Odd && e.field.guard_violation(&vec![0.0; e.dim]).is_none() {
                assert!(e.field.eval_vec(&vec![0.0; e.dim]).unwrap().iter().all(|v| *v == 0.0), "{}", e.name);
            }
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(lookup("nope", &Params::new()), Err(Error::UnknownSystem(_))));
        let bad = lookup("magnetic_pendulum", &params(&[("h", &[0.5])]));
        match bad {
            Err(Error::InvalidParams { schema, .. }) => assert!(schema.contains("h")),
            other => panic!("{other:?}"),
        }
        assert!(lookup("magnetic_pendulum", &params(&[("h", &[1.0])])).is_err());
        assert!(lookup("pendulum", &params(&[("omega", &[-1.0])])).is_err());
        assert!(lookup("pendulum", &params(&[("omeg", &[1.0])])).is_err());
        assert!(lookup("nbody", &params(&[("masses", &[1.0])])).is_err());
        assert!(lookup("anisotropic_kepler", &params(&[("beta", &[1.0])])).is_err());
    }

    #[test]
    fn user_supplied_conservative() {
        let e = conservative_with("cubic_spring", |x| x + x * x * x, 2.0).unwrap();
        assert_eq!(e.declared_parity, Parity::Odd);
        assert!((e.field.potential(&[1.0]).unwrap() - 0.75).abs() < 1e-12);
        assert!(conservative_with("shifted", |x| x + 1.0, 1.0).is_err());
        assert!(conservative_with("bump", |x: f64| x.sin(), 3.0).is_err());
        let lopsided = conservative_with("lopsided", |x: f64| x.exp() - 1.0, 1.0).unwrap();
        assert_eq!(lopsided.declared_parity, Parity::Neither);
    }

    #[test]
    fn listing_has_every_entry() {
        let json = listing_json().unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 17);
        assert!(json.contains("aniso_b"));
        assert!(json.contains("sin phi"));
    }
}
