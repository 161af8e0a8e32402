//! Named problem generators with `key=value` parameters.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::problems::{
    burgers_1d, cubic_reaction_problem, mixed_quadratic_cubic_problem, random_polynomial_problem, scalar_power_problem,
    ProblemSpec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegistryError {
    #[error("unknown problem {name:?}; valid problems: {}", valid.join(", "))]
    UnknownProblem { name: String, valid: Vec<&'static str> },
    #[error("bad parameter: {0}")]
    BadParam(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Real,
    IntList,
}

impl ParamKind {
    fn label(self) -> &'static str {
        match self {
            ParamKind::Int => "integer",
            ParamKind::Real => "real",
            ParamKind::IntList => "comma-separated integers",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSchema {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct Generator {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSchema],
}

const fn param(name: &'static str, kind: ParamKind, default: &'static str) -> ParamSchema {
    ParamSchema { name, kind, default }
}

/// Sorted by name.
pub const GENERATORS: &[Generator] = &[
    Generator {
        name: "burgers-1d",
        summary: "steady viscous Burgers nu*u'' = u*u' on (0,1), Dirichlet ends (degree 2)",
        params: &[
            param("n", ParamKind::Int, "16"),
            param("nu", ParamKind::Real, "0.1"),
            param("ua", ParamKind::Real, "1"),
            param("ub", ParamKind::Real, "0"),
        ],
    },
    Generator {
        name: "cubic-reaction",
        summary: "steady Allen-Cahn u'' + lam*(u - u^3) = 0, u(0) = -1, u(1) = 1 (degree 3)",
        params: &[param("n", ParamKind::Int, "16"), param("lam", ParamKind::Real, "4")],
    },
    Generator {
        name: "mixed",
        summary: "random quadratic + cubic system with known root, quadratic part scaled by alpha",
        params: &[
            param("n", ParamKind::Int, "20"),
            param("alpha", ParamKind::Real, "1"),
            param("seed", ParamKind::Int, "42"),
        ],
    },
    Generator {
        name: "random",
        summary: "sparse random system with known root and the given term degrees",
        params: &[
            param("n", ParamKind::Int, "20"),
            param("degrees", ParamKind::IntList, "2,3"),
            param("density", ParamKind::Real, "0.1"),
            param("seed", ParamKind::Int, "42"),
        ],
    },
    Generator {
        name: "scalar-power",
        summary: "u^p - target = 0 (degree p in 2..=8)",
        params: &[param("p", ParamKind::Int, "2"), param("target", ParamKind::Real, "4")],
    },
];

pub fn generator(name: &str) -> Result<&'static Generator, RegistryError> {
    GENERATORS
        .iter()
        .find(|g| g.name == name)
        .ok_or_else(|| RegistryError::UnknownProblem {
            name: name.to_string(),
            valid: GENERATORS.iter().map(|g| g.name).collect(),
        })
}

/// Text listing of every generator and its parameters.
pub fn list_text() -> String {
    let mut out = String::new();
    for g in GENERATORS {
        out.push_str(&format!("{}\n    {}\n", g.name, g.summary));
        for p in g.params {
            out.push_str(&format!(
                "    {}=<{}> (default {})\n",
                p.name,
                p.kind.label(),
                p.default
            ));
        }
    }
    out
}

/// Splits `key=value` arguments.
pub fn parse_assignments(args: &[String]) -> Result<Vec<(String, String)>, RegistryError> {
    args.iter()
        .map(|a| {
            a.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .filter(|(k, _)| !k.is_empty())
                .ok_or_else(|| RegistryError::BadParam(format!("expected key=value, got {a:?}")))
        })
        .collect()
}

struct Params<'a> {
    generator: &'a Generator,
    values: BTreeMap<&'static str, String>,
}

impl Params<'_> {
    fn raw(&self, name: &str) -> &str {
        &self.values[name]
    }

    fn int(&self, name: &str) -> Result<i64, RegistryError> {
        let v = self.raw(name);
        v.parse()
            .map_err(|_| RegistryError::BadParam(format!("{name}={v} is not an integer")))
    }

    fn usize(&self, name: &str) -> Result<usize, RegistryError> {
        let v = self.int(name)?;
        usize::try_from(v).map_err(|_| RegistryError::BadParam(format!("{name}={v} must be non-negative")))
    }

    fn u64(&self, name: &str) -> Result<u64, RegistryError> {
        let v = self.int(name)?;
        u64::try_from(v).map_err(|_| RegistryError::BadParam(format!("{name}={v} must be non-negative")))
    }

    fn real(&self, name: &str) -> Result<f64, RegistryError> {
        let v = self.raw(name);
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| RegistryError::BadParam(format!("{name}={v} is not a finite real")))
    }

    fn int_list(&self, name: &str) -> Result<Vec<usize>, RegistryError> {
        let v = self.raw(name);
        v.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| RegistryError::BadParam(format!("{name}={v} is not a list of integers")))
    }
}

/// Instantiates a named generator. `seed`, when given, overrides a `seed`
/// parameter for generators that take one.
pub fn build_problem(
    name: &str,
    assignments: &[(String, String)],
    seed: Option<u64>,
) -> Result<ProblemSpec, RegistryError> {
    let generator = generator(name)?;
    let mut values: BTreeMap<&'static str, String> = generator
        .params
        .iter()
        .map(|p| (p.name, p.default.to_string()))
        .collect();
    for (k, v) in assignments {
        let Some(schema) = generator.params.iter().find(|p| p.name == k) else {
            let known: Vec<&str> = generator.params.iter().map(|p| p.name).collect();
            return Err(RegistryError::BadParam(format!(
                "{name} has no parameter {k:?}; expected one of {}",
                known.join(", ")
            )));
        };
        values.insert(schema.name, v.clone());
    }
    if let (Some(seed), Some(slot)) = (seed, values.get_mut("seed")) {
        *slot = seed.to_string();
    }
    let p = Params { generator, values };

    let built = match p.generator.name {
        "scalar-power" => scalar_power_problem(p.usize("p")?, p.real("target")?),
        "random" => random_polynomial_problem(
            p.usize("n")?,
            &p.int_list("degrees")?,
            p.real("density")?,
            p.u64("seed")?,
        ),
        "burgers-1d" => burgers_1d(p.usize("n")?, p.real("nu")?, p.real("ua")?, p.real("ub")?),
        "cubic-reaction" => cubic_reaction_problem(p.usize("n")?, p.real("lam")?),
        "mixed" => mixed_quadratic_cubic_problem(p.usize("n")?, p.real("alpha")?, p.u64("seed")?),
        other => unreachable!("generator {other} has no constructor"),
    };
    built.map_err(|e| RegistryError::BadParam(format!("{name}: {e}")))
}
