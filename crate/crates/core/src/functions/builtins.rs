use thiserror::Error;

use crate::labeling::MapFn;

/// Fixed point of `cos` on `[0,1]`.
pub const DOTTIE: f64 = 0.739_085_133_215_160_6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuiltinError {
    #[error("unknown builtin `{0}` (known: {known})", known = CATALOG.join(", "))]
    UnknownBuiltin(String),
    #[error("builtin `{name}` is defined for n = {expected}, not {found}")]
    Dimension {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("parameter c = {0:?} must have n components in [0, 1]")]
    BadParameter(Vec<f64>),
}

pub const CATALOG: &[&str] = &["reflect1d", "dottie", "rot90", "const-c", "avg-c", "squeeze"];

/// Looks up a catalog map.
///
/// `n` may be omitted for the fixed-dimension maps. `const-c` and `avg-c`
/// take their center `c` from `c`, defaulting to ½ on every axis; their
/// dimension is `c.len()` or `n`.
pub fn builtin(name: &str, n: Option<usize>, c: Option<&[f64]>) -> Result<MapFn, BuiltinError> {
    let fixed = |name: &'static str, dim: usize| match n {
        Some(found) if found != dim => Err(BuiltinError::Dimension {
            name,
            expected: dim,
            found,
        }),
        _ => Ok(dim),
    };
    let center = || -> Result<Vec<f64>, BuiltinError> {
        let c = match (c, n) {
            (Some(c), _) => c.to_vec(),
            (None, Some(n)) => vec![0.5; n],
            (None, None) => vec![0.5],
        };
        let ok = !c.is_empty()
            && n.is_none_or(|n| n == c.len())
            && c.iter().all(|v| (0.0..=1.0).contains(v));
        if ok {
            Ok(c)
        } else {
            Err(BuiltinError::BadParameter(c))
        }
    };
    match name {
        "reflect1d" => {
            fixed("reflect1d", 1)?;
            Ok(MapFn::new(name, 1, |x| vec![1.0 - x[0]])
                .with_lipschitz(1.0)
                .with_fixed_points(vec![vec![0.5]]))
        }
        "dottie" => {
            fixed("dottie", 1)?;
            Ok(MapFn::new(name, 1, |x| vec![x[0].cos()])
                .with_lipschitz(1f64.sin())
                .with_fixed_points(vec![vec![DOTTIE]]))
        }
        "rot90" => {
            fixed("rot90", 2)?;
            Ok(MapFn::new(name, 2, |x| vec![1.0 - x[1], x[0]])
                .with_lipschitz(1.0)
                .with_fixed_points(vec![vec![0.5, 0.5]]))
        }
        "squeeze" => {
            fixed("squeeze", 1)?;
            Ok(MapFn::new(name, 1, |x| vec![x[0] * x[0]])
                .with_lipschitz(2.0)
                .with_fixed_points(vec![vec![0.0], vec![1.0]]))
        }
        "const-c" => {
            let c = center()?;
            let out = c.clone();
            Ok(MapFn::new(name, c.len(), move |_| out.clone())
                .with_lipschitz(0.0)
                .with_fixed_points(vec![c]))
        }
        "avg-c" => {
            let c = center()?;
            let center = c.clone();
            Ok(MapFn::new(name, c.len(), move |x| {
                x.iter().zip(&center).map(|(a, b)| (a + b) / 2.0).collect()
            })
            .with_lipschitz(0.5)
            .with_fixed_points(vec![c]))
        }
        _ => Err(BuiltinError::UnknownBuiltin(name.to_string())),
    }
}
