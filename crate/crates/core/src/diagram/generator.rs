use num_complex::Complex64 as C64;

use crate::error::DiagramError;

/// Dimension of a wire's Hilbert space. Always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(usize);

impl Dim {
    pub fn new(value: usize) -> Result<Self, DiagramError> {
        if value == 0 {
            Err(DiagramError::ZeroDim)
        } else {
            Ok(Dim(value))
        }
    }

    pub const fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Dim {
    type Error = DiagramError;
    fn try_from(value: usize) -> Result<Self, Self::Error> {
        Dim::new(value)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.0
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Converts a list of raw dimensions, rejecting zeros.
pub fn dims(values: &[usize]) -> Result<Vec<Dim>, DiagramError> {
    values.iter().map(|&v| Dim::new(v)).collect()
}

pub(crate) fn raw(dims: &[Dim]) -> Vec<usize> {
    dims.iter().map(|d| d.get()).collect()
}

/// Z box parameters `(a_1, ..., a_{L-1})`. The zeroth coefficient is
/// implicitly 1 and never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParamVec(Vec<C64>);

impl ParamVec {
    pub fn new(entries: Vec<C64>) -> Self {
        ParamVec(entries)
    }

    /// All-ones parameters of the given length: the phaseless spider.
    pub fn ones(len: usize) -> Self {
        ParamVec(vec![C64::new(1.0, 0.0); len])
    }

    pub fn from_phases(alphas: &[f64]) -> Self {
        ParamVec(alphas.iter().map(|&a| C64::cis(a)).collect())
    }

    /// `T_j`: a single 1 at position `j` (1-based), zeros elsewhere.
    pub fn unit(len: usize, j: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); len];
        if (1..=len).contains(&j) {
            v[j - 1] = C64::new(1.0, 0.0);
        }
        ParamVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    /// Coefficient `a_j` with `a_0 = 1`; indices past the end read as 0.
    pub fn coeff(&self, j: usize) -> C64 {
        if j == 0 {
            C64::new(1.0, 0.0)
        } else {
            self.0.get(j - 1).copied().unwrap_or(C64::new(0.0, 0.0))
        }
    }

    /// True when every stored entry is exactly 1.
    pub fn is_phaseless(&self) -> bool {
        self.0.iter().all(|&a| a == C64::new(1.0, 0.0))
    }
}

/// The node species of the calculus, with their parameters.
///
/// Ports are numbered inputs first, then outputs.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    /// Mixed-dimensional Z box. `params.len()` must equal the minimum leg
    /// dimension minus one.
    ZBox {
        inputs: Vec<Dim>,
        outputs: Vec<Dim>,
        params: ParamVec,
    },
    WNode { dim: Dim, fanout: usize },
    WNodeDagger { dim: Dim, fanin: usize },
    Hadamard { dim: Dim },
    /// Phaseless X spider.
    XSpider { dim: Dim, n_in: usize, n_out: usize },
    /// One input of dimension `m*n`, outputs `(m, n)`.
    Splitter { m: Dim, n: Dim },
    Merger { m: Dim, n: Dim },
    Swap { m: Dim, n: Dim },
    Identity { dim: Dim },
    /// The Bell state: no inputs, two outputs.
    Cap { dim: Dim },
    /// The Bell effect: two inputs, no outputs.
    Cup { dim: Dim },
    /// `|j> -> |label * j mod dim>`; the label is kept reduced.
    Multiplier { dim: Dim, label: usize },
    Scalar(C64),
}

impl GeneratorKind {
    pub fn z_box(inputs: Vec<Dim>, outputs: Vec<Dim>, params: ParamVec) -> Result<Self, DiagramError> {
        let kind = GeneratorKind::ZBox {
            inputs,
            outputs,
            params,
        };
        kind.check()?;
        Ok(kind)
    }

    /// Multiplier with the label reduced modulo `dim`.
    pub fn multiplier(dim: Dim, label: i64) -> Self {
        let label = label.rem_euclid(dim.get() as i64) as usize;
        GeneratorKind::Multiplier { dim, label }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GeneratorKind::ZBox { .. } => "z_box",
            GeneratorKind::WNode { .. } => "w",
            GeneratorKind::WNodeDagger { .. } => "w_dagger",
            GeneratorKind::Hadamard { .. } => "hadamard",
            GeneratorKind::XSpider { .. } => "x",
            GeneratorKind::Splitter { .. } => "splitter",
            GeneratorKind::Merger { .. } => "merger",
            GeneratorKind::Swap { .. } => "swap",
            GeneratorKind::Identity { .. } => "identity",
            GeneratorKind::Cap { .. } => "cap",
            GeneratorKind::Cup { .. } => "cup",
            GeneratorKind::Multiplier { .. } => "multiplier",
            GeneratorKind::Scalar(_) => "scalar",
        }
    }

    /// Ordering key used by canonical relabeling.
    pub(crate) fn tag_rank(&self) -> u8 {
        match self {
            GeneratorKind::ZBox { .. } => 0,
            GeneratorKind::XSpider { .. } => 1,
            GeneratorKind::WNode { .. } => 2,
            GeneratorKind::WNodeDagger { .. } => 3,
            GeneratorKind::Hadamard { .. } => 4,
            GeneratorKind::Splitter { .. } => 5,
            GeneratorKind::Merger { .. } => 6,
            GeneratorKind::Swap { .. } => 7,
            GeneratorKind::Identity { .. } => 8,
            GeneratorKind::Cap { .. } => 9,
            GeneratorKind::Cup { .. } => 10,
            GeneratorKind::Multiplier { .. } => 11,
            GeneratorKind::Scalar(_) => 12,
        }
    }

    pub fn input_dims(&self) -> Vec<Dim> {
        use GeneratorKind::*;
        match self {
            ZBox { inputs, .. } => inputs.clone(),
            WNode { dim, .. } => vec![*dim],
            WNodeDagger { dim, fanin } => vec![*dim; *fanin],
            Hadamard { dim } | Identity { dim } | Multiplier { dim, .. } => vec![*dim],
            XSpider { dim, n_in, .. } => vec![*dim; *n_in],
            Splitter { m, n } => vec![Dim(m.0 * n.0)],
            Merger { m, n } | Swap { m, n } => vec![*m, *n],
            Cap { .. } | Scalar(_) => vec![],
            Cup { dim } => vec![*dim, *dim],
        }
    }

    pub fn output_dims(&self) -> Vec<Dim> {
        use GeneratorKind::*;
        match self {
            ZBox { outputs, .. } => outputs.clone(),
            WNode { dim, fanout } => vec![*dim; *fanout],
            WNodeDagger { dim, .. } => vec![*dim],
            Hadamard { dim } | Identity { dim } | Multiplier { dim, .. } => vec![*dim],
            XSpider { dim, n_out, .. } => vec![*dim; *n_out],
            Splitter { m, n } => vec![*m, *n],
            Merger { m, n } => vec![Dim(m.0 * n.0)],
            Swap { m, n } => vec![*n, *m],
            Cap { dim } => vec![*dim, *dim],
            Cup { .. } | Scalar(_) => vec![],
        }
    }

    pub fn n_inputs(&self) -> usize {
        use GeneratorKind::*;
        match self {
            ZBox { inputs, .. } => inputs.len(),
            WNodeDagger { fanin, .. } => *fanin,
            XSpider { n_in, .. } => *n_in,
            Merger { .. } | Swap { .. } | Cup { .. } => 2,
            Cap { .. } | Scalar(_) => 0,
            _ => 1,
        }
    }

    pub fn n_outputs(&self) -> usize {
        use GeneratorKind::*;
        match self {
            ZBox { outputs, .. } => outputs.len(),
            WNode { fanout, .. } => *fanout,
            XSpider { n_out, .. } => *n_out,
            Splitter { .. } | Swap { .. } | Cap { .. } => 2,
            Cup { .. } | Scalar(_) => 0,
            _ => 1,
        }
    }

    pub fn n_ports(&self) -> usize {
        self.n_inputs() + self.n_outputs()
    }

    /// Dimensions of all ports, inputs first.
    pub fn port_dims(&self) -> Vec<Dim> {
        let mut v = self.input_dims();
        v.extend(self.output_dims());
        v
    }

    pub fn port_dim(&self, port: usize) -> Option<Dim> {
        let n_in = self.n_inputs();
        if port < n_in {
            self.input_dims().get(port).copied()
        } else {
            self.output_dims().get(port - n_in).copied()
        }
    }

    /// Checks the generator's internal invariants.
    pub fn check(&self) -> Result<(), DiagramError> {
        use GeneratorKind::*;
        match self {
            ZBox {
                inputs,
                outputs,
                params,
            } => {
                let min = inputs
                    .iter()
                    .chain(outputs)
                    .map(|d| d.get())
                    .min()
                    .ok_or_else(|| DiagramError::InvalidGenerator("z_box needs at least one leg".into()))?;
                if params.len() != min - 1 {
                    return Err(DiagramError::ParamLength {
                        kind: "z_box",
                        expected: min - 1,
                        found: params.len(),
                    });
                }
            }
            WNode { fanout: 0, .. } => {
                return Err(DiagramError::InvalidGenerator("w node needs at least one output".into()))
            }
            WNodeDagger { fanin: 0, .. } => {
                return Err(DiagramError::InvalidGenerator("w dagger needs at least one input".into()))
            }
            Multiplier { dim, label } if *label >= dim.get() => {
                return Err(DiagramError::InvalidGenerator(format!(
                    "multiplier label {label} not reduced modulo {dim}"
                )))
            }
            _ => {}
        }
        Ok(())
    }

    /// Puts the generator into its canonical stored form (multiplier labels
    /// reduced modulo the dimension).
    pub(crate) fn normalized(self) -> Self {
        match self {
            GeneratorKind::Multiplier { dim, label } => GeneratorKind::Multiplier {
                dim,
                label: label % dim.get(),
            },
            other => other,
        }
    }

    /// Minimum leg dimension of a Z box.
    pub fn z_min_dim(&self) -> Option<usize> {
        match self {
            GeneratorKind::ZBox { inputs, outputs, .. } => {
                inputs.iter().chain(outputs).map(|d| d.get()).min()
            }
            _ => None,
        }
    }
}
