use pencil4::expr::ExprError;
use pencil4::Error;

/// Process exit codes. Kept in sync with [`EXIT_CODES_HELP`].
pub mod code {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const EXPR_PARSE: i32 = 4;
    pub const EVAL_DOMAIN: i32 = 5;
    pub const REGULARITY: i32 = 6;
    pub const FRAME: i32 = 7;
    pub const UNIT_SPEED: i32 = 8;
    pub const FAMILY: i32 = 9;
    pub const ORACLE: i32 = 10;
    pub const IO: i32 = 11;
    pub const PROJECTION: i32 = 12;
}

pub const EXIT_CODES_HELP: &str = "\
Exit codes:
   0  success
   1  verify found a quantity outside tolerance, or flat-design found the surface not flat
   2  command-line usage error
   3  configuration file invalid
   4  expression failed to parse
   5  expression evaluated outside its domain, or a range hits a pole
   6  surface is not regular (a^2 + b^2 = 0 or A'^2 + B'^2 = 0)
   7  frame cannot be built for the curve
   8  curve is not unit speed
   9  curve violates the constraint of the requested family
  10  finite-difference oracle failed (rank deficiency or step leaves the domain)
  11  file could not be read or written
  12  projection invalid for the exported points";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("projection: {0}")]
    Projection(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Core(Error::Expr(e))
    }
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => code::CONFIG,
            CliError::Projection(_) => code::PROJECTION,
            CliError::Io { .. } => code::IO,
            CliError::Core(e) => match e {
                Error::Expr(ExprError::EvalDomain { .. }) | Error::Domain(_) => code::EVAL_DOMAIN,
                Error::Expr(_) => code::EXPR_PARSE,
                Error::NotUnitSpeed { .. } => code::UNIT_SPEED,
                Error::InvalidCurve(_) => code::CONFIG,
                Error::DegenerateFrame { .. } | Error::UnsupportedCompletion(_) => code::FRAME,
                Error::RegularityViolation { .. } => code::REGULARITY,
                Error::SingularProfileSystem(_) | Error::ConstraintViolation { .. } => code::FAMILY,
                Error::RankDeficiency { .. } | Error::StepUnderflow { .. } => code::ORACLE,
            },
        }
    }
}
