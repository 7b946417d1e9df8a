use thiserror::Error;

/// Exit code 2: the input could not be read or does not describe a valid object shape.
pub const EXIT_INPUT: i32 = 2;
/// Exit code 1: the input is well formed but a mathematical check failed.
pub const EXIT_FAIL: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] rbsys::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        use rbsys::Error as E;
        match self {
            CliError::Core(
                E::NotAssociative(_)
                | E::NotRotaBaxterSystem(_)
                | E::NotBimodule(_)
                | E::NotRotaBaxterOperator(_)
                | E::NotCocycle(_)
                | E::NotExtension(_)
                | E::NotIsomorphism(_)
                | E::ClaimFailed(_),
            ) => EXIT_FAIL,
            _ => EXIT_INPUT,
        }
    }

    /// The witness carried by a mathematical failure.
    pub fn violation(&self) -> Option<&rbsys::verdict::Violation> {
        use rbsys::Error as E;
        match self {
            CliError::Core(
                E::NotAssociative(v)
                | E::NotRotaBaxterSystem(v)
                | E::NotBimodule(v)
                | E::NotRotaBaxterOperator(v)
                | E::NotCocycle(v)
                | E::NotExtension(v)
                | E::NotIsomorphism(v)
                | E::ClaimFailed(v),
            ) => Some(v),
            _ => None,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Prefixes input errors with the file they came from.
pub trait InFile<T> {
    fn in_file(self, path: &std::path::Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> InFile<T> for Result<T, E> {
    fn in_file(self, path: &std::path::Path) -> CliResult<T> {
        self.map_err(|e| {
            let e = e.into();
            match e {
                CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
                CliError::Core(ref inner) if e.exit_code() == EXIT_INPUT => {
                    CliError::Input(format!("{}: {inner}", path.display()))
                }
                other => other,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbsys::verdict::{Law, Violation};

    #[test]
    fn exit_codes_split_input_from_mathematics() {
        let v = Violation { law: Law::Associativity, indices: vec![0, 0, 0], lhs: vec![], rhs: vec![] };
        assert_eq!(CliError::from(rbsys::Error::NotAssociative(v)).exit_code(), EXIT_FAIL);
        assert_eq!(CliError::from(rbsys::Error::CapExceeded { needed: 9, cap: 1 }).exit_code(), EXIT_INPUT);
        assert_eq!(CliError::from(rbsys::Error::Precondition("x".into())).exit_code(), EXIT_INPUT);
        assert_eq!(CliError::input("x").exit_code(), EXIT_INPUT);
    }

    #[test]
    fn file_context_is_prefixed_to_input_errors() {
        let r: Result<(), CliError> = Err(CliError::input("bad shape"));
        let e = r.in_file(std::path::Path::new("a.json")).unwrap_err();
        assert_eq!(e.to_string(), "a.json: bad shape");
    }
}
