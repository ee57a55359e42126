use std::io;

use bayescfar::CfarError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CfarError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// 0 success, 2 usage or configuration, 3 numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn io_error(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(usage("x").exit_code(), 2);
        assert_eq!(
            CliError::from(CfarError::NoRoot { iterations: 3 }).exit_code(),
            3
        );
        let conv = CfarError::Convergence {
            estimate: 1.0,
            error: 1.0,
            subdivisions: 200,
        };
        assert_eq!(CliError::from(conv).exit_code(), 3);
        assert_eq!(CliError::from(CfarError::Domain("n".into())).exit_code(), 2);
        assert_eq!(
            CliError::from(CfarError::DegenerateWindow { n: 4, k: 2 }).exit_code(),
            2
        );
        let e = io_error("reading x")(io::Error::other("gone"));
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.to_string(), "reading x: gone");
    }
}
