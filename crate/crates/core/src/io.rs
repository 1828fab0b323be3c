//! State file format: `{"matrix": [[[re, im], ...], ...]}`, four rows of four
//! complex entries, row-major, basis |00>, |01>, |10>, |11>.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::StateError;
use crate::qmat::{c, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub matrix: [[[f64; 2]; 4]; 4],
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("malformed state JSON at `{path}`: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Invalid(#[from] StateError),
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let e = rho.entries();
        Self {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| [e[i][j].re, e[i][j].im])),
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix, StateError> {
        DensityMatrix::from_elements(std::array::from_fn(|i| {
            std::array::from_fn(|j| c(self.matrix[i][j][0], self.matrix[i][j][1]))
        }))
    }
}

pub fn parse_state(json: &str) -> Result<DensityMatrix, StateFileError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let file: StateFile = serde_path_to_error::deserialize(de).map_err(|e| StateFileError::Json {
        path: e.path().to_string(),
        source: e.into_inner(),
    })?;
    Ok(file.to_state()?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state serializes")
}

/// Serde adapter storing a complex number as `[re, im]`.
pub mod complex_pair {
    use crate::qmat::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::Bell;

    #[test]
    fn bell_file_round_trip() {
        let rho = DensityMatrix::bell(Bell::PsiMinus);
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn malformed_and_invalid_inputs() {
        match parse_state("{\"matrix\": [[1,2]]}") {
            Err(StateFileError::Json { path, .. }) => assert_eq!(path, "matrix[0][0]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_state("{}"), Err(StateFileError::Json { .. })));
        let zero = r#"{"matrix": [[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(
            parse_state(zero),
            Err(StateFileError::Invalid(StateError::TraceNotOne { .. }))
        ));
    }
}
