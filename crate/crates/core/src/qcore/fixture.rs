//! Plain-text dumps of states and matrices for test fixtures: one
//! `index,re,im` row per entry (row-major for matrices), full precision.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::register::Register;
use super::{DensityMatrix, PureState, C64};
use crate::error::{Error, Result};

const HEADER: &str = "index,re,im";

fn write_rows<'a>(values: impl Iterator<Item = &'a C64>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (i, z) in values.enumerate() {
        let _ = writeln!(out, "{i},{:.16e},{:.16e}", z.re, z.im);
    }
    out
}

fn read_rows(text: &str) -> Result<Vec<C64>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(Error::validation(format!("fixture must start with `{HEADER}`")));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let bad = || Error::validation(format!("malformed fixture row {}: `{line}`", n + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let index: usize = fields[0].parse().map_err(|_| bad())?;
        if index != n {
            return Err(bad());
        }
        let re: f64 = fields[1].parse().map_err(|_| bad())?;
        let im: f64 = fields[2].parse().map_err(|_| bad())?;
        out.push(C64::new(re, im));
    }
    Ok(out)
}

pub fn state_to_csv(psi: &PureState) -> String {
    write_rows(psi.amplitudes().iter())
}

pub fn state_from_csv(register: Register, text: &str) -> Result<PureState> {
    PureState::new(register, read_rows(text)?)
}

pub fn density_to_csv(rho: &DensityMatrix) -> String {
    write_rows(rho.matrix().transpose().iter())
}

pub fn density_from_csv(register: Register, text: &str) -> Result<DensityMatrix> {
    let values = read_rows(text)?;
    let d = register.dim();
    if values.len() != d * d {
        return Err(Error::validation(format!(
            "expected {} entries for {register}, found {}",
            d * d,
            values.len()
        )));
    }
    DensityMatrix::new(register, DMatrix::from_row_slice(d, d, &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn state_roundtrip_is_exact(re in prop::collection::vec(-1.0f64..1.0, 4), im in prop::collection::vec(-1.0f64..1.0, 4)) {
            prop_assume!(re.iter().chain(&im).any(|x| x.abs() > 1e-3));
            let r = Register::qubits(&["a", "b"]).unwrap();
            let amps = re.iter().zip(&im).map(|(&x, &y)| C64::new(x, y)).collect();
            let psi = PureState::normalized(r.clone(), amps).unwrap();
            let back = state_from_csv(r, &state_to_csv(&psi)).unwrap();
            prop_assert_eq!(back, psi);
        }
    }

    #[test]
    fn density_roundtrip_is_row_major() {
        let r = Register::qubits(&["a"]).unwrap();
        let rho = PureState::normalized(r.clone(), vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)])
            .unwrap()
            .density();
        let text = density_to_csv(&rho);
        assert!(text.lines().nth(2).unwrap().starts_with("1,"));
        // entry (0,1) = a b* = (2i)* / 5
        let im: f64 = text.lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        assert!((im + 0.4).abs() < 1e-15);
        assert_eq!(density_from_csv(r, &text).unwrap(), rho);
    }

    #[test]
    fn malformed_rows_rejected() {
        let r = Register::qubits(&["a"]).unwrap();
        assert!(state_from_csv(r.clone(), "index,re,im\n0,1,0\n2,0,0\n").is_err());
        assert!(state_from_csv(r, "i,re,im\n0,1,0\n1,0,0\n").is_err());
    }
}
