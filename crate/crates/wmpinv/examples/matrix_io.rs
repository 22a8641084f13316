//! Matrix file formats: canonical JSON and the CSV convenience importer.

use wmpinv::io::{matrix_to_csv, matrix_to_json, parse_matrix_csv, parse_matrix_json};
use wmpinv::{CMatrix, Complex64};

fn main() {
    let m = CMatrix::from_rows(
        2,
        2,
        vec![
            Complex64::new(1.5, 0.0),
            Complex64::new(2.0, 3.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-2.5, -0.5),
        ],
    );

    let json = matrix_to_json(&m);
    println!("JSON form:\n{json}\n");
    assert_eq!(parse_matrix_json(&json).unwrap(), m);

    let csv = matrix_to_csv(&m);
    println!("CSV form:\n{csv}");
    assert_eq!(parse_matrix_csv(&csv).unwrap(), m);

    // parse errors carry line numbers
    match parse_matrix_csv("1,2\n3,oops\n") {
        Err(e) => println!("parse failure: {e}"),
        Ok(_) => unreachable!(),
    }
}
