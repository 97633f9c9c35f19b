//! Reading and writing matrices as full or upper-triangle CSV, and the JSON
//! analysis document.
//!
//! cargo run --example io_roundtrip

use pc_inconsistency::io::{parse_matrix_str, write_matrix, AnalysisDocument, AnalysisParameters, MatrixFormat};
use pc_inconsistency::kii_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_matrix_str("2, 5\n3\n", MatrixFormat::CsvUpper)?;
    print!("{}", write_matrix(&m, MatrixFormat::CsvFull));

    match parse_matrix_str("1,2\n0.5,1,7\n", MatrixFormat::CsvFull) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }

    let report = kii_matrix(&m)?;
    let doc = AnalysisDocument::new(
        &m,
        &report,
        AnalysisParameters {
            input: None,
            format: Some(MatrixFormat::CsvUpper),
            tolerance: report.tolerance,
        },
    );
    let json = doc.to_json();
    assert_eq!(AnalysisDocument::from_json(&json)?, doc);
    println!("{json}");
    Ok(())
}
