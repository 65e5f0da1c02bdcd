//! A small relative-error table of the expansion against the oracle, written
//! as CSV to stdout.

use legendre_uniform::errtable::{build_table, write_csv, ErrTableSpec, ExpansionForm};
use legendre_uniform::oracle::OracleConfig;

fn main() -> legendre_uniform::Result<()> {
    let spec = ErrTableSpec {
        theta: 0.1,
        xi: 0.0,
        n: 4,
        lambda_min: 1.0,
        lambda_max: 8.0,
        steps: 4,
        orders: vec![0, 1, 2, 3],
        form: ExpansionForm::Legendre,
    };
    let rows = build_table(&spec, &OracleConfig::default())?;
    write_csv(&rows, std::io::stdout().lock()).expect("stdout");
    Ok(())
}
