use std::io::Write;

/// Nine significant digits in scientific notation, identical on every platform.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
