//! Shared fixtures for the benchmarks.

use qcode_core::field::{ExtField, FieldElement};
use qcode_core::quadform::{FormAnalysis, Preset};

/// Tr(u x^2) over GF(p^m) with alpha = 1.
pub fn square_form(p: u64, m: usize) -> (FormAnalysis, FieldElement) {
    let field = ExtField::new(p, m, None).expect("field");
    let analysis = Preset::parse(&field, "square:u=1")
        .and_then(|preset| preset.build(&field))
        .expect("preset")
        .analyze();
    let alpha = field.one();
    (analysis, alpha)
}

/// A fixed pseudo-random walk of field elements.
pub fn sample_elements(field: &ExtField, count: usize) -> Vec<FieldElement> {
    let q = field.q();
    (0..count as u64)
        .map(|i| field.decode_unchecked((i * 0x9E37_79B9 + 7) % q))
        .collect()
}
