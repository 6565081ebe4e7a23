fn main() -> Result<(), Box<dyn std::error::Error>> {
    use irsbeam::{afm_grid, ncpd_flat, Codebook, DEFAULT_SPACING_RATIO};
    use std::f64::consts::PI;

    // A 64-element flat beam covering directions [0, 1].
    let profile = ncpd_flat(0.0, 1.0, 64)?;
    let kd = 2.0 * PI * DEFAULT_SPACING_RATIO;
    for sample in afm_grid(&profile, kd, 9) {
        println!("beta {:+.1} -> {:.4}", sample.beta, sample.value);
    }

    // A hierarchical codebook: layer 1 has two half-range beams, the bottom
    // layer has 2n pencil beams.
    let book = Codebook::build(64)?;
    assert_eq!(book.num_layers(), 7);
    Ok(())
}
