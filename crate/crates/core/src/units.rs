//! Unit conversions.
//!
//! Configuration files carry powers in dBm and distances in meters; all solver
//! arithmetic is done on linear milliwatts and, inside the path-loss formula,
//! kilometers.

/// dBm to linear milliwatts.
#[inline]
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Linear milliwatts to dBm.
#[inline]
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Ratio expressed in dB to a linear factor.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear factor to dB.
#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        assert_eq!(dbm_to_mw(0.0), 1.0);
        assert_eq!(dbm_to_mw(30.0), 1000.0);
        assert!((dbm_to_mw(-10.0) - 0.1).abs() < 1e-15);
        assert!((mw_to_dbm(1000.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_survives_twelve_digits() {
        // Spot grid; the proptest version lives in tests/properties.rs.
        for exp in -9..=9 {
            for mant in [1.0, 2.5, 7.137] {
                let x = mant * 10f64.powi(exp);
                let back = dbm_to_mw(mw_to_dbm(x));
                assert!(
                    (back - x).abs() <= 1e-12 * x,
                    "round trip drifted: {x} -> {back}"
                );
            }
        }
    }
}
