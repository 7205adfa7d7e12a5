//! Bean critical-state sheet currents in a thin strip.
//!
//! A strip with sheet critical current `Jc = d·jc` carries at most
//! `Ic = 2w·Jc`. On a virgin ramp to `I` the flux-free core shrinks to
//! `|x| < b = w√(1 − I²/Ic²)`; outside it the current is saturated at `Jc`.
//! Ramping back down superposes a reversed profile with doubled `Jc`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sheet::{field_from_profile, on_axis_meissner, SheetCurrentProfile};

/// Sheet current of the virgin critical state carrying `current`.
pub(crate) fn bean_sheet_current(x: f64, w: f64, jc_sheet: f64, current: f64) -> f64 {
    let i = current / (2.0 * w * jc_sheet);
    if i <= 0.0 || x.abs() > w {
        return 0.0;
    }
    if i >= 1.0 {
        return jc_sheet;
    }
    let b2 = w * w * (1.0 - i * i);
    let core = b2 - x * x;
    if core <= 0.0 {
        return jc_sheet;
    }
    // arctan √((w² − b²)/(b² − x²)) with w² − b² = w²i²
    2.0 * jc_sheet / PI * (w * i).atan2(core.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeanStripState {
    half_width: f64,
    thickness: f64,
    jc: f64,
    history: Vec<f64>,
}

impl BeanStripState {
    pub fn new(half_width: f64, thickness: f64, jc: f64) -> Result<Self> {
        if !(half_width > 0.0 && thickness > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "Bean strip needs w > 0 and d > 0, got w = {half_width}, d = {thickness}"
            )));
        }
        if !(jc > 0.0 && jc.is_finite()) {
            return Err(Error::InvalidArgument(format!("jc must be positive, got {jc}")));
        }
        Ok(Self {
            half_width,
            thickness,
            jc,
            history: Vec::new(),
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn jc(&self) -> f64 {
        self.jc
    }

    /// Jc = d·jc in A/m.
    pub fn sheet_critical_current(&self) -> f64 {
        self.thickness * self.jc
    }

    /// Ic = 2w·Jc in A.
    pub fn critical_current(&self) -> f64 {
        2.0 * self.half_width * self.sheet_critical_current()
    }

    /// Half-width b of the flux-free core at current `i`.
    pub fn penetration_boundary(&self, current: f64) -> Result<f64> {
        let ic = self.critical_current();
        self.check_current(current)?;
        let r = current / ic;
        Ok(self.half_width * (1.0 - r * r).max(0.0).sqrt())
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    fn check_current(&self, current: f64) -> Result<()> {
        let ic = self.critical_current();
        if !current.is_finite() || current.abs() > ic * (1.0 + 1e-12) {
            return Err(Error::CurrentExceedsCritical { current, critical: ic });
        }
        Ok(())
    }

    /// Appends a current setpoint. Only one ramp up from zero followed by
    /// one ramp down is supported.
    pub fn apply(&mut self, current: f64) -> Result<()> {
        self.check_current(current)?;
        if current < 0.0 {
            return Err(Error::NonMonotonicHistory);
        }
        let mut seq = self.history.clone();
        seq.push(current);
        let peak = seq.iter().copied().fold(0.0, f64::max);
        let k = seq.iter().position(|&v| v == peak).unwrap_or(0);
        let rising = seq[..=k].windows(2).all(|p| p[1] >= p[0]);
        let falling = seq[k..].windows(2).all(|p| p[1] <= p[0]);
        if !(rising && falling) {
            return Err(Error::NonMonotonicHistory);
        }
        self.history = seq;
        Ok(())
    }

    /// Largest current reached so far and the present current.
    fn peak_and_present(&self) -> (f64, f64) {
        let peak = self.history.iter().copied().fold(0.0, f64::max);
        (peak, self.history.last().copied().unwrap_or(0.0))
    }

    /// Profile for the present point of the recorded history.
    pub fn current_profile(&self) -> Result<SheetCurrentProfile> {
        let (peak, now) = self.peak_and_present();
        self.cycle_profile(peak, now)
    }

    /// Virgin-state profile at `current`. Rejected if the recorded history
    /// already went down.
    pub fn virgin_profile(&self, current: f64) -> Result<SheetCurrentProfile> {
        self.check_current(current)?;
        if current < 0.0 {
            return Err(Error::InvalidArgument(format!("virgin profile needs I ≥ 0, got {current}")));
        }
        if self.history.windows(2).any(|p| p[1] < p[0]) {
            return Err(Error::NonMonotonicHistory);
        }
        Ok(SheetCurrentProfile::bean_virgin(self.half_width, self.sheet_critical_current(), current))
    }

    /// Descending branch after a single ramp to `peak`, now at `current`.
    pub fn cycle_profile(&self, peak: f64, current: f64) -> Result<SheetCurrentProfile> {
        let ic = self.critical_current();
        let ordered = 0.0 <= current && current <= peak && peak <= ic * (1.0 + 1e-12);
        if !ordered {
            return Err(Error::OrderingViolation {
                current,
                max: peak,
                critical: ic,
            });
        }
        Ok(SheetCurrentProfile::bean_cycle(self.half_width, self.sheet_critical_current(), peak, current))
    }

    /// |B| on the axis after ramping 0 → `peak` → 0, relative to |B| at the peak.
    pub fn remnant_field_ratio(&self, peak: f64, z: f64) -> Result<f64> {
        if !(z > 0.0) {
            return Err(Error::InvalidArgument(format!("height must be positive, got {z}")));
        }
        let remnant = field_from_profile(&self.cycle_profile(peak, 0.0)?, 0.0, z)?;
        let at_peak = field_from_profile(&self.virgin_profile(peak)?, 0.0, z)?;
        Ok(remnant.magnitude() / at_peak.magnitude())
    }

    /// On-axis Bean field compared with the Meissner strip at the same current,
    /// |B_bean − B_meissner| / B_meissner.
    pub fn linearity_defect(&self, current: f64, z: f64) -> Result<f64> {
        if !(current > 0.0) || !(z > 0.0) {
            return Err(Error::InvalidArgument("linearity defect needs I > 0 and z > 0".into()));
        }
        let bean = field_from_profile(&self.virgin_profile(current)?, 0.0, z)?.b.x;
        let meissner = on_axis_meissner(current, self.half_width, z);
        Ok((bean - meissner).abs() / meissner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheet::{on_axis_normal, ProfileKind};
    use proptest::prelude::*;

    fn strip() -> BeanStripState {
        // Jc = 1 A/m, w = 1 m, Ic = 2 A
        BeanStripState::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn critical_numbers() {
        let s = BeanStripState::new(5e-6, 3e-7, 7.2e11).unwrap();
        assert!((s.sheet_critical_current() - 2.16e5).abs() < 1e-6);
        assert!((s.critical_current() - 2.16).abs() < 1e-12);
        assert!(BeanStripState::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn half_critical_profile() {
        let s = strip();
        let p = s.virgin_profile(1.0).unwrap();
        let b = s.penetration_boundary(1.0).unwrap();
        assert!((b - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((p.evaluate(0.0) - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(p.evaluate(0.9), 1.0);
        // continuity at the flux front
        assert!((p.evaluate(b * (1.0 - 1e-9)) - 1.0).abs() < 1e-3);
        assert_eq!(p.kind(), ProfileKind::BeanVirgin);
    }

    #[test]
    fn full_penetration_and_zero() {
        let s = strip();
        let p = s.virgin_profile(2.0).unwrap();
        for x in [-0.99, -0.3, 0.0, 0.5] {
            assert_eq!(p.evaluate(x), 1.0);
        }
        let p0 = s.virgin_profile(0.0).unwrap();
        assert_eq!(p0.evaluate(0.2), 0.0);
        assert!(matches!(s.virgin_profile(2.5), Err(Error::CurrentExceedsCritical { .. })));
    }

    #[test]
    fn remnant_profile_shape() {
        let s = strip();
        let peak = 0.85 * 2.0;
        let p = s.cycle_profile(peak, 0.0).unwrap();
        assert_eq!(p.kind(), ProfileKind::BeanRemnant);
        assert!((p.evaluate(0.999) + 1.0).abs() < 1e-12);
        let centre = 2.0 / PI * (0.85f64.asin() - 2.0 * 0.425f64.asin());
        assert!((p.evaluate(0.0) - centre).abs() < 1e-14);
        assert!((centre - 0.0886).abs() < 1e-3);
        assert!(p.integrated_current().unwrap().abs() < 1e-8);
    }

    #[test]
    fn cycle_at_peak_is_virgin() {
        let s = strip();
        let a = s.cycle_profile(1.3, 1.3).unwrap();
        let b = s.virgin_profile(1.3).unwrap();
        for k in 0..=20 {
            let x = -1.0 + 0.1 * k as f64;
            assert_eq!(a.evaluate(x), b.evaluate(x));
        }
    }

    #[test]
    fn ordering_and_history() {
        let mut s = strip();
        assert!(matches!(s.cycle_profile(1.0, 1.2), Err(Error::OrderingViolation { .. })));
        assert!(matches!(s.cycle_profile(2.5, 0.0), Err(Error::OrderingViolation { .. })));
        s.apply(0.5).unwrap();
        s.apply(1.5).unwrap();
        assert!(s.virgin_profile(1.5).is_ok());
        s.apply(0.3).unwrap();
        assert!(matches!(s.virgin_profile(0.3), Err(Error::NonMonotonicHistory)));
        assert!(matches!(s.apply(0.8), Err(Error::NonMonotonicHistory)));
        let p = s.current_profile().unwrap();
        assert!((p.integrated_current().unwrap() - 0.3).abs() < 1e-8);
    }

    #[test]
    fn saturated_strip_matches_uniform_field() {
        let s = strip();
        let d = field_from_profile(&s.virgin_profile(2.0).unwrap(), 0.0, 1.0).unwrap().b.x;
        let n = on_axis_normal(2.0, 1.0, 1.0);
        assert!((d - n).abs() / n < 1e-6);
    }

    #[test]
    fn small_current_is_nearly_linear() {
        let s = strip();
        let d = s.linearity_defect(0.2, 1.0).unwrap();
        assert!(d < 0.03, "{d}");
        let tiny = s.linearity_defect(2e-3, 1.0).unwrap();
        assert!(tiny < 0.05, "{tiny}");
    }

    #[test]
    fn field_is_nonlinear_in_current() {
        let s = strip();
        let b1 = field_from_profile(&s.virgin_profile(0.8).unwrap(), 0.0, 0.5).unwrap().b.x;
        let b2 = field_from_profile(&s.virgin_profile(1.6).unwrap(), 0.0, 0.5).unwrap().b.x;
        assert!((b2 / (2.0 * b1) - 1.0).abs() > 0.01);
    }

    proptest! {
        #[test]
        fn virgin_conserves_current_and_is_bounded(r in 0.0f64..=1.0) {
            let s = strip();
            let i = 2.0 * r;
            let p = s.virgin_profile(i).unwrap();
            let total = p.integrated_current().unwrap();
            prop_assert!((total - i).abs() <= 1e-6 * i.max(1e-300) || i == 0.0);
            let mut last = -1.0;
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let j = p.evaluate(x);
                prop_assert!(j <= 1.0 + 1e-15);
                prop_assert!(j >= last - 1e-15);
                last = j;
            }
        }

        #[test]
        fn cycle_conserves_current_and_is_bounded(r in 0.01f64..=1.0, f in 0.0f64..=1.0) {
            let s = strip();
            let peak = 2.0 * r;
            let i = peak * f;
            let p = s.cycle_profile(peak, i).unwrap();
            let total = p.integrated_current().unwrap();
            prop_assert!((total - i).abs() <= 1e-6 * peak);
            for k in -100..=100 {
                prop_assert!(p.evaluate(k as f64 / 100.0).abs() <= 1.0 + 1e-15);
            }
        }
    }
}
