use detkit_codec::GtBox;

/// Ground-truth filter by pedestrian height and visible-area ratio.
///
/// The four standard subsets (heights >= 50 px throughout):
/// Reasonable vis in [0.65, 1], Bare (0.9, 1], Partial (0.65, 0.9],
/// Heavy [0.2, 0.65]. Boxes outside the subset are treated as ignore
/// regions during matching, not dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetSpec {
    pub name: String,
    pub min_height: f64,
    pub vis_lo: f64,
    pub vis_hi: f64,
    pub lo_exclusive: bool,
    pub hi_exclusive: bool,
}

impl SubsetSpec {
    pub fn new(
        name: &str,
        min_height: f64,
        vis_lo: f64,
        vis_hi: f64,
        lo_exclusive: bool,
        hi_exclusive: bool,
    ) -> SubsetSpec {
        SubsetSpec {
            name: name.to_string(),
            min_height,
            vis_lo,
            vis_hi,
            lo_exclusive,
            hi_exclusive,
        }
    }

    pub fn reasonable() -> SubsetSpec {
        SubsetSpec::new("Reasonable", 50.0, 0.65, 1.0, false, false)
    }

    pub fn heavy() -> SubsetSpec {
        SubsetSpec::new("Heavy", 50.0, 0.2, 0.65, false, false)
    }

    pub fn partial() -> SubsetSpec {
        SubsetSpec::new("Partial", 50.0, 0.65, 0.9, true, false)
    }

    pub fn bare() -> SubsetSpec {
        SubsetSpec::new("Bare", 50.0, 0.9, 1.0, true, false)
    }

    /// Table order used by all reports.
    pub fn standard_four() -> Vec<SubsetSpec> {
        vec![
            SubsetSpec::reasonable(),
            SubsetSpec::heavy(),
            SubsetSpec::partial(),
            SubsetSpec::bare(),
        ]
    }

    pub fn contains(&self, gt: &GtBox) -> bool {
        if gt.h < self.min_height {
            return false;
        }
        let lo_ok =
            if self.lo_exclusive { gt.visibility > self.vis_lo } else { gt.visibility >= self.vis_lo };
        let hi_ok =
            if self.hi_exclusive { gt.visibility < self.vis_hi } else { gt.visibility <= self.vis_hi };
        lo_ok && hi_ok
    }
}
