use serde::{Deserialize, Serialize};

use super::StatsError;

/// Employment counts for one area/category pair and the national reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LqInput {
    pub emp_cat_area: f64,
    pub emp_total_area: f64,
    pub emp_cat_nat: f64,
    pub emp_total_nat: f64,
}

impl LqInput {
    pub fn new(
        emp_cat_area: f64,
        emp_total_area: f64,
        emp_cat_nat: f64,
        emp_total_nat: f64,
    ) -> Self {
        LqInput {
            emp_cat_area,
            emp_total_area,
            emp_cat_nat,
            emp_total_nat,
        }
    }
}

/// Ratio of the local category share of employment to the national share.
/// Values above 1 mark a local concentration of the category.
pub fn location_quotient(input: LqInput) -> Result<f64, StatsError> {
    let LqInput {
        emp_cat_area,
        emp_total_area,
        emp_cat_nat,
        emp_total_nat,
    } = input;
    let all = [emp_cat_area, emp_total_area, emp_cat_nat, emp_total_nat];
    if let Some(i) = all.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite(i));
    }
    if emp_total_area <= 0.0 || emp_total_nat <= 0.0 {
        return Err(StatsError::InvalidLqInput("totals must be positive"));
    }
    if emp_cat_area < 0.0 || emp_cat_nat < 0.0 {
        return Err(StatsError::InvalidLqInput(
            "category counts must be non-negative",
        ));
    }
    if emp_cat_area > emp_total_area || emp_cat_nat > emp_total_nat {
        return Err(StatsError::InvalidLqInput("category exceeds total"));
    }
    if emp_cat_nat == 0.0 {
        return Err(StatsError::UndefinedLq);
    }
    let local = emp_cat_area / emp_total_area;
    let national = emp_cat_nat / emp_total_nat;
    Ok(local / national)
}
