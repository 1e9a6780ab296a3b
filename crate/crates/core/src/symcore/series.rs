use super::field::Field;
use super::ratfunc::RatFunc;
use super::SymError;

/// Taylor coefficients `c_0..=c_order` of `r` in the variable `eps` at 0.
///
/// Each coefficient is a rational function in the remaining variables.
/// Fails when the denominator vanishes identically at `eps = 0`.
pub fn epsilon_expansion<F: Field>(
    r: &RatFunc<F>,
    eps: usize,
    order: usize,
) -> Result<Vec<RatFunc<F>>, SymError> {
    let ring = r.ring().clone();
    let num = r.num().coefficients_in(eps);
    let den = r.den().coefficients_in(eps);
    let d0 = den.first().filter(|d| !d.is_zero()).ok_or(SymError::PoleAtExpansionPoint)?;
    let d0_inv = RatFunc::from_poly(d0.clone()).inv()?;
    let mut out: Vec<RatFunc<F>> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.get(k).map(|p| RatFunc::from_poly(p.clone())).unwrap_or_else(|| RatFunc::zero(&ring));
        for i in 1..=k.min(den.len() - 1) {
            if den[i].is_zero() || out[k - i].is_zero() {
                continue;
            }
            acc = &acc - &(&RatFunc::from_poly(den[i].clone()) * &out[k - i]);
        }
        out.push(&acc * &d0_inv);
    }
    Ok(out)
}
