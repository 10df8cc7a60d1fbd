#pragma once

namespace sclab {

// log|Gamma(x)| via a Lanczos sum (g = 607/128, 15 terms), x > 0.
double lgamma_lanczos(double x);

}  // namespace sclab
