#pragma once

namespace twist {

/// Generalized Laguerre polynomial L_n^alpha(x), three-term recurrence.
double laguerre(int n, double alpha, double x);

/// ln C_{n l} with C_{n l} = sqrt(2 n! / (pi (n+|l|)!)); finite for |l| up to 1e5 and beyond.
double lg_log_norm(int n, int ell);

}  // namespace twist
