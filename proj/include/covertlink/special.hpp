#ifndef COVERTLINK_SPECIAL_HPP
#define COVERTLINK_SPECIAL_HPP

#include <complex>

namespace covertlink::special {

using cplx = std::complex<double>;

/// Principal-branch log-gamma for complex z (continuous off the negative real
/// axis; exp(ln_gamma_complex(z)) == Gamma(z)).  Throws std::domain_error on
/// nonpositive-integer real z.
cplx ln_gamma_complex(cplx z);

/// log|Gamma(x)| with the sign of Gamma(x) in *sign (+1/-1).  x may be
/// negative non-integer.
double lgamma_signed(double x, int* sign);

/// Gauss hypergeometric 2F1(a,b;c;z) for real parameters and z < 1.
/// Negative z is mapped into [0,1) with the Pfaff transformation; a
/// terminating (polynomial) series is detected and used when a or b is a
/// nonpositive integer.  Throws std::domain_error when c is a nonpositive
/// integer that the series reaches, or when z >= 1.
double gauss_2f1(double a, double b, double c, double z);

/// Kummer confluent 1F1(a;b;z).  Negative z is routed through the Kummer
/// transformation so the series never alternates destructively.
double kummer_1f1(double a, double b, double z);

/// Tricomi confluent U(a,b,z) for real z > 0.  Integer b is evaluated as the
/// average of b +/- 1e-6 (simple-pole cancellation; ~1e-10 accuracy).
double tricomi_u(double a, double b, double z);

/// Principal-branch Tricomi U for complex z (used by integral families whose
/// closed forms place U at negative real argument).
cplx tricomi_u_complex(double a, double b, cplx z);

/// 2F1 with complex parameters at real argument x < 1 (series + Pfaff).
cplx hyp2f1_complex(cplx a, cplx b, cplx c, double x);

/// 1F1 with complex parameters, complex argument (series + Kummer transform).
cplx hyp1f1_complex(cplx a, cplx b, cplx z);

}  // namespace covertlink::special

#endif
