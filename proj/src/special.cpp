#include "covertlink/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace covertlink::special {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2Pi = 1.837877066409345483560659472811235279;

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) < tol;
}

bool is_nonpos_int(double x, double tol = 1e-9) {
    return x < 0.5 && near_integer(x, tol);
}

// Stirling series coefficients B_{2k} / (2k (2k-1)).
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,
    -1.0 / 1680.0,       1.0 / 1188.0,       -691.0 / 360360.0,
    1.0 / 156.0,         -3617.0 / 122400.0};

}  // namespace

cplx ln_gamma_complex(cplx z) {
    if (z.imag() == 0.0 && is_nonpos_int(z.real(), 1e-13))
        throw std::domain_error("ln_gamma_complex: pole at nonpositive integer");
    // Shift into the Stirling-accurate half plane; the recurrence with
    // principal logs preserves the principal branch off the negative axis.
    cplx shift(0.0, 0.0);
    int guard = 0;
    while (z.real() < 12.0) {
        shift += std::log(z);
        z += 1.0;
        if (++guard > 100000)
            throw std::domain_error("ln_gamma_complex: argument too far left");
    }
    cplx w = z;
    cplx res = (w - 0.5) * std::log(w) - w + 0.5 * kLn2Pi;
    cplx w2 = w * w;
    cplx p = 1.0 / w;
    for (double c : kStirling) {
        res += c * p;
        p /= w2;
    }
    return res - shift;
}

double lgamma_signed(double x, int* sign) {
    if (is_nonpos_int(x, 1e-13))
        throw std::domain_error("lgamma_signed: pole at nonpositive integer");
    *sign = 1;
    if (x > 0.0) return std::lgamma(x);
    // Reflection handles negative non-integers; sign flips with the parity of
    // floor(x).
    // Gamma(x) > 0 on (-2,-1), (-4,-3), ...: sign follows floor parity.
    double lg = std::lgamma(x);
    long k = static_cast<long>(std::floor(x));
    *sign = (k % 2 == 0) ? 1 : -1;
    return lg;
}

namespace {

// Plain power series; requires |z| < 1 region handled by the caller.
double series_2f1(double a, double b, double c, double z, long max_terms) {
    double term = 1.0, sum = 1.0, carry = 0.0;
    int settled = 0;
    for (long n = 0; n < max_terms; ++n) {
        double cn = c + n;
        if (std::abs(cn) < 1e-12)
            throw std::domain_error("gauss_2f1: c hits a nonpositive integer");
        term *= (a + n) * (b + n) / (cn * (n + 1.0)) * z;
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        if (term == 0.0) break;
        if (std::abs(term) < std::abs(sum) * 1e-16) {
            if (++settled >= 2) break;
        } else {
            settled = 0;
        }
    }
    return sum;
}

double poly_2f1(double a, double b, double c, double z) {
    // a (or b) a nonpositive integer: finite sum, exact for any z.
    double neg = is_nonpos_int(a) ? a : b;
    double other = is_nonpos_int(a) ? b : a;
    long n_terms = static_cast<long>(std::llround(-neg));
    double term = 1.0, sum = 1.0;
    for (long n = 0; n < n_terms; ++n) {
        double cn = c + n;
        if (std::abs(cn) < 1e-12)
            throw std::domain_error("gauss_2f1: c hits a nonpositive integer");
        term *= (neg + n) * (other + n) / (cn * (n + 1.0)) * z;
        sum += term;
    }
    return sum;
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
        !std::isfinite(z))
        throw std::domain_error("gauss_2f1: nonfinite input");
    if (z >= 1.0) throw std::domain_error("gauss_2f1: need z < 1");
    if (is_nonpos_int(a) || is_nonpos_int(b)) {
        double neg = is_nonpos_int(a) ? a : b;
        if (is_nonpos_int(c) && c > neg - 0.5)
            throw std::domain_error("gauss_2f1: c pole inside finite series");
        return poly_2f1(a, b, c, z);
    }
    if (is_nonpos_int(c))
        throw std::domain_error("gauss_2f1: c is a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (z < 0.0) {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)).  Prefer the
        // variant whose new numerator parameter terminates the series.
        double w = z / (z - 1.0);  // in (0,1)
        if (is_nonpos_int(c - b))
            return std::pow(1.0 - z, -a) * poly_2f1(c - b, a, c, w);
        if (is_nonpos_int(c - a))
            return std::pow(1.0 - z, -b) * poly_2f1(c - a, b, c, w);
        return std::pow(1.0 - z, -a) * series_2f1(a, c - b, c, w, 200000);
    }
    if (z <= 0.9) return series_2f1(a, b, c, z, 200000);
    double cab = c - a - b;
    if (!near_integer(cab, 1e-8)) {
        // linear transformation z -> 1-z
        double u = 1.0 - z;
        int s1, s2, s3, s4, s5, s6;
        double g1 = lgamma_signed(c, &s1) + lgamma_signed(cab, &s2) -
                    lgamma_signed(c - a, &s3) - lgamma_signed(c - b, &s4);
        double t1 = s1 * s2 * s3 * s4 * std::exp(g1) *
                    series_2f1(a, b, 1.0 - cab, u, 200000);
        double g2 = lgamma_signed(c, &s1) + lgamma_signed(-cab, &s5) -
                    lgamma_signed(a, &s6) - lgamma_signed(b, &s2);
        double t2 = s1 * s5 * s6 * s2 * std::exp(g2 + cab * std::log(u)) *
                    series_2f1(c - a, c - b, 1.0 + cab, u, 200000);
        return t1 + t2;
    }
    // integer c-a-b near z=1: direct series still converges for z<1
    return series_2f1(a, b, c, z, 2000000);
}

namespace {

double series_1f1(double a, double b, double z) {
    double term = 1.0, sum = 1.0, carry = 0.0;
    for (long n = 0; n < 200000; ++n) {
        double bn = b + n;
        if (std::abs(bn) < 1e-12)
            throw std::domain_error("kummer_1f1: b hits a nonpositive integer");
        term *= (a + n) / (bn * (n + 1.0)) * z;
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        if (std::abs(term) < std::abs(sum) * 1e-16 && n > 4) break;
    }
    return sum;
}

}  // namespace

double kummer_1f1(double a, double b, double z) {
    if (is_nonpos_int(b)) {
        if (!(is_nonpos_int(a) && a > b - 0.5))
            throw std::domain_error("kummer_1f1: b is a nonpositive integer");
    }
    if (is_nonpos_int(a)) {
        // terminating series, stable directly
        long n_terms = static_cast<long>(std::llround(-a));
        double term = 1.0, sum = 1.0;
        for (long n = 0; n < n_terms; ++n) {
            term *= (a + n) / ((b + n) * (n + 1.0)) * z;
            sum += term;
        }
        return sum;
    }
    if (z >= 0.0) {
        if (z > 700.0) throw std::domain_error("kummer_1f1: overflow");
        return series_1f1(a, b, z);
    }
    if (z < -700.0) throw std::domain_error("kummer_1f1: overflow");
    return std::exp(z) * series_1f1(b - a, b, -z);
}

namespace {

cplx series_1f1_c(cplx a, cplx b, cplx z) {
    cplx term = 1.0, sum = 1.0;
    for (long n = 0; n < 400000; ++n) {
        cplx bn = b + static_cast<double>(n);
        if (std::abs(bn) < 1e-12)
            throw std::domain_error("hyp1f1_complex: b pole");
        term *= (a + static_cast<double>(n)) / (bn * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16 && n > 4) break;
    }
    return sum;
}

// Asymptotic large-|z| expansion of U with optimal truncation.  Returns false
// when the smallest term is not small enough to certify ~1e-12.
bool tricomi_u_asymptotic(double a, double b, cplx z, cplx* out) {
    cplx zi = 1.0 / z;
    cplx term = 1.0, sum = 1.0;
    double best = std::numeric_limits<double>::max();
    for (int k = 0; k < 300; ++k) {
        cplx next = term * (-(a + k) * (a - b + 1.0 + k) / (k + 1.0)) * zi;
        if (std::abs(next) >= std::abs(term)) break;  // past optimal truncation
        term = next;
        sum += term;
        best = std::abs(term);
        if (best < std::abs(sum) * 1e-16) break;
    }
    if (best > std::abs(sum) * 1e-13) return false;
    *out = std::exp(-a * std::log(z)) * sum;
    return true;
}

cplx tricomi_u_kummer(double a, double b, cplx z) {
    // U = G(1-b)/G(a-b+1) M(a,b,z) + G(b-1)/G(a) z^{1-b} M(a-b+1,2-b,z)
    auto M = [](double aa, double bb, cplx zz) {
        if (zz.real() < 0.0)
            return std::exp(zz) * series_1f1_c(bb - aa, bb, -zz);
        return series_1f1_c(aa, bb, zz);
    };
    // A denominator gamma at a nonpositive integer kills its term.
    cplx t1 = 0.0, t2 = 0.0;
    if (!is_nonpos_int(a - b + 1.0)) {
        int s1, s2;
        double g1 = lgamma_signed(1.0 - b, &s1) - lgamma_signed(a - b + 1.0, &s2);
        t1 = static_cast<double>(s1 * s2) * std::exp(g1) * M(a, b, z);
    }
    if (!is_nonpos_int(a)) {
        int s3, s4;
        double g2 = lgamma_signed(b - 1.0, &s3) - lgamma_signed(a, &s4);
        t2 = static_cast<double>(s3 * s4) *
             std::exp(g2 + (1.0 - b) * std::log(z)) * M(a - b + 1.0, 2.0 - b, z);
    }
    return t1 + t2;
}

}  // namespace

cplx tricomi_u_complex(double a, double b, cplx z) {
    if (std::abs(z) == 0.0)
        throw std::domain_error("tricomi_u: z must be nonzero");
    if (is_nonpos_int(a)) {
        // polynomial: U(-n,b,z) = (-1)^n n! L_n^{b-1}(z); evaluate by series
        long n_terms = static_cast<long>(std::llround(-a));
        cplx term = 1.0, sum = 1.0;
        for (long k = 0; k < n_terms; ++k) {
            term *= (a + k) * (a - b + 1.0 + k) / (k + 1.0) / z * (-1.0);
            sum += term;
        }
        return std::exp(-a * std::log(z)) * sum;
    }
    cplx out;
    if (std::abs(z) > 45.0 && tricomi_u_asymptotic(a, b, z, &out)) return out;
    if (std::abs(z) > 690.0)
        throw std::domain_error("tricomi_u: |z| too large for series form");
    if (near_integer(b, 1e-9)) {
        const double d = 1e-6;
        cplx lo = tricomi_u_kummer(a, b - d, z);
        cplx hi = tricomi_u_kummer(a, b + d, z);
        return 0.5 * (lo + hi);
    }
    return tricomi_u_kummer(a, b, z);
}

double tricomi_u(double a, double b, double z) {
    if (z <= 0.0) throw std::domain_error("tricomi_u: need z > 0 (real form)");
    return tricomi_u_complex(a, b, cplx(z, 0.0)).real();
}

cplx hyp2f1_complex(cplx a, cplx b, cplx c, double x) {
    if (x >= 1.0) throw std::domain_error("hyp2f1_complex: need x < 1");
    if (x < 0.0) {
        double w = x / (x - 1.0);
        return std::exp(-a * std::log(cplx(1.0 - x))) *
               hyp2f1_complex(a, c - b, c, w);
    }
    cplx term = 1.0, sum = 1.0;
    for (long n = 0; n < 400000; ++n) {
        cplx cn = c + static_cast<double>(n);
        if (std::abs(cn) < 1e-12)
            throw std::domain_error("hyp2f1_complex: c pole");
        term *= (a + static_cast<double>(n)) * (b + static_cast<double>(n)) /
                (cn * (n + 1.0)) * x;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16 && n > 4) break;
    }
    return sum;
}

cplx hyp1f1_complex(cplx a, cplx b, cplx z) {
    if (z.real() < 0.0) return std::exp(z) * series_1f1_c(b - a, b, -z);
    return series_1f1_c(a, b, z);
}

}  // namespace covertlink::special
