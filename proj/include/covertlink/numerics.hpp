#ifndef COVERTLINK_NUMERICS_HPP
#define COVERTLINK_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace covertlink::num {

/// Nodes and weights of an n-point Gaussian rule.
struct QuadNodes {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss-Legendre rule on (-1,1), weight 1.
QuadNodes gauss_legendre(int n);

/// Gauss-Laguerre rule on (0,inf), weight exp(-x).
QuadNodes gauss_laguerre(int n);

/// Gauss-Jacobi rule on (-1,1), weight (1-x)^alpha (1+x)^beta, alpha,beta > -1.
QuadNodes gauss_jacobi(int n, double alpha, double beta);

/// Gauss-Legendre rule mapped to (a,b).
QuadNodes gauss_legendre_ab(int n, double a, double b);

/// Adaptive Gauss-Kronrod 15(7) on a finite interval.
/// tol is treated as a relative tolerance against the running estimate,
/// with an absolute floor of tol*1e-300 to avoid stalling on zero integrals.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10, int max_depth = 220);

/// Complex-valued adaptive Gauss-Kronrod 15(7).
std::complex<double> adaptive_quad_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol = 1e-10, int max_depth = 220);

/// Adaptive quadrature over (0,inf) via the map t = u/(1-u).
double adaptive_quad_0inf(const std::function<double(double)>& f,
                          double tol = 1e-10);

/// Regularized lower incomplete gamma P(a,x), a>0, x>=0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a,b), a,b>0, 0<=x<=1.
double beta_inc(double a, double b, double x);

/// Compensated (Kahan) accumulator.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

/// Deterministic child engine for a (seed, stream) pair.
/// Streams with the same seed are decorrelated by splitmix64 mixing, so
/// estimates assembled from fixed stream blocks do not depend on how the
/// blocks are distributed over workers.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream);

}  // namespace covertlink::num

#endif
