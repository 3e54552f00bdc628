#ifndef COVERTLINK_FADING_HPP
#define COVERTLINK_FADING_HPP

#include <random>
#include <vector>

namespace covertlink::fading {

/// Squared-envelope fluctuating two-ray channel.  Mean power is
/// 2*sigma2*(1+k_ratio) by construction.
struct FtrParams {
    double m;        // specular fluctuation severity, > 0
    double k_ratio;  // specular-to-diffuse power ratio, >= 0
    double sigma2;   // diffuse variance per quadrature component, > 0
    double delta;    // specular amplitude similarity, in [0,1]

    FtrParams(double m_, double k_ratio_, double sigma2_, double delta_);
    double mean() const { return 2.0 * sigma2 * (1.0 + k_ratio); }
};

/// Squared-envelope Fisher-Snedecor F channel.  m_s > 1 is required: the
/// mean normalization carries a factor (m_s - 1).
struct FisherFParams {
    double m_f;    // multipath severity, > 0
    double m_s;    // shadowing severity, > 1
    double z_bar;  // mean power, > 0

    FisherFParams(double m_f_, double m_s_, double z_bar_);
};

/// Gamma-mixture expansion of the FTR law.  Component j is a
/// Gamma(j+1, 2*sigma2) density with mass (m^m/Gamma(m)) K^j terms[j] / j!.
/// residual is the truncation error of the CDF series evaluated at the mean
/// power (where the series is slowest among points of interest); it is
/// independent of sigma2.
struct FtrCoefficients {
    std::vector<double> terms;  // expansion coefficients 0..m_used
    int m_used = 0;
    double residual = 0.0;
};

/// Expansion coefficients 0..m_terms plus the truncation residual.  Throws
/// std::domain_error when the internal hypergeometric argument
/// (K*delta/(m+K))^2 exceeds 0.999 (series reliability boundary) and
/// std::runtime_error when cancellation drives a weight or the residual
/// below -1e-9.
FtrCoefficients ftr_coefficients(const FtrParams& p, int m_terms);

/// Normalized mixture masses (m^m/Gamma(m)) K^j terms[j] / j!.
std::vector<double> ftr_weights(const FtrParams& p, const FtrCoefficients& c);

/// Smallest truncation order with residual < tol, 0 < tol < 1.  Throws
/// std::runtime_error when no order <= cap qualifies.
int select_truncation(const FtrParams& p, double tol, int cap = 200);

/// Truncated-series density and distribution of the squared FTR envelope.
double ftr_pdf(const FtrParams& p, double x, int m_terms);
double ftr_cdf(const FtrParams& p, double x, int m_terms);

/// Hot-path variants over precomputed mixture masses (avoid re-deriving the
/// expansion per evaluation point).
double ftr_pdf_from_weights(double sigma2, const std::vector<double>& w, double x);
double ftr_cdf_from_weights(double sigma2, const std::vector<double>& w, double x);

/// Density and distribution of the squared Fisher-Snedecor F envelope.
double f_pdf(const FisherFParams& p, double z);
double f_cdf(const FisherFParams& p, double z);

/// One squared-envelope draw: two specular rays with a common gamma
/// fluctuation plus a complex Gaussian diffuse term.
double sample_ftr(const FtrParams& p, std::mt19937_64& rng);

/// One squared F draw via the scaled ratio of independent gammas.
double sample_f(const FisherFParams& p, std::mt19937_64& rng);

}  // namespace covertlink::fading

#endif
