#pragma once

#include <vector>

#include "covertlink/fading.hpp"

namespace covertlink::sinr {

/// Power coefficients of one receive link.  The instantaneous SINR is
/// gamma = c1 * X / (kappa2 + c2 * Z), where X is the direct-link FTR power
/// gain and Z the interfering-link Fisher-Snedecor F power gain.
struct LinkCoefficients {
    double c1;      // direct-link distance loss times transmit power, > 0
    double c2;      // interfering-link distance loss times jamming power, >= 0
    double kappa2;  // receiver noise power, > 0
    double m_s;     // shadowing severity of the interfering link, > 1
    double z_bar;   // mean power of the interfering link, > 0

    // Interference scale of the closed forms.  Recomputed on access so a c2
    // edit can never leave a stale cached value behind.
    double omega() const { return (m_s - 1.0) * z_bar * c2; }
};

/// Dimensionless gauges for the asymptotic CDF approximations.  omega_ratio
/// small means weak interference; gamma_scale small means the direct link
/// dominates at the evaluation point.
struct RegimeEstimate {
    double omega_ratio;  // omega / (m_f * kappa2)
    double gamma_scale;  // kappa2 * gamma / (2 * sigma2 * c1)
};

/// One user's end-to-end channel.  truncation is the largest retained index
/// of the direct link's gamma-mixture expansion, chosen so the kept mixture
/// mass reaches 1 - mass_tol; distribution values inherit that deficit as an
/// absolute error bound, so mass_tol must sit well below any CDF tolerance.
struct UserChannel {
    fading::FtrParams ftr;
    fading::FisherFParams fisher;
    LinkCoefficients link;
    int truncation;

    UserChannel(const fading::FtrParams& ftr_in, const fading::FisherFParams& fisher_in,
                double c1, double c2, double kappa2, double mass_tol = 1e-8);
};

/// SINR density at gamma > 0.  Nonnegative.
double sinr_pdf(const UserChannel& ch, double gamma);

/// SINR distribution at gamma >= 0.  The raw series value is verified to lie
/// in [-1e-6, 1+1e-6] before clamping to [0,1]; an escape signals a
/// transcription defect upstream, not a tolerance issue.
double sinr_cdf(const UserChannel& ch, double gamma);

/// Weak-interference approximation of sinr_cdf.  Exact in the omega -> 0
/// limit; may exceed 1 outside its regime.  Requires omega < m_f * kappa2.
double sinr_cdf_low_jamming(const UserChannel& ch, double gamma,
                            RegimeEstimate* regime = nullptr);

/// Strong-direct-link approximation of sinr_cdf (small gamma_scale); valid
/// for any interference level.
double sinr_cdf_high_power(const UserChannel& ch, double gamma,
                           RegimeEstimate* regime = nullptr);

/// Leading power-series term where both regimes hold simultaneously.
double sinr_cdf_high_power_low_jamming(const UserChannel& ch, double gamma,
                                       RegimeEstimate* regime = nullptr);

/// Probability the SINR falls below gamma_th; sinr_cdf evaluated there.
double outage_probability(const UserChannel& ch, double gamma_th);

namespace detail {

/// Direct-link mixture masses divided by Gamma(j+1): the series weights of
/// every Mellin-Barnes expansion over the line-of-sight order j.
std::vector<double> series_weights(const fading::FtrParams& p, int truncation);

/// Smallest inclusive truncation index whose mixture mass reaches 1 - tol.
int mass_truncation(const fading::FtrParams& p, double tol);

}  // namespace detail

}  // namespace covertlink::sinr
