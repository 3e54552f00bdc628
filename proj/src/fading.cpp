#include "covertlink/fading.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "covertlink/numerics.hpp"
#include "covertlink/special.hpp"

namespace covertlink::fading {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double ln_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Expansion coefficient j of the two-ray gamma mixture: a double binomial sum
// over (k, l) with mu = k - 2l.  Each (k, l) term is assembled in log
// magnitude so the gamma/power factors cancel exactly; the alternating outer
// sum is accumulated in extended precision because the terms grow well above
// the result for large j.  Each term carries ~1e-15 relative error from the
// double-precision gamma and hypergeometric factors, and with hundreds of
// terms those errors can add near coherently; `stable` caps the term/sum
// magnitude ratio at 1e4 to hold the result below ~1e-9 relative error, and
// callers must not trust the value beyond it.
long double ftr_alpha(int j, double m, double K, double delta, bool* stable) {
    const double ups = j + m;
    const double mk = m + K;
    const double xr = (K > 0.0 && delta > 0.0)
                          ? (K * delta / mk) * (K * delta / mk)
                          : 0.0;
    if (xr > 0.999)
        throw std::domain_error(
            "ftr_coefficients: specular series argument (K*delta/(m+K))^2 "
            "exceeds 0.999; expansion unreliable this close to the "
            "convergence boundary");

    long double sum = 0.0L, carry = 0.0L, maxmag = 0.0L;
    auto add = [&](long double v) {
        if (fabsl(v) > maxmag) maxmag = fabsl(v);
        long double y = v - carry;
        long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    };

    for (int k = 0; k <= j; ++k) {
        for (int l = 0; l <= k; ++l) {
            if (delta == 0.0 && l > 0) continue;
            const int mu = k - 2 * l;
            const double lnc = ln_choose(j, k) + ln_choose(k, l);
            const double sign = (mu % 2 == 0) ? 1.0 : -1.0;
            double lnmag, hyp;
            if (mu >= 1) {
                if (K == 0.0 || delta == 0.0) continue;
                hyp = special::gauss_2f1(0.5 * (ups + mu), 0.5 * (ups + mu + 1.0),
                                         1.0 + mu, xr);
                lnmag = lnc - ups * std::log(mk) + std::lgamma(ups + mu) -
                        std::lgamma(mu + 1.0) +
                        mu * std::log(K * delta * delta / (4.0 * mk));
                if (l > 0) lnmag += 2.0 * l * std::log(0.5 * delta);
            } else {
                if (K == 0.0 && mu < 0) continue;
                hyp = special::gauss_2f1(0.5 * (ups - mu), 0.5 * (ups - mu + 1.0),
                                         1.0 - mu, xr);
                lnmag = lnc + std::lgamma(ups - mu) + (mu - ups) * std::log(mk) -
                        std::lgamma(1.0 - mu);
                if (mu < 0) lnmag -= mu * std::log(K);
                if (l > 0) lnmag += 2.0 * l * std::log(0.5 * delta);
            }
            add(sign * std::exp(static_cast<long double>(lnmag)) *
                static_cast<long double>(hyp));
        }
    }
    if (stable) *stable = fabsl(sum) * 1e4L >= maxmag;
    return sum;
}

// Log of the same coefficient through its phase-average form: the conditional
// specular amplitude depends on the ray phase difference only through
// cos(theta), so averaging the gamma-mixture kernel over theta in (0, pi)
// reproduces alpha_j without the alternating sum.  The integrand is even
// around both endpoints, which makes the trapezoid rule spectrally accurate.
// Used once the binomial sum sheds too many digits (large j), where this
// route is both stable and cheaper.
long double ftr_alpha_integral_log(int j, double m, double K, double delta) {
    const long double ups = static_cast<long double>(j) + m;
    const long double mk = static_cast<long double>(m) + K;
    const long double kd = static_cast<long double>(K) * delta;
    const long double lg = lgammal(ups);
    auto lnv = [&](long double c) -> long double {
        long double r = lg - ups * logl(mk + kd * c);
        if (j > 0) r += j * logl(1.0L + static_cast<long double>(delta) * c);
        return r;  // -inf when delta == 1 at c == -1, a zero of the integrand
    };
    // Peak the integrand before exponentiating; the stationary phase lies at
    // cos(theta) = (j - K) / (K delta) when that falls inside (-1, 1).
    long double shift = std::max(lnv(1.0L), lnv(-1.0L));
    if (kd > 0.0L) {
        long double cs = (static_cast<long double>(j) - K) / kd;
        if (cs > -1.0L && cs < 1.0L) shift = std::max(shift, lnv(cs));
    }
    if (!std::isfinite(static_cast<double>(shift))) shift = lnv(0.0L);

    const int n = 4096;
    long double sum = 0.0L, carry = 0.0L;
    for (int i = 0; i <= n; ++i) {
        long double c = cosl(static_cast<long double>(M_PI) * i / n);
        long double v = expl(lnv(c) - shift);
        if (i == 0 || i == n) v *= 0.5L;
        long double y = v - carry;
        long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return shift + logl(sum / n);
}

// Mixture masses and the running CDF-at-mean truncation error.  Masses are
// extended past `need` until their contribution at the reference point is
// exhausted, so tail[M] is the full remainder for every M <= need.
// Coefficients come from the binomial sum while it holds precision and from
// the phase integral beyond that; alpha values are kept only up to `need`
// (deep-tail ones can overflow even long double, their weights cannot).
struct Expansion {
    std::vector<long double> alpha;  // entries 0..need
    std::vector<double> weight;
    std::vector<double> tail;  // tail[M] = residual after keeping 0..M
};

Expansion build_expansion(const FtrParams& p, int need) {
    const double m = p.m, K = p.k_ratio;
    const double cref = 1.0 + K;  // mean power over 2*sigma2
    const long double lnpref =
        static_cast<long double>(m) * std::log(static_cast<long double>(m)) -
        lgammal(static_cast<long double>(m));
    // Past this order the O(j^2) binomial sum costs more than the fixed-size
    // phase integral; below it the sum is preferred while it stays stable.
    constexpr int kSeriesLimit = 48;
    bool series_ok = true;

    Expansion e;
    constexpr int kHardStop = 4000;
    int quiet = 0;
    for (int j = 0; j <= kHardStop; ++j) {
        long double lnw = lnpref - lgammal(j + 1.0L);
        if (j > 0) lnw += j * logl(static_cast<long double>(K));
        long double a;
        long double w;
        bool stable = false;
        if (series_ok && j <= kSeriesLimit) {
            a = ftr_alpha(j, m, K, p.delta, &stable);
            if (!stable) series_ok = false;
        }
        if (series_ok && j <= kSeriesLimit) {
            w = (K == 0.0 && j > 0) ? 0.0L : expl(lnw) * a;
        } else {
            long double lna = ftr_alpha_integral_log(j, m, K, p.delta);
            a = expl(lna);
            w = (K == 0.0 && j > 0) ? 0.0L : expl(lnw + lna);
        }
        if (!std::isfinite(static_cast<double>(w)))
            throw std::runtime_error(
                "ftr_coefficients: nonfinite mixture weight");
        if (j <= need) e.alpha.push_back(a);
        e.weight.push_back(static_cast<double>(w));
        double contrib = static_cast<double>(w) * num::gamma_p(j + 1.0, cref);
        if (j >= need && contrib < 1e-18)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3) break;
        if (j == kHardStop)
            throw std::runtime_error(
                "ftr_coefficients: mixture tail did not converge");
    }

    const int n = static_cast<int>(e.weight.size());
    e.tail.assign(n, 0.0);
    long double acc = 0.0L;
    for (int j = n - 1; j >= 1; --j) {
        acc += static_cast<long double>(e.weight[j]) *
               static_cast<long double>(num::gamma_p(j + 1.0, cref));
        e.tail[j - 1] = static_cast<double>(acc);
    }
    for (int j = 0; j < n; ++j) {
        if (e.tail[j] < -1e-9)
            throw std::runtime_error(
                "ftr_coefficients: negative truncation residual beyond "
                "-1e-9; expansion numerically unstable");
        if (e.tail[j] < 0.0) e.tail[j] = 0.0;
    }
    return e;
}

}  // namespace

FtrParams::FtrParams(double m_, double k_ratio_, double sigma2_, double delta_)
    : m(m_), k_ratio(k_ratio_), sigma2(sigma2_), delta(delta_) {
    require(std::isfinite(m) && m > 0.0, "FtrParams: m must be positive");
    require(std::isfinite(k_ratio) && k_ratio >= 0.0,
            "FtrParams: k_ratio must be nonnegative");
    require(std::isfinite(sigma2) && sigma2 > 0.0,
            "FtrParams: sigma2 must be positive");
    require(std::isfinite(delta) && delta >= 0.0 && delta <= 1.0,
            "FtrParams: delta must lie in [0,1]");
}

FisherFParams::FisherFParams(double m_f_, double m_s_, double z_bar_)
    : m_f(m_f_), m_s(m_s_), z_bar(z_bar_) {
    require(std::isfinite(m_f) && m_f > 0.0, "FisherFParams: m_f must be positive");
    require(std::isfinite(m_s) && m_s > 1.0,
            "FisherFParams: m_s must exceed 1 (mean normalization)");
    require(std::isfinite(z_bar) && z_bar > 0.0,
            "FisherFParams: z_bar must be positive");
}

FtrCoefficients ftr_coefficients(const FtrParams& p, int m_terms) {
    require(m_terms >= 0, "ftr_coefficients: m_terms must be nonnegative");
    Expansion e = build_expansion(p, m_terms);
    FtrCoefficients c;
    c.m_used = m_terms;
    c.terms.reserve(m_terms + 1);
    for (int j = 0; j <= m_terms; ++j)
        c.terms.push_back(static_cast<double>(e.alpha[j]));
    c.residual = m_terms < static_cast<int>(e.tail.size()) ? e.tail[m_terms] : 0.0;
    return c;
}

std::vector<double> ftr_weights(const FtrParams& p, const FtrCoefficients& c) {
    const long double lnpref =
        static_cast<long double>(p.m) * std::log(static_cast<long double>(p.m)) -
        lgammal(static_cast<long double>(p.m));
    std::vector<double> w(c.terms.size());
    for (std::size_t j = 0; j < c.terms.size(); ++j) {
        if (p.k_ratio == 0.0 && j > 0) {
            w[j] = 0.0;
            continue;
        }
        long double lnw = lnpref - lgammal(j + 1.0L);
        if (j > 0) lnw += j * logl(static_cast<long double>(p.k_ratio));
        w[j] = static_cast<double>(expl(lnw) * static_cast<long double>(c.terms[j]));
    }
    return w;
}

int select_truncation(const FtrParams& p, double tol, int cap) {
    require(std::isfinite(tol) && tol > 0.0 && tol < 1.0,
            "select_truncation: tol must lie in (0,1)");
    require(cap >= 0, "select_truncation: cap must be nonnegative");
    Expansion e = build_expansion(p, 0);
    const int n = static_cast<int>(e.tail.size());
    for (int M = 0; M <= cap; ++M) {
        double r = M < n ? e.tail[M] : 0.0;
        if (r < tol) return M;
    }
    throw std::runtime_error(
        "select_truncation: no truncation order within the cap meets the "
        "requested tolerance");
}

double ftr_pdf(const FtrParams& p, double x, int m_terms) {
    return ftr_pdf_from_weights(p.sigma2,
                                ftr_weights(p, ftr_coefficients(p, m_terms)), x);
}

double ftr_cdf(const FtrParams& p, double x, int m_terms) {
    return ftr_cdf_from_weights(p.sigma2,
                                ftr_weights(p, ftr_coefficients(p, m_terms)), x);
}

double ftr_pdf_from_weights(double sigma2, const std::vector<double>& w,
                            double x) {
    require(x >= 0.0, "ftr_pdf: x must be nonnegative");
    const double y = x / (2.0 * sigma2);
    double lgj = 0.0;  // log Gamma(j+1), built incrementally
    num::Kahan acc;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (j > 0) lgj += std::log(static_cast<double>(j));
        double lnterm;
        if (y == 0.0)
            lnterm = (j == 0) ? 0.0 : -std::numeric_limits<double>::infinity();
        else
            lnterm = j * std::log(y) - y - lgj;
        acc.add(w[j] * std::exp(lnterm));
    }
    return acc.sum / (2.0 * sigma2);
}

double ftr_cdf_from_weights(double sigma2, const std::vector<double>& w,
                            double x) {
    require(x >= 0.0, "ftr_cdf: x must be nonnegative");
    const double y = x / (2.0 * sigma2);
    // Lower regularized gamma at integer shape steps down by the Poisson
    // mass: P(j+2, y) = P(j+1, y) - e^-y y^(j+1)/(j+1)!.
    double t = std::exp(-y);
    double u = -std::expm1(-y);
    num::Kahan acc;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (j > 0) {
            t *= y / static_cast<double>(j);
            u -= t;
            if (u < 0.0) u = 0.0;
        }
        acc.add(w[j] * u);
    }
    return acc.sum;
}

double f_pdf(const FisherFParams& p, double z) {
    require(z >= 0.0, "f_pdf: z must be nonnegative");
    const double mf = p.m_f, ms = p.m_s;
    const double s = (ms - 1.0) * p.z_bar;
    const double lnb = std::lgamma(mf) + std::lgamma(ms) - std::lgamma(mf + ms);
    if (z == 0.0) {
        if (mf > 1.0) return 0.0;
        if (mf == 1.0) return ms / s;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(mf * std::log(mf) + ms * std::log(s) +
                    (mf - 1.0) * std::log(z) - lnb -
                    (mf + ms) * std::log(mf * z + s));
}

double f_cdf(const FisherFParams& p, double z) {
    require(z >= 0.0, "f_cdf: z must be nonnegative");
    if (z == 0.0) return 0.0;
    const double mf = p.m_f, ms = p.m_s;
    const double s = (ms - 1.0) * p.z_bar;
    const double lnb = std::lgamma(mf) + std::lgamma(ms) - std::lgamma(mf + ms);
    const double hyp = special::gauss_2f1(mf, mf + ms, mf + 1.0, -mf * z / s);
    double v = std::exp((mf - 1.0) * std::log(mf) + mf * std::log(z) - lnb -
                        mf * std::log(s)) *
               hyp;
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

double sample_ftr(const FtrParams& p, std::mt19937_64& rng) {
    std::gamma_distribution<double> gm(p.m, 1.0 / p.m);  // unit mean
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    std::normal_distribution<double> gauss(0.0, std::sqrt(p.sigma2));
    const double spread = std::sqrt(1.0 - p.delta * p.delta);
    const double v1 = std::sqrt(p.sigma2 * p.k_ratio * (1.0 + spread));
    const double v2 = std::sqrt(p.sigma2 * p.k_ratio * (1.0 - spread));
    const double amp = std::sqrt(gm(rng));
    const double phi1 = ph(rng), phi2 = ph(rng);
    const double re =
        amp * (v1 * std::cos(phi1) + v2 * std::cos(phi2)) + gauss(rng);
    const double im =
        amp * (v1 * std::sin(phi1) + v2 * std::sin(phi2)) + gauss(rng);
    return re * re + im * im;
}

double sample_f(const FisherFParams& p, std::mt19937_64& rng) {
    std::gamma_distribution<double> gf(p.m_f, 1.0);
    std::gamma_distribution<double> gs(p.m_s, 1.0);
    double denom = 0.0;
    do {
        denom = gs(rng);
    } while (denom <= 0.0);
    return (p.m_s - 1.0) * p.z_bar / p.m_f * gf(rng) / denom;
}

}  // namespace covertlink::fading
