#include "covertlink/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace covertlink::num {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by QL with implicit shifts,
// tracking the first component of each eigenvector (all that Golub-Welsch
// needs for quadrature weights).  d: diagonal, e: subdiagonal (e[0..n-2]).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& z0) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    z0.assign(n, 0.0);
    z0[0] = 1.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (++iter > 60)
                    throw std::runtime_error("tridiag_ql: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z0[i + 1];
                    z0[i + 1] = s * z0[i] + c * f;
                    z0[i] = c * z0[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

QuadNodes golub_welsch(std::vector<double> a, std::vector<double> b,
                       double mu0) {
    const int n = static_cast<int>(a.size());
    std::vector<double> e(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(b[k]);
    std::vector<double> z0;
    tridiag_ql(a, e, z0);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a[i] < a[j]; });
    QuadNodes q;
    q.x.resize(n);
    q.w.resize(n);
    for (int i = 0; i < n; ++i) {
        q.x[i] = a[idx[i]];
        q.w[i] = mu0 * z0[idx[i]] * z0[idx[i]];
    }
    return q;
}

// Kronrod 15-point extension of Gauss 7 on [-1,1] (abscissae >= 0 half).
constexpr double kXg15[8] = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWk15[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kWg7[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <typename T>
void gk15(const std::function<T(double)>& f, double a, double b, T& result,
          double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fv[15];
    fv[7] = f(c);
    for (int i = 1; i < 8; ++i) {
        fv[7 - i] = f(c - h * kXg15[i]);
        fv[7 + i] = f(c + h * kXg15[i]);
    }
    T resk = kWk15[0] * fv[7];
    for (int i = 1; i < 8; ++i) resk += kWk15[i] * (fv[7 - i] + fv[7 + i]);
    T resg = kWg7[0] * fv[7];
    for (int j = 1; j < 4; ++j)
        resg += kWg7[j] * (fv[7 - 2 * j] + fv[7 + 2 * j]);
    result = resk * h;
    err = std::abs((resk - resg) * h);
}

template <typename T>
T adaptive_gk(const std::function<T(double)>& f, double a, double b, double tol,
              int max_depth) {
    struct Seg {
        double a, b, err;
        T val;
        int depth;
    };
    T whole;
    double err0;
    gk15<T>(f, a, b, whole, err0);
    std::vector<Seg> stack{{a, b, err0, whole, 0}};
    T total = whole;
    double total_err = err0;
    long evals = 15;
    while (!stack.empty()) {
        double bound = tol * std::max(std::abs(total), 1e-300);
        if (total_err <= bound) break;
        // split the worst segment
        auto worst = std::max_element(
            stack.begin(), stack.end(),
            [](const Seg& p, const Seg& q) { return p.err < q.err; });
        Seg s = *worst;
        stack.erase(worst);
        if (s.depth >= max_depth || evals > 4'000'000) {
            // give up refining this segment; keep its contribution
            total_err -= s.err;
            continue;
        }
        double m = 0.5 * (s.a + s.b);
        Seg l{s.a, m, 0.0, T{}, s.depth + 1};
        Seg r{m, s.b, 0.0, T{}, s.depth + 1};
        gk15<T>(f, l.a, l.b, l.val, l.err);
        gk15<T>(f, r.a, r.b, r.val, r.err);
        evals += 30;
        total += l.val + r.val - s.val;
        total_err += l.err + r.err - s.err;
        stack.push_back(l);
        stack.push_back(r);
    }
    return total;
}

}  // namespace

QuadNodes gauss_legendre(int n) {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int k = 1; k < n; ++k)
        b[k] = k * k / (4.0 * k * k - 1.0);
    return golub_welsch(std::move(a), std::move(b), 2.0);
}

QuadNodes gauss_laguerre(int n) {
    std::vector<double> a(n), b(n, 0.0);
    for (int k = 0; k < n; ++k) a[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) b[k] = static_cast<double>(k) * k;
    return golub_welsch(std::move(a), std::move(b), 1.0);
}

QuadNodes gauss_jacobi(int n, double alpha, double beta) {
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("gauss_jacobi: alpha,beta must be > -1");
    std::vector<double> a(n), b(n, 0.0);
    double ab = alpha + beta;
    a[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        a[k] = (beta * beta - alpha * alpha) / den;
        double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        double d2 = (2.0 * k + ab) * (2.0 * k + ab);
        b[k] = num / (d2 * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0));
    }
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                          std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    return golub_welsch(std::move(a), std::move(b), mu0);
}

QuadNodes gauss_legendre_ab(int n, double a, double b) {
    QuadNodes q = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        q.x[i] = c + h * q.x[i];
        q.w[i] *= h;
    }
    return q;
}

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth) {
    return adaptive_gk<double>(f, a, b, tol, max_depth);
}

std::complex<double> adaptive_quad_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, int max_depth) {
    return adaptive_gk<std::complex<double>>(f, a, b, tol, max_depth);
}

double adaptive_quad_0inf(const std::function<double(double)>& f, double tol) {
    auto g = [&f](double u) {
        double t = u / (1.0 - u);
        double j = 1.0 / ((1.0 - u) * (1.0 - u));
        double v = f(t);
        return std::isfinite(v) ? v * j : 0.0;
    };
    return adaptive_quad(g, 0.0, 1.0, tol);
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::invalid_argument("gamma_p: need a>0, x>=0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::invalid_argument("gamma_q: need a>0, x>=0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

namespace {

double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            break;
    }
    return h;
}

}  // namespace

double beta_inc(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("beta_inc: need a,b>0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t s = mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL));
    return std::mt19937_64(s);
}

}  // namespace covertlink::num
