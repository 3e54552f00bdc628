#include "covertlink/foxh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "covertlink/special.hpp"

namespace covertlink::foxh {
namespace {

using special::lgamma_signed;
using special::ln_gamma_complex;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct AxisFactor {
    double offset;
    double coeff;
};

// Spec with per-variable lists flattened to scalar coefficients.
struct Resolved {
    int arity = 2;
    std::array<std::vector<AxisFactor>, 2> num, den;
    std::vector<GammaFactor> num_joint, den_joint;
    std::array<int, 2> sign{1, 1};
};

Resolved resolve(const FoxHSpec& spec) {
    if (spec.arity != 1 && spec.arity != 2)
        throw std::invalid_argument("fox_h: arity must be 1 or 2");
    Resolved r;
    r.arity = spec.arity;
    r.sign = spec.arg_sign;
    for (int v = 0; v < 2; ++v) {
        const int o = 1 - v;
        for (const auto& f : spec.num_var[v]) {
            if (f.c[o] != 0.0)
                throw std::invalid_argument("fox_h: per-variable factor couples both variables");
            r.num[v].push_back({f.offset, f.c[v]});
        }
        for (const auto& f : spec.den_var[v]) {
            if (f.c[o] != 0.0)
                throw std::invalid_argument("fox_h: per-variable factor couples both variables");
            r.den[v].push_back({f.offset, f.c[v]});
        }
    }
    r.num_joint = spec.num_joint;
    r.den_joint = spec.den_joint;
    if (spec.arity == 1 &&
        (!r.num[1].empty() || !r.den[1].empty() || !r.num_joint.empty() || !r.den_joint.empty()))
        throw std::invalid_argument("fox_h: univariate spec uses variable 0 only");
    return r;
}

// Distance from y to the nearest nonpositive integer (the gamma pole set).
double dist_nonpos_int(double y) {
    if (y >= 0.0) return y;
    return std::abs(y - std::round(y));
}

struct Families {
    double left_max = -kInf;   // rightmost pole of ascending-coefficient factors
    double right_min = kInf;   // leftmost pole of descending-coefficient factors
    bool has_left = false, has_right = false;
};

Families axis_families(const std::vector<AxisFactor>& num) {
    Families fam;
    for (const auto& f : num) {
        if (f.coeff > 0.0) {
            fam.has_left = true;
            fam.left_max = std::max(fam.left_max, -f.offset / f.coeff);
        } else if (f.coeff < 0.0) {
            fam.has_right = true;
            fam.right_min = std::min(fam.right_min, -f.offset / f.coeff);
        }
    }
    return fam;
}

double axis_pole_dist(const std::vector<AxisFactor>& num, double sigma) {
    double d = kInf;
    for (const auto& f : num)
        if (f.coeff != 0.0)
            d = std::min(d, dist_nonpos_int(f.offset + f.coeff * sigma) / std::abs(f.coeff));
    return d;
}

double joint_pole_dist(const std::vector<GammaFactor>& num_joint, double s1, double s2) {
    double d = kInf;
    for (const auto& f : num_joint) {
        const double scale = std::max({std::abs(f.c[0]), std::abs(f.c[1]), 1.0});
        d = std::min(d, dist_nonpos_int(f.offset + f.c[0] * s1 + f.c[1] * s2) / scale);
    }
    return d;
}

// Per-axis factor lists with the series' j = 0 member folded in; used for
// pole bookkeeping only (j > 0 members sit strictly deeper in the family).
std::array<std::vector<AxisFactor>, 2> pole_lists(const Resolved& r, const AxisSeries& ser) {
    auto lists = r.num;
    if (ser.var >= 0) lists[ser.var].push_back({ser.offset0, ser.coeff});
    return lists;
}

std::array<double, 2> choose_contours(const Resolved& r, const AxisSeries& ser,
                                      const ContourPolicy& pol) {
    const auto plists = pole_lists(r, ser);
    std::array<double, 2> sig{0.0, 0.0};
    std::array<bool, 2> fixed{false, false};
    const double pad = std::max(0.75, 2.0 * pol.pole_margin);
    for (int v = 0; v < r.arity; ++v) {
        if (std::isfinite(pol.abscissa[v])) {
            sig[v] = pol.abscissa[v];
            fixed[v] = true;
            if (axis_pole_dist(plists[v], sig[v]) < 0.98 * pol.pole_margin)
                throw PoleSeparationError("fox_h: requested abscissa too close to a pole");
            continue;
        }
        const Families fam = axis_families(plists[v]);
        if (fam.has_left && fam.has_right) {
            if (fam.right_min - fam.left_max < 2.0 * pol.pole_margin)
                throw PoleSeparationError("fox_h: pole families leave no contour gap");
            sig[v] = 0.5 * (fam.left_max + fam.right_min);
        } else if (fam.has_left) {
            sig[v] = fam.left_max + pad;
        } else if (fam.has_right) {
            sig[v] = fam.right_min - pad;
        } else {
            sig[v] = 0.0;
        }
    }
    if (r.arity == 2 && !r.num_joint.empty()) {
        // A joint numerator factor can pinch the product contour even when
        // both axes clear their own families; nudge within the axis slack.
        if (joint_pole_dist(r.num_joint, sig[0], sig[1]) < pol.pole_margin) {
            const double m = pol.pole_margin;
            const double steps[] = {0.0, m, -m, 2 * m, -2 * m, 3.3 * m, -3.3 * m};
            for (double d0 : steps) {
                if (fixed[0] && d0 != 0.0) continue;
                for (double d1 : steps) {
                    if (fixed[1] && d1 != 0.0) continue;
                    const double c0 = sig[0] + d0, c1 = sig[1] + d1;
                    if (axis_pole_dist(plists[0], c0) < m) continue;
                    if (axis_pole_dist(plists[1], c1) < m) continue;
                    if (joint_pole_dist(r.num_joint, c0, c1) < m) continue;
                    return {c0, c1};
                }
            }
            throw PoleSeparationError("fox_h: joint factor pinches every contour candidate");
        }
    }
    return sig;
}

cplx log_arg(double x, int sign) {
    if (x == 0.0 || !std::isfinite(x))
        throw std::invalid_argument("fox_h: argument must be finite and nonzero");
    const cplx lx = (x > 0.0) ? cplx(std::log(x), 0.0) : cplx(std::log(-x), kPi);
    return double(sign) * lx;
}

// Convergence-sector budget on axis v: kernel decay rate (per unit |t|)
// minus the rotation spent by the argument's phase.
double decay_margin(const Resolved& r, const AxisSeries& ser, int v, cplx lnxi) {
    double sum = 0.0;
    for (const auto& f : r.num[v]) sum += std::abs(f.coeff);
    for (const auto& f : r.den[v]) sum -= std::abs(f.coeff);
    if (ser.var == v) sum += std::abs(ser.coeff);
    for (const auto& f : r.num_joint) sum += std::abs(f.c[v]);
    for (const auto& f : r.den_joint) sum -= std::abs(f.c[v]);
    return 0.5 * kPi * sum - std::abs(lnxi.imag());
}

// sum_j w_j prod_{k<j} (z0 + k);  Gamma(z0+j) = Gamma(z0) * prod.
cplx fold_poly(const AxisSeries& ser, cplx z0) {
    cplx run = 1.0, acc = ser.weights[0];
    for (std::size_t j = 1; j < ser.weights.size(); ++j) {
        run *= z0 + double(j - 1);
        acc += ser.weights[j] * run;
    }
    return acc;
}

// Complex log of the axis-v slice (per-axis gammas, series gamma, argument
// power) plus the series polynomial, which is kept unexponentiated.
struct AxisVal {
    cplx ln;
    cplx poly;
};

AxisVal axis_value(const Resolved& r, const AxisSeries& ser, int v, cplx s, cplx lnxi) {
    AxisVal a{s * lnxi, cplx(1.0)};
    for (const auto& f : r.num[v]) a.ln += ln_gamma_complex(f.offset + f.coeff * s);
    for (const auto& f : r.den[v]) a.ln -= ln_gamma_complex(f.offset + f.coeff * s);
    if (ser.var == v) {
        const cplx z0 = ser.offset0 + ser.coeff * s;
        a.ln += ln_gamma_complex(z0);
        a.poly = fold_poly(ser, z0);
    }
    return a;
}

double scan_logmag(const Resolved& r, const AxisSeries& ser, int v,
                   const std::array<double, 2>& sig, cplx lnxi, double t) {
    const cplx s(sig[v], t);
    const AxisVal a = axis_value(r, ser, v, s, lnxi);
    double L = a.ln.real() + std::log(std::abs(a.poly) + 1e-300);
    const int o = 1 - v;
    for (const auto& f : r.num_joint)
        L += ln_gamma_complex(f.offset + f.c[v] * s + f.c[o] * sig[o]).real();
    for (const auto& f : r.den_joint)
        L -= ln_gamma_complex(f.offset + f.c[v] * s + f.c[o] * sig[o]).real();
    return L;
}

// Truncation half-length: smallest |t| at which the kernel magnitude has
// dropped 55 nats below its near-axis peak, probed on both sides.
double pick_halflength(const Resolved& r, const AxisSeries& ser, int v,
                       const std::array<double, 2>& sig, cplx lnxi) {
    auto L = [&](double t) { return scan_logmag(r, ser, v, sig, lnxi, t); };
    double peak = -kInf;
    for (double t : {0.0, 1.0, 2.0, 4.0}) peak = std::max(peak, L(t));
    const double drop = 55.0;
    const double grid[] = {6, 9, 13, 20, 30, 45, 68, 100, 150, 225, 340, 400};
    double T = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double sgn = side ? -1.0 : 1.0;
        double side_T = 0.0, side_peak = peak, last = peak, last_t = 4.0;
        for (double t : grid) {
            const double Lv = L(sgn * t);
            side_peak = std::max(side_peak, Lv);
            if (Lv <= side_peak - drop) {
                side_T = t;
                break;
            }
            last = Lv;
            last_t = t;
        }
        if (side_T == 0.0) {
            const double L400 = L(sgn * 400.0);
            const double slope = (L400 - last) / (400.0 - last_t);
            if (!(slope < -1e-3))
                throw DivergentKernelError("fox_h: kernel magnitude does not decay on contour");
            side_T = std::min(2500.0, 400.0 + (side_peak - drop - L400) / (-slope));
        }
        T = std::max(T, side_T);
    }
    return T;
}

int initial_nodes(cplx lnxi, double T, double pole_dist, const ContourPolicy& pol) {
    // Two step bounds: the argument's oscillation, and trapezoid aliasing
    // from the nearest pole row, whose error plateaus near e^{-2 pi d / h}
    // for a pole at distance d off the contour. Grid doubling then just
    // confirms instead of crawling down the aliasing curve.
    const double omega = std::abs(lnxi.real()) + 3.0;
    double h = kPi / (2.0 * omega);
    if (std::isfinite(pole_dist) && pole_dist > 0.0) {
        const double nats = std::log(40.0 / std::clamp(pol.rel_tol, 1e-15, 1e-2));
        h = std::min(h, 2.0 * kPi * pole_dist / nats);
    }
    int n = 2 * int(std::ceil(T / h)) + 1;
    n = std::max(n, pol.initial_nodes | 1);
    n = std::min(n, 14999);
    return n;
}

struct Contour {
    std::array<double, 2> sig;
    std::array<double, 2> T;
    std::array<cplx, 2> lnxi;
};

std::vector<AxisVal> axis_cache(const Resolved& r, const AxisSeries& ser, int v,
                                const Contour& c, int n) {
    std::vector<AxisVal> vals(n);
    const double h = 2.0 * c.T[v] / (n - 1);
    for (int i = 0; i < n; ++i) {
        const cplx s(c.sig[v], -c.T[v] + h * i);
        vals[i] = axis_value(r, ser, v, s, c.lnxi[v]);
    }
    return vals;
}

double accumulate_2d(const Resolved& r, const AxisSeries& ser, const Contour& c, int n1,
                     int n2) {
    const auto a1 = axis_cache(r, ser, 0, c, n1);
    const auto a2 = axis_cache(r, ser, 1, c, n2);
    const double h1 = 2.0 * c.T[0] / (n1 - 1);
    const double h2 = 2.0 * c.T[1] / (n2 - 1);
    cplx total = 0.0;
    for (int i = 0; i < n1; ++i) {
        const cplx s1(c.sig[0], -c.T[0] + h1 * i);
        cplx row = 0.0;
        for (int l = 0; l < n2; ++l) {
            const cplx s2(c.sig[1], -c.T[1] + h2 * l);
            cplx lnJ = 0.0;
            for (const auto& f : r.num_joint)
                lnJ += ln_gamma_complex(f.offset + f.c[0] * s1 + f.c[1] * s2);
            for (const auto& f : r.den_joint)
                lnJ -= ln_gamma_complex(f.offset + f.c[0] * s1 + f.c[1] * s2);
            row += std::exp(a1[i].ln + a2[l].ln + lnJ) * a1[i].poly * a2[l].poly;
        }
        total += row;
    }
    return total.real() * h1 * h2 / (4.0 * kPi * kPi);
}

double accumulate_1d(const Resolved& r, const AxisSeries& ser, const Contour& c, int n) {
    const auto a = axis_cache(r, ser, 0, c, n);
    const double h = 2.0 * c.T[0] / (n - 1);
    cplx total = 0.0;
    for (int i = 0; i < n; ++i) total += std::exp(a[i].ln) * a[i].poly;
    return total.real() * h / (2.0 * kPi);
}

FoxHResult quad_eval(const Resolved& r, const AxisSeries& ser, std::array<double, 2> x,
                     const ContourPolicy& pol) {
    Contour c;
    c.lnxi = {cplx(0.0), cplx(0.0)};
    for (int v = 0; v < r.arity; ++v) {
        c.lnxi[v] = log_arg(x[v], r.sign[v]);
        if (decay_margin(r, ser, v, c.lnxi[v]) <= 0.02)
            throw DivergentKernelError("fox_h: argument outside convergence sector");
    }
    c.sig = choose_contours(r, ser, pol);
    const auto plists = pole_lists(r, ser);
    std::array<int, 2> n{1, 1};
    for (int v = 0; v < r.arity; ++v) {
        c.T[v] = pick_halflength(r, ser, v, c.sig, c.lnxi[v]);
        n[v] = initial_nodes(c.lnxi[v], c.T[v], axis_pole_dist(plists[v], c.sig[v]), pol);
    }

    FoxHResult res;
    double prev = 0.0;
    bool have_prev = false;
    for (;;) {
        const long cost = (r.arity == 2) ? long(n[0]) * long(n[1]) : long(n[0]);
        if (have_prev && res.evals + cost > pol.max_evals) break;
        const double val = (r.arity == 2) ? accumulate_2d(r, ser, c, n[0], n[1])
                                          : accumulate_1d(r, ser, c, n[0]);
        res.evals += cost;
        if (have_prev) {
            res.err = std::abs(val - prev);
            prev = val;
            if (res.err <= pol.rel_tol * std::max(std::abs(val), 1e-300)) break;
        } else {
            prev = val;
            res.err = std::abs(val);
            have_prev = true;
        }
        for (int v = 0; v < r.arity; ++v) n[v] = 2 * n[v] - 1;
        if (res.evals >= pol.max_evals) break;
    }
    res.value = prev;
    return res;
}

struct PoleRef {
    double p;      // pole location on the axis
    int factor;    // index into num[v]
    int n;         // pole order index of that factor
};

// Enumerate the right family of axis v in ascending order.
std::vector<PoleRef> right_poles(const std::vector<AxisFactor>& num, int count) {
    std::vector<PoleRef> out;
    for (int k = 0; k < int(num.size()); ++k) {
        const auto& f = num[k];
        if (f.coeff >= 0.0) continue;
        for (int n = 0; n < count; ++n) out.push_back({-(f.offset + n) / f.coeff, k, n});
    }
    std::sort(out.begin(), out.end(), [](const PoleRef& a, const PoleRef& b) { return a.p < b.p; });
    if (int(out.size()) > count) out.resize(count);
    return out;
}

bool has_collision(const std::vector<PoleRef>& poles) {
    for (std::size_t i = 1; i < poles.size(); ++i)
        if (poles[i].p - poles[i - 1].p < 1e-8) return true;
    return false;
}

FoxHResult residue_eval(const Resolved& r0, const AxisSeries& ser, int v,
                        std::array<double, 2> x, const ContourPolicy& pol) {
    FoxHResult res;

    // One pass over the right family of a (possibly offset-shifted) spec.
    auto sum_poles = [&](const Resolved& r) {
        const auto poles = right_poles(r.num[v], 40);
        if (has_collision(poles))
            throw PoleSeparationError("fox_h: residue poles collide after perturbation");
        const double lnxi = log_arg(x[v], r.sign[v]).real();  // x > 0 guaranteed
        double total = 0.0, carry = 0.0, last = kInf;
        int tiny_streak = 0;
        for (const auto& pr : poles) {
            const auto& f = r.num[v][pr.factor];
            double lnmag = -std::lgamma(pr.n + 1.0) - std::log(std::abs(f.coeff)) + pr.p * lnxi;
            int sgn = ((pr.n & 1) ? -1 : 1) * (f.coeff > 0.0 ? 1 : -1);
            for (int k = 0; k < int(r.num[v].size()); ++k) {
                if (k == pr.factor) continue;
                int s = 1;
                lnmag += lgamma_signed(r.num[v][k].offset + r.num[v][k].coeff * pr.p, &s);
                sgn *= s;
            }
            for (const auto& d : r.den[v]) {
                int s = 1;
                lnmag -= lgamma_signed(d.offset + d.coeff * pr.p, &s);
                sgn *= s;
            }
            double term = sgn * std::exp(lnmag);

            if (r.arity == 2) {
                const int o = 1 - v;
                FoxHSpec inner;
                inner.arity = 1;
                for (const auto& g : r.num[o])
                    inner.num_var[0].push_back({g.offset, {g.coeff, 0.0}});
                for (const auto& g : r.den[o])
                    inner.den_var[0].push_back({g.offset, {g.coeff, 0.0}});
                for (const auto& g : r.num_joint)
                    inner.num_var[0].push_back({g.offset + g.c[v] * pr.p, {g.c[o], 0.0}});
                for (const auto& g : r.den_joint)
                    inner.den_var[0].push_back({g.offset + g.c[v] * pr.p, {g.c[o], 0.0}});
                inner.arg_sign[0] = r.sign[o];
                AxisSeries inner_ser;
                if (ser.var == o) {
                    inner_ser = ser;
                    inner_ser.var = 0;
                }
                ContourPolicy pol2 = pol;
                pol2.abscissa = {pol.abscissa[o], std::numeric_limits<double>::quiet_NaN()};
                const Resolved ri = resolve(inner);
                const FoxHResult fr = quad_eval(ri, inner_ser, {x[o], 0.0}, pol2);
                res.evals += fr.evals;
                term *= fr.value;
            }

            // Kahan update; series of residues alternates but decays geometrically.
            const double y = term - carry;
            const double t = total + y;
            carry = (t - total) - y;
            total = t;
            last = std::abs(term);
            if (last <= 1e-17 * (std::abs(total) + 1e-300)) {
                if (++tiny_streak >= 2) break;
            } else {
                tiny_streak = 0;
            }
        }
        res.err = std::isfinite(last) ? last : 0.0;
        return -total;  // closing the contour rightward encircles clockwise
    };

    if (!has_collision(right_poles(r0.num[v], 40))) {
        res.value = sum_poles(r0);
        return res;
    }
    // Coinciding poles of distinct factors: split them by a tiny offset and
    // average the +/- shifts, cancelling the O(shift * ln x) bias that a
    // one-sided split would leave behind.
    double vsum = 0.0;
    for (const double side : {1.0, -1.0}) {
        Resolved r = r0;
        for (int k = 0; k < int(r.num[v].size()); ++k)
            if (r.num[v][k].coeff < 0.0) r.num[v][k].offset += side * 3.7e-7 * (k + 1);
        vsum += sum_poles(r);
    }
    res.value = 0.5 * vsum;
    return res;
}

FoxHResult dispatch(const Resolved& r, const AxisSeries& ser, std::array<double, 2> x,
                    const ContourPolicy& pol) {
    // Small-argument path: the kernel's power series (right-family residues)
    // outconverges quadrature once x^p drops below any contour resolution.
    int best = -1;
    double best_xi = pol.residue_threshold;
    for (int v = 0; v < r.arity; ++v) {
        if (x[v] <= 0.0 || ser.var == v) continue;
        const double xi = (r.sign[v] > 0) ? x[v] : 1.0 / x[v];
        if (xi < best_xi && axis_families(r.num[v]).has_right) {
            best = v;
            best_xi = xi;
        }
    }
    if (best >= 0) return residue_eval(r, ser, best, x, pol);
    return quad_eval(r, ser, x, pol);
}

}  // namespace

FoxHResult fox_h_bivariate(const FoxHSpec& spec, double x1, double x2,
                           const ContourPolicy& policy) {
    const Resolved r = resolve(spec);
    if (r.arity != 2) throw std::invalid_argument("fox_h_bivariate: arity must be 2");
    return dispatch(r, AxisSeries{}, {x1, x2}, policy);
}

FoxHResult fox_h_bivariate_series(const FoxHSpec& spec, const AxisSeries& series, double x1,
                                  double x2, const ContourPolicy& policy) {
    const Resolved r = resolve(spec);
    if (r.arity != 2) throw std::invalid_argument("fox_h_bivariate_series: arity must be 2");
    if (series.var < 0 || series.var > 1 || series.weights.empty())
        throw std::invalid_argument("fox_h_bivariate_series: bad series");
    return dispatch(r, series, {x1, x2}, policy);
}

FoxHResult fox_h_univariate(const FoxHSpec& spec, double x, const ContourPolicy& policy) {
    const Resolved r = resolve(spec);
    if (r.arity != 1) throw std::invalid_argument("fox_h_univariate: arity must be 1");
    return dispatch(r, AxisSeries{}, {x, 0.0}, policy);
}

FoxHTable::FoxHTable(const FoxHSpec& spec, const AxisSeries& series,
                     std::array<double, 2> x1_range, std::array<double, 2> x2_range,
                     const ContourPolicy& policy) {
    const Resolved r = resolve(spec);
    if (r.arity != 2) throw std::invalid_argument("FoxHTable: arity must be 2");
    const std::array<std::array<double, 2>, 2> xr{x1_range, x2_range};
    for (int v = 0; v < 2; ++v)
        if (!(xr[v][0] > 0.0) || !(xr[v][1] >= xr[v][0]))
            throw std::invalid_argument("FoxHTable: ranges must be positive and ordered");
    sign_ = r.sign;

    Contour c;
    std::array<double, 2> xworst;  // strongest oscillation within the range
    for (int v = 0; v < 2; ++v) {
        const double llo = std::abs(std::log(xr[v][0]));
        const double lhi = std::abs(std::log(xr[v][1]));
        xworst[v] = (llo > lhi) ? xr[v][0] : xr[v][1];
        c.lnxi[v] = log_arg(xworst[v], r.sign[v]);
        if (decay_margin(r, series, v, c.lnxi[v]) <= 0.02)
            throw DivergentKernelError("FoxHTable: range outside convergence sector");
    }
    c.sig = choose_contours(r, series, policy);
    const auto plists = pole_lists(r, series);
    std::array<int, 2> n;
    for (int v = 0; v < 2; ++v) {
        c.T[v] = pick_halflength(r, series, v, c.sig, c.lnxi[v]);
        n[v] = initial_nodes(c.lnxi[v], c.T[v], axis_pole_dist(plists[v], c.sig[v]), policy);
    }

    // Validate the node count against one doubling at the worst-case corner,
    // then freeze.
    for (int round = 0; round < 3; ++round) {
        const double v0 = accumulate_2d(r, series, c, n[0], n[1]);
        const double v1 = accumulate_2d(r, series, c, 2 * n[0] - 1, 2 * n[1] - 1);
        build_evals_ += long(n[0]) * n[1] + long(2 * n[0] - 1) * (2 * n[1] - 1);
        if (std::abs(v1 - v0) <= policy.rel_tol * std::max(std::abs(v1), 1e-300)) break;
        n = {2 * n[0] - 1, 2 * n[1] - 1};
        if (long(n[0]) * long(n[1]) * 4 > policy.max_evals) break;
    }

    const auto a1 = axis_cache(r, series, 0, c, n[0]);
    const auto a2 = axis_cache(r, series, 1, c, n[1]);
    const double h1 = 2.0 * c.T[0] / (n[0] - 1);
    const double h2 = 2.0 * c.T[1] / (n[1] - 1);
    s1_.resize(n[0]);
    s2_.resize(n[1]);
    for (int i = 0; i < n[0]; ++i) s1_[i] = cplx(c.sig[0], -c.T[0] + h1 * i);
    for (int l = 0; l < n[1]; ++l) s2_[l] = cplx(c.sig[1], -c.T[1] + h2 * l);
    table_.assign(std::size_t(n[0]) * n[1], cplx(0.0));
    const double scale = h1 * h2 / (4.0 * kPi * kPi);
    for (int i = 0; i < n[0]; ++i) {
        // strip the build argument's power; eval() applies its own
        const cplx base1 = a1[i].ln - s1_[i] * c.lnxi[0];
        for (int l = 0; l < n[1]; ++l) {
            const cplx base2 = a2[l].ln - s2_[l] * c.lnxi[1];
            cplx lnJ = 0.0;
            for (const auto& f : r.num_joint)
                lnJ += ln_gamma_complex(f.offset + f.c[0] * s1_[i] + f.c[1] * s2_[l]);
            for (const auto& f : r.den_joint)
                lnJ -= ln_gamma_complex(f.offset + f.c[0] * s1_[i] + f.c[1] * s2_[l]);
            table_[std::size_t(i) * n[1] + l] =
                scale * std::exp(base1 + base2 + lnJ) * a1[i].poly * a2[l].poly;
        }
    }
    build_evals_ += long(n[0]) * n[1];
}

double FoxHTable::eval(double x1, double x2) const {
    const cplx l1 = log_arg(x1, sign_[0]);
    const cplx l2 = log_arg(x2, sign_[1]);
    const std::size_t n1 = s1_.size(), n2 = s2_.size();
    std::vector<cplx> v(n2);
    for (std::size_t l = 0; l < n2; ++l) v[l] = std::exp(s2_[l] * l2);
    cplx total = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        cplx row = 0.0;
        const cplx* k = table_.data() + i * n2;
        for (std::size_t l = 0; l < n2; ++l) row += k[l] * v[l];
        total += std::exp(s1_[i] * l1) * row;
    }
    return total.real();
}

}  // namespace covertlink::foxh
