#include "ncheat/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ncheat {

namespace {

struct LogSeries {
    std::vector<double> t;
    std::vector<double> logn;
};

LogSeries usable_samples(const DecayTrace& trace, FitWindow window) {
    LogSeries out;
    for (const TraceSample& s : trace.samples) {
        if (s.t < window.t_begin || s.t > window.t_end)
            continue;
        if (!(s.norm_phys > kNormFloor))
            continue;  // drop before taking logs
        out.t.push_back(s.t);
        out.logn.push_back(std::log(s.norm_phys));
    }
    if (out.t.size() < 10)
        throw std::invalid_argument("fit: fewer than 10 usable samples in window");
    return out;
}

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    Line ln;
    if (sxx == 0.0)
        throw std::invalid_argument("fit: degenerate abscissa");
    ln.slope = sxy / sxx;
    ln.intercept = my - ln.slope * mx;
    ln.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - (syy - ln.slope * sxy) / syy, 0.0, 1.0);
    return ln;
}

Line stretched_line(const LogSeries& s, double beta) {
    std::vector<double> xs(s.t.size());
    for (std::size_t i = 0; i < s.t.size(); ++i)
        xs[i] = std::pow(s.t[i], beta);
    return least_squares(xs, s.logn);
}

constexpr double kBetaLo = 0.05;
constexpr double kBetaHi = 0.95;
constexpr double kTieBand = 0.005;

} // namespace

ExpFit fit_exponential(const DecayTrace& trace, FitWindow window) {
    const LogSeries s = usable_samples(trace, window);
    const Line ln = least_squares(s.t, s.logn);
    return ExpFit{-ln.slope, ln.r_squared};
}

PolyFit fit_polynomial(const DecayTrace& trace, FitWindow window, double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("fit_polynomial: k must be positive");
    const LogSeries s = usable_samples(trace, window);
    std::vector<double> xs(s.t.size());
    for (std::size_t i = 0; i < s.t.size(); ++i)
        xs[i] = std::log1p(k * s.t[i]);
    const Line ln = least_squares(xs, s.logn);
    return PolyFit{-ln.slope, ln.r_squared};
}

StretchedFit fit_stretched(const DecayTrace& trace, FitWindow window,
                           std::optional<double> beta_hint) {
    const LogSeries s = usable_samples(trace, window);
    if (beta_hint) {
        if (!(*beta_hint > 0.0) || !(*beta_hint < 1.0))
            throw std::invalid_argument("fit_stretched: beta hint must lie in (0,1)");
        const Line ln = stretched_line(s, *beta_hint);
        return StretchedFit{-ln.slope, *beta_hint, ln.r_squared};
    }
    // golden-section search maximizing R^2 over beta
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = kBetaLo, b = kBetaHi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = stretched_line(s, c).r_squared;
    double fd = stretched_line(s, d).r_squared;
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = stretched_line(s, c).r_squared;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = stretched_line(s, d).r_squared;
        }
    }
    const double beta = 0.5 * (a + b);
    const Line ln = stretched_line(s, beta);
    return StretchedFit{-ln.slope, beta, ln.r_squared};
}

DecayFit classify(const DecayTrace& trace, double k, double /*alpha*/) {
    if (trace.samples.size() < 10)
        throw std::invalid_argument("classify: too few samples");
    const double t_end = trace.samples.back().t;
    const FitWindow window{t_end / 5.0, t_end};

    // resample at 200 log-spaced times, nearest available sample each
    DecayTrace view;
    view.controlled = trace.controlled;
    const double lo = std::log(std::max(window.t_begin, 1e-9));
    const double hi = std::log(window.t_end);
    std::size_t cursor = 0;
    double last_t = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double target = std::exp(lo + (hi - lo) * i / 199.0);
        while (cursor + 1 < trace.samples.size()
               && std::abs(trace.samples[cursor + 1].t - target)
                      <= std::abs(trace.samples[cursor].t - target))
            ++cursor;
        const TraceSample& s = trace.samples[cursor];
        if (s.t != last_t) {
            view.samples.push_back(s);
            last_t = s.t;
        }
    }
    const FitWindow span{view.samples.front().t, view.samples.back().t};

    const ExpFit ef = fit_exponential(view, span);
    const PolyFit pf = fit_polynomial(view, span, k);
    const StretchedFit sf = fit_stretched(view, span);

    // a boundary-pegged beta means the stretched model collapsed onto a
    // neighboring family; such a fit carries no evidence of its own
    const bool stretched_ok = sf.beta > kBetaLo + 0.01 && sf.beta < kBetaHi - 0.01;

    double best = std::max(ef.r_squared, pf.r_squared);
    if (stretched_ok)
        best = std::max(best, sf.r_squared);

    DecayFit fit;
    fit.window = span;
    if (best < 0.9) {
        fit.regime = Regime::Undetermined;
        fit.r_squared = best;
        return fit;
    }
    if (best - ef.r_squared < kTieBand) {
        fit.regime = Regime::Exponential;
        fit.rate = ef.rate;
        fit.r_squared = ef.r_squared;
    } else if (stretched_ok && best - sf.r_squared < kTieBand) {
        fit.regime = Regime::AnalogousExponential;
        fit.rate = sf.rate;
        fit.stretch_exponent = sf.beta;
        fit.r_squared = sf.r_squared;
    } else {
        fit.regime = Regime::Polynomial;
        fit.rate = pf.gamma;
        fit.r_squared = pf.r_squared;
    }
    return fit;
}

} // namespace ncheat
