#include "recmeth/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "recmeth/errors.hpp"

namespace recmeth {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "line fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0, "line fit with zero variance in x");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return f;
}

std::string to_string(Growth g) {
    switch (g) {
        case Growth::Bounded: return "bounded";
        case Growth::Divergent: return "divergent";
        case Growth::Indeterminate: return "indeterminate";
    }
    return "?";
}

IncrementReport classify_increments(const std::vector<double>& d, int first_j) {
    IncrementReport r;
    for (double v : d) r.total += v;
    if (d.size() < 6) return r;

    // zero floor relative to the running total at that checkpoint
    std::vector<double> floor(d.size());
    double running = 0, scale = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        running += d[i];
        scale = std::max({scale, std::fabs(running), std::fabs(d[i])});
        floor[i] = 1e-12 * std::max(scale, 1e-300);
    }
    const std::size_t start = d.size() / 2;

    int pos = 0, neg = 0;
    std::vector<double> lj, ld;
    for (std::size_t i = start; i < d.size(); ++i) {
        if (d[i] > floor[i]) ++pos;
        if (d[i] < -floor[i]) ++neg;
        if (std::fabs(d[i]) > floor[i]) {
            lj.push_back(std::log(static_cast<double>(first_j) + static_cast<double>(i)));
            ld.push_back(std::log(std::fabs(d[i])));
        }
    }
    const std::size_t tail = d.size() - start;
    r.sign = pos == static_cast<int>(tail) ? 1 : (neg == static_cast<int>(tail) ? -1 : 0);
    if (lj.size() < 2) {
        r.growth = Growth::Bounded;  // increments vanish at rounding level
        r.decay_power = INFINITY;
        return r;
    }
    r.decay_power = -fit_line(lj, ld).slope;
    if (r.decay_power >= 1.3)
        r.growth = Growth::Bounded;
    else if (r.decay_power <= 1.05 && r.sign != 0 && tail >= 4)
        r.growth = Growth::Divergent;
    return r;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace recmeth
