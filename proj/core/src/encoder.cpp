// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nfri/errors.hpp"

namespace nfri {
namespace {

constexpr std::size_t kEventCap = 1000000;

// Last point between `in` and `out` whose value still rounds to the level;
// g(in) == 0 and g(out) != 0, in either order.
double plateau_edge(const Evaluable& f, double level, double in, double out) {
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (in + out);
        if (m == in || m == out) break;
        if (f(m) - level == 0.0) {
            in = m;
        } else {
            out = m;
        }
    }
    return in;
}

// Around a tangential touch, f rounds to the level over a plateau of width
// ~ sqrt(eps / |f''|); the analytic crossing is its center. `inside` is a
// known plateau point, g(lo_limit) != 0, and the right edge may be sought
// up to hi_limit. A plateau running past hi_limit degenerates to a flat
// stretch at the level, whose first point is the crossing.
double plateau_center(const Evaluable& f, double level, double inside,
                      double lo_limit, double hi_limit, double step) {
    double left = lo_limit;
    for (double s = step; inside - s > lo_limit; s *= 2.0) {
        if (f(inside - s) - level != 0.0) {
            left = inside - s;
            break;
        }
    }
    const double l = plateau_edge(f, level, inside, left);

    double right = hi_limit;
    bool bracketed = false;
    for (double s = step; inside + s < hi_limit; s *= 2.0) {
        if (f(inside + s) - level != 0.0) {
            right = inside + s;
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        if (f(hi_limit) - level == 0.0) return l;
        right = hi_limit;
    }
    const double r = plateau_edge(f, level, inside, right);
    return 0.5 * (l + r);
}

// Root of f(t) = level inside [a, b], assuming (f(a) - level) and
// (f(b) - level) do not share a sign. Transversal crossings run to
// fixed-point precision; tangential touches resolve to the center of the
// floating-point plateau, which may reach slightly past b.
double bisect_level(const Evaluable& f, double a, double b, double level,
                    double fa) {
    double ga = fa - level;
    if (ga == 0.0) return a;
    const double cap = b + (b - a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double gm = f(m) - level;
        if (gm == 0.0) return plateau_center(f, level, m, a, cap, b - a);
        if ((ga < 0.0) == (gm < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return b;
}

double golden_polish(const Evaluable& f, double a, double b, double sign) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = sign * f(c);
    double fd = sign * f(d);
    for (int i = 0; i < 80 && b - a > 0.0; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = sign * f(d);
        }
    }
    return sign * std::max(fc, fd);
}

Evaluable wrap(const FilteredSignal& signal) {
    return [&signal](double t) { return signal(t); };
}

}  // namespace

std::vector<double> EventStream::times() const {
    std::vector<double> t(events.size());
    std::transform(events.begin(), events.end(), t.begin(),
                   [](const Event& e) { return e.time; });
    return t;
}

Eigen::VectorXd EventStream::t_transform() const {
    Eigen::VectorXd values(events.size());
    double level = start_value;
    for (std::size_t m = 0; m < events.size(); ++m) {
        level += threshold * events[m].polarity;
        values[static_cast<Eigen::Index>(m)] = level;
    }
    return values;
}

double EventStream::sampling_density() const {
    if (events.size() < 2) {
        throw TooFewEvents("sampling_density: needs at least two events");
    }
    double gap = 0.0;
    double prev = start;
    for (const Event& e : events) {
        gap = std::max(gap, e.time - prev);
        prev = e.time;
    }
    return gap;
}

EventStream encode(const Evaluable& signal, double period,
                   const EncoderConfig& config) {
    if (!(period > 0.0)) {
        throw std::invalid_argument("encode: period must be positive");
    }
    if (!(config.threshold > 0.0)) {
        throw std::invalid_argument("encode: threshold must be positive");
    }
    if (config.grid_density < 8) {
        throw std::invalid_argument("encode: grid density must be at least 8");
    }

    const double T = period;
    const double C = config.threshold;
    const double t0 = config.start;
    const double t_end = t0 + T;
    const double cutoff = t_end - 1e-12 * T;
    const double h = T / config.grid_density;

    EventStream out;
    out.threshold = C;
    out.start = t0;
    out.start_value = signal(t0);
    out.period = T;

    double f_ref = out.start_value;
    double pos = t0;
    double f_pos = out.start_value;
    int cell = 1;

    while (pos < cutoff && cell <= config.grid_density) {
        const double right = std::min(t0 + cell * h, t_end);
        if (right <= pos) {
            ++cell;
            continue;
        }
        const double f_right = signal(right);

        const double up = f_ref + C;
        const double dn = f_ref - C;
        const bool hit_up = (f_pos - up) * (f_right - up) <= 0.0;
        const bool hit_dn = (f_pos - dn) * (f_right - dn) <= 0.0;
        if (!hit_up && !hit_dn) {
            pos = right;
            f_pos = f_right;
            ++cell;
            continue;
        }

        double t_event = t_end;
        int polarity = 0;
        if (hit_up) {
            t_event = bisect_level(signal, pos, right, up, f_pos);
            polarity = 1;
        }
        if (hit_dn) {
            const double t_dn = bisect_level(signal, pos, right, dn, f_pos);
            if (t_dn < t_event) {
                t_event = t_dn;
                polarity = -1;
            }
        }
        if (t_event >= cutoff) break;

        out.events.push_back(Event{t_event, polarity});
        if (out.events.size() > kEventCap) {
            throw NumericalInconsistency("encode: event count exceeds cap");
        }
        f_ref += polarity * C;
        pos = t_event;
        f_pos = signal(t_event);
    }
    return out;
}

EventStream encode(const FilteredSignal& signal, const EncoderConfig& config) {
    return encode(wrap(signal), signal.period(), config);
}

SignalRange scan_range(const Evaluable& signal, double period, int grid_density) {
    if (!(period > 0.0)) {
        throw std::invalid_argument("scan_range: period must be positive");
    }
    if (grid_density < 8) {
        throw std::invalid_argument("scan_range: grid density must be at least 8");
    }
    const double h = period / grid_density;
    std::vector<double> v(static_cast<std::size_t>(grid_density));
    for (int i = 0; i < grid_density; ++i) {
        v[static_cast<std::size_t>(i)] = signal(i * h);
    }

    SignalRange range{v[0], v[0]};
    for (int i = 0; i < grid_density; ++i) {
        const double prev = v[static_cast<std::size_t>((i + grid_density - 1) % grid_density)];
        const double next = v[static_cast<std::size_t>((i + 1) % grid_density)];
        const double here = v[static_cast<std::size_t>(i)];
        range.min = std::min(range.min, here);
        range.max = std::max(range.max, here);
        if (here > prev && here >= next) {
            range.max = std::max(range.max,
                                 golden_polish(signal, (i - 1) * h, (i + 1) * h, 1.0));
        }
        if (here < prev && here <= next) {
            range.min = std::min(range.min,
                                 golden_polish(signal, (i - 1) * h, (i + 1) * h, -1.0));
        }
    }
    return range;
}

SignalRange scan_range(const FilteredSignal& signal, int grid_density) {
    return scan_range(wrap(signal), signal.period(), grid_density);
}

double max_threshold_for(const Evaluable& signal, double period, int min_events,
                         int grid_density) {
    if (min_events < 1) {
        throw std::invalid_argument("max_threshold_for: min_events must be >= 1");
    }
    const SignalRange range = scan_range(signal, period, grid_density);
    if (range.span() < 1e-12) {
        throw DegenerateSignal("max_threshold_for: signal range is numerically zero");
    }
    return range.span() / min_events;
}

double max_threshold_for(const FilteredSignal& signal, int min_events,
                         int grid_density) {
    return max_threshold_for(wrap(signal), signal.period(), min_events, grid_density);
}

double critical_threshold(const Evaluable& signal, double period,
                          double innovations_per_period, int grid_density) {
    if (!(innovations_per_period > 0.0)) {
        throw std::invalid_argument(
            "critical_threshold: innovation count must be positive");
    }
    const SignalRange range = scan_range(signal, period, grid_density);
    if (range.span() < 1e-12) {
        throw DegenerateSignal("critical_threshold: signal range is numerically zero");
    }
    return range.span() / (innovations_per_period + 1.0);
}

double critical_threshold(const FilteredSignal& signal,
                          double innovations_per_period, int grid_density) {
    return critical_threshold(wrap(signal), signal.period(), innovations_per_period,
                              grid_density);
}

}  // namespace nfri
