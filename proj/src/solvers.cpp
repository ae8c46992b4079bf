#include "confcal/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace confcal {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool exact_integer(double v) {
    return std::isfinite(v) && v == std::rint(v) && std::abs(v) < 9.007199254740992e15;
}

// pow that reports domain violations as NaN so they can flow through RK
// stages and be classified after the step.
double pow_or_nan(double base, double exponent) {
    if (base > 0.0 || exact_integer(exponent)) return std::pow(base, exponent);
    if (base == 0.0 && exponent > 0.0) return 0.0;
    return std::numeric_limits<double>::quiet_NaN();
}

constexpr double kBlowUpThreshold = 1e12;

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size()) {
        throw DomainError("grid nodes and values must have equal length");
    }
    if (nodes_.empty()) throw DomainError("grid must not be empty");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i])) {
            throw DomainError("grid entries must be finite");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw DomainError("grid nodes must be strictly increasing");
        }
    }
}

RealFunction GridFunction::cubic_interpolant() const {
    auto xs = nodes_;
    auto ys = values_;
    return RealFunction([xs = std::move(xs), ys = std::move(ys)](double x) {
        const std::size_t n = xs.size();
        if (n == 1) return ys[0];
        // Index of the first node > x, clamped so a 4-point window fits.
        std::size_t j = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
        std::size_t lo = (j >= 2) ? j - 2 : 0;
        const std::size_t width = std::min<std::size_t>(4, n);
        if (lo + width > n) lo = n - width;
        double acc = 0.0;
        for (std::size_t i = lo; i < lo + width; ++i) {
            double w = 1.0;
            for (std::size_t k = lo; k < lo + width; ++k) {
                if (k != i) w *= (x - xs[k]) / (xs[i] - xs[k]);
            }
            acc += w * ys[i];
        }
        return acc;
    });
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::kBlowUp: return "blow_up";
        case EventKind::kZeroCrossing: return "zero_crossing";
    }
    return "?";
}

GridFunction solve_cd_eigen(DeformParam p, double lambda, double x0, double y0, double x_end,
                            int steps) {
    if (x0 <= 0.0) throw DomainError("solve_cd_eigen needs x0 > 0, got " + num(x0));
    if (!(x_end > x0)) throw DomainError("solve_cd_eigen needs x_end > x0");
    if (steps < 1) throw DomainError("solve_cd_eigen needs at least one step");
    if (p.alpha() == 0.0) throw DomainError("solve_cd_eigen needs alpha > 0");

    const double alpha = p.alpha();
    const double h = (x_end - x0) / steps;
    std::vector<double> xs(steps + 1);
    std::vector<double> ys(steps + 1);
    xs[0] = x0;
    ys[0] = y0;
    double u_prev = std::pow(x0, alpha) / alpha;
    for (int i = 1; i <= steps; ++i) {
        const double x = (i == steps) ? x_end : x0 + i * h;
        const double u = std::pow(x, alpha) / alpha;
        const double y = ys[i - 1] * std::exp(lambda * (u - u_prev));
        if (!std::isfinite(y)) {
            throw OverflowError("solve_cd_eigen overflowed at x = " + num(x));
        }
        xs[i] = x;
        ys[i] = y;
        u_prev = u;
    }
    return GridFunction(std::move(xs), std::move(ys));
}

EigenSolution solve_dcd_eigen(DeformParam p, double lambda, double f0, double x_end, int steps) {
    if (!(f0 > 0.0)) throw DomainError("solve_dcd_eigen needs F0 > 0, got " + num(f0));
    if (!(x_end > 0.0)) throw DomainError("solve_dcd_eigen needs x_end > 0");
    if (steps < 1) throw DomainError("solve_dcd_eigen needs at least one step");

    const double expo = 2.0 - p.alpha();
    auto rhs = [lambda, expo](double f) { return lambda * pow_or_nan(f, expo); };

    const double h = x_end / steps;
    std::vector<double> xs{0.0};
    std::vector<double> fs{f0};
    xs.reserve(steps + 1);
    fs.reserve(steps + 1);
    std::optional<SolverEvent> event;
    double f = f0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = rhs(f);
        const double k2 = rhs(f + 0.5 * h * k1);
        const double k3 = rhs(f + 0.5 * h * k2);
        const double k4 = rhs(f + h * k3);
        const double f_next = f + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // Growth beyond 1.5x per step means the grid can no longer resolve
        // the solution; for the finite-time blow-up family this trips
        // strictly before the singular point.
        if (!std::isfinite(f_next) || f_next <= 0.0 || std::abs(f_next) > kBlowUpThreshold ||
            f_next > 1.5 * f) {
            event = SolverEvent{EventKind::kBlowUp, xs.back(),
                                "solution left (0, " + num(kBlowUpThreshold) +
                                    ") or outgrew the grid while stepping past x = " +
                                    num(xs.back())};
            break;
        }
        f = f_next;
        xs.push_back((i + 1 == steps) ? x_end : (i + 1) * h);
        fs.push_back(f);
    }
    return EigenSolution{GridFunction(std::move(xs), std::move(fs)), std::move(event)};
}

void OscillatorConfig::validate() const {
    if (!(omega > 0.0)) throw DomainError("oscillator needs omega > 0");
    if (!(x0 > 0.0)) throw DomainError("oscillator needs x0 > 0");
    if (!(t_end > 0.0)) throw DomainError("oscillator needs t_end > 0");
    if (steps < 16) throw DomainError("oscillator needs at least 16 steps");
}

double oscillator_energy(DeformParam p, double omega, double x, double v) {
    const double momentum = pow_or_nan(x, p.alpha() - 1.0) * v;
    return 0.5 * momentum * momentum + 0.5 * omega * omega * x * x;
}

Trajectory solve_oscillator(const OscillatorConfig& config) {
    config.validate();
    const double alpha = config.alpha.alpha();
    const double w2 = config.omega * config.omega;
    const double floor = config.x0 * 1e-6;

    bool stage_hit_boundary = false;
    auto accel = [&](double x, double v) {
        if (x <= floor) {
            stage_hit_boundary = true;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return -w2 * pow_or_nan(x, 3.0 - 2.0 * alpha) - (alpha - 1.0) * v * v / x;
    };

    const double h = config.t_end / config.steps;
    Trajectory tr;
    tr.t.reserve(config.steps + 1);
    tr.x.reserve(config.steps + 1);
    tr.v.reserve(config.steps + 1);
    tr.energy.reserve(config.steps + 1);

    double x = config.x0;
    double v = config.v0;
    tr.t.push_back(0.0);
    tr.x.push_back(x);
    tr.v.push_back(v);
    tr.energy.push_back(oscillator_energy(config.alpha, config.omega, x, v));

    for (int i = 0; i < config.steps; ++i) {
        stage_hit_boundary = false;
        const double ax1 = v;
        const double av1 = accel(x, v);
        const double ax2 = v + 0.5 * h * av1;
        const double av2 = accel(x + 0.5 * h * ax1, ax2);
        const double ax3 = v + 0.5 * h * av2;
        const double av3 = accel(x + 0.5 * h * ax2, ax3);
        const double ax4 = v + h * av3;
        const double av4 = accel(x + h * ax3, ax4);
        const double x_next = x + h / 6.0 * (ax1 + 2.0 * ax2 + 2.0 * ax3 + ax4);
        const double v_next = v + h / 6.0 * (av1 + 2.0 * av2 + 2.0 * av3 + av4);
        const double t_next = (i + 1 == config.steps) ? config.t_end : (i + 1) * h;

        const bool finite = std::isfinite(x_next) && std::isfinite(v_next);
        if (!finite || x_next <= floor || stage_hit_boundary) {
            if (finite && x_next > floor && stage_hit_boundary) {
                // A stage probed past the boundary but the step survived;
                // accept it and keep going.
            } else if (!finite && !stage_hit_boundary) {
                throw StepError("oscillator state became non-finite at t = " + num(t_next));
            } else {
                tr.event = SolverEvent{EventKind::kZeroCrossing, tr.t.back(),
                                       "x reached the zero boundary near t = " + num(t_next)};
                return tr;
            }
        }
        x = x_next;
        v = v_next;
        tr.t.push_back(t_next);
        tr.x.push_back(x);
        tr.v.push_back(v);
        tr.energy.push_back(oscillator_energy(config.alpha, config.omega, x, v));
    }
    return tr;
}

double residual(const GridFunction& g, EigenEquation eq, DeformParam p, double lambda) {
    const auto& xs = g.nodes();
    const auto& ys = g.values();
    if (g.size() < 3) throw DomainError("residual needs at least 3 nodes");
    const double alpha = p.alpha();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double d = (ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]);
        double lhs = 0.0;
        if (eq == EigenEquation::kCd) {
            if (xs[i] <= 0.0) continue;
            lhs = std::pow(xs[i], 1.0 - alpha) * d;
        } else {
            lhs = pow_or_nan(ys[i], alpha - 1.0) * d;
        }
        const double rhs = lambda * ys[i];
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

double residual(const Trajectory& tr, DeformParam p, double omega) {
    if (tr.size() < 3) throw DomainError("residual needs at least 3 nodes");
    const double alpha = p.alpha();
    const double w2 = omega * omega;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const double dt = tr.t[i + 1] - tr.t[i - 1];
        const double dx = (tr.x[i + 1] - tr.x[i - 1]) / dt;
        const double dv = (tr.v[i + 1] - tr.v[i - 1]) / dt;
        const double a = -w2 * pow_or_nan(tr.x[i], 3.0 - 2.0 * alpha) -
                         (alpha - 1.0) * tr.v[i] * tr.v[i] / tr.x[i];
        // Scales include the amplitude terms so turning points (v ~ 0,
        // a ~ 0) do not inflate the ratio.
        const double kin_scale =
            std::max({std::abs(dx), std::abs(tr.v[i]), omega * std::abs(tr.x[i]), 1e-12});
        const double dyn_scale =
            std::max({std::abs(dv), std::abs(a), w2 * std::abs(tr.x[i]), 1e-12});
        worst = std::max(worst, std::abs(dx - tr.v[i]) / kin_scale);
        worst = std::max(worst, std::abs(dv - a) / dyn_scale);
    }
    return worst;
}

}  // namespace confcal
