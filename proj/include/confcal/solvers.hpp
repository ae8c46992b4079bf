#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confcal/deform.hpp"
#include "confcal/errors.hpp"
#include "confcal/operators.hpp"

namespace confcal {

/// A real function sampled on a strictly increasing grid.
class GridFunction {
public:
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return nodes_.size(); }

    /// Piecewise cubic interpolant (4-point Lagrange on the nearest nodes),
    /// packaged as a RealFunction so the numeric operators can act on it.
    /// The closure copies the grid and stays valid after *this is gone.
    RealFunction cubic_interpolant() const;

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

enum class EventKind { kBlowUp, kZeroCrossing };

/// Why an integration stopped early. `location` is the last retained
/// abscissa (x or t); the partial solution runs up to there.
struct SolverEvent {
    EventKind kind;
    double location = 0.0;
    std::string detail;
};

const char* event_kind_name(EventKind kind);

struct EigenSolution {
    GridFunction grid;
    std::optional<SolverEvent> event;
};

/// Solve x^{1-alpha} y' = lambda y on [x0, x_end], y(x0) = y0, x0 > 0.
/// The equation is linear in u = x^alpha/alpha, so each step advances by the
/// exact propagator exp(lambda du); the singular point x = 0 never enters.
GridFunction solve_cd_eigen(DeformParam p, double lambda, double x0, double y0, double x_end,
                            int steps);

/// Solve F' = lambda F^{2-alpha} from x = 0 with F(0) = F0 > 0 by classical
/// fixed-step RK4. Stops with a blow-up event strictly before the support
/// boundary when the solution diverges (alpha < 1, lambda > 0) or reaches 0.
EigenSolution solve_dcd_eigen(DeformParam p, double lambda, double f0, double x_end, int steps);

struct OscillatorConfig {
    DeformParam alpha;
    double omega = 1.0;   // deformed angular frequency, > 0
    double x0 = 1.0;      // > 0: keeps clear of the x = 0 singularity
    double v0 = 0.0;
    double t_end = 1.0;   // > 0
    int steps = 256;      // >= 16

    void validate() const;
};

/// Timestamped state of the deformed oscillator with its conserved energy.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> energy;
    std::optional<SolverEvent> event;

    std::size_t size() const { return t.size(); }
};

/// Energy of the deformed oscillator, E = (x^{alpha-1} v)^2/2 + omega^2 x^2/2.
/// Constant along exact trajectories of the deformed equation.
double oscillator_energy(DeformParam p, double omega, double x, double v);

/// Integrate x'' = -omega^2 x^{3-2 alpha} - (alpha-1) v^2 / x with RK4.
/// Stops with a zero-crossing event once x <= x0 * 1e-6; throws StepError if
/// the state turns non-finite away from the x -> 0 boundary.
Trajectory solve_oscillator(const OscillatorConfig& config);

enum class EigenEquation { kCd, kDcd };

/// Max defining-equation residual over interior nodes, centred differences,
/// relative to the local solution scale.
double residual(const GridFunction& g, EigenEquation eq, DeformParam p, double lambda);

/// Same for an oscillator trajectory: checks both x' = v and the
/// acceleration law at interior nodes.
double residual(const Trajectory& tr, DeformParam p, double omega);

}  // namespace confcal
