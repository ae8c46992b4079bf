// Command-line front end: evaluate expressions, apply the deformed
// derivatives and integrals, run the eigen/oscillator solvers, and run the
// identity verification suite. Emits CSV or JSON for external plotting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confcal/deform.hpp"
#include "confcal/expr.hpp"
#include "confcal/operators.hpp"
#include "confcal/report.hpp"
#include "confcal/solvers.hpp"
#include "confcal/verifier.hpp"

namespace {

struct OutputSpec {
    std::string format = "csv";
    std::string path;  // empty = stdout
    int precision = 17;
};

int emit(const OutputSpec& out, const std::string& text) {
    if (out.path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << out.path << "'\n";
        return 2;
    }
    f << text;
    return 0;
}

confcal::Bindings parse_bindings(const std::vector<std::string>& raw) {
    confcal::Bindings b;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw confcal::DomainError("bad binding '" + item + "', expected name=value");
        }
        try {
            b[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw confcal::DomainError("bad binding value in '" + item + "'");
        }
    }
    return b;
}

confcal::RealFunction function_of(const confcal::Expr& e, const std::string& var,
                                  const confcal::Bindings& extra) {
    return confcal::RealFunction([e, var, extra](double x) {
        confcal::Bindings b = extra;
        b[var] = x;
        return confcal::evaluate(e, b);
    });
}

std::string table_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows, int precision,
                      const std::optional<confcal::SolverEvent>& event) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += confcal::format_real(row[i], precision);
        }
        out += '\n';
    }
    if (event) {
        out += std::string("# event,") + confcal::event_kind_name(event->kind) + "," +
               confcal::format_real(event->location, precision) + '\n';
    }
    return out;
}

std::string table_json(const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows, int precision,
                       const std::optional<confcal::SolverEvent>& event) {
    std::string out = "{\n  \"columns\": [";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out += ", ";
        out += '"' + columns[i] + '"';
    }
    out += "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += "    [";
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            if (i > 0) out += ", ";
            out += confcal::format_real(rows[r][i], precision);
        }
        out += (r + 1 < rows.size()) ? "],\n" : "]\n";
    }
    out += "  ]";
    if (event) {
        out += std::string(",\n  \"event\": {\"kind\": \"") + confcal::event_kind_name(event->kind) +
               "\", \"location\": " + confcal::format_real(event->location, precision) + "}";
    }
    out += "\n}\n";
    return out;
}

std::string report_csv(const confcal::PropertyReport& report, int precision) {
    std::string out = "name,paper_anchor,samples,max_residual,tolerance,passed\n";
    for (const auto& e : report.entries) {
        out += e.name + ',' + e.paper_anchor + ',' + std::to_string(e.samples) + ',' +
               confcal::format_real(e.max_residual, precision) + ',' +
               confcal::format_real(e.tolerance, precision) + ',' + (e.passed ? "true" : "false") +
               '\n';
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformable and dual-conformable calculus toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputSpec out;
    app.add_option("--out", out.path, "write output to a file instead of stdout");
    auto* format_opt =
        app.add_option("--format", out.format, "output format (solve defaults to csv, verify to json)")
            ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--precision", out.precision, "significant digits for numbers")
        ->check(CLI::Range(6, 17));

    // --- eval ---------------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("eval", "parse and evaluate an expression");
    std::string eval_expr;
    std::vector<std::string> eval_binds;
    cmd_eval->add_option("--expr", eval_expr, "expression text")->required();
    cmd_eval->add_option("--bind", eval_binds, "variable binding name=value (repeatable)");

    // --- diff ---------------------------------------------------------------
    auto* cmd_diff = app.add_subcommand("diff", "apply a derivative operator");
    std::string diff_kind = "cd";
    std::string diff_expr;
    std::string diff_var = "x";
    double diff_alpha = 1.0;
    bool diff_symbolic = false;
    bool diff_numeric = false;
    double diff_at = 0.0;
    bool diff_at_set = false;
    cmd_diff->add_option("--kind", diff_kind, "classic, cd, dcd or chen")
        ->check(CLI::IsMember({"classic", "cd", "dcd", "chen"}));
    cmd_diff->add_option("--alpha", diff_alpha, "deformation order");
    cmd_diff->add_option("--expr", diff_expr, "expression text")->required();
    cmd_diff->add_option("--var", diff_var, "differentiation variable");
    cmd_diff->add_flag("--symbolic", diff_symbolic, "print the derivative expression");
    cmd_diff->add_flag("--numeric", diff_numeric, "evaluate the derivative at --at");
    cmd_diff->add_option("--at", diff_at, "evaluation point for --numeric")
        ->each([&](const std::string&) { diff_at_set = true; });

    // --- integrate ----------------------------------------------------------
    auto* cmd_int = app.add_subcommand("integrate", "apply a deformed integral");
    std::string int_kind = "cd";
    std::string int_expr;
    std::string int_var = "x";
    double int_alpha = 1.0;
    double int_from = 0.0;
    double int_to = 1.0;
    double int_h0 = 1.0;
    cmd_int->add_option("--kind", int_kind, "cd, dcd-paper or dcd-strict")
        ->check(CLI::IsMember({"cd", "dcd-paper", "dcd-strict"}));
    cmd_int->add_option("--alpha", int_alpha, "deformation order");
    cmd_int->add_option("--expr", int_expr, "integrand expression")->required();
    cmd_int->add_option("--var", int_var, "integration variable");
    cmd_int->add_option("--from", int_from, "lower limit")->required();
    cmd_int->add_option("--to", int_to, "upper limit")->required();
    cmd_int->add_option("--h0", int_h0, "initial value H(from) for dcd-strict");

    // --- solve --------------------------------------------------------------
    auto* cmd_solve = app.add_subcommand("solve", "integrate one of the model equations");
    cmd_solve->require_subcommand(1);
    double s_alpha = 1.0;
    double s_lambda = 1.0;
    double s_x0 = 0.1;
    double s_y0 = 1.0;
    double s_f0 = 1.0;
    double s_xend = 1.0;
    double s_omega = 1.0;
    double s_osc_x0 = 1.0;
    double s_v0 = 0.0;
    double s_tend = 1.0;
    int s_steps = 512;

    auto* sv_cd = cmd_solve->add_subcommand("cd-eigen", "x^{1-a} y' = lambda y");
    sv_cd->add_option("--alpha", s_alpha, "deformation order");
    sv_cd->add_option("--lambda", s_lambda, "rate");
    sv_cd->add_option("--x0", s_x0, "left endpoint (> 0)");
    sv_cd->add_option("--y0", s_y0, "initial value y(x0)");
    sv_cd->add_option("--x-end", s_xend, "right endpoint")->required();
    sv_cd->add_option("--steps", s_steps, "grid intervals");

    auto* sv_dcd = cmd_solve->add_subcommand("dcd-eigen", "F' = lambda F^{2-a} from x = 0");
    sv_dcd->add_option("--alpha", s_alpha, "deformation order");
    sv_dcd->add_option("--lambda", s_lambda, "rate");
    sv_dcd->add_option("--f0", s_f0, "initial value F(0) (> 0)");
    sv_dcd->add_option("--x-end", s_xend, "right endpoint")->required();
    sv_dcd->add_option("--steps", s_steps, "grid intervals");

    auto* sv_osc = cmd_solve->add_subcommand("oscillator", "deformed harmonic oscillator");
    sv_osc->add_option("--alpha", s_alpha, "deformation order");
    sv_osc->add_option("--omega", s_omega, "deformed angular frequency (> 0)");
    sv_osc->add_option("--x0", s_osc_x0, "initial position (> 0)");
    sv_osc->add_option("--v0", s_v0, "initial velocity");
    sv_osc->add_option("--t-end", s_tend, "end time")->required();
    sv_osc->add_option("--steps", s_steps, "time steps");

    // --- verify -------------------------------------------------------------
    auto* cmd_verify = app.add_subcommand("verify", "run the identity verification suite");
    std::uint64_t v_seed = 42;
    int v_samples = 128;
    std::string v_filter;
    cmd_verify->add_option("--seed", v_seed, "PRNG seed");
    cmd_verify->add_option("--samples", v_samples, "samples per sampled entry (>= 32)");
    cmd_verify->add_option("--filter", v_filter, "keep entries whose name contains this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_eval) {
            confcal::Expr e = confcal::parse(eval_expr);
            const double v = confcal::evaluate(e, parse_bindings(eval_binds));
            return emit(out, confcal::format_real(v, out.precision) + "\n");
        }

        if (*cmd_diff) {
            if (diff_symbolic == diff_numeric) {
                std::cerr << "error: pass exactly one of --symbolic / --numeric\n";
                return 2;
            }
            confcal::Expr e = confcal::parse(diff_expr);
            const confcal::DeformParam p(diff_kind == "classic" ? 1.0 : diff_alpha);
            if (diff_symbolic) {
                confcal::Expr result;
                if (diff_kind == "classic") {
                    result = confcal::derivative(e, diff_var);
                } else if (diff_kind == "cd") {
                    result = confcal::cd_symbolic(e, diff_var, p);
                } else if (diff_kind == "dcd") {
                    result = confcal::dcd_symbolic(e, diff_var, p);
                } else {  // chen = cd / alpha
                    if (p.alpha() == 0.0) {
                        throw confcal::DomainError("fractal derivative needs alpha != 0");
                    }
                    result = confcal::simplify(
                        confcal::Expr::number(1.0 / p.alpha()) * confcal::cd_symbolic(e, diff_var, p),
                        diff_var);
                }
                return emit(out, confcal::to_string(result) + "\n");
            }
            if (!diff_at_set) {
                std::cerr << "error: --numeric needs --at\n";
                return 2;
            }
            confcal::Bindings extra{{"alpha", p.alpha()}};
            confcal::RealFunction f = function_of(e, diff_var, extra);
            double v = 0.0;
            if (diff_kind == "classic") {
                v = f.derivative(diff_at);
            } else if (diff_kind == "cd") {
                v = confcal::cd(f, p, diff_at);
            } else if (diff_kind == "dcd") {
                v = confcal::dcd(f, p, diff_at);
            } else {
                v = confcal::chen(f, p, diff_at);
            }
            return emit(out, confcal::format_real(v, out.precision) + "\n");
        }

        if (*cmd_int) {
            confcal::Expr e = confcal::parse(int_expr);
            const confcal::DeformParam p(int_alpha);
            confcal::Bindings extra{{"alpha", p.alpha()}};
            confcal::RealFunction f = function_of(e, int_var, extra);
            double v = 0.0;
            if (int_kind == "cd") {
                v = confcal::cd_integral(f, p, int_from, int_to);
            } else if (int_kind == "dcd-paper") {
                v = confcal::dcd_integral_paper(f, p, int_from, int_to);
            } else {
                v = confcal::dcd_antiderivative_strict(f, p, int_from, int_h0, int_to);
            }
            return emit(out, confcal::format_real(v, out.precision) + "\n");
        }

        if (*cmd_solve) {
            const confcal::DeformParam p(s_alpha);
            std::vector<std::string> columns;
            std::vector<std::vector<double>> rows;
            std::optional<confcal::SolverEvent> event;
            if (*sv_cd) {
                confcal::GridFunction g =
                    confcal::solve_cd_eigen(p, s_lambda, s_x0, s_y0, s_xend, s_steps);
                columns = {"x", "value"};
                for (std::size_t i = 0; i < g.size(); ++i) {
                    rows.push_back({g.nodes()[i], g.values()[i]});
                }
            } else if (*sv_dcd) {
                confcal::EigenSolution sol =
                    confcal::solve_dcd_eigen(p, s_lambda, s_f0, s_xend, s_steps);
                columns = {"x", "value"};
                for (std::size_t i = 0; i < sol.grid.size(); ++i) {
                    rows.push_back({sol.grid.nodes()[i], sol.grid.values()[i]});
                }
                event = sol.event;
            } else {
                confcal::OscillatorConfig cfg{p, s_omega, s_osc_x0, s_v0, s_tend, s_steps};
                confcal::Trajectory tr = confcal::solve_oscillator(cfg);
                columns = {"t", "x", "v", "E"};
                for (std::size_t i = 0; i < tr.size(); ++i) {
                    rows.push_back({tr.t[i], tr.x[i], tr.v[i], tr.energy[i]});
                }
                event = tr.event;
            }
            const std::string text = out.format == "json"
                                         ? table_json(columns, rows, out.precision, event)
                                         : table_csv(columns, rows, out.precision, event);
            const int rc = emit(out, text);
            if (rc != 0) return rc;
            return event ? 3 : 0;
        }

        if (*cmd_verify) {
            const confcal::PropertyReport report =
                confcal::run_suite(v_seed, v_samples, {}, v_filter);
            const bool csv = format_opt->count() > 0 && out.format == "csv";
            const std::string text = csv ? report_csv(report, out.precision)
                                         : serialize_report(report, out.precision);
            const int rc = emit(out, text);
            if (rc != 0) return rc;
            return report.all_passed() ? 0 : 1;
        }
    } catch (const confcal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
