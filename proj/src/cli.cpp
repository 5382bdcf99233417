#include "csr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "csr/checks.hpp"
#include "csr/curves.hpp"
#include "csr/io.hpp"
#include "csr/scenario.hpp"
#include "csr/solver.hpp"
#include "csr/variation.hpp"

namespace csr {

namespace {

using nlohmann::json;

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

json solve_json(const SolveResult& r) {
    json j;
    j["converged"] = r.converged;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    j["residual_history"] = r.residual_history;
    if (!r.message.empty()) j["message"] = r.message;
    if (!std::isnan(r.multiplier)) j["multiplier"] = r.multiplier;
    if (!std::isnan(r.volume)) j["volume"] = r.volume;
    return j;
}

int cmd_area(const Scenario& sc, const std::string& out) {
    const IntrinsicGraph graph = IntrinsicGraph::sample(sc.domain(), sc.u0());
    const double a = area(graph, sc.metric());
    std::cout << "area = " << format17(a) << "\n";
    write_grid_csv(out + "/grid.csv", graph);
    write_json(out + "/summary.json",
               json{{"command", "area"}, {"status", "ok"}, {"area", a}});
    return 0;
}

int cmd_volume(const Scenario& sc, const std::string& out) {
    const double tol = sc.get_double("quad_tol", 1e-10);
    const IntrinsicGraph graph = IntrinsicGraph::sample(sc.domain(), sc.u0());
    const double v = volume(graph, sc.metric(), tol);
    std::cout << "volume = " << format17(v) << "\n";
    write_grid_csv(out + "/grid.csv", graph);
    write_json(out + "/summary.json", json{{"command", "volume"},
                                           {"status", "ok"},
                                           {"volume", v},
                                           {"quad_tol", tol}});
    return 0;
}

int cmd_variation_check(const Scenario& sc, const std::string& out) {
    const GraphDomain dom = sc.domain();
    const int cases = sc.get_int("cases", 20);
    const VariationCheckResult res = run_variation_check(sc.seed(), cases, dom.nx, dom.nt);
    json details = json::array();
    for (const auto& c : res.cases)
        details.push_back(json{{"metric", c.metric_kind},
                               {"analytic", c.analytic},
                               {"finite_difference", c.finite_difference},
                               {"rel_err", c.rel_err}});
    write_json(out + "/variation_check.json", details);
    write_json(out + "/summary.json", json{{"command", "variation-check"},
                                           {"status", res.pass ? "ok" : "failed"},
                                           {"cases", cases},
                                           {"max_rel_err", res.max_rel_err},
                                           {"tolerance", 1e-6},
                                           {"seed", sc.seed()}});
    std::cout << "variation-check: max rel err = " << format17(res.max_rel_err)
              << (res.pass ? " (pass)" : " (FAIL)") << "\n";
    return res.pass ? 0 : 2;
}

int cmd_trace(const Scenario& sc, const std::string& out) {
    const GraphDomain dom = sc.domain();
    const IntrinsicGraph graph = IntrinsicGraph::sample(dom, sc.u0());
    const double a = sc.get_double("trace_a", 0.5 * (dom.x0 + dom.x1));
    const double b = sc.get_double("trace_b", 0.5 * (dom.t0 + dom.t1));
    const double r = sc.get_double("trace_r", 0.25 * (dom.x1 - dom.x0));
    const double h = sc.get_double("trace_step", 1e-3);
    CharacteristicCurve curve = trace(graph, a, b, r, h);
    foliation_jacobian(graph, curve);
    const RegularityReport rep =
        regularity_diagnostic(graph, sc.metric(), sc.f(), curve, sc.sign());
    double qmin = curve.q.empty() ? 0.0 : curve.q.front();
    for (double q : curve.q) qmin = std::min(qmin, q);
    write_curve_csv(out + "/curve.csv", curve, rep);
    write_json(out + "/summary.json", json{{"command", "trace"},
                                           {"status", "ok"},
                                           {"samples", curve.size()},
                                           {"clipped", curve.clipped},
                                           {"q_min", qmin},
                                           {"diagnostic_sup", rep.sup},
                                           {"step", h},
                                           {"halfwidth", r}});
    std::cout << "trace: " << curve.size() << " samples"
              << (curve.clipped ? " (clipped)" : "") << ", sup|dM/dxi - K| = "
              << format17(rep.sup) << "\n";
    return 0;
}

int cmd_solve(const Scenario& sc, const std::string& out) {
    const DiscretizedProblem problem{sc.domain(), sc.metric(), sc.f(), sc.u0(), sc.sign()};
    const SolveConfig config = sc.solve_config();
    const SolveResult res = solve(problem, config);
    write_grid_csv(out + "/solution.csv", IntrinsicGraph(problem.dom, res.u));
    write_json(out + "/solve.json", solve_json(res));
    write_json(out + "/summary.json", json{{"command", "solve"},
                                           {"status", res.converged ? "ok" : "failed"},
                                           {"residual", res.residual},
                                           {"iterations", res.iterations},
                                           {"tol", config.tol}});
    std::cout << "solve: residual = " << format17(res.residual) << " after "
              << res.iterations << " iterations"
              << (res.converged ? "" : " (NOT converged)") << "\n";
    return res.converged ? 0 : 2;
}

int cmd_solve_constrained(const Scenario& sc, const std::string& out) {
    if (!sc.has("target_volume"))
        throw ConfigError("solve-constrained needs target_volume");
    const double target = sc.get_double("target_volume", 0.0);
    const DiscretizedProblem problem{sc.domain(), sc.metric(), sc.f(), sc.u0(), sc.sign()};
    const SolveConfig config = sc.solve_config();
    const SolveResult res = volume_constrained_solve(problem, target, config);
    write_grid_csv(out + "/solution.csv", IntrinsicGraph(problem.dom, res.u));
    json j = solve_json(res);
    if (res.converged) {
        const auto estimates = multiplier_estimates(problem, res.u, sc.seed(), 2);
        j["multiplier_estimates"] = estimates;
    }
    write_json(out + "/solve.json", j);
    write_json(out + "/summary.json", json{{"command", "solve-constrained"},
                                           {"status", res.converged ? "ok" : "failed"},
                                           {"residual", res.residual},
                                           {"multiplier", res.multiplier},
                                           {"volume", res.volume},
                                           {"target_volume", target},
                                           {"tol", config.tol},
                                           {"vol_tol", config.vol_tol}});
    std::cout << "solve-constrained: H0 = " << format17(res.multiplier)
              << ", |volume - target| = " << format17(std::abs(res.volume - target))
              << (res.converged ? "" : " (NOT converged)") << "\n";
    return res.converged ? 0 : 2;
}

int cmd_regularity(const Scenario& sc, const std::string& out) {
    const DiscretizedProblem problem{sc.domain(), sc.metric(), sc.f(), sc.u0(), sc.sign()};
    const int levels = sc.get_int("levels", 3);
    const int curves = sc.get_int("curves", 5);
    const RefineStudyReport rep =
        refine_study(problem, levels, sc.solve_config(), curves);
    json jl = json::array();
    for (const auto& l : rep.levels) {
        jl.push_back(json{{"nx", l.nx},
                          {"nt", l.nt},
                          {"h", l.h},
                          {"residual", l.solution.residual},
                          {"diagnostic_sup", l.diagnostic_sup}});
    }
    write_json(out + "/levels.json", jl);
    write_json(out + "/summary.json", json{{"command", "regularity"},
                                           {"status", "ok"},
                                           {"levels", levels},
                                           {"curves", curves},
                                           {"estimated_order", rep.estimated_order}});
    std::cout << "regularity: estimated order = " << format17(rep.estimated_order) << "\n";
    for (const auto& l : rep.levels)
        std::cout << "  " << l.nx << "x" << l.nt
                  << ": sup|dM/dxi - K| = " << format17(l.diagnostic_sup) << "\n";
    return 0;
}

int cmd_geometry_check(const Scenario& sc, const std::string& out) {
    const int metrics = sc.get_int("metrics", 10);
    const int points = sc.get_int("points", 100);
    const GeometryCheckResult res = run_geometry_check(sc.seed(), metrics, points);
    write_json(out + "/summary.json",
               json{{"command", "geometry-check"},
                    {"status", res.pass ? "ok" : "failed"},
                    {"metrics", metrics},
                    {"points", points},
                    {"max_bracket_identity", res.max_bracket_identity},
                    {"max_J_of_T", res.max_J_of_T},
                    {"max_tau_of_T", res.max_tau_of_T},
                    {"min_orientation", res.min_orientation},
                    {"max_nabla_T", res.max_nabla_T},
                    {"max_D_T_T", res.max_D_T_T},
                    {"max_compatibility", res.max_compatibility},
                    {"tolerances", json{{"bracket", 1e-8},
                                        {"J_tau_of_T", 1e-8},
                                        {"nabla_T", 1e-8},
                                        {"D_T_T", 1e-8},
                                        {"compatibility", 1e-6}}},
                    {"seed", sc.seed()}});
    std::cout << "geometry-check: bracket " << format17(res.max_bracket_identity)
              << ", compatibility " << format17(res.max_compatibility)
              << (res.pass ? " (pass)" : " (FAIL)") << "\n";
    return res.pass ? 0 : 2;
}

int cmd_surface_variation(const Scenario& sc, const std::string& out) {
    const GraphDomain dom = sc.domain();
    const int surfaces = sc.get_int("surfaces", 10);
    const int fields = sc.get_int("fields", 5);
    const SurfaceVariationResult res =
        run_surface_variation_check(sc.seed(), surfaces, fields, dom.nx, dom.nt);
    json details = json::array();
    for (const auto& c : res.cases)
        details.push_back(json{{"surface", c.surface_kind},
                               {"analytic", c.analytic},
                               {"flow", c.flow},
                               {"err", c.err},
                               {"tol", c.tol}});
    write_json(out + "/surface_variation.json", details);
    write_json(out + "/summary.json", json{{"command", "surface-variation"},
                                           {"status", res.pass ? "ok" : "failed"},
                                           {"surfaces", surfaces},
                                           {"fields", fields},
                                           {"max_excess", res.max_excess},
                                           {"seed", sc.seed()}});
    std::cout << "surface-variation: max err/tol = " << format17(res.max_excess)
              << (res.pass ? " (pass)" : " (FAIL)") << "\n";
    return res.pass ? 0 : 2;
}

}  // namespace

int run(const std::string& command, const std::string& scenario_path,
        const std::string& out_dir, const CliOverrides& overrides) {
    try {
        Scenario sc = Scenario::load(scenario_path);
        if (overrides.seed) sc.set("seed", std::to_string(*overrides.seed));
        if (overrides.nx) sc.set("nx", std::to_string(*overrides.nx));
        if (overrides.nt) sc.set("nt", std::to_string(*overrides.nt));
        std::filesystem::create_directories(out_dir);

        if (command == "area") return cmd_area(sc, out_dir);
        if (command == "volume") return cmd_volume(sc, out_dir);
        if (command == "variation-check") return cmd_variation_check(sc, out_dir);
        if (command == "trace") return cmd_trace(sc, out_dir);
        if (command == "solve") return cmd_solve(sc, out_dir);
        if (command == "solve-constrained") return cmd_solve_constrained(sc, out_dir);
        if (command == "regularity") return cmd_regularity(sc, out_dir);
        if (command == "geometry-check") return cmd_geometry_check(sc, out_dir);
        if (command == "surface-variation") return cmd_surface_variation(sc, out_dir);
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << " at offset " << e.offset << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace csr
