// Command-line front end: analyze, precondition, map-solution, verify-paper,
// sweep. Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 ill-posed input (analyze), 4 not-a-solution (map-solution).

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ineqcond/io.hpp"

using namespace ineqcond;

namespace {

void emit(const Json& j, const std::string& output, bool pretty) {
    std::string text = pretty ? j.dump(2) : j.dump();
    if (output.empty() || output == "stdout") {
        std::cout << text << '\n';
    } else {
        std::ofstream out(output);
        if (!out) throw ParseError("cannot write: " + output);
        out << text << '\n';
    }
}

int fail_invalid(const Error& e) {
    Json err{{"error", Json{{"kind", e.kind()}, {"message", e.what()}}}};
    std::cout << err.dump() << '\n';
    return 2;
}

int cmd_analyze(const std::string& input, const std::string& format, double tol,
                const std::string& output, bool pretty) {
    ProblemInstance inst = ProblemInstance::validate(read_matrix_file(input, format));
    ConditionReport report = analyze(inst, tol);
    emit(report_to_json(report), output, pretty);
    return report.feasibility.tag == Feasibility::IllPosed ? 3 : 0;
}

int cmd_precondition(const std::string& input, const std::string& format,
                     const std::string& order_str, const std::string& output,
                     const std::string& record_path, bool pretty) {
    ProblemInstance inst = ProblemInstance::validate(read_matrix_file(input, format));
    TransformRecord record = precondition(inst, order_from_string(order_str));
    if (!output.empty() && output != "stdout") {
        std::ofstream out(output);
        if (!out) throw ParseError("cannot write: " + output);
        auto dot = output.rfind('.');
        if (dot != std::string::npos && output.substr(dot + 1) == "json")
            out << matrix_to_json(record.a_hat().matrix()).dump(pretty ? 2 : -1) << '\n';
        else
            write_matrix_csv(out, record.a_hat().matrix());
    } else {
        emit(matrix_to_json(record.a_hat().matrix()), "stdout", pretty);
    }
    if (!record_path.empty()) {
        std::ofstream out(record_path);
        if (!out) throw ParseError("cannot write: " + record_path);
        out << record_to_json(record).dump(pretty ? 2 : -1) << '\n';
    }
    return 0;
}

int cmd_map_solution(const std::string& record_path, const std::string& kind,
                     const std::string& vector_path, bool pretty) {
    std::ifstream in(record_path);
    if (!in) throw ParseError("cannot open: " + record_path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("invalid record JSON: ") + e.what());
    }
    TransformRecord record = record_from_json(j);
    Vector v = read_vector_file(vector_path);

    Vector mapped;
    double residual;
    if (kind == "primal") {
        mapped = map_primal_solution(record, v);
        residual = (record.original().matrix() * mapped).norm();
    } else if (kind == "dual") {
        mapped = map_dual_solution(record, v);
        residual = -(record.original().matrix().transpose() * mapped).minCoeff();
        if (residual < 0) residual = 0;  // all margins nonnegative
    } else {
        throw ParseError("--kind must be primal or dual");
    }

    Json arr = Json::array();
    for (int i = 0; i < mapped.size(); ++i) arr.push_back(mapped(i));
    emit(Json{{"kind", kind}, {"mapped", std::move(arr)}, {"residual", residual}}, "stdout",
         pretty);
    return 0;
}

int cmd_verify_paper(const std::string& eps_list, double tol, bool pretty) {
    std::vector<double> grid;
    std::stringstream ss(eps_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    if (grid.empty()) throw ParseError("empty epsilon grid");

    Json table = Json::array();
    bool ok = true;
    for (int id = 1; id <= 4; ++id) {
        for (double eps : grid) {
            for (const auto& row : run_example(id, eps)) {
                bool pass = row.rel_error <= tol;
                ok = ok && pass;
                table.push_back(Json{{"example", id},
                                     {"epsilon", eps},
                                     {"quantity", row.quantity},
                                     {"computed", row.computed},
                                     {"expected", row.expected},
                                     {"rel_error", row.rel_error},
                                     {"pass", pass}});
            }
        }
    }

    SweepConfig cfg;
    cfg.m = 3;
    cfg.n = 6;
    cfg.trials = 100;
    cfg.seed = 42;
    SweepReport sweep = run_sweep(cfg);
    ok = ok && sweep.violations == 0;

    Json out{{"tolerance", tol},
             {"examples", std::move(table)},
             {"sweep", sweep_to_json(sweep)},
             {"pass", ok}};
    if (pretty) {
        std::cout << std::left << std::setw(4) << "ex" << std::setw(8) << "eps" << std::setw(16)
                  << "quantity" << std::setw(22) << "computed" << std::setw(22) << "expected"
                  << std::setw(12) << "rel_error" << "pass\n";
        for (const auto& row : out["examples"]) {
            std::cout << std::left << std::setw(4) << row["example"].get<int>() << std::setw(8)
                      << row["epsilon"].get<double>() << std::setw(16)
                      << row["quantity"].get<std::string>() << std::setw(22) << std::setprecision(12)
                      << row["computed"].get<double>() << std::setw(22)
                      << row["expected"].get<double>() << std::setw(12) << std::setprecision(3)
                      << row["rel_error"].get<double>()
                      << (row["pass"].get<bool>() ? "yes" : "NO") << '\n';
        }
        std::cout << "sweep violations: " << sweep.violations << "  min_slack: " << sweep.min_slack
                  << '\n'
                  << (ok ? "PASS" : "FAIL") << '\n';
    } else {
        std::cout << out.dump() << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_sweep(int m, int n, long trials, std::uint64_t seed, const std::string& ensemble,
              const std::string& output, bool pretty) {
    SweepConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = seed;
    if (ensemble == "gaussian")
        cfg.ensemble = SweepConfig::Ensemble::Gaussian;
    else if (ensemble == "sphere")
        cfg.ensemble = SweepConfig::Ensemble::UniformSphereColumns;
    else
        throw ParseError("--ensemble must be gaussian or sphere");
    SweepReport rep = run_sweep(cfg);
    emit(sweep_to_json(rep), output, pretty);
    return rep.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"condition numbers and preconditioning for homogeneous linear inequality systems"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "human-readable output");

    auto* analyze_cmd = app.add_subcommand("analyze", "condition report for a matrix");
    std::string an_input, an_format = "auto", an_output = "stdout";
    double an_tol = 1e-9;
    analyze_cmd->add_option("--input", an_input, "matrix file")->required();
    analyze_cmd->add_option("--format", an_format, "csv|json (default: by extension)");
    analyze_cmd->add_option("--tol", an_tol, "ill-posedness tolerance");
    analyze_cmd->add_option("--output", an_output, "output path or 'stdout'");

    auto* pre_cmd = app.add_subcommand("precondition", "normalize and/or balance a matrix");
    std::string pr_input, pr_format = "auto", pr_order, pr_output = "stdout", pr_record;
    pre_cmd->add_option("--input", pr_input, "matrix file")->required();
    pre_cmd->add_option("--format", pr_format, "csv|json (default: by extension)");
    pre_cmd->add_option("--order", pr_order, "n|b|nb|bn")->required();
    pre_cmd->add_option("--output", pr_output, "where to write A_hat");
    pre_cmd->add_option("--record", pr_record, "where to write the transform record JSON");

    auto* map_cmd = app.add_subcommand("map-solution", "map a preconditioned solution back");
    std::string mp_record, mp_kind, mp_vector;
    map_cmd->add_option("--record", mp_record, "transform record JSON")->required();
    map_cmd->add_option("--kind", mp_kind, "primal|dual")->required();
    map_cmd->add_option("--vector", mp_vector, "solution vector file")->required();

    auto* verify_cmd = app.add_subcommand("verify-paper", "check the worked-example closed forms");
    std::string vp_eps = "0.3,0.1,0.03,0.01";
    double vp_tol = 1e-6;
    verify_cmd->add_option("--eps", vp_eps, "comma-separated epsilon grid");
    verify_cmd->add_option("--tol", vp_tol, "relative tolerance");

    auto* sweep_cmd = app.add_subcommand("sweep", "random-ensemble theorem validation");
    int sw_m = 3, sw_n = 6;
    long sw_trials = 1000;
    std::uint64_t sw_seed = 42;
    std::string sw_ensemble = "gaussian", sw_output = "stdout";
    sweep_cmd->add_option("--m", sw_m, "rows")->required();
    sweep_cmd->add_option("--n", sw_n, "columns")->required();
    sweep_cmd->add_option("--trials", sw_trials, "number of trials");
    sweep_cmd->add_option("--seed", sw_seed, "RNG seed");
    sweep_cmd->add_option("--ensemble", sw_ensemble, "gaussian|sphere");
    sweep_cmd->add_option("--output", sw_output, "output path or 'stdout'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze_cmd->parsed())
            return cmd_analyze(an_input, an_format, an_tol, an_output, pretty);
        if (pre_cmd->parsed())
            return cmd_precondition(pr_input, pr_format, pr_order, pr_output, pr_record, pretty);
        if (map_cmd->parsed()) return cmd_map_solution(mp_record, mp_kind, mp_vector, pretty);
        if (verify_cmd->parsed()) return cmd_verify_paper(vp_eps, vp_tol, pretty);
        if (sweep_cmd->parsed())
            return cmd_sweep(sw_m, sw_n, sw_trials, sw_seed, sw_ensemble, sw_output, pretty);
    } catch (const NotASolutionError& e) {
        Json err{{"error", Json{{"kind", e.kind()}, {"message", e.what()}}}};
        std::cout << err.dump() << '\n';
        return 4;
    } catch (const Error& e) {
        return fail_invalid(e);
    } catch (const std::exception& e) {
        Json err{{"error", Json{{"kind", "Internal"}, {"message", e.what()}}}};
        std::cout << err.dump() << '\n';
        return 2;
    }
    return 2;
}
