#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sostree/boundary_law.hpp"
#include "sostree/chain_sim.hpp"
#include "sostree/extremality.hpp"
#include "sostree/gibbs.hpp"
#include "sostree/lattice.hpp"
#include "sostree/psos.hpp"
#include "sostree/report.hpp"
#include "sostree/ti_solver.hpp"

namespace {

using nlohmann::json;
using namespace sostree;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

constexpr double kVerifyTol = 1e-9;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string model = "inf-sos";
    int k = 3;
    int m = 2;
    double theta = 0.5;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double step = 0.0;
    std::string p_str = "inf";
    int n = 2;
    int count = 1000;
    uint64_t seed = 0;
    int solution = -1;
    std::string out;
    std::string format = "text";
    double perturb = 0.0;
};

double parse_p(const std::string& s) {
    std::string low = s;
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
    if (low == "inf" || low == "infinity") return std::numeric_limits<double>::infinity();
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse --p value '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("cannot parse --p value '" + s + "'");
    if (!(v >= 1.0)) throw std::invalid_argument("--p must be at least 1");
    return v;
}

bool is_psos(const Options& opt) { return opt.model == "p-sos"; }

void require_reduced(const Options& opt) {
    if (opt.m != 2) throw std::invalid_argument("the solvers work in the reduced m = 2 coordinates; rerun with --m 2");
}

ModelSpec model_for(const Options& opt) {
    if (is_psos(opt)) return make_model(opt.m, ModelVariant::p_sos, opt.theta, parse_p(opt.p_str));
    return make_model(opt.m, ModelVariant::inf_sos, opt.theta);
}

PhaseRecord classify_for(const Options& opt, double theta) {
    if (is_psos(opt)) {
        if (opt.k != 2) throw std::invalid_argument("the smooth family is classified at k = 2 only");
        return classify_psos(make_psos(theta, parse_p(opt.p_str)));
    }
    return classify(theta, opt.k);
}

const char* branch_name(Branch b) { return b == Branch::x1 ? "x1" : "xne1"; }

const char* status_name(KSStatus s) {
    switch (s) {
        case KSStatus::non_extremal: return "non-extremal";
        case KSStatus::inconclusive: return "inconclusive";
        case KSStatus::boundary: return "boundary";
    }
    return "boundary";
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw io_error("cannot open output file '" + out_path + "'");
    f << text;
    if (!f) throw io_error("cannot write output file '" + out_path + "'");
}

std::vector<std::string> model_meta(const Options& opt) {
    std::vector<std::string> meta;
    meta.push_back("model=" + opt.model);
    meta.push_back("k=" + std::to_string(opt.k));
    if (is_psos(opt)) meta.push_back("p=" + opt.p_str);
    return meta;
}

json solution_json(const TISolution& s) {
    return json{{"branch", branch_name(s.branch)},
                {"x", s.x},
                {"y", s.y},
                {"residual", s.residual},
                {"tangential", s.tangential}};
}

void append_rows(SweepTable& table, const PhaseRecord& rec) {
    int idx = 0;
    for (const TISolution& s : rec.solutions) {
        SweepRow row;
        row.theta = rec.theta;
        row.count = rec.count();
        row.near_tangency = rec.near_tangency;
        row.index = idx++;
        row.branch = branch_name(s.branch);
        row.x = s.x;
        row.y = s.y;
        row.residual = s.residual;
        row.tangential = s.tangential;
        table.rows.push_back(std::move(row));
    }
}

int num_threads_from_env() {
    const char* env = std::getenv("SOS_TREE_THREADS");
    if (env == nullptr) return 1;
    const int t = std::atoi(env);
    return std::clamp(t, 1, 64);
}

// ---- subcommands -----------------------------------------------------------

int run_solve(const Options& opt) {
    require_reduced(opt);
    const PhaseRecord rec = classify_for(opt, opt.theta);
    if (opt.format == "csv") {
        SweepTable table;
        table.meta.push_back("schema=sweep-v1");
        for (auto& m : model_meta(opt)) table.meta.push_back(m);
        append_rows(table, rec);
        write_output(to_csv(table), opt.out);
        return kExitOk;
    }
    if (opt.format == "json") {
        json j{{"schema", "solve-v1"},
               {"model", opt.model},
               {"k", opt.k},
               {"theta", opt.theta},
               {"count", rec.count()},
               {"near_tangency", rec.near_tangency}};
        if (is_psos(opt)) j["p"] = opt.p_str;
        j["solutions"] = json::array();
        for (const TISolution& s : rec.solutions) j["solutions"].push_back(solution_json(s));
        write_output(j.dump(2) + "\n", opt.out);
        return kExitOk;
    }
    std::string text = "# schema=solve-v1\n";
    for (auto& m : model_meta(opt)) text += "# " + m + "\n";
    text += "# theta=" + fmt17(opt.theta) + "\n";
    text += "# count=" + std::to_string(rec.count()) +
            " near_tangency=" + (rec.near_tangency ? std::string("1") : std::string("0")) + "\n";
    int idx = 0;
    for (const TISolution& s : rec.solutions) {
        text += std::to_string(idx++);
        text += std::string(" branch=") + branch_name(s.branch);
        text += " x=" + fmt17(s.x) + " y=" + fmt17(s.y);
        text += " residual=" + fmt17(s.residual);
        text += std::string(" tangential=") + (s.tangential ? "1" : "0") + "\n";
    }
    write_output(text, opt.out);
    return kExitOk;
}

int run_sweep(const Options& opt) {
    require_reduced(opt);
    if (!(opt.step > 0.0)) throw std::invalid_argument("--step must be positive");
    if (!(opt.theta_max >= opt.theta_min)) throw std::invalid_argument("--theta-max must not be below --theta-min");
    const size_t num = static_cast<size_t>((opt.theta_max - opt.theta_min) / opt.step + 1e-9) + 1;

    std::vector<PhaseRecord> records(num);
    const int threads = num_threads_from_env();
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&](int t) {
        for (size_t i = static_cast<size_t>(t); i < num; i += static_cast<size_t>(threads)) {
            try {
                records[i] = classify_for(opt, opt.theta_min + static_cast<double>(i) * opt.step);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    if (opt.format == "json") {
        json rows = json::array();
        for (const PhaseRecord& rec : records) {
            json r{{"theta", rec.theta}, {"count", rec.count()}, {"near_tangency", rec.near_tangency}};
            r["solutions"] = json::array();
            for (const TISolution& s : rec.solutions) r["solutions"].push_back(solution_json(s));
            rows.push_back(std::move(r));
        }
        json j{{"schema", "sweep-v1"}, {"model", opt.model}, {"k", opt.k}, {"rows", std::move(rows)}};
        if (is_psos(opt)) j["p"] = opt.p_str;
        write_output(j.dump(2) + "\n", opt.out);
        return kExitOk;
    }
    SweepTable table;
    table.meta.push_back("schema=sweep-v1");
    for (auto& m : model_meta(opt)) table.meta.push_back(m);
    table.meta.push_back("theta-min=" + fmt17(opt.theta_min));
    table.meta.push_back("theta-max=" + fmt17(opt.theta_max));
    table.meta.push_back("step=" + fmt17(opt.step));
    for (const PhaseRecord& rec : records) append_rows(table, rec);
    write_output(to_csv(table), opt.out);
    return kExitOk;
}

int run_critical(const Options& opt) {
    const CriticalValues cv = critical_values();
    const std::vector<std::pair<const char*, double>> values = {
        {"theta_c", cv.theta_c},
        {"y0", cv.y0},
        {"theta_tilde", cv.theta_tilde},
        {"hat_theta_c", cv.hat_theta_c},
        {"hat_eta", hat_eta()},
        {"eta_c", cv.eta_c},
        {"theta0", cv.theta0},
        {"theta0_prime", cv.theta0_prime},
        {"theta_c_dprime", theta_c_dprime()},
        {"ks_bound_k3", ks_bound_k3()},
    };
    if (opt.format == "json") {
        json j{{"schema", "critical-v1"}};
        for (auto& [name, value] : values) j[name] = value;
        write_output(j.dump(2) + "\n", opt.out);
        return kExitOk;
    }
    std::string text = "# schema=critical-v1\n";
    for (auto& [name, value] : values) text += std::string(name) + "=" + fmt17(value) + "\n";
    write_output(text, opt.out);
    return kExitOk;
}

int run_verify(const Options& opt) {
    require_reduced(opt);
    if (opt.n < 2) throw std::invalid_argument("--n must be at least 2 for the compatibility check");
    const PhaseRecord rec = classify_for(opt, opt.theta);
    if (opt.solution >= rec.count()) throw std::invalid_argument("--solution index out of range");
    const CayleyBall ball = build_ball(opt.k, opt.n);
    const ModelSpec model = model_for(opt);

    std::string text = "# schema=verify-v1\n";
    for (auto& m : model_meta(opt)) text += "# " + m + "\n";
    text += "# theta=" + fmt17(opt.theta) + " n=" + std::to_string(opt.n);
    text += " perturb=" + fmt17(opt.perturb) + " tol=" + fmt17(kVerifyTol) + "\n";

    bool all_ok = true;
    for (int idx = 0; idx < rec.count(); ++idx) {
        if (opt.solution >= 0 && idx != opt.solution) continue;
        const TISolution& s = rec.solutions[static_cast<size_t>(idx)];
        const TIBoundaryLaw law = TIBoundaryLaw::from_xy(s.x + opt.perturb, s.y, opt.k);
        const BoundaryLawField field = BoundaryLawField::constant(ball, law);
        const double residual = compatibility_residual(ball, model, field);
        const bool ok = residual <= kVerifyTol;
        all_ok = all_ok && ok;
        text += std::to_string(idx) + " x=" + fmt17(s.x) + " y=" + fmt17(s.y);
        text += " compat_residual=" + fmt17(residual) + (ok ? " ok" : " FAIL");
        text += "\n";
    }
    text += std::string("verdict: ") + (all_ok ? "PASS" : "FAIL") + "\n";
    write_output(text, opt.out);
    return all_ok ? kExitOk : kExitVerifyFailed;
}

int run_simulate(const Options& opt) {
    require_reduced(opt);
    if (opt.count < 1) throw std::invalid_argument("--count must be positive");
    const PhaseRecord rec = classify_for(opt, opt.theta);
    const int idx = opt.solution < 0 ? 0 : opt.solution;
    if (idx >= rec.count()) throw std::invalid_argument("--solution index out of range");
    const TISolution& s = rec.solutions[static_cast<size_t>(idx)];

    const CayleyBall ball = build_ball(opt.k, opt.n);
    const ModelSpec model = model_for(opt);
    const TIBoundaryLaw law = TIBoundaryLaw::from_xy(s.x, s.y, opt.k);
    const SampleBatch batch = sample(ball, model, law, opt.count, opt.seed);
    const EmpiricalStats stats = empirical_stats(batch);
    const std::vector<double> expected = site_marginal(ball, model, BoundaryLawField::constant(ball, law), 0);
    const ChiSquareResult chi = root_chi_square(batch, expected);

    std::string text = "# schema=simulate-v1\n";
    for (auto& m : model_meta(opt)) text += "# " + m + "\n";
    text += "# theta=" + fmt17(opt.theta) + " n=" + std::to_string(opt.n);
    text += " seed=" + std::to_string(opt.seed) + " count=" + std::to_string(opt.count);
    text += " solution=" + std::to_string(idx) + "\n";
    text += "# x=" + fmt17(s.x) + " y=" + fmt17(s.y) + "\n";
    auto join17 = [](const std::vector<double>& v) {
        std::string out;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += fmt17(v[i]);
        }
        return out;
    };
    text += "# root_law=" + join17(expected) + "\n";
    text += "# root_freq=" + join17(stats.site_freq[0]) + "\n";
    text += "# chi2=" + fmt17(chi.stat) + " dof=" + std::to_string(chi.dof) +
            " pvalue=" + fmt17(chi.pvalue) + "\n";
    text += batch_to_lines(batch);
    write_output(text, opt.out);
    return kExitOk;
}

int run_extremality(const Options& opt) {
    require_reduced(opt);
    const PhaseRecord rec = classify(opt.theta, opt.k);
    if (opt.solution >= rec.count()) throw std::invalid_argument("--solution index out of range");

    std::string text = "# schema=extremality-v1\n";
    text += "# k=" + std::to_string(opt.k) + " theta=" + fmt17(opt.theta);
    text += " count=" + std::to_string(rec.count()) + "\n";
    json jrows = json::array();
    for (int idx = 0; idx < rec.count(); ++idx) {
        if (opt.solution >= 0 && idx != opt.solution) continue;
        const TISolution& s = rec.solutions[static_cast<size_t>(idx)];
        const KSVerdict v = kesten_stigum(s, opt.theta, opt.k);
        if (opt.format == "json") {
            jrows.push_back(json{{"index", idx},
                                 {"x", s.x},
                                 {"y", s.y},
                                 {"lambda1", v.lambda1},
                                 {"lambda2", v.lambda2},
                                 {"eta", v.eta},
                                 {"eta_lambda2", v.eta_lambda2},
                                 {"status", status_name(v.status)},
                                 {"routes_disagree", v.routes_disagree}});
            continue;
        }
        text += std::to_string(idx) + " x=" + fmt17(s.x) + " y=" + fmt17(s.y);
        text += " lambda1=" + fmt17(v.lambda1) + " lambda2=" + fmt17(v.lambda2);
        text += " eta=" + fmt17(v.eta) + " eta_lambda2=" + fmt17(v.eta_lambda2);
        text += std::string(" status=") + status_name(v.status);
        text += std::string(" routes_disagree=") + (v.routes_disagree ? "1" : "0") + "\n";
    }
    if (opt.format == "json") {
        json j{{"schema", "extremality-v1"}, {"k", opt.k}, {"theta", opt.theta}, {"rows", std::move(jrows)}};
        write_output(j.dump(2) + "\n", opt.out);
        return kExitOk;
    }
    write_output(text, opt.out);
    return kExitOk;
}

void add_common_flags(CLI::App* cmd, Options& opt, bool with_model) {
    if (with_model) {
        cmd->add_option("--model", opt.model, "Model family")->check(CLI::IsMember({"inf-sos", "p-sos"}));
        cmd->add_option("--p", opt.p_str, "Exponent of the smooth family (a real >= 1, or 'inf')");
    }
    cmd->add_option("--k", opt.k, "Branching number of the tree")->check(CLI::Range(2, 6));
    cmd->add_option("--m", opt.m, "Largest spin value");
    cmd->add_option("--out", opt.out, "Write output to this file instead of stdout");
    cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-law solver, verifier and sampler for spin models on Cayley trees"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* solve = app.add_subcommand("solve", "Find all translation-invariant boundary laws at one theta");
    add_common_flags(solve, opt, true);
    solve->add_option("--theta", opt.theta, "Activity parameter")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Classify over a theta grid");
    add_common_flags(sweep, opt, true);
    sweep->add_option("--theta-min", opt.theta_min, "Grid start")->required();
    sweep->add_option("--theta-max", opt.theta_max, "Grid end")->required();
    sweep->add_option("--step", opt.step, "Grid step")->required();

    CLI::App* critical = app.add_subcommand("critical", "Report the critical thresholds");
    critical->add_option("--out", opt.out, "Write output to this file instead of stdout");
    critical->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "Check solutions against exhaustive finite-volume measures");
    add_common_flags(verify, opt, true);
    verify->add_option("--theta", opt.theta, "Activity parameter")->required();
    verify->add_option("--n", opt.n, "Ball radius for the compatibility check")->check(CLI::Range(2, 8));
    verify->add_option("--solution", opt.solution, "Verify only this solution index");
    verify->add_option("--perturb", opt.perturb, "Offset added to x before verification");

    CLI::App* simulate = app.add_subcommand("simulate", "Draw exact samples from a solution's finite-volume measure");
    add_common_flags(simulate, opt, true);
    simulate->add_option("--theta", opt.theta, "Activity parameter")->required();
    simulate->add_option("--n", opt.n, "Ball radius")->check(CLI::Range(0, 12));
    simulate->add_option("--count", opt.count, "Number of samples");
    simulate->add_option("--seed", opt.seed, "Random seed");
    simulate->add_option("--solution", opt.solution, "Solution index to sample (default 0)");

    CLI::App* extremality = app.add_subcommand("extremality", "Second-eigenvalue report for the hardcore chain");
    add_common_flags(extremality, opt, false);
    extremality->add_option("--theta", opt.theta, "Activity parameter")->required();
    extremality->add_option("--solution", opt.solution, "Report only this solution index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(opt);
        if (sweep->parsed()) return run_sweep(opt);
        if (critical->parsed()) return run_critical(opt);
        if (verify->parsed()) return run_verify(opt);
        if (simulate->parsed()) return run_simulate(opt);
        if (extremality->parsed()) return run_extremality(opt);
        return kExitUsage;
    } catch (const guard_error& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
}
