// Command-line front end: classify / witness / eig / solve / audit over a
// tensor file, machine-readable JSON on stdout, diagnostics on stderr.
//
// Exit codes: 0 definite result, 2 input error, 3 inconclusive under budget,
// 4 no complementarity solution found.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tcpkit/classes.hpp"
#include "tcpkit/io.hpp"
#include "tcpkit/rng.hpp"
#include "tcpkit/spectra.hpp"
#include "tcpkit/tcp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitNoSolution = 4;

struct Options {
    std::string tensor_path;
    std::string class_name;
    std::string q_text;
    std::string kind = "both";
    bool enumerate = false;
    tcpkit::SearchBudget budget;
    std::vector<std::string> tol_overrides;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TCPKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("TCPKIT_SEED is not an integer");
        }
    }
    return 1;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw std::invalid_argument("cannot parse vector component: " + item);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty vector argument");
    return out;
}

void apply_tol_overrides(tcpkit::SearchBudget& budget,
                         const std::vector<std::string>& overrides) {
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--tol expects KEY=VAL: " + kv);
        const std::string key = kv.substr(0, eq);
        double val;
        try {
            val = std::stod(kv.substr(eq + 1));
        } catch (...) {
            throw std::invalid_argument("--tol value is not a number: " + kv);
        }
        budget.tol.validate_override(val);
        if (key == "witness_residual") budget.tol.witness_residual = val;
        else if (key == "strict_margin") budget.tol.strict_margin = val;
        else if (key == "tcp_residual") budget.tol.tcp_residual = val;
        else if (key == "eig_residual") budget.tol.eig_residual = val;
        else if (key == "dedup") budget.tol.dedup = val;
        else if (key == "snap") budget.tol.snap = val;
        else throw std::invalid_argument("unknown tolerance key: " + key);
    }
}

tcpkit::Json envelope(const std::string& command, const Options& opt) {
    tcpkit::Json j;
    j["schema_version"] = tcpkit::kSchemaVersion;
    j["command"] = command;
    j["tensor"] = opt.tensor_path;
    j["seed"] = opt.budget.seed;
    j["budget"] = tcpkit::Json{{"max_starts", opt.budget.max_starts},
                               {"max_iters", opt.budget.max_iters},
                               {"time_ms", opt.budget.time_ms},
                               {"threads", opt.budget.threads}};
    return j;
}

void emit(const tcpkit::Json& j) { std::cout << j.dump(2) << "\n"; }

int run_classify(const Options& opt, bool witness_only) {
    const tcpkit::Tensor a = tcpkit::load_tensor_file(opt.tensor_path);
    const tcpkit::ClassId cls = tcpkit::class_from_string(opt.class_name);
    tcpkit::Json out = envelope(witness_only ? "witness" : "classify", opt);
    out["class"] = opt.class_name;
    if (witness_only) {
        const auto w = tcpkit::witness_search(a, cls, opt.budget);
        out["result"] = w ? tcpkit::to_json(*w) : tcpkit::Json(nullptr);
        emit(out);
        if (w) return kExitOk;
        return a.dim() <= 2 ? kExitOk : kExitUnknown;  // exhaustive absence is definite
    }
    const tcpkit::Verdict v = tcpkit::classify(a, cls, opt.budget);
    out["result"] = tcpkit::to_json(v);
    emit(out);
    return v.status == tcpkit::VerdictStatus::Unknown ? kExitUnknown : kExitOk;
}

int run_eig(const Options& opt) {
    const tcpkit::Tensor a = tcpkit::load_tensor_file(opt.tensor_path);
    tcpkit::Json pairs = tcpkit::Json::array();
    if (opt.kind == "z" || opt.kind == "both")
        for (const auto& p : tcpkit::z_eigenpairs(a, opt.budget))
            pairs.push_back(tcpkit::to_json(p));
    if (opt.kind == "h" || opt.kind == "both")
        for (const auto& p : tcpkit::h_eigenpairs(a, opt.budget))
            pairs.push_back(tcpkit::to_json(p));
    if (opt.kind != "z" && opt.kind != "h" && opt.kind != "both")
        throw std::invalid_argument("--kind must be z, h, or both");
    tcpkit::Json out = envelope("eig", opt);
    out["result"] = pairs;
    emit(out);
    return kExitOk;
}

int run_solve(const Options& opt) {
    const tcpkit::Tensor a = tcpkit::load_tensor_file(opt.tensor_path);
    const tcpkit::TcpInstance inst(a, parse_vector(opt.q_text));

    tcpkit::Json solutions = tcpkit::Json::array();
    tcpkit::SolveDiagnostics diag;
    double bound = 0.0;
    bool any = false;
    if (opt.enumerate) {
        for (const auto& s : tcpkit::enumerate_solutions(inst, opt.budget)) {
            solutions.push_back(tcpkit::to_json(s));
            for (double v : s.x) bound = std::max(bound, std::abs(v));
            any = true;
        }
    } else if (auto s = tcpkit::solve(inst, opt.budget, &diag)) {
        solutions.push_back(tcpkit::to_json(*s));
        for (double v : s->x) bound = std::max(bound, std::abs(v));
        any = true;
    }

    tcpkit::Json diagnostics;
    diagnostics["r0_verdict"] = tcpkit::to_json(tcpkit::classify(a, tcpkit::ClassId::R0, opt.budget));
    diagnostics["bound"] = any ? tcpkit::Json(bound) : tcpkit::Json(nullptr);
    if (diag.divergence) diagnostics["divergence_trace"] = tcpkit::to_json(*diag.divergence);

    tcpkit::Json out = envelope("solve", opt);
    out["q"] = inst.q;
    out["result"] = tcpkit::Json{{"solutions", solutions}, {"diagnostics", diagnostics}};
    emit(out);
    return any ? kExitOk : kExitNoSolution;
}

int run_audit(const Options& opt) {
    const tcpkit::Tensor a = tcpkit::load_tensor_file(opt.tensor_path);
    const auto verdicts = tcpkit::classify_all(a, opt.budget);

    tcpkit::Json table;
    for (const auto& [cls, verdict] : verdicts)
        table[tcpkit::to_string(cls)] = tcpkit::to_json(verdict);

    tcpkit::Json violations = tcpkit::Json::array();
    for (const auto& v : tcpkit::implication_audit(a, verdicts))
        violations.push_back(tcpkit::to_json(v));

    tcpkit::Json heredity = tcpkit::Json::array();
    const auto er_it = verdicts.find(tcpkit::ClassId::ER);
    for (const auto& h : tcpkit::subtensor_heredity_check(a, tcpkit::ClassId::ER, opt.budget,
                                                          er_it->second)) {
        tcpkit::Json hj;
        hj["subset"] = h.subset;
        hj["verdict"] = tcpkit::to_json(h.sub_verdict);
        heredity.push_back(hj);
    }

    tcpkit::Json out = envelope("audit", opt);
    out["result"] = tcpkit::Json{{"verdicts", table},
                                 {"violations", violations},
                                 {"heredity_violations", heredity}};

    // Q has no direct search; when its verdict is open, attach sampled-q
    // solvability counts as evidence only.
    if (er_it != verdicts.end()) {
        const auto q_it = verdicts.find(tcpkit::ClassId::Q);
        if (q_it != verdicts.end() &&
            q_it->second.status == tcpkit::VerdictStatus::Unknown) {
            tcpkit::Rng rng(opt.budget.seed ^ 0x51AB);
            int solved = 0;
            const int samples = 12;
            for (int s = 0; s < samples; ++s) {
                std::vector<double> q(static_cast<std::size_t>(a.dim()));
                for (double& v : q) v = rng.uniform(-2.0, 2.0);
                if (tcpkit::solve(tcpkit::TcpInstance(a, q), opt.budget)) ++solved;
            }
            out["result"]["q_sampling_evidence"] =
                tcpkit::Json{{"samples", samples}, {"solved", solved}};
        }
    }
    emit(out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured tensor classes and tensor complementarity problems"};
    app.require_subcommand(1);

    Options opt;
    try {
        opt.budget.seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tensor", opt.tensor_path, "tensor file (JSON)")->required();
        sub->add_option("--seed", opt.budget.seed, "64-bit seed for all randomness");
        sub->add_option("--budget-starts", opt.budget.max_starts, "multistart attempts");
        sub->add_option("--budget-iters", opt.budget.max_iters, "iterations per start");
        sub->add_option("--time-ms", opt.budget.time_ms, "time budget in milliseconds");
        sub->add_option("--threads", opt.budget.threads,
                        "parallel starts (results independent of the value)");
        sub->add_option("--tol", opt.tol_overrides, "tolerance override KEY=VAL");
    };

    CLI::App* classify = app.add_subcommand("classify", "three-way class membership");
    add_common(classify);
    classify->add_option("--class", opt.class_name, "tensor class name")->required();

    CLI::App* witness = app.add_subcommand("witness", "search the failure system only");
    add_common(witness);
    witness->add_option("--class", opt.class_name, "tensor class name")->required();

    CLI::App* eig = app.add_subcommand("eig", "H- and Z-eigenpairs");
    add_common(eig);
    eig->add_option("--kind", opt.kind, "z, h, or both");

    CLI::App* solve = app.add_subcommand("solve", "solve the complementarity problem");
    add_common(solve);
    solve->add_option("--q", opt.q_text, "shift vector, comma separated")->required();
    solve->add_flag("--enumerate", opt.enumerate, "enumerate the solution set");

    CLI::App* audit = app.add_subcommand("audit", "all classes plus consistency checks");
    add_common(audit);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_tol_overrides(opt.budget, opt.tol_overrides);
        opt.budget.validate();
        if (classify->parsed()) return run_classify(opt, false);
        if (witness->parsed()) return run_classify(opt, true);
        if (eig->parsed()) return run_eig(opt);
        if (solve->parsed()) return run_solve(opt);
        if (audit->parsed()) return run_audit(opt);
    } catch (const tcpkit::CapabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
