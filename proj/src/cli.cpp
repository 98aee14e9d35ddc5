#include "cavlie/cli.hpp"

#include "cavlie/control.hpp"
#include "cavlie/identities.hpp"
#include "cavlie/lie_engine.hpp"
#include "cavlie/symmetry.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

namespace cavlie::cli {

namespace {

ModelSpace space_from(const AnalysisConfig& c) {
    return build_space(model_kind_from_string(c.model), c.atoms, c.cutoff);
}

bool is_identity_name(const std::string& n) { return n == "H0" || n == "identity"; }

// Restrict the named generator selection; empty means every symmetric one.
GeneratorSet select_generators(const GeneratorSet& all,
                               const std::vector<std::string>& names) {
    if (names.empty()) {
        GeneratorSet g = all;
        g.breaker_name.clear();
        g.breaker = Matrix();
        g.includes_identity = false;
        return g;
    }
    GeneratorSet g;
    g.includes_identity = false;
    for (const auto& n : names) {
        if (is_identity_name(n)) {
            g.includes_identity = true;
        } else if (const BlockOperator* op = all.find_symmetric(n)) {
            g.symmetric.emplace_back(n, *op);
        } else if (all.has_breaker() && n == all.breaker_name) {
            g.breaker_name = n;
            g.breaker = all.breaker;
        } else {
            throw ConfigError("unknown generator name '" + n + "'");
        }
    }
    return g;
}

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Standard-normal pairs via Box-Muller on the raw engine stream, so the draw
// sequence is identical on every platform.
double gaussian(std::mt19937_64& eng) {
    double u1 = uniform01(eng);
    double u2 = uniform01(eng);
    while (u1 <= 1e-300) u1 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Matrix haar_unitary(int n, std::mt19937_64& eng) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = Complex(gaussian(eng), gaussian(eng));
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0));
    }
    return q;
}

Vector random_unit_vector(int n, std::mt19937_64& eng) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gaussian(eng), gaussian(eng));
    return v / v.norm();
}

Json space_json(const ModelSpace& space) {
    Json j;
    j["model"] = to_string(space.kind);
    j["atoms"] = space.atoms;
    j["cutoff"] = space.cutoff;
    j["sector_dims"] = space.sector_dims;
    j["total_dim"] = space.total_dim();
    return j;
}

Json verdict_json(const lie::ControllabilityVerdict& v, double tolerance) {
    Json j;
    j["classification"] = lie::to_string(v.classification);
    j["global_dim"] = v.global_dim;
    j["su_reduced_dim"] = v.su_reduced_dim;
    j["center_dim"] = v.center_dim;
    j["per_sector_dims"] = v.per_sector_dims;
    j["per_sector_su_dims"] = v.per_sector_su_dims;
    j["target_su_dims"] = v.target_su_dims;
    j["notes"] = v.notes;
    j["tolerance"] = tolerance;
    return j;
}

Matrix restrict_to(const Matrix& a, const std::vector<int>& idx) {
    Matrix out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = 0; j < idx.size(); ++j) out(i, j) = a(idx[i], idx[j]);
    }
    return out;
}

double discarded_coupling(const Matrix& ambient, const std::vector<int>& idx) {
    std::vector<bool> in(ambient.rows(), false);
    for (int i : idx) in[i] = true;
    double worst = 0.0;
    for (int c : idx) {
        for (int r = 0; r < ambient.rows(); ++r) {
            if (!in[r]) worst = std::max(worst, std::abs(ambient(r, c)));
        }
    }
    return worst;
}

}  // namespace

Json cmd_analyze(const AnalysisConfig& config) {
    ModelSpace space = space_from(config);
    GeneratorSet all = model_generators(space);
    GeneratorSet sel = select_generators(all, config.generators);

    Json rep;
    rep["command"] = "analyze";
    rep["config"] = config_to_json(config);
    rep["space"] = space_json(space);

    if (!sel.symmetric.empty()) {
        std::vector<BlockOperator> hs;
        std::vector<std::string> names;
        for (const auto& [n, op] : sel.symmetric) {
            names.push_back(n);
            hs.push_back(op);
        }
        if (sel.includes_identity) {
            names.push_back("H0");
            hs.push_back(identity_operator(space));
        }
        lie::LieBasis basis =
            lie::closure(lie::embedded_generators(hs, space.cutoff), config.tolerance);
        auto verdict = lie::compare_to_su(basis, space, space.cutoff);
        Json cj = verdict_json(verdict, config.tolerance);
        cj["generators"] = names;
        cj["converged"] = basis.converged;
        rep["symmetric_closure"] = cj;
    }

    if (sel.has_breaker()) {
        auto split = ladder_split(space);
        std::vector<int> fidx = sym::f_space_indices(space, *split, space.cutoff);
        const int m = static_cast<int>(fidx.size());
        std::vector<Matrix> gens;
        std::vector<std::string> names;
        if (sel.includes_identity) {
            gens.push_back(Complex(0, 1) * Matrix::Identity(m, m));
            names.push_back("H0");
        }
        for (const auto& [n, op] : sel.symmetric) {
            gens.push_back(Complex(0, 1) * restrict_to(embed(op), fidx));
            names.push_back(n);
        }
        gens.push_back(Complex(0, 1) * restrict_to(sel.breaker, fidx));
        names.push_back(sel.breaker_name);

        lie::LieBasis basis = lie::closure(gens, config.tolerance);
        Json fj;
        fj["generators"] = names;
        fj["f_space_dim"] = m;
        fj["dimension"] = basis.dimension();
        fj["converged"] = basis.converged;
        fj["classification"] = lie::to_string(lie::classify_full(basis, m));
        fj["breaker_leakage"] = discarded_coupling(sel.breaker, fidx);
        fj["tolerance"] = config.tolerance;
        rep["full_space_closure"] = fj;
    }
    return rep;
}

Json cmd_verify_identities(const AnalysisConfig& config) {
    ModelSpace space = space_from(config);
    auto results = identities::run_suite(space, config.identity_tolerance);
    Json rep;
    rep["command"] = "verify-identities";
    rep["config"] = config_to_json(config);
    rep["space"] = space_json(space);
    Json list = Json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        Json e;
        e["name"] = r.name;
        e["max_residual"] = r.max_residual;
        e["tolerance"] = r.tolerance;
        e["pass"] = r.pass;
        all_pass = all_pass && r.pass;
        list.push_back(e);
    }
    rep["identities"] = list;
    rep["all_pass"] = all_pass;
    return rep;
}

Json cmd_complementarity(const AnalysisConfig& config) {
    ModelSpace space = space_from(config);
    GeneratorSet all = model_generators(space);
    Json rep;
    rep["command"] = "complementarity";
    rep["config"] = config_to_json(config);
    rep["space"] = space_json(space);
    if (!all.has_breaker()) {
        rep["verdict"] = false;
        rep["note"] = "no breaker defined for this model";
        return rep;
    }
    auto declared = declared_split(space);
    auto r = sym::check_complementarity(all.breaker, space, *declared, config.tolerance);
    Json cj;
    cj["breaker"] = all.breaker_name;
    cj["orientation"] = r.orientation;
    cj["kernel_ok"] = r.kernel_ok;
    cj["kernel_residual"] = r.kernel_residual;
    cj["ladder_ok"] = r.ladder_ok;
    cj["ladder_worst_residual"] = r.ladder_worst_residual;
    cj["intertwine_worst_residual"] = r.intertwine_worst;
    Json rungs = Json::array();
    for (const auto& rr : r.rungs) {
        Json e;
        e["mu"] = rr.mu;
        e["ok"] = rr.ok;
        e["source_residual"] = rr.source_residual;
        e["target_residual"] = rr.target_residual;
        e["intertwine_residual"] = rr.intertwine_residual;
        rungs.push_back(e);
    }
    cj["rungs"] = rungs;
    cj["seed_transitive"] = r.seed_transitive;
    cj["seed_note"] = r.seed_note;
    cj["tolerance"] = config.tolerance;
    rep["complementarity"] = cj;
    rep["verdict"] = r.verdict;
    return rep;
}

Json cmd_synthesize(const AnalysisConfig& config) {
    if (!config.synthesis) throw ConfigError("synthesize: config lacks a synthesis block");
    const SynthesisConfig& sc = *config.synthesis;
    ModelSpace space = space_from(config);
    GeneratorSet all = model_generators(space);

    GeneratorSet sel;
    if (config.generators.empty()) {
        sel = all;  // everything, identity included
    } else {
        sel = select_generators(all, config.generators);
    }

    const int K = sc.truncation < 0 ? space.cutoff : sc.truncation;
    if (K < 1 || K > space.cutoff) throw ConfigError("synthesize: truncation out of range");
    std::vector<int> idx = ctrl::propagation_indices(space, K);
    const int m = static_cast<int>(idx.size());

    ctrl::SynthesisOptions opts;
    opts.seed = config.seed;
    opts.restarts = sc.restarts;
    opts.phase_free = sc.phase_free;

    Json rep;
    rep["command"] = "synthesize";
    rep["config"] = config_to_json(config);
    rep["space"] = space_json(space);
    rep["synthesis_space_dim"] = m;

    auto schedule_json = [](const ctrl::ControlSchedule& s) {
        Json arr = Json::array();
        for (const auto& seg : s.segments) {
            Json e;
            e["generator"] = seg.generator;
            e["duration"] = seg.duration;
            e["amplitude"] = seg.amplitude;
            arr.push_back(e);
        }
        return arr;
    };

    std::mt19937_64 eng(config.seed);
    if (sc.task == "state" || sc.target_type == "state_transfer") {
        if (sc.initial_label.size() != 2 || sc.final_label.size() != 2) {
            throw ConfigError("state transfer needs initial/final labels [mu, label]");
        }
        int i0 = space.index_of(sc.initial_label[0], sc.initial_label[1]);
        int i1 = space.index_of(sc.final_label[0], sc.final_label[1]);
        if (i0 < 0 || i1 < 0) throw ConfigError("state transfer label not in the basis");
        Vector a = Vector::Zero(space.total_dim());
        Vector b = Vector::Zero(space.total_dim());
        a[i0] = 1.0;
        b[i1] = 1.0;
        auto res = ctrl::reach_state(a, b, sel, space, K, sc.eps, sc.budget, opts);
        Json sj;
        sj["task"] = "state";
        sj["overlap"] = res.overlap;
        sj["infidelity"] = res.infidelity;
        sj["eps"] = sc.eps;
        sj["success"] = res.success;
        sj["segments"] = schedule_json(res.schedule);
        sj["total_time"] = res.schedule.total_time();
        rep["synthesis"] = sj;
        return rep;
    }

    Matrix target;
    if (sc.target_type == "random_unitary") {
        target = haar_unitary(m, eng);
    } else if (sc.target_type == "generator_exponential") {
        ctrl::ControlSchedule one;
        one.segments.push_back({sc.target_generator, std::abs(sc.target_angle),
                                sc.target_angle >= 0 ? 1.0 : -1.0});
        target = ctrl::propagate(one, all, space, K).unitary;
    } else {
        throw ConfigError("unknown synthesis target type '" + sc.target_type + "'");
    }
    std::vector<Vector> probes;
    for (int i = 0; i < sc.probe_vectors; ++i) probes.push_back(random_unit_vector(m, eng));

    auto res = ctrl::synthesize_unitary(target, sel, space, K, probes, sc.eps, sc.budget, opts);
    Json sj;
    sj["task"] = "unitary";
    sj["target"] = sc.target_type;
    sj["max_error"] = res.report.max_error;
    sj["per_vector_errors"] = res.report.per_vector_errors;
    sj["eps"] = sc.eps;
    sj["success"] = res.success;
    sj["segments"] = schedule_json(res.schedule);
    sj["total_time"] = res.schedule.total_time();
    sj["segment_count"] = res.schedule.segments.size();
    rep["synthesis"] = sj;
    return rep;
}

namespace {

int dispatch(const std::string& cmd, const AnalysisConfig& config, const std::string& out) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    Json rep;
    int rc = 0;
    if (cmd == "analyze") {
        rep = cmd_analyze(config);
    } else if (cmd == "verify-identities") {
        rep = cmd_verify_identities(config);
        if (!rep.at("all_pass").get<bool>()) rc = 3;
    } else if (cmd == "complementarity") {
        rep = cmd_complementarity(config);
    } else if (cmd == "synthesize") {
        rep = cmd_synthesize(config);
    } else {
        throw ConfigError("unknown command " + cmd);
    }
    double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    std::string text = rep.dump(2);
    text.push_back('\n');
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file " + out);
        f << text;
    }
    std::cerr << "[cavlie] " << cmd << " finished in " << ms << " ms";
    if (!out.empty()) std::cerr << ", report written to " << out;
    std::cerr << "\n";
    return rc;
}

}  // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"charge-sector controllability toolkit for atom-cavity models"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    bool have_seed = false, have_tol = false;
    std::uint64_t seed_override = 0;
    double tol_override = 0.0;

    std::vector<CLI::App*> subs;
    for (const char* name : {"analyze", "verify-identities", "complementarity", "synthesize"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_path, "report output path (default: stdout)");
        sub->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--tolerance", tol_override, "override the config tolerance")
            ->each([&](const std::string&) { have_tol = true; });
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("cannot open config file " + config_path);
        Json j = Json::parse(f, nullptr, true, true);
        AnalysisConfig config = parse_config(j);
        if (have_seed) config.seed = seed_override;
        if (have_tol) config.tolerance = tol_override;
        return dispatch(app.get_subcommands().front()->get_name(), config, out_path);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "numeric precondition violated: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cavlie::cli
