#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kseries/errors.hpp"
#include "kseries/estimator.hpp"
#include "kseries/gof.hpp"
#include "kseries/loopsim.hpp"
#include "kseries/moment_sources.hpp"
#include "kseries/serialize.hpp"
#include "examples.hpp"

namespace ks = kseries;
using kseries_cli::example_programs;
using kseries_cli::find_example;

namespace {

// 0 = success, 1 = numerical failure, 2 = input/parse error
constexpr int kExitNumerical = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_threads() {
    if (const char* env = std::getenv("KSERIES_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // hardware concurrency
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ks::json read_json_file(const std::string& path) {
    try {
        return ks::json::parse(read_file(path));
    } catch (const ks::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

// A reference descriptor is inline JSON (starts with '{') or a file path.
ks::Distribution parse_reference(const std::string& spec) {
    ks::json j;
    if (!spec.empty() && spec.front() == '{') {
        try {
            j = ks::json::parse(spec);
        } catch (const ks::json::parse_error& e) {
            throw InputError(std::string("reference descriptor: ") + e.what());
        }
    } else {
        j = read_json_file(spec);
    }
    return ks::distribution_from_json(j);
}

ks::LoopProgram load_program(const std::string& file,
                             const std::string& example) {
    if (!example.empty()) {
        const auto* p = find_example(example);
        if (!p) throw InputError("unknown example \"" + example + "\"");
        return ks::parse_loop_program(p->source);
    }
    return ks::parse_loop_program(read_file(file));
}

int cmd_simulate(const std::string& program_file, const std::string& example,
                 std::int64_t t, std::int64_t reps, std::uint64_t seed,
                 const std::vector<int>& degrees, int threads,
                 const std::string& moments_out, const std::string& obs_out) {
    ks::SimulationSpec spec;
    spec.program = load_program(program_file, example);
    spec.iterations = t;
    spec.replications = reps;
    spec.seed = seed;
    spec.threads = threads;

    if (!moments_out.empty()) {
        if (degrees.empty())
            throw InputError("--degrees is required for moment output");
        if (degrees.size() != spec.program.outputs.size())
            throw InputError("need one degree per output variable (" +
                             std::to_string(spec.program.outputs.size()) +
                             " outputs)");
        spec.degrees = degrees;
        auto m = ks::simulate_moments(spec);
        write_text_file(moments_out, ks::to_json(m).dump(2) + "\n");
        std::cout << "wrote " << moments_out << " (" << m.values().size()
                  << " moments of " << spec.program.outputs.size()
                  << " outputs)\n";
    }
    if (!obs_out.empty()) {
        auto rows = ks::simulate(spec);
        std::ofstream out(obs_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + obs_out);
        ks::write_observations_csv(out, spec.program.outputs, rows);
        std::cout << "wrote " << obs_out << " (" << rows.size() << " rows)\n";
    }
    if (moments_out.empty() && obs_out.empty())
        throw InputError("nothing to do: pass --moments-out and/or "
                         "--observations-out");
    return 0;
}

int cmd_fit(const std::string& moments_file,
            const std::vector<std::string>& reference_specs,
            bool gram_charlier, bool residuals, const std::string& out) {
    auto m = ks::moment_tensor_from_json(read_json_file(moments_file));

    ks::DensityEstimate est = [&] {
        if (gram_charlier) {
            if (m.num_axes() != 1)
                throw InputError("--gram-charlier needs univariate moments");
            return ks::fit_gram_charlier(ks::MomentVector(m.values()));
        }
        if (reference_specs.size() != m.num_axes())
            throw InputError("need one --reference per moment axis (" +
                             std::to_string(m.num_axes()) + ")");
        std::vector<ks::Distribution> refs;
        for (const auto& s : reference_specs)
            refs.push_back(parse_reference(s));
        return ks::fit_multivariate(m, refs);
    }();

    if (est.warning()) std::cerr << "warning: " << *est.warning() << "\n";

    if (residuals) {
        std::cout << "moment-reproduction residuals:\n";
        std::vector<int> idx(m.num_axes(), 0);
        do {
            double got = est.moment_of_estimate(idx);
            double want = m.at(idx);
            std::cout << "  (";
            for (std::size_t j = 0; j < idx.size(); ++j)
                std::cout << (j ? "," : "") << idx[j];
            std::cout << "): " << std::setprecision(6) << std::scientific
                      << std::fabs(got - want) << "\n";
        } while (ks::MomentTensor::next_index(idx, m.degrees()));
        std::cout.copyfmt(std::ios(nullptr));
    }

    ks::EstimateProvenance prov{"file:" + moments_file, m.degrees()};
    write_text_file(out, ks::estimate_to_json(est, prov).dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    return 0;
}

std::vector<std::vector<double>> build_grid(
    const std::vector<std::string>& axis_specs) {
    // each spec is lo:hi:n; the grid is the tensor product
    std::vector<std::vector<double>> axes;
    for (const auto& s : axis_specs) {
        double lo, hi;
        int n;
        char c1, c2;
        std::istringstream ss(s);
        if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' ||
            n < 1)
            throw InputError("bad grid spec \"" + s + "\" (want lo:hi:n)");
        std::vector<double> axis;
        for (int i = 0; i < n; ++i)
            axis.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
        axes.push_back(std::move(axis));
    }
    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
            for (double x : axis) {
                auto q = p;
                q.push_back(x);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

int cmd_eval(const std::string& estimate_file,
             const std::vector<std::string>& axis_specs,
             const std::string& out) {
    auto est = ks::estimate_from_json(read_json_file(estimate_file));
    if (axis_specs.size() != est.num_axes())
        throw InputError("need one --grid per axis (" +
                         std::to_string(est.num_axes()) + ")");
    auto points = build_grid(axis_specs);
    auto values = est.eval_grid(points);
    std::ofstream os(out, std::ios::binary);
    if (!os) throw InputError("cannot write " + out);
    ks::write_grid_csv(os, points, values);
    std::cout << "wrote " << out << " (" << points.size() << " points)\n";
    return 0;
}

int cmd_test(const std::string& estimate_file, const std::string& obs_file,
             const std::string& which, double alpha, std::uint64_t seed,
             int permutations, int threads, const std::string& out) {
    auto est = ks::estimate_from_json(read_json_file(estimate_file));
    std::ifstream is(obs_file, std::ios::binary);
    if (!is) throw InputError("cannot open " + obs_file);
    auto [names, rows] = ks::read_observations_csv(is);
    if (names.size() != est.num_axes())
        throw InputError("observation arity " + std::to_string(names.size()) +
                         " != estimate arity " +
                         std::to_string(est.num_axes()));

    ks::RngStream rng(seed, 0);
    auto draws = ks::sample_estimate(est, rows.size(), rng);

    ks::json report;
    report["test"] = which;
    report["alpha"] = alpha;
    if (which == "ks") {
        ks::json per_var = ks::json::array();
        for (std::size_t c = 0; c < names.size(); ++c) {
            std::vector<double> s1, s2;
            for (const auto& d : draws) s1.push_back(d[c]);
            for (const auto& r : rows) s2.push_back(r[c]);
            auto rep = ks::ks_two_sample(s1, s2, alpha);
            ks::json j = ks::to_json(rep);
            j["variable"] = names[c];
            std::cout << names[c] << ": D=" << rep.statistic
                      << " threshold=" << *rep.threshold << " "
                      << (rep.rejected ? "rejected" : "not rejected") << "\n";
            per_var.push_back(std::move(j));
        }
        report["reports"] = std::move(per_var);
    } else if (which == "energy") {
        ks::RngStream perm_rng(seed, 1);
        auto rep = ks::energy_two_sample(draws, rows, permutations, perm_rng,
                                         alpha, threads);
        std::cout << "energy e=" << rep.statistic << " p=" << *rep.p_value
                  << " " << (rep.rejected ? "rejected" : "not rejected")
                  << "\n";
        report["reports"] = ks::json::array({ks::to_json(rep)});
    } else {
        throw InputError("unknown test \"" + which + "\"");
    }
    write_text_file(out, report.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_table(const std::string& config_file, const std::string& out) {
    auto cfg = read_json_file(config_file);
    std::ostringstream csv;
    csv << "target,reference,M,ks_distance,threshold,decision\n";
    std::cout << std::left << std::setw(28) << "target" << std::setw(28)
              << "reference" << std::setw(5) << "M" << std::setw(12) << "KS"
              << "decision\n";
    for (const auto& row : cfg.at("rows")) {
        auto target = ks::distribution_from_json(row.at("target"));
        auto reference = ks::distribution_from_json(row.at("reference"));
        int order = row.at("orders").get<int>();
        std::size_t n = row.value("n", 1000);
        double alpha = row.value("alpha", 0.2);
        std::uint64_t seed = row.value("seed", 1);

        std::vector<double> m;
        for (int k = 0; k <= order; ++k) m.push_back(target.raw_moment(k));
        auto est = ks::fit(ks::MomentVector(m), reference);

        ks::RngStream rng(seed, 0);
        auto s1 = ks::sample_estimate_1d(est, n, rng);
        std::vector<double> s2;
        for (std::size_t i = 0; i < n; ++i) s2.push_back(target.sample(rng));
        auto rep = ks::ks_two_sample(s1, s2, alpha);

        auto label = [](const ks::Distribution& d) {
            std::string s = d.family() + "(";
            bool first = true;
            for (const auto& [k, v] : d.params()) {
                if (!first) s += ",";
                first = false;
                std::ostringstream vs;
                vs << std::setprecision(6) << v;
                s += vs.str();
            }
            return s + ")";
        };
        const char* glyph = rep.rejected ? "x" : "ok";
        csv << label(target) << "," << label(reference) << "," << order << ","
            << rep.statistic << "," << *rep.threshold << "," << glyph << "\n";
        std::cout << std::left << std::setw(28) << label(target)
                  << std::setw(28) << label(reference) << std::setw(5)
                  << order << std::setw(12) << std::setprecision(4)
                  << rep.statistic << glyph << "\n";
    }
    write_text_file(out, csv.str());
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_examples(const std::string& name, const std::string& write_dir) {
    if (!write_dir.empty()) {
        for (const auto& p : example_programs())
            write_text_file(write_dir + "/" + p.name + ".loop", p.source);
        std::cout << "wrote " << example_programs().size() << " programs to "
                  << write_dir << "\n";
        return 0;
    }
    if (!name.empty()) {
        const auto* p = find_example(name);
        if (!p) throw InputError("unknown example \"" + name + "\"");
        std::cout << p->source;
        return 0;
    }
    for (const auto& p : example_programs())
        std::cout << std::left << std::setw(28) << p.name << p.description
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"K-series density estimation toolkit"};
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads,
                   "worker threads (default: KSERIES_THREADS env or all "
                   "cores)");

    // simulate
    auto* sim = app.add_subcommand(
        "simulate", "run a probabilistic loop program; emit moments and/or "
                    "observations");
    std::string program_file, example_name, moments_out, obs_out;
    std::int64_t t = 1, reps = 1000;
    std::uint64_t seed = 0;
    std::vector<int> degrees;
    sim->add_option("--program", program_file, "program file");
    sim->add_option("--example", example_name, "bundled example name");
    sim->add_option("-t,--iterations", t, "loop iterations")->required();
    sim->add_option("-R,--replications", reps, "Monte Carlo replications");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--degrees", degrees,
                    "per-output moment degrees for --moments-out");
    sim->add_option("--moments-out", moments_out, "moments JSON output path");
    sim->add_option("--observations-out", obs_out, "observation CSV path");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a density estimate to moments");
    std::string moments_file, estimate_out = "estimate.json";
    std::vector<std::string> reference_specs;
    bool gram_charlier = false, residuals = false;
    fit->add_option("--moments", moments_file, "moments JSON file")
        ->required();
    fit->add_option("--reference", reference_specs,
                    "reference distribution (inline JSON or file), one per "
                    "axis");
    fit->add_flag("--gram-charlier", gram_charlier,
                  "use the Normal(m1, m2 - m1^2) reference");
    fit->add_flag("--residuals", residuals,
                  "print moment-reproduction residuals (quadrature)");
    fit->add_option("-o,--out", estimate_out, "estimate JSON output path");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate an estimate on a grid");
    std::string estimate_file, grid_out = "grid.csv";
    std::vector<std::string> grid_specs;
    eval->add_option("--estimate", estimate_file, "estimate JSON file")
        ->required();
    eval->add_option("--grid", grid_specs, "per-axis grid spec lo:hi:n")
        ->required();
    eval->add_option("-o,--out", grid_out, "grid CSV output path");

    // test
    auto* test = app.add_subcommand(
        "test", "two-sample test of an estimate against observations");
    std::string test_estimate, test_obs, test_kind = "ks",
                                         report_out = "report.json";
    double alpha = 0.05;
    std::uint64_t test_seed = 0;
    int permutations = 999;
    test->add_option("--estimate", test_estimate, "estimate JSON file")
        ->required();
    test->add_option("--observations", test_obs, "observation CSV file")
        ->required();
    test->add_option("--test", test_kind, "ks or energy");
    test->add_option("--alpha", alpha, "significance level");
    test->add_option("--seed", test_seed, "sampler seed");
    test->add_option("--permutations", permutations,
                     "energy permutation count");
    test->add_option("-o,--out", report_out, "report JSON output path");

    // table
    auto* table = app.add_subcommand(
        "table", "batch KS table over (target, reference, order) rows");
    std::string table_config, table_out = "table.csv";
    table->add_option("--config", table_config, "experiment config JSON")
        ->required();
    table->add_option("-o,--out", table_out, "CSV output path");

    // examples
    auto* examples = app.add_subcommand("examples",
                                        "list or dump bundled programs");
    std::string ex_name, ex_write;
    examples->add_option("name", ex_name, "print this program");
    examples->add_option("--write", ex_write,
                         "write all programs to a directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim)
            return cmd_simulate(program_file, example_name, t, reps, seed,
                                degrees, threads, moments_out, obs_out);
        if (*fit)
            return cmd_fit(moments_file, reference_specs, gram_charlier,
                           residuals, estimate_out);
        if (*eval) return cmd_eval(estimate_file, grid_specs, grid_out);
        if (*test)
            return cmd_test(test_estimate, test_obs, test_kind, alpha,
                            test_seed, permutations, threads, report_out);
        if (*table) return cmd_table(table_config, table_out);
        if (*examples) return cmd_examples(ex_name, ex_write);
    } catch (const ks::SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ks::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ks::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
