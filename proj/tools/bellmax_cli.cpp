#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bellmax/bellman.hpp"
#include "bellmax/carleson.hpp"
#include "bellmax/dyadic.hpp"
#include "bellmax/extremizer.hpp"
#include "bellmax/harness.hpp"
#include "bellmax/json_writer.hpp"

namespace {

using namespace bellmax;

struct ParamFlags {
    double p = 2.0;
    double f = 1.0;
    double F = 1.0;
    double k = 1.0;
    double tol = 1e-13;
};

void add_param_flags(CLI::App* cmd, ParamFlags& pf) {
    cmd->add_option("-p,--p", pf.p, "integrability exponent (> 1)")->required();
    cmd->add_option("-f,--f", pf.f, "mean of the test function")->required();
    cmd->add_option("-F,--F", pf.F, "p-th moment of the test function")->required();
    cmd->add_option("-k,--k", pf.k, "measure of the target set (default 1)");
    cmd->add_option("--tol", pf.tol, "root-finding absolute tolerance");
}

RootFindConfig root_cfg(const ParamFlags& pf) {
    RootFindConfig rf;
    rf.abs_tol = pf.tol;
    rf.rel_tol = std::max(pf.tol * 10.0, 1e-15);
    return rf;
}

int write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream os(path);
    if (!os) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return 3;
    }
    os << text;
    os.flush();
    if (!os) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return 3;
    }
    return 0;
}

int cmd_bellman(const ParamFlags& pf) {
    ProblemParams pr{pf.p, pf.f, pf.F, pf.k};
    pr.validate();
    RootFindConfig rf = root_cfg(pf);
    double value = bellman_value(pr, rf);
    ExtremizerProfile prof = build_extremizer(pr, rf);
    double p0 = pr.f, p1 = pr.f;
    if (pr.k < 1.0) {
        FeasibleDomain dom = feasible_domain(pr, rf);
        p0 = dom.p0;
        p1 = dom.p1;
    }
    JsonObject o;
    o.field("value", value)
        .field("B0", prof.B0)
        .field("Z0", prof.Z0)
        .field("a", prof.a)
        .field_raw("domain", json_array(std::vector<double>{p0, p1}));
    std::cout << o.str() << "\n";
    return 0;
}

int cmd_extremizer(const ParamFlags& pf, int samples, const std::string& out_path) {
    ProblemParams pr{pf.p, pf.f, pf.F, pf.k};
    pr.validate();
    ExtremizerProfile prof = build_extremizer(pr, root_cfg(pf));
    std::ostringstream rows;
    rows << "t,g,hardy_avg\n";
    for (int i = 0; i < samples; ++i) {
        double t = (i + 1 == samples)
                       ? 1.0
                       : std::pow(10.0, -6.0 * (1.0 - static_cast<double>(i) / (samples - 1)));
        rows << fmt17(t) << ',' << fmt17(eval_extremizer(prof, t)) << ','
             << fmt17(extremizer_hardy_average(prof, t)) << '\n';
    }
    return write_text(out_path, rows.str());
}

int cmd_maximal(const std::string& in_path, double p, int step_level, double lambda,
                const std::string& out_csv, const std::string& rearranged_csv) {
    std::ifstream is(in_path);
    if (!is) {
        std::cerr << "error: cannot open '" << in_path << "' for reading\n";
        return 3;
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<double> nums;
        double x;
        while (row >> x) nums.push_back(x);
        if (!nums.empty()) rows.push_back(std::move(nums));  // header lines parse empty
    }
    if (rows.empty()) {
        std::cerr << "error: no numeric rows in '" << in_path << "'\n";
        return 2;
    }
    std::vector<double> values;
    if (rows.front().size() >= 3) {
        // step-function rows "t_start,t_end,value": sample exact cell averages
        // onto the dyadic grid at --level
        std::vector<double> breaks{0.0}, vals;
        for (const auto& r : rows) {
            if (std::fabs(r[0] - breaks.back()) > 1e-12)
                throw std::invalid_argument("step csv cells must be contiguous from 0");
            breaks.push_back(r[1]);
            vals.push_back(r[2]);
        }
        StepFunction sf(std::move(breaks), std::move(vals));
        std::size_t n = std::size_t{1} << step_level;
        double cm = std::ldexp(1.0, -step_level);
        values.resize(n);
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double next = sf.prefix_mass(static_cast<double>(i + 1) * cm);
            values[i] = (next - prev) / cm;
            prev = next;
        }
    } else {
        for (const auto& r : rows) values.push_back(r.back());  // "index,value" or bare values
        if ((values.size() & (values.size() - 1)) != 0) {
            std::cerr << "error: need a power-of-two count of cell values, got " << values.size()
                      << "\n";
            return 2;
        }
    }
    int level = 0;
    while ((std::size_t{1} << level) < values.size()) ++level;
    DyadicStepFunction phi(level, std::move(values));
    DyadicStepFunction maxfn = maximal_operator(phi);
    if (!out_csv.empty()) {
        std::ostringstream os;
        write_dyadic_csv(maxfn, os);
        int rc = write_text(out_csv, os.str());
        if (rc != 0) return rc;
    }
    if (!rearranged_csv.empty()) {
        std::ostringstream os;
        write_step_csv(rearrangement(phi), os);
        int rc = write_text(rearranged_csv, os.str());
        if (rc != 0) return rc;
    }
    JsonObject o;
    o.field("level", level)
        .field("cells", phi.cells())
        .field("f", phi.mass())
        .field("F", phi.p_moment(p))
        .field("maximal_lp", maxfn.p_moment(p));
    if (lambda > 0.0) {
        DyadicSet above;
        above.level = level;
        above.mask.assign(phi.cells(), 0);
        for (std::size_t i = 0; i < phi.cells(); ++i)
            above.mask[i] = maxfn.values()[i] > lambda ? 1 : 0;
        JsonObject wt;
        wt.field("lambda", lambda)
            .field("margin", weak_type_margin(phi, maxfn, lambda))
            .field("set_measure", above.measure())
            .field_str("set_mask", above.hex_mask());
        o.field_raw("weak_type", wt.str());
    }
    std::cout << o.str() << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, const TrialConfig& cfg) {
    InequalityReport rep = run_suite(suite, cfg);
    std::cout << rep.to_json() << "\n";
    return rep.passed ? 0 : 1;
}

int cmd_sharpness(const ParamFlags& pf, int max_level) {
    ProblemParams pr{pf.p, pf.f, pf.F, pf.k};
    pr.validate();
    RootFindConfig rf = root_cfg(pf);
    std::vector<int> levels;
    if (max_level < 8)
        levels.push_back(max_level);
    else
        for (int l = 8; l <= max_level; l += 2) levels.push_back(l);
    if (levels.back() != max_level) levels.push_back(max_level);
    std::vector<double> ratios;
    double k_rounded = pr.k;
    for (int l : levels) {
        SharpnessPoint sp = sharpness_ratio(pr, l, rf);
        ratios.push_back(sp.ratio);
        k_rounded = sp.k_rounded;
    }
    JsonObject o;
    o.field("p", pf.p)
        .field("f", pf.f)
        .field("F", pf.F)
        .field("k", pf.k)
        .field("k_rounded", k_rounded)
        .field_raw("levels", json_array(levels))
        .field_raw("ratios", json_array(ratios))
        .field("final_ratio", ratios.back());
    std::cout << o.str() << "\n";
    return 0;
}

int cmd_carleson(double p, int level, double k, std::uint64_t seed) {
    require_exponent(p);
    if (level < 1 || level > kMaxDyadicLevel)
        throw std::domain_error("carleson: level must lie in [1, 24]");
    TrialRng rng = TrialRng::stream(seed, 0);
    DyadicStepFunction phi(level, detail::random_values(rng, std::size_t{1} << level));
    CarlesonWeights w = random_admissible_weights(level, k, rng);
    double k_total = std::min(w.total(), 1.0);
    double sum = carleson_sum(phi, w, p);
    ProblemParams pr{p, phi.mass(), std::max(phi.p_moment(p), std::pow(phi.mass(), p)), k_total};
    double bound = bellman_value(pr);
    JsonObject o;
    o.field("p", p)
        .field("level", level)
        .field("k_target", k)
        .field("k_total", k_total)
        .field("f", pr.f)
        .field("F", pr.F)
        .field("carleson_sum", sum)
        .field("bellman_bound", bound)
        .field("margin", bound - sum)
        .field("min_packing_slack", w.min_packing_slack());
    std::cout << o.str() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bellman function of the dyadic maximal operator on [0,1)"};
    app.require_subcommand(1);

    ParamFlags bell_flags;
    CLI::App* bell = app.add_subcommand("bellman", "compute B_p(f,F,k) and optimizer diagnostics");
    add_param_flags(bell, bell_flags);

    ParamFlags ext_flags;
    int ext_samples = 200;
    std::string ext_out = "-";
    CLI::App* ext = app.add_subcommand("extremizer", "sample the attaining profile to CSV");
    add_param_flags(ext, ext_flags);
    ext->add_option("--samples", ext_samples, "number of log-spaced sample rows")
        ->check(CLI::Range(2, 1000000));
    ext->add_option("--out", ext_out, "output CSV path ('-' for stdout)");

    std::string max_in, max_out, max_rearranged;
    double max_p = 2.0, max_lambda = 0.0;
    int max_level = 10;
    CLI::App* maxc = app.add_subcommand("maximal", "exact maximal function of a dyadic step function");
    maxc->add_option("--in", max_in,
                     "input CSV: 2^m cell values, or t_start,t_end,value step rows")
        ->required();
    maxc->add_option("-p,--p", max_p, "exponent for the moment summary");
    maxc->add_option("--level", max_level, "dyadic level used when sampling step-function input")
        ->check(CLI::Range(1, 24));
    maxc->add_option("--lambda", max_lambda,
                     "report the weak-type margin and superlevel set at this threshold");
    maxc->add_option("--out", max_out, "output CSV for the maximal function");
    maxc->add_option("--rearranged-out", max_rearranged,
                     "output CSV for the non-increasing rearrangement of the input");

    std::string suite;
    TrialConfig verify_cfg;
    CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", suite,
                       "one of: lemma31, weak_type, ineq_1_10, ineq_1_11, carleson, "
                       "ineq_6_10, ineq_6_12, sharpness")
        ->required();
    verify->add_option("--seed", verify_cfg.seed, "RNG seed");
    verify->add_option("--trials", verify_cfg.trials, "number of trials");
    verify->add_option("--level", verify_cfg.level, "maximum dyadic level");
    verify->add_option("--tol", verify_cfg.slack, "margin slack");

    ParamFlags sharp_flags;
    int sharp_level = 14;
    CLI::App* sharp = app.add_subcommand("sharpness", "constructive attainment ratios by level");
    add_param_flags(sharp, sharp_flags);
    sharp->add_option("--level", sharp_level, "maximum dyadic level")->check(CLI::Range(1, 24));

    double car_p = 2.0, car_k = 0.5;
    int car_level = 8;
    std::uint64_t car_seed = 1;
    CLI::App* car = app.add_subcommand("carleson", "random admissible weights vs the Bellman bound");
    car->add_option("-p,--p", car_p, "integrability exponent");
    car->add_option("--level", car_level, "dyadic level");
    car->add_option("-k,--k", car_k, "total weight");
    car->add_option("--seed", car_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bell->parsed()) return cmd_bellman(bell_flags);
        if (ext->parsed()) return cmd_extremizer(ext_flags, ext_samples, ext_out);
        if (maxc->parsed())
            return cmd_maximal(max_in, max_p, max_level, max_lambda, max_out, max_rearranged);
        if (verify->parsed()) return cmd_verify(suite, verify_cfg);
        if (sharp->parsed()) return cmd_sharpness(sharp_flags, sharp_level);
        if (car->parsed()) return cmd_carleson(car_p, car_level, car_k, car_seed);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
