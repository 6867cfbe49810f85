// Command-line front end: sample grids, run transforms and mean-width
// computations, verify the inequality suite, and sweep parameter grids from
// a JSON config. Emits CSV or JSON records with full-precision numbers.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "alphaconv/inequalities.hpp"

using namespace alphaconv;
using nlohmann::json;

namespace {

struct Record {
    std::string name;
    int n = 1;
    double alpha = 0.0;
    double beta = kInf;
    double kappa = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int grid_m = 0;
    double runtime_ms = 0.0;
    std::map<std::string, double> diagnostics;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == ' ') c = '_';
    return s;
}

const char* kCsvHeader = "name,n,alpha,beta,kappa,lhs,rhs,slack,tolerance,pass,grid_m,runtime_ms";

std::string to_csv(const Record& r) {
    std::ostringstream os;
    os << sanitize(r.name) << ',' << r.n << ',' << fmt(r.alpha) << ',' << fmt(r.beta)
       << ',' << fmt(r.kappa) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
       << fmt(r.slack) << ',' << fmt(r.tolerance) << ',' << (r.pass ? "true" : "false")
       << ',' << r.grid_m << ',' << fmt(r.runtime_ms);
    return os.str();
}

json to_json(const Record& r) {
    json j{{"name", r.name},     {"n", r.n},
           {"alpha", r.alpha},   {"beta", r.beta == kInf ? json("inf") : json(r.beta)},
           {"kappa", r.kappa},   {"lhs", r.lhs},
           {"rhs", r.rhs},       {"slack", r.slack},
           {"tolerance", r.tolerance}, {"pass", r.pass},
           {"grid_m", r.grid_m}, {"runtime_ms", r.runtime_ms}};
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    return j;
}

struct OutputOptions {
    std::string format = "csv";
    std::string path;  // empty = stdout
    bool timing = true;
};

void emit_records(const std::vector<Record>& records, const OutputOptions& out) {
    std::ostringstream os;
    if (out.format == "csv") {
        os << kCsvHeader << '\n';
        for (const auto& r : records) os << to_csv(r) << '\n';
    } else {
        json arr = json::array();
        for (const auto& r : records) arr.push_back(to_json(r));
        os << arr.dump(2) << '\n';
    }
    if (out.path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out.path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + out.path);
        f << os.str();
    }
}

double parse_beta(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return kInf;
    return std::stod(s);
}

std::vector<double> split_numbers(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// mass-side function descriptors: indicator:a,b (1D) or indicator:a0,b0,a1,b1,
// ball:r or ball:c0,c1,r, g_alpha, quadbase:center,scale, table:path
AlphaFn make_function(const std::string& spec, const GridSpec& grid, AlphaParam p) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "indicator") {
        auto v = split_numbers(args);
        IndicatorBody body = (grid.dim() == 1)
            ? IndicatorBody::interval(v.at(0), v.at(1))
            : IndicatorBody::box2(v.at(0), v.at(1), v.at(2), v.at(3));
        return AlphaFn::from_mass(p, sample(Indicator{body}, grid, Side::Mass));
    }
    if (head == "ball") {
        auto v = split_numbers(args);
        IndicatorBody body = (v.size() == 1) ? IndicatorBody::ball(0.0, 0.0, v[0])
                                             : IndicatorBody::ball(v.at(0), v.at(1), v.at(2));
        return AlphaFn::from_mass(p, sample(Indicator{body}, grid, Side::Mass));
    }
    if (head == "g_alpha") return make_g_alpha(grid, p);
    if (head == "quadbase") {
        auto v = split_numbers(args);
        QuadraticBase q{{v.at(0), grid.dim() == 2 ? v.at(0) : 0.0}, v.at(1)};
        return AlphaFn::from_base(p, sample(q, grid, Side::Convex));
    }
    if (head == "table") {
        std::ifstream f(args);
        if (!f) throw CLI::ValidationError("--fn", "cannot open table file " + args);
        std::vector<double> vals;
        double x;
        while (f >> x) vals.push_back(x);
        return AlphaFn::from_mass(p, sample(UserTable{std::move(vals)}, grid, Side::Mass));
    }
    throw CLI::ValidationError("--fn", "unknown function descriptor: " + spec);
}

// test-function descriptors for the weighted-inequality checks:
// const:c, linear:a[,c], quad, cos, capped:c
GridFn make_psi(const std::string& spec, const GridSpec& grid) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    PointFn fn;
    if (head == "const") {
        const double c = std::stod(args);
        fn = [c](double, double) { return c; };
    } else if (head == "linear") {
        auto v = split_numbers(args);
        const double a = v.at(0), c = v.size() > 1 ? v[1] : 0.0;
        fn = [a, c](double x, double) { return a * x + c; };
    } else if (head == "quad") {
        fn = [](double x, double y) { return x * x + y * y; };
    } else if (head == "cos") {
        fn = [](double x, double) { return std::cos(x); };
    } else if (head == "capped") {
        const double c = args.empty() ? 4.0 : std::stod(args);
        fn = [c](double x, double y) { return std::min(x * x + y * y, c); };
    } else {
        throw CLI::ValidationError("--psi", "unknown test function: " + spec);
    }
    return sample_fn(fn, grid, Side::Convex);
}

double kappa_or_nan(AlphaParam p, int n) {
    if (!p.kappa_defined(n)) return std::numeric_limits<double>::quiet_NaN();
    if (!p.log_concave() && p.beta == n) return std::numeric_limits<double>::quiet_NaN();
    return p.kappa(n);
}

Record from_check(const CheckReport& c, AlphaParam p, int n, int grid_m) {
    Record r;
    r.name = c.name;
    r.n = n;
    r.alpha = p.alpha;
    r.beta = p.beta;
    r.kappa = kappa_or_nan(p, n);
    r.lhs = c.lhs;
    r.rhs = c.rhs;
    r.slack = c.slack;
    r.tolerance = c.tolerance;
    r.pass = c.pass;
    r.grid_m = grid_m;
    r.diagnostics = c.diagnostics;
    return r;
}

// ---- work items -----------------------------------------------------------

struct Task {
    std::string label;
    std::function<Record()> run;
};

std::vector<Record> run_tasks(std::vector<Task>& tasks, bool timing) {
    std::vector<Record> records(tasks.size());
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("ALPHACONV_WORKERS")) {
        const long w = std::strtol(env, nullptr, 10);
        if (w >= 1) workers = static_cast<unsigned>(w);
    }
    workers = std::max(1u, std::min<unsigned>(workers, tasks.size()));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) break;
            try {
                const auto t0 = std::chrono::steady_clock::now();
                records[i] = tasks[i].run();
                const auto t1 = std::chrono::steady_clock::now();
                records[i].runtime_ms =
                    timing ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                           : 0.0;
            } catch (const std::exception& e) {
                std::scoped_lock lock(err_mutex);
                if (!failed.exchange(true))
                    first_error = tasks[i].label + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error(first_error);
    return records;
}

Record meanwidth_record(const std::string& fn_name, AlphaParam p, const GridSpec& grid,
                        std::span<const double> epsilons) {
    AlphaFn f = make_function(fn_name, grid, p);
    WidthResult lim = epsilons.empty() ? mean_width_limit(f)
                                       : mean_width_limit(f, epsilons);
    WidthResult rep = mean_width_repr(f);
    Record r;
    r.name = "meanwidth/" + fn_name;
    r.n = grid.dim();
    r.alpha = p.alpha;
    r.beta = p.beta;
    r.kappa = kappa_or_nan(p, grid.dim());
    r.lhs = lim.value;
    r.rhs = rep.value;
    r.slack = lim.value - rep.value;
    r.tolerance = 1e-2 * std::abs(rep.value) + lim.quadrature_error_estimate +
                  rep.quadrature_error_estimate;
    r.pass = std::abs(r.slack) <= r.tolerance;
    r.grid_m = grid.count(0);
    r.diagnostics["limit_quad_err"] = lim.quadrature_error_estimate;
    r.diagnostics["repr_quad_err"] = rep.quadrature_error_estimate;
    for (std::size_t i = 0; i < lim.epsilon_schedule.size(); ++i)
        r.diagnostics["quotient_eps" + std::to_string(i)] =
            lim.epsilon_schedule[i].second;
    return r;
}

Record verify_record(const std::string& check, const std::string& fn_name,
                     const std::string& fn2_name, const std::string& psi_name,
                     AlphaParam p, const GridSpec& grid, double lambda,
                     std::optional<double> kappa_override, double beta,
                     double t_step) {
    if (check == "bbl") {
        AlphaFn f = make_function(fn_name, grid, p);
        AlphaFn g = make_function(fn2_name, grid, p);
        Record r = from_check(check_bbl(f, g, lambda, kappa_override), p, grid.dim(),
                              grid.count(0));
        r.name = "bbl/" + fn_name + "/" + fn2_name;
        return r;
    }
    if (check == "urysohn") {
        AlphaFn f = make_function(fn_name, grid, p);
        Record r = from_check(check_urysohn(f), p, grid.dim(), grid.count(0));
        r.name = "urysohn/" + fn_name;
        return r;
    }
    if (check == "poincare") {
        GridFn psi = make_psi(psi_name, grid);
        CheckReport c = check_poincare(psi, grid.dim(), beta);
        Record r = from_check(c, AlphaParam::from_beta(beta), grid.dim(), grid.count(0));
        r.name = "poincare/" + psi_name;
        return r;
    }
    if (check == "gaussian-poincare") {
        GridFn psi = make_psi(psi_name, grid);
        CheckReport c = check_gaussian_poincare(psi);
        Record r = from_check(c, AlphaParam::from_alpha(0.0), grid.dim(), grid.count(0));
        r.name = "gaussian-poincare/" + psi_name;
        return r;
    }
    if (check == "variation") {
        GridFn phi0 = sample(QuadraticBase{}, grid, Side::Convex);
        GridFn psi = make_psi(psi_name, grid);
        const double eps[] = {t_step};
        CheckReport c = check_variation_formulas(phi0, psi, eps);
        Record r = from_check(c, AlphaParam::from_alpha(0.0), grid.dim(), grid.count(0));
        r.name = "variation/" + psi_name;
        return r;
    }
    throw CLI::ValidationError("verify", "unknown check: " + check);
}

int run_records(std::vector<Task>& tasks, const OutputOptions& out) {
    std::vector<Record> records = run_tasks(tasks, out.timing);
    emit_records(records, out);
    for (const auto& r : records)
        if (!r.pass) {
            std::cerr << "FAIL: " << r.name << " slack=" << fmt(r.slack)
                      << " tolerance=" << fmt(r.tolerance) << "\n";
            return 1;
        }
    return 0;
}

// ---- sweep config ---------------------------------------------------------

std::vector<AlphaParam> params_from_config(const json& cfg) {
    std::vector<AlphaParam> out;
    if (cfg.contains("betas")) {
        for (const auto& b : cfg["betas"])
            out.push_back(AlphaParam::from_beta(
                b.is_string() ? parse_beta(b.get<std::string>()) : b.get<double>()));
    } else if (cfg.contains("alphas")) {
        for (const auto& a : cfg["alphas"])
            out.push_back(AlphaParam::from_alpha(a.get<double>()));
    } else {
        out.push_back(AlphaParam::from_alpha(0.0));
    }
    return out;
}

int run_sweep(const std::string& config_path, OutputOptions out) {
    json cfg;
    {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return 2;
        }
        try {
            cfg = json::parse(f);
        } catch (const json::parse_error& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 2;
        }
    }
    try {
        const std::string command = cfg.at("command").get<std::string>();
        const int n = cfg.value("n", 1);
        const double radius = cfg.contains("grid") ? cfg["grid"].value("radius", 16.0) : 16.0;
        const int m = cfg.contains("grid") ? cfg["grid"].value("m", 2049) : 2049;
        GridSpec grid = GridSpec::symmetric(n, radius, m);
        if (cfg.contains("format")) out.format = cfg["format"].get<std::string>();
        if (cfg.contains("output")) out.path = cfg["output"].get<std::string>();
        if (cfg.contains("timing")) out.timing = cfg["timing"].get<bool>();
        const std::uint64_t seed = cfg.value("seed", 20240809u);

        std::vector<std::string> fns;
        if (cfg.contains("fns"))
            for (const auto& f : cfg["fns"]) fns.push_back(f.get<std::string>());
        std::vector<std::string> fns2;
        if (cfg.contains("fns2"))
            for (const auto& f : cfg["fns2"]) fns2.push_back(f.get<std::string>());
        std::vector<double> lambdas;
        if (cfg.contains("lambdas"))
            for (const auto& l : cfg["lambdas"]) lambdas.push_back(l.get<double>());
        if (lambdas.empty()) lambdas.push_back(0.5);
        std::vector<std::string> psis;
        if (cfg.contains("psis"))
            for (const auto& s : cfg["psis"]) psis.push_back(s.get<std::string>());
        std::vector<double> epsilons;
        if (cfg.contains("epsilons"))
            for (const auto& e : cfg["epsilons"]) epsilons.push_back(e.get<double>());

        std::vector<Task> tasks;
        if (command == "meanwidth") {
            for (AlphaParam p : params_from_config(cfg))
                for (const auto& fn : fns)
                    tasks.push_back({"meanwidth/" + fn, [=] {
                        return meanwidth_record(fn, p, grid, epsilons);
                    }});
        } else if (command == "verify") {
            const std::string check = cfg.at("check").get<std::string>();
            if (check == "bbl" && cfg.contains("random_pairs")) {
                // seeded random alpha-concave pairs with nonnegative bases
                const int pairs = cfg["random_pairs"].get<int>();
                std::mt19937_64 rng(seed);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                std::vector<AlphaParam> ps = params_from_config(cfg);
                for (int t = 0; t < pairs; ++t) {
                    AlphaParam p = ps[t % ps.size()];
                    const double a1 = 0.4 + 1.2 * u(rng), c1 = -1.5 + 3.0 * u(rng);
                    const double a2 = 0.4 + 1.2 * u(rng), c2 = -1.5 + 3.0 * u(rng);
                    const double b1 = 0.5 * u(rng), b2 = 0.5 * u(rng);
                    const double lam = 0.2 + 0.6 * u(rng);
                    tasks.push_back({"bbl/random" + std::to_string(t), [=] {
                        auto base1 = [=](double x, double) {
                            return 0.5 * a1 * (x - c1) * (x - c1) + b1 * std::abs(x);
                        };
                        auto base2 = [=](double x, double) {
                            return 0.5 * a2 * (x - c2) * (x - c2) + b2 * std::abs(x);
                        };
                        AlphaFn f = AlphaFn::from_base(
                            p, sample_fn(base1, grid, Side::Convex));
                        AlphaFn g = AlphaFn::from_base(
                            p, sample_fn(base2, grid, Side::Convex));
                        Record r = from_check(check_bbl(f, g, lam), p, grid.dim(),
                                              grid.count(0));
                        r.name = "bbl/random" + std::to_string(t);
                        return r;
                    }});
                }
            } else if (check == "poincare" || check == "gaussian-poincare" ||
                       check == "variation") {
                for (AlphaParam p : params_from_config(cfg))
                    for (const auto& psi : psis)
                        tasks.push_back({check + "/" + psi, [=] {
                            return verify_record(check, "", "", psi, p, grid, 0.5,
                                                 std::nullopt, p.beta, 1e-3);
                        }});
            } else {
                for (AlphaParam p : params_from_config(cfg))
                    for (const auto& fn : fns) {
                        if (check == "bbl") {
                            for (const auto& fn2 : fns2)
                                for (double lam : lambdas)
                                    tasks.push_back({check + "/" + fn, [=] {
                                        return verify_record(check, fn, fn2, "", p, grid,
                                                             lam, std::nullopt, p.beta,
                                                             1e-3);
                                    }});
                        } else {
                            tasks.push_back({check + "/" + fn, [=] {
                                return verify_record(check, fn, "", "", p, grid, 0.5,
                                                     std::nullopt, p.beta, 1e-3);
                            }});
                        }
                    }
            }
        } else {
            std::cerr << "unknown sweep command: " << command << "\n";
            return 2;
        }
        return run_records(tasks, out);
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for the alpha-concave function calculus"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global output options after the subcommand

    OutputOptions out;
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", out.path, "output file (default stdout)");
    app.add_flag("!--no-timing", out.timing,
                 "suppress runtime_ms for byte-stable output");

    struct GridCli {
        int n = 1;
        double lo = -4.0, hi = 4.0;
        int m = 257;
        GridSpec make() const {
            return (n == 1) ? GridSpec::line(lo, hi, m)
                            : GridSpec::box(lo, hi, m, lo, hi, m);
        }
        GridSpec make_symmetric() const { return GridSpec::symmetric(n, hi, m); }
    };
    std::map<const CLI::App*, GridCli> grids;
    std::string beta_str = "inf";
    std::string fn_name = "g_alpha", fn2_name, psi_name = "quad";

    auto add_grid = [&](CLI::App* cmd, double dlo, double dhi, int dm) {
        GridCli& g = grids[cmd];
        g.lo = dlo;
        g.hi = dhi;
        g.m = dm;
        cmd->add_option("--n", g.n, "dimension (1 or 2)")->check(CLI::Range(1, 2));
        cmd->add_option("--lo", g.lo, "box lower bound per axis");
        cmd->add_option("--hi", g.hi, "box upper bound per axis");
        cmd->add_option("--m", g.m, "nodes per axis");
    };
    auto param = [&]() { return AlphaParam::from_beta(parse_beta(beta_str)); };

    // sample -----------------------------------------------------------
    auto* c_sample = app.add_subcommand("sample", "sample a function on a grid");
    std::string side_str = "mass";
    add_grid(c_sample, -2.0, 2.0, 257);
    c_sample->add_option("--fn", fn_name, "function descriptor");
    c_sample->add_option("--beta", beta_str, "beta parameter (number or inf)");
    c_sample->add_option("--side", side_str, "mass or convex")
        ->check(CLI::IsMember({"mass", "convex"}));

    // transform ----------------------------------------------------------
    auto* c_transform = app.add_subcommand("transform",
                                           "discrete conjugate of a convex base");
    double dual_radius = 0.0;
    int dual_m = 0;
    add_grid(c_transform, -4.0, 4.0, 513);
    c_transform->add_option("--fn", fn_name, "function descriptor");
    c_transform->add_option("--beta", beta_str, "beta parameter");
    c_transform->add_option("--dual-radius", dual_radius, "dual box radius");
    c_transform->add_option("--dual-m", dual_m, "dual node count");

    // meanwidth ----------------------------------------------------------
    auto* c_mw = app.add_subcommand("meanwidth",
                                    "mean width by the limit and representation routes");
    std::vector<double> eps_opt;
    add_grid(c_mw, -16.0, 16.0, 2049);
    c_mw->add_option("--fn", fn_name, "function descriptor");
    c_mw->add_option("--beta", beta_str, "beta parameter (number or inf)");
    c_mw->add_option("--epsilon", eps_opt, "difference-quotient schedule");

    // verify -------------------------------------------------------------
    auto* c_verify = app.add_subcommand("verify", "run one inequality check");
    c_verify->require_subcommand(1);
    double lambda = 0.5;
    double t_step = 1e-3;
    std::string alpha_str;
    std::optional<double> kappa_override;
    double kappa_opt = 0.0;

    auto add_param_opts = [&](CLI::App* cmd) {
        cmd->add_option("--beta", beta_str, "beta parameter (number or inf)");
        cmd->add_option("--alpha", alpha_str, "alpha parameter (<= 0)");
    };
    auto effective_param = [&]() {
        if (!alpha_str.empty()) return AlphaParam::from_alpha(std::stod(alpha_str));
        return param();
    };

    auto* v_bbl = c_verify->add_subcommand("bbl", "integral concavity bound");
    add_grid(v_bbl, -8.0, 8.0, 1025);
    add_param_opts(v_bbl);
    v_bbl->add_option("--fn", fn_name, "first function");
    v_bbl->add_option("--fn2", fn2_name, "second function")->required();
    v_bbl->add_option("--lambda", lambda, "mixing weight in (0,1)");
    auto* kopt = v_bbl->add_option("--kappa", kappa_opt,
                                   "override the mean exponent (volume case: 1/n)");

    auto* v_ury = c_verify->add_subcommand("urysohn", "mean-width lower bound");
    add_grid(v_ury, -16.0, 16.0, 2049);
    add_param_opts(v_ury);
    v_ury->add_option("--fn", fn_name, "function descriptor");

    auto* v_poi = c_verify->add_subcommand("poincare", "weighted gradient bound");
    add_grid(v_poi, -12.0, 12.0, 4097);
    add_param_opts(v_poi);
    v_poi->add_option("--psi", psi_name, "test function");

    auto* v_gauss = c_verify->add_subcommand("gaussian-poincare",
                                             "sharp gaussian case");
    add_grid(v_gauss, -12.0, 12.0, 4097);
    v_gauss->add_option("--psi", psi_name, "test function");

    auto* v_var = c_verify->add_subcommand("variation",
                                           "conjugate variation formulas");
    add_grid(v_var, -8.0, 8.0, 2049);
    v_var->add_option("--psi", psi_name, "test function");
    v_var->add_option("--t-step", t_step, "finite-difference step");

    // sweep ----------------------------------------------------------------
    auto* c_sweep = app.add_subcommand("sweep", "cross-product runs from a JSON config");
    std::string config_path;
    c_sweep->add_option("--config", config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (*c_sample) {
            GridSpec grid = grids[c_sample].make();
            const int n = grid.dim();
            const Side side = (side_str == "mass") ? Side::Mass : Side::Convex;
            AlphaFn f = make_function(fn_name, grid, param());
            const GridFn& g = (side == Side::Mass) ? f.mass() : f.base();
            std::ostringstream os;
            if (out.format == "csv") {
                os << (n == 1 ? "x,value" : "x0,x1,value") << '\n';
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const auto ij = grid.unindex(i);
                    os << fmt(grid.coord(0, ij[0]));
                    if (n == 2) os << ',' << fmt(grid.coord(1, ij[1]));
                    os << ',' << fmt(g[i]) << '\n';
                }
            } else {
                json arr = json::array();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const auto ij = grid.unindex(i);
                    json row{{"x", grid.coord(0, ij[0])}, {"value", g[i]}};
                    if (n == 2) row["x1"] = grid.coord(1, ij[1]);
                    arr.push_back(row);
                }
                os << arr.dump(2) << '\n';
            }
            if (out.path.empty()) std::cout << os.str();
            else std::ofstream(out.path, std::ios::binary) << os.str();
            return 0;
        }
        if (*c_transform) {
            GridSpec grid = grids[c_transform].make();
            const int n = grid.dim();
            AlphaFn f = make_function(fn_name, grid, param());
            GridSpec dual = (dual_m > 0 && dual_radius > 0)
                ? GridSpec::symmetric(n, dual_radius, dual_m)
                : default_dual_spec(f.base());
            ConjugateResult c = support_function(f, dual);
            std::ostringstream os;
            os << (n == 1 ? "y,value" : "y0,y1,value") << '\n';
            for (std::size_t i = 0; i < c.fn.size(); ++i) {
                const auto ij = dual.unindex(i);
                os << fmt(dual.coord(0, ij[0]));
                if (n == 2) os << ',' << fmt(dual.coord(1, ij[1]));
                os << ',' << fmt(c.fn[i]) << '\n';
            }
            if (c.argmax_on_boundary())
                std::cerr << "note: argmax reached the primal box edge at "
                          << c.boundary_hits << " dual nodes (truncated sup)\n";
            if (out.path.empty()) std::cout << os.str();
            else std::ofstream(out.path, std::ios::binary) << os.str();
            return 0;
        }
        if (*c_mw) {
            GridSpec grid = grids[c_mw].make_symmetric();
            std::vector<Task> tasks;
            tasks.push_back({"meanwidth", [&] {
                return meanwidth_record(fn_name, param(), grid, eps_opt);
            }});
            return run_records(tasks, out);
        }
        if (*c_verify) {
            if (kopt->count() > 0) kappa_override = kappa_opt;
            std::string check;
            const CLI::App* active = nullptr;
            if (*v_bbl) { check = "bbl"; active = v_bbl; }
            if (*v_ury) { check = "urysohn"; active = v_ury; }
            if (*v_poi) { check = "poincare"; active = v_poi; }
            if (*v_gauss) { check = "gaussian-poincare"; active = v_gauss; }
            if (*v_var) { check = "variation"; active = v_var; }
            GridSpec grid = grids[active].make_symmetric();
            const AlphaParam p =
                (check == "poincare" || check == "gaussian-poincare" ||
                 check == "variation")
                    ? AlphaParam::from_beta(parse_beta(beta_str))
                    : effective_param();
            std::vector<Task> tasks;
            tasks.push_back({check, [&, check, p] {
                return verify_record(check, fn_name, fn2_name, psi_name, p, grid,
                                     lambda, kappa_override, p.beta, t_step);
            }});
            return run_records(tasks, out);
        }
        if (*c_sweep) return run_sweep(config_path, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
