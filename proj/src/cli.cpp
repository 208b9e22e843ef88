#include "heun_rsj/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <thread>
#include <tuple>

#include "CLI11.hpp"
#include "heun_rsj/error.hpp"
#include "heun_rsj/heun_poly.hpp"
#include "heun_rsj/io.hpp"
#include "heun_rsj/rsj_dynamics.hpp"
#include "heun_rsj/spectral.hpp"
#include "heun_rsj/structure.hpp"
#include "heun_rsj/transforms.hpp"

namespace heun_rsj::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised for argument problems the parser itself cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json error_object(std::string_view name, std::string_view message) {
    Json j;
    j["name"] = name;
    j["message"] = message;
    return j;
}

Json header() {
    Json j;
    j["schema"] = kSchema;
    return j;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
    int n = 0;
    double mu = 0.0;
    std::string format = "json";
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
    if (a.n < 0) throw UsageError("--n must be non-negative");
    const SpectralSet set = lambda_spectrum(a.n, a.mu);
    Json roots = Json::array();
    for (std::size_t i = 0; i < set.lambdas.size(); ++i) {
        const DcheParams d = set.params(i);
        Json r;
        r["index"] = i;
        r["lambda"] = d.lambda();
        r["delta"] = delta_direct(d);
        try {
            const RsjParams p = dche_to_params(d);
            r["physical"] = Json{{"omega", p.omega()}, {"A", p.A()}, {"B", p.B()}};
        } catch (const Error& e) {
            r["physical"] = Json{{"error", error_object(e.name(), e.what())}};
        }
        roots.push_back(std::move(r));
    }
    if (a.format == "csv") {
        out << "index,lambda,omega,A,B,status\n";
        for (const auto& r : roots) {
            out << r["index"].get<std::size_t>() << ',' << format_double(r["lambda"].get<double>());
            const auto& phys = r["physical"];
            if (phys.contains("error")) {
                out << ",,,," << phys["error"]["name"].get<std::string>() << '\n';
            } else {
                out << ',' << format_double(phys["omega"].get<double>()) << ','
                    << format_double(phys["A"].get<double>()) << ','
                    << format_double(phys["B"].get<double>()) << ",ok\n";
            }
        }
        return kExitOk;
    }
    Json j = header();
    j["n"] = set.n;
    j["mu"] = set.mu;
    j["lambdas"] = set.lambdas;
    j["roots"] = std::move(roots);
    write_json(out, j);
    return kExitOk;
}

// -------------------------------------------------------------------- poly

struct RootArgs {
    int n = 0;
    double mu = 0.0;
    int root = 0;
};

DcheParams select_root(const RootArgs& a) {
    if (a.n < 0) throw UsageError("--n must be non-negative");
    const SpectralSet set = lambda_spectrum(a.n, a.mu);
    if (a.root < 0 || a.root > a.n) {
        throw UsageError("--root must lie in 0.." + std::to_string(a.n));
    }
    return set.params(static_cast<std::size_t>(a.root));
}

int cmd_poly(const RootArgs& a, const std::string& format, std::ostream& out) {
    const DcheParams d = select_root(a);
    const HeunPolynomial P = build_polynomial(d);
    if (format == "csv") {
        out << "k,a_k\n";
        for (int k = 0; k <= P.n(); ++k) out << k << ',' << format_double(P.coeff(k)) << '\n';
        return kExitOk;
    }
    Json j = header();
    j["root"] = a.root;
    j["polynomial"] = polynomial_to_json(P);
    try {
        const RsjParams p = dche_to_params(d);
        j["physical"] = Json{{"omega", p.omega()}, {"A", p.A()}, {"B", p.B()}};
        j["epsilon"] = epsilon_sign(P);
    } catch (const Error& e) {
        j["physical"] = Json{{"error", error_object(e.name(), e.what())}};
    }
    write_json(out, j);
    return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyTolerances {
    double eq11 = 1e-9;
    double linear = 1e-10;
    double symmetry = 1e-9;
    double relations = 1e-10;
    double factorization = 1e-10;
    double determinant = 1e-9;
    double spectral = 1e-10;
    double oracle = 1e-10;
    double coeff_paths = 1e-9;
};

struct CheckLine {
    std::string name;
    double value;
    double tolerance;

    [[nodiscard]] bool pass() const { return value <= tolerance; }
};

int cmd_verify(const RootArgs& a, const VerifyTolerances& tol, const std::string& format,
               std::ostream& out, std::ostream& err) {
    const DcheParams d = select_root(a);
    const HeunPolynomial P = build_polynomial(d);
    const double amax = P.max_abs_coeff();
    std::vector<CheckLine> lines;

    lines.push_back({"eq11_residual", max_residual_eq11(P), tol.eq11});
    lines.push_back({"linear_system_residual", residual_linear_system(P).max_abs() / amax, tol.linear});

    const int eps = epsilon_sign(P);
    lines.push_back({"symmetry_residual", symmetry_residual(P, eps), tol.symmetry});
    double rel = 0.0;
    for (double r : coeff_relations_residual(P, eps)) rel = std::max(rel, std::abs(r));
    lines.push_back({"coeff_relations_residual", rel / amax, tol.relations});

    const FactorizationCheck fc = check_factorization(d);
    lines.push_back({"factorization_deviation", fc.max_entry_deviation, tol.factorization});

    const SpectralCondition sc = spectral_condition(d);
    const double delta = delta_direct(d);
    const double det_gap =
        std::abs(std::abs(sc.det_plus * sc.det_minus) - std::abs(delta)) / delta_scale(d);
    lines.push_back({"det_product_vs_delta", det_gap, tol.determinant});
    lines.push_back({"split_spectral_condition", sc.min_relative(), tol.spectral});

    if (d.n() >= 1) {
        lines.push_back({"delta_matrix_vs_direct",
                         std::abs(delta_matrix(d) - delta) / delta_scale(d), tol.oracle});
        double coeff_gap = 0.0;
        for (int k = 1; k < d.n(); ++k) {
            coeff_gap = std::max(coeff_gap, std::abs(coeff_matrix(k, d) - P.coeff(k)) / amax);
        }
        lines.push_back({"coeff_matrix_vs_ratios", coeff_gap, tol.coeff_paths});
    }

    bool all_pass = std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass(); });
    if (format == "json") {
        Json j = header();
        j["polynomial"] = polynomial_to_json(P);
        j["epsilon"] = eps;
        j["factorization_sign"] = fc.sign;
        Json checks = Json::array();
        for (const auto& l : lines) {
            checks.push_back(Json{{"name", l.name}, {"value", l.value}, {"tolerance", l.tolerance},
                                  {"pass", l.pass()}});
        }
        j["checks"] = std::move(checks);
        j["pass"] = all_pass;
        write_json(out, j);
    } else {
        out << "n " << d.n() << " mu " << format_double(d.mu()) << " lambda "
            << format_double(d.lambda()) << " epsilon " << eps << " factorization_sign " << fc.sign
            << '\n';
        for (const auto& l : lines) {
            out << l.name << ' ' << format_double(l.value) << " <= " << format_double(l.tolerance) << ' '
                << (l.pass() ? "PASS" : "FAIL") << '\n';
        }
    }
    if (!all_pass) {
        err << to_string(ErrorCode::VerificationFailed) << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    double A = 1.0;
    double B = 0.0;
    double omega = 1.0;
    double t_end = 0.0;
    double periods = 1.0;
    double h = 0.0;
    std::string mode = "phase";
    double phi0 = 0.0;
    double x0 = 1.0;
    double y0 = 0.0;
    std::string format = "csv";
    std::string output;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const RsjParams p(a.A, a.B, a.omega);
    const double t_end = a.t_end > 0.0 ? a.t_end : a.periods * p.period();
    const double h = a.h > 0.0 ? a.h : default_step(p);
    const Trajectory traj = a.mode == "xy" ? integrate_xy(p, a.x0, a.y0, t_end, h)
                                           : integrate_phase(p, a.phi0, t_end, h);
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw UsageError("cannot open " + a.output);
    }
    std::ostream& sink = a.output.empty() ? out : file;
    if (a.format == "json") {
        write_json(sink, trajectory_to_json(traj));
    } else {
        write_trajectory_csv(sink, traj);
    }
    return kExitOk;
}

// ----------------------------------------------------------- phase-compare

struct PhaseCompareArgs {
    RootArgs root;
    double periods = 10.0;
    int steps_per_period = kDefaultStepsPerPeriod;
    double tol = 1e-6;
    std::string format = "json";
};

int cmd_phase_compare(const PhaseCompareArgs& a, std::ostream& out, std::ostream& err) {
    if (!(a.periods > 0.0) || a.steps_per_period < 4) throw UsageError("invalid period/step settings");
    const DcheParams d = select_root(a.root);
    const HeunPolynomial P = build_polynomial(d);
    const RsjParams p = dche_to_params(d);
    const double h = p.period() / a.steps_per_period;
    const double t_end = a.periods * p.period();

    const double phi0 = phase_from_poly(P, 0.0);
    const Trajectory rk = integrate_phase(p, phi0, t_end, h);
    const std::vector<double> closed = phase_from_poly(P, rk.times());

    double deviation = 0.0;
    for (std::size_t i = 0; i < rk.size(); ++i) {
        deviation = std::max(deviation, wrapped_distance(rk.value(i), closed[i]));
    }

    // Residual of phi' + sin(phi) - q on a uniform grid at twice the density.
    const double hf = h / 2.0;
    const auto nf = static_cast<std::size_t>(std::llround(t_end / hf));
    std::vector<double> grid(nf + 1);
    for (std::size_t i = 0; i <= nf; ++i) grid[i] = static_cast<double>(i) * hf;
    const std::vector<double> phi = phase_from_poly(P, grid);
    const std::vector<double> dphi = central_derivative(phi, hf);
    double ode_residual = 0.0;
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
        ode_residual = std::max(ode_residual, std::abs(dphi[i] + std::sin(phi[i]) - bias(grid[i], p)));
    }

    const bool pass = deviation <= a.tol && ode_residual <= a.tol;
    if (a.format == "text") {
        out << "max_deviation " << format_double(deviation) << '\n'
            << "ode_residual " << format_double(ode_residual) << '\n'
            << "tolerance " << format_double(a.tol) << '\n'
            << (pass ? "PASS" : "FAIL") << '\n';
    } else {
        Json j = header();
        j["polynomial"] = polynomial_to_json(P);
        j["physical"] = Json{{"omega", p.omega()}, {"A", p.A()}, {"B", p.B()}};
        j["periods"] = a.periods;
        j["step"] = h;
        j["max_deviation"] = deviation;
        j["ode_residual"] = ode_residual;
        j["tolerance"] = a.tol;
        j["pass"] = pass;
        write_json(out, j);
    }
    if (!pass) {
        err << to_string(ErrorCode::VerificationFailed) << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ------------------------------------------------------------------- ortho

struct OrthoArgs {
    int n1 = 0, root1 = 0, n2 = 1, root2 = 0;
    double mu = 1.0;
    double tol = 1e-8;
};

int cmd_ortho(const OrthoArgs& a, std::ostream& out, std::ostream& err) {
    const HeunPolynomial P1 = build_polynomial(select_root({a.n1, a.mu, a.root1}));
    const HeunPolynomial P2 = build_polynomial(select_root({a.n2, a.mu, a.root2}));
    const OrthogonalityReport r = orthogonality_integral(P1, P2);
    const bool pass = std::abs(r.relative()) <= a.tol;
    Json j = header();
    j["p1"] = polynomial_to_json(P1);
    j["p2"] = polynomial_to_json(P2);
    j["value"] = r.value;
    j["scale"] = r.scale;
    j["relative"] = r.relative();
    j["norm1"] = norm_integral(P1);
    j["norm2"] = norm_integral(P2);
    j["tolerance"] = a.tol;
    j["pass"] = pass;
    write_json(out, j);
    if (!pass) {
        err << to_string(ErrorCode::VerificationFailed) << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    int n_min = 0;
    int n_max = 3;
    double mu_min = 0.25;
    double mu_max = 2.0;
    int mu_count = 8;
    std::string format = "csv";
};

struct SweepRow {
    int n;
    double mu;
    double lambda;
    std::optional<RsjParams> physical;
};

unsigned sweep_threads() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HEUN_RSJ_THREADS")) {
        const std::string_view text(env);
        unsigned cap = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec != std::errc() || end != text.data() + text.size() || cap == 0) {
            throw UsageError("HEUN_RSJ_THREADS must be a positive integer");
        }
        threads = std::min(threads, cap);
    }
    return threads;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.n_min < 0 || a.n_max < a.n_min) throw UsageError("need 0 <= n-min <= n-max");
    if (a.mu_count < 1) throw UsageError("--mu-count must be >= 1");

    struct Point {
        int n;
        double mu;
    };
    std::vector<Point> points;
    for (int n = a.n_min; n <= a.n_max; ++n) {
        for (int i = 0; i < a.mu_count; ++i) {
            const double mu = a.mu_count == 1 ? a.mu_min
                                              : a.mu_min + (a.mu_max - a.mu_min) * i / (a.mu_count - 1);
            points.push_back({n, mu});
        }
    }

    // Each point writes only its own slot; the merge below is in grid order.
    std::vector<std::vector<SweepRow>> results(points.size());
    std::vector<std::string> failures(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                const SpectralSet set = lambda_spectrum(points[i].n, points[i].mu);
                for (std::size_t k = 0; k < set.lambdas.size(); ++k) {
                    SweepRow row{points[i].n, points[i].mu, set.lambdas[k], std::nullopt};
                    try {
                        row.physical = dche_to_params(set.params(k));
                    } catch (const Error&) {
                    }
                    results[i].push_back(row);
                }
            } catch (const Error& e) {
                failures[i] = e.what();
            }
        }
    };
    const unsigned threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(points.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!failures[i].empty()) throw Error(ErrorCode::ConvergenceFailure, failures[i]);
    }

    std::vector<SweepRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
        return std::tie(x.n, x.mu) < std::tie(y.n, y.mu);
    });

    if (a.format == "json") {
        Json j = header();
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json o{{"n", r.n}, {"mu", r.mu}, {"lambda", r.lambda}};
            if (r.physical) {
                o["omega"] = r.physical->omega();
                o["A"] = r.physical->A();
                o["B"] = r.physical->B();
            } else {
                o["error"] = error_object(to_string(ErrorCode::NonPositiveDiscriminant),
                                          "lambda + mu^2 <= 0 or mu = 0");
            }
            arr.push_back(std::move(o));
        }
        j["rows"] = std::move(arr);
        write_json(out, j);
        return kExitOk;
    }
    out << "n,mu,lambda,omega,A,B\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.mu) << ',' << format_double(r.lambda);
        if (r.physical) {
            out << ',' << format_double(r.physical->omega()) << ',' << format_double(r.physical->A())
                << ',' << format_double(r.physical->B()) << '\n';
        } else {
            out << ",,,\n";
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heun-polynomial solutions of the overdamped RSJ junction under harmonic bias",
                 "heun-rsj"};
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"json", "csv"});

    SpectrumArgs spectrum;
    auto* sp = app.add_subcommand("spectrum", "lambda roots of the spectral determinant");
    sp->add_option("--n", spectrum.n, "polynomial degree")->required();
    sp->add_option("--mu", spectrum.mu, "mu = A/(2 omega)")->required();
    sp->add_option("--format", spectrum.format)->check(formats);

    RootArgs poly_root;
    std::string poly_format = "json";
    auto* po = app.add_subcommand("poly", "polynomial coefficients for one spectral root");
    po->add_option("--n", poly_root.n)->required();
    po->add_option("--mu", poly_root.mu)->required();
    po->add_option("--root", poly_root.root, "root index, ascending lambda")->required();
    po->add_option("--format", poly_format)->check(formats);

    RootArgs verify_root;
    VerifyTolerances vtol;
    std::string verify_format = "text";
    auto* ve = app.add_subcommand("verify", "residual dashboard for one spectral polynomial");
    ve->add_option("--n", verify_root.n)->required();
    ve->add_option("--mu", verify_root.mu)->required();
    ve->add_option("--root", verify_root.root)->required();
    ve->add_option("--format", verify_format)->check(CLI::IsMember({"text", "json"}));
    ve->add_option("--tol-eq11", vtol.eq11);
    ve->add_option("--tol-linear", vtol.linear);
    ve->add_option("--tol-symmetry", vtol.symmetry);
    ve->add_option("--tol-relations", vtol.relations);
    ve->add_option("--tol-factorization", vtol.factorization);
    ve->add_option("--tol-determinant", vtol.determinant);
    ve->add_option("--tol-spectral", vtol.spectral);
    ve->add_option("--tol-oracle", vtol.oracle);
    ve->add_option("--tol-coeff-paths", vtol.coeff_paths);

    SimulateArgs sim;
    auto* si = app.add_subcommand("simulate", "RK4 trajectory of the phase or the linear system");
    si->add_option("--A", sim.A)->required();
    si->add_option("--B", sim.B)->required();
    si->add_option("--omega", sim.omega)->required();
    si->add_option("--t-end", sim.t_end, "end time (overrides --periods)");
    si->add_option("--periods", sim.periods, "length in drive periods");
    si->add_option("--step", sim.h, "RK4 step (default T/2000)");
    si->add_option("--mode", sim.mode)->check(CLI::IsMember({"phase", "xy"}));
    si->add_option("--phi0", sim.phi0);
    si->add_option("--x0", sim.x0);
    si->add_option("--y0", sim.y0);
    si->add_option("--format", sim.format)->check(formats);
    si->add_option("--output", sim.output, "write to file instead of stdout");

    PhaseCompareArgs pc;
    auto* ph = app.add_subcommand("phase-compare", "closed-form phase against RK4");
    ph->add_option("--n", pc.root.n)->required();
    ph->add_option("--mu", pc.root.mu)->required();
    ph->add_option("--root", pc.root.root)->required();
    ph->add_option("--periods", pc.periods);
    ph->add_option("--steps-per-period", pc.steps_per_period);
    ph->add_option("--tol", pc.tol);
    ph->add_option("--format", pc.format)->check(CLI::IsMember({"json", "text"}));

    OrthoArgs orth;
    auto* ort = app.add_subcommand("ortho", "weighted orthogonality integral of two polynomials");
    ort->add_option("--n1", orth.n1)->required();
    ort->add_option("--root1", orth.root1)->required();
    ort->add_option("--n2", orth.n2)->required();
    ort->add_option("--root2", orth.root2)->required();
    ort->add_option("--mu", orth.mu)->required();
    ort->add_option("--tol", orth.tol);

    SweepArgs sw;
    auto* swp = app.add_subcommand("sweep", "spectral surface over an (n, mu) grid");
    swp->add_option("--n-min", sw.n_min);
    swp->add_option("--n-max", sw.n_max);
    swp->add_option("--mu-min", sw.mu_min);
    swp->add_option("--mu-max", sw.mu_max);
    swp->add_option("--mu-count", sw.mu_count);
    swp->add_option("--format", sw.format)->check(formats);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    bool wants_json = false;
    try {
        if (sp->parsed()) {
            wants_json = spectrum.format == "json";
            return cmd_spectrum(spectrum, out);
        }
        if (po->parsed()) {
            wants_json = poly_format == "json";
            return cmd_poly(poly_root, poly_format, out);
        }
        if (ve->parsed()) {
            wants_json = verify_format == "json";
            return cmd_verify(verify_root, vtol, verify_format, out, err);
        }
        if (si->parsed()) return cmd_simulate(sim, out);
        if (ph->parsed()) {
            wants_json = pc.format == "json";
            return cmd_phase_compare(pc, out, err);
        }
        if (ort->parsed()) {
            wants_json = true;
            return cmd_ortho(orth, out, err);
        }
        if (swp->parsed()) return cmd_sweep(sw, out);
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidParameters) {
            err << e.name() << ": " << e.what() << '\n';
            return kExitUsage;
        }
        err << e.name() << '\n' << e.what() << '\n';
        if (wants_json) {
            Json j = header();
            j["error"] = error_object(e.name(), e.what());
            write_json(out, j);
        }
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace heun_rsj::cli
