// whsolve: batch front-end for the wh library.
//
// Every run is driven by a single JSON config file; the few command-line
// flags (--method, --rows, --cols, --m) override the matching config keys.
// Outputs are byte-stable: CSV cells are printed with %.17g, '.' decimal
// point and '\n' line endings, and JSON objects have sorted keys.
//
// Exit codes: 0 success, 2 config/usage error, 3 domain error,
// 4 numerical-consistency error (including a normal-equation residual above
// tolerance, which aborts the run before anything is written).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wh/wh.hpp"

namespace {

using json = nlohmann::json;
using Scalar = double;
using wh::Index;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("WH_LOG");
        return env ? std::atoi(env) : 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[wh] " << msg << "\n";
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// config schema

struct NumericConfig {
    Index order = 64;
    Index n_grid = 0;          // 0 = auto
    Index max_lag = 0;         // model ACF truncation, 0 = auto
    Index series_length = 0;   // phi/psi truncation, 0 = max(64, 4*L_c, order)
    Index n = 0;               // invert: matrix dimension, 0 = max(rows, cols)
    Index window = 0;          // invert finite: summation window, 0 = auto
    double tol = 1e-8;         // residual gate and route agreement
    double factorization_tol = 1e-6;
    std::vector<Index> p_list;
    Index reference_order = 0;
};

struct RunConfig {
    std::string command;
    json model;
    json rhs;
    std::string method = "classical";
    Index m = 1;
    Index rows = 1;
    Index cols = 10;
    NumericConfig numeric;
    std::string out_path;
    std::string out_format = "csv";
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

RunConfig parse_config(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    cfg.command = command;
    try {
        if (doc.contains("command") && doc.at("command").get<std::string>() != command)
            throw ConfigError("config command '" +
                              doc.at("command").get<std::string>() +
                              "' does not match subcommand '" + command + "'");
        if (!doc.contains("model")) throw ConfigError("config is missing \"model\"");
        cfg.model = doc.at("model");
        if (doc.contains("rhs")) cfg.rhs = doc.at("rhs");
        cfg.method = get_or<std::string>(doc, "method", cfg.method);
        cfg.m = get_or<Index>(doc, "m", cfg.m);
        cfg.rows = get_or<Index>(doc, "rows", cfg.rows);
        cfg.cols = get_or<Index>(doc, "cols", cfg.cols);
        if (doc.contains("numeric")) {
            const json& n = doc.at("numeric");
            cfg.numeric.order = get_or<Index>(n, "order", cfg.numeric.order);
            cfg.numeric.n_grid = get_or<Index>(n, "n_grid", cfg.numeric.n_grid);
            cfg.numeric.max_lag = get_or<Index>(n, "max_lag", cfg.numeric.max_lag);
            cfg.numeric.series_length =
                get_or<Index>(n, "series_length", cfg.numeric.series_length);
            cfg.numeric.n = get_or<Index>(n, "n", cfg.numeric.n);
            cfg.numeric.window = get_or<Index>(n, "window", cfg.numeric.window);
            cfg.numeric.tol = get_or<double>(n, "tol", cfg.numeric.tol);
            cfg.numeric.factorization_tol =
                get_or<double>(n, "factorization_tol", cfg.numeric.factorization_tol);
            if (n.contains("p_list"))
                cfg.numeric.p_list = n.at("p_list").get<std::vector<Index>>();
            cfg.numeric.reference_order =
                get_or<Index>(n, "reference_order", cfg.numeric.reference_order);
        }
        if (!doc.contains("output")) throw ConfigError("config is missing \"output\"");
        cfg.out_path = doc.at("output").at("path").get<std::string>();
        cfg.out_format = get_or<std::string>(doc.at("output"), "format", cfg.out_format);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (cfg.out_format != "csv" && cfg.out_format != "json")
        throw ConfigError("output.format must be \"csv\" or \"json\"");
    if (!(cfg.numeric.tol > 0) || !(cfg.numeric.factorization_tol > 0))
        throw ConfigError("tolerances must be positive");
    return cfg;
}

// ---------------------------------------------------------------------------
// model / rhs assembly

wh::CovarianceSequence<Scalar> build_model(const RunConfig& cfg) {
    const json& m = cfg.model;
    std::string type;
    try {
        type = m.at("type").get<std::string>();
    } catch (const json::exception&) {
        throw ConfigError("model.type is missing");
    }
    const Index order = cfg.numeric.order;
    auto auto_lag = [&](auto&& make) {
        Index lag = cfg.numeric.max_lag > 0 ? cfg.numeric.max_lag
                                            : std::max<Index>(order, 64);
        for (;;) {
            wh::CovarianceSequence<Scalar> c = make(lag);
            const Scalar floor = 1e-14 * c.values[0];
            if (cfg.numeric.max_lag > 0 || lag >= 4096 ||
                c.values.tail(8).cwiseAbs().maxCoeff() <= floor)
                return c;
            lag *= 2;
        }
    };
    try {
        if (type == "sequence") {
            auto values = m.at("values").get<std::vector<Scalar>>();
            return wh::CovarianceSequence<Scalar>(
                Eigen::Map<const wh::VecX<Scalar>>(values.data(), values.size()));
        }
        if (type == "arma") {
            auto ar = m.at("ar").get<std::vector<Scalar>>();
            auto ma = m.at("ma").get<std::vector<Scalar>>();
            const Scalar sigma2 = m.at("sigma2").get<Scalar>();
            wh::VecX<Scalar> arv = Eigen::Map<const wh::VecX<Scalar>>(ar.data(), ar.size());
            wh::VecX<Scalar> mav = Eigen::Map<const wh::VecX<Scalar>>(ma.data(), ma.size());
            return auto_lag([&](Index lag) {
                return wh::acf_from_arma<Scalar>(arv, mav, sigma2, lag);
            });
        }
        if (type == "ma_kernel") {
            auto psi = m.at("psi").get<std::vector<Scalar>>();
            const Scalar sigma2 = m.at("sigma2").get<Scalar>();
            wh::VecX<Scalar> psiv = Eigen::Map<const wh::VecX<Scalar>>(psi.data(), psi.size());
            const Index lag = cfg.numeric.max_lag > 0
                                  ? cfg.numeric.max_lag
                                  : std::max<Index>({order, psiv.size() - 1, 64});
            return wh::acf_from_ma_kernel<Scalar>(psiv, sigma2, lag);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed model: ") + e.what());
    }
    throw ConfigError("unknown model.type: " + type);
}

wh::VecX<Scalar> build_rhs(const RunConfig& cfg, const wh::CovarianceSequence<Scalar>& cov) {
    const json& r = cfg.rhs;
    if (r.is_null()) throw ConfigError("this command requires an \"rhs\" entry");
    std::string type;
    try {
        type = r.at("type").get<std::string>();
        if (type == "array") {
            auto values = r.at("values").get<std::vector<Scalar>>();
            if (values.empty()) throw ConfigError("rhs.values must be non-empty");
            return Eigen::Map<const wh::VecX<Scalar>>(values.data(), values.size());
        }
        if (type == "cross_cov_shift") {
            const Index m = r.at("m").get<Index>();
            if (m < 0 || m > cov.max_lag())
                throw ConfigError("cross_cov_shift: need 0 <= m <= L_c");
            wh::VecX<Scalar> g(cov.max_lag() - m + 1);
            for (Index l = 0; l < g.size(); ++l) g[l] = cov.at(l + m);
            return g;
        }
        if (type == "unit") {
            const Index k = r.at("k").get<Index>();
            if (k < 0) throw ConfigError("unit rhs: k must be >= 0");
            wh::VecX<Scalar> g = wh::VecX<Scalar>::Zero(k + 1);
            g[k] = 1.0;
            return g;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed rhs: ") + e.what());
    }
    throw ConfigError("unknown rhs.type: " + type);
}

struct Workspace {
    wh::CovarianceSequence<Scalar> cov;
    wh::WoldFactorization<Scalar> wold;
    wh::SpectralGrid<Scalar> grid;
};

Workspace factorize_model(const RunConfig& cfg, Index rhs_len) {
    wh::CovarianceSequence<Scalar> cov = build_model(cfg);
    // the fit order cannot exceed the available lags
    const Index order = std::min(cfg.numeric.order, cov.max_lag());
    const Index L = cfg.numeric.series_length > 0
                        ? cfg.numeric.series_length
                        : wh::default_series_length(cov.max_lag(), order);
    wh::WoldOptions<Scalar> wopt;
    wopt.series_length = L;
    wopt.residual_tol = cfg.numeric.factorization_tol;
    const Index longest = std::max<Index>(L + rhs_len, cov.max_lag() + 1);
    const Index n_grid = cfg.numeric.n_grid > 0
                             ? cfg.numeric.n_grid
                             : wh::SpectralGrid<Scalar>::auto_size(longest);
    wopt.n_grid = n_grid;
    log_info("factorizing: order=" + std::to_string(order) + " L=" + std::to_string(L) +
             " n_grid=" + std::to_string(n_grid));
    Workspace ws{cov, wh::wold_from_covariance(cov, order, wopt),
                 wh::SpectralGrid<Scalar>(n_grid)};
    return ws;
}

// ---------------------------------------------------------------------------
// output helpers

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << body;
}

void write_summary(const RunConfig& cfg, const json& summary) {
    write_file(cfg.out_path + ".summary.json", summary.dump(2) + "\n");
}

json trimmed_list(const wh::VecX<Scalar>& v, Scalar tol = 1e-12) {
    Index n = v.size();
    while (n > 0 && std::abs(v[n - 1]) <= tol) --n;
    json arr = json::array();
    for (Index i = 0; i < n; ++i) arr.push_back(v[i]);
    return arr;
}

std::string coeff_csv(const wh::VecX<Scalar>& h) {
    std::string body = "j,h\n";
    for (Index j = 0; j < h.size(); ++j)
        body += std::to_string(j) + "," + fmt17(h[j]) + "\n";
    return body;
}

void emit_solution(const RunConfig& cfg, const wh::FilterSolution<Scalar>& sol,
                   json summary) {
    summary["method"] = wh::method_name(sol.method);
    summary["residual"] = sol.residual;
    summary["tail_energy"] = sol.tail_energy;
    summary["h_len"] = sol.h.size();
    if (cfg.out_format == "csv") {
        write_file(cfg.out_path, coeff_csv(sol.h));
        write_summary(cfg, summary);
    } else {
        summary["h"] = trimmed_list(sol.h, 0.0);
        write_file(cfg.out_path, summary.dump(2) + "\n");
    }
}

// ---------------------------------------------------------------------------
// commands

int cmd_factorize(const RunConfig& cfg) {
    Workspace ws = factorize_model(cfg, 0);
    json out;
    out["order"] = std::min(cfg.numeric.order, ws.cov.max_lag());
    out["sigma2"] = ws.wold.sigma2;
    out["phi"] = trimmed_list(ws.wold.phi);
    out["psi"] = trimmed_list(ws.wold.psi);
    out["residual"] = ws.wold.factorization_residual;
    out["series_length"] = ws.wold.truncation_length();
    out["n_grid"] = ws.grid.n;
    write_file(cfg.out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    wh::CovarianceSequence<Scalar> cov = build_model(cfg);
    wh::VecX<Scalar> g = build_rhs(cfg, cov);
    Workspace ws = factorize_model(cfg, g.size());

    wh::SolveOptions<Scalar> opt;
    opt.route_tol = cfg.numeric.tol;
    wh::FilterSolution<Scalar> sol;
    if (cfg.method == "classical") {
        sol = wh::solve_wh_classical(g, ws.wold, ws.cov, ws.grid, opt);
    } else if (cfg.method == "prediction") {
        sol = wh::solve_wh_prediction(g, ws.wold, ws.cov, ws.grid, opt);
    } else if (cfg.method == "oracle") {
        const Index n = cfg.numeric.n > 0
                            ? cfg.numeric.n
                            : std::max<Index>(400, g.size() + 2 * ws.wold.truncation_length());
        wh::ToeplitzSpec<Scalar> spec(ws.cov, n);
        auto dense = wh::toeplitz_solve_truncated(spec, g);
        sol.h = dense.h;
        sol.method = wh::Method::oracle;
        sol.H_grid = wh::evaluate_causal(sol.h, ws.grid);
        sol.tail_energy = sol.h.tail(std::min<Index>(16, sol.h.size())).cwiseAbs().sum();
        sol.residual =
            wh::verify_normal_equations(ws.cov, sol.h, g, g.size() + 20).max_abs;
        sol.route_gap = 0;
        json summary;
        summary["condition_estimate"] = dense.condition_estimate;
        summary["truncation_n"] = n;
        if (!(sol.residual <= cfg.numeric.tol))
            throw wh::NumericalConsistencyError(
                "solve: normal-equation residual " + std::to_string(sol.residual) +
                " above tolerance; refusing to write results");
        emit_solution(cfg, sol, summary);
        return 0;
    } else {
        throw ConfigError("unknown solve method: " + cfg.method);
    }
    if (!(sol.residual <= cfg.numeric.tol))
        throw wh::NumericalConsistencyError(
            "solve: normal-equation residual " + std::to_string(sol.residual) +
            " above tolerance; refusing to write results");
    json summary;
    summary["route_gap"] = sol.route_gap;
    summary["sigma2"] = ws.wold.sigma2;
    summary["factorization_residual"] = ws.wold.factorization_residual;
    emit_solution(cfg, sol, summary);
    return 0;
}

int cmd_predict(const RunConfig& cfg) {
    if (cfg.m < 1) throw ConfigError("predict: m must be >= 1");
    Workspace ws = factorize_model(cfg, 0);
    wh::FilterSolution<Scalar> sol = wh::m_step_filter(ws.wold, cfg.m, ws.grid);
    // implied right-hand side g_l = c(l + m)
    wh::VecX<Scalar> g(ws.cov.max_lag() - std::min(cfg.m, ws.cov.max_lag()) + 1);
    for (Index l = 0; l < g.size(); ++l) g[l] = ws.cov.at(l + cfg.m);
    sol.residual = wh::verify_normal_equations(ws.cov, sol.h, g, g.size() + 20).max_abs;
    if (!(sol.residual <= cfg.numeric.tol))
        throw wh::NumericalConsistencyError(
            "predict: normal-equation residual " + std::to_string(sol.residual) +
            " above tolerance");
    json summary;
    summary["m"] = cfg.m;
    summary["sigma2"] = ws.wold.sigma2;
    emit_solution(cfg, sol, summary);
    return 0;
}

int cmd_invert(const RunConfig& cfg) {
    if (cfg.rows < 1 || cfg.cols < 1) throw ConfigError("invert: rows/cols must be >= 1");
    Workspace ws = factorize_model(cfg, 0);
    const Index n = cfg.numeric.n > 0 ? cfg.numeric.n : std::max(cfg.rows, cfg.cols);
    if (cfg.rows > n || cfg.cols > n)
        throw ConfigError("invert: rows/cols exceed matrix dimension n");

    std::string body = "k,j,d_kj,method\n";
    auto emit = [&](Index k, Index j, Scalar v, const char* tag) {
        body += std::to_string(k) + "," + std::to_string(j) + "," + fmt17(v) + "," +
                tag + "\n";
    };
    if (cfg.method == "corollary") {
        for (Index k = 0; k < cfg.rows; ++k) {
            wh::InverseRow<Scalar> row = wh::inverse_row(ws.wold, k, cfg.cols);
            for (Index j = 0; j < cfg.cols; ++j) emit(k, j, row.values[j], "corollary");
        }
    } else if (cfg.method == "dense") {
        wh::ToeplitzSpec<Scalar> spec(ws.cov, n);
        wh::MatX<Scalar> inv = wh::dense_inverse(spec);
        for (Index k = 0; k < cfg.rows; ++k)
            for (Index j = 0; j < cfg.cols; ++j) emit(k, j, inv(k, j), "dense");
    } else if (cfg.method == "finite") {
        wh::ToeplitzSpec<Scalar> spec(ws.cov, n);
        wh::FiniteInverseOptions<Scalar> fopt;
        fopt.window = cfg.numeric.window;
        fopt.tail_tol = cfg.numeric.tol;
        wh::FiniteToeplitzInverse<Scalar> fin(spec, ws.wold, fopt);
        for (Index k = 0; k < cfg.rows; ++k)
            for (Index j = 0; j < cfg.cols; ++j)
                emit(k, j, fin.entry_checked(k, j), "finite_eq219");
    } else {
        throw ConfigError("unknown invert method: " + cfg.method);
    }
    write_file(cfg.out_path, body);
    return 0;
}

int cmd_approx_study(const RunConfig& cfg) {
    wh::CovarianceSequence<Scalar> cov = build_model(cfg);
    wh::ApproxConfig<Scalar> ac{cov,
                                build_rhs(cfg, cov),
                                cfg.numeric.p_list,
                                cfg.numeric.reference_order,
                                cfg.numeric.n_grid,
                                cfg.numeric.series_length,
                                4.0};
    if (ac.p_list.empty()) throw ConfigError("approx-study: numeric.p_list is required");
    if (ac.reference_order <= 0)
        throw ConfigError("approx-study: numeric.reference_order is required");
    wh::DecayStudy<Scalar> study = wh::decay_study(ac);

    std::string body = "p,sup_err,baxter_lhs,ar_tail,sup_g,sup_Gplus\n";
    for (const auto& row : study.rows) {
        body += std::to_string(row.p) + "," + fmt17(row.sup_err) + "," +
                fmt17(row.baxter_lhs) + "," + fmt17(row.ar_tail) + "," +
                fmt17(row.sup_g) + "," + fmt17(row.sup_Gplus) + "\n";
    }
    write_file(cfg.out_path, body);
    json summary;
    summary["slope"] = study.slope_loglog;
    summary["slope_semilog"] = study.slope_semilog;
    summary["C_fit"] = study.c_fit;
    summary["reference_residual"] = study.reference_residual;
    write_summary(cfg, summary);
    return 0;
}

void print_error(const char* type, const std::string& message) {
    json err;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wiener-Hopf / semi-infinite Toeplitz solver"};
    app.require_subcommand(1);

    std::string config_path, method_flag;
    Index rows_flag = -1, cols_flag = -1, m_flag = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON run configuration")->required();
    };
    CLI::App* c_fact = app.add_subcommand("factorize", "spectral factorization of the model");
    add_common(c_fact);
    CLI::App* c_solve = app.add_subcommand("solve", "solve the Wiener-Hopf system");
    add_common(c_solve);
    c_solve->add_option("--method", method_flag, "classical|prediction|oracle");
    CLI::App* c_invert = app.add_subcommand("invert", "rows of the inverse Toeplitz operator");
    add_common(c_invert);
    c_invert->add_option("--method", method_flag, "corollary|dense|finite");
    c_invert->add_option("--rows", rows_flag, "number of rows to emit");
    c_invert->add_option("--cols", cols_flag, "number of columns to emit");
    CLI::App* c_pred = app.add_subcommand("predict", "m-step prediction filter");
    add_common(c_pred);
    c_pred->add_option("--m", m_flag, "prediction horizon");
    CLI::App* c_study = app.add_subcommand("approx-study", "AR(p) approximation error decay");
    add_common(c_study);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        RunConfig cfg = parse_config(config_path, command);
        if (!method_flag.empty()) cfg.method = method_flag;
        if (rows_flag >= 0) cfg.rows = rows_flag;
        if (cols_flag >= 0) cfg.cols = cols_flag;
        if (m_flag >= 0) cfg.m = m_flag;
        if (command == "invert" && cfg.method == "classical") cfg.method = "corollary";

        if (command == "factorize") return cmd_factorize(cfg);
        if (command == "solve") return cmd_solve(cfg);
        if (command == "invert") return cmd_invert(cfg);
        if (command == "predict") return cmd_predict(cfg);
        if (command == "approx-study") return cmd_approx_study(cfg);
        print_error("usage", "unknown command: " + command);
        return 2;
    } catch (const ConfigError& e) {
        print_error("config", e.what());
        return 2;
    } catch (const wh::NumericalConsistencyError& e) {
        print_error("numerical-consistency", e.what());
        return 4;
    } catch (const wh::DomainError& e) {
        print_error("domain", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
