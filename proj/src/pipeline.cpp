#include "simustab/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "simustab/errors.hpp"
#include "simustab/fixtures.hpp"

namespace simustab {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, step = 0.0, end = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    in >> start >> c1 >> step >> c2 >> end;
    if (in.fail() || c1 != ':' || c2 != ':' || step <= 0.0 || end < start)
        throw ConfigError("grid: expected start:step:end with positive step");
    std::vector<double> grid;
    const int count = static_cast<int>(std::round((end - start) / step));
    for (int i = 0; i <= count; ++i) {
        double v = start + i * step;
        if (v > end + 1e-12) break;
        grid.push_back(std::min(v, end));
    }
    if (grid.empty() || std::abs(grid.back() - end) > 1e-9) grid.push_back(end);
    return grid;
}

namespace {

RationalFunction parse_entry(const json& j, const std::string& where) {
    if (j.is_number()) return RationalFunction::constant(j.get<double>());
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ConfigError(where + ": expected a number or {\"num\": [...], \"den\": [...]}");
    auto coeffs = [&](const char* key) {
        const json& arr = j.at(key);
        if (!arr.is_array() || arr.empty())
            throw ConfigError(where + "." + key + ": expected a nonempty coefficient array");
        std::vector<double> c;
        for (const json& v : arr) {
            if (!v.is_number()) throw ConfigError(where + "." + key + ": non-numeric coefficient");
            c.push_back(v.get<double>());
        }
        return c;
    };
    try {
        return RationalFunction(Polynomial(coeffs("num")), Polynomial(coeffs("den")));
    } catch (const Error& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

RationalMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError(where + ": expected an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    RationalMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols)
            throw ConfigError(where + ": ragged rows");
        for (int c = 0; c < cols; ++c)
            m.at(r, c) = parse_entry(j[r][c], where + "[" + std::to_string(r) + "][" +
                                                  std::to_string(c) + "]");
    }
    return m;
}

Eigen::MatrixXd parse_real_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError(where + ": expected an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) throw ConfigError(where + ": ragged rows");
        for (int c = 0; c < cols; ++c) {
            if (!j[r][c].is_number())
                throw ConfigError(where + ": non-numeric entry at [" + std::to_string(r) + "][" +
                                  std::to_string(c) + "]");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

ModeChoice parse_mode(const std::string& mode) {
    if (mode == "auto") return ModeChoice::automatic;
    if (mode == "direct") return ModeChoice::direct;
    if (mode == "sqrt") return ModeChoice::sqrt;
    throw ConfigError("mode: expected auto, direct or sqrt");
}

}  // namespace

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("plants"))
        throw ConfigError("plants: missing section");
    const json& plants = doc.at("plants");
    for (const char* key : {"N0", "D0", "N1", "D1"})
        if (!plants.contains(key))
            throw ConfigError(std::string("plants.") + key + ": missing block");

    ProblemConfig cfg;
    try {
        cfg.plants = make_plant_pair(parse_matrix(plants.at("N0"), "plants.N0"),
                                     parse_matrix(plants.at("D0"), "plants.D0"),
                                     parse_matrix(plants.at("N1"), "plants.N1"),
                                     parse_matrix(plants.at("D1"), "plants.D1"));
    } catch (const InvalidPlant& e) {
        throw ConfigError(std::string("plants.") + e.what());
    }

    if (doc.contains("sigma")) {
        const json& s = doc.at("sigma");
        if (s.is_string())
            cfg.sigma_preset = s.get<std::string>();
        else
            cfg.sigma = parse_real_matrix(s, "sigma");
    }
    if (doc.contains("alpha")) {
        if (!doc.at("alpha").is_number() || doc.at("alpha").get<double>() <= 0.0)
            throw ConfigError("alpha: expected a positive number");
        cfg.alpha = doc.at("alpha").get<double>();
    }
    if (doc.contains("mode")) cfg.mode = parse_mode(doc.at("mode").get<std::string>());
    cfg.grid = parse_grid(doc.contains("grid") ? doc.at("grid").get<std::string>() : "0:0.1:1");
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        if (t.contains("simplicity")) cfg.tol.simplicity = t.at("simplicity").get<double>();
        if (t.contains("rank_gap")) cfg.tol.rank_gap = t.at("rank_gap").get<double>();
        if (t.contains("boundary")) cfg.tol.boundary = t.at("boundary").get<double>();
        if (t.contains("det_derivative"))
            cfg.tol.det_derivative = t.at("det_derivative").get<double>();
    }
    return cfg;
}

ProblemConfig reproduce_config(const std::string& name) {
    ProblemConfig cfg;
    if (name == "example1") {
        cfg.plants = example1_plants();
        cfg.sigma_preset = "example1";
        cfg.mode = ModeChoice::automatic;
    } else if (name == "example2") {
        cfg.plants = example2_plants();
        cfg.sigma_preset = "example2";
        cfg.mode = ModeChoice::sqrt;  // the reported route squares the interpolant
    } else {
        throw ConfigError("reproduce: unknown fixture \"" + name + "\" (try example1|example2)");
    }
    cfg.grid = parse_grid("0:0.1:1");
    return cfg;
}

AnalyzeResult run_analyze(const ProblemConfig& cfg) {
    AnalyzeResult ar;
    ar.rd = reduce_plants(cfg.plants, cfg.alpha, cfg.mode, cfg.tol);
    ar.open_loop = open_loop_sweep(cfg.plants, cfg.grid);
    return ar;
}

namespace {

Eigen::MatrixXd resolve_sigma(const ProblemConfig& cfg, int n, int ell) {
    if (cfg.sigma) {
        if (cfg.sigma->rows() != n * ell || cfg.sigma->cols() != ell)
            throw ConfigError("sigma: expected shape " + std::to_string(n * ell) + "x" +
                              std::to_string(ell));
        return *cfg.sigma;
    }
    if (!cfg.sigma_preset.empty()) {
        auto preset = sigma_preset(cfg.sigma_preset);
        if (!preset)
            throw ConfigError("sigma: unknown preset \"" + cfg.sigma_preset + "\"");
        if (preset->rows() != n * ell || preset->cols() != ell)
            throw ConfigError("sigma: preset \"" + cfg.sigma_preset + "\" has shape " +
                              std::to_string(preset->rows()) + "x" +
                              std::to_string(preset->cols()) + ", problem needs " +
                              std::to_string(n * ell) + "x" + std::to_string(ell));
        return *preset;
    }
    return Eigen::MatrixXd::Zero(n * ell, ell);
}

}  // namespace

SolveResult run_solve(const ProblemConfig& cfg) {
    SolveResult sr;
    sr.analysis = run_analyze(cfg);
    const ReducedData& rd = sr.analysis.rd;

    if (rd.trivial) {
        sr.itp = make_constant_interpolant(cfg.plants.m, std::nullopt);
    } else if (rd.normalized.n() == 0) {
        sr.itp = make_constant_interpolant(rd.normalized.ell, rd.normalized.normalization);
    } else {
        CanonicalStructure cs = build_structure(rd.normalized.ell, rd.normalized.n());
        sr.sigma_used = resolve_sigma(cfg, cs.n, cs.ell);
        CEEProblem prob = make_problem(rd.normalized, cs, sr.sigma_used);
        CEESolution sol = solve_cee(prob);
        sr.cee_residual = sol.residual_norm;
        sr.continuation_steps = sol.continuation_steps;
        sr.itp = make_interpolant(std::move(cs), std::move(sol),
                                  rd.normalized.normalization);
    }
    sr.check = check_solution(sr.itp, rd.data);
    return sr;
}

SweepResult run_sweep(const ProblemConfig& cfg) {
    SweepResult sw;
    sw.solved = run_solve(cfg);
    const ReducedData& rd = sw.solved.analysis.rd;

    sw.f1 = f_plane(sw.solved.itp);
    sw.dp = delta_pair(sw.f1, rd.mode);
    sw.cf = compensator(rd.pencil, sw.dp);
    sw.closed_loop = sweep(cfg.plants, sw.dp, cfg.grid);

    double max_zero = 1.0;
    for (const UnstableZero& z : rd.zeros) max_zero = std::max(max_zero, std::abs(z.s));
    sw.axis = eigen_axis_check(sw.dp, 10.0 * max_zero);

    const std::vector<std::complex<double>> samples = rhp_samples(8, 424242u);
    sw.bezout_at_0 = verify_bezout(cfg.plants, sw.cf, sw.dp, 0.0, samples);
    sw.bezout_at_037 = verify_bezout(cfg.plants, sw.cf, sw.dp, 0.37, samples);
    sw.bezout_at_1 = verify_bezout(cfg.plants, sw.cf, sw.dp, 1.0, samples);
    return sw;
}

}  // namespace simustab
