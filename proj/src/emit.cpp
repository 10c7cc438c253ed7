#include "simustab/emit.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "simustab/errors.hpp"

namespace simustab {

using nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

EmittedFile write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IOError("write failed for " + path);
    return {path, fnv1a_hex(content)};
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

ordered_json json_complex(std::complex<double> z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json json_real_matrix(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json json_complex_matrix(const Eigen::MatrixXcd& m) {
    return ordered_json{{"re", json_real_matrix(m.real())}, {"im", json_real_matrix(m.imag())}};
}

ordered_json json_rational_matrix(const RationalMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) {
            const RationalFunction& f = m.at(r, c);
            row.push_back(ordered_json{{"num", f.num().coeffs()}, {"den", f.den().coeffs()}});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json json_sweep(const SweepReport& rep) {
    ordered_json entries = ordered_json::array();
    for (const SweepEntry& e : rep.entries) {
        ordered_json poles_s = ordered_json::array();
        ordered_json poles_z = ordered_json::array();
        for (const auto& p : e.poles_s) poles_s.push_back(json_complex(p));
        for (const auto& p : e.poles_disc) poles_z.push_back(json_complex(p));
        entries.push_back(ordered_json{{"lambda", e.lambda},
                                       {"stable", e.stable},
                                       {"marginal", e.marginal},
                                       {"max_re", e.max_re},
                                       {"poles_s", std::move(poles_s)},
                                       {"poles_z", std::move(poles_z)}});
    }
    return ordered_json{{"all_stable", rep.all_stable}, {"entries", std::move(entries)}};
}

const char* tag_name(ConjugateTag tag) {
    switch (tag) {
        case ConjugateTag::real: return "real";
        case ConjugateTag::pair_lead: return "pair_lead";
        default: return "pair_follow";
    }
}

}  // namespace

std::string render_pole_csv(const SweepReport& rep) {
    std::string out = "lambda,re_s,im_s,re_z,im_z,stable\n";
    for (const SweepEntry& e : rep.entries)
        for (std::size_t i = 0; i < e.poles_s.size(); ++i) {
            out += fmt(e.lambda);
            out += ',';
            out += fmt(e.poles_s[i].real());
            out += ',';
            out += fmt(e.poles_s[i].imag());
            out += ',';
            out += fmt(e.poles_disc[i].real());
            out += ',';
            out += fmt(e.poles_disc[i].imag());
            out += ',';
            out += e.stable ? '1' : '0';
            out += '\n';
        }
    return out;
}

std::string render_pole_svg(const SweepReport& rep) {
    double extent = 1.25;
    for (const SweepEntry& e : rep.entries)
        for (const auto& z : e.poles_disc)
            extent = std::max(extent, 1.05 * std::abs(z));
    const double scale = 360.0 / extent;
    auto px = [&](double x) { return 400.0 + scale * x; };
    auto py = [&](double y) { return 400.0 - scale * y; };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
        "viewBox=\"0 0 800 800\">\n"
        "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fmt2(px(-extent)) + "\" y1=\"400\" x2=\"" + fmt2(px(extent)) +
           "\" y2=\"400\" stroke=\"#cccccc\"/>\n";
    svg += "<line x1=\"400\" y1=\"" + fmt2(py(-extent)) + "\" x2=\"400\" y2=\"" +
           fmt2(py(extent)) + "\" stroke=\"#cccccc\"/>\n";
    svg += "<circle cx=\"400\" cy=\"400\" r=\"" + fmt2(scale) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    const std::size_t groups = rep.entries.size();
    for (std::size_t g = 0; g < groups; ++g) {
        const SweepEntry& e = rep.entries[g];
        const double t = groups > 1 ? static_cast<double>(g) / (groups - 1) : 0.0;
        const int red = static_cast<int>(30 + 200 * t);
        const int blue = static_cast<int>(230 - 200 * t);
        char color[10];
        std::snprintf(color, sizeof(color), "#%02x30%02x", red, blue);
        for (const auto& z : e.poles_disc)
            svg += "<circle cx=\"" + fmt2(px(z.real())) + "\" cy=\"" + fmt2(py(z.imag())) +
                   "\" r=\"4\" fill=\"" + color + "\" stroke=\"black\" stroke-width=\"0.4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_report_json(const std::string& command, const AnalyzeResult& analysis,
                               const SolveResult* solved, const SweepResult* sweep,
                               const std::vector<EmittedFile>& files) {
    const ReducedData& rd = analysis.rd;
    ordered_json doc;
    doc["command"] = command;

    ordered_json zeros = ordered_json::array();
    for (const UnstableZero& z : rd.zeros)
        zeros.push_back(ordered_json{{"re", z.s.real()}, {"im", z.s.imag()}, {"tag", tag_name(z.tag)}});
    doc["unstable_zeros"] = std::move(zeros);
    doc["mode"] = rd.mode == Mode::sqrt ? "sqrt" : "direct";
    doc["trivial"] = rd.trivial;

    ordered_json nodes = ordered_json::array();
    for (const InterpolationNode& node : rd.data.nodes)
        nodes.push_back(ordered_json{{"z", json_complex(node.z)}, {"W", json_complex_matrix(node.W)}});
    doc["interpolation_nodes"] = std::move(nodes);

    doc["open_loop"] = json_sweep(analysis.open_loop);

    if (solved) {
        ordered_json cee;
        cee["residual"] = solved->cee_residual;
        cee["continuation_steps"] = solved->continuation_steps;
        if (solved->sigma_used.size() > 0) cee["sigma"] = json_real_matrix(solved->sigma_used);
        if (!solved->itp.constant) {
            cee["P"] = json_real_matrix(solved->itp.solution.P);
            cee["A"] = json_real_matrix(solved->itp.solution.A);
            cee["B"] = json_real_matrix(solved->itp.solution.B);
            cee["R"] = json_real_matrix(solved->itp.solution.R);
            cee["controllability_rank"] = solved->itp.solution.controllability_rank;
        }
        doc["cee"] = std::move(cee);
        doc["check"] = ordered_json{{"interp_residual", solved->check.interp_residual},
                                    {"min_herm_eig", solved->check.min_herm_eig},
                                    {"pole_radius", solved->check.pole_radius}};
    }

    if (sweep) {
        doc["closed_loop"] = json_sweep(sweep->closed_loop);
        doc["axis_check"] = ordered_json{{"min_distance", sweep->axis.min_distance},
                                         {"omega", sweep->axis.omega},
                                         {"samples", sweep->axis.samples}};
        doc["bezout_residual"] = ordered_json{{"lambda_0", sweep->bezout_at_0},
                                              {"lambda_037", sweep->bezout_at_037},
                                              {"lambda_1", sweep->bezout_at_1}};
        doc["compensator"] = ordered_json{{"proper", sweep->cf.proper},
                                          {"Nc", json_rational_matrix(sweep->cf.Nc)},
                                          {"Dc", json_rational_matrix(sweep->cf.Dc)}};
        doc["delta1"] = json_rational_matrix(sweep->dp.d1);
    }

    ordered_json fl = ordered_json::array();
    for (const EmittedFile& f : files)
        fl.push_back(ordered_json{{"path", f.path}, {"digest", f.digest}});
    doc["files"] = std::move(fl);

    return doc.dump(2) + "\n";
}

}  // namespace simustab
