#pragma once

#include <string>
#include <vector>

#include "simustab/pipeline.hpp"

namespace simustab {

struct EmittedFile {
    std::string path;
    std::string digest;  // fnv1a-64 of the byte content
};

std::string fnv1a_hex(const std::string& data);

/// Write and return the content digest; throws IOError on failure.
EmittedFile write_file(const std::string& path, const std::string& content);

/// One row per pole: lambda, re_s, im_s, re_z, im_z, stable. Doubles are
/// printed with %.17g so a re-parse reproduces them exactly.
std::string render_pole_csv(const SweepReport& rep);

/// Fixed 800x800 scatter of the disc-mapped poles with the unit circle,
/// one colour per lambda.
std::string render_pole_svg(const SweepReport& rep);

/// Full machine-readable report. `sweep` may be null (analyze/solve runs);
/// `solved` may be null (analyze runs).
std::string render_report_json(const std::string& command, const AnalyzeResult& analysis,
                               const SolveResult* solved, const SweepResult* sweep,
                               const std::vector<EmittedFile>& files);

}  // namespace simustab
