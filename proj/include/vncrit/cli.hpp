#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vncrit/json_io.hpp"

namespace vncrit::cli {

constexpr const char* kSchema = "vn-criterion/1";
constexpr const char* kToolName = "vncrit";
constexpr const char* kToolVersion = "1.0.0";

struct PaperPipelineReport {
    criterion::TripleValidity validity;
    criterion::CriterionReport criterion_report;
    double optimal_margin = 0.0;
    CVector optimal_amplitudes;
    io::Json hv_pair_moments;  // per-tag/power comparison table
    hv::ValuationAudit hv_audit;
    double optics_deviation = 0.0;     // max over the three tunings
    io::Json optics_comparisons;       // per-tag detail
    phasespace::FeasibilityResult lp;
    std::vector<std::string> verdict_lines;
};

// The full demonstration pipeline on the canonical pair: validity, optimal
// state, criterion evaluation, both hidden-variable models, the valuation
// audit, the classical interferometer comparison, and the phase-space LP.
PaperPipelineReport paper_pipeline(std::uint64_t seed, int workers = 1);

// CLI entry point. Returns 0 on success, 2 on validation errors (with an
// error JSON on stderr), 1 on internal failures.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace vncrit::cli
