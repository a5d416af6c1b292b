#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "vncrit/criterion.hpp"
#include "vncrit/hvmodels.hpp"
#include "vncrit/opalg.hpp"
#include "vncrit/optics.hpp"
#include "vncrit/phasespace.hpp"

namespace vncrit::io {

using Json = nlohmann::ordered_json;

// Shared encodings: a complex scalar is [re, im]; a matrix is a row-major
// nested array of such pairs.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

// pair.json: {"a": matrix, "b": matrix}
criterion::OperatorPair load_pair(const std::string& path);
// state.json: {"amplitudes": [[re,im],...]} or {"rho": matrix}
DensityMatrix load_state(const std::string& path, PureStateInfo* info = nullptr);
// obs.json: {"matrix": matrix}
HermitianOperator load_observable(const std::string& path);

Json triple_validity_to_json(const criterion::TripleValidity& v);
Json criterion_report_to_json(const criterion::CriterionReport& r);
Json sweep_report_to_json(const criterion::SweepReport& r);

Json model_to_json(const hv::HiddenVariableModel& model);
hv::HiddenVariableModel model_from_json(const Json& j);
hv::HiddenVariableModel load_model(const std::string& path);
Json empirical_report_to_json(const hv::HiddenVariableModel& model, const hv::EmpiricalReport& r);
Json valuation_audit_to_json(const hv::ValuationAudit& a);

// CSV counts table: one row per joint outcome (indices, values, count).
std::string empirical_report_to_csv(const hv::HiddenVariableModel& model,
                                    const hv::EmpiricalReport& r);
// Re-imports the CSV counts column, indexed by joint outcome rank.
std::vector<long long> counts_from_csv(const std::string& csv);

Json optics_result_to_json(const optics::OpticsResult& r);
Json feasibility_to_json(const phasespace::FeasibilityResult& r);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace vncrit::io
