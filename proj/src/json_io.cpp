#include "vncrit/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace vncrit::io {

namespace {

double require_number(const Json& j, const char* what) {
    if (!j.is_number())
        throw Error(Errc::SchemaViolation, std::string(what) + " must be a number");
    return j.get<double>();
}

const Json& require_key(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(Errc::SchemaViolation, std::string("missing key '") + key + "'");
    return j.at(key);
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw Error(Errc::SchemaViolation, "complex scalar must be a [re, im] pair");
    return {require_number(j[0], "re"), require_number(j[1], "im")};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw Error(Errc::SchemaViolation, "matrix must be a non-empty nested array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw Error(Errc::SchemaViolation, "matrix rows must be arrays");

    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error(Errc::SchemaViolation, "matrix rows have inconsistent lengths");
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from_json(j[i][k]);
    }
    return m;
}

Json vector_to_json(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

CVector vector_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw Error(Errc::SchemaViolation, "amplitude vector must be a non-empty array");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json read_json_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw Error(Errc::FileNotFound, "no such file: " + path);
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::SchemaViolation, path + " is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::FileNotFound, "cannot write " + path);
    out << text;
}

criterion::OperatorPair load_pair(const std::string& path) {
    const Json j = read_json_file(path);
    return {make_hermitian(matrix_from_json(require_key(j, "a"))),
            make_hermitian(matrix_from_json(require_key(j, "b")))};
}

DensityMatrix load_state(const std::string& path, PureStateInfo* info) {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("amplitudes"))
        return make_pure_state(vector_from_json(j.at("amplitudes")), info);
    if (j.is_object() && j.contains("rho")) {
        if (info) *info = PureStateInfo{1.0, false};
        return make_density(matrix_from_json(j.at("rho")));
    }
    throw Error(Errc::SchemaViolation, path + " must carry 'amplitudes' or 'rho'");
}

HermitianOperator load_observable(const std::string& path) {
    const Json j = read_json_file(path);
    return make_hermitian(matrix_from_json(require_key(j, "matrix")));
}

Json triple_validity_to_json(const criterion::TripleValidity& v) {
    Json j;
    j["a_psd"] = v.a_psd;
    j["b_psd"] = v.b_psd;
    j["diff_psd"] = v.diff_psd;
    j["min_eigenvalues"] = Json::array({v.min_eig_a, v.min_eig_b, v.min_eig_diff});
    j["all_valid"] = v.all();
    return j;
}

Json criterion_report_to_json(const criterion::CriterionReport& r) {
    Json j;
    j["mean_a"] = r.mean_a;
    j["mean_b"] = r.mean_b;
    j["sq_a"] = r.sq_a;
    j["sq_b"] = r.sq_b;
    j["first_moment_gap"] = r.first_moment_gap;
    j["violation_margin"] = r.violation_margin;
    j["violated"] = r.violated;
    j["commutator"] = r.commutator;
    j["violation_tolerance"] = criterion::kViolationTol;
    return j;
}

Json sweep_report_to_json(const criterion::SweepReport& r) {
    Json j;
    j["trials"] = r.trials;
    j["max_margin"] = r.max_margin;
    j["violations"] = r.violations;
    j["violation_tolerance"] = criterion::kViolationTol;
    return j;
}

Json model_to_json(const hv::HiddenVariableModel& model) {
    Json j;
    Json alphabets = Json::array();
    for (const auto& alphabet : model.alphabets) {
        Json a;
        a["label"] = tag_name(alphabet.label);
        a["values"] = alphabet.values;
        a["probabilities"] = alphabet.probabilities;
        alphabets.push_back(std::move(a));
    }
    j["alphabets"] = std::move(alphabets);
    j["joint"] = model.joint;
    j["factorized"] = model.factorized;
    j["rho"] = matrix_to_json(model.rho);
    return j;
}

hv::HiddenVariableModel model_from_json(const Json& j) {
    hv::HiddenVariableModel model;
    for (const Json& a : require_key(j, "alphabets")) {
        hv::OutcomeAlphabet alphabet;
        alphabet.label = tag_from_name(require_key(a, "label").get<std::string>());
        alphabet.values = require_key(a, "values").get<std::vector<double>>();
        alphabet.probabilities = require_key(a, "probabilities").get<std::vector<double>>();
        model.alphabets.push_back(std::move(alphabet));
    }
    model.joint = require_key(j, "joint").get<std::vector<double>>();
    model.factorized = require_key(j, "factorized").get<bool>();
    model.rho = matrix_from_json(require_key(j, "rho"));
    model.validate();
    return model;
}

hv::HiddenVariableModel load_model(const std::string& path) {
    return model_from_json(read_json_file(path));
}

Json empirical_report_to_json(const hv::HiddenVariableModel& model,
                              const hv::EmpiricalReport& r) {
    Json j;
    j["n"] = r.n;
    Json rows = Json::array();
    for (std::size_t rank = 0; rank < r.counts.size(); ++rank) {
        Json row;
        const std::vector<std::size_t> idx = model.unrank(rank);
        Json indices = Json::array();
        Json values = Json::array();
        for (std::size_t ax = 0; ax < model.alphabets.size(); ++ax) {
            indices.push_back(idx[ax]);
            values.push_back(model.alphabets[ax].values[idx[ax]]);
        }
        row["indices"] = std::move(indices);
        row["values"] = std::move(values);
        row["count"] = r.counts[rank];
        rows.push_back(std::move(row));
    }
    j["counts"] = std::move(rows);

    Json moments = Json::array();
    for (std::size_t ax = 0; ax < model.alphabets.size(); ++ax) {
        Json m;
        m["tag"] = tag_name(model.alphabets[ax].label);
        m["empirical_mean"] = r.empirical_mean[ax];
        m["empirical_sq"] = r.empirical_sq[ax];
        m["exact_mean"] = hv::moment(model, model.alphabets[ax].label, 1);
        m["exact_sq"] = hv::moment(model, model.alphabets[ax].label, 2);
        moments.push_back(std::move(m));
    }
    j["moments"] = std::move(moments);
    return j;
}

Json valuation_audit_to_json(const hv::ValuationAudit& a) {
    Json j;
    j["samples"] = a.samples;
    j["frac_negative_diff"] = a.frac_negative_diff;
    j["min_vC"] = a.min_vC;
    j["frac_sum_rule_holds"] = a.frac_sum_rule_holds;
    return j;
}

std::string empirical_report_to_csv(const hv::HiddenVariableModel& model,
                                    const hv::EmpiricalReport& r) {
    std::ostringstream out;
    const std::size_t axes = model.alphabets.size();
    for (std::size_t ax = 0; ax < axes; ++ax) out << "i_" << tag_name(model.alphabets[ax].label) << ",";
    for (std::size_t ax = 0; ax < axes; ++ax) out << "v_" << tag_name(model.alphabets[ax].label) << ",";
    out << "count\n";

    char buf[64];
    for (std::size_t rank = 0; rank < r.counts.size(); ++rank) {
        const std::vector<std::size_t> idx = model.unrank(rank);
        for (std::size_t ax = 0; ax < axes; ++ax) out << idx[ax] << ",";
        for (std::size_t ax = 0; ax < axes; ++ax) {
            std::snprintf(buf, sizeof(buf), "%.17g", model.alphabets[ax].values[idx[ax]]);
            out << buf << ",";
        }
        out << r.counts[rank] << "\n";
    }
    return out.str();
}

std::vector<long long> counts_from_csv(const std::string& csv) {
    std::vector<long long> counts;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const std::size_t comma = line.find_last_of(',');
        if (comma == std::string::npos)
            throw Error(Errc::SchemaViolation, "CSV row without columns");
        counts.push_back(std::stoll(line.substr(comma + 1)));
    }
    return counts;
}

Json optics_result_to_json(const optics::OpticsResult& r) {
    Json j;
    j["weighted_average"] = r.weighted_average;
    j["per_detector_intensity"] =
        Json::array({r.per_detector_intensity[0], r.per_detector_intensity[1]});
    j["normalization"] = r.normalization;
    return j;
}

Json feasibility_to_json(const phasespace::FeasibilityResult& r) {
    Json j;
    j["status"] = r.status == phasespace::FeasibilityStatus::Feasible ? "feasible" : "infeasible";
    j["residual"] = r.residual;
    j["delta"] = r.delta;
    j["targets"] = Json{{"mean_a", r.targets.mean_a},
                        {"sq_a", r.targets.sq_a},
                        {"mean_b", r.targets.mean_b},
                        {"sq_b", r.targets.sq_b}};
    j["constraints_used"] = r.constraints_used;
    if (r.witness) {
        // Sparse encoding: only the support, as [index, weight] pairs.
        Json witness = Json::array();
        for (std::size_t k = 0; k < r.witness->size(); ++k)
            if ((*r.witness)[k] > 0.0)
                witness.push_back(Json::array({k, (*r.witness)[k]}));
        j["witness_support"] = std::move(witness);
    }
    return j;
}

}  // namespace vncrit::io
