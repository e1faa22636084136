#include "tcpkit/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace tcpkit {

namespace {

std::size_t expect_size(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw std::invalid_argument(std::string("tensor file: missing integer \"") + key + "\"");
    const long long v = j[key].get<long long>();
    if (v <= 0) throw std::invalid_argument(std::string("tensor file: \"") + key + "\" must be positive");
    return static_cast<std::size_t>(v);
}

}  // namespace

Tensor tensor_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("tensor file: top level must be an object");
    const int order = static_cast<int>(expect_size(j, "order"));
    const int dim = static_cast<int>(expect_size(j, "dim"));
    const bool has_entries = j.contains("entries");
    const bool has_dense = j.contains("dense");
    if (has_entries == has_dense)
        throw std::invalid_argument("tensor file: provide exactly one of \"entries\" or \"dense\"");

    if (has_dense) {
        if (!j["dense"].is_array())
            throw std::invalid_argument("tensor file: \"dense\" must be an array");
        std::vector<double> coeffs;
        coeffs.reserve(j["dense"].size());
        for (const auto& v : j["dense"]) {
            if (!v.is_number()) throw std::invalid_argument("tensor file: dense entries must be numbers");
            coeffs.push_back(v.get<double>());
        }
        return Tensor(order, dim, std::move(coeffs));
    }

    Tensor t = Tensor::zeros(order, dim);
    if (!j["entries"].is_array())
        throw std::invalid_argument("tensor file: \"entries\" must be an array");
    std::set<std::vector<int>> seen;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("index") || !e.contains("value"))
            throw std::invalid_argument("tensor file: each entry needs \"index\" and \"value\"");
        std::vector<int> idx;
        for (const auto& v : e["index"]) {
            if (!v.is_number_integer())
                throw std::invalid_argument("tensor file: indices must be integers");
            idx.push_back(v.get<int>());
        }
        if (static_cast<int>(idx.size()) != order)
            throw std::invalid_argument("tensor file: index length must equal the order");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("tensor file: duplicate index");
        if (!e["value"].is_number())
            throw std::invalid_argument("tensor file: values must be numbers");
        const double v = e["value"].get<double>();
        if (!std::isfinite(v)) throw std::invalid_argument("tensor file: values must be finite");
        t.set(idx, v);
    }
    return t;
}

Json tensor_to_json(const Tensor& a) {
    Json j;
    j["order"] = a.order();
    j["dim"] = a.dim();
    j["dense"] = a.coeffs();
    return j;
}

Tensor load_tensor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tensor file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("tensor file is not valid JSON: " + std::string(e.what()));
    }
    return tensor_from_json(j);
}

Json to_json(const Witness& w) {
    Json j;
    j["x"] = w.x;
    if (w.t) j["t"] = *w.t;
    j["residual"] = w.residual;
    j["system"] = to_string(w.system);
    return j;
}

Json to_json(const Verdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    j["method"] = v.method;
    j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
    j["budget_used"] = Json{{"starts", v.budget_used.starts}, {"iters", v.budget_used.iters}};
    return j;
}

Json to_json(const EigenPair& p) {
    Json j;
    j["kind"] = to_string(p.kind);
    j["lambda"] = p.lambda;
    j["x"] = p.x;
    j["residual"] = p.residual;
    return j;
}

Json to_json(const TcpSolution& s) {
    Json j;
    j["x"] = s.x;
    j["feas_residual"] = s.feas_residual;
    j["comp_residual"] = s.comp_residual;
    j["method"] = s.method;
    return j;
}

Json to_json(const DivergenceTrace& t) {
    Json j;
    j["points"] = t.points;
    j["multipliers"] = t.multipliers;
    j["q"] = t.q;
    return j;
}

Json to_json(const BoundednessReport& r) {
    Json j;
    j["r0_verdict"] = to_json(r.r0);
    j["solution_count"] = r.solution_count;
    j["max_solution_norm"] = r.max_solution_norm ? Json(*r.max_solution_norm) : Json(nullptr);
    j["bounded_certified"] = r.bounded_certified;
    j["conclusion"] = r.conclusion;
    j["recession_witness"] =
        r.recession_witness ? to_json(*r.recession_witness) : Json(nullptr);
    return j;
}

Json to_json(const AuditViolation& v) {
    Json j;
    j["rule"] = v.rule;
    j["detail"] = v.detail;
    return j;
}

}  // namespace tcpkit
