#pragma once

#include <string>

#include <json.hpp>

#include "tcpkit/classes.hpp"
#include "tcpkit/spectra.hpp"
#include "tcpkit/tcp.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// All reports use key-order-preserving JSON so identical inputs serialize
/// to identical bytes.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Tensor file format:
///   {"order": m, "dim": n, "entries": [{"index": [i1..im], "value": v}, ...]}
/// with 1-based indices and unspecified entries zero (duplicates are an
/// error), or {"order": m, "dim": n, "dense": [...]} with the full row-major
/// coefficient array.
Tensor tensor_from_json(const Json& j);
Json tensor_to_json(const Tensor& a);
Tensor load_tensor_file(const std::string& path);

Json to_json(const Witness& w);
Json to_json(const Verdict& v);
Json to_json(const EigenPair& p);
Json to_json(const TcpSolution& s);
Json to_json(const DivergenceTrace& t);
Json to_json(const BoundednessReport& r);
Json to_json(const AuditViolation& v);

}  // namespace tcpkit
