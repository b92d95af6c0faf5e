#pragma once

#include <json.hpp>

#include <string>

#include "vinolab/counting.hpp"
#include "vinolab/extraction.hpp"
#include "vinolab/ground_set.hpp"
#include "vinolab/sumproduct.hpp"
#include "vinolab/sumsets.hpp"

namespace vinolab {

using Json = nlohmann::json;

// Canonical dump: object keys sorted, arrays in order, floats with 12
// significant digits. Identical documents serialize to identical bytes.
std::string dump_canonical(const Json& j, int indent = 2);

// Set files: {"elements": ["<decimal>", ...]}. Decimal strings keep big
// integers exact; integer tokens are accepted, float tokens are rejected.
GroundSet parse_set_json(const Json& j);
GroundSet read_set_file(const std::string& path);
void write_set_file(const std::string& path, const GroundSet& a);

Json ground_set_to_json(const GroundSet& a);
Json stats_to_json(const VinogradovStats& stats);
Json quotient_to_json(const QuotientStats& q);
Json vector_set_to_json(const VectorSet& v);
Json rational_set_to_json(const RationalSet& r);
Json trace_to_json(const ExtractionTrace& trace);
Json sumproduct_to_json(const SumProductReport& report);
Json absmain_to_json(const AbsMainReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace vinolab
