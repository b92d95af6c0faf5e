#include "vinolab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace vinolab {

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
  std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(item, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_float(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_canonical(const Json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

GroundSet parse_set_json(const Json& j) {
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    throw ConfigError("set file must be an object with an \"elements\" array");
  std::vector<Int> raw;
  for (const auto& item : j["elements"]) {
    if (item.is_string()) {
      raw.push_back(parse_int(item.get<std::string>()));
    } else if (item.is_number_integer() || item.is_number_unsigned()) {
      raw.push_back(parse_int(item.dump()));
    } else {
      throw ConfigError("set elements must be decimal strings (floats lose precision)");
    }
  }
  return make_ground_set(std::move(raw));
}

GroundSet read_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return parse_set_json(j);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_set_file(const std::string& path, const GroundSet& a) {
  write_text_file(path, dump_canonical(ground_set_to_json(a)));
}

Json ground_set_to_json(const GroundSet& a) {
  Json elements = Json::array();
  for (const auto& v : a.elements()) elements.push_back(to_decimal(v));
  return Json{{"elements", elements}};
}

Json stats_to_json(const VinogradovStats& stats) {
  Json j{{"s", stats.s},
         {"k", stats.k},
         {"N", to_decimal(stats.n_elements)},
         {"J", to_decimal(stats.j)},
         {"rep_sup", to_decimal(stats.rep_sup)},
         {"diag", to_decimal(stats.diagonal)},
         {"sumset_size", to_decimal(stats.sumset_size)},
         {"lambda_emp", stats.lambda_emp}};
  if (stats.alpha) {
    j["alpha"] = Json{{"num", to_decimal(Int(stats.alpha->get_num()))},
                      {"den", to_decimal(Int(stats.alpha->get_den()))}};
  }
  return j;
}

Json quotient_to_json(const QuotientStats& q) {
  Json d = Json::array();
  for (const auto& [quot, count] : q.d_table)
    d.push_back(Json{{"q", to_decimal(quot)}, {"d", to_decimal(count)}});
  return Json{{"d_table", d},
              {"M", to_decimal(q.multiplicative_energy)},
              {"support", to_decimal(q.support)}};
}

Json vector_set_to_json(const VectorSet& v) {
  Json members = Json::array();
  for (const auto& key : v.members()) members.push_back(key.to_decimal_strings());
  return Json{{"dimension", v.dimension()}, {"members", members}};
}

Json rational_set_to_json(const RationalSet& r) {
  Json members = Json::array();
  for (const auto& q : r.members) members.push_back(to_decimal(q));
  return Json{{"members", members}};
}

namespace {

Json record_side(const std::optional<std::string>& exact, const std::optional<double>& log10v) {
  if (exact) return Json(*exact);
  if (log10v) return Json{{"log10", *log10v}};
  return Json(nullptr);
}

Json int_list(const std::vector<Int>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_decimal(v));
  return out;
}

}  // namespace

Json trace_to_json(const ExtractionTrace& trace) {
  Json records = Json::array();
  for (const auto& r : trace.records) {
    Json rec{{"stage", r.stage},   {"name", r.name}, {"relation", r.relation},
             {"kind", r.kind},     {"flag", r.holds ? "holds" : "fails"},
             {"lhs", record_side(r.lhs_exact, r.lhs_log10)},
             {"rhs", record_side(r.rhs_exact, r.rhs_log10)}};
    if (!r.witness.empty()) rec["witness"] = r.witness;
    records.push_back(std::move(rec));
  }
  Json certs = Json::array();
  for (const auto& c : trace.certifications) {
    certs.push_back(Json{{"l", c.l},
                         {"lfold_size", to_decimal(c.lfold_size)},
                         {"lhs_log10", c.lhs_log10},
                         {"rhs_log10", c.rhs_log10},
                         {"flag", c.holds ? "holds" : "fails"}});
  }
  Json j{{"params",
          Json{{"s", trace.params.s},
               {"k", trace.params.k},
               {"epsilon", to_decimal(trace.params.epsilon)},
               {"delta", to_decimal(trace.params.delta)},
               {"l_list", trace.params.l_list}}},
         {"stats", stats_to_json(trace.stats)},
         {"hypothesis", Json{{"flag", trace.hypothesis.holds ? "holds" : "fails"},
                             {"lhs_log10", trace.hypothesis.lhs_log10},
                             {"rhs_log10", trace.hypothesis.rhs_log10},
                             {"eps_threshold", trace.hypothesis.eps_threshold}}},
         {"stages", records},
         {"certifications", certs},
         {"witnesses", Json{{"x", int_list(trace.pivot_x)},
                            {"z", int_list(trace.z_pick)},
                            {"w", int_list(trace.w_pick)}}},
         {"completed", trace.completed()},
         {"all_asserts_hold", trace.all_asserts_hold()}};
  if (trace.a_prime) j["aprime"] = ground_set_to_json(*trace.a_prime)["elements"];
  if (trace.failed_stage) {
    j["failure"] = Json{{"stage", *trace.failed_stage},
                        {"message", trace.failure_message.value_or("")}};
  }
  return j;
}

Json sumproduct_to_json(const SumProductReport& r) {
  return Json{{"s", r.s},
              {"k", r.k},
              {"u", r.u},
              {"epsilon", to_decimal(r.epsilon)},
              {"sign_branch", r.sign_branch},
              {"working_size", to_decimal(r.working_size)},
              {"quotient_support", to_decimal(r.quotient_support)},
              {"mult_energy", to_decimal(r.mult_energy)},
              {"sumset_2u", to_decimal(r.sumset_2u)},
              {"level", r.level},
              {"level_families", to_decimal(r.level_families)},
              {"level_mass", to_decimal(r.level_mass)},
              {"log10_lhs", r.lhs_log10},
              {"log10_rhs", r.rhs_log10},
              {"margin", r.lhs_log10 - r.rhs_log10},
              {"measured_constant", r.measured_constant},
              {"chain",
               Json{{"quotient_energy", r.chain_quotient_energy},
                    {"pigeonhole", r.chain_pigeonhole},
                    {"level_cap", r.chain_level_cap},
                    {"line_product", r.chain_line_product},
                    {"line_disjoint", r.chain_line_disjoint},
                    {"line_cs", r.chain_line_cs},
                    {"assembled", r.chain_assembled}}},
              {"quotient_branch_done", r.quotient_branch_done},
              {"delta_s", to_decimal(r.delta_s)},
              {"dyadic_floor_holds", r.dyadic_floor_holds},
              {"u_note", "u defaults to s; the final display admits k <= u <= k(k+1)/2"}};
}

Json absmain_to_json(const AbsMainReport& r) {
  return Json{{"J", to_decimal(r.j)},
              {"alpha_abs_log10", r.alpha_abs_log10},
              {"hyp_eps_min", r.hyp_eps_min},
              {"lfold_sumset", to_decimal(r.lfold_sumset)},
              {"lfold_product", to_decimal(r.lfold_product)},
              {"product", to_decimal(r.product)},
              {"dichotomy_holds", r.dichotomy_holds},
              {"plunnecke_chain", r.plunnecke_chain}};
}

}  // namespace vinolab
