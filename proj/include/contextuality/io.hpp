#pragma once

// Ingestion of experiment data (counts, probability tables, or expectations,
// one payload kind per document) and deterministic rendering of analysis
// reports as text or JSON. Values cross the boundary as decimal strings and
// are parsed exactly; reports carry both exact fractions and fixed-precision
// decimals.

#include "contextuality/core.hpp"
#include "contextuality/measures.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace contextuality {

enum class PayloadKind { Counts, Table, Expectations };

struct ContextPayload {
  PayloadKind kind = PayloadKind::Table;
  std::array<Integer, 4> counts{};       // Counts, order pp pm mp mm
  ContextTable table;                    // Table
  ContextExpectations expectations;      // Expectations

  ContextExpectations to_expectations(const std::string& where) const {
    switch (kind) {
      case PayloadKind::Expectations:
        return expectations;
      case PayloadKind::Table:
        return expectations_from_table(table, where);
      case PayloadKind::Counts: {
        Integer total = counts[0] + counts[1] + counts[2] + counts[3];
        if (total == 0) throw validation_error(where + ".counts: total is zero");
        ContextTable t{Rational(counts[0], total), Rational(counts[1], total),
                       Rational(counts[2], total), Rational(counts[3], total)};
        return expectations_from_table(t, where);
      }
    }
    throw validation_error(where + ": unknown payload kind");
  }
};

struct InputDocument {
  SystemKind kind = SystemKind::Bell;
  PayloadKind payload_kind = PayloadKind::Table;
  std::map<std::string, ContextPayload> contexts;
  nlohmann::ordered_json labels;  // optional, informational only
};

namespace detail {

inline const std::vector<std::string>& context_keys(SystemKind kind) {
  static const std::vector<std::string> bell = {"a1b1", "a1b2", "a2b1", "a2b2"};
  static const std::vector<std::string> lg = {"xy", "xz", "yz"};
  return kind == SystemKind::Bell ? bell : lg;
}

inline Rational decimal_field(const nlohmann::json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.contains(key)) throw validation_error(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_string())
    throw validation_error(where + "." + key + ": must be a decimal string");
  try {
    return parse_decimal(v.get<std::string>());
  } catch (const validation_error& e) {
    throw validation_error(where + "." + key + ": " + e.what());
  }
}

inline Integer count_field(const nlohmann::json& obj, const std::string& key,
                           const std::string& where) {
  if (!obj.contains(key)) throw validation_error(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw validation_error(where + "." + key + ": must be an integer");
  const long long n = v.get<long long>();
  if (n < 0) throw validation_error(where + "." + key + ": negative count");
  return Integer(n);
}

// Expected single labels of each LG context, checked when given explicitly.
inline std::pair<std::string, std::string> lg_singles(const std::string& context) {
  if (context == "xy") return {"x12", "y12"};
  if (context == "xz") return {"x13", "z13"};
  return {"y23", "z23"};
}

}  // namespace detail

inline InputDocument parse_input(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw validation_error("input root must be an object");
  if (!root.contains("kind") || !root.at("kind").is_string())
    throw validation_error("missing \"kind\" (\"bell\" or \"lg\")");
  const std::string kind_str = root.at("kind").get<std::string>();

  InputDocument doc;
  if (kind_str == "bell")
    doc.kind = SystemKind::Bell;
  else if (kind_str == "lg")
    doc.kind = SystemKind::LG;
  else
    throw validation_error("kind must be \"bell\" or \"lg\", got \"" + kind_str + "\"");
  if (root.contains("labels")) doc.labels = root.at("labels");

  if (!root.contains("contexts") || !root.at("contexts").is_object())
    throw validation_error("missing \"contexts\" object");
  const auto& contexts = root.at("contexts");
  const auto& keys = detail::context_keys(doc.kind);
  for (const auto& key : keys)
    if (!contexts.contains(key))
      throw validation_error("contexts: missing context '" + key + "'");
  for (const auto& [key, value] : contexts.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw validation_error("contexts: unexpected context '" + key + "'");
    (void)value;
  }

  bool first = true;
  for (const auto& key : keys) {
    const std::string where = "contexts." + key;
    const auto& ctx = contexts.at(key);
    if (!ctx.is_object()) throw validation_error(where + ": must be an object");

    if (doc.kind == SystemKind::LG) {
      const auto expected = detail::lg_singles(key);
      if (ctx.contains("s1") && ctx.at("s1").get<std::string>() != expected.first)
        throw validation_error(where + ".s1: expected \"" + expected.first + "\"");
      if (ctx.contains("s2") && ctx.at("s2").get<std::string>() != expected.second)
        throw validation_error(where + ".s2: expected \"" + expected.second + "\"");
    }

    ContextPayload payload;
    int found = 0;
    if (ctx.contains("counts")) {
      payload.kind = PayloadKind::Counts;
      ++found;
      const auto& c = ctx.at("counts");
      payload.counts = {detail::count_field(c, "pp", where + ".counts"),
                        detail::count_field(c, "pm", where + ".counts"),
                        detail::count_field(c, "mp", where + ".counts"),
                        detail::count_field(c, "mm", where + ".counts")};
      if (payload.counts[0] + payload.counts[1] + payload.counts[2] +
              payload.counts[3] ==
          0)
        throw validation_error(where + ".counts: total is zero");
    }
    if (ctx.contains("table")) {
      payload.kind = PayloadKind::Table;
      ++found;
      const auto& t = ctx.at("table");
      payload.table = {detail::decimal_field(t, "pp", where + ".table"),
                       detail::decimal_field(t, "pm", where + ".table"),
                       detail::decimal_field(t, "mp", where + ".table"),
                       detail::decimal_field(t, "mm", where + ".table")};
      validate_table(payload.table, where + ".table");
    }
    if (ctx.contains("expectations")) {
      payload.kind = PayloadKind::Expectations;
      ++found;
      const auto& e = ctx.at("expectations");
      payload.expectations = {detail::decimal_field(e, "ab", where + ".expectations"),
                              detail::decimal_field(e, "a", where + ".expectations"),
                              detail::decimal_field(e, "b", where + ".expectations")};
      if (!validate_context(payload.expectations))
        throw validation_error(where + ".expectations: no joint table exists for these values");
    }
    if (found != 1)
      throw validation_error(where +
                             ": exactly one of counts/table/expectations required");
    if (first) {
      doc.payload_kind = payload.kind;
      first = false;
    } else if (payload.kind != doc.payload_kind) {
      throw validation_error("contexts: mixed payload kinds");
    }
    doc.contexts.emplace(key, std::move(payload));
  }
  return doc;
}

inline BellObservables bell_observables(const InputDocument& doc) {
  if (doc.kind != SystemKind::Bell)
    throw validation_error("document does not describe a bell system");
  BellObservables o;
  const char* names[2][2] = {{"a1b1", "a1b2"}, {"a2b1", "a2b2"}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const std::string key = names[i][j];
      ContextExpectations e = doc.contexts.at(key).to_expectations("contexts." + key);
      o.ab[i][j] = e.ab;
      o.a[i][j] = e.a;
      o.b[i][j] = e.b;
    }
  return o;
}

inline LGObservables lg_observables(const InputDocument& doc) {
  if (doc.kind != SystemKind::LG)
    throw validation_error("document does not describe an lg system");
  ContextExpectations xy = doc.contexts.at("xy").to_expectations("contexts.xy");
  ContextExpectations xz = doc.contexts.at("xz").to_expectations("contexts.xz");
  ContextExpectations yz = doc.contexts.at("yz").to_expectations("contexts.yz");
  return {xy.ab, xz.ab, yz.ab, xy.a, xz.a, xy.b, yz.a, xz.b, yz.b};
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

enum class ReportFormat { Text, Json };

namespace detail {

inline nlohmann::ordered_json value_json(const Rational& v, int precision) {
  return {{"fraction", to_fraction_string(v)},
          {"decimal", to_decimal_string(v, precision)}};
}

inline const std::array<const char*, 4> kChshLabels = {
    "+ab11 +ab12 +ab21 -ab22", "+ab11 +ab12 -ab21 +ab22",
    "+ab11 -ab12 +ab21 +ab22", "-ab11 +ab12 +ab21 +ab22"};

inline const std::array<const char*, 4> kSzLabels = {"+xy +yz -xz", "+xy -yz +xz",
                                                     "-xy +yz +xz", "-xy -yz -xz"};

inline const std::array<Rational, 4>& bell_or_sz_lhs(const BellReport& r) {
  return r.chsh_lhs;
}
inline const std::array<Rational, 4>& bell_or_sz_lhs(const LGReport& r) {
  return r.sz_lhs;
}

template <typename Report>
std::string report_text(const Report& r, bool bell, int precision) {
  auto dec = [&](const Rational& v) { return to_decimal_string(v, precision); };
  std::ostringstream out;
  out << "system: " << (bell ? "bell" : "lg") << "\n";
  out << "Delta0: " << dec(r.delta0) << " (= " << to_fraction_string(r.delta0) << ")\n";
  if constexpr (std::is_same_v<Report, BellReport>)
    out << "Delta_CHSH: " << dec(r.delta_chsh) << " (= "
        << to_fraction_string(r.delta_chsh) << ")\n";
  else
    out << "Delta_SZ: " << dec(r.delta_sz) << " (= " << to_fraction_string(r.delta_sz)
        << ")\n";
  out << "Delta_min: " << dec(r.delta_min) << " (= " << to_fraction_string(r.delta_min)
      << ")\n";
  out << "contextuality degree: " << dec(r.degree) << " (= "
      << to_fraction_string(r.degree) << ")\n";
  out << "marginal selectivity: " << (r.marginal_selectivity ? "holds" : "violated")
      << "\n";
  out << "coupling cost range: [" << dec(r.delta_lower) << ", " << dec(r.delta_upper)
      << "]\n";
  const auto& labels = bell ? kChshLabels : kSzLabels;
  const auto& lhs = bell_or_sz_lhs(r);
  out << (bell ? "CHSH combinations vs bound 2(1+Delta0) = "
               : "Suppes-Zanotti combinations vs bound 1+2*Delta0 = ")
      << dec(r.bound) << ":\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const bool satisfied = lhs[i] <= r.bound;
    out << "  " << (bell ? "|" : "") << labels[i] << (bell ? "|" : "") << " = "
        << dec(lhs[i]) << "  " << (satisfied ? "ok" : "VIOLATED") << "\n";
  }
  if (r.degree == 0)
    out << "verdict: no contextuality (degree = 0)\n";
  else
    out << "verdict: contextual (degree = " << dec(r.degree) << ")\n";
  return out.str();
}

template <typename Report>
std::string report_json(const Report& r, bool bell, int precision) {
  nlohmann::ordered_json j;
  j["system"] = bell ? "bell" : "lg";
  j["delta0"] = value_json(r.delta0, precision);
  if constexpr (std::is_same_v<Report, BellReport>)
    j["delta_chsh"] = value_json(r.delta_chsh, precision);
  else
    j["delta_sz"] = value_json(r.delta_sz, precision);
  j["delta_min"] = value_json(r.delta_min, precision);
  j["degree"] = value_json(r.degree, precision);
  j["marginal_selectivity"] = r.marginal_selectivity;
  j["bound"] = value_json(r.bound, precision);
  const auto& labels = bell ? kChshLabels : kSzLabels;
  const auto& lhs = bell_or_sz_lhs(r);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < 4; ++i)
    rows.push_back({{"combination", labels[i]},
                    {"lhs", value_json(lhs[i], precision)},
                    {"satisfied", lhs[i] <= r.bound}});
  j[bell ? "chsh" : "suppes_zanotti"] = rows;
  j["delta_lower"] = value_json(r.delta_lower, precision);
  j["delta_upper"] = value_json(r.delta_upper, precision);
  return j.dump(2) + "\n";
}

}  // namespace detail

inline std::string serialize_report(const BellReport& r, ReportFormat format,
                                    int precision = 6) {
  return format == ReportFormat::Text ? detail::report_text(r, true, precision)
                                      : detail::report_json(r, true, precision);
}

inline std::string serialize_report(const LGReport& r, ReportFormat format,
                                    int precision = 6) {
  return format == ReportFormat::Text ? detail::report_text(r, false, precision)
                                      : detail::report_json(r, false, precision);
}

}  // namespace contextuality
