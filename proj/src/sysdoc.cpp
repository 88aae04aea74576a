#include "cjsr/sysdoc.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cjsr {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "cjsr-system/1";

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DocumentError(where + ": " + what);
}

}  // namespace

ConstrainedSystem parse_system_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError("byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail("$", "document must be a JSON object");
  if (!doc.contains("format") || !doc["format"].is_string())
    fail("format", "missing format tag");
  if (doc["format"].get<std::string>() != kFormatTag)
    fail("format", "unsupported format '" + doc["format"].get<std::string>() +
                       "', expected '" + kFormatTag + "'");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_unsigned())
    fail("dimension", "missing or non-positive state dimension");
  const std::size_t n = doc["dimension"].get<std::size_t>();
  if (n == 0) fail("dimension", "state dimension must be positive");

  if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty())
    fail("matrices", "need a non-empty array of matrices");
  std::vector<Matrix> matrices;
  for (std::size_t m = 0; m < doc["matrices"].size(); ++m) {
    const json& jm = doc["matrices"][m];
    const std::string where = "matrices[" + std::to_string(m) + "]";
    if (!jm.is_array() || jm.size() != n) fail(where, "expected " + std::to_string(n) + " rows");
    Matrix mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!jm[i].is_array() || jm[i].size() != n)
        fail(where + "[" + std::to_string(i) + "]",
             "expected " + std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) {
        if (!jm[i][j].is_number())
          fail(where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
               "entries must be numbers");
        mat(i, j) = jm[i][j].get<double>();
      }
    }
    if (!mat.all_finite()) fail(where, "entries must be finite");
    matrices.push_back(std::move(mat));
  }

  if (!doc.contains("automaton") || !doc["automaton"].is_object())
    fail("automaton", "missing automaton object");
  const json& ja = doc["automaton"];
  if (!ja.contains("nodes") || !ja["nodes"].is_number_unsigned() ||
      ja["nodes"].get<std::size_t>() == 0)
    fail("automaton.nodes", "need a positive node count");
  const std::size_t nodes = ja["nodes"].get<std::size_t>();
  if (!ja.contains("arcs") || !ja["arcs"].is_array() || ja["arcs"].empty())
    fail("automaton.arcs", "need a non-empty arc array");
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < ja["arcs"].size(); ++i) {
    const json& je = ja["arcs"][i];
    const std::string where = "automaton.arcs[" + std::to_string(i) + "]";
    if (!je.is_array() || je.size() != 3) fail(where, "expected [source, target, label]");
    for (std::size_t f = 0; f < 3; ++f)
      if (!je[f].is_number_unsigned() || je[f].get<std::size_t>() == 0)
        fail(where, "entries are 1-indexed positive integers");
    const std::size_t src = je[0].get<std::size_t>();
    const std::size_t dst = je[1].get<std::size_t>();
    const std::size_t lbl = je[2].get<std::size_t>();
    if (src > nodes || dst > nodes)
      fail(where, "node out of range [1, " + std::to_string(nodes) + "]");
    if (lbl > matrices.size())
      fail(where, "label " + std::to_string(lbl) + " out of range [1, " +
                      std::to_string(matrices.size()) + "]");
    arcs.push_back(Arc{src - 1, dst - 1, lbl - 1});
  }

  try {
    ConstrainedSystem sys(std::move(matrices), Automaton(nodes, std::move(arcs)));
    if (doc.contains("name") && doc["name"].is_string())
      sys.set_name(doc["name"].get<std::string>());
    return sys;
  } catch (const Error& e) {
    throw DocumentError(std::string("automaton: ") + e.what());
  }
}

ConstrainedSystem load_system_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system_document(buf.str());
  } catch (const DocumentError& e) {
    throw DocumentError(path + ": " + e.what());
  }
}

std::string emit_system_document(const ConstrainedSystem& sys) {
  json doc;
  doc["format"] = kFormatTag;
  if (!sys.name().empty()) doc["name"] = sys.name();
  doc["dimension"] = sys.dimension();
  json jm = json::array();
  for (const Matrix& m : sys.matrices()) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    jm.push_back(std::move(rows));
  }
  doc["matrices"] = std::move(jm);
  json ja;
  ja["nodes"] = sys.automaton().node_count();
  json arcs = json::array();
  for (const Arc& a : sys.automaton().arcs())
    arcs.push_back(json::array({a.source + 1, a.target + 1, a.label + 1}));
  ja["arcs"] = std::move(arcs);
  doc["automaton"] = std::move(ja);
  return doc.dump(2) + "\n";
}

void save_system_document(const ConstrainedSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DocumentError(path + ": cannot open file for writing");
  out << emit_system_document(sys);
}

}  // namespace cjsr
