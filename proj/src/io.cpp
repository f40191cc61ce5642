#include "weavelab/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace weavelab {

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Matrix read_rows(const Json& doc, const char* field, std::size_t dim, std::string_view source) {
  const std::string where = std::string(source) + ": field '" + field + "'";
  const Json& rows = doc.at(field);
  if (!rows.is_array() || rows.empty()) throw InputError(where + " must be a nonempty array");
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const Json& row = rows[j];
    const std::string at = where + " row " + std::to_string(j);
    if (!row.is_array()) throw InputError(at + " is not an array");
    if (row.size() != dim)
      throw InputError(at + " has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (!row[i].is_number())
        throw InputError(at + " entry " + std::to_string(i) + " is not a number");
      const double v = row[i].get<double>();
      if (!std::isfinite(v))
        throw InputError(at + " entry " + std::to_string(i) + " is not finite");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return m;
}

Json matrix_columns(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Json col = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
    out.push_back(std::move(col));
  }
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

}  // namespace

FrameSystem parse_frame_system(std::string_view text, std::string_view source,
                               std::optional<NormKind> norm_override) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string(source) + ": malformed JSON at " + line_col(text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw InputError(std::string(source) + ": top level must be an object");
  for (const char* key : {"dim", "norm", "vectors"})
    if (!doc.contains(key))
      throw InputError(std::string(source) + ": missing field '" + key + "'");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw InputError(std::string(source) + ": field 'dim' must be a positive integer");
  if (!doc["norm"].is_string())
    throw InputError(std::string(source) + ": field 'norm' must be a string");
  const auto dim = static_cast<std::size_t>(doc["dim"].get<long long>());
  NormKind norm = NormKind::parse(doc["norm"].get<std::string>());
  if (norm_override) norm = *norm_override;
  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string())
      throw InputError(std::string(source) + ": field 'label' must be a string");
    label = doc["label"].get<std::string>();
  }
  const NormedSpace space(dim, norm);
  Matrix vectors = read_rows(doc, "vectors", dim, source);
  if (doc.contains("functionals") && !doc["functionals"].is_null()) {
    Matrix functionals = read_rows(doc, "functionals", dim, source);
    if (functionals.cols() != vectors.cols())
      throw InputError(std::string(source) + ": " + std::to_string(vectors.cols()) +
                       " vectors but " + std::to_string(functionals.cols()) + " functionals");
    return FrameSystem(space, std::move(vectors), std::move(functionals), label);
  }
  if (static_cast<std::size_t>(vectors.cols()) != dim)
    throw InputError(std::string(source) + ": without functionals the vectors must form a basis (" +
                     std::to_string(dim) + " vectors expected, got " +
                     std::to_string(vectors.cols()) + ")");
  try {
    return FrameSystem::from_basis(space, std::move(vectors), label);
  } catch (const NotABasis& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
}

FrameSystem read_frame_system(const std::string& path, std::optional<NormKind> norm_override) {
  return parse_frame_system(read_file(path), path, norm_override);
}

Json frame_system_to_json(const FrameSystem& f, bool include_functionals) {
  Json out;
  out["dim"] = f.dim();
  out["norm"] = f.norm().to_string();
  out["label"] = f.label();
  out["vectors"] = matrix_columns(f.vectors());
  if (include_functionals) out["functionals"] = matrix_columns(f.functionals());
  return out;
}

std::string dump_frame_system(const FrameSystem& f, bool include_functionals) {
  return frame_system_to_json(f, include_functionals).dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("write failed for '" + path + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i)
    ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return ss.str();
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const OpNormResult& r) {
  return {{"value", number(r.value)}, {"exactness", to_string(r.exactness)},
          {"witness", vector_json(r.witness)}};
}

Json to_json(const Constant& c) {
  return {{"value", number(c.value)}, {"exactness", to_string(c.exactness)}};
}

Json to_json(const PatternConstant& c) {
  return {{"value", number(c.value)},
          {"exactness", to_string(c.exactness)},
          {"witness", c.witness.to_string()},
          {"mode", to_string(c.mode)}};
}

Json to_json(const ConstantReport& r) {
  Json out;
  out["verdict"] = r.frame.is_frame() ? "approximate_frame" : "not_a_frame";
  out["s_norm"] = to_json(r.frame.s_norm);
  out["s_inv_norm"] = r.frame.s_inv_norm ? to_json(*r.frame.s_inv_norm) : Json(nullptr);
  out["c_frame"] = number(r.frame.c_frame);
  out["c_frame_exactness"] = to_string(r.frame.exactness);
  out["c_suppression"] = r.suppression ? to_json(*r.suppression) : Json(nullptr);
  out["c_unconditional"] = r.unconditional ? to_json(*r.unconditional) : Json(nullptr);
  out["basis_constant"] = r.basis ? to_json(*r.basis) : Json(nullptr);
  return out;
}

Json to_json(const WeaveSearchResult& r) {
  Json out;
  out["worst_pattern"] = r.worst.to_string();
  out["worst_constant"] = number(r.worst_constant);
  out["mode"] = to_string(r.mode);
  out["exactness"] = to_string(r.exactness);
  out["verdict"] = to_string(r.verdict);
  out["evaluations"] = r.evaluations;
  if (r.verdict == WeaveVerdict::NotWoven) out["witness"] = r.worst.to_string();
  if (!r.log.empty()) {
    Json log = Json::array();
    for (const auto& e : r.log)
      log.push_back({{"pattern", e.pattern.to_string()},
                     {"s_norm", number(e.s_norm)},
                     {"s_inv_norm", number(e.s_inv_norm)}});
    out["patterns"] = std::move(log);
  }
  return out;
}

Json to_json(const UncVerdict& v, bool include_records) {
  Json out;
  out["scope"] = v.scope == UncScope::Exhaustive ? "exhaustive" : "sampled";
  out["exactness"] = to_string(v.exactness);
  out["basis0_unconditional"] = number(v.basis0_unconditional);
  out["basis1_unconditional"] = number(v.basis1_unconditional);
  out["max_st_ts_residual"] = number(v.max_st_residual);
  out["max_frame_identity_residual"] = number(v.max_frame_identity_residual);
  out["patterns_tested"] = v.records.size();
  out["all_agree"] = v.all_agree();
  Json conds = Json::object();
  for (std::size_t c = 0; c < 6; ++c) {
    const auto& cond = v.conditions[c];
    if (!cond.evaluated) continue;
    Json j;
    j["holds"] = cond.holds;
    j["constant"] = number(cond.constant);
    j["argmax"] = cond.argmax.to_string();
    j["witness"] = cond.first_failure ? Json(cond.first_failure->to_string()) : Json(nullptr);
    conds[unc_condition_name(c)] = std::move(j);
  }
  out["conditions"] = std::move(conds);
  if (include_records) {
    Json recs = Json::array();
    for (const auto& r : v.records) {
      Json j;
      j["sigma"] = r.sigma.to_string();
      Json per = Json::object();
      for (std::size_t c = 0; c < 6; ++c) {
        if (!v.conditions[c].evaluated) continue;
        per[unc_condition_name(c)] = {{"holds", r.holds[c]}, {"constant", number(r.constant[c])}};
      }
      j["conditions"] = std::move(per);
      if (r.st_residual) j["st_residual"] = number(*r.st_residual);
      if (r.ts_residual) j["ts_residual"] = number(*r.ts_residual);
      recs.push_back(std::move(j));
    }
    out["records"] = std::move(recs);
  }
  return out;
}

Json to_json(const PerturbationBudget& b) {
  return {{"kind", to_string(b.kind)},
          {"bound", number(b.bound)},
          {"actual", number(b.actual)},
          {"satisfied", b.satisfied()}};
}

Json to_json(const Certificate& c) {
  return {{"scope", c.scope == CertificateScope::Exhaustive ? "exhaustive" : "sampled"},
          {"patterns_checked", c.patterns_checked},
          {"all_invertible", c.all_invertible},
          {"claimed", number(c.claimed)},
          {"max_deviation", number(c.max_deviation)},
          {"worst_pattern", c.worst.to_string()},
          {"holds", c.holds}};
}

Json to_json(const EquivalenceConstants& e) {
  return {{"lower", number(e.lower)}, {"upper", number(e.upper)},
          {"exactness", to_string(e.exactness)}};
}

Json to_json(const BasisPerturbationReport& r) {
  Json out;
  out["budget"] = to_json(r.budget);
  out["candidate_is_basis"] = r.candidate_is_basis;
  out["equivalence"] = r.equivalence ? to_json(*r.equivalence) : Json(nullptr);
  out["weaving"] = r.weaving ? to_json(*r.weaving) : Json(nullptr);
  out["all_weavings_bases"] = r.all_weavings_bases ? Json(*r.all_weavings_bases) : Json(nullptr);
  return out;
}

Json to_json(const OperatorPerturbationReport& r) {
  Json out;
  out["budget"] = to_json(r.budget);
  out["suppression"] = to_json(r.suppression);
  out["weaving"] = r.weaving ? to_json(*r.weaving) : Json(nullptr);
  out["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  out["warnings"] = r.warnings;
  return out;
}

Json to_json(const PairPerturbationReport& r) {
  Json out;
  out["budget"] = to_json(r.budget);
  out["weaving"] = r.weaving ? to_json(*r.weaving) : Json(nullptr);
  out["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  return out;
}

Json to_json(const ReproduceReport& r) {
  Json out;
  out["name"] = r.name;
  out["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(number(v));
    rows.push_back(std::move(jr));
  }
  out["rows"] = std::move(rows);
  out["notes"] = r.notes;
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace weavelab
