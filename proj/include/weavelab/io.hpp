#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "weavelab/frame_system.hpp"
#include "weavelab/gallery.hpp"
#include "weavelab/perturbation.hpp"
#include "weavelab/subspace.hpp"
#include "weavelab/weaving.hpp"

namespace weavelab {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Reads a frame system file; `source` names it in diagnostics. Without
/// functionals the vectors must form a basis and get their biorthogonals.
FrameSystem parse_frame_system(std::string_view text, std::string_view source,
                               std::optional<NormKind> norm_override = std::nullopt);
FrameSystem read_frame_system(const std::string& path,
                              std::optional<NormKind> norm_override = std::nullopt);

Json frame_system_to_json(const FrameSystem& f, bool include_functionals = true);
std::string dump_frame_system(const FrameSystem& f, bool include_functionals = true);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Finite values as numbers, infinities as the strings "inf" / "-inf".
Json number(double v);

Json to_json(const OpNormResult& r);
Json to_json(const Constant& c);
Json to_json(const PatternConstant& c);
Json to_json(const ConstantReport& r);
Json to_json(const WeaveSearchResult& r);
Json to_json(const UncVerdict& v, bool include_records);
Json to_json(const PerturbationBudget& b);
Json to_json(const Certificate& c);
Json to_json(const BasisPerturbationReport& r);
Json to_json(const OperatorPerturbationReport& r);
Json to_json(const PairPerturbationReport& r);
Json to_json(const ReproduceReport& r);
Json to_json(const EquivalenceConstants& e);

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace weavelab
