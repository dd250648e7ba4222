#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcorr/states.hpp"

namespace qcorr {

/// State file schema:
///   {"dims":[2,2,2], "label":"...", "matrix":[[[re,im],...],...]}   (row-major)
/// or the named-state shorthand
///   {"family":"ghz_plus", "params":{"p":0.3}}
///
/// Malformed input throws FormatError; a well-formed matrix that is not a
/// density operator throws StateValidationError.
MultipartiteState state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const MultipartiteState& s);

MultipartiteState load_state(const std::filesystem::path& path);
void save_state(const MultipartiteState& s, const std::filesystem::path& path);

}  // namespace qcorr
