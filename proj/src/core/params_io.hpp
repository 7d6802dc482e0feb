#pragma once

#include <string>

#include "core/embed.hpp"

namespace driftbench {

// Text parameter format:
//   DBPARAMS1 din=<int> demb=<int> hidden=<int> bias=<0|1>
// followed by comma-separated rows: W1 (one line per row), b1 (if bias),
// W2 rows and b2 (only when hidden > 0). Same number formatting rules as the
// episode format.
std::string params_to_string(const EmbeddingParams& params);
EmbeddingParams params_from_string(const std::string& text, const std::string& name);

void write_params(const EmbeddingParams& params, const std::string& path);
EmbeddingParams load_params(const std::string& path);

}  // namespace driftbench
