#pragma once

#include <ostream>

#include <json.hpp>

#include "qexp/commands.hpp"

namespace qexp::cli {

// Metadata as `# key = value` comment lines, then header and rows (%.17g).
void write_csv(std::ostream& out, const Table& t, const nlohmann::json& meta);

// {"meta": meta, "data": {column: [values]}}
void write_json(std::ostream& out, const Table& t, const nlohmann::json& meta);

}  // namespace qexp::cli
