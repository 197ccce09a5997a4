#pragma once

#include <string>
#include <vector>

namespace crit::cli {

/// Batch front door: `crit <classify|exact|simulate|verify> --config PATH
/// [--seed U64] [--out DIR] [--format csv|json] [--no-timestamp] [--threads N]`.
/// Returns 0 on success, 2 on validation errors, 3 on failed verify criteria.
int run(std::vector<std::string> args);

} // namespace crit::cli
