#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcorr::cli {

/// Exit codes: 0 ok, 1 a gating relation is violated (check), 2 usage,
/// format or validation error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcorr::cli
