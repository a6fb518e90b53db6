#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kdyn::cli {

/// Exit codes: 0 success, 1 usage error, 2 validation failure,
/// 3 violated certificate or internal inconsistency.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdyn::cli
