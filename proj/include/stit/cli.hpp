#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stit::cli {

// Runs one command. Exit codes: 0 success, 1 negative verdict (false, unsat,
// violation, not found), 2 usage or I/O error. Deterministic output; --json
// renders the result as a single JSON document.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace stit::cli
