#pragma once

#include <string>
#include <vector>

namespace gemcap::cli {

/// Entry point behind main(). Exit codes: 0 success, 1 usage error,
/// 2 runtime error, 3 acceptance-check failure (grad-check).
int dispatch(int argc, const char* const* argv);

/// Convenience overload for in-process tests.
int dispatch(const std::vector<std::string>& args);

} // namespace gemcap::cli
