#pragma once

namespace robin::cli {

// Batch entry point. Exit codes: 0 success, 2 configuration error,
// 3 numeric failure.
int run(int argc, const char* const* argv);

}  // namespace robin::cli
