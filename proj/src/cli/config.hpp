#pragma once

#include "guided/io.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace guided::cli {

/// Parses "start:stop:step" (inclusive stop, within step * 1e-9).
std::vector<double> parse_sweep(const std::string& spec);

/// Comma-separated 1-based node list; "a-b" ranges allowed. Returns 0-based.
std::vector<Index> parse_nodes(const std::string& spec);

Json load_config_file(const std::string& path);

/// Worker count: GUIDED_RECON_THREADS if set, else the flag/config value if
/// positive, else std::thread::hardware_concurrency().
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) on `threads` workers. Exceptions are
/// rethrown on the calling thread (the one with the lowest index wins).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace guided::cli
