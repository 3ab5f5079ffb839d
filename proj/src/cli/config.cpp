#include "cli/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace guided::cli {

namespace {

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad number '" + s + "' in " + what);
  }
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad integer '" + s + "' in " + what);
  }
}

}  // namespace

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() != 3) throw Error(ErrorKind::Parse, "sweep must look like start:stop:step");
  const double a = to_double(parts[0], "sweep");
  const double b = to_double(parts[1], "sweep");
  const double step = to_double(parts[2], "sweep");
  if (!(step > 0) || b < a) throw Error(ErrorKind::OutOfRange, "sweep needs step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw Error(ErrorKind::OutOfRange, "sweep has too many points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::vector<Index> parse_nodes(const std::string& spec) {
  std::vector<Index> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    long lo = 0;
    long hi = 0;
    if (dash == std::string::npos) {
      lo = hi = to_long(item, "node list");
    } else {
      lo = to_long(item.substr(0, dash), "node list");
      hi = to_long(item.substr(dash + 1), "node list");
    }
    if (lo < 1 || hi < lo) throw Error(ErrorKind::OutOfRange, "node ids are 1-based: '" + item + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(static_cast<Index>(v - 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Json load_config_file(const std::string& path) {
  try {
    Json j = Json::parse(read_file(path));
    if (!j.is_object()) throw Error(ErrorKind::Parse, "config root must be an object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("GUIDED_RECON_THREADS"); env && *env) {
    const long v = to_long(env, "GUIDED_RECON_THREADS");
    if (v < 1) throw Error(ErrorKind::OutOfRange, "GUIDED_RECON_THREADS must be >= 1");
    return static_cast<int>(v);
  }
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, n); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace guided::cli
