#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "lcc/audit.hpp"
#include "lcc/sim.hpp"

namespace lcc::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HSpec {
    enum class Kind { matmul, elementwise, strassen };
    Kind kind = Kind::elementwise;
    std::size_t degree = 2;  // elementwise
    std::size_t dim = 4;     // strassen: full matrix dimension
};

/// Mirrors the run config file schema.
struct RunConfig {
    std::uint64_t q = 2147483647ULL;  // 2^31 - 1
    std::size_t workers = 0;          // N
    std::size_t blocks = 0;           // K
    std::size_t sources = 1;          // S
    std::size_t collusion = 0;        // X
    std::size_t byzantine = 0;        // A
    std::size_t stragglers = 0;       // B
    std::size_t a = 1, b = 1;
    HSpec h;
    AdversaryPlan adversary;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::optional<std::string> transcript_out;
};

RunConfig load_run_config(const std::string& path);

struct CommonOpts {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out_csv;
    bool json = false;
    bool expect_failure = false;
    std::size_t threads = 1;
};

int cmd_run(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
            std::ostream& err);
int cmd_strassen_demo(std::size_t dim, std::uint64_t seed, std::ostream& out,
                      std::ostream& err);
int cmd_audit(const std::string& mode, const std::string& config_path,
              const CommonOpts& opts, std::ostream& out, std::ostream& err);
int cmd_costs(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
              std::ostream& err);
int cmd_sweep(const std::string& config_path, const CommonOpts& opts, std::ostream& out,
              std::ostream& err);

} // namespace lcc::cli
