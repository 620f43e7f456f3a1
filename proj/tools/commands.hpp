#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/errors.hpp"
#include "linkpred/evaluation.hpp"
#include "linkpred/score_io.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred::cli {

// Process exit codes, one per error class.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kIo = 3,
    kParse = 4,
    kBetaTooLarge = 5,
    kDegenerateTruth = 6,  // NoPositives / NoNegatives
    kInvalidParams = 7,
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A required flag is missing or flags contradict each other.
class UsageError : public Error {
public:
    using Error::Error;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// "<cmd>-<16 hex digits>"
std::string run_dir_name(const std::string& cmd, std::uint64_t hash);

/// One compare table row from a score matrix evaluated on truth/candidates.
CompareRow compare_row(const std::string& method, Seconds granule, const Eigen::MatrixXd& scores,
                       const AdjacencySlice& truth, const CandidateSet& cand);

/// Runs one command line. The run directory path is printed to `out`,
/// diagnostics to `err`. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linkpred::cli
